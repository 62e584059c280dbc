//! The gate mini-language: `I`, `X`, `H`, `CNOT`, `CZ`, `SWAP`,
//! `CP(theta=1.57,k=4)`, `PERM4(7)`, `XK(k=2,n=3)`, `FILE(path.json)`,
//! composed with `*` (matrix product) and `⊗`/`kron` (tensor product).
//!
//! `⊗` binds tighter than `*`, so `A ⊗ B * C ⊗ D` is (A⊗B)·(C⊗D).
//! Angles accept plain floats and `pi` forms: `pi`, `pi/2`, `0.75pi`.

use std::collections::HashMap;

use crate::cmatrix::{CMatrix, MatrixJson};
use crate::error::{Error, Result};
use crate::operator::UnitaryOperator;
use crate::register::QuditRegister;
use crate::unitary::GateId;

/// A parsed expression: the unitary it denotes, plus the bare gate
/// identifier when the expression is a single catalog atom.
#[derive(Debug, Clone)]
pub struct ParsedGate {
    pub unitary: UnitaryOperator,
    pub gate_id: Option<GateId>,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(f64),
    Star,
    Kron,
    LParen,
    RParen,
    Comma,
    Equals,
    Slash,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse {
        field: "gate expression".into(),
        message: msg.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '⊗' => {
                tokens.push(Token::Kron);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
                // FILE(...) swallows a raw path up to the closing paren
                if matches!(tokens.get(tokens.len().wrapping_sub(2)), Some(Token::Ident(w)) if w == "FILE")
                {
                    let mut path = String::new();
                    while i < chars.len() && chars[i] != ')' {
                        path.push(chars[i]);
                        i += 1;
                    }
                    tokens.push(Token::Ident(path.trim().to_string()));
                }
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            ',' => {
                tokens.push(Token::Comma);
                i += 1;
            }
            '=' => {
                tokens.push(Token::Equals);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            _ if c.is_ascii_digit() || c == '.' || c == '-' || c == '+' => {
                let start = i;
                i += 1;
                while i < chars.len()
                    && (chars[i].is_ascii_digit() || matches!(chars[i], '.' | 'e' | 'E'))
                {
                    if matches!(chars[i], 'e' | 'E')
                        && matches!(chars.get(i + 1), Some('-') | Some('+'))
                    {
                        i += 1;
                    }
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let value = text
                    .parse::<f64>()
                    .map_err(|_| parse_err(format!("bad number '{text}'")))?;
                tokens.push(Token::Number(value));
            }
            _ if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if word == "kron" {
                    tokens.push(Token::Kron);
                } else {
                    tokens.push(Token::Ident(word));
                }
            }
            _ => return Err(parse_err(format!("unexpected character '{c}'"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

struct Operand {
    register: QuditRegister,
    matrix: CMatrix,
    gate_id: Option<GateId>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Token) -> Result<()> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            other => Err(parse_err(format!("expected {t:?}, found {other:?}"))),
        }
    }

    /// number := float | [float] 'pi' ['/' float]
    fn number(&mut self) -> Result<f64> {
        let mut value = match self.next() {
            Some(Token::Number(v)) => v,
            Some(Token::Ident(w)) if w == "pi" => {
                return self.pi_tail(std::f64::consts::PI);
            }
            other => return Err(parse_err(format!("expected a number, found {other:?}"))),
        };
        if matches!(self.peek(), Some(Token::Ident(w)) if w == "pi") {
            self.pos += 1;
            value *= std::f64::consts::PI;
            return self.pi_tail(value);
        }
        if matches!(self.peek(), Some(Token::Slash)) {
            self.pos += 1;
            match self.next() {
                Some(Token::Number(v)) if v != 0.0 => value /= v,
                other => return Err(parse_err(format!("expected a divisor, found {other:?}"))),
            }
        }
        Ok(value)
    }

    fn pi_tail(&mut self, value: f64) -> Result<f64> {
        if matches!(self.peek(), Some(Token::Slash)) {
            self.pos += 1;
            match self.next() {
                Some(Token::Number(v)) if v != 0.0 => Ok(value / v),
                other => Err(parse_err(format!("expected a divisor, found {other:?}"))),
            }
        } else {
            Ok(value)
        }
    }

    fn named_params(&mut self) -> Result<HashMap<String, f64>> {
        self.expect(Token::LParen)?;
        let mut params = HashMap::new();
        loop {
            let name = match self.next() {
                Some(Token::Ident(w)) => w,
                other => {
                    return Err(parse_err(format!(
                        "expected parameter name, found {other:?}"
                    )))
                }
            };
            self.expect(Token::Equals)?;
            let value = self.number()?;
            params.insert(name, value);
            match self.next() {
                Some(Token::Comma) => continue,
                Some(Token::RParen) => break,
                other => return Err(parse_err(format!("expected ',' or ')', found {other:?}"))),
            }
        }
        Ok(params)
    }

    fn gate_atom(&mut self, name: &str) -> Result<Operand> {
        let gate = match name {
            "I" => GateId::Identity,
            "X" => GateId::PauliX,
            "H" => GateId::Hadamard,
            "CNOT" => GateId::Cnot,
            "CZ" => GateId::Cz,
            "SWAP" => GateId::Swap,
            "CP" => {
                let params = self.named_params()?;
                let theta = *params
                    .get("theta")
                    .ok_or_else(|| parse_err("CP needs theta="))?;
                let k = *params.get("k").ok_or_else(|| parse_err("CP needs k="))?;
                if k.fract() != 0.0 || !(1.0..=4.0).contains(&k) {
                    return Err(parse_err(format!("CP index k = {k} outside 1..=4")));
                }
                GateId::ControlledPhase {
                    theta: theta.rem_euclid(std::f64::consts::TAU),
                    k: k as u8,
                }
            }
            "PERM4" => {
                self.expect(Token::LParen)?;
                let idx = self.number()?;
                self.expect(Token::RParen)?;
                if idx.fract() != 0.0 || !(1.0..=24.0).contains(&idx) {
                    return Err(parse_err(format!("PERM4 index {idx} outside 1..=24")));
                }
                GateId::Permutation4(idx as u8)
            }
            "XK" => {
                let params = self.named_params()?;
                let k = *params.get("k").ok_or_else(|| parse_err("XK needs k="))?;
                let n = *params.get("n").ok_or_else(|| parse_err("XK needs n="))?;
                if k.fract() != 0.0 || n.fract() != 0.0 || k < 1.0 || n < k {
                    return Err(parse_err(format!(
                        "XK needs integers 1 <= k <= n, got k={k}, n={n}"
                    )));
                }
                GateId::TensorPauliX {
                    k: k as usize,
                    n: n as usize,
                }
            }
            "FILE" => {
                self.expect(Token::LParen)?;
                let path = match self.next() {
                    Some(Token::Ident(p)) => p,
                    other => return Err(parse_err(format!("expected a path, found {other:?}"))),
                };
                self.expect(Token::RParen)?;
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse {
                    field: format!("FILE({path})"),
                    message: e.to_string(),
                })?;
                let json: MatrixJson = serde_json::from_str(&text).map_err(|e| Error::Parse {
                    field: format!("FILE({path})"),
                    message: e.to_string(),
                })?;
                let register = json.resolve_register()?;
                let matrix = json.to_matrix()?;
                return Ok(Operand {
                    register,
                    matrix,
                    gate_id: None,
                });
            }
            other => return Err(parse_err(format!("unknown gate '{other}'"))),
        };
        Ok(Operand {
            register: gate.register()?,
            matrix: gate.matrix()?,
            gate_id: Some(gate),
        })
    }

    fn atom(&mut self) -> Result<Operand> {
        match self.next() {
            Some(Token::LParen) => {
                let inner = self.product()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Some(Token::Ident(name)) => self.gate_atom(&name),
            other => Err(parse_err(format!("expected a gate, found {other:?}"))),
        }
    }

    /// term := atom (⊗ atom)*
    fn term(&mut self) -> Result<Operand> {
        let mut acc = self.atom()?;
        while matches!(self.peek(), Some(Token::Kron)) {
            self.pos += 1;
            let rhs = self.atom()?;
            let register = acc.register.concat(&rhs.register)?;
            acc = Operand {
                register,
                matrix: acc.matrix.kronecker(&rhs.matrix),
                gate_id: None,
            };
        }
        Ok(acc)
    }

    /// product := term ('*' term)*
    fn product(&mut self) -> Result<Operand> {
        let mut acc = self.term()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.pos += 1;
            let rhs = self.term()?;
            if acc.register != rhs.register {
                return Err(Error::dim(format!(
                    "cannot compose a gate on {} with one on {}",
                    acc.register, rhs.register
                )));
            }
            acc = Operand {
                register: acc.register,
                matrix: acc.matrix * rhs.matrix,
                gate_id: None,
            };
        }
        Ok(acc)
    }
}

/// Parses a gate expression into a unitary.
pub fn parse_gate_expr(src: &str) -> Result<ParsedGate> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(parse_err("empty expression"));
    }
    let mut parser = Parser { tokens, pos: 0 };
    let operand = parser.product()?;
    if parser.pos != parser.tokens.len() {
        return Err(parse_err(format!(
            "trailing input after position {}",
            parser.pos
        )));
    }
    Ok(ParsedGate {
        unitary: UnitaryOperator::new(operand.register, operand.matrix)?,
        gate_id: operand.gate_id,
    })
}
