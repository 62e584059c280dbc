//! JSON wire formats for channels, POVMs, certificates, and reports.

use serde::{Deserialize, Serialize};

use crate::cmatrix::{MatrixJson, RegisterJson};
use crate::error::{Error, Result};
use crate::noise::{ErrorRateReport, NoiseChannel};
use crate::operator::HermitianOperator;
use crate::register::QuditRegister;
use crate::unitary::DistanceEstimate;
use crate::w1::W1Certificate;

/// Channel JSON:
/// `{"kind":"depolarizing","p":0.1,"register":{"n":2,"d":2}}`,
/// `{"kind":"unitary","matrix":{...}}`, or
/// `{"kind":"mixed","terms":[{"p":0.9,"matrix":{...}}, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelJson {
    Depolarizing {
        p: f64,
        register: RegisterJson,
    },
    Unitary {
        matrix: MatrixJson,
    },
    Mixed {
        terms: Vec<MixedTermJson>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixedTermJson {
    pub p: f64,
    pub matrix: MatrixJson,
}

impl ChannelJson {
    pub fn to_channel(&self) -> Result<NoiseChannel> {
        match self {
            ChannelJson::Depolarizing { p, register } => {
                let reg = QuditRegister::new(register.n, register.d)?;
                NoiseChannel::depolarizing(reg, *p)
            }
            ChannelJson::Unitary { matrix } => {
                let reg = matrix.resolve_register()?;
                let u = crate::operator::UnitaryOperator::new(reg, matrix.to_matrix()?)?;
                Ok(NoiseChannel::unitary(&u))
            }
            ChannelJson::Mixed { terms } => {
                if terms.is_empty() {
                    return Err(Error::Parse {
                        field: "terms".into(),
                        message: "mixed channel needs at least one term".into(),
                    });
                }
                let reg = terms[0].matrix.resolve_register()?;
                let parsed = terms
                    .iter()
                    .map(|t| Ok((t.p, t.matrix.to_matrix()?)))
                    .collect::<Result<Vec<_>>>()?;
                NoiseChannel::mixed_unitary(reg, parsed)
            }
        }
    }

    pub fn from_channel(ch: &NoiseChannel) -> Self {
        let reg = ch.register();
        let reg_json = RegisterJson {
            n: reg.num_qudits(),
            d: reg.local_dim(),
        };
        match ch {
            NoiseChannel::Depolarizing { p, .. } => ChannelJson::Depolarizing {
                p: *p,
                register: reg_json,
            },
            NoiseChannel::Unitary { matrix, .. } => ChannelJson::Unitary {
                matrix: MatrixJson::from_matrix(matrix).with_register(reg),
            },
            NoiseChannel::MixedUnitary { terms, .. } => ChannelJson::Mixed {
                terms: terms
                    .iter()
                    .map(|(p, m)| MixedTermJson {
                        p: *p,
                        matrix: MatrixJson::from_matrix(m).with_register(reg),
                    })
                    .collect(),
            },
        }
    }
}

/// POVM JSON: `{"elements":[matrix, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PovmJson {
    pub elements: Vec<MatrixJson>,
}

impl PovmJson {
    pub fn to_povm(&self) -> Result<crate::budget::Povm> {
        if self.elements.is_empty() {
            return Err(Error::Parse {
                field: "elements".into(),
                message: "POVM needs at least one element".into(),
            });
        }
        let reg = self.elements[0].resolve_register()?;
        let elements = self
            .elements
            .iter()
            .map(|m| HermitianOperator::new(reg, m.to_matrix()?))
            .collect::<Result<Vec<_>>>()?;
        crate::budget::Povm::new(elements)
    }

    pub fn from_povm(povm: &crate::budget::Povm) -> Self {
        let reg = povm.register();
        PovmJson {
            elements: povm
                .elements()
                .iter()
                .map(|e| MatrixJson::from_matrix(e.matrix()).with_register(reg))
                .collect(),
        }
    }
}

/// Scenario config JSON: `{"alpha":0.3,"t":5,"theta":0.1}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioJson {
    pub alpha: f64,
    pub t: usize,
    pub theta: f64,
}

/// Certificate JSON: value, bounds, residuals, and the feasible
/// decomposition itself, so a reader can recheck every invariant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub converged: bool,
    pub iterations: usize,
    pub reconstruction_residual: f64,
    pub max_marginal_residual: f64,
    pub coefficients: Vec<f64>,
    pub components: Vec<MatrixJson>,
}

impl CertificateJson {
    pub fn from_certificate(cert: &W1Certificate, x: &HermitianOperator) -> Self {
        let check = crate::w1::verify_certificate(cert, x, 1e-6);
        CertificateJson {
            value: cert.value,
            lower_bound: cert.lower_bound,
            upper_bound: cert.upper_bound,
            converged: cert.converged,
            iterations: cert.iterations,
            reconstruction_residual: check.reconstruction_residual,
            max_marginal_residual: check.max_marginal_residual,
            coefficients: cert.components.iter().map(|(_, c)| *c).collect(),
            components: cert
                .components
                .iter()
                .map(|(h, _)| MatrixJson::from_matrix(h.matrix()).with_register(h.register()))
                .collect(),
        }
    }

    pub fn to_certificate(&self, register: QuditRegister) -> Result<W1Certificate> {
        let components = self
            .components
            .iter()
            .zip(&self.coefficients)
            .map(|(m, &c)| Ok((HermitianOperator::new(register, m.to_matrix()?)?, c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(W1Certificate {
            value: self.value,
            lower_bound: self.lower_bound,
            upper_bound: self.upper_bound,
            components,
            iterations: self.iterations,
            converged: self.converged,
        })
    }
}

/// Distance JSON for the CLI output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistanceJson {
    pub value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub method: crate::unitary::DistanceMethod,
    pub restarts_used: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_state: Option<Vec<[f64; 2]>>,
}

impl DistanceJson {
    pub fn from_estimate(d: &DistanceEstimate) -> Self {
        DistanceJson {
            value: d.value,
            lower_bound: d.lower_bound(),
            upper_bound: d.upper_bound,
            method: d.method,
            restarts_used: d.restarts_used,
            converged: d.converged,
            witness_state: d
                .lower_witness
                .as_ref()
                .map(|(psi, _)| psi.iter().map(|z| [z.re, z.im]).collect()),
        }
    }
}

/// Error-rate JSON for the CLI output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorRateJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<f64>,
    pub bracket_low: f64,
    pub bracket_high: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_bound_mixed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_estimate: Option<f64>,
    pub method: crate::noise::ErrorRateMethod,
    pub circuit_cost_lb: f64,
    pub experiment_cost_lb: f64,
}

impl ErrorRateJson {
    pub fn from_report(r: &ErrorRateReport, n: usize) -> Self {
        let costs = crate::noise::cost_lower_bounds(r.headline(), n);
        ErrorRateJson {
            exact: r.exact,
            bracket_low: r.bracket.0,
            bracket_high: r.bracket.1,
            upper_bound_mixed: r.upper_bound_mixed,
            point_estimate: r.point_estimate,
            method: r.method,
            circuit_cost_lb: costs.circuit_cost_lb,
            experiment_cost_lb: costs.experiment_cost_lb,
        }
    }
}
