//! Entropy, mutual information, quadratic information and the bounds they
//! obey for independent signals.

use serde_json::{json, Value};

use crate::belief::SimplexDist;
use crate::error::{Error, Result};
use crate::structures::FiniteStructure;

/// Slack below which a checked inequality counts as violated.
pub const SLACK_TOL: f64 = 1e-9;
/// Independence tolerance (total variation) required by the checkers.
pub const PRIVATE_TOL: f64 = 1e-9;

/// Shannon entropy in bits, `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> Result<f64> {
    if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::Domain(format!("negative or non-finite probability {bad}")));
    }
    Ok(-p.iter().filter(|x| **x > 0.0).map(|x| x * x.log2()).sum::<f64>())
}

/// `Σ_k q_k (1 - q_k)`.
pub fn quadratic_entropy(p: &[f64]) -> f64 {
    p.iter().map(|x| x * (1.0 - x)).sum()
}

fn entropy_unchecked(p: &[f64]) -> f64 {
    -p.iter().filter(|x| **x > 0.0).map(|x| x * x.log2()).sum::<f64>()
}

/// `H(mean) - E H(q)` in bits.
pub fn mutual_information(mu: &SimplexDist) -> f64 {
    let mean_h: f64 = mu.atoms().iter().map(|(q, w)| w * entropy_unchecked(q)).sum();
    (entropy_unchecked(&mu.mean()) - mean_h).max(0.0)
}

/// `H̄(mean) - E H̄(q)`, which equals `Σ_k Var(q_k)`.
pub fn quadratic_information(mu: &SimplexDist) -> f64 {
    coordinate_variances(mu).iter().sum()
}

fn coordinate_variances(mu: &SimplexDist) -> Vec<f64> {
    let mean = mu.mean();
    (0..mu.states())
        .map(|k| mu.atoms().iter().map(|(q, w)| w * (q[k] - mean[k]).powi(2)).sum())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inequality {
    Superadditivity,
    Binary,
    Quadratic,
}

impl Inequality {
    pub fn name(self) -> &'static str {
        match self {
            Inequality::Superadditivity => "superadditivity",
            Inequality::Binary => "binary",
            Inequality::Quadratic => "quadratic",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfoReport {
    pub inequality: Inequality,
    pub per_agent: Vec<f64>,
    /// Information of the whole signal profile, in the report's units.
    pub joint: f64,
    pub bound: f64,
    /// `bound - Σ per_agent`.
    pub slack: f64,
    /// Per-state slacks `p_k (1 - p_k) - Σ_i Var(q_{i,k})` (quadratic bound only).
    pub coordinate_slacks: Option<Vec<f64>>,
}

impl InfoReport {
    pub fn units(&self) -> &'static str {
        match self.inequality {
            Inequality::Quadratic => "quadratic",
            _ => "bits",
        }
    }

    pub fn sum(&self) -> f64 {
        self.per_agent.iter().sum()
    }

    pub fn holds(&self) -> bool {
        self.slack >= -SLACK_TOL && self.coordinate_slacks.iter().flatten().all(|s| *s >= -SLACK_TOL)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "per_agent": self.per_agent,
            "joint": self.joint,
            "bound": self.bound,
            "slack": self.slack,
            "inequality": self.inequality.name(),
            "units": self.units(),
            "holds": self.holds(),
        });
        if let Some(c) = &self.coordinate_slacks {
            v["coordinate_slacks"] = json!(c);
        }
        v
    }
}

fn require_private(s: &FiniteStructure) -> Result<()> {
    if !s.is_private_private(PRIVATE_TOL) {
        return Err(Error::Precondition(
            "signals are not independent; the bound applies only to private private structures".into(),
        ));
    }
    Ok(())
}

fn per_agent(s: &FiniteStructure, f: impl Fn(&SimplexDist) -> f64) -> Result<Vec<f64>> {
    (0..s.agents()).map(|i| s.posterior_dist(i).map(|d| f(&d))).collect()
}

/// `Σ_i I(ω; s_i) ≤ I(ω; s_1, …, s_n)`.
pub fn check_superadditivity(s: &FiniteStructure) -> Result<InfoReport> {
    require_private(s)?;
    let per = per_agent(s, mutual_information)?;
    let joint = mutual_information(&s.profile_posterior_dist());
    Ok(InfoReport {
        inequality: Inequality::Superadditivity,
        slack: joint - per.iter().sum::<f64>(),
        per_agent: per,
        joint,
        bound: joint,
        coordinate_slacks: None,
    })
}

/// `Σ_i I_i ≤ H(p) - (ln 2 / 8) Σ_{i<j} I_i I_j` for a binary state.
pub fn check_binary_strengthening(s: &FiniteStructure) -> Result<InfoReport> {
    if s.states() != 2 {
        return Err(Error::Domain(format!("binary bound needs m = 2, got m = {}", s.states())));
    }
    require_private(s)?;
    let per = per_agent(s, mutual_information)?;
    let mut cross = 0.0;
    for i in 0..per.len() {
        for j in i + 1..per.len() {
            cross += per[i] * per[j];
        }
    }
    let bound = entropy_unchecked(&s.prior()) - std::f64::consts::LN_2 / 8.0 * cross;
    Ok(InfoReport {
        inequality: Inequality::Binary,
        slack: bound - per.iter().sum::<f64>(),
        joint: mutual_information(&s.profile_posterior_dist()),
        per_agent: per,
        bound,
        coordinate_slacks: None,
    })
}

/// `Σ_i Ī_i ≤ H̄(p)`, checked in total and for every state separately.
pub fn check_quadratic_bound(s: &FiniteStructure) -> Result<InfoReport> {
    require_private(s)?;
    let prior = s.prior();
    let mut coord = prior.iter().map(|p| p * (1.0 - p)).collect::<Vec<f64>>();
    let mut per = Vec::with_capacity(s.agents());
    for i in 0..s.agents() {
        let v = coordinate_variances(&s.posterior_dist(i)?);
        for (c, x) in coord.iter_mut().zip(&v) {
            *c -= x;
        }
        per.push(v.iter().sum());
    }
    let bound = quadratic_entropy(&prior);
    Ok(InfoReport {
        inequality: Inequality::Quadratic,
        slack: bound - per.iter().sum::<f64>(),
        joint: quadratic_information(&s.profile_posterior_dist()),
        per_agent: per,
        bound,
        coordinate_slacks: Some(coord),
    })
}
