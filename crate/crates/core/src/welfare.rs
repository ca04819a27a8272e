//! Welfare maximization over private private structures with a binary state
//! and two agents.
//!
//! Some maximizer gives one agent a two-point belief law and the other its
//! conjugate, so the search runs over the two-parameter family
//! `α/(α+β) δ_{p-β} + β/(α+β) δ_{p+α}` with `α ∈ (0, 1-p]`, `β ∈ (0, p]`,
//! in both role assignments.

use serde_json::{json, Value};

use crate::belief::AtomicDist;
use crate::error::{Error, Result};
use crate::par::Exec;

pub const WELFARE_GRID: usize = 200;
pub const REFINE_TOL: f64 = 1e-10;
/// Welfare differences at or below this are ties.
pub const TIE_TOL: f64 = 1e-12;
/// Grid maxima per role assignment that get refined.
const REFINE_STARTS: usize = 4;

/// Payoffs `u[state][action]` for a binary state.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffTable {
    rows: [Vec<f64>; 2],
}

impl PayoffTable {
    pub fn new(u0: Vec<f64>, u1: Vec<f64>) -> Result<Self> {
        if u0.is_empty() || u0.len() != u1.len() {
            return Err(Error::Domain("payoff rows must be non-empty and of equal length".into()));
        }
        if u0.iter().chain(&u1).any(|v| !v.is_finite()) {
            return Err(Error::Domain("payoffs must be finite".into()));
        }
        Ok(PayoffTable { rows: [u0, u1] })
    }

    /// `1 - 2|ω - a|` with actions `{0, 1}`.
    pub fn matching() -> Self {
        PayoffTable::new(vec![1.0, -1.0], vec![-1.0, 1.0]).expect("valid")
    }

    pub fn zeros(actions: usize) -> Result<Self> {
        PayoffTable::new(vec![0.0; actions], vec![0.0; actions])
    }

    pub fn actions(&self) -> usize {
        self.rows[0].len()
    }

    pub fn get(&self, state: usize, action: usize) -> f64 {
        self.rows[state][action]
    }

    /// Indirect utility `U(q) = max_a (1-q) u(0,a) + q u(1,a)`.
    pub fn indirect(&self, q: f64) -> f64 {
        self.rows[0]
            .iter()
            .zip(&self.rows[1])
            .map(|(a, b)| (1.0 - q) * a + q * b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn expected(&self, mu: &AtomicDist) -> f64 {
        mu.atoms().iter().map(|a| a.w * self.indirect(a.x)).sum()
    }

    pub fn to_json(&self) -> Value {
        json!([self.rows[0], self.rows[1]])
    }

    pub fn from_json(v: &Value, field: &str) -> Result<Self> {
        let rows = v
            .as_array()
            .filter(|r| r.len() == 2)
            .ok_or_else(|| Error::parse(field, "expected two rows (one per state)"))?;
        let mut parsed = Vec::with_capacity(2);
        for (s, row) in rows.iter().enumerate() {
            let name = format!("{field}[{s}]");
            let row = row
                .as_array()
                .ok_or_else(|| Error::parse(name.clone(), "expected an array of numbers"))?;
            let mut vals = Vec::with_capacity(row.len());
            for (a, x) in row.iter().enumerate() {
                vals.push(
                    x.as_f64()
                        .ok_or_else(|| Error::parse(format!("{name}[{a}]"), "expected a number"))?,
                );
            }
            parsed.push(vals);
        }
        let u1 = parsed.pop().expect("two rows");
        let u0 = parsed.pop().expect("two rows");
        PayoffTable::new(u0, u1).map_err(|e| Error::parse(field, e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WelfareProblem {
    pub u1: PayoffTable,
    pub u2: PayoffTable,
    pub prior: f64,
}

impl WelfareProblem {
    pub fn new(u1: PayoffTable, u2: PayoffTable, prior: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&prior) {
            return Err(Error::Domain(format!("prior {prior} outside [0,1]")));
        }
        Ok(WelfareProblem { u1, u2, prior })
    }

    pub fn matching() -> Self {
        WelfareProblem::new(PayoffTable::matching(), PayoffTable::matching(), 0.5).expect("valid")
    }

    pub fn welfare(&self, mu1: &AtomicDist, mu2: &AtomicDist) -> f64 {
        self.u1.expected(mu1) + self.u2.expected(mu2)
    }

    pub fn to_json(&self) -> Value {
        json!({"u1": self.u1.to_json(), "u2": self.u2.to_json(), "prior": self.prior})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let u1 = PayoffTable::from_json(v.get("u1").ok_or_else(|| Error::parse("u1", "missing"))?, "u1")?;
        let u2 = PayoffTable::from_json(v.get("u2").ok_or_else(|| Error::parse("u2", "missing"))?, "u2")?;
        let prior = v
            .get("prior")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::parse("prior", "expected a number"))?;
        WelfareProblem::new(u1, u2, prior).map_err(|e| Error::parse("prior", e.to_string()))
    }

    /// Welfare when one agent learns the state and the other nothing, best
    /// of the two assignments.
    pub fn reveal_to_one_baseline(&self) -> f64 {
        let full = AtomicDist::fully_revealing(self.prior).expect("prior in [0,1]");
        let none = AtomicDist::point_mass(self.prior).expect("prior in [0,1]");
        self.welfare(&full, &none).max(self.welfare(&none, &full))
    }

    fn evaluate(&self, alpha: f64, beta: f64, swapped: bool) -> (f64, AtomicDist, AtomicDist) {
        let mu = ladder_dist(self.prior, alpha, beta);
        let conj = mu.conjugate();
        let (mu1, mu2) = if swapped { (conj, mu) } else { (mu, conj) };
        (self.welfare(&mu1, &mu2), mu1, mu2)
    }
}

/// Two-point law with mean `p`; collapses to `δ_p` when `α` or `β` vanishes.
pub fn ladder_dist(p: f64, alpha: f64, beta: f64) -> AtomicDist {
    if alpha <= 0.0 || beta <= 0.0 {
        return AtomicDist::point_mass(p).expect("prior in [0,1]");
    }
    let s = alpha + beta;
    AtomicDist::new([
        ((p - beta).clamp(0.0, 1.0), alpha / s),
        ((p + alpha).clamp(0.0, 1.0), beta / s),
    ])
    .expect("parameters inside the rectangle")
}

#[derive(Clone, Debug, PartialEq)]
pub struct WelfareOptimum {
    pub alpha: f64,
    pub beta: f64,
    /// True when agent 1 holds the conjugate (three-point) law.
    pub swapped: bool,
    pub mu1: AtomicDist,
    pub mu2: AtomicDist,
    pub welfare: f64,
    pub baseline: f64,
}

impl WelfareOptimum {
    pub fn to_json(&self) -> Value {
        json!({
            "alpha": self.alpha,
            "beta": self.beta,
            "welfare": self.welfare,
            "mu1": self.mu1.to_json(),
            "mu2": self.mu2.to_json(),
            "swapped": self.swapped,
            "baseline": self.baseline,
        })
    }
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    alpha: f64,
    beta: f64,
    swapped: bool,
    welfare: f64,
}

/// `a` beats `b`: strictly more welfare, else the non-swapped assignment,
/// else the lexicographically smaller `(α, β)`.
fn better(a: &Candidate, b: &Candidate) -> bool {
    if a.welfare > b.welfare + TIE_TOL {
        return true;
    }
    if b.welfare > a.welfare + TIE_TOL {
        return false;
    }
    if a.swapped != b.swapped {
        return !a.swapped;
    }
    (a.alpha, a.beta) < (b.alpha, b.beta)
}

pub fn maximize_welfare(problem: &WelfareProblem, exec: Exec) -> WelfareOptimum {
    let p = problem.prior;
    let baseline = problem.reveal_to_one_baseline();
    let (amax, bmax) = (1.0 - p, p);
    if amax <= 0.0 || bmax <= 0.0 {
        let (welfare, mu1, mu2) = problem.evaluate(0.0, 0.0, false);
        return WelfareOptimum { alpha: 0.0, beta: 0.0, swapped: false, mu1, mu2, welfare, baseline };
    }

    let n = WELFARE_GRID;
    let grid = exec.map_range(2 * n * n, |idx| {
        let swapped = idx >= n * n;
        let k = idx % (n * n);
        let alpha = amax * ((k / n) + 1) as f64 / n as f64;
        let beta = bmax * ((k % n) + 1) as f64 / n as f64;
        let welfare = problem.evaluate(alpha, beta, swapped).0;
        Candidate { alpha, beta, swapped, welfare }
    });

    let mut starts = Vec::new();
    for swapped in [false, true] {
        let mut pool: Vec<Candidate> = grid.iter().filter(|c| c.swapped == swapped).copied().collect();
        pool.sort_by(|a, b| {
            if better(a, b) {
                std::cmp::Ordering::Less
            } else if better(b, a) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        starts.extend(pool.into_iter().take(REFINE_STARTS));
    }

    let step = (amax / n as f64, bmax / n as f64);
    let refined = exec.map_range(starts.len(), |i| refine(problem, starts[i], step, (amax, bmax)));
    let best = refined
        .into_iter()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("non-empty");

    let (welfare, mu1, mu2) = problem.evaluate(best.alpha, best.beta, best.swapped);
    WelfareOptimum { alpha: best.alpha, beta: best.beta, swapped: best.swapped, mu1, mu2, welfare, baseline }
}

/// Compass search on the closed rectangle, halving the step on failure.
fn refine(problem: &WelfareProblem, start: Candidate, step: (f64, f64), bounds: (f64, f64)) -> Candidate {
    let mut cur = start;
    let (mut da, mut db) = step;
    while da.max(db) > REFINE_TOL {
        let mut moved = false;
        for (sa, sb) in [(da, 0.0), (-da, 0.0), (0.0, db), (0.0, -db)] {
            let alpha = (cur.alpha + sa).clamp(0.0, bounds.0);
            let beta = (cur.beta + sb).clamp(0.0, bounds.1);
            if alpha == cur.alpha && beta == cur.beta {
                continue;
            }
            let welfare = problem.evaluate(alpha, beta, cur.swapped).0;
            if welfare > cur.welfare + f64::EPSILON * cur.welfare.abs().max(1.0) {
                cur = Candidate { alpha, beta, swapped: cur.swapped, welfare };
                moved = true;
                break;
            }
        }
        if !moved {
            da *= 0.5;
            db *= 0.5;
        }
    }
    cur
}
