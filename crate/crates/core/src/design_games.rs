//! Information design for a zero-sum game with a unique equilibrium.
//!
//! When the game has a unique correlated equilibrium, any recommendation
//! scheme the players obey must induce that equilibrium as the joint law of
//! the recommendations, and the recommendations are then independent. The
//! designer can still correlate them with the state. The resulting problem
//! is an LP over kernels `q(a1, a2 | ω)` whose state average is pinned to
//! the equilibrium product.
//!
//! Uniqueness of the correlated equilibrium is assumed, not checked.

use num::{BigRational, Signed};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lp::{Cmp, LinearProgram};
use crate::par::Exec;
use crate::scalar::{rat, rational_string, Scalar};
use crate::structures::FiniteStructure;

pub type Table = Vec<Vec<BigRational>>;

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSumSolution {
    pub row: Vec<BigRational>,
    pub col: Vec<BigRational>,
    pub value: BigRational,
}

fn check_table(u: &Table, what: &'static str) -> Result<(usize, usize)> {
    let k1 = u.len();
    let k2 = u.first().map_or(0, Vec::len);
    if k1 == 0 || k2 == 0 || u.iter().any(|r| r.len() != k2) {
        return Err(Error::invalid(what, "expected a non-empty rectangular table"));
    }
    Ok((k1, k2))
}

/// Maximin strategies and value of the zero-sum game with row payoffs `u`.
pub fn solve_zero_sum(u: &Table) -> Result<ZeroSumSolution> {
    let (k1, k2) = check_table(u, "payoff table")?;
    // shift so the value is positive and v >= 0 is harmless
    let min = u.iter().flatten().min().expect("non-empty").clone();
    let shift = <BigRational as num::One>::one() - min;

    let mut row_lp = LinearProgram::<BigRational>::new(k1 + 1);
    row_lp.set_objective(k1, rat(1, 1));
    for j in 0..k2 {
        let coeffs = (0..k1).map(|i| (i, u[i][j].clone() + &shift)).chain([(k1, rat(-1, 1))]);
        row_lp.add_row(coeffs, Cmp::Ge, rat(0, 1));
    }
    row_lp.add_row((0..k1).map(|i| (i, rat(1, 1))), Cmp::Eq, rat(1, 1));
    let (x, v) = row_lp.solve(Exec::Sequential).optimal().ok_or(Error::Lp("infeasible"))?;

    let mut col_lp = LinearProgram::<BigRational>::new(k2 + 1);
    col_lp.set_objective(k2, rat(-1, 1));
    for row in u {
        let coeffs = (0..k2).map(|j| (j, row[j].clone() + &shift)).chain([(k2, rat(-1, 1))]);
        col_lp.add_row(coeffs, Cmp::Le, rat(0, 1));
    }
    col_lp.add_row((0..k2).map(|j| (j, rat(1, 1))), Cmp::Eq, rat(1, 1));
    let (y, w) = col_lp.solve(Exec::Sequential).optimal().ok_or(Error::Lp("infeasible"))?;
    debug_assert_eq!(v, -w.clone());

    Ok(ZeroSumSolution {
        row: x[..k1].to_vec(),
        col: y[..k2].to_vec(),
        value: v - shift,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DesignerProblem {
    /// Row player's payoffs `u[a1][a2]`.
    pub u: Table,
    /// Designer payoffs `u_d[ω][a1][a2]`.
    pub u_d: Vec<Table>,
    pub prior: Vec<BigRational>,
    /// Product equilibrium `(row, col)`; computed from `u` when absent.
    pub equilibrium: Option<(Vec<BigRational>, Vec<BigRational>)>,
}

fn is_distribution(p: &[BigRational]) -> bool {
    !p.is_empty() && p.iter().all(|x| !x.is_negative()) && p.iter().sum::<BigRational>() == rat(1, 1)
}

impl DesignerProblem {
    pub fn new(
        u: Table,
        u_d: Vec<Table>,
        prior: Vec<BigRational>,
        equilibrium: Option<(Vec<BigRational>, Vec<BigRational>)>,
    ) -> Result<Self> {
        let (k1, k2) = check_table(&u, "game")?;
        if u_d.len() != prior.len() {
            return Err(Error::invalid("designer problem", "u_d needs one table per state"));
        }
        for t in &u_d {
            if check_table(t, "designer payoffs")? != (k1, k2) {
                return Err(Error::invalid("designer problem", "u_d tables must match the game's shape"));
            }
        }
        if !is_distribution(&prior) {
            return Err(Error::invalid("designer problem", "prior must be a probability vector"));
        }
        if let Some((r, c)) = &equilibrium {
            if r.len() != k1 || c.len() != k2 || !is_distribution(r) || !is_distribution(c) {
                return Err(Error::invalid("designer problem", "equilibrium must be two mixed strategies"));
            }
        }
        Ok(DesignerProblem { u, u_d, prior, equilibrium })
    }

    pub fn states(&self) -> usize {
        self.prior.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.u.len(), self.u[0].len())
    }

    /// Equilibrium product `e[a1 * k2 + a2]`.
    pub fn equilibrium_product(&self) -> Result<Vec<BigRational>> {
        let (r, c) = match &self.equilibrium {
            Some(e) => e.clone(),
            None => {
                let s = solve_zero_sum(&self.u)?;
                (s.row, s.col)
            }
        };
        Ok(r.iter().flat_map(|a| c.iter().map(move |b| a * b)).collect())
    }

    fn payoff(&self, state: usize, a: usize) -> &BigRational {
        let k2 = self.shape().1;
        &self.u_d[state][a / k2][a % k2]
    }

    pub fn to_json(&self) -> Value {
        let table = |t: &Table| -> Value {
            t.iter().map(|r| r.iter().map(rational_string).collect::<Vec<_>>()).collect::<Vec<_>>().into()
        };
        let mut ud = Map::new();
        for (w, t) in self.u_d.iter().enumerate() {
            ud.insert(w.to_string(), table(t));
        }
        let mut out = json!({
            "u": table(&self.u),
            "u_d": ud,
            "prior": self.prior.iter().map(rational_string).collect::<Vec<_>>(),
        });
        if let Some((r, c)) = &self.equilibrium {
            out["equilibrium"] = json!({
                "row": r.iter().map(rational_string).collect::<Vec<_>>(),
                "col": c.iter().map(rational_string).collect::<Vec<_>>(),
            });
        }
        out
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let u = table_field(v.get("u"), "u")?;
        let ud = v
            .get("u_d")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::parse("u_d", "expected an object keyed by state index"))?;
        let prior = vector_field(v.get("prior"), "prior")?;
        let mut u_d = Vec::with_capacity(prior.len());
        for w in 0..prior.len() {
            let key = w.to_string();
            u_d.push(table_field(ud.get(&key), &format!("u_d.{key}"))?);
        }
        if ud.len() != prior.len() {
            return Err(Error::parse("u_d", "keys must be exactly the state indices"));
        }
        let equilibrium = match v.get("equilibrium") {
            None | Some(Value::Null) => None,
            Some(e) => Some((
                vector_field(e.get("row"), "equilibrium.row")?,
                vector_field(e.get("col"), "equilibrium.col")?,
            )),
        };
        DesignerProblem::new(u, u_d, prior, equilibrium).map_err(|e| Error::parse("u_d", e.to_string()))
    }
}

fn rational_field(v: &Value, field: &str) -> Result<BigRational> {
    <BigRational as Scalar>::from_json(v, field)
}

fn vector_field(v: Option<&Value>, field: &str) -> Result<Vec<BigRational>> {
    let arr = v.and_then(Value::as_array).ok_or_else(|| Error::parse(field, "expected an array"))?;
    arr.iter().enumerate().map(|(i, x)| rational_field(x, &format!("{field}[{i}]"))).collect()
}

fn table_field(v: Option<&Value>, field: &str) -> Result<Table> {
    let arr = v.and_then(Value::as_array).ok_or_else(|| Error::parse(field, "expected an array of rows"))?;
    arr.iter().enumerate().map(|(i, r)| vector_field(Some(r), &format!("{field}[{i}]"))).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DesignerSolution {
    /// `kernel[ω][a1 * k2 + a2] = q(a1, a2 | ω)`.
    pub kernel: Vec<Vec<BigRational>>,
    pub payoff: BigRational,
}

impl DesignerSolution {
    pub fn to_json(&self, p: &DesignerProblem) -> Result<Value> {
        let k2 = p.shape().1;
        let mut kernel = Map::new();
        for (w, q) in self.kernel.iter().enumerate() {
            let rows: Vec<Vec<String>> = q.chunks(k2).map(|r| r.iter().map(rational_string).collect()).collect();
            kernel.insert(w.to_string(), json!(rows));
        }
        Ok(json!({
            "payoff": rational_string(&self.payoff),
            "kernel": kernel,
            "baseline": rational_string(&independent_baseline(p)?),
            "relaxed_bound": rational_string(&relaxed_bound(p)),
        }))
    }
}

/// Best kernel for the designer. Among optimal kernels the one that is
/// lexicographically largest as the vector `(q(·|0), q(·|1), ...)`.
pub fn designer_optimum(p: &DesignerProblem) -> Result<DesignerSolution> {
    let e = p.equilibrium_product()?;
    let k = e.len();
    let live: Vec<usize> = (0..p.states()).filter(|&w| p.prior[w].is_positive()).collect();
    let n = live.len() * k;

    // x[i * k + a] = prior(ω_i) q(a | ω_i)
    let mut lp = LinearProgram::<BigRational>::new(n);
    for (i, &w) in live.iter().enumerate() {
        for a in 0..k {
            lp.set_objective(i * k + a, p.payoff(w, a).clone());
        }
        lp.add_row((0..k).map(|a| (i * k + a, rat(1, 1))), Cmp::Eq, p.prior[w].clone());
    }
    for (a, ea) in e.iter().enumerate() {
        lp.add_row((0..live.len()).map(|i| (i * k + a, rat(1, 1))), Cmp::Eq, ea.clone());
    }
    let (mut x, payoff) = lp.solve(Exec::Sequential).optimal().ok_or(Error::Lp("infeasible"))?;

    let mut pinned = lp.clone();
    pinned.add_row(
        live.iter().enumerate().flat_map(|(i, &w)| (0..k).map(move |a| (i * k + a, p.payoff(w, a).clone()))),
        Cmp::Eq,
        payoff.clone(),
    );
    for j in 0..n {
        let mut step = pinned.clone();
        for t in 0..n {
            step.set_objective(t, if t == j { rat(1, 1) } else { rat(0, 1) });
        }
        let (xs, best) = step.solve(Exec::Sequential).optimal().ok_or(Error::Lp("infeasible"))?;
        x = xs;
        pinned.add_row([(j, rat(1, 1))], Cmp::Eq, best);
    }

    let mut kernel = vec![e.clone(); p.states()];
    for (i, &w) in live.iter().enumerate() {
        kernel[w] = (0..k).map(|a| &x[i * k + a] / &p.prior[w]).collect();
    }
    Ok(DesignerSolution { kernel, payoff })
}

/// Payoff of recommendations drawn independently of the state.
pub fn independent_baseline(p: &DesignerProblem) -> Result<BigRational> {
    let e = p.equilibrium_product()?;
    Ok((0..p.states())
        .map(|w| &p.prior[w] * e.iter().enumerate().map(|(a, ea)| ea * p.payoff(w, a)).sum::<BigRational>())
        .sum())
}

/// `Σ_ω prior(ω) max_a u_d(ω, a)`: the designer dictating actions freely.
pub fn relaxed_bound(p: &DesignerProblem) -> BigRational {
    (0..p.states())
        .map(|w| &p.prior[w] * p.u_d[w].iter().flatten().max().expect("non-empty").clone())
        .sum()
}

/// `(ω, a1, a2)` with `P = prior(ω) q(a1, a2 | ω)`.
pub fn kernel_structure(p: &DesignerProblem, sol: &DesignerSolution) -> Result<FiniteStructure> {
    let (k1, k2) = p.shape();
    let mut entries = Vec::new();
    for (w, q) in sol.kernel.iter().enumerate() {
        for (a, qa) in q.iter().enumerate() {
            let mass = Scalar::to_f64(&(&p.prior[w] * qa));
            entries.push((w, vec![a / k2, a % k2], mass));
        }
    }
    FiniteStructure::from_entries(p.states(), vec![k1, k2], entries)
}

fn int_table(rows: &[&[i64]]) -> Table {
    rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect()
}

/// Rock-paper-scissors (actions R, P, S) with two equally likely states.
/// The designer earns one unit per player choosing rock in the low state
/// and one per player choosing scissors in the high state.
pub fn rps_problem() -> DesignerProblem {
    let u = int_table(&[&[0, -1, 1], &[1, 0, -1], &[-1, 1, 0]]);
    let count = |target: usize| -> Table {
        (0..3)
            .map(|a| (0..3).map(|b| rat((a == target) as i64 + (b == target) as i64, 1)).collect())
            .collect()
    };
    DesignerProblem::new(u, vec![count(0), count(2)], vec![rat(1, 2), rat(1, 2)], None).expect("valid")
}
