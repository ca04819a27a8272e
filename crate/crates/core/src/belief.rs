//! Finite-support belief distributions.
//!
//! An [`AtomicDist`] is a distribution of posterior beliefs about a binary
//! state: a finite set of atoms in `[0,1]`. It carries the order machinery
//! used everywhere else: CDF and quantile evaluation, the conjugate
//! (reflection of the CDF around the anti-diagonal of the unit square), and
//! mean-preserving-contraction / Blackwell tests through integrated CDFs.
//!
//! [`SimplexDist`] is the multi-state analogue used for posteriors over
//! `m > 2` states; it only needs means and atom bookkeeping.

use num::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Resolution used for grid discretizations of continuous laws.
pub const DEFAULT_RESOLUTION: usize = 256;

/// Default absolute tolerance for order and equality tests on integrated CDFs.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Atom<T> {
    pub x: T,
    pub w: T,
}

/// Finite-support probability distribution on `[0,1]`.
///
/// Locations are strictly increasing, weights strictly positive and summing
/// to one. Construction merges atoms closer than [`Scalar::merge_eps`],
/// drops weights at or below [`Scalar::drop_eps`] and renormalizes.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicDist<T: Scalar = f64> {
    atoms: Vec<Atom<T>>,
}

pub type RationalDist = AtomicDist<BigRational>;

impl<T: Scalar> AtomicDist<T> {
    pub fn new<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, T)>,
    {
        let mut raw = Vec::new();
        for (x, w) in atoms {
            if !x.is_finite() || !w.is_finite() {
                return Err(Error::invalid("atomic distribution", "non-finite value"));
            }
            if x < T::zero() || x > T::one() {
                return Err(Error::invalid(
                    "atomic distribution",
                    format!("location {:?} outside [0,1]", x.to_f64()),
                ));
            }
            if w < T::zero() {
                return Err(Error::invalid(
                    "atomic distribution",
                    format!("negative weight {:?}", w.to_f64()),
                ));
            }
            if w > T::drop_eps() {
                raw.push(Atom { x, w });
            }
        }
        if raw.is_empty() {
            return Err(Error::invalid("atomic distribution", "no positive mass"));
        }
        raw.sort_by(|a, b| a.x.partial_cmp(&b.x).expect("finite"));

        let mut merged: Vec<Atom<T>> = Vec::with_capacity(raw.len());
        for a in raw {
            match merged.last_mut() {
                Some(last) if a.x.clone() - last.x.clone() <= T::merge_eps() => {
                    let w = last.w.clone() + a.w.clone();
                    if a.x != last.x {
                        last.x = (last.x.clone() * last.w.clone() + a.x * a.w) / w.clone();
                    }
                    last.w = w;
                }
                _ => merged.push(a),
            }
        }

        let total = merged.iter().fold(T::zero(), |s, a| s + a.w.clone());
        if (total.clone() - T::one()).abs() > T::merge_eps() {
            return Err(Error::invalid(
                "atomic distribution",
                format!("weights sum to {}", total.to_f64()),
            ));
        }
        if total != T::one() {
            for a in &mut merged {
                a.w = a.w.clone() / total.clone();
            }
        }
        Ok(AtomicDist { atoms: merged })
    }

    pub fn point_mass(p: T) -> Result<Self> {
        Self::new([(p, T::one())])
    }

    /// Beliefs of a signal that reveals the state: `{0: 1-p, 1: p}`.
    pub fn fully_revealing(p: T) -> Result<Self> {
        Self::new([(T::zero(), T::one() - p.clone()), (T::one(), p)])
    }

    /// Beliefs of a symmetric binary signal matching a uniform binary state
    /// with probability `r`.
    pub fn symmetric_binary(r: T) -> Result<Self> {
        let half = T::from_ratio(1, 2);
        Self::new([(T::one() - r.clone(), half.clone()), (r, half)])
    }

    /// `α/(α+β) δ_{p-β} + β/(α+β) δ_{p+α}`: the generic two-point law with mean `p`.
    pub fn two_point(mean: T, alpha: T, beta: T) -> Result<Self> {
        let s = alpha.clone() + beta.clone();
        if s <= T::zero() {
            return Err(Error::Domain("alpha + beta must be positive".into()));
        }
        Self::new([
            (mean.clone() - beta.clone(), alpha.clone() / s.clone()),
            (mean + alpha, beta / s),
        ])
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mean(&self) -> T {
        self.atoms
            .iter()
            .fold(T::zero(), |s, a| s + a.x.clone() * a.w.clone())
    }

    /// `F(x)`: total weight at locations `<= x`.
    pub fn cdf(&self, x: T) -> Result<T> {
        check_unit("x", &x)?;
        Ok(self
            .atoms
            .iter()
            .take_while(|a| a.x <= x)
            .fold(T::zero(), |s, a| s + a.w.clone()))
    }

    /// `min{y : F(y) >= u}`, with `quantile(0)` the smallest atom.
    pub fn quantile(&self, u: T) -> Result<T> {
        check_unit("u", &u)?;
        let mut cum = T::zero();
        for a in &self.atoms {
            cum = cum + a.w.clone();
            if cum >= u {
                return Ok(a.x.clone());
            }
        }
        // float round-off can leave the final cumulative a hair below 1
        Ok(self.atoms.last().expect("non-empty").x.clone())
    }

    /// The conjugate distribution, `F̂(x) = 1 - F⁻¹(1 - x)`.
    ///
    /// Every atom of weight `w` becomes a gap of length `w` and every gap of
    /// length `l` (including the ones against 0 and 1) becomes an atom of
    /// weight `l`. A `k`-atom input yields `k-1`, `k` or `k+1` atoms
    /// depending on its mass at the endpoints.
    pub fn conjugate(&self) -> Self {
        let k = self.atoms.len();
        let mut out = Vec::with_capacity(k + 1);
        let last = &self.atoms[k - 1];
        if last.x < T::one() {
            out.push((T::zero(), T::one() - last.x.clone()));
        }
        let mut cum = T::zero();
        for pair in self.atoms.windows(2) {
            cum = cum + pair[0].w.clone();
            out.push((T::one() - cum.clone(), pair[1].x.clone() - pair[0].x.clone()));
        }
        let first = &self.atoms[0];
        if first.x > T::zero() {
            out.push((T::one(), first.x.clone()));
        }
        AtomicDist::new(out).expect("conjugate of a valid distribution is valid")
    }

    /// `∫_y^1 F(x) dx = Σ w (1 - max(x, y))`.
    pub fn upper_integral(&self, y: &T) -> T {
        self.atoms.iter().fold(T::zero(), |s, a| {
            let m = if a.x > *y { a.x.clone() } else { y.clone() };
            s + a.w.clone() * (T::one() - m)
        })
    }

    pub fn step_cdf(&self) -> StepCdf<T> {
        let mut cum = T::zero();
        let mut points: Vec<(T, T)> = self
            .atoms
            .iter()
            .map(|a| {
                cum = cum.clone() + a.w.clone();
                (a.x.clone(), cum.clone())
            })
            .collect();
        if let Some(last) = points.last_mut() {
            last.1 = T::one();
        }
        if points.last().map(|p| p.0 < T::one()).unwrap_or(true) {
            points.push((T::one(), T::one()));
        }
        StepCdf { points }
    }

    pub fn to_f64(&self) -> AtomicDist<f64> {
        AtomicDist::new(self.atoms.iter().map(|a| (a.x.to_f64(), a.w.to_f64())))
            .expect("conversion of a valid distribution")
    }

    pub fn to_json(&self) -> Value {
        let atoms: Vec<Value> = self
            .atoms
            .iter()
            .map(|a| json!({"x": a.x.to_json(), "w": a.w.to_json()}))
            .collect();
        json!({ "atoms": atoms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .get("atoms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("atoms", "expected an array of {x, w}"))?;
        let mut atoms = Vec::with_capacity(arr.len());
        for (i, a) in arr.iter().enumerate() {
            let x = a
                .get("x")
                .ok_or_else(|| Error::parse(format!("atoms[{i}].x"), "missing"))?;
            let w = a
                .get("w")
                .ok_or_else(|| Error::parse(format!("atoms[{i}].w"), "missing"))?;
            atoms.push((
                T::from_json(x, &format!("atoms[{i}].x"))?,
                T::from_json(w, &format!("atoms[{i}].w"))?,
            ));
        }
        Self::new(atoms)
    }

    fn breakpoints_with(&self, other: &Self) -> Vec<T> {
        let mut ys: Vec<T> = Vec::with_capacity(self.len() + other.len() + 2);
        ys.push(T::zero());
        ys.push(T::one());
        ys.extend(self.atoms.iter().map(|a| a.x.clone()));
        ys.extend(other.atoms.iter().map(|a| a.x.clone()));
        ys
    }
}

impl AtomicDist<f64> {
    /// R-atom discretization of Uniform[0,1] at the cell midpoints `(k-½)/R`.
    ///
    /// The integrated CDF differs from the uniform one by at most `1/(8R²)`.
    pub fn uniform_grid(resolution: usize) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::Domain("resolution must be positive".into()));
        }
        let r = resolution as f64;
        Self::new((1..=resolution).map(|k| ((k as f64 - 0.5) / r, 1.0 / r)))
    }

    pub fn to_rational(&self) -> RationalDist {
        AtomicDist::new(self.atoms.iter().map(|a| {
            (
                <BigRational as Scalar>::from_f64(a.x),
                <BigRational as Scalar>::from_f64(a.w),
            )
        }))
        .expect("valid")
    }
}

fn check_unit<T: Scalar>(name: &str, v: &T) -> Result<()> {
    if !v.is_finite() || *v < T::zero() || *v > T::one() {
        return Err(Error::Domain(format!(
            "{name} = {} outside [0,1]",
            v.to_f64()
        )));
    }
    Ok(())
}

/// True iff `a` is a mean-preserving contraction of `b`: equal means and
/// `∫_y^1 F_a ≥ ∫_y^1 F_b - tol` for all `y`. Both integrals are piecewise
/// linear with kinks at atoms, so checking the union of atoms is exact.
pub fn is_mpc<T: Scalar>(a: &AtomicDist<T>, b: &AtomicDist<T>, tol: &T) -> bool {
    if (a.mean() - b.mean()).abs() > *tol {
        return false;
    }
    a.breakpoints_with(b)
        .iter()
        .all(|y| a.upper_integral(y) >= b.upper_integral(y) - tol.clone())
}

/// `a` Blackwell-dominates `b` iff `b` is a mean-preserving contraction of `a`.
pub fn blackwell_dominates<T: Scalar>(a: &AtomicDist<T>, b: &AtomicDist<T>, tol: &T) -> bool {
    is_mpc(b, a, tol)
}

/// `sup_y |∫_y^1 (F_a - F_b)|`; zero iff the two laws coincide. The `y = 0`
/// term is the difference of means.
pub fn convex_order_distance<T: Scalar>(a: &AtomicDist<T>, b: &AtomicDist<T>) -> T {
    a.breakpoints_with(b)
        .iter()
        .map(|y| (a.upper_integral(y) - b.upper_integral(y)).abs())
        .fold(T::zero(), |m, d| m.max(d))
}

/// Right-continuous step CDF given at its jump points.
#[derive(Clone, Debug, PartialEq)]
pub struct StepCdf<T: Scalar = f64> {
    /// `(x, F(x))` at each jump, plus `(1, 1)` if the last jump is before 1.
    pub points: Vec<(T, T)>,
}

impl<T: Scalar> StepCdf<T> {
    pub fn eval(&self, x: &T) -> T {
        self.points
            .iter()
            .take_while(|(px, _)| px <= x)
            .last()
            .map(|(_, f)| f.clone())
            .unwrap_or_else(T::zero)
    }

    /// CSV with header `x,F`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,F\n");
        for (x, f) in &self.points {
            s.push_str(&format!("{},{}\n", fmt_csv(x), fmt_csv(f)));
        }
        s
    }
}

fn fmt_csv<T: Scalar>(v: &T) -> String {
    match v.to_json() {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

/// Tolerance used when aggregating posterior vectors into atoms.
pub const POSTERIOR_MERGE_TOL: f64 = 1e-10;

/// Finite distribution of posteriors over `m` states.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexDist {
    m: usize,
    atoms: Vec<(Vec<f64>, f64)>,
}

impl SimplexDist {
    pub fn new(m: usize, atoms: impl IntoIterator<Item = (Vec<f64>, f64)>) -> Result<Self> {
        let mut out: Vec<(Vec<f64>, f64)> = Vec::new();
        for (q, w) in atoms {
            if q.len() != m {
                return Err(Error::invalid("simplex distribution", "posterior length != m"));
            }
            if q.iter().any(|v| !v.is_finite() || *v < -1e-12) || (q.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(Error::invalid("simplex distribution", "posterior off the simplex"));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::invalid("simplex distribution", "bad weight"));
            }
            if w <= f64::drop_eps() {
                continue;
            }
            match out.iter_mut().find(|(p, _)| max_abs_diff(p, &q) <= POSTERIOR_MERGE_TOL) {
                Some(slot) => slot.1 += w,
                None => out.push((q, w)),
            }
        }
        if out.is_empty() {
            return Err(Error::invalid("simplex distribution", "no positive mass"));
        }
        let total: f64 = out.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "simplex distribution",
                format!("weights sum to {total}"),
            ));
        }
        for a in &mut out {
            a.1 /= total;
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        Ok(SimplexDist { m, atoms: out })
    }

    pub fn states(&self) -> usize {
        self.m
    }

    pub fn atoms(&self) -> &[(Vec<f64>, f64)] {
        &self.atoms
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut mu = vec![0.0; self.m];
        for (q, w) in &self.atoms {
            for (acc, v) in mu.iter_mut().zip(q) {
                *acc += w * v;
            }
        }
        mu
    }

    /// Binary posteriors as beliefs about state 1.
    pub fn to_binary(&self) -> Result<AtomicDist<f64>> {
        if self.m != 2 {
            return Err(Error::Domain(format!("expected 2 states, got {}", self.m)));
        }
        AtomicDist::new(self.atoms.iter().map(|(q, w)| (q[1].clamp(0.0, 1.0), *w)))
    }

    /// Atom-wise comparison after canonical ordering.
    pub fn approx_eq(&self, other: &SimplexDist, tol: f64) -> bool {
        self.m == other.m
            && self.atoms.len() == other.atoms.len()
            && self
                .atoms
                .iter()
                .zip(&other.atoms)
                .all(|((p, w), (q, v))| max_abs_diff(p, q) <= tol && (w - v).abs() <= tol)
    }
}

impl From<&AtomicDist<f64>> for SimplexDist {
    fn from(d: &AtomicDist<f64>) -> Self {
        SimplexDist {
            m: 2,
            atoms: d.atoms().iter().map(|a| (vec![1.0 - a.x, a.x], a.w)).collect(),
        }
    }
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn d(atoms: &[(f64, f64)]) -> AtomicDist {
        AtomicDist::new(atoms.iter().copied()).unwrap()
    }

    fn rd(atoms: &[((i64, i64), (i64, i64))]) -> RationalDist {
        AtomicDist::new(
            atoms
                .iter()
                .map(|&((a, b), (c, e))| (rat(a, b), rat(c, e))),
        )
        .unwrap()
    }

    fn quarters() -> AtomicDist {
        d(&[(0.25, 0.5), (0.75, 0.5)])
    }

    fn three_atoms() -> AtomicDist {
        d(&[(0.1, 0.2), (0.4, 0.3), (0.6, 0.5)])
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(quarters().cdf(0.5).unwrap(), 0.5);
        assert_eq!(quarters().cdf(0.25).unwrap(), 0.5);
        assert_eq!(quarters().cdf(0.2).unwrap(), 0.0);
        assert!((three_atoms().cdf(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(quarters().cdf(1.5), Err(Error::Domain(_))));
        assert!(matches!(quarters().cdf(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(quarters().quantile(0.3).unwrap(), 0.25);
        assert_eq!(quarters().quantile(0.6).unwrap(), 0.75);
        assert_eq!(quarters().quantile(0.0).unwrap(), 0.25);
        assert_eq!(quarters().quantile(0.5).unwrap(), 0.25);
        assert!(quarters().quantile(1.01).is_err());
        for r in [10usize, 64, 255] {
            let q = AtomicDist::uniform_grid(r).unwrap().quantile(0.5).unwrap();
            assert!((q - 0.5).abs() <= 0.5 / r as f64 + 1e-15, "R={r}: {q}");
        }
    }

    #[test]
    fn conjugate_examples() {
        let c = quarters().conjugate();
        assert_eq!(c, d(&[(0.0, 0.25), (0.5, 0.5), (1.0, 0.25)]));

        let exact = rd(&[((1, 10), (1, 5)), ((2, 5), (3, 10)), ((3, 5), (1, 2))]).conjugate();
        let expected = rd(&[((0, 1), (2, 5)), ((1, 2), (1, 5)), ((4, 5), (3, 10)), ((1, 1), (1, 10))]);
        assert_eq!(exact, expected);

        let p = 0.3;
        let c = AtomicDist::point_mass(p).unwrap().conjugate();
        assert_eq!(c.len(), 2);
        assert!((c.atoms()[0].w - 0.7).abs() < 1e-15 && c.atoms()[0].x == 0.0);
        assert!((c.atoms()[1].w - 0.3).abs() < 1e-15 && c.atoms()[1].x == 1.0);
    }

    /// Reference evaluation of `F̂(x) = 1 - F⁻¹(1 - x)` straight from the
    /// quantile definition.
    fn conjugate_cdf_by_definition(mu: &RationalDist, x: BigRational) -> BigRational {
        let one = rat(1, 1);
        if x == one {
            return one;
        }
        one.clone() - mu.quantile(one - x).unwrap()
    }

    #[test]
    fn conjugate_matches_quantile_definition() {
        let mu = rd(&[((1, 10), (1, 5)), ((2, 5), (3, 10)), ((3, 5), (1, 2))]);
        let c = mu.conjugate();
        for k in 0..=40 {
            let x = rat(k, 40);
            assert_eq!(c.cdf(x.clone()).unwrap(), conjugate_cdf_by_definition(&mu, x));
        }
    }

    #[test]
    fn mean_examples() {
        assert_eq!(quarters().mean(), 0.5);
        assert!((three_atoms().mean() - 0.44).abs() < 1e-15);
        assert!((three_atoms().conjugate().mean() - 0.44).abs() < 1e-15);
        let exact = rd(&[((1, 10), (1, 5)), ((2, 5), (3, 10)), ((3, 5), (1, 2))]);
        assert_eq!(exact.mean(), rat(11, 25));
        assert_eq!(exact.conjugate().mean(), rat(11, 25));
    }

    #[test]
    fn mpc_examples() {
        let grid = AtomicDist::uniform_grid(100).unwrap();
        let half = AtomicDist::point_mass(0.5).unwrap();
        assert!(is_mpc(&half, &grid, &DEFAULT_TOL));
        assert!(is_mpc(&quarters(), &grid, &DEFAULT_TOL));
        assert!(!is_mpc(&grid, &quarters(), &DEFAULT_TOL));
        // unequal means never compare
        assert!(!is_mpc(&AtomicDist::point_mass(0.4).unwrap(), &grid, &DEFAULT_TOL));
    }

    #[test]
    fn blackwell_examples() {
        let reveal = AtomicDist::fully_revealing(0.5).unwrap();
        for other in [quarters(), AtomicDist::uniform_grid(32).unwrap(), AtomicDist::point_mass(0.5).unwrap()] {
            assert!(blackwell_dominates(&reveal, &other, &DEFAULT_TOL));
        }
        assert!(blackwell_dominates(&quarters(), &AtomicDist::point_mass(0.5).unwrap(), &DEFAULT_TOL));
        let conj = quarters().conjugate();
        assert!(!blackwell_dominates(&quarters(), &conj, &DEFAULT_TOL));
        // the quarter beliefs are a contraction of their own conjugate, which
        // is why the pair is feasible but not Pareto optimal
        assert!(blackwell_dominates(&conj, &quarters(), &DEFAULT_TOL));
    }

    #[test]
    fn construction_merges_and_validates() {
        let m = d(&[(0.5, 0.25), (0.5 + 1e-13, 0.25), (0.9, 0.5)]);
        assert_eq!(m.len(), 2);
        assert!((m.atoms()[0].w - 0.5).abs() < 1e-15);
        let dropped = d(&[(0.2, 1.0), (0.7, 1e-16)]);
        assert_eq!(dropped.len(), 1);
        assert!(AtomicDist::new([(0.2, 0.5), (0.3, 0.4)]).is_err());
        assert!(AtomicDist::new([(1.2, 1.0)]).is_err());
        assert!(AtomicDist::new([(0.2, -1.0), (0.3, 2.0)]).is_err());
        assert!(AtomicDist::<f64>::new(Vec::new()).is_err());
    }

    #[test]
    fn step_cdf_and_csv() {
        let s = three_atoms().step_cdf();
        assert_eq!(s.points.len(), 4);
        assert_eq!(s.eval(&0.05), 0.0);
        assert!((s.eval(&0.45) - 0.5).abs() < 1e-15);
        assert_eq!(s.eval(&1.0), 1.0);
        let csv = quarters().conjugate().step_cdf().to_csv();
        assert_eq!(csv, "x,F\n0.0,0.25\n0.5,0.75\n1.0,1.0\n");
    }

    #[test]
    fn json_forms() {
        let v = quarters().to_json();
        assert_eq!(v.to_string(), r#"{"atoms":[{"x":0.25,"w":0.5},{"x":0.75,"w":0.5}]}"#);
        assert_eq!(AtomicDist::<f64>::from_json(&v).unwrap(), quarters());
        let r = rd(&[((1, 4), (1, 2)), ((3, 4), (1, 2))]);
        let rv = r.to_json();
        assert_eq!(rv["atoms"][0]["x"], Value::String("1/4".into()));
        assert_eq!(RationalDist::from_json(&rv).unwrap(), r);
        let bad: Value = serde_json::from_str(r#"{"atoms":[{"x":0.5}]}"#).unwrap();
        match AtomicDist::<f64>::from_json(&bad) {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "atoms[0].w"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn uniform_grid_is_nearly_self_conjugate() {
        for r in [4usize, 16, 256] {
            let g = AtomicDist::uniform_grid(r).unwrap();
            let dist = convex_order_distance(&g, &g.conjugate());
            assert!(dist <= 1.0 / (r * r) as f64, "R={r}: {dist}");
            assert!(dist > 0.0);
        }
    }

    #[test]
    fn simplex_dist_basics() {
        let s = SimplexDist::new(3, [(vec![0.5, 0.5, 0.0], 0.5), (vec![0.0, 0.5, 0.5], 0.5)]).unwrap();
        assert_eq!(s.mean(), vec![0.25, 0.5, 0.25]);
        assert!(s.to_binary().is_err());
        let b = SimplexDist::from(&quarters());
        assert_eq!(b.to_binary().unwrap(), quarters());
        let merged = SimplexDist::new(2, [(vec![0.5, 0.5], 0.5), (vec![0.5 + 1e-12, 0.5 - 1e-12], 0.5)]).unwrap();
        assert_eq!(merged.atoms().len(), 1);
    }

    // ---- property tests ---------------------------------------------------

    /// Random rational distributions on a 1/64 lattice, up to 10 atoms,
    /// optionally touching the endpoints.
    fn rational_dist() -> impl Strategy<Value = RationalDist> {
        proptest::collection::btree_map(0i64..=64, 1i64..20, 1..=10).prop_map(|m| {
            let total: i64 = m.values().sum();
            AtomicDist::new(m.into_iter().map(|(x, w)| (rat(x, 64), rat(w, total)))).unwrap()
        })
    }

    fn float_dist() -> impl Strategy<Value = AtomicDist> {
        proptest::collection::vec((0.0f64..=1.0, 0.01f64..1.0), 1..=10).prop_map(|v| {
            let total: f64 = v.iter().map(|a| a.1).sum();
            AtomicDist::new(v.into_iter().map(|(x, w)| (x, w / total))).unwrap()
        })
    }

    /// A mean-preserving contraction: collapse a random run of adjacent atoms
    /// into their barycenter.
    fn contract(mu: &AtomicDist, start: usize, len: usize) -> AtomicDist {
        let a = mu.atoms();
        let start = start % a.len();
        let end = (start + len).min(a.len());
        let run = &a[start..end];
        let w: f64 = run.iter().map(|t| t.w).sum();
        let x = run.iter().map(|t| t.x * t.w).sum::<f64>() / w;
        let mut out: Vec<(f64, f64)> = a[..start].iter().map(|t| (t.x, t.w)).collect();
        out.push((x.clamp(0.0, 1.0), w));
        out.extend(a[end..].iter().map(|t| (t.x, t.w)));
        AtomicDist::new(out).unwrap()
    }

    proptest! {
        #[test]
        fn conjugate_is_an_involution(mu in rational_dist()) {
            prop_assert_eq!(mu.conjugate().conjugate(), mu);
        }

        #[test]
        fn float_conjugate_involution(mu in float_dist()) {
            let back = mu.conjugate().conjugate();
            prop_assert!(convex_order_distance(&back, &mu) < 1e-12);
        }

        #[test]
        fn conjugate_preserves_mean(mu in float_dist()) {
            prop_assert!((mu.conjugate().mean() - mu.mean()).abs() < 1e-12);
        }

        #[test]
        fn conjugate_atom_count(mu in rational_dist()) {
            let k = mu.len();
            let at0 = mu.atoms()[0].x == rat(0, 1);
            let at1 = mu.atoms()[k - 1].x == rat(1, 1);
            let expected = k + 1 - usize::from(at0) - usize::from(at1);
            prop_assert_eq!(mu.conjugate().len(), expected);
        }

        #[test]
        fn quantile_is_a_left_inverse(mu in float_dist(), u in 0.0f64..=1.0) {
            let q = mu.quantile(u).unwrap();
            prop_assert!(mu.cdf(q).unwrap() >= u - 1e-12);
        }

        #[test]
        fn conjugation_reverses_blackwell_order(nu in float_dist(), s in 0usize..10, l in 1usize..5) {
            let mu = contract(&nu, s, l);
            prop_assert!(blackwell_dominates(&nu, &mu, &DEFAULT_TOL));
            prop_assert!(blackwell_dominates(&mu.conjugate(), &nu.conjugate(), &DEFAULT_TOL));
        }

        #[test]
        fn mpc_is_a_partial_order(rho in float_dist(), s1 in 0usize..10, s2 in 0usize..10, l in 1usize..4) {
            let nu = contract(&rho, s1, l);
            let mu = contract(&nu, s2, l);
            prop_assert!(is_mpc(&rho, &rho, &DEFAULT_TOL));
            prop_assert!(is_mpc(&mu, &nu, &DEFAULT_TOL) && is_mpc(&nu, &rho, &DEFAULT_TOL));
            prop_assert!(is_mpc(&mu, &rho, &DEFAULT_TOL));
            if is_mpc(&rho, &mu, &DEFAULT_TOL) {
                prop_assert!(convex_order_distance(&rho, &mu) <= 1e-9);
            }
        }
    }
}
