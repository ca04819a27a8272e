//! Which pairs of belief distributions two independent signals can induce.
//!
//! `(μ1, μ2)` is feasible iff the means agree and `μ2` is a mean-preserving
//! contraction of the conjugate of `μ1`. Certificates start from the
//! threshold construction (uniform `(s1, s2)`, `ω = 1` iff `s2 ≥ 1 - p(s1)`),
//! which realizes `(μ1, conj μ1)`, and then garble agent 2's signal.

use crate::belief::{convex_order_distance, is_mpc, AtomicDist};
use crate::lp::{Cmp, LinearProgram, LpOutcome};
use crate::par::Exec;
use crate::structures::{FiniteStructure, GridSet};

pub fn is_feasible_pair(mu1: &AtomicDist, mu2: &AtomicDist, tol: f64) -> bool {
    (mu1.mean() - mu2.mean()).abs() <= tol && is_mpc(mu2, &mu1.conjugate(), &tol)
}

/// Threshold structure realizing `(μ1, conj μ1)`: agent 1 observes which
/// atom of `μ1` it drew; agent 2 observes which cell of `[0,1]` (cut at the
/// points `1 - x_j`) a uniform `s2` fell in; `ω = 1` iff `s2 ≥ 1 - x_j`.
pub fn threshold_structure(mu1: &AtomicDist) -> FiniteStructure {
    let mut cuts: Vec<f64> = vec![0.0, 1.0];
    for a in mu1.atoms() {
        let c = 1.0 - a.x;
        if !cuts.iter().any(|x| (x - c).abs() <= 1e-12) {
            cuts.push(c);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let cells: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    let mut entries = Vec::new();
    for (j, a) in mu1.atoms().iter().enumerate() {
        for (t, (lo, hi)) in cells.iter().enumerate() {
            let state = (*lo >= 1.0 - a.x - 1e-12) as usize;
            entries.push((state, vec![j, t], a.w * (hi - lo)));
        }
    }
    FiniteStructure::from_entries(2, vec![mu1.len(), cells.len()], entries).expect("threshold structure is valid")
}

/// Binary grid version of the threshold construction: cell `(i, j)` belongs
/// to the set iff `(j+½)/R ≥ 1 - Q((i+½)/R)` with `Q` the quantile of `μ1`.
/// The set is upward closed.
pub fn threshold_grid(mu1: &AtomicDist, r: usize) -> crate::error::Result<GridSet> {
    let rf = r as f64;
    GridSet::from_fn(2, r, |c| {
        let p = mu1.quantile((c[0] as f64 + 0.5) / rf).expect("in range");
        (c[1] as f64 + 0.5) / rf >= 1.0 - p
    })
}

/// Private private structure inducing `(μ1, μ2)`, or `None` if the pair is
/// infeasible.
pub fn feasibility_certificate(mu1: &AtomicDist, mu2: &AtomicDist, tol: f64) -> Option<FiniteStructure> {
    if !is_feasible_pair(mu1, mu2, tol) {
        return None;
    }
    let base = threshold_structure(mu1);
    let conj = mu1.conjugate();
    if convex_order_distance(mu2, &conj) <= tol {
        return Some(base);
    }
    // garble agent 2: transport each conjugate atom onto the atoms of μ2 so
    // that every target atom is the barycentre of what it receives
    let (ys, zs) = (conj.atoms(), mu2.atoms());
    let (nb, nc) = (ys.len(), zs.len());
    let var = |b: usize, c: usize| b * nc + c;
    let mut lp = LinearProgram::<f64>::new(nb * nc);
    for (b, y) in ys.iter().enumerate() {
        lp.add_row((0..nc).map(|c| (var(b, c), 1.0)), Cmp::Eq, y.w);
    }
    for (c, z) in zs.iter().enumerate() {
        lp.add_row((0..nb).map(|b| (var(b, c), 1.0)), Cmp::Eq, z.w);
        lp.add_row((0..nb).map(|b| (var(b, c), ys[b].x - z.x)), Cmp::Eq, 0.0);
    }
    let LpOutcome::Optimal { x, .. } = lp.solve(Exec::Sequential) else {
        return None;
    };
    let posteriors = base.signal_posteriors(1);
    let kernel: Vec<Vec<f64>> = posteriors
        .iter()
        .map(|q| {
            let y = q.as_ref().map_or(0.0, |q| q[1]);
            let b = (0..nb)
                .min_by(|i, j| (ys[*i].x - y).abs().total_cmp(&(ys[*j].x - y).abs()))
                .expect("non-empty");
            let row: Vec<f64> = (0..nc).map(|c| x[var(b, c)].max(0.0)).collect();
            let total: f64 = row.iter().sum();
            row.into_iter().map(|v| v / total).collect()
        })
        .collect();
    let out = base.garble(1, &kernel).ok()?;
    let got = out.posterior_binary(1).ok()?;
    (convex_order_distance(&got, mu2) <= tol.max(1e-9)).then_some(out)
}
