//! Optimal private disclosure about a binary state.
//!
//! Given a protected signal `s1`, the most informative signal independent of
//! it is `s2* ~ Uniform[1 - p(s1), 1]` when `ω = 1` and `Uniform[0, 1 - p(s1)]`
//! when `ω = 0`. Its beliefs follow the conjugate of the law of `p(s1)`, and
//! bucketing `s2*` by the points `1 - p(s1)` loses nothing.

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::belief::{AtomicDist, POSTERIOR_MERGE_TOL};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::scalar::{rational_near, Scalar};
use crate::structures::{FiniteStructure, Interval, SNAP_TOL};

/// Samples drawn per generator stream; stream `c` covers samples
/// `c * SAMPLE_CHUNK ..`, so results do not depend on the thread count.
pub const SAMPLE_CHUNK: usize = 1 << 14;

/// Belief distribution of the optimal disclosure: the conjugate of `mu1`.
pub fn optimal_disclosure_dist(mu1: &AtomicDist) -> AtomicDist {
    mu1.conjugate()
}

/// One draw of `s2*` given the protected posterior `p1`, the state and a
/// uniform draw `u`.
pub fn sample_disclosure(p1: f64, omega: usize, u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p1) {
        return Err(Error::Domain(format!("posterior {p1} outside [0,1]")));
    }
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("uniform draw {u} outside [0,1]")));
    }
    match omega {
        1 if p1 > 0.0 => Ok((1.0 - p1) + u * p1),
        0 if p1 < 1.0 => Ok(u * (1.0 - p1)),
        0 | 1 => Err(Error::Domain(format!("state {omega} impossible at posterior {p1}"))),
        _ => Err(Error::Domain(format!("state {omega} is not binary"))),
    }
}

fn check_shape(s: &FiniteStructure) -> Result<()> {
    if s.states() != 2 || s.agents() != 1 {
        return Err(Error::Domain(format!(
            "expected a (state, signal) structure with m = 2, n = 1; got m = {}, n = {}",
            s.states(),
            s.agents()
        )));
    }
    Ok(())
}

/// Posterior of state 1 for each signal value (`None` for null values).
fn protected_posteriors(s: &FiniteStructure) -> Vec<Option<f64>> {
    s.signal_posteriors(0).into_iter().map(|q| q.map(|q| q[1])).collect()
}

/// Cells of `[0,1]` cut at the distinct points `1 - p(s1)`; each is
/// left-closed and right-open except the last.
pub fn disclosure_intervals(s: &FiniteStructure) -> Result<Vec<Interval>> {
    check_shape(s)?;
    let mut cuts: Vec<f64> = Vec::new();
    for p in protected_posteriors(s).into_iter().flatten() {
        let c = 1.0 - p;
        if c > POSTERIOR_MERGE_TOL && c < 1.0 - POSTERIOR_MERGE_TOL && !cuts.iter().any(|x| (x - c).abs() <= POSTERIOR_MERGE_TOL) {
            cuts.push(c);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let mut points = vec![BigRational::zero()];
    points.extend(cuts.iter().map(|c| rational_near(*c, SNAP_TOL)));
    points.push(BigRational::one());
    Ok(points
        .windows(2)
        .map(|w| Interval::new(w[0].clone(), w[1].clone()).expect("sorted cut points"))
        .collect())
}

/// `kernel[v][ω][k] = P(t2* = k | s1 = v, ω)`, exact; rows for null `(v, ω)`
/// pairs are zero.
pub fn disclosure_kernel(s: &FiniteStructure) -> Result<Vec<[Vec<BigRational>; 2]>> {
    let intervals = disclosure_intervals(s)?;
    let zero = BigRational::zero();
    let one = BigRational::one();
    let overlap = |iv: &Interval, lo: &BigRational, hi: &BigRational| {
        let a = if &iv.lo > lo { &iv.lo } else { lo };
        let b = if &iv.hi < hi { &iv.hi } else { hi };
        if a < b {
            b - a
        } else {
            BigRational::zero()
        }
    };
    let snap = |p: f64| {
        // cut points were merged, so map 1 - p to the cut it was merged into
        let c = rational_near(1.0 - p, SNAP_TOL);
        intervals
            .iter()
            .flat_map(|iv| [&iv.lo, &iv.hi])
            .find(|x| (Scalar::to_f64(*x) - (1.0 - p)).abs() <= POSTERIOR_MERGE_TOL)
            .cloned()
            .unwrap_or(c)
    };
    Ok(protected_posteriors(s)
        .into_iter()
        .map(|p| {
            let k = intervals.len();
            let Some(p) = p else {
                return [vec![zero.clone(); k], vec![zero.clone(); k]];
            };
            let cut = snap(p);
            let row = |lo: &BigRational, hi: &BigRational| {
                let w = hi - lo;
                if w == zero {
                    vec![zero.clone(); k]
                } else {
                    intervals.iter().map(|iv| overlap(iv, lo, hi) / &w).collect()
                }
            };
            [row(&zero, &cut), row(&cut, &one)]
        })
        .collect())
}

/// The joint structure `(ω, s1, t2*)` where `t2*` is the interval index of `s2*`.
pub fn finite_disclosure(s: &FiniteStructure) -> Result<FiniteStructure> {
    let kernel = disclosure_kernel(s)?;
    let k = disclosure_intervals(s)?.len();
    let table = s.state_signal_table(0);
    let mut entries = Vec::new();
    for (v, rows) in kernel.iter().enumerate() {
        for omega in 0..2 {
            let mass = table[v][omega];
            for (t, prob) in rows[omega].iter().enumerate() {
                let prob = Scalar::to_f64(prob);
                if mass > 0.0 && prob > 0.0 {
                    entries.push((omega, vec![v, t], mass * prob));
                }
            }
        }
    }
    FiniteStructure::from_entries(2, vec![s.alphabets()[0], k], entries)
}

/// One sampled draw from `(ω, s1, s2*)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisclosureSample {
    pub state: usize,
    pub signal: usize,
    pub s2star: f64,
}

/// `count` seeded draws of `(ω, s1, s2*)`. Each draw consumes one uniform for
/// `(ω, s1)` and one for `s2*`.
pub fn sample_disclosures(s: &FiniteStructure, count: usize, seed: u64, exec: Exec) -> Result<Vec<DisclosureSample>> {
    check_shape(s)?;
    let posteriors = protected_posteriors(s);
    let table = s.state_signal_table(0);
    // cumulative over (signal, state) pairs with positive mass
    let mut cells = Vec::new();
    let mut acc = 0.0;
    for (v, row) in table.iter().enumerate() {
        for (omega, mass) in row.iter().enumerate() {
            if *mass > 0.0 {
                acc += mass;
                cells.push((acc, v, omega));
            }
        }
    }
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    let out = exec.map_range(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let n = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
        (0..n)
            .map(|_| {
                let x: f64 = rng.gen::<f64>() * acc;
                let &(_, signal, state) = cells.iter().find(|(cum, _, _)| x < *cum).unwrap_or(cells.last().expect("mass"));
                let u: f64 = rng.gen();
                let p = posteriors[signal].expect("positive mass");
                let s2star = sample_disclosure(p, state, u).expect("consistent draw");
                DisclosureSample { state, signal, s2star }
            })
            .collect::<Vec<_>>()
    });
    Ok(out.into_iter().flatten().collect())
}

/// CSV with header `s1,s2star`.
pub fn samples_to_csv(samples: &[DisclosureSample]) -> String {
    let mut out = String::from("s1,s2star\n");
    for d in samples {
        out.push_str(&format!("{},{}\n", d.signal, d.s2star));
    }
    out
}

/// Contingency table of `(s1 value, decile of s2*)` against the product law
/// `P(s1 = v) / 10`.
#[derive(Clone, Debug)]
pub struct IndependenceTable {
    pub counts: Vec<[u64; 10]>,
    pub expected: Vec<f64>,
    /// Largest `|count - N π| / sqrt(N π (1 - π))` over cells with `π > 0`.
    pub max_z: f64,
}

pub fn independence_table(s: &FiniteStructure, samples: &[DisclosureSample]) -> Result<IndependenceTable> {
    check_shape(s)?;
    let marg = s.signal_marginal(0);
    let mut counts = vec![[0u64; 10]; marg.len()];
    for d in samples {
        let bin = ((d.s2star * 10.0) as usize).min(9);
        counts[d.signal][bin] += 1;
    }
    let n = samples.len() as f64;
    let mut max_z: f64 = 0.0;
    for (v, row) in counts.iter().enumerate() {
        let pi = marg[v] / 10.0;
        if pi <= 0.0 {
            continue;
        }
        let se = (n * pi * (1.0 - pi)).sqrt();
        for c in row {
            max_z = max_z.max((*c as f64 - n * pi).abs() / se);
        }
    }
    Ok(IndependenceTable {
        counts,
        expected: marg.iter().map(|p| n * p / 10.0).collect(),
        max_z,
    })
}
