//! Finite information structures and their set/grid encodings.
//!
//! A [`FiniteStructure`] is a dense joint table over `(state, s_1, …, s_n)`.
//! Signals live on a mixed-radix profile index with agent 0 most
//! significant; the state is the outermost index.

mod grid;
mod region;

pub use grid::{structure_from_fuzzy, structure_from_grid, FuzzyGrid, GridPartition, GridSet, Projections};
pub use region::{build_associated_set, build_uninformative_set, Band, BandRule, Interval, RegionSet};
pub use crate::scalar::SNAP_TOL;

use serde_json::{json, Value};

use crate::belief::{max_abs_diff, AtomicDist, SimplexDist, POSTERIOR_MERGE_TOL};
use crate::error::{Error, Result};

/// Probabilities at or below this are treated as zero when deciding support.
pub const ZERO_MASS: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteStructure {
    m: usize,
    alphabets: Vec<usize>,
    strides: Vec<usize>,
    pmf: Vec<f64>,
}

impl FiniteStructure {
    /// `pmf[state * P + profile]` with `P = Π alphabets`.
    pub fn new(m: usize, alphabets: Vec<usize>, pmf: Vec<f64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("structure", "no states"));
        }
        if alphabets.iter().any(|&a| a == 0) {
            return Err(Error::invalid("structure", "empty signal alphabet"));
        }
        let profiles: usize = alphabets.iter().product();
        if pmf.len() != m * profiles {
            return Err(Error::invalid(
                "structure",
                format!("pmf has {} entries, expected {}", pmf.len(), m * profiles),
            ));
        }
        if let Some(bad) = pmf.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::invalid("structure", format!("bad probability {bad}")));
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("structure", format!("pmf sums to {total}")));
        }
        for k in 0..m {
            let pk: f64 = pmf[k * profiles..(k + 1) * profiles].iter().sum();
            if pk <= ZERO_MASS {
                return Err(Error::invalid(
                    "structure",
                    format!("state {k} has zero prior probability"),
                ));
            }
        }
        let mut strides = vec![1; alphabets.len()];
        for i in (0..alphabets.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * alphabets[i + 1];
        }
        Ok(FiniteStructure {
            m,
            alphabets,
            strides,
            pmf,
        })
    }

    /// Builds from sparse `(state, signals, p)` entries; repeated entries add.
    pub fn from_entries(
        m: usize,
        alphabets: Vec<usize>,
        entries: impl IntoIterator<Item = (usize, Vec<usize>, f64)>,
    ) -> Result<Self> {
        let profiles: usize = alphabets.iter().product();
        let mut pmf = vec![0.0; m * profiles];
        for (k, sig, p) in entries {
            if k >= m {
                return Err(Error::invalid("structure", format!("state {k} out of range")));
            }
            if sig.len() != alphabets.len() {
                return Err(Error::invalid("structure", "signal profile has wrong length"));
            }
            let mut idx = 0;
            for (v, a) in sig.iter().zip(&alphabets) {
                if v >= a {
                    return Err(Error::invalid("structure", format!("signal {v} out of range")));
                }
                idx = idx * a + v;
            }
            pmf[k * profiles + idx] += p;
        }
        Self::new(m, alphabets, pmf)
    }

    pub fn states(&self) -> usize {
        self.m
    }

    pub fn agents(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[usize] {
        &self.alphabets
    }

    pub fn profiles(&self) -> usize {
        self.alphabets.iter().product()
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn prob(&self, state: usize, profile: usize) -> f64 {
        self.pmf[state * self.profiles() + profile]
    }

    /// Signal of `agent` in profile `p`.
    pub fn signal(&self, profile: usize, agent: usize) -> usize {
        (profile / self.strides[agent]) % self.alphabets[agent]
    }

    pub fn profile_signals(&self, profile: usize) -> Vec<usize> {
        (0..self.agents()).map(|i| self.signal(profile, i)).collect()
    }

    pub fn prior(&self) -> Vec<f64> {
        let p = self.profiles();
        (0..self.m)
            .map(|k| self.pmf[k * p..(k + 1) * p].iter().sum())
            .collect()
    }

    /// Distribution of the signal profile with the state summed out.
    pub fn joint_signal_marginal(&self) -> Vec<f64> {
        let p = self.profiles();
        (0..p)
            .map(|j| (0..self.m).map(|k| self.pmf[k * p + j]).sum())
            .collect()
    }

    pub fn signal_marginal(&self, agent: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.alphabets[agent]];
        for (j, pj) in self.joint_signal_marginal().into_iter().enumerate() {
            out[self.signal(j, agent)] += pj;
        }
        out
    }

    /// `table[v][k] = P(ω = k, s_agent = v)`.
    pub fn state_signal_table(&self, agent: usize) -> Vec<Vec<f64>> {
        let p = self.profiles();
        let mut t = vec![vec![0.0; self.m]; self.alphabets[agent]];
        for k in 0..self.m {
            for j in 0..p {
                t[self.signal(j, agent)][k] += self.pmf[k * p + j];
            }
        }
        t
    }

    /// Bayes posterior for every signal value; `None` for zero-probability values.
    pub fn signal_posteriors(&self, agent: usize) -> Vec<Option<Vec<f64>>> {
        self.state_signal_table(agent)
            .into_iter()
            .map(|row| normalize(row).map(|(q, _)| q))
            .collect()
    }

    fn check_agent(&self, agent: usize) -> Result<()> {
        if agent >= self.agents() {
            return Err(Error::Domain(format!(
                "agent {agent} out of range (n = {})",
                self.agents()
            )));
        }
        Ok(())
    }

    /// Distribution of `agent`'s posterior, equal posteriors merged.
    pub fn posterior_dist(&self, agent: usize) -> Result<SimplexDist> {
        self.check_agent(agent)?;
        let atoms = self
            .state_signal_table(agent)
            .into_iter()
            .filter_map(normalize);
        SimplexDist::new(self.m, atoms)
    }

    /// Beliefs about state 1 for binary-state structures.
    pub fn posterior_binary(&self, agent: usize) -> Result<AtomicDist> {
        self.posterior_dist(agent)?.to_binary()
    }

    /// Posterior distribution when the whole profile is observed.
    pub fn profile_posterior_dist(&self) -> SimplexDist {
        let p = self.profiles();
        let atoms = (0..p).filter_map(|j| normalize((0..self.m).map(|k| self.pmf[k * p + j]).collect()));
        SimplexDist::new(self.m, atoms).expect("valid structure")
    }

    /// Signals mutually independent: the profile marginal is within `tol`
    /// (total variation) of the product of per-agent marginals.
    pub fn is_private_private(&self, tol: f64) -> bool {
        let margins: Vec<Vec<f64>> = (0..self.agents()).map(|i| self.signal_marginal(i)).collect();
        let joint = self.joint_signal_marginal();
        let tv: f64 = joint
            .iter()
            .enumerate()
            .map(|(j, pj)| {
                let prod: f64 = (0..self.agents()).map(|i| margins[i][self.signal(j, i)]).product();
                (pj - prod).abs()
            })
            .sum::<f64>()
            / 2.0;
        tv <= tol
    }

    /// Every positive-probability profile pins down the state.
    pub fn is_perfect(&self) -> bool {
        let p = self.profiles();
        (0..p).all(|j| {
            let live = (0..self.m).filter(|&k| self.pmf[k * p + j] > ZERO_MASS).count();
            live <= 1
        })
    }

    /// Same posterior distribution for every agent.
    pub fn equivalent(&self, other: &FiniteStructure, tol: f64) -> Result<bool> {
        if self.m != other.m || self.agents() != other.agents() {
            return Err(Error::Domain(format!(
                "cannot compare (m={}, n={}) with (m={}, n={})",
                self.m,
                self.agents(),
                other.m,
                other.agents()
            )));
        }
        for i in 0..self.agents() {
            if !self.posterior_dist(i)?.approx_eq(&other.posterior_dist(i)?, tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Relabels each agent's signal by its induced posterior.
    pub fn direct_revelation(&self) -> DirectRevelation {
        let n = self.agents();
        let mut relabel = Vec::with_capacity(n);
        let mut posteriors = Vec::with_capacity(n);
        for i in 0..n {
            let mut labels: Vec<Vec<f64>> = Vec::new();
            let map: Vec<Option<usize>> = self
                .signal_posteriors(i)
                .into_iter()
                .map(|q| {
                    let q = q?;
                    Some(match labels.iter().position(|l| max_abs_diff(l, &q) <= POSTERIOR_MERGE_TOL) {
                        Some(pos) => pos,
                        None => {
                            labels.push(q);
                            labels.len() - 1
                        }
                    })
                })
                .collect();
            relabel.push(map);
            posteriors.push(labels);
        }
        let alphabets: Vec<usize> = posteriors.iter().map(Vec::len).collect();
        let p = self.profiles();
        let mut entries = Vec::new();
        for k in 0..self.m {
            for j in 0..p {
                let mass = self.pmf[k * p + j];
                if mass <= 0.0 {
                    continue;
                }
                let sig: Option<Vec<usize>> = (0..n).map(|i| relabel[i][self.signal(j, i)]).collect();
                if let Some(sig) = sig {
                    entries.push((k, sig, mass));
                }
            }
        }
        let structure =
            FiniteStructure::from_entries(self.m, alphabets, entries).expect("relabeling keeps mass");
        DirectRevelation {
            structure,
            posteriors,
        }
    }

    /// Passes `agent`'s signal through a row-stochastic matrix
    /// (`kernel[v][w] = P(new = w | old = v)`), independently of everything else.
    pub fn garble(&self, agent: usize, kernel: &[Vec<f64>]) -> Result<FiniteStructure> {
        self.check_agent(agent)?;
        if kernel.len() != self.alphabets[agent] {
            return Err(Error::Domain("garbling has wrong number of rows".into()));
        }
        let out = kernel.first().map(Vec::len).unwrap_or(0);
        for row in kernel {
            if row.len() != out || row.iter().any(|v| *v < 0.0) || (row.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(Error::Domain("garbling rows must be probability vectors".into()));
            }
        }
        let mut alphabets = self.alphabets.clone();
        alphabets[agent] = out;
        let p = self.profiles();
        let mut entries = Vec::new();
        for k in 0..self.m {
            for j in 0..p {
                let mass = self.pmf[k * p + j];
                if mass == 0.0 {
                    continue;
                }
                let sig = self.profile_signals(j);
                for (w, g) in kernel[sig[agent]].iter().enumerate() {
                    if *g > 0.0 {
                        let mut s = sig.clone();
                        s[agent] = w;
                        entries.push((k, s, mass * g));
                    }
                }
            }
        }
        FiniteStructure::from_entries(self.m, alphabets, entries)
    }

    /// Keeps only the listed agents (in the given order).
    pub fn restrict(&self, agents: &[usize]) -> Result<FiniteStructure> {
        for &a in agents {
            self.check_agent(a)?;
        }
        let alphabets: Vec<usize> = agents.iter().map(|&a| self.alphabets[a]).collect();
        let p = self.profiles();
        let entries = (0..self.m).flat_map(|k| {
            (0..p).map(move |j| {
                let sig = agents.iter().map(|&a| self.signal(j, a)).collect();
                (k, sig, self.pmf[k * p + j])
            })
        });
        FiniteStructure::from_entries(self.m, alphabets, entries.collect::<Vec<_>>())
    }

    /// Sparse JSON: `{"m":2,"n":2,"alphabets":[2,2],"pmf":[{"state":0,"signals":[0,0],"p":0.375},…]}`.
    pub fn to_json(&self) -> Value {
        let p = self.profiles();
        let mut entries = Vec::new();
        for k in 0..self.m {
            for j in 0..p {
                let v = self.pmf[k * p + j];
                if v != 0.0 {
                    entries.push(json!({"state": k, "signals": self.profile_signals(j), "p": v}));
                }
            }
        }
        json!({
            "m": self.m,
            "n": self.agents(),
            "alphabets": self.alphabets,
            "pmf": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let m = get_usize(v, "m")?;
        let n = get_usize(v, "n")?;
        let alphabets: Vec<usize> = v
            .get("alphabets")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("alphabets", "expected an array of sizes"))?
            .iter()
            .enumerate()
            .map(|(i, a)| {
                a.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| Error::parse(format!("alphabets[{i}]"), "expected a positive integer"))
            })
            .collect::<Result<_>>()?;
        if alphabets.len() != n {
            return Err(Error::parse("alphabets", format!("length {} != n = {n}", alphabets.len())));
        }
        let pmf = v
            .get("pmf")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("pmf", "expected an array of entries"))?;
        let mut entries = Vec::with_capacity(pmf.len());
        for (i, e) in pmf.iter().enumerate() {
            let state = e
                .get("state")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::parse(format!("pmf[{i}].state"), "expected a state index"))?;
            let signals = e
                .get("signals")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(format!("pmf[{i}].signals"), "expected an array"))?
                .iter()
                .map(|s| s.as_u64().map(|x| x as usize))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::parse(format!("pmf[{i}].signals"), "expected integers"))?;
            let p = e
                .get("p")
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::parse(format!("pmf[{i}].p"), "expected a probability"))?;
            entries.push((state as usize, signals, p));
        }
        Self::from_entries(m, alphabets, entries)
    }
}

pub(crate) fn get_usize(v: &Value, field: &str) -> Result<usize> {
    v.get(field)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(field, "expected a non-negative integer"))
}

fn normalize(row: Vec<f64>) -> Option<(Vec<f64>, f64)> {
    let total: f64 = row.iter().sum();
    if total <= ZERO_MASS {
        return None;
    }
    Some((row.into_iter().map(|v| v / total).collect(), total))
}

#[derive(Clone, Debug)]
pub struct DirectRevelation {
    pub structure: FiniteStructure,
    /// `posteriors[i][v]`: the belief that relabeled signal `v` of agent `i` stands for.
    pub posteriors: Vec<Vec<Vec<f64>>>,
}

fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Splits a secret `t ∈ [0,1)` into two shares, each uniform on its own:
/// `r1 = u`, `r2 = frac(r1 + t)`.
pub fn split_secret(t: f64, u: f64) -> Result<(f64, f64)> {
    for (name, v) in [("t", t), ("u", u)] {
        if !(0.0..1.0).contains(&v) {
            return Err(Error::Domain(format!("{name} = {v} outside [0,1)")));
        }
    }
    Ok((u, frac(u + t)))
}

/// `frac(r2 - r1)`.
pub fn reconstruct_secret(r1: f64, r2: f64) -> f64 {
    frac(r2 - r1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn posterior_examples() {
        let s = fixtures::symmetric_binary(0.75);
        let mu = s.posterior_binary(0).unwrap();
        assert_eq!(mu, AtomicDist::new([(0.25, 0.5), (0.75, 0.5)]).unwrap());

        let u = fixtures::uninformative(&[0.3, 0.7], &[3, 2]);
        let d = u.posterior_dist(1).unwrap();
        assert_eq!(d.atoms().len(), 1);
        assert!(max_abs_diff(&d.atoms()[0].0, &[0.3, 0.7]) < 1e-12);

        let t = fixtures::three_state_protected_signal();
        let d = t.posterior_dist(0).unwrap();
        assert_eq!(d.atoms().len(), 2);
        assert!(max_abs_diff(&d.atoms()[0].0, &[0.0, 0.5, 0.5]) < 1e-15);
        assert!(max_abs_diff(&d.atoms()[1].0, &[0.5, 0.5, 0.0]) < 1e-15);
        assert!(d.atoms().iter().all(|a| (a.1 - 0.5).abs() < 1e-15));
        assert!(s.posterior_dist(1).is_err());
    }

    #[test]
    fn zero_probability_signals_are_skipped() {
        let s = FiniteStructure::new(2, vec![3], vec![0.25, 0.25, 0.0, 0.25, 0.25, 0.0]).unwrap();
        let d = s.posterior_dist(0).unwrap();
        assert_eq!(d.atoms().len(), 1);
        assert!(s.signal_posteriors(0)[2].is_none());
    }

    #[test]
    fn independence_examples() {
        // product signal marginal, state correlated with both
        let s = structure_from_grid(&GridPartition::from_set(&fixtures::threshold_triangle_grid(8))).unwrap();
        assert!(s.is_private_private(1e-12));
        // both agents see the state
        let copy = FiniteStructure::from_entries(2, vec![2, 2], [(0, vec![0, 0], 0.5), (1, vec![1, 1], 0.5)]).unwrap();
        assert!(!copy.is_private_private(1e-9));
        assert!(!fixtures::conditionally_independent(0.75).is_private_private(1e-9));
    }

    #[test]
    fn perfection_examples() {
        assert!(structure_from_grid(&GridPartition::from_set(&fixtures::threshold_triangle_grid(16))).unwrap().is_perfect());
        assert!(!fixtures::conditionally_independent(0.75).is_perfect());
        assert!(structure_from_grid(&GridPartition::from_set(&fixtures::quarter_blocks_grid(4))).unwrap().is_perfect());
    }

    #[test]
    fn equivalence_examples() {
        let blocks = structure_from_grid(&GridPartition::from_set(&fixtures::quarter_blocks_grid(4))).unwrap();
        let dr = blocks.direct_revelation().structure;
        assert!(blocks.equivalent(&dr, 1e-12).unwrap());

        let pair = fixtures::quarter_pair_structure();
        assert!(pair.equivalent(&blocks, 1e-12).unwrap());

        let flat = fixtures::uninformative(&[0.5, 0.5], &[2, 2]);
        assert!(!pair.equivalent(&flat, 1e-9).unwrap());
        assert!(pair.equivalent(&fixtures::symmetric_binary(0.75), 1e-9).is_err());
    }

    #[test]
    fn direct_revelation_examples() {
        let pair = fixtures::quarter_pair_structure();
        let dr = pair.direct_revelation();
        assert_eq!(dr.structure.alphabets(), &[2, 2]);
        assert!(dr.structure.equivalent(&pair, 1e-12).unwrap());

        // duplicate a signal value: the alphabet shrinks back
        let split = fixtures::symmetric_binary(0.75)
            .garble(0, &[vec![0.5, 0.5, 0.0], vec![0.0, 0.0, 1.0]])
            .unwrap();
        assert_eq!(split.alphabets(), &[3]);
        let dr = split.direct_revelation();
        assert_eq!(dr.structure.alphabets(), &[2]);

        let blocks = structure_from_grid(&GridPartition::from_set(&fixtures::quarter_blocks_grid(4))).unwrap();
        let dr = blocks.direct_revelation();
        assert_eq!(dr.structure.alphabets(), &[2, 2]);
        for agent in 0..2 {
            let mut beliefs: Vec<f64> = dr.posteriors[agent].iter().map(|q| q[1]).collect();
            beliefs.sort_by(f64::total_cmp);
            assert_eq!(beliefs, vec![0.25, 0.75]);
            // each relabeled value is its own posterior
            for (v, q) in dr.structure.signal_posteriors(agent).into_iter().enumerate() {
                assert!(max_abs_diff(&q.unwrap(), &dr.posteriors[agent][v]) < 1e-12);
            }
        }
    }

    #[test]
    fn secret_sharing_examples() {
        let (r1, r2) = split_secret(0.9, 0.3).unwrap();
        assert_eq!(r1, 0.3);
        assert!((r2 - 0.2).abs() < 1e-15);
        assert!((reconstruct_secret(r1, r2) - 0.9).abs() < 1e-15);

        let (r1, r2) = split_secret(0.0, 0.42).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(reconstruct_secret(r1, r2), 0.0);

        let (_, r2) = split_secret(0.5, 0.5).unwrap();
        assert_eq!(r2, 0.0);
        assert_eq!(reconstruct_secret(0.5, r2), 0.5);

        assert!(split_secret(1.0, 0.2).is_err());
        assert!(split_secret(0.2, -0.1).is_err());
    }

    #[test]
    fn secret_sharing_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100_000 {
            let t: f64 = rng.gen();
            let u: f64 = rng.gen();
            let (r1, r2) = split_secret(t, u).unwrap();
            let back = reconstruct_secret(r1, r2);
            let d = (back - t).abs();
            assert!(d.min(1.0 - d) <= 1e-15, "t={t} u={u} back={back}");
        }
    }

    #[test]
    fn martingale_property() {
        for s in [
            fixtures::symmetric_binary(0.8),
            fixtures::conditionally_independent(0.6),
            fixtures::three_state_protected_signal(),
            fixtures::two_bit_structure(),
            structure_from_grid(&fixtures::three_state_ladder_partition(20, 0.25)).unwrap(),
        ] {
            let prior = s.prior();
            for i in 0..s.agents() {
                assert!(max_abs_diff(&s.posterior_dist(i).unwrap().mean(), &prior) < 1e-10);
            }
        }
    }

    #[test]
    fn validation_errors() {
        assert!(FiniteStructure::new(2, vec![2], vec![0.5, 0.5, 0.0]).is_err());
        assert!(FiniteStructure::new(2, vec![2], vec![0.5, 0.6, 0.0, -0.1]).is_err());
        assert!(FiniteStructure::new(2, vec![2], vec![0.5, 0.5, 0.0, 0.0]).is_err());
        assert!(FiniteStructure::new(2, vec![2], vec![0.5, 0.5, 0.1, 0.0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = fixtures::quarter_pair_structure();
        let v = s.to_json();
        assert_eq!(v["m"], 2);
        assert_eq!(v["alphabets"], json!([2, 2]));
        assert_eq!(FiniteStructure::from_json(&v).unwrap(), s);
        let bad = json!({"m": 2, "n": 1, "alphabets": [2], "pmf": [{"state": 0, "signals": [0]}]});
        match FiniteStructure::from_json(&bad) {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "pmf[0].p"),
            other => panic!("{other:?}"),
        }
    }
}
