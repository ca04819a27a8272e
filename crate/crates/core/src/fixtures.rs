//! Ready-made structures and grids used throughout the test suites and the CLI.

use crate::structures::{FiniteStructure, GridPartition, GridSet};

/// One agent, prior ½, signal equal to the state with probability `r`.
pub fn symmetric_binary(r: f64) -> FiniteStructure {
    FiniteStructure::from_entries(
        2,
        vec![2],
        (0..2).flat_map(|k| (0..2).map(move |s| (k, vec![s], if s == k { r / 2.0 } else { (1.0 - r) / 2.0 }))),
    )
    .expect("r in [0,1]")
}

/// Two agents whose signals each match the state with probability `r`,
/// independently given the state; prior ½.
pub fn conditionally_independent(r: f64) -> FiniteStructure {
    let acc = |s: usize, k: usize| if s == k { r } else { 1.0 - r };
    let mut entries = Vec::new();
    for k in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                entries.push((k, vec![a, b], 0.5 * acc(a, k) * acc(b, k)));
            }
        }
    }
    FiniteStructure::from_entries(2, vec![2, 2], entries).expect("r in [0,1]")
}

/// Signals independent of the state and uniform over the given alphabets.
pub fn uninformative(prior: &[f64], alphabets: &[usize]) -> FiniteStructure {
    let profiles: usize = alphabets.iter().product();
    let pmf = prior
        .iter()
        .flat_map(|p| std::iter::repeat(p / profiles as f64).take(profiles))
        .collect();
    FiniteStructure::new(prior.len(), alphabets.to_vec(), pmf).expect("valid prior")
}

/// Two agents, independent fair-coin signals; ω = 1 when both are high, with
/// probability ½ when they differ, never when both are low. Each agent ends
/// up believing ¼ or ¾.
pub fn quarter_pair_structure() -> FiniteStructure {
    let q = |a: usize, b: usize| (a + b) as f64 / 2.0;
    let mut entries = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            entries.push((1, vec![a, b], 0.25 * q(a, b)));
            entries.push((0, vec![a, b], 0.25 * (1.0 - q(a, b))));
        }
    }
    FiniteStructure::from_entries(2, vec![2, 2], entries).expect("valid table")
}

/// Block pattern at resolution `r` (a multiple of 4): the upper-right
/// quarter is full and the two off-diagonal quarters hold a diagonal stripe
/// of half their cells. Both projections are ¼ on the lower half and ¾ on the
/// upper half.
pub fn quarter_blocks_grid(r: usize) -> GridSet {
    assert!(r % 4 == 0 && r > 0, "resolution must be a positive multiple of 4");
    let q = r / 4;
    GridSet::from_fn(2, r, |c| {
        let (bi, bj) = (c[0] / q, c[1] / q);
        match (bi >= 2, bj >= 2) {
            (true, true) => true,
            (false, false) => false,
            _ => bi % 2 == bj % 2,
        }
    })
    .expect("valid shape")
}

/// Cells whose centre satisfies `s1 + s2 > 1`, i.e. `i + j ≥ R`.
pub fn threshold_triangle_grid(r: usize) -> GridSet {
    GridSet::from_fn(2, r, |c| c[0] + c[1] >= r).expect("valid shape")
}

/// Three-state ladder partition with parameter `beta ∈ [0, ¼]` at even
/// resolution `r`. On the left half (`t1 < ½`) the `t2` axis reads, bottom to
/// top, label 0 on `[0,β)`, 1 on `[β,½)`, 0 on `[½,1−β)`, 1 on `[1−β,1]`;
/// on the right half it reads 1 below ½ and 2 above. `β·R` is rounded half
/// away from zero.
pub fn three_state_ladder_partition(r: usize, beta: f64) -> GridPartition {
    assert!(r % 2 == 0 && r > 0, "resolution must be even");
    assert!((0.0..=0.25).contains(&beta), "beta must lie in [0, 1/4]");
    let h = r / 2;
    let b = (beta * r as f64).round() as usize;
    GridPartition::from_fn(2, r, |c| {
        let (i, j) = (c[0], c[1]);
        if i < h {
            match j {
                j if j < b => 0,
                j if j < h => 1,
                j if j < r - b => 0,
                _ => 1,
            }
        } else if j < h {
            1
        } else {
            2
        }
    })
    .expect("valid shape")
}

/// Four equally likely states `ω = 2·b1 + b2`; agent `i` observes bit `b_i`.
pub fn two_bit_structure() -> FiniteStructure {
    let entries = (0..2).flat_map(|b1| (0..2).map(move |b2| (2 * b1 + b2, vec![b1, b2], 0.25)));
    FiniteStructure::from_entries(4, vec![2, 2], entries).expect("valid table")
}

/// Prior (¼, ½, ¼) and a binary signal that rules out one extreme state:
/// the posteriors are (½, ½, 0) and (0, ½, ½), equally likely.
pub fn three_state_protected_signal() -> FiniteStructure {
    FiniteStructure::from_entries(
        3,
        vec![2],
        [
            (0, vec![0], 0.25),
            (1, vec![0], 0.25),
            (1, vec![1], 0.25),
            (2, vec![1], 0.25),
        ],
    )
    .expect("valid table")
}
