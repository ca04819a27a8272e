//! Pareto-optimality and set-of-uniqueness tests.
//!
//! In two dimensions a binary grid set is determined by its projections iff
//! its sorted row counts form the conjugate partition of its sorted column
//! counts. The fuzzy LP in [`partition_uniqueness_grid`] is the general test;
//! the matrix tests are fast specializations cross-checked against it.

use serde_json::{json, Value};

use crate::belief::{convex_order_distance, AtomicDist};
use crate::error::{Error, Result};
use crate::lp::{Cmp, LinearProgram, LpOutcome};
use crate::par::Exec;
use crate::structures::{GridPartition, GridSet};

/// Cell budget for [`brute_force_marginal_mates`].
pub const BRUTE_FORCE_MAX_CELLS: usize = 25;
/// Largest resolution accepted by [`partition_uniqueness_grid`] in 2D.
pub const PARTITION_MAX_RESOLUTION: usize = 32;
/// Largest resolution accepted by [`partition_uniqueness_grid`] in 3D.
pub const PARTITION_MAX_RESOLUTION_3D: usize = 8;
pub const PARTITION_MAX_STATES: usize = 4;
/// Non-indicator mass above which the fuzzy relaxation is not a singleton.
pub const PARTITION_TOL: f64 = 1e-7;

/// Two agents, binary state: Pareto optimal iff the second belief
/// distribution is the conjugate of the first.
///
/// Closeness is measured by the sup-distance between integrated CDFs, so a
/// grid approximation of a self-conjugate law passes with `tol` of order
/// `1/R²`.
pub fn is_pareto_optimal_2x2(mu1: &AtomicDist, mu2: &AtomicDist, tol: f64) -> Result<bool> {
    let (m1, m2) = (mu1.mean(), mu2.mean());
    if (m1 - m2).abs() > tol {
        return Err(Error::Precondition(format!(
            "not a feasible pair: means {m1} and {m2} differ"
        )));
    }
    Ok(convex_order_distance(mu2, &mu1.conjugate()) <= tol)
}

/// Dense 0/1 matrix, not necessarily square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl BinaryMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<bool>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid("binary matrix", "data length != rows * cols"));
        }
        Ok(BinaryMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::invalid("binary matrix", format!("row {i} has the wrong length")));
            }
            for v in row {
                match v {
                    0 => data.push(false),
                    1 => data.push(true),
                    _ => return Err(Error::invalid("binary matrix", "entries must be 0 or 1")),
                }
            }
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn from_grid(g: &GridSet) -> Result<Self> {
        if g.dim() != 2 {
            return Err(Error::Domain("matrix form needs a 2-dimensional grid".into()));
        }
        Self::new(g.resolution(), g.resolution(), g.cells().to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.cols + c]
    }

    fn flip(&mut self, r: usize, c: usize) {
        let i = r * self.cols + c;
        self.data[i] = !self.data[i];
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.iter().filter(|x| **x).count()).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.cols).map(|c| (0..self.rows).filter(|r| self.get(*r, c)).count()).collect()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<u8>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) as u8).collect())
            .collect();
        json!(rows)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| Error::parse("matrix", "expected nested arrays"))?;
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::parse(format!("matrix[{i}]"), "expected an array"))?
                .iter()
                .map(|x| x.as_u64().filter(|x| *x <= 1).map(|x| x as u8))
                .collect::<Option<Vec<u8>>>()
                .ok_or_else(|| Error::parse(format!("matrix[{i}]"), "entries must be 0 or 1"))?;
            out.push(row);
        }
        Self::from_rows(&out).map_err(|e| Error::parse("matrix", e.to_string()))
    }
}

/// Sorted row counts equal the conjugate partition of the column counts.
pub fn lorentz_matrix(mat: &BinaryMatrix) -> bool {
    let mut rows = mat.row_sums();
    rows.sort_unstable_by(|a, b| b.cmp(a));
    let cols = mat.col_sums();
    let conjugate: Vec<usize> = (1..=mat.rows()).map(|k| cols.iter().filter(|c| **c >= k).count()).collect();
    rows == conjugate
}

/// Lorentz rearrangement test for a 2-dimensional grid set.
pub fn lorentz_uniqueness_2d(g: &GridSet) -> Result<bool> {
    Ok(lorentz_matrix(&BinaryMatrix::from_grid(g)?))
}

/// A 2×2 switch `(r, r', c, c')` with ones at `(r,c)`, `(r',c')` and zeros at
/// `(r,c')`, `(r',c)`, if any.
pub fn find_switch(mat: &BinaryMatrix) -> Option<(usize, usize, usize, usize)> {
    for r in 0..mat.rows() {
        for r2 in 0..mat.rows() {
            if r == r2 {
                continue;
            }
            for c in 0..mat.cols() {
                if !mat.get(r, c) || mat.get(r2, c) {
                    continue;
                }
                for c2 in 0..mat.cols() {
                    if mat.get(r2, c2) && !mat.get(r, c2) {
                        return Some((r, r2, c, c2));
                    }
                }
            }
        }
    }
    None
}

/// True iff the matrix has no switch.
pub fn switch_uniqueness_matrix(mat: &BinaryMatrix) -> bool {
    find_switch(mat).is_none()
}

/// The matrix obtained by applying a switch, if one exists.
pub fn switched_mate(mat: &BinaryMatrix) -> Option<BinaryMatrix> {
    let (r, r2, c, c2) = find_switch(mat)?;
    let mut out = mat.clone();
    for (a, b) in [(r, c), (r, c2), (r2, c), (r2, c2)] {
        out.flip(a, b);
    }
    Some(out)
}

/// Every 0/1 matrix with the same row and column sums, in lexicographic order.
pub fn brute_force_marginal_mates(mat: &BinaryMatrix) -> Result<Vec<BinaryMatrix>> {
    let cells = mat.rows() * mat.cols();
    if cells > BRUTE_FORCE_MAX_CELLS {
        return Err(Error::Budget(format!(
            "{cells} cells exceed the enumeration budget of {BRUTE_FORCE_MAX_CELLS}"
        )));
    }
    let rows = mat.row_sums();
    let mut remaining = mat.col_sums();
    let mut current = vec![false; cells];
    let mut out = Vec::new();
    fill_row(mat, &rows, 0, &mut remaining, &mut current, &mut out);
    Ok(out)
}

fn fill_row(
    shape: &BinaryMatrix,
    rows: &[usize],
    r: usize,
    remaining: &mut Vec<usize>,
    current: &mut Vec<bool>,
    out: &mut Vec<BinaryMatrix>,
) {
    if r == shape.rows() {
        if remaining.iter().all(|c| *c == 0) {
            out.push(BinaryMatrix::new(shape.rows(), shape.cols(), current.clone()).expect("shape"));
        }
        return;
    }
    // columns still needing more ones than rows left cannot be completed
    let rows_left = shape.rows() - r;
    if remaining.iter().any(|c| *c > rows_left) {
        return;
    }
    choose(shape, rows, r, 0, rows[r], remaining, current, out);
}

#[allow(clippy::too_many_arguments)]
fn choose(
    shape: &BinaryMatrix,
    rows: &[usize],
    r: usize,
    c: usize,
    need: usize,
    remaining: &mut Vec<usize>,
    current: &mut Vec<bool>,
    out: &mut Vec<BinaryMatrix>,
) {
    if need == 0 {
        fill_row(shape, rows, r + 1, remaining, current, out);
        return;
    }
    if shape.cols() - c < need {
        return;
    }
    // leave column c empty first so results come out in lexicographic order
    choose(shape, rows, r, c + 1, need, remaining, current, out);
    if remaining[c] > 0 {
        remaining[c] -= 1;
        current[r * shape.cols() + c] = true;
        choose(shape, rows, r, c + 1, need - 1, remaining, current, out);
        current[r * shape.cols() + c] = false;
        remaining[c] += 1;
    }
}

/// Looks for `h_i` with values in `[-1, 1]` such that `Σ_i h_i(x_i) ≥ 0` on
/// the set and `≤ -epsilon` off it. Returns `h[axis][cell]` on success.
pub fn additive_set_test(g: &GridSet, epsilon: f64, exec: Exec) -> Result<Option<Vec<Vec<f64>>>> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let (n, r) = (g.dim(), g.resolution());
    // g = h + 1 keeps every variable nonnegative
    let var = |axis: usize, j: usize| axis * r + j;
    let mut lp = LinearProgram::<f64>::new(n * r);
    for v in 0..n * r {
        lp.add_row([(v, 1.0)], Cmp::Le, 2.0);
    }
    for (idx, member) in g.cells().iter().enumerate() {
        let coeffs: Vec<(usize, f64)> = (0..n)
            .map(|axis| (var(axis, (idx / r.pow((n - 1 - axis) as u32)) % r), 1.0))
            .collect();
        if *member {
            lp.add_row(coeffs, Cmp::Ge, n as f64);
        } else {
            lp.add_row(coeffs, Cmp::Le, n as f64 - epsilon);
        }
    }
    Ok(match lp.solve(exec) {
        LpOutcome::Optimal { x, .. } => Some(
            (0..n)
                .map(|axis| (0..r).map(|j| (x[var(axis, j)] - 1.0).clamp(-1.0, 1.0)).collect())
                .collect(),
        ),
        _ => None,
    })
}

/// Whether a partition is the only fuzzy partition with its per-state
/// projections.
///
/// One LP maximizes the total weight that any fuzzy partition with the same
/// projections can put on labels other than the indicator's; the partition
/// is unique iff that maximum is at most [`PARTITION_TOL`].
pub fn partition_uniqueness_grid(g: &GridPartition, exec: Exec) -> Result<bool> {
    let (n, r, m) = (g.dim(), g.resolution(), g.states());
    let max_r = if n == 2 { PARTITION_MAX_RESOLUTION } else { PARTITION_MAX_RESOLUTION_3D };
    if r > max_r || m > PARTITION_MAX_STATES {
        return Err(Error::Budget(format!(
            "partition LP limited to R <= {max_r} and m <= {PARTITION_MAX_STATES} (got R = {r}, m = {m})"
        )));
    }
    let cells = g.cells();
    let var = |idx: usize, k: usize| idx * m + k;
    let mut lp = LinearProgram::<f64>::new(cells.len() * m);
    for (idx, label) in cells.iter().enumerate() {
        lp.add_row((0..m).map(|k| (var(idx, k), 1.0)), Cmp::Eq, 1.0);
        for k in 0..m {
            if k != *label {
                lp.set_objective(var(idx, k), 1.0);
            }
        }
    }
    for axis in 0..n {
        let stride = r.pow((n - 1 - axis) as u32);
        for j in 0..r {
            let slice: Vec<usize> = (0..cells.len()).filter(|idx| (idx / stride) % r == j).collect();
            for k in 0..m {
                let count = slice.iter().filter(|idx| cells[**idx] == k).count();
                lp.add_row(slice.iter().map(|idx| (var(*idx, k), 1.0)), Cmp::Eq, count as f64);
            }
        }
    }
    match lp.solve(exec) {
        LpOutcome::Optimal { value, .. } => Ok(value <= PARTITION_TOL),
        LpOutcome::Infeasible => Err(Error::Lp("infeasible")),
        LpOutcome::Unbounded => Err(Error::Lp("unbounded")),
    }
}

/// Uniqueness verdict with a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessReport {
    pub unique: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// A different set with the same projections.
    Mate(BinaryMatrix),
    /// Additive representation `h[axis][cell]`.
    Additive(Vec<Vec<f64>>),
}

impl UniquenessReport {
    pub fn to_json(&self) -> Value {
        let witness = match &self.witness {
            None => Value::Null,
            Some(Witness::Mate(m)) => json!({"mate": m.to_json()}),
            Some(Witness::Additive(h)) => json!({"additive": h}),
        };
        json!({"unique": self.unique, "witness": witness})
    }
}

/// Verdict for a grid set. In 2D the Lorentz test decides and the witness is
/// a switched mate or an additive representation; in 3D the fuzzy LP
/// decides and an additive witness is attached when one exists.
pub fn grid_set_report(g: &GridSet, exec: Exec) -> Result<UniquenessReport> {
    let r = g.resolution() as f64;
    let additive = |g: &GridSet| -> Result<Option<Vec<Vec<f64>>>> {
        for eps in [1.0 / (4.0 * r), 1.0 / (8.0 * r)] {
            if let Some(h) = additive_set_test(g, eps, exec)? {
                return Ok(Some(h));
            }
        }
        Ok(None)
    };
    if g.dim() == 2 {
        let mat = BinaryMatrix::from_grid(g)?;
        if let Some(mate) = switched_mate(&mat) {
            return Ok(UniquenessReport {
                unique: false,
                witness: Some(Witness::Mate(mate)),
            });
        }
        return Ok(UniquenessReport {
            unique: true,
            witness: additive(g)?.map(Witness::Additive),
        });
    }
    if let Some(h) = additive(g)? {
        return Ok(UniquenessReport {
            unique: true,
            witness: Some(Witness::Additive(h)),
        });
    }
    Ok(UniquenessReport {
        unique: partition_uniqueness_grid(&GridPartition::from_set(g), exec)?,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn m(rows: &[&[u8]]) -> BinaryMatrix {
        BinaryMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn pareto_examples() {
        let u = AtomicDist::uniform_grid(256).unwrap();
        assert!(is_pareto_optimal_2x2(&u, &u, 1.0 / 256.0f64.powi(2)).unwrap());
        let q = AtomicDist::new([(0.25, 0.5), (0.75, 0.5)]).unwrap();
        assert!(!is_pareto_optimal_2x2(&q, &q, 1e-9).unwrap());
        let point = AtomicDist::point_mass(0.5).unwrap();
        let full = AtomicDist::fully_revealing(0.5).unwrap();
        assert!(is_pareto_optimal_2x2(&point, &full, 1e-12).unwrap());
        assert!(matches!(
            is_pareto_optimal_2x2(&point, &AtomicDist::point_mass(0.4).unwrap(), 1e-9),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn lorentz_examples() {
        assert!(lorentz_uniqueness_2d(&fixtures::threshold_triangle_grid(8)).unwrap());
        assert!(!lorentz_uniqueness_2d(&fixtures::quarter_blocks_grid(4)).unwrap());
        assert!(lorentz_uniqueness_2d(&GridSet::from_fn(2, 6, |_| true).unwrap()).unwrap());
        let cube = GridSet::from_fn(3, 2, |_| true).unwrap();
        assert!(lorentz_uniqueness_2d(&cube).is_err());
    }

    #[test]
    fn switch_examples() {
        assert!(!switch_uniqueness_matrix(&m(&[&[1, 0], &[0, 1]])));
        assert!(switch_uniqueness_matrix(&m(&[&[1, 1], &[0, 0]])));
        assert!(switch_uniqueness_matrix(&m(&[&[1, 1, 1], &[1, 1, 0], &[1, 0, 0]])));
        let mate = switched_mate(&m(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(mate, m(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_marginal_mates(&m(&[&[1, 0], &[0, 1]])).unwrap().len(), 2);
        assert_eq!(brute_force_marginal_mates(&m(&[&[1, 1], &[0, 0]])).unwrap().len(), 1);
        let staircase = m(&[&[1, 1, 1], &[1, 1, 0], &[1, 0, 0]]);
        assert_eq!(brute_force_marginal_mates(&staircase).unwrap(), vec![staircase]);
        let blocks = BinaryMatrix::from_grid(&fixtures::quarter_blocks_grid(4)).unwrap();
        let mates = brute_force_marginal_mates(&blocks).unwrap();
        assert!(mates.len() >= 2);
        assert!(mates.contains(&blocks));
        let big = BinaryMatrix::new(6, 5, vec![false; 30]).unwrap();
        assert!(matches!(brute_force_marginal_mates(&big), Err(Error::Budget(_))));
    }

    fn check_witness(g: &GridSet, h: &[Vec<f64>], eps: f64) {
        let (n, r) = (g.dim(), g.resolution());
        for (idx, member) in g.cells().iter().enumerate() {
            let s: f64 = (0..n).map(|a| h[a][(idx / r.pow((n - 1 - a) as u32)) % r]).sum();
            if *member {
                assert!(s >= -1e-9, "cell {idx}: {s}");
            } else {
                assert!(s <= -eps + 1e-9, "cell {idx}: {s}");
            }
        }
        assert!(h.iter().flatten().all(|v| v.abs() <= 1.0));
    }

    #[test]
    fn additive_examples() {
        let r = 8;
        let half = GridSet::from_fn(2, r, |c| c[0] + c[1] + 1 >= r).unwrap();
        let eps = 1.0 / (4.0 * r as f64);
        let h = additive_set_test(&half, eps, Exec::Sequential).unwrap().unwrap();
        check_witness(&half, &h, eps);
        // the centred linear witness is also valid
        let linear: Vec<Vec<f64>> = (0..2).map(|_| (0..r).map(|j| (j as f64 + 0.5) / r as f64 - 0.5).collect()).collect();
        check_witness(&half, &linear, eps);

        assert!(additive_set_test(&fixtures::quarter_blocks_grid(4), 1e-3, Exec::Sequential).unwrap().is_none());

        let majority = GridSet::from_fn(3, 2, |c| c.iter().sum::<usize>() >= 2).unwrap();
        let h = additive_set_test(&majority, 0.1, Exec::Sequential).unwrap().unwrap();
        check_witness(&majority, &h, 0.1);
        check_witness(&majority, &vec![vec![-0.9, 1.0]; 3], 0.1);

        assert!(additive_set_test(&half, 0.0, Exec::Sequential).is_err());
    }

    #[test]
    fn partition_examples() {
        let tri = GridPartition::from_set(&fixtures::threshold_triangle_grid(8));
        assert!(partition_uniqueness_grid(&tri, Exec::Parallel).unwrap());
        let blocks = GridPartition::from_set(&fixtures::quarter_blocks_grid(4));
        assert!(!partition_uniqueness_grid(&blocks, Exec::Parallel).unwrap());
        let ladder = fixtures::three_state_ladder_partition(8, 0.25);
        assert!(partition_uniqueness_grid(&ladder, Exec::Parallel).unwrap());
        let a1 = GridPartition::from_set(&ladder.state_set(1));
        assert!(!partition_uniqueness_grid(&a1, Exec::Parallel).unwrap());
        let big = GridPartition::new(2, 33, vec![0; 33 * 33]).unwrap();
        assert!(matches!(partition_uniqueness_grid(&big, Exec::Parallel), Err(Error::Budget(_))));
    }

    #[test]
    fn reports() {
        let rep = grid_set_report(&fixtures::quarter_blocks_grid(4), Exec::Sequential).unwrap();
        assert!(!rep.unique);
        let Some(Witness::Mate(mate)) = &rep.witness else { panic!() };
        let orig = BinaryMatrix::from_grid(&fixtures::quarter_blocks_grid(4)).unwrap();
        assert_ne!(mate, &orig);
        assert_eq!(mate.row_sums(), orig.row_sums());
        assert_eq!(mate.col_sums(), orig.col_sums());

        let rep = grid_set_report(&fixtures::threshold_triangle_grid(6), Exec::Sequential).unwrap();
        assert!(rep.unique);
        assert!(matches!(rep.witness, Some(Witness::Additive(_))));
        assert_eq!(rep.to_json()["unique"], true);

        let majority = GridSet::from_fn(3, 2, |c| c.iter().sum::<usize>() >= 2).unwrap();
        assert!(grid_set_report(&majority, Exec::Sequential).unwrap().unique);
    }

    #[test]
    fn matrix_json() {
        let a = m(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(BinaryMatrix::from_json(&a.to_json()).unwrap(), a);
        assert!(BinaryMatrix::from_json(&json!([[1, 2]])).is_err());
    }

    fn matrix(max: usize) -> impl Strategy<Value = BinaryMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            prop::collection::vec(any::<bool>(), r * c).prop_map(move |d| BinaryMatrix::new(r, c, d).unwrap())
        })
    }

    fn square_grid(max: usize) -> impl Strategy<Value = GridSet> {
        (1..=max).prop_flat_map(|r| {
            prop::collection::vec(any::<bool>(), r * r).prop_map(move |d| GridSet::new(2, r, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn matrix_oracles_agree(mat in matrix(5)) {
            let brute = brute_force_marginal_mates(&mat).unwrap();
            prop_assert!(brute.contains(&mat));
            let unique = brute.len() == 1;
            prop_assert_eq!(switch_uniqueness_matrix(&mat), unique);
            prop_assert_eq!(lorentz_matrix(&mat), unique);
            if let Some(mate) = switched_mate(&mat) {
                prop_assert!(brute.contains(&mate));
            }
        }

        #[test]
        fn additive_implies_unique(g in square_grid(5)) {
            let eps = 1.0 / (4.0 * g.resolution() as f64);
            if let Some(h) = additive_set_test(&g, eps, Exec::Sequential).unwrap() {
                check_witness(&g, &h, eps);
                let mat = BinaryMatrix::from_grid(&g).unwrap();
                prop_assert_eq!(brute_force_marginal_mates(&mat).unwrap().len(), 1);
            }
        }

        #[test]
        fn lorentz_iff_additive(g in square_grid(7)) {
            let r = g.resolution() as f64;
            let additive = [1.0 / (4.0 * r), 1.0 / (8.0 * r)]
                .iter()
                .any(|eps| additive_set_test(&g, *eps, Exec::Sequential).unwrap().is_some());
            prop_assert_eq!(lorentz_uniqueness_2d(&g).unwrap(), additive);
        }

        #[test]
        fn partition_lp_agrees_with_lorentz(g in square_grid(6)) {
            let p = GridPartition::from_set(&g);
            prop_assert_eq!(partition_uniqueness_grid(&p, Exec::Sequential).unwrap(), lorentz_uniqueness_2d(&g).unwrap());
        }

        #[test]
        fn conjugate_pairs_are_pareto(atoms in prop::collection::vec((0.0f64..=1.0, 0.01f64..1.0), 1..6)) {
            let total: f64 = atoms.iter().map(|a| a.1).sum();
            let mu = AtomicDist::new(atoms.into_iter().map(|(x, w)| (x, w / total))).unwrap();
            prop_assert!(is_pareto_optimal_2x2(&mu, &mu.conjugate(), 1e-9).unwrap());
            let c = mu.conjugate();
            if c.len() > 1 {
                // a strict contraction of the conjugate keeps the mean but is dominated
                let mean = c.mean();
                let shrunk = AtomicDist::new(c.atoms().iter().map(|a| (mean + 0.5 * (a.x - mean), a.w))).unwrap();
                prop_assert!(!is_pareto_optimal_2x2(&mu, &shrunk, 1e-9).unwrap());
            }
        }
    }
}
