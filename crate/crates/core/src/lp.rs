//! Dense two-phase simplex over any [`Scalar`].
//!
//! Sizes here are modest (at most a few thousand columns), so a dense
//! tableau is the simplest thing that is fast enough. Over `BigRational` the
//! method is exact; over `f64` pivots and optimality use a fixed 1e-9
//! tolerance. Degenerate stalls fall back to Bland's rule, which cannot cycle.

use crate::par::Exec;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
struct Row<T> {
    coeffs: Vec<(usize, T)>,
    cmp: Cmp,
    rhs: T,
}

/// `maximize c·x` subject to linear rows, `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram<T: Scalar> {
    n_vars: usize,
    objective: Vec<T>,
    rows: Vec<Row<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

impl<T> LpOutcome<T> {
    pub fn optimal(self) -> Option<(Vec<T>, T)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

/// Tableaus with at least this many entries update rows in parallel.
const PARALLEL_PIVOT_CELLS: usize = 1 << 16;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_STALL: usize = 50;

fn tol<T: Scalar>() -> T {
    if T::eps() == T::zero() {
        T::zero()
    } else {
        T::from_f64(1e-9)
    }
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(n_vars: usize) -> Self {
        LinearProgram {
            n_vars,
            objective: vec![T::zero(); n_vars],
            rows: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn set_objective(&mut self, var: usize, c: T) {
        self.objective[var] = c;
    }

    /// Adds `Σ coeff·x[var] (cmp) rhs`. Repeated variables are summed.
    pub fn add_row(&mut self, coeffs: impl IntoIterator<Item = (usize, T)>, cmp: Cmp, rhs: T) {
        let coeffs: Vec<(usize, T)> = coeffs.into_iter().collect();
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.n_vars));
        self.rows.push(Row { coeffs, cmp, rhs });
    }

    pub fn solve(&self, exec: Exec) -> LpOutcome<T> {
        Tableau::build(self).run(exec)
    }
}

struct Tableau<T> {
    /// m constraint rows followed by the objective row; last column is rhs.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    n_struct: usize,
    n_slack: usize,
    n_art: usize,
    objective: Vec<T>,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let m = lp.rows.len();
        let mut n_slack = 0;
        let mut n_art = 0;
        let norm: Vec<(Cmp, bool)> = lp
            .rows
            .iter()
            .map(|r| {
                let flip = r.rhs < T::zero();
                let cmp = match (r.cmp, flip) {
                    (Cmp::Le, true) => Cmp::Ge,
                    (Cmp::Ge, true) => Cmp::Le,
                    (c, _) => c,
                };
                match cmp {
                    Cmp::Le => n_slack += 1,
                    Cmp::Ge => {
                        n_slack += 1;
                        n_art += 1
                    }
                    Cmp::Eq => n_art += 1,
                }
                (cmp, flip)
            })
            .collect();

        let n = lp.n_vars;
        let width = n + n_slack + n_art + 1;
        let mut rows = Vec::with_capacity(m + 1);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut a) = (n, n + n_slack);
        for (row, &(cmp, flip)) in lp.rows.iter().zip(&norm) {
            let mut v = vec![T::zero(); width];
            for (j, c) in &row.coeffs {
                v[*j] = v[*j].clone() + c.clone();
            }
            v[width - 1] = row.rhs.clone();
            if flip {
                for x in v.iter_mut() {
                    *x = -x.clone();
                }
            }
            match cmp {
                Cmp::Le => {
                    v[s] = T::one();
                    basis.push(s);
                    s += 1;
                }
                Cmp::Ge => {
                    v[s] = -T::one();
                    v[a] = T::one();
                    basis.push(a);
                    s += 1;
                    a += 1;
                }
                Cmp::Eq => {
                    v[a] = T::one();
                    basis.push(a);
                    a += 1;
                }
            }
            rows.push(v);
        }
        rows.push(vec![T::zero(); width]);
        Tableau {
            rows,
            basis,
            n_struct: n,
            n_slack,
            n_art,
            objective: lp.objective.clone(),
        }
    }

    fn m(&self) -> usize {
        self.basis.len()
    }

    fn width(&self) -> usize {
        self.n_struct + self.n_slack + self.n_art + 1
    }

    fn is_art(&self, j: usize) -> bool {
        j >= self.n_struct + self.n_slack && j < self.width() - 1
    }

    /// Loads `maximize c·x` into the objective row in reduced form.
    fn load_objective(&mut self, c: &[(usize, T)]) {
        let w = self.width();
        let m = self.m();
        let mut z = vec![T::zero(); w];
        for (j, cj) in c {
            z[*j] = z[*j].clone() - cj.clone();
        }
        for i in 0..m {
            let b = self.basis[i];
            let f = z[b].clone();
            if f != T::zero() {
                for (zj, rj) in z.iter_mut().zip(&self.rows[i]) {
                    *zj = zj.clone() - f.clone() * rj.clone();
                }
            }
        }
        self.rows[m] = z;
    }

    fn pivot(&mut self, r: usize, c: usize, exec: Exec) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() / p.clone();
        }
        let prow = self.rows[r].clone();
        let update = |i: usize, row: &mut Vec<T>| {
            if i == r {
                return;
            }
            let f = row[c].clone();
            if f == T::zero() {
                return;
            }
            for (x, pv) in row.iter_mut().zip(&prow) {
                if *pv != T::zero() {
                    *x = x.clone() - f.clone() * pv.clone();
                }
            }
            row[c] = T::zero();
        };
        let policy = if self.rows.len() * prow.len() >= PARALLEL_PIVOT_CELLS {
            exec
        } else {
            Exec::Sequential
        };
        policy.for_each_mut(&mut self.rows, update);
        self.basis[r] = c;
    }

    /// Runs simplex on the current objective row. `allowed` filters entering
    /// columns. Returns false if unbounded.
    fn optimize(&mut self, allowed: &dyn Fn(usize) -> bool, exec: Exec) -> bool {
        let eps = tol::<T>();
        let m = self.m();
        let rhs = self.width() - 1;
        let mut stall = 0usize;
        loop {
            let z = &self.rows[m];
            let bland = stall >= DEGENERATE_STALL;
            let mut enter = None;
            let mut best = -eps.clone();
            for j in 0..rhs {
                if !allowed(j) || z[j] >= -eps.clone() {
                    continue;
                }
                if bland {
                    enter = Some(j);
                    break;
                }
                if z[j] < best {
                    best = z[j].clone();
                    enter = Some(j);
                }
            }
            let Some(c) = enter else { return true };

            let mut leave: Option<(usize, T)> = None;
            for i in 0..m {
                let a = &self.rows[i][c];
                if *a <= eps {
                    continue;
                }
                let ratio = self.rows[i][rhs].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr.clone() - eps.clone()
                            || (ratio <= lr.clone() + eps.clone() && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = leave else { return false };
            if ratio.is_zero_tol() {
                stall += 1;
            } else {
                stall = 0;
            }
            self.pivot(r, c, exec);
        }
    }

    fn run(mut self, exec: Exec) -> LpOutcome<T> {
        let m = self.m();
        let rhs = self.width() - 1;
        let eps = tol::<T>();

        if self.n_art > 0 {
            let first_art = self.n_struct + self.n_slack;
            let phase1: Vec<(usize, T)> = (first_art..first_art + self.n_art)
                .map(|j| (j, -T::one()))
                .collect();
            self.load_objective(&phase1);
            self.optimize(&|_| true, exec);
            let scale = self.rows[..m]
                .iter()
                .map(|r| r[rhs].abs())
                .fold(T::one(), |a, b| a.max(b));
            if self.rows[m][rhs].clone() < -(eps.clone() * scale) {
                return LpOutcome::Infeasible;
            }
            // drive zero-level artificials out of the basis
            let mut i = 0;
            while i < self.m() {
                if self.is_art(self.basis[i]) {
                    let col = (0..first_art).find(|&j| self.rows[i][j].abs() > eps);
                    match col {
                        Some(j) => self.pivot(i, j, exec),
                        None => {
                            // redundant row
                            self.rows.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }

        let c: Vec<(usize, T)> = self
            .objective
            .iter()
            .cloned()
            .enumerate()
            .filter(|(_, v)| *v != T::zero())
            .collect();
        self.load_objective(&c);
        let limit = self.n_struct + self.n_slack;
        if !self.optimize(&|j| j < limit, exec) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![T::zero(); self.n_struct];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_struct {
                let v = self.rows[i][rhs].clone();
                x[b] = if v < T::zero() { T::zero() } else { v };
            }
        }
        let value = self
            .objective
            .iter()
            .zip(&x)
            .fold(T::zero(), |s, (c, v)| s + c.clone() * v.clone());
        LpOutcome::Optimal { x, value }
    }
}
