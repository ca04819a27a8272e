use serde_json::{json, Value};

use super::{get_usize, FiniteStructure};
use crate::error::{Error, Result};

fn check_shape(n: usize, r: usize) -> Result<usize> {
    if !(2..=3).contains(&n) {
        return Err(Error::invalid("grid", format!("dimension {n} not in {{2,3}}")));
    }
    if r == 0 {
        return Err(Error::invalid("grid", "resolution must be positive"));
    }
    r.checked_pow(n as u32)
        .filter(|c| *c <= 1 << 26)
        .ok_or_else(|| Error::Budget(format!("grid with {r}^{n} cells is too large")))
}

/// Coordinate of flat cell `idx` along `axis` (axis 0 most significant).
fn coord(idx: usize, axis: usize, n: usize, r: usize) -> usize {
    (idx / r.pow((n - 1 - axis) as u32)) % r
}

fn check_axis(axis: usize, n: usize) -> Result<()> {
    if axis >= n {
        return Err(Error::Domain(format!("axis {axis} out of range (n = {n})")));
    }
    Ok(())
}

/// Per-axis slice averages of a cell-wise quantity.
fn project(n: usize, r: usize, axis: usize, value: impl Fn(usize) -> f64) -> Vec<f64> {
    let cells = r.pow(n as u32);
    let mut acc = vec![0.0; r];
    for idx in 0..cells {
        acc[coord(idx, axis, n, r)] += value(idx);
    }
    let slice = (cells / r) as f64;
    acc.into_iter().map(|v| v / slice).collect()
}

/// Marginal averages of a grid object: value `j` is the mean over the slice
/// at position `j` on `axis`, which is agent `axis`'s posterior there.
pub trait Projections {
    /// `state` selects the label; `None` means state 1 for binary objects.
    fn projection(&self, axis: usize, state: Option<usize>) -> Result<Vec<f64>>;
}

/// Binary grid set on `[0,1]^n`, cells flattened row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSet {
    n: usize,
    r: usize,
    cells: Vec<bool>,
}

impl GridSet {
    pub fn new(n: usize, r: usize, cells: Vec<bool>) -> Result<Self> {
        let len = check_shape(n, r)?;
        if cells.len() != len {
            return Err(Error::invalid("grid set", format!("{} cells, expected {len}", cells.len())));
        }
        Ok(GridSet { n, r, cells })
    }

    pub fn from_fn(n: usize, r: usize, f: impl Fn(&[usize]) -> bool) -> Result<Self> {
        let len = check_shape(n, r)?;
        let cells = (0..len)
            .map(|idx| {
                let c: Vec<usize> = (0..n).map(|a| coord(idx, a, n, r)).collect();
                f(&c)
            })
            .collect();
        Ok(GridSet { n, r, cells })
    }

    /// Two-dimensional set from a row-major 0/1 matrix (rows are axis 0).
    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self> {
        let r = rows.len();
        if rows.iter().any(|row| row.len() != r) {
            return Err(Error::invalid("grid set", "matrix must be square"));
        }
        Self::new(2, r, rows.concat())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> usize {
        self.r
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn get(&self, coords: &[usize]) -> bool {
        self.cells[coords.iter().fold(0, |acc, c| acc * self.r + c)]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|c| **c).count()
    }

    /// Integer count of member cells in each slice along `axis`.
    pub fn projection_counts(&self, axis: usize) -> Result<Vec<usize>> {
        check_axis(axis, self.n)?;
        let mut acc = vec![0; self.r];
        for (idx, c) in self.cells.iter().enumerate() {
            if *c {
                acc[coord(idx, axis, self.n, self.r)] += 1;
            }
        }
        Ok(acc)
    }

    pub fn to_matrix(&self) -> Result<Vec<Vec<bool>>> {
        if self.n != 2 {
            return Err(Error::Domain("matrix form needs a 2-dimensional grid".into()));
        }
        Ok(self.cells.chunks(self.r).map(<[bool]>::to_vec).collect())
    }

    pub fn to_json(&self) -> Value {
        let ints: Vec<usize> = self.cells.iter().map(|c| *c as usize).collect();
        json!({"n": self.n, "R": self.r, "cells": nest(&ints, self.n, self.r)})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (n, r, flat) = parse_cells(v)?;
        let cells = flat
            .into_iter()
            .enumerate()
            .map(|(i, c)| match c {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(Error::parse(format!("cells[{i}]"), "expected 0 or 1")),
            })
            .collect::<Result<_>>()?;
        Self::new(n, r, cells)
    }
}

impl Projections for GridSet {
    fn projection(&self, axis: usize, state: Option<usize>) -> Result<Vec<f64>> {
        check_axis(axis, self.n)?;
        let want = match state {
            None | Some(1) => true,
            Some(0) => false,
            Some(k) => return Err(Error::Domain(format!("state {k} invalid for a binary set"))),
        };
        Ok(project(self.n, self.r, axis, |i| (self.cells[i] == want) as u8 as f64))
    }
}

/// Grid partition with state labels `0..m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPartition {
    n: usize,
    r: usize,
    m: usize,
    cells: Vec<usize>,
}

impl GridPartition {
    /// `m` is one more than the largest label.
    pub fn new(n: usize, r: usize, cells: Vec<usize>) -> Result<Self> {
        let len = check_shape(n, r)?;
        if cells.len() != len {
            return Err(Error::invalid("grid partition", format!("{} cells, expected {len}", cells.len())));
        }
        let m = cells.iter().max().map_or(1, |x| x + 1);
        Ok(GridPartition { n, r, m, cells })
    }

    /// Like [`GridPartition::new`] but with an explicit label count.
    pub fn with_states(n: usize, r: usize, m: usize, cells: Vec<usize>) -> Result<Self> {
        let mut g = Self::new(n, r, cells)?;
        if g.m > m {
            return Err(Error::invalid("grid partition", format!("label {} out of range", g.m - 1)));
        }
        g.m = m;
        Ok(g)
    }

    pub fn from_fn(n: usize, r: usize, f: impl Fn(&[usize]) -> usize) -> Result<Self> {
        let len = check_shape(n, r)?;
        let cells = (0..len)
            .map(|idx| {
                let c: Vec<usize> = (0..n).map(|a| coord(idx, a, n, r)).collect();
                f(&c)
            })
            .collect();
        Self::new(n, r, cells)
    }

    /// Set versus complement: label 1 on the set.
    pub fn from_set(set: &GridSet) -> Self {
        GridPartition {
            n: set.n,
            r: set.r,
            m: 2,
            cells: set.cells.iter().map(|c| *c as usize).collect(),
        }
    }

    /// Indicator set of label `state`.
    pub fn state_set(&self, state: usize) -> GridSet {
        GridSet {
            n: self.n,
            r: self.r,
            cells: self.cells.iter().map(|c| *c == state).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> usize {
        self.r
    }

    pub fn states(&self) -> usize {
        self.m
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn get(&self, coords: &[usize]) -> usize {
        self.cells[coords.iter().fold(0, |acc, c| acc * self.r + c)]
    }

    pub fn to_fuzzy(&self) -> FuzzyGrid {
        let mut cells = vec![0.0; self.cells.len() * self.m];
        for (i, k) in self.cells.iter().enumerate() {
            cells[i * self.m + k] = 1.0;
        }
        FuzzyGrid {
            n: self.n,
            r: self.r,
            m: self.m,
            cells,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"n": self.n, "R": self.r, "cells": nest(&self.cells, self.n, self.r)})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (n, r, cells) = parse_cells(v)?;
        Self::new(n, r, cells)
    }
}

impl Projections for GridPartition {
    fn projection(&self, axis: usize, state: Option<usize>) -> Result<Vec<f64>> {
        check_axis(axis, self.n)?;
        let k = match state {
            Some(k) if k < self.m => k,
            None if self.m == 2 => 1,
            _ => return Err(Error::Domain(format!("state {state:?} invalid for {} labels", self.m))),
        };
        Ok(project(self.n, self.r, axis, |i| (self.cells[i] == k) as u8 as f64))
    }
}

/// Fuzzy partition: each cell carries a probability vector over `m` labels.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyGrid {
    n: usize,
    r: usize,
    m: usize,
    cells: Vec<f64>,
}

impl FuzzyGrid {
    /// `cells[idx * m + k]` is the weight of label `k` in cell `idx`.
    pub fn new(n: usize, r: usize, m: usize, cells: Vec<f64>) -> Result<Self> {
        let len = check_shape(n, r)?;
        if m == 0 || cells.len() != len * m {
            return Err(Error::invalid("fuzzy grid", format!("{} values, expected {}", cells.len(), len * m)));
        }
        for (i, v) in cells.chunks(m).enumerate() {
            if v.iter().any(|x| !x.is_finite() || *x < -1e-9) || (v.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(Error::invalid("fuzzy grid", format!("cell {i} is not a probability vector")));
            }
        }
        Ok(FuzzyGrid { n, r, m, cells })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> usize {
        self.r
    }

    pub fn states(&self) -> usize {
        self.m
    }

    pub fn cell(&self, idx: usize) -> &[f64] {
        &self.cells[idx * self.m..(idx + 1) * self.m]
    }

    pub fn values(&self) -> &[f64] {
        &self.cells
    }

    /// Weight of `state` in every cell.
    pub fn layer(&self, state: usize) -> Vec<f64> {
        self.cells.iter().skip(state).step_by(self.m).copied().collect()
    }

    /// Layer of `state` as a nested matrix (2-dimensional grids).
    pub fn layer_matrix(&self, state: usize) -> Vec<Vec<f64>> {
        self.layer(state).chunks(self.r).map(<[f64]>::to_vec).collect()
    }

    pub fn to_json(&self) -> Value {
        let vecs: Vec<Value> = self.cells.chunks(self.m).map(|c| json!(c)).collect();
        json!({"n": self.n, "R": self.r, "m": self.m, "cells": nest(&vecs, self.n, self.r)})
    }
}

impl Projections for FuzzyGrid {
    fn projection(&self, axis: usize, state: Option<usize>) -> Result<Vec<f64>> {
        check_axis(axis, self.n)?;
        let k = match state {
            Some(k) if k < self.m => k,
            None if self.m == 2 => 1,
            _ => return Err(Error::Domain(format!("state {state:?} invalid for {} labels", self.m))),
        };
        Ok(project(self.n, self.r, axis, |i| self.cells[i * self.m + k]))
    }
}

/// Uniform signals on the grid with the state given by the cell label.
///
/// Fails if some label below `m` labels no cell, since the prior must have
/// full support.
pub fn structure_from_grid(g: &GridPartition) -> Result<FiniteStructure> {
    let cells = g.cells.len();
    let mut pmf = vec![0.0; g.m * cells];
    let w = 1.0 / cells as f64;
    for (idx, k) in g.cells.iter().enumerate() {
        pmf[k * cells + idx] = w;
    }
    renormalized(g.m, vec![g.r; g.n], pmf)
}

/// Uniform signals with the state drawn from each cell's label vector.
pub fn structure_from_fuzzy(g: &FuzzyGrid) -> Result<FiniteStructure> {
    let cells = g.r.pow(g.n as u32);
    let w = 1.0 / cells as f64;
    let mut pmf = vec![0.0; g.m * cells];
    for idx in 0..cells {
        for k in 0..g.m {
            pmf[k * cells + idx] = g.cells[idx * g.m + k].max(0.0) * w;
        }
    }
    renormalized(g.m, vec![g.r; g.n], pmf)
}

fn renormalized(m: usize, alphabets: Vec<usize>, mut pmf: Vec<f64>) -> Result<FiniteStructure> {
    let total: f64 = pmf.iter().sum();
    pmf.iter_mut().for_each(|p| *p /= total);
    FiniteStructure::new(m, alphabets, pmf)
}

fn nest<T: serde::Serialize + Clone>(flat: &[T], n: usize, r: usize) -> Value {
    if n == 1 {
        return json!(flat);
    }
    let chunk = flat.len() / r;
    Value::Array(flat.chunks(chunk).map(|c| nest(c, n - 1, r)).collect())
}

fn parse_cells(v: &Value) -> Result<(usize, usize, Vec<usize>)> {
    let n = get_usize(v, "n")?;
    let r = get_usize(v, "R")?;
    let mut flat = Vec::new();
    flatten(v.get("cells").ok_or_else(|| Error::parse("cells", "missing"))?, n, r, "cells", &mut flat)?;
    Ok((n, r, flat))
}

fn flatten(v: &Value, depth: usize, r: usize, path: &str, out: &mut Vec<usize>) -> Result<()> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == r)
        .ok_or_else(|| Error::parse(path, format!("expected an array of length {r}")))?;
    for (i, e) in arr.iter().enumerate() {
        let here = format!("{path}[{i}]");
        if depth == 1 {
            out.push(
                e.as_u64()
                    .ok_or_else(|| Error::parse(here, "expected a non-negative integer label"))? as usize,
            );
        } else {
            flatten(e, depth - 1, r, &here, out)?;
        }
    }
    Ok(())
}
