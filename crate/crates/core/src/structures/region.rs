use num::{BigRational, One, Signed, Zero};
use serde_json::{json, Value};

use super::{FiniteStructure, FuzzyGrid};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::scalar::{parse_rational, rational_near, rational_string, SNAP_TOL};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!(
                "interval [{}, {}] is reversed",
                rational_string(&lo),
                rational_string(&hi)
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn unit() -> Self {
        Interval {
            lo: BigRational::zero(),
            hi: BigRational::one(),
        }
    }

    pub fn len(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    fn within(&self, lo: &BigRational, hi: &BigRational) -> bool {
        &self.lo >= lo && &self.hi <= hi
    }

    fn to_json(&self) -> Value {
        json!([rational_string(&self.lo), rational_string(&self.hi)])
    }

    fn from_json(v: &Value, field: &str) -> Result<Self> {
        let pair = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::parse(field, "expected [lo, hi]"))?;
        let read = |x: &Value| {
            x.as_str()
                .and_then(parse_rational)
                .ok_or_else(|| Error::parse(field, "expected rational strings like \"3/4\""))
        };
        Interval::new(read(&pair[0])?, read(&pair[1])?).map_err(|e| Error::parse(field, e.to_string()))
    }
}

/// How a band's set `Y` is matched against `x1' + x2'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BandRule {
    /// `frac(x1' + x2') ∈ Y`, `Y ⊆ [0,1]`.
    Fractional,
    /// `x1' + x2' ∈ Y`, `Y ⊆ [0,2]`.
    Sum,
}

/// A rectangle together with a diagonal band inside it. `x1'`, `x2'` are the
/// coordinates rescaled so the rectangle becomes the unit square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Band {
    rect: [Interval; 2],
    y: Vec<Interval>,
    rule: BandRule,
}

impl Band {
    pub fn new(rect: [Interval; 2], mut y: Vec<Interval>, rule: BandRule) -> Result<Self> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        for side in &rect {
            if side.is_empty() || !side.within(&zero, &one) {
                return Err(Error::invalid("region set", "rectangle sides must be nonempty subintervals of [0,1]"));
            }
        }
        let top = match rule {
            BandRule::Fractional => one,
            BandRule::Sum => BigRational::from_integer(2.into()),
        };
        if y.iter().any(|i| !i.within(&zero, &top)) {
            return Err(Error::invalid("region set", "band interval out of range"));
        }
        y.retain(|i| !i.is_empty());
        y.sort_by(|a, b| a.lo.cmp(&b.lo));
        if y.windows(2).any(|w| w[1].lo < w[0].hi) {
            return Err(Error::invalid("region set", "band intervals overlap"));
        }
        Ok(Band { rect, y, rule })
    }

    pub fn rect(&self) -> &[Interval; 2] {
        &self.rect
    }

    pub fn band_set(&self) -> &[Interval] {
        &self.y
    }

    pub fn rule(&self) -> BandRule {
        self.rule
    }

    /// Intervals of `x1' + x2'` that belong to the band.
    fn sum_intervals(&self) -> Vec<(BigRational, BigRational)> {
        let one = BigRational::one();
        let mut out = Vec::new();
        for i in &self.y {
            out.push((i.lo.clone(), i.hi.clone()));
            if self.rule == BandRule::Fractional {
                out.push((&i.lo + &one, &i.hi + &one));
            }
        }
        out
    }

    /// Normalized area of the band over `[u0,u1] × [v0,v1] ⊆ [0,1]²`.
    fn normalized_area(&self, u: (&BigRational, &BigRational), v: (&BigRational, &BigRational)) -> BigRational {
        let g = |c: &BigRational| {
            h(&(c - u.0 - v.0)) - h(&(c - u.1 - v.0)) - h(&(c - u.0 - v.1)) + h(&(c - u.1 - v.1))
        };
        self.sum_intervals()
            .iter()
            .map(|(a, b)| g(b) - g(a))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// Exact area of the band inside the box `[a0,a1] × [b0,b1]`.
    fn area_in_box(&self, a: (&BigRational, &BigRational), b: (&BigRational, &BigRational)) -> BigRational {
        let [rx, ry] = &self.rect;
        let x0 = a.0.max(&rx.lo);
        let x1 = a.1.min(&rx.hi);
        let y0 = b.0.max(&ry.lo);
        let y1 = b.1.min(&ry.hi);
        if x0 >= x1 || y0 >= y1 {
            return BigRational::zero();
        }
        let (wx, wy) = (rx.len(), ry.len());
        let nu = |t: &BigRational, lo: &BigRational, w: &BigRational| (t - lo) / w;
        let area = self.normalized_area(
            (&nu(x0, &rx.lo, &wx), &nu(x1, &rx.lo, &wx)),
            (&nu(y0, &ry.lo, &wy), &nu(y1, &ry.lo, &wy)),
        );
        area * wx * wy
    }

    fn contains(&self, x1: f64, x2: f64) -> Option<bool> {
        let [rx, ry] = &self.rect;
        let inside = |t: f64, i: &Interval| t >= f64_of(&i.lo) && t <= f64_of(&i.hi);
        if !inside(x1, rx) || !inside(x2, ry) {
            return None;
        }
        let u = (x1 - f64_of(&rx.lo)) / f64_of(&rx.len());
        let v = (x2 - f64_of(&ry.lo)) / f64_of(&ry.len());
        let mut s = u + v;
        if self.rule == BandRule::Fractional {
            s -= s.floor();
        }
        Some(self.y.iter().any(|i| s >= f64_of(&i.lo) && s <= f64_of(&i.hi)))
    }
}

fn f64_of(x: &BigRational) -> f64 {
    <BigRational as crate::scalar::Scalar>::to_f64(x)
}

/// `max(t,0)² / 2`: area of `{u,v ≥ 0 : u + v ≤ t}`.
fn h(t: &BigRational) -> BigRational {
    if t.is_positive() {
        t * t / BigRational::from_integer(2.into())
    } else {
        BigRational::zero()
    }
}

/// Exact subset of `[0,1]²`: a union of rectangles, each carrying a band.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSet {
    bands: Vec<Band>,
}

impl RegionSet {
    pub fn new(bands: Vec<Band>) -> Result<Self> {
        for (i, a) in bands.iter().enumerate() {
            for b in &bands[i + 1..] {
                let overlap = |p: &Interval, q: &Interval| (&p.lo).max(&q.lo) < (&p.hi).min(&q.hi);
                if overlap(&a.rect[0], &b.rect[0]) && overlap(&a.rect[1], &b.rect[1]) {
                    return Err(Error::invalid("region set", "rectangles overlap"));
                }
            }
        }
        Ok(RegionSet { bands })
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    /// Lebesgue measure of the region.
    pub fn measure(&self) -> BigRational {
        let (zero, one) = (BigRational::zero(), BigRational::one());
        self.bands
            .iter()
            .map(|b| b.area_in_box((&zero, &one), (&zero, &one)))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// Membership of a point; boundaries count as inside.
    pub fn contains(&self, x1: f64, x2: f64) -> bool {
        self.bands.iter().any(|b| b.contains(x1, x2) == Some(true))
    }

    /// Exact area fraction of the region in each of the `R²` cells, row-major.
    pub fn rasterize_exact(&self, r: usize, exec: Exec) -> Result<Vec<BigRational>> {
        if r == 0 {
            return Err(Error::Domain("resolution must be positive".into()));
        }
        let rr = BigRational::from_integer(r.into());
        let cell_area = BigRational::one() / (&rr * &rr);
        let edges: Vec<BigRational> = (0..=r).map(|k| BigRational::from_integer(k.into()) / &rr).collect();
        Ok(exec.map_range(r * r, |idx| {
            let (i, j) = (idx / r, idx % r);
            let a = (&edges[i], &edges[i + 1]);
            let b = (&edges[j], &edges[j + 1]);
            let area = self
                .bands
                .iter()
                .map(|band| band.area_in_box(a, b))
                .fold(BigRational::zero(), |acc, x| acc + x);
            area / &cell_area
        }))
    }

    /// Two-label fuzzy grid with the region's area fraction as the weight of label 1.
    pub fn rasterize(&self, r: usize, exec: Exec) -> Result<FuzzyGrid> {
        let exact = self.rasterize_exact(r, exec)?;
        let cells = exact
            .iter()
            .flat_map(|a| {
                let a = f64_of(a);
                [1.0 - a, a]
            })
            .collect();
        FuzzyGrid::new(2, r, 2, cells)
    }

    /// Equality up to what a resolution-`r` rasterization can see.
    pub fn equal_at(&self, other: &RegionSet, r: usize) -> Result<bool> {
        Ok(self.rasterize_exact(r, Exec::Sequential)? == other.rasterize_exact(r, Exec::Sequential)?)
    }

    pub fn to_json(&self) -> Value {
        let bands: Vec<Value> = self
            .bands
            .iter()
            .map(|b| {
                let mut v = json!({
                    "rect": [b.rect[0].to_json(), b.rect[1].to_json()],
                    "y": b.y.iter().map(Interval::to_json).collect::<Vec<_>>(),
                });
                if b.rule == BandRule::Sum {
                    v["rule"] = json!("sum");
                }
                v
            })
            .collect();
        json!({ "bands": bands })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .get("bands")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("bands", "expected an array of band records"))?;
        let mut bands = Vec::with_capacity(arr.len());
        for (i, b) in arr.iter().enumerate() {
            let rect = b
                .get("rect")
                .and_then(Value::as_array)
                .filter(|r| r.len() == 2)
                .ok_or_else(|| Error::parse(format!("bands[{i}].rect"), "expected two intervals"))?;
            let rect = [
                Interval::from_json(&rect[0], &format!("bands[{i}].rect[0]"))?,
                Interval::from_json(&rect[1], &format!("bands[{i}].rect[1]"))?,
            ];
            let y = b
                .get("y")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(format!("bands[{i}].y"), "expected a list of intervals"))?
                .iter()
                .enumerate()
                .map(|(k, iv)| Interval::from_json(iv, &format!("bands[{i}].y[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let rule = match b.get("rule").and_then(Value::as_str) {
                None | Some("fractional") => BandRule::Fractional,
                Some("sum") => BandRule::Sum,
                Some(other) => {
                    return Err(Error::parse(format!("bands[{i}].rule"), format!("unknown rule {other:?}")))
                }
            };
            bands.push(Band::new(rect, y, rule).map_err(|e| Error::parse(format!("bands[{i}]"), e.to_string()))?);
        }
        RegionSet::new(bands).map_err(|e| Error::parse("bands", e.to_string()))
    }
}

/// `{(x1,x2) : frac(x1 + x2) ∈ Y}` over the whole square; `|Y|` must equal `p`.
pub fn build_uninformative_set(p: &BigRational, y: Vec<Interval>) -> Result<RegionSet> {
    if p.is_negative() || p > &BigRational::one() {
        return Err(Error::Domain(format!("p = {} outside [0,1]", rational_string(p))));
    }
    let total = y.iter().map(Interval::len).fold(BigRational::zero(), |a, b| a + b);
    if &total != p {
        return Err(Error::Domain(format!(
            "|Y| = {} differs from p = {}",
            rational_string(&total),
            rational_string(p)
        )));
    }
    let band = Band::new([Interval::unit(), Interval::unit()], y, BandRule::Fractional)
        .map_err(|e| Error::Domain(e.to_string()))?;
    RegionSet::new(vec![band])
}

/// Region whose uniform-signal structure is equivalent to `s`.
///
/// Each axis is cut into intervals sized by the (direct-revelation) signal
/// probabilities; rectangle `(v1, v2)` carries the band `[0, q(v1,v2)]`
/// with `q = P(ω = 1 | v1, v2)`.
pub fn build_associated_set(s: &FiniteStructure) -> Result<RegionSet> {
    if s.states() != 2 || s.agents() != 2 {
        return Err(Error::Domain(format!(
            "associated sets need m = 2 and n = 2, got m = {}, n = {}",
            s.states(),
            s.agents()
        )));
    }
    if !s.is_private_private(1e-9) {
        return Err(Error::Precondition("structure is not private private".into()));
    }
    let dr = s.direct_revelation().structure;
    let axes: Vec<Vec<Interval>> = (0..2).map(|i| axis_intervals(&dr.signal_marginal(i))).collect();
    let joint = dr.joint_signal_marginal();
    let mut bands = Vec::new();
    for (v1, ix) in axes[0].iter().enumerate() {
        for (v2, iy) in axes[1].iter().enumerate() {
            let j = v1 * dr.alphabets()[1] + v2;
            let q = if joint[j] > 0.0 {
                (dr.prob(1, j) / joint[j]).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let q = rational_near(q, SNAP_TOL);
            if q.is_zero() {
                continue;
            }
            bands.push(Band::new(
                [ix.clone(), iy.clone()],
                vec![Interval::new(BigRational::zero(), q)?],
                BandRule::Fractional,
            )?);
        }
    }
    RegionSet::new(bands)
}

/// Consecutive intervals tiling `[0,1]` with lengths proportional to `w`.
fn axis_intervals(w: &[f64]) -> Vec<Interval> {
    let exact: Vec<BigRational> = w.iter().map(|x| rational_near(*x, SNAP_TOL)).collect();
    let total = exact.iter().fold(BigRational::zero(), |a, b| a + b);
    let mut lo = BigRational::zero();
    exact
        .iter()
        .map(|x| {
            let hi = &lo + x / &total;
            let iv = Interval { lo: lo.clone(), hi: hi.clone() };
            lo = hi;
            iv
        })
        .collect()
}
