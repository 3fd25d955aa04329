//! The determinant identity for differences of matrices, and the mollification
//! machinery behind uniform bounds on Hessian-minor integrals of d.c. functions.
//!
//! A d.c. function `f = g - h` is smoothed by a compactly supported polynomial
//! bump; Hessians of the smoothed field come from centered second differences,
//! integrals from the midpoint rule. The minor of `g - h` is bounded through
//! the identity by minors of the convex combinations `(m-l) g + l h`.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::curvature::lk::det_f64;
use crate::dcfun::{DCFunction, MaxAffine};
use crate::error::{Error, Result};
use crate::polyhedra::{ConvexPolytope, FaceLattice, Halfspace};
use crate::rational::{det, rank, rationalize, sub, to_f64, Rat};
use crate::rng::substream;

pub const DEFAULT_EPS_LADDER: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

/// Grid nodes per mollifier width used when none is requested.
pub const DEFAULT_GRID: usize = 4;

/// Bits of the dyadic grid used for random rational test matrices.
pub const MATRIX_BITS: u32 = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    order: usize,
    entries: Vec<Vec<T>>,
}

impl<T: Clone> SquareMatrix<T> {
    pub fn new(entries: Vec<Vec<T>>) -> Result<Self> {
        let order = entries.len();
        if let Some(row) = entries.iter().find(|r| r.len() != order) {
            return Err(Error::DimensionMismatch { expected: order, found: row.len() });
        }
        Ok(SquareMatrix { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[Vec<T>] {
        &self.entries
    }
}

impl SquareMatrix<Rat> {
    /// Entries uniform on `[-1, 1]`, rounded to the dyadic grid `2^-16`.
    pub fn random_rational<R: Rng>(n: usize, rng: &mut R) -> Self {
        let entries =
            (0..n).map(|_| (0..n).map(|_| rationalize(rng.random_range(-1.0..=1.0), MATRIX_BITS)).collect()).collect();
        SquareMatrix { order: n, entries }
    }

    pub fn to_f64(&self) -> SquareMatrix<f64> {
        SquareMatrix {
            order: self.order,
            entries: self.entries.iter().map(|r| r.iter().map(to_f64).collect()).collect(),
        }
    }
}

impl SquareMatrix<f64> {
    pub fn random_gaussian<R: Rng>(n: usize, rng: &mut R) -> Self {
        let entries = (0..n).map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect()).collect();
        SquareMatrix { order: n, entries }
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn check_orders<T>(a: &SquareMatrix<T>, b: &SquareMatrix<T>) -> Result<usize> {
    if a.order != b.order {
        return Err(Error::DimensionMismatch { expected: a.order, found: b.order });
    }
    Ok(a.order)
}

/// `(det(A - B), (1/n!) Σ_k (-1)^k C(n,k) det((n-k) A + k B))`, exactly.
pub fn det_identity_check(a: &SquareMatrix<Rat>, b: &SquareMatrix<Rat>) -> Result<(Rat, Rat)> {
    let n = check_orders(a, b)?;
    let diff: Vec<Vec<Rat>> = a.entries.iter().zip(&b.entries).map(|(x, y)| sub(x, y)).collect();
    let lhs = det(&diff);
    let mut rhs = Rat::zero();
    for k in 0..=n {
        let (s, t) = (Rat::from_integer((n - k).into()), Rat::from_integer(k.into()));
        let m: Vec<Vec<Rat>> = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x.iter().zip(y).map(|(u, v)| &s * u + &t * v).collect())
            .collect();
        let term = det(&m) * Rat::from_integer(binomial(n, k).into());
        if k % 2 == 0 {
            rhs += term;
        } else {
            rhs -= term;
        }
    }
    Ok((lhs, rhs / Rat::from_integer(factorial(n).into())))
}

/// Floating-point version of [`det_identity_check`].
pub fn det_identity_check_f64(a: &SquareMatrix<f64>, b: &SquareMatrix<f64>) -> Result<(f64, f64)> {
    let n = check_orders(a, b)?;
    let diff: Vec<Vec<f64>> =
        a.entries.iter().zip(&b.entries).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect()).collect();
    let lhs = det_f64(diff);
    let mut rhs = 0.0;
    for k in 0..=n {
        let (s, t) = ((n - k) as f64, k as f64);
        let m = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x.iter().zip(y).map(|(u, v)| s * u + t * v).collect())
            .collect();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        rhs += sign * binomial(n, k) as f64 * det_f64(m);
    }
    Ok((lhs, rhs / factorial(n) as f64))
}

/// Outcome of checking the identity on a random corpus of one order.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct DetLemmaSummary {
    pub order: usize,
    pub trials: usize,
    /// Pairs with exact equality, when the rational check ran.
    pub exact_matches: Option<usize>,
    /// Largest `|lhs - rhs| / (1 + |lhs|)` over Gaussian pairs.
    pub float_max_error: f64,
    pub float_tolerance: f64,
}

impl DetLemmaSummary {
    pub fn passes(&self) -> bool {
        self.exact_matches.is_none_or(|m| m == self.trials) && self.float_max_error <= self.float_tolerance
    }
}

pub fn det_identity_trials(n: usize, trials: usize, seed: u64, exact: bool) -> Result<DetLemmaSummary> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix order must be positive".into()));
    }
    let exact_matches = if exact {
        let mut rng = substream(seed, "detlemma-exact", n as u64);
        let mut hits = 0;
        for _ in 0..trials {
            let a = SquareMatrix::random_rational(n, &mut rng);
            let b = SquareMatrix::random_rational(n, &mut rng);
            let (l, r) = det_identity_check(&a, &b)?;
            hits += usize::from(l == r);
        }
        Some(hits)
    } else {
        None
    };
    let mut rng = substream(seed, "detlemma-float", n as u64);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let a = SquareMatrix::random_gaussian(n, &mut rng);
        let b = SquareMatrix::random_gaussian(n, &mut rng);
        let (l, r) = det_identity_check_f64(&a, &b)?;
        worst = worst.max((l - r).abs() / (1.0 + l.abs()));
    }
    Ok(DetLemmaSummary { order: n, trials, exact_matches, float_max_error: worst, float_tolerance: 1e-8 })
}

/// Axis-aligned box with rational corners.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxRegion {
    lo: Vec<Rat>,
    hi: Vec<Rat>,
}

impl BoxRegion {
    pub fn new(lo: Vec<Rat>, hi: Vec<Rat>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        if lo.is_empty() || lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return Err(Error::InvalidArgument("box needs lo < hi in every coordinate".into()));
        }
        Ok(BoxRegion { lo, hi })
    }

    /// `[-r, r]^d`.
    pub fn centered(d: usize, r: Rat) -> Result<Self> {
        BoxRegion::new(vec![-r.clone(); d], vec![r; d])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Rat] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rat] {
        &self.hi
    }

    pub fn volume(&self) -> Rat {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn dilated(&self, r: &Rat) -> BoxRegion {
        BoxRegion { lo: self.lo.iter().map(|a| a - r).collect(), hi: self.hi.iter().map(|b| b + r).collect() }
    }

    /// Half of the longest side.
    pub fn half_width(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| to_f64(&(b - a)) / 2.0).fold(0.0, f64::max)
    }

    pub fn contains_interior(&self, x: &[Rat]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| a < v && v < b)
    }

    pub fn polytope(&self) -> ConvexPolytope {
        ConvexPolytope::cuboid(&self.lo, &self.hi).expect("valid box")
    }
}

/// Row-major multi-index helper.
#[derive(Clone, Debug)]
struct Shape {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl Shape {
    fn new(dims: Vec<usize>) -> Self {
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        Shape { dims, strides }
    }

    fn len(&self) -> usize {
        self.dims.iter().product()
    }

    fn unflatten(&self, mut i: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&s| {
                let t = i / s;
                i %= s;
                t
            })
            .collect()
    }

    fn flat(&self, t: &[usize]) -> usize {
        t.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    fn delta(&self, off: &[isize]) -> isize {
        off.iter().zip(&self.strides).map(|(a, &s)| a * s as isize).sum()
    }
}

/// Discrete weights of the bump `(1 - |u|²/ε²)³` on the grid, normalized to unit mass.
#[derive(Clone, Debug)]
struct Kernel {
    offsets: Vec<Vec<isize>>,
    weights: Vec<f64>,
}

impl Kernel {
    fn bump(eps: f64, h: &[f64]) -> Self {
        let radius: Vec<isize> = h.iter().map(|hi| (eps / hi).floor() as isize).collect();
        let shape = Shape::new(radius.iter().map(|r| (2 * r + 1) as usize).collect());
        let mut offsets = Vec::new();
        let mut weights = Vec::new();
        for i in 0..shape.len() {
            let off: Vec<isize> = shape.unflatten(i).iter().zip(&radius).map(|(&t, r)| t as isize - r).collect();
            let u2: f64 = off.iter().zip(h).map(|(&o, hi)| (o as f64 * hi).powi(2)).sum::<f64>() / (eps * eps);
            if u2 < 1.0 {
                offsets.push(off);
                weights.push((1.0 - u2).powi(3));
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Kernel { offsets, weights }
    }
}

/// Affine pieces of a max-affine function, as floats.
struct Pieces(Vec<(Vec<f64>, f64)>);

impl Pieces {
    fn of(g: &MaxAffine) -> Self {
        Pieces(g.pieces_f64())
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .map(|(a, b)| a.iter().zip(x).map(|(u, v)| u * v).sum::<f64>() + b)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Evaluates `g - h` without re-deriving float pieces on every call.
struct DcEval {
    plus: Pieces,
    minus: Pieces,
}

impl DcEval {
    fn of(f: &DCFunction) -> Self {
        DcEval { plus: Pieces::of(&f.plus), minus: Pieces::of(&f.minus) }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.plus.eval(x) - self.minus.eval(x)
    }
}

/// Stencil reach, in nodes, kept around `K` for second differences of step ≤ 2.
const PAD: usize = 2;

/// Samples of `f ⋆ ρ_ε` at the cell centres of a uniform grid over `K`,
/// plus a two-node rim for second differences.
#[derive(Clone, Debug)]
pub struct MollifiedField {
    region: BoxRegion,
    eps: f64,
    h: Vec<f64>,
    cells: Vec<usize>,
    margin: Vec<usize>,
    values: Vec<f64>,
    shape: Shape,
    kernel: Kernel,
    source: DCFunction,
    l1_gap: f64,
}

impl MollifiedField {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Per-axis grid spacing; each axis of `K` is split into whole cells.
    pub fn spacing(&self) -> &[f64] {
        &self.h
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    /// Nodes sampled beyond `K` on each side, at least `3ε` worth.
    pub fn margin(&self) -> &[usize] {
        &self.margin
    }

    pub fn region(&self) -> &BoxRegion {
        &self.region
    }

    pub fn source(&self) -> &DCFunction {
        &self.source
    }

    /// Midpoint-rule estimate of `∫_K |f ⋆ ρ_ε - f|`.
    pub fn l1_gap(&self) -> f64 {
        self.l1_gap
    }

    fn cell_volume(&self) -> f64 {
        self.h.iter().product()
    }

    fn node_count(&self) -> usize {
        self.cells.iter().product()
    }

    /// The same convolution quadrature, centred at an arbitrary point.
    pub fn value_at(&self, x: &[f64]) -> f64 {
        let f = DcEval::of(&self.source);
        let mut y = vec![0.0; x.len()];
        let mut s = 0.0;
        for (off, w) in self.kernel.offsets.iter().zip(&self.kernel.weights) {
            for i in 0..x.len() {
                y[i] = x[i] + off[i] as f64 * self.h[i];
            }
            s += w * f.eval(&y);
        }
        s
    }

    /// Value at the cell centre with multi-index `t` (0-based inside `K`).
    pub fn node_value(&self, t: &[usize]) -> f64 {
        let shifted: Vec<usize> = t.iter().map(|v| v + PAD).collect();
        self.values[self.shape.flat(&shifted)]
    }

    pub fn node_point(&self, t: &[usize]) -> Vec<f64> {
        t.iter().enumerate().map(|(i, &v)| to_f64(&self.region.lo[i]) + (v as f64 + 0.5) * self.h[i]).collect()
    }

    /// Centered second differences with step `s` grid nodes at the `K`-node of flat padded index `c`.
    fn hessian_at(&self, c: usize, s: usize, out: &mut [Vec<f64>]) {
        let d = self.h.len();
        let v = &self.values;
        for i in 0..d {
            let di = (s * self.shape.strides[i]) as isize;
            let hi = s as f64 * self.h[i];
            let at = |o: isize| v[(c as isize + o) as usize];
            out[i][i] = (at(di) - 2.0 * at(0) + at(-di)) / (hi * hi);
            for j in i + 1..d {
                let dj = (s * self.shape.strides[j]) as isize;
                let hj = s as f64 * self.h[j];
                let x = (at(di + dj) - at(di - dj) - at(-di + dj) + at(-di - dj)) / (4.0 * hi * hj);
                out[i][j] = x;
                out[j][i] = x;
            }
        }
    }

    /// Padded flat indices of the nodes inside `K` whose first coordinate is `row`.
    fn row_nodes(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        let inner = Shape::new(self.cells[1..].to_vec());
        (0..inner.len()).map(move |i| {
            let mut t = vec![row + PAD];
            t.extend(inner.unflatten(i).into_iter().map(|v| v + PAD));
            self.shape.flat(&t)
        })
    }
}

pub fn mollify(f: &DCFunction, k: &BoxRegion, eps: f64, h: f64) -> Result<MollifiedField> {
    let d = k.dim();
    if f.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: f.dim() });
    }
    if !(eps.is_finite() && h.is_finite() && h > 0.0) {
        return Err(Error::InvalidArgument("mollifier width and grid spacing must be positive".into()));
    }
    if eps < 2.0 * h {
        return Err(Error::InvalidArgument(format!("mollifier width {eps} is below twice the grid spacing {h}")));
    }
    let widths: Vec<f64> = k.lo.iter().zip(&k.hi).map(|(a, b)| to_f64(&(b - a))).collect();
    let cells: Vec<usize> = widths.iter().map(|w| ((w / h) - 1e-9).ceil().max(1.0) as usize).collect();
    let hs: Vec<f64> = widths.iter().zip(&cells).map(|(w, &c)| w / c as f64).collect();
    let margin: Vec<usize> = hs.iter().map(|hi| (3.0 * eps / hi).ceil() as usize).collect();
    let lo: Vec<f64> = k.lo.iter().map(to_f64).collect();

    // raw samples of f on K plus the margin
    let raw_shape = Shape::new(cells.iter().zip(&margin).map(|(c, m)| c + 2 * m).collect());
    let eval = DcEval::of(f);
    let raw: Vec<f64> = (0..raw_shape.len())
        .into_par_iter()
        .map(|i| {
            let t = raw_shape.unflatten(i);
            let x: Vec<f64> = (0..d).map(|a| lo[a] + (t[a] as f64 - margin[a] as f64 + 0.5) * hs[a]).collect();
            eval.eval(&x)
        })
        .collect();

    let kernel = Kernel::bump(eps, &hs);
    let deltas: Vec<isize> = kernel.offsets.iter().map(|o| raw_shape.delta(o)).collect();
    let shape = Shape::new(cells.iter().map(|c| c + 2 * PAD).collect());
    let values: Vec<f64> = (0..shape.len())
        .into_par_iter()
        .map(|i| {
            let t = shape.unflatten(i);
            let r: Vec<usize> = t.iter().zip(&margin).map(|(&v, m)| v + m - PAD).collect();
            let base = raw_shape.flat(&r) as isize;
            deltas.iter().zip(&kernel.weights).map(|(&o, w)| w * raw[(base + o) as usize]).sum()
        })
        .collect();

    let cell: f64 = hs.iter().product();
    let inner = Shape::new(cells.clone());
    let l1_gap = (0..inner.len())
        .map(|i| {
            let t = inner.unflatten(i);
            let p: Vec<usize> = t.iter().map(|v| v + PAD).collect();
            let q: Vec<usize> = t.iter().zip(&margin).map(|(v, m)| v + m).collect();
            (values[shape.flat(&p)] - raw[raw_shape.flat(&q)]).abs()
        })
        .sum::<f64>()
        * cell;

    Ok(MollifiedField {
        region: k.clone(),
        eps,
        h: hs,
        cells,
        margin,
        values,
        shape,
        kernel,
        source: f.clone(),
        l1_gap,
    })
}

/// `∫_K |det (∂²f_ε/∂x_i∂x_j)_{i∈I, j∈J}|` for one pair of index sets.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct MinorIntegralReport {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: f64,
    /// Step-doubling discrepancy plus a summation rounding bound.
    pub error_bound: f64,
}

fn subsets(d: usize, m: usize) -> Vec<Vec<usize>> {
    (0u32..1 << d)
        .filter(|s| s.count_ones() as usize == m)
        .map(|s| (0..d).filter(|&i| s >> i & 1 == 1).collect())
        .collect()
}

fn minor(h: &[Vec<f64>], rows: &[usize], cols: &[usize]) -> f64 {
    det_f64(rows.iter().map(|&i| cols.iter().map(|&j| h[i][j]).collect()).collect())
}

/// Midpoint sums of one `|minor|` integrand.
#[derive(Clone, Copy, Debug, Default)]
struct Quadrature {
    /// Second differences with step `h`.
    fine: f64,
    /// Second differences with step `2h`.
    coarse: f64,
    /// Bound on the floating-point error of `fine`.
    rounding: f64,
}

impl Quadrature {
    /// Step-doubling discrepancy plus the rounding bound.
    fn error(&self) -> f64 {
        (self.fine - self.coarse).abs() + self.rounding
    }
}

/// Integrals of `|minor|` of linear combinations of the fields' Hessians,
/// per index pair and per combination.
///
/// Each second difference of values bounded by `M` carries a rounding error
/// of at most `8 u M / h²` (`u` the unit roundoff); for an `m × m` minor with
/// entries bounded by `H` this perturbs the determinant by at most
/// `m · m! · (H + δ)^(m-1) · δ`.
fn combination_integrals(fields: &[&MollifiedField], combos: &[Vec<f64>], m: usize) -> Vec<Vec<Quadrature>> {
    let base = fields[0];
    let d = base.h.len();
    let pairs: Vec<(Vec<usize>, Vec<usize>)> =
        subsets(d, m).into_iter().flat_map(|i| subsets(d, m).into_iter().map(move |j| (i.clone(), j))).collect();
    let hmin = base.h.iter().copied().fold(f64::INFINITY, f64::min);
    let entry_err: Vec<f64> = fields
        .iter()
        .map(|f| 8.0 * f64::EPSILON * f.values.iter().fold(0.0f64, |a, v| a.max(v.abs())) / (hmin * hmin))
        .collect();
    let combo_err: Vec<f64> = combos.iter().map(|w| w.iter().zip(&entry_err).map(|(c, e)| c.abs() * e).sum()).collect();
    let mf = factorial(m) as f64;
    let rows: Vec<Vec<Vec<Quadrature>>> = (0..base.cells[0])
        .into_par_iter()
        .map(|row| {
            let mut acc = vec![vec![Quadrature::default(); combos.len()]; pairs.len()];
            let mut hs = vec![vec![vec![0.0; d]; d]; fields.len()];
            let mut mix = vec![vec![0.0; d]; d];
            for c in base.row_nodes(row) {
                for step in [1, 2] {
                    for (f, h) in fields.iter().zip(hs.iter_mut()) {
                        f.hessian_at(c, step, h);
                    }
                    for (ci, w) in combos.iter().enumerate() {
                        let mut big: f64 = 0.0;
                        for a in 0..d {
                            for b in 0..d {
                                mix[a][b] = w.iter().zip(&hs).map(|(x, h)| x * h[a][b]).sum();
                                big = big.max(mix[a][b].abs());
                            }
                        }
                        let delta = combo_err[ci];
                        let det_err = m as f64 * mf * (big + delta).powi(m as i32 - 1) * delta;
                        for (pi, (r, q)) in pairs.iter().enumerate() {
                            let v = minor(&mix, r, q).abs();
                            let slot = &mut acc[pi][ci];
                            if step == 1 {
                                slot.fine += v;
                                slot.rounding += det_err;
                            } else {
                                slot.coarse += v;
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let cell = base.cell_volume();
    let nodes = base.node_count() as f64;
    let mut total = vec![vec![Quadrature::default(); combos.len()]; pairs.len()];
    for part in rows {
        for (t, p) in total.iter_mut().zip(part) {
            for (a, b) in t.iter_mut().zip(p) {
                a.fine += b.fine;
                a.coarse += b.coarse;
                a.rounding += b.rounding;
            }
        }
    }
    for t in total.iter_mut() {
        for a in t.iter_mut() {
            a.fine *= cell;
            a.coarse *= cell;
            a.rounding = a.rounding * cell + nodes * f64::EPSILON * a.fine;
        }
    }
    total
}

/// All `|I| = |J| = m` minor integrals of a mollified field.
pub fn minor_integrals(field: &MollifiedField, m: usize) -> Result<Vec<MinorIntegralReport>> {
    let d = field.h.len();
    if m > d {
        return Err(Error::InvalidArgument(format!("minor order {m} exceeds dimension {d}")));
    }
    if m == 0 {
        // the empty minor is 1 by convention
        return Ok(vec![MinorIntegralReport {
            rows: vec![],
            cols: vec![],
            value: to_f64(&field.region.volume()),
            error_bound: 0.0,
        }]);
    }
    let sums = combination_integrals(&[field], &[vec![1.0]], m);
    let idx = subsets(d, m);
    let pairs = idx.iter().flat_map(|i| idx.iter().map(move |j| (i.clone(), j.clone())));
    Ok(pairs
        .zip(sums)
        .map(|((rows, cols), s)| MinorIntegralReport { rows, cols, value: s[0].fine, error_bound: s[0].error() })
        .collect())
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct MinorPairBound {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// `∫_K |minor of (g - h)_ε|`.
    pub lhs: f64,
    /// `(1/m!) Σ_l C(m,l) ∫_K |minor of ((m-l) g + l h)_ε|`.
    pub rhs: f64,
    pub slack: f64,
}

impl MinorPairBound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + self.slack
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct MinorBoundReport {
    pub m: usize,
    pub eps: f64,
    pub spacing: Vec<f64>,
    /// Largest minor integral of the difference, with the bound of the same pair.
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub l1_gap: f64,
    pub pairs: Vec<MinorPairBound>,
}

impl MinorBoundReport {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(MinorPairBound::holds)
    }
}

pub fn minor_difference_bound(
    g: &MaxAffine,
    h: &MaxAffine,
    k: &BoxRegion,
    m: usize,
    eps: f64,
    spacing: f64,
) -> Result<MinorBoundReport> {
    let d = k.dim();
    if g.dim() != d || h.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: if g.dim() != d { g.dim() } else { h.dim() } });
    }
    if m > d {
        return Err(Error::InvalidArgument(format!("minor order {m} exceeds dimension {d}")));
    }
    let fg = mollify(&DCFunction::convex(g.clone()), k, eps, spacing)?;
    let fh = mollify(&DCFunction::convex(h.clone()), k, eps, spacing)?;
    let f = DCFunction::new(g.clone(), h.clone())?;
    let l1_gap = mollify(&f, k, eps, spacing)?.l1_gap;
    let vol = to_f64(&k.volume());
    if m == 0 {
        let pair = MinorPairBound { rows: vec![], cols: vec![], lhs: vol, rhs: vol, slack: 0.0 };
        return Ok(MinorBoundReport {
            m,
            eps,
            spacing: fg.h.clone(),
            lhs: vol,
            rhs: vol,
            slack: 0.0,
            l1_gap,
            pairs: vec![pair],
        });
    }
    let mut combos = vec![vec![1.0, -1.0]];
    combos.extend((0..=m).map(|l| vec![(m - l) as f64, l as f64]));
    let sums = combination_integrals(&[&fg, &fh], &combos, m);
    let mf = factorial(m) as f64;
    let idx = subsets(d, m);
    let pairs: Vec<MinorPairBound> = idx
        .iter()
        .flat_map(|i| idx.iter().map(move |j| (i.clone(), j.clone())))
        .zip(&sums)
        .map(|((rows, cols), s)| {
            let mut rhs = 0.0;
            let mut slack = s[0].error();
            for l in 0..=m {
                let c = binomial(m, l) as f64 / mf;
                rhs += c * s[l + 1].fine;
                slack += c * s[l + 1].error();
            }
            MinorPairBound { rows, cols, lhs: s[0].fine, rhs, slack }
        })
        .collect();
    let top = pairs.iter().max_by(|a, b| a.lhs.total_cmp(&b.lhs)).expect("at least one pair");
    Ok(MinorBoundReport {
        m,
        eps,
        spacing: fg.h.clone(),
        lhs: top.lhs,
        rhs: top.rhs,
        slack: top.slack,
        l1_gap,
        pairs: pairs.clone(),
    })
}

/// Uniform-boundedness certificate across a ladder of mollifier widths.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LadderReport {
    pub m: usize,
    pub rungs: Vec<MinorBoundReport>,
    /// Largest pairwise relative difference between rung values.
    pub spread: f64,
    pub tolerance: f64,
}

impl LadderReport {
    pub fn bounded(&self) -> bool {
        self.spread < self.tolerance && self.rungs.iter().all(MinorBoundReport::holds)
    }
}

/// Runs [`minor_difference_bound`] for each `ε` of the ladder, scaled by the half
/// width of `K`, with `grid` nodes per `ε` (`h = ε / grid`).
pub fn approximability_ladder(
    f: &DCFunction,
    k: &BoxRegion,
    m: usize,
    ladder: &[f64],
    grid: usize,
) -> Result<LadderReport> {
    if grid < 2 {
        return Err(Error::InvalidArgument("need at least two grid nodes per mollifier width".into()));
    }
    if ladder.is_empty() {
        return Err(Error::InvalidArgument("empty mollifier ladder".into()));
    }
    let scale = k.half_width();
    let rungs = ladder
        .iter()
        .map(|&e| {
            let eps = e * scale;
            minor_difference_bound(&f.plus, &f.minus, k, m, eps, eps / grid as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut spread: f64 = 0.0;
    for a in &rungs {
        for b in &rungs {
            let top = a.lhs.abs().max(b.lhs.abs());
            if top > 0.0 {
                spread = spread.max((a.lhs - b.lhs).abs() / top);
            }
        }
    }
    Ok(LadderReport { m, rungs, spread, tolerance: 0.1 })
}

/// Interior Monge–Ampère mass of a convex piecewise-linear function on a box.
#[derive(Clone, Debug, PartialEq)]
pub struct MongeAmpereMass {
    pub mass: Rat,
    /// Vertices of the linearity complex strictly inside the box.
    pub vertices: usize,
}

impl MongeAmpereMass {
    pub fn value(&self) -> f64 {
        to_f64(&self.mass)
    }

    /// Set when no vertex lies inside the box, so the mass is zero by default.
    pub fn no_vertex(&self) -> bool {
        self.vertices == 0
    }
}

/// `Σ_v vol(∂g(v))` over the vertices `v` of the linearity complex of `g` inside `K`.
/// Mass on the boundary of `K` is not counted.
pub fn monge_ampere_mass(g: &MaxAffine, k: &BoxRegion) -> Result<MongeAmpereMass> {
    let d = k.dim();
    if g.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: g.dim() });
    }
    let pieces = g.pieces();
    let boxp = k.polytope();
    let mut verts: BTreeSet<Vec<Rat>> = BTreeSet::new();
    if pieces.len() > d {
        for (i, p) in pieces.iter().enumerate() {
            let mut cs = boxp.constraints().to_vec();
            for (j, q) in pieces.iter().enumerate() {
                if j != i {
                    cs.push(Halfspace::new(sub(&q.gradient, &p.gradient), &p.offset - &q.offset)?);
                }
            }
            let cell = ConvexPolytope::new(d, cs)?;
            if !cell.feasible() {
                continue;
            }
            verts.extend(cell.vertices()?.iter().filter(|v| k.contains_interior(v)).cloned());
        }
    }
    let mut mass = Rat::zero();
    for v in &verts {
        let grads: Vec<Vec<Rat>> = g.active(v).into_iter().map(|i| pieces[i].gradient.clone()).collect();
        let diffs: Vec<Vec<Rat>> = grads[1..].iter().map(|a| sub(a, &grads[0])).collect();
        if rank(&diffs) < d {
            continue;
        }
        let hull = ConvexPolytope::from_points(&grads)?;
        let lat = FaceLattice::of(&hull)?;
        let top = lat.faces.last().expect("nonempty hull");
        mass += lat.volume(top).exact.expect("full-dimensional volumes are exact");
    }
    Ok(MongeAmpereMass { mass, vertices: verts.len() })
}
