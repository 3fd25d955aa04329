use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use super::dd;
use super::lp::{self, LpOutcome};
use crate::error::{Error, Result};
use crate::rational::{dot, int, is_zero_vec, rank, sub, Rat};

/// The closed halfspace `{x : normal·x <= offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    normal: Vec<Rat>,
    offset: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Result<Self> {
        if normal.is_empty() || is_zero_vec(&normal) {
            return Err(Error::ZeroNormal);
        }
        Ok(Halfspace { normal, offset })
    }

    pub fn normal(&self) -> &[Rat] {
        &self.normal
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) <= self.offset
    }

    /// Signed excess `normal·x - offset`.
    pub fn excess(&self, x: &[Rat]) -> Rat {
        dot(&self.normal, x) - &self.offset
    }

    pub fn is_tight(&self, x: &[Rat]) -> bool {
        self.excess(x).is_zero()
    }

    /// The complementary closed halfspace `{x : normal·x >= offset}`.
    pub fn flipped(&self) -> Halfspace {
        Halfspace { normal: self.normal.iter().map(|v| -v).collect(), offset: -self.offset.clone() }
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct VertexScan {
    pub vertices: Vec<Vec<Rat>>,
    /// Sorted indices of the constraints tight at each vertex.
    pub incidence: Vec<Vec<usize>>,
    pub unbounded: bool,
}

/// An H-represented convex polytope with exact rational data.
#[derive(Clone, Debug)]
pub struct ConvexPolytope {
    dim: usize,
    constraints: Vec<Halfspace>,
    scan: OnceLock<VertexScan>,
}

impl PartialEq for ConvexPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.constraints == other.constraints
    }
}

impl ConvexPolytope {
    pub fn new(dim: usize, constraints: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("polytope dimension must be positive".into()));
        }
        for h in &constraints {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.dim() });
            }
        }
        Ok(ConvexPolytope { dim, constraints, scan: OnceLock::new() })
    }

    /// Axis-aligned box `[lo_1, hi_1] x ... x [lo_d, hi_d]`.
    pub fn cuboid(lo: &[Rat], hi: &[Rat]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        let d = lo.len();
        let mut cs = Vec::with_capacity(2 * d);
        for i in 0..d {
            let mut e = vec![Rat::zero(); d];
            e[i] = Rat::one();
            cs.push(Halfspace::new(e.clone(), hi[i].clone())?);
            e[i] = -Rat::one();
            cs.push(Halfspace::new(e, -lo[i].clone())?);
        }
        ConvexPolytope::new(d, cs)
    }

    pub fn unit_cube(d: usize) -> Self {
        ConvexPolytope::cuboid(&vec![Rat::zero(); d], &vec![Rat::one(); d]).expect("valid cube")
    }

    /// Convex hull of a point set whose affine hull is the whole space.
    pub fn from_points(points: &[Vec<Rat>]) -> Result<Self> {
        let d = points.first().ok_or(Error::Empty)?.len();
        if affine_rank(points) != d {
            return Err(Error::Degenerate("point set is not full-dimensional".into()));
        }
        // facets (a, b) with a·p <= b are the extreme rays of {(a, b) : a·p - b <= 0}
        let rows: Vec<Vec<Rat>> = points
            .iter()
            .map(|p| {
                let mut r = p.clone();
                r.push(-Rat::one());
                r
            })
            .collect();
        let rays = dd::extreme_rays(&rows).ok_or_else(|| Error::Degenerate("hull cone not pointed".into()))?;
        let mut cs = Vec::new();
        for mut r in rays {
            let b = r.pop().unwrap();
            if is_zero_vec(&r) {
                continue;
            }
            let h = Halfspace::new(r, b)?;
            if !cs.contains(&h) {
                cs.push(h);
            }
        }
        ConvexPolytope::new(d, cs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Halfspace] {
        &self.constraints
    }

    pub fn matrix(&self) -> (Vec<Vec<Rat>>, Vec<Rat>) {
        (
            self.constraints.iter().map(|h| h.normal.clone()).collect(),
            self.constraints.iter().map(|h| h.offset.clone()).collect(),
        )
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|h| h.contains(x))
    }

    pub fn with(&self, h: Halfspace) -> Result<Self> {
        let mut cs = self.constraints.clone();
        cs.push(h);
        ConvexPolytope::new(self.dim, cs)
    }

    pub fn intersect(&self, other: &ConvexPolytope) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut cs = self.constraints.clone();
        for h in &other.constraints {
            if !cs.contains(h) {
                cs.push(h.clone());
            }
        }
        ConvexPolytope::new(self.dim, cs)
    }

    /// Exact nonemptiness.
    pub fn feasible(&self) -> bool {
        if let Some(scan) = self.scan.get() {
            return !scan.vertices.is_empty() || scan.unbounded;
        }
        let (a, b) = self.matrix();
        if a.is_empty() {
            return true;
        }
        lp::feasible(&a, &b)
    }

    pub fn maximize(&self, c: &[Rat]) -> LpOutcome {
        let (a, b) = self.matrix();
        lp::maximize(&a, &b, c)
    }

    /// True when some point satisfies every constraint strictly.
    pub fn has_interior(&self) -> bool {
        let mut a: Vec<Vec<Rat>> = Vec::with_capacity(self.constraints.len() + 1);
        let mut b = Vec::with_capacity(self.constraints.len() + 1);
        for h in &self.constraints {
            let mut r = h.normal.clone();
            r.push(Rat::one());
            a.push(r);
            b.push(h.offset.clone());
        }
        let mut cap = vec![Rat::zero(); self.dim];
        cap.push(Rat::one());
        a.push(cap);
        b.push(Rat::one());
        let mut c = vec![Rat::zero(); self.dim];
        c.push(Rat::one());
        match lp::maximize(&a, &b, &c) {
            LpOutcome::Optimal { value, .. } => value.is_positive(),
            LpOutcome::Unbounded => true,
            LpOutcome::Infeasible => false,
        }
    }

    pub(crate) fn scan(&self) -> &VertexScan {
        self.scan.get_or_init(|| self.compute_scan())
    }

    fn compute_scan(&self) -> VertexScan {
        let d = self.dim;
        let mut rows: Vec<Vec<Rat>> = self
            .constraints
            .iter()
            .map(|h| {
                let mut r = h.normal.clone();
                r.push(-h.offset.clone());
                r
            })
            .collect();
        let mut lam = vec![Rat::zero(); d + 1];
        lam[d] = -Rat::one();
        rows.push(lam);
        let Some(rays) = dd::extreme_rays_with_incidence(&rows) else {
            // lineality: unbounded unless empty
            return VertexScan { vertices: Vec::new(), incidence: Vec::new(), unbounded: self.feasible_lp() };
        };
        let mut found: Vec<(Vec<Rat>, Vec<usize>)> = Vec::new();
        let mut recession = false;
        for (r, zeros) in rays {
            let l = &r[d];
            if l.is_positive() {
                let v: Vec<Rat> = r[..d].iter().map(|x| x / l).collect();
                let tight: Vec<usize> = zeros.into_iter().filter(|&i| i < self.constraints.len()).collect();
                if !found.iter().any(|(w, _)| w == &v) {
                    found.push((v, tight));
                }
            } else {
                recession = true;
            }
        }
        let unbounded = recession && !found.is_empty();
        found.sort();
        let (vertices, incidence) = found.into_iter().unzip();
        VertexScan { vertices, incidence, unbounded }
    }

    fn feasible_lp(&self) -> bool {
        let (a, b) = self.matrix();
        a.is_empty() || lp::feasible(&a, &b)
    }

    /// Exact vertex list (sorted lexicographically).
    pub fn vertices(&self) -> Result<&[Vec<Rat>]> {
        let s = self.scan();
        if s.unbounded {
            return Err(Error::Unbounded);
        }
        if s.vertices.is_empty() {
            return Err(Error::Empty);
        }
        Ok(&s.vertices)
    }

    /// For each vertex (in `vertices` order), the constraints tight there.
    pub(crate) fn vertex_incidence(&self) -> Result<&[Vec<usize>]> {
        self.vertices()?;
        Ok(&self.scan().incidence)
    }

    pub fn is_bounded(&self) -> bool {
        !self.scan().unbounded
    }

    pub fn is_empty(&self) -> bool {
        let s = self.scan();
        s.vertices.is_empty() && !s.unbounded
    }

    /// Dimension of the affine hull, `None` for the empty polytope.
    pub fn affine_dim(&self) -> Result<Option<usize>> {
        match self.vertices() {
            Ok(v) => Ok(Some(affine_rank(v))),
            Err(Error::Empty) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Indices of constraints tight on every point of the polytope.
    pub fn implicit_equalities(&self) -> Result<Vec<usize>> {
        let v = self.vertices()?;
        Ok((0..self.constraints.len()).filter(|&i| v.iter().all(|p| self.constraints[i].is_tight(p))).collect())
    }

    /// Image under `x -> m x + t` (m invertible).
    pub fn affine_image(&self, m: &[Vec<Rat>], t: &[Rat]) -> Result<Self> {
        let inv = invert(m).ok_or(Error::Singular)?;
        // a·x <= b with x = M^-1 (y - t)  =>  (M^-T a)·y <= b + (M^-T a)·t
        let mut cs = Vec::with_capacity(self.constraints.len());
        for h in &self.constraints {
            let a2: Vec<Rat> = (0..self.dim).map(|j| (0..self.dim).map(|i| &h.normal[i] * &inv[i][j]).sum()).collect();
            let b2 = &h.offset + dot(&a2, t);
            cs.push(Halfspace::new(a2, b2)?);
        }
        ConvexPolytope::new(self.dim, cs)
    }
}

pub(crate) fn affine_rank(points: &[Vec<Rat>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<Vec<Rat>> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    rank(&diffs)
}

pub(crate) fn invert(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rat> = (0..n).map(|i| if i == j { int(1) } else { int(0) }).collect();
        cols.push(crate::rational::solve(m, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}
