//! External angles of polytope faces.
//!
//! The normal cone of a face is computed inside the direction space of the
//! polytope's affine hull, split into mutually orthogonal components and
//! measured per component: rays and orthants exactly, planar wedges and
//! three-dimensional cones in closed form, anything larger by Gaussian
//! Monte Carlo.

use std::f64::consts::PI;

use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::polyhedra::lp;
use crate::polyhedra::{ConvexPolytope, Face, FaceLattice, Volume};
use crate::rational::{
    dot, format_rat, frac, normalize_ray, nullspace, project, rank, row_echelon, sub, to_f64, to_f64_vec, Rat,
};
use crate::rng::substream;

/// Controls the Monte Carlo fallback for cones of rank four and more.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AngleConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for AngleConfig {
    fn default() -> Self {
        AngleConfig { samples: 200_000, seed: 0 }
    }
}

/// Normalized spherical measure of a normal cone.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleValue {
    pub value: f64,
    pub exact: Option<Rat>,
    /// Monte Carlo standard error; zero for closed forms.
    pub std_error: f64,
}

impl AngleValue {
    fn exact(v: Rat) -> Self {
        AngleValue { value: to_f64(&v), exact: Some(v), std_error: 0.0 }
    }

    fn float(v: f64) -> Self {
        AngleValue { value: v, exact: None, std_error: 0.0 }
    }

    fn times(&self, o: &AngleValue) -> AngleValue {
        AngleValue {
            value: self.value * o.value,
            exact: self.exact.as_ref().zip(o.exact.as_ref()).map(|(a, b)| a * b),
            std_error: (self.std_error * o.value).hypot(o.std_error * self.value),
        }
    }
}

/// A k-face with its external angle and k-volume.
#[derive(Clone, Debug)]
pub struct FaceAngle {
    pub k: usize,
    pub vertices: Vec<Vec<Rat>>,
    /// Reduced echelon basis of the face's direction space.
    pub affine_basis: Vec<Vec<Rat>>,
    pub angle: AngleValue,
    pub volume: Volume,
}

/// External angle of the face of `p` whose vertex set is `face`.
pub fn external_angle(p: &ConvexPolytope, face: &[Vec<Rat>]) -> Result<FaceAngle> {
    external_angle_with(p, face, &AngleConfig::default())
}

pub fn external_angle_with(p: &ConvexPolytope, face: &[Vec<Rat>], cfg: &AngleConfig) -> Result<FaceAngle> {
    let lat = FaceLattice::of(p)?;
    let mut want: Vec<&Vec<Rat>> = face.iter().collect();
    want.sort();
    want.dedup();
    let f = lat
        .faces
        .iter()
        .find(|f| {
            let mut have: Vec<&Vec<Rat>> = f.vertices.iter().map(|&i| &lat.vertices[i]).collect();
            have.sort();
            have == want
        })
        .ok_or(Error::NotAFace)?;
    let pts = lat.points(f);
    Ok(FaceAngle {
        k: f.dim,
        affine_basis: directions(&pts),
        angle: face_angle(p, &lat, f, cfg)?,
        volume: lat.volume(f),
        vertices: pts,
    })
}

fn directions(pts: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let diffs: Vec<Vec<Rat>> = pts[1..].iter().map(|v| sub(v, &pts[0])).collect();
    row_echelon(&diffs)
}

/// External angle of `f` within the face lattice `lat` of `p`.
pub(crate) fn face_angle(p: &ConvexPolytope, lat: &FaceLattice, f: &Face, cfg: &AngleConfig) -> Result<AngleValue> {
    if f.dim == lat.dim {
        return Ok(AngleValue::exact(Rat::one()));
    }
    if f.dim + 1 == lat.dim {
        return Ok(AngleValue::exact(frac(1, 2)));
    }
    let d = p.dim();
    // W = dir(aff P) ∩ dir(F)^⊥; tight normals already lie in dir(F)^⊥, so
    // projecting is only needed when P is not full-dimensional
    let w = if lat.dim == d {
        None
    } else {
        let mut orth = directions(&lat.points(f));
        orth.extend(nullspace(&directions(&lat.vertices), d));
        Some(nullspace(&orth, d))
    };

    let mut gens: Vec<Vec<Rat>> = Vec::new();
    for &i in &f.tight {
        let a = p.constraints()[i].normal();
        let mut g = match &w {
            Some(w) => project(w, a),
            None => a.to_vec(),
        };
        if g.iter().all(Zero::is_zero) {
            continue;
        }
        normalize_ray(&mut g);
        if !gens.contains(&g) {
            gens.push(g);
        }
    }
    let gens = extreme_generators(gens);

    // connected components of the non-orthogonality graph
    let n = gens.len();
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(c: &mut [usize], mut i: usize) -> usize {
        while c[i] != i {
            c[i] = c[c[i]];
            i = c[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if !dot(&gens[i], &gens[j]).is_zero() {
                let (a, b) = (root(&mut comp, i), root(&mut comp, j));
                comp[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<Vec<Rat>>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = root(&mut comp, i);
        match roots.iter().position(|&x| x == r) {
            Some(g) => groups[g].push(gens[i].clone()),
            None => {
                roots.push(r);
                groups.push(vec![gens[i].clone()]);
            }
        }
    }

    let label = face_label(&lat.points(f));
    let x_f = centroid(&lat.points(f));
    let mut total = AngleValue::exact(Rat::one());
    for (gi, g) in groups.iter().enumerate() {
        let a = match rank(g) {
            1 => AngleValue::exact(frac(1, 2)),
            2 => wedge_angle(&g[0], &g[1]),
            3 => AngleValue::float(solid_angle_3(g)),
            r => monte_carlo_angle(g, r, &lat.vertices, &x_f, cfg, &label, gi as u64),
        };
        total = total.times(&a);
    }
    Ok(total)
}

/// Drops generators lying in the cone spanned by the others.
fn extreme_generators(mut gens: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    if rank(&gens) == gens.len() {
        return gens;
    }
    let mut j = 0;
    while j < gens.len() {
        let others: Vec<&Vec<Rat>> = gens.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, g)| g).collect();
        if !others.is_empty() && in_cone(&others, &gens[j]) {
            gens.remove(j);
        } else {
            j += 1;
        }
    }
    gens
}

/// `∃ λ >= 0 : Σ λ_i g_i = t`.
fn in_cone(gens: &[&Vec<Rat>], t: &[Rat]) -> bool {
    let m = gens.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (c, tc) in t.iter().enumerate() {
        let r: Vec<Rat> = gens.iter().map(|g| g[c].clone()).collect();
        rows.push(r.iter().map(|v| -v).collect());
        rhs.push(-tc.clone());
        rows.push(r);
        rhs.push(tc.clone());
    }
    for i in 0..m {
        let mut r = vec![Rat::zero(); m];
        r[i] = -Rat::one();
        rows.push(r);
        rhs.push(Rat::zero());
    }
    lp::feasible(&rows, &rhs)
}

/// Planar wedge between two rays; exact when the opening is a rational
/// multiple of `π` recognizable from the squared cosine.
fn wedge_angle(a: &[Rat], b: &[Rat]) -> AngleValue {
    let ab = dot(a, b);
    let cos2 = &ab * &ab / (dot(a, a) * dot(b, b));
    let table = [(frac(1, 4), (1, 6), (1, 3)), (frac(1, 2), (1, 8), (3, 8)), (frac(3, 4), (1, 12), (5, 12))];
    for (c2, acute, obtuse) in table {
        if cos2 == c2 {
            let (p, q) = if ab > Rat::zero() { acute } else { obtuse };
            return AngleValue::exact(frac(p, q));
        }
    }
    let (fa, fb) = (to_f64_vec(a), to_f64_vec(b));
    let c = dotf(&fa, &fb) / (dotf(&fa, &fa) * dotf(&fb, &fb)).sqrt();
    AngleValue::float(c.clamp(-1.0, 1.0).acos() / (2.0 * PI))
}

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal basis (Gram-Schmidt, twice) of the span of the given vectors.
fn orthonormal_basis(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    let scale = vs.iter().map(|v| dotf(v, v).sqrt()).fold(0.0, f64::max);
    for v in vs {
        let mut u = v.clone();
        for _ in 0..2 {
            for b in &q {
                let c = dotf(&u, b);
                u.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = dotf(&u, &u).sqrt();
        if n > 1e-10 * scale {
            q.push(u.into_iter().map(|x| x / n).collect());
        }
    }
    q
}

fn coords(q: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    q.iter().map(|b| dotf(b, v)).collect()
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Solid angle fraction of a pointed cone in three dimensions: fan
/// triangulation of its cyclically ordered extreme rays, each spherical
/// triangle measured by the Van Oosterom-Strackee formula.
fn solid_angle_3(gens: &[Vec<Rat>]) -> f64 {
    let fl: Vec<Vec<f64>> = gens.iter().map(|g| to_f64_vec(g)).collect();
    let q = orthonormal_basis(&fl);
    let rays: Vec<Vec<f64>> = fl
        .iter()
        .map(|g| {
            let c = coords(&q, g);
            let n = dotf(&c, &c).sqrt();
            c.into_iter().map(|x| x / n).collect()
        })
        .collect();
    let mut axis = vec![0.0; 3];
    for r in &rays {
        axis.iter_mut().zip(r).for_each(|(a, x)| *a += x);
    }
    let basis = orthonormal_basis(&[axis.clone(), vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
    let (e1, e2) = (&basis[1], &basis[2]);
    let mut order: Vec<(f64, usize)> =
        rays.iter().enumerate().map(|(i, r)| (dotf(r, e2).atan2(dotf(r, e1)), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let a = &rays[order[0].1];
    let mut omega = 0.0;
    for w in order[1..].windows(2) {
        let (b, c) = (&rays[w[0].1], &rays[w[1].1]);
        let triple = dotf(a, &cross(b, c));
        let denom = 1.0 + dotf(a, b) + dotf(a, c) + dotf(b, c);
        omega += 2.0 * triple.abs().atan2(denom);
    }
    omega / (4.0 * PI)
}

/// Fraction of standard Gaussian vectors in the component span that fall in
/// the cone; membership is tested against the polar description
/// `n·(v - x_F) <= 0` over the polytope's vertices.
fn monte_carlo_angle(
    gens: &[Vec<Rat>],
    r: usize,
    vertices: &[Vec<Rat>],
    x_f: &[f64],
    cfg: &AngleConfig,
    label: &str,
    component: u64,
) -> AngleValue {
    let fl: Vec<Vec<f64>> = gens.iter().map(|g| to_f64_vec(g)).collect();
    let q = orthonormal_basis(&fl);
    debug_assert_eq!(q.len(), r);
    let dirs: Vec<Vec<f64>> = vertices
        .iter()
        .map(|v| {
            let t: Vec<f64> = to_f64_vec(v).iter().zip(x_f).map(|(a, b)| a - b).collect();
            coords(&q, &t)
        })
        .filter(|t| dotf(t, t) > 1e-24)
        .collect();
    let n = cfg.samples.max(2);
    let mut rng = substream(cfg.seed, label, component);
    let mut hits = 0usize;
    let mut g = vec![0.0; r];
    for _ in 0..n {
        g.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
        if dirs.iter().all(|t| dotf(&g, t) <= 0.0) {
            hits += 1;
        }
    }
    let p = hits as f64 / n as f64;
    AngleValue { value: p, exact: None, std_error: (p * (1.0 - p) / n as f64).sqrt() }
}

fn centroid(pts: &[Vec<Rat>]) -> Vec<f64> {
    let d = pts[0].len();
    let mut c = vec![0.0; d];
    for p in pts {
        c.iter_mut().zip(to_f64_vec(p)).for_each(|(a, x)| *a += x);
    }
    c.into_iter().map(|x| x / pts.len() as f64).collect()
}

fn face_label(pts: &[Vec<Rat>]) -> String {
    let mut s = String::from("external-angle");
    for p in pts {
        s.push('|');
        for x in p {
            s.push_str(&format_rat(x));
            s.push(',');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, vec_i};

    fn angle_of(p: &ConvexPolytope, face: &[&[i64]]) -> AngleValue {
        let pts: Vec<Vec<Rat>> = face.iter().map(|v| vec_i(v)).collect();
        external_angle(p, &pts).unwrap().angle
    }

    #[test]
    fn cube_faces() {
        let sq = ConvexPolytope::unit_cube(2);
        assert_eq!(angle_of(&sq, &[&[0, 0]]).exact, Some(frac(1, 4)));
        assert_eq!(angle_of(&sq, &[&[0, 0], &[1, 0]]).exact, Some(frac(1, 2)));
        assert_eq!(angle_of(&sq, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).exact, Some(int(1)));
        let cube = ConvexPolytope::unit_cube(3);
        assert_eq!(angle_of(&cube, &[&[1, 1, 1]]).exact, Some(frac(1, 8)));
        assert_eq!(angle_of(&cube, &[&[0, 0, 0], &[0, 0, 1]]).exact, Some(frac(1, 4)));
        let c4 = ConvexPolytope::unit_cube(4);
        assert_eq!(angle_of(&c4, &[&[0, 0, 0, 0]]).exact, Some(frac(1, 16)));
    }

    #[test]
    fn not_a_face() {
        let sq = ConvexPolytope::unit_cube(2);
        let e = external_angle(&sq, &[vec_i(&[0, 0]), vec_i(&[1, 1])]).unwrap_err();
        assert_eq!(e, Error::NotAFace);
    }

    #[test]
    fn triangle_vertices_sum_to_one() {
        let t = ConvexPolytope::from_points(&[vec_i(&[0, 0]), vec_i(&[3, 0]), vec_i(&[1, 2])]).unwrap();
        let total: f64 = [[0, 0], [3, 0], [1, 2]].iter().map(|v| angle_of(&t, &[v]).value).sum();
        assert!((total - 1.0).abs() < 1e-14);
        // the right isosceles corner: interior angle π/4, normal cone 3π/4
        let r = ConvexPolytope::from_points(&[vec_i(&[0, 0]), vec_i(&[1, 0]), vec_i(&[0, 1])]).unwrap();
        assert_eq!(angle_of(&r, &[&[1, 0]]).exact, Some(frac(3, 8)));
    }

    #[test]
    fn tetrahedron_vertex_angles_sum_to_one() {
        let pts = [[0, 0, 0], [2, 0, 0], [0, 3, 0], [1, 1, 4]];
        let t = ConvexPolytope::from_points(&pts.iter().map(|v| vec_i(v)).collect::<Vec<_>>()).unwrap();
        let total: f64 = pts.iter().map(|v| angle_of(&t, &[v]).value).sum();
        assert!((total - 1.0).abs() < 1e-12, "{total}");
    }

    #[test]
    fn lower_dimensional_polytope_uses_its_own_hull() {
        // the unit square sitting in the plane z = 0 of R^3
        let flat = ConvexPolytope::cuboid(&vec_i(&[0, 0, 0]), &vec_i(&[1, 1, 0])).unwrap();
        assert_eq!(angle_of(&flat, &[&[0, 0, 0]]).exact, Some(frac(1, 4)));
        assert_eq!(angle_of(&flat, &[&[0, 0, 0], &[1, 0, 0]]).exact, Some(frac(1, 2)));
    }

    #[test]
    fn monte_carlo_simplex_vertex() {
        // at e_1 the slanted facet couples all four facet normals, so the
        // rank-4 cone is sampled; at the origin it is an orthant
        let mut pts = vec![vec_i(&[0, 0, 0, 0])];
        for i in 0..4 {
            let mut e = vec_i(&[0, 0, 0, 0]);
            e[i] = int(1);
            pts.push(e);
        }
        let s = ConvexPolytope::from_points(&pts).unwrap();
        let cfg = AngleConfig { samples: 40_000, seed: 3 };
        let far = external_angle_with(&s, &pts[1..2], &cfg).unwrap().angle;
        assert!(far.exact.is_none());
        assert!(far.std_error > 0.0);
        let again = external_angle_with(&s, &pts[1..2], &cfg).unwrap().angle;
        assert_eq!(far, again);
        let origin = external_angle_with(&s, &pts[0..1], &cfg).unwrap().angle;
        assert_eq!(origin.exact, Some(frac(1, 16)));
        // vertex angles sum to one
        assert!((far.value - 15.0 / 64.0).abs() < 4.0 * far.std_error);
    }
}
