//! Pointwise Lipschitz-Killing forms and their integrals over polygon normal bundles.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::polyhedra::ConvexPolytope;
use crate::rational::to_f64_vec;
use crate::special::sphere_area;

/// Determinant by partial pivoting; `m` is consumed as scratch.
pub(crate) fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

/// `⟨a¹∧…∧a^{d-1}, φ_k(x, n)⟩`, expanded over the `2^{d-1}` choices of
/// position or normal component in each slot; each term is the
/// determinant with columns `π_σ(1) a¹, …, π_σ(d-1) a^{d-1}, n`.
///
/// `x` does not enter: the forms are translation invariant.
pub fn lk_form_eval(k: usize, x: &[f64], n: &[f64], a: &[Vec<f64>]) -> Result<f64> {
    let d = n.len();
    if d == 0 || k >= d {
        return Err(Error::InvalidArgument(format!("form degree k = {k} outside 0..{d}")));
    }
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: x.len() });
    }
    if a.len() != d - 1 {
        return Err(Error::DimensionMismatch { expected: d - 1, found: a.len() });
    }
    if let Some(v) = a.iter().find(|v| v.len() != 2 * d) {
        return Err(Error::DimensionMismatch { expected: 2 * d, found: v.len() });
    }
    let norm = n.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("normal has length {norm}, expected 1")));
    }
    let ones = d - 1 - k;
    let mut total = 0.0;
    for mask in 0u64..(1 << (d - 1)) {
        if mask.count_ones() as usize != ones {
            continue;
        }
        // rows of the transpose: the determinant is unchanged
        let mut m: Vec<Vec<f64>> = a
            .iter()
            .enumerate()
            .map(|(i, v)| if mask >> i & 1 == 1 { v[d..].to_vec() } else { v[..d].to_vec() })
            .collect();
        m.push(n.to_vec());
        total += det_f64(m);
    }
    Ok(total / sphere_area(d - 1 - k))
}

/// Vertices of a polygon in counterclockwise order.
fn ccw_polygon(p: &ConvexPolytope) -> Result<Vec<[f64; 2]>> {
    let vs: Vec<[f64; 2]> = p
        .vertices()?
        .iter()
        .map(|v| {
            let f = to_f64_vec(v);
            [f[0], f[1]]
        })
        .collect();
    let c = vs.iter().fold([0.0, 0.0], |s, v| [s[0] + v[0], s[1] + v[1]]);
    let c = [c[0] / vs.len() as f64, c[1] / vs.len() as f64];
    let mut vs = vs;
    vs.sort_by(|a, b| (a[1] - c[1]).atan2(a[0] - c[0]).total_cmp(&(b[1] - c[1]).atan2(b[0] - c[0])));
    Ok(vs)
}

/// `∫_{nor P} φ_k` for a full-dimensional polygon, by midpoint quadrature
/// with `nodes` points on every edge and every vertex arc.
///
/// The normal bundle is traversed clockwise: along an edge with outward
/// normal `n` the tangent is `((n_y, -n_x), 0)`, and on the arc at a vertex
/// it is `(0, (sin θ, -cos θ))`.
pub fn polygon_normal_bundle_integral(p: &ConvexPolytope, k: usize, nodes: usize) -> Result<f64> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: p.dim() });
    }
    if !p.has_interior() {
        return Err(Error::InvalidArgument("polygon must have interior".into()));
    }
    let nodes = nodes.max(1);
    let vs = ccw_polygon(p)?;
    let m = vs.len();
    let normal_angle = |i: usize| {
        let (a, b) = (vs[i], vs[(i + 1) % m]);
        (a[0] - b[0]).atan2(b[1] - a[1])
    };
    let mut total = 0.0;
    for i in 0..m {
        let (a, b) = (vs[i], vs[(i + 1) % m]);
        let e = [b[0] - a[0], b[1] - a[1]];
        let len = e[0].hypot(e[1]);
        let n = [e[1] / len, -e[0] / len];
        for j in 0..nodes {
            let s = (j as f64 + 0.5) / nodes as f64;
            let x = [a[0] + s * e[0], a[1] + s * e[1]];
            let tangent = vec![n[1] * len, -n[0] * len, 0.0, 0.0];
            total += lk_form_eval(k, &x, &n, &[tangent])? / nodes as f64;
        }
        // arc at the vertex b, from this edge's normal to the next one's
        let t0 = normal_angle(i);
        let mut t1 = normal_angle((i + 1) % m);
        while t1 <= t0 {
            t1 += 2.0 * PI;
        }
        let h = (t1 - t0) / nodes as f64;
        for j in 0..nodes {
            let t = t0 + (j as f64 + 0.5) * h;
            let n = [t.cos(), t.sin()];
            let tangent = vec![0.0, 0.0, t.sin() * h, -t.cos() * h];
            total += lk_form_eval(k, &b, &n, &[tangent])?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::vec_i;

    #[test]
    fn planar_examples() {
        let v = lk_form_eval(1, &[0.0, 0.0], &[0.0, 1.0], &[vec![1.0, 0.0, 0.0, 0.0]]).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        let v = lk_form_eval(0, &[0.0, 0.0], &[0.0, 1.0], &[vec![0.0, 0.0, 1.0, 0.0]]).unwrap();
        assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn parallel_slots_vanish() {
        let n = [0.0, 0.0, 1.0];
        let a = vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
        for k in 0..3 {
            assert_eq!(lk_form_eval(k, &[0.0; 3], &n, &[a.clone(), a.clone()]).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(lk_form_eval(2, &[0.0, 0.0], &[0.0, 1.0], &[vec![0.0; 4]]).is_err());
        assert!(lk_form_eval(0, &[0.0, 0.0], &[0.0, 2.0], &[vec![0.0; 4]]).is_err());
        assert!(lk_form_eval(0, &[0.0, 0.0], &[0.0, 1.0], &[vec![0.0; 3]]).is_err());
    }

    #[test]
    fn square_normal_bundle() {
        let sq = ConvexPolytope::cuboid(&vec_i(&[0, 0]), &vec_i(&[2, 1])).unwrap();
        let c0 = polygon_normal_bundle_integral(&sq, 0, 16).unwrap();
        let c1 = polygon_normal_bundle_integral(&sq, 1, 16).unwrap();
        assert!((c0 - 1.0).abs() < 1e-12, "{c0}");
        assert!((c1 - 3.0).abs() < 1e-12, "{c1}");
    }
}
