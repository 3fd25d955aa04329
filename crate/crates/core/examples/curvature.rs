//! Curvature vectors C_0..C_d of a few polyhedral unions, total and
//! localized to a window.
//!
//!     cargo run --release --example curvature

use curvkit::curvature::{curvature_localized, curvature_union, CurvatureVector};
use curvkit::polyhedra::{euler, ConvexPolytope, PolyUnion};
use curvkit::rational::{format_rat, frac, vec_i};

fn show(name: &str, c: &CurvatureVector) {
    let cells: Vec<String> = match c.exact_values() {
        Some(e) => e.iter().map(format_rat).collect(),
        None => c.values().iter().map(|v| format!("{v:.6}")).collect(),
    };
    println!("{name:<28} C = [{}]", cells.join(", "));
}

fn main() -> curvkit::Result<()> {
    let l_shape = PolyUnion::new(vec![
        ConvexPolytope::cuboid(&vec_i(&[0, 0]), &vec_i(&[2, 1]))?,
        ConvexPolytope::cuboid(&vec_i(&[0, 0]), &vec_i(&[1, 2]))?,
    ])?;
    let annulus = PolyUnion::new(vec![
        ConvexPolytope::cuboid(&vec_i(&[0, 0]), &vec_i(&[3, 1]))?,
        ConvexPolytope::cuboid(&vec_i(&[0, 2]), &vec_i(&[3, 3]))?,
        ConvexPolytope::cuboid(&vec_i(&[0, 0]), &vec_i(&[1, 3]))?,
        ConvexPolytope::cuboid(&vec_i(&[2, 0]), &vec_i(&[3, 3]))?,
    ])?;
    let triangle = PolyUnion::single(ConvexPolytope::from_points(&[vec_i(&[0, 0]), vec_i(&[3, 0]), vec_i(&[0, 4])])?)?;
    let tetra = PolyUnion::single(ConvexPolytope::from_points(&[
        vec_i(&[0, 0, 0]),
        vec_i(&[1, 0, 0]),
        vec_i(&[0, 1, 0]),
        vec_i(&[0, 0, 1]),
    ])?)?;

    for (name, u) in [
        ("unit square", PolyUnion::single(ConvexPolytope::unit_cube(2))?),
        ("L-shape", l_shape.clone()),
        ("square annulus", annulus),
        ("3-4-5 triangle", triangle),
        ("unit cube", PolyUnion::single(ConvexPolytope::unit_cube(3))?),
        ("corner tetrahedron", tetra),
    ] {
        show(name, &curvature_union(&u)?);
        println!("{:<28} chi = {}", "", euler(&u)?);
    }

    // Only the reentrant corner and its two edges lie in this window.
    let window = ConvexPolytope::cuboid(&[frac(1, 2), frac(1, 2)], &[frac(3, 2), frac(3, 2)])?;
    show("L-shape near (1,1)", &curvature_localized(&l_shape, &window)?);
    Ok(())
}
