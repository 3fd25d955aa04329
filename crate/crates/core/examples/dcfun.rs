//! Piecewise-linear d.c. functions: auras of polytopes, Clarke
//! subdifferentials, weak regularity and touching sets.
//!
//!     cargo run --release --example dcfun

use curvkit::dcfun::{
    abs_coordinate, aura_from_sublevel, clarke_subdifferential, combine_auras, halfspace_aura, is_weakly_regular,
    nondegeneracy_sq, polytope_aura, touches, DCFunction, Witness,
};
use curvkit::polyhedra::{ConvexPolytope, PolyUnion};
use curvkit::rational::{format_rat, frac, int, vec_i, Rat};

fn show(x: &[Rat]) -> String {
    format!("({})", x.iter().map(format_rat).collect::<Vec<_>>().join(", "))
}

fn main() -> curvkit::Result<()> {
    let square = ConvexPolytope::unit_cube(2);
    let aura = polytope_aura(&square)?;
    for x in [vec_i(&[0, 0]), vec_i(&[2, 0]), vec_i(&[3, 3])] {
        println!("aura of the unit square at {} = {}", show(&x), format_rat(&curvkit::dcfun::eval(&aura, &x)?));
    }
    let cut = combine_auras(&aura, &halfspace_aura(&vec_i(&[1, 1]), &int(1))?)?;
    if let Some(k) = nondegeneracy_sq(&cut)? {
        println!("square ∩ {{x+y <= 1}}: subgradients have |∂f|² >= {}", format_rat(&k));
    }

    // |x| - |y| has a saddle at the origin.
    let f = DCFunction::new(abs_coordinate(2, 0), abs_coordinate(2, 1))?;
    let hull = clarke_subdifferential(&f, &vec_i(&[0, 0]))?;
    println!("∂(|x|-|y|)(0) has {} generators, contains 0: {}", hull.generators().len(), hull.contains_origin());
    // Only slabs c < f < c + 1/4 containing the saddle value 0 fail.
    for c in [int(-1), frac(-1, 8), int(0), frac(1, 2)] {
        let cert = is_weakly_regular(&f, &c, &frac(1, 4))?;
        match &cert.witness {
            Witness::Regular => println!("  c = {c}: weakly regular with margin 1/4"),
            Witness::Point { x, min_norm_sq } => {
                println!("  c = {c}: not regular, witness {} with |∂f|² = {}", show(x), format_rat(min_norm_sq))
            }
        }
    }
    let sub = aura_from_sublevel(&f, &int(0))?;
    println!("max(0, |x|-|y|) at (2,1) = {}", format_rat(&curvkit::dcfun::eval(&sub, &vec_i(&[2, 1]))?));

    let a = PolyUnion::single(square)?;
    let side = PolyUnion::single(ConvexPolytope::cuboid(&vec_i(&[1, 0]), &vec_i(&[2, 1]))?)?;
    let across = PolyUnion::single(ConvexPolytope::cuboid(&[frac(1, 2), frac(1, 2)], &vec_i(&[2, 2]))?)?;
    println!("square touches its right neighbour: {}", touches(&a, &side)?);
    println!("square touches an overlapping square: {}", touches(&a, &across)?);
    Ok(())
}
