//! Normal-cycle index of an L-shaped union at its vertices, checked against
//! the direct local Euler-characteristic formula.
//!
//!     cargo run --release --example index

use curvkit::ncycle::{bruteforce_scales, index, index_bruteforce, NormalQuery};
use curvkit::polyhedra::{ConvexPolytope, PolyUnion};
use curvkit::rational::vec_i;

fn main() -> curvkit::Result<()> {
    let l_shape = PolyUnion::new(vec![
        ConvexPolytope::cuboid(&vec_i(&[0, 0]), &vec_i(&[2, 1]))?,
        ConvexPolytope::cuboid(&vec_i(&[0, 0]), &vec_i(&[1, 2]))?,
    ])?;
    let points = [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2], [1, 0]];
    let normals = [[1, 1], [-1, -1], [1, 0], [0, 1], [3, 1], [-1, 2]];

    print!("{:>8}", "x \\ n");
    for n in &normals {
        print!("{:>9}", format!("{n:?}"));
    }
    println!();
    for p in &points {
        print!("{:>8}", format!("{p:?}"));
        for n in &normals {
            let q = NormalQuery::new(vec_i(p), vec_i(n))?;
            let v = index(&l_shape, &q)?;
            let (r, delta) = bruteforce_scales(&l_shape, &q)?;
            let direct = index_bruteforce(&l_shape, &q, &r, &delta)?;
            assert_eq!(v.value, direct);
            print!("{:>9}", format!("{}{}", v.value, if v.degenerate { "*" } else { "" }));
        }
        println!();
    }
    println!("* direction on the boundary of a normal cone");
    Ok(())
}
