//! Building a scene in code, writing it as JSON and loading it back, the
//! format the `curvkit` binary reads.
//!
//!     cargo run --release --example scene_file -- [path]

use curvkit::curvature::curvature_union;
use curvkit::dcfun::{abs_coordinate, DCFunction};
use curvkit::polyhedra::ConvexPolytope;
use curvkit::rational::{frac, vec_i};
use curvkit::scene::{Scene, SceneFile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path =
        std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("curvkit_plus.json").display().to_string());
    let bar = |lo: [i64; 2], hi: [i64; 2]| ConvexPolytope::cuboid(&vec_i(&lo), &vec_i(&hi));
    let plus = [bar([-3, -1], [3, 1])?, bar([-1, -3], [1, 3])?];
    let f = DCFunction::new(abs_coordinate(2, 0), abs_coordinate(2, 1))?;
    let mut file = SceneFile::from_polytopes(2, &plus).with_function(&f);
    file.metadata = serde_json::json!({"name": "plus sign"});
    std::fs::write(&path, file.to_json())?;

    let scene = Scene::load(path.as_ref())?;
    let c = curvature_union(&scene.union)?;
    println!("wrote {path}");
    println!(
        "{} parts, {} d.c. function(s), C = {:?}",
        scene.union.parts().len(),
        scene.dc_functions.len(),
        c.values()
    );
    let b = scene.bounding_box()?;
    println!(
        "bounding box volume {}, contains (5/2, 1/2): {}",
        b.volume(),
        scene.union.contains(&[frac(5, 2), frac(1, 2)])
    );
    Ok(())
}
