//! Sampling checks of the polytope results on random planar zonotopes,
//! after a brute-force look at the segment ratio on a diamond.
//!
//!     cargo run --release --example geometry_checks

use resilience::geometry::{ratio_r_xy_grid_check, verify_geometry, Segment, ZonotopePolytope};
use resilience::Matrix;

fn main() -> resilience::Result<()> {
    let diamond = ZonotopePolytope::new(Matrix::from_rows(&[[0.5, -0.5], [0.5, 0.5]])?)?;
    let d = [1.0, 0.0];
    let (grid, exact) = ratio_r_xy_grid_check(&Segment::new(vec![0.5, 0.0]), &diamond, &d, 101)?;
    println!("diamond, segment ±(0.5, 0): grid ratio {grid:.6}, exact {exact:.6}");

    for seed in 0..3 {
        let s = verify_geometry(seed, 20, 720)?;
        println!(
            "seed {seed}: vertex {}/{} collinear {}/{} segment {}/{}",
            s.vertex_minimum_passed, s.cases, s.collinear_maximum_passed, s.cases, s.segment_maximum_passed, s.cases
        );
    }
    Ok(())
}
