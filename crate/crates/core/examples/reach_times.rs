//! Reach times on a two-state plant that loses one of three actuators.
//!
//!     cargo run --example reach_times

use resilience::reach::{disturbed_reach_time, malfunctioning_reach_time, nominal_reach_time, time_ratio};
use resilience::{split, SystemSpec};

fn main() -> resilience::Result<()> {
    // ẋ = B̄ū, |ū_i| ≤ 1. The third actuator nudges the first state.
    let sys = SystemSpec::from_rows(&[[1.0, 0.0, 0.5], [0.0, 1.0, 0.0]], 1.0)?;
    let ms = split(&sys, &[2])?;
    let d = [1.0, 0.0];

    println!("T_N*(d)          = {}", nominal_reach_time(&sys, &d)?);
    for w in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        println!("T(d, w = {w:>4})  = {}", disturbed_reach_time(&ms, &[w], &d)?);
    }
    let (tm, vertex) = malfunctioning_reach_time(&ms, &d)?;
    println!("T_M*(d)          = {tm} at w = {:?}", vertex.w());
    println!("t(d)             = {}", time_ratio(&ms, &d)?);
    Ok(())
}
