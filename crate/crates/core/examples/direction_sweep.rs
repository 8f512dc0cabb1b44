//! Time ratio around the unit circle for a lost opinion channel, as CSV.
//!
//!     cargo run --example direction_sweep -- 3 > channel3.csv

use resilience::cli::sweep_csv;
use resilience::reach::sweep_ratio;
use resilience::scenarios::opinion_example;
use resilience::split;

fn main() -> resilience::Result<()> {
    // 1-based channel number, as in the report tables.
    let channel: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let ms = split(&opinion_example(), &[channel.saturating_sub(1)])?;
    let samples = sweep_ratio(&ms, &[1.0, 0.0], &[0.0, 1.0], 720)?;
    let worst = samples.iter().map(|s| s.ratio.as_f64()).fold(f64::NEG_INFINITY, f64::max);
    eprintln!("channel {channel}: max t = {worst:.4}");
    print!("{}", sweep_csv(&samples));
    Ok(())
}
