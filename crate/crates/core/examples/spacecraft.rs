//! Orbit raising with 14 Fourier thrust coefficients. Each coefficient is
//! lost in turn; the printed matrix and the one rebuilt from orbital
//! elements are compared.
//!
//!     cargo run --example spacecraft

use resilience::reach::time_ratio;
use resilience::resilience::full_report;
use resilience::scenarios::{fit_global_scale, spacecraft_example, spacecraft_reconstructed};
use resilience::{split, SystemSpec};

fn row(label: &str, values: &[f64]) {
    let cells: Vec<String> =
        values.iter().map(|v| if v.is_finite() { format!("{v:>7.3}") } else { format!("{:>7}", "inf") }).collect();
    println!("{label:<14}{}", cells.join(""));
}

fn summarize(label: &str, sys: &SystemSpec, d: &[f64]) -> resilience::Result<()> {
    let report = full_report(sys)?;
    println!("{label}");
    let header: Vec<String> = (1..=14).map(|j| format!("{j:>7}")).collect();
    println!("{:<14}{}", "  column", header.join(""));
    row("  r_max", &report.r_max_vector());
    row("  r_q", &report.r_q_vector());
    let t = (0..14).map(|j| Ok(time_ratio(&split(sys, &[j])?, d)?.as_f64())).collect::<resilience::Result<Vec<_>>>()?;
    row("  t(d)", &t);
    Ok(())
}

fn main() -> resilience::Result<()> {
    let ex = spacecraft_example();
    println!("d = {:?}\n", ex.target_distance_d);
    summarize("printed matrix", &ex.printed_bbar, &ex.target_distance_d)?;

    let recon = spacecraft_reconstructed()?;
    let scale = fit_global_scale(ex.printed_bbar.b_bar(), recon.b_bar());
    println!("\nrebuilt from elements (fitted scale to printed: {scale:.4e})");
    summarize("rebuilt matrix", &recon, &ex.target_distance_d)?;
    Ok(())
}
