//! Load a plant from JSON, check controllability, and print the report.
//!
//!     cargo run --example system_file -- path/to/system.json

use resilience::cli::format_report_table;
use resilience::resilience::{full_report, multi_column_assessment};
use resilience::system::load_system_file;
use resilience::{is_controllable, split};

const DEFAULT: &str = r#"{
  "n": 3,
  "u_max": 1.0,
  "b_bar": [[1, 0, 0, 0.3, 0.2], [0, 1, 0, -0.2, 0.1], [0, 0, 1, 0.1, -0.4]],
  "lost": [3, 4]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    let (sys, lost) = load_system_file(&text)?;
    println!("n = {}, inputs = {}, controllable = {}", sys.n(), sys.num_inputs(), is_controllable(&sys));
    print!("{}", format_report_table(&full_report(&sys)?));
    if let Some(lost) = lost.filter(|l| l.len() > 1) {
        let a = multi_column_assessment(&split(&sys, &lost)?)?;
        println!("lost {lost:?}: {} ({})", a.verdict, a.marker);
    }
    Ok(())
}
