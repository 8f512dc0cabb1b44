//! Two agents steered by five media channels: which channel can go rogue?
//!
//!     cargo run --example opinion_dynamics

use resilience::cli::format_report_table;
use resilience::reach::time_ratio;
use resilience::resilience::full_report;
use resilience::scenarios::{opinion_example, OPINION_CONSENSUS, OPINION_POLARIZATION};
use resilience::split;

fn main() -> resilience::Result<()> {
    let sys = opinion_example();
    let report = full_report(&sys)?;
    print!("{}", format_report_table(&report));

    let inv: Vec<String> = report.r_q_vector().iter().map(|r| format!("{:.2}", 1.0 / r)).collect();
    println!("\n1/r_q          = [{}]", inv.join(" "));

    for (name, d) in [("consensus", OPINION_CONSENSUS), ("polarization", OPINION_POLARIZATION)] {
        let t = (0..sys.num_inputs())
            .map(|j| Ok(format!("{:.2}", time_ratio(&split(&sys, &[j])?, &d)?.as_f64())))
            .collect::<resilience::Result<Vec<_>>>()?;
        println!("t({name:<12}) = [{}]", t.join(" "));
    }
    Ok(())
}
