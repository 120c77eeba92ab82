//! Wall-clock time of each metric as the number of samples, edges or nodes
//! grows. The desk preset stops at 2000 samples; `full` runs the whole grid
//! and can take hours.
//!
//! cargo run --release --example timing -- [desk|full] [samples|edges|nodes ...]

use ggm_eval::harness::{timing_suite, Sweep, TimingSpec};

fn main() -> ggm_eval::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut spec = match args.next().as_deref() {
        Some("full") => TimingSpec::full(),
        _ => TimingSpec::desk(),
    };
    let sweeps: Vec<Sweep> = args.map(|a| a.parse()).collect::<ggm_eval::Result<_>>()?;
    if !sweeps.is_empty() {
        spec.sweeps = sweeps;
    }

    let rows = timing_suite(&spec)?;
    println!("{:<8} {:>9} {:>7} {:>9}  {:<15} {:>10}", "sweep", "graphs", "nodes", "p", "stage", "seconds");
    for r in &rows {
        let secs = r.seconds.map_or("skipped".to_string(), |s| format!("{s:.3}"));
        println!(
            "{:<8} {:>9} {:>7} {:>9.5}  {:<15} {:>10}",
            r.point.sweep.name(),
            r.point.graphs,
            r.point.nodes,
            r.point.p,
            r.stage.name(),
            secs
        );
    }
    Ok(())
}
