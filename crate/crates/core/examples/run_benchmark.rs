//! Runs a benchmark file and writes its report directory, the same as
//! `ggm-eval benchmark`.
//!
//! cargo run --release --example run_benchmark -- [spec.toml] [out_dir]

use ggm_eval::harness::{run_benchmark, BenchmarkSpec};

fn main() -> ggm_eval::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/benchmarks/desk.toml").into());
    let out = args.next().unwrap_or_else(|| "report".into());

    let spec = BenchmarkSpec::load(&path)?;
    for line in spec.header() {
        println!("{line}");
    }
    let report = run_benchmark(&spec)?;
    report.write_dir(&out)?;
    print!("{}", report.summary_table());
    println!("CSV files in {out}/");
    Ok(())
}
