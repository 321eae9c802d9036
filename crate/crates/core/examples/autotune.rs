//! Grid search over (mc, nc, kc), saving the winner to a config file that
//! `hgemm-bench --config` can load.
//!
//!     cargo run --release --example autotune [probe_n] [path]

use hgemm::tune::{tune, TuneSpace, TunedConfig};

fn main() -> hgemm::Result<()> {
    let mut args = std::env::args().skip(1);
    let probe_n = args.next().and_then(|s| s.parse().ok()).unwrap_or(192);
    let path = args.next().unwrap_or_else(|| std::env::temp_dir().join("hgemm-tuned.cfg").display().to_string());

    let space = TuneSpace { probe_n, reps: 3, ..Default::default() };
    println!("timing {} candidates at n = {probe_n}", space.candidates().len());
    let result = tune(&space)?;
    println!("{:>5} {:>5} {:>5} {:>10} {:>8}", "mc", "nc", "kc", "seconds", "GFLOP/s");
    for row in &result.table {
        let mark = if row.config == result.best { " <" } else { "" };
        println!("{:>5} {:>5} {:>5} {:>10.5} {:>8.2}{mark}", row.config.mc, row.config.nc, row.config.kc, row.seconds, row.gflops);
    }

    result.tuned_config().save(&path)?;
    println!("\nwrote {path}:\n{}", std::fs::read_to_string(&path)?);
    let loaded = TunedConfig::load(&path)?;
    assert_eq!(loaded.config, result.best);
    Ok(())
}
