//! Times the reference, blocked and complex-embedding products and prints CSV,
//! the same rows `hgemm-bench` writes.
//!
//!     cargo run --release --example benchmark

use hgemm::bench::{csv_writer, run_bench, verify, BenchOptions, Impl, VerifyOptions, VERIFY_TOLERANCE};
use hgemm::BlockingConfig;

fn main() -> hgemm::Result<()> {
    let verify_opts = VerifyOptions {
        sizes: vec![1, 2, 3, 17, 64, 65],
        seed: 1,
        tolerance: VERIFY_TOLERANCE,
        config: BlockingConfig::default(),
        inject_fault_from: None,
    };
    for row in verify(&verify_opts, |_| {})? {
        eprintln!(
            "n = {:3}: opt vs ref {:.1e}, embedded vs oracle {:.1e}, scalar chi {:.1e}",
            row.n, row.opt_vs_ref.value, row.embedded_vs_oracle.value, row.scalar_homomorphism
        );
    }

    let opts = BenchOptions { reps: 3, ..BenchOptions::new(vec![Impl::HgemmRef, Impl::HgemmOpt, Impl::ZgemmOracle], vec![64, 128, 256]) };
    let mut out = csv_writer(std::io::stdout());
    let records = run_bench(&opts, |rec| out.serialize(rec).map_err(|e| hgemm::Error::Io(e.to_string())))?;
    out.flush()?;

    for n in &opts.sizes {
        let time = |which| records.iter().find(|r| r.n == *n && r.implementation == which).map(|r| r.seconds).unwrap();
        eprintln!("n = {n}: opt/ref = {:.3}, opt/zgemm = {:.3}", time(Impl::HgemmOpt) / time(Impl::HgemmRef), time(Impl::HgemmOpt) / time(Impl::ZgemmOracle));
    }
    Ok(())
}
