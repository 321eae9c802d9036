//! Benchmark and verification harness.
//!
//! `run_bench` times square products (`alpha = 1`, `beta = 0`) for each
//! requested implementation and size and emits one CSV row per pair:
//!
//! ```text
//! impl,n,seconds,gflops,checksum
//! ```
//!
//! `verify` runs the reference, blocked and complex-embedding products side by
//! side and reports the worst relative deviations.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::complex::{embed_complex, extract_quaternion, left_scale_embedded, zgemm_blocked, zgemm_naive, ComplexMatrix};
use crate::error::{Error, Result};
use crate::flops::{hgemm_gflops, zgemm_gflops};
use crate::gemm::{gemm_opt, gemm_ref, BlockingConfig};
use crate::matrix::{random_matrix, random_quaternion, Distribution, QuatMatrix};
use crate::quat::{hmul, to_complex2x2, Quaternion};
use crate::timing::median_seconds;
use crate::tune::{tune, TuneSpace, TunedConfig};

/// Relative tolerance for cross-implementation checksum agreement.
pub const CHECKSUM_TOLERANCE: f64 = 1e-8;
/// Default relative tolerance of the verification sweep.
pub const VERIFY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize)]
pub enum Impl {
    #[value(name = "hgemm-ref")]
    #[serde(rename = "hgemm-ref")]
    HgemmRef,
    #[value(name = "hgemm-opt")]
    #[serde(rename = "hgemm-opt")]
    HgemmOpt,
    /// Blocked complex GEMM on the `2n x 2n` embeddings.
    #[value(name = "zgemm-oracle")]
    #[serde(rename = "zgemm-oracle")]
    ZgemmOracle,
}

impl Impl {
    pub fn name(self) -> &'static str {
        match self {
            Impl::HgemmRef => "hgemm-ref",
            Impl::HgemmOpt => "hgemm-opt",
            Impl::ZgemmOracle => "zgemm-oracle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    #[serde(rename = "impl")]
    pub implementation: Impl,
    pub n: usize,
    /// Median wall time of the product alone.
    pub seconds: f64,
    /// `16 n^3 / seconds` for quaternion paths, `32 n^3 / seconds` for the
    /// complex oracle, in units of 1e9.
    pub gflops: f64,
    /// Sum of every component of the quaternion result.
    pub checksum: f64,
}

/// Complex GEMM run by the `zgemm-oracle` implementation on the embeddings.
pub type ComplexGemm = fn(&ComplexMatrix, &ComplexMatrix) -> ComplexMatrix;

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub impls: Vec<Impl>,
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub config: BlockingConfig,
    /// Defaults to [`zgemm_blocked`]; swap in a vendor routine to compare
    /// against it instead.
    pub zgemm: ComplexGemm,
}

impl BenchOptions {
    pub fn new(impls: Vec<Impl>, sizes: Vec<usize>) -> Self {
        BenchOptions { impls, sizes, reps: 5, seed: 1, config: BlockingConfig::default(), zgemm: zgemm_blocked }
    }
}

/// The seeded `A` and `B` that [`run_bench`] uses for size `n`.
pub fn operands(n: usize, seed: u64) -> (QuatMatrix, QuatMatrix) {
    let a = random_matrix(n, n, seed.wrapping_mul(1_000_003).wrapping_add(n as u64), Distribution::default());
    let b = random_matrix(n, n, seed.wrapping_mul(1_000_033).wrapping_add(n as u64 + 7), Distribution::default());
    (a, b)
}

/// Times one implementation on `C = A B` and returns its record.
pub fn bench_one(which: Impl, a: &QuatMatrix, b: &QuatMatrix, reps: usize, cfg: &BlockingConfig, zgemm: ComplexGemm) -> Result<BenchRecord> {
    let n = a.rows();
    let (seconds, product) = match which {
        Impl::HgemmRef | Impl::HgemmOpt => {
            let mut c = QuatMatrix::zeros(n, b.cols());
            let mut result = Ok(());
            let seconds = median_seconds(reps, || {
                let (one, zero) = (Quaternion::E0, Quaternion::ZERO);
                result = match which {
                    Impl::HgemmRef => gemm_ref(one, a.view(), b.view(), zero, c.view_mut()),
                    _ => gemm_opt(one, a.view(), b.view(), zero, c.view_mut(), cfg),
                };
            });
            result?;
            (seconds, c)
        }
        Impl::ZgemmOracle => {
            let (za, zb) = (embed_complex(a), embed_complex(b));
            let mut zc = ComplexMatrix::zeros(0, 0);
            let seconds = median_seconds(reps, || zc = zgemm(&za, &zb));
            (seconds, extract_quaternion(&zc)?)
        }
    };
    let gflops = match which {
        Impl::ZgemmOracle => zgemm_gflops(n as u64, seconds),
        _ => hgemm_gflops(n as u64, seconds),
    };
    Ok(BenchRecord { implementation: which, n, seconds, gflops, checksum: product.checksum() })
}

fn checksums_agree(x: f64, y: f64) -> bool {
    (x - y).abs() <= CHECKSUM_TOLERANCE * x.abs().max(y.abs()).max(1.0)
}

/// Runs every `(size, impl)` pair, failing if any two implementations
/// disagree on a size's checksum.
pub fn run_bench(opts: &BenchOptions, mut on_record: impl FnMut(&BenchRecord) -> Result<()>) -> Result<Vec<BenchRecord>> {
    let mut records = Vec::new();
    for &n in &opts.sizes {
        let (a, b) = operands(n, opts.seed);
        let first = records.len();
        for &which in &opts.impls {
            let rec = bench_one(which, &a, &b, opts.reps, &opts.config, opts.zgemm)?;
            on_record(&rec)?;
            records.push(rec);
        }
        if let Some(base) = records.get(first) {
            for other in &records[first + 1..] {
                if !checksums_agree(base.checksum, other.checksum) {
                    return Err(Error::ChecksumMismatch {
                        n,
                        first: base.implementation.name().into(),
                        first_sum: base.checksum,
                        second: other.implementation.name().into(),
                        second_sum: other.checksum,
                    });
                }
            }
        }
    }
    Ok(records)
}

pub fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(true).from_writer(out)
}

/// Worst deviation found by a comparison, with its location.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deviation {
    pub value: f64,
    pub row: usize,
    pub col: usize,
}

impl Deviation {
    const NONE: Deviation = Deviation { value: 0.0, row: 0, col: 0 };

    fn max(self, other: Deviation) -> Deviation {
        // NaN deviations always win so they are never hidden.
        if other.value > self.value || other.value.is_nan() {
            other
        } else {
            self
        }
    }
}

/// Largest componentwise `|x - y|` relative to the norm of the matching
/// element of `reference`.
pub fn quaternion_deviation(x: &QuatMatrix, reference: &QuatMatrix) -> Deviation {
    assert_eq!((x.rows(), x.cols()), (reference.rows(), reference.cols()));
    let mut worst = Deviation::NONE;
    for j in 0..x.cols() {
        for i in 0..x.rows() {
            let (p, q) = (x[(i, j)], reference[(i, j)]);
            let scale = q.norm().max(f64::MIN_POSITIVE);
            let d = (p - q).to_array().iter().map(|c| c.abs()).fold(0.0, |m: f64, c| if c > m || c.is_nan() { c } else { m }) / scale;
            worst = worst.max(Deviation { value: d, row: i, col: j });
        }
    }
    worst
}

/// Largest entrywise `|z - oracle|` over a `2M x 2N` embedding, relative to
/// the norm of the quaternion element the entry encodes (read from the
/// oracle's top block row).
pub fn embedded_deviation(z: &ComplexMatrix, oracle: &ComplexMatrix) -> Deviation {
    assert_eq!((z.rows(), z.cols()), (oracle.rows(), oracle.cols()));
    let (m, n) = (z.rows() / 2, z.cols() / 2);
    let mut worst = Deviation::NONE;
    for j in 0..z.cols() {
        for i in 0..z.rows() {
            let (qi, qj) = (i % m, j % n);
            let scale = (oracle.get(qi, qj).norm_sqr() + oracle.get(qi, n + qj).norm_sqr()).sqrt();
            let d = (z.get(i, j) - oracle.get(i, j)).norm() / scale.max(f64::MIN_POSITIVE);
            worst = worst.max(Deviation { value: d, row: i, col: j });
        }
    }
    worst
}

/// Computes `alpha A B + beta C` in the complex embedding with triple loops.
pub fn complex_oracle(alpha: Quaternion, a: &QuatMatrix, b: &QuatMatrix, beta: Quaternion, c: &QuatMatrix) -> ComplexMatrix {
    let ab = zgemm_naive(&embed_complex(a), &embed_complex(b));
    left_scale_embedded(alpha, &ab).add(&left_scale_embedded(beta, &embed_complex(c)))
}

/// Largest entrywise `|chi(p q) - chi(p) chi(q)|`, relative to `|p q|`, over
/// `pairs` seeded random scalar pairs.
pub fn scalar_homomorphism_deviation(pairs: usize, seed: u64) -> f64 {
    let mut worst = 0.0f64;
    for t in 0..pairs as u64 {
        let p = random_quaternion(seed.wrapping_mul(0x9e37_79b9).wrapping_add(2 * t));
        let q = random_quaternion(seed.wrapping_mul(0x9e37_79b9).wrapping_add(2 * t + 1));
        let pq = hmul(p, q);
        let (lhs, rhs) = (to_complex2x2(pq), to_complex2x2(p).matmul(&to_complex2x2(q)));
        let scale = pq.norm().max(f64::MIN_POSITIVE);
        for (l, r) in lhs.0.iter().zip(&rhs.0) {
            let d = (l - r).norm() / scale;
            if d > worst || d.is_nan() {
                worst = d;
            }
        }
    }
    worst
}

/// Scalar pairs checked per size by [`verify`].
pub const VERIFY_SCALAR_PAIRS: usize = 256;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub sizes: Vec<usize>,
    pub seed: u64,
    pub tolerance: f64,
    pub config: BlockingConfig,
    /// Test hook: perturbs the blocked result for every size at or above this.
    pub inject_fault_from: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyRow {
    pub n: usize,
    /// `gemm_opt` against `gemm_ref`.
    pub opt_vs_ref: Deviation,
    /// Embedded `gemm_opt` result against the complex triple-loop oracle.
    pub embedded_vs_oracle: Deviation,
    /// [`scalar_homomorphism_deviation`] over this size's seed.
    pub scalar_homomorphism: f64,
}

/// Checks `gemm_opt` against `gemm_ref` and the complex oracle for every size
/// with random `alpha`, `beta` and operands. Stops at the first size that
/// exceeds the tolerance; the returned rows cover every size checked.
pub fn verify(opts: &VerifyOptions, mut on_row: impl FnMut(&VerifyRow)) -> Result<Vec<VerifyRow>> {
    let mut rows = Vec::new();
    for &n in &opts.sizes {
        let seed = opts.seed.wrapping_mul(7919).wrapping_add(n as u64);
        let alpha = random_quaternion(seed);
        let beta = random_quaternion(seed + 1);
        let a = random_matrix(n, n, seed + 2, Distribution::default());
        let b = random_matrix(n, n, seed + 3, Distribution::default());
        let c0 = random_matrix(n, n, seed + 4, Distribution::default());

        let mut c_ref = c0.clone();
        gemm_ref(alpha, a.view(), b.view(), beta, c_ref.view_mut())?;
        let mut c_opt = c0.clone();
        gemm_opt(alpha, a.view(), b.view(), beta, c_opt.view_mut(), &opts.config)?;
        if opts.inject_fault_from.is_some_and(|from| n >= from) {
            let e = c_opt[(0, 0)];
            c_opt[(0, 0)] = e + Quaternion::new(1e-6 * e.norm().max(1.0), 0.0, 0.0, 0.0);
        }

        let row = VerifyRow {
            n,
            opt_vs_ref: quaternion_deviation(&c_opt, &c_ref),
            embedded_vs_oracle: embedded_deviation(&embed_complex(&c_opt), &complex_oracle(alpha, &a, &b, beta, &c0)),
            scalar_homomorphism: scalar_homomorphism_deviation(VERIFY_SCALAR_PAIRS, seed),
        };
        on_row(&row);
        rows.push(row.clone());
        let chi = Deviation { value: row.scalar_homomorphism, row: 0, col: 0 };
        for (check, d) in [
            ("gemm_opt vs gemm_ref", row.opt_vs_ref),
            ("embedding vs complex oracle", row.embedded_vs_oracle),
            ("scalar representation homomorphism", chi),
        ] {
            // Written so a NaN deviation fails.
            if d.value.is_nan() || d.value > opts.tolerance {
                return Err(Error::VerificationFailed { n, check, row: d.row, col: d.col, deviation: d.value, tolerance: opts.tolerance });
            }
        }
    }
    Ok(rows)
}

/// Parses a size list: `64,128,256`, an inclusive range `a:b` or `a:b:step`,
/// or a geometric range `a:b:xF` (multiply by `F` each step). Forms may be
/// mixed with commas.
pub fn parse_sizes(spec: &str) -> std::result::Result<Vec<usize>, String> {
    let mut sizes = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("`{s}` is not a size"));
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [n] => sizes.push(num(n)?),
            [a, b] | [a, b, _] => {
                let (lo, hi) = (num(a)?, num(b)?);
                if lo > hi {
                    return Err(format!("empty range `{part}`"));
                }
                match fields.get(2) {
                    Some(f) if f.starts_with('x') => {
                        let factor = num(&f[1..])?;
                        if factor < 2 || lo == 0 {
                            return Err(format!("geometric range `{part}` needs a start >= 1 and factor >= 2"));
                        }
                        let mut v = lo;
                        while v <= hi {
                            sizes.push(v);
                            v *= factor;
                        }
                    }
                    step => {
                        let step = step.map(|s| num(s)).transpose()?.unwrap_or(1);
                        if step == 0 {
                            return Err("step must be positive".into());
                        }
                        sizes.extend((lo..=hi).step_by(step));
                    }
                }
            }
            _ => return Err(format!("cannot parse size spec `{part}`")),
        }
    }
    if sizes.is_empty() {
        return Err("size list is empty".into());
    }
    if sizes.contains(&0) {
        return Err("sizes must be positive".into());
    }
    Ok(sizes)
}

/// Quaternion GEMM benchmark: times reference, blocked and complex-embedding
/// products and writes CSV.
#[derive(Debug, Parser)]
#[command(name = "hgemm-bench", version)]
pub struct Cli {
    /// Implementations to time, comma separated.
    #[arg(long = "impl", value_enum, value_delimiter = ',', default_values_t = [Impl::HgemmRef, Impl::HgemmOpt, Impl::ZgemmOracle])]
    pub impls: Vec<Impl>,

    /// Sizes: `64,128`, `a:b[:step]`, or geometric `a:b:xF`.
    #[arg(long, value_parser = parse_size_list, default_value = "64:512:x2")]
    pub sizes: SizeList,

    /// Timed repetitions per measurement (after one warm-up).
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// CSV destination: a path, or `stdout`.
    #[arg(long, default_value = "stdout")]
    pub csv: String,

    /// Tuned blocking file to load (or, with `--tune`, to write).
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Run the block-size tuner before benchmarking and use its result.
    #[arg(long)]
    pub tune: bool,

    /// Probe size for `--tune`.
    #[arg(long, default_value_t = 256)]
    pub tune_probe: usize,

    /// Run the correctness sweep only; no timing rows.
    #[arg(long)]
    pub verify_only: bool,

    /// Relative tolerance for `--verify-only`.
    #[arg(long, default_value_t = VERIFY_TOLERANCE)]
    pub tolerance: f64,

    /// Write each size's `A` and `B` as `a_<n>.qmat` / `b_<n>.qmat` here.
    #[arg(long, value_name = "DIR")]
    pub save_fixtures: Option<PathBuf>,

    #[arg(long, hide = true)]
    pub inject_fault: Option<usize>,
}

fn save_fixtures(dir: &std::path::Path, sizes: &[usize], seed: u64) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for &n in sizes {
        let (a, b) = operands(n, seed);
        a.write_qmat(std::fs::File::create(dir.join(format!("a_{n}.qmat")))?)?;
        b.write_qmat(std::fs::File::create(dir.join(format!("b_{n}.qmat")))?)?;
    }
    Ok(())
}

/// Parsed `--sizes` value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeList(pub Vec<usize>);

fn parse_size_list(spec: &str) -> std::result::Result<SizeList, String> {
    parse_sizes(spec).map(SizeList)
}

impl Cli {
    fn sizes(&self) -> Vec<usize> {
        self.sizes.0.clone()
    }
}

/// Executes a parsed command line. Progress goes to `log`; CSV goes to the
/// `--csv` destination.
pub fn run_cli(cli: &Cli, log: &mut dyn Write) -> Result<()> {
    let mut config = match &cli.config {
        Some(path) if !cli.tune => TunedConfig::load(path)?.config,
        _ => BlockingConfig::default(),
    };
    if cli.tune {
        let space = TuneSpace { probe_n: cli.tune_probe, seed: cli.seed, ..Default::default() };
        let result = tune(&space)?;
        for row in &result.table {
            writeln!(log, "tune mc={} nc={} kc={} seconds={:.6} gflops={:.3}", row.config.mc, row.config.nc, row.config.kc, row.seconds, row.gflops)?;
        }
        config = result.best;
        writeln!(log, "tuned: mc={} nc={} kc={}", config.mc, config.nc, config.kc)?;
        if let Some(path) = &cli.config {
            result.tuned_config().save(path)?;
        }
    }

    if let Some(dir) = &cli.save_fixtures {
        save_fixtures(dir, &cli.sizes(), cli.seed)?;
    }

    if cli.verify_only {
        let opts = VerifyOptions {
            sizes: cli.sizes(),
            seed: cli.seed,
            tolerance: cli.tolerance,
            config,
            inject_fault_from: cli.inject_fault,
        };
        let mut io_result = Ok(());
        let outcome = verify(&opts, |row| {
            if io_result.is_ok() {
                io_result = writeln!(
                    log,
                    "n={} opt_vs_ref={:.3e} embedded_vs_oracle={:.3e} scalar_homomorphism={:.3e}",
                    row.n, row.opt_vs_ref.value, row.embedded_vs_oracle.value, row.scalar_homomorphism
                );
            }
        });
        io_result?;
        outcome?;
        writeln!(log, "verified {} sizes within {:e}", opts.sizes.len(), opts.tolerance)?;
        return Ok(());
    }

    let sink: Box<dyn Write> = if cli.csv == "stdout" {
        Box::new(std::io::stdout())
    } else {
        Box::new(std::fs::File::create(&cli.csv)?)
    };
    let mut writer = csv_writer(sink);
    let opts = BenchOptions { reps: cli.reps as usize, seed: cli.seed, config, ..BenchOptions::new(cli.impls.clone(), cli.sizes()) };
    run_bench(&opts, |rec| {
        writer.serialize(rec).map_err(|e| Error::Io(e.to_string()))?;
        writer.flush()?;
        Ok(())
    })?;
    Ok(())
}
