//! Exhaustive grid search for cache block sizes, and the plain-text file the
//! winning configuration is saved in.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};
use crate::flops::hgemm_gflops;
use crate::gemm::{gemm_opt, BlockingConfig};
use crate::matrix::{random_matrix, Distribution, QuatMatrix};
use crate::quat::Quaternion;
use crate::timing::{host_descriptor, median, median_seconds};

pub const CONFIG_VERSION: u32 = 1;

/// Candidate block sizes and the probe problem they are timed on.
#[derive(Clone, Debug, PartialEq)]
pub struct TuneSpace {
    pub mc: Vec<usize>,
    pub nc: Vec<usize>,
    pub kc: Vec<usize>,
    /// Side of the square probe GEMM.
    pub probe_n: usize,
    /// Timed repetitions per candidate, after one warm-up.
    pub reps: usize,
    pub seed: u64,
}

impl Default for TuneSpace {
    fn default() -> Self {
        TuneSpace {
            mc: vec![32, 64, 128],
            nc: vec![32, 64, 128],
            kc: vec![256, 512, 1024],
            probe_n: 512,
            reps: 5,
            seed: 1,
        }
    }
}

impl TuneSpace {
    pub fn singleton(cfg: BlockingConfig, probe_n: usize) -> Self {
        TuneSpace { mc: vec![cfg.mc], nc: vec![cfg.nc], kc: vec![cfg.kc], probe_n, ..Default::default() }
    }

    /// Every `(mc, nc, kc)` combination, `mc` outermost, in list order.
    pub fn candidates(&self) -> Vec<BlockingConfig> {
        let mut out = Vec::with_capacity(self.mc.len() * self.nc.len() * self.kc.len());
        for &mc in &self.mc {
            for &nc in &self.nc {
                for &kc in &self.kc {
                    out.push(BlockingConfig::new(mc, nc, kc));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TuneRow {
    pub config: BlockingConfig,
    pub seconds: f64,
    pub gflops: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuneResult {
    pub best: BlockingConfig,
    /// One row per candidate, in [`TuneSpace::candidates`] order.
    pub table: Vec<TuneRow>,
    pub host: String,
    /// Seconds since the Unix epoch when tuning finished.
    pub timestamp: u64,
}

/// Probe operands shared by the tuner and its re-measurement.
pub struct Probe {
    a: QuatMatrix,
    b: QuatMatrix,
    c: QuatMatrix,
}

impl Probe {
    pub fn new(n: usize, seed: u64) -> Self {
        Probe {
            a: random_matrix(n, n, seed, Distribution::default()),
            b: random_matrix(n, n, seed.wrapping_add(1), Distribution::default()),
            c: QuatMatrix::zeros(n, n),
        }
    }

    /// Median seconds of `C = A B` under `cfg`, after one warm-up run.
    pub fn time(&mut self, cfg: &BlockingConfig, reps: usize) -> Result<f64> {
        cfg.validate()?;
        Ok(median_seconds(reps, || {
            self.time_once(cfg);
        }))
    }

    /// Seconds for a single `C = A B` under a validated `cfg`.
    fn time_once(&mut self, cfg: &BlockingConfig) -> f64 {
        let Probe { a, b, c } = self;
        let start = Instant::now();
        gemm_opt(Quaternion::E0, a.view(), b.view(), Quaternion::ZERO, c.view_mut(), cfg).expect("probe dimensions conform");
        start.elapsed().as_secs_f64()
    }
}

/// Times `gemm_opt` for every candidate and returns the fastest.
///
/// After one untimed pass over the grid, each of the `reps` rounds times every
/// candidate once in grid order; a candidate's time is the median of its
/// rounds. Interleaving keeps slow drift in machine speed from favouring
/// whichever candidates happen to run first. Ties on the median go to the
/// smaller `kc`, then `mc`, then `nc`.
pub fn tune(space: &TuneSpace) -> Result<TuneResult> {
    let candidates = space.candidates();
    if candidates.is_empty() {
        return Err(Error::EmptySpace);
    }
    for cfg in &candidates {
        cfg.validate()?;
    }
    if space.probe_n == 0 || space.reps == 0 {
        return Err(Error::InvalidConfig("probe size and repetitions must be positive".into()));
    }

    let mut probe = Probe::new(space.probe_n, space.seed);
    let mut samples = vec![Vec::with_capacity(space.reps); candidates.len()];
    for round in 0..=space.reps {
        for (cfg, s) in candidates.iter().zip(samples.iter_mut()) {
            let t = probe.time_once(cfg);
            if round > 0 {
                s.push(t);
            }
        }
    }
    let table: Vec<TuneRow> = candidates
        .into_iter()
        .zip(samples.iter_mut())
        .map(|(config, s)| {
            let seconds = median(s);
            TuneRow { config, seconds, gflops: hgemm_gflops(space.probe_n as u64, seconds) }
        })
        .collect();
    let best = select_best(&table);
    Ok(TuneResult { best, table, host: host_descriptor(), timestamp: unix_now() })
}

fn select_best(table: &[TuneRow]) -> BlockingConfig {
    table
        .iter()
        .min_by(|x, y| {
            x.seconds
                .total_cmp(&y.seconds)
                .then(x.config.kc.cmp(&y.config.kc))
                .then(x.config.mc.cmp(&y.config.mc))
                .then(x.config.nc.cmp(&y.config.nc))
        })
        .map(|r| r.config)
        .expect("table is non-empty")
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Contents of a tuned-config file.
#[derive(Clone, Debug, PartialEq)]
pub struct TunedConfig {
    pub config: BlockingConfig,
    pub host: String,
    pub timestamp: u64,
}

impl TuneResult {
    pub fn tuned_config(&self) -> TunedConfig {
        TunedConfig { config: self.best, host: self.host.clone(), timestamp: self.timestamp }
    }
}

impl TunedConfig {
    /// `key=value` lines: `version`, `mc`, `nc`, `kc`, `host`, `timestamp`.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# hgemm blocking parameters").unwrap();
        writeln!(s, "version={CONFIG_VERSION}").unwrap();
        writeln!(s, "mc={}", self.config.mc).unwrap();
        writeln!(s, "nc={}", self.config.nc).unwrap();
        writeln!(s, "kc={}", self.config.kc).unwrap();
        writeln!(s, "host={}", self.host).unwrap();
        writeln!(s, "timestamp={}", self.timestamp).unwrap();
        s
    }

    /// Parses the file format. Blank lines, `#` comments and unknown keys are
    /// ignored; `version`, `mc`, `nc` and `kc` are required.
    pub fn parse(text: &str) -> Result<Self> {
        let (mut version, mut mc, mut nc, mut kc) = (None, None, None, None);
        let mut host = String::new();
        let mut timestamp = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| Error::Config(format!("line {}: `{key}` is not a non-negative integer", lineno + 1)))
            };
            match key {
                "version" => version = Some(num(value)?),
                "mc" => mc = Some(num(value)? as usize),
                "nc" => nc = Some(num(value)? as usize),
                "kc" => kc = Some(num(value)? as usize),
                "host" => host = value.to_string(),
                "timestamp" => timestamp = num(value)?,
                _ => {}
            }
        }
        match version {
            Some(v) if v == CONFIG_VERSION as u64 => {}
            Some(v) => return Err(Error::Config(format!("unsupported version {v}"))),
            None => return Err(Error::Config("missing version".into())),
        }
        let need = |v: Option<usize>, k: &str| v.ok_or_else(|| Error::Config(format!("missing {k}")));
        let config = BlockingConfig::new(need(mc, "mc")?, need(nc, "nc")?, need(kc, "kc")?);
        config.validate()?;
        Ok(TunedConfig { config, host, timestamp })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }
}
