//! Wall-clock measurement helpers.

use std::time::Instant;

/// Runs `f` once untimed, then `reps` timed times, and returns the median
/// duration in seconds.
pub fn median_seconds(reps: usize, mut f: impl FnMut()) -> f64 {
    assert!(reps > 0, "at least one timed repetition is required");
    f();
    let mut times: Vec<f64> = (0..reps)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64()
        })
        .collect();
    median(&mut times)
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

/// Short description of the machine: architecture, CPU model and whether the
/// AVX kernel is usable.
pub fn host_descriptor() -> String {
    let model = std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|s| {
            s.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split(':').nth(1))
                .map(|m| m.trim().to_string())
        })
        .unwrap_or_else(|| "unknown cpu".to_string());
    let path = crate::gemm::KernelPath::detect();
    format!("{} {} path={:?}", std::env::consts::ARCH, model, path)
}
