//! Cache-blocked GEMM against the reference, on the AVX and portable kernels.
//!
//!     cargo run --release --example blocked_gemm [n]

use std::time::Instant;

use hgemm::bench::quaternion_deviation;
use hgemm::gemm::gemm_opt_with;
use hgemm::matrix::random_quaternion;
use hgemm::{gemm_opt, gemm_ref, random_matrix, BlockingConfig, Distribution, KernelPath};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(257);
    let (alpha, beta) = (random_quaternion(1), random_quaternion(2));
    let a = random_matrix(n, n, 3, Distribution::default());
    let b = random_matrix(n, n, 4, Distribution::default());
    let c0 = random_matrix(n, n, 5, Distribution::default());
    let cfg = BlockingConfig::default();
    println!("n = {n}, {cfg:?}, kernel path {:?}", KernelPath::detect());

    let mut c_ref = c0.clone();
    let t = Instant::now();
    gemm_ref(alpha, a.view(), b.view(), beta, c_ref.view_mut()).unwrap();
    println!("gemm_ref  {:8.3} s", t.elapsed().as_secs_f64());

    let mut c_opt = c0.clone();
    let t = Instant::now();
    gemm_opt(alpha, a.view(), b.view(), beta, c_opt.view_mut(), &cfg).unwrap();
    println!("gemm_opt  {:8.3} s", t.elapsed().as_secs_f64());

    let d = quaternion_deviation(&c_opt, &c_ref);
    println!("max relative deviation {:.2e} at ({}, {})", d.value, d.row, d.col);
    println!("bit-identical: {}", c_opt.as_slice() == c_ref.as_slice());

    let mut c_port = c0.clone();
    gemm_opt_with(alpha, a.view(), b.view(), beta, c_port.view_mut(), &cfg, KernelPath::Portable).unwrap();
    println!("portable kernel bit-identical: {}", c_port.as_slice() == c_opt.as_slice());

    // Odd block sizes exercise the padded edge tiles.
    let mut c_small = c0.clone();
    gemm_opt(alpha, a.view(), b.view(), beta, c_small.view_mut(), &BlockingConfig::new(6, 10, 7)).unwrap();
    println!("(mc, nc, kc) = (6, 10, 7) bit-identical: {}", c_small.as_slice() == c_ref.as_slice());
}
