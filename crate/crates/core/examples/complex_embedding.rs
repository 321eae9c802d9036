//! Quaternion matrices as complex matrices of twice the size, and the
//! embedding used to cross-check quaternion GEMM against complex GEMM.
//!
//!     cargo run --example complex_embedding

use hgemm::complex::{embed_complex, extract_quaternion, zgemm_naive};
use hgemm::{gemm_ref, random_matrix, Distribution, QuatMatrix, Quaternion};

fn main() {
    let (m, k, n) = (3, 4, 2);
    let a = random_matrix(m, k, 10, Distribution::default());
    let b = random_matrix(k, n, 11, Distribution::default());

    let za = embed_complex(&a);
    println!("A is {}x{}; its embedding is {}x{} complex", a.rows(), a.cols(), za.rows(), za.cols());
    println!("A[0,0] = {}", a[(0, 0)]);
    println!("block entries: Z[0,0] = {}, Z[0,{k}] = {}, Z[{m},0] = {}, Z[{m},{k}] = {}", za.get(0, 0), za.get(0, k), za.get(m, 0), za.get(m, k));

    let mut c = QuatMatrix::zeros(m, n);
    gemm_ref(Quaternion::E0, a.view(), b.view(), Quaternion::ZERO, c.view_mut()).unwrap();

    let z = zgemm_naive(&za, &embed_complex(&b));
    let back = extract_quaternion(&z).expect("product of embeddings keeps the block structure");
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..m {
            worst = worst.max((back[(i, j)] - c[(i, j)]).norm() / c[(i, j)].norm());
        }
    }
    println!("quaternion GEMM vs complex GEMM of embeddings: max relative deviation {worst:.2e}");

    let mut broken = z.clone();
    broken.set(0, n, broken.get(0, n) + 1e-3);
    println!("extracting a perturbed matrix: {}", extract_quaternion(&broken).unwrap_err());
}
