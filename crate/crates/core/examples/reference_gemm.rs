//! `C <- alpha A B + beta C` with the unblocked reference GEMM, including the
//! BLAS scalar conventions.
//!
//!     cargo run --example reference_gemm

use hgemm::{gemm_ref, random_matrix, Distribution, QuatMatrix, Quaternion};

fn main() {
    let a = random_matrix(4, 3, 1, Distribution::default());
    let b = random_matrix(3, 5, 2, Distribution::default());
    let alpha = Quaternion::new(0.5, -1.0, 0.25, 2.0);

    let mut c = QuatMatrix::zeros(4, 5);
    gemm_ref(alpha, a.view(), b.view(), Quaternion::ZERO, c.view_mut()).unwrap();
    println!("C = alpha A B, C[1,2] = {}", c[(1, 2)]);

    // alpha sits on the left of A; moving it to the right changes the answer.
    let mut ab = QuatMatrix::zeros(4, 5);
    gemm_ref(Quaternion::E0, a.view(), b.view(), Quaternion::ZERO, ab.view_mut()).unwrap();
    println!("alpha (A B)[1,2] = {}", alpha * ab[(1, 2)]);
    println!("(A B)[1,2] alpha = {}", ab[(1, 2)] * alpha);

    // beta = 0 never reads C, so garbage is fine.
    let mut junk = QuatMatrix::from_fn(4, 5, |_, _| Quaternion::new(f64::NAN, 0.0, 0.0, 0.0));
    gemm_ref(Quaternion::E0, a.view(), b.view(), Quaternion::ZERO, junk.view_mut()).unwrap();
    println!("beta = 0 over NaN-filled C: all finite = {}", junk.iter().all(|q| q.is_finite()));

    // Works on sub-views: update the lower-right 2x2 of C only.
    let before = c.clone();
    let a2 = a.view().submatrix(2, 0, 2, 3);
    let b2 = b.view().submatrix(0, 3, 3, 2);
    gemm_ref(Quaternion::E0, a2, b2, Quaternion::E0, c.view_mut().submatrix_mut(2, 3, 2, 2)).unwrap();
    let changed = (0..4).flat_map(|i| (0..5).map(move |j| (i, j))).filter(|&(i, j)| c[(i, j)] != before[(i, j)]).count();
    println!("sub-view update changed {changed} of 20 entries");

    let bad = QuatMatrix::zeros(2, 2);
    println!("mismatched shapes: {}", gemm_ref(Quaternion::E0, a.view(), bad.view(), Quaternion::ZERO, c.view_mut()).unwrap_err());
}
