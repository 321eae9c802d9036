//! Complex matrices, the block embedding of quaternion matrices into them, and
//! the complex GEMMs used as an oracle and as the comparison baseline.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::QuatMatrix;
use crate::quat::Quaternion;

/// Default extraction tolerance, relative to the largest entry modulus.
pub const EXTRACT_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense column-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    ld: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, ld: rows.max(1), data: vec![ZERO; rows.max(1) * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[j * m.ld + i] = f(i, j);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { ZERO })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn ld(&self) -> usize {
        self.ld
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.data[j * self.ld + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.data[j * self.ld + i] = v;
    }

    pub fn conj_transpose(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for j in 0..self.cols {
            for i in 0..self.rows {
                m = m.max(self.get(i, j).norm());
            }
        }
        m
    }
}

/// Embeds an `M x N` quaternion matrix as the `2M x 2N` complex block matrix
/// `[[U0, U1], [-conj(U1), conj(U0)]]` with `U0 = Q0 + Q1 i`, `U1 = Q2 + Q3 i`.
pub fn embed_complex(q: &QuatMatrix) -> ComplexMatrix {
    let (m, n) = (q.rows(), q.cols());
    let mut z = ComplexMatrix::zeros(2 * m, 2 * n);
    for j in 0..n {
        for i in 0..m {
            let e = q[(i, j)];
            let u0 = Complex64::new(e.w, e.x);
            let u1 = Complex64::new(e.y, e.z);
            z.set(i, j, u0);
            z.set(i, n + j, u1);
            z.set(m + i, j, -u1.conj());
            z.set(m + i, n + j, u0.conj());
        }
    }
    z
}

/// Inverse of [`embed_complex`] with the default tolerance.
pub fn extract_quaternion(z: &ComplexMatrix) -> Result<QuatMatrix> {
    extract_quaternion_with_tolerance(z, EXTRACT_TOLERANCE)
}

/// Recovers `Q` from its complex embedding, reading the top block row.
///
/// The bottom block row must mirror the top one to within
/// `tolerance * max|Z_ij|`.
pub fn extract_quaternion_with_tolerance(z: &ComplexMatrix, tolerance: f64) -> Result<QuatMatrix> {
    if !z.rows().is_multiple_of(2) || !z.cols().is_multiple_of(2) {
        return Err(Error::OddDimension { rows: z.rows(), cols: z.cols() });
    }
    let (m, n) = (z.rows() / 2, z.cols() / 2);
    let mut residual = 0.0f64;
    for j in 0..n {
        for i in 0..m {
            let u0 = z.get(i, j);
            let u1 = z.get(i, n + j);
            residual = residual.max((z.get(m + i, j) + u1.conj()).norm());
            residual = residual.max((z.get(m + i, n + j) - u0.conj()).norm());
        }
    }
    let limit = tolerance * z.max_abs();
    if residual > limit {
        return Err(Error::StructureViolation { residual, tolerance: limit });
    }
    Ok(QuatMatrix::from_fn(m, n, |i, j| {
        let u0 = z.get(i, j);
        let u1 = z.get(i, n + j);
        Quaternion::new(u0.re, u0.im, u1.re, u1.im)
    }))
}

/// `embed(q I) Z`: left multiplication by a quaternion scalar, acting on the
/// top and bottom block rows of an embedded matrix.
pub fn left_scale_embedded(q: Quaternion, z: &ComplexMatrix) -> ComplexMatrix {
    assert!(z.rows().is_multiple_of(2), "embedded matrices have an even row count");
    let m = z.rows() / 2;
    let u0 = Complex64::new(q.w, q.x);
    let u1 = Complex64::new(q.y, q.z);
    ComplexMatrix::from_fn(z.rows(), z.cols(), |i, j| {
        let (top, bottom) = (z.get(i % m, j), z.get(m + i % m, j));
        if i < m {
            u0 * top + u1 * bottom
        } else {
            -u1.conj() * top + u0.conj() * bottom
        }
    })
}

/// Textbook triple-loop product `A B`. Used as the correctness oracle.
pub fn zgemm_naive(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.cols(), b.rows(), "inner dimensions differ");
    let (m, n, k) = (a.rows(), b.cols(), a.cols());
    let mut c = ComplexMatrix::zeros(m, n);
    for j in 0..n {
        for i in 0..m {
            let mut acc = ZERO;
            for p in 0..k {
                acc += a.get(i, p) * b.get(p, j);
            }
            c.set(i, j, acc);
        }
    }
    c
}

// Cache blocks for the baseline complex GEMM: a 64 x 256 block of A is
// 256 KiB and stays in L2 while it is swept against every column of B.
const ZGEMM_MC: usize = 64;
const ZGEMM_KC: usize = 256;

/// Cache-blocked complex GEMM `A B`, the in-repo stand-in for a vendor ZGEMM.
///
/// Columns of `C` are updated with `axpy` sweeps over contiguous column
/// segments of `A`, two columns of `B` at a time.
pub fn zgemm_blocked(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.cols(), b.rows(), "inner dimensions differ");
    let (m, n, k) = (a.rows(), b.cols(), a.cols());
    let mut c = ComplexMatrix::zeros(m, n);
    let (lda, ldc) = (a.ld, c.ld);
    for pc in (0..k).step_by(ZGEMM_KC) {
        let kb = ZGEMM_KC.min(k - pc);
        for ic in (0..m).step_by(ZGEMM_MC) {
            let mb = ZGEMM_MC.min(m - ic);
            let mut j = 0;
            while j + 1 < n {
                let (lo, hi) = c.data.split_at_mut((j + 1) * ldc);
                let c0 = &mut lo[j * ldc + ic..j * ldc + ic + mb];
                let c1 = &mut hi[ic..ic + mb];
                for p in pc..pc + kb {
                    let a_col = &a.data[p * lda + ic..p * lda + ic + mb];
                    let b0 = b.get(p, j);
                    let b1 = b.get(p, j + 1);
                    for ((x0, x1), av) in c0.iter_mut().zip(c1.iter_mut()).zip(a_col) {
                        *x0 += av * b0;
                        *x1 += av * b1;
                    }
                }
                j += 2;
            }
            if j < n {
                let c0 = &mut c.data[j * ldc + ic..j * ldc + ic + mb];
                for p in pc..pc + kb {
                    let a_col = &a.data[p * lda + ic..p * lda + ic + mb];
                    let b0 = b.get(p, j);
                    for (x0, av) in c0.iter_mut().zip(a_col) {
                        *x0 += av * b0;
                    }
                }
            }
        }
    }
    c
}
