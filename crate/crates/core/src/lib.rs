//! Quaternion dense linear algebra kernels.
//!
//! The centrepiece is [`gemm::gemm_opt`], a cache-blocked quaternion GEMM
//! whose packing routines perform half of the quaternion component transpose
//! so the AVX microkernel only needs cheap duplicating shuffles. Alongside it:
//!
//! - [`quat`]: the Hamilton product and the 2x2 complex representation,
//! - [`batch`]: four-wide structure-of-arrays multiply-accumulate,
//! - [`matrix`]: column-major matrices and views,
//! - [`complex`]: the complex block embedding used as a correctness oracle,
//! - [`gemm::gemm_ref`]: the unblocked reference GEMM,
//! - [`tune`]: grid search over cache block sizes,
//! - [`bench`]: timing and verification harness behind the `hgemm-bench` binary.

pub mod batch;
pub mod bench;
pub mod complex;
pub mod error;
pub mod flops;
pub mod gemm;
pub mod matrix;
pub mod quat;
pub mod simd;
pub mod timing;
pub mod tune;

pub use batch::{batch_fmaq, QuadBatch};
pub use complex::{embed_complex, extract_quaternion, ComplexMatrix};
pub use error::{Error, Result};
pub use flops::{flop_count, FlopModel, OpKind, Ring};
pub use gemm::{gemm_opt, gemm_ref, BlockingConfig, KernelPath};
pub use matrix::{random_matrix, Distribution, MatMut, MatRef, QuatMatrix};
pub use quat::{complex_to_quat, conj, hmul, inverse, norm, to_complex2x2, Complex2x2, Quaternion};
pub use simd::F64x4;
#[cfg(feature = "op-count")]
pub use simd::OpCounts;
