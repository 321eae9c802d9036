//! Quaternion GEMM: `C <- alpha A B + beta C`.
//!
//! Scalars multiply from the left: `alpha` scales each element of `A` before
//! it meets `B`, and `beta` scales each element of `C`. A zero `beta` means
//! `C` is overwritten without being read; a zero `alpha` skips the product.

mod config;
mod kernel;
mod layered;
mod pack;
mod reference;
mod wide;

pub use config::BlockingConfig;
pub use kernel::{microkernel, microkernel_portable, microkernel_with, stage2_shuffles, KernelPath};
#[cfg(feature = "op-count")]
pub use kernel::count_microkernel_ops;
pub use layered::{gemm_opt, gemm_opt_with};
pub use pack::{pack_a, pack_b, PackedPanelA, PackedPanelB, PanelLayout};
pub use reference::gemm_ref;

use crate::error::{Error, Result};
use crate::matrix::{MatMut, MatRef};
use crate::quat::{hmul, Quaternion};

fn check_dims(a: &MatRef<'_>, b: &MatRef<'_>, c: &MatMut<'_>) -> Result<()> {
    if a.cols() != b.rows() || a.rows() != c.rows() || b.cols() != c.cols() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, B is {}x{}, C is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    Ok(())
}

/// `col <- beta * col`, with `beta == 0` overwriting and `beta == 1` a no-op.
#[inline]
fn scale_column(beta: Quaternion, col: &mut [Quaternion]) {
    if beta.is_zero() {
        col.fill(Quaternion::ZERO);
    } else if beta != Quaternion::E0 {
        for c in col {
            *c = hmul(beta, *c);
        }
    }
}
