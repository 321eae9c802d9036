use super::{check_dims, scale_column};
use crate::error::Result;
use crate::matrix::{MatMut, MatRef};
use crate::quat::{hmul, Quaternion};

/// Unblocked column-sweep GEMM.
///
/// For each column `j` of `C`: scale by `beta`, then for each `k` add
/// `(alpha * A[:, k]) * B[k, j]`. No blocking, no packing, no explicit
/// vectorization; this is both the correctness oracle and the slow baseline.
pub fn gemm_ref(alpha: Quaternion, a: MatRef<'_>, b: MatRef<'_>, beta: Quaternion, mut c: MatMut<'_>) -> Result<()> {
    check_dims(&a, &b, &c)?;
    for j in 0..c.cols() {
        let c_col = c.col_mut(j);
        scale_column(beta, c_col);
        if alpha.is_zero() {
            continue;
        }
        for k in 0..a.cols() {
            let b_kj = b.get(k, j);
            for (c_ij, &a_ik) in c_col.iter_mut().zip(a.col(k)) {
                *c_ij = *c_ij + hmul(hmul(alpha, a_ik), b_kj);
            }
        }
    }
    Ok(())
}
