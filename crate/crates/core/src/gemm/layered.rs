use super::kernel::{kernel_plain, tile_kernel, KernelPath};
use super::pack::{PackedPanelA, PackedPanelB};
use super::{check_dims, scale_column, BlockingConfig};
use crate::error::Result;
use crate::matrix::{MatMut, MatRef};
use crate::quat::Quaternion;

/// Cache-blocked GEMM on the fastest available kernel path.
///
/// Same contract as [`super::gemm_ref`]. Blocks of `B` (`kc x nc`) and
/// `alpha * A` (`mc x kc`) are packed into reusable panels and swept by the
/// register-block microkernel; ragged edges go through zero-padded panels and
/// a scratch tile.
pub fn gemm_opt(
    alpha: Quaternion,
    a: MatRef<'_>,
    b: MatRef<'_>,
    beta: Quaternion,
    c: MatMut<'_>,
    cfg: &BlockingConfig,
) -> Result<()> {
    gemm_opt_with(alpha, a, b, beta, c, cfg, KernelPath::detect())
}

/// [`gemm_opt`] with an explicit kernel path.
///
/// Panics if `path` is not available on this CPU.
pub fn gemm_opt_with(
    alpha: Quaternion,
    a: MatRef<'_>,
    b: MatRef<'_>,
    beta: Quaternion,
    mut c: MatMut<'_>,
    cfg: &BlockingConfig,
    path: KernelPath,
) -> Result<()> {
    check_dims(&a, &b, &c)?;
    cfg.validate()?;

    for j in 0..c.cols() {
        scale_column(beta, c.col_mut(j));
    }
    let (m, n, k) = (c.rows(), c.cols(), a.cols());
    if m == 0 || n == 0 || k == 0 || alpha.is_zero() {
        return Ok(());
    }
    #[cfg(target_arch = "x86_64")]
    if path == KernelPath::Avx512 && cfg.is_vector_blocked() {
        assert!(path.is_available(), "kernel path {path:?} is not supported on this CPU");
        // SAFETY: AVX-512F was just checked and the dimensions above.
        unsafe { super::wide::gemm_wide(alpha, a, b, &mut c, cfg) };
        return Ok(());
    }

    let mut a_panel = PackedPanelA::with_capacity(cfg);
    let mut b_panel = PackedPanelB::with_capacity(cfg);
    let (mr, nr) = (cfg.mr, cfg.nr);
    let kern = cfg.is_vector_blocked().then(|| tile_kernel(path));
    let mut scratch = vec![Quaternion::ZERO; mr * nr];

    for jc in (0..n).step_by(cfg.nc) {
        let nb = cfg.nc.min(n - jc);
        for pc in (0..k).step_by(cfg.kc) {
            let kb = cfg.kc.min(k - pc);
            b_panel.repack(b.submatrix(pc, jc, kb, nb), cfg);
            for ic in (0..m).step_by(cfg.mc) {
                let mb = cfg.mc.min(m - ic);
                a_panel.repack(a.submatrix(ic, pc, mb, kb), alpha, cfg);

                for (jr_idx, jr) in (0..nb).step_by(nr).enumerate() {
                    let ntile = nr.min(nb - jr);
                    let b_slab = b_panel.slab(jr_idx);
                    for (ir_idx, ir) in (0..mb).step_by(mr).enumerate() {
                        let mtile = mr.min(mb - ir);
                        let a_slab = a_panel.slab(ir_idx);
                        let mut tile = c.submatrix_mut(ic + ir, jc + jr, mtile, ntile);
                        match kern {
                            Some(kern) if mtile == 2 && ntile == 2 => {
                                let ldc = tile.ld();
                                // SAFETY: slabs hold 2 * kb aligned slots and the tile is 2x2.
                                unsafe { kern(a_slab.as_ptr(), b_slab.as_ptr(), kb, tile.as_mut_ptr(), ldc) };
                            }
                            _ => {
                                edge_tile(kern, a_slab, b_slab, kb, mr, nr, &mut scratch, &mut tile);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Runs a partial (or non-2x2) tile through a zero-padded `mr x nr` scratch
/// copy of `C`.
#[allow(clippy::too_many_arguments)]
fn edge_tile(
    kern: Option<super::kernel::TileKernel>,
    a_slab: &[crate::simd::F64x4],
    b_slab: &[crate::simd::F64x4],
    kc: usize,
    mr: usize,
    nr: usize,
    scratch: &mut [Quaternion],
    tile: &mut MatMut<'_>,
) {
    scratch.fill(Quaternion::ZERO);
    for j in 0..tile.cols() {
        for i in 0..tile.rows() {
            scratch[j * mr + i] = tile.get(i, j);
        }
    }
    match kern {
        // SAFETY: scratch is a contiguous, 32-byte aligned 2x2 tile.
        Some(kern) => unsafe { kern(a_slab.as_ptr(), b_slab.as_ptr(), kc, scratch.as_mut_ptr(), mr) },
        None => kernel_plain(a_slab, b_slab, kc, mr, nr, scratch),
    }
    for j in 0..tile.cols() {
        for i in 0..tile.rows() {
            tile.set(i, j, scratch[j * mr + i]);
        }
    }
}
