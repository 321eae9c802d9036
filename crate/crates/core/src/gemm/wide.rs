//! AVX-512 blocked driver with an 8x4 register block.
//!
//! `alpha * A` is packed structure-of-arrays, eight rows per slab: per step
//! `[w0..w7], [x0..x7], [y0..y7], [z0..z7]`, one zmm register per component.
//! `B` is packed as plain quaternions, four columns per slab, and each
//! component is broadcast. Every lane then runs the scalar
//! `c + hmul(a, b)` sequence on its own row, so results match the reference
//! bit for bit with no shuffles in the inner loop.

#![cfg(target_arch = "x86_64")]

use std::arch::x86_64::*;

use super::BlockingConfig;
use crate::matrix::{MatMut, MatRef};
use crate::quat::{hmul, Quaternion};

pub(crate) const MR: usize = 8;
pub(crate) const NR: usize = 4;

/// One cache line: a zmm register's worth of doubles.
#[derive(Clone, Copy, Default)]
#[repr(C, align(64))]
struct Line([f64; 8]);

const ZERO_LINE: Line = Line([0.0; 8]);

/// `alpha * A` block as `slabs` structure-of-arrays row panels of 8.
struct WidePanelA {
    buf: Vec<Line>,
    kc: usize,
}

impl WidePanelA {
    fn repack(&mut self, a: MatRef<'_>, alpha: Quaternion) {
        let (m, kc) = (a.rows(), a.cols());
        let slabs = m.div_ceil(MR);
        self.kc = kc;
        self.buf.clear();
        self.buf.resize(slabs * 4 * kc, ZERO_LINE);
        for k0 in (0..kc).step_by(8) {
            for s in 0..slabs {
                let rows = s * MR..m.min((s + 1) * MR);
                for k in k0..kc.min(k0 + 8) {
                    let at = (s * kc + k) * 4;
                    for (i, &q) in a.col(k)[rows.clone()].iter().enumerate() {
                        let p = hmul(alpha, q);
                        self.buf[at].0[i] = p.w;
                        self.buf[at + 1].0[i] = p.x;
                        self.buf[at + 2].0[i] = p.y;
                        self.buf[at + 3].0[i] = p.z;
                    }
                }
            }
        }
    }

    fn slab(&self, i: usize) -> *const Line {
        self.buf[i * 4 * self.kc..].as_ptr()
    }
}

/// `B` block as `slabs` column panels of 4 plain quaternions per step.
struct WidePanelB {
    buf: Vec<Line>,
    kc: usize,
}

impl WidePanelB {
    fn repack(&mut self, b: MatRef<'_>) {
        let (kc, n) = (b.rows(), b.cols());
        let slabs = n.div_ceil(NR);
        self.kc = kc;
        self.buf.clear();
        self.buf.resize(slabs * 2 * kc, ZERO_LINE);
        for j in 0..n {
            let (s, jj) = (j / NR, j % NR);
            for (k, q) in b.col(j).iter().enumerate() {
                let line = &mut self.buf[(s * kc + k) * 2 + jj / 2];
                line.0[(jj % 2) * 4..(jj % 2) * 4 + 4].copy_from_slice(&q.to_array());
            }
        }
    }

    fn slab(&self, j: usize) -> *const Line {
        self.buf[j * 2 * self.kc..].as_ptr()
    }
}

/// `C_r += sum_k a_k b_k^T` on one 8x4 tile.
///
/// # Safety
/// Requires AVX-512F. `a` must hold `4 * kc` lines and `b` `2 * kc`; `c`
/// must address an 8x4 tile with column stride `ldc`.
#[target_feature(enable = "avx512f")]
unsafe fn kernel_8x4(a: *const Line, b: *const Line, kc: usize, c: *mut Quaternion, ldc: usize) {
    let mut soa = [[ZERO_LINE; 4]; NR];
    for (j, col) in soa.iter_mut().enumerate() {
        for i in 0..MR {
            let q = *c.add(j * ldc + i);
            col[0].0[i] = q.w;
            col[1].0[i] = q.x;
            col[2].0[i] = q.y;
            col[3].0[i] = q.z;
        }
    }
    let mut acc = [[_mm512_setzero_pd(); 4]; NR];
    for j in 0..NR {
        for comp in 0..4 {
            acc[j][comp] = _mm512_load_pd(soa[j][comp].0.as_ptr());
        }
    }

    let (mul, add, sub) = (_mm512_mul_pd, _mm512_add_pd, _mm512_sub_pd);
    for k in 0..kc {
        let ak = a.add(4 * k);
        let pw = _mm512_load_pd((*ak).0.as_ptr());
        let px = _mm512_load_pd((*ak.add(1)).0.as_ptr());
        let py = _mm512_load_pd((*ak.add(2)).0.as_ptr());
        let pz = _mm512_load_pd((*ak.add(3)).0.as_ptr());
        let bk = b.add(2 * k) as *const f64;
        for (j, r) in acc.iter_mut().enumerate() {
            let qw = _mm512_set1_pd(*bk.add(4 * j));
            let qx = _mm512_set1_pd(*bk.add(4 * j + 1));
            let qy = _mm512_set1_pd(*bk.add(4 * j + 2));
            let qz = _mm512_set1_pd(*bk.add(4 * j + 3));
            let w = sub(sub(sub(mul(pw, qw), mul(px, qx)), mul(py, qy)), mul(pz, qz));
            let x = sub(add(add(mul(pw, qx), mul(px, qw)), mul(py, qz)), mul(pz, qy));
            let y = add(sub(add(mul(pw, qy), mul(py, qw)), mul(px, qz)), mul(pz, qx));
            let z = sub(add(add(mul(pw, qz), mul(pz, qw)), mul(px, qy)), mul(py, qx));
            r[0] = add(r[0], w);
            r[1] = add(r[1], x);
            r[2] = add(r[2], y);
            r[3] = add(r[3], z);
        }
    }

    for j in 0..NR {
        for comp in 0..4 {
            _mm512_store_pd(soa[j][comp].0.as_mut_ptr(), acc[j][comp]);
        }
    }
    for (j, col) in soa.iter().enumerate() {
        for i in 0..MR {
            *c.add(j * ldc + i) = Quaternion::new(col[0].0[i], col[1].0[i], col[2].0[i], col[3].0[i]);
        }
    }
}

/// `C += (alpha A) B` with `C` already scaled by `beta`.
///
/// # Safety
/// Requires AVX-512F. Dimensions must already be checked.
pub(crate) unsafe fn gemm_wide(alpha: Quaternion, a: MatRef<'_>, b: MatRef<'_>, c: &mut MatMut<'_>, cfg: &BlockingConfig) {
    let (m, n, k) = (c.rows(), c.cols(), a.cols());
    let mut ap = WidePanelA { buf: Vec::with_capacity(cfg.mc.div_ceil(MR) * 4 * cfg.kc), kc: 0 };
    let mut bp = WidePanelB { buf: Vec::with_capacity(cfg.nc.div_ceil(NR) * 2 * cfg.kc), kc: 0 };
    let mut scratch = [Quaternion::ZERO; MR * NR];

    for jc in (0..n).step_by(cfg.nc) {
        let nb = cfg.nc.min(n - jc);
        for pc in (0..k).step_by(cfg.kc) {
            let kb = cfg.kc.min(k - pc);
            bp.repack(b.submatrix(pc, jc, kb, nb));
            for ic in (0..m).step_by(cfg.mc) {
                let mb = cfg.mc.min(m - ic);
                ap.repack(a.submatrix(ic, pc, mb, kb), alpha);
                for (js, jr) in (0..nb).step_by(NR).enumerate() {
                    let ntile = NR.min(nb - jr);
                    for (is, ir) in (0..mb).step_by(MR).enumerate() {
                        let mtile = MR.min(mb - ir);
                        let mut tile = c.submatrix_mut(ic + ir, jc + jr, mtile, ntile);
                        if mtile == MR && ntile == NR {
                            let ldc = tile.ld();
                            kernel_8x4(ap.slab(is), bp.slab(js), kb, tile.as_mut_ptr(), ldc);
                        } else {
                            // Zero-padded panel lanes land in the unused part of the scratch tile.
                            scratch.fill(Quaternion::ZERO);
                            for j in 0..ntile {
                                for i in 0..mtile {
                                    scratch[j * MR + i] = tile.get(i, j);
                                }
                            }
                            kernel_8x4(ap.slab(is), bp.slab(js), kb, scratch.as_mut_ptr(), MR);
                            for j in 0..ntile {
                                for i in 0..mtile {
                                    tile.set(i, j, scratch[j * MR + i]);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
