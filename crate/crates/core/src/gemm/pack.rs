//! Packing of `A` and `B` blocks into contiguous microkernel-ordered panels.
//!
//! With the 2x2 register block, packing also performs the first, space
//! preserving stage of the component transpose (the cross-half permutes for
//! `A`, the in-half unpacks for `B`), so the kernel only has cheap
//! duplicating shuffles left to do. For any other register block the panel
//! stores plain quaternions.

use super::BlockingConfig;
use crate::matrix::MatRef;
use crate::quat::{hmul, Quaternion};
use crate::simd::F64x4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PanelLayout {
    /// Stage-1 transposed pairs: `[a1w, a1x, a2w, a2x], [a1y, a1z, a2y, a2z]`
    /// for `A`; `[b1w, b2w, b1y, b2y], [b1x, b2x, b1z, b2z]` for `B`.
    Stage1,
    /// One quaternion per slot.
    Plain,
}

impl PanelLayout {
    fn for_config(cfg: &BlockingConfig) -> Self {
        if cfg.is_vector_blocked() {
            PanelLayout::Stage1
        } else {
            PanelLayout::Plain
        }
    }
}

/// Columns of `A` packed per pass.
const PACK_RUN: usize = 8;

#[inline(always)]
fn slot(q: Quaternion) -> F64x4 {
    F64x4(q.to_array())
}

/// Packed `alpha * A` block: `slabs` row panels of height `mr`, each holding
/// `kc` steps of `mr` quaternion-sized slots.
#[derive(Clone, Debug)]
pub struct PackedPanelA {
    buf: Vec<F64x4>,
    mr: usize,
    kc: usize,
    slabs: usize,
    layout: PanelLayout,
}

impl PackedPanelA {
    pub(crate) fn with_capacity(cfg: &BlockingConfig) -> Self {
        PackedPanelA {
            buf: Vec::with_capacity(cfg.mc * cfg.kc),
            mr: cfg.mr,
            kc: 0,
            slabs: 0,
            layout: PanelLayout::for_config(cfg),
        }
    }

    pub(crate) fn repack(&mut self, a: MatRef<'_>, alpha: Quaternion, cfg: &BlockingConfig) {
        assert!(a.rows() <= cfg.mc && a.cols() <= cfg.kc, "A block {}x{} exceeds mc x kc", a.rows(), a.cols());
        let (mr, kc) = (cfg.mr, a.cols());
        let slabs = a.rows().div_ceil(mr);
        self.mr = mr;
        self.kc = kc;
        self.slabs = slabs;
        self.layout = PanelLayout::for_config(cfg);
        self.buf.clear();
        self.buf.resize(slabs * mr * kc, F64x4::ZERO);

        // Walk A down short runs of columns so reads stay contiguous and each
        // slab receives a contiguous burst of writes. Padding rows stay zero
        // from the resize.
        let buf = &mut self.buf;
        for k0 in (0..kc).step_by(PACK_RUN) {
            let run = PACK_RUN.min(kc - k0);
            for s in 0..slabs {
                for k in k0..k0 + run {
                    let col = &a.col(k)[s * mr..a.rows().min((s + 1) * mr)];
                    match self.layout {
                        PanelLayout::Stage1 => {
                            let a1 = hmul(alpha, col[0]);
                            let a2 = col.get(1).map_or(Quaternion::ZERO, |&q| hmul(alpha, q));
                            let at = s * 2 * kc + 2 * k;
                            buf[at] = F64x4([a1.w, a1.x, a2.w, a2.x]);
                            buf[at + 1] = F64x4([a1.y, a1.z, a2.y, a2.z]);
                        }
                        PanelLayout::Plain => {
                            for (i, &q) in col.iter().enumerate() {
                                buf[s * mr * kc + k * mr + i] = slot(hmul(alpha, q));
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn as_slice(&self) -> &[F64x4] {
        &self.buf
    }

    /// Row panel `i`, the `A` operand of one microkernel call.
    #[inline]
    pub fn slab(&self, i: usize) -> &[F64x4] {
        let len = self.mr * self.kc;
        &self.buf[i * len..(i + 1) * len]
    }

    pub fn slabs(&self) -> usize {
        self.slabs
    }

    pub fn kc(&self) -> usize {
        self.kc
    }

    pub fn mr(&self) -> usize {
        self.mr
    }

    pub fn layout(&self) -> PanelLayout {
        self.layout
    }
}

/// Packed `B` block: `slabs` column panels of width `nr`.
#[derive(Clone, Debug)]
pub struct PackedPanelB {
    buf: Vec<F64x4>,
    nr: usize,
    kc: usize,
    slabs: usize,
    layout: PanelLayout,
}

impl PackedPanelB {
    pub(crate) fn with_capacity(cfg: &BlockingConfig) -> Self {
        PackedPanelB {
            buf: Vec::with_capacity(cfg.nc * cfg.kc),
            nr: cfg.nr,
            kc: 0,
            slabs: 0,
            layout: PanelLayout::for_config(cfg),
        }
    }

    pub(crate) fn repack(&mut self, b: MatRef<'_>, cfg: &BlockingConfig) {
        assert!(b.rows() <= cfg.kc && b.cols() <= cfg.nc, "B block {}x{} exceeds kc x nc", b.rows(), b.cols());
        let (nr, kc) = (cfg.nr, b.rows());
        let slabs = b.cols().div_ceil(nr);
        self.nr = nr;
        self.kc = kc;
        self.slabs = slabs;
        self.layout = PanelLayout::for_config(cfg);
        self.buf.clear();
        self.buf.resize(slabs * nr * kc, F64x4::ZERO);

        let n = b.cols();
        let elem = |k: usize, j: usize| if j < n { b.get(k, j) } else { Quaternion::ZERO };
        match self.layout {
            PanelLayout::Stage1 => {
                for s in 0..slabs {
                    let out = &mut self.buf[s * 2 * kc..(s + 1) * 2 * kc];
                    for k in 0..kc {
                        let b1 = elem(k, 2 * s);
                        let b2 = elem(k, 2 * s + 1);
                        out[2 * k] = F64x4([b1.w, b2.w, b1.y, b2.y]);
                        out[2 * k + 1] = F64x4([b1.x, b2.x, b1.z, b2.z]);
                    }
                }
            }
            PanelLayout::Plain => {
                for s in 0..slabs {
                    let out = &mut self.buf[s * nr * kc..(s + 1) * nr * kc];
                    for k in 0..kc {
                        for j in 0..nr {
                            out[k * nr + j] = slot(elem(k, s * nr + j));
                        }
                    }
                }
            }
        }
    }

    pub fn as_slice(&self) -> &[F64x4] {
        &self.buf
    }

    /// Column panel `j`, the `B` operand of one microkernel call.
    #[inline]
    pub fn slab(&self, j: usize) -> &[F64x4] {
        let len = self.nr * self.kc;
        &self.buf[j * len..(j + 1) * len]
    }

    pub fn slabs(&self) -> usize {
        self.slabs
    }

    pub fn kc(&self) -> usize {
        self.kc
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    pub fn layout(&self) -> PanelLayout {
        self.layout
    }
}

/// Packs `alpha * A_block` (each element scaled from the left). Rows past the
/// block edge, up to a multiple of `mr`, are zero.
///
/// Panics if the block is larger than `mc x kc`.
pub fn pack_a(a: MatRef<'_>, alpha: Quaternion, cfg: &BlockingConfig) -> PackedPanelA {
    let mut p = PackedPanelA::with_capacity(cfg);
    p.repack(a, alpha, cfg);
    p
}

/// Packs `B_block`. Columns past the block edge, up to a multiple of `nr`,
/// are zero.
///
/// Panics if the block is larger than `kc x nc`.
pub fn pack_b(b: MatRef<'_>, cfg: &BlockingConfig) -> PackedPanelB {
    let mut p = PackedPanelB::with_capacity(cfg);
    p.repack(b, cfg);
    p
}
