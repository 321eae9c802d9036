//! Register-block microkernels.
//!
//! The 2x2 kernel keeps `C_r` component-major in four registers
//! (`R^c = [C11c, C12c, C21c, C22c]`), and per step loads the two packed `A`
//! slots and two packed `B` slots, finishes their transposes with eight
//! duplicating shuffles, and runs one batch Hamilton multiply-accumulate.

use crate::matrix::MatMut;
use crate::quat::{hmul, Quaternion};
use crate::simd::{atrans2, btrans2, hmul_acc, F64x4, LaneOps, Portable};

/// Which instruction set runs the kernels. All paths give identical bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelPath {
    Portable,
    /// 256-bit AVX on x86-64.
    Avx,
    /// AVX-512F on x86-64. The 2x2 kernel runs as on [`KernelPath::Avx`];
    /// blocked GEMM with the 2x2 register block switches to an 8x4 block.
    Avx512,
}

impl KernelPath {
    /// Fastest path supported by the running CPU.
    pub fn detect() -> Self {
        [KernelPath::Avx512, KernelPath::Avx].into_iter().find(|p| p.is_available()).unwrap_or(KernelPath::Portable)
    }

    /// Every path supported by the running CPU, slowest first.
    pub fn available() -> Vec<KernelPath> {
        [KernelPath::Portable, KernelPath::Avx, KernelPath::Avx512].into_iter().filter(|p| p.is_available()).collect()
    }

    pub fn is_available(self) -> bool {
        match self {
            KernelPath::Portable => true,
            #[cfg(target_arch = "x86_64")]
            KernelPath::Avx => std::arch::is_x86_feature_detected!("avx"),
            #[cfg(target_arch = "x86_64")]
            KernelPath::Avx512 => std::arch::is_x86_feature_detected!("avx512f"),
            #[cfg(not(target_arch = "x86_64"))]
            KernelPath::Avx | KernelPath::Avx512 => false,
        }
    }
}

pub(crate) type TileKernel = unsafe fn(*const F64x4, *const F64x4, usize, *mut Quaternion, usize);

const PREFETCH_SLOTS: usize = 32;

/// # Safety
/// `a` and `b` must point to `2 * kc` aligned slots; `c` must address a 2x2
/// tile with column stride `ldc`.
#[inline(always)]
unsafe fn kernel_2x2<L: LaneOps>(a: *const F64x4, b: *const F64x4, kc: usize, c: *mut Quaternion, ldc: usize) {
    let c11 = c as *mut F64x4;
    let c21 = c.add(1) as *mut F64x4;
    let c12 = c.add(ldc) as *mut F64x4;
    let c22 = c.add(ldc + 1) as *mut F64x4;

    let mut r = L::transpose4([L::load(c11), L::load(c12), L::load(c21), L::load(c22)]);
    for k in 0..kc {
        #[cfg(target_arch = "x86_64")]
        {
            use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
            _mm_prefetch::<_MM_HINT_T0>(a.wrapping_add(2 * k + PREFETCH_SLOTS) as *const i8);
            _mm_prefetch::<_MM_HINT_T0>(b.wrapping_add(2 * k + PREFETCH_SLOTS) as *const i8);
        }
        let t1 = L::load(a.add(2 * k));
        let t2 = L::load(a.add(2 * k + 1));
        let s1 = L::load(b.add(2 * k));
        let s2 = L::load(b.add(2 * k + 1));
        let av = atrans2::<L>(t1, t2);
        let bv = btrans2::<L>(s1, s2);
        r = hmul_acc::<L>(r, av, bv);
    }
    let [o11, o12, o21, o22] = L::transpose4(r);
    L::store(c11, o11);
    L::store(c12, o12);
    L::store(c21, o21);
    L::store(c22, o22);
}

pub(crate) unsafe fn kernel_2x2_portable(a: *const F64x4, b: *const F64x4, kc: usize, c: *mut Quaternion, ldc: usize) {
    kernel_2x2::<Portable>(a, b, kc, c, ldc)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx")]
pub(crate) unsafe fn kernel_2x2_avx(a: *const F64x4, b: *const F64x4, kc: usize, c: *mut Quaternion, ldc: usize) {
    kernel_2x2::<crate::simd::Avx>(a, b, kc, c, ldc)
}

pub(crate) fn tile_kernel(path: KernelPath) -> TileKernel {
    assert!(path.is_available(), "kernel path {path:?} is not supported on this CPU");
    match path {
        KernelPath::Portable => kernel_2x2_portable,
        #[cfg(target_arch = "x86_64")]
        KernelPath::Avx | KernelPath::Avx512 => kernel_2x2_avx,
        #[cfg(not(target_arch = "x86_64"))]
        KernelPath::Avx | KernelPath::Avx512 => unreachable!(),
    }
}

#[inline(always)]
unsafe fn stage2<L: LaneOps>(a: &[F64x4; 2], b: &[F64x4; 2]) -> [[F64x4; 4]; 2] {
    let av = atrans2::<L>(L::load(&a[0]), L::load(&a[1]));
    let bv = btrans2::<L>(L::load(&b[0]), L::load(&b[1]));
    let mut out = [[F64x4::ZERO; 4]; 2];
    for c in 0..4 {
        L::store(&mut out[0][c], av[c]);
        L::store(&mut out[1][c], bv[c]);
    }
    out
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx")]
unsafe fn stage2_avx(a: &[F64x4; 2], b: &[F64x4; 2]) -> [[F64x4; 4]; 2] {
    stage2::<crate::simd::Avx>(a, b)
}

/// The in-kernel half of the component transpose, exactly as the 2x2 kernel
/// runs it on one packed step: `a = [T1, T2]` from an `A` panel and
/// `b = [S1, S2]` from a `B` panel.
///
/// Returns `[A^w, A^x, A^y, A^z]` (`A^c = [a1c, a1c, a2c, a2c]`) and
/// `[B^w, B^x, B^y, B^z]` (`B^c = [b1c, b2c, b1c, b2c]`).
pub fn stage2_shuffles(path: KernelPath, a: [F64x4; 2], b: [F64x4; 2]) -> ([F64x4; 4], [F64x4; 4]) {
    assert!(path.is_available(), "kernel path {path:?} is not supported on this CPU");
    let [av, bv] = match path {
        KernelPath::Portable => unsafe { stage2::<Portable>(&a, &b) },
        #[cfg(target_arch = "x86_64")]
        KernelPath::Avx | KernelPath::Avx512 => unsafe { stage2_avx(&a, &b) },
        #[cfg(not(target_arch = "x86_64"))]
        KernelPath::Avx | KernelPath::Avx512 => unreachable!(),
    };
    (av, bv)
}

fn check_operands(a: &[F64x4], b: &[F64x4], kc: usize, c: &MatMut<'_>) {
    assert!(a.len() >= 2 * kc && b.len() >= 2 * kc, "panels shorter than kc = {kc} steps");
    assert!(c.rows() == 2 && c.cols() == 2, "C tile must be 2x2, got {}x{}", c.rows(), c.cols());
}

/// `C_r += sum_k a_k b_k^T` over `kc` stage-1 packed steps on the given path.
///
/// Panics if `path` is unavailable, if `C_r` is not 2x2, or if either panel
/// holds fewer than `kc` steps.
pub fn microkernel_with(path: KernelPath, a: &[F64x4], b: &[F64x4], kc: usize, c: &mut MatMut<'_>) {
    check_operands(a, b, kc, c);
    let kern = tile_kernel(path);
    let ldc = c.ld();
    unsafe { kern(a.as_ptr(), b.as_ptr(), kc, c.as_mut_ptr(), ldc) }
}

/// [`microkernel_with`] on the fastest available path.
pub fn microkernel(a: &[F64x4], b: &[F64x4], kc: usize, c: &mut MatMut<'_>) {
    microkernel_with(KernelPath::detect(), a, b, kc, c)
}

pub fn microkernel_portable(a: &[F64x4], b: &[F64x4], kc: usize, c: &mut MatMut<'_>) {
    microkernel_with(KernelPath::Portable, a, b, kc, c)
}

/// Kernel for register blocks other than 2x2, reading plain-layout panels.
/// Same per-element order as the 2x2 kernel: `c + hmul(a, b)` for ascending k.
pub(crate) fn kernel_plain(a: &[F64x4], b: &[F64x4], kc: usize, mr: usize, nr: usize, tile: &mut [Quaternion]) {
    debug_assert_eq!(tile.len(), mr * nr);
    for k in 0..kc {
        let a_k = &a[k * mr..(k + 1) * mr];
        let b_k = &b[k * nr..(k + 1) * nr];
        for (j, bj) in b_k.iter().enumerate() {
            let bj = Quaternion::from_array(bj.0);
            for (i, ai) in a_k.iter().enumerate() {
                let t = &mut tile[j * mr + i];
                *t = *t + hmul(Quaternion::from_array(ai.0), bj);
            }
        }
    }
}

#[cfg(any(test, feature = "op-count"))]
pub(crate) fn microkernel_counting(a: &[F64x4], b: &[F64x4], kc: usize, c: &mut MatMut<'_>) -> crate::simd::OpCounts {
    use crate::simd::{Counting, OpCounts};
    check_operands(a, b, kc, c);
    let ldc = c.ld();
    OpCounts::take();
    unsafe { kernel_2x2::<Counting>(a.as_ptr(), b.as_ptr(), kc, c.as_mut_ptr(), ldc) };
    OpCounts::take()
}

/// Runs the 2x2 kernel through an instrumented backend and returns the
/// number of lane loads, stores, shuffles and arithmetic operations issued.
#[cfg(feature = "op-count")]
pub fn count_microkernel_ops(a: &[F64x4], b: &[F64x4], kc: usize, c: &mut MatMut<'_>) -> crate::simd::OpCounts {
    microkernel_counting(a, b, kc, c)
}
