//! Four-lane `f64` register abstraction shared by the portable and AVX kernels.
//!
//! Every kernel is written once, generically over [`LaneOps`], so the two
//! backends execute the same operations in the same order and agree bit for
//! bit.

/// One 256-bit register's worth of doubles, aligned for `vmovapd`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[repr(C, align(32))]
pub struct F64x4(pub [f64; 4]);

impl F64x4 {
    pub const ZERO: F64x4 = F64x4([0.0; 4]);

    #[inline]
    pub fn splat(v: f64) -> Self {
        F64x4([v; 4])
    }
}

pub(crate) trait LaneOps {
    type V: Copy;

    /// # Safety
    /// `src` must be valid for reads of 32 bytes and 32-byte aligned.
    unsafe fn load(src: *const F64x4) -> Self::V;
    /// # Safety
    /// `dst` must be valid for writes of 32 bytes and 32-byte aligned.
    unsafe fn store(dst: *mut F64x4, v: Self::V);

    fn add(a: Self::V, b: Self::V) -> Self::V;
    fn sub(a: Self::V, b: Self::V) -> Self::V;
    fn mul(a: Self::V, b: Self::V) -> Self::V;

    /// `[v0, v0, v2, v2]`
    fn dup_even(v: Self::V) -> Self::V;
    /// `[v1, v1, v3, v3]`
    fn dup_odd(v: Self::V) -> Self::V;
    /// `[v0, v1, v0, v1]`
    fn dup_low_half(v: Self::V) -> Self::V;
    /// `[v2, v3, v2, v3]`
    fn dup_high_half(v: Self::V) -> Self::V;

    /// Full 4x4 transpose, rows in and rows out.
    fn transpose4(r: [Self::V; 4]) -> [Self::V; 4];
}

/// Accumulates four Hamilton products held component-major:
/// `acc[c] += (p * q)[c]` lane by lane.
///
/// For each output component: four lane multiplies, three add/sub in the same
/// order as [`crate::quat::hmul`], then one add into the accumulator. 32 lane
/// operations in total.
#[inline(always)]
pub(crate) fn hmul_acc<L: LaneOps>(acc: [L::V; 4], p: [L::V; 4], q: [L::V; 4]) -> [L::V; 4] {
    let [pw, px, py, pz] = p;
    let [qw, qx, qy, qz] = q;

    let w = L::sub(L::sub(L::sub(L::mul(pw, qw), L::mul(px, qx)), L::mul(py, qy)), L::mul(pz, qz));
    let x = L::sub(L::add(L::add(L::mul(pw, qx), L::mul(px, qw)), L::mul(py, qz)), L::mul(pz, qy));
    let y = L::add(L::sub(L::add(L::mul(pw, qy), L::mul(py, qw)), L::mul(px, qz)), L::mul(pz, qx));
    let z = L::sub(L::add(L::add(L::mul(pw, qz), L::mul(pz, qw)), L::mul(px, qy)), L::mul(py, qx));

    [L::add(acc[0], w), L::add(acc[1], x), L::add(acc[2], y), L::add(acc[3], z)]
}

/// Second transpose stage for an A column pair packed as
/// `T1 = [a1w, a1x, a2w, a2x]`, `T2 = [a1y, a1z, a2y, a2z]`.
///
/// Four in-lane duplicates yield `A^c = [a1c, a1c, a2c, a2c]`.
#[inline(always)]
pub(crate) fn atrans2<L: LaneOps>(t1: L::V, t2: L::V) -> [L::V; 4] {
    [L::dup_even(t1), L::dup_odd(t1), L::dup_even(t2), L::dup_odd(t2)]
}

/// Second transpose stage for a B row pair packed as
/// `S1 = [b1w, b2w, b1y, b2y]`, `S2 = [b1x, b2x, b1z, b2z]`.
///
/// Four half duplicates yield `B^c = [b1c, b2c, b1c, b2c]`.
#[inline(always)]
pub(crate) fn btrans2<L: LaneOps>(s1: L::V, s2: L::V) -> [L::V; 4] {
    [L::dup_low_half(s1), L::dup_low_half(s2), L::dup_high_half(s1), L::dup_high_half(s2)]
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Portable {}

impl LaneOps for Portable {
    type V = [f64; 4];

    #[inline(always)]
    unsafe fn load(src: *const F64x4) -> [f64; 4] {
        (*src).0
    }

    #[inline(always)]
    unsafe fn store(dst: *mut F64x4, v: [f64; 4]) {
        (*dst).0 = v;
    }

    #[inline(always)]
    fn add(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
    }

    #[inline(always)]
    fn sub(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
    }

    #[inline(always)]
    fn mul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
        [a[0] * b[0], a[1] * b[1], a[2] * b[2], a[3] * b[3]]
    }

    #[inline(always)]
    fn dup_even(v: [f64; 4]) -> [f64; 4] {
        [v[0], v[0], v[2], v[2]]
    }

    #[inline(always)]
    fn dup_odd(v: [f64; 4]) -> [f64; 4] {
        [v[1], v[1], v[3], v[3]]
    }

    #[inline(always)]
    fn dup_low_half(v: [f64; 4]) -> [f64; 4] {
        [v[0], v[1], v[0], v[1]]
    }

    #[inline(always)]
    fn dup_high_half(v: [f64; 4]) -> [f64; 4] {
        [v[2], v[3], v[2], v[3]]
    }

    #[inline(always)]
    fn transpose4(r: [[f64; 4]; 4]) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in r.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out[j][i] = *v;
            }
        }
        out
    }
}

#[cfg(target_arch = "x86_64")]
pub(crate) use avx::Avx;

#[cfg(target_arch = "x86_64")]
mod avx {
    use super::{F64x4, LaneOps};
    use std::arch::x86_64::*;

    /// AVX backend. Only instantiated from functions compiled with
    /// `#[target_feature(enable = "avx")]` after runtime detection.
    #[derive(Clone, Copy, Debug)]
    pub(crate) enum Avx {}

    impl LaneOps for Avx {
        type V = __m256d;

        #[inline(always)]
        unsafe fn load(src: *const F64x4) -> __m256d {
            _mm256_load_pd(src as *const f64)
        }

        #[inline(always)]
        unsafe fn store(dst: *mut F64x4, v: __m256d) {
            _mm256_store_pd(dst as *mut f64, v)
        }

        #[inline(always)]
        fn add(a: __m256d, b: __m256d) -> __m256d {
            unsafe { _mm256_add_pd(a, b) }
        }

        #[inline(always)]
        fn sub(a: __m256d, b: __m256d) -> __m256d {
            unsafe { _mm256_sub_pd(a, b) }
        }

        #[inline(always)]
        fn mul(a: __m256d, b: __m256d) -> __m256d {
            unsafe { _mm256_mul_pd(a, b) }
        }

        #[inline(always)]
        fn dup_even(v: __m256d) -> __m256d {
            unsafe { _mm256_movedup_pd(v) }
        }

        #[inline(always)]
        fn dup_odd(v: __m256d) -> __m256d {
            unsafe { _mm256_permute_pd::<0b1111>(v) }
        }

        #[inline(always)]
        fn dup_low_half(v: __m256d) -> __m256d {
            unsafe { _mm256_permute2f128_pd::<0x00>(v, v) }
        }

        #[inline(always)]
        fn dup_high_half(v: __m256d) -> __m256d {
            unsafe { _mm256_permute2f128_pd::<0x11>(v, v) }
        }

        #[inline(always)]
        fn transpose4(r: [__m256d; 4]) -> [__m256d; 4] {
            unsafe {
                let t0 = _mm256_unpacklo_pd(r[0], r[1]);
                let t1 = _mm256_unpackhi_pd(r[0], r[1]);
                let t2 = _mm256_unpacklo_pd(r[2], r[3]);
                let t3 = _mm256_unpackhi_pd(r[2], r[3]);
                [
                    _mm256_permute2f128_pd::<0x20>(t0, t2),
                    _mm256_permute2f128_pd::<0x20>(t1, t3),
                    _mm256_permute2f128_pd::<0x31>(t0, t2),
                    _mm256_permute2f128_pd::<0x31>(t1, t3),
                ]
            }
        }
    }
}

#[cfg(any(test, feature = "op-count"))]
pub(crate) use counting::Counting;
#[cfg(any(test, feature = "op-count"))]
pub use counting::OpCounts;

#[cfg(any(test, feature = "op-count"))]
mod counting {
    use super::{F64x4, LaneOps, Portable};
    use std::cell::Cell;

    /// Per-category tallies of lane-register operations.
    #[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
    pub struct OpCounts {
        pub loads: u64,
        pub stores: u64,
        pub shuffles: u64,
        pub arith: u64,
    }

    thread_local! {
        static COUNTS: Cell<OpCounts> = const { Cell::new(OpCounts { loads: 0, stores: 0, shuffles: 0, arith: 0 }) };
    }

    fn bump(f: impl FnOnce(&mut OpCounts)) {
        COUNTS.with(|c| {
            let mut v = c.get();
            f(&mut v);
            c.set(v);
        });
    }

    impl OpCounts {
        pub fn take() -> OpCounts {
            COUNTS.with(|c| c.replace(OpCounts::default()))
        }
    }

    /// Portable arithmetic that also counts every lane operation issued.
    #[derive(Clone, Copy, Debug)]
    pub(crate) enum Counting {}

    impl LaneOps for Counting {
        type V = [f64; 4];

        unsafe fn load(src: *const F64x4) -> [f64; 4] {
            bump(|c| c.loads += 1);
            Portable::load(src)
        }
        unsafe fn store(dst: *mut F64x4, v: [f64; 4]) {
            bump(|c| c.stores += 1);
            Portable::store(dst, v)
        }
        fn add(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
            bump(|c| c.arith += 1);
            Portable::add(a, b)
        }
        fn sub(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
            bump(|c| c.arith += 1);
            Portable::sub(a, b)
        }
        fn mul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
            bump(|c| c.arith += 1);
            Portable::mul(a, b)
        }
        fn dup_even(v: [f64; 4]) -> [f64; 4] {
            bump(|c| c.shuffles += 1);
            Portable::dup_even(v)
        }
        fn dup_odd(v: [f64; 4]) -> [f64; 4] {
            bump(|c| c.shuffles += 1);
            Portable::dup_odd(v)
        }
        fn dup_low_half(v: [f64; 4]) -> [f64; 4] {
            bump(|c| c.shuffles += 1);
            Portable::dup_low_half(v)
        }
        fn dup_high_half(v: [f64; 4]) -> [f64; 4] {
            bump(|c| c.shuffles += 1);
            Portable::dup_high_half(v)
        }
        // 4 unpacks + 4 cross-half permutes, as on AVX.
        fn transpose4(r: [[f64; 4]; 4]) -> [[f64; 4]; 4] {
            bump(|c| c.shuffles += 8);
            Portable::transpose4(r)
        }
    }
}
