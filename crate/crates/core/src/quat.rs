//! Quaternion scalars and their 2x2 complex representation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A double-precision quaternion `w e0 + x e1 + y e2 + z e3`.
///
/// Stored as four contiguous `f64` in the order `[w; x; y; z]`. The 32-byte
/// alignment lets a quaternion be moved in and out of a 256-bit register with
/// a single aligned load.
#[derive(Clone, Copy, Default, PartialEq)]
#[repr(C, align(32))]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const E0: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const E1: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const E2: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const E3: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    #[inline]
    pub const fn from_array(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }

    #[inline]
    pub const fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// True when all four components compare equal to zero (either sign).
    #[inline]
    pub fn is_zero(self) -> bool {
        self.w == 0.0 && self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    #[inline]
    pub fn conj(self) -> Self {
        conj(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        norm(self)
    }

    #[inline]
    pub fn inverse(self) -> Result<Self> {
        inverse(self)
    }

    /// Multiplies every component by a real scalar.
    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}, {:?}, {:?})", self.w, self.x, self.y, self.z)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}

/// Hamilton product `pq`.
///
/// Each component is a four-term sum evaluated strictly left to right in the
/// order written below. The batch and vector kernels reproduce this order
/// exactly, which is what makes every GEMM path bit-compatible.
#[inline(always)]
pub fn hmul(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion {
        w: p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        x: p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        y: p.w * q.y + p.y * q.w - p.x * q.z + p.z * q.x,
        z: p.w * q.z + p.z * q.w + p.x * q.y - p.y * q.x,
    }
}

#[inline]
pub fn conj(q: Quaternion) -> Quaternion {
    Quaternion::new(q.w, -q.x, -q.y, -q.z)
}

#[inline]
pub fn norm(q: Quaternion) -> f64 {
    (q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z).sqrt()
}

/// Multiplicative inverse `conj(q) / |q|^2`.
pub fn inverse(q: Quaternion) -> Result<Quaternion> {
    let n2 = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
    if n2 == 0.0 {
        return Err(Error::ZeroInverse);
    }
    let c = conj(q);
    Ok(Quaternion::new(c.w / n2, c.x / n2, c.y / n2, c.z / n2))
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, o: Quaternion) -> Quaternion {
        hmul(self, o)
    }
}

/// A 2x2 complex matrix stored column-major: `[m11, m21, m12, m22]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Complex2x2(pub [Complex64; 4]);

impl Complex2x2 {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Complex2x2([one, zero, zero, one])
    }

    /// Entry at zero-based `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[col * 2 + row]
    }

    pub fn from_rows(r1: [Complex64; 2], r2: [Complex64; 2]) -> Self {
        Complex2x2([r1[0], r2[0], r1[1], r2[1]])
    }

    pub fn matmul(&self, o: &Complex2x2) -> Complex2x2 {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for col in 0..2 {
            for row in 0..2 {
                out[col * 2 + row] = self.get(row, 0) * o.get(0, col) + self.get(row, 1) * o.get(1, col);
            }
        }
        Complex2x2(out)
    }

    pub fn add(&self, o: &Complex2x2) -> Complex2x2 {
        let mut out = self.0;
        for (d, s) in out.iter_mut().zip(o.0.iter()) {
            *d += s;
        }
        Complex2x2(out)
    }
}

/// Complex representation `[[w + xi, y + zi], [-y + zi, w - xi]]`.
pub fn to_complex2x2(q: Quaternion) -> Complex2x2 {
    let u0 = Complex64::new(q.w, q.x);
    let u1 = Complex64::new(q.y, q.z);
    Complex2x2::from_rows([u0, u1], [-u1.conj(), u0.conj()])
}

/// Places `z` in the complex subalgebra spanned by `e0` and `e1`.
#[inline]
pub fn complex_to_quat(z: Complex64) -> Quaternion {
    Quaternion::new(z.re, z.im, 0.0, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const E0: Quaternion = Quaternion::E0;
    const E1: Quaternion = Quaternion::E1;
    const E2: Quaternion = Quaternion::E2;
    const E3: Quaternion = Quaternion::E3;

    fn ulps(a: f64, b: f64) -> u64 {
        if a == b {
            return 0;
        }
        let key = |v: f64| {
            let bits = v.to_bits() as i64;
            if bits < 0 {
                i64::MIN - bits
            } else {
                bits
            }
        };
        key(a).abs_diff(key(b))
    }

    #[test]
    fn basis_table() {
        assert_eq!(hmul(E1, E2), E3);
        assert_eq!(hmul(E2, E3), E1);
        assert_eq!(hmul(E3, E1), E2);
        assert_eq!(hmul(E2, E1), -E3);
        for e in [E1, E2, E3] {
            assert_eq!(hmul(e, e), -E0);
        }
        assert_eq!(hmul(hmul(E1, E2), E3), -E0);
    }

    #[test]
    fn known_product() {
        let p = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let q = Quaternion::new(5.0, 6.0, 7.0, 8.0);
        assert_eq!(hmul(p, q), Quaternion::new(-60.0, 12.0, 30.0, 24.0));
        assert_eq!(hmul(E0, q), q);
    }

    #[test]
    fn conj_norm_inverse() {
        assert_eq!(conj(E1), -E1);
        assert_eq!(inverse(E1).unwrap(), -E1);
        assert_eq!(norm(Quaternion::new(1.0, 1.0, 1.0, 1.0)), 2.0);
        assert_eq!(inverse(Quaternion::ZERO), Err(Error::ZeroInverse));

        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let id = hmul(q, inverse(q).unwrap());
        assert!(ulps(id.w, 1.0) <= 4, "{id:?}");
        for c in [id.x, id.y, id.z] {
            assert!(c.abs() <= 4.0 * f64::EPSILON, "{id:?}");
        }
    }

    #[test]
    fn complex_maps() {
        assert_eq!(to_complex2x2(E0), Complex2x2::identity());
        let i = Complex64::new(0.0, 1.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(to_complex2x2(E1), Complex2x2::from_rows([i, zero], [zero, -i]));

        assert_eq!(complex_to_quat(Complex64::new(0.0, 0.0)), Quaternion::ZERO);
        assert_eq!(complex_to_quat(i), E1);
        assert_eq!(complex_to_quat(Complex64::new(3.0, -2.0)), Quaternion::new(3.0, -2.0, 0.0, 0.0));
    }

    #[test]
    fn representation_block_structure() {
        let m = to_complex2x2(Quaternion::new(0.3, -1.5, 2.25, 7.0));
        assert_eq!(m.get(1, 1), m.get(0, 0).conj());
        assert_eq!(m.get(1, 0), -m.get(0, 1).conj());
    }

    #[test]
    fn representation_is_multiplicative() {
        let p = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let q = Quaternion::new(5.0, 6.0, 7.0, 8.0);
        let lhs = to_complex2x2(p).matmul(&to_complex2x2(q));
        let rhs = to_complex2x2(hmul(p, q));
        for (l, r) in lhs.0.iter().zip(rhs.0.iter()) {
            assert!(ulps(l.re, r.re) <= 2 && ulps(l.im, r.im) <= 2, "{l} vs {r}");
        }
    }

    #[test]
    fn layout_is_32_bytes() {
        assert_eq!(std::mem::size_of::<Quaternion>(), 32);
        assert_eq!(std::mem::align_of::<Quaternion>(), 32);
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let raw: [f64; 4] = unsafe { std::mem::transmute(q) };
        assert_eq!(raw, [1.0, 2.0, 3.0, 4.0]);
    }

    fn quat_in(lo: f64, hi: f64) -> impl Strategy<Value = Quaternion> {
        (lo..hi, lo..hi, lo..hi, lo..hi).prop_map(|(w, x, y, z)| Quaternion::new(w, x, y, z))
    }

    proptest! {
        #[test]
        fn anti_homomorphism(p in quat_in(-10.0, 10.0), q in quat_in(-10.0, 10.0)) {
            let lhs = conj(hmul(p, q));
            let rhs = hmul(conj(q), conj(p));
            // The scalar part uses the same products in the same order.
            prop_assert_eq!(lhs.w, rhs.w);
            let scale = norm(p) * norm(q);
            for (l, r) in lhs.to_array().iter().zip(rhs.to_array().iter()) {
                prop_assert!((l - r).abs() <= 4.0 * f64::EPSILON * scale);
            }
        }

        #[test]
        fn associativity(p in quat_in(-5.0, 5.0), q in quat_in(-5.0, 5.0), r in quat_in(-5.0, 5.0)) {
            let lhs = hmul(hmul(p, q), r);
            let rhs = hmul(p, hmul(q, r));
            let scale = norm(p) * norm(q) * norm(r);
            prop_assert!(norm(lhs - rhs) <= 1e-13 * scale);
        }

        #[test]
        fn inverse_round_trip(q in quat_in(-100.0, 100.0)) {
            prop_assume!(norm(q) > 1e-3);
            let id = hmul(q, inverse(q).unwrap());
            prop_assert!(norm(id - Quaternion::E0) <= 1e-14);
        }
    }
}
