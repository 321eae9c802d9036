//! Structure-of-arrays batches of four quaternions.

use crate::quat::Quaternion;
use crate::simd::{hmul_acc, LaneOps, Portable};

/// Four quaternions stored component-major: lane `i` of `w`, `x`, `y`, `z`
/// together form quaternion `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QuadBatch {
    pub w: [f64; 4],
    pub x: [f64; 4],
    pub y: [f64; 4],
    pub z: [f64; 4],
}

impl QuadBatch {
    pub const ZERO: QuadBatch = QuadBatch { w: [0.0; 4], x: [0.0; 4], y: [0.0; 4], z: [0.0; 4] };

    pub fn splat(q: Quaternion) -> Self {
        Self::from_quaternions([q; 4])
    }

    /// AoS to SoA.
    pub fn from_quaternions(qs: [Quaternion; 4]) -> Self {
        let [w, x, y, z] = Portable::transpose4(qs.map(Quaternion::to_array));
        QuadBatch { w, x, y, z }
    }

    /// SoA to AoS.
    pub fn to_quaternions(&self) -> [Quaternion; 4] {
        Portable::transpose4([self.w, self.x, self.y, self.z]).map(Quaternion::from_array)
    }

    #[inline]
    pub fn lane(&self, i: usize) -> Quaternion {
        Quaternion::new(self.w[i], self.x[i], self.y[i], self.z[i])
    }

    fn components(&self) -> [[f64; 4]; 4] {
        [self.w, self.x, self.y, self.z]
    }
}

/// Lane-wise `acc + p * q` under the Hamilton product.
///
/// Lane `k` of the result equals `acc_k + hmul(p_k, q_k)` bit for bit.
pub fn batch_fmaq(acc: QuadBatch, p: QuadBatch, q: QuadBatch) -> QuadBatch {
    let [w, x, y, z] = hmul_acc::<Portable>(acc.components(), p.components(), q.components());
    QuadBatch { w, x, y, z }
}
