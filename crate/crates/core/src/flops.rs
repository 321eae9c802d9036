//! Real floating-point operation counts, one fused `a <- a + b*c` counting as
//! a single FLOP.

/// Arithmetic ring an operation runs over. `Complex` means the equivalent
/// computation on the 2x2 complex embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Quaternion,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    /// Matrix (or, for `n = 1`, scalar) addition.
    Add,
    /// Matrix (or scalar) multiply-accumulate.
    Multiply,
}

/// Per-element FLOP costs for one ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlopModel {
    pub ring: Ring,
    pub add: u64,
    pub mac: u64,
}

impl FlopModel {
    pub const fn new(ring: Ring) -> Self {
        match ring {
            Ring::Quaternion => FlopModel { ring, add: 4, mac: 16 },
            Ring::Complex => FlopModel { ring, add: 8, mac: 32 },
        }
    }

    /// FLOPs for an `n x n` quaternion operation, or its `2n x 2n` complex
    /// equivalent.
    pub fn count(&self, op: OpKind, n: u64) -> u64 {
        match op {
            OpKind::Add => self.add * n * n,
            OpKind::Multiply => self.mac * n * n * n,
        }
    }
}

pub fn flop_count(ring: Ring, op: OpKind, n: u64) -> u64 {
    FlopModel::new(ring).count(op, n)
}

/// GFLOP/s for an `n x n` quaternion GEMM (`16 n^3` FLOPs) taking `seconds`.
pub fn hgemm_gflops(n: u64, seconds: f64) -> f64 {
    flop_count(Ring::Quaternion, OpKind::Multiply, n) as f64 / seconds / 1e9
}

/// GFLOP/s for the complex GEMM on the `2n x 2n` embedding (`32 n^3` FLOPs).
pub fn zgemm_gflops(n: u64, seconds: f64) -> f64 {
    flop_count(Ring::Complex, OpKind::Multiply, n) as f64 / seconds / 1e9
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_costs() {
        assert_eq!(flop_count(Ring::Quaternion, OpKind::Multiply, 1), 16);
        assert_eq!(flop_count(Ring::Complex, OpKind::Multiply, 1), 32);
        assert_eq!(flop_count(Ring::Quaternion, OpKind::Add, 1), 4);
        assert_eq!(flop_count(Ring::Complex, OpKind::Add, 1), 8);
    }

    #[test]
    fn matrix_costs() {
        assert_eq!(flop_count(Ring::Quaternion, OpKind::Multiply, 10), 16_000);
        assert_eq!(flop_count(Ring::Complex, OpKind::Add, 10), 800);
        assert_eq!(flop_count(Ring::Quaternion, OpKind::Multiply, 0), 0);
    }

    #[test]
    fn complex_costs_twice_quaternion() {
        for n in [1, 2, 3, 10, 64, 1000] {
            for op in [OpKind::Add, OpKind::Multiply] {
                assert_eq!(flop_count(Ring::Complex, op, n), 2 * flop_count(Ring::Quaternion, op, n));
            }
        }
    }
}
