use crate::error::{Error, Result};

/// Cache (`mc`, `nc`, `kc`) and register (`mr`, `nr`) block sizes.
///
/// An `mc x kc` block of `A` is packed per inner iteration and a `kc x nc`
/// block of `B` per middle iteration; the microkernel updates `mr x nr`
/// tiles of `C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockingConfig {
    pub mc: usize,
    pub nc: usize,
    pub kc: usize,
    pub mr: usize,
    pub nr: usize,
}

impl Default for BlockingConfig {
    // 512 KB A panel in L2, 16 KB B slab in L1.
    fn default() -> Self {
        BlockingConfig { mc: 64, nc: 512, kc: 256, mr: 2, nr: 2 }
    }
}

impl BlockingConfig {
    /// Cache blocks with the 2x2 register block of the vector kernel.
    pub const fn new(mc: usize, nc: usize, kc: usize) -> Self {
        BlockingConfig { mc, nc, kc, mr: 2, nr: 2 }
    }

    pub fn validate(&self) -> Result<()> {
        let BlockingConfig { mc, nc, kc, mr, nr } = *self;
        if [mc, nc, kc, mr, nr].contains(&0) {
            return Err(Error::InvalidConfig(format!("all block sizes must be positive: {self:?}")));
        }
        if mc % mr != 0 {
            return Err(Error::InvalidConfig(format!("mc = {mc} is not a multiple of mr = {mr}")));
        }
        if nc % nr != 0 {
            return Err(Error::InvalidConfig(format!("nc = {nc} is not a multiple of nr = {nr}")));
        }
        // Panel buffers are mc*kc and kc*nc 32-byte slots.
        let fits = |x: usize| x.checked_mul(kc).and_then(|v| v.checked_mul(32)).is_some_and(|v| v <= isize::MAX as usize);
        if !fits(mc) || !fits(nc) {
            return Err(Error::InvalidConfig(format!("panel buffers for {self:?} exceed addressable memory")));
        }
        Ok(())
    }

    /// Whether panels use the stage-1 transposed layout read by the 2x2
    /// vector kernel.
    #[inline]
    pub fn is_vector_blocked(&self) -> bool {
        self.mr == 2 && self.nr == 2
    }
}
