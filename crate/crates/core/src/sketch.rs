//! HyperLogLog cardinality counters sized for per-node ball estimation.

use crate::error::{Error, Result};

/// Smallest accepted register exponent (16 registers).
pub const MIN_REGISTER_EXP: u8 = 4;
/// Largest accepted register exponent (65536 registers).
pub const MAX_REGISTER_EXP: u8 = 16;

/// Set-cardinality sketch over `u64` items: 2^b registers, each holding the
/// largest observed leading-zero rank for hashes routed to it.
///
/// Two counters combine only when they share `b` and `seed`; the union is the
/// registerwise maximum, so merging is idempotent, commutative, associative,
/// and insertion order never shows in the registers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HllCounter {
    b: u8,
    seed: u64,
    registers: Box<[u8]>,
}

impl HllCounter {
    pub fn new(b: u8, seed: u64) -> Result<HllCounter> {
        if !(MIN_REGISTER_EXP..=MAX_REGISTER_EXP).contains(&b) {
            return Err(Error::Contract(format!(
                "register exponent must lie in [{MIN_REGISTER_EXP}, {MAX_REGISTER_EXP}], got {b}"
            )));
        }
        Ok(HllCounter {
            b,
            seed,
            registers: vec![0u8; 1 << b].into_boxed_slice(),
        })
    }

    pub fn register_exp(&self) -> u8 {
        self.b
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn registers(&self) -> &[u8] {
        &self.registers
    }

    pub fn insert(&mut self, item: u64) {
        let h = hash64(item, self.seed);
        let idx = (h & ((1u64 << self.b) - 1)) as usize;
        let rest = h >> self.b;
        // rest occupies 64-b low bits; leading_zeros counts the b cleared
        // top bits too, so subtract them back out.
        let rank = if rest == 0 {
            64 - self.b as u32 + 1
        } else {
            rest.leading_zeros() - self.b as u32 + 1
        } as u8;
        if rank > self.registers[idx] {
            self.registers[idx] = rank;
        }
    }

    /// Registerwise maximum of a compatible counter into `self`.
    pub fn merge_from(&mut self, other: &HllCounter) -> Result<()> {
        if self.b != other.b || self.seed != other.seed {
            return Err(Error::Contract(format!(
                "cannot merge counters with different shape: (b={}, seed={}) vs (b={}, seed={})",
                self.b, other.b, self.seed, other.seed
            )));
        }
        self.merge_unchecked(other);
        Ok(())
    }

    /// Hot-path merge; compatibility is the caller's job.
    pub(crate) fn merge_unchecked(&mut self, other: &HllCounter) {
        debug_assert!(self.b == other.b && self.seed == other.seed);
        for (a, &b) in self.registers.iter_mut().zip(other.registers.iter()) {
            if b > *a {
                *a = b;
            }
        }
    }

    pub fn union(&self, other: &HllCounter) -> Result<HllCounter> {
        let mut out = self.clone();
        out.merge_from(other)?;
        Ok(out)
    }

    /// Bias-corrected estimate with the small-range (linear counting)
    /// correction; no large-range correction, which only matters within a
    /// hair of 2^64.
    pub fn estimate(&self) -> f64 {
        let m = self.registers.len() as f64;
        let mut denom = 0.0f64;
        let mut zeros = 0usize;
        for &r in self.registers.iter() {
            denom += inv_pow2(r);
            zeros += usize::from(r == 0);
        }
        let raw = alpha(self.registers.len()) * m * m / denom;
        if raw <= 2.5 * m && zeros > 0 {
            m * (m / zeros as f64).ln()
        } else {
            raw
        }
    }
}

fn alpha(m: usize) -> f64 {
    match m {
        16 => 0.673,
        32 => 0.697,
        64 => 0.709,
        _ => 0.7213 / (1.0 + 1.079 / m as f64),
    }
}

/// 2^-e computed by exponent arithmetic; exact for every register value.
fn inv_pow2(e: u8) -> f64 {
    f64::from_bits(f64::to_bits(1.0) - ((e as u64) << 52))
}

/// SplitMix64 finalizer over the seed-offset item. Pinned: estimates are only
/// reproducible across builds and platforms while these constants stand.
fn hash64(item: u64, seed: u64) -> u64 {
    let mut z = item ^ seed.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
