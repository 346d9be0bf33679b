use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::KernelError;

/// Largest dimension a label may carry.
pub const MAX_DIM: u32 = 62;

/// Largest dimension for which dense (`2^N`-sized) representations are allowed.
pub const MAX_DENSE_DIM: u32 = 30;

/// An `N`-bit binary string: one hypercube vertex, one trait.
///
/// Bit `i` of `bits` is the `i`-th symbol of the string; only the low `dim` bits are used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexLabel {
    bits: u64,
    dim: u32,
}

impl VertexLabel {
    pub fn new(bits: u64, dim: u32) -> Result<Self, KernelError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(KernelError::InvalidDimension(dim));
        }
        if bits >> dim != 0 {
            return Err(KernelError::LabelOutOfRange { bits, dim });
        }
        Ok(Self { bits, dim })
    }

    pub fn zero(dim: u32) -> Result<Self, KernelError> {
        Self::new(0, dim)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn dim(self) -> u32 {
        self.dim
    }

    /// Number of ones in the string.
    #[inline]
    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    /// Label with bit `i` flipped.
    pub fn flip(self, i: u32) -> Self {
        debug_assert!(i < self.dim);
        Self { bits: self.bits ^ (1 << i), dim: self.dim }
    }

    /// Bitwise complement within the dimension.
    pub fn complement(self) -> Self {
        Self { bits: !self.bits & mask(self.dim), dim: self.dim }
    }
}

#[inline]
pub(crate) fn mask(dim: u32) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

/// Number of positions at which `a` and `b` differ.
pub fn hamming(a: VertexLabel, b: VertexLabel) -> Result<u32, KernelError> {
    if a.dim != b.dim {
        return Err(KernelError::DimensionMismatch { left: a.dim, right: b.dim });
    }
    Ok((a.bits ^ b.bits).count_ones())
}

/// `N - hamming(v, target)`: how well `v` matches `target`.
pub fn affinity(v: VertexLabel, target: VertexLabel) -> Result<u32, KernelError> {
    Ok(v.dim - hamming(v, target)?)
}

/// Renders the string most-significant symbol first, e.g. `0101`.
impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.dim).rev() {
            f.write_str(if self.bits >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for VertexLabel {
    type Err = KernelError;

    /// Parses a string of `0`/`1` symbols; the dimension is the string length.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut bits = 0u64;
        for ch in s.chars() {
            bits = (bits << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(KernelError::InvalidParameter(format!("not a binary string: {s:?}"))),
                };
            if s.len() > MAX_DIM as usize {
                return Err(KernelError::InvalidDimension(s.len() as u32));
            }
        }
        Self::new(bits, s.len() as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(s: &str) -> VertexLabel {
        s.parse().unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(v("000"), v("101")).unwrap(), 2);
        assert_eq!(hamming(v("0110"), v("0110")).unwrap(), 0);
        assert_eq!(hamming(v("0000000"), v("1111111")).unwrap(), 7);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            hamming(v("000"), v("0000")),
            Err(KernelError::DimensionMismatch { left: 3, right: 4 })
        ));
        assert!(affinity(v("01"), v("011")).is_err());
    }

    #[test]
    fn affinity_examples() {
        assert_eq!(affinity(v("1010101"), v("1010101")).unwrap(), 7);
        assert_eq!(affinity(v("0000000"), v("1000000")).unwrap(), 6);
    }

    #[test]
    fn affinity_counts_over_h7_are_binomial() {
        let target = v("0110100");
        let mut counts = [0u64; 8];
        for bits in 0..128u64 {
            let a = affinity(VertexLabel::new(bits, 7).unwrap(), target).unwrap();
            counts[a as usize] += 1;
        }
        // C(7, 7 - a)
        assert_eq!(counts, [1, 7, 21, 35, 35, 21, 7, 1]);
    }

    #[test]
    fn construction_guards() {
        assert!(VertexLabel::new(8, 3).is_err());
        assert!(VertexLabel::new(0, 0).is_err());
        assert!(VertexLabel::new(0, 63).is_err());
        assert!(VertexLabel::new(u64::MAX >> 2, 62).is_ok());
        assert!("01x".parse::<VertexLabel>().is_err());
        assert_eq!(v("100").bits(), 4);
        assert_eq!(v("100").to_string(), "100");
        assert_eq!(v("100").complement(), v("011"));
    }

    proptest! {
        #[test]
        fn hamming_is_a_bounded_symmetric_metric(dim in 1u32..=62, a: u64, b: u64, c: u64) {
            let m = mask(dim);
            let (a, b, c) = (
                VertexLabel::new(a & m, dim).unwrap(),
                VertexLabel::new(b & m, dim).unwrap(),
                VertexLabel::new(c & m, dim).unwrap(),
            );
            prop_assert_eq!(hamming(a, a).unwrap(), 0);
            prop_assert_eq!(hamming(a, b).unwrap(), hamming(b, a).unwrap());
            prop_assert!(hamming(a, b).unwrap() <= dim);
            prop_assert!(hamming(a, c).unwrap() <= hamming(a, b).unwrap() + hamming(b, c).unwrap());
            prop_assert_eq!(affinity(a, b).unwrap() + hamming(a, b).unwrap(), dim);
        }
    }
}
