use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ambient dimension. Blade index sets are 16-bit masks, so
/// a dimension-`n` algebra has `2^n <= 65536` basis blades.
pub const MAX_DIM: usize = 16;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(Error::UnsupportedDimension(dim))
    } else {
        Ok(())
    }
}

/// Canonical index set of a basis blade: a strictly increasing subset of
/// `0..n`, stored as a bitmask so canonical ordering is automatic.
///
/// The empty set is the scalar blade; a singleton `{i}` is the basis vector
/// `e_{i+1}`; the full set is the top blade `e_1 ^ ... ^ e_n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BladeIndex(u16);

impl BladeIndex {
    /// The grade-0 (scalar) blade.
    pub const SCALAR: BladeIndex = BladeIndex(0);

    /// Builds a blade from strictly increasing indices in `0..dim`.
    pub fn new(dim: usize, indices: &[usize]) -> Result<Self> {
        check_dim(dim)?;
        let mut bits = 0u16;
        let mut prev = None;
        for &i in indices {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, dim });
            }
            if prev.is_some_and(|p| p >= i) {
                return Err(Error::Precondition(
                    "blade indices must be strictly increasing".into(),
                ));
            }
            bits |= 1 << i;
            prev = Some(i);
        }
        Ok(BladeIndex(bits))
    }

    pub(crate) fn from_bits(bits: u16) -> Self {
        BladeIndex(bits)
    }

    /// Number of indices in the set.
    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        index < MAX_DIM && self.0 >> index & 1 == 1
    }

    /// Member indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..MAX_DIM).filter(move |i| bits >> i & 1 == 1)
    }

    /// Every blade of the given grade in a dimension-`dim` algebra, in
    /// ascending bitmask order (deterministic).
    pub fn all_of_grade(dim: usize, grade: usize) -> Vec<BladeIndex> {
        (0u32..1 << dim)
            .filter(|b| b.count_ones() as usize == grade)
            .map(|b| BladeIndex(b as u16))
            .collect()
    }

    /// The top blade `e_1 ^ ... ^ e_n`.
    pub fn top(dim: usize) -> BladeIndex {
        BladeIndex(((1u32 << dim) - 1) as u16)
    }

    pub(crate) fn disjoint(self, other: BladeIndex) -> bool {
        self.0 & other.0 == 0
    }

    pub(crate) fn union(self, other: BladeIndex) -> BladeIndex {
        BladeIndex(self.0 | other.0)
    }

    /// Sign of merging `self ^ other` into canonical order, assuming the two
    /// index sets are disjoint: `(-1)^inversions` where an inversion is a pair
    /// `(a, b)` with `a` in `self`, `b` in `other`, `a > b`.
    pub(crate) fn merge_sign(self, other: BladeIndex) -> f64 {
        debug_assert!(self.disjoint(other));
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let low = rest.trailing_zeros();
            inversions += (self.0 >> (low + 1)).count_ones();
            rest &= rest - 1;
        }
        if inversions.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for BladeIndex {
    /// `1` for the scalar blade, otherwise `e1^e3^...` (indices shown 1-based).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for i in self.indices() {
            if !first {
                write!(f, "^")?;
            }
            write!(f, "e{}", i + 1)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for BladeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sorts a wedge monomial `e_{i_1} ^ ... ^ e_{i_p}` into canonical order.
///
/// Returns the canonical blade and the parity sign of the sorting
/// permutation, or `(None, 0)` when an index repeats (the monomial is zero).
pub fn canonical_blade(dim: usize, indices: &[usize]) -> Result<(Option<BladeIndex>, i8)> {
    check_dim(dim)?;
    for &i in indices {
        if i >= dim {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
    }
    let mut sorted = indices.to_vec();
    // Insertion sort, counting swaps of adjacent elements.
    let mut swaps = 0usize;
    for i in 1..sorted.len() {
        let mut j = i;
        while j > 0 && sorted[j - 1] > sorted[j] {
            sorted.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok((None, 0));
    }
    let sign = if swaps.is_multiple_of(2) { 1 } else { -1 };
    Ok((Some(BladeIndex::new(dim, &sorted)?), sign))
}
