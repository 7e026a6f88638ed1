use std::fmt;

use crate::error::{Error, Result};

/// Largest manifold dimension supported by the bitmask representation.
pub const MAX_DIM: usize = 16;

/// A strictly increasing list of axis labels, stored as a bitmask.
///
/// The mask is the whole state, so degree and index list can never
/// disagree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(u16);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Builds an index from axis labels; they must be strictly increasing
    /// and below `dim`.
    pub fn new(indices: &[usize], dim: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::Config(format!("dimension {dim} exceeds {MAX_DIM}")));
        }
        let mut mask = 0u16;
        let mut last: Option<usize> = None;
        for &i in indices {
            if i >= dim {
                return Err(Error::Contract(format!("axis {i} outside dimension {dim}")));
            }
            if last.is_some_and(|l| l >= i) {
                return Err(Error::Contract(format!(
                    "indices {indices:?} are not strictly increasing"
                )));
            }
            mask |= 1 << i;
            last = Some(i);
        }
        Ok(MultiIndex(mask))
    }

    pub fn from_mask(mask: u16) -> Self {
        MultiIndex(mask)
    }

    pub fn single(axis: usize) -> Self {
        MultiIndex(1 << axis)
    }

    /// `dx_0 ∧ … ∧ dx_{dim-1}`.
    pub fn top(dim: usize) -> Self {
        MultiIndex(((1u32 << dim) - 1) as u16)
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, axis: usize) -> bool {
        self.0 & (1 << axis) != 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..MAX_DIM).filter(|&i| self.contains(i)).collect()
    }

    pub fn is_disjoint(self, other: MultiIndex) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: MultiIndex) -> MultiIndex {
        MultiIndex(self.0 | other.0)
    }

    /// Sign of `dx_self ∧ dx_other` relative to the sorted union, or
    /// `None` when the two share an axis (the wedge vanishes).
    pub fn wedge_sign(self, other: MultiIndex) -> Option<f64> {
        if !self.is_disjoint(other) {
            return None;
        }
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            let above = if j >= 15 { 0 } else { self.0 & !((1u16 << (j + 1)) - 1) };
            inversions += above.count_ones();
            rest &= rest - 1;
        }
        Some(if inversions.is_multiple_of(2) { 1.0 } else { -1.0 })
    }

    /// All indices of a given degree in dimension `dim`, ordered by mask.
    pub fn all_of_degree(dim: usize, degree: usize) -> Vec<MultiIndex> {
        (0u32..(1u32 << dim))
            .filter(|m| m.count_ones() as usize == degree)
            .map(|m| MultiIndex(m as u16))
            .collect()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.indices().iter().map(|i| format!("dx{i}")).collect();
        write!(f, "{}", parts.join("^"))
    }
}
