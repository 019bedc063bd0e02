//! The bin × value-class occupancy matrix of a permutation.
//!
//! Left multiplication by a bin-preserving permutation and right
//! multiplication by a class-preserving one leave the matrix unchanged, and
//! equal matrices let one build the two factors explicitly, so the matrix is
//! a complete invariant of the double coset `𝒲 S 𝒱`. The brute-force coset
//! search below is kept as the definitional cross-check.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::equivalence::groups::{BlockGroupSpec, GroupKind};
use crate::error::{shape_err, NflError, Result};
use crate::model::{Permutation, RegisterShape};

/// Cap on `|𝒲|·|𝒱|` for [`double_coset_oracle`].
pub const DOUBLE_COSET_SEARCH_CAP: u128 = 10_000_000;

/// `counts[y][c]` = number of positions of value class `c` that land in bin
/// `y`. Rows sum to the bin size, columns to the class sizes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiplicityMatrix {
    rows: usize,
    cols: usize,
    counts: Vec<u32>,
}

impl MultiplicityMatrix {
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return shape_err("ragged multiplicity matrix");
        }
        Ok(MultiplicityMatrix { rows: rows.len(), cols, counts: rows.iter().flatten().map(|&c| c as u32).collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, bin: usize, class: usize) -> u32 {
        self.counts[bin * self.cols + class]
    }

    pub fn row(&self, bin: usize) -> &[u32] {
        &self.counts[bin * self.cols..(bin + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|y| self.row(y).to_vec()).collect()
    }
}

impl fmt::Debug for MultiplicityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|y| self.row(y))).finish()
    }
}

impl fmt::Display for MultiplicityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for y in 0..self.rows {
            if y > 0 {
                write!(f, "|")?;
            }
            for (i, c) in self.row(y).iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

pub fn multiplicity_key(p: &Permutation, shape: &RegisterShape) -> Result<MultiplicityMatrix> {
    if p.len() != shape.size() {
        return shape_err(format!("permutation of size {} for shape {shape} of size {}", p.len(), shape.size()));
    }
    let cols = shape.num_value_classes();
    let mut counts = vec![0u32; shape.num_bins() * cols];
    for j in 0..p.len() {
        counts[shape.bin_of(p.apply(j)) * cols + shape.value_class_of(j)] += 1;
    }
    Ok(MultiplicityMatrix { rows: shape.num_bins(), cols, counts })
}

pub fn same_multiplicative_class(p: &Permutation, s: &Permutation, shape: &RegisterShape) -> Result<bool> {
    Ok(multiplicity_key(p, shape)? == multiplicity_key(s, shape)?)
}

/// Searches every `w ∈ 𝒲`, `v ∈ 𝒱` for `p = w ∘ s ∘ v`.
pub fn double_coset_oracle(p: &Permutation, s: &Permutation, shape: &RegisterShape) -> Result<bool> {
    if p.len() != shape.size() || s.len() != shape.size() {
        return shape_err("permutation sizes do not match the shape");
    }
    let v_group = BlockGroupSpec::new(GroupKind::V, shape);
    let w_group = BlockGroupSpec::new(GroupKind::W, shape);
    let total = v_group.order().zip(w_group.order()).and_then(|(a, b)| a.checked_mul(b));
    if !matches!(total, Some(t) if t <= DOUBLE_COSET_SEARCH_CAP) {
        return Err(NflError::ResourceLimit(format!("|W|·|V| exceeds {DOUBLE_COSET_SEARCH_CAP}")));
    }
    let vs = v_group.elements(DOUBLE_COSET_SEARCH_CAP)?;
    let ws = w_group.elements(DOUBLE_COSET_SEARCH_CAP)?;
    let n = shape.size();
    let mut sv = vec![0usize; n];
    for v in &vs {
        for (k, slot) in sv.iter_mut().enumerate() {
            *slot = s.apply(v.apply(k));
        }
        for w in &ws {
            if (0..n).all(|k| w.apply(sv[k]) == p.apply(k)) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1() -> RegisterShape {
        RegisterShape::new(1, 1, 1, 1).unwrap()
    }

    #[test]
    fn key_examples() {
        let id = multiplicity_key(&Permutation::identity(8), &s1()).unwrap();
        assert_eq!(id.to_rows(), vec![vec![2, 2, 0], vec![0, 0, 4]]);
        let t = Permutation::transposition(0, 4, 8).unwrap();
        let k = multiplicity_key(&t, &s1()).unwrap();
        assert_eq!(k.to_rows(), vec![vec![1, 2, 1], vec![1, 0, 3]]);
        assert_eq!(k.to_string(), "1 2 1|1 0 3");
        assert!(!same_multiplicative_class(&t, &Permutation::identity(8), &s1()).unwrap());
        assert!(multiplicity_key(&Permutation::identity(4), &s1()).is_err());
    }

    #[test]
    fn oracle_examples() {
        let id = Permutation::identity(8);
        assert!(double_coset_oracle(&id, &id, &s1()).unwrap());
        let t = Permutation::transposition(0, 4, 8).unwrap();
        assert!(!double_coset_oracle(&t, &id, &s1()).unwrap());
        // T(0,1) is in both groups, T(2,5) is not
        let t01 = Permutation::transposition(0, 1, 8).unwrap();
        assert!(double_coset_oracle(&t01, &id, &s1()).unwrap());
    }

    #[test]
    fn oracle_guard() {
        let big = RegisterShape::new(2, 2, 0, 1).unwrap();
        let id = Permutation::identity(16);
        assert!(matches!(double_coset_oracle(&id, &id, &big), Err(NflError::ResourceLimit(_))));
    }
}
