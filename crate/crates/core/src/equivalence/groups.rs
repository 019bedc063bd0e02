use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NflError, Result};
use crate::model::{Permutation, RegisterShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    /// Permutes copies within each value class (and the zero padding).
    V,
    /// Permutes positions within each output bin.
    W,
}

/// One of the two block-diagonal permutation groups of a shape. A
/// permutation is a member iff it maps every block onto itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGroupSpec {
    pub kind: GroupKind,
    pub size: usize,
    pub blocks: Vec<Range<usize>>,
}

impl BlockGroupSpec {
    pub fn new(kind: GroupKind, shape: &RegisterShape) -> Self {
        let blocks = match kind {
            GroupKind::V => (0..shape.num_value_classes()).map(|c| shape.value_class_range(c)).collect(),
            GroupKind::W => (0..shape.num_bins()).map(|y| shape.bin_range(y)).collect(),
        };
        BlockGroupSpec { kind, size: shape.size(), blocks }
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.len() == self.size && self.blocks.iter().all(|b| b.clone().all(|k| b.contains(&p.apply(k))))
    }

    /// Group order `Π |block|!`, or `None` on `u128` overflow.
    pub fn order(&self) -> Option<u128> {
        self.blocks.iter().try_fold(1u128, |acc, b| (1..=b.len() as u128).try_fold(acc, |a, k| a.checked_mul(k)))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut image: Vec<usize> = (0..self.size).collect();
        for b in &self.blocks {
            image[b.clone()].shuffle(rng);
        }
        Permutation::new(image).expect("block shuffles are bijections")
    }

    /// Every element, as a product of independent block permutations.
    /// Errors if the order exceeds `cap`.
    pub fn elements(&self, cap: u128) -> Result<Vec<Permutation>> {
        match self.order() {
            Some(order) if order <= cap => {}
            _ => return Err(NflError::ResourceLimit(format!("{:?} group has more than {cap} elements", self.kind))),
        }
        let per_block: Vec<Vec<Vec<usize>>> = self.blocks.iter().map(|b| all_arrangements(b.clone())).collect();
        let mut digits = vec![0usize; per_block.len()];
        let mut out = Vec::new();
        loop {
            let mut image: Vec<usize> = (0..self.size).collect();
            for ((b, choices), &d) in self.blocks.iter().zip(&per_block).zip(&digits) {
                image[b.clone()].copy_from_slice(&choices[d]);
            }
            out.push(Permutation::new(image)?);
            // mixed-radix increment
            let mut k = 0;
            loop {
                if k == digits.len() {
                    return Ok(out);
                }
                digits[k] += 1;
                if digits[k] < per_block[k].len() {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }
}

fn all_arrangements(range: Range<usize>) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = range.collect();
    let mut out = vec![current.clone()];
    if current.is_empty() {
        return out;
    }
    let mut p = Permutation::identity(current.len());
    let base = current[0];
    while p.next_lexicographic() {
        current = p.image().iter().map(|&k| k + base).collect();
        out.push(current.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn s1_group_orders() {
        let s1 = RegisterShape::new(1, 1, 1, 1).unwrap();
        let v = BlockGroupSpec::new(GroupKind::V, &s1);
        let w = BlockGroupSpec::new(GroupKind::W, &s1);
        assert_eq!(v.blocks, vec![0..2, 2..4, 4..8]);
        assert_eq!(w.blocks, vec![0..4, 4..8]);
        assert_eq!(v.order(), Some(96));
        assert_eq!(w.order(), Some(576));
        let ve = v.elements(1000).unwrap();
        assert_eq!(ve.len(), 96);
        assert!(ve.iter().all(|p| v.contains(p)));
        let mut dedup = ve.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 96);
        assert!(w.elements(100).is_err());
    }

    #[test]
    fn membership() {
        let s1 = RegisterShape::new(1, 1, 1, 1).unwrap();
        let v = BlockGroupSpec::new(GroupKind::V, &s1);
        let w = BlockGroupSpec::new(GroupKind::W, &s1);
        let t01 = Permutation::transposition(0, 1, 8).unwrap();
        let t04 = Permutation::transposition(0, 4, 8).unwrap();
        assert!(v.contains(&t01) && w.contains(&t01));
        assert!(!v.contains(&t04) && !w.contains(&t04));
        let t13 = Permutation::transposition(1, 3, 8).unwrap();
        assert!(!v.contains(&t13) && w.contains(&t13));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(v.contains(&v.random_element(&mut rng)));
            assert!(w.contains(&w.random_element(&mut rng)));
        }
    }

    #[test]
    fn empty_zero_class() {
        let shape = RegisterShape::new(0, 0, 3, 1).unwrap();
        let v = BlockGroupSpec::new(GroupKind::V, &shape);
        assert_eq!(v.order(), Some(1));
        assert_eq!(v.elements(10).unwrap(), vec![Permutation::identity(8)]);
    }
}
