//! Explicit pair of permutations from different multiplicative classes that
//! prepare the same distribution once two resource amplitudes coincide.

use crate::error::{NflError, Result};
use crate::model::{Permutation, RegisterShape};

/// 1-based input positions `(2^nplus · i, 2^nplus · j)` for 1-based resource
/// indices `i`, `j`.
pub fn lemma5_positions(shape: &RegisterShape, i: usize, j: usize) -> Result<(usize, usize)> {
    for idx in [i, j] {
        if idx == 0 || idx > shape.resource_len() {
            return Err(NflError::Index { index: idx, size: shape.resource_len() });
        }
    }
    Ok((shape.copies() * i, shape.copies() * j))
}

/// `P = T(i*, 1) T(j*, N)` and `S = P T(i*, j*)` with 1-based positions.
///
/// `P` routes position `i*` into the all-zeros outcome and `j*` into the
/// all-ones outcome; `S` does the same after exchanging them.
pub fn lemma5_witness(shape: &RegisterShape, i_star: usize, j_star: usize) -> Result<(Permutation, Permutation)> {
    let n = shape.size();
    for idx in [i_star, j_star] {
        if idx == 0 || idx > n {
            return Err(NflError::Index { index: idx, size: n });
        }
    }
    if i_star == j_star {
        return Err(NflError::Validation("witness positions must differ".into()));
    }
    let (i0, j0) = (i_star - 1, j_star - 1);
    let p = Permutation::transposition(i0, 0, n)?.compose(&Permutation::transposition(j0, n - 1, n)?)?;
    let s = p.compose(&Permutation::transposition(i0, j0, n)?)?;
    Ok((p, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::key::same_multiplicative_class;
    use crate::model::{build_input_state, output_distribution, OutcomeDistribution, ResourceState};

    #[test]
    fn witness_examples() {
        let shape = RegisterShape::new(1, 0, 2, 1).unwrap();
        let (i_star, j_star) = lemma5_positions(&shape, 1, 2).unwrap();
        assert_eq!((i_star, j_star), (1, 2));
        let (p, s) = lemma5_witness(&shape, i_star, j_star).unwrap();

        let omega = ResourceState::from_ratios(&[(3, 10), (3, 10), (15, 100), (25, 100)]).unwrap();
        let input = build_input_state(&shape, &omega).unwrap();
        let expected = OutcomeDistribution::from_ratios(&[(7, 10), (3, 10)]).unwrap();
        assert_eq!(output_distribution(&input, &p).unwrap(), expected);
        assert_eq!(output_distribution(&input, &s).unwrap(), expected);

        let psi = ResourceState::from_ratios(&[(4, 10), (3, 10), (2, 10), (1, 10)]).unwrap();
        let input = build_input_state(&shape, &psi).unwrap();
        assert_eq!(output_distribution(&input, &p).unwrap(), expected);
        assert_eq!(output_distribution(&input, &s).unwrap(), OutcomeDistribution::from_ratios(&[(6, 10), (4, 10)]).unwrap());
        assert!(!same_multiplicative_class(&p, &s, &shape).unwrap());
    }

    #[test]
    fn positions_scale_with_copies() {
        let shape = RegisterShape::new(1, 1, 1, 1).unwrap();
        assert_eq!(lemma5_positions(&shape, 1, 2).unwrap(), (2, 4));
        assert!(lemma5_positions(&shape, 0, 2).is_err());
        assert!(lemma5_positions(&shape, 1, 3).is_err());
        assert!(lemma5_witness(&shape, 2, 2).is_err());
        assert!(lemma5_witness(&shape, 2, 9).is_err());
    }
}
