//! Single-permutation cost models.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cost::compiler::compile_permutation;
use crate::cost::vector::CostVector;
use crate::error::{shape_err, NflError, Result};
use crate::model::Permutation;

/// Minimal number of transpositions generating `p`: `N - cycles(p)`.
pub fn transposition_count_cost(p: &Permutation) -> CostVector {
    CostVector::scalar("transpositions", transposition_count(p) as f64)
}

pub fn transposition_count(p: &Permutation) -> usize {
    p.len() - p.cycle_count()
}

/// `[gate_count, ancilla_count]` of the compiled `{X, Toffoli}` circuit.
pub fn gate_count_cost(p: &Permutation) -> Result<CostVector> {
    let n = register_bits(p.len())?;
    let circuit = compile_permutation(p, n)?;
    Ok(CostVector::new(vec![("gates", circuit.len() as f64), ("ancillas", circuit.uses_ancilla() as u8 as f64)]))
}

fn register_bits(size: usize) -> Result<usize> {
    if size < 2 || !size.is_power_of_two() {
        return shape_err(format!("gate cost needs a power-of-two size >= 2, got {size}"));
    }
    Ok(size.trailing_zeros() as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostModelKind {
    Transpositions,
    Gates,
}

impl CostModelKind {
    pub const ALL: [CostModelKind; 2] = [CostModelKind::Transpositions, CostModelKind::Gates];

    pub fn name(self) -> &'static str {
        match self {
            CostModelKind::Transpositions => "transpositions",
            CostModelKind::Gates => "gates",
        }
    }

    pub fn cost(self, p: &Permutation) -> Result<CostVector> {
        match self {
            CostModelKind::Transpositions => Ok(transposition_count_cost(p)),
            CostModelKind::Gates => gate_count_cost(p),
        }
    }

    /// Budget vector with `limit` on the primary entry. The gate model
    /// allows its single ancilla.
    pub fn budget(self, limit: f64) -> CostVector {
        match self {
            CostModelKind::Transpositions => CostVector::scalar("transpositions", limit),
            CostModelKind::Gates => CostVector::new(vec![("gates", limit), ("ancillas", 1.0)]),
        }
    }
}

impl fmt::Display for CostModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CostModelKind {
    type Err = NflError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transpositions" => Ok(CostModelKind::Transpositions),
            "gates" => Ok(CostModelKind::Gates),
            _ => Err(NflError::Validation(format!("unknown cost model {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transposition_counts() {
        assert_eq!(transposition_count_cost(&Permutation::identity(8)).primary(), 0.0);
        let t04 = Permutation::transposition(0, 4, 8).unwrap();
        assert_eq!(transposition_count_cost(&t04).primary(), 1.0);
        let both = t04.compose(&Permutation::transposition(2, 5, 8).unwrap()).unwrap();
        assert_eq!(transposition_count_cost(&both).primary(), 2.0);
        let cycle = Permutation::new(vec![1, 2, 3, 0]).unwrap();
        assert_eq!(transposition_count(&cycle), 3);
    }

    #[test]
    fn gate_costs() {
        let id = gate_count_cost(&Permutation::identity(8)).unwrap();
        assert_eq!(id.values(), &[0.0, 0.0]);
        let t = gate_count_cost(&Permutation::transposition(0, 1, 8).unwrap()).unwrap();
        assert!(t.primary() > 0.0);
        assert!(gate_count_cost(&Permutation::identity(6)).is_err());
        assert_eq!(CostModelKind::Gates.budget(10.0).names(), t.names());
        assert_eq!("gates".parse::<CostModelKind>().unwrap(), CostModelKind::Gates);
    }
}
