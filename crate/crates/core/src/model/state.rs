use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{NflError, Result};
use crate::model::shape::RegisterShape;

/// Absolute tolerance on the total mass of float-backed vectors.
pub const FLOAT_NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

/// A vector of probability masses stored either exactly or as floats.
#[derive(Clone, PartialEq)]
pub enum Masses {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// Arithmetic shared by the two mass backends.
pub(crate) trait Mass: Clone + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn accumulate(&mut self, other: &Self);
    fn halve_times(&self, k: u32) -> Self;
}

impl Mass for f64 {
    fn zero() -> Self {
        0.0
    }
    fn accumulate(&mut self, other: &Self) {
        *self += *other;
    }
    fn halve_times(&self, k: u32) -> Self {
        self / (1u64 << k) as f64
    }
}

impl Mass for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }
    fn halve_times(&self, k: u32) -> Self {
        self / BigRational::from_integer(BigInt::one() << k)
    }
}

impl Masses {
    pub fn backend(&self) -> Backend {
        match self {
            Masses::Exact(_) => Backend::Rational,
            Masses::Float(_) => Backend::Float,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Masses::Exact(v) => v.len(),
            Masses::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get_f64(&self, i: usize) -> f64 {
        match self {
            Masses::Exact(v) => v[i].to_f64().unwrap_or(f64::NAN),
            Masses::Float(v) => v[i],
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.get_f64(i)).collect()
    }

    /// Entries rendered as strings: `p/q` for exact values, shortest
    /// round-trip decimal for floats.
    pub fn to_strings(&self) -> Vec<String> {
        match self {
            Masses::Exact(v) => v.iter().map(|r| r.to_string()).collect(),
            Masses::Float(v) => v.iter().map(|x| format!("{x:?}")).collect(),
        }
    }

    pub fn check_normalized(&self, what: &str) -> Result<()> {
        match self {
            Masses::Exact(v) => {
                if v.iter().any(|x| x.is_negative()) {
                    return Err(NflError::Validation(format!("{what} has a negative entry")));
                }
                let total: BigRational = v.iter().sum();
                if !total.is_one() {
                    return Err(NflError::Validation(format!("{what} sums to {total}, expected exactly 1")));
                }
            }
            Masses::Float(v) => {
                if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
                    return Err(NflError::Validation(format!("{what} has a negative or non-finite entry")));
                }
                let total: f64 = v.iter().sum();
                if (total - 1.0).abs() > FLOAT_NORM_TOLERANCE {
                    return Err(NflError::Validation(format!("{what} sums to {total}, expected 1 ± {FLOAT_NORM_TOLERANCE}")));
                }
            }
        }
        Ok(())
    }

    /// Entry-wise comparison: exact equality when both sides are exact,
    /// otherwise `|a - b| <= tolerance` on the float images.
    pub fn approx_eq(&self, other: &Masses, tolerance: f64) -> bool {
        if self.len() != other.len() {
            return false;
        }
        match (self, other) {
            (Masses::Exact(a), Masses::Exact(b)) => a == b,
            _ => (0..self.len()).all(|i| (self.get_f64(i) - other.get_f64(i)).abs() <= tolerance),
        }
    }

    /// Exact rational copy. Floats convert to their exact dyadic values.
    pub fn to_exact(&self) -> Result<Masses> {
        match self {
            Masses::Exact(_) => Ok(self.clone()),
            Masses::Float(v) => v
                .iter()
                .map(|&x| {
                    BigRational::from_float(x).ok_or_else(|| NflError::Validation(format!("cannot convert {x} to a rational")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Masses::Exact),
        }
    }
}

impl fmt::Debug for Masses {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_strings()).finish()
    }
}

/// The `nq`-qubit resource state, kept as squared magnitudes. Phases ride
/// along for the samplers but nothing downstream reads them.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceState {
    masses: Masses,
    phases: Option<Vec<f64>>,
}

impl ResourceState {
    pub fn new(masses: Masses) -> Result<Self> {
        let len = masses.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(NflError::Shape(format!("resource state length {len} is not a power of two")));
        }
        masses.check_normalized("resource state")?;
        Ok(ResourceState { masses, phases: None })
    }

    pub fn from_rationals(values: Vec<BigRational>) -> Result<Self> {
        Self::new(Masses::Exact(values))
    }

    /// Squared magnitudes given as `(numerator, denominator)` pairs.
    pub fn from_ratios(values: &[(i64, i64)]) -> Result<Self> {
        let mut out = Vec::with_capacity(values.len());
        for &(num, den) in values {
            if den == 0 {
                return Err(NflError::Validation("zero denominator".into()));
            }
            out.push(BigRational::new(num.into(), den.into()));
        }
        Self::from_rationals(out)
    }

    pub fn from_f64(values: Vec<f64>) -> Result<Self> {
        Self::new(Masses::Float(values))
    }

    /// The `nq = 0` state, a single amplitude of magnitude one.
    pub fn scalar(backend: Backend) -> Self {
        let masses = match backend {
            Backend::Rational => Masses::Exact(vec![BigRational::one()]),
            Backend::Float => Masses::Float(vec![1.0]),
        };
        ResourceState { masses, phases: None }
    }

    /// Uniform superposition over `2^nq` basis states (exact).
    pub fn uniform(nq: u32) -> Result<Self> {
        let len = 1i64 << nq;
        Self::from_ratios(&vec![(1, len); len as usize])
    }

    pub fn with_phases(mut self, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != self.len() {
            return Err(NflError::Shape(format!("{} phases for a state of length {}", phases.len(), self.len())));
        }
        self.phases = Some(phases);
        Ok(self)
    }

    pub fn masses(&self) -> &Masses {
        &self.masses
    }

    pub fn phases(&self) -> Option<&[f64]> {
        self.phases.as_deref()
    }

    pub fn backend(&self) -> Backend {
        self.masses.backend()
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// `log2` of the length.
    pub fn nq(&self) -> u32 {
        self.len().trailing_zeros()
    }

    /// Exact copy of a float state: every entry becomes its exact dyadic
    /// value and the vector is rescaled so the total is exactly one.
    pub fn to_exact(&self) -> Result<Self> {
        let Masses::Exact(mut values) = self.masses.to_exact()? else { unreachable!("to_exact always yields exact masses") };
        let total: BigRational = values.iter().sum();
        if total.is_zero() {
            return Err(NflError::Validation("state has zero total mass".into()));
        }
        if !total.is_one() {
            for v in &mut values {
                *v /= &total;
            }
        }
        Ok(ResourceState { masses: Masses::Exact(values), phases: self.phases.clone() })
    }

    pub fn to_float(&self) -> Self {
        ResourceState { masses: Masses::Float(self.masses.to_f64()), phases: self.phases.clone() }
    }

    pub fn check_shape(&self, shape: &RegisterShape) -> Result<()> {
        if self.len() != shape.resource_len() {
            return Err(NflError::Shape(format!(
                "resource state has {} entries but shape {shape} needs 2^nq = {}",
                self.len(),
                shape.resource_len()
            )));
        }
        Ok(())
    }
}

/// The `N`-entry input vector seen by the permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct InputState {
    pub(crate) shape: RegisterShape,
    pub(crate) masses: Masses,
}

impl InputState {
    pub fn shape(&self) -> &RegisterShape {
        &self.shape
    }

    pub fn masses(&self) -> &Masses {
        &self.masses
    }

    pub fn backend(&self) -> Backend {
        self.masses.backend()
    }

    /// Arbitrary normalized input of length `N`; used for exhaustive
    /// property runs that do not come from a resource state.
    pub fn from_masses(shape: RegisterShape, masses: Masses) -> Result<Self> {
        if masses.len() != shape.size() {
            return Err(NflError::Shape(format!("input has {} entries, shape needs {}", masses.len(), shape.size())));
        }
        masses.check_normalized("input state")?;
        Ok(InputState { shape, masses })
    }
}

/// Probabilities of the `2^ny` measured outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    pub(crate) masses: Masses,
}

impl OutcomeDistribution {
    pub fn new(masses: Masses) -> Result<Self> {
        masses.check_normalized("outcome distribution")?;
        Ok(OutcomeDistribution { masses })
    }

    pub fn from_ratios(values: &[(i64, i64)]) -> Result<Self> {
        let values = values.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect();
        Self::new(Masses::Exact(values))
    }

    pub fn masses(&self) -> &Masses {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn approx_eq(&self, other: &OutcomeDistribution, tolerance: f64) -> bool {
        self.masses.approx_eq(&other.masses, tolerance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_state_must_sum_to_one() {
        assert!(ResourceState::from_ratios(&[(16, 25), (9, 25)]).is_ok());
        assert!(matches!(ResourceState::from_ratios(&[(16, 25), (8, 25)]), Err(NflError::Validation(_))));
        assert!(matches!(ResourceState::from_ratios(&[(1, 3), (1, 3), (1, 3)]), Err(NflError::Shape(_))));
    }

    #[test]
    fn float_state_tolerance() {
        assert!(ResourceState::from_f64(vec![0.5, 0.5 + 5e-13]).is_ok());
        assert!(ResourceState::from_f64(vec![0.5, 0.5 + 1e-10]).is_err());
        assert!(ResourceState::from_f64(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn exact_conversion_renormalizes() {
        let s = ResourceState::from_f64(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let e = s.to_exact().unwrap();
        assert_eq!(e.backend(), Backend::Rational);
        e.masses().check_normalized("converted").unwrap();
    }

    #[test]
    fn phases_length_checked() {
        let s = ResourceState::scalar(Backend::Float);
        assert!(s.clone().with_phases(vec![0.0, 1.0]).is_err());
        assert_eq!(s.with_phases(vec![0.3]).unwrap().phases(), Some(&[0.3][..]));
    }
}
