use std::cmp::Ordering;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{shape_err, Result};

/// Named, ordered cost entries. Vectors are compared lexicographically in
/// entry order, which is the preorder every aggregator uses.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVector {
    names: Vec<String>,
    values: Vec<f64>,
}

impl CostVector {
    pub fn new(entries: Vec<(&str, f64)>) -> Self {
        let (names, values) = entries.into_iter().map(|(n, v)| (n.to_string(), v)).unzip();
        CostVector { names, values }
    }

    pub fn scalar(name: &str, value: f64) -> Self {
        Self::new(vec![(name, value)])
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i])
    }

    /// First entry, the primary cost.
    pub fn primary(&self) -> f64 {
        self.values[0]
    }

    pub fn same_layout(&self, other: &CostVector) -> bool {
        self.names == other.names
    }

    pub fn lex_cmp(&self, other: &CostVector) -> Ordering {
        self.values.iter().zip(&other.values).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    }

    /// Entry-wise `<=`.
    pub fn dominated_by(&self, other: &CostVector) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    pub fn checked_add(&self, other: &CostVector) -> Result<CostVector> {
        if !self.same_layout(other) {
            return shape_err(format!("cannot add cost vectors {:?} and {:?}", self.names, other.names));
        }
        Ok(CostVector { names: self.names.clone(), values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() })
    }

    pub(crate) fn from_parts(names: Vec<String>, values: Vec<f64>) -> Self {
        CostVector { names, values }
    }
}

impl Serialize for CostVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.names.len()))?;
        for (n, v) in self.names.iter().zip(&self.values) {
            map.serialize_entry(n, v)?;
        }
        map.end()
    }
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (n, v)) in self.names.iter().zip(&self.values).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}={v}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order_and_addition() {
        let a = CostVector::new(vec![("gates", 3.0), ("ancillas", 1.0)]);
        let b = CostVector::new(vec![("gates", 3.0), ("ancillas", 0.0)]);
        assert_eq!(a.lex_cmp(&b), Ordering::Greater);
        assert!(b.dominated_by(&a));
        assert_eq!(a.checked_add(&b).unwrap().values(), &[6.0, 1.0]);
        assert!(a.checked_add(&CostVector::scalar("x", 1.0)).is_err());
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"gates":3.0,"ancillas":1.0}"#);
        assert_eq!(a.get("ancillas"), Some(1.0));
    }
}
