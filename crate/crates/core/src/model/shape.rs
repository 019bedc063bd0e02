use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{shape_err, Result};

/// Largest total register width accepted. Index vectors have length `2^n`.
pub const MAX_REGISTER_BITS: u32 = 24;

/// Register widths of a generative model (or sampling algorithm, when `nx`
/// is set).
///
/// The `n = n0 + nplus + nq` wire register is indexed big-endian: the
/// measured output is the top `ny` bits of an index, so bin `y` is the
/// contiguous range `y*B .. (y+1)*B` with `B = 2^(n - ny)`.
///
/// Positions of the input vector are grouped into value classes: class `i`
/// (for `i < 2^nq`) holds the `2^nplus` copies of resource amplitude `i`,
/// and the last class holds the zero padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegisterShape {
    pub n0: u32,
    pub nplus: u32,
    pub nq: u32,
    pub ny: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nx: Option<u32>,
}

impl RegisterShape {
    pub fn new(n0: u32, nplus: u32, nq: u32, ny: u32) -> Result<Self> {
        let shape = RegisterShape { n0, nplus, nq, ny, nx: None };
        shape.validate()?;
        Ok(shape)
    }

    /// Shape used for stars-and-bars preparations: `nq = 0`,
    /// `nplus = ny = n_tilde`.
    pub fn stars_and_bars(n_tilde: u32, n0: u32) -> Result<Self> {
        if n0 < n_tilde {
            return shape_err(format!("stars-and-bars shape needs n0 >= n_tilde ({n0} < {n_tilde})"));
        }
        Self::new(n0, n_tilde, 0, n_tilde)
    }

    pub fn with_nx(mut self, nx: u32) -> Result<Self> {
        if nx > 16 {
            return shape_err(format!("nx = {nx} is too large"));
        }
        self.nx = Some(nx);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n0 as u64 + self.nplus as u64 + self.nq as u64;
        if n > MAX_REGISTER_BITS as u64 {
            return shape_err(format!("register width n = {n} exceeds {MAX_REGISTER_BITS}"));
        }
        if self.ny == 0 || self.ny as u64 > n {
            return shape_err(format!("need 1 <= ny <= n, got ny = {} with n = {n}", self.ny));
        }
        Ok(())
    }

    /// Total wire count `n`.
    pub fn n(&self) -> u32 {
        self.n0 + self.nplus + self.nq
    }

    /// `N = 2^n`.
    pub fn size(&self) -> usize {
        1usize << self.n()
    }

    pub fn nx(&self) -> u32 {
        self.nx.unwrap_or(0)
    }

    pub fn num_bins(&self) -> usize {
        1usize << self.ny
    }

    /// `B = 2^(n - ny)`.
    pub fn bin_size(&self) -> usize {
        1usize << (self.n() - self.ny)
    }

    pub fn bin_range(&self, y: usize) -> Range<usize> {
        let b = self.bin_size();
        y * b..(y + 1) * b
    }

    pub fn bin_of(&self, index: usize) -> usize {
        index >> (self.n() - self.ny)
    }

    /// Number of resource amplitudes, `2^nq`.
    pub fn resource_len(&self) -> usize {
        1usize << self.nq
    }

    /// Copies of each amplitude in the input state, `2^nplus`.
    pub fn copies(&self) -> usize {
        1usize << self.nplus
    }

    pub fn zero_class_size(&self) -> usize {
        self.size() - (self.copies() << self.nq)
    }

    /// `2^nq` amplitude classes plus the zero class.
    pub fn num_value_classes(&self) -> usize {
        self.resource_len() + 1
    }

    pub fn zero_class(&self) -> usize {
        self.resource_len()
    }

    pub fn value_class_range(&self, class: usize) -> Range<usize> {
        let c = self.copies();
        if class < self.resource_len() {
            class * c..(class + 1) * c
        } else {
            self.resource_len() * c..self.size()
        }
    }

    pub fn value_class_of(&self, index: usize) -> usize {
        (index >> self.nplus).min(self.resource_len())
    }

    pub fn value_class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.copies(); self.resource_len()];
        sizes.push(self.zero_class_size());
        sizes
    }
}

impl fmt::Display for RegisterShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n0={}, n+={}, nq={}, ny={}", self.n0, self.nplus, self.nq, self.ny)?;
        if let Some(nx) = self.nx {
            write!(f, ", nx={nx}")?;
        }
        write!(f, ")")
    }
}
