use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{shape_err, NflError, Result};

/// Largest size for which lexicographic ranks fit in a `u64` (20! < 2^63).
pub const MAX_RANKED_SIZE: usize = 20;

/// A bijection on `0..N`. `image[k]` is where index `k` is sent, so as a
/// permutation matrix acting on a column vector `x` the result satisfies
/// `(P x)[image[k]] = x[k]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &v in &image {
            if v >= image.len() {
                return Err(NflError::Index { index: v, size: image.len() });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(NflError::Validation(format!("value {v} appears twice in permutation image")));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// Swaps `i` and `j`; `T(i, i)` is the identity.
    pub fn transposition(i: usize, j: usize, n: usize) -> Result<Self> {
        for idx in [i, j] {
            if idx >= n {
                return Err(NflError::Index { index: idx, size: n });
            }
        }
        let mut p = Self::identity(n);
        p.image.swap(i, j);
        Ok(p)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.shuffle(rng);
        Permutation { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, k: usize) -> usize {
        self.image[k]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn into_image(self) -> Vec<usize> {
        self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(k, &v)| k == v)
    }

    /// `self ∘ other`, i.e. `k ↦ self(other(k))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return shape_err(format!("cannot compose permutations of sizes {} and {}", self.len(), other.len()));
        }
        Ok(Permutation { image: other.image.iter().map(|&k| self.image[k]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (k, &v) in self.image.iter().enumerate() {
            inv[v] = k;
        }
        Permutation { image: inv }
    }

    /// Cycles of length at least two, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                cycle.push(k);
                k = self.image[k];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        let moved: usize = self.cycles().iter().map(Vec::len).sum();
        self.cycles().len() + (self.len() - moved)
    }

    /// A minimal list of transpositions `[t1, .., tk]` with
    /// `self = t1 ∘ t2 ∘ .. ∘ tk`; `k = N - cycle_count`.
    pub fn transpositions(&self) -> Vec<(usize, usize)> {
        // (c0 c1 .. cm) = (c0 cm) ∘ .. ∘ (c0 c2) ∘ (c0 c1) as maps
        let mut out = Vec::new();
        for cycle in self.cycles() {
            for &c in cycle[1..].iter().rev() {
                out.push((cycle[0], c));
            }
        }
        out
    }

    /// Lexicographic rank among all permutations of the same size.
    pub fn rank(&self) -> Result<u64> {
        let n = self.len();
        if n > MAX_RANKED_SIZE {
            return Err(NflError::ResourceLimit(format!("rank of a permutation of size {n} does not fit in u64")));
        }
        let mut used = 0u64;
        let mut rank = 0u64;
        for (pos, &v) in self.image.iter().enumerate() {
            let smaller_unused = (v as u64) - (used & ((1u64 << v) - 1)).count_ones() as u64;
            rank += smaller_unused * factorial(n - 1 - pos);
            used |= 1 << v;
        }
        Ok(rank)
    }

    pub fn from_rank(mut rank: u64, n: usize) -> Result<Self> {
        if n > MAX_RANKED_SIZE {
            return Err(NflError::ResourceLimit(format!("cannot unrank permutations of size {n}")));
        }
        if rank >= factorial(n) {
            return Err(NflError::Validation(format!("rank {rank} out of range for size {n}")));
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let mut image = Vec::with_capacity(n);
        for pos in 0..n {
            let f = factorial(n - 1 - pos);
            let idx = (rank / f) as usize;
            rank %= f;
            image.push(pool.remove(idx));
        }
        Ok(Permutation { image })
    }

    /// Advances to the lexicographic successor; returns false (leaving the
    /// permutation unchanged) if this is the last one.
    pub fn next_lexicographic(&mut self) -> bool {
        let v = &mut self.image;
        let n = v.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}

/// `n!` for `n <= 20`.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn transposition(i: usize, j: usize, n: usize) -> Result<Permutation> {
    Permutation::transposition(i, j, n)
}

pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    a.compose(b)
}

pub fn invert(a: &Permutation) -> Permutation {
    a.inverse()
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = NflError;

    fn try_from(image: Vec<usize>) -> Result<Self> {
        Permutation::new(image)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.image)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, k) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{k}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
