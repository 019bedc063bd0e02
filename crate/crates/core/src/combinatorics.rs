//! Bounded compositions and binomial counting.

use num_bigint::BigUint;

use crate::error::{NflError, Result};

/// All vectors `m` with `Σ m = total` and `m[k] <= caps[k]`, in
/// lexicographic order. Errors once more than `cap` vectors would be
/// produced.
pub fn bounded_compositions(caps: &[usize], total: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    let suffix: Vec<usize> = (0..=caps.len()).map(|k| caps[k..].iter().sum()).collect();
    let mut out = Vec::new();
    let mut current = vec![0; caps.len()];
    walk(caps, &suffix, 0, total, &mut current, &mut out, cap)?;
    Ok(out)
}

fn walk(
    caps: &[usize],
    suffix: &[usize],
    k: usize,
    remaining: usize,
    current: &mut [usize],
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    if k == caps.len() {
        if remaining == 0 {
            if out.len() >= cap {
                return Err(NflError::ResourceLimit(format!("more than {cap} bounded compositions")));
            }
            out.push(current.to_vec());
        }
        return Ok(());
    }
    if suffix[k] < remaining {
        return Ok(());
    }
    for m in 0..=caps[k].min(remaining) {
        current[k] = m;
        walk(caps, suffix, k + 1, remaining - m, current, out, cap)?;
    }
    current[k] = 0;
    Ok(())
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k.min(n - k)))
}

/// Largest `n_tilde` accepted by [`stars_and_bars_count`].
pub const MAX_STARS_AND_BARS_BITS: u32 = 20;

/// Number of distributions on `Ñ = 2^n_tilde` points whose masses are
/// multiples of `1/Ñ`: `C(2Ñ - 1, Ñ - 1)`.
pub fn stars_and_bars_count(n_tilde: u32) -> Result<BigUint> {
    if n_tilde > MAX_STARS_AND_BARS_BITS {
        return Err(NflError::ResourceLimit(format!("n_tilde must be <= {MAX_STARS_AND_BARS_BITS}")));
    }
    let big_n = 1u64 << n_tilde;
    Ok(binomial(2 * big_n - 1, big_n - 1))
}
