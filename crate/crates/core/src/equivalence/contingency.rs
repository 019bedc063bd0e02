//! Enumeration of the multiplicative classes of a shape as contingency
//! tables: integer matrices with `2^ny` rows summing to the bin size and
//! one column per value class summing to that class's size.

use crate::combinatorics::bounded_compositions;
use crate::equivalence::key::MultiplicityMatrix;
use crate::error::{NflError, Result};
use crate::model::RegisterShape;

pub const DEFAULT_TABLE_CAP: usize = 10_000_000;

pub fn enumerate_class_keys(shape: &RegisterShape) -> Result<Vec<MultiplicityMatrix>> {
    enumerate_class_keys_capped(shape, DEFAULT_TABLE_CAP)
}

/// Tables in lexicographic row order.
pub fn enumerate_class_keys_capped(shape: &RegisterShape, cap: usize) -> Result<Vec<MultiplicityMatrix>> {
    let bins = shape.num_bins();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(bins);
    let mut remaining = shape.value_class_sizes();
    fill_rows(shape.bin_size(), bins, &mut remaining, &mut rows, &mut out, cap)?;
    Ok(out)
}

fn fill_rows(
    bin_size: usize,
    bins: usize,
    remaining: &mut Vec<usize>,
    rows: &mut Vec<Vec<usize>>,
    out: &mut Vec<MultiplicityMatrix>,
    cap: usize,
) -> Result<()> {
    if rows.len() + 1 == bins {
        // last row takes what is left; totals already agree
        rows.push(remaining.clone());
        if out.len() >= cap {
            return Err(NflError::ResourceLimit(format!("more than {cap} contingency tables")));
        }
        out.push(MultiplicityMatrix::from_rows(rows)?);
        rows.pop();
        return Ok(());
    }
    for row in bounded_compositions(remaining, bin_size, cap)? {
        remaining.iter_mut().zip(&row).for_each(|(r, m)| *r -= m);
        rows.push(row);
        let res = fill_rows(bin_size, bins, remaining, rows, out, cap);
        let row = rows.pop().expect("pushed above");
        remaining.iter_mut().zip(&row).for_each(|(r, m)| *r += m);
        res?;
    }
    Ok(())
}

/// `M*`, the number of multiplicative classes of the shape.
pub fn count_classes(shape: &RegisterShape) -> Result<usize> {
    Ok(enumerate_class_keys(shape)?.len())
}
