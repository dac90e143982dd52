//! Matrix permanent by Ryser's inclusion–exclusion formula.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `per(A) = (−1)^n Σ_{S ⊆ cols} (−1)^{|S|} Π_i Σ_{j∈S} a_ij`.
///
/// Subsets are visited in Gray-code order so each step updates the row sums
/// with a single column, `O(2^n · n)` overall. The empty matrix has
/// permanent 1.
pub fn permanent(a: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::spec(format!(
            "permanent needs a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if n >= 63 {
        return Err(Error::Capacity(format!("permanent of a {n}x{n} matrix")));
    }

    let mut row_sums = vec![Complex64::default(); n];
    let mut in_subset = vec![false; n];
    let mut total = Complex64::default();
    for k in 1u64..(1u64 << n) {
        let col = k.trailing_zeros() as usize;
        let sign = if in_subset[col] { -1.0 } else { 1.0 };
        in_subset[col] = !in_subset[col];
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += a[(i, col)] * sign;
        }
        let size = (k ^ (k >> 1)).count_ones() as usize;
        let prod: Complex64 = row_sums.iter().product();
        if (n - size).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}
