use super::ComplexMatrix;
use crate::math::{ceil, log2};
use crate::Result;

const SCALED_NORM: f64 = 0.25;
const MAX_TERMS: usize = 40;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The input is scaled so that `||A||_1 / 2^s <= 1/4`; the series is summed
/// until a term no longer changes the partial sum in double precision.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.ensure_square()?;
    let norm = a.norm_one();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    let squarings = if norm > SCALED_NORM { ceil(log2(norm / SCALED_NORM)) as u32 } else { 0 };
    let scaled = a.scale_real((0..squarings).fold(1.0, |f, _| f * 0.5));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        if term.norm_one() <= f64::EPSILON * 1e-3 * sum.norm_one() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}
