//! Modified Bessel function of the first kind, order one.

use super::hpreal::{HpReal, MIN_PRECISION};

/// `I_1(z) = sum_{m>=0} (z/2)^(2m+1) / (m! (m+1)!)` for `z >= 0`, summed until
/// a term drops below `2^(-p-8)` of the running sum, `p` being the precision
/// of `z`.
///
/// Panics on negative input.
pub fn bessel_i1(z: &HpReal) -> HpReal {
    assert!(!z.is_negative(), "I_1 is only evaluated at z >= 0");
    let prec = z.precision().max(MIN_PRECISION);
    if z.is_zero() {
        return HpReal::zero(prec);
    }
    // Every term is positive, so the only loss is rounding per step.
    let work = prec + 24;
    let half = z.with_precision(work).mul_pow2(-1);
    let sq = half.mul(&half);
    let mut term = half;
    let mut sum = term.clone();
    let mut m: i64 = 0;
    loop {
        m += 1;
        term = term.mul(&sq).div_int(m * (m + 1));
        sum = sum.add(&term);
        let (t, s) = (term.magnitude_bits(), sum.magnitude_bits());
        match (t, s) {
            (Some(t), Some(s)) if t < s - prec as i64 - 8 => break,
            (None, _) => break,
            _ => {}
        }
    }
    sum.with_precision(prec)
}
