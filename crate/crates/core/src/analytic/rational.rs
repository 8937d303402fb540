//! Exact sawtooth and Dedekind-type sums.
//!
//! For `0 < j < k`, `((j/k)) = (2j - k) / (2k)`, so both sums below have the
//! form `(integer) / (4k^2)` and are accumulated as integers before a single
//! reduction. [`dedekind_sum_fast`] uses reciprocity instead and runs in
//! `O(log k)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type ExactRational = BigRational;

/// `((x))`: `x - floor(x) - 1/2` off the integers, `0` on them.
pub fn sawtooth(x: &ExactRational) -> ExactRational {
    if x.is_integer() {
        return ExactRational::zero();
    }
    x - x.floor() - ExactRational::new(BigInt::one(), BigInt::from(2))
}

fn check_coprime(h: u64, k: u64) -> Result<()> {
    let g = h.gcd(&k);
    if g != 1 {
        return Err(Error::NotCoprime { h, k, gcd: g });
    }
    Ok(())
}

fn check_args(h: u64, k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::OutOfRange { what: "modulus", detail: "k must be positive".into() });
    }
    if h >= k && !(h == 0 && k == 1) {
        return Err(Error::OutOfRange { what: "residue", detail: format!("need 0 <= h < k, got h = {h}, k = {k}") });
    }
    check_coprime(h, k)
}

/// `s(h, k) = sum_{j=1}^{k-1} ((j/k)) ((hj/k))` for coprime `0 <= h < k`.
pub fn dedekind_sum(h: u64, k: u64) -> Result<ExactRational> {
    check_args(h, k)?;
    let (h, k) = (h as i128, k as i128);
    let mut acc: i128 = 0;
    for j in 1..k {
        let r = (h * j) % k;
        // k does not divide hj because gcd(h, k) = 1 and 0 < j < k.
        acc += (2 * j - k) * (2 * r - k);
    }
    Ok(ExactRational::new(BigInt::from(acc), BigInt::from(4 * k * k)))
}

/// `t(h, k) = sum_{j=1}^{k} (((2j-1)/(2k))) ((h(2j-1)/k))` for odd `k`.
pub fn hagis_t(h: u64, k: u64) -> Result<ExactRational> {
    if k.is_multiple_of(2) {
        return Err(Error::EvenModulus(k));
    }
    check_args(h, k)?;
    let (h, k) = (h as i128, k as i128);
    let mut acc: i128 = 0;
    for j in 1..=k {
        let odd = 2 * j - 1;
        // (2j-1)/(2k) is never an integer and lies in (0, 1).
        let first = odd - k;
        let r = (h * odd) % k;
        if r != 0 {
            acc += first * (2 * r - k);
        }
    }
    Ok(ExactRational::new(BigInt::from(acc), BigInt::from(4 * k * k)))
}

/// `s(h, k)` by the reciprocity law
/// `s(h,k) + s(k,h) = (h^2 + k^2 + 1) / (12hk) - 1/4`. Any `h`, coprime to `k`.
pub fn dedekind_sum_fast(h: u64, k: u64) -> Result<Ratio<i128>> {
    if k == 0 {
        return Err(Error::OutOfRange { what: "modulus", detail: "k must be positive".into() });
    }
    check_coprime(h % k, k)?;
    let mut acc = Ratio::<i128>::zero();
    let mut sign = 1i128;
    let (mut h, mut k) = (h as i128 % k as i128, k as i128);
    while h != 0 {
        let term = Ratio::new(h * h + k * k + 1, 12 * h * k) - Ratio::new(1, 4);
        acc += term * sign;
        sign = -sign;
        let next = k % h;
        k = h;
        h = next;
    }
    Ok(acc)
}

/// `t(h, k) = s(h, k) - s(2h, k)` for odd `k`; splitting the odd residues
/// modulo `2k` off the full Dedekind sum `s(2h, 2k) = s(h, k)` gives this.
pub fn hagis_t_fast(h: u64, k: u64) -> Result<Ratio<i128>> {
    if k.is_multiple_of(2) {
        return Err(Error::EvenModulus(k));
    }
    Ok(dedekind_sum_fast(h, k)? - dedekind_sum_fast((2 * h) % k, k)?)
}

pub fn to_big(r: &Ratio<i128>) -> ExactRational {
    ExactRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> ExactRational {
        ExactRational::new(BigInt::from(a), BigInt::from(b))
    }

    /// Literal definition in rationals: the oracle for the integer route.
    fn dedekind_by_sawtooth(h: u64, k: u64) -> ExactRational {
        (1..k)
            .map(|j| sawtooth(&q(j as i64, k as i64)) * sawtooth(&q((h * j) as i64, k as i64)))
            .fold(ExactRational::zero(), |a, b| a + b)
    }

    fn hagis_t_by_sawtooth(h: u64, k: u64) -> ExactRational {
        (1..=k)
            .map(|j| {
                let odd = (2 * j - 1) as i64;
                sawtooth(&q(odd, 2 * k as i64)) * sawtooth(&q(h as i64 * odd, k as i64))
            })
            .fold(ExactRational::zero(), |a, b| a + b)
    }

    #[test]
    fn sawtooth_values() {
        assert_eq!(sawtooth(&q(3, 1)), q(0, 1));
        assert_eq!(sawtooth(&q(1, 4)), q(-1, 4));
        assert_eq!(sawtooth(&q(-1, 4)), q(1, 4));
        assert_eq!(sawtooth(&q(1, 2)), q(0, 1));
        assert_eq!(sawtooth(&q(7, 3)), q(-1, 6));
    }

    #[test]
    fn dedekind_examples() {
        assert_eq!(dedekind_sum(0, 1).unwrap(), q(0, 1));
        assert_eq!(dedekind_sum(1, 2).unwrap(), q(0, 1));
        assert_eq!(dedekind_sum(1, 3).unwrap(), q(1, 18));
        assert_eq!(dedekind_sum(2, 4), Err(Error::NotCoprime { h: 2, k: 4, gcd: 2 }));
        assert!(dedekind_sum(5, 3).is_err());
        assert!(dedekind_sum(0, 0).is_err());
    }

    #[test]
    fn hagis_t_examples() {
        assert_eq!(hagis_t(0, 1).unwrap(), q(0, 1));
        assert_eq!(hagis_t(1, 3).unwrap(), q(1, 9));
        assert_eq!(hagis_t(2, 3).unwrap(), q(-1, 9));
        assert_eq!(hagis_t(1, 4), Err(Error::EvenModulus(4)));
        assert!(matches!(hagis_t(3, 9), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn routes_agree_with_sawtooth_definition() {
        for k in 1..=30u64 {
            for h in 0..k {
                if h.gcd(&k) != 1 {
                    continue;
                }
                let s = dedekind_sum(h, k).unwrap();
                assert_eq!(s, dedekind_by_sawtooth(h, k), "s({h},{k})");
                assert_eq!(to_big(&dedekind_sum_fast(h, k).unwrap()), s, "fast s({h},{k})");
                if k % 2 == 1 {
                    let t = hagis_t(h, k).unwrap();
                    assert_eq!(t, hagis_t_by_sawtooth(h, k), "t({h},{k})");
                    assert_eq!(to_big(&hagis_t_fast(h, k).unwrap()), t, "fast t({h},{k})");
                }
            }
        }
    }

    #[test]
    fn fast_routes_agree_at_larger_moduli() {
        for k in [97u64, 101, 255, 256, 511, 1000, 1001] {
            for h in (0..k).filter(|h| h.gcd(&k) == 1).step_by(7) {
                assert_eq!(to_big(&dedekind_sum_fast(h, k).unwrap()), dedekind_sum(h, k).unwrap());
                if k % 2 == 1 {
                    assert_eq!(to_big(&hagis_t_fast(h, k).unwrap()), hagis_t(h, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn reciprocity_and_denominators() {
        for k in 2..=30u64 {
            for h in 1..k {
                if h.gcd(&k) != 1 {
                    continue;
                }
                let lhs = dedekind_sum(h, k).unwrap() + dedekind_by_sawtooth(k % h, h);
                let (hh, kk) = (h as i64, k as i64);
                let rhs = q(-1, 4) + (q(hh, kk) + q(kk, hh) + q(1, hh * kk)) / q(12, 1);
                assert_eq!(lhs, rhs, "({h},{k})");
                let scaled = dedekind_sum(h, k).unwrap() * q(12 * kk, 1);
                assert!(scaled.is_integer(), "12k s({h},{k}) = {scaled}");
            }
        }
    }
}
