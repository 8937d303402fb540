//! Formal power series over the integers, truncated after `x^N`.
//!
//! An infinite product `prod_{j >= 1} f_j(x)` whose factors satisfy
//! `f_j(x) = 1 + O(x^j)` is represented by its factors with `j <= N`: each
//! later factor is `1 + O(x^(N+1))` and leaves every coefficient up to `x^N`
//! unchanged. All products below rely on this.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficients of `x^0 ..= x^order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Pads with zeros or truncates `coeffs` to `order + 1` entries.
    pub fn new(mut coeffs: Vec<BigInt>, order: usize) -> Self {
        coeffs.resize(order + 1, BigInt::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64], order: usize) -> Self {
        TruncatedSeries::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        TruncatedSeries::monomial(BigInt::one(), 0, order)
    }

    /// `coeff * x^power`, which is zero if `power > order`.
    pub fn monomial(coeff: BigInt, power: usize, order: usize) -> Self {
        let mut s = TruncatedSeries::zero(order);
        if power <= order {
            s.coeffs[power] = coeff;
        }
        s
    }

    /// `1 + sign * x^j`.
    pub fn binomial(j: usize, sign: i64, order: usize) -> Self {
        let mut s = TruncatedSeries::one(order);
        if j <= order {
            s.coeffs[j] += BigInt::from(sign);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Zero beyond the order.
    pub fn coefficient(&self, n: usize) -> BigInt {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncatedSeries::new(self.coeffs.clone(), order.min(self.order()))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Multiplicative inverse; the constant term must be `1` or `-1`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.abs() != BigInt::one() {
            return Err(Error::NonUnitConstant(c0.to_string()));
        }
        let order = self.order();
        let mut inv: Vec<BigInt> = Vec::with_capacity(order + 1);
        // c0 is its own inverse.
        inv.push(c0.clone());
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &inv[n - k];
            }
            inv.push(-(acc * c0));
        }
        Ok(TruncatedSeries { coeffs: inv })
    }

    /// In-place multiplication by `1 / (1 - x^j)`, `j >= 1`.
    fn div_one_minus_xj(&mut self, j: usize) {
        for i in j..self.coeffs.len() {
            let prev = self.coeffs[i - j].clone();
            self.coeffs[i] += prev;
        }
    }

    /// In-place multiplication by `1 + sign * x^j`, `j >= 1`.
    fn mul_binomial(&mut self, j: usize, sign: i64) {
        for i in (j..self.coeffs.len()).rev() {
            let prev = &self.coeffs[i - j] * sign;
            self.coeffs[i] += prev;
        }
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect() }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=order).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect() }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

/// `n<TAB>coefficient`, one line per coefficient.
impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{n}\t{c}")?;
        }
        Ok(())
    }
}

pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    a.mul(b)
}

pub fn series_inverse(a: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.inverse()
}

/// `prod_{j=1..N} 1/(1 - x^j)`: coefficient `n` is `p(n)`.
pub fn partition_gf(order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(order);
    for j in 1..=order {
        s.div_one_minus_xj(j);
    }
    s
}

/// `prod_{j=1..N} (1 - x^j)`.
pub fn euler_product(order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(order);
    for j in 1..=order {
        s.mul_binomial(j, -1);
    }
    s
}

/// `prod_{j odd <= N} 1/(1 - x^j)`: partitions into odd parts.
pub fn odd_partitions_gf(order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(order);
    for j in (1..=order).step_by(2) {
        s.div_one_minus_xj(j);
    }
    s
}

/// `prod_{j=1..N} (1 + x^j)`: partitions into distinct parts.
pub fn distinct_partitions_gf(order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(order);
    for j in 1..=order {
        s.mul_binomial(j, 1);
    }
    s
}

/// `x / (1 - 2x)`: coefficient `n >= 1` is `2^(n-1)`.
pub fn compositions_gf(order: usize) -> TruncatedSeries {
    let x = TruncatedSeries::monomial(BigInt::one(), 1, order);
    let denom = TruncatedSeries::binomial(1, -2, order);
    let inv = denom.inverse().expect("constant term is 1");
    x.mul(&inv)
}

/// `x^(l(l+1)/2) / prod_{i=1..l} (1 - x^i)`: partitions into exactly `l`
/// distinct parts.
pub fn distinct_partitions_ell_gf(ell: usize, order: usize) -> TruncatedSeries {
    let offset = ell * (ell + 1) / 2;
    let mut s = TruncatedSeries::monomial(BigInt::one(), offset, order);
    if offset > order {
        return s;
    }
    for i in 1..=ell {
        s.div_one_minus_xj(i);
    }
    s
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// `sum_l l! x^(l(l+1)/2) / prod_{i=1..l} (1 - x^i)`: compositions into
/// distinct parts. Terms with `l(l+1)/2 > N` vanish.
pub fn distinct_compositions_gf(order: usize) -> TruncatedSeries {
    let mut total = TruncatedSeries::zero(order);
    for ell in (0..).take_while(|l| l * (l + 1) / 2 <= order) {
        let term = distinct_partitions_ell_gf(ell, order).scale(&BigInt::from(factorial(ell)));
        total = &total + &term;
    }
    total
}

/// Series selectable by name from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedSeries {
    Partitions,
    Compositions,
    OddPartitions,
    DistinctPartitions,
    DistinctPartitionsEll(usize),
    DistinctCompositions,
    EulerProduct,
}

impl NamedSeries {
    pub const NAMES: &'static str =
        "partitions, compositions, odd-partitions, distinct-partitions, distinct-partitions-ell-<L>, distinct-compositions, euler-product";

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "partitions" => NamedSeries::Partitions,
            "compositions" => NamedSeries::Compositions,
            "odd-partitions" => NamedSeries::OddPartitions,
            "distinct-partitions" => NamedSeries::DistinctPartitions,
            "distinct-compositions" => NamedSeries::DistinctCompositions,
            "euler-product" => NamedSeries::EulerProduct,
            other => match other.strip_prefix("distinct-partitions-ell-").and_then(|l| l.parse().ok()) {
                Some(ell) => NamedSeries::DistinctPartitionsEll(ell),
                None => {
                    return Err(Error::Parse {
                        what: "series name",
                        detail: format!("{other:?} (known: {})", NamedSeries::NAMES),
                    })
                }
            },
        })
    }

    pub fn build(self, order: usize) -> TruncatedSeries {
        match self {
            NamedSeries::Partitions => partition_gf(order),
            NamedSeries::Compositions => compositions_gf(order),
            NamedSeries::OddPartitions => odd_partitions_gf(order),
            NamedSeries::DistinctPartitions => distinct_partitions_gf(order),
            NamedSeries::DistinctPartitionsEll(ell) => distinct_partitions_ell_gf(ell, order),
            NamedSeries::DistinctCompositions => distinct_compositions_gf(order),
            NamedSeries::EulerProduct => euler_product(order),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn products_and_inverses() {
        let a = TruncatedSeries::from_i64(&[1, 1], 4);
        let b = TruncatedSeries::from_i64(&[1, -1], 4);
        assert_eq!(ints(&series_mul(&a, &b)), [1, 0, -1, 0, 0]);

        let geometric = TruncatedSeries::from_i64(&[1; 9], 8);
        assert_eq!(ints(&series_mul(&geometric, &b.truncate(8))), [1, 0, 0, 0, 0]);
        assert_eq!(series_mul(&geometric, &TruncatedSeries::from_i64(&[1, -1], 8)), TruncatedSeries::one(8));

        let mut prod = TruncatedSeries::one(8);
        for j in 1..=8 {
            prod = series_mul(&prod, &series_inverse(&TruncatedSeries::binomial(j, -1, 8)).unwrap());
        }
        assert_eq!(ints(&prod), [1, 1, 2, 3, 5, 7, 11, 15, 22]);

        assert_eq!(ints(&series_inverse(&TruncatedSeries::from_i64(&[1, -1], 5)).unwrap()), [1; 6]);
        assert_eq!(series_inverse(&TruncatedSeries::one(3)).unwrap(), TruncatedSeries::one(3));
        assert_eq!(
            ints(&series_inverse(&TruncatedSeries::from_i64(&[1, -2], 5)).unwrap()),
            [1, 2, 4, 8, 16, 32]
        );
        let neg = TruncatedSeries::from_i64(&[-1, 3, 1], 6);
        assert_eq!(series_mul(&neg, &neg.inverse().unwrap()), TruncatedSeries::one(6));
        assert!(matches!(
            series_inverse(&TruncatedSeries::from_i64(&[2, 1], 3)),
            Err(Error::NonUnitConstant(_))
        ));
        assert!(series_inverse(&TruncatedSeries::from_i64(&[0, 1], 3)).is_err());
    }

    #[test]
    fn order_is_min_of_operands() {
        let a = TruncatedSeries::from_i64(&[1, 2, 3], 6);
        let b = TruncatedSeries::from_i64(&[1, 1], 3);
        assert_eq!(a.mul(&b).order(), 3);
        assert_eq!((&a + &b).order(), 3);
        assert_eq!((&b - &a).order(), 3);
    }

    #[test]
    fn named_generating_functions() {
        assert_eq!(ints(&partition_gf(4)), [1, 1, 2, 3, 5]);
        assert_eq!(ints(&partition_gf(0)), [1]);
        assert_eq!(partition_gf(20).coefficient(20), BigInt::from(627));
        assert_eq!(ints(&compositions_gf(4)), [0, 1, 2, 4, 8]);
        assert_eq!(compositions_gf(13).coefficient(13), BigInt::from(4096));
        assert_eq!(ints(&distinct_partitions_ell_gf(1, 5)), [0, 1, 1, 1, 1, 1]);
        assert_eq!(ints(&distinct_partitions_ell_gf(0, 3)), [1, 0, 0, 0]);
        assert_eq!(distinct_partitions_ell_gf(2, 8).coefficient(8), BigInt::from(3));
        assert_eq!(ints(&distinct_partitions_ell_gf(4, 5)), [0; 6]);
        assert_eq!(ints(&distinct_compositions_gf(6)), [1, 1, 1, 3, 3, 5, 11]);
    }

    #[test]
    fn euler_identities() {
        assert_eq!(odd_partitions_gf(40), distinct_partitions_gf(40));
        assert_eq!(series_mul(&partition_gf(40), &euler_product(40)), TruncatedSeries::one(40));
        // Pentagonal number theorem: nonzero coefficients of prod(1 - x^j)
        // sit at generalised pentagonal numbers.
        let e = euler_product(40);
        let support: Vec<usize> = (0..=40).filter(|&i| !e.coefficient(i).is_zero()).collect();
        assert_eq!(support, [0, 1, 2, 5, 7, 12, 15, 22, 26, 35, 40]);
    }

    #[test]
    fn display_is_tab_separated() {
        assert_eq!(compositions_gf(2).to_string(), "0\t0\n1\t1\n2\t2");
    }

    #[test]
    fn names_parse() {
        assert_eq!(NamedSeries::parse("distinct-partitions-ell-3").unwrap(), NamedSeries::DistinctPartitionsEll(3));
        assert!(NamedSeries::parse("fibonacci").is_err());
        assert_eq!(NamedSeries::parse("partitions").unwrap().build(4), partition_gf(4));
    }
}
