//! Exact counters: `c(n) = 2^(n-1)`, Fibonacci numbers, Euler's pentagonal
//! recurrence for `p(n)`, the triangular-number recurrence for `q(n)`, and
//! the double-precision Binet evaluation with its roundoff report.

use std::fmt;
use std::ops::Deref;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

mod cache;

pub use cache::{load_table, read_table, save_table, write_table, TABLE_MAGIC};

/// Arbitrary-precision nonnegative count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn new(value: BigUint) -> Self {
        BigCount(value)
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.0.clone())
    }

    /// Fails for negative input.
    pub fn try_from_bigint(value: &BigInt) -> Option<Self> {
        value.to_biguint().map(BigCount)
    }
}

impl Deref for BigCount {
    type Target = BigUint;

    fn deref(&self) -> &BigUint {
        &self.0
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Serialised as a decimal string so that large counts survive JSON readers
/// with 64-bit floats.
impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

/// Number of compositions of `n`.
pub fn composition_count(n: u64) -> Result<BigCount> {
    if n < 1 {
        return Err(Error::IndexTooSmall { min: 1, got: n });
    }
    Ok(BigCount(BigUint::one() << (n - 1)))
}

/// `F_0 = 0`, `F_1 = 1`, `F_n = F_{n-1} + F_{n-2}`, iterated directly.
pub fn fibonacci(n: u64) -> BigCount {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    BigCount(a)
}

/// Number of compositions of `n` into odd parts, which is `F_n`.
pub fn odd_composition_count(n: u64) -> Result<BigCount> {
    if n < 1 {
        return Err(Error::IndexTooSmall { min: 1, got: n });
    }
    Ok(fibonacci(n))
}

/// Number of compositions of `n` with every part at least 2, which is
/// `F_{n-1}`.
pub fn min_part2_composition_count(n: u64) -> Result<BigCount> {
    if n < 1 {
        return Err(Error::IndexTooSmall { min: 1, got: n });
    }
    Ok(fibonacci(n - 1))
}

/// Number of partitions of `n` (pentagonal recurrence).
pub fn partition_count(n: u64) -> BigCount {
    let mut table = MemoTable::new(TableKind::Partitions);
    table.get(n)
}

/// Number of partitions of `n` into odd parts, equivalently into distinct
/// parts (triangular-number recurrence).
pub fn odd_partition_count(n: u64) -> BigCount {
    let mut table = MemoTable::new(TableKind::OddPartitions);
    table.get(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    /// `p(n)`.
    Partitions,
    /// `q(n)`.
    OddPartitions,
    Fibonacci,
}

impl TableKind {
    pub fn tag(self) -> &'static str {
        match self {
            TableKind::Partitions => "p",
            TableKind::OddPartitions => "q",
            TableKind::Fibonacci => "fib",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "p" => Some(TableKind::Partitions),
            "q" => Some(TableKind::OddPartitions),
            "fib" => Some(TableKind::Fibonacci),
            _ => None,
        }
    }
}

/// Generalised pentagonal offsets `j(3j-1)/2`, `j(3j+1)/2` with sign
/// `(-1)^(j-1)`, up to `limit`.
fn pentagonal_offsets(limit: u64) -> impl Iterator<Item = (u64, u64, bool)> {
    (1u64..)
        .map(|j| (j * (3 * j - 1) / 2, j * (3 * j + 1) / 2, j % 2 == 1))
        .take_while(move |&(lo, _, _)| lo <= limit)
}

/// Offsets `k(3k-1)`, `k(3k+1)` with sign `(-1)^k`, up to `limit`.
fn doubled_pentagonal_offsets(limit: u64) -> impl Iterator<Item = (u64, u64, bool)> {
    (1u64..)
        .map(|k| (k * (3 * k - 1), k * (3 * k + 1), k % 2 == 0))
        .take_while(move |&(lo, _, _)| lo <= limit)
}

pub fn is_triangular(n: u64) -> bool {
    let disc = 8 * n + 1;
    let r = num_integer::Roots::sqrt(&disc);
    r * r == disc
}

/// Which pair of shifts to use in the left side of the `q(n)` recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QShift {
    /// `q(n - k(3k-1)) + q(n - k(3k+1))`, the shifts that follow from the
    /// product `prod (1 - x^(2j))`.
    Doubled,
    /// `q(n - 3k + 1) + q(n - 3k - 1)`, a linear misreading of the
    /// offsets. Kept as a negative control.
    Linear,
}

/// Evaluates `q(n) + sum_k (-1)^k [q(n - s1(k)) + q(n - s2(k))]` for the
/// given table of values (entries beyond the table are treated as unknown
/// and must not be reached). The correct shifts give 1 at triangular `n`
/// and 0 elsewhere.
pub fn q_recurrence_residual(values: &[BigUint], n: u64, shift: QShift) -> BigInt {
    let at = |m: i64| -> BigInt {
        if m < 0 {
            BigInt::zero()
        } else {
            BigInt::from(values[m as usize].clone())
        }
    };
    let n_i = n as i64;
    let mut acc = at(n_i);
    for k in 1i64.. {
        let (s1, s2) = match shift {
            QShift::Doubled => (k * (3 * k - 1), k * (3 * k + 1)),
            QShift::Linear => (3 * k - 1, 3 * k + 1),
        };
        if n_i - s1.min(s2) < 0 {
            break;
        }
        let pair = at(n_i - s1) + at(n_i - s2);
        if k % 2 == 0 {
            acc += pair;
        } else {
            acc -= pair;
        }
    }
    acc
}

/// Monotonically growing cache of one sequence. `values[i]` is the `i`-th
/// term; extending is amortised over calls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoTable {
    kind: TableKind,
    values: Vec<BigUint>,
}

impl MemoTable {
    pub fn new(kind: TableKind) -> Self {
        let values = match kind {
            TableKind::Fibonacci => vec![BigUint::zero(), BigUint::one()],
            _ => vec![BigUint::one()],
        };
        MemoTable { kind, values }
    }

    pub(crate) fn from_values(kind: TableKind, values: Vec<BigUint>) -> Self {
        MemoTable { kind, values }
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// Largest index held.
    pub fn max_index(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn extend_to(&mut self, n: u64) {
        while self.max_index() < n {
            let value = self.recurrence_at(self.values.len() as u64);
            self.values.push(value);
        }
    }

    pub fn get(&mut self, n: u64) -> BigCount {
        self.extend_to(n);
        BigCount(self.values[n as usize].clone())
    }

    /// Value at `n` computed from the table entries below `n`.
    pub(crate) fn recurrence_at(&self, n: u64) -> BigUint {
        let v = &self.values;
        match self.kind {
            TableKind::Fibonacci => match n {
                0 => BigUint::zero(),
                1 => BigUint::one(),
                _ => &v[n as usize - 1] + &v[n as usize - 2],
            },
            TableKind::Partitions => {
                if n == 0 {
                    return BigUint::one();
                }
                let mut plus = BigUint::zero();
                let mut minus = BigUint::zero();
                for (lo, hi, positive) in pentagonal_offsets(n) {
                    let target = if positive { &mut plus } else { &mut minus };
                    *target += &v[(n - lo) as usize];
                    if hi <= n {
                        *target += &v[(n - hi) as usize];
                    }
                }
                plus - minus
            }
            TableKind::OddPartitions => {
                // q(n) = [n triangular] - sum_k (-1)^k [q(n - k(3k-1)) + q(n - k(3k+1))]
                let mut plus = if is_triangular(n) { BigUint::one() } else { BigUint::zero() };
                let mut minus = BigUint::zero();
                for (lo, hi, even_k) in doubled_pentagonal_offsets(n) {
                    let target = if even_k { &mut minus } else { &mut plus };
                    *target += &v[(n - lo) as usize];
                    if hi <= n {
                        *target += &v[(n - hi) as usize];
                    }
                }
                plus - minus
            }
        }
    }
}

/// Double-precision Binet evaluation next to the exact Fibonacci number.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinetReport {
    pub n: u64,
    pub float_estimate: f64,
    pub exact: BigCount,
    /// `|float_estimate - exact|`, computed exactly and then rounded to f64.
    pub abs_error: f64,
    pub round_correct: bool,
}

pub fn binet_float(n: u64) -> BinetReport {
    let exact = fibonacci(n);
    let sqrt5 = 5f64.sqrt();
    let n_i = n.min(i32::MAX as u64) as i32;
    let estimate = ((1.0 + sqrt5).powi(n_i) - (1.0 - sqrt5).powi(n_i)) / (2f64.powi(n_i) * sqrt5);

    let (abs_error, round_correct) = match BigRational::from_f64(estimate) {
        Some(est) if estimate.is_finite() => {
            let exact_q = BigRational::from_integer(exact.to_bigint());
            let err = (est.clone() - exact_q).abs();
            let rounded = BigInt::from_f64(estimate.round());
            (err.to_f64().unwrap_or(f64::INFINITY), rounded.as_ref() == Some(&exact.to_bigint()))
        }
        _ => (f64::INFINITY, false),
    };
    BinetReport { n, float_estimate: estimate, exact, abs_error, round_correct }
}

/// Smallest `n` in `0..=max_n` at which the double-precision Binet value
/// fails to round to `F_n`.
pub fn first_binet_failure(max_n: u64) -> Option<u64> {
    (0..=max_n).find(|&n| !binet_float(n).round_correct)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(composition_count(4).unwrap(), 8u64.into());
        assert_eq!(composition_count(1).unwrap(), 1u64.into());
        assert_eq!(composition_count(13).unwrap(), 4096u64.into());
        assert!(composition_count(0).is_err());
        assert_eq!(fibonacci(0), 0u64.into());
        assert_eq!(fibonacci(1), 1u64.into());
        assert_eq!(fibonacci(10), 55u64.into());
        assert_eq!(odd_composition_count(5).unwrap(), 5u64.into());
        assert_eq!(odd_composition_count(1).unwrap(), 1u64.into());
        assert_eq!(odd_composition_count(25).unwrap(), 75025u64.into());
        assert!(odd_composition_count(0).is_err());
        assert_eq!(min_part2_composition_count(1).unwrap(), 0u64.into());
        assert_eq!(min_part2_composition_count(6).unwrap(), 5u64.into());
    }

    #[test]
    fn recurrences() {
        assert_eq!(partition_count(4), 5u64.into());
        assert_eq!(partition_count(0), 1u64.into());
        assert_eq!(partition_count(20), 627u64.into());
        assert_eq!(partition_count(100), 190569292u64.into());
        assert_eq!(odd_partition_count(8), 6u64.into());
        assert_eq!(odd_partition_count(1), 1u64.into());
        assert_eq!(odd_partition_count(10), 10u64.into());
        assert_eq!(odd_partition_count(0), 1u64.into());
    }

    #[test]
    fn memo_table_grows_monotonically() {
        let mut t = MemoTable::new(TableKind::Fibonacci);
        assert_eq!(t.get(10), 55u64.into());
        let before = t.values()[..=10].to_vec();
        t.extend_to(50);
        assert_eq!(&t.values()[..=10], &before[..]);
        assert_eq!(t.max_index(), 50);
        t.extend_to(20);
        assert_eq!(t.max_index(), 50);
        assert_eq!(BigCount::from(t.values()[50].clone()), fibonacci(50));
    }

    #[test]
    fn triangular_numbers() {
        let tri: Vec<u64> = (0..30).filter(|&n| is_triangular(n)).collect();
        assert_eq!(tri, [0, 1, 3, 6, 10, 15, 21, 28]);
    }

    /// True q-values from the Euler product prod (1 + x^j), independent of
    /// the recurrence under test.
    fn q_by_product(max: usize) -> Vec<BigUint> {
        let mut q = vec![BigUint::zero(); max + 1];
        q[0] = BigUint::one();
        for j in 1..=max {
            for i in (j..=max).rev() {
                let add = q[i - j].clone();
                q[i] += add;
            }
        }
        q
    }

    #[test]
    fn corrected_q_shifts_have_triangular_residual() {
        let q = q_by_product(300);
        for n in 0..=300u64 {
            let expected = BigInt::from(u8::from(is_triangular(n)));
            assert_eq!(q_recurrence_residual(&q, n, QShift::Doubled), expected, "n = {n}");
        }
    }

    #[test]
    fn linear_q_shifts_first_fail_at_five() {
        let q = q_by_product(40);
        let failures: Vec<u64> = (0..=40)
            .filter(|&n| q_recurrence_residual(&q, n, QShift::Linear) != BigInt::from(u8::from(is_triangular(n))))
            .collect();
        assert_eq!(failures.first(), Some(&5));
        // q(5) - (q(3) + q(1)) + (q(0) + q(-2)) = 3 - 3 + 1
        assert_eq!(q_recurrence_residual(&q, 5, QShift::Linear), BigInt::one());
    }

    #[test]
    fn binet() {
        let r = binet_float(10);
        assert!((r.float_estimate - 55.0).abs() < 1e-6);
        assert!(r.round_correct);
        let zero = binet_float(0);
        assert_eq!((zero.float_estimate, zero.exact.clone()), (0.0, 0u64.into()));
        assert!((0..=30).all(|n| binet_float(n).round_correct));
        let first = first_binet_failure(100).expect("roundoff failure below 100");
        assert!(first > 30);
        assert!(!binet_float(first).round_correct);
        assert!(binet_float(first).abs_error >= 0.5);
        let huge = binet_float(2000);
        assert!(!huge.round_correct);
        assert!(huge.abs_error.is_infinite());
    }
}
