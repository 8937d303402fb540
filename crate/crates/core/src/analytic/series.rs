//! Convergent series for `p(n)` and `q(n)` with certified rounding.

use num_bigint::BigInt;

use super::bessel::bessel_i1;
use super::hpreal::{cosh_sinh, pi, HpReal, MIN_PRECISION};
use super::kloosterman::PhaseCache;
use super::report::{EvalOptions, SeriesEvalReport};
use crate::counting::BigCount;
use crate::error::{Error, Result};
use crate::par::map_range;

/// Which series to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// Rademacher series for unrestricted partitions.
    Partitions,
    /// Odd-modulus series for partitions into odd parts.
    OddPartitions,
}

/// Initial term budget, `ceil(8 sqrt n) + 16`.
pub fn default_k_terms(n: u64) -> u64 {
    let mut r = (n as f64).sqrt().floor() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    // ceil(8 sqrt n) = smallest c with c^2 >= 64 n.
    let mut c = 8 * r;
    while c * c < 64 * n {
        c += 1;
    }
    c + 16
}

/// Bits needed for `p(n)` from `log p(n) ~ pi sqrt(2n/3) - log(4 sqrt(3) n)`.
pub fn estimate_bits(n: u64) -> u32 {
    let n = n.max(1) as f64;
    let ln = std::f64::consts::PI * (2.0 * n / 3.0).sqrt() - (4.0 * 3f64.sqrt() * n).ln();
    (ln / std::f64::consts::LN_2).ceil().max(1.0) as u32
}

/// Initial precision, `max(128, estimate_bits(n) + 64)`.
pub fn default_precision(n: u64) -> u32 {
    (estimate_bits(n) + 64).max(128)
}

/// Reusable evaluator; keeps phase lists and cosine tables between calls.
#[derive(Debug, Default)]
pub struct SeriesEvaluator {
    cache: PhaseCache,
}

impl SeriesEvaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cache(cache: PhaseCache) -> Self {
        SeriesEvaluator { cache }
    }

    pub fn cache(&self) -> &PhaseCache {
        &self.cache
    }

    /// Terms `k = 1..=k_max` in ascending order, before the common factor.
    /// For the odd series, even `k` give zero.
    fn terms(&self, kind: SeriesKind, n: u64, k_max: u64, prec: u32, opts: &EvalOptions) -> Result<Vec<HpReal>> {
        let work = prec + 16 + (64 - k_max.leading_zeros());
        let consts = Constants::new(kind, n, work);
        map_range(opts.mode, 1..k_max + 1, |k| consts.term(&self.cache, k))
            .into_iter()
            .collect()
    }

    /// Partial sum over `k <= k_max` at `precision_bits`, uncertified.
    pub fn partial_sum(&self, kind: SeriesKind, n: u64, k_max: u64, precision_bits: u32, opts: &EvalOptions) -> Result<HpReal> {
        check_n(n)?;
        let prec = precision_bits.max(MIN_PRECISION);
        let terms = self.terms(kind, n, k_max.max(1), prec, opts)?;
        let consts = Constants::new(kind, n, prec + 16);
        Ok(consts.finish(&sum(&terms, prec + 16)).with_precision(prec))
    }

    /// Certified evaluation: sums to `K` and `2K`, accepts when both round to
    /// the same integer with residuals below `1/4` and differ by less than
    /// `1/8`; otherwise doubles `K` and the precision, up to
    /// `opts.max_escalations` times.
    pub fn evaluate(&self, kind: SeriesKind, n: u64, opts: &EvalOptions) -> Result<SeriesEvalReport> {
        check_n(n)?;
        let mut k_terms = opts.k_max.unwrap_or_else(|| default_k_terms(n)).max(1);
        let mut prec = opts.precision_bits.unwrap_or_else(|| default_precision(n)).max(MIN_PRECISION);
        let mut escalations = 0;
        loop {
            let report = self.attempt(kind, n, k_terms, prec, escalations, opts)?;
            if report.certified {
                return Ok(report);
            }
            if escalations >= opts.max_escalations {
                return Err(Error::NotCertified {
                    n,
                    k_terms,
                    precision_bits: prec,
                    residual: report.residual.to_sci_string(6),
                });
            }
            escalations += 1;
            k_terms *= 2;
            prec *= 2;
        }
    }

    fn attempt(&self, kind: SeriesKind, n: u64, k_terms: u64, prec: u32, escalations: u32, opts: &EvalOptions) -> Result<SeriesEvalReport> {
        let acc = prec + 16;
        let terms = self.terms(kind, n, 2 * k_terms, prec, opts)?;
        let consts = Constants::new(kind, n, acc);
        let (head, tail) = terms.split_at(k_terms as usize);
        let s_k = consts.finish(&sum(head, acc));
        let s_2k = s_k.add(&consts.finish(&sum(tail, acc)));

        let rounded = s_k.round_nearest();
        let residual = distance(&s_k, &rounded);
        let residual_2k = distance(&s_2k, &s_2k.round_nearest());
        let delta = s_2k.sub(&s_k).abs();
        let quarter = HpReal::one(acc).mul_pow2(-2);
        let eighth = HpReal::one(acc).mul_pow2(-3);
        let certified = residual.cmp_value(&quarter).is_lt()
            && residual_2k.cmp_value(&quarter).is_lt()
            && s_2k.round_nearest() == rounded
            && delta.cmp_value(&eighth).is_lt()
            && rounded >= BigInt::from(0);

        Ok(SeriesEvalReport {
            n,
            k_terms_used: k_terms,
            precision_bits: prec,
            raw_value: s_k.with_precision(prec),
            rounded: BigCount::try_from_bigint(&rounded).unwrap_or_else(|| BigCount::from(0u64)),
            residual: residual.with_precision(prec),
            certified,
            escalations,
            stability_delta: delta.with_precision(prec),
        })
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange { what: "n", detail: "series are evaluated for n >= 1".into() });
    }
    Ok(())
}

fn sum(terms: &[HpReal], prec: u32) -> HpReal {
    terms.iter().fold(HpReal::zero(prec), |acc, t| acc.add(t))
}

fn distance(x: &HpReal, to: &BigInt) -> HpReal {
    x.sub(&HpReal::from_int(to.clone(), x.precision())).abs()
}

/// Quantities shared by every term of one evaluation.
struct Constants {
    kind: SeriesKind,
    n: u64,
    prec: u32,
    pi: HpReal,
    /// `n - 1/24`; unused for odd partitions.
    m: HpReal,
    sqrt_m: HpReal,
    /// Argument at `k = 1`: `pi sqrt(2/3) sqrt(m)`, or `pi sqrt(48n + 2) / 12`.
    x1: HpReal,
}

impl Constants {
    fn new(kind: SeriesKind, n: u64, prec: u32) -> Constants {
        let pi = pi(prec);
        match kind {
            SeriesKind::Partitions => {
                let m = HpReal::from_ratio(&BigInt::from(24 * n as i128 - 1), &BigInt::from(24), prec);
                let sqrt_m = m.sqrt();
                let c = pi.mul(&HpReal::from_ratio(&BigInt::from(2), &BigInt::from(3), prec).sqrt());
                let x1 = c.mul(&sqrt_m);
                Constants { kind, n, prec, pi, m, sqrt_m, x1 }
            }
            SeriesKind::OddPartitions => {
                let x1 = pi.mul(&HpReal::from_u64(48 * n + 2, prec).sqrt()).div_int(12);
                let zero = HpReal::zero(prec);
                Constants { kind, n, prec, pi, m: zero.clone(), sqrt_m: zero, x1 }
            }
        }
    }

    fn term(&self, cache: &PhaseCache, k: u64) -> Result<HpReal> {
        let prec = self.prec;
        match self.kind {
            SeriesKind::Partitions => {
                let a = cache.kloosterman(k, self.n, prec)?;
                if a.is_zero() {
                    return Ok(a);
                }
                // D_k = (x cosh x - sinh x) / (2 m^(3/2)), x = pi sqrt(2/3) sqrt(m) / k.
                let x = self.x1.div_int(k as i64);
                let (ch, sh) = cosh_sinh(&x);
                let d = x.mul(&ch).sub(&sh).div(&self.m.mul(&self.sqrt_m).mul_pow2(1));
                let sqrt_k = HpReal::from_u64(k, prec).sqrt();
                Ok(sqrt_k.mul(&a).mul(&d))
            }
            SeriesKind::OddPartitions => {
                if k.is_multiple_of(2) {
                    return Ok(HpReal::zero(prec));
                }
                let b = cache.hagis_inner(k, self.n, prec)?;
                if b.is_zero() {
                    return Ok(b);
                }
                let z = self.x1.div_int(k as i64);
                Ok(b.mul(&bessel_i1(&z)).div_int(k as i64))
            }
        }
    }

    /// Applies the common factor to a sum of terms.
    fn finish(&self, s: &HpReal) -> HpReal {
        match self.kind {
            SeriesKind::Partitions => {
                let two = HpReal::from_u64(2, self.prec);
                s.div(&self.pi.mul(&two.sqrt()))
            }
            SeriesKind::OddPartitions => {
                let root = HpReal::from_u64(24 * self.n + 1, self.prec).sqrt();
                s.mul(&self.pi).div(&root)
            }
        }
    }
}

/// Shared evaluator for the free functions below.
fn shared() -> &'static SeriesEvaluator {
    static EVALUATOR: std::sync::OnceLock<SeriesEvaluator> = std::sync::OnceLock::new();
    EVALUATOR.get_or_init(SeriesEvaluator::new)
}

/// `p(n)` from the Rademacher series, certified.
pub fn rademacher_p(n: u64, opts: &EvalOptions) -> Result<SeriesEvalReport> {
    shared().evaluate(SeriesKind::Partitions, n, opts)
}

/// `q(n)`, partitions into odd parts, from its odd-modulus series, certified.
pub fn hagis_q(n: u64, opts: &EvalOptions) -> Result<SeriesEvalReport> {
    shared().evaluate(SeriesKind::OddPartitions, n, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{odd_partition_count, partition_count};

    #[test]
    fn budgets() {
        assert_eq!(default_k_terms(1), 24);
        assert_eq!(default_k_terms(4), 32);
        assert_eq!(default_k_terms(2), 16 + 12);
        assert_eq!(default_k_terms(100), 96);
        assert_eq!(default_precision(1), 128);
        // p(10000) has 106 decimal digits, about 352 bits.
        assert!((340..=360).contains(&estimate_bits(10_000)));
    }

    #[test]
    fn small_values() {
        let opts = EvalOptions::default();
        for (n, p) in [(1u64, 1u64), (2, 2), (4, 5), (10, 42)] {
            let r = rademacher_p(n, &opts).unwrap();
            assert!(r.certified);
            assert_eq!(r.rounded, BigCount::from(p), "p({n})");
        }
        for (n, q) in [(1u64, 1u64), (4, 2), (8, 6)] {
            let r = hagis_q(n, &opts).unwrap();
            assert!(r.certified);
            assert_eq!(r.rounded, BigCount::from(q), "q({n})");
        }
        assert!(rademacher_p(0, &opts).is_err());
    }

    #[test]
    fn hundred() {
        let opts = EvalOptions::default();
        assert_eq!(rademacher_p(100, &opts).unwrap().rounded, partition_count(100));
        assert_eq!(hagis_q(100, &opts).unwrap().rounded, odd_partition_count(100));
    }

    #[test]
    fn modes_agree_bit_for_bit() {
        let par = EvalOptions::default();
        let seq = EvalOptions { mode: crate::par::ExecMode::Sequential, ..EvalOptions::default() };
        let a = rademacher_p(77, &par).unwrap();
        let b = rademacher_p(77, &seq).unwrap();
        assert_eq!(a.raw_value.to_decimal_string(), b.raw_value.to_decimal_string());
    }

    #[test]
    fn tiny_budget_escalates() {
        let opts = EvalOptions { k_max: Some(1), ..EvalOptions::default() };
        let r = hagis_q(50, &opts).unwrap();
        assert!(r.escalations > 0);
        assert_eq!(r.rounded, odd_partition_count(50));
        let capped = EvalOptions { k_max: Some(1), max_escalations: 0, ..EvalOptions::default() };
        assert!(matches!(hagis_q(50, &capped), Err(Error::NotCertified { .. })));
    }
}
