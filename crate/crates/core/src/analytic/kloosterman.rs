//! Exponential sums over reduced residues.
//!
//! `A_k(n) = sum_{0 <= h < k, (h,k)=1} exp(pi i (s(h,k) - 2nh/k))` and its odd
//! modulus analogue with `t(h, k)`. Every angle is `pi * J / (6k)` for an
//! integer `J`, because `6k s(h,k)` and `6k t(h,k)` are integers; the series
//! evaluator therefore reads cosines from a per-`k` table instead of running
//! a trig kernel per term. [`kloosterman_a`] is the direct route, used as
//! the reference.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use super::hpreal::{cos_sin_pi_fixed, HpComplex, HpReal, MIN_PRECISION};
use super::rational::{dedekind_sum, dedekind_sum_fast, hagis_t_fast, ExactRational};
use crate::error::{Error, Result};

/// `A_k(n)` evaluated term by term, each term as the product of the two
/// exponentials `exp(pi i s(h,k))` and `exp(-2 pi i n h / k)`. Returns the
/// real part after checking that the imaginary part is below
/// `2^(-precision_bits / 2)`.
pub fn kloosterman_a(k: u64, n: u64, precision_bits: u32) -> Result<HpReal> {
    if k == 0 {
        return Err(Error::OutOfRange { what: "modulus", detail: "k must be positive".into() });
    }
    let prec = precision_bits.max(MIN_PRECISION);
    let work = prec + 16;
    let mut acc = HpComplex::zero(work);
    for h in (0..k).filter(|h| h.gcd(&k) == 1) {
        let s = dedekind_sum(h, k)?;
        let first = HpComplex::exp_i_pi(s.numer(), s.denom(), work);
        let twist = ExactRational::new(BigInt::from(-2 * (n as i128 % k as i128) * h as i128), BigInt::from(k));
        let second = HpComplex::exp_i_pi(twist.numer(), twist.denom(), work);
        acc = acc.add(&first.mul(&second));
    }
    check_imaginary(&acc.im, k, n, precision_bits)?;
    Ok(acc.re.with_precision(prec))
}

fn check_imaginary(im: &HpReal, k: u64, n: u64, precision_bits: u32) -> Result<()> {
    let tol = (precision_bits / 2) as i64;
    match im.magnitude_bits() {
        Some(bits) if bits > -tol => Err(Error::ImaginaryResidue {
            k,
            n,
            magnitude: im.abs().to_sci_string(6),
            tolerance_bits: precision_bits / 2,
        }),
        _ => Ok(()),
    }
}

/// Which Dedekind-type sum supplies the phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseKind {
    /// `s(h, k)`, all `k`, `0 <= h < k`.
    Dedekind,
    /// `t(h, k)`, odd `k`; `h = 0` only for `k = 1`.
    Hagis,
}

/// Phase of one residue: `6k * sum`, which is an integer, or the exact
/// rational if it ever is not.
#[derive(Debug, Clone)]
enum Phase {
    Scaled(i64),
    Exact(Ratio<i128>),
}

#[derive(Debug)]
struct PhaseList {
    k: u64,
    entries: Vec<(u64, Phase)>,
}

impl PhaseList {
    fn build(kind: PhaseKind, k: u64) -> Result<PhaseList> {
        let mut entries = Vec::new();
        for h in (0..k).filter(|h| h.gcd(&k) == 1) {
            let value = match kind {
                PhaseKind::Dedekind => dedekind_sum_fast(h, k)?,
                PhaseKind::Hagis => hagis_t_fast(h, k)?,
            };
            let scaled = value * Ratio::from_integer(6 * k as i128);
            let phase = if scaled.is_integer() {
                Phase::Scaled(scaled.to_integer() as i64)
            } else {
                Phase::Exact(value)
            };
            entries.push((h, phase));
        }
        Ok(PhaseList { k, entries })
    }
}

/// `cos(pi j / (6k)) * 2^w` for `j = 0..=3k`.
#[derive(Debug)]
struct CosTable {
    w: u32,
    cos: Vec<BigInt>,
}

const ANCHOR_EVERY: u64 = 64;

impl CosTable {
    fn build(k: u64, w: u32) -> CosTable {
        let quarter = 3 * k;
        let den = BigInt::from(6 * k);
        let inner = w + 24;
        let (zc, zs) = cos_sin_pi_fixed(&BigInt::one(), &den, inner);
        let mut cos = Vec::with_capacity(quarter as usize + 1);
        let (mut c, mut s) = (BigInt::zero(), BigInt::zero());
        for j in 0..=quarter {
            if j % ANCHOR_EVERY == 0 {
                (c, s) = cos_sin_pi_fixed(&BigInt::from(j), &den, inner);
            } else {
                let nc = (&c * &zc - &s * &zs) >> inner as usize;
                let ns = (&c * &zs + &s * &zc) >> inner as usize;
                c = nc;
                s = ns;
            }
            cos.push(&c >> 24usize);
        }
        CosTable { w, cos }
    }

    /// `(cos, sin)(pi J / (6k)) * 2^w` for any integer `J`.
    fn lookup(&self, k: u64, j: i64) -> (&BigInt, &BigInt, bool, bool) {
        let quarter = 3 * k as i64;
        let j = j.rem_euclid(4 * quarter);
        let (quad, r) = (j / quarter, (j % quarter) as usize);
        let q = quarter as usize;
        let (c, s) = (&self.cos[r], &self.cos[q - r]);
        // Rotate (c, s) by quad quarter turns; flags mark negation.
        match quad {
            0 => (c, s, false, false),
            1 => (s, c, true, false),
            2 => (c, s, true, true),
            _ => (s, c, false, true),
        }
    }
}

/// Shared caches for repeated series evaluations: per-modulus phase lists
/// (independent of `n` and of precision) and cosine tables. Tables are
/// retained until `max_table_entries` is reached; past that they are built
/// per use and dropped.
#[derive(Debug)]
pub struct PhaseCache {
    phases: RwLock<HashMap<(PhaseKind, u64), Arc<PhaseList>>>,
    tables: RwLock<HashMap<u64, Arc<CosTable>>>,
    retained: AtomicUsize,
    max_table_entries: usize,
}

impl Default for PhaseCache {
    fn default() -> Self {
        PhaseCache::new(1 << 20)
    }
}

impl PhaseCache {
    pub fn new(max_table_entries: usize) -> Self {
        PhaseCache {
            phases: RwLock::new(HashMap::new()),
            tables: RwLock::new(HashMap::new()),
            retained: AtomicUsize::new(0),
            max_table_entries,
        }
    }

    fn phases(&self, kind: PhaseKind, k: u64) -> Result<Arc<PhaseList>> {
        if let Some(p) = self.phases.read().unwrap_or_else(|e| e.into_inner()).get(&(kind, k)) {
            return Ok(Arc::clone(p));
        }
        let built = Arc::new(PhaseList::build(kind, k)?);
        self.phases.write().unwrap_or_else(|e| e.into_inner()).insert((kind, k), Arc::clone(&built));
        Ok(built)
    }

    fn table(&self, k: u64, w: u32) -> Arc<CosTable> {
        if let Some(t) = self.tables.read().unwrap_or_else(|e| e.into_inner()).get(&k) {
            if t.w >= w {
                return Arc::clone(t);
            }
        }
        // Round the width up so nearby precisions share one table.
        let built = Arc::new(CosTable::build(k, w.div_ceil(64) * 64));
        let size = built.cos.len();
        if self.retained.load(Ordering::Relaxed) + size <= self.max_table_entries {
            let mut tables = self.tables.write().unwrap_or_else(|e| e.into_inner());
            let old = tables.insert(k, Arc::clone(&built)).map_or(0, |t| t.cos.len());
            self.retained.fetch_add(size, Ordering::Relaxed);
            self.retained.fetch_sub(old, Ordering::Relaxed);
        }
        built
    }

    /// Real and imaginary parts of the phase sum for modulus `k` at `n`,
    /// each with absolute error about `phi(k) * 2^-w`.
    pub fn phase_sum(&self, kind: PhaseKind, k: u64, n: u64, prec: u32) -> Result<(HpReal, HpReal)> {
        let list = self.phases(kind, k)?;
        debug_assert_eq!(list.k, k);
        let w = prec + 16;
        let needs_table = list.entries.iter().any(|(_, p)| matches!(p, Phase::Scaled(_)));
        let table = needs_table.then(|| self.table(k, w));

        let mut re = BigInt::zero();
        let mut im = BigInt::zero();
        let period = 12 * k as i128;
        let n_mod = (n as i128) % k as i128;
        for (h, phase) in &list.entries {
            match phase {
                Phase::Scaled(scaled) => {
                    let table = table.as_ref().expect("built when needed");
                    // angle / pi = (6k sum - 12 n h) / (6k)
                    let j = (*scaled as i128 - 12 * n_mod * *h as i128).rem_euclid(period) as i64;
                    let (c, s, neg_c, neg_s) = table.lookup(k, j);
                    let shift = (table.w - w) as usize;
                    if neg_c {
                        re -= c >> shift;
                    } else {
                        re += c >> shift;
                    }
                    if neg_s {
                        im -= s >> shift;
                    } else {
                        im += s >> shift;
                    }
                }
                Phase::Exact(value) => {
                    let angle = *value - Ratio::new(2 * n_mod * *h as i128, k as i128);
                    let (c, s) = cos_sin_pi_fixed(&BigInt::from(*angle.numer()), &BigInt::from(*angle.denom()), w);
                    re += c;
                    im += s;
                }
            }
        }
        Ok((HpReal::from_fixed(re, w, prec), HpReal::from_fixed(im, w, prec)))
    }

    /// `A_k(n)`, with the same imaginary-part check as [`kloosterman_a`].
    pub fn kloosterman(&self, k: u64, n: u64, precision_bits: u32) -> Result<HpReal> {
        let prec = precision_bits.max(MIN_PRECISION);
        let (re, im) = self.phase_sum(PhaseKind::Dedekind, k, n, prec + 16)?;
        check_imaginary(&im, k, n, precision_bits)?;
        Ok(re.with_precision(prec))
    }

    /// Inner sum of the odd-modulus series: over `1 <= h < k` coprime to
    /// `k`, except that `k = 1` contributes its single residue `h = 0`.
    pub fn hagis_inner(&self, k: u64, n: u64, precision_bits: u32) -> Result<HpReal> {
        if k.is_multiple_of(2) {
            return Err(Error::EvenModulus(k));
        }
        let prec = precision_bits.max(MIN_PRECISION);
        let (re, im) = self.phase_sum(PhaseKind::Hagis, k, n, prec + 16)?;
        check_imaginary(&im, k, n, precision_bits)?;
        Ok(re.with_precision(prec))
    }

    pub fn retained_table_entries(&self) -> usize {
        self.retained.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Single combined angle per residue, in high precision, with the
    /// rationals formed from the literal sawtooth definition.
    fn a_by_combined_angle(k: u64, n: u64, prec: u32) -> (HpReal, HpReal) {
        let mut re = HpReal::zero(prec);
        let mut im = HpReal::zero(prec);
        for h in (0..k).filter(|h| h.gcd(&k) == 1) {
            let angle = dedekind_sum(h, k).unwrap()
                - ExactRational::new(BigInt::from(2 * n * h), BigInt::from(k));
            let z = HpComplex::exp_i_pi(angle.numer(), angle.denom(), prec);
            re = re.add(&z.re);
            im = im.add(&z.im);
        }
        (re, im)
    }

    fn close(a: &HpReal, b: &HpReal, bits: i64) -> bool {
        a.sub(b).magnitude_bits().is_none_or(|m| m < -bits)
    }

    #[test]
    fn small_moduli() {
        for n in 0..12 {
            assert_eq!(kloosterman_a(1, n, 128).unwrap().round_nearest(), BigInt::one());
            let a2 = kloosterman_a(2, n, 128).unwrap();
            assert_eq!(a2.round_nearest(), BigInt::from(if n % 2 == 0 { 1 } else { -1 }));
            assert!(close(&a2, &HpReal::from_i64(if n % 2 == 0 { 1 } else { -1 }, 128), 120));
        }
    }

    #[test]
    fn a3_at_5_matches_combined_evaluation() {
        let direct = kloosterman_a(3, 5, 256).unwrap();
        let (re, im) = a_by_combined_angle(3, 5, 320);
        assert!(close(&direct, &re, 240));
        assert!(im.magnitude_bits().is_none_or(|m| m < -250));
        let cached = PhaseCache::default().kloosterman(3, 5, 256).unwrap();
        assert!(close(&cached, &re, 240));
    }

    #[test]
    fn table_route_matches_direct_route() {
        let cache = PhaseCache::default();
        for k in 1..=40 {
            for n in [0, 1, 2, 7, 13, 50] {
                let direct = kloosterman_a(k, n, 160).unwrap();
                let cached = cache.kloosterman(k, n, 160).unwrap();
                assert!(close(&direct, &cached, 150), "A_{k}({n})");
            }
        }
    }

    #[test]
    fn imaginary_parts_vanish() {
        let cache = PhaseCache::default();
        for k in 1..=50 {
            for n in 0..=50 {
                cache.kloosterman(k, n, 128).unwrap();
                if k % 2 == 1 {
                    cache.hagis_inner(k, n, 128).unwrap();
                }
            }
        }
    }

    #[test]
    fn hagis_inner_small_cases() {
        let cache = PhaseCache::default();
        // k = 1: single residue h = 0 with t(0, 1) = 0.
        assert_eq!(cache.hagis_inner(1, 9, 128).unwrap().round_nearest(), BigInt::one());
        // k = 3: 2 cos(pi (1/9 - 2n/3)).
        for n in 0..6u64 {
            let got = cache.hagis_inner(3, n, 128).unwrap().to_f64();
            let angle = std::f64::consts::PI * (1.0 / 9.0 - 2.0 * n as f64 / 3.0);
            assert!((got - 2.0 * angle.cos()).abs() < 1e-14, "n = {n}");
        }
        assert_eq!(cache.hagis_inner(4, 1, 128), Err(Error::EvenModulus(4)));
    }

    #[test]
    fn table_retention_is_bounded() {
        let cache = PhaseCache::new(100);
        for k in 1..=20 {
            cache.kloosterman(k, 3, 96).unwrap();
        }
        assert!(cache.retained_table_entries() <= 100);
        // Reuse at a higher precision rebuilds rather than downgrading.
        let low = cache.kloosterman(7, 2, 96).unwrap();
        let high = cache.kloosterman(7, 2, 300).unwrap();
        assert_eq!(high.precision(), 300);
        assert!(close(&low, &high, 90));
    }
}
