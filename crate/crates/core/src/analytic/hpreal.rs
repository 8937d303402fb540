//! Binary floating point with a big-integer mantissa.
//!
//! A value is `mant * 2^exp` with `|mant| < 2^prec`; results are rounded to
//! nearest and carry the smaller precision of their operands. Transcendental
//! kernels work in fixed point with guard bits and round once at the end.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Smallest precision accepted anywhere in the analytic layer.
pub const MIN_PRECISION: u32 = 64;

const GUARD: u32 = 32;

#[derive(Clone, Debug)]
pub struct HpReal {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn bit_len(m: &BigInt) -> u64 {
    m.bits()
}

/// `m / 2^s` rounded to nearest, ties away from zero.
fn shift_round(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let half = BigInt::one() << (s - 1);
    let mag = (m.magnitude().clone() + half.magnitude()) >> s;
    BigInt::from_biguint(m.sign(), mag)
}

impl HpReal {
    fn normalized(mant: BigInt, exp: i64, prec: u32) -> HpReal {
        if mant.is_zero() {
            return HpReal { mant, exp: 0, prec };
        }
        let bits = bit_len(&mant);
        if bits <= prec as u64 {
            return HpReal { mant, exp, prec };
        }
        let s = bits - prec as u64;
        let mut m = shift_round(&mant, s);
        let mut e = exp + s as i64;
        if bit_len(&m) > prec as u64 {
            // Carry produced a power of two; dropping one bit is exact.
            m >>= 1;
            e += 1;
        }
        HpReal { mant: m, exp: e, prec }
    }

    pub fn zero(prec: u32) -> HpReal {
        HpReal { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn one(prec: u32) -> HpReal {
        HpReal::from_int(BigInt::one(), prec)
    }

    pub fn from_int(v: BigInt, prec: u32) -> HpReal {
        HpReal::normalized(v, 0, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> HpReal {
        HpReal::from_int(BigInt::from(v), prec)
    }

    pub fn from_u64(v: u64, prec: u32) -> HpReal {
        HpReal::from_int(BigInt::from(v), prec)
    }

    /// `num / den`, correctly rounded up to a final rounding step.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> HpReal {
        HpReal::from_int(num.clone(), prec + GUARD).div(&HpReal::from_int(den.clone(), prec + GUARD)).with_precision(prec)
    }

    /// Fixed-point value `v / 2^frac_bits`.
    pub fn from_fixed(v: BigInt, frac_bits: u32, prec: u32) -> HpReal {
        HpReal::normalized(v, -(frac_bits as i64), prec)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64, prec: u32) -> HpReal {
        assert!(x.is_finite(), "non-finite input");
        if x == 0.0 {
            return HpReal::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), raw_exp - 1075) };
        HpReal::normalized(BigInt::from(m) * sign, e, prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Re-rounds to `prec` bits (exact when widening).
    pub fn with_precision(&self, prec: u32) -> HpReal {
        HpReal::normalized(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn neg(&self) -> HpReal {
        HpReal { mant: -&self.mant, exp: self.exp, prec: self.prec }
    }

    pub fn abs(&self) -> HpReal {
        HpReal { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> HpReal {
        if self.is_zero() {
            return self.clone();
        }
        HpReal { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    /// `floor(log2 |x|) + 1`, or `None` for zero.
    pub fn magnitude_bits(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.exp + bit_len(&self.mant) as i64)
    }

    pub fn add(&self, other: &HpReal) -> HpReal {
        let prec = self.prec.min(other.prec);
        match (self.magnitude_bits(), other.magnitude_bits()) {
            (None, _) => return other.with_precision(prec),
            (_, None) => return self.with_precision(prec),
            (Some(ta), Some(tb)) => {
                let gap = prec as i64 + 3;
                if ta > tb + gap {
                    return self.with_precision(prec);
                }
                if tb > ta + gap {
                    return other.with_precision(prec);
                }
            }
        }
        let e = self.exp.min(other.exp);
        let m = (&self.mant << (self.exp - e) as usize) + (&other.mant << (other.exp - e) as usize);
        HpReal::normalized(m, e, prec)
    }

    pub fn sub(&self, other: &HpReal) -> HpReal {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &HpReal) -> HpReal {
        HpReal::normalized(&self.mant * &other.mant, self.exp + other.exp, self.prec.min(other.prec))
    }

    pub fn mul_int(&self, k: i64) -> HpReal {
        HpReal::normalized(&self.mant * k, self.exp, self.prec)
    }

    /// Panics on division by zero.
    pub fn div(&self, other: &HpReal) -> HpReal {
        assert!(!other.is_zero(), "division by zero");
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            return HpReal::zero(prec);
        }
        let want = prec as i64 + 2 + bit_len(&other.mant) as i64 - bit_len(&self.mant) as i64;
        let s = want.max(0) as usize;
        let (q, r) = (&self.mant << s).div_rem(&other.mant);
        // Sticky bit keeps round-to-nearest honest.
        let q = if r.is_zero() { q << 1 } else { (q << 1) + q_sign(&self.mant, &other.mant) };
        HpReal::normalized(q, self.exp - other.exp - s as i64 - 1, prec)
    }

    pub fn div_int(&self, k: i64) -> HpReal {
        self.div(&HpReal::from_i64(k, self.prec))
    }

    /// Panics on negative input.
    pub fn sqrt(&self) -> HpReal {
        assert!(!self.is_negative(), "square root of a negative number");
        if self.is_zero() {
            return self.clone();
        }
        let target = 2 * (self.prec as i64 + 2);
        let mut s = (target - bit_len(&self.mant) as i64).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let shifted = self.mant.magnitude() << s as usize;
        let root = BigInt::from_biguint(Sign::Plus, shifted.sqrt());
        HpReal::normalized(root, (self.exp - s) / 2, self.prec)
    }

    /// Exact comparison.
    pub fn cmp_value(&self, other: &HpReal) -> Ordering {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }

    /// Nearest integer, ties away from zero. Exact.
    pub fn round_nearest(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << self.exp as usize;
        }
        shift_round(&self.mant, (-self.exp) as u64)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << self.exp as usize;
        }
        let den = BigInt::one() << (-self.exp) as usize;
        self.mant.div_floor(&den)
    }

    pub fn to_f64(&self) -> f64 {
        let Some(top) = self.magnitude_bits() else {
            return 0.0;
        };
        // Keep 64 significant bits, then scale.
        let keep = bit_len(&self.mant).min(64);
        let drop = bit_len(&self.mant) - keep;
        let head = (&self.mant >> drop as usize).to_f64().unwrap_or(0.0);
        let scale = self.exp + drop as i64;
        if top > 1100 {
            return if self.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if scale < -1200 {
            return 0.0;
        }
        head * 2f64.powi(scale as i32)
    }

    /// Fixed notation rounded to `frac_digits` decimal places.
    pub fn to_fixed_string(&self, frac_digits: usize) -> String {
        let scaled = if self.exp >= 0 {
            (self.mant.abs() << self.exp as usize) * BigInt::from(10u32).pow(frac_digits as u32)
        } else {
            shift_round(&(self.mant.abs() * BigInt::from(10u32).pow(frac_digits as u32)), (-self.exp) as u64)
        };
        let mut digits = scaled.to_string();
        if digits.len() <= frac_digits {
            digits = format!("{}{digits}", "0".repeat(frac_digits + 1 - digits.len()));
        }
        let split = digits.len() - frac_digits;
        let sign = if self.is_negative() && !scaled.is_zero() { "-" } else { "" };
        if frac_digits == 0 {
            format!("{sign}{digits}")
        } else {
            format!("{sign}{}.{}", &digits[..split], &digits[split..])
        }
    }

    /// Decimal places carried by the precision: enough that the printed
    /// value pins down the stored one.
    pub fn full_precision_digits(&self) -> usize {
        let int_bits = self.magnitude_bits().unwrap_or(0).max(0);
        let frac_bits = (self.prec as i64 - int_bits).max(0);
        (frac_bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
    }

    pub fn to_decimal_string(&self) -> String {
        self.to_fixed_string(self.full_precision_digits())
    }

    /// Scientific notation with `sig` significant digits.
    pub fn to_sci_string(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let approx = self.to_f64();
        let est = if approx.is_finite() && approx != 0.0 {
            approx.abs().log10().floor() as i64
        } else {
            ((self.magnitude_bits().unwrap_or(0) - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64
        };
        // Shift so that |x| * 10^(sig-1-est) has `sig` integer digits.
        let p = sig as i64 - 1 - est;
        let ten = HpReal::from_u64(10, self.prec + GUARD);
        let mut scaled = self.abs().with_precision(self.prec + GUARD);
        for _ in 0..p.unsigned_abs() {
            scaled = if p > 0 { scaled.mul(&ten) } else { scaled.div(&ten) };
        }
        let mut digits = scaled.round_nearest().to_string();
        let mut exp10 = est;
        if digits.len() > sig {
            digits.truncate(sig);
            exp10 += 1;
        }
        let sign = if self.is_negative() { "-" } else { "" };
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{exp10}")
        } else {
            format!("{sign}{head}.{tail}e{exp10}")
        }
    }
}

fn q_sign(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_negative() != b.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

/// Fixed-point `x * 2^w` for a value already scaled to `|x| < 2^8`.
fn to_fixed(x: &HpReal, w: u32) -> BigInt {
    let shift = x.exp + w as i64;
    if shift >= 0 {
        &x.mant << shift as usize
    } else {
        shift_round(&x.mant, (-shift) as u64)
    }
}

/// `atan(1/x) * 2^w` by its alternating series.
fn atan_inv_fixed(x: u64, w: u32) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut power = (BigInt::one() << w as usize) / x;
    let mut sum = power.clone();
    let mut i = 1u64;
    while !power.is_zero() {
        power /= &x2;
        let term = &power / (2 * i + 1);
        if i % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        i += 1;
    }
    sum
}

static PI_CACHE: Mutex<Option<HpReal>> = Mutex::new(None);

/// `pi` to `prec` bits (Machin's formula, cached at the widest precision
/// requested so far).
pub fn pi(prec: u32) -> HpReal {
    let mut cache = PI_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(p) = cache.as_ref() {
        if p.prec >= prec + 8 {
            return p.with_precision(prec);
        }
    }
    let work = prec + 8;
    let w = work + GUARD;
    let fixed = atan_inv_fixed(5, w) * 16 - atan_inv_fixed(239, w) * 4;
    let value = HpReal::from_fixed(fixed, w, work);
    *cache = Some(value.clone());
    value.with_precision(prec)
}

/// `e^x`.
pub fn exp(x: &HpReal) -> HpReal {
    let prec = x.prec;
    if x.is_zero() {
        return HpReal::one(prec);
    }
    if x.is_negative() {
        return HpReal::one(prec + GUARD).div(&exp(&x.abs().with_precision(prec + GUARD))).with_precision(prec);
    }
    let top = x.magnitude_bits().expect("nonzero");
    let halvings = (top + 8).max(0) as u32;
    let w = prec + halvings + GUARD;
    let y = to_fixed(&x.mul_pow2(-(halvings as i64)), w);
    let unit = BigInt::one() << w as usize;
    let mut sum = unit.clone();
    let mut term = unit;
    let mut i = 1u64;
    loop {
        term = ((&term * &y) >> w as usize) / i;
        if term.is_zero() {
            break;
        }
        sum += &term;
        i += 1;
    }
    for _ in 0..halvings {
        sum = (&sum * &sum) >> w as usize;
    }
    HpReal::from_fixed(sum, w, prec)
}

/// `(cosh x, sinh x)`.
pub fn cosh_sinh(x: &HpReal) -> (HpReal, HpReal) {
    let prec = x.prec;
    let e = exp(&x.with_precision(prec + GUARD));
    let inv = HpReal::one(prec + GUARD).div(&e);
    (e.add(&inv).mul_pow2(-1).with_precision(prec), e.sub(&inv).mul_pow2(-1).with_precision(prec))
}

/// `(cos x, sin x) * 2^w` for `0 <= x <= 1`, by Taylor series.
fn cos_sin_fixed(x: &HpReal, w: u32) -> (BigInt, BigInt) {
    let y = to_fixed(x, w);
    let unit = BigInt::one() << w as usize;
    let mut cos = unit.clone();
    let mut sin = y.clone();
    let mut term = y.clone();
    let mut k = 2u64;
    loop {
        term = ((&term * &y) >> w as usize) / k;
        if term.is_zero() {
            break;
        }
        // term = y^k / k!
        match k % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        k += 1;
    }
    (cos, sin)
}

/// `(cos(pi a/b), sin(pi a/b)) * 2^w`, with the angle reduced exactly to
/// the first octant before any rounding happens.
pub(crate) fn cos_sin_pi_fixed(a: &BigInt, b: &BigInt, w: u32) -> (BigInt, BigInt) {
    assert!(b.is_positive(), "denominator must be positive");
    let two_b: BigInt = b * 2;
    let r = a.mod_floor(&two_b);
    // Quadrant index and remainder: angle = pi*(quad/2 + rem/(2b)).
    let (quad, rem) = (&r * BigInt::from(2)).div_rem(b);
    let quad = quad.to_u8().expect("quadrant in 0..4");
    let (small, swapped) = if &rem * 2 > *b { (b - &rem, true) } else { (rem, false) };
    let work = w + GUARD;
    let x = pi(work).mul(&HpReal::from_int(small, work)).div(&HpReal::from_int(two_b, work));
    let (c, s) = cos_sin_fixed(&x, work);
    let (c, s) = if swapped { (s, c) } else { (c, s) };
    let (c, s) = match quad {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    };
    (shift_round(&c, GUARD as u64), shift_round(&s, GUARD as u64))
}

/// `(cos(pi a/b), sin(pi a/b))`.
pub fn cos_sin_pi(a: &BigInt, b: &BigInt, prec: u32) -> (HpReal, HpReal) {
    let w = prec + 8;
    let (c, s) = cos_sin_pi_fixed(a, b, w);
    (HpReal::from_fixed(c, w, prec), HpReal::from_fixed(s, w, prec))
}

/// Pair arithmetic for the complex exponentials in the Kloosterman sums.
#[derive(Clone, Debug, PartialEq)]
pub struct HpComplex {
    pub re: HpReal,
    pub im: HpReal,
}

impl HpComplex {
    pub fn zero(prec: u32) -> Self {
        HpComplex { re: HpReal::zero(prec), im: HpReal::zero(prec) }
    }

    /// `exp(i pi a/b)`.
    pub fn exp_i_pi(a: &BigInt, b: &BigInt, prec: u32) -> Self {
        let (re, im) = cos_sin_pi(a, b, prec);
        HpComplex { re, im }
    }

    pub fn add(&self, o: &Self) -> Self {
        HpComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        HpComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
}
