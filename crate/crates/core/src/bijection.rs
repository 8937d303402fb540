//! Compositions of `n` into odd parts versus compositions of `n + 1` into
//! parts greater than one.
//!
//! Forward: conjugate `a` to `a'` (which has an odd number of parts, every
//! even-indexed one equal to 1), sum adjacent pairs `b_i = a'_{2i-1} + a'_{2i}`
//! carrying the final part of `a'` over unpaired, then add one to the last
//! part of `b`. Inverse: subtract one from the last part, split every other
//! part `j` into `j - 1, 1`, and conjugate.

use std::fmt;

use serde::Serialize;

use crate::composition::Composition;
use crate::error::{Error, Result};

/// The four compositions visited by the map, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectionTrace {
    /// Odd-part composition of `n`.
    pub a: Composition,
    /// Conjugate of `a`.
    pub a_conj: Composition,
    /// Pair sums of `a_conj`; a composition of `n` whose parts other than the
    /// last are at least 2.
    pub b: Composition,
    /// `b` with its last part increased by one; a composition of `n + 1`.
    pub c: Composition,
}

impl fmt::Display for BijectionTrace {
    /// One `label<TAB>composition` line per stage.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "a\t{}", self.a)?;
        writeln!(f, "a'\t{}", self.a_conj)?;
        writeln!(f, "b\t{}", self.b)?;
        write!(f, "c\t{}", self.c)
    }
}

fn check_odd(a: &Composition) -> Result<()> {
    match a.parts().iter().position(|p| p % 2 == 0) {
        Some(i) => Err(Error::EvenPart { index: i + 1, value: a.parts()[i] }),
        None => Ok(()),
    }
}

fn check_gt1(c: &Composition) -> Result<()> {
    match c.parts().iter().position(|&p| p == 1) {
        Some(i) => Err(Error::UnitPart { index: i + 1 }),
        None => Ok(()),
    }
}

pub fn trace_forward(a: &Composition) -> Result<BijectionTrace> {
    check_odd(a)?;
    let a_conj = a.conjugate();
    let conj = a_conj.parts();
    debug_assert!(conj.len() % 2 == 1);

    let pairs = conj.len() / 2;
    let mut b = Vec::with_capacity(pairs + 1);
    for i in 0..pairs {
        b.push(conj[2 * i] + conj[2 * i + 1]);
    }
    b.push(conj[conj.len() - 1]);

    let mut c = b.clone();
    *c.last_mut().expect("nonempty") += 1;

    Ok(BijectionTrace {
        a: a.clone(),
        a_conj,
        b: Composition::from_parts_unchecked(b),
        c: Composition::from_parts_unchecked(c),
    })
}

/// Maps an odd-part composition of `n` to a composition of `n + 1` with every
/// part at least 2.
pub fn odd_to_gt1(a: &Composition) -> Result<Composition> {
    trace_forward(a).map(|t| t.c)
}

/// Runs the inverse map and records the same four stages as
/// [`trace_forward`], so `trace_inverse(&odd_to_gt1(a)?)? == trace_forward(a)?`.
pub fn trace_inverse(c: &Composition) -> Result<BijectionTrace> {
    check_gt1(c)?;
    let parts = c.parts();

    let mut b = parts.to_vec();
    // The last part is at least 2, so b's last part stays positive. It is
    // the final part of a' and is never split.
    *b.last_mut().expect("nonempty") -= 1;

    let mut a_conj = Vec::with_capacity(2 * b.len() - 1);
    for &j in &b[..b.len() - 1] {
        a_conj.push(j - 1);
        a_conj.push(1);
    }
    a_conj.push(b[b.len() - 1]);

    let a_conj = Composition::from_parts_unchecked(a_conj);
    let a = a_conj.conjugate();
    Ok(BijectionTrace { a, a_conj, b: Composition::from_parts_unchecked(b), c: c.clone() })
}

/// Maps a composition of `n + 1` with every part at least 2 back to an
/// odd-part composition of `n`.
pub fn gt1_to_odd(c: &Composition) -> Result<Composition> {
    trace_inverse(c).map(|t| t.a)
}
