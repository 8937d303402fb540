//! Composition and partition values, the MacMahon bit-sequence codec and
//! conjugation.
//!
//! A composition of `n` with `ell` parts is drawn as `n` unit lengths with a
//! node between consecutive parts. Reading the `n - 1` gaps left to right and
//! writing `1` where a node sits gives the bit sequence; gap `i` (0-based)
//! lies between unit `i` and unit `i + 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Unit-length glyph used by [`Composition::render_graph`].
pub const GRAPH_UNIT: char = '\u{2212}';
/// Node glyph used by [`Composition::render_graph`].
pub const GRAPH_NODE: char = '\u{00B7}';

/// An ordered sequence of positive parts. Always nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<u64>,
    n: u64,
}

impl Composition {
    /// Validates `parts` and computes the sum.
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyComposition);
        }
        if let Some(index) = parts.iter().position(|&p| p == 0) {
            return Err(Error::NonPositivePart { index: index + 1, value: 0 });
        }
        let n = parts.iter().sum();
        Ok(Composition { parts, n })
    }

    /// Accepts signed input so that nonpositive parts can be reported rather
    /// than rejected by the type system.
    pub fn from_signed(parts: &[i64]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyComposition);
        }
        let mut out = Vec::with_capacity(parts.len());
        for (i, &p) in parts.iter().enumerate() {
            if p < 1 {
                return Err(Error::NonPositivePart { index: i + 1, value: p });
            }
            out.push(p as u64);
        }
        Composition::new(out)
    }

    /// Callers guarantee a nonempty sequence of positive parts.
    pub(crate) fn from_parts_unchecked(parts: Vec<u64>) -> Self {
        debug_assert!(!parts.is_empty() && parts.iter().all(|&p| p > 0));
        let n = parts.iter().sum();
        Composition { parts, n }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<u64> {
        self.parts
    }

    /// The integer being composed.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Always false; a composition has at least one part.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> u64 {
        *self.parts.last().expect("composition is nonempty")
    }

    pub fn all_odd(&self) -> bool {
        self.parts.iter().all(|p| p % 2 == 1)
    }

    pub fn min_part(&self) -> u64 {
        *self.parts.iter().min().expect("composition is nonempty")
    }

    pub fn to_bitseq(&self) -> BitSeq {
        let mut bits = Vec::with_capacity(self.n as usize - 1);
        let last = self.parts.len() - 1;
        for (i, &p) in self.parts.iter().enumerate() {
            bits.extend(std::iter::repeat_n(false, p as usize - 1));
            if i != last {
                bits.push(true);
            }
        }
        BitSeq(bits)
    }

    /// Inverse of [`Composition::to_bitseq`]; a sequence of length `L`
    /// decodes to a composition of `L + 1`.
    pub fn from_bitseq(bits: &BitSeq) -> Composition {
        let mut parts = Vec::with_capacity(bits.count_ones() + 1);
        let mut run = 1;
        for &b in &bits.0 {
            if b {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        parts.push(run);
        Composition::from_parts_unchecked(parts)
    }

    /// The composition whose bit sequence is the complement of this one's.
    /// It has `n - ell + 1` parts.
    pub fn conjugate(&self) -> Composition {
        Composition::from_bitseq(&self.to_bitseq().complement())
    }

    pub fn render_graph(&self) -> String {
        let mut out = String::new();
        for (i, &p) in self.parts.iter().enumerate() {
            if i > 0 {
                out.push(GRAPH_NODE);
            }
            out.extend(std::iter::repeat_n(GRAPH_UNIT, p as usize));
        }
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_plus_joined(f, &self.parts)
    }
}

/// Parses the canonical `a1+a2+...` form. Whitespace, signs and empty parts
/// are rejected.
impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = parse_plus_joined(s, "composition")?;
        if parts.is_empty() {
            return Err(Error::EmptyComposition);
        }
        Composition::new(parts)
    }
}

impl Serialize for Composition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// MacMahon bit sequence. Bit `i` is set iff a node separates units `i` and
/// `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSeq(Vec<bool>);

impl BitSeq {
    pub fn new(bits: Vec<bool>) -> Self {
        BitSeq(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> BitSeq {
        BitSeq(self.0.iter().map(|b| !b).collect())
    }

    /// Lengths of the maximal runs of `value`.
    pub fn runs_of(&self, value: bool) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut current = 0;
        for &b in &self.0 {
            if b == value {
                current += 1;
            } else if current > 0 {
                runs.push(current);
                current = 0;
            }
        }
        if current > 0 {
            runs.push(current);
        }
        runs
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    what: "bit sequence",
                    detail: format!("unexpected character {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitSeq)
    }
}

/// Weakly decreasing parts. The empty partition of 0 is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u64>,
    n: u64,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        for (i, &p) in parts.iter().enumerate() {
            if p == 0 {
                return Err(Error::NonPositivePart { index: i + 1, value: 0 });
            }
            if i > 0 && p > parts[i - 1] {
                return Err(Error::NotDecreasing { index: i + 1, value: p, previous: parts[i - 1] });
            }
        }
        let n = parts.iter().sum();
        Ok(Partition { parts, n })
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<u64>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        let n = parts.iter().sum();
        Partition { parts, n }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// The empty partition prints as `0`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        write_plus_joined(f, &self.parts)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "0" {
            return Ok(Partition::default());
        }
        Partition::new(parse_plus_joined(s, "partition")?)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn write_plus_joined(f: &mut fmt::Formatter<'_>, parts: &[u64]) -> fmt::Result {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str("+")?;
        }
        write!(f, "{p}")?;
    }
    Ok(())
}

fn parse_plus_joined(s: &str, what: &'static str) -> Result<Vec<u64>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('+')
        .enumerate()
        .map(|(i, tok)| {
            if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse { what, detail: format!("part {} is {tok:?}", i + 1) });
            }
            tok.parse::<u64>().map_err(|e| Error::Parse { what, detail: e.to_string() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn make_composition() {
        let x = Composition::new(vec![2, 4, 1, 1, 5]).unwrap();
        assert_eq!((x.n(), x.len()), (13, 5));
        let single = Composition::new(vec![4]).unwrap();
        assert_eq!((single.n(), single.len()), (4, 1));
        assert_eq!(
            Composition::from_signed(&[0, 3]),
            Err(Error::NonPositivePart { index: 1, value: 0 })
        );
        assert_eq!(Composition::from_signed(&[2, -1]), Err(Error::NonPositivePart { index: 2, value: -1 }));
        assert_eq!(Composition::new(vec![]), Err(Error::EmptyComposition));
    }

    #[test]
    fn bit_sequences() {
        assert_eq!(c("2+4+1+1+5").to_bitseq().to_string(), "010001110000");
        assert_eq!(c("4").to_bitseq().to_string(), "000");
        assert_eq!(c("1+1+1+1").to_bitseq().to_string(), "111");
        assert_eq!(c("1").to_bitseq().len(), 0);

        let decode = |s: &str| Composition::from_bitseq(&s.parse().unwrap()).to_string();
        assert_eq!(decode("010001110000"), "2+4+1+1+5");
        assert_eq!(decode(""), "1");
        assert_eq!(decode("00"), "3");
        assert_eq!(decode("01"), "2+1");
        assert_eq!(decode("10"), "1+2");
        assert_eq!(decode("11"), "1+1+1");
    }

    #[test]
    fn conjugates() {
        let x = c("2+4+1+1+5");
        assert_eq!(x.conjugate().to_string(), "1+2+1+1+4+1+1+1+1");
        assert_eq!(x.conjugate().to_bitseq().to_string(), "101110001111");
        assert_eq!(c("5").conjugate().to_string(), "1+1+1+1+1");
        assert_eq!(c("1").conjugate().to_string(), "1");
    }

    #[test]
    fn graphs() {
        assert_eq!(c("2+4+1+1+5").render_graph(), "−−·−−−−·−·−·−−−−−");
        assert_eq!(c("1").render_graph(), "−");
        assert_eq!(c("1+1").render_graph(), "−·−");
    }

    #[test]
    fn parsing_is_strict() {
        for bad in ["", "1+", "+1", "1 +2", "1+-2", "a", "1++2", " 3"] {
            assert!(bad.parse::<Composition>().is_err(), "{bad:?} accepted");
        }
        assert!("0+3".parse::<Composition>().is_err());
        assert!("1+2".parse::<Partition>().is_err());
        assert_eq!("0".parse::<Partition>().unwrap(), Partition::default());
        assert_eq!("3+3+1".parse::<Partition>().unwrap().n(), 7);
        assert!("12a".parse::<BitSeq>().is_err());
    }

    #[test]
    fn runs() {
        let b: BitSeq = "1110000000011100001 00".replace(' ', "").parse().unwrap();
        assert_eq!(b.runs_of(false), vec![8, 4, 2]);
        assert_eq!(b.runs_of(true), vec![3, 3, 1]);
    }
}
