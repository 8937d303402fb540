//! Brute-force generators for restricted compositions and partitions.
//!
//! These are the oracles: everything else in the crate is checked against
//! them. Both generators are lazy depth-first walks. Compositions come out in
//! ascending lexicographic order of their part sequences; partitions in
//! descending (reverse) lexicographic order.

use std::fmt;
use std::str::FromStr;

use crate::composition::{Composition, Partition};
use crate::counting::BigCount;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompositionClass {
    All,
    OddParts,
    MinPart2,
    DistinctParts,
}

impl CompositionClass {
    pub const ALL: [CompositionClass; 4] = [
        CompositionClass::All,
        CompositionClass::OddParts,
        CompositionClass::MinPart2,
        CompositionClass::DistinctParts,
    ];

    fn allows(self, part: u64) -> bool {
        match self {
            CompositionClass::OddParts => part % 2 == 1,
            CompositionClass::MinPart2 => part >= 2,
            CompositionClass::All | CompositionClass::DistinctParts => true,
        }
    }

    /// Remainders from which no completion exists.
    fn dead_remainder(self, rem: u64) -> bool {
        matches!(self, CompositionClass::MinPart2) && rem == 1
    }

    pub fn contains(self, c: &Composition) -> bool {
        match self {
            CompositionClass::All => true,
            CompositionClass::OddParts => c.all_odd(),
            CompositionClass::MinPart2 => c.min_part() >= 2,
            CompositionClass::DistinctParts => {
                let mut seen = c.parts().to_vec();
                seen.sort_unstable();
                seen.windows(2).all(|w| w[0] != w[1])
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            CompositionClass::All => "all",
            CompositionClass::OddParts => "odd-parts",
            CompositionClass::MinPart2 => "min-part-2",
            CompositionClass::DistinctParts => "distinct-parts",
        }
    }
}

impl fmt::Display for CompositionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CompositionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CompositionClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse { what: "composition class", detail: s.to_string() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartitionClass {
    All,
    OddParts,
    DistinctParts,
    /// Distinct parts, exactly this many of them.
    DistinctExactly(u32),
}

impl PartitionClass {
    fn distinct(self) -> bool {
        matches!(self, PartitionClass::DistinctParts | PartitionClass::DistinctExactly(_))
    }

    pub fn contains(self, p: &Partition) -> bool {
        let parts = p.parts();
        match self {
            PartitionClass::All => true,
            PartitionClass::OddParts => parts.iter().all(|x| x % 2 == 1),
            PartitionClass::DistinctParts => parts.windows(2).all(|w| w[0] > w[1]),
            PartitionClass::DistinctExactly(ell) => {
                parts.len() == ell as usize && parts.windows(2).all(|w| w[0] > w[1])
            }
        }
    }
}

impl fmt::Display for PartitionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionClass::All => f.write_str("all"),
            PartitionClass::OddParts => f.write_str("odd-parts"),
            PartitionClass::DistinctParts => f.write_str("distinct-parts"),
            PartitionClass::DistinctExactly(ell) => write!(f, "distinct-exactly-{ell}"),
        }
    }
}

impl FromStr for PartitionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(PartitionClass::All),
            "odd-parts" => Ok(PartitionClass::OddParts),
            "distinct-parts" => Ok(PartitionClass::DistinctParts),
            _ => s
                .strip_prefix("distinct-exactly-")
                .and_then(|ell| ell.parse().ok())
                .map(PartitionClass::DistinctExactly)
                .ok_or_else(|| Error::Parse { what: "partition class", detail: s.to_string() }),
        }
    }
}

/// Either kind of class, as named on the command line
/// (`compositions:<class>` or `partitions:<class>`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Class {
    Compositions(CompositionClass),
    Partitions(PartitionClass),
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Compositions(c) => write!(f, "compositions:{c}"),
            Class::Partitions(p) => write!(f, "partitions:{p}"),
        }
    }
}

impl FromStr for Class {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("compositions", rest)) => rest.parse().map(Class::Compositions),
            Some(("partitions", rest)) => rest.parse().map(Class::Partitions),
            _ => Err(Error::Parse {
                what: "class",
                detail: format!("{s:?} (expected compositions:<kind> or partitions:<kind>)"),
            }),
        }
    }
}

/// Lazy generator of the compositions of `n` in a class.
#[derive(Debug, Clone)]
pub struct Compositions {
    n: u64,
    class: CompositionClass,
    parts: Vec<u64>,
    used: Vec<bool>,
    sum: u64,
    next_try: u64,
    done: bool,
}

impl Compositions {
    fn new(n: u64, class: CompositionClass) -> Self {
        let used = if class == CompositionClass::DistinctParts { vec![false; n as usize + 1] } else { Vec::new() };
        Compositions { n, class, parts: Vec::new(), used, sum: 0, next_try: 1, done: false }
    }

    fn candidate(&self) -> Option<u64> {
        let rem = self.n - self.sum;
        (self.next_try..=rem).find(|&v| {
            self.class.allows(v)
                && !self.class.dead_remainder(rem - v)
                && (self.used.is_empty() || !self.used[v as usize])
        })
    }

    fn push(&mut self, v: u64) {
        self.parts.push(v);
        self.sum += v;
        if !self.used.is_empty() {
            self.used[v as usize] = true;
        }
        self.next_try = 1;
    }

    fn pop(&mut self) -> bool {
        match self.parts.pop() {
            Some(v) => {
                self.sum -= v;
                if !self.used.is_empty() {
                    self.used[v as usize] = false;
                }
                self.next_try = v + 1;
                true
            }
            None => false,
        }
    }

    /// Moves to the next composition; the current one is then in
    /// `self.parts`. Returns false once exhausted.
    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if self.sum == self.n && !self.parts.is_empty() && !self.pop() {
            self.done = true;
            return false;
        }
        loop {
            match self.candidate() {
                Some(v) => {
                    self.push(v);
                    if self.sum == self.n {
                        return true;
                    }
                }
                None => {
                    if !self.pop() {
                        self.done = true;
                        return false;
                    }
                }
            }
        }
    }
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        self.advance().then(|| Composition::from_parts_unchecked(self.parts.clone()))
    }
}

pub fn gen_compositions(n: u64, class: CompositionClass) -> Result<Compositions> {
    if n < 1 {
        return Err(Error::IndexTooSmall { min: 1, got: n });
    }
    Ok(Compositions::new(n, class))
}

/// Lazy generator of the partitions of `n` in a class.
#[derive(Debug, Clone)]
pub struct Partitions {
    n: u64,
    class: PartitionClass,
    parts: Vec<u64>,
    sum: u64,
    next_try: u64,
    started: bool,
    done: bool,
}

impl Partitions {
    fn new(n: u64, class: PartitionClass) -> Self {
        Partitions { n, class, parts: Vec::new(), sum: 0, next_try: n, started: false, done: false }
    }

    /// Largest part allowed after the current prefix.
    fn bound(&self) -> u64 {
        match self.parts.last() {
            None => self.n,
            Some(&last) if self.class.distinct() => last - 1,
            Some(&last) => last,
        }
    }

    fn candidate(&self) -> Option<u64> {
        if let PartitionClass::DistinctExactly(ell) = self.class {
            if self.parts.len() >= ell as usize {
                return None;
            }
        }
        let rem = self.n - self.sum;
        let hi = self.next_try.min(rem).min(self.bound());
        (1..=hi).rev().find(|&v| {
            if self.class == PartitionClass::OddParts && v % 2 == 0 {
                return false;
            }
            if self.class.distinct() {
                // Parts below v are distinct, so at most v(v-1)/2 more fits.
                let rest = rem - v;
                if rest > v * (v - 1) / 2 {
                    return false;
                }
            }
            true
        })
    }

    fn pop(&mut self) -> bool {
        match self.parts.pop() {
            Some(v) => {
                self.sum -= v;
                self.next_try = v - 1;
                true
            }
            None => false,
        }
    }

    fn complete(&self) -> bool {
        self.sum == self.n
            && match self.class {
                PartitionClass::DistinctExactly(ell) => self.parts.len() == ell as usize,
                _ => true,
            }
    }

    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            if self.complete() {
                // n = 0: the empty partition.
                return true;
            }
        } else if !self.pop() {
            self.done = true;
            return false;
        }
        loop {
            if self.sum < self.n {
                if let Some(v) = self.candidate() {
                    self.parts.push(v);
                    self.sum += v;
                    self.next_try = v;
                    if self.complete() {
                        return true;
                    }
                    continue;
                }
            }
            if !self.pop() {
                self.done = true;
                return false;
            }
        }
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        self.advance().then(|| Partition::from_parts_unchecked(self.parts.clone()))
    }
}

pub fn gen_partitions(n: u64, class: PartitionClass) -> Partitions {
    Partitions::new(n, class)
}

/// Number of items the corresponding generator would emit. Walks the
/// generator without materialising any items.
pub fn count_by_enumeration(n: u64, class: Class) -> Result<BigCount> {
    let mut count: u64 = 0;
    match class {
        Class::Compositions(c) => {
            let mut g = gen_compositions(n, c)?;
            while g.advance() {
                count += 1;
            }
        }
        Class::Partitions(p) => {
            let mut g = gen_partitions(n, p);
            while g.advance() {
                count += 1;
            }
        }
    }
    Ok(BigCount::from(count))
}
