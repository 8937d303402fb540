//! Invariant batteries, run by the `verify` command.
//!
//! Each check walks `n` upward and stops at the first failure, so a failing
//! report carries the smallest counterexample. Work over `n` is spread with
//! [`crate::par`] and reduced in ascending order.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::analytic::{EvalOptions, SeriesEvaluator, SeriesKind};
use crate::bijection::{gt1_to_odd, odd_to_gt1};
use crate::composition::Composition;
use crate::counting::{
    composition_count, fibonacci, is_triangular, min_part2_composition_count, odd_composition_count,
    q_recurrence_residual, BigCount, MemoTable, QShift, TableKind,
};
use crate::enumerate::{count_by_enumeration, gen_compositions, gen_partitions, Class, CompositionClass, PartitionClass};
use crate::error::{Error, Result};
use crate::genfun::{
    compositions_gf, distinct_compositions_gf, distinct_partitions_ell_gf, distinct_partitions_gf, euler_product,
    odd_partitions_gf, partition_gf, series_mul, TruncatedSeries,
};
use crate::par::{map_range, ExecMode};

/// Bound on `n` for checks that list every composition of `n`.
pub const COMPOSITION_ENUM_CAP: u64 = 20;
/// Bound on `n` for checks that list every partition of `n`.
pub const PARTITION_ENUM_CAP: u64 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Codec,
    Bijection,
    Counts,
    Genfun,
    Analytic,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Codec, Suite::Bijection, Suite::Counts, Suite::Genfun, Suite::Analytic];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Codec => "codec",
            Suite::Bijection => "bijection",
            Suite::Counts => "counts",
            Suite::Genfun => "genfun",
            Suite::Analytic => "analytic",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse { what: "suite", detail: format!("unknown suite `{s}`") })
    }
}

/// One named property over a range of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    /// Largest `n` the check ran to.
    pub max_n: u64,
    pub passed: bool,
    /// Instances examined.
    pub cases: u64,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub max_n: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "{status}\t{}\tn<={}\tcases={}", c.name, c.max_n, c.cases)?;
            if let Some(ce) = &c.counterexample {
                write!(f, "\tcounterexample: {ce}")?;
            }
            writeln!(f)?;
        }
        let total = self.checks.len();
        let ok = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "suite {}: {ok}/{total} checks passed", self.suite)
    }
}

/// Outcome of one `n`: cases examined, or the failing instance.
type Step = std::result::Result<u64, String>;

/// Runs `step` for `n` in `lo..=hi` and keeps the first failure in `n` order.
fn check(name: &str, lo: u64, hi: u64, mode: ExecMode, step: impl Fn(u64) -> Step + Sync + Send) -> Check {
    let results = map_range(mode, lo..hi.saturating_add(1).max(lo), step);
    let mut cases = 0;
    for r in results {
        match r {
            Ok(c) => cases += c,
            Err(ce) => {
                return Check { name: name.into(), max_n: hi, passed: false, cases: cases + 1, counterexample: Some(ce) }
            }
        }
    }
    Check { name: name.into(), max_n: hi, passed: true, cases, counterexample: None }
}

fn expect_eq<T: PartialEq + fmt::Display>(what: &str, n: u64, got: T, want: T) -> Step {
    if got == want {
        Ok(1)
    } else {
        Err(format!("n={n}: {what} gave {got}, expected {want}"))
    }
}

fn all_compositions(n: u64, class: CompositionClass) -> Vec<Composition> {
    gen_compositions(n, class).map(|it| it.collect()).unwrap_or_default()
}

/// Runs `suite` up to `max_n`.
pub fn verify_suite(suite: Suite, max_n: u64, mode: ExecMode) -> Result<SuiteReport> {
    if max_n < 1 {
        return Err(Error::OutOfRange { what: "max-n", detail: "need max-n >= 1".into() });
    }
    let checks = match suite {
        Suite::Codec => codec(max_n, mode),
        Suite::Bijection => bijection(max_n, mode),
        Suite::Counts => counts(max_n, mode),
        Suite::Genfun => genfun(max_n, mode),
        Suite::Analytic => analytic(max_n, mode)?,
    };
    Ok(SuiteReport { suite, max_n, checks })
}

fn codec(max_n: u64, mode: ExecMode) -> Vec<Check> {
    let hi = max_n.min(COMPOSITION_ENUM_CAP);
    let over_all = |property: fn(&Composition) -> bool| {
        move |n: u64| -> Step {
            let all = all_compositions(n, CompositionClass::All);
            match all.iter().find(|c| !property(c)) {
                Some(c) => Err(c.to_string()),
                None => Ok(all.len() as u64),
            }
        }
    };
    vec![
        check("bit sequence roundtrip", 1, hi, mode, over_all(|c| Composition::from_bitseq(&c.to_bitseq()) == *c)),
        check("bit sequence length n-1", 1, hi, mode, over_all(|c| c.to_bitseq().len() as u64 == c.n() - 1)),
        check("conjugation is an involution", 1, hi, mode, over_all(|c| c.conjugate().conjugate() == *c)),
        check("conjugate has n-l+1 parts", 1, hi, mode, over_all(|c| c.conjugate().len() + c.len() == c.n() as usize + 1)),
        check("parse(display) roundtrip", 1, hi, mode, over_all(|c| c.to_string().parse::<Composition>().ok().as_ref() == Some(c))),
        check("bit sequences are distinct", 1, hi, mode, |n| {
            let all = all_compositions(n, CompositionClass::All);
            let seqs: BTreeSet<String> = all.iter().map(|c| c.to_bitseq().to_string()).collect();
            expect_eq("distinct bit sequences", n, seqs.len() as u64, 1u64 << (n - 1))
        }),
    ]
}

fn bijection(max_n: u64, mode: ExecMode) -> Vec<Check> {
    let hi = max_n.min(COMPOSITION_ENUM_CAP);
    vec![
        check("inverse after forward is the identity", 1, hi, mode, |n| {
            let all = all_compositions(n, CompositionClass::OddParts);
            for a in &all {
                match odd_to_gt1(a).and_then(|c| gt1_to_odd(&c)) {
                    Ok(back) if back == *a => {}
                    _ => return Err(a.to_string()),
                }
            }
            Ok(all.len() as u64)
        }),
        check("forward after inverse is the identity", 1, hi, mode, |n| {
            let all = all_compositions(n + 1, CompositionClass::MinPart2);
            for c in &all {
                match gt1_to_odd(c).and_then(|a| odd_to_gt1(&a)) {
                    Ok(back) if back == *c => {}
                    _ => return Err(c.to_string()),
                }
            }
            Ok(all.len() as u64)
        }),
        check("image equals parts>1 compositions of n+1", 1, hi, mode, |n| {
            let image: Result<BTreeSet<Composition>> =
                all_compositions(n, CompositionClass::OddParts).iter().map(odd_to_gt1).collect();
            let target: BTreeSet<Composition> = all_compositions(n + 1, CompositionClass::MinPart2).into_iter().collect();
            match image {
                Ok(image) if image == target => Ok(image.len() as u64),
                Ok(image) => {
                    let diff = image.symmetric_difference(&target).next().map(|c| c.to_string()).unwrap_or_default();
                    Err(format!("n={n}: image and target differ at {diff}"))
                }
                Err(e) => Err(format!("n={n}: {e}")),
            }
        }),
        check("both sides have F_n elements", 1, hi, mode, |n| {
            let f = fibonacci(n);
            let odd = BigCount::from(all_compositions(n, CompositionClass::OddParts).len() as u64);
            let gt1 = BigCount::from(all_compositions(n + 1, CompositionClass::MinPart2).len() as u64);
            expect_eq("odd-part count", n, &odd, &f)?;
            expect_eq("parts>1 count of n+1", n, &gt1, &f)
        }),
    ]
}

fn counts(max_n: u64, mode: ExecMode) -> Vec<Check> {
    let comp_hi = max_n.min(COMPOSITION_ENUM_CAP);
    let part_hi = max_n.min(PARTITION_ENUM_CAP);
    let enumerated = |n: u64, class: Class| count_by_enumeration(n, class).map_err(|e| e.to_string());
    let mut p = MemoTable::new(TableKind::Partitions);
    let mut q = MemoTable::new(TableKind::OddPartitions);
    p.extend_to(max_n);
    q.extend_to(max_n.max(2000));
    let (p, q) = (&p, &q);
    vec![
        check("c(n) = 2^(n-1) = enumeration", 1, comp_hi, mode, |n| {
            let got = composition_count(n).map_err(|e| e.to_string())?;
            expect_eq("c(n)", n, got, enumerated(n, Class::Compositions(CompositionClass::All))?)
        }),
        check("odd-part compositions = F_n = enumeration", 1, comp_hi, mode, |n| {
            let got = odd_composition_count(n).map_err(|e| e.to_string())?;
            expect_eq("F_n", n, &got, &fibonacci(n))?;
            expect_eq("odd-part count", n, got, enumerated(n, Class::Compositions(CompositionClass::OddParts))?)
        }),
        check("parts>1 compositions of n+1 = F_n = enumeration", 1, comp_hi, mode, |n| {
            let got = min_part2_composition_count(n + 1).map_err(|e| e.to_string())?;
            expect_eq("F_n", n, &got, &fibonacci(n))?;
            expect_eq("parts>1 count", n, got, enumerated(n + 1, Class::Compositions(CompositionClass::MinPart2))?)
        }),
        check("p(n) recurrence = enumeration", 0, part_hi, mode, |n| {
            let got = BigCount::new(p.values()[n as usize].clone());
            expect_eq("p(n)", n, got, enumerated(n, Class::Partitions(PartitionClass::All))?)
        }),
        check("q(n) recurrence = odd-part enumeration", 0, part_hi, mode, |n| {
            let got = BigCount::new(q.values()[n as usize].clone());
            expect_eq("q(n)", n, got, enumerated(n, Class::Partitions(PartitionClass::OddParts))?)
        }),
        check("odd-part partitions = distinct-part partitions", 0, part_hi, mode, |n| {
            let odd = enumerated(n, Class::Partitions(PartitionClass::OddParts))?;
            expect_eq("distinct-part count", n, enumerated(n, Class::Partitions(PartitionClass::DistinctParts))?, odd)
        }),
        check("q recurrence residual is [n triangular]", 0, max_n.max(2000), mode, |n| {
            let want = BigCount::from(is_triangular(n) as u64).to_bigint();
            expect_eq("residual", n, q_recurrence_residual(q.values(), n, QShift::Doubled), want)
        }),
    ]
}

fn genfun(max_n: u64, mode: ExecMode) -> Vec<Check> {
    let order = max_n as usize;
    let part_hi = max_n.min(PARTITION_ENUM_CAP);
    let comp_hi = max_n.min(COMPOSITION_ENUM_CAP);
    let pgf = partition_gf(order);
    let cgf = compositions_gf(order);
    let ogf = odd_partitions_gf(order);
    let dgf = distinct_partitions_gf(order);
    let dcgf = distinct_compositions_gf(comp_hi as usize);
    let pent = series_mul(&pgf, &euler_product(order));
    let one = TruncatedSeries::one(order);
    let mut p = MemoTable::new(TableKind::Partitions);
    p.extend_to(max_n);
    let p = &p;
    let coeff = |s: &TruncatedSeries, n: u64| s.coefficient(n as usize);
    vec![
        check("partition_gf = p(n) recurrence", 0, max_n, mode, |n| {
            expect_eq("coefficient", n, coeff(&pgf, n), BigCount::new(p.values()[n as usize].clone()).to_bigint())
        }),
        check("partition_gf = enumeration", 0, part_hi, mode, |n| {
            let e = count_by_enumeration(n, Class::Partitions(PartitionClass::All)).map_err(|e| e.to_string())?;
            expect_eq("coefficient", n, coeff(&pgf, n), e.to_bigint())
        }),
        check("compositions_gf = c(n)", 1, max_n, mode, |n| {
            let c = composition_count(n).map_err(|e| e.to_string())?;
            expect_eq("coefficient", n, coeff(&cgf, n), c.to_bigint())
        }),
        check("odd-part product = distinct-part product", 0, max_n, mode, |n| {
            expect_eq("coefficient", n, coeff(&ogf, n), coeff(&dgf, n))
        }),
        check("partition_gf times euler product = 1", 0, max_n, mode, |n| {
            expect_eq("coefficient", n, coeff(&pent, n), coeff(&one, n))
        }),
        check("exactly-l distinct parts = enumeration", 0, part_hi, mode, |n| {
            let mut cases = 0;
            for ell in 0..=n as u32 {
                let series = distinct_partitions_ell_gf(ell as usize, n as usize);
                let e = gen_partitions(n, PartitionClass::DistinctExactly(ell)).count() as u64;
                expect_eq(&format!("l={ell} coefficient"), n, coeff(&series, n), BigCount::from(e).to_bigint())?;
                cases += 1;
            }
            Ok(cases)
        }),
        check("distinct_compositions_gf = enumeration", 0, comp_hi, mode, |n| {
            let e = if n == 0 {
                BigCount::from(1u64)
            } else {
                count_by_enumeration(n, Class::Compositions(CompositionClass::DistinctParts)).map_err(|e| e.to_string())?
            };
            expect_eq("coefficient", n, coeff(&dcgf, n), e.to_bigint())
        }),
    ]
}

fn analytic(max_n: u64, mode: ExecMode) -> Result<Vec<Check>> {
    let evaluator = SeriesEvaluator::new();
    let opts = EvalOptions { mode, ..EvalOptions::default() };
    let mut p = MemoTable::new(TableKind::Partitions);
    let mut q = MemoTable::new(TableKind::OddPartitions);
    p.extend_to(max_n);
    q.extend_to(max_n);
    let run = |name: &str, kind: SeriesKind, table: &MemoTable| {
        // Terms are already parallel inside each evaluation.
        check(name, 1, max_n, ExecMode::Sequential, |n| {
            let report = evaluator.evaluate(kind, n, &opts).map_err(|e| format!("n={n}: {e}"))?;
            if !report.certified {
                return Err(format!("n={n}: not certified"));
            }
            expect_eq("rounded value", n, report.rounded, BigCount::new(table.values()[n as usize].clone()))
        })
    };
    Ok(vec![
        run("rademacher series rounds to p(n)", SeriesKind::Partitions, &p),
        run("odd-modulus series rounds to q(n)", SeriesKind::OddPartitions, &q),
    ])
}
