//! High precision evaluation of the convergent series for `p(n)` and for
//! `q(n)`, the number of partitions into odd parts.
//!
//! Layers, bottom up: exact rationals for the Dedekind-type sums
//! ([`rational`]), a big-mantissa binary float ([`hpreal`]), the exponential
//! sums and Bessel kernel, and the certified series driver ([`series`]).

pub mod bessel;
pub mod hpreal;
pub mod kloosterman;
pub mod rational;
mod report;
pub mod series;

pub use bessel::bessel_i1;
pub use hpreal::{HpComplex, HpReal};
pub use kloosterman::{kloosterman_a, PhaseCache};
pub use rational::{dedekind_sum, hagis_t, sawtooth, ExactRational};
pub use report::{EvalOptions, SeriesEvalReport};
pub use series::{hagis_q, rademacher_p, SeriesEvaluator, SeriesKind};
