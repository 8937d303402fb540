//! Exact enumeration of integer compositions and partitions.
//!
//! The crate is organised around one bijection: compositions of `n` into odd
//! parts correspond to compositions of `n + 1` into parts greater than one,
//! and both are counted by the Fibonacci number `F_n`. Around it sit the
//! brute-force generators that act as oracles ([`enumerate`]), exact counters
//! ([`counting`]), truncated power series ([`genfun`]) and high precision
//! evaluation of the convergent series for `p(n)` and `q(n)` ([`analytic`]).
//!
//! Data-parallel loops go through [`par`]; with the `parallel` feature
//! disabled everything runs sequentially with identical results.

pub mod analytic;
pub mod bijection;
pub mod composition;
pub mod counting;
pub mod enumerate;
mod error;
pub mod genfun;
pub mod par;
pub mod verify;

pub use bijection::{gt1_to_odd, odd_to_gt1, trace_forward, trace_inverse, BijectionTrace};
pub use composition::{BitSeq, Composition, Partition};
pub use counting::BigCount;
pub use enumerate::{CompositionClass, PartitionClass};
pub use error::{Error, Result};
pub use genfun::TruncatedSeries;
pub use par::ExecMode;
