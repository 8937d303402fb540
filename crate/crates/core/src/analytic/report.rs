use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::hpreal::HpReal;
use crate::counting::BigCount;
use crate::par::ExecMode;

/// Knobs for a certified series evaluation. `None` budgets mean the
/// defaults derived from `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Starting number of terms `K`.
    pub k_max: Option<u64>,
    /// Starting working precision in bits.
    pub precision_bits: Option<u32>,
    pub max_escalations: u32,
    pub mode: ExecMode,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { k_max: None, precision_bits: None, max_escalations: 4, mode: ExecMode::Parallel }
    }
}

/// Outcome of one certified evaluation.
#[derive(Debug, Clone)]
pub struct SeriesEvalReport {
    pub n: u64,
    pub k_terms_used: u64,
    pub precision_bits: u32,
    /// Partial sum over `k <= k_terms_used`.
    pub raw_value: HpReal,
    pub rounded: BigCount,
    /// Distance from `raw_value` to `rounded`.
    pub residual: HpReal,
    pub certified: bool,
    pub escalations: u32,
    /// `|S(2K) - S(K)|`.
    pub stability_delta: HpReal,
}

impl Serialize for SeriesEvalReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SeriesEvalReport", 9)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k_terms_used", &self.k_terms_used)?;
        st.serialize_field("precision_bits", &self.precision_bits)?;
        st.serialize_field("raw_value", &self.raw_value.to_decimal_string())?;
        st.serialize_field("rounded", &self.rounded)?;
        st.serialize_field("residual", &self.residual.to_sci_string(12))?;
        st.serialize_field("certified", &self.certified)?;
        st.serialize_field("escalations", &self.escalations)?;
        st.serialize_field("stability_delta", &self.stability_delta.to_sci_string(12))?;
        st.end()
    }
}
