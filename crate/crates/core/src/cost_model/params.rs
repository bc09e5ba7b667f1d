use serde::{Deserialize, Serialize};

/// Tunable inliner parameters. [`Default`] reproduces the documented
/// defaults; [`InlineParams::clang14`] is calibrated against clang 14 on
/// x86-64 remarks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InlineParams {
    pub inline_threshold: i64,
    pub inlinehint_threshold: i64,
    pub cold_callsite_threshold: i64,
    pub hot_callsite_threshold: i64,
    pub locally_hot_callsite_threshold: i64,
    pub cold_callsite_rel_freq: i64,
    pub hot_callsite_rel_freq: i64,
    pub inline_call_penalty: i64,
    pub inline_savings_multiplier: i64,
    pub inline_size_allowance: i64,
    pub cost_benefit_analysis: bool,
    pub caller_superset_nobuiltin: bool,
    pub instruction_cost: i64,
    pub last_call_to_static_bonus: i64,

    /// Threshold cap for an `optsize` caller; `None` uses
    /// `cold_callsite_threshold`.
    pub optsize_threshold: Option<i64>,
    /// Threshold cap for a `minsize` caller; `None` uses
    /// `cold_callsite_threshold`.
    pub minsize_threshold: Option<i64>,
    /// Percentage added to the threshold when the callee is straight-line
    /// code (no complex branching), the site is not cold, and the caller is
    /// not `minsize`.
    pub single_block_bonus_percent: i64,
    /// Divides the threshold when the callee has complex branching.
    pub complex_branching_divisor: i64,
    /// Divides the threshold when the callee has vector instructions.
    pub vector_divisor: i64,
}

pub const DEFAULT_INLINE_THRESHOLD: i64 = 225;

impl Default for InlineParams {
    fn default() -> Self {
        InlineParams {
            inline_threshold: DEFAULT_INLINE_THRESHOLD,
            inlinehint_threshold: 335,
            cold_callsite_threshold: 45,
            hot_callsite_threshold: 3000,
            locally_hot_callsite_threshold: 525,
            cold_callsite_rel_freq: 2,
            hot_callsite_rel_freq: 60,
            inline_call_penalty: 25,
            inline_savings_multiplier: 8,
            inline_size_allowance: 100,
            cost_benefit_analysis: false,
            caller_superset_nobuiltin: true,
            instruction_cost: 5,
            last_call_to_static_bonus: -15000,
            optsize_threshold: None,
            minsize_threshold: None,
            single_block_bonus_percent: 0,
            complex_branching_divisor: 2,
            vector_divisor: 2,
        }
    }
}

impl InlineParams {
    /// Profile matching clang 14's x86-64 inliner as observed in its remarks.
    pub fn clang14() -> Self {
        InlineParams {
            inlinehint_threshold: 325,
            optsize_threshold: Some(50),
            minsize_threshold: Some(5),
            single_block_bonus_percent: 50,
            complex_branching_divisor: 1,
            vector_divisor: 1,
            ..Default::default()
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "default" => Some(Self::default()),
            "clang14" => Some(Self::clang14()),
            _ => None,
        }
    }

    /// True when `inline_threshold` was moved off its default, which makes
    /// it the starting threshold at every level.
    pub fn threshold_overridden(&self) -> bool {
        self.inline_threshold != DEFAULT_INLINE_THRESHOLD
    }

    pub fn optsize_cap(&self) -> i64 {
        self.optsize_threshold.unwrap_or(self.cold_callsite_threshold)
    }

    pub fn minsize_cap(&self) -> i64 {
        self.minsize_threshold.unwrap_or(self.cold_callsite_threshold)
    }

    pub fn validate(&self) -> Result<(), String> {
        let thresholds = [
            ("inline_threshold", self.inline_threshold),
            ("inlinehint_threshold", self.inlinehint_threshold),
            ("cold_callsite_threshold", self.cold_callsite_threshold),
            ("hot_callsite_threshold", self.hot_callsite_threshold),
            ("locally_hot_callsite_threshold", self.locally_hot_callsite_threshold),
            ("optsize_threshold", self.optsize_cap()),
            ("minsize_threshold", self.minsize_cap()),
        ];
        for (name, v) in thresholds {
            if v < 0 {
                return Err(format!("{name} must be >= 0, got {v}"));
            }
        }
        for (name, v) in [
            ("complex_branching_divisor", self.complex_branching_divisor),
            ("vector_divisor", self.vector_divisor),
        ] {
            if v < 1 {
                return Err(format!("{name} must be >= 1, got {v}"));
            }
        }
        Ok(())
    }
}
