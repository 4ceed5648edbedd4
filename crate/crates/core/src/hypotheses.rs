use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// No saddle-node on the exceptional divisor is tangent to it.
    SecondClass,
    /// The reduction has no saddle-nodes at all.
    GeneralizedCurve,
    /// The separatrix divisor passed the balance check.
    BalancedDivisorChecked,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::SecondClass => "second_class",
            Hypothesis::GeneralizedCurve => "generalized_curve",
            Hypothesis::BalancedDivisorChecked => "balanced_divisor_checked",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    #[default]
    Unknown,
    Asserted,
    Verified,
    Violated,
}

impl HypothesisStatus {
    pub fn holds(self) -> bool {
        matches!(self, HypothesisStatus::Asserted | HypothesisStatus::Verified)
    }
}

/// Which structural hypotheses are in force for a computation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisLedger {
    #[serde(default)]
    pub second_class: HypothesisStatus,
    #[serde(default)]
    pub generalized_curve: HypothesisStatus,
    #[serde(default)]
    pub balanced_divisor_checked: HypothesisStatus,
}

impl HypothesisLedger {
    pub fn status(&self, h: Hypothesis) -> HypothesisStatus {
        match h {
            Hypothesis::SecondClass => self.second_class,
            Hypothesis::GeneralizedCurve => self.generalized_curve,
            Hypothesis::BalancedDivisorChecked => self.balanced_divisor_checked,
        }
    }

    pub fn set(&mut self, h: Hypothesis, s: HypothesisStatus) {
        match h {
            Hypothesis::SecondClass => self.second_class = s,
            Hypothesis::GeneralizedCurve => self.generalized_curve = s,
            Hypothesis::BalancedDivisorChecked => self.balanced_divisor_checked = s,
        }
    }

    /// Ledger with both foliation hypotheses asserted. Generalized curves are
    /// of second class, so the second flag follows from the first.
    pub fn generalized_curve() -> Self {
        HypothesisLedger {
            second_class: HypothesisStatus::Asserted,
            generalized_curve: HypothesisStatus::Asserted,
            balanced_divisor_checked: HypothesisStatus::Unknown,
        }
    }

    pub fn require(&self, hs: &[Hypothesis]) -> Result<()> {
        for &h in hs {
            match self.status(h) {
                HypothesisStatus::Asserted | HypothesisStatus::Verified => {}
                HypothesisStatus::Violated => return Err(Error::HypothesisViolated(h)),
                HypothesisStatus::Unknown => return Err(Error::HypothesisMissing(h)),
            }
        }
        Ok(())
    }
}
