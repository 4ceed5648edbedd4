use num_bigint::BigInt;
use serde::Serialize;

use crate::divisor::{is_balanced, BalanceReport, BranchAttachment, BranchKind, SeparatrixDivisor};
use crate::error::{Error, Result};
use crate::hypotheses::{HypothesisLedger, HypothesisStatus};
use crate::invariants::{Engine, ReducedData};
use crate::program::BlowUpProgram;

/// A foliation germ given by reduction data: the engine plus its separatrix
/// branches, a candidate balanced divisor and optional reduced-point data.
#[derive(Debug, Clone)]
pub struct Foliation {
    engine: Engine,
    branches: Vec<BranchAttachment>,
    divisor: SeparatrixDivisor,
    balance: BalanceReport,
    reduced: Option<ReducedData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Vectors {
    #[serde(with = "crate::serde_int::vec")]
    pub balanced: Vec<BigInt>,
    #[serde(with = "crate::serde_int::vec")]
    pub isolated: Vec<BigInt>,
}

impl Foliation {
    /// `coefficients` names branches from `branches`. The balance check runs
    /// here and its outcome is entered in the hypothesis ledger.
    pub fn new(
        program: BlowUpProgram,
        iota: Vec<u8>,
        branches: Vec<BranchAttachment>,
        coefficients: &[(String, BigInt)],
        hypotheses: HypothesisLedger,
        reduced: Option<ReducedData>,
    ) -> Result<Self> {
        let mut engine = Engine::new(program, iota, hypotheses)?;
        let mut terms = Vec::new();
        for (name, c) in coefficients {
            let b = branches.iter().find(|b| &b.name == name).ok_or_else(|| Error::InvalidBranch {
                name: name.clone(),
                reason: "divisor names an unknown branch".into(),
            })?;
            terms.push((b.clone(), c.clone()));
        }
        let divisor = SeparatrixDivisor::new(terms)?;
        let isolated = Self::isolated_of(&engine, &branches)?;
        let balance = is_balanced(&divisor, engine.marking(), engine.intersection(), Some(&isolated))?;
        let status = if balance.balanced { HypothesisStatus::Verified } else { HypothesisStatus::Violated };
        engine.hypotheses_mut().balanced_divisor_checked = status;
        Ok(Foliation { engine, branches, divisor, balance, reduced })
    }

    fn isolated_of(engine: &Engine, branches: &[BranchAttachment]) -> Result<Vec<BranchAttachment>> {
        let mut out = Vec::new();
        for b in branches {
            if b.kind(engine.marking())? == BranchKind::Isolated {
                out.push(b.clone());
            }
        }
        Ok(out)
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn branches(&self) -> &[BranchAttachment] {
        &self.branches
    }

    pub fn branch(&self, name: &str) -> Option<&BranchAttachment> {
        self.branches.iter().find(|b| b.name == name)
    }

    pub fn divisor(&self) -> &SeparatrixDivisor {
        &self.divisor
    }

    pub fn balance(&self) -> &BalanceReport {
        &self.balance
    }

    pub fn reduced(&self) -> Option<&ReducedData> {
        self.reduced.as_ref()
    }

    pub fn isolated(&self) -> Vec<BranchAttachment> {
        Self::isolated_of(&self.engine, &self.branches).expect("validated at construction")
    }

    pub fn vectors(&self) -> Vectors {
        let n = self.engine.dim();
        let balanced = self.divisor.total_vector(n).expect("validated at construction");
        let mut isolated = vec![BigInt::from(0); n];
        for b in self.isolated() {
            isolated = crate::matrix::vec_add(&isolated, b.s());
        }
        Vectors { balanced, isolated }
    }
}
