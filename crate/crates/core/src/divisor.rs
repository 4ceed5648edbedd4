//! Invariant markings, separatrix branches and balanced divisors.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, vec_add};
use crate::program::{ones, CholeskyMatrix, IntersectionMatrix};

/// `iota_i = 1` when the `i`-th component is invariant, `0` when dicritical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantMarking {
    iota: Vec<u8>,
}

impl InvariantMarking {
    pub fn new(iota: Vec<u8>, a: &IntersectionMatrix) -> Result<Self> {
        if iota.len() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: iota.len() });
        }
        if let Some(bad) = iota.iter().find(|&&x| x > 1) {
            return Err(Error::InvalidMarking(format!("entry {bad} is neither 0 nor 1")));
        }
        for (i, j) in a.corners() {
            if iota[i] == 0 && iota[j] == 0 {
                return Err(Error::InvalidMarking(format!(
                    "dicritical components {} and {} meet",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(InvariantMarking { iota })
    }

    /// Marking with the requested dicritical components, dropping any that
    /// would meet an earlier dicritical one.
    pub fn from_wishes(dicritical: &[bool], a: &IntersectionMatrix) -> Self {
        let n = a.dim();
        let mut iota = vec![1u8; n];
        for i in 0..n {
            if dicritical.get(i).copied().unwrap_or(false) && (0..i).all(|j| iota[j] == 1 || !a.meets(i, j)) {
                iota[i] = 0;
            }
        }
        InvariantMarking { iota }
    }

    pub fn all_invariant(n: usize) -> Self {
        InvariantMarking { iota: vec![1; n] }
    }

    pub fn dim(&self) -> usize {
        self.iota.len()
    }

    pub fn is_invariant(&self, i: usize) -> bool {
        self.iota[i] == 1
    }

    pub fn is_dicritical(&self, i: usize) -> bool {
        self.iota[i] == 0
    }

    pub fn raw(&self) -> &[u8] {
        &self.iota
    }

    pub fn iota(&self) -> Vec<BigInt> {
        self.iota.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// `delta = u - iota`, the indicator of dicritical components.
    pub fn delta(&self) -> Vec<BigInt> {
        self.iota.iter().map(|&x| BigInt::from(1 - x)).collect()
    }

    pub fn dicriticals(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.is_dicritical(i)).collect()
    }

    pub fn invariants(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.is_invariant(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchKind {
    /// Attached only to invariant components.
    Isolated,
    /// Attached only to dicritical components.
    Dicritical,
}

/// A separatrix branch, or a group of them sharing one coefficient, recorded
/// through its intersection numbers with the exceptional components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchAttachment {
    pub name: String,
    #[serde(with = "crate::serde_int::vec")]
    s: Vec<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    isolated: Option<bool>,
}

impl BranchAttachment {
    pub fn new(name: impl Into<String>, s: Vec<BigInt>) -> Result<Self> {
        let name = name.into();
        if s.iter().any(Signed::is_negative) {
            return Err(Error::InvalidBranch { name, reason: "negative intersection number".into() });
        }
        if s.iter().all(Zero::is_zero) {
            return Err(Error::InvalidBranch { name, reason: "meets no exceptional component".into() });
        }
        Ok(BranchAttachment { name, s, isolated: None })
    }

    pub fn with_isolated(mut self, isolated: bool) -> Self {
        self.isolated = Some(isolated);
        self
    }

    pub fn s(&self) -> &[BigInt] {
        &self.s
    }

    pub fn isolated_label(&self) -> Option<bool> {
        self.isolated
    }

    /// Classifies the branch from its support, checking any explicit label.
    pub fn kind(&self, marking: &InvariantMarking) -> Result<BranchKind> {
        if self.s.len() != marking.dim() {
            return Err(Error::DimensionMismatch { expected: marking.dim(), found: self.s.len() });
        }
        let support: Vec<usize> = (0..self.s.len()).filter(|&i| !self.s[i].is_zero()).collect();
        let on_invariant = support.iter().any(|&i| marking.is_invariant(i));
        let on_dicritical = support.iter().any(|&i| marking.is_dicritical(i));
        let kind = match (on_invariant, on_dicritical) {
            (true, false) => BranchKind::Isolated,
            (false, true) => BranchKind::Dicritical,
            _ => {
                return Err(Error::InvalidBranch {
                    name: self.name.clone(),
                    reason: "attached to both invariant and dicritical components".into(),
                })
            }
        };
        if let Some(label) = self.isolated {
            if label != (kind == BranchKind::Isolated) {
                return Err(Error::InvalidBranch {
                    name: self.name.clone(),
                    reason: format!("labelled isolated={label} but its support says otherwise"),
                });
            }
        }
        Ok(kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorTerm {
    pub branch: BranchAttachment,
    #[serde(with = "crate::serde_int")]
    pub coefficient: BigInt,
}

/// A finite integer combination of separatrix branches.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatrixDivisor {
    terms: Vec<DivisorTerm>,
}

impl SeparatrixDivisor {
    pub fn new(terms: Vec<(BranchAttachment, BigInt)>) -> Result<Self> {
        let mut names = BTreeSet::new();
        let mut dim = None;
        for (b, _) in &terms {
            if !names.insert(b.name.clone()) {
                return Err(Error::InvalidBranch { name: b.name.clone(), reason: "duplicate name".into() });
            }
            match dim {
                None => dim = Some(b.s.len()),
                Some(n) if n != b.s.len() => {
                    return Err(Error::DimensionMismatch { expected: n, found: b.s.len() })
                }
                _ => {}
            }
        }
        Ok(SeparatrixDivisor {
            terms: terms.into_iter().map(|(branch, coefficient)| DivisorTerm { branch, coefficient }).collect(),
        })
    }

    pub fn terms(&self) -> &[DivisorTerm] {
        &self.terms
    }

    pub fn coefficient(&self, name: &str) -> BigInt {
        self.terms.iter().find(|t| t.branch.name == name).map_or_else(BigInt::zero, |t| t.coefficient.clone())
    }

    /// `S_D = sum a_B S_B`, a vector of length `n`.
    pub fn total_vector(&self, n: usize) -> Result<Vec<BigInt>> {
        let mut acc = vec![BigInt::zero(); n];
        for t in &self.terms {
            if t.branch.s.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: t.branch.s.len() });
            }
            let scaled: Vec<BigInt> = t.branch.s.iter().map(|x| x * &t.coefficient).collect();
            acc = vec_add(&acc, &scaled);
        }
        Ok(acc)
    }

    /// Sub-divisor of the terms with the given sign of coefficient.
    pub fn part(&self, positive: bool) -> SeparatrixDivisor {
        SeparatrixDivisor {
            terms: self
                .terms
                .iter()
                .filter(|t| if positive { t.coefficient.is_positive() } else { t.coefficient.is_negative() })
                .cloned()
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentBalance {
    /// 1-based component index.
    pub component: usize,
    #[serde(with = "crate::serde_int")]
    pub lhs: BigInt,
    #[serde(with = "crate::serde_int")]
    pub rhs: BigInt,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceReport {
    pub balanced: bool,
    pub components: Vec<ComponentBalance>,
    pub failures: Vec<String>,
}

/// Checks the three balance conditions. When `isolated` is `None` the set of
/// isolated separatrices is taken to be the isolated branches occurring in `d`.
pub fn is_balanced(
    d: &SeparatrixDivisor,
    marking: &InvariantMarking,
    a: &IntersectionMatrix,
    isolated: Option<&[BranchAttachment]>,
) -> Result<BalanceReport> {
    let n = a.dim();
    if marking.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: marking.dim() });
    }
    let mut failures = Vec::new();
    for t in d.terms() {
        let kind = t.branch.kind(marking)?;
        let c = &t.coefficient;
        if c.abs() > BigInt::one() {
            failures.push(format!("{} has coefficient {c} outside {{-1, 0, 1}}", t.branch.name));
        }
        if kind == BranchKind::Isolated && !c.is_one() {
            failures.push(format!("isolated separatrix {} has coefficient {c}", t.branch.name));
        }
    }
    if let Some(iso) = isolated {
        for b in iso {
            if b.kind(marking)? != BranchKind::Isolated {
                return Err(Error::InvalidBranch {
                    name: b.name.clone(),
                    reason: "listed as isolated but meets a dicritical component".into(),
                });
            }
            if !d.coefficient(&b.name).is_one() {
                failures.push(format!("isolated separatrix {} does not occur with coefficient 1", b.name));
            }
        }
        for t in d.terms() {
            if t.branch.kind(marking)? == BranchKind::Isolated && !iso.iter().any(|b| b.name == t.branch.name) {
                failures.push(format!("{} is not among the isolated separatrices", t.branch.name));
            }
        }
    }
    let s = d.total_vector(n)?;
    let mut components = Vec::new();
    for i in marking.dicriticals() {
        let rhs = BigInt::from(2) - a.valence(i)?;
        let ok = s[i] == rhs;
        if !ok {
            failures.push(format!("component {}: (S_D)_i = {} but 2 - val = {rhs}", i + 1, s[i]));
        }
        components.push(ComponentBalance { component: i + 1, lhs: s[i].clone(), rhs, ok });
    }
    Ok(BalanceReport { balanced: failures.is_empty(), components, failures })
}

/// `<delta, S + (A - F^T) u>`, which vanishes for balanced divisors.
pub fn bal_pairing_check(
    s: &[BigInt],
    marking: &InvariantMarking,
    a: &IntersectionMatrix,
    f: &CholeskyMatrix,
) -> Result<BigInt> {
    let n = a.dim();
    if s.len() != n || f.dim() != n || marking.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: s.len() });
    }
    let u = ones(n);
    let au = a.matrix().mul_vec(&u);
    let ftu = f.matrix().tr_mul_vec(&u);
    let v: Vec<BigInt> = (0..n).map(|i| &s[i] + &au[i] - &ftu[i]).collect();
    Ok(dot(&marking.delta(), &v))
}

/// All balanced divisors formed by the isolated separatrices plus at most
/// `per_component` generic dicritical branches on each dicritical component,
/// in a fixed order, truncated to `limit`.
pub fn enumerate_balanced(
    marking: &InvariantMarking,
    a: &IntersectionMatrix,
    isolated: &[BranchAttachment],
    per_component: usize,
    limit: usize,
) -> Result<Vec<SeparatrixDivisor>> {
    let n = a.dim();
    let dics = marking.dicriticals();
    let mut options: Vec<Vec<(usize, usize)>> = Vec::new();
    for &i in &dics {
        let target = (BigInt::from(2) - a.valence(i)?).to_i64().expect("valence fits i64");
        let mut opts = Vec::new();
        for q in 0..=per_component {
            let p = target + q as i64;
            if p >= 0 && p as usize + q <= per_component {
                opts.push((p as usize, q));
            }
        }
        if opts.is_empty() {
            return Ok(Vec::new());
        }
        options.push(opts);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; dics.len()];
    'outer: loop {
        if out.len() >= limit {
            break;
        }
        let mut terms: Vec<(BranchAttachment, BigInt)> =
            isolated.iter().map(|b| (b.clone(), BigInt::one())).collect();
        for (slot, &i) in dics.iter().enumerate() {
            let (p, q) = options[slot][idx[slot]];
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            for k in 0..p {
                terms.push((BranchAttachment::new(format!("E{}+{}", i + 1, k + 1), e.clone())?, BigInt::one()));
            }
            for k in 0..q {
                terms.push((BranchAttachment::new(format!("E{}-{}", i + 1, k + 1), e.clone())?, -BigInt::one()));
            }
        }
        out.push(SeparatrixDivisor::new(terms)?);
        for slot in 0..dics.len() {
            idx[slot] += 1;
            if idx[slot] < options[slot].len() {
                continue 'outer;
            }
            idx[slot] = 0;
        }
        break;
    }
    Ok(out)
}
