//! Local invariants of a foliation computed from its reduction data.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::divisor::{BranchAttachment, BranchKind, InvariantMarking, SeparatrixDivisor};
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::hypotheses::{Hypothesis, HypothesisLedger};
use crate::matrix::{dot, vec_add, vec_sub};
use crate::program::{build_cholesky, build_intersection, ones, BlowUpProgram, CholeskyMatrix, IntersectionMatrix};
use crate::IntMatrix;

/// Where a reduced singularity of the pulled-back foliation sits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    /// Points where a separatrix branch meets an invariant component
    /// (0-based). One record covers all `S_branch[component]` such points.
    Attachment { branch: String, component: usize },
    /// The intersection of two invariant components (0-based).
    Corner { first: usize, second: usize },
}

/// Per-point indices of a reduced singularity. At an attachment `cs` is the
/// Camacho-Sad index along the branch; at a corner, along `first`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedRecord {
    pub location: Location,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cs: Option<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bb: Option<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_ratio: Option<Exact>,
}

impl ReducedRecord {
    pub fn new(location: Location) -> Self {
        ReducedRecord { location, cs: None, var: None, bb: None, eigen_ratio: None }
    }

    /// Baum-Bott index at one point, from whichever datum is present.
    /// Redundant data must agree.
    pub fn baum_bott(&self) -> Result<Exact> {
        let from_ratio = |r: &Exact| -> Result<Exact> {
            r.add(&r.recip()?)?.add(&Exact::integer(2))
        };
        let mut candidates = Vec::new();
        if let Some(bb) = &self.bb {
            candidates.push(bb.clone());
        }
        if let Some(r) = &self.eigen_ratio {
            candidates.push(from_ratio(r)?);
        }
        if let Some(cs) = &self.cs {
            candidates.push(from_ratio(cs)?);
        }
        let first = candidates
            .first()
            .cloned()
            .ok_or_else(|| Error::MissingReducedData(format!("{:?}: no bb, eigen_ratio or cs", self.location)))?;
        if let Some(other) = candidates.iter().find(|c| **c != first) {
            return Err(Error::InvalidReducedData(format!(
                "{:?}: Baum-Bott values {first} and {other} disagree",
                self.location
            )));
        }
        Ok(first)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedData {
    pub records: Vec<ReducedRecord>,
}

impl ReducedData {
    pub fn attachment(&self, branch: &str, component: usize) -> Option<&ReducedRecord> {
        self.records.iter().find(|r| {
            matches!(&r.location, Location::Attachment { branch: b, component: c } if b == branch && *c == component)
        })
    }

    pub fn corner(&self, i: usize, j: usize) -> Option<&ReducedRecord> {
        let (lo, hi) = (i.min(j), i.max(j));
        self.records.iter().find(|r| match r.location {
            Location::Corner { first, second } => first.min(second) == lo && first.max(second) == hi,
            _ => false,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingOrders {
    /// `M = -A^{-1} S`, orders of the pulled-back equation along each `E_j`.
    #[serde(with = "crate::serde_int::vec")]
    pub total: Vec<BigInt>,
    /// `m = F (M - u)`, multiplicities of the pulled-back differential.
    #[serde(with = "crate::serde_int::vec")]
    pub differential: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumRuleCheck {
    #[serde(with = "crate::serde_int")]
    pub lhs: BigInt,
    #[serde(with = "crate::serde_int")]
    pub rhs: BigInt,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilnorDecomposition {
    /// `N(l) = <l,l> - <l,u> - n`.
    #[serde(with = "crate::serde_int")]
    pub n_of_ell: BigInt,
    /// Number of singular points of the reduced foliation.
    #[serde(with = "crate::serde_int")]
    pub singularity_count: BigInt,
    #[serde(with = "crate::serde_int")]
    pub total: BigInt,
}

/// Reduction data of a foliation with the derived matrices cached.
#[derive(Debug, Clone)]
pub struct Engine {
    program: BlowUpProgram,
    f: CholeskyMatrix,
    f_inv: IntMatrix,
    a: IntersectionMatrix,
    neg_inv: IntMatrix,
    marking: InvariantMarking,
    hypotheses: HypothesisLedger,
    w0: Vec<BigInt>,
}

impl Engine {
    pub fn new(program: BlowUpProgram, iota: Vec<u8>, hypotheses: HypothesisLedger) -> Result<Self> {
        let f = build_cholesky(&program);
        let a = build_intersection(&f);
        let marking = InvariantMarking::new(iota, &a)?;
        Self::assemble(program, f, a, marking, hypotheses)
    }

    /// Engine over an explicit intersection matrix that need not come from
    /// `program`. Only the property runner uses this, to feed corrupted data.
    pub fn with_intersection(
        program: BlowUpProgram,
        a: IntersectionMatrix,
        iota: Vec<u8>,
        hypotheses: HypothesisLedger,
    ) -> Result<Self> {
        let f = build_cholesky(&program);
        if a.dim() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), found: a.dim() });
        }
        let marking = InvariantMarking::new(iota, &a)?;
        Self::assemble(program, f, a, marking, hypotheses)
    }

    fn assemble(
        program: BlowUpProgram,
        f: CholeskyMatrix,
        a: IntersectionMatrix,
        marking: InvariantMarking,
        hypotheses: HypothesisLedger,
    ) -> Result<Self> {
        let neg_inv = a.neg_inverse()?;
        let f_inv = f.inverse();
        let u = ones(f.dim());
        let w0 = vec_add(&u, &f_inv.mul_vec(&u));
        Ok(Engine { program, f, f_inv, a, neg_inv, marking, hypotheses, w0 })
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn program(&self) -> &BlowUpProgram {
        &self.program
    }

    pub fn cholesky(&self) -> &CholeskyMatrix {
        &self.f
    }

    pub fn cholesky_inverse(&self) -> &IntMatrix {
        &self.f_inv
    }

    pub fn intersection(&self) -> &IntersectionMatrix {
        &self.a
    }

    /// `-A^{-1}`.
    pub fn neg_inverse(&self) -> &IntMatrix {
        &self.neg_inv
    }

    pub fn marking(&self) -> &InvariantMarking {
        &self.marking
    }

    pub fn hypotheses(&self) -> &HypothesisLedger {
        &self.hypotheses
    }

    pub fn hypotheses_mut(&mut self) -> &mut HypothesisLedger {
        &mut self.hypotheses
    }

    /// `(I + F^{-1}) u`.
    pub fn shifted_ones(&self) -> &[BigInt] {
        &self.w0
    }

    fn check(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }

    fn check_nonnegative(&self, v: &[BigInt], what: &str) -> Result<()> {
        self.check(v)?;
        if let Some(x) = v.iter().find(|x| x.is_negative()) {
            return Err(Error::NegativeResult { quantity: format!("entry of {what}"), value: x.to_string() });
        }
        Ok(())
    }

    /// `<-A^{-1} x, y>`.
    pub fn form(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        dot(&self.neg_inv.mul_vec(x), y)
    }

    /// `(F^{-1})^T S_B - F iota`, the orders of the pulled-back 1-form.
    pub fn discrepancies(&self, s_b: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check(s_b)?;
        self.hypotheses.require(&[Hypothesis::SecondClass, Hypothesis::BalancedDivisorChecked])?;
        Ok(self.discrepancies_unchecked(s_b))
    }

    pub fn discrepancies_unchecked(&self, s_b: &[BigInt]) -> Vec<BigInt> {
        vec_sub(&self.f_inv.tr_mul_vec(s_b), &self.f.matrix().mul_vec(&self.marking.iota()))
    }

    /// Multiplicities of the curve at the successive centers.
    pub fn curve_multiplicity_sequence(&self, s_c: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_nonnegative(s_c, "S_C")?;
        Ok(self.f_inv.tr_mul_vec(s_c))
    }

    pub fn vanishing_orders(&self, s_c: &[BigInt]) -> Result<VanishingOrders> {
        self.check_nonnegative(s_c, "S_C")?;
        let total = self.neg_inv.mul_vec(s_c);
        let shifted = vec_sub(&total, &ones(self.dim()));
        let differential = self.f.matrix().mul_vec(&shifted);
        Ok(VanishingOrders { total, differential })
    }

    /// `<-A^{-1}S,S> - <S,(I+F^{-1})u> + 1` with no side conditions.
    pub fn milnor_form(&self, s: &[BigInt]) -> Result<BigInt> {
        self.check(s)?;
        Ok(self.form(s, s) - dot(s, &self.w0) + BigInt::one())
    }

    fn nonnegative(value: BigInt, quantity: &str) -> Result<BigInt> {
        if value.is_negative() {
            return Err(Error::NegativeResult { quantity: quantity.into(), value: value.to_string() });
        }
        Ok(value)
    }

    pub fn milnor_foliation(&self, s_b: &[BigInt]) -> Result<BigInt> {
        self.hypotheses.require(&[Hypothesis::GeneralizedCurve, Hypothesis::BalancedDivisorChecked])?;
        Self::nonnegative(self.milnor_form(s_b)?, "Milnor number of the foliation")
    }

    /// Milnor number of a reduced curve from its attachment vector.
    pub fn milnor_curve(&self, s_f: &[BigInt]) -> Result<BigInt> {
        self.check_nonnegative(s_f, "S_f")?;
        Self::nonnegative(self.milnor_form(s_f)?, "Milnor number of the curve")
    }

    pub fn intersection_number(&self, s_f: &[BigInt], s_g: &[BigInt]) -> Result<BigInt> {
        self.check(s_f)?;
        self.check(s_g)?;
        Ok(self.form(s_f, s_g))
    }

    /// `<-A^{-1}(S_B - S_C), S_C>`.
    pub fn gsv(&self, s_b: &[BigInt], s_c: &[BigInt]) -> Result<BigInt> {
        self.check(s_b)?;
        self.check(s_c)?;
        self.hypotheses.require(&[Hypothesis::GeneralizedCurve, Hypothesis::BalancedDivisorChecked])?;
        Ok(self.form(&vec_sub(s_b, s_c), s_c))
    }

    /// `GSV(C1 + C2) = GSV(C1) + GSV(C2) - 2 i(C1, C2)`.
    pub fn gsv_sum_rule_check(&self, s_b: &[BigInt], c1: &[BigInt], c2: &[BigInt]) -> Result<SumRuleCheck> {
        let lhs = self.gsv(s_b, &vec_add(c1, c2))?;
        let rhs = self.gsv(s_b, c1)? + self.gsv(s_b, c2)? - BigInt::from(2) * self.intersection_number(c1, c2)?;
        Ok(SumRuleCheck { holds: lhs == rhs, lhs, rhs })
    }

    /// `CS(C1 + C2) = CS(C1) + CS(C2) + 2 i(C1, C2)` on the combinatorial part.
    pub fn cs_sum_rule_check(&self, c1: &[BigInt], c2: &[BigInt]) -> Result<SumRuleCheck> {
        let lhs = self.cs_combinatorial(&vec_add(c1, c2))?;
        let rhs = self.cs_combinatorial(c1)? + self.cs_combinatorial(c2)?
            + BigInt::from(2) * self.intersection_number(c1, c2)?;
        Ok(SumRuleCheck { holds: lhs == rhs, lhs, rhs })
    }

    /// `mu(fg) = mu(f) + mu(g) + 2 i(f, g) - 1`.
    pub fn milnor_product_rule_check(&self, s_f: &[BigInt], s_g: &[BigInt]) -> Result<SumRuleCheck> {
        let lhs = self.milnor_form(&vec_add(s_f, s_g))?;
        let rhs = self.milnor_form(s_f)? + self.milnor_form(s_g)? + BigInt::from(2) * self.intersection_number(s_f, s_g)?
            - BigInt::one();
        Ok(SumRuleCheck { holds: lhs == rhs, lhs, rhs })
    }

    /// Milnor number of the foliation along an invariant divisor:
    /// `<-A^{-1}S_B - (I+F^{-1})u, S_D> + 1`.
    pub fn milnor_along(&self, s_b: &[BigInt], s_d: &[BigInt]) -> Result<BigInt> {
        self.check(s_b)?;
        self.check(s_d)?;
        self.hypotheses.require(&[Hypothesis::GeneralizedCurve, Hypothesis::BalancedDivisorChecked])?;
        let w = vec_sub(&self.neg_inv.mul_vec(s_b), &self.w0);
        Ok(dot(&w, s_d) + BigInt::one())
    }

    /// The correction term `<-A^{-1}S_C, S_C>` of the Camacho-Sad index.
    pub fn cs_combinatorial(&self, s_c: &[BigInt]) -> Result<BigInt> {
        self.check(s_c)?;
        Ok(self.form(s_c, s_c))
    }

    fn attachment_records<'a>(
        &self,
        branch: &BranchAttachment,
        reduced: &'a ReducedData,
    ) -> Result<Vec<(&'a ReducedRecord, BigInt)>> {
        let mut out = Vec::new();
        if branch.kind(&self.marking)? != BranchKind::Isolated {
            return Ok(out);
        }
        for (j, sj) in branch.s().iter().enumerate() {
            if sj.is_zero() {
                continue;
            }
            let rec = reduced.attachment(&branch.name, j).ok_or_else(|| {
                Error::MissingReducedData(format!("branch {} on component {}", branch.name, j + 1))
            })?;
            out.push((rec, sj.clone()));
        }
        Ok(out)
    }

    fn points_cs(&self, branch: &BranchAttachment, reduced: &ReducedData) -> Result<Exact> {
        let mut acc = Exact::zero();
        for (rec, count) in self.attachment_records(branch, reduced)? {
            let cs = rec.cs.as_ref().ok_or_else(|| {
                Error::MissingReducedData(format!("Camacho-Sad index of {} at {:?}", branch.name, rec.location))
            })?;
            acc = acc.add(&cs.scale(&BigRational::from_integer(count)))?;
        }
        Ok(acc)
    }

    fn points_var(&self, branch: &BranchAttachment, reduced: &ReducedData) -> Result<Exact> {
        let mut acc = Exact::zero();
        for (rec, count) in self.attachment_records(branch, reduced)? {
            let var = match (&rec.var, &rec.cs) {
                (Some(v), _) => v.clone(),
                // At a nondegenerate reduced point GSV_p = 1.
                (None, Some(cs)) => {
                    self.hypotheses.require(&[Hypothesis::GeneralizedCurve])?;
                    cs.add(&Exact::integer(1))?
                }
                (None, None) => {
                    return Err(Error::MissingReducedData(format!(
                        "variation index of {} at {:?}",
                        branch.name, rec.location
                    )))
                }
            };
            acc = acc.add(&var.scale(&BigRational::from_integer(count)))?;
        }
        Ok(acc)
    }

    /// Camacho-Sad index along `C = C0 - C_inf`. Both parts contribute their
    /// local indices with a plus sign; the polar part enters the quadratic
    /// term through `S_C = S_C0 - S_Cinf`.
    pub fn cs_total(&self, c: &SeparatrixDivisor, reduced: &ReducedData) -> Result<Exact> {
        self.hypotheses.require(&[Hypothesis::GeneralizedCurve])?;
        let mut acc = Exact::zero();
        for t in c.terms() {
            if t.coefficient.is_zero() {
                continue;
            }
            acc = acc.add(&self.points_cs(&t.branch, reduced)?)?;
        }
        let s_c = c.total_vector(self.dim())?;
        acc.add(&Exact::integer(self.cs_combinatorial(&s_c)?))
    }

    /// Variation index along `C = C0 - C_inf`. Local indices with `var`
    /// missing default to `cs + 1`.
    pub fn var_total(&self, s_b: &[BigInt], c: &SeparatrixDivisor, reduced: &ReducedData) -> Result<Exact> {
        self.check(s_b)?;
        self.hypotheses.require(&[Hypothesis::GeneralizedCurve, Hypothesis::BalancedDivisorChecked])?;
        let mut acc = Exact::zero();
        for t in c.terms() {
            if t.coefficient.is_zero() {
                continue;
            }
            let v = self.points_var(&t.branch, reduced)?;
            acc = acc.add(&v.scale(&BigRational::from_integer(t.coefficient.clone())))?;
        }
        let s_c = c.total_vector(self.dim())?;
        let w = vec_sub(&self.neg_inv.mul_vec(s_b), &self.marking.iota());
        acc.add(&Exact::integer(dot(&w, &s_c)))
    }

    /// The correction `<-A^{-1}S_B,S_B> - 2<S_B,iota> - <A iota,iota>` of the
    /// Baum-Bott formula, which equals `<l,l>`.
    pub fn bb_correction(&self, s_b: &[BigInt]) -> Result<BigInt> {
        self.check(s_b)?;
        let iota = self.marking.iota();
        let a_iota = self.a.matrix().mul_vec(&iota);
        Ok(self.form(s_b, s_b) - BigInt::from(2) * dot(s_b, &iota) - dot(&a_iota, &iota))
    }

    /// Baum-Bott index. `isolated` lists every isolated separatrix branch;
    /// `reduced` must cover their attachment points and all corners between
    /// invariant components.
    pub fn bb_total(&self, s_b: &[BigInt], isolated: &[BranchAttachment], reduced: &ReducedData) -> Result<Exact> {
        self.hypotheses.require(&[Hypothesis::SecondClass, Hypothesis::BalancedDivisorChecked])?;
        let mut acc = Exact::zero();
        for b in isolated {
            if b.kind(&self.marking)? != BranchKind::Isolated {
                return Err(Error::InvalidBranch { name: b.name.clone(), reason: "not isolated".into() });
            }
            for (rec, count) in self.attachment_records(b, reduced)? {
                acc = acc.add(&rec.baum_bott()?.scale(&BigRational::from_integer(count)))?;
            }
        }
        for (i, j) in self.a.corners() {
            if !(self.marking.is_invariant(i) && self.marking.is_invariant(j)) {
                continue;
            }
            let rec = reduced
                .corner(i, j)
                .ok_or_else(|| Error::MissingReducedData(format!("corner E{} E{}", i + 1, j + 1)))?;
            acc = acc.add(&rec.baum_bott()?)?;
        }
        acc.add(&Exact::integer(self.bb_correction(s_b)?))
    }

    /// Splits the Milnor number into `N(l)` and the number of reduced
    /// singular points. `s_i` is the vector of the isolated separatrices.
    pub fn milnor_decomposition(&self, s_b: &[BigInt], s_i: &[BigInt]) -> Result<MilnorDecomposition> {
        self.check(s_i)?;
        self.hypotheses.require(&[Hypothesis::GeneralizedCurve, Hypothesis::BalancedDivisorChecked])?;
        let n = self.dim();
        let ell = self.discrepancies(s_b)?;
        let u = ones(n);
        let n_of_ell = dot(&ell, &ell) - dot(&ell, &u) - BigInt::from(n);
        let valence_sum = self
            .marking
            .dicriticals()
            .into_iter()
            .try_fold(BigInt::zero(), |acc, i| Ok::<_, Error>(acc + self.a.valence(i)?))?;
        let singularity_count = dot(s_i, &u) + BigInt::from(n) - BigInt::one() - valence_sum;
        let total = &n_of_ell + &singularity_count;
        Ok(MilnorDecomposition { n_of_ell, singularity_count, total })
    }
}

/// `(F^{-1})(F^{-1})^T`, the Cholesky route to `-A^{-1}`.
pub fn neg_inverse_via_cholesky(f: &CholeskyMatrix) -> IntMatrix {
    let inv = f.inverse();
    inv.mul(&inv.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::int_vec;

    fn genzmer() -> Engine {
        let p = BlowUpProgram::new(vec![vec![], vec![1], vec![1, 2]]).unwrap();
        let mut h = HypothesisLedger::generalized_curve();
        h.balanced_divisor_checked = crate::hypotheses::HypothesisStatus::Asserted;
        Engine::new(p, vec![0, 0, 1], h).unwrap()
    }

    #[test]
    fn three_step_values() {
        let e = genzmer();
        let b = int_vec(&[1, 1, 1]);
        assert_eq!(e.shifted_ones(), int_vec(&[2, 3, 5]).as_slice());
        assert_eq!(e.milnor_foliation(&b).unwrap(), BigInt::from(12));
        assert_eq!(e.discrepancies(&b).unwrap(), int_vec(&[4, 2, 0]));
        assert_eq!(e.milnor_curve(&int_vec(&[0, 0, 1])).unwrap(), BigInt::from(2));
        assert_eq!(e.milnor_curve(&int_vec(&[2, 2, 0])).unwrap(), BigInt::from(11));
        assert_eq!(e.gsv(&b, &int_vec(&[0, 0, 1])).unwrap(), BigInt::from(5));
        assert_eq!(e.milnor_along(&b, &int_vec(&[0, 0, 1])).unwrap(), BigInt::from(7));
        assert_eq!(e.cs_combinatorial(&int_vec(&[-1, -1, 1])).unwrap(), BigInt::from(1));
        let d = e.milnor_decomposition(&b, &int_vec(&[0, 0, 1])).unwrap();
        assert_eq!((d.n_of_ell, d.singularity_count, d.total), (11.into(), 1.into(), 12.into()));
        assert_eq!(neg_inverse_via_cholesky(e.cholesky()), *e.neg_inverse());
    }

    #[test]
    fn hypotheses_are_enforced() {
        let p = BlowUpProgram::new(vec![vec![]]).unwrap();
        let e = Engine::new(p, vec![1], HypothesisLedger::default()).unwrap();
        let s = int_vec(&[2]);
        assert_eq!(e.milnor_foliation(&s), Err(Error::HypothesisMissing(Hypothesis::GeneralizedCurve)));
        assert!(e.milnor_curve(&s).is_ok());
        assert!(matches!(e.milnor_curve(&int_vec(&[1, 1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn baum_bott_record_consistency() {
        let mut r = ReducedRecord::new(Location::Corner { first: 0, second: 1 });
        r.cs = Some(Exact::integer(-2));
        assert_eq!(r.baum_bott().unwrap(), "-1/2".parse().unwrap());
        r.bb = Some(Exact::integer(1));
        assert!(matches!(r.baum_bott(), Err(Error::InvalidReducedData(_))));
    }
}
