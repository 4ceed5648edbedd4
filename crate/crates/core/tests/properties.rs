use dicrit_core::divisor::{bal_pairing_check, enumerate_balanced, is_balanced};
use dicrit_core::hypotheses::HypothesisStatus;
use dicrit_core::invariants::neg_inverse_via_cholesky;
use dicrit_core::matrix::{dot, vec_add};
use dicrit_core::program::{build_cholesky, build_intersection, ones};
use dicrit_core::{BlowUpProgram, BranchAttachment, Engine, HypothesisLedger, InvariantMarking, RationalMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn program() -> impl Strategy<Value = BlowUpProgram> {
    prop::collection::vec((any::<bool>(), 0usize..64), 0..12).prop_map(|c| BlowUpProgram::from_choices(&c))
}

fn attachment_vector(n: usize) -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec(0i64..3, n).prop_map(|v| v.into_iter().map(BigInt::from).collect())
}

fn program_and_vectors() -> impl Strategy<Value = (BlowUpProgram, Vec<BigInt>, Vec<BigInt>)> {
    program().prop_flat_map(|p| {
        let n = p.len();
        (Just(p), attachment_vector(n), attachment_vector(n))
    })
}

fn checked() -> HypothesisLedger {
    let mut h = HypothesisLedger::generalized_curve();
    h.balanced_divisor_checked = HypothesisStatus::Asserted;
    h
}

/// Milnor number of a union of curvettes by the delta-invariant formula:
/// `2 delta - r + 1` with `delta = sum m_k (m_k - 1) / 2` over the centers.
fn curvette_milnor(p: &BlowUpProgram, s: &[BigInt]) -> BigInt {
    // Multiplicities propagate down the proximity relations: the multiplicity
    // at center k is the number of curvette points on E_k plus the
    // multiplicities at the later centers lying on E_k.
    let n = p.len();
    let mut m = vec![BigInt::zero(); n];
    for k in (0..n).rev() {
        let mut acc = s[k].clone();
        for j in k + 1..n {
            if p.centers(j).contains(&k) {
                acc += &m[j];
            }
        }
        m[k] = acc;
    }
    let r: BigInt = s.iter().sum();
    m.iter().map(|x| x * (x - 1)).sum::<BigInt>() - r + 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cholesky_structure(p in program()) {
        let n = p.len();
        let f = build_cholesky(&p);
        prop_assert!(f.matrix().is_unit_lower_triangular());
        let fq = f.matrix().map(|x| BigRational::from_integer(x.clone()));
        prop_assert_eq!(fq.determinant(), BigRational::one());
        let inv = f.inverse();
        prop_assert!(inv.to_rows().iter().flatten().all(|x| *x >= BigInt::zero()));
        prop_assert_eq!(f.matrix().mul(&inv), dicrit_core::IntMatrix::identity(n));
        for k in 1..=n {
            let prefix = build_cholesky(&p.prefix(k));
            prop_assert_eq!(prefix.matrix(), &f.matrix().leading_block(k));
        }
    }

    #[test]
    fn intersection_structure(p in program()) {
        let n = p.len();
        let f = build_cholesky(&p);
        let a = build_intersection(&f);
        let m = a.matrix();
        prop_assert!(m.is_symmetric());
        prop_assert!(a.is_tree());
        prop_assert!(a.is_negative_definite());
        let mut upper = BigInt::zero();
        for i in 0..n {
            for j in i + 1..n {
                upper += &m[(i, j)];
            }
        }
        prop_assert_eq!(upper, BigInt::from(n - 1));
        // F^T u = 2u + diag A.
        let u = ones(n);
        let ftu = f.matrix().tr_mul_vec(&u);
        for i in 0..n {
            prop_assert_eq!(&ftu[i], &(BigInt::from(2) + &m[(i, i)]));
        }
        // -A^{-1} by Gauss-Jordan agrees with F^{-1} F^{-T}.
        let gauss = a.neg_inverse_rational().unwrap();
        let chol: RationalMatrix = neg_inverse_via_cholesky(&f).map(|x| BigRational::from_integer(x.clone()));
        prop_assert_eq!(gauss, chol);
    }

    #[test]
    fn curve_formulas((p, s, t) in program_and_vectors()) {
        let e = Engine::new(p.clone(), vec![1; p.len()], checked()).unwrap();
        prop_assume!(s.iter().any(|x| !x.is_zero()));
        prop_assert_eq!(e.milnor_form(&s).unwrap(), curvette_milnor(&p, &s));
        // Noether: intersection number is the sum of products of multiplicities.
        let ms = e.curve_multiplicity_sequence(&s).unwrap();
        let mt = e.curve_multiplicity_sequence(&t).unwrap();
        prop_assert_eq!(e.intersection_number(&s, &t).unwrap(), dot(&ms, &mt));
        let prod = e.milnor_product_rule_check(&s, &t).unwrap();
        prop_assert!(prod.holds);
        let cs = e.cs_sum_rule_check(&s, &t).unwrap();
        prop_assert!(cs.holds);
        // A M = -S.
        let orders = e.vanishing_orders(&s).unwrap();
        let am = e.intersection().matrix().mul_vec(&orders.total);
        prop_assert!(am.iter().zip(&s).all(|(x, y)| *x == -y.clone()));
    }

    #[test]
    fn foliation_identities(
        (p, iso, c) in program_and_vectors(),
        wishes in prop::collection::vec(any::<bool>(), 12),
        extra in 0usize..3,
    ) {
        let n = p.len();
        let f = build_cholesky(&p);
        let a = build_intersection(&f);
        let marking = InvariantMarking::from_wishes(&wishes, &a);
        let iso: Vec<BigInt> = (0..n).map(|i| if marking.is_invariant(i) { iso[i].clone() } else { BigInt::zero() }).collect();
        let isolated: Vec<BranchAttachment> = if iso.iter().all(Zero::is_zero) {
            Vec::new()
        } else {
            vec![BranchAttachment::new("I", iso.clone()).unwrap()]
        };
        let e = Engine::new(p, marking.raw().to_vec(), checked()).unwrap();
        let divisors = enumerate_balanced(&marking, &a, &isolated, 2 + extra, 20).unwrap();
        for d in &divisors {
            prop_assert!(is_balanced(d, &marking, &a, Some(&isolated)).unwrap().balanced);
            let s_b = d.total_vector(n).unwrap();
            prop_assert_eq!(bal_pairing_check(&s_b, &marking, &a, &f).unwrap(), BigInt::zero());
            let mu = e.milnor_form(&s_b).unwrap();
            let dec = e.milnor_decomposition(&s_b, &iso).unwrap();
            prop_assert_eq!(&dec.total, &mu);
            let ell = e.discrepancies(&s_b).unwrap();
            prop_assert_eq!(e.bb_correction(&s_b).unwrap(), dot(&ell, &ell));
            // mu(F, C) = GSV(F, C) + mu(C).
            prop_assert_eq!(
                e.milnor_along(&s_b, &c).unwrap(),
                e.gsv(&s_b, &c).unwrap() + e.milnor_form(&c).unwrap()
            );
            let rule = e.gsv_sum_rule_check(&s_b, &c, &iso).unwrap();
            prop_assert!(rule.holds);
        }
        // The Milnor number does not depend on the balanced divisor chosen.
        let values: Vec<BigInt> = divisors.iter().map(|d| e.milnor_form(&d.total_vector(n).unwrap()).unwrap()).collect();
        prop_assert!(values.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn non_dicritical_has_one_balanced_divisor((p, iso, _c) in program_and_vectors()) {
        let n = p.len();
        let a = build_intersection(&build_cholesky(&p));
        let marking = InvariantMarking::all_invariant(n);
        prop_assume!(iso.iter().any(|x| !x.is_zero()));
        let isolated = vec![BranchAttachment::new("I", iso).unwrap()];
        let all = enumerate_balanced(&marking, &a, &isolated, 4, 100).unwrap();
        prop_assert_eq!(all.len(), 1);
        let s = all[0].total_vector(n).unwrap();
        prop_assert_eq!(s, vec_add(isolated[0].s(), &vec![BigInt::zero(); n]));
    }
}
