use dicrit_core::divisor::{bal_pairing_check, enumerate_balanced, is_balanced};
use dicrit_core::hypotheses::HypothesisStatus;
use dicrit_core::invariants::{neg_inverse_via_cholesky, Location, ReducedData, ReducedRecord};
use dicrit_core::pencil::{
    bifurcation_formula_check, fiber_gsv_check, reduced_singularities, semitame_check, unfolding_dimension,
    Fiber, GenericFiber, Generators, PencilData,
};
use dicrit_core::program::{build_cholesky, build_intersection, int_vec};
use dicrit_core::{
    BlowUpProgram, BranchAttachment, Engine, Exact, Foliation, HypothesisLedger, IntMatrix, PencilModel,
    SeparatrixDivisor,
};
use num_bigint::BigInt;

fn imat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| int_vec(r)).collect())
}

fn v(x: &[i64]) -> Vec<BigInt> {
    int_vec(x)
}

fn checked() -> HypothesisLedger {
    let mut h = HypothesisLedger::generalized_curve();
    h.balanced_divisor_checked = HypothesisStatus::Asserted;
    h
}

fn three_step() -> BlowUpProgram {
    BlowUpProgram::new(vec![vec![], vec![1], vec![1, 2]]).unwrap()
}

fn six_step() -> BlowUpProgram {
    BlowUpProgram::new(vec![vec![], vec![1], vec![1, 2], vec![2, 3], vec![1], vec![1]]).unwrap()
}

#[test]
fn three_step_matrices() {
    let f = build_cholesky(&three_step());
    let a = build_intersection(&f);
    assert_eq!(f.matrix(), &imat(&[&[1, 0, 0], &[-1, 1, 0], &[-1, -1, 1]]));
    assert_eq!(a.matrix(), &imat(&[&[-3, 0, 1], &[0, -2, 1], &[1, 1, -1]]));
    assert_eq!(a.neg_inverse().unwrap(), imat(&[&[1, 1, 2], &[1, 2, 3], &[2, 3, 6]]));
    assert_eq!(neg_inverse_via_cholesky(&f), a.neg_inverse().unwrap());
}

#[test]
fn single_blow_up() {
    let p = BlowUpProgram::new(vec![vec![]]).unwrap();
    let f = build_cholesky(&p);
    assert_eq!(build_intersection(&f).matrix(), &imat(&[&[-1]]));
    // A single transverse curve through the origin.
    let e = Engine::new(p, vec![1], checked()).unwrap();
    assert_eq!(e.milnor_curve(&v(&[1])).unwrap(), BigInt::from(0));
    // Radial foliation: dicritical E1 with balanced divisor of two lines.
    let radial = Engine::new(BlowUpProgram::new(vec![vec![]]).unwrap(), vec![0], checked()).unwrap();
    assert_eq!(radial.milnor_foliation(&v(&[2])).unwrap(), BigInt::from(1));
}

#[test]
fn cusp_from_its_program() {
    let e = Engine::new(three_step(), vec![1, 1, 1], checked()).unwrap();
    let s = v(&[0, 0, 1]);
    assert_eq!(e.milnor_curve(&s).unwrap(), BigInt::from(2));
    assert_eq!(e.curve_multiplicity_sequence(&s).unwrap(), v(&[2, 1, 1]));
    let orders = e.vanishing_orders(&s).unwrap();
    assert_eq!(orders.total, v(&[2, 3, 6]));
    // The Hamiltonian foliation of the cusp has GSV zero along it.
    assert_eq!(e.gsv(&s, &s).unwrap(), BigInt::from(0));
    assert_eq!(e.discrepancies(&s).unwrap(), v(&[1, 1, 2]));
    assert_eq!(e.milnor_foliation(&s).unwrap(), BigInt::from(2));
    let d = e.milnor_decomposition(&s, &s).unwrap();
    assert_eq!((d.n_of_ell, d.singularity_count), (BigInt::from(-1), BigInt::from(3)));
}

#[test]
fn three_step_foliation_values() {
    let e = Engine::new(three_step(), vec![0, 0, 1], checked()).unwrap();
    let b = v(&[1, 1, 1]);
    assert_eq!(e.milnor_foliation(&b).unwrap(), BigInt::from(12));
    assert_eq!(e.discrepancies(&b).unwrap(), v(&[4, 2, 0]));
    // S_f + S_g with f, g generic members.
    assert_eq!(e.milnor_curve(&v(&[2, 2, 0])).unwrap(), BigInt::from(11));
    assert_eq!(e.intersection_number(&v(&[1, 1, 0]), &v(&[1, 1, 0])).unwrap(), BigInt::from(5));
    assert_eq!(e.gsv(&b, &v(&[0, 0, 1])).unwrap(), BigInt::from(5));
    assert_eq!(e.gsv(&b, &v(&[1, 1, 0])).unwrap(), BigInt::from(5));
    assert_eq!(e.milnor_along(&b, &v(&[0, 0, 1])).unwrap(), BigInt::from(7));
    assert_eq!(e.cs_combinatorial(&b).unwrap(), BigInt::from(21));
    assert_eq!(e.cs_combinatorial(&v(&[-1, -1, 1])).unwrap(), BigInt::from(1));
    assert_eq!(e.bb_correction(&b).unwrap(), BigInt::from(20));
    let d = e.milnor_decomposition(&b, &v(&[0, 0, 1])).unwrap();
    assert_eq!((d.n_of_ell, d.singularity_count, d.total), (11.into(), 1.into(), 12.into()));
}

#[test]
fn balance_conditions() {
    let p = three_step();
    let f = build_cholesky(&p);
    let a = build_intersection(&f);
    let e = Engine::new(p, vec![0, 0, 1], checked()).unwrap();
    let h = BranchAttachment::new("h", v(&[0, 0, 1])).unwrap();
    let d1 = BranchAttachment::new("d1", v(&[1, 0, 0])).unwrap();
    let d2 = BranchAttachment::new("d2", v(&[0, 1, 0])).unwrap();
    let good = SeparatrixDivisor::new(vec![(h.clone(), 1.into()), (d1.clone(), 1.into()), (d2.clone(), 1.into())]).unwrap();
    let rep = is_balanced(&good, e.marking(), &a, Some(std::slice::from_ref(&h))).unwrap();
    assert!(rep.balanced, "{:?}", rep.failures);
    assert_eq!(bal_pairing_check(&good.total_vector(3).unwrap(), e.marking(), &a, &f).unwrap(), BigInt::from(0));

    let bad = SeparatrixDivisor::new(vec![(h.clone(), 1.into()), (d1, 1.into())]).unwrap();
    let rep = is_balanced(&bad, e.marking(), &a, Some(std::slice::from_ref(&h))).unwrap();
    assert!(!rep.balanced);
    assert_eq!(bal_pairing_check(&bad.total_vector(3).unwrap(), e.marking(), &a, &f).unwrap(), BigInt::from(-1));

    let missing = SeparatrixDivisor::new(vec![(d2, 1.into())]).unwrap();
    assert!(!is_balanced(&missing, e.marking(), &a, Some(std::slice::from_ref(&h))).unwrap().balanced);

    let all = enumerate_balanced(e.marking(), &a, &[h], 2, 100).unwrap();
    assert!(!all.is_empty());
    for d in &all {
        let s = d.total_vector(3).unwrap();
        assert_eq!(e.milnor_foliation(&s).unwrap(), BigInt::from(12));
    }
}

#[test]
fn three_step_reduced_indices_agree() {
    let branches = vec![
        BranchAttachment::new("h", v(&[0, 0, 1])).unwrap(),
        BranchAttachment::new("f", v(&[1, 1, 0])).unwrap(),
        BranchAttachment::new("g", v(&[1, 1, 0])).unwrap(),
        BranchAttachment::new("phi", v(&[1, 1, 0])).unwrap(),
    ];
    let coefs: Vec<(String, BigInt)> =
        [("h", 1), ("f", 1), ("g", 1), ("phi", -1)].iter().map(|(n, c)| (n.to_string(), BigInt::from(*c))).collect();
    let mut rec = ReducedRecord::new(Location::Attachment { branch: "h".into(), component: 2 });
    rec.cs = Some(Exact::integer(-1));
    let reduced = ReducedData { records: vec![rec] };
    let fol = Foliation::new(three_step(), vec![0, 0, 1], branches, &coefs, HypothesisLedger::generalized_curve(), Some(reduced.clone()))
        .unwrap();
    assert!(fol.balance().balanced);
    let e = fol.engine();
    let s_b = fol.vectors().balanced;
    let twenty = Exact::integer(20);
    assert_eq!(e.cs_total(fol.divisor(), &reduced).unwrap(), twenty);
    assert_eq!(e.var_total(&s_b, fol.divisor(), &reduced).unwrap(), twenty);
    assert_eq!(e.bb_total(&s_b, &fol.isolated(), &reduced).unwrap(), twenty);

    // Var = CS + GSV along each fiber.
    for name in ["h", "f"] {
        let b = fol.branch(name).unwrap().clone();
        let c = SeparatrixDivisor::new(vec![(b.clone(), 1.into())]).unwrap();
        let cs = e.cs_total(&c, &reduced).unwrap();
        let var = e.var_total(&s_b, &c, &reduced).unwrap();
        let gsv = Exact::integer(e.gsv(&s_b, b.s()).unwrap());
        assert_eq!(var, cs.add(&gsv).unwrap(), "{name}");
    }
    let h = SeparatrixDivisor::new(vec![(fol.branch("h").unwrap().clone(), 1.into())]).unwrap();
    assert_eq!(e.var_total(&s_b, &h, &reduced).unwrap(), Exact::integer(10));
}

fn three_step_pencil() -> PencilModel {
    let data = PencilData {
        fibers: vec![Fiber { name: "h".into(), s: v(&[0, 0, 1]), mu: Some(2.into()), conjugates: 1 }],
        generic: GenericFiber { s: v(&[1, 1, 0]), mu: Some(1.into()) },
        i0: 5.into(),
        generators: Generators::default(),
    };
    PencilModel::new(three_step(), vec![0, 0, 1], data).unwrap()
}

#[test]
fn three_step_pencil_checks() {
    let m = three_step_pencil();
    let c = bifurcation_formula_check(&m).unwrap();
    assert_eq!((c.mu_pair.clone(), c.mu_pair_telescoped.clone()), (12.into(), 12.into()));
    assert_eq!((c.mu_fg.clone(), c.excess.clone()), (11.into(), 1.into()));
    assert!(c.holds);
    assert!(fiber_gsv_check(&m).unwrap().holds);
    assert!(!semitame_check(&m).unwrap().semitame);
    assert_eq!(unfolding_dimension(&m).unwrap(), BigInt::from(7));
    let reduced = reduced_singularities(&m).unwrap();
    assert_eq!(reduced.records.len(), 1);
    assert_eq!(reduced.records[0].cs, Some(Exact::integer(-1)));
}

fn six_step_pencil() -> PencilModel {
    let fiber = |name: &str, s: &[i64], mu: i64| Fiber { name: name.into(), s: v(s), mu: Some(mu.into()), conjugates: 1 };
    let data = PencilData {
        fibers: vec![
            fiber("h1", &[0, 0, 0, 1, 0, 0], 8),
            fiber("h2", &[1, 0, 0, 0, 2, 0], 6),
            fiber("h3", &[1, 0, 0, 0, 0, 2], 6),
        ],
        generic: GenericFiber { s: v(&[3, 0, 0, 0, 0, 0]), mu: Some(4.into()) },
        i0: 9.into(),
        generators: Generators::default(),
    };
    PencilModel::new(six_step(), vec![0, 1, 1, 1, 1, 1], data).unwrap()
}

#[test]
fn six_step_pencil_checks() {
    let m = six_step_pencil();
    let e = m.engine();
    assert_eq!(e.intersection().valence(0).unwrap(), BigInt::from(3));
    let s_b = m.balanced_vector();
    assert_eq!(s_b, v(&[-1, 0, 0, 1, 2, 2]));
    // Balance on the dicritical component: 3 - 3 + 1 - 2 = -1 = 2 - 3.
    assert_eq!(s_b[0], BigInt::from(2) - e.intersection().valence(0).unwrap());
    let c = bifurcation_formula_check(&m).unwrap();
    assert_eq!((c.mu_pair.clone(), c.mu_fg.clone(), c.excess.clone()), (33.into(), 25.into(), 8.into()));
    assert!(c.holds);
    assert!(fiber_gsv_check(&m).unwrap().holds);
    assert_eq!(unfolding_dimension(&m).unwrap(), BigInt::from(24));
    assert_eq!(e.discrepancies(&s_b).unwrap(), v(&[6, 1, 1, 2, 1, 1]));

    let reduced = reduced_singularities(&m).unwrap();
    let divisor = dicrit_core::pencil::fiber_balanced_divisor(&m);
    let isolated: Vec<BranchAttachment> = divisor
        .terms()
        .iter()
        .filter(|t| t.branch.isolated_label() == Some(true))
        .map(|t| t.branch.clone())
        .collect();
    let bb = e.bb_total(&s_b, &isolated, &reduced).unwrap();
    let cs = e.cs_total(divisor, &reduced).unwrap();
    let var = e.var_total(&s_b, divisor, &reduced).unwrap();
    assert_eq!(bb, Exact::integer(36));
    assert_eq!(cs, bb);
    assert_eq!(var, bb);
}

#[test]
fn pencil_rejects_inconsistent_data() {
    let data = PencilData {
        fibers: vec![Fiber { name: "h".into(), s: v(&[0, 0, 1]), mu: Some(3.into()), conjugates: 1 }],
        generic: GenericFiber { s: v(&[1, 1, 0]), mu: None },
        i0: 5.into(),
        generators: Generators::default(),
    };
    assert!(matches!(
        PencilModel::new(three_step(), vec![0, 0, 1], data),
        Err(dicrit_core::Error::PathMismatch { .. })
    ));
    let data = PencilData {
        fibers: vec![],
        generic: GenericFiber { s: v(&[1, 1, 0]), mu: None },
        i0: 4.into(),
        generators: Generators::default(),
    };
    assert!(PencilModel::new(three_step(), vec![0, 0, 1], data).is_err());
}
