use dicrit_germ::numfield::Q;
use dicrit_germ::oracle::{
    apply_change, clean_axis, intersection, leading_constant, valuation_generic, valuation_multimodular, Multiplicity,
    OracleConfig,
};
use dicrit_germ::parse::{parse_germ, Germ};
use dicrit_germ::resolve::{oracle_cross_check, resolve_curves, ResolveConfig};
use num_bigint::BigInt;
use proptest::prelude::*;

const MODELS: &[&str] = &["x", "y - x^2", "y^2 - x^3", "y^2 - x^5", "x^2 - y^3 + x*y^2", "y^3 - x^4", "x*y + y^3", "y^2 + x^2*y + x^4"];

fn q(k: i64) -> Q {
    Q::from_integer(k.into())
}

fn changed(model: usize, m: [i64; 4], tail: i64) -> Germ {
    let base = parse_germ(MODELS[model]).unwrap();
    // an extra term of order 4 keeps the germ analytically general
    let extra = Germ::monomial(q(tail), 2, 2);
    apply_change(&(&base + &extra), m)
}

fn unimodular() -> impl Strategy<Value = [i64; 4]> {
    (-4i64..=4, -4i64..=4, -4i64..=4).prop_filter_map("unimodular", |(a, b, c)| {
        // a d - b c = 1 with d solved when possible
        if a != 0 && (1 + b * c) % a == 0 {
            Some([a, b, c, (1 + b * c) / a])
        } else if a == 0 && b * c == -1 {
            Some([0, b, c, 0])
        } else {
            None
        }
    })
}

fn germ() -> impl Strategy<Value = Germ> {
    (0..MODELS.len(), unimodular(), -3i64..=3).prop_map(|(k, m, t)| changed(k, m, t))
}

fn cfg() -> OracleConfig {
    OracleConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn symmetric_and_additive(f in germ(), g in germ(), h in germ()) {
        prop_assume!(f.gcd(&g).is_constant() && f.gcd(&h).is_constant() && g.gcd(&h).is_constant());
        let fh = intersection(&f, &h, &cfg()).unwrap();
        let gh = intersection(&g, &h, &cfg()).unwrap();
        let hf = intersection(&h, &f, &cfg()).unwrap();
        prop_assert_eq!(fh, hf);
        let fgh = intersection(&(&f * &g), &h, &cfg()).unwrap();
        prop_assert_eq!(fgh.finite(), Some(fh.finite().unwrap() + gh.finite().unwrap()));
    }

    #[test]
    fn transverse_smooth_pairs_meet_once(m in unimodular(), a in -5i64..=5, b in -5i64..=5) {
        let x = Germ::x();
        let y = Germ::y();
        let f = &x + &(&(&y * &y).scale(&q(a)) + &(&x * &(&x * &y)).scale(&q(b)));
        let g = &y + &(&x * &x).scale(&q(b));
        prop_assert_eq!(intersection(&apply_change(&f, m), &apply_change(&g, m), &cfg()).unwrap(), Multiplicity::Finite(1));
    }

    #[test]
    fn resultant_routes_agree(f in germ(), g in germ(), m in unimodular()) {
        let (ft, gt) = (apply_change(&f, m), apply_change(&g, m));
        prop_assume!(leading_constant(&ft) && leading_constant(&gt) && clean_axis(&ft, &gt));
        prop_assert_eq!(valuation_multimodular(&ft, &gt), valuation_generic(&ft, &gt));
    }

    #[test]
    fn resolution_matches_oracle(f in germ(), g in germ()) {
        prop_assume!(f.gcd(&g).is_constant());
        let res = resolve_curves(&[f.clone(), g.clone()], &ResolveConfig::default()).unwrap();
        let named = vec![("f".to_string(), f), ("g".to_string(), g)];
        for check in oracle_cross_check(&res, &named, &cfg()).unwrap() {
            prop_assert!(check.agrees(), "{:?}", check);
        }
        // Noether: the intersection number is the sum of products of multiplicities.
        let noether: BigInt = res.nu[0].iter().zip(&res.nu[1]).map(|(a, b)| a * b).sum();
        let direct = intersection(&named[0].1, &named[1].1, &cfg()).unwrap();
        prop_assert_eq!(Some(noether), direct.finite().map(BigInt::from));
    }
}
