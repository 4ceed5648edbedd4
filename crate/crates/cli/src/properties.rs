//! Structural identities of a blow-up program, each checked against a
//! second computation.

use std::collections::BTreeSet;

use dicrit_core::invariants::neg_inverse_via_cholesky;
use dicrit_core::program::{build_cholesky, build_intersection, ones, IntersectionMatrix};
use dicrit_core::{BlowUpProgram, IntMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::report::{fmt_matrix, Check};

/// Intersection matrix obtained by replaying the blow-ups: each center
/// lowers the self-intersection of the components through it by one and a
/// corner center separates its two components.
pub fn simulate_intersection(program: &BlowUpProgram) -> IntMatrix {
    let n = program.len();
    let mut selfint = vec![0i64; n];
    let mut edges = BTreeSet::new();
    for k in 0..n {
        let c = program.centers(k);
        selfint[k] = -1;
        for &i in c {
            selfint[i] -= 1;
        }
        if let [i, j] = c {
            edges.remove(&((*i).min(*j), (*i).max(*j)));
        }
        for &i in c {
            edges.insert((i, k));
        }
    }
    IntMatrix::from_fn(n, n, |i, j| {
        if i == j {
            BigInt::from(selfint[i])
        } else if edges.contains(&(i.min(j), i.max(j))) {
            BigInt::one()
        } else {
            BigInt::from(0)
        }
    })
}

/// The identities relating `F`, `A` and `-A^{-1}`. With `flip_sign` the
/// intersection matrix is negated before checking, which must be caught.
pub fn structure_checks(program: &BlowUpProgram, flip_sign: bool) -> Vec<Check> {
    let n = program.len();
    let f = build_cholesky(program);
    let fm = f.matrix();
    let a = {
        let a = build_intersection(&f).matrix().clone();
        if flip_sign {
            a.neg()
        } else {
            a
        }
    };
    let mut out = Vec::new();
    let mut push = |name: &str, holds: bool, detail: String| {
        out.push(Check { name: name.to_string(), holds, detail: if holds { String::new() } else { detail } });
    };

    let ftf = fm.transpose().mul(fm).neg();
    push("A = -F^T F", a == ftf, format!("A = {} but -F^T F = {}", fmt_matrix(&a), fmt_matrix(&ftf)));
    let sim = simulate_intersection(program);
    push("A matches the blow-up replay", a == sim, format!("A = {} but replay gives {}", fmt_matrix(&a), fmt_matrix(&sim)));

    let ftu = fm.tr_mul_vec(&ones(n));
    let diag_ok = (0..n).all(|i| ftu[i] == BigInt::from(2) + &a[(i, i)]);
    push("F^T u = 2u + diag A", diag_ok, "componentwise mismatch".into());

    let mut upper = BigInt::from(0);
    for i in 0..n {
        for j in i + 1..n {
            upper += &a[(i, j)];
        }
    }
    push("sum_{i<j} A_ij = n - 1", upper == BigInt::from(n) - 1, format!("sum is {upper} for n = {n}"));

    let det = fm.map(|x| BigRational::from_integer(x.clone())).determinant();
    push("det F = 1", det.is_one(), format!("det F = {det}"));

    let chol = neg_inverse_via_cholesky(&f);
    match IntersectionMatrix::from_matrix(a).and_then(|m| m.neg_inverse()) {
        Ok(inv) => {
            let positive = inv.to_rows().iter().flatten().all(Signed::is_positive);
            push("-A^-1 > 0", positive, format!("-A^-1 = {}", fmt_matrix(&inv)));
            push("-A^-1 = F^-1 F^-T", inv == chol, format!("{} vs {}", fmt_matrix(&inv), fmt_matrix(&chol)));
        }
        Err(e) => push("-A^-1 > 0", false, e.to_string()),
    }
    out
}
