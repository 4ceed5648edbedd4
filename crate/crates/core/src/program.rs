//! Blow-up programs and the matrices they determine.
//!
//! Components are numbered from 1 in the public API (`centers_one_based`,
//! error messages, reports) and from 0 everywhere else.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{IntMatrix, RationalMatrix};

/// A sequence of point blow-ups. Entry `k` lists the earlier components
/// containing the `k`-th center: none for the first, one for a free point,
/// two for a corner.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct BlowUpProgram {
    centers: Vec<Vec<usize>>,
}

impl BlowUpProgram {
    /// Validates 1-based center lists.
    pub fn new(centers_one_based: Vec<Vec<usize>>) -> Result<Self> {
        let mut prog = BlowUpProgram { centers: Vec::with_capacity(centers_one_based.len()) };
        let mut edges = BTreeSet::new();
        for (k, c) in centers_one_based.into_iter().enumerate() {
            let mut zero_based = Vec::with_capacity(c.len());
            for &i in &c {
                if i == 0 || i > k {
                    return Err(Error::InvalidCenter {
                        step: k + 1,
                        reason: format!("component {i} does not exist before this blow-up"),
                    });
                }
                zero_based.push(i - 1);
            }
            prog.push_checked(zero_based, &mut edges)?;
        }
        Ok(prog)
    }

    pub fn from_zero_based(centers: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(centers.into_iter().map(|c| c.into_iter().map(|i| i + 1).collect()).collect())
    }

    fn push_checked(&mut self, mut c: Vec<usize>, edges: &mut BTreeSet<(usize, usize)>) -> Result<()> {
        let k = self.centers.len();
        c.sort_unstable();
        let err = |reason: &str| Error::InvalidCenter { step: k + 1, reason: reason.to_string() };
        match (k, c.len()) {
            (0, 0) => {}
            (0, _) => return Err(err("the first center lies on no exceptional component")),
            (_, 0) => return Err(err("later centers must lie on the exceptional divisor")),
            (_, 1) => {
                edges.insert((c[0], k));
            }
            (_, 2) => {
                if c[0] == c[1] {
                    return Err(err("repeated component in center"));
                }
                if !edges.remove(&(c[0], c[1])) {
                    return Err(err("the two components do not meet"));
                }
                edges.insert((c[0], k));
                edges.insert((c[1], k));
            }
            _ => return Err(err("a center lies on at most two components")),
        }
        self.centers.push(c);
        Ok(())
    }

    /// Builds a program from abstract choices, one per blow-up after the
    /// first: `(true, i)` blows up the `i`-th existing corner (mod their
    /// number), `(false, i)` a free point of component `i` (mod the count).
    /// Corners are taken in a fixed order, so equal choices give equal programs.
    pub fn from_choices(choices: &[(bool, usize)]) -> Self {
        let mut prog = BlowUpProgram { centers: vec![vec![]] };
        let mut edges = BTreeSet::new();
        for &(corner, idx) in choices {
            let k = prog.centers.len();
            let center = if corner && !edges.is_empty() {
                let &(i, j) = edges.iter().nth(idx % edges.len()).expect("nonempty");
                vec![i, j]
            } else {
                vec![idx % k]
            };
            prog.push_checked(center, &mut edges).expect("choices always give valid centers");
        }
        prog
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// 0-based centers of blow-up `k` (0-based).
    pub fn centers(&self, k: usize) -> &[usize] {
        &self.centers[k]
    }

    pub fn centers_one_based(&self) -> Vec<Vec<usize>> {
        self.centers.iter().map(|c| c.iter().map(|i| i + 1).collect()).collect()
    }

    pub fn prefix(&self, k: usize) -> BlowUpProgram {
        BlowUpProgram { centers: self.centers[..k].to_vec() }
    }

    /// Whether blow-up `k` was centered at a corner.
    pub fn is_satellite(&self, k: usize) -> bool {
        self.centers[k].len() == 2
    }
}

impl TryFrom<Vec<Vec<usize>>> for BlowUpProgram {
    type Error = Error;
    fn try_from(v: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BlowUpProgram> for Vec<Vec<usize>> {
    fn from(p: BlowUpProgram) -> Self {
        p.centers_one_based()
    }
}

/// The unit lower triangular matrix `F` with `-1` in the center columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CholeskyMatrix {
    f: IntMatrix,
}

impl CholeskyMatrix {
    pub fn matrix(&self) -> &IntMatrix {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.f.rows()
    }

    /// `F^{-1}`, whose row `k` is the multiplicity of the `k`-th center on
    /// the strict transforms of the earlier components.
    pub fn inverse(&self) -> IntMatrix {
        self.f.unit_lower_inverse().expect("F is unit lower triangular")
    }

    pub fn leading_block(&self, k: usize) -> CholeskyMatrix {
        CholeskyMatrix { f: self.f.leading_block(k) }
    }
}

pub fn build_cholesky(program: &BlowUpProgram) -> CholeskyMatrix {
    let n = program.len();
    let mut f = IntMatrix::identity(n);
    for k in 0..n {
        for &j in program.centers(k) {
            f[(k, j)] = -BigInt::one();
        }
    }
    CholeskyMatrix { f }
}

/// The intersection matrix `A = -F^T F` of the exceptional components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    a: IntMatrix,
}

impl IntersectionMatrix {
    /// Wraps an arbitrary symmetric integer matrix. Used to feed deliberately
    /// corrupted data to the property runner.
    pub fn from_matrix(a: IntMatrix) -> Result<Self> {
        if !a.is_symmetric() {
            return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
        }
        Ok(IntersectionMatrix { a })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn self_intersection(&self, i: usize) -> &BigInt {
        &self.a[(i, i)]
    }

    pub fn meets(&self, i: usize, j: usize) -> bool {
        i != j && !self.a[(i, j)].is_zero()
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&j| self.meets(i, j)).collect()
    }

    /// Number of other components meeting component `i` (0-based).
    pub fn valence(&self, i: usize) -> Result<BigInt> {
        let n = self.dim();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i + 1, len: n });
        }
        Ok((0..n).filter(|&j| j != i).fold(BigInt::zero(), |acc, j| acc + &self.a[(i, j)]))
    }

    /// `-A^{-1}` by Gauss-Jordan over the rationals.
    pub fn neg_inverse_rational(&self) -> Result<RationalMatrix> {
        let q = self.a.map(|x| BigRational::from_integer(x.clone()));
        q.inverse().map(|m| m.neg()).ok_or(Error::SingularMatrix)
    }

    /// `-A^{-1}`, required to be integral.
    pub fn neg_inverse(&self) -> Result<IntMatrix> {
        let q = self.neg_inverse_rational()?;
        let mut out = IntMatrix::zeros(q.rows(), q.cols());
        for i in 0..q.rows() {
            for j in 0..q.cols() {
                let v = &q[(i, j)];
                if !v.is_integer() {
                    return Err(Error::NonIntegerResult {
                        quantity: format!("(-A^-1)[{},{}]", i + 1, j + 1),
                        value: v.to_string(),
                    });
                }
                out[(i, j)] = v.to_integer();
            }
        }
        Ok(out)
    }

    /// Unordered pairs of distinct meeting components, 0-based.
    pub fn corners(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.meets(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Whether the dual graph is a tree with 0/1 off-diagonal entries.
    pub fn is_tree(&self) -> bool {
        let n = self.dim();
        let mut edges = 0usize;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for i in 0..n {
            for j in i + 1..n {
                let v = &self.a[(i, j)];
                if v.is_zero() {
                    continue;
                }
                if !v.is_one() {
                    return false;
                }
                edges += 1;
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri == rj {
                    return false;
                }
                parent[ri] = rj;
            }
        }
        n == 0 || edges == n - 1
    }

    /// Whether every leading principal minor of `-A` is positive.
    pub fn is_negative_definite(&self) -> bool {
        let neg = self.a.map(|x| BigRational::from_integer(-x.clone()));
        (1..=self.dim()).all(|k| neg.leading_block(k).determinant().is_positive())
    }
}

pub fn build_intersection(f: &CholeskyMatrix) -> IntersectionMatrix {
    let m = f.matrix();
    IntersectionMatrix { a: m.transpose().mul(m).neg() }
}

/// The all-ones vector of length `n`.
pub fn ones(n: usize) -> Vec<BigInt> {
    vec![BigInt::one(); n]
}

pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(ToPrimitive::to_i64).collect()
}

pub fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn imat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| int_vec(r)).collect())
    }

    #[test]
    fn rejects_bad_programs() {
        assert!(BlowUpProgram::new(vec![vec![1]]).is_err());
        assert!(BlowUpProgram::new(vec![vec![], vec![]]).is_err());
        assert!(BlowUpProgram::new(vec![vec![], vec![2]]).is_err());
        assert!(BlowUpProgram::new(vec![vec![], vec![1], vec![1, 1]]).is_err());
        // E1 and E2 no longer meet once their corner has been blown up.
        assert!(BlowUpProgram::new(vec![vec![], vec![1], vec![1, 2], vec![1, 2]]).is_err());
        assert!(BlowUpProgram::new(vec![vec![], vec![1], vec![1, 2], vec![2, 3]]).is_ok());
    }

    #[test]
    fn matrices_of_three_step_program() {
        let p = BlowUpProgram::new(vec![vec![], vec![1], vec![1, 2]]).unwrap();
        let f = build_cholesky(&p);
        assert_eq!(f.matrix(), &imat(&[&[1, 0, 0], &[-1, 1, 0], &[-1, -1, 1]]));
        let a = build_intersection(&f);
        assert_eq!(a.matrix(), &imat(&[&[-3, 0, 1], &[0, -2, 1], &[1, 1, -1]]));
        assert_eq!(a.neg_inverse().unwrap(), imat(&[&[1, 1, 2], &[1, 2, 3], &[2, 3, 6]]));
        assert_eq!(f.inverse(), imat(&[&[1, 0, 0], &[1, 1, 0], &[2, 1, 1]]));
        assert!(a.is_tree());
        assert!(a.is_negative_definite());
        assert_eq!(a.valence(2).unwrap(), BigInt::from(2));
    }
}
