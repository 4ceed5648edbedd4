//! Factorization of univariate rational polynomials (Zassenhaus: modular
//! factorization, Hensel lifting, recombination).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::modp::{self, PolyP};
use crate::poly::Poly;

type ZPoly = Vec<BigInt>;

fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn zmod(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

fn zsym(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn zreduce(a: &ZPoly, m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|x| zmod(x, m)).collect())
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    ztrim(c)
}

fn zscale(a: &ZPoly, c: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|x| x * c).collect())
}

/// Division by a monic polynomial modulo `m`.
fn zdivrem_monic(a: &ZPoly, b: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let db = b.len() - 1;
    debug_assert!(zmod(&b[db], m).is_one());
    let mut r = zreduce(a, m);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = zmod(&r[k + db], m);
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = zmod(&(&r[k + j] - &c * bj), m);
        }
        q[k] = c;
    }
    r.truncate(db);
    (ztrim(q), ztrim(r))
}

/// Exact division over the integers.
fn zdiv_exact(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    if a.len() < b.len() {
        return a.is_empty().then(Vec::new);
    }
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let top = &r[k + db];
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    r.iter().all(Zero::is_zero).then(|| ztrim(q))
}

fn content(a: &ZPoly) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn primitive(a: &ZPoly) -> ZPoly {
    let c = content(a);
    if c.is_zero() {
        return a.clone();
    }
    let c = if a.last().is_some_and(Signed::is_negative) { -c } else { c };
    a.iter().map(|x| x / &c).collect()
}

fn to_modp(a: &ZPoly, p: u64) -> PolyP {
    let pb = BigInt::from(p);
    modp::trim(a.iter().map(|x| zmod(x, &pb).to_u64().expect("reduced")).collect())
}

fn from_modp(a: &PolyP) -> ZPoly {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

/// Primitive integer polynomial with positive leading coefficient
/// proportional to `f`.
pub fn to_primitive_integer(f: &Poly<BigRational>) -> ZPoly {
    let l = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let z: ZPoly = f.coeffs().iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    primitive(&z)
}

fn from_integer(z: &ZPoly) -> Poly<BigRational> {
    Poly::new(z.iter().map(|x| BigRational::from_integer(x.clone())).collect())
}

/// One quadratic Hensel step (von zur Gathen-Gerhard 15.10) from modulus
/// `m` to `m^2`. Requires `h` monic and `s g + t h = 1 mod m`.
fn hensel_step(f: &ZPoly, g: &ZPoly, h: &ZPoly, s: &ZPoly, t: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = zreduce(&zsub(f, &zmul(g, h)), &m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e), h, &m2);
    let g2 = zreduce(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), &m2);
    let h2 = zreduce(&zadd(h, &r), &m2);
    let b = zreduce(&zsub(&zadd(&zmul(s, &g2), &zmul(t, &h2)), &vec![BigInt::one()]), &m2);
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h2, &m2);
    let s2 = zreduce(&zsub(s, &d), &m2);
    let t2 = zreduce(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g2)), &m2);
    (g2, h2, s2, t2)
}

/// Lifts `f = lc(f) prod factors (mod p)` to monic factors modulo
/// `p^(2^steps)`.
fn lift_tree(f: &ZPoly, factors: &[PolyP], p: u64, steps: u32) -> Vec<ZPoly> {
    let m_final = (0..steps).fold(BigInt::from(p), |m, _| &m * &m);
    if factors.len() == 1 {
        let lc = f.last().expect("nonzero").clone();
        let inv = lc.modinv(&m_final).expect("leading coefficient invertible");
        return vec![zreduce(&zscale(f, &inv), &m_final)];
    }
    let mid = factors.len() / 2;
    let lc_p = to_modp(&vec![f.last().unwrap().clone()], p);
    let mut g0 = lc_p;
    for u in &factors[..mid] {
        g0 = modp::pmul(&g0, u, p);
    }
    let mut h0 = vec![1u64];
    for u in &factors[mid..] {
        h0 = modp::pmul(&h0, u, p);
    }
    let (one, s0, t0) = modp::pext_gcd(&g0, &h0, p);
    debug_assert_eq!(one, vec![1]);
    let (mut g, mut h, mut s, mut t) = (from_modp(&g0), from_modp(&h0), from_modp(&s0), from_modp(&t0));
    let mut m = BigInt::from(p);
    for _ in 0..steps {
        (g, h, s, t) = hensel_step(f, &g, &h, &s, &t, &m);
        m = &m * &m;
    }
    let mut out = lift_tree(&g, &factors[..mid], p, steps);
    out.extend(lift_tree(&h, &factors[mid..], p, steps));
    out
}

fn choose_prime(f: &ZPoly, rng: &mut ChaCha8Rng) -> (u64, Vec<PolyP>) {
    let lc = f.last().unwrap();
    let mut best: Option<(u64, Vec<PolyP>)> = None;
    let mut tried = 0;
    for p in modp::primes_from(10007) {
        if (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = modp::pmonic(&to_modp(f, p), p);
        if modp::deg(&modp::pgcd(&fp, &modp::pderiv(&fp, p), p)) != Some(0) {
            continue;
        }
        let fs = modp::factor_squarefree(&fp, p, rng);
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        tried += 1;
        if tried >= 3 {
            break;
        }
    }
    best.expect("some prime keeps the polynomial squarefree")
}

fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &(&r * &r) == n {
        r
    } else {
        r + 1
    }
}

/// Irreducible factors of a squarefree primitive integer polynomial.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let (p, mod_factors) = choose_prime(f, &mut rng);
    if mod_factors.len() == 1 {
        return vec![f.clone()];
    }
    let lc = f.last().unwrap().abs();
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = BigInt::from(2) * &lc * (BigInt::one() << n) * isqrt_ceil(&norm2);
    let mut steps = 0u32;
    let mut m = BigInt::from(p);
    while m <= bound {
        m = &m * &m;
        steps += 1;
    }
    let lifted = lift_tree(f, &mod_factors, p, steps);

    let mut factors = Vec::new();
    let mut fw = f.clone();
    let mut remaining: Vec<ZPoly> = lifted;
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = None;
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let lcw = fw.last().unwrap().clone();
            let mut g = vec![lcw];
            for &i in &combo {
                g = zreduce(&zmul(&g, &remaining[i]), &m);
            }
            let g: ZPoly = ztrim(g.iter().map(|c| zsym(c, &m)).collect());
            let g = primitive(&g);
            if g.len() > 1 {
                if let Some(q) = zdiv_exact(&fw, &g) {
                    found = Some((combo.clone(), g, q));
                    break;
                }
            }
            if !next_combination(&mut combo, remaining.len()) {
                break;
            }
        }
        match found {
            Some((combo, g, q)) => {
                factors.push(g);
                fw = primitive(&q);
                remaining = remaining.into_iter().enumerate().filter(|(i, _)| !combo.contains(i)).map(|(_, u)| u).collect();
            }
            None => size += 1,
        }
    }
    if fw.len() > 1 {
        factors.push(fw);
    }
    factors
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Monic irreducible factors over Q with multiplicities, sorted by degree
/// and then by coefficients.
pub fn factor_rational(f: &Poly<BigRational>) -> Vec<(Poly<BigRational>, usize)> {
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition() {
        let z = to_primitive_integer(&part);
        for g in zassenhaus(&z) {
            out.push((from_integer(&g).monic(), mult));
        }
    }
    out.sort_by(|a, b| {
        a.0.deg().cmp(&b.0.deg()).then_with(|| {
            let ka: Vec<(Sign, BigRational)> = a.0.coeffs().iter().map(|c| (c.numer().sign(), c.clone())).collect();
            let kb: Vec<(Sign, BigRational)> = b.0.coeffs().iter().map(|c| (c.numer().sign(), c.clone())).collect();
            ka.cmp(&kb)
        })
    });
    out
}

/// Irreducible factors of a squarefree rational polynomial (monic).
pub fn irreducible_factors(f: &Poly<BigRational>) -> Vec<Poly<BigRational>> {
    factor_rational(f).into_iter().map(|(g, _)| g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::from_int;

    type Q = BigRational;

    fn p(c: &[i64]) -> Poly<Q> {
        Poly::new(c.iter().map(|&x| from_int::<Q>(x)).collect())
    }

    fn product(fs: &[(Poly<Q>, usize)]) -> Poly<Q> {
        fs.iter().fold(Poly::one(), |acc, (g, m)| &acc * &g.pow(*m as u32))
    }

    #[test]
    fn swinnerton_dyer_like() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits modulo every prime.
        let f = p(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_rational(&f), vec![(f.clone(), 1)]);
    }

    #[test]
    fn mixed_product() {
        let a = p(&[-2, 0, 1]);
        let b = p(&[1, 1, 1]);
        let c = p(&[3, 2]);
        let d = p(&[1, 0, 0, 0, 0, 1, 1]);
        let f = &(&(&a * &b) * &c.pow(2)) * &d;
        let fs = factor_rational(&f);
        assert_eq!(fs.len(), 4);
        assert_eq!(product(&fs), f.monic());
        for (g, _) in &fs {
            assert_eq!(factor_rational(g).len(), 1);
        }
    }

    #[test]
    fn cyclotomic() {
        // x^12 - 1 has six cyclotomic factors.
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let fs = factor_rational(&p(&c));
        assert_eq!(fs.iter().map(|(g, _)| g.deg()).collect::<Vec<_>>(), vec![1, 1, 2, 2, 2, 4]);
    }
}
