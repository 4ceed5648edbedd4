//! Word-size prime fields and dense polynomials over them.

use rand::Rng;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero");
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `start`, in decreasing order.
pub fn primes_below(start: u64) -> impl Iterator<Item = u64> {
    (2..start).rev().filter(|&n| is_prime(n))
}

/// Primes from `start` upwards.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start..).filter(|&n| is_prime(n))
}

/// Dense polynomial over `Z/p`, constant term first, trimmed.
pub type PolyP = Vec<u64>;

pub fn trim(mut a: PolyP) -> PolyP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn deg(a: &PolyP) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn padd(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| add_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p)).collect())
}

pub fn psub(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p)).collect())
}

pub fn pmul(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = add_mod(c[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(c)
}

pub fn pscale(a: &PolyP, c: u64, p: u64) -> PolyP {
    trim(a.iter().map(|&x| mul_mod(x, c, p)).collect())
}

pub fn pmonic(a: &PolyP, p: u64) -> PolyP {
    match a.last() {
        Some(&lc) => pscale(a, inv_mod(lc, p), p),
        None => Vec::new(),
    }
}

pub fn pdivrem(a: &PolyP, b: &PolyP, p: u64) -> (PolyP, PolyP) {
    let db = deg(b).expect("division by zero polynomial");
    if a.len() < b.len() {
        return (Vec::new(), a.clone());
    }
    let inv = inv_mod(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let top = r[k + db];
        if top == 0 {
            continue;
        }
        let c = mul_mod(top, inv, p);
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = sub_mod(r[k + j], mul_mod(c, bj, p), p);
        }
        q[k] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn prem(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    pdivrem(a, b, p).1
}

pub fn pgcd(a: &PolyP, b: &PolyP, p: u64) -> PolyP {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = prem(&a, &b, p);
        a = b;
        b = r;
    }
    pmonic(&a, p)
}

/// `(g, s, t)` with `g = s a + t b` monic.
pub fn pext_gcd(a: &PolyP, b: &PolyP, p: u64) -> (PolyP, PolyP, PolyP) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = psub(&s0, &pmul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = psub(&t0, &pmul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = inv_mod(*r0.last().expect("nonzero input"), p);
    (pscale(&r0, inv, p), pscale(&s0, inv, p), pscale(&t0, inv, p))
}

pub fn pderiv(a: &PolyP, p: u64) -> PolyP {
    trim(a.iter().enumerate().skip(1).map(|(i, &x)| mul_mod(x, i as u64 % p, p)).collect())
}

/// `base^e mod m` with the exponent given as little-endian 64-bit limbs.
pub fn ppowmod(base: &PolyP, e: &[u64], m: &PolyP, p: u64) -> PolyP {
    let mut acc = vec![1u64];
    let mut b = prem(base, m, p);
    for &limb in e {
        let mut w = limb;
        for _ in 0..64 {
            if w & 1 == 1 {
                acc = prem(&pmul(&acc, &b, p), m, p);
            }
            b = prem(&pmul(&b, &b, p), m, p);
            w >>= 1;
        }
    }
    prem(&acc, m, p)
}

pub fn peval(a: &PolyP, x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// `(g, d)` where `g` is the product of the irreducible factors of degree `d`.
pub fn distinct_degree(f: &PolyP, p: u64) -> Vec<(PolyP, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = vec![0u64, 1];
    let mut w = x.clone();
    let mut d = 0;
    while deg(&f).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        w = ppowmod(&w, &[p], &f, p);
        let g = pgcd(&psub(&w, &x, p), &f, p);
        if deg(&g).unwrap_or(0) > 0 {
            f = pdivrem(&f, &g, p).0;
            w = prem(&w, &f, p);
            out.push((g, d));
        }
    }
    if deg(&f).unwrap_or(0) > 0 {
        let k = deg(&f).unwrap();
        out.push((f, k));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct monic irreducible
/// factors of degree `d`, for odd `p`.
pub fn equal_degree(f: &PolyP, d: usize, p: u64, rng: &mut impl Rng) -> Vec<PolyP> {
    let n = deg(f).unwrap_or(0);
    if n == d {
        return vec![f.clone()];
    }
    // (p^d - 1) / 2 as 64-bit limbs.
    let mut e: Vec<u64> = vec![1];
    for _ in 0..d {
        let mut carry = 0u128;
        for limb in e.iter_mut() {
            let v = *limb as u128 * p as u128 + carry;
            *limb = v as u64;
            carry = v >> 64;
        }
        if carry > 0 {
            e.push(carry as u64);
        }
    }
    e[0] -= 1;
    let mut carry = 0u64;
    for limb in e.iter_mut().rev() {
        let v = ((carry as u128) << 64) | *limb as u128;
        *limb = (v >> 1) as u64;
        carry = (v & 1) as u64;
    }
    loop {
        let a: PolyP = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = psub(&ppowmod(&a, &e, f, p), &vec![1], p);
        let g = pgcd(&b, f, p);
        let dg = deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = pdivrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&h, d, p, rng));
            return out;
        }
    }
}

/// All monic irreducible factors of a monic squarefree polynomial.
pub fn factor_squarefree(f: &PolyP, p: u64, rng: &mut impl Rng) -> Vec<PolyP> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, rng));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(4611686018427387847));
        assert!(!is_prime(1) && !is_prime(561) && !is_prime(4611686018427387849));
    }

    #[test]
    fn factor_mod_p() {
        let p = 101;
        // (x+1)(x+2)(x^2+x+ ... ) built from known factors
        let f1 = vec![1u64, 1];
        let f2 = vec![2u64, 1];
        let f3 = vec![2u64, 0, 1]; // x^2 + 2, irreducible mod 101 since -2 is a non-residue
        assert_eq!(pow_mod(p - 2, (p - 1) / 2, p), p - 1);
        let f = pmul(&pmul(&f1, &f2, p), &f3, p);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut fs = factor_squarefree(&f, p, &mut rng);
        fs.sort();
        let mut want = vec![f1, f2, f3];
        want.sort();
        assert_eq!(fs, want);
    }
}
