//! Multivariate gcd by the primitive polynomial remainder sequence, plus
//! square-root extraction for perfect squares.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::poly::{Monomial, Poly, Var};
use super::Q;

/// Greatest common divisor, normalized to integer coefficients with gcd one
/// and a positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.num_terms() == 1 || b.num_terms() == 1 {
        let (mono, other) = if a.num_terms() == 1 { (a, b) } else { (b, a) };
        let m = mono.leading_term().unwrap().0.gcd(&other.min_monomial());
        return Poly::term(Q::one(), m);
    }
    if a == b {
        return a.normalized();
    }
    let va = a.vars();
    let vb = b.vars();
    // A variable present in only one argument cannot occur in the gcd.
    if let Some(&v) = va.iter().rev().find(|v| !vb.contains(v)) {
        return gcd(&content_in(a, v), b);
    }
    if let Some(&v) = vb.iter().rev().find(|v| !va.contains(v)) {
        return gcd(a, &content_in(b, v));
    }
    let v = *va.iter().next_back().unwrap();
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let g = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        core::mem::swap(&mut p, &mut q);
    }
    loop {
        if q.degree_in(v) == 0 {
            return g;
        }
        let r = p.prem(&q, v);
        if r.is_zero() {
            break;
        }
        p = q;
        q = primitive_in(&r, v);
    }
    (&g * &primitive_in(&q, v)).normalized()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &Poly, v: Var) -> Poly {
    let mut coeffs = p.coeffs_in(v);
    coeffs.retain(|c| !c.is_zero());
    coeffs.sort_by_key(|c| c.num_terms());
    let mut g = Poly::zero();
    for c in &coeffs {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn primitive_in(p: &Poly, v: Var) -> Poly {
    let c = content_in(p, v);
    if c.is_zero() {
        return Poly::zero();
    }
    p.div_exact(&c).expect("content divides").normalized()
}

/// Square-free part with respect to `v`: removes repeated factors that
/// involve `v`. Factors free of `v` are left untouched.
pub fn squarefree_in(p: &Poly, v: Var) -> Poly {
    if p.degree_in(v) == 0 {
        return p.clone();
    }
    let c = content_in(p, v);
    let pp = p.div_exact(&c).unwrap();
    let g = gcd(&pp, &pp.derivative(v));
    let sf = pp.div_exact(&g).unwrap();
    (&c * &sf).normalized()
}

/// Exact square root of a rational number, if it has one.
pub fn rational_sqrt(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Q::new(n, d))
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Writes `n = s^2 * m` pulling out squares of small primes (and a final
/// perfect-square cofactor). `n` must be positive.
pub fn integer_square_part(n: &BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut m = n.clone();
    for &pr in SMALL_PRIMES.iter() {
        let p = BigInt::from(pr);
        let p2 = &p * &p;
        while m.is_multiple_of(&p2) {
            m /= &p2;
            s *= &p;
        }
    }
    let r = m.sqrt();
    if &r * &r == m {
        s *= &r;
        m = BigInt::one();
    }
    (s, m)
}

/// Exact square root of a polynomial, if it is a perfect square. The root is
/// returned with positive leading coefficient.
pub fn poly_sqrt(p: &Poly) -> Option<Poly> {
    if p.is_zero() {
        return Some(Poly::zero());
    }
    let (lm, lc) = p.leading_term()?;
    let c = rational_sqrt(lc)?;
    let m = lm.sqrt()?;
    let min_deg = p.terms().map(|(m, _)| m.degree()).min().unwrap_or(0);
    if min_deg % 2 == 1 {
        return None;
    }
    let mut root = Poly::term(c.clone(), m.clone());
    let two_lt = (c * Q::from_integer(2.into()), m);
    let mut rem = p - &(&root * &root);
    // Each step peels the leading term of the remainder; candidate terms are
    // bounded below by half the minimum degree of `p`.
    let max_steps = p.num_terms() * 4 + 8;
    for _ in 0..max_steps {
        let Some((rm, rc)) = rem.leading_term() else {
            return Some(root);
        };
        let tm = rm.div(&two_lt.1)?;
        if 2 * tm.degree() < min_deg {
            return None;
        }
        let tc = rc / &two_lt.0;
        let t = Poly::term(tc, tm);
        // rem -= 2*root*t + t^2
        let twice_root = root.scale(&Q::from_integer(2.into()));
        rem = &(&rem - &(&twice_root * &t)) - &(&t * &t);
        root = &root + &t;
    }
    rem.is_zero().then_some(root)
}

/// Splits `p = coefficient * monomial^2 * rest` where the monomial collects
/// even powers common to every term.
pub fn monomial_square_part(p: &Poly) -> (Monomial, Poly) {
    let mm = p.min_monomial();
    let half = Monomial::from_pairs(mm.iter().map(|(v, e)| (v, e / 2)).collect::<Vec<_>>());
    if half.is_one() {
        return (half, p.clone());
    }
    let sq = half.pow(2);
    let rest = Poly::from_terms(p.terms().map(|(m, c)| (m.div(&sq).unwrap(), c.clone())));
    (half, rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }
    fn k(n: i64) -> Poly {
        Poly::from_int(n)
    }

    #[test]
    fn gcd_of_products() {
        let f = &x() + &y();
        let g = &x() - &k(2);
        let h = &(&y() * &y()) + &k(1);
        let a = &f * &g;
        let b = (&f * &h).scale(&Q::from_integer(6.into()));
        assert_eq!(gcd(&a, &b), f.normalized());
        assert_eq!(gcd(&g, &h), Poly::one());
    }

    #[test]
    fn gcd_with_monomials() {
        let a = &(&x() * &x()) * &y();
        let b = &(&x() * &y()) + &(&x() * &x());
        assert_eq!(gcd(&a, &b), x());
    }

    #[test]
    fn squarefree_removes_repeats() {
        let f = &x() - &y();
        let p = &(&f * &f) * &(&x() + &k(1));
        assert_eq!(squarefree_in(&p, 0), (&f * &(&x() + &k(1))).normalized());
    }

    #[test]
    fn sqrt_of_perfect_square() {
        let f = &(&x() - &y()).scale(&Q::from_integer(3.into())) + &k(1);
        let sq = &f * &f;
        let r = poly_sqrt(&sq).unwrap();
        assert!((&(&r * &r) - &sq).is_zero());
        assert!(poly_sqrt(&(&sq + &k(1))).is_none());
        assert!(poly_sqrt(&(&x() * &y())).is_none());
    }

    #[test]
    fn integer_square_extraction() {
        let (s, m) = integer_square_part(&BigInt::from(72));
        assert_eq!((s, m), (BigInt::from(6), BigInt::from(2)));
        let (s, m) = integer_square_part(&BigInt::from(101 * 101));
        assert_eq!((s, m), (BigInt::from(101), BigInt::from(1)));
    }
}
