//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are small integer ids handed out by a [`Context`](super::Context).
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is graded
//! lexicographic with the lowest variable id most significant, so the last
//! entry of the map is always the leading term.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Q;

pub type Var = u32;

/// Exponent vector stored sparsely as `(var, exponent)` pairs, sorted by var,
/// with every exponent positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(alloc::vec![(v, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable_by_key(|&(v, _)| v);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for &(v, e) in &self.0 {
            let f = other.exp(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// Drops variable `v`, returning the remaining monomial and the exponent of `v`.
    pub fn split(&self, v: Var) -> (Monomial, u32) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .copied()
            .filter(|&(w, f)| {
                if w == v {
                    e = f;
                    false
                } else {
                    true
                }
            })
            .collect();
        (Monomial(rest), e)
    }

    /// Square root if every exponent is even.
    pub fn sqrt(&self) -> Option<Monomial> {
        if self.0.iter().all(|&(_, e)| e % 2 == 0) {
            Some(Monomial(self.0.iter().map(|&(v, e)| (v, e / 2)).collect()))
        } else {
            None
        }
    }

    /// Lexicographic comparison with a caller-supplied variable rank
    /// (lower rank is more significant), after total degree.
    pub fn cmp_grlex_by<F: Fn(Var) -> usize>(&self, other: &Monomial, rank: F) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let mut a: Vec<(usize, u32)> = self.0.iter().map(|&(v, e)| (rank(v), e)).collect();
        let mut b: Vec<(usize, u32)> = other.0.iter().map(|&(v, e)| (rank(v), e)).collect();
        a.sort_unstable();
        b.sort_unstable();
        lex_sparse(&a, &b)
    }
}

fn lex_sparse<K: Ord + Copy>(a: &[(K, u32)], b: &[(K, u32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(va, ea)), Some(&(vb, eb))) => {
                if va == vb {
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                } else if va < vb {
                    return Ordering::Greater;
                } else {
                    return Ordering::Less;
                }
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| lex_sparse(&self.0, &other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with rational coefficients. No zero coefficient is
/// ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(Q::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Q::one(), Monomial::var(v, 1))
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Q)> {
        self.terms.into_iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn max_var(&self) -> Option<Var> {
        self.terms.keys().filter_map(|m| m.vars().last()).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Smallest exponent of each variable over all terms.
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, m| acc.gcd(m))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Coefficients as a polynomial in `v`: entry `i` multiplies `v^i`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let mut out: Vec<Poly> = alloc::vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.split(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: Var, coeffs: &[Poly]) -> Poly {
        let mut p = Poly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let vm = Monomial::var(v, i as u32);
            for (m, k) in c.terms() {
                p.add_term(m.mul(&vm), k.clone());
            }
        }
        p
    }

    /// Leading coefficient with respect to `v`.
    pub fn lc_in(&self, v: Var) -> Poly {
        let d = self.degree_in(v);
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.split(v);
            if e == d {
                p.add_term(rest, c.clone());
            }
        }
        p
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.split(v);
            if e > 0 {
                p.add_term(rest.mul(&Monomial::var(v, e - 1)), c * Q::from_integer(e.into()));
            }
        }
        p
    }

    /// Replaces `v` by `value`.
    pub fn substitute(&self, v: Var, value: &Poly) -> Poly {
        if !self.contains_var(v) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(v);
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Evaluates with caller-supplied arithmetic; `var` yields the value of a variable.
    pub fn eval_with<T, E>(
        &self,
        mut var: impl FnMut(Var) -> Result<T, E>,
        coeff: impl Fn(&Q) -> T,
        one: T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> Result<T, E>
    where
        T: Clone,
    {
        let mut powers: BTreeMap<(Var, u32), T> = BTreeMap::new();
        let mut acc: Option<T> = None;
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (v, e) in m.iter() {
                let pv = match powers.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let base = var(v)?;
                        let mut p = one.clone();
                        for _ in 0..e {
                            p = mul(&p, &base);
                        }
                        powers.insert((v, e), p.clone());
                        p
                    }
                };
                t = mul(&t, &pv);
            }
            acc = Some(match acc {
                None => t,
                Some(a) => add(&a, &t),
            });
        }
        Ok(acc.unwrap_or_else(|| coeff(&Q::zero())))
    }

    /// Exact division. Returns `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if d.num_terms() == 1 {
            let (dm, dc) = d.leading_term().unwrap();
            let inv = dc.recip();
            let mut out = BTreeMap::new();
            for (m, c) in &self.terms {
                out.insert(m.div(dm)?, c * &inv);
            }
            return Some(Poly { terms: out });
        }
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let inv = dc.recip();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.div(&dm)?;
            let c = rc * &inv;
            let t = Poly::term(c.clone(), m.clone());
            rem = &rem - &(d * &t);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Pseudo-remainder of `self` by `d` viewed as univariate polynomials in `v`.
    pub fn prem(&self, d: &Poly, v: Var) -> Poly {
        let dd = d.degree_in(v);
        let lc = d.lc_in(v);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dd {
            let dr = r.degree_in(v);
            let lr = r.lc_in(v);
            let shift = Monomial::var(v, dr - dd);
            r = &(&r * &lc) - &(d * &lr).mul_monomial(&shift);
        }
        r
    }

    /// Splits off a rational factor so that the remaining polynomial has
    /// integer coefficients with gcd one. Returns `(factor, primitive)`.
    pub fn integer_primitive(&self) -> (Q, Poly) {
        if self.is_zero() {
            return (Q::one(), Poly::zero());
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let factor = Q::new(num_gcd, den_lcm);
        let inv = factor.recip();
        (factor, self.scale(&inv))
    }

    /// Leading coefficient under the internal term order.
    pub fn lc(&self) -> Q {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    /// Integer-primitive form with positive leading coefficient.
    pub fn normalized(&self) -> Poly {
        let (_, p) = self.integer_primitive();
        if p.lc().is_negative() {
            -&p
        } else {
            p
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Q) -> Q) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Sum of absolute values of the coefficients, as `f64`.
    pub fn coeff_l1(&self) -> f64 {
        self.terms.values().map(|c| super::q_to_f64(c).abs()).sum()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -core::mem::take(c);
        }
        self
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    alloc::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    alloc::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { terms: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                $tr::$f(&self, &rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
