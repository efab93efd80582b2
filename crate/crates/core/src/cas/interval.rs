//! Outward-rounded interval arithmetic, in hardware doubles and in dyadic
//! rationals of configurable precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{q_to_f64, Q};

/// Interval operations needed to evaluate canonical expressions. Every
/// result encloses the exact result of the operation on the enclosed values.
pub trait Interval: Clone + core::fmt::Debug {
    fn from_q(q: &Q, bits: u32) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `None` when the divisor encloses zero.
    fn div(&self, o: &Self) -> Option<Self>;
    /// `None` when the whole interval is negative. A straddling interval is
    /// clamped at zero.
    fn sqrt(&self) -> Option<Self>;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn lo(&self) -> f64;
    fn hi(&self) -> f64;
    fn contains_zero(&self) -> bool;
    fn is_point_zero(&self) -> bool;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct F64Interval {
    pub lo: f64,
    pub hi: f64,
}

impl F64Interval {
    pub fn point(x: f64) -> Self {
        F64Interval { lo: x, hi: x }
    }

    fn widened(lo: f64, hi: f64) -> Self {
        F64Interval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }

    fn lipschitz(&self, f: fn(f64) -> f64) -> Self {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        let r = (self.hi - m).max(m - self.lo).next_up();
        let c = f(m);
        // libm's sin/cos are within one ulp; 1e-15 covers it for |c| <= 1.
        let lo = (c - r - 1e-15).max(-1.0);
        let hi = (c + r + 1e-15).min(1.0);
        F64Interval { lo, hi }
    }
}

impl Interval for F64Interval {
    fn from_q(q: &Q, _bits: u32) -> Self {
        let x = q_to_f64(q);
        if Q::from_float(x).as_ref() == Some(q) {
            F64Interval::point(x)
        } else {
            F64Interval::widened(x, x)
        }
    }

    fn add(&self, o: &Self) -> Self {
        F64Interval::widened(self.lo + o.lo, self.hi + o.hi)
    }

    fn sub(&self, o: &Self) -> Self {
        F64Interval::widened(self.lo - o.hi, self.hi - o.lo)
    }

    fn mul(&self, o: &Self) -> Self {
        if self.lo == self.hi && o.lo == o.hi {
            let p = self.lo * o.lo;
            return F64Interval::widened(p, p);
        }
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        F64Interval::widened(lo, hi)
    }

    fn div(&self, o: &Self) -> Option<Self> {
        if o.contains_zero() {
            return None;
        }
        let r = F64Interval::widened(1.0 / o.hi, 1.0 / o.lo);
        Some(self.mul(&r))
    }

    fn sqrt(&self) -> Option<Self> {
        if self.hi < 0.0 {
            return None;
        }
        let lo = libm::sqrt(self.lo.max(0.0)).next_down().max(0.0);
        let hi = libm::sqrt(self.hi).next_up();
        Some(F64Interval { lo, hi })
    }

    fn sin(&self) -> Self {
        self.lipschitz(libm::sin)
    }

    fn cos(&self) -> Self {
        self.lipschitz(libm::cos)
    }

    fn lo(&self) -> f64 {
        self.lo
    }

    fn hi(&self) -> f64 {
        self.hi
    }

    fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    fn is_point_zero(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }
}

/// Interval with dyadic rational endpoints rounded outward to `bits`
/// significant bits after every operation.
#[derive(Clone, Debug, PartialEq)]
pub struct BigInterval {
    pub lo: Q,
    pub hi: Q,
    pub bits: u32,
}

fn bit_len(n: &BigInt) -> i64 {
    n.bits() as i64
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// Rounds toward negative infinity (`up = false`) or positive infinity to a
/// dyadic with `bits` significant bits.
fn round_dyadic(q: &Q, bits: u32, up: bool) -> Q {
    if q.is_zero() {
        return q.clone();
    }
    let e = bit_len(q.numer()) - bit_len(q.denom());
    let shift = bits as i64 - e;
    let (n, d) = (q.numer(), q.denom());
    if shift >= 0 {
        let scale = pow2(shift as u64);
        let scaled = n * &scale;
        let (fl, rem) = scaled.div_mod_floor(d);
        let v = if up && !rem.is_zero() { fl + 1 } else { fl };
        Q::new(v, scale)
    } else {
        let scale = pow2((-shift) as u64);
        let den = d * &scale;
        let (fl, rem) = n.div_mod_floor(&den);
        let v = if up && !rem.is_zero() { fl + 1 } else { fl };
        Q::from_integer(v * scale)
    }
}

impl BigInterval {
    pub fn new(lo: Q, hi: Q, bits: u32) -> Self {
        BigInterval {
            lo: round_dyadic(&lo, bits, false),
            hi: round_dyadic(&hi, bits, true),
            bits,
        }
    }

    pub fn point(q: &Q, bits: u32) -> Self {
        BigInterval::new(q.clone(), q.clone(), bits)
    }

    fn working(&self) -> u32 {
        self.bits + 64
    }

    fn sqrt_bounds(q: &Q, bits: u32) -> (Q, Q) {
        if q.is_zero() {
            return (Q::zero(), Q::zero());
        }
        let k = (bits as u64) + 4;
        let scale = pow2(k);
        let nd = q.numer() * q.denom() * &scale * &scale;
        let r = nd.sqrt();
        let den = q.denom() * &scale;
        (Q::new(r.clone(), den.clone()), Q::new(r + 1, den))
    }

    /// Encloses `sin(x)` (`cos` when `phase = 1`) for an exact rational `x`
    /// by the Taylor series with an alternating-series remainder.
    fn trig_point(x: &Q, phase: u32, bits: u32) -> BigInterval {
        let w = bits + 64;
        let xi = BigInterval::point(x, w);
        let x2 = xi.mul(&xi);
        let mut term = if phase == 0 {
            xi.clone()
        } else {
            BigInterval::point(&Q::one(), w)
        };
        let mut sum = term.clone();
        let xabs = q_to_f64(&x.abs());
        let tol = Q::new(BigInt::one(), pow2(bits as u64 + 8));
        let mut k: u64 = if phase == 0 { 1 } else { 0 };
        loop {
            let denom = Q::from_integer(BigInt::from((k + 1) * (k + 2)));
            let d = BigInterval::point(&denom, w);
            term = term.mul(&x2).div(&d).expect("positive divisor");
            term = BigInterval::new(-term.hi.clone(), -term.lo.clone(), w);
            k += 2;
            sum = sum.add(&term);
            let mag = term.lo.abs().max(term.hi.abs());
            if (k as f64) > xabs + 2.0 && mag < tol {
                // Remainder bounded by the magnitude of the next term.
                let e = mag;
                let lo = &sum.lo - &e;
                let hi = &sum.hi + &e;
                return BigInterval::new(lo.max(-Q::one()), hi.min(Q::one()), bits);
            }
        }
    }

    fn lipschitz_trig(&self, phase: u32) -> Self {
        let two = Q::from_integer(BigInt::from(2));
        let m = (&self.lo + &self.hi) / &two;
        let r = (&self.hi - &self.lo) / &two;
        let c = BigInterval::trig_point(&m, phase, self.bits);
        BigInterval::new((&c.lo - &r).max(-Q::one()), (&c.hi + &r).min(Q::one()), self.bits)
    }
}

impl Interval for BigInterval {
    fn from_q(q: &Q, bits: u32) -> Self {
        BigInterval::point(q, bits)
    }

    fn add(&self, o: &Self) -> Self {
        BigInterval::new(&self.lo + &o.lo, &self.hi + &o.hi, self.bits.min(o.bits))
    }

    fn sub(&self, o: &Self) -> Self {
        BigInterval::new(&self.lo - &o.hi, &self.hi - &o.lo, self.bits.min(o.bits))
    }

    fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        BigInterval::new(lo, hi, self.bits.min(o.bits))
    }

    fn div(&self, o: &Self) -> Option<Self> {
        if o.contains_zero() {
            return None;
        }
        let bits = self.bits.min(o.bits);
        let r = BigInterval::new(o.hi.recip(), o.lo.recip(), bits);
        Some(self.mul(&r))
    }

    fn sqrt(&self) -> Option<Self> {
        if self.hi.is_negative() {
            return None;
        }
        let lo = if self.lo.is_negative() {
            Q::zero()
        } else {
            self.lo.clone()
        };
        let (l, _) = BigInterval::sqrt_bounds(&lo, self.working());
        let (_, h) = BigInterval::sqrt_bounds(&self.hi, self.working());
        Some(BigInterval::new(l, h, self.bits))
    }

    fn sin(&self) -> Self {
        self.lipschitz_trig(0)
    }

    fn cos(&self) -> Self {
        self.lipschitz_trig(1)
    }

    fn lo(&self) -> f64 {
        q_to_f64(&self.lo).next_down()
    }

    fn hi(&self) -> f64 {
        q_to_f64(&self.hi).next_up()
    }

    fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    fn is_point_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}
