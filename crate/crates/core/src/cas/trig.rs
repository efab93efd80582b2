//! Angles that are integer combinations of indeterminates plus multiples
//! of pi/2, and exact expansion of their cosine and sine.

use alloc::collections::BTreeMap;
use alloc::string::String;

use num_traits::{ToPrimitive, Zero};

use super::context::{Context, RatFun, SymbolId};
use super::expr::Expr;
use super::{CasError, Q};

/// `sum(k_i * angle_i) + quarter_turns * pi/2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AngleForm {
    pub terms: BTreeMap<SymbolId, i64>,
    pub quarter_turns: i64,
}

impl AngleForm {
    pub fn symbol(v: SymbolId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(v, 1);
        AngleForm {
            terms,
            quarter_turns: 0,
        }
    }

    pub fn quarter_turns(q: i64) -> Self {
        AngleForm {
            terms: BTreeMap::new(),
            quarter_turns: q,
        }
    }

    pub fn add(&self, o: &AngleForm) -> AngleForm {
        let mut terms = self.terms.clone();
        for (&v, &k) in &o.terms {
            *terms.entry(v).or_insert(0) += k;
        }
        terms.retain(|_, k| *k != 0);
        AngleForm {
            terms,
            quarter_turns: self.quarter_turns + o.quarter_turns,
        }
    }

    pub fn scale(&self, m: i64) -> AngleForm {
        let mut terms: BTreeMap<SymbolId, i64> = self.terms.iter().map(|(&v, &k)| (v, k * m)).collect();
        terms.retain(|_, k| *k != 0);
        AngleForm {
            terms,
            quarter_turns: self.quarter_turns * m,
        }
    }

    pub fn neg(&self) -> AngleForm {
        self.scale(-1)
    }

    /// Same line direction: equal up to a multiple of pi.
    pub fn eq_mod_pi(&self, o: &AngleForm) -> bool {
        self.terms == o.terms && (self.quarter_turns - o.quarter_turns).rem_euclid(2) == 0
    }

    /// The angle as a linear expression in its symbols, dropping the
    /// multiple of pi/2 (which the caller accounts for).
    pub fn linear_part(&self, ctx: &Context) -> Result<RatFun, CasError> {
        let mut acc = RatFun::zero();
        for (&v, &k) in &self.terms {
            acc = ctx.add(&acc, &ctx.scale(&RatFun::var(v), &Q::from_integer(k.into())))?;
        }
        Ok(acc)
    }

    pub fn text(&self, ctx: &Context) -> String {
        let mut out = String::new();
        for (&v, &k) in &self.terms {
            let name = ctx.name(v);
            let piece = match k {
                1 => name.into(),
                -1 => alloc::format!("-{name}"),
                _ => alloc::format!("{k}*{name}"),
            };
            if !out.is_empty() && !piece.starts_with('-') {
                out.push_str(" + ");
            } else if !out.is_empty() {
                out.push_str(" - ");
                out.push_str(&piece[1..]);
                continue;
            }
            out.push_str(&piece);
        }
        if self.quarter_turns != 0 || out.is_empty() {
            let q = self.quarter_turns;
            let piece = match q {
                0 => String::from("0"),
                2 => String::from("pi"),
                -2 => String::from("-pi"),
                _ if q % 2 == 0 => alloc::format!("{}*pi", q / 2),
                _ => alloc::format!("{q}*pi/2"),
            };
            if !out.is_empty() {
                if let Some(rest) = piece.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(rest);
                } else {
                    out.push_str(" + ");
                    out.push_str(&piece);
                }
            } else {
                out.push_str(&piece);
            }
        }
        out
    }
}

impl Context {
    /// Reads an angle expression into an [`AngleForm`].
    pub fn angle_form(&self, e: &Expr) -> Result<AngleForm, CasError> {
        let (lin, pi) = self.linear_angle(e)?;
        let bad = || CasError::NonLinearAngle(alloc::format!("{e}"));
        let mut terms = BTreeMap::new();
        for (v, k) in lin {
            if !k.is_integer() {
                return Err(bad());
            }
            let k = k.to_integer().to_i64().ok_or_else(bad)?;
            if k != 0 {
                terms.insert(v, k);
            }
        }
        let qt = &pi * Q::from_integer(2.into());
        if !qt.is_integer() {
            return Err(bad());
        }
        Ok(AngleForm {
            terms,
            quarter_turns: qt.to_integer().to_i64().ok_or_else(bad)?,
        })
    }

    /// Linear combination of angle symbols with rational coefficients, plus
    /// a rational multiple of pi.
    fn linear_angle(&self, e: &Expr) -> Result<(BTreeMap<SymbolId, Q>, Q), CasError> {
        let bad = || CasError::NonLinearAngle(alloc::format!("{e}"));
        match e {
            Expr::Num(q) if q.is_zero() => Ok((BTreeMap::new(), Q::zero())),
            Expr::Num(_) => Err(bad()),
            Expr::Sym(name) if name == "pi" && self.id("pi").is_none() => {
                Ok((BTreeMap::new(), Q::from_integer(1.into())))
            }
            Expr::Call(f, args) if f == "deg" && args.len() == 1 => match &args[0] {
                Expr::Num(q) => Ok((BTreeMap::new(), q / Q::from_integer(180.into()))),
                _ => Err(bad()),
            },
            Expr::Sym(name) => {
                let v = self.lookup(name)?;
                if !self.is_indeterminate(v) {
                    return Err(bad());
                }
                let mut m = BTreeMap::new();
                m.insert(v, Q::from_integer(1.into()));
                Ok((m, Q::zero()))
            }
            Expr::Neg(a) => {
                let (m, p) = self.linear_angle(a)?;
                Ok((m.into_iter().map(|(v, k)| (v, -k)).collect(), -p))
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (mut m, p) = self.linear_angle(a)?;
                let (n, q) = self.linear_angle(b)?;
                let sgn = if matches!(e, Expr::Sub(..)) { -1 } else { 1 };
                let sgn = Q::from_integer(sgn.into());
                for (v, k) in n {
                    let entry = m.entry(v).or_insert_with(Q::zero);
                    *entry += &k * &sgn;
                }
                Ok((m, p + q * sgn))
            }
            Expr::Mul(a, b) => {
                let (ka, kb) = (a.as_rational(), b.as_rational());
                let (k, inner) = match (ka, kb) {
                    (Some(k), _) => (k, b),
                    (_, Some(k)) => (k, a),
                    _ => return Err(bad()),
                };
                let (m, p) = self.linear_angle(inner)?;
                Ok((m.into_iter().map(|(v, c)| (v, c * &k)).collect(), p * k))
            }
            Expr::Div(a, b) => {
                let k = b.as_rational().filter(|k| !k.is_zero()).ok_or_else(bad)?;
                let (m, p) = self.linear_angle(a)?;
                Ok((m.into_iter().map(|(v, c)| (v, c / &k)).collect(), p / k))
            }
            _ => Err(bad()),
        }
    }

    /// Exact `(cos, sin)` of an angle form, expanded with the addition
    /// formulas over the cosine/sine symbol pairs of its angles.
    pub fn cos_sin(&mut self, f: &AngleForm) -> Result<(RatFun, RatFun), CasError> {
        let (mut c, mut s) = match f.quarter_turns.rem_euclid(4) {
            0 => (RatFun::one(), RatFun::zero()),
            1 => (RatFun::zero(), RatFun::one()),
            2 => (RatFun::from_int(-1), RatFun::zero()),
            _ => (RatFun::zero(), RatFun::from_int(-1)),
        };
        for (&v, &k) in &f.terms {
            let cv = RatFun::var(self.cos_of(v));
            let sv = RatFun::var(self.sin_of(v));
            let (mut ck, mut sk) = (RatFun::one(), RatFun::zero());
            for _ in 0..k.unsigned_abs() {
                let nc = self.sub(&self.mul(&ck, &cv)?, &self.mul(&sk, &sv)?)?;
                let ns = self.add(&self.mul(&sk, &cv)?, &self.mul(&ck, &sv)?)?;
                ck = nc;
                sk = ns;
            }
            if k < 0 {
                sk = sk.neg();
            }
            let nc = self.sub(&self.mul(&c, &ck)?, &self.mul(&s, &sk)?)?;
            let ns = self.add(&self.mul(&s, &ck)?, &self.mul(&c, &sk)?)?;
            c = nc;
            s = ns;
        }
        Ok((c, s))
    }
}

impl Expr {
    /// Value of a constant rational subexpression.
    pub fn as_rational(&self) -> Option<Q> {
        match self {
            Expr::Num(q) => Some(q.clone()),
            Expr::Neg(a) => a.as_rational().map(|q| -q),
            Expr::Add(a, b) => Some(a.as_rational()? + b.as_rational()?),
            Expr::Sub(a, b) => Some(a.as_rational()? - b.as_rational()?),
            Expr::Mul(a, b) => Some(a.as_rational()? * b.as_rational()?),
            Expr::Div(a, b) => {
                let d = b.as_rational()?;
                (!d.is_zero()).then(|| a.as_rational().map(|n| n / d)).flatten()
            }
            Expr::Pow(a, b) => {
                let base = a.as_rational()?;
                let e = b.as_rational()?;
                if !e.is_integer() {
                    return None;
                }
                let e = e.to_integer().to_i32()?;
                if base.is_zero() && e < 0 {
                    return None;
                }
                let mut r = Q::from_integer(1.into());
                for _ in 0..e.unsigned_abs() {
                    r *= &base;
                }
                Some(if e.is_negative() { r.recip() } else { r })
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_angle_expansion() {
        let mut ctx = Context::new();
        let t = ctx.declare("t", 0.4, None).unwrap();
        let (c2, s2) = ctx.cos_sin(&AngleForm::symbol(t).scale(2)).unwrap();
        assert_eq!(ctx.text(&c2), "2*cos(t)^2 - 1");
        assert_eq!(ctx.text(&s2), "2*cos(t)*sin(t)");
    }

    #[test]
    fn shifted_by_half_pi() {
        let mut ctx = Context::new();
        let t = ctx.declare("t", 0.4, None).unwrap();
        let f = AngleForm::symbol(t).add(&AngleForm::quarter_turns(1));
        let (c, s) = ctx.cos_sin(&f).unwrap();
        assert_eq!(c, RatFun::var(ctx.sin_of(t)).neg());
        assert_eq!(s, RatFun::var(ctx.cos_of(t)));
    }

    #[test]
    fn parses_linear_angles() {
        let mut ctx = Context::new();
        ctx.declare("phi", 0.9, None).unwrap();
        ctx.declare("theta", 0.6, None).unwrap();
        let e = Expr::parse("phi - 2*theta + pi/2").unwrap();
        let f = ctx.angle_form(&e).unwrap();
        assert_eq!(f.quarter_turns, 1);
        assert_eq!(f.text(&ctx), "phi - 2*theta + 1*pi/2");
        assert!(ctx.angle_form(&Expr::parse("theta*theta").unwrap()).is_err());
        assert!(ctx.angle_form(&Expr::parse("theta/2").unwrap()).is_err());
    }
}
