//! Canonical text: terms in descending graded-lex order with variables
//! ranked alphabetically. The output reparses to the same canonical value.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use super::context::{Context, RatFun};
use super::poly::{Monomial, Poly};
use super::Q;

impl Context {
    fn monomial_text(&self, m: &Monomial) -> String {
        let mut factors: Vec<(usize, String)> = m
            .iter()
            .map(|(v, e)| {
                let name = self.name(v);
                let f = if e == 1 {
                    String::from(name)
                } else {
                    format!("{name}^{e}")
                };
                (self.rank(v), f)
            })
            .collect();
        factors.sort();
        factors.into_iter().map(|(_, f)| f).collect::<Vec<_>>().join("*")
    }

    pub fn poly_text(&self, p: &Poly) -> String {
        if p.is_zero() {
            return String::from("0");
        }
        let mut terms: Vec<(&Monomial, &Q)> = p.terms().collect();
        terms.sort_by(|a, b| self.cmp_monomials(b.0, a.0));
        let mut out = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = if m.is_one() {
                q_text(&mag)
            } else if mag.is_one() {
                self.monomial_text(m)
            } else {
                format!("{}*{}", q_text(&mag), self.monomial_text(m))
            };
            out.push_str(&body);
        }
        out
    }

    /// Canonical text of a value.
    pub fn text(&self, e: &RatFun) -> String {
        if e.den().is_one() {
            return self.poly_text(e.num());
        }
        let num = self.poly_text(e.num());
        let den = self.poly_text(e.den());
        let num = if e.num().num_terms() > 1 {
            format!("({num})")
        } else {
            num
        };
        let simple_den = e.den().num_terms() == 1
            && e.den()
                .leading_term()
                .is_some_and(|(m, c)| m.is_one() || (c.is_one() && m.degree() == 1));
        let den = if simple_den { den } else { format!("({den})") };
        format!("{num}/{den}")
    }
}

fn q_text(q: &Q) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabetical_grlex_order() {
        let mut ctx = Context::new();
        let b = Poly::var(ctx.declare("b", 1.0, None).unwrap());
        let a = Poly::var(ctx.declare("a", 1.0, None).unwrap());
        let p = &(&(&a * &b) + &(&b * &b)) - &(&a * &a).scale(&Q::from_integer(2.into()));
        let p = &p + &Poly::from_int(1);
        assert_eq!(ctx.poly_text(&p), "-2*a^2 + a*b + b^2 + 1");
    }

    #[test]
    fn quotient_text() {
        let mut ctx = Context::new();
        let a = RatFun::var(ctx.declare("a", 1.0, None).unwrap());
        let e = ctx.div(&RatFun::from_int(2), &RatFun::from_int(3)).unwrap();
        assert_eq!(ctx.text(&e), "2/3");
        let e = ctx
            .div(
                &ctx.add(&a, &RatFun::one()).unwrap(),
                &ctx.scale(&a, &Q::from_integer(2.into())),
            )
            .unwrap();
        assert_eq!(ctx.text(&e), "(a + 1)/(2*a)");
    }
}
