//! Sylvester resultants with a fraction-free determinant.

use alloc::vec::Vec;

use super::poly::{Poly, Var};
use super::CasError;

/// Sylvester matrix of `p` and `q` viewed as polynomials in `v`.
pub fn sylvester_matrix(p: &Poly, q: &Poly, v: Var) -> Vec<Vec<Poly>> {
    let pc = p.coeffs_in(v);
    let qc = q.coeffs_in(v);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (coeffs, shifts) in [(&pc, n), (&qc, m)] {
        let deg = coeffs.len() - 1;
        for i in 0..shifts {
            let mut row = alloc::vec![Poly::zero(); size];
            for (j, c) in coeffs.iter().enumerate() {
                // leading coefficient first
                row[i + deg - j] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Determinant by Bareiss elimination; every division is exact.
pub fn determinant(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign_flip = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Poly::zero();
            };
            m.swap(k, r);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        -d
    } else {
        d
    }
}

/// `Res_v(p, q)`.
pub fn resultant(p: &Poly, q: &Poly, v: Var) -> Result<Poly, CasError> {
    if p.is_zero() || q.is_zero() {
        return Err(CasError::ZeroPolynomial);
    }
    let (dp, dq) = (p.degree_in(v), q.degree_in(v));
    if dp == 0 && dq == 0 {
        return Err(CasError::NothingToEliminate);
    }
    if dp == 0 {
        return Ok(p.pow(dq));
    }
    if dq == 0 {
        return Ok(q.pow(dp));
    }
    Ok(determinant(sylvester_matrix(p, q, v)))
}
