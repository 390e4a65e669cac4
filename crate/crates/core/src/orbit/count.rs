//! Counting unimodular matrices with bounded columns, and unit groups of F_q[T]/f.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sl2Count {
    pub exact: u64,
    /// exact / (q^{b1} q^{b2}).
    pub ratio: Ratio<u64>,
}

fn pow(q: u32, e: i64) -> Option<u64> {
    (q as u64).checked_pow(u32::try_from(e).ok()?)
}

/// Number of γ in SL₂(F_q[T]) whose first column has degree <= b1 and second
/// column degree <= b2.
///
/// Each coprime first column (a, c) is completed by (b₀ + ta, d₀ + tc); after
/// reduction the completions of degree <= b2 are counted in closed form.
pub fn sl2_count(field: &Field, b1: usize, b2: usize, limit: u128) -> Result<Sl2Count> {
    let q = field.q();
    let size = (q as u128).checked_pow(2 * (b1 as u32 + 1)).unwrap_or(u128::MAX);
    if size > limit {
        return Err(Error::SearchSpaceTooLarge { size, limit });
    }
    let polys: Vec<Poly> = Poly::all_up_to(field, b1).collect();
    let one = Poly::one(field);
    let mut exact = 0u64;
    for a in &polys {
        for c in &polys {
            if a.is_zero() && c.is_zero() {
                continue;
            }
            // u a + v c = 1, so (b, d) = (−v, u) gives ad − bc = 1
            let (g, _u, v) = Poly::xgcd(a, c)?;
            if !g.is_one() {
                continue;
            }
            let (b0, d0) = if a.is_zero() {
                (-&v, Poly::zero(field))
            } else {
                let b0 = (-&v).rem(a)?;
                let d0 = (&one + &(&b0 * c)).divmod(a)?.0;
                (b0, d0)
            };
            let top = a.deg_i64().max(c.deg_i64());
            let b2 = b2 as i64;
            exact += if b2 >= top {
                pow(q, b2 - top + 1).ok_or(Error::SearchSpaceTooLarge { size: u128::MAX, limit })?
            } else {
                u64::from(b0.deg_i64().max(d0.deg_i64()) <= b2)
            };
        }
    }
    let scale = pow(q, (b1 + b2) as i64).ok_or(Error::SearchSpaceTooLarge { size: u128::MAX, limit })?;
    Ok(Sl2Count { exact, ratio: Ratio::new(exact, scale) })
}

/// |(F_q[T]/f)^*|, by counting residues prime to f.
pub fn phi_poly(f: &Poly, limit: u128) -> Result<u64> {
    let d = f.deg().ok_or(Error::DivisionByZero)?;
    let size = (f.field().q() as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if size > limit {
        return Err(Error::SearchSpaceTooLarge { size, limit });
    }
    if d == 0 {
        return Ok(1);
    }
    Ok(Poly::all_up_to(f.field(), d - 1).filter(|r| Poly::gcd(r, f).is_one()).count() as u64)
}

/// Σ Φ(f) over f of degree exactly i, monic or all nonzero.
pub fn phi_degree_sum(field: &Field, i: usize, monic_only: bool, limit: u128) -> Result<u64> {
    let q = field.q() as u128;
    let size = q.checked_pow(2 * i as u32 + 1).unwrap_or(u128::MAX);
    if size > limit {
        return Err(Error::SearchSpaceTooLarge { size, limit });
    }
    let mut total = 0;
    for f in Poly::monic_of_degree(field, i) {
        total += phi_poly(&f, limit)?;
    }
    // Φ(cf) = Φ(f) for a unit c
    Ok(if monic_only { total } else { total * (field.q() as u64 - 1) })
}

/// The value q^{2i}(q − 1) quoted for the monic degree-i sum.
pub fn phi_sum_quoted_formula(q: u32, i: usize) -> u64 {
    (q as u64).pow(2 * i as u32) * (q as u64 - 1)
}

/// The monic degree-i sum in closed form: q^{2i−1}(q − 1), and 1 at i = 0.
pub fn phi_sum_monic_formula(q: u32, i: usize) -> u64 {
    if i == 0 {
        1
    } else {
        (q as u64).pow(2 * i as u32 - 1) * (q as u64 - 1)
    }
}
