//! Exact minimization of ‖Qξ − α‖ over all Q of bounded degree.
//!
//! The first m fractional coefficients of Qξ are F_q-linear in the
//! coefficients of Q, so "some Q with deg Q <= h has ‖Qξ − α‖ < q^{-m}" is the
//! solvability of an m-row linear system. Rows are added one exponent at a
//! time until the system becomes inconsistent (or, homogeneously, until only
//! Q = 0 survives).

use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::Laurent;
use crate::norm::NormDeg;
use crate::poly::Poly;

/// Incremental row echelon form over F_q with an augmented column.
enum Echelon {
    Binary { words: usize, rows: Vec<(usize, Vec<u64>)> },
    General { field: Field, rows: Vec<(usize, Vec<u32>)> },
}

enum RowOutcome {
    Independent,
    Dependent,
    Inconsistent,
}

impl Echelon {
    fn new(field: &Field, cols: usize) -> Self {
        if field.q() == 2 {
            Echelon::Binary { words: (cols + 1).div_ceil(64), rows: Vec::new() }
        } else {
            Echelon::General { field: field.clone(), rows: Vec::new() }
        }
    }

    fn rank(&self) -> usize {
        match self {
            Echelon::Binary { rows, .. } => rows.len(),
            Echelon::General { rows, .. } => rows.len(),
        }
    }

    /// Adds `row` (length cols + 1, last entry the right-hand side).
    fn push(&mut self, row: &[u32]) -> RowOutcome {
        let cols = row.len() - 1;
        match self {
            Echelon::Binary { words, rows } => {
                let mut r = vec![0u64; *words];
                for (i, &c) in row.iter().enumerate() {
                    if c != 0 {
                        r[i / 64] |= 1 << (i % 64);
                    }
                }
                for (piv, pr) in rows.iter() {
                    if r[piv / 64] >> (piv % 64) & 1 == 1 {
                        for (a, b) in r.iter_mut().zip(pr) {
                            *a ^= b;
                        }
                    }
                }
                let lead = (0..cols).find(|&i| r[i / 64] >> (i % 64) & 1 == 1);
                match lead {
                    Some(p) => {
                        rows.push((p, r));
                        RowOutcome::Independent
                    }
                    None if r[cols / 64] >> (cols % 64) & 1 == 1 => RowOutcome::Inconsistent,
                    None => RowOutcome::Dependent,
                }
            }
            Echelon::General { field, rows } => {
                let mut r = row.to_vec();
                for (piv, pr) in rows.iter() {
                    let c = r[*piv];
                    if c != 0 {
                        for (a, &b) in r.iter_mut().zip(pr) {
                            *a = field.sub(*a, field.mul(c, b));
                        }
                    }
                }
                match (0..cols).find(|&i| r[i] != 0) {
                    Some(p) => {
                        let inv = field.inv(r[p]).expect("nonzero pivot");
                        for a in r.iter_mut() {
                            *a = field.mul(*a, inv);
                        }
                        rows.push((p, r));
                        RowOutcome::Independent
                    }
                    None if r[cols] != 0 => RowOutcome::Inconsistent,
                    None => RowOutcome::Dependent,
                }
            }
        }
    }
}

/// min over Q with deg Q <= h of log_q ‖Qξ − α‖; Q ranges over nonzero
/// polynomials when `alpha` is `None`.
pub fn min_frac_deg(xi: &Laurent, alpha: Option<&Laurent>, h: usize) -> Result<NormDeg> {
    let f = xi.field().clone();
    let zero = Laurent::zero(&f);
    let alpha = alpha.unwrap_or(&zero);
    let cols = h + 1;
    let mut ech = Echelon::new(&f, cols);
    let homogeneous = alpha.rational().is_some_and(|(n, _)| n.is_zero());
    let mut xi = xi.clone();
    let mut alpha = alpha.clone();
    let mut row = vec![0u32; cols + 1];
    for m in 1.. {
        let lowest = -(m as i64) - h as i64;
        if xi.prec() < -lowest {
            if !xi.is_exact() {
                return Err(Error::UndeterminedToPrecision);
            }
            xi = xi.with_prec(2 * -lowest);
        }
        if alpha.prec() < m as i64 {
            if !alpha.is_exact() {
                return Err(Error::UndeterminedToPrecision);
            }
            alpha = alpha.with_prec(2 * m as i64);
        }
        let e = -(m as i64);
        for (i, slot) in row[..cols].iter_mut().enumerate() {
            *slot = xi.coeff(e - i as i64).expect("precision checked");
        }
        row[cols] = alpha.coeff(e).expect("precision checked");
        match ech.push(&row) {
            RowOutcome::Inconsistent => return Ok(NormDeg::finite(e)),
            RowOutcome::Independent if homogeneous && ech.rank() == cols => return Ok(NormDeg::finite(e)),
            _ => {}
        }
    }
    unreachable!()
}

/// Brute-force counterpart of [`min_frac_deg`]: `(Q, log_q ‖Qξ − α‖)` for every
/// nonzero Q with deg Q <= h.
pub fn frac_degs(xi: &Laurent, alpha: Option<&Laurent>, h: usize) -> Result<Vec<(Poly, NormDeg)>> {
    let f = xi.field().clone();
    let mut out = Vec::new();
    for q in Poly::all_up_to(&f, h).skip(1) {
        let mut x = xi.mul_poly(&q);
        if let Some(a) = alpha {
            x = &x - a;
        }
        out.push((q, x.frac_deg()?));
    }
    Ok(out)
}
