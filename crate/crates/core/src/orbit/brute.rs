//! Exhaustive search over SL₂(F_q[T]) below a height bound.
//!
//! Every unimodular γ is reached once: bottom rows (c, d) are coprime pairs,
//! a Bézout completion (a₀, b₀) is reduced modulo (c, d), and the remaining top
//! rows are (a₀ + tc, b₀ + td). Since |γx − y| is the larger of two row errors,
//! both rows are looked up in precomputed tables.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::{Laurent, Vec2Laurent};
use crate::norm::NormDeg;
use crate::poly::Poly;

use super::{convergent_matrix, Mat2, NormalizedPair, OrbitCandidate, Target};

/// Default cap on the number of matrices examined.
pub const DEFAULT_ORBIT_LIMIT: u128 = 1 << 30;

/// Sizes up to which [`brute_orbit`] filters all quadruples directly.
const NAIVE_LIMIT: u128 = 1 << 12;

/// Most witnesses kept in a report.
const MAX_WITNESSES: usize = 16;

fn search_size(q: u32, h: usize, rows: u32) -> Option<u128> {
    (q as u128).checked_pow(rows * (h as u32 + 1))
}

fn check_size(q: u32, h: usize, rows: u32, limit: u128) -> Result<()> {
    match search_size(q, h, rows) {
        Some(size) if size <= limit => Ok(()),
        size => Err(Error::SearchSpaceTooLarge { size: size.unwrap_or(u128::MAX), limit }),
    }
}

mod gf2 {
    pub fn deg(a: u64) -> i32 {
        63 - a.leading_zeros() as i32
    }

    pub fn mul(a: u64, b: u64) -> u64 {
        let mut r = 0;
        let mut b = b;
        let mut i = 0;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a << i;
            }
            b >>= 1;
            i += 1;
        }
        r
    }

    pub fn divmod(a: u64, b: u64) -> (u64, u64) {
        let db = deg(b);
        let (mut q, mut r) = (0, a);
        while r != 0 && deg(r) >= db {
            let s = deg(r) - db;
            q |= 1 << s;
            r ^= b << s;
        }
        (q, r)
    }

    /// (g, u, v) with u·a + v·b = g.
    pub fn xgcd(a: u64, b: u64) -> (u64, u64, u64) {
        let (mut r0, mut r1) = (a, b);
        let (mut u0, mut u1) = (1, 0);
        let (mut v0, mut v1) = (0, 1);
        while r1 != 0 {
            let (q, r) = divmod(r0, r1);
            (r0, r1) = (r1, r);
            (u0, u1) = (u1, u0 ^ mul(q, u1));
            (v0, v1) = (v1, v0 ^ mul(q, v1));
        }
        (r0, u0, v0)
    }
}

/// Calls `visit(codes, hdeg)` for every γ in SL₂(F_q[T]) with all entries of degree <= h.
fn for_each_sl2(field: &Field, h: usize, mut visit: impl FnMut([u64; 4], i64)) {
    let n = (field.q() as u64).pow(h as u32 + 1);
    if field.q() == 2 {
        for c in 0..n {
            for d in 0..n {
                if c | d == 0 {
                    continue;
                }
                let (g, u, _) = gf2::xgcd(d, c);
                if g != 1 {
                    continue;
                }
                let (a0, b0) = if c != 0 {
                    let a0 = gf2::divmod(u, c).1;
                    (a0, gf2::divmod(gf2::mul(a0, d) ^ 1, c).0)
                } else {
                    (u, 0)
                };
                let top = gf2::deg(c).max(gf2::deg(d));
                let m = h as i32 - top;
                let (mut a, mut b) = (a0, b0);
                visit([a, b, c, d], gf2::deg(a | b | c | d) as i64);
                for i in 1u64..(1 << (m + 1)) {
                    let bit = i.trailing_zeros();
                    a ^= c << bit;
                    b ^= d << bit;
                    visit([a, b, c, d], gf2::deg(a | b | c | d) as i64);
                }
            }
        }
        return;
    }
    let polys: Vec<Poly> = Poly::all_up_to(field, h).collect();
    let one = Poly::one(field);
    for c in &polys {
        for d in &polys {
            if c.is_zero() && d.is_zero() {
                continue;
            }
            let (g, u, _) = Poly::xgcd(d, c).expect("not both zero");
            if !g.is_one() {
                continue;
            }
            let (a0, b0) = if c.is_zero() {
                (u, Poly::zero(field))
            } else {
                let a0 = u.rem(c).expect("nonzero");
                let b0 = (&(&a0 * d) - &one).divmod(c).expect("nonzero").0;
                (a0, b0)
            };
            let m = h as i64 - c.deg_i64().max(d.deg_i64());
            for t in Poly::all_up_to(field, m as usize) {
                let a = &a0 + &(&t * c);
                let b = &b0 + &(&t * d);
                let hd = a.deg_i64().max(b.deg_i64()).max(c.deg_i64()).max(d.deg_i64());
                visit([a.code(), b.code(), c.code(), d.code()], hd);
            }
        }
    }
}

/// deg(a x₁ + b x₂ − y) for every (a, b) with deg <= h; entries below the
/// certified window hold `below`.
struct RowTable {
    width: usize,
    vals: Vec<i32>,
}

struct Window {
    floor: i64,
    top: i64,
}

fn window(field: &Field, x: &Vec2Laurent, y: &Vec2Laurent, h: usize) -> Window {
    let up = |l: &Laurent| l.deg_upper().value().unwrap_or(i64::MIN / 4);
    let top = h as i64 + up(&x.c1).max(up(&x.c2)).max(up(&y.c1)).max(up(&y.c2));
    let mut floor = (h as i64 - x.c1.prec()).max(h as i64 - x.c2.prec()).max(-y.c1.prec()).max(-y.c2.prec());
    if field.q() == 2 {
        floor = floor.max(top - 127);
    }
    Window { floor: floor.min(top), top }
}

fn extend(v: &Vec2Laurent, p: i64) -> Vec2Laurent {
    let e = |l: &Laurent| if l.is_exact() && l.prec() < p { l.with_prec(p) } else { l.clone() };
    Vec2Laurent { c1: e(&v.c1), c2: e(&v.c2) }
}

fn materialize_prec(h: usize) -> i64 {
    5 * h as i64 + 96
}

fn row_tables(field: &Field, x: &Vec2Laurent, y: &Vec2Laurent, h: usize) -> (RowTable, RowTable, i32) {
    let depth = 4 * h as i64 + 96;
    let x = extend(x, depth + h as i64);
    let y = extend(y, depth);
    let w = window(field, &x, &y, h);
    let below = (w.floor - 1) as i32;
    let n = (field.q() as usize).pow(h as u32 + 1);
    let len = (w.top - w.floor + 1) as usize;
    // coefficient of T^i s at exponent floor + pos
    let shifted = |s: &Laurent, i: usize| -> Vec<u32> {
        (0..len).map(|pos| s.coeff(w.floor + pos as i64 - i as i64).unwrap_or(0)).collect()
    };
    let target = |s: &Laurent| -> Vec<u32> { (0..len).map(|pos| s.coeff(w.floor + pos as i64).unwrap_or(0)).collect() };
    if field.q() == 2 {
        let bits = |v: Vec<u32>| v.iter().enumerate().fold(0u128, |acc, (i, &c)| acc | ((c as u128) << i));
        let combos = |s: &Laurent| -> Vec<u128> {
            let vs: Vec<u128> = (0..=h).map(|i| bits(shifted(s, i))).collect();
            let mut out = vec![0u128; n];
            for a in 1..n {
                let t = 63 - (a as u64).leading_zeros() as usize;
                out[a] = out[a ^ (1 << t)] ^ vs[t];
            }
            out
        };
        let ax = combos(&x.c1);
        let bx = combos(&x.c2);
        let make = |ys: &Laurent| {
            let yb = bits(target(ys));
            let mut vals = vec![below; n * n];
            for a in 0..n {
                for b in 0..n {
                    let v = ax[a] ^ bx[b] ^ yb;
                    if v != 0 {
                        vals[a * n + b] = (w.floor + 127 - v.leading_zeros() as i64) as i32;
                    }
                }
            }
            RowTable { width: n, vals }
        };
        return (make(&y.c1), make(&y.c2), below);
    }
    let polys: Vec<Poly> = Poly::all_up_to(field, h).collect();
    let combos = |s: &Laurent| -> Vec<Vec<u32>> {
        let vs: Vec<Vec<u32>> = (0..=h).map(|i| shifted(s, i)).collect();
        polys
            .iter()
            .map(|p| {
                let mut acc = vec![0u32; len];
                for (i, &c) in p.coeffs().iter().enumerate() {
                    if c != 0 {
                        for (slot, &v) in acc.iter_mut().zip(&vs[i]) {
                            *slot = field.add(*slot, field.mul(c, v));
                        }
                    }
                }
                acc
            })
            .collect()
    };
    let ax = combos(&x.c1);
    let bx = combos(&x.c2);
    let make = |ys: &Laurent| {
        let yv = target(ys);
        let mut vals = vec![below; n * n];
        for a in 0..n {
            for b in 0..n {
                let top = (0..len).rev().find(|&pos| field.sub(field.add(ax[a][pos], bx[b][pos]), yv[pos]) != 0);
                if let Some(pos) = top {
                    vals[a * n + b] = (w.floor + pos as i64) as i32;
                }
            }
        }
        RowTable { width: n, vals }
    };
    (make(&y.c1), make(&y.c2), below)
}

struct Scan {
    /// Per height shell: (errdeg, codes) of the best matrix.
    shells: Vec<Option<(i32, [u64; 4])>>,
    violations: u64,
    witnesses: Vec<[u64; 4]>,
    scanned: u64,
    below: i32,
}

fn scan(field: &Field, x: &Vec2Laurent, y: &Vec2Laurent, h: usize, bound: Option<i64>) -> Scan {
    let (top, bot, below) = row_tables(field, x, y, h);
    let w = top.width;
    let mut s = Scan { shells: vec![None; h + 1], violations: 0, witnesses: Vec::new(), scanned: 0, below };
    for_each_sl2(field, h, |c, hd| {
        let e = top.vals[c[0] as usize * w + c[1] as usize].max(bot.vals[c[2] as usize * w + c[3] as usize]);
        s.scanned += 1;
        let slot = &mut s.shells[hd as usize];
        if slot.is_none_or(|(be, bc)| (e, c) < (be, bc)) {
            *slot = Some((e, c));
        }
        if bound.is_some_and(|b| (e as i64) < b) {
            s.violations += 1;
            if s.witnesses.len() < MAX_WITNESSES {
                s.witnesses.push(c);
            }
        }
    });
    s
}

fn mat_from_codes(field: &Field, c: [u64; 4]) -> Mat2 {
    let p = |i: usize| Poly::from_code(field, c[i]);
    Mat2::raw(p(0), p(1), p(2), p(3))
}

fn undetermined(s: &Scan) -> bool {
    s.shells.iter().flatten().any(|&(e, _)| e == s.below)
}

/// The best γ (least |γx − y|) in each height shell 0..=h.
pub fn brute_orbit(np: &NormalizedPair, h: usize, limit: u128) -> Result<Vec<OrbitCandidate>> {
    let f = np.field().clone();
    if search_size(f.q(), h, 4).is_some_and(|s| s <= NAIVE_LIMIT) {
        return brute_orbit_naive(np, h);
    }
    brute_orbit_tables(np, h, limit)
}

pub(crate) fn brute_orbit_tables(np: &NormalizedPair, h: usize, limit: u128) -> Result<Vec<OrbitCandidate>> {
    let f = np.field().clone();
    check_size(f.q(), h, 3, limit)?;
    let np = &np.materialized(materialize_prec(h));
    let y = np.y()?;
    let s = scan(&f, &np.x, &y, h, None);
    if undetermined(&s) {
        return Err(Error::trust(h + 1, 0));
    }
    let mut out = Vec::new();
    for (e, c) in s.shells.into_iter().flatten() {
        let cand = np.candidate(mat_from_codes(&f, c), None, None, None)?;
        assert_eq!(cand.errdeg, NormDeg::finite(e as i64), "row tables disagree with direct evaluation");
        out.push(cand);
    }
    Ok(out)
}

/// [`brute_orbit`] by filtering all quadruples of polynomials; for cross-checks at tiny sizes.
pub fn brute_orbit_naive(np: &NormalizedPair, h: usize) -> Result<Vec<OrbitCandidate>> {
    let f = np.field().clone();
    check_size(f.q(), h, 4, 1 << 20)?;
    let np = &np.materialized(materialize_prec(h));
    let polys: Vec<Poly> = Poly::all_up_to(&f, h).collect();
    let mut shells: Vec<Option<OrbitCandidate>> = vec![None; h + 1];
    for a in &polys {
        for b in &polys {
            for c in &polys {
                for d in &polys {
                    let Ok(g) = Mat2::new(a.clone(), b.clone(), c.clone(), d.clone()) else { continue };
                    let cand = np.candidate(g, None, None, None)?;
                    let slot = &mut shells[cand.hdeg as usize];
                    let key = |x: &OrbitCandidate| (x.errdeg, x.gamma.codes());
                    if slot.as_ref().is_none_or(|s| key(&cand) < key(s)) {
                        *slot = Some(cand);
                    }
                }
            }
        }
    }
    Ok(shells.into_iter().flatten().collect())
}

/// Whether the SL₂ enumeration up to height h visits γ.
pub fn enumeration_contains(gamma: &Mat2, h: usize, limit: u128) -> Result<bool> {
    let f = gamma.field().clone();
    check_size(f.q(), h, 3, limit)?;
    let target = gamma.codes();
    let mut found = false;
    for_each_sl2(&f, h, |c, _| found |= c == target);
    Ok(found)
}

/// Outcome of an exhaustive check that every γ below a height bound keeps
/// log_q |γx − y| at or above `bound`.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    /// Largest hdeg scanned.
    pub height: i64,
    pub bound: i64,
    pub scanned: u64,
    pub min_errdeg: NormDeg,
    pub witness: Option<Mat2>,
    pub violations: u64,
    pub falsifications: Vec<Mat2>,
    /// Whether the convergent matrix attains the bound (homogeneous check only).
    pub equality: Option<bool>,
}

fn report(field: &Field, s: Scan, h: i64, bound: i64) -> Result<VerificationReport> {
    if undetermined(&s) && (s.below as i64) >= bound {
        return Err(Error::trust(h as usize + 1, 0));
    }
    let best = s.shells.iter().flatten().min_by_key(|&&(e, c)| (e, c)).copied();
    Ok(VerificationReport {
        passed: s.violations == 0,
        height: h,
        bound,
        scanned: s.scanned,
        min_errdeg: best.map_or(NormDeg::NEG_INF, |b| NormDeg::finite(b.0 as i64)),
        witness: best.map(|b| mat_from_codes(field, b.1)),
        violations: s.violations,
        falsifications: s.witnesses.iter().map(|&c| mat_from_codes(field, c)).collect(),
        equality: None,
    })
}

/// Every γ with |γ| < |Q_{k+1}| has |γx| >= |x₂|/|Q_k|.
pub fn lb_check(np: &NormalizedPair, k: usize, limit: u128) -> Result<VerificationReport> {
    if k + 1 > np.cf.trusted {
        return Err(Error::trust(k + 1, np.cf.trusted));
    }
    let f = np.field().clone();
    let h = np.cf.deg_q(k as i64 + 1) - 1;
    check_size(f.q(), h as usize, 3, limit)?;
    let bound = np.x2_deg() - np.cf.deg_q(k as i64);
    let zero = Vec2Laurent { c1: Laurent::zero(&f), c2: Laurent::zero(&f) };
    let s = scan(&f, &np.x, &zero, h as usize, Some(bound));
    let mut r = report(&f, s, h, bound)?;
    let mk = convergent_matrix(&np.cf, k)?;
    let attained = mk.apply(&np.x).norm_deg()? == bound && mk.hdeg() <= h;
    r.equality = Some(attained);
    Ok(r)
}

/// For a rational-slope target and |Q_k| > |Bx₂/y₂|: every γ with
/// |γ| < |y₂Q_kQ_{k+1}/x₂| has |γx − y| >= |x₂/(BQ_k)|.
pub fn gap_check(np: &NormalizedPair, k: usize, limit: u128) -> Result<VerificationReport> {
    let Target::Rational { b, .. } = &np.target else {
        return Err(Error::pre("target slope is not rational"));
    };
    if k + 1 > np.cf.trusted {
        return Err(Error::trust(k + 1, np.cf.trusted));
    }
    let dy = np.y2_deg()?.ok_or_else(|| Error::pre("y₂ must be nonzero"))?;
    let dx = np.x2_deg();
    let (dq, dq1) = (np.cf.deg_q(k as i64), np.cf.deg_q(k as i64 + 1));
    if dq <= b.deg_i64() + dx - dy {
        return Err(Error::HypothesisNotMet(format!("deg Q_k = {dq} does not exceed deg B + deg x2 - deg y2")));
    }
    let h = dy - dx + dq + dq1 - 1;
    if h < 0 {
        return Err(Error::HypothesisNotMet("empty height range".into()));
    }
    let f = np.field().clone();
    check_size(f.q(), h as usize, 3, limit)?;
    let bound = dx - b.deg_i64() - dq;
    let s = scan(&f, &np.x, &np.y()?, h as usize, Some(bound));
    report(&f, s, h, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn gf2_helpers() {
        assert_eq!(gf2::mul(0b11, 0b11), 0b101);
        assert_eq!(gf2::divmod(0b101, 0b11), (0b11, 0));
        let (g, u, v) = gf2::xgcd(0b1011, 0b110);
        assert_eq!(g, 1);
        assert_eq!(gf2::mul(u, 0b1011) ^ gf2::mul(v, 0b110), 1);
    }

    #[test]
    fn enumeration_counts() {
        // |SL₂(F_q)| = q(q² − 1)
        for q in [2u32, 3] {
            let f = FieldSpec::prime(q).unwrap();
            let mut n = 0;
            for_each_sl2(&f, 0, |_, _| n += 1);
            assert_eq!(n, q * (q * q - 1));
        }
        for (q, h) in [(2u32, 2usize), (3, 1)] {
            let f = FieldSpec::prime(q).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for_each_sl2(&f, h, |c, hd| {
                let m = mat_from_codes(&f, c);
                assert!(m.det().is_one());
                assert_eq!(m.hdeg(), hd);
                assert!(seen.insert(c));
            });
            let polys: Vec<Poly> = Poly::all_up_to(&f, h).collect();
            let mut naive = 0;
            for a in &polys {
                for b in &polys {
                    for c in &polys {
                        for d in &polys {
                            if (&(a * d) - &(b * c)).is_one() {
                                naive += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(seen.len(), naive);
        }
    }
}
