//! Homogeneous and inhomogeneous approximation of a single series.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::contfrac::{cf_expand, CFExpansion};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::Laurent;
use crate::norm::NormDeg;
use crate::poly::Poly;
use crate::search::min_frac_deg;

/// Largest Minkowski index tried by [`inhom_solutions`].
const MAX_K: i64 = 1 << 12;

/// A pair (Q, P) with the degree of the associated error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxSolution {
    pub q: Poly,
    pub p: Poly,
    pub errdeg: NormDeg,
}

fn trust_err(e: Error, needed: usize, available: usize) -> Error {
    match e {
        Error::UndeterminedToPrecision | Error::InsufficientTrust { .. } => Error::trust(needed, available),
        other => other,
    }
}

/// The convergents (Q_n, P_n), n = 1..count, with errdeg = log_q |Q_n ξ − P_n|.
pub fn dirichlet_solutions(xi: &Laurent, count: usize) -> Result<Vec<ApproxSolution>> {
    let cf = cf_expand(xi, count + 1)?;
    let n = if cf.terminated { count.min(cf.len()) } else { count };
    if cf.trusted < n {
        return Err(Error::trust(n, cf.trusted));
    }
    (1..=n as i64)
        .map(|k| {
            let err = xi.mul_poly(cf.q(k)).sub_poly(cf.p(k));
            let errdeg = err.norm_deg().map_err(|e| trust_err(e, n, k as usize - 1))?;
            Ok(ApproxSolution { q: cf.q(k).clone(), p: cf.p(k).clone(), errdeg })
        })
        .collect()
}

/// P with |θ + Pψ|·|φ + Pχ| <= q^{Δdeg−1} and |θ + Pψ| <= |ψ|, given
/// max(|θχ − φψ|, |ψχ|) <= q^{Δdeg}.
///
/// The answer is P₀ or P₀ + 1, where P₀ = −[θ/ψ].
pub fn cassels_reduce(theta: &Laurent, phi: &Laurent, psi: &Laurent, chi: &Laurent, delta_deg: i64) -> Result<Poly> {
    if psi.norm_deg()?.is_neg_inf() {
        return Err(Error::pre("ψ must be nonzero"));
    }
    let cross = &(theta * chi) - &(phi * psi);
    if !cross.deg_at_most(delta_deg)? || !(psi * chi).deg_at_most(delta_deg)? {
        return Err(Error::pre("max(|θχ − φψ|, |ψχ|) exceeds the bound"));
    }
    let p0 = -&(theta * &psi.inv()?).integral_part()?;
    let one = Poly::one(theta.field());
    let psi_deg = psi.norm_deg()?.unwrap();
    for p in [p0.clone(), &p0 + &one] {
        let a = &theta.clone() + &psi.mul_poly(&p);
        let b = &phi.clone() + &chi.mul_poly(&p);
        if (&a * &b).deg_at_most(delta_deg - 1)? && a.deg_at_most(psi_deg)? {
            return Ok(p);
        }
    }
    Err(Error::HypothesisNotMet("neither P0 nor P0 + 1 satisfies the reduction bounds".into()))
}

/// L_j(P) = λ_j P₁ + κ_j P₂ for j = 1, 2.
#[derive(Clone, Debug)]
pub struct LinearFormPair {
    pub l1: Laurent,
    pub k1: Laurent,
    pub l2: Laurent,
    pub k2: Laurent,
    /// log_q |λ₁κ₂ − λ₂κ₁|.
    pub delta_deg: i64,
}

impl LinearFormPair {
    pub fn new(l1: Laurent, k1: Laurent, l2: Laurent, k2: Laurent) -> Result<Self> {
        let det = &(&l1 * &k2) - &(&l2 * &k1);
        let d = det.norm_deg()?;
        let Some(delta_deg) = d.value() else {
            return Err(Error::pre("the forms are linearly dependent"));
        };
        Ok(LinearFormPair { l1, k1, l2, k2, delta_deg })
    }

    pub fn det(&self) -> Laurent {
        &(&self.l1 * &self.k2) - &(&self.l2 * &self.k1)
    }

    pub fn eval1(&self, p1: &Poly, p2: &Poly) -> Laurent {
        &self.l1.mul_poly(p1) + &self.k1.mul_poly(p2)
    }

    pub fn eval2(&self, p1: &Poly, p2: &Poly) -> Laurent {
        &self.l2.mul_poly(p1) + &self.k2.mul_poly(p2)
    }

    fn swapped(&self) -> LinearFormPair {
        LinearFormPair {
            l1: self.l2.clone(),
            k1: self.k2.clone(),
            l2: self.l1.clone(),
            k2: self.k1.clone(),
            delta_deg: self.delta_deg,
        }
    }
}

/// Degree and leading coefficients of a lattice vector.
struct VecInfo {
    deg: i64,
    certain: bool,
    lead: [u32; 2],
}

fn vec_info(c: [&Laurent; 2]) -> VecInfo {
    const NEG: i64 = i64::MIN / 4;
    let bound = |x: &Laurent| -> (i64, bool) {
        if !x.is_zero_to_prec() {
            (x.deg_upper().unwrap(), true)
        } else if x.rational().is_some() {
            (NEG, true)
        } else {
            (-x.prec() - 1, false)
        }
    };
    let (d0, k0) = bound(c[0]);
    let (d1, k1) = bound(c[1]);
    let deg = d0.max(d1);
    let certain = (k0 || d0 < deg) && (k1 || d1 < deg) && (d0 == deg && k0 || d1 == deg && k1);
    let lead = [c[0].coeff(deg).unwrap_or(0), c[1].coeff(deg).unwrap_or(0)];
    VecInfo { deg, certain, lead }
}

/// Nonzero (P₁, P₂) with |L₁(P)| < q^{−r1} and |L₂(P)| < q^{−r2}, provided
/// 0 < |λ₁κ₂ − λ₂κ₁| < q^{−(r1 + r2)}.
///
/// Reduces the lattice {(T^{r1} L₁(P), T^{r2} L₂(P))} until a basis vector of
/// negative degree appears.
pub fn linear_forms_2(l: &LinearFormPair, r1: i64, r2: i64) -> Result<(Poly, Poly)> {
    if l.delta_deg >= -(r1 + r2) {
        return Err(Error::pre(format!("determinant degree {} is not below {}", l.delta_deg, -(r1 + r2))));
    }
    let f = l.l1.field().clone();
    let image = |u: &(Poly, Poly)| -> [Laurent; 2] {
        [l.eval1(&u.0, &u.1).shift(r1), l.eval2(&u.0, &u.1).shift(r2)]
    };
    let mut a = (Poly::one(&f), Poly::zero(&f));
    let mut b = (Poly::zero(&f), Poly::one(&f));
    for _ in 0..100_000 {
        let va = image(&a);
        let vb = image(&b);
        let mut ia = vec_info([&va[0], &va[1]]);
        let mut ib = vec_info([&vb[0], &vb[1]]);
        if ia.deg <= -1 {
            return Ok(a);
        }
        if ib.deg <= -1 {
            return Ok(b);
        }
        if !ia.certain || !ib.certain {
            return Err(Error::trust(1, 0));
        }
        if ia.deg > ib.deg {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut ia, &mut ib);
        }
        let c = if ia.lead[0] != 0 {
            f.mul(ib.lead[0], f.inv(ia.lead[0]).expect("nonzero"))
        } else {
            f.mul(ib.lead[1], f.inv(ia.lead[1]).expect("nonzero"))
        };
        if ib.lead[0] != f.mul(c, ia.lead[0]) || ib.lead[1] != f.mul(c, ia.lead[1]) {
            return Err(Error::pre("reduced lattice has no short vector; determinant bound violated"));
        }
        let m = Poly::monomial(&f, c, (ib.deg - ia.deg) as usize);
        b = (&b.0 - &(&m * &a.0), &b.1 - &(&m * &a.1));
    }
    Err(Error::trust(1, 0))
}

/// Output of [`minkowski_inhom`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinkowskiSolution {
    pub q1: Poly,
    pub q2: Poly,
    /// L₁(P) vanished, so the roles of the two forms were exchanged and the
    /// bound deg(L₁(Q) + ρ₁) < −k is not guaranteed.
    pub fallback: bool,
}

/// Q with |L₁(Q) + ρ₁|·|L₂(Q) + ρ₂| <= q^{Δdeg−2} and, when κ₁/λ₁ is
/// irrational, deg(L₁(Q) + ρ₁) < −k.
pub fn minkowski_inhom(l: &LinearFormPair, rho1: &Laurent, rho2: &Laurent, k: i64) -> Result<MinkowskiSolution> {
    let (p1, p2) = linear_forms_2(l, k, -k - l.delta_deg - 1)?;
    let g = Poly::gcd(&p1, &p2);
    let (p1, p2) = (p1.divmod(&g)?.0, p2.divmod(&g)?.0);
    let lam1 = l.eval1(&p1, &p2);
    let exact_zero = lam1.rational().is_some_and(|(n, _)| n.is_zero());
    if exact_zero {
        let (q1, q2) = minkowski_core(&l.swapped(), rho2, rho1, &p1, &p2)?;
        return Ok(MinkowskiSolution { q1, q2, fallback: true });
    }
    if lam1.is_zero_to_prec() {
        return Err(Error::trust(1, 0));
    }
    let (q1, q2) = minkowski_core(l, rho1, rho2, &p1, &p2)?;
    Ok(MinkowskiSolution { q1, q2, fallback: false })
}

fn minkowski_core(l: &LinearFormPair, rho1: &Laurent, rho2: &Laurent, p1: &Poly, p2: &Poly) -> Result<(Poly, Poly)> {
    let (_, u, v) = Poly::xgcd(p1, p2)?;
    // det [[P1, R1], [P2, R2]] = 1
    let (r1, r2) = (-&v, u);
    let lam1 = l.eval1(p1, p2);
    let lam2 = l.eval2(p1, p2);
    let kap1 = l.eval1(&r1, &r2);
    let kap2 = l.eval2(&r1, &r2);
    let det = l.det();
    let target = &(rho1 * &lam2) - &(rho2 * &lam1);
    let qp2 = (&target * &det.inv()?).integral_part()?;
    let theta = &kap1.mul_poly(&qp2) + rho1;
    let phi = &kap2.mul_poly(&qp2) + rho2;
    let qp1 = cassels_reduce(&theta, &phi, &lam1, &lam2, l.delta_deg - 1)?;
    let q1 = &(p1 * &qp1) + &(&r1 * &qp2);
    let q2 = &(p2 * &qp1) + &(&r2 * &qp2);
    Ok((q1, q2))
}

/// `count` distinct Q with log_q ‖Qξ − α‖ <= −2 − deg Q, from the Minkowski
/// construction at increasing k.
pub fn inhom_solutions(xi: &Laurent, alpha: &Laurent, count: usize) -> Result<Vec<ApproxSolution>> {
    if xi.rational().is_some() {
        return Err(Error::RationalInput);
    }
    let f = xi.field().clone();
    if alpha.rational().is_some_and(|(n, _)| n.is_zero()) {
        return dirichlet_solutions(xi, count);
    }
    let forms = LinearFormPair::new(xi.clone(), Laurent::one(&f), Laurent::one(&f), Laurent::zero(&f))?;
    let rho1 = -alpha;
    let rho2 = Laurent::zero(&f);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let kmax = if xi.is_exact() { MAX_K } else { xi.prec().min(MAX_K) };
    let mut k = 0;
    while k <= kmax && out.len() < count {
        let sol = minkowski_inhom(&forms, &rho1, &rho2, k).map_err(|e| trust_err(e, count, out.len()))?;
        let q = sol.q1;
        // the same Q keeps qualifying until k reaches −deg(L₁(Q) + ρ₁)
        let l1 = &forms.eval1(&q, &sol.q2) + &rho1;
        let next = l1.deg_upper().value().map_or(k + 1, |d| (-d).max(k + 1));
        k = next;
        if q.is_zero() || !seen.insert(q.clone()) {
            continue;
        }
        let err = &xi.mul_poly(&q) - alpha;
        let (ip, _, errdeg) = err.split().map_err(|e| trust_err(e, count, out.len()))?;
        out.push(ApproxSolution { q, p: ip, errdeg });
    }
    if out.len() < count {
        return Err(Error::trust(count, out.len()));
    }
    Ok(out)
}

/// ξ with random partial quotients divisible by T, and α = T^{-1}(1 − ξ).
///
/// Quotient degrees cycle through `degrees`; ξ is known to precision `prec`.
pub fn sharp_instance(field: &Field, degrees: &[usize], seed: u64, prec: i64) -> Result<(Laurent, Laurent)> {
    if degrees.is_empty() || degrees.contains(&0) {
        return Err(Error::pre("quotient degrees must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = Poly::t(field);
    let mut qs = Vec::new();
    loop {
        let d = degrees[qs.len() % degrees.len()];
        qs.push(&t * &Poly::random(field, &mut rng, d - 1));
        let cf = CFExpansion::new(Poly::zero(field), qs.clone(), false);
        let n = cf.len() as i64;
        if n >= 2 && cf.deg_q(n - 1) + cf.deg_q(n) > prec {
            let xi = Laurent::from_rational(cf.p(n - 1), cf.q(n - 1), prec)?.forget_exact();
            let alpha = (&Laurent::one(field) - &xi).shift(-1);
            return Ok((xi, alpha));
        }
    }
}

/// One row of an exhaustive lower-bound scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub q: Poly,
    pub errdeg: NormDeg,
    pub bound: i64,
    pub holds: bool,
}

/// For every nonzero Q with deg Q <= `qdeg`, compares log_q ‖Qξ − α‖ with −2 − deg Q.
pub fn sharpness_scan(xi: &Laurent, alpha: &Laurent, qdeg: usize) -> Result<Vec<ScanRow>> {
    let f = xi.field().clone();
    let mut rows = Vec::new();
    for q in Poly::all_up_to(&f, qdeg).skip(1) {
        let bound = -2 - q.deg_i64();
        let x = &xi.mul_poly(&q) - alpha;
        let errdeg = match x.frac_deg() {
            Ok(d) => d,
            Err(Error::UndeterminedToPrecision) => match x.frac_deg_above(bound)? {
                Some(d) => NormDeg::finite(d),
                None => NormDeg::finite(-x.prec() - 1),
            },
            Err(e) => return Err(e),
        };
        rows.push(ScanRow { holds: errdeg >= bound, q, errdeg, bound });
    }
    Ok(rows)
}

/// Default cap on the number of (α, Q) pairs examined by [`worst_alpha_search`].
pub const DEFAULT_SEARCH_LIMIT: u128 = 1 << 26;

/// Over all α supported on exponents −1..−`adeg_depth`, maximizes
/// min over 0 < deg Q <= `qdeg_bound` of deg Q + log_q ‖Qξ − α‖.
///
/// Ties go to the first α in lexicographic order of its coefficients from T^{-1} down.
pub fn worst_alpha_search(xi: &Laurent, qdeg_bound: usize, adeg_depth: usize, limit: u128) -> Result<(Laurent, NormDeg)> {
    let f = xi.field().clone();
    let q = f.q() as u128;
    let size = q.pow(adeg_depth as u32) * q.pow(qdeg_bound as u32 + 1);
    if size > limit {
        return Err(Error::SearchSpaceTooLarge { size, limit });
    }
    let width = xi.prec() - qdeg_bound as i64;
    if width < adeg_depth as i64 + 1 && !xi.is_exact() {
        return Err(Error::UndeterminedToPrecision);
    }
    let width = width.max(adeg_depth as i64 + 1) as usize;
    let xi = xi.with_prec((width + qdeg_bound) as i64);
    let table: Vec<(i64, Vec<u32>)> = Poly::all_up_to(&f, qdeg_bound)
        .filter(|p| p.deg_i64() > 0)
        .map(|p| {
            let x = xi.mul_poly(&p);
            (p.deg_i64(), (1..=width as i64).map(|j| x.coeff(-j).expect("within precision")).collect())
        })
        .collect();
    let mut best: Option<(Vec<u32>, NormDeg)> = None;
    let count = q.pow(adeg_depth as u32) as u64;
    let mut digits = vec![0u32; adeg_depth];
    for code in 0..count {
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = (c % q as u64) as u32;
            c /= q as u64;
        }
        let mut score: Option<NormDeg> = None;
        for (deg, v) in &table {
            let j = (0..width).find(|&j| v[j] != digits.get(j).copied().unwrap_or(0));
            let Some(j) = j else {
                return Err(Error::UndeterminedToPrecision);
            };
            let s = NormDeg::finite(deg - 1 - j as i64);
            score = Some(score.map_or(s, |t| t.min(s)));
        }
        let score = score.unwrap_or(NormDeg::NEG_INF);
        if best.as_ref().is_none_or(|b| score > b.1) {
            best = Some((digits.clone(), score));
        }
    }
    let (digits, score) = best.expect("at least one candidate");
    let terms: Vec<(i64, u32)> = digits.iter().enumerate().map(|(j, &c)| (-(j as i64) - 1, c)).collect();
    let num_deg = adeg_depth;
    let mut v = vec![0u32; num_deg + 1];
    for (e, c) in terms {
        v[(e + num_deg as i64) as usize] = c;
    }
    let alpha = Laurent::from_rational(&Poly::from_coeffs(&f, v), &Poly::monomial(&f, 1, num_deg), 1)?;
    Ok((alpha, score))
}

/// Monic Q with |Qξ − α − P| <= q^{−1−deg Q}, one for each of the first
/// `count` convergent denominators.
pub fn monic_solutions(xi: &Laurent, alpha: &Laurent, count: usize) -> Result<Vec<ApproxSolution>> {
    let cf = cf_expand(xi, count + 1)?;
    if cf.trusted < count && !cf.terminated {
        return Err(Error::trust(count, cf.trusted));
    }
    let f = xi.field().clone();
    let mut out = Vec::new();
    for n in 1..=count.min(cf.len()) as i64 {
        let c = f.inv(cf.q(n).lead()).expect("nonzero denominator");
        let s = cf.q(n).scale(c);
        let r = cf.p(n).scale(c);
        let sa = alpha.mul_poly(&s).integral_part().map_err(|e| trust_err(e, count, out.len()))?;
        let (_, u, _) = Poly::xgcd(&r, &s)?;
        let p1 = (&u * &sa).rem(&s)?;
        let (p2, rest) = (&sa - &(&r * &p1)).divmod(&s)?;
        debug_assert!(rest.is_zero());
        let q = &s + &p1;
        let p = &r - &p2;
        let err = &xi.mul_poly(&q) - alpha;
        let errdeg = err.sub_poly(&p).norm_deg().map_err(|e| trust_err(e, count, out.len()))?;
        out.push(ApproxSolution { q, p, errdeg });
    }
    Ok(out)
}

/// Degree form of an approximating function: Ψ(q^h) = q^{ψ(h)}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiTable {
    entries: Vec<(i64, i64)>,
}

impl PsiTable {
    /// Entries `(h, ψ(h))` with strictly increasing h and nonincreasing ψ.
    pub fn new(entries: Vec<(i64, i64)>) -> Result<Self> {
        for w in entries.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::pre("heights must be strictly increasing"));
            }
            if w[1].1 > w[0].1 {
                return Err(Error::pre("ψ must be nonincreasing"));
            }
        }
        Ok(PsiTable { entries })
    }

    pub fn from_fn(hmax: i64, psi: impl Fn(i64) -> i64) -> Result<Self> {
        Self::new((0..=hmax).map(|h| (h, psi(h))).collect())
    }

    /// ψ(h) = −⌈h / ln(h + 2)⌉, a slowly decaying Ψ(n) = n^{-1/log log n} stand-in.
    pub fn slow_decay(hmax: i64) -> Self {
        let mut entries = Vec::new();
        let mut prev = 0;
        for h in 0..=hmax {
            let v = -((h as f64 / ((h + 2) as f64).ln()).ceil() as i64);
            prev = v.min(prev);
            entries.push((h, prev));
        }
        PsiTable { entries }
    }

    pub fn entries(&self) -> &[(i64, i64)] {
        &self.entries
    }

    pub fn psi(&self, h: i64) -> Option<i64> {
        self.entries.iter().find(|e| e.0 == h).map(|e| e.1)
    }

    /// Smallest tabulated h > `after` with ψ(h) < `bound`.
    pub fn next_height(&self, after: Option<i64>, bound: i64) -> Option<i64> {
        self.entries.iter().find(|&&(h, v)| after.is_none_or(|a| h > a) && v < bound).map(|e| e.0)
    }
}

/// The pair (ξ, α = T^{-1}) built from rationals R_n/S_n together with the
/// heights at which ‖Qξ − α‖ <= Ψ(H), |Q| <= H has no solution.
#[derive(Clone, Debug, Serialize)]
pub struct CasselsPair {
    pub xi: Laurent,
    pub alpha: Laurent,
    /// h_2, h_3, ... with H_n = q^{h_n}.
    pub heights: Vec<i64>,
    /// S_1, S_2, ...
    pub s: Vec<Poly>,
    /// R_1, R_2, ...
    pub r: Vec<Poly>,
}

/// Builds S_1..S_{steps+1} and h_2..h_{steps+1}.
pub fn cassels_pair(psi: &PsiTable, steps: usize, field: &Field, seed: u64) -> Result<CasselsPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Poly::one(field);
    let mut s = vec![&Poly::t(field) + &one];
    let mut r = vec![one];
    let mut heights: Vec<i64> = Vec::new();
    let q = field.q();
    for n in 1..=steps {
        let sn = s.last().expect("nonempty");
        let h = psi
            .next_height(heights.last().copied(), -2 - sn.deg_i64())
            .ok_or(Error::TableExhausted(n))?;
        heights.push(h);
        let d = (1 + h + sn.deg_i64()) as usize;
        let mut next = Poly::random(field, &mut rng, d);
        if next.coeff(0) == 0 {
            next = &next + &Poly::constant(field, rng.gen_range(1..q));
        }
        let rn = (&next * r.last().expect("nonempty")).divmod(sn)?.0;
        s.push(next);
        r.push(rn);
    }
    let last = s.last().expect("nonempty");
    let xi = Laurent::from_rational(r.last().expect("nonempty"), last, last.deg_i64() + 1)?.forget_exact();
    Ok(CasselsPair { xi, alpha: Laurent::monomial(field, 1, -1), heights, s, r })
}

/// Verification of the insolubility chain at one height.
#[derive(Clone, Debug, Serialize)]
pub struct ChainRow {
    pub n: usize,
    pub h: i64,
    /// min over deg Q <= h of log_q ‖Qξ − α‖.
    pub min_err: NormDeg,
    /// −2 − deg S_n.
    pub floor: i64,
    pub psi: i64,
    pub holds: bool,
}

/// For each n, every Q with deg Q <= h_{n+1} has ‖Qξ − α‖ >= q^{-2}/|S_n| > Ψ(H_{n+1}).
pub fn cassels_chain(pair: &CasselsPair, psi: &PsiTable) -> Result<Vec<ChainRow>> {
    pair.heights
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            let min_err = min_frac_deg(&pair.xi, Some(&pair.alpha), h as usize)?;
            let floor = -2 - pair.s[i].deg_i64();
            let psi_h = psi.psi(h).ok_or(Error::TableExhausted(i + 1))?;
            Ok(ChainRow { n: i + 1, h, min_err, floor, psi: psi_h, holds: min_err >= floor && floor > psi_h })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::cf_eval_periodic;
    use crate::field::FieldSpec;
    use crate::laurent::{random_series, random_series_with};
    use crate::search::frac_degs;
    use crate::text::parse_laurent;

    fn f2() -> Field {
        FieldSpec::prime(2).unwrap()
    }

    fn all_t(f: &Field) -> Laurent {
        cf_eval_periodic(&Poly::zero(f), &[], &[Poly::t(f)], 64).unwrap()
    }

    fn lit(f: &Field, s: &str) -> Laurent {
        parse_laurent(f, s).unwrap()
    }

    #[test]
    fn dirichlet_examples() {
        let f = f2();
        let sols = dirichlet_solutions(&all_t(&f), 4).unwrap();
        assert_eq!(sols[0].q, Poly::t(&f));
        assert_eq!(sols[0].p, Poly::one(&f));
        assert_eq!(sols[0].errdeg, -2);
        for s in &sols {
            assert!(s.errdeg <= -1 - s.q.deg_i64());
        }
        let r = crate::contfrac::cf_eval(&Poly::zero(&f), &[Poly::t(&f), Poly::t(&f)], 8).unwrap();
        let sols = dirichlet_solutions(&r, 10).unwrap();
        assert_eq!(sols.len(), 2);
        assert_eq!(sols[1].errdeg, NormDeg::NEG_INF);
        for seed in 0..10 {
            let xi = random_series(&f, seed, 64, -1);
            for s in dirichlet_solutions(&xi, 5).unwrap() {
                assert!(s.errdeg <= -1 - s.q.deg_i64());
            }
        }
    }

    #[test]
    fn cassels_examples() {
        let f = f2();
        let z = Laurent::zero(&f);
        let one = Laurent::one(&f);
        let p = cassels_reduce(&z, &z, &one, &Laurent::monomial(&f, 1, -2), -2).unwrap();
        assert!(p.is_zero());
        let t1 = Laurent::monomial(&f, 1, -1);
        let p = cassels_reduce(&t1, &t1, &one, &one, 0).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn cassels_random_tuples() {
        let f = FieldSpec::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 300 {
            let v: Vec<Laurent> = (0..4)
                .map(|_| {
                    let lead = rng.gen_range(-3..3);
                    random_series_with(&f, &mut rng, 32, lead)
                })
                .collect();
            let (theta, phi, psi, chi) = (&v[0], &v[1], &v[2], &v[3]);
            let Ok(d) = (&(theta * chi) - &(phi * psi)).norm_deg() else { continue };
            let Ok(e) = (psi * chi).norm_deg() else { continue };
            let delta = d.max(e).unwrap();
            let p = cassels_reduce(theta, phi, psi, chi, delta).unwrap();
            let a = theta + &psi.mul_poly(&p);
            let b = phi + &chi.mul_poly(&p);
            assert!((&a * &b).deg_at_most(delta - 1).unwrap());
            assert!(a.norm_deg().unwrap() <= psi.norm_deg().unwrap());
            checked += 1;
        }
    }

    #[test]
    fn linear_forms_examples() {
        let f = f2();
        let (one, zero) = (Laurent::one(&f), Laurent::zero(&f));
        let id = LinearFormPair::new(one.clone(), zero.clone(), zero.clone(), one.clone()).unwrap();
        let (p1, p2) = linear_forms_2(&id, -1, -1).unwrap();
        assert_eq!((p1, p2), (Poly::one(&f), Poly::zero(&f)));

        let xi = all_t(&f);
        let cf = cf_expand(&xi, 20).unwrap();
        let l = LinearFormPair::new(xi.clone(), one.clone(), one.clone(), zero.clone()).unwrap();
        for k in 0..8 {
            let (p1, p2) = linear_forms_2(&l, k, -k - 1).unwrap();
            let conv = (0..20).any(|n| cf.q(n) == &p1 && cf.p(n) == &-&p2);
            assert!(conv, "k={k}: ({p1}, {p2})");
        }
    }

    #[test]
    fn linear_forms_exhaustive_cross_check() {
        let f = f2();
        let polys: Vec<Poly> = Poly::all_up_to(&f, 1).collect();
        let mut cases = 0;
        for entries in 0..(4u32.pow(4)) {
            let e: Vec<Laurent> = (0..4).map(|i| Laurent::from_poly(&polys[(entries >> (2 * i) & 3) as usize])).collect();
            let Ok(l) = LinearFormPair::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()) else { continue };
            for (r1, r2) in [(-1, -2), (-2, -1), (-1, -1 - l.delta_deg), (0, -1 - l.delta_deg)] {
                if l.delta_deg >= -(r1 + r2) {
                    continue;
                }
                let (p1, p2) = linear_forms_2(&l, r1, r2).unwrap();
                assert!(!(p1.is_zero() && p2.is_zero()));
                assert!(l.eval1(&p1, &p2).norm_deg().unwrap() < -r1);
                assert!(l.eval2(&p1, &p2).norm_deg().unwrap() < -r2);
                // some admissible point of small degree exists
                let small = Poly::all_up_to(&f, 3).any(|a| {
                    Poly::all_up_to(&f, 3).any(|b| {
                        !(a.is_zero() && b.is_zero())
                            && l.eval1(&a, &b).norm_deg().unwrap() < -r1
                            && l.eval2(&a, &b).norm_deg().unwrap() < -r2
                    })
                });
                assert!(small);
                cases += 1;
            }
        }
        assert!(cases > 50);
    }

    #[test]
    fn minkowski_example() {
        let f = f2();
        let xi = all_t(&f);
        let alpha = lit(&f, "T^-1+T^-4");
        let (one, zero) = (Laurent::one(&f), Laurent::zero(&f));
        let l = LinearFormPair::new(xi.clone(), one.clone(), one.clone(), zero.clone()).unwrap();
        for k in 0..10 {
            let sol = minkowski_inhom(&l, &-&alpha, &zero, k).unwrap();
            assert!(!sol.fallback);
            let a = &l.eval1(&sol.q1, &sol.q2) - &alpha;
            let b = l.eval2(&sol.q1, &sol.q2);
            assert!((&a * &b).deg_at_most(-2).unwrap());
            assert!(a.deg_at_most(-k - 1).unwrap());
        }
    }

    #[test]
    fn minkowski_rational_slope_falls_back() {
        let f = f2();
        let t = Laurent::monomial(&f, 1, 1);
        let one = Laurent::one(&f);
        let l = LinearFormPair::new(t.clone(), one.clone(), one.clone(), Laurent::zero(&f)).unwrap();
        let rho = Laurent::monomial(&f, 1, -3);
        let sol = minkowski_inhom(&l, &rho, &rho, 2).unwrap();
        let a = &l.eval1(&sol.q1, &sol.q2) + &rho;
        let b = &l.eval2(&sol.q1, &sol.q2) + &rho;
        assert!((&a * &b).deg_at_most(-2).unwrap());
    }

    #[test]
    fn inhom_examples() {
        let f = f2();
        let xi = all_t(&f);
        for s in inhom_solutions(&xi, &Laurent::zero(&f), 5).unwrap() {
            assert!(s.errdeg <= -1 - s.q.deg_i64());
        }
        for seed in 0..40 {
            let xi = random_series(&f, seed, 128, -1);
            let alpha = random_series(&f, seed + 1000, 128, -1);
            let sols = inhom_solutions(&xi, &alpha, 5).unwrap();
            assert_eq!(sols.len(), 5);
            for s in sols {
                assert!(s.errdeg <= -2 - s.q.deg_i64());
            }
        }
        let r = Laurent::from_rational(&Poly::one(&f), &Poly::t(&f), 10).unwrap();
        assert_eq!(inhom_solutions(&r, &r, 1), Err(Error::RationalInput));
    }

    #[test]
    fn sharp_instance_examples() {
        let f = f2();
        let (xi, alpha) = sharp_instance(&f, &[1], 0, 40).unwrap();
        let cf = cf_expand(&xi, 100).unwrap();
        assert!(cf.quotients.iter().all(|a| *a == Poly::t(&f)));
        assert_eq!(sharp_instance(&f, &[2, 1, 3], 7, 48).unwrap().0, sharp_instance(&f, &[2, 1, 3], 7, 48).unwrap().0);
        let rows = sharpness_scan(&xi, &alpha, 6).unwrap();
        assert_eq!(rows.len(), 127);
        assert!(rows.iter().all(|r| r.holds));
    }

    #[test]
    fn worst_alpha_examples() {
        let f = f2();
        let (xi, alpha) = sharp_instance(&f, &[1], 0, 48).unwrap();
        let (_, score) = worst_alpha_search(&xi, 5, 8, DEFAULT_SEARCH_LIMIT).unwrap();
        let truncated = Laurent::from_terms(&f, &alpha.terms().into_iter().filter(|t| t.0 >= -8).collect::<Vec<_>>(), 8);
        let witness = frac_degs(&xi, Some(&truncated), 5)
            .unwrap()
            .into_iter()
            .filter(|(q, _)| q.deg_i64() > 0)
            .map(|(q, d)| d + q.deg_i64())
            .min()
            .unwrap();
        assert!(witness >= -2);
        assert!(score >= witness);
        let (_, s1) = worst_alpha_search(&xi, 5, 1, DEFAULT_SEARCH_LIMIT).unwrap();
        assert!(s1 <= score);
        assert!(matches!(worst_alpha_search(&xi, 20, 20, 1 << 20), Err(Error::SearchSpaceTooLarge { .. })));
    }

    #[test]
    fn monic_examples() {
        let f = f2();
        let xi = all_t(&f);
        let zero = Laurent::zero(&f);
        let cf = cf_expand(&xi, 6).unwrap();
        for (n, s) in monic_solutions(&xi, &zero, 5).unwrap().iter().enumerate() {
            assert_eq!(&s.q, cf.q(n as i64 + 1));
        }
        let alpha = Laurent::monomial(&f, 1, -1);
        for s in monic_solutions(&xi, &alpha, 5).unwrap() {
            assert!(s.q.is_monic());
            assert!(s.errdeg <= -1 - s.q.deg_i64());
        }
        let f5 = FieldSpec::prime(5).unwrap();
        let xi = random_series(&f5, 1, 64, -1);
        let alpha = random_series(&f5, 2, 64, 2);
        let sols = monic_solutions(&xi, &alpha, 5).unwrap();
        let degs: BTreeSet<i64> = sols.iter().map(|s| s.q.deg_i64()).collect();
        assert_eq!(degs.len(), 5);
        for s in sols {
            assert!(s.q.is_monic() && s.errdeg <= -1 - s.q.deg_i64());
        }
    }

    #[test]
    fn psi_table_rules() {
        assert!(PsiTable::new(vec![(1, -1), (1, -2)]).is_err());
        assert!(PsiTable::new(vec![(1, -1), (2, 0)]).is_err());
        let t = PsiTable::from_fn(50, |h| -(h / 6)).unwrap();
        assert_eq!(t.next_height(None, -3), Some(24));
        assert_eq!(t.next_height(Some(30), -3), Some(31));
        let slow = PsiTable::slow_decay(400);
        assert!(slow.entries().windows(2).all(|w| w[1].1 <= w[0].1));
    }

    #[test]
    fn cassels_pair_small() {
        let f = f2();
        let psi = PsiTable::from_fn(400, |h| -(h + 5) / 6).unwrap();
        let one = cassels_pair(&psi, 1, &f, 3).unwrap();
        assert_eq!(one.heights, vec![19]);
        let first = Laurent::from_rational(&Poly::one(&f), &one.s[0], 24).unwrap();
        assert_eq!(one.xi.truncate(21), first.truncate(21).forget_exact());
        assert_ne!(one.xi.truncate(22), first.truncate(22).forget_exact());
        assert_eq!(one.alpha.terms(), vec![(-1, 1)]);

        let pair = cassels_pair(&psi, 2, &f, 3).unwrap();
        assert_eq!(pair.heights, vec![19, 139]);
        for w in pair.s.windows(2) {
            assert!(w[1].coeff(0) != 0);
        }
        let chain = cassels_chain(&pair, &psi).unwrap();
        assert!(chain.iter().all(|c| c.holds), "{chain:?}");
        assert!(matches!(cassels_pair(&psi, 3, &f, 3), Err(Error::TableExhausted(3))));
    }
}
