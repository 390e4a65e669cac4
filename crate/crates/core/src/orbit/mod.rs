//! Approximation of a target vector by the orbit of a starting vector under
//! SL₂(F_q[T]).

mod brute;
mod count;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::Serialize;

use crate::contfrac::{cf_expand, CFExpansion};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::{Laurent, Vec2Laurent};
use crate::norm::NormDeg;
use crate::poly::Poly;

pub use brute::{brute_orbit, brute_orbit_naive, enumeration_contains, gap_check, lb_check, VerificationReport, DEFAULT_ORBIT_LIMIT};
#[cfg(test)]
use brute::brute_orbit_tables;
pub use count::{phi_degree_sum, phi_poly, phi_sum_monic_formula, phi_sum_quoted_formula, sl2_count, Sl2Count};

/// Partial quotients computed for the slopes of x and y.
pub const DEFAULT_CF_TERMS: usize = 48;

/// A 2×2 polynomial matrix of determinant 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Mat2 {
    pub a11: Poly,
    pub a12: Poly,
    pub a21: Poly,
    pub a22: Poly,
}

impl Mat2 {
    pub fn new(a11: Poly, a12: Poly, a21: Poly, a22: Poly) -> Result<Self> {
        let m = Mat2 { a11, a12, a21, a22 };
        if !m.det().is_one() {
            return Err(Error::pre(format!("determinant of {m} is not 1")));
        }
        Ok(m)
    }

    pub(crate) fn raw(a11: Poly, a12: Poly, a21: Poly, a22: Poly) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn identity(field: &Field) -> Self {
        Self::raw(Poly::one(field), Poly::zero(field), Poly::zero(field), Poly::one(field))
    }

    /// U(a) = (1, a; 0, 1).
    pub fn unipotent(a: &Poly) -> Self {
        let f = a.field();
        Self::raw(Poly::one(f), a.clone(), Poly::zero(f), Poly::one(f))
    }

    /// J = (0, −1; 1, 0).
    pub fn j(field: &Field) -> Self {
        Self::raw(Poly::zero(field), -Poly::one(field), Poly::one(field), Poly::zero(field))
    }

    pub fn field(&self) -> &Field {
        self.a11.field()
    }

    pub fn entries(&self) -> [&Poly; 4] {
        [&self.a11, &self.a12, &self.a21, &self.a22]
    }

    pub fn det(&self) -> Poly {
        &(&self.a11 * &self.a22) - &(&self.a12 * &self.a21)
    }

    /// log_q |γ|, the largest entry degree.
    pub fn hdeg(&self) -> i64 {
        self.entries().iter().map(|p| p.deg_i64()).max().expect("four entries")
    }

    /// Degrees of the two columns.
    pub fn col_degs(&self) -> (NormDeg, NormDeg) {
        (self.a11.norm_deg().max(self.a21.norm_deg()), self.a12.norm_deg().max(self.a22.norm_deg()))
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Mat2 {
        Self::raw(self.a22.clone(), -&self.a12, -&self.a21, self.a11.clone())
    }

    pub fn apply(&self, v: &Vec2Laurent) -> Vec2Laurent {
        // zero entries are skipped so an exact zero row stays decidable
        let row = |a: &Poly, b: &Poly| match (a.is_zero(), b.is_zero()) {
            (true, true) => Laurent::zero(self.field()),
            (true, false) => v.c2.mul_poly(b),
            (false, true) => v.c1.mul_poly(a),
            (false, false) => &v.c1.mul_poly(a) + &v.c2.mul_poly(b),
        };
        Vec2Laurent { c1: row(&self.a11, &self.a12), c2: row(&self.a21, &self.a22) }
    }

    /// Entry codes, for deterministic ordering.
    pub fn codes(&self) -> [u64; 4] {
        [self.a11.code(), self.a12.code(), self.a21.code(), self.a22.code()]
    }
}

impl std::ops::Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        Mat2::raw(
            &(&self.a11 * &o.a11) + &(&self.a12 * &o.a21),
            &(&self.a11 * &o.a12) + &(&self.a12 * &o.a22),
            &(&self.a21 * &o.a11) + &(&self.a22 * &o.a21),
            &(&self.a21 * &o.a12) + &(&self.a22 * &o.a22),
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A matrix γ with log_q |γx − y|.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitCandidate {
    pub gamma: Mat2,
    pub hdeg: i64,
    pub errdeg: NormDeg,
    pub k: Option<usize>,
    pub j: Option<usize>,
    pub a: Option<Poly>,
}

impl OrbitCandidate {
    /// Smaller height first, then entry codes.
    pub fn order_key(&self) -> (i64, [u64; 4]) {
        (self.hdeg, self.gamma.codes())
    }
}

/// Target vector y after normalization.
#[derive(Clone, Debug)]
pub enum Target {
    Zero,
    /// y = y₂·(A/B, 1) with gcd(A, B) a unit and |A/B| <= 1.
    Rational { a: Poly, b: Poly, y2: Laurent },
    /// Slope y₁/y₂ treated as irrational, with |y₁/y₂| <= 1.
    Irrational { y: Vec2Laurent, cf: CFExpansion },
}

/// Target as supplied by the caller.
#[derive(Clone, Debug)]
pub enum TargetInput {
    Zero,
    Vector(Vec2Laurent),
    /// y = y₂·(A/B, 1).
    RationalSlope { a: Poly, b: Poly, y2: Laurent },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Transform {
    /// x was replaced by Jx.
    JOnStart,
    /// y was replaced by Jy.
    JOnTarget,
}

/// x with |x| = |x₂| and |ξ| <= 1, together with the normalized target.
#[derive(Clone, Debug)]
pub struct NormalizedPair {
    pub x: Vec2Laurent,
    /// ξ = x₁/x₂.
    pub xi: Laurent,
    pub cf: CFExpansion,
    pub target: Target,
    pub applied: Vec<Transform>,
}

fn is_exact_zero(x: &Laurent) -> bool {
    x.rational().is_some_and(|(n, _)| n.is_zero())
}

fn apply_j(v: &Vec2Laurent) -> Vec2Laurent {
    Vec2Laurent { c1: -&v.c2, c2: v.c1.clone() }
}

fn trust(e: Error, needed: usize, available: usize) -> Error {
    match e {
        Error::UndeterminedToPrecision => Error::trust(needed, available),
        other => other,
    }
}

pub fn normalize_pair(x: &Vec2Laurent, y: TargetInput) -> Result<NormalizedPair> {
    normalize_pair_with(x, y, DEFAULT_CF_TERMS)
}

/// Applies J to x and y where needed so that both slopes have norm at most 1.
pub fn normalize_pair_with(x: &Vec2Laurent, y: TargetInput, cf_terms: usize) -> Result<NormalizedPair> {
    let mut applied = Vec::new();
    let (d1, d2) = (x.c1.norm_deg()?, x.c2.norm_deg()?);
    if d1.is_neg_inf() && d2.is_neg_inf() {
        return Err(Error::pre("x must be nonzero"));
    }
    let x = if d1 > d2 {
        applied.push(Transform::JOnStart);
        apply_j(x)
    } else {
        x.clone()
    };
    if is_exact_zero(&x.c1) {
        return Err(Error::RationalSlopeInput);
    }
    let xi = &x.c1 * &x.c2.inv()?;
    if xi.rational().is_some() {
        return Err(Error::RationalSlopeInput);
    }
    let cf = cf_expand(&xi, cf_terms)?;
    if cf.terminated {
        return Err(Error::RationalSlopeInput);
    }
    let target = match y {
        TargetInput::Zero => Target::Zero,
        TargetInput::RationalSlope { a, b, y2 } => {
            if b.is_zero() {
                return Err(Error::pre("slope denominator must be nonzero"));
            }
            let g = Poly::gcd(&a, &b);
            let (mut a, mut b) = (a.divmod(&g)?.0, b.divmod(&g)?.0);
            let mut y2 = y2;
            if a.deg_i64() > b.deg_i64() {
                applied.push(Transform::JOnTarget);
                y2 = &y2 * &Laurent::from_rational(&a, &b, 0)?;
                (a, b) = (-&b, a);
            }
            Target::Rational { a, b, y2 }
        }
        TargetInput::Vector(v) => {
            let (e1, e2) = (v.c1.norm_deg()?, v.c2.norm_deg()?);
            if e1.is_neg_inf() && e2.is_neg_inf() {
                Target::Zero
            } else {
                let v = if e1 > e2 {
                    applied.push(Transform::JOnTarget);
                    apply_j(&v)
                } else {
                    v
                };
                let slope = &v.c1 * &v.c2.inv()?;
                match slope.rational() {
                    Some((num, den)) => Target::Rational { a: num.clone(), b: den.clone(), y2: v.c2.clone() },
                    None => {
                        let cf = cf_expand(&slope, cf_terms)?;
                        Target::Irrational { y: v, cf }
                    }
                }
            }
        }
    };
    Ok(NormalizedPair { x, xi, cf, target, applied })
}

impl NormalizedPair {
    pub fn field(&self) -> &Field {
        self.x.field()
    }

    /// The target vector y.
    pub fn y(&self) -> Result<Vec2Laurent> {
        let f = self.field();
        Ok(match &self.target {
            Target::Zero => Vec2Laurent { c1: Laurent::zero(f), c2: Laurent::zero(f) },
            Target::Rational { a, b, y2 } => {
                Vec2Laurent { c1: y2 * &Laurent::from_rational(a, b, 0)?, c2: y2.clone() }
            }
            Target::Irrational { y, .. } => y.clone(),
        })
    }

    pub fn x2_deg(&self) -> i64 {
        self.x.c2.norm_deg().expect("checked at normalization").unwrap()
    }

    /// log_q |y₂|, absent for the zero target.
    pub fn y2_deg(&self) -> Result<Option<i64>> {
        Ok(match &self.target {
            Target::Zero => None,
            Target::Rational { y2, .. } => y2.norm_deg()?.value(),
            Target::Irrational { y, .. } => y.c2.norm_deg()?.value(),
        })
    }

    /// log_q |γx − y|.
    pub fn error_deg(&self, gamma: &Mat2) -> Result<NormDeg> {
        let gx = gamma.apply(&self.x);
        let y = self.y()?;
        let d = Vec2Laurent { c1: &gx.c1 - &y.c1, c2: &gx.c2 - &y.c2 };
        d.norm_deg()
    }

    pub fn candidate(&self, gamma: Mat2, k: Option<usize>, j: Option<usize>, a: Option<Poly>) -> Result<OrbitCandidate> {
        let errdeg = self.error_deg(&gamma)?;
        Ok(OrbitCandidate { hdeg: gamma.hdeg(), errdeg, gamma, k, j, a })
    }

    /// A copy whose non-rational exact series are cut to a fixed precision,
    /// which keeps repeated evaluation cheap.
    pub fn materialized(&self, prec: i64) -> NormalizedPair {
        let cut = |l: &Laurent| {
            if l.is_exact() && l.rational().is_none() {
                l.with_prec(prec.max(l.prec())).forget_exact()
            } else {
                l.clone()
            }
        };
        let v = |x: &Vec2Laurent| Vec2Laurent { c1: cut(&x.c1), c2: cut(&x.c2) };
        let target = match &self.target {
            Target::Irrational { y, cf } => Target::Irrational { y: v(y), cf: cf.clone() },
            t => t.clone(),
        };
        NormalizedPair { x: v(&self.x), xi: cut(&self.xi), cf: self.cf.clone(), target, applied: self.applied.clone() }
    }

    /// The matrix acting on the caller's original x and y.
    pub fn to_original(&self, gamma: &Mat2) -> Mat2 {
        let f = self.field();
        let mut g = gamma.clone();
        if self.applied.contains(&Transform::JOnStart) {
            g = &g * &Mat2::j(f);
        }
        if self.applied.contains(&Transform::JOnTarget) {
            g = &Mat2::j(f).inverse() * &g;
        }
        g
    }

    /// ε_n = Q_n ξ − P_n.
    pub fn eps(&self, n: usize) -> Laurent {
        let n = n as i64;
        self.xi.mul_poly(self.cf.q(n)).sub_poly(self.cf.p(n))
    }
}

/// M_k = (Q_k, −P_k; (−1)^{k−1} Q_{k−1}, (−1)^k P_{k−1}).
pub fn convergent_matrix(cf: &CFExpansion, k: usize) -> Result<Mat2> {
    if k > cf.trusted {
        return Err(Error::trust(k, cf.trusted));
    }
    let f = cf.field();
    let k = k as i64;
    Ok(Mat2::raw(
        cf.q(k).clone(),
        -cf.p(k),
        cf.q(k - 1).scale(f.sign(k - 1)),
        cf.p(k - 1).scale(f.sign(k)),
    ))
}

/// N = (A, Ã; B, B̃) for a rational slope, N_j = (R_j, ±R_{j−1}; S_j, ±S_{j−1})
/// for an irrational one.
pub fn slope_matrix(target: &Target, j: usize) -> Result<Mat2> {
    match target {
        Target::Zero => Err(Error::pre("the zero target has no slope")),
        Target::Rational { a, b, .. } => rational_slope_matrix(a, b),
        Target::Irrational { cf, .. } => {
            if j + 1 > cf.trusted {
                return Err(Error::trust(j + 1, cf.trusted));
            }
            let f = cf.field();
            let j = j as i64;
            let s = f.sign(j - 1);
            Ok(Mat2::raw(cf.p(j).clone(), cf.p(j - 1).scale(s), cf.q(j).clone(), cf.q(j - 1).scale(s)))
        }
    }
}

fn rational_slope_matrix(a: &Poly, b: &Poly) -> Result<Mat2> {
    let f = a.field();
    let cf = cf_expand(&Laurent::from_rational(a, b, 0)?, usize::MAX)?;
    let n = cf.len() as i64;
    // A = c P_n, B = c Q_n
    let c = f.mul(b.lead(), f.inv(cf.q(n).lead()).expect("nonzero"));
    let s = f.mul(f.sign(n - 1), f.inv(c).expect("nonzero"));
    let m = Mat2::raw(a.clone(), cf.p(n - 1).scale(s), b.clone(), cf.q(n - 1).scale(s));
    debug_assert!(m.det().is_one());
    Ok(m)
}

/// How the unipotent parameter a is taken from ρ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AChoice {
    Floor,
    FloorPlusOne,
    /// [ρ] unless the lower-left entry of N U([ρ]) M_k has norm below |s Q_{k−1}|.
    Auto,
}

/// a and ρ = (−1)^{k−1} y₂/(x₂ s ε_{k−1}) − (−1)^{k−1} ε_k/ε_{k−1} − s'/s.
pub fn choose_a(np: &NormalizedPair, n: &Mat2, k: usize, variant: AChoice) -> Result<(Poly, Laurent)> {
    let f = np.field().clone();
    let (s, s2) = (&n.a21, &n.a22);
    if s.is_zero() {
        return Err(Error::pre("lower-left entry of N must be nonzero"));
    }
    if k == 0 || k + 1 > np.cf.trusted {
        return Err(Error::trust(k + 1, np.cf.trusted));
    }
    let y2 = np.y()?.c2;
    let e0 = np.eps(k - 1);
    let e1 = np.eps(k);
    let sign = f.sign(k as i64 - 1);
    let t1 = (&y2 * &(&np.x.c2.mul_poly(s) * &e0).inv()?).scale(sign);
    let t2 = (&e1 * &e0.inv()?).scale(sign);
    let t3 = Laurent::from_rational(s2, s, 0)?;
    let rho = &(&t1 - &t2) - &t3;
    let floor = rho.integral_part().map_err(|e| trust(e, k + 1, np.cf.trusted))?;
    let one = Poly::one(&f);
    let a = match variant {
        AChoice::Floor => floor,
        AChoice::FloorPlusOne => &floor + &one,
        AChoice::Auto => {
            let qk = np.cf.q(k as i64);
            let qk1 = np.cf.q(k as i64 - 1);
            let ll = &(s * qk) + &(&qk1.scale(sign) * &(&(s * &floor) + s2));
            if ll.deg_i64() >= s.deg_i64() + qk1.deg_i64() {
                floor
            } else {
                &floor + &one
            }
        }
    };
    Ok((a, rho))
}

/// Comparison used by [`DegreeCheck`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
}

/// An integer inequality `lhs cmp rhs` between scaled degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub label: &'static str,
    pub lhs: i64,
    pub cmp: Cmp,
    pub rhs: i64,
}

impl DegreeCheck {
    fn new(label: &'static str, lhs: i64, cmp: Cmp, rhs: i64) -> Self {
        DegreeCheck { label, lhs, cmp, rhs }
    }

    pub fn holds(&self) -> bool {
        match self.cmp {
            Cmp::Lt => self.lhs < self.rhs,
            Cmp::Le => self.lhs <= self.rhs,
            Cmp::Eq => self.lhs == self.rhs,
            Cmp::Ge => self.lhs >= self.rhs,
        }
    }
}

/// Status of a lower bound on |γ| stated through differences of norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LowerCheck {
    NotApplicable,
    Holds,
    /// Fails, but only because two leading terms have equal degree and may cancel.
    Inconclusive,
    Fails,
}

/// A constructed candidate with the bounds it is supposed to meet.
#[derive(Clone, Debug, Serialize)]
pub struct Constructed {
    pub candidate: OrbitCandidate,
    pub checks: Vec<DegreeCheck>,
    pub lower: LowerCheck,
}

impl Constructed {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(DegreeCheck::holds) && self.lower != LowerCheck::Fails
    }
}

fn compose(n: &Mat2, a: &Poly, m: &Mat2) -> Mat2 {
    &(n * &Mat2::unipotent(a)) * m
}

fn err_deg(c: &OrbitCandidate) -> Result<i64> {
    c.errdeg.value().ok_or_else(|| Error::pre("γx coincides with y"))
}

/// γ = N U(a) M_k for a target of rational slope A/B, with
/// |γ| = |y₂/x₂||Q_k Q_{k−1}| and |γx − y| <= |B x₂/Q_k|.
pub fn gamma_rational(np: &NormalizedPair, k: usize) -> Result<Constructed> {
    let Target::Rational { b, .. } = &np.target else {
        return Err(Error::pre("target slope is not rational"));
    };
    if k == 0 {
        return Err(Error::KTooSmall(k));
    }
    if k + 1 > np.cf.trusted {
        return Err(Error::trust(k + 1, np.cf.trusted));
    }
    let dy = np.y2_deg()?.ok_or_else(|| Error::pre("y₂ must be nonzero"))?;
    let dx = np.x2_deg();
    let (dq, dq1) = (np.cf.deg_q(k as i64), np.cf.deg_q(k as i64 - 1));
    // |a Q_{k−1} B| must dominate |B Q_k| in the lower-left entry
    if dy - dx + dq1 <= b.deg_i64() {
        return Err(Error::KTooSmall(k));
    }
    let n = slope_matrix(&np.target, 0)?;
    let (a, _) = choose_a(np, &n, k, AChoice::Floor)?;
    if a.deg_i64() < 1 {
        return Err(Error::KTooSmall(k));
    }
    let gamma = compose(&n, &a, &convergent_matrix(&np.cf, k)?);
    let candidate = np.candidate(gamma, Some(k), None, Some(a))?;
    let e = err_deg(&candidate)?;
    let checks = vec![
        DegreeCheck::new("hdeg = deg y2 - deg x2 + deg Q_k + deg Q_{k-1}", candidate.hdeg, Cmp::Eq, dy - dx + dq + dq1),
        DegreeCheck::new("errdeg <= deg B + deg x2 - deg Q_k", e, Cmp::Le, b.deg_i64() + dx - dq),
    ];
    Ok(Constructed { candidate, checks, lower: LowerCheck::NotApplicable })
}

/// Index rule relating j (target convergents) and k (start convergents).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// Given j, take k with |y₂Q_{k−1}/x₂|^{1/3} < |S_j| <= |y₂Q_k/x₂|^{1/3} < |S_{j+1}|.
    Sw { j: usize },
    /// Given k with |Q_{k−1}| < |Q_k|^{1/2}, take j with |S_j| <= |y₂Q_k/x₂|^{1/2} < |S_{j+1}|.
    Sw2 { k: usize },
    /// Given k, take j with |S_j| <= |Q_k|^τ < |S_{j+1}|, τ = ω(y)/(2ω(y) + 1).
    JkTau { k: usize, omega_y: Ratio<i64> },
}

fn find_k(cf: &CFExpansion, pred: impl Fn(i64, i64) -> bool) -> Result<usize> {
    (1..=cf.trusted)
        .find(|&k| pred(cf.deg_q(k as i64 - 1), cf.deg_q(k as i64)))
        .ok_or(Error::trust(cf.trusted + 1, cf.trusted))
}

/// γ = N_j U(a) M_k for an irrational target, with
/// |γ| <= max{|S_jQ_k|, |y₂Q_kQ_{k−1}/x₂|} and |γx − y| <= max{|y₂/(S_jS_{j+1})|, |x₂S_j/Q_k|}.
pub fn gamma_irrational(np: &NormalizedPair, strategy: &Strategy) -> Result<Constructed> {
    let Target::Irrational { cf: cy, .. } = &np.target else {
        return Err(Error::pre("target slope is not irrational"));
    };
    let dy = np.y2_deg()?.ok_or_else(|| Error::pre("y₂ must be nonzero"))?;
    let dx = np.x2_deg();
    let d = dy - dx;
    let ds = |j: usize| cy.deg_q(j as i64);
    let mut extra = Vec::new();
    let (j, k, choice) = match strategy {
        Strategy::Sw { j } => {
            let j = *j;
            if j == 0 || j + 1 > cy.trusted {
                return Err(Error::trust(j + 1, cy.trusted));
            }
            let target = 3 * ds(j) - d;
            let k = find_k(&np.cf, |a, b| a < target && target <= b)?;
            if d + np.cf.deg_q(k as i64) >= 3 * ds(j + 1) {
                return Err(Error::StrategyInapplicable(format!(
                    "no k with 3 deg S_j <= deg y2 - deg x2 + deg Q_k < 3 deg S_(j+1) at j = {j}"
                )));
            }
            (j, k, AChoice::Floor)
        }
        Strategy::Sw2 { k } => {
            let k = *k;
            if k == 0 || k + 1 > np.cf.trusted {
                return Err(Error::trust(k + 1, np.cf.trusted));
            }
            let (dq, dq1) = (np.cf.deg_q(k as i64), np.cf.deg_q(k as i64 - 1));
            if 2 * dq1 >= dq {
                return Err(Error::StrategyInapplicable(format!("deg Q_(k-1) >= deg Q_k / 2 at k = {k}")));
            }
            let j = (1..cy.trusted)
                .find(|&j| 2 * ds(j) <= d + dq && d + dq < 2 * ds(j + 1))
                .ok_or_else(|| Error::StrategyInapplicable(format!("no admissible j at k = {k}")))?;
            (j, k, AChoice::Auto)
        }
        Strategy::JkTau { k, omega_y } => {
            let k = *k;
            if *omega_y < Ratio::from_integer(1) {
                return Err(Error::pre("ω(y) is at least 1"));
            }
            if k == 0 || k + 1 > np.cf.trusted {
                return Err(Error::trust(k + 1, np.cf.trusted));
            }
            let tau = omega_y / (omega_y * 2 + 1);
            let (num, den) = (*tau.numer(), *tau.denom());
            let dq = np.cf.deg_q(k as i64);
            let j = (1..cy.trusted)
                .find(|&j| den * ds(j) <= num * dq && num * dq < den * ds(j + 1))
                .ok_or_else(|| Error::trust(cy.trusted + 1, cy.trusted))?;
            extra.push(DegreeCheck::new("den(tau) deg S_j <= num(tau) deg Q_k", den * ds(j), Cmp::Le, num * dq));
            extra.push(DegreeCheck::new("num(tau) deg Q_k < den(tau) deg S_(j+1)", num * dq, Cmp::Lt, den * ds(j + 1)));
            (j, k, AChoice::Floor)
        }
    };
    if k + 1 > np.cf.trusted {
        return Err(Error::trust(k + 1, np.cf.trusted));
    }
    let n = slope_matrix(&np.target, j)?;
    let (a, _) = choose_a(np, &n, k, choice)?;
    let gamma = compose(&n, &a, &convergent_matrix(&np.cf, k)?);
    let candidate = np.candidate(gamma, Some(k), Some(j), Some(a))?;
    let e = err_deg(&candidate)?;
    let h = candidate.hdeg;
    let (dq, dq1) = (np.cf.deg_q(k as i64), np.cf.deg_q(k as i64 - 1));
    let mut checks = vec![
        DegreeCheck::new("hdeg <= max(deg S_j + deg Q_k, deg y2 - deg x2 + deg Q_k + deg Q_(k-1))", h, Cmp::Le, (ds(j) + dq).max(d + dq + dq1)),
        DegreeCheck::new("errdeg <= max(deg y2 - deg S_j - deg S_(j+1), deg x2 + deg S_j - deg Q_k)", e, Cmp::Le, (dy - ds(j) - ds(j + 1)).max(dx + ds(j) - dq)),
    ];
    match strategy {
        Strategy::Sw { .. } => {
            checks.push(DegreeCheck::new("3 errdeg < deg y2 + 2 deg x2 - deg Q_k - deg Q_(k-1)", 3 * e, Cmp::Lt, dy + 2 * dx - dq - dq1));
        }
        Strategy::Sw2 { .. } => {
            checks.push(DegreeCheck::new("2 hdeg <= deg y2 - deg x2 + 3 deg Q_k", 2 * h, Cmp::Le, d + 3 * dq));
            checks.push(DegreeCheck::new("2 errdeg <= deg x2 + deg y2 - deg Q_k", 2 * e, Cmp::Le, dx + dy - dq));
            checks.push(DegreeCheck::new("hdeg >= deg S_j + deg Q_(k-1)", h, Cmp::Ge, ds(j) + dq1));
        }
        Strategy::JkTau { .. } => {}
    }
    checks.extend(extra);
    let q = np.field().q();
    let lower = irrjk_lower(q, h, d + dq + dq1, ds(j) + dq, ds(j - 1) + dq1);
    Ok(Constructed { candidate, checks, lower })
}

/// ||q^{u} − q^{v}| − q^{w}| <= q^{h}, evaluated exactly.
fn irrjk_lower(q: u32, h: i64, u: i64, v: i64, w: i64) -> LowerCheck {
    let m = u.min(v).min(w).min(h).min(0);
    let pow = |e: i64| BigInt::from(q).pow((e - m) as u32);
    let lhs = (pow(u) - pow(v)).magnitude().clone();
    let lhs = BigInt::from(lhs) - pow(w);
    if lhs <= pow(h) {
        LowerCheck::Holds
    } else if u == v {
        LowerCheck::Inconclusive
    } else {
        LowerCheck::Fails
    }
}

/// G = N_j⁻¹ γ M_k⁻¹ with the degrees of its two columns.
pub fn gamma_decompose(gamma: &Mat2, np: &NormalizedPair, j: usize, k: usize) -> Result<(Mat2, NormDeg, NormDeg)> {
    let n = slope_matrix(&np.target, j)?;
    let m = convergent_matrix(&np.cf, k)?;
    let g = &(&n.inverse() * gamma) * &m.inverse();
    let (c1, c2) = g.col_degs();
    Ok((g, c1, c2))
}

/// Orders candidates by error degree, then height, then entries.
pub fn better(a: &OrbitCandidate, b: &OrbitCandidate) -> Ordering {
    a.errdeg.cmp(&b.errdeg).then_with(|| a.order_key().cmp(&b.order_key()))
}

#[cfg(test)]
mod tests;
