//! Finite-height estimates of the exponents ω, ŵ, μ, μ̂ and the values the
//! orbit theorem predicts for them.
//!
//! Every profile is prefix evidence: a limit cannot be read off a truncation.

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::norm::NormDeg;
use crate::orbit::{
    brute_orbit, convergent_matrix, gamma_irrational, gamma_rational, NormalizedPair, OrbitCandidate, Strategy, Target,
};
use crate::search::min_frac_deg;

/// A nonnegative exponent, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExponentValue {
    Finite(Ratio<i64>),
    Infinite,
}

impl ExponentValue {
    pub fn int(n: i64) -> Self {
        ExponentValue::Finite(Ratio::from_integer(n))
    }

    pub fn finite(self) -> Option<Ratio<i64>> {
        match self {
            ExponentValue::Finite(r) => Some(r),
            ExponentValue::Infinite => None,
        }
    }

    /// (numerator, denominator), with infinity as (1, 0).
    pub fn parts(self) -> (i64, i64) {
        match self {
            ExponentValue::Finite(r) => (*r.numer(), *r.denom()),
            ExponentValue::Infinite => (1, 0),
        }
    }

    /// |self − target| <= tol, exactly.
    pub fn within(self, target: Ratio<i64>, tol: Ratio<i64>) -> bool {
        self.finite().is_some_and(|r| {
            let d = r - target;
            (if d < Ratio::from_integer(0) { -d } else { d }) <= tol
        })
    }
}

impl fmt::Display for ExponentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentValue::Finite(r) => write!(f, "{r}"),
            ExponentValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExponentValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentKind {
    Omega,
    OmegaHat,
    Mu,
    MuHat,
}

impl ExponentKind {
    fn uniform(self) -> bool {
        matches!(self, ExponentKind::OmegaHat | ExponentKind::MuHat)
    }
}

impl fmt::Display for ExponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExponentKind::Omega => "omega",
            ExponentKind::OmegaHat => "omega_hat",
            ExponentKind::Mu => "mu",
            ExponentKind::MuHat => "mu_hat",
        })
    }
}

/// Best error degree at or below each height, with ratio −best_err/h.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentProfile {
    pub kind: ExponentKind,
    pub heights: Vec<i64>,
    pub best_err: Vec<NormDeg>,
    pub ratios: Vec<ExponentValue>,
}

/// One line of the profile CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub h: i64,
    pub best_err: NormDeg,
    pub ratio_num: i64,
    pub ratio_den: i64,
    pub kind: ExponentKind,
}

fn ratio(err: NormDeg, h: i64) -> ExponentValue {
    match err.value() {
        Some(e) => ExponentValue::Finite(Ratio::new(-e, h)),
        None => ExponentValue::Infinite,
    }
}

impl ExponentProfile {
    fn from_points(kind: ExponentKind, points: Vec<(i64, NormDeg)>) -> Self {
        let (heights, best_err): (Vec<_>, Vec<_>) = points.into_iter().unzip();
        let ratios = heights.iter().zip(&best_err).map(|(&h, &e)| ratio(e, h)).collect();
        ExponentProfile { kind, heights, best_err, ratios }
    }

    /// The uniform companion: at each height the worst ratio over the top half
    /// of the heights seen so far. `best_err` is that of the worst shell, the
    /// latest one on ties.
    fn uniform_of(&self, kind: ExponentKind) -> Self {
        let mut points = Vec::with_capacity(self.heights.len());
        for (i, &h) in self.heights.iter().enumerate() {
            let lo = (h + 1) / 2;
            let worst = (0..=i)
                .rev()
                .filter(|&j| self.heights[j] >= lo)
                .min_by(|&a, &b| self.ratios[a].cmp(&self.ratios[b]))
                .expect("h itself is in range");
            points.push((h, worst));
        }
        ExponentProfile {
            kind,
            heights: points.iter().map(|p| p.0).collect(),
            best_err: points.iter().map(|p| self.best_err[p.1]).collect(),
            ratios: points.iter().map(|p| self.ratios[p.1]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    /// Ratio recorded at height h.
    pub fn ratio_at(&self, h: i64) -> Option<ExponentValue> {
        self.heights.iter().position(|&x| x == h).map(|i| self.ratios[i])
    }

    /// Indices of the entries in the top half of the height range.
    fn top_half(&self) -> impl Iterator<Item = usize> + '_ {
        let hmax = self.heights.last().copied().unwrap_or(0);
        (0..self.len()).filter(move |&i| 2 * self.heights[i] >= hmax)
    }

    /// Prefix estimate: the largest ratio over the top half of the heights for
    /// ω and μ, the last (already worst-case) entry for the uniform kinds.
    pub fn estimate(&self) -> Option<ExponentValue> {
        if self.kind.uniform() {
            self.ratios.last().copied()
        } else {
            self.top_half().map(|i| self.ratios[i]).max()
        }
    }

    pub fn rows(&self) -> Vec<ProfileRow> {
        (0..self.len())
            .map(|i| {
                let (ratio_num, ratio_den) = self.ratios[i].parts();
                ProfileRow { h: self.heights[i], best_err: self.best_err[i], ratio_num, ratio_den, kind: self.kind }
            })
            .collect()
    }
}

/// ω and ŵ profiles of ‖Qξ − θ‖ for heights 1..=hmax; θ = 0 restricts to
/// nonzero Q.
pub fn omega_profile_matrix(xi: &Laurent, theta: &Laurent, hmax: usize) -> Result<(ExponentProfile, ExponentProfile)> {
    let alpha = match theta.norm_deg() {
        Ok(d) if d.is_neg_inf() => None,
        _ => Some(theta),
    };
    let mut points = Vec::with_capacity(hmax);
    for h in 1..=hmax {
        points.push((h as i64, min_frac_deg(xi, alpha, h)?));
    }
    let omega = ExponentProfile::from_points(ExponentKind::Omega, points);
    let hat = omega.uniform_of(ExponentKind::OmegaHat);
    Ok((omega, hat))
}

/// ŵ restricted to a chosen list of heights, each taken as its own top half.
pub fn omega_hat_at(xi: &Laurent, theta: &Laurent, heights: &[i64]) -> Result<ExponentProfile> {
    let mut points = Vec::with_capacity(heights.len());
    for &h in heights {
        let h = usize::try_from(h).map_err(|_| Error::pre("heights must be nonnegative"))?;
        points.push((h as i64, min_frac_deg(xi, Some(theta), h)?));
    }
    Ok(ExponentProfile::from_points(ExponentKind::OmegaHat, points))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MuMode {
    Brute,
    Constructed,
}

/// The candidates the constructions produce with height at most hmax.
pub fn constructed_candidates(np: &NormalizedPair, hmax: usize) -> Result<Vec<OrbitCandidate>> {
    let hmax = hmax as i64;
    let mut out = Vec::new();
    let stop = |e: &Error| matches!(e, Error::InsufficientTrust { .. } | Error::UndeterminedToPrecision);
    let skip = |e: &Error| matches!(e, Error::KTooSmall(_) | Error::StrategyInapplicable(_));
    match &np.target {
        Target::Zero => {
            for k in 1..np.cf.trusted {
                if np.cf.deg_q(k as i64) > hmax {
                    break;
                }
                let m = convergent_matrix(&np.cf, k)?;
                out.push(np.candidate(m, Some(k), None, None)?);
            }
        }
        Target::Rational { .. } => {
            let d = np.y2_deg()?.ok_or_else(|| Error::pre("y₂ must be nonzero"))? - np.x2_deg();
            for k in 1..np.cf.trusted {
                if d + np.cf.deg_q(k as i64) + np.cf.deg_q(k as i64 - 1) > hmax {
                    break;
                }
                match gamma_rational(np, k) {
                    Ok(c) if c.candidate.hdeg <= hmax => out.push(c.candidate),
                    Ok(_) => {}
                    Err(e) if skip(&e) => {}
                    Err(e) if stop(&e) => break,
                    Err(e) => return Err(e),
                }
            }
        }
        Target::Irrational { .. } => {
            let strategies = (1..np.cf.trusted).flat_map(|i| [Strategy::Sw { j: i }, Strategy::Sw2 { k: i }]);
            let mut misses = 0;
            for s in strategies {
                match gamma_irrational(np, &s) {
                    Ok(c) if c.candidate.hdeg <= hmax => {
                        misses = 0;
                        out.push(c.candidate);
                    }
                    Ok(_) => misses += 1,
                    Err(e) if skip(&e) => {}
                    Err(e) if stop(&e) => misses += 1,
                    Err(e) => return Err(e),
                }
                // heights grow with the index, so a run of misses ends the search
                if misses >= 4 {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// μ and μ̂ profiles over the shells 1..=hmax that hold a candidate.
pub fn mu_profile(
    np: &NormalizedPair,
    hmax: usize,
    mode: MuMode,
    limit: u128,
) -> Result<(ExponentProfile, ExponentProfile)> {
    let cands = match mode {
        MuMode::Brute => brute_orbit(np, hmax, limit)?,
        MuMode::Constructed => constructed_candidates(np, hmax)?,
    };
    let mut shells: Vec<Option<NormDeg>> = vec![None; hmax + 1];
    for c in &cands {
        let slot = &mut shells[c.hdeg as usize];
        if slot.is_none_or(|e| c.errdeg < e) {
            *slot = Some(c.errdeg);
        }
    }
    let mut best: Option<NormDeg> = shells[0];
    let mut points = Vec::new();
    for (h, e) in shells.iter().enumerate().skip(1) {
        if let Some(e) = *e {
            best = Some(best.map_or(e, |b| b.min(e)));
            points.push((h as i64, best.expect("just set")));
        }
    }
    let mu = ExponentProfile::from_points(ExponentKind::Mu, points);
    let hat = mu.uniform_of(ExponentKind::MuHat);
    Ok((mu, hat))
}

/// A predicted exponent value or lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    Equals(ExponentValue),
    AtLeast(ExponentValue),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetClass {
    Zero,
    RationalSlope,
    IrrationalSlope,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictionRecord {
    pub class: TargetClass,
    pub omega_xi: ExponentValue,
    pub omega_y: Option<ExponentValue>,
    pub mu: Prediction,
    pub mu_hat: Prediction,
}

fn recip(w: ExponentValue) -> ExponentValue {
    match w {
        ExponentValue::Finite(r) if *r.numer() == 0 => ExponentValue::Infinite,
        ExponentValue::Finite(r) => ExponentValue::Finite(r.recip()),
        ExponentValue::Infinite => ExponentValue::int(0),
    }
}

/// The theorem's values for μ(x, y), μ̂(x, y) given ω(ξ) and, for an
/// irrational slope, ω(y). Infinite inputs are handled by taking limits.
pub fn predicted_exponents(np: &NormalizedPair, omega_xi: ExponentValue, omega_y: Option<ExponentValue>) -> PredictionRecord {
    let class = match np.target {
        Target::Zero => TargetClass::Zero,
        Target::Rational { .. } => TargetClass::RationalSlope,
        Target::Irrational { .. } => TargetClass::IrrationalSlope,
    };
    predict(class, omega_xi, omega_y)
}

pub fn predict(class: TargetClass, omega_xi: ExponentValue, omega_y: Option<ExponentValue>) -> PredictionRecord {
    use ExponentValue::{Finite, Infinite};
    let one = Ratio::from_integer(1);
    let (mu, mu_hat) = match class {
        TargetClass::Zero => (Prediction::Equals(ExponentValue::int(1)), Prediction::Equals(recip(omega_xi))),
        TargetClass::RationalSlope => match omega_xi {
            Finite(w) => (Prediction::Equals(Finite(w / (w + one))), Prediction::Equals(Finite(one / (w + one)))),
            Infinite => (Prediction::Equals(ExponentValue::int(1)), Prediction::Equals(ExponentValue::int(0))),
        },
        TargetClass::IrrationalSlope => {
            // (ω(y) + 1) / (2(2ω(y) + 1)) decreases to 1/4; a missing ω(y) takes the limit
            let c = match omega_y {
                Some(Finite(wy)) => (wy + one) / ((wy * 2 + one) * 2),
                _ => Ratio::new(1, 4),
            };
            let hat = match omega_xi {
                Finite(w) if *w.numer() != 0 => Finite(c / w),
                Finite(_) => Infinite,
                Infinite => ExponentValue::int(0),
            };
            (Prediction::AtLeast(Finite(Ratio::new(1, 3))), Prediction::AtLeast(hat))
        }
    };
    PredictionRecord { class, omega_xi, omega_y, mu, mu_hat }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::cf_eval_periodic;
    use crate::field::FieldSpec;
    use crate::laurent::{random_series, Vec2Laurent};
    use crate::orbit::{normalize_pair, TargetInput, DEFAULT_ORBIT_LIMIT};
    use crate::poly::Poly;

    fn all_t(q: u32) -> Laurent {
        let f = FieldSpec::prime(q).unwrap();
        cf_eval_periodic(&Poly::zero(&f), &[], &[Poly::t(&f)], 64).unwrap()
    }

    fn r(n: i64, d: i64) -> ExponentValue {
        ExponentValue::Finite(Ratio::new(n, d))
    }

    #[test]
    fn omega_of_degree_one_quotients() {
        let xi = all_t(2);
        let (w, hat) = omega_profile_matrix(&xi, &Laurent::zero(xi.field()), 24).unwrap();
        for (i, &h) in w.heights.iter().enumerate() {
            assert_eq!(w.best_err[i], -(h + 1));
            assert_eq!(w.ratios[i], r(h + 1, h));
        }
        assert_eq!(w.estimate(), Some(r(13, 12)));
        assert_eq!(hat.estimate(), Some(r(25, 24)));
        assert!(w.best_err.windows(2).all(|p| p[1] <= p[0]));
        assert_eq!(w.rows()[0], ProfileRow { h: 1, best_err: NormDeg::finite(-2), ratio_num: 2, ratio_den: 1, kind: ExponentKind::Omega });
    }

    #[test]
    fn omega_hat_of_random_series_near_one() {
        for seed in 0..5 {
            let f = FieldSpec::prime(3).unwrap();
            let xi = random_series(&f, seed, 96, -1);
            let (_, hat) = omega_profile_matrix(&xi, &Laurent::zero(&f), 20).unwrap();
            let e = hat.estimate().unwrap();
            assert!(e > ExponentValue::int(1) && e <= r(3, 2), "{e}");
        }
    }

    #[test]
    fn mu_profiles() {
        let xi = all_t(2);
        let f = xi.field().clone();
        let x = Vec2Laurent::new(xi.clone(), Laurent::one(&f)).unwrap();
        let np = normalize_pair(&x, TargetInput::Zero).unwrap();
        let (mu, _) = mu_profile(&np, 12, MuMode::Constructed, DEFAULT_ORBIT_LIMIT).unwrap();
        assert_eq!(mu.heights, (1..=12).collect::<Vec<_>>());
        assert!(mu.ratios.iter().all(|&v| v == ExponentValue::int(1)));
        let (brute, _) = mu_profile(&np, 5, MuMode::Brute, DEFAULT_ORBIT_LIMIT).unwrap();
        for (i, &h) in brute.heights.iter().enumerate() {
            assert!(brute.best_err[i] <= mu.best_err[(h - 1) as usize]);
        }

        let target = TargetInput::RationalSlope { a: Poly::one(&f), b: Poly::t(&f) + Poly::one(&f), y2: Laurent::one(&f) };
        let np = normalize_pair(&x, target).unwrap();
        let (mu, _) = mu_profile(&np, 24, MuMode::Constructed, DEFAULT_ORBIT_LIMIT).unwrap();
        assert!(!mu.is_empty());
        let est = mu.estimate().unwrap();
        assert!(est.within(Ratio::new(1, 2), Ratio::new(3, 20)), "{est}");
    }

    #[test]
    fn predictions() {
        let one = ExponentValue::int(1);
        let p = predict(TargetClass::Zero, one, None);
        assert_eq!((p.mu, p.mu_hat), (Prediction::Equals(one), Prediction::Equals(one)));
        let p = predict(TargetClass::RationalSlope, one, None);
        assert_eq!((p.mu, p.mu_hat), (Prediction::Equals(r(1, 2)), Prediction::Equals(r(1, 2))));
        let p = predict(TargetClass::IrrationalSlope, one, Some(one));
        assert_eq!((p.mu, p.mu_hat), (Prediction::AtLeast(r(1, 3)), Prediction::AtLeast(r(1, 3))));
        let p = predict(TargetClass::IrrationalSlope, ExponentValue::int(2), Some(ExponentValue::Infinite));
        assert_eq!(p.mu_hat, Prediction::AtLeast(r(1, 8)));
        let p = predict(TargetClass::RationalSlope, ExponentValue::Infinite, None);
        assert_eq!((p.mu, p.mu_hat), (Prediction::Equals(one), Prediction::Equals(ExponentValue::int(0))));
        assert_eq!(predict(TargetClass::Zero, ExponentValue::Infinite, None).mu_hat, Prediction::Equals(ExponentValue::int(0)));
    }

    #[test]
    fn within_is_exact() {
        assert!(r(5, 11).within(Ratio::new(1, 2), Ratio::new(1, 22)));
        assert!(!r(5, 11).within(Ratio::new(1, 2), Ratio::new(1, 23)));
        assert!(!ExponentValue::Infinite.within(Ratio::new(1, 2), Ratio::new(100, 1)));
    }
}
