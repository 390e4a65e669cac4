//! Continued fractions of Laurent series and their convergents.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::Laurent;
use crate::norm::NormDeg;
use crate::poly::Poly;

/// Largest working precision used when expanding an exact irrational series.
const MAX_WORKING_PREC: i64 = 1 << 15;

/// `a0 + 1/(A1 + 1/(A2 + ...))` together with its convergents.
#[derive(Clone, Debug)]
pub struct CFExpansion {
    pub a0: Poly,
    /// A_1..A_n, each of positive degree.
    pub quotients: Vec<Poly>,
    conv_p: Vec<Poly>,
    conv_q: Vec<Poly>,
    /// Number of quotients certified by the source precision.
    pub trusted: usize,
    /// The source is rational and the expansion is complete.
    pub terminated: bool,
}

impl CFExpansion {
    /// Builds the convergents for the given quotients.
    pub fn new(a0: Poly, quotients: Vec<Poly>, terminated: bool) -> Self {
        let f = a0.field().clone();
        let mut conv_p = vec![Poly::zero(&f), Poly::one(&f), a0.clone()];
        let mut conv_q = vec![Poly::one(&f), Poly::zero(&f), Poly::one(&f)];
        for a in &quotients {
            let n = conv_p.len();
            conv_p.push(&(a * &conv_p[n - 1]) + &conv_p[n - 2]);
            conv_q.push(&(a * &conv_q[n - 1]) + &conv_q[n - 2]);
        }
        let trusted = quotients.len();
        CFExpansion { a0, quotients, conv_p, conv_q, trusted, terminated }
    }

    pub fn field(&self) -> &Field {
        self.a0.field()
    }

    /// Number of partial quotients A_1..A_n.
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// A_k for k >= 1, A_0 for k = 0.
    pub fn quotient(&self, k: usize) -> &Poly {
        if k == 0 {
            &self.a0
        } else {
            &self.quotients[k - 1]
        }
    }

    /// P_k for -2 <= k <= n.
    pub fn p(&self, k: i64) -> &Poly {
        &self.conv_p[(k + 2) as usize]
    }

    /// Q_k for -2 <= k <= n.
    pub fn q(&self, k: i64) -> &Poly {
        &self.conv_q[(k + 2) as usize]
    }

    /// deg Q_k as an integer (Q_{-1} = 0 counts as -1).
    pub fn deg_q(&self, k: i64) -> i64 {
        self.q(k).deg_i64()
    }

    /// Keeps the first `n` quotients.
    pub fn prefix(&self, n: usize) -> CFExpansion {
        let n = n.min(self.len());
        let mut cf = CFExpansion::new(self.a0.clone(), self.quotients[..n].to_vec(), self.terminated && n == self.len());
        cf.trusted = self.trusted.min(n);
        cf
    }

    /// Smallest k with deg Q_k >= d, if computed.
    pub fn index_with_deg_at_least(&self, d: i64) -> Option<usize> {
        (0..=self.len()).find(|&k| self.deg_q(k as i64) >= d)
    }

    pub fn to_text(&self) -> String {
        crate::text::format_cf(&self.a0, &self.quotients)
    }
}

fn euclid(num: &Poly, den: &Poly, max_terms: usize) -> (Poly, Vec<Poly>, bool) {
    let (a0, mut r1) = num.divmod(den).expect("nonzero denominator");
    let mut r0 = den.clone();
    let mut qs = Vec::new();
    while !r1.is_zero() && qs.len() < max_terms {
        let (a, r) = r0.divmod(&r1).expect("nonzero remainder");
        qs.push(a);
        r0 = std::mem::replace(&mut r1, r);
    }
    (a0, qs, r1.is_zero())
}

/// Expansion of the truncation of `x` to its precision, keeping the certified quotients.
fn expand_truncated(x: &Laurent, max_terms: usize) -> CFExpansion {
    let f = x.field();
    let p = x.prec();
    let mut v = vec![0u32; (x.terms().first().map_or(0, |t| t.0) + p + 1).max(1) as usize];
    for (e, c) in x.terms() {
        v[(e + p) as usize] = c;
    }
    let num = Poly::from_coeffs(f, v);
    let den = Poly::monomial(f, 1, p as usize);
    let (a0, qs, _) = euclid(&num, &den, max_terms);
    let mut cf = CFExpansion::new(a0, qs, false);
    // A_k is certified once 2 deg Q_k <= prec
    let trusted = (1..=cf.len()).take_while(|&k| 2 * cf.deg_q(k as i64) <= p).count();
    cf = cf.prefix(trusted);
    cf.trusted = trusted;
    cf
}

/// Continued-fraction expansion with up to `max_terms` partial quotients.
///
/// Rational inputs are expanded by Euclid's algorithm. Exact irrational
/// inputs are re-expanded at growing precision. Other inputs yield only the
/// quotients their precision certifies.
pub fn cf_expand(x: &Laurent, max_terms: usize) -> Result<CFExpansion> {
    if let Some((num, den)) = x.rational() {
        let (a0, qs, done) = euclid(num, den, max_terms);
        return Ok(CFExpansion::new(a0, qs, done));
    }
    if x.prec() < 2 && !x.is_exact() {
        return Err(Error::pre(format!("precision {} is below 2", x.prec())));
    }
    if !x.is_exact() {
        return Ok(expand_truncated(x, max_terms));
    }
    let mut w = x.prec().max(64);
    loop {
        let cf = expand_truncated(&x.with_prec(w), max_terms);
        if cf.len() >= max_terms || w >= MAX_WORKING_PREC {
            return Ok(cf);
        }
        w *= 2;
    }
}

/// The rational `[a0; A1, ..., An]`.
pub fn cf_eval(a0: &Poly, quotients: &[Poly], prec: i64) -> Result<Laurent> {
    if quotients.iter().any(|a| a.deg().unwrap_or(0) == 0) {
        return Err(Error::pre("partial quotients must have positive degree"));
    }
    let cf = CFExpansion::new(a0.clone(), quotients.to_vec(), true);
    let n = cf.len() as i64;
    Laurent::from_rational(cf.p(n), cf.q(n), prec)
}

/// The quadratic irrational `[a0; prefix, period, period, ...]`, as an exact series.
pub fn cf_eval_periodic(a0: &Poly, prefix: &[Poly], period: &[Poly], prec: i64) -> Result<Laurent> {
    if period.is_empty() {
        return Err(Error::pre("empty period"));
    }
    if prefix.iter().chain(period).any(|a| a.deg().unwrap_or(0) == 0) {
        return Err(Error::pre("partial quotients must have positive degree"));
    }
    let (a0, prefix, period) = (a0.clone(), prefix.to_vec(), period.to_vec());
    let field = a0.field().clone();
    Ok(Laurent::lazy(&field, prec, move |p| {
        // |xi - P_n/Q_n| = q^-(deg Q_n + deg Q_{n+1})
        let mut qs = prefix.clone();
        loop {
            let cf = CFExpansion::new(a0.clone(), qs.clone(), false);
            let n = cf.len() as i64;
            if n >= 1 && cf.deg_q(n - 1) + cf.deg_q(n) > p {
                return Laurent::from_rational(cf.p(n - 1), cf.q(n - 1), p).expect("nonzero").forget_exact();
            }
            qs.extend_from_slice(&period);
        }
    }))
}

/// One row of an identity report.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityRow {
    pub k: usize,
    pub deg_q: i64,
    pub err_deg: NormDeg,
    pub expected_err_deg: i64,
    pub deg_sum: i64,
    pub det_ok: bool,
}

impl IdentityRow {
    pub fn holds(&self) -> bool {
        self.err_deg == self.expected_err_deg && self.deg_q == self.deg_sum && self.det_ok
    }
}

/// A counterexample to one of the convergent properties.
#[derive(Clone, Debug, Serialize)]
pub struct Falsification {
    pub kind: String,
    pub q: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IdentityReport {
    pub rows: Vec<IdentityRow>,
    pub falsifications: Vec<Falsification>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.falsifications.is_empty() && self.rows.iter().all(IdentityRow::holds)
    }
}

/// Checks, for every certified k, the error identity
/// deg(Q_k x - P_k) = -deg Q_{k+1}, the degree sum and the determinant identity.
pub fn cf_identity_report(cf: &CFExpansion, x: &Laurent) -> Result<IdentityReport> {
    if cf.trusted < 2 && !cf.terminated {
        return Err(Error::trust(2, cf.trusted));
    }
    let f = cf.field();
    let mut report = IdentityReport::default();
    let mut deg_sum = 0;
    for k in 0..cf.len() {
        let ki = k as i64;
        if k > 0 {
            deg_sum += cf.quotients[k - 1].deg_i64();
        }
        let expected = -cf.deg_q(ki + 1);
        let eps = x.mul_poly(cf.q(ki)).sub_poly(cf.p(ki));
        let err_deg = match eps.deg_above(expected - 1)? {
            Some(d) => NormDeg::finite(d),
            None => eps.norm_deg().unwrap_or(NormDeg::finite(expected - 1)),
        };
        let det = &(cf.q(ki) * cf.p(ki - 1)) - &(cf.p(ki) * cf.q(ki - 1));
        let det_ok = det == Poly::constant(f, f.sign(ki));
        let row = IdentityRow { k, deg_q: cf.deg_q(ki), err_deg, expected_err_deg: expected, deg_sum, det_ok };
        if !row.holds() {
            report.falsifications.push(Falsification {
                kind: "identity".into(),
                q: cf.q(ki).to_string(),
                detail: format!("{row:?}"),
            });
        }
        report.rows.push(row);
    }
    Ok(report)
}

/// Result of an exhaustive best-approximation scan.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanReport {
    pub scanned: u64,
    pub legendre_hits: u64,
    pub falsifications: Vec<Falsification>,
}

/// Exhaustive scan over nonzero Q with deg Q <= `max_deg`.
///
/// Every Q with ‖Qx‖ < 1/|Q| must be a multiple of a convergent denominator
/// with matching numerator, and no Q with deg Q_n <= deg Q < deg Q_{n+1} may
/// reach ‖Qx‖ < ‖Q_n x‖ = q^{-deg Q_{n+1}}.
pub fn best_approx_scan(cf: &CFExpansion, x: &Laurent, max_deg: usize) -> Result<ScanReport> {
    let f = cf.field().clone();
    if !cf.terminated && cf.deg_q(cf.len() as i64) <= max_deg as i64 {
        return Err(Error::trust(cf.len() + 1, cf.trusted));
    }
    let mut report = ScanReport::default();
    for qp in Poly::all_up_to(&f, max_deg).skip(1) {
        report.scanned += 1;
        let d = qp.deg_i64();
        let n = (0..=cf.len()).rev().find(|&n| cf.deg_q(n as i64) <= d).expect("Q_0 = 1");
        let qx = x.mul_poly(&qp);
        let (floor, next) = if n < cf.len() {
            let next = cf.deg_q(n as i64 + 1);
            (-next.max(d + 1), Some(next))
        } else {
            (-(d + 1), None)
        };
        let err = match qx.frac_deg_above(floor) {
            Ok(e) => e,
            Err(Error::UndeterminedToPrecision) if cf.terminated => None,
            Err(e) => return Err(e),
        };
        if let (Some(next), e) = (next, err) {
            if e.is_none_or(|e| e < -next) {
                report.falsifications.push(Falsification {
                    kind: "second-kind".into(),
                    q: qp.to_string(),
                    detail: format!("error below -{next} between convergents {n} and {}", n + 1),
                });
            }
        }
        if err.is_none_or(|e| e < -d) {
            report.legendre_hits += 1;
            let pp = qx.integral_part()?;
            let g = Poly::gcd(&pp, &qp);
            let (pr, qr) = (pp.divmod(&g)?.0, qp.divmod(&g)?.0);
            let is_conv = (0..=cf.len()).any(|k| {
                let k = k as i64;
                cf.q(k).deg_i64() == qr.deg_i64() && &(&pr * cf.q(k)) - &(cf.p(k) * &qr) == Poly::zero(&f)
            });
            if !is_conv {
                report.falsifications.push(Falsification {
                    kind: "legendre".into(),
                    q: qp.to_string(),
                    detail: format!("{}/{} is not a convergent", pr, qr),
                });
            }
        }
    }
    Ok(report)
}

/// deg Q_{k+1} / deg Q_k for k >= 1; its running maximum bounds ω from below.
pub fn omega_profile(cf: &CFExpansion) -> Result<Vec<Ratio<i64>>> {
    if cf.terminated {
        return Err(Error::RationalInput);
    }
    if cf.trusted < 2 {
        return Err(Error::trust(2, cf.trusted));
    }
    Ok((1..cf.trusted).map(|k| Ratio::new(cf.deg_q(k as i64 + 1), cf.deg_q(k as i64))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::laurent::random_series;
    use crate::text::{parse_cf, parse_poly};
    use proptest::prelude::*;

    fn f2() -> Field {
        FieldSpec::prime(2).unwrap()
    }

    fn all_t(f: &Field) -> Laurent {
        cf_eval_periodic(&Poly::zero(f), &[], &[Poly::t(f)], 32).unwrap()
    }

    #[test]
    fn expand_examples() {
        let f = f2();
        let cf = cf_expand(&Laurent::monomial(&f, 1, -1), 10).unwrap();
        assert!(cf.a0.is_zero() && cf.terminated);
        assert_eq!(cf.quotients, vec![Poly::t(&f)]);

        let t = Poly::t(&f);
        let x = Laurent::from_rational(&t, &parse_poly(&f, "T^2+1").unwrap(), 8).unwrap();
        let cf = cf_expand(&x, 10).unwrap();
        assert_eq!(cf.quotients, vec![t.clone(), t.clone()]);
        assert!(cf.terminated);
    }

    #[test]
    fn eval_examples() {
        let f = f2();
        let t = Poly::t(&f);
        let x = cf_eval(&Poly::zero(&f), std::slice::from_ref(&t), 8).unwrap();
        assert_eq!(x.terms(), vec![(-1, 1)]);
        let y = cf_eval(&Poly::zero(&f), &[t.clone(), t.clone()], 8).unwrap();
        let r = Laurent::from_rational(&t, &parse_poly(&f, "T^2+1").unwrap(), 8).unwrap();
        assert_eq!(y.rational(), r.rational());

        let xi = all_t(&f);
        let cf = cf_expand(&xi, 20).unwrap();
        assert_eq!(cf.len(), 20);
        assert!(cf.quotients.iter().all(|a| *a == t));
        let truncated = cf_expand(&xi.with_prec(32).forget_exact(), 100).unwrap();
        assert_eq!(truncated.len(), 16);
        assert!(truncated.quotients.iter().all(|a| *a == t));
    }

    #[test]
    fn convergent_error_matches_next_denominator() {
        let f = f2();
        let xi = all_t(&f);
        let cf = cf_expand(&xi, 6).unwrap();
        let e1 = xi.mul_poly(cf.q(1)).sub_poly(cf.p(1));
        assert_eq!(e1.norm_deg().unwrap(), -2);
        let report = cf_identity_report(&cf, &xi).unwrap();
        assert!(report.all_hold(), "{report:?}");
        assert_eq!(report.rows.len(), 6);
    }

    #[test]
    fn rational_report_is_complete() {
        let f = FieldSpec::prime(3).unwrap();
        let (a0, qs) = parse_cf(&f, "[T+1; 2*T^2, T, T^3+T]").unwrap();
        let x = cf_eval(&a0, &qs, 4).unwrap();
        let cf = cf_expand(&x, 100).unwrap();
        assert!(cf.terminated);
        assert_eq!(cf.quotients, qs);
        let report = cf_identity_report(&cf, &x).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.rows.len(), 3);
    }

    #[test]
    fn legendre_scan_random() {
        let f = f2();
        for seed in 0..5 {
            let xi = random_series(&f, seed, 64, -1);
            let cf = cf_expand(&xi, 64).unwrap();
            let scan = best_approx_scan(&cf, &xi, 5).unwrap();
            assert_eq!(scan.scanned, 63);
            assert!(scan.falsifications.is_empty(), "{scan:?}");
        }
    }

    #[test]
    fn omega_examples() {
        let f = f2();
        let cf = cf_expand(&all_t(&f), 8).unwrap();
        let prof = omega_profile(&cf).unwrap();
        assert_eq!(prof[0], Ratio::new(2, 1));
        assert_eq!(prof[6], Ratio::new(8, 7));

        let (a0, qs) = parse_cf(&f, "[T, T, T^4, T]").unwrap();
        let x = cf_eval_periodic(&a0, &qs, &[Poly::t(&f)], 40).unwrap();
        let prof = omega_profile(&cf_expand(&x, 5).unwrap()).unwrap();
        assert_eq!(prof[1], Ratio::new(3, 1));

        let r = cf_eval(&a0, &qs, 10).unwrap();
        assert_eq!(omega_profile(&cf_expand(&r, 10).unwrap()), Err(Error::RationalInput));
    }

    #[test]
    fn trusted_prefix_matches_deeper_expansion() {
        let f = FieldSpec::prime(3).unwrap();
        for seed in 0..20 {
            let deep = random_series(&f, seed, 128, 0);
            let shallow = deep.truncate(64);
            let a = cf_expand(&shallow, 200).unwrap();
            let b = cf_expand(&deep, 200).unwrap();
            assert!(a.trusted <= b.trusted);
            assert_eq!(a.quotients[..], b.quotients[..a.trusted]);
            assert!(2 * a.deg_q(a.trusted as i64) <= 64);
        }
    }

    proptest! {
        #[test]
        fn perturbation_below_precision_keeps_trusted_prefix(
            seed in 0u64..10_000,
            tail in prop::collection::vec(0u32..2, 1..40),
        ) {
            let f = f2();
            let p = 48;
            let x = random_series(&f, seed, p, -1);
            let mut terms = x.terms();
            for (i, &c) in tail.iter().enumerate() {
                if c != 0 {
                    terms.push((-p - 1 - i as i64, c));
                }
            }
            let y = Laurent::from_terms(&f, &terms, p + tail.len() as i64);
            let a = cf_expand(&x, 200).unwrap();
            let b = cf_expand(&y, 200).unwrap();
            prop_assert!(b.len() >= a.trusted);
            prop_assert_eq!(&a.quotients[..], &b.quotients[..a.trusted]);
        }

        #[test]
        fn eval_expand_round_trip(degs in prop::collection::vec(1usize..4, 1..8), seed in 0u64..1000) {
            use rand::SeedableRng;
            let f = FieldSpec::prime(5).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let qs: Vec<Poly> = degs.iter().map(|&d| Poly::random(&f, &mut rng, d)).collect();
            let a0 = Poly::random(&f, &mut rng, 1);
            let x = cf_eval(&a0, &qs, 10).unwrap();
            let cf = cf_expand(&x, 100).unwrap();
            prop_assert_eq!(&cf.a0, &a0);
            prop_assert_eq!(&cf.quotients, &qs);
        }
    }
}
