//! Truncated Laurent series in T^{-1} with explicit precision.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{same_field, Field};
use crate::norm::NormDeg;
use crate::poly::Poly;

/// How far an exact series is extended while looking for a nonzero coefficient.
const LAZY_SEARCH_LIMIT: i64 = 1 << 12;

type Generator = dyn Fn(i64) -> Laurent + Send + Sync;

/// Closed form behind an exact series.
pub enum Source {
    /// `num / den` in lowest terms, `den` monic.
    Rational { num: Poly, den: Poly },
    /// Produces the series to any requested precision.
    Lazy(Arc<Generator>),
}

/// A series `sum c_e T^e`. Every exponent `>= -prec` is exact; the listed
/// coefficients run downward from `top`, the first nonzero, and trailing
/// zeros are dropped. An empty list means zero to precision.
#[derive(Clone)]
pub struct Laurent {
    field: Field,
    top: i64,
    coeffs: Vec<u32>,
    prec: i64,
    source: Option<Arc<Source>>,
}

/// Operation selector for [`laurent_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

fn reduce(num: &Poly, den: &Poly) -> (Poly, Poly) {
    if num.is_zero() {
        return (num.clone(), Poly::one(den.field()));
    }
    let g = Poly::gcd(num, den);
    let num = num.divmod(&g).expect("gcd is nonzero").0;
    let den = den.divmod(&g).expect("gcd is nonzero").0;
    let inv = den.field().inv(den.lead()).expect("nonzero");
    (num.scale(inv), den.scale(inv))
}

/// Coefficients of num/den from its leading exponent down to `-prec`.
fn rational_series(num: &Poly, den: &Poly, prec: i64) -> (i64, Vec<u32>) {
    if num.is_zero() {
        return (0, Vec::new());
    }
    let top = num.deg_i64() - den.deg_i64();
    if top < -prec {
        return (top, Vec::new());
    }
    let shift = prec.max(0) as usize;
    let (quot, _) = num.shift(shift).divmod(den).expect("nonzero denominator");
    // quot holds exponents top..-shift at indices top+shift..0
    let lo = -prec;
    let coeffs = (lo..=top).rev().map(|e| quot.coeff((e + shift as i64) as usize)).collect();
    (top, coeffs)
}

impl Laurent {
    fn raw(field: &Field, top: i64, mut coeffs: Vec<u32>, prec: i64, source: Option<Arc<Source>>) -> Self {
        let lead_zeros = coeffs.iter().take_while(|&&c| c == 0).count();
        coeffs.drain(..lead_zeros);
        let top = top - lead_zeros as i64;
        let keep = (top + prec + 1).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let top = if coeffs.is_empty() { 0 } else { top };
        Laurent { field: field.clone(), top, coeffs, prec, source }
    }

    /// Non-exact series with coefficients listed from exponent `top` downward.
    pub fn from_coeffs(field: &Field, top: i64, coeffs: Vec<u32>, prec: i64) -> Self {
        Self::raw(field, top, coeffs, prec, None)
    }

    /// Non-exact series from `(exponent, coefficient)` pairs.
    pub fn from_terms(field: &Field, terms: &[(i64, u32)], prec: i64) -> Self {
        let Some(top) = terms.iter().map(|t| t.0).max() else {
            return Self::raw(field, 0, Vec::new(), prec, None);
        };
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(top);
        let mut v = vec![0u32; (top - lo) as usize + 1];
        for &(e, c) in terms {
            v[(top - e) as usize] = field.add(v[(top - e) as usize], c);
        }
        Self::raw(field, top, v, prec, None)
    }

    /// Exact series `num / den`, materialized to `prec`.
    pub fn from_rational(num: &Poly, den: &Poly, prec: i64) -> Result<Self> {
        if !same_field(num.field(), den.field()) {
            return Err(Error::SpecMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = reduce(num, den);
        Ok(Self::rational_reduced(num, den, prec))
    }

    fn rational_reduced(num: Poly, den: Poly, prec: i64) -> Self {
        let prec = if num.is_zero() { prec } else { prec.max(den.deg_i64() - num.deg_i64()) };
        let (top, coeffs) = rational_series(&num, &den, prec);
        let field = num.field().clone();
        Self::raw(&field, top, coeffs, prec, Some(Arc::new(Source::Rational { num, den })))
    }

    pub fn from_poly(p: &Poly) -> Self {
        Self::rational_reduced(p.clone(), Poly::one(p.field()), 0)
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_poly(&Poly::zero(field))
    }

    pub fn one(field: &Field) -> Self {
        Self::from_poly(&Poly::one(field))
    }

    /// Exact `c * T^e`.
    pub fn monomial(field: &Field, c: u32, e: i64) -> Self {
        if e >= 0 {
            Self::from_poly(&Poly::monomial(field, c, e as usize))
        } else {
            Self::rational_reduced(Poly::constant(field, c), Poly::monomial(field, 1, (-e) as usize), -e)
        }
    }

    /// Exact series defined by a generator; `generate(p)` must be correct to precision `p`.
    pub fn lazy<F>(field: &Field, prec: i64, generate: F) -> Self
    where
        F: Fn(i64) -> Laurent + Send + Sync + 'static,
    {
        let g: Arc<Generator> = Arc::new(generate);
        let mut x = g(prec).truncate(prec);
        x.field = field.clone();
        x.source = Some(Arc::new(Source::Lazy(g)));
        x
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.source.is_some()
    }

    /// `(num, den)` when the series is a known rational function.
    pub fn rational(&self) -> Option<(&Poly, &Poly)> {
        match self.source.as_deref() {
            Some(Source::Rational { num, den }) => Some((num, den)),
            _ => None,
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs, descending.
    pub fn terms(&self) -> Vec<(i64, u32)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (self.top - i as i64, c))
            .collect()
    }

    /// Coefficient of `T^e`, or `None` below the precision.
    pub fn coeff(&self, e: i64) -> Option<u32> {
        if e < -self.prec {
            return None;
        }
        let i = self.top - e;
        if self.coeffs.is_empty() || i < 0 {
            return Some(0);
        }
        Some(self.coeffs.get(i as usize).copied().unwrap_or(0))
    }

    /// True when no known coefficient is nonzero.
    pub fn is_zero_to_prec(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Keeps only exponents `>= -p` (never raises the precision).
    pub fn truncate(&self, p: i64) -> Self {
        if p >= self.prec {
            return self.clone();
        }
        Self::raw(&self.field, self.top, self.coeffs.clone(), p, self.source.clone())
    }

    /// The same series with precision `p`. Exact series are recomputed; others
    /// are only truncated.
    pub fn with_prec(&self, p: i64) -> Self {
        match self.source.as_deref() {
            None => self.truncate(p),
            Some(_) if p <= self.prec => self.truncate(p),
            Some(Source::Rational { num, den }) => {
                let (top, coeffs) = rational_series(num, den, p);
                Self::raw(&self.field, top, coeffs, p, self.source.clone())
            }
            Some(Source::Lazy(g)) => {
                let mut x = g(p).truncate(p);
                assert!(x.prec >= p, "series generator fell short of the requested precision");
                x.source = self.source.clone();
                x
            }
        }
    }

    /// Drops the closed form, keeping the materialized coefficients.
    pub fn forget_exact(&self) -> Self {
        Self::raw(&self.field, self.top, self.coeffs.clone(), self.prec, None)
    }

    /// log_q |x|.
    pub fn norm_deg(&self) -> Result<NormDeg> {
        if !self.coeffs.is_empty() {
            return Ok(NormDeg::finite(self.top));
        }
        match self.source.as_deref() {
            None => Err(Error::UndeterminedToPrecision),
            Some(Source::Rational { num, den }) => Ok(if num.is_zero() {
                NormDeg::NEG_INF
            } else {
                NormDeg::finite(num.deg_i64() - den.deg_i64())
            }),
            Some(Source::Lazy(_)) => {
                let mut p = self.prec.max(16);
                while p <= self.prec.max(0) + LAZY_SEARCH_LIMIT {
                    p *= 2;
                    let x = self.with_prec(p);
                    if !x.coeffs.is_empty() {
                        return Ok(NormDeg::finite(x.top));
                    }
                }
                Err(Error::UndeterminedToPrecision)
            }
        }
    }

    /// A sound upper bound for log_q |x| from the known coefficients.
    pub fn deg_upper(&self) -> NormDeg {
        if !self.coeffs.is_empty() {
            return NormDeg::finite(self.top);
        }
        match self.rational() {
            Some((num, _)) if num.is_zero() => NormDeg::NEG_INF,
            Some((num, den)) => NormDeg::finite(num.deg_i64() - den.deg_i64()),
            None => NormDeg::finite(-self.prec - 1),
        }
    }

    fn deg_bound(&self) -> i64 {
        if !self.coeffs.is_empty() {
            self.top
        } else {
            -self.prec - 1
        }
    }

    fn lowest(&self) -> i64 {
        self.top - self.coeffs.len() as i64 + 1
    }

    fn add_raw(a: &Laurent, b: &Laurent, negate: bool) -> Laurent {
        let p = a.prec.min(b.prec);
        let f = &a.field;
        let top = match (a.coeffs.is_empty(), b.coeffs.is_empty()) {
            (true, true) => return Self::raw(f, 0, Vec::new(), p, None),
            (false, true) => a.top,
            (true, false) => b.top,
            (false, false) => a.top.max(b.top),
        };
        if top < -p {
            return Self::raw(f, 0, Vec::new(), p, None);
        }
        let mut v = vec![0u32; (top + p + 1) as usize];
        for (i, &c) in a.coeffs.iter().enumerate() {
            let e = a.top - i as i64;
            if e >= -p {
                v[(top - e) as usize] = c;
            }
        }
        for (i, &c) in b.coeffs.iter().enumerate() {
            let e = b.top - i as i64;
            if e >= -p {
                let k = (top - e) as usize;
                v[k] = if negate { f.sub(v[k], c) } else { f.add(v[k], c) };
            }
        }
        Self::raw(f, top, v, p, None)
    }

    fn mul_raw(a: &Laurent, b: &Laurent) -> Laurent {
        let f = &a.field;
        let p = (a.prec - b.deg_bound()).min(b.prec - a.deg_bound());
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return Self::raw(f, 0, Vec::new(), p, None);
        }
        let top = a.top + b.top;
        let lo = (a.lowest() + b.lowest()).max(-p);
        if top < lo {
            return Self::raw(f, 0, Vec::new(), p, None);
        }
        let mut v = vec![0u32; (top - lo + 1) as usize];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let ea = a.top - i as i64;
            for (j, &y) in b.coeffs.iter().enumerate() {
                let e = ea + b.top - j as i64;
                if e < lo {
                    break;
                }
                if y != 0 {
                    let k = (top - e) as usize;
                    v[k] = f.add(v[k], f.mul(x, y));
                }
            }
        }
        Self::raw(f, top, v, p, None)
    }

    fn inv_raw(a: &Laurent) -> Result<Laurent> {
        if a.coeffs.is_empty() {
            return Err(Error::UndeterminedToPrecision);
        }
        let f = &a.field;
        let d = a.top;
        let p = a.prec + 2 * d;
        let n = (a.prec + d + 1).max(0) as usize;
        let c0inv = f.inv(a.coeffs[0]).expect("leading coefficient is nonzero");
        let mut b = vec![0u32; n];
        if n > 0 {
            b[0] = c0inv;
        }
        for k in 1..n {
            let mut s = 0;
            for i in 1..=k.min(a.coeffs.len() - 1) {
                s = f.add(s, f.mul(a.coeffs[i], b[k - i]));
            }
            b[k] = f.neg(f.mul(c0inv, s));
        }
        Ok(Self::raw(f, -d, b, p, None))
    }

    fn check(&self, other: &Laurent) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    fn sum(&self, other: &Laurent, negate: bool) -> Result<Laurent> {
        self.check(other)?;
        let f = self.field.clone();
        match (self.source.as_deref(), other.source.as_deref()) {
            (Some(Source::Rational { num: na, den: da }), Some(Source::Rational { num: nb, den: db })) => {
                let nb = if negate { -nb } else { nb.clone() };
                let (num, den) = reduce(&(&(na * db) + &(&nb * da)), &(da * db));
                Ok(Self::rational_reduced(num, den, self.prec.max(other.prec)))
            }
            (Some(_), Some(_)) => {
                let (a, b) = (self.clone(), other.clone());
                Ok(Self::lazy(&f, self.prec.max(other.prec), move |p| {
                    Self::add_raw(&a.with_prec(p), &b.with_prec(p), negate)
                }))
            }
            (Some(_), None) => Ok(Self::add_raw(&self.with_prec(other.prec), other, negate)),
            (None, Some(_)) => Ok(Self::add_raw(self, &other.with_prec(self.prec), negate)),
            (None, None) => Ok(Self::add_raw(self, other, negate)),
        }
    }

    fn product(&self, other: &Laurent) -> Result<Laurent> {
        self.check(other)?;
        let f = self.field.clone();
        match (self.source.as_deref(), other.source.as_deref()) {
            (Some(Source::Rational { num: na, den: da }), Some(Source::Rational { num: nb, den: db })) => {
                let (num, den) = reduce(&(na * nb), &(da * db));
                Ok(Self::rational_reduced(num, den, self.prec.max(other.prec)))
            }
            (Some(_), Some(_)) => {
                let (a, b) = (self.clone(), other.clone());
                Ok(Self::lazy(&f, self.prec.max(other.prec), move |p| {
                    let a1 = a.with_prec(p + b.deg_bound().max(-p));
                    let b1 = b.with_prec(p + a.deg_bound().max(-p));
                    Self::mul_raw(&a1, &b1)
                }))
            }
            (Some(_), None) => Ok(Self::exact_times(self, other)),
            (None, Some(_)) => Ok(Self::exact_times(other, self)),
            (None, None) => Ok(Self::mul_raw(self, other)),
        }
    }

    fn exact_times(exact: &Laurent, b: &Laurent) -> Laurent {
        let da = match exact.norm_deg() {
            Ok(d) if d.is_neg_inf() => return Self::zero(&exact.field),
            Ok(d) => d.unwrap(),
            Err(_) => exact.deg_bound(),
        };
        let p = b.prec - da;
        let a1 = exact.with_prec(p + b.deg_bound());
        Self::mul_raw(&a1, b).truncate(p)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Laurent> {
        match self.source.as_deref() {
            Some(Source::Rational { num, den }) => {
                if num.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let (n, d) = reduce(den, num);
                Ok(Self::rational_reduced(n, d, self.prec))
            }
            Some(Source::Lazy(_)) => {
                let d = self.norm_deg()?;
                let Some(d) = d.value() else {
                    return Err(Error::DivisionByZero);
                };
                let a = self.clone();
                let first = Self::inv_raw(&a.with_prec(self.prec.max(-d)))?;
                Ok(Self::lazy(&self.field, first.prec, move |p| {
                    Self::inv_raw(&a.with_prec(p - 2 * d)).expect("degree already determined")
                }))
            }
            None => Self::inv_raw(self),
        }
    }

    /// Multiplication by T^e.
    pub fn shift(&self, e: i64) -> Laurent {
        self * &Self::monomial(&self.field, 1, e)
    }

    pub fn scale(&self, c: u32) -> Laurent {
        self * &Self::from_poly(&Poly::constant(&self.field, c))
    }

    pub fn mul_poly(&self, p: &Poly) -> Laurent {
        self * &Self::from_poly(p)
    }

    pub fn add_poly(&self, p: &Poly) -> Laurent {
        self + &Self::from_poly(p)
    }

    pub fn sub_poly(&self, p: &Poly) -> Laurent {
        self - &Self::from_poly(p)
    }

    /// Polynomial part [x]; needs the constant coefficient to be known.
    pub fn integral_part(&self) -> Result<Poly> {
        if let Some((num, den)) = self.rational() {
            return Ok(num.divmod(den)?.0);
        }
        let x = if self.is_exact() && self.prec < 0 { self.with_prec(0) } else { self.clone() };
        if x.prec < 0 {
            return Err(Error::UndeterminedToPrecision);
        }
        if x.coeffs.is_empty() || x.top < 0 {
            return Ok(Poly::zero(&self.field));
        }
        let v = (0..=x.top).map(|e| x.coeff(e).unwrap_or(0)).collect();
        Ok(Poly::from_coeffs(&self.field, v))
    }

    /// ⟨x⟩ = x − [x].
    pub fn fractional_part(&self) -> Result<Laurent> {
        let ip = self.integral_part()?;
        Ok(self.sub_poly(&ip))
    }

    /// log_q ‖x‖, the degree of the fractional part.
    pub fn frac_deg(&self) -> Result<NormDeg> {
        self.fractional_part()?.norm_deg()
    }

    /// Degree of the series when it is at least `floor`, `None` when every
    /// coefficient at exponents `>= floor` vanishes.
    pub fn deg_above(&self, floor: i64) -> Result<Option<i64>> {
        if !self.coeffs.is_empty() && self.top >= floor {
            return Ok(Some(self.top));
        }
        if self.prec >= -floor {
            return Ok(None);
        }
        if self.is_exact() {
            return self.with_prec(-floor).deg_above(floor);
        }
        Err(Error::UndeterminedToPrecision)
    }

    /// Whether log_q |x| <= `b`.
    pub fn deg_at_most(&self, b: i64) -> Result<bool> {
        Ok(self.deg_above(b + 1)?.is_none())
    }

    /// Like [`Laurent::deg_above`] for the fractional part.
    pub fn frac_deg_above(&self, floor: i64) -> Result<Option<i64>> {
        let x = if self.is_exact() && self.prec < -floor { self.with_prec(-floor) } else { self.clone() };
        let top = x.terms().into_iter().map(|t| t.0).find(|&e| e < 0);
        match top {
            Some(e) if e >= floor => Ok(Some(e)),
            _ if x.prec >= -floor => Ok(None),
            _ => Err(Error::UndeterminedToPrecision),
        }
    }

    /// `([x], ⟨x⟩, log_q ‖x‖)`.
    pub fn split(&self) -> Result<(Poly, Laurent, NormDeg)> {
        let ip = self.integral_part()?;
        let fp = self.sub_poly(&ip);
        let d = fp.norm_deg()?;
        Ok((ip, fp, d))
    }
}

/// Sum, difference or product of two series.
pub fn laurent_arith(a: &Laurent, b: &Laurent, op: SeriesOp) -> Result<Laurent> {
    match op {
        SeriesOp::Add => a.sum(b, false),
        SeriesOp::Sub => a.sum(b, true),
        SeriesOp::Mul => a.product(b),
    }
}

pub fn laurent_inv(a: &Laurent) -> Result<Laurent> {
    a.inv()
}

pub fn split_integral_fractional(x: &Laurent) -> Result<(Poly, Laurent, NormDeg)> {
    x.split()
}

pub fn from_rational(p: &Poly, q: &Poly, prec: i64) -> Result<Laurent> {
    Laurent::from_rational(p, q, prec)
}

/// Series with i.i.d. uniform coefficients at exponents `lead` down to `-prec`.
pub fn random_series(field: &Field, seed: u64, prec: i64, lead: i64) -> Laurent {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_series_with(field, &mut rng, prec, lead)
}

pub fn random_series_with<R: Rng + ?Sized>(field: &Field, rng: &mut R, prec: i64, lead: i64) -> Laurent {
    let n = (lead + prec + 1).max(0) as usize;
    let q = field.q();
    let v = (0..n).map(|_| rng.gen_range(0..q)).collect();
    Laurent::from_coeffs(field, lead, v, prec)
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        self.sum(rhs, false).expect("series over different fields")
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self.sum(rhs, true).expect("series over different fields")
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        self.product(rhs).expect("series over different fields")
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(self.field.minus_one())
    }
}

impl PartialEq for Laurent {
    /// Same known coefficients and precision.
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field)
            && self.prec == other.prec
            && self.top == other.top
            && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_laurent(self))?;
        if self.is_exact() {
            f.write_str(" (exact)")?;
        }
        Ok(())
    }
}

impl serde::Serialize for Laurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&crate::text::format_laurent(self))
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_laurent(self))
    }
}

/// A vector of two series; its norm is the larger component norm.
#[derive(Clone, Debug)]
pub struct Vec2Laurent {
    pub c1: Laurent,
    pub c2: Laurent,
}

impl Vec2Laurent {
    pub fn new(c1: Laurent, c2: Laurent) -> Result<Self> {
        c1.check(&c2)?;
        Ok(Vec2Laurent { c1, c2 })
    }

    pub fn norm_deg(&self) -> Result<NormDeg> {
        Ok(self.c1.norm_deg()?.max(self.c2.norm_deg()?))
    }

    pub fn deg_upper(&self) -> NormDeg {
        self.c1.deg_upper().max(self.c2.deg_upper())
    }

    pub fn field(&self) -> &Field {
        self.c1.field()
    }
}
