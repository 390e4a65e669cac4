//! Polynomials over F_q in the variable T.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{same_field, Field};
use crate::norm::NormDeg;

/// Element of F_q[T]. Coefficients are stored constant term first and the
/// leading coefficient is nonzero; zero is the empty sequence.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u32>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && same_field(&self.field, &other.field)
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl Poly {
    pub fn from_coeffs(field: &Field, mut coeffs: Vec<u32>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < field.q()));
        trim(&mut coeffs);
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &Field, c: u32) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// c * T^e.
    pub fn monomial(field: &Field, c: u32, e: usize) -> Self {
        let mut v = vec![0; e + 1];
        v[e] = c;
        Self::from_coeffs(field, v)
    }

    /// The variable T.
    pub fn t(field: &Field) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree as an index; `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// log_q |P|.
    pub fn norm_deg(&self) -> NormDeg {
        match self.deg() {
            Some(d) => NormDeg::finite(d as i64),
            None => NormDeg::NEG_INF,
        }
    }

    /// Degree as i64 with -1 standing in for zero, for index arithmetic.
    pub fn deg_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn scale(&self, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        Poly { field: f.clone(), coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lead()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Multiplication by T^e.
    pub fn shift(&self, e: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; e];
        v.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs: v }
    }

    fn check(&self, other: &Poly) {
        assert!(same_field(&self.field, &other.field), "polynomials over different fields");
    }

    /// Quotient and remainder with `self = quot * b + rem`, `deg rem < deg b`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        if !same_field(&self.field, &b.field) {
            return Err(Error::SpecMismatch);
        }
        let db = b.deg().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        let inv_lead = f.inv(b.lead()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - db];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + db], inv_lead);
            quot[i] = c;
            if c != 0 {
                for (j, &bc) in b.coeffs.iter().enumerate() {
                    rem[i + j] = f.sub(rem[i + j], f.mul(c, bc));
                }
            }
        }
        rem.truncate(db);
        Ok((Poly::from_coeffs(f, quot), Poly::from_coeffs(f, rem)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(b)?.1)
    }

    /// Extended Euclid: returns `(g, u, v)` with `g = u*a + v*b` monic.
    ///
    /// When `b` does not divide `a`, `deg u < deg b - deg g`.
    pub fn xgcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
        a.check(b);
        if a.is_zero() && b.is_zero() {
            return Err(Error::pre("xgcd(0, 0) is undefined"));
        }
        let f = a.field.clone();
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(&f), Poly::zero(&f));
        let (mut t0, mut t1) = (Poly::zero(&f), Poly::one(&f));
        while !r1.is_zero() {
            let (qt, r) = r0.divmod(&r1)?;
            let s = &s0 - &(&qt * &s1);
            let t = &t0 - &(&qt * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = f.inv(r0.lead()).expect("nonzero gcd");
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() && b.is_zero() {
            return Poly::zero(&a.field);
        }
        Poly::xgcd(a, b).expect("inputs not both zero").0
    }

    /// Uniform random polynomial of exact degree `deg` (nonzero leading coefficient).
    pub fn random<R: Rng + ?Sized>(field: &Field, rng: &mut R, deg: usize) -> Poly {
        let q = field.q();
        let mut v: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..q)).collect();
        v.push(rng.gen_range(1..q));
        Poly::from_coeffs(field, v)
    }

    /// Integer code: coefficients as base-q digits, constant term least significant.
    pub fn code(&self) -> u64 {
        let q = self.field.q() as u64;
        self.coeffs.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
    }

    pub fn from_code(field: &Field, mut code: u64) -> Poly {
        let q = field.q() as u64;
        let mut v = Vec::new();
        while code > 0 {
            v.push((code % q) as u32);
            code /= q;
        }
        Poly::from_coeffs(field, v)
    }

    /// All polynomials of degree at most `max_deg` (zero included), in code order.
    pub fn all_up_to(field: &Field, max_deg: usize) -> impl Iterator<Item = Poly> + '_ {
        let count = (field.q() as u64).pow(max_deg as u32 + 1);
        (0..count).map(move |c| Poly::from_code(field, c))
    }

    /// Monic polynomials of exact degree `deg`.
    pub fn monic_of_degree(field: &Field, deg: usize) -> impl Iterator<Item = Poly> + '_ {
        let count = (field.q() as u64).pow(deg as u32);
        let top = (field.q() as u64).pow(deg as u32);
        (0..count).map(move |c| Poly::from_code(field, top + c))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check(rhs);
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect();
        Poly::from_coeffs(f, v)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check(rhs);
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect();
        Poly::from_coeffs(f, v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly { field: f.clone(), coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check(rhs);
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut v = vec![0u32; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(f, v)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_poly(self))
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&crate::text::format_poly(self))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_poly(self))
    }
}

/// Quotient and remainder; see [`Poly::divmod`].
pub fn poly_divmod(a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    a.divmod(b)
}

/// Extended gcd; see [`Poly::xgcd`].
pub fn poly_xgcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    Poly::xgcd(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::text::parse_poly;
    use proptest::prelude::*;

    fn p(f: &Field, s: &str) -> Poly {
        parse_poly(f, s).unwrap()
    }

    #[test]
    fn long_division_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let (qt, r) = p(&f2, "T^2+1").divmod(&p(&f2, "T")).unwrap();
        assert_eq!((qt, r), (p(&f2, "T"), p(&f2, "1")));
        let b = p(&f2, "T^3+T+1");
        assert_eq!(b.divmod(&b).unwrap(), (Poly::one(&f2), Poly::zero(&f2)));

        let f3 = FieldSpec::prime(3).unwrap();
        let a = p(&f3, "T^3+2*T");
        let b = p(&f3, "T+1");
        let (qt, r) = a.divmod(&b).unwrap();
        assert_eq!(&(&qt * &b) + &r, a);
        assert!(r.deg().is_none() || r.deg() < b.deg());
        assert_eq!(a.divmod(&Poly::zero(&f3)), Err(Error::DivisionByZero));
    }

    #[test]
    fn xgcd_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let (g, u, v) = Poly::xgcd(&p(&f2, "T"), &p(&f2, "T+1")).unwrap();
        assert_eq!((g, u, v), (Poly::one(&f2), Poly::one(&f2), Poly::one(&f2)));

        let f3 = FieldSpec::prime(3).unwrap();
        let a = p(&f3, "2*T^2+1");
        let (g, u, v) = Poly::xgcd(&a, &Poly::zero(&f3)).unwrap();
        assert_eq!(g, a.monic());
        assert_eq!(&u * &a, g);
        assert!(v.is_zero());

        let a = p(&f2, "T^2+T");
        let b = p(&f2, "T^2+1");
        let (g, u, v) = Poly::xgcd(&a, &b).unwrap();
        assert_eq!(g, p(&f2, "T+1"));
        assert_eq!(&(&u * &a) + &(&v * &b), g);
    }

    #[test]
    fn ultrametric_exhaustive_q2() {
        let f = FieldSpec::prime(2).unwrap();
        let all: Vec<Poly> = Poly::all_up_to(&f, 6).collect();
        for a in all.iter().step_by(3) {
            for b in &all {
                let (da, db) = (a.norm_deg(), b.norm_deg());
                let s = (a + b).norm_deg();
                assert!(s <= da.max(db));
                if da != db {
                    assert_eq!(s, da.max(db));
                }
                assert_eq!((a * b).norm_deg(), da + db);
            }
        }
    }

    fn arb_poly(q: u32, max_len: usize) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0..q, 0..max_len)
    }

    proptest! {
        #[test]
        fn divmod_recomposes(a in arb_poly(5, 12), b in arb_poly(5, 8)) {
            let f = FieldSpec::prime(5).unwrap();
            let a = Poly::from_coeffs(&f, a);
            let b = Poly::from_coeffs(&f, b);
            prop_assume!(!b.is_zero());
            let (qt, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(&(&qt * &b) + &r, a);
            prop_assert!(r.norm_deg() < b.norm_deg());
        }

        #[test]
        fn xgcd_bezout(a in arb_poly(3, 10), b in arb_poly(3, 10)) {
            let f = FieldSpec::new(3, 2).unwrap();
            let a = Poly::from_coeffs(&f, a);
            let b = Poly::from_coeffs(&f, b);
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let (g, u, v) = Poly::xgcd(&a, &b).unwrap();
            prop_assert!(g.is_monic());
            prop_assert_eq!(&(&u * &a) + &(&v * &b), g.clone());
            prop_assert!(a.rem(&g).unwrap().is_zero());
            prop_assert!(b.rem(&g).unwrap().is_zero());
            if !b.is_zero() && !a.rem(&b).unwrap().is_zero() {
                prop_assert!(u.deg_i64() < b.deg_i64() - g.deg_i64());
            }
        }
    }
}
