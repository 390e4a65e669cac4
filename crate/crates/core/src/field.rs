//! Finite fields F_q with q = p^m.
//!
//! Elements are encoded as integers `0..q`: the base-p digits of the code are
//! the coefficients (constant term first) of the element written as a
//! polynomial in the generator `g` of F_q over F_p. Prime fields are just
//! residues mod p.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order accepted for extension fields (log/exp tables).
pub const MAX_EXTENSION_ORDER: u32 = 1 << 20;

/// Shared handle to a field description.
pub type Field = Arc<FieldSpec>;

pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    /// Monic irreducible modulus over F_p, constant term first; empty when m = 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits q into (p, m) with q = p^m, if q is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = prime_factors(q)[0];
    let mut m = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        m += 1;
    }
    if r == 1 && p <= u32::MAX as u64 {
        Some((p as u32, m))
    } else {
        None
    }
}

// Dense polynomial helpers over F_p, constant term first.

fn fp_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let (mut t, mut nt) = (0i64, 1i64);
    let (mut r, mut nr) = (p as i64, a as i64);
    while nr != 0 {
        let qt = r / nr;
        (t, nt) = (nt, t - qt * nt);
        (r, nr) = (nr, r - qt * nr);
    }
    t.rem_euclid(p as i64) as u32
}

fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let db = b.len() - 1;
    let inv_lead = fp_inv(b[db], p) as u64;
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (*r.last().unwrap() as u64 * inv_lead) % p as u64;
        for (i, &bc) in b.iter().enumerate() {
            let sub = (c * bc as u64) % p as u64;
            let idx = i + shift;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p as u64) || p >= (1 << 31) {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Arc::new(FieldSpec { p, m: 1, q: p, modulus: Vec::new(), exp: Vec::new(), log: Vec::new() }))
    }

    /// F_{p^m} with the default modulus: the monic irreducible of degree m whose
    /// coefficient sequence (constant term first) is lexicographically smallest.
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        if m == 1 {
            return Self::prime(p);
        }
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let m_us = m as usize;
        let total = (p as u64).checked_pow(m).ok_or_else(|| Error::InvalidField("order too large".into()))?;
        for n in 0..total {
            // most significant base-p digit of n is the constant term
            let mut coeffs = vec![0u32; m_us + 1];
            let mut c = n;
            for i in (0..m_us).rev() {
                coeffs[i] = (c % p as u64) as u32;
                c /= p as u64;
            }
            coeffs[m_us] = 1;
            if coeffs[0] != 0 && fp_irreducible(&coeffs, p) {
                return Self::with_modulus(p, coeffs);
            }
        }
        Err(Error::InvalidField("no irreducible modulus found".into()))
    }

    /// F_{p^m} defined by an explicit monic irreducible modulus (constant term first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let mut modulus = modulus;
        fp_trim(&mut modulus);
        if modulus.len() < 2 || modulus.iter().any(|&c| c >= p) || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic of positive degree over F_p".into()));
        }
        let m = (modulus.len() - 1) as u32;
        if m == 1 {
            return Self::prime(p);
        }
        if !fp_irreducible(&modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        let q64 = (p as u64).pow(m);
        if q64 > MAX_EXTENSION_ORDER as u64 {
            return Err(Error::InvalidField(format!("extension order {q64} exceeds {MAX_EXTENSION_ORDER}")));
        }
        let q = q64 as u32;
        let mut spec = FieldSpec { p, m, q, modulus, exp: Vec::new(), log: Vec::new() };
        spec.build_tables();
        Ok(Arc::new(spec))
    }

    /// F_q from its order; extension fields use the default modulus.
    pub fn from_order(q: u64) -> Result<Field> {
        let (p, m) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(p, m)
    }

    fn decode(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut c = a;
        for _ in 0..self.m {
            out.push(c % self.p);
            c /= self.p;
        }
        out
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.decode(a), self.decode(b));
        let p = self.p as u64;
        let mut prod = vec![0u32; da.len() + db.len()];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        let mut r = fp_rem(&prod, &self.modulus, self.p);
        r.resize(self.m as usize, 0);
        self.encode(&r)
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let gen = (2..self.q)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, order / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut cur = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur;
            log[cur as usize] = i as u32;
            cur = self.mul_slow(cur, gen);
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order q = p^m.
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    /// Modulus coefficients (constant term first); empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Base-p digits of an element, coefficient of g^0 first.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        self.decode(a)
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        let mut d = digits.to_vec();
        d.resize(self.m as usize, 0);
        self.encode(&d)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            let s = a as u64 + b as u64;
            return (s % self.p as u64) as u32;
        }
        if self.p == 2 {
            return a ^ b;
        }
        let (mut x, mut y, mut out, mut place) = (a, b, 0u32, 1u32);
        for _ in 0..self.m {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.m == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a, 0u32, 1u32);
        for _ in 0..self.m {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q as usize - 1;
        let e = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[e % n]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.m == 1 {
            return Some(fp_inv(a, self.p));
        }
        let n = self.q as usize - 1;
        Some(self.exp[(n - self.log[a as usize] as usize) % n])
    }

    /// The element -1.
    pub fn minus_one(&self) -> u32 {
        self.neg(1)
    }

    /// (-1)^k as a field element.
    pub fn sign(&self, k: i64) -> u32 {
        if k.rem_euclid(2) == 0 {
            1
        } else {
            self.minus_one()
        }
    }
}

/// Operation selector for [`field_arithmetic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

/// An element of F_q carrying its field.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && same_field(&self.field, &other.field)
    }
}

impl Eq for FieldElement {}

pub(crate) fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FieldElement {
    pub fn new(field: &Field, value: u32) -> Result<Self> {
        if value >= field.q() {
            return Err(Error::pre(format!("element code {value} out of range for q = {}", field.q())));
        }
        Ok(FieldElement { field: field.clone(), value })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

/// Exact F_q arithmetic on two elements; `b` is ignored for unary operations.
pub fn field_arithmetic(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
    if !same_field(&a.field, &b.field) {
        return Err(Error::SpecMismatch);
    }
    let f = &a.field;
    let value = match op {
        FieldOp::Add => f.add(a.value, b.value),
        FieldOp::Sub => f.sub(a.value, b.value),
        FieldOp::Mul => f.mul(a.value, b.value),
        FieldOp::Neg => f.neg(a.value),
        FieldOp::Inv => f.inv(a.value).ok_or(Error::DivisionByZero)?,
    };
    Ok(FieldElement { field: f.clone(), value })
}
