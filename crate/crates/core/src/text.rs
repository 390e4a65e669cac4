//! Text formats for field elements, polynomials, series and continued fractions.
//!
//! Terms are written `c*T^e` in descending order and joined by `+`. A unit
//! coefficient is omitted, `T^1` is written `T`, and extension-field
//! coefficients are polynomials in `g` (parenthesized when they have more
//! than one term). Series may end with `+O(T^e)`, meaning every exponent
//! above `e` is exact.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::Laurent;
use crate::poly::Poly;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Formats a field element: an integer for prime fields, a `g`-polynomial otherwise.
pub fn format_elem(field: &Field, c: u32) -> String {
    if field.is_prime_field() {
        return c.to_string();
    }
    let digits = field.digits(c);
    let mut parts = Vec::new();
    for (e, &d) in digits.iter().enumerate().rev() {
        if d == 0 {
            continue;
        }
        let s = match (e, d) {
            (0, _) => d.to_string(),
            (1, 1) => "g".to_string(),
            (1, _) => format!("{d}*g"),
            (_, 1) => format!("g^{e}"),
            _ => format!("{d}*g^{e}"),
        };
        parts.push(s);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

fn strip_parens(s: &str) -> &str {
    if s.starts_with('(') && s.ends_with(')') {
        let inner = &s[1..s.len() - 1];
        let mut depth = 0i32;
        for ch in inner.chars() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return s;
                    }
                }
                _ => {}
            }
        }
        if depth == 0 {
            return inner;
        }
    }
    s
}

fn parse_uint(s: &str) -> Result<u64> {
    s.parse::<u64>().map_err(|_| perr(format!("bad integer `{s}`")))
}

fn parse_exp(s: &str) -> Result<i64> {
    strip_parens(s).parse::<i64>().map_err(|_| perr(format!("bad exponent `{s}`")))
}

/// Parses a field element written as an integer below p or a `g`-polynomial.
pub fn parse_elem(field: &Field, s: &str) -> Result<u32> {
    let s = strip_parens(s.trim());
    if s.is_empty() {
        return Err(perr("empty coefficient"));
    }
    let p = field.p() as u64;
    if !s.contains('g') {
        let v = parse_uint(s)?;
        if v >= p {
            return Err(perr(format!("coefficient {v} out of range for p = {p}")));
        }
        return Ok(v as u32);
    }
    if field.is_prime_field() {
        return Err(perr("`g` is only meaningful over an extension field"));
    }
    let m = field.m() as usize;
    let mut digits = vec![0u64; m];
    for term in s.split('+') {
        let (c, e) = match term.find('g') {
            None => (parse_uint(term)?, 0usize),
            Some(i) => {
                let (cpart, rest) = term.split_at(i);
                let c = if cpart.is_empty() {
                    1
                } else {
                    parse_uint(cpart.strip_suffix('*').ok_or_else(|| perr(format!("bad term `{term}`")))?)?
                };
                let e = match &rest[1..] {
                    "" => 1,
                    r => {
                        let r = r.strip_prefix('^').ok_or_else(|| perr(format!("bad term `{term}`")))?;
                        parse_uint(r)? as usize
                    }
                };
                (c, e)
            }
        };
        if e >= m {
            return Err(perr(format!("g^{e} is not reduced for degree {m}")));
        }
        digits[e] = (digits[e] + c) % p;
    }
    let digits: Vec<u32> = digits.into_iter().map(|d| d as u32).collect();
    Ok(field.from_digits(&digits))
}

fn format_terms(field: &Field, terms: &[(i64, u32)]) -> String {
    let mut parts = Vec::with_capacity(terms.len());
    for &(e, c) in terms {
        let cs = format_elem(field, c);
        let cs = if cs.contains('+') { format!("({cs})") } else { cs };
        let tpart = match e {
            0 => String::new(),
            1 => "T".to_string(),
            _ => format!("T^{e}"),
        };
        let s = if e == 0 {
            cs
        } else if c == 1 {
            tpart
        } else {
            format!("{cs}*{tpart}")
        };
        parts.push(s);
    }
    parts.join("+")
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

struct Parsed {
    terms: Vec<(i64, u32)>,
    big_o: Option<i64>,
}

fn parse_terms(field: &Field, s: &str) -> Result<Parsed> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(perr("empty expression"));
    }
    let mut terms: Vec<(i64, u32)> = Vec::new();
    let mut big_o = None;
    for piece in split_top_level(&s, '+') {
        if piece.is_empty() {
            return Err(perr(format!("empty term in `{s}`")));
        }
        if big_o.is_some() {
            return Err(perr("terms after the O(...) marker"));
        }
        if let Some(inner) = piece.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            let e = match inner {
                "T" => 1,
                "1" => 0,
                _ => parse_exp(inner.strip_prefix("T^").ok_or_else(|| perr(format!("bad marker `{piece}`")))?)?,
            };
            big_o = Some(e);
            continue;
        }
        let mut depth = 0i32;
        let mut tpos = None;
        for (i, ch) in piece.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                'T' if depth == 0 => {
                    tpos = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let (c, e) = match tpos {
            None => (parse_elem(field, piece)?, 0),
            Some(i) => {
                let cpart = &piece[..i];
                let c = if cpart.is_empty() {
                    1
                } else {
                    let cpart = cpart.strip_suffix('*').ok_or_else(|| perr(format!("bad term `{piece}`")))?;
                    parse_elem(field, cpart)?
                };
                let e = match &piece[i + 1..] {
                    "" => 1,
                    r => parse_exp(r.strip_prefix('^').ok_or_else(|| perr(format!("bad term `{piece}`")))?)?,
                };
                (c, e)
            }
        };
        match terms.iter_mut().find(|(te, _)| *te == e) {
            Some(t) => t.1 = field.add(t.1, c),
            None => terms.push((e, c)),
        }
    }
    terms.retain(|&(_, c)| c != 0);
    terms.sort_by_key(|t| std::cmp::Reverse(t.0));
    Ok(Parsed { terms, big_o })
}

pub fn format_poly(p: &Poly) -> String {
    let terms: Vec<(i64, u32)> = p
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(e, &c)| (e as i64, c))
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        format_terms(p.field(), &terms)
    }
}

pub fn parse_poly(field: &Field, s: &str) -> Result<Poly> {
    let parsed = parse_terms(field, s)?;
    if parsed.big_o.is_some() {
        return Err(perr("precision marker in a polynomial"));
    }
    let Some(&(top, _)) = parsed.terms.first() else {
        return Ok(Poly::zero(field));
    };
    if parsed.terms.iter().any(|&(e, _)| e < 0) {
        return Err(perr("negative exponent in a polynomial"));
    }
    let mut v = vec![0u32; top as usize + 1];
    for (e, c) in parsed.terms {
        v[e as usize] = c;
    }
    Ok(Poly::from_coeffs(field, v))
}

/// Formats a series. Exact finite sums print without a marker; anything else
/// is printed to its precision followed by `+O(T^e)`.
pub fn format_laurent(x: &Laurent) -> String {
    let field = x.field();
    if let Some((num, den)) = x.rational() {
        if den.coeffs().iter().rev().skip(1).all(|&c| c == 0) {
            let shift = den.deg().unwrap_or(0) as i64;
            let terms: Vec<(i64, u32)> = num
                .coeffs()
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, &c)| c != 0)
                .map(|(e, &c)| (e as i64 - shift, c))
                .collect();
            return if terms.is_empty() { "0".to_string() } else { format_terms(field, &terms) };
        }
    }
    let terms = x.terms();
    let marker = format!("O(T^{})", -x.prec() - 1);
    if terms.is_empty() {
        marker
    } else {
        format!("{}+{marker}", format_terms(field, &terms))
    }
}

/// Parses a series. Without a precision marker the value is an exact finite sum.
pub fn parse_laurent(field: &Field, s: &str) -> Result<Laurent> {
    let parsed = parse_terms(field, s)?;
    let Some(e) = parsed.big_o else {
        let low = parsed.terms.last().map_or(0, |t| t.0.min(0));
        let shift = (-low) as usize;
        let top = parsed.terms.first().map_or(0, |t| t.0);
        let mut v = vec![0u32; (top - low) as usize + 1];
        for (e, c) in &parsed.terms {
            v[(e - low) as usize] = *c;
        }
        let num = Poly::from_coeffs(field, v);
        let den = Poly::monomial(field, 1, shift);
        return Laurent::from_rational(&num, &den, 1 + shift as i64);
    };
    let prec = -e - 1;
    if parsed.terms.iter().any(|&(te, _)| te < -prec) {
        return Err(perr("term below the precision marker"));
    }
    Ok(Laurent::from_terms(field, &parsed.terms, prec))
}

/// `[A0; A1, A2, ...]`, or `[A1, A2, ...]` when A0 is zero.
pub fn format_cf(a0: &Poly, quotients: &[Poly]) -> String {
    let rest: Vec<String> = quotients.iter().map(format_poly).collect();
    if a0.is_zero() {
        format!("[{}]", rest.join(", "))
    } else {
        format!("[{}; {}]", format_poly(a0), rest.join(", "))
    }
}

pub fn parse_cf(field: &Field, s: &str) -> Result<(Poly, Vec<Poly>)> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| perr("continued fraction must be bracketed"))?;
    let (a0, rest) = match inner.split_once(';') {
        Some((a, r)) => (parse_poly(field, a)?, r),
        None => (Poly::zero(field), inner),
    };
    let mut quotients = Vec::new();
    if !rest.trim().is_empty() {
        for part in rest.split(',') {
            let a = parse_poly(field, part)?;
            if a.deg().unwrap_or(0) == 0 {
                return Err(perr(format!("partial quotient `{}` must have positive degree", part.trim())));
            }
            quotients.push(a);
        }
    }
    Ok((a0, quotients))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn poly_round_trip() {
        let f2 = FieldSpec::prime(2).unwrap();
        for s in ["0", "1", "T", "T^3+T+1", "T^10"] {
            assert_eq!(format_poly(&parse_poly(&f2, s).unwrap()), s);
        }
        let f4 = FieldSpec::new(2, 2).unwrap();
        let p = parse_poly(&f4, "(g+1)*T^2+g").unwrap();
        assert_eq!(p.coeffs(), &[2, 0, 3]);
        assert_eq!(format_poly(&p), "(g+1)*T^2+g");
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(format_poly(&parse_poly(&f3, "2*T^2 + T + 2").unwrap()), "2*T^2+T+2");
        assert_eq!(format_poly(&parse_poly(&f3, "T+T+T^0").unwrap()), "2*T+1");
    }

    #[test]
    fn parse_errors() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert!(parse_poly(&f2, "2*T").is_err());
        assert!(parse_poly(&f2, "T^-1").is_err());
        assert!(parse_poly(&f2, "T+").is_err());
        assert!(parse_poly(&f2, "g*T").is_err());
        assert!(parse_cf(&f2, "[T, 1]").is_err());
    }

    #[test]
    fn series_round_trip() {
        let f2 = FieldSpec::prime(2).unwrap();
        for s in ["T^3+T+1+T^-2+O(T^-8)", "O(T^-3)", "T^-1+O(T^-2)"] {
            assert_eq!(format_laurent(&parse_laurent(&f2, s).unwrap()), s);
        }
        let x = parse_laurent(&f2, "T^-2+T^-5").unwrap();
        assert!(x.is_exact());
        assert_eq!(format_laurent(&x), "T^-2+T^-5");
        assert!(parse_laurent(&f2, "T^-9+O(T^-8)").is_err());
    }

    #[test]
    fn cf_round_trip() {
        let f2 = FieldSpec::prime(2).unwrap();
        for s in ["[T, T, T^2+1]", "[T+1; T]", "[]"] {
            let (a0, qs) = parse_cf(&f2, s).unwrap();
            assert_eq!(format_cf(&a0, &qs), s);
        }
    }
}
