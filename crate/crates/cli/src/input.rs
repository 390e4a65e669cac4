use std::path::Path;

use fqdio::contfrac::{cf_eval, cf_eval_periodic};
use fqdio::inhomog::PsiTable;
use fqdio::laurent::random_series;
use fqdio::text::{parse_cf, parse_laurent, parse_poly};
use fqdio::{Field, FieldSpec, Laurent, TargetInput, Vec2Laurent};

use crate::{Common, Failure, TargetArg, XiArg};

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

pub fn field(c: &Common) -> Result<Field, Failure> {
    if c.prec < 2 {
        return Err(Failure::Usage(format!("--prec must be at least 2, got {}", c.prec)));
    }
    match &c.modulus {
        None => FieldSpec::from_order(c.q).map_err(usage),
        Some(m) => {
            let (p, _) = fqdio::field::prime_power(c.q).ok_or_else(|| usage(format!("{} is not a prime power", c.q)))?;
            let base = FieldSpec::prime(p).map_err(usage)?;
            let poly = parse_poly(&base, m).map_err(usage)?;
            let f = FieldSpec::with_modulus(p, poly.coeffs().to_vec()).map_err(usage)?;
            if f.q() as u64 != c.q {
                return Err(usage(format!("modulus `{m}` defines a field of order {}, not {}", f.q(), c.q)));
            }
            Ok(f)
        }
    }
}

/// ξ from `--xi`, `--cf`, or a random series with |ξ| = q^{-1} seeded by `salt`.
pub fn xi(f: &Field, c: &Common, a: &XiArg, salt: u64) -> Result<Laurent, Failure> {
    if let Some(s) = &a.xi {
        return parse_laurent(f, s).map_err(usage);
    }
    if let Some(s) = &a.cf {
        let (text, periodic) = match s.trim().strip_suffix(']').and_then(|r| r.trim_end().strip_suffix("...")) {
            Some(head) => (format!("{}]", head.trim_end().trim_end_matches(',')), true),
            None => (s.clone(), false),
        };
        let (a0, qs) = parse_cf(f, &text).map_err(usage)?;
        return if periodic {
            cf_eval_periodic(&a0, &[], &qs, c.prec).map_err(usage)
        } else {
            cf_eval(&a0, &qs, c.prec).map_err(usage)
        };
    }
    Ok(random_series(f, c.seed.wrapping_mul(2).wrapping_add(salt), c.prec, -1))
}

pub fn series_or_random(f: &Field, c: &Common, s: Option<&str>, salt: u64) -> Result<Laurent, Failure> {
    match s {
        Some(s) => parse_laurent(f, s).map_err(usage),
        None => Ok(random_series(f, c.seed.wrapping_mul(2).wrapping_add(salt), c.prec, -1)),
    }
}

pub fn start(xi: &Laurent) -> Result<Vec2Laurent, Failure> {
    Vec2Laurent::new(xi.clone(), Laurent::one(xi.field())).map_err(usage)
}

pub fn slope(f: &Field, s: &str) -> Result<TargetInput, Failure> {
    let (a, b) = s.split_once('/').ok_or_else(|| usage(format!("slope `{s}` is not of the form A/B")))?;
    Ok(TargetInput::RationalSlope {
        a: parse_poly(f, a).map_err(usage)?,
        b: parse_poly(f, b).map_err(usage)?,
        y2: Laurent::one(f),
    })
}

pub fn target(f: &Field, c: &Common, t: &TargetArg) -> Result<TargetInput, Failure> {
    if t.zero {
        return Ok(TargetInput::Zero);
    }
    if let Some(s) = &t.slope {
        return slope(f, s);
    }
    let y1 = series_or_random(f, c, t.y1.as_deref(), 1)?;
    let y2 = match &t.y2 {
        Some(s) => parse_laurent(f, s).map_err(usage)?,
        None => Laurent::one(f),
    };
    Ok(TargetInput::Vector(Vec2Laurent::new(y1, y2).map_err(usage)?))
}

#[derive(serde::Deserialize)]
struct PsiRow {
    h: i64,
    psi_h: i64,
}

pub fn psi_table(path: &Path) -> Result<PsiTable, Failure> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let mut entries = Vec::new();
    for row in rdr.deserialize::<PsiRow>() {
        let row = row.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        entries.push((row.h, row.psi_h));
    }
    PsiTable::new(entries).map_err(usage)
}
