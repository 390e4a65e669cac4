use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;

use crate::{Common, Failure, Format};

fn io_err(e: impl std::fmt::Display) -> Failure {
    Failure::Io(e.to_string())
}

fn sink(c: &Common) -> Result<Box<dyn Write>, Failure> {
    Ok(match &c.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_err(format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes `rows` as CSV (header from the field names) or as a JSON array.
pub fn emit<T: Serialize>(c: &Common, rows: &[T]) -> Result<(), Failure> {
    let mut w = sink(c)?;
    match c.format {
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(w);
            for r in rows {
                wtr.serialize(r).map_err(io_err)?;
            }
            wtr.flush().map_err(io_err)?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows).map_err(io_err)?;
            writeln!(w).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
    }
    Ok(())
}

/// Emits, then turns any failed row into exit status 1.
pub fn emit_checked<T: Serialize>(c: &Common, rows: &[T], ok: impl Fn(&T) -> bool) -> Result<(), Failure> {
    emit(c, rows)?;
    if rows.iter().all(ok) {
        Ok(())
    } else {
        Err(Failure::Falsified)
    }
}
