//! SRIM `RANGE_3D.txt` ingestion.
//!
//! Data rows are whitespace-delimited `ion depth lateral_y lateral_z` in
//! Angstrom. Any line whose first token is not a number is treated as header.
//! Comma decimal marks are accepted.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::implant::StraggleSample;

const ANGSTROM_PER_NM: f64 = 10.0;

pub fn parse_srim_range3d(text: &str) -> Result<Vec<StraggleSample>> {
    let mut out = Vec::new();
    let mut first_rejected = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.replace(',', ".");
        let mut fields = line.split_whitespace();
        let Some(first) = fields.next() else { continue };
        if first.parse::<f64>().is_err() {
            if first_rejected.is_none() {
                first_rejected = Some(raw.trim().to_string());
            }
            continue;
        }
        let lineno = idx + 1;
        let values = std::iter::once(first)
            .chain(fields)
            .take(4)
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::SrimRow {
                    line: lineno,
                    reason: format!("non-numeric field {tok:?}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() < 4 {
            return Err(Error::SrimRow {
                line: lineno,
                reason: format!("expected 4 columns, found {}", values.len()),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::SrimRow {
                line: lineno,
                reason: format!("non-finite value {v}"),
            });
        }
        out.push(StraggleSample {
            z: values[1] / ANGSTROM_PER_NM,
            dx: values[2] / ANGSTROM_PER_NM,
            dy: values[3] / ANGSTROM_PER_NM,
        });
    }

    if out.is_empty() {
        return Err(Error::SrimNoRows { first_rejected });
    }
    Ok(out)
}

/// Renders samples in RANGE_3D layout, for fixtures and round trips.
pub fn format_range3d(samples: &[StraggleSample], title: &str) -> String {
    let mut s = String::with_capacity(64 * (samples.len() + 12));
    s.push_str(" =========================================================\n");
    let _ = writeln!(s, " {title}");
    s.push_str(" =========================================================\n");
    s.push_str("  Ion      Depth (X)    Lateral (Y)   Lateral (Z)\n");
    s.push_str(" Number    (Angstrom)   (Angstrom)    (Angstrom)\n");
    s.push_str("-------  ------------ ------------- -------------\n");
    for (i, p) in samples.iter().enumerate() {
        let _ = writeln!(
            s,
            "{:>7} {:>13.6E} {:>13.6E} {:>13.6E}",
            i + 1,
            p.z * ANGSTROM_PER_NM,
            p.dx * ANGSTROM_PER_NM,
            p.dy * ANGSTROM_PER_NM
        );
    }
    s
}
