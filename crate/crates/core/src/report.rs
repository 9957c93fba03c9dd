//! Fixed-format CSV and JSON output.
//!
//! Numbers are written with 9 significant digits in `%.9g` style, `.` as
//! decimal mark and `\n` line endings, so files are byte-stable.

use std::fmt::Write;

use serde::Serialize;

use crate::propagator::TrajectorySample;
use crate::stats::{SensitivityRow, YieldReport};

/// C `%.9g` formatting.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn csv<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = [f64; N]>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&fmt_sig9(*v));
        }
        out.push('\n');
    }
    out
}

pub fn cdf_csv(report: &YieldReport) -> String {
    csv(
        ["tmax_ns", "fraction"],
        report.cdf.iter().map(|&(t, f)| [t, f]),
    )
}

pub fn trajectory_csv(samples: &[TrajectorySample]) -> String {
    csv(
        ["t_ns", "p1", "p2", "p3"],
        samples
            .iter()
            .map(|s| [s.t_ns, s.populations[0], s.populations[1], s.populations[2]]),
    )
}

pub fn sensitivity_csv(rows: &[SensitivityRow]) -> String {
    csv(
        ["bohr_nm", "yield_fraction", "j_below_one_fraction"],
        rows.iter()
            .map(|r| [r.bohr_nm, r.yield_fraction, r.j_below_one_fraction]),
    )
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable report");
    let _ = writeln!(s);
    s
}
