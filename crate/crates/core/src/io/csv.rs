//! Diagnostics CSV. The header line doubles as the format version.

use std::fmt::Write as _;
use std::path::Path;

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};

pub const DIAGNOSTICS_HEADER: &str = "t,l2,gamma_energy,hs,hs_log,u_max,dt,s_t";

/// Header plus one row per record, 17 significant digits per value.
pub fn format_diagnostics(records: &[DiagnosticsRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 8 * 24);
    out.push_str(DIAGNOSTICS_HEADER);
    out.push('\n');
    for r in records {
        let row = [r.t, r.l2, r.gamma_energy, r.hs, r.hs_log, r.u_max, r.dt, r.s_t];
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{v:.16e}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn parse_diagnostics(text: &str) -> Result<Vec<DiagnosticsRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == DIAGNOSTICS_HEADER => {}
        Some(h) => return Err(Error::Csv(format!("unrecognized header '{h}'"))),
        None => return Err(Error::Csv("empty file".into())),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let v = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Csv(format!("line {}: {e}", i + 2)))?;
            if v.len() != 8 {
                return Err(Error::Csv(format!("line {}: expected 8 fields, got {}", i + 2, v.len())));
            }
            Ok(DiagnosticsRecord {
                t: v[0],
                l2: v[1],
                gamma_energy: v[2],
                hs: v[3],
                hs_log: v[4],
                u_max: v[5],
                dt: v[6],
                s_t: v[7],
            })
        })
        .collect()
}

pub fn write_diagnostics(records: &[DiagnosticsRecord], path: &Path) -> Result<()> {
    std::fs::write(path, format_diagnostics(records))?;
    Ok(())
}

pub fn read_diagnostics(path: &Path) -> Result<Vec<DiagnosticsRecord>> {
    parse_diagnostics(&std::fs::read_to_string(path)?)
}
