//! CSV and gnuplot output.

use std::fmt::Write as _;

use diracsplit::harness::ErrorRecord;

use crate::config::RunConfig;

/// Bumped whenever the column set or order changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "scheme,h,tau,epsilon,t_final,e_phi,e_rho,e_J,mass_drift,wall_time,rate";

/// `#`-commented block: schema, versions, command, config hash and the resolved config.
pub fn metadata(command: &str, config: Option<&RunConfig>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# diracsplit-csv {CSV_SCHEMA_VERSION}");
    let _ = writeln!(out, "# version {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# command {command}");
    if let Some(c) = config {
        let _ = writeln!(out, "# config-hash {}", c.hash());
        for line in c.echo().lines() {
            let _ = writeln!(out, "#   {line}");
        }
    }
    out
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn record_line(r: &ErrorRecord) -> String {
    [r.h, r.tau, r.epsilon, r.t_final, r.e_phi, r.e_rho, r.e_j, r.mass_drift, r.wall_time, r.rate]
        .iter()
        .fold(r.scheme.clone(), |mut acc, &v| {
            acc.push(',');
            acc.push_str(&num(v));
            acc
        })
}

pub fn csv(meta: &str, records: &[ErrorRecord], trailer: &[String]) -> String {
    let mut out = String::from(meta);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&record_line(r));
        out.push('\n');
    }
    for t in trailer {
        let _ = writeln!(out, "# {t}");
    }
    out
}

/// Log-log error plot of `e_phi` against column `x_col` (1-based), one curve per scheme,
/// with slope guides of orders 2, 4 and 6 through the first point.
pub fn gnuplot_script(csv_path: &str, schemes: &[String], x_col: usize, x_label: &str, records: &[ErrorRecord]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(out, "set logscale xy");
    let _ = writeln!(out, "set format y '%.0e'");
    let _ = writeln!(out, "set xlabel '{x_label}'");
    let _ = writeln!(out, "set ylabel 'e_phi'");
    let _ = writeln!(out, "set key left top");
    let anchor = records.first().map(|r| (if x_col == 2 { r.h } else { r.tau }, r.e_phi));
    let mut plots: Vec<String> = schemes
        .iter()
        .map(|s| {
            format!(
                "'{csv_path}' using (strcol(1) eq '{s}' ? ${x_col} : NaN):6 with linespoints title '{s}'"
            )
        })
        .collect();
    if let Some((x0, e0)) = anchor {
        for p in [2, 4, 6] {
            let _ = writeln!(out, "g{p}(x) = {e0:e} * (x / {x0:e})**{p}");
            plots.push(format!("g{p}(x) with lines dashtype 2 title 'order {p}'"));
        }
    }
    let _ = writeln!(out, "plot {}", plots.join(", \\\n     "));
    out
}
