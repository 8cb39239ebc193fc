//! Subcommand implementations. Data goes to `out`, diagnostics to `err`.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use diracsplit::harness::{
    evolve_problem, prepare_reference, spatial_convergence, superres_sweep, temporal_convergence, ErrorRecord,
    ReferenceCache, ReferenceProtocol, METRIC_NAMES,
};
use diracsplit::lie::{
    compare_tables, free_dimension, multi_start, newton_solve, quadruple_identity_check, relation,
    round_significant, table_constants, vanishing_suite, verify_identity_a4, Algebra, CellStatus, OrderSystem,
    CONDITION_LABELS, PRINTED,
};
use diracsplit::model::mass;
use diracsplit::schemes::{catalog, count_note};
use diracsplit::{Error, Result};

use crate::config::{parse_config, RunConfig};
use crate::report::{csv, gnuplot_script, metadata};

/// Process exit code for an error: 2 for numerical failures, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    parse_config(&fs::read_to_string(path)?)
}

fn cache(cfg: &RunConfig) -> Option<ReferenceCache> {
    cfg.cache.as_ref().map(ReferenceCache::new).or_else(ReferenceCache::from_env)
}

/// Writes `text` to the configured CSV path, or to `out`.
fn emit(cfg: &RunConfig, text: &str, out: &mut dyn Write) -> Result<()> {
    match &cfg.csv {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_gnuplot(
    cfg: &RunConfig,
    path: Option<&Path>,
    schemes: &[String],
    x_col: usize,
    label: &str,
    records: &[ErrorRecord],
) -> Result<()> {
    if let Some(p) = path {
        let data = cfg.csv.clone().unwrap_or_else(|| "results.csv".into());
        fs::write(p, gnuplot_script(&data, schemes, x_col, label, records))?;
    }
    Ok(())
}

pub fn solve(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let problem = cfg.problem()?;
    let spec = catalog(&cfg.scheme)?;
    let tau = cfg.tau.value();
    let (field, wall, drift) = evolve_problem(&problem, &spec, tau)?;
    let mut text = metadata("solve", Some(cfg));
    let steps = (problem.t_final / tau).round() as usize;
    text.push_str(&format!(
        "# summary scheme={} steps={steps} t_final={:.16e} mass={:.16e} mass_drift={:.16e} wall_time={:.6e}\n",
        spec.name(),
        problem.t_final,
        mass(&field),
        drift,
        wall
    ));
    let grid = *field.grid();
    text.push_str(if grid.dim() == 1 { "x" } else { "x,y" });
    text.push_str(",re_phi1,im_phi1,re_phi2,im_phi2\n");
    for idx in 0..grid.len() {
        let x = grid.coords(idx);
        let [a, b] = field.get(idx);
        let coords = if grid.dim() == 1 { format!("{:.16e}", x[0]) } else { format!("{:.16e},{:.16e}", x[0], x[1]) };
        text.push_str(&format!("{coords},{:.16e},{:.16e},{:.16e},{:.16e}\n", a.re, a.im, b.re, b.im));
    }
    match &cfg.dump {
        Some(p) => {
            fs::write(p, &text)?;
            writeln!(out, "{}", text.lines().find(|l| l.starts_with("# summary")).unwrap_or_default())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}

pub fn converge_time(cfg: &RunConfig, gnuplot: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let problem = cfg.problem()?;
    let taus = cfg.study_taus();
    let protocol = ReferenceProtocol::new(&cfg.reference_scheme, cfg.resolved_reference_tau());
    let cache = cache(cfg);
    let reference = prepare_reference(&problem, &protocol, &taus, cache.as_ref())?;
    let mut records = Vec::new();
    let mut trailer = vec![format!(
        "reference scheme={} tau={:.16e} self_error e_phi={:.3e} e_rho={:.3e} e_J={:.3e}",
        protocol.scheme, protocol.tau, reference.self_error.e_phi, reference.self_error.e_rho, reference.self_error.e_j
    )];
    let mut saturated = Vec::new();
    let schemes = cfg.study_schemes();
    for s in &schemes {
        let study = temporal_convergence(s, &taus, &problem, &reference, cfg.workers)?;
        let fits: Vec<String> = (0..3)
            .map(|k| match study.order_for(k) {
                Ok(p) => format!("{}={p:.4}", METRIC_NAMES[k]),
                Err(_) => format!("{}=saturated", METRIC_NAMES[k]),
            })
            .collect();
        trailer.push(format!("fit scheme={} floor={:.3e} {}", study.scheme, study.floor.e_phi, fits.join(" ")));
        if let Err(e) = study.order() {
            saturated.push((study.scheme.clone(), e));
        }
        records.extend(study.records);
    }
    emit(cfg, &csv(&metadata("converge-time", Some(cfg)), &records, &trailer), out)?;
    emit_gnuplot(cfg, gnuplot, &schemes, 3, "tau", &records)?;
    if let Some((scheme, e)) = saturated.into_iter().next() {
        writeln!(err, "{scheme}: {e}")?;
        return Ok(exit_code(&e));
    }
    Ok(0)
}

pub fn converge_space(cfg: &RunConfig, gnuplot: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let problem = cfg.problem()?;
    let study = spatial_convergence(&cfg.scheme, &cfg.resolved_sizes(), cfg.space_tau.value(), &problem, cfg.workers)?;
    let trailer = vec![
        format!("reference M={} scheme={} tau={:.16e}", cfg.m, study.scheme, cfg.space_tau.value()),
        "rate column holds the ratio e_phi[k-1]/e_phi[k]".to_string(),
    ];
    emit(cfg, &csv(&metadata("converge-space", Some(cfg)), &study.records, &trailer), out)?;
    emit_gnuplot(cfg, gnuplot, &[study.scheme.clone()], 2, "h", &study.records)?;
    Ok(0)
}

pub fn superres(cfg: &RunConfig, gnuplot: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let spec = cfg.sweep_spec()?;
    let table = superres_sweep(&spec, cache(cfg).as_ref(), cfg.workers)?;
    let mut records = table.records.clone();
    let name = format!("{}:max", spec.scheme);
    for (k, (&tau, &e)) in table.taus.iter().zip(&table.column_max).enumerate() {
        records.push(ErrorRecord {
            scheme: name.clone(),
            h: (spec.domain.1 - spec.domain.0) / spec.m as f64,
            tau,
            epsilon: f64::NAN,
            t_final: spec.t_final,
            e_phi: e,
            e_rho: f64::NAN,
            e_j: f64::NAN,
            mass_drift: f64::NAN,
            wall_time: f64::NAN,
            rate: table.max_rates[k],
        });
    }
    let trailer = vec![
        format!("resonance {}", spec.resonance.name()),
        format!("rows `{name}` hold the maximum over epsilon of each column; NaN marks fields that do not apply"),
    ];
    emit(cfg, &csv(&metadata("superres", Some(cfg)), &records, &trailer), out)?;
    emit_gnuplot(cfg, gnuplot, &[name], 3, "tau", &records)?;
    Ok(0)
}

const COEFF_NAMES: [&str; 5] = ["c0", "c1", "c2", "c3", "c4"];
const COEFF_TOL: f64 = 1e-13;

pub fn coeffs_derive(write: Option<&Path>, starts: usize, seed: u64, out: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let sys = OrderSystem::new();
    let table = table_constants();
    let init = round_significant(table, 3);
    let rep = newton_solve(&sys, init, COEFF_TOL, 50)?;
    writeln!(out, "# Newton from the 3-digit seed {init:?}")?;
    writeln!(out, "# iterations {}", rep.iterations)?;
    let mut ok = true;
    for k in 0..5 {
        let dev = (rep.root[k] - table[k]).abs();
        ok &= dev <= COEFF_TOL;
        writeln!(out, "# {} = {:.17e}  |deviation from tabulated| = {dev:.3e}", COEFF_NAMES[k], rep.root[k])?;
    }
    for (label, r) in CONDITION_LABELS.iter().zip(rep.residuals) {
        ok &= r.abs() <= COEFF_TOL;
        writeln!(out, "# residual {label:<13} {r:.3e}")?;
    }
    if starts > 0 {
        let runs = multi_start(&sys, starts, seed, COEFF_TOL, 100);
        let roots: Vec<_> = runs.iter().filter_map(|r| r.as_ref().ok()).collect();
        let hits = roots.iter().filter(|r| (0..5).all(|k| (r.root[k] - table[k]).abs() < 1e-10)).count();
        writeln!(out, "# multi-start seed={seed}: {} of {starts} converged, {hits} to the tabulated root", roots.len())?;
    }
    writeln!(out, "# elapsed {:.3} s", start.elapsed().as_secs_f64())?;
    let mut constants = String::new();
    for k in 0..5 {
        constants.push_str(&format!("s6c.{} = {:.17e}\n", COEFF_NAMES[k], rep.root[k]));
    }
    match write {
        Some(p) => fs::write(p, &constants)?,
        None => out.write_all(constants.as_bytes())?,
    }
    Ok(if ok { 0 } else { 2 })
}

pub fn coeffs_verify(out: &mut dyn Write) -> Result<i32> {
    let sys = OrderSystem::new();
    let x = table_constants();
    let res = sys.exact_residual(&x);
    let mut ok = true;
    for (label, r) in CONDITION_LABELS.iter().zip(res) {
        let pass = r.abs() <= COEFF_TOL;
        ok &= pass;
        writeln!(out, "{label:<13} residual {r:.3e} {}", if pass { "ok" } else { "FAIL" })?;
    }
    Ok(if ok { 0 } else { 2 })
}

pub fn opcount(scheme: &str, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let spec = catalog(scheme)?;
    let (t, w) = spec.op_count();
    writeln!(out, "T={t} W={w}")?;
    if let Some(note) = count_note(&spec) {
        writeln!(err, "note: {note}")?;
    }
    Ok(0)
}

pub fn verify_lie(trials: usize, seed: u64, out: &mut dyn Write) -> Result<i32> {
    let free = Algebra::free();
    let quot = Algebra::quotient();
    let mut all = true;
    let mut check = |name: String, pass: bool, out: &mut dyn Write| -> Result<()> {
        all &= pass;
        writeln!(out, "{} {name}", if pass { "PASS" } else { "FAIL" })?;
        Ok(())
    };
    let dims: Vec<usize> = (1..=5).map(|g| free.dimension(g)).collect();
    check(format!("free dimensions {dims:?}"), (1..=5).all(|g| free.dimension(g) == free_dimension(g)), out)?;
    let qdims: Vec<usize> = (1..=5).map(|g| quot.dimension(g)).collect();
    check(format!("quotient dimensions {qdims:?}"), qdims == [2, 1, 1, 1, 2], out)?;
    check("relation [W,T,W] vanishes in the quotient".into(), quot.reduce(&relation()).is_zero(), out)?;
    check("A4 identity holds in the quotient".into(), verify_identity_a4(quot), out)?;
    check("A4 identity fails in the free algebra".into(), !verify_identity_a4(free), out)?;
    for (word, zero) in vanishing_suite(quot) {
        check(format!("commutator {word} reduces to zero"), zero, out)?;
    }
    check(format!("quadruple identity over {trials} random integer matrices"), quadruple_identity_check(trials, seed), out)?;
    for (cmp, cell) in compare_tables().iter().zip(PRINTED) {
        let name = format!("{} {} printed cell", cmp.stage, cmp.label);
        match &cmp.status {
            CellStatus::Match => check(format!("{name} matches"), true, out)?,
            CellStatus::Discrepancy(d) => check(
                format!("{name} differs by {d}; matches with the corrected factor"),
                cmp.matches_corrected(cell),
                out,
            )?,
        }
    }
    Ok(if all { 0 } else { 2 })
}
