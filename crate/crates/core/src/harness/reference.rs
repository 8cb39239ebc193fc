//! Reference solutions and their on-disk cache.
//!
//! Cache files are `<dir>/<sha256>.ref`: a text header terminated by a line
//! `end`, followed by the field as little-endian `f64` pairs (re, im), first
//! component then second, nodes in storage order.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::metrics::{error_metrics, field_norms, Metrics};
use super::Problem;
use crate::error::{Error, Result};
use crate::model::{mass, Grid, SpinorField};
use crate::schemes::{catalog, Evolver, SchemeSpec};
use crate::spectral::{apply_t_flow, SpectralCache};

pub const CACHE_ENV: &str = "DIRACSPLIT_CACHE";
pub const CACHE_VERSION: u32 = 1;
const MAGIC: &str = "diracsplit-reference";

/// Scheme and step used for reference runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceProtocol {
    pub scheme: String,
    pub tau: f64,
}

impl ReferenceProtocol {
    pub fn new(scheme: &str, tau: f64) -> Self {
        Self { scheme: scheme.to_string(), tau }
    }

    fn describe(&self) -> String {
        format!("scheme={};tau={:?}", self.scheme, self.tau)
    }
}

/// Number of steps of size `tau` covering `[0, t]`; `t` must be a multiple of `tau`.
pub fn steps_for(t: f64, tau: f64) -> Result<usize> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidStep(format!("tau must be positive, got {tau}")));
    }
    let n = (t / tau).round();
    if n < 1.0 || (n * tau - t).abs() > 1e-9 * t.abs().max(tau) {
        return Err(Error::Sweep(format!("t_final {t} is not a positive multiple of tau {tau}")));
    }
    Ok(n as usize)
}

/// Evolves the problem's initial data to `t_final`.
///
/// Returns the final field, the propagation wall time in seconds and the
/// largest relative mass deviation seen.
pub fn evolve_problem(problem: &Problem, spec: &SchemeSpec, tau: f64) -> Result<(SpinorField, f64, f64)> {
    let n = steps_for(problem.t_final, tau)?;
    let cache = SpectralCache::build(&problem.params, &problem.grid);
    let mut field = problem.initial_field()?;
    let m0 = mass(&field);
    let mut evolver = Evolver::new(spec, &problem.potential, &cache);
    let mut drift: f64 = 0.0;
    let start = Instant::now();
    for k in 0..n {
        evolver.step(&mut field, tau, k as f64 * tau)?;
        if m0 > 0.0 {
            drift = drift.max((mass(&field) - m0).abs() / m0);
        }
    }
    let wall = start.elapsed().as_secs_f64();
    if !field.is_finite() {
        return Err(Error::Sweep(format!("non-finite field after {} with tau {tau}", spec.name())));
    }
    Ok((field, wall, drift))
}

fn compute_reference(problem: &Problem, protocol: &ReferenceProtocol) -> Result<SpinorField> {
    if problem.potential.is_zero() {
        let cache = SpectralCache::build(&problem.params, &problem.grid);
        let mut f = problem.initial_field()?;
        apply_t_flow(&mut f, problem.t_final, &cache)?;
        return Ok(f);
    }
    let spec = catalog(&protocol.scheme)?;
    Ok(evolve_problem(problem, &spec, protocol.tau)?.0)
}

/// On-disk store of reference fields keyed by a hash of the full configuration.
#[derive(Debug, Clone)]
pub struct ReferenceCache {
    dir: PathBuf,
}

fn key_lock(key: &str) -> Arc<Mutex<()>> {
    static LOCKS: OnceLock<Mutex<HashMap<String, Arc<Mutex<()>>>>> = OnceLock::new();
    let mut map = LOCKS.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
    map.entry(key.to_string()).or_default().clone()
}

impl ReferenceCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// The cache named by the environment variable, if set and non-empty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn config_text(problem: &Problem, protocol: &ReferenceProtocol) -> Option<String> {
        Some(format!("version={CACHE_VERSION};{};{}", problem.describe()?, protocol.describe()))
    }

    /// Content hash of the configuration, or `None` when it cannot be described.
    pub fn key(problem: &Problem, protocol: &ReferenceProtocol) -> Option<String> {
        let text = Self::config_text(problem, protocol)?;
        let digest = Sha256::digest(text.as_bytes());
        Some(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.ref"))
    }

    pub fn load(&self, key: &str, grid: &Grid) -> Result<Option<SpinorField>> {
        let path = self.path(key);
        let file = match fs::File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let bad = |msg: &str| Error::CacheFormat { path: path.display().to_string(), msg: msg.to_string() };
        let mut reader = BufReader::new(file);
        let mut header = HashMap::new();
        let mut line = String::new();
        let mut first = true;
        loop {
            line.clear();
            if reader.read_line(&mut line)? == 0 {
                return Err(bad("missing `end` line"));
            }
            let l = line.trim_end_matches('\n');
            if first {
                if l != MAGIC {
                    return Err(bad("not a reference file"));
                }
                first = false;
                continue;
            }
            if l == "end" {
                break;
            }
            let (k, v) = l.split_once(" = ").ok_or_else(|| bad("malformed header line"))?;
            header.insert(k.to_string(), v.to_string());
        }
        if header.get("version").map(String::as_str) != Some(&CACHE_VERSION.to_string()) {
            return Err(bad("unsupported version"));
        }
        if header.get("key").map(String::as_str) != Some(key) {
            return Err(bad("key mismatch"));
        }
        let n: usize = header.get("values").and_then(|v| v.parse().ok()).ok_or_else(|| bad("missing value count"))?;
        if n != grid.len() {
            return Err(bad("value count does not match the grid"));
        }
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes)?;
        if bytes.len() != 32 * n {
            return Err(bad("truncated payload"));
        }
        let vals: Vec<f64> = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        let comp = |k: usize| -> Vec<Complex64> {
            vals[2 * n * k..2 * n * (k + 1)].chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect()
        };
        let field = SpinorField::from_components(*grid, comp(0), comp(1))?;
        if !field.is_finite() {
            return Err(bad("non-finite values"));
        }
        Ok(Some(field))
    }

    pub fn store(&self, key: &str, config: &str, field: &SpinorField) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let n = field.grid().len();
        let mut buf = Vec::with_capacity(32 * n + 512);
        writeln!(buf, "{MAGIC}")?;
        writeln!(buf, "version = {CACHE_VERSION}")?;
        writeln!(buf, "key = {key}")?;
        writeln!(buf, "config = {config}")?;
        writeln!(buf, "grid = {}", field.grid())?;
        writeln!(buf, "values = {n}")?;
        writeln!(buf, "end")?;
        for k in 0..2 {
            for z in field.component(k) {
                buf.extend_from_slice(&z.re.to_le_bytes());
                buf.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
        fs::write(&tmp, &buf)?;
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }

    /// Loads the reference for `key` or computes and stores it.
    fn get_or_compute(
        &self,
        problem: &Problem,
        protocol: &ReferenceProtocol,
        compute: impl FnOnce() -> Result<SpinorField>,
    ) -> Result<SpinorField> {
        let Some(key) = Self::key(problem, protocol) else { return compute() };
        let lock = key_lock(&key);
        let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(f) = self.load(&key, &problem.grid)? {
            return Ok(f);
        }
        let f = compute()?;
        let config = Self::config_text(problem, protocol).unwrap_or_default();
        self.store(&key, &config, &f)?;
        Ok(f)
    }
}

/// The reference field at `t_final`, from the cache when available.
///
/// The reference step must be at least 8 times smaller than every study step.
pub fn reference_solution(
    problem: &Problem,
    protocol: &ReferenceProtocol,
    study_taus: &[f64],
    cache: Option<&ReferenceCache>,
) -> Result<SpinorField> {
    if let Some(min) = study_taus.iter().copied().reduce(f64::min) {
        if protocol.tau * 8.0 > min * (1.0 + 1e-12) {
            return Err(Error::Reference(format!(
                "reference tau {} must be at least 8x smaller than the smallest study tau {min}",
                protocol.tau
            )));
        }
    }
    steps_for(problem.t_final, protocol.tau)?;
    match cache {
        Some(c) => c.get_or_compute(problem, protocol, || compute_reference(problem, protocol)),
        None => compute_reference(problem, protocol),
    }
}

/// A reference field with its measured self-convergence error.
#[derive(Debug, Clone)]
pub struct Reference {
    pub field: SpinorField,
    pub protocol: ReferenceProtocol,
    /// Metrics between the runs at `tau` and `tau / 2`.
    pub self_error: Metrics,
    /// Norms of the reference field under each metric.
    pub norms: Metrics,
}

/// Computes the reference and its self-convergence error.
pub fn prepare_reference(
    problem: &Problem,
    protocol: &ReferenceProtocol,
    study_taus: &[f64],
    cache: Option<&ReferenceCache>,
) -> Result<Reference> {
    let field = reference_solution(problem, protocol, study_taus, cache)?;
    let half = ReferenceProtocol::new(&protocol.scheme, protocol.tau / 2.0);
    let finer = reference_solution(problem, &half, &[], cache)?;
    let self_error = error_metrics(&field, &finer)?;
    let norms = field_norms(&field);
    Ok(Reference { field, protocol: protocol.clone(), self_error, norms })
}
