//! Run configuration: `key = value` lines grouped under `[section]` headers.
//!
//! `#` starts a comment. Numbers may be decimals or exact rationals such as
//! `1/32`; lists are comma separated. Every key is checked against a closed
//! schema and every diagnostic carries the line number of the offending key.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::ToPrimitive;

use diracsplit::harness::{InitialCondition, Problem, Resonance, SweepSpec};
use diracsplit::model::{Grid, PhysParams, Potential, ThetaMode};
use diracsplit::schemes::catalog;
use diracsplit::{Error, Result};

/// A number that remembers whether it was written as an exact rational.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Number {
    Rational(Ratio<i64>),
    Float(f64),
}

impl Number {
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            return (d != 0).then(|| Number::Rational(Ratio::new(n, d)));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Some(Number::Rational(Ratio::from_integer(n)));
        }
        s.parse::<f64>().ok().filter(|v| v.is_finite()).map(Number::Float)
    }

    pub fn value(&self) -> f64 {
        match self {
            Number::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Number::Float(v) => *v,
        }
    }

    pub fn rational(&self) -> Option<Ratio<i64>> {
        match self {
            Number::Rational(r) => Some(*r),
            Number::Float(_) => None,
        }
    }
}

impl From<f64> for Number {
    fn from(v: f64) -> Self {
        Number::Float(v)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Number::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            // `{:?}` round-trips every finite double
            Number::Float(v) => write!(f, "{v:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    Zero,
    Constant(Number),
    Rational,
    Honeycomb(ThetaMode),
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialKind {
    Gaussian { center1: Vec<Number>, center2: Vec<Number> },
    Uniform { value1: Number, value2: Number },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub delta: Number,
    pub nu: Number,
    pub epsilon: Number,
    pub xmin: Number,
    pub xmax: Number,
    pub m: usize,
    pub potential: PotentialKind,
    pub initial: InitialKind,
    pub scheme: String,
    pub tau: Number,
    pub t_final: Number,
    pub workers: usize,
    pub seed: u64,
    /// Schemes for `converge-time`.
    pub time_schemes: Vec<String>,
    /// Explicit step list; when empty, `tau0 / factor^k` for k = 0..=refinements.
    pub taus: Vec<Number>,
    pub tau0: Number,
    pub factor: i64,
    pub refinements: usize,
    pub reference_scheme: String,
    /// `None` picks the largest step dividing `t_final` at most 1/8 of the smallest study step.
    pub reference_tau: Option<Number>,
    /// Coarse grids for `converge-space`; empty means `M/16, M/8, M/4, M/2`.
    pub space_sizes: Vec<usize>,
    pub space_tau: Number,
    pub sr_epsilons: Vec<Number>,
    pub sr_tau0: Number,
    pub sr_tau0_pi: bool,
    /// Sweep end time is `t_final * pi`.
    pub sr_t_final_pi: bool,
    pub sr_factor: i64,
    pub sr_refinements: usize,
    pub sr_resonance: Resonance,
    pub sr_reference_tau: Option<Number>,
    pub csv: Option<String>,
    pub dump: Option<String>,
    pub cache: Option<String>,
}

fn rat(n: i64, d: i64) -> Number {
    Number::Rational(Ratio::new(n, d))
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: 1,
            delta: rat(1, 1),
            nu: rat(1, 1),
            epsilon: rat(1, 1),
            xmin: rat(-16, 1),
            xmax: rat(16, 1),
            m: 512,
            potential: PotentialKind::Rational,
            initial: InitialKind::Gaussian { center1: vec![rat(0, 1)], center2: vec![rat(1, 1)] },
            scheme: "S6c".into(),
            tau: rat(1, 100),
            t_final: rat(1, 1),
            workers: 1,
            seed: 1,
            time_schemes: Vec::new(),
            taus: Vec::new(),
            tau0: rat(1, 4),
            factor: 2,
            refinements: 5,
            reference_scheme: "S6c".into(),
            reference_tau: None,
            space_sizes: Vec::new(),
            space_tau: rat(1, 100),
            sr_epsilons: (0..6).map(|k| rat(1, 1 << k)).collect(),
            sr_tau0: rat(1, 1),
            sr_tau0_pi: false,
            sr_t_final_pi: false,
            sr_factor: 4,
            sr_refinements: 4,
            sr_resonance: Resonance::Nonresonant,
            sr_reference_tau: None,
            csv: None,
            dump: None,
            cache: None,
        }
    }
}

/// Every accepted `(section, key)`.
pub const SCHEMA: &[(&str, &[&str])] = &[
    ("model", &["dim", "delta", "nu", "epsilon", "xmin", "xmax", "M"]),
    ("potential", &["kind", "value", "theta"]),
    ("initial", &["kind", "center1", "center2", "value1", "value2"]),
    ("run", &["scheme", "tau", "t_final", "workers", "seed"]),
    ("time", &["schemes", "taus", "tau0", "factor", "refinements"]),
    ("reference", &["scheme", "tau"]),
    ("space", &["sizes", "tau"]),
    ("superres", &["epsilons", "tau0", "tau0_pi", "t_final_pi", "factor", "refinements", "resonance", "reference_tau"]),
    ("output", &["csv", "dump", "cache"]),
];

fn err(line: usize, key: &str, msg: impl Into<String>) -> Error {
    Error::Config { line, key: key.to_string(), msg: msg.into() }
}

fn list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

impl Entry {
    fn number(&self) -> Result<Number> {
        Number::parse(&self.value).ok_or_else(|| err(self.line, &self.key, format!("expected a number, got `{}`", self.value)))
    }

    fn positive(&self) -> Result<Number> {
        let n = self.number()?;
        if n.value() > 0.0 {
            Ok(n)
        } else {
            Err(err(self.line, &self.key, format!("must be positive, got {}", self.value)))
        }
    }

    fn integer<T: std::str::FromStr>(&self) -> Result<T> {
        self.value
            .parse()
            .map_err(|_| err(self.line, &self.key, format!("expected a non-negative integer, got `{}`", self.value)))
    }

    fn boolean(&self) -> Result<bool> {
        match self.value.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(err(self.line, &self.key, format!("expected true or false, got `{}`", self.value))),
        }
    }

    fn numbers(&self) -> Result<Vec<Number>> {
        let items = list(&self.value);
        if items.is_empty() {
            return Err(err(self.line, &self.key, "empty list"));
        }
        items
            .iter()
            .map(|s| Number::parse(s).ok_or_else(|| err(self.line, &self.key, format!("expected a number, got `{s}`"))))
            .collect()
    }

    fn text(&self) -> Option<String> {
        (!self.value.is_empty()).then(|| self.value.clone())
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: BTreeMap<(String, String), Entry> = BTreeMap::new();
    let mut section: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            if !SCHEMA.iter().any(|(s, _)| *s == name) {
                return Err(err(line, name, "unknown section"));
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, content, "expected `key = value` or `[section]`"))?;
        let (key, value) = (key.trim(), value.trim());
        let sec = section.as_deref().ok_or_else(|| err(line, key, "key outside of any [section]"))?;
        let known = SCHEMA.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).unwrap_or(&[]);
        if !known.contains(&key) {
            return Err(err(line, key, format!("unknown key in [{sec}]")));
        }
        let entry = Entry { line, key: key.to_string(), value: value.to_string() };
        if let Some(prev) = entries.insert((sec.to_string(), key.to_string()), entry) {
            return Err(err(line, key, format!("duplicate key (first set on line {})", prev.line)));
        }
    }

    let get = |s: &str, k: &str| entries.get(&(s.to_string(), k.to_string()));
    let mut c = RunConfig::default();

    if let Some(e) = get("model", "dim") {
        c.dim = e.integer()?;
        if !(1..=2).contains(&c.dim) {
            return Err(err(e.line, "dim", "must be 1 or 2"));
        }
        if c.dim == 2 {
            c.initial = InitialKind::Gaussian { center1: vec![rat(0, 1); 2], center2: vec![rat(1, 1), rat(0, 1)] };
        }
    }
    for (key, slot) in [("delta", &mut c.delta), ("nu", &mut c.nu), ("epsilon", &mut c.epsilon)] {
        if let Some(e) = get("model", key) {
            let n = e.number()?;
            if !(n.value() > 0.0 && n.value() <= 1.0) {
                return Err(err(e.line, key, format!("{key} = {} is outside the range (0, 1]", e.value)));
            }
            *slot = n;
        }
    }
    if let Some(e) = get("model", "xmin") {
        c.xmin = e.number()?;
    }
    if let Some(e) = get("model", "xmax") {
        c.xmax = e.number()?;
        if c.xmax.value() <= c.xmin.value() {
            return Err(err(e.line, "xmax", "must exceed xmin"));
        }
    } else if c.xmax.value() <= c.xmin.value() {
        let line = get("model", "xmin").map_or(0, |e| e.line);
        return Err(err(line, "xmin", "must be below xmax"));
    }
    if let Some(e) = get("model", "M") {
        c.m = e.integer()?;
        if c.m < 2 || c.m % 2 != 0 {
            return Err(err(e.line, "M", format!("M must be even and at least 2, got {}", c.m)));
        }
    }

    let kind = get("potential", "kind").map(|e| (e.line, e.value.as_str())).unwrap_or((0, "rational"));
    c.potential = match kind.1 {
        "zero" => PotentialKind::Zero,
        "rational" => PotentialKind::Rational,
        "constant" => {
            let e = get("potential", "value").ok_or_else(|| err(kind.0, "kind", "constant potential needs `value`"))?;
            PotentialKind::Constant(e.number()?)
        }
        "honeycomb" => {
            let mode = match get("potential", "theta") {
                Some(e) => ThetaMode::parse(&e.value).map_err(|_| {
                    err(e.line, "theta", format!("expected constant, linear or cosine, got `{}`", e.value))
                })?,
                None => ThetaMode::Constant,
            };
            if c.dim != 2 {
                return Err(err(kind.0, "kind", "honeycomb potential needs dim = 2"));
            }
            PotentialKind::Honeycomb(mode)
        }
        other => return Err(err(kind.0, "kind", format!("unknown potential `{other}`"))),
    };
    for key in ["value", "theta"] {
        if let Some(e) = get("potential", key) {
            let used = matches!((key, &c.potential), ("value", PotentialKind::Constant(_)) | ("theta", PotentialKind::Honeycomb(_)));
            if !used {
                return Err(err(e.line, key, format!("not used by potential kind `{}`", kind.1)));
            }
        }
    }

    let ikind = get("initial", "kind").map(|e| (e.line, e.value.as_str())).unwrap_or((0, "gaussian"));
    c.initial = match ikind.1 {
        "gaussian" => {
            let InitialKind::Gaussian { center1, center2 } = c.initial.clone() else { unreachable!() };
            let mut centers = [center1, center2];
            for (k, key) in ["center1", "center2"].iter().enumerate() {
                if let Some(e) = get("initial", key) {
                    let v = e.numbers()?;
                    if v.len() != c.dim {
                        return Err(err(e.line, key, format!("needs {} coordinates", c.dim)));
                    }
                    centers[k] = v;
                }
            }
            let [center1, center2] = centers;
            InitialKind::Gaussian { center1, center2 }
        }
        "uniform" => {
            let v = |key: &str| get("initial", key).map(Entry::number).transpose().map(|n| n.unwrap_or(rat(1, 1)));
            InitialKind::Uniform { value1: v("value1")?, value2: v("value2")? }
        }
        other => return Err(err(ikind.0, "kind", format!("unknown initial condition `{other}`"))),
    };
    for key in ["center1", "center2", "value1", "value2"] {
        if let Some(e) = get("initial", key) {
            let gaussian = matches!(c.initial, InitialKind::Gaussian { .. });
            if gaussian != key.starts_with("center") {
                return Err(err(e.line, key, format!("not used by initial kind `{}`", ikind.1)));
            }
        }
    }

    let scheme_name = |e: &Entry, s: &str| -> Result<String> {
        catalog(s).map(|_| s.to_string()).map_err(|_| err(e.line, &e.key, format!("unknown scheme `{s}`")))
    };
    if let Some(e) = get("run", "scheme") {
        c.scheme = scheme_name(e, &e.value)?;
    }
    if let Some(e) = get("run", "tau") {
        c.tau = e.positive()?;
    }
    if let Some(e) = get("run", "t_final") {
        c.t_final = e.positive()?;
    }
    if let Some(e) = get("run", "workers") {
        c.workers = e.integer()?;
        if c.workers == 0 {
            return Err(err(e.line, "workers", "must be at least 1"));
        }
    }
    if let Some(e) = get("run", "seed") {
        c.seed = e.integer()?;
    }

    if let Some(e) = get("time", "schemes") {
        c.time_schemes = list(&e.value).into_iter().map(|s| scheme_name(e, s)).collect::<Result<_>>()?;
        if c.time_schemes.is_empty() {
            return Err(err(e.line, "schemes", "empty list"));
        }
    }
    if let Some(e) = get("time", "taus") {
        c.taus = e.numbers()?;
        if c.taus.iter().any(|t| t.value() <= 0.0) {
            return Err(err(e.line, "taus", "steps must be positive"));
        }
    }
    if let Some(e) = get("time", "tau0") {
        c.tau0 = e.positive()?;
    }
    if let Some(e) = get("time", "factor") {
        c.factor = e.integer()?;
        if c.factor < 2 {
            return Err(err(e.line, "factor", "must be at least 2"));
        }
    }
    if let Some(e) = get("time", "refinements") {
        c.refinements = e.integer()?;
        if c.refinements < 2 {
            return Err(err(e.line, "refinements", "need at least 2 refinements for a 3-point fit"));
        }
    }
    if let Some(e) = get("reference", "scheme") {
        c.reference_scheme = scheme_name(e, &e.value)?;
    }
    if let Some(e) = get("reference", "tau") {
        c.reference_tau = if e.value == "auto" { None } else { Some(e.positive()?) };
    }
    if let Some(e) = get("space", "sizes").filter(|e| e.value != "auto") {
        let sizes: Vec<usize> = list(&e.value)
            .iter()
            .map(|s| s.parse().map_err(|_| err(e.line, "sizes", format!("expected an integer, got `{s}`"))))
            .collect::<Result<_>>()?;
        if let Some(bad) = sizes.iter().find(|&&m| m < 2 || m % 2 != 0 || c.m % m != 0 || m == c.m) {
            return Err(err(e.line, "sizes", format!("{bad} must be even and a proper divisor of M = {}", c.m)));
        }
        c.space_sizes = sizes;
    }
    if let Some(e) = get("space", "tau") {
        c.space_tau = e.positive()?;
    }

    if let Some(e) = get("superres", "epsilons") {
        c.sr_epsilons = e.numbers()?;
        for n in &c.sr_epsilons {
            if n.rational().is_none() || !(n.value() > 0.0 && n.value() <= 1.0) {
                return Err(err(e.line, "epsilons", format!("{n} must be a rational in (0, 1]")));
            }
        }
    }
    if let Some(e) = get("superres", "tau0") {
        c.sr_tau0 = e.positive()?;
        if c.sr_tau0.rational().is_none() {
            return Err(err(e.line, "tau0", "must be an exact rational such as 1/4"));
        }
    }
    if let Some(e) = get("superres", "tau0_pi") {
        c.sr_tau0_pi = e.boolean()?;
    }
    if let Some(e) = get("superres", "t_final_pi") {
        c.sr_t_final_pi = e.boolean()?;
    }
    if let Some(e) = get("superres", "factor") {
        c.sr_factor = e.integer()?;
    }
    if let Some(e) = get("superres", "refinements") {
        c.sr_refinements = e.integer()?;
    }
    if let Some(e) = get("superres", "resonance") {
        c.sr_resonance = Resonance::parse(&e.value).map_err(|_| err(e.line, "resonance", "expected resonant or nonresonant"))?;
    }
    if let Some(e) = get("superres", "reference_tau") {
        c.sr_reference_tau = if e.value == "auto" { None } else { Some(e.positive()?) };
    }
    if get("superres", "epsilons").is_some() || c.sr_resonance == Resonance::Resonant {
        let line = entries.iter().filter(|((s, _), _)| s == "superres").map(|(_, e)| e.line).min().unwrap_or(0);
        c.sweep_spec().and_then(|s| s.validate()).map_err(|e| err(line, "superres", e.to_string()))?;
    }

    c.csv = get("output", "csv").and_then(Entry::text);
    c.dump = get("output", "dump").and_then(Entry::text);
    c.cache = get("output", "cache").and_then(Entry::text);

    let line_of = |s: &str, k: &str| get(s, k).map_or(0, |e| e.line);
    PhysParams::new(c.delta.value(), c.nu.value(), c.epsilon.value()).map_err(|e| err(line_of("model", "epsilon"), "model", e.to_string()))?;
    c.grid().map_err(|e| err(line_of("model", "M"), "M", e.to_string()))?;
    Ok(c)
}

fn join(v: &[Number]) -> String {
    v.iter().map(Number::to_string).collect::<Vec<_>>().join(", ")
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.dim, self.xmin.value(), self.xmax.value(), self.m)
    }

    pub fn params(&self) -> Result<PhysParams> {
        PhysParams::new(self.delta.value(), self.nu.value(), self.epsilon.value())
    }

    pub fn potential(&self) -> Potential {
        match &self.potential {
            PotentialKind::Zero => Potential::Constant(0.0),
            PotentialKind::Constant(v) => Potential::Constant(v.value()),
            PotentialKind::Rational => Potential::Rational,
            PotentialKind::Honeycomb(m) => Potential::Honeycomb(*m),
        }
    }

    pub fn problem(&self) -> Result<Problem> {
        let initial = match &self.initial {
            InitialKind::Gaussian { center1, center2 } => InitialCondition::Gaussian {
                centers: [center1.iter().map(Number::value).collect(), center2.iter().map(Number::value).collect()],
            },
            InitialKind::Uniform { value1, value2 } => InitialCondition::Uniform([value1.value(), value2.value()]),
        };
        Ok(Problem {
            params: self.params()?,
            grid: self.grid()?,
            potential: self.potential(),
            initial,
            t_final: self.t_final.value(),
        })
    }

    /// Steps for `converge-time`.
    pub fn study_taus(&self) -> Vec<f64> {
        if !self.taus.is_empty() {
            return self.taus.iter().map(Number::value).collect();
        }
        (0..=self.refinements as i32).map(|k| self.tau0.value() / (self.factor as f64).powi(k)).collect()
    }

    pub fn study_schemes(&self) -> Vec<String> {
        if self.time_schemes.is_empty() {
            vec![self.scheme.clone()]
        } else {
            self.time_schemes.clone()
        }
    }

    pub fn resolved_sizes(&self) -> Vec<usize> {
        if !self.space_sizes.is_empty() {
            return self.space_sizes.clone();
        }
        [16, 8, 4, 2].iter().map(|d| self.m / d).filter(|&m| m >= 2 && m % 2 == 0 && self.m % m == 0).collect()
    }

    /// Reference step: the configured one, or the largest `t_final / n` at most 1/8 of the smallest study step.
    pub fn resolved_reference_tau(&self) -> f64 {
        if let Some(t) = self.reference_tau {
            return t.value();
        }
        let t = self.t_final.value();
        let min = self.study_taus().into_iter().fold(f64::INFINITY, f64::min);
        t / (t * 8.0 / min * (1.0 - 1e-12)).ceil()
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let (xmin, xmax) = (self.xmin.value(), self.xmax.value());
        Ok(SweepSpec {
            scheme: self.scheme.clone(),
            epsilons: self
                .sr_epsilons
                .iter()
                .map(|n| n.rational().ok_or_else(|| Error::Sweep(format!("epsilon {n} is not rational"))))
                .collect::<Result<_>>()?,
            tau0: self.sr_tau0.rational().ok_or_else(|| Error::Sweep("tau0 is not rational".into()))?,
            tau0_pi: self.sr_tau0_pi,
            factor: self.sr_factor,
            refinements: self.sr_refinements,
            resonance: self.sr_resonance,
            t_final: self.t_final.value() * if self.sr_t_final_pi { std::f64::consts::PI } else { 1.0 },
            domain: (xmin, xmax),
            m: self.m,
            reference_scheme: self.reference_scheme.clone(),
            reference_tau: self.sr_reference_tau.map(|n| n.value()),
        })
    }

    /// The fully resolved configuration in parseable form.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        let mut section = |name: &str, kv: Vec<(&str, String)>| {
            out.push_str(&format!("[{name}]\n"));
            for (k, v) in kv {
                out.push_str(&format!("{k} = {v}\n"));
            }
        };
        section(
            "model",
            vec![
                ("dim", self.dim.to_string()),
                ("delta", self.delta.to_string()),
                ("nu", self.nu.to_string()),
                ("epsilon", self.epsilon.to_string()),
                ("xmin", self.xmin.to_string()),
                ("xmax", self.xmax.to_string()),
                ("M", self.m.to_string()),
            ],
        );
        let pot = match &self.potential {
            PotentialKind::Zero => vec![("kind", "zero".to_string())],
            PotentialKind::Constant(v) => vec![("kind", "constant".into()), ("value", v.to_string())],
            PotentialKind::Rational => vec![("kind", "rational".into())],
            PotentialKind::Honeycomb(m) => vec![("kind", "honeycomb".into()), ("theta", m.name().into())],
        };
        section("potential", pot);
        let init = match &self.initial {
            InitialKind::Gaussian { center1, center2 } => {
                vec![("kind", "gaussian".to_string()), ("center1", join(center1)), ("center2", join(center2))]
            }
            InitialKind::Uniform { value1, value2 } => {
                vec![("kind", "uniform".into()), ("value1", value1.to_string()), ("value2", value2.to_string())]
            }
        };
        section("initial", init);
        section(
            "run",
            vec![
                ("scheme", self.scheme.clone()),
                ("tau", self.tau.to_string()),
                ("t_final", self.t_final.to_string()),
                ("workers", self.workers.to_string()),
                ("seed", self.seed.to_string()),
            ],
        );
        let mut time = Vec::new();
        if !self.time_schemes.is_empty() {
            time.push(("schemes", self.time_schemes.join(", ")));
        }
        if !self.taus.is_empty() {
            time.push(("taus", join(&self.taus)));
        }
        time.extend([
            ("tau0", self.tau0.to_string()),
            ("factor", self.factor.to_string()),
            ("refinements", self.refinements.to_string()),
        ]);
        section("time", time);
        let opt = |n: &Option<Number>| n.map_or("auto".to_string(), |n| n.to_string());
        section("reference", vec![("scheme", self.reference_scheme.clone()), ("tau", opt(&self.reference_tau))]);
        section(
            "space",
            vec![
                (
                    "sizes",
                    if self.space_sizes.is_empty() {
                        "auto".to_string()
                    } else {
                        self.space_sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
                    },
                ),
                ("tau", self.space_tau.to_string()),
            ],
        );
        section(
            "superres",
            vec![
                ("epsilons", join(&self.sr_epsilons)),
                ("tau0", self.sr_tau0.to_string()),
                ("tau0_pi", self.sr_tau0_pi.to_string()),
                ("t_final_pi", self.sr_t_final_pi.to_string()),
                ("factor", self.sr_factor.to_string()),
                ("refinements", self.sr_refinements.to_string()),
                ("resonance", self.sr_resonance.name().to_string()),
                ("reference_tau", opt(&self.sr_reference_tau)),
            ],
        );
        let path = |p: &Option<String>| p.clone().unwrap_or_default();
        section(
            "output",
            vec![("csv", path(&self.csv)), ("dump", path(&self.dump)), ("cache", path(&self.cache))],
        );
        out
    }

    /// SHA-256 of [`RunConfig::echo`], hex encoded.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        Sha256::digest(self.echo().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}
