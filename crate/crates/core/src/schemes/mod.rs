//! Splitting schemes as programs of exponential steps.
//!
//! A program is stored left to right in operator-product order, so
//! `e^{aW} e^{bT} e^{cW}` is `[W(a), T(b), W(c)]`. Execution runs right to
//! left. Every W step carries the time offset at which the potential is
//! sampled: the sum of T coefficients executed before it.

mod catalog;
mod evolve;

pub use catalog::{catalog, constant, constant_text, constants, parse_constants, CATALOG_NAMES};
pub use evolve::{evolve, step, Evolver};

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    T,
    W,
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpKind::T => "T",
            OpKind::W => "W",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeStep {
    pub kind: OpKind,
    /// Multiple of `tau`.
    pub coeff: f64,
    /// Fraction of `tau` added to `t_n` when sampling the potential (W only).
    pub time_offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSpec {
    name: String,
    steps: Vec<SchemeStep>,
    declared_order: u32,
    symmetric: bool,
}

const SUM_TOL: f64 = 1e-14;
const OFFSET_TOL: f64 = 1e-12;

impl SchemeSpec {
    /// Builds a spec from raw `(kind, coeff)` factors in product order.
    ///
    /// Adjacent factors of the same kind are fused and time offsets filled in.
    pub fn from_program(
        name: &str,
        program: &[(OpKind, f64)],
        declared_order: u32,
        symmetric: bool,
    ) -> Result<Self> {
        let mut fused: Vec<(OpKind, f64)> = Vec::with_capacity(program.len());
        for &(kind, coeff) in program {
            if !coeff.is_finite() {
                return Err(Error::InvalidScheme(format!("{name}: non-finite coefficient")));
            }
            match fused.last_mut() {
                Some(last) if last.0 == kind => last.1 += coeff,
                _ => fused.push((kind, coeff)),
            }
        }
        let mut steps = vec![
            SchemeStep { kind: OpKind::T, coeff: 0.0, time_offset: 0.0 };
            fused.len()
        ];
        let mut elapsed = 0.0;
        for (i, &(kind, coeff)) in fused.iter().enumerate().rev() {
            steps[i] = SchemeStep { kind, coeff, time_offset: if kind == OpKind::W { elapsed } else { 0.0 } };
            if kind == OpKind::T {
                elapsed += coeff;
            }
        }
        let spec = Self { name: name.to_string(), steps, declared_order, symmetric };
        spec.validate()?;
        Ok(spec)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Steps in product order; the last one acts first.
    pub fn steps(&self) -> &[SchemeStep] {
        &self.steps
    }

    pub fn declared_order(&self) -> u32 {
        self.declared_order
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn sum_coeffs(&self, kind: OpKind) -> f64 {
        self.steps.iter().filter(|s| s.kind == kind).map(|s| s.coeff).sum()
    }

    /// Checks the consistency, palindrome and time-ordering invariants.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidScheme(format!("{}: {msg}", self.name)));
        if self.steps.is_empty() {
            return fail("empty program".into());
        }
        for kind in [OpKind::T, OpKind::W] {
            let s = self.sum_coeffs(kind);
            if (s - 1.0).abs() > SUM_TOL {
                return fail(format!("{kind} coefficients sum to {s:e}, expected 1"));
            }
        }
        if self.steps.windows(2).any(|w| w[0].kind == w[1].kind) {
            return fail("adjacent steps of the same kind are not fused".into());
        }
        if self.symmetric {
            let n = self.steps.len();
            for i in 0..n / 2 {
                let (a, b) = (self.steps[i], self.steps[n - 1 - i]);
                if a.kind != b.kind || (a.coeff - b.coeff).abs() > SUM_TOL {
                    return fail(format!("not palindromic at position {i}"));
                }
            }
        }
        let mut elapsed = 0.0;
        for s in self.steps.iter().rev() {
            if !s.coeff.is_finite() || !s.time_offset.is_finite() {
                return fail("non-finite entry".into());
            }
            match s.kind {
                OpKind::T => elapsed += s.coeff,
                OpKind::W if (s.time_offset - elapsed).abs() > OFFSET_TOL => {
                    return fail(format!("W offset {} breaks the time-ordering rule", s.time_offset));
                }
                OpKind::W => {}
            }
        }
        Ok(())
    }

    /// Number of fused T and W exponentials per step.
    pub fn op_count(&self) -> (usize, usize) {
        let t = self.steps.iter().filter(|s| s.kind == OpKind::T).count();
        (t, self.steps.len() - t)
    }

    /// Raw `(kind, coeff)` factors scaled by `s`, for building compositions.
    pub fn scaled_program(&self, s: f64) -> Vec<(OpKind, f64)> {
        self.steps.iter().map(|st| (st.kind, st.coeff * s)).collect()
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(|s| format!("{}({})", s.kind, s.coeff)).collect();
        write!(f, "{}: {}", self.name, parts.join(" "))
    }
}

/// `(nT, nW)` for a spec.
pub fn op_count(spec: &SchemeSpec) -> (usize, usize) {
    spec.op_count()
}

/// Published sixth-order exponential counts `(name, nT, nW)`.
pub const PUBLISHED_COUNTS: [(&str, usize, usize); 3] = [("S6star", 25, 26), ("S6-A", 9, 10), ("S6c", 4, 5)];

/// Note for schemes whose fused count differs from the published one.
pub fn count_note(spec: &SchemeSpec) -> Option<String> {
    let base = spec.name().split_once('-').map_or(spec.name(), |(b, _)| b);
    let (_, t, w) = PUBLISHED_COUNTS.iter().find(|(n, _, _)| *n == spec.name() || (base == "S6" && *n == "S6-A"))?;
    let (ft, fw) = spec.op_count();
    ((ft, fw) != (*t, *w)).then(|| {
        format!(
            "{}: fused count T={ft} W={fw} differs from the published T={t} W={w}",
            spec.name()
        )
    })
}
