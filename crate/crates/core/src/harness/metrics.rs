
use crate::error::Result;
use crate::model::SpinorField;

/// Discrete l2 errors of the wave function, density and current.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Metrics {
    pub e_phi: f64,
    pub e_rho: f64,
    pub e_j: f64,
}

impl Metrics {
    pub fn get(&self, k: usize) -> f64 {
        [self.e_phi, self.e_rho, self.e_j][k]
    }

    pub fn map(self, f: impl Fn(f64) -> f64) -> Self {
        Self { e_phi: f(self.e_phi), e_rho: f(self.e_rho), e_j: f(self.e_j) }
    }

    pub fn zip(self, o: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self { e_phi: f(self.e_phi, o.e_phi), e_rho: f(self.e_rho, o.e_rho), e_j: f(self.e_j, o.e_j) }
    }
}

pub const METRIC_NAMES: [&str; 3] = ["e_phi", "e_rho", "e_J"];

/// Errors of `numeric` against `reference` on the same grid.
///
/// `e_J` uses the current components `k = 1..dim`.
pub fn error_metrics(numeric: &SpinorField, reference: &SpinorField) -> Result<Metrics> {
    let grid = *reference.grid();
    grid.ensure_same(numeric.grid())?;
    let (mut s_phi, mut s_rho, mut s_j) = (0.0, 0.0, 0.0);
    let (np, nq) = (numeric.component(0), numeric.component(1));
    let (rp, rq) = (reference.component(0), reference.component(1));
    for i in 0..grid.len() {
        let (dp, dq) = (np[i] - rp[i], nq[i] - rq[i]);
        s_phi += dp.norm_sqr() + dq.norm_sqr();
        // differences formed without cancellation: |a|^2 - |b|^2 = Re((a - b) conj(a + b))
        let d_rho = (dp * (np[i] + rp[i]).conj()).re + (dq * (nq[i] + rq[i]).conj()).re;
        s_rho += d_rho * d_rho;
        // J_k = Phi^* sigma_k Phi, so J_1 + i J_2 = 2 conj(p) q
        let d_j = 2.0 * (dp.conj() * nq[i] + rp[i].conj() * dq);
        s_j += d_j.re * d_j.re;
        if grid.dim() == 2 {
            s_j += d_j.im * d_j.im;
        }
    }
    let w = grid.cell_volume();
    Ok(Metrics { e_phi: (w * s_phi).sqrt(), e_rho: (w * s_rho).sqrt(), e_j: (w * s_j).sqrt() })
}

/// The three norms of a single field (its metrics against zero).
pub fn field_norms(field: &SpinorField) -> Metrics {
    error_metrics(field, &SpinorField::zeros(*field.grid())).expect("same grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{gaussian_ic, Grid};
    use num_complex::Complex64;

    #[test]
    fn identical_and_phase_shifted() {
        let grid = Grid::new(2, -4.0, 4.0, 16).unwrap();
        let f = gaussian_ic(&grid, [&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(error_metrics(&f, &f).unwrap(), Metrics::default());
        let mut g = f.clone();
        g.scale(Complex64::from_polar(1.0, 0.7));
        let m = error_metrics(&g, &f).unwrap();
        assert!(m.e_phi > 0.1);
        assert!(m.e_rho <= 1e-15 && m.e_j <= 1e-15);
    }

    #[test]
    fn small_example() {
        let grid = Grid::new(1, 0.0, 1.0, 2).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let a = SpinorField::from_components(grid, vec![one, zero], vec![zero, one]).unwrap();
        let b = SpinorField::from_components(grid, vec![zero, zero], vec![zero, one]).unwrap();
        let m = error_metrics(&a, &b).unwrap();
        assert!((m.e_phi - 0.5f64.sqrt()).abs() < 1e-16);
        assert!((m.e_rho - 0.5f64.sqrt()).abs() < 1e-16);
        assert_eq!(m.e_j, 0.0);
        let n = field_norms(&a);
        assert!((n.e_phi - 1.0).abs() < 1e-16);
    }

    #[test]
    fn grid_mismatch() {
        let a = SpinorField::zeros(Grid::new(1, 0.0, 1.0, 4).unwrap());
        let b = SpinorField::zeros(Grid::new(1, 0.0, 1.0, 8).unwrap());
        assert!(error_metrics(&a, &b).is_err());
    }
}
