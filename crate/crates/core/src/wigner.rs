//! Wigner functions sampled on rectangular phase-space grids, plus negativity
//! statistics.

use std::f64::consts::FRAC_2_PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{ComplexPoint, FockVector, TailPolicy};
use crate::hcs::{build_hcs_fock, wigner_closed, HcsParams};
use crate::phase_space::wigner_point_oracle;

/// Closed interval bounds and node counts of a grid; nodes include both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl GridBounds {
    pub fn new(x_min: f64, x_max: f64, p_min: f64, p_max: f64, nx: usize, np: usize) -> Result<Self> {
        if nx < 2 || np < 2 {
            return Err(Error::invalid(format!("grid needs at least 2×2 nodes, got {nx}×{np}")));
        }
        let ordered = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ordered(x_min, x_max) || !ordered(p_min, p_max) {
            return Err(Error::invalid("grid bounds must be finite with min < max"));
        }
        Ok(Self { x_min, x_max, p_min, p_max, nx, np })
    }

    /// Square grid of `n×n` nodes spanning `center ± half_width`.
    pub fn centered(center: ComplexPoint, half_width: f64, n: usize) -> Result<Self> {
        Self::new(center.re - half_width, center.re + half_width, center.im - half_width, center.im + half_width, n, n)
    }

    /// `[α_x−4, α_x+4] × [α_p−4, α_p+4]` at 161×161.
    pub fn default_for(alpha: ComplexPoint) -> Self {
        Self::centered(alpha, 4.0, 161).expect("default grid is valid")
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WignerMethod {
    ClosedForm,
    ParityOracle,
}

#[derive(Debug, Clone, Copy)]
pub enum WignerSource<'a> {
    Params(&'a HcsParams),
    State(&'a FockVector),
}

/// Wigner values on a grid, stored row-major in `x`: `values[i * np + j] = W(x_i, p_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub bounds: GridBounds,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.bounds.np + j]
    }

    pub fn point(&self, i: usize, j: usize) -> ComplexPoint {
        ComplexPoint::new(self.bounds.x(i), self.bounds.p(j))
    }

    pub fn cell_area(&self) -> f64 {
        self.bounds.dx() * self.bounds.dp()
    }

    /// Riemann sum `Σ W dx dp`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `(x, p, W)` triples in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let np = self.bounds.np;
        self.values.iter().enumerate().map(move |(k, &w)| (self.bounds.x(k / np), self.bounds.p(k % np), w))
    }
}

/// Fills a grid by the chosen method. The closed form needs hybrid-state parameters.
pub fn wigner_grid(
    source: WignerSource<'_>,
    bounds: GridBounds,
    method: WignerMethod,
    policy: TailPolicy,
) -> Result<WignerGrid> {
    let rows: Vec<Vec<f64>> = match (method, source) {
        (WignerMethod::ClosedForm, WignerSource::Params(params)) => {
            // fail fast on degenerate parameters before going parallel
            wigner_closed(params, ComplexPoint::ORIGIN)?;
            (0..bounds.nx)
                .into_par_iter()
                .map(|i| {
                    (0..bounds.np)
                        .map(|j| wigner_closed(params, ComplexPoint::new(bounds.x(i), bounds.p(j))))
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<_>>()?
        }
        (WignerMethod::ClosedForm, WignerSource::State(_)) => {
            return Err(Error::invalid("the closed-form Wigner function needs hybrid-state parameters"));
        }
        (WignerMethod::ParityOracle, source) => {
            let owned;
            let state = match source {
                WignerSource::State(s) => s,
                WignerSource::Params(params) => {
                    owned = build_hcs_fock(params, params.cutoff(), policy)?;
                    &owned
                }
            };
            (0..bounds.nx)
                .into_par_iter()
                .map(|i| {
                    (0..bounds.np)
                        .map(|j| wigner_point_oracle(state, ComplexPoint::new(bounds.x(i), bounds.p(j)), policy))
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<_>>()?
        }
    };
    let grid = WignerGrid { bounds, values: rows.into_iter().flatten().collect() };
    debug_assert!(grid.max_abs() <= FRAC_2_PI + 1e-9);
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    pub min_value: f64,
    pub min_location: ComplexPoint,
    /// `∫ (|W| − W)/2 dx dp` by the rectangle rule on the grid nodes.
    pub negative_volume: f64,
}

pub fn negativity_report(grid: &WignerGrid) -> NegativityReport {
    let (k_min, min_value) =
        grid.values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (k, w)| if w < best.1 { (k, w) } else { best });
    let np = grid.bounds.np;
    let negative: f64 = grid.values.iter().map(|w| 0.5 * (w.abs() - w)).sum();
    NegativityReport {
        min_value,
        min_location: grid.point(k_min / np, k_min % np),
        negative_volume: negative * grid.cell_area(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn closed(params: &HcsParams, bounds: GridBounds) -> WignerGrid {
        wigner_grid(WignerSource::Params(params), bounds, WignerMethod::ClosedForm, TailPolicy::Strict).unwrap()
    }

    #[test]
    fn bounds_validation() {
        assert!(GridBounds::new(0.0, 1.0, 0.0, 1.0, 1, 5).is_err());
        assert!(GridBounds::new(1.0, 0.0, 0.0, 1.0, 5, 5).is_err());
        let b = GridBounds::default_for(ComplexPoint::new(1.0, -2.0));
        assert_eq!((b.nx, b.np), (161, 161));
        assert!((b.dx() - 0.05).abs() < 1e-15);
        assert!((b.x(80) - 1.0).abs() < 1e-12 && (b.p(80) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn vacuum_grid_peak_and_integral() {
        let p = HcsParams::coherent(ComplexPoint::ORIGIN);
        let grid = closed(&p, GridBounds::default_for(ComplexPoint::ORIGIN));
        assert!((grid.value(80, 80) - FRAC_2_PI).abs() < 1e-15);
        assert!((grid.integral() - 1.0).abs() < 1e-3);
        assert!(negativity_report(&grid).negative_volume.abs() < 1e-10);
    }

    #[test]
    fn single_photon_ring() {
        let p = HcsParams::photon_added(ComplexPoint::ORIGIN);
        let grid = closed(&p, GridBounds::default_for(ComplexPoint::ORIGIN));
        let report = negativity_report(&grid);
        assert!((report.min_value + FRAC_2_PI).abs() < 1e-15);
        assert!(report.min_location.norm() < 1e-12);
        assert!((grid.integral() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn displaced_photon_dip_near_alpha() {
        let p = HcsParams::new(0.5, PI, 0.0, ComplexPoint::real(1.0)).unwrap();
        let grid = closed(&p, GridBounds::default_for(p.alpha));
        let report = negativity_report(&grid);
        assert!((report.min_value + FRAC_2_PI).abs() < 1e-3);
        assert!((report.min_location.re - 1.0).abs() < 0.06 && report.min_location.im.abs() < 0.06);
    }

    #[test]
    fn closed_form_rejects_bare_state() {
        let v = FockVector::vacuum(10);
        let bounds = GridBounds::centered(ComplexPoint::ORIGIN, 2.0, 5).unwrap();
        assert!(wigner_grid(WignerSource::State(&v), bounds, WignerMethod::ClosedForm, TailPolicy::Strict).is_err());
    }

    #[test]
    fn methods_agree_on_small_grid() {
        let p = HcsParams::new(0.75, PI, 0.0, ComplexPoint::real(2.0)).unwrap();
        let bounds = GridBounds::centered(p.alpha, 5.0, 21).unwrap();
        let a = closed(&p, bounds);
        let b = wigner_grid(WignerSource::Params(&p), bounds, WignerMethod::ParityOracle, TailPolicy::Strict).unwrap();
        let worst = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
        assert!(negativity_report(&a).negative_volume > 0.0);
    }
}
