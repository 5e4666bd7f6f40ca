use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{LabError, Result};

/// Forward/inverse FFT plans of one size.
#[derive(Clone)]
pub(crate) struct FftPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftPair {
    fn new(planner: &mut FftPlanner<f64>, len: usize) -> Self {
        FftPair {
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    /// Unnormalized forward transform, in place.
    pub(crate) fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// Unnormalized inverse transform, in place.
    pub(crate) fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
    }
}

/// Periodic grid on `[0, L)` with `n` equispaced points.
///
/// Coefficient storage everywhere in the crate uses FFT order: index `i`
/// holds mode `k = i` for `i < n/2` and `k = i - n` otherwise. The ordered
/// wavenumber list `-n/2 .. n/2-1` is available from [`Grid::wavenumbers`].
#[derive(Clone)]
pub struct Grid {
    n: usize,
    length: f64,
    dx: f64,
    dxi: f64,
    xi: Arc<[f64]>,
    plans: FftPair,
    padded: FftPair,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n_points", &self.n)
            .field("box_length", &self.length)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length.to_bits() == other.length.to_bits()
    }
}

/// Builds a periodic grid; `n_points` must be a power of two no smaller than 8.
pub fn make_grid(n_points: usize, box_length: f64) -> Result<Grid> {
    Grid::new(n_points, box_length)
}

impl Grid {
    pub fn new(n_points: usize, box_length: f64) -> Result<Self> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(LabError::config(format!(
                "n_points must be a power of two >= 8, got {n_points}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(LabError::config(format!(
                "box_length must be positive and finite, got {box_length}"
            )));
        }
        let dxi = 2.0 * PI / box_length;
        let xi: Arc<[f64]> = (0..n_points)
            .map(|i| mode_of_index(i, n_points) as f64 * dxi)
            .collect();
        let mut planner = FftPlanner::new();
        let plans = FftPair::new(&mut planner, n_points);
        let padded = FftPair::new(&mut planner, 2 * n_points);
        Ok(Grid {
            n: n_points,
            length: box_length,
            dx: box_length / n_points as f64,
            dxi,
            xi,
            plans,
            padded,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Wavenumber spacing `2π/L`.
    pub fn dxi(&self) -> f64 {
        self.dxi
    }

    /// Wavenumbers in storage (FFT) order.
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// Wavenumbers ordered `k = -n/2 ..= n/2-1`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let half = (self.n / 2) as i64;
        (-half..half).map(|k| k as f64 * self.dxi).collect()
    }

    /// Sample positions `x_m = m·dx`.
    pub fn x(&self) -> Vec<f64> {
        (0..self.n).map(|m| m as f64 * self.dx).collect()
    }

    /// Positions relative to the box centre, `x_m - L/2`.
    pub fn x_centered(&self) -> Vec<f64> {
        let c = 0.5 * self.length;
        (0..self.n).map(|m| m as f64 * self.dx - c).collect()
    }

    /// Storage index of integer mode `k`, if it is on the grid.
    pub fn index_of_mode(&self, k: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k < -half || k >= half {
            return None;
        }
        Some(if k >= 0 { k as usize } else { (k + self.n as i64) as usize })
    }

    pub fn mode_of_index(&self, i: usize) -> i64 {
        mode_of_index(i, self.n)
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    pub(crate) fn plans(&self) -> &FftPair {
        &self.plans
    }

    pub(crate) fn padded_plans(&self) -> &FftPair {
        &self.padded
    }

    /// Coefficient scale: `coeff = forward_scale · FFT(u)`.
    pub(crate) fn forward_scale(&self) -> f64 {
        self.dx / (2.0 * PI).sqrt()
    }

    /// Physical scale: `u = inverse_scale · IFFT_unnormalized(coeff)`.
    pub(crate) fn inverse_scale(&self) -> f64 {
        self.dxi / (2.0 * PI).sqrt()
    }
}

pub(crate) fn mode_of_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}
