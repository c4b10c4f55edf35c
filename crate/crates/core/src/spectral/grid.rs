use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

/// Discretization of the periodic box `[-L, L)^dim` and of the time window
/// `[-T, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    dim: usize,
    points_per_axis: usize,
    half_width: f64,
    time_samples: usize,
    time_horizon: f64,
}

impl GridSpec {
    pub fn new(
        dim: usize,
        points_per_axis: usize,
        half_width: f64,
        time_samples: usize,
        time_horizon: f64,
    ) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Grid(format!(
                "dimension must be 1, 2 or 3, got {dim}"
            )));
        }
        if points_per_axis < 8 || !points_per_axis.is_power_of_two() {
            return Err(Error::Grid(format!(
                "points_per_axis must be a power of two >= 8, got {points_per_axis}"
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Grid(format!(
                "half_width must be positive, got {half_width}"
            )));
        }
        if !(time_horizon > 0.0 && time_horizon.is_finite()) {
            return Err(Error::Grid(format!(
                "time_horizon must be positive, got {time_horizon}"
            )));
        }
        if time_samples < 2 {
            return Err(Error::Grid(format!(
                "time_samples must be at least 2, got {time_samples}"
            )));
        }
        Ok(GridSpec {
            dim,
            points_per_axis,
            half_width,
            time_samples,
            time_horizon,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn time_samples(&self) -> usize {
        self.time_samples
    }

    pub fn time_horizon(&self) -> f64 {
        self.time_horizon
    }

    /// Number of grid nodes, `Nⁿ`.
    pub fn node_count(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    /// Grid spacing `Δx = 2L/N`.
    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    /// Frequency spacing `Δξ = π/L`.
    pub fn dxi(&self) -> f64 {
        PI / self.half_width
    }

    /// `Δxⁿ`, the quadrature weight of one node.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// `(Δξ/2π)ⁿ`, the Parseval weight of one frequency mode.
    pub fn mode_weight(&self) -> f64 {
        (self.dxi() / (2.0 * PI)).powi(self.dim as i32)
    }

    /// Coordinate `-L + jΔx` of index `j` along any axis.
    pub fn coordinate(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    /// Physical coordinates of a flat node index (unused axes are zero).
    pub fn node(&self, index: usize) -> [f64; 3] {
        let n = self.points_per_axis;
        let mut x = [0.0; 3];
        let mut rest = index;
        for axis in (0..self.dim).rev() {
            x[axis] = self.coordinate(rest % n);
            rest /= n;
        }
        x
    }

    /// Flat index of the node at the origin (`j = N/2` on every axis).
    pub fn origin_index(&self) -> usize {
        let n = self.points_per_axis;
        (0..self.dim).fold(0, |acc, _| acc * n + n / 2)
    }

    /// Time step of the uniform sampling of `[-T, T]`.
    pub fn time_step(&self) -> f64 {
        2.0 * self.time_horizon / (self.time_samples - 1) as f64
    }

    /// The `M` uniform samples of `[-T, T]`, endpoints included.
    pub fn times(&self) -> Vec<f64> {
        let dt = self.time_step();
        (0..self.time_samples)
            .map(|i| {
                if i + 1 == self.time_samples {
                    self.time_horizon
                } else {
                    -self.time_horizon + i as f64 * dt
                }
            })
            .collect()
    }

    /// Trapezoid weights matching [`GridSpec::times`].
    pub fn time_weights(&self) -> Vec<f64> {
        let dt = self.time_step();
        let mut w = vec![dt; self.time_samples];
        w[0] = 0.5 * dt;
        w[self.time_samples - 1] = 0.5 * dt;
        w
    }

    /// Index of the sample at `t = 0`, present when `M` is odd.
    pub fn time_origin_index(&self) -> Option<usize> {
        (self.time_samples % 2 == 1).then_some(self.time_samples / 2)
    }

    /// The grid for data dilated by `λ`: box and time window shrink by `1/λ`
    /// so that `x ↦ λx` maps nodes onto nodes.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Parameter(format!(
                "dilation must be positive, got {lambda}"
            )));
        }
        GridSpec::new(
            self.dim,
            self.points_per_axis,
            self.half_width / lambda,
            self.time_samples,
            self.time_horizon / lambda,
        )
    }

    pub fn with_points_per_axis(&self, points_per_axis: usize) -> Result<Self> {
        GridSpec::new(
            self.dim,
            points_per_axis,
            self.half_width,
            self.time_samples,
            self.time_horizon,
        )
    }

    pub fn with_time_samples(&self, time_samples: usize) -> Result<Self> {
        GridSpec::new(
            self.dim,
            self.points_per_axis,
            self.half_width,
            time_samples,
            self.time_horizon,
        )
    }

    /// Wrap-around margin `L - (r + c·T)` for data supported in `|x| < r`
    /// travelling at speed at most `c`; positive means the solution stays
    /// inside the box over the whole time window.
    pub fn wraparound_margin(&self, support_radius: f64, max_speed: f64) -> f64 {
        self.half_width - (support_radius + max_speed * self.time_horizon)
    }
}
