use super::{ComplexMatrix, Field, FrequencyLattice, GridSpec, SpectralField, Xi};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

/// In-place unnormalized n-D DFT of one row-major slab, axis by axis.
fn fft_slab(slab: &mut [Complex64], grid: &GridSpec, fft: &Arc<dyn Fft<f64>>) {
    let n = grid.points_per_axis();
    let dim = grid.dim();
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    // Last axis is contiguous.
    fft.process_with_scratch(slab, &mut scratch);
    if dim == 1 {
        return;
    }
    let mut lines = vec![Complex64::new(0.0, 0.0); slab.len()];
    for axis in 0..dim - 1 {
        let stride = n.pow((dim - 1 - axis) as u32);
        let block = stride * n;
        // Gather every line along `axis` into consecutive rows of `lines`.
        let mut row = 0;
        for base in (0..slab.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (j, dst) in lines[row * n..(row + 1) * n].iter_mut().enumerate() {
                    *dst = slab[start + j * stride];
                }
                row += 1;
            }
        }
        fft.process_with_scratch(&mut lines, &mut scratch);
        let mut row = 0;
        for base in (0..slab.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (j, src) in lines[row * n..(row + 1) * n].iter().enumerate() {
                    slab[start + j * stride] = *src;
                }
                row += 1;
            }
        }
    }
}

/// `(-1)^{k_0 + … + k_{n-1}}` for the flat index `i`; equals `(-1)^{Σm}`
/// because `N` is even.
fn checkerboard(i: usize, grid: &GridSpec) -> f64 {
    let n = grid.points_per_axis();
    let mut rest = i;
    let mut parity = 0;
    for _ in 0..grid.dim() {
        parity += rest % n;
        rest /= n;
    }
    if parity % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn plan(grid: &GridSpec, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft(grid.points_per_axis(), direction)
}

fn transform_slabs(
    data: &mut [Complex64],
    grid: &GridSpec,
    direction: FftDirection,
    scale: f64,
    phase_before: bool,
) {
    let fft = plan(grid, direction);
    let len = grid.node_count();
    data.par_chunks_mut(len).for_each(|slab| {
        if phase_before {
            for (i, v) in slab.iter_mut().enumerate() {
                *v *= checkerboard(i, grid);
            }
        }
        fft_slab(slab, grid, &fft);
        for (i, v) in slab.iter_mut().enumerate() {
            let sign = if phase_before {
                1.0
            } else {
                checkerboard(i, grid)
            };
            *v *= sign * scale;
        }
    });
}

/// `f̂(ξ) = Δxⁿ Σ_x f(x) e^{-ix·ξ}` on every lattice mode.
pub fn forward_transform(f: &Field) -> SpectralField {
    let grid = *f.grid();
    let mut data = f.values().to_vec();
    transform_slabs(
        &mut data,
        &grid,
        FftDirection::Forward,
        grid.cell_volume(),
        false,
    );
    SpectralField::from_coeffs(&grid, f.components(), data).expect("length preserved")
}

/// `f(x) = (2π)^{-n} Δξⁿ Σ_ξ f̂(ξ) e^{ix·ξ}` on every node.
pub fn inverse_transform(f: &SpectralField) -> Field {
    let grid = *f.grid();
    let mut data = f.coeffs().to_vec();
    let scale = (2.0 * grid.half_width()).powi(-(grid.dim() as i32));
    transform_slabs(&mut data, &grid, FftDirection::Inverse, scale, true);
    Field::from_values(&grid, f.components(), data).expect("length preserved")
}

/// Per-mode product `m(ξ) F(ξ)` with an `n×n` matrix symbol.
pub fn apply_multiplier<M>(f: &SpectralField, symbol: M) -> Result<SpectralField>
where
    M: Fn(&Xi) -> ComplexMatrix + Sync,
{
    if !f.is_vector() {
        return Err(Error::Shape {
            what: "vector field for matrix multiplier",
            expected: f.grid().dim(),
            actual: f.components(),
        });
    }
    Ok(map_modes(f, |_, xi, v| symbol(xi).mul_vec(v)))
}

/// Applies `op(index, ξ, F(ξ))` to every mode; `op` sees the first
/// `components` entries and returns the new vector in the same slots.
pub fn map_modes<M>(f: &SpectralField, op: M) -> SpectralField
where
    M: Fn(usize, &Xi, &[Complex64]) -> [Complex64; 3] + Sync,
{
    let lattice = FrequencyLattice::new(f.grid());
    let components = f.components();
    let products: Vec<[Complex64; 3]> = (0..lattice.len())
        .into_par_iter()
        .map(|i| op(i, &lattice.xi(i), &f.vector_at(i)[..components]))
        .collect();
    let mut out = SpectralField::zeros(f.grid(), components);
    for (i, v) in products.iter().enumerate() {
        out.set_vector_at(i, &v[..components]);
    }
    out
}

/// Per-mode product with a scalar symbol, applied to every component.
pub fn apply_scalar_multiplier<M>(f: &SpectralField, symbol: M) -> SpectralField
where
    M: Fn(&Xi) -> Complex64 + Sync,
{
    let lattice = FrequencyLattice::new(f.grid());
    let values: Vec<Complex64> = (0..lattice.len())
        .into_par_iter()
        .map(|i| symbol(&lattice.xi(i)))
        .collect();
    let mut out = f.clone();
    for c in 0..f.components() {
        for (v, m) in out.component_mut(c).iter_mut().zip(&values) {
            *v *= m;
        }
    }
    out
}
