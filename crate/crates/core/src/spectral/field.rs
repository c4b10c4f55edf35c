use super::GridSpec;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Complex samples of a `components`-vector field on the grid nodes.
///
/// A vector field in the sense of the elastic system has
/// `components == grid.dim()`; scalar fields have one component.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: GridSpec,
    components: usize,
    values: Vec<Complex64>,
}

/// Fourier coefficients of a [`Field`], one `components`-vector per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    components: usize,
    coeffs: Vec<Complex64>,
}

fn check_len(what: &'static str, grid: &GridSpec, components: usize, len: usize) -> Result<()> {
    let expected = grid.node_count() * components;
    if components == 0 || len != expected {
        return Err(Error::Shape {
            what,
            expected,
            actual: len,
        });
    }
    Ok(())
}

macro_rules! shared_field_api {
    ($ty:ident, $data:ident) => {
        impl $ty {
            pub fn zeros(grid: &GridSpec, components: usize) -> Self {
                assert!(components >= 1);
                $ty {
                    grid: *grid,
                    components,
                    $data: vec![Complex64::new(0.0, 0.0); grid.node_count() * components],
                }
            }

            pub fn grid(&self) -> &GridSpec {
                &self.grid
            }

            pub fn components(&self) -> usize {
                self.components
            }

            /// True when the component count matches the spatial dimension.
            pub fn is_vector(&self) -> bool {
                self.components == self.grid.dim()
            }

            /// Length of one component slab, `Nⁿ`.
            pub fn slab_len(&self) -> usize {
                self.grid.node_count()
            }

            pub fn component(&self, c: usize) -> &[Complex64] {
                let len = self.slab_len();
                &self.$data[c * len..(c + 1) * len]
            }

            pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
                let len = self.slab_len();
                &mut self.$data[c * len..(c + 1) * len]
            }

            /// The `components`-vector at flat index `i`.
            pub fn vector_at(&self, i: usize) -> [Complex64; 3] {
                let len = self.slab_len();
                let mut v = [Complex64::new(0.0, 0.0); 3];
                for (c, slot) in v.iter_mut().enumerate().take(self.components) {
                    *slot = self.$data[c * len + i];
                }
                v
            }

            pub fn set_vector_at(&mut self, i: usize, v: &[Complex64]) {
                let len = self.slab_len();
                for (c, value) in v.iter().enumerate().take(self.components) {
                    self.$data[c * len + i] = *value;
                }
            }

            /// Squared Euclidean length of the vector at flat index `i`.
            pub fn norm_sqr_at(&self, i: usize) -> f64 {
                let len = self.slab_len();
                (0..self.components)
                    .map(|c| self.$data[c * len + i].norm_sqr())
                    .sum()
            }

            pub fn sup_norm(&self) -> f64 {
                self.$data.iter().map(|v| v.norm()).fold(0.0, f64::max)
            }

            /// Largest entrywise difference to `other` (same shape required).
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                assert_eq!(self.$data.len(), other.$data.len());
                self.$data
                    .iter()
                    .zip(&other.$data)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
            }

            pub fn scaled(&self, s: Complex64) -> Self {
                let mut out = self.clone();
                out.$data.iter_mut().for_each(|v| *v *= s);
                out
            }

            /// `self + s·other`.
            pub fn add_scaled(&self, other: &Self, s: Complex64) -> Result<Self> {
                if self.grid != other.grid || self.components != other.components {
                    return Err(Error::Shape {
                        what: "field operand",
                        expected: self.$data.len(),
                        actual: other.$data.len(),
                    });
                }
                let mut out = self.clone();
                out.$data
                    .iter_mut()
                    .zip(&other.$data)
                    .for_each(|(a, b)| *a += s * b);
                Ok(out)
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                self.add_scaled(other, Complex64::new(1.0, 0.0))
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.add_scaled(other, Complex64::new(-1.0, 0.0))
            }
        }
    };
}

shared_field_api!(Field, values);
shared_field_api!(SpectralField, coeffs);

impl Field {
    /// Wraps raw component-major samples; fails when the length is not
    /// `Nⁿ · components`.
    pub fn from_values(grid: &GridSpec, components: usize, values: Vec<Complex64>) -> Result<Self> {
        check_len("field values", grid, components, values.len())?;
        Ok(Field {
            grid: *grid,
            components,
            values,
        })
    }

    /// Samples `f(x)` at every node; only the first `components` entries of
    /// the returned array are used.
    pub fn from_fn<F>(grid: &GridSpec, components: usize, f: F) -> Self
    where
        F: Fn(&[f64; 3]) -> [Complex64; 3],
    {
        let mut out = Field::zeros(grid, components);
        for i in 0..grid.node_count() {
            let v = f(&grid.node(i));
            out.set_vector_at(i, &v[..components]);
        }
        out
    }

    /// Scalar field sampled from a real function.
    pub fn scalar_from_fn<F: Fn(&[f64; 3]) -> f64>(grid: &GridSpec, f: F) -> Self {
        let values = (0..grid.node_count())
            .map(|i| Complex64::new(f(&grid.node(i)), 0.0))
            .collect();
        Field {
            grid: *grid,
            components: 1,
            values,
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `(Δxⁿ Σ_x |f(x)|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (self.grid.cell_volume() * s).sqrt()
    }

    /// Grid average of component `c`.
    pub fn mean(&self, c: usize) -> Complex64 {
        let slab = self.component(c);
        slab.iter().sum::<Complex64>() / slab.len() as f64
    }

    /// Copy with the grid average of every component removed.
    pub fn centered(&self) -> Field {
        let mut out = self.clone();
        for c in 0..self.components {
            let m = self.mean(c);
            out.component_mut(c).iter_mut().for_each(|v| *v -= m);
        }
        out
    }

    /// Stacks scalar fields into one multi-component field.
    pub fn stack(parts: &[Field]) -> Result<Field> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Parameter("cannot stack zero fields".into()))?;
        let mut values = Vec::with_capacity(first.values.len() * parts.len());
        let mut components = 0;
        for p in parts {
            if p.grid != first.grid {
                return Err(Error::Parameter(
                    "stacked fields live on different grids".into(),
                ));
            }
            values.extend_from_slice(&p.values);
            components += p.components;
        }
        Field::from_values(&first.grid, components, values)
    }

    /// Component `c` as a scalar field.
    pub fn extract(&self, c: usize) -> Field {
        Field {
            grid: self.grid,
            components: 1,
            values: self.component(c).to_vec(),
        }
    }
}

impl SpectralField {
    pub fn from_coeffs(grid: &GridSpec, components: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_len("spectral coefficients", grid, components, coeffs.len())?;
        Ok(SpectralField {
            grid: *grid,
            components,
            coeffs,
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `((Δξ/2π)ⁿ Σ_ξ |f̂(ξ)|²)^{1/2}`, equal to the physical L² norm.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.coeffs.iter().map(|v| v.norm_sqr()).sum();
        (self.grid.mode_weight() * s).sqrt()
    }

    /// Coefficient vector at `ξ = 0`.
    pub fn zero_mode(&self) -> [Complex64; 3] {
        self.vector_at(0)
    }
}
