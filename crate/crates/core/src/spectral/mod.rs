//! Discrete Fourier machinery on the periodic box `[-L, L)^n`.
//!
//! Conventions: `f̂(ξ) = ∫ e^{-ix·ξ} f(x) dx` approximated by
//! `Δxⁿ Σ_x f(x) e^{-ix·ξ}` on the lattice `ξ = (π/L) m`, `m ∈ [-N/2, N/2)ⁿ`,
//! and `f(x) = (2π)^{-n} Σ_ξ Δξⁿ f̂(ξ) e^{ix·ξ}`. With these weights the
//! discrete Parseval identity reads `Δxⁿ Σ|f|² = (Δξ/2π)ⁿ Σ|f̂|²`.
//!
//! Storage is component-major: component `c` occupies the contiguous slab
//! `values[c·Nⁿ .. (c+1)·Nⁿ]`, each slab row-major with axis 0 slowest.
//! Frequency slabs use the same layout in FFT order (index `k` stands for
//! `m = k` when `k < N/2`, `m = k - N` otherwise).

mod field;
mod grid;
mod lattice;
mod matrix;
mod transform;

pub use field::{Field, SpectralField};

pub use grid::GridSpec;
pub use lattice::{frequency_lattice, FrequencyLattice, Xi};
pub use matrix::{ComplexMatrix, RealMatrix, SquareMatrix};
pub use transform::{
    apply_multiplier, apply_scalar_multiplier, forward_transform, inverse_transform, map_modes,
};

/// Names used for multi-component fields in the rest of the docs.
pub type VectorField = Field;
pub type SpectralVectorField = SpectralField;
