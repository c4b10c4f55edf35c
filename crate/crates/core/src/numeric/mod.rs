//! Small numerical building blocks shared by the rest of the crate.

mod fit;
mod gauss;
mod lattice_zeta;
mod special;
mod sum;

pub use fit::{linear_fit, LinearFit};
pub use gauss::GaussLegendre;
pub use lattice_zeta::lattice_zeta;
pub use special::{bessel_j0, reciprocal_gamma, upper_incomplete_gamma};
pub use sum::pairwise_sum;
