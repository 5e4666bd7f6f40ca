//! Periodic spectral representation: grids, transforms, Fourier
//! multipliers, Littlewood–Paley projections and the norms used by the
//! diagnostics.

mod cutoffs;
mod dealias;
mod field;
mod grid;
mod norms;
mod symbol;

pub use cutoffs::{highest_active_band, lp_project, DyadicCutoffs, Projection};
pub use dealias::{dealias, DealiasRule};
pub use field::SpectralField;
pub use grid::{make_grid, Grid};
pub use norms::{
    boundary_mass_fraction, compute_norm, h11_norm, l2_spectral, norm, sobolev_norm,
    weighted_sup_distance, z_norm, BoundaryMassWarning, NormKind, NormValue,
    BOUNDARY_MASS_THRESHOLD, DEFAULT_SOBOLEV_INDEX, DEFAULT_Z_WEIGHT,
};
pub use symbol::{
    apply_exponential, apply_multiplier, fractional_dispersion_symbol,
    fractional_dispersion_symbol_widened, fractional_frequency, whitham_l, whitham_symbol,
    MultiplierSymbol,
};

pub(crate) use dealias::apply_mask;
pub(crate) use field::hermitian_project;
pub(crate) use symbol::exp_of;
