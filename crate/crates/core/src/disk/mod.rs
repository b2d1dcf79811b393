//! Polyharmonic eigenmodel of the unit disk, assembled one angular mode at a time.

pub mod bessel;
pub mod mode;
pub mod model;
pub mod radial;

pub use bessel::{bessel_clamped_oracle, BesselRootTable};
pub use mode::{almansi_kernel, build_radial_mode, psi_from_phi, solve_mode, ModeEigen, RadialMode};
pub use model::{
    disk_kolmogorov_width, m_max_for_kernel, merge_disk_model, DiskModel, DiskSpace, DiskSummary, DiskWidth,
    SpectrumEntry,
};
pub use radial::{apply_laplacian_mode, apply_polyharmonic_mode, RadialPoly};
