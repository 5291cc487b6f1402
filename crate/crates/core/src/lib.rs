//! Within-host HBV reaction-diffusion model.
//!
//! * [`model`]: parameters, scaling, `R0`, equilibria, elasticities.
//! * [`spectral`]: Gershgorin discs and a small dense eigensolver.
//! * [`wave`]: traveling-wave ODE, existence-condition checker, shooting.
//! * [`pde`]: 1-D method-of-lines solver with zero-flux boundaries.
//! * [`presets`]: bundled parameter sets.

pub mod model;
pub mod pde;
pub mod presets;
pub mod spectral;
pub mod wave;

pub mod format;
