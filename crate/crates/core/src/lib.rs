//! Relative equilibria of point vortices placed on concentric regular polygons.
//!
//! The crate evaluates the Helmholtz N-vortex velocity field, classifies
//! configurations (absolute equilibrium, rigid translation, rotation), and
//! solves the one- and two-polygon problems: angular velocities, circulant
//! spectra and the equal-vorticity rigidity of single polygons, the counting
//! of nested two-ring equilibria as a function of the vorticity ratio, and
//! the zero-vorticity co-rotating points of those equilibria.

pub mod corotating;
pub mod dynamics;
pub mod error;
pub mod integrate;
pub mod nested;
pub mod plane;
pub mod polygon;
pub mod roots;
pub mod system;

pub use dynamics::{classify, oneil_sum, velocities, EquilibriumKind, EquilibriumReport};
pub use error::{Error, Result};
pub use integrate::{integrate, Trajectory};
pub use plane::{point, PlanePoint};
pub use system::{conserved, mutual_distances, ConservedQuantities, VortexSystem};

/// Shortest round-trip decimal form of `x`, used for every text export.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        ryu::Buffer::new().format_finite(x).to_owned()
    } else if x.is_nan() {
        "NaN".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}
