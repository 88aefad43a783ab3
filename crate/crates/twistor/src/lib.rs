//! A concrete model of the rank-one Deligne-Hitchin twistor space over the
//! projective line minus two points: the slope-two bundle with its antipodal
//! involution, parabolic weight/residue coordinates, gauge actions, and the
//! integer-lattice invariants of the general rank-one case.
//!
//! Modules:
//! * [`circle`] - the circle group in circular coordinates, its exponential
//!   and circular logarithms.
//! * [`sphere`] - the twistor line in two charts, the antipodal involution,
//!   and its intertwining automorphisms.
//! * [`tate`] - the logarithmic Tate structure: sections, the twisted
//!   involution, invariant sections `psi(a, alpha)`, the generators `nu_p`,
//!   weight/residue coordinates, and the invariant inner product.
//! * [`moduli`] - the glued two-chart moduli model with monodromy, the
//!   involutions `C`, `D`, `N`, `sigma`, and the integer gauge action.
//! * [`lattice`] - Smith normal form, divisor-class saturation, torsion
//!   quotients, and exactness checking for descriptor-presented pairs.
//! * [`harmonic`] - the weight/residue dictionary for harmonic data and
//!   KMS-chamber tracking along paths.
//! * [`verify`] - seeded, named identity suites over all of the above.

pub mod circle;
pub mod error;
pub mod harmonic;
pub mod lattice;
pub mod moduli;
pub mod sphere;
pub mod tate;
pub mod verify;

pub use error::{Error, Result};
