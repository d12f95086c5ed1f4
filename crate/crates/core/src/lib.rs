//! Axis factorizations of SU(2) and SO(3) elements, with the group maps and
//! polarization-optics tools built on them.
//!
//! ```
//! use su2_factor::{factor, recompose, FactorizationPattern, UnitQuaternion};
//!
//! let u = UnitQuaternion::new(0.5, 0.5, 0.5, 0.5).unwrap();
//! let pattern: FactorizationPattern = "121".parse().unwrap();
//! let r = factor(&u, pattern);
//! assert!(recompose(&r).max_abs_diff_up_to_sign(&u) < 1e-12);
//! ```

pub mod audit;
pub mod cli;
pub mod error;
pub mod factorize;
pub mod group_maps;
pub mod polarization;
pub mod quat;

pub use error::{Error, Result};
pub use factorize::{
    compose, factor, factor_three_element, factor_two_element, recompose, FactorizationPattern,
    FactorizationResult, PatternKind,
};
pub use group_maps::{
    sl2c_to_lorentz, so3_to_su2, su2_to_so3, ComplexKVector, Lorentz4, Rotation3,
};
pub use polarization::{
    decompose_rotator, jones_to_stokes, stokes_from_wave, stokes_to_jones, JonesSpinor,
    MuellerElement, StokesVector,
};
pub use quat::{Axis, ElementaryFactor, UnitQuaternion};
