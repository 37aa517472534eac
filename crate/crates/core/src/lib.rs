//! Closed non-orientable hyperbolic surfaces of Euler characteristic −1: holonomy,
//! simple closed geodesics, the modular group action on Teichmüller space,
//! systoles and their critical points.
//!
//! Everything numeric is generic over [`Real`] (f32 or f64); the optimizers and
//! the eutaxy test are f64 only. Aliases for f64 are at the crate root.

pub mod curves;
pub mod error;
pub mod extremal;
pub mod holonomy;
pub mod isometry;
pub mod lp;
pub mod modular;
pub mod optimize;
pub mod scalar;
pub mod special;
pub mod systole;
pub mod tolerances;
pub mod verify;

pub use curves::{GeodesicClass, Slope};
pub use error::{Error, Result};
pub use holonomy::{MarkedGroup, PantsCoords, SurfacePoint};
pub use isometry::{Isometry, IsometryKind};
pub use modular::{FundamentalDomain, MappingClass};
pub use scalar::Real;
pub use systole::{CellId, SliceSpec, Systole};
pub use tolerances::Tolerances;

pub type Point = SurfacePoint<f64>;
pub type Point32 = SurfacePoint<f32>;
pub type Matrix = Isometry<f64>;
