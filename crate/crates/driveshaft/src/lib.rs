//! Design and optimization of composite drive shafts.
//!
//! The analysis core (`materials`, `shaft`, `rotordynamics`, `torsional`,
//! `strength`, `buckling`) is generic over `f32`/`f64`. The driveline layers
//! built on top of it (`design`, `constraints`, `optimize`, `config`) work in
//! `f64` only, and the aliases below name the `f64` instances of the core types.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod buckling;
pub mod config;
pub mod constraints;
pub mod design;
pub mod error;
pub mod ga;
pub mod materials;
pub mod optimize;
pub mod real;
pub mod rotordynamics;
pub mod shaft;
pub mod strength;
pub mod torsional;
pub mod validation;

pub use error::{Error, Result};

pub type PlyMaterial = materials::PlyMaterial<f64>;
pub type StackingSequence = materials::StackingSequence<f64>;
pub type LaminateStiffness = materials::LaminateStiffness<f64>;
pub type HomogenizedShaftMaterial = materials::HomogenizedShaftMaterial<f64>;
pub type ShaftGeometry = shaft::ShaftGeometry<f64>;
pub type SectionProperties = shaft::SectionProperties<f64>;
pub type SupportProperties = rotordynamics::SupportProperties<f64>;
pub type ModalParameters = rotordynamics::ModalParameters<f64>;
pub type CriticalSpeeds = rotordynamics::CriticalSpeeds<f64>;
pub type StabilityResult = rotordynamics::StabilityResult<f64>;
pub type TorsionalSystem = torsional::TorsionalSystem<f64>;
pub type TorqueCapacity = strength::TorqueCapacity<f64>;
pub type BucklingResult = buckling::BucklingResult<f64>;
