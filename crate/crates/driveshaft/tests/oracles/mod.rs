//! Independent reference implementations shared by the integration tests.
//! Each test binary uses a different subset.
#![allow(dead_code)]

pub mod buckling;
pub mod rotor;
pub mod strength;
pub mod torsional;
