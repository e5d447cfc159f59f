//! Exact rational Newton–Okounkov bodies of divisors on toric varieties,
//! abstract surfaces and curves, with checks of subadditivity statements on
//! fibre spaces.

#![allow(clippy::needless_range_loop)]

pub mod curve;
pub mod error;
pub mod fiberspace;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod plot;
pub mod polytope;
pub mod rational;
pub mod surface;
pub mod toric;

pub use curve::CurveModel;
pub use error::{Error, Result};
pub use fiberspace::{CheckReport, FiberSpaceInstance, FiberTypeFlag, ScalingReport, Verdict};
pub use invariants::{
    CurveFlag, Declared, DimsReport, Divisor, Flag, NakayamaVerdict, SurfaceFlag, VarietyModel,
};
pub use polytope::{Containment, HalfSpace, Polytope};
pub use rational::{QVec, Q};
pub use surface::{BodyProfile, ConeTests, SurfaceLattice, ZariskiPair};
pub use toric::{GradedSeries, ProductFibration, ToricDivisor, ToricFlag, ToricVariety};
