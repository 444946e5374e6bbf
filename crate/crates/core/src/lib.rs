//! Numerical kernel for dimension-free Sobolev-type inequalities on the
//! unit measure interval.
//!
//! The crate works with monotone step profiles (decreasing rearrangements
//! of measurable functions, normalised to total measure one) and provides:
//!
//! * rearrangement arithmetic: maximal averages, oscillation, truncation
//!   ([`profile`]);
//! * rearrangement-invariant function norms (Lebesgue, Lorentz, Orlicz,
//!   Marcinkiewicz, and their logarithmically refined companions) together
//!   with Hardy-type operators, dilation norms, and Boyd indices
//!   ([`space`]);
//! * isoperimetric profile estimators and the weighted transference
//!   integrals that turn an isoperimetric inequality into a Sobolev-type
//!   norm inequality ([`iso`]).
//!
//! Everything here is deterministic, allocation-only (`no_std` + `alloc`),
//! and free of IO. Transcendental functions are routed through `libm` so
//! results do not depend on the host's libm.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod float;
pub mod iso;
pub mod profile;
pub mod quad;
pub mod space;
pub mod special;

pub use iso::{GeometryKind, IsoError, ProfileSpec, WeightFunction};
pub use profile::{ProfileError, RestrictMode, StepProfile, WeightedSample};
pub use space::{
    BoydIndices, DilationNorm, HardyOp, OperatorNormEstimate, PhiSpec, SpaceError, SpaceSpec,
    WeightVariant, YoungSpec,
};
