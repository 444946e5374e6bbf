//! Verification harness and numerical oracles on top of `dimsob-core`.
//!
//! The core crate supplies exact rearrangement profiles, rearrangement-
//! invariant norms, and isoperimetric transference integrals. This crate
//! turns those pieces into end-to-end checks: test-function families with
//! analytic gradients, a Monte Carlo rearrangement path, independent
//! discretization oracles, and a report layer with deterministic output.
//!
//! Every check is one-sided by construction: left-hand sides are evaluated
//! on upper envelopes of the exact objects, right-hand sides on lower
//! envelopes with certified constants, so a reported pass is a proof up to
//! the stated quadrature and sampling budgets.

pub mod family;
pub mod mc;
pub mod oracle;
pub mod report;
pub mod specparse;
pub mod verify;
