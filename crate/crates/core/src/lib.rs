//! Qualitative Nyquist plot analysis for rational transfer functions.
//!
//! Given a transfer function `K/s^h · num(s)/den(s)` with exact rational
//! coefficients, this crate computes a verified qualitative description of
//! its Nyquist curve: start/end points, phase lead or lag and modulus trend
//! next to them, the local exit/entry curve shape, real-axis crossings, the
//! vertical asymptote of single-origin-pole systems, and a dense sweep for
//! rendering. Everything that feeds a classification is computed in exact
//! rational arithmetic — the verdicts hinge on exact zero tests that
//! floating point cannot decide — while sweeps and drawings use doubles.
//!
//! Module map:
//!
//! * [`scalar`], [`poly`] — exact rationals, polynomials, power series.
//! * [`xfer`] — the transfer-function model, parser, duals, endpoints.
//! * [`taylor`] — coefficient engines (strategy registry) and the
//!   deviation parameters behind the classification.
//! * [`classify`] — endpoint behavior: lead/lag, modulus trend, curve
//!   archetypes.
//! * [`features`] — real-axis crossings, asymptote, tangents, sweeps.
//! * [`report`] — the serializable analysis document.
//! * [`sketch`] — SVG rendering of the qualitative plot.
//! * [`verify`] — self-checks pitting independent computation routes
//!   against each other.

pub mod classify;
pub mod features;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod sketch;
pub mod taylor;
pub mod verify;
pub mod xfer;

pub use report::{analyze, AnalyzeOptions, QualitativeReport};
pub use xfer::TransferFunction;
