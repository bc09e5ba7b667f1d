//! Measure, explain, and amplify compiler function inlining.
//!
//! The crate is organised around the stages of an inlining study:
//!
//! * [`ground_truth`] recovers which source functions were inlined from the
//!   DWARF debug info of an ELF binary and computes inlining ratios.
//! * [`remarks`] parses the compiler's `-Rpass*=inline` diagnostic stream and
//!   reconciles it with the DWARF evidence.
//! * [`cost_model`] is a standalone, configurable simulator of the inliner's
//!   per-call-site decision pipeline.
//! * [`features`] extracts a 62-slot static feature vector from disassembly
//!   listings.
//! * [`sweep`] builds projects across compiler flag grids and searches for
//!   flag combinations that maximise the inlining ratio.
//! * [`analysis`] provides the descriptive statistics used to compare builds:
//!   CDFs, normalisation, three-sigma filtering, and median-gap ranking.
//!
//! Batch entry points take an [`Execution`] strategy. With the default
//! `parallel` feature the parallel strategy fans out over rayon; without it
//! every strategy runs sequentially.

pub mod analysis;
pub mod cost_model;
pub mod features;
pub mod ground_truth;
pub mod par;
pub mod remarks;
pub mod sweep;

pub use par::Execution;

/// Version tag of the built-in 62-slot feature registry.
pub const REGISTRY_VERSION: &str = features::registry::REGISTRY_VERSION;
