//! Identification of voltage-fluctuation sources by decomposing the supply
//! voltage's amplitude-modulating signal into pulse waves.
//!
//! Most disturbing loads switch between operating states, so the envelope of
//! the supply voltage is well modeled as a sum of asymmetric rectangular
//! (pulse) waves, one per load. This crate provides the whole verification
//! chain around that idea:
//!
//! - [`testgen`] — synthesis of test signals: clipped-cosine carriers,
//!   pulse-wave modulating signals, AM composition and randomized scenario
//!   corpora, all deterministic under a seed.
//! - [`demod`] — recovery of the modulating signal from a voltage waveform
//!   via carrier estimation and template projection.
//! - [`spectral`] — autocovariance, cross-correlation and cross-covariance
//!   statistics plus amplitude spectra and peak picking.
//! - [`decompose`] — the four-stage estimator proper: frequencies, phases,
//!   duty cycles and amplitudes of the component pulse waves.
//! - [`metrics`] — truth matching, relative errors and box-plot statistics.
//! - [`wavefile`] — binary waveform and JSON manifest persistence.
//!
//! Grid searches and batch work run data-parallel through rayon when the
//! default `parallel` feature is enabled; the sequential fallback produces
//! bit-identical results.

pub mod decompose;
pub mod demod;
mod error;
mod fft;
pub mod metrics;
pub mod model;
mod par;
pub mod spectral;
pub mod testgen;
pub mod wavefile;

pub use error::{Error, Result};
pub use model::{CarrierSpec, ModulationSpec, PulseWaveParams, SampledSignal, Spectrum};
