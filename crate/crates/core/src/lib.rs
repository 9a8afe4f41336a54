//! Temporal causality detection for scalar time series.
//!
//! A series is labelled causal when its present value depends on its own
//! past. Features are either raw values, one-sided Fourier amplitudes, or
//! GLS neurochaos TTSS features computed from the amplitudes; a logistic
//! regression classifier separates the two classes.

pub mod chaosfex;
pub mod classify;
pub mod cli;
pub mod config;
pub mod data;
pub mod pipeline;
pub mod seriesgen;
pub mod spectral;
