//! Rectangular analog joint source-channel coding (AJSCC).
//!
//! Two bounded analog readings are compressed into one voltage by walking a
//! snake of parallel lines: the transmitted value is the accumulated curve
//! length from the origin to the point. This crate provides
//!
//! * [`mapping`]: the ideal circuit-free mapping and its inverse,
//! * [`adb`]: a behavioral model of the multi-stage analog divider encoder,
//! * [`vcvs`]: a behavioral model of the parallel switched-VCVS encoder,
//! * [`link`]: an FM / AWGN / FFT-peak Monte-Carlo link simulator,
//! * [`cost`]: component counts and power models for both encoders.

pub mod adb;
pub mod cost;
mod error;
pub mod link;
pub mod mapping;
pub mod vcvs;

pub use error::{Error, Result};
