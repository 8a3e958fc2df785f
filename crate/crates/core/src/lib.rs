//! Asymptotic secret key rates for continuous-variable measurement-device-
//! independent QKD driven by k-photon-subtracted two-mode squeezed coherent
//! (k-PSTMSC) states.
//!
//! The pipeline runs source parameters through closed-form moments
//! ([`nongaussian`]), an equivalent one-way channel ([`channel`]) and the
//! reverse-reconciliation key rate ([`keyrate`]). [`sweep`] drives parameter
//! scans and scalar optimizations, and [`oracle`] is a truncated-Fock
//! brute-force model used to check the closed forms.
//!
//! All quadratures are in shot-noise units (vacuum variance 1).
//!
//! ```
//! use pstmsc_core::{secret_key_rate, ChannelParams, Geometry, SqueezedSourceParams};
//!
//! let source = SqueezedSourceParams::from_variance(50.0, 2.0, 0.9, 1).unwrap();
//! let channel = ChannelParams::paper_defaults(Geometry::Asymmetric, 20.0, 50.0);
//! let result = secret_key_rate(&source, &channel).unwrap();
//! assert!(result.key_rate > 0.0);
//! ```

pub mod channel;
pub mod error;
pub mod keyrate;
pub mod nongaussian;
pub mod oracle;
pub mod phase_space;
pub mod sweep;

pub use channel::{ChannelParams, Geometry, NoiseBreakdown};
pub use error::{Error, Result};
pub use keyrate::{secret_key_rate, KeyRateResult};
pub use nongaussian::{pstmsc_covariance, subtraction_probability, TwoModeCM};
pub use phase_space::{PhasePoint, SqueezedSourceParams};
pub use sweep::{Family, SweepRow, SweepSpec, SweepVariable};
