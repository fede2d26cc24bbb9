//! Physical-layer secrecy for two cooperating transmitters (Alice and John)
//! sharing a legitimate receiver (Bob) in the presence of one eavesdropper
//! (Eve).
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] – gains, geometry, budgets and the direct / two-hop SNRs.
//! * [`rates`] – point-to-point, MRC-combined and secrecy rates for the four
//!   cooperation scenarios, plus the Gaussian secrecy region.
//! * [`allocator`] – stationarity polynomials, closed forms and the optimal
//!   power allocation for every scenario.
//! * [`oracle`] – brute-force grid / golden-section and finite-difference
//!   checks used to validate the allocator.
//! * [`protocol`] – distance constraints and the cooperation-mode negotiation.
//! * [`harness`] – experiment configuration, sweeps, validation reports and
//!   mobility runs behind the `coopsec` CLI.
//!
//! All rates are in nats; conversion to bits happens only for display.

pub mod allocator;
pub mod error;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod protocol;
pub mod rates;

pub use error::{Error, Result};
pub use model::{
    ChannelGains, CooperationLevel, DualPrice, Geometry, NoiseModel, PowerBudget, ScenarioConfig,
};
pub use rates::{Powers, RatePair, ScenarioKind, SecrecyRegion};
