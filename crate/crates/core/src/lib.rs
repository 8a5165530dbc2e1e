//! Achievable rates of the three-node Gaussian relay channel under jointly
//! Gaussian inputs: decode-and-forward, compress-and-forward, their
//! superposition, broadcast over decode-and-forward and the cut-set bound.
//!
//! Closed-form rate expressions are checked against a covariance oracle
//! ([`oracle::CovModel`]) that computes conditional mutual information
//! from log-determinants. The algebra is generic over [`Scalar`]; the
//! optimizers and the verification suite run on `f64`.

pub mod channel;
pub mod oracle;
pub mod rates;
pub mod scalar;
pub mod search;
pub mod sweep;
pub mod verify;

pub use channel::{BdfParams, ChannelError, ChannelParams, SfParams};
pub use oracle::{CovModel, OracleError, VarLabel};
pub use rates::{Constraint, CutSetVariant, RateError};
pub use scalar::Scalar;
pub use search::{report, RateReport, SearchConfig, SearchError};
pub use sweep::{Powers, SweepError, SweepRow};
pub use verify::{CheckResult, Suite};

pub type Channel = ChannelParams<f64>;
pub type Sf = SfParams<f64>;
pub type Bdf = BdfParams<f64>;
pub type Model = CovModel<f64>;
