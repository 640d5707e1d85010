//! Extended gamma and beta k-functions built on the three-parameter
//! Mittag-Leffler k-function, their integral representations, a numerical
//! identity audit, and the associated generalized beta distribution.

pub mod dist;
pub mod error;
pub mod extfun;
pub mod identities;
pub mod kcore;
pub mod quad;
pub mod repr;
pub mod special;

pub use error::{Error, Result};
pub use kcore::{GammaMode, MLParams, MittagLeffler, SeriesConfig};
pub use quad::{Diagnostic, EvalResult, HalfLine, QuadConfig};
pub use dist::{DistParams, GeneralizedBeta};
pub use extfun::{
    extended_beta_k, extended_gamma_k, incomplete_extended_beta_k, ExtBetaArgs, ExtGammaArgs,
};
pub use identities::{run_audit, AuditReport, CheckFamily, GridSpec, IdentityReport, Tolerances, Verdict};
pub use kcore::{k_beta, k_gamma, mittag_leffler_k};
pub use repr::{eval_representation, Representation};
