//! Service-success probability and backup-resource utilization for
//! parallelized VNF chains.
//!
//! A large flow is split into `n` parallel sub-flows, each of which must
//! traverse a chain of `psi_total` VNF types. Active VNFs sit either all on
//! one server per chain stage (centralized placement) or spread over
//! `n_servers` servers per sub-flow (distributed placement). Backup VNF
//! copies can be kept on a dedicated server per stage, on one shared server,
//! or pooled over `m` servers. The service succeeds when every sub-flow can
//! be processed by every VNF type, substituting working backup copies for
//! failed components.
//!
//! The crate has three independent pillars:
//!
//! * [`analytic`] — closed-form success probabilities for every placement
//!   strategy, built from exact binomial sums.
//! * [`montecarlo`] — a brute-force oracle that samples (or exhaustively
//!   enumerates) component up/down states and replays the recovery rules,
//!   used to validate the closed forms.
//! * [`search`] — provisioning searches on top of the closed forms: minimal
//!   backup count for a reliability target, maximal protected parallelism
//!   for a fixed budget.
//!
//! [`model`] holds the shared scenario types and validation; [`overhead`]
//! computes the active-to-reserved VNF utilization ratio.

pub mod analytic;
pub mod model;
pub mod montecarlo;
pub mod overhead;
pub mod search;

pub use analytic::{evaluate, SuccessProbability};
pub use model::{BackupSpec, ChainSpec, ReliabilityParams, Scenario, Strategy};
pub use montecarlo::{enumerate_exact, estimate, Estimate};
pub use overhead::{utilization, Utilization};
pub use search::{max_protected_n, min_sigma, ProvisioningResult};
