//! Measurement and planning utilities around the sketch operator.

pub mod buckets;
pub mod complexify;
pub mod norms;
pub mod plan;
pub mod rip;

pub use buckets::{bucket_norm_profile, BucketNormProfile};
pub use complexify::{complexify_matrix, complexify_vector, RealMatrix};
pub use norms::{operator_norms, OperatorNorms};
pub use plan::{recommend_parameters, ParameterPlan};
pub use rip::{exact_rip_constant, exact_rip_constant_with_cap, mc_rip_lower_bound, RipMethod, RipReport};
