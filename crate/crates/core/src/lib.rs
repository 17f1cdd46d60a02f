//! Crystallized rates regions for the n-user interference channel.
//!
//! Interference is treated as noise and every transmitter is restricted to
//! binary power control (silent or full power). The `2^n - 1` resulting
//! corner points span a time-sharing region that replaces continuous power
//! control. On top of that region the crate builds binary-action games
//! (raw rates or VCG-priced utilities), checks correlated-equilibrium
//! membership, and runs distributed regret matching to learn the system
//! time-sharing coefficients.
//!
//! Module map:
//!
//! - [`channel`]: gain matrix and interference-as-noise rates.
//! - [`region`]: corner enumeration, crystallized rates, frontier sampling,
//!   curvature labels, area comparisons and convex hulls (n = 2, 3).
//! - [`game`]: utility tables, pure Nash equilibria, correlated equilibria.
//! - [`learning`]: regret matching and empirical distributions.
//! - [`experiment`]: config-driven runners behind the `crystal` binary.
//!
//! User indices in the API are 0-based. Profile indices put user 0 in the
//! least significant bit, so for two users index 1 is "user 0 alone",
//! index 2 is "user 1 alone" and index 3 is "both on".

pub mod channel;
pub mod error;
pub mod experiment;
pub mod game;
pub mod learning;
pub mod profile;
pub mod region;

pub use channel::{rates, rates_for_profile, ChannelGains, PowerVector, RatePoint};
pub use error::{Error, Result};
pub use game::{
    build_utility_table, is_correlated_equilibrium, pure_nash, theta_from_distribution, CeVerdict, JointDistribution,
    Mechanism, UtilityTable,
};
pub use learning::{empirical_distribution, run, step, LearningConfig, RegretState, Trajectory};
pub use profile::{ActionProfile, MAX_USERS};
pub use region::{
    area_power_control, area_timeshare_ac, area_timeshare_via_b, classify_frontier, convex_hull, crystallized_rates,
    enumerate_corners, sample_frontier, timeshare_gain_percent, CornerSet, Curvature, FrontierSample, Hull,
    ThetaVector,
};
