//! Distributed regret matching over the binary on/off action set.
//!
//! Every user keeps, for each action it has played, the running sum of
//! what it would have gained by playing the other action instead in those
//! periods. With `t` periods of history the average regret for switching
//! away from the last action `a` is `R = max(D(a, other), 0)` where
//! `D = sum / t`, and the next period's switching probability is `R / mu`.
//! Counterfactual utilities come from the shared [`UtilityTable`] given
//! the observed actions of the other users.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelGains;
use crate::error::{Error, Result};
use crate::game::{
    build_utility_table, is_correlated_equilibrium, CeVerdict, JointDistribution, Mechanism, UtilityTable,
};
use crate::profile::ActionProfile;

const OFF: usize = 0;
const ON: usize = 1;

/// Slack allowed above probability 1 before reporting overflow.
const PROB_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningConfig {
    pub t_max: usize,
    pub seed: u64,
    /// Normalization constant; `None` picks `2 n max|U|` from the table.
    pub mu: Option<f64>,
    /// Trailing window for the empirical distribution; 0 means the full
    /// history.
    pub window: usize,
    /// Initial probability of transmitting, per user; `None` means 0.5.
    pub initial_p: Option<Vec<f64>>,
    /// Tolerance for the correlated-equilibrium check on the empirical pmf.
    pub ce_eps: f64,
}

impl LearningConfig {
    /// Defaults: automatic `mu`, the second half of the run as window, even
    /// initial odds and a 0.05 equilibrium tolerance.
    pub fn new(t_max: usize, seed: u64) -> Self {
        Self { t_max, seed, mu: None, window: (t_max / 2).max(1), initial_p: None, ce_eps: 0.05 }
    }

    pub fn validate(&self, users: usize) -> Result<()> {
        if self.t_max == 0 {
            return Err(Error::Config("t_max must be at least 1".into()));
        }
        if self.window > self.t_max {
            return Err(Error::Config(format!("window {} exceeds t_max {}", self.window, self.t_max)));
        }
        if let Some(mu) = self.mu {
            if !(mu.is_finite() && mu > 0.0) {
                return Err(Error::Config(format!("mu must be positive, got {mu}")));
            }
        }
        if let Some(p) = &self.initial_p {
            if p.len() != users {
                return Err(Error::Config(format!("initial_p has {} entries for {users} users", p.len())));
            }
            if p.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::Config("initial_p entries must lie in [0, 1]".into()));
            }
        }
        if self.ce_eps.is_nan() || self.ce_eps < 0.0 {
            return Err(Error::Config("ce_eps must be nonnegative".into()));
        }
        Ok(())
    }
}

/// `2 n max|U|`, or 1 for an all-zero table.
pub fn default_mu(table: &UtilityTable) -> f64 {
    let m = table.max_abs();
    if m > 0.0 {
        2.0 * table.users() as f64 * m
    } else {
        1.0
    }
}

/// One user's regret bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretState {
    /// `cum_diff[a][b]`: sum over periods where `a` was played of
    /// `U(b, others) - U(a, others)`. Indexed 0 = off, 1 = on.
    pub cum_diff: [[f64; 2]; 2],
    pub plays: [u64; 2],
    /// Probability of transmitting used in the latest period.
    pub current_p: f64,
    last: Option<usize>,
}

impl RegretState {
    pub fn new(initial_p: f64) -> Self {
        Self { cum_diff: [[0.0; 2]; 2], plays: [0; 2], current_p: initial_p, last: None }
    }

    pub fn periods(&self) -> u64 {
        self.plays[OFF] + self.plays[ON]
    }

    pub fn last_action(&self) -> Option<bool> {
        self.last.map(|a| a == ON)
    }

    /// Average regret for having played `from` instead of `to`, clipped at 0.
    pub fn average_regret(&self, from: bool, to: bool) -> f64 {
        let t = self.periods();
        if t == 0 || from == to {
            return 0.0;
        }
        (self.cum_diff[usize::from(from)][usize::from(to)] / t as f64).max(0.0)
    }

    /// Largest average regret over both action pairs.
    pub fn max_average_regret(&self) -> f64 {
        self.average_regret(true, false).max(self.average_regret(false, true))
    }

    /// Probability of transmitting in the coming period.
    fn next_on_probability(&self, user: usize, mu: f64) -> Result<f64> {
        let Some(last) = self.last else { return Ok(self.current_p) };
        let other = 1 - last;
        let regret = (self.cum_diff[last][other] / self.periods() as f64).max(0.0);
        let mut switch = regret / mu;
        if switch > 1.0 + PROB_SLACK {
            return Err(Error::ProbabilityOverflow { user, prob: switch, mu });
        }
        switch = switch.min(1.0);
        Ok(if last == ON { 1.0 - switch } else { switch })
    }
}

/// Outcome of one period.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub profile: ActionProfile,
    /// Probability of transmitting each user used for this period's draw.
    pub on_probability: Vec<f64>,
}

/// Advance every user by one period.
///
/// All users draw their actions from the current probabilities before any
/// regret is updated. Each user consumes exactly one uniform draw, in user
/// order.
pub fn step<R: Rng + ?Sized>(
    states: &mut [RegretState],
    table: &UtilityTable,
    mu: f64,
    rng: &mut R,
) -> Result<StepRecord> {
    let users = table.users();
    if states.len() != users {
        return Err(Error::invalid(format!("{} regret states for {users} users", states.len())));
    }
    let on_probability =
        states.iter().enumerate().map(|(i, s)| s.next_on_probability(i, mu)).collect::<Result<Vec<_>>>()?;
    let bits: Vec<bool> = on_probability.iter().map(|&p| rng.random::<f64>() < p).collect();
    let profile = ActionProfile::from_bits(&bits)?;

    for (i, state) in states.iter_mut().enumerate() {
        let played = usize::from(bits[i]);
        let other = 1 - played;
        let realized = table.utility(profile, i);
        let counterfactual = table.utility(profile.with(i, other == ON), i);
        state.cum_diff[played][other] += counterfactual - realized;
        state.plays[played] += 1;
        state.current_p = on_probability[i];
        state.last = Some(played);
    }
    Ok(StepRecord { profile, on_probability })
}

/// Logged play of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    users: usize,
    profiles: Vec<ActionProfile>,
    /// Row-major `[period][user]`.
    utilities: Vec<f64>,
    /// Row-major `[period][user]`.
    on_probability: Vec<f64>,
}

impl Trajectory {
    pub fn new(users: usize) -> Self {
        Self { users, profiles: Vec::new(), utilities: Vec::new(), on_probability: Vec::new() }
    }

    pub fn push(&mut self, record: &StepRecord, table: &UtilityTable) {
        self.profiles.push(record.profile);
        self.utilities.extend_from_slice(table.utilities(record.profile));
        self.on_probability.extend_from_slice(&record.on_probability);
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn profiles(&self) -> &[ActionProfile] {
        &self.profiles
    }

    /// Realized utilities in period `t` (0-based).
    pub fn utilities(&self, t: usize) -> &[f64] {
        &self.utilities[t * self.users..(t + 1) * self.users]
    }

    pub fn on_probability(&self, t: usize) -> &[f64] {
        &self.on_probability[t * self.users..(t + 1) * self.users]
    }

    /// CSV with columns `t, b1..bn, u1..un, p1..pn`; `t` starts at 1 and
    /// `p` is each user's probability of transmitting.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let n = self.users;
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("b{i}")));
        header.extend((1..=n).map(|i| format!("u{i}")));
        header.extend((1..=n).map(|i| format!("p{i}")));
        w.write_record(&header)?;
        for (t, profile) in self.profiles.iter().enumerate() {
            let mut row = vec![(t + 1).to_string()];
            row.extend(profile.bits().iter().map(|&b| u8::from(b).to_string()));
            row.extend(self.utilities(t).iter().map(f64::to_string));
            row.extend(self.on_probability(t).iter().map(f64::to_string));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Relative frequency of each profile over the last `window` periods
/// (the whole trajectory when `window` is 0).
pub fn empirical_distribution(trajectory: &Trajectory, window: usize) -> Result<JointDistribution> {
    let len = trajectory.len();
    let window = if window == 0 { len } else { window };
    if window == 0 {
        return Err(Error::invalid("empirical distribution over an empty window"));
    }
    if window > len {
        return Err(Error::invalid(format!("window {window} exceeds trajectory length {len}")));
    }
    let mut counts = vec![0u64; 1 << trajectory.users()];
    for p in &trajectory.profiles()[len - window..] {
        counts[p.index()] += 1;
    }
    JointDistribution::new(counts.into_iter().map(|c| c as f64 / window as f64).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningRun {
    pub trajectory: Trajectory,
    pub mu: f64,
    pub final_states: Vec<RegretState>,
    pub empirical: JointDistribution,
    pub ce: CeVerdict,
}

impl LearningRun {
    /// Empirical mass of every nontrivial profile, `theta[k]` for profile
    /// index `k + 1`.
    pub fn theta(&self) -> Vec<f64> {
        self.empirical.as_slice()[1..].to_vec()
    }

    pub fn silence_mass(&self) -> f64 {
        self.empirical.as_slice()[0]
    }

    /// Per-user largest average regret at the end of the run.
    pub fn max_average_regret(&self) -> Vec<f64> {
        self.final_states.iter().map(RegretState::max_average_regret).collect()
    }
}

pub fn run(gains: &ChannelGains, mechanism: Mechanism, config: &LearningConfig) -> Result<LearningRun> {
    run_on_table(&build_utility_table(gains, mechanism)?, config)
}

/// Regret matching on a prebuilt table, seeded from `config.seed`.
pub fn run_on_table(table: &UtilityTable, config: &LearningConfig) -> Result<LearningRun> {
    let users = table.users();
    config.validate(users)?;
    let mu = config.mu.unwrap_or_else(|| default_mu(table));
    let mut states: Vec<RegretState> = match &config.initial_p {
        Some(p) => p.iter().map(|&v| RegretState::new(v)).collect(),
        None => vec![RegretState::new(0.5); users],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut trajectory = Trajectory::new(users);
    for _ in 0..config.t_max {
        let record = step(&mut states, table, mu, &mut rng)?;
        trajectory.push(&record, table);
    }
    let empirical = empirical_distribution(&trajectory, config.window)?;
    let ce = is_correlated_equilibrium(table, &empirical, config.ce_eps);
    Ok(LearningRun { trajectory, mu, final_states: states, empirical, ce })
}
