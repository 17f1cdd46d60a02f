//! Binary-action interference games and their equilibria.
//!
//! Each user either stays silent or transmits at `p_max`. Utilities are
//! either the raw interference-as-noise rates or VCG-priced rates, where a
//! transmitting user pays the total rate loss it inflicts on everyone else:
//!
//! ```text
//! U_i(a) = R_i(a) - sum_{j != i} [R_j(a with user i silent) - R_j(a)]
//! ```
//!
//! A silent user neither earns nor pays, so its utility is exactly zero.

use serde::{Deserialize, Serialize};

use crate::channel::{rates_for_profile, ChannelGains};
use crate::error::{Error, Result};
use crate::profile::{check_users, ActionProfile};
use crate::region::{check_simplex, ThetaVector};

/// Default tolerance for correlated-equilibrium checks on exact tables.
pub const DEFAULT_CE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mechanism {
    RawRates,
    Vcg,
}

impl std::str::FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw_rates" | "raw-rates" | "raw" => Ok(Mechanism::RawRates),
            "vcg" => Ok(Mechanism::Vcg),
            other => Err(Error::Config(format!("unknown mechanism {other:?}, expected raw_rates or vcg"))),
        }
    }
}

impl std::fmt::Display for Mechanism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mechanism::RawRates => "raw_rates",
            Mechanism::Vcg => "vcg",
        })
    }
}

/// Utility vector for every one of the `2^n` action profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityTable {
    users: usize,
    mechanism: Mechanism,
    /// `utilities[profile_index][user]`
    utilities: Vec<Vec<f64>>,
}

/// One table row, as dumped by the `vcg-table` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityRow {
    pub index: usize,
    pub bits: String,
    pub utility: Vec<f64>,
}

impl UtilityTable {
    /// Table from explicit utilities, mainly for tests and hand-built games.
    pub fn from_rows(users: usize, mechanism: Mechanism, utilities: Vec<Vec<f64>>) -> Result<Self> {
        check_users(users)?;
        if utilities.len() != 1 << users || utilities.iter().any(|u| u.len() != users) {
            return Err(Error::invalid(format!("utility table must have {} rows of {users} entries", 1 << users)));
        }
        Ok(Self { users, mechanism, utilities })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn mechanism(&self) -> Mechanism {
        self.mechanism
    }

    pub fn utility(&self, profile: ActionProfile, user: usize) -> f64 {
        self.utilities[profile.index()][user]
    }

    pub fn utilities(&self, profile: ActionProfile) -> &[f64] {
        &self.utilities[profile.index()]
    }

    pub fn profiles(&self) -> impl Iterator<Item = ActionProfile> + '_ {
        (0..self.utilities.len()).map(|k| ActionProfile::from_index(self.users, k).expect("index within table"))
    }

    pub fn max_abs(&self) -> f64 {
        self.utilities.iter().flatten().fold(0.0f64, |m, u| m.max(u.abs()))
    }

    pub fn rows(&self) -> Vec<UtilityRow> {
        self.profiles()
            .map(|p| UtilityRow { index: p.index(), bits: p.to_string(), utility: self.utilities(p).to_vec() })
            .collect()
    }
}

pub fn build_utility_table(gains: &ChannelGains, mechanism: Mechanism) -> Result<UtilityTable> {
    let users = gains.users();
    check_users(users)?;
    let rates: Vec<Vec<f64>> = ActionProfile::all(users)?
        .map(|p| rates_for_profile(gains, &p).map(|r| r.into_vec()))
        .collect::<Result<_>>()?;

    let utilities = match mechanism {
        Mechanism::RawRates => rates,
        Mechanism::Vcg => ActionProfile::all(users)?
            .map(|p| {
                (0..users)
                    .map(|i| {
                        if !p.is_on(i) {
                            return 0.0;
                        }
                        let without = &rates[p.with(i, false).index()];
                        let with = &rates[p.index()];
                        let payment: f64 = (0..users).filter(|&j| j != i).map(|j| without[j] - with[j]).sum();
                        with[i] - payment
                    })
                    .collect()
            })
            .collect(),
    };
    Ok(UtilityTable { users, mechanism, utilities })
}

/// Every profile from which no user can gain by switching alone. Ties count
/// as equilibria.
pub fn pure_nash(table: &UtilityTable) -> Vec<ActionProfile> {
    table
        .profiles()
        .filter(|&p| {
            (0..table.users()).all(|i| {
                let deviation = p.with(i, !p.is_on(i));
                table.utility(p, i) >= table.utility(deviation, i)
            })
        })
        .collect()
}

/// Probability mass over all `2^n` profiles, indexed by profile index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution(Vec<f64>);

impl JointDistribution {
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        if !pmf.len().is_power_of_two() || pmf.len() < 4 {
            return Err(Error::invalid(format!("pmf length {} is not 2^n for n >= 2", pmf.len())));
        }
        check_users(pmf.len().trailing_zeros() as usize)?;
        check_simplex(&pmf, "pmf")?;
        Ok(Self(pmf))
    }

    pub fn point_mass(profile: ActionProfile) -> Self {
        let mut pmf = vec![0.0; 1 << profile.users()];
        pmf[profile.index()] = 1.0;
        Self(pmf)
    }

    /// Embed time-sharing coefficients with zero mass on the silent profile.
    pub fn from_theta(theta: &ThetaVector) -> Result<Self> {
        let mut pmf = Vec::with_capacity(theta.as_slice().len() + 1);
        pmf.push(0.0);
        pmf.extend_from_slice(theta.as_slice());
        Self::new(pmf)
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.0.len() != other.0.len() {
            return Err(Error::invalid("mixing distributions over different user counts"));
        }
        Self::new(self.0.iter().zip(&other.0).map(|(p, q)| lambda * p + (1.0 - lambda) * q).collect())
    }

    pub fn users(&self) -> usize {
        self.0.len().trailing_zeros() as usize
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn prob(&self, profile: ActionProfile) -> f64 {
        self.0[profile.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CeVerdict {
    /// `min_residual` is the smallest left-hand side over all inequalities.
    Holds {
        min_residual: f64,
    },
    Violated {
        user: usize,
        recommended: bool,
        deviation: bool,
        residual: f64,
    },
}

impl CeVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, CeVerdict::Holds { .. })
    }

    /// Smallest inequality residual (negative when violated).
    pub fn residual(&self) -> f64 {
        match *self {
            CeVerdict::Holds { min_residual } => min_residual,
            CeVerdict::Violated { residual, .. } => residual,
        }
    }
}

/// Residual of the inequality "user `user`, told to play `recommended`,
/// does not gain by playing `deviation`":
/// `sum over others' actions of p(rec, others) * [U(rec, others) - U(dev, others)]`.
pub fn ce_residual(
    table: &UtilityTable,
    dist: &JointDistribution,
    user: usize,
    recommended: bool,
    deviation: bool,
) -> f64 {
    table
        .profiles()
        .filter(|p| p.is_on(user) == recommended)
        .map(|p| dist.prob(p) * (table.utility(p, user) - table.utility(p.with(user, deviation), user)))
        .sum()
}

/// Check the correlated-equilibrium inequalities, reporting the first one
/// whose residual falls below `-eps`.
pub fn is_correlated_equilibrium(table: &UtilityTable, dist: &JointDistribution, eps: f64) -> CeVerdict {
    assert_eq!(table.users(), dist.users(), "table and distribution disagree on user count");
    let mut min_residual = f64::INFINITY;
    for user in 0..table.users() {
        for recommended in [false, true] {
            let deviation = !recommended;
            let residual = ce_residual(table, dist, user, recommended, deviation);
            if residual < -eps {
                return CeVerdict::Violated { user, recommended, deviation, residual };
            }
            min_residual = min_residual.min(residual);
        }
    }
    CeVerdict::Holds { min_residual }
}

/// Time-sharing coefficients from a joint distribution. The silent profile
/// must carry at most `eps` mass; any such mass is renormalized away.
pub fn theta_from_distribution(dist: &JointDistribution, eps: f64) -> Result<ThetaVector> {
    let p = dist.as_slice();
    if p[0] > eps {
        return Err(Error::NonzeroSilence { mass: p[0], eps });
    }
    let rest = &p[1..];
    if p[0] == 0.0 {
        return ThetaVector::new(rest.to_vec());
    }
    let scale = 1.0 - p[0];
    ThetaVector::new(rest.iter().map(|w| w / scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn table(a: f64, b: f64, c: f64, d: f64, mech: Mechanism) -> UtilityTable {
        build_utility_table(&ChannelGains::two_user(a, b, c, d, 1.0).unwrap(), mech).unwrap()
    }

    fn profile(bits: &[bool]) -> ActionProfile {
        ActionProfile::from_bits(bits).unwrap()
    }

    #[test]
    fn raw_table_has_zero_silent_row() {
        let t = table(2.0, 0.2, 1.0, 0.1, Mechanism::RawRates);
        assert_eq!(t.utilities(profile(&[false, false])), &[0.0, 0.0]);
    }

    #[test]
    fn vcg_both_on_payment() {
        let t = table(2.0, 0.2, 1.0, 0.1, Mechanism::Vcg);
        let zeta = (1.0f64 + 0.1 / 2.1).log2();
        assert!((zeta - 0.0671).abs() < 5e-5);
        let u = t.utility(profile(&[true, true]), 0);
        assert_relative_eq!(u, (1.0f64 + 2.0 / 1.2).log2() - zeta, max_relative = 1e-12);
        assert!((u - 1.3479).abs() < 5e-5);
    }

    #[test]
    fn vcg_single_transmitter_pays_nothing() {
        let t = table(2.0, 0.2, 1.0, 0.1, Mechanism::Vcg);
        assert_eq!(t.utilities(profile(&[true, false])), &[3f64.log2(), 0.0]);
        assert_eq!(t.utilities(profile(&[false, true])), &[0.0, 1.0]);
    }

    #[test]
    fn raw_rates_nash_is_all_on() {
        for &(a, b, c, d) in &[(2.0, 0.2, 1.0, 0.1), (1.0, 10.0, 1.0, 10.0), (20.0, 2.0, 1.0, 1.0)] {
            let t = table(a, b, c, d, Mechanism::RawRates);
            assert_eq!(pure_nash(&t), vec![profile(&[true, true])]);
        }
    }

    #[test]
    fn vcg_interference_limited_nash_is_tdma() {
        let t = table(1.0, 10.0, 1.0, 10.0, Mechanism::Vcg);
        assert_eq!(pure_nash(&t), vec![profile(&[true, false]), profile(&[false, true])]);
        let both = t.utility(profile(&[true, true]), 0);
        assert!((both - -0.749).abs() < 5e-4, "{both}");
    }

    #[test]
    fn vcg_noise_limited_all_on_is_nash() {
        let t = table(2.0, 0.2, 1.0, 0.1, Mechanism::Vcg);
        assert!(pure_nash(&t).contains(&profile(&[true, true])));
    }

    #[test]
    fn ties_count_as_equilibria() {
        let t = UtilityTable::from_rows(2, Mechanism::RawRates, vec![vec![0.0; 2]; 4]).unwrap();
        assert_eq!(pure_nash(&t).len(), 4);
    }

    #[test]
    fn ce_examples() {
        let t = table(1.0, 10.0, 1.0, 10.0, Mechanism::Vcg);
        let half = JointDistribution::new(vec![0.0, 0.5, 0.5, 0.0]).unwrap();
        assert!(is_correlated_equilibrium(&t, &half, DEFAULT_CE_EPS).holds());

        let both = JointDistribution::point_mass(profile(&[true, true]));
        match is_correlated_equilibrium(&t, &both, DEFAULT_CE_EPS) {
            CeVerdict::Violated { user, recommended, deviation, residual } => {
                assert_eq!((user, recommended, deviation), (0, true, false));
                assert!((residual - -0.749).abs() < 5e-4);
            }
            other => panic!("expected violation, got {other:?}"),
        }

        for ne in pure_nash(&t) {
            assert!(is_correlated_equilibrium(&t, &JointDistribution::point_mass(ne), DEFAULT_CE_EPS).holds());
        }
    }

    #[test]
    fn theta_mapping() {
        let p = JointDistribution::new(vec![0.0, 0.0, 0.92, 0.08]).unwrap();
        assert_eq!(theta_from_distribution(&p, 1e-9).unwrap().as_slice(), &[0.0, 0.92, 0.08]);
        let point = JointDistribution::point_mass(profile(&[true, true]));
        assert_eq!(theta_from_distribution(&point, 1e-9).unwrap(), ThetaVector::vertex(2, 3).unwrap());
        let silent = JointDistribution::new(vec![0.1, 0.3, 0.3, 0.3]).unwrap();
        assert!(matches!(theta_from_distribution(&silent, 1e-9), Err(Error::NonzeroSilence { .. })));
    }

    #[test]
    fn theta_embedding_roundtrip() {
        let theta = ThetaVector::new(vec![0.1, 0.2, 0.3, 0.0, 0.15, 0.05, 0.2]).unwrap();
        let back = theta_from_distribution(&JointDistribution::from_theta(&theta).unwrap(), 0.0).unwrap();
        assert_eq!(back, theta);
    }

    #[test]
    fn distribution_validation() {
        assert!(JointDistribution::new(vec![0.5, 0.5]).is_err());
        assert!(JointDistribution::new(vec![0.5, 0.5, 0.0]).is_err());
        assert!(JointDistribution::new(vec![0.5, 0.6, 0.0, -0.1]).is_err());
        assert!("vcg".parse::<Mechanism>().is_ok());
        assert!("auction".parse::<Mechanism>().is_err());
    }
}
