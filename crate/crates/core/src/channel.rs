//! Flat-fading interference channel with interference treated as noise.
//!
//! Gains are already divided by the receiver noise variance, so the rate of
//! user `i` is
//!
//! ```text
//! R_i = log2(1 + g[i][i] p_i / (1 + sum_{j != i} g[j][i] p_j))
//! ```
//!
//! with `g[j][i]` the gain from transmitter `j` to receiver `i`.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::ActionProfile;

/// Noise-normalized power gains of an `n`-user interference network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelGains {
    users: usize,
    /// Row-major, `gains[tx * users + rx]`.
    gains: Vec<f64>,
    p_max: f64,
}

impl ChannelGains {
    /// `matrix[tx][rx]` is the gain from transmitter `tx` to receiver `rx`.
    pub fn new(matrix: Vec<Vec<f64>>, p_max: f64) -> Result<Self> {
        let users = matrix.len();
        if users < 2 {
            return Err(Error::invalid(format!("need at least 2 users, got {users}")));
        }
        if !(p_max.is_finite() && p_max > 0.0) {
            return Err(Error::invalid(format!("p_max must be positive and finite, got {p_max}")));
        }
        let mut gains = Vec::with_capacity(users * users);
        for (tx, row) in matrix.iter().enumerate() {
            if row.len() != users {
                return Err(Error::invalid(format!("gain row {tx} has {} entries, expected {users}", row.len())));
            }
            for (rx, &g) in row.iter().enumerate() {
                if !(g.is_finite() && g >= 0.0) {
                    return Err(Error::invalid(format!("gain[{tx}][{rx}] = {g} is not a nonnegative number")));
                }
                if tx == rx && g <= 0.0 {
                    return Err(Error::invalid(format!("direct gain[{tx}][{tx}] must be positive")));
                }
            }
            gains.extend_from_slice(row);
        }
        Ok(Self { users, gains, p_max })
    }

    /// Two-user channel in the usual `a, b, c, d` notation: `a` and `c` are
    /// the direct gains of users 0 and 1, `b` is the gain from transmitter 1
    /// into receiver 0 and `d` the gain from transmitter 0 into receiver 1.
    pub fn two_user(a: f64, b: f64, c: f64, d: f64, p_max: f64) -> Result<Self> {
        Self::new(vec![vec![a, d], vec![b, c]], p_max)
    }

    /// Symmetric two-user channel with direct gain `direct` and cross gain `cross`.
    pub fn symmetric(direct: f64, cross: f64, p_max: f64) -> Result<Self> {
        Self::two_user(direct, cross, direct, cross, p_max)
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// Gain from transmitter `tx` to receiver `rx`.
    pub fn gain(&self, tx: usize, rx: usize) -> f64 {
        self.gains[tx * self.users + rx]
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.gains.chunks(self.users).map(<[f64]>::to_vec).collect()
    }

    /// `(a, b, c, d)` for a two-user channel.
    pub fn abcd(&self) -> Option<(f64, f64, f64, f64)> {
        (self.users == 2).then(|| (self.gain(0, 0), self.gain(1, 0), self.gain(1, 1), self.gain(0, 1)))
    }

    pub(crate) fn require_two_users(&self, op: &'static str) -> Result<(f64, f64, f64, f64)> {
        self.abcd().ok_or(Error::UnsupportedDimension { op, users: self.users })
    }
}

/// Transmit powers, one per user, each in `[0, p_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerVector(Vec<f64>);

impl PowerVector {
    pub fn new(powers: Vec<f64>) -> Self {
        Self(powers)
    }

    pub fn from_profile(gains: &ChannelGains, profile: &ActionProfile) -> Self {
        Self((0..profile.users()).map(|i| if profile.is_on(i) { gains.p_max() } else { 0.0 }).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Per-user achievable rates in bits per channel use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePoint(Vec<f64>);

impl RatePoint {
    pub fn new(rates: Vec<f64>) -> Self {
        Self(rates)
    }

    pub fn zeros(users: usize) -> Self {
        Self(vec![0.0; users])
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for RatePoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub fn rates(gains: &ChannelGains, powers: &PowerVector) -> Result<RatePoint> {
    let p = powers.as_slice();
    let n = gains.users();
    if p.len() != n {
        return Err(Error::invalid(format!("power vector has {} entries, channel has {n} users", p.len())));
    }
    if let Some((i, &bad)) = p.iter().enumerate().find(|(_, &v)| !(v.is_finite() && (0.0..=gains.p_max()).contains(&v)))
    {
        return Err(Error::invalid(format!("power[{i}] = {bad} outside [0, {}]", gains.p_max())));
    }
    Ok(rates_unchecked(gains, p))
}

pub fn rates_for_profile(gains: &ChannelGains, profile: &ActionProfile) -> Result<RatePoint> {
    if profile.users() != gains.users() {
        return Err(Error::invalid(format!("profile has {} users, channel has {}", profile.users(), gains.users())));
    }
    Ok(rates_unchecked(gains, PowerVector::from_profile(gains, profile).as_slice()))
}

pub(crate) fn rates_unchecked(gains: &ChannelGains, p: &[f64]) -> RatePoint {
    let n = gains.users();
    RatePoint(
        (0..n)
            .map(|rx| {
                if p[rx] == 0.0 {
                    return 0.0;
                }
                let interference: f64 = (0..n).filter(|&tx| tx != rx).map(|tx| gains.gain(tx, rx) * p[tx]).sum();
                (1.0 + gains.gain(rx, rx) * p[rx] / (1.0 + interference)).log2()
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn noise_limited() -> ChannelGains {
        ChannelGains::two_user(2.0, 0.2, 1.0, 0.1, 1.0).unwrap()
    }

    #[test]
    fn zero_power_gives_zero_rate() {
        let r = rates(&noise_limited(), &PowerVector::new(vec![0.0, 0.0])).unwrap();
        assert_eq!(&*r, &[0.0, 0.0]);
    }

    #[test]
    fn both_on_matches_hand_evaluation() {
        let r = rates(&noise_limited(), &PowerVector::new(vec![1.0, 1.0])).unwrap();
        assert_relative_eq!(r[0], (1.0f64 + 2.0 / 1.2).log2(), max_relative = 1e-15);
        assert_relative_eq!(r[1], (1.0f64 + 1.0 / 1.1).log2(), max_relative = 1e-15);
        assert!((r[0] - 1.4150).abs() < 5e-5);
        assert!((r[1] - 0.9328).abs() < 1e-4);
    }

    #[test]
    fn one_silent_user() {
        let r = rates(&noise_limited(), &PowerVector::new(vec![1.0, 0.0])).unwrap();
        assert_eq!(r[0], 3f64.log2());
        assert_eq!(r[1], 0.0);
    }

    #[test]
    fn profile_wrapper_matches_rates() {
        let g = noise_limited();
        let on = ActionProfile::all_on(2).unwrap();
        assert_eq!(rates_for_profile(&g, &on).unwrap(), rates(&g, &PowerVector::new(vec![1.0, 1.0])).unwrap());
        let silent = ActionProfile::silent(2).unwrap();
        assert_eq!(rates_for_profile(&g, &silent).unwrap(), RatePoint::zeros(2));

        let strong = ChannelGains::two_user(20.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        let second = ActionProfile::single(2, 1).unwrap();
        assert_eq!(&*rates_for_profile(&strong, &second).unwrap(), &[0.0, 1.0]);
    }

    #[test]
    fn input_validation() {
        let g = noise_limited();
        assert!(matches!(rates(&g, &PowerVector::new(vec![1.0])), Err(Error::InvalidInput(_))));
        assert!(matches!(rates(&g, &PowerVector::new(vec![1.5, 0.0])), Err(Error::InvalidInput(_))));
        assert!(matches!(rates(&g, &PowerVector::new(vec![-0.1, 0.0])), Err(Error::InvalidInput(_))));
        assert!(rates_for_profile(&g, &ActionProfile::all_on(3).unwrap()).is_err());
        assert!(ChannelGains::two_user(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ChannelGains::two_user(1.0, -1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ChannelGains::two_user(1.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(ChannelGains::new(vec![vec![1.0]], 1.0).is_err());
    }

    #[test]
    fn abcd_roundtrip() {
        let g = ChannelGains::two_user(20.0, 2.0, 1.0, 3.0, 1.0).unwrap();
        assert_eq!(g.abcd(), Some((20.0, 2.0, 1.0, 3.0)));
        // b is transmitter 1 into receiver 0
        assert_eq!(g.gain(1, 0), 2.0);
    }

    fn gains_strategy(n: usize) -> impl Strategy<Value = ChannelGains> {
        proptest::collection::vec(0.01f64..100.0, n * n)
            .prop_map(move |flat| ChannelGains::new(flat.chunks(n).map(<[f64]>::to_vec).collect(), 1.0).unwrap())
    }

    proptest! {
        #[test]
        fn own_power_strictly_increases_own_rate(
            g in gains_strategy(3), user in 0usize..3, lo in 0.0f64..0.9, others in proptest::collection::vec(0.0f64..=1.0, 3)
        ) {
            let mut p = others.clone();
            p[user] = lo;
            let low = rates(&g, &PowerVector::new(p.clone())).unwrap();
            p[user] = lo + 0.1;
            let high = rates(&g, &PowerVector::new(p)).unwrap();
            prop_assert!(high[user] > low[user]);
        }

        #[test]
        fn interference_strictly_decreases_rate(
            g in gains_strategy(3), victim in 0usize..3, shift in 1usize..3, lo in 0.0f64..0.9
        ) {
            let aggressor = (victim + shift) % 3;
            let mut p = vec![0.5; 3];
            p[aggressor] = lo;
            let quiet = rates(&g, &PowerVector::new(p.clone())).unwrap();
            p[aggressor] = lo + 0.1;
            let loud = rates(&g, &PowerVector::new(p)).unwrap();
            prop_assert!(loud[victim] < quiet[victim]);
        }

        #[test]
        fn single_user_rate_is_interference_free(g in gains_strategy(4), user in 0usize..4) {
            let r = rates_for_profile(&g, &ActionProfile::single(4, user).unwrap()).unwrap();
            prop_assert_eq!(r[user], (1.0 + g.gain(user, user) * g.p_max()).log2());
        }

        #[test]
        fn doubling_direct_gain_shift(direct in 0.01f64..100.0) {
            let base = ChannelGains::two_user(direct, 0.3, 1.0, 0.3, 1.0).unwrap();
            let doubled = ChannelGains::two_user(2.0 * direct, 0.3, 1.0, 0.3, 1.0).unwrap();
            let alone = ActionProfile::single(2, 0).unwrap();
            let diff = rates_for_profile(&doubled, &alone).unwrap()[0]
                - rates_for_profile(&base, &alone).unwrap()[0];
            let expected = ((1.0 + 2.0 * direct) / (1.0 + direct)).log2();
            prop_assert!((diff - expected).abs() < 1e-12);
        }
    }
}
