//! The crystallized rates region: corner points of binary power control
//! and the time-sharing combinations between them.

mod area;
mod frontier;
mod hull;

pub use area::{
    area_power_control, area_timeshare_ac, area_timeshare_via_b, shoelace, timeshare_gain_percent, DEFAULT_AREA_GRID,
};
pub use frontier::{classify_frontier, classify_frontier_with_tol, sample_frontier, Curvature, FrontierSample};
pub use hull::{convex_hull, Facet, Hull, HullVertex};

use serde::{Deserialize, Serialize};

use crate::channel::{rates_for_profile, ChannelGains, RatePoint};
use crate::error::{Error, Result};
use crate::profile::{check_users, ActionProfile};

/// Tolerance on `sum(theta) = 1`.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// The `2^n - 1` nontrivial binary-power rate points, in profile-index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerSet {
    corners: Vec<(ActionProfile, RatePoint)>,
}

impl CornerSet {
    pub fn users(&self) -> usize {
        self.corners[0].0.users()
    }

    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(ActionProfile, RatePoint)> {
        self.corners.iter()
    }

    /// Rate point of the corner with profile index `index` (1-based, as the
    /// all-silent profile is not a corner).
    pub fn rate(&self, index: usize) -> Option<&RatePoint> {
        index.checked_sub(1).and_then(|k| self.corners.get(k)).map(|(_, r)| r)
    }

    pub fn rate_points(&self) -> Vec<RatePoint> {
        self.corners.iter().map(|(_, r)| r.clone()).collect()
    }

    /// Hull of the corners plus the origin, labelled by profile index.
    pub fn hull(&self) -> Result<Hull> {
        let labels: Vec<usize> = self.corners.iter().map(|(p, _)| p.index()).collect();
        hull::convex_hull_labelled(&self.rate_points(), &labels)
    }
}

pub fn enumerate_corners(gains: &ChannelGains) -> Result<CornerSet> {
    check_users(gains.users())?;
    let corners = ActionProfile::all(gains.users())?
        .skip(1)
        .map(|p| rates_for_profile(gains, &p).map(|r| (p, r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CornerSet { corners })
}

/// System time-sharing coefficients, one per corner (`theta[k]` belongs to
/// profile index `k + 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaVector(Vec<f64>);

impl ThetaVector {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        check_simplex(&theta, "theta")?;
        Ok(Self(theta))
    }

    /// All weight on the corner with profile index `index`.
    pub fn vertex(users: usize, index: usize) -> Result<Self> {
        check_users(users)?;
        let len = (1 << users) - 1;
        if index == 0 || index > len {
            return Err(Error::invalid(format!("corner index {index} out of 1..={len}")));
        }
        let mut theta = vec![0.0; len];
        theta[index - 1] = 1.0;
        Ok(Self(theta))
    }

    pub fn uniform(users: usize) -> Result<Self> {
        check_users(users)?;
        let len = (1 << users) - 1;
        Ok(Self(vec![1.0 / len as f64; len]))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Weight of the corner with profile index `index`.
    pub fn weight(&self, index: usize) -> f64 {
        index.checked_sub(1).and_then(|k| self.0.get(k)).copied().unwrap_or(0.0)
    }

    pub fn nonzero_count(&self, tol: f64) -> usize {
        self.0.iter().filter(|&&w| w > tol).count()
    }

    /// Whether at most `users` coefficients exceed `tol`, the support bound
    /// that every point on the crystallized frontier satisfies.
    pub fn within_support_bound(&self, users: usize, tol: f64) -> bool {
        self.nonzero_count(tol) <= users
    }
}

pub(crate) fn check_simplex(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::invalid(format!("{what} is empty")));
    }
    if let Some((k, &w)) = values.iter().enumerate().find(|(_, &w)| !(w.is_finite() && w >= 0.0)) {
        return Err(Error::invalid(format!("{what}[{k}] = {w} is not a nonnegative number")));
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::invalid(format!("{what} sums to {total}, not 1")));
    }
    Ok(())
}

/// Rates obtained by time-sharing the corners with weights `theta`.
pub fn crystallized_rates(corners: &CornerSet, theta: &ThetaVector) -> Result<RatePoint> {
    if theta.as_slice().len() != corners.len() {
        return Err(Error::invalid(format!(
            "theta has {} entries for {} corners",
            theta.as_slice().len(),
            corners.len()
        )));
    }
    let mut out = vec![0.0; corners.users()];
    for ((_, rate), &w) in corners.iter().zip(theta.as_slice()) {
        for (acc, r) in out.iter_mut().zip(rate.iter()) {
            *acc += w * r;
        }
    }
    Ok(RatePoint::new(out))
}
