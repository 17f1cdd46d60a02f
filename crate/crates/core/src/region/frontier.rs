//! Two-user potential lines: one transmitter pinned at full power while the
//! other sweeps its whole power range.

use serde::{Deserialize, Serialize};

use crate::channel::{rates_unchecked, ChannelGains, PowerVector, RatePoint};
use crate::error::{Error, Result};

/// Relative tolerance used by [`classify_frontier`].
pub const DEFAULT_CURVATURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierSample {
    pub fixed_user: usize,
    pub grid_size: usize,
    /// Ordered by increasing power of the swept user.
    pub points: Vec<(PowerVector, RatePoint)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curvature {
    Concave,
    Convex,
    Inflected,
}

impl std::fmt::Display for Curvature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Curvature::Concave => "concave",
            Curvature::Convex => "convex",
            Curvature::Inflected => "inflected",
        })
    }
}

/// Sweep the power of the user other than `fixed_user` over a uniform grid
/// of `grid` values in `[0, p_max]` while `fixed_user` transmits at `p_max`.
///
/// With `fixed_user = 1` the sweep runs from corner A (index 2) to B
/// (index 3); with `fixed_user = 0` it runs from C (index 1) to B.
pub fn sample_frontier(gains: &ChannelGains, fixed_user: usize, grid: usize) -> Result<FrontierSample> {
    gains.require_two_users("frontier sampling")?;
    if fixed_user > 1 {
        return Err(Error::invalid(format!("fixed user {fixed_user} out of range for 2 users")));
    }
    if grid < 2 {
        return Err(Error::invalid(format!("frontier grid needs at least 2 samples, got {grid}")));
    }
    let p_max = gains.p_max();
    let swept = 1 - fixed_user;
    let points = (0..grid)
        .map(|k| {
            // pin the last sample to p_max exactly so it reproduces corner B
            let p = if k == grid - 1 { p_max } else { p_max * k as f64 / (grid - 1) as f64 };
            let mut powers = vec![0.0; 2];
            powers[fixed_user] = p_max;
            powers[swept] = p;
            let rate = rates_unchecked(gains, &powers);
            (PowerVector::new(powers), rate)
        })
        .collect();
    Ok(FrontierSample { fixed_user, grid_size: grid, points })
}

pub fn classify_frontier(sample: &FrontierSample) -> Result<Curvature> {
    classify_frontier_with_tol(sample, DEFAULT_CURVATURE_TOL)
}

/// Curvature of the frontier viewed as the curve `R_1 -> R_2`.
///
/// Second differences are taken on the slopes between consecutive samples,
/// which handles the nonuniform spacing in `R_1`. `tol` is relative to the
/// largest slope magnitude.
pub fn classify_frontier_with_tol(sample: &FrontierSample, tol: f64) -> Result<Curvature> {
    if sample.points.len() < 5 {
        return Err(Error::invalid(format!("curvature needs at least 5 samples, got {}", sample.points.len())));
    }
    let mut xy: Vec<(f64, f64)> = sample.points.iter().map(|(_, r)| (r[0], r[1])).collect();
    xy.sort_by(|l, r| l.0.total_cmp(&r.0));

    let span = |f: fn(&(f64, f64)) -> f64| {
        let (lo, hi) = xy.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        hi - lo
    };
    let (x_span, y_span) = (span(|p| p.0), span(|p| p.1));
    let scale = x_span.max(y_span);
    if x_span <= 1e-12 * scale || y_span <= 1e-12 * scale {
        return Err(Error::Degenerate("one user's rate is constant along the frontier".into()));
    }

    let mut slopes = Vec::with_capacity(xy.len() - 1);
    for w in xy.windows(2) {
        let dx = w[1].0 - w[0].0;
        if dx <= 0.0 {
            return Err(Error::Degenerate("frontier is not a function of the first user's rate".into()));
        }
        slopes.push((w[1].1 - w[0].1) / dx);
    }
    let slope_scale = slopes.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let tol = tol * slope_scale;

    let second: Vec<f64> = slopes.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(if second.iter().all(|&d| d <= tol) {
        Curvature::Concave
    } else if second.iter().all(|&d| d >= -tol) {
        Curvature::Convex
    } else {
        Curvature::Inflected
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::enumerate_corners;

    fn labels(a: f64, b: f64, c: f64, d: f64) -> (Curvature, Curvature) {
        let g = ChannelGains::two_user(a, b, c, d, 1.0).unwrap();
        let ab = classify_frontier(&sample_frontier(&g, 1, 257).unwrap()).unwrap();
        let bc = classify_frontier(&sample_frontier(&g, 0, 257).unwrap()).unwrap();
        (ab, bc)
    }

    #[test]
    fn sweep_grid_and_endpoints() {
        let g = ChannelGains::two_user(2.0, 0.2, 1.0, 0.1, 1.0).unwrap();
        let corners = enumerate_corners(&g).unwrap();
        let s = sample_frontier(&g, 1, 3).unwrap();
        let swept: Vec<f64> = s.points.iter().map(|(p, _)| p.as_slice()[0]).collect();
        assert_eq!(swept, vec![0.0, 0.5, 1.0]);
        assert!(s.points.iter().all(|(p, _)| p.as_slice()[1] == 1.0));
        assert_eq!(&s.points[0].1, corners.rate(2).unwrap());
        assert_eq!(&s.points[2].1, corners.rate(3).unwrap());

        let other = sample_frontier(&g, 0, 7).unwrap();
        assert_eq!(&other.points[0].1, corners.rate(1).unwrap());
        assert_eq!(&other.points[6].1, corners.rate(3).unwrap());
        assert!(other.points.iter().all(|(_, r)| r[0] >= 0.0 && r[1] >= 0.0));
    }

    #[test]
    fn frontier_errors() {
        let three = ChannelGains::new(vec![vec![1.0; 3]; 3], 1.0).unwrap();
        assert!(matches!(sample_frontier(&three, 0, 10), Err(Error::UnsupportedDimension { .. })));
        let g = ChannelGains::symmetric(1.0, 1.0, 1.0).unwrap();
        assert!(sample_frontier(&g, 0, 1).is_err());
        assert!(sample_frontier(&g, 2, 10).is_err());
        assert!(classify_frontier(&sample_frontier(&g, 0, 4).unwrap()).is_err());
    }

    #[test]
    fn no_cross_gain_is_degenerate() {
        // b = 0: pinning user 0 and sweeping user 1 leaves R_1 constant
        let g = ChannelGains::two_user(1.0, 0.0, 1.0, 0.5, 1.0).unwrap();
        let s = sample_frontier(&g, 0, 33).unwrap();
        assert!(matches!(classify_frontier(&s), Err(Error::Degenerate(_))));
    }

    #[test]
    fn noise_limited_is_concave() {
        assert_eq!(labels(2.0, 0.2, 1.0, 0.1), (Curvature::Concave, Curvature::Concave));
    }

    #[test]
    fn interference_limited_is_convex() {
        assert_eq!(labels(1.0, 10.0, 1.0, 10.0), (Curvature::Convex, Curvature::Convex));
    }

    #[test]
    fn mixed_regime_has_one_of_each() {
        let (ab, bc) = labels(20.0, 2.0, 1.0, 1.0);
        let mut both = [ab, bc];
        both.sort_by_key(|c| *c as u8);
        assert_eq!(both, [Curvature::Concave, Curvature::Convex]);
    }

    #[test]
    fn inflection_is_reported() {
        assert_eq!(labels(5.0, 1.0, 1.0, 1.0).0, Curvature::Inflected);
    }
}
