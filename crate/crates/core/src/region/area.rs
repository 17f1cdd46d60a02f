//! Two-user region areas: power control versus time-sharing.

use crate::channel::{rates_unchecked, ChannelGains};
use crate::error::{Error, Result};

pub const DEFAULT_AREA_GRID: usize = 1024;

/// Unsigned area of a simple polygon given its vertices in order.
pub fn shoelace(vertices: &[(f64, f64)]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let twice: f64 = (0..n)
        .map(|k| {
            let (x0, y0) = vertices[k];
            let (x1, y1) = vertices[(k + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum();
    twice.abs() / 2.0
}

fn point(gains: &ChannelGains, p0: f64, p1: f64) -> (f64, f64) {
    let r = rates_unchecked(gains, &[p0, p1]);
    (r[0], r[1])
}

/// Area enclosed by the axes and both potential lines, each sampled on a
/// uniform power grid of `grid` points.
pub fn area_power_control(gains: &ChannelGains, grid: usize) -> Result<f64> {
    gains.require_two_users("power-control area")?;
    if grid < 2 {
        return Err(Error::invalid(format!("area grid needs at least 2 samples, got {grid}")));
    }
    let p_max = gains.p_max();
    let power = |k: usize| if k == grid - 1 { p_max } else { p_max * k as f64 / (grid - 1) as f64 };

    // O -> C, along BC (user 0 pinned) up to B, back along AB (user 1 pinned) to A
    let mut boundary = Vec::with_capacity(2 * grid + 1);
    boundary.push((0.0, 0.0));
    boundary.extend((0..grid).map(|k| point(gains, p_max, power(k))));
    boundary.extend((0..grid).rev().map(|k| point(gains, power(k), p_max)));
    Ok(shoelace(&boundary))
}

/// Area of the quadrilateral O-A-B-C spanned by time-sharing through the
/// both-on corner B.
pub fn area_timeshare_via_b(gains: &ChannelGains) -> Result<f64> {
    gains.require_two_users("time-sharing area")?;
    let p = gains.p_max();
    Ok(shoelace(&[(0.0, 0.0), point(gains, p, 0.0), point(gains, p, p), point(gains, 0.0, p)]))
}

/// Area of the TDMA triangle O-A-C. Independent of the cross gains.
pub fn area_timeshare_ac(gains: &ChannelGains) -> Result<f64> {
    let (a, _, c, _) = gains.require_two_users("TDMA area")?;
    let p = gains.p_max();
    Ok(0.5 * (1.0 + a * p).log2() * (1.0 + c * p).log2())
}

/// Signed percentage gain of time-sharing through B over power control.
/// Negative values are losses.
pub fn timeshare_gain_percent(gains: &ChannelGains, grid: usize) -> Result<f64> {
    let power_control = area_power_control(gains, grid)?;
    if power_control <= 0.0 {
        return Err(Error::Degenerate("power-control area is zero".into()));
    }
    Ok(100.0 * (area_timeshare_via_b(gains)? - power_control) / power_control)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sym(cross: f64) -> ChannelGains {
        ChannelGains::symmetric(1.0, cross, 1.0).unwrap()
    }

    #[test]
    fn interference_free_region_is_unit_square() {
        let g = sym(0.0);
        assert_relative_eq!(area_power_control(&g, 64).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(area_timeshare_via_b(&g).unwrap(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn weak_interference_beats_tdma_triangle() {
        let g = sym(0.01);
        assert!(area_power_control(&g, 1024).unwrap() > area_timeshare_ac(&g).unwrap());
    }

    #[test]
    fn strong_interference_area_converges() {
        let g = sym(100.0);
        let coarse = area_power_control(&g, 1024).unwrap();
        let dense = area_power_control(&g, 8192).unwrap();
        assert!((coarse - dense).abs() <= 0.01 * dense);
    }

    #[test]
    fn thin_kite_through_b() {
        let g = sym(10.0);
        let b = (12.0f64 / 11.0).log2();
        assert_relative_eq!(area_timeshare_via_b(&g).unwrap(), b, max_relative = 1e-14);
        assert!((b - 0.1255).abs() < 5e-5);
    }

    #[test]
    fn tdma_triangle_closed_form() {
        assert_eq!(area_timeshare_ac(&sym(0.3)).unwrap(), 0.5);
        let g = ChannelGains::two_user(2.0, 0.2, 1.0, 0.1, 1.0).unwrap();
        assert_relative_eq!(area_timeshare_ac(&g).unwrap(), 0.5 * 3f64.log2(), max_relative = 1e-15);
        let other = ChannelGains::two_user(2.0, 7.0, 1.0, 0.004, 1.0).unwrap();
        assert_eq!(area_timeshare_ac(&g).unwrap().to_bits(), area_timeshare_ac(&other).unwrap().to_bits());
    }

    #[test]
    fn quadrilateral_covers_both_triangles() {
        for &(a, b, c, d) in &[(2.0, 0.2, 1.0, 0.1), (1.0, 10.0, 1.0, 10.0), (20.0, 2.0, 1.0, 1.0)] {
            let g = ChannelGains::two_user(a, b, c, d, 1.0).unwrap();
            let quad = area_timeshare_via_b(&g).unwrap();
            let (pa, pb, pc) = (point(&g, 0.0, 1.0), point(&g, 1.0, 1.0), point(&g, 1.0, 0.0));
            assert!(quad >= shoelace(&[(0.0, 0.0), pa, pb]));
            assert!(quad >= shoelace(&[(0.0, 0.0), pb, pc]));
        }
    }

    #[test]
    fn gain_near_zero_db() {
        let gain = timeshare_gain_percent(&sym(1.0), 1024).unwrap();
        assert!(gain.abs() < 10.0, "gain at 0 dB was {gain}");
    }

    #[test]
    fn weak_interference_loss_is_small() {
        for k in 0..=20 {
            let cross = 10f64.powf(-2.0 + k as f64 / 10.0);
            let gain = timeshare_gain_percent(&sym(cross), 1024).unwrap();
            assert!(gain >= -1.0, "loss {gain}% at cross gain {cross}");
        }
    }

    #[test]
    fn strong_interference_gain_is_large() {
        let gain = timeshare_gain_percent(&sym(100.0), 1024).unwrap();
        assert!((500.0..=1100.0).contains(&gain), "gain {gain}%");
    }

    #[test]
    fn dimension_checks() {
        let three = ChannelGains::new(vec![vec![1.0; 3]; 3], 1.0).unwrap();
        assert!(area_power_control(&three, 64).is_err());
        assert!(area_timeshare_via_b(&three).is_err());
        assert!(area_timeshare_ac(&three).is_err());
        assert!(timeshare_gain_percent(&three, 64).is_err());
    }
}
