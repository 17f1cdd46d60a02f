//! Frontier curvature and convex hull for the canonical two-user channels.

use crystal::{classify_frontier, enumerate_corners, sample_frontier, ChannelGains};

fn main() -> crystal::Result<()> {
    let channels = [
        ("noise-limited", (2.0, 0.2, 1.0, 0.1)),
        ("mixed", (20.0, 2.0, 1.0, 1.0)),
        ("interference-limited", (1.0, 10.0, 1.0, 10.0)),
    ];
    for (name, (a, b, c, d)) in channels {
        let gains = ChannelGains::two_user(a, b, c, d, 1.0)?;
        let ab = classify_frontier(&sample_frontier(&gains, 1, 257)?)?;
        let bc = classify_frontier(&sample_frontier(&gains, 0, 257)?)?;
        let hull = enumerate_corners(&gains)?.hull()?;
        println!("{name:<22} A-B {ab:<9} B-C {bc:<9} hull {:?}", hull.vertices());
    }
    Ok(())
}
