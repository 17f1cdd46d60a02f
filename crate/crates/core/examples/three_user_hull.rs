//! Convex hull of a three-user corner set; frontier facets face away from
//! the origin.

use crystal::{enumerate_corners, ChannelGains, Hull};

fn main() -> crystal::Result<()> {
    let gains = ChannelGains::new(vec![vec![2.0, 0.1, 0.2], vec![0.3, 1.5, 0.1], vec![0.2, 0.2, 1.0]], 1.0)?;
    let corners = enumerate_corners(&gains)?;
    if let Hull::Facets(facets) = corners.hull()? {
        for f in facets.iter().filter(|f| f.is_frontier()) {
            println!("{:?}  normal {:.3?}", f.vertices, f.normal);
        }
    }
    Ok(())
}
