//! Enumerate the binary-power corner points of a three-user channel.

use crystal::{enumerate_corners, ChannelGains};

fn main() -> crystal::Result<()> {
    let gains = ChannelGains::new(vec![vec![4.0, 0.5, 0.2], vec![0.3, 2.0, 0.6], vec![0.1, 0.4, 1.0]], 1.0)?;
    let corners = enumerate_corners(&gains)?;
    println!("{} corners", corners.len());
    for (profile, rate) in corners.iter() {
        println!("{:>2} {profile}  rates {:?}  sum {:.4}", profile.index(), &**rate, rate.sum());
    }
    Ok(())
}
