//! Region area under power control versus time sharing through the both-on
//! corner, for a symmetric channel as the cross gain is swept.

use crystal::region::DEFAULT_AREA_GRID;
use crystal::{area_power_control, area_timeshare_ac, area_timeshare_via_b, timeshare_gain_percent, ChannelGains};

fn main() -> crystal::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>9}", "dB", "pc", "via B", "A-C", "gain %");
    for db in (-20..=20).step_by(5) {
        let x = 10f64.powf(db as f64 / 10.0);
        let gains = ChannelGains::symmetric(1.0, x, 1.0)?;
        println!(
            "{db:>6} {:>10.5} {:>10.5} {:>10.5} {:>9.2}",
            area_power_control(&gains, DEFAULT_AREA_GRID)?,
            area_timeshare_via_b(&gains)?,
            area_timeshare_ac(&gains)?,
            timeshare_gain_percent(&gains, DEFAULT_AREA_GRID)?,
        );
    }
    Ok(())
}
