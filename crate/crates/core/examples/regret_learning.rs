//! Regret matching on the VCG game: the empirical play converges to a
//! correlated equilibrium, read off as time-sharing weights.

use crystal::{learning, ChannelGains, LearningConfig, Mechanism};

fn main() -> crystal::Result<()> {
    let gains = ChannelGains::two_user(1.0, 10.0, 1.0, 10.0, 1.0)?;
    for seed in 0..4 {
        let run = learning::run(&gains, Mechanism::Vcg, &LearningConfig::new(20_000, seed))?;
        println!(
            "seed {seed}: theta {:?}  ce {}  max regret {:.2e}",
            run.theta(),
            if run.ce.holds() { "holds" } else { "violated" },
            run.max_average_regret().into_iter().fold(0.0, f64::max),
        );
    }
    Ok(())
}
