//! Check joint distributions against the correlated-equilibrium
//! inequalities and map an equilibrium to time-sharing weights.

use crystal::{
    build_utility_table, crystallized_rates, enumerate_corners, is_correlated_equilibrium, theta_from_distribution,
    ChannelGains, JointDistribution, Mechanism,
};

fn main() -> crystal::Result<()> {
    let gains = ChannelGains::two_user(1.0, 10.0, 1.0, 10.0, 1.0)?;
    let table = build_utility_table(&gains, Mechanism::Vcg)?;
    let corners = enumerate_corners(&gains)?;

    for pmf in [vec![0.0, 0.5, 0.5, 0.0], vec![0.0, 0.3, 0.3, 0.4], vec![0.0, 0.0, 0.0, 1.0]] {
        let dist = JointDistribution::new(pmf.clone())?;
        let verdict = is_correlated_equilibrium(&table, &dist, 1e-9);
        print!("{pmf:?}: {verdict:?}");
        if verdict.holds() {
            let theta = theta_from_distribution(&dist, 1e-9)?;
            print!("  rates {:?}", &*crystallized_rates(&corners, &theta)?);
        }
        println!();
    }
    Ok(())
}
