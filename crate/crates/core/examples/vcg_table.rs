//! Utility tables under raw rates and under VCG payments, with pure Nash
//! equilibria.

use crystal::{build_utility_table, pure_nash, ChannelGains, Mechanism};

fn main() -> crystal::Result<()> {
    let gains = ChannelGains::two_user(1.0, 10.0, 1.0, 10.0, 1.0)?;
    for mechanism in [Mechanism::RawRates, Mechanism::Vcg] {
        let table = build_utility_table(&gains, mechanism)?;
        println!("{mechanism}");
        for p in table.profiles() {
            println!("  {p}  {:?}", table.utilities(p));
        }
        let nash: Vec<String> = pure_nash(&table).iter().map(ToString::to_string).collect();
        println!("  pure Nash: {}", nash.join(", "));
    }
    Ok(())
}
