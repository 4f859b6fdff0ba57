//! Build a game, check a partition, and run the solvers.
//!
//! ```sh
//! cargo run --example quickstart
//! ```

use hedonica::fixtures::{FixtureId, load_fixture};
use hedonica::model::Partition;
use hedonica::solve::{as_subset_neutral, enumerate_stable, nash_local_search, potential};
use hedonica::stability::{Notion, classify};

fn main() {
    // The pair-bonus game: singletons are worth 0, every pair 1, and the
    // grand coalition carries a -10 weight on its full set.
    let game = load_fixture(FixtureId::Ex1Separability);

    let partition = Partition::parse("1,2|3", game.n()).unwrap();
    let report = classify(&game, &partition).unwrap();
    for (notion, verdict) in report.rows() {
        println!("{partition} is {notion}-stable: {}", verdict.is_stable());
    }

    // Better-response dynamics from the all-singletons start.
    let neutral = as_subset_neutral(&game).unwrap();
    let (stable, trace) = nash_local_search(&neutral, None).unwrap();
    println!(
        "local search reached {stable} in {} steps, potential {}",
        trace.len(),
        potential(&neutral, &stable).unwrap()
    );

    // Exhaustive ground truth over all 5 partitions of 3 players.
    let nash_stable = enumerate_stable(&game, &[Notion::Nash]).unwrap();
    println!("Nash stable partitions:");
    for p in nash_stable {
        println!("  {p}");
    }
}
