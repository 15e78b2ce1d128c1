//! Entry deterrence built from combinators: the entrant moves, the incumbent
//! observes and responds, a counit pays out. The fixed points are plain Nash
//! equilibria, so "stay out because I would fight" survives even though the
//! fight is not a credible response.
//!
//! Run with `cargo run --example sequential_threat`.

use open_games::prob::{Dist, Kernel};
use open_games::scenarios;
use open_games::value::{FiniteSet, Value};

fn main() {
    let (game, context) = scenarios::sequential_threat();

    let equilibria = game.enumerate_pure_equilibria(&context).unwrap();
    println!("{} pure Nash equilibria:", equilibria.len());
    let report = scenarios::scenario_report("sequential-threat").unwrap();
    for eq in report["pure_equilibria"].as_array().unwrap() {
        println!(
            "  entrant {}, incumbent on entry: {}, off path: {}",
            eq["entrant"].as_str().unwrap(),
            eq["incumbent_at_enter"].as_str().unwrap(),
            eq["incumbent_at_out"].as_str().unwrap(),
        );
    }

    // Check the threat profile explicitly: the entrant stays out, the
    // incumbent fights any entry. The incumbent is unconstrained because
    // entry has probability zero on path.
    let stay_out = Kernel::constant(
        FiniteSet::unit(),
        Dist::dirac(Value::atom("out"), FiniteSet::atoms(["enter", "out"])).unwrap(),
    );
    let always_fight = Kernel::constant(
        FiniteSet::atoms(["enter", "out"]),
        Dist::dirac(Value::atom("fight"), FiniteSet::atoms(["fight", "accommodate"])).unwrap(),
    );
    let threat = scenarios::sequential_threat_profile(stay_out, always_fight);
    println!(
        "\nnon-credible threat profile is an equilibrium: {}",
        game.is_equilibrium(&context, &threat).unwrap()
    );
    println!(
        "reported as such: {}",
        report["includes_non_credible_threat"].as_bool().unwrap()
    );
}
