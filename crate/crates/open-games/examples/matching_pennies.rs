//! Matching pennies has no pure equilibrium; the uniform mixed profile is
//! one, and exact arithmetic certifies the indifference without epsilons.
//!
//! Run with `cargo run --example matching_pennies`.

use open_games::classical::MixedProfile;
use open_games::prob::{Dist, Kernel};
use open_games::rational;
use open_games::scenarios;

fn main() {
    let game = scenarios::matching_pennies();

    let pure = game.enumerate_pure_bayes_nash().unwrap();
    println!("pure equilibria: {}", pure.len());

    let uniform = MixedProfile {
        strategies: (0..2)
            .map(|i| {
                Kernel::constant(
                    game.types()[i].clone(),
                    Dist::uniform(game.actions()[i].clone()).unwrap(),
                )
            })
            .collect(),
    };
    println!(
        "uniform profile is a Bayesian Nash equilibrium: {}",
        game.is_bayes_nash(&uniform).unwrap()
    );
    for i in 0..2 {
        let v = game.ex_ante(&uniform, i).unwrap();
        println!(
            "  ex ante value for {}: {}",
            game.players()[i],
            rational::to_string(&v)
        );
    }

    // The compositional engine agrees on the mixed profile.
    let (encoded, context) = game.encode_to_open_game().unwrap();
    let sp = game.profile_to_open_game(&uniform).unwrap();
    println!(
        "compositional engine agrees: {}",
        encoded.is_equilibrium(&context, &sp).unwrap()
    );
}
