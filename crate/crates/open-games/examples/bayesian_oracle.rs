//! Cross-validation in miniature: generate random Bayesian games, solve each
//! with the classical brute-force oracle and with the compositional engine,
//! and confirm the equilibrium sets coincide.
//!
//! Run with `cargo run --example bayesian_oracle`.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use open_games::classical::BayesianGame;
use open_games::rational::{self, Rational};
use open_games::value::{cartesian_product, FiniteSet};

fn random_game(rng: &mut ChaCha8Rng) -> BayesianGame {
    let n = rng.gen_range(2..=3usize);
    let players: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let types: Vec<FiniteSet> = (0..n)
        .map(|i| FiniteSet::atoms((0..rng.gen_range(1..=2usize)).map(|t| format!("t{i}{t}"))))
        .collect();
    let actions: Vec<FiniteSet> = (0..n)
        .map(|i| FiniteSet::atoms((0..rng.gen_range(2..=3usize)).map(|a| format!("a{i}{a}"))))
        .collect();
    let type_grid = cartesian_product(&types.iter().map(FiniteSet::elements).collect::<Vec<_>>());
    let action_grid =
        cartesian_product(&actions.iter().map(FiniteSet::elements).collect::<Vec<_>>());

    let mut prior = BTreeMap::new();
    let weights: Vec<i64> = type_grid.iter().map(|_| rng.gen_range(1..=4i64)).collect();
    let total: i64 = weights.iter().sum();
    for (t, w) in type_grid.iter().zip(&weights) {
        prior.insert(t.clone(), rational::ratio(*w, total));
    }

    let mut utilities = BTreeMap::new();
    for a in &action_grid {
        for t in &type_grid {
            let us: Vec<Rational> = (0..n).map(|_| rational::int(rng.gen_range(-2..=2))).collect();
            utilities.insert((a.clone(), t.clone()), us);
        }
    }
    BayesianGame::new(players, types, actions, prior, utilities).unwrap()
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let rounds = 25;
    let mut total_equilibria = 0usize;
    for round in 0..rounds {
        let game = random_game(&mut rng);
        let classical = game.enumerate_pure_bayes_nash().unwrap();

        let (encoded, context) = game.encode_to_open_game().unwrap();
        let mut compositional: Vec<_> = encoded
            .enumerate_pure_equilibria(&context)
            .unwrap()
            .iter()
            .map(|sp| game.profile_from_open_game(sp).unwrap())
            .collect();
        compositional.sort();

        assert_eq!(classical, compositional, "engines disagreed on round {round}");
        total_equilibria += classical.len();
        println!(
            "round {round:>2}: {} players, {} pure equilibria, engines agree",
            game.player_count(),
            classical.len()
        );
    }
    println!("\n{rounds} random games, {total_equilibria} equilibria, zero disagreements");
}
