//! The prisoner's dilemma solved twice: once by the classical brute-force
//! oracle, once by encoding into parallel Bayesian agents and running the
//! compositional best-response machinery. Both report (D,D) and nothing else.
//!
//! Run with `cargo run --example prisoners_dilemma`.

use open_games::scenarios;

fn main() {
    let game = scenarios::prisoners_dilemma();

    let classical = game.enumerate_pure_bayes_nash().unwrap();
    println!("classical oracle found {} pure equilibrium:", classical.len());
    for eq in &classical {
        for (player, table) in game.players().iter().zip(eq) {
            for (t, a) in table {
                println!("  {player} (type {t}) plays {a}");
            }
        }
    }

    let (encoded, context) = game.encode_to_open_game().unwrap();
    let compositional = encoded.enumerate_pure_equilibria(&context).unwrap();
    println!(
        "compositional engine found {} pure equilibrium",
        compositional.len()
    );

    let translated: Vec<_> = compositional
        .iter()
        .map(|sp| game.profile_from_open_game(sp).unwrap())
        .collect();
    println!("engines agree: {}", translated == classical);
}
