//! A Bayesian game with genuine types: an applicant who is talented with
//! probability 1/10 chooses whether to attend university; an employer sets a
//! wage without observing anything. The payoff numbers are this crate's own
//! (university only costs, more for the untalented), so the unique pure
//! equilibrium pools on skipping against a low wage.
//!
//! Run with `cargo run --example education_game`.

use open_games::rational;
use open_games::scenarios;
use open_games::value::Value;

fn main() {
    let game = scenarios::education_game();

    println!("prior over applicant types:");
    for t in game.types()[1].elements() {
        let p = game.prior_weight(&[Value::atom("*"), t.clone()]);
        println!("  {t}: {}", rational::to_string(&p));
    }

    let equilibria = game.enumerate_pure_bayes_nash().unwrap();
    println!("\npure Bayesian Nash equilibria:");
    for eq in &equilibria {
        for (player, table) in game.players().iter().zip(eq) {
            for (t, a) in table {
                println!("  {player} with type {t} plays {a}");
            }
        }
    }

    // Interim view: the employer's expected payoff from each wage, given the
    // pooling equilibrium.
    let pooling = game.pure_to_mixed(&equilibria[0]).unwrap();
    for wage in ["high", "low"] {
        let mut replaced = pooling.clone();
        replaced.strategies[0] = open_games::prob::Kernel::constant(
            game.types()[0].clone(),
            open_games::prob::Dist::dirac(Value::atom(wage), game.actions()[0].clone()).unwrap(),
        );
        let v = game.ex_ante(&replaced, 0).unwrap();
        println!(
            "\nemployer's ex ante payoff if always {wage}: {}",
            rational::to_string(&v)
        );
    }

    let (encoded, context) = game.encode_to_open_game().unwrap();
    let sp = game.profile_to_open_game(&pooling).unwrap();
    println!(
        "\ncompositional engine confirms the pooling equilibrium: {}",
        encoded.is_equilibrium(&context, &sp).unwrap()
    );
}
