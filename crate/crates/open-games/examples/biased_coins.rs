//! Two coins share an unknown 3/4 bias. An agent flips one, observes it, and
//! must guess the other. Exact Bayesian updating says: copy your observation,
//! and the posterior on a match is exactly 5/8.
//!
//! Run with `cargo run --example biased_coins`.

use open_games::game::{pure_agent_kernels, StrategyProfile};
use open_games::rational;
use open_games::scenarios;
use open_games::value::{FiniteSet, Value};

fn main() {
    let prior = scenarios::biased_coins_prior();
    println!("joint prior over (secret, observed):");
    for (v, w) in prior.iter() {
        println!("  {v}: {}", rational::to_string(w));
    }

    for side in ["H", "T"] {
        let posterior = prior.bayes_update(&Value::atom(side)).unwrap();
        println!("\nposterior over the secret coin after observing {side}:");
        for (v, w) in posterior.iter() {
            println!("  {v}: {}", rational::to_string(w));
        }
    }

    // The agent's decision problem, and which pure strategies are best
    // responses.
    let (game, context) = scenarios::biased_coins_agent();
    let copy = StrategyProfile::Agent(scenarios::copy_strategy());
    let coin = FiniteSet::atoms(["H", "T"]);
    println!("\npure strategies (observation ↦ guess):");
    for kernel in pure_agent_kernels(&coin, &coin) {
        let ok = game
            .br_contains(&context, &copy, &StrategyProfile::Agent(kernel.clone()))
            .unwrap();
        let h = kernel.apply(&Value::atom("H")).unwrap().support().next().unwrap().clone();
        let t = kernel.apply(&Value::atom("T")).unwrap().support().next().unwrap().clone();
        println!("  H↦{h}, T↦{t}: {}", if ok { "best response" } else { "rejected" });
    }

    // The same decision wired from combinators: a prior computation, the
    // agent in parallel with the untouched secret wire, and a counit paying
    // out the match. The closed game has a unique pure equilibrium.
    let (composite, closed) = scenarios::biased_coins_composite();
    let equilibria = composite.enumerate_pure_equilibria(&closed).unwrap();
    println!(
        "\ncombinator form: {} pure equilibrium (the copy strategy: {})",
        equilibria.len(),
        equilibria[0] == scenarios::biased_coins_composite_profile(scenarios::copy_strategy()),
    );
}
