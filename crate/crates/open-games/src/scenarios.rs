//! Built-in scenarios: the worked examples shipped with the engine, each
//! exercising a different slice of the machinery. The classical games double
//! as fixtures for the oracle cross-validation tests.

use std::collections::BTreeMap;

use serde_json::{json, Value as Json};

use crate::classical::BayesianGame;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::files;
use crate::game::{pure_agent_kernels, OpenGame, StrategyProfile};
use crate::prob::{Dist, Kernel};
use crate::rational::{self, Rational};
use crate::value::{FiniteSet, Value};

fn star() -> Value {
    Value::atom("*")
}

/// A two-player normal-form game: one anonymous type per player.
pub fn normal_form(
    players: [&str; 2],
    actions: [&[&str]; 2],
    payoff: impl Fn(&str, &str) -> (Rational, Rational),
) -> BayesianGame {
    let types = vec![
        FiniteSet::atoms(["*"]),
        FiniteSet::atoms(["*"]),
    ];
    let action_spaces = vec![
        FiniteSet::atoms(actions[0].iter().copied()),
        FiniteSet::atoms(actions[1].iter().copied()),
    ];
    let prior = BTreeMap::from([(vec![star(), star()], rational::one())]);
    let mut utilities = BTreeMap::new();
    for a in actions[0] {
        for b in actions[1] {
            let (u1, u2) = payoff(a, b);
            utilities.insert(
                (
                    vec![Value::atom(*a), Value::atom(*b)],
                    vec![star(), star()],
                ),
                vec![u1, u2],
            );
        }
    }
    BayesianGame::new(
        players.iter().map(|s| s.to_string()).collect(),
        types,
        action_spaces,
        prior,
        utilities,
    )
    .expect("normal-form fixture is well-formed")
}

/// Defect is strictly dominant; (D,D) is the unique pure equilibrium.
pub fn prisoners_dilemma() -> BayesianGame {
    normal_form(["p1", "p2"], [&["C", "D"], &["C", "D"]], |a, b| {
        let cell = match (a, b) {
            ("C", "C") => (2, 2),
            ("C", "D") => (0, 3),
            ("D", "C") => (3, 0),
            _ => (1, 1),
        };
        (rational::int(cell.0), rational::int(cell.1))
    })
}

/// Zero-sum matcher/mismatcher: no pure equilibrium, uniform mixing is one.
pub fn matching_pennies() -> BayesianGame {
    normal_form(["p1", "p2"], [&["H", "T"], &["H", "T"]], |a, b| {
        if a == b {
            (rational::int(1), rational::int(-1))
        } else {
            (rational::int(-1), rational::int(1))
        }
    })
}

/// A signaling-shaped Bayesian game: an employer sets a wage without
/// observing the applicant, who is talented with probability 1/10. The
/// payoff numbers here are this crate's own choice: the employer gains by
/// matching the wage to the talent, university only costs (more so for the
/// untalented), so pooling on "skip" against a low wage is the unique pure
/// equilibrium.
pub fn education_game() -> BayesianGame {
    let players = vec!["employer".to_string(), "applicant".to_string()];
    let types = vec![
        FiniteSet::atoms(["*"]),
        FiniteSet::atoms(["talented", "untalented"]),
    ];
    let actions = vec![
        FiniteSet::atoms(["high", "low"]),
        FiniteSet::atoms(["uni", "skip"]),
    ];
    let prior = BTreeMap::from([
        (
            vec![star(), Value::atom("talented")],
            rational::ratio(1, 10),
        ),
        (
            vec![star(), Value::atom("untalented")],
            rational::ratio(9, 10),
        ),
    ]);
    let mut utilities = BTreeMap::new();
    for wage in ["high", "low"] {
        for choice in ["uni", "skip"] {
            for talent in ["talented", "untalented"] {
                let employer = match (wage, talent) {
                    ("high", "talented") | ("low", "untalented") => rational::int(1),
                    _ => rational::int(0),
                };
                let wage_income = if wage == "high" {
                    rational::int(2)
                } else {
                    rational::int(0)
                };
                let cost = match (choice, talent) {
                    ("uni", "talented") => rational::int(1),
                    ("uni", "untalented") => rational::int(3),
                    _ => rational::int(0),
                };
                utilities.insert(
                    (
                        vec![Value::atom(wage), Value::atom(choice)],
                        vec![star(), Value::atom(talent)],
                    ),
                    vec![employer, wage_income - cost],
                );
            }
        }
    }
    BayesianGame::new(players, types, actions, prior, utilities)
        .expect("education fixture is well-formed")
}

/// Fixture with a probability-zero type row: its actions must be
/// unconstrained in equilibrium.
pub fn zero_weight_type_game() -> BayesianGame {
    let players = vec!["p1".to_string(), "p2".to_string()];
    let types = vec![
        FiniteSet::atoms(["real", "ghost"]),
        FiniteSet::atoms(["*"]),
    ];
    let actions = vec![FiniteSet::atoms(["a", "b"]), FiniteSet::atoms(["a"])];
    let prior = BTreeMap::from([(vec![Value::atom("real"), star()], rational::one())]);
    let mut utilities = BTreeMap::new();
    for a1 in ["a", "b"] {
        for t1 in ["real", "ghost"] {
            let u1 = if a1 == "a" {
                rational::int(1)
            } else {
                rational::int(0)
            };
            utilities.insert(
                (
                    vec![Value::atom(a1), Value::atom("a")],
                    vec![Value::atom(t1), star()],
                ),
                vec![u1, rational::int(0)],
            );
        }
    }
    BayesianGame::new(players, types, actions, prior, utilities)
        .expect("zero-weight fixture is well-formed")
}

/// Every payoff equal to `c`, for both players.
pub fn constant_utility_game(c: Rational) -> BayesianGame {
    normal_form(["p1", "p2"], [&["x", "y"], &["x", "y"]], |_, _| {
        (c.clone(), c.clone())
    })
}

fn coin() -> FiniteSet {
    FiniteSet::atoms(["H", "T"])
}

fn zero_one() -> FiniteSet {
    FiniteSet::numbers([rational::int(0), rational::int(1)]).expect("payoff space")
}

/// The two-coin joint: 5/16 on each agreeing pair, 3/16 on each disagreeing
/// pair, i.e. a fair draw of a 3/4-bias direction shared by both coins.
pub fn biased_coins_prior() -> Dist {
    let h = Value::atom("H");
    let t = Value::atom("T");
    Dist::from_ratios(
        FiniteSet::product(&coin(), &coin()),
        [
            (Value::pair(h.clone(), h.clone()), 5, 16),
            (Value::pair(t.clone(), t.clone()), 5, 16),
            (Value::pair(t.clone(), h.clone()), 3, 16),
            (Value::pair(h, t), 3, 16),
        ],
    )
    .expect("biased prior")
}

/// The biased-coins decision as a bare agent in its ambient context: the
/// hidden residual is the secret coin, the observation is the agent's own
/// flip, and a correct guess pays 1.
pub fn biased_coins_agent() -> (OpenGame, Context) {
    let game = OpenGame::agent(coin(), coin(), zero_one());
    let continuation = Kernel::deterministic(
        FiniteSet::product(&coin(), &coin()),
        zero_one(),
        |v| {
            let (theta, y) = v.as_pair().expect("pair");
            Value::int(if theta == y { 1 } else { 0 })
        },
    )
    .expect("match payoff");
    let context = Context::new(coin(), biased_coins_prior(), continuation)
        .expect("biased context");
    (game, context)
}

/// The same decision assembled from combinators: a prior computation feeding
/// the agent and a secret wire, closed by a counit that pays out the match.
/// The closed game's unique context is trivial; all the structure lives in
/// the tree.
pub fn biased_coins_composite() -> (OpenGame, Context) {
    let unit = FiniteSet::unit();
    let pair_space = FiniteSet::product(&coin(), &coin());

    // Prior as a computation out of the unit interface. Backward wire is
    // trivial.
    let prior_fwd = Kernel::constant(unit.clone(), biased_coins_prior());
    let prior_back = Kernel::deterministic(
        FiniteSet::product(&unit, &unit),
        unit.clone(),
        |_| Value::unit(),
    )
    .expect("prior backward");
    let prior_comp = OpenGame::computation(prior_fwd, prior_back);

    // Agent guesses from its own flip; the secret coin passes through
    // untouched.
    let agent = OpenGame::agent(coin(), coin(), zero_one());
    let pass_through = OpenGame::computation(Kernel::identity(coin()), Kernel::identity(unit.clone()));
    let middle = OpenGame::tensor(agent, pass_through);

    // Counit: compare guess and secret, pay (1,()) or (0,()).
    let payoff_space = FiniteSet::product(&zero_one(), &unit);
    let counit_kernel = Kernel::deterministic(pair_space, payoff_space, |v| {
        let (guess, secret) = v.as_pair().expect("pair");
        Value::pair(
            Value::int(if guess == secret { 1 } else { 0 }),
            Value::unit(),
        )
    })
    .expect("counit kernel");
    let counit = OpenGame::counit(counit_kernel);

    let game = OpenGame::seq(OpenGame::seq(prior_comp, middle).expect("wiring"), counit)
        .expect("wiring");
    (game, Context::closed())
}

/// Profile shape for [`biased_coins_composite`].
pub fn biased_coins_composite_profile(strategy: Kernel) -> StrategyProfile {
    StrategyProfile::pair(
        StrategyProfile::pair(
            StrategyProfile::Unit,
            StrategyProfile::pair(StrategyProfile::Agent(strategy), StrategyProfile::Unit),
        ),
        StrategyProfile::Unit,
    )
}

/// The copy strategy: guess whatever was observed.
pub fn copy_strategy() -> Kernel {
    Kernel::identity(coin())
}

/// Entry deterrence as a sequential open game: the entrant moves, the
/// incumbent observes the move and responds, payoffs close the diagram.
/// Equilibria here are plain Nash equilibria, so the profile where the
/// incumbent threatens to fight and the entrant stays out survives even
/// though the threat is not credible.
pub fn sequential_threat() -> (OpenGame, Context) {
    let entry = FiniteSet::atoms(["enter", "out"]);
    let response = FiniteSet::atoms(["fight", "accommodate"]);
    let entrant_pay = FiniteSet::numbers([rational::int(-1), rational::int(0), rational::int(1)])
        .expect("payoffs");
    let incumbent_pay = FiniteSet::numbers([rational::int(-1), rational::int(1), rational::int(2)])
        .expect("payoffs");
    let unit = FiniteSet::unit();

    let entrant = OpenGame::agent(unit.clone(), entry.clone(), entrant_pay.clone());

    // Duplicate the entrant's move: one copy is observed by the incumbent,
    // one flows on to the payoff kernel.
    let copy_comp = OpenGame::computation(
        Kernel::copy(entry.clone()),
        Kernel::deterministic(
            FiniteSet::product(&entrant_pay, &unit),
            entrant_pay.clone(),
            |v| v.as_pair().expect("pair").0.clone(),
        )
        .expect("copy backward"),
    );

    let pass = OpenGame::computation(Kernel::identity(entry.clone()), Kernel::identity(entrant_pay.clone()));
    let incumbent = OpenGame::agent(entry.clone(), response.clone(), incumbent_pay.clone());
    let middle = OpenGame::tensor(pass, incumbent);

    let outcome_space = FiniteSet::product(&entrant_pay, &incumbent_pay);
    let payoff_kernel = Kernel::deterministic(
        FiniteSet::product(&entry, &response),
        outcome_space,
        |v| {
            let (e, m) = v.as_pair().expect("pair");
            let (u1, u2) = if e == &Value::atom("out") {
                (0, 2)
            } else if m == &Value::atom("fight") {
                (-1, -1)
            } else {
                (1, 1)
            };
            Value::pair(Value::int(u1), Value::int(u2))
        },
    )
    .expect("payoff kernel");
    let counit = OpenGame::counit(payoff_kernel);

    let game = OpenGame::seq(
        OpenGame::seq(OpenGame::seq(entrant, copy_comp).expect("wiring"), middle).expect("wiring"),
        counit,
    )
    .expect("wiring");
    (game, Context::closed())
}

/// Profile shape for [`sequential_threat`].
pub fn sequential_threat_profile(entrant: Kernel, incumbent: Kernel) -> StrategyProfile {
    StrategyProfile::pair(
        StrategyProfile::pair(
            StrategyProfile::pair(StrategyProfile::Agent(entrant), StrategyProfile::Unit),
            StrategyProfile::pair(StrategyProfile::Unit, StrategyProfile::Agent(incumbent)),
        ),
        StrategyProfile::Unit,
    )
}

/// Run a named scenario and produce its JSON report.
pub fn scenario_report(name: &str) -> Result<Json> {
    match name {
        "biased-coins" => biased_coins_report(),
        "prisoners-dilemma" => classical_report("prisoners-dilemma", &prisoners_dilemma()),
        "matching-pennies" => matching_pennies_report(),
        "education" => classical_report("education", &education_game()),
        "sequential-threat" => sequential_threat_report(),
        other => Err(Error::validation(
            "scenario",
            format!(
                "unknown scenario {other:?}; available: biased-coins, prisoners-dilemma, matching-pennies, education, sequential-threat"
            ),
        )),
    }
}

fn biased_coins_report() -> Result<Json> {
    let (game, context) = biased_coins_agent();
    let prior = biased_coins_prior();
    let posterior_h = prior.bayes_update(&Value::atom("H"))?;
    let posterior_t = prior.bayes_update(&Value::atom("T"))?;

    let copy = StrategyProfile::Agent(copy_strategy());
    let copy_is_equilibrium = game.is_equilibrium(&context, &copy)?;

    let mut pure_report = Vec::new();
    for kernel in pure_agent_kernels(&coin(), &coin()) {
        let profile = StrategyProfile::Agent(kernel.clone());
        let accepted = game.br_contains(&context, &copy, &profile)?;
        pure_report.push(json!({
            "strategy": files::kernel_to_json(&kernel),
            "best_response": accepted,
        }));
    }

    // The composite wiring must agree with the bare agent.
    let (composite, closed) = biased_coins_composite();
    let composite_eqs = composite.enumerate_pure_equilibria(&closed)?;
    let composite_copy_only = composite_eqs.len() == 1
        && composite_eqs[0] == biased_coins_composite_profile(copy_strategy());

    Ok(json!({
        "scenario": "biased-coins",
        "posterior_after_H": files::dist_to_json(&posterior_h),
        "posterior_after_T": files::dist_to_json(&posterior_t),
        "optimal_strategy": files::kernel_to_json(&copy_strategy()),
        "copy_is_equilibrium": copy_is_equilibrium,
        "pure_strategies": pure_report,
        "composite_game_agrees": composite_copy_only,
    }))
}

fn classical_report(name: &str, game: &BayesianGame) -> Result<Json> {
    let classical = game.enumerate_pure_bayes_nash()?;
    let (encoded, context) = game.encode_to_open_game()?;
    let mut compositional = Vec::new();
    for sp in encoded.enumerate_pure_equilibria(&context)? {
        compositional.push(game.profile_from_open_game(&sp)?);
    }
    compositional.sort();
    let agree = classical == compositional;
    if !agree {
        return Err(Error::Internal(format!(
            "engines disagree on {name}: classical found {} pure equilibria, compositional {}",
            classical.len(),
            compositional.len()
        )));
    }
    Ok(json!({
        "scenario": name,
        "pure_equilibria": classical
            .iter()
            .map(|p| json!(files::pure_profile_to_file(game, p)))
            .collect::<Vec<_>>(),
        "engines_agree": agree,
    }))
}

fn matching_pennies_report() -> Result<Json> {
    let game = matching_pennies();
    let base = classical_report("matching-pennies", &game)?;
    let uniform = crate::classical::MixedProfile {
        strategies: (0..2)
            .map(|i| {
                Kernel::constant(
                    game.types()[i].clone(),
                    Dist::uniform(game.actions()[i].clone()).expect("uniform"),
                )
            })
            .collect(),
    };
    let classical_ok = game.is_bayes_nash(&uniform)?;
    let (encoded, context) = game.encode_to_open_game()?;
    let sp = game.profile_to_open_game(&uniform)?;
    let compositional_ok = encoded.is_equilibrium(&context, &sp)?;
    let mut report = base;
    report["uniform_mixed_profile"] = json!({
        "classical": classical_ok,
        "compositional": compositional_ok,
        "agree": classical_ok == compositional_ok,
    });
    Ok(report)
}

fn sequential_threat_report() -> Result<Json> {
    let (game, context) = sequential_threat();
    let eqs = game.enumerate_pure_equilibria(&context)?;

    let entry = FiniteSet::atoms(["enter", "out"]);
    let response = FiniteSet::atoms(["fight", "accommodate"]);
    let unit = FiniteSet::unit();

    let mut found = Vec::new();
    let mut non_credible_found = false;
    for eq in &eqs {
        // Extract the two agent kernels back out of the profile tree.
        if let StrategyProfile::Pair(left, _) = eq {
            if let StrategyProfile::Pair(inner, middle) = left.as_ref() {
                if let (StrategyProfile::Pair(entrant, _), StrategyProfile::Pair(_, incumbent)) =
                    (inner.as_ref(), middle.as_ref())
                {
                    if let (StrategyProfile::Agent(e), StrategyProfile::Agent(m)) =
                        (entrant.as_ref(), incumbent.as_ref())
                    {
                        let entrant_move = e.apply(&Value::unit())?.support().next().unwrap().clone();
                        let at_enter = m.apply(&Value::atom("enter"))?.support().next().unwrap().clone();
                        let at_out = m.apply(&Value::atom("out"))?.support().next().unwrap().clone();
                        if entrant_move == Value::atom("out") && at_enter == Value::atom("fight") {
                            non_credible_found = true;
                        }
                        found.push(json!({
                            "entrant": entrant_move.text(),
                            "incumbent_at_enter": at_enter.text(),
                            "incumbent_at_out": at_out.text(),
                        }));
                    }
                }
            }
        }
    }
    let _ = (entry, response, unit);
    Ok(json!({
        "scenario": "sequential-threat",
        "pure_equilibria": found,
        "includes_non_credible_threat": non_credible_found,
    }))
}
