//! Game-level algebraic properties: equilibrium checking must be invariant
//! under re-bracketing of sequential and parallel composition, mixed
//! optimality must coincide with support inclusion in the pure argmax, and
//! the closed-form agent context of the parallel-agents construction must
//! match what the localization machinery computes.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use open_games::classical::{nest_values, BayesianGame, MixedProfile};
use open_games::context::{CanonicalContext, Context};
use open_games::game::{
    check_bisimulation, pure_agent_kernels, BisimRelation, OpenGame, StrategyProfile,
};
use open_games::laws::Gen;
use open_games::lens::{structural, LensInterface};
use open_games::prob::{Dist, Kernel};
use open_games::rational::{self, Rational};
use open_games::value::{cartesian_product, FiniteSet, Value};

/// A random atom: a handful of lens strategies and a preference that is an
/// arbitrary deterministic function of the canonical context (constant in
/// the profile, as atoms must be).
fn random_atom(
    gen: &mut Gen,
    rng: &mut ChaCha8Rng,
    source: &LensInterface,
    target: &LensInterface,
) -> (OpenGame, Vec<StrategyProfile>) {
    let n = rng.gen_range(1..=3usize);
    let strategies: Vec<_> = (0..n).map(|_| gen.lens(source, target)).collect();
    let salt = rng.gen_range(0..7usize);
    let preference = Arc::new(move |c: &CanonicalContext| {
        let fingerprint = c.x_marginal.support().count()
            + c.posterior_continuation.len()
            + salt;
        (0..n)
            .filter(|i| (i + fingerprint).is_multiple_of(2) || *i == fingerprint % n)
            .collect::<BTreeSet<usize>>()
    });
    let game = OpenGame::atom(strategies, preference).expect("atom");
    let profiles = (0..n).map(StrategyProfile::Atom).collect();
    (game, profiles)
}

/// A random computation between the interfaces.
fn random_computation(gen: &mut Gen, source: &LensInterface, target: &LensInterface) -> OpenGame {
    let forward = gen.kernel(&source.covariant, &target.covariant);
    let backward = gen.kernel(&target.contravariant, &source.contravariant);
    OpenGame::computation(forward, backward)
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

#[test]
fn sequential_composition_is_associative_for_equilibria() {
    let mut gen = Gen::new(2024, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for _ in 0..60 {
        let p = gen.interface("p");
        let q = gen.interface("q");
        let r = gen.interface("r");
        let s = gen.interface("s");

        let (g, g_profiles) = random_atom(&mut gen, &mut rng, &p, &q);
        let h = random_computation(&mut gen, &q, &r);
        let (k, k_profiles) = random_atom(&mut gen, &mut rng, &r, &s);

        let left = OpenGame::seq(OpenGame::seq(g.clone(), h.clone()).unwrap(), k.clone()).unwrap();
        let right = OpenGame::seq(g, OpenGame::seq(h, k).unwrap()).unwrap();

        let context = gen.context(&p.covariant, &s.covariant, &s.contravariant);

        for _ in 0..4 {
            let sg = pick(&mut rng, &g_profiles).clone();
            let sk = pick(&mut rng, &k_profiles).clone();
            let left_profile = StrategyProfile::pair(
                StrategyProfile::pair(sg.clone(), StrategyProfile::Unit),
                sk.clone(),
            );
            let right_profile =
                StrategyProfile::pair(sg, StrategyProfile::pair(StrategyProfile::Unit, sk));
            let a = left.is_equilibrium(&context, &left_profile).unwrap();
            let b = right.is_equilibrium(&context, &right_profile).unwrap();
            assert_eq!(a, b, "bracketing changed the equilibrium verdict");

            // Also check br membership with an independent deviation.
            let dg = pick(&mut rng, &g_profiles).clone();
            let dk = pick(&mut rng, &k_profiles).clone();
            let left_dev = StrategyProfile::pair(
                StrategyProfile::pair(dg.clone(), StrategyProfile::Unit),
                dk.clone(),
            );
            let right_dev =
                StrategyProfile::pair(dg, StrategyProfile::pair(StrategyProfile::Unit, dk));
            let a = left
                .br_contains(&context, &left_profile, &left_dev)
                .unwrap();
            let b = right
                .br_contains(&context, &right_profile, &right_dev)
                .unwrap();
            assert_eq!(a, b, "bracketing changed best-response membership");
        }
    }
}

#[test]
fn tensor_and_sequence_interchange() {
    let mut gen = Gen::new(77, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(5151);
    for _ in 0..40 {
        let p1 = gen.interface("p1");
        let q1 = gen.interface("q1");
        let r1 = gen.interface("r1");
        let p2 = gen.interface("p2");
        let q2 = gen.interface("q2");
        let r2 = gen.interface("r2");

        let (g1, g1_profiles) = random_atom(&mut gen, &mut rng, &p1, &q1);
        let h1 = random_computation(&mut gen, &q1, &r1);
        let g2 = random_computation(&mut gen, &p2, &q2);
        let (h2, h2_profiles) = random_atom(&mut gen, &mut rng, &q2, &r2);

        // (H1∘G1) ⊗ (H2∘G2) versus (H1⊗H2) ∘ (G1⊗G2).
        let tensor_of_seq = OpenGame::tensor(
            OpenGame::seq(g1.clone(), h1.clone()).unwrap(),
            OpenGame::seq(g2.clone(), h2.clone()).unwrap(),
        );
        let seq_of_tensor = OpenGame::seq(
            OpenGame::tensor(g1, g2),
            OpenGame::tensor(h1, h2),
        )
        .unwrap();

        let context = gen.context(
            &FiniteSet::product(&p1.covariant, &p2.covariant),
            &FiniteSet::product(&r1.covariant, &r2.covariant),
            &FiniteSet::product(&r1.contravariant, &r2.contravariant),
        );

        for _ in 0..4 {
            let s1 = pick(&mut rng, &g1_profiles).clone();
            let s2 = pick(&mut rng, &h2_profiles).clone();
            let d1 = pick(&mut rng, &g1_profiles).clone();
            let d2 = pick(&mut rng, &h2_profiles).clone();

            let tos_profile = StrategyProfile::pair(
                StrategyProfile::pair(s1.clone(), StrategyProfile::Unit),
                StrategyProfile::pair(StrategyProfile::Unit, s2.clone()),
            );
            let sot_profile = StrategyProfile::pair(
                StrategyProfile::pair(s1, StrategyProfile::Unit),
                StrategyProfile::pair(StrategyProfile::Unit, s2),
            );
            let tos_dev = StrategyProfile::pair(
                StrategyProfile::pair(d1.clone(), StrategyProfile::Unit),
                StrategyProfile::pair(StrategyProfile::Unit, d2.clone()),
            );
            let sot_dev = StrategyProfile::pair(
                StrategyProfile::pair(d1, StrategyProfile::Unit),
                StrategyProfile::pair(StrategyProfile::Unit, d2),
            );

            let a = tensor_of_seq
                .br_contains(&context, &tos_profile, &tos_dev)
                .unwrap();
            let b = seq_of_tensor
                .br_contains(&context, &sot_profile, &sot_dev)
                .unwrap();
            assert_eq!(a, b, "interchange law failed");
        }
    }
}

#[test]
fn associator_is_natural_for_equilibria() {
    let mut gen = Gen::new(909, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(6161);
    for _ in 0..30 {
        let ifaces: Vec<(LensInterface, LensInterface)> = (0..3)
            .map(|i| {
                (
                    gen.interface(&format!("p{i}")),
                    gen.interface(&format!("q{i}")),
                )
            })
            .collect();
        let mut games = Vec::new();
        let mut profiles = Vec::new();
        for (p, q) in &ifaces {
            let (g, ps) = random_atom(&mut gen, &mut rng, p, q);
            games.push(g);
            profiles.push(ps);
        }
        let (p1, q1) = &ifaces[0];
        let (p2, q2) = &ifaces[1];
        let (p3, q3) = &ifaces[2];

        // α ∘ (G1 ⊗ (G2 ⊗ G3)) where α reassociates to the left.
        let right_nested = OpenGame::tensor(
            games[0].clone(),
            OpenGame::tensor(games[1].clone(), games[2].clone()),
        );
        let before = OpenGame::seq(
            right_nested,
            OpenGame::structural(structural::assoc_inv(q1, q2, q3)),
        )
        .unwrap();

        // ((G1 ⊗ G2) ⊗ G3) ∘ α.
        let left_nested = OpenGame::tensor(
            OpenGame::tensor(games[0].clone(), games[1].clone()),
            games[2].clone(),
        );
        let after = OpenGame::seq(
            OpenGame::structural(structural::assoc_inv(p1, p2, p3)),
            left_nested,
        )
        .unwrap();

        let context = gen.context(
            &FiniteSet::product(
                &p1.covariant,
                &FiniteSet::product(&p2.covariant, &p3.covariant),
            ),
            &FiniteSet::product(
                &FiniteSet::product(&q1.covariant, &q2.covariant),
                &q3.covariant,
            ),
            &FiniteSet::product(
                &FiniteSet::product(&q1.contravariant, &q2.contravariant),
                &q3.contravariant,
            ),
        );

        for _ in 0..3 {
            let s: Vec<StrategyProfile> = (0..3)
                .map(|i| pick(&mut rng, &profiles[i]).clone())
                .collect();
            let before_profile = StrategyProfile::pair(
                StrategyProfile::pair(
                    s[0].clone(),
                    StrategyProfile::pair(s[1].clone(), s[2].clone()),
                ),
                StrategyProfile::Unit,
            );
            let after_profile = StrategyProfile::pair(
                StrategyProfile::Unit,
                StrategyProfile::pair(
                    StrategyProfile::pair(s[0].clone(), s[1].clone()),
                    s[2].clone(),
                ),
            );
            let a = before.is_equilibrium(&context, &before_profile).unwrap();
            let b = after.is_equilibrium(&context, &after_profile).unwrap();
            assert_eq!(a, b, "associator naturality failed at the br level");
        }
    }
}

/// All distributions over `elems` whose weights have denominator dividing
/// `max_denominator`.
fn mixed_grid(elems: &[Value], space: &FiniteSet, max_denominator: i64) -> Vec<Dist> {
    let mut out = Vec::new();
    for d in 1..=max_denominator {
        let per_action: Vec<Vec<i64>> = elems.iter().map(|_| (0..=d).collect()).collect();
        for combo in cartesian_product(&per_action) {
            if combo.iter().sum::<i64>() != d {
                continue;
            }
            let raw: BTreeMap<Value, Rational> = elems
                .iter()
                .cloned()
                .zip(combo.iter().map(|k| rational::ratio(*k, d)))
                .filter(|(_, w)| w != &rational::zero())
                .collect();
            out.push(Dist::from_weights(space.clone(), raw).expect("grid point"));
        }
    }
    out.sort_by_key(|d| format!("{d:?}"));
    out.dedup();
    out
}

#[test]
fn mixed_optimality_reduces_to_support_inclusion() {
    let mut gen = Gen::new(31337, 2);
    for action_count in [2usize, 3] {
        for _ in 0..12 {
            let obs = gen.space_sized("x", 1, 2);
            let act = FiniteSet::atoms((0..action_count).map(|i| format!("a{i}")));
            let payoffs = FiniteSet::numbers((-2..=2).map(rational::int)).unwrap();
            let theta = gen.space_sized("th", 1, 3);
            let history = gen.dist(&FiniteSet::product(&theta, &obs));
            let continuation = gen.kernel(&FiniteSet::product(&theta, &act), &payoffs);
            let context = Context::new(theta, history, continuation).unwrap();
            let canonical = context.canonicalize().unwrap();

            let grid = mixed_grid(&act.elements(), &act, 6);
            for x in canonical.x_marginal.support() {
                // Pure expected utilities and the argmax set.
                let mut values = BTreeMap::new();
                for y in act.elements() {
                    let eu = canonical.payoff(x, &y).unwrap().expectation().unwrap();
                    values.insert(y, eu);
                }
                let best = values.values().max().unwrap().clone();
                let argmax: BTreeSet<&Value> = values
                    .iter()
                    .filter(|(_, v)| **v == best)
                    .map(|(k, _)| k)
                    .collect();

                for alpha in &grid {
                    let mut eu = rational::zero();
                    for (y, w) in alpha.iter() {
                        eu += w * &values[y];
                    }
                    let optimal_by_value = eu == best;
                    let optimal_by_support =
                        alpha.support().all(|y| argmax.contains(y));
                    assert_eq!(
                        optimal_by_value, optimal_by_support,
                        "linearity reduction failed at {x} for {alpha:?}"
                    );
                }
            }

            // Cross-check through the engine on whole kernels: a kernel is
            // accepted iff it is supported on the argmax at every supported
            // observation.
            let game = OpenGame::agent(obs.clone(), act.clone(), payoffs.clone());
            let some_profile = StrategyProfile::Agent(Kernel::constant(
                obs.clone(),
                Dist::uniform(act.clone()).unwrap(),
            ));
            for alpha in grid.iter().take(12) {
                let kernel = Kernel::constant(obs.clone(), alpha.clone());
                let accepted = game
                    .br_contains(&context, &some_profile, &StrategyProfile::Agent(kernel))
                    .unwrap();
                let expected = canonical.x_marginal.support().all(|x| {
                    let mut best: Option<Rational> = None;
                    let mut argmax = BTreeSet::new();
                    for y in act.elements() {
                        let eu = canonical.payoff(x, &y).unwrap().expectation().unwrap();
                        match &best {
                            Some(b) if &eu < b => {}
                            Some(b) if &eu == b => {
                                argmax.insert(y);
                            }
                            _ => {
                                best = Some(eu);
                                argmax = BTreeSet::from([y]);
                            }
                        }
                    }
                    alpha.support().all(|y| argmax.contains(y))
                });
                assert_eq!(accepted, expected, "engine disagrees with the grid oracle");
            }
        }
    }
}

/// Build the closed-form local context for player `i` of the parallel-agents
/// encoding: the full joint type draw stays hidden, the player observes
/// their own type, and the continuation plays the other players' strategies
/// out against the hidden draw.
fn closed_form_agent_context(
    game: &BayesianGame,
    s: &MixedProfile,
    i: usize,
) -> Context {
    let n = game.player_count();
    let types: Vec<FiniteSet> = game.types().to_vec();
    let theta = open_games::classical::nest_spaces(&types);
    let obs = types[i].clone();

    let mut history_raw: BTreeMap<Value, Rational> = BTreeMap::new();
    let type_grid =
        cartesian_product(&types.iter().map(FiniteSet::elements).collect::<Vec<_>>());
    for profile in &type_grid {
        let p = game.prior_weight(profile);
        if p != rational::zero() {
            history_raw.insert(
                Value::pair(nest_values(profile), profile[i].clone()),
                p,
            );
        }
    }
    let history =
        Dist::from_weights(FiniteSet::product(&theta, &obs), history_raw).expect("history");

    // Payoff value space for player i, matching the encoder's.
    let mut payoff_values = Vec::new();
    let action_grid =
        cartesian_product(&game.actions().iter().map(FiniteSet::elements).collect::<Vec<_>>());
    for a in &action_grid {
        for t in &type_grid {
            payoff_values.push(game.utility(a, t, i).expect("total"));
        }
    }
    let payoffs = FiniteSet::numbers(payoff_values).expect("payoff space");

    let exposed = FiniteSet::product(&types[i], &game.actions()[i]);
    let continuation = Kernel::from_fn(
        FiniteSet::product(&theta, &exposed),
        payoffs.clone(),
        |v| {
            let (hidden, play) = v.as_pair()?;
            let type_profile = open_games::classical::unnest_values(hidden, n)?;
            let (_echo, own_action) = play.as_pair()?;
            // Average the other players' strategies against the hidden draw.
            let mut weights: BTreeMap<Value, Rational> = BTreeMap::new();
            let other_actions: Vec<Vec<Value>> = (0..n)
                .map(|j| {
                    if j == i {
                        vec![own_action.clone()]
                    } else {
                        game.actions()[j].elements()
                    }
                })
                .collect();
            for action_profile in cartesian_product(&other_actions) {
                let mut w = rational::one();
                for (j, aj) in action_profile.iter().enumerate() {
                    if j != i {
                        w *= s.strategies[j].apply(&type_profile[j])?.weight(aj);
                    }
                    if w == rational::zero() {
                        break;
                    }
                }
                if w != rational::zero() {
                    let u = game.utility(&action_profile, &type_profile, i)?;
                    *weights.entry(Value::num(u)).or_insert_with(rational::zero) += w;
                }
            }
            Dist::from_weights(payoffs.clone(), weights)
        },
    )
    .expect("closed-form continuation");

    Context::new(theta, history, continuation).expect("closed-form context")
}

/// Peel the engine's localized context for player `i` of the right-nested
/// tensor encoding, using the other players' play lenses.
fn engine_agent_context(
    game: &BayesianGame,
    s: &MixedProfile,
    context: &Context,
    i: usize,
) -> Context {
    let n = game.player_count();
    let play_of = |j: usize| {
        let payoffs = {
            let mut values = Vec::new();
            let type_grid = cartesian_product(
                &game.types().iter().map(FiniteSet::elements).collect::<Vec<_>>(),
            );
            let action_grid = cartesian_product(
                &game.actions().iter().map(FiniteSet::elements).collect::<Vec<_>>(),
            );
            for a in &action_grid {
                for t in &type_grid {
                    values.push(game.utility(a, t, j).expect("total"));
                }
            }
            FiniteSet::numbers(values).expect("payoffs")
        };
        let agent = OpenGame::agent_delta(
            game.types()[j].clone(),
            game.actions()[j].clone(),
            payoffs,
        );
        agent
            .play(&StrategyProfile::Agent(s.strategies[j].clone()))
            .expect("agent play lens")
    };

    let mut current = context.clone();
    // Walk down the right-nested tensor: at depth j the left component is
    // agent j and the right component is the tensor of the rest.
    for j in 0..i {
        current = current.tensor_local_right(&play_of(j)).expect("peel right");
    }
    if i < n - 1 {
        // The rest of the agents to the right, as one tensored lens.
        let mut rest = play_of(n - 1);
        for j in (i + 1..n - 1).rev() {
            rest = play_of(j).tensor(&rest);
        }
        current = current.tensor_local_left(&rest).expect("peel left");
    }
    current
}

#[test]
fn n_agent_closed_form_matches_localization() {
    let mut rng = ChaCha8Rng::seed_from_u64(777_001);
    for n in [2usize, 3] {
        for _ in 0..8 {
            let game = random_bayesian(&mut rng, n);
            let s = random_profile(&mut rng, &game);
            let (_, context) = game.encode_to_open_game().unwrap();
            for i in 0..n {
                let engine = engine_agent_context(&game, &s, &context, i);
                let direct = closed_form_agent_context(&game, &s, i);
                assert!(
                    engine.context_eq(&direct).unwrap(),
                    "player {i} of {n}: localized context differs from the closed form"
                );
            }
        }
    }
}

fn random_bayesian(rng: &mut ChaCha8Rng, n: usize) -> BayesianGame {
    let players: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let types: Vec<FiniteSet> = (0..n)
        .map(|i| {
            let k = rng.gen_range(1..=2usize);
            FiniteSet::atoms((0..k).map(|t| format!("t{i}{t}")))
        })
        .collect();
    let actions: Vec<FiniteSet> = (0..n)
        .map(|i| {
            let k = rng.gen_range(2..=3usize);
            FiniteSet::atoms((0..k).map(|a| format!("a{i}{a}")))
        })
        .collect();
    let type_grid = cartesian_product(&types.iter().map(FiniteSet::elements).collect::<Vec<_>>());
    let mut prior = BTreeMap::new();
    let weights: Vec<i64> = type_grid.iter().map(|_| rng.gen_range(0..=3i64)).collect();
    let total: i64 = weights.iter().sum::<i64>().max(1);
    for (t, w) in type_grid.iter().zip(&weights) {
        if *w > 0 {
            prior.insert(t.clone(), rational::ratio(*w, total));
        }
    }
    if prior.is_empty() {
        prior.insert(type_grid[0].clone(), rational::one());
    }
    let action_grid =
        cartesian_product(&actions.iter().map(FiniteSet::elements).collect::<Vec<_>>());
    let mut utilities = BTreeMap::new();
    for a in &action_grid {
        for t in &type_grid {
            utilities.insert(
                (a.clone(), t.clone()),
                (0..n).map(|_| rational::int(rng.gen_range(-2..=2))).collect(),
            );
        }
    }
    BayesianGame::new(players, types, actions, prior, utilities).unwrap()
}

fn random_profile(rng: &mut ChaCha8Rng, game: &BayesianGame) -> MixedProfile {
    let strategies = (0..game.player_count())
        .map(|i| {
            let actions = game.actions()[i].clone();
            let elems = actions.elements();
            let mut table = BTreeMap::new();
            for t in game.types()[i].elements() {
                let chips = rng.gen_range(1..=4usize);
                let mut raw: BTreeMap<Value, Rational> = BTreeMap::new();
                for _ in 0..chips {
                    let a = elems[rng.gen_range(0..elems.len())].clone();
                    *raw.entry(a).or_insert_with(rational::zero) +=
                        rational::ratio(1, chips as i64);
                }
                table.insert(t, Dist::from_weights(actions.clone(), raw).unwrap());
            }
            Kernel::new(game.types()[i].clone(), actions, table).unwrap()
        })
        .collect();
    MixedProfile { strategies }
}

#[test]
fn duplicated_strategy_set_is_bisimilar() {
    // A game is equivalent to itself with every strategy listed twice and
    // identical behavior on both copies.
    let coin = FiniteSet::atoms(["H", "T"]);
    let payoffs = FiniteSet::numbers([rational::int(0), rational::int(1)]).unwrap();
    let game = OpenGame::agent(coin.clone(), coin.clone(), payoffs.clone());

    let kernels = pure_agent_kernels(&coin, &coin);
    let profiles: Vec<StrategyProfile> = kernels
        .iter()
        .cloned()
        .map(StrategyProfile::Agent)
        .collect();
    let doubled: Vec<StrategyProfile> = profiles
        .iter()
        .chain(profiles.iter())
        .cloned()
        .collect();

    // σ relates to both of its copies.
    let mut pairs = Vec::new();
    for i in 0..profiles.len() {
        pairs.push((i, i));
        pairs.push((i, i + profiles.len()));
    }
    let rel = BisimRelation::new(pairs);

    let continuation = Kernel::deterministic(
        FiniteSet::product(&coin, &coin),
        payoffs,
        |v| {
            let (theta, y) = v.as_pair().unwrap();
            Value::int(if theta == y { 1 } else { 0 })
        },
    )
    .unwrap();
    let context = Context::new(
        coin.clone(),
        open_games::scenarios::biased_coins_prior(),
        continuation,
    )
    .unwrap();

    let deviations: Vec<usize> = (0..profiles.len()).collect();
    let deviations_doubled: Vec<usize> = (0..doubled.len()).collect();
    assert!(check_bisimulation(
        &game,
        &game,
        &profiles,
        &doubled,
        &rel,
        &[context],
        &deviations,
        &deviations_doubled,
    )
    .unwrap());
}
