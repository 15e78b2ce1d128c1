//! Classical Bayesian games and their textbook solution theory: the three
//! epistemic expected utilities, best response, and Bayesian Nash
//! equilibrium by brute force. This module is deliberately independent of
//! the lens machinery — it is the oracle the compositional engine is
//! cross-validated against — except for `encode_to_open_game`, which is the
//! bridge between the two.

use std::collections::BTreeMap;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::game::{OpenGame, StrategyProfile};
use crate::prob::{Dist, Kernel};
use crate::rational::{self, Rational};
use crate::value::{cartesian_product, FiniteSet, Value};

/// A Bayesian game `(N, A, Θ, p, u)` with a joint (possibly correlated)
/// common prior and per-player utilities over the full action×type grid.
#[derive(Clone, Debug)]
pub struct BayesianGame {
    players: Vec<String>,
    types: Vec<FiniteSet>,
    actions: Vec<FiniteSet>,
    /// Joint prior over type profiles; missing entries are probability 0.
    prior: BTreeMap<Vec<Value>, Rational>,
    /// `(action profile, type profile) → one utility per player`.
    utilities: BTreeMap<(Vec<Value>, Vec<Value>), Vec<Rational>>,
}

/// One kernel `Θ_i → A_i` per player.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedProfile {
    pub strategies: Vec<Kernel>,
}

/// A pure profile: per player, an explicit type → action table.
pub type PureProfile = Vec<BTreeMap<Value, Value>>;

impl BayesianGame {
    pub fn new(
        players: Vec<String>,
        types: Vec<FiniteSet>,
        actions: Vec<FiniteSet>,
        prior: BTreeMap<Vec<Value>, Rational>,
        utilities: BTreeMap<(Vec<Value>, Vec<Value>), Vec<Rational>>,
    ) -> Result<Self> {
        let n = players.len();
        if types.len() != n || actions.len() != n {
            return Err(Error::validation(
                "players",
                "types and actions must list one space per player",
            ));
        }
        let type_grid = cartesian_product(
            &types.iter().map(FiniteSet::elements).collect::<Vec<_>>(),
        );
        let mut total = rational::zero();
        for (profile, p) in &prior {
            if !type_grid.contains(profile) {
                return Err(Error::validation(
                    "prior",
                    format!("unknown type profile {profile:?}"),
                ));
            }
            if !rational::is_nonnegative(p) {
                return Err(Error::validation("prior", "negative probability"));
            }
            total += p;
        }
        if total != rational::one() {
            return Err(Error::validation(
                "prior",
                format!("prior sums to {}, not 1", rational::to_string(&total)),
            ));
        }
        let action_grid = cartesian_product(
            &actions.iter().map(FiniteSet::elements).collect::<Vec<_>>(),
        );
        for a in &action_grid {
            for t in &type_grid {
                match utilities.get(&(a.clone(), t.clone())) {
                    None => {
                        return Err(Error::validation(
                            "utilities",
                            format!("missing cell for actions {a:?}, types {t:?}"),
                        ))
                    }
                    Some(us) if us.len() != n => {
                        return Err(Error::validation(
                            "utilities",
                            "each cell needs one utility per player",
                        ))
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(BayesianGame {
            players,
            types,
            actions,
            prior,
            utilities,
        })
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn types(&self) -> &[FiniteSet] {
        &self.types
    }

    pub fn actions(&self) -> &[FiniteSet] {
        &self.actions
    }

    pub fn player_index(&self, name: &str) -> Result<usize> {
        self.players
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::validation("player", format!("unknown player {name:?}")))
    }

    pub fn prior_weight(&self, types: &[Value]) -> Rational {
        self.prior
            .get(types)
            .cloned()
            .unwrap_or_else(rational::zero)
    }

    pub fn utility(&self, actions: &[Value], types: &[Value], player: usize) -> Result<Rational> {
        self.utilities
            .get(&(actions.to_vec(), types.to_vec()))
            .and_then(|us| us.get(player))
            .cloned()
            .ok_or_else(|| {
                Error::Domain(format!(
                    "no utility cell for actions {actions:?}, types {types:?}"
                ))
            })
    }

    fn action_profiles(&self) -> Vec<Vec<Value>> {
        cartesian_product(
            &self.actions.iter().map(FiniteSet::elements).collect::<Vec<_>>(),
        )
    }

    fn check_profile(&self, s: &MixedProfile) -> Result<()> {
        if s.strategies.len() != self.players.len() {
            return Err(Error::mismatch(
                "profile",
                "one strategy kernel per player required",
            ));
        }
        for (i, k) in s.strategies.iter().enumerate() {
            if k.domain() != &self.types[i] || k.codomain() != &self.actions[i] {
                return Err(Error::mismatch(
                    "profile",
                    format!(
                        "player {} strategy {}→{} does not match Θ→A {}→{}",
                        self.players[i],
                        k.domain().describe(),
                        k.codomain().describe(),
                        self.types[i].describe(),
                        self.actions[i].describe()
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Marginal prior probability of player `i` having type `theta_i`.
    pub fn type_marginal(&self, i: usize, theta_i: &Value) -> Rational {
        let mut total = rational::zero();
        for (profile, p) in &self.prior {
            if &profile[i] == theta_i {
                total += p;
            }
        }
        total
    }

    /// Ex post expected utility: all types fixed and common knowledge.
    pub fn ex_post(&self, s: &MixedProfile, theta: &[Value], player: usize) -> Result<Rational> {
        self.check_profile(s)?;
        if theta.len() != self.players.len()
            || theta.iter().zip(&self.types).any(|(t, space)| !space.contains(t))
        {
            return Err(Error::Domain(format!(
                "type profile {theta:?} outside the declared grid"
            )));
        }
        let mut total = rational::zero();
        for a in self.action_profiles() {
            let mut weight = rational::one();
            for (j, aj) in a.iter().enumerate() {
                weight *= s.strategies[j].apply(&theta[j])?.weight(aj);
                if weight == rational::zero() {
                    break;
                }
            }
            if weight != rational::zero() {
                total += weight * self.utility(&a, theta, player)?;
            }
        }
        Ok(total)
    }

    /// Ex interim expected utility: player `i` knows only their own type.
    pub fn ex_interim(&self, s: &MixedProfile, player: usize, theta_i: &Value) -> Result<Rational> {
        self.check_profile(s)?;
        let denom = self.type_marginal(player, theta_i);
        if denom == rational::zero() {
            return Err(Error::ZeroProbabilityObservation(theta_i.text()));
        }
        let mut total = rational::zero();
        for (profile, p) in &self.prior {
            if &profile[player] == theta_i {
                total += p / &denom * self.ex_post(s, profile, player)?;
            }
        }
        Ok(total)
    }

    /// Ex ante expected utility: no types known. Computed both as the
    /// type-profile sum and as the own-type decomposition through ex
    /// interim; the two must agree exactly.
    pub fn ex_ante(&self, s: &MixedProfile, player: usize) -> Result<Rational> {
        self.check_profile(s)?;
        let mut by_profile = rational::zero();
        for (profile, p) in &self.prior {
            by_profile += p * self.ex_post(s, profile, player)?;
        }
        let mut by_own_type = rational::zero();
        for theta_i in self.types[player].elements() {
            let p_i = self.type_marginal(player, &theta_i);
            if p_i != rational::zero() {
                by_own_type += &p_i * self.ex_interim(s, player, &theta_i)?;
            }
        }
        if by_profile != by_own_type {
            return Err(Error::Internal(format!(
                "ex ante decompositions disagree: {} vs {}",
                rational::to_string(&by_profile),
                rational::to_string(&by_own_type)
            )));
        }
        Ok(by_profile)
    }

    /// Interim value of the pure action `a_i` for a supported type, holding
    /// the opponents at `s`.
    fn interim_action_value(
        &self,
        s: &MixedProfile,
        player: usize,
        theta_i: &Value,
        action: &Value,
    ) -> Result<Rational> {
        let mut replaced = s.clone();
        replaced.strategies[player] = Kernel::constant(
            self.types[player].clone(),
            Dist::dirac(action.clone(), self.actions[player].clone())?,
        );
        self.ex_interim(&replaced, player, theta_i)
    }

    /// Is `s_i` an ex-ante best response to `s_{-i}`? Decided per supported
    /// type by interim argmax: ex-ante optimality decomposes type-by-type by
    /// linearity, and types of prior probability zero are unconstrained.
    pub fn is_bayes_best_response(&self, s: &MixedProfile, player: usize) -> Result<bool> {
        self.check_profile(s)?;
        for theta_i in self.types[player].elements() {
            if self.type_marginal(player, &theta_i) == rational::zero() {
                continue;
            }
            let mut best: Option<Rational> = None;
            let mut argmax = Vec::new();
            for action in self.actions[player].elements() {
                let v = self.interim_action_value(s, player, &theta_i, &action)?;
                match &best {
                    Some(b) if &v < b => {}
                    Some(b) if &v == b => argmax.push(action),
                    _ => {
                        best = Some(v);
                        argmax = vec![action];
                    }
                }
            }
            for supported in s.strategies[player].apply(&theta_i)?.support() {
                if !argmax.contains(supported) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_bayes_nash(&self, s: &MixedProfile) -> Result<bool> {
        for player in 0..self.players.len() {
            if !self.is_bayes_best_response(s, player)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All pure profiles, as explicit type → action tables.
    pub fn pure_profiles(&self) -> Result<Vec<PureProfile>> {
        let mut per_player: Vec<Vec<BTreeMap<Value, Value>>> = Vec::new();
        let mut candidates: u128 = 1;
        for i in 0..self.players.len() {
            let type_elems = self.types[i].elements();
            let choices: Vec<Vec<Value>> =
                type_elems.iter().map(|_| self.actions[i].elements()).collect();
            let tables: Vec<BTreeMap<Value, Value>> = cartesian_product(&choices)
                .into_iter()
                .map(|row| type_elems.iter().cloned().zip(row).collect())
                .collect();
            candidates = candidates.saturating_mul(tables.len() as u128);
            per_player.push(tables);
        }
        let budget = enumeration_budget();
        if candidates > budget {
            return Err(Error::BudgetExceeded {
                candidates,
                budget,
            });
        }
        Ok(cartesian_product(&per_player))
    }

    pub fn pure_to_mixed(&self, pure: &PureProfile) -> Result<MixedProfile> {
        let mut strategies = Vec::new();
        for (i, table) in pure.iter().enumerate() {
            let actions = self.actions[i].clone();
            let table = table.clone();
            strategies.push(Kernel::from_fn(
                self.types[i].clone(),
                actions.clone(),
                |t| {
                    let a = table.get(t).ok_or_else(|| {
                        Error::Domain(format!("pure strategy missing type {t}"))
                    })?;
                    Dist::dirac(a.clone(), actions.clone())
                },
            )?);
        }
        Ok(MixedProfile { strategies })
    }

    /// Brute-force enumeration of the pure Bayesian Nash equilibria,
    /// returned sorted.
    pub fn enumerate_pure_bayes_nash(&self) -> Result<Vec<PureProfile>> {
        let mut out = Vec::new();
        for pure in self.pure_profiles()? {
            let mixed = self.pure_to_mixed(&pure)?;
            if self.is_bayes_nash(&mixed)? {
                out.push(pure);
            }
        }
        out.sort();
        Ok(out)
    }

    /// The per-player payoff value spaces of the encoding.
    fn payoff_spaces(&self) -> Result<Vec<FiniteSet>> {
        let mut spaces = Vec::new();
        for i in 0..self.players.len() {
            let values: Vec<Rational> = self
                .utilities
                .values()
                .map(|us| us[i].clone())
                .collect();
            spaces.push(FiniteSet::numbers(values)?);
        }
        Ok(spaces)
    }

    /// Encode as a Bayesian open game: one observation-exposing agent per
    /// player in parallel, a hidden residual carrying the full joint type
    /// draw, and a Dirac payoff-vector continuation. Returns the game and
    /// its ambient context.
    pub fn encode_to_open_game(&self) -> Result<(OpenGame, Context)> {
        let payoff_spaces = self.payoff_spaces()?;

        let mut game: Option<OpenGame> = None;
        for i in (0..self.players.len()).rev() {
            let agent = OpenGame::agent_delta(
                self.types[i].clone(),
                self.actions[i].clone(),
                payoff_spaces[i].clone(),
            );
            game = Some(match game {
                None => agent,
                Some(rest) => OpenGame::tensor(agent, rest),
            });
        }
        let game = game.ok_or_else(|| Error::validation("players", "no players"))?;

        let theta = nest_spaces(&self.types);
        let observed = theta.clone();
        let history_space = FiniteSet::product(&theta, &observed);
        let mut history_weights = BTreeMap::new();
        for (profile, p) in &self.prior {
            let v = nest_values(profile);
            history_weights.insert(Value::pair(v.clone(), v), p.clone());
        }
        let history = Dist::from_weights(history_space, history_weights)?;

        let exposed: Vec<FiniteSet> = (0..self.players.len())
            .map(|i| FiniteSet::product(&self.types[i], &self.actions[i]))
            .collect();
        let exposed_space = nest_spaces(&exposed);
        let payoff_space = nest_spaces(&payoff_spaces);

        let n = self.players.len();
        let continuation = Kernel::from_fn(
            FiniteSet::product(&theta, &exposed_space),
            payoff_space.clone(),
            |v| {
                let (hidden, plays) = v.as_pair()?;
                let types = unnest_values(hidden, n)?;
                let pairs = unnest_values(plays, n)?;
                let mut actions = Vec::with_capacity(n);
                for p in &pairs {
                    actions.push(p.as_pair()?.1.clone());
                }
                let mut payoffs = Vec::with_capacity(n);
                for i in 0..n {
                    payoffs.push(Value::num(self.utility(&actions, &types, i)?));
                }
                Dist::dirac(nest_values(&payoffs), payoff_space.clone())
            },
        )?;

        let context = Context::new(theta, history, continuation)?;
        game.check_same_interfaces(&context)?;
        Ok((game, context))
    }

    /// Translate a classical profile into the mirrored open-game profile of
    /// the encoding.
    pub fn profile_to_open_game(&self, s: &MixedProfile) -> Result<StrategyProfile> {
        self.check_profile(s)?;
        let mut profile: Option<StrategyProfile> = None;
        for kernel in s.strategies.iter().rev() {
            let leaf = StrategyProfile::Agent(kernel.clone());
            profile = Some(match profile {
                None => leaf,
                Some(rest) => StrategyProfile::pair(leaf, rest),
            });
        }
        profile.ok_or_else(|| Error::validation("players", "no players"))
    }

    /// Read a pure profile back out of an open-game profile of the encoding.
    pub fn profile_from_open_game(&self, sp: &StrategyProfile) -> Result<PureProfile> {
        let mut kernels = Vec::new();
        flatten_profile(sp, self.players.len(), &mut kernels)?;
        let mut out = Vec::new();
        for (i, k) in kernels.iter().enumerate() {
            let mut table = BTreeMap::new();
            for t in self.types[i].elements() {
                let d = k.apply(&t)?;
                if !d.is_dirac() {
                    return Err(Error::structure(
                        "profile",
                        "expected a pure (Dirac) agent kernel",
                    ));
                }
                table.insert(t.clone(), d.support().next().unwrap().clone());
            }
            out.push(table);
        }
        Ok(out)
    }
}

impl OpenGame {
    fn check_same_interfaces(&self, context: &Context) -> Result<()> {
        if context.observation_space() != &self.source().covariant
            || context.action_space() != &self.target().covariant
        {
            return Err(Error::Internal(
                "encoded context does not match encoded game interfaces".to_string(),
            ));
        }
        Ok(())
    }
}

fn flatten_profile(sp: &StrategyProfile, n: usize, out: &mut Vec<Kernel>) -> Result<()> {
    if n == 0 {
        return Err(Error::structure("profile", "no players"));
    }
    if n == 1 {
        match sp {
            StrategyProfile::Agent(k) => {
                out.push(k.clone());
                Ok(())
            }
            _ => Err(Error::structure("profile", "expected an agent strategy")),
        }
    } else {
        match sp {
            StrategyProfile::Pair(a, b) => {
                flatten_profile(a, 1, out)?;
                flatten_profile(b, n - 1, out)
            }
            _ => Err(Error::structure("profile", "expected a profile pair")),
        }
    }
}

/// Right-nested product of a list of spaces.
pub fn nest_spaces(spaces: &[FiniteSet]) -> FiniteSet {
    match spaces {
        [] => FiniteSet::unit(),
        [only] => only.clone(),
        [head, tail @ ..] => FiniteSet::product(head, &nest_spaces(tail)),
    }
}

/// Right-nested pairing of a list of values.
pub fn nest_values(values: &[Value]) -> Value {
    match values {
        [] => Value::unit(),
        [only] => only.clone(),
        [head, tail @ ..] => Value::pair(head.clone(), nest_values(tail)),
    }
}

/// Inverse of [`nest_values`] for a known arity.
pub fn unnest_values(v: &Value, n: usize) -> Result<Vec<Value>> {
    let mut out = Vec::with_capacity(n);
    let mut cursor = v.clone();
    for _ in 0..n.saturating_sub(1) {
        let (head, tail) = cursor.as_pair()?;
        out.push(head.clone());
        cursor = tail.clone();
    }
    out.push(cursor);
    Ok(out)
}

fn enumeration_budget() -> u128 {
    std::env::var("OPEN_GAMES_ENUM_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1_000_000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios;

    fn star() -> Value {
        Value::atom("*")
    }

    fn dirac_strategy(game: &BayesianGame, player: usize, action: &str) -> Kernel {
        Kernel::constant(
            game.types()[player].clone(),
            Dist::dirac(Value::atom(action), game.actions()[player].clone()).unwrap(),
        )
    }

    fn uniform_strategy(game: &BayesianGame, player: usize) -> Kernel {
        Kernel::constant(
            game.types()[player].clone(),
            Dist::uniform(game.actions()[player].clone()).unwrap(),
        )
    }

    #[test]
    fn ex_post_of_pure_profile_reads_the_table() {
        let pd = scenarios::prisoners_dilemma();
        let s = MixedProfile {
            strategies: vec![dirac_strategy(&pd, 0, "C"), dirac_strategy(&pd, 1, "D")],
        };
        let theta = vec![star(), star()];
        assert_eq!(pd.ex_post(&s, &theta, 0).unwrap(), rational::int(0));
        assert_eq!(pd.ex_post(&s, &theta, 1).unwrap(), rational::int(3));
    }

    #[test]
    fn ex_post_uniform_matching_pennies_is_zero() {
        let mp = scenarios::matching_pennies();
        let s = MixedProfile {
            strategies: vec![uniform_strategy(&mp, 0), uniform_strategy(&mp, 1)],
        };
        let theta = vec![star(), star()];
        assert_eq!(mp.ex_post(&s, &theta, 0).unwrap(), rational::zero());
        assert_eq!(mp.ex_post(&s, &theta, 1).unwrap(), rational::zero());
    }

    #[test]
    fn single_type_interim_equals_ex_post() {
        let pd = scenarios::prisoners_dilemma();
        let s = MixedProfile {
            strategies: vec![dirac_strategy(&pd, 0, "D"), dirac_strategy(&pd, 1, "C")],
        };
        assert_eq!(
            pd.ex_interim(&s, 0, &star()).unwrap(),
            pd.ex_post(&s, &[star(), star()], 0).unwrap()
        );
    }

    #[test]
    fn interim_rejects_zero_probability_type() {
        let game = scenarios::zero_weight_type_game();
        let s = MixedProfile {
            strategies: vec![
                dirac_strategy(&game, 0, "a"),
                dirac_strategy(&game, 1, "a"),
            ],
        };
        assert!(matches!(
            game.ex_interim(&s, 0, &Value::atom("ghost")),
            Err(Error::ZeroProbabilityObservation(_))
        ));
    }

    /// Biased coins as a two-"player" Bayesian game: the guesser's type is
    /// their own flip, nature's type is the secret coin, nature has one
    /// dummy action, and the guesser is paid for matching the secret.
    fn biased_coins_as_bayesian_game() -> BayesianGame {
        let coin = FiniteSet::atoms(["H", "T"]);
        let h = Value::atom("H");
        let t = Value::atom("T");
        let prior = BTreeMap::from([
            ((vec![h.clone(), h.clone()]), rational::ratio(5, 16)),
            ((vec![t.clone(), t.clone()]), rational::ratio(5, 16)),
            ((vec![h.clone(), t.clone()]), rational::ratio(3, 16)),
            ((vec![t.clone(), h.clone()]), rational::ratio(3, 16)),
        ]);
        let mut utilities = BTreeMap::new();
        for guess in ["H", "T"] {
            for own in ["H", "T"] {
                for secret in ["H", "T"] {
                    let u = if guess == secret { 1 } else { 0 };
                    utilities.insert(
                        (
                            vec![Value::atom(guess), star()],
                            vec![Value::atom(own), Value::atom(secret)],
                        ),
                        vec![rational::int(u), rational::int(0)],
                    );
                }
            }
        }
        BayesianGame::new(
            vec!["guesser".into(), "nature".into()],
            vec![coin.clone(), coin],
            vec![FiniteSet::atoms(["H", "T"]), FiniteSet::atoms(["*"])],
            prior,
            utilities,
        )
        .unwrap()
    }

    #[test]
    fn biased_coins_reformulation_matches_the_worked_numbers() {
        let game = biased_coins_as_bayesian_game();
        let copy = MixedProfile {
            strategies: vec![
                Kernel::identity(FiniteSet::atoms(["H", "T"])),
                dirac_strategy(&game, 1, "*"),
            ],
        };
        // Ex post at (H,H) with the copy strategy: certain win.
        assert_eq!(
            game.ex_post(&copy, &[Value::atom("H"), Value::atom("H")], 0)
                .unwrap(),
            rational::one()
        );
        // Interim utility of the copy strategy having observed H: 5/8.
        assert_eq!(
            game.ex_interim(&copy, 0, &Value::atom("H")).unwrap(),
            rational::ratio(5, 8)
        );
        // Ex ante: 1/2·5/8 + 1/2·5/8.
        assert_eq!(game.ex_ante(&copy, 0).unwrap(), rational::ratio(5, 8));
        // And copying is the unique pure equilibrium strategy for the
        // guesser.
        let eqs = game.enumerate_pure_bayes_nash().unwrap();
        assert!(eqs
            .iter()
            .all(|eq| eq[0][&Value::atom("H")] == Value::atom("H")
                && eq[0][&Value::atom("T")] == Value::atom("T")));
        assert_eq!(eqs.len(), 1);
    }

    #[test]
    fn ex_ante_constant_utilities() {
        let game = scenarios::constant_utility_game(rational::ratio(7, 3));
        let s = MixedProfile {
            strategies: vec![uniform_strategy(&game, 0), uniform_strategy(&game, 1)],
        };
        assert_eq!(game.ex_ante(&s, 0).unwrap(), rational::ratio(7, 3));
    }

    #[test]
    fn dominant_strategy_is_the_unique_best_response() {
        let pd = scenarios::prisoners_dilemma();
        let defect = MixedProfile {
            strategies: vec![dirac_strategy(&pd, 0, "D"), dirac_strategy(&pd, 1, "D")],
        };
        assert!(pd.is_bayes_best_response(&defect, 0).unwrap());
        let cooperate = MixedProfile {
            strategies: vec![dirac_strategy(&pd, 0, "C"), dirac_strategy(&pd, 1, "D")],
        };
        assert!(!pd.is_bayes_best_response(&cooperate, 0).unwrap());
    }

    #[test]
    fn mixing_onto_dominated_action_is_rejected() {
        let pd = scenarios::prisoners_dilemma();
        let mix = Kernel::constant(
            pd.types()[0].clone(),
            Dist::from_ratios(
                pd.actions()[0].clone(),
                [(Value::atom("C"), 1, 4), (Value::atom("D"), 3, 4)],
            )
            .unwrap(),
        );
        let s = MixedProfile {
            strategies: vec![mix, dirac_strategy(&pd, 1, "D")],
        };
        assert!(!pd.is_bayes_best_response(&s, 0).unwrap());
    }

    #[test]
    fn matching_pennies_uniform_is_nash() {
        let mp = scenarios::matching_pennies();
        let s = MixedProfile {
            strategies: vec![uniform_strategy(&mp, 0), uniform_strategy(&mp, 1)],
        };
        assert!(mp.is_bayes_nash(&s).unwrap());
    }

    #[test]
    fn prisoners_dilemma_unique_pure_equilibrium() {
        let pd = scenarios::prisoners_dilemma();
        let eqs = pd.enumerate_pure_bayes_nash().unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0][0][&star()], Value::atom("D"));
        assert_eq!(eqs[0][1][&star()], Value::atom("D"));
    }

    #[test]
    fn matching_pennies_has_no_pure_equilibrium() {
        let mp = scenarios::matching_pennies();
        assert!(mp.enumerate_pure_bayes_nash().unwrap().is_empty());
    }

    #[test]
    fn education_game_pooling_equilibrium() {
        let game = scenarios::education_game();
        let eqs = game.enumerate_pure_bayes_nash().unwrap();
        // Pooling: both applicant types skip university, employer offers low.
        let skip = Value::atom("skip");
        let low = Value::atom("low");
        assert!(eqs.iter().any(|eq| {
            eq[1].values().all(|a| a == &skip) && eq[0].values().all(|a| a == &low)
        }));
        // No equilibrium has the employer paying high.
        assert!(eqs
            .iter()
            .all(|eq| eq[0].values().all(|a| a == &low)));
    }

    #[test]
    fn zero_probability_types_are_unconstrained() {
        let game = scenarios::zero_weight_type_game();
        let eqs = game.enumerate_pure_bayes_nash().unwrap();
        // The ghost type never occurs, so both of its actions appear among
        // equilibria.
        let ghost = Value::atom("ghost");
        let actions: std::collections::BTreeSet<&Value> =
            eqs.iter().map(|eq| &eq[0][&ghost]).collect();
        assert_eq!(actions.len(), 2);
    }

    #[test]
    fn encoding_round_trips_profiles() {
        let pd = scenarios::prisoners_dilemma();
        let s = MixedProfile {
            strategies: vec![dirac_strategy(&pd, 0, "D"), dirac_strategy(&pd, 1, "C")],
        };
        let sp = pd.profile_to_open_game(&s).unwrap();
        let back = pd.profile_from_open_game(&sp).unwrap();
        assert_eq!(back[0][&star()], Value::atom("D"));
        assert_eq!(back[1][&star()], Value::atom("C"));
    }

    #[test]
    fn encoding_agrees_on_prisoners_dilemma() {
        let pd = scenarios::prisoners_dilemma();
        let (game, context) = pd.encode_to_open_game().unwrap();
        for pure in pd.pure_profiles().unwrap() {
            let mixed = pd.pure_to_mixed(&pure).unwrap();
            let classical = pd.is_bayes_nash(&mixed).unwrap();
            let sp = pd.profile_to_open_game(&mixed).unwrap();
            let compositional = game.is_equilibrium(&context, &sp).unwrap();
            assert_eq!(classical, compositional, "disagreement on {pure:?}");
        }
    }

    #[test]
    fn education_game_loads_and_encodes() {
        let game = scenarios::education_game();
        assert_eq!(
            game.prior_weight(&[star(), Value::atom("talented")]),
            rational::ratio(1, 10)
        );
        assert_eq!(
            game.prior_weight(&[star(), Value::atom("untalented")]),
            rational::ratio(9, 10)
        );
        let (encoded, context) = game.encode_to_open_game().unwrap();
        let pooling = game
            .pure_to_mixed(&vec![
                BTreeMap::from([(star(), Value::atom("low"))]),
                BTreeMap::from([
                    (Value::atom("talented"), Value::atom("skip")),
                    (Value::atom("untalented"), Value::atom("skip")),
                ]),
            ])
            .unwrap();
        let sp = game.profile_to_open_game(&pooling).unwrap();
        assert!(encoded.is_equilibrium(&context, &sp).unwrap());
    }
}
