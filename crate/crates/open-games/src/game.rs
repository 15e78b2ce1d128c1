//! Open games as combinator trees: computations, counits, Bayesian agents,
//! user-defined atoms, and sequential/parallel composition. A strategy
//! profile mirrors the tree shape; `play` folds it to a lens, and
//! `br_contains` decides best-response membership by localizing the ambient
//! context to each leaf with the *current* profile.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::context::{CanonicalContext, Context};
use crate::error::{Error, Result};
use crate::lens::{Lens, LensInterface};
use crate::prob::Kernel;
use crate::rational::Rational;
use crate::value::{cartesian_product, FiniteSet, Value};

/// Opaque preference function of a user-defined atom: selects the acceptable
/// strategies (by index) in a canonical context. Constant in the profile by
/// construction.
pub type PreferenceFn = Arc<dyn Fn(&CanonicalContext) -> BTreeSet<usize> + Send + Sync>;

#[derive(Clone)]
pub enum GameNode {
    /// A strategy-less computation `⟨f,g⟩`.
    Computation { forward: Kernel, backward: Kernel },
    /// Consumes its input and replays it backward through a payoff kernel.
    Counit { payoff: Kernel },
    /// A Bayesian agent: strategies are kernels `obs → act`, preferring
    /// strategies supported on posterior-expected-payoff argmax actions.
    Agent {
        obs: FiniteSet,
        act: FiniteSet,
        payoffs: FiniteSet,
    },
    /// The agent variant that also re-exposes its observation: target
    /// covariant wire is `obs × act`.
    AgentDelta {
        obs: FiniteSet,
        act: FiniteSet,
        payoffs: FiniteSet,
    },
    /// A user-defined atom: an explicit strategy set of lenses and an opaque
    /// preference function.
    Atom {
        strategies: Vec<Lens>,
        preference: PreferenceFn,
    },
    /// A structural re-wiring (identity, swap, associator, unitor).
    Structural { lens: Lens },
    Seq {
        first: Box<OpenGame>,
        second: Box<OpenGame>,
    },
    Tensor {
        left: Box<OpenGame>,
        right: Box<OpenGame>,
    },
}

/// An open game with its interfaces cached bottom-up.
#[derive(Clone)]
pub struct OpenGame {
    node: GameNode,
    source: LensInterface,
    target: LensInterface,
}

/// A strategy profile mirroring the game tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StrategyProfile {
    /// For computations, counits, and structural nodes.
    Unit,
    /// A kernel `obs → act` for an agent (either variant).
    Agent(Kernel),
    /// An index into the atom's declared strategy set.
    Atom(usize),
    /// For `Seq` and `Tensor` nodes.
    Pair(Box<StrategyProfile>, Box<StrategyProfile>),
}

impl StrategyProfile {
    pub fn pair(left: StrategyProfile, right: StrategyProfile) -> Self {
        StrategyProfile::Pair(Box::new(left), Box::new(right))
    }
}

impl OpenGame {
    pub fn computation(forward: Kernel, backward: Kernel) -> Self {
        let source = LensInterface::new(forward.domain().clone(), backward.codomain().clone());
        let target = LensInterface::new(forward.codomain().clone(), backward.domain().clone());
        OpenGame {
            node: GameNode::Computation { forward, backward },
            source,
            target,
        }
    }

    pub fn counit(payoff: Kernel) -> Self {
        let source = LensInterface::new(payoff.domain().clone(), payoff.codomain().clone());
        OpenGame {
            node: GameNode::Counit { payoff },
            source,
            target: LensInterface::unit(),
        }
    }

    pub fn agent(obs: FiniteSet, act: FiniteSet, payoffs: FiniteSet) -> Self {
        let source = LensInterface::new(obs.clone(), FiniteSet::unit());
        let target = LensInterface::new(act.clone(), payoffs.clone());
        OpenGame {
            node: GameNode::Agent { obs, act, payoffs },
            source,
            target,
        }
    }

    pub fn agent_delta(obs: FiniteSet, act: FiniteSet, payoffs: FiniteSet) -> Self {
        let source = LensInterface::new(obs.clone(), FiniteSet::unit());
        let target = LensInterface::new(FiniteSet::product(&obs, &act), payoffs.clone());
        OpenGame {
            node: GameNode::AgentDelta { obs, act, payoffs },
            source,
            target,
        }
    }

    /// A user-defined atom. All strategies must share the same interfaces.
    pub fn atom(strategies: Vec<Lens>, preference: PreferenceFn) -> Result<Self> {
        let first = strategies.first().ok_or_else(|| {
            Error::Construction("atom needs at least one strategy lens".to_string())
        })?;
        let source = first.source().clone();
        let target = first.target().clone();
        for (i, lens) in strategies.iter().enumerate() {
            if lens.source() != &source || lens.target() != &target {
                return Err(Error::mismatch(
                    "atom strategies",
                    format!("strategy {i} has different interfaces than strategy 0"),
                ));
            }
        }
        Ok(OpenGame {
            node: GameNode::Atom {
                strategies,
                preference,
            },
            source,
            target,
        })
    }

    pub fn structural(lens: Lens) -> Self {
        let source = lens.source().clone();
        let target = lens.target().clone();
        OpenGame {
            node: GameNode::Structural { lens },
            source,
            target,
        }
    }

    pub fn seq(first: OpenGame, second: OpenGame) -> Result<Self> {
        if first.target != second.source {
            return Err(Error::mismatch(
                "sequential composition",
                format!(
                    "first target {} does not match second source {}",
                    first.target.describe(),
                    second.source.describe()
                ),
            ));
        }
        let source = first.source.clone();
        let target = second.target.clone();
        Ok(OpenGame {
            node: GameNode::Seq {
                first: Box::new(first),
                second: Box::new(second),
            },
            source,
            target,
        })
    }

    pub fn tensor(left: OpenGame, right: OpenGame) -> Self {
        let source = left.source.tensor(&right.source);
        let target = left.target.tensor(&right.target);
        OpenGame {
            node: GameNode::Tensor {
                left: Box::new(left),
                right: Box::new(right),
            },
            source,
            target,
        }
    }

    pub fn source(&self) -> &LensInterface {
        &self.source
    }

    pub fn target(&self) -> &LensInterface {
        &self.target
    }

    /// Assemble the play lens for a profile.
    pub fn play(&self, profile: &StrategyProfile) -> Result<Lens> {
        self.play_at(profile, "root")
    }

    fn play_at(&self, profile: &StrategyProfile, path: &str) -> Result<Lens> {
        match (&self.node, profile) {
            (GameNode::Computation { forward, backward }, StrategyProfile::Unit) => {
                Ok(Lens::pair(forward, backward))
            }
            (GameNode::Counit { payoff }, StrategyProfile::Unit) => Ok(Lens::counit(payoff)),
            (GameNode::Structural { lens }, StrategyProfile::Unit) => Ok(lens.clone()),
            (GameNode::Agent { obs, act, payoffs }, StrategyProfile::Agent(kernel)) => {
                check_agent_kernel(kernel, obs, act, path)?;
                agent_play_lens(kernel, obs, act, payoffs, false)
            }
            (GameNode::AgentDelta { obs, act, payoffs }, StrategyProfile::Agent(kernel)) => {
                check_agent_kernel(kernel, obs, act, path)?;
                agent_play_lens(kernel, obs, act, payoffs, true)
            }
            (GameNode::Atom { strategies, .. }, StrategyProfile::Atom(i)) => strategies
                .get(*i)
                .cloned()
                .ok_or_else(|| {
                    Error::structure(path, format!("atom strategy index {i} out of range"))
                }),
            (GameNode::Seq { first, second }, StrategyProfile::Pair(a, b)) => {
                let l = first.play_at(a, &format!("{path}.first"))?;
                let t = second.play_at(b, &format!("{path}.second"))?;
                t.compose(&l)
            }
            (GameNode::Tensor { left, right }, StrategyProfile::Pair(a, b)) => {
                let l = left.play_at(a, &format!("{path}.left"))?;
                let r = right.play_at(b, &format!("{path}.right"))?;
                Ok(l.tensor(&r))
            }
            _ => Err(Error::structure(
                path,
                "strategy profile shape does not match the game tree",
            )),
        }
    }

    /// Is `deviation` in the best-response set at `(context, profile)`?
    ///
    /// Local contexts are built with the current `profile`; the `deviation`
    /// is then checked leafwise.
    pub fn br_contains(
        &self,
        context: &Context,
        profile: &StrategyProfile,
        deviation: &StrategyProfile,
    ) -> Result<bool> {
        self.check_context(context)?;
        self.br_at(context, profile, deviation, "root")
    }

    fn check_context(&self, context: &Context) -> Result<()> {
        if context.observation_space() != &self.source.covariant
            || context.action_space() != &self.target.covariant
            || context.payoff_space() != &self.target.contravariant
        {
            return Err(Error::mismatch(
                "context",
                format!(
                    "context wires ({},{},{}) do not match game {}→{}",
                    context.observation_space().describe(),
                    context.action_space().describe(),
                    context.payoff_space().describe(),
                    self.source.describe(),
                    self.target.describe()
                ),
            ));
        }
        Ok(())
    }

    fn br_at(
        &self,
        context: &Context,
        profile: &StrategyProfile,
        deviation: &StrategyProfile,
        path: &str,
    ) -> Result<bool> {
        match (&self.node, profile, deviation) {
            (GameNode::Computation { .. }, StrategyProfile::Unit, StrategyProfile::Unit)
            | (GameNode::Counit { .. }, StrategyProfile::Unit, StrategyProfile::Unit)
            | (GameNode::Structural { .. }, StrategyProfile::Unit, StrategyProfile::Unit) => {
                Ok(true)
            }
            (
                GameNode::Agent { obs, act, .. },
                StrategyProfile::Agent(current),
                StrategyProfile::Agent(candidate),
            ) => {
                check_agent_kernel(current, obs, act, path)?;
                check_agent_kernel(candidate, obs, act, path)?;
                let canonical = context.canonicalize()?;
                agent_supported_on_argmax(&canonical, candidate, false)
            }
            (
                GameNode::AgentDelta { obs, act, .. },
                StrategyProfile::Agent(current),
                StrategyProfile::Agent(candidate),
            ) => {
                check_agent_kernel(current, obs, act, path)?;
                check_agent_kernel(candidate, obs, act, path)?;
                let canonical = context.canonicalize()?;
                agent_supported_on_argmax(&canonical, candidate, true)
            }
            (
                GameNode::Atom { preference, strategies },
                StrategyProfile::Atom(i),
                StrategyProfile::Atom(j),
            ) => {
                if *i >= strategies.len() || *j >= strategies.len() {
                    return Err(Error::structure(path, "atom strategy index out of range"));
                }
                let canonical = context.canonicalize()?;
                Ok(preference(&canonical).contains(j))
            }
            (
                GameNode::Seq { first, second },
                StrategyProfile::Pair(p1, p2),
                StrategyProfile::Pair(d1, d2),
            ) => {
                let tau = second.play_at(p2, &format!("{path}.second"))?;
                let sigma = first.play_at(p1, &format!("{path}.first"))?;
                let c_first = context.seq_local_first(&tau)?;
                let c_second = context.seq_local_second(&sigma)?;
                Ok(first.br_at(&c_first, p1, d1, &format!("{path}.first"))?
                    && second.br_at(&c_second, p2, d2, &format!("{path}.second"))?)
            }
            (
                GameNode::Tensor { left, right },
                StrategyProfile::Pair(p1, p2),
                StrategyProfile::Pair(d1, d2),
            ) => {
                let mu = right.play_at(p2, &format!("{path}.right"))?;
                let sigma = left.play_at(p1, &format!("{path}.left"))?;
                let c_left = context.tensor_local_left(&mu)?;
                let c_right = context.tensor_local_right(&sigma)?;
                Ok(left.br_at(&c_left, p1, d1, &format!("{path}.left"))?
                    && right.br_at(&c_right, p2, d2, &format!("{path}.right"))?)
            }
            _ => Err(Error::structure(
                path,
                "strategy profile shape does not match the game tree",
            )),
        }
    }

    /// A profile is an equilibrium when it lies in its own best-response set.
    pub fn is_equilibrium(&self, context: &Context, profile: &StrategyProfile) -> Result<bool> {
        self.br_contains(context, profile, profile)
    }

    /// All pure profiles (Dirac agent kernels, every atom index) that are
    /// equilibria. Errors if the candidate count exceeds the budget taken
    /// from `OPEN_GAMES_ENUM_BUDGET` (default one million).
    pub fn enumerate_pure_equilibria(
        &self,
        context: &Context,
    ) -> Result<Vec<StrategyProfile>> {
        self.enumerate_pure_equilibria_with_budget(context, enumeration_budget())
    }

    /// As [`OpenGame::enumerate_pure_equilibria`] with an explicit budget.
    pub fn enumerate_pure_equilibria_with_budget(
        &self,
        context: &Context,
        budget: u128,
    ) -> Result<Vec<StrategyProfile>> {
        let leaves = self.pure_leaf_choices();
        let count = leaves
            .iter()
            .try_fold(1u128, |acc, options| {
                acc.checked_mul(options.len() as u128)
                    .ok_or(Error::BudgetExceeded {
                        candidates: u128::MAX,
                        budget,
                    })
            })?;
        if count > budget {
            return Err(Error::BudgetExceeded {
                candidates: count,
                budget,
            });
        }

        let mut out = Vec::new();
        for combo in cartesian_product(&leaves) {
            let mut it = combo.into_iter();
            let profile = self.profile_from_leaves(&mut it);
            if self.is_equilibrium(context, &profile)? {
                out.push(profile);
            }
        }
        Ok(out)
    }

    /// Per-leaf pure strategy options, in-order.
    fn pure_leaf_choices(&self) -> Vec<Vec<StrategyProfile>> {
        match &self.node {
            GameNode::Computation { .. }
            | GameNode::Counit { .. }
            | GameNode::Structural { .. } => vec![vec![StrategyProfile::Unit]],
            GameNode::Agent { obs, act, .. } | GameNode::AgentDelta { obs, act, .. } => {
                vec![pure_agent_kernels(obs, act)
                    .into_iter()
                    .map(StrategyProfile::Agent)
                    .collect()]
            }
            GameNode::Atom { strategies, .. } => {
                vec![(0..strategies.len()).map(StrategyProfile::Atom).collect()]
            }
            GameNode::Seq { first, second } => {
                let mut v = first.pure_leaf_choices();
                v.extend(second.pure_leaf_choices());
                v
            }
            GameNode::Tensor { left, right } => {
                let mut v = left.pure_leaf_choices();
                v.extend(right.pure_leaf_choices());
                v
            }
        }
    }

    fn profile_from_leaves<I: Iterator<Item = StrategyProfile>>(&self, it: &mut I) -> StrategyProfile {
        match &self.node {
            GameNode::Computation { .. }
            | GameNode::Counit { .. }
            | GameNode::Structural { .. }
            | GameNode::Agent { .. }
            | GameNode::AgentDelta { .. }
            | GameNode::Atom { .. } => it.next().expect("leaf choice"),
            GameNode::Seq { first, second } => {
                let a = first.profile_from_leaves(it);
                let b = second.profile_from_leaves(it);
                StrategyProfile::pair(a, b)
            }
            GameNode::Tensor { left, right } => {
                let a = left.profile_from_leaves(it);
                let b = right.profile_from_leaves(it);
                StrategyProfile::pair(a, b)
            }
        }
    }
}

fn check_agent_kernel(kernel: &Kernel, obs: &FiniteSet, act: &FiniteSet, path: &str) -> Result<()> {
    if kernel.domain() != obs || kernel.codomain() != act {
        return Err(Error::structure(
            path,
            format!(
                "agent kernel {}→{} does not match agent wires {}→{}",
                kernel.domain().describe(),
                kernel.codomain().describe(),
                obs.describe(),
                act.describe()
            ),
        ));
    }
    Ok(())
}

/// The play lens of an agent: unit residual, forward playing the strategy
/// (re-exposing the observation for the delta variant), backward deleting
/// the payoff.
fn agent_play_lens(
    kernel: &Kernel,
    obs: &FiniteSet,
    act: &FiniteSet,
    payoffs: &FiniteSet,
    expose_observation: bool,
) -> Result<Lens> {
    let unit = FiniteSet::unit();
    let covariant = if expose_observation {
        FiniteSet::product(obs, act)
    } else {
        act.clone()
    };
    let source = LensInterface::new(obs.clone(), unit.clone());
    let target = LensInterface::new(covariant.clone(), payoffs.clone());
    let fwd_codomain = FiniteSet::product(&unit, &covariant);
    let forward = Kernel::from_fn(obs.clone(), fwd_codomain.clone(), |x| {
        kernel.apply(x)?.pushforward(fwd_codomain.clone(), |y| {
            let exposed = if expose_observation {
                Value::pair(x.clone(), y.clone())
            } else {
                y.clone()
            };
            Value::pair(Value::unit(), exposed)
        })
    })?;
    let backward = Kernel::deterministic(
        FiniteSet::product(&unit, payoffs),
        unit.clone(),
        |_| Value::unit(),
    )?;
    Lens::new(source, target, unit, forward, backward)
}

/// Expected payoff of playing `y` after observing `x`, under the canonical
/// context. For the delta variant the exposed action is the pair `(x, y)`.
fn expected_payoff(
    canonical: &CanonicalContext,
    x: &Value,
    y: &Value,
    delta: bool,
) -> Result<Rational> {
    let action = if delta {
        Value::pair(x.clone(), y.clone())
    } else {
        y.clone()
    };
    canonical.payoff(x, &action)?.expectation()
}

/// Argmax actions of an agent at a supported observation.
fn best_actions_at(
    canonical: &CanonicalContext,
    actions: &FiniteSet,
    x: &Value,
    delta: bool,
) -> Result<BTreeSet<Value>> {
    let mut best: Option<Rational> = None;
    let mut arg = BTreeSet::new();
    for y in actions.elements() {
        let eu = expected_payoff(canonical, x, &y, delta)?;
        match &best {
            Some(b) if &eu < b => {}
            Some(b) if &eu == b => {
                arg.insert(y);
            }
            _ => {
                best = Some(eu);
                arg = BTreeSet::from([y]);
            }
        }
    }
    Ok(arg)
}

/// A kernel is optimal iff its support lies in the argmax set at every
/// supported observation. By linearity of expectation, a mixed strategy
/// maximizes iff it mixes only over maximizing pure actions.
fn agent_supported_on_argmax(
    canonical: &CanonicalContext,
    candidate: &Kernel,
    delta: bool,
) -> Result<bool> {
    for x in canonical.x_marginal.support() {
        let best = best_actions_at(canonical, candidate.codomain(), x, delta)?;
        for y in candidate.apply(x)?.support() {
            if !best.contains(y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The argmax action set of an agent context at observation `x`. Errors when
/// `x` has zero marginal probability.
pub fn agent_best_actions(context: &Context, x: &Value) -> Result<BTreeSet<Value>> {
    let canonical = context.canonicalize()?;
    if canonical.x_marginal.weight(x) == crate::rational::zero() {
        return Err(Error::ZeroProbabilityObservation(x.text()));
    }
    best_actions_at(&canonical, context.action_space(), x, false)
}

/// All deterministic kernels `obs → act`.
pub fn pure_agent_kernels(obs: &FiniteSet, act: &FiniteSet) -> Vec<Kernel> {
    let domain = obs.elements();
    let options: Vec<Vec<Value>> = domain.iter().map(|_| act.elements()).collect();
    cartesian_product(&options)
        .into_iter()
        .map(|choices| {
            let table: std::collections::BTreeMap<Value, Value> = domain
                .iter()
                .cloned()
                .zip(choices)
                .collect();
            Kernel::deterministic(obs.clone(), act.clone(), |x| table[x].clone())
                .expect("pure agent kernel")
        })
        .collect()
}

fn enumeration_budget() -> u128 {
    std::env::var("OPEN_GAMES_ENUM_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1_000_000)
}

/// A finite relation between two explicit strategy-profile lists, given by
/// index pairs.
#[derive(Clone, Debug, Default)]
pub struct BisimRelation {
    pub pairs: Vec<(usize, usize)>,
}

impl BisimRelation {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        BisimRelation { pairs }
    }

    pub fn converse(&self) -> Self {
        BisimRelation {
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    fn is_serial(&self, domain_len: usize) -> bool {
        (0..domain_len).all(|i| self.pairs.iter().any(|&(a, _)| a == i))
    }
}

/// Check that `rel` is a simulation from `g1` to `g2` over the supplied
/// finite families of contexts and deviations: the relation is serial, play
/// lenses agree behaviorally, and best responses transfer. A `false` result
/// is a sound refutation; `true` certifies only the supplied families.
#[allow(clippy::too_many_arguments)]
pub fn check_simulation(
    g1: &OpenGame,
    g2: &OpenGame,
    profiles1: &[StrategyProfile],
    profiles2: &[StrategyProfile],
    rel: &BisimRelation,
    contexts: &[Context],
    deviations: &[usize],
) -> Result<bool> {
    if g1.source() != g2.source() || g1.target() != g2.target() {
        return Err(Error::mismatch(
            "simulation",
            "games have different interfaces",
        ));
    }
    for &(i, j) in &rel.pairs {
        if i >= profiles1.len() || j >= profiles2.len() {
            return Err(Error::structure("relation", "index out of range"));
        }
    }
    for &d in deviations {
        if d >= profiles1.len() {
            return Err(Error::structure("deviations", "index out of range"));
        }
    }

    if !rel.is_serial(profiles1.len()) {
        return Ok(false);
    }
    for &(i, j) in &rel.pairs {
        let play1 = g1.play(&profiles1[i])?;
        let play2 = g2.play(&profiles2[j])?;
        if !play1.behavioral_eq(&play2)? {
            return Ok(false);
        }
        for context in contexts {
            for &di in deviations {
                if g1.br_contains(context, &profiles1[i], &profiles1[di])? {
                    let transferred = rel.pairs.iter().any(|&(a, b)| {
                        a == di
                            && g2
                                .br_contains(context, &profiles2[j], &profiles2[b])
                                .unwrap_or(false)
                    });
                    if !transferred {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Both directions of [`check_simulation`].
#[allow(clippy::too_many_arguments)]
pub fn check_bisimulation(
    g1: &OpenGame,
    g2: &OpenGame,
    profiles1: &[StrategyProfile],
    profiles2: &[StrategyProfile],
    rel: &BisimRelation,
    contexts: &[Context],
    deviations1: &[usize],
    deviations2: &[usize],
) -> Result<bool> {
    Ok(check_simulation(g1, g2, profiles1, profiles2, rel, contexts, deviations1)?
        && check_simulation(
            g2,
            g1,
            profiles2,
            profiles1,
            &rel.converse(),
            contexts,
            deviations2,
        )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Dist;
    use crate::rational;

    fn coin() -> FiniteSet {
        FiniteSet::atoms(["H", "T"])
    }

    fn zero_one() -> FiniteSet {
        FiniteSet::numbers([rational::int(0), rational::int(1)]).unwrap()
    }

    /// The biased-coins decision as a bare agent plus its ambient context.
    fn biased_agent_and_context() -> (OpenGame, Context) {
        let game = OpenGame::agent(coin(), coin(), zero_one());
        let h = Value::atom("H");
        let t = Value::atom("T");
        let prior = Dist::from_ratios(
            FiniteSet::product(&coin(), &coin()),
            [
                (Value::pair(h.clone(), h.clone()), 5, 16),
                (Value::pair(t.clone(), t.clone()), 5, 16),
                (Value::pair(t.clone(), h.clone()), 3, 16),
                (Value::pair(h, t), 3, 16),
            ],
        )
        .unwrap();
        let continuation = Kernel::deterministic(
            FiniteSet::product(&coin(), &coin()),
            zero_one(),
            |v| {
                let (theta, y) = v.as_pair().unwrap();
                Value::int(if theta == y { 1 } else { 0 })
            },
        )
        .unwrap();
        let context = Context::new(coin(), prior, continuation).unwrap();
        (game, context)
    }

    fn copy_strategy() -> StrategyProfile {
        StrategyProfile::Agent(Kernel::identity(coin()))
    }

    #[test]
    fn play_of_computation_is_the_pair_lens() {
        let f = Kernel::identity(coin());
        let g = Kernel::identity(zero_one());
        let game = OpenGame::computation(f.clone(), g.clone());
        let lens = game.play(&StrategyProfile::Unit).unwrap();
        assert!(lens.behavioral_eq(&Lens::pair(&f, &g)).unwrap());
    }

    #[test]
    fn play_of_dirac_agent_has_dirac_view_and_delete_backward() {
        let (game, _) = biased_agent_and_context();
        let lens = game.play(&copy_strategy()).unwrap();
        let canonical = lens.canonicalize();
        assert_eq!(canonical.fwd, Kernel::identity(coin()));
        for ((_, _, _), d) in &canonical.back {
            assert_eq!(
                d,
                &Dist::dirac(Value::unit(), FiniteSet::unit()).unwrap()
            );
        }
    }

    #[test]
    fn play_of_agent_into_counit_composes_the_payoff() {
        // Agent then counit: the closed lens's canonical backward at x is
        // the strategy pushed through the payoff kernel. Hand-computed for a
        // 3/4-biased strategy against a pays-on-H kernel.
        let payoff = Kernel::deterministic(coin(), zero_one(), |y| {
            Value::int(if y == &Value::atom("H") { 1 } else { 0 })
        })
        .unwrap();
        let game = OpenGame::seq(
            OpenGame::agent(coin(), coin(), zero_one()),
            OpenGame::counit(payoff),
        )
        .unwrap();
        let sigma = Kernel::from_fn(coin(), coin(), |x| {
            if x == &Value::atom("H") {
                Dist::from_ratios(coin(), [(Value::atom("H"), 3, 4), (Value::atom("T"), 1, 4)])
            } else {
                Dist::from_ratios(coin(), [(Value::atom("H"), 1, 4), (Value::atom("T"), 3, 4)])
            }
        })
        .unwrap();
        let profile = StrategyProfile::pair(
            StrategyProfile::Agent(sigma),
            StrategyProfile::Unit,
        );
        let lens = game.play(&profile).unwrap();
        // The composite's residual is Unit ⊗ {H,T} and its forward places
        // σ(x)(y) on (((),y),()) — the strategy's randomness lives on the
        // hidden wire.
        let entry = |y: &str| {
            Value::pair(
                Value::pair(Value::unit(), Value::atom(y)),
                Value::unit(),
            )
        };
        let fwd_h = lens.forward().apply(&Value::atom("H")).unwrap();
        assert_eq!(fwd_h.weight(&entry("H")), rational::ratio(3, 4));
        assert_eq!(fwd_h.weight(&entry("T")), rational::ratio(1, 4));
        let fwd_t = lens.forward().apply(&Value::atom("T")).unwrap();
        assert_eq!(fwd_t.weight(&entry("H")), rational::ratio(1, 4));
        assert_eq!(fwd_t.weight(&entry("T")), rational::ratio(3, 4));
    }

    #[test]
    fn play_rejects_mismatched_profile_shape() {
        let (game, _) = biased_agent_and_context();
        let err = game.play(&StrategyProfile::Unit);
        assert!(matches!(err, Err(Error::Structure { .. })));
    }

    #[test]
    fn biased_coins_best_response_is_copy() {
        let (game, context) = biased_agent_and_context();

        // The copy strategy is a best response to itself.
        assert!(game
            .br_contains(&context, &copy_strategy(), &copy_strategy())
            .unwrap());

        // Any deviation guessing against the observation is rejected, even
        // with arbitrarily small weight off the observed side.
        let tilted = Kernel::from_fn(coin(), coin(), |x| {
            if x == &Value::atom("H") {
                Dist::from_ratios(coin(), [(Value::atom("H"), 9, 10), (Value::atom("T"), 1, 10)])
            } else {
                Ok(Dist::dirac(Value::atom("T"), coin()).unwrap())
            }
        })
        .unwrap();
        assert!(!game
            .br_contains(&context, &copy_strategy(), &StrategyProfile::Agent(tilted))
            .unwrap());
    }

    #[test]
    fn biased_coins_argmax_with_values() {
        let (_, context) = biased_agent_and_context();
        let best = agent_best_actions(&context, &Value::atom("H")).unwrap();
        assert_eq!(best, BTreeSet::from([Value::atom("H")]));
        let best = agent_best_actions(&context, &Value::atom("T")).unwrap();
        assert_eq!(best, BTreeSet::from([Value::atom("T")]));
    }

    #[test]
    fn constant_continuation_makes_every_action_best() {
        let unit = FiniteSet::unit();
        let history = Dist::dirac(
            Value::pair(Value::unit(), Value::atom("H")),
            FiniteSet::product(&unit, &coin()),
        )
        .unwrap();
        let continuation = Kernel::deterministic(
            FiniteSet::product(&unit, &coin()),
            zero_one(),
            |_| Value::int(1),
        )
        .unwrap();
        let context = Context::new(unit, history, continuation).unwrap();
        let best = agent_best_actions(&context, &Value::atom("H")).unwrap();
        assert_eq!(best.len(), 2);
    }

    #[test]
    fn exact_rational_ties_are_exact() {
        // Payoffs 1/2, 1/2, 1/3 over three actions: exactly two argmaxes.
        let acts = FiniteSet::atoms(["a", "b", "c"]);
        let unit = FiniteSet::unit();
        let obs = FiniteSet::atoms(["o"]);
        let payoffs = FiniteSet::numbers([
            rational::ratio(1, 2),
            rational::ratio(1, 3),
        ])
        .unwrap();
        let history = Dist::dirac(
            Value::pair(Value::unit(), Value::atom("o")),
            FiniteSet::product(&unit, &obs),
        )
        .unwrap();
        let continuation = Kernel::deterministic(
            FiniteSet::product(&unit, &acts),
            payoffs,
            |v| {
                let (_, y) = v.as_pair().unwrap();
                if y == &Value::atom("c") {
                    Value::num(rational::ratio(1, 3))
                } else {
                    Value::num(rational::ratio(1, 2))
                }
            },
        )
        .unwrap();
        let context = Context::new(unit, history, continuation).unwrap();
        let best = agent_best_actions(&context, &Value::atom("o")).unwrap();
        assert_eq!(best, BTreeSet::from([Value::atom("a"), Value::atom("b")]));
    }

    #[test]
    fn single_strategy_atom_with_total_preference_is_equilibrium() {
        let iface = LensInterface::new(coin(), zero_one());
        let lens = Lens::identity(&iface);
        let atom = OpenGame::atom(
            vec![lens],
            Arc::new(|_c: &CanonicalContext| BTreeSet::from([0usize])),
        )
        .unwrap();
        let history = Dist::dirac(
            Value::pair(Value::unit(), Value::atom("H")),
            FiniteSet::product(&FiniteSet::unit(), &coin()),
        )
        .unwrap();
        let continuation = Kernel::deterministic(
            FiniteSet::product(&FiniteSet::unit(), &coin()),
            zero_one(),
            |_| Value::int(0),
        )
        .unwrap();
        let context = Context::new(FiniteSet::unit(), history, continuation).unwrap();
        assert!(atom
            .is_equilibrium(&context, &StrategyProfile::Atom(0))
            .unwrap());
    }

    #[test]
    fn enumeration_respects_budget() {
        let (game, context) = biased_agent_and_context();
        let err = game.enumerate_pure_equilibria_with_budget(&context, 2);
        assert!(matches!(err, Err(Error::BudgetExceeded { candidates: 4, .. })));
    }

    #[test]
    fn biased_coins_unique_pure_equilibrium_is_copy() {
        let (game, context) = biased_agent_and_context();
        let eqs = game.enumerate_pure_equilibria(&context).unwrap();
        assert_eq!(eqs.len(), 1);
        assert_eq!(eqs[0], copy_strategy());
    }

    #[test]
    fn identity_relation_is_a_bisimulation() {
        let (game, context) = biased_agent_and_context();
        let profiles: Vec<StrategyProfile> = pure_agent_kernels(&coin(), &coin())
            .into_iter()
            .map(StrategyProfile::Agent)
            .collect();
        let rel = BisimRelation::new((0..profiles.len()).map(|i| (i, i)).collect());
        let deviations: Vec<usize> = (0..profiles.len()).collect();
        let (game2, _) = biased_agent_and_context();
        assert!(check_bisimulation(
            &game,
            &game2,
            &profiles,
            &profiles,
            &rel,
            &[context],
            &deviations,
            &deviations,
        )
        .unwrap());
    }

    #[test]
    fn mismatched_play_breaks_simulation() {
        let (game, context) = biased_agent_and_context();
        let kernels = pure_agent_kernels(&coin(), &coin());
        let profiles: Vec<StrategyProfile> =
            kernels.into_iter().map(StrategyProfile::Agent).collect();
        // Relate each strategy to a different one: play lenses differ.
        let rel = BisimRelation::new(vec![(0, 1), (1, 0), (2, 3), (3, 2)]);
        let (game2, _) = biased_agent_and_context();
        let ok = check_simulation(
            &game,
            &game2,
            &profiles,
            &profiles,
            &rel,
            &[context],
            &[0, 1, 2, 3],
        )
        .unwrap();
        assert!(!ok);
    }
}
