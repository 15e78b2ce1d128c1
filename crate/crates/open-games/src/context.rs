//! Contexts: the environment an open game is played in.
//!
//! A context for a game `(X,S) → (Y,R)` is a hidden residual space `Θ`, a
//! joint history distribution on `Θ × X`, and a continuation kernel
//! `Θ × Y → R`. The residual carries everything the environment knows that
//! the game does not observe, including correlations with other players'
//! moves. Localization (restricting a context for a composite to one of its
//! parts) is where those correlations earn their keep.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lens::Lens;
use crate::prob::{Dist, Kernel, Side};
use crate::value::{FiniteSet, Value};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Context {
    theta: FiniteSet,
    history: Dist,
    continuation: Kernel,
}

impl Context {
    /// Store a context after checking the wiring: `history` lives on
    /// `Θ × X` and `continuation` maps `Θ × Y` to the payoff space.
    pub fn new(theta: FiniteSet, history: Dist, continuation: Kernel) -> Result<Self> {
        let (h_theta, _x) = history.space().factors().map_err(|_| {
            Error::mismatch("context history", "history space must be a product Θ×X")
        })?;
        if h_theta != &theta {
            return Err(Error::mismatch(
                "context history",
                format!(
                    "history residual {} does not match Θ {}",
                    h_theta.describe(),
                    theta.describe()
                ),
            ));
        }
        let (k_theta, _y) = continuation.domain().factors().map_err(|_| {
            Error::mismatch(
                "context continuation",
                "continuation domain must be a product Θ×Y",
            )
        })?;
        if k_theta != &theta {
            return Err(Error::mismatch(
                "context continuation",
                format!(
                    "continuation residual {} does not match Θ {}",
                    k_theta.describe(),
                    theta.describe()
                ),
            ));
        }
        Ok(Context {
            theta,
            history,
            continuation,
        })
    }

    /// The unique context for a closed game `I → I` with a trivial payoff
    /// space `{()}`.
    pub fn closed() -> Self {
        let unit = FiniteSet::unit();
        let theta = unit.clone();
        let history = Dist::dirac(
            Value::pair(Value::unit(), Value::unit()),
            FiniteSet::product(&theta, &unit),
        )
        .expect("unit history");
        let continuation = Kernel::deterministic(
            FiniteSet::product(&theta, &unit),
            unit,
            |_| Value::unit(),
        )
        .expect("unit continuation");
        Context::new(theta, history, continuation).expect("closed context is well-typed")
    }

    pub fn theta(&self) -> &FiniteSet {
        &self.theta
    }

    pub fn history(&self) -> &Dist {
        &self.history
    }

    pub fn continuation(&self) -> &Kernel {
        &self.continuation
    }

    /// The observation space `X`.
    pub fn observation_space(&self) -> &FiniteSet {
        self.history
            .space()
            .factors()
            .expect("checked at construction")
            .1
    }

    /// The action space `Y`.
    pub fn action_space(&self) -> &FiniteSet {
        self.continuation
            .domain()
            .factors()
            .expect("checked at construction")
            .1
    }

    /// The payoff space `R`.
    pub fn payoff_space(&self) -> &FiniteSet {
        self.continuation.codomain()
    }

    /// Integrate out the residual: the marginal on observations and, for
    /// each supported observation, the posterior-averaged continuation.
    pub fn canonicalize(&self) -> Result<CanonicalContext> {
        let x_marginal = self.history.marginal(Side::Right)?;
        let mut posterior_continuation = BTreeMap::new();
        for x in x_marginal.support() {
            let posterior = self.history.bayes_update(x)?;
            for y in self.action_space().elements() {
                let out = posterior.bind_with(self.payoff_space().clone(), |theta| {
                    Ok(self
                        .continuation
                        .apply(&Value::pair(theta.clone(), y.clone()))?
                        .clone())
                })?;
                posterior_continuation.insert((x.clone(), y.clone()), out);
            }
        }
        Ok(CanonicalContext {
            x_marginal,
            posterior_continuation,
        })
    }

    /// Canonical-form equality on supported observations. Errors if the
    /// observable interfaces differ.
    pub fn context_eq(&self, other: &Context) -> Result<bool> {
        if self.observation_space() != other.observation_space()
            || self.action_space() != other.action_space()
            || self.payoff_space() != other.payoff_space()
        {
            return Err(Error::mismatch(
                "context equality",
                "contexts have different observable interfaces",
            ));
        }
        Ok(self.canonicalize()? == other.canonicalize()?)
    }

    /// Local context for the first stage of a sequential composite: the
    /// second stage's whole lens (view and coutility) is folded into the
    /// continuation; the history is untouched.
    pub fn seq_local_first(&self, tau: &Lens) -> Result<Context> {
        if &tau.target().covariant != self.action_space()
            || &tau.target().contravariant != self.payoff_space()
        {
            return Err(Error::mismatch(
                "seq_local_first",
                format!(
                    "lens target {} does not match context tail ({} with payoffs {})",
                    tau.target().describe(),
                    self.action_space().describe(),
                    self.payoff_space().describe()
                ),
            ));
        }
        let y_space = tau.source().covariant.clone();
        let r_space = tau.source().contravariant.clone();
        let domain = FiniteSet::product(&self.theta, &y_space);
        let continuation = Kernel::from_fn(domain, r_space.clone(), |v| {
            let (theta, y) = v.as_pair()?;
            tau.forward().apply(y)?.bind_with(r_space.clone(), |bz| {
                let (b, z) = bz.as_pair()?;
                self.continuation
                    .apply(&Value::pair(theta.clone(), z.clone()))?
                    .bind_with(r_space.clone(), |q| {
                        Ok(tau
                            .backward()
                            .apply(&Value::pair(b.clone(), q.clone()))?
                            .clone())
                    })
            })
        })?;
        Context::new(self.theta.clone(), self.history.clone(), continuation)
    }

    /// Local context for the second stage of a sequential composite: the
    /// history is pushed forward through the first stage's view, discarding
    /// its residual; the continuation is untouched.
    pub fn seq_local_second(&self, sigma: &Lens) -> Result<Context> {
        if sigma.source().covariant != *self.observation_space() {
            return Err(Error::mismatch(
                "seq_local_second",
                format!(
                    "lens source {} does not match history observations {}",
                    sigma.source().covariant.describe(),
                    self.observation_space().describe()
                ),
            ));
        }
        let y_space = sigma.target().covariant.clone();
        let new_space = FiniteSet::product(&self.theta, &y_space);
        let history = self.history.bind_with(new_space.clone(), |v| {
            let (theta, x) = v.as_pair()?;
            let theta = theta.clone();
            sigma.forward().apply(x)?.pushforward(new_space.clone(), |ay| {
                let (_a, y) = ay.as_pair().expect("pair");
                Value::pair(theta.clone(), y.clone())
            })
        })?;
        Context::new(self.theta.clone(), history, self.continuation.clone())
    }

    /// Local context for the left component of a tensor: the right player's
    /// view is played out of the history (its residual discarded), the
    /// produced action joins the hidden residual, and the continuation keeps
    /// only the left payoff.
    pub fn tensor_local_left(&self, mu: &Lens) -> Result<Context> {
        let (x_space, x_prime_space) = self.observation_space().factors().map_err(|_| {
            Error::mismatch("tensor_local_left", "observations must form a product X×X'")
        })?;
        let (y_space, y_prime_space) = self.action_space().factors().map_err(|_| {
            Error::mismatch("tensor_local_left", "actions must form a product Y×Y'")
        })?;
        let (r_space, _r_prime_space) = self.payoff_space().factors().map_err(|_| {
            Error::mismatch("tensor_local_left", "payoffs must form a product R×R'")
        })?;
        if &mu.source().covariant != x_prime_space || &mu.target().covariant != y_prime_space {
            return Err(Error::mismatch(
                "tensor_local_left",
                format!(
                    "lens {}→{} does not match the right wires {}→{}",
                    mu.source().covariant.describe(),
                    mu.target().covariant.describe(),
                    x_prime_space.describe(),
                    y_prime_space.describe()
                ),
            ));
        }

        // Accumulate the new history directly, then restrict the residual to
        // its support: unsupported residual values are unobservable, and the
        // restriction keeps continuation tables small under repeated
        // localization.
        let mut raw: std::collections::BTreeMap<Value, crate::rational::Rational> =
            std::collections::BTreeMap::new();
        for (v, w) in self.history.iter() {
            let (theta, xs) = v.as_pair()?;
            let (x, x_prime) = xs.as_pair()?;
            for (ay, wy) in mu.forward().apply(x_prime)?.iter() {
                let (_a, y_prime) = ay.as_pair()?;
                let key = Value::pair(
                    Value::pair(theta.clone(), y_prime.clone()),
                    x.clone(),
                );
                *raw.entry(key).or_insert_with(crate::rational::zero) += w * wy;
            }
        }
        let mut residuals = std::collections::BTreeSet::new();
        for key in raw.keys() {
            residuals.insert(key.as_pair()?.0.clone());
        }
        let new_theta = FiniteSet::new(residuals.into_iter().collect())?;
        let history = Dist::from_weights(FiniteSet::product(&new_theta, x_space), raw)?;

        let cont_domain = FiniteSet::product(&new_theta, y_space);
        let r_space = r_space.clone();
        let continuation = Kernel::from_fn(cont_domain, r_space.clone(), |v| {
            let (ty, y) = v.as_pair()?;
            let (theta, y_prime) = ty.as_pair()?;
            let joint = self.continuation.apply(&Value::pair(
                theta.clone(),
                Value::pair(y.clone(), y_prime.clone()),
            ))?;
            joint.marginal(Side::Left)
        })?;
        Context::new(new_theta, history, continuation)
    }

    /// Mirror of [`Context::tensor_local_left`] for the right component.
    pub fn tensor_local_right(&self, sigma: &Lens) -> Result<Context> {
        let (x_space, x_prime_space) = self.observation_space().factors().map_err(|_| {
            Error::mismatch("tensor_local_right", "observations must form a product X×X'")
        })?;
        let (y_space, y_prime_space) = self.action_space().factors().map_err(|_| {
            Error::mismatch("tensor_local_right", "actions must form a product Y×Y'")
        })?;
        let (_r_space, r_prime_space) = self.payoff_space().factors().map_err(|_| {
            Error::mismatch("tensor_local_right", "payoffs must form a product R×R'")
        })?;
        if &sigma.source().covariant != x_space || &sigma.target().covariant != y_space {
            return Err(Error::mismatch(
                "tensor_local_right",
                format!(
                    "lens {}→{} does not match the left wires {}→{}",
                    sigma.source().covariant.describe(),
                    sigma.target().covariant.describe(),
                    x_space.describe(),
                    y_space.describe()
                ),
            ));
        }

        let mut raw: std::collections::BTreeMap<Value, crate::rational::Rational> =
            std::collections::BTreeMap::new();
        for (v, w) in self.history.iter() {
            let (theta, xs) = v.as_pair()?;
            let (x, x_prime) = xs.as_pair()?;
            for (ay, wy) in sigma.forward().apply(x)?.iter() {
                let (_a, y) = ay.as_pair()?;
                let key = Value::pair(
                    Value::pair(theta.clone(), y.clone()),
                    x_prime.clone(),
                );
                *raw.entry(key).or_insert_with(crate::rational::zero) += w * wy;
            }
        }
        let mut residuals = std::collections::BTreeSet::new();
        for key in raw.keys() {
            residuals.insert(key.as_pair()?.0.clone());
        }
        let new_theta = FiniteSet::new(residuals.into_iter().collect())?;
        let history = Dist::from_weights(FiniteSet::product(&new_theta, x_prime_space), raw)?;

        let cont_domain = FiniteSet::product(&new_theta, y_prime_space);
        let r_prime_space = r_prime_space.clone();
        let continuation = Kernel::from_fn(cont_domain, r_prime_space.clone(), |v| {
            let (ty, y_prime) = v.as_pair()?;
            let (theta, y) = ty.as_pair()?;
            let joint = self.continuation.apply(&Value::pair(
                theta.clone(),
                Value::pair(y.clone(), y_prime.clone()),
            ))?;
            joint.marginal(Side::Right)
        })?;
        Context::new(new_theta, history, continuation)
    }
}

/// Observable form of a context: marginal on observations plus the
/// posterior-averaged continuation on supported observations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalContext {
    pub x_marginal: Dist,
    /// `(x, y) ↦ payoff distribution`, for `x` in the support.
    pub posterior_continuation: BTreeMap<(Value, Value), Dist>,
}

impl CanonicalContext {
    /// Payoff distribution at a supported observation/action pair.
    pub fn payoff(&self, x: &Value, y: &Value) -> Result<&Dist> {
        self.posterior_continuation
            .get(&(x.clone(), y.clone()))
            .ok_or_else(|| Error::ZeroProbabilityObservation(x.text()))
    }
}
