//! Finite-support probability distributions with exact rational weights, and
//! stochastic kernels (one distribution per input) — the morphisms of the
//! Kleisli category of the finitary distribution monad.
//!
//! Every operation re-establishes the normalization invariant: weights are
//! strictly positive (zero entries are pruned, so the key set *is* the
//! support) and sum exactly to 1.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::value::{FiniteSet, Value};

/// Which factor of a product space a marginal keeps.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// An exact finite-support distribution over a declared space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dist {
    space: FiniteSet,
    weights: BTreeMap<Value, Rational>,
}

impl Dist {
    /// Internal constructor: checks membership, prunes zeros, asserts total
    /// mass is exactly 1.
    fn checked(space: FiniteSet, weights: BTreeMap<Value, Rational>) -> Result<Self> {
        let mut pruned = BTreeMap::new();
        let mut total = rational::zero();
        for (v, w) in weights {
            if !rational::is_nonnegative(&w) {
                return Err(Error::Construction(format!(
                    "negative weight {} on {}",
                    rational::to_string(&w),
                    v
                )));
            }
            if !space.contains(&v) {
                return Err(Error::Domain(format!(
                    "value {} outside space {}",
                    v,
                    space.describe()
                )));
            }
            if w != rational::zero() {
                total += &w;
                pruned.insert(v, w);
            }
        }
        if total != rational::one() {
            return Err(Error::Construction(format!(
                "weights sum to {}, not 1",
                rational::to_string(&total)
            )));
        }
        Ok(Dist {
            space,
            weights: pruned,
        })
    }

    /// The point mass at `x`.
    pub fn dirac(x: Value, space: FiniteSet) -> Result<Self> {
        if !space.contains(&x) {
            return Err(Error::Domain(format!(
                "value {} outside space {}",
                x,
                space.describe()
            )));
        }
        let mut weights = BTreeMap::new();
        weights.insert(x, rational::one());
        Ok(Dist { space, weights })
    }

    /// Normalize raw nonnegative weights (at least one positive).
    pub fn from_weights(space: FiniteSet, raw: BTreeMap<Value, Rational>) -> Result<Self> {
        let mut total = rational::zero();
        for (v, w) in &raw {
            if !rational::is_nonnegative(w) {
                return Err(Error::Construction(format!(
                    "negative weight {} on {}",
                    rational::to_string(w),
                    v
                )));
            }
            total += w;
        }
        if total == rational::zero() {
            return Err(Error::Construction("all weights are zero".to_string()));
        }
        let normalized = raw
            .into_iter()
            .map(|(v, w)| (v, w / &total))
            .collect();
        Dist::checked(space, normalized)
    }

    /// Convenience: weights given as `(value, numerator, denominator)` triples.
    pub fn from_ratios<I>(space: FiniteSet, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Value, i64, i64)>,
    {
        let map = raw
            .into_iter()
            .map(|(v, n, d)| (v, rational::ratio(n, d)))
            .collect();
        Dist::from_weights(space, map)
    }

    /// Equal weight on every element of the space.
    pub fn uniform(space: FiniteSet) -> Result<Self> {
        let raw = space
            .elements()
            .into_iter()
            .map(|v| (v, rational::one()))
            .collect();
        Dist::from_weights(space, raw)
    }

    pub fn space(&self) -> &FiniteSet {
        &self.space
    }

    /// Probability of `v` (zero off-support).
    pub fn weight(&self, v: &Value) -> Rational {
        self.weights.get(v).cloned().unwrap_or_else(rational::zero)
    }

    /// The support, which is exactly the key set.
    pub fn support(&self) -> impl Iterator<Item = &Value> {
        self.weights.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Value, &Rational)> {
        self.weights.iter()
    }

    pub fn is_dirac(&self) -> bool {
        self.weights.len() == 1
    }

    /// Push forward along a total map into `target`.
    pub fn pushforward<F>(&self, target: FiniteSet, f: F) -> Result<Dist>
    where
        F: Fn(&Value) -> Value,
    {
        let mut weights: BTreeMap<Value, Rational> = BTreeMap::new();
        for (v, w) in &self.weights {
            let image = f(v);
            if !target.contains(&image) {
                return Err(Error::Domain(format!(
                    "pushforward image {} outside target {}",
                    image,
                    target.describe()
                )));
            }
            *weights.entry(image).or_insert_with(rational::zero) += w;
        }
        Dist::checked(target, weights)
    }

    /// Monadic extension: law of total probability through `k`.
    pub fn bind(&self, k: &Kernel) -> Result<Dist> {
        if k.domain() != &self.space {
            return Err(Error::mismatch(
                "bind",
                format!(
                    "kernel domain {} does not match distribution space {}",
                    k.domain().describe(),
                    self.space.describe()
                ),
            ));
        }
        self.bind_with(k.codomain().clone(), |v| Ok(k.apply(v)?.clone()))
    }

    /// Monadic extension through an arbitrary continuation. The continuation
    /// is consulted only on the support.
    pub fn bind_with<F>(&self, codomain: FiniteSet, f: F) -> Result<Dist>
    where
        F: Fn(&Value) -> Result<Dist>,
    {
        let mut weights: BTreeMap<Value, Rational> = BTreeMap::new();
        for (v, w) in &self.weights {
            let inner = f(v)?;
            if inner.space != codomain {
                return Err(Error::mismatch(
                    "bind",
                    format!(
                        "continuation returned space {} instead of {}",
                        inner.space.describe(),
                        codomain.describe()
                    ),
                ));
            }
            for (u, wu) in &inner.weights {
                *weights.entry(u.clone()).or_insert_with(rational::zero) += w * wu;
            }
        }
        Dist::checked(codomain, weights)
    }

    /// Independent joint distribution on the declared product space.
    pub fn product(&self, other: &Dist) -> Dist {
        let space = FiniteSet::product(&self.space, &other.space);
        let mut weights = BTreeMap::new();
        for (a, wa) in &self.weights {
            for (b, wb) in &other.weights {
                weights.insert(Value::pair(a.clone(), b.clone()), wa * wb);
            }
        }
        Dist { space, weights }
    }

    /// Marginal onto one declared factor of a product space.
    pub fn marginal(&self, side: Side) -> Result<Dist> {
        let (l, r) = self.space.factors()?;
        let (target, pick): (FiniteSet, fn(&Value) -> Value) = match side {
            Side::Left => (l.clone(), |v| v.as_pair().expect("product element").0.clone()),
            Side::Right => (r.clone(), |v| v.as_pair().expect("product element").1.clone()),
        };
        self.pushforward(target, pick)
    }

    /// Exact expected value of a distribution over numbers.
    pub fn expectation(&self) -> Result<Rational> {
        let mut total = rational::zero();
        for (v, w) in &self.weights {
            total += v.as_num()? * w;
        }
        Ok(total)
    }

    /// Condition a joint distribution over `Θ × X` on the observation `x`,
    /// returning the exact posterior over `Θ`. Observations of zero marginal
    /// probability are an error, not a default.
    pub fn bayes_update(&self, x: &Value) -> Result<Dist> {
        let (theta, _obs) = self.space.factors()?;
        let mut raw: BTreeMap<Value, Rational> = BTreeMap::new();
        for (v, w) in &self.weights {
            let (t, o) = v.as_pair()?;
            if o == x {
                *raw.entry(t.clone()).or_insert_with(rational::zero) += w;
            }
        }
        if raw.is_empty() {
            return Err(Error::ZeroProbabilityObservation(x.text()));
        }
        Dist::from_weights(theta.clone(), raw)
    }
}

/// A finite stochastic map: a total table of distributions over the codomain,
/// one per domain element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Kernel {
    domain: FiniteSet,
    codomain: FiniteSet,
    table: BTreeMap<Value, Dist>,
}

impl Kernel {
    /// Build from an explicit table; must be total and well-typed.
    pub fn new(domain: FiniteSet, codomain: FiniteSet, table: BTreeMap<Value, Dist>) -> Result<Self> {
        for x in domain.elements() {
            match table.get(&x) {
                None => {
                    return Err(Error::Construction(format!(
                        "kernel table missing entry for {x}"
                    )))
                }
                Some(d) if d.space() != &codomain => {
                    return Err(Error::mismatch(
                        "kernel entry",
                        format!(
                            "entry for {} has space {}, expected {}",
                            x,
                            d.space().describe(),
                            codomain.describe()
                        ),
                    ))
                }
                Some(_) => {}
            }
        }
        if table.len() != domain.len() {
            return Err(Error::Construction(
                "kernel table keys outside the domain".to_string(),
            ));
        }
        Ok(Kernel {
            domain,
            codomain,
            table,
        })
    }

    /// Tabulate a function returning distributions.
    pub fn from_fn<F>(domain: FiniteSet, codomain: FiniteSet, f: F) -> Result<Self>
    where
        F: Fn(&Value) -> Result<Dist>,
    {
        let mut table = BTreeMap::new();
        for x in domain.elements() {
            table.insert(x.clone(), f(&x)?);
        }
        Kernel::new(domain, codomain, table)
    }

    /// Tabulate a deterministic function as a Dirac kernel.
    pub fn deterministic<F>(domain: FiniteSet, codomain: FiniteSet, f: F) -> Result<Self>
    where
        F: Fn(&Value) -> Value,
    {
        Kernel::from_fn(domain, codomain.clone(), |x| {
            Dist::dirac(f(x), codomain.clone())
        })
    }

    pub fn identity(space: FiniteSet) -> Self {
        Kernel::deterministic(space.clone(), space, |x| x.clone())
            .expect("identity kernel is always well-typed")
    }

    /// The copy comonoid: `x ↦ δ(x,x)` on the declared square.
    pub fn copy(space: FiniteSet) -> Self {
        let codomain = FiniteSet::product(&space, &space);
        Kernel::deterministic(space, codomain, |x| Value::pair(x.clone(), x.clone()))
            .expect("copy kernel is always well-typed")
    }

    /// The delete map into the terminal unit.
    pub fn delete(space: FiniteSet) -> Self {
        Kernel::deterministic(space, FiniteSet::unit(), |_| Value::unit())
            .expect("delete kernel is always well-typed")
    }

    /// A kernel ignoring its input.
    pub fn constant(domain: FiniteSet, value: Dist) -> Self {
        let codomain = value.space().clone();
        Kernel::from_fn(domain, codomain, |_| Ok(value.clone()))
            .expect("constant kernel is always well-typed")
    }

    pub fn domain(&self) -> &FiniteSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSet {
        &self.codomain
    }

    pub fn apply(&self, x: &Value) -> Result<&Dist> {
        self.table.get(x).ok_or_else(|| {
            Error::Domain(format!(
                "kernel input {} outside domain {}",
                x,
                self.domain.describe()
            ))
        })
    }

    /// Kleisli composition `self ∘ first` (run `first`, then `self`).
    pub fn compose(&self, first: &Kernel) -> Result<Kernel> {
        if first.codomain != self.domain {
            return Err(Error::mismatch(
                "kernel composition",
                format!(
                    "inner codomain {} does not match outer domain {}",
                    first.codomain.describe(),
                    self.domain.describe()
                ),
            ));
        }
        Kernel::from_fn(first.domain.clone(), self.codomain.clone(), |x| {
            first.apply(x)?.bind_with(self.codomain.clone(), |y| {
                Ok(self.apply(y)?.clone())
            })
        })
    }

    /// Monoidal tensor: `(k1 ⊗ k2)(x1,x2) = k1(x1) × k2(x2)`.
    pub fn tensor(&self, other: &Kernel) -> Kernel {
        let domain = FiniteSet::product(&self.domain, &other.domain);
        let codomain = FiniteSet::product(&self.codomain, &other.codomain);
        Kernel::from_fn(domain, codomain, |x| {
            let (a, b) = x.as_pair()?;
            Ok(self.apply(a)?.product(other.apply(b)?))
        })
        .expect("tensor of well-typed kernels is well-typed")
    }

    /// True when every entry is a point mass.
    pub fn is_deterministic(&self) -> bool {
        self.table.values().all(Dist::is_dirac)
    }
}
