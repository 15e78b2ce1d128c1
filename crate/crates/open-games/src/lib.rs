//! Exact-arithmetic compositional game theory over finite stochastic maps.
//!
//! The engine is built in layers:
//!
//! - [`prob`]: finite-support distributions and stochastic kernels with
//!   arbitrary-precision rational weights — Bayesian updating, marginals,
//!   products, and the monad operations, all exact.
//! - [`lens`]: coend lenses over those kernels (residual space, forward and
//!   backward legs), their sequential and parallel composition, structural
//!   re-wirings, the sliding relation, and a behavioral canonical form that
//!   serves as decidable equality.
//! - [`context`]: game environments — a hidden residual, a joint history,
//!   and a payoff continuation — with the four localization operators that
//!   restrict a composite's context to one of its parts.
//! - [`game`]: open games as combinator trees (computations, counits,
//!   Bayesian agents, atoms, sequential and tensor composition), strategy
//!   profiles, equilibrium checking, pure-profile enumeration, and
//!   bisimulation checking.
//! - [`classical`]: ordinary Bayesian games with ex post / ex interim /
//!   ex ante utilities and brute-force Bayesian Nash enumeration. This is an
//!   independent oracle; `encode_to_open_game` bridges it to the
//!   compositional engine and the two are cross-checked everywhere.
//! - [`files`], [`cli`]: JSON game/profile formats (rationals as strings
//!   like `"5/16"`, never floats) and the `open-games` binary.
//! - [`laws`]: the seeded randomized law suite (monad, lens category,
//!   monoidal structure, localization squares).
//! - [`scenarios`]: built-in worked examples.
//!
//! # Quick start
//!
//! ```
//! use open_games::prelude::*;
//!
//! // A coin whose two flips agree with probability 5/8.
//! let coin = FiniteSet::atoms(["H", "T"]);
//! let joint = Dist::from_ratios(
//!     FiniteSet::product(&coin, &coin),
//!     [
//!         (Value::pair(Value::atom("H"), Value::atom("H")), 5, 16),
//!         (Value::pair(Value::atom("T"), Value::atom("T")), 5, 16),
//!         (Value::pair(Value::atom("T"), Value::atom("H")), 3, 16),
//!         (Value::pair(Value::atom("H"), Value::atom("T")), 3, 16),
//!     ],
//! )
//! .unwrap();
//!
//! // Exact posterior over the hidden coin after observing heads.
//! let posterior = joint.bayes_update(&Value::atom("H")).unwrap();
//! assert_eq!(posterior.weight(&Value::atom("H")), open_games::rational::ratio(5, 8));
//! ```
//!
//! # Runnable examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run --example biased_coins        # posterior updating + optimal guessing
//! cargo run --example prisoners_dilemma   # pure equilibria via both engines
//! cargo run --example matching_pennies    # no pure equilibrium; mixed verification
//! cargo run --example sequential_threat   # non-credible threats survive plain Nash
//! cargo run --example education_game      # a Bayesian signaling-shaped game
//! cargo run --example lens_algebra        # composing, sliding, canonicalizing lenses
//! cargo run --example bayesian_oracle     # random cross-validation of the two engines
//! cargo run --example law_suite           # the seeded law families
//! ```
//!
//! The single binary drives the same machinery from game description files;
//! see the README for the file formats.

pub mod classical;
pub mod cli;
pub mod context;
pub mod error;
pub mod files;
pub mod game;
pub mod laws;
pub mod lens;
pub mod prob;
pub mod rational;
pub mod scenarios;
pub mod value;

pub mod prelude {
    pub use crate::classical::{BayesianGame, MixedProfile};
    pub use crate::context::{CanonicalContext, Context};
    pub use crate::error::{Error, Result};
    pub use crate::game::{
        agent_best_actions, check_bisimulation, check_simulation, BisimRelation, OpenGame,
        StrategyProfile,
    };
    pub use crate::lens::{structural, CanonicalLens, Lens, LensInterface};
    pub use crate::prob::{Dist, Kernel, Side};
    pub use crate::rational::Rational;
    pub use crate::value::{FiniteSet, Value};
}
