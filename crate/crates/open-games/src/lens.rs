//! Coend lenses over finite stochastic maps.
//!
//! A lens `(X,S) → (Y,R)` is stored as a representative: a residual space `A`,
//! a forward kernel `X → A⊗Y`, and a backward kernel `A⊗R → S`. Two
//! representatives denote the same lens when one can be obtained from the
//! other by sliding a map between the residual legs. Equality is decided
//! behaviorally: condition the residual on the observed output and compare
//! the resulting forward marginal and backward conditionals.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::prob::{Dist, Kernel, Side};
use crate::value::{FiniteSet, Value};

/// One side of a lens: a covariant space paired with a contravariant one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LensInterface {
    pub covariant: FiniteSet,
    pub contravariant: FiniteSet,
}

impl LensInterface {
    pub fn new(covariant: FiniteSet, contravariant: FiniteSet) -> Self {
        LensInterface {
            covariant,
            contravariant,
        }
    }

    /// The monoidal unit interface `I = (Unit, Unit)`.
    pub fn unit() -> Self {
        LensInterface::new(FiniteSet::unit(), FiniteSet::unit())
    }

    pub fn is_unit(&self) -> bool {
        self.covariant.is_unit() && self.contravariant.is_unit()
    }

    /// Pointwise product of both sides.
    pub fn tensor(&self, other: &LensInterface) -> Self {
        LensInterface::new(
            FiniteSet::product(&self.covariant, &other.covariant),
            FiniteSet::product(&self.contravariant, &other.contravariant),
        )
    }

    pub fn describe(&self) -> String {
        format!(
            "({},{})",
            self.covariant.describe(),
            self.contravariant.describe()
        )
    }
}

/// A coend-lens representative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lens {
    source: LensInterface,
    target: LensInterface,
    residual: FiniteSet,
    forward: Kernel,
    backward: Kernel,
}

impl Lens {
    /// Store a representative after checking every wire.
    pub fn new(
        source: LensInterface,
        target: LensInterface,
        residual: FiniteSet,
        forward: Kernel,
        backward: Kernel,
    ) -> Result<Self> {
        if forward.domain() != &source.covariant {
            return Err(Error::mismatch(
                "forward domain",
                format!(
                    "expected {}, got {}",
                    source.covariant.describe(),
                    forward.domain().describe()
                ),
            ));
        }
        let expected_fwd = FiniteSet::product(&residual, &target.covariant);
        if forward.codomain() != &expected_fwd {
            return Err(Error::mismatch(
                "forward codomain",
                format!(
                    "expected {}, got {}",
                    expected_fwd.describe(),
                    forward.codomain().describe()
                ),
            ));
        }
        let expected_back = FiniteSet::product(&residual, &target.contravariant);
        if backward.domain() != &expected_back {
            return Err(Error::mismatch(
                "backward domain",
                format!(
                    "expected {}, got {}",
                    expected_back.describe(),
                    backward.domain().describe()
                ),
            ));
        }
        if backward.codomain() != &source.contravariant {
            return Err(Error::mismatch(
                "backward codomain",
                format!(
                    "expected {}, got {}",
                    source.contravariant.describe(),
                    backward.codomain().describe()
                ),
            ));
        }
        Ok(Lens {
            source,
            target,
            residual,
            forward,
            backward,
        })
    }

    pub fn source(&self) -> &LensInterface {
        &self.source
    }

    pub fn target(&self) -> &LensInterface {
        &self.target
    }

    pub fn residual(&self) -> &FiniteSet {
        &self.residual
    }

    pub fn forward(&self) -> &Kernel {
        &self.forward
    }

    pub fn backward(&self) -> &Kernel {
        &self.backward
    }

    /// The identity lens: unit residual, both legs identities.
    pub fn identity(iface: &LensInterface) -> Self {
        let unit = FiniteSet::unit();
        let forward = Kernel::deterministic(
            iface.covariant.clone(),
            FiniteSet::product(&unit, &iface.covariant),
            |x| Value::pair(Value::unit(), x.clone()),
        )
        .expect("identity forward");
        let backward = Kernel::deterministic(
            FiniteSet::product(&unit, &iface.contravariant),
            iface.contravariant.clone(),
            |v| v.as_pair().expect("pair").1.clone(),
        )
        .expect("identity backward");
        Lens::new(iface.clone(), iface.clone(), unit, forward, backward)
            .expect("identity lens is well-typed")
    }

    /// The pair lens `⟨f,g⟩` of a covariant and a contravariant kernel, with
    /// unit residual.
    pub fn pair(f: &Kernel, g: &Kernel) -> Self {
        let source = LensInterface::new(f.domain().clone(), g.codomain().clone());
        let target = LensInterface::new(f.codomain().clone(), g.domain().clone());
        let unit = FiniteSet::unit();
        let fwd_codomain = FiniteSet::product(&unit, &target.covariant);
        let forward = Kernel::from_fn(source.covariant.clone(), fwd_codomain.clone(), |x| {
            f.apply(x)?
                .pushforward(fwd_codomain.clone(), |y| Value::pair(Value::unit(), y.clone()))
        })
        .expect("pair forward");
        let backward = Kernel::from_fn(
            FiniteSet::product(&unit, &target.contravariant),
            source.contravariant.clone(),
            |v| {
                let (_, r) = v.as_pair()?;
                Ok(g.apply(r)?.clone())
            },
        )
        .expect("pair backward");
        Lens::new(source, target, unit, forward, backward).expect("pair lens is well-typed")
    }

    /// The counit lens of `f : X → S`: consumes `X` forward, replays it
    /// through `f` backward. Residual is `X` itself.
    pub fn counit(f: &Kernel) -> Self {
        let source = LensInterface::new(f.domain().clone(), f.codomain().clone());
        let target = LensInterface::unit();
        let residual = f.domain().clone();
        let fwd_codomain = FiniteSet::product(&residual, &target.covariant);
        let forward = Kernel::deterministic(source.covariant.clone(), fwd_codomain, |x| {
            Value::pair(x.clone(), Value::unit())
        })
        .expect("counit forward");
        let backward = Kernel::from_fn(
            FiniteSet::product(&residual, &target.contravariant),
            source.contravariant.clone(),
            |v| {
                let (x, _) = v.as_pair()?;
                Ok(f.apply(x)?.clone())
            },
        )
        .expect("counit backward");
        Lens::new(source, target, residual, forward, backward).expect("counit lens is well-typed")
    }

    /// Sequential composite `self ∘ first`. Residuals multiply.
    pub fn compose(&self, first: &Lens) -> Result<Lens> {
        if first.target != self.source {
            return Err(Error::mismatch(
                "lens composition",
                format!(
                    "inner target {} does not match outer source {}",
                    first.target.describe(),
                    self.source.describe()
                ),
            ));
        }
        let residual = FiniteSet::product(&first.residual, &self.residual);
        let target = self.target.clone();
        let source = first.source.clone();

        let fwd_codomain = FiniteSet::product(&residual, &target.covariant);
        let first_fwd = &first.forward;
        let second_fwd = &self.forward;
        let forward = Kernel::from_fn(source.covariant.clone(), fwd_codomain.clone(), |x| {
            first_fwd.apply(x)?.bind_with(fwd_codomain.clone(), |ay| {
                let (a, y) = ay.as_pair()?;
                let a = a.clone();
                second_fwd.apply(y)?.pushforward(fwd_codomain.clone(), |bz| {
                    let (b, z) = bz.as_pair().expect("pair");
                    Value::pair(Value::pair(a.clone(), b.clone()), z.clone())
                })
            })
        })?;

        let back_domain = FiniteSet::product(&residual, &target.contravariant);
        let first_back = &first.backward;
        let second_back = &self.backward;
        let backward = Kernel::from_fn(back_domain, source.contravariant.clone(), |v| {
            let (ab, q) = v.as_pair()?;
            let (a, b) = ab.as_pair()?;
            second_back
                .apply(&Value::pair(b.clone(), q.clone()))?
                .bind_with(source.contravariant.clone(), |r| {
                    Ok(first_back.apply(&Value::pair(a.clone(), r.clone()))?.clone())
                })
        })?;

        Lens::new(source, target, residual, forward, backward)
    }

    /// Parallel composite. Residuals multiply; wires are interleaved by
    /// explicit swaps absorbed into the pairing below.
    pub fn tensor(&self, other: &Lens) -> Lens {
        let source = self.source.tensor(&other.source);
        let target = self.target.tensor(&other.target);
        let residual = FiniteSet::product(&self.residual, &other.residual);

        let fwd_codomain = FiniteSet::product(&residual, &target.covariant);
        let forward = Kernel::from_fn(source.covariant.clone(), fwd_codomain.clone(), |x| {
            let (x1, x2) = x.as_pair()?;
            let joint = self.forward.apply(x1)?.product(other.forward.apply(x2)?);
            joint.pushforward(fwd_codomain.clone(), |v| {
                let (ay, bz) = v.as_pair().expect("pair");
                let (a, y) = ay.as_pair().expect("pair");
                let (b, z) = bz.as_pair().expect("pair");
                Value::pair(
                    Value::pair(a.clone(), b.clone()),
                    Value::pair(y.clone(), z.clone()),
                )
            })
        })
        .expect("tensor forward");

        let back_domain = FiniteSet::product(&residual, &target.contravariant);
        let backward = Kernel::from_fn(back_domain, source.contravariant.clone(), |v| {
            let (ab, rr) = v.as_pair()?;
            let (a, b) = ab.as_pair()?;
            let (r1, r2) = rr.as_pair()?;
            let d1 = self.backward.apply(&Value::pair(a.clone(), r1.clone()))?;
            let d2 = other.backward.apply(&Value::pair(b.clone(), r2.clone()))?;
            Ok(d1.product(d2))
        })
        .expect("tensor backward");

        Lens::new(source, target, residual, forward, backward)
            .expect("tensor of well-typed lenses is well-typed")
    }

    /// Condition the residual on the observed output.
    pub fn canonicalize(&self) -> CanonicalLens {
        let y_space = &self.target.covariant;
        let fwd = Kernel::from_fn(
            self.source.covariant.clone(),
            y_space.clone(),
            |x| self.forward.apply(x)?.marginal(Side::Right),
        )
        .expect("canonical forward");

        let mut back = BTreeMap::new();
        for x in self.source.covariant.elements() {
            let joint = self.forward.apply(&x).expect("total forward");
            for y in fwd.apply(&x).expect("total").support() {
                // Posterior over the residual given (x, y); defined because
                // y is in the forward support.
                let residual_posterior = joint.bayes_update(y).expect("supported observation");
                for r in self.target.contravariant.elements() {
                    let out = residual_posterior
                        .bind_with(self.source.contravariant.clone(), |a| {
                            Ok(self
                                .backward
                                .apply(&Value::pair(a.clone(), r.clone()))?
                                .clone())
                        })
                        .expect("total backward");
                    back.insert((x.clone(), y.clone(), r.clone()), out);
                }
            }
        }
        CanonicalLens { fwd, back }
    }

    /// Behavioral equality: canonical forms agree. Errors if the interfaces
    /// differ.
    pub fn behavioral_eq(&self, other: &Lens) -> Result<bool> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::mismatch(
                "behavioral equality",
                format!(
                    "interfaces differ: {}→{} vs {}→{}",
                    self.source.describe(),
                    self.target.describe(),
                    other.source.describe(),
                    other.target.describe()
                ),
            ));
        }
        Ok(self.canonicalize() == other.canonicalize())
    }

    /// Slide a deterministic relabeling `f` off this lens's residual: the
    /// result has residual `f.codomain()`, forward post-composed with `f`,
    /// and a backward reconstructed from this one. Errors unless the backward
    /// is constant on the fibers of `f` (otherwise no related representative
    /// exists). For stochastic slide maps use [`Lens::sliding_pair`].
    pub fn slide(&self, f: &Kernel) -> Result<Lens> {
        if f.domain() != &self.residual {
            return Err(Error::mismatch(
                "slide",
                format!(
                    "map domain {} does not match residual {}",
                    f.domain().describe(),
                    self.residual.describe()
                ),
            ));
        }
        if !f.is_deterministic() {
            return Err(Error::mismatch(
                "slide",
                "slide map must be deterministic; use sliding_pair for stochastic maps",
            ));
        }
        let coarse = f.codomain().clone();
        // Collect fibers of f.
        let mut fibers: BTreeMap<Value, Vec<Value>> = BTreeMap::new();
        for a in self.residual.elements() {
            let image = f
                .apply(&a)?
                .support()
                .next()
                .expect("deterministic kernel has a point support")
                .clone();
            fibers.entry(image).or_default().push(a);
        }
        let r_space = &self.target.contravariant;
        let mut back_table = BTreeMap::new();
        for b in coarse.elements() {
            for r in r_space.elements() {
                let d = match fibers.get(&b) {
                    Some(members) => {
                        let first = self.backward.apply(&Value::pair(members[0].clone(), r.clone()))?;
                        for a in &members[1..] {
                            let other = self.backward.apply(&Value::pair(a.clone(), r.clone()))?;
                            if other != first {
                                return Err(Error::mismatch(
                                    "slide",
                                    format!(
                                        "backward is not constant on the fiber of {b} at feedback {r}"
                                    ),
                                ));
                            }
                        }
                        first.clone()
                    }
                    // Unreachable residual values are unobservable; any
                    // distribution is a valid completion.
                    None => Dist::uniform(self.source.contravariant.clone())?,
                };
                back_table.insert(Value::pair(b.clone(), r.clone()), d);
            }
        }
        let backward = Kernel::new(
            FiniteSet::product(&coarse, r_space),
            self.source.contravariant.clone(),
            back_table,
        )?;
        let forward = f
            .tensor(&Kernel::identity(self.target.covariant.clone()))
            .compose(&self.forward)?;
        Lens::new(
            self.source.clone(),
            self.target.clone(),
            coarse,
            forward,
            backward,
        )
    }

    /// The two representatives related by sliding `f : A → B` between the
    /// legs: a fine one with residual `A` (backward pre-composed with `f`)
    /// and a coarse one with residual `B` (forward post-composed with `f`).
    /// This is the generative form of the sliding relation and accepts
    /// stochastic `f`.
    pub fn sliding_pair(
        source: LensInterface,
        target: LensInterface,
        forward_fine: &Kernel,
        f: &Kernel,
        backward_coarse: &Kernel,
    ) -> Result<(Lens, Lens)> {
        let fine_residual = f.domain().clone();
        let coarse_residual = f.codomain().clone();

        let fine_backward = backward_coarse
            .compose(&f.tensor(&Kernel::identity(target.contravariant.clone())))?;
        let fine = Lens::new(
            source.clone(),
            target.clone(),
            fine_residual,
            forward_fine.clone(),
            fine_backward,
        )?;

        let coarse_forward = f
            .tensor(&Kernel::identity(target.covariant.clone()))
            .compose(forward_fine)?;
        let coarse = Lens::new(
            source,
            target,
            coarse_residual,
            coarse_forward,
            backward_coarse.clone(),
        )?;
        Ok((fine, coarse))
    }

    /// Rebuild a representative from a canonical form, with residual `X×Y`
    /// carrying the conditional.
    pub fn reconstitute(canonical: &CanonicalLens, source: &LensInterface, target: &LensInterface) -> Result<Lens> {
        let residual = FiniteSet::product(&source.covariant, &target.covariant);
        let fwd_codomain = FiniteSet::product(&residual, &target.covariant);
        let forward = Kernel::from_fn(source.covariant.clone(), fwd_codomain.clone(), |x| {
            canonical.fwd.apply(x)?.pushforward(fwd_codomain.clone(), |y| {
                Value::pair(Value::pair(x.clone(), y.clone()), y.clone())
            })
        })?;
        let back_domain = FiniteSet::product(&residual, &target.contravariant);
        let backward = Kernel::from_fn(back_domain, source.contravariant.clone(), |v| {
            let (xy, r) = v.as_pair()?;
            let (x, y) = xy.as_pair()?;
            match canonical.back.get(&(x.clone(), y.clone(), r.clone())) {
                Some(d) => Ok(d.clone()),
                // Off-support pairs never occur; complete arbitrarily.
                None => Dist::uniform(source.contravariant.clone()),
            }
        })?;
        Lens::new(
            source.clone(),
            target.clone(),
            residual,
            forward,
            backward,
        )
    }
}

/// Structural Dirac lenses: the symmetric monoidal re-wirings.
pub mod structural {
    use super::*;

    /// Swap `p ⊗ q → q ⊗ p`.
    pub fn swap(p: &LensInterface, q: &LensInterface) -> Lens {
        let fwd = Kernel::deterministic(
            FiniteSet::product(&p.covariant, &q.covariant),
            FiniteSet::product(&q.covariant, &p.covariant),
            |v| {
                let (a, b) = v.as_pair().expect("pair");
                Value::pair(b.clone(), a.clone())
            },
        )
        .expect("swap forward");
        let back = Kernel::deterministic(
            FiniteSet::product(&q.contravariant, &p.contravariant),
            FiniteSet::product(&p.contravariant, &q.contravariant),
            |v| {
                let (b, a) = v.as_pair().expect("pair");
                Value::pair(a.clone(), b.clone())
            },
        )
        .expect("swap backward");
        Lens::pair(&fwd, &back)
    }

    /// Associator `(p ⊗ q) ⊗ r → p ⊗ (q ⊗ r)`.
    pub fn assoc(p: &LensInterface, q: &LensInterface, r: &LensInterface) -> Lens {
        let src_cov = FiniteSet::product(&FiniteSet::product(&p.covariant, &q.covariant), &r.covariant);
        let tgt_cov = FiniteSet::product(&p.covariant, &FiniteSet::product(&q.covariant, &r.covariant));
        let fwd = Kernel::deterministic(src_cov, tgt_cov, |v| {
            let (xy, z) = v.as_pair().expect("pair");
            let (x, y) = xy.as_pair().expect("pair");
            Value::pair(x.clone(), Value::pair(y.clone(), z.clone()))
        })
        .expect("assoc forward");

        let tgt_con = FiniteSet::product(
            &p.contravariant,
            &FiniteSet::product(&q.contravariant, &r.contravariant),
        );
        let src_con = FiniteSet::product(
            &FiniteSet::product(&p.contravariant, &q.contravariant),
            &r.contravariant,
        );
        let back = Kernel::deterministic(tgt_con, src_con, |v| {
            let (a, bc) = v.as_pair().expect("pair");
            let (b, c) = bc.as_pair().expect("pair");
            Value::pair(Value::pair(a.clone(), b.clone()), c.clone())
        })
        .expect("assoc backward");
        Lens::pair(&fwd, &back)
    }

    /// Inverse associator `p ⊗ (q ⊗ r) → (p ⊗ q) ⊗ r`.
    pub fn assoc_inv(p: &LensInterface, q: &LensInterface, r: &LensInterface) -> Lens {
        let src_cov = FiniteSet::product(&p.covariant, &FiniteSet::product(&q.covariant, &r.covariant));
        let tgt_cov = FiniteSet::product(&FiniteSet::product(&p.covariant, &q.covariant), &r.covariant);
        let fwd = Kernel::deterministic(src_cov, tgt_cov, |v| {
            let (x, yz) = v.as_pair().expect("pair");
            let (y, z) = yz.as_pair().expect("pair");
            Value::pair(Value::pair(x.clone(), y.clone()), z.clone())
        })
        .expect("assoc_inv forward");

        let tgt_con = FiniteSet::product(
            &FiniteSet::product(&p.contravariant, &q.contravariant),
            &r.contravariant,
        );
        let src_con = FiniteSet::product(
            &p.contravariant,
            &FiniteSet::product(&q.contravariant, &r.contravariant),
        );
        let back = Kernel::deterministic(tgt_con, src_con, |v| {
            let (ab, c) = v.as_pair().expect("pair");
            let (a, b) = ab.as_pair().expect("pair");
            Value::pair(a.clone(), Value::pair(b.clone(), c.clone()))
        })
        .expect("assoc_inv backward");
        Lens::pair(&fwd, &back)
    }

    /// Left unitor `I ⊗ p → p`.
    pub fn unit_left(p: &LensInterface) -> Lens {
        let unit = FiniteSet::unit();
        let fwd = Kernel::deterministic(
            FiniteSet::product(&unit, &p.covariant),
            p.covariant.clone(),
            |v| v.as_pair().expect("pair").1.clone(),
        )
        .expect("unit_left forward");
        let back = Kernel::deterministic(
            p.contravariant.clone(),
            FiniteSet::product(&unit, &p.contravariant),
            |v| Value::pair(Value::unit(), v.clone()),
        )
        .expect("unit_left backward");
        Lens::pair(&fwd, &back)
    }

    /// `p → I ⊗ p`.
    pub fn unit_left_inv(p: &LensInterface) -> Lens {
        let unit = FiniteSet::unit();
        let fwd = Kernel::deterministic(
            p.covariant.clone(),
            FiniteSet::product(&unit, &p.covariant),
            |v| Value::pair(Value::unit(), v.clone()),
        )
        .expect("unit_left_inv forward");
        let back = Kernel::deterministic(
            FiniteSet::product(&unit, &p.contravariant),
            p.contravariant.clone(),
            |v| v.as_pair().expect("pair").1.clone(),
        )
        .expect("unit_left_inv backward");
        Lens::pair(&fwd, &back)
    }

    /// Right unitor `p ⊗ I → p`.
    pub fn unit_right(p: &LensInterface) -> Lens {
        let unit = FiniteSet::unit();
        let fwd = Kernel::deterministic(
            FiniteSet::product(&p.covariant, &unit),
            p.covariant.clone(),
            |v| v.as_pair().expect("pair").0.clone(),
        )
        .expect("unit_right forward");
        let back = Kernel::deterministic(
            p.contravariant.clone(),
            FiniteSet::product(&p.contravariant, &unit),
            |v| Value::pair(v.clone(), Value::unit()),
        )
        .expect("unit_right backward");
        Lens::pair(&fwd, &back)
    }

    /// `p → p ⊗ I`.
    pub fn unit_right_inv(p: &LensInterface) -> Lens {
        let unit = FiniteSet::unit();
        let fwd = Kernel::deterministic(
            p.covariant.clone(),
            FiniteSet::product(&p.covariant, &unit),
            |v| Value::pair(v.clone(), Value::unit()),
        )
        .expect("unit_right_inv forward");
        let back = Kernel::deterministic(
            FiniteSet::product(&p.contravariant, &unit),
            p.contravariant.clone(),
            |v| v.as_pair().expect("pair").0.clone(),
        )
        .expect("unit_right_inv backward");
        Lens::pair(&fwd, &back)
    }
}

/// The behavioral canonical form of a lens: the forward marginal and, on its
/// support, the residual-conditioned backward behavior.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalLens {
    /// `X → Y`, the forward kernel with the residual integrated out.
    pub fwd: Kernel,
    /// `(x, y, r) ↦ distribution over S`, defined exactly when `fwd(x)(y) > 0`.
    pub back: BTreeMap<(Value, Value, Value), Dist>,
}
