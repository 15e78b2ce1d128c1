//! Seeded randomized law suite. Each law checks one algebraic identity on
//! freshly generated instances; the CLI groups them into families and the
//! acceptance tests pin case counts and zero-failure expectations.
//!
//! Everything here is deterministic under a fixed seed: generators draw from
//! a counter-based RNG seeded per law, so identical invocations produce
//! byte-identical reports.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::context::Context;
use crate::error::Result;
use crate::lens::{structural, Lens, LensInterface};
use crate::prob::{Dist, Kernel, Side};
use crate::rational;
use crate::value::{FiniteSet, Value};

/// Outcome of running one law for a number of cases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub law: String,
    pub cases: u32,
    pub failures: u32,
}

/// Random instance generator with bounded space sizes.
pub struct Gen {
    rng: ChaCha8Rng,
    pub max_space: usize,
}

impl Gen {
    pub fn new(seed: u64, max_space: usize) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_space,
        }
    }

    pub fn space(&mut self, tag: &str) -> FiniteSet {
        let size = self.rng.gen_range(1..=self.max_space);
        FiniteSet::atoms((0..size).map(|i| format!("{tag}{i}")))
    }

    pub fn space_sized(&mut self, tag: &str, min: usize, max: usize) -> FiniteSet {
        let size = self.rng.gen_range(min..=max);
        FiniteSet::atoms((0..size).map(|i| format!("{tag}{i}")))
    }

    pub fn element(&mut self, space: &FiniteSet) -> Value {
        let elems = space.elements();
        elems[self.rng.gen_range(0..elems.len())].clone()
    }

    /// Random distribution: nonempty support, weights 1..=4 before
    /// normalization.
    pub fn dist(&mut self, space: &FiniteSet) -> Dist {
        let elems = space.elements();
        let support = self.rng.gen_range(1..=elems.len());
        let mut picked: Vec<usize> = (0..elems.len()).collect();
        picked.shuffle(&mut self.rng);
        let raw = picked
            .into_iter()
            .take(support)
            .map(|i| (elems[i].clone(), rational::int(self.rng.gen_range(1..=4))))
            .collect();
        Dist::from_weights(space.clone(), raw).expect("generated weights are valid")
    }

    pub fn kernel(&mut self, domain: &FiniteSet, codomain: &FiniteSet) -> Kernel {
        let table = domain
            .elements()
            .into_iter()
            .map(|x| (x, self.dist(codomain)))
            .collect();
        Kernel::new(domain.clone(), codomain.clone(), table).expect("generated kernel is total")
    }

    pub fn dirac_kernel(&mut self, domain: &FiniteSet, codomain: &FiniteSet) -> Kernel {
        let elems = codomain.elements();
        let table = domain
            .elements()
            .into_iter()
            .map(|x| {
                let y = elems[self.rng.gen_range(0..elems.len())].clone();
                (x, Dist::dirac(y, codomain.clone()).expect("member"))
            })
            .collect();
        Kernel::new(domain.clone(), codomain.clone(), table).expect("generated kernel is total")
    }

    pub fn interface(&mut self, tag: &str) -> LensInterface {
        LensInterface::new(
            self.space(&format!("{tag}x")),
            self.space(&format!("{tag}s")),
        )
    }

    /// Random lens representative with a random residual.
    pub fn lens(&mut self, source: &LensInterface, target: &LensInterface) -> Lens {
        let residual = self.space("a");
        let forward = self.kernel(
            &source.covariant,
            &FiniteSet::product(&residual, &target.covariant),
        );
        let backward = self.kernel(
            &FiniteSet::product(&residual, &target.contravariant),
            &source.contravariant,
        );
        Lens::new(source.clone(), target.clone(), residual, forward, backward)
            .expect("generated lens is well-typed")
    }

    /// Dirac lens: deterministic kernels throughout, residual carrying the
    /// input as in a concrete view/update pair.
    pub fn dirac_lens(&mut self, source: &LensInterface, target: &LensInterface) -> Lens {
        let view = self.dirac_kernel(&source.covariant, &target.covariant);
        let update = self.dirac_kernel(
            &FiniteSet::product(&source.covariant, &target.contravariant),
            &source.contravariant,
        );
        lift_concrete(source, target, &view, &update)
    }

    /// Random context for the observable wires `(x, y, r)`.
    pub fn context(&mut self, x: &FiniteSet, y: &FiniteSet, r: &FiniteSet) -> Context {
        let theta = self.space("th");
        let history = self.dist(&FiniteSet::product(&theta, x));
        let continuation = self.kernel(&FiniteSet::product(&theta, y), r);
        Context::new(theta, history, continuation).expect("generated context is well-typed")
    }

    /// Dirac context: point history and deterministic continuation.
    pub fn dirac_context(&mut self, x: &FiniteSet, y: &FiniteSet, r: &FiniteSet) -> Context {
        let theta = self.space("th");
        let space = FiniteSet::product(&theta, x);
        let history = Dist::dirac(
            Value::pair(self.element(&theta), self.element(x)),
            space,
        )
        .expect("member");
        let continuation = self.dirac_kernel(&FiniteSet::product(&theta, y), r);
        Context::new(theta, history, continuation).expect("generated context is well-typed")
    }
}

/// Lift a concrete view/update pair into a representative with the input
/// copied onto the residual, as the deterministic sublanguage does.
pub fn lift_concrete(
    source: &LensInterface,
    target: &LensInterface,
    view: &Kernel,
    update: &Kernel,
) -> Lens {
    let residual = source.covariant.clone();
    let fwd_codomain = FiniteSet::product(&residual, &target.covariant);
    let forward = Kernel::from_fn(source.covariant.clone(), fwd_codomain.clone(), |x| {
        view.apply(x)?.pushforward(fwd_codomain.clone(), |y| {
            Value::pair(x.clone(), y.clone())
        })
    })
    .expect("lift forward");
    let backward = Kernel::from_fn(
        FiniteSet::product(&residual, &target.contravariant),
        source.contravariant.clone(),
        |v| Ok(update.apply(v)?.clone()),
    )
    .expect("lift backward");
    Lens::new(
        source.clone(),
        target.clone(),
        residual,
        forward,
        backward,
    )
    .expect("lifted lens is well-typed")
}

/// Concrete sequential composite of view/update pairs:
/// view `t_v ∘ l_v`, update `(x,q) ↦ l_u(x, t_u(l_v(x), q))`.
fn concrete_compose(
    l_view: &Kernel,
    l_update: &Kernel,
    t_view: &Kernel,
    t_update: &Kernel,
) -> (Kernel, Kernel) {
    let view = t_view.compose(l_view).expect("composable views");
    let domain = FiniteSet::product(l_view.domain(), t_update.domain().factors().expect("pair").1);
    let update = Kernel::from_fn(domain, l_update.codomain().clone(), |v| {
        let (x, q) = v.as_pair()?;
        let y = l_view.apply(x)?.support().next().expect("dirac").clone();
        let r = t_update
            .apply(&Value::pair(y, q.clone()))?
            .support()
            .next()
            .expect("dirac")
            .clone();
        Ok(l_update.apply(&Value::pair(x.clone(), r))?.clone())
    })
    .expect("concrete composite update");
    (view, update)
}

type LawFn = fn(&mut Gen) -> Result<bool>;

fn monad_left_unit(g: &mut Gen) -> Result<bool> {
    let a = g.space("a");
    let b = g.space("b");
    let k = g.kernel(&a, &b);
    let x = g.element(&a);
    let lhs = Dist::dirac(x.clone(), a)?.bind(&k)?;
    Ok(&lhs == k.apply(&x)?)
}

fn monad_right_unit(g: &mut Gen) -> Result<bool> {
    let a = g.space("a");
    let d = g.dist(&a);
    Ok(d.bind(&Kernel::identity(a))? == d)
}

fn monad_associativity(g: &mut Gen) -> Result<bool> {
    let a = g.space("a");
    let b = g.space("b");
    let c = g.space("c");
    let d = g.dist(&a);
    let k1 = g.kernel(&a, &b);
    let k2 = g.kernel(&b, &c);
    let lhs = d.bind(&k1)?.bind(&k2)?;
    let rhs = d.bind_with(c, |x| k1.apply(x)?.bind(&k2))?;
    Ok(lhs == rhs)
}

fn commutativity(g: &mut Gen) -> Result<bool> {
    let a = g.space("a");
    let b = g.space("b");
    let d1 = g.dist(&a);
    let d2 = g.dist(&b);
    let joint = FiniteSet::product(&a, &b);
    let left_first = d1.bind_with(joint.clone(), |x| {
        d2.pushforward(joint.clone(), |y| Value::pair(x.clone(), y.clone()))
    })?;
    let right_first = d2.bind_with(joint.clone(), |y| {
        d1.pushforward(joint.clone(), |x| Value::pair(x.clone(), y.clone()))
    })?;
    Ok(left_first == right_first)
}

fn update_naturality(g: &mut Gen) -> Result<bool> {
    let theta1 = g.space("t1");
    let theta2 = g.space("t2");
    let x_space = g.space("x");
    let p = g.dist(&FiniteSet::product(&theta1, &x_space));
    let f = g.dirac_kernel(&theta1, &theta2);
    // Pick an observation in the support of the X-marginal.
    let x = {
        let marginal = p.marginal(Side::Right)?;
        let support: Vec<Value> = marginal.support().cloned().collect();
        support[g.rng.gen_range(0..support.len())].clone()
    };
    let lhs = p.bayes_update(&x)?.bind(&f)?;
    let mapped_space = FiniteSet::product(&theta2, &x_space);
    let mapped = p.bind_with(mapped_space, |v| {
        let (theta, obs) = v.as_pair()?;
        let obs = obs.clone();
        f.apply(theta)?.pushforward(
            FiniteSet::product(&theta2, &x_space),
            |t2| Value::pair(t2.clone(), obs.clone()),
        )
    })?;
    let rhs = mapped.bayes_update(&x)?;
    Ok(lhs == rhs)
}

fn expectation_linearity(g: &mut Gen) -> Result<bool> {
    let a = g.space("a");
    let values =
        FiniteSet::numbers((-3..=3).map(rational::int)).expect("numeric space");
    let d = g.dist(&a);
    let k = g.kernel(&a, &values);
    let lhs = d.bind(&k)?.expectation()?;
    let mut rhs = rational::zero();
    for (x, w) in d.iter() {
        rhs += w * k.apply(x)?.expectation()?;
    }
    Ok(lhs == rhs)
}

fn marginal_product(g: &mut Gen) -> Result<bool> {
    let a = g.space("a");
    let b = g.space("b");
    let d1 = g.dist(&a);
    let d2 = g.dist(&b);
    let joint = d1.product(&d2);
    Ok(joint.marginal(Side::Left)? == d1 && joint.marginal(Side::Right)? == d2)
}

fn lens_associativity(g: &mut Gen) -> Result<bool> {
    let p = g.interface("p");
    let q = g.interface("q");
    let r = g.interface("r");
    let s = g.interface("s");
    let l = g.lens(&p, &q);
    let m = g.lens(&q, &r);
    let n = g.lens(&r, &s);
    let lhs = n.compose(&m.compose(&l)?)?;
    let rhs = n.compose(&m)?.compose(&l)?;
    lhs.behavioral_eq(&rhs)
}

fn lens_unit_laws(g: &mut Gen) -> Result<bool> {
    let p = g.interface("p");
    let q = g.interface("q");
    let l = g.lens(&p, &q);
    let left = Lens::identity(&q).compose(&l)?;
    let right = l.compose(&Lens::identity(&p))?;
    Ok(left.behavioral_eq(&l)? && right.behavioral_eq(&l)?)
}

fn slide_canonicalization(g: &mut Gen) -> Result<bool> {
    let source = g.interface("p");
    let target = g.interface("q");
    let fine = g.space("af");
    let coarse = g.space("ac");
    let forward_fine = g.kernel(
        &source.covariant,
        &FiniteSet::product(&fine, &target.covariant),
    );
    // Mix of stochastic and deterministic slide maps.
    let f = if g.rng.gen_bool(0.5) {
        g.kernel(&fine, &coarse)
    } else {
        g.dirac_kernel(&fine, &coarse)
    };
    let backward_coarse = g.kernel(
        &FiniteSet::product(&coarse, &target.contravariant),
        &source.contravariant,
    );
    let (fine_lens, coarse_lens) =
        Lens::sliding_pair(source, target, &forward_fine, &f, &backward_coarse)?;
    Ok(fine_lens.canonicalize() == coarse_lens.canonicalize())
}

fn canonical_reconstitution(g: &mut Gen) -> Result<bool> {
    let p = g.interface("p");
    let q = g.interface("q");
    let l = g.lens(&p, &q);
    let rebuilt = Lens::reconstitute(&l.canonicalize(), l.source(), l.target())?;
    rebuilt.behavioral_eq(&l)
}

fn tensor_functoriality(g: &mut Gen) -> Result<bool> {
    let p1 = g.interface("p1");
    let q1 = g.interface("q1");
    let r1 = g.interface("r1");
    let p2 = g.interface("p2");
    let q2 = g.interface("q2");
    let r2 = g.interface("r2");
    let l1 = g.lens(&p1, &q1);
    let t1 = g.lens(&q1, &r1);
    let l2 = g.lens(&p2, &q2);
    let t2 = g.lens(&q2, &r2);
    let lhs = t1.tensor(&t2).compose(&l1.tensor(&l2))?;
    let rhs = t1.compose(&l1)?.tensor(&t2.compose(&l2)?);
    lhs.behavioral_eq(&rhs)
}

fn symmetry_naturality(g: &mut Gen) -> Result<bool> {
    let p1 = g.interface("p1");
    let q1 = g.interface("q1");
    let p2 = g.interface("p2");
    let q2 = g.interface("q2");
    let l1 = g.lens(&p1, &q1);
    let l2 = g.lens(&p2, &q2);
    let lhs = structural::swap(&q1, &q2).compose(&l1.tensor(&l2))?;
    let rhs = l2.tensor(&l1).compose(&structural::swap(&p1, &p2))?;
    lhs.behavioral_eq(&rhs)
}

fn associator_naturality(g: &mut Gen) -> Result<bool> {
    let ifaces: Vec<(LensInterface, LensInterface)> = (0..3)
        .map(|i| {
            (
                g.interface(&format!("p{i}")),
                g.interface(&format!("q{i}")),
            )
        })
        .collect();
    let lenses: Vec<Lens> = ifaces.iter().map(|(p, q)| g.lens(p, q)).collect();
    let (p1, q1) = &ifaces[0];
    let (p2, q2) = &ifaces[1];
    let (p3, q3) = &ifaces[2];
    let lhs = structural::assoc(q1, q2, q3)
        .compose(&lenses[0].tensor(&lenses[1]).tensor(&lenses[2]))?;
    let rhs = lenses[0]
        .tensor(&lenses[1].tensor(&lenses[2]))
        .compose(&structural::assoc(p1, p2, p3))?;
    lhs.behavioral_eq(&rhs)
}

fn unitor_naturality(g: &mut Gen) -> Result<bool> {
    let p = g.interface("p");
    let q = g.interface("q");
    let l = g.lens(&p, &q);
    let id_unit = Lens::identity(&LensInterface::unit());

    let left_lhs = structural::unit_left(&q).compose(&id_unit.tensor(&l))?;
    let left_rhs = l.compose(&structural::unit_left(&p))?;

    let right_lhs = structural::unit_right(&q).compose(&l.tensor(&id_unit))?;
    let right_rhs = l.compose(&structural::unit_right(&p))?;

    Ok(left_lhs.behavioral_eq(&left_rhs)? && right_lhs.behavioral_eq(&right_rhs)?)
}

fn pentagon(g: &mut Gen) -> Result<bool> {
    let p = g.interface("p");
    let q = g.interface("q");
    let r = g.interface("r");
    let s = g.interface("s");
    let pq = p.tensor(&q);
    let rs = r.tensor(&s);
    let qr = q.tensor(&r);

    // ((p⊗q)⊗r)⊗s → p⊗(q⊗(r⊗s)), two routes.
    let direct = structural::assoc(&p, &q, &rs).compose(&structural::assoc(&pq, &r, &s))?;
    let id_p = Lens::identity(&p);
    let id_s = Lens::identity(&s);
    let stepwise = id_p
        .tensor(&structural::assoc(&q, &r, &s))
        .compose(&structural::assoc(&p, &qr, &s).compose(&structural::assoc(&p, &q, &r).tensor(&id_s))?)?;
    direct.behavioral_eq(&stepwise)
}

fn swap_involution(g: &mut Gen) -> Result<bool> {
    let p = g.interface("p");
    let q = g.interface("q");
    let round = structural::swap(&q, &p).compose(&structural::swap(&p, &q))?;
    round.behavioral_eq(&Lens::identity(&p.tensor(&q)))
}

/// Shared setup for the four localization squares: two composable lens rows
/// and a context for the tensor of their outer interfaces.
struct SquareData {
    l: Lens,
    m: Lens,
    l_prime: Lens,
    m_prime: Lens,
    context: Context,
}

fn square_data(g: &mut Gen) -> SquareData {
    let phi = g.interface("f");
    let psi = g.interface("g");
    let xi = g.interface("h");
    let phi_p = g.interface("fp");
    let psi_p = g.interface("gp");
    let xi_p = g.interface("hp");
    let l = g.lens(&phi, &psi);
    let m = g.lens(&psi, &xi);
    let l_prime = g.lens(&phi_p, &psi_p);
    let m_prime = g.lens(&psi_p, &xi_p);
    let context = g.context(
        &FiniteSet::product(&phi.covariant, &phi_p.covariant),
        &FiniteSet::product(&xi.covariant, &xi_p.covariant),
        &FiniteSet::product(&xi.contravariant, &xi_p.contravariant),
    );
    SquareData {
        l,
        m,
        l_prime,
        m_prime,
        context,
    }
}

fn funct_square_1(g: &mut Gen) -> Result<bool> {
    let d = square_data(g);
    let composite_right = d.m_prime.compose(&d.l_prime)?;
    let path_a = d
        .context
        .tensor_local_left(&composite_right)?
        .seq_local_first(&d.m)?;
    let path_b = d
        .context
        .seq_local_first(&d.m.tensor(&d.m_prime))?
        .tensor_local_left(&d.l_prime)?;
    path_a.context_eq(&path_b)
}

fn funct_square_2(g: &mut Gen) -> Result<bool> {
    let d = square_data(g);
    let composite_right = d.m_prime.compose(&d.l_prime)?;
    let path_a = d
        .context
        .tensor_local_left(&composite_right)?
        .seq_local_second(&d.l)?;
    let path_b = d
        .context
        .seq_local_second(&d.l.tensor(&d.l_prime))?
        .tensor_local_left(&d.m_prime)?;
    path_a.context_eq(&path_b)
}

fn funct_square_3(g: &mut Gen) -> Result<bool> {
    let d = square_data(g);
    let composite_left = d.m.compose(&d.l)?;
    let path_a = d
        .context
        .tensor_local_right(&composite_left)?
        .seq_local_first(&d.m_prime)?;
    let path_b = d
        .context
        .seq_local_first(&d.m.tensor(&d.m_prime))?
        .tensor_local_right(&d.l)?;
    path_a.context_eq(&path_b)
}

fn funct_square_4(g: &mut Gen) -> Result<bool> {
    let d = square_data(g);
    let composite_left = d.m.compose(&d.l)?;
    let path_a = d
        .context
        .tensor_local_right(&composite_left)?
        .seq_local_second(&d.l_prime)?;
    let path_b = d
        .context
        .seq_local_second(&d.l.tensor(&d.l_prime))?
        .tensor_local_right(&d.m)?;
    path_a.context_eq(&path_b)
}

/// Localizing the first component out of a right-nested triple tensor agrees
/// with localizing stepwise out of the left-nested bracketing of the same
/// ambient context.
fn nested_tensor_coherence(g: &mut Gen) -> Result<bool> {
    let p1 = g.interface("p1");
    let q1 = g.interface("q1");
    let p2 = g.interface("p2");
    let q2 = g.interface("q2");
    let p3 = g.interface("p3");
    let q3 = g.interface("q3");
    let l2 = g.lens(&p2, &q2);
    let l3 = g.lens(&p3, &q3);

    let x_right = FiniteSet::product(
        &p1.covariant,
        &FiniteSet::product(&p2.covariant, &p3.covariant),
    );
    let y_right = FiniteSet::product(
        &q1.covariant,
        &FiniteSet::product(&q2.covariant, &q3.covariant),
    );
    let r_right = FiniteSet::product(
        &q1.contravariant,
        &FiniteSet::product(&q2.contravariant, &q3.contravariant),
    );
    let c = g.context(&x_right, &y_right, &r_right);

    // Direct: one tensor localization against l2 ⊗ l3.
    let direct = c.tensor_local_left(&l2.tensor(&l3))?;

    // Rebracketed: transport the context along the associator, then peel the
    // third and second components off one at a time.
    let x_left = FiniteSet::product(
        &FiniteSet::product(&p1.covariant, &p2.covariant),
        &p3.covariant,
    );
    let y_left = FiniteSet::product(
        &FiniteSet::product(&q1.covariant, &q2.covariant),
        &q3.covariant,
    );
    let r_left = FiniteSet::product(
        &FiniteSet::product(&q1.contravariant, &q2.contravariant),
        &q3.contravariant,
    );
    let hist_space = FiniteSet::product(c.theta(), &x_left);
    let history = c.history().pushforward(hist_space, |v| {
        let (theta, xs) = v.as_pair().expect("pair");
        let (x1, rest) = xs.as_pair().expect("pair");
        let (x2, x3) = rest.as_pair().expect("pair");
        Value::pair(
            theta.clone(),
            Value::pair(Value::pair(x1.clone(), x2.clone()), x3.clone()),
        )
    })?;
    let continuation = Kernel::from_fn(
        FiniteSet::product(c.theta(), &y_left),
        r_left.clone(),
        |v| {
            let (theta, ys) = v.as_pair()?;
            let (y12, y3) = ys.as_pair()?;
            let (y1, y2) = y12.as_pair()?;
            let nested = Value::pair(
                y1.clone(),
                Value::pair(y2.clone(), y3.clone()),
            );
            c.continuation()
                .apply(&Value::pair(theta.clone(), nested))?
                .pushforward(r_left.clone(), |r| {
                    let (r1, rest) = r.as_pair().expect("pair");
                    let (r2, r3) = rest.as_pair().expect("pair");
                    Value::pair(Value::pair(r1.clone(), r2.clone()), r3.clone())
                })
        },
    )?;
    let c_left = Context::new(c.theta().clone(), history, continuation)?;
    let stepwise = c_left
        .tensor_local_left(&l3)?
        .tensor_local_left(&l2)?;

    direct.context_eq(&stepwise)
}

/// With deterministic kernels, lens composition agrees with the concrete
/// view/update composite.
fn dirac_compose_regression(g: &mut Gen) -> Result<bool> {
    let p = g.interface("p");
    let q = g.interface("q");
    let r = g.interface("r");
    let l_view = g.dirac_kernel(&p.covariant, &q.covariant);
    let l_update = g.dirac_kernel(
        &FiniteSet::product(&p.covariant, &q.contravariant),
        &p.contravariant,
    );
    let t_view = g.dirac_kernel(&q.covariant, &r.covariant);
    let t_update = g.dirac_kernel(
        &FiniteSet::product(&q.covariant, &r.contravariant),
        &q.contravariant,
    );
    let l = lift_concrete(&p, &q, &l_view, &l_update);
    let t = lift_concrete(&q, &r, &t_view, &t_update);
    let composite = t.compose(&l)?;
    let (cv, cu) = concrete_compose(&l_view, &l_update, &t_view, &t_update);
    let expected = lift_concrete(&p, &r, &cv, &cu);
    composite.behavioral_eq(&expected)
}

/// With all-Dirac data, the sequential local contexts reproduce the concrete
/// formulas: the first stage sees `y ↦ τ_u(y, k(τ_v(y)))`, the second sees
/// the history pushed through `σ_v`.
fn dirac_seq_regression(g: &mut Gen) -> Result<bool> {
    let p = g.interface("p");
    let q = g.interface("q");
    let c = g.dirac_context(&p.covariant, &q.covariant, &q.contravariant);

    // First-stage check against the concrete formula.
    let tau_view = g.dirac_kernel(&p.covariant, &q.covariant);
    let tau_update = g.dirac_kernel(
        &FiniteSet::product(&p.covariant, &q.contravariant),
        &p.contravariant,
    );
    let tau = lift_concrete(&p, &q, &tau_view, &tau_update);
    let localized = c.seq_local_first(&tau)?;
    let localized_canon = localized.canonicalize()?;

    let (theta0, x0) = {
        let v = c.history().support().next().expect("dirac history");
        let (t, x) = v.as_pair()?;
        (t.clone(), x.clone())
    };
    for y in p.covariant.elements() {
        let y_img = tau_view.apply(&y)?.support().next().expect("dirac").clone();
        let q_out = c
            .continuation()
            .apply(&Value::pair(theta0.clone(), y_img.clone()))?
            .support()
            .next()
            .expect("dirac")
            .clone();
        let r_out = tau_update
            .apply(&Value::pair(y.clone(), q_out))?
            .support()
            .next()
            .expect("dirac")
            .clone();
        let got = localized_canon.payoff(&x0, &y)?;
        if got != &Dist::dirac(r_out, p.contravariant.clone())? {
            return Ok(false);
        }
    }

    // Second-stage check: history is the pushforward along the view.
    let sigma_view = g.dirac_kernel(&p.covariant, &q.covariant);
    let delete_update = Kernel::deterministic(
        FiniteSet::product(&p.covariant, &FiniteSet::unit()),
        FiniteSet::unit(),
        |_| Value::unit(),
    )
    .expect("delete update");
    let sigma = lift_concrete(
        &LensInterface::new(p.covariant.clone(), FiniteSet::unit()),
        &LensInterface::new(q.covariant.clone(), FiniteSet::unit()),
        &sigma_view,
        &delete_update,
    );
    let c2 = g.dirac_context(&p.covariant, &q.covariant, &q.contravariant);
    let localized2 = c2.seq_local_second(&sigma)?;
    let (theta2, x2) = {
        let v = c2.history().support().next().expect("dirac history");
        let (t, x) = v.as_pair()?;
        (t.clone(), x.clone())
    };
    let pushed = sigma_view.apply(&x2)?.support().next().expect("dirac").clone();
    let expected_history = Dist::dirac(
        Value::pair(theta2, pushed),
        FiniteSet::product(c2.theta(), &q.covariant),
    )?;
    Ok(localized2.history() == &expected_history)
}

/// With all-Dirac data, tensor localization reproduces
/// `leftc(x',p',k)(y) = π₁ k(y, p'(x'))` and its mirror.
fn dirac_tensor_regression(g: &mut Gen) -> Result<bool> {
    let x1 = g.space("x1");
    let x2 = g.space("x2");
    let y1 = g.space("y1");
    let y2 = g.space("y2");
    let r1 = g.space("r1");
    let r2 = g.space("r2");

    let c = g.dirac_context(
        &FiniteSet::product(&x1, &x2),
        &FiniteSet::product(&y1, &y2),
        &FiniteSet::product(&r1, &r2),
    );
    let (theta0, xs) = {
        let v = c.history().support().next().expect("dirac history");
        let (t, x) = v.as_pair()?;
        (t.clone(), x.clone())
    };
    let (x0, x0_prime) = {
        let (a, b) = xs.as_pair()?;
        (a.clone(), b.clone())
    };

    // Right player's Dirac lens.
    let mu_view = g.dirac_kernel(&x2, &y2);
    let mu_update = g.dirac_kernel(&FiniteSet::product(&x2, &r2), &FiniteSet::unit());
    let mu = lift_concrete(
        &LensInterface::new(x2.clone(), FiniteSet::unit()),
        &LensInterface::new(y2.clone(), r2.clone()),
        &mu_view,
        &mu_update,
    );

    let localized = c.tensor_local_left(&mu)?.canonicalize()?;
    let y_prime = mu_view
        .apply(&x0_prime)?
        .support()
        .next()
        .expect("dirac")
        .clone();
    for y in y1.elements() {
        let joint = c
            .continuation()
            .apply(&Value::pair(
                theta0.clone(),
                Value::pair(y.clone(), y_prime.clone()),
            ))?
            .support()
            .next()
            .expect("dirac")
            .clone();
        let (pay1, _) = joint.as_pair()?;
        let got = localized.payoff(&x0, &y)?;
        if got != &Dist::dirac(pay1.clone(), r1.clone())? {
            return Ok(false);
        }
    }

    // Mirror: left player's Dirac lens, right player's local context.
    let sigma_view = g.dirac_kernel(&x1, &y1);
    let sigma_update = g.dirac_kernel(&FiniteSet::product(&x1, &r1), &FiniteSet::unit());
    let sigma = lift_concrete(
        &LensInterface::new(x1.clone(), FiniteSet::unit()),
        &LensInterface::new(y1.clone(), r1.clone()),
        &sigma_view,
        &sigma_update,
    );
    let localized_r = c.tensor_local_right(&sigma)?.canonicalize()?;
    let y_left = sigma_view
        .apply(&x0)?
        .support()
        .next()
        .expect("dirac")
        .clone();
    for y in y2.elements() {
        let joint = c
            .continuation()
            .apply(&Value::pair(
                theta0.clone(),
                Value::pair(y_left.clone(), y.clone()),
            ))?
            .support()
            .next()
            .expect("dirac")
            .clone();
        let (_, pay2) = joint.as_pair()?;
        let got = localized_r.payoff(&x0_prime, &y)?;
        if got != &Dist::dirac(pay2.clone(), r2.clone())? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Localizing the right component equals swapping the context's wires and
/// localizing the left one.
fn tensor_swap_symmetry(g: &mut Gen) -> Result<bool> {
    let x1 = g.space("x1");
    let x2 = g.space("x2");
    let y1 = g.space("y1");
    let y2 = g.space("y2");
    let r1 = g.space("r1");
    let r2 = g.space("r2");
    let c = g.context(
        &FiniteSet::product(&x1, &x2),
        &FiniteSet::product(&y1, &y2),
        &FiniteSet::product(&r1, &r2),
    );
    let s1 = g.space("s1");
    let sigma = g.lens(
        &LensInterface::new(x1.clone(), s1),
        &LensInterface::new(y1.clone(), r1.clone()),
    );

    let direct = c.tensor_local_right(&sigma)?;

    // Transport the context along the swap on all three wires.
    let hist_space = FiniteSet::product(c.theta(), &FiniteSet::product(&x2, &x1));
    let history = c.history().pushforward(hist_space, |v| {
        let (theta, xs) = v.as_pair().expect("pair");
        let (a, b) = xs.as_pair().expect("pair");
        Value::pair(theta.clone(), Value::pair(b.clone(), a.clone()))
    })?;
    let swapped_payoffs = FiniteSet::product(&r2, &r1);
    let continuation = Kernel::from_fn(
        FiniteSet::product(c.theta(), &FiniteSet::product(&y2, &y1)),
        swapped_payoffs.clone(),
        |v| {
            let (theta, ys) = v.as_pair()?;
            let (b, a) = ys.as_pair()?;
            c.continuation()
                .apply(&Value::pair(theta.clone(), Value::pair(a.clone(), b.clone())))?
                .pushforward(swapped_payoffs.clone(), |r| {
                    let (p, q) = r.as_pair().expect("pair");
                    Value::pair(q.clone(), p.clone())
                })
        },
    )?;
    let swapped = Context::new(c.theta().clone(), history, continuation)?;
    let via_swap = swapped.tensor_local_left(&sigma)?;

    direct.context_eq(&via_swap)
}

/// Correlation preservation: with a history correlating the hidden state and
/// the other player's observation, the localized posterior payoff matches a
/// brute-force computation over the joint.
fn tensor_correlation(g: &mut Gen) -> Result<bool> {
    let x1 = g.space("x1");
    let x2 = g.space("x2");
    let y1 = g.space("y1");
    let y2 = g.space("y2");
    let values = FiniteSet::numbers((-2..=2).map(rational::int)).expect("numeric space");
    let payoffs = FiniteSet::product(&values, &values);

    let theta = g.space("th");
    let history = g.dist(&FiniteSet::product(
        &theta,
        &FiniteSet::product(&x1, &x2),
    ));
    let continuation = g.kernel(
        &FiniteSet::product(&theta, &FiniteSet::product(&y1, &y2)),
        &payoffs,
    );
    let c = Context::new(theta.clone(), history.clone(), continuation.clone())?;
    let mu = g.lens(
        &LensInterface::new(x2.clone(), FiniteSet::unit()),
        &LensInterface::new(y2.clone(), values.clone()),
    );

    let localized = c.tensor_local_left(&mu)?;
    let canon = localized.canonicalize()?;

    // Brute force: P(x) and E[π₁ k(θ, (y, Y')) | x] with Y' drawn by μ from
    // the correlated x'.
    for x in canon.x_marginal.support() {
        let mut px = rational::zero();
        for (v, w) in history.iter() {
            let (_, xs) = v.as_pair()?;
            if xs.as_pair()?.0 == x {
                px += w;
            }
        }
        if canon.x_marginal.weight(x) != px {
            return Ok(false);
        }
        for y in y1.elements() {
            let mut expected = rational::zero();
            for (v, w) in history.iter() {
                let (th, xs) = v.as_pair()?;
                let (xi, xp) = xs.as_pair()?;
                if xi != x {
                    continue;
                }
                let weight = w / &px;
                for (ay, wy) in mu.forward().apply(xp)?.iter() {
                    let (_, y_prime) = ay.as_pair()?;
                    let joint = continuation.apply(&Value::pair(
                        th.clone(),
                        Value::pair(y.clone(), y_prime.clone()),
                    ))?;
                    for (pair, wp) in joint.iter() {
                        let (p1, _) = pair.as_pair()?;
                        expected += &weight * wy * wp * p1.as_num()?;
                    }
                }
            }
            let got = canon.payoff(x, &y)?.expectation()?;
            if got != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The registry: family name, law name, generator size bound, and the check.
pub fn law_registry() -> Vec<(&'static str, &'static str, usize, LawFn)> {
    vec![
        ("monad", "monad-left-unit", 5, monad_left_unit),
        ("monad", "monad-right-unit", 5, monad_right_unit),
        ("monad", "monad-associativity", 5, monad_associativity),
        ("monad", "commutativity", 5, commutativity),
        ("monad", "update-naturality", 5, update_naturality),
        ("monad", "expectation-linearity", 5, expectation_linearity),
        ("monad", "marginal-product", 5, marginal_product),
        ("lens-category", "lens-associativity", 3, lens_associativity),
        ("lens-category", "lens-unit-laws", 3, lens_unit_laws),
        ("lens-category", "slide-canonicalization", 3, slide_canonicalization),
        ("lens-category", "canonical-reconstitution", 4, canonical_reconstitution),
        ("monoidal", "tensor-functoriality", 2, tensor_functoriality),
        ("monoidal", "symmetry-naturality", 3, symmetry_naturality),
        ("monoidal", "associator-naturality", 2, associator_naturality),
        ("monoidal", "unitor-naturality", 3, unitor_naturality),
        ("monoidal", "pentagon", 2, pentagon),
        ("monoidal", "swap-involution", 4, swap_involution),
        ("localization", "funct-square-1", 2, funct_square_1),
        ("localization", "funct-square-2", 2, funct_square_2),
        ("localization", "funct-square-3", 2, funct_square_3),
        ("localization", "funct-square-4", 2, funct_square_4),
        ("localization", "nested-tensor-coherence", 2, nested_tensor_coherence),
        ("localization", "tensor-swap-symmetry", 2, tensor_swap_symmetry),
        ("localization", "dirac-compose-regression", 3, dirac_compose_regression),
        ("localization", "dirac-seq-regression", 3, dirac_seq_regression),
        ("localization", "dirac-tensor-regression", 2, dirac_tensor_regression),
        ("localization", "tensor-correlation", 2, tensor_correlation),
    ]
}

fn law_seed(base: u64, law: &str) -> u64 {
    // FNV-1a over the law name, mixed with the base seed.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in law.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^ base
}

/// Run one named law.
pub fn run_law(law: &str, cases: u32, seed: u64) -> Result<LawReport> {
    let registry = law_registry();
    let (_, name, max_space, f) = registry
        .into_iter()
        .find(|(_, name, _, _)| *name == law)
        .ok_or_else(|| crate::error::Error::validation("law", format!("unknown law {law:?}")))?;
    let mut gen = Gen::new(law_seed(seed, name), max_space);
    let mut failures = 0;
    for _ in 0..cases {
        if !f(&mut gen)? {
            failures += 1;
        }
    }
    Ok(LawReport {
        law: name.to_string(),
        cases,
        failures,
    })
}

/// Run every law, grouped by family.
pub fn run_all(cases: u32, seed: u64) -> Result<Vec<(String, Vec<LawReport>)>> {
    let mut families: Vec<(String, Vec<LawReport>)> = Vec::new();
    for (family, law, _, _) in law_registry() {
        let report = run_law(law, cases, seed)?;
        match families.iter_mut().find(|(name, _)| name == family) {
            Some((_, reports)) => reports.push(report),
            None => families.push((family.to_string(), vec![report])),
        }
    }
    Ok(families)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_law_holds_on_a_smoke_run() {
        for (_, law, _, _) in law_registry() {
            let report = run_law(law, 8, 99).unwrap();
            assert_eq!(report.failures, 0, "law {law} failed");
        }
    }

    #[test]
    fn law_runs_are_deterministic() {
        let a = run_law("lens-associativity", 5, 7).unwrap();
        let b = run_law("lens-associativity", 5, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_law_is_an_error() {
        assert!(run_law("nonsense", 1, 0).is_err());
    }
}
