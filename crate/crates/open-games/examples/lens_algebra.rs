//! A tour of the lens layer: building representatives, composing them
//! sequentially and in parallel, sliding maps across the residual, and
//! deciding equality through the behavioral canonical form.
//!
//! Run with `cargo run --example lens_algebra`.

use open_games::lens::{structural, Lens, LensInterface};
use open_games::prob::{Dist, Kernel};
use open_games::value::{FiniteSet, Value};

fn main() {
    let coin = FiniteSet::atoms(["H", "T"]);
    let bit = FiniteSet::atoms(["0", "1"]);
    let iface = |x: &FiniteSet, s: &FiniteSet| LensInterface::new(x.clone(), s.clone());

    // A noisy channel forward, an identity backward.
    let noisy = Kernel::from_fn(coin.clone(), bit.clone(), |x| {
        if x == &Value::atom("H") {
            Dist::from_ratios(bit.clone(), [(Value::atom("1"), 3, 4), (Value::atom("0"), 1, 4)])
        } else {
            Dist::from_ratios(bit.clone(), [(Value::atom("1"), 1, 4), (Value::atom("0"), 3, 4)])
        }
    })
    .unwrap();
    let channel = Lens::pair(&noisy, &Kernel::identity(bit.clone()));
    println!(
        "channel lens {} → {}",
        channel.source().describe(),
        channel.target().describe()
    );

    // Sequential composition multiplies residuals; canonical equality still
    // sees through the representation.
    let id = Lens::identity(&iface(&bit, &bit));
    let composed = id.compose(&channel).unwrap();
    println!(
        "composing with the identity grows the residual to {} but behavior is unchanged: {}",
        composed.residual().describe(),
        composed.behavioral_eq(&channel).unwrap()
    );

    // Swapping twice is the identity.
    let p = iface(&coin, &bit);
    let q = iface(&bit, &coin);
    let round_trip = structural::swap(&q, &p).compose(&structural::swap(&p, &q)).unwrap();
    println!(
        "swap then swap equals the identity: {}",
        round_trip
            .behavioral_eq(&Lens::identity(&p.tensor(&q)))
            .unwrap()
    );

    // The sliding relation: a stochastic map between residuals produces two
    // representatives of the same lens.
    let fine_res = FiniteSet::atoms(["a", "b"]);
    let coarse_res = FiniteSet::atoms(["c"]);
    let forward_fine = Kernel::from_fn(
        coin.clone(),
        FiniteSet::product(&fine_res, &coin),
        |x| {
            Dist::from_ratios(
                FiniteSet::product(&fine_res, &coin),
                [
                    (Value::pair(Value::atom("a"), x.clone()), 1, 2),
                    (Value::pair(Value::atom("b"), x.clone()), 1, 2),
                ],
            )
        },
    )
    .unwrap();
    let slide_map = Kernel::constant(
        fine_res.clone(),
        Dist::dirac(Value::atom("c"), coarse_res.clone()).unwrap(),
    );
    let backward = Kernel::from_fn(
        FiniteSet::product(&coarse_res, &coin),
        coin.clone(),
        |v| Dist::dirac(v.as_pair()?.1.clone(), coin.clone()),
    )
    .unwrap();
    let (fine, coarse) = Lens::sliding_pair(
        iface(&coin, &coin),
        iface(&coin, &coin),
        &forward_fine,
        &slide_map,
        &backward,
    )
    .unwrap();
    println!(
        "sliding pair: residuals {} vs {}, behaviorally equal: {}",
        fine.residual().describe(),
        coarse.residual().describe(),
        fine.behavioral_eq(&coarse).unwrap()
    );

    // The canonical form is what equality actually compares.
    let canonical = fine.canonicalize();
    println!("canonical forward table of the slid lens:");
    for x in coin.elements() {
        let d = canonical.fwd.apply(&x).unwrap();
        let entries: Vec<String> = d
            .iter()
            .map(|(v, w)| format!("{v}:{}", open_games::rational::to_string(w)))
            .collect();
        println!("  {x} ↦ {{{}}}", entries.join(", "));
    }
}
