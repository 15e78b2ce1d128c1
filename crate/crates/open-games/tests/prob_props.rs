//! Property tests for the distribution layer: normalization is re-established
//! by every operation, supports are exactly the key sets, and conditioning
//! agrees with the joint table.

use std::collections::BTreeMap;

use proptest::prelude::*;

use open_games::prob::{Dist, Kernel, Side};
use open_games::rational::{self, Rational};
use open_games::value::{FiniteSet, Value};

fn space_of(n: usize, tag: &str) -> FiniteSet {
    FiniteSet::atoms((0..n).map(|i| format!("{tag}{i}")))
}

fn dist_from(weights: &[u8], space: &FiniteSet) -> Dist {
    let elems = space.elements();
    let mut raw: BTreeMap<Value, Rational> = BTreeMap::new();
    let mut any = false;
    for (e, w) in elems.iter().zip(weights) {
        if *w > 0 {
            any = true;
        }
        raw.insert(e.clone(), rational::int(*w as i64));
    }
    if !any {
        raw.insert(elems[0].clone(), rational::one());
    }
    Dist::from_weights(space.clone(), raw).expect("nonnegative weights with positive total")
}

fn arb_dist(tag: &'static str) -> impl Strategy<Value = Dist> {
    (1usize..=5).prop_flat_map(move |n| {
        proptest::collection::vec(0u8..=8, n)
            .prop_map(move |ws| dist_from(&ws, &space_of(n, tag)))
    })
}

fn arb_joint() -> impl Strategy<Value = Dist> {
    ((1usize..=4), (1usize..=4)).prop_flat_map(|(n, m)| {
        proptest::collection::vec(0u8..=8, n * m).prop_map(move |ws| {
            let space = FiniteSet::product(&space_of(n, "t"), &space_of(m, "x"));
            dist_from(&ws, &space)
        })
    })
}

fn total_mass(d: &Dist) -> Rational {
    d.iter().map(|(_, w)| w.clone()).sum()
}

proptest! {
    #[test]
    fn construction_normalizes_and_prunes(d in arb_dist("a")) {
        prop_assert_eq!(total_mass(&d), rational::one());
        // Support is the key set: every stored weight is strictly positive.
        for (_, w) in d.iter() {
            prop_assert!(w > &rational::zero());
        }
    }

    #[test]
    fn pushforward_and_product_stay_normalized(d1 in arb_dist("a"), d2 in arb_dist("b")) {
        let joint = d1.product(&d2);
        prop_assert_eq!(total_mass(&joint), rational::one());
        prop_assert_eq!(joint.marginal(Side::Left).unwrap(), d1);
        prop_assert_eq!(joint.marginal(Side::Right).unwrap(), d2);

        let unit = FiniteSet::unit();
        let collapsed = joint.pushforward(unit, |_| Value::unit()).unwrap();
        prop_assert!(collapsed.is_dirac());
    }

    #[test]
    fn bind_stays_normalized(d in arb_dist("a"), seed in 0u8..=8) {
        let space = d.space().clone();
        let k = Kernel::from_fn(space.clone(), space.clone(), |x| {
            // A deterministic but input-dependent rotation.
            let elems = space.elements();
            let idx = elems.iter().position(|e| e == x).unwrap();
            Dist::dirac(elems[(idx + seed as usize) % elems.len()].clone(), space.clone())
        })
        .unwrap();
        let out = d.bind(&k).unwrap();
        prop_assert_eq!(total_mass(&out), rational::one());
    }

    #[test]
    fn bayes_update_matches_the_joint_table(joint in arb_joint()) {
        let x_marginal = joint.marginal(Side::Right).unwrap();
        for x in x_marginal.support() {
            let posterior = joint.bayes_update(x).unwrap();
            prop_assert_eq!(total_mass(&posterior), rational::one());
            for (theta, w) in posterior.iter() {
                // P(θ|x) · P(x) = P(θ,x), exactly.
                let lhs = w * &x_marginal.weight(x);
                let rhs = joint.weight(&Value::pair(theta.clone(), x.clone()));
                prop_assert_eq!(&lhs, &rhs);
            }
        }
    }

    #[test]
    fn rational_strings_round_trip(n in -10_000i64..10_000, d in 1i64..1_000) {
        let r = rational::ratio(n, d);
        let s = rational::to_string(&r);
        prop_assert_eq!(rational::parse(&s).unwrap(), r);
    }
}
