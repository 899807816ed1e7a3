//! Randomized and exhaustive algebraic properties across modules.

use proptest::prelude::*;

use green2q::green2::{compose, dm_green2, linsys_green2};
use green2q::partitions::{dominance_leq, partitions_of, Partition};
use green2q::qpoly::{parse_poly, Polynomial};
use green2q::typea::LeviDescriptor;

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-6i64..=6, 0..7).prop_map(|c| Polynomial::from_ints(&c))
}

fn partition() -> impl Strategy<Value = Partition> {
    (1usize..=7).prop_flat_map(|n| {
        let all = partitions_of(n);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

proptest! {
    #[test]
    fn display_parses_back(p in poly()) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn division_reconstructs(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let (quo, rem) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&quo * &b) + &rem, a);
        prop_assert!(rem.is_zero() || rem.degree() < b.degree());
    }

    #[test]
    fn ennola_is_an_involutive_ring_map(a in poly(), b in poly()) {
        prop_assert_eq!(a.ennola().ennola(), a.clone());
        prop_assert_eq!((&a * &b).ennola(), &a.ennola() * &b.ennola());
    }

    #[test]
    fn conjugation_reverses_dominance(l in partition(), m in partition()) {
        prop_assert_eq!(l.conjugate().conjugate(), l.clone());
        if l.size() == m.size() {
            let forward = dominance_leq(&l, &m).unwrap();
            prop_assert_eq!(forward, dominance_leq(&m.conjugate(), &l.conjugate()).unwrap());
        }
    }

    #[test]
    fn partition_text_round_trips(l in partition()) {
        prop_assert_eq!(l.to_string().parse::<Partition>().unwrap(), l);
    }
}

/// `Q̃_L^G = Q̃_L^M Q̃_M^G` for every chain `L ≤ M ≤ GL_n`, `n ≤ 4`. Descriptors
/// fix Levis only up to conjugacy in `GL_n`, so the ambient is `GL_n` itself.
#[test]
fn transitivity_in_stages() {
    let mut chains = 0;
    for n in 2..=4 {
        let g = LeviDescriptor::gl(n);
        let levis = LeviDescriptor::all_levis(n);
        for m in &levis {
            let outer = dm_green2(&g, m).unwrap();
            for l in &levis {
                let Ok(inner) = dm_green2(m, l) else { continue };
                let direct = dm_green2(&g, l).unwrap();
                assert_eq!(compose(&inner, &outer).unwrap(), direct, "{l} <= {m} <= {g}");
                chains += 1;
            }
        }
    }
    assert!(chains > 50, "only {chains} chains");
}

#[test]
fn routes_agree_inside_proper_levis() {
    for n in 2..=4 {
        let levis = LeviDescriptor::all_levis(n);
        for g in &levis {
            for l in &levis {
                if let Ok(a) = dm_green2(g, l) {
                    assert_eq!(linsys_green2(g, l).unwrap(), a, "{l} in {g}");
                }
            }
        }
    }
}
