use std::sync::Arc;

use num_bigint::BigUint;
use proptest::prelude::*;

use cycnorm_core::perm::{Perm, PermGroup};
use cycnorm_core::ring::FiniteRing;
use cycnorm_core::scheme::{automorphism_group, point_extension, wl_closure, wl_refine, AutSearchOptions};
use cycnorm_core::sring::{AbelianGroup, SRing};
use cycnorm_core::Execution;

fn symmetric_relation(n: usize, bits: &[bool]) -> Vec<bool> {
    let mut rel = vec![false; n * n];
    let mut it = bits.iter().cycle();
    for a in 0..n {
        for b in a + 1..n {
            let on = *it.next().unwrap();
            rel[a * n + b] = on;
            rel[b * n + a] = on;
        }
    }
    rel
}

fn graph() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (3usize..=8, prop::collection::vec(any::<bool>(), 28)).prop_map(|(n, bits)| (n, symmetric_relation(n, &bits)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wl_closure_is_a_stable_scheme((n, rel) in graph()) {
        let c = wl_closure(n, std::slice::from_ref(&rel), Execution::Parallel);
        prop_assert!(c.verify().is_ok());
        let again = wl_refine(n, c.colors(), Execution::Sequential);
        prop_assert_eq!(again.colors(), c.colors());
        // the input relation is a union of colors
        prop_assert!(c.is_union_of_colors(|a, b| rel[a * n + b]));
    }

    #[test]
    fn sequential_and_parallel_agree((n, rel) in graph()) {
        let a = wl_closure(n, std::slice::from_ref(&rel), Execution::Parallel);
        let b = wl_closure(n, &[rel], Execution::Sequential);
        prop_assert_eq!(a.colors(), b.colors());
    }

    #[test]
    fn automorphisms_match_exhaustive_search((n, rel) in graph().prop_filter("small", |(n, _)| *n <= 6)) {
        let c = wl_closure(n, &[rel], Execution::Parallel);
        let aut = automorphism_group(&c, &AutSearchOptions::default()).unwrap();
        prop_assert!(aut.verify(&c));
        let sym = PermGroup::symmetric(n, 1000).unwrap();
        let expected = sym.elements().iter().filter(|g| c.is_automorphism(g)).count();
        prop_assert_eq!(aut.order(), BigUint::from(expected));
    }

    #[test]
    fn extension_automorphisms_are_stabilizers((n, rel) in graph().prop_filter("small", |(n, _)| *n <= 7), point in 0usize..7) {
        let point = point % n;
        let c = wl_closure(n, &[rel], Execution::Parallel);
        let opts = AutSearchOptions::with_base_prefix(&[point]);
        let aut = automorphism_group(&c, &opts).unwrap();
        let ext = point_extension(&c, &[point], Execution::Parallel).unwrap();
        let stab = aut.pointwise_stabilizer(&[point]).unwrap();
        prop_assert_eq!(automorphism_group(&ext, &opts).unwrap().order(), stab.order());
    }

    #[test]
    fn cayley_round_trip(n in 4u64..=15, mask in any::<u16>()) {
        let ring = FiniteRing::zmod(n).unwrap();
        let nn = n as usize;
        let mut rel = vec![false; nn * nn];
        for x in 0..nn {
            for s in (1..nn).filter(|s| mask >> s & 1 == 1) {
                let y = ring.add(x, s);
                rel[x * nn + y] = true;
                rel[y * nn + x] = true;
            }
        }
        let c = wl_closure(nn, &[rel], Execution::Parallel);
        let a = SRing::from_cayley(&c, Arc::new(AbelianGroup::additive(&ring))).unwrap();
        let back = a.to_cayley();
        prop_assert_eq!(back.colors(), c.colors());
        prop_assert!(a.verify_schur_multipliers().is_ok());
    }

    #[test]
    fn perm_composition_laws(images in Just((0..9).collect::<Vec<usize>>()).prop_shuffle(),
                             other in Just((0..9).collect::<Vec<usize>>()).prop_shuffle()) {
        let p = Perm::from_images(images).unwrap();
        let q = Perm::from_images(other).unwrap();
        prop_assert!(p.then(&p.inverse()).is_identity());
        for x in 0..9 {
            prop_assert_eq!(p.then(&q).apply(x), q.apply(p.apply(x)));
        }
        prop_assert_eq!(p.conjugate(&q), p.inverse().then(&q).then(&p));
    }
}
