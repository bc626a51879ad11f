//! Algebraic invariants over randomly generated lattices.

use conlat::congruence::{congruence_atoms, congruence_lattice_with_elements, join_repairs};
use conlat::expr::random_expr;
use conlat::io::{lattice_from_json, lattice_to_json};
use conlat::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn lattice_upto(max: usize) -> impl Strategy<Value = (String, Lattice)> {
    any::<u64>().prop_map(move |seed| {
        let e = random_expr(&mut StdRng::seed_from_u64(seed), max);
        (e.to_string(), e.build().unwrap())
    })
}

fn con_count(l: &Lattice) -> usize {
    all_congruences(l).len()
}

/// `C(2) ∔ l ∔ C(2)`, the boxed summand of a horizontal sum.
fn boxed(l: &Lattice) -> Lattice {
    let c2 = chain(2).unwrap();
    ordinal_sum_all(&[&c2, l, &c2]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lattice_laws((_, l) in lattice_upto(12)) {
        for x in l.elements() {
            prop_assert_eq!(l.meet(x, x), x);
            for y in l.elements() {
                prop_assert_eq!(l.meet(x, y), l.meet(y, x));
                prop_assert_eq!(l.join(x, l.meet(x, y)), x);
                prop_assert_eq!(l.meet(x, l.join(x, y)), x);
                prop_assert_eq!(l.leq(x, y), l.meet(x, y) == x);
                prop_assert!(!l.leq(x, y) || x <= y);
            }
        }
    }

    #[test]
    fn cover_lists_round_trip((_, l) in lattice_upto(12)) {
        let again = validate_lattice(l.len(), l.covers()).unwrap();
        prop_assert_eq!(&again, &l);
        prop_assert_eq!(lattice_from_json(&lattice_to_json(&l)).unwrap(), l);
    }

    #[test]
    fn expressions_round_trip(seed in any::<u64>()) {
        let e = random_expr(&mut StdRng::seed_from_u64(seed), 14);
        let text = e.to_string();
        let again = parse_expr(&text).unwrap();
        prop_assert_eq!(again.to_string(), text);
        prop_assert_eq!(again.build().unwrap(), e.build().unwrap());
        prop_assert!(e.size().unwrap() <= 14);
    }

    #[test]
    fn congruences_form_a_lattice((_, l) in lattice_upto(10)) {
        let n = l.len();
        let (con, elements) = congruence_lattice_with_elements(&l);
        prop_assert_eq!(con.len(), elements.len());
        prop_assert!(elements[con.bottom()].is_identity());
        prop_assert!(elements[con.top()].is_full());
        let before = join_repairs();
        for (i, a) in elements.iter().enumerate() {
            prop_assert!(is_congruence(&l, a));
            prop_assert_eq!(a.lattice_size(), n);
            for (j, b) in elements.iter().enumerate() {
                prop_assert_eq!(con.leq(i, j), a.refines(b));
                prop_assert_eq!(&congruence_join(&l, a, b).unwrap(), &elements[con.join(i, j)]);
                prop_assert_eq!(&congruence_meet(&l, a, b).unwrap(), &elements[con.meet(i, j)]);
            }
        }
        prop_assert_eq!(join_repairs(), before);
    }

    #[test]
    fn duality_preserves_congruence_counts((_, l) in lattice_upto(10)) {
        prop_assert_eq!(con_count(&l), con_count(&l.dual()));
        prop_assert_eq!(canonical_code(&l.dual().dual()).unwrap(), canonical_code(&l).unwrap());
    }

    #[test]
    fn quotients_are_homomorphic_images((_, l) in lattice_upto(9)) {
        for theta in all_congruences(&l) {
            let (q, map) = quotient(&l, &theta).unwrap();
            prop_assert_eq!(q.len(), theta.num_blocks());
            for x in l.elements() {
                for y in l.elements() {
                    prop_assert_eq!(map[l.meet(x, y)], q.meet(map[x], map[y]));
                    prop_assert_eq!(map[l.join(x, y)], q.join(map[x], map[y]));
                }
            }
        }
    }

    #[test]
    fn finite_lattices_have_n_filters_and_ideals((_, l) in lattice_upto(14)) {
        prop_assert_eq!(l.filters().len(), l.len());
        prop_assert_eq!(l.ideals().len(), l.len());
    }

    #[test]
    fn canonical_codes_ignore_labels((_, l) in lattice_upto(12), seed in any::<u64>()) {
        let n = l.len();
        let mut perm: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(&mut perm[..], &mut StdRng::seed_from_u64(seed));
        let (copy, _) = Lattice::from_relation(n, |x, y| l.leq(perm[x], perm[y]), vec![]).unwrap();
        prop_assert_eq!(canonical_code(&copy).unwrap(), canonical_code(&l).unwrap());
        prop_assert!(is_isomorphic(&l, &copy).is_some());
    }

    #[test]
    fn products_multiply_counts((_, a) in lattice_upto(5), (_, b) in lattice_upto(5)) {
        let p = direct_product(&[&a, &b]).unwrap();
        prop_assert_eq!(p.len(), a.len() * b.len());
        prop_assert_eq!(con_count(&p), con_count(&a) * con_count(&b));
    }

    #[test]
    fn ordinal_sums_multiply_counts((_, a) in lattice_upto(8), (_, b) in lattice_upto(8)) {
        let s = ordinal_sum(&a, &b);
        prop_assert_eq!(s.len(), a.len() + b.len() - 1);
        prop_assert_eq!(con_count(&s), con_count(&a) * con_count(&b));
    }

    #[test]
    fn boxed_horizontal_sums((_, a) in lattice_upto(5), (_, b) in lattice_upto(5), (_, c) in lattice_upto(4)) {
        let two = horizontal_sum(&[&boxed(&a), &boxed(&b)]).unwrap();
        prop_assert_eq!(con_count(&two), con_count(&a) * con_count(&b) + 3);
        let three = horizontal_sum(&[&boxed(&a), &boxed(&b), &boxed(&c)]).unwrap();
        prop_assert_eq!(con_count(&three), 1 + con_count(&a) * con_count(&b) * con_count(&c));
        prop_assert_eq!(three.len(), a.len() + b.len() + c.len() + 2);
    }

    /// In `C(3) ⊞ (M ∔ C(2))` with the bottom of `M` meet-reducible, a
    /// congruence of `M` survives exactly when it leaves the bottom alone;
    /// two more come from `{M, rest}` and the full relation.
    #[test]
    fn horizontal_sum_with_a_chain((_, m) in lattice_upto(8)) {
        prop_assume!(m.upper_covers(m.bottom()).len() >= 2);
        let l = horizontal_sum(&[&chain(3).unwrap(), &ordinal_sum(&m, &chain(2).unwrap())]).unwrap();
        let fixing_bottom = all_congruences(&m).iter().filter(|t| t.blocks()[0] == [m.bottom()]).count();
        prop_assert_eq!(con_count(&l), fixing_bottom + 2);
    }

    #[test]
    fn atoms_come_from_covers((_, l) in lattice_upto(10)) {
        prop_assume!(l.len() >= 2);
        let atoms = congruence_atoms(&l).unwrap();
        prop_assert!(!atoms.is_empty());
        for theta in atoms {
            prop_assert!(l.covers().iter().any(|&(a, b)| principal_congruence(&l, a, b) == theta));
        }
    }
}
