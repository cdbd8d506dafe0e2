//! Randomized laws for the group algebra: arithmetic, subgroup lattice
//! operations, quotients, and isomorphisms.

use proptest::prelude::*;
use stratifold::abelian::{
    all_subgroups, group_isomorphisms, quotient, FiniteAbelianGroup, GroupElement, Subgroup,
};

fn groups() -> impl Strategy<Value = FiniteAbelianGroup> {
    proptest::collection::vec(1u64..=12, 1..=3)
        .prop_filter("keep the order small", |m| m.iter().product::<u64>() <= 48)
        .prop_map(|m| FiniteAbelianGroup::new(&m))
}

fn pick(g: &FiniteAbelianGroup, index: u64) -> GroupElement {
    let all: Vec<GroupElement> = g.elements().collect();
    all[(index % all.len() as u64) as usize].clone()
}

fn pick_subgroup(g: &FiniteAbelianGroup, a: u64, b: u64) -> Subgroup {
    Subgroup::closure(g, &[pick(g, a), pick(g, b)]).expect("generators live in the group")
}

proptest! {
    #[test]
    fn arithmetic_laws(g in groups(), i in 0u64.., j in 0u64.., k in 0u64..) {
        let (a, b, c) = (pick(&g, i), pick(&g, j), pick(&g, k));
        prop_assert_eq!(g.add(&a, &b), g.add(&b, &a));
        prop_assert_eq!(g.add(&g.add(&a, &b), &c), g.add(&a, &g.add(&b, &c)));
        prop_assert_eq!(g.add(&a, &g.identity()), a.clone());
        prop_assert_eq!(g.add(&a, &g.neg(&a)), g.identity());
        let n = g.element_order(&a);
        prop_assert_eq!(g.scalar_mul(n, &a), g.identity());
        prop_assert_eq!(g.order() % n, 0);
    }

    #[test]
    fn closures_are_subgroups(g in groups(), i in 0u64.., j in 0u64..) {
        let h = pick_subgroup(&g, i, j);
        prop_assert!(h.contains(&g.identity()));
        for x in h.elements() {
            prop_assert!(h.contains(&g.neg(x)));
            for y in h.elements() {
                prop_assert!(h.contains(&g.add(x, y)));
            }
        }
        prop_assert_eq!(g.order() % h.order(), 0);
    }

    #[test]
    fn join_and_intersection_bound_both_sides(
        g in groups(), i in 0u64.., j in 0u64.., k in 0u64.., l in 0u64..
    ) {
        let h1 = pick_subgroup(&g, i, j);
        let h2 = pick_subgroup(&g, k, l);
        let up = h1.join(&h2).unwrap();
        let down = h1.intersect(&h2).unwrap();
        prop_assert!(h1.is_contained_in(&up) && h2.is_contained_in(&up));
        prop_assert!(down.is_contained_in(&h1) && down.is_contained_in(&h2));
        // |H1 H2| * |H1 ∩ H2| = |H1| * |H2| in an abelian group
        prop_assert_eq!(up.order() * down.order(), h1.order() * h2.order());
    }

    #[test]
    fn quotient_projection_is_a_homomorphism_with_kernel_k(
        g in groups(), i in 0u64.., j in 0u64.., x in 0u64.., y in 0u64..
    ) {
        let k = pick_subgroup(&g, i, j);
        let q = quotient(&g, &k).unwrap();
        prop_assert_eq!(k.order() * q.target().order(), g.order());

        let (a, b) = (pick(&g, x), pick(&g, y));
        let lhs = q.project(&g.add(&a, &b)).unwrap();
        let rhs = q.target().add(&q.project(&a).unwrap(), &q.project(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(q.project(&a).unwrap() == q.target().identity(), k.contains(&a));
    }

    #[test]
    fn pushed_subgroups_obey_the_index_law(
        g in groups(), i in 0u64.., j in 0u64.., k in 0u64.., l in 0u64..
    ) {
        let ker = pick_subgroup(&g, i, j);
        let h = pick_subgroup(&g, k, l);
        let q = quotient(&g, &ker).unwrap();
        let joined = ker.join(&h).unwrap();
        let image = q.push_subgroup(&joined).unwrap();
        prop_assert_eq!(image.order() * ker.order(), joined.order());
        // the image is the same whether or not the kernel is joined in first
        prop_assert_eq!(image, q.push_subgroup(&h).unwrap());
    }

    #[test]
    fn invariant_factors_multiply_to_the_order_and_chain(
        g in groups(), i in 0u64.., j in 0u64..
    ) {
        let h = pick_subgroup(&g, i, j);
        let inv = h.invariant_factors();
        prop_assert_eq!(inv.iter().product::<u64>(), h.order());
        for w in inv.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        prop_assert!(inv.iter().all(|&f| f > 1) || inv.is_empty() || h.order() == 1);
        prop_assert_eq!(Subgroup::full(&g).invariant_factors(), g.invariant_factors());
    }

    #[test]
    fn isomorphisms_start_from_the_identity_and_preserve_addition(
        g in groups(), x in 0u64.., y in 0u64..
    ) {
        let mut isos = group_isomorphisms(&g, &g);
        let first = isos.next().expect("a group is isomorphic to itself");
        prop_assert!(first.is_identity_presentation());
        let (a, b) = (pick(&g, x), pick(&g, y));
        prop_assert_eq!(first.apply(&a).unwrap(), a.clone());
        // any later isomorphism still preserves addition
        if let Some(phi) = isos.next() {
            let lhs = phi.apply(&g.add(&a, &b)).unwrap();
            let rhs = g.add(&phi.apply(&a).unwrap(), &phi.apply(&b).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn subgroup_listing_contains_every_cyclic_subgroup() {
    for moduli in [&[12u64][..], &[2, 8], &[3, 3], &[2, 2, 2]] {
        let g = FiniteAbelianGroup::new(moduli);
        let listed = all_subgroups(&g);
        for x in g.elements() {
            let cyclic = Subgroup::closure(&g, &[x.clone()]).unwrap();
            assert!(
                listed.iter().any(|h| *h == cyclic),
                "missing cyclic subgroup of {g}"
            );
        }
        // distinct, and bounded by trivial/full
        for (i, h) in listed.iter().enumerate() {
            assert!(listed.iter().skip(i + 1).all(|h2| h2 != h));
            assert!(Subgroup::trivial(&g).is_contained_in(h));
            assert!(h.is_contained_in(&Subgroup::full(&g)));
        }
    }
}
