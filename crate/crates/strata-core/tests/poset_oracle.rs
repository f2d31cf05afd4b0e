//! Pushforward, global sections, and base change checked against
//! independent enumerators that loop over raw tables: local sections are
//! tuples of objects plus invertible comparisons, nothing shared with the
//! library's family search.

use strata_core::fincat::{find_equivalence, is_equivalence, validate_functor, FinCat, FunctorData};
use strata_core::posetstack::{
    check_base_change, counit_eps, global_sections_stack, pushforward_stack, PosetStack,
    StratPoset,
};
use strata_core::{fixtures, Caps};

/// Independent count of sections over a one-point diagram: objects of the
/// value, since the comparison at the identity is forced.
fn count_point_sections(value: &FinCat) -> usize {
    value.object_count()
}

/// Independent count of pairs over two incomparable points.
fn count_pair_sections(v1: &FinCat, v2: &FinCat) -> (usize, usize) {
    let objects = v1.object_count() * v2.object_count();
    let arrows: usize = (0..v1.object_count())
        .flat_map(|a| (0..v1.object_count()).map(move |b| (a, b)))
        .map(|(a, b)| {
            let first = v1.hom(a, b).len();
            let second: usize = (0..v2.object_count())
                .flat_map(|c| (0..v2.object_count()).map(move |d| (c, d)))
                .map(|(c, d)| v2.hom(c, d).len())
                .sum();
            first * second
        })
        .sum();
    (objects, arrows)
}

#[test]
fn open_point_pushforward_carries_the_fiber_everywhere() {
    // Sub-poset = the open point of the 2-chain. The pushforward at the
    // closed point is descent over a single point, so its section count is
    // the object count of the value, and it is equivalent to the value.
    let chain = fixtures::two_chain();
    let two = fixtures::walking_arrow();
    let open = chain.sub_poset(&[1]).unwrap();
    let st = PosetStack::constant(open, two.clone()).unwrap();
    let push = pushforward_stack(&chain, &[1], &st, &Caps::default()).unwrap();

    for x in chain.elements() {
        assert_eq!(push.fibers[x].families.len(), count_point_sections(&two));
        assert!(
            find_equivalence(&push.fibers[x].cat, &two, &Caps::default()).unwrap().is_some()
        );
    }
    // The transition along c ≤ o restricts a one-point family to itself.
    let s = push.stack.pf.shape.morphisms().find(|&s| {
        push.stack.pf.shape.src(s) == 0 && push.stack.pf.shape.dst(s) == 1
    });
    let s = s.unwrap();
    let report = is_equivalence(
        &push.stack.pf.at[0],
        &push.stack.pf.at[1],
        &push.stack.pf.along[s],
        &Caps::default(),
        false,
    )
    .unwrap();
    assert!(report.is_equivalence());
}

#[test]
fn incomparable_points_push_to_their_product() {
    // Two incomparable open points over a closed one: sections over the
    // closed point are pairs, counted independently above.
    let vee = fixtures::vee_poset();
    let sub = vee.sub_poset(&[1, 2]).unwrap();
    let two = fixtures::walking_arrow();
    let iso2 = fixtures::indiscrete(2);
    let st = PosetStack::strict(
        sub,
        vec![two.clone(), iso2.clone()],
        |_, _| unreachable!("no comparable pairs"),
    )
    .unwrap();
    let push = pushforward_stack(&vee, &[1, 2], &st, &Caps::default()).unwrap();
    let (objects, arrows) = count_pair_sections(&two, &iso2);
    assert_eq!((objects, arrows), (4, 12), "frozen: 2·2 objects, 3·4 arrows");
    assert_eq!(push.fibers[0].families.len(), objects);
    assert_eq!(push.fibers[0].arrows.len(), arrows);
}

#[test]
fn full_inclusion_counit_is_pointwise_equivalence() {
    // S = X: ε_s = π_s is an equivalence at every point (up-set descent
    // with an initial object).
    let chain = fixtures::chain_poset(3);
    let st = fixtures::seeded_stack_on(&chain, 7).unwrap();
    let members: Vec<usize> = chain.elements().collect();
    let counit = counit_eps(&chain, &members, &st, &Caps::default()).unwrap();
    for s in chain.elements() {
        let report = is_equivalence(
            &counit.restricted.pf.at[s],
            &st.pf.at[s],
            &counit.eps.component[s],
            &Caps::default(),
            false,
        )
        .unwrap();
        assert!(report.is_equivalence(), "counit fails at element {s}");
    }
}

#[test]
fn global_sections_of_a_two_chain_count_by_brute_force() {
    // Sections of a 2-chain stack are triples (x, y, φ: T(x) ≅ y); the
    // expected count loops over the raw tables.
    let chain = fixtures::two_chain();
    let two = fixtures::walking_arrow();
    let iso2 = fixtures::indiscrete(2);
    // T: 𝟚 → Iso₂ sending the generating arrow to the 0→1 iso.
    let on_obj = vec![0, 1];
    let on_mor: Vec<usize> = two
        .morphisms()
        .map(|m| {
            if two.is_identity(m) {
                iso2.identity(on_obj[two.src(m)])
            } else {
                iso2.isos(0, 1)[0]
            }
        })
        .collect();
    let t = FunctorData { on_obj, on_mor };
    assert!(validate_functor(&two, &iso2, &t).is_empty());
    let st = PosetStack::strict(chain, vec![two.clone(), iso2.clone()], |a, b| {
        assert_eq!((a, b), (0, 1));
        t.clone()
    })
    .unwrap();

    let mut expected = 0;
    for x in two.objects() {
        for y in iso2.objects() {
            expected += iso2.isos(t.on_obj[x], y).len();
        }
    }
    assert_eq!(expected, 4, "frozen: each of 2 objects meets 2 isomorphism targets");

    let dc = global_sections_stack(&st, &Caps::default()).unwrap();
    assert_eq!(dc.families.len(), expected);
}

#[test]
fn global_sections_of_an_antichain_count_as_products() {
    let antichain = StratPoset::new(&["p", "q"], &[], &[0, 0]).unwrap();
    let two = fixtures::walking_arrow();
    let iso2 = fixtures::indiscrete(2);
    let st = PosetStack::strict(
        antichain,
        vec![two.clone(), iso2.clone()],
        |_, _| unreachable!("no comparable pairs"),
    )
    .unwrap();
    let dc = global_sections_stack(&st, &Caps::default()).unwrap();
    let (objects, arrows) = count_pair_sections(&two, &iso2);
    assert_eq!(dc.families.len(), objects);
    assert_eq!(dc.arrows.len(), arrows);
}

#[test]
fn pushforward_along_a_composite_matches_the_two_step_pushforward() {
    // S = {top} ⊆ T = {middle, top} ⊆ X = 3-chain; (i∘j)_* vs i_* ∘ j_*,
    // compared pointwise by certified equivalence.
    let x = fixtures::chain_poset(3);
    let t_sub = x.sub_poset(&[1, 2]).unwrap();
    let s_sub = x.sub_poset(&[2]).unwrap();
    let value = fixtures::cyclic2();
    let st = PosetStack::constant(s_sub, value).unwrap();

    let one_step = pushforward_stack(&x, &[2], &st, &Caps::default()).unwrap();
    let inner = pushforward_stack(&t_sub, &[1], &st, &Caps::default()).unwrap();
    let two_step = pushforward_stack(&x, &[1, 2], &inner.stack, &Caps::default()).unwrap();

    for p in x.elements() {
        assert!(
            find_equivalence(
                &one_step.stack.pf.at[p],
                &two_step.stack.pf.at[p],
                &Caps::default()
            )
            .unwrap()
            .is_some(),
            "pushforwards disagree at element {p}"
        );
    }
}

#[test]
fn base_change_holds_on_fifty_seeded_configurations() {
    // Seeded sweep: random poset (≤ 4 elements), random sub-poset F with a
    // seeded stack on it, random up-set V. The base-change comparison must
    // be a certified pointwise equivalence every time.
    let mut checked_points = 0;
    for seed in 0..50u64 {
        let ambient = fixtures::seeded_poset(seed);
        let f_members = fixtures::seeded_subset(&ambient, seed.wrapping_mul(31).wrapping_add(1));
        let v_members = fixtures::seeded_up_set(&ambient, seed.wrapping_mul(53).wrapping_add(2));
        let f_sub = ambient.sub_poset(&f_members).unwrap();
        let st = fixtures::seeded_stack_on(&f_sub, seed.wrapping_mul(101).wrapping_add(3)).unwrap();
        let report =
            check_base_change(&ambient, &v_members, &f_members, &st, &Caps::default()).unwrap();
        assert!(
            report.ok,
            "base change fails for seed {seed}: {:?}",
            report.points.iter().filter(|p| !p.equivalent).collect::<Vec<_>>()
        );
        checked_points += report.points.len();
    }
    assert!(checked_points > 50, "sweep too weak: only {checked_points} points checked");
}
