//! Oracle tests for 2-representations and their section categories.
//!
//! Every expected value here is either hand-frozen from an independent
//! enumeration written inline (never calling the engine under test) or a
//! table identity the engine must reproduce exactly. The fixtures are the
//! smallest presentations with the relevant phenomena: the point, the
//! circle, a cylinder with a loop conjugation, a connected double cover,
//! and a bundle whose homotopy data twists a base relation.

use strata_core::error::{Caps, Error};
use strata_core::fincat::{
    identity_functor, is_equivalence, then_functor, validate_functor, validate_nat, FinCat,
    FunctorData,
};
use strata_core::fixtures;
use strata_core::monodromy::{
    composite_comparison, datum_transport, fiber_sections, global_sections_nu, pullback_rep,
    pushforward_rep, stalk_projection, transport_iso, validate_bundle, validate_presentation,
    validate_presentation_map, validate_two_rep, word_transport, BundleDatum, CompositeDatum,
    Gen2Data, HomotopyDatum, Pasting, PastingStep, Presentation2, PresentationMap, Rel2Data,
    TransportDatum, TwoRep, Word,
};

fn swap2(c: &FinCat) -> FunctorData {
    fixtures::indiscrete_swap(c)
}

/// Independent section enumerator for a one-loop presentation: families are
/// pairs `(x, φ)` with `φ` an invertible arrow `T(x) → x`, morphisms are
/// arrows `u` with `φ' ∘ T(u) = u ∘ φ`.
fn circle_families(c: &FinCat, t: &FunctorData) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in c.objects() {
        for phi in c.isos(t.on_obj[x], x) {
            out.push((x, phi));
        }
    }
    out
}

fn circle_arrow_count(c: &FinCat, t: &FunctorData, families: &[(usize, usize)]) -> usize {
    let mut count = 0;
    for &(x, phi) in families {
        for &(y, psi) in families {
            for u in c.hom(x, y) {
                if c.then(t.on_mor[u], psi) == c.then(phi, u) {
                    count += 1;
                }
            }
        }
    }
    count
}

#[test]
fn circle_sections_match_the_enumeration_oracle() {
    let caps = Caps::default();
    let p = fixtures::circle_presentation();

    // (Iso₂, swap): fixed points of the swap up to a chosen comparison.
    let c = fixtures::iso_pair();
    let t = swap2(&c);
    let rep = TwoRep { at: vec![c.clone()], along1: vec![t.clone()], along2: vec![] };
    assert!(validate_two_rep(&p, &rep).is_empty());
    let sc = global_sections_nu(&p, &rep, &caps).unwrap();
    let expected = circle_families(&c, &t);
    assert_eq!(expected.len(), 2);
    assert_eq!(sc.cat.object_count(), 2);
    assert_eq!(sc.cat.morphism_count(), circle_arrow_count(&c, &t, &expected));
    assert_eq!(sc.cat.morphism_count(), 4);
    for (i, &(x, phi)) in expected.iter().enumerate() {
        assert_eq!(sc.family_index(&[x], &[phi]), Some(i));
    }

    // (𝟚, Id): only identity loops qualify.
    let w = fixtures::walking_arrow();
    let id = identity_functor(&w);
    let rep = TwoRep { at: vec![w.clone()], along1: vec![id.clone()], along2: vec![] };
    let sc = global_sections_nu(&p, &rep, &caps).unwrap();
    let expected = circle_families(&w, &id);
    assert_eq!(expected.len(), 2);
    assert_eq!(sc.cat.object_count(), 2);
    assert_eq!(sc.cat.morphism_count(), circle_arrow_count(&w, &id, &expected));
    assert_eq!(sc.cat.morphism_count(), 3);
}

#[test]
fn point_presentation_sections_recover_the_stalk() {
    let caps = Caps::default();
    let p = fixtures::point_presentation();
    let w = fixtures::walking_arrow();
    let rep = TwoRep { at: vec![w.clone()], along1: vec![], along2: vec![] };
    let sc = global_sections_nu(&p, &rep, &caps).unwrap();
    assert_eq!(sc.cat.object_count(), w.object_count());
    assert_eq!(sc.cat.morphism_count(), w.morphism_count());
    let pi = stalk_projection(&sc, 0);
    assert!(validate_functor(&sc.cat, &w, &pi).is_empty());
    assert!(is_equivalence(&sc.cat, &w, &pi, &caps, false).unwrap().is_equivalence());
}

#[test]
fn ill_typed_words_are_located() {
    // A cell whose two sides do not share endpoints, and one whose source
    // word does not compose.
    let p = Presentation2::from_parts(
        &["b0", "b1"],
        &[("g", "b0", "b1")],
        vec![
            Gen2Data {
                id: "bad_parallel".to_string(),
                src: Word::path("b0", &["g"]),
                dst: Word::id("b0"),
            },
            Gen2Data {
                id: "bad_compose".to_string(),
                src: Word::path("b0", &["g", "g"]),
                dst: Word::path("b0", &["g", "g"]),
            },
        ],
        vec![],
    )
    .unwrap();
    let violations = validate_presentation(&p);
    assert!(!violations.is_empty());
    let rendered: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    assert!(rendered.iter().any(|m| m.contains("bad_parallel")));
    assert!(rendered.iter().any(|m| m.contains("bad_compose")));
}

#[test]
fn pullback_evaluates_words_strictly() {
    let p = fixtures::circle_presentation();
    let c = fixtures::iso_pair();
    let t = swap2(&c);
    let rep = TwoRep { at: vec![c.clone()], along1: vec![t.clone()], along2: vec![] };

    // Identity map: the pullback is the representation itself.
    let id_map = PresentationMap::identity(&p);
    assert!(validate_presentation_map(&p, &p, &id_map).is_empty());
    let back = pullback_rep(&p, &p, &id_map, &rep).unwrap();
    assert_eq!(back.along1, rep.along1);
    assert_eq!(back.at[0], rep.at[0]);

    // Degree two: the loop maps to its square, so monodromy squares.
    let deg2 = PresentationMap::build(
        &p,
        &p,
        &[("b", "b")],
        &[("s", Word::path("b", &["s", "s"]))],
        &[],
    )
    .unwrap();
    assert!(validate_presentation_map(&p, &p, &deg2).is_empty());
    let squared = pullback_rep(&p, &p, &deg2, &rep).unwrap();
    assert_eq!(squared.along1[0], then_functor(&t, &t));

    // Collapse to a point: the loop becomes the identity.
    let point = fixtures::point_presentation();
    let collapse =
        PresentationMap::build(&p, &point, &[("b", "pt")], &[("s", Word::id("pt"))], &[])
            .unwrap();
    assert!(validate_presentation_map(&p, &point, &collapse).is_empty());
    let point_rep = TwoRep { at: vec![c.clone()], along1: vec![], along2: vec![] };
    let constant = pullback_rep(&p, &point, &collapse, &point_rep).unwrap();
    assert_eq!(constant.along1[0], identity_functor(&c));
}

/// The cylinder bundle: interval base, circle fibers, one square cell
/// identifying the two ways around. Returns the bundle (with the straight
/// transport installed) and the representation on the total presentation.
fn cylinder_bundle() -> (BundleDatum, TwoRep) {
    let base = fixtures::interval_presentation();
    let fiber = fixtures::circle_presentation();
    let total = Presentation2::from_parts(
        &["e0", "e1"],
        &[("h", "e0", "e1"), ("l0", "e0", "e0"), ("l1", "e1", "e1")],
        vec![Gen2Data {
            id: "q".to_string(),
            src: Word::path("e0", &["l0", "h"]),
            dst: Word::path("e0", &["h", "l1"]),
        }],
        vec![],
    )
    .unwrap();
    let incl0 = PresentationMap::build(
        &fiber,
        &total,
        &[("b", "e0")],
        &[("s", Word::path("e0", &["l0"]))],
        &[],
    )
    .unwrap();
    let incl1 = PresentationMap::build(
        &fiber,
        &total,
        &[("b", "e1")],
        &[("s", Word::path("e1", &["l1"]))],
        &[],
    )
    .unwrap();
    let straight = TransportDatum {
        t: PresentationMap::identity(&fiber),
        paths: vec![Word::path("e0", &["h"])],
        squares: vec![Pasting {
            source: Word::path("e0", &["l0", "h"]),
            steps: vec![PastingStep {
                left: Word::id("e0"),
                cell: "q".to_string(),
                inverted: false,
                right: Word::id("e1"),
            }],
        }],
    };
    let c = fixtures::iso_pair();
    let t = swap2(&c);
    let rep = TwoRep {
        at: vec![c.clone(), c.clone()],
        // Total generators sort as h, l0, l1.
        along1: vec![identity_functor(&c), t.clone(), t.clone()],
        // ev(l0·h) = ev(h·l1) = swap, so the square cell is the identity.
        along2: vec![strata_core::fincat::identity_nat(&c, &t)],
    };
    let bundle = BundleDatum {
        base,
        total,
        fibers: vec![fiber.clone(), fiber],
        inclusions: vec![incl0, incl1],
        transports: vec![straight],
        homotopies: vec![],
        composites: std::collections::BTreeMap::new(),
    };
    (bundle, rep)
}

/// The loop-first transport on the cylinder: go once around the source
/// fiber, then across.
fn cylinder_loop_first() -> TransportDatum {
    let fiber = fixtures::circle_presentation();
    TransportDatum {
        t: PresentationMap::identity(&fiber),
        paths: vec![Word::path("e0", &["l0", "h"])],
        squares: vec![Pasting {
            source: Word::path("e0", &["l0", "l0", "h"]),
            steps: vec![PastingStep {
                left: Word::path("e0", &["l0"]),
                cell: "q".to_string(),
                inverted: false,
                right: Word::id("e1"),
            }],
        }],
    }
}

#[test]
fn cylinder_transport_conjugates_by_the_loop() {
    let caps = Caps::default();
    let (bundle, rep) = cylinder_bundle();
    assert!(validate_bundle(&bundle).is_empty());
    assert!(validate_two_rep(&bundle.total, &rep).is_empty());

    let src_sc = fiber_sections(&bundle, &rep, 0, &caps).unwrap();
    let dst_sc = fiber_sections(&bundle, &rep, 1, &caps).unwrap();
    assert_eq!(src_sc.cat.object_count(), 2);

    let straight = datum_transport(&bundle, &rep, 0, 1, &bundle.transports[0], &src_sc, &dst_sc)
        .unwrap();
    let around = datum_transport(&bundle, &rep, 0, 1, &cylinder_loop_first(), &src_sc, &dst_sc)
        .unwrap();
    assert!(validate_functor(&src_sc.cat, &dst_sc.cat, &straight.table).is_empty());
    assert!(validate_functor(&src_sc.cat, &dst_sc.cat, &around.table).is_empty());

    // Independent expectation: going around first is whiskering with the
    // loop's monodromy — (x, φ) ↦ (T x, T φ) — followed by the straight
    // transport.
    let c = fixtures::iso_pair();
    let t = swap2(&c);
    let whisker = FunctorData {
        on_obj: src_sc
            .families
            .iter()
            .map(|f| {
                src_sc.family_index(&[t.on_obj[f.x[0]]], &[t.on_mor[f.phi[0]]]).unwrap()
            })
            .collect(),
        on_mor: src_sc
            .arrows
            .iter()
            .map(|a| {
                let fs = &src_sc.families[a.src];
                let fd = &src_sc.families[a.dst];
                let si =
                    src_sc.family_index(&[t.on_obj[fs.x[0]]], &[t.on_mor[fs.phi[0]]]).unwrap();
                let di =
                    src_sc.family_index(&[t.on_obj[fd.x[0]]], &[t.on_mor[fd.phi[0]]]).unwrap();
                src_sc.arrow_index(si, di, &[t.on_mor[a.components[0]]]).unwrap()
            })
            .collect(),
    };
    assert!(validate_functor(&src_sc.cat, &src_sc.cat, &whisker).is_empty());
    assert_eq!(around.table, then_functor(&whisker, &straight.table));
}

#[test]
fn homotopy_iso_components_are_the_section_comparisons() {
    let caps = Caps::default();
    let (bundle, rep) = cylinder_bundle();
    let src_sc = fiber_sections(&bundle, &rep, 0, &caps).unwrap();
    let dst_sc = fiber_sections(&bundle, &rep, 1, &caps).unwrap();
    let straight = datum_transport(&bundle, &rep, 0, 1, &bundle.transports[0], &src_sc, &dst_sc)
        .unwrap();
    let around = datum_transport(&bundle, &rep, 0, 1, &cylinder_loop_first(), &src_sc, &dst_sc)
        .unwrap();

    // The homotopy sliding the crossing past the loop: β is the fiber loop,
    // the filler is the inverted square cell.
    let hd = HomotopyDatum {
        beta: vec![Word::path("b", &["s"])],
        fillers: vec![Pasting {
            source: Word::path("e0", &["h", "l1"]),
            steps: vec![PastingStep {
                left: Word::id("e0"),
                cell: "q".to_string(),
                inverted: true,
                right: Word::id("e1"),
            }],
        }],
    };
    let nat =
        transport_iso(&bundle, &rep, 0, 1, &hd, &straight, &around, &src_sc, &dst_sc).unwrap();
    assert!(validate_nat(&src_sc.cat, &dst_sc.cat, &straight.table, &around.table, &nat, true)
        .is_empty());

    // Hand-frozen components: at (p, v) the comparison is u, at (q, u) it
    // is v — each family's own comparison arrow, inverted.
    let c = fixtures::iso_pair();
    let u_idx = c.morphism_index("u").unwrap();
    let v_idx = c.morphism_index("v").unwrap();
    let f_pv = src_sc.family_index(&[0], &[v_idx]).unwrap();
    let f_qu = src_sc.family_index(&[1], &[u_idx]).unwrap();
    let expect_pv = dst_sc
        .arrow_index(straight.table.on_obj[f_pv], around.table.on_obj[f_pv], &[u_idx])
        .unwrap();
    let expect_qu = dst_sc
        .arrow_index(straight.table.on_obj[f_qu], around.table.on_obj[f_qu], &[v_idx])
        .unwrap();
    assert_eq!(nat.components[f_pv], expect_pv);
    assert_eq!(nat.components[f_qu], expect_qu);
}

/// Trivial bundle over the circle: fibers and total coincide, transports
/// stay put, the filler squares are identity pastings.
fn trivial_circle_bundle() -> (BundleDatum, TwoRep) {
    let base = fixtures::circle_presentation();
    let fiber = fixtures::circle_presentation();
    let c = fixtures::iso_pair();
    let t = swap2(&c);
    let rep = TwoRep { at: vec![c.clone()], along1: vec![t], along2: vec![] };
    let bundle = BundleDatum {
        base,
        total: fiber.clone(),
        fibers: vec![fiber.clone()],
        inclusions: vec![PresentationMap::identity(&fiber)],
        transports: vec![TransportDatum {
            t: PresentationMap::identity(&fiber),
            paths: vec![Word::id("b")],
            squares: vec![Pasting { source: Word::path("b", &["s"]), steps: vec![] }],
        }],
        homotopies: vec![],
        composites: std::collections::BTreeMap::new(),
    };
    (bundle, rep)
}

#[test]
fn trivial_bundle_pushforward_is_fiberwise_sections() {
    let caps = Caps::default();
    let (bundle, rep) = trivial_circle_bundle();
    assert!(validate_bundle(&bundle).is_empty());
    let pushed = pushforward_rep(&bundle, &rep, &caps).unwrap();
    assert!(validate_two_rep(&bundle.base, &pushed.rep).is_empty());
    assert_eq!(pushed.rep.at[0].object_count(), 2);
    assert_eq!(pushed.rep.at[0].morphism_count(), 4);
    assert_eq!(pushed.rep.along1[0], identity_functor(&pushed.rep.at[0]));
}

/// The connected double cover of the circle: discrete two-point fibers, the
/// deck transformation as transport.
fn double_cover_bundle() -> (BundleDatum, TwoRep) {
    let base = fixtures::circle_presentation();
    let fiber = fixtures::two_point_presentation();
    let total = Presentation2::from_parts(
        &["e0", "e1"],
        &[("g0", "e0", "e1"), ("g1", "e1", "e0")],
        vec![],
        vec![],
    )
    .unwrap();
    let incl = PresentationMap::build(
        &fiber,
        &total,
        &[("x0", "e0"), ("x1", "e1")],
        &[],
        &[],
    )
    .unwrap();
    let deck = PresentationMap::build(&fiber, &fiber, &[("x0", "x1"), ("x1", "x0")], &[], &[])
        .unwrap();
    let w = fixtures::walking_arrow();
    let rep = TwoRep {
        at: vec![w.clone(), w.clone()],
        along1: vec![identity_functor(&w), identity_functor(&w)],
        along2: vec![],
    };
    let bundle = BundleDatum {
        base,
        total,
        fibers: vec![fiber],
        inclusions: vec![incl],
        transports: vec![TransportDatum {
            t: deck,
            paths: vec![Word::path("e0", &["g0"]), Word::path("e1", &["g1"])],
            squares: vec![],
        }],
        homotopies: vec![],
        composites: std::collections::BTreeMap::new(),
    };
    (bundle, rep)
}

#[test]
fn double_cover_pushes_to_the_swapped_product() {
    let caps = Caps::default();
    let (bundle, rep) = double_cover_bundle();
    assert!(validate_bundle(&bundle).is_empty());
    let pushed = pushforward_rep(&bundle, &rep, &caps).unwrap();
    assert!(validate_two_rep(&bundle.base, &pushed.rep).is_empty());

    // Fiber sections form the product of the two stalks.
    assert_eq!(pushed.rep.at[0].object_count(), 4);
    assert_eq!(pushed.rep.at[0].morphism_count(), 9);

    // The monodromy permutes the two coordinates.
    let sc = &pushed.sections[0];
    for (i, f) in sc.families.iter().enumerate() {
        let swapped = sc.family_index(&[f.x[1], f.x[0]], &[]).unwrap();
        assert_eq!(pushed.rep.along1[0].on_obj[i], swapped);
    }
}

#[test]
fn tight_caps_stop_the_section_enumeration() {
    let tight = Caps { max_candidates: 8, ..Caps::default() };
    let (bundle, rep) = double_cover_bundle();
    let err = fiber_sections(&bundle, &rep, 0, &tight);
    assert!(matches!(err, Err(Error::SizeCap { .. })));
}

/// A bundle over the circle-with-cell basepoint whose homotopy datum can be
/// twisted: the base declares its 2-cell trivial in `rel2`, and the total
/// representation decides whether the pushed cell honors that.
fn relation_probe_bundle(twist: bool) -> (BundleDatum, TwoRep) {
    let cell = Gen2Data {
        id: "c".to_string(),
        src: Word::path("b", &["s"]),
        dst: Word::path("b", &["s"]),
    };
    let relation = Rel2Data {
        id: "r".to_string(),
        lhs: Pasting {
            source: Word::path("b", &["s"]),
            steps: vec![PastingStep {
                left: Word::id("b"),
                cell: "c".to_string(),
                inverted: false,
                right: Word::id("b"),
            }],
        },
        rhs: Pasting { source: Word::path("b", &["s"]), steps: vec![] },
    };
    let base =
        Presentation2::from_parts(&["b"], &[("s", "b", "b")], vec![cell], vec![relation])
            .unwrap();
    let fiber = fixtures::point_presentation();
    let total = Presentation2::from_parts(
        &["e"],
        &[("l", "e", "e")],
        vec![Gen2Data {
            id: "d".to_string(),
            src: Word::path("e", &["l"]),
            dst: Word::path("e", &["l"]),
        }],
        vec![],
    )
    .unwrap();
    let incl = PresentationMap::build(&fiber, &total, &[("pt", "e")], &[], &[]).unwrap();
    let z2 = fixtures::cyclic2();
    let cell_nat = strata_core::fincat::NatTransData {
        components: vec![if twist { 1 } else { 0 }],
    };
    let rep = TwoRep {
        at: vec![z2.clone()],
        along1: vec![identity_functor(&z2)],
        along2: vec![cell_nat],
    };
    let transport = TransportDatum {
        t: PresentationMap::identity(&fiber),
        paths: vec![Word::path("e", &["l"])],
        squares: vec![],
    };
    let homotopy = HomotopyDatum {
        beta: vec![Word::id("pt")],
        fillers: vec![Pasting {
            source: Word::path("e", &["l"]),
            steps: vec![PastingStep {
                left: Word::id("e"),
                cell: "d".to_string(),
                inverted: false,
                right: Word::id("e"),
            }],
        }],
    };
    let bundle = BundleDatum {
        base,
        total,
        fibers: vec![fiber],
        inclusions: vec![incl],
        transports: vec![transport],
        homotopies: vec![homotopy],
        composites: std::collections::BTreeMap::new(),
    };
    (bundle, rep)
}

#[test]
fn pushforward_validates_base_relations() {
    let caps = Caps::default();

    // Honest homotopy: the pushed cell is the identity and the relation
    // holds.
    let (bundle, rep) = relation_probe_bundle(false);
    assert!(validate_bundle(&bundle).is_empty());
    assert!(validate_two_rep(&bundle.total, &rep).is_empty());
    let pushed = pushforward_rep(&bundle, &rep, &caps).unwrap();
    assert!(validate_two_rep(&bundle.base, &pushed.rep).is_empty());

    // Twisted homotopy: the pushed cell is the nontrivial deck element, the
    // base relation fails, and the violation names it.
    let (bundle, rep) = relation_probe_bundle(true);
    assert!(validate_two_rep(&bundle.total, &rep).is_empty());
    let err = pushforward_rep(&bundle, &rep, &caps);
    match err {
        Err(Error::BundleIncoherent(msg)) => assert!(msg.contains("`r`"), "witness: {msg}"),
        other => panic!("expected a bundle incoherence, got {other:?}"),
    }
}

/// Double cover with a contractible total space: the composite of the deck
/// transport with itself is homotopic to the identity transport, via an
/// explicit composite datum.
fn composite_cover_bundle() -> (BundleDatum, TwoRep) {
    let base = fixtures::circle_presentation();
    let fiber = fixtures::two_point_presentation();
    let total = Presentation2::from_parts(
        &["e0", "e1"],
        &[("g0", "e0", "e1"), ("g1", "e1", "e0")],
        vec![
            Gen2Data {
                id: "z0".to_string(),
                src: Word::path("e0", &["g0", "g1"]),
                dst: Word::id("e0"),
            },
            Gen2Data {
                id: "z1".to_string(),
                src: Word::path("e1", &["g1", "g0"]),
                dst: Word::id("e1"),
            },
        ],
        vec![],
    )
    .unwrap();
    let incl =
        PresentationMap::build(&fiber, &total, &[("x0", "e0"), ("x1", "e1")], &[], &[]).unwrap();
    let deck =
        PresentationMap::build(&fiber, &fiber, &[("x0", "x1"), ("x1", "x0")], &[], &[]).unwrap();
    let c = fixtures::iso_pair();
    let t = swap2(&c);
    // ev(g0·g1) = swap, and the collapse cells compare it with the identity.
    let v_idx = c.morphism_index("v").unwrap();
    let u_idx = c.morphism_index("u").unwrap();
    let collapse = strata_core::fincat::NatTransData { components: vec![v_idx, u_idx] };
    let rep = TwoRep {
        at: vec![c.clone(), c.clone()],
        along1: vec![t.clone(), identity_functor(&c)],
        along2: vec![collapse.clone(), collapse],
    };
    let transport = TransportDatum {
        t: deck,
        paths: vec![Word::path("e0", &["g0"]), Word::path("e1", &["g1"])],
        squares: vec![],
    };
    let composite = CompositeDatum {
        transport: TransportDatum {
            t: PresentationMap::identity(&fiber),
            paths: vec![Word::id("e0"), Word::id("e1")],
            squares: vec![],
        },
        comparison: HomotopyDatum {
            beta: vec![Word::id("x0"), Word::id("x1")],
            fillers: vec![
                Pasting {
                    source: Word::path("e0", &["g0", "g1"]),
                    steps: vec![PastingStep {
                        left: Word::id("e0"),
                        cell: "z0".to_string(),
                        inverted: false,
                        right: Word::id("e0"),
                    }],
                },
                Pasting {
                    source: Word::path("e1", &["g1", "g0"]),
                    steps: vec![PastingStep {
                        left: Word::id("e1"),
                        cell: "z1".to_string(),
                        inverted: false,
                        right: Word::id("e1"),
                    }],
                },
            ],
        },
    };
    let mut composites = std::collections::BTreeMap::new();
    composites.insert((0usize, 0usize), composite);
    let bundle = BundleDatum {
        base,
        total,
        fibers: vec![fiber],
        inclusions: vec![incl],
        transports: vec![transport],
        homotopies: vec![],
        composites,
    };
    (bundle, rep)
}

#[test]
fn composite_transport_matches_the_concatenated_datum() {
    let caps = Caps::default();
    let (bundle, rep) = composite_cover_bundle();
    assert!(validate_bundle(&bundle).is_empty());
    assert!(validate_two_rep(&bundle.total, &rep).is_empty());
    let sections = vec![fiber_sections(&bundle, &rep, 0, &caps).unwrap()];

    // The declared composite is certified isomorphic to the fold.
    let nat = composite_comparison(&bundle, &rep, (0, 0), &sections).unwrap();
    let sc = &sections[0];
    let fold =
        word_transport(&bundle, &rep, &Word::path("b", &["s", "s"]), &sections).unwrap();
    let override_t =
        datum_transport(&bundle, &rep, 0, 0, &bundle.composites[&(0, 0)].transport, sc, sc)
            .unwrap();
    assert!(
        validate_nat(&sc.cat, &sc.cat, &fold.table, &override_t.table, &nat, true).is_empty()
    );
    assert_eq!(override_t.table, identity_functor(&sc.cat));

    // Without a stored composite the comparison is the identity on the fold.
    let mut plain = bundle.clone();
    plain.composites.clear();
    let nat = composite_comparison(&plain, &rep, (0, 0), &sections).unwrap();
    for (i, &comp) in nat.components.iter().enumerate() {
        assert_eq!(comp, sc.cat.identity(fold.table.on_obj[i]));
    }
}

#[test]
fn identity_bundle_pushforward_is_the_identity() {
    let caps = Caps::default();
    let base = fixtures::circle_presentation();
    let fiber = fixtures::point_presentation();
    let total = fixtures::circle_presentation();
    let incl = PresentationMap::build(&fiber, &total, &[("pt", "b")], &[], &[]).unwrap();
    let c = fixtures::iso_pair();
    let t = swap2(&c);
    let rep = TwoRep { at: vec![c.clone()], along1: vec![t.clone()], along2: vec![] };
    let bundle = BundleDatum {
        base,
        total,
        fibers: vec![fiber],
        inclusions: vec![incl],
        transports: vec![TransportDatum {
            t: PresentationMap::identity(&fixtures::point_presentation()),
            paths: vec![Word::path("b", &["s"])],
            squares: vec![],
        }],
        homotopies: vec![],
        composites: std::collections::BTreeMap::new(),
    };
    assert!(validate_bundle(&bundle).is_empty());
    let pushed = pushforward_rep(&bundle, &rep, &caps).unwrap();

    // The stalk projection carries the pushed representation back to the
    // original one, on the nose.
    let pi = stalk_projection(&pushed.sections[0], 0);
    assert!(is_equivalence(&pushed.rep.at[0], &c, &pi, &caps, false).unwrap().is_equivalence());
    assert_eq!(then_functor(&pushed.rep.along1[0], &pi), then_functor(&pi, &t));
}

#[test]
fn section_categories_serialize_deterministically() {
    let caps = Caps::default();
    let p = fixtures::circle_presentation();
    let c = fixtures::iso_pair();
    let rep = TwoRep { at: vec![c.clone()], along1: vec![swap2(&c)], along2: vec![] };
    let a = serde_json::to_string(&global_sections_nu(&p, &rep, &caps).unwrap()).unwrap();
    let b = serde_json::to_string(&global_sections_nu(&p, &rep, &caps).unwrap()).unwrap();
    assert_eq!(a, b);

    let (bundle, rep) = double_cover_bundle();
    let a = serde_json::to_string(&pushforward_rep(&bundle, &rep, &caps).unwrap()).unwrap();
    let b = serde_json::to_string(&pushforward_rep(&bundle, &rep, &caps).unwrap()).unwrap();
    assert_eq!(a, b);
}
