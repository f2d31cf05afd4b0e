//! The gluing functor: reassembling a stack from level data.
//!
//! A gluing datum spreads out into a 𝔍-shaped diagram of pushforward stacks
//! on the ambient poset — one value per chain, one transport per chain
//! inclusion, one coherence cell per composable pair of inclusions. Gluing
//! descends that diagram pointwise: at each base element the fiber is the
//! descent category of the 𝔍-indexed pseudofunctor of fiber tables, with
//! families enumerated in a normalized form (unit legs are identities, so
//! the only free data are the level sections and one comparison per level
//! pair) and completed by cocycle propagation. The fibers assemble into a
//! strict stack because every transport of pushforward stacks commutes with
//! every other on the nose.
//!
//! [`roundtrip_counit`] and [`roundtrip_unit`] certify that gluing is
//! inverse to restriction: the counit compares each level stack with the
//! glued stack seen from that level, the unit compares an ambient stack
//! with the gluing of its own restriction. Both directions are mediated by
//! explicit cones whose comparison cells are read off the datum, so a datum
//! that fails its coherence conditions is reported, not silently glued.

use std::collections::BTreeMap;

use crate::error::{Caps, Error, Result};
use crate::fincat::{
    identity_functor, identity_nat, inverse_nat, is_equivalence, isomorphic_to_identity,
    then_functor, FinCat, FunctorData, NatTransData,
};
use crate::posetstack::{
    poset_as_category, pullback_modification, pullback_transformation, pushforward_modification,
    pushforward_transformation, sub_unit, unit_eta, unit_naturality, PosetStack, Pushforward,
    SubUnit, Unit,
};
use crate::pseudo::{
    complete_family, compose_transformations, descent_category_on, descent_projection,
    induced_on_descent, mediator, validate_pseudo_transformation, Completion, Cone, DescentCat,
    DescentFamily, Modification, PseudoFunctor, PseudoTransformation,
};

use super::{
    build_index_J, morphism_cell, morphism_cell_routes, Ctx, GluingDatum, GluingMorphism, IndexJ,
};

/// How one 𝔍-morphism transports, read off the chain shapes of its
/// endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ArrowKind {
    Identity,
    /// `[k] → [k, l]`: the pushed comparison `i_{k*}F_kl`.
    Comparison(usize, usize),
    /// `[l] → [k, l]`: the unit mediator `η_k` at `i_{l*}𝔠_l`.
    UnitPair(usize, usize),
    /// `[k, l] → [k, l, m]`: the pushed transported comparison
    /// `i_{k*}i_{kl}F_lm`.
    Transported(usize, usize, usize),
    /// `[k, m] → [k, l, m]`: the pushed unit insertion `i_{k*}μ_klm`.
    Insertion(usize, usize, usize),
    /// `[l, m] → [k, l, m]`: the unit mediator `η_k` at the pair value.
    UnitTriple(usize, usize, usize),
    /// `[a] → [k, l, m]`: composite of two generators.
    Composite,
}

fn arrow_kind(index: &IndexJ, s: usize) -> ArrowKind {
    let (o1, o2) = (index.cat.src(s), index.cat.dst(s));
    if o1 == o2 {
        return ArrowKind::Identity;
    }
    match (index.chains[o1].as_slice(), index.chains[o2].as_slice()) {
        ([k], [k2, l]) if k == k2 => ArrowKind::Comparison(*k, *l),
        ([l], [k, l2]) if l == l2 => ArrowKind::UnitPair(*k, *l),
        ([k, l], [k2, l2, m]) if k == k2 && l == l2 => ArrowKind::Transported(*k, *l, *m),
        ([k, m], [k2, l, m2]) if k == k2 && m == m2 => ArrowKind::Insertion(*k, *l, *m),
        ([l, m], [k, l2, m2]) if l == l2 && m == m2 => ArrowKind::UnitTriple(*k, *l, *m),
        _ => ArrowKind::Composite,
    }
}

/// The canonical two-generator factorization of a singleton-to-triple
/// inclusion: through `[l, m]` when the singleton is the middle level,
/// through `[k, m]` otherwise.
fn canonical_mid(index: &IndexJ, o1: usize, o2: usize) -> (usize, usize, usize) {
    let a = index.chains[o1][0];
    let c = &index.chains[o2];
    let mid_chain = if a == c[1] { vec![c[1], c[2]] } else { vec![c[0], c[2]] };
    let mid = index.object_of(&mid_chain).expect("sub-chains are objects");
    let s1 = index.arrow(o1, mid).expect("chain inclusions are arrows");
    let s2 = index.arrow(mid, o2).expect("chain inclusions are arrows");
    (mid, s1, s2)
}

/// The 𝔍-shaped diagram of pushforward stacks extracted from a gluing
/// datum. All pieces live on the ambient poset; `at[u]` packages the fiber
/// tables over one base element as a pseudofunctor on 𝔍, which is what the
/// pointwise descent in [`glue_fiber`] consumes.
#[derive(Debug, Clone)]
pub struct Diagram {
    pub index: IndexJ,
    /// Per 𝔍-object: the pushforward bundle whose stack is the chain value.
    pub values: Vec<Pushforward>,
    /// Per 𝔍-morphism: the transport between the chain values.
    pub arrows: Vec<PseudoTransformation>,
    /// Per composable pair `(s₁, s₂)` of 𝔍-morphisms: the cell comparing
    /// the composite transport with the two-step pasting.
    pub cells: BTreeMap<(usize, usize), Modification>,
    /// Per base element: the fiber tables as a pseudofunctor on 𝔍.
    pub at: Vec<PseudoFunctor>,
    /// Which composable pair absorbed the datum's coherence cell, per level
    /// triple. Every other pair pastes to the composite on the nose.
    pub f_backed: BTreeMap<(usize, usize, usize), (usize, usize)>,
}

/// Spreads a gluing datum into its 𝔍-shaped diagram and validates the
/// resulting fiber pseudofunctors at every base element.
pub fn build_diagram(d: &GluingDatum, caps: &Caps) -> Result<Diagram> {
    let ctx = Ctx::new(&d.base, &d.levels, caps)?;
    build_diagram_in(&ctx, d)
}

pub(crate) fn build_diagram_in(ctx: &Ctx<'_>, d: &GluingDatum) -> Result<Diagram> {
    let n = d.levels.len();
    if n == 0 {
        return Err(Error::Invalid("gluing datum with no levels".to_string()));
    }
    let index = build_index_J(n - 1);
    let jcat = index.cat.clone();

    let values: Vec<Pushforward> = index
        .chains
        .iter()
        .map(|ch| match *ch.as_slice() {
            [k] => ctx.push_level[k].clone(),
            [k, l] => ctx.pair_unit[&(k, l)].pushforward.clone(),
            [k, l, m] => ctx.triple_unit[&(k, l, m)].pushforward.clone(),
            _ => unreachable!("chains have one, two or three levels"),
        })
        .collect();

    // Generators first; composites paste through their canonical middle.
    let mut arrows: Vec<Option<PseudoTransformation>> = vec![None; jcat.morphism_count()];
    for s in jcat.morphisms() {
        arrows[s] = match arrow_kind(&index, s) {
            ArrowKind::Identity => {
                Some(PseudoTransformation::identity(&values[jcat.src(s)].stack.pf))
            }
            ArrowKind::Comparison(k, l) => Some(ctx.comparison_pushed(d, k, l)?),
            ArrowKind::UnitPair(k, l) => Some(ctx.pair_unit[&(k, l)].eta.clone()),
            ArrowKind::Transported(k, l, m) => Some(ctx.transported_pushed(d, k, l, m)?),
            ArrowKind::Insertion(k, l, m) => Some(ctx.mu_pushed(k, l, m)?),
            ArrowKind::UnitTriple(k, l, m) => Some(ctx.triple_unit[&(k, l, m)].eta.clone()),
            ArrowKind::Composite => None,
        };
    }
    for s in jcat.morphisms() {
        if arrows[s].is_some() {
            continue;
        }
        let (o1, o2) = (jcat.src(s), jcat.dst(s));
        let (mid, s1, s2) = canonical_mid(&index, o1, o2);
        let t = compose_transformations(
            &values[o1].stack.pf,
            &values[mid].stack.pf,
            &values[o2].stack.pf,
            arrows[s1].as_ref().expect("generators are built first"),
            arrows[s2].as_ref().expect("generators are built first"),
        )?;
        arrows[s] = Some(t);
    }
    let arrows: Vec<PseudoTransformation> =
        arrows.into_iter().map(|t| t.expect("every inclusion is covered")).collect();

    let mut cells = BTreeMap::new();
    let mut f_backed = BTreeMap::new();
    for s1 in jcat.morphisms() {
        for s2 in jcat.morphisms() {
            if jcat.dst(s1) != jcat.src(s2) {
                continue;
            }
            let composite = jcat.then(s1, s2).expect("chain inclusions compose");
            let o3 = jcat.dst(s2);
            let pasted = compose_transformations(
                &values[jcat.src(s1)].stack.pf,
                &values[jcat.dst(s1)].stack.pf,
                &values[o3].stack.pf,
                &arrows[s1],
                &arrows[s2],
            )?;
            let cell = match (arrow_kind(&index, s1), arrow_kind(&index, s2)) {
                (ArrowKind::Comparison(k, l), ArrowKind::Transported(k2, l2, m))
                    if k == k2 && l == l2 =>
                {
                    // The one pasting that differs from the composite: the
                    // factored route, compared by the pushed coherence cell.
                    let pushed_direct = pushforward_transformation(
                        &ctx.levels[k],
                        &ctx.push_level[k],
                        &ctx.triple_unit[&(k, l, m)].pushforward,
                        &ctx.route_direct(d, k, l, m)?,
                    )?;
                    let pushed_factored = pushforward_transformation(
                        &ctx.levels[k],
                        &ctx.push_level[k],
                        &ctx.triple_unit[&(k, l, m)].pushforward,
                        &ctx.route_factored(d, k, l, m)?,
                    )?;
                    if pushed_direct != arrows[composite] || pushed_factored != pasted {
                        return Err(Error::Invalid(format!(
                            "routes through levels ({k}, {l}, {m}) do not match their transports"
                        )));
                    }
                    f_backed.insert((k, l, m), (s1, s2));
                    pushforward_modification(
                        &ctx.push_level[k],
                        &ctx.triple_unit[&(k, l, m)].pushforward,
                        &ctx.coherence(d, k, l, m)?,
                        &pushed_direct,
                        &pushed_factored,
                    )?
                }
                _ => {
                    if pasted != arrows[composite] {
                        return Err(Error::Invalid(format!(
                            "transport along `{}` then `{}` does not match the composite",
                            jcat.morphism_id(s1),
                            jcat.morphism_id(s2),
                        )));
                    }
                    Modification::identity(&values[o3].stack.pf, &pasted)
                }
            };
            cells.insert((s1, s2), cell);
        }
    }

    let mut at = Vec::with_capacity(d.base.element_count());
    for u in d.base.elements() {
        let unit_iso = (0..jcat.object_count())
            .map(|o| {
                let cat = &values[o].stack.pf.at[u];
                NatTransData { components: cat.objects().map(|x| cat.identity(x)).collect() }
            })
            .collect();
        let pf = PseudoFunctor {
            shape: jcat.clone(),
            at: values.iter().map(|v| v.stack.pf.at[u].clone()).collect(),
            along: arrows.iter().map(|t| t.component[u].clone()).collect(),
            comp_iso: cells.iter().map(|(&key, cell)| (key, cell.at[u].clone())).collect(),
            unit_iso,
        };
        if let Some(v) = pf.validate().first() {
            return Err(Error::Invalid(format!(
                "assembled diagram is incoherent at `{}`: {v}",
                d.base.element_id(u)
            )));
        }
        at.push(pf);
    }

    Ok(Diagram { index, values, arrows, cells, at, f_backed })
}

/// One glued object in reduced coordinates: the section chosen at each
/// level and the comparison chosen over each level pair. The unit legs are
/// normalized to identities, so this is the complete description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedFamily {
    pub sections: Vec<usize>,
    pub comparisons: BTreeMap<(usize, usize), usize>,
}

/// A glued stack together with the diagram it was descended from, the
/// pointwise descent categories, and the reduced form of every family.
#[derive(Debug, Clone)]
pub struct Glued {
    pub diagram: Diagram,
    pub stack: PosetStack,
    pub fibers: Vec<DescentCat>,
    pub reduced: Vec<Vec<ReducedFamily>>,
}

/// Advances a mixed-radix odometer; returns `false` after the last tuple.
fn advance(digits: &mut [usize], sizes: &[usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < sizes[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Descends the diagram at one base element.
///
/// Families are enumerated in normalized form — lexicographic over level
/// sections, then over comparison choices for each singleton-to-pair
/// inclusion — and every seed tuple is completed by cocycle propagation.
/// Distinct seeds complete to distinct families, so the result is already
/// canonical; it spans a full subcategory of unrestricted descent that the
/// projection legs exhibit as an equivalence.
pub fn glue_fiber(
    diagram: &Diagram,
    u: usize,
    caps: &Caps,
) -> Result<(DescentCat, Vec<ReducedFamily>)> {
    let index = &diagram.index;
    let jcat = &index.cat;
    let pf = &diagram.at[u];
    let mut budget = caps.budget();

    let n_levels = index.chains.iter().filter(|c| c.len() == 1).count();
    let singles: Vec<usize> = (0..n_levels)
        .map(|k| index.object_of(&[k]).expect("singleton chains are objects"))
        .collect();
    let f_arrows: Vec<(usize, usize, usize)> = jcat
        .morphisms()
        .filter_map(|s| match arrow_kind(index, s) {
            ArrowKind::Comparison(k, l) => Some((s, k, l)),
            _ => None,
        })
        .collect();

    let mut families: Vec<DescentFamily> = Vec::new();
    let mut reduced: Vec<ReducedFamily> = Vec::new();

    let sizes: Vec<usize> = singles.iter().map(|&o| pf.at[o].object_count()).collect();
    let mut sections = vec![0usize; n_levels];
    let mut more = sizes.iter().all(|&z| z > 0);
    while more {
        // Normalize: longer chains carry the unit-mediator image of their
        // tail, so the unit legs become identity comparisons.
        let mut x = vec![usize::MAX; jcat.object_count()];
        for (k, &o) in singles.iter().enumerate() {
            x[o] = sections[k];
        }
        for len in [2usize, 3] {
            for (o, ch) in index.chains.iter().enumerate() {
                if ch.len() != len {
                    continue;
                }
                let inner = index.object_of(&ch[1..]).expect("tails are objects");
                let eta = index.arrow(inner, o).expect("tail inclusions are arrows");
                x[o] = pf.along[eta].on_obj[x[inner]];
            }
        }

        let mut seeds: BTreeMap<usize, usize> = BTreeMap::new();
        for s in jcat.morphisms() {
            if matches!(arrow_kind(index, s), ArrowKind::UnitPair(..) | ArrowKind::UnitTriple(..))
            {
                seeds.insert(s, pf.at[jcat.dst(s)].identity(x[jcat.dst(s)]));
            }
        }

        let choice_sets: Vec<Vec<usize>> = f_arrows
            .iter()
            .map(|&(s, _, _)| {
                let (o1, o2) = (jcat.src(s), jcat.dst(s));
                pf.at[o2].isos(pf.along[s].on_obj[x[o1]], x[o2])
            })
            .collect();
        if choice_sets.iter().all(|c| !c.is_empty()) {
            let choice_sizes: Vec<usize> = choice_sets.iter().map(|c| c.len()).collect();
            let mut choice = vec![0usize; f_arrows.len()];
            loop {
                budget.tick()?;
                let mut seeded = seeds.clone();
                let mut comparisons = BTreeMap::new();
                for (i, &(s, k, l)) in f_arrows.iter().enumerate() {
                    let g = choice_sets[i][choice[i]];
                    seeded.insert(s, g);
                    comparisons.insert((k, l), g);
                }
                match complete_family(pf, &x, &seeded)? {
                    Completion::Family(f) => {
                        families.push(f);
                        reduced.push(ReducedFamily { sections: sections.clone(), comparisons });
                    }
                    Completion::Inconsistent { .. } => {}
                    Completion::Underdetermined { mor } => {
                        return Err(Error::Invalid(format!(
                            "seeded completion stalled at `{}`",
                            jcat.morphism_id(mor)
                        )));
                    }
                }
                if !advance(&mut choice, &choice_sizes) {
                    break;
                }
            }
        }
        more = advance(&mut sections, &sizes);
    }

    let dc = descent_category_on(pf, families, caps)?;
    Ok((dc, reduced))
}

/// Assembles pointwise fibers into the glued stack. The transition over a
/// base pair is induced on descent by the diagram's own transports, whose
/// squares are inverted to match the descent orientation; the result is
/// strict because transports of pushforward stacks compose on the nose.
pub fn glue_assemble(
    diagram: Diagram,
    parts: Vec<(DescentCat, Vec<ReducedFamily>)>,
    caps: &Caps,
) -> Result<Glued> {
    let base = diagram.values[0].stack.base.clone();
    if parts.len() != base.element_count() {
        return Err(Error::ShapeMismatch(format!(
            "{} glued fibers for {} base elements",
            parts.len(),
            base.element_count()
        )));
    }
    let (fibers, reduced): (Vec<DescentCat>, Vec<Vec<ReducedFamily>>) =
        parts.into_iter().unzip();

    let shape = poset_as_category(&base);
    let mut along = Vec::with_capacity(base.pair_count());
    for s in 0..base.pair_count() {
        let (u, v) = base.pair(s);
        if u == v {
            along.push(identity_functor(&fibers[u].cat));
            continue;
        }
        let phi = transition_transformation(&diagram, &base, s, u, v)?;
        along.push(induced_on_descent(
            &diagram.at[u],
            &diagram.at[v],
            &phi,
            &fibers[u],
            &fibers[v],
        )?);
    }
    let at: Vec<FinCat> = fibers.iter().map(|f| f.cat.clone()).collect();
    let pf = PseudoFunctor::strict(shape, at, along)?;
    caps.admit_category(pf.shape.object_count(), pf.shape.morphism_count())?;
    let stack = PosetStack { base, pf };
    Ok(Glued { diagram, stack, fibers, reduced })
}

/// The diagram-level transformation over one base pair: components are the
/// bundle transitions, squares invert the transports' squares.
fn transition_transformation(
    diagram: &Diagram,
    base: &crate::posetstack::StratPoset,
    s: usize,
    u: usize,
    v: usize,
) -> Result<PseudoTransformation> {
    let jcat = &diagram.index.cat;
    let component: Vec<FunctorData> =
        (0..jcat.object_count()).map(|o| diagram.values[o].stack.pf.along[s].clone()).collect();
    let square: Vec<NatTransData> = jcat
        .morphisms()
        .map(|sj| {
            let o2 = jcat.dst(sj);
            inverse_nat(&diagram.values[o2].stack.pf.at[v], &diagram.arrows[sj].square[s])
                .ok_or_else(|| {
                    Error::Invalid(format!(
                        "transport square along `{}` is not invertible",
                        jcat.morphism_id(sj)
                    ))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let phi = PseudoTransformation { component, square };
    if let Some(v_err) = validate_pseudo_transformation(&diagram.at[u], &diagram.at[v], &phi)
        .first()
    {
        return Err(Error::Invalid(format!(
            "glued transition from `{}` to `{}` is incoherent: {v_err}",
            base.element_id(u),
            base.element_id(v)
        )));
    }
    Ok(phi)
}

/// Glues a datum into a stack on the ambient poset.
#[allow(non_snake_case)]
pub fn glue_G(d: &GluingDatum, caps: &Caps) -> Result<Glued> {
    let ctx = Ctx::new(&d.base, &d.levels, caps)?;
    glue_in(&ctx, d, caps)
}

pub(crate) fn glue_in(ctx: &Ctx<'_>, d: &GluingDatum, caps: &Caps) -> Result<Glued> {
    let diagram = build_diagram_in(ctx, d)?;
    let parts = d
        .base
        .elements()
        .map(|u| glue_fiber(&diagram, u, caps))
        .collect::<Result<Vec<_>>>()?;
    glue_assemble(diagram, parts, caps)
}

/// Glues a 1-morphism of gluing data into a transformation between the
/// glued stacks. The diagram-level maps are the pushed level maps with the
/// morphism's own cells as squares over the comparison inclusions; the
/// glued squares are identities because induced functors on descent
/// commute with the glued transitions on the nose.
pub fn glue_morphism(
    src: &GluingDatum,
    dst: &GluingDatum,
    gm: &GluingMorphism,
    src_glued: &Glued,
    dst_glued: &Glued,
    caps: &Caps,
) -> Result<PseudoTransformation> {
    let sctx = Ctx::new(&src.base, &src.levels, caps)?;
    let dctx = Ctx::new(&dst.base, &dst.levels, caps)?;
    let index = &src_glued.diagram.index;
    let jcat = &index.cat;
    if dst_glued.diagram.index.cat != index.cat {
        return Err(Error::ShapeMismatch(
            "glued morphism between diagrams of different shapes".to_string(),
        ));
    }
    let n = src.levels.len();
    if gm.levels.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "level-mismatch: {} level maps for {} levels",
            gm.levels.len(),
            n
        )));
    }

    // Ambient transformation per chain: pushed level maps, transported
    // through the same unit layers as the chain values themselves.
    let mut singleton_maps: Vec<Option<PseudoTransformation>> = vec![None; n];
    for k in 0..n {
        singleton_maps[k] = Some(pushforward_transformation(
            &sctx.levels[k],
            &sctx.push_level[k],
            &dctx.push_level[k],
            &gm.levels[k],
        )?);
    }
    let mut pair_maps: BTreeMap<(usize, usize), PseudoTransformation> = BTreeMap::new();
    for k in 0..n {
        for l in k + 1..n {
            let inner = singleton_maps[l].as_ref().expect("level maps are built");
            let pulled = pullback_transformation(&sctx.subs[k], &sctx.incls[k], sctx.base, inner);
            pair_maps.insert(
                (k, l),
                pushforward_transformation(
                    sctx.pair_stack(k, l),
                    &sctx.pair_unit[&(k, l)].pushforward,
                    &dctx.pair_unit[&(k, l)].pushforward,
                    &pulled,
                )?,
            );
        }
    }
    let mut triple_maps: BTreeMap<(usize, usize, usize), PseudoTransformation> = BTreeMap::new();
    for k in 0..n {
        for l in k + 1..n {
            for m in l + 1..n {
                let inner = &pair_maps[&(l, m)];
                let pulled =
                    pullback_transformation(&sctx.subs[k], &sctx.incls[k], sctx.base, inner);
                triple_maps.insert(
                    (k, l, m),
                    pushforward_transformation(
                        sctx.triple_stack(k, l, m),
                        &sctx.triple_unit[&(k, l, m)].pushforward,
                        &dctx.triple_unit[&(k, l, m)].pushforward,
                        &pulled,
                    )?,
                );
            }
        }
    }
    let chain_map = |o: usize| -> &PseudoTransformation {
        match *index.chains[o].as_slice() {
            [k] => singleton_maps[k].as_ref().expect("level maps are built"),
            [k, l] => &pair_maps[&(k, l)],
            [k, l, m] => &triple_maps[&(k, l, m)],
            _ => unreachable!("chains have one, two or three levels"),
        }
    };

    // Squares over the comparison inclusions come from the morphism cells,
    // pushed and transported like the transports they sit between.
    let mut comparison_cells: BTreeMap<(usize, usize), Modification> = BTreeMap::new();
    for k in 0..n {
        for l in k + 1..n {
            let cell = morphism_cell(&sctx, &dctx, src, dst, gm, k, l, caps)?;
            let (lhs, rhs) = morphism_cell_routes(&sctx, &dctx, src, dst, gm, k, l, caps)?;
            let pushed_lhs = pushforward_transformation(
                &sctx.levels[k],
                &sctx.push_level[k],
                &dctx.pair_unit[&(k, l)].pushforward,
                &lhs,
            )?;
            let pushed_rhs = pushforward_transformation(
                &sctx.levels[k],
                &sctx.push_level[k],
                &dctx.pair_unit[&(k, l)].pushforward,
                &rhs,
            )?;
            comparison_cells.insert(
                (k, l),
                pushforward_modification(
                    &sctx.push_level[k],
                    &dctx.pair_unit[&(k, l)].pushforward,
                    &cell,
                    &pushed_lhs,
                    &pushed_rhs,
                )?,
            );
        }
    }
    let mut transported_cells: BTreeMap<(usize, usize, usize), Modification> = BTreeMap::new();
    for k in 0..n {
        for l in k + 1..n {
            for m in l + 1..n {
                let cell = morphism_cell(&sctx, &dctx, src, dst, gm, l, m, caps)?;
                let (lhs, rhs) = morphism_cell_routes(&sctx, &dctx, src, dst, gm, l, m, caps)?;
                let pushed_lhs = pushforward_transformation(
                    &sctx.levels[l],
                    &sctx.push_level[l],
                    &dctx.pair_unit[&(l, m)].pushforward,
                    &lhs,
                )?;
                let pushed_rhs = pushforward_transformation(
                    &sctx.levels[l],
                    &sctx.push_level[l],
                    &dctx.pair_unit[&(l, m)].pushforward,
                    &rhs,
                )?;
                let pushed = pushforward_modification(
                    &sctx.push_level[l],
                    &dctx.pair_unit[&(l, m)].pushforward,
                    &cell,
                    &pushed_lhs,
                    &pushed_rhs,
                )?;
                let pulled = pullback_modification(&sctx.subs[k], &sctx.incls[k], &pushed);
                let pulled_lhs =
                    pullback_transformation(&sctx.subs[k], &sctx.incls[k], sctx.base, &pushed_lhs);
                let pulled_rhs =
                    pullback_transformation(&sctx.subs[k], &sctx.incls[k], sctx.base, &pushed_rhs);
                let pushed_lhs_k = pushforward_transformation(
                    sctx.pair_stack(k, l),
                    &sctx.pair_unit[&(k, l)].pushforward,
                    &dctx.triple_unit[&(k, l, m)].pushforward,
                    &pulled_lhs,
                )?;
                let pushed_rhs_k = pushforward_transformation(
                    sctx.pair_stack(k, l),
                    &sctx.pair_unit[&(k, l)].pushforward,
                    &dctx.triple_unit[&(k, l, m)].pushforward,
                    &pulled_rhs,
                )?;
                transported_cells.insert(
                    (k, l, m),
                    pushforward_modification(
                        &sctx.pair_unit[&(k, l)].pushforward,
                        &dctx.triple_unit[&(k, l, m)].pushforward,
                        &pulled,
                        &pushed_lhs_k,
                        &pushed_rhs_k,
                    )?,
                );
            }
        }
    }

    let base = &src.base;
    let mut component = Vec::with_capacity(base.element_count());
    for u in base.elements() {
        let d_u = &src_glued.diagram.at[u];
        let e_u = &dst_glued.diagram.at[u];
        let comp_u: Vec<FunctorData> =
            (0..jcat.object_count()).map(|o| chain_map(o).component[u].clone()).collect();

        let mut squares: Vec<Option<NatTransData>> = vec![None; jcat.morphism_count()];
        for sj in jcat.morphisms() {
            let (o1, o2) = (jcat.src(sj), jcat.dst(sj));
            squares[sj] = match arrow_kind(index, sj) {
                ArrowKind::Composite => None,
                ArrowKind::Comparison(k, l) => {
                    Some(comparison_cells[&(k, l)].at[u].clone())
                }
                ArrowKind::Transported(k, l, m) => {
                    Some(transported_cells[&(k, l, m)].at[u].clone())
                }
                // Identity, unit and insertion transports commute with the
                // pushed level maps on the nose.
                _ => {
                    let cat = &e_u.at[o2];
                    let components = d_u.at[o1]
                        .objects()
                        .map(|x| cat.identity(e_u.along[sj].on_obj[comp_u[o1].on_obj[x]]))
                        .collect();
                    Some(NatTransData { components })
                }
            };
        }
        for sj in jcat.morphisms() {
            if squares[sj].is_some() {
                continue;
            }
            let (o1, o2) = (jcat.src(sj), jcat.dst(sj));
            let (_, s1, s2) = canonical_mid(index, o1, o2);
            let sq1 = squares[s1].clone().expect("generator squares are built");
            let sq2 = squares[s2].clone().expect("generator squares are built");
            let cat = &e_u.at[o2];
            let components = d_u.at[o1]
                .objects()
                .map(|x| {
                    cat.then(
                        e_u.along[s2].on_mor[sq1.components[x]],
                        sq2.components[d_u.along[s1].on_obj[x]],
                    )
                    .ok_or_else(|| {
                        Error::Invalid(format!(
                            "pasted square over `{}` does not compose",
                            jcat.morphism_id(sj)
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            squares[sj] = Some(NatTransData { components });
        }

        let phi = PseudoTransformation {
            component: comp_u,
            square: squares.into_iter().map(|s| s.expect("all squares built")).collect(),
        };
        if let Some(v) = validate_pseudo_transformation(d_u, e_u, &phi).first() {
            return Err(Error::Invalid(format!(
                "glued morphism is incoherent at `{}`: {v}",
                base.element_id(u)
            )));
        }
        component.push(induced_on_descent(
            d_u,
            e_u,
            &phi,
            &src_glued.fibers[u],
            &dst_glued.fibers[u],
        )?);
    }

    let square: Vec<NatTransData> = (0..base.pair_count())
        .map(|s| {
            let (u, v) = base.pair(s);
            identity_nat(
                &dst_glued.stack.pf.at[v],
                &then_functor(&component[u], &dst_glued.stack.pf.along[s]),
            )
        })
        .collect();
    let glued_map = PseudoTransformation { component, square };
    if let Some(v) =
        validate_pseudo_transformation(&src_glued.stack.pf, &dst_glued.stack.pf, &glued_map)
            .first()
    {
        return Err(Error::Invalid(format!("glued morphism is incoherent: {v}")));
    }
    Ok(glued_map)
}

/// The identity comparison for a cone leg square that commutes on the nose.
fn identity_leg_iso(
    pf: &PseudoFunctor,
    apex: &FinCat,
    legs: &[FunctorData],
    sj: usize,
) -> Result<NatTransData> {
    let (o1, o2) = (pf.shape.src(sj), pf.shape.dst(sj));
    let cat = &pf.at[o2];
    let components = apex
        .objects()
        .map(|c| {
            let lhs = legs[o2].on_obj[c];
            let rhs = pf.along[sj].on_obj[legs[o1].on_obj[c]];
            if lhs != rhs {
                return Err(Error::ConeIncoherent(format!(
                    "legs do not agree on the nose over `{}`",
                    pf.shape.morphism_id(sj)
                )));
            }
            Ok(cat.identity(lhs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NatTransData { components })
}

/// The comparison for a composite inclusion, pasted from its canonical
/// factors through the diagram's own composition cell.
fn pasted_leg_iso(
    pf: &PseudoFunctor,
    apex: &FinCat,
    legs: &[FunctorData],
    sj: usize,
    s1: usize,
    s2: usize,
    iso1: &NatTransData,
    iso2: &NatTransData,
) -> Result<NatTransData> {
    let o1 = pf.shape.src(sj);
    let o2 = pf.shape.dst(sj);
    let cat = &pf.at[o2];
    let components = apex
        .objects()
        .map(|c| {
            let comp = cat
                .inverse(pf.comp_iso[&(s1, s2)].components[legs[o1].on_obj[c]])
                .ok_or_else(|| {
                    Error::ConeIncoherent(format!(
                        "composition comparison over `{}` is not invertible",
                        pf.shape.morphism_id(sj)
                    ))
                })?;
            cat.then_chain(&[iso2.components[c], pf.along[s2].on_mor[iso1.components[c]], comp])
                .ok_or_else(|| {
                    Error::ConeIncoherent(format!(
                        "pasted comparison over `{}` does not compose at `{}`",
                        pf.shape.morphism_id(sj),
                        apex.object_id(c)
                    ))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NatTransData { components })
}

/// Builds legs over every chain from the singleton legs: longer chains
/// compose their tail's leg with the unit-mediator transport.
fn extend_legs(
    index: &IndexJ,
    pf: &PseudoFunctor,
    mut legs: Vec<Option<FunctorData>>,
) -> Vec<FunctorData> {
    for len in [2usize, 3] {
        for (o, ch) in index.chains.iter().enumerate() {
            if ch.len() != len {
                continue;
            }
            let inner = index.object_of(&ch[1..]).expect("tails are objects");
            let eta = index.arrow(inner, o).expect("tail inclusions are arrows");
            let leg =
                then_functor(legs[inner].as_ref().expect("shorter chains first"), &pf.along[eta]);
            legs[o] = Some(leg);
        }
    }
    legs.into_iter().map(|l| l.expect("every chain has a leg")).collect()
}

/// Round-trip result for `G∘R` at one element of one level.
#[derive(Debug, Clone)]
pub struct CounitPoint {
    pub element: String,
    /// The level value, sent into the glued fiber and projected back, is
    /// isomorphic to the identity on the level value.
    pub forward_then_back: bool,
    /// The other composite is isomorphic to the identity on the glued fiber.
    pub back_then_forward: bool,
}

/// Round-trip report for `G∘R` at one level: a point per element, plus the
/// mediator failures for elements whose comparison cone did not assemble.
#[derive(Debug, Clone)]
pub struct CounitLevelReport {
    pub level: usize,
    pub ok: bool,
    pub points: Vec<CounitPoint>,
    pub failures: Vec<String>,
}

/// Certifies that gluing a datum restricts back to its own levels: for
/// each level `j` and each level-`j` element, the glued fiber and the level
/// value are exchanged by an explicit functor pair whose composites are
/// isomorphic to identities.
///
/// Incoherent data fail inside the mediator cone — the comparison cells do
/// not satisfy the cocycle the cone demands — and are reported per element
/// in `failures` rather than certified.
pub fn roundtrip_counit(d: &GluingDatum, caps: &Caps) -> Result<Vec<CounitLevelReport>> {
    let ctx = Ctx::new(&d.base, &d.levels, caps)?;
    let glued = glue_in(&ctx, d, caps)?;
    let n = d.levels.len();
    let mut reports = Vec::with_capacity(n);
    for j in 0..n {
        let mut points = Vec::new();
        let mut failures = Vec::new();
        match sub_unit(&d.base, &ctx.members[j], &d.levels[j], caps) {
            Err(e) => failures.push(format!("level {j}: {e}")),
            Ok(upsilon) => {
                for (s_j, &s) in ctx.members[j].iter().enumerate() {
                    match counit_point(&ctx, d, &glued, &upsilon, j, s_j, s) {
                        Ok(p) => points.push(p),
                        Err(e) => failures.push(format!(
                            "level {j} cone at `{}`: {e}",
                            ctx.subs[j].element_id(s_j)
                        )),
                    }
                }
            }
        }
        let ok = failures.is_empty()
            && points.iter().all(|p| p.forward_then_back && p.back_then_forward);
        reports.push(CounitLevelReport { level: j, ok, points, failures });
    }
    Ok(reports)
}

/// One counit comparison: mediate the level value into the glued fiber
/// over its own element, project back, and test both composites.
fn counit_point(
    ctx: &Ctx<'_>,
    d: &GluingDatum,
    glued: &Glued,
    upsilon: &SubUnit,
    j: usize,
    s_j: usize,
    s: usize,
) -> Result<CounitPoint> {
    let index = &glued.diagram.index;
    let jcat = &index.cat;
    let pf = &glued.diagram.at[s];
    let apex = ctx.levels[j].value(s_j).clone();

    // Singleton legs: the sub-unit at the element's own level, the
    // comparison into higher levels, the unique map into the trivial fiber
    // below. Longer chains extend through the unit transports.
    let mut legs: Vec<Option<FunctorData>> = vec![None; jcat.object_count()];
    for (o, ch) in index.chains.iter().enumerate() {
        if ch.len() != 1 {
            continue;
        }
        let k = ch[0];
        legs[o] = Some(match k.cmp(&j) {
            std::cmp::Ordering::Less => {
                let cat = &pf.at[o];
                if cat.object_count() != 1 || cat.morphism_count() != 1 {
                    return Err(Error::ConeIncoherent(format!(
                        "fiber over the lower-level chain `{}` is not trivial",
                        jcat.object_id(o)
                    )));
                }
                FunctorData {
                    on_obj: vec![0; apex.object_count()],
                    on_mor: vec![0; apex.morphism_count()],
                }
            }
            std::cmp::Ordering::Equal => upsilon.upsilon.component[s_j].clone(),
            std::cmp::Ordering::Greater => ctx.comparison(d, j, k)?.component[s_j].clone(),
        });
    }
    let legs = extend_legs(index, pf, legs);

    let mut isos: Vec<Option<NatTransData>> = vec![None; jcat.morphism_count()];
    for sj in jcat.morphisms() {
        let iso = match arrow_kind(index, sj) {
            ArrowKind::Composite => continue,
            ArrowKind::Identity
            | ArrowKind::UnitPair(..)
            | ArrowKind::UnitTriple(..)
            | ArrowKind::Insertion(..) => identity_leg_iso(pf, &apex, &legs, sj)?,
            ArrowKind::Comparison(k, l) => {
                if k < j {
                    identity_leg_iso(pf, &apex, &legs, sj)?
                } else if k == j {
                    // The comparison's own squares over `s_j ≤ −` assemble
                    // into descent arrows of the pair bundle.
                    let f = ctx.comparison(d, j, l)?;
                    let bundle = &ctx.pair_unit[&(j, l)].pushforward;
                    let dc = &bundle.fibers[s];
                    let (o1, o2) = (jcat.src(sj), jcat.dst(sj));
                    let components = apex
                        .objects()
                        .map(|c| {
                            let src_fam = legs[o2].on_obj[c];
                            let dst_fam = pf.along[sj].on_obj[legs[o1].on_obj[c]];
                            let comps: Vec<usize> = bundle.up_sets[s]
                                .iter()
                                .map(|&pos| {
                                    let pair = ctx.subs[j]
                                        .pair_index(s_j, pos)
                                        .expect("up-set is above the element");
                                    f.square[pair].components[c]
                                })
                                .collect();
                            dc.arrow_index(src_fam, dst_fam, &comps).ok_or_else(|| {
                                Error::ConeIncoherent(format!(
                                    "comparison squares into level {l} do not assemble \
                                     to a descent arrow at `{}`",
                                    apex.object_id(c)
                                ))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    NatTransData { components }
                } else {
                    // Between two higher levels the coherence cell at this
                    // element is exactly the comparison the cone needs.
                    let cell = ctx.coherence(d, j, k, l)?;
                    NatTransData { components: cell.at[s_j].components[..apex.object_count()].to_vec() }
                }
            }
            ArrowKind::Transported(k, l, m) => {
                if k < j {
                    identity_leg_iso(pf, &apex, &legs, sj)?
                } else {
                    // The coherence over `(j, l, m)`, carried through the
                    // unit transport into the triple value.
                    let cell = ctx.coherence(d, j, l, m)?;
                    let inner = index.object_of(&[l, m]).expect("pairs are objects");
                    let eta =
                        index.arrow(inner, jcat.dst(sj)).expect("tail inclusions are arrows");
                    let components = apex
                        .objects()
                        .map(|c| pf.along[eta].on_mor[cell.at[s_j].components[c]])
                        .collect();
                    NatTransData { components }
                }
            }
        };
        isos[sj] = Some(iso);
    }
    for sj in jcat.morphisms() {
        if isos[sj].is_some() {
            continue;
        }
        let (o1, o2) = (jcat.src(sj), jcat.dst(sj));
        let (_, s1, s2) = canonical_mid(index, o1, o2);
        let iso1 = isos[s1].clone().expect("generator comparisons are built");
        let iso2 = isos[s2].clone().expect("generator comparisons are built");
        isos[sj] = Some(pasted_leg_iso(pf, &apex, &legs, sj, s1, s2, &iso1, &iso2)?);
    }

    let cone = Cone {
        apex: apex.clone(),
        legs,
        leg_isos: isos.into_iter().map(|i| i.expect("every inclusion has a comparison")).collect(),
    };
    let forward = mediator(pf, &glued.fibers[s], &cone)?;

    let obj_j = index.object_of(&[j]).expect("singleton chains are objects");
    let p1 = descent_projection(pf, &glued.fibers[s], obj_j)?.0;
    let bundle = &glued.diagram.values[obj_j];
    let self_pos = bundle.up_sets[s]
        .iter()
        .position(|&m| m == s_j)
        .expect("every element is in its own up-set");
    let p2 = descent_projection(&bundle.diagrams[s].pf, &bundle.fibers[s], self_pos)?.0;
    let back = then_functor(&p1, &p2);

    Ok(CounitPoint {
        element: ctx.subs[j].element_id(s_j).to_string(),
        forward_then_back: isomorphic_to_identity(&apex, &then_functor(&forward, &back)),
        back_then_forward: isomorphic_to_identity(
            &glued.fibers[s].cat,
            &then_functor(&back, &forward),
        ),
    })
}

/// Round-trip result for `R∘G` at one base element.
#[derive(Debug, Clone)]
pub struct UnitPoint {
    pub element: String,
    /// The mediated comparison functor is an equivalence onto the glued
    /// fiber.
    pub equivalent: bool,
    pub glued_objects: usize,
    pub source_objects: usize,
}

/// Round-trip report for `R∘G` over a whole stack.
#[derive(Debug, Clone)]
pub struct UnitReport {
    pub ok: bool,
    pub points: Vec<UnitPoint>,
}

/// Certifies that restricting a stack and gluing the pieces back recovers
/// it: at every base element the unit legs mediate an equivalence from the
/// stack's value onto the glued fiber.
pub fn roundtrip_unit(st: &PosetStack, caps: &Caps) -> Result<UnitReport> {
    let d = super::restrict_R(st, caps)?;
    let ctx = Ctx::new(&d.base, &d.levels, caps)?;
    let glued = glue_in(&ctx, &d, caps)?;
    let index = &glued.diagram.index;
    let jcat = &index.cat;
    let n = d.levels.len();

    let units: Vec<Unit> =
        (0..n).map(|k| unit_eta(&d.base, &ctx.members[k], st, caps)).collect::<Result<_>>()?;
    // Naturality of each unit at the next unit: the comparison cells the
    // unit cone needs over the singleton-to-pair inclusions.
    let mut f_cells: BTreeMap<(usize, usize), Modification> = BTreeMap::new();
    for k in 0..n {
        for l in k + 1..n {
            let cell = unit_naturality(
                &ctx.members[k],
                st,
                &units[l].eta,
                &units[k],
                &ctx.pair_unit[&(k, l)],
                &ctx.comparison_pushed(&d, k, l)?,
            )?;
            f_cells.insert((k, l), cell);
        }
    }

    let mut points = Vec::with_capacity(st.base.element_count());
    for u in st.base.elements() {
        let pf = &glued.diagram.at[u];
        let apex = st.value(u).clone();

        let mut legs: Vec<Option<FunctorData>> = vec![None; jcat.object_count()];
        for (o, ch) in index.chains.iter().enumerate() {
            if ch.len() == 1 {
                legs[o] = Some(units[ch[0]].eta.component[u].clone());
            }
        }
        let legs = extend_legs(index, pf, legs);

        let mut isos: Vec<Option<NatTransData>> = vec![None; jcat.morphism_count()];
        for sj in jcat.morphisms() {
            let iso = match arrow_kind(index, sj) {
                ArrowKind::Composite => continue,
                ArrowKind::Identity
                | ArrowKind::UnitPair(..)
                | ArrowKind::UnitTriple(..)
                | ArrowKind::Insertion(..) => identity_leg_iso(pf, &apex, &legs, sj)?,
                ArrowKind::Comparison(k, l) => f_cells[&(k, l)].at[u].clone(),
                ArrowKind::Transported(_, l, m) => {
                    let inner = index.object_of(&[l, m]).expect("pairs are objects");
                    let eta =
                        index.arrow(inner, jcat.dst(sj)).expect("tail inclusions are arrows");
                    let components = apex
                        .objects()
                        .map(|c| pf.along[eta].on_mor[f_cells[&(l, m)].at[u].components[c]])
                        .collect();
                    NatTransData { components }
                }
            };
            isos[sj] = Some(iso);
        }
        for sj in jcat.morphisms() {
            if isos[sj].is_some() {
                continue;
            }
            let (o1, o2) = (jcat.src(sj), jcat.dst(sj));
            let (_, s1, s2) = canonical_mid(index, o1, o2);
            let iso1 = isos[s1].clone().expect("generator comparisons are built");
            let iso2 = isos[s2].clone().expect("generator comparisons are built");
            isos[sj] = Some(pasted_leg_iso(pf, &apex, &legs, sj, s1, s2, &iso1, &iso2)?);
        }

        let cone = Cone {
            apex: apex.clone(),
            legs,
            leg_isos: isos
                .into_iter()
                .map(|i| i.expect("every inclusion has a comparison"))
                .collect(),
        };
        let xi = mediator(pf, &glued.fibers[u], &cone)?;
        let equivalent =
            is_equivalence(&apex, &glued.fibers[u].cat, &xi, caps, false)?.is_equivalence();
        points.push(UnitPoint {
            element: st.base.element_id(u).to_string(),
            equivalent,
            glued_objects: glued.fibers[u].cat.object_count(),
            source_objects: apex.object_count(),
        });
    }

    Ok(UnitReport { ok: points.iter().all(|p| p.equivalent), points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gluing::{check_gluing_morphism, restrict_morphism, restrict_R};
    use crate::posetstack::{pushforward_stack, PosetMap, StratPoset};

    fn chain_z2(n: usize) -> PosetStack {
        PosetStack::constant(fixtures::chain_poset(n), fixtures::cyclic2()).unwrap()
    }

    #[test]
    fn diagram_backs_each_triple_by_exactly_one_pasting() {
        let caps = Caps::default();
        let st = chain_z2(3);
        let d = restrict_R(&st, &caps).unwrap();
        let diagram = build_diagram(&d, &caps).unwrap();

        assert_eq!(diagram.f_backed.len(), 1);
        let (s1, s2) = diagram.f_backed[&(0, 1, 2)];
        let single = diagram.index.object_of(&[0]).unwrap();
        let pair = diagram.index.object_of(&[0, 1]).unwrap();
        let triple = diagram.index.object_of(&[0, 1, 2]).unwrap();
        assert_eq!(diagram.index.arrow(single, pair), Some(s1));
        assert_eq!(diagram.index.arrow(pair, triple), Some(s2));

        // One cell per composable pair, and the fiber pseudofunctors are
        // coherent at every base element.
        let jcat = &diagram.index.cat;
        let composable = jcat
            .morphisms()
            .flat_map(|a| jcat.morphisms().map(move |b| (a, b)))
            .filter(|&(a, b)| jcat.dst(a) == jcat.src(b))
            .count();
        assert_eq!(diagram.cells.len(), composable);
        for u in st.base.elements() {
            assert!(diagram.at[u].validate().is_empty());
        }
    }

    #[test]
    fn single_level_gluing_is_the_pushforward() {
        let caps = Caps::default();
        let base = StratPoset::new(&["p", "q"], &[], &[0, 0]).unwrap();
        let st = PosetStack::constant(base.clone(), fixtures::walking_arrow()).unwrap();
        let d = restrict_R(&st, &caps).unwrap();
        let glued = glue_G(&d, &caps).unwrap();

        let members: Vec<usize> = base.elements().collect();
        let push = pushforward_stack(&base, &members, &st, &caps).unwrap();
        for u in base.elements() {
            let proj = descent_projection(&glued.diagram.at[u], &glued.fibers[u], 0).unwrap().0;
            assert_eq!(
                glued.stack.pf.at[u].object_count(),
                push.stack.pf.at[u].object_count()
            );
            assert!(is_equivalence(
                &glued.fibers[u].cat,
                &push.stack.pf.at[u],
                &proj,
                &caps,
                false
            )
            .unwrap()
            .is_equivalence());
        }
    }

    #[test]
    fn glued_morphism_commutes_with_the_projections() {
        let caps = Caps::default();
        let base = fixtures::chain_poset(2);
        let value = fixtures::indiscrete(2);
        let st = PosetStack::constant(base.clone(), value.clone()).unwrap();

        // The swap automorphism of the fiber, applied uniformly.
        let swap = FunctorData {
            on_obj: vec![1, 0],
            on_mor: value
                .morphisms()
                .map(|m| {
                    let (a, b) = (1 - value.src(m), 1 - value.dst(m));
                    value.hom(a, b)[0]
                })
                .collect(),
        };
        let t = PseudoTransformation {
            component: base.elements().map(|_| swap.clone()).collect(),
            square: (0..base.pair_count())
                .map(|k| {
                    let (a, _) = base.pair(k);
                    NatTransData {
                        components: value
                            .objects()
                            .take(st.value(a).object_count())
                            .map(|x| value.identity(swap.on_obj[x]))
                            .collect(),
                    }
                })
                .collect(),
        };
        assert!(validate_pseudo_transformation(&st.pf, &st.pf, &t).is_empty());

        let d = restrict_R(&st, &caps).unwrap();
        let m = restrict_morphism(&st, &st, &t, &caps).unwrap();
        assert!(check_gluing_morphism(&d, &d, &m, &caps).unwrap().ok);
        let glued = glue_G(&d, &caps).unwrap();
        let gm = glue_morphism(&d, &d, &m, &glued, &glued, &caps).unwrap();

        // At every base element and every level, projecting after the glued
        // map equals mapping the projection through the pushed level map.
        for u in base.elements() {
            for k in 0..2usize {
                let o = glued.diagram.index.object_of(&[k]).unwrap();
                let proj = descent_projection(&glued.diagram.at[u], &glued.fibers[u], o)
                    .unwrap()
                    .0;
                let members = base.level_members(k);
                let sub = base.sub_poset(&members).unwrap();
                let incl = PosetMap::new(&sub, &base, members.clone()).unwrap();
                let level = crate::posetstack::pullback_stack(&sub, &incl, &st).unwrap();
                let push = pushforward_stack(&base, &members, &level, &caps).unwrap();
                let pushed =
                    pushforward_transformation(&level, &push, &push, &m.levels[k]).unwrap();
                assert_eq!(
                    then_functor(&gm.component[u], &proj),
                    then_functor(&proj, &pushed.component[u]),
                );
            }
        }
    }
}
