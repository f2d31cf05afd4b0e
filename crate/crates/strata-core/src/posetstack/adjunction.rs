//! The pushforward ⊣ pullback adjunction for sub-poset inclusions.
//!
//! `pushforward_stack` computes the right Kan extension pointwise: the
//! value at an ambient element is the descent category of the stack
//! restricted to the up-set inside the sub-poset, and transitions are the
//! mediators induced by up-set shrinkage. Because restriction of a family
//! is literal component selection, the result is strict on the nose.

use super::{poset_as_category, pullback_stack, PosetMap, PosetStack, StratPoset};
use crate::error::{Caps, Error, Result};
use crate::fincat::{FunctorData, NatTransData};
use crate::pseudo::{
    descent_category, descent_projection, induced_on_descent, mediator, Cone, DescentCat,
    PseudoFunctor, PseudoTransformation,
};
use serde::{Deserialize, Serialize};

/// A pushforward with full provenance: the stack itself plus, per ambient
/// element, the up-set that indexed the descent, the restricted diagram,
/// and the descent category with its family tables.
#[derive(Debug, Clone, Serialize)]
pub struct Pushforward {
    pub stack: PosetStack,
    /// Per ambient element: members of the up-set, as indices into the
    /// sub-poset the input stack lives on.
    pub up_sets: Vec<Vec<usize>>,
    /// Per ambient element: the input stack restricted to that up-set.
    pub diagrams: Vec<PosetStack>,
    /// Per ambient element: descent over the restricted diagram; its `cat`
    /// is the value of `stack` there.
    pub fibers: Vec<DescentCat>,
}

fn check_members(ambient: &StratPoset, members: &[usize], st: &PosetStack) -> Result<()> {
    let sub = ambient.sub_poset(members)?;
    if st.base != sub {
        return Err(Error::ShapeMismatch(
            "stack does not live on the indicated sub-poset".to_string(),
        ));
    }
    Ok(())
}

/// The transition functor for shrinking an up-set: mediator of the cone
/// whose legs are the projections at the surviving positions.
///
/// `from`/`from_dc` describe descent over the larger up-set, `to`/`to_dc`
/// over the smaller one; `pos` maps positions of the smaller member list
/// into the larger one.
fn restriction_mediator(
    from: &PosetStack,
    from_dc: &DescentCat,
    to: &PosetStack,
    to_dc: &DescentCat,
    pos: &[usize],
) -> Result<FunctorData> {
    let legs: Vec<FunctorData> = pos
        .iter()
        .map(|&p| Ok(descent_projection(&from.pf, from_dc, p)?.0))
        .collect::<Result<Vec<_>>>()?;
    let leg_isos: Vec<NatTransData> = if pos.is_empty() {
        Vec::new()
    } else {
        let all = descent_projection(&from.pf, from_dc, 0)?.1;
        (0..to.base.pair_count())
            .map(|s| {
                let (a, b) = (to.pf.shape.src(s), to.pf.shape.dst(s));
                let big = from
                    .base
                    .pair_index(pos[a], pos[b])
                    .expect("up-set shrinkage preserves relations");
                all[big].clone()
            })
            .collect()
    };
    mediator(&to.pf, to_dc, &Cone { apex: from_dc.cat.clone(), legs, leg_isos })
}

/// Pushes a stack on `ambient.sub_poset(members)` forward to the ambient
/// poset by pointwise up-set descent. Strict by construction.
pub fn pushforward_stack(
    ambient: &StratPoset,
    members: &[usize],
    st: &PosetStack,
    caps: &Caps,
) -> Result<Pushforward> {
    check_members(ambient, members, st)?;
    let mut up_sets = Vec::new();
    let mut diagrams = Vec::new();
    let mut fibers = Vec::new();
    for x in ambient.elements() {
        let up: Vec<usize> = (0..members.len())
            .filter(|&i| ambient.leq(x, members[i]))
            .collect();
        let sub = st.base.sub_poset(&up)?;
        let map = PosetMap::new(&sub, &st.base, up.clone())?;
        let diagram = pullback_stack(&sub, &map, st)?;
        let fiber = descent_category(&diagram.pf, caps)?;
        up_sets.push(up);
        diagrams.push(diagram);
        fibers.push(fiber);
    }

    let at: Vec<_> = fibers.iter().map(|f| f.cat.clone()).collect();
    let shape = poset_as_category(ambient);
    let mut along = Vec::with_capacity(ambient.pair_count());
    for s in 0..ambient.pair_count() {
        let (x, y) = (shape.src(s), shape.dst(s));
        let pos: Vec<usize> = up_sets[y]
            .iter()
            .map(|m| {
                up_sets[x]
                    .iter()
                    .position(|n| n == m)
                    .expect("up-sets shrink along ≤")
            })
            .collect();
        along.push(restriction_mediator(
            &diagrams[x],
            &fibers[x],
            &diagrams[y],
            &fibers[y],
            &pos,
        )?);
    }
    let pf = PseudoFunctor::strict(shape, at, along)?;
    let stack = PosetStack { base: ambient.clone(), pf };
    Ok(Pushforward { stack, up_sets, diagrams, fibers })
}

/// The unit `η: 𝔠 ⇒ i_* i⁻¹ 𝔠` of the adjunction, bundled with the
/// pushforward it lands in and the restriction `i⁻¹ 𝔠` it factors through.
#[derive(Debug, Clone, Serialize)]
pub struct Unit {
    pub restricted: PosetStack,
    pub pushforward: Pushforward,
    pub eta: PseudoTransformation,
}

/// Computes the adjunction unit for a stack on the ambient poset.
///
/// The component at `x` is the mediator of the cone whose legs are the
/// transitions `𝔠(x ≤ s)` into the up-set; squares are assembled from the
/// stack's own comparison cells. Fails only on invalid input stacks.
pub fn unit_eta(
    ambient: &StratPoset,
    members: &[usize],
    st: &PosetStack,
    caps: &Caps,
) -> Result<Unit> {
    let sub = ambient.sub_poset(members)?;
    let incl = PosetMap::new(&sub, ambient, members.to_vec())?;
    let restricted = pullback_stack(&sub, &incl, st)?;
    let push = pushforward_stack(ambient, members, &restricted, caps)?;

    let mut component = Vec::with_capacity(ambient.element_count());
    for x in ambient.elements() {
        let amb = |pos: usize| members[push.up_sets[x][pos]];
        let legs: Vec<FunctorData> = (0..push.up_sets[x].len())
            .map(|a| st.pf.along[st.mor(x, amb(a)).expect("up-set is above x")].clone())
            .collect();
        let leg_isos: Vec<NatTransData> = (0..push.diagrams[x].base.pair_count())
            .map(|k| {
                let (a, b) = (push.diagrams[x].pf.shape.src(k), push.diagrams[x].pf.shape.dst(k));
                let s1 = st.mor(x, amb(a)).expect("up-set is above x");
                let s2 = st.mor(amb(a), amb(b)).expect("pairs stay related");
                st.pf.comp_iso[&(s1, s2)].clone()
            })
            .collect();
        let cone = Cone { apex: st.pf.at[x].clone(), legs, leg_isos };
        component.push(mediator(&push.diagrams[x].pf, &push.fibers[x], &cone)?);
    }

    let mut square = Vec::with_capacity(ambient.pair_count());
    for s in 0..ambient.pair_count() {
        let shape = &push.stack.pf.shape;
        let (x, y) = (shape.src(s), shape.dst(s));
        let trans = &push.stack.pf.along[s];
        let components = st.pf.at[x]
            .objects()
            .map(|c| {
                let src_fam = trans.on_obj[component[x].on_obj[c]];
                let dst_fam = component[y].on_obj[st.pf.along[s].on_obj[c]];
                let comps: Vec<usize> = (0..push.up_sets[y].len())
                    .map(|a| {
                        let target = members[push.up_sets[y][a]];
                        let s1 = st.mor(x, y).expect("related pair");
                        let s2 = st.mor(y, target).expect("up-set is above y");
                        st.pf.comp_iso[&(s1, s2)].components[c]
                    })
                    .collect();
                push.fibers[y].arrow_index(src_fam, dst_fam, &comps).ok_or_else(|| {
                    Error::Invalid(format!(
                        "unit square over pair {s} does not land on a descent arrow",
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        square.push(NatTransData { components });
    }
    let eta = PseudoTransformation { component, square };
    Ok(Unit { restricted, pushforward: push, eta })
}

/// The counit `ε: i⁻¹ i_* 𝔠 ⇒ 𝔠`, bundled with the pushforward and the
/// restriction `i⁻¹ i_* 𝔠` it acts on.
#[derive(Debug, Clone, Serialize)]
pub struct Counit {
    pub pushforward: Pushforward,
    pub restricted: PosetStack,
    pub eps: PseudoTransformation,
}

/// Computes the adjunction counit for a stack on the sub-poset.
///
/// The component at `s` is the descent projection at `s`'s own position in
/// its up-set; squares read off the stored family comparisons.
pub fn counit_eps(
    ambient: &StratPoset,
    members: &[usize],
    st: &PosetStack,
    caps: &Caps,
) -> Result<Counit> {
    let push = pushforward_stack(ambient, members, st, caps)?;
    let sub = ambient.sub_poset(members)?;
    let incl = PosetMap::new(&sub, ambient, members.to_vec())?;
    let restricted = pullback_stack(&sub, &incl, &push.stack)?;

    let self_pos = |s: usize| -> usize {
        push.up_sets[members[s]]
            .iter()
            .position(|&m| m == s)
            .expect("every element is in its own up-set")
    };
    let component: Vec<FunctorData> = (0..members.len())
        .map(|s| {
            let x = members[s];
            Ok(descent_projection(&push.diagrams[x].pf, &push.fibers[x], self_pos(s))?.0)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut square = Vec::with_capacity(st.base.pair_count());
    for k in 0..st.base.pair_count() {
        let (s, sp) = (st.pf.shape.src(k), st.pf.shape.dst(k));
        let x = members[s];
        let fiber = &push.fibers[x];
        let diagram = &push.diagrams[x];
        let inner = diagram
            .base
            .pair_index(self_pos(s), {
                push.up_sets[x].iter().position(|&m| m == sp).expect("sp is above s")
            })
            .expect("relation survives into the up-set");
        let components = (0..fiber.families.len())
            .map(|i| fiber.families[i].phi[inner])
            .collect();
        square.push(NatTransData { components });
    }
    let eps = PseudoTransformation { component, square };
    Ok(Counit { pushforward: push, restricted, eps })
}

/// Pushes a transformation `t: 𝔞 ⇒ 𝔟` of stacks on the sub-poset forward:
/// the component at an ambient element is the functor induced on up-set
/// descent. Because restriction of a family is literal component selection,
/// the pushed transformation is strict (identity squares).
pub fn pushforward_transformation(
    a: &PosetStack,
    src_push: &Pushforward,
    dst_push: &Pushforward,
    t: &PseudoTransformation,
) -> Result<PseudoTransformation> {
    let ambient = &src_push.stack.base;
    let mut component = Vec::with_capacity(ambient.element_count());
    for x in ambient.elements() {
        let up = &src_push.up_sets[x];
        let diagram = &src_push.diagrams[x];
        let restricted = PseudoTransformation {
            component: up.iter().map(|&s| t.component[s].clone()).collect(),
            square: (0..diagram.base.pair_count())
                .map(|k| {
                    let (pa, pb) = diagram.base.pair(k);
                    let orig = a
                        .base
                        .pair_index(up[pa], up[pb])
                        .expect("up-set restriction preserves relations");
                    t.square[orig].clone()
                })
                .collect(),
        };
        component.push(induced_on_descent(
            &diagram.pf,
            &dst_push.diagrams[x].pf,
            &restricted,
            &src_push.fibers[x],
            &dst_push.fibers[x],
        )?);
    }
    let shape = &dst_push.stack.pf.shape;
    let square = shape
        .morphisms()
        .map(|s| {
            crate::fincat::identity_nat(
                &dst_push.stack.pf.at[shape.dst(s)],
                &crate::fincat::then_functor(&component[shape.src(s)], &dst_push.stack.pf.along[s]),
            )
        })
        .collect();
    Ok(PseudoTransformation { component, square })
}

/// Pushes a modification `m: t ⇛ u` forward along the same inclusion;
/// `pushed_t` and `pushed_u` are the pushforwards of its boundary.
pub fn pushforward_modification(
    src_push: &Pushforward,
    dst_push: &Pushforward,
    m: &crate::pseudo::Modification,
    pushed_t: &PseudoTransformation,
    pushed_u: &PseudoTransformation,
) -> Result<crate::pseudo::Modification> {
    let ambient = &src_push.stack.base;
    let at = ambient
        .elements()
        .map(|x| {
            let restricted = crate::pseudo::Modification {
                at: src_push.up_sets[x].iter().map(|&s| m.at[s].clone()).collect(),
            };
            crate::pseudo::induced_on_descent_2(
                &restricted,
                &src_push.fibers[x],
                &dst_push.fibers[x],
                &pushed_t.component[x],
                &pushed_u.component[x],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(crate::pseudo::Modification { at })
}

/// Pulls a transformation of stacks on `dst` back along a monotone map
/// (pointwise lookup, strictly functorial).
pub fn pullback_transformation(
    src: &StratPoset,
    map: &PosetMap,
    dst: &StratPoset,
    t: &PseudoTransformation,
) -> PseudoTransformation {
    PseudoTransformation {
        component: src.elements().map(|x| t.component[map.on[x]].clone()).collect(),
        square: (0..src.pair_count())
            .map(|s| {
                let (a, b) = src.pair(s);
                t.square[dst.pair_index(map.on[a], map.on[b]).expect("map is monotone")].clone()
            })
            .collect(),
    }
}

/// Pulls a modification back along a monotone map.
pub fn pullback_modification(
    src: &StratPoset,
    map: &PosetMap,
    m: &crate::pseudo::Modification,
) -> crate::pseudo::Modification {
    crate::pseudo::Modification {
        at: src.elements().map(|x| m.at[map.on[x]].clone()).collect(),
    }
}

/// The unit seen from the sub-poset itself: `υ: 𝔠 ⇒ i⁻¹ i_* 𝔠` for a stack
/// living on the sub-poset, with the same up-set mediator components as
/// [`unit_eta`]. Pointwise quasi-inverse to the counit.
#[derive(Debug, Clone, Serialize)]
pub struct SubUnit {
    pub pushforward: Pushforward,
    /// `i⁻¹ i_* 𝔠`, the target of `upsilon`, on the sub-poset.
    pub restricted: PosetStack,
    pub upsilon: PseudoTransformation,
}

/// Computes [`SubUnit`] for a stack on `ambient.sub_poset(members)`.
pub fn sub_unit(
    ambient: &StratPoset,
    members: &[usize],
    st: &PosetStack,
    caps: &Caps,
) -> Result<SubUnit> {
    let push = pushforward_stack(ambient, members, st, caps)?;
    let sub = ambient.sub_poset(members)?;
    let incl = PosetMap::new(&sub, ambient, members.to_vec())?;
    let restricted = pullback_stack(&sub, &incl, &push.stack)?;

    let mut component = Vec::with_capacity(members.len());
    for s in 0..members.len() {
        let x = members[s];
        let up = &push.up_sets[x];
        let legs: Vec<FunctorData> = up
            .iter()
            .map(|&a| st.pf.along[st.mor(s, a).expect("up-set is above s")].clone())
            .collect();
        let leg_isos: Vec<NatTransData> = (0..push.diagrams[x].base.pair_count())
            .map(|k| {
                let (pa, pb) = push.diagrams[x].base.pair(k);
                let s1 = st.mor(s, up[pa]).expect("up-set is above s");
                let s2 = st.mor(up[pa], up[pb]).expect("pairs stay related");
                st.pf.comp_iso[&(s1, s2)].clone()
            })
            .collect();
        let cone = Cone { apex: st.pf.at[s].clone(), legs, leg_isos };
        component.push(mediator(&push.diagrams[x].pf, &push.fibers[x], &cone)?);
    }

    let mut square = Vec::with_capacity(st.base.pair_count());
    for k in 0..st.base.pair_count() {
        let (s, sp) = (st.pf.shape.src(k), st.pf.shape.dst(k));
        let y = members[sp];
        let trans = &restricted.pf.along[k];
        let components = st.pf.at[s]
            .objects()
            .map(|c| {
                let src_fam = trans.on_obj[component[s].on_obj[c]];
                let dst_fam = component[sp].on_obj[st.pf.along[k].on_obj[c]];
                let comps: Vec<usize> = push.up_sets[y]
                    .iter()
                    .map(|&a| {
                        let s2 = st.mor(sp, a).expect("up-set is above sp");
                        st.pf.comp_iso[&(k, s2)].components[c]
                    })
                    .collect();
                push.fibers[y].arrow_index(src_fam, dst_fam, &comps).ok_or_else(|| {
                    Error::Invalid(format!(
                        "sub-poset unit square over pair {k} does not land on a descent arrow"
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        square.push(NatTransData { components });
    }
    Ok(SubUnit { pushforward: push, restricted, upsilon: PseudoTransformation { component, square } })
}

/// The naturality cell of the unit at a 1-cell `t: 𝔞 ⇒ 𝔟` of stacks on the
/// ambient poset: the invertible modification `η_𝔟 ∘ t ⇛ i_*i⁻¹(t) ∘ η_𝔞`
/// whose component entries collect the squares of `t` over the up-set. It
/// degenerates to the identity whenever `t` has identity squares.
pub fn unit_naturality(
    members: &[usize],
    a: &PosetStack,
    t: &PseudoTransformation,
    unit_a: &Unit,
    unit_b: &Unit,
    pushed_t: &PseudoTransformation,
) -> Result<crate::pseudo::Modification> {
    let ambient = &a.base;
    let at = ambient
        .elements()
        .map(|x| {
            let components = a.pf.at[x]
                .objects()
                .map(|c| {
                    let lhs = unit_b.eta.component[x].on_obj[t.component[x].on_obj[c]];
                    let rhs = pushed_t.component[x].on_obj[unit_a.eta.component[x].on_obj[c]];
                    let comps: Vec<usize> = unit_b.pushforward.up_sets[x]
                        .iter()
                        .map(|&pos| {
                            let s = ambient
                                .pair_index(x, members[pos])
                                .expect("up-set is above x");
                            t.square[s].components[c]
                        })
                        .collect();
                    unit_b.pushforward.fibers[x].arrow_index(lhs, rhs, &comps).ok_or_else(|| {
                        Error::Invalid(
                            "unit naturality does not land on a descent arrow".to_string(),
                        )
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(NatTransData { components })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(crate::pseudo::Modification { at })
}

/// One point of a base-change comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaseChangePoint {
    pub element: String,
    pub lhs_families: usize,
    pub rhs_families: usize,
    pub equivalent: bool,
}

/// Pointwise result of [`check_base_change`]; `ok` iff every point's
/// canonical comparison is a certified equivalence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaseChangeReport {
    pub ok: bool,
    pub points: Vec<BaseChangePoint>,
}

/// Checks the base-change property: restricting a pushforward to an up-set
/// agrees with pushing the restriction forward. `v_members` must be
/// up-closed; `st` lives on `ambient.sub_poset(f_members)`. The canonical
/// comparison is built as a mediator and certified point by point.
pub fn check_base_change(
    ambient: &StratPoset,
    v_members: &[usize],
    f_members: &[usize],
    st: &PosetStack,
    caps: &Caps,
) -> Result<BaseChangeReport> {
    if !ambient.is_up_closed(v_members) {
        return Err(Error::Invalid(
            "the first member list is not an up-closed subset".to_string(),
        ));
    }
    check_members(ambient, f_members, st)?;
    let lhs_push = pushforward_stack(ambient, f_members, st, caps)?;

    let v_poset = ambient.sub_poset(v_members)?;
    // V ∩ F, tracked as positions in F and in V.
    let wf: Vec<usize> =
        (0..f_members.len()).filter(|&i| v_members.contains(&f_members[i])).collect();
    let wv: Vec<usize> = wf
        .iter()
        .map(|&i| v_members.iter().position(|&v| v == f_members[i]).unwrap())
        .collect();
    let w_sub = st.base.sub_poset(&wf)?;
    let w_incl = PosetMap::new(&w_sub, &st.base, wf.clone())?;
    let st_w = pullback_stack(&w_sub, &w_incl, st)?;
    let rhs_push = pushforward_stack(&v_poset, &wv, &st_w, caps)?;

    let mut points = Vec::new();
    for (vi, &v) in v_members.iter().enumerate() {
        let lhs = &lhs_push.fibers[v];
        let rhs = &rhs_push.fibers[vi];
        // Positions of the rhs up-set inside the lhs up-set; since V is
        // up-closed these enumerate the same elements of F in order.
        let pos: Vec<usize> = rhs_push.up_sets[vi]
            .iter()
            .map(|&w| {
                lhs_push.up_sets[v]
                    .iter()
                    .position(|&u| u == wf[w])
                    .expect("up-closure: the same F-elements index both sides")
            })
            .collect();
        let comparison = restriction_mediator(
            &lhs_push.diagrams[v],
            lhs,
            &rhs_push.diagrams[vi],
            rhs,
            &pos,
        );
        let equivalent = match comparison {
            Ok(f) => crate::fincat::is_equivalence(&lhs.cat, &rhs.cat, &f, caps, false)?
                .is_equivalence(),
            Err(_) => false,
        };
        points.push(BaseChangePoint {
            element: ambient.element_id(v).to_string(),
            lhs_families: lhs.families.len(),
            rhs_families: rhs.families.len(),
            equivalent,
        });
    }
    Ok(BaseChangeReport { ok: points.iter().all(|p| p.equivalent), points })
}

/// Global sections: descent over the whole base.
pub fn global_sections_stack(st: &PosetStack, caps: &Caps) -> Result<DescentCat> {
    descent_category(&st.pf, caps)
}
