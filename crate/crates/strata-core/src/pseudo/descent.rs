//! Descent categories: 2-limits of pseudofunctors computed by enumeration.
//!
//! A descent family assigns an object `x[a]` of `at[a]` to every shape
//! object and an invertible `phi[s]: 𝔠(s)(x[src]) → x[dst]` to every shape
//! morphism, subject to the unit condition (`phi` at an identity is the
//! inverse unit component) and the cocycle condition over every composable
//! pair. Arrows between families are componentwise morphisms commuting with
//! every `phi`-square. Enumeration is exhaustive, canonical, and budgeted.

use super::{Modification, PseudoFunctor, PseudoTransformation};
use crate::error::{Budget, Caps, Error, Result};
use crate::fincat::{
    indexed_id, then_functor, validate_functor, validate_nat, FinCat, FunctorData, MorData,
    NatTransData,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One object of a descent category, in full form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DescentFamily {
    /// Chosen object of `at[a]`, per shape object.
    pub x: Vec<usize>,
    /// Chosen iso `𝔠(s)(x[src(s)]) → x[dst(s)]`, per shape morphism.
    pub phi: Vec<usize>,
}

/// One morphism of a descent category: commuting componentwise arrows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentArrow {
    pub src: usize,
    pub dst: usize,
    /// Component in `at[a]`, per shape object.
    pub components: Vec<usize>,
}

/// The computed 2-limit, with provenance for every generated identifier.
///
/// `cat` object `i` is `families[i]` (id `d…`), morphism `k` is `arrows[k]`
/// (id `m…`); indices agree because generated ids are zero-padded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentCat {
    pub cat: FinCat,
    pub families: Vec<DescentFamily>,
    pub arrows: Vec<DescentArrow>,
}

impl DescentCat {
    /// Index of the family with exactly these choices.
    pub fn family_index(&self, x: &[usize], phi: &[usize]) -> Option<usize> {
        self.families.iter().position(|f| f.x == x && f.phi == phi)
    }

    /// Index of the arrow with exactly these endpoints and components.
    pub fn arrow_index(&self, src: usize, dst: usize, components: &[usize]) -> Option<usize> {
        self.arrows
            .iter()
            .position(|a| a.src == src && a.dst == dst && a.components == components)
    }
}

/// Checks the unit condition for `phi` at identities.
fn unit_ok(pf: &PseudoFunctor, x: &[usize], phi: &[Option<usize>]) -> bool {
    pf.shape.objects().all(|a| {
        let unit = pf.unit_iso[a].components[x[a]];
        phi[pf.shape.identity(a)] == pf.at[a].inverse(unit)
    })
}

/// Checks one cocycle equation; `None` entries mean "not yet determined".
fn cocycle_ok(
    pf: &PseudoFunctor,
    x: &[usize],
    phi: &[Option<usize>],
    s: usize,
    sp: usize,
) -> bool {
    let Some(t) = pf.shape.then(s, sp) else { return true };
    let (Some(ps), Some(psp), Some(pt)) = (phi[s], phi[sp], phi[t]) else {
        return true;
    };
    let a = pf.shape.src(s);
    let c = pf.shape.dst(sp);
    let comp_x = pf.comp_iso[&(s, sp)].components[x[a]];
    pf.at[c].then_chain(&[comp_x, pf.along[sp].on_mor[ps], psp]) == Some(pt)
}

/// Computes the descent category of a valid pseudofunctor.
///
/// Families are enumerated lexicographically over object choices then
/// `phi` choices (identities are forced by the unit condition); arrows over
/// ordered family pairs then componentwise choices. Both searches prune with
/// every equation that is already determined and tick the candidate budget.
pub fn descent_category(pf: &PseudoFunctor, caps: &Caps) -> Result<DescentCat> {
    let shape = &pf.shape;
    let mut budget = caps.budget();
    let choice_mors: Vec<usize> =
        shape.morphisms().filter(|&s| !shape.is_identity(s)).collect();

    fn forced_identities(pf: &PseudoFunctor, x: &[usize]) -> Result<Vec<Option<usize>>> {
        let mut phi: Vec<Option<usize>> = vec![None; pf.shape.morphism_count()];
        for a in pf.shape.objects() {
            let unit = pf.unit_iso[a].components[x[a]];
            let inv = pf.at[a].inverse(unit).ok_or_else(|| {
                Error::Invalid(format!(
                    "unit comparison at `{}` is not invertible",
                    pf.shape.object_id(a)
                ))
            })?;
            phi[pf.shape.identity(a)] = Some(inv);
        }
        Ok(phi)
    }

    fn assign_phi(
        pf: &PseudoFunctor,
        x: &[usize],
        choice_mors: &[usize],
        depth: usize,
        phi: &mut Vec<Option<usize>>,
        budget: &mut Budget,
        out: &mut Vec<DescentFamily>,
    ) -> Result<()> {
        if depth == choice_mors.len() {
            budget.tick()?;
            out.push(DescentFamily {
                x: x.to_vec(),
                phi: phi.iter().map(|p| p.expect("complete assignment")).collect(),
            });
            return Ok(());
        }
        let s = choice_mors[depth];
        let (a, b) = (pf.shape.src(s), pf.shape.dst(s));
        for cand in pf.at[b].isos(pf.along[s].on_obj[x[a]], x[b]) {
            budget.tick()?;
            phi[s] = Some(cand);
            let consistent = pf
                .shape
                .morphisms()
                .all(|s1| pf.shape.morphisms().all(|s2| cocycle_ok(pf, x, phi, s1, s2)));
            if consistent {
                assign_phi(pf, x, choice_mors, depth + 1, phi, budget, out)?;
            }
            phi[s] = None;
        }
        Ok(())
    }

    fn assign_x(
        pf: &PseudoFunctor,
        choice_mors: &[usize],
        depth: usize,
        x: &mut Vec<usize>,
        budget: &mut Budget,
        out: &mut Vec<DescentFamily>,
    ) -> Result<()> {
        if depth == x.len() {
            let mut phi = forced_identities(pf, x)?;
            return assign_phi(pf, x, choice_mors, 0, &mut phi, budget, out);
        }
        for o in pf.at[depth].objects() {
            x[depth] = o;
            assign_x(pf, choice_mors, depth + 1, x, budget, out)?;
        }
        Ok(())
    }

    let mut families = Vec::new();
    if shape.object_count() == 0 {
        families.push(DescentFamily { x: vec![], phi: vec![] });
    } else {
        let mut x = vec![0usize; shape.object_count()];
        assign_x(pf, &choice_mors, 0, &mut x, &mut budget, &mut families)?;
    }

    descent_category_on(pf, families, caps)
}

/// Assembles the descent category over a given list of families: arrows are
/// all componentwise morphisms commuting with every phi-square, composition
/// is componentwise. The families need not be the full enumeration; any
/// subset (for instance a canonical-representative selection) yields the
/// full subcategory they span.
pub fn descent_category_on(
    pf: &PseudoFunctor,
    families: Vec<DescentFamily>,
    caps: &Caps,
) -> Result<DescentCat> {
    let shape = &pf.shape;
    let mut budget = caps.budget();

    fn assign_components(
        pf: &PseudoFunctor,
        fi: &DescentFamily,
        fj: &DescentFamily,
        comps: &mut Vec<usize>,
        budget: &mut Budget,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let a = comps.len();
        if a == pf.shape.object_count() {
            budget.tick()?;
            out.push(comps.clone());
            return Ok(());
        }
        'next: for cand in pf.at[a].hom(fi.x[a], fj.x[a]) {
            budget.tick()?;
            comps.push(cand);
            for s in pf.shape.morphisms() {
                let (sa, sb) = (pf.shape.src(s), pf.shape.dst(s));
                if sa < comps.len() && sb < comps.len() {
                    let lhs = pf.at[sb].then(fi.phi[s], comps[sb]);
                    let rhs = pf.at[sb].then(pf.along[s].on_mor[comps[sa]], fj.phi[s]);
                    if lhs.is_none() || lhs != rhs {
                        comps.pop();
                        continue 'next;
                    }
                }
            }
            assign_components(pf, fi, fj, comps, budget, out)?;
            comps.pop();
        }
        Ok(())
    }

    let mut arrows = Vec::new();
    for (i, fi) in families.iter().enumerate() {
        for (j, fj) in families.iter().enumerate() {
            let mut found = Vec::new();
            let mut comps = Vec::new();
            if shape.object_count() == 0 {
                found.push(vec![]);
            } else {
                assign_components(pf, fi, fj, &mut comps, &mut budget, &mut found)?;
            }
            for components in found {
                arrows.push(DescentArrow { src: i, dst: j, components });
            }
        }
    }

    caps.admit_category(families.len(), arrows.len())?;

    let objects: Vec<String> =
        (0..families.len()).map(|i| indexed_id("d", i, families.len())).collect();
    let morphisms: Vec<MorData> = arrows
        .iter()
        .enumerate()
        .map(|(k, a)| MorData { id: indexed_id("m", k, arrows.len()), src: a.src, dst: a.dst })
        .collect();

    let lookup: BTreeMap<(usize, usize, &[usize]), usize> = arrows
        .iter()
        .enumerate()
        .map(|(k, a)| ((a.src, a.dst, a.components.as_slice()), k))
        .collect();
    let identity: Vec<usize> = families
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let comps: Vec<usize> =
                shape.objects().map(|a| pf.at[a].identity(f.x[a])).collect();
            *lookup
                .get(&(i, i, comps.as_slice()))
                .expect("identity components commute with every phi-square")
        })
        .collect();
    let cat = FinCat::from_parts(objects, morphisms, identity, |f, g| {
        let (af, ag) = (&arrows[f], &arrows[g]);
        if af.dst != ag.src {
            return None;
        }
        let comps: Vec<usize> = af
            .components
            .iter()
            .zip(&ag.components)
            .enumerate()
            .map(|(a, (&m1, &m2))| pf.at[a].then(m1, m2))
            .collect::<Option<Vec<_>>>()?;
        lookup.get(&(af.src, ag.dst, comps.as_slice())).copied()
    });

    Ok(DescentCat { cat, families, arrows })
}

/// The projection functor `π_a` to `at[a]` and, for every shape morphism,
/// the comparison `p_s: π_{dst(s)} ⇒ 𝔠(s) ∘ π_{src(s)}` read off `phi`.
pub fn descent_projection(
    pf: &PseudoFunctor,
    dc: &DescentCat,
    a: usize,
) -> Result<(FunctorData, Vec<NatTransData>)> {
    if a >= pf.shape.object_count() {
        return Err(Error::UnknownId { kind: "shape object", id: a.to_string() });
    }
    let pi = FunctorData {
        on_obj: dc.families.iter().map(|f| f.x[a]).collect(),
        on_mor: dc.arrows.iter().map(|m| m.components[a]).collect(),
    };
    let mut comparisons = Vec::with_capacity(pf.shape.morphism_count());
    for s in pf.shape.morphisms() {
        let b = pf.shape.dst(s);
        let components = dc
            .families
            .iter()
            .map(|f| {
                pf.at[b].inverse(f.phi[s]).ok_or_else(|| {
                    Error::Invalid(format!(
                        "stored comparison along `{}` is not invertible",
                        pf.shape.morphism_id(s)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        comparisons.push(NatTransData { components });
    }
    Ok((pi, comparisons))
}

/// A cone over a pseudofunctor: a candidate apex with legs and comparisons.
///
/// `leg_isos[s]` has shape `legs[dst(s)] ⇒ 𝔠(s) ∘ legs[src(s)]`, matching
/// the orientation of the projection comparisons `p_s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub apex: FinCat,
    pub legs: Vec<FunctorData>,
    pub leg_isos: Vec<NatTransData>,
}

/// The functor `apex → descent category` induced by the universal property.
///
/// Sends an apex object to the family of its leg values with `phi` read off
/// the leg comparisons; projections compose with the result to give back the
/// legs on the nose. Incoherent cones fail with [`Error::ConeIncoherent`]
/// naming a witness.
pub fn mediator(pf: &PseudoFunctor, dc: &DescentCat, cone: &Cone) -> Result<FunctorData> {
    let shape = &pf.shape;
    if cone.legs.len() != shape.object_count() || cone.leg_isos.len() != shape.morphism_count() {
        return Err(Error::ShapeMismatch(format!(
            "cone has {} legs / {} comparisons for {} objects / {} morphisms",
            cone.legs.len(),
            cone.leg_isos.len(),
            shape.object_count(),
            shape.morphism_count()
        )));
    }
    for a in shape.objects() {
        let report = validate_functor(&cone.apex, &pf.at[a], &cone.legs[a]);
        if let Some(v) = report.first() {
            return Err(Error::ConeIncoherent(format!(
                "leg at `{}`: {v}",
                shape.object_id(a)
            )));
        }
    }
    for s in shape.morphisms() {
        let (a, b) = (shape.src(s), shape.dst(s));
        let composite = then_functor(&cone.legs[a], &pf.along[s]);
        let report = validate_nat(
            &cone.apex,
            &pf.at[b],
            &cone.legs[b],
            &composite,
            &cone.leg_isos[s],
            true,
        );
        if let Some(v) = report.first() {
            return Err(Error::ConeIncoherent(format!(
                "comparison over `{}`: {v}",
                shape.morphism_id(s)
            )));
        }
    }

    let mut on_obj = Vec::with_capacity(cone.apex.object_count());
    for u in cone.apex.objects() {
        let x: Vec<usize> = shape.objects().map(|a| cone.legs[a].on_obj[u]).collect();
        let phi: Vec<Option<usize>> = shape
            .morphisms()
            .map(|s| {
                let b = shape.dst(s);
                pf.at[b].inverse(cone.leg_isos[s].components[u])
            })
            .collect();
        if phi.iter().any(|p| p.is_none()) {
            return Err(Error::ConeIncoherent(format!(
                "a comparison component at apex object `{}` is not invertible",
                cone.apex.object_id(u)
            )));
        }
        if !unit_ok(pf, &x, &phi) {
            return Err(Error::ConeIncoherent(format!(
                "unit condition fails at apex object `{}`",
                cone.apex.object_id(u)
            )));
        }
        for s in shape.morphisms() {
            for sp in shape.morphisms() {
                if !cocycle_ok(pf, &x, &phi, s, sp) {
                    return Err(Error::ConeIncoherent(format!(
                        "cocycle over (`{}`, `{}`) fails at apex object `{}`",
                        shape.morphism_id(s),
                        shape.morphism_id(sp),
                        cone.apex.object_id(u)
                    )));
                }
            }
        }
        let phi: Vec<usize> = phi.into_iter().map(|p| p.unwrap()).collect();
        let idx = dc.family_index(&x, &phi).ok_or_else(|| {
            Error::Invalid(format!(
                "family induced at apex object `{}` is missing from the descent category",
                cone.apex.object_id(u)
            ))
        })?;
        on_obj.push(idx);
    }

    let mut on_mor = Vec::with_capacity(cone.apex.morphism_count());
    for m in cone.apex.morphisms() {
        let comps: Vec<usize> = shape.objects().map(|a| cone.legs[a].on_mor[m]).collect();
        let (u, v) = (cone.apex.src(m), cone.apex.dst(m));
        let idx = dc.arrow_index(on_obj[u], on_obj[v], &comps).ok_or_else(|| {
            Error::ConeIncoherent(format!(
                "legs of apex morphism `{}` do not commute with the comparisons",
                cone.apex.morphism_id(m)
            ))
        })?;
        on_mor.push(idx);
    }
    Ok(FunctorData { on_obj, on_mor })
}

/// The functor between descent categories induced by a pseudonatural
/// transformation `t: d ⇒ e`.
pub fn induced_on_descent(
    d: &PseudoFunctor,
    e: &PseudoFunctor,
    t: &PseudoTransformation,
    dd: &DescentCat,
    de: &DescentCat,
) -> Result<FunctorData> {
    let shape = &d.shape;
    let mut on_obj = Vec::with_capacity(dd.families.len());
    for f in &dd.families {
        let y: Vec<usize> =
            shape.objects().map(|a| t.component[a].on_obj[f.x[a]]).collect();
        let psi: Vec<usize> = shape
            .morphisms()
            .map(|s| {
                let (a, b) = (shape.src(s), shape.dst(s));
                e.at[b]
                    .then(t.square[s].components[f.x[a]], t.component[b].on_mor[f.phi[s]])
                    .ok_or_else(|| {
                        Error::Invalid(format!(
                            "image comparison along `{}` fails to compose",
                            shape.morphism_id(s)
                        ))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        let idx = de.family_index(&y, &psi).ok_or_else(|| {
            Error::Invalid(
                "transformation does not carry descent families to descent families".to_string(),
            )
        })?;
        on_obj.push(idx);
    }
    let mut on_mor = Vec::with_capacity(dd.arrows.len());
    for m in &dd.arrows {
        let comps: Vec<usize> =
            shape.objects().map(|a| t.component[a].on_mor[m.components[a]]).collect();
        let idx = de.arrow_index(on_obj[m.src], on_obj[m.dst], &comps).ok_or_else(|| {
            Error::Invalid(
                "transformation does not carry descent arrows to descent arrows".to_string(),
            )
        })?;
        on_mor.push(idx);
    }
    Ok(FunctorData { on_obj, on_mor })
}

/// The natural transformation between induced functors coming from a
/// modification `m: t ⇛ u`, with `f_t`/`f_u` the functors computed by
/// [`induced_on_descent`] for `t` and `u`.
pub fn induced_on_descent_2(
    m: &Modification,
    dd: &DescentCat,
    de: &DescentCat,
    f_t: &FunctorData,
    f_u: &FunctorData,
) -> Result<NatTransData> {
    let components = dd
        .families
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let comps: Vec<usize> =
                (0..f.x.len()).map(|a| m.at[a].components[f.x[a]]).collect();
            de.arrow_index(f_t.on_obj[i], f_u.on_obj[i], &comps).ok_or_else(|| {
                Error::Invalid(
                    "modification components do not assemble into descent arrows".to_string(),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NatTransData { components })
}

/// Outcome of [`complete_family`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completion {
    /// All comparisons determined and every cocycle equation verified.
    Family(DescentFamily),
    /// Some equation over the named composable pair cannot be satisfied.
    Inconsistent { first: usize, then: usize },
    /// Propagation stalled with the named comparison still unknown.
    Underdetermined { mor: usize },
}

/// Completes a partial descent family from seed comparisons.
///
/// Starting from the forced identity comparisons and the seeds, repeatedly
/// solves cocycle equations with exactly one unknown (forward for the
/// composite, backward for either factor when the solution is unique). The
/// leftover equations — those that never defined a value — are then checked;
/// any failure is reported as [`Completion::Inconsistent`], which is the
/// triple-overlap consistency condition in reduced descent data.
pub fn complete_family(
    pf: &PseudoFunctor,
    x: &[usize],
    seeds: &BTreeMap<usize, usize>,
) -> Result<Completion> {
    let shape = &pf.shape;
    if x.len() != shape.object_count() {
        return Err(Error::ShapeMismatch(format!(
            "{} object choices for {} shape objects",
            x.len(),
            shape.object_count()
        )));
    }
    let mut phi: Vec<Option<usize>> = vec![None; shape.morphism_count()];
    for a in shape.objects() {
        let unit = pf.unit_iso[a].components[x[a]];
        let inv = pf.at[a].inverse(unit).ok_or_else(|| {
            Error::Invalid(format!(
                "unit comparison at `{}` is not invertible",
                shape.object_id(a)
            ))
        })?;
        phi[shape.identity(a)] = Some(inv);
    }
    for (&s, &f) in seeds {
        if s >= shape.morphism_count() {
            return Err(Error::UnknownId { kind: "shape morphism", id: s.to_string() });
        }
        let (a, b) = (shape.src(s), shape.dst(s));
        if !pf.at[b].isos(pf.along[s].on_obj[x[a]], x[b]).contains(&f) {
            return Err(Error::ShapeMismatch(format!(
                "seed along `{}` is not an invertible comparison for these objects",
                shape.morphism_id(s)
            )));
        }
        if let Some(existing) = phi[s] {
            if existing != f {
                return Ok(Completion::Inconsistent { first: s, then: s });
            }
        }
        phi[s] = Some(f);
    }

    let invalid = |what: &str| Error::Invalid(format!("pseudofunctor data is broken: {what}"));
    loop {
        let mut changed = false;
        for s in shape.morphisms() {
            for sp in shape.morphisms() {
                let Some(t) = shape.then(s, sp) else { continue };
                let (a, b, c) = (shape.src(s), shape.dst(s), shape.dst(sp));
                let comp_x = pf.comp_iso[&(s, sp)].components[x[a]];
                match (phi[s], phi[sp], phi[t]) {
                    (Some(ps), Some(psp), None) => {
                        let v = pf.at[c]
                            .then_chain(&[comp_x, pf.along[sp].on_mor[ps], psp])
                            .ok_or_else(|| invalid("cocycle composite undefined"))?;
                        phi[t] = Some(v);
                        changed = true;
                    }
                    (Some(ps), None, Some(pt)) => {
                        let mapped = pf.along[sp].on_mor[ps];
                        let inv_mapped = pf.at[c]
                            .inverse(mapped)
                            .ok_or_else(|| invalid("image of an iso is not invertible"))?;
                        let inv_comp = pf.at[c]
                            .inverse(comp_x)
                            .ok_or_else(|| invalid("comparison is not invertible"))?;
                        let v = pf.at[c]
                            .then_chain(&[inv_mapped, inv_comp, pt])
                            .ok_or_else(|| invalid("cocycle composite undefined"))?;
                        phi[sp] = Some(v);
                        changed = true;
                    }
                    (None, Some(psp), Some(pt)) => {
                        let inv_comp = pf.at[c]
                            .inverse(comp_x)
                            .ok_or_else(|| invalid("comparison is not invertible"))?;
                        let inv_psp = pf.at[c]
                            .inverse(psp)
                            .ok_or_else(|| invalid("comparison is not invertible"))?;
                        let target = pf.at[c]
                            .then_chain(&[inv_comp, pt, inv_psp])
                            .ok_or_else(|| invalid("cocycle composite undefined"))?;
                        let candidates: Vec<usize> = pf.at[b]
                            .isos(pf.along[s].on_obj[x[a]], x[b])
                            .into_iter()
                            .filter(|&f| pf.along[sp].on_mor[f] == target)
                            .collect();
                        match candidates.len() {
                            0 => return Ok(Completion::Inconsistent { first: s, then: sp }),
                            1 => {
                                phi[s] = Some(candidates[0]);
                                changed = true;
                            }
                            _ => {}
                        }
                    }
                    _ => {}
                }
            }
        }
        if !changed {
            break;
        }
    }

    if let Some(s) = shape.morphisms().find(|&s| phi[s].is_none()) {
        return Ok(Completion::Underdetermined { mor: s });
    }
    for s in shape.morphisms() {
        for sp in shape.morphisms() {
            if !cocycle_ok(pf, x, &phi, s, sp) {
                return Ok(Completion::Inconsistent { first: s, then: sp });
            }
        }
    }
    Ok(Completion::Family(DescentFamily {
        x: x.to_vec(),
        phi: phi.into_iter().map(|p| p.unwrap()).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::identity_functor;
    use crate::fixtures;
    use crate::Caps;

    fn z2_chain(n: usize) -> PseudoFunctor {
        PseudoFunctor::constant(fixtures::chain_category(n), fixtures::cyclic2()).unwrap()
    }

    #[test]
    fn stored_families_satisfy_conditions_post_hoc() {
        let pf = z2_chain(3);
        let dc = descent_category(&pf, &Caps::default()).unwrap();
        assert!(!dc.families.is_empty());
        for f in &dc.families {
            let phi: Vec<Option<usize>> = f.phi.iter().map(|&p| Some(p)).collect();
            assert!(unit_ok(&pf, &f.x, &phi));
            for s in pf.shape.morphisms() {
                for sp in pf.shape.morphisms() {
                    assert!(cocycle_ok(&pf, &f.x, &phi, s, sp));
                }
            }
        }
    }

    #[test]
    fn projections_invert_stored_comparisons() {
        let pf = z2_chain(2);
        let dc = descent_category(&pf, &Caps::default()).unwrap();
        let z2 = &pf.at[0];
        let arrow = pf
            .shape
            .morphisms()
            .find(|&s| pf.shape.src(s) == 0 && pf.shape.dst(s) == 1)
            .unwrap();
        let (_, comparisons) = descent_projection(&pf, &dc, 0).unwrap();
        for (i, f) in dc.families.iter().enumerate() {
            assert_eq!(
                z2.then(f.phi[arrow], comparisons[arrow].components[i]),
                Some(z2.identity(f.x[1]))
            );
        }
    }

    #[test]
    fn projection_comparisons_are_natural() {
        let pf = z2_chain(2);
        let dc = descent_category(&pf, &Caps::default()).unwrap();
        for a in pf.shape.objects() {
            let (pi_a, comparisons) = descent_projection(&pf, &dc, a).unwrap();
            assert!(validate_functor(&dc.cat, &pf.at[a], &pi_a).is_empty());
            for s in pf.shape.morphisms() {
                let (sa, sb) = (pf.shape.src(s), pf.shape.dst(s));
                let (pi_src, _) = descent_projection(&pf, &dc, sa).unwrap();
                let (pi_dst, _) = descent_projection(&pf, &dc, sb).unwrap();
                let composite = then_functor(&pi_src, &pf.along[s]);
                assert!(validate_nat(
                    &dc.cat,
                    &pf.at[sb],
                    &pi_dst,
                    &composite,
                    &comparisons[s],
                    true
                )
                .is_empty());
            }
        }
    }

    #[test]
    fn mediator_of_own_projections_is_identity() {
        let pf = z2_chain(2);
        let dc = descent_category(&pf, &Caps::default()).unwrap();
        let legs: Vec<FunctorData> = pf
            .shape
            .objects()
            .map(|a| descent_projection(&pf, &dc, a).unwrap().0)
            .collect();
        let leg_isos = descent_projection(&pf, &dc, 0).unwrap().1;
        let cone = Cone { apex: dc.cat.clone(), legs: legs.clone(), leg_isos };
        let med = mediator(&pf, &dc, &cone).unwrap();
        assert_eq!(med, identity_functor(&dc.cat));
        // Projections reproduce the legs exactly.
        for a in pf.shape.objects() {
            let (pi, _) = descent_projection(&pf, &dc, a).unwrap();
            assert_eq!(then_functor(&med, &pi), legs[a]);
        }
    }

    #[test]
    fn point_cone_picks_its_family() {
        let pf = z2_chain(2);
        let dc = descent_category(&pf, &Caps::default()).unwrap();
        let one = fixtures::terminal();
        // Pick family 1 = (all *, phi = the nonidentity choice or identity,
        // whichever sorts second) via a cone from the terminal category.
        let target = 1;
        let f = &dc.families[target];
        let z2 = &pf.at[0];
        let legs: Vec<FunctorData> = pf
            .shape
            .objects()
            .map(|a| FunctorData { on_obj: vec![f.x[a]], on_mor: vec![z2.identity(f.x[a])] })
            .collect();
        let leg_isos: Vec<NatTransData> = pf
            .shape
            .morphisms()
            .map(|s| NatTransData {
                components: vec![pf.at[pf.shape.dst(s)].inverse(f.phi[s]).unwrap()],
            })
            .collect();
        let cone = Cone { apex: one.clone(), legs, leg_isos };
        let med = mediator(&pf, &dc, &cone).unwrap();
        assert_eq!(med.on_obj, vec![target]);
    }

    #[test]
    fn incoherent_cone_is_rejected_with_witness() {
        // Same point cone but with a comparison that breaks the unit
        // condition pasted in on the chain arrow — on a 3-chain the cocycle
        // (o0≤o1 then o1≤o2 vs o0≤o2) fails.
        let pf = z2_chain(3);
        let dc = descent_category(&pf, &Caps::default()).unwrap();
        let one = fixtures::terminal();
        let z2 = &pf.at[0];
        let t = z2.morphism_index("t").unwrap();
        let e = z2.morphism_index("e").unwrap();
        let legs: Vec<FunctorData> = pf
            .shape
            .objects()
            .map(|_| FunctorData { on_obj: vec![0], on_mor: vec![e] })
            .collect();
        let m01 = pf
            .shape
            .morphisms()
            .find(|&s| pf.shape.src(s) == 0 && pf.shape.dst(s) == 1)
            .unwrap();
        let leg_isos: Vec<NatTransData> = pf
            .shape
            .morphisms()
            .map(|s| NatTransData { components: vec![if s == m01 { t } else { e }] })
            .collect();
        let cone = Cone { apex: one, legs, leg_isos };
        match mediator(&pf, &dc, &cone) {
            Err(Error::ConeIncoherent(msg)) => assert!(msg.contains("cocycle")),
            other => panic!("expected cone incoherence, got {other:?}"),
        }
    }

    #[test]
    fn identity_transformation_induces_identity() {
        let pf = z2_chain(2);
        let dc = descent_category(&pf, &Caps::default()).unwrap();
        let t = PseudoTransformation::identity(&pf);
        let f = induced_on_descent(&pf, &pf, &t, &dc, &dc).unwrap();
        assert_eq!(f, identity_functor(&dc.cat));
    }

    #[test]
    fn identity_modification_induces_identity() {
        let pf = z2_chain(2);
        let dc = descent_category(&pf, &Caps::default()).unwrap();
        let t = PseudoTransformation::identity(&pf);
        let f = induced_on_descent(&pf, &pf, &t, &dc, &dc).unwrap();
        let m = Modification::identity(&pf, &t);
        let nat = induced_on_descent_2(&m, &dc, &dc, &f, &f).unwrap();
        assert_eq!(nat, crate::fincat::identity_nat(&dc.cat, &f));
    }

    #[test]
    fn completion_solves_forward_and_backward() {
        let pf = z2_chain(3);
        let shape = &pf.shape;
        let z2 = &pf.at[0];
        let t = z2.morphism_index("t").unwrap();
        let find = |a: usize, b: usize| {
            shape.morphisms().find(|&s| shape.src(s) == a && shape.dst(s) == b).unwrap()
        };
        let (m01, m12, m02) = (find(0, 1), find(1, 2), find(0, 2));
        let x = vec![0, 0, 0];

        // Forward: seeds on the two short arrows determine the long one.
        let seeds: BTreeMap<usize, usize> = [(m01, t), (m12, t)].into();
        match complete_family(&pf, &x, &seeds).unwrap() {
            Completion::Family(f) => {
                assert_eq!(f.phi[m02], z2.morphism_index("e").unwrap());
            }
            other => panic!("expected completion, got {other:?}"),
        }

        // Backward: the long arrow plus one short arrow determine the other.
        let seeds: BTreeMap<usize, usize> = [(m01, t), (m02, t)].into();
        match complete_family(&pf, &x, &seeds).unwrap() {
            Completion::Family(f) => {
                assert_eq!(f.phi[m12], z2.morphism_index("e").unwrap());
            }
            other => panic!("expected completion, got {other:?}"),
        }

        // No seeds on a chain: the non-identity arrows stay unknown.
        match complete_family(&pf, &x, &BTreeMap::new()).unwrap() {
            Completion::Underdetermined { .. } => {}
            other => panic!("expected underdetermined, got {other:?}"),
        }
    }

    #[test]
    fn completed_families_are_enumerated_families() {
        let pf = z2_chain(3);
        let dc = descent_category(&pf, &Caps::default()).unwrap();
        let shape = &pf.shape;
        let z2 = &pf.at[0];
        let find = |a: usize, b: usize| {
            shape.morphisms().find(|&s| shape.src(s) == a && shape.dst(s) == b).unwrap()
        };
        let (m01, m12) = (find(0, 1), find(1, 2));
        let mut seen = 0;
        for &p1 in &[0usize, 1] {
            for &p2 in &[0usize, 1] {
                let seeds: BTreeMap<usize, usize> = [
                    (m01, [z2.morphism_index("e").unwrap(), z2.morphism_index("t").unwrap()][p1]),
                    (m12, [z2.morphism_index("e").unwrap(), z2.morphism_index("t").unwrap()][p2]),
                ]
                .into();
                if let Completion::Family(f) = complete_family(&pf, &[0, 0, 0], &seeds).unwrap() {
                    assert!(dc.family_index(&f.x, &f.phi).is_some());
                    seen += 1;
                }
            }
        }
        assert_eq!(seen, 4);
        assert_eq!(dc.families.len(), 4);
    }

    #[test]
    fn induced_respects_transformation_composition() {
        // Two copies of the swap-style transformation on a ℤ/2 chain:
        // conjugation by t at each object. Composite image = image composite.
        let pf = z2_chain(2);
        let dc = descent_category(&pf, &Caps::default()).unwrap();
        let z2 = &pf.at[0];
        let t = z2.morphism_index("t").unwrap();
        // Transformation whose square over the chain arrow is `t`.
        let tr = PseudoTransformation {
            component: vec![identity_functor(z2), identity_functor(z2)],
            square: pf
                .shape
                .morphisms()
                .map(|s| NatTransData {
                    components: vec![if pf.shape.is_identity(s) { z2.identity(0) } else { t }],
                })
                .collect(),
        };
        assert!(super::super::validate_pseudo_transformation(&pf, &pf, &tr).is_empty());
        let composite = super::super::compose_transformations(&pf, &pf, &pf, &tr, &tr).unwrap();
        assert!(super::super::validate_pseudo_transformation(&pf, &pf, &composite).is_empty());
        let f1 = induced_on_descent(&pf, &pf, &tr, &dc, &dc).unwrap();
        let f12 = induced_on_descent(&pf, &pf, &composite, &dc, &dc).unwrap();
        assert_eq!(then_functor(&f1, &f1), f12);
    }

    #[test]
    fn induced_functor_composes_with_projections_via_squares() {
        let pf = z2_chain(2);
        let dc = descent_category(&pf, &Caps::default()).unwrap();
        let z2 = &pf.at[0];
        let t = z2.morphism_index("t").unwrap();
        let tr = PseudoTransformation {
            component: vec![identity_functor(z2), identity_functor(z2)],
            square: pf
                .shape
                .morphisms()
                .map(|s| NatTransData {
                    components: vec![if pf.shape.is_identity(s) { z2.identity(0) } else { t }],
                })
                .collect(),
        };
        let f = induced_on_descent(&pf, &pf, &tr, &dc, &dc).unwrap();
        // π_a ∘ induced = component_a ∘ π_a here (components are identities).
        for a in pf.shape.objects() {
            let (pi, _) = descent_projection(&pf, &dc, a).unwrap();
            assert_eq!(then_functor(&f, &pi), then_functor(&pi, &tr.component[a]));
        }
    }
}
