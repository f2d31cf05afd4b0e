//! Section categories of strict 2-representations.
//!
//! A section of a representation picks an object over every basepoint and an
//! invertible comparison over every 1-generator, coherently under every
//! 2-generator; a map of sections is a componentwise family of morphisms
//! commuting with the comparisons. Enumeration is exhaustive over the value
//! tables, candidate-budgeted, and canonically ordered, so the resulting
//! category is deterministic.

use crate::error::{Budget, Caps, Error, Result};
use crate::fincat::{indexed_id, FinCat, FunctorData, MorData};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::{invert_table, Presentation2, TwoRep, Word};

/// One section: objects per basepoint, comparisons per 1-generator.
///
/// `phi[g]` is an invertible morphism `along1[g](x[src g]) → x[dst g]` in
/// the value category at `dst g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionFamily {
    pub x: Vec<usize>,
    pub phi: Vec<usize>,
}

/// One map of sections: a morphism per basepoint commuting with `phi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionArrow {
    pub src: usize,
    pub dst: usize,
    pub components: Vec<usize>,
}

/// The category of sections, with the data each object and morphism stands
/// for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionCat {
    pub cat: FinCat,
    pub families: Vec<SectionFamily>,
    pub arrows: Vec<SectionArrow>,
}

impl SectionCat {
    /// Index of the family with the given object and comparison choices.
    pub fn family_index(&self, x: &[usize], phi: &[usize]) -> Option<usize> {
        self.families.iter().position(|f| f.x == x && f.phi == phi)
    }

    /// Index of the arrow with the given endpoints and components.
    pub fn arrow_index(&self, src: usize, dst: usize, components: &[usize]) -> Option<usize> {
        self.arrows
            .iter()
            .position(|a| a.src == src && a.dst == dst && a.components == components)
    }
}

/// The comparison a section family induces along a word: the fold of its
/// per-generator comparisons, an invertible morphism `ev(w)(x[src]) →
/// x[dst]` in the value category at the word's endpoint.
pub fn family_comparison(
    p: &Presentation2,
    rep: &TwoRep,
    x: &[usize],
    phi: &[usize],
    w: &Word,
) -> Result<usize> {
    let a = p.point_index(&w.at)?;
    let mut cur = a;
    let mut m = rep.at[a].identity(x[a]);
    for l in &w.letters {
        let g = p.gen1_index(&l.gen)?;
        let (s, d) = p.gen1_endpoints(g)?;
        let fail = || Error::Invalid(format!("comparison fold stalls at `{}`", l.gen));
        if l.inverted {
            let inv_phi = rep.at[d].inverse(phi[g]).ok_or_else(fail)?;
            let pre = rep.at[d].then(m, inv_phi).ok_or_else(fail)?;
            let table =
                invert_table(&rep.at[s], &rep.at[d], &rep.along1[g]).ok_or_else(|| {
                    Error::Invalid(format!(
                        "letter `{}`⁻¹: the functor along `{}` is not invertible on the nose",
                        l.gen, l.gen
                    ))
                })?;
            m = table.on_mor[pre];
            cur = s;
        } else {
            let mapped = rep.along1[g].on_mor[m];
            m = rep.at[d].then(mapped, phi[g]).ok_or_else(fail)?;
            cur = d;
        }
    }
    let _ = cur;
    Ok(m)
}

/// Checks the coherence of a (complete) family under one 2-generator: the
/// fold along the source word must equal the cell's component followed by
/// the fold along the target word.
fn cell_coherent(
    p: &Presentation2,
    rep: &TwoRep,
    x: &[usize],
    phi: &[usize],
    ci: usize,
) -> Result<bool> {
    let cell = &p.gen2[ci];
    let (a, b) = super::word_endpoints(p, &cell.src)?;
    let lhs = family_comparison(p, rep, x, phi, &cell.src)?;
    let rhs_fold = family_comparison(p, rep, x, phi, &cell.dst)?;
    let comp = rep.along2[ci].components[x[a]];
    Ok(rep.at[b].then(comp, rhs_fold) == Some(lhs))
}

/// The category of global sections of a representation.
///
/// Families and arrows are enumerated exhaustively in canonical order; every
/// candidate costs budget, and the resulting category must fit the size
/// caps.
pub fn global_sections_nu(p: &Presentation2, rep: &TwoRep, caps: &Caps) -> Result<SectionCat> {
    if rep.at.len() != p.point_count()
        || rep.along1.len() != p.gen1_count()
        || rep.along2.len() != p.gen2_count()
    {
        return Err(Error::ShapeMismatch(
            "representation tables do not match the presentation".into(),
        ));
    }
    let endpoints = p
        .gen1
        .iter()
        .enumerate()
        .map(|(g, _)| p.gen1_endpoints(g))
        .collect::<Result<Vec<_>>>()?;

    // Stage at which each 2-generator becomes checkable: the largest
    // 1-generator used by either side, or `None` for cells between identity
    // words (checkable as soon as the objects are chosen).
    let mut cell_stage: Vec<Option<usize>> = Vec::with_capacity(p.gen2_count());
    for cell in &p.gen2 {
        let mut last = None;
        for l in cell.src.letters.iter().chain(&cell.dst.letters) {
            let g = p.gen1_index(&l.gen)?;
            last = Some(last.map_or(g, |prev: usize| prev.max(g)));
        }
        cell_stage.push(last);
    }

    let mut budget = caps.budget();
    let mut families: Vec<SectionFamily> = Vec::new();

    fn assign_phi(
        p: &Presentation2,
        rep: &TwoRep,
        endpoints: &[(usize, usize)],
        cell_stage: &[Option<usize>],
        x: &[usize],
        phi: &mut Vec<usize>,
        budget: &mut Budget,
        out: &mut Vec<SectionFamily>,
    ) -> Result<()> {
        let g = phi.len();
        if g == p.gen1_count() {
            budget.tick()?;
            out.push(SectionFamily { x: x.to_vec(), phi: phi.clone() });
            return Ok(());
        }
        let (s, d) = endpoints[g];
        'next: for cand in rep.at[d].isos(rep.along1[g].on_obj[x[s]], x[d]) {
            budget.tick()?;
            phi.push(cand);
            for (ci, stage) in cell_stage.iter().enumerate() {
                if *stage == Some(g) && !cell_coherent(p, rep, x, phi, ci)? {
                    phi.pop();
                    continue 'next;
                }
            }
            assign_phi(p, rep, endpoints, cell_stage, x, phi, budget, out)?;
            phi.pop();
        }
        Ok(())
    }

    fn assign_x(
        p: &Presentation2,
        rep: &TwoRep,
        endpoints: &[(usize, usize)],
        cell_stage: &[Option<usize>],
        x: &mut Vec<usize>,
        budget: &mut Budget,
        out: &mut Vec<SectionFamily>,
    ) -> Result<()> {
        let q = x.len();
        if q == p.point_count() {
            for (ci, stage) in cell_stage.iter().enumerate() {
                if stage.is_none() && !cell_coherent(p, rep, x, &[], ci)? {
                    return Ok(());
                }
            }
            let mut phi = Vec::new();
            return assign_phi(p, rep, endpoints, cell_stage, x, &mut phi, budget, out);
        }
        for cand in rep.at[q].objects() {
            budget.tick()?;
            x.push(cand);
            assign_x(p, rep, endpoints, cell_stage, x, budget, out)?;
            x.pop();
        }
        Ok(())
    }

    if p.point_count() == 0 {
        budget.tick()?;
        families.push(SectionFamily { x: vec![], phi: vec![] });
    } else {
        let mut x = Vec::new();
        assign_x(p, rep, &endpoints, &cell_stage, &mut x, &mut budget, &mut families)?;
    }

    // Arrows: componentwise morphisms commuting with every comparison. The
    // square for a generator is checked as soon as both endpoints have
    // components.
    let gen_stage: Vec<usize> = endpoints.iter().map(|&(s, d)| s.max(d)).collect();

    fn assign_components(
        p: &Presentation2,
        rep: &TwoRep,
        endpoints: &[(usize, usize)],
        gen_stage: &[usize],
        fi: &SectionFamily,
        fj: &SectionFamily,
        comps: &mut Vec<usize>,
        budget: &mut Budget,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let q = comps.len();
        if q == p.point_count() {
            budget.tick()?;
            out.push(comps.clone());
            return Ok(());
        }
        'next: for cand in rep.at[q].hom(fi.x[q], fj.x[q]) {
            budget.tick()?;
            comps.push(cand);
            for (g, &stage) in gen_stage.iter().enumerate() {
                if stage == q {
                    let (s, d) = endpoints[g];
                    let lhs = rep.at[d].then(rep.along1[g].on_mor[comps[s]], fj.phi[g]);
                    let rhs = rep.at[d].then(fi.phi[g], comps[d]);
                    if lhs.is_none() || lhs != rhs {
                        comps.pop();
                        continue 'next;
                    }
                }
            }
            assign_components(p, rep, endpoints, gen_stage, fi, fj, comps, budget, out)?;
            comps.pop();
        }
        Ok(())
    }

    let mut arrows = Vec::new();
    for (i, fi) in families.iter().enumerate() {
        for (j, fj) in families.iter().enumerate() {
            let mut found = Vec::new();
            if p.point_count() == 0 {
                found.push(vec![]);
            } else {
                let mut comps = Vec::new();
                assign_components(
                    p,
                    rep,
                    &endpoints,
                    &gen_stage,
                    fi,
                    fj,
                    &mut comps,
                    &mut budget,
                    &mut found,
                )?;
            }
            for components in found {
                arrows.push(SectionArrow { src: i, dst: j, components });
            }
        }
    }

    caps.admit_category(families.len(), arrows.len())?;

    let objects: Vec<String> =
        (0..families.len()).map(|i| indexed_id("s", i, families.len())).collect();
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
                p.point_range().map(|q| rep.at[q].identity(f.x[q])).collect();
            *lookup
                .get(&(i, i, comps.as_slice()))
                .expect("identity components commute with every comparison")
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
            .map(|(q, (&m1, &m2))| rep.at[q].then(m1, m2))
            .collect::<Option<Vec<_>>>()?;
        lookup.get(&(af.src, ag.dst, comps.as_slice())).copied()
    });

    Ok(SectionCat { cat, families, arrows })
}

/// The evaluation functor at one basepoint: a section to its object there, a
/// section map to its component there.
pub fn stalk_projection(sc: &SectionCat, point: usize) -> FunctorData {
    FunctorData {
        on_obj: sc.families.iter().map(|f| f.x[point]).collect(),
        on_mor: sc.arrows.iter().map(|a| a.components[point]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::identity_functor;
    use crate::fixtures;

    #[test]
    fn sections_over_a_point_recover_the_value_category() {
        let p = fixtures::point_presentation();
        let z2 = fixtures::cyclic2();
        let rep = TwoRep { at: vec![z2.clone()], along1: vec![], along2: vec![] };
        let sc = global_sections_nu(&p, &rep, &crate::error::Caps::default()).unwrap();
        assert_eq!(sc.cat.object_count(), 1);
        assert_eq!(sc.cat.morphism_count(), 2);
    }

    #[test]
    fn an_empty_value_category_gives_an_empty_section_category() {
        let p = fixtures::circle_presentation();
        let empty = fixtures::discrete(&[]);
        let rep = TwoRep {
            at: vec![empty.clone()],
            along1: vec![identity_functor(&empty)],
            along2: vec![],
        };
        let sc = global_sections_nu(&p, &rep, &crate::error::Caps::default()).unwrap();
        assert_eq!(sc.cat.object_count(), 0);
        assert_eq!(sc.cat.morphism_count(), 0);
    }

    #[test]
    fn the_stalk_projection_reads_off_components() {
        let p = fixtures::interval_presentation();
        let w = fixtures::walking_arrow();
        let rep = TwoRep {
            at: vec![w.clone(), w.clone()],
            along1: vec![identity_functor(&w)],
            along2: vec![],
        };
        let sc = global_sections_nu(&p, &rep, &crate::error::Caps::default()).unwrap();
        for (i, f) in sc.families.iter().enumerate() {
            assert_eq!(stalk_projection(&sc, 0).on_obj[i], f.x[0]);
            assert_eq!(stalk_projection(&sc, 1).on_obj[i], f.x[1]);
        }
    }
}
