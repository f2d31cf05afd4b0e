//! Maps between strict 2-representations of a shared presentation.
//!
//! A [`RepMap`] is the representation-level analogue of a pseudonatural
//! transformation: a functor between the value categories at each basepoint
//! and an invertible square over each 1-generator, compatible with the
//! 2-generators. Maps act on global sections, compose, and pull back along
//! presentation maps, and every operation works on literal tables.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::fincat::{
    identity_functor, identity_nat, then_functor, validate_functor, validate_nat, FunctorData,
    FunctorViolation, NatTransData, NatViolation,
};

use super::{invert_table, word_endpoints, Presentation2, PresentationMap, SectionCat, TwoRep, Word};

/// A map of 2-representations of the same presentation.
///
/// `component[p]` is a functor between the value categories at basepoint
/// `p`; `square[g]` is an invertible transformation from
/// `component[src] ; β'(g)` to `β(g) ; component[dst]` over each
/// 1-generator, in the same orientation as pseudonatural squares.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepMap {
    pub component: Vec<FunctorData>,
    pub square: Vec<NatTransData>,
}

/// The identity map on a representation.
pub fn identity_rep_map(p: &Presentation2, rep: &TwoRep) -> RepMap {
    let component = rep.at.iter().map(identity_functor).collect();
    let square = p
        .gen1
        .iter()
        .zip(&rep.along1)
        .map(|(g, t)| {
            let b = p.point_index(&g.dst).expect("presentation endpoints resolve");
            identity_nat(&rep.at[b], t)
        })
        .collect();
    RepMap { component, square }
}

/// A defect found by [`validate_rep_map`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RepMapViolation {
    Shape(String),
    /// A component table is not a functor.
    Component { point: String, violation: FunctorViolation },
    /// A generator square is not natural or not invertible.
    Square { gen: String, violation: NatViolation },
    /// The folded squares over a 2-generator's sides do not intertwine the
    /// two cell transformations.
    Cell { cell: String, at_object: String },
}

impl fmt::Display for RepMapViolation {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepMapViolation::Shape(m) => write!(w, "shape mismatch: {m}"),
            RepMapViolation::Component { point, violation } => {
                write!(w, "component at `{point}`: {violation}")
            }
            RepMapViolation::Square { gen, violation } => {
                write!(w, "square over `{gen}`: {violation}")
            }
            RepMapViolation::Cell { cell, at_object } => {
                write!(w, "cell `{cell}` is not respected at `{at_object}`")
            }
        }
    }
}

/// Checks a representation map: components must be functors, squares must
/// be invertible and natural, and over every 2-generator the folded word
/// squares must intertwine the source and target cell transformations.
pub fn validate_rep_map(
    p: &Presentation2,
    src: &TwoRep,
    dst: &TwoRep,
    f: &RepMap,
) -> Vec<RepMapViolation> {
    let mut out = Vec::new();
    if src.at.len() != p.point_count()
        || dst.at.len() != p.point_count()
        || src.along1.len() != p.gen1_count()
        || dst.along1.len() != p.gen1_count()
        || src.along2.len() != p.gen2_count()
        || dst.along2.len() != p.gen2_count()
    {
        out.push(RepMapViolation::Shape(
            "representations do not match the presentation".to_string(),
        ));
        return out;
    }
    if f.component.len() != p.point_count() || f.square.len() != p.gen1_count() {
        out.push(RepMapViolation::Shape(format!(
            "expected {} components and {} squares; found {} and {}",
            p.point_count(),
            p.gen1_count(),
            f.component.len(),
            f.square.len(),
        )));
        return out;
    }
    for a in p.point_range() {
        for v in validate_functor(&src.at[a], &dst.at[a], &f.component[a]) {
            out.push(RepMapViolation::Component {
                point: p.point_id(a).to_string(),
                violation: v,
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (g, gen) in p.gen1.iter().enumerate() {
        let Ok((a, b)) = p.gen1_endpoints(g) else {
            continue;
        };
        let lhs = then_functor(&f.component[a], &dst.along1[g]);
        let rhs = then_functor(&src.along1[g], &f.component[b]);
        for v in validate_nat(&src.at[a], &dst.at[b], &lhs, &rhs, &f.square[g], true) {
            out.push(RepMapViolation::Square { gen: gen.id.clone(), violation: v });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (ci, cell) in p.gen2.iter().enumerate() {
        let folded = rep_map_word_square(p, src, dst, f, &cell.src)
            .and_then(|s| Ok((s, rep_map_word_square(p, src, dst, f, &cell.dst)?)));
        let Ok((sq_src, sq_dst)) = folded else {
            out.push(RepMapViolation::Shape(format!(
                "squares do not fold along the sides of `{}`",
                cell.id
            )));
            continue;
        };
        let Ok((a, b)) = word_endpoints(p, &cell.src) else {
            continue;
        };
        for x in src.at[a].objects() {
            let lhs = dst.at[b].then(
                sq_src.components[x],
                f.component[b].on_mor[src.along2[ci].components[x]],
            );
            let rhs = dst.at[b].then(
                dst.along2[ci].components[f.component[a].on_obj[x]],
                sq_dst.components[x],
            );
            if lhs.is_none() || lhs != rhs {
                out.push(RepMapViolation::Cell {
                    cell: cell.id.clone(),
                    at_object: src.at[a].object_id(x).to_string(),
                });
            }
        }
    }
    out
}

/// Folds a map's generator squares along a word.
///
/// The result is the square of the map over the evaluated word: its
/// component at an object `x` of the value category at the word's start
/// runs from the target evaluation of the mapped object to the mapped
/// source evaluation. Inverted letters use the strict inverses of the
/// evaluation tables and of the generator square.
pub fn rep_map_word_square(
    p: &Presentation2,
    src: &TwoRep,
    dst: &TwoRep,
    f: &RepMap,
    w: &Word,
) -> Result<NatTransData> {
    if f.component.len() != p.point_count() || f.square.len() != p.gen1_count() {
        return Err(Error::ShapeMismatch("map does not match the presentation".into()));
    }
    let (a, _) = word_endpoints(p, w)?;
    let mut obj: Vec<usize> = src.at[a].objects().collect();
    let mut components: Vec<usize> =
        obj.iter().map(|&x| dst.at[a].identity(f.component[a].on_obj[x])).collect();
    let paste_error = || Error::Invalid("map squares do not paste along the word".to_string());
    for l in &w.letters {
        let g = p.gen1_index(&l.gen)?;
        let (s, d) = p.gen1_endpoints(g)?;
        if !l.inverted {
            for x in 0..obj.len() {
                components[x] = dst.at[d]
                    .then(
                        dst.along1[g].on_mor[components[x]],
                        f.square[g].components[obj[x]],
                    )
                    .ok_or_else(paste_error)?;
                obj[x] = src.along1[g].on_obj[obj[x]];
            }
        } else {
            let not_invertible = || {
                Error::Invalid(format!("generator `{}` is not invertible on the nose", l.gen))
            };
            let src_inv = invert_table(&src.at[s], &src.at[d], &src.along1[g])
                .ok_or_else(not_invertible)?;
            let dst_inv = invert_table(&dst.at[s], &dst.at[d], &dst.along1[g])
                .ok_or_else(not_invertible)?;
            for x in 0..obj.len() {
                let back = src_inv.on_obj[obj[x]];
                let undone = dst.at[d]
                    .inverse(f.square[g].components[back])
                    .ok_or_else(|| Error::Invalid("a map square is not invertible".into()))?;
                components[x] = dst.at[s]
                    .then(dst_inv.on_mor[components[x]], dst_inv.on_mor[undone])
                    .ok_or_else(paste_error)?;
                obj[x] = back;
            }
        }
    }
    Ok(NatTransData { components })
}

/// Composes representation maps `f: first ⇒ mid` then `g: mid ⇒ last`.
///
/// Components compose as functors; the square over each generator pastes
/// `g`'s square at `f`'s component with `g`'s component applied to `f`'s
/// square.
pub fn compose_rep_maps(
    p: &Presentation2,
    first: &TwoRep,
    mid: &TwoRep,
    last: &TwoRep,
    f: &RepMap,
    g: &RepMap,
) -> Result<RepMap> {
    if f.component.len() != p.point_count()
        || g.component.len() != p.point_count()
        || f.square.len() != p.gen1_count()
        || g.square.len() != p.gen1_count()
        || mid.at.len() != p.point_count()
    {
        return Err(Error::ShapeMismatch(
            "maps to compose do not match the presentation".into(),
        ));
    }
    let component = (0..p.point_count())
        .map(|x| then_functor(&f.component[x], &g.component[x]))
        .collect();
    let mut square = Vec::with_capacity(p.gen1_count());
    for gi in 0..p.gen1_count() {
        let (s, d) = p.gen1_endpoints(gi)?;
        let components = first.at[s]
            .objects()
            .map(|x| {
                last.at[d]
                    .then(
                        g.square[gi].components[f.component[s].on_obj[x]],
                        g.component[d].on_mor[f.square[gi].components[x]],
                    )
                    .ok_or_else(|| Error::Invalid("map squares do not paste".to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        square.push(NatTransData { components });
    }
    Ok(RepMap { component, square })
}

/// Pullback of a representation map along a presentation map: components
/// reindex through the point images and squares fold along the image words.
pub fn pullback_rep_map(
    src_p: &Presentation2,
    dst_p: &Presentation2,
    along: &PresentationMap,
    src: &TwoRep,
    dst: &TwoRep,
    f: &RepMap,
) -> Result<RepMap> {
    if along.on_point.len() != src_p.point_count()
        || along.on_gen1.len() != src_p.gen1_count()
    {
        return Err(Error::ShapeMismatch(
            "presentation map does not match its source".into(),
        ));
    }
    let component = along
        .on_point
        .iter()
        .map(|&q| {
            f.component
                .get(q)
                .cloned()
                .ok_or_else(|| Error::ShapeMismatch("point image out of range".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let square = along
        .on_gen1
        .iter()
        .map(|w| rep_map_word_square(dst_p, src, dst, f, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(RepMap { component, square })
}

/// The action of a representation map on global sections.
///
/// A family maps pointwise through the components, with each transition
/// conjugated by the generator square; an arrow maps pointwise. Both images
/// are located in the target section category by exhaustive lookup, so a
/// failure to land there is reported rather than fabricated.
pub fn rep_map_on_sections(
    p: &Presentation2,
    src: &TwoRep,
    dst: &TwoRep,
    f: &RepMap,
    src_sections: &SectionCat,
    dst_sections: &SectionCat,
) -> Result<FunctorData> {
    if f.component.len() != p.point_count() || f.square.len() != p.gen1_count() {
        return Err(Error::ShapeMismatch("map does not match the presentation".into()));
    }
    let mut on_obj = Vec::with_capacity(src_sections.families.len());
    for (i, fam) in src_sections.families.iter().enumerate() {
        let x: Vec<usize> = fam
            .x
            .iter()
            .enumerate()
            .map(|(pt, &ob)| f.component[pt].on_obj[ob])
            .collect();
        let mut phi = Vec::with_capacity(p.gen1_count());
        for g in 0..p.gen1_count() {
            let (s, d) = p.gen1_endpoints(g)?;
            let m = dst.at[d]
                .then(f.square[g].components[fam.x[s]], f.component[d].on_mor[fam.phi[g]])
                .ok_or_else(|| {
                    Error::Invalid("mapped family data does not compose".to_string())
                })?;
            phi.push(m);
        }
        let idx = dst_sections.family_index(&x, &phi).ok_or_else(|| {
            Error::Invalid(format!(
                "the image of section `{}` is not a section",
                src_sections.cat.object_id(i)
            ))
        })?;
        on_obj.push(idx);
    }
    let mut on_mor = Vec::with_capacity(src_sections.arrows.len());
    for (i, arr) in src_sections.arrows.iter().enumerate() {
        let comps: Vec<usize> = arr
            .components
            .iter()
            .enumerate()
            .map(|(pt, &m)| f.component[pt].on_mor[m])
            .collect();
        let idx = dst_sections
            .arrow_index(on_obj[arr.src], on_obj[arr.dst], &comps)
            .ok_or_else(|| {
                Error::Invalid(format!(
                    "the image of section arrow `{}` is not a section arrow",
                    src_sections.cat.morphism_id(i)
                ))
            })?;
        on_mor.push(idx);
    }
    Ok(FunctorData { on_obj, on_mor })
}

/// The transformation on section categories induced by a pointwise family
/// of transformations between two section functors.
///
/// `m[p]` gives, at each basepoint, the components between the two maps'
/// component functors; the induced component at a family collects them at
/// the family's objects and is located as a section arrow.
pub fn nat_on_sections(
    src_sections: &SectionCat,
    dst_sections: &SectionCat,
    f: &FunctorData,
    g: &FunctorData,
    m: &[NatTransData],
) -> Result<NatTransData> {
    let mut components = Vec::with_capacity(src_sections.families.len());
    for (i, fam) in src_sections.families.iter().enumerate() {
        let comps: Vec<usize> = fam
            .x
            .iter()
            .enumerate()
            .map(|(pt, &ob)| {
                m.get(pt).and_then(|nat| nat.components.get(ob)).copied().ok_or_else(|| {
                    Error::ShapeMismatch(
                        "transformation components do not match the sections".into(),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let idx = dst_sections.arrow_index(f.on_obj[i], g.on_obj[i], &comps).ok_or_else(
            || {
                Error::Invalid(format!(
                    "the induced component at `{}` is not a section arrow",
                    src_sections.cat.object_id(i)
                ))
            },
        )?;
        components.push(idx);
    }
    Ok(NatTransData { components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_maps_validate_on_the_committed_representations() {
        let torus = fixtures::torus_presentation();
        for rep in fixtures::torus_reps() {
            let id = identity_rep_map(&torus, &rep);
            assert!(validate_rep_map(&torus, &rep, &rep, &id).is_empty());
        }
    }

    #[test]
    fn a_square_with_wrong_endpoints_is_located() {
        let p = fixtures::circle_presentation();
        let c = fixtures::iso_pair();
        let sw = fixtures::indiscrete_swap(&c);
        let rep = TwoRep { at: vec![c.clone()], along1: vec![sw.clone()], along2: vec![] };
        let mut f = identity_rep_map(&p, &rep);
        f.square[0].components[0] = 2;
        let vs = validate_rep_map(&p, &rep, &rep, &f);
        assert!(vs
            .iter()
            .any(|v| matches!(v, RepMapViolation::Square { gen, .. } if gen == "s")));
    }

    #[test]
    fn cell_compatibility_is_checked() {
        // Source: the torus twisted by t over its cell. Target: the same
        // tables with the trivial cell. No strict map with identity
        // components connects them, whatever squares are chosen.
        let torus = fixtures::torus_presentation();
        let twisted = fixtures::torus_reps().remove(2);
        let z = fixtures::cyclic2();
        let idf = crate::fincat::identity_functor(&z);
        let trivial = TwoRep {
            at: vec![z.clone()],
            along1: vec![idf.clone(), idf.clone()],
            along2: vec![NatTransData { components: vec![0] }],
        };
        for sd in 0..2 {
            for sh in 0..2 {
                let f = RepMap {
                    component: vec![idf.clone()],
                    square: vec![
                        NatTransData { components: vec![sd] },
                        NatTransData { components: vec![sh] },
                    ],
                };
                let vs = validate_rep_map(&torus, &twisted, &trivial, &f);
                assert!(vs
                    .iter()
                    .any(|v| matches!(v, RepMapViolation::Cell { cell, .. } if cell == "q")));
            }
        }
    }
}
