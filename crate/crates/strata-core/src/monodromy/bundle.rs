//! Bundles of presentations and pushforward of representations.
//!
//! A [`BundleDatum`] fibers one presentation over another: a fiber
//! presentation with an inclusion into the total presentation per basepoint,
//! a transport datum per base 1-generator, a homotopy datum per base
//! 2-generator, and optional composite overrides. Pushing a representation
//! of the total presentation forward replaces each fiber by its section
//! category, each transport by the induced functor between section
//! categories, and each homotopy by the induced comparison; the base
//! relations are then checked on the result, and any failure is reported as
//! a bundle incoherence naming the relation.

use crate::error::{Caps, Error, Result};
use crate::fincat::{identity_functor, then_functor, validate_nat, FunctorData, NatTransData};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::sections::{family_comparison, global_sections_nu, SectionCat};
use super::{
    eval_pasting, eval_word, pasting_boundary, subst_word, validate_presentation,
    validate_presentation_map, word_endpoints, word_join,
};

/// How one base 1-generator moves the fibers: a relabeling `t` of the
/// source fiber onto the target fiber, a connecting path in the total
/// presentation per fiber point, and a connecting square per fiber
/// 1-generator.
///
/// `paths[p]` runs from the included source point to the included image
/// point; `squares[δ]` (for `δ: p → r`) is a pasting from `i(δ) · paths[r]`
/// to `paths[p] · i(t δ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportDatum {
    pub t: super::PresentationMap,
    pub paths: Vec<super::Word>,
    pub squares: Vec<super::Pasting>,
}

/// How a base 2-generator compares the transports along its two sides: a
/// word `beta[p]` in the target fiber from the first transport's image of
/// `p` to the second's, and a filler pasting from `paths₀[p] · i(beta[p])`
/// to `paths₁[p]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyDatum {
    pub beta: Vec<super::Word>,
    pub fillers: Vec<super::Pasting>,
}

/// An override for the composite of two consecutive base generators: a
/// transport datum for the composite and a homotopy comparing it with the
/// fold of the two single-generator transports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeDatum {
    pub transport: TransportDatum,
    pub comparison: HomotopyDatum,
}

mod composite_entries {
    use super::CompositeDatum;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<(usize, usize), CompositeDatum>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let entries: Vec<(usize, usize, &CompositeDatum)> =
            m.iter().map(|(&(a, b), d)| (a, b, d)).collect();
        entries.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<(usize, usize), CompositeDatum>, D::Error> {
        let entries = Vec::<(usize, usize, CompositeDatum)>::deserialize(d)?;
        Ok(entries.into_iter().map(|(a, b, datum)| ((a, b), datum)).collect())
    }
}

/// A bundle: a total presentation fibered over a base presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleDatum {
    pub base: super::Presentation2,
    pub total: super::Presentation2,
    /// Fiber presentation per base point.
    pub fibers: Vec<super::Presentation2>,
    /// Inclusion of each fiber into the total presentation.
    pub inclusions: Vec<super::PresentationMap>,
    /// Transport datum per base 1-generator.
    pub transports: Vec<TransportDatum>,
    /// Homotopy datum per base 2-generator.
    pub homotopies: Vec<HomotopyDatum>,
    /// Composite overrides, keyed by consecutive base generator indices.
    #[serde(with = "composite_entries", default)]
    pub composites: BTreeMap<(usize, usize), CompositeDatum>,
}

/// A resolved transport between two fiber section categories: the point
/// relabeling, the connecting path per source fiber point, and the induced
/// functor table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transport {
    pub points: Vec<usize>,
    pub paths: Vec<super::Word>,
    pub table: FunctorData,
}

/// A defect found by [`validate_bundle`], naming its location.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BundleViolation {
    Shape(String),
    Fiber { point: String, message: String },
    Inclusion { point: String, message: String },
    Transport { gen: String, message: String },
    Homotopy { cell: String, message: String },
    Composite { pair: (String, String), message: String },
}

impl std::fmt::Display for BundleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BundleViolation::Shape(m) => write!(f, "{m}"),
            BundleViolation::Fiber { point, message } => {
                write!(f, "fiber at `{point}`: {message}")
            }
            BundleViolation::Inclusion { point, message } => {
                write!(f, "inclusion at `{point}`: {message}")
            }
            BundleViolation::Transport { gen, message } => {
                write!(f, "transport along `{gen}`: {message}")
            }
            BundleViolation::Homotopy { cell, message } => {
                write!(f, "homotopy at `{cell}`: {message}")
            }
            BundleViolation::Composite { pair, message } => {
                write!(f, "composite `{}`·`{}`: {message}", pair.0, pair.1)
            }
        }
    }
}

/// The point relabeling of a transport, checked bijective.
fn relabel_points(
    fiber_s: &super::Presentation2,
    fiber_d: &super::Presentation2,
    t: &super::PresentationMap,
) -> Result<Vec<usize>> {
    if t.on_point.len() != fiber_s.point_count()
        || fiber_s.point_count() != fiber_d.point_count()
    {
        return Err(Error::Invalid(
            "transport must relabel the fiber points bijectively".into(),
        ));
    }
    let mut seen = vec![false; fiber_d.point_count()];
    for &q in &t.on_point {
        if q >= seen.len() || seen[q] {
            return Err(Error::Invalid(
                "transport must relabel the fiber points bijectively".into(),
            ));
        }
        seen[q] = true;
    }
    Ok(t.on_point.clone())
}

/// The generator relabeling of a transport: each image word must be a
/// single forward letter, and the assignment must be bijective.
fn relabel_gens(
    fiber_s: &super::Presentation2,
    fiber_d: &super::Presentation2,
    t: &super::PresentationMap,
) -> Result<Vec<usize>> {
    if t.on_gen1.len() != fiber_s.gen1_count()
        || fiber_s.gen1_count() != fiber_d.gen1_count()
    {
        return Err(Error::Invalid(
            "transport must relabel the fiber generators bijectively".into(),
        ));
    }
    let mut out = Vec::with_capacity(t.on_gen1.len());
    let mut seen = vec![false; fiber_d.gen1_count()];
    for w in &t.on_gen1 {
        let [letter] = w.letters.as_slice() else {
            return Err(Error::Invalid(
                "transport must send each fiber generator to a single generator".into(),
            ));
        };
        if letter.inverted {
            return Err(Error::Invalid(
                "transport must send each fiber generator to a forward generator".into(),
            ));
        }
        let g = fiber_d.gen1_index(&letter.gen)?;
        if seen[g] {
            return Err(Error::Invalid(
                "transport must relabel the fiber generators bijectively".into(),
            ));
        }
        seen[g] = true;
        out.push(g);
    }
    Ok(out)
}

/// Presentation-level shape of a transport: point relabeling plus paths.
struct FoldShape {
    points: Vec<usize>,
    paths: Vec<super::Word>,
}

fn datum_shape(
    bd: &BundleDatum,
    src_b: usize,
    dst_b: usize,
    td: &TransportDatum,
) -> Result<FoldShape> {
    let fiber_s = &bd.fibers[src_b];
    let fiber_d = &bd.fibers[dst_b];
    let points = relabel_points(fiber_s, fiber_d, &td.t)?;
    if td.paths.len() != fiber_s.point_count() {
        return Err(Error::ShapeMismatch(format!(
            "transport carries {} paths for {} fiber points",
            td.paths.len(),
            fiber_s.point_count(),
        )));
    }
    Ok(FoldShape { points, paths: td.paths.clone() })
}

fn identity_shape(bd: &BundleDatum, b: usize) -> FoldShape {
    let fiber = &bd.fibers[b];
    let incl = &bd.inclusions[b];
    FoldShape {
        points: fiber.point_range().collect(),
        paths: fiber
            .point_range()
            .map(|p| super::Word::id(bd.total.point_id(incl.on_point[p])))
            .collect(),
    }
}

fn compose_shapes(acc: &FoldShape, step: &FoldShape) -> FoldShape {
    FoldShape {
        points: acc.points.iter().map(|&p| step.points[p]).collect(),
        paths: acc
            .paths
            .iter()
            .enumerate()
            .map(|(p, w)| word_join(w, &step.paths[acc.points[p]]))
            .collect(),
    }
}

/// Presentation-level fold of the transports along a forward base word.
/// Returns the start point, end point, and composite shape.
fn word_shape(bd: &BundleDatum, w: &super::Word) -> Result<(usize, usize, FoldShape)> {
    let a = bd.base.point_index(&w.at)?;
    let mut cur = a;
    let mut shape = identity_shape(bd, a);
    for l in &w.letters {
        if l.inverted {
            return Err(Error::Invalid(format!(
                "transport along the inverted base generator `{}` is not defined",
                l.gen
            )));
        }
        let g = bd.base.gen1_index(&l.gen)?;
        let (s, d) = bd.base.gen1_endpoints(g)?;
        if s != cur {
            return Err(Error::Invalid(format!(
                "base word is not composable at letter `{}`",
                l.gen
            )));
        }
        let step = datum_shape(bd, s, d, &bd.transports[g])?;
        shape = compose_shapes(&shape, &step);
        cur = d;
    }
    Ok((a, cur, shape))
}

/// Checks one transport datum against its endpoints; returns rendered
/// messages.
fn check_transport(
    bd: &BundleDatum,
    src_b: usize,
    dst_b: usize,
    td: &TransportDatum,
) -> Vec<String> {
    let mut out = Vec::new();
    let fiber_s = &bd.fibers[src_b];
    let fiber_d = &bd.fibers[dst_b];
    let incl_s = &bd.inclusions[src_b];
    let incl_d = &bd.inclusions[dst_b];
    for v in validate_presentation_map(fiber_s, fiber_d, &td.t) {
        out.push(format!("relabeling: {v}"));
    }
    let points = match relabel_points(fiber_s, fiber_d, &td.t) {
        Ok(p) => p,
        Err(e) => {
            out.push(e.to_string());
            return out;
        }
    };
    if let Err(e) = relabel_gens(fiber_s, fiber_d, &td.t) {
        out.push(e.to_string());
        return out;
    }
    if td.paths.len() != fiber_s.point_count() {
        out.push(format!(
            "expected {} paths, found {}",
            fiber_s.point_count(),
            td.paths.len(),
        ));
        return out;
    }
    for p in fiber_s.point_range() {
        match word_endpoints(&bd.total, &td.paths[p]) {
            Err(e) => out.push(format!("path at `{}`: {e}", fiber_s.point_id(p))),
            Ok((a, b)) => {
                let want = (incl_s.on_point[p], incl_d.on_point[points[p]]);
                if (a, b) != want {
                    out.push(format!(
                        "path at `{}` runs `{}` → `{}`, expected `{}` → `{}`",
                        fiber_s.point_id(p),
                        bd.total.point_id(a),
                        bd.total.point_id(b),
                        bd.total.point_id(want.0),
                        bd.total.point_id(want.1),
                    ));
                }
            }
        }
    }
    if td.squares.len() != fiber_s.gen1_count() {
        out.push(format!(
            "expected {} squares, found {}",
            fiber_s.gen1_count(),
            td.squares.len(),
        ));
        return out;
    }
    for (g, gen) in fiber_s.gen1.iter().enumerate() {
        let Ok((p, r)) = fiber_s.gen1_endpoints(g) else {
            continue;
        };
        let included =
            match subst_word(fiber_s, &bd.total, incl_s, &super::Word::path(&gen.src, &[&gen.id]))
            {
                Ok(w) => w,
                Err(e) => {
                    out.push(format!("square at `{}`: {e}", gen.id));
                    continue;
                }
            };
        let image = match subst_word(fiber_s, fiber_d, &td.t, &super::Word::path(&gen.src, &[&gen.id]))
            .and_then(|w| subst_word(fiber_d, &bd.total, incl_d, &w))
        {
            Ok(w) => w,
            Err(e) => {
                out.push(format!("square at `{}`: {e}", gen.id));
                continue;
            }
        };
        let want_src = word_join(&included, &td.paths[r]);
        let want_dst = word_join(&td.paths[p], &image);
        match pasting_boundary(&bd.total, &td.squares[g]) {
            Err(e) => out.push(format!("square at `{}`: {e}", gen.id)),
            Ok((from, to)) => {
                if from != want_src || to != want_dst {
                    out.push(format!(
                        "square at `{}` does not connect the transported generator",
                        gen.id,
                    ));
                }
            }
        }
    }
    out
}

/// Checks a homotopy datum between two transport shapes; returns rendered
/// messages.
fn check_homotopy(
    bd: &BundleDatum,
    src_b: usize,
    dst_b: usize,
    shape0: &FoldShape,
    shape1: &FoldShape,
    hd: &HomotopyDatum,
) -> Vec<String> {
    let mut out = Vec::new();
    let fiber_s = &bd.fibers[src_b];
    let fiber_d = &bd.fibers[dst_b];
    let incl_d = &bd.inclusions[dst_b];
    if hd.beta.len() != fiber_s.point_count() || hd.fillers.len() != fiber_s.point_count() {
        out.push(format!(
            "expected {} comparison words and fillers, found {} and {}",
            fiber_s.point_count(),
            hd.beta.len(),
            hd.fillers.len(),
        ));
        return out;
    }
    for p in fiber_s.point_range() {
        match word_endpoints(fiber_d, &hd.beta[p]) {
            Err(e) => {
                out.push(format!("comparison word at `{}`: {e}", fiber_s.point_id(p)));
                continue;
            }
            Ok((a, b)) => {
                if (a, b) != (shape0.points[p], shape1.points[p]) {
                    out.push(format!(
                        "comparison word at `{}` runs `{}` → `{}`, expected `{}` → `{}`",
                        fiber_s.point_id(p),
                        fiber_d.point_id(a),
                        fiber_d.point_id(b),
                        fiber_d.point_id(shape0.points[p]),
                        fiber_d.point_id(shape1.points[p]),
                    ));
                    continue;
                }
            }
        }
        let included = match subst_word(fiber_d, &bd.total, incl_d, &hd.beta[p]) {
            Ok(w) => w,
            Err(e) => {
                out.push(format!("comparison word at `{}`: {e}", fiber_s.point_id(p)));
                continue;
            }
        };
        let want_src = word_join(&shape0.paths[p], &included);
        let want_dst = &shape1.paths[p];
        match pasting_boundary(&bd.total, &hd.fillers[p]) {
            Err(e) => out.push(format!("filler at `{}`: {e}", fiber_s.point_id(p))),
            Ok((from, to)) => {
                if from != want_src || to != *want_dst {
                    out.push(format!(
                        "filler at `{}` does not connect the two transports",
                        fiber_s.point_id(p),
                    ));
                }
            }
        }
    }
    out
}

/// Checks a bundle datum's internal typing and returns every defect found.
pub fn validate_bundle(bd: &BundleDatum) -> Vec<BundleViolation> {
    let mut out = Vec::new();
    for v in validate_presentation(&bd.base) {
        out.push(BundleViolation::Shape(format!("base: {v}")));
    }
    for v in validate_presentation(&bd.total) {
        out.push(BundleViolation::Shape(format!("total: {v}")));
    }
    if bd.fibers.len() != bd.base.point_count()
        || bd.inclusions.len() != bd.base.point_count()
        || bd.transports.len() != bd.base.gen1_count()
        || bd.homotopies.len() != bd.base.gen2_count()
    {
        out.push(BundleViolation::Shape(format!(
            "expected {} fibers/inclusions, {} transports, {} homotopies; \
             found {}/{}, {}, {}",
            bd.base.point_count(),
            bd.base.gen1_count(),
            bd.base.gen2_count(),
            bd.fibers.len(),
            bd.inclusions.len(),
            bd.transports.len(),
            bd.homotopies.len(),
        )));
        return out;
    }
    for b in bd.base.point_range() {
        for v in validate_presentation(&bd.fibers[b]) {
            out.push(BundleViolation::Fiber {
                point: bd.base.point_id(b).to_string(),
                message: v.to_string(),
            });
        }
        for v in validate_presentation_map(&bd.fibers[b], &bd.total, &bd.inclusions[b]) {
            out.push(BundleViolation::Inclusion {
                point: bd.base.point_id(b).to_string(),
                message: v.to_string(),
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (g, td) in bd.transports.iter().enumerate() {
        let Ok((s, d)) = bd.base.gen1_endpoints(g) else {
            continue;
        };
        for message in check_transport(bd, s, d, td) {
            out.push(BundleViolation::Transport { gen: bd.base.gen1[g].id.clone(), message });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (ci, hd) in bd.homotopies.iter().enumerate() {
        let cell = &bd.base.gen2[ci];
        let sides = word_shape(bd, &cell.src).and_then(|s| Ok((s, word_shape(bd, &cell.dst)?)));
        match sides {
            Err(e) => out.push(BundleViolation::Homotopy {
                cell: cell.id.clone(),
                message: e.to_string(),
            }),
            Ok(((a, b, shape0), (_, _, shape1))) => {
                for message in check_homotopy(bd, a, b, &shape0, &shape1, hd) {
                    out.push(BundleViolation::Homotopy { cell: cell.id.clone(), message });
                }
            }
        }
    }
    for (&(g1, g2), cd) in &bd.composites {
        let pair = || {
            (
                bd.base.gen1.get(g1).map(|g| g.id.clone()).unwrap_or_else(|| g1.to_string()),
                bd.base.gen1.get(g2).map(|g| g.id.clone()).unwrap_or_else(|| g2.to_string()),
            )
        };
        if g1 >= bd.base.gen1_count() || g2 >= bd.base.gen1_count() {
            out.push(BundleViolation::Composite {
                pair: pair(),
                message: "generator index out of range".to_string(),
            });
            continue;
        }
        let (Ok((a, b)), Ok((b2, c))) = (bd.base.gen1_endpoints(g1), bd.base.gen1_endpoints(g2))
        else {
            continue;
        };
        if b != b2 {
            out.push(BundleViolation::Composite {
                pair: pair(),
                message: "the two generators do not compose".to_string(),
            });
            continue;
        }
        for message in check_transport(bd, a, c, &cd.transport) {
            out.push(BundleViolation::Composite { pair: pair(), message });
        }
        let word = super::Word {
            at: bd.base.points[a].clone(),
            letters: vec![
                super::Letter { gen: bd.base.gen1[g1].id.clone(), inverted: false },
                super::Letter { gen: bd.base.gen1[g2].id.clone(), inverted: false },
            ],
        };
        match (word_shape(bd, &word), datum_shape(bd, a, c, &cd.transport)) {
            (Ok((_, _, fold)), Ok(override_shape)) => {
                for message in check_homotopy(bd, a, c, &fold, &override_shape, &cd.comparison)
                {
                    out.push(BundleViolation::Composite { pair: pair(), message });
                }
            }
            (fold, override_shape) => {
                for res in [fold.map(|_| ()), override_shape.map(|_| ())] {
                    if let Err(e) = res {
                        out.push(BundleViolation::Composite {
                            pair: pair(),
                            message: e.to_string(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// The restriction of a total representation to the fiber at one base point.
pub fn fiber_rep(bd: &BundleDatum, rep: &super::TwoRep, b: usize) -> Result<super::TwoRep> {
    let fiber = bd
        .fibers
        .get(b)
        .ok_or_else(|| Error::UnknownId { kind: "base point", id: b.to_string() })?;
    super::pullback_rep(fiber, &bd.total, &bd.inclusions[b], rep)
}

/// The section category of the fiber at one base point.
pub fn fiber_sections(
    bd: &BundleDatum,
    rep: &super::TwoRep,
    b: usize,
    caps: &Caps,
) -> Result<SectionCat> {
    let fiber = bd
        .fibers
        .get(b)
        .ok_or_else(|| Error::UnknownId { kind: "base point", id: b.to_string() })?;
    global_sections_nu(fiber, &fiber_rep(bd, rep, b)?, caps)
}

/// Resolves one transport datum into a functor between fiber section
/// categories.
///
/// A section's image takes each object along the connecting path's
/// evaluation and each comparison through the connecting square; data whose
/// image is not again a section is reported as a bundle incoherence.
pub fn datum_transport(
    bd: &BundleDatum,
    rep: &super::TwoRep,
    src_b: usize,
    dst_b: usize,
    td: &TransportDatum,
    src_sc: &SectionCat,
    dst_sc: &SectionCat,
) -> Result<Transport> {
    let fiber_s = &bd.fibers[src_b];
    let fiber_d = &bd.fibers[dst_b];
    let points = relabel_points(fiber_s, fiber_d, &td.t)?;
    let gens = relabel_gens(fiber_s, fiber_d, &td.t)?;
    if td.paths.len() != fiber_s.point_count() || td.squares.len() != fiber_s.gen1_count() {
        return Err(Error::ShapeMismatch(
            "transport paths or squares do not match the fiber".into(),
        ));
    }
    let ev_paths = td
        .paths
        .iter()
        .map(|w| eval_word(&bd.total, rep, w))
        .collect::<Result<Vec<_>>>()?;
    let path_ends = td
        .paths
        .iter()
        .map(|w| word_endpoints(&bd.total, w).map(|(_, b)| b))
        .collect::<Result<Vec<_>>>()?;
    let squares = td
        .squares
        .iter()
        .map(|ps| eval_pasting(&bd.total, rep, ps))
        .collect::<Result<Vec<_>>>()?;

    let mut on_obj = Vec::with_capacity(src_sc.families.len());
    for f in &src_sc.families {
        let mut x = vec![0usize; fiber_d.point_count()];
        for p in fiber_s.point_range() {
            x[points[p]] = ev_paths[p].on_obj[f.x[p]];
        }
        let mut phi = vec![0usize; fiber_d.gen1_count()];
        for g in 0..fiber_s.gen1_count() {
            let (p, r) = fiber_s.gen1_endpoints(g)?;
            let cat = &rep.at[path_ends[r]];
            let square = squares[g].components[f.x[p]];
            let inv = cat.inverse(square).ok_or_else(|| {
                Error::BundleIncoherent(format!(
                    "square at `{}` is not invertible",
                    fiber_s.gen1[g].id
                ))
            })?;
            let mapped = ev_paths[r].on_mor[f.phi[g]];
            phi[gens[g]] = cat.then(inv, mapped).ok_or_else(|| {
                Error::BundleIncoherent(format!(
                    "square at `{}` does not compose with the transported comparison",
                    fiber_s.gen1[g].id
                ))
            })?;
        }
        let image = dst_sc.family_index(&x, &phi).ok_or_else(|| {
            Error::BundleIncoherent(
                "a transported section is not a section of the target fiber".into(),
            )
        })?;
        on_obj.push(image);
    }

    let mut on_mor = Vec::with_capacity(src_sc.arrows.len());
    for a in &src_sc.arrows {
        let mut comps = vec![0usize; fiber_d.point_count()];
        for p in fiber_s.point_range() {
            comps[points[p]] = ev_paths[p].on_mor[a.components[p]];
        }
        let image =
            dst_sc.arrow_index(on_obj[a.src], on_obj[a.dst], &comps).ok_or_else(|| {
                Error::BundleIncoherent(
                    "a transported section map is not a section map of the target fiber"
                        .into(),
                )
            })?;
        on_mor.push(image);
    }

    Ok(Transport { points, paths: td.paths.clone(), table: FunctorData { on_obj, on_mor } })
}

/// The functor a transport datum induces between fiber section categories.
pub fn transport_functor(
    bd: &BundleDatum,
    rep: &super::TwoRep,
    src_b: usize,
    dst_b: usize,
    td: &TransportDatum,
    src_sc: &SectionCat,
    dst_sc: &SectionCat,
) -> Result<FunctorData> {
    Ok(datum_transport(bd, rep, src_b, dst_b, td, src_sc, dst_sc)?.table)
}

fn compose_transports(acc: &Transport, step: &Transport) -> Transport {
    Transport {
        points: acc.points.iter().map(|&p| step.points[p]).collect(),
        paths: acc
            .paths
            .iter()
            .enumerate()
            .map(|(p, w)| word_join(w, &step.paths[acc.points[p]]))
            .collect(),
        table: then_functor(&acc.table, &step.table),
    }
}

/// Folds the per-generator transports along a forward base word.
pub fn word_transport(
    bd: &BundleDatum,
    rep: &super::TwoRep,
    w: &super::Word,
    sections: &[SectionCat],
) -> Result<Transport> {
    if sections.len() != bd.base.point_count() {
        return Err(Error::ShapeMismatch(
            "expected one section category per base point".into(),
        ));
    }
    let a = bd.base.point_index(&w.at)?;
    let shape = identity_shape(bd, a);
    let mut acc = Transport {
        points: shape.points,
        paths: shape.paths,
        table: identity_functor(&sections[a].cat),
    };
    let mut cur = a;
    for l in &w.letters {
        if l.inverted {
            return Err(Error::Invalid(format!(
                "transport along the inverted base generator `{}` is not defined",
                l.gen
            )));
        }
        let g = bd.base.gen1_index(&l.gen)?;
        let (s, d) = bd.base.gen1_endpoints(g)?;
        if s != cur {
            return Err(Error::Invalid(format!(
                "base word is not composable at letter `{}`",
                l.gen
            )));
        }
        let step = datum_transport(
            bd,
            rep,
            s,
            d,
            &bd.transports[g],
            &sections[s],
            &sections[d],
        )?;
        acc = compose_transports(&acc, &step);
        cur = d;
    }
    Ok(acc)
}

/// The invertible comparison a homotopy datum induces between two resolved
/// transports, validated natural and invertible.
///
/// At each section the component composes the inverse of the section's own
/// comparison along `beta` with the evaluated filler.
pub fn transport_iso(
    bd: &BundleDatum,
    rep: &super::TwoRep,
    src_b: usize,
    dst_b: usize,
    hd: &HomotopyDatum,
    t0: &Transport,
    t1: &Transport,
    src_sc: &SectionCat,
    dst_sc: &SectionCat,
) -> Result<NatTransData> {
    let fiber_s = &bd.fibers[src_b];
    let fiber_d = &bd.fibers[dst_b];
    let incl_d = &bd.inclusions[dst_b];
    if hd.beta.len() != fiber_s.point_count() || hd.fillers.len() != fiber_s.point_count() {
        return Err(Error::ShapeMismatch(
            "homotopy data does not match the fiber points".into(),
        ));
    }
    let alpha_d = fiber_rep(bd, rep, dst_b)?;
    for p in fiber_s.point_range() {
        let (a, b) = word_endpoints(fiber_d, &hd.beta[p])?;
        if (a, b) != (t0.points[p], t1.points[p]) {
            return Err(Error::BundleIncoherent(format!(
                "comparison word at `{}` does not connect the two transports",
                fiber_s.point_id(p)
            )));
        }
        let included = subst_word(fiber_d, &bd.total, incl_d, &hd.beta[p])?;
        let (from, to) = pasting_boundary(&bd.total, &hd.fillers[p])?;
        if from != word_join(&t0.paths[p], &included) || to != t1.paths[p] {
            return Err(Error::BundleIncoherent(format!(
                "filler at `{}` does not connect the two transports",
                fiber_s.point_id(p)
            )));
        }
    }
    let fillers = hd
        .fillers
        .iter()
        .map(|ps| eval_pasting(&bd.total, rep, ps))
        .collect::<Result<Vec<_>>>()?;

    let mut components = Vec::with_capacity(src_sc.families.len());
    for (i, f) in src_sc.families.iter().enumerate() {
        let f0 = &dst_sc.families[t0.table.on_obj[i]];
        let mut comps = vec![0usize; fiber_d.point_count()];
        for p in fiber_s.point_range() {
            let q1 = t1.points[p];
            let fold = family_comparison(fiber_d, &alpha_d, &f0.x, &f0.phi, &hd.beta[p])?;
            let cat = &alpha_d.at[q1];
            let inv = cat.inverse(fold).ok_or_else(|| {
                Error::BundleIncoherent(format!(
                    "the comparison along `beta` at `{}` is not invertible",
                    fiber_s.point_id(p)
                ))
            })?;
            let h = fillers[p].components[f.x[p]];
            comps[q1] = cat.then(inv, h).ok_or_else(|| {
                Error::BundleIncoherent(format!(
                    "filler at `{}` does not compose with the section comparison",
                    fiber_s.point_id(p)
                ))
            })?;
        }
        let arrow = dst_sc
            .arrow_index(t0.table.on_obj[i], t1.table.on_obj[i], &comps)
            .ok_or_else(|| {
                Error::BundleIncoherent(format!(
                    "the induced comparison at section {i} is not a section map"
                ))
            })?;
        components.push(arrow);
    }
    let nat = NatTransData { components };
    if let Some(v) =
        validate_nat(&src_sc.cat, &dst_sc.cat, &t0.table, &t1.table, &nat, true).first()
    {
        return Err(Error::BundleIncoherent(format!("induced comparison: {v}")));
    }
    Ok(nat)
}

/// The comparison between the fold of two consecutive transports and their
/// declared composite; the identity on the fold when no composite is
/// declared.
pub fn composite_comparison(
    bd: &BundleDatum,
    rep: &super::TwoRep,
    pair: (usize, usize),
    sections: &[SectionCat],
) -> Result<NatTransData> {
    let (g1, g2) = pair;
    if g1 >= bd.base.gen1_count() || g2 >= bd.base.gen1_count() {
        return Err(Error::UnknownId {
            kind: "base generator",
            id: format!("{g1},{g2}"),
        });
    }
    let (a, b) = bd.base.gen1_endpoints(g1)?;
    let (b2, c) = bd.base.gen1_endpoints(g2)?;
    if b != b2 {
        return Err(Error::Invalid(
            "the two base generators do not compose".into(),
        ));
    }
    let word = super::Word {
        at: bd.base.points[a].clone(),
        letters: vec![
            super::Letter { gen: bd.base.gen1[g1].id.clone(), inverted: false },
            super::Letter { gen: bd.base.gen1[g2].id.clone(), inverted: false },
        ],
    };
    let fold = word_transport(bd, rep, &word, sections)?;
    match bd.composites.get(&pair) {
        None => Ok(NatTransData {
            components: fold
                .table
                .on_obj
                .iter()
                .map(|&o| sections[c].cat.identity(o))
                .collect(),
        }),
        Some(cd) => {
            let override_t = datum_transport(
                bd,
                rep,
                a,
                c,
                &cd.transport,
                &sections[a],
                &sections[c],
            )?;
            transport_iso(
                bd,
                rep,
                a,
                c,
                &cd.comparison,
                &fold,
                &override_t,
                &sections[a],
                &sections[c],
            )
        }
    }
}

/// A pushed representation together with the section categories it lives in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PushedRep {
    pub rep: super::TwoRep,
    pub sections: Vec<SectionCat>,
}

/// Pushes a representation of the total presentation down to the base.
///
/// Fibers become section categories, transports become functors, homotopies
/// become invertible comparisons; the result is validated against the base
/// presentation, and a failing relation is a bundle incoherence naming it.
pub fn pushforward_rep(
    bd: &BundleDatum,
    rep: &super::TwoRep,
    caps: &Caps,
) -> Result<PushedRep> {
    if bd.fibers.len() != bd.base.point_count()
        || bd.inclusions.len() != bd.base.point_count()
        || bd.transports.len() != bd.base.gen1_count()
        || bd.homotopies.len() != bd.base.gen2_count()
    {
        return Err(Error::ShapeMismatch(
            "bundle data does not match the base presentation".into(),
        ));
    }
    let sections = bd
        .base
        .point_range()
        .map(|b| fiber_sections(bd, rep, b, caps))
        .collect::<Result<Vec<_>>>()?;
    let mut along1 = Vec::with_capacity(bd.transports.len());
    for (g, td) in bd.transports.iter().enumerate() {
        let (s, d) = bd.base.gen1_endpoints(g)?;
        along1.push(datum_transport(bd, rep, s, d, td, &sections[s], &sections[d])?.table);
    }
    let mut along2 = Vec::with_capacity(bd.homotopies.len());
    for (ci, hd) in bd.homotopies.iter().enumerate() {
        let cell = &bd.base.gen2[ci];
        let (a, c) = word_endpoints(&bd.base, &cell.src)?;
        let t0 = word_transport(bd, rep, &cell.src, &sections)?;
        let t1 = word_transport(bd, rep, &cell.dst, &sections)?;
        along2.push(transport_iso(bd, rep, a, c, hd, &t0, &t1, &sections[a], &sections[c])?);
    }
    let pushed = super::TwoRep {
        at: sections.iter().map(|s| s.cat.clone()).collect(),
        along1,
        along2,
    };
    if let Some(v) = super::validate_two_rep(&bd.base, &pushed).first() {
        return Err(Error::BundleIncoherent(format!(
            "pushed representation is incoherent: {v}"
        )));
    }
    Ok(PushedRep { rep: pushed, sections })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn trivial_bundle() -> (BundleDatum, super::super::TwoRep) {
        let base = fixtures::circle_presentation();
        let fiber = fixtures::circle_presentation();
        let c = fixtures::iso_pair();
        let t = fixtures::indiscrete_swap(&c);
        let rep =
            super::super::TwoRep { at: vec![c.clone()], along1: vec![t], along2: vec![] };
        let bundle = BundleDatum {
            base,
            total: fiber.clone(),
            fibers: vec![fiber.clone()],
            inclusions: vec![super::super::PresentationMap::identity(&fiber)],
            transports: vec![TransportDatum {
                t: super::super::PresentationMap::identity(&fiber),
                paths: vec![super::super::Word::id("b")],
                squares: vec![super::super::Pasting::identity(&super::super::Word::path(
                    "b",
                    &["s"],
                ))],
            }],
            homotopies: vec![],
            composites: BTreeMap::new(),
        };
        (bundle, rep)
    }

    #[test]
    fn a_mismatched_square_boundary_is_reported() {
        let (mut bundle, _) = trivial_bundle();
        bundle.transports[0].squares[0] =
            super::super::Pasting::identity(&super::super::Word::id("b"));
        let violations = validate_bundle(&bundle);
        assert!(violations
            .iter()
            .any(|v| matches!(v, BundleViolation::Transport { gen, .. } if gen == "s")));
    }

    #[test]
    fn the_empty_word_transports_identically() {
        let caps = crate::error::Caps::default();
        let (bundle, rep) = trivial_bundle();
        let sections = vec![fiber_sections(&bundle, &rep, 0, &caps).unwrap()];
        let t = word_transport(&bundle, &rep, &super::super::Word::id("b"), &sections).unwrap();
        assert_eq!(t.table, identity_functor(&sections[0].cat));
    }

    #[test]
    fn composite_serialization_round_trips() {
        let (mut bundle, _) = trivial_bundle();
        bundle.composites.insert(
            (0, 0),
            CompositeDatum {
                transport: bundle.transports[0].clone(),
                comparison: HomotopyDatum {
                    beta: vec![super::super::Word::id("b")],
                    fillers: vec![super::super::Pasting::identity(&super::super::Word::path(
                        "b",
                        &["s"],
                    ))],
                },
            },
        );
        let text = serde_json::to_string(&bundle).unwrap();
        let back: BundleDatum = serde_json::from_str(&text).unwrap();
        assert_eq!(back, bundle);
    }
}
