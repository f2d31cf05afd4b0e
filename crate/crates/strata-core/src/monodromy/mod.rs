/*! Presented 2-complexes and their strict 2-representations.

A [`Presentation2`] is a finite cell complex presented by generators:
basepoints, 1-generators with endpoints, invertible 2-generators between
parallel words, and relations between parallel pastings of those cells. A
[`TwoRep`] realizes such a presentation in categories: a category per
basepoint, a functor per 1-generator, an invertible transformation per
2-generator, with words and pastings evaluated strictly — composites are
literal table compositions, so the unit and associativity comparisons are
identities and need no storage.

Everything here is by-value and deterministic: presentations canonicalize
their generator order at construction, evaluation is a fold over tables, and
validators return witness lists naming the offending generator, step, or
relation rather than a bare boolean.
*/

mod bundle;
mod repmap;
mod sections;

pub use bundle::{
    composite_comparison, datum_transport, fiber_rep, fiber_sections, pushforward_rep,
    transport_functor, transport_iso, validate_bundle, word_transport, BundleDatum,
    BundleViolation, CompositeDatum, HomotopyDatum, PushedRep, Transport, TransportDatum,
};
pub use repmap::{
    compose_rep_maps, identity_rep_map, nat_on_sections, pullback_rep_map, rep_map_on_sections,
    rep_map_word_square, validate_rep_map, RepMap, RepMapViolation,
};
pub use sections::{
    family_comparison, global_sections_nu, stalk_projection, SectionArrow, SectionCat,
    SectionFamily,
};

use crate::error::{Error, Result};
use crate::fincat::{
    identity_functor, identity_nat, inverse_nat, then_functor, validate_functor, validate_nat,
    vcompose, whisker_left, whisker_right, FinCat, FunctorData, NatTransData,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// One letter of a word: a 1-generator, possibly traversed backwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Letter {
    pub gen: String,
    #[serde(default)]
    pub inverted: bool,
}

/// A path word: a basepoint followed by composable letters.
///
/// The empty word at a point is the identity path. Words are compared
/// literally — no free reduction is performed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    pub at: String,
    pub letters: Vec<Letter>,
}

impl Word {
    /// The identity word at a basepoint.
    pub fn id(at: &str) -> Self {
        Word { at: at.to_string(), letters: Vec::new() }
    }

    /// A word of forward letters starting at `at`.
    pub fn path(at: &str, gens: &[&str]) -> Self {
        Word {
            at: at.to_string(),
            letters: gens
                .iter()
                .map(|g| Letter { gen: g.to_string(), inverted: false })
                .collect(),
        }
    }
}

/// Concatenation of words, keeping the left word's basepoint.
pub(crate) fn word_join(a: &Word, b: &Word) -> Word {
    let mut letters = a.letters.clone();
    letters.extend(b.letters.iter().cloned());
    Word { at: a.at.clone(), letters }
}

fn word_join3(left: &Word, mid: &Word, right: &Word) -> Word {
    word_join(&word_join(left, mid), right)
}

/// A 1-generator: identifier plus basepoint endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gen1Data {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// An invertible 2-generator between parallel words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gen2Data {
    pub id: String,
    pub src: Word,
    pub dst: Word,
}

/// One step of a pasting: a 2-generator whiskered by words on both sides.
///
/// The step rewrites `left · src(cell) · right` to `left · dst(cell) ·
/// right` (or the reverse when `inverted`); the composite source must equal
/// the current word letter for letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PastingStep {
    pub left: Word,
    pub cell: String,
    #[serde(default)]
    pub inverted: bool,
    pub right: Word,
}

/// A vertical pasting of whiskered 2-generators, starting from `source`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pasting {
    pub source: Word,
    pub steps: Vec<PastingStep>,
}

impl Pasting {
    /// The identity pasting on a word.
    pub fn identity(w: &Word) -> Self {
        Pasting { source: w.clone(), steps: Vec::new() }
    }
}

/// A relation: two parallel pastings declared equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rel2Data {
    pub id: String,
    pub lhs: Pasting,
    pub rhs: Pasting,
}

/// A finite presentation: basepoints, 1- and 2-generators, and relations.
///
/// Construct with [`Presentation2::from_parts`] to get canonical (sorted)
/// generator order and hard reference checking; data deserialized from
/// elsewhere should be passed through [`validate_presentation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation2 {
    pub points: Vec<String>,
    pub gen1: Vec<Gen1Data>,
    pub gen2: Vec<Gen2Data>,
    pub rel2: Vec<Rel2Data>,
}

impl Presentation2 {
    /// Builds a presentation from parts, sorting every generator class by
    /// identifier and rejecting duplicate or dangling references.
    pub fn from_parts(
        points: &[&str],
        gen1: &[(&str, &str, &str)],
        gen2: Vec<Gen2Data>,
        rel2: Vec<Rel2Data>,
    ) -> Result<Self> {
        let mut points: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        points.sort();
        let mut gen1: Vec<Gen1Data> = gen1
            .iter()
            .map(|&(id, src, dst)| Gen1Data {
                id: id.to_string(),
                src: src.to_string(),
                dst: dst.to_string(),
            })
            .collect();
        gen1.sort_by(|a, b| a.id.cmp(&b.id));
        let mut gen2 = gen2;
        gen2.sort_by(|a, b| a.id.cmp(&b.id));
        let mut rel2 = rel2;
        rel2.sort_by(|a, b| a.id.cmp(&b.id));
        let p = Presentation2 { points, gen1, gen2, rel2 };

        for (kind, ids) in [
            ("point", p.points.clone()),
            ("generator", p.gen1.iter().map(|g| g.id.clone()).collect()),
            ("cell", p.gen2.iter().map(|c| c.id.clone()).collect()),
            ("relation", p.rel2.iter().map(|r| r.id.clone()).collect()),
        ] {
            let mut seen = BTreeSet::new();
            for id in ids {
                if !seen.insert(id.clone()) {
                    return Err(Error::DuplicateId { kind, id });
                }
            }
        }
        for g in &p.gen1 {
            p.point_index(&g.src)?;
            p.point_index(&g.dst)?;
        }
        let check_word = |w: &Word| -> Result<()> {
            p.point_index(&w.at)?;
            for l in &w.letters {
                p.gen1_index(&l.gen)?;
            }
            Ok(())
        };
        let check_pasting = |ps: &Pasting| -> Result<()> {
            check_word(&ps.source)?;
            for step in &ps.steps {
                check_word(&step.left)?;
                check_word(&step.right)?;
                p.gen2_index(&step.cell)?;
            }
            Ok(())
        };
        for c in &p.gen2 {
            check_word(&c.src)?;
            check_word(&c.dst)?;
        }
        for r in &p.rel2 {
            check_pasting(&r.lhs)?;
            check_pasting(&r.rhs)?;
        }
        Ok(p)
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    /// Iterator over basepoint indices.
    pub fn point_range(&self) -> std::ops::Range<usize> {
        0..self.points.len()
    }

    pub fn point_id(&self, p: usize) -> &str {
        &self.points[p]
    }

    pub fn point_index(&self, id: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|q| q == id)
            .ok_or_else(|| Error::UnknownId { kind: "point", id: id.to_string() })
    }

    pub fn gen1_count(&self) -> usize {
        self.gen1.len()
    }

    pub fn gen1_index(&self, id: &str) -> Result<usize> {
        self.gen1
            .iter()
            .position(|g| g.id == id)
            .ok_or_else(|| Error::UnknownId { kind: "generator", id: id.to_string() })
    }

    /// Resolved `(src, dst)` basepoint indices of a 1-generator.
    pub fn gen1_endpoints(&self, g: usize) -> Result<(usize, usize)> {
        let gen = &self.gen1[g];
        Ok((self.point_index(&gen.src)?, self.point_index(&gen.dst)?))
    }

    pub fn gen2_count(&self) -> usize {
        self.gen2.len()
    }

    pub fn gen2_index(&self, id: &str) -> Result<usize> {
        self.gen2
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::UnknownId { kind: "cell", id: id.to_string() })
    }
}

/// Endpoints `(src, dst)` of a word, checking letter-by-letter composability.
pub fn word_endpoints(p: &Presentation2, w: &Word) -> Result<(usize, usize)> {
    let a = p.point_index(&w.at)?;
    let mut cur = a;
    for (i, l) in w.letters.iter().enumerate() {
        let g = p.gen1_index(&l.gen)?;
        let (s, d) = p.gen1_endpoints(g)?;
        let (expect, next) = if l.inverted { (d, s) } else { (s, d) };
        if expect != cur {
            return Err(Error::Invalid(format!(
                "word at `{}`: letter {} (`{}`{}) starts at `{}`, but the word has reached `{}`",
                w.at,
                i,
                l.gen,
                if l.inverted { "⁻¹" } else { "" },
                p.point_id(expect),
                p.point_id(cur),
            )));
        }
        cur = next;
    }
    Ok((a, cur))
}

/// Source and final words of a pasting, replaying each step literally.
pub fn pasting_boundary(p: &Presentation2, ps: &Pasting) -> Result<(Word, Word)> {
    word_endpoints(p, &ps.source)?;
    let mut cur = ps.source.clone();
    for (i, step) in ps.steps.iter().enumerate() {
        let cell = &p.gen2[p.gen2_index(&step.cell)?];
        word_endpoints(p, &step.left)?;
        word_endpoints(p, &step.right)?;
        let (from, to) =
            if step.inverted { (&cell.dst, &cell.src) } else { (&cell.src, &cell.dst) };
        let expect = word_join3(&step.left, from, &step.right);
        if expect != cur {
            return Err(Error::Invalid(format!(
                "pasting step {}: cell `{}`{} does not apply to the current word",
                i,
                step.cell,
                if step.inverted { "⁻¹" } else { "" },
            )));
        }
        cur = word_join3(&step.left, to, &step.right);
    }
    Ok((ps.source.clone(), cur))
}

/// A defect found by [`validate_presentation`], naming its location.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PresentationViolation {
    /// Two entries of a generator class share an identifier.
    Duplicate { kind: String, id: String },
    /// A word inside the named entity does not resolve or compose.
    Word { within: String, message: String },
    /// The two sides of a 2-generator are not parallel.
    Boundary { cell: String, message: String },
    /// A relation's pastings are ill-formed or not parallel.
    Relation { id: String, message: String },
}

impl fmt::Display for PresentationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationViolation::Duplicate { kind, id } => {
                write!(f, "duplicate {kind} `{id}`")
            }
            PresentationViolation::Word { within, message } => {
                write!(f, "{within}: {message}")
            }
            PresentationViolation::Boundary { cell, message } => {
                write!(f, "cell `{cell}`: {message}")
            }
            PresentationViolation::Relation { id, message } => {
                write!(f, "relation `{id}`: {message}")
            }
        }
    }
}

/// Checks a presentation's internal typing and returns every defect found.
pub fn validate_presentation(p: &Presentation2) -> Vec<PresentationViolation> {
    let mut out = Vec::new();
    for (kind, ids) in [
        ("point", p.points.clone()),
        ("generator", p.gen1.iter().map(|g| g.id.clone()).collect::<Vec<_>>()),
        ("cell", p.gen2.iter().map(|c| c.id.clone()).collect()),
        ("relation", p.rel2.iter().map(|r| r.id.clone()).collect()),
    ] {
        let mut seen = BTreeSet::new();
        for id in ids {
            if !seen.insert(id.clone()) {
                out.push(PresentationViolation::Duplicate { kind: kind.to_string(), id });
            }
        }
    }
    for g in &p.gen1 {
        for end in [&g.src, &g.dst] {
            if p.point_index(end).is_err() {
                out.push(PresentationViolation::Word {
                    within: format!("generator `{}`", g.id),
                    message: format!("unknown point `{end}`"),
                });
            }
        }
    }
    for c in &p.gen2 {
        let src = word_endpoints(p, &c.src);
        let dst = word_endpoints(p, &c.dst);
        match (&src, &dst) {
            (Ok(a), Ok(b)) if a != b => out.push(PresentationViolation::Boundary {
                cell: c.id.clone(),
                message: format!(
                    "sides run `{}` → `{}` and `{}` → `{}`",
                    p.point_id(a.0),
                    p.point_id(a.1),
                    p.point_id(b.0),
                    p.point_id(b.1),
                ),
            }),
            _ => {}
        }
        for (side, res) in [("source", src), ("target", dst)] {
            if let Err(e) = res {
                out.push(PresentationViolation::Word {
                    within: format!("cell `{}` {side}", c.id),
                    message: e.to_string(),
                });
            }
        }
    }
    for r in &p.rel2 {
        let lhs = pasting_boundary(p, &r.lhs);
        let rhs = pasting_boundary(p, &r.rhs);
        match (lhs, rhs) {
            (Ok((ls, lf)), Ok((rs, rf))) => {
                if ls != rs || lf != rf {
                    out.push(PresentationViolation::Relation {
                        id: r.id.clone(),
                        message: "the two pastings are not parallel".to_string(),
                    });
                }
            }
            (lhs, rhs) => {
                for (side, res) in [("left side", lhs), ("right side", rhs)] {
                    if let Err(e) = res {
                        out.push(PresentationViolation::Relation {
                            id: r.id.clone(),
                            message: format!("{side}: {e}"),
                        });
                    }
                }
            }
        }
    }
    out
}

/// A strict 2-representation of a presentation.
///
/// `at[p]` is the value category at basepoint `p`, `along1[g]` the functor
/// at 1-generator `g`, `along2[c]` the invertible transformation at
/// 2-generator `c` between the strict evaluations of its sides. Words and
/// pastings evaluate by literal table composition, so the comparisons that
/// would mediate unit and associativity are identities and are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoRep {
    pub at: Vec<FinCat>,
    pub along1: Vec<FunctorData>,
    pub along2: Vec<NatTransData>,
}

/// Inverse of a bijective-on-the-nose functor table, if it is one.
pub(crate) fn invert_table(src: &FinCat, dst: &FinCat, f: &FunctorData) -> Option<FunctorData> {
    if f.on_obj.len() != src.object_count()
        || f.on_mor.len() != src.morphism_count()
        || src.object_count() != dst.object_count()
        || src.morphism_count() != dst.morphism_count()
    {
        return None;
    }
    let mut on_obj = vec![usize::MAX; dst.object_count()];
    for (o, &img) in f.on_obj.iter().enumerate() {
        if img >= on_obj.len() || on_obj[img] != usize::MAX {
            return None;
        }
        on_obj[img] = o;
    }
    let mut on_mor = vec![usize::MAX; dst.morphism_count()];
    for (m, &img) in f.on_mor.iter().enumerate() {
        if img >= on_mor.len() || on_mor[img] != usize::MAX {
            return None;
        }
        on_mor[img] = m;
    }
    if on_obj.contains(&usize::MAX) || on_mor.contains(&usize::MAX) {
        return None;
    }
    Some(FunctorData { on_obj, on_mor })
}

/// Strict evaluation of a word: the composite of the generator functors.
///
/// Inverted letters require the generator's functor to be bijective on the
/// nose; otherwise the evaluation fails with a witness.
pub fn eval_word(p: &Presentation2, rep: &TwoRep, w: &Word) -> Result<FunctorData> {
    let (a, _) = word_endpoints(p, w)?;
    let mut cur = a;
    let mut f = identity_functor(&rep.at[a]);
    for l in &w.letters {
        let g = p.gen1_index(&l.gen)?;
        let (s, d) = p.gen1_endpoints(g)?;
        if l.inverted {
            let inv = invert_table(&rep.at[s], &rep.at[d], &rep.along1[g]).ok_or_else(|| {
                Error::Invalid(format!(
                    "letter `{}`⁻¹: the functor along `{}` is not invertible on the nose",
                    l.gen, l.gen
                ))
            })?;
            f = then_functor(&f, &inv);
            cur = s;
        } else {
            f = then_functor(&f, &rep.along1[g]);
            cur = d;
        }
    }
    debug_assert_eq!(cur, word_endpoints(p, w)?.1);
    Ok(f)
}

/// Strict evaluation of a pasting: the vertical composite of its whiskered
/// cells, a transformation from the evaluation of `source` to the
/// evaluation of the final word.
pub fn eval_pasting(p: &Presentation2, rep: &TwoRep, ps: &Pasting) -> Result<NatTransData> {
    let (_, b) = word_endpoints(p, &ps.source)?;
    let mut cur_word = ps.source.clone();
    let mut nat = identity_nat(&rep.at[b], &eval_word(p, rep, &cur_word)?);
    for (i, step) in ps.steps.iter().enumerate() {
        let ci = p.gen2_index(&step.cell)?;
        let cell = &p.gen2[ci];
        let (from, to) =
            if step.inverted { (&cell.dst, &cell.src) } else { (&cell.src, &cell.dst) };
        let expect = word_join3(&step.left, from, &step.right);
        if expect != cur_word {
            return Err(Error::Invalid(format!(
                "pasting step {}: cell `{}`{} does not apply to the current word",
                i,
                step.cell,
                if step.inverted { "⁻¹" } else { "" },
            )));
        }
        let (_, cell_end) = word_endpoints(p, &cell.src)?;
        let left_f = eval_word(p, rep, &step.left)?;
        let right_f = eval_word(p, rep, &step.right)?;
        let cell_nat = if step.inverted {
            inverse_nat(&rep.at[cell_end], &rep.along2[ci]).ok_or_else(|| {
                Error::Invalid(format!(
                    "pasting step {i}: the cell `{}` is not invertible",
                    step.cell
                ))
            })?
        } else {
            rep.along2[ci].clone()
        };
        let step_nat = whisker_right(&whisker_left(&right_f, &cell_nat), &left_f);
        nat = vcompose(&rep.at[b], &nat, &step_nat).ok_or_else(|| {
            Error::Invalid(format!("pasting step {i}: components do not compose"))
        })?;
        cur_word = word_join3(&step.left, to, &step.right);
    }
    Ok(nat)
}

/// A defect found by [`validate_two_rep`], naming its generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RepViolation {
    /// Table sizes do not match the presentation.
    Shape(String),
    /// The functor at a 1-generator breaks a functor law.
    Gen { id: String, message: String },
    /// The transformation at a 2-generator is missing, not natural, or not
    /// invertible.
    Cell { id: String, message: String },
    /// A relation's two pastings evaluate differently.
    Relation { id: String, message: String },
}

impl fmt::Display for RepViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepViolation::Shape(m) => write!(f, "shape mismatch: {m}"),
            RepViolation::Gen { id, message } => write!(f, "generator `{id}`: {message}"),
            RepViolation::Cell { id, message } => write!(f, "cell `{id}`: {message}"),
            RepViolation::Relation { id, message } => write!(f, "relation `{id}`: {message}"),
        }
    }
}

/// Checks a representation against its presentation: functor laws per
/// 1-generator, invertible naturality per 2-generator, and componentwise
/// equality of the two sides of every relation.
pub fn validate_two_rep(p: &Presentation2, rep: &TwoRep) -> Vec<RepViolation> {
    let mut out = Vec::new();
    if rep.at.len() != p.point_count()
        || rep.along1.len() != p.gen1_count()
        || rep.along2.len() != p.gen2_count()
    {
        out.push(RepViolation::Shape(format!(
            "expected {} categories, {} functors, {} transformations; found {}, {}, {}",
            p.point_count(),
            p.gen1_count(),
            p.gen2_count(),
            rep.at.len(),
            rep.along1.len(),
            rep.along2.len(),
        )));
        return out;
    }
    for (g, gen) in p.gen1.iter().enumerate() {
        let Ok((s, d)) = p.gen1_endpoints(g) else {
            out.push(RepViolation::Gen {
                id: gen.id.clone(),
                message: "endpoints do not resolve".to_string(),
            });
            continue;
        };
        for v in validate_functor(&rep.at[s], &rep.at[d], &rep.along1[g]) {
            out.push(RepViolation::Gen { id: gen.id.clone(), message: v.to_string() });
        }
    }
    for (ci, cell) in p.gen2.iter().enumerate() {
        let sides = word_endpoints(p, &cell.src)
            .and_then(|(a, b)| Ok(((a, b), word_endpoints(p, &cell.dst)?)));
        let Ok(((a, b), _)) = sides else {
            out.push(RepViolation::Cell {
                id: cell.id.clone(),
                message: "sides are ill-typed".to_string(),
            });
            continue;
        };
        let (src_f, dst_f) = match (eval_word(p, rep, &cell.src), eval_word(p, rep, &cell.dst))
        {
            (Ok(s), Ok(d)) => (s, d),
            (s, d) => {
                for res in [s, d] {
                    if let Err(e) = res {
                        out.push(RepViolation::Cell {
                            id: cell.id.clone(),
                            message: e.to_string(),
                        });
                    }
                }
                continue;
            }
        };
        for v in validate_nat(&rep.at[a], &rep.at[b], &src_f, &dst_f, &rep.along2[ci], true) {
            out.push(RepViolation::Cell { id: cell.id.clone(), message: v.to_string() });
        }
    }
    for r in &p.rel2 {
        let sides = (eval_pasting(p, rep, &r.lhs), eval_pasting(p, rep, &r.rhs));
        match sides {
            (Ok(lhs), Ok(rhs)) => {
                if lhs != rhs {
                    let at = word_endpoints(p, &r.lhs.source)
                        .map(|(a, _)| a)
                        .unwrap_or_default();
                    let witness = lhs
                        .components
                        .iter()
                        .zip(&rhs.components)
                        .position(|(l, r)| l != r)
                        .map(|x| rep.at[at].object_id(x).to_string())
                        .unwrap_or_else(|| "?".to_string());
                    out.push(RepViolation::Relation {
                        id: r.id.clone(),
                        message: format!("the two pastings differ at object `{witness}`"),
                    });
                }
            }
            (lhs, rhs) => {
                for (side, res) in [("left side", lhs), ("right side", rhs)] {
                    if let Err(e) = res {
                        out.push(RepViolation::Relation {
                            id: r.id.clone(),
                            message: format!("{side}: {e}"),
                        });
                    }
                }
            }
        }
    }
    out
}

/// A map of presentations: points to points, 1-generators to words,
/// 2-generators to pastings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationMap {
    pub on_point: Vec<usize>,
    pub on_gen1: Vec<Word>,
    pub on_gen2: Vec<Pasting>,
}

impl PresentationMap {
    /// The identity map on a well-formed presentation.
    pub fn identity(p: &Presentation2) -> Self {
        PresentationMap {
            on_point: p.point_range().collect(),
            on_gen1: p.gen1.iter().map(|g| Word::path(&g.src, &[&g.id])).collect(),
            on_gen2: p
                .gen2
                .iter()
                .map(|c| {
                    let end = word_endpoints(p, &c.src)
                        .map(|(_, b)| p.point_id(b).to_string())
                        .unwrap_or_else(|_| c.src.at.clone());
                    Pasting {
                        source: c.src.clone(),
                        steps: vec![PastingStep {
                            left: Word::id(&c.src.at),
                            cell: c.id.clone(),
                            inverted: false,
                            right: Word::id(&end),
                        }],
                    }
                })
                .collect(),
        }
    }

    /// Builds a map from by-name assignments, resolving every identifier.
    pub fn build(
        src: &Presentation2,
        dst: &Presentation2,
        points: &[(&str, &str)],
        gen1: &[(&str, Word)],
        gen2: &[(&str, Pasting)],
    ) -> Result<Self> {
        let on_point = src
            .points
            .iter()
            .map(|p| {
                let image = points
                    .iter()
                    .find(|(from, _)| from == p)
                    .map(|(_, to)| *to)
                    .ok_or_else(|| Error::UnknownId { kind: "point", id: p.clone() })?;
                dst.point_index(image)
            })
            .collect::<Result<Vec<_>>>()?;
        let on_gen1 = src
            .gen1
            .iter()
            .map(|g| {
                gen1.iter()
                    .find(|(from, _)| *from == g.id)
                    .map(|(_, w)| w.clone())
                    .ok_or_else(|| Error::UnknownId { kind: "generator", id: g.id.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        let on_gen2 = src
            .gen2
            .iter()
            .map(|c| {
                gen2.iter()
                    .find(|(from, _)| *from == c.id)
                    .map(|(_, ps)| ps.clone())
                    .ok_or_else(|| Error::UnknownId { kind: "cell", id: c.id.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PresentationMap { on_point, on_gen1, on_gen2 })
    }
}

/// Substitution of a word along a presentation map.
///
/// Inverted letters map to the reversed image word with every letter
/// inverted.
pub fn subst_word(
    src: &Presentation2,
    dst: &Presentation2,
    f: &PresentationMap,
    w: &Word,
) -> Result<Word> {
    let a = src.point_index(&w.at)?;
    let mut letters = Vec::new();
    for l in &w.letters {
        let g = src.gen1_index(&l.gen)?;
        let image = f
            .on_gen1
            .get(g)
            .ok_or_else(|| Error::ShapeMismatch("map is missing a generator image".into()))?;
        if l.inverted {
            letters.extend(image.letters.iter().rev().map(|m| Letter {
                gen: m.gen.clone(),
                inverted: !m.inverted,
            }));
        } else {
            letters.extend(image.letters.iter().cloned());
        }
    }
    let at = dst
        .points
        .get(*f.on_point.get(a).ok_or_else(|| {
            Error::ShapeMismatch("map is missing a point image".into())
        })?)
        .ok_or_else(|| Error::ShapeMismatch("point image out of range".into()))?;
    Ok(Word { at: at.clone(), letters })
}

/// Substitution of a pasting along a presentation map.
///
/// Each step's cell is replaced by its image pasting, whiskered on both
/// sides by the substituted whiskers; inverted steps replay the image in
/// reverse with every step's orientation toggled.
pub fn subst_pasting(
    src: &Presentation2,
    dst: &Presentation2,
    f: &PresentationMap,
    ps: &Pasting,
) -> Result<Pasting> {
    let source = subst_word(src, dst, f, &ps.source)?;
    let mut steps = Vec::new();
    for step in &ps.steps {
        let c = src.gen2_index(&step.cell)?;
        let image = f
            .on_gen2
            .get(c)
            .ok_or_else(|| Error::ShapeMismatch("map is missing a cell image".into()))?;
        let left = subst_word(src, dst, f, &step.left)?;
        let right = subst_word(src, dst, f, &step.right)?;
        let whisker = |inner: &PastingStep, inverted: bool| PastingStep {
            left: word_join(&left, &inner.left),
            cell: inner.cell.clone(),
            inverted,
            right: word_join(&inner.right, &right),
        };
        if step.inverted {
            steps.extend(image.steps.iter().rev().map(|s| whisker(s, !s.inverted)));
        } else {
            steps.extend(image.steps.iter().map(|s| whisker(s, s.inverted)));
        }
    }
    Ok(Pasting { source, steps })
}

/// Composite of presentation maps `f: a → b` then `g: b → c`, with image
/// words and pastings substituted through `g`.
pub fn compose_maps(
    a: &Presentation2,
    b: &Presentation2,
    c: &Presentation2,
    f: &PresentationMap,
    g: &PresentationMap,
) -> Result<PresentationMap> {
    if f.on_point.len() != a.point_count() || g.on_point.len() != b.point_count() {
        return Err(Error::ShapeMismatch(
            "maps to compose do not match their presentations".into(),
        ));
    }
    let on_point = f
        .on_point
        .iter()
        .map(|&p| {
            g.on_point
                .get(p)
                .copied()
                .ok_or_else(|| Error::ShapeMismatch("point image out of range".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let on_gen1 =
        f.on_gen1.iter().map(|w| subst_word(b, c, g, w)).collect::<Result<Vec<_>>>()?;
    let on_gen2 =
        f.on_gen2.iter().map(|ps| subst_pasting(b, c, g, ps)).collect::<Result<Vec<_>>>()?;
    Ok(PresentationMap { on_point, on_gen1, on_gen2 })
}

/// A defect found by [`validate_presentation_map`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapViolation {
    Shape(String),
    /// A 1-generator's image word is ill-typed or has wrong endpoints.
    Gen { id: String, message: String },
    /// A 2-generator's image pasting is ill-formed or has wrong boundary.
    Cell { id: String, message: String },
}

impl fmt::Display for MapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapViolation::Shape(m) => write!(f, "shape mismatch: {m}"),
            MapViolation::Gen { id, message } => write!(f, "generator `{id}`: {message}"),
            MapViolation::Cell { id, message } => write!(f, "cell `{id}`: {message}"),
        }
    }
}

/// Checks a presentation map: image words must connect the image points,
/// image pastings must connect the substituted sides.
pub fn validate_presentation_map(
    src: &Presentation2,
    dst: &Presentation2,
    f: &PresentationMap,
) -> Vec<MapViolation> {
    let mut out = Vec::new();
    if f.on_point.len() != src.point_count()
        || f.on_gen1.len() != src.gen1_count()
        || f.on_gen2.len() != src.gen2_count()
    {
        out.push(MapViolation::Shape(format!(
            "expected {} point, {} generator, {} cell images; found {}, {}, {}",
            src.point_count(),
            src.gen1_count(),
            src.gen2_count(),
            f.on_point.len(),
            f.on_gen1.len(),
            f.on_gen2.len(),
        )));
        return out;
    }
    if let Some(&bad) = f.on_point.iter().find(|&&q| q >= dst.point_count()) {
        out.push(MapViolation::Shape(format!("point image {bad} is out of range")));
        return out;
    }
    for (g, gen) in src.gen1.iter().enumerate() {
        let Ok((s, d)) = src.gen1_endpoints(g) else {
            continue;
        };
        match word_endpoints(dst, &f.on_gen1[g]) {
            Err(e) => {
                out.push(MapViolation::Gen { id: gen.id.clone(), message: e.to_string() })
            }
            Ok((a, b)) => {
                if a != f.on_point[s] || b != f.on_point[d] {
                    out.push(MapViolation::Gen {
                        id: gen.id.clone(),
                        message: format!(
                            "image runs `{}` → `{}`, expected `{}` → `{}`",
                            dst.point_id(a),
                            dst.point_id(b),
                            dst.point_id(f.on_point[s]),
                            dst.point_id(f.on_point[d]),
                        ),
                    });
                }
            }
        }
    }
    for (ci, cell) in src.gen2.iter().enumerate() {
        let expected = subst_word(src, dst, f, &cell.src)
            .and_then(|s| Ok((s, subst_word(src, dst, f, &cell.dst)?)));
        let Ok((src_image, dst_image)) = expected else {
            out.push(MapViolation::Cell {
                id: cell.id.clone(),
                message: "sides do not substitute".to_string(),
            });
            continue;
        };
        match pasting_boundary(dst, &f.on_gen2[ci]) {
            Err(e) => {
                out.push(MapViolation::Cell { id: cell.id.clone(), message: e.to_string() })
            }
            Ok((from, to)) => {
                if from != src_image || to != dst_image {
                    out.push(MapViolation::Cell {
                        id: cell.id.clone(),
                        message: "image pasting does not connect the substituted sides"
                            .to_string(),
                    });
                }
            }
        }
    }
    out
}

/// Pullback of a representation along a presentation map: evaluate the map's
/// image words and pastings in the target representation.
pub fn pullback_rep(
    src: &Presentation2,
    dst: &Presentation2,
    f: &PresentationMap,
    rep: &TwoRep,
) -> Result<TwoRep> {
    if f.on_point.len() != src.point_count()
        || f.on_gen1.len() != src.gen1_count()
        || f.on_gen2.len() != src.gen2_count()
        || rep.at.len() != dst.point_count()
    {
        return Err(Error::ShapeMismatch(
            "presentation map or representation does not match its presentation".into(),
        ));
    }
    let at = f
        .on_point
        .iter()
        .map(|&q| {
            rep.at
                .get(q)
                .cloned()
                .ok_or_else(|| Error::ShapeMismatch("point image out of range".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let along1 = f
        .on_gen1
        .iter()
        .map(|w| eval_word(dst, rep, w))
        .collect::<Result<Vec<_>>>()?;
    let along2 = f
        .on_gen2
        .iter()
        .map(|ps| eval_pasting(dst, rep, ps))
        .collect::<Result<Vec<_>>>()?;
    Ok(TwoRep { at, along1, along2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn inverted_letters_cancel_strictly() {
        let p = fixtures::circle_presentation();
        let c = fixtures::iso_pair();
        let t = fixtures::indiscrete_swap(&c);
        let rep = TwoRep { at: vec![c.clone()], along1: vec![t], along2: vec![] };
        let w = Word {
            at: "b".to_string(),
            letters: vec![
                Letter { gen: "s".to_string(), inverted: false },
                Letter { gen: "s".to_string(), inverted: true },
            ],
        };
        assert_eq!(eval_word(&p, &rep, &w).unwrap(), identity_functor(&c));
    }

    #[test]
    fn duplicate_generators_are_rejected_at_construction() {
        let err = Presentation2::from_parts(
            &["b"],
            &[("s", "b", "b"), ("s", "b", "b")],
            vec![],
            vec![],
        );
        assert!(matches!(err, Err(Error::DuplicateId { kind: "generator", .. })));
    }

    #[test]
    fn the_identity_map_validates() {
        let p = fixtures::circle_presentation();
        let f = PresentationMap::identity(&p);
        assert!(validate_presentation_map(&p, &p, &f).is_empty());
    }

    #[test]
    fn an_identity_pasting_evaluates_to_the_identity() {
        let p = fixtures::circle_presentation();
        let c = fixtures::iso_pair();
        let t = fixtures::indiscrete_swap(&c);
        let rep = TwoRep { at: vec![c.clone()], along1: vec![t.clone()], along2: vec![] };
        let ps = Pasting::identity(&Word::path("b", &["s"]));
        assert_eq!(eval_pasting(&p, &rep, &ps).unwrap(), identity_nat(&c, &t));
    }

    #[test]
    fn relation_checks_compare_pastings_componentwise() {
        // ℤ/2 satisfies `t·t = e`, so a relation declaring the square of a
        // cell trivial holds exactly when the cell's component is trivial.
        let cell = Gen2Data {
            id: "c".to_string(),
            src: Word::path("b", &["s"]),
            dst: Word::path("b", &["s"]),
        };
        let twice = Pasting {
            source: Word::path("b", &["s"]),
            steps: vec![
                PastingStep {
                    left: Word::id("b"),
                    cell: "c".to_string(),
                    inverted: false,
                    right: Word::id("b"),
                },
                PastingStep {
                    left: Word::id("b"),
                    cell: "c".to_string(),
                    inverted: false,
                    right: Word::id("b"),
                },
            ],
        };
        let relation = Rel2Data {
            id: "r".to_string(),
            lhs: twice,
            rhs: Pasting::identity(&Word::path("b", &["s"])),
        };
        let p =
            Presentation2::from_parts(&["b"], &[("s", "b", "b")], vec![cell], vec![relation])
                .unwrap();
        let z2 = fixtures::cyclic2();
        let rep = TwoRep {
            at: vec![z2.clone()],
            along1: vec![identity_functor(&z2)],
            along2: vec![NatTransData { components: vec![1] }],
        };
        assert!(validate_two_rep(&p, &rep).is_empty());

        // The single application of the cell, declared trivial, fails.
        let single = Rel2Data {
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
            rhs: Pasting::identity(&Word::path("b", &["s"])),
        };
        let mut broken = p.clone();
        broken.rel2 = vec![single];
        let violations = validate_two_rep(&broken, &rep);
        assert!(violations
            .iter()
            .any(|v| matches!(v, RepViolation::Relation { id, .. } if id == "r")));
    }
}
