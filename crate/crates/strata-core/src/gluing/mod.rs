//! Gluing stacks along a stratification.
//!
//! A stratified poset with levels `0..=n` cuts a stack into its level
//! restrictions. This module makes the reassembly calculus executable: the
//! chain-inclusion index category 𝔍, gluing data `({𝔠_k}, {F_kl}, {f_klm})`
//! with their cube coherence, morphisms and modifications of such data with
//! their hexagon and square conditions, the restriction functor [`restrict_R`]
//! and the gluing functor [`glue_G`](glue::glue_G), together with round-trip
//! certification that the two are mutually inverse up to equivalence.
//!
//! Comparisons `F_kl: 𝔠_k ⇒ i_{kl}𝔠_l` point from lower to higher levels,
//! where `i_{kl} = i_k⁻¹ ∘ i_{l*}` transports a level-`l` stack down to the
//! level-`k` sub-poset through the ambient space. Coherence cells `f_klm`
//! run from the direct route `μ_klm ∘ F_km` to the factored route
//! `i_{kl}F_lm ∘ F_kl`, matching the orientation of pseudofunctor
//! composition comparisons.

mod glue;

pub use glue::{
    build_diagram, glue_assemble, glue_fiber, glue_G, glue_morphism, roundtrip_counit,
    roundtrip_unit, CounitLevelReport, CounitPoint, Diagram, Glued, ReducedFamily, UnitPoint,
    UnitReport,
};

use std::collections::BTreeMap;

use crate::error::{Caps, Error, Result};
use crate::fincat::{FinCat, MorData};
use crate::posetstack::{
    pullback_stack, pullback_transformation, pushforward_stack, pushforward_transformation,
    unit_eta, unit_naturality, PosetMap, PosetStack, Pushforward, StratPoset, Unit,
};
use crate::pseudo::{
    compose_modifications, compose_transformations, validate_modification,
    validate_pseudo_transformation, whisker_modification_left, whisker_modification_right,
    Modification, PseudoTransformation,
};

/// The index category 𝔍: chains of one, two or three levels ordered by
/// inclusion. `chains[o]` records the chain behind object `o` of `cat`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexJ {
    pub cat: FinCat,
    pub chains: Vec<Vec<usize>>,
}

impl IndexJ {
    /// The object holding exactly this chain.
    pub fn object_of(&self, chain: &[usize]) -> Option<usize> {
        self.chains.iter().position(|c| c == chain)
    }

    /// The unique morphism between two objects, if the chains are nested.
    pub fn arrow(&self, src: usize, dst: usize) -> Option<usize> {
        self.cat.hom(src, dst).first().copied()
    }
}

/// Builds 𝔍 for levels `{0, …, n}`: one object per nonempty chain of at
/// most three levels, one morphism per chain inclusion.
#[allow(non_snake_case)]
pub fn build_index_J(n: usize) -> IndexJ {
    let mut raw: Vec<Vec<usize>> = Vec::new();
    for a in 0..=n {
        raw.push(vec![a]);
        for b in a + 1..=n {
            raw.push(vec![a, b]);
            for c in b + 1..=n {
                raw.push(vec![a, b, c]);
            }
        }
    }
    let name = |ch: &[usize]| {
        let parts: Vec<String> = ch.iter().map(|k| k.to_string()).collect();
        format!("c{}", parts.join("-"))
    };
    let objects: Vec<String> = raw.iter().map(|c| name(c)).collect();

    let mut morphisms = Vec::new();
    let mut pair_of = Vec::new();
    let mut by_pair = BTreeMap::new();
    let mut identity = vec![0usize; raw.len()];
    for (i, c) in raw.iter().enumerate() {
        for (j, d) in raw.iter().enumerate() {
            if c.iter().all(|e| d.contains(e)) {
                if i == j {
                    identity[i] = morphisms.len();
                }
                by_pair.insert((i, j), morphisms.len());
                morphisms.push(MorData {
                    id: format!("s:{}>{}", objects[i], objects[j]),
                    src: i,
                    dst: j,
                });
                pair_of.push((i, j));
            }
        }
    }
    let cat = FinCat::from_parts(objects.clone(), morphisms, identity, |f, g| {
        let (a, b1) = pair_of[f];
        let (b2, c) = pair_of[g];
        (b1 == b2).then(|| by_pair[&(a, c)])
    });
    let mut chains = vec![Vec::new(); raw.len()];
    for (name, chain) in objects.into_iter().zip(raw) {
        let o = cat.object_index(&name).expect("object survives construction");
        chains[o] = chain;
    }
    IndexJ { cat, chains }
}

/// An object of the gluing 2-category: per-level stacks, comparisons for
/// incident level pairs, and coherence cells for incident level triples.
///
/// A pair `(k, l)` is incident when some level-`k` element lies below a
/// level-`l` element; a triple is incident when a three-step chain exists.
/// Comparisons and coherences are present exactly for incident pairs and
/// triples — levels that never meet carry no comparison data.
#[derive(Debug, Clone)]
pub struct GluingDatum {
    pub base: StratPoset,
    pub levels: Vec<PosetStack>,
    pub comparisons: BTreeMap<(usize, usize), PseudoTransformation>,
    pub coherences: BTreeMap<(usize, usize, usize), Modification>,
}

/// A located failure of the cube condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeWitness {
    pub levels: (usize, usize, usize, usize),
    pub element: String,
    pub object: String,
}

/// Outcome of [`check_gluing_datum`].
#[derive(Debug, Clone)]
pub struct GluingReport {
    pub ok: bool,
    pub witnesses: Vec<CubeWitness>,
}

/// A 1-morphism of gluing data: level maps `G_k` plus invertible cells
/// `g_kl: F'_kl∘G_k ⇛ i_{kl}G_l∘F_kl` for incident pairs.
#[derive(Debug, Clone)]
pub struct GluingMorphism {
    pub levels: Vec<PseudoTransformation>,
    pub cells: BTreeMap<(usize, usize), Modification>,
}

/// A located failure of the hexagon condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HexagonWitness {
    pub levels: (usize, usize, usize),
    pub element: String,
    pub object: String,
}

/// Outcome of [`check_gluing_morphism`].
#[derive(Debug, Clone)]
pub struct MorphismReport {
    pub ok: bool,
    pub witnesses: Vec<HexagonWitness>,
}

/// A 2-morphism of gluing data: one modification per level.
#[derive(Debug, Clone)]
pub struct GluingModification {
    pub levels: Vec<Modification>,
}

/// A located failure of the square condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareWitness {
    pub levels: (usize, usize),
    pub element: String,
    pub object: String,
}

/// Outcome of [`check_gluing_modification`].
#[derive(Debug, Clone)]
pub struct ModificationReport {
    pub ok: bool,
    pub witnesses: Vec<SquareWitness>,
}

/// True when some level-`k` element lies below a level-`l` element.
pub fn incident(base: &StratPoset, k: usize, l: usize) -> bool {
    base.elements().any(|x| {
        base.level_of(x) == k && base.elements().any(|y| base.level_of(y) == l && base.leq(x, y))
    })
}

/// True when a chain through all three levels exists.
pub fn incident_triple(base: &StratPoset, k: usize, l: usize, m: usize) -> bool {
    base.elements().any(|x| {
        base.level_of(x) == k
            && base.elements().any(|y| {
                base.level_of(y) == l
                    && base.leq(x, y)
                    && base.elements().any(|z| base.level_of(z) == m && base.leq(y, z))
            })
    })
}

/// Shared transport tables for one gluing datum: level restrictions pushed
/// to the ambient poset, pair values `i_{k*}i_{kl}𝔠_l` with their unit
/// mediators, and triple values `i_{k*}i_{kl}i_{lm}𝔠_m` likewise. Every
/// route the checkers compare is assembled from these, so identical paths
/// share identical tables.
pub(crate) struct Ctx<'a> {
    pub base: &'a StratPoset,
    pub levels: &'a [PosetStack],
    pub members: Vec<Vec<usize>>,
    pub subs: Vec<StratPoset>,
    pub incls: Vec<PosetMap>,
    /// `i_{k*}𝔠_k` per level.
    pub push_level: Vec<Pushforward>,
    /// `η_k` at `i_{l*}𝔠_l`; its pushforward holds the pair value.
    pub pair_unit: BTreeMap<(usize, usize), Unit>,
    /// `η_k` at `i_{l*}i_{lm}𝔠_m`; its pushforward holds the triple value.
    pub triple_unit: BTreeMap<(usize, usize, usize), Unit>,
}

impl<'a> Ctx<'a> {
    pub fn new(base: &'a StratPoset, levels: &'a [PosetStack], caps: &Caps) -> Result<Ctx<'a>> {
        let n = base.level_count();
        if levels.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "level-mismatch: {} level stacks for {} levels",
                levels.len(),
                n
            )));
        }
        let members: Vec<Vec<usize>> = (0..n).map(|k| base.level_members(k)).collect();
        let mut subs = Vec::with_capacity(n);
        let mut incls = Vec::with_capacity(n);
        for k in 0..n {
            let sub = base.sub_poset(&members[k])?;
            if levels[k].base != sub {
                return Err(Error::ShapeMismatch(format!(
                    "level-mismatch: stack {k} does not live on the level-{k} sub-poset"
                )));
            }
            incls.push(PosetMap::new(&sub, base, members[k].clone())?);
            subs.push(sub);
        }
        let push_level = (0..n)
            .map(|k| pushforward_stack(base, &members[k], &levels[k], caps))
            .collect::<Result<Vec<_>>>()?;
        let mut pair_unit = BTreeMap::new();
        for k in 0..n {
            for l in k + 1..n {
                pair_unit
                    .insert((k, l), unit_eta(base, &members[k], &push_level[l].stack, caps)?);
            }
        }
        let mut triple_unit = BTreeMap::new();
        for k in 0..n {
            for l in k + 1..n {
                for m in l + 1..n {
                    let inner = &pair_unit[&(l, m)].pushforward.stack;
                    triple_unit.insert((k, l, m), unit_eta(base, &members[k], inner, caps)?);
                }
            }
        }
        Ok(Ctx { base, levels, members, subs, incls, push_level, pair_unit, triple_unit })
    }

    /// The pair stack `i_{kl}𝔠_l` on the level-`k` sub-poset.
    pub fn pair_stack(&self, k: usize, l: usize) -> &PosetStack {
        &self.pair_unit[&(k, l)].restricted
    }

    /// The triple stack `i_{kl}i_{lm}𝔠_m` on the level-`k` sub-poset.
    pub fn triple_stack(&self, k: usize, l: usize, m: usize) -> &PosetStack {
        &self.triple_unit[&(k, l, m)].restricted
    }

    /// The stored comparison, or the canonical map into a pointwise trivial
    /// pair stack when the levels never meet.
    pub fn comparison(
        &self,
        d: &GluingDatum,
        k: usize,
        l: usize,
    ) -> Result<PseudoTransformation> {
        if let Some(f) = d.comparisons.get(&(k, l)) {
            return Ok(f.clone());
        }
        let target = self.pair_stack(k, l);
        if !pointwise_trivial(target) {
            return Err(Error::Invalid(format!(
                "no comparison for levels ({k}, {l}) but their pair stack is not trivial"
            )));
        }
        Ok(trivial_transformation(&self.levels[k], target))
    }

    /// `i_{k*}F_kl`, the comparison pushed to the ambient poset.
    pub fn comparison_pushed(
        &self,
        d: &GluingDatum,
        k: usize,
        l: usize,
    ) -> Result<PseudoTransformation> {
        pushforward_transformation(
            &self.levels[k],
            &self.push_level[k],
            &self.pair_unit[&(k, l)].pushforward,
            &self.comparison(d, k, l)?,
        )
    }

    /// `μ_klm = i_k⁻¹(η_l at i_{m*}𝔠_m)`, the unit insertion.
    pub fn mu(&self, k: usize, l: usize, m: usize) -> PseudoTransformation {
        pullback_transformation(
            &self.subs[k],
            &self.incls[k],
            self.base,
            &self.pair_unit[&(l, m)].eta,
        )
    }

    /// `i_{kl}F_lm`, the comparison transported down to level `k`.
    pub fn comparison_transported(
        &self,
        d: &GluingDatum,
        k: usize,
        l: usize,
        m: usize,
    ) -> Result<PseudoTransformation> {
        let pushed = self.comparison_pushed(d, l, m)?;
        Ok(pullback_transformation(&self.subs[k], &self.incls[k], self.base, &pushed))
    }

    /// The direct route `μ_klm ∘ F_km`.
    pub fn route_direct(
        &self,
        d: &GluingDatum,
        k: usize,
        l: usize,
        m: usize,
    ) -> Result<PseudoTransformation> {
        compose_transformations(
            &self.levels[k].pf,
            &self.pair_stack(k, m).pf,
            &self.triple_stack(k, l, m).pf,
            &self.comparison(d, k, m)?,
            &self.mu(k, l, m),
        )
    }

    /// The factored route `i_{kl}F_lm ∘ F_kl`.
    pub fn route_factored(
        &self,
        d: &GluingDatum,
        k: usize,
        l: usize,
        m: usize,
    ) -> Result<PseudoTransformation> {
        compose_transformations(
            &self.levels[k].pf,
            &self.pair_stack(k, l).pf,
            &self.triple_stack(k, l, m).pf,
            &self.comparison(d, k, l)?,
            &self.comparison_transported(d, k, l, m)?,
        )
    }

    /// The stored coherence cell, or the identity when the triple is not
    /// incident (both routes then agree on the nose).
    pub fn coherence(
        &self,
        d: &GluingDatum,
        k: usize,
        l: usize,
        m: usize,
    ) -> Result<Modification> {
        if let Some(f) = d.coherences.get(&(k, l, m)) {
            return Ok(f.clone());
        }
        let direct = self.route_direct(d, k, l, m)?;
        let factored = self.route_factored(d, k, l, m)?;
        if direct != factored {
            return Err(Error::Invalid(format!(
                "no coherence for levels ({k}, {l}, {m}) but the two routes differ"
            )));
        }
        Ok(Modification::identity(&self.triple_stack(k, l, m).pf, &direct))
    }

    /// `i_{l*}μ_lmp` pushed to the ambient poset, the mediator used by both
    /// the associativity cell and the transported unit insertion.
    pub fn mu_pushed(&self, l: usize, m: usize, p: usize) -> Result<PseudoTransformation> {
        pushforward_transformation(
            self.pair_stack(l, p),
            &self.pair_unit[&(l, p)].pushforward,
            &self.triple_unit[&(l, m, p)].pushforward,
            &self.mu(l, m, p),
        )
    }

    /// `i_{l*}i_{lm}F_mp` pushed to the ambient poset.
    pub fn transported_pushed(
        &self,
        d: &GluingDatum,
        l: usize,
        m: usize,
        p: usize,
    ) -> Result<PseudoTransformation> {
        pushforward_transformation(
            self.pair_stack(l, m),
            &self.pair_unit[&(l, m)].pushforward,
            &self.triple_unit[&(l, m, p)].pushforward,
            &self.comparison_transported(d, l, m, p)?,
        )
    }
}

/// True when every fiber of the stack has exactly one object and morphism.
fn pointwise_trivial(st: &PosetStack) -> bool {
    st.base
        .elements()
        .all(|x| st.value(x).object_count() == 1 && st.value(x).morphism_count() == 1)
}

/// The unique transformation into a pointwise trivial stack.
fn trivial_transformation(src: &PosetStack, _dst: &PosetStack) -> PseudoTransformation {
    let component = src
        .base
        .elements()
        .map(|x| crate::fincat::FunctorData {
            on_obj: vec![0; src.value(x).object_count()],
            on_mor: vec![0; src.value(x).morphism_count()],
        })
        .collect();
    let square = (0..src.base.pair_count())
        .map(|k| {
            let (a, _) = src.base.pair(k);
            crate::fincat::NatTransData { components: vec![0; src.value(a).object_count()] }
        })
        .collect();
    PseudoTransformation { component, square }
}

/// Validates the shape and component data of a gluing datum, then checks
/// the cube condition over every level quadruple.
///
/// Structural problems (wrong level decomposition, comparisons between
/// non-incident levels, invalid cells) surface as errors; an intact datum
/// whose cube pastings disagree yields `ok = false` with one witness per
/// failing `(k, l, m, p, element, object)`.
pub fn check_gluing_datum(d: &GluingDatum, caps: &Caps) -> Result<GluingReport> {
    let ctx = Ctx::new(&d.base, &d.levels, caps)?;
    let n = d.levels.len();

    for (&(k, l), f) in &d.comparisons {
        if k >= l || l >= n {
            return Err(Error::Invalid(format!("comparison for a non-pair ({k}, {l})")));
        }
        if !incident(&d.base, k, l) {
            return Err(Error::Invalid(format!(
                "comparison for non-incident levels ({k}, {l})"
            )));
        }
        let target = ctx.pair_stack(k, l);
        if let Some(v) =
            validate_pseudo_transformation(&d.levels[k].pf, &target.pf, f).first()
        {
            return Err(Error::Invalid(format!("comparison F[{k},{l}]: {v}")));
        }
    }
    for (&(k, l, m), cell) in &d.coherences {
        if !(k < l && l < m && m < n) {
            return Err(Error::Invalid(format!("coherence for a non-triple ({k}, {l}, {m})")));
        }
        if !incident_triple(&d.base, k, l, m) {
            return Err(Error::Invalid(format!(
                "coherence for non-incident levels ({k}, {l}, {m})"
            )));
        }
        let direct = ctx.route_direct(d, k, l, m)?;
        let factored = ctx.route_factored(d, k, l, m)?;
        let target = ctx.triple_stack(k, l, m);
        if let Some(v) =
            validate_modification(&d.levels[k].pf, &target.pf, &direct, &factored, cell).first()
        {
            return Err(Error::Invalid(format!("coherence f[{k},{l},{m}]: {v}")));
        }
        for (x, nat) in cell.at.iter().enumerate() {
            let cat = target.value(x);
            if nat.components.iter().any(|&c| cat.inverse(c).is_none()) {
                return Err(Error::Invalid(format!(
                    "coherence f[{k},{l},{m}] is not invertible at `{}`",
                    ctx.subs[k].element_id(x)
                )));
            }
        }
    }

    let mut witnesses = Vec::new();
    for k in 0..n {
        for l in k + 1..n {
            for m in l + 1..n {
                for p in m + 1..n {
                    cube_paths(&ctx, d, (k, l, m, p), &mut witnesses)?;
                }
            }
        }
    }
    Ok(GluingReport { ok: witnesses.is_empty(), witnesses })
}

/// Pastes the two hemispheres of the cube at one quadruple and records the
/// objects where they disagree.
fn cube_paths(
    ctx: &Ctx<'_>,
    d: &GluingDatum,
    levels: (usize, usize, usize, usize),
    witnesses: &mut Vec<CubeWitness>,
) -> Result<()> {
    let (k, l, m, p) = levels;
    let f_klp = ctx.coherence(d, k, l, p)?;
    let f_kmp = ctx.coherence(d, k, m, p)?;
    let f_klm = ctx.coherence(d, k, l, m)?;

    // i_{kl} of the (l,m,p) coherence cell.
    let lambda = {
        let pushed_direct = pushforward_transformation(
            &ctx.levels[l],
            &ctx.push_level[l],
            &ctx.triple_unit[&(l, m, p)].pushforward,
            &ctx.route_direct(d, l, m, p)?,
        )?;
        let pushed_factored = pushforward_transformation(
            &ctx.levels[l],
            &ctx.push_level[l],
            &ctx.triple_unit[&(l, m, p)].pushforward,
            &ctx.route_factored(d, l, m, p)?,
        )?;
        let pushed = crate::posetstack::pushforward_modification(
            &ctx.push_level[l],
            &ctx.triple_unit[&(l, m, p)].pushforward,
            &ctx.coherence(d, l, m, p)?,
            &pushed_direct,
            &pushed_factored,
        )?;
        crate::posetstack::pullback_modification(&ctx.subs[k], &ctx.incls[k], &pushed)
    };

    // Naturality of the unit insertion at the transported comparison.
    let gamma = {
        let cell = unit_naturality(
            &ctx.members[l],
            &ctx.push_level[m].stack,
            &ctx.comparison_pushed(d, m, p)?,
            &ctx.pair_unit[&(l, m)],
            &ctx.triple_unit[&(l, m, p)],
            &ctx.transported_pushed(d, l, m, p)?,
        )?;
        crate::posetstack::pullback_modification(&ctx.subs[k], &ctx.incls[k], &cell)
    };

    // Naturality of the unit insertion at the unit itself.
    let assoc = {
        let cell = unit_naturality(
            &ctx.members[l],
            &ctx.push_level[p].stack,
            &ctx.pair_unit[&(m, p)].eta,
            &ctx.pair_unit[&(l, p)],
            &ctx.triple_unit[&(l, m, p)],
            &ctx.mu_pushed(l, m, p)?,
        )?;
        crate::posetstack::pullback_modification(&ctx.subs[k], &ctx.incls[k], &cell)
    };

    let f_kp = ctx.comparison(d, k, p)?;
    let f_km = ctx.comparison(d, k, m)?;
    let f_kl = ctx.comparison(d, k, l)?;
    let mu_lmp_k = pullback_transformation(
        &ctx.subs[k],
        &ctx.incls[k],
        ctx.base,
        &ctx.mu_pushed(l, m, p)?,
    );
    let mu_prime = pullback_transformation(
        &ctx.subs[k],
        &ctx.incls[k],
        ctx.base,
        &ctx.triple_unit[&(l, m, p)].eta,
    );
    let transported_far = pullback_transformation(
        &ctx.subs[k],
        &ctx.incls[k],
        ctx.base,
        &ctx.transported_pushed(d, l, m, p)?,
    );

    let target = pullback_stack(
        &ctx.subs[k],
        &ctx.incls[k],
        &ctx.triple_unit[&(l, m, p)].pushforward.stack,
    )?;

    let path_a = {
        let first = whisker_modification_right(&assoc, &f_kp);
        let second = whisker_modification_left(&mu_lmp_k, &f_klp);
        let third = whisker_modification_right(&lambda, &f_kl);
        compose_modifications(&target.pf, &compose_modifications(&target.pf, &first, &second)?, &third)?
    };
    let path_b = {
        let first = whisker_modification_left(&mu_prime, &f_kmp);
        let second = whisker_modification_right(&gamma, &f_km);
        let third = whisker_modification_left(&transported_far, &f_klm);
        compose_modifications(&target.pf, &compose_modifications(&target.pf, &first, &second)?, &third)?
    };

    for s in ctx.subs[k].elements() {
        let apex = ctx.levels[k].value(s);
        for c in apex.objects() {
            if path_a.at[s].components[c] != path_b.at[s].components[c] {
                witnesses.push(CubeWitness {
                    levels,
                    element: ctx.subs[k].element_id(s).to_string(),
                    object: apex.object_id(c).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Validates a 1-morphism of gluing data and checks the hexagon condition
/// over every level triple.
pub fn check_gluing_morphism(
    src: &GluingDatum,
    dst: &GluingDatum,
    m: &GluingMorphism,
    caps: &Caps,
) -> Result<MorphismReport> {
    let sctx = Ctx::new(&src.base, &src.levels, caps)?;
    let dctx = Ctx::new(&dst.base, &dst.levels, caps)?;
    if src.base != dst.base {
        return Err(Error::ShapeMismatch(
            "gluing morphism between data on different posets".to_string(),
        ));
    }
    let n = src.levels.len();
    if m.levels.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "level-mismatch: {} level maps for {} levels",
            m.levels.len(),
            n
        )));
    }
    for k in 0..n {
        if let Some(v) =
            validate_pseudo_transformation(&src.levels[k].pf, &dst.levels[k].pf, &m.levels[k])
                .first()
        {
            return Err(Error::Invalid(format!("level map G[{k}]: {v}")));
        }
    }
    for (&(k, l), cell) in &m.cells {
        if !incident(&src.base, k, l) {
            return Err(Error::Invalid(format!("cell for non-incident levels ({k}, {l})")));
        }
        let (lhs, rhs) = morphism_cell_routes(&sctx, &dctx, src, dst, m, k, l, caps)?;
        let target = dctx.pair_stack(k, l);
        if let Some(v) =
            validate_modification(&src.levels[k].pf, &target.pf, &lhs, &rhs, cell).first()
        {
            return Err(Error::Invalid(format!("cell g[{k},{l}]: {v}")));
        }
        for (x, nat) in cell.at.iter().enumerate() {
            let cat = target.value(x);
            if nat.components.iter().any(|&c| cat.inverse(c).is_none()) {
                return Err(Error::Invalid(format!(
                    "cell g[{k},{l}] is not invertible at `{}`",
                    sctx.subs[k].element_id(x)
                )));
            }
        }
    }

    let mut witnesses = Vec::new();
    for k in 0..n {
        for l in k + 1..n {
            for mm in l + 1..n {
                hexagon_paths(&sctx, &dctx, src, dst, m, (k, l, mm), caps, &mut witnesses)?;
            }
        }
    }
    Ok(MorphismReport { ok: witnesses.is_empty(), witnesses })
}

/// The two boundaries of a morphism cell: `F'_kl∘G_k` and `i_{kl}G_l∘F_kl`.
pub(crate) fn morphism_cell_routes(
    sctx: &Ctx<'_>,
    dctx: &Ctx<'_>,
    src: &GluingDatum,
    dst: &GluingDatum,
    m: &GluingMorphism,
    k: usize,
    l: usize,
    caps: &Caps,
) -> Result<(PseudoTransformation, PseudoTransformation)> {
    let lhs = compose_transformations(
        &src.levels[k].pf,
        &dst.levels[k].pf,
        &dctx.pair_stack(k, l).pf,
        &m.levels[k],
        &dctx.comparison(dst, k, l)?,
    )?;
    let transported = transported_level_map(sctx, dctx, m, k, l, caps)?;
    let rhs = compose_transformations(
        &src.levels[k].pf,
        &sctx.pair_stack(k, l).pf,
        &dctx.pair_stack(k, l).pf,
        &sctx.comparison(src, k, l)?,
        &transported,
    )?;
    Ok((lhs, rhs))
}

/// `i_{kl}G_l`: the level map pushed to the ambient poset and pulled back
/// down to level `k`.
fn transported_level_map(
    sctx: &Ctx<'_>,
    dctx: &Ctx<'_>,
    m: &GluingMorphism,
    k: usize,
    l: usize,
    _caps: &Caps,
) -> Result<PseudoTransformation> {
    let pushed = pushforward_transformation(
        &sctx.levels[l],
        &sctx.push_level[l],
        &dctx.push_level[l],
        &m.levels[l],
    )?;
    Ok(pullback_transformation(&sctx.subs[k], &sctx.incls[k], sctx.base, &pushed))
}

/// The stored morphism cell, or the identity when the pair is not incident.
pub(crate) fn morphism_cell(
    sctx: &Ctx<'_>,
    dctx: &Ctx<'_>,
    src: &GluingDatum,
    dst: &GluingDatum,
    m: &GluingMorphism,
    k: usize,
    l: usize,
    caps: &Caps,
) -> Result<Modification> {
    if let Some(cell) = m.cells.get(&(k, l)) {
        return Ok(cell.clone());
    }
    let (lhs, rhs) = morphism_cell_routes(sctx, dctx, src, dst, m, k, l, caps)?;
    if lhs != rhs {
        return Err(Error::Invalid(format!(
            "no cell for levels ({k}, {l}) but the two routes differ"
        )));
    }
    Ok(Modification::identity(&dctx.pair_stack(k, l).pf, &lhs))
}

#[allow(clippy::too_many_arguments)]
fn hexagon_paths(
    sctx: &Ctx<'_>,
    dctx: &Ctx<'_>,
    src: &GluingDatum,
    dst: &GluingDatum,
    mor: &GluingMorphism,
    levels: (usize, usize, usize),
    caps: &Caps,
    witnesses: &mut Vec<HexagonWitness>,
) -> Result<()> {
    let (k, l, m) = levels;
    let g_kl = morphism_cell(sctx, dctx, src, dst, mor, k, l, caps)?;
    let g_km = morphism_cell(sctx, dctx, src, dst, mor, k, m, caps)?;
    let g_lm = morphism_cell(sctx, dctx, src, dst, mor, l, m, caps)?;
    let f_src = sctx.coherence(src, k, l, m)?;
    let f_dst = dctx.coherence(dst, k, l, m)?;

    // i_{kl} of the (l, m) morphism cell.
    let g_lm_transported = {
        let route_lhs = compose_transformations(
            &src.levels[l].pf,
            &dst.levels[l].pf,
            &dctx.pair_stack(l, m).pf,
            &mor.levels[l],
            &dctx.comparison(dst, l, m)?,
        )?;
        let route_rhs = compose_transformations(
            &src.levels[l].pf,
            &sctx.pair_stack(l, m).pf,
            &dctx.pair_stack(l, m).pf,
            &sctx.comparison(src, l, m)?,
            &transported_level_map(sctx, dctx, mor, l, m, caps)?,
        )?;
        let pushed_lhs = pushforward_transformation(
            &src.levels[l],
            &sctx.push_level[l],
            &dctx.pair_unit[&(l, m)].pushforward,
            &route_lhs,
        )?;
        let pushed_rhs = pushforward_transformation(
            &src.levels[l],
            &sctx.push_level[l],
            &dctx.pair_unit[&(l, m)].pushforward,
            &route_rhs,
        )?;
        let pushed = crate::posetstack::pushforward_modification(
            &sctx.push_level[l],
            &dctx.pair_unit[&(l, m)].pushforward,
            &g_lm,
            &pushed_lhs,
            &pushed_rhs,
        )?;
        crate::posetstack::pullback_modification(&sctx.subs[k], &sctx.incls[k], &pushed)
    };

    // Naturality of the target unit insertion at the pushed level map.
    let theta = {
        let pushed_g_m = pushforward_transformation(
            &sctx.levels[m],
            &sctx.push_level[m],
            &dctx.push_level[m],
            &mor.levels[m],
        )?;
        let pushed_t = pushforward_transformation(
            sctx.pair_stack(l, m),
            &sctx.pair_unit[&(l, m)].pushforward,
            &dctx.pair_unit[&(l, m)].pushforward,
            &pullback_transformation(&sctx.subs[l], &sctx.incls[l], sctx.base, &pushed_g_m),
        )?;
        let cell = unit_naturality(
            &sctx.members[l],
            &sctx.push_level[m].stack,
            &pushed_g_m,
            &sctx.pair_unit[&(l, m)],
            &dctx.pair_unit[&(l, m)],
            &pushed_t,
        )?;
        crate::posetstack::pullback_modification(&sctx.subs[k], &sctx.incls[k], &cell)
    };

    let f_kl = sctx.comparison(src, k, l)?;
    let f_km = sctx.comparison(src, k, m)?;
    let g_k = &mor.levels[k];
    let mu_dst = dctx.mu(k, l, m);
    let transported_g_m = {
        let pushed_g_m = pushforward_transformation(
            &sctx.levels[m],
            &sctx.push_level[m],
            &dctx.push_level[m],
            &mor.levels[m],
        )?;
        let inner = pushforward_transformation(
            sctx.pair_stack(l, m),
            &sctx.pair_unit[&(l, m)].pushforward,
            &dctx.pair_unit[&(l, m)].pushforward,
            &pullback_transformation(&sctx.subs[l], &sctx.incls[l], sctx.base, &pushed_g_m),
        )?;
        pullback_transformation(&sctx.subs[k], &sctx.incls[k], sctx.base, &inner)
    };
    let transported_f_dst = dctx.comparison_transported(dst, k, l, m)?;

    let target = dctx.triple_stack(k, l, m);

    let path_1 = {
        let first = whisker_modification_right(&f_dst, g_k);
        let second = whisker_modification_left(&transported_f_dst, &g_kl);
        let third = whisker_modification_right(&g_lm_transported, &f_kl);
        compose_modifications(
            &target.pf,
            &compose_modifications(&target.pf, &first, &second)?,
            &third,
        )?
    };
    let path_2 = {
        let first = whisker_modification_left(&mu_dst, &g_km);
        let second = whisker_modification_right(&theta, &f_km);
        let third = whisker_modification_left(&transported_g_m, &f_src);
        compose_modifications(
            &target.pf,
            &compose_modifications(&target.pf, &first, &second)?,
            &third,
        )?
    };

    for s in sctx.subs[k].elements() {
        let apex = sctx.levels[k].value(s);
        for c in apex.objects() {
            if path_1.at[s].components[c] != path_2.at[s].components[c] {
                witnesses.push(HexagonWitness {
                    levels,
                    element: sctx.subs[k].element_id(s).to_string(),
                    object: apex.object_id(c).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Validates a 2-morphism of gluing data and checks the square condition
/// over every incident level pair.
pub fn check_gluing_modification(
    src: &GluingDatum,
    dst: &GluingDatum,
    from: &GluingMorphism,
    to: &GluingMorphism,
    phi: &GluingModification,
    caps: &Caps,
) -> Result<ModificationReport> {
    let sctx = Ctx::new(&src.base, &src.levels, caps)?;
    let dctx = Ctx::new(&dst.base, &dst.levels, caps)?;
    let n = src.levels.len();
    if phi.levels.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "level-mismatch: {} level cells for {} levels",
            phi.levels.len(),
            n
        )));
    }
    for k in 0..n {
        if let Some(v) = validate_modification(
            &src.levels[k].pf,
            &dst.levels[k].pf,
            &from.levels[k],
            &to.levels[k],
            &phi.levels[k],
        )
        .first()
        {
            return Err(Error::Invalid(format!("level cell phi[{k}]: {v}")));
        }
    }

    let mut witnesses = Vec::new();
    for k in 0..n {
        for l in k + 1..n {
            if !incident(&src.base, k, l) {
                continue;
            }
            let g_from = morphism_cell(&sctx, &dctx, src, dst, from, k, l, caps)?;
            let g_to = morphism_cell(&sctx, &dctx, src, dst, to, k, l, caps)?;
            let f_kl = sctx.comparison(src, k, l)?;
            let f_dst = dctx.comparison(dst, k, l)?;
            let target = dctx.pair_stack(k, l);

            // i_{kl}φ_l whiskered by F_kl on the right.
            let phi_l_transported = {
                let pushed_from = pushforward_transformation(
                    &sctx.levels[l],
                    &sctx.push_level[l],
                    &dctx.push_level[l],
                    &from.levels[l],
                )?;
                let pushed_to = pushforward_transformation(
                    &sctx.levels[l],
                    &sctx.push_level[l],
                    &dctx.push_level[l],
                    &to.levels[l],
                )?;
                let pushed = crate::posetstack::pushforward_modification(
                    &sctx.push_level[l],
                    &dctx.push_level[l],
                    &phi.levels[l],
                    &pushed_from,
                    &pushed_to,
                )?;
                crate::posetstack::pullback_modification(&sctx.subs[k], &sctx.incls[k], &pushed)
            };

            let lhs = compose_modifications(
                &target.pf,
                &g_from,
                &whisker_modification_right(&phi_l_transported, &f_kl),
            )?;
            let rhs = compose_modifications(
                &target.pf,
                &whisker_modification_left(&f_dst, &phi.levels[k]),
                &g_to,
            )?;

            for s in sctx.subs[k].elements() {
                let apex = sctx.levels[k].value(s);
                for c in apex.objects() {
                    if lhs.at[s].components[c] != rhs.at[s].components[c] {
                        witnesses.push(SquareWitness {
                            levels: (k, l),
                            element: sctx.subs[k].element_id(s).to_string(),
                            object: apex.object_id(c).to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(ModificationReport { ok: witnesses.is_empty(), witnesses })
}

/// Restriction: cuts a stack on the ambient poset into its level parts.
///
/// Comparisons are the whiskered adjunction units `i_k⁻¹η_l`; coherence
/// cells are the naturality modifications of those units. The output
/// always satisfies the cube condition.
#[allow(non_snake_case)]
pub fn restrict_R(st: &PosetStack, caps: &Caps) -> Result<GluingDatum> {
    let base = st.base.clone();
    let n = base.level_count();
    let mut levels = Vec::with_capacity(n);
    let mut subs = Vec::with_capacity(n);
    let mut incls = Vec::with_capacity(n);
    let mut units = Vec::with_capacity(n);
    for k in 0..n {
        let members = base.level_members(k);
        let sub = base.sub_poset(&members)?;
        let incl = PosetMap::new(&sub, &base, members.clone())?;
        let unit = unit_eta(&base, &members, st, caps)?;
        levels.push(pullback_stack(&sub, &incl, st)?);
        subs.push(sub);
        incls.push(incl);
        units.push(unit);
    }

    let mut comparisons = BTreeMap::new();
    for k in 0..n {
        for l in k + 1..n {
            if !incident(&base, k, l) {
                continue;
            }
            comparisons.insert(
                (k, l),
                pullback_transformation(&subs[k], &incls[k], &base, &units[l].eta),
            );
        }
    }

    let mut coherences = BTreeMap::new();
    for k in 0..n {
        for l in k + 1..n {
            for m in l + 1..n {
                if !incident_triple(&base, k, l, m) {
                    continue;
                }
                let members_l = base.level_members(l);
                let unit_b = unit_eta(&base, &members_l, &units[m].pushforward.stack, caps)?;
                let pushed_t = pushforward_transformation(
                    &levels[l],
                    &units[l].pushforward,
                    &unit_b.pushforward,
                    &comparisons[&(l, m)],
                )?;
                let cell = unit_naturality(
                    &members_l,
                    st,
                    &units[m].eta,
                    &units[l],
                    &unit_b,
                    &pushed_t,
                )?;
                coherences.insert(
                    (k, l, m),
                    crate::posetstack::pullback_modification(&subs[k], &incls[k], &cell),
                );
            }
        }
    }

    Ok(GluingDatum { base, levels, comparisons, coherences })
}

/// Restriction on 1-morphisms: cuts a map of stacks into level maps with
/// the unit-naturality cells as comparison data.
pub fn restrict_morphism(
    src: &PosetStack,
    dst: &PosetStack,
    t: &PseudoTransformation,
    caps: &Caps,
) -> Result<GluingMorphism> {
    let base = &src.base;
    if dst.base != *base {
        return Err(Error::ShapeMismatch(
            "stack morphism between stacks on different posets".to_string(),
        ));
    }
    let n = base.level_count();
    let mut levels = Vec::with_capacity(n);
    let mut subs = Vec::with_capacity(n);
    let mut incls = Vec::with_capacity(n);
    for k in 0..n {
        let members = base.level_members(k);
        let sub = base.sub_poset(&members)?;
        let incl = PosetMap::new(&sub, base, members.clone())?;
        levels.push(pullback_transformation(&sub, &incl, base, t));
        subs.push(sub);
        incls.push(incl);
    }

    let mut cells = BTreeMap::new();
    for k in 0..n {
        for l in k + 1..n {
            if !incident(base, k, l) {
                continue;
            }
            let members_l = base.level_members(l);
            let src_level = pullback_stack(&subs[l], &incls[l], src)?;
            let unit_a = unit_eta(base, &members_l, src, caps)?;
            let unit_b = unit_eta(base, &members_l, dst, caps)?;
            let pushed_t = pushforward_transformation(
                &src_level,
                &unit_a.pushforward,
                &unit_b.pushforward,
                &levels[l],
            )?;
            let cell = unit_naturality(&members_l, src, t, &unit_a, &unit_b, &pushed_t)?;
            cells.insert(
                (k, l),
                crate::posetstack::pullback_modification(&subs[k], &incls[k], &cell),
            );
        }
    }
    Ok(GluingMorphism { levels, cells })
}
