/*! Pseudofunctors on a finite shape and their descent categories.

A [`PseudoFunctor`] assigns a value category to every shape object and a
transition functor to every shape morphism, with invertible comparison data:
`comp_iso[(s, s')]` relates the value at a composite to the composite of
values, and `unit_iso[a]` relates the identity to the value at an identity.
All coherence laws (triple pastings, unit reductions) are closed under
exhaustive componentwise checking, and every checker returns witnesses.

[`descent::descent_category`] computes the 2-limit of a pseudofunctor by
enumerating descent families; see that module for projections, mediators,
and the functors induced by [`PseudoTransformation`]s and [`Modification`]s.
*/

mod descent;

pub use descent::{
    complete_family, descent_category, descent_category_on, descent_projection,
    induced_on_descent, induced_on_descent_2, mediator, Completion, Cone, DescentArrow,
    DescentCat, DescentFamily,
};

use crate::fincat::{
    identity_functor, identity_nat, then_functor, validate_functor, validate_nat, vcompose,
    whisker_left, whisker_right, FinCat, FunctorData, FunctorViolation, NatTransData, NatViolation,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A pseudofunctor from a finite shape category into categories.
///
/// Indexing: `at[a]` for shape objects, `along[s]` for shape morphisms.
/// `comp_iso[(s, s')]` is keyed by a composable pair in application order
/// (`s` first) and has shape `𝔠(s'∘s) ⇒ 𝔠(s')∘𝔠(s)`; `unit_iso[a]` has
/// shape `Id ⇒ 𝔠(id_a)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoFunctor {
    pub shape: FinCat,
    pub at: Vec<FinCat>,
    pub along: Vec<FunctorData>,
    pub comp_iso: BTreeMap<(usize, usize), NatTransData>,
    pub unit_iso: Vec<NatTransData>,
}

/// A defect found by [`PseudoFunctor::validate`], naming its witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PseudoViolation {
    /// A table has the wrong length for the shape.
    Arity { what: String },
    /// A transition functor breaks functoriality.
    Along { mor: String, violation: FunctorViolation },
    /// No comparison for a composable pair.
    CompIsoMissing { first: String, then: String },
    /// A comparison keyed by a non-composable pair.
    CompIsoUnexpected { first: String, then: String },
    /// A comparison is not a natural isomorphism of the right shape.
    CompIso { first: String, then: String, violation: NatViolation },
    /// A unit comparison is not a natural isomorphism of the right shape.
    UnitIso { object: String, violation: NatViolation },
    /// The two pastings over a composable triple disagree at an object.
    TripleCoherence { first: String, then: String, third: String, at_object: String },
    /// A comparison against an identity fails to reduce to the unit.
    UnitCoherence { mor: String, side: String, at_object: String },
}

impl std::fmt::Display for PseudoViolation {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PseudoViolation::Arity { what } => write!(w, "arity mismatch: {what}"),
            PseudoViolation::Along { mor, violation } => {
                write!(w, "transition along `{mor}`: {violation}")
            }
            PseudoViolation::CompIsoMissing { first, then } => {
                write!(w, "missing comparison for `{first}` then `{then}`")
            }
            PseudoViolation::CompIsoUnexpected { first, then } => {
                write!(w, "comparison for non-composable `{first}` then `{then}`")
            }
            PseudoViolation::CompIso { first, then, violation } => {
                write!(w, "comparison for (`{first}`, `{then}`): {violation}")
            }
            PseudoViolation::UnitIso { object, violation } => {
                write!(w, "unit comparison at `{object}`: {violation}")
            }
            PseudoViolation::TripleCoherence { first, then, third, at_object } => write!(
                w,
                "triple coherence fails on (`{first}`, `{then}`, `{third}`) at object `{at_object}`"
            ),
            PseudoViolation::UnitCoherence { mor, side, at_object } => {
                write!(w, "unit coherence ({side}) fails on `{mor}` at object `{at_object}`")
            }
        }
    }
}

impl PseudoFunctor {
    /// Builds a strict pseudofunctor: all comparisons are identities.
    ///
    /// Fails with [`Error::ShapeMismatch`] unless the transition functors
    /// compose on the nose (`along[s'∘s]` equals `along[s]` then `along[s']`
    /// as tables, and `along[id] = Id`).
    pub fn strict(shape: FinCat, at: Vec<FinCat>, along: Vec<FunctorData>) -> Result<PseudoFunctor> {
        if at.len() != shape.object_count() || along.len() != shape.morphism_count() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} values and {} transitions, got {} and {}",
                shape.object_count(),
                shape.morphism_count(),
                at.len(),
                along.len()
            )));
        }
        for a in shape.objects() {
            if along[shape.identity(a)] != identity_functor(&at[a]) {
                return Err(Error::ShapeMismatch(format!(
                    "transition along `{}` is not the identity functor",
                    shape.morphism_id(shape.identity(a))
                )));
            }
        }
        let mut comp_iso = BTreeMap::new();
        for s in shape.morphisms() {
            for sp in shape.morphisms() {
                if let Some(t) = shape.then(s, sp) {
                    let composite = then_functor(&along[s], &along[sp]);
                    if composite != along[t] {
                        return Err(Error::ShapeMismatch(format!(
                            "transitions along `{}` then `{}` do not compose strictly",
                            shape.morphism_id(s),
                            shape.morphism_id(sp)
                        )));
                    }
                    let c = shape.dst(sp);
                    comp_iso.insert((s, sp), identity_nat(&at[c], &along[t]));
                }
            }
        }
        let unit_iso = shape
            .objects()
            .map(|a| identity_nat(&at[a], &identity_functor(&at[a])))
            .collect();
        Ok(PseudoFunctor { shape, at, along, comp_iso, unit_iso })
    }

    /// The constant pseudofunctor at `value`: every transition is `Id`.
    pub fn constant(shape: FinCat, value: FinCat) -> Result<PseudoFunctor> {
        let ident = identity_functor(&value);
        let at = vec![value; shape.object_count()];
        let along = vec![ident; shape.morphism_count()];
        PseudoFunctor::strict(shape, at, along)
    }

    /// True when every comparison component is an identity morphism.
    pub fn is_strict(&self) -> bool {
        let all_id =
            |cat: &FinCat, t: &NatTransData| t.components.iter().all(|&m| cat.is_identity(m));
        self.comp_iso.iter().all(|(&(_, sp), t)| all_id(&self.at[self.shape.dst(sp)], t))
            && self.unit_iso.iter().enumerate().all(|(a, u)| all_id(&self.at[a], u))
    }

    /// Checks every pseudofunctor law, reporting all violations with witnesses.
    pub fn validate(&self) -> Vec<PseudoViolation> {
        let mut out = Vec::new();
        let shape = &self.shape;
        if self.at.len() != shape.object_count() {
            out.push(PseudoViolation::Arity {
                what: format!("{} values for {} shape objects", self.at.len(), shape.object_count()),
            });
            return out;
        }
        if self.along.len() != shape.morphism_count() {
            out.push(PseudoViolation::Arity {
                what: format!(
                    "{} transitions for {} shape morphisms",
                    self.along.len(),
                    shape.morphism_count()
                ),
            });
            return out;
        }
        if self.unit_iso.len() != shape.object_count() {
            out.push(PseudoViolation::Arity {
                what: format!(
                    "{} unit comparisons for {} shape objects",
                    self.unit_iso.len(),
                    shape.object_count()
                ),
            });
            return out;
        }

        for s in shape.morphisms() {
            let (a, b) = (shape.src(s), shape.dst(s));
            for v in validate_functor(&self.at[a], &self.at[b], &self.along[s]) {
                out.push(PseudoViolation::Along {
                    mor: shape.morphism_id(s).to_string(),
                    violation: v,
                });
            }
        }
        if !out.is_empty() {
            // Comparisons are meaningless against broken transitions.
            return out;
        }

        for s in shape.morphisms() {
            for sp in shape.morphisms() {
                let key = (s, sp);
                match (shape.then(s, sp), self.comp_iso.get(&key)) {
                    (Some(t), Some(iso)) => {
                        let (a, c) = (shape.src(s), shape.dst(sp));
                        let composite = then_functor(&self.along[s], &self.along[sp]);
                        for v in
                            validate_nat(&self.at[a], &self.at[c], &self.along[t], &composite, iso, true)
                        {
                            out.push(PseudoViolation::CompIso {
                                first: shape.morphism_id(s).to_string(),
                                then: shape.morphism_id(sp).to_string(),
                                violation: v,
                            });
                        }
                    }
                    (Some(_), None) => out.push(PseudoViolation::CompIsoMissing {
                        first: shape.morphism_id(s).to_string(),
                        then: shape.morphism_id(sp).to_string(),
                    }),
                    (None, Some(_)) => out.push(PseudoViolation::CompIsoUnexpected {
                        first: shape.morphism_id(s).to_string(),
                        then: shape.morphism_id(sp).to_string(),
                    }),
                    (None, None) => {}
                }
            }
        }
        for a in shape.objects() {
            let ident = identity_functor(&self.at[a]);
            for v in validate_nat(
                &self.at[a],
                &self.at[a],
                &ident,
                &self.along[shape.identity(a)],
                &self.unit_iso[a],
                true,
            ) {
                out.push(PseudoViolation::UnitIso {
                    object: shape.object_id(a).to_string(),
                    violation: v,
                });
            }
        }
        if !out.is_empty() {
            // Pastings below assume well-shaped invertible comparisons.
            return out;
        }

        // Triple coherence: both reductions of 𝔠(s''∘s'∘s) agree.
        for s in shape.morphisms() {
            for sp in shape.morphisms() {
                if shape.then(s, sp).is_none() {
                    continue;
                }
                for spp in shape.morphisms() {
                    let Some(v) = shape.then(sp, spp) else { continue };
                    let t = shape.then(s, sp).unwrap();
                    let a = shape.src(s);
                    let d = shape.dst(spp);
                    let route_a = vcompose(
                        &self.at[d],
                        &self.comp_iso[&(t, spp)],
                        &whisker_left(&self.along[spp], &self.comp_iso[&(s, sp)]),
                    );
                    let route_b = vcompose(
                        &self.at[d],
                        &self.comp_iso[&(s, v)],
                        &whisker_right(&self.comp_iso[&(sp, spp)], &self.along[s]),
                    );
                    match (route_a, route_b) {
                        (Some(ra), Some(rb)) => {
                            for x in self.at[a].objects() {
                                if ra.components[x] != rb.components[x] {
                                    out.push(PseudoViolation::TripleCoherence {
                                        first: shape.morphism_id(s).to_string(),
                                        then: shape.morphism_id(sp).to_string(),
                                        third: shape.morphism_id(spp).to_string(),
                                        at_object: self.at[a].object_id(x).to_string(),
                                    });
                                }
                            }
                        }
                        _ => out.push(PseudoViolation::TripleCoherence {
                            first: shape.morphism_id(s).to_string(),
                            then: shape.morphism_id(sp).to_string(),
                            third: shape.morphism_id(spp).to_string(),
                            at_object: "<unpastable>".to_string(),
                        }),
                    }
                }
            }
        }

        // Unit coherence: comparisons against identities are unit whiskerings.
        for s in shape.morphisms() {
            let (a, b) = (shape.src(s), shape.dst(s));
            let left = &self.comp_iso[&(shape.identity(a), s)];
            let expect_left = whisker_left(&self.along[s], &self.unit_iso[a]);
            for x in self.at[a].objects() {
                if left.components[x] != expect_left.components[x] {
                    out.push(PseudoViolation::UnitCoherence {
                        mor: shape.morphism_id(s).to_string(),
                        side: "identity first".to_string(),
                        at_object: self.at[a].object_id(x).to_string(),
                    });
                }
            }
            let right = &self.comp_iso[&(s, shape.identity(b))];
            let expect_right = whisker_right(&self.unit_iso[b], &self.along[s]);
            for x in self.at[a].objects() {
                if right.components[x] != expect_right.components[x] {
                    out.push(PseudoViolation::UnitCoherence {
                        mor: shape.morphism_id(s).to_string(),
                        side: "identity second".to_string(),
                        at_object: self.at[a].object_id(x).to_string(),
                    });
                }
            }
        }
        out
    }
}

/// A pseudonatural transformation between pseudofunctors on one shape.
///
/// `component[a]` is a functor `src.at[a] → dst.at[a]`; `square[s]` for
/// `s: a → b` is the invertible filler
/// `dst.along[s] ∘ component[a] ⇒ component[b] ∘ src.along[s]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoTransformation {
    pub component: Vec<FunctorData>,
    pub square: Vec<NatTransData>,
}

impl PseudoTransformation {
    /// The identity transformation on `d`.
    pub fn identity(d: &PseudoFunctor) -> PseudoTransformation {
        let component = d.at.iter().map(identity_functor).collect();
        let square = d
            .shape
            .morphisms()
            .map(|s| identity_nat(&d.at[d.shape.dst(s)], &d.along[s]))
            .collect();
        PseudoTransformation { component, square }
    }
}

/// A defect found by [`validate_pseudo_transformation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransViolation {
    ShapeMismatch,
    Arity { what: String },
    Component { object: String, violation: FunctorViolation },
    Square { mor: String, violation: NatViolation },
    UnitAxiom { object: String, at_object: String },
    CompositionAxiom { first: String, then: String, at_object: String },
}

impl std::fmt::Display for TransViolation {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TransViolation::ShapeMismatch => write!(w, "source and target shapes differ"),
            TransViolation::Arity { what } => write!(w, "arity mismatch: {what}"),
            TransViolation::Component { object, violation } => {
                write!(w, "component at `{object}`: {violation}")
            }
            TransViolation::Square { mor, violation } => {
                write!(w, "square over `{mor}`: {violation}")
            }
            TransViolation::UnitAxiom { object, at_object } => {
                write!(w, "unit axiom fails at `{object}`, object `{at_object}`")
            }
            TransViolation::CompositionAxiom { first, then, at_object } => write!(
                w,
                "composition axiom fails over (`{first}`, `{then}`) at object `{at_object}`"
            ),
        }
    }
}

/// Checks the pseudonaturality laws of `t: d ⇒ e`.
pub fn validate_pseudo_transformation(
    d: &PseudoFunctor,
    e: &PseudoFunctor,
    t: &PseudoTransformation,
) -> Vec<TransViolation> {
    let mut out = Vec::new();
    if d.shape != e.shape {
        return vec![TransViolation::ShapeMismatch];
    }
    let shape = &d.shape;
    if t.component.len() != shape.object_count() || t.square.len() != shape.morphism_count() {
        return vec![TransViolation::Arity {
            what: format!(
                "{} components / {} squares for {} objects / {} morphisms",
                t.component.len(),
                t.square.len(),
                shape.object_count(),
                shape.morphism_count()
            ),
        }];
    }
    for a in shape.objects() {
        for v in validate_functor(&d.at[a], &e.at[a], &t.component[a]) {
            out.push(TransViolation::Component {
                object: shape.object_id(a).to_string(),
                violation: v,
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for s in shape.morphisms() {
        let (a, b) = (shape.src(s), shape.dst(s));
        let lhs = then_functor(&t.component[a], &e.along[s]);
        let rhs = then_functor(&d.along[s], &t.component[b]);
        for v in validate_nat(&d.at[a], &e.at[b], &lhs, &rhs, &t.square[s], true) {
            out.push(TransViolation::Square {
                mor: shape.morphism_id(s).to_string(),
                violation: v,
            });
        }
    }
    if !out.is_empty() {
        return out;
    }

    // Unit axiom: the square over id_a is forced by the two unit comparisons.
    for a in shape.objects() {
        let expected = crate::fincat::inverse_nat(
            &e.at[a],
            &whisker_right(&e.unit_iso[a], &t.component[a]),
        )
        .and_then(|inv| {
            vcompose(&e.at[a], &inv, &whisker_left(&t.component[a], &d.unit_iso[a]))
        });
        let got = &t.square[shape.identity(a)];
        match expected {
            Some(expected) => {
                for x in d.at[a].objects() {
                    if got.components[x] != expected.components[x] {
                        out.push(TransViolation::UnitAxiom {
                            object: shape.object_id(a).to_string(),
                            at_object: d.at[a].object_id(x).to_string(),
                        });
                    }
                }
            }
            None => out.push(TransViolation::UnitAxiom {
                object: shape.object_id(a).to_string(),
                at_object: "<unpastable>".to_string(),
            }),
        }
    }

    // Composition axiom: the two pastings over each composable pair agree.
    for s in shape.morphisms() {
        for sp in shape.morphisms() {
            let Some(comp) = shape.then(s, sp) else { continue };
            let a = shape.src(s);
            for x in d.at[a].objects() {
                let ca = &t.component[a];
                let cc = &t.component[shape.dst(sp)];
                // Route 1: e-comparison, then square over s under e.along[sp],
                // then square over sp at the transported object.
                let r1 = e.at[shape.dst(sp)].then_chain(&[
                    e.comp_iso[&(s, sp)].components[ca.on_obj[x]],
                    e.along[sp].on_mor[t.square[s].components[x]],
                    t.square[sp].components[d.along[s].on_obj[x]],
                ]);
                // Route 2: square over the composite, then the d-comparison
                // pushed through the target component.
                let r2 = e.at[shape.dst(sp)].then_chain(&[
                    t.square[comp].components[x],
                    cc.on_mor[d.comp_iso[&(s, sp)].components[x]],
                ]);
                if r1.is_none() || r1 != r2 {
                    out.push(TransViolation::CompositionAxiom {
                        first: shape.morphism_id(s).to_string(),
                        then: shape.morphism_id(sp).to_string(),
                        at_object: d.at[a].object_id(x).to_string(),
                    });
                }
            }
        }
    }
    out
}

/// A modification between parallel pseudonatural transformations: one
/// natural transformation `t.component[a] ⇒ u.component[a]` per shape object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modification {
    pub at: Vec<NatTransData>,
}

impl Modification {
    /// The identity modification on `t: _ ⇒ target`.
    pub fn identity(target: &PseudoFunctor, t: &PseudoTransformation) -> Modification {
        let at = target
            .shape
            .objects()
            .map(|a| identity_nat(&target.at[a], &t.component[a]))
            .collect();
        Modification { at }
    }
}

/// A defect found by [`validate_modification`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModViolation {
    Arity { what: String },
    Component { object: String, violation: NatViolation },
    Compatibility { mor: String, at_object: String },
}

impl std::fmt::Display for ModViolation {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModViolation::Arity { what } => write!(w, "arity mismatch: {what}"),
            ModViolation::Component { object, violation } => {
                write!(w, "component at `{object}`: {violation}")
            }
            ModViolation::Compatibility { mor, at_object } => {
                write!(w, "square compatibility fails over `{mor}` at object `{at_object}`")
            }
        }
    }
}

/// Checks the modification law for `m: t ⇛ u` with `t, u: d ⇒ e`.
pub fn validate_modification(
    d: &PseudoFunctor,
    e: &PseudoFunctor,
    t: &PseudoTransformation,
    u: &PseudoTransformation,
    m: &Modification,
) -> Vec<ModViolation> {
    let mut out = Vec::new();
    let shape = &d.shape;
    if m.at.len() != shape.object_count() {
        return vec![ModViolation::Arity {
            what: format!("{} components for {} shape objects", m.at.len(), shape.object_count()),
        }];
    }
    for a in shape.objects() {
        for v in validate_nat(&d.at[a], &e.at[a], &t.component[a], &u.component[a], &m.at[a], false)
        {
            out.push(ModViolation::Component {
                object: shape.object_id(a).to_string(),
                violation: v,
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for s in shape.morphisms() {
        let (a, b) = (shape.src(s), shape.dst(s));
        for x in d.at[a].objects() {
            let lhs = e.at[b].then(
                e.along[s].on_mor[m.at[a].components[x]],
                u.square[s].components[x],
            );
            let rhs = e.at[b].then(
                t.square[s].components[x],
                m.at[b].components[d.along[s].on_obj[x]],
            );
            if lhs.is_none() || lhs != rhs {
                out.push(ModViolation::Compatibility {
                    mor: shape.morphism_id(s).to_string(),
                    at_object: d.at[a].object_id(x).to_string(),
                });
            }
        }
    }
    out
}

/// Composes pseudonatural transformations `t1: d ⇒ e` then `t2: e ⇒ f`.
///
/// Components compose as functors; the square over `s` pastes the `t2`
/// square at `t1`'s component with `t2`'s component applied to the `t1`
/// square.
pub fn compose_transformations(
    d: &PseudoFunctor,
    e: &PseudoFunctor,
    f: &PseudoFunctor,
    t1: &PseudoTransformation,
    t2: &PseudoTransformation,
) -> Result<PseudoTransformation> {
    if e.shape != d.shape || f.shape != d.shape {
        return Err(Error::ShapeMismatch(
            "transformations to compose live over different shapes".to_string(),
        ));
    }
    let shape = &d.shape;
    let component: Vec<FunctorData> = shape
        .objects()
        .map(|a| then_functor(&t1.component[a], &t2.component[a]))
        .collect();
    let mut square = Vec::with_capacity(shape.morphism_count());
    for s in shape.morphisms() {
        let (a, b) = (shape.src(s), shape.dst(s));
        let components = d.at[a]
            .objects()
            .map(|x| {
                f.at[b]
                    .then(
                        t2.square[s].components[t1.component[a].on_obj[x]],
                        t2.component[b].on_mor[t1.square[s].components[x]],
                    )
                    .ok_or_else(|| {
                        Error::Invalid("transformation squares do not paste".to_string())
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        square.push(NatTransData { components });
    }
    Ok(PseudoTransformation { component, square })
}

/// Composes modifications `m1: t ⇛ u` then `m2: u ⇛ v` componentwise.
pub fn compose_modifications(
    target: &PseudoFunctor,
    m1: &Modification,
    m2: &Modification,
) -> Result<Modification> {
    let at = target
        .shape
        .objects()
        .map(|a| {
            vcompose(&target.at[a], &m1.at[a], &m2.at[a]).ok_or_else(|| {
                Error::Invalid("modification components do not compose".to_string())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Modification { at })
}

/// Post-whiskers a modification `m: t ⇛ u` (between `d ⇒ e`) with a
/// transformation `w: e ⇒ f`, yielding `w∘t ⇛ w∘u`.
pub fn whisker_modification_left(w: &PseudoTransformation, m: &Modification) -> Modification {
    Modification {
        at: m
            .at
            .iter()
            .enumerate()
            .map(|(a, cell)| NatTransData {
                components: cell.components.iter().map(|&c| w.component[a].on_mor[c]).collect(),
            })
            .collect(),
    }
}

/// Pre-whiskers a modification `m: t ⇛ u` (between `e ⇒ f`) with a
/// transformation `w: d ⇒ e`, yielding `t∘w ⇛ u∘w`.
pub fn whisker_modification_right(m: &Modification, w: &PseudoTransformation) -> Modification {
    Modification {
        at: m
            .at
            .iter()
            .enumerate()
            .map(|(a, cell)| NatTransData {
                components: w.component[a]
                    .on_obj
                    .iter()
                    .map(|&x| cell.components[x])
                    .collect(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn constant_pseudofunctor_validates() {
        let pf = PseudoFunctor::constant(fixtures::chain_category(3), fixtures::cyclic2()).unwrap();
        assert!(pf.validate().is_empty());
    }

    #[test]
    fn corrupted_comparison_names_the_triple() {
        // Constant ℤ/2 diagram on a 4-chain; replace the comparison over the
        // composable pair (o0≤o1, o1≤o2) with the nonidentity automorphism.
        let shape = fixtures::chain_category(4);
        let z2 = fixtures::cyclic2();
        let mut pf = PseudoFunctor::constant(shape.clone(), z2.clone()).unwrap();
        let m01 = shape
            .morphisms()
            .find(|&m| shape.src(m) == 0 && shape.dst(m) == 1)
            .unwrap();
        let m12 = shape
            .morphisms()
            .find(|&m| shape.src(m) == 1 && shape.dst(m) == 2)
            .unwrap();
        let m23 = shape
            .morphisms()
            .find(|&m| shape.src(m) == 2 && shape.dst(m) == 3)
            .unwrap();
        let t = z2.morphism_index("t").unwrap();
        pf.comp_iso.insert((m01, m12), NatTransData { components: vec![t] });
        let violations = pf.validate();
        assert!(violations.iter().any(|v| matches!(
            v,
            PseudoViolation::TripleCoherence { first, then, third, .. }
                if *first == shape.morphism_id(m01)
                    && *then == shape.morphism_id(m12)
                    && *third == shape.morphism_id(m23)
        )));
    }

    #[test]
    fn identity_transformation_validates() {
        let pf = PseudoFunctor::constant(fixtures::chain_category(3), fixtures::cyclic2()).unwrap();
        let t = PseudoTransformation::identity(&pf);
        assert!(validate_pseudo_transformation(&pf, &pf, &t).is_empty());
    }

    #[test]
    fn identity_modification_validates() {
        let pf = PseudoFunctor::constant(fixtures::chain_category(2), fixtures::cyclic2()).unwrap();
        let t = PseudoTransformation::identity(&pf);
        let m = Modification::identity(&pf, &t);
        assert!(validate_modification(&pf, &pf, &t, &t, &m).is_empty());
    }
}
