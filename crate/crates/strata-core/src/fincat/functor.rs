//! Functors and natural transformations between [`FinCat`]s, with the
//! whiskering/vertical-composition algebra used by every pasting diagram
//! downstream.

use super::FinCat;
use serde::{Deserialize, Serialize};

/// A functor presented by its object and morphism tables.
///
/// `on_obj[x]`/`on_mor[m]` are indexed by the *source* category and valued in
/// the *target* category. The categories themselves are passed to operations
/// explicitly; contexts owning both sides resolve them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorData {
    pub on_obj: Vec<usize>,
    pub on_mor: Vec<usize>,
}

/// A natural transformation presented by its component table.
///
/// `components[x]` is a morphism of the target category from `F(x)` to `G(x)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NatTransData {
    pub components: Vec<usize>,
}

/// A defect found by [`validate_functor`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctorViolation {
    /// `F(m)` has endpoints other than `F(src m) → F(dst m)`.
    Endpoints { mor: String },
    /// `F(id_a) ≠ id_{F(a)}`.
    Identity { object: String },
    /// `F(f;g) ≠ F(f);F(g)` (or one side is undefined).
    Composition { first: String, then: String },
    /// Table length doesn't match the source category.
    Arity { expected_obj: usize, expected_mor: usize },
}

impl std::fmt::Display for FunctorViolation {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FunctorViolation::Endpoints { mor } => write!(w, "image of `{mor}` has wrong endpoints"),
            FunctorViolation::Identity { object } => {
                write!(w, "identity of `{object}` is not preserved")
            }
            FunctorViolation::Composition { first, then } => {
                write!(w, "composite of `{first}` then `{then}` is not preserved")
            }
            FunctorViolation::Arity { expected_obj, expected_mor } => write!(
                w,
                "tables must cover {expected_obj} objects and {expected_mor} morphisms"
            ),
        }
    }
}

/// A defect found by [`validate_nat`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NatViolation {
    /// Component at `object` is not a morphism `F(object) → G(object)`.
    Endpoints { object: String },
    /// Naturality square at `mor` does not commute.
    Naturality { mor: String },
    /// Component table length doesn't match the source category.
    Arity { expected: usize },
    /// A component required to be invertible is not.
    NotInvertible { object: String },
}

impl std::fmt::Display for NatViolation {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NatViolation::Endpoints { object } => {
                write!(w, "component at `{object}` has wrong endpoints")
            }
            NatViolation::Naturality { mor } => {
                write!(w, "naturality square at `{mor}` does not commute")
            }
            NatViolation::Arity { expected } => {
                write!(w, "component table must cover {expected} objects")
            }
            NatViolation::NotInvertible { object } => {
                write!(w, "component at `{object}` is not invertible")
            }
        }
    }
}

impl FunctorData {
    pub fn apply_obj(&self, o: usize) -> usize {
        self.on_obj[o]
    }

    pub fn apply_mor(&self, m: usize) -> usize {
        self.on_mor[m]
    }
}

/// Checks that `f` is a functor `src → dst`, reporting all defects.
pub fn validate_functor(src: &FinCat, dst: &FinCat, f: &FunctorData) -> Vec<FunctorViolation> {
    let mut out = Vec::new();
    if f.on_obj.len() != src.object_count() || f.on_mor.len() != src.morphism_count() {
        out.push(FunctorViolation::Arity {
            expected_obj: src.object_count(),
            expected_mor: src.morphism_count(),
        });
        return out;
    }
    if f.on_obj.iter().any(|&o| o >= dst.object_count())
        || f.on_mor.iter().any(|&m| m >= dst.morphism_count())
    {
        out.push(FunctorViolation::Arity {
            expected_obj: src.object_count(),
            expected_mor: src.morphism_count(),
        });
        return out;
    }
    for m in src.morphisms() {
        let fm = f.on_mor[m];
        if dst.src(fm) != f.on_obj[src.src(m)] || dst.dst(fm) != f.on_obj[src.dst(m)] {
            out.push(FunctorViolation::Endpoints { mor: src.morphism_id(m).to_string() });
        }
    }
    for o in src.objects() {
        if f.on_mor[src.identity(o)] != dst.identity(f.on_obj[o]) {
            out.push(FunctorViolation::Identity { object: src.object_id(o).to_string() });
        }
    }
    for m1 in src.morphisms() {
        for m2 in src.morphisms() {
            if let Some(c) = src.then(m1, m2) {
                if dst.then(f.on_mor[m1], f.on_mor[m2]) != Some(f.on_mor[c]) {
                    out.push(FunctorViolation::Composition {
                        first: src.morphism_id(m1).to_string(),
                        then: src.morphism_id(m2).to_string(),
                    });
                }
            }
        }
    }
    out
}

/// Checks that `t` is natural `f ⇒ g`; `require_iso` also demands invertible
/// components.
pub fn validate_nat(
    src: &FinCat,
    dst: &FinCat,
    f: &FunctorData,
    g: &FunctorData,
    t: &NatTransData,
    require_iso: bool,
) -> Vec<NatViolation> {
    let mut out = Vec::new();
    if t.components.len() != src.object_count() {
        out.push(NatViolation::Arity { expected: src.object_count() });
        return out;
    }
    if t.components.iter().any(|&m| m >= dst.morphism_count()) {
        out.push(NatViolation::Arity { expected: src.object_count() });
        return out;
    }
    for o in src.objects() {
        let c = t.components[o];
        if dst.src(c) != f.on_obj[o] || dst.dst(c) != g.on_obj[o] {
            out.push(NatViolation::Endpoints { object: src.object_id(o).to_string() });
        } else if require_iso && !dst.is_invertible(c) {
            out.push(NatViolation::NotInvertible { object: src.object_id(o).to_string() });
        }
    }
    for m in src.morphisms() {
        let (a, b) = (src.src(m), src.dst(m));
        let left = dst.then(f.on_mor[m], t.components[b]);
        let right = dst.then(t.components[a], g.on_mor[m]);
        if left.is_none() || left != right {
            out.push(NatViolation::Naturality { mor: src.morphism_id(m).to_string() });
        }
    }
    out
}

/// The identity functor on `c`.
pub fn identity_functor(c: &FinCat) -> FunctorData {
    FunctorData { on_obj: c.objects().collect(), on_mor: c.morphisms().collect() }
}

/// `f` then `g` (apply `f` first).
pub fn then_functor(f: &FunctorData, g: &FunctorData) -> FunctorData {
    FunctorData {
        on_obj: f.on_obj.iter().map(|&o| g.on_obj[o]).collect(),
        on_mor: f.on_mor.iter().map(|&m| g.on_mor[m]).collect(),
    }
}

/// The identity transformation on `f: src → dst`.
pub fn identity_nat(dst: &FinCat, f: &FunctorData) -> NatTransData {
    NatTransData { components: f.on_obj.iter().map(|&o| dst.identity(o)).collect() }
}

/// Vertical composition: `s: F ⇒ G` then `t: G ⇒ H`, giving `F ⇒ H`.
pub fn vcompose(dst: &FinCat, s: &NatTransData, t: &NatTransData) -> Option<NatTransData> {
    let components = s
        .components
        .iter()
        .zip(&t.components)
        .map(|(&a, &b)| dst.then(a, b))
        .collect::<Option<Vec<_>>>()?;
    Some(NatTransData { components })
}

/// Whiskers `post` onto `t: F ⇒ G` from the left: `post∘F ⇒ post∘G`,
/// components `post(t_x)`. `whisker_left(Id, t) = t`.
pub fn whisker_left(post: &FunctorData, t: &NatTransData) -> NatTransData {
    NatTransData { components: t.components.iter().map(|&m| post.on_mor[m]).collect() }
}

/// Whiskers `pre` onto `t: F ⇒ G` from the right: `F∘pre ⇒ G∘pre`,
/// components `t_{pre(x)}`. `whisker_right(t, Id) = t`.
pub fn whisker_right(t: &NatTransData, pre: &FunctorData) -> NatTransData {
    NatTransData { components: pre.on_obj.iter().map(|&o| t.components[o]).collect() }
}

/// Horizontal composition of `s: F ⇒ G` (between `a → b`) with
/// `t: H ⇒ K` (between `b → c`): `H∘F ⇒ K∘G`.
pub fn hcompose(
    cat_c: &FinCat,
    g: &FunctorData,
    h: &FunctorData,
    s: &NatTransData,
    t: &NatTransData,
) -> Option<NatTransData> {
    vcompose(cat_c, &whisker_left(h, s), &whisker_right(t, g))
}

/// Componentwise inverse of an invertible transformation.
pub fn inverse_nat(dst: &FinCat, t: &NatTransData) -> Option<NatTransData> {
    let components =
        t.components.iter().map(|&m| dst.inverse(m)).collect::<Option<Vec<_>>>()?;
    Some(NatTransData { components })
}
