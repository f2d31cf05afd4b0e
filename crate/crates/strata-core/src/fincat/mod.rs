/*! Finite categories presented by explicit composition tables.

A [`FinCat`] lists its objects and morphisms by string identifier and stores
a flat composition table. Identifiers are canonically ordered
(lexicographically) at construction time, so any two structurally equal
presentations produce identical in-memory values and identical serialized
output. Everything downstream — functor search, descent enumeration, gluing —
builds on this kernel.

Validation is witness-producing: [`FinCat::validate`] returns a list of
[`CategoryViolation`]s naming the offending pair or triple instead of a bare
boolean.
*/

mod equivalence;
mod functor;
mod functor_category;

pub use equivalence::{
    certify_inverse_pair, find_equivalence, find_nat_iso, is_equivalence, isomorphic_to_identity,
    EquivalenceReport, EsoWitness, FaithfulWitness, FullWitness, QuasiInverse,
};
pub use functor::{
    hcompose, identity_functor, identity_nat, inverse_nat, then_functor, validate_functor,
    validate_nat, vcompose, whisker_left, whisker_right, FunctorData, FunctorViolation,
    NatTransData, NatViolation,
};
pub use functor_category::{enumerate_functors, functor_category, FunctorCategory};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One morphism of a [`FinCat`]: identifier plus endpoints (object indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorData {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

/// A finite category: objects, morphisms, identity assignment, composition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<MorData>,
    /// Identity morphism index per object.
    identity: Vec<usize>,
    /// `comp[f * n_mor + g]` is `g∘f` for `f: a → b`, `g: b → c` (f first).
    comp: Vec<Option<usize>>,
}

/// A semantic defect found by [`FinCat::validate`], naming its witnesses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CategoryViolation {
    /// `identity[obj]` is not an endomorphism of `obj`.
    IdentityEndpoints { object: String, id_mor: String },
    /// A composable pair has no table entry.
    MissingComposite { first: String, then: String },
    /// A table entry exists for a non-composable pair.
    NonComposableEntry { first: String, then: String },
    /// The composite's endpoints don't match the pair's.
    CompositeEndpoints {
        first: String,
        then: String,
        got: String,
    },
    /// `id_src ; f ≠ f`.
    LeftUnit { mor: String, got: String },
    /// `f ; id_dst ≠ f`.
    RightUnit { mor: String, got: String },
    /// `(f;g);h ≠ f;(g;h)` — names the offending triple.
    Associativity {
        f: String,
        g: String,
        h: String,
        left: String,
        right: String,
    },
}

impl std::fmt::Display for CategoryViolation {
    fn fmt(&self, w: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CategoryViolation::IdentityEndpoints { object, id_mor } => {
                write!(w, "identity `{id_mor}` of `{object}` is not an endomorphism")
            }
            CategoryViolation::MissingComposite { first, then } => {
                write!(w, "missing composite for `{first}` then `{then}`")
            }
            CategoryViolation::NonComposableEntry { first, then } => {
                write!(w, "table entry for non-composable `{first}` then `{then}`")
            }
            CategoryViolation::CompositeEndpoints { first, then, got } => {
                write!(w, "composite of `{first}` then `{then}` is `{got}`, wrong endpoints")
            }
            CategoryViolation::LeftUnit { mor, got } => {
                write!(w, "left unit law fails on `{mor}` (got `{got}`)")
            }
            CategoryViolation::RightUnit { mor, got } => {
                write!(w, "right unit law fails on `{mor}` (got `{got}`)")
            }
            CategoryViolation::Associativity { f, g, h, left, right } => write!(
                w,
                "associativity fails on (`{f}`, `{g}`, `{h}`): `{left}` vs `{right}`"
            ),
        }
    }
}

impl FinCat {
    /// Builds a category from named tables, canonicalizing the ordering.
    ///
    /// `morphisms` are `(id, src, dst)`; `identities` maps object id to
    /// morphism id; `comp` entries are `(first, then, is)` meaning
    /// `then ∘ first = is`. Structural problems (unresolved or duplicate
    /// identifiers) are errors; semantic law violations are left to
    /// [`FinCat::validate`].
    pub fn from_tables(
        objects: &[&str],
        morphisms: &[(&str, &str, &str)],
        identities: &[(&str, &str)],
        comp: &[(&str, &str, &str)],
    ) -> Result<FinCat> {
        let mut obj_names: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        obj_names.sort();
        for pair in obj_names.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateId { kind: "object", id: pair[0].clone() });
            }
        }
        let obj_index: BTreeMap<&str, usize> =
            obj_names.iter().map(|s| s.as_str()).zip(0..).collect();

        let mut mors: Vec<(&str, &str, &str)> = morphisms.to_vec();
        mors.sort_by_key(|m| m.0);
        for pair in mors.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateId { kind: "morphism", id: pair[0].0.to_string() });
            }
        }
        let lookup_obj = |id: &str| -> Result<usize> {
            obj_index.get(id).copied().ok_or_else(|| Error::UnknownId {
                kind: "object",
                id: id.to_string(),
            })
        };
        let morphisms: Vec<MorData> = mors
            .iter()
            .map(|&(id, src, dst)| {
                Ok(MorData { id: id.to_string(), src: lookup_obj(src)?, dst: lookup_obj(dst)? })
            })
            .collect::<Result<_>>()?;
        let mor_index: BTreeMap<&str, usize> =
            morphisms.iter().map(|m| m.id.as_str()).zip(0..).collect();
        let lookup_mor = |id: &str| -> Result<usize> {
            mor_index.get(id).copied().ok_or_else(|| Error::UnknownId {
                kind: "morphism",
                id: id.to_string(),
            })
        };

        let mut identity = vec![usize::MAX; obj_names.len()];
        for &(obj, mor) in identities {
            let o = lookup_obj(obj)?;
            if identity[o] != usize::MAX {
                return Err(Error::DuplicateId { kind: "identity assignment", id: obj.to_string() });
            }
            identity[o] = lookup_mor(mor)?;
        }
        for (o, &m) in identity.iter().enumerate() {
            if m == usize::MAX {
                return Err(Error::Invalid(format!(
                    "object `{}` has no identity assignment",
                    obj_names[o]
                )));
            }
        }

        let n = morphisms.len();
        let mut table = vec![None; n * n];
        for &(f, g, h) in comp {
            let (f, g, h) = (lookup_mor(f)?, lookup_mor(g)?, lookup_mor(h)?);
            if table[f * n + g].is_some() {
                return Err(Error::DuplicateId {
                    kind: "composition entry",
                    id: format!("({}, {})", morphisms[f].id, morphisms[g].id),
                });
            }
            table[f * n + g] = Some(h);
        }

        Ok(FinCat { objects: obj_names, morphisms, identity, comp: table })
    }

    /// Builds a category from pre-indexed parts, sorting into canonical order.
    ///
    /// Used by generators whose identifiers are already index-shaped; the
    /// caller guarantees ids are unique. `comp(f, g)` returns `g∘f` where
    /// defined.
    pub fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<MorData>,
        identity: Vec<usize>,
        comp: impl Fn(usize, usize) -> Option<usize>,
    ) -> FinCat {
        // Sort objects and morphisms by id, then remap all indices.
        let mut obj_order: Vec<usize> = (0..objects.len()).collect();
        obj_order.sort_by(|&i, &j| objects[i].cmp(&objects[j]));
        let mut obj_rank = vec![0usize; objects.len()];
        for (rank, &old) in obj_order.iter().enumerate() {
            obj_rank[old] = rank;
        }
        let mut mor_order: Vec<usize> = (0..morphisms.len()).collect();
        mor_order.sort_by(|&i, &j| morphisms[i].id.cmp(&morphisms[j].id));
        let mut mor_rank = vec![0usize; morphisms.len()];
        for (rank, &old) in mor_order.iter().enumerate() {
            mor_rank[old] = rank;
        }

        let n = morphisms.len();
        let mut table = vec![None; n * n];
        for f in 0..n {
            for g in 0..n {
                if let Some(h) = comp(f, g) {
                    table[mor_rank[f] * n + mor_rank[g]] = Some(mor_rank[h]);
                }
            }
        }
        let sorted_objects: Vec<String> =
            obj_order.iter().map(|&o| objects[o].clone()).collect();
        let sorted_morphisms: Vec<MorData> = mor_order
            .iter()
            .map(|&m| MorData {
                id: morphisms[m].id.clone(),
                src: obj_rank[morphisms[m].src],
                dst: obj_rank[morphisms[m].dst],
            })
            .collect();
        let sorted_identity: Vec<usize> =
            obj_order.iter().map(|&o| mor_rank[identity[o]]).collect();
        FinCat {
            objects: sorted_objects,
            morphisms: sorted_morphisms,
            identity: sorted_identity,
            comp: table,
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_id(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn objects(&self) -> impl Iterator<Item = usize> + 'static {
        0..self.objects.len()
    }

    pub fn morphisms(&self) -> impl Iterator<Item = usize> + 'static {
        0..self.morphisms.len()
    }

    pub fn morphism_id(&self, m: usize) -> &str {
        &self.morphisms[m].id
    }

    pub fn object_index(&self, id: &str) -> Result<usize> {
        self.objects
            .binary_search_by(|o| o.as_str().cmp(id))
            .map_err(|_| Error::UnknownId { kind: "object", id: id.to_string() })
    }

    pub fn morphism_index(&self, id: &str) -> Result<usize> {
        self.morphisms
            .binary_search_by(|m| m.id.as_str().cmp(id))
            .map_err(|_| Error::UnknownId { kind: "morphism", id: id.to_string() })
    }

    pub fn src(&self, m: usize) -> usize {
        self.morphisms[m].src
    }

    pub fn dst(&self, m: usize) -> usize {
        self.morphisms[m].dst
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identity[self.morphisms[m].src] == m && self.morphisms[m].src == self.morphisms[m].dst
    }

    /// `g∘f` for `f` then `g`, if the table defines it.
    pub fn then(&self, f: usize, g: usize) -> Option<usize> {
        self.comp[f * self.morphisms.len() + g]
    }

    /// Composes a nonempty chain given in application order.
    pub fn then_chain(&self, chain: &[usize]) -> Option<usize> {
        let mut acc = chain[0];
        for &m in &chain[1..] {
            acc = self.then(acc, m)?;
        }
        Some(acc)
    }

    /// All morphisms `a → b` in canonical order.
    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.morphisms()
            .filter(|&m| self.src(m) == a && self.dst(m) == b)
            .collect()
    }

    /// Two-sided inverse of `m`, found by searching the composition table.
    pub fn inverse(&self, m: usize) -> Option<usize> {
        let (a, b) = (self.src(m), self.dst(m));
        self.hom(b, a).into_iter().find(|&g| {
            self.then(m, g) == Some(self.identity(a)) && self.then(g, m) == Some(self.identity(b))
        })
    }

    pub fn is_invertible(&self, m: usize) -> bool {
        self.inverse(m).is_some()
    }

    /// All invertible morphisms `a → b` in canonical order.
    pub fn isos(&self, a: usize, b: usize) -> Vec<usize> {
        self.hom(a, b).into_iter().filter(|&m| self.is_invertible(m)).collect()
    }

    /// Checks the category laws, reporting every violation with witnesses.
    pub fn validate(&self) -> Vec<CategoryViolation> {
        let mut out = Vec::new();
        let id = |m: usize| self.morphisms[m].id.clone();

        for o in self.objects() {
            let e = self.identity[o];
            if self.src(e) != o || self.dst(e) != o {
                out.push(CategoryViolation::IdentityEndpoints {
                    object: self.objects[o].clone(),
                    id_mor: id(e),
                });
            }
        }
        for f in self.morphisms() {
            for g in self.morphisms() {
                let composable = self.dst(f) == self.src(g);
                match self.then(f, g) {
                    None if composable => {
                        out.push(CategoryViolation::MissingComposite { first: id(f), then: id(g) });
                    }
                    Some(_) if !composable => {
                        out.push(CategoryViolation::NonComposableEntry {
                            first: id(f),
                            then: id(g),
                        });
                    }
                    Some(h) if composable => {
                        if self.src(h) != self.src(f) || self.dst(h) != self.dst(g) {
                            out.push(CategoryViolation::CompositeEndpoints {
                                first: id(f),
                                then: id(g),
                                got: id(h),
                            });
                        }
                    }
                    _ => {}
                }
            }
        }
        for f in self.morphisms() {
            let (a, b) = (self.src(f), self.dst(f));
            if let Some(got) = self.then(self.identity[a], f) {
                if got != f {
                    out.push(CategoryViolation::LeftUnit { mor: id(f), got: id(got) });
                }
            }
            if let Some(got) = self.then(f, self.identity[b]) {
                if got != f {
                    out.push(CategoryViolation::RightUnit { mor: id(f), got: id(got) });
                }
            }
        }
        for f in self.morphisms() {
            for g in self.morphisms() {
                if self.dst(f) != self.src(g) {
                    continue;
                }
                for h in self.morphisms() {
                    if self.dst(g) != self.src(h) {
                        continue;
                    }
                    let left = self.then(f, g).and_then(|fg| self.then(fg, h));
                    let right = self.then(g, h).and_then(|gh| self.then(f, gh));
                    if let (Some(l), Some(r)) = (left, right) {
                        if l != r {
                            out.push(CategoryViolation::Associativity {
                                f: id(f),
                                g: id(g),
                                h: id(h),
                                left: id(l),
                                right: id(r),
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// True when [`FinCat::validate`] finds nothing.
    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

/// Zero-padded index identifier so lexicographic id order equals index order.
pub fn indexed_id(prefix: &str, index: usize, count: usize) -> String {
    let width = if count <= 1 { 1 } else { (count - 1).to_string().len() };
    format!("{prefix}{index:0width$}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn arrow_category_is_valid() {
        let c = fixtures::walking_arrow();
        assert!(c.is_valid());
        assert_eq!(c.object_count(), 2);
        assert_eq!(c.morphism_count(), 3);
        let f = c.morphism_index("f").unwrap();
        assert!(!c.is_invertible(f));
        assert!(c.is_invertible(c.identity(0)));
    }

    #[test]
    fn redirected_composite_is_reported() {
        // Walking arrow plus a parallel arrow, with `f ; id_b` redirected to `g`.
        let c = FinCat::from_tables(
            &["a", "b"],
            &[("id_a", "a", "a"), ("id_b", "b", "b"), ("f", "a", "b"), ("g", "a", "b")],
            &[("a", "id_a"), ("b", "id_b")],
            &[
                ("id_a", "id_a", "id_a"),
                ("id_b", "id_b", "id_b"),
                ("id_a", "f", "f"),
                ("f", "id_b", "g"),
                ("id_a", "g", "g"),
                ("g", "id_b", "g"),
            ],
        )
        .unwrap();
        let violations = c.validate();
        assert!(violations.contains(&CategoryViolation::RightUnit {
            mor: "f".into(),
            got: "g".into()
        }));
    }

    #[test]
    fn broken_triple_names_associativity_witness() {
        // One object, morphisms {e, x, y}; the table below breaks (x;x);x.
        let c = FinCat::from_tables(
            &["*"],
            &[("e", "*", "*"), ("x", "*", "*"), ("y", "*", "*")],
            &[("*", "e")],
            &[
                ("e", "e", "e"),
                ("e", "x", "x"),
                ("e", "y", "y"),
                ("x", "e", "x"),
                ("y", "e", "y"),
                ("x", "x", "y"),
                ("x", "y", "x"),
                ("y", "x", "e"),
                ("y", "y", "y"),
            ],
        )
        .unwrap();
        let violations = c.validate();
        assert!(violations.iter().any(|v| matches!(
            v,
            CategoryViolation::Associativity { f, g, h, .. }
                if f == "x" && g == "x" && h == "x"
        )));
    }

    #[test]
    fn canonical_ordering_is_lexicographic() {
        let c = FinCat::from_tables(
            &["z", "a"],
            &[("id_z", "z", "z"), ("id_a", "a", "a")],
            &[("z", "id_z"), ("a", "id_a")],
            &[("id_z", "id_z", "id_z"), ("id_a", "id_a", "id_a")],
        )
        .unwrap();
        assert_eq!(c.object_id(0), "a");
        assert_eq!(c.object_id(1), "z");
        assert_eq!(c.morphism_id(0), "id_a");
    }

    #[test]
    fn inverse_search_in_iso_pair() {
        let c = fixtures::iso_pair();
        let u = c.morphism_index("u").unwrap();
        let v = c.morphism_index("v").unwrap();
        assert_eq!(c.inverse(u), Some(v));
        assert_eq!(c.inverse(v), Some(u));
        assert!(c.morphisms().all(|m| c.is_invertible(m)));
    }
}
