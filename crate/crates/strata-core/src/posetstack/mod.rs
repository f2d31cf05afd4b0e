/*! Stratified finite posets and stacks modeled as pseudofunctors on them.

A [`StratPoset`] is a finite poset with a monotone level map — the discrete
stand-in for a stratified space, where `x ≤ y` reads "y is in the closure's
star of x" and the value of a stack at `x` plays the role of sections over
the minimal open neighborhood of `x`. A [`PosetStack`] is a pseudofunctor
on the poset viewed as a category, covariant on `≤`.

The adjunction half of the theory lives in [`adjunction`]: pointwise
pushforward along sub-poset inclusions by up-set descent, the unit and
counit, and the base-change check.
*/

mod adjunction;

pub use adjunction::{
    check_base_change, counit_eps, global_sections_stack, pullback_modification,
    pullback_transformation, pushforward_modification, pushforward_stack,
    pushforward_transformation, sub_unit, unit_eta, unit_naturality, BaseChangePoint,
    BaseChangeReport, Counit, Pushforward, SubUnit, Unit,
};

use crate::fincat::{identity_functor, indexed_id, FinCat, FunctorData, MorData};
use crate::pseudo::{PseudoFunctor, PseudoViolation};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A finite poset whose elements carry a monotone stratification level.
///
/// Elements are kept sorted by identifier; `leq` stores the full
/// reflexive–transitive relation as a sorted pair list. Levels must be
/// monotone (`x ≤ y` implies `level(x) ≤ level(y)`) and occupy `0..n`
/// without gaps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratPoset {
    elements: Vec<String>,
    leq: Vec<(usize, usize)>,
    level: Vec<usize>,
}

impl StratPoset {
    /// Builds a poset from element names, generating relations, and levels
    /// (aligned with the input element order). The relation is closed
    /// reflexively and transitively; antisymmetry violations are errors.
    pub fn new(elements: &[&str], below: &[(&str, &str)], level: &[usize]) -> Result<StratPoset> {
        let names: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
        let index = |name: &str| -> Result<usize> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownId { kind: "poset element", id: name.to_string() })
        };
        let pairs = below
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>>>()?;
        StratPoset::from_parts(names, pairs, level.to_vec())
    }

    /// Index-based constructor; see [`StratPoset::new`].
    pub fn from_parts(
        elements: Vec<String>,
        below: Vec<(usize, usize)>,
        level: Vec<usize>,
    ) -> Result<StratPoset> {
        let n = elements.len();
        if level.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "{} levels for {} elements",
                level.len(),
                n
            )));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if elements[i] == elements[j] {
                    return Err(Error::DuplicateId {
                        kind: "poset element",
                        id: elements[i].clone(),
                    });
                }
            }
        }
        // Canonical order: sort elements by identifier and remap.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| elements[i].cmp(&elements[j]));
        let mut rank = vec![0usize; n];
        for (r, &old) in order.iter().enumerate() {
            rank[old] = r;
        }
        let elements: Vec<String> = order.iter().map(|&o| elements[o].clone()).collect();
        let level: Vec<usize> = order.iter().map(|&o| level[o]).collect();

        // Reflexive-transitive closure.
        let mut mat = vec![false; n * n];
        for i in 0..n {
            mat[i * n + i] = true;
        }
        for &(a, b) in &below {
            if a >= n || b >= n {
                return Err(Error::UnknownId { kind: "poset element", id: a.max(b).to_string() });
            }
            mat[rank[a] * n + rank[b]] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if mat[i * n + k] {
                    for j in 0..n {
                        if mat[k * n + j] {
                            mat[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if mat[i * n + j] && mat[j * n + i] {
                    return Err(Error::Invalid(format!(
                        "relation is not antisymmetric: `{}` and `{}` are mutually below each other",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if mat[i * n + j] && level[i] > level[j] {
                    return Err(Error::Invalid(format!(
                        "level map is not monotone: `{}` ≤ `{}` but levels are {} > {}",
                        elements[i], elements[j], level[i], level[j]
                    )));
                }
            }
        }
        if n > 0 {
            let max = *level.iter().max().unwrap();
            for k in 0..=max {
                if !level.contains(&k) {
                    return Err(Error::Invalid(format!("level {k} is empty")));
                }
            }
        }
        let mut leq = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if mat[a * n + b] {
                    leq.push((a, b));
                }
            }
        }
        Ok(StratPoset { elements, leq, level })
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + 'static {
        0..self.elements.len()
    }

    pub fn element_id(&self, x: usize) -> &str {
        &self.elements[x]
    }

    pub fn element_index(&self, id: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e == id)
            .ok_or_else(|| Error::UnknownId { kind: "poset element", id: id.to_string() })
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq.binary_search(&(a, b)).is_ok()
    }

    pub fn level_of(&self, x: usize) -> usize {
        self.level[x]
    }

    /// Number of occupied levels (`max level + 1`, or 0 when empty).
    pub fn level_count(&self) -> usize {
        self.level.iter().max().map_or(0, |m| m + 1)
    }

    pub fn level_members(&self, k: usize) -> Vec<usize> {
        self.elements().filter(|&x| self.level[x] == k).collect()
    }

    /// Elements above `x`, in canonical order (includes `x`).
    pub fn up_set(&self, x: usize) -> Vec<usize> {
        self.elements().filter(|&y| self.leq(x, y)).collect()
    }

    /// Whether a sorted member list is closed upward.
    pub fn is_up_closed(&self, members: &[usize]) -> bool {
        members
            .iter()
            .all(|&x| self.up_set(x).iter().all(|y| members.contains(y)))
    }

    /// The full sub-poset on a strictly increasing member list. Levels are
    /// compressed to stay gap-free while preserving their order.
    pub fn sub_poset(&self, members: &[usize]) -> Result<StratPoset> {
        if members.windows(2).any(|w| w[0] >= w[1])
            || members.iter().any(|&m| m >= self.element_count())
        {
            return Err(Error::Invalid(
                "sub-poset members must be strictly increasing element indices".to_string(),
            ));
        }
        let mut kept_levels: Vec<usize> = members.iter().map(|&m| self.level[m]).collect();
        kept_levels.sort_unstable();
        kept_levels.dedup();
        let elements: Vec<String> =
            members.iter().map(|&m| self.elements[m].clone()).collect();
        let level: Vec<usize> = members
            .iter()
            .map(|&m| kept_levels.binary_search(&self.level[m]).unwrap())
            .collect();
        let mut below = Vec::new();
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                if self.leq(a, b) {
                    below.push((i, j));
                }
            }
        }
        StratPoset::from_parts(elements, below, level)
    }

    /// Rank of a related pair in the sorted relation — equal to the index
    /// of the corresponding morphism in [`poset_as_category`].
    pub fn pair_index(&self, a: usize, b: usize) -> Option<usize> {
        self.leq.binary_search(&(a, b)).ok()
    }

    pub fn pair_count(&self) -> usize {
        self.leq.len()
    }

    /// The `k`-th related pair in canonical order; inverse of
    /// [`StratPoset::pair_index`].
    pub fn pair(&self, k: usize) -> (usize, usize) {
        self.leq[k]
    }
}

/// The poset as a category: one object per element, one morphism per
/// related pair. Object indices agree with element indices; morphism
/// indices agree with [`StratPoset::pair_index`].
pub fn poset_as_category(p: &StratPoset) -> FinCat {
    let objects: Vec<String> = p.elements().map(|x| p.element_id(x).to_string()).collect();
    let morphisms: Vec<MorData> = p
        .leq
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| MorData { id: indexed_id("le", k, p.leq.len()), src: a, dst: b })
        .collect();
    let identity: Vec<usize> =
        p.elements().map(|x| p.pair_index(x, x).expect("reflexive")).collect();
    let leq = &p.leq;
    FinCat::from_parts(objects, morphisms, identity, |f, g| {
        let (a, b1) = leq[f];
        let (b2, c) = leq[g];
        (b1 == b2).then(|| p.pair_index(a, c).expect("transitive"))
    })
}

/// A monotone map between stratified posets, stored as an image table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetMap {
    pub on: Vec<usize>,
}

impl PosetMap {
    /// Validates monotonicity (not level preservation).
    pub fn new(src: &StratPoset, dst: &StratPoset, on: Vec<usize>) -> Result<PosetMap> {
        if on.len() != src.element_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for {} elements",
                on.len(),
                src.element_count()
            )));
        }
        if let Some(&bad) = on.iter().find(|&&y| y >= dst.element_count()) {
            return Err(Error::UnknownId { kind: "poset element", id: bad.to_string() });
        }
        for a in src.elements() {
            for b in src.elements() {
                if src.leq(a, b) && !dst.leq(on[a], on[b]) {
                    return Err(Error::Invalid(format!(
                        "map is not monotone: `{}` ≤ `{}` but images `{}` and `{}` are unrelated",
                        src.element_id(a),
                        src.element_id(b),
                        dst.element_id(on[a]),
                        dst.element_id(on[b])
                    )));
                }
            }
        }
        Ok(PosetMap { on })
    }

    pub fn identity(p: &StratPoset) -> PosetMap {
        PosetMap { on: p.elements().collect() }
    }

    pub fn constant(src: &StratPoset, dst: &StratPoset, target: usize) -> Result<PosetMap> {
        PosetMap::new(src, dst, vec![target; src.element_count()])
    }

    /// The inclusion of `ambient.sub_poset(members)` into the ambient poset.
    pub fn inclusion(ambient: &StratPoset, members: &[usize]) -> Result<PosetMap> {
        let sub = ambient.sub_poset(members)?;
        PosetMap::new(&sub, ambient, members.to_vec())
    }

    /// Composition: `self` then `g`.
    pub fn then(&self, g: &PosetMap) -> PosetMap {
        PosetMap { on: self.on.iter().map(|&x| g.on[x]).collect() }
    }
}

/// A stack on a stratified poset: a pseudofunctor whose shape is the poset
/// viewed as a category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetStack {
    pub base: StratPoset,
    pub pf: PseudoFunctor,
}

impl PosetStack {
    /// Pairs a base with a pseudofunctor, checking the shape matches.
    pub fn new(base: StratPoset, pf: PseudoFunctor) -> Result<PosetStack> {
        if pf.shape != poset_as_category(&base) {
            return Err(Error::ShapeMismatch(
                "pseudofunctor shape is not the base poset as a category".to_string(),
            ));
        }
        Ok(PosetStack { base, pf })
    }

    /// A strict stack from values and transition functors; `trans(a, b)` is
    /// consulted once per strictly related pair and must compose exactly.
    pub fn strict(
        base: StratPoset,
        at: Vec<FinCat>,
        trans: impl Fn(usize, usize) -> FunctorData,
    ) -> Result<PosetStack> {
        if at.len() != base.element_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for {} elements",
                at.len(),
                base.element_count()
            )));
        }
        let along: Vec<FunctorData> = base
            .leq
            .iter()
            .map(|&(a, b)| if a == b { identity_functor(&at[a]) } else { trans(a, b) })
            .collect();
        let shape = poset_as_category(&base);
        let pf = PseudoFunctor::strict(shape, at, along)?;
        Ok(PosetStack { base, pf })
    }

    /// The constant stack with one value everywhere.
    pub fn constant(base: StratPoset, value: FinCat) -> Result<PosetStack> {
        let shape = poset_as_category(&base);
        let pf = PseudoFunctor::constant(shape, value)?;
        Ok(PosetStack { base, pf })
    }

    pub fn validate(&self) -> Vec<PseudoViolation> {
        self.pf.validate()
    }

    pub fn value(&self, x: usize) -> &FinCat {
        &self.pf.at[x]
    }

    /// The shape morphism index for `a ≤ b`.
    pub fn mor(&self, a: usize, b: usize) -> Option<usize> {
        self.base.pair_index(a, b)
    }

    pub fn transition(&self, a: usize, b: usize) -> Option<&FunctorData> {
        self.mor(a, b).map(|s| &self.pf.along[s])
    }
}

/// Pulls a stack back along a monotone map: values, transitions, and
/// coherence cells are looked up pointwise, so pullback is strictly
/// functorial in the map (table equality, not just equivalence).
pub fn pullback_stack(src: &StratPoset, map: &PosetMap, st: &PosetStack) -> Result<PosetStack> {
    if map.on.len() != src.element_count()
        || map.on.iter().any(|&y| y >= st.base.element_count())
    {
        return Err(Error::ShapeMismatch(
            "map does not go from the given poset into the stack's base".to_string(),
        ));
    }
    let shape = poset_as_category(src);
    let image_mor = |s: usize| -> usize {
        let (a, b) = src.leq[s];
        st.base
            .pair_index(map.on[a], map.on[b])
            .expect("monotone map carries related pairs to related pairs")
    };
    let at: Vec<FinCat> = src.elements().map(|x| st.pf.at[map.on[x]].clone()).collect();
    let along: Vec<FunctorData> =
        (0..src.pair_count()).map(|s| st.pf.along[image_mor(s)].clone()).collect();
    let mut comp_iso = std::collections::BTreeMap::new();
    for s1 in shape.morphisms() {
        for s2 in shape.morphisms() {
            if shape.then(s1, s2).is_some() {
                let cell = st.pf.comp_iso[&(image_mor(s1), image_mor(s2))].clone();
                comp_iso.insert((s1, s2), cell);
            }
        }
    }
    let unit_iso = src.elements().map(|x| st.pf.unit_iso[map.on[x]].clone()).collect();
    let pf = PseudoFunctor { shape, at, along, comp_iso, unit_iso };
    Ok(PosetStack { base: src.clone(), pf })
}
