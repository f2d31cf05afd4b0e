//! The brute-force equivalence oracle: faithful/full/essentially-surjective
//! checks with witnesses, constructive quasi-inverses, and exhaustive
//! searches for equivalences and natural isomorphisms.

use super::functor::{
    identity_functor, then_functor, validate_functor, FunctorData, NatTransData,
};
use super::functor_category::enumerate_functors;
use super::FinCat;
use crate::error::{Caps, Result};
use serde::{Deserialize, Serialize};

/// Two parallel morphisms identified by the candidate functor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaithfulWitness {
    pub first: String,
    pub second: String,
}

/// A target morphism between image objects with no preimage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullWitness {
    pub src: String,
    pub dst: String,
    pub mor: String,
}

/// A target object isomorphic to no image object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EsoWitness {
    pub object: String,
}

/// Quasi-inverse data constructed when all three conditions hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiInverse {
    pub functor: FunctorData,
    /// `Id_src ⇒ inverse ∘ functor` (componentwise invertible).
    pub unit: NatTransData,
    /// `functor ∘ inverse ⇒ Id_dst` (componentwise invertible).
    pub counit: NatTransData,
}

/// Outcome of [`is_equivalence`]: `None` in a field means the condition holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub faithful: Option<FaithfulWitness>,
    pub full: Option<FullWitness>,
    pub essentially_surjective: Option<EsoWitness>,
    pub quasi_inverse: Option<QuasiInverse>,
}

impl EquivalenceReport {
    pub fn is_equivalence(&self) -> bool {
        self.faithful.is_none() && self.full.is_none() && self.essentially_surjective.is_none()
    }
}

/// Decides whether `f: src → dst` is an equivalence.
///
/// Faithfulness, fullness and essential surjectivity are checked by
/// exhaustive search; when all hold and `want_inverse` is set, a canonical
/// quasi-inverse (first preimage and first witnessing isomorphism in
/// canonical order) plus unit/counit are constructed.
pub fn is_equivalence(
    src: &FinCat,
    dst: &FinCat,
    f: &FunctorData,
    caps: &Caps,
    want_inverse: bool,
) -> Result<EquivalenceReport> {
    caps.admit_category(src.object_count(), src.morphism_count())?;
    caps.admit_category(dst.object_count(), dst.morphism_count())?;

    let mut report = EquivalenceReport {
        faithful: None,
        full: None,
        essentially_surjective: None,
        quasi_inverse: None,
    };

    'faithful: for m1 in src.morphisms() {
        for m2 in src.morphisms() {
            if m1 < m2
                && src.src(m1) == src.src(m2)
                && src.dst(m1) == src.dst(m2)
                && f.on_mor[m1] == f.on_mor[m2]
            {
                report.faithful = Some(FaithfulWitness {
                    first: src.morphism_id(m1).to_string(),
                    second: src.morphism_id(m2).to_string(),
                });
                break 'faithful;
            }
        }
    }

    'full: for a in src.objects() {
        for b in src.objects() {
            let image: Vec<usize> = src.hom(a, b).iter().map(|&m| f.on_mor[m]).collect();
            for target in dst.hom(f.on_obj[a], f.on_obj[b]) {
                if !image.contains(&target) {
                    report.full = Some(FullWitness {
                        src: src.object_id(a).to_string(),
                        dst: src.object_id(b).to_string(),
                        mor: dst.morphism_id(target).to_string(),
                    });
                    break 'full;
                }
            }
        }
    }

    // For each target object, a canonical (source object, iso) pair with
    // F(source) ≅ target; doubles as the essential-surjectivity witness data.
    // Exact preimages (witnessed by the identity) win over isomorphic ones so
    // that the quasi-inverse of an identity functor is the identity; within
    // each tier the first candidate in canonical order is chosen.
    let mut section: Vec<Option<(usize, usize)>> = vec![None; dst.object_count()];
    for d in dst.objects() {
        if let Some(c) = src.objects().find(|&c| f.on_obj[c] == d) {
            section[d] = Some((c, dst.identity(d)));
        } else {
            'search: for c in src.objects() {
                for iso in dst.isos(f.on_obj[c], d) {
                    section[d] = Some((c, iso));
                    break 'search;
                }
            }
        }
        if section[d].is_none() && report.essentially_surjective.is_none() {
            report.essentially_surjective =
                Some(EsoWitness { object: dst.object_id(d).to_string() });
        }
    }

    if want_inverse && report.is_equivalence() {
        report.quasi_inverse = build_quasi_inverse(src, dst, f, &section);
    }
    Ok(report)
}

/// Standard construction: `g(d)` is the chosen preimage, `g` on morphisms is
/// the unique (full + faithful) preimage of the iso-conjugated morphism.
fn build_quasi_inverse(
    src: &FinCat,
    dst: &FinCat,
    f: &FunctorData,
    section: &[Option<(usize, usize)>],
) -> Option<QuasiInverse> {
    let on_obj: Vec<usize> = section.iter().map(|s| s.unwrap().0).collect();
    // counit components: the chosen isos eps_d : F(g(d)) → d.
    let eps: Vec<usize> = section.iter().map(|s| s.unwrap().1).collect();
    let mut on_mor = Vec::with_capacity(dst.morphism_count());
    for m in dst.morphisms() {
        let (d0, d1) = (dst.src(m), dst.dst(m));
        // Conjugate: F(g d0) → d0 → d1 → F(g d1).
        let conj = dst.then_chain(&[eps[d0], m, dst.inverse(eps[d1])?])?;
        let pre = src
            .hom(on_obj[d0], on_obj[d1])
            .into_iter()
            .find(|&p| f.on_mor[p] == conj)?;
        on_mor.push(pre);
    }
    let g = FunctorData { on_obj, on_mor };
    if !validate_functor(dst, src, &g).is_empty() {
        return None;
    }
    // Unit at c: unique preimage of eps_{F(c)}⁻¹ : F(c) → F(g(F(c))).
    let mut unit = Vec::with_capacity(src.object_count());
    for c in src.objects() {
        let target = dst.inverse(eps[f.on_obj[c]])?;
        let pre = src
            .hom(c, g.on_obj[f.on_obj[c]])
            .into_iter()
            .find(|&p| f.on_mor[p] == target)?;
        unit.push(pre);
    }
    Some(QuasiInverse {
        functor: g,
        unit: NatTransData { components: unit },
        counit: NatTransData { components: eps },
    })
}

/// Searches all functors `src → dst` in canonical order for the first
/// equivalence; `Ok(None)` after exhausting the space.
pub fn find_equivalence(src: &FinCat, dst: &FinCat, caps: &Caps) -> Result<Option<FunctorData>> {
    for f in enumerate_functors(src, dst, caps)? {
        if is_equivalence(src, dst, &f, caps, false)?.is_equivalence() {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Finds the canonically-first natural isomorphism `f ⇒ g`, if any.
///
/// Backtracking over invertible components in canonical order, pruning with
/// the naturality squares that are already determined.
pub fn find_nat_iso(
    src: &FinCat,
    dst: &FinCat,
    f: &FunctorData,
    g: &FunctorData,
) -> Option<NatTransData> {
    let n = src.object_count();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);

    fn consistent(
        src: &FinCat,
        dst: &FinCat,
        f: &FunctorData,
        g: &FunctorData,
        chosen: &[usize],
    ) -> bool {
        let placed = chosen.len();
        for m in src.morphisms() {
            let (a, b) = (src.src(m), src.dst(m));
            if a < placed && b < placed {
                let left = dst.then(f.on_mor[m], chosen[b]);
                let right = dst.then(chosen[a], g.on_mor[m]);
                if left.is_none() || left != right {
                    return false;
                }
            }
        }
        true
    }

    fn search(
        src: &FinCat,
        dst: &FinCat,
        f: &FunctorData,
        g: &FunctorData,
        chosen: &mut Vec<usize>,
    ) -> bool {
        let o = chosen.len();
        if o == src.object_count() {
            return true;
        }
        for iso in dst.isos(f.on_obj[o], g.on_obj[o]) {
            chosen.push(iso);
            if consistent(src, dst, f, g, chosen) && search(src, dst, f, g, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    if search(src, dst, f, g, &mut chosen) {
        Some(NatTransData { components: chosen })
    } else {
        None
    }
}

/// True when `f` is naturally isomorphic to the identity functor.
pub fn isomorphic_to_identity(c: &FinCat, f: &FunctorData) -> bool {
    find_nat_iso(c, c, f, &identity_functor(c)).is_some()
}

/// Certifies `fwd` and `bwd` as mutually quasi-inverse (both round trips
/// naturally isomorphic to identities).
pub fn certify_inverse_pair(
    a: &FinCat,
    b: &FinCat,
    fwd: &FunctorData,
    bwd: &FunctorData,
) -> bool {
    isomorphic_to_identity(a, &then_functor(fwd, bwd))
        && isomorphic_to_identity(b, &then_functor(bwd, fwd))
}
