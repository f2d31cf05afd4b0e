//! Exhaustive enumeration of the functor category `[src, dst]`.

use super::functor::{vcompose, FunctorData, NatTransData};
use super::{indexed_id, FinCat, MorData};
use crate::error::{Caps, Result};

/// The category `[src, dst]` with provenance for its generated identifiers.
///
/// `cat` object/morphism order matches `functors`/`transformations`;
/// `transformation_endpoints[i]` gives the (source functor, target functor)
/// indices of transformation `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorCategory {
    pub cat: FinCat,
    pub functors: Vec<FunctorData>,
    pub transformations: Vec<NatTransData>,
    pub transformation_endpoints: Vec<(usize, usize)>,
}

/// Enumerates all functors `src → dst` in lexicographic order over
/// (object table, morphism table), pruning by functoriality.
pub fn enumerate_functors(src: &FinCat, dst: &FinCat, caps: &Caps) -> Result<Vec<FunctorData>> {
    let mut budget = caps.budget();
    let mut out = Vec::new();
    let mut on_obj = vec![0usize; src.object_count()];

    // Depth-first over object assignments; for each complete object table,
    // depth-first over morphism assignments with endpoint/identity/composition
    // pruning. Identity morphisms are forced, and composition entries whose
    // factors are already assigned are checked eagerly.
    fn assign_objects(
        src: &FinCat,
        dst: &FinCat,
        on_obj: &mut Vec<usize>,
        depth: usize,
        budget: &mut crate::error::Budget,
        out: &mut Vec<FunctorData>,
    ) -> Result<()> {
        if depth == on_obj.len() {
            let mut on_mor = Vec::with_capacity(src.morphism_count());
            return assign_morphisms(src, dst, on_obj, &mut on_mor, budget, out);
        }
        for d in dst.objects() {
            on_obj[depth] = d;
            assign_objects(src, dst, on_obj, depth + 1, budget, out)?;
        }
        Ok(())
    }

    fn assign_morphisms(
        src: &FinCat,
        dst: &FinCat,
        on_obj: &[usize],
        on_mor: &mut Vec<usize>,
        budget: &mut crate::error::Budget,
        out: &mut Vec<FunctorData>,
    ) -> Result<()> {
        let m = on_mor.len();
        if m == src.morphism_count() {
            budget.tick()?;
            out.push(FunctorData { on_obj: on_obj.to_vec(), on_mor: on_mor.clone() });
            return Ok(());
        }
        let targets: Vec<usize> = if src.is_identity(m) {
            vec![dst.identity(on_obj[src.src(m)])]
        } else {
            dst.hom(on_obj[src.src(m)], on_obj[src.dst(m)])
        };
        'candidates: for t in targets {
            budget.tick()?;
            on_mor.push(t);
            // Check all composition entries lying entirely below the frontier.
            for f in 0..on_mor.len() {
                for g in 0..on_mor.len() {
                    if let Some(c) = src.then(f, g) {
                        if c < on_mor.len()
                            && dst.then(on_mor[f], on_mor[g]) != Some(on_mor[c])
                        {
                            on_mor.pop();
                            continue 'candidates;
                        }
                    }
                }
            }
            assign_morphisms(src, dst, on_obj, on_mor, budget, out)?;
            on_mor.pop();
        }
        Ok(())
    }

    if src.object_count() == 0 {
        out.push(FunctorData { on_obj: vec![], on_mor: vec![] });
        return Ok(out);
    }
    assign_objects(src, dst, &mut on_obj, 0, &mut budget, &mut out)?;
    Ok(out)
}

/// Enumerates all natural transformations `f ⇒ g` in lexicographic order
/// over component tables, pruning with determined naturality squares.
pub fn enumerate_nats(
    src: &FinCat,
    dst: &FinCat,
    f: &FunctorData,
    g: &FunctorData,
    budget: &mut crate::error::Budget,
) -> Result<Vec<NatTransData>> {
    fn consistent(
        src: &FinCat,
        dst: &FinCat,
        f: &FunctorData,
        g: &FunctorData,
        chosen: &[usize],
    ) -> bool {
        for m in src.morphisms() {
            let (a, b) = (src.src(m), src.dst(m));
            if a < chosen.len() && b < chosen.len() {
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
        budget: &mut crate::error::Budget,
        out: &mut Vec<NatTransData>,
    ) -> Result<()> {
        let o = chosen.len();
        if o == src.object_count() {
            budget.tick()?;
            out.push(NatTransData { components: chosen.clone() });
            return Ok(());
        }
        for c in dst.hom(f.on_obj[o], g.on_obj[o]) {
            budget.tick()?;
            chosen.push(c);
            if consistent(src, dst, f, g, chosen) {
                search(src, dst, f, g, chosen, budget, out)?;
            }
            chosen.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    search(src, dst, f, g, &mut Vec::new(), budget, &mut out)?;
    Ok(out)
}

/// Builds the functor category `[src, dst]` as a [`FinCat`] with provenance.
///
/// Objects are named `F0, F1, …` and morphisms `n0, n1, …` (zero-padded) in
/// enumeration order; composition is vertical composition.
pub fn functor_category(src: &FinCat, dst: &FinCat, caps: &Caps) -> Result<FunctorCategory> {
    let functors = enumerate_functors(src, dst, caps)?;
    caps.admit_category(functors.len(), 0)?;

    let mut budget = caps.budget();
    let mut transformations = Vec::new();
    let mut endpoints = Vec::new();
    for (fi, f) in functors.iter().enumerate() {
        for (gi, g) in functors.iter().enumerate() {
            for t in enumerate_nats(src, dst, f, g, &mut budget)? {
                transformations.push(t);
                endpoints.push((fi, gi));
            }
        }
    }
    caps.admit_category(functors.len(), transformations.len())?;

    let objects: Vec<String> =
        (0..functors.len()).map(|i| indexed_id("F", i, functors.len())).collect();
    let morphisms: Vec<MorData> = transformations
        .iter()
        .enumerate()
        .map(|(i, _)| MorData {
            id: indexed_id("n", i, transformations.len()),
            src: endpoints[i].0,
            dst: endpoints[i].1,
        })
        .collect();
    let identity: Vec<usize> = functors
        .iter()
        .enumerate()
        .map(|(fi, f)| {
            let idn = super::functor::identity_nat(dst, f);
            transformations
                .iter()
                .zip(&endpoints)
                .position(|(t, &(s, d))| s == fi && d == fi && *t == idn)
                .expect("identity transformation is enumerated")
        })
        .collect();

    let lookup = |s: usize, d: usize, t: &NatTransData| -> Option<usize> {
        transformations
            .iter()
            .zip(&endpoints)
            .position(|(u, &(us, ud))| us == s && ud == d && u == t)
    };
    let cat = FinCat::from_parts(objects, morphisms, identity, |i, j| {
        let (si, di) = endpoints[i];
        let (sj, dj) = endpoints[j];
        if di != sj {
            return None;
        }
        let comp = vcompose(dst, &transformations[i], &transformations[j])?;
        lookup(si, dj, &comp)
    });

    Ok(FunctorCategory { cat, functors, transformations, transformation_endpoints: endpoints })
}
