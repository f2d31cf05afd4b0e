//! Differential test: `FinCat::validate` against an independent
//! re-implementation of the same checks, iterated in reverse order.
//!
//! The two implementations share only the public accessor API. Agreement on
//! seeded pseudo-random tables (sorted witness lists compared as multisets)
//! guards against indexing and iteration-order mistakes in either.

use strata_core::fincat::{CategoryViolation, FinCat};
use strata_core::fixtures;

/// Re-derives every violation from the public API, walking all loops in
/// reverse. Deliberately structured differently from the library version:
/// one pass collects per-kind vectors which are concatenated at the end.
fn validate_reversed(c: &FinCat) -> Vec<CategoryViolation> {
    let mid = |m: usize| c.morphism_id(m).to_string();
    let mors: Vec<usize> = c.morphisms().collect();
    let objs: Vec<usize> = c.objects().collect();

    let mut assoc = Vec::new();
    for &f in mors.iter().rev() {
        for &g in mors.iter().rev() {
            for &h in mors.iter().rev() {
                if c.dst(f) != c.src(g) || c.dst(g) != c.src(h) {
                    continue;
                }
                let left = c.then(f, g).and_then(|fg| c.then(fg, h));
                let right = c.then(g, h).and_then(|gh| c.then(f, gh));
                if let (Some(l), Some(r)) = (left, right) {
                    if l != r {
                        assoc.push(CategoryViolation::Associativity {
                            f: mid(f),
                            g: mid(g),
                            h: mid(h),
                            left: mid(l),
                            right: mid(r),
                        });
                    }
                }
            }
        }
    }

    let mut units = Vec::new();
    for &f in mors.iter().rev() {
        match c.then(f, c.identity(c.dst(f))) {
            Some(got) if got != f => {
                units.push(CategoryViolation::RightUnit { mor: mid(f), got: mid(got) })
            }
            _ => {}
        }
        match c.then(c.identity(c.src(f)), f) {
            Some(got) if got != f => {
                units.push(CategoryViolation::LeftUnit { mor: mid(f), got: mid(got) })
            }
            _ => {}
        }
    }

    let mut table = Vec::new();
    for &f in mors.iter().rev() {
        for &g in mors.iter().rev() {
            let composable = c.dst(f) == c.src(g);
            match (c.then(f, g), composable) {
                (None, true) => {
                    table.push(CategoryViolation::MissingComposite { first: mid(f), then: mid(g) })
                }
                (Some(_), false) => table
                    .push(CategoryViolation::NonComposableEntry { first: mid(f), then: mid(g) }),
                (Some(h), true) if c.src(h) != c.src(f) || c.dst(h) != c.dst(g) => {
                    table.push(CategoryViolation::CompositeEndpoints {
                        first: mid(f),
                        then: mid(g),
                        got: mid(h),
                    })
                }
                _ => {}
            }
        }
    }

    let mut idents = Vec::new();
    for &o in objs.iter().rev() {
        let e = c.identity(o);
        if c.src(e) != o || c.dst(e) != o {
            idents.push(CategoryViolation::IdentityEndpoints {
                object: c.object_id(o).to_string(),
                id_mor: mid(e),
            });
        }
    }

    let mut all = assoc;
    all.extend(units);
    all.extend(table);
    all.extend(idents);
    all
}

fn sorted(mut v: Vec<CategoryViolation>) -> Vec<CategoryViolation> {
    v.sort();
    v
}

#[test]
fn thirty_seeded_tables_agree_with_reversed_reimplementation() {
    let mut broken = 0;
    let mut clean = 0;
    for seed in 0..30u64 {
        let c = fixtures::random_table(seed);
        let forward = sorted(c.validate());
        let reverse = sorted(validate_reversed(&c));
        assert_eq!(forward, reverse, "disagreement on seed {seed}");
        if forward.is_empty() {
            clean += 1;
        } else {
            broken += 1;
        }
    }
    // The generator must exercise both outcomes to be worth anything.
    assert!(broken >= 5, "generator produced too few broken tables: {broken}");
    let _ = clean;
}

#[test]
fn known_categories_agree_with_reversed_reimplementation() {
    for c in [
        fixtures::terminal(),
        fixtures::walking_arrow(),
        fixtures::discrete(&["x", "y", "z"]),
        fixtures::indiscrete(3),
        fixtures::iso_pair(),
        fixtures::cyclic2(),
    ] {
        assert!(c.validate().is_empty());
        assert!(validate_reversed(&c).is_empty());
    }
}
