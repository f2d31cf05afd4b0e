/*! Small example categories and seeded generators.

These are the standard inhabitants of the test suite and the demo fixtures:
the terminal category, the walking arrow, discrete and indiscrete categories,
a free-standing isomorphism, and ℤ/2 as a one-object category. The seeded
generators produce deterministic pseudo-random composition tables (valid or
deliberately broken) for differential testing of the validators.
*/

use crate::error::{Caps, Result};
use crate::fincat::{enumerate_functors, indexed_id, then_functor, FinCat, FunctorData, MorData};
use crate::monodromy::Presentation2;
use crate::posetstack::{pullback_stack, PosetMap, PosetStack, StratPoset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG for seeded fixtures.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The terminal category `𝟙`: one object, one identity.
pub fn terminal() -> FinCat {
    FinCat::from_tables(&["*"], &[("id", "*", "*")], &[("*", "id")], &[("id", "id", "id")])
        .expect("terminal category tables are well-formed")
}

/// The walking arrow `𝟚`: objects `a`, `b` and one non-identity `f: a → b`.
pub fn walking_arrow() -> FinCat {
    FinCat::from_tables(
        &["a", "b"],
        &[("id_a", "a", "a"), ("id_b", "b", "b"), ("f", "a", "b")],
        &[("a", "id_a"), ("b", "id_b")],
        &[
            ("id_a", "id_a", "id_a"),
            ("id_b", "id_b", "id_b"),
            ("id_a", "f", "f"),
            ("f", "id_b", "f"),
        ],
    )
    .expect("walking arrow tables are well-formed")
}

/// The discrete category on the given object names.
pub fn discrete(names: &[&str]) -> FinCat {
    let morphisms: Vec<(String, &str, &str)> =
        names.iter().map(|&n| (format!("id_{n}"), n, n)).collect();
    let mor_refs: Vec<(&str, &str, &str)> =
        morphisms.iter().map(|(i, s, d)| (i.as_str(), *s, *d)).collect();
    let idents: Vec<(&str, &str)> =
        names.iter().zip(&morphisms).map(|(&n, (i, _, _))| (n, i.as_str())).collect();
    let comp: Vec<(&str, &str, &str)> =
        morphisms.iter().map(|(i, _, _)| (i.as_str(), i.as_str(), i.as_str())).collect();
    FinCat::from_tables(names, &mor_refs, &idents, &comp)
        .expect("discrete category tables are well-formed")
}

/// The indiscrete (chaotic) category on `n` objects: exactly one morphism
/// between every ordered pair, so every morphism is invertible.
pub fn indiscrete(n: usize) -> FinCat {
    let objects: Vec<String> = (0..n).map(|i| indexed_id("x", i, n)).collect();
    let morphisms: Vec<MorData> = (0..n * n)
        .map(|k| MorData { id: indexed_id("m", k, n * n), src: k / n, dst: k % n })
        .collect();
    let identity: Vec<usize> = (0..n).map(|i| i * n + i).collect();
    FinCat::from_parts(objects, morphisms, identity, |f, g| {
        let (a, b) = (f / n, f % n);
        let (c, d) = (g / n, g % n);
        (b == c).then_some(a * n + d)
    })
}

/// The object-reversing endofunctor of an indiscrete category.
pub fn indiscrete_swap(c: &FinCat) -> FunctorData {
    let n = c.object_count();
    let flip = |o: usize| n - 1 - o;
    let on_obj: Vec<usize> = (0..n).map(flip).collect();
    let on_mor: Vec<usize> =
        c.morphisms().map(|m| c.hom(flip(c.src(m)), flip(c.dst(m)))[0]).collect();
    FunctorData { on_obj, on_mor }
}

/// Two objects joined by a single isomorphism pair `u: p → q`, `v: q → p`.
pub fn iso_pair() -> FinCat {
    FinCat::from_tables(
        &["p", "q"],
        &[("id_p", "p", "p"), ("id_q", "q", "q"), ("u", "p", "q"), ("v", "q", "p")],
        &[("p", "id_p"), ("q", "id_q")],
        &[
            ("id_p", "id_p", "id_p"),
            ("id_q", "id_q", "id_q"),
            ("id_p", "u", "u"),
            ("u", "id_q", "u"),
            ("id_q", "v", "v"),
            ("v", "id_p", "v"),
            ("u", "v", "id_p"),
            ("v", "u", "id_q"),
        ],
    )
    .expect("isomorphism pair tables are well-formed")
}

/// The linear order `0 ≤ 1 ≤ … ≤ n-1` as a category: one morphism per
/// comparable pair.
pub fn chain_category(n: usize) -> FinCat {
    let objects: Vec<String> = (0..n).map(|i| indexed_id("o", i, n)).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i..n {
            pairs.push((i, j));
        }
    }
    let index: std::collections::BTreeMap<(usize, usize), usize> =
        pairs.iter().copied().zip(0..).collect();
    let morphisms: Vec<MorData> = pairs
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| MorData { id: indexed_id("m", k, pairs.len()), src: i, dst: j })
        .collect();
    let identity: Vec<usize> = (0..n).map(|i| index[&(i, i)]).collect();
    FinCat::from_parts(objects, morphisms, identity, |f, g| {
        let (a, b) = pairs[f];
        let (c, d) = pairs[g];
        (b == c).then(|| index[&(a, d)])
    })
}

/// ℤ/2 as a one-object category: morphisms `e` (identity) and `t` with
/// `t;t = e`. The smallest category with a non-identity automorphism.
pub fn cyclic2() -> FinCat {
    FinCat::from_tables(
        &["*"],
        &[("e", "*", "*"), ("t", "*", "*")],
        &[("*", "e")],
        &[("e", "e", "e"), ("e", "t", "t"), ("t", "e", "t"), ("t", "t", "e")],
    )
    .expect("cyclic group tables are well-formed")
}

/// A pseudo-random composition-table candidate. Identities and endpoints are
/// plausible but laws are not enforced, so the result may violate any of the
/// category axioms — by design, for differential testing of `validate`.
pub fn random_table(seed: u64) -> FinCat {
    let mut r = rng(seed);
    let n_obj: usize = r.gen_range(1..=3);
    let objects: Vec<String> = (0..n_obj).map(|i| indexed_id("x", i, n_obj)).collect();
    let mut morphisms: Vec<MorData> =
        (0..n_obj).map(|i| MorData { id: format!("e{i}"), src: i, dst: i }).collect();
    let extra: usize = r.gen_range(0..=4);
    for k in 0..extra {
        morphisms.push(MorData {
            id: format!("m{k}"),
            src: r.gen_range(0..n_obj),
            dst: r.gen_range(0..n_obj),
        });
    }
    let n = morphisms.len();
    let mut identity: Vec<usize> = (0..n_obj).collect();
    if r.gen_bool(0.2) {
        // Point one identity somewhere arbitrary.
        let o = r.gen_range(0..n_obj);
        identity[o] = r.gen_range(0..n);
    }
    let mut table: Vec<Option<usize>> = vec![None; n * n];
    for f in 0..n {
        for g in 0..n {
            let composable = morphisms[f].dst == morphisms[g].src;
            if composable && r.gen_bool(0.85) {
                let endpoint_ok: Vec<usize> = (0..n)
                    .filter(|&h| {
                        morphisms[h].src == morphisms[f].src
                            && morphisms[h].dst == morphisms[g].dst
                    })
                    .collect();
                table[f * n + g] = Some(if !endpoint_ok.is_empty() && r.gen_bool(0.8) {
                    endpoint_ok[r.gen_range(0..endpoint_ok.len())]
                } else {
                    r.gen_range(0..n)
                });
            } else if !composable && r.gen_bool(0.05) {
                table[f * n + g] = Some(r.gen_range(0..n));
            }
        }
    }
    FinCat::from_parts(objects, morphisms, identity, move |f, g| table[f * n + g])
}

/// The 2-chain poset `c < o` with levels 0 and 1.
pub fn two_chain() -> StratPoset {
    StratPoset::new(&["c", "o"], &[("c", "o")], &[0, 1]).unwrap()
}

/// The chain poset `o0 < o1 < … < o(n-1)` with level `i` at `oi`.
pub fn chain_poset(n: usize) -> StratPoset {
    let names: Vec<String> = (0..n).map(|i| indexed_id("o", i, n)).collect();
    let below: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    StratPoset::from_parts(names, below, (0..n).collect()).unwrap()
}

/// A closed point under two incomparable open points: `c < p`, `c < q`.
pub fn vee_poset() -> StratPoset {
    StratPoset::new(&["c", "p", "q"], &[("c", "p"), ("c", "q")], &[0, 1, 1]).unwrap()
}

/// Seeded poset on up to four elements; relations are acyclic by index and
/// levels are longest-chain ranks, so every invariant holds by construction.
pub fn seeded_poset(seed: u64) -> StratPoset {
    let mut r = rng(seed);
    let n = r.gen_range(1..=4usize);
    let names: Vec<String> = (0..n).map(|i| indexed_id("e", i, n)).collect();
    let mut below = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if r.gen_bool(0.5) {
                below.push((i, j));
            }
        }
    }
    // Longest-chain rank over the closed relation: monotone and gap-free.
    let p = StratPoset::from_parts(names.clone(), below.clone(), vec![0; n]).unwrap();
    let mut level = vec![0usize; n];
    for j in 0..n {
        for i in 0..n {
            if i != j && p.leq(i, j) {
                level[j] = level[j].max(level[i] + 1);
            }
        }
    }
    StratPoset::from_parts(names, below, level).unwrap()
}

/// Seeded sub-poset member list (possibly empty), sorted.
pub fn seeded_subset(p: &StratPoset, seed: u64) -> Vec<usize> {
    let mut r = rng(seed);
    p.elements().filter(|_| r.gen_bool(0.5)).collect()
}

/// Seeded up-closed subset: a random subset, closed upward.
pub fn seeded_up_set(p: &StratPoset, seed: u64) -> Vec<usize> {
    let mut r = rng(seed);
    let picked: Vec<usize> = p.elements().filter(|_| r.gen_bool(0.4)).collect();
    p.elements().filter(|&x| picked.iter().any(|&b| p.leq(b, x))).collect()
}

/// Palette of small valid categories used as stack values.
pub fn palette(index: usize) -> FinCat {
    match index % 5 {
        0 => terminal(),
        1 => discrete(&["u", "v"]),
        2 => walking_arrow(),
        3 => indiscrete(2),
        _ => cyclic2(),
    }
}

/// Seeded strict stack on a chain: palette values joined by seeded
/// transition functors; composites are forced, so strictness is automatic.
pub fn seeded_chain_stack(levels: usize, seed: u64) -> Result<PosetStack> {
    let mut r = rng(seed);
    let base = chain_poset(levels);
    let at: Vec<FinCat> = (0..levels).map(|_| palette(r.gen_range(0..5))).collect();
    let mut step = Vec::new();
    for k in 1..levels {
        let options = enumerate_functors(&at[k - 1], &at[k], &Caps::default())?;
        step.push(options[r.gen_range(0..options.len())].clone());
    }
    PosetStack::strict(base, at.clone(), |a, b| {
        let mut f = step[a].clone();
        for s in &step[(a + 1)..b] {
            f = then_functor(&f, s);
        }
        f
    })
}

/// Seeded strict stack on an arbitrary poset: a seeded chain stack pulled
/// back along the level map, which is always monotone.
pub fn seeded_stack_on(p: &StratPoset, seed: u64) -> Result<PosetStack> {
    let levels = p.level_count();
    let chain = chain_poset(levels);
    let st = seeded_chain_stack(levels, seed)?;
    let map = PosetMap::new(p, &chain, p.elements().map(|x| p.level_of(x)).collect())?;
    pullback_stack(p, &map, &st)
}

/// Seeded monotone map: clamp the level map onto a random maximal chain of
/// the target. `None` when the target is empty but the source is not.
pub fn seeded_map(src: &StratPoset, dst: &StratPoset, seed: u64) -> Option<PosetMap> {
    if dst.element_count() == 0 {
        return src.element_count().eq(&0).then(|| PosetMap { on: vec![] });
    }
    let mut r = rng(seed);
    // Random maximal chain: start at a random minimal element, walk upward.
    let minimal: Vec<usize> = dst
        .elements()
        .filter(|&x| dst.elements().all(|y| y == x || !dst.leq(y, x)))
        .collect();
    let mut chain = vec![minimal[r.gen_range(0..minimal.len())]];
    loop {
        let top = *chain.last().unwrap();
        let nexts: Vec<usize> =
            dst.elements().filter(|&y| y != top && dst.leq(top, y)).collect();
        if nexts.is_empty() {
            break;
        }
        chain.push(nexts[r.gen_range(0..nexts.len())]);
    }
    let on = src
        .elements()
        .map(|x| chain[src.level_of(x).min(chain.len() - 1)])
        .collect();
    PosetMap::new(src, dst, on).ok()
}

/// The one-point presentation with no generators.
pub fn point_presentation() -> Presentation2 {
    Presentation2::from_parts(&["pt"], &[], vec![], vec![])
        .expect("point presentation parts are well-formed")
}

/// The circle: one basepoint `b` and one loop `s`.
pub fn circle_presentation() -> Presentation2 {
    Presentation2::from_parts(&["b"], &[("s", "b", "b")], vec![], vec![])
        .expect("circle presentation parts are well-formed")
}

/// The interval: basepoints `b0`, `b1` and one crossing `g`.
pub fn interval_presentation() -> Presentation2 {
    Presentation2::from_parts(&["b0", "b1"], &[("g", "b0", "b1")], vec![], vec![])
        .expect("interval presentation parts are well-formed")
}

/// Two bare basepoints `x0`, `x1` with no generators.
pub fn two_point_presentation() -> Presentation2 {
    Presentation2::from_parts(&["x0", "x1"], &[], vec![], vec![])
        .expect("two-point presentation parts are well-formed")
}
