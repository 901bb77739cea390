//! Criterion checks shared by the acceptance harness and the integration
//! tests. Each check returns a short summary, or the first discrepancy.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use freemon::engine::{
    alg_free_condition, compare_chains, compatible_families, dubuc_chain, monoid_laws, run_chain,
    universal_map, ActionObject, ChainOptions, MonoidObject, MonoidTruncation,
};
use freemon::finset::{free_monoid_on_set, pointed_on as set_pointed, FinSet, FinSetBackend};
use freemon::fingrp::{abelianize, alternating4, dihedral, groups_up_to_order_8, named, stable_group, CayleyGroup, FinGrpBackend};
use freemon::gen;
use freemon::oracles::{
    alg_free_by_elements, brute_abelianization, enumerate_paths, enumerate_words, longest_path, ActionTable,
};
use freemon::span::{free_category, pointed_on as span_pointed};
use freemon::{Backend, Morphism, PointedObject};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Check = Result<String, String>;

pub const WORD_STAGES: usize = 5;
pub const GRAPH_STAGES: usize = 5;
pub const GRAPH_COUNT: u64 = 25;
pub const GRAPH_SEED: u64 = 0x6772_6170;
pub const GRAPH_MAX_VERTICES: usize = 6;
pub const GRAPH_MAX_EDGES: usize = 8;
pub const UNIVERSAL_SEED: u64 = 0x756e_6976;
pub const UNIVERSAL_STAGES: usize = 3;
pub const MAX_MONOID: usize = 12;
pub const ACTION_SEED: u64 = 0x6163_7473;
pub const LEMMA_SEED: u64 = 0x6c65_6d6d;
pub const GROUP_STAGES: usize = 4;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn letters(k: usize) -> FinSet {
    FinSet::new((0..k).map(|i| format!("x{i}"))).expect("distinct letters")
}

pub fn seeded_graph(i: u64) -> gen::RandomGraph {
    gen::random_graph(
        &mut gen::rng(GRAPH_SEED + i),
        GRAPH_MAX_VERTICES,
        GRAPH_MAX_EDGES,
        i.is_multiple_of(2),
    )
}

/// Every stage of the free monoid on `k` letters against the word oracle:
/// sizes, the bijection with short words, connecting maps and products.
pub fn words_match(k: usize, n_max: usize) -> Check {
    let b = FinSetBackend;
    let x = letters(k);
    let options = ChainOptions::new(n_max).with_stop_at_stabilization(false);
    let free = free_monoid_on_set(&b, &x, &options).map_err(e2s)?;
    let alphabet: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
    let oracle = enumerate_words(&alphabet, n_max);
    let chain = free.truncation.chain();
    let mut index: Vec<Vec<usize>> = Vec::new();
    for n in 0..=n_max {
        let z = &chain.stages[n].object;
        let expected: usize = (0..=n).map(|m| k.pow(m as u32)).sum();
        ensure!(z.len() == expected, "|X| = {k}: stage {n} has {} elements, expected {expected}", z.len());
        let mut seen = HashSet::new();
        let mut idx = Vec::with_capacity(z.len());
        for i in 0..z.len() {
            let w = free.word_of(z, i);
            ensure!(w.len() <= n, "|X| = {k}: stage {n} holds a word of length {}", w.len());
            let o = oracle.index_of(&w).ok_or_else(|| format!("word {w:?} unknown to the oracle"))?;
            ensure!(seen.insert(o), "|X| = {k}: stage {n} repeats the word {w:?}");
            idx.push(o);
        }
        ensure!(seen.len() == oracle.count_up_to(n), "|X| = {k}: stage {n} misses words");
        if n >= 1 {
            let j = chain.j(n).expect("connecting map");
            for (i, &t) in j.map().iter().enumerate() {
                ensure!(index[n - 1][i] == idx[t], "|X| = {k}: j_{n} moves a word");
            }
        }
        index.push(idx);
    }
    for m in 0..=n_max {
        for n in 0..=n_max - m {
            let mu = free.truncation.mult(m, n).ok_or("missing multiplication")?;
            let (zm, zn) = (&chain.stages[m].object, &chain.stages[n].object);
            ensure!(mu.dom().len() == zm.len() * zn.len(), "domain of μ_{m},{n} has the wrong size");
            for a in 0..zm.len() {
                for c in 0..zn.len() {
                    let product = mu.apply(a * zn.len() + c);
                    let expected = oracle.concat(index[m][a], index[n][c]);
                    ensure!(
                        expected == Some(index[m + n][product]),
                        "|X| = {k}: μ_{m},{n} is not concatenation"
                    );
                }
            }
        }
    }
    Ok(format!("|X| = {k}: sizes {:?}", chain.sizes(&b)))
}

/// A seeded graph against the path oracle; acyclic graphs whose longest
/// path does not fit under the look-ahead are rerun with more stages.
pub fn paths_match(i: u64, n_max: usize) -> Check {
    let g = seeded_graph(i);
    let b = &g.backend;
    let nv = b.vertices().len();
    let longest = longest_path(nv, &g.edges);
    let mut stages = n_max;
    if let Some(l) = longest {
        if l + 1 > n_max {
            stages = l + 1;
        }
    }
    let free = free_category(b, &g.graph, &ChainOptions::new(stages)).map_err(e2s)?;
    let chain = free.truncation.chain();
    let oracle = enumerate_paths(nv, &g.edges, chain.depth());
    let mut keys: Vec<Vec<(usize, Vec<String>, usize)>> = Vec::new();
    for n in 0..=chain.depth() {
        let z = &chain.stages[n].object;
        let mut seen = HashSet::new();
        let mut row = Vec::with_capacity(z.len());
        for e in 0..z.len() {
            let key = free.path_of(b, z, e);
            ensure!(key.1.len() <= n, "graph {i}: stage {n} holds a path of length {}", key.1.len());
            let p = freemon::oracles::Path {
                src: key.0,
                labels: key.1.clone(),
                tgt: key.2,
            };
            ensure!(oracle.contains(&p), "graph {i}: {p:?} is not a path");
            ensure!(seen.insert(key.clone()), "graph {i}: stage {n} repeats {p:?}");
            row.push(key);
        }
        ensure!(
            seen.len() == oracle.count_up_to(n),
            "graph {i}: stage {n} has {} paths, expected {}",
            seen.len(),
            oracle.count_up_to(n)
        );
        if n >= 1 {
            let j = chain.j(n).expect("connecting map");
            for (e, &t) in j.map().iter().enumerate() {
                ensure!(keys[n - 1][e] == row[t], "graph {i}: j_{n} moves a path");
            }
        }
        keys.push(row);
    }
    match longest {
        Some(l) => ensure!(
            chain.stabilized_at == Some(l),
            "graph {i}: longest path {l} but stabilized at {:?}",
            chain.stabilized_at
        ),
        None => ensure!(chain.is_certified_truncation(), "graph {i} has a cycle but stabilized"),
    }
    let depth = chain.depth();
    for m in 0..=depth {
        for n in 0..=depth - m {
            let mu = free.truncation.mult(m, n).ok_or("missing multiplication")?;
            let composable = keys[m]
                .iter()
                .map(|p| keys[n].iter().filter(|q| q.0 == p.2).count())
                .sum::<usize>();
            ensure!(mu.dom().len() == composable, "graph {i}: Z_{m} ⊗ Z_{n} is not the composable pairs");
            for e in 0..mu.dom().len() {
                let pair = free.path_of(b, mu.dom(), e);
                ensure!(
                    pair == keys[m + n][mu.apply(e)],
                    "graph {i}: μ_{m},{n} is not concatenation"
                );
            }
        }
    }
    let note = if stages > n_max { format!(", rerun with {stages} stages") } else { String::new() };
    Ok(format!(
        "graph {i}: {nv} vertices, {} edges, longest path {longest:?}, stabilized at {:?}{note}",
        g.edges.len(),
        chain.stabilized_at
    ))
}

pub fn abelianization_cases() -> Vec<(&'static str, CayleyGroup)> {
    let mut cases = groups_up_to_order_8();
    cases.push(("A4", alternating4()));
    cases.push(("D6", dihedral(6).expect("D6")));
    cases
}

pub fn abelianization_matches(name: &str, g: &CayleyGroup) -> Check {
    let b = FinGrpBackend::default();
    let (order, orders) = brute_abelianization(&g.rows());
    let t = abelianize(&b, g, &ChainOptions::new(GROUP_STAGES)).map_err(e2s)?;
    let s = t
        .chain()
        .stabilized_at
        .ok_or_else(|| format!("{name}: no stabilization within {GROUP_STAGES} stages"))?;
    ensure!(s <= GROUP_STAGES, "{name}: stabilized at {s}");
    let m = stable_group(&b, &t).map_err(e2s)?;
    ensure!(m.carrier().order() == order, "{name}: stable order {} vs {order}", m.carrier().order());
    ensure!(m.carrier().element_orders() == orders, "{name}: element orders differ");
    Ok(format!("{name}: stable at {s}, order {order}"))
}

pub fn laws_hold<B: Backend + ?Sized>(label: &str, b: &B, trunc: &MonoidTruncation<B::Object>) -> Check {
    let report = monoid_laws(b, trunc);
    ensure!(
        report.passed(),
        "{label}: {} of {} squares fail, first {:?}",
        report.failures.len(),
        report.checked,
        report.failures.first()
    );
    Ok(format!("{label}: {} squares at depth {}", report.checked, trunc.depth()))
}

pub fn set_laws(k: usize) -> Check {
    let b = FinSetBackend;
    let options = ChainOptions::new(WORD_STAGES).with_stop_at_stabilization(false);
    let free = free_monoid_on_set(&b, &letters(k), &options).map_err(e2s)?;
    laws_hold(&format!("set |X| = {k}"), &b, &free.truncation)
}

pub fn span_laws(i: u64) -> Check {
    let g = seeded_graph(i);
    let options = ChainOptions::new(GRAPH_STAGES).with_stop_at_stabilization(false);
    let free = free_category(&g.backend, &g.graph, &options).map_err(e2s)?;
    laws_hold(&format!("graph {i}"), &g.backend, &free.truncation)
}

/// Groups whose fifth tensor power fits the default element bound run to
/// depth 5; larger ones to the depth of the abelianization run.
pub fn group_laws(name: &str, g: &CayleyGroup) -> Check {
    let b = FinGrpBackend::default();
    let fits = g.order().checked_pow(5).is_some_and(|n| n <= b.max_elements);
    let options = if fits {
        ChainOptions::new(5).with_stop_at_stabilization(false)
    } else {
        ChainOptions::new(GROUP_STAGES)
    };
    let t = abelianize(&b, g, &options).map_err(e2s)?;
    laws_hold(name, &b, &t)
}

fn unique_extension<B: Backend + ?Sized>(
    label: &str,
    b: &B,
    trunc: &MonoidTruncation<B::Object>,
    target: &MonoidObject<B::Object>,
    f: &Morphism<B::Object>,
) -> Result<Vec<Morphism<B::Object>>, String> {
    let report = universal_map(b, trunc, target, f).map_err(e2s)?;
    ensure!(report.passed(), "{label}: {:?}", report.failures);
    let families = compatible_families(b, trunc, target, f, 2, 1 << 20).map_err(e2s)?;
    ensure!(families.len() == 1, "{label}: {} compatible families", families.len());
    for (n, (h, g)) in families[0].iter().zip(&report.maps).enumerate() {
        ensure!(b.equal_mor(h, g).map_err(e2s)?, "{label}: the enumerated family differs at stage {n}");
    }
    Ok(report.maps)
}

/// Extension of a pointed map from `I + X` into a table monoid, checked
/// against evaluation of words in the table.
pub fn universal_set(i: u64) -> Check {
    let b = FinSetBackend;
    let mut rng = gen::rng(UNIVERSAL_SEED + i);
    let x = gen::random_set(&mut rng, 1, 3, "x");
    let (labels, table, unit) = gen::random_table_monoid(&mut rng, MAX_MONOID);
    let target = b.table_monoid(&labels, &table, unit).map_err(e2s)?;
    let options = ChainOptions::new(UNIVERSAL_STAGES).with_stop_at_stabilization(false);
    let free = free_monoid_on_set(&b, &x, &options).map_err(e2s)?;
    let pointed = &free.truncation.chain().pointed;
    let f = gen::random_pointed_map(&mut rng, &b, pointed, &target).map_err(e2s)?;
    let label = format!("set instance {i}");
    let maps = unique_extension(&label, &b, &free.truncation, &target, &f)?;
    let cop = &free.pointed_coproduct;
    let letter_value: HashMap<String, usize> = (0..x.len())
        .map(|l| (x.words()[l][0].to_string(), f.apply(cop.right.apply(l))))
        .collect();
    for (n, g) in maps.iter().enumerate() {
        let z = &free.truncation.chain().stages[n].object;
        for e in 0..z.len() {
            let value = free.word_of(z, e).iter().fold(unit, |acc, a| table[acc][letter_value[a]]);
            ensure!(g.apply(e) == value, "{label}: g_{n} disagrees with word evaluation");
        }
    }
    Ok(format!("{label}: {} letters into a monoid of order {}", x.len(), labels.len()))
}

pub fn universal_span(i: u64) -> Check {
    let mut rng = gen::rng(UNIVERSAL_SEED + i);
    let g = gen::random_graph(&mut rng, 2, 4, false);
    let b = &g.backend;
    let target = b.cyclic_hom_category(rng.gen_range(1..=3)).map_err(e2s)?;
    ensure!(b.size(target.carrier()) <= MAX_MONOID, "target too large");
    let options = ChainOptions::new(UNIVERSAL_STAGES).with_stop_at_stabilization(false);
    let free = free_category(b, &g.graph, &options).map_err(e2s)?;
    let pointed = &free.truncation.chain().pointed;
    let f = gen::random_pointed_map(&mut rng, b, pointed, &target).map_err(e2s)?;
    let label = format!("span instance {i}");
    unique_extension(&label, b, &free.truncation, &target, &f)?;
    Ok(format!("{label}: {} edges into {} arrows", g.edges.len(), b.size(target.carrier())))
}

const ABELIAN_TARGETS: [&str; 12] =
    ["Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "Z7", "Z8", "Z4xZ2", "Z2xZ2xZ2", "Z12"];

pub fn universal_group(i: u64) -> Check {
    let b = FinGrpBackend::default();
    let mut rng = gen::rng(UNIVERSAL_SEED + i);
    let (name, g) = groups_up_to_order_8().swap_remove(rng.gen_range(0..14));
    let a_name = ABELIAN_TARGETS.choose(&mut rng).expect("non-empty");
    let a = b.object(named(a_name).map_err(e2s)?).map_err(e2s)?;
    let target = b.abelian_monoid(&a).map_err(e2s)?;
    let t = abelianize(&b, &g, &ChainOptions::new(UNIVERSAL_STAGES)).map_err(e2s)?;
    let homs = b.enumerate_homs(t.chain().pointed.carrier(), &a, 1 << 20).map_err(e2s)?;
    let f = homs.choose(&mut rng).expect("trivial homomorphism");
    let label = format!("group instance {i} ({name} -> {a_name})");
    unique_extension(&label, &b, &t, &target, f)?;
    Ok(label)
}

pub fn dubuc_agrees_on_words(k: usize) -> Check {
    let b = FinSetBackend;
    let p = set_pointed(&b, &letters(k)).map_err(e2s)?.0;
    let r = run_chain(&b, &p, &ChainOptions::new(WORD_STAGES).with_stop_at_stabilization(false)).map_err(e2s)?;
    let d = dubuc_chain(&b, &p, WORD_STAGES).map_err(e2s)?;
    compare_chains(&b, &r, &d).map_err(|e| format!("|X| = {k}: {e}"))?;
    Ok(format!("|X| = {k}"))
}

pub fn dubuc_agrees_on_graph(i: u64) -> Check {
    let g = seeded_graph(i);
    let b = &g.backend;
    let p = span_pointed(b, &g.graph).map_err(e2s)?.0;
    let r = run_chain(b, &p, &ChainOptions::new(GRAPH_STAGES).with_stop_at_stabilization(false)).map_err(e2s)?;
    let d = dubuc_chain(b, &p, GRAPH_STAGES).map_err(e2s)?;
    compare_chains(b, &r, &d).map_err(|e| format!("graph {i}: {e}"))?;
    Ok(format!("graph {i}"))
}

/// Raw element tables of an action on a one-object backend, read off the
/// lexicographic layout of `Y ⊗ A`.
fn single_vertex_table(point: usize, y: usize, a: usize, act: &[usize]) -> ActionTable {
    let mut table = HashMap::new();
    for yi in 0..y {
        for ai in 0..a {
            table.insert((yi, ai), act[yi * a + ai]);
        }
    }
    ActionTable {
        y_src: vec![0; y],
        y_tgt: vec![0; y],
        a_src: vec![0; a],
        unit_at: vec![point],
        act: table,
    }
}

fn verdicts_agree<B: Backend + ?Sized>(
    label: &str,
    b: &B,
    pointed: PointedObject<B::Object>,
    alpha: Morphism<B::Object>,
    table: &ActionTable,
) -> Check {
    let act = ActionObject::new(b, pointed, alpha).map_err(e2s)?;
    let verdict = alg_free_condition(b, &act).map_err(e2s)?;
    let direct = alg_free_by_elements(table);
    ensure!(verdict == direct, "{label}: evaluator says {verdict}, elements say {direct}");
    Ok(format!("{label}: {verdict}"))
}

pub fn action_set(i: u64) -> Check {
    let b = FinSetBackend;
    let mut rng = gen::rng(ACTION_SEED + i);
    let x = gen::random_set(&mut rng, 0, 3, "x");
    let a = gen::random_set(&mut rng, 1, 5, "a");
    let p = set_pointed(&b, &x).map_err(e2s)?.0;
    let alpha = gen::random_unital_action(&mut rng, &b, &p, &a).map_err(e2s)?;
    let table = single_vertex_table(p.point().apply(0), x.len() + 1, a.len(), alpha.map());
    verdicts_agree(&format!("set action {i}"), &b, p, alpha, &table)
}

pub fn action_span(i: u64) -> Check {
    let mut rng = gen::rng(ACTION_SEED + i);
    let g = gen::random_graph(&mut rng, 3, 4, false);
    let b = &g.backend;
    let a = gen::random_complete_span(&mut rng, b, 2);
    let p = span_pointed(b, &g.graph).map_err(e2s)?.0;
    let alpha = gen::random_unital_action(&mut rng, b, &p, &a).map_err(e2s)?;
    let y = p.carrier();
    // composable pairs (y, a) in order of y, then a
    let mut act = HashMap::new();
    let mut k = 0;
    for yi in 0..y.len() {
        for ai in 0..a.len() {
            if y.edge(yi).tgt == a.edge(ai).src {
                act.insert((yi, ai), alpha.apply(k));
                k += 1;
            }
        }
    }
    ensure!(k == alpha.map().len(), "span action {i}: composable pairs miscounted");
    let table = ActionTable {
        y_src: y.edges().iter().map(|e| e.src).collect(),
        y_tgt: y.edges().iter().map(|e| e.tgt).collect(),
        a_src: a.edges().iter().map(|e| e.src).collect(),
        unit_at: p.point().map().to_vec(),
        act,
    };
    verdicts_agree(&format!("span action {i}"), b, p, alpha, &table)
}

pub fn action_group(i: u64) -> Check {
    let b = FinGrpBackend::default();
    let mut rng = gen::rng(ACTION_SEED + i);
    let (name, g) = groups_up_to_order_8().swap_remove(rng.gen_range(0..14));
    let a_name = ABELIAN_TARGETS.choose(&mut rng).expect("non-empty");
    let g = b.object(g).map_err(e2s)?;
    let a = b.object(named(a_name).map_err(e2s)?).map_err(e2s)?;
    let p = b.pointed(&g).map_err(e2s)?;
    let alpha = gen::random_group_action(&mut rng, &b, &p, &a).map_err(e2s)?;
    let table = single_vertex_table(0, g.order(), a.order(), alpha.map());
    verdicts_agree(&format!("group action {i} ({name} on {a_name})"), &b, p, alpha, &table)
}
