//! Seeded random instances for property runs and the acceptance suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{MonoidObject, ReflexivePair};
use crate::error::{Error, Result};
use crate::finset::{Atom, FinSet, FinSetBackend};
use crate::fingrp::{FinGrpBackend, GroupObject};
use crate::kernel::{Backend, Morphism, PointedObject};
use crate::span::{Edge, Span, SpanBackend};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A set of `min..=max` elements labelled `prefix0`, `prefix1`, ...
pub fn random_set<R: Rng>(rng: &mut R, min: usize, max: usize, prefix: &str) -> FinSet {
    let n = rng.gen_range(min..=max);
    FinSet::new((0..n).map(|i| format!("{prefix}{i}"))).expect("generated labels are distinct")
}

#[derive(Clone, Debug)]
pub struct RandomGraph {
    pub backend: SpanBackend,
    pub graph: Span,
    /// `(label, source, target)` as generated.
    pub edges: Vec<(String, usize, usize)>,
}

/// A graph on `1..=max_vertices` vertices with at most `max_edges` edges;
/// with `acyclic` every edge goes from a lower to a higher vertex.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize, acyclic: bool) -> RandomGraph {
    let nv = rng.gen_range(1..=max_vertices);
    let backend = SpanBackend::new((0..nv).map(|i| format!("v{i}"))).expect("distinct vertices");
    let ne = rng.gen_range(0..=max_edges);
    let mut edges = Vec::with_capacity(ne);
    for i in 0..ne {
        let (s, t) = if acyclic {
            if nv < 2 {
                break;
            }
            let s = rng.gen_range(0..nv - 1);
            (s, rng.gen_range(s + 1..nv))
        } else {
            (rng.gen_range(0..nv), rng.gen_range(0..nv))
        };
        edges.push((format!("e{i}"), s, t));
    }
    let triples: Vec<(String, String, String)> = edges
        .iter()
        .map(|(l, s, t)| (l.clone(), format!("v{s}"), format!("v{t}")))
        .collect();
    let graph = backend.graph(&triples).expect("generated graph is valid");
    RandomGraph {
        backend,
        graph,
        edges,
    }
}

/// The reflexive pair `target + R => target` of a relation `R`, with the
/// first injection as common section.
pub fn reflexive_pair_on_set(
    b: &FinSetBackend,
    target: &FinSet,
    relations: &[(usize, usize)],
) -> Result<ReflexivePair<FinSet>> {
    let n = target.len();
    let dom = FinSet::new((0..n).map(|i| format!("d{i}")).chain((0..relations.len()).map(|j| format!("r{j}"))))?;
    let f = (0..n).chain(relations.iter().map(|&(a, _)| a)).collect();
    let g = (0..n).chain(relations.iter().map(|&(_, c)| c)).collect();
    Ok(ReflexivePair {
        f: b.arrow(&dom, target, f)?,
        g: b.arrow(&dom, target, g)?,
        section: b.arrow(target, &dom, (0..n).collect())?,
    })
}

pub fn random_reflexive_pair_set<R: Rng>(
    rng: &mut R,
    b: &FinSetBackend,
    target: &FinSet,
    max_relations: usize,
) -> ReflexivePair<FinSet> {
    let n = target.len();
    let k = if n == 0 { 0 } else { rng.gen_range(0..=max_relations) };
    let rel: Vec<(usize, usize)> = (0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    reflexive_pair_on_set(b, target, &rel).expect("generated pair is valid")
}

/// As [`reflexive_pair_on_set`] for spans; related edges must be parallel.
pub fn reflexive_pair_on_span(
    b: &SpanBackend,
    target: &Span,
    relations: &[(usize, usize)],
) -> Result<ReflexivePair<Span>> {
    let mut edges = Vec::with_capacity(target.len() + relations.len());
    for (i, e) in target.edges().iter().enumerate() {
        edges.push(Edge {
            src: e.src,
            tgt: e.tgt,
            word: vec![Atom::from(format!("d{i}"))],
        });
    }
    for (j, &(a, c)) in relations.iter().enumerate() {
        let (ea, ec) = (target.edge(a), target.edge(c));
        if ea.src != ec.src || ea.tgt != ec.tgt {
            return Err(Error::InvalidArrow(format!("related edges #{a} and #{c} are not parallel")));
        }
        edges.push(Edge {
            src: ea.src,
            tgt: ea.tgt,
            word: vec![Atom::from(format!("r{j}"))],
        });
    }
    let (dom, pos) = b.span_with_positions(edges)?;
    let n = target.len();
    let mut f = vec![0; dom.len()];
    let mut g = vec![0; dom.len()];
    for i in 0..n {
        f[pos[i]] = i;
        g[pos[i]] = i;
    }
    for (j, &(a, c)) in relations.iter().enumerate() {
        f[pos[n + j]] = a;
        g[pos[n + j]] = c;
    }
    Ok(ReflexivePair {
        f: b.arrow(&dom, target, f)?,
        g: b.arrow(&dom, target, g)?,
        section: b.arrow(target, &dom, pos[..n].to_vec())?,
    })
}

pub fn random_reflexive_pair_span<R: Rng>(
    rng: &mut R,
    b: &SpanBackend,
    target: &Span,
    max_relations: usize,
) -> ReflexivePair<Span> {
    let n = target.len();
    let k = if n == 0 { 0 } else { rng.gen_range(0..=max_relations) };
    let mut rel = Vec::with_capacity(k);
    for _ in 0..k {
        let a = rng.gen_range(0..n);
        let parallel = b.hom_candidates(target, target, a);
        rel.push((a, *parallel.choose(rng).expect("an edge is parallel to itself")));
    }
    reflexive_pair_on_span(b, target, &rel).expect("generated pair is valid")
}

/// A span with `1..=max_per_pair` edges between every ordered pair of vertices.
pub fn random_complete_span<R: Rng>(rng: &mut R, b: &SpanBackend, max_per_pair: usize) -> Span {
    let nv = b.vertices().len();
    let mut edges = Vec::new();
    for s in 0..nv {
        for t in 0..nv {
            for k in 0..rng.gen_range(1..=max_per_pair) {
                edges.push(Edge {
                    src: s,
                    tgt: t,
                    word: vec![Atom::from(format!("a{s}{t}{k}"))],
                });
            }
        }
    }
    b.span(edges).expect("generated span is valid")
}

/// A span over the given backend with up to `max_edges` random edges.
pub fn random_span<R: Rng>(rng: &mut R, b: &SpanBackend, max_edges: usize, prefix: &str) -> Span {
    let nv = b.vertices().len();
    let ne = rng.gen_range(0..=max_edges);
    let edges = (0..ne)
        .map(|i| Edge {
            src: rng.gen_range(0..nv),
            tgt: rng.gen_range(0..nv),
            word: vec![Atom::from(format!("{prefix}{i}"))],
        })
        .collect();
    b.span(edges).expect("generated span is valid")
}

/// A small monoid as a table: cyclic under addition, capped addition, or
/// multiplication modulo `n`. Returns labels, table and unit.
pub fn random_table_monoid<R: Rng>(rng: &mut R, max_size: usize) -> (Vec<String>, Vec<Vec<usize>>, usize) {
    let n = rng.gen_range(1..=max_size);
    let labels = (0..n).map(|i| i.to_string()).collect();
    match rng.gen_range(0..3) {
        0 => (labels, (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(), 0),
        1 => (labels, (0..n).map(|a| (0..n).map(|b| (a + b).min(n - 1)).collect()).collect(), 0),
        _ => {
            let unit = 1 % n;
            (labels, (0..n).map(|a| (0..n).map(|b| (a * b) % n).collect()).collect(), unit)
        }
    }
}

/// A random arrow `Y -> M` sending the point to the unit.
pub fn random_pointed_map<B: Backend + ?Sized, R: Rng>(
    rng: &mut R,
    b: &B,
    pointed: &PointedObject<B::Object>,
    target: &MonoidObject<B::Object>,
) -> Result<Morphism<B::Object>> {
    let y = pointed.carrier();
    let n = b.size(y);
    let mut table = vec![usize::MAX; n];
    for (i, &p) in pointed.point().map().iter().enumerate() {
        table[p] = target.unit().map()[i];
    }
    for (i, slot) in table.iter_mut().enumerate() {
        if *slot == usize::MAX {
            let choices = b.hom_candidates(y, target.carrier(), i);
            *slot = *choices
                .choose(rng)
                .ok_or_else(|| Error::InvalidArrow(format!("element {i} has no possible image")))?;
        }
    }
    b.arrow(y, target.carrier(), table)
}

/// A random action `Y ⊗ A -> A` with the point acting trivially; for
/// backends whose arrows are arbitrary structure-preserving functions.
pub fn random_unital_action<B: Backend + ?Sized, R: Rng>(
    rng: &mut R,
    b: &B,
    pointed: &PointedObject<B::Object>,
    a: &B::Object,
) -> Result<Morphism<B::Object>> {
    let ya = b.tensor_obj(pointed.carrier(), a)?;
    let at_point = b.tensor_mor(pointed.point(), &b.identity(a))?;
    let mut table = vec![usize::MAX; b.size(&ya)];
    for (x, &i) in at_point.map().iter().enumerate() {
        table[i] = x;
    }
    for (i, slot) in table.iter_mut().enumerate() {
        if *slot == usize::MAX {
            let choices = b.hom_candidates(&ya, a, i);
            *slot = *choices
                .choose(rng)
                .ok_or_else(|| Error::InvalidAction(format!("pair {i} has no possible image")))?;
        }
    }
    b.arrow(&ya, a, table)
}

/// `α(g, a) = φ(g) a` for a random homomorphism `φ: G -> A`, `A` abelian.
pub fn random_group_action<R: Rng>(
    rng: &mut R,
    b: &FinGrpBackend,
    pointed: &PointedObject<GroupObject>,
    a: &GroupObject,
) -> Result<Morphism<GroupObject>> {
    if !a.is_abelian() {
        return Err(Error::InvalidAction("acted-on group must be abelian".into()));
    }
    let g = pointed.carrier();
    let homs = b.enumerate_homs(g, a, 1 << 16)?;
    let phi = homs.choose(rng).expect("the trivial homomorphism exists");
    let na = a.order();
    let ya = b.tensor_obj(g, a)?;
    let table = (0..g.order() * na).map(|k| a.mul(phi.apply(k / na), k % na)).collect();
    b.arrow(&ya, a, table)
}
