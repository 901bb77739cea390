//! Spans over a fixed finite vertex set, tensored by pullback.
//!
//! An object is a set of edges, each with a source and target vertex and a
//! word of atom labels. The tensor of two spans is the set of composable
//! pairs, so flat powers of a graph are its paths of a fixed length. Edges
//! are kept stably sorted by source, which makes the tensor lexicographic
//! within each source block.

use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::engine::{run_chain, ChainOptions, MonoidObject, MonoidTruncation};
use crate::error::{Error, Result};
use crate::finset::{word_label, Atom};
use crate::kernel::{union_find_quotient, ArrowPair, Backend, Capabilities, Coproduct, Morphism, PointedObject};

#[derive(Debug, PartialEq, Eq)]
pub struct Workspace {
    vertices: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: usize,
    pub tgt: usize,
    pub word: Vec<Atom>,
}

#[derive(Clone)]
pub struct Span(Arc<SpanData>);

struct SpanData {
    ws: Arc<Workspace>,
    edges: Vec<Edge>,
    /// `block[v]..block[v + 1]` are the edges with source `v`.
    block: Vec<usize>,
}

impl PartialEq for Span {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (Arc::ptr_eq(&self.0.ws, &other.0.ws) && self.0.edges == other.0.edges)
    }
}

impl fmt::Debug for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Span[{} edges over {} vertices]", self.len(), self.0.ws.vertices.len())
    }
}

impl Span {
    fn from_sorted(ws: Arc<Workspace>, edges: Vec<Edge>) -> Self {
        let nv = ws.vertices.len();
        let mut block = vec![0; nv + 1];
        for e in &edges {
            block[e.src + 1] += 1;
        }
        for v in 0..nv {
            block[v + 1] += block[v];
        }
        Span(Arc::new(SpanData { ws, edges, block }))
    }

    pub fn len(&self) -> usize {
        self.0.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.0.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.0.edges[i]
    }

    pub fn vertex_count(&self) -> usize {
        self.0.ws.vertices.len()
    }

    fn out_block(&self, v: usize) -> std::ops::Range<usize> {
        self.0.block[v]..self.0.block[v + 1]
    }
}

/// The category of spans over one vertex set.
#[derive(Clone, Debug)]
pub struct SpanBackend {
    ws: Arc<Workspace>,
}

impl SpanBackend {
    pub fn new<I, S>(vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::InvalidObject(format!("vertex #{i} has an empty label")));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidObject(format!("vertex #{i}: duplicate label {v:?}")));
            }
        }
        Ok(SpanBackend {
            ws: Arc::new(Workspace { vertices }),
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.ws.vertices
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.ws.vertices.iter().position(|v| v == label)
    }

    /// A graph from `(label, source, target)` triples.
    pub fn graph<S: AsRef<str>>(&self, edges: &[(S, S, S)]) -> Result<Span> {
        let mut out = Vec::with_capacity(edges.len());
        for (i, (label, src, tgt)) in edges.iter().enumerate() {
            let label = label.as_ref();
            if label.is_empty() || label.contains(',') {
                return Err(Error::InvalidObject(format!(
                    "edge #{i}: label {label:?} must be non-empty and free of commas"
                )));
            }
            let lookup = |v: &str| {
                self.vertex_index(v)
                    .ok_or_else(|| Error::InvalidObject(format!("edge #{i}: unknown vertex {v:?}")))
            };
            out.push(Edge {
                src: lookup(src.as_ref())?,
                tgt: lookup(tgt.as_ref())?,
                word: vec![Atom::from(label)],
            });
        }
        self.span(out)
    }

    /// A span from explicit edges, stably sorted by source.
    pub fn span(&self, edges: Vec<Edge>) -> Result<Span> {
        self.span_with_positions(edges).map(|(s, _)| s)
    }

    /// As [`SpanBackend::span`], also returning where each input edge landed.
    pub fn span_with_positions(&self, edges: Vec<Edge>) -> Result<(Span, Vec<usize>)> {
        let nv = self.ws.vertices.len();
        let arity = edges.first().map_or(1, |e| e.word.len());
        let mut seen = HashSet::new();
        for (i, e) in edges.iter().enumerate() {
            if e.src >= nv || e.tgt >= nv {
                return Err(Error::InvalidObject(format!("edge #{i} has an unknown endpoint")));
            }
            if e.word.len() != arity {
                return Err(Error::InvalidObject(format!(
                    "edge #{i} has {} components, expected {arity}",
                    e.word.len()
                )));
            }
            if !seen.insert(e) {
                return Err(Error::InvalidObject(format!(
                    "edge #{i} repeats label {:?} between the same vertices",
                    word_label(&e.word)
                )));
            }
        }
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&i| edges[i].src);
        let mut position = vec![0; edges.len()];
        for (k, &i) in order.iter().enumerate() {
            position[i] = k;
        }
        let sorted = order.iter().map(|&i| edges[i].clone()).collect();
        Ok((Span::from_sorted(self.ws.clone(), sorted), position))
    }

    fn same_workspace(&self, x: &Span) -> Result<()> {
        if Arc::ptr_eq(&self.ws, &x.0.ws) {
            Ok(())
        } else {
            Err(Error::BackendMismatch("span belongs to a different vertex set".into()))
        }
    }

    /// Edge word with unit atoms removed.
    pub fn stripped_word(&self, x: &Span, i: usize, unit_atom: &str) -> Vec<String> {
        x.edge(i)
            .word
            .iter()
            .filter(|a| &***a != unit_atom)
            .map(|a| a.to_string())
            .collect()
    }

    /// The category with object set `A` whose every hom-set is `Z/m`,
    /// composing by addition. `m = 1` gives the codiscrete category.
    pub fn cyclic_hom_category(&self, m: usize) -> Result<MonoidObject<Span>> {
        if m == 0 {
            return Err(Error::InvalidObject("hom-sets need at least one element".into()));
        }
        let nv = self.ws.vertices.len();
        let mut edges = Vec::new();
        for a in 0..nv {
            for b in 0..nv {
                for k in 0..m {
                    edges.push(Edge {
                        src: a,
                        tgt: b,
                        word: vec![Atom::from(k.to_string())],
                    });
                }
            }
        }
        let carrier = self.span(edges)?;
        let index = |a: usize, b: usize, k: usize| (a * nv + b) * m + k;
        let square = self.tensor_obj(&carrier, &carrier)?;
        let mut mult = Vec::with_capacity(square.len());
        for e in square.edges() {
            let k: usize = e.word[0].parse().expect("numeric label");
            let l: usize = e.word[1].parse().expect("numeric label");
            mult.push(index(e.src, e.tgt, (k + l) % m));
        }
        let mult = self.arrow(&square, &carrier, mult)?;
        let unit = self.arrow(&self.unit(), &carrier, (0..nv).map(|v| index(v, v, 0)).collect())?;
        MonoidObject::new(self, carrier, mult, unit)
    }
}

impl Backend for SpanBackend {
    type Object = Span;

    fn name(&self) -> &'static str {
        "span"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_coproducts: true,
            can_enumerate_homs: true,
            cocontinuous_tensor: true,
        }
    }

    fn size(&self, x: &Span) -> usize {
        x.len()
    }

    fn label(&self, x: &Span, i: usize) -> String {
        let e = x.edge(i);
        let vs = &x.0.ws.vertices;
        format!("{}-[{}]->{}", vs[e.src], word_label(&e.word), vs[e.tgt])
    }

    fn owns(&self, x: &Span) -> bool {
        Arc::ptr_eq(&self.ws, &x.0.ws)
    }

    fn unit(&self) -> Span {
        let edges = (0..self.ws.vertices.len())
            .map(|v| Edge {
                src: v,
                tgt: v,
                word: Vec::new(),
            })
            .collect();
        Span::from_sorted(self.ws.clone(), edges)
    }

    fn tensor_obj(&self, x: &Span, y: &Span) -> Result<Span> {
        self.same_workspace(x)?;
        self.same_workspace(y)?;
        let mut edges = Vec::new();
        for a in x.edges() {
            for b in &y.edges()[y.out_block(a.tgt)] {
                let mut word = Vec::with_capacity(a.word.len() + b.word.len());
                word.extend(a.word.iter().cloned());
                word.extend(b.word.iter().cloned());
                edges.push(Edge {
                    src: a.src,
                    tgt: b.tgt,
                    word,
                });
            }
        }
        Ok(Span::from_sorted(self.ws.clone(), edges))
    }

    fn tensor_table(&self, f: &Morphism<Span>, g: &Morphism<Span>, _dom: &Span, cod: &Span) -> Vec<usize> {
        let (x, y) = (f.dom(), g.dom());
        let (x2, y2) = (f.cod(), g.cod());
        // offset[x'] = position of the first pair starting with edge x' in cod
        let mut offset = Vec::with_capacity(x2.len());
        let mut acc = 0;
        for e in x2.edges() {
            offset.push(acc);
            acc += y2.out_block(e.tgt).len();
        }
        debug_assert_eq!(acc, cod.len());
        let mut out = Vec::new();
        for (i, a) in x.edges().iter().enumerate() {
            let fa = f.map()[i];
            for j in y.out_block(a.tgt) {
                let gb = g.map()[j];
                out.push(offset[fa] + gb - y2.0.block[y2.edge(gb).src]);
            }
        }
        out
    }

    fn check_arrow(&self, dom: &Span, cod: &Span, map: &[usize]) -> Result<()> {
        for (i, &j) in map.iter().enumerate() {
            let (a, b) = (dom.edge(i), cod.edge(j));
            if a.src != b.src || a.tgt != b.tgt {
                return Err(Error::InvalidArrow(format!(
                    "edge {} is sent to {}, changing its endpoints",
                    self.label(dom, i),
                    self.label(cod, j)
                )));
            }
        }
        Ok(())
    }

    fn coequalize(&self, target: &Span, pairs: &[ArrowPair<Span>]) -> Result<(Span, Vec<usize>)> {
        let (class_of, reps) = union_find_quotient(target.len(), pairs);
        if reps.len() == target.len() {
            return Ok((target.clone(), class_of));
        }
        let edges = reps.iter().map(|&r| target.edge(r).clone()).collect();
        Ok((Span::from_sorted(self.ws.clone(), edges), class_of))
    }

    fn coproduct(&self, x: &Span, y: &Span) -> Result<Coproduct<Span>> {
        self.same_workspace(x)?;
        self.same_workspace(y)?;
        if x.is_empty() || y.is_empty() {
            let (obj, nonempty_left) = if x.is_empty() { (y, false) } else { (x, true) };
            let empty = if x.is_empty() { x } else { y };
            let inj = Morphism::new_unchecked(empty.clone(), obj.clone(), Vec::new());
            let id = self.identity(obj);
            let (left, right) = if nonempty_left { (id, inj) } else { (inj, id) };
            return Ok(Coproduct {
                object: obj.clone(),
                left,
                right,
            });
        }
        let side_labels = |s: &Span| -> Vec<String> {
            let flat: Vec<String> = s.edges().iter().map(|e| word_label(&e.word)).collect();
            let keys: HashSet<(usize, &String, usize)> =
                s.edges().iter().zip(&flat).map(|(e, l)| (e.src, l, e.tgt)).collect();
            if keys.len() == flat.len() {
                flat
            } else {
                (0..flat.len()).map(|i| format!("#{i}")).collect()
            }
        };
        let (l, r) = tag_sides(side_labels(x), side_labels(y));
        let tagged: Vec<(usize, Edge)> = x
            .edges()
            .iter()
            .zip(l)
            .chain(y.edges().iter().zip(r))
            .enumerate()
            .map(|(i, (e, label))| {
                (
                    i,
                    Edge {
                        src: e.src,
                        tgt: e.tgt,
                        word: vec![Atom::from(label)],
                    },
                )
            })
            .collect();
        let mut sorted = tagged;
        sorted.sort_by_key(|(_, e)| e.src);
        let mut position = vec![0; sorted.len()];
        for (pos, (orig, _)) in sorted.iter().enumerate() {
            position[*orig] = pos;
        }
        let object = Span::from_sorted(self.ws.clone(), sorted.into_iter().map(|(_, e)| e).collect());
        let left = Morphism::new_unchecked(x.clone(), object.clone(), position[..x.len()].to_vec());
        let right = Morphism::new_unchecked(y.clone(), object.clone(), position[x.len()..].to_vec());
        Ok(Coproduct { object, left, right })
    }

    fn hom_candidates(&self, dom: &Span, cod: &Span, i: usize) -> Vec<usize> {
        let e = dom.edge(i);
        cod.out_block(e.src).filter(|&j| cod.edge(j).tgt == e.tgt).collect()
    }
}

/// Side-tags the two label lists when they share a label. Repeated labels
/// inside one side are fine here when the endpoints tell them apart.
fn tag_sides(left: Vec<String>, right: Vec<String>) -> (Vec<String>, Vec<String>) {
    let left_set: HashSet<&String> = left.iter().collect();
    if right.iter().any(|r| left_set.contains(r)) {
        (
            left.into_iter().map(|l| format!("inl.{l}")).collect(),
            right.into_iter().map(|r| format!("inr.{r}")).collect(),
        )
    } else {
        (left, right)
    }
}

/// The free category on a graph, as a stage-indexed truncation.
#[derive(Clone, Debug)]
pub struct FreeCategory {
    pub graph: Span,
    pub pointed_coproduct: Coproduct<Span>,
    pub truncation: MonoidTruncation<Span>,
    unit_atom: String,
}

impl FreeCategory {
    /// `(source, edge labels, target)` of element `i` of a stage object,
    /// with identity padding removed.
    pub fn path_of(&self, backend: &SpanBackend, object: &Span, i: usize) -> (usize, Vec<String>, usize) {
        let e = object.edge(i);
        (e.src, backend.stripped_word(object, i, &self.unit_atom), e.tgt)
    }

    /// Atom used for identity edges inside `Y = I + G`.
    pub fn unit_atom(&self) -> &str {
        &self.unit_atom
    }
}

/// `Y = I + G` pointed by the first injection.
pub fn pointed_on(backend: &SpanBackend, graph: &Span) -> Result<(PointedObject<Span>, Coproduct<Span>)> {
    let cop = backend.coproduct(&backend.unit(), graph)?;
    let pointed = PointedObject::new(backend, cop.left.clone())?;
    Ok((pointed, cop))
}

pub fn free_category(backend: &SpanBackend, graph: &Span, options: &ChainOptions) -> Result<FreeCategory> {
    let (pointed, cop) = pointed_on(backend, graph)?;
    let unit_atom = cop
        .left
        .map()
        .first()
        .map(|&i| word_label(&cop.object.edge(i).word))
        .unwrap_or_else(|| "()".to_string());
    let chain = run_chain(backend, &pointed, options)?;
    let truncation = MonoidTruncation::build(backend, chain, options.parallel)?;
    Ok(FreeCategory {
        graph: graph.clone(),
        pointed_coproduct: cop,
        truncation,
        unit_atom,
    })
}

/// Graphviz rendering of a stage of a free category: one node per vertex and
/// one arrow per non-identity path.
pub fn to_dot(backend: &SpanBackend, free: &FreeCategory, object: &Span) -> String {
    let mut out = String::from("digraph category {\n");
    for v in backend.vertices() {
        let _ = writeln!(out, "  \"{}\";", escape(v));
    }
    for i in 0..object.len() {
        let (s, word, t) = free.path_of(backend, object, i);
        if word.is_empty() {
            continue;
        }
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            escape(&backend.vertices()[s]),
            escape(&backend.vertices()[t]),
            escape(&word.join("."))
        );
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::gen;
    use crate::oracles::{enumerate_paths, longest_path};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn stages_count_paths(seed in any::<u64>(), acyclic in any::<bool>()) {
            let g = gen::random_graph(&mut gen::rng(seed), 4, 5, acyclic);
            let n_max = 3;
            let options = ChainOptions::new(n_max).with_stop_at_stabilization(false);
            let free = free_category(&g.backend, &g.graph, &options).unwrap();
            let paths = enumerate_paths(g.backend.vertices().len(), &g.edges, n_max);
            let chain = free.truncation.chain();
            for n in 0..=n_max {
                prop_assert_eq!(g.backend.size(&chain.stages[n].object), paths.count_up_to(n));
            }
            if let Some(l) = longest_path(g.backend.vertices().len(), &g.edges) {
                if l < n_max {
                    prop_assert_eq!(chain.stabilized_at, Some(l));
                }
            } else {
                prop_assert_eq!(chain.stabilized_at, None);
            }
        }
    }
}
