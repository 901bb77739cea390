//! Brute-force reference computations used to cross-check the engine.
//!
//! Nothing here touches the kernel or the backends: inputs and outputs are
//! plain tables, and the algorithms are the naive ones (transitive closure,
//! exhaustive search, direct enumeration).

use std::collections::{BTreeSet, HashMap};

/// All words of length at most `max_len` over an alphabet, shortest first
/// and lexicographic (by alphabet position) within a length.
#[derive(Clone, Debug)]
pub struct WordTruncation {
    pub alphabet: Vec<String>,
    pub max_len: usize,
    pub words: Vec<Vec<String>>,
    index: HashMap<Vec<String>, usize>,
}

impl WordTruncation {
    pub fn index_of(&self, word: &[String]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Index of the concatenation, when it is short enough.
    pub fn concat(&self, a: usize, b: usize) -> Option<usize> {
        let mut w = self.words[a].clone();
        w.extend(self.words[b].iter().cloned());
        self.index_of(&w)
    }

    /// Number of words of length at most `n`.
    pub fn count_up_to(&self, n: usize) -> usize {
        self.words.iter().filter(|w| w.len() <= n).count()
    }
}

pub fn enumerate_words(alphabet: &[String], max_len: usize) -> WordTruncation {
    let mut words: Vec<Vec<String>> = vec![Vec::new()];
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in alphabet {
                let mut v = w.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    WordTruncation {
        alphabet: alphabet.to_vec(),
        max_len,
        words,
        index,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub src: usize,
    pub labels: Vec<String>,
    pub tgt: usize,
}

/// Paths of length at most `max_len` in a graph, identity paths included.
#[derive(Clone, Debug)]
pub struct PathTruncation {
    pub max_len: usize,
    pub paths: Vec<Path>,
}

impl PathTruncation {
    pub fn count_up_to(&self, n: usize) -> usize {
        self.paths.iter().filter(|p| p.labels.len() <= n).count()
    }

    pub fn contains(&self, p: &Path) -> bool {
        self.paths.contains(p)
    }
}

/// `edges` are `(label, source, target)` with vertices numbered `0..vertices`.
pub fn enumerate_paths(vertices: usize, edges: &[(String, usize, usize)], max_len: usize) -> PathTruncation {
    fn dfs(
        edges: &[(String, usize, usize)],
        start: usize,
        at: usize,
        labels: &mut Vec<String>,
        left: usize,
        out: &mut Vec<Path>,
    ) {
        out.push(Path {
            src: start,
            labels: labels.clone(),
            tgt: at,
        });
        if left == 0 {
            return;
        }
        for (l, s, t) in edges {
            if *s == at {
                labels.push(l.clone());
                dfs(edges, start, *t, labels, left - 1, out);
                labels.pop();
            }
        }
    }
    let mut paths = Vec::new();
    for v in 0..vertices {
        dfs(edges, v, v, &mut Vec::new(), max_len, &mut paths);
    }
    PathTruncation { max_len, paths }
}

/// Length of the longest path, or `None` if the graph has a cycle.
pub fn longest_path(vertices: usize, edges: &[(String, usize, usize)]) -> Option<usize> {
    // a path with `vertices` edges repeats a vertex
    let paths = enumerate_paths(vertices, edges, vertices);
    let longest = paths.paths.iter().map(|p| p.labels.len()).max().unwrap_or(0);
    (longest < vertices).then_some(longest)
}

/// Order and sorted element-order multiset of `G / [G, G]`, from a raw
/// multiplication table.
pub fn brute_abelianization(rows: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let n = rows.len();
    let e = (0..n)
        .find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x))
        .expect("group has an identity");
    let inv: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| rows[a][b] == e).unwrap()).collect();
    // all commutators, then closure under products (finite, so a subgroup)
    let mut sub: BTreeSet<usize> = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            sub.insert(rows[rows[rows[a][b]][inv[a]]][inv[b]]);
        }
    }
    loop {
        let snapshot: Vec<usize> = sub.iter().copied().collect();
        let mut grew = false;
        for &x in &snapshot {
            for &y in &snapshot {
                grew |= sub.insert(rows[x][y]);
            }
        }
        for &x in &snapshot {
            for g in 0..n {
                grew |= sub.insert(rows[rows[g][x]][inv[g]]);
            }
        }
        if !grew {
            break;
        }
    }
    // cosets as sets of elements
    let mut coset_of: Vec<Option<usize>> = vec![None; n];
    let mut cosets: Vec<BTreeSet<usize>> = Vec::new();
    for x in 0..n {
        if coset_of[x].is_some() {
            continue;
        }
        let c: BTreeSet<usize> = sub.iter().map(|&k| rows[x][k]).collect();
        for &y in &c {
            coset_of[y] = Some(cosets.len());
        }
        cosets.push(c);
    }
    let identity_coset = coset_of[e].unwrap();
    let mut orders: Vec<usize> = (0..cosets.len())
        .map(|c| {
            let x = *cosets[c].iter().next().unwrap();
            let mut k = 1;
            let mut y = x;
            while coset_of[y] != Some(identity_coset) {
                y = rows[y][x];
                k += 1;
            }
            k
        })
        .collect();
    orders.sort_unstable();
    (cosets.len(), orders)
}

/// Partition of `0..size` generated by `f(a) ~ g(a)`, by transitive closure
/// of the relation matrix. Blocks are sorted, and ordered by their minimum.
#[allow(clippy::needless_range_loop)]
pub fn brute_coequalizer_set(size: usize, f: &[usize], g: &[usize]) -> Vec<Vec<usize>> {
    let mut rel = vec![vec![false; size]; size];
    for i in 0..size {
        rel[i][i] = true;
    }
    for (&a, &b) in f.iter().zip(g) {
        rel[a][b] = true;
        rel[b][a] = true;
    }
    for k in 0..size {
        for i in 0..size {
            if rel[i][k] {
                for j in 0..size {
                    if rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut placed = vec![false; size];
    for i in 0..size {
        if placed[i] {
            continue;
        }
        let block: Vec<usize> = (0..size).filter(|&j| rel[i][j]).collect();
        for &j in &block {
            placed[j] = true;
        }
        blocks.push(block);
    }
    blocks
}

/// A monoid given by its multiplication table and unit.
#[derive(Clone, Debug)]
pub struct TableMonoid {
    pub table: Vec<Vec<usize>>,
    pub unit: usize,
}

/// Every unit- and multiplication-preserving map between table monoids,
/// by backtracking over element images in index order.
pub fn enumerate_monoid_maps(source: &TableMonoid, target: &TableMonoid) -> Vec<Vec<usize>> {
    let n = source.table.len();
    let m = target.table.len();
    let mut out = Vec::new();
    let mut assign: Vec<Option<usize>> = vec![None; n];
    assign[source.unit] = Some(target.unit);
    fn consistent(s: &TableMonoid, t: &TableMonoid, assign: &[Option<usize>]) -> bool {
        let n = s.table.len();
        for a in 0..n {
            for b in 0..n {
                if let (Some(x), Some(y), Some(z)) = (assign[a], assign[b], assign[s.table[a][b]]) {
                    if t.table[x][y] != z {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn go(
        s: &TableMonoid,
        t: &TableMonoid,
        m: usize,
        i: usize,
        assign: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == assign.len() {
            out.push(assign.iter().map(|v| v.unwrap()).collect());
            return;
        }
        if assign[i].is_some() {
            go(s, t, m, i + 1, assign, out);
            return;
        }
        for v in 0..m {
            assign[i] = Some(v);
            if consistent(s, t, assign) {
                go(s, t, m, i + 1, assign, out);
            }
        }
        assign[i] = None;
    }
    if consistent(source, target, &assign) {
        go(source, target, m, 0, &mut assign, &mut out);
    }
    out
}

/// An action `Y ⊗ A -> A` flattened to element pairs, with the endpoints
/// needed to decide which pairs are composable. Sets and groups use a
/// single vertex.
#[derive(Clone, Debug)]
pub struct ActionTable {
    pub y_src: Vec<usize>,
    pub y_tgt: Vec<usize>,
    pub a_src: Vec<usize>,
    /// `unit_at[v]`: the element of `Y` picked out by the point at vertex `v`.
    pub unit_at: Vec<usize>,
    pub act: HashMap<(usize, usize), usize>,
}

/// Elementwise comparison of `α(y0, α(y, a))` with `α(y, α(y0, a))`, where
/// `y0` is the point at the appropriate vertex, over all composable `(y, a)`.
pub fn alg_free_by_elements(t: &ActionTable) -> bool {
    for y in 0..t.y_src.len() {
        for a in 0..t.a_src.len() {
            if t.y_tgt[y] != t.a_src[a] {
                continue;
            }
            let ya = t.act[&(y, a)];
            let left = t.act[&(t.unit_at[t.y_src[y]], ya)];
            let inner = t.act[&(t.unit_at[t.a_src[a]], a)];
            let right = t.act[&(y, inner)];
            if left != right {
                return false;
            }
        }
    }
    true
}
