//! Executable checks of the cointersection lemma, the 3-by-3 lemma and the
//! coequalizer-of-composites proposition, with seeded suites.

use crate::engine::ReflexivePair;
use crate::error::{Error, Result};
use crate::finset::{FinSet, FinSetBackend};
use crate::gen;
use crate::kernel::{Backend, Morphism, RegularEpi};
use crate::span::SpanBackend;

/// `None` when the statement holds, otherwise a description of the failure.
pub type Verdict = Option<String>;

fn fail(msg: impl Into<String>) -> Result<Verdict> {
    Ok(Some(msg.into()))
}

/// Tensoring the pushout of `q` and `q2` with `w` on either side gives the
/// pushout of the tensored quotients, legs included.
pub fn check_cointersection_lemma<B: Backend + ?Sized>(
    b: &B,
    q: &RegularEpi<B::Object>,
    q2: &RegularEpi<B::Object>,
    w: &B::Object,
) -> Result<Verdict> {
    let square = b.pushout(q, q2)?;
    let w_epi = b.identity_epi(w);
    let id_w = b.identity(w);
    for side in ["right", "left"] {
        let tensored = |e: &RegularEpi<B::Object>| {
            if side == "right" {
                b.tensor_epi(e, &w_epi)
            } else {
                b.tensor_epi(&w_epi, e)
            }
        };
        let with_w = |m: &Morphism<B::Object>| {
            if side == "right" {
                b.tensor_mor(m, &id_w)
            } else {
                b.tensor_mor(&id_w, m)
            }
        };
        let recomputed = b.pushout(&tensored(q)?, &tensored(q2)?)?;
        if !b.same_quotient(recomputed.diagonal.arrow(), &with_w(square.diagonal.arrow())?) {
            return fail(format!("tensoring on the {side}: diagonal is not the tensored pushout"));
        }
        if !b.equal_mor(&recomputed.left, &with_w(&square.left)?)?
            || !b.equal_mor(&recomputed.right, &with_w(&square.right)?)?
        {
            return fail(format!("tensoring on the {side}: legs differ from the tensored legs"));
        }
    }
    Ok(None)
}

/// The tensor of two reflexive coequalizers is the reflexive coequalizer of
/// the tensored pairs, and the cointersection of its one-sided tensors.
pub fn check_three_by_three<B: Backend + ?Sized>(
    b: &B,
    a: &ReflexivePair<B::Object>,
    c: &ReflexivePair<B::Object>,
) -> Result<Verdict> {
    let (_, h) = b.coequalizer(&a.f, &a.g)?;
    let (_, k) = b.coequalizer(&c.f, &c.g)?;
    let hk = b.tensor_mor(h.arrow(), k.arrow())?;

    let f = b.tensor_mor(&a.f, &c.f)?;
    let g = b.tensor_mor(&a.g, &c.g)?;
    let section = b.tensor_mor(&a.section, &c.section)?;
    let id = b.identity(f.cod());
    if !b.equal_mor(&b.compose(&f, &section)?, &id)? || !b.equal_mor(&b.compose(&g, &section)?, &id)? {
        return fail("tensored pair is not reflexive");
    }
    let (_, direct) = b.coequalizer(&f, &g)?;
    if !b.same_quotient(direct.arrow(), &hk) {
        return fail("coequalizer of the tensored pair differs from the tensored coequalizer");
    }
    let left = b.tensor_epi(&h, &b.identity_epi(c.f.cod()))?;
    let right = b.tensor_epi(&b.identity_epi(a.f.cod()), &k)?;
    let joint = b.cointersect(&[left, right])?;
    if !b.same_quotient(joint.arrow(), &hk) {
        return fail("cointersection of the one-sided tensors differs from the tensored coequalizer");
    }
    Ok(None)
}

/// A commuting square of parallel pairs
///
/// ```text
///   top ----top_pair----> right_src
///    |                        |
/// left_pair              right_pair
///    v                        v
///   bottom_src --bottom_pair--> corner
/// ```
///
/// with `top_pair[i] . top_section = 1` and `left_pair[j] . left_section = 1`,
/// and `bottom_pair[i] . left_pair[j] = right_pair[j] . top_pair[i]`.
#[derive(Clone, Debug)]
pub struct Grid<O> {
    pub top_pair: [Morphism<O>; 2],
    pub top_section: Morphism<O>,
    pub left_pair: [Morphism<O>; 2],
    pub left_section: Morphism<O>,
    pub bottom_pair: [Morphism<O>; 2],
    pub right_pair: [Morphism<O>; 2],
}

/// The grid obtained by tensoring two reflexive pairs `A1 => A2`, `B1 => B2`.
pub fn grid_from_tensor<B: Backend + ?Sized>(
    b: &B,
    a: &ReflexivePair<B::Object>,
    c: &ReflexivePair<B::Object>,
) -> Result<Grid<B::Object>> {
    let (a1, a2) = (a.f.dom(), a.f.cod());
    let (b1, b2) = (c.f.dom(), c.f.cod());
    let (ia1, ia2, ib1, ib2) = (b.identity(a1), b.identity(a2), b.identity(b1), b.identity(b2));
    Ok(Grid {
        top_pair: [b.tensor_mor(&ia1, &c.f)?, b.tensor_mor(&ia1, &c.g)?],
        top_section: b.tensor_mor(&ia1, &c.section)?,
        left_pair: [b.tensor_mor(&a.f, &ib1)?, b.tensor_mor(&a.g, &ib1)?],
        left_section: b.tensor_mor(&a.section, &ib1)?,
        bottom_pair: [b.tensor_mor(&ia2, &c.f)?, b.tensor_mor(&ia2, &c.g)?],
        right_pair: [b.tensor_mor(&a.f, &ib2)?, b.tensor_mor(&a.g, &ib2)?],
    })
}

/// The grid whose corner is the common target of two reflexive pairs of
/// sets, with top-left corner the set of quadruples
/// `(x1, x2, x'1, x'2)` satisfying `h_i(x_j) = h'_j(x'_i)`.
pub fn grid_from_pullback(
    b: &FinSetBackend,
    bottom: &ReflexivePair<FinSet>,
    right: &ReflexivePair<FinSet>,
) -> Result<Grid<FinSet>> {
    let a = bottom.f.dom();
    let a2 = right.f.dom();
    if bottom.f.cod() != right.f.cod() {
        return Err(Error::Mismatch("reflexive pairs must share their target".into()));
    }
    let h = [bottom.f.map(), bottom.g.map()];
    let h2 = [right.f.map(), right.g.map()];
    let mut quads = Vec::new();
    for x1 in 0..a.len() {
        for x2 in 0..a.len() {
            for y1 in 0..a2.len() {
                for y2 in 0..a2.len() {
                    let (x, y) = ([x1, x2], [y1, y2]);
                    let ok = (0..2).all(|i| (0..2).all(|j| h[i][x[j]] == h2[j][y[i]]));
                    if ok {
                        quads.push([x1, x2, y1, y2]);
                    }
                }
            }
        }
    }
    let p = FinSet::new((0..quads.len()).map(|i| format!("p{i}")))?;
    let find = |q: [usize; 4]| {
        quads
            .iter()
            .position(|&r| r == q)
            .ok_or_else(|| Error::Invariant("section lands outside the pullback".into()))
    };
    let (s, s2) = (bottom.section.map(), right.section.map());
    let top_section = (0..a2.len())
        .map(|y| find([s[h2[0][y]], s[h2[1][y]], y, y]))
        .collect::<Result<Vec<_>>>()?;
    let left_section = (0..a.len())
        .map(|x| find([x, x, s2[h[0][x]], s2[h[1][x]]]))
        .collect::<Result<Vec<_>>>()?;
    let column = |c: usize| quads.iter().map(|q| q[c]).collect::<Vec<_>>();
    Ok(Grid {
        top_pair: [b.arrow(&p, a2, column(2))?, b.arrow(&p, a2, column(3))?],
        top_section: b.arrow(a2, &p, top_section)?,
        left_pair: [b.arrow(&p, a, column(0))?, b.arrow(&p, a, column(1))?],
        left_section: b.arrow(a, &p, left_section)?,
        bottom_pair: [bottom.f.clone(), bottom.g.clone()],
        right_pair: [right.f.clone(), right.g.clone()],
    })
}

/// Commutation and section equations of a grid.
pub fn check_grid_premises<B: Backend + ?Sized>(b: &B, grid: &Grid<B::Object>) -> Result<Verdict> {
    for i in 0..2 {
        for j in 0..2 {
            let down_across = b.compose(&grid.bottom_pair[i], &grid.left_pair[j])?;
            let across_down = b.compose(&grid.right_pair[j], &grid.top_pair[i])?;
            if !b.equal_mor(&down_across, &across_down)? {
                return fail(format!("square ({i}, {j}) does not commute"));
            }
        }
    }
    let id_top = b.identity(grid.top_section.dom());
    let id_left = b.identity(grid.left_section.dom());
    for i in 0..2 {
        if !b.equal_mor(&b.compose(&grid.top_pair[i], &grid.top_section)?, &id_top)? {
            return fail(format!("top arrow {i} is not split by the top section"));
        }
        if !b.equal_mor(&b.compose(&grid.left_pair[i], &grid.left_section)?, &id_left)? {
            return fail(format!("left arrow {i} is not split by the left section"));
        }
    }
    Ok(None)
}

/// The coequalizer of the two diagonal composites is the cointersection of
/// the coequalizers of the bottom and right pairs.
pub fn check_proposition<B: Backend + ?Sized>(b: &B, grid: &Grid<B::Object>) -> Result<Verdict> {
    if let Some(why) = check_grid_premises(b, grid)? {
        return fail(format!("premise: {why}"));
    }
    let d1 = b.compose(&grid.right_pair[0], &grid.top_pair[0])?;
    let d2 = b.compose(&grid.right_pair[1], &grid.top_pair[1])?;
    let (_, diagonal) = b.coequalizer(&d1, &d2)?;
    let (_, bottom) = b.coequalizer(&grid.bottom_pair[0], &grid.bottom_pair[1])?;
    let (_, right) = b.coequalizer(&grid.right_pair[0], &grid.right_pair[1])?;
    let joint = b.cointersect(&[bottom, right])?;
    if !b.same_quotient(diagonal.arrow(), joint.arrow()) {
        return fail("diagonal coequalizer differs from the cointersection");
    }
    Ok(None)
}

/// Outcome of a seeded suite; instance `i` uses seed `seed + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub instances: usize,
    pub failures: Vec<(usize, String)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn passes(&self) -> usize {
        self.instances - self.failures.len()
    }
}

fn run_suite<F>(name: &str, seed: u64, count: usize, mut instance: F) -> Result<SuiteReport>
where
    F: FnMut(&mut gen::InstanceRng) -> Result<Verdict>,
{
    let mut failures = Vec::new();
    for i in 0..count {
        let mut rng = gen::rng(seed.wrapping_add(i as u64));
        if let Some(why) = instance(&mut rng)? {
            failures.push((i, why));
        }
    }
    Ok(SuiteReport {
        name: name.to_string(),
        seed,
        instances: count,
        failures,
    })
}

const MAX_SET: usize = 6;
const MAX_RELATIONS: usize = 4;
const MAX_GRAPH_VERTICES: usize = 4;
const MAX_GRAPH_EDGES: usize = 6;

pub fn cointersection_suite_finset(seed: u64, count: usize) -> Result<SuiteReport> {
    let b = FinSetBackend;
    run_suite("cointersection lemma (finset)", seed, count, |rng| {
        let target = gen::random_set(rng, 0, MAX_SET, "x");
        let p = gen::random_reflexive_pair_set(rng, &b, &target, MAX_RELATIONS);
        let p2 = gen::random_reflexive_pair_set(rng, &b, &target, MAX_RELATIONS);
        let w = gen::random_set(rng, 0, 4, "w");
        let (_, q) = b.coequalizer(&p.f, &p.g)?;
        let (_, q2) = b.coequalizer(&p2.f, &p2.g)?;
        check_cointersection_lemma(&b, &q, &q2, &w)
    })
}

pub fn cointersection_suite_span(seed: u64, count: usize) -> Result<SuiteReport> {
    run_suite("cointersection lemma (span)", seed, count, |rng| {
        let g = gen::random_graph(rng, MAX_GRAPH_VERTICES, MAX_GRAPH_EDGES, false);
        let b = &g.backend;
        let p = gen::random_reflexive_pair_span(rng, b, &g.graph, MAX_RELATIONS);
        let p2 = gen::random_reflexive_pair_span(rng, b, &g.graph, MAX_RELATIONS);
        let w = gen::random_span(rng, b, MAX_GRAPH_EDGES, "w");
        let (_, q) = b.coequalizer(&p.f, &p.g)?;
        let (_, q2) = b.coequalizer(&p2.f, &p2.g)?;
        check_cointersection_lemma(b, &q, &q2, &w)
    })
}

pub fn three_by_three_suite_finset(seed: u64, count: usize) -> Result<SuiteReport> {
    let b = FinSetBackend;
    run_suite("3-by-3 lemma (finset)", seed, count, |rng| {
        let a = gen::random_set(rng, 0, MAX_SET, "a");
        let c = gen::random_set(rng, 0, MAX_SET, "b");
        let pa = gen::random_reflexive_pair_set(rng, &b, &a, MAX_RELATIONS);
        let pc = gen::random_reflexive_pair_set(rng, &b, &c, MAX_RELATIONS);
        check_three_by_three(&b, &pa, &pc)
    })
}

pub fn three_by_three_suite_span(seed: u64, count: usize) -> Result<SuiteReport> {
    run_suite("3-by-3 lemma (span)", seed, count, |rng| {
        let g = gen::random_graph(rng, MAX_GRAPH_VERTICES, MAX_GRAPH_EDGES, false);
        let b = &g.backend;
        let other = gen::random_span(rng, b, MAX_GRAPH_EDGES, "u");
        let pa = gen::random_reflexive_pair_span(rng, b, &g.graph, MAX_RELATIONS);
        let pc = gen::random_reflexive_pair_span(rng, b, &other, MAX_RELATIONS);
        check_three_by_three(b, &pa, &pc)
    })
}

/// Even instances use the pullback grid of two pairs on one set, odd ones
/// the tensor grid of two independent pairs.
pub fn proposition_suite_finset(seed: u64, count: usize) -> Result<SuiteReport> {
    let b = FinSetBackend;
    let mut parity = 0usize;
    run_suite("coequalizer of composites (finset)", seed, count, |rng| {
        parity += 1;
        let grid = if parity % 2 == 1 {
            let target = gen::random_set(rng, 0, MAX_SET, "x");
            let p = gen::random_reflexive_pair_set(rng, &b, &target, MAX_RELATIONS);
            let p2 = gen::random_reflexive_pair_set(rng, &b, &target, MAX_RELATIONS);
            grid_from_pullback(&b, &p, &p2)?
        } else {
            let a = gen::random_set(rng, 0, MAX_SET, "a");
            let c = gen::random_set(rng, 0, MAX_SET, "b");
            let pa = gen::random_reflexive_pair_set(rng, &b, &a, MAX_RELATIONS);
            let pc = gen::random_reflexive_pair_set(rng, &b, &c, MAX_RELATIONS);
            grid_from_tensor(&b, &pa, &pc)?
        };
        check_proposition(&b, &grid)
    })
}

pub fn proposition_suite_span(seed: u64, count: usize) -> Result<SuiteReport> {
    run_suite("coequalizer of composites (span)", seed, count, |rng| {
        let g = gen::random_graph(rng, MAX_GRAPH_VERTICES, MAX_GRAPH_EDGES, false);
        let b: &SpanBackend = &g.backend;
        let other = gen::random_span(rng, b, MAX_GRAPH_EDGES, "u");
        let pa = gen::random_reflexive_pair_span(rng, b, &g.graph, MAX_RELATIONS);
        let pc = gen::random_reflexive_pair_span(rng, b, &other, MAX_RELATIONS);
        check_proposition(b, &grid_from_tensor(b, &pa, &pc)?)
    })
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn lemmas_hold_on_sets(seed in any::<u64>()) {
            prop_assert!(cointersection_suite_finset(seed, 1).unwrap().passed());
            prop_assert!(three_by_three_suite_finset(seed, 1).unwrap().passed());
            prop_assert!(proposition_suite_finset(seed, 2).unwrap().passed());
        }

        #[test]
        fn cointersection_lemma_holds_on_spans(seed in any::<u64>()) {
            prop_assert!(cointersection_suite_span(seed, 1).unwrap().passed());
        }
    }
}
