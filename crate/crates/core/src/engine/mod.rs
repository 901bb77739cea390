//! The stagewise construction of the free monoid on a pointed object.
//!
//! Stage `n` is the quotient `Z_n` of `Y^n` that identifies the point
//! inserted in adjacent slots. Consecutive stages are joined by connecting
//! maps `Z_(n-1) -> Z_n`, and the chain is cut off once two consecutive
//! connecting maps are invertible.

mod action;
mod monoid;
mod universal;

pub use action::{alg_free_components, alg_free_condition, ActionObject, AlgFreeComposites};
pub use monoid::{
    monoid_laws, stable_monoid, stage_mult, Law, LawFailure, LawReport, MonoidObject,
    MonoidTruncation,
};
pub use universal::{compatible_families, universal_map, UniversalReport};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{ArrowPair, Backend, Morphism, PointedObject, RegularEpi};

/// Which parallel pairs define the stage quotients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionMode {
    /// Reflexive pairs `Y^k (Y + Y^2) Y^(n-k-2) => Y^n`, valid in every
    /// monoidal category with reflexive coequalizers.
    Reflexive,
    /// Plain pairs of adjacent insertions; valid when the tensor is
    /// cocontinuous on both sides.
    Dubuc,
}

#[derive(Debug, Clone)]
pub struct ChainOptions {
    pub n_max: usize,
    pub mode: ConstructionMode,
    pub parallel: bool,
    /// Stop computing stages once the chain is seen to be stable.
    pub stop_at_stabilization: bool,
}

impl ChainOptions {
    pub fn new(n_max: usize) -> Self {
        ChainOptions {
            n_max,
            mode: ConstructionMode::Reflexive,
            parallel: false,
            stop_at_stabilization: true,
        }
    }

    pub fn with_mode(mut self, mode: ConstructionMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn with_stop_at_stabilization(mut self, stop: bool) -> Self {
        self.stop_at_stabilization = stop;
        self
    }
}

/// A reflexive pair `f, g: C => Y^n` with common section `d: Y^n -> C`.
#[derive(Clone, Debug)]
pub struct ReflexivePair<O> {
    pub f: Morphism<O>,
    pub g: Morphism<O>,
    pub section: Morphism<O>,
}

/// Stage `n`: the quotient `q_n: Y^n -> Z_n` and the per-slot quotients it
/// cointersects.
#[derive(Clone, Debug)]
pub struct StageQuotient<O> {
    pub n: usize,
    pub object: O,
    pub epi: RegularEpi<O>,
    pub per_k: Vec<RegularEpi<O>>,
}

#[derive(Clone, Debug)]
pub struct ChainResult<O> {
    pub pointed: PointedObject<O>,
    pub stages: Vec<StageQuotient<O>>,
    /// `connecting[n - 1]` is `j_n: Z_(n-1) -> Z_n`.
    pub connecting: Vec<Morphism<O>>,
    pub stabilized_at: Option<usize>,
    pub mode: ConstructionMode,
    pub n_max: usize,
}

impl<O: Clone + PartialEq + std::fmt::Debug> ChainResult<O> {
    /// Index of the last computed stage.
    pub fn depth(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn stage(&self, n: usize) -> Option<&StageQuotient<O>> {
        self.stages.get(n)
    }

    /// `j_n` for `1 <= n <= depth`.
    pub fn j(&self, n: usize) -> Option<&Morphism<O>> {
        n.checked_sub(1).and_then(|i| self.connecting.get(i))
    }

    /// True when the chain was not seen to stabilize within the stage bound,
    /// so the stages are only a truncation of the colimit.
    pub fn is_certified_truncation(&self) -> bool {
        self.stabilized_at.is_none()
    }

    pub fn sizes<B: Backend<Object = O> + ?Sized>(&self, backend: &B) -> Vec<usize> {
        self.stages.iter().map(|s| backend.size(&s.object)).collect()
    }

    /// The colimit leg `Z_n -> Z_s` into the stable stage.
    pub fn leg<B: Backend<Object = O> + ?Sized>(&self, backend: &B, n: usize) -> Result<Morphism<O>> {
        let s = self
            .stabilized_at
            .ok_or_else(|| Error::NotStabilized(format!("no stable stage up to {}", self.depth())))?;
        if n > self.depth() {
            return Err(Error::IndexOutOfRange(format!(
                "stage {n} beyond the computed depth {}",
                self.depth()
            )));
        }
        let (lo, hi) = if n <= s { (n, s) } else { (s, n) };
        let mut acc = backend.identity(&self.stages[lo].object);
        for k in lo + 1..=hi {
            acc = backend.compose(&self.connecting[k - 1], &acc)?;
        }
        if n <= s {
            Ok(acc)
        } else {
            backend.inverse(&acc)
        }
    }

    /// Recheck every commuting square `j_n . q_(n-1) = q_n . insertion(n, j)`.
    pub fn verify<B: Backend<Object = O> + ?Sized>(&self, backend: &B) -> Result<()> {
        for n in 1..=self.depth() {
            let lhs = backend.compose(&self.connecting[n - 1], self.stages[n - 1].epi.arrow())?;
            for j in 0..n {
                let ins = insertion(backend, &self.pointed, n, j)?;
                let rhs = backend.compose(self.stages[n].epi.arrow(), &ins)?;
                if !backend.equal_mor(&lhs, &rhs)? {
                    return Err(Error::Invariant(format!(
                        "square for stage {n} fails at slot {j}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `Y^j ⊗ y ⊗ Y^(n-j-1): Y^(n-1) -> Y^n`.
pub fn insertion<B: Backend + ?Sized>(
    backend: &B,
    pointed: &PointedObject<B::Object>,
    n: usize,
    j: usize,
) -> Result<Morphism<B::Object>> {
    if j >= n {
        return Err(Error::IndexOutOfRange(format!("slot {j} in a power of length {n}")));
    }
    let y = pointed.carrier();
    let left = backend.identity(&backend.tensor_power(y, j)?.object);
    let right = backend.identity(&backend.tensor_power(y, n - j - 1)?.object);
    let mid = backend.tensor_mor(&left, pointed.point())?;
    backend.tensor_mor(&mid, &right)
}

/// The data `Y + Y^2` with injections and the arrows out of it needed for
/// the reflexive pairs.
#[derive(Clone, Debug)]
struct SplitData<O> {
    /// `(Y ⊗ y, 1)` and `(y ⊗ Y, 1)`: `Y + Y^2 -> Y^2`
    f: Morphism<O>,
    g: Morphism<O>,
    /// `Y^2 -> Y + Y^2`, the second injection.
    d: Morphism<O>,
}

fn split_data<B: Backend + ?Sized>(
    backend: &B,
    pointed: &PointedObject<B::Object>,
) -> Result<SplitData<B::Object>> {
    let y = pointed.carrier();
    let y2 = backend.tensor_power(y, 2)?.object;
    let cop = backend.coproduct(y, &y2)?;
    let id_y = backend.identity(y);
    let id_y2 = backend.identity(&y2);
    let right_point = backend.tensor_mor(&id_y, pointed.point())?;
    let left_point = backend.tensor_mor(pointed.point(), &id_y)?;
    let f = backend.copair(&cop, &right_point, &id_y2)?;
    let g = backend.copair(&cop, &left_point, &id_y2)?;
    let d = cop.right.clone();
    Ok(SplitData { f, g, d })
}

/// The reflexive pair quotiented at stage `n`, slot `k` (`k <= n - 2`).
pub fn reflexive_pair<B: Backend + ?Sized>(
    backend: &B,
    pointed: &PointedObject<B::Object>,
    n: usize,
    k: usize,
) -> Result<ReflexivePair<B::Object>> {
    let split = split_data(backend, pointed)?;
    reflexive_pair_from(backend, pointed, &split, n, k)
}

fn reflexive_pair_from<B: Backend + ?Sized>(
    backend: &B,
    pointed: &PointedObject<B::Object>,
    split: &SplitData<B::Object>,
    n: usize,
    k: usize,
) -> Result<ReflexivePair<B::Object>> {
    if n < 2 || k > n - 2 {
        return Err(Error::IndexOutOfRange(format!("slot {k} at stage {n}")));
    }
    let y = pointed.carrier();
    let left = backend.identity(&backend.tensor_power(y, k)?.object);
    let right = backend.identity(&backend.tensor_power(y, n - k - 2)?.object);
    let whisker = |m: &Morphism<B::Object>| -> Result<Morphism<B::Object>> {
        let inner = backend.tensor_mor(&left, m)?;
        backend.tensor_mor(&inner, &right)
    };
    let pair = ReflexivePair {
        f: whisker(&split.f)?,
        g: whisker(&split.g)?,
        section: whisker(&split.d)?,
    };
    let id = backend.identity(pair.f.cod());
    let fd = backend.compose(&pair.f, &pair.section)?;
    let gd = backend.compose(&pair.g, &pair.section)?;
    if !backend.equal_mor(&fd, &id)? || !backend.equal_mor(&gd, &id)? {
        return Err(Error::Invariant(format!("pair at stage {n}, slot {k} is not reflexive")));
    }
    Ok(pair)
}

struct Builder<'a, B: Backend + ?Sized> {
    backend: &'a B,
    pointed: &'a PointedObject<B::Object>,
    split: Option<SplitData<B::Object>>,
    parallel: bool,
}

impl<'a, B: Backend + ?Sized> Builder<'a, B> {
    fn new(
        backend: &'a B,
        pointed: &'a PointedObject<B::Object>,
        mode: ConstructionMode,
        parallel: bool,
    ) -> Result<Self> {
        backend.check_owned(pointed.carrier())?;
        if mode == ConstructionMode::Dubuc && !backend.capabilities().cocontinuous_tensor {
            return Err(Error::capability(
                backend.name(),
                "the plain construction (its tensor is not cocontinuous)",
            ));
        }
        let split = if mode == ConstructionMode::Reflexive && backend.capabilities().has_coproducts {
            Some(split_data(backend, pointed)?)
        } else {
            None
        };
        Ok(Builder {
            backend,
            pointed,
            split,
            parallel,
        })
    }

    fn slot_pair(&self, n: usize, k: usize) -> Result<ArrowPair<B::Object>> {
        match &self.split {
            Some(split) => {
                let p = reflexive_pair_from(self.backend, self.pointed, split, n, k)?;
                Ok((p.f, p.g))
            }
            // Without coproducts the adjacent insertions are already a
            // reflexive pair, split by the codiagonal on the inserted slots.
            None => Ok((
                insertion(self.backend, self.pointed, n, k)?,
                insertion(self.backend, self.pointed, n, k + 1)?,
            )),
        }
    }

    fn stage(&self, n: usize) -> Result<StageQuotient<B::Object>> {
        let power = self.backend.tensor_power(self.pointed.carrier(), n)?.object;
        if n < 2 {
            let epi = self.backend.identity_epi(&power);
            return Ok(StageQuotient {
                n,
                object: power,
                epi,
                per_k: Vec::new(),
            });
        }
        let one = |k: usize| -> Result<RegularEpi<B::Object>> {
            let pair = self.slot_pair(n, k)?;
            self.backend.joint_coequalizer(&power, vec![pair])
        };
        let per_k: Vec<RegularEpi<B::Object>> = if self.parallel {
            (0..n - 1).into_par_iter().map(one).collect::<Result<_>>()?
        } else {
            (0..n - 1).map(one).collect::<Result<_>>()?
        };
        let epi = self.backend.cointersect(&per_k)?;
        Ok(StageQuotient {
            n,
            object: epi.cod().clone(),
            epi,
            per_k,
        })
    }
}

/// Stage `n` of the construction on its own.
pub fn stage<B: Backend + ?Sized>(
    backend: &B,
    pointed: &PointedObject<B::Object>,
    n: usize,
    mode: ConstructionMode,
) -> Result<StageQuotient<B::Object>> {
    Builder::new(backend, pointed, mode, false)?.stage(n)
}

/// `j_n: Z_(n-1) -> Z_n`, induced by `q_n` after inserting the point in any
/// slot; every slot is checked to give the same arrow.
pub fn connecting<B: Backend + ?Sized>(
    backend: &B,
    pointed: &PointedObject<B::Object>,
    prev: &StageQuotient<B::Object>,
    cur: &StageQuotient<B::Object>,
) -> Result<Morphism<B::Object>> {
    let n = cur.n;
    if prev.n + 1 != n {
        return Err(Error::IndexOutOfRange(format!(
            "stages {} and {n} are not consecutive",
            prev.n
        )));
    }
    let first = backend.compose(cur.epi.arrow(), &insertion(backend, pointed, n, 0)?)?;
    for j in 1..n {
        let other = backend.compose(cur.epi.arrow(), &insertion(backend, pointed, n, j)?)?;
        if !backend.equal_mor(&first, &other)? {
            return Err(Error::Invariant(format!(
                "stage {n}: inserting the point in slot {j} differs from slot 0"
            )));
        }
    }
    backend.induce(&prev.epi, &first)
}

/// Computes stages `0..` up to `n_max`, stopping early at stabilization if
/// asked to, and looking one stage past `n_max` when that is what it takes to
/// confirm stability.
pub fn run_chain<B: Backend + ?Sized>(
    backend: &B,
    pointed: &PointedObject<B::Object>,
    options: &ChainOptions,
) -> Result<ChainResult<B::Object>> {
    let builder = Builder::new(backend, pointed, options.mode, options.parallel)?;
    let mut stages = vec![builder.stage(0)?];
    let mut connecting_maps: Vec<Morphism<B::Object>> = Vec::new();
    let mut stabilized_at = None;
    let mut n = 1;
    loop {
        let within = n <= options.n_max;
        // One stage past the bound, only to confirm an invertible j_(n_max).
        let look_ahead = n == options.n_max + 1
            && stabilized_at.is_none()
            && connecting_maps.last().is_some_and(|j| backend.is_iso(j));
        if !within && !look_ahead {
            break;
        }
        let cur = builder.stage(n)?;
        let j = connecting(backend, pointed, &stages[n - 1], &cur)?;
        stages.push(cur);
        connecting_maps.push(j);
        if stabilized_at.is_none() && n >= 2 {
            let a = &connecting_maps[n - 2];
            let b = &connecting_maps[n - 1];
            if backend.is_iso(a) && backend.is_iso(b) {
                stabilized_at = Some(n - 2);
                if options.stop_at_stabilization {
                    break;
                }
            }
        }
        n += 1;
    }
    Ok(ChainResult {
        pointed: pointed.clone(),
        stages,
        connecting: connecting_maps,
        stabilized_at,
        mode: options.mode,
        n_max: options.n_max,
    })
}

/// The plain construction, for backends whose tensor is cocontinuous.
pub fn dubuc_chain<B: Backend + ?Sized>(
    backend: &B,
    pointed: &PointedObject<B::Object>,
    n_max: usize,
) -> Result<ChainResult<B::Object>> {
    let options = ChainOptions::new(n_max)
        .with_mode(ConstructionMode::Dubuc)
        .with_stop_at_stabilization(false);
    run_chain(backend, pointed, &options)
}

/// Checks that two chains over the same pointed object have identical stage
/// quotients and connecting maps at every stage both computed.
pub fn compare_chains<B: Backend + ?Sized>(
    backend: &B,
    a: &ChainResult<B::Object>,
    b: &ChainResult<B::Object>,
) -> Result<()> {
    let depth = a.depth().min(b.depth());
    for n in 0..=depth {
        if !backend.same_quotient(a.stages[n].epi.arrow(), b.stages[n].epi.arrow()) {
            return Err(Error::Invariant(format!("stage {n} quotients differ")));
        }
        if n >= 1 && a.connecting[n - 1].map() != b.connecting[n - 1].map() {
            return Err(Error::Invariant(format!("connecting maps into stage {n} differ")));
        }
    }
    Ok(())
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::finset::{pointed_on, FinSet, FinSetBackend};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn set_stage_sizes_are_geometric_sums(letters in 0usize..4, n_max in 1usize..5) {
            let b = FinSetBackend;
            let x = FinSet::new((0..letters).map(|i| format!("x{i}"))).unwrap();
            let p = pointed_on(&b, &x).unwrap().0;
            let options = ChainOptions::new(n_max).with_stop_at_stabilization(false);
            let chain = run_chain(&b, &p, &options).unwrap();
            let expected: Vec<usize> = (0..=n_max).map(|n| (0..=n).map(|m| letters.pow(m as u32)).sum()).collect();
            prop_assert_eq!(&chain.sizes(&b)[..=n_max], &expected[..]);
            for n in 1..=n_max {
                let j = chain.j(n).unwrap();
                let mut image = j.map().to_vec();
                image.sort_unstable();
                image.dedup();
                prop_assert_eq!(image.len(), j.map().len());
            }
        }

        #[test]
        fn reflexive_and_plain_chains_agree(letters in 0usize..3, n_max in 1usize..4) {
            let b = FinSetBackend;
            let x = FinSet::new((0..letters).map(|i| format!("x{i}"))).unwrap();
            let p = pointed_on(&b, &x).unwrap().0;
            let r = run_chain(&b, &p, &ChainOptions::new(n_max)).unwrap();
            let d = run_chain(&b, &p, &ChainOptions::new(n_max).with_mode(ConstructionMode::Dubuc)).unwrap();
            prop_assert!(compare_chains(&b, &r, &d).is_ok());
        }
    }
}
