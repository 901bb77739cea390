//! The backend contract and the morphism calculus shared by every module.
//!
//! A backend is a concrete monoidal category: every object has a finite
//! carrier indexed `0..size`, and every arrow is a total function on those
//! indices that the backend accepts as structure preserving. Tensor powers
//! are flat, so `X ⊗ (Y ⊗ Z)` and `(X ⊗ Y) ⊗ Z` are the same object and the
//! unit is a strict two-sided identity. Quotients are labelled by the
//! minimum-index element of each class.

mod union_find;

use std::fmt;
use std::sync::Arc;

pub use union_find::UnionFind;

use crate::error::{Error, Result};

/// Optional operations a backend supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capabilities {
    pub has_coproducts: bool,
    pub can_enumerate_homs: bool,
    /// Tensoring on either side preserves all coequalizers, so the plain
    /// (non-reflexive) construction is valid here as well.
    pub cocontinuous_tensor: bool,
}

/// A parallel pair of arrows, as merged by a coequalizer.
pub type ArrowPair<O> = (Morphism<O>, Morphism<O>);

/// An arrow of a concrete backend: a total function on carrier indices.
#[derive(Clone)]
pub struct Morphism<O> {
    dom: O,
    cod: O,
    map: Arc<[usize]>,
}

impl<O> Morphism<O> {
    /// Builds an arrow without asking the backend to validate it. The caller
    /// guarantees that `map` is a structure-preserving map `dom -> cod`.
    pub fn new_unchecked(dom: O, cod: O, map: Vec<usize>) -> Self {
        Morphism {
            dom,
            cod,
            map: map.into(),
        }
    }

    pub fn dom(&self) -> &O {
        &self.dom
    }

    pub fn cod(&self) -> &O {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }
}

impl<O: fmt::Debug> fmt::Debug for Morphism<O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 16;
        let head: Vec<_> = self.map.iter().take(SHOWN).collect();
        let more = if self.map.len() > SHOWN { ", .." } else { "" };
        write!(f, "Morphism({} -> .. : {:?}{})", self.map.len(), head, more)
    }
}

/// A quotient map together with the parallel pairs it jointly coequalizes.
#[derive(Clone, Debug)]
pub struct RegularEpi<O> {
    arrow: Morphism<O>,
    witnesses: Vec<ArrowPair<O>>,
}

impl<O> RegularEpi<O> {
    pub fn arrow(&self) -> &Morphism<O> {
        &self.arrow
    }

    pub fn witnesses(&self) -> &[ArrowPair<O>] {
        &self.witnesses
    }

    pub fn dom(&self) -> &O {
        self.arrow.dom()
    }

    pub fn cod(&self) -> &O {
        self.arrow.cod()
    }
}

/// An object `Y` with a point `y: I -> Y`.
#[derive(Clone, Debug)]
pub struct PointedObject<O> {
    carrier: O,
    point: Morphism<O>,
}

impl<O: Clone + PartialEq + fmt::Debug> PointedObject<O> {
    pub fn new<B: Backend<Object = O> + ?Sized>(backend: &B, point: Morphism<O>) -> Result<Self> {
        if *point.dom() != backend.unit() {
            return Err(Error::Mismatch("the point must have the unit object as domain".into()));
        }
        Ok(PointedObject {
            carrier: point.cod().clone(),
            point,
        })
    }

    pub fn carrier(&self) -> &O {
        &self.carrier
    }

    pub fn point(&self) -> &Morphism<O> {
        &self.point
    }
}

/// An object built as a flat tensor power, remembering how.
#[derive(Clone, Debug)]
pub struct TensorPower<O> {
    pub base: O,
    pub exponent: usize,
    pub object: O,
}

/// A binary coproduct with its two injections.
#[derive(Clone, Debug)]
pub struct Coproduct<O> {
    pub object: O,
    pub left: Morphism<O>,
    pub right: Morphism<O>,
}

/// The square of a cointersection of two quotients `q: B -> C`, `q': B -> C'`.
#[derive(Clone, Debug)]
pub struct Pushout<O> {
    pub diagonal: RegularEpi<O>,
    /// `r: C -> D`
    pub left: Morphism<O>,
    /// `r': C' -> D`
    pub right: Morphism<O>,
}

/// A concrete monoidal category with the colimits the construction needs.
///
/// Implementors supply carriers, the tensor, validation and coequalizers;
/// the rest of the calculus is provided on top of those.
pub trait Backend: Sync {
    type Object: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn name(&self) -> &'static str;

    fn capabilities(&self) -> Capabilities;

    fn size(&self, x: &Self::Object) -> usize;

    /// Human-readable label of element `i` of `x`.
    fn label(&self, x: &Self::Object, i: usize) -> String;

    /// Whether `x` belongs to this backend instance.
    fn owns(&self, _x: &Self::Object) -> bool {
        true
    }

    fn unit(&self) -> Self::Object;

    fn tensor_obj(&self, x: &Self::Object, y: &Self::Object) -> Result<Self::Object>;

    /// Table of `f ⊗ g` from `dom = dom f ⊗ dom g` to `cod = cod f ⊗ cod g`.
    fn tensor_table(
        &self,
        f: &Morphism<Self::Object>,
        g: &Morphism<Self::Object>,
        dom: &Self::Object,
        cod: &Self::Object,
    ) -> Vec<usize>;

    /// Accepts `map` iff it is a structure-preserving map `dom -> cod`.
    fn check_arrow(&self, dom: &Self::Object, cod: &Self::Object, map: &[usize]) -> Result<()>;

    /// Joint coequalizer of parallel pairs into `target`: the quotient object
    /// and the quotient table, classes numbered by minimum representative.
    fn coequalize(
        &self,
        target: &Self::Object,
        pairs: &[ArrowPair<Self::Object>],
    ) -> Result<(Self::Object, Vec<usize>)>;

    fn coproduct(&self, _x: &Self::Object, _y: &Self::Object) -> Result<Coproduct<Self::Object>> {
        Err(Error::capability(self.name(), "coproducts"))
    }

    /// Candidate images of element `i` of `dom` when enumerating arrows.
    fn hom_candidates(&self, _dom: &Self::Object, cod: &Self::Object, _i: usize) -> Vec<usize> {
        (0..self.size(cod)).collect()
    }

    // ---- provided calculus ----

    fn labels(&self, x: &Self::Object) -> Vec<String> {
        (0..self.size(x)).map(|i| self.label(x, i)).collect()
    }

    fn identity(&self, x: &Self::Object) -> Morphism<Self::Object> {
        Morphism::new_unchecked(x.clone(), x.clone(), (0..self.size(x)).collect())
    }

    /// A validated arrow.
    fn arrow(
        &self,
        dom: &Self::Object,
        cod: &Self::Object,
        map: Vec<usize>,
    ) -> Result<Morphism<Self::Object>> {
        self.check_owned(dom)?;
        self.check_owned(cod)?;
        if map.len() != self.size(dom) {
            return Err(Error::InvalidArrow(format!(
                "table has {} entries but the domain has {} elements",
                map.len(),
                self.size(dom)
            )));
        }
        let n = self.size(cod);
        if let Some(bad) = map.iter().position(|&v| v >= n) {
            return Err(Error::InvalidArrow(format!(
                "element {bad} is sent to {} outside a codomain of size {n}",
                map[bad]
            )));
        }
        self.check_arrow(dom, cod, &map)?;
        Ok(Morphism::new_unchecked(dom.clone(), cod.clone(), map))
    }

    fn check_owned(&self, x: &Self::Object) -> Result<()> {
        if self.owns(x) {
            Ok(())
        } else {
            Err(Error::BackendMismatch(format!(
                "object does not belong to this {} instance",
                self.name()
            )))
        }
    }

    /// `g . f`
    fn compose(
        &self,
        g: &Morphism<Self::Object>,
        f: &Morphism<Self::Object>,
    ) -> Result<Morphism<Self::Object>> {
        self.check_owned(f.cod())?;
        self.check_owned(g.dom())?;
        if f.cod() != g.dom() {
            return Err(Error::Mismatch(
                "codomain of the first arrow differs from the domain of the second".into(),
            ));
        }
        let map = f.map().iter().map(|&x| g.map()[x]).collect();
        Ok(Morphism::new_unchecked(f.dom().clone(), g.cod().clone(), map))
    }

    fn tensor_mor(
        &self,
        f: &Morphism<Self::Object>,
        g: &Morphism<Self::Object>,
    ) -> Result<Morphism<Self::Object>> {
        let dom = self.tensor_obj(f.dom(), g.dom())?;
        let cod = self.tensor_obj(f.cod(), g.cod())?;
        let map = self.tensor_table(f, g, &dom, &cod);
        Ok(Morphism::new_unchecked(dom, cod, map))
    }

    fn tensor_power(&self, base: &Self::Object, n: usize) -> Result<TensorPower<Self::Object>> {
        let mut object = self.unit();
        for _ in 0..n {
            object = self.tensor_obj(&object, base)?;
        }
        Ok(TensorPower {
            base: base.clone(),
            exponent: n,
            object,
        })
    }

    /// `f ⊗ .. ⊗ f` (`n` factors); the identity on the unit for `n = 0`.
    fn tensor_power_mor(
        &self,
        f: &Morphism<Self::Object>,
        n: usize,
    ) -> Result<Morphism<Self::Object>> {
        let mut acc = self.identity(&self.unit());
        for _ in 0..n {
            acc = self.tensor_mor(&acc, f)?;
        }
        Ok(acc)
    }

    /// The canonical isomorphism `X^m ⊗ X^n -> X^(m+n)`.
    fn power_iso(&self, m: usize, n: usize, base: &Self::Object) -> Result<Morphism<Self::Object>> {
        let left = self.tensor_power(base, m)?.object;
        let right = self.tensor_power(base, n)?.object;
        let dom = self.tensor_obj(&left, &right)?;
        let cod = self.tensor_power(base, m + n)?.object;
        if dom != cod {
            return Err(Error::Invariant(format!(
                "{} tensor powers are not flat: X^{m} ⊗ X^{n} differs from X^{}",
                self.name(),
                m + n
            )));
        }
        Ok(self.identity(&cod).retarget(dom))
    }

    fn equal_mor(&self, f: &Morphism<Self::Object>, g: &Morphism<Self::Object>) -> Result<bool> {
        if f.dom() != g.dom() || f.cod() != g.cod() {
            return Err(Error::NotParallel("equal_mor needs parallel arrows".into()));
        }
        Ok(f.map() == g.map())
    }

    /// Bijective structure-preserving maps are the isomorphisms of every
    /// shipped backend.
    fn is_iso(&self, f: &Morphism<Self::Object>) -> bool {
        let n = self.size(f.cod());
        if f.map().len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &y in f.map() {
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }

    fn inverse(&self, f: &Morphism<Self::Object>) -> Result<Morphism<Self::Object>> {
        if !self.is_iso(f) {
            return Err(Error::InvalidArrow("arrow is not invertible".into()));
        }
        let mut inv = vec![0; f.map().len()];
        for (x, &y) in f.map().iter().enumerate() {
            inv[y] = x;
        }
        self.arrow(f.cod(), f.dom(), inv)
    }

    fn identity_epi(&self, x: &Self::Object) -> RegularEpi<Self::Object> {
        RegularEpi {
            arrow: self.identity(x),
            witnesses: Vec::new(),
        }
    }

    /// The quotient of `target` by all the given parallel pairs at once.
    fn joint_coequalizer(
        &self,
        target: &Self::Object,
        pairs: Vec<ArrowPair<Self::Object>>,
    ) -> Result<RegularEpi<Self::Object>> {
        self.check_owned(target)?;
        for (i, (f, g)) in pairs.iter().enumerate() {
            if f.dom() != g.dom() || f.cod() != g.cod() {
                return Err(Error::NotParallel(format!("witness pair #{i}")));
            }
            if f.cod() != target {
                return Err(Error::Mismatch(format!(
                    "witness pair #{i} does not land in the quotiented object"
                )));
            }
        }
        let (object, map) = self.coequalize(target, &pairs)?;
        let arrow = self.arrow(target, &object, map)?;
        Ok(RegularEpi {
            arrow,
            witnesses: pairs,
        })
    }

    fn coequalizer(
        &self,
        f: &Morphism<Self::Object>,
        g: &Morphism<Self::Object>,
    ) -> Result<(Self::Object, RegularEpi<Self::Object>)> {
        if f.dom() != g.dom() || f.cod() != g.cod() {
            return Err(Error::NotParallel("coequalizer needs a parallel pair".into()));
        }
        let epi = self.joint_coequalizer(f.cod(), vec![(f.clone(), g.clone())])?;
        Ok((epi.cod().clone(), epi))
    }

    /// The unique `u` with `u . q = h`, for `h` merging every witness of `q`.
    fn induce(
        &self,
        q: &RegularEpi<Self::Object>,
        h: &Morphism<Self::Object>,
    ) -> Result<Morphism<Self::Object>> {
        if h.dom() != q.dom() {
            return Err(Error::Mismatch(
                "induced map must start at the domain of the quotient".into(),
            ));
        }
        let hm = h.map();
        for (index, (u, v)) in q.witnesses().iter().enumerate() {
            let merged = u
                .map()
                .iter()
                .zip(v.map())
                .all(|(&a, &b)| hm[a] == hm[b]);
            if !merged {
                return Err(Error::WitnessNotMerged { index });
            }
        }
        let n = self.size(q.cod());
        let mut table = vec![usize::MAX; n];
        for (x, &c) in q.arrow().map().iter().enumerate() {
            if table[c] == usize::MAX {
                table[c] = hm[x];
            } else if table[c] != hm[x] {
                return Err(Error::Invariant(
                    "quotient is not the joint coequalizer of its witness pairs".into(),
                ));
            }
        }
        if table.contains(&usize::MAX) {
            return Err(Error::Invariant("quotient arrow is not surjective".into()));
        }
        self.arrow(q.cod(), h.cod(), table)
    }

    /// Joint quotient of a family of quotients of one object.
    fn cointersect(&self, epis: &[RegularEpi<Self::Object>]) -> Result<RegularEpi<Self::Object>> {
        let first = epis.first().ok_or(Error::EmptyFamily)?;
        if let Some(i) = epis.iter().position(|e| e.dom() != first.dom()) {
            return Err(Error::Mismatch(format!(
                "quotient #{i} has a different domain than the first"
            )));
        }
        let pairs = epis
            .iter()
            .flat_map(|e| e.witnesses().iter().cloned())
            .collect();
        self.joint_coequalizer(first.dom(), pairs)
    }

    fn pushout(
        &self,
        q: &RegularEpi<Self::Object>,
        q2: &RegularEpi<Self::Object>,
    ) -> Result<Pushout<Self::Object>> {
        let diagonal = self.cointersect(&[q.clone(), q2.clone()])?;
        let left = self.induce(q, diagonal.arrow())?;
        let right = self.induce(q2, diagonal.arrow())?;
        Ok(Pushout {
            diagonal,
            left,
            right,
        })
    }

    /// `q ⊗ q'` as a regular epi, witnessed by `u ⊗ B'`, `v ⊗ B'` and
    /// `B ⊗ u'`, `B ⊗ v'`.
    fn tensor_epi(
        &self,
        q: &RegularEpi<Self::Object>,
        q2: &RegularEpi<Self::Object>,
    ) -> Result<RegularEpi<Self::Object>> {
        let arrow = self.tensor_mor(q.arrow(), q2.arrow())?;
        let id_left = self.identity(q.dom());
        let id_right = self.identity(q2.dom());
        let mut witnesses = Vec::with_capacity(q.witnesses().len() + q2.witnesses().len());
        for (u, v) in q.witnesses() {
            witnesses.push((self.tensor_mor(u, &id_right)?, self.tensor_mor(v, &id_right)?));
        }
        for (u, v) in q2.witnesses() {
            witnesses.push((self.tensor_mor(&id_left, u)?, self.tensor_mor(&id_left, v)?));
        }
        Ok(RegularEpi { arrow, witnesses })
    }

    /// The row vector `(f g)` out of a coproduct.
    fn copair(
        &self,
        coproduct: &Coproduct<Self::Object>,
        f: &Morphism<Self::Object>,
        g: &Morphism<Self::Object>,
    ) -> Result<Morphism<Self::Object>> {
        if f.dom() != coproduct.left.dom() || g.dom() != coproduct.right.dom() {
            return Err(Error::Mismatch("copair components do not match the summands".into()));
        }
        if f.cod() != g.cod() {
            return Err(Error::Mismatch("copair components have different codomains".into()));
        }
        let mut table = vec![usize::MAX; self.size(&coproduct.object)];
        for (x, &i) in coproduct.left.map().iter().enumerate() {
            table[i] = f.map()[x];
        }
        for (x, &i) in coproduct.right.map().iter().enumerate() {
            table[i] = g.map()[x];
        }
        if table.contains(&usize::MAX) {
            return Err(Error::Invariant("coproduct injections are not jointly surjective".into()));
        }
        self.arrow(&coproduct.object, f.cod(), table)
    }

    /// Same domain, same table and same codomain labels: the two quotients
    /// are identical under canonical labelling.
    fn same_quotient(&self, a: &Morphism<Self::Object>, b: &Morphism<Self::Object>) -> bool {
        a.dom() == b.dom() && a.map() == b.map() && self.labels(a.cod()) == self.labels(b.cod())
    }

    /// Every arrow `dom -> cod`, refusing searches larger than `limit`.
    fn enumerate_homs(
        &self,
        dom: &Self::Object,
        cod: &Self::Object,
        limit: usize,
    ) -> Result<Vec<Morphism<Self::Object>>> {
        let n = self.size(dom);
        let candidates: Vec<Vec<usize>> =
            (0..n).map(|i| self.hom_candidates(dom, cod, i)).collect();
        let mut space: usize = 1;
        for c in &candidates {
            space = space.saturating_mul(c.len());
        }
        if space > limit {
            return Err(Error::BoundExceeded(format!(
                "{space} candidate maps exceed the enumeration limit {limit}"
            )));
        }
        let mut out = Vec::new();
        if candidates.iter().any(Vec::is_empty) {
            return Ok(out);
        }
        let mut digits = vec![0usize; n];
        loop {
            let map: Vec<usize> = digits.iter().zip(&candidates).map(|(&d, c)| c[d]).collect();
            if let Ok(f) = self.arrow(dom, cod, map) {
                out.push(f);
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < candidates[i].len() {
                    break;
                }
                digits[i] = 0;
            }
        }
    }
}

impl<O> Morphism<O> {
    /// Same table, different (but equal-as-elements) domain presentation.
    fn retarget(self, dom: O) -> Self {
        Morphism {
            dom,
            cod: self.cod,
            map: self.map,
        }
    }
}

/// Quotient tables for the equivalence relation generated by `f(a) ~ g(a)`
/// over all pairs, using union-find.
pub fn union_find_quotient<O>(size: usize, pairs: &[ArrowPair<O>]) -> (Vec<usize>, Vec<usize>) {
    let mut uf = UnionFind::new(size);
    for (f, g) in pairs {
        for (&a, &b) in f.map().iter().zip(g.map()) {
            uf.union(a, b);
        }
    }
    uf.classes()
}
