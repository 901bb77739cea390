//! Finite groups under the direct product.
//!
//! An object is a list of factors, each a Cayley table or a quotient of an
//! earlier object; its elements are mixed-radix indices with the first
//! factor most significant, so index 0 is the identity and powers are flat.
//! Monoids here are abelian groups, and the free monoid on a group pointed
//! by its identity is its abelianization.

mod cayley;

use std::fmt;
use std::sync::Arc;

pub use cayley::{
    alternating4, cyclic, dihedral, groups_up_to_order_8, named, quaternion, symmetric, CayleyGroup,
};

use crate::engine::{run_chain, stable_monoid, ChainOptions, MonoidObject, MonoidTruncation};
use crate::error::{Error, Result};
use crate::finset::lexicographic_tensor_table;
use crate::kernel::{ArrowPair, Backend, Capabilities, Morphism, PointedObject};

/// Quotients with at most this many elements keep a full table.
const QUOTIENT_TABLE_LIMIT: usize = 256;

#[derive(Clone)]
pub enum Factor {
    Table(Arc<CayleyGroup>),
    Quotient(Arc<QuotientGroup>),
}

/// `parent / N`, elements numbered by minimum coset representative.
pub struct QuotientGroup {
    parent: GroupObject,
    class_of: Vec<usize>,
    reps: Vec<usize>,
    inverse: Vec<usize>,
    table: Option<Vec<usize>>,
    generators: Vec<usize>,
}

impl QuotientGroup {
    fn new(parent: GroupObject, class_of: Vec<usize>, reps: Vec<usize>) -> Self {
        let n = reps.len();
        let table = (n <= QUOTIENT_TABLE_LIMIT).then(|| {
            let mut t = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = class_of[parent.mul(reps[a], reps[b])];
                }
            }
            t
        });
        let inverse = reps.iter().map(|&r| class_of[parent.inv(r)]).collect();
        let mut generators: Vec<usize> = parent
            .generators()
            .iter()
            .map(|&g| class_of[g])
            .filter(|&c| c != 0)
            .collect();
        generators.sort_unstable();
        generators.dedup();
        QuotientGroup {
            parent,
            class_of,
            reps,
            inverse,
            table,
            generators,
        }
    }

    fn order(&self) -> usize {
        self.reps.len()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b],
            None => self.class_of[self.parent.mul(self.reps[a], self.reps[b])],
        }
    }
}

impl Factor {
    fn order(&self) -> usize {
        match self {
            Factor::Table(g) => g.order(),
            Factor::Quotient(q) => q.order(),
        }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        match self {
            Factor::Table(g) => g.mul(a, b),
            Factor::Quotient(q) => q.mul(a, b),
        }
    }

    fn inv(&self, a: usize) -> usize {
        match self {
            Factor::Table(g) => g.inv(a),
            Factor::Quotient(q) => q.inverse[a],
        }
    }

    fn generators(&self) -> &[usize] {
        match self {
            Factor::Table(g) => g.generators(),
            Factor::Quotient(q) => &q.generators,
        }
    }

    fn label(&self, a: usize) -> String {
        match self {
            Factor::Table(g) => g.label(a).to_string(),
            Factor::Quotient(q) => format!("[{}]", q.parent.label(q.reps[a])),
        }
    }
}

impl PartialEq for Factor {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Factor::Table(a), Factor::Table(b)) => Arc::ptr_eq(a, b) || a == b,
            (Factor::Quotient(a), Factor::Quotient(b)) => {
                Arc::ptr_eq(a, b) || (a.parent == b.parent && a.class_of == b.class_of)
            }
            _ => false,
        }
    }
}

#[derive(Clone)]
pub struct GroupObject(Arc<GroupData>);

struct GroupData {
    factors: Vec<Factor>,
    orders: Vec<usize>,
    strides: Vec<usize>,
    order: usize,
    generators: Vec<usize>,
}

impl PartialEq for GroupObject {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.factors == other.0.factors
    }
}

impl fmt::Debug for GroupObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group[order {}, {} factors]", self.order(), self.0.factors.len())
    }
}

impl GroupObject {
    fn from_factors(factors: Vec<Factor>) -> Self {
        let orders: Vec<usize> = factors.iter().map(Factor::order).collect();
        let mut strides = vec![1; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1];
        }
        let order = orders.iter().product();
        let generators = factors
            .iter()
            .zip(&strides)
            .flat_map(|(f, &s)| f.generators().iter().map(move |&g| g * s))
            .collect();
        GroupObject(Arc::new(GroupData {
            factors,
            orders,
            strides,
            order,
            generators,
        }))
    }

    pub fn from_cayley(g: CayleyGroup) -> Self {
        Self::from_factors(vec![Factor::Table(Arc::new(g))])
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    /// A generating set, built from the generators of each factor.
    pub fn generators(&self) -> &[usize] {
        &self.0.generators
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let d = &self.0;
        let mut r = 0;
        for (i, f) in d.factors.iter().enumerate() {
            let (s, o) = (d.strides[i], d.orders[i]);
            r += f.mul((a / s) % o, (b / s) % o) * s;
        }
        r
    }

    pub fn inv(&self, a: usize) -> usize {
        let d = &self.0;
        let mut r = 0;
        for (i, f) in d.factors.iter().enumerate() {
            let (s, o) = (d.strides[i], d.orders[i]);
            r += f.inv((a / s) % o) * s;
        }
        r
    }

    pub fn label(&self, a: usize) -> String {
        let d = &self.0;
        match d.factors.len() {
            0 => "()".into(),
            1 => d.factors[0].label(a),
            _ => {
                let parts: Vec<String> = d
                    .factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| f.label((a / d.strides[i]) % d.orders[i]))
                    .collect();
                format!("({})", parts.join(","))
            }
        }
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders.
    pub fn element_orders(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    /// The same group as a single Cayley table.
    pub fn to_cayley(&self) -> CayleyGroup {
        let n = self.order();
        let rows = (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect();
        let labels = (0..n).map(|a| self.label(a)).collect();
        CayleyGroup::from_table(rows, Some(labels)).expect("group object tables are groups")
    }
}

/// Normal closure of `relators` in `group`, as a membership bitset.
fn normal_closure(group: &GroupObject, relators: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut closure = Subgroup::new(group);
    for r in relators {
        closure.add_generator(r);
    }
    // conjugating the generating set by generators of the group is enough
    let mut i = 0;
    while i < closure.gens.len() {
        let s = closure.gens[i];
        for &b in group.generators() {
            let c = group.mul(group.mul(b, s), group.inv(b));
            closure.add_generator(c);
        }
        i += 1;
    }
    closure.member
}

struct Subgroup<'a> {
    group: &'a GroupObject,
    member: Vec<bool>,
    elems: Vec<usize>,
    gens: Vec<usize>,
}

impl<'a> Subgroup<'a> {
    fn new(group: &'a GroupObject) -> Self {
        let mut member = vec![false; group.order()];
        member[0] = true;
        Subgroup {
            group,
            member,
            elems: vec![0],
            gens: Vec::new(),
        }
    }

    fn add_generator(&mut self, g: usize) {
        if self.member[g] {
            return;
        }
        self.gens.push(g);
        let old = self.elems.len();
        let mut frontier = Vec::new();
        for i in 0..old {
            let x = self.group.mul(self.elems[i], g);
            if !self.member[x] {
                self.member[x] = true;
                self.elems.push(x);
                frontier.push(x);
            }
        }
        while let Some(a) = frontier.pop() {
            for k in 0..self.gens.len() {
                let x = self.group.mul(a, self.gens[k]);
                if !self.member[x] {
                    self.member[x] = true;
                    self.elems.push(x);
                    frontier.push(x);
                }
            }
        }
    }
}

/// Coset numbering of `group` by a normal subgroup given as a bitset.
fn cosets(group: &GroupObject, normal: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let members: Vec<usize> = (0..normal.len()).filter(|&x| normal[x]).collect();
    let mut class_of = vec![usize::MAX; group.order()];
    let mut reps = Vec::with_capacity(group.order() / members.len());
    for x in 0..group.order() {
        if class_of[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &n in &members {
            class_of[group.mul(x, n)] = c;
        }
    }
    (class_of, reps)
}

/// The category of finite groups, with bounds on input and power sizes.
#[derive(Clone, Debug)]
pub struct FinGrpBackend {
    /// Largest input group accepted.
    pub max_order: usize,
    /// Largest object the tensor may produce.
    pub max_elements: usize,
}

impl Default for FinGrpBackend {
    fn default() -> Self {
        FinGrpBackend {
            max_order: 12,
            max_elements: 40_000,
        }
    }
}

impl FinGrpBackend {
    pub fn with_max_order(max_order: usize) -> Self {
        FinGrpBackend {
            max_order,
            ..Self::default()
        }
    }

    /// Accepts a group within the configured order bound.
    pub fn object(&self, g: CayleyGroup) -> Result<GroupObject> {
        if g.order() > self.max_order {
            return Err(Error::BoundExceeded(format!(
                "group of order {} exceeds the bound {}",
                g.order(),
                self.max_order
            )));
        }
        Ok(GroupObject::from_cayley(g))
    }

    /// `G` pointed by the unique map from the trivial group.
    pub fn pointed(&self, g: &GroupObject) -> Result<PointedObject<GroupObject>> {
        let point = self.arrow(&self.unit(), g, vec![0])?;
        PointedObject::new(self, point)
    }

    /// Monoid structure of an abelian group: its own multiplication.
    pub fn abelian_monoid(&self, g: &GroupObject) -> Result<MonoidObject<GroupObject>> {
        if !g.is_abelian() {
            return Err(Error::InvalidObject("only abelian groups are monoids in groups".into()));
        }
        let square = self.tensor_obj(g, g)?;
        let n = g.order();
        let mult = self.arrow(&square, g, (0..n * n).map(|k| g.mul(k / n, k % n)).collect())?;
        let unit = self.arrow(&self.unit(), g, vec![0])?;
        MonoidObject::new(self, g.clone(), mult, unit)
    }
}

impl Backend for FinGrpBackend {
    type Object = GroupObject;

    fn name(&self) -> &'static str {
        "fingrp"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_coproducts: false,
            can_enumerate_homs: true,
            cocontinuous_tensor: false,
        }
    }

    fn size(&self, x: &GroupObject) -> usize {
        x.order()
    }

    fn label(&self, x: &GroupObject, i: usize) -> String {
        x.label(i)
    }

    fn unit(&self) -> GroupObject {
        GroupObject::from_factors(Vec::new())
    }

    fn tensor_obj(&self, x: &GroupObject, y: &GroupObject) -> Result<GroupObject> {
        if x.0.factors.is_empty() {
            return Ok(y.clone());
        }
        if y.0.factors.is_empty() {
            return Ok(x.clone());
        }
        let order = x.order().saturating_mul(y.order());
        if order > self.max_elements {
            return Err(Error::BoundExceeded(format!(
                "product of order {order} exceeds the bound {}",
                self.max_elements
            )));
        }
        let factors = x.0.factors.iter().chain(&y.0.factors).cloned().collect();
        Ok(GroupObject::from_factors(factors))
    }

    fn tensor_table(
        &self,
        f: &Morphism<GroupObject>,
        g: &Morphism<GroupObject>,
        _dom: &GroupObject,
        _cod: &GroupObject,
    ) -> Vec<usize> {
        lexicographic_tensor_table(f.map(), g.map(), g.cod().order())
    }

    fn check_arrow(&self, dom: &GroupObject, cod: &GroupObject, map: &[usize]) -> Result<()> {
        if map[0] != 0 {
            return Err(Error::InvalidArrow("the identity is not sent to the identity".into()));
        }
        for x in 0..dom.order() {
            for &s in dom.generators() {
                if map[dom.mul(x, s)] != cod.mul(map[x], map[s]) {
                    return Err(Error::InvalidArrow(format!(
                        "not a homomorphism at ({}, {})",
                        dom.label(x),
                        dom.label(s)
                    )));
                }
            }
        }
        Ok(())
    }

    fn coequalize(
        &self,
        target: &GroupObject,
        pairs: &[ArrowPair<GroupObject>],
    ) -> Result<(GroupObject, Vec<usize>)> {
        // generators of the domain suffice: f(a) g(a)^-1 for generators a
        // normally generate the same subgroup as for all a
        let relators = pairs.iter().flat_map(|(f, g)| {
            f.dom()
                .generators()
                .iter()
                .map(move |&a| target.mul(f.map()[a], target.inv(g.map()[a])))
                .collect::<Vec<_>>()
        });
        let normal = normal_closure(target, relators);
        let (class_of, reps) = cosets(target, &normal);
        if reps.len() == target.order() {
            return Ok((target.clone(), class_of));
        }
        let quotient = QuotientGroup::new(target.clone(), class_of.clone(), reps);
        let object = GroupObject::from_factors(vec![Factor::Quotient(Arc::new(quotient))]);
        Ok((object, class_of))
    }

    fn enumerate_homs(
        &self,
        dom: &GroupObject,
        cod: &GroupObject,
        limit: usize,
    ) -> Result<Vec<Morphism<GroupObject>>> {
        let gens = dom.generators();
        let space = cod.order().checked_pow(gens.len() as u32).unwrap_or(usize::MAX);
        if space > limit {
            return Err(Error::BoundExceeded(format!(
                "{space} generator assignments exceed the enumeration limit {limit}"
            )));
        }
        let mut out = Vec::new();
        let mut images = vec![0usize; gens.len()];
        'assign: loop {
            if let Some(table) = extend_on_generators(dom, cod, gens, &images) {
                if let Ok(h) = self.arrow(dom, cod, table) {
                    out.push(h);
                }
            }
            for d in (0..images.len()).rev() {
                images[d] += 1;
                if images[d] < cod.order() {
                    continue 'assign;
                }
                images[d] = 0;
            }
            return Ok(out);
        }
    }
}

/// Extends a generator assignment along the Cayley graph; `None` when two
/// paths disagree.
fn extend_on_generators(
    dom: &GroupObject,
    cod: &GroupObject,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut table = vec![usize::MAX; dom.order()];
    table[0] = 0;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for (k, &s) in gens.iter().enumerate() {
            let y = dom.mul(x, s);
            let v = cod.mul(table[x], images[k]);
            if table[y] == usize::MAX {
                table[y] = v;
                stack.push(y);
            } else if table[y] != v {
                return None;
            }
        }
    }
    Some(table)
}

/// Runs the construction on `G` pointed by its identity.
pub fn abelianize(
    backend: &FinGrpBackend,
    g: &CayleyGroup,
    options: &ChainOptions,
) -> Result<MonoidTruncation<GroupObject>> {
    let object = backend.object(g.clone())?;
    let pointed = backend.pointed(&object)?;
    let chain = run_chain(backend, &pointed, options)?;
    MonoidTruncation::build(backend, chain, options.parallel)
}

/// The stable stage of an abelianization run as a group with its
/// multiplication, checked to be commutative.
pub fn stable_group(
    backend: &FinGrpBackend,
    trunc: &MonoidTruncation<GroupObject>,
) -> Result<MonoidObject<GroupObject>> {
    let monoid = stable_monoid(backend, trunc)?;
    let carrier = monoid.carrier();
    let n = carrier.order();
    for a in 0..n {
        for b in 0..n {
            if monoid.mult().apply(a * n + b) != monoid.mult().apply(b * n + a) {
                return Err(Error::Invariant("stable multiplication is not commutative".into()));
            }
        }
    }
    Ok(monoid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{insertion, monoid_laws};

    fn obj(b: &FinGrpBackend, name: &str) -> GroupObject {
        b.object(named(name).unwrap()).unwrap()
    }

    #[test]
    fn products() {
        let b = FinGrpBackend::default();
        let g = obj(&b, "S3");
        assert_eq!(b.tensor_obj(&g, &b.unit()).unwrap(), g);
        let z2 = obj(&b, "Z2");
        let v = b.tensor_obj(&z2, &z2).unwrap();
        assert_eq!(v.order(), 4);
        assert_eq!(v.element_orders(), vec![1, 2, 2, 2]);
        assert_eq!(b.tensor_obj(&g, &z2).unwrap().order(), 12);
    }

    #[test]
    fn coequalize_identity_and_inversion() {
        let b = FinGrpBackend::default();
        let z4 = obj(&b, "Z4");
        let id = b.identity(&z4);
        let inv = b.arrow(&z4, &z4, vec![0, 3, 2, 1]).unwrap();
        let (q, _) = b.coequalizer(&id, &inv).unwrap();
        assert_eq!(q.order(), 2);
        let (same, _) = b.coequalizer(&id, &id).unwrap();
        assert_eq!(same, z4);
    }

    #[test]
    fn insertion_pair_on_s3_squared() {
        let b = FinGrpBackend::default();
        let g = obj(&b, "S3");
        let p = b.pointed(&g).unwrap();
        let f = insertion(&b, &p, 2, 0).unwrap();
        let h = insertion(&b, &p, 2, 1).unwrap();
        // identifying (g, e) with (e, g) makes the two slots commute, so the
        // quotient is already the abelianization
        let (q, _) = b.coequalizer(&f, &h).unwrap();
        assert_eq!(q.order(), 2);
        // slot 1 puts the identity second: g -> (g, e)
        assert_eq!(h.apply(1), 6);
    }

    #[test]
    fn pushout_joins_kernels() {
        let b = FinGrpBackend::default();
        let v = obj(&b, "Z2xZ2");
        let id = b.identity(&v);
        let kill_a = b.arrow(&v, &v, vec![0, 0, 2, 2]).unwrap();
        let kill_b = b.arrow(&v, &v, vec![0, 1, 0, 1]).unwrap();
        let (_, qa) = b.coequalizer(&id, &kill_a).unwrap();
        let (_, qb) = b.coequalizer(&id, &kill_b).unwrap();
        let po = b.pushout(&qa, &qb).unwrap();
        assert_eq!(po.diagonal.cod().order(), 1);
        let same = b.pushout(&qa, &qa).unwrap();
        assert!(b.same_quotient(same.diagonal.arrow(), qa.arrow()));
    }

    #[test]
    fn rejects_non_homomorphisms() {
        let b = FinGrpBackend::default();
        let z4 = obj(&b, "Z4");
        assert!(b.arrow(&z4, &z4, vec![0, 2, 1, 3]).is_err());
        assert!(b.arrow(&z4, &z4, vec![1, 2, 3, 0]).is_err());
    }

    #[test]
    fn homs_by_generators() {
        let b = FinGrpBackend::default();
        let s3 = obj(&b, "S3");
        let z2 = obj(&b, "Z2");
        assert_eq!(b.enumerate_homs(&s3, &z2, 1000).unwrap().len(), 2);
        assert_eq!(b.enumerate_homs(&z2, &s3, 1000).unwrap().len(), 4);
    }

    #[test]
    fn s3_abelianizes_to_z2() {
        let b = FinGrpBackend::default();
        let t = abelianize(&b, &named("S3").unwrap(), &ChainOptions::new(5)).unwrap();
        assert_eq!(t.chain().stabilized_at, Some(2));
        let m = stable_group(&b, &t).unwrap();
        assert_eq!(m.carrier().order(), 2);
        assert!(monoid_laws(&b, &t).passed());
    }

    #[test]
    fn abelian_groups_are_fixed() {
        let b = FinGrpBackend::default();
        let t = abelianize(&b, &named("Z4xZ2").unwrap(), &ChainOptions::new(5)).unwrap();
        assert_eq!(t.chain().stabilized_at, Some(1));
        assert_eq!(stable_group(&b, &t).unwrap().carrier().element_orders(), vec![1, 2, 2, 2, 4, 4, 4, 4]);
    }

    #[test]
    fn order_bound() {
        let b = FinGrpBackend::default();
        assert!(matches!(b.object(named("S4").unwrap()), Err(Error::BoundExceeded(_))));
        let tight = FinGrpBackend {
            max_order: 12,
            max_elements: 100,
        };
        let g = tight.object(named("A4").unwrap()).unwrap();
        assert!(matches!(tight.tensor_obj(&g, &g), Err(Error::BoundExceeded(_))));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::oracles::brute_abelianization;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn stable_stage_is_the_abelianization(index in 0usize..14) {
            let b = FinGrpBackend::default();
            let (_, g) = groups_up_to_order_8().swap_remove(index);
            let (order, orders) = brute_abelianization(&g.rows());
            let t = abelianize(&b, &g, &ChainOptions::new(4)).unwrap();
            let m = stable_group(&b, &t).unwrap();
            prop_assert_eq!(m.carrier().order(), order);
            prop_assert_eq!(m.carrier().element_orders(), orders);
        }
    }
}
