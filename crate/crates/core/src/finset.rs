//! Finite sets with the cartesian product as tensor.
//!
//! Elements are flat tuples of atom labels. The product concatenates tuples
//! in lexicographic order, so powers are strictly associative and the
//! one-element set holding the empty tuple, printed `()`, is a strict unit.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::engine::{run_chain, ChainOptions, MonoidObject, MonoidTruncation};
use crate::error::{Error, Result};
use crate::kernel::{
    union_find_quotient, ArrowPair, Backend, Capabilities, Coproduct, Morphism, PointedObject,
};

pub type Atom = Arc<str>;

/// Label of a tuple: atoms joined by commas, `()` for the empty tuple.
pub(crate) fn word_label(word: &[Atom]) -> String {
    if word.is_empty() {
        "()".to_string()
    } else {
        word.iter().map(|a| &**a).collect::<Vec<_>>().join(",")
    }
}

#[derive(Clone)]
pub struct FinSet(Arc<SetData>);

struct SetData {
    elements: Vec<Vec<Atom>>,
    arity: usize,
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.elements == other.0.elements
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 8;
        let labels: Vec<String> = self.0.elements.iter().take(SHOWN).map(|w| word_label(w)).collect();
        let more = if self.len() > SHOWN { " .." } else { "" };
        write!(f, "FinSet[{}]{{{}{}}}", self.len(), labels.join("; "), more)
    }
}

impl FinSet {
    /// A set of atoms. Labels must be distinct, non-empty and comma free.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seen = HashSet::new();
        let mut elements = Vec::new();
        for (i, label) in labels.into_iter().enumerate() {
            let label: String = label.into();
            if label.is_empty() || label.contains(',') {
                return Err(Error::InvalidObject(format!(
                    "element #{i}: label {label:?} must be non-empty and free of commas"
                )));
            }
            if !seen.insert(label.clone()) {
                return Err(Error::InvalidObject(format!(
                    "element #{i}: duplicate label {label:?}"
                )));
            }
            elements.push(vec![Atom::from(label)]);
        }
        Ok(FinSet(Arc::new(SetData { elements, arity: 1 })))
    }

    /// A set of tuples, all of the same length and pairwise distinct.
    pub fn from_words(words: Vec<Vec<Atom>>) -> Result<Self> {
        let arity = words.first().map_or(1, Vec::len);
        if let Some(i) = words.iter().position(|w| w.len() != arity) {
            return Err(Error::InvalidObject(format!(
                "element #{i} has {} components, expected {arity}",
                words[i].len()
            )));
        }
        let mut seen = HashSet::new();
        for (i, w) in words.iter().enumerate() {
            if !seen.insert(w) {
                return Err(Error::InvalidObject(format!("element #{i} is repeated")));
            }
        }
        Ok(Self::from_words_unchecked(words, arity))
    }

    fn from_words_unchecked(elements: Vec<Vec<Atom>>, arity: usize) -> Self {
        FinSet(Arc::new(SetData { elements, arity }))
    }

    pub fn len(&self) -> usize {
        self.0.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elements.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    pub fn word(&self, i: usize) -> &[Atom] {
        &self.0.elements[i]
    }

    pub fn words(&self) -> &[Vec<Atom>] {
        &self.0.elements
    }

    pub fn index_of(&self, word: &[Atom]) -> Option<usize> {
        self.0.elements.iter().position(|w| w.as_slice() == word)
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.0.elements.iter().position(|w| word_label(w) == label)
    }
}

/// Table of `f ⊗ g` when the tensor is a lexicographic product.
pub(crate) fn lexicographic_tensor_table(f: &[usize], g: &[usize], g_cod_size: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(f.len() * g.len());
    for &a in f {
        for &b in g {
            out.push(a * g_cod_size + b);
        }
    }
    out
}

/// Atoms for the two summands of a coproduct: each element flattened to one
/// atom, tagged by side when the two sides share a label.
pub(crate) fn coproduct_atoms(mut left: Vec<String>, mut right: Vec<String>) -> (Vec<String>, Vec<String>) {
    fn distinct(v: &[String]) -> bool {
        v.iter().collect::<HashSet<_>>().len() == v.len()
    }
    if !distinct(&left) {
        left = (0..left.len()).map(|i| format!("#{i}")).collect();
    }
    if !distinct(&right) {
        right = (0..right.len()).map(|i| format!("#{i}")).collect();
    }
    let left_set: HashSet<&String> = left.iter().collect();
    if right.iter().any(|r| left_set.contains(r)) {
        left = left.into_iter().map(|l| format!("inl.{l}")).collect();
        right = right.into_iter().map(|r| format!("inr.{r}")).collect();
    }
    (left, right)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FinSetBackend;

impl Backend for FinSetBackend {
    type Object = FinSet;

    fn name(&self) -> &'static str {
        "finset"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_coproducts: true,
            can_enumerate_homs: true,
            cocontinuous_tensor: true,
        }
    }

    fn size(&self, x: &FinSet) -> usize {
        x.len()
    }

    fn label(&self, x: &FinSet, i: usize) -> String {
        word_label(x.word(i))
    }

    fn unit(&self) -> FinSet {
        FinSet::from_words_unchecked(vec![Vec::new()], 0)
    }

    fn tensor_obj(&self, x: &FinSet, y: &FinSet) -> Result<FinSet> {
        if x.len() == 1 && x.arity() == 0 {
            return Ok(y.clone());
        }
        if y.len() == 1 && y.arity() == 0 {
            return Ok(x.clone());
        }
        let mut elements = Vec::with_capacity(x.len() * y.len());
        for a in x.words() {
            for b in y.words() {
                let mut w = Vec::with_capacity(a.len() + b.len());
                w.extend(a.iter().cloned());
                w.extend(b.iter().cloned());
                elements.push(w);
            }
        }
        Ok(FinSet::from_words_unchecked(elements, x.arity() + y.arity()))
    }

    fn tensor_table(
        &self,
        f: &Morphism<FinSet>,
        g: &Morphism<FinSet>,
        _dom: &FinSet,
        _cod: &FinSet,
    ) -> Vec<usize> {
        lexicographic_tensor_table(f.map(), g.map(), g.cod().len())
    }

    fn check_arrow(&self, _dom: &FinSet, _cod: &FinSet, _map: &[usize]) -> Result<()> {
        Ok(())
    }

    fn coequalize(
        &self,
        target: &FinSet,
        pairs: &[ArrowPair<FinSet>],
    ) -> Result<(FinSet, Vec<usize>)> {
        let (class_of, reps) = union_find_quotient(target.len(), pairs);
        if reps.len() == target.len() {
            return Ok((target.clone(), class_of));
        }
        let elements = reps.iter().map(|&r| target.word(r).to_vec()).collect();
        Ok((FinSet::from_words_unchecked(elements, target.arity()), class_of))
    }

    fn coproduct(&self, x: &FinSet, y: &FinSet) -> Result<Coproduct<FinSet>> {
        if x.is_empty() {
            let left = Morphism::new_unchecked(x.clone(), y.clone(), Vec::new());
            return Ok(Coproduct {
                object: y.clone(),
                left,
                right: self.identity(y),
            });
        }
        if y.is_empty() {
            let right = Morphism::new_unchecked(y.clone(), x.clone(), Vec::new());
            return Ok(Coproduct {
                object: x.clone(),
                left: self.identity(x),
                right,
            });
        }
        let (l, r) = coproduct_atoms(self.labels(x), self.labels(y));
        let elements = l
            .into_iter()
            .chain(r)
            .map(|s| vec![Atom::from(s)])
            .collect();
        let object = FinSet::from_words_unchecked(elements, 1);
        let left = Morphism::new_unchecked(x.clone(), object.clone(), (0..x.len()).collect());
        let right = Morphism::new_unchecked(
            y.clone(),
            object.clone(),
            (x.len()..x.len() + y.len()).collect(),
        );
        Ok(Coproduct {
            object,
            left,
            right,
        })
    }
}

impl FinSetBackend {
    /// The map sending every element of `dom` to the element labelled by `f(label)`.
    pub fn map_by_labels<F>(&self, dom: &FinSet, cod: &FinSet, f: F) -> Result<Morphism<FinSet>>
    where
        F: Fn(&str) -> String,
    {
        let mut table = Vec::with_capacity(dom.len());
        for i in 0..dom.len() {
            let target = f(&self.label(dom, i));
            let j = cod.index_of_label(&target).ok_or_else(|| {
                Error::InvalidArrow(format!("no element labelled {target:?} in the codomain"))
            })?;
            table.push(j);
        }
        self.arrow(dom, cod, table)
    }

    /// A monoid in sets given by its multiplication table over `labels`.
    pub fn table_monoid(
        &self,
        labels: &[String],
        table: &[Vec<usize>],
        unit: usize,
    ) -> Result<MonoidObject<FinSet>> {
        let carrier = FinSet::new(labels.iter().cloned())?;
        let n = carrier.len();
        let square = self.tensor_obj(&carrier, &carrier)?;
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidObject("multiplication table is not square".into()));
        }
        let mult = self.arrow(&square, &carrier, table.iter().flatten().copied().collect())?;
        let unit = self.arrow(&self.unit(), &carrier, vec![unit])?;
        MonoidObject::new(self, carrier, mult, unit)
    }
}

/// The free monoid on a finite set, as a stage-indexed truncation, with the
/// coproduct `Y = I + X` it was built from.
#[derive(Clone, Debug)]
pub struct FreeMonoidOnSet {
    pub generators: FinSet,
    pub pointed_coproduct: Coproduct<FinSet>,
    pub truncation: MonoidTruncation<FinSet>,
}

impl FreeMonoidOnSet {
    /// Words of the stage-`n` representatives with unit atoms removed.
    pub fn word_of(&self, object: &FinSet, i: usize) -> Vec<String> {
        let units: HashSet<String> = self
            .pointed_coproduct
            .left
            .map()
            .iter()
            .map(|&k| word_label(self.pointed_coproduct.object.word(k)))
            .collect();
        object
            .word(i)
            .iter()
            .filter(|a| !units.contains(&***a))
            .map(|a| a.to_string())
            .collect()
    }
}

/// `Y = I + X` pointed by the first injection.
pub fn pointed_on(backend: &FinSetBackend, x: &FinSet) -> Result<(PointedObject<FinSet>, Coproduct<FinSet>)> {
    let cop = backend.coproduct(&backend.unit(), x)?;
    let pointed = PointedObject::new(backend, cop.left.clone())?;
    Ok((pointed, cop))
}

pub fn free_monoid_on_set(
    backend: &FinSetBackend,
    x: &FinSet,
    options: &ChainOptions,
) -> Result<FreeMonoidOnSet> {
    let (pointed, cop) = pointed_on(backend, x)?;
    let chain = run_chain(backend, &pointed, options)?;
    let truncation = MonoidTruncation::build(backend, chain, options.parallel)?;
    Ok(FreeMonoidOnSet {
        generators: x.clone(),
        pointed_coproduct: cop,
        truncation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(labels: &[&str]) -> FinSet {
        FinSet::new(labels.iter().copied()).unwrap()
    }

    #[test]
    fn product_sizes_and_unit() {
        let b = FinSetBackend;
        let x = set(&["a", "b"]);
        let y = set(&["p", "q", "r"]);
        assert_eq!(b.tensor_obj(&x, &y).unwrap().len(), 6);
        assert_eq!(b.tensor_obj(&b.unit(), &x).unwrap(), x);
        assert_eq!(b.tensor_obj(&x, &b.unit()).unwrap(), x);
        assert_eq!(b.label(&b.unit(), 0), "()");
    }

    #[test]
    fn tensor_is_strictly_associative() {
        let b = FinSetBackend;
        let x = set(&["a", "b"]);
        let y = set(&["c"]);
        let z = set(&["d", "e"]);
        let l = b.tensor_obj(&b.tensor_obj(&x, &y).unwrap(), &z).unwrap();
        let r = b.tensor_obj(&x, &b.tensor_obj(&y, &z).unwrap()).unwrap();
        assert_eq!(l, r);
        assert_eq!(b.label(&l, 1), "a,c,e");
    }

    #[test]
    fn compose_functions() {
        let b = FinSetBackend;
        let x = set(&["0", "1"]);
        let f = b.arrow(&x, &x, vec![1, 1]).unwrap();
        let g = b.arrow(&x, &x, vec![0, 0]).unwrap();
        assert_eq!(b.compose(&g, &f).unwrap().map(), &[0, 0]);
        let id = b.identity(&x);
        assert!(b.equal_mor(&b.compose(&id, &f).unwrap(), &f).unwrap());
        assert!(b.equal_mor(&b.compose(&f, &id).unwrap(), &f).unwrap());
    }

    #[test]
    fn compose_rejects_mismatch() {
        let b = FinSetBackend;
        let x = set(&["0", "1"]);
        let y = set(&["0", "1", "2"]);
        let f = b.identity(&x);
        let g = b.identity(&y);
        assert!(matches!(b.compose(&g, &f), Err(Error::Mismatch(_))));
    }

    #[test]
    fn coequalizer_of_shift_pair_is_a_point() {
        let b = FinSetBackend;
        let two = set(&["0", "1"]);
        let three = set(&["0", "1", "2"]);
        let f = b.arrow(&two, &three, vec![0, 1]).unwrap();
        let g = b.arrow(&two, &three, vec![1, 2]).unwrap();
        let (q, epi) = b.coequalizer(&f, &g).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(epi.arrow().map(), &[0, 0, 0]);
        let (same, id) = b.coequalizer(&f, &f).unwrap();
        assert_eq!(same, three);
        assert!(b.equal_mor(id.arrow(), &b.identity(&three)).unwrap());
    }

    #[test]
    fn induce_through_point_quotient() {
        let b = FinSetBackend;
        let two = set(&["0", "1"]);
        let three = set(&["0", "1", "2"]);
        let f = b.arrow(&two, &three, vec![0, 1]).unwrap();
        let g = b.arrow(&two, &three, vec![1, 2]).unwrap();
        let (_, epi) = b.coequalizer(&f, &g).unwrap();
        let h = b.arrow(&three, &two, vec![1, 1, 1]).unwrap();
        let u = b.induce(&epi, &h).unwrap();
        assert_eq!(u.map(), &[1]);
        let bad = b.arrow(&three, &two, vec![0, 1, 1]).unwrap();
        assert_eq!(b.induce(&epi, &bad).unwrap_err(), Error::WitnessNotMerged { index: 0 });
    }

    #[test]
    fn coproduct_labels() {
        let b = FinSetBackend;
        let x = set(&["a", "b"]);
        let y = set(&["c", "d", "e"]);
        let c = b.coproduct(&x, &y).unwrap();
        assert_eq!(c.object.len(), 5);
        assert_eq!(b.labels(&c.object), vec!["a", "b", "c", "d", "e"]);
        let clash = b.coproduct(&x, &x).unwrap();
        assert_eq!(b.labels(&clash.object), vec!["inl.a", "inl.b", "inr.a", "inr.b"]);
        let empty = set(&[]);
        assert_eq!(b.coproduct(&empty, &y).unwrap().object, y);
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(FinSet::new(["a", "a"]).is_err());
        assert!(FinSet::new(["a,b"]).is_err());
    }

    #[test]
    fn power_iso_is_identity_table() {
        let b = FinSetBackend;
        let x = set(&["a", "b"]);
        let pi = b.power_iso(1, 1, &x).unwrap();
        assert_eq!(pi.map().len(), 4);
        assert!(b.is_iso(&pi));
        let pi0 = b.power_iso(0, 2, &x).unwrap();
        assert!(b.equal_mor(&pi0, &b.identity(&b.tensor_power(&x, 2).unwrap().object)).unwrap());
    }
}
