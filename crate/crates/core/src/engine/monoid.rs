use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use super::ChainResult;
use crate::error::{Error, Result};
use crate::kernel::{Backend, Morphism};

/// `μ_(m,n): Z_m ⊗ Z_n -> Z_(m+n)`, induced along `q_m ⊗ q_n`.
pub fn stage_mult<B: Backend + ?Sized>(
    backend: &B,
    chain: &ChainResult<B::Object>,
    m: usize,
    n: usize,
) -> Result<Morphism<B::Object>> {
    if m + n > chain.depth() {
        return Err(Error::IndexOutOfRange(format!(
            "multiplication {m},{n} needs stage {} beyond depth {}",
            m + n,
            chain.depth()
        )));
    }
    let q = backend.tensor_epi(&chain.stages[m].epi, &chain.stages[n].epi)?;
    let pi = backend.power_iso(m, n, chain.pointed.carrier())?;
    let h = backend.compose(chain.stages[m + n].epi.arrow(), &pi)?;
    let mu = backend.induce(&q, &h)?;
    if !backend.equal_mor(&backend.compose(&mu, q.arrow())?, &h)? {
        return Err(Error::Invariant(format!("multiplication {m},{n} does not factor")));
    }
    Ok(mu)
}

/// The stages up to `N` with every multiplication `μ_(m,n)`, `m + n <= N`.
#[derive(Clone, Debug)]
pub struct MonoidTruncation<O> {
    chain: ChainResult<O>,
    mult: BTreeMap<(usize, usize), Morphism<O>>,
}

impl<O: Clone + PartialEq + fmt::Debug + Send + Sync> MonoidTruncation<O> {
    pub fn build<B: Backend<Object = O> + ?Sized>(
        backend: &B,
        chain: ChainResult<O>,
        parallel: bool,
    ) -> Result<Self> {
        let depth = chain.depth();
        let keys: Vec<(usize, usize)> = (0..=depth)
            .flat_map(|m| (0..=depth - m).map(move |n| (m, n)))
            .collect();
        let one = |&(m, n): &(usize, usize)| stage_mult(backend, &chain, m, n).map(|mu| ((m, n), mu));
        let mult: BTreeMap<_, _> = if parallel {
            keys.par_iter().map(one).collect::<Result<Vec<_>>>()?.into_iter().collect()
        } else {
            keys.iter().map(one).collect::<Result<_>>()?
        };
        Ok(MonoidTruncation { chain, mult })
    }

    pub fn chain(&self) -> &ChainResult<O> {
        &self.chain
    }

    pub fn depth(&self) -> usize {
        self.chain.depth()
    }

    pub fn mult(&self, m: usize, n: usize) -> Option<&Morphism<O>> {
        self.mult.get(&(m, n))
    }

    /// `η = j_1: I -> Z_1`.
    pub fn unit(&self) -> Option<&Morphism<O>> {
        self.chain.j(1)
    }

    fn mult_or_err(&self, m: usize, n: usize) -> Result<&Morphism<O>> {
        self.mult(m, n)
            .ok_or_else(|| Error::IndexOutOfRange(format!("no multiplication {m},{n}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    NaturalityRight,
    NaturalityLeft,
    Associativity,
    LeftUnit,
    RightUnit,
    ZeroUnit,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Law::NaturalityRight => "naturality (right)",
            Law::NaturalityLeft => "naturality (left)",
            Law::Associativity => "associativity",
            Law::LeftUnit => "left unit",
            Law::RightUnit => "right unit",
            Law::ZeroUnit => "unit stage",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawFailure {
    pub law: Law,
    pub indices: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct LawReport {
    pub checked: usize,
    pub failures: Vec<LawFailure>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, law: Law, indices: &[usize], outcome: Result<bool>) {
        self.checked += 1;
        let detail = match outcome {
            Ok(true) => return,
            Ok(false) => "the two composites differ".to_string(),
            Err(e) => e.to_string(),
        };
        self.failures.push(LawFailure {
            law,
            indices: indices.to_vec(),
            detail,
        });
    }
}

/// Checks naturality, associativity and both unit laws for every index
/// combination inside the truncation.
pub fn monoid_laws<B: Backend + ?Sized>(
    backend: &B,
    trunc: &MonoidTruncation<B::Object>,
) -> LawReport {
    let depth = trunc.depth();
    let chain = trunc.chain();
    let mut report = LawReport::default();
    let id = |n: usize| backend.identity(&chain.stages[n].object);
    let j = |n: usize| {
        chain
            .j(n)
            .cloned()
            .ok_or_else(|| Error::IndexOutOfRange(format!("no connecting map into stage {n}")))
    };

    for m in 0..=depth {
        for n in 0..=depth {
            if m + n + 1 > depth {
                continue;
            }
            let outcome = (|| {
                let lhs = backend.compose(
                    trunc.mult_or_err(m, n + 1)?,
                    &backend.tensor_mor(&id(m), &j(n + 1)?)?,
                )?;
                let rhs = backend.compose(&j(m + n + 1)?, trunc.mult_or_err(m, n)?)?;
                backend.equal_mor(&lhs, &rhs)
            })();
            report.record(Law::NaturalityRight, &[m, n], outcome);
            let outcome = (|| {
                let lhs = backend.compose(
                    trunc.mult_or_err(m + 1, n)?,
                    &backend.tensor_mor(&j(m + 1)?, &id(n))?,
                )?;
                let rhs = backend.compose(&j(m + n + 1)?, trunc.mult_or_err(m, n)?)?;
                backend.equal_mor(&lhs, &rhs)
            })();
            report.record(Law::NaturalityLeft, &[m, n], outcome);
        }
    }

    for m in 0..=depth {
        for n in 0..=depth - m {
            for p in 0..=depth - m - n {
                let outcome = (|| {
                    let lhs = backend.compose(
                        trunc.mult_or_err(m + n, p)?,
                        &backend.tensor_mor(trunc.mult_or_err(m, n)?, &id(p))?,
                    )?;
                    let rhs = backend.compose(
                        trunc.mult_or_err(m, n + p)?,
                        &backend.tensor_mor(&id(m), trunc.mult_or_err(n, p)?)?,
                    )?;
                    backend.equal_mor(&lhs, &rhs)
                })();
                report.record(Law::Associativity, &[m, n, p], outcome);
            }
        }
    }

    for n in 0..=depth {
        let outcome = (|| {
            let a = backend.equal_mor(trunc.mult_or_err(0, n)?, &id(n))?;
            let b = backend.equal_mor(trunc.mult_or_err(n, 0)?, &id(n))?;
            Ok(a && b)
        })();
        report.record(Law::ZeroUnit, &[n], outcome);
        if n + 1 > depth {
            continue;
        }
        let outcome = (|| {
            let eta = j(1)?;
            let lhs = backend.compose(trunc.mult_or_err(1, n)?, &backend.tensor_mor(&eta, &id(n))?)?;
            backend.equal_mor(&lhs, &j(n + 1)?)
        })();
        report.record(Law::LeftUnit, &[n], outcome);
        let outcome = (|| {
            let eta = j(1)?;
            let lhs = backend.compose(trunc.mult_or_err(n, 1)?, &backend.tensor_mor(&id(n), &eta)?)?;
            backend.equal_mor(&lhs, &j(n + 1)?)
        })();
        report.record(Law::RightUnit, &[n], outcome);
    }
    report
}

/// A monoid `(M, μ, η)` in a backend.
#[derive(Clone, Debug)]
pub struct MonoidObject<O> {
    carrier: O,
    mult: Morphism<O>,
    unit: Morphism<O>,
}

impl<O: Clone + PartialEq + fmt::Debug> MonoidObject<O> {
    /// Checks the types of `μ: M ⊗ M -> M` and `η: I -> M`; the laws are
    /// checked separately by [`MonoidObject::check_laws`].
    pub fn new<B: Backend<Object = O> + ?Sized>(
        backend: &B,
        carrier: O,
        mult: Morphism<O>,
        unit: Morphism<O>,
    ) -> Result<Self> {
        let square = backend.tensor_obj(&carrier, &carrier)?;
        if *mult.dom() != square || *mult.cod() != carrier {
            return Err(Error::Mismatch("multiplication must be M ⊗ M -> M".into()));
        }
        if *unit.dom() != backend.unit() || *unit.cod() != carrier {
            return Err(Error::Mismatch("unit must be I -> M".into()));
        }
        Ok(MonoidObject {
            carrier,
            mult,
            unit,
        })
    }

    pub fn carrier(&self) -> &O {
        &self.carrier
    }

    pub fn mult(&self) -> &Morphism<O> {
        &self.mult
    }

    pub fn unit(&self) -> &Morphism<O> {
        &self.unit
    }

    /// Associativity and the two unit laws.
    pub fn check_laws<B: Backend<Object = O> + ?Sized>(&self, backend: &B) -> Result<bool> {
        let id = backend.identity(&self.carrier);
        let assoc_l = backend.compose(&self.mult, &backend.tensor_mor(&self.mult, &id)?)?;
        let assoc_r = backend.compose(&self.mult, &backend.tensor_mor(&id, &self.mult)?)?;
        let unit_l = backend.compose(&self.mult, &backend.tensor_mor(&self.unit, &id)?)?;
        let unit_r = backend.compose(&self.mult, &backend.tensor_mor(&id, &self.unit)?)?;
        Ok(backend.equal_mor(&assoc_l, &assoc_r)?
            && backend.equal_mor(&unit_l, &id)?
            && backend.equal_mor(&unit_r, &id)?)
    }

    /// `M^n -> M`, bracketed to the left; `η` for `n = 0`.
    pub fn n_ary<B: Backend<Object = O> + ?Sized>(&self, backend: &B, n: usize) -> Result<Morphism<O>> {
        if n == 0 {
            return Ok(self.unit.clone());
        }
        let id = backend.identity(&self.carrier);
        let mut acc = id.clone();
        for _ in 1..n {
            acc = backend.compose(&self.mult, &backend.tensor_mor(&acc, &id)?)?;
        }
        Ok(acc)
    }

    /// `M^n -> M`, bracketed to the right.
    pub fn n_ary_right<B: Backend<Object = O> + ?Sized>(
        &self,
        backend: &B,
        n: usize,
    ) -> Result<Morphism<O>> {
        if n == 0 {
            return Ok(self.unit.clone());
        }
        let id = backend.identity(&self.carrier);
        let mut acc = id.clone();
        for _ in 1..n {
            acc = backend.compose(&self.mult, &backend.tensor_mor(&id, &acc)?)?;
        }
        Ok(acc)
    }
}

/// The colimit monoid on the stable stage `Z_s`, with multiplication
/// `Z_s ⊗ Z_s -> Z_2s ≅ Z_s`.
pub fn stable_monoid<B: Backend + ?Sized>(
    backend: &B,
    trunc: &MonoidTruncation<B::Object>,
) -> Result<MonoidObject<B::Object>> {
    let chain = trunc.chain();
    let s = chain
        .stabilized_at
        .ok_or_else(|| Error::NotStabilized(format!("no stable stage up to {}", chain.depth())))?;
    if 2 * s > chain.depth() {
        return Err(Error::NotStabilized(format!(
            "stable at {s} but stage {} was not computed",
            2 * s
        )));
    }
    let mu = backend.compose(&chain.leg(backend, 2 * s)?, trunc.mult_or_err(s, s)?)?;
    let eta = chain.leg(backend, 0)?;
    let monoid = MonoidObject::new(backend, chain.stages[s].object.clone(), mu, eta)?;
    if !monoid.check_laws(backend)? {
        return Err(Error::Invariant("colimit multiplication fails the monoid laws".into()));
    }
    Ok(monoid)
}
