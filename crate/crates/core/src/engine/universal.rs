use super::{MonoidObject, MonoidTruncation};
use crate::error::{Error, Result};
use crate::kernel::{Backend, Morphism};

/// The stagewise extension `g_n: Z_n -> M` of a pointed map `f: Y -> M`,
/// with the outcome of every square checked along the way.
#[derive(Clone, Debug)]
pub struct UniversalReport<O> {
    pub maps: Vec<Morphism<O>>,
    pub squares_checked: usize,
    pub failures: Vec<String>,
}

impl<O> UniversalReport<O> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_pointed<B: Backend + ?Sized>(
    backend: &B,
    trunc: &MonoidTruncation<B::Object>,
    target: &MonoidObject<B::Object>,
    f: &Morphism<B::Object>,
) -> Result<()> {
    let pointed = &trunc.chain().pointed;
    if f.dom() != pointed.carrier() || f.cod() != target.carrier() {
        return Err(Error::Mismatch("the map must go from Y to the target monoid".into()));
    }
    let fy = backend.compose(f, pointed.point())?;
    if !backend.equal_mor(&fy, target.unit())? {
        return Err(Error::NotPointed("f does not send the point to the unit".into()));
    }
    Ok(())
}

/// Extends `f` to every computed stage by `g_n . q_n = μ_(n) . f^(⊗n)` and
/// checks compatibility with the connecting maps and the multiplications.
pub fn universal_map<B: Backend + ?Sized>(
    backend: &B,
    trunc: &MonoidTruncation<B::Object>,
    target: &MonoidObject<B::Object>,
    f: &Morphism<B::Object>,
) -> Result<UniversalReport<B::Object>> {
    check_pointed(backend, trunc, target, f)?;
    let chain = trunc.chain();
    let depth = trunc.depth();
    let mut maps = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let fn_ = backend.compose(&target.n_ary(backend, n)?, &backend.tensor_power_mor(f, n)?)?;
        maps.push(backend.induce(&chain.stages[n].epi, &fn_)?);
    }
    let mut report = UniversalReport {
        maps,
        squares_checked: 0,
        failures: Vec::new(),
    };
    for n in 1..=depth {
        let lhs = backend.compose(&report.maps[n], &chain.connecting[n - 1])?;
        report.squares_checked += 1;
        if !backend.equal_mor(&lhs, &report.maps[n - 1])? {
            report.failures.push(format!("compatibility with the connecting map into stage {n}"));
        }
    }
    for m in 0..=depth {
        for n in 0..=depth - m {
            let mu = trunc
                .mult(m, n)
                .ok_or_else(|| Error::IndexOutOfRange(format!("no multiplication {m},{n}")))?;
            let lhs = backend.compose(&report.maps[m + n], mu)?;
            let rhs = backend.compose(
                target.mult(),
                &backend.tensor_mor(&report.maps[m], &report.maps[n])?,
            )?;
            report.squares_checked += 1;
            if !backend.equal_mor(&lhs, &rhs)? {
                report.failures.push(format!("homomorphism square {m},{n}"));
            }
        }
    }
    Ok(report)
}

/// All families `h_n: Z_n -> M` with `h_1 = f`, `h_0 = η`, compatible with
/// the connecting maps and multiplicative on every `μ_(m,n)`, up to
/// `max_families`. Values forced by the constraints are propagated; the
/// remaining elements are enumerated, at most `limit` candidates per stage.
pub fn compatible_families<B: Backend + ?Sized>(
    backend: &B,
    trunc: &MonoidTruncation<B::Object>,
    target: &MonoidObject<B::Object>,
    f: &Morphism<B::Object>,
    max_families: usize,
    limit: usize,
) -> Result<Vec<Vec<Morphism<B::Object>>>> {
    check_pointed(backend, trunc, target, f)?;
    let mut found = Vec::new();
    let mut prefix = vec![target.unit().clone()];
    if trunc.depth() >= 1 {
        prefix.push(f.clone());
    }
    search(backend, trunc, target, &mut prefix, &mut found, max_families, limit)?;
    Ok(found)
}

fn search<B: Backend + ?Sized>(
    backend: &B,
    trunc: &MonoidTruncation<B::Object>,
    target: &MonoidObject<B::Object>,
    prefix: &mut Vec<Morphism<B::Object>>,
    found: &mut Vec<Vec<Morphism<B::Object>>>,
    max_families: usize,
    limit: usize,
) -> Result<()> {
    if found.len() >= max_families {
        return Ok(());
    }
    let n = prefix.len();
    if n > trunc.depth() {
        found.push(prefix.clone());
        return Ok(());
    }
    let chain = trunc.chain();
    let zn = &chain.stages[n].object;
    let m_obj = target.carrier();
    let size = backend.size(zn);
    let mut table: Vec<Option<usize>> = vec![None; size];
    let mut force = |idx: usize, value: usize| -> bool {
        match table[idx] {
            Some(v) => v == value,
            None => {
                table[idx] = Some(value);
                true
            }
        }
    };
    let j = &chain.connecting[n - 1];
    for (x, &y) in j.map().iter().enumerate() {
        if !force(y, prefix[n - 1].map()[x]) {
            return Ok(());
        }
    }
    for m in 1..n {
        let mu = trunc
            .mult(m, n - m)
            .ok_or_else(|| Error::IndexOutOfRange(format!("no multiplication {m},{}", n - m)))?;
        let rhs = backend.compose(target.mult(), &backend.tensor_mor(&prefix[m], &prefix[n - m])?)?;
        for (e, &z) in mu.map().iter().enumerate() {
            if !force(z, rhs.map()[e]) {
                return Ok(());
            }
        }
    }
    let free: Vec<usize> = (0..size).filter(|&i| table[i].is_none()).collect();
    let candidates: Vec<Vec<usize>> = free
        .iter()
        .map(|&i| backend.hom_candidates(zn, m_obj, i))
        .collect();
    let mut space: usize = 1;
    for c in &candidates {
        space = space.saturating_mul(c.len());
    }
    if space > limit {
        return Err(Error::BoundExceeded(format!(
            "{space} unconstrained extensions at stage {n} exceed the limit {limit}"
        )));
    }
    if candidates.iter().any(Vec::is_empty) {
        return Ok(());
    }
    let mut digits = vec![0usize; free.len()];
    loop {
        let mut full: Vec<usize> = table.iter().map(|v| v.unwrap_or(0)).collect();
        for (k, &i) in free.iter().enumerate() {
            full[i] = candidates[k][digits[k]];
        }
        if let Ok(h) = backend.arrow(zn, m_obj, full) {
            prefix.push(h);
            search(backend, trunc, target, prefix, found, max_families, limit)?;
            prefix.pop();
            if found.len() >= max_families {
                return Ok(());
            }
        }
        let mut k = free.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < candidates[k].len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::ChainOptions;
    use crate::finset::{free_monoid_on_set, FinSet, FinSetBackend};

    #[test]
    fn extends_to_counting_monoid() {
        // Z/3 under addition, with a -> 1 and b -> 2.
        let b = FinSetBackend;
        let labels: Vec<String> = ["0", "1", "2"].iter().map(|s| s.to_string()).collect();
        let table = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let target = b.table_monoid(&labels, &table, 0).unwrap();
        let x = FinSet::new(["a", "b"]).unwrap();
        let free = free_monoid_on_set(&b, &x, &ChainOptions::new(3)).unwrap();
        let y = free.truncation.chain().pointed.carrier().clone();
        let f = b
            .map_by_labels(&y, target.carrier(), |l| match l {
                "a" => "1".into(),
                "b" => "2".into(),
                _ => "0".into(),
            })
            .unwrap();
        let report = universal_map(&b, &free.truncation, &target, &f).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        let families = compatible_families(&b, &free.truncation, &target, &f, 4, 1 << 16).unwrap();
        assert_eq!(families.len(), 1);
        for (g, h) in report.maps.iter().zip(&families[0]) {
            assert_eq!(g.map(), h.map());
        }
    }

    #[test]
    fn rejects_unpointed_map() {
        let b = FinSetBackend;
        let labels: Vec<String> = ["0", "1"].iter().map(|s| s.to_string()).collect();
        let table = vec![vec![0, 1], vec![1, 0]];
        let target = b.table_monoid(&labels, &table, 0).unwrap();
        let x = FinSet::new(["a"]).unwrap();
        let free = free_monoid_on_set(&b, &x, &ChainOptions::new(2)).unwrap();
        let y = free.truncation.chain().pointed.carrier().clone();
        let f = b.arrow(&y, target.carrier(), vec![1, 1]).unwrap();
        assert!(matches!(
            universal_map(&b, &free.truncation, &target, &f),
            Err(Error::NotPointed(_))
        ));
    }
}
