use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// A finite group given by its multiplication table. Index 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyGroup {
    labels: Vec<String>,
    table: Vec<usize>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

impl CayleyGroup {
    /// Validates a table: square, in range, Latin, with an identity and
    /// associative. The identity is moved to index 0 if it sits elsewhere.
    pub fn from_table(rows: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidObject("a group table needs at least one row".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidObject(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidObject(format!("row {i} contains {bad}, out of range")));
            }
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(Error::InvalidObject(format!(
                    "{} labels for a table of order {n}",
                    l.len()
                )))
            }
            Some(l) => l,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(*l)) {
            return Err(Error::InvalidObject(format!("duplicate element label {dup:?}")));
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x))
            .ok_or_else(|| Error::InvalidObject("table has no identity element".into()))?;
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                if std::mem::replace(&mut row_seen[rows[i][j]], true) {
                    return Err(Error::InvalidObject(format!("row {i} repeats an element")));
                }
                if std::mem::replace(&mut col_seen[rows[j][i]], true) {
                    return Err(Error::InvalidObject(format!("column {i} repeats an element")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = rows[a][b];
                for c in 0..n {
                    if rows[ab][c] != rows[a][rows[b][c]] {
                        return Err(Error::InvalidObject(format!(
                            "table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        // swap the identity into position 0
        let swap = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[swap(a) * n + swap(b)] = swap(rows[a][b]);
            }
        }
        let mut labels = labels;
        labels.swap(0, e);
        Ok(Self::from_normalized(labels, table))
    }

    fn from_normalized(labels: Vec<String>, table: Vec<usize>) -> Self {
        let n = labels.len();
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n).find(|&b| table[a * n + b] == 0).expect("Latin square");
        }
        let mut g = CayleyGroup {
            labels,
            table,
            inverse,
            generators: Vec::new(),
        };
        g.generators = g.greedy_generators();
        g
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let n = self.order();
        let mut gens = Vec::new();
        let mut member = vec![false; n];
        member[0] = true;
        let mut elems = vec![0];
        for x in 1..n {
            if member[x] {
                continue;
            }
            gens.push(x);
            // close under right multiplication by every generator
            let mut queue: VecDeque<usize> = elems.iter().copied().collect();
            while let Some(a) = queue.pop_front() {
                for &s in &gens {
                    let b = self.mul(a, s);
                    if !member[b] {
                        member[b] = true;
                        elems.push(b);
                        queue.push_back(b);
                    }
                }
            }
        }
        gens
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order()).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
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

    pub fn direct_product(&self, other: &CayleyGroup) -> CayleyGroup {
        let (n, m) = (self.order(), other.order());
        let mut labels = Vec::with_capacity(n * m);
        for a in 0..n {
            for b in 0..m {
                labels.push(format!("({},{})", self.label(a), other.label(b)));
            }
        }
        let mut table = vec![0; n * m * n * m];
        for a in 0..n * m {
            for b in 0..n * m {
                let (a1, a2) = (a / m, a % m);
                let (b1, b2) = (b / m, b % m);
                table[a * n * m + b] = self.mul(a1, b1) * m + other.mul(a2, b2);
            }
        }
        Self::from_normalized(labels, table)
    }
}

/// Closure of a set of permutations under composition, identity first.
fn permutation_group(degree: usize, gens: &[Vec<usize>]) -> CayleyGroup {
    let id: Vec<usize> = (0..degree).collect();
    let mut elems = vec![id.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
    let mut queue = VecDeque::from([0usize]);
    // (p * q)(i) = p(q(i))
    let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&i| p[i]).collect() };
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let c = compose(&elems[i], g);
            if !index.contains_key(&c) {
                index.insert(c.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(c);
            }
        }
    }
    let n = elems.len();
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = index[&compose(&elems[a], &elems[b])];
        }
    }
    let labels = elems.iter().map(|p| cycle_notation(p)).collect();
    CayleyGroup::from_normalized(labels, table)
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x.to_string());
            x = p[x];
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

pub fn cyclic(n: usize) -> Result<CayleyGroup> {
    if n == 0 {
        return Err(Error::InvalidObject("cyclic group of order 0".into()));
    }
    let labels = (0..n).map(|i| i.to_string()).collect();
    let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
    Ok(CayleyGroup::from_normalized(labels, table))
}

/// Symmetries of the regular `n`-gon, of order `2n`.
pub fn dihedral(n: usize) -> Result<CayleyGroup> {
    if n == 0 {
        return Err(Error::InvalidObject("dihedral group of a 0-gon".into()));
    }
    // element (a, b) = r^a s^b at index b * n + a
    let order = 2 * n;
    let mut labels = Vec::with_capacity(order);
    for b in 0..2 {
        for a in 0..n {
            labels.push(match (a, b) {
                (0, 0) => "e".to_string(),
                (a, 0) => format!("r{a}"),
                (0, _) => "s".to_string(),
                (a, _) => format!("r{a}s"),
            });
        }
    }
    let mut table = vec![0; order * order];
    for x in 0..order {
        for y in 0..order {
            let (a, b) = (x % n, x / n);
            let (c, d) = (y % n, y / n);
            let c = if b == 1 { (n - c) % n } else { c };
            table[x * order + y] = ((b + d) % 2) * n + (a + c) % n;
        }
    }
    Ok(CayleyGroup::from_normalized(labels, table))
}

pub fn symmetric(degree: usize) -> Result<CayleyGroup> {
    match degree {
        0 | 1 => cyclic(1),
        2 => Ok(permutation_group(2, &[vec![1, 0]])),
        d if d <= 4 => {
            let transposition: Vec<usize> = (0..d).map(|i| if i < 2 { 1 - i } else { i }).collect();
            let rotation: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
            Ok(permutation_group(d, &[transposition, rotation]))
        }
        _ => Err(Error::InvalidObject(format!("symmetric groups up to S4 only, got S{degree}"))),
    }
}

pub fn alternating4() -> CayleyGroup {
    permutation_group(4, &[vec![1, 2, 0, 3], vec![0, 2, 3, 1]])
}

pub fn quaternion() -> CayleyGroup {
    // units 1, i, j, k; element s * 4 + u stands for (-1)^s u
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut table = vec![0; 64];
    for x in 0..8 {
        for y in 0..8 {
            let (s, t) = (x / 4, y / 4);
            let (sign, u) = UNIT[x % 4][y % 4];
            table[x * 8 + y] = ((s + t + sign) % 2) * 4 + u;
        }
    }
    CayleyGroup::from_normalized(labels, table)
}

/// A group by catalogue name: `Z<n>`, `D<n>` (order `2n`), `S3`, `S4`, `A4`,
/// `Q8`, `trivial`, or a direct product such as `Z2xZ2`.
pub fn named(name: &str) -> Result<CayleyGroup> {
    let name = name.trim();
    if name.contains('x') {
        let mut parts = name.split('x');
        let first = named(parts.next().unwrap_or_default())?;
        return parts.try_fold(first, |acc, p| Ok(acc.direct_product(&named(p)?)));
    }
    let number = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidObject(format!("unknown group {name:?}")))
    };
    match name {
        "trivial" | "1" => cyclic(1),
        "S3" => symmetric(3),
        "S4" => symmetric(4),
        "A4" => Ok(alternating4()),
        "Q8" => Ok(quaternion()),
        _ if name.starts_with('Z') => cyclic(number(&name[1..])?),
        _ if name.starts_with('C') => cyclic(number(&name[1..])?),
        _ if name.starts_with('D') => dihedral(number(&name[1..])?),
        _ => Err(Error::InvalidObject(format!("unknown group {name:?}"))),
    }
}

/// Every group of order at most 8, one per isomorphism class.
pub fn groups_up_to_order_8() -> Vec<(&'static str, CayleyGroup)> {
    [
        "Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "S3", "Z7", "Z8", "Z4xZ2", "Z2xZ2xZ2", "D4", "Q8",
    ]
    .into_iter()
    .map(|n| (n, named(n).expect("catalogue entry")))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_orders() {
        let expect = [
            ("Z1", 1),
            ("S3", 6),
            ("S4", 24),
            ("A4", 12),
            ("Q8", 8),
            ("D4", 8),
            ("D6", 12),
            ("Z2xZ2", 4),
            ("S3xZ2", 12),
        ];
        for (name, order) in expect {
            assert_eq!(named(name).unwrap().order(), order, "{name}");
        }
        assert!(named("X9").is_err());
    }

    #[test]
    fn abelian_flags() {
        assert!(named("Z4xZ2").unwrap().is_abelian());
        assert!(!named("S3").unwrap().is_abelian());
        assert!(!named("Q8").unwrap().is_abelian());
        assert!(!named("D4").unwrap().is_abelian());
    }

    #[test]
    fn element_orders_tell_groups_apart() {
        assert_eq!(named("Q8").unwrap().element_orders(), vec![1, 2, 4, 4, 4, 4, 4, 4]);
        assert_eq!(named("D4").unwrap().element_orders(), vec![1, 2, 2, 2, 2, 2, 4, 4]);
        assert_eq!(named("Z2xZ2").unwrap().element_orders(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn identity_moved_to_zero() {
        // Z/3 with the identity stored at index 2
        let rows = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = CayleyGroup::from_table(rows, None).unwrap();
        assert_eq!(g.label(0), "2");
        assert_eq!(g.mul(0, 1), 1);
    }

    #[test]
    fn rejects_non_groups() {
        let not_latin = vec![vec![0, 1], vec![1, 1]];
        assert!(CayleyGroup::from_table(not_latin, None).is_err());
        let identity_last = vec![vec![1, 0], vec![0, 1]];
        assert!(CayleyGroup::from_table(identity_last, None).is_ok());
        // a Latin square that is not associative (a loop of order 5)
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(CayleyGroup::from_table(loop5, None).is_err());
    }

    #[test]
    fn generators_generate() {
        for (name, g) in groups_up_to_order_8() {
            let mut member = vec![false; g.order()];
            member[0] = true;
            let mut stack = vec![0];
            while let Some(a) = stack.pop() {
                for &s in g.generators() {
                    let b = g.mul(a, s);
                    if !member[b] {
                        member[b] = true;
                        stack.push(b);
                    }
                }
            }
            assert!(member.iter().all(|&m| m), "{name}");
        }
    }
}
