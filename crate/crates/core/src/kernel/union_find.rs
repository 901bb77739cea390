/// Disjoint sets over `0..n` whose roots are always the minimum element of
/// their class, so class representatives come out canonical.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Minimum element of the class of `x`, compressing the path on the way.
    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merge the classes of `a` and `b`. Returns false if they already agreed.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }

    /// Class index of every element, plus the representative of each class.
    /// Classes are numbered in increasing order of their representatives.
    pub fn classes(&mut self) -> (Vec<usize>, Vec<usize>) {
        let n = self.parent.len();
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            let root = self.find(x);
            if root == x {
                class_of[x] = reps.len();
                reps.push(x);
            } else {
                class_of[x] = class_of[root];
            }
        }
        (class_of, reps)
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn pairs() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (1usize..12).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..12)))
    }

    proptest! {
        #[test]
        fn classes_are_labelled_by_minimum((n, edges) in pairs()) {
            let mut uf = UnionFind::new(n);
            for &(a, b) in &edges {
                uf.union(a, b);
            }
            let (class_of, reps) = uf.classes();
            for (c, &r) in reps.iter().enumerate() {
                prop_assert_eq!(class_of[r], c);
                prop_assert!((0..r).all(|x| class_of[x] != c));
            }
            prop_assert!(reps.windows(2).all(|w| w[0] < w[1]));
            for &(a, b) in &edges {
                prop_assert_eq!(class_of[a], class_of[b]);
            }
        }
    }
}
