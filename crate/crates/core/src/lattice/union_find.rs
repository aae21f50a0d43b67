/// Disjoint sets with union by size and path halving.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSet {
    pub fn new(len: usize) -> Self {
        assert!(len <= u32::MAX as usize, "too many elements");
        Self {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Puts every element back into its own set.
    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.size.fill(1);
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns the surviving root, or `None`
    /// if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        Some(ra)
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r] as usize
    }

    /// Sizes of all sets, largest first.
    pub fn set_sizes(&mut self) -> Vec<usize> {
        let mut sizes: Vec<usize> = (0..self.len())
            .filter(|&i| self.parent[i] as usize == i)
            .map(|i| self.size[i] as usize)
            .collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_merging() {
        let mut ds = DisjointSet::new(6);
        assert_eq!(ds.set_sizes(), vec![1; 6]);
        assert!(ds.union(0, 1).is_some());
        assert!(ds.union(2, 3).is_some());
        assert!(ds.union(1, 3).is_some());
        assert!(ds.union(0, 2).is_none());
        assert!(ds.same(0, 3));
        assert!(!ds.same(0, 4));
        assert_eq!(ds.set_size(2), 4);
        assert_eq!(ds.set_sizes(), vec![4, 1, 1]);
        ds.reset();
        assert!(!ds.same(0, 1));
    }

    proptest! {
        #[test]
        fn agrees_with_naive_labeling(n in 1usize..40, pairs in prop::collection::vec((0usize..40, 0usize..40), 0..60)) {
            let mut ds = DisjointSet::new(n);
            let mut label: Vec<usize> = (0..n).collect();
            for (a, b) in pairs.into_iter().filter(|(a, b)| *a < n && *b < n) {
                ds.union(a, b);
                let (la, lb) = (label[a], label[b]);
                for l in &mut label {
                    if *l == lb {
                        *l = la;
                    }
                }
            }
            for a in 0..n {
                for b in 0..n {
                    prop_assert_eq!(ds.same(a, b), label[a] == label[b]);
                }
            }
            prop_assert_eq!(ds.set_sizes().iter().sum::<usize>(), n);
        }
    }
}
