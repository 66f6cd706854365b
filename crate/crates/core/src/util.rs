/// Union-find over `0..n` with path halving and union by size.
#[derive(Clone, Debug)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Sign of the permutation that sorts `items` (all distinct).
pub(crate) fn sort_parity(items: &[usize]) -> i8 {
    let mut v = items.to_vec();
    let mut sign = 1i8;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

/// All nonempty subsets of a sorted simplex, as sorted vectors.
pub(crate) fn all_faces(simplex: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let k = simplex.len();
    (1u32..(1u32 << k)).map(move |mask| {
        simplex.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_of_small_permutations() {
        assert_eq!(sort_parity(&[0, 1, 2]), 1);
        assert_eq!(sort_parity(&[1, 0, 2]), -1);
        assert_eq!(sort_parity(&[2, 0, 1]), 1);
        assert_eq!(sort_parity(&[2, 1, 0]), -1);
    }

    #[test]
    fn union_find_merges() {
        let mut ds = DisjointSets::new(5);
        ds.union(0, 3);
        ds.union(3, 4);
        assert_eq!(ds.find(0), ds.find(4));
        assert_ne!(ds.find(1), ds.find(0));
    }
}
