use super::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// A vertex assignment between two labellings. Labels the source does not use
/// are carried along but never inspected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(vertex_map: Vec<usize>) -> Self {
        Self { vertex_map }
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn vertex(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    /// Image of a simplex as a sorted vertex list (may have repeats collapsed).
    pub fn image(&self, s: &[usize]) -> Simplex {
        let mut out: Simplex = s.iter().map(|&v| self.vertex_map[v]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Every simplex of `source` maps onto a simplex of `target` of the same dimension.
    pub fn is_nondegenerate_simplicial(&self, source: &SimplicialComplex, target: &SimplicialComplex) -> bool {
        source.vertices().iter().all(|&v| v < self.vertex_map.len())
            && source.all_faces().all(|s| {
                let img = self.image(s);
                img.len() == s.len() && target.contains(&img)
            })
    }

    /// Every simplex of `source` maps onto some simplex of `target`.
    pub fn is_simplicial(&self, source: &SimplicialComplex, target: &SimplicialComplex) -> bool {
        source.vertices().iter().all(|&v| v < self.vertex_map.len())
            && source.all_faces().all(|s| target.contains(&self.image(s)))
    }
}

/// A vertex permutation of a label space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    perm: Vec<usize>,
}

impl Automorphism {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::Validation(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, v: usize) -> usize {
        self.perm[v]
    }

    pub fn image(&self, s: &[usize]) -> Simplex {
        let mut out: Simplex = s.iter().map(|&v| self.perm[v]).collect();
        out.sort_unstable();
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        assert_eq!(self.perm.len(), other.perm.len(), "label spaces differ");
        Automorphism { perm: other.perm.iter().map(|&v| self.perm[v]).collect() }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        Automorphism { perm: inv }
    }

    pub fn pow(&self, k: usize) -> Automorphism {
        let mut out = Automorphism::identity(self.perm.len());
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Order of the permutation restricted to the given vertices.
    pub fn order_on(&self, vertices: &[usize]) -> usize {
        let mut order = 1usize;
        for &v in vertices {
            let mut len = 1;
            let mut w = self.perm[v];
            while w != v {
                w = self.perm[w];
                len += 1;
            }
            order = num_integer::lcm(order, len);
        }
        order
    }

    /// Maps the complex onto itself, simplex by simplex.
    pub fn is_automorphism_of(&self, k: &SimplicialComplex) -> bool {
        self.perm.len() == k.vertex_count()
            && k.maximal().iter().all(|s| k.maximal_index(&self.image(s)).is_some())
    }

    /// Reverses orientation of none of the maximal simplices.
    pub fn preserves_orientation(&self, k: &SimplicialComplex) -> bool {
        k.maximal().iter().enumerate().all(|(t, s)| {
            let mapped: Vec<usize> = s.iter().map(|&v| self.perm[v]).collect();
            let Some(u) = k.maximal_index(&self.image(s)) else { return false };
            k.sign(t) * crate::util::sort_parity(&mapped) == k.sign(u)
        })
    }

    pub fn as_map(&self) -> SimplicialMap {
        SimplicialMap::new(self.perm.clone())
    }
}
