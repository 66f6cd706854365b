//! Finite oriented simplicial complexes.
//!
//! A complex is given by its maximal simplices over a vertex label space
//! `0..vertex_count`. Labels that occur in no simplex are allowed and are simply
//! not part of the face lattice, so several complexes can share one labelling
//! (a subcomplex keeps the labels of its parent).
//!
//! Orientation: the sign stored with a maximal simplex multiplies the
//! orientation given by its sorted vertex order. The boundary of `[v0, ..., vk]`
//! is `sum_i (-1)^i [v0, ..., ^vi, ..., vk]`. Face orderings are lexicographic on
//! sorted vertex tuples.

pub mod build;
pub mod format;
mod maps;
pub mod surgery;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::util::{all_faces, DisjointSets};

pub use maps::{Automorphism, SimplicialMap};

/// A simplex as a strictly increasing list of vertex labels.
pub type Simplex = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    dim: usize,
    vertex_count: usize,
    maximal: Vec<Simplex>,
    signs: Vec<i8>,
    faces: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    /// For every (dim-1)-face: the maximal simplices containing it, with the
    /// position of the vertex that has to be removed to get the face.
    cofaces: Vec<Vec<(usize, usize)>>,
    pure: bool,
}

impl SimplicialComplex {
    /// Validates and builds a complex from maximal simplices with orientation signs.
    pub fn new(vertex_count: usize, simplices: Vec<(Simplex, i8)>) -> Result<Self> {
        let mut list = Vec::with_capacity(simplices.len());
        for (mut s, sign) in simplices {
            if s.is_empty() {
                return Err(Error::Validation("empty simplex".into()));
            }
            if sign != 1 && sign != -1 {
                return Err(Error::Validation(format!("sign of {s:?} must be +1 or -1, got {sign}")));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::Validation(format!(
                    "simplex {s:?} uses vertex {v} but only {vertex_count} vertices are declared"
                )));
            }
            let unsorted = s.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!("simplex {unsorted:?} repeats a vertex")));
            }
            // fold the sorting permutation into the sign
            let sign = sign * crate::util::sort_parity(&unsorted);
            list.push((s, sign));
        }
        list.sort();
        for w in list.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Validation(format!("duplicate maximal simplex {:?}", w[0].0)));
            }
        }
        let (maximal, signs): (Vec<_>, Vec<_>) = list.into_iter().unzip();
        Self::from_sorted(vertex_count, maximal, signs)
    }

    /// The complex with no simplices.
    pub fn empty(vertex_count: usize) -> Self {
        Self {
            dim: 0,
            vertex_count,
            maximal: Vec::new(),
            signs: Vec::new(),
            faces: vec![Vec::new()],
            index: vec![HashMap::new()],
            cofaces: Vec::new(),
            pure: true,
        }
    }

    /// The smallest complex containing every given simplex. Signs are +1.
    pub fn generated_by(vertex_count: usize, simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for mut s in simplices {
            s.sort_unstable();
            for f in all_faces(&s) {
                all.insert(f);
            }
        }
        let mut proper: HashSet<Simplex> = HashSet::new();
        for s in &all {
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    proper.insert(f);
                }
            }
        }
        let maximal: Vec<(Simplex, i8)> =
            all.into_iter().filter(|s| !proper.contains(s)).map(|s| (s, 1)).collect();
        if maximal.is_empty() {
            return Ok(Self::empty(vertex_count));
        }
        Self::new(vertex_count, maximal)
    }

    fn from_sorted(vertex_count: usize, maximal: Vec<Simplex>, signs: Vec<i8>) -> Result<Self> {
        if maximal.is_empty() {
            return Ok(Self::empty(vertex_count));
        }
        let dim = maximal.iter().map(|s| s.len() - 1).max().unwrap_or(0);
        let pure = maximal.iter().all(|s| s.len() == dim + 1);
        let mut levels: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dim + 1];
        for s in &maximal {
            for f in all_faces(s) {
                levels[f.len() - 1].insert(f);
            }
        }
        if !pure {
            let maximal_set: HashSet<&Simplex> = maximal.iter().collect();
            for s in &maximal {
                let covered = levels.get(s.len()).is_some_and(|up| {
                    up.iter().any(|t| t.len() == s.len() + 1 && is_subset(s, t))
                });
                if covered && maximal_set.contains(s) {
                    return Err(Error::Validation(format!("simplex {s:?} is listed but is not maximal")));
                }
            }
        }
        let faces: Vec<Vec<Simplex>> = levels.into_iter().map(|l| l.into_iter().collect()).collect();
        let index: Vec<HashMap<Simplex, usize>> = faces
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut cofaces = Vec::new();
        if dim >= 1 {
            cofaces = vec![Vec::new(); faces[dim - 1].len()];
            for (t, s) in maximal.iter().enumerate() {
                if s.len() != dim + 1 {
                    continue;
                }
                for pos in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(pos);
                    cofaces[index[dim - 1][&f]].push((t, pos));
                }
            }
        }
        Ok(Self { dim, vertex_count, maximal, signs, faces, index, cofaces, pure })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    /// Maximal simplices in lexicographic order.
    pub fn maximal(&self) -> &[Simplex] {
        &self.maximal
    }

    pub fn sign(&self, top: usize) -> i8 {
        self.signs[top]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// All k-faces in lexicographic order (empty when k exceeds the dimension).
    pub fn faces(&self, k: usize) -> &[Simplex] {
        self.faces.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn face_index(&self, s: &[usize]) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.index.get(s.len() - 1)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.face_index(s).is_some()
    }

    /// Index of a maximal simplex, if `s` is one.
    pub fn maximal_index(&self, s: &[usize]) -> Option<usize> {
        self.maximal.binary_search_by(|m| m.as_slice().cmp(s)).ok()
    }

    /// Equality of the underlying simplex sets, ignoring orientation.
    pub fn same_simplices(&self, other: &SimplicialComplex) -> bool {
        self.maximal == other.maximal
    }

    pub fn f_vector(&self) -> Vec<usize> {
        if self.is_empty() {
            return Vec::new();
        }
        self.faces.iter().map(Vec::len).collect()
    }

    /// Vertices that occur in some simplex.
    pub fn vertices(&self) -> Vec<usize> {
        self.faces(0).iter().map(|s| s[0]).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Every (n-1)-face lies in one or two n-simplices (and the complex is pure).
    pub fn is_pseudomanifold(&self) -> bool {
        if self.is_empty() || !self.pure {
            return false;
        }
        self.dim == 0 || self.cofaces.iter().all(|c| c.len() == 1 || c.len() == 2)
    }

    /// Every (n-1)-face lies in exactly two n-simplices.
    pub fn is_closed_pseudomanifold(&self) -> bool {
        self.is_pseudomanifold() && (self.dim == 0 || self.cofaces.iter().all(|c| c.len() == 2))
    }

    /// Closed pseudomanifold whose signs induce opposite orientations on every
    /// interior (n-1)-face.
    pub fn is_coherently_oriented(&self) -> bool {
        self.is_closed_pseudomanifold()
            && self.cofaces.iter().all(|c| {
                let [(a, pa), (b, pb)] = [c[0], c[1]];
                self.incidence(a, pa) == -self.incidence(b, pb)
            })
    }

    /// The maximal simplices containing the (n-1)-face with the given index.
    pub fn facet_cofaces(&self, facet: usize) -> &[(usize, usize)] {
        &self.cofaces[facet]
    }

    /// Coefficient of the face obtained by dropping position `pos` in the
    /// oriented boundary of maximal simplex `top`.
    pub fn incidence(&self, top: usize, pos: usize) -> i64 {
        let alt = if pos % 2 == 0 { 1 } else { -1 };
        i64::from(self.signs[top]) * alt
    }

    /// Maximal simplices whose vertex set contains `s`.
    pub fn star(&self, s: &[usize]) -> Vec<usize> {
        (0..self.maximal.len()).filter(|&t| is_subset(s, &self.maximal[t])).collect()
    }

    /// Matrix of the boundary map from k-chains to (k-1)-chains.
    pub fn boundary_matrix(&self, k: usize) -> Result<IntMatrix> {
        if k < 1 || k > self.dim || self.is_empty() {
            return Err(Error::DimensionOutOfRange { k, n: self.dim });
        }
        let mut cols = Vec::with_capacity(self.faces[k].len());
        for s in &self.faces[k] {
            let mut col = BTreeMap::new();
            for pos in 0..s.len() {
                let mut f = s.clone();
                f.remove(pos);
                let row = self.index[k - 1][&f];
                col.insert(row, BigInt::from(if pos % 2 == 0 { 1 } else { -1 }));
            }
            cols.push(col);
        }
        Ok(IntMatrix::from_cols(self.faces[k - 1].len(), self.faces[k].len(), cols))
    }

    /// Link of a face: the simplices `t \ s` for maximal `t` containing `s`.
    pub fn link(&self, s: &[usize]) -> Result<SimplicialComplex> {
        let mut key = s.to_vec();
        key.sort_unstable();
        if !self.contains(&key) {
            return Err(Error::NotAFace(key));
        }
        let parts: Vec<Simplex> = self
            .star(&key)
            .into_iter()
            .map(|t| self.maximal[t].iter().copied().filter(|v| !key.contains(v)).collect::<Simplex>())
            .filter(|p| !p.is_empty())
            .collect();
        Self::generated_by(self.vertex_count, parts)
    }

    /// The subcomplex generated by a selection of maximal simplices. Keeps signs.
    pub fn restrict_to(&self, tops: &[usize]) -> SimplicialComplex {
        let list: Vec<(Simplex, i8)> = tops.iter().map(|&t| (self.maximal[t].clone(), self.signs[t])).collect();
        if list.is_empty() {
            return Self::empty(self.vertex_count);
        }
        Self::new(self.vertex_count, list).expect("restriction of a valid complex is valid")
    }

    /// The same simplices with all signs replaced.
    pub fn with_signs(&self, signs: Vec<i8>) -> Result<SimplicialComplex> {
        if signs.len() != self.maximal.len() {
            return Err(Error::DimensionMismatch("one sign per maximal simplex".into()));
        }
        let mut out = self.clone();
        out.signs = signs;
        Ok(out)
    }

    /// Connected components, each as a subcomplex on the same labels.
    pub fn components(&self) -> Vec<SimplicialComplex> {
        let mut ds = DisjointSets::new(self.vertex_count);
        for s in &self.maximal {
            for w in s.windows(2) {
                ds.union(w[0], w[1]);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (t, s) in self.maximal.iter().enumerate() {
            groups.entry(ds.find(s[0])).or_default().push(t);
        }
        let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
        comps.sort_by_key(|c| self.maximal[c[0]][0]);
        comps.iter().map(|c| self.restrict_to(c)).collect()
    }

    /// The component containing vertex `v`, if `v` belongs to the complex.
    pub fn component_containing(&self, v: usize) -> Option<SimplicialComplex> {
        self.components().into_iter().find(|c| c.contains(&[v]))
    }

    /// Every simplex of the complex whose vertices all lie in `other`'s vertex set
    /// is a simplex of `other`.
    pub fn is_full_subcomplex(&self, other: &SimplicialComplex) -> bool {
        let verts: HashSet<usize> = other.vertices().into_iter().collect();
        self.faces.iter().flatten().all(|s| !s.iter().all(|v| verts.contains(v)) || other.contains(s))
    }

    /// All faces of all dimensions.
    pub fn all_faces(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter().flatten()
    }

    /// Orients a closed pseudomanifold coherently, keeping the sign of the first
    /// maximal simplex in each component. Fails on non-orientable input.
    pub fn coherently_oriented(&self) -> Result<SimplicialComplex> {
        if !self.is_pseudomanifold() {
            return Err(Error::Validation("orientation needs a pseudomanifold".into()));
        }
        let t_count = self.maximal.len();
        let mut signs: Vec<Option<i8>> = vec![None; t_count];
        let mut adj: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); t_count];
        for c in &self.cofaces {
            if c.len() == 2 {
                adj[c[0].0].push((c[0].1, c[1].0, c[1].1));
                adj[c[1].0].push((c[1].1, c[0].0, c[0].1));
            }
        }
        for start in 0..t_count {
            if signs[start].is_some() {
                continue;
            }
            signs[start] = Some(self.signs[start]);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                let st = signs[t].unwrap();
                for &(pos, u, upos) in &adj[t] {
                    let alt = |p: usize| if p % 2 == 0 { 1i8 } else { -1 };
                    // induced orientations must be opposite
                    let want = -(st * alt(pos)) * alt(upos);
                    match signs[u] {
                        None => {
                            signs[u] = Some(want);
                            queue.push_back(u);
                        }
                        Some(s) if s != want => {
                            return Err(Error::Validation("complex is not orientable".into()));
                        }
                        _ => {}
                    }
                }
            }
        }
        self.with_signs(signs.into_iter().map(Option::unwrap).collect())
    }
}

pub(crate) fn is_subset(small: &[usize], big: &[usize]) -> bool {
    // both sorted
    let mut it = big.iter();
    small.iter().all(|v| it.by_ref().any(|w| w == v))
}

/// A list of oriented k-simplices of a parent complex.
///
/// The parent is not borrowed; [`OrientedSubcomplex::new`] validates against it
/// and the labels stay those of the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedSubcomplex {
    dim: usize,
    simplices: Vec<(Simplex, i8)>,
}

impl OrientedSubcomplex {
    pub fn new(parent: &SimplicialComplex, dim: usize, simplices: Vec<(Simplex, i8)>) -> Result<Self> {
        let mut list = Vec::with_capacity(simplices.len());
        for (s, sign) in simplices {
            if s.len() != dim + 1 {
                return Err(Error::Validation(format!("simplex {s:?} does not have dimension {dim}")));
            }
            if sign != 1 && sign != -1 {
                return Err(Error::Validation(format!("sign of {s:?} must be +1 or -1")));
            }
            let mut sorted = s.clone();
            sorted.sort_unstable();
            if !parent.contains(&sorted) {
                return Err(Error::NotAFace(sorted));
            }
            list.push((sorted, sign * crate::util::sort_parity(&s)));
        }
        list.sort();
        for w in list.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Validation(format!("duplicate simplex {:?} in subcomplex", w[0].0)));
            }
        }
        Ok(Self { dim, simplices: list })
    }

    /// All maximal simplices of a pure subcomplex with the signs they carry there.
    pub fn from_complex(parent: &SimplicialComplex, sub: &SimplicialComplex) -> Result<Self> {
        if !sub.is_pure() {
            return Err(Error::Validation("subcomplex is not pure".into()));
        }
        let list = sub.maximal().iter().cloned().zip(sub.signs().iter().copied()).collect();
        Self::new(parent, sub.dim(), list)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn simplices(&self) -> &[(Simplex, i8)] {
        &self.simplices
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    /// Signed boundary as a map from (k-1)-faces to nonzero integer coefficients.
    pub fn boundary(&self) -> BTreeMap<Simplex, i64> {
        let mut acc: BTreeMap<Simplex, i64> = BTreeMap::new();
        if self.dim == 0 {
            return acc;
        }
        for (s, sign) in &self.simplices {
            for pos in 0..s.len() {
                let mut f = s.clone();
                f.remove(pos);
                let alt = if pos % 2 == 0 { 1 } else { -1 };
                *acc.entry(f).or_default() += i64::from(*sign) * alt;
            }
        }
        acc.retain(|_, c| *c != 0);
        acc
    }

    pub fn is_cycle(&self) -> bool {
        self.boundary().is_empty()
    }

    /// Faces of the boundary of the underlying chain, as a set (signs dropped).
    pub fn boundary_support(&self) -> BTreeSet<Simplex> {
        self.boundary().into_keys().collect()
    }

    pub fn to_complex(&self, vertex_count: usize) -> SimplicialComplex {
        if self.simplices.is_empty() {
            return SimplicialComplex::empty(vertex_count);
        }
        SimplicialComplex::new(vertex_count, self.simplices.clone()).expect("validated subcomplex")
    }

    /// Same simplices with every sign flipped.
    pub fn reversed(&self) -> Self {
        Self { dim: self.dim, simplices: self.simplices.iter().map(|(s, g)| (s.clone(), -g)).collect() }
    }
}
