//! Exact isomorphism search between simplicial complexes.

use std::collections::{BTreeMap, HashSet};

use crate::complex::{SimplicialComplex, SimplicialMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isomorphism {
    /// A vertex map sending every maximal simplex onto one of the target.
    Found(SimplicialMap),
    NotIsomorphic,
    /// The search used up its budget of candidate assignments.
    Indeterminate,
}

impl Isomorphism {
    pub fn is_found(&self) -> bool {
        matches!(self, Isomorphism::Found(_))
    }
}

pub const DEFAULT_BUDGET: usize = 2_000_000;

/// Per-vertex invariant used to prune candidates: star size, degree in the
/// 1-skeleton, and the f-vector of the link.
type Signature = (usize, usize, Vec<usize>);

struct Side {
    neighbors: Vec<Vec<usize>>,
    signature: Vec<Signature>,
    tops: HashSet<Vec<usize>>,
}

impl Side {
    fn new(k: &SimplicialComplex) -> Self {
        let n = k.vertex_count();
        let mut neighbors = vec![Vec::new(); n];
        for e in k.faces(1) {
            neighbors[e[0]].push(e[1]);
            neighbors[e[1]].push(e[0]);
        }
        let mut star = vec![0; n];
        for s in k.maximal() {
            for &v in s {
                star[v] += 1;
            }
        }
        let signature = (0..n)
            .map(|v| {
                let link = if k.contains(&[v]) { k.link(&[v]).map(|l| l.f_vector()).unwrap_or_default() } else { Vec::new() };
                (star[v], neighbors[v].len(), link)
            })
            .collect();
        let tops = k.maximal().iter().cloned().collect();
        Self { neighbors, signature, tops }
    }
}

/// Backtracking search for a simplicial isomorphism `a -> b`. Vertices of `a`
/// are assigned in breadth-first order so that each new vertex is adjacent to
/// an assigned one whenever possible; candidates are tried in increasing
/// label order, so the reported witness is the least one in that order.
pub fn isomorphic(a: &SimplicialComplex, b: &SimplicialComplex, budget: usize) -> Isomorphism {
    if a.dim() != b.dim() || a.f_vector() != b.f_vector() || a.is_pure() != b.is_pure() {
        return Isomorphism::NotIsomorphic;
    }
    let top_dims = |k: &SimplicialComplex| {
        let mut m: BTreeMap<usize, usize> = BTreeMap::new();
        for s in k.maximal() {
            *m.entry(s.len()).or_default() += 1;
        }
        m
    };
    if top_dims(a) != top_dims(b) {
        return Isomorphism::NotIsomorphic;
    }
    let sa = Side::new(a);
    let sb = Side::new(b);
    let mut sig_a: Vec<&Signature> = a.vertices().iter().map(|&v| &sa.signature[v]).collect();
    let mut sig_b: Vec<&Signature> = b.vertices().iter().map(|&v| &sb.signature[v]).collect();
    sig_a.sort();
    sig_b.sort();
    if sig_a != sig_b {
        return Isomorphism::NotIsomorphic;
    }

    // search order: BFS through each component
    let mut order = Vec::new();
    let mut placed = vec![false; a.vertex_count()];
    for start in a.vertices() {
        if placed[start] {
            continue;
        }
        placed[start] = true;
        let mut head = order.len();
        order.push(start);
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in &sa.neighbors[v] {
                if !placed[w] {
                    placed[w] = true;
                    order.push(w);
                }
            }
        }
    }
    let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // maximal simplices of `a` completed when their last vertex (in search order) is placed
    let mut completes: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); order.len()];
    for s in a.maximal() {
        let last = s.iter().map(|v| pos[v]).max().unwrap();
        completes[last].push(s);
    }
    let mut search = Search {
        a: &sa,
        b: &sb,
        order,
        completes,
        map: vec![usize::MAX; a.vertex_count()],
        used: vec![false; b.vertex_count()],
        b_vertices: b.vertices(),
        steps: 0,
        budget,
    };
    match search.extend(0) {
        Some(true) => {
            let map = search.map.iter().map(|&v| if v == usize::MAX { 0 } else { v }).collect();
            Isomorphism::Found(SimplicialMap::new(map))
        }
        Some(false) => Isomorphism::NotIsomorphic,
        None => Isomorphism::Indeterminate,
    }
}

struct Search<'s> {
    a: &'s Side,
    b: &'s Side,
    order: Vec<usize>,
    completes: Vec<Vec<&'s Vec<usize>>>,
    map: Vec<usize>,
    used: Vec<bool>,
    b_vertices: Vec<usize>,
    steps: usize,
    budget: usize,
}

impl Search<'_> {
    /// `Some(true)` when a full map was found, `Some(false)` when this branch
    /// is exhausted, `None` when out of budget.
    fn extend(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let v = self.order[depth];
        let anchor = self.a.neighbors[v].iter().copied().find(|&u| self.map[u] != usize::MAX);
        let mut candidates: Vec<usize> = match anchor {
            Some(u) => self.b.neighbors[self.map[u]].clone(),
            None => self.b_vertices.clone(),
        };
        candidates.sort_unstable();
        for c in candidates {
            if self.used[c] || self.b.signature[c] != self.a.signature[v] {
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return None;
            }
            if !self.consistent(v, c) {
                continue;
            }
            self.map[v] = c;
            self.used[c] = true;
            let ok = self.completes[depth].iter().all(|s| {
                let mut img: Vec<usize> = s.iter().map(|&x| self.map[x]).collect();
                img.sort_unstable();
                self.b.tops.contains(&img)
            });
            if ok {
                match self.extend(depth + 1) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.map[v] = usize::MAX;
            self.used[c] = false;
        }
        Some(false)
    }

    /// Adjacency to assigned vertices must be preserved in both directions.
    fn consistent(&self, v: usize, c: usize) -> bool {
        let mapped_nbrs = self.a.neighbors[v].iter().filter(|&&u| self.map[u] != usize::MAX);
        let mut count = 0;
        for &u in mapped_nbrs {
            if !self.b.neighbors[c].contains(&self.map[u]) {
                return false;
            }
            count += 1;
        }
        let image_nbrs = self.b.neighbors[c].iter().filter(|&&w| self.used[w]).count();
        count == image_nbrs
    }
}
