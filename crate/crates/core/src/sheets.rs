//! Gluing labelled copies of the maximal simplices of a pseudomanifold.
//!
//! Every maximal simplex of the base gets `d` copies `(t, s)`. Across an
//! (n-1)-face `f` labelled `Shift(w)`, copy `s` on the negative side of `f` is
//! glued to copy `s + w (mod d)` on the positive side; faces labelled `Cut` are
//! not glued at all. The negative side of `f` is the maximal simplex in whose
//! oriented boundary `f` appears with coefficient -1.
//!
//! Cutting (d = 1 with some faces cut), cyclic branched covers and double covers
//! are all instances of this construction.

use std::collections::HashMap;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::util::{sort_parity, DisjointSets};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Gluing {
    Cut,
    Shift(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Sheeted {
    pub complex: SimplicialComplex,
    pub sheets: usize,
    /// Result label to base vertex.
    pub projection: Vec<usize>,
    /// Result maximal simplex to (base maximal simplex, sheet).
    pub top_of: Vec<(usize, usize)>,
    node_label: Vec<usize>,
    result_top: Vec<usize>,
    width: usize,
}

/// Negative and positive side of a facet with two cofaces, as (top, pos) pairs.
/// For an incoherently oriented pair the first coface is returned as negative.
pub(crate) fn sides(base: &SimplicialComplex, facet: usize) -> Option<((usize, usize), (usize, usize), bool)> {
    let c = base.facet_cofaces(facet);
    if c.len() != 2 {
        return None;
    }
    let (a, b) = (c[0], c[1]);
    let (ia, ib) = (base.incidence(a.0, a.1), base.incidence(b.0, b.1));
    let coherent = ia == -ib;
    if ia == -1 || !coherent {
        Some((a, b, coherent))
    } else {
        Some((b, a, coherent))
    }
}

pub(crate) fn glue_sheets(base: &SimplicialComplex, labels: &[Gluing], d: usize) -> Result<Sheeted> {
    assert!(d >= 1);
    if base.is_empty() || !base.is_pure() || base.dim() == 0 {
        return Err(Error::Validation("gluing needs a pure complex of positive dimension".into()));
    }
    let n = base.dim();
    let width = n + 1;
    let tops = base.maximal();
    let node = |t: usize, s: usize, pos: usize| (t * d + s) * width + pos;
    let facets = base.faces(n - 1);
    if labels.len() != facets.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} gluing labels for {} faces",
            labels.len(),
            facets.len()
        )));
    }
    let mut ds = DisjointSets::new(tops.len() * d * width);
    for (fi, f) in facets.iter().enumerate() {
        let cof = base.facet_cofaces(fi);
        if cof.len() > 2 {
            return Err(Error::NonManifold(format!("face {f:?} lies in {} maximal simplices", cof.len())));
        }
        let Gluing::Shift(w) = labels[fi] else { continue };
        let Some((neg, pos, coherent)) = sides(base, fi) else { continue };
        let w = w % d;
        if !coherent && (2 * w) % d != 0 {
            return Err(Error::Validation(format!("face {f:?} has no consistent sides for gluing")));
        }
        let at = |t: usize, v: usize| tops[t].iter().position(|&x| x == v).unwrap();
        for s in 0..d {
            for &v in f {
                ds.union(node(neg.0, s, at(neg.0, v)), node(pos.0, (s + w) % d, at(pos.0, v)));
            }
        }
    }

    // canonical labels: classes ordered by (base vertex, first (sheet, top) seen)
    let mut key: HashMap<usize, (usize, usize, usize)> = HashMap::new();
    for t in 0..tops.len() {
        for s in 0..d {
            for (pos, &v) in tops[t].iter().enumerate() {
                let r = ds.find(node(t, s, pos));
                let k = (v, s, t);
                key.entry(r).and_modify(|e| *e = (*e).min(k)).or_insert(k);
            }
        }
    }
    let mut roots: Vec<(usize, usize, usize, usize)> = key.iter().map(|(&r, &(v, s, t))| (v, s, t, r)).collect();
    roots.sort_unstable();
    let mut label_of_root: HashMap<usize, usize> = HashMap::with_capacity(roots.len());
    let mut projection = Vec::with_capacity(roots.len());
    for (label, &(v, _, _, r)) in roots.iter().enumerate() {
        label_of_root.insert(r, label);
        projection.push(v);
    }
    let mut node_label = vec![0; tops.len() * d * width];
    for (i, slot) in node_label.iter_mut().enumerate() {
        *slot = label_of_root[&ds.find(i)];
    }

    let mut simplices = Vec::with_capacity(tops.len() * d);
    for t in 0..tops.len() {
        for s in 0..d {
            let verts: Vec<usize> = (0..width).map(|p| node_label[node(t, s, p)]).collect();
            let mut sorted = verts.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::NonManifold(format!(
                    "copy {s} of simplex {:?} collapses (star of {:?})",
                    tops[t], tops[t]
                )));
            }
            simplices.push((sorted, base.sign(t) * sort_parity(&verts)));
        }
    }
    let complex = SimplicialComplex::new(projection.len(), simplices.clone()).map_err(|e| match e {
        Error::Validation(m) => Error::NonManifold(m),
        other => other,
    })?;
    let mut result_top = vec![0; tops.len() * d];
    let mut top_of = vec![(0, 0); tops.len() * d];
    for (i, (simplex, _)) in simplices.iter().enumerate() {
        let r = complex.maximal_index(simplex).unwrap();
        result_top[i] = r;
        top_of[r] = (i / d, i % d);
    }
    Ok(Sheeted { complex, sheets: d, projection, top_of, node_label, result_top, width })
}

impl Sheeted {
    /// Label of the copy of base vertex `v` in copy `s` of base top `t`.
    pub fn vertex(&self, base: &SimplicialComplex, t: usize, s: usize, v: usize) -> usize {
        let pos = base.maximal()[t].iter().position(|&x| x == v).expect("vertex not in simplex");
        self.node_label[(t * self.sheets + s % self.sheets) * self.width + pos]
    }

    /// Copy of a face of base top `t` in sheet `s`, as a sorted simplex.
    pub fn lift_face(&self, base: &SimplicialComplex, t: usize, s: usize, face: &[usize]) -> Simplex {
        let mut out: Simplex = face.iter().map(|&v| self.vertex(base, t, s, v)).collect();
        out.sort_unstable();
        out
    }

    /// Result top index of copy `s` of base top `t`.
    pub fn top(&self, t: usize, s: usize) -> usize {
        self.result_top[t * self.sheets + s % self.sheets]
    }

    /// The vertex map taking `(t, s, v)` to `(image_top(t), sheet_map(t, s), image_vertex(v))`,
    /// provided it is well defined.
    pub fn induced_vertex_map(
        &self,
        base: &SimplicialComplex,
        target: &Sheeted,
        image_top: impl Fn(usize) -> usize,
        sheet_map: impl Fn(usize, usize) -> usize,
        image_vertex: impl Fn(usize) -> usize,
    ) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.projection.len()];
        for (t, simplex) in base.maximal().iter().enumerate() {
            let u = image_top(t);
            for s in 0..self.sheets {
                let s2 = sheet_map(t, s);
                for &v in simplex {
                    let from = self.vertex(base, t, s, v);
                    let to = target.vertex(base, u, s2, image_vertex(v));
                    if map[from] == usize::MAX {
                        map[from] = to;
                    } else if map[from] != to {
                        return None;
                    }
                }
            }
        }
        Some(map)
    }
}
