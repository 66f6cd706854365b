//! Cutting along codimension-one subcomplexes, regluing, and barycentric
//! subdivision.

use std::collections::{BTreeSet, HashMap};

use super::{Automorphism, OrientedSubcomplex, Simplex, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::sheets::{glue_sheets, Gluing};
use crate::util::{sort_parity, DisjointSets};

/// `K` cut open along an oriented hypersurface piece `H0`.
///
/// The plus copy of a face of `H0` is the one seen from the maximal simplex
/// that induces the face's own orientation; the minus copy is seen from the
/// other side. Faces of `∂H0` are not duplicated.
#[derive(Clone, Debug)]
pub struct CutComplex {
    pub complex: SimplicialComplex,
    /// Vertex projection back to the labels of `K`.
    pub to_base: SimplicialMap,
    pub minus: SimplicialComplex,
    pub plus: SimplicialComplex,
    /// Identification of the minus copy with `H0`.
    pub minus_to_h0: SimplicialMap,
    /// Identification of the plus copy with `H0`.
    pub plus_to_h0: SimplicialMap,
}

/// Cuts `k` along a set of (n-1)-faces, given by index. No orientation is
/// needed; the result keeps the orientation of `k`.
pub(crate) fn cut_faces(k: &SimplicialComplex, facets: &BTreeSet<usize>) -> Result<crate::sheets::Sheeted> {
    let n = k.dim();
    let labels: Vec<Gluing> =
        (0..k.faces(n - 1).len()).map(|f| if facets.contains(&f) { Gluing::Cut } else { Gluing::Shift(0) }).collect();
    glue_sheets(k, &labels, 1)
}

pub fn cut_along(k: &SimplicialComplex, h0: &OrientedSubcomplex) -> Result<CutComplex> {
    if k.is_empty() || !k.is_pure() || k.dim() == 0 {
        return Err(Error::Validation("can only cut a pure complex of positive dimension".into()));
    }
    let n = k.dim();
    if !h0.is_empty() && h0.dim() + 1 != n {
        return Err(Error::NotAHypersurface(format!("piece has dimension {} in a {n}-complex", h0.dim())));
    }
    let mut facets = BTreeSet::new();
    let mut pieces = Vec::with_capacity(h0.len());
    for (f, sign) in h0.simplices() {
        let fi = k.face_index(f).ok_or_else(|| Error::NotAFace(f.clone()))?;
        let cof = k.facet_cofaces(fi);
        match cof.len() {
            2 => {}
            c if c > 2 => {
                return Err(Error::NonManifold(format!("face {f:?} lies in {c} maximal simplices")));
            }
            _ => return Err(Error::NotTwoSided(format!("face {f:?} lies on the boundary"))),
        }
        let (a, b) = (cof[0], cof[1]);
        let (ia, ib) = (k.incidence(a.0, a.1), k.incidence(b.0, b.1));
        let want = i64::from(*sign);
        let (plus, minus) = match (ia == want, ib == want) {
            (true, false) => (a, b),
            (false, true) => (b, a),
            _ => return Err(Error::NotTwoSided(format!("face {f:?} has no distinguished sides"))),
        };
        facets.insert(fi);
        pieces.push((f.clone(), *sign, plus.0, minus.0));
    }
    let sheeted = cut_faces(k, &facets)?;
    let mut plus_list = Vec::new();
    let mut minus_list = Vec::new();
    for (f, sign, plus, minus) in &pieces {
        let p = sheeted.lift_face(k, *plus, 0, f);
        let m = sheeted.lift_face(k, *minus, 0, f);
        if p == m {
            return Err(Error::NotTwoSided(format!("both sides of face {f:?} stay glued")));
        }
        // lifted vertices keep their relative order, so signs carry over
        plus_list.push((p, *sign));
        minus_list.push((m, *sign));
    }
    let count = sheeted.projection.len();
    let build = |list: Vec<(Simplex, i8)>| {
        if list.is_empty() {
            Ok(SimplicialComplex::empty(count))
        } else {
            SimplicialComplex::new(count, list)
        }
    };
    let to_base = SimplicialMap::new(sheeted.projection.clone());
    Ok(CutComplex {
        complex: sheeted.complex,
        plus: build(plus_list)?,
        minus: build(minus_list)?,
        minus_to_h0: to_base.clone(),
        plus_to_h0: to_base.clone(),
        to_base,
    })
}

impl CutComplex {
    /// Glues the two copies back along their identifications. Vertex labels
    /// of the result are renumbered consecutively in order of first label.
    pub fn reglue(&self) -> SimplicialComplex {
        let count = self.complex.vertex_count();
        let mut ds = DisjointSets::new(count);
        let mut by_target: HashMap<usize, usize> = HashMap::new();
        for v in self.plus.vertices() {
            by_target.insert(self.plus_to_h0.vertex(v), v);
        }
        for v in self.minus.vertices() {
            if let Some(&w) = by_target.get(&self.minus_to_h0.vertex(v)) {
                ds.union(v, w);
            }
        }
        let mut label = vec![usize::MAX; count];
        let mut next = 0;
        for v in 0..count {
            let r = ds.find(v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            label[v] = label[r];
        }
        let tops = self
            .complex
            .maximal()
            .iter()
            .zip(self.complex.signs())
            .map(|(s, &g)| {
                let img: Vec<usize> = s.iter().map(|&v| label[v]).collect();
                (img, g)
            })
            .collect();
        SimplicialComplex::new(next, tops).expect("regluing a cut complex gives a valid complex")
    }
}

/// The first barycentric subdivision. New vertex `i` is the barycenter of
/// `barycenters[i]`, a face of the original complex; faces are enumerated by
/// dimension and then lexicographically, so original vertices come first.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    pub barycenters: Vec<Simplex>,
    label: HashMap<Simplex, usize>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

impl Subdivision {
    pub fn of(k: &SimplicialComplex) -> Self {
        let barycenters: Vec<Simplex> = (0..=k.dim()).flat_map(|d| k.faces(d).iter().cloned()).collect();
        let label: HashMap<Simplex, usize> = barycenters.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut sub =
            Subdivision { complex: SimplicialComplex::empty(barycenters.len()), barycenters, label };
        let tops = sub.flags(k.maximal().iter().cloned().zip(k.signs().iter().copied()));
        sub.complex = if tops.is_empty() {
            SimplicialComplex::empty(sub.barycenters.len())
        } else {
            SimplicialComplex::new(sub.barycenters.len(), tops).expect("subdivision is valid")
        };
        sub
    }

    /// Oriented flags `b(v_{π0}) < b(v_{π0} v_{π1}) < ...` of each simplex.
    pub(crate) fn flags(&self, simplices: impl Iterator<Item = (Simplex, i8)>) -> Vec<(Simplex, i8)> {
        let mut out = Vec::new();
        for (s, sign) in simplices {
            for p in permutations(s.len()) {
                let mut chain = Vec::with_capacity(s.len());
                let mut face = Vec::with_capacity(s.len());
                for &i in &p {
                    face.push(s[i]);
                    let mut key = face.clone();
                    key.sort_unstable();
                    chain.push(self.label[&key]);
                }
                out.push((chain, sign * sort_parity(&p)));
            }
        }
        out
    }

    pub fn vertex_of(&self, face: &[usize]) -> Option<usize> {
        self.label.get(face).copied()
    }

    /// The subdivision of an oriented subcomplex of the original complex.
    pub fn subcomplex(&self, sub: &OrientedSubcomplex) -> OrientedSubcomplex {
        let list = self.flags(sub.simplices().iter().cloned());
        OrientedSubcomplex::new(&self.complex, sub.dim(), list).expect("subdivided subcomplex lies in the subdivision")
    }

    /// The subdivision of a (possibly impure) subcomplex given as a complex on
    /// the original labels.
    pub fn subcomplex_of(&self, sub: &SimplicialComplex) -> SimplicialComplex {
        let list = self.flags(sub.maximal().iter().cloned().zip(sub.signs().iter().copied()));
        if list.is_empty() {
            return SimplicialComplex::empty(self.barycenters.len());
        }
        SimplicialComplex::new(self.barycenters.len(), list).expect("subdivided subcomplex is valid")
    }

    /// The induced automorphism `b(τ) -> b(φ(τ))`.
    pub fn automorphism(&self, phi: &Automorphism) -> Automorphism {
        let perm = self.barycenters.iter().map(|s| self.label[&phi.image(s)]).collect();
        Automorphism::new(perm).expect("automorphism permutes faces")
    }

    pub fn vertex_map(&self, map: &SimplicialMap) -> SimplicialMap {
        SimplicialMap::new(self.barycenters.iter().map(|s| self.label[&map.image(s)]).collect())
    }
}

/// The subcomplexes are full in `k`: a face of `k` all of whose vertices
/// lie in one of them belongs to it.
pub fn is_full_in(k: &SimplicialComplex, sub: &SimplicialComplex) -> bool {
    k.is_full_subcomplex(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build;

    fn arc(k: &SimplicialComplex) -> OrientedSubcomplex {
        OrientedSubcomplex::new(k, 1, vec![(vec![0, 2], 1), (vec![1, 2], -1)]).unwrap()
    }

    #[test]
    fn cutting_a_sphere_along_an_arc_gives_a_disk() {
        let k = build::octahedron();
        let h0 = arc(&k);
        let cut = cut_along(&k, &h0).unwrap();
        let c = &cut.complex;
        assert_eq!(c.vertex_count(), 7);
        assert_eq!(c.maximal().len(), 8);
        assert_eq!(c.euler_characteristic(), 1);
        let boundary: Vec<usize> = (0..c.faces(1).len()).filter(|&f| c.facet_cofaces(f).len() == 1).collect();
        assert_eq!(boundary.len(), 4);
        assert_eq!(cut.plus.f_vector(), vec![3, 2]);
        assert_eq!(cut.minus.f_vector(), vec![3, 2]);
        let shared: BTreeSet<usize> = cut.plus.vertices().into_iter().collect();
        let common: Vec<usize> = cut.minus.vertices().into_iter().filter(|v| shared.contains(v)).collect();
        assert_eq!(common.len(), 2);
        assert!(cut.plus_to_h0.is_nondegenerate_simplicial(&cut.plus, &h0.to_complex(6)));
        // inclusion-exclusion: χ(M) + χ(H0) − χ(∂H0)
        assert_eq!(c.euler_characteristic(), 2 + 1 - 2);
    }

    #[test]
    fn regluing_recovers_the_sphere() {
        let k = build::octahedron();
        let cut = cut_along(&k, &arc(&k)).unwrap();
        let back = cut.reglue();
        assert_eq!(back.f_vector(), k.f_vector());
        assert!(back.is_coherently_oriented());
    }

    #[test]
    fn empty_cut_is_a_copy() {
        let k = build::octahedron();
        let empty = OrientedSubcomplex::new(&k, 1, Vec::new()).unwrap();
        let cut = cut_along(&k, &empty).unwrap();
        assert_eq!(cut.complex, k);
    }

    #[test]
    fn face_with_three_cofaces_is_rejected() {
        let k = SimplicialComplex::new(
            5,
            vec![(vec![0, 1, 2], 1), (vec![0, 1, 3], 1), (vec![0, 1, 4], 1)],
        )
        .unwrap();
        let h0 = OrientedSubcomplex::new(&k, 1, vec![(vec![0, 1], 1)]).unwrap();
        assert!(matches!(cut_along(&k, &h0), Err(Error::NonManifold(_))));
    }

    #[test]
    fn boundary_face_is_not_two_sided() {
        let k = SimplicialComplex::new(4, vec![(vec![0, 1, 2], 1), (vec![1, 2, 3], -1)]).unwrap();
        let h0 = OrientedSubcomplex::new(&k, 1, vec![(vec![0, 1], 1)]).unwrap();
        assert!(matches!(cut_along(&k, &h0), Err(Error::NotTwoSided(_))));
    }

    #[test]
    fn subdivision_of_the_octahedron() {
        let k = build::octahedron();
        let sd = Subdivision::of(&k);
        assert_eq!(sd.complex.f_vector(), vec![26, 72, 48]);
        assert_eq!(sd.complex.euler_characteristic(), 2);
        assert!(sd.complex.is_coherently_oriented());
        let eq = OrientedSubcomplex::new(
            &k,
            1,
            vec![(vec![0, 2], 1), (vec![2, 1], 1), (vec![1, 3], 1), (vec![3, 0], 1)],
        )
        .unwrap();
        let sub = sd.subcomplex(&eq);
        assert_eq!(sub.len(), 8);
        assert!(sub.is_cycle());
        let r = sd.automorphism(&build::octahedron_equator_reflection());
        assert!(r.is_automorphism_of(&sd.complex));
        assert!(r.compose(&r).is_identity());
    }

    #[test]
    fn subdivision_makes_subcomplexes_full() {
        // two vertices of a triangle that are not joined in the subcomplex
        let k = build::simplex_boundary(2);
        let pts = SimplicialComplex::new(4, vec![(vec![0], 1), (vec![1], 1)]).unwrap();
        assert!(!is_full_in(&k, &pts));
        let sd = Subdivision::of(&k);
        assert!(is_full_in(&sd.complex, &sd.subcomplex_of(&pts)));
    }
}
