//! Cyclic branched covers built from a Seifert chain.
//!
//! Each maximal simplex of the base gets `d` copies. The coefficient `w(f)` of
//! the chain on an (n-1)-face `f` says how the copies are glued across `f`:
//! copy `s` on the negative side meets copy `s + w(f)` on the positive side.
//! Going once around a face of the branch locus changes the copy by a unit,
//! so the `d` copies of every simplex meeting the locus close up along it.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::complex::surgery::Subdivision;
use crate::complex::{Automorphism, OrientedSubcomplex, Simplex, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::homology::Chain;
use crate::report::Report;
use crate::sheets::{glue_sheets, sides, Gluing, Sheeted};

#[derive(Clone, Debug)]
pub struct BranchedCover {
    pub total: SimplicialComplex,
    /// The base the cover was glued over (subdivided when the input required it).
    pub base: SimplicialComplex,
    pub degree: usize,
    pub projection: SimplicialMap,
    /// Branch locus in the base, on base labels.
    pub sigma: OrientedSubcomplex,
    /// Its preimage in the total complex.
    pub branch: OrientedSubcomplex,
    pub deck: Automorphism,
    /// Gluing labels after gauge fixing, one per (n-1)-face of the base.
    pub cocycle: Vec<usize>,
    /// Gluing labels read off the Seifert chain.
    pub seifert_labels: Vec<usize>,
    /// Sheet offset of each base maximal simplex introduced by gauge fixing.
    pub potential: Vec<usize>,
    pub subdivision: Option<Subdivision>,
    pub(crate) sheets: Sheeted,
}

/// Maximal simplices around each (n-2)-face, indexed like `faces(n - 2)`.
fn ridge_stars(m: &SimplicialComplex) -> Vec<Vec<usize>> {
    let n = m.dim();
    let mut out = vec![Vec::new(); m.faces(n - 2).len()];
    for (t, s) in m.maximal().iter().enumerate() {
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                let tau: Simplex = s.iter().enumerate().filter(|&(p, _)| p != i && p != j).map(|(_, &v)| v).collect();
                out[m.face_index(&tau).unwrap()].push(t);
            }
        }
    }
    out
}

/// Sheet change along each closed walk around an (n-2)-face (one walk per
/// circle of its link).
fn holonomies(m: &SimplicialComplex, labels: &[usize], d: usize, tau: &[usize], star: &[usize]) -> Vec<usize> {
    let mut seen: HashSet<usize> = HashSet::new();
    let mut out = Vec::new();
    let facet_of = |t: usize, drop: usize| -> (usize, usize) {
        let s = &m.maximal()[t];
        let pos = s.iter().position(|&v| v == drop).unwrap();
        let mut f = s.clone();
        f.remove(pos);
        (m.face_index(&f).unwrap(), pos)
    };
    for &start in star {
        if seen.contains(&start) {
            continue;
        }
        let extra: Vec<usize> = m.maximal()[start].iter().copied().filter(|v| !tau.contains(v)).collect();
        let mut t = start;
        let mut leave = extra[0];
        let mut h = 0usize;
        loop {
            seen.insert(t);
            let (f, pos) = facet_of(t, leave);
            let w = labels[f] % d;
            h = if m.incidence(t, pos) == -1 { (h + w) % d } else { (h + d - w) % d };
            let Some(&(u, upos)) = m.facet_cofaces(f).iter().find(|&&(u, _)| u != t) else { break };
            // entered u through the face missing `entered`; leave through the
            // other face of u containing tau
            let entered = m.maximal()[u][upos];
            leave = *m.maximal()[u].iter().find(|v| !tau.contains(v) && **v != entered).unwrap();
            t = u;
            if t == start {
                break;
            }
        }
        out.push(h);
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    num_integer::gcd(a, b)
}

/// Reads the gluing labels off a Seifert chain and checks them.
pub fn transfer_cocycle(m: &SimplicialComplex, sigma: &OrientedSubcomplex, w: &Chain, d: usize) -> Result<Vec<usize>> {
    if d < 1 {
        return Err(Error::InvalidDegree(d as i64));
    }
    let n = m.dim();
    if n < 2 {
        return Err(Error::DimensionMismatch("base must have dimension at least 2".into()));
    }
    if !w.is_empty() && w.degree() + 1 != n {
        return Err(Error::InvalidSeifertChain(format!("chain has degree {}, expected {}", w.degree(), n - 1)));
    }
    w.check_in(m).map_err(|e| Error::InvalidSeifertChain(e.to_string()))?;
    let class = crate::homology::fundamental_class(sigma)?;
    let defect = w.boundary().sub(&class).reduce_mod(d as u64);
    if let Some((face, x)) = defect.terms().next() {
        return Err(Error::InvalidSeifertChain(format!(
            "boundary differs from the branch locus by {x} on {face:?} mod {d}"
        )));
    }
    let labels: Vec<usize> = m.faces(n - 1).iter().map(|f| w.coefficient(f).rem_euclid(d as i64) as usize).collect();
    let on_sigma: HashSet<&Simplex> = sigma.simplices().iter().map(|(s, _)| s).collect();
    for (tau, star) in m.faces(n - 2).iter().zip(ridge_stars(m)) {
        for h in holonomies(m, &labels, d, tau, &star) {
            let ok = if on_sigma.contains(tau) { gcd(h, d) == 1 } else { h == 0 };
            if !ok {
                return Err(Error::InvalidSeifertChain(format!("holonomy {h} mod {d} around {tau:?}")));
            }
        }
    }
    Ok(labels)
}

/// Sheet offsets making the labels vanish on a spanning tree of the dual
/// graph, grown from maximal simplex 0 and preferring faces labelled 0.
fn gauge(m: &SimplicialComplex, labels: &[usize], d: usize) -> (Vec<usize>, Vec<usize>) {
    let n = m.dim();
    let tops = m.maximal().len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); tops];
    for f in 0..m.faces(n - 1).len() {
        for &(t, _) in m.facet_cofaces(f) {
            adj[t].push(f);
        }
    }
    let mut phi: Vec<Option<usize>> = vec![None; tops];
    let mut dist = vec![usize::MAX; tops];
    let mut done = vec![false; tops];
    for root in 0..tops {
        if phi[root].is_some() {
            continue;
        }
        phi[root] = Some(0);
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(t) = queue.pop_front() {
            if done[t] {
                continue;
            }
            done[t] = true;
            let pt = phi[t].unwrap();
            for &f in &adj[t] {
                let Some((neg, pos, _)) = sides(m, f) else { continue };
                let (u, value) =
                    if neg.0 == t { (pos.0, (pt + d - labels[f] % d) % d) } else { (neg.0, (pt + labels[f]) % d) };
                let cost = usize::from(labels[f] % d != 0);
                if done[u] || dist[t] + cost >= dist[u] {
                    continue;
                }
                dist[u] = dist[t] + cost;
                phi[u] = Some(value);
                if cost == 0 {
                    queue.push_front(u);
                } else {
                    queue.push_back(u);
                }
            }
        }
    }
    let phi: Vec<usize> = phi.into_iter().map(Option::unwrap).collect();
    let gauged = (0..labels.len())
        .map(|f| match sides(m, f) {
            Some((neg, pos, _)) => (labels[f] + phi[pos.0] + d - phi[neg.0]) % d,
            None => labels[f] % d,
        })
        .collect();
    (phi, gauged)
}

fn subdivide_chain(sd: &Subdivision, w: &Chain) -> Chain {
    let flags = sd.flags(w.terms().map(|(s, x)| (s.clone(), if x > 0 { 1 } else { -1 })));
    let mut terms = Vec::with_capacity(flags.len());
    // flags come in blocks of (k+1)! per simplex, in term order
    let block: usize = (1..=w.degree() + 1).product();
    for (i, (s, sign)) in flags.into_iter().enumerate() {
        let x = w.terms().nth(i / block).unwrap().1.abs();
        terms.push((s, x * i64::from(sign)));
    }
    Chain::from_terms(w.degree(), terms).expect("subdivided chain is valid")
}

fn check_base(m: &SimplicialComplex, sigma: &OrientedSubcomplex, d: usize) -> Result<()> {
    if d < 1 {
        return Err(Error::InvalidDegree(d as i64));
    }
    if !m.is_closed_pseudomanifold() {
        return Err(Error::Validation("base must be a closed pseudomanifold".into()));
    }
    if !m.is_coherently_oriented() {
        return Err(Error::Validation("base must be coherently oriented".into()));
    }
    if m.dim() < 2 || (!sigma.is_empty() && sigma.dim() + 2 != m.dim()) {
        return Err(Error::DimensionMismatch("branch locus must have codimension two".into()));
    }
    Ok(())
}

/// Builds the d-fold cyclic cover branched along `sigma` from a Seifert chain
/// `w` with `∂w ≡ [sigma] (mod d)`. If the locus or the support of `w` is not
/// a full subcomplex, everything is subdivided once first.
pub fn build_cyclic_cover(m: &SimplicialComplex, sigma: &OrientedSubcomplex, d: usize, w: &Chain) -> Result<BranchedCover> {
    check_base(m, sigma, d)?;
    let support = SimplicialComplex::generated_by(m.vertex_count(), w.terms().map(|(s, _)| s.clone()))?;
    let full = m.is_full_subcomplex(&sigma.to_complex(m.vertex_count())) && m.is_full_subcomplex(&support);
    if full {
        let labels = transfer_cocycle(m, sigma, w, d)?;
        assemble(m.clone(), sigma.clone(), d, labels, None)
    } else {
        let sd = Subdivision::of(m);
        let m2 = sd.complex.clone();
        let s2 = sd.subcomplex(sigma);
        let w2 = subdivide_chain(&sd, w);
        let labels = transfer_cocycle(&m2, &s2, &w2, d)?;
        assemble(m2, s2, d, labels, Some(sd))
    }
}

/// Glues with the given labels as they are: no holonomy check, no
/// subdivision. Meant for testing the verifier.
pub fn build_with_cocycle(m: &SimplicialComplex, sigma: &OrientedSubcomplex, d: usize, labels: Vec<usize>) -> Result<BranchedCover> {
    check_base(m, sigma, d)?;
    if labels.len() != m.faces(m.dim() - 1).len() {
        return Err(Error::DimensionMismatch("one label per (n-1)-face".into()));
    }
    assemble(m.clone(), sigma.clone(), d, labels, None)
}

fn assemble(
    m: SimplicialComplex,
    sigma: OrientedSubcomplex,
    d: usize,
    labels: Vec<usize>,
    subdivision: Option<Subdivision>,
) -> Result<BranchedCover> {
    let (potential, cocycle) = gauge(&m, &labels, d);
    let glue: Vec<Gluing> = cocycle.iter().map(|&w| Gluing::Shift(w)).collect();
    let sheets = glue_sheets(&m, &glue, d)?;
    let shift = sheets
        .induced_vertex_map(&m, &sheets, |t| t, |_, s| s + 1, |v| v)
        .expect("a uniform sheet shift is always well defined");
    let deck = Automorphism::new(shift).map_err(|e| Error::NonManifold(e.to_string()))?;
    let mut lifted = Vec::with_capacity(sigma.len());
    for (s, sign) in sigma.simplices() {
        let t = m.star(s)[0];
        // projection preserves vertex order, so signs carry over
        lifted.push((sheets.lift_face(&m, t, 0, s), *sign));
    }
    let total = sheets.complex.clone();
    let branch = OrientedSubcomplex::new(&total, sigma.dim(), lifted)?;
    Ok(BranchedCover {
        projection: SimplicialMap::new(sheets.projection.clone()),
        total,
        base: m,
        degree: d,
        sigma,
        branch,
        deck,
        cocycle,
        seifert_labels: labels,
        potential,
        subdivision,
        sheets,
    })
}

impl BranchedCover {
    /// The maximal simplex of the total complex that is copy `s` of base
    /// simplex `t`, counting copies before gauge fixing.
    pub fn sheet_top(&self, t: usize, s: usize) -> usize {
        self.sheets.top(t, (s + self.potential[t]) % self.degree)
    }

    /// Copy `s` (before gauge fixing) of the face `face` of base simplex `t`.
    pub fn lift_face(&self, t: usize, s: usize, face: &[usize]) -> Simplex {
        self.sheets.lift_face(&self.base, t, (s + self.potential[t]) % self.degree, face)
    }

    /// Sheet index (before gauge fixing) of each maximal simplex of the total
    /// complex, with its base simplex.
    pub fn sheet_of(&self, x_top: usize) -> (usize, usize) {
        let (t, s) = self.sheets.top_of[x_top];
        (t, (s + self.degree - self.potential[t]) % self.degree)
    }

    pub fn branch_complex(&self) -> SimplicialComplex {
        self.branch.to_complex(self.total.vertex_count())
    }

    pub(crate) fn sheets(&self) -> &Sheeted {
        &self.sheets
    }
}

/// Checks the covering axioms: (1) off the branch locus the projection is a
/// local isomorphism with fibers of size d, (2) it restricts to an isomorphism
/// of branch loci, (3) the deck group acts freely off the locus and
/// transitively on fibers.
pub fn verify_covering(c: &BranchedCover) -> Report {
    let mut r = Report::new();
    let (x, m, d) = (&c.total, &c.base, c.degree);
    let pi = &c.projection;
    r.fact("degree", d);
    r.fact("base f-vector", format!("{:?}", m.f_vector()));
    r.fact("total f-vector", format!("{:?}", x.f_vector()));

    let sigma_c = c.sigma.to_complex(m.vertex_count());
    let branch_c = c.branch_complex();
    let simplicial = pi.is_nondegenerate_simplicial(x, m);
    let mut fiber: HashMap<Simplex, Vec<Simplex>> = HashMap::new();
    for s in x.all_faces() {
        fiber.entry(pi.image(s)).or_default().push(s.clone());
    }
    let mut bad_fiber = None;
    for s in m.all_faces() {
        let want = if sigma_c.contains(s) { 1 } else { d };
        let got = fiber.get(s).map_or(0, Vec::len);
        if got != want && bad_fiber.is_none() {
            bad_fiber = Some(format!("{s:?} has {got} preimages, expected {want}"));
        }
    }
    let x_star = vertex_stars(x);
    let m_star = vertex_stars(m);
    let mut bad_local = None;
    for v in x.vertices() {
        if branch_c.contains(&[v]) {
            continue;
        }
        let images: HashSet<Simplex> = x_star[v].iter().map(|&t| pi.image(&x.maximal()[t])).collect();
        if images.len() != x_star[v].len() || images.len() != m_star[pi.vertex(v)].len() {
            bad_local = Some(format!("star of vertex {v} does not map isomorphically"));
            break;
        }
    }
    let top_count = x.maximal().len() == d * m.maximal().len();
    r.check(
        "local isomorphism off the branch locus",
        simplicial && bad_fiber.is_none() && bad_local.is_none() && top_count,
        bad_fiber.or(bad_local).unwrap_or_else(|| {
            if simplicial && top_count {
                String::new()
            } else {
                "projection is not a degree-d simplicial map".into()
            }
        }),
    );

    let mut preimage_of_sigma: Vec<Simplex> = x.all_faces().filter(|s| sigma_c.contains(&pi.image(s))).cloned().collect();
    preimage_of_sigma.sort();
    let mut branch_faces: Vec<Simplex> = branch_c.all_faces().cloned().collect();
    branch_faces.sort();
    let images: HashSet<Simplex> = branch_faces.iter().map(|s| pi.image(s)).collect();
    let iso = preimage_of_sigma == branch_faces
        && images.len() == branch_faces.len()
        && images.len() == sigma_c.all_faces().count()
        && branch_faces.iter().all(|s| pi.image(s).len() == s.len());
    r.check("projection restricted to the branch locus is an isomorphism", iso, "");

    let zeta = &c.deck;
    let commutes = (0..x.vertex_count()).all(|v| pi.vertex(zeta.apply(v)) == pi.vertex(v));
    let auto = zeta.is_automorphism_of(x);
    let powers: Vec<Automorphism> = (0..=d).map(|k| zeta.pow(k)).collect();
    let order = powers[d].is_identity() && (1..d).all(|k| !powers[k].is_identity());
    let mut free = true;
    for s in x.all_faces() {
        if branch_c.contains(s) {
            continue;
        }
        if (1..d).any(|k| powers[k].image(s) == *s) {
            free = false;
            break;
        }
    }
    let mut transitive = true;
    for preimages in fiber.values() {
        let first = &preimages[0];
        let orbit: HashSet<Simplex> = (0..d).map(|k| powers[k].image(first)).collect();
        if orbit.len() != preimages.len() || !preimages.iter().all(|p| orbit.contains(p)) {
            transitive = false;
            break;
        }
    }
    r.check("deck transformation is an automorphism commuting with the projection", auto && commutes, "");
    r.check("deck transformation has order exactly d", order, "");
    r.check("deck group acts freely off the branch locus", free, "");
    r.check("deck group acts transitively on fibers", transitive, "");
    r
}

fn vertex_stars(k: &SimplicialComplex) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); k.vertex_count()];
    for (t, s) in k.maximal().iter().enumerate() {
        for &v in s {
            out[v].push(t);
        }
    }
    out
}

/// `χ(X) = d·χ(M) − (d−1)·χ(Σ)`, returned as (holds, χ(X), right-hand side).
pub fn euler_relation(c: &BranchedCover) -> (bool, i64, i64) {
    let d = c.degree as i64;
    let chi_sigma = c.sigma.to_complex(c.base.vertex_count()).euler_characteristic();
    let rhs = d * c.base.euler_characteristic() - (d - 1) * chi_sigma;
    let lhs = c.total.euler_characteristic();
    (lhs == rhs, lhs, rhs)
}

/// How the deck generator moves the link of one maximal simplex of the
/// branch locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkAction {
    pub simplex: Simplex,
    pub link_vertices: usize,
    /// Lengths of the deck orbits on the link vertices.
    pub orbit_lengths: Vec<usize>,
    /// The link is one circle made of `d` copies of the base link.
    pub single_circle: bool,
}

impl LinkAction {
    /// A rotation by one sheet: one circle, every orbit of length exactly `d`.
    pub fn is_rotation(&self, d: usize) -> bool {
        self.single_circle && self.orbit_lengths.iter().all(|&l| l == d)
    }
}

pub fn deck_action_on_branch_link(c: &BranchedCover) -> Vec<LinkAction> {
    let mut out = Vec::new();
    for (s, _) in c.branch.simplices() {
        let link = c.total.link(s).expect("branch simplex is a face");
        let base_link = c.base.link(&c.projection.image(s)).expect("projection of a face is a face");
        let verts = link.vertices();
        let mut seen = HashSet::new();
        let mut orbit_lengths = Vec::new();
        for &v in &verts {
            if seen.contains(&v) {
                continue;
            }
            let mut len = 0;
            let mut w = v;
            loop {
                seen.insert(w);
                len += 1;
                w = c.deck.apply(w);
                if w == v {
                    break;
                }
            }
            orbit_lengths.push(len);
        }
        let circle = link.dim() == 1
            && link.components().len() == 1
            && verts.iter().all(|&v| link.star(&[v]).len() == 2)
            && verts.len() == c.degree * base_link.vertices().len();
        out.push(LinkAction { simplex: s.clone(), link_vertices: verts.len(), orbit_lengths, single_circle: circle });
    }
    out
}
