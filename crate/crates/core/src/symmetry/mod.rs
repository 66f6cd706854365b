//! Involutions of the base lifted to the cyclic cover, their fixed sets, and
//! the sector and double-cover constructions built from them.
//!
//! Sheets are counted from 0. The cover is glued from the Seifert piece `H0`
//! itself, so copy `s` of the base cut open along `H0` is sheet `s`, and the
//! minus side of `H0` in sheet `s` meets the plus side in sheet `s + 1`; that
//! common face is copy `s` of `H0`. The lift of the involution sends sheet
//! `s` to sheet `-s`, hence copy `k` of `H0` to copy `-k - 1`.

pub mod iso;

use std::collections::{BTreeSet, HashSet};

use crate::complex::surgery::{cut_along, cut_faces, Subdivision};
use crate::complex::{Automorphism, OrientedSubcomplex, Simplex, SimplicialComplex, SimplicialMap};
use crate::cover::{build_cyclic_cover, BranchedCover};
use crate::error::{Error, Result};
use crate::homology::{fundamental_class, Chain};
use crate::report::Report;
use crate::sheets::{glue_sheets, Gluing};

pub use iso::{isomorphic, Isomorphism, DEFAULT_BUDGET};

/// A closed oriented base with an involution whose fixed set contains a
/// hypersurface `H = H0 ∪ H1`, split along the branch locus `Σ = ∂H0 = ∂H1`,
/// together with the cyclic cover glued along `H0`.
#[derive(Clone, Debug)]
pub struct SymmetricSetup {
    pub base: SimplicialComplex,
    pub involution: Automorphism,
    pub sigma: OrientedSubcomplex,
    pub h0: OrientedSubcomplex,
    pub h1: OrientedSubcomplex,
    /// The component of the fixed set containing `H0`.
    pub hypersurface: SimplicialComplex,
    pub fixed: SimplicialComplex,
    pub cover: BranchedCover,
    /// Whether the input had to be subdivided to make `Σ` and `H0` full.
    pub subdivided: bool,
}

/// Subcomplex of simplices all of whose vertices are fixed. May be impure.
pub fn fixed_subcomplex(phi: &Automorphism, k: &SimplicialComplex) -> SimplicialComplex {
    let faces = k.all_faces().filter(|s| s.iter().all(|&v| phi.apply(v) == v)).cloned();
    SimplicialComplex::generated_by(k.vertex_count(), faces).expect("faces of a valid complex")
}

fn chain_of(s: &OrientedSubcomplex) -> Chain {
    Chain::from_terms(s.dim(), s.simplices().iter().map(|(x, g)| (x.clone(), i64::from(*g)))).unwrap()
}

impl SymmetricSetup {
    pub fn new(
        base: &SimplicialComplex,
        involution: &Automorphism,
        sigma: &OrientedSubcomplex,
        h0: &OrientedSubcomplex,
        d: usize,
    ) -> Result<Self> {
        if !base.is_coherently_oriented() {
            return Err(Error::InvalidSetup("base must be closed and coherently oriented".into()));
        }
        if !involution.is_automorphism_of(base) || !involution.compose(involution).is_identity() {
            return Err(Error::InvalidSetup("the map is not an involutive automorphism of the base".into()));
        }
        let vc = base.vertex_count();
        let full = base.is_full_subcomplex(&sigma.to_complex(vc)) && base.is_full_subcomplex(&h0.to_complex(vc));
        let (base, involution, sigma, h0) = if full {
            (base.clone(), involution.clone(), sigma.clone(), h0.clone())
        } else {
            let sd = Subdivision::of(base);
            (sd.complex.clone(), sd.automorphism(involution), sd.subcomplex(sigma), sd.subcomplex(h0))
        };
        let n = base.dim();
        if h0.is_empty() || h0.dim() + 1 != n {
            return Err(Error::InvalidSetup("Seifert piece must be a nonempty hypersurface".into()));
        }
        let fixed = fixed_subcomplex(&involution, &base);
        if let Some((s, _)) = h0.simplices().iter().find(|(s, _)| !fixed.contains(s)) {
            return Err(Error::InvalidSetup(format!("{s:?} of the Seifert piece is not fixed")));
        }
        let sigma_chain = fundamental_class(&sigma)?;
        if chain_of(&h0).boundary() != sigma_chain {
            return Err(Error::InvalidSetup("boundary of the Seifert piece is not the branch locus".into()));
        }
        let hypersurface = fixed
            .component_containing(h0.simplices()[0].0[0])
            .expect("Seifert piece lies in the fixed set");
        if !hypersurface.is_pure() || hypersurface.dim() + 1 != n || !hypersurface.is_closed_pseudomanifold() {
            return Err(Error::InvalidSetup("fixed component through the Seifert piece is not a closed hypersurface".into()));
        }
        let oriented = hypersurface
            .coherently_oriented()
            .map_err(|_| Error::InvalidSetup("fixed hypersurface is not orientable".into()))?;
        let relative: BTreeSet<i8> = h0
            .simplices()
            .iter()
            .map(|(s, g)| g * oriented.sign(oriented.maximal_index(s).unwrap()))
            .collect();
        if relative.len() != 1 {
            return Err(Error::InvalidSetup("Seifert piece is not coherently oriented".into()));
        }
        let flip = *relative.iter().next().unwrap();
        let in_h0: HashSet<&Simplex> = h0.simplices().iter().map(|(s, _)| s).collect();
        let h1_list: Vec<(Simplex, i8)> = oriented
            .maximal()
            .iter()
            .zip(oriented.signs())
            .filter(|(s, _)| !in_h0.contains(s))
            .map(|(s, &g)| (s.clone(), -g * flip))
            .collect();
        let h1 = OrientedSubcomplex::new(&base, n - 1, h1_list)?;
        if chain_of(&h1).boundary() != sigma_chain {
            return Err(Error::InvalidSetup("the complementary piece does not bound the branch locus".into()));
        }
        let cover = build_cyclic_cover(&base, &sigma, d, &chain_of(&h0))?;
        Ok(Self { base, involution, sigma, h0, h1, hypersurface, fixed, cover, subdivided: !full })
    }

    pub fn degree(&self) -> usize {
        self.cover.degree
    }

    /// Copy `k` of the Seifert piece in the cover, as its maximal simplices.
    pub fn seifert_copy(&self, k: usize) -> Vec<Simplex> {
        let base = &self.base;
        let mut out: Vec<Simplex> = self
            .h0
            .simplices()
            .iter()
            .map(|(f, g)| {
                let fi = base.face_index(f).unwrap();
                let (minus, _) = *base
                    .facet_cofaces(fi)
                    .iter()
                    .find(|&&(t, pos)| base.incidence(t, pos) != i64::from(*g))
                    .unwrap();
                self.cover.lift_face(minus, k % self.degree(), f)
            })
            .collect();
        out.sort();
        out
    }

    /// Maximal simplices of the fixed set outside `H0`, lifted to sheet `s`.
    pub fn rest_of_fixed_set(&self, s: usize) -> Vec<Simplex> {
        let in_h0: HashSet<&Simplex> = self.h0.simplices().iter().map(|(x, _)| x).collect();
        let mut out: Vec<Simplex> = self
            .fixed
            .maximal()
            .iter()
            .filter(|x| !in_h0.contains(x))
            .map(|x| {
                let t = self.base.star(x)[0];
                self.cover.lift_face(t, s, x)
            })
            .collect();
        out.sort();
        out
    }
}

/// The lift sending copy `s` of each base simplex `σ` to copy `-s` of `ι(σ)`.
pub fn lift_involution(setup: &SymmetricSetup) -> Result<Automorphism> {
    let c = &setup.cover;
    let d = c.degree;
    let base = &setup.base;
    let iota = &setup.involution;
    let image_top: Vec<usize> =
        base.maximal().iter().map(|s| base.maximal_index(&iota.image(s)).expect("automorphism")).collect();
    let phi = &c.potential;
    let map = c
        .sheets()
        .induced_vertex_map(
            base,
            c.sheets(),
            |t| image_top[t],
            |t, s| {
                let ungauged = (s + d - phi[t]) % d;
                ((d - ungauged) % d + phi[image_top[t]]) % d
            },
            |v| iota.apply(v),
        )
        .ok_or_else(|| Error::NotLiftable("sheet assignment is inconsistent across a face".into()))?;
    let lift = Automorphism::new(map).map_err(|e| Error::NotLiftable(e.to_string()))?;
    if !lift.is_automorphism_of(&c.total) {
        return Err(Error::NotLiftable("lift is not simplicial".into()));
    }
    Ok(lift)
}

/// `ζ∘ι` for even degree, `ι` for odd degree.
pub fn j_involution(setup: &SymmetricSetup) -> Result<Automorphism> {
    let lift = lift_involution(setup)?;
    let j = if setup.degree() % 2 == 0 { setup.cover.deck.compose(&lift) } else { lift };
    if !j.compose(&j).is_identity() {
        return Err(Error::NotLiftable("the composite is not an involution".into()));
    }
    Ok(j)
}

fn generated(vertex_count: usize, tops: Vec<Simplex>) -> SimplicialComplex {
    SimplicialComplex::generated_by(vertex_count, tops).expect("lifted simplices are valid")
}

/// Checks the predicted shape of the fixed set of `j`: for even `d` it is
/// copies `0` and `d/2` of `H0`, meeting along the branch locus; for odd `d`
/// it is the rest of the base's fixed set in sheet 0 together with copy
/// `(d-1)/2` of `H0`, and it is isomorphic to the base's fixed set.
pub fn verify_fact_fixed(setup: &SymmetricSetup) -> Report {
    let mut r = Report::new();
    let d = setup.degree();
    let x = &setup.cover.total;
    let vc = x.vertex_count();
    r.fact("degree", d);
    r.fact("subdivided", setup.subdivided);
    let j = match j_involution(setup) {
        Ok(j) => j,
        Err(e) => {
            r.check("j is a well-defined involution", false, e.to_string());
            return r;
        }
    };
    r.fact("j", if d % 2 == 0 { "deck generator after lifted involution" } else { "lifted involution" });
    r.check("j is a well-defined involution", j.is_automorphism_of(x) && j.compose(&j).is_identity(), "");
    let zeta = &setup.cover.deck;
    r.check("deck generator has order d", zeta.pow(d).is_identity() && (1..d).all(|k| !zeta.pow(k).is_identity()), "");
    r.check("j conjugates the deck generator to its inverse", j.compose(zeta).compose(&j) == zeta.inverse(), "");
    let branch = setup.cover.branch_complex();
    let deck_free = (1..d).all(|k| fixed_subcomplex(&zeta.pow(k), x).same_simplices(&branch));
    r.check("every nontrivial deck power fixes exactly the branch locus", deck_free, "");

    let fix = fixed_subcomplex(&j, x);
    let flipped = x.all_faces().find(|s| j.image(s) == **s && !fix.contains(s));
    r.check(
        "fixed points of j form a subcomplex",
        flipped.is_none(),
        flipped.map(|s| format!("{s:?} is flipped onto itself")).unwrap_or_default(),
    );
    r.fact("fixed set f-vector", format!("{:?}", fix.f_vector()));
    if d % 2 == 0 {
        let a = setup.seifert_copy(0);
        let b = setup.seifert_copy(d / 2);
        let predicted = generated(vc, a.iter().chain(&b).cloned().collect());
        r.check("fixed set of j is copies 0 and d/2 of the Seifert piece", fix.same_simplices(&predicted), "");
        let ca = generated(vc, a);
        let cb = generated(vc, b);
        let common: BTreeSet<&Simplex> = ca.all_faces().filter(|s| cb.contains(s)).collect();
        let along: BTreeSet<&Simplex> = branch.all_faces().collect();
        r.check("the two copies meet exactly along the branch locus", common == along, "");
    } else {
        let mut tops = setup.seifert_copy((d - 1) / 2);
        tops.extend(setup.rest_of_fixed_set(0));
        let predicted = generated(vc, tops);
        r.check("fixed set of j is the rest of the fixed set in sheet 0 and copy (d-1)/2", fix.same_simplices(&predicted), "");
        let iso = isomorphic(&fix, &setup.fixed, DEFAULT_BUDGET);
        r.check(
            "fixed set of j is isomorphic to the fixed set of the involution",
            iso.is_found(),
            if iso == Isomorphism::Indeterminate { "search budget exceeded" } else { "" },
        );
    }
    r
}

/// The cover cut along all deck translates of the fixed component through
/// the branch locus, grouped by sheet.
#[derive(Clone, Debug)]
pub struct Sectors {
    pub pieces: Vec<SimplicialComplex>,
    /// Connected components of the cut complex.
    pub components: usize,
    /// Every component lies in a single sheet.
    pub sheet_pure: bool,
}

pub fn cut_into_sectors(setup: &SymmetricSetup) -> Result<Sectors> {
    let j = j_involution(setup)?;
    let c = &setup.cover;
    let x = &c.total;
    let n = x.dim();
    let d = c.degree;
    let fix = fixed_subcomplex(&j, x);
    let seed = c.branch.simplices().first().map(|(s, _)| s[0]).or_else(|| fix.vertices().first().copied());
    let component = match seed {
        Some(v) => fix.component_containing(v).unwrap_or_else(|| SimplicialComplex::empty(x.vertex_count())),
        None => SimplicialComplex::empty(x.vertex_count()),
    };
    let mut facets = BTreeSet::new();
    for k in 0..d {
        let zk = c.deck.pow(k);
        for s in component.maximal().iter().filter(|s| s.len() == n) {
            facets.insert(x.face_index(&zk.image(s)).expect("deck maps faces to faces"));
        }
    }
    let cut = cut_faces(x, &facets)?;
    let complex = &cut.complex;
    let sheet_of_top: Vec<usize> = (0..complex.maximal().len()).map(|t| c.sheet_of(cut.top_of[t].0).1).collect();
    let components = complex.components();
    let mut sheet_pure = true;
    for comp in &components {
        let sheets: BTreeSet<usize> =
            comp.maximal().iter().map(|s| sheet_of_top[complex.maximal_index(s).unwrap()]).collect();
        sheet_pure &= sheets.len() == 1;
    }
    let pieces = (0..d)
        .map(|s| {
            let tops: Vec<usize> = (0..complex.maximal().len()).filter(|&t| sheet_of_top[t] == s).collect();
            complex.restrict_to(&tops)
        })
        .collect();
    Ok(Sectors { pieces, components: components.len(), sheet_pure })
}

/// What each sector should look like: the base cut along `H0` for even
/// degree, along the whole hypersurface `H` for odd degree.
pub fn sector_model(setup: &SymmetricSetup) -> Result<SimplicialComplex> {
    if setup.degree() % 2 == 0 {
        Ok(cut_along(&setup.base, &setup.h0)?.complex)
    } else {
        let n = setup.base.dim();
        let facets = setup.hypersurface.maximal().iter().filter(|s| s.len() == n).map(|s| setup.base.face_index(s).unwrap()).collect();
        Ok(cut_faces(&setup.base, &facets)?.complex)
    }
}

pub fn verify_sectors(setup: &SymmetricSetup) -> Report {
    let mut r = Report::new();
    let d = setup.degree();
    let (sectors, model) = match (cut_into_sectors(setup), sector_model(setup)) {
        (Ok(s), Ok(m)) => (s, m),
        (Err(e), _) | (_, Err(e)) => {
            r.check("sectors can be cut", false, e.to_string());
            return r;
        }
    };
    r.fact("components after cutting", sectors.components);
    r.check("exactly d pieces", sectors.pieces.len() == d && sectors.pieces.iter().all(|p| !p.is_empty()), "");
    r.check("every component lies in one sheet", sectors.sheet_pure, "");
    let mut all = true;
    let mut undecided = false;
    for p in &sectors.pieces {
        match isomorphic(p, &model, DEFAULT_BUDGET) {
            Isomorphism::Found(_) => {}
            Isomorphism::NotIsomorphic => all = false,
            Isomorphism::Indeterminate => {
                all = false;
                undecided = true;
            }
        }
    }
    let what = if d % 2 == 0 { "the base cut along the Seifert piece" } else { "the base cut along the hypersurface" };
    r.check(
        format!("every piece is isomorphic to {what}"),
        all,
        if undecided { "search budget exceeded" } else { "" },
    );
    r
}

/// Two copies of a complex cut along `f`, glued crosswise.
#[derive(Clone, Debug)]
pub struct DoubleCover {
    pub total: SimplicialComplex,
    pub projection: SimplicialMap,
    pub swap: Automorphism,
    /// Cutting along `f` disconnects some component.
    pub separating: bool,
}

pub fn double_cover_from_cut(x: &SimplicialComplex, f: &SimplicialComplex) -> Result<DoubleCover> {
    let n = x.dim();
    if !x.is_closed_pseudomanifold() {
        return Err(Error::Validation("complex must be a closed pseudomanifold".into()));
    }
    let mut facets = BTreeSet::new();
    if !f.is_empty() {
        if !f.is_pure() || f.dim() + 1 != n {
            return Err(Error::NotAHypersurface(format!("subcomplex of dimension {} in a {n}-complex", f.dim())));
        }
        for s in f.maximal() {
            let i = x.face_index(s).ok_or_else(|| Error::NotAHypersurface(format!("{s:?} is not a face")))?;
            facets.insert(i);
        }
    }
    let labels: Vec<Gluing> =
        (0..x.faces(n - 1).len()).map(|i| Gluing::Shift(usize::from(facets.contains(&i)))).collect();
    let sheets = glue_sheets(x, &labels, 2)?;
    let swap = sheets.induced_vertex_map(x, &sheets, |t| t, |_, s| s + 1, |v| v).expect("uniform shift");
    let cut = cut_faces(x, &facets)?;
    let separating = cut.complex.components().len() > x.components().len();
    Ok(DoubleCover {
        projection: SimplicialMap::new(sheets.projection.clone()),
        total: sheets.complex,
        swap: Automorphism::new(swap).map_err(|e| Error::NonManifold(e.to_string()))?,
        separating,
    })
}

/// An unbranched 2:1 cover; in the separating case, two copies of `x`.
pub fn verify_double_cover(x: &SimplicialComplex, dc: &DoubleCover) -> Report {
    let mut r = Report::new();
    let y = &dc.total;
    let pi = &dc.projection;
    let mut count = std::collections::HashMap::<Simplex, usize>::new();
    for s in y.all_faces() {
        *count.entry(pi.image(s)).or_default() += 1;
    }
    let two = x.all_faces().all(|s| count.get(s) == Some(&2)) && pi.is_nondegenerate_simplicial(y, x);
    r.check("every face has exactly two preimages", two, "");
    let swap_ok = dc.swap.is_automorphism_of(y)
        && dc.swap.compose(&dc.swap).is_identity()
        && y.all_faces().all(|s| dc.swap.image(s) != *s)
        && (0..y.vertex_count()).all(|v| pi.vertex(dc.swap.apply(v)) == pi.vertex(v));
    r.check("sheet swap is a free involution over the base", swap_ok, "");
    r.fact("separating", dc.separating);
    r.fact("euler characteristic", y.euler_characteristic());
    if dc.separating {
        let comps = y.components();
        let copies = comps.len() == 2 * x.components().len()
            && comps.iter().all(|c| x.components().iter().any(|xc| isomorphic(c, xc, DEFAULT_BUDGET).is_found()));
        r.check("separating cut gives two copies", copies, "");
    } else {
        r.check("nonseparating cut gives a connected cover", y.components().len() == x.components().len(), "");
    }
    r
}
