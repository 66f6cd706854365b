//! Simplicial homology over `Z` and `Z/d`, chains, and solving `∂x ≡ b (mod d)`.

pub mod snf;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::{format::content_lines, OrientedSubcomplex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use snf::Reduction;

pub use snf::{invariant_factors, smith_normal_form, SnfDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    Mod(u64),
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Mod(d) => write!(f, "Z/{d}"),
        }
    }
}

/// `Z^free_rank + Z/t1 + Z/t2 + ...` with `t1 | t2 | ...`.
///
/// With `Z/d` coefficients there is no free part: every summand is listed in
/// `torsion` and divides `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: usize,
    pub coefficients: Coefficients,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of cyclic summands, free ones included.
    pub fn summands(&self) -> usize {
        self.free_rank + self.torsion.len()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "H_{} = {}", self.degree, parts.join(" + "))
    }
}

fn prime_powers(mut x: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= x {
        if x % p == 0 {
            let mut q = 1;
            while x % p == 0 {
                x /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if x > 1 {
        out.push((x, x));
    }
    out
}

/// Invariant factor form of a direct sum of cyclic groups of the given orders.
fn invariant_form(orders: &[u64]) -> Vec<BigInt> {
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &o in orders {
        for (p, q) in prime_powers(o) {
            by_prime.entry(p).or_default().push(q);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![BigInt::one(); len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable();
        // largest powers go to the last factors
        for (k, q) in powers.iter().rev().enumerate() {
            factors[len - 1 - k] *= *q;
        }
    }
    factors
}

/// Ranks and divisors of the boundary maps around one degree.
struct Local {
    faces: usize,
    rank_in: usize,
    divisors_out: Vec<BigInt>,
}

fn local_data(k: &SimplicialComplex, deg: usize) -> Result<Local> {
    let faces = k.faces(deg).len();
    let rank_in = if deg >= 1 { invariant_factors(&k.boundary_matrix(deg)?).len() } else { 0 };
    let divisors_out = if deg < k.dim() { invariant_factors(&k.boundary_matrix(deg + 1)?) } else { Vec::new() };
    Ok(Local { faces, rank_in, divisors_out })
}

fn integral(k: &SimplicialComplex, deg: usize) -> Result<(usize, Vec<BigInt>)> {
    let l = local_data(k, deg)?;
    let free = l.faces - l.rank_in - l.divisors_out.len();
    let torsion = l.divisors_out.into_iter().filter(|d| !d.is_one()).collect();
    Ok((free, torsion))
}

/// `H_k(K; coeffs)`; `Z/d` is obtained from the integral groups by universal
/// coefficients: `H_k(Z) ⊗ Z/d ⊕ Tor(H_{k-1}(Z), Z/d)`.
pub fn homology(k: &SimplicialComplex, deg: usize, coeffs: Coefficients) -> Result<HomologyGroup> {
    if deg > k.dim() || k.is_empty() {
        return Err(Error::DimensionOutOfRange { k: deg, n: k.dim() });
    }
    let (free, torsion) = integral(k, deg)?;
    match coeffs {
        Coefficients::Integers => Ok(HomologyGroup { degree: deg, coefficients: coeffs, free_rank: free, torsion }),
        Coefficients::Mod(0) => Err(Error::InvalidDegree(0)),
        Coefficients::Mod(d) => {
            let dd = BigInt::from(d);
            let mut orders = vec![d; free];
            let below = if deg >= 1 { integral(k, deg - 1)?.1 } else { Vec::new() };
            for t in torsion.iter().chain(&below) {
                orders.push(t.gcd(&dd).to_u64().unwrap());
            }
            orders.retain(|&o| o > 1);
            Ok(HomologyGroup { degree: deg, coefficients: coeffs, free_rank: 0, torsion: invariant_form(&orders) })
        }
    }
}

/// A k-chain: nonzero integer coefficients on k-simplices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    degree: usize,
    coeffs: BTreeMap<Simplex, i64>,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Self { degree, coeffs: BTreeMap::new() }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Simplex, i64)>) -> Result<Self> {
        let mut c = Self::zero(degree);
        for (s, x) in terms {
            if s.len() != degree + 1 {
                return Err(Error::DimensionMismatch(format!("{s:?} is not a {degree}-simplex")));
            }
            let mut sorted = s.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!("simplex {s:?} repeats a vertex")));
            }
            c.add_term(sorted, x * i64::from(crate::util::sort_parity(&s)));
        }
        Ok(c)
    }

    fn add_term(&mut self, s: Simplex, x: i64) {
        let e = self.coeffs.entry(s.clone()).or_default();
        *e += x;
        if *e == 0 {
            self.coeffs.remove(&s);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, s: &[usize]) -> i64 {
        self.coeffs.get(s).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, i64)> {
        self.coeffs.iter().map(|(s, &x)| (s, x))
    }

    /// All simplices must be faces of `k`.
    pub fn check_in(&self, k: &SimplicialComplex) -> Result<()> {
        match self.coeffs.keys().find(|s| !k.contains(s)) {
            Some(s) => Err(Error::NotAFace(s.clone())),
            None => Ok(()),
        }
    }

    /// Coefficient vector in the lexicographic face order of `k`.
    pub fn to_vector(&self, k: &SimplicialComplex) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); k.faces(self.degree).len()];
        for (s, &x) in &self.coeffs {
            let i = k.face_index(s).filter(|_| s.len() == self.degree + 1).ok_or_else(|| Error::NotAFace(s.clone()))?;
            v[i] = BigInt::from(x);
        }
        Ok(v)
    }

    pub fn from_vector(k: &SimplicialComplex, degree: usize, v: &[BigInt]) -> Self {
        let mut c = Self::zero(degree);
        for (s, x) in k.faces(degree).iter().zip(v) {
            if !x.is_zero() {
                c.coeffs.insert(s.clone(), x.to_i64().expect("coefficient does not fit in i64"));
            }
        }
        c
    }

    pub fn boundary(&self) -> Chain {
        let mut out = Chain::zero(self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (s, &x) in &self.coeffs {
            for pos in 0..s.len() {
                let mut f = s.clone();
                f.remove(pos);
                out.add_term(f, if pos % 2 == 0 { x } else { -x });
            }
        }
        out
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (s, &x) in &other.coeffs {
            out.add_term(s.clone(), -x);
        }
        out
    }

    /// Coefficients reduced into `(-d/2, d/2]`, zeros dropped.
    pub fn reduce_mod(&self, d: u64) -> Chain {
        let d = d as i64;
        let mut out = Chain::zero(self.degree);
        for (s, &x) in &self.coeffs {
            let r = symmetric_residue(x, d);
            if r != 0 {
                out.coeffs.insert(s.clone(), r);
            }
        }
        out
    }

    /// Serialized as one `c <coeff> v0 ... vk` line per term.
    pub fn to_text(&self) -> String {
        let mut out = format!("chain {}\n", self.degree);
        for (s, x) in &self.coeffs {
            let verts: Vec<String> = s.iter().map(usize::to_string).collect();
            out.push_str(&format!("c {x} {}\n", verts.join(" ")));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Chain> {
        let perr = |line: usize, m: &str| Error::Parse { line, message: m.to_string() };
        let mut lines = content_lines(text);
        let (l1, head) = lines.next().ok_or_else(|| perr(1, "missing `chain` header"))?;
        if head.len() != 2 || head[0] != "chain" {
            return Err(perr(l1, "expected `chain <k>`"));
        }
        let degree: usize = head[1].parse().map_err(|_| perr(l1, "bad degree"))?;
        let mut terms = Vec::new();
        for (line, toks) in lines {
            if toks[0] != "c" || toks.len() != degree + 3 {
                return Err(perr(line, "expected `c <coeff> v0 ... vk`"));
            }
            let x: i64 = toks[1].parse().map_err(|_| perr(line, "bad coefficient"))?;
            let s = toks[2..].iter().map(|t| t.parse().map_err(|_| perr(line, "bad vertex"))).collect::<Result<Vec<usize>>>()?;
            terms.push((s, x));
        }
        Chain::from_terms(degree, terms)
    }
}

pub(crate) fn symmetric_residue(x: i64, d: i64) -> i64 {
    let mut r = x.rem_euclid(d);
    if 2 * r > d {
        r -= d;
    }
    r
}

/// The oriented sum of the simplices of a closed subcomplex.
pub fn fundamental_class(s: &OrientedSubcomplex) -> Result<Chain> {
    if let Some((face, _)) = s.boundary().into_iter().next() {
        return Err(Error::NotACycle(face));
    }
    let mut c = Chain::zero(s.dim());
    for (simplex, sign) in s.simplices() {
        c.coeffs.insert(simplex.clone(), i64::from(*sign));
    }
    Ok(c)
}

/// The congruence that cannot be met: row `row` of `U·b` in SNF coordinates
/// reads `divisor · y ≡ rhs (mod d)`, and `gcd(divisor, d)` does not divide `rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub row: usize,
    pub divisor: BigInt,
    pub rhs: BigInt,
    pub gcd: BigInt,
    pub modulus: u64,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "row {}: {}*y = {} (mod {}), gcd({}, {}) = {} does not divide {}",
            self.row, self.divisor, self.rhs, self.modulus, self.divisor, self.modulus, self.gcd, self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Solved(Vec<BigInt>),
    Unsolvable(Certificate),
}

/// An SNF reduction of one matrix, reusable for many right-hand sides and moduli.
#[derive(Clone, Debug)]
pub struct CongruenceSolver {
    reduction: Reduction,
}

impl CongruenceSolver {
    pub fn new(a: &IntMatrix) -> Self {
        Self { reduction: Reduction::of(a, true) }
    }

    pub fn divisors(&self) -> &[BigInt] {
        &self.reduction.divisors
    }

    /// Solves `A x ≡ b (mod d)`. The solution has entries in `(-d/2, d/2]`.
    pub fn solve(&self, b: &[BigInt], d: u64) -> Result<Solution> {
        if d == 0 {
            return Err(Error::InvalidDegree(0));
        }
        if b.len() != self.reduction.rows {
            return Err(Error::DimensionMismatch(format!(
                "right side has {} entries, matrix has {} rows",
                b.len(),
                self.reduction.rows
            )));
        }
        let dd = BigInt::from(d);
        let c = self.reduction.apply_u(b);
        let mut y = vec![BigInt::zero(); self.reduction.cols];
        for (i, ci) in c.iter().enumerate() {
            let rhs = ci.mod_floor(&dd);
            let divisor = self.reduction.divisors.get(i).cloned().unwrap_or_default();
            let g = divisor.gcd(&dd);
            if !(&rhs % &g).is_zero() {
                return Ok(Solution::Unsolvable(Certificate { row: i, divisor, rhs, gcd: g, modulus: d }));
            }
            if i < self.reduction.rank() {
                let m = &dd / &g;
                let a = (&divisor / &g).mod_floor(&m);
                let inv = mod_inverse(&a, &m);
                y[i] = ((&rhs / &g) * inv).mod_floor(&m);
            }
        }
        let half = &dd / 2u8;
        let x = self
            .reduction
            .apply_v(&y)
            .into_iter()
            .map(|v| {
                let r = v.mod_floor(&dd);
                if r > half {
                    r - &dd
                } else {
                    r
                }
            })
            .collect();
        Ok(Solution::Solved(x))
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.abs().is_one());
    e.x.mod_floor(m)
}

/// One-shot form of [`CongruenceSolver::solve`].
pub fn solve_boundary_mod_d(a: &IntMatrix, target: &[BigInt], d: u64) -> Result<Solution> {
    if d == 0 {
        return Err(Error::InvalidDegree(0));
    }
    CongruenceSolver::new(a).solve(target, d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vanishing {
    /// `∂W ≡ [Σ] (mod d)`.
    Vanishes(Chain),
    Persists(Certificate),
}

impl Vanishing {
    pub fn vanishes(&self) -> bool {
        matches!(self, Vanishing::Vanishes(_))
    }
}

/// Decides whether the mod-d class of a closed codimension-two subcomplex
/// vanishes, for every `d` in turn, reusing one reduction of the boundary map.
pub struct ClassTest<'a> {
    complex: &'a SimplicialComplex,
    target: Vec<BigInt>,
    solver: CongruenceSolver,
}

impl<'a> ClassTest<'a> {
    pub fn new(k: &'a SimplicialComplex, sigma: &OrientedSubcomplex) -> Result<Self> {
        if !k.is_coherently_oriented() {
            return Err(Error::Validation("ambient complex must be closed and coherently oriented".into()));
        }
        if k.dim() < 2 || (!sigma.is_empty() && sigma.dim() + 2 != k.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "branch locus of dimension {} in a {}-complex",
                sigma.dim(),
                k.dim()
            )));
        }
        let class = fundamental_class(sigma)?;
        let n = k.dim();
        let target = Chain { degree: n - 2, ..class }.to_vector(k)?;
        Ok(Self { complex: k, target, solver: CongruenceSolver::new(&k.boundary_matrix(n - 1)?) })
    }

    pub fn decide(&self, d: u64) -> Result<Vanishing> {
        match self.solver.solve(&self.target, d)? {
            Solution::Solved(x) => Ok(Vanishing::Vanishes(Chain::from_vector(self.complex, self.complex.dim() - 1, &x))),
            Solution::Unsolvable(c) => Ok(Vanishing::Persists(c)),
        }
    }
}

pub fn class_vanishes_mod_d(k: &SimplicialComplex, sigma: &OrientedSubcomplex, d: i64) -> Result<Vanishing> {
    if d < 1 {
        return Err(Error::InvalidDegree(d));
    }
    ClassTest::new(k, sigma)?.decide(d as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build;

    fn h(k: &SimplicialComplex, deg: usize) -> String {
        homology(k, deg, Coefficients::Integers).unwrap().to_string()
    }

    #[test]
    fn circle_and_sphere() {
        let c = build::circle(3);
        assert_eq!(h(&c, 0), "H_0 = Z");
        assert_eq!(h(&c, 1), "H_1 = Z");
        assert_eq!(invariant_factors(&c.boundary_matrix(1).unwrap()).len(), 2);
        let s = build::octahedron();
        assert_eq!(h(&s, 1), "H_1 = 0");
        assert_eq!(h(&s, 2), "H_2 = Z");
    }

    #[test]
    fn three_torus_betti_numbers() {
        let t = build::three_torus();
        let ranks: Vec<usize> = (0..=3).map(|k| homology(&t, k, Coefficients::Integers).unwrap().free_rank).collect();
        assert_eq!(ranks, vec![1, 3, 3, 1]);
    }

    #[test]
    fn projective_plane_torsion_and_mod_coefficients() {
        // 6-vertex RP^2
        let tris = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
        ];
        let k = SimplicialComplex::new(6, tris.iter().map(|t| (t.to_vec(), 1)).collect()).unwrap();
        assert_eq!(h(&k, 1), "H_1 = Z/2");
        assert_eq!(h(&k, 2), "H_2 = 0");
        let m2 = |deg| homology(&k, deg, Coefficients::Mod(2)).unwrap().to_string();
        assert_eq!(m2(1), "H_1 = Z/2");
        assert_eq!(m2(2), "H_2 = Z/2");
        let m3 = homology(&k, 1, Coefficients::Mod(3)).unwrap();
        assert!(m3.is_trivial());
        let m6 = homology(&k, 2, Coefficients::Mod(6)).unwrap();
        assert_eq!(m6.to_string(), "H_2 = Z/2");
    }

    #[test]
    fn invariant_form_merges_coprime_orders() {
        assert_eq!(invariant_form(&[2, 3]), vec![BigInt::from(6)]);
        assert_eq!(invariant_form(&[6, 6, 2]), vec![BigInt::from(2), BigInt::from(6), BigInt::from(6)]);
    }

    #[test]
    fn degree_out_of_range() {
        let k = build::octahedron();
        assert!(matches!(homology(&k, 3, Coefficients::Integers), Err(Error::DimensionOutOfRange { .. })));
    }

    #[test]
    fn fundamental_classes() {
        let k = build::octahedron();
        let pts = OrientedSubcomplex::new(&k, 0, vec![(vec![4], 1), (vec![5], -1)]).unwrap();
        let c = fundamental_class(&pts).unwrap();
        assert_eq!(c.coefficient(&[4]), 1);
        assert_eq!(c.coefficient(&[5]), -1);
        let ring = vec![(vec![0, 2], 1), (vec![2, 1], 1), (vec![1, 3], 1), (vec![3, 0], 1)];
        let eq = OrientedSubcomplex::new(&k, 1, ring.clone()).unwrap();
        let c = fundamental_class(&eq).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.boundary().is_zero());
        let mut bad = ring;
        bad[1].1 = -1;
        let bad = OrientedSubcomplex::new(&k, 1, bad).unwrap();
        assert!(matches!(fundamental_class(&bad), Err(Error::NotACycle(_))));
    }

    #[test]
    fn chain_text_round_trip() {
        let c = Chain::from_terms(1, vec![(vec![2, 0], 3), (vec![1, 3], -1)]).unwrap();
        assert_eq!(c.coefficient(&[0, 2]), -3);
        assert_eq!(Chain::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn congruences() {
        let id = IntMatrix::identity(3);
        let b: Vec<BigInt> = [1, -2, 3].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(solve_boundary_mod_d(&id, &b, 101).unwrap(), Solution::Solved(b.clone()));
        let two = IntMatrix::from_dense(&[vec![2]]);
        match solve_boundary_mod_d(&two, &[BigInt::one()], 4).unwrap() {
            Solution::Unsolvable(c) => {
                assert_eq!(c.gcd, BigInt::from(2));
                assert_eq!(c.rhs, BigInt::one());
            }
            other => panic!("expected no solution, got {other:?}"),
        }
        assert!(matches!(solve_boundary_mod_d(&id, &b[..2], 5), Err(Error::DimensionMismatch(_))));
        assert!(matches!(solve_boundary_mod_d(&id, &b, 0), Err(Error::InvalidDegree(0))));
    }

    #[test]
    fn circle_boundary_solution_is_a_path() {
        let c = build::circle(3);
        let d1 = c.boundary_matrix(1).unwrap();
        let target = Chain::from_terms(0, vec![(vec![0], 1), (vec![2], -1)]).unwrap();
        let Solution::Solved(x) = solve_boundary_mod_d(&d1, &target.to_vector(&c).unwrap(), 0x7fff_ffff).unwrap() else {
            panic!("path exists")
        };
        let w = Chain::from_vector(&c, 1, &x);
        assert_eq!(w.boundary(), target);
    }

    #[test]
    fn sphere_two_points_vanish_for_every_degree() {
        let k = build::octahedron();
        let sigma = OrientedSubcomplex::new(&k, 0, vec![(vec![4], 1), (vec![5], -1)]).unwrap();
        for d in 1..=7 {
            let Vanishing::Vanishes(w) = class_vanishes_mod_d(&k, &sigma, d).unwrap() else { panic!() };
            let diff = w.boundary().sub(&fundamental_class(&sigma).unwrap()).reduce_mod(d as u64);
            assert!(diff.is_zero());
        }
        assert!(matches!(class_vanishes_mod_d(&k, &sigma, 0), Err(Error::InvalidDegree(0))));
    }
}
