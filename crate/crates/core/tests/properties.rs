mod common;

use std::f64::consts::{PI, TAU};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use branchforge::complex::{build, Automorphism, OrientedSubcomplex, SimplicialComplex};
use branchforge::cone::{cone_distance, ConeChart};
use branchforge::einstein::{rr_residual, Series};
use branchforge::homology::{
    class_vanishes_mod_d, homology, invariant_factors, smith_normal_form, solve_boundary_mod_d, Coefficients, Solution,
};
use branchforge::matrix::IntMatrix;
use branchforge::symmetry::{j_involution, SymmetricSetup};

use common::{exhaustive_in_span, solvable_mod_d, Columns};

fn rp2() -> SimplicialComplex {
    let tris = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5], [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5]];
    SimplicialComplex::generated_by(6, tris.iter().map(|t| t.to_vec())).unwrap()
}

fn all_triangles(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

fn columns(m: &[Vec<i64>]) -> Columns {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().enumerate().filter(|(_, r)| r[j] != 0).map(|(i, r)| (i, r[j])).collect())
        .collect()
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..7, c), r))
}

fn minors_gcd(m: &[Vec<i64>], k: usize) -> BigInt {
    fn det(m: &[Vec<i64>]) -> i64 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|j| {
                let sub: Vec<Vec<i64>> = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&sub)
            })
            .sum()
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        (k - 1..n).flat_map(|last| subsets(last, k - 1).into_iter().map(move |mut s| {
            s.push(last);
            s
        })).collect()
    }
    let mut g = BigInt::zero();
    for rows in subsets(m.len(), k) {
        for cols in subsets(m[0].len(), k) {
            let sub: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
            g = g.gcd(&BigInt::from(det(&sub)));
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_factorizes(m in small_matrix()) {
        let a = IntMatrix::from_dense(&m);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d_matrix());
        prop_assert!(s.u.mul(&s.u_inv) == IntMatrix::identity(a.nrows()));
        prop_assert!(s.v.mul(&s.v_inv) == IntMatrix::identity(a.ncols()));
        let f = invariant_factors(&a);
        prop_assert!(f.iter().all(|x| x.is_positive()));
        prop_assert!(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        // d1 ... dk is the gcd of the k x k minors
        let mut prod = BigInt::from(1);
        for (k, x) in f.iter().enumerate() {
            prod *= x;
            prop_assert_eq!(&prod, &minors_gcd(&m, k + 1));
        }
        prop_assert_eq!(f.len(), common::rank_rational(&m));
    }

    #[test]
    fn congruences_match_the_exhaustive_search(m in small_matrix(), seed in prop::collection::vec(-6i64..7, 4), d in 1u64..9) {
        let a = IntMatrix::from_dense(&m);
        let b: Vec<i64> = (0..m.len()).map(|i| seed[i % seed.len()]).collect();
        let bb: Vec<BigInt> = b.iter().copied().map(BigInt::from).collect();
        let cols = columns(&m);
        let expected = exhaustive_in_span(&cols, &b, d);
        prop_assert_eq!(solvable_mod_d(&cols, &b, d), expected);
        match solve_boundary_mod_d(&a, &bb, d).unwrap() {
            Solution::Solved(x) => {
                prop_assert!(expected);
                let ax = a.mul_vec(&x);
                let dd = BigInt::from(d);
                prop_assert!(ax.iter().zip(&bb).all(|(l, r)| (l - r).mod_floor(&dd).is_zero()));
            }
            Solution::Unsolvable(c) => {
                prop_assert!(!expected);
                prop_assert!(!(&c.rhs % &c.gcd).is_zero());
            }
        }
    }

    #[test]
    fn homology_matches_dense_ranks(mask in prop::collection::vec(any::<bool>(), 35), p in prop::sample::select(vec![2i64, 3, 5])) {
        let tris: Vec<Vec<usize>> = all_triangles(7).into_iter().zip(&mask).filter(|(_, &m)| m).map(|(t, _)| t).collect();
        prop_assume!(!tris.is_empty());
        let k = SimplicialComplex::generated_by(7, tris).unwrap();
        for deg in 0..=k.dim() {
            let z = homology(&k, deg, Coefficients::Integers).unwrap();
            prop_assert_eq!(z.free_rank, common::betti(&k, deg, None));
            let fp = homology(&k, deg, Coefficients::Mod(p as u64)).unwrap();
            prop_assert_eq!(fp.torsion.len(), common::betti(&k, deg, Some(p)));
            prop_assert!(fp.torsion.iter().all(|t| *t == BigInt::from(p)));
        }
    }

    #[test]
    fn projective_plane_pieces(mask in prop::collection::vec(any::<bool>(), 10)) {
        let full = rp2();
        let tris: Vec<Vec<usize>> = full.maximal().iter().zip(&mask).filter(|(_, &m)| m).map(|(t, _)| t.to_vec()).collect();
        prop_assume!(!tris.is_empty());
        let k = SimplicialComplex::generated_by(6, tris).unwrap();
        for deg in 0..=k.dim() {
            for p in [2, 3] {
                let fp = homology(&k, deg, Coefficients::Mod(p as u64)).unwrap();
                prop_assert_eq!(fp.torsion.len(), common::betti(&k, deg, Some(p)));
            }
        }
    }

    #[test]
    fn degree_one_always_vanishes(row in 0usize..3) {
        let m = build::three_torus();
        let sigma = build::three_torus_circle(row);
        prop_assert!(class_vanishes_mod_d(&m, &sigma, 1).unwrap().vanishes());
    }

    #[test]
    fn witnesses_bound_the_locus(d in 1i64..40, flip in any::<bool>()) {
        let m = build::octahedron();
        let sign = if flip { -1 } else { 1 };
        let sigma = OrientedSubcomplex::new(&m, 0, vec![(vec![4], sign), (vec![5], -sign)]).unwrap();
        let v = class_vanishes_mod_d(&m, &sigma, d).unwrap();
        let branchforge::homology::Vanishing::Vanishes(w) = v else { panic!("sphere class persists") };
        let b = w.boundary();
        for vtx in 0..6 {
            let want = sigma.simplices().iter().find(|(s, _)| s[0] == vtx).map_or(0, |(_, e)| *e as i64);
            prop_assert_eq!((b.coefficient(&[vtx]) - want).rem_euclid(d), 0);
        }
    }

    #[test]
    fn cone_metric_axioms(
        alpha in 0.3f64..20.0,
        pts in prop::collection::vec((0.0f64..5.0, -30.0f64..30.0), 3),
    ) {
        let c = ConeChart::new(alpha).unwrap();
        let p: Vec<_> = pts.iter().map(|&(r, t)| c.point(r, t).unwrap()).collect();
        let d = |i: usize, j: usize| cone_distance(&c, &p[i], &p[j]);
        prop_assert_eq!(d(0, 0), 0.0);
        prop_assert!((d(0, 1) - d(1, 0)).abs() <= 1e-12);
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12);
        prop_assert!(d(0, 1) <= p[0].r + p[1].r + 1e-12);
        prop_assert!(d(0, 1) >= (p[0].r - p[1].r).abs() - 1e-12);
        prop_assert!((cone_distance(&c, &c.apex(), &p[2]) - p[2].r).abs() <= 1e-15);
    }

    #[test]
    fn rotations_are_isometries(alpha in 0.3f64..20.0, r1 in 0.0f64..4.0, r2 in 0.0f64..4.0, t in 0.0f64..1.0, shift in -50.0f64..50.0) {
        let c = ConeChart::new(alpha).unwrap();
        let (a, b) = (t * alpha, 0.37 * alpha);
        let base = cone_distance(&c, &c.point(r1, a).unwrap(), &c.point(r2, b).unwrap());
        let moved = cone_distance(&c, &c.point(r1, a + shift).unwrap(), &c.point(r2, b + shift).unwrap());
        prop_assert!((base - moved).abs() <= 1e-9);
    }

    #[test]
    fn series_start_satisfies_the_constraint(n in 3usize..8, alpha in 0.2f64..(4.0 * PI), g0 in 0.3f64..1.5) {
        let s = Series::new(n, alpha, g0).unwrap();
        for r in [1e-3, 1e-2] {
            let st = s.state(r);
            prop_assert!(st.f > 0.0 && st.g > 0.0);
            prop_assert!(rr_residual(&st, n).unwrap().abs() < 1e-9);
        }
        prop_assert!((s.state(1e-6).df - alpha / TAU).abs() < 1e-9);
    }
}

fn sphere_setup(d: usize) -> SymmetricSetup {
    let m = build::octahedron();
    let sigma = OrientedSubcomplex::new(&m, 0, vec![(vec![0], -1), (vec![1], 1)]).unwrap();
    let h0 = OrientedSubcomplex::new(&m, 1, vec![(vec![0, 2], 1), (vec![1, 2], -1)]).unwrap();
    SymmetricSetup::new(&m, &build::octahedron_equator_reflection(), &sigma, &h0, d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn lifted_involution_is_dihedral(d in 1usize..8) {
        let s = sphere_setup(d);
        let j: Automorphism = j_involution(&s).unwrap();
        let zeta = &s.cover.deck;
        prop_assert!(j.compose(&j).is_identity());
        prop_assert!(j.is_automorphism_of(&s.cover.total));
        prop_assert_eq!(j.compose(zeta).compose(&j), zeta.inverse());
        let p = &s.cover.projection;
        for v in 0..s.cover.total.vertex_count() {
            prop_assert_eq!(p.vertex(j.apply(v)), s.involution.apply(p.vertex(v)));
        }
    }
}
