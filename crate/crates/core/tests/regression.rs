use std::f64::consts::PI;

use branchforge::complex::build;
use branchforge::einstein::{shoot, DEFAULT_R_MAX, DEFAULT_STEP, DEFAULT_TOL};
use branchforge::homology::{homology, Coefficients};

#[test]
fn frozen_shooting_parameters() {
    let table = [
        (3, PI, 0.5),
        (4, PI / 2.0, 0.666_666_664),
        (4, PI, 0.767_591_877),
        (4, 1.5 * PI, 0.879_152_867),
        (5, PI / 2.0, 0.772_363_542),
        (5, PI, 0.843_070_329),
        (5, 1.5 * PI, 0.919_043_743),
    ];
    for (n, alpha, g0) in table {
        let shot = shoot(n, alpha, DEFAULT_TOL, DEFAULT_R_MAX, DEFAULT_STEP).unwrap();
        assert!((shot.g0 - g0).abs() < 1e-8, "n = {n}, alpha = {alpha}: {}", shot.g0);
    }
}

#[test]
fn frozen_homology() {
    let betti = |k: &branchforge::complex::SimplicialComplex| -> Vec<usize> {
        (0..=k.dim()).map(|i| homology(k, i, Coefficients::Integers).unwrap().free_rank).collect()
    };
    assert_eq!(betti(&build::three_torus()), vec![1, 3, 3, 1]);
    assert_eq!(betti(&build::torus_product()), vec![1, 4, 6, 4, 1]);
    assert_eq!(betti(&build::seven_vertex_torus()), vec![1, 2, 1]);
    assert_eq!(build::torus_product().f_vector(), vec![49, 735, 2450, 2940, 1176]);
}
