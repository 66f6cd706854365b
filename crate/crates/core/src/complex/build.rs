//! Standard triangulations used as test and example inputs.

use super::{Automorphism, OrientedSubcomplex, Simplex, SimplicialComplex};

fn oriented(vertex_count: usize, simplices: Vec<Simplex>) -> SimplicialComplex {
    let k = SimplicialComplex::new(vertex_count, simplices.into_iter().map(|s| (s, 1)).collect())
        .expect("builder produced an invalid complex");
    k.coherently_oriented().expect("builder produced a non-orientable complex")
}

/// Boundary of the octahedron. Labels: 0 = +x, 1 = -x, 2 = +y, 3 = -y, 4 = +z, 5 = -z.
pub fn octahedron() -> SimplicialComplex {
    let mut tris = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                tris.push(vec![a, b, c]);
            }
        }
    }
    oriented(6, tris)
}

/// Reflection of the octahedron in the equator `z = 0` (swaps the poles 4 and 5).
pub fn octahedron_equator_reflection() -> Automorphism {
    Automorphism::new(vec![0, 1, 2, 3, 5, 4]).unwrap()
}

/// Cycle graph on `n >= 3` vertices.
pub fn circle(n: usize) -> SimplicialComplex {
    assert!(n >= 3);
    oriented(n, (0..n).map(|i| vec![i, (i + 1) % n]).collect())
}

/// Boundary of the standard `(dim + 1)`-simplex: a `dim`-sphere.
pub fn simplex_boundary(dim: usize) -> SimplicialComplex {
    let n = dim + 2;
    oriented(n, (0..n).map(|skip| (0..n).filter(|&v| v != skip).collect()).collect())
}

/// Torus from a `w x h` grid (both at least 3), squares split along the main
/// diagonal. Vertex `(x, y)` has label `x + w * y`.
pub fn torus_grid(w: usize, h: usize) -> SimplicialComplex {
    assert!(w >= 3 && h >= 3);
    let v = |x: usize, y: usize| (x % w) + w * (y % h);
    let mut tris = Vec::new();
    for y in 0..h {
        for x in 0..w {
            tris.push(vec![v(x, y), v(x + 1, y), v(x + 1, y + 1)]);
            tris.push(vec![v(x, y), v(x, y + 1), v(x + 1, y + 1)]);
        }
    }
    oriented(w * h, tris)
}

/// The 7-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn seven_vertex_torus() -> SimplicialComplex {
    let tris = (0..7)
        .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
        .collect();
    oriented(7, tris)
}

/// Staircase triangulation of the product of two pure complexes. Vertex
/// `(a, b)` has label `a * right.vertex_count() + b`.
pub fn product(left: &SimplicialComplex, right: &SimplicialComplex) -> SimplicialComplex {
    let stride = right.vertex_count();
    let mut tops = Vec::new();
    for s in left.maximal() {
        for t in right.maximal() {
            let (p, q) = (s.len() - 1, t.len() - 1);
            // monotone lattice paths from (0, 0) to (p, q)
            for mask in 0u32..(1 << (p + q)) {
                if mask.count_ones() as usize != q {
                    continue;
                }
                let (mut i, mut j) = (0, 0);
                let mut simplex = vec![s[0] * stride + t[0]];
                for step in 0..p + q {
                    if mask & (1 << step) != 0 {
                        j += 1;
                    } else {
                        i += 1;
                    }
                    simplex.push(s[i] * stride + t[j]);
                }
                tops.push(simplex);
            }
        }
    }
    oriented(left.vertex_count() * stride, tops)
}

/// A 3-torus `T^2 x S^1` with a `3 x 4` grid torus as horizontal slice and four
/// layers. Prisms in layers 0 and 1 are split from the bottom, layers 2 and 3
/// from the top, so that `z -> -z` is a simplicial involution. Vertex
/// `(x, y, z)` has label `x + 3 y + 12 z`.
pub fn three_torus() -> SimplicialComplex {
    let slice = torus_grid(3, 4);
    let layers = 4;
    let n = slice.vertex_count();
    let mut tops = Vec::new();
    for z in 0..layers {
        let lo = |v: usize| v + n * z;
        let hi = |v: usize| v + n * ((z + 1) % layers);
        let (first, second): (&dyn Fn(usize) -> usize, &dyn Fn(usize) -> usize) =
            if z < 2 { (&lo, &hi) } else { (&hi, &lo) };
        for tri in slice.maximal() {
            let (a, b, c) = (tri[0], tri[1], tri[2]);
            tops.push(vec![first(a), first(b), first(c), second(c)]);
            tops.push(vec![first(a), first(b), second(b), second(c)]);
            tops.push(vec![first(a), second(a), second(b), second(c)]);
        }
    }
    oriented(n * layers, tops)
}

/// The reflection `z -> -z` of [`three_torus`].
pub fn three_torus_reflection() -> Automorphism {
    let n = 12;
    let perm = (0..4 * n).map(|v| v % n + n * ((4 - v / n) % 4)).collect();
    Automorphism::new(perm).unwrap()
}

/// Label of `(x, y, z)` in [`three_torus`].
pub fn three_torus_vertex(x: usize, y: usize, z: usize) -> usize {
    x % 3 + 3 * (y % 4) + 12 * (z % 4)
}

/// The circle `y = row, z = 0` of [`three_torus`], oriented along `x`.
pub fn three_torus_circle(row: usize) -> OrientedSubcomplex {
    let k = three_torus();
    let edges = (0..3)
        .map(|x| {
            let (a, b) = (three_torus_vertex(x, row, 0), three_torus_vertex(x + 1, row, 0));
            (vec![a, b], 1)
        })
        .collect();
    OrientedSubcomplex::new(&k, 1, edges).unwrap()
}

/// The annulus `0 <= y <= 2` in the slice `z = 0` of [`three_torus`], oriented
/// like the slice, together with its boundary: the circles `y = 0` and `y = 2`
/// with opposite orientations.
pub fn three_torus_annulus() -> (OrientedSubcomplex, OrientedSubcomplex) {
    let k = three_torus();
    let slice = torus_grid(3, 4);
    let tops = slice
        .maximal()
        .iter()
        .zip(slice.signs())
        .filter(|(s, _)| s.iter().all(|&v| v / 3 <= 2) && s.iter().any(|&v| v / 3 == 1))
        .map(|(s, &g)| (s.clone(), g))
        .collect();
    let h0 = OrientedSubcomplex::new(&k, 2, tops).unwrap();
    let sigma = h0.boundary().into_iter().map(|(e, c)| (e, c as i8)).collect();
    (OrientedSubcomplex::new(&k, 1, sigma).unwrap(), h0)
}

/// `T² x T²` on the 7-vertex torus; vertex `(a, b)` has label `7 a + b`.
pub fn torus_product() -> SimplicialComplex {
    let t = seven_vertex_torus();
    product(&t, &t)
}

/// The factor `T² x {0}` of [`torus_product`], oriented like the torus.
pub fn torus_product_factor() -> OrientedSubcomplex {
    let t = seven_vertex_torus();
    let point = SimplicialComplex::new(1, vec![(vec![0], 1)]).unwrap();
    let slice = product(&t, &point);
    let tops = slice
        .maximal()
        .iter()
        .zip(slice.signs())
        .map(|(s, &g)| (s.iter().map(|&v| 7 * v).collect(), g))
        .collect();
    OrientedSubcomplex::new(&torus_product(), 2, tops).unwrap()
}
