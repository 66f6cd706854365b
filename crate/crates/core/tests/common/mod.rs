//! Independent reference computations. Nothing here calls into the Smith
//! normal form code; boundaries are rebuilt from vertex lists.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use branchforge::complex::{OrientedSubcomplex, SimplicialComplex};

pub fn data_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Sparse integer columns: `cols[j]` maps row index to entry.
pub type Columns = Vec<BTreeMap<usize, i64>>;

/// The boundary map from `k`-faces to `(k-1)`-faces, from first principles.
pub fn boundary_columns(k: &SimplicialComplex, deg: usize) -> (Columns, HashMap<Vec<usize>, usize>) {
    let rows: HashMap<Vec<usize>, usize> =
        k.faces(deg - 1).iter().enumerate().map(|(i, s)| (s.to_vec(), i)).collect();
    let cols = k
        .faces(deg)
        .iter()
        .map(|s| {
            let mut col = BTreeMap::new();
            for i in 0..s.len() {
                let mut f = s.to_vec();
                f.remove(i);
                col.insert(rows[&f], if i % 2 == 0 { 1 } else { -1 });
            }
            col
        })
        .collect();
    (cols, rows)
}

pub fn target_vector(sigma: &OrientedSubcomplex, rows: &HashMap<Vec<usize>, usize>) -> Vec<i64> {
    let mut b = vec![0; rows.len()];
    for (s, sign) in sigma.simplices() {
        b[rows[&s.to_vec()]] += *sign as i64;
    }
    b
}

fn factor(mut d: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        let mut k = 0;
        while d % p == 0 {
            d /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if d > 1 {
        out.push((d, 1));
    }
    out
}

fn valuation(mut x: i64, p: i64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn inverse_mod(a: i64, m: i64) -> i64 {
    let (mut r0, mut r1, mut s0, mut s1) = (m, a.rem_euclid(m), 0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "{a} is not a unit mod {m}");
    s0.rem_euclid(m)
}

/// Decides `A x ≡ b (mod p^k)` by full pivoting on minimal p-adic valuation.
/// Every pivot row ends up as `u p^v x'_c = b_r` for a unit `u`.
pub fn solvable_mod_prime_power(cols: &Columns, b: &[i64], p: u64, k: u32) -> bool {
    let q = (p as i64).pow(k);
    let pp = p as i64;
    let mut rows: Vec<HashMap<usize, i64>> = vec![HashMap::new(); b.len()];
    let mut in_col: HashMap<usize, HashSet<usize>> = HashMap::new();
    for (j, col) in cols.iter().enumerate() {
        for (&i, &x) in col {
            let x = x.rem_euclid(q);
            if x != 0 {
                rows[i].insert(j, x);
                in_col.entry(j).or_default().insert(i);
            }
        }
    }
    let mut rhs: Vec<i64> = b.iter().map(|x| x.rem_euclid(q)).collect();
    let mut live: HashSet<usize> = (0..b.len()).filter(|&i| !rows[i].is_empty()).collect();
    let mut pivots = HashSet::new();
    while !live.is_empty() {
        // minimal valuation, then shortest column; any unit will do
        let mut best: Option<(u32, usize, usize, usize)> = None;
        'scan: for &i in &live {
            for (&j, &x) in &rows[i] {
                let cand = (valuation(x, pp), in_col[&j].len(), i, j);
                if best.map_or(true, |b| cand < b) {
                    best = Some(cand);
                }
                if cand.0 == 0 && cand.1 <= 2 {
                    break 'scan;
                }
            }
        }
        let (v, _, r, c) = best.unwrap();
        let pv = pp.pow(v);
        let unit = rows[r][&c] / pv;
        let uinv = inverse_mod(unit, q);
        let others: Vec<usize> = in_col[&c].iter().copied().filter(|&i| i != r).collect();
        let pivot_row: Vec<(usize, i64)> = rows[r].iter().map(|(&j, &x)| (j, x)).collect();
        for i in others {
            let factor = ((rows[i][&c] / pv) % q * uinv).rem_euclid(q);
            for &(j, x) in &pivot_row {
                let e = rows[i].entry(j).or_insert(0);
                *e = (*e - factor * x % q).rem_euclid(q);
                if *e == 0 {
                    rows[i].remove(&j);
                    in_col.get_mut(&j).unwrap().remove(&i);
                } else {
                    in_col.entry(j).or_default().insert(i);
                }
            }
            rhs[i] = (rhs[i] - factor * rhs[r] % q).rem_euclid(q);
            if rows[i].is_empty() {
                live.remove(&i);
            }
        }
        if rhs[r] % pv != 0 {
            return false;
        }
        for (j, _) in pivot_row {
            in_col.get_mut(&j).unwrap().remove(&r);
        }
        rows[r].clear();
        live.remove(&r);
        pivots.insert(r);
    }
    (0..b.len()).all(|i| pivots.contains(&i) || rhs[i] == 0)
}

/// `A x ≡ b (mod d)` via the Chinese remainder theorem over prime powers.
pub fn solvable_mod_d(cols: &Columns, b: &[i64], d: u64) -> bool {
    factor(d).into_iter().all(|(p, k)| solvable_mod_prime_power(cols, b, p, k))
}

/// Breadth-first closure of the column span in `(Z/d)^rows`: every boundary
/// of a mod-d chain is visited, and `b` is looked up among them.
pub fn exhaustive_in_span(cols: &Columns, b: &[i64], d: u64) -> bool {
    let d = d as i64;
    let target: Vec<i64> = b.iter().map(|x| x.rem_euclid(d)).collect();
    let zero = vec![0i64; b.len()];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(v) = queue.pop_front() {
        if v == target {
            return true;
        }
        for col in cols {
            for sign in [1, -1] {
                let mut w = v.clone();
                for (&i, &x) in col {
                    w[i] = (w[i] + sign * x).rem_euclid(d);
                }
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
    }
    false
}

/// Exhaustive search when the chain space has at most `limit` basis chains,
/// the prime-power elimination otherwise.
pub fn vanishes_oracle(k: &SimplicialComplex, sigma: &OrientedSubcomplex, d: u64, limit: usize) -> bool {
    let n = k.dim();
    let (cols, rows) = boundary_columns(k, n - 1);
    let b = target_vector(sigma, &rows);
    if cols.len() <= limit {
        exhaustive_in_span(&cols, &b, d)
    } else {
        solvable_mod_d(&cols, &b, d)
    }
}

/// Rank of a dense integer matrix over the rationals, by fraction-free elimination.
pub fn rank_rational(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, p);
        for i in rank + 1..rows {
            if a[i][c] != 0 {
                let (x, y) = (a[rank][c], a[i][c]);
                for j in c..cols {
                    a[i][j] = a[i][j] * x - a[rank][j] * y;
                }
                let g = a[i].iter().fold(0i128, |g, &v| gcd(g, v.abs()));
                if g > 1 {
                    a[i].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn rank_mod_p(m: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = inverse_mod(a[rank][c], p);
        for i in 0..rows {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c] * inv % p;
                for j in c..cols {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn dense(cols: &Columns, nrows: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; cols.len()]; nrows];
    for (j, col) in cols.iter().enumerate() {
        for (&i, &x) in col {
            m[i][j] = x;
        }
    }
    m
}

/// Betti number over the rationals, or over `F_p` when `p` is given.
pub fn betti(k: &SimplicialComplex, deg: usize, p: Option<i64>) -> usize {
    let rank = |m: &[Vec<i64>]| match p {
        Some(p) => rank_mod_p(m, p),
        None => rank_rational(m),
    };
    let chains = k.faces(deg).len();
    let out = if deg == 0 {
        0
    } else {
        let (c, _) = boundary_columns(k, deg);
        rank(&dense(&c, k.faces(deg - 1).len()))
    };
    let inc = if deg + 1 > k.dim() {
        0
    } else {
        let (c, _) = boundary_columns(k, deg + 1);
        rank(&dense(&c, chains))
    };
    chains - out - inc
}
