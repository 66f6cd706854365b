//! Smith normal form over the integers.
//!
//! The reduction is sparse and records its elementary operations, so that
//! `U·b`, `V·y` and their inverses can be applied to vectors without ever
//! forming the (possibly dense) unimodular factors. [`smith_normal_form`]
//! materializes them for callers who want the matrices.
//!
//! Pivoting: the active entry of smallest absolute value, ties broken by
//! lowest (row, column). Its column is cleared by row operations and then its
//! row by column operations; whenever a nonzero remainder appears the pivot is
//! chosen again. Finished pivots are moved onto the diagonal in the order they
//! were completed, the diagonal is made positive, and pairs violating the
//! divisibility chain are repaired with 2x2 unimodular moves.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// Elementary line operation. Acting on lines `x` (rows of a matrix or entries
/// of a vector):
/// `Add` sets `x[dst] += q x[src]`; `Mix` sets
/// `(x[i], x[j]) = (m0 x[i] + m1 x[j], m2 x[i] + m3 x[j])` with `det = ±1`;
/// `Perm` sets `x'[k] = x[p[k]]`.
#[derive(Clone, Debug)]
enum Op {
    Add { src: usize, dst: usize, q: BigInt },
    Neg(usize),
    Mix { i: usize, j: usize, m: Box<[BigInt; 4]> },
    Perm(Vec<usize>),
}

#[derive(Clone, Copy)]
enum Mode {
    Forward,
    Inverse,
    Transpose,
    InverseTranspose,
}

trait Lines {
    fn add(&mut self, dst: usize, src: usize, q: &BigInt);
    fn neg(&mut self, i: usize);
    fn mix(&mut self, i: usize, j: usize, m: &[BigInt; 4]);
    fn permute(&mut self, p: &[usize]);
}

impl Lines for Vec<BigInt> {
    fn add(&mut self, dst: usize, src: usize, q: &BigInt) {
        if !self[src].is_zero() {
            let t = q * &self[src];
            self[dst] += t;
        }
    }
    fn neg(&mut self, i: usize) {
        self[i] = -std::mem::take(&mut self[i]);
    }
    fn mix(&mut self, i: usize, j: usize, m: &[BigInt; 4]) {
        let (a, b) = (self[i].clone(), self[j].clone());
        self[i] = &m[0] * &a + &m[1] * &b;
        self[j] = &m[2] * &a + &m[3] * &b;
    }
    fn permute(&mut self, p: &[usize]) {
        let old = std::mem::take(self);
        *self = p.iter().map(|&k| old[k].clone()).collect();
    }
}

type SparseRow = BTreeMap<usize, BigInt>;

fn row_combination(a: &SparseRow, ca: &BigInt, b: &SparseRow, cb: &BigInt) -> SparseRow {
    let mut out = SparseRow::new();
    for (&k, x) in a {
        out.insert(k, ca * x);
    }
    for (&k, y) in b {
        let e = out.entry(k).or_default();
        *e += cb * y;
    }
    out.retain(|_, x| !x.is_zero());
    out
}

impl Lines for Vec<SparseRow> {
    fn add(&mut self, dst: usize, src: usize, q: &BigInt) {
        let src_row = self[src].clone();
        let row = &mut self[dst];
        for (k, x) in src_row {
            let e = row.entry(k).or_default();
            *e += q * x;
            if e.is_zero() {
                row.remove(&k);
            }
        }
    }
    fn neg(&mut self, i: usize) {
        for x in self[i].values_mut() {
            *x = -std::mem::take(x);
        }
    }
    fn mix(&mut self, i: usize, j: usize, m: &[BigInt; 4]) {
        let ri = row_combination(&self[i], &m[0], &self[j], &m[1]);
        let rj = row_combination(&self[i], &m[2], &self[j], &m[3]);
        self[i] = ri;
        self[j] = rj;
    }
    fn permute(&mut self, p: &[usize]) {
        let mut old: Vec<Option<SparseRow>> = std::mem::take(self).into_iter().map(Some).collect();
        *self = p.iter().map(|&k| old[k].take().expect("not a permutation")).collect();
    }
}

fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (k, &v) in p.iter().enumerate() {
        inv[v] = k;
    }
    inv
}

fn inverse_2x2(m: &[BigInt; 4]) -> [BigInt; 4] {
    let det = &m[0] * &m[3] - &m[1] * &m[2];
    debug_assert!(det.abs().is_one());
    [&det * &m[3], -(&det * &m[1]), -(&det * &m[2]), &det * &m[0]]
}

impl Op {
    fn act<L: Lines>(&self, mode: Mode, x: &mut L) {
        match (self, mode) {
            (Op::Add { src, dst, q }, Mode::Forward) => x.add(*dst, *src, q),
            (Op::Add { src, dst, q }, Mode::Inverse) => x.add(*dst, *src, &-q),
            (Op::Add { src, dst, q }, Mode::Transpose) => x.add(*src, *dst, q),
            (Op::Add { src, dst, q }, Mode::InverseTranspose) => x.add(*src, *dst, &-q),
            (Op::Neg(i), _) => x.neg(*i),
            (Op::Mix { i, j, m }, mode) => {
                let m: [BigInt; 4] = match mode {
                    Mode::Forward => (**m).clone(),
                    Mode::Inverse => inverse_2x2(m),
                    Mode::Transpose => [m[0].clone(), m[2].clone(), m[1].clone(), m[3].clone()],
                    Mode::InverseTranspose => {
                        let v = inverse_2x2(m);
                        [v[0].clone(), v[2].clone(), v[1].clone(), v[3].clone()]
                    }
                };
                x.mix(*i, *j, &m);
            }
            (Op::Perm(p), Mode::Forward | Mode::InverseTranspose) => x.permute(p),
            (Op::Perm(p), Mode::Inverse | Mode::Transpose) => x.permute(&invert_perm(p)),
        }
    }
}

/// Result of the reduction `U·A·V = D`, with the operations kept as a
/// transcript.
#[derive(Clone, Debug)]
pub(crate) struct Reduction {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub divisors: Vec<BigInt>,
    row_ops: Vec<Op>,
    col_ops: Vec<Op>,
}

struct Active {
    rows: Vec<SparseRow>,
    col_support: Vec<BTreeSet<usize>>,
    keys: BTreeSet<(BigInt, usize, usize)>,
}

impl Active {
    fn set(&mut self, i: usize, j: usize, new: BigInt) {
        if let Some(old) = self.rows[i].get(&j) {
            self.keys.remove(&(old.abs(), i, j));
        }
        if new.is_zero() {
            self.rows[i].remove(&j);
            self.col_support[j].remove(&i);
        } else {
            self.keys.insert((new.abs(), i, j));
            self.rows[i].insert(j, new);
            self.col_support[j].insert(i);
        }
    }

    fn get(&self, i: usize, j: usize) -> BigInt {
        self.rows[i].get(&j).cloned().unwrap_or_default()
    }
}

impl Reduction {
    pub fn of(a: &IntMatrix, track: bool) -> Self {
        let (m, n) = (a.nrows(), a.ncols());
        let mut act = Active {
            rows: (0..m).map(|i| a.row(i).clone()).collect(),
            col_support: vec![BTreeSet::new(); n],
            keys: BTreeSet::new(),
        };
        for (i, row) in act.rows.iter().enumerate() {
            for (&j, x) in row {
                act.col_support[j].insert(i);
                act.keys.insert((x.abs(), i, j));
            }
        }
        let mut row_ops = Vec::new();
        let mut col_ops = Vec::new();
        let mut pivots: Vec<(usize, usize, BigInt)> = Vec::new();

        while let Some((_, r, c)) = act.keys.first().cloned() {
            let p = act.get(r, c);
            let mut remainder = false;
            let others: Vec<usize> = act.col_support[c].iter().copied().filter(|&i| i != r).collect();
            let pivot_row = act.rows[r].clone();
            for i in others {
                let q = -(act.get(i, c) / &p);
                if !q.is_zero() {
                    for (&j, x) in &pivot_row {
                        let new = act.get(i, j) + &q * x;
                        act.set(i, j, new);
                    }
                    if track {
                        row_ops.push(Op::Add { src: r, dst: i, q });
                    }
                }
                remainder |= act.rows[i].contains_key(&c);
            }
            if remainder {
                continue;
            }
            let others: Vec<usize> = act.rows[r].keys().copied().filter(|&j| j != c).collect();
            for j in others {
                let q = -(act.get(r, j) / &p);
                if !q.is_zero() {
                    let new = act.get(r, j) + &q * &p;
                    act.set(r, j, new);
                    if track {
                        col_ops.push(Op::Add { src: c, dst: j, q });
                    }
                }
                remainder |= act.rows[r].contains_key(&j);
            }
            if remainder {
                continue;
            }
            act.set(r, c, BigInt::zero());
            pivots.push((r, c, p));
        }

        let rank = pivots.len();
        let mut diag: Vec<BigInt> = pivots.iter().map(|(_, _, p)| p.clone()).collect();
        if track {
            let arrange = |used: Vec<usize>, len: usize| {
                let mut seen = vec![false; len];
                for &u in &used {
                    seen[u] = true;
                }
                let mut perm = used;
                perm.extend((0..len).filter(|&k| !seen[k]));
                perm
            };
            row_ops.push(Op::Perm(arrange(pivots.iter().map(|t| t.0).collect(), m)));
            col_ops.push(Op::Perm(arrange(pivots.iter().map(|t| t.1).collect(), n)));
        }
        for (k, d) in diag.iter_mut().enumerate() {
            if d.is_negative() {
                *d = -std::mem::take(d);
                if track {
                    row_ops.push(Op::Neg(k));
                }
            }
        }
        for i in 0..rank {
            for j in i + 1..rank {
                if (&diag[j] % &diag[i]).is_zero() {
                    continue;
                }
                let (a, b) = (diag[i].clone(), diag[j].clone());
                let e = a.extended_gcd(&b);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let (a1, b1) = (&a / &g, &b / &g);
                if track {
                    row_ops.push(Op::Mix { i, j, m: Box::new([s.clone(), t.clone(), -&b1, a1.clone()]) });
                    col_ops.push(Op::Mix {
                        i,
                        j,
                        m: Box::new([BigInt::one(), BigInt::one(), -(&t * &b1), &s * &a1]),
                    });
                }
                diag[j] = &a * &b1;
                diag[i] = g;
            }
        }
        Reduction { rows: m, cols: n, divisors: diag, row_ops, col_ops }
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    fn tracked(&self) {
        assert!(
            self.rows == 0 || self.cols == 0 || !self.row_ops.is_empty(),
            "reduction was computed without tracking"
        );
    }

    /// `U·b`.
    pub fn apply_u(&self, b: &[BigInt]) -> Vec<BigInt> {
        self.tracked();
        let mut x = b.to_vec();
        for op in &self.row_ops {
            op.act(Mode::Forward, &mut x);
        }
        x
    }

    /// `U⁻¹·b`.
    #[allow(dead_code)]
    pub fn apply_u_inv(&self, b: &[BigInt]) -> Vec<BigInt> {
        self.tracked();
        let mut x = b.to_vec();
        for op in self.row_ops.iter().rev() {
            op.act(Mode::Inverse, &mut x);
        }
        x
    }

    /// `V·y`.
    pub fn apply_v(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.tracked();
        let mut x = y.to_vec();
        for op in self.col_ops.iter().rev() {
            op.act(Mode::Transpose, &mut x);
        }
        x
    }

    /// `V⁻¹·x`.
    #[allow(dead_code)]
    pub fn apply_v_inv(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.tracked();
        let mut y = x.to_vec();
        for op in &self.col_ops {
            op.act(Mode::InverseTranspose, &mut y);
        }
        y
    }

    fn materialize(ops: &[Op], mode: Mode, n: usize, transpose: bool) -> IntMatrix {
        let mut rows: Vec<SparseRow> = (0..n).map(|i| SparseRow::from([(i, BigInt::one())])).collect();
        for op in ops {
            op.act(mode, &mut rows);
        }
        let m = IntMatrix::from_rows(n, n, rows);
        if transpose {
            m.transpose()
        } else {
            m
        }
    }

    pub fn into_decomposition(self) -> SnfDecomposition {
        let (m, n) = (self.rows, self.cols);
        let u = Self::materialize(&self.row_ops, Mode::Forward, m, false);
        let u_inv = Self::materialize(&self.row_ops, Mode::InverseTranspose, m, true);
        let v = Self::materialize(&self.col_ops, Mode::Forward, n, true);
        let v_inv = Self::materialize(&self.col_ops, Mode::InverseTranspose, n, false);
        let mut diagonal = self.divisors.clone();
        diagonal.resize(m.min(n), BigInt::zero());
        SnfDecomposition { rows: m, cols: n, u, u_inv, diagonal, v, v_inv }
    }
}

/// `U·A·V = D` with `D` diagonal, `U`, `V` unimodular and `U⁻¹`, `V⁻¹` given
/// explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub rows: usize,
    pub cols: usize,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    /// `min(rows, cols)` diagonal entries: the positive divisors in divisibility
    /// order, then zeros.
    pub diagonal: Vec<BigInt>,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// The diagonal as a `rows x cols` matrix.
    pub fn d_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (k, x) in self.diagonal.iter().enumerate() {
            d.set(k, k, x.clone());
        }
        d
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    Reduction::of(a, true).into_decomposition()
}

/// Nonzero invariant factors only; skips all bookkeeping.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    Reduction::of(a, false).divisors
}
