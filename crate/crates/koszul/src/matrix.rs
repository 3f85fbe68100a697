//! Sparse exact matrices and the normal forms the engine is built on.
//!
//! Everything here is deterministic: pivot rules are fixed (minimal absolute
//! value, ties broken by lowest row then lowest column for Smith reduction;
//! leftmost-lowest for Hermite reduction), so repeated runs produce identical
//! transforms, kernels and solutions.

use crate::ring::{BaseRing, Scalar};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A sparse matrix with exact entries over a fixed base ring.
///
/// Only nonzero entries are stored.  Row and column counts are explicit so
/// zero rows and columns are meaningful.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: BaseRing,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

/// Which deterministic route `solve_in_image` takes.  The two strategies pick
/// different particular solutions when the kernel is nontrivial; homology
/// classes computed from either must agree, which the test suite exploits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiftStrategy {
    #[default]
    Primary,
    Alternate,
}

/// Result of Smith reduction: `u * m * v = d` with `u`, `v` unimodular and
/// the diagonal of `d` a divisibility chain of nonnegative integers.
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub u: ExactMatrix,
    pub d: ExactMatrix,
    pub v: ExactMatrix,
    pub u_inv: ExactMatrix,
}

impl SmithNormalForm {
    /// Diagonal entries of `d` as integers, padded with zeros to the full
    /// length `min(rows, cols)` is not included; only stored entries up to the
    /// last nonzero appear.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d.get(i, i).expect_int().clone())
            .collect()
    }
}

/// Column Hermite data: `m * v = h` with `v` unimodular and `h` in column
/// echelon form.  `pivots[i]` is the row of the pivot of column `i`.
#[derive(Debug, Clone)]
pub struct ColumnEchelon {
    pub h: ExactMatrix,
    pub v: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn zero(ring: BaseRing, rows: usize, cols: usize) -> Self {
        ExactMatrix { ring, rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(ring: BaseRing, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows_i64(ring: BaseRing, data: &[&[i64]]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut m = Self::zero(ring, rows, cols);
        for (i, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row data");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, ring.from_i64(*v));
            }
        }
        m
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.entries.get(&(i, j)).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        if self.ring.is_zero(&v) {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    /// Adds `v` into position `(i, j)`.
    pub fn add_at(&mut self, i: usize, j: usize, v: &Scalar) {
        let cur = self.get(i, j);
        self.set(i, j, self.ring.add(&cur, v));
    }

    pub fn iter_entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = Self::zero(self.ring, self.cols, self.rows);
        for (i, j, v) in self.iter_entries() {
            t.set(j, i, v.clone());
        }
        t
    }

    pub fn neg(&self) -> ExactMatrix {
        let mut m = self.clone();
        for v in m.entries.values_mut() {
            *v = self.ring.neg(v);
        }
        m
    }

    pub fn scale(&self, c: &Scalar) -> ExactMatrix {
        let mut m = Self::zero(self.ring, self.rows, self.cols);
        for (i, j, v) in self.iter_entries() {
            m.set(i, j, self.ring.mul(v, c));
        }
        m
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.ring, other.ring);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let mut m = self.clone();
        for (i, j, v) in other.iter_entries() {
            m.add_at(i, j, v);
        }
        m
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.ring, other.ring);
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        // index rhs by row for the sparse product
        let mut by_row: Vec<Vec<(usize, &Scalar)>> = vec![Vec::new(); other.rows];
        for (k, j, v) in other.iter_entries() {
            by_row[k].push((j, v));
        }
        let mut m = Self::zero(self.ring, self.rows, other.cols);
        for (i, k, a) in self.iter_entries() {
            for (j, b) in &by_row[k] {
                let t = self.ring.mul(a, b);
                m.add_at(i, *j, &t);
            }
        }
        m
    }

    /// Applies the matrix to a coordinate vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch in apply");
        let mut out = vec![self.ring.zero(); self.rows];
        for (i, j, a) in self.iter_entries() {
            if !self.ring.is_zero(&v[j]) {
                let t = self.ring.mul(a, &v[j]);
                out[i] = self.ring.add(&out[i], &t);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Scalar]) {
        assert_eq!(v.len(), self.rows);
        for (i, x) in v.iter().enumerate() {
            self.set(i, j, x.clone());
        }
    }

    pub fn from_columns(ring: BaseRing, rows: usize, cols: &[Vec<Scalar>]) -> ExactMatrix {
        let mut m = Self::zero(ring, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            m.set_column(j, c);
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.ring, other.ring);
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut m = Self::zero(self.ring, self.rows, self.cols + other.cols);
        for (i, j, v) in self.iter_entries() {
            m.set(i, j, v.clone());
        }
        for (i, j, v) in other.iter_entries() {
            m.set(i, j + self.cols, v.clone());
        }
        m
    }

    pub fn vstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.ring, other.ring);
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut m = Self::zero(self.ring, self.rows + other.rows, self.cols);
        for (i, j, v) in self.iter_entries() {
            m.set(i, j, v.clone());
        }
        for (i, j, v) in other.iter_entries() {
            m.set(i + self.rows, j, v.clone());
        }
        m
    }

    pub fn block_diag(ring: BaseRing, blocks: &[&ExactMatrix]) -> ExactMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zero(ring, rows, cols);
        let mut ro = 0;
        let mut co = 0;
        for b in blocks {
            assert_eq!(b.ring, ring);
            for (i, j, v) in b.iter_entries() {
                m.set(i + ro, j + co, v.clone());
            }
            ro += b.rows;
            co += b.cols;
        }
        m
    }

    /// Keeps the given columns, in order.
    pub fn select_columns(&self, keep: &[usize]) -> ExactMatrix {
        let mut m = Self::zero(self.ring, self.rows, keep.len());
        for (new_j, &j) in keep.iter().enumerate() {
            for i in 0..self.rows {
                let v = self.get(i, j);
                m.set(i, new_j, v);
            }
        }
        m
    }

    /// Keeps rows `0..keep_rows`, dropping the rest.
    pub fn top_rows(&self, keep_rows: usize) -> ExactMatrix {
        assert!(keep_rows <= self.rows);
        let mut m = Self::zero(self.ring, keep_rows, self.cols);
        for (i, j, v) in self.iter_entries() {
            if i < keep_rows {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    // elementary operations; every normal form below is a composition of these

    fn swap_rows_simple(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let mut row_a: Vec<(usize, Scalar)> = Vec::new();
        let mut row_b: Vec<(usize, Scalar)> = Vec::new();
        let keys: Vec<(usize, usize)> = self
            .entries
            .keys()
            .filter(|(i, _)| *i == a || *i == b)
            .copied()
            .collect();
        for k in keys {
            let v = self.entries.remove(&k).unwrap();
            if k.0 == a {
                row_a.push((k.1, v));
            } else {
                row_b.push((k.1, v));
            }
        }
        for (j, v) in row_a {
            self.entries.insert((b, j), v);
        }
        for (j, v) in row_b {
            self.entries.insert((a, j), v);
        }
    }

    fn swap_cols_simple(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let mut col_a: Vec<(usize, Scalar)> = Vec::new();
        let mut col_b: Vec<(usize, Scalar)> = Vec::new();
        let keys: Vec<(usize, usize)> = self
            .entries
            .keys()
            .filter(|(_, j)| *j == a || *j == b)
            .copied()
            .collect();
        for k in keys {
            let v = self.entries.remove(&k).unwrap();
            if k.1 == a {
                col_a.push((k.0, v));
            } else {
                col_b.push((k.0, v));
            }
        }
        for (i, v) in col_a {
            self.entries.insert((i, b), v);
        }
        for (i, v) in col_b {
            self.entries.insert((i, a), v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        let keys: Vec<(usize, usize)> = self.entries.keys().filter(|(i, _)| *i == r).copied().collect();
        for k in keys {
            let v = self.entries.get(&k).unwrap().clone();
            self.entries.insert(k, self.ring.neg(&v));
        }
    }

    fn negate_col(&mut self, c: usize) {
        let keys: Vec<(usize, usize)> = self.entries.keys().filter(|(_, j)| *j == c).copied().collect();
        for k in keys {
            let v = self.entries.get(&k).unwrap().clone();
            self.entries.insert(k, self.ring.neg(&v));
        }
    }

    /// row[target] += q * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, q: &Scalar) {
        if self.ring.is_zero(q) {
            return;
        }
        let src: Vec<(usize, Scalar)> = self
            .entries
            .iter()
            .filter(|((i, _), _)| *i == source)
            .map(|(&(_, j), v)| (j, v.clone()))
            .collect();
        for (j, v) in src {
            let t = self.ring.mul(q, &v);
            self.add_at(target, j, &t);
        }
    }

    /// col[target] += q * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, q: &Scalar) {
        if self.ring.is_zero(q) {
            return;
        }
        let src: Vec<(usize, Scalar)> = self
            .entries
            .iter()
            .filter(|((_, j), _)| *j == source)
            .map(|(&(i, _), v)| (i, v.clone()))
            .collect();
        for (i, v) in src {
            let t = self.ring.mul(q, &v);
            self.add_at(i, target, &t);
        }
    }

    /// Smith normal form over the integers.  Pivot rule: minimal absolute
    /// value in the working block, ties broken by lowest row, then lowest
    /// column.  Divisibility of each pivot into the remaining block is
    /// enforced before the block shrinks, so the diagonal comes out as a
    /// chain d_1 | d_2 | ... of nonnegative integers.
    pub fn smith_normal_form(&self) -> SmithNormalForm {
        assert_eq!(self.ring, BaseRing::Integers, "Smith reduction is an integer operation");
        let ring = self.ring;
        let mut w = self.clone();
        let mut u = ExactMatrix::identity(ring, self.rows);
        let mut u_inv = ExactMatrix::identity(ring, self.rows);
        let mut v = ExactMatrix::identity(ring, self.cols);

        let mut t = 0usize;
        while t < self.rows && t < self.cols {
            let Some((pi, pj)) = w.min_abs_pivot(t) else { break };
            w.swap_rows_simple(t, pi);
            u.swap_rows_simple(t, pi);
            u_inv.swap_cols_simple(t, pi);
            w.swap_cols_simple(t, pj);
            v.swap_cols_simple(t, pj);

            'improve: loop {
                if w.get(t, t).expect_int().is_negative() {
                    w.negate_row(t);
                    u.negate_row(t);
                    u_inv.negate_col(t);
                }
                let pivot = w.get(t, t).expect_int().clone();
                assert!(!pivot.is_zero());

                // clear the pivot column
                for i in (t + 1)..self.rows {
                    let a = w.get(i, t).expect_int().clone();
                    if a.is_zero() {
                        continue;
                    }
                    let q = num_integer::Integer::div_floor(&a, &pivot);
                    let nq = Scalar::Int(-q.clone());
                    w.add_row_multiple(i, t, &nq);
                    u.add_row_multiple(i, t, &nq);
                    u_inv.add_col_multiple(t, i, &Scalar::Int(q));
                    if !w.get(i, t).expect_int().is_zero() {
                        // remainder is strictly smaller than the pivot
                        w.swap_rows_simple(t, i);
                        u.swap_rows_simple(t, i);
                        u_inv.swap_cols_simple(t, i);
                        continue 'improve;
                    }
                }
                // clear the pivot row
                for j in (t + 1)..self.cols {
                    let a = w.get(t, j).expect_int().clone();
                    if a.is_zero() {
                        continue;
                    }
                    let q = num_integer::Integer::div_floor(&a, &pivot);
                    let nq = Scalar::Int(-q);
                    w.add_col_multiple(j, t, &nq);
                    v.add_col_multiple(j, t, &nq);
                    if !w.get(t, j).expect_int().is_zero() {
                        w.swap_cols_simple(t, j);
                        v.swap_cols_simple(t, j);
                        continue 'improve;
                    }
                }
                // both clear; force the pivot to divide the remaining block
                let mut offender = None;
                'scan: for i in (t + 1)..self.rows {
                    for j in (t + 1)..self.cols {
                        let a = w.get(i, j);
                        if let Scalar::Int(x) = &a {
                            if !x.is_zero() && !(x % &pivot).is_zero() {
                                offender = Some(i);
                                break 'scan;
                            }
                        }
                    }
                }
                if let Some(i) = offender {
                    let one = Scalar::Int(BigInt::from(1));
                    let neg_one = Scalar::Int(BigInt::from(-1));
                    w.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                    u_inv.add_col_multiple(i, t, &neg_one);
                    continue 'improve;
                }
                break;
            }
            t += 1;
        }

        debug_assert_eq!(u.mul(self).mul(&v), w, "U*M*V must equal D");
        debug_assert_eq!(u.mul(&u_inv), ExactMatrix::identity(ring, self.rows));
        SmithNormalForm { u, d: w, v, u_inv }
    }

    /// Minimal-absolute-value pivot in the block with both indices >= t.
    fn min_abs_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for (&(i, j), v) in &self.entries {
            if i < t || j < t {
                continue;
            }
            let a = self.ring.abs_bigint(v);
            match &best {
                None => best = Some(((i, j), a)),
                Some((bk, ba)) => {
                    if a < *ba || (a == *ba && (i, j) < *bk) {
                        best = Some(((i, j), a));
                    }
                }
            }
        }
        best.map(|(k, _)| k)
    }

    /// Column echelon reduction: `self * v = h`, with `v` unimodular over the
    /// integers (invertible over a field).  Over the integers this is the
    /// column Hermite normal form with positive pivots and reduced
    /// off-pivot entries; over a field pivots are 1 and the pivot rows are
    /// cleared.  Zero columns are pushed to the right.
    pub fn column_echelon(&self) -> ColumnEchelon {
        let ring = self.ring;
        let mut h = self.clone();
        let mut v = ExactMatrix::identity(ring, self.cols);
        let mut pivots = Vec::new();
        let mut c = 0usize;

        for r in 0..self.rows {
            if c >= self.cols {
                break;
            }
            if ring == BaseRing::Integers {
                // gcd sweep across columns c.. at row r
                loop {
                    let mut best: Option<(usize, BigInt)> = None;
                    for j in c..self.cols {
                        let a = h.get(r, j);
                        if ring.is_zero(&a) {
                            continue;
                        }
                        let m = ring.abs_bigint(&a);
                        match &best {
                            None => best = Some((j, m)),
                            Some((_, bm)) if m < *bm => best = Some((j, m)),
                            _ => {}
                        }
                    }
                    let Some((jmin, _)) = best else { break };
                    h.swap_cols_simple(c, jmin);
                    v.swap_cols_simple(c, jmin);
                    if h.get(r, c).expect_int().is_negative() {
                        h.negate_col(c);
                        v.negate_col(c);
                    }
                    let pivot = h.get(r, c).expect_int().clone();
                    let mut leftover = false;
                    for j in (c + 1)..self.cols {
                        let a = h.get(r, j).expect_int().clone();
                        if a.is_zero() {
                            continue;
                        }
                        let q = num_integer::Integer::div_floor(&a, &pivot);
                        let nq = Scalar::Int(-q);
                        h.add_col_multiple(j, c, &nq);
                        v.add_col_multiple(j, c, &nq);
                        if !h.get(r, j).expect_int().is_zero() {
                            leftover = true;
                        }
                    }
                    if !leftover {
                        break;
                    }
                }
                if ring.is_zero(&h.get(r, c)) {
                    continue; // no pivot in this row
                }
                // canonical reduction of earlier columns at the pivot row
                let pivot = h.get(r, c).expect_int().clone();
                for j in 0..c {
                    let a = h.get(r, j).expect_int().clone();
                    if a.is_zero() {
                        continue;
                    }
                    let q = num_integer::Integer::div_floor(&a, &pivot);
                    let nq = Scalar::Int(-q);
                    h.add_col_multiple(j, c, &nq);
                    v.add_col_multiple(j, c, &nq);
                }
            } else {
                // field case: leftmost nonzero, scale to 1, clear the row
                let mut found = None;
                for j in c..self.cols {
                    if !ring.is_zero(&h.get(r, j)) {
                        found = Some(j);
                        break;
                    }
                }
                let Some(jp) = found else { continue };
                h.swap_cols_simple(c, jp);
                v.swap_cols_simple(c, jp);
                let inv = ring.inv(&h.get(r, c)).unwrap();
                h.scale_col(c, &inv);
                v.scale_col(c, &inv);
                for j in 0..self.cols {
                    if j == c {
                        continue;
                    }
                    let a = h.get(r, j);
                    if ring.is_zero(&a) {
                        continue;
                    }
                    let na = ring.neg(&a);
                    h.add_col_multiple(j, c, &na);
                    v.add_col_multiple(j, c, &na);
                }
            }
            pivots.push(r);
            c += 1;
        }

        debug_assert_eq!(self.mul(&v), h, "M*V must equal H");
        ColumnEchelon { h, v, pivots }
    }

    fn scale_col(&mut self, c: usize, s: &Scalar) {
        let keys: Vec<(usize, usize)> = self.entries.keys().filter(|(_, j)| *j == c).copied().collect();
        for k in keys {
            let v = self.entries.get(&k).unwrap().clone();
            let nv = self.ring.mul(&v, s);
            if self.ring.is_zero(&nv) {
                self.entries.remove(&k);
            } else {
                self.entries.insert(k, nv);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.column_echelon().pivots.len()
    }

    /// Basis of the kernel `{x : self * x = 0}`, as matrix columns.  Over the
    /// integers this is a basis of the full kernel lattice (kernels of maps
    /// into a free module are automatically saturated), obtained from the
    /// column Hermite form.
    pub fn kernel_basis(&self) -> ExactMatrix {
        let ech = self.column_echelon();
        let rank = ech.pivots.len();
        let keep: Vec<usize> = (rank..self.cols).collect();
        ech.v.select_columns(&keep)
    }

    /// Solves `self * x = b` exactly.  Returns `None` when `b` is not in the
    /// image (over the integers: not in the image lattice).  The two
    /// strategies return possibly different representatives of the same
    /// solution coset.
    pub fn solve_in_image(&self, b: &[Scalar], strategy: LiftStrategy) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        match (strategy, self.ring) {
            (LiftStrategy::Primary, _) => self.solve_via_echelon(b, false),
            (LiftStrategy::Alternate, BaseRing::Integers) => self.solve_via_smith(b),
            (LiftStrategy::Alternate, _) => self.solve_via_echelon(b, true),
        }
    }

    fn solve_via_echelon(&self, b: &[Scalar], reverse_columns: bool) -> Option<Vec<Scalar>> {
        let ring = self.ring;
        let work = if reverse_columns {
            let order: Vec<usize> = (0..self.cols).rev().collect();
            self.select_columns(&order)
        } else {
            self.clone()
        };
        let ech = work.column_echelon();
        let mut residual: Vec<Scalar> = b.to_vec();
        let mut y = vec![ring.zero(); work.cols];
        for (col, &prow) in ech.pivots.iter().enumerate() {
            // rows above prow with no pivot must carry zero residual
            let coeff = ring.div_exact(&residual[prow], &ech.h.get(prow, col))?;
            if !ring.is_zero(&coeff) {
                for i in 0..self.rows {
                    let hij = ech.h.get(i, col);
                    if !ring.is_zero(&hij) {
                        let t = ring.mul(&coeff, &hij);
                        residual[i] = ring.sub(&residual[i], &t);
                    }
                }
            }
            y[col] = coeff;
        }
        if residual.iter().any(|r| !ring.is_zero(r)) {
            return None;
        }
        let x = ech.v.apply(&y);
        if reverse_columns {
            Some(x.into_iter().rev().collect())
        } else {
            Some(x)
        }
    }

    fn solve_via_smith(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let ring = self.ring;
        let snf = self.smith_normal_form();
        let ub = snf.u.apply(b);
        let mut z = vec![ring.zero(); self.cols];
        let diag_len = self.rows.min(self.cols);
        for (i, ub_i) in ub.iter().enumerate() {
            if i < diag_len {
                let d = snf.d.get(i, i);
                if ring.is_zero(&d) {
                    if !ring.is_zero(ub_i) {
                        return None;
                    }
                } else {
                    z[i] = ring.div_exact(ub_i, &d)?;
                }
            } else if !ring.is_zero(ub_i) {
                return None;
            }
        }
        Some(snf.v.apply(&z))
    }

    /// Inverse of a matrix that is invertible over the ring (unimodular in
    /// the integer case).  Panics when the matrix is not invertible: callers
    /// use this only on change-of-basis matrices they have already verified.
    pub fn inverse(&self) -> ExactMatrix {
        assert_eq!(self.rows, self.cols, "only square matrices invert");
        let mut out = ExactMatrix::zero(self.ring, self.rows, self.cols);
        for j in 0..self.cols {
            let mut e = vec![self.ring.zero(); self.rows];
            e[j] = self.ring.one();
            let col = self
                .solve_in_image(&e, LiftStrategy::Primary)
                .unwrap_or_else(|| panic!("matrix is not invertible over {:?}", self.ring));
            out.set_column(j, &col);
        }
        debug_assert_eq!(self.mul(&out), ExactMatrix::identity(self.ring, self.rows));
        out
    }

    /// Stable text form used for digests and witnesses.
    pub fn canonical_string(&self) -> String {
        let mut s = format!("{}x{}:", self.rows, self.cols);
        for (i, j, v) in self.iter_entries() {
            s.push_str(&format!("({i},{j})={v};"));
        }
        s
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn z() -> BaseRing {
        BaseRing::Integers
    }

    #[test]
    fn smith_of_diag_2_3() {
        let m = ExactMatrix::from_rows_i64(z(), &[&[2, 0], &[0, 3]]);
        let snf = m.smith_normal_form();
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    }

    #[test]
    fn smith_of_2468() {
        let m = ExactMatrix::from_rows_i64(z(), &[&[2, 4], &[6, 8]]);
        let snf = m.smith_normal_form();
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn smith_divisibility_chain_and_unimodularity() {
        let m = ExactMatrix::from_rows_i64(z(), &[&[4, 6, 10], &[6, 0, -2], &[0, 8, 4]]);
        let snf = m.smith_normal_form();
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "chain broken: {diag:?}");
            }
        }
        assert_eq!(snf.u.mul(&snf.u_inv), ExactMatrix::identity(z(), 3));
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    }

    #[test]
    fn kernel_of_sum_map() {
        let m = ExactMatrix::from_rows_i64(z(), &[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        let col = k.column(0);
        let a = col[0].expect_int().clone();
        let b = col[1].expect_int().clone();
        assert!(a.magnitude().is_one() && b == -a);
        assert!(m.mul(&k).is_zero_matrix());
    }

    #[test]
    fn kernel_is_saturated() {
        // multiples of primitive vectors must solve integrally in the basis
        let m = ExactMatrix::from_rows_i64(z(), &[&[2, -4, 2], &[1, -2, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 2);
        let v = vec![
            Scalar::Int(BigInt::from(1)),
            Scalar::Int(BigInt::from(1)),
            Scalar::Int(BigInt::from(1)),
        ];
        assert!(m.apply(&v).iter().all(|x| matches!(x, Scalar::Int(t) if t.is_zero())));
        assert!(k.solve_in_image(&v, LiftStrategy::Primary).is_some());
    }

    #[test]
    fn solve_in_image_integer_obstruction() {
        // 2x = 1 has no integer solution but a rational one
        let m2 = ExactMatrix::from_rows_i64(z(), &[&[2]]);
        let b = vec![Scalar::Int(BigInt::one())];
        assert_eq!(m2.solve_in_image(&b, LiftStrategy::Primary), None);
        assert_eq!(m2.solve_in_image(&b, LiftStrategy::Alternate), None);

        let q = BaseRing::Rationals;
        let mq = ExactMatrix::from_rows_i64(q, &[&[2]]);
        let bq = vec![q.one()];
        let x = mq.solve_in_image(&bq, LiftStrategy::Primary).unwrap();
        assert_eq!(mq.apply(&x), bq);
    }

    #[test]
    fn solve_strategies_agree_on_solvability() {
        let m = ExactMatrix::from_rows_i64(z(), &[&[2, 4, 0], &[0, 6, 3]]);
        let b = vec![Scalar::Int(BigInt::from(6)), Scalar::Int(BigInt::from(9))];
        let x1 = m.solve_in_image(&b, LiftStrategy::Primary).unwrap();
        let x2 = m.solve_in_image(&b, LiftStrategy::Alternate).unwrap();
        assert_eq!(m.apply(&x1), b);
        assert_eq!(m.apply(&x2), b);
    }

    #[test]
    fn echelon_over_f2() {
        let f2 = BaseRing::prime_field(2).unwrap();
        let m = ExactMatrix::from_rows_i64(f2, &[&[1, 1, 0], &[0, 1, 1]]);
        let ech = m.column_echelon();
        assert_eq!(ech.pivots, vec![0, 1]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero_matrix());
    }

    #[test]
    fn empty_shapes_are_fine() {
        let m = ExactMatrix::zero(z(), 0, 3);
        assert_eq!(m.kernel_basis().cols(), 3);
        let m2 = ExactMatrix::zero(z(), 3, 0);
        assert_eq!(m2.kernel_basis().cols(), 0);
        let snf = m2.smith_normal_form();
        assert_eq!(snf.diagonal(), Vec::<BigInt>::new());
        let b = vec![z().zero(), z().zero(), z().zero()];
        assert_eq!(m2.solve_in_image(&b, LiftStrategy::Primary), Some(vec![]));
    }

    #[test]
    fn inverse_of_unimodular() {
        let m = ExactMatrix::from_rows_i64(z(), &[&[1, 2], &[1, 3]]);
        let inv = m.inverse();
        assert_eq!(m.mul(&inv), ExactMatrix::identity(z(), 2));
        assert_eq!(inv.mul(&m), ExactMatrix::identity(z(), 2));
    }
}
