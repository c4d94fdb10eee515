//! Exact sparse linear algebra over the rationals.
//!
//! Differential matrices are large and very sparse, so they are kept as
//! column lists of `(row, value)` pairs. Rank, solving and nullspaces all go
//! through a fraction-free elimination on integer-scaled rows: every row is
//! cleared of denominators and divided by its content after each update,
//! which keeps entries small without leaving exact arithmetic. Pivoting is
//! by first nonzero column, so all results are deterministic.

use crate::scalar::{self, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            data: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMat::zero(n, n);
        for j in 0..n {
            m.data[j].push((j, scalar::one()));
        }
        m
    }

    /// Build from an iterator of `(row, col, value)` entries; duplicate
    /// positions are accumulated.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut m = SparseMat::zero(rows, cols);
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet out of bounds");
            m.data[c].push((r, v));
        }
        for col in &mut m.data {
            col.sort_by_key(|(r, _)| *r);
            let mut merged: Vec<(usize, Scalar)> = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|(_, v)| !scalar::is_zero(v));
            *col = merged;
        }
        m
    }

    /// Build from dense column vectors.
    pub fn from_columns(rows: usize, columns: Vec<Vec<Scalar>>) -> Self {
        let cols = columns.len();
        let mut m = SparseMat::zero(rows, cols);
        for (j, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, v) in col.into_iter().enumerate() {
                if !scalar::is_zero(&v) {
                    m.data[j].push((r, v));
                }
            }
        }
        m
    }

    pub fn from_dense_rows(entries: &[Vec<Scalar>]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        SparseMat::from_triplets(
            rows,
            cols,
            entries.iter().enumerate().flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !scalar::is_zero(v))
                    .map(move |(c, v)| (r, c, v.clone()))
            }),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &[(usize, Scalar)] {
        &self.data[j]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.data[c].binary_search_by_key(&r, |(row, _)| *row) {
            Ok(i) => self.data[c][i].1.clone(),
            Err(_) => scalar::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn column_dense(&self, j: usize) -> Vec<Scalar> {
        let mut out = vec![scalar::zero(); self.rows];
        for (r, v) in &self.data[j] {
            out[*r] = v.clone();
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![scalar::zero(); self.cols]; self.rows];
        for (j, col) in self.data.iter().enumerate() {
            for (r, v) in col {
                out[*r][j] = v.clone();
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        let mut out = vec![scalar::zero(); self.rows];
        for (j, col) in self.data.iter().enumerate() {
            if scalar::is_zero(&x[j]) {
                continue;
            }
            for (r, v) in col {
                out[*r] += v * &x[j];
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut data = Vec::with_capacity(other.cols);
        for j in 0..other.cols {
            let mut acc: std::collections::BTreeMap<usize, Scalar> = std::collections::BTreeMap::new();
            for (k, w) in &other.data[j] {
                for (r, v) in &self.data[*k] {
                    *acc.entry(*r).or_insert_with(scalar::zero) += v * w;
                }
            }
            let col: Vec<(usize, Scalar)> = acc
                .into_iter()
                .filter(|(_, v)| !scalar::is_zero(v))
                .collect();
            data.push(col);
        }
        SparseMat {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn transpose(&self) -> SparseMat {
        let mut m = SparseMat::zero(self.cols, self.rows);
        for (j, col) in self.data.iter().enumerate() {
            for (r, v) in col {
                m.data[*r].push((j, v.clone()));
            }
        }
        m
    }

    /// Concatenate matrices side by side (all must share the row count).
    pub fn hstack(parts: &[&SparseMat]) -> SparseMat {
        assert!(!parts.is_empty());
        let rows = parts[0].rows;
        let mut data = Vec::new();
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            data.extend(p.data.iter().cloned());
        }
        let cols = data.len();
        SparseMat { rows, cols, data }
    }

    fn to_int_rows(&self) -> Vec<IntRow> {
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.rows];
        for (j, col) in self.data.iter().enumerate() {
            for (r, v) in col {
                rows[*r].push((j, v.clone()));
            }
        }
        rows.into_iter().map(|r| int_row_from_rational(&r)).collect()
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new();
        for row in self.to_int_rows() {
            ech.insert(row);
        }
        ech.rank()
    }

    /// Solve `A x = b` exactly. Returns an arbitrary solution (free variables
    /// set to zero) or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut ech = Echelon::new();
        // The rhs is carried as an extra virtual column to the right of all
        // unknowns; a pivot landing there means the system is inconsistent.
        let rhs_col = self.cols;
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.rows];
        for (j, col) in self.data.iter().enumerate() {
            for (r, v) in col {
                rows[*r].push((j, v.clone()));
            }
        }
        for (r, row) in rows.iter_mut().enumerate() {
            if !scalar::is_zero(&b[r]) {
                row.push((rhs_col, b[r].clone()));
            }
        }
        for row in rows.iter() {
            ech.insert(int_row_from_rational(row));
        }
        if ech.pivot_rows.iter().any(|r| leading(r).0 == rhs_col) {
            return None;
        }
        // Back-substitute with free variables at zero.
        let mut x = vec![scalar::zero(); self.cols];
        for row in ech.pivot_rows.iter().rev() {
            let (lead_col, lead_val) = leading(row);
            let mut acc = scalar::zero();
            for (c, v) in row.iter().skip(1) {
                if *c == rhs_col {
                    acc -= Scalar::from_integer(v.clone());
                } else {
                    acc += Scalar::from_integer(v.clone()) * &x[*c];
                }
            }
            x[lead_col] = -acc / Scalar::from_integer(lead_val.clone());
        }
        Some(x)
    }

    /// Deterministic basis of the right nullspace, one dense vector per free
    /// column, ordered by column index.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut ech = Echelon::new();
        for row in self.to_int_rows() {
            ech.insert(row);
        }
        let pivot_cols: Vec<usize> = ech.pivot_rows.iter().map(|r| leading(r).0).collect();
        let is_pivot = {
            let mut v = vec![false; self.cols];
            for &c in &pivot_cols {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut x = vec![scalar::zero(); self.cols];
            x[free] = scalar::one();
            for row in ech.pivot_rows.iter().rev() {
                let (lead_col, lead_val) = leading(row);
                let mut acc = scalar::zero();
                for (c, v) in row.iter().skip(1) {
                    acc += Scalar::from_integer(v.clone()) * &x[*c];
                }
                x[lead_col] = -acc / Scalar::from_integer(lead_val.clone());
            }
            basis.push(x);
        }
        basis
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }
}

type IntRow = Vec<(usize, BigInt)>;

fn leading(row: &IntRow) -> (usize, &BigInt) {
    let (c, v) = &row[0];
    (*c, v)
}

fn int_row_from_rational(row: &[(usize, Scalar)]) -> IntRow {
    let mut lcm = BigInt::from(1);
    for (_, v) in row {
        if !scalar::is_zero(v) {
            lcm = lcm.lcm(v.denom());
        }
    }
    let mut out: IntRow = row
        .iter()
        .filter(|(_, v)| !scalar::is_zero(v))
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect();
    out.sort_by_key(|(c, _)| *c);
    normalize_content(&mut out);
    out
}

/// Divide by the gcd of all entries and make the leading entry positive.
fn normalize_content(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    for (_, v) in row.iter_mut() {
        *v = &*v / &g;
    }
}

/// Row echelon accumulator over integer rows. Rows are reduced against the
/// pivots found so far; surviving rows become pivots themselves, keyed by
/// their first nonzero column.
struct Echelon {
    // sorted by leading column
    pivot_rows: Vec<IntRow>,
}

impl Echelon {
    fn new() -> Self {
        Echelon {
            pivot_rows: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    fn insert(&mut self, mut row: IntRow) {
        loop {
            if row.is_empty() {
                return;
            }
            let lead = leading(&row).0;
            match self
                .pivot_rows
                .binary_search_by_key(&lead, |r| leading(r).0)
            {
                Ok(i) => {
                    row = eliminate_lead(&row, &self.pivot_rows[i]);
                }
                Err(i) => {
                    self.pivot_rows.insert(i, row);
                    return;
                }
            }
        }
    }
}

/// `row * lead(pivot) - pivot * lead(row)`, content-normalized; cancels the
/// shared leading column.
fn eliminate_lead(row: &IntRow, pivot: &IntRow) -> IntRow {
    let a = leading(pivot).1.clone();
    let b = leading(row).1.clone();
    let mut out: IntRow = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        match (row.get(i), pivot.get(j)) {
            (Some((rc, rv)), Some((pc, pv))) if rc == pc => {
                let v = rv * &a - pv * &b;
                if !v.is_zero() {
                    out.push((*rc, v));
                }
                i += 1;
                j += 1;
            }
            (Some((rc, rv)), Some((pc, _))) if rc < pc => {
                out.push((*rc, rv * &a));
                i += 1;
            }
            (Some(_), Some((pc, pv))) => {
                out.push((*pc, pv * -&b));
                j += 1;
            }
            (Some((rc, rv)), None) => {
                out.push((*rc, rv * &a));
                i += 1;
            }
            (None, Some((pc, pv))) => {
                out.push((*pc, pv * -&b));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    normalize_content(&mut out);
    out
}

/// Dense Gauss-Jordan inverse for the small operator matrices.
pub fn dense_inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut inv: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { scalar::one() } else { scalar::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !scalar::is_zero(&a[r][col]))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || scalar::is_zero(&a[r][col]) {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let av = &a[col][j] * &f;
                a[r][j] -= av;
                let iv = &inv[col][j] * &f;
                inv[r][j] -= iv;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn mat(rows: &[&[i64]]) -> SparseMat {
        SparseMat::from_dense_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn rank_small() {
        assert_eq!(mat(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(mat(&[&[1, 0], &[0, 1]]).rank(), 2);
        assert_eq!(mat(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(
            mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9], &[1, 1, 1]]).rank(),
            2
        );
    }

    #[test]
    fn rank_with_fractions() {
        let m = SparseMat::from_dense_rows(&[
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(3, 2), int(1)],
        ]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = mat(&[&[1, 1], &[0, 1]]);
        let x = m.solve(&[int(3), int(1)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![int(3), int(1)]);

        let sing = mat(&[&[1, 1], &[2, 2]]);
        assert!(sing.solve(&[int(1), int(3)]).is_none());
        let x = sing.solve(&[int(1), int(2)]).unwrap();
        assert_eq!(sing.mul_vec(&x), vec![int(1), int(2)]);
    }

    #[test]
    fn solve_underdetermined() {
        let m = mat(&[&[1, 2, 3]]);
        let x = m.solve(&[int(6)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![int(6)]);
    }

    #[test]
    fn nullspace_basis() {
        let m = mat(&[&[1, 2, 3], &[0, 0, 1]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert!(scalar::all_zero(&m.mul_vec(v)));
        }
        assert_eq!(m.rank() + ns.len(), m.cols());
    }

    #[test]
    fn nullspace_of_zero_matrix() {
        let m = SparseMat::zero(3, 2);
        assert_eq!(m.nullspace().len(), 2);
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn product_and_transpose() {
        let a = mat(&[&[1, 2], &[3, 4]]);
        let b = mat(&[&[0, 1], &[1, 0]]);
        let ab = a.mul(&b);
        assert_eq!(ab.to_dense()[0], vec![int(2), int(1)]);
        assert_eq!(ab.to_dense()[1], vec![int(4), int(3)]);
        assert_eq!(a.transpose().get(0, 1), int(3));
    }

    #[test]
    fn inverse_dense() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = dense_inverse(&m).unwrap();
        assert_eq!(inv[0], vec![int(1), int(-1)]);
        assert_eq!(inv[1], vec![int(-1), int(2)]);
        let sing = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(dense_inverse(&sing).is_none());
    }
}
