//! Exact linear algebra over K with sparse rows.
//!
//! Forward elimination is fraction-free: rows are cleared of denominators,
//! combined as `a·row_i − b·row_p` and divided by the gcd of their entries.
//! Back-substitution then produces the reduced row echelon form, which is
//! unique, so kernels and solutions do not depend on the pivot order.

use num_traits::{One, Zero};

use crate::field::{LaurentPoly, Scalar};
use crate::CoreError;

/// Sparse row: `(column, entry)` sorted by column, no zero entries.
pub type SparseRow = Vec<(usize, Scalar)>;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    cols: usize,
    rows: Vec<SparseRow>,
}

/// Row choice among the candidates for a pivot column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotStrategy {
    /// Fewest Laurent terms, ties broken by row index.
    #[default]
    LeastComplex,
    /// Lowest row index.
    FirstRow,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            cols,
            rows: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix {
            cols: n,
            rows: (0..n).map(|i| vec![(i, Scalar::one())]).collect(),
        }
    }

    pub fn from_dense(rows: Vec<Vec<Scalar>>) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            cols,
            rows: rows
                .into_iter()
                .map(|r| r.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
                .collect(),
        }
    }

    /// Rows given as unsorted `(column, entry)` lists; repeated columns are summed.
    pub fn from_sparse(cols: usize, rows: Vec<Vec<(usize, Scalar)>>) -> Matrix {
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.sort_by_key(|(c, _)| *c);
                let mut out: SparseRow = Vec::with_capacity(r.len());
                for (c, x) in r {
                    assert!(c < cols, "column out of range");
                    match out.last_mut() {
                        Some((lc, lx)) if *lc == c => *lx = &*lx + &x,
                        _ => out.push((c, x)),
                    }
                }
                out.retain(|(_, x)| !x.is_zero());
                out
            })
            .collect();
        Matrix { cols, rows }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.rows[i]
            .binary_search_by_key(&j, |(c, _)| *c)
            .map(|k| self.rows[i][k].1.clone())
            .unwrap_or_else(|_| Scalar::zero())
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![Scalar::zero(); self.cols];
                for (c, x) in r {
                    d[*c] = x.clone();
                }
                d
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, CoreError> {
        if v.len() != self.cols {
            return Err(CoreError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|(c, _)| !v[*c].is_zero())
                    .fold(Scalar::zero(), |acc, (c, x)| &acc + &(x * &v[*c]))
            })
            .collect())
    }

    /// Appends `rhs` as an extra column.
    fn augmented(&self, rhs: &[Scalar]) -> Matrix {
        let mut rows = self.rows.clone();
        for (r, b) in rows.iter_mut().zip(rhs) {
            if !b.is_zero() {
                r.push((self.cols, b.clone()));
            }
        }
        Matrix {
            cols: self.cols + 1,
            rows,
        }
    }
}

/// Reduced row echelon form: `rows[i]` has a 1 at column `pivots[i]` and
/// zeros in every other pivot column.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref {
    pub cols: usize,
    pub pivots: Vec<usize>,
    pub rows: Vec<SparseRow>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Kernel basis, one vector per free column `f`, with entry 1 at `f`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let free = self.free_columns();
        let mut out = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if let Ok(k) = row.binary_search_by_key(&f, |(c, _)| *c) {
                    v[p] = -&row[k].1;
                }
            }
            out.push(v);
        }
        out
    }
}

fn clear_denominators(row: &mut SparseRow) {
    let mut l = LaurentPoly::one();
    for (_, x) in row.iter() {
        if !x.is_laurent() {
            let den = x.denom();
            let g = l.gcd(den);
            l = l.mul(&den.exact_div(&g));
        }
    }
    if !l.is_one() {
        let m = Scalar::from_poly(l);
        for (_, x) in row.iter_mut() {
            *x = &*x * &m;
        }
    }
}

/// Divides a row of Laurent polynomials by the gcd of its entries and makes
/// the first entry's leading coefficient 1.
fn make_primitive(row: &mut SparseRow) {
    if row.is_empty() {
        return;
    }
    if row.iter().all(|(_, x)| x.numer().num_terms() > 1) {
        let mut g = row[0].1.numer().clone();
        for (_, x) in &row[1..] {
            g = g.gcd(x.numer());
            if g.num_terms() == 1 {
                break;
            }
        }
        if g.num_terms() > 1 {
            for (_, x) in row.iter_mut() {
                *x = Scalar::from_poly(x.numer().exact_div(&g));
            }
        }
    }
    let lead = row[0].1.numer().leading().unwrap().inv().unwrap();
    let shift = -row.iter().filter_map(|(_, x)| x.numer().min_exp()).min().unwrap();
    if !lead.is_one() || shift != 0 {
        for (_, x) in row.iter_mut() {
            *x = Scalar::from_poly(x.numer().scale(&lead).shift(shift));
        }
    }
}

/// `a·x − b·y` on sparse rows.
fn combine_rows(a: &Scalar, x: &SparseRow, b: &Scalar, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map_or(usize::MAX, |e| e.0);
        let cy = y.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if cx < cy {
            i += 1;
            (cx, a * &x[i - 1].1)
        } else if cy < cx {
            j += 1;
            (cy, -(b * &y[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (cx, &(a * &x[i - 1].1) - &(b * &y[j - 1].1))
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

pub fn rref(m: &Matrix) -> Rref {
    rref_with(m, PivotStrategy::default())
}

pub fn rref_with(m: &Matrix, strategy: PivotStrategy) -> Rref {
    let mut pending: Vec<(usize, SparseRow)> = m
        .rows
        .iter()
        .cloned()
        .enumerate()
        .filter(|(_, r)| !r.is_empty())
        .map(|(i, mut r)| {
            clear_denominators(&mut r);
            make_primitive(&mut r);
            (i, r)
        })
        .collect();
    let mut echelon: Vec<(usize, SparseRow)> = Vec::new();

    // Forward pass; every pending row's first entry sits at a column ≥ the current one.
    while let Some(col) = pending.iter().map(|(_, r)| r[0].0).min() {
        let cands: Vec<usize> = (0..pending.len()).filter(|&k| pending[k].1[0].0 == col).collect();
        let pick = match strategy {
            PivotStrategy::LeastComplex => *cands
                .iter()
                .min_by_key(|&&k| (pending[k].1[0].1.complexity(), pending[k].0))
                .unwrap(),
            PivotStrategy::FirstRow => *cands.iter().min_by_key(|&&k| pending[k].0).unwrap(),
        };
        let (_, prow) = pending[pick].clone();
        let a = prow[0].1.clone();
        let mut next = Vec::with_capacity(pending.len());
        for (k, (idx, row)) in pending.into_iter().enumerate() {
            if k == pick {
                continue;
            }
            if row[0].0 != col {
                next.push((idx, row));
                continue;
            }
            let b = row[0].1.clone();
            let mut r = combine_rows(&a, &row, &b, &prow);
            if !r.is_empty() {
                make_primitive(&mut r);
                next.push((idx, r));
            }
        }
        pending = next;
        echelon.push((col, prow));
    }

    // Back-substitution in K.
    let mut rows: Vec<SparseRow> = Vec::with_capacity(echelon.len());
    let pivots: Vec<usize> = echelon.iter().map(|(c, _)| *c).collect();
    for (_, row) in echelon.iter().rev() {
        let inv = row[0].1.inv().unwrap();
        let mut r: SparseRow = row.iter().map(|(c, x)| (*c, x * &inv)).collect();
        for done in &rows {
            let p = done[0].0;
            if let Ok(k) = r.binary_search_by_key(&p, |(c, _)| *c) {
                let b = r[k].1.clone();
                r = combine_rows(&Scalar::one(), &r, &b, done);
            }
        }
        rows.push(r);
    }
    rows.reverse();
    Rref {
        cols: m.cols,
        pivots,
        rows,
    }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).rank()
}

pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
    rref(m).kernel()
}

/// Solves `m·x = rhs`. `Ok(None)` certifies that no solution exists; a returned
/// solution has every free variable set to 0.
pub fn solve(m: &Matrix, rhs: &[Scalar]) -> Result<Option<Vec<Scalar>>, CoreError> {
    if rhs.len() != m.rows() {
        return Err(CoreError::DimensionMismatch {
            expected: m.rows(),
            found: rhs.len(),
        });
    }
    let r = rref(&m.augmented(rhs));
    if r.pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); m.cols];
    for (row, &p) in r.rows.iter().zip(&r.pivots) {
        if let Some((c, b)) = row.last() {
            if *c == m.cols {
                x[p] = b.clone();
            }
        }
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn identity_rank_and_kernel() {
        let m = Matrix::identity(3);
        assert_eq!(rank(&m), 3);
        assert!(kernel_basis(&m).is_empty());
        assert_eq!(rank(&Matrix::zeros(2, 3)), 0);
    }

    #[test]
    fn all_ones_row_kernel() {
        let m = Matrix::from_dense(vec![vec![s(1), s(1), s(1), s(1)]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 3);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn laurent_entries() {
        let d = Scalar::d();
        let m = Matrix::from_dense(vec![
            vec![d.clone(), Scalar::one(), Scalar::zero()],
            vec![Scalar::one(), Scalar::d_pow(-1), d.clone()],
        ]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn solve_and_inconsistency() {
        let m = Matrix::from_dense(vec![vec![s(1), s(1)], vec![s(1), s(1)]]);
        assert_eq!(solve(&m, &[s(1), s(2)]).unwrap(), None);
        let x = solve(&m, &[s(2), s(2)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![s(2), s(2)]);
        assert!(solve(&m, &[s(1)]).is_err());
    }
}
