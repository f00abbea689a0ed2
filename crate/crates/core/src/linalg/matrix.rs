//! Dense matrices over an exact field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{common_denominator, primitive_integer_row, Field, PrimeField, Rationals};
use super::subspace::Echelon;

/// Row-major dense matrix. All entries live in `field`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<F: Field> {
    field: F,
    n_rows: usize,
    n_cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> DenseMatrix<F> {
    pub fn zeros(field: &F, n_rows: usize, n_cols: usize) -> Self {
        DenseMatrix { field: field.clone(), n_rows, n_cols, data: vec![field.zero(); n_rows * n_cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_vec(field: &F, n_rows: usize, n_cols: usize, data: Vec<F::Elem>) -> Self {
        assert_eq!(data.len(), n_rows * n_cols, "entry count must equal rows * cols");
        DenseMatrix { field: field.clone(), n_rows, n_cols, data }
    }

    /// Builds a matrix from rows of equal length `n_cols`.
    pub fn from_rows(field: &F, n_cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            assert_eq!(r.len(), n_cols, "ragged rows");
            data.extend(r);
        }
        DenseMatrix { field: field.clone(), n_rows, n_cols, data }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }
    pub fn is_empty(&self) -> bool {
        self.n_rows == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[F::Elem]> {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.n_rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn push_row(&mut self, row: Vec<F::Elem>) {
        assert_eq!(row.len(), self.n_cols);
        self.data.extend(row);
        self.n_rows += 1;
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_rows(&self.field, self.n_cols, rows)
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.n_cols, other.n_cols);
        assert_eq!(self.field, other.field, "mixed-field arithmetic");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        DenseMatrix { field: self.field.clone(), n_rows: self.n_rows + other.n_rows, n_cols: self.n_cols, data }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.n_cols {
            for i in 0..self.n_rows {
                data.push(self.get(i, j).clone());
            }
        }
        DenseMatrix { field: self.field.clone(), n_rows: self.n_cols, n_cols: self.n_rows, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n_cols, other.n_rows);
        assert_eq!(self.field, other.field, "mixed-field arithmetic");
        let f = &self.field;
        let mut out = Self::zeros(f, self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.n_cols {
                    let idx = i * other.n_cols + j;
                    let b = other.get(k, j);
                    f.mul_add_assign(&mut out.data[idx], a, b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.n_cols);
        self.rows().map(|r| self.field.dot(r, v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn rank(&self) -> usize {
        F::rank_of(self)
    }

    /// Reduced row echelon form (zero rows dropped) and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        F::rref_of(self)
    }

    /// Rows spanning the right kernel `{v : M v = 0}`, in reduced echelon form.
    pub fn kernel_basis(&self) -> Self {
        self.kernel_with_pivots().0
    }

    /// Kernel basis in reduced echelon form together with its pivot columns.
    ///
    /// `M` is row reduced with its column order reversed. The kernel vector
    /// attached to a free column `f` is then supported on `f` and on pivot
    /// columns to the right of `f`, so the family is already reduced echelon
    /// in the original order and needs no second elimination.
    pub fn kernel_with_pivots(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let n = self.n_cols;
        let mut rev = Self::zeros(f, self.n_rows, n);
        for i in 0..self.n_rows {
            for j in 0..n {
                rev.set(i, n - 1 - j, self.get(i, j).clone());
            }
        }
        let (r, rev_pivots) = rev.rref();
        let pivots: Vec<usize> = rev_pivots.iter().map(|&c| n - 1 - c).collect();
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![f.zero(); n];
            v[fc] = f.one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(r.get(i, n - 1 - fc));
            }
            rows.push(v);
        }
        (Self::from_rows(f, n, rows), free)
    }

    /// Some `x` with `M x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.n_rows, "right-hand side length");
        if self.n_rows > self.n_cols {
            if let Some(x) = F::solve_full_rank_of(self, b) {
                return x;
            }
        }
        self.solve_by_rref(b)
    }

    fn solve_by_rref(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = &self.field;
        let mut aug = Self::zeros(f, self.n_rows, self.n_cols + 1);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.n_cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.n_cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.n_cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = r.get(i, self.n_cols).clone();
        }
        Some(x)
    }

    /// Entrywise image mod `p`, if every entry reduces.
    pub fn reduce_mod(&self, p: u64) -> Option<DenseMatrix<PrimeField>> {
        let fp = PrimeField::new(p).ok()?;
        let data = self.data.iter().map(|x| self.field.reduce_mod(x, p)).collect::<Option<Vec<_>>>()?;
        Some(DenseMatrix { field: fp, n_rows: self.n_rows, n_cols: self.n_cols, data })
    }
}

/// Plain Gauss-Jordan elimination, usable over any field.
pub fn gauss_jordan<F: Field>(m: &DenseMatrix<F>) -> (DenseMatrix<F>, Vec<usize>) {
    let f = m.field().clone();
    let (n_rows, n_cols) = (m.n_rows(), m.n_cols());
    let mut a: Vec<Vec<F::Elem>> = m.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(pr) = (r..n_rows).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, pr);
        let inv = f.inv(&a[r][c]).expect("nonzero pivot");
        for x in a[r][c..].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for j in c..n_cols {
                if f.is_zero(&pivot_row[j]) {
                    continue;
                }
                let t = f.mul(&factor, &pivot_row[j]);
                row[j] = f.sub(&row[j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (DenseMatrix::from_rows(&f, n_cols, a), pivots)
}

pub fn gauss_rank<F: Field>(m: &DenseMatrix<F>) -> usize {
    let f = m.field().clone();
    let (n_rows, n_cols) = (m.n_rows(), m.n_cols());
    let mut a: Vec<Vec<F::Elem>> = m.to_rows();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(pr) = (r..n_rows).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, pr);
        let inv = f.inv(&a[r][c]).expect("nonzero pivot");
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            if f.is_zero(&row[c]) {
                continue;
            }
            let factor = f.mul(&row[c], &inv);
            for j in c..n_cols {
                if f.is_zero(&pivot_row[j]) {
                    continue;
                }
                let t = f.mul(&factor, &pivot_row[j]);
                row[j] = f.sub(&row[j], &t);
            }
        }
        r += 1;
    }
    r
}

/// Integer rows obtained by clearing denominators row by row.
pub fn integer_rows(m: &DenseMatrix<Rationals>) -> Vec<Vec<BigInt>> {
    m.rows().map(primitive_integer_row).collect()
}

/// Fraction-free (Bareiss) rank of an integer matrix.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(pr) = (r..n_rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let (top, bottom) = a.split_at_mut(r + 1);
        let piv_row = &top[r];
        let piv = piv_row[c].clone();
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..n_cols {
                let v = &piv * &row[j] - &lead * &piv_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = piv;
        r += 1;
    }
    r
}

/// Fraction-free Gauss-Jordan: returns `d * RREF` with every pivot equal to
/// `d`, together with `d` and the pivot columns.
pub fn bareiss_gauss_jordan(mut a: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, BigInt, Vec<usize>) {
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(pr) = (r..n_rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let piv_row = a[r].clone();
        let piv = piv_row[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let lead = std::mem::take(&mut row[c]);
            for j in 0..n_cols {
                if j == c {
                    continue;
                }
                let mut v = &piv * &row[j];
                if !lead.is_zero() && !piv_row[j].is_zero() {
                    v -= &lead * &piv_row[j];
                }
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, prev, pivots)
}

/// Word-sized primes used by the one-sided modular rank filter.
pub const FILTER_PRIMES: [u64; 3] = [2305843009213693951, 4611686018427387847, 4611686018427387817];

/// Rank over Q. A full-rank image modulo a filter prime settles the answer,
/// since reduction can only lower the rank; otherwise Bareiss elimination runs.
pub(crate) fn rational_rank(m: &DenseMatrix<Rationals>) -> usize {
    let full = m.n_rows().min(m.n_cols());
    if let Some(r) = modular_rank_lower_bound(m) {
        if r == full {
            return r;
        }
    }
    bareiss_rank(integer_rows(m))
}

/// Rank of the image modulo the first filter prime at which every entry
/// reduces; never exceeds the rank over the field itself.
pub fn modular_rank_lower_bound<F: Field>(m: &DenseMatrix<F>) -> Option<usize> {
    FILTER_PRIMES.iter().find_map(|&p| m.reduce_mod(p)).map(|mp| gauss_rank(&mp))
}

/// Overdetermined systems of full column rank over Q. Rows independent
/// modulo a filter prime give an invertible square subsystem; it is inverted
/// fraction-free and the candidate is checked against every row in
/// integers, so the large common denominator of `b` is handled only once.
pub(crate) fn rational_solve_full_rank(m: &DenseMatrix<Rationals>, b: &[BigRational]) -> Option<Option<Vec<BigRational>>> {
    let n = m.n_cols();
    let img = FILTER_PRIMES.iter().find_map(|&p| m.reduce_mod(p))?;
    let mut ech = Echelon::new(img.field(), n);
    let mut sel = Vec::with_capacity(n);
    for i in 0..m.n_rows() {
        if ech.insert(img.row(i)) {
            sel.push(i);
            if sel.len() == n {
                break;
            }
        }
    }
    if sel.len() < n {
        return None;
    }
    let den_b = common_denominator(b);
    // row i scaled by the denominators of its entries; y = den_b * x
    let (a, c): (Vec<Vec<BigInt>>, Vec<BigInt>) = m
        .rows()
        .zip(b)
        .map(|(row, bi)| {
            let s = common_denominator(row);
            let ints = row.iter().map(|x| x.numer() * (&s / x.denom())).collect();
            let rhs = (bi * BigRational::from_integer(&s * &den_b)).to_integer();
            (ints, rhs)
        })
        .unzip();
    let aug: Vec<Vec<BigInt>> = sel
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let mut r = a[i].clone();
            r.extend((0..n).map(|j| if j == k { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let (red, det, pivots) = bareiss_gauss_jordan(aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    // red[k][n..] = det * inverse
    let z: Vec<BigInt> = (0..n).map(|k| (0..n).map(|j| &red[k][n + j] * &c[sel[j]]).sum()).collect();
    let consistent = a.iter().zip(&c).all(|(row, ci)| row.iter().zip(&z).map(|(x, y)| x * y).sum::<BigInt>() == &det * ci);
    if !consistent {
        return Some(None);
    }
    let scale = &det * &den_b;
    Some(Some(z.into_iter().map(|zi| BigRational::new(zi, scale.clone())).collect()))
}

pub(crate) fn rational_rref(m: &DenseMatrix<Rationals>) -> (DenseMatrix<Rationals>, Vec<usize>) {
    let (rows, d, pivots) = bareiss_gauss_jordan(integer_rows(m));
    let out = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::new(x, d.clone())).collect())
        .collect();
    (DenseMatrix::from_rows(&Rationals, m.n_cols(), out), pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::Field;
    use proptest::prelude::*;

    fn q(m: &[&[i64]]) -> DenseMatrix<Rationals> {
        let rows = m.iter().map(|r| r.iter().map(|&x| Rationals.from_i64(x)).collect()).collect();
        DenseMatrix::from_rows(&Rationals, m[0].len(), rows)
    }

    #[test]
    fn identity_and_zero() {
        let id = DenseMatrix::identity(&Rationals, 4);
        assert_eq!(id.rank(), 4);
        assert!(id.kernel_basis().is_empty());
        let z = DenseMatrix::zeros(&Rationals, 2, 3);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel_basis().n_rows(), 3);
        let b: Vec<_> = (1..=4).map(|x| Rationals.from_i64(x)).collect();
        assert_eq!(id.solve(&b), Some(b.clone()));
    }

    #[test]
    fn inconsistent_system() {
        let m = q(&[&[1, 1], &[2, 2]]);
        let b = vec![Rationals.from_i64(1), Rationals.from_i64(3)];
        assert_eq!(m.solve(&b), None);
    }

    #[test]
    fn fraction_free_matches_plain_gauss_jordan() {
        let m = q(&[&[2, 4, 1, 0, 3], &[1, 2, 0, 1, 1], &[3, 6, 1, 1, 4], &[0, 0, 5, -1, 2]]);
        let (r1, p1) = gauss_jordan(&m);
        let (r2, p2) = rational_rref(&m);
        assert_eq!(p1, p2);
        assert_eq!(r1, r2);
        assert_eq!(rational_rank(&m), gauss_rank(&m));
    }

    fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(-3i64..=3, r * c)))
    }

    proptest! {
        #[test]
        fn overdetermined_solve_agrees_with_elimination(
            (r, c, data) in small_matrix(),
            xs in proptest::collection::vec((-9i64..=9, 1i64..=7), 6),
            perturb in proptest::bool::ANY,
        ) {
            let m = DenseMatrix::from_vec(&Rationals, r, c, data.iter().map(|&x| Rationals.from_i64(x)).collect());
            let x: Vec<BigRational> = xs[..c].iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect();
            let mut b = m.mul_vec(&x);
            if perturb {
                b[0] += BigRational::new(1.into(), 3.into());
            }
            let fast = m.solve(&b);
            let slow = m.solve_by_rref(&b);
            prop_assert_eq!(fast.is_some(), slow.is_some());
            if let Some(y) = fast {
                prop_assert_eq!(m.mul_vec(&y), b);
            }
        }

        #[test]
        fn rank_nullity((r, c, data) in small_matrix()) {
            let m = DenseMatrix::from_vec(&Rationals, r, c, data.iter().map(|&x| Rationals.from_i64(x)).collect());
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.n_rows(), c);
            for v in k.rows() {
                prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
            let (g, gp) = gauss_jordan(&m);
            let (b, bp) = rational_rref(&m);
            prop_assert_eq!(gp, bp);
            prop_assert_eq!(g, b);
        }

        #[test]
        fn rank_is_permutation_and_scaling_invariant((r, c, data) in small_matrix(), s in 1i64..5) {
            let m = DenseMatrix::from_vec(&Rationals, r, c, data.iter().map(|&x| Rationals.from_i64(x)).collect());
            let mut rows = m.to_rows();
            rows.reverse();
            for x in rows[0].iter_mut() { *x = Rationals.mul(x, &Rationals.from_i64(s)); }
            let permuted = DenseMatrix::from_rows(&Rationals, c, rows);
            prop_assert_eq!(permuted.rank(), m.rank());
            prop_assert_eq!(m.transpose().rank(), m.rank());
        }

        #[test]
        fn rational_rank_bounds_modular_rank((r, c, data) in small_matrix()) {
            let m = DenseMatrix::from_vec(&Rationals, r, c, data.iter().map(|&x| Rationals.from_i64(x)).collect());
            for p in [2u64, 3, 5, 7] {
                let mp = m.reduce_mod(p).unwrap();
                prop_assert!(mp.rank() <= m.rank());
            }
        }
    }
}
