//! Subspaces of `K^n` in canonical (reduced echelon) form.

use super::field::Field;
use super::matrix::DenseMatrix;

/// Incremental semi-echelon basis. Each stored row is zero at the pivots of
/// the rows inserted before it, so reducing a vector against the rows in
/// insertion order clears every pivot.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    n: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: &F, n: usize) -> Self {
        Echelon { field: field.clone(), n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[c]) {
                continue;
            }
            let factor = v[c].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !f.is_zero(y) {
                    let t = f.mul(&factor, y);
                    *x = f.sub(x, &t);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` if it is independent of the current rows; returns whether it was.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.n);
        let f = &self.field;
        let mut r = self.reduce(v);
        let Some(c) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[c]).expect("nonzero");
        for x in r.iter_mut() {
            *x = f.mul(x, &inv);
        }
        self.rows.push(r);
        self.pivots.push(c);
        true
    }

    pub fn into_subspace(self) -> Subspace<F> {
        let m = DenseMatrix::from_rows(&self.field, self.n, self.rows);
        Subspace::from_matrix(&m)
    }
}

/// A subspace stored by its reduced row echelon basis, which is canonical.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    basis: DenseMatrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, n: usize) -> Self {
        Subspace { basis: DenseMatrix::zeros(field, 0, n), pivots: Vec::new() }
    }

    pub fn full(field: &F, n: usize) -> Self {
        Subspace { basis: DenseMatrix::identity(field, n), pivots: (0..n).collect() }
    }

    /// Right kernel of `m`.
    pub fn kernel_of(m: &DenseMatrix<F>) -> Self {
        let (basis, pivots) = m.kernel_with_pivots();
        Subspace { basis, pivots }
    }

    /// Row span of `m`.
    pub fn from_matrix(m: &DenseMatrix<F>) -> Self {
        let (basis, pivots) = m.rref();
        Subspace { basis, pivots }
    }

    pub fn from_rows(field: &F, n: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        Self::from_matrix(&DenseMatrix::from_rows(field, n, rows))
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }
    pub fn dim(&self) -> usize {
        self.basis.n_rows()
    }
    pub fn ambient(&self) -> usize {
        self.basis.n_cols()
    }
    pub fn basis(&self) -> &DenseMatrix<F> {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn echelon(&self) -> Echelon<F> {
        Echelon {
            field: self.field().clone(),
            n: self.ambient(),
            rows: self.basis.to_rows(),
            pivots: self.pivots.clone(),
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = self.field();
        let mut v = v.to_vec();
        for (i, &c) in self.pivots.iter().enumerate() {
            if f.is_zero(&v[c]) {
                continue;
            }
            let factor = v[c].clone();
            for (x, y) in v.iter_mut().zip(self.basis.row(i)) {
                if !f.is_zero(y) {
                    let t = f.mul(&factor, y);
                    *x = f.sub(x, &t);
                }
            }
        }
        v.iter().all(|x| f.is_zero(x))
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.basis.rows().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::from_matrix(&self.basis.vstack(&other.basis))
    }

    /// Vectors `w` with `<v, w> = 0` for all `v` in the subspace.
    pub fn annihilator(&self) -> Self {
        let (basis, pivots) = self.basis.kernel_with_pivots();
        Subspace { basis, pivots }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Rows of `outer`'s basis which, added to `self`, complete it to a basis
    /// of `outer`. Returns `None` if `self` is not contained in `outer`.
    pub fn complement_in(&self, outer: &Self) -> Option<DenseMatrix<F>> {
        if !outer.contains_subspace(self) {
            return None;
        }
        let mut ech = self.echelon();
        let mut chosen = Vec::new();
        for r in outer.basis.rows() {
            if ech.rank() == outer.dim() {
                break;
            }
            if ech.insert(r) {
                chosen.push(r.to_vec());
            }
        }
        Some(DenseMatrix::from_rows(self.field(), self.ambient(), chosen))
    }
}
