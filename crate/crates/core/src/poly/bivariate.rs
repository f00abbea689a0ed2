//! Dense univariate and bivariate polynomials, and the Ruppert–Gao count of
//! absolutely irreducible factors.

use super::form::Form;
use super::monomial::basis;
use crate::linalg::{DenseMatrix, Field};

/// Coefficients from low to high degree, without trailing zeros.
pub type UniPoly<E> = Vec<E>;

pub fn uni_trim<F: Field>(field: &F, p: &mut UniPoly<F::Elem>) {
    while p.last().is_some_and(|c| field.is_zero(c)) {
        p.pop();
    }
}

pub fn uni_derivative<F: Field>(field: &F, p: &[F::Elem]) -> UniPoly<F::Elem> {
    let mut d: Vec<F::Elem> = p.iter().enumerate().skip(1).map(|(i, c)| field.mul(c, &field.from_i64(i as i64))).collect();
    uni_trim(field, &mut d);
    d
}

/// Remainder of `a` modulo nonzero `b`.
pub fn uni_rem<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> UniPoly<F::Elem> {
    let mut r = a.to_vec();
    uni_trim(field, &mut r);
    let lead_inv = field.inv(b.last().expect("nonzero divisor")).expect("trimmed divisor");
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let q = field.mul(r.last().unwrap(), &lead_inv);
        for (i, c) in b.iter().enumerate() {
            let t = field.mul(&q, c);
            r[shift + i] = field.sub(&r[shift + i], &t);
        }
        uni_trim(field, &mut r);
    }
    r
}

/// Monic greatest common divisor.
pub fn uni_gcd<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> UniPoly<F::Elem> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    uni_trim(field, &mut a);
    uni_trim(field, &mut b);
    while !b.is_empty() {
        let r = uni_rem(field, &a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last() {
        let inv = field.inv(l).expect("nonzero");
        for c in a.iter_mut() {
            *c = field.mul(c, &inv);
        }
    }
    a
}

pub fn uni_is_squarefree<F: Field>(field: &F, p: &[F::Elem]) -> bool {
    let d = uni_derivative(field, p);
    if d.is_empty() {
        return p.len() <= 1;
    }
    uni_gcd(field, p, &d).len() == 1
}

/// Dense bivariate polynomial; `c[i][j]` is the coefficient of `x^i y^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bivariate<F: Field> {
    field: F,
    c: Vec<Vec<F::Elem>>,
}

impl<F: Field> Bivariate<F> {
    pub fn zero(field: &F, deg_x: usize, deg_y: usize) -> Self {
        Bivariate { field: field.clone(), c: vec![vec![field.zero(); deg_y + 1]; deg_x + 1] }
    }

    /// `F(1, x, y)` for a ternary form `F(x0, x1, x2)`.
    pub fn dehomogenize(f: &Form<F>) -> Self {
        assert_eq!(f.nvars(), 3);
        let field = f.field();
        let d = f.degree();
        let mut out = Self::zero(field, d, d);
        for (i, c) in f.coeffs().iter().enumerate() {
            let e = basis(3, d).exponent(i);
            out.c[e[1] as usize][e[2] as usize] = c.clone();
        }
        out.trim();
        out
    }

    fn trim(&mut self) {
        let f = self.field.clone();
        while self.c.len() > 1 && self.c.last().unwrap().iter().all(|x| f.is_zero(x)) {
            self.c.pop();
        }
        let dy = self.deg_y_raw();
        for row in self.c.iter_mut() {
            row.truncate(dy + 1);
        }
    }

    fn deg_y_raw(&self) -> usize {
        let f = &self.field;
        self.c.iter().filter_map(|row| row.iter().rposition(|x| !f.is_zero(x))).max().unwrap_or(0)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn deg_x(&self) -> usize {
        self.c.len() - 1
    }
    pub fn deg_y(&self) -> usize {
        self.deg_y_raw()
    }
    pub fn coeff(&self, i: usize, j: usize) -> F::Elem {
        self.c.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(|| self.field.zero())
    }
    pub fn is_zero(&self) -> bool {
        self.c.iter().flatten().all(|x| self.field.is_zero(x))
    }

    /// `f(x, y0)` as a univariate polynomial in x.
    pub fn specialize_y(&self, y0: &F::Elem) -> UniPoly<F::Elem> {
        let f = &self.field;
        let mut out: Vec<F::Elem> = self
            .c
            .iter()
            .map(|row| row.iter().rev().fold(f.zero(), |acc, a| f.add(&f.mul(&acc, y0), a)))
            .collect();
        uni_trim(f, &mut out);
        out
    }

    /// Coefficients of x^i as polynomials in y.
    pub fn x_coefficients(&self) -> Vec<UniPoly<F::Elem>> {
        self.c
            .iter()
            .map(|row| {
                let mut r = row.clone();
                uni_trim(&self.field, &mut r);
                r
            })
            .collect()
    }

    pub fn partial_x(&self) -> Self {
        let f = &self.field;
        let c = self.c.iter().enumerate().skip(1).map(|(i, row)| row.iter().map(|a| f.mul(a, &f.from_i64(i as i64))).collect()).collect::<Vec<_>>();
        let mut out = Bivariate { field: f.clone(), c: if c.is_empty() { vec![vec![f.zero()]] } else { c } };
        out.trim();
        out
    }

    pub fn partial_y(&self) -> Self {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .map(|row| {
                let r: Vec<F::Elem> = row.iter().enumerate().skip(1).map(|(j, a)| f.mul(a, &f.from_i64(j as i64))).collect();
                if r.is_empty() {
                    vec![f.zero()]
                } else {
                    r
                }
            })
            .collect();
        let mut out = Bivariate { field: f.clone(), c };
        out.trim();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let (ax, ay) = (self.c.len(), self.c[0].len());
        let (bx, by) = (other.c.len(), other.c[0].len());
        let mut out = Self::zero(f, ax + bx - 2, ay + by - 2);
        for i in 0..ax {
            for j in 0..self.c[i].len() {
                let a = &self.c[i][j];
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..bx {
                    for l in 0..other.c[k].len() {
                        f.mul_add_assign(&mut out.c[i + k][j + l], a, &other.c[k][l]);
                    }
                }
            }
        }
        out.trim();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuppertError {
    /// The characteristic is positive and at most `(2m − 1) n`.
    CharacteristicTooSmall { needed_above: u64 },
    ConstantPolynomial,
}

/// Dimension of the solution space of
/// `f g_y − g f_y − f h_x + h f_x = 0`, `deg g ≤ (m−1, n)`, `deg h ≤ (m, n−1)`,
/// where `(m, n)` is the bidegree of `f`. When `gcd(f, f_x) = 1` this equals
/// the number of absolutely irreducible factors of `f`.
pub fn ruppert_gao_dimension<F: Field>(f: &Bivariate<F>) -> Result<usize, RuppertError> {
    let (m, n) = (f.deg_x(), f.deg_y());
    if m == 0 || n == 0 {
        return Err(RuppertError::ConstantPolynomial);
    }
    let field = f.field().clone();
    let p = field.characteristic();
    let bound = ((2 * m - 1) * n) as u64;
    if p != 0 && p <= bound {
        return Err(RuppertError::CharacteristicTooSmall { needed_above: bound });
    }
    let (fx, fy) = (f.partial_x(), f.partial_y());
    let (ex, ey) = (2 * m, 2 * n);
    let eq = |i: usize, j: usize| i * ey + j;
    let n_g = m * (n + 1);
    let n_h = (m + 1) * n;
    let mut mat = DenseMatrix::zeros(&field, ex * ey, n_g + n_h);
    let add = |mat: &mut DenseMatrix<F>, src: &Bivariate<F>, a: usize, b: usize, scale: &F::Elem, col: usize| {
        for (i, row) in src.c.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if field.is_zero(v) {
                    continue;
                }
                let r = eq(i + a, j + b);
                let mut cur = mat.get(r, col).clone();
                field.mul_add_assign(&mut cur, v, scale);
                mat.set(r, col, cur);
            }
        }
    };
    let minus_one = field.from_i64(-1);
    for a in 0..m {
        for b in 0..=n {
            let col = a * (n + 1) + b;
            if b > 0 {
                add(&mut mat, f, a, b - 1, &field.from_i64(b as i64), col);
            }
            add(&mut mat, &fy, a, b, &minus_one, col);
        }
    }
    for a in 0..=m {
        for b in 0..n {
            let col = n_g + a * n + b;
            if a > 0 {
                add(&mut mat, f, a - 1, b, &field.from_i64(-(a as i64)), col);
            }
            add(&mut mat, &fx, a, b, &field.one(), col);
        }
    }
    Ok(n_g + n_h - mat.rank())
}
