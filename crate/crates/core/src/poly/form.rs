//! Homogeneous forms as coefficient vectors over a monomial basis.

use super::monomial::{add_exp, basis, n_monomials, Exponent, MAX_DEGREE};
use crate::linalg::{DenseMatrix, Field, Subspace};

#[derive(Clone, Debug, PartialEq)]
pub struct Form<F: Field> {
    field: F,
    nvars: usize,
    degree: usize,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Form<F> {
    pub fn zero(field: &F, nvars: usize, degree: usize) -> Self {
        Form { field: field.clone(), nvars, degree, coeffs: vec![field.zero(); n_monomials(nvars, degree)] }
    }

    pub fn from_coeffs(field: &F, nvars: usize, degree: usize, coeffs: Vec<F::Elem>) -> Self {
        assert_eq!(coeffs.len(), n_monomials(nvars, degree), "coefficient count does not match degree");
        Form { field: field.clone(), nvars, degree, coeffs }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        Form { field: field.clone(), nvars, degree: 0, coeffs: vec![c] }
    }

    pub fn monomial(field: &F, nvars: usize, e: &Exponent) -> Self {
        let d = e.iter().map(|&x| x as usize).sum();
        let mut f = Self::zero(field, nvars, d);
        let i = basis(nvars, d).index(e);
        f.coeffs[i] = field.one();
        f
    }

    pub fn variable(field: &F, nvars: usize, i: usize) -> Self {
        let mut e = [0u8; 4];
        e[i] = 1;
        Self::monomial(field, nvars, &e)
    }

    /// The linear form `Σ c_i x_i`.
    pub fn linear(field: &F, c: &[F::Elem]) -> Self {
        Self::from_coeffs(field, c.len(), 1, c.to_vec())
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }
    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn coeff(&self, e: &Exponent) -> &F::Elem {
        &self.coeffs[basis(self.nvars, self.degree).index(e)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.field, other.field, "mixed-field arithmetic");
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let f = &self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.add(a, b)).collect();
        Form { coeffs, ..self.clone_shape() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compatible(other);
        assert_eq!(self.degree, other.degree, "subtracting forms of different degree");
        let f = &self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.sub(a, b)).collect();
        Form { coeffs, ..self.clone_shape() }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|a| f.mul(a, c)).collect();
        Form { coeffs, ..self.clone_shape() }
    }

    fn clone_shape(&self) -> Self {
        Form { field: self.field.clone(), nvars: self.nvars, degree: self.degree, coeffs: Vec::new() }
    }

    /// Product, or `None` when the degree exceeds the supported maximum.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        self.check_compatible(other);
        let d = self.degree + other.degree;
        if d > MAX_DEGREE {
            return None;
        }
        let f = &self.field;
        let (ba, bb, bo) = (basis(self.nvars, self.degree), basis(self.nvars, other.degree), basis(self.nvars, d));
        let mut out = Self::zero(f, self.nvars, d);
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            let ea = ba.exponent(i);
            for (j, b) in other.coeffs.iter().enumerate() {
                if f.is_zero(b) {
                    continue;
                }
                let k = bo.index(&add_exp(ea, bb.exponent(j)));
                f.mul_add_assign(&mut out.coeffs[k], a, b);
            }
        }
        Some(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).unwrap_or_else(|| panic!("degree overflow beyond {MAX_DEGREE}"))
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::constant(&self.field, self.nvars, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.nvars);
        let v = veronese(&self.field, point, self.degree);
        self.field.dot(&self.coeffs, &v)
    }

    /// ∂/∂x_k
    pub fn partial(&self, k: usize) -> Self {
        let f = &self.field;
        if self.degree == 0 {
            return Self::zero(f, self.nvars, 0);
        }
        let (b, bo) = (basis(self.nvars, self.degree), basis(self.nvars, self.degree - 1));
        let mut out = Self::zero(f, self.nvars, self.degree - 1);
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = b.exponent(i);
            if e[k] == 0 || f.is_zero(c) {
                continue;
            }
            let mut e2 = *e;
            e2[k] -= 1;
            let idx = bo.index(&e2);
            out.coeffs[idx] = f.mul(c, &f.from_i64(e[k] as i64));
        }
        out
    }

    pub fn gradient_at(&self, point: &[F::Elem]) -> Vec<F::Elem> {
        (0..self.nvars).map(|k| self.partial(k).eval(point)).collect()
    }

    /// `f(M y)` where `x_i = Σ_j m[i][j] y_j`; `m` has `nvars` rows and
    /// `new_nvars` columns.
    pub fn substitute(&self, m: &[Vec<F::Elem>], new_nvars: usize) -> Self {
        assert_eq!(m.len(), self.nvars);
        let f = &self.field;
        let lins: Vec<Form<F>> = m
            .iter()
            .map(|row| {
                assert_eq!(row.len(), new_nvars);
                Form::linear(f, row)
            })
            .collect();
        let powers: Vec<Vec<Form<F>>> = lins
            .iter()
            .map(|l| {
                let mut p = vec![Form::constant(f, new_nvars, f.one())];
                for e in 1..=self.degree {
                    let next = p[e - 1].mul(l);
                    p.push(next);
                }
                p
            })
            .collect();
        let b = basis(self.nvars, self.degree);
        let mut out = Self::zero(f, new_nvars, self.degree);
        for (i, c) in self.coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let e = b.exponent(i);
            let mut term = Form::constant(f, new_nvars, c.clone());
            for (v, pw) in powers.iter().enumerate() {
                if e[v] > 0 {
                    term = term.mul(&pw[e[v] as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }
}

/// Monomial values `P^α` over the degree-d basis.
pub fn veronese<F: Field>(field: &F, point: &[F::Elem], d: usize) -> Vec<F::Elem> {
    let nvars = point.len();
    let pw: Vec<Vec<F::Elem>> = point
        .iter()
        .map(|x| {
            let mut v = vec![field.one()];
            for e in 1..=d {
                let next = field.mul(&v[e - 1], x);
                v.push(next);
            }
            v
        })
        .collect();
    basis(nvars, d)
        .exponents()
        .iter()
        .map(|e| {
            let mut acc = pw[0][e[0] as usize].clone();
            for v in 1..nvars {
                if e[v] > 0 {
                    acc = field.mul(&acc, &pw[v][e[v] as usize]);
                }
            }
            acc
        })
        .collect()
}

/// Rows `m · g` for every generator `g` and every monomial `m` of degree
/// `d − deg g`; generators of degree above `d` contribute nothing.
pub fn multiples_matrix<F: Field>(field: &F, gens: &[Form<F>], d: usize) -> DenseMatrix<F> {
    let nvars = gens.first().map_or(4, |g| g.nvars());
    let bo = basis(nvars, d);
    let mut m = DenseMatrix::zeros(field, 0, bo.len());
    for g in gens {
        if g.degree() > d {
            continue;
        }
        let bg = basis(nvars, g.degree());
        let bm = basis(nvars, d - g.degree());
        for em in bm.exponents() {
            let mut row = vec![field.zero(); bo.len()];
            for (j, c) in g.coeffs().iter().enumerate() {
                if !field.is_zero(c) {
                    row[bo.index(&add_exp(em, bg.exponent(j)))] = c.clone();
                }
            }
            m.push_row(row);
        }
    }
    m
}

/// The degree-d piece of the ideal generated by `gens`.
pub fn multiples_piece<F: Field>(field: &F, gens: &[Form<F>], d: usize) -> Subspace<F> {
    Subspace::from_matrix(&multiples_matrix(field, gens, d))
}

/// Given functionals `dual` on degree `d + deg g` (rows), returns the matrix
/// of `f ↦ dual(g · f)` on degree-d forms `f`.
pub fn pullback_by_product<F: Field>(dual: &DenseMatrix<F>, g: &Form<F>, d: usize) -> DenseMatrix<F> {
    let field = dual.field();
    let nvars = g.nvars();
    let bo = basis(nvars, d + g.degree());
    assert_eq!(dual.n_cols(), bo.len());
    let bg = basis(nvars, g.degree());
    let bd = basis(nvars, d);
    let support: Vec<(usize, &F::Elem)> =
        g.coeffs().iter().enumerate().filter(|(_, c)| !field.is_zero(c)).collect();
    let mut out = DenseMatrix::zeros(field, dual.n_rows(), bd.len());
    for (col, em) in bd.exponents().iter().enumerate() {
        for &(j, c) in &support {
            let k = bo.index(&add_exp(em, bg.exponent(j)));
            for r in 0..dual.n_rows() {
                let v = dual.get(r, k);
                if field.is_zero(v) {
                    continue;
                }
                let mut cur = out.get(r, col).clone();
                field.mul_add_assign(&mut cur, c, v);
                out.set(r, col, cur);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rationals};
    use crate::poly::monomial::n_quaternary;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x(i: usize) -> Form<Rationals> {
        Form::variable(&Rationals, 4, i)
    }

    #[test]
    fn products_by_hand() {
        let one = Form::constant(&Rationals, 4, Rationals.one());
        assert_eq!(x(2).mul(&one), x(2));
        assert_eq!(x(0).mul(&x(1)), Form::monomial(&Rationals, 4, &[1, 1, 0, 0]));
        let l = x(0).add(&x(1));
        let sq = l.mul(&l);
        assert_eq!(sq.coeffs()[0], Rationals.from_i64(1));
        assert_eq!(sq.coeffs()[1], Rationals.from_i64(2));
        assert_eq!(sq.coeffs()[4], Rationals.from_i64(1));
        assert_eq!(sq.coeffs().iter().filter(|c| !Rationals.is_zero(c)).count(), 3);
    }

    #[test]
    fn veronese_by_hand() {
        let q = |v: i64| Rationals.from_i64(v);
        let v = veronese(&Rationals, &[q(1), q(2), q(0), q(0)], 2);
        let expect: Vec<_> = [1, 2, 0, 0, 4, 0, 0, 0, 0, 0].iter().map(|&x| q(x)).collect();
        assert_eq!(v, expect);
        let ones = veronese(&Rationals, &[q(1), q(1), q(1), q(1)], 5);
        assert!(ones.iter().all(|x| *x == q(1)));
        let e0 = veronese(&Rationals, &[q(1), q(0), q(0), q(0)], 6);
        assert_eq!(e0[0], q(1));
        assert!(e0[1..].iter().all(|x| Rationals.is_zero(x)));
    }

    #[test]
    fn multiples_of_x0() {
        assert_eq!(multiples_piece(&Rationals, &[x(0)], 2).dim(), 4);
    }

    #[test]
    fn koszul_dimension_for_two_cubics() {
        let f = PrimeField::new(1_000_003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cubic = |rng: &mut ChaCha8Rng| {
            Form::from_coeffs(&f, 4, 3, (0..20).map(|_| f.random(rng, 0)).collect())
        };
        let (g1, g2) = (cubic(&mut rng), cubic(&mut rng));
        assert_eq!(multiples_piece(&f, &[g1.clone(), g2.clone()], 6).dim(), 39);
        let g3 = Form::from_coeffs(&f, 4, 4, (0..35).map(|_| f.random(&mut rng, 0)).collect());
        assert_eq!(multiples_piece(&f, &[g1, g2, g3], 6).dim(), n_quaternary(6) - 35);
    }

    #[test]
    fn pullback_matches_product() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = Form::from_coeffs(&f, 4, 2, (0..10).map(|_| f.random(&mut rng, 0)).collect());
        let h = Form::from_coeffs(&f, 4, 3, (0..20).map(|_| f.random(&mut rng, 0)).collect());
        let dual = DenseMatrix::from_vec(&f, 2, 56, (0..112).map(|_| f.random(&mut rng, 0)).collect());
        let pb = pullback_by_product(&dual, &g, 3);
        assert_eq!(pb.mul_vec(h.coeffs()), dual.mul_vec(g.mul(&h).coeffs()));
    }

    fn form_strategy(d: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-3i64..=3, n_quaternary(d))
    }

    fn mk(d: usize, c: &[i64]) -> Form<PrimeField> {
        let f = PrimeField::new(10007).unwrap();
        Form::from_coeffs(&f, 4, d, c.iter().map(|&v| f.from_i64(v)).collect())
    }

    proptest! {
        #[test]
        fn multiply_commutative_associative(a in form_strategy(1), b in form_strategy(2), c in form_strategy(2)) {
            let (a, b, c) = (mk(1, &a), mk(2, &b), mk(2, &c));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn veronese_pairing_is_evaluation(g in form_strategy(6), p in proptest::collection::vec(-5i64..=5, 4)) {
            let g = mk(6, &g);
            let f = *g.field();
            let pt: Vec<u64> = p.iter().map(|&v| f.from_i64(v)).collect();
            prop_assert_eq!(f.dot(&veronese(&f, &pt, 6), g.coeffs()), g.eval(&pt));
        }

        #[test]
        fn substitution_commutes_with_evaluation(g in form_strategy(3), m in proptest::collection::vec(-3i64..=3, 12), y in proptest::collection::vec(-4i64..=4, 3)) {
            let g = mk(3, &g);
            let f = *g.field();
            let mat: Vec<Vec<u64>> = m.chunks(3).map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
            let yv: Vec<u64> = y.iter().map(|&v| f.from_i64(v)).collect();
            let xv: Vec<u64> = mat.iter().map(|r| f.dot(r, &yv)).collect();
            prop_assert_eq!(g.substitute(&mat, 3).eval(&yv), g.eval(&xv));
        }
    }
}
