//! Pencils of cubics and complete intersections of type (3,3,4).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::matrix::FILTER_PRIMES;
use crate::linalg::{Field, Subspace};
use crate::poly::{multiples_matrix, n_quaternary, Form};

/// Hilbert function of R/(cubic, cubic, quartic), the coefficients of
/// (1−t³)²(1−t⁴)/(1−t)⁴; constant 36 from degree 7 on.
pub fn h_ci(d: usize) -> usize {
    const H: [usize; 8] = [1, 4, 10, 18, 26, 32, 35, 36];
    if d < 8 {
        H[d]
    } else {
        36
    }
}

/// Coefficients of a power series quotient `num / (1 − t)^4` up to `max_d`.
pub fn hilbert_series_coefficients(num: &[i64], max_d: usize) -> Vec<i64> {
    (0..=max_d)
        .map(|d| {
            num.iter()
                .enumerate()
                .filter(|(k, _)| *k <= d)
                .map(|(k, &c)| c * n_quaternary(d - k) as i64)
                .sum()
        })
        .collect()
}

/// True iff the degree-6 multiples of the pencil have dimension 39, that is,
/// the only syzygy up to degree 6 is the Koszul one.
pub fn pencil_regular_sequence_check<F: Field>(g1: &Form<F>, g2: &Form<F>) -> Result<bool> {
    if g1.degree() != 3 || g2.degree() != 3 {
        return Err(Error::Input("pencil members must be cubics".into()));
    }
    if g1.is_zero() || g2.is_zero() {
        return Err(Error::Input("pencil member is zero".into()));
    }
    let field = g1.field();
    let span = Subspace::from_rows(field, 20, vec![g1.coeffs().to_vec(), g2.coeffs().to_vec()]);
    if span.dim() < 2 {
        return Err(Error::Input("pencil members are dependent".into()));
    }
    Ok(multiples_matrix(field, &[g1.clone(), g2.clone()], 6).rank() == 39)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompleteIntersection<F: Field> {
    pub g1: Form<F>,
    pub g2: Form<F>,
    pub g: Form<F>,
}

impl<F: Field> CompleteIntersection<F> {
    pub fn generators(&self) -> Vec<Form<F>> {
        vec![self.g1.clone(), self.g2.clone(), self.g.clone()]
    }

    pub fn piece(&self, d: usize) -> Subspace<F> {
        Subspace::from_matrix(&multiples_matrix(self.g1.field(), &self.generators(), d))
    }

    /// `h_Z(0..=max_d)` computed on the image modulo `p`. Each value bounds
    /// the true one from above; values equal to the complete-intersection
    /// ones are therefore exact.
    pub fn hilbert_function_image(&self, p: u64, max_d: usize) -> Option<Vec<usize>> {
        let gens = self.generators().iter().map(|g| super::reduce_form(g, p)).collect::<Option<Vec<_>>>()?;
        let fp = *gens[0].field();
        Some((0..=max_d).map(|d| n_quaternary(d) - multiples_matrix(&fp, &gens, d).rank()).collect())
    }

    /// Functionals vanishing on `(I_CI)_d`.
    pub fn dual_piece(&self, d: usize) -> Subspace<F> {
        self.piece(d).annihilator()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CiFailure {
    /// The pencil (g1, g2) is not a regular sequence.
    Pencil,
    /// `dim (I_CI)_d` differs from `N(d) − hCI(d)`.
    Degree { degree: usize, expected: usize, found: usize },
    /// A coefficient has the working prime in its denominator.
    BadReduction { prime: u64 },
}

/// Validates degrees 4..=7 against the (3,3,4) Hilbert function.
pub fn ci_validate<F: Field>(g1: &Form<F>, g2: &Form<F>, g: &Form<F>) -> Result<std::result::Result<CompleteIntersection<F>, CiFailure>> {
    if g.degree() != 4 {
        return Err(Error::Input("the third generator must be a quartic".into()));
    }
    if g1.field().characteristic() == 0 {
        for &p in FILTER_PRIMES.iter() {
            match ci_validate_image(g1, g2, g, p)? {
                Ok(()) => return Ok(Ok(CompleteIntersection { g1: g1.clone(), g2: g2.clone(), g: g.clone() })),
                Err(CiFailure::BadReduction { .. }) => continue,
                Err(_) => break,
            }
        }
    }
    match pencil_regular_sequence_check(g1, g2) {
        Ok(true) => {}
        Ok(false) | Err(_) => return Ok(Err(CiFailure::Pencil)),
    }
    let gens = vec![g1.clone(), g2.clone(), g.clone()];
    for d in 4..=7 {
        let found = multiples_matrix(g1.field(), &gens, d).rank();
        let expected = n_quaternary(d) - h_ci(d);
        if found != expected {
            return Ok(Err(CiFailure::Degree { degree: d, expected, found }));
        }
    }
    Ok(Ok(CompleteIntersection { g1: g1.clone(), g2: g2.clone(), g: g.clone() }))
}

/// Runs both checks on the images of the forms in `F_p`, with `p` the
/// characteristic for prime fields. Over the rationals a pass is still a
/// proof: the multiples of any two cubics and a quartic never exceed the
/// complete-intersection dimensions, and ranks can only drop modulo `p`.
pub fn pencil_check_image<F: Field>(g1: &Form<F>, g2: &Form<F>, p: u64) -> Result<bool> {
    match (super::reduce_form(g1, p), super::reduce_form(g2, p)) {
        (Some(h1), Some(h2)) => pencil_regular_sequence_check(&h1, &h2),
        _ => Ok(false),
    }
}

pub fn ci_validate_image<F: Field>(g1: &Form<F>, g2: &Form<F>, g: &Form<F>, p: u64) -> Result<std::result::Result<(), CiFailure>> {
    let (Some(h1), Some(h2), Some(h)) = (super::reduce_form(g1, p), super::reduce_form(g2, p), super::reduce_form(g, p)) else {
        return Ok(Err(CiFailure::BadReduction { prime: p }));
    };
    Ok(ci_validate(&h1, &h2, &h)?.map(|_| ()))
}
