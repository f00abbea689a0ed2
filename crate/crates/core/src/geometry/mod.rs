//! Base loci, complete intersections, irreducibility of the nonic curve and
//! residual (linked) point sets.

pub mod baselocus;
pub mod ci;
pub mod irreducible;
pub mod liaison;

pub use baselocus::{base_locus_curve_test, BaseLocusOptions, BaseLocusTag, BaseLocusVerdict, PlaneTrial};
pub use ci::{
    ci_validate, ci_validate_image, h_ci, hilbert_series_coefficients, pencil_check_image, pencil_regular_sequence_check,
    CiFailure, CompleteIntersection,
};
pub use irreducible::{nonic_irreducibility, CenterTrial, Irreducibility, IrreducibilityOptions, IrreducibilityVerdict};
pub use liaison::{
    betti_diagnostic, colon_pieces, minimal_generators, residual_pieces, BettiReport, MinimalGenerators, ResidualPieces,
};

use rand::Rng;

use crate::linalg::modular::random_prime;
use crate::linalg::{Field, PrimeField};
use crate::poly::Form;

/// The prime a computation over `field` is carried out modulo: the
/// characteristic itself, or a fresh random 62-bit prime for the rationals.
pub fn working_prime<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R) -> u64 {
    match field.characteristic() {
        0 => random_prime(rng, 62),
        p => p,
    }
}

/// Coefficientwise image of `f` in `F_p`; `None` if some coefficient has `p`
/// in its denominator. Forms over a prime field keep their own
/// characteristic whatever `p` is passed.
pub fn reduce_form<F: Field>(f: &Form<F>, p: u64) -> Option<Form<PrimeField>> {
    let p = match f.field().characteristic() {
        0 => p,
        q => q,
    };
    let fp = PrimeField::new(p).ok()?;
    let coeffs = f.coeffs().iter().map(|c| f.field().reduce_mod(c, p)).collect::<Option<Vec<u64>>>()?;
    Some(Form::from_coeffs(&fp, f.nvars(), f.degree(), coeffs))
}
