//! Irreducibility of the base curve of a pencil of cubics.
//!
//! The curve `C = V(G1, G2)` is projected from a random center to a plane
//! nonic, which is tested for absolute irreducibility with the
//! Ruppert–Gao linear system. Components of `C` project to components of the
//! nonic, so one center with a single factor proves `C` irreducible.
//!
//! Rational pencils are handled through their image modulo a random 62-bit
//! prime: a curve that splits over the algebraic closure of Q still splits
//! after reduction at a prime where its degree is kept, so irreducibility of
//! the image is a certificate for the original.

use rand::Rng;
use serde::Serialize;

use super::{reduce_form, working_prime};
use crate::linalg::{DenseMatrix, Field, PrimeField};
use crate::poly::bivariate::{ruppert_gao_dimension, uni_is_squarefree, Bivariate};
use crate::poly::{resultant_x3, Exponent, Form};

const NONIC: usize = 9;
/// The Ruppert–Gao system for a nonic is only valid above this characteristic.
const MIN_CHARACTERISTIC: u64 = ((2 * NONIC - 1) * NONIC) as u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterTrial {
    /// Whether the projected nonic kept degree 9 in both affine variables.
    pub valid: bool,
    pub squarefree: bool,
    pub ruppert_dimension: Option<usize>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrreducibilityVerdict {
    pub verdict: Irreducibility,
    pub prime: Option<u64>,
    pub trials: Vec<CenterTrial>,
}

#[derive(Clone, Copy, Debug)]
pub struct IrreducibilityOptions {
    /// Valid centers needed before `Reducible` may be reported.
    pub centers: usize,
    /// Total number of centers tried, valid or not.
    pub max_attempts: usize,
}

impl Default for IrreducibilityOptions {
    fn default() -> Self {
        IrreducibilityOptions { centers: 3, max_attempts: 12 }
    }
}

pub fn nonic_irreducibility<F: Field, R: Rng + ?Sized>(
    g1: &Form<F>,
    g2: &Form<F>,
    opts: IrreducibilityOptions,
    rng: &mut R,
) -> IrreducibilityVerdict {
    let mut out = IrreducibilityVerdict { verdict: Irreducibility::Inconclusive, prime: None, trials: Vec::new() };
    let p = working_prime(g1.field(), rng);
    if p <= MIN_CHARACTERISTIC {
        out.trials.push(CenterTrial {
            valid: false,
            squarefree: false,
            ruppert_dimension: None,
            note: Some(format!("characteristic {p} is at most {MIN_CHARACTERISTIC}")),
        });
        return out;
    }
    let (Some(h1), Some(h2)) = (reduce_form(g1, p), reduce_form(g2, p)) else {
        out.trials.push(CenterTrial { valid: false, squarefree: false, ruppert_dimension: None, note: Some(format!("bad reduction modulo {p}")) });
        return out;
    };
    out.prime = Some(p);
    let mut reducible_patterns = 0;
    for _ in 0..opts.max_attempts {
        let trial = project_and_test(&h1, &h2, rng);
        let dim = trial.ruppert_dimension;
        let valid = trial.valid;
        let pattern = valid && (!trial.squarefree || dim.is_some_and(|d| d >= 2));
        out.trials.push(trial);
        if valid && dim == Some(1) {
            out.verdict = Irreducibility::Irreducible;
            return out;
        }
        if pattern {
            reducible_patterns += 1;
            if reducible_patterns >= opts.centers {
                out.verdict = Irreducibility::Reducible;
                return out;
            }
        }
    }
    out
}

fn random_invertible<R: Rng + ?Sized>(field: &PrimeField, n: usize, rng: &mut R) -> Vec<Vec<u64>> {
    loop {
        let m: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| field.random(rng, 0)).collect()).collect();
        if DenseMatrix::from_rows(field, n, m.clone()).rank() == n {
            return m;
        }
    }
}

fn invalid(note: &str) -> CenterTrial {
    CenterTrial { valid: false, squarefree: false, ruppert_dimension: None, note: Some(note.into()) }
}

fn project_and_test<R: Rng + ?Sized>(g1: &Form<PrimeField>, g2: &Form<PrimeField>, rng: &mut R) -> CenterTrial {
    let field = *g1.field();
    let m = random_invertible(&field, 4, rng);
    let (f1, f2) = (g1.substitute(&m, 4), g2.substitute(&m, 4));
    let nonic = match resultant_x3(&f1, &f2) {
        Ok(r) if !r.is_zero() => r,
        Ok(_) => return invalid("resultant vanishes identically"),
        Err(_) => return invalid("center lies on a cubic of the pencil"),
    };
    let t = random_invertible(&field, 3, rng);
    let plane = nonic.substitute(&t, 3);
    let top_x: Exponent = [0, NONIC as u8, 0, 0];
    if field.is_zero(plane.coeff(&top_x)) {
        return invalid("affine chart lowers the degree in x");
    }
    let f = Bivariate::dehomogenize(&plane);
    if f.deg_x() != NONIC || f.deg_y() != NONIC {
        return invalid("affine chart lowers the bidegree");
    }
    // The x-leading coefficient is a constant, so a squarefree specialization
    // in y rules out any common factor of f and its x-derivative.
    let squarefree = (0..3).any(|_| {
        let y0 = field.random(rng, 0);
        let s = f.specialize_y(&y0);
        s.len() == NONIC + 1 && uni_is_squarefree(&field, &s)
    });
    if !squarefree {
        return CenterTrial { valid: true, squarefree: false, ruppert_dimension: None, note: Some("nonic is not squarefree".into()) };
    }
    match ruppert_gao_dimension(&f) {
        Ok(d) => CenterTrial { valid: true, squarefree: true, ruppert_dimension: Some(d), note: None },
        Err(e) => invalid(&format!("{e:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ci::tests::{fp, pencil_and_quartic};
    use crate::linalg::Rationals;
    use crate::pointconfig::tests::random_points;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generic_pencils_are_irreducible() {
        for seed in 0..3 {
            let (_, g1, g2, _) = pencil_and_quartic(seed + 20);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = nonic_irreducibility(&g1, &g2, IrreducibilityOptions::default(), &mut rng);
            assert_eq!(v.verdict, Irreducibility::Irreducible, "{v:?}");
            assert_eq!(v.trials.last().unwrap().ruppert_dimension, Some(1));
        }
    }

    #[test]
    fn rational_pencil_goes_through_a_modular_image() {
        let a = random_points(18, 40);
        let i3 = a.ideal_piece(3);
        let g1 = Form::from_coeffs(&Rationals, 4, 3, i3.basis().row(0).to_vec());
        let g2 = Form::from_coeffs(&Rationals, 4, 3, i3.basis().row(1).to_vec());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = nonic_irreducibility(&g1, &g2, IrreducibilityOptions::default(), &mut rng);
        assert_eq!(v.verdict, Irreducibility::Irreducible);
        assert!(v.prime.unwrap() > 1 << 61);
    }

    #[test]
    fn plane_cubic_component_is_reducible() {
        // G_i = a_i c + x3 q_i contains the plane cubic {x3 = 0, c = 0}
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rand_form = |d: usize, rng: &mut ChaCha8Rng| {
            Form::from_coeffs(&f, 4, d, (0..crate::poly::n_quaternary(d)).map(|_| f.random(rng, 0)).collect())
        };
        let c = rand_form(3, &mut rng);
        let x3 = Form::variable(&f, 4, 3);
        let g1 = c.scale(&3).add(&x3.mul(&rand_form(2, &mut rng)));
        let g2 = c.scale(&5).add(&x3.mul(&rand_form(2, &mut rng)));
        let v = nonic_irreducibility(&g1, &g2, IrreducibilityOptions::default(), &mut rng);
        assert_eq!(v.verdict, Irreducibility::Reducible, "{v:?}");
        assert!(v.trials.iter().filter(|t| t.valid).all(|t| t.ruppert_dimension == Some(2)));
    }

    #[test]
    fn small_characteristic_is_refused() {
        let f = PrimeField::new(151).unwrap();
        let g1 = Form::monomial(&f, 4, &[3, 0, 0, 0]);
        let g2 = Form::monomial(&f, 4, &[0, 3, 0, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let v = nonic_irreducibility(&g1, &g2, IrreducibilityOptions::default(), &mut rng);
        assert_eq!(v.verdict, Irreducibility::Inconclusive);
        assert_eq!(v.prime, None);
    }
}
