//! Independent check of a claimed second decomposition.

use serde::Serialize;

use super::gamma::{candidate_check, candidate_check_by_colon, ColonCheck, GammaSystem};
use super::{check_nonredundant, stage_rng, Instance, STAGE_PRIMES};
use crate::error::{Error, Result};
use crate::geometry::working_prime;
use crate::linalg::Field;
use crate::poly::{n_quaternary, Form};

/// A candidate second decomposition, given either by its quartic or by its
/// coordinates in the basis of quartics through `A` modulo the pencil.
#[derive(Clone, Debug, PartialEq)]
pub enum WitnessInput<E> {
    Quartic(Vec<E>),
    WCoordinates(Vec<E>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessVerification {
    /// Every check below passed.
    pub valid: bool,
    pub quartic_through_points: bool,
    /// `G1, G2, G` is a complete intersection.
    pub complete_intersection: bool,
    /// `a_i κ_i(G)` is constant and `V(G1, G2, G)` is reduced at `A`.
    pub euler_jacobi: bool,
    pub scale: Option<String>,
    pub degeneracy: Option<String>,
    pub residual: Option<ColonCheck>,
    pub residual_ok: bool,
    pub check_prime: u64,
}

pub(crate) fn residual_ok(c: &Option<ColonCheck>) -> bool {
    c.as_ref().is_some_and(|c| {
        c.orthogonal && c.residual_dims == [2, 17, 38, 66] && c.cubic_generators == 2 && c.quartic_generators == 9 && c.sum_dim_degree6 == 83
    })
}

/// Checks that the witness gives a second decomposition of `Φ` of length 18
/// disjoint from `A`, by the Euler–Jacobi test and by the residual ideal.
pub fn verify_witness<F: Field>(inst: &Instance<F>, w: &WitnessInput<F::Elem>, seed: u64) -> Result<WitnessVerification> {
    let a = &inst.points;
    if a.len() != 18 {
        return Err(Error::Input(format!("witnesses are defined for length 18, the instance has length {}", a.len())));
    }
    let f = inst.field();
    let nr = check_nonredundant(&inst.phi, a);
    let Some(coeffs) = nr.coefficients.filter(|_| nr.nonredundant) else {
        return Err(Error::Input("the sextic is not a non-redundant combination of the points".into()));
    };
    let sys = GammaSystem::new(a)?;
    let g = match w {
        WitnessInput::Quartic(c) => {
            if c.len() != n_quaternary(4) {
                return Err(Error::Input(format!("a quartic has {} coefficients, got {}", n_quaternary(4), c.len())));
            }
            Form::from_coeffs(f, 4, 4, c.clone())
        }
        WitnessInput::WCoordinates(c) => {
            if c.len() != 9 {
                return Err(Error::Input(format!("expected 9 W coordinates, got {}", c.len())));
            }
            sys.lift(c)
        }
    };
    let through = a.points().iter().all(|p| f.is_zero(&g.eval(p.coords())));
    let ci = crate::geometry::ci_validate(&sys.g1, &sys.g2, &g)?.is_ok();
    let mut rng = stage_rng(seed, STAGE_PRIMES);
    let check_prime = working_prime(f, &mut rng);
    let colon_prime = working_prime(f, &mut rng);
    let cand = candidate_check(&sys, &coeffs, &g, check_prime)?;
    let residual = if through { candidate_check_by_colon(&inst.phi, a, &sys.g1, &sys.g2, &g, colon_prime)? } else { None };
    let res_ok = residual_ok(&residual);
    Ok(WitnessVerification {
        valid: through && ci && cand.holds && res_ok,
        quartic_through_points: through,
        complete_intersection: ci,
        euler_jacobi: cand.holds,
        scale: cand.scale.as_ref().map(|s| f.format(s)),
        degeneracy: cand.degenerate.map(|d| format!("{d:?}")),
        residual,
        residual_ok: res_ok,
        check_prime,
    })
}
