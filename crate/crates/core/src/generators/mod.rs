//! Seeded constructions of instances with known ground truth. Every output
//! is re-checked against the properties it claims before it is returned.

mod curves;

pub use curves::{gen_elliptic_quintic_config, gen_nodisj17, gen_rational_quintic_config};

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::certify::{check_nonredundant, gamma_of_quartic, stage_rng, GammaSystem, Instance, SearchOptions, Status};
use crate::error::{Error, Result};
use crate::geometry::{ci_validate, h_ci};
use crate::linalg::{Field, Subspace};
use crate::pointconfig::{cayley_bacharach_check, is_general_position, HfProfile, PointConfiguration};
use crate::linalg::matrix::FILTER_PRIMES;
use crate::poly::Form;

/// Height of random rational coordinates.
pub const POINT_HEIGHT: i64 = 30;
const COEFF_HEIGHT: i64 = 9;
const ATTEMPTS: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub construction: String,
    pub seed: u64,
    pub field: String,
    /// "characteristic zero" or "char-p analogue".
    pub scope: String,
    pub attempts: u64,
}

/// The second decomposition a construction plants, at the level of ideals.
#[derive(Clone, Debug, PartialEq)]
pub struct KnownWitness<F: Field> {
    pub w_coordinates: Vec<F::Elem>,
    /// Quartic cutting `Z = A ∪ B` on the curve of the pencil, including the
    /// composed part that was added to it.
    pub quartic: Form<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorOutput<F: Field> {
    pub instance: Instance<F>,
    pub coefficients: Vec<F::Elem>,
    pub provenance: Provenance,
    pub expected_status: Option<Status>,
    pub witness: Option<KnownWitness<F>>,
    pub diagnostics: BTreeMap<String, Value>,
}

/// Results over a prime field are analogues only: the geometry behind the
/// identifiability criteria is over the complex numbers.
pub fn scope_of<F: Field>(field: &F) -> &'static str {
    if field.characteristic() == 0 {
        "characteristic zero"
    } else {
        "char-p analogue"
    }
}

pub(crate) fn provenance<F: Field>(construction: &str, seed: u64, field: &F, attempts: u64) -> Provenance {
    Provenance { construction: construction.into(), seed, field: field.descriptor().to_string(), scope: scope_of(field).into(), attempts }
}

pub(crate) fn diag<T: Serialize>(d: &mut BTreeMap<String, Value>, key: &str, value: T) {
    d.insert(key.into(), serde_json::to_value(value).expect("serializable diagnostic"));
}

fn fail(what: &str, seed: u64) -> Error {
    Error::Input(format!("{what}: resampling budget exhausted for seed {seed}"))
}

pub(crate) fn random_nonzero<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R, height: i64) -> F::Elem {
    loop {
        let x = field.random(rng, height);
        if !field.is_zero(&x) {
            return x;
        }
    }
}

pub(crate) fn random_points<F: Field>(field: &F, rng: &mut ChaCha8Rng, n: usize) -> Option<PointConfiguration<F>> {
    let coords = (0..n).map(|_| [(); 4].map(|_| field.random(rng, POINT_HEIGHT))).collect();
    PointConfiguration::from_coords(field, coords).ok()
}

fn general_points<F: Field>(field: &F, rng: &mut ChaCha8Rng, n: usize) -> Option<(PointConfiguration<F>, u64)> {
    (1..=ATTEMPTS).find_map(|k| random_points(field, rng, n).filter(|a| is_general_position(a).general).map(|a| (a, k)))
}

/// `r` random points in general position with random nonzero coefficients.
pub fn gen_general_instance<F: Field>(r: usize, seed: u64, field: &F) -> Result<GeneratorOutput<F>> {
    if !(1..=18).contains(&r) {
        return Err(Error::Input(format!("length {r} is outside 1..=18")));
    }
    let mut rng = stage_rng(seed, 0);
    for attempt in 1..=ATTEMPTS {
        let Some((a, _)) = general_points(field, &mut rng, r) else { break };
        let coeffs: Vec<F::Elem> = (0..r).map(|_| random_nonzero(field, &mut rng, COEFF_HEIGHT)).collect();
        let instance = Instance::from_coefficients(a, &coeffs)?;
        if !check_nonredundant(&instance.phi, &instance.points).nonredundant {
            continue;
        }
        let mut d = BTreeMap::new();
        let hf = instance.points.hf_profile(7);
        diag(&mut d, "hilbert_function", &hf.h);
        diag(&mut d, "dh", &hf.dh);
        diag(&mut d, "general_position", true);
        return Ok(GeneratorOutput {
            instance,
            coefficients: coeffs,
            provenance: provenance("general", seed, field, attempt),
            expected_status: (r <= 17 && field.characteristic() == 0).then_some(Status::Identifiable),
            witness: None,
            diagnostics: d,
        });
    }
    Err(fail("general instance", seed))
}

/// Eighteen general points, the pencil of cubics through them, and a quartic
/// `G` through them outside the composed part; `Φ` is the sextic shared by
/// the two decompositions `A` and the residual `B` of `A` in the complete
/// intersection.
pub fn gen_example18<F: Field>(seed: u64, field: &F) -> Result<GeneratorOutput<F>> {
    let mut rng = stage_rng(seed, 0);
    for attempt in 1..=ATTEMPTS {
        let Some((a, _)) = general_points(field, &mut rng, 18) else { break };
        let Ok(sys) = GammaSystem::new(&a) else { continue };
        let c: Vec<F::Elem> = (0..9).map(|_| random_nonzero(field, &mut rng, 5)).collect();
        let l1: Vec<F::Elem> = (0..4).map(|_| field.random(&mut rng, 2)).collect();
        let l2: Vec<F::Elem> = (0..4).map(|_| field.random(&mut rng, 2)).collect();
        let composed = Form::linear(field, &l1).mul(&sys.g1).add(&Form::linear(field, &l2).mul(&sys.g2));
        let g = sys.lift(&c).add(&composed);
        let Ok(ci) = ci_validate(&sys.g1, &sys.g2, &g)? else { continue };
        let Ok(gp) = gamma_of_quartic(&sys, &g, SearchOptions::default().check_prime)? else { continue };
        if gp.coefficients.iter().any(|x| field.is_zero(x)) {
            continue;
        }
        let instance = Instance::new(gp.phi.clone(), a.clone())?;
        if !check_nonredundant(&instance.phi, &a).nonredundant {
            continue;
        }

        let mut d = BTreeMap::new();
        let h_z = match field.characteristic() {
            0 => ci.hilbert_function_image(FILTER_PRIMES[0], 7),
            _ => ci.hilbert_function_image(field.characteristic(), 7),
        }
        .ok_or_else(|| Error::Invariant("complete intersection has no modular image".into()))?;
        let expected: Vec<usize> = (0..=7).map(h_ci).collect();
        if h_z != expected {
            return Err(Error::Invariant(format!("validated complete intersection has h_Z = {h_z:?}")));
        }
        let prof = HfProfile::from_values(h_z.clone());
        let cb = cayley_bacharach_check(&prof.dh);
        let symmetric = (0..=7).all(|i| prof.dh[i] == prof.dh[7 - i]);
        let same_cubics = a.ideal_piece(3) == ci.piece(3);
        if !(cb.all_equal() && symmetric && same_cubics) {
            return Err(Error::Invariant("complete intersection signature".into()));
        }
        diag(&mut d, "h_Z", &h_z);
        diag(&mut d, "dh_Z", &prof.dh);
        diag(&mut d, "h1_Z(6)", prof.h1(36, 6));
        diag(&mut d, "dh_symmetric", symmetric);
        diag(&mut d, "cayley_bacharach", &cb);
        diag(&mut d, "cubics_of_A_equal_cubics_of_Z", same_cubics);
        diag(&mut d, "hilbert_function_A", a.hf_profile(4).h);
        return Ok(GeneratorOutput {
            instance,
            coefficients: gp.coefficients,
            provenance: provenance("example18", seed, field, attempt),
            expected_status: Some(Status::NotIdentifiable),
            witness: Some(KnownWitness { w_coordinates: c, quartic: g }),
            diagnostics: d,
        });
    }
    Err(fail("example18", seed))
}

/// Degree-`d` row space `(I_B)_d` of the residual of a generated example.
pub fn constructed_residual_piece<F: Field>(out: &GeneratorOutput<F>, d: usize) -> Result<Option<Subspace<F>>> {
    let Some(w) = &out.witness else { return Ok(None) };
    let a = &out.instance.points;
    let sys = GammaSystem::new(a)?;
    let ci = match ci_validate(&sys.g1, &sys.g2, &w.quartic)? {
        Ok(ci) => ci,
        Err(e) => return Err(Error::Invariant(format!("planted quartic is degenerate: {e:?}"))),
    };
    let res = crate::geometry::residual_pieces(&ci, a)?;
    Ok(Some(res.piece(d).clone()))
}
