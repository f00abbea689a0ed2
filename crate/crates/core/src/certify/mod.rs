//! Deciding whether a decomposition `Φ = Σ a_i v_6(P_i)` is minimal and
//! unique.

pub mod certificate;
pub mod gamma;
pub mod search;
pub mod verify;

pub use certificate::{Certificate, CheckEntry, Status, Verdict, WitnessRecord};
pub use gamma::{
    candidate_check, candidate_check_by_colon, gamma_eval, gamma_of_quartic, kappa, CandidateOutcome, ColonCheck,
    Degeneracy, GammaPoint, GammaSystem,
};
pub use verify::{verify_witness, WitnessInput, WitnessVerification};
pub use search::{same_linked_quartic, witness_search, PrimeSweep, SearchOptions, SearchReport, Witness};

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    base_locus_curve_test, nonic_irreducibility, pencil_check_image, working_prime, BaseLocusOptions, BaseLocusTag,
    Irreducibility, IrreducibilityOptions,
};
use crate::linalg::{DenseMatrix, Field};
use crate::pointconfig::{is_general_position, kruskal_rank_v2, PointConfiguration};
use crate::poly::{n_quaternary, Form};

pub const MAX_LENGTH: usize = 18;

/// A sextic given by its dual vector together with a decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance<F: Field> {
    pub phi: Vec<F::Elem>,
    pub points: PointConfiguration<F>,
}

impl<F: Field> Instance<F> {
    pub fn new(phi: Vec<F::Elem>, points: PointConfiguration<F>) -> Result<Self> {
        let f = points.field();
        if phi.len() != n_quaternary(6) {
            return Err(Error::Input(format!("sextic has {} coordinates, expected 84", phi.len())));
        }
        if phi.iter().all(|x| f.is_zero(x)) {
            return Err(Error::Input("the sextic is zero".into()));
        }
        if points.is_empty() || points.len() > MAX_LENGTH {
            return Err(Error::Input(format!("decomposition length {} is outside 1..=18", points.len())));
        }
        Ok(Instance { phi, points })
    }

    pub fn field(&self) -> &F {
        self.points.field()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `Σ a_i v_6(P_i)`.
    pub fn from_coefficients(points: PointConfiguration<F>, coeffs: &[F::Elem]) -> Result<Self> {
        let f = points.field().clone();
        let m = points.evaluation_matrix(6);
        let mut phi = vec![f.zero(); n_quaternary(6)];
        for (row, a) in m.rows().zip(coeffs) {
            for (x, v) in phi.iter_mut().zip(row) {
                f.mul_add_assign(x, a, v);
            }
        }
        Self::new(phi, points)
    }
}

/// Solves `Φ = Σ a_i v_6(P_i)`; `None` when `Φ` is outside the span.
pub fn decompose_coefficients<F: Field>(phi: &[F::Elem], a: &PointConfiguration<F>) -> Option<Vec<F::Elem>> {
    let m: DenseMatrix<F> = a.evaluation_matrix(6).transpose();
    m.solve(phi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NonRedundancy<F: Field> {
    pub evaluation_rank: usize,
    pub coefficients: Option<Vec<F::Elem>>,
    pub nonredundant: bool,
}

/// Full rank of `v_6(A)` and all coefficients nonzero; together these say
/// that no proper subset of `A` spans `Φ`.
pub fn check_nonredundant<F: Field>(phi: &[F::Elem], a: &PointConfiguration<F>) -> NonRedundancy<F> {
    let f = a.field();
    let evaluation_rank = a.evaluation_matrix(6).rank();
    let coefficients = decompose_coefficients(phi, a);
    let nonredundant = evaluation_rank == a.len()
        && coefficients.as_ref().is_some_and(|c| c.iter().all(|x| !f.is_zero(x)));
    NonRedundancy { evaluation_rank, coefficients, nonredundant }
}

#[derive(Clone, Debug)]
pub struct CertifyConfig {
    pub seed: u64,
    pub primes: Vec<u64>,
    pub planes: usize,
    pub escalate: bool,
    pub centers: usize,
    pub max_candidates: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { seed: 0, primes: vec![2, 3], planes: 8, escalate: true, centers: 3, max_candidates: 50_000_000 }
    }
}

/// Independent, reproducible random streams for the stages of a run.
pub fn stage_rng(seed: u64, stage: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stage);
    rng
}

const STAGE_PLANES: u64 = 1;
const STAGE_SUBSETS: u64 = 2;
const STAGE_NONIC: u64 = 3;
pub(crate) const STAGE_PRIMES: u64 = 4;

struct Run {
    checks: Vec<CheckEntry>,
}

impl Run {
    fn log(&mut self, e: CheckEntry) {
        self.checks.push(e);
    }
}

pub fn certify<F: Field>(inst: &Instance<F>, cfg: &CertifyConfig) -> Result<Certificate> {
    let a = &inst.points;
    let r = a.len();
    let mut run = Run { checks: Vec::new() };
    let mut parameters = BTreeMap::new();
    parameters.insert("primes".to_string(), serde_json::to_value(&cfg.primes).unwrap());
    parameters.insert("planes".to_string(), serde_json::to_value(cfg.planes).unwrap());
    parameters.insert("escalate".to_string(), serde_json::to_value(cfg.escalate).unwrap());
    parameters.insert("centers".to_string(), serde_json::to_value(cfg.centers).unwrap());
    parameters.insert("max_candidates".to_string(), serde_json::to_value(cfg.max_candidates).unwrap());
    let mut cert = Certificate {
        format: Certificate::FORMAT.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        field: inst.field().descriptor().to_string(),
        scope: crate::generators::scope_of(inst.field()).into(),
        length: r,
        status: Status::Undecided,
        reason: None,
        rank_certified: None,
        seed: cfg.seed,
        parameters,
        checks: Vec::new(),
        witness: None,
        search: None,
    };
    let finish = |mut cert: Certificate, run: Run, status: Status, reason: Option<String>| {
        cert.status = status;
        cert.reason = reason;
        cert.checks = run.checks;
        cert
    };

    let nr = check_nonredundant(&inst.phi, a);
    let f = inst.field();
    run.log(
        CheckEntry::pass_if("non_redundant", nr.nonredundant)
            .with("evaluation_rank_degree6", nr.evaluation_rank)
            .with("in_span", nr.coefficients.is_some())
            .with("zero_coefficients", nr.coefficients.as_ref().map(|c| c.iter().filter(|x| f.is_zero(x)).count())),
    );
    let Some(coeffs) = nr.coefficients.clone().filter(|_| nr.nonredundant) else {
        return Ok(finish(cert, run, Status::Undecided, Some("redundant input".into())));
    };

    // Minimality: a second decomposition B with ℓ(B) < r would force
    // h_Z(3) ≥ h_A(3) = r and violate the Cayley–Bacharach count.
    let h3 = a.hilbert_function(3);
    let minimal = h3 == r;
    run.log(CheckEntry::pass_if("minimality", minimal).with("h_A(3)", h3).with("length", r));
    if minimal {
        cert.rank_certified = Some(r);
    }

    if r == 1 {
        run.log(CheckEntry::new("single_power", Verdict::Pass));
        return Ok(finish(cert, run, Status::Identifiable, None));
    }
    if r <= 14 {
        let u = kruskal_rank_v2(a);
        let target = r.min(10);
        let ok = u == target && 2 * r + 2 <= 3 * u;
        run.log(CheckEntry::pass_if("kruskal", ok).with("kruskal_rank_v2", u).with("required", target).with("bound", (3 * u).saturating_sub(2) / 2));
        return Ok(if ok {
            finish(cert, run, Status::Identifiable, None)
        } else {
            finish(cert, run, Status::Undecided, Some("second Kruskal rank is too small".into()))
        });
    }

    let gp = is_general_position(a);
    run.log(
        CheckEntry::pass_if("general_position", gp.general)
            .with("stages", &gp.stages)
            .with("total_checks", gp.total_checks())
            .with("failure", &gp.failure)
            .with("filter_prime", gp.filter_prime),
    );
    if !gp.general {
        return Ok(finish(cert, run, Status::Undecided, Some("not in general position".into())));
    }

    let opts = BaseLocusOptions { planes: cfg.planes, escalate: cfg.escalate };
    if r <= 17 {
        let cubics = cubic_forms(a);
        let mut rng = stage_rng(cfg.seed, STAGE_PLANES);
        let v = base_locus_curve_test(&cubics, Some(a), opts, &mut rng);
        run.log(
            CheckEntry::pass_if("base_locus", v.tag == BaseLocusTag::CertifiedFinite)
                .with("cubics", cubics.len())
                .with("tag", v.tag)
                .with("trials", &v.trials)
                .with("rejected_planes", v.rejected_planes),
        );
        return Ok(match v.tag {
            BaseLocusTag::CertifiedFinite => finish(cert, run, Status::Identifiable, None),
            tag => finish(cert, run, Status::Undecided, Some(format!("base locus of the cubics: {tag:?}"))),
        });
    }

    // r = 18
    let mut rng = stage_rng(cfg.seed, STAGE_SUBSETS);
    let mut subset_tags = Vec::new();
    let mut all_finite = true;
    for skip in 0..r {
        let sub = a.without(skip);
        let cubics = cubic_forms(&sub);
        let v = base_locus_curve_test(&cubics, Some(&sub), opts, &mut rng);
        let finite = v.tag == BaseLocusTag::CertifiedFinite;
        all_finite &= finite;
        subset_tags.push(BTreeMap::from([
            ("omitted", serde_json::to_value(skip).unwrap()),
            ("tag", serde_json::to_value(v.tag).unwrap()),
            ("certificate", serde_json::to_value(v.certificate()).unwrap()),
        ]));
        if !finite {
            break;
        }
    }
    run.log(CheckEntry::pass_if("subsets_of_17", all_finite).with("subsets", subset_tags));
    if !all_finite {
        return Ok(finish(cert, run, Status::Undecided, Some("a 17-point subset has a curve in its base locus".into())));
    }

    let pencil = cubic_forms(a);
    if pencil.len() != 2 {
        return Err(Error::Invariant(format!("{} cubics through 18 points in general position", pencil.len())));
    }
    let mut rng = stage_rng(cfg.seed, STAGE_NONIC);
    let p = working_prime(f, &mut rng);
    let regular = pencil_check_image(&pencil[0], &pencil[1], p)?;
    run.log(CheckEntry::pass_if("pencil_regular_sequence", regular).with("prime", p));
    if !regular {
        return Ok(finish(cert, run, Status::Undecided, Some("the pencil of cubics has a common component".into())));
    }
    let irr = nonic_irreducibility(&pencil[0], &pencil[1], IrreducibilityOptions { centers: cfg.centers, ..Default::default() }, &mut rng);
    run.log(
        CheckEntry::pass_if("nonic_irreducible", irr.verdict == Irreducibility::Irreducible)
            .with("verdict", irr.verdict)
            .with("prime", irr.prime)
            .with("trials", &irr.trials),
    );
    if irr.verdict != Irreducibility::Irreducible {
        return Ok(finish(cert, run, Status::Undecided, Some(format!("base curve of the pencil: {:?}", irr.verdict))));
    }

    let sys = GammaSystem::new(a)?;
    let mut rng = stage_rng(cfg.seed, STAGE_PRIMES);
    let check_prime = working_prime(f, &mut rng);
    let colon_prime = working_prime(f, &mut rng);
    let sopts = SearchOptions { primes: cfg.primes.clone(), max_candidates: cfg.max_candidates, check_prime, ..Default::default() };
    let (found, report) = witness_search(&sys, &coeffs, &sopts);
    run.log(
        CheckEntry::new("witness_search", Verdict::Info)
            .with("found", found.is_some())
            .with("check_prime", check_prime)
            .with("exact_kernel_dim", report.exact_kernel_dim),
    );
    cert.search = Some(report);
    let Some(w) = found else {
        return Ok(finish(cert, run, Status::Undecided, Some("no witness found".into())));
    };
    let g = sys.lift(&w.coords);
    let cand = candidate_check(&sys, &coeffs, &g, check_prime)?;
    run.log(CheckEntry::pass_if("witness_candidate_check", cand.holds).with("scale", cand.scale.as_ref().map(|s| f.format(s))));
    let colon = candidate_check_by_colon(&inst.phi, a, &sys.g1, &sys.g2, &g, colon_prime)?;
    let colon_ok = verify::residual_ok(&colon);
    let mut entry = CheckEntry::pass_if("witness_residual", colon_ok).with("prime", colon_prime);
    if let Some(c) = &colon {
        entry = entry
            .with("residual_dims_3_to_6", &c.residual_dims)
            .with("cubic_generators", c.cubic_generators)
            .with("quartic_generators", c.quartic_generators)
            .with("sum_dim_degree6", c.sum_dim_degree6)
            .with("orthogonal", c.orthogonal);
    }
    run.log(entry);
    cert.witness = Some(WitnessRecord {
        w_coordinates: w.coords.iter().map(|x| f.format(x)).collect(),
        quartic: g.coeffs().iter().map(|x| f.format(x)).collect(),
        scale: f.format(&w.scale),
        found_by: w.found_by.clone(),
    });
    if !(cand.holds && colon_ok) {
        return Ok(finish(cert, run, Status::Undecided, Some("witness failed the residual cross-check".into())));
    }
    Ok(finish(cert, run, Status::NotIdentifiable, None))
}

/// Basis of the cubics through `a`.
pub fn cubic_forms<F: Field>(a: &PointConfiguration<F>) -> Vec<Form<F>> {
    a.ideal_piece(3).basis().rows().map(|r| Form::from_coeffs(a.field(), 4, 3, r.to_vec())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rationals;
    use crate::pointconfig::tests::random_points;
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        Rationals.from_i64(v)
    }

    #[test]
    fn coefficients_round_trip() {
        let a = random_points(18, 70);
        let coeffs: Vec<BigRational> = (1..=18).map(|i| q(i * if i % 2 == 0 { -1 } else { 1 })).collect();
        let inst = Instance::from_coefficients(a.clone(), &coeffs).unwrap();
        assert_eq!(decompose_coefficients(&inst.phi, &a), Some(coeffs));
        let single = Instance::from_coefficients(a.subset(&[0]), &[q(3)]).unwrap();
        assert_eq!(decompose_coefficients(&single.phi, &a.subset(&[0])), Some(vec![q(3)]));
        assert_eq!(decompose_coefficients(&single.phi, &a.subset(&[1, 2])), None);
    }

    #[test]
    fn planted_zero_coefficient_is_redundant() {
        let a = random_points(6, 71);
        let inst = Instance::from_coefficients(a.clone(), &[q(1), q(2), q(0), q(4), q(5), q(6)]).unwrap();
        let nr = check_nonredundant(&inst.phi, &a);
        assert!(!nr.nonredundant);
        assert_eq!(nr.evaluation_rank, 6);
        let cert = certify(&inst, &CertifyConfig::default()).unwrap();
        assert_eq!(cert.status, Status::Undecided);
        assert_eq!(cert.reason.as_deref(), Some("redundant input"));
    }

    #[test]
    fn small_generic_instances_are_identifiable() {
        for (r, seed) in [(1, 1), (2, 2), (9, 3), (14, 4)] {
            let a = random_points(r, seed + 100);
            let coeffs: Vec<BigRational> = (0..r as i64).map(|i| q(i + 1)).collect();
            let inst = Instance::from_coefficients(a, &coeffs).unwrap();
            let cert = certify(&inst, &CertifyConfig::default()).unwrap();
            assert_eq!(cert.status, Status::Identifiable, "r = {r}");
            assert_eq!(cert.rank_certified, Some(r));
        }
    }

    #[test]
    fn fifteen_generic_points_are_identifiable() {
        let a = random_points(15, 120);
        let coeffs: Vec<BigRational> = (0..15).map(|i| q(2 * i + 1)).collect();
        let inst = Instance::from_coefficients(a, &coeffs).unwrap();
        let cert = certify(&inst, &CertifyConfig::default()).unwrap();
        assert_eq!(cert.status, Status::Identifiable);
        assert_eq!(cert.check("base_locus").unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn instance_validation() {
        let a = random_points(3, 5);
        assert!(Instance::new(vec![q(0); 84], a.clone()).is_err());
        assert!(Instance::new(vec![q(1); 83], a).is_err());
    }
}
