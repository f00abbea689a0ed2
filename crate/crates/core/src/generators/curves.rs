//! Points on a rational quintic curve, and on an elliptic quintic obtained by
//! linkage from a rational quartic.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{diag, provenance, random_nonzero, GeneratorOutput};
use crate::certify::{check_nonredundant, cubic_forms, stage_rng, Instance, Status};
use crate::error::{Error, Result};
use crate::geometry::{base_locus_curve_test, pencil_regular_sequence_check, BaseLocusOptions, BaseLocusTag};
use crate::linalg::modular::is_prime_u64;
use crate::linalg::{DenseMatrix, Field, PrimeField, Subspace};
use crate::pointconfig::{is_general_position, PointConfiguration};
use crate::poly::{multiples_piece, n_quaternary, pullback_by_product, Form};

const ATTEMPTS: u64 = 16;

/// A binary form `Σ c_i s^(d−i) t^i`.
#[derive(Clone, Debug)]
struct BinaryForm<F: Field> {
    coeffs: Vec<F::Elem>,
}

impl<F: Field> BinaryForm<F> {
    fn random(field: &F, rng: &mut ChaCha8Rng, degree: usize, height: i64) -> Self {
        BinaryForm { coeffs: (0..=degree).map(|_| field.random(rng, height)).collect() }
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn eval(&self, field: &F, s: &F::Elem, t: &F::Elem) -> F::Elem {
        let mut acc = field.zero();
        let mut tpow = field.one();
        let d = self.degree();
        let mut spow = vec![field.one(); d + 1];
        for k in 1..=d {
            spow[k] = field.mul(&spow[k - 1], s);
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = field.add(&acc, &field.mul(c, &field.mul(&spow[d - i], &tpow)));
            tpow = field.mul(&tpow, t);
        }
        acc
    }
}

/// The Sylvester matrix of two binary forms is invertible iff they have no
/// common root.
fn sylvester_rank<F: Field>(field: &F, f: &BinaryForm<F>, g: &BinaryForm<F>) -> (usize, usize) {
    let (m, n) = (f.degree(), g.degree());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (form, shifts) in [(f, n), (g, m)] {
        for k in 0..shifts {
            let mut r = vec![field.zero(); size];
            for (i, c) in form.coeffs.iter().enumerate() {
                r[k + i] = c.clone();
            }
            rows.push(r);
        }
    }
    (DenseMatrix::from_rows(field, size, rows).rank(), size)
}

fn image<F: Field>(field: &F, map: &[BinaryForm<F>], s: &F::Elem, t: &F::Elem) -> [F::Elem; 4] {
    [0, 1, 2, 3].map(|i| map[i].eval(field, s, t))
}

/// Parameters `(s : t)` with `|s| ≤ 6`, `1 ≤ t ≤ 3` and `gcd(s, t) = 1`:
/// 27 distinct points of the projective line.
fn small_parameters() -> Vec<(i64, i64)> {
    let gcd = |a: i64, b: i64| num_integer::Integer::gcd(&a, &b);
    (1..=3).flat_map(|t| (-6..=6).filter(move |&s| gcd(s, t) == 1).map(move |s| (s, t))).collect()
}

fn map_is_nondegenerate<F: Field>(field: &F, map: &[BinaryForm<F>]) -> bool {
    let d = map[0].degree();
    let independent = Subspace::from_rows(field, d + 1, map.iter().map(|f| f.coeffs.clone()).collect()).dim() == 4;
    let (rank, size) = sylvester_rank(field, &map[0], &map[1]);
    independent && rank == size
}

/// `n` points on a seeded rational quintic curve. The cubics through them
/// are the four cubics of the curve, and the Terracini rank drops.
pub fn gen_rational_quintic_config<F: Field>(n: usize, seed: u64, field: &F) -> Result<GeneratorOutput<F>> {
    let params = small_parameters();
    if n > params.len() || n < 1 {
        return Err(Error::Input(format!("{n} points requested, between 1 and {} supported", params.len())));
    }
    let mut rng = stage_rng(seed, 0);
    for attempt in 1..=ATTEMPTS {
        let map: Vec<BinaryForm<F>> = (0..4).map(|_| BinaryForm::random(field, &mut rng, 5, 3)).collect();
        if !map_is_nondegenerate(field, &map) {
            continue;
        }
        let coords: Vec<[F::Elem; 4]> =
            params.iter().map(|&(s, t)| image(field, &map, &field.from_i64(s), &field.from_i64(t))).collect();
        let Ok(curve) = PointConfiguration::from_coords(field, coords) else { continue };
        let mut order: Vec<usize> = (0..params.len()).collect();
        order.shuffle(&mut rng);
        order.truncate(n);
        order.sort_unstable();
        let a = curve.subset(&order);
        let coeffs: Vec<F::Elem> = (0..n).map(|_| random_nonzero(field, &mut rng, 9)).collect();
        let instance = Instance::from_coefficients(a.clone(), &coeffs)?;
        if !check_nonredundant(&instance.phi, &a).nonredundant {
            continue;
        }

        // 27 > 15 points of the curve determine its cubics.
        let curve_cubics = curve.ideal_piece(3);
        let cubics_a = a.ideal_piece(3);
        let expected_dim = 20usize.saturating_sub(n).max(4);
        if curve_cubics.dim() != 4 || cubics_a.dim() != expected_dim || !cubics_a.contains_subspace(&curve_cubics) {
            continue;
        }
        let mut d = BTreeMap::new();
        diag(&mut d, "curve_cubics", curve_cubics.dim());
        diag(&mut d, "cubics_through_points", cubics_a.dim());
        diag(&mut d, "cubics_equal_curve_cubics", cubics_a == curve_cubics);
        let terracini = a.terracini_rank(6);
        diag(&mut d, "terracini_rank", terracini);
        diag(&mut d, "terracini_expected", 4 * n);
        let mut brng = stage_rng(seed, 1);
        let bl = base_locus_curve_test(&cubic_forms(&a), Some(&a), BaseLocusOptions::default(), &mut brng);
        if n >= 16 && bl.tag == BaseLocusTag::CertifiedFinite {
            return Err(Error::Invariant("a plane section of a quintic curve came out empty".into()));
        }
        diag(&mut d, "base_locus", bl.tag);
        diag(&mut d, "general_position", is_general_position(&a).general);
        diag(&mut d, "parameters", order.iter().map(|&i| format!("{}:{}", params[i].0, params[i].1)).collect::<Vec<_>>());
        return Ok(GeneratorOutput {
            instance,
            coefficients: coeffs,
            provenance: provenance("rat5", seed, field, attempt),
            expected_status: (n >= 16).then_some(Status::Undecided),
            witness: None,
            diagnostics: d,
        });
    }
    Err(Error::Input(format!("rational quintic: resampling budget exhausted for seed {seed}")))
}

/// An elliptic quintic over `F_p` as the residual of a rational quartic in
/// the complete intersection of two cubics, with its rational points.
struct EllipticQuintic {
    field: PrimeField,
    cubics: Subspace<PrimeField>,
    points: PointConfiguration<PrimeField>,
    diagnostics: BTreeMap<String, serde_json::Value>,
    attempts: u64,
}

fn prime_field(p: u64) -> Result<PrimeField> {
    if !(101..=499).contains(&p) || !is_prime_u64(p) {
        return Err(Error::Input(format!("p = {p}: a prime between 101 and 499 is required")));
    }
    Ok(PrimeField::new(p)?)
}

/// All points of `P^3(F_p)` with the first nonzero coordinate 1 where every
/// form vanishes.
fn common_zeros(f: &PrimeField, forms: &[Form<PrimeField>]) -> Vec<[u64; 4]> {
    let p = f.modulus();
    (0..4usize)
        .flat_map(|lead| {
            let free = 3 - lead;
            (0..p.pow(free as u32))
                .into_par_iter()
                .filter_map(move |mut idx| {
                    let mut x = [0u64; 4];
                    x[lead] = 1;
                    for k in (lead + 1..4).rev() {
                        x[k] = idx % p;
                        idx /= p;
                    }
                    forms.iter().all(|g| g.eval(&x) == 0).then_some(x)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `{ f of degree d : f g ∈ (gens) for every g in by }`.
fn colon_piece(f: &PrimeField, gens: &[Form<PrimeField>], by: &[Form<PrimeField>], d: usize) -> Subspace<PrimeField> {
    let mut conditions = DenseMatrix::zeros(f, 0, n_quaternary(d));
    for g in by {
        let dual = multiples_piece(f, gens, d + g.degree()).annihilator();
        conditions = conditions.vstack(&pullback_by_product(dual.basis(), g, d));
    }
    Subspace::kernel_of(&conditions)
}

fn elliptic_quintic(p: u64, seed: u64) -> Result<EllipticQuintic> {
    let f = prime_field(p)?;
    let mut rng = stage_rng(seed, 0);
    for attempt in 1..=ATTEMPTS {
        let map: Vec<BinaryForm<PrimeField>> = (0..4).map(|_| BinaryForm::random(&f, &mut rng, 4, 0)).collect();
        if !map_is_nondegenerate(&f, &map) {
            continue;
        }
        let mut seen = HashSet::new();
        let mut quartic_pts = Vec::new();
        for (s, t) in (0..p).map(|s| (s, 1)).chain([(1, 0)]) {
            let Ok(pt) = crate::pointconfig::ProjPoint::new(&f, image(&f, &map, &s, &t)) else { continue };
            if seen.insert(*pt.coords()) {
                quartic_pts.push(*pt.coords());
            }
        }
        let quartic = PointConfiguration::from_coords(&f, quartic_pts)?;
        let (q2, q3) = (quartic.ideal_piece(2), quartic.ideal_piece(3));
        if q2.dim() != 1 || q3.dim() != 7 {
            continue;
        }
        let combo = |rng: &mut ChaCha8Rng| {
            let c: Vec<u64> = (0..7).map(|_| f.random(rng, 0)).collect();
            let mut v = vec![0u64; 20];
            for (ci, row) in c.iter().zip(q3.basis().rows()) {
                for (x, y) in v.iter_mut().zip(row) {
                    f.mul_add_assign(x, ci, y);
                }
            }
            Form::from_coeffs(&f, 4, 3, v)
        };
        let (h1, h2) = (combo(&mut rng), combo(&mut rng));
        if !matches!(pencil_regular_sequence_check(&h1, &h2), Ok(true)) {
            continue;
        }
        let pts: Vec<[u64; 4]> =
            common_zeros(&f, &[h1.clone(), h2.clone()]).into_iter().filter(|x| !seen.contains(x)).collect();
        if pts.len() < 31 {
            continue;
        }
        let curve = PointConfiguration::from_coords(&f, pts)?;
        let hilbert: Vec<usize> = (2..=6).map(|d| curve.hilbert_function(d)).collect();
        let cubics = curve.ideal_piece(3);
        let gens: Vec<Form<PrimeField>> = q2
            .basis()
            .rows()
            .map(|r| Form::from_coeffs(&f, 4, 2, r.to_vec()))
            .chain(q3.basis().rows().map(|r| Form::from_coeffs(&f, 4, 3, r.to_vec())))
            .collect();
        let residual3 = colon_piece(&f, &[h1, h2], &gens, 3);
        let hilbert_ok = hilbert == [10, 15, 20, 25, 30];
        if !hilbert_ok || cubics.dim() != 5 || residual3 != cubics {
            continue;
        }
        let mut d = BTreeMap::new();
        diag(&mut d, "quartic_curve_points", quartic.len());
        diag(&mut d, "quintic_curve_points", curve.len());
        diag(&mut d, "quintic_quadrics", 10 - hilbert[0]);
        diag(&mut d, "quintic_cubics", cubics.dim());
        diag(&mut d, "quintic_hilbert_2_to_6", &hilbert);
        diag(&mut d, "residual_cubics_match_points", true);
        return Ok(EllipticQuintic { field: f, cubics, points: curve, diagnostics: d, attempts: attempt });
    }
    Err(Error::Input(format!("elliptic quintic over F_{p}: resampling budget exhausted for seed {seed}")))
}

/// Picks `n` of the curve points, preferring subsets in general position.
fn sample_points(c: &EllipticQuintic, n: usize, rng: &mut ChaCha8Rng) -> Result<(PointConfiguration<PrimeField>, bool)> {
    if c.points.len() < n {
        return Err(Error::Input(format!("only {} rational points on the curve", c.points.len())));
    }
    let mut last = None;
    for _ in 0..32 {
        let mut idx: Vec<usize> = (0..c.points.len()).collect();
        idx.shuffle(rng);
        idx.truncate(n);
        idx.sort_unstable();
        let a = c.points.subset(&idx);
        if is_general_position(&a).general {
            return Ok((a, true));
        }
        last = Some(a);
    }
    Ok((last.expect("at least one sample"), false))
}

fn elliptic_output(
    c: &EllipticQuintic,
    n: usize,
    seed: u64,
) -> Result<(GeneratorOutput<PrimeField>, PointConfiguration<PrimeField>)> {
    let f = c.field;
    let mut rng = stage_rng(seed, 2);
    let (a, general) = sample_points(c, n, &mut rng)?;
    let coeffs: Vec<u64> = (0..n).map(|_| random_nonzero(&f, &mut rng, 0)).collect();
    let instance = Instance::from_coefficients(a.clone(), &coeffs)?;
    if !check_nonredundant(&instance.phi, &a).nonredundant {
        return Err(Error::Input("sampled points are redundant".into()));
    }
    let cubics_a = a.ideal_piece(3);
    let mut d = c.diagnostics.clone();
    diag(&mut d, "cubics_through_points", cubics_a.dim());
    diag(&mut d, "cubics_equal_curve_cubics", cubics_a == c.cubics);
    diag(&mut d, "general_position", general);
    let out = GeneratorOutput {
        instance,
        coefficients: coeffs,
        provenance: provenance("ell5", seed, &f, c.attempts),
        expected_status: Some(Status::Undecided),
        witness: None,
        diagnostics: d,
    };
    Ok((out, a))
}

/// `n` rational points of an elliptic quintic over `F_p`, `101 ≤ p ≤ 499`.
pub fn gen_elliptic_quintic_config(n: usize, p: u64, seed: u64) -> Result<GeneratorOutput<PrimeField>> {
    let c = elliptic_quintic(p, seed)?;
    let (mut out, a) = elliptic_output(&c, n, seed)?;
    if n >= 15 && a.ideal_piece(3) != c.cubics {
        return Err(Error::Invariant("cubics through the sample differ from the curve cubics".into()));
    }
    let mut brng = stage_rng(seed, 1);
    let bl = base_locus_curve_test(&cubic_forms(&a), Some(&a), BaseLocusOptions::default(), &mut brng);
    diag(&mut out.diagnostics, "base_locus", bl.tag);
    Ok(out)
}

/// Fifteen points of an elliptic quintic plus `extra` points off the curve
/// with fresh coefficients.
pub fn gen_nodisj17(seed: u64, p: u64, extra: usize) -> Result<GeneratorOutput<PrimeField>> {
    if !(1..=2).contains(&extra) {
        return Err(Error::Input(format!("{extra} added points, expected 1 or 2")));
    }
    let c = elliptic_quintic(p, seed)?;
    let (core, core_pts) = elliptic_output(&c, 15, seed)?;
    let f = c.field;
    let mut rng = stage_rng(seed, 3);
    let mut brng = stage_rng(seed, 1);
    let core_bl = base_locus_curve_test(&cubic_forms(&core_pts), Some(&core_pts), BaseLocusOptions::default(), &mut brng);
    for attempt in 1..=ATTEMPTS * 4 {
        let added: Vec<[u64; 4]> = (0..extra).map(|_| [(); 4].map(|_| f.random(&mut rng, 0))).collect();
        let off_curve = added.iter().all(|x| c.cubics.basis().rows().any(|r| Form::from_coeffs(&f, 4, 3, r.to_vec()).eval(x) != 0));
        if !off_curve {
            continue;
        }
        let Ok(more) = PointConfiguration::from_coords(&f, added) else { continue };
        let Ok(a) = core_pts.union(&more) else { continue };
        let mut coeffs = core.coefficients.clone();
        coeffs.extend((0..extra).map(|_| random_nonzero(&f, &mut rng, 0)));
        let instance = Instance::from_coefficients(a.clone(), &coeffs)?;
        if !check_nonredundant(&instance.phi, &a).nonredundant {
            continue;
        }
        let mut d = core.diagnostics.clone();
        diag(&mut d, "core_base_locus", core_bl.tag);
        diag(&mut d, "added_points", extra);
        diag(&mut d, "added_points_off_curve", true);
        diag(&mut d, "general_position", is_general_position(&a).general);
        let mut prov = provenance("nodisj17", seed, &f, c.attempts);
        prov.attempts += attempt - 1;
        return Ok(GeneratorOutput {
            instance,
            coefficients: coeffs,
            provenance: prov,
            expected_status: Some(Status::Undecided),
            witness: None,
            diagnostics: d,
        });
    }
    Err(Error::Input(format!("nodisj17: resampling budget exhausted for seed {seed}")))
}
