//! Search for a quartic that links `A` to a second decomposition of `Φ`.
//!
//! The search runs on the membership system `a_i κ_i(c) = μ` of
//! [`GammaSystem::membership_matrix`]: modular sweeps over `P^8(F_p)`, p-adic
//! lifting of the hits, then an exact kernel computation over the base field.
//! Every candidate is verified exactly before it is returned.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::gamma::{gamma_eval, Degeneracy, GammaSystem};
use crate::linalg::modular::rational_reconstruction;
use crate::linalg::{DenseMatrix, Echelon, Field, PrimeField, Subspace};
use crate::poly::{multiples_piece, Form};

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub primes: Vec<u64>,
    /// Sweeps with more candidates than this are skipped.
    pub max_candidates: u64,
    /// Upper bound on the bit size of the p-adic modulus while lifting.
    pub lift_bits: u64,
    pub exact_kernel: bool,
    /// Prime for the complete-intersection check on rational candidates.
    pub check_prime: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { primes: vec![2, 3], max_candidates: 50_000_000, lift_bits: 4096, exact_kernel: true, check_prime: 4_611_686_018_427_387_847 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSweep {
    pub prime: u64,
    /// `swept` or the reason the prime was skipped.
    pub status: String,
    pub candidates: u64,
    pub hits: u64,
    pub lift_attempts: u64,
    pub verified: u64,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub sweeps: Vec<PrimeSweep>,
    /// Dimension of the exact kernel of the membership system, if computed.
    pub exact_kernel_dim: Option<usize>,
    pub found_by: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness<F: Field> {
    /// Coordinates in the W basis.
    pub coords: Vec<F::Elem>,
    /// `μ` with `a_i κ_i = μ`; `Φ = μ Φ(G)`.
    pub scale: F::Elem,
    pub found_by: String,
}

/// Number of points of `P^n(F_p)`.
pub fn projective_count(p: u64, n: u32) -> Option<u64> {
    let q = p.checked_pow(n + 1)?;
    Some((q - 1) / (p - 1))
}

/// The `idx`-th point of `P^(len−1)(F_p)` with first nonzero coordinate 1,
/// ordered by the position of that coordinate, then lexicographically.
fn decode_candidate(mut idx: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for lead in 0..len {
        let tail = (len - lead - 1) as u32;
        let block = p.pow(tail);
        if idx < block {
            out[lead] = 1;
            for k in (lead + 1..len).rev() {
                out[k] = idx % p;
                idx /= p;
            }
            return out;
        }
        idx -= block;
    }
    unreachable!("candidate index out of range")
}

/// `μ` making `(g, μ)` a solution mod p, if there is one.
fn modular_solution(m: &DenseMatrix<PrimeField>, g: &[u64]) -> Option<u64> {
    let f = m.field();
    let n = g.len();
    let sums: Vec<u64> = m.rows().map(|r| f.dot(&r[..n], g)).collect();
    let pivot = m.rows().position(|r| !f.is_zero(&r[n]));
    let mu = match pivot {
        Some(i) => f.neg(&f.div(&sums[i], m.get(i, n)).unwrap()),
        None => f.one(),
    };
    m.rows().zip(&sums).all(|(r, s)| f.is_zero(&f.add(s, &f.mul(&r[n], &mu)))).then_some(mu)
}

fn integer_rows<F: Field>(m: &DenseMatrix<F>) -> Option<Vec<Vec<BigInt>>> {
    m.rows().map(|r| m.field().integer_row(r)).collect()
}

fn reduce_int(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
    u64::try_from(&r).expect("residue fits")
}

/// Image of the membership system modulo `p`, or the reason there is none.
fn modular_image<F: Field>(m: &DenseMatrix<F>, p: u64) -> std::result::Result<DenseMatrix<PrimeField>, String> {
    let fp = PrimeField::new(p).map_err(|e| e.to_string())?;
    let char = m.field().characteristic();
    if char != 0 {
        if char != p {
            return Err(format!("skipped: instance is over F_{char}"));
        }
        return m.reduce_mod(p).ok_or_else(|| "skipped: reduction failed".to_string());
    }
    let rows = integer_rows(m).ok_or_else(|| "skipped: no integer model".to_string())?;
    let reduced: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| reduce_int(x, p)).collect()).collect();
    Ok(DenseMatrix::from_rows(&fp, m.n_cols(), reduced))
}

/// Lifts a solution of `A v ≡ 0 (mod p)` to a rational solution by
/// normalizing one coordinate and solving a square subsystem p-adically
/// (Dixon iteration) followed by rational reconstruction.
fn lift_hit(a: &[Vec<BigInt>], hit: &[u64], p: u64, max_bits: u64) -> std::result::Result<Vec<BigRational>, String> {
    let k = hit.iter().position(|&x| x != 0).ok_or("zero hit")?;
    dixon_normalized(a, hit.len(), k, p, max_bits)
}

/// Solves `A v = 0` with `v_k = 1` p-adically.
fn dixon_normalized(a: &[Vec<BigInt>], n: usize, k: usize, p: u64, max_bits: u64) -> std::result::Result<Vec<BigRational>, String> {
    let fp = PrimeField::new(p).map_err(|e| e.to_string())?;
    let free: Vec<usize> = (0..n).filter(|&j| j != k).collect();
    // rows whose restriction to the free columns is independent mod p
    let mut ech = Echelon::new(&fp, free.len());
    let mut rows = Vec::new();
    for (i, r) in a.iter().enumerate() {
        let img: Vec<u64> = free.iter().map(|&j| reduce_int(&r[j], p)).collect();
        if ech.insert(&img) {
            rows.push(i);
            if rows.len() == free.len() {
                break;
            }
        }
    }
    if rows.len() < free.len() {
        return Err(format!("square subsystem is singular modulo {p}"));
    }
    let sq: Vec<Vec<BigInt>> = rows.iter().map(|&i| free.iter().map(|&j| a[i][j].clone()).collect()).collect();
    let sq_p = DenseMatrix::from_rows(&fp, free.len(), sq.iter().map(|r| r.iter().map(|x| reduce_int(x, p)).collect()).collect());
    let inv = inverse_mod(&sq_p).ok_or("square subsystem is not invertible")?;
    let mut rhs: Vec<BigInt> = rows.iter().map(|&i| -a[i][k].clone()).collect();
    let mut acc = vec![BigInt::zero(); free.len()];
    let mut modulus = BigInt::one();
    let bp = BigInt::from(p);
    let mut step = 0u64;
    while modulus.bits() <= max_bits {
        let b_p: Vec<u64> = rhs.iter().map(|x| reduce_int(x, p)).collect();
        let d = inv.mul_vec(&b_p);
        for (x, di) in acc.iter_mut().zip(&d) {
            *x += &modulus * BigInt::from(*di);
        }
        for (r, row) in rhs.iter_mut().zip(&sq) {
            let s: BigInt = row.iter().zip(&d).map(|(x, di)| x * BigInt::from(*di)).sum();
            *r = (&*r - s) / &bp;
        }
        modulus *= &bp;
        step += 1;
        if step.is_multiple_of(8) || modulus.bits() > max_bits {
            if let Some(sol) = reconstruct(&acc, &modulus) {
                let mut v = vec![BigRational::zero(); n];
                v[k] = BigRational::one();
                for (&j, s) in free.iter().zip(sol) {
                    v[j] = s;
                }
                if a.iter().all(|r| r.iter().zip(&v).map(|(x, y)| BigRational::from_integer(x.clone()) * y).sum::<BigRational>().is_zero()) {
                    return Ok(v);
                }
            }
        }
    }
    Err(format!("no rational reconstruction below 2^{max_bits}"))
}

/// Small primes are usually bad reductions of the membership system; the
/// hit then only fixes the normalization and the lift runs modulo larger
/// primes.
fn lift_with_fallback(a: &[Vec<BigInt>], hit: &[u64], p: u64, max_bits: u64) -> std::result::Result<Vec<BigRational>, String> {
    match lift_hit(a, hit, p, max_bits) {
        Ok(v) => Ok(v),
        Err(first) => {
            let k = hit.iter().position(|&x| x != 0).ok_or("zero hit")?;
            let mut last = first;
            for &q in &LIFT_PRIMES {
                match dixon_normalized(a, hit.len(), k, q, max_bits) {
                    Ok(v) => return Ok(v),
                    Err(e) => last = format!("{last}; modulo {q}: {e}"),
                }
            }
            Err(last)
        }
    }
}

const LIFT_PRIMES: [u64; 2] = [2_147_483_647, 2_305_843_009_213_693_951];

fn reconstruct(acc: &[BigInt], modulus: &BigInt) -> Option<Vec<BigRational>> {
    acc.iter().map(|x| rational_reconstruction(x, modulus)).collect()
}

fn inverse_mod(m: &DenseMatrix<PrimeField>) -> Option<DenseMatrix<PrimeField>> {
    let f = m.field();
    let n = m.n_rows();
    let aug: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.extend((0..n).map(|j| (i == j) as u64));
            r
        })
        .collect();
    let (r, piv) = DenseMatrix::from_rows(f, 2 * n, aug).rref();
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(DenseMatrix::from_rows(f, n, (0..n).map(|i| r.row(i)[n..].to_vec()).collect()))
}

/// Exact check of a candidate `(c, μ)` over the instance field.
fn verify<F: Field>(sys: &GammaSystem<F>, m: &DenseMatrix<F>, v: &[F::Elem], check_prime: u64) -> std::result::Result<Witness<F>, String> {
    let f = sys.field();
    let n = v.len() - 1;
    if f.is_zero(&v[n]) {
        return Err("μ vanishes".into());
    }
    if !m.mul_vec(v).iter().all(|x| f.is_zero(x)) {
        return Err("not a solution over the base field".into());
    }
    match gamma_eval(sys, &v[..n], check_prime).map_err(|e| e.to_string())? {
        Ok(_) => Ok(Witness { coords: v[..n].to_vec(), scale: v[n].clone(), found_by: String::new() }),
        Err(Degeneracy::SingularAt(i)) => Err(format!("κ vanishes at point {i}")),
        Err(Degeneracy::NotCompleteIntersection(e)) => Err(format!("not a complete intersection: {e:?}")),
    }
}

fn rational_to_field<F: Field>(f: &F, x: &BigRational) -> F::Elem {
    f.div(&f.from_bigint(x.numer()), &f.from_bigint(x.denom())).expect("nonzero denominator")
}

/// Searches for `(c, μ)` with `a_i κ_i(c) = μ ≠ 0` for all points. Returns
/// the first exactly verified witness together with the full report.
pub fn witness_search<F: Field>(sys: &GammaSystem<F>, coeffs: &[F::Elem], opts: &SearchOptions) -> (Option<Witness<F>>, SearchReport) {
    let f = sys.field();
    let m = sys.membership_matrix(coeffs);
    let n = m.n_cols();
    let mut report = SearchReport { sweeps: Vec::new(), exact_kernel_dim: None, found_by: None };
    let int_rows = integer_rows(&m);
    for &p in &opts.primes {
        let mut sweep = PrimeSweep { prime: p, status: String::new(), candidates: 0, hits: 0, lift_attempts: 0, verified: 0, notes: Vec::new() };
        let img = match modular_image(&m, p) {
            Ok(img) => img,
            Err(reason) => {
                sweep.status = reason;
                report.sweeps.push(sweep);
                continue;
            }
        };
        let total = match projective_count(p, (n - 2) as u32) {
            Some(t) if t <= opts.max_candidates => t,
            _ => {
                sweep.status = format!("skipped: more than {} candidates", opts.max_candidates);
                report.sweeps.push(sweep);
                continue;
            }
        };
        sweep.status = "swept".into();
        sweep.candidates = total;
        let hits: Vec<(Vec<u64>, u64)> = (0..total)
            .into_par_iter()
            .filter_map(|idx| {
                let g = decode_candidate(idx, p, n - 1);
                modular_solution(&img, &g).map(|mu| (g, mu))
            })
            .collect();
        sweep.hits = hits.len() as u64;
        let mut found = None;
        // Over Q the lift only depends on the normalized coordinate.
        let mut tried = std::collections::BTreeSet::new();
        for (g, mu) in hits {
            let mut v = g.clone();
            v.push(mu);
            let candidate: std::result::Result<Vec<F::Elem>, String> = if f.characteristic() == p {
                Ok(v.iter().map(|&x| f.from_i64(x as i64)).collect())
            } else if let Some(rows) = &int_rows {
                let k = v.iter().position(|&x| x != 0).expect("projective candidate");
                if !tried.insert(k) {
                    continue;
                }
                sweep.lift_attempts += 1;
                lift_with_fallback(rows, &v, p, opts.lift_bits).map(|sol| sol.iter().map(|x| rational_to_field(f, x)).collect())
            } else {
                Err("no integer model for lifting".into())
            };
            match candidate.and_then(|c| verify(sys, &m, &c, opts.check_prime)) {
                Ok(mut w) => {
                    sweep.verified += 1;
                    w.found_by = format!("sweep modulo {p}");
                    found = Some(w);
                    break;
                }
                Err(e) => {
                    if sweep.notes.len() < 8 {
                        sweep.notes.push(e);
                    }
                }
            }
        }
        report.sweeps.push(sweep);
        if let Some(w) = found {
            report.found_by = Some(w.found_by.clone());
            return (Some(w), report);
        }
    }
    if opts.exact_kernel {
        let ker = Subspace::kernel_of(&m);
        report.exact_kernel_dim = Some(ker.dim());
        let mut candidates: Vec<Vec<F::Elem>> = ker.basis().to_rows();
        if ker.dim() > 1 {
            let mut sum = vec![f.zero(); n];
            for (k, r) in ker.basis().rows().enumerate() {
                for (x, y) in sum.iter_mut().zip(r) {
                    f.mul_add_assign(x, &f.from_i64(k as i64 + 1), y);
                }
            }
            candidates.push(sum);
        }
        for v in candidates {
            if let Ok(mut w) = verify(sys, &m, &v, opts.check_prime) {
                w.found_by = "exact kernel".into();
                report.found_by = Some(w.found_by.clone());
                return (Some(w), report);
            }
        }
    }
    (None, report)
}

/// Whether `found` and `constructed` generate the same quartic piece
/// together with the pencil, i.e. cut the same complete intersection.
pub fn same_linked_quartic<F: Field>(g1: &Form<F>, g2: &Form<F>, found: &Form<F>, constructed: &Form<F>) -> bool {
    let f = g1.field();
    let composed = multiples_piece(f, &[g1.clone(), g2.clone()], 4);
    let with = |g: &Form<F>| composed.sum(&Subspace::from_rows(f, 35, vec![g.coeffs().to_vec()]));
    with(found) == with(constructed)
}
