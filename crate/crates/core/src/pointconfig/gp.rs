//! General position and second Kruskal rank via subset enumeration.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::PointConfiguration;
use crate::linalg::matrix::FILTER_PRIMES;
use crate::linalg::{DenseMatrix, Field, PrimeField};

const CHUNK: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageCount {
    pub degree: usize,
    pub subset_size: usize,
    pub subsets_checked: u64,
    pub total_subsets: u64,
    pub exact_rechecks: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GpFailure {
    pub subset: Vec<usize>,
    pub degree: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GpReport {
    pub general: bool,
    pub stages: Vec<StageCount>,
    pub failure: Option<GpFailure>,
    pub filter_prime: Option<u64>,
}

impl GpReport {
    pub fn total_checks(&self) -> u64 {
        self.stages.iter().map(|s| s.subsets_checked).sum()
    }
}

/// Rows of the exact matrix and, when available, their image modulo a
/// filter prime. `exact_filter` marks the case where the image is the matrix
/// itself (instances over that prime field).
struct Rows<'a, F: Field> {
    exact: &'a DenseMatrix<F>,
    modular: Option<DenseMatrix<PrimeField>>,
    exact_filter: bool,
}

fn filtered_rows<F: Field>(m: &DenseMatrix<F>) -> (Rows<'_, F>, Option<u64>) {
    let char = m.field().characteristic();
    if char != 0 {
        let img = m.reduce_mod(char);
        return (Rows { exact: m, modular: img, exact_filter: true }, Some(char));
    }
    for &p in FILTER_PRIMES.iter() {
        if let Some(img) = m.reduce_mod(p) {
            return (Rows { exact: m, modular: Some(img), exact_filter: false }, Some(p));
        }
    }
    (Rows { exact: m, modular: None, exact_filter: false }, None)
}

enum Outcome {
    Independent,
    IndependentAfterRecheck,
    Dependent(usize),
}

fn check_subset<F: Field>(rows: &Rows<'_, F>, idx: &[usize]) -> Outcome {
    if let Some(mp) = &rows.modular {
        let r = mp.select_rows(idx).rank();
        if r == idx.len() {
            return Outcome::Independent;
        }
        if rows.exact_filter {
            return Outcome::Dependent(r);
        }
    }
    let r = rows.exact.select_rows(idx).rank();
    if r == idx.len() {
        Outcome::IndependentAfterRecheck
    } else {
        Outcome::Dependent(r)
    }
}

/// Enumerates k-subsets of the rows in lexicographic order and returns the
/// first dependent one (with its rank) together with the stage count.
fn first_dependent<F: Field>(rows: &Rows<'_, F>, k: usize, degree: usize) -> (Option<(Vec<usize>, usize)>, StageCount) {
    let n = rows.exact.n_rows();
    let total = binomial(n, k);
    let mut stage = StageCount { degree, subset_size: k, subsets_checked: 0, total_subsets: total, exact_rechecks: 0 };
    let mut combos = (0..n).combinations(k);
    loop {
        let chunk: Vec<Vec<usize>> = combos.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return (None, stage);
        }
        let outcomes: Vec<Outcome> = chunk.par_iter().map(|c| check_subset(rows, c)).collect();
        for (c, o) in chunk.into_iter().zip(outcomes) {
            stage.subsets_checked += 1;
            match o {
                Outcome::Independent => {}
                Outcome::IndependentAfterRecheck => stage.exact_rechecks += 1,
                Outcome::Dependent(r) => {
                    if !rows.exact_filter {
                        stage.exact_rechecks += 1;
                    }
                    return (Some((c, r)), stage);
                }
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Checks every subset of size min(ℓ,4) in degree 1, every subset of size
/// min(ℓ,10) in degree 2, and the whole set in degree 3. The first failing
/// subset in lexicographic order is reported.
pub fn is_general_position<F: Field>(a: &PointConfiguration<F>) -> GpReport {
    let l = a.len();
    let mut report = GpReport { general: true, stages: Vec::new(), failure: None, filter_prime: None };
    if l == 0 {
        return report;
    }
    for (degree, size) in [(1usize, l.min(4)), (2, l.min(10))] {
        let m = a.evaluation_matrix(degree);
        let (rows, p) = filtered_rows(&m);
        report.filter_prime = report.filter_prime.or(p);
        let (fail, stage) = first_dependent(&rows, size, degree);
        report.stages.push(stage);
        if let Some((subset, rank)) = fail {
            report.general = false;
            report.failure = Some(GpFailure { subset, degree, rank });
            return report;
        }
    }
    let m3 = a.evaluation_matrix(3);
    let (rows, _) = filtered_rows(&m3);
    let h3 = match &rows.modular {
        Some(mp) if rows.exact_filter => mp.rank(),
        _ => m3.rank(),
    };
    let expected = l.min(20);
    let needed_exact = rows.modular.as_ref().is_none_or(|mp| !rows.exact_filter && mp.rank() < expected);
    report.stages.push(StageCount {
        degree: 3,
        subset_size: l,
        subsets_checked: 1,
        total_subsets: 1,
        exact_rechecks: needed_exact as u64,
    });
    if h3 != expected {
        report.general = false;
        report.failure = Some(GpFailure { subset: (0..l).collect(), degree: 3, rank: h3 });
    }
    report
}

/// Largest k ≤ min(ℓ, 10) such that every k-subset of the degree-2 Veronese
/// images is linearly independent.
pub fn kruskal_rank_v2<F: Field>(a: &PointConfiguration<F>) -> usize {
    let m = a.evaluation_matrix(2);
    let (rows, _) = filtered_rows(&m);
    let u = a.len().min(10);
    for k in (1..=u).rev() {
        if first_dependent(&rows, k, 2).0.is_none() {
            return k;
        }
    }
    0
}
