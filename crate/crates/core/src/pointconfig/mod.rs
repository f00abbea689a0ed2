//! Finite point sets in P^3 and their Hilbert functions.

mod gp;

pub use gp::{is_general_position, kruskal_rank_v2, GpFailure, GpReport, StageCount};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Field, PrimeField, Subspace};
use crate::poly::{basis, veronese};

/// A point of P^3 whose first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint<F: Field> {
    coords: [F::Elem; 4],
}

impl<F: Field> ProjPoint<F> {
    /// Normalizes `coords`; rejects the zero vector.
    pub fn new(field: &F, coords: [F::Elem; 4]) -> Result<Self> {
        let Some(lead) = coords.iter().find(|c| !field.is_zero(c)) else {
            return Err(Error::Input("the zero vector is not a projective point".into()));
        };
        let inv = field.inv(lead).expect("nonzero");
        Ok(ProjPoint { coords: coords.map(|c| field.mul(&c, &inv)) })
    }

    pub fn coords(&self) -> &[F::Elem; 4] {
        &self.coords
    }

    /// Index of the first nonzero coordinate, which equals 1.
    pub fn chart(&self, field: &F) -> usize {
        self.coords.iter().position(|c| !field.is_zero(c)).expect("nonzero point")
    }
}

/// Ordered, pairwise distinct points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfiguration<F: Field> {
    field: F,
    points: Vec<ProjPoint<F>>,
}

impl<F: Field> PointConfiguration<F> {
    pub fn new(field: &F, points: Vec<ProjPoint<F>>) -> Result<Self> {
        for i in 0..points.len() {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(Error::Input(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(PointConfiguration { field: field.clone(), points })
    }

    pub fn from_coords(field: &F, coords: Vec<[F::Elem; 4]>) -> Result<Self> {
        let pts = coords
            .into_iter()
            .enumerate()
            .map(|(i, c)| ProjPoint::new(field, c).map_err(|e| Error::Input(format!("point {i}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, pts)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn points(&self) -> &[ProjPoint<F>] {
        &self.points
    }
    pub fn point(&self, i: usize) -> &ProjPoint<F> {
        &self.points[i]
    }

    pub fn subset(&self, idx: &[usize]) -> Self {
        PointConfiguration { field: self.field.clone(), points: idx.iter().map(|&i| self.points[i].clone()).collect() }
    }

    pub fn without(&self, skip: usize) -> Self {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| i != skip).collect();
        self.subset(&idx)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        Self::new(&self.field, pts)
    }

    /// Row i is `veronese(P_i, d)`.
    pub fn evaluation_matrix(&self, d: usize) -> DenseMatrix<F> {
        let rows = self.points.iter().map(|p| veronese(&self.field, p.coords(), d)).collect();
        DenseMatrix::from_rows(&self.field, basis(4, d).len(), rows)
    }

    pub fn hilbert_function(&self, d: usize) -> usize {
        if self.is_empty() {
            return 0;
        }
        self.evaluation_matrix(d).rank()
    }

    pub fn hf_profile(&self, max_degree: usize) -> HfProfile {
        HfProfile::from_values((0..=max_degree).map(|d| self.hilbert_function(d)).collect())
    }

    /// Degree-d forms vanishing on every point.
    pub fn ideal_piece(&self, d: usize) -> Subspace<F> {
        if self.is_empty() {
            return Subspace::full(&self.field, basis(4, d).len());
        }
        Subspace::kernel_of(&self.evaluation_matrix(d))
    }

    /// Rank of the span of the tangent spaces to `v_d(P^3)` at the points:
    /// rows `∂(x^α)/∂x_j (P)` for each point and each j.
    pub fn terracini_rank(&self, d: usize) -> usize {
        let f = &self.field;
        let b = basis(4, d);
        let lower = veronese_table(self, d.saturating_sub(1));
        let mut m = DenseMatrix::zeros(f, 0, b.len());
        for (pi, _) in self.points.iter().enumerate() {
            for j in 0..4 {
                let row = b
                    .exponents()
                    .iter()
                    .map(|e| {
                        if e[j] == 0 {
                            return f.zero();
                        }
                        let mut e2 = *e;
                        e2[j] -= 1;
                        let v = &lower[pi][basis(4, d - 1).index(&e2)];
                        f.mul(v, &f.from_i64(e[j] as i64))
                    })
                    .collect();
                m.push_row(row);
            }
        }
        m.rank()
    }

    /// Coordinatewise image in `F_p`, if every coordinate reduces and the
    /// images stay pairwise distinct.
    pub fn reduce_mod(&self, p: u64) -> Option<PointConfiguration<PrimeField>> {
        let fp = PrimeField::new(p).ok()?;
        let mut coords = Vec::with_capacity(self.len());
        for pt in &self.points {
            let mut c = [0u64; 4];
            for (k, x) in pt.coords().iter().enumerate() {
                c[k] = self.field.reduce_mod(x, p)?;
            }
            coords.push(c);
        }
        PointConfiguration::from_coords(&fp, coords).ok()
    }
}

fn veronese_table<F: Field>(a: &PointConfiguration<F>, d: usize) -> Vec<Vec<F::Elem>> {
    a.points().iter().map(|p| veronese(a.field(), p.coords(), d)).collect()
}

/// Hilbert function values h(0..) and first differences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HfProfile {
    pub h: Vec<usize>,
    pub dh: Vec<i64>,
}

impl HfProfile {
    pub fn from_values(h: Vec<usize>) -> Self {
        let dh = h.iter().enumerate().map(|(i, &v)| v as i64 - if i == 0 { 0 } else { h[i - 1] as i64 }).collect();
        HfProfile { h, dh }
    }

    /// `h^1(d) = ℓ − h(d)`.
    pub fn h1(&self, length: usize, d: usize) -> i64 {
        length as i64 - self.h[d] as i64
    }
}

/// Outcome of the Cayley–Bacharach inequalities
/// `Σ_{i≤j} Dh(i) ≤ Σ_{i≤j} Dh(7−i)` for j = 0..3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CbCheck {
    pub holds: [bool; 4],
    pub equality: [bool; 4],
    pub lhs: [i64; 4],
    pub rhs: [i64; 4],
}

impl CbCheck {
    pub fn all_hold(&self) -> bool {
        self.holds.iter().all(|&b| b)
    }
    pub fn all_equal(&self) -> bool {
        self.equality.iter().all(|&b| b)
    }
}

/// Missing entries of `dh` (beyond its length) count as 0.
pub fn cayley_bacharach_check(dh: &[i64]) -> CbCheck {
    let at = |i: usize| dh.get(i).copied().unwrap_or(0);
    let mut out = CbCheck { holds: [false; 4], equality: [false; 4], lhs: [0; 4], rhs: [0; 4] };
    let (mut l, mut r) = (0, 0);
    for j in 0..4 {
        l += at(j);
        r += at(7 - j);
        out.lhs[j] = l;
        out.rhs[j] = r;
        out.holds[j] = l <= r;
        out.equality[j] = l == r;
    }
    out
}
