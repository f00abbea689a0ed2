//! Residual point sets in a complete intersection, computed degree by degree
//! as colon ideals, and the Betti numbers of eighteen general points.

use serde::Serialize;

use super::ci::CompleteIntersection;
use crate::error::{Error, Result};
use crate::linalg::matrix::modular_rank_lower_bound;
use crate::linalg::{DenseMatrix, Field, Subspace};
use crate::pointconfig::PointConfiguration;
use crate::poly::{multiples_matrix, multiples_piece, n_quaternary, pullback_by_product, Form};

/// Generators of an ideal generated in degrees 3 and 4: a basis of the cubic
/// piece and a complement of `R_1 · I_3` inside `I_4`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalGenerators<F: Field> {
    pub cubics: Vec<Form<F>>,
    pub quartics: Vec<Form<F>>,
    /// `dim R_1 · I_3`
    pub composed_quartics: usize,
}

impl<F: Field> MinimalGenerators<F> {
    pub fn all(&self) -> Vec<Form<F>> {
        self.cubics.iter().chain(&self.quartics).cloned().collect()
    }
}

fn forms_of<F: Field>(m: &DenseMatrix<F>, d: usize) -> Vec<Form<F>> {
    m.rows().map(|r| Form::from_coeffs(m.field(), 4, d, r.to_vec())).collect()
}

/// Generators from the degree-3 and degree-4 pieces of an ideal. The quartic
/// complement is the greedy one along the canonical basis of `i4`.
pub fn minimal_generators<F: Field>(i3: &Subspace<F>, i4: &Subspace<F>) -> Result<MinimalGenerators<F>> {
    let field = i3.field();
    let cubics = forms_of(i3.basis(), 3);
    let composed = if cubics.is_empty() { Subspace::zero(field, n_quaternary(4)) } else { multiples_piece(field, &cubics, 4) };
    let w = composed
        .complement_in(i4)
        .ok_or_else(|| Error::Invariant("multiples of the cubics leave the quartic piece".into()))?;
    Ok(MinimalGenerators { cubics, quartics: forms_of(&w, 4), composed_quartics: composed.dim() })
}

/// `{ f of degree d : f g ∈ I_CI for every g in gens }` for each `d` in
/// `degrees`. Membership of `f g` is tested against the functionals
/// annihilating `(I_CI)_{d + deg g}`.
pub fn colon_pieces<F: Field>(ci: &CompleteIntersection<F>, gens: &[Form<F>], degrees: &[usize]) -> Vec<Subspace<F>> {
    let field = ci.g1.field();
    let mut duals: Vec<Option<DenseMatrix<F>>> = Vec::new();
    let mut dual = |k: usize| -> DenseMatrix<F> {
        if duals.len() <= k {
            duals.resize(k + 1, None);
        }
        duals[k].get_or_insert_with(|| ci.dual_piece(k).basis().clone()).clone()
    };
    degrees
        .iter()
        .map(|&d| {
            let mut conditions = DenseMatrix::zeros(field, 0, n_quaternary(d));
            for g in gens {
                let pulled = pullback_by_product(&dual(d + g.degree()), g, d);
                conditions = conditions.vstack(&pulled);
            }
            Subspace::kernel_of(&conditions)
        })
        .collect()
}

/// Degree pieces 3..=6 of the residual ideal `I_B = I_CI : I_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualPieces<F: Field> {
    pub pieces: Vec<Subspace<F>>,
}

impl<F: Field> ResidualPieces<F> {
    pub const DEGREES: [usize; 4] = [3, 4, 5, 6];

    pub fn piece(&self, d: usize) -> &Subspace<F> {
        &self.pieces[d - 3]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(Subspace::dim).collect()
    }

    pub fn generators(&self) -> Result<MinimalGenerators<F>> {
        minimal_generators(self.piece(3), self.piece(4))
    }
}

/// Fails when one of the three surfaces misses a point of `a`.
pub fn residual_pieces<F: Field>(ci: &CompleteIntersection<F>, a: &PointConfiguration<F>) -> Result<ResidualPieces<F>> {
    let field = a.field();
    for (name, g) in [("G1", &ci.g1), ("G2", &ci.g2), ("G", &ci.g)] {
        if let Some(i) = a.points().iter().position(|p| !field.is_zero(&g.eval(p.coords()))) {
            return Err(Error::Input(format!("{name} does not vanish at point {i}")));
        }
    }
    let gens = minimal_generators(&a.ideal_piece(3), &a.ideal_piece(4))?;
    let pieces = colon_pieces(ci, &gens.all(), &ResidualPieces::<F>::DEGREES);
    Ok(ResidualPieces { pieces })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    pub cubic_generators: usize,
    pub quartic_generators: usize,
    pub first_syzygies_degree5: usize,
    pub second_syzygies_degree6: usize,
    pub ideal_dim_degree5: usize,
    pub ideal_dim_degree6: usize,
    pub deviations: Vec<String>,
}

impl BettiReport {
    pub const EXPECTED: (usize, usize, usize, usize) = (2, 9, 18, 8);

    pub fn numbers(&self) -> (usize, usize, usize, usize) {
        (self.cubic_generators, self.quartic_generators, self.first_syzygies_degree5, self.second_syzygies_degree6)
    }

    pub fn matches(&self) -> bool {
        self.deviations.is_empty()
    }
}

/// Rank of a matrix whose rows lie in a space of dimension `bound`. Over Q
/// an image reaching the bound settles it without exact elimination.
fn rank_inside<F: Field>(m: &DenseMatrix<F>, bound: usize) -> usize {
    if m.field().characteristic() == 0 && modular_rank_lower_bound(m) == Some(bound) {
        return bound;
    }
    m.rank()
}

/// Graded Betti numbers of `a` in the range where eighteen general points
/// have them: generators in degrees 3 and 4, first syzygies in degree 5 and
/// second syzygies in degree 6, all read off from ranks of multiplication
/// maps. Assumes no first syzygies of degree 4 or 6.
pub fn betti_diagnostic<F: Field>(a: &PointConfiguration<F>) -> Result<BettiReport> {
    let field = a.field();
    let gens = minimal_generators(&a.ideal_piece(3), &a.ideal_piece(4))?;
    let all = gens.all();
    let m5 = multiples_matrix(field, &all, 5);
    let rank5 = rank_inside(&m5, n_quaternary(5) - a.hilbert_function(5));
    let syz5 = m5.n_rows() - rank5;
    let m6 = multiples_matrix(field, &all, 6);
    let rank6 = rank_inside(&m6, n_quaternary(6) - a.hilbert_function(6));
    let kernel6 = m6.n_rows() - rank6;
    let second6 = (4 * syz5).checked_sub(kernel6).ok_or_else(|| {
        Error::Invariant(format!("degree-6 syzygies ({kernel6}) exceed the multiples of degree-5 ones ({})", 4 * syz5))
    })?;
    let mut report = BettiReport {
        cubic_generators: gens.cubics.len(),
        quartic_generators: gens.quartics.len(),
        first_syzygies_degree5: syz5,
        second_syzygies_degree6: second6,
        ideal_dim_degree5: rank5,
        ideal_dim_degree6: rank6,
        deviations: Vec::new(),
    };
    let (e3, e4, e5, e6) = BettiReport::EXPECTED;
    for (name, got, want) in [
        ("cubic generators", report.cubic_generators, e3),
        ("quartic generators", report.quartic_generators, e4),
        ("degree-5 first syzygies", syz5, e5),
        ("degree-6 second syzygies", second6, e6),
    ] {
        if got != want {
            report.deviations.push(format!("{name}: {got}, expected {want}"));
        }
    }
    Ok(report)
}
