//! Sextics with a second decomposition linked to `A` by a quartic.
//!
//! For a complete intersection `Z = V(G1, G2, G)` of 36 reduced points the
//! Euler–Jacobi relation `Σ_{z ∈ Z} v_6(z) / κ(z) = 0` is the only linear
//! relation among the `v_6(z)`, where `κ(z)` is defined by
//! `∇G1 × ∇G2 × ∇G (z) = κ(z) · z` (the generalized cross product
//! `⟨u, w⟩ = det[u; ∇G1; ∇G2; ∇G]`). Hence
//! `Φ(G) = Σ_{P ∈ A} v_6(P) / κ(P)` spans `(I_A + I_B)_6^⊥` and equals
//! `−Σ_{Q ∈ B} v_6(Q) / κ(Q)`. Since `G1`, `G2` vanish on `A`, `κ(P)` is
//! linear in `G` and ignores the part of `G` composed with the pencil.

use crate::error::{Error, Result};
use crate::geometry::{ci_validate_image, minimal_generators, reduce_form, residual_pieces, CiFailure, CompleteIntersection};
use crate::linalg::{DenseMatrix, Field, PrimeField};
use crate::pointconfig::{PointConfiguration, ProjPoint};
use crate::poly::{veronese, Form};

fn det3<F: Field>(f: &F, m: [[&F::Elem; 3]; 3]) -> F::Elem {
    let minor = |a: &F::Elem, b: &F::Elem, c: &F::Elem, d: &F::Elem| f.sub(&f.mul(a, d), &f.mul(b, c));
    let t0 = f.mul(m[0][0], &minor(m[1][1], m[1][2], m[2][1], m[2][2]));
    let t1 = f.mul(m[0][1], &minor(m[1][0], m[1][2], m[2][0], m[2][2]));
    let t2 = f.mul(m[0][2], &minor(m[1][0], m[1][1], m[2][0], m[2][1]));
    f.add(&f.sub(&t0, &t1), &t2)
}

/// `κ(P)` for the gradients of three forms at `P`.
pub fn kappa_from_gradients<F: Field>(field: &F, p: &ProjPoint<F>, grads: [&[F::Elem]; 3]) -> F::Elem {
    let m = p.chart(field);
    let cols: Vec<usize> = (0..4).filter(|&c| c != m).collect();
    let rows = grads.map(|g| [&g[cols[0]], &g[cols[1]], &g[cols[2]]]);
    let d = det3(field, rows);
    if m.is_multiple_of(2) {
        d
    } else {
        field.neg(&d)
    }
}

pub fn kappa<F: Field>(g1: &Form<F>, g2: &Form<F>, g: &Form<F>, p: &ProjPoint<F>) -> F::Elem {
    let (a, b, c) = (g1.gradient_at(p.coords()), g2.gradient_at(p.coords()), g.gradient_at(p.coords()));
    kappa_from_gradients(g1.field(), p, [&a, &b, &c])
}

/// The pencil through 18 points, a basis `W` of new quartic generators and
/// the matrix `K[i][j] = κ_{P_i}(W_j)`.
#[derive(Clone, Debug)]
pub struct GammaSystem<F: Field> {
    pub points: PointConfiguration<F>,
    pub g1: Form<F>,
    pub g2: Form<F>,
    pub w_basis: Vec<Form<F>>,
    pub k: DenseMatrix<F>,
}

impl<F: Field> GammaSystem<F> {
    pub fn new(a: &PointConfiguration<F>) -> Result<Self> {
        let field = a.field();
        let gens = minimal_generators(&a.ideal_piece(3), &a.ideal_piece(4))?;
        if gens.cubics.len() != 2 || gens.quartics.len() != 9 {
            return Err(Error::Input(format!(
                "expected 2 cubic and 9 quartic generators, found {} and {}",
                gens.cubics.len(),
                gens.quartics.len()
            )));
        }
        let (g1, g2) = (gens.cubics[0].clone(), gens.cubics[1].clone());
        let mut k = DenseMatrix::zeros(field, a.len(), gens.quartics.len());
        for (i, p) in a.points().iter().enumerate() {
            let (d1, d2) = (g1.gradient_at(p.coords()), g2.gradient_at(p.coords()));
            for (j, w) in gens.quartics.iter().enumerate() {
                let dw = w.gradient_at(p.coords());
                k.set(i, j, kappa_from_gradients(field, p, [&d1, &d2, &dw]));
            }
        }
        Ok(GammaSystem { points: a.clone(), g1, g2, w_basis: gens.quartics, k })
    }

    pub fn field(&self) -> &F {
        self.points.field()
    }

    /// `Σ c_j W_j`
    pub fn lift(&self, coords: &[F::Elem]) -> Form<F> {
        let f = self.field();
        let mut acc = Form::zero(f, 4, 4);
        for (c, w) in coords.iter().zip(&self.w_basis) {
            if !f.is_zero(c) {
                acc = acc.add(&w.scale(c));
            }
        }
        acc
    }

    pub fn kappas(&self, coords: &[F::Elem]) -> Vec<F::Elem> {
        self.k.mul_vec(coords)
    }

    /// Rows `[a_i K_i, −1]`: `(c, μ)` is in the kernel iff `a_i κ_i = μ` for
    /// every point, i.e. iff `Φ = μ Φ(c)`.
    pub fn membership_matrix(&self, coeffs: &[F::Elem]) -> DenseMatrix<F> {
        let f = self.field();
        let rows = coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut r: Vec<F::Elem> = self.k.row(i).iter().map(|x| f.mul(a, x)).collect();
                r.push(f.from_i64(-1));
                r
            })
            .collect();
        DenseMatrix::from_rows(f, self.w_basis.len() + 1, rows)
    }
}

/// `Φ(G)` together with its coefficients over `A` and the quartic itself.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaPoint<F: Field> {
    pub phi: Vec<F::Elem>,
    pub coefficients: Vec<F::Elem>,
    pub quartic: Form<F>,
}

/// Why a quartic does not give a point of Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    /// `κ` vanishes at this point of `A`: `Z` is not reduced there.
    SingularAt(usize),
    NotCompleteIntersection(CiFailure),
}

/// `Φ(Σ c_j W_j)`. Over the rationals the complete-intersection check runs on
/// the image modulo `check_prime`.
pub fn gamma_eval<F: Field>(sys: &GammaSystem<F>, coords: &[F::Elem], check_prime: u64) -> Result<std::result::Result<GammaPoint<F>, Degeneracy>> {
    let quartic = sys.lift(coords);
    let kap = sys.kappas(coords);
    gamma_from_kappas(sys, quartic, &kap, check_prime)
}

/// `Φ(G)` for an arbitrary quartic `G` through `A`.
pub fn gamma_of_quartic<F: Field>(sys: &GammaSystem<F>, g: &Form<F>, check_prime: u64) -> Result<std::result::Result<GammaPoint<F>, Degeneracy>> {
    let kap: Vec<F::Elem> = sys.points.points().iter().map(|p| kappa(&sys.g1, &sys.g2, g, p)).collect();
    gamma_from_kappas(sys, g.clone(), &kap, check_prime)
}

fn gamma_from_kappas<F: Field>(
    sys: &GammaSystem<F>,
    quartic: Form<F>,
    kap: &[F::Elem],
    check_prime: u64,
) -> Result<std::result::Result<GammaPoint<F>, Degeneracy>> {
    let f = sys.field();
    let mut coefficients = Vec::with_capacity(kap.len());
    for (i, k) in kap.iter().enumerate() {
        match f.inv(k) {
            Some(v) => coefficients.push(v),
            None => return Ok(Err(Degeneracy::SingularAt(i))),
        }
    }
    if let Err(e) = ci_validate_image(&sys.g1, &sys.g2, &quartic, check_prime)? {
        return Ok(Err(Degeneracy::NotCompleteIntersection(e)));
    }
    let mut phi = vec![f.zero(); 84];
    for (p, c) in sys.points.points().iter().zip(&coefficients) {
        for (x, v) in phi.iter_mut().zip(veronese(f, p.coords(), 6)) {
            f.mul_add_assign(x, c, &v);
        }
    }
    Ok(Ok(GammaPoint { phi, coefficients, quartic }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateOutcome<F: Field> {
    pub holds: bool,
    /// `μ` with `a_i κ_i(G) = μ` for all i, when it exists.
    pub scale: Option<F::Elem>,
    pub degenerate: Option<Degeneracy>,
}

/// Decides whether `Φ = Σ a_i v_6(P_i)` is dual to `I_A + I_B` for the
/// residual `B` of `A` in `V(G1, G2, G)`: by the Euler–Jacobi relation this
/// holds iff `a_i κ_{P_i}(G)` does not depend on i.
pub fn candidate_check<F: Field>(sys: &GammaSystem<F>, coeffs: &[F::Elem], g: &Form<F>, check_prime: u64) -> Result<CandidateOutcome<F>> {
    let f = sys.field();
    let kap: Vec<F::Elem> = sys.points.points().iter().map(|p| kappa(&sys.g1, &sys.g2, g, p)).collect();
    if let Some(i) = kap.iter().position(|k| f.is_zero(k)) {
        return Ok(CandidateOutcome { holds: false, scale: None, degenerate: Some(Degeneracy::SingularAt(i)) });
    }
    if let Err(e) = ci_validate_image(&sys.g1, &sys.g2, g, check_prime)? {
        return Ok(CandidateOutcome { holds: false, scale: None, degenerate: Some(Degeneracy::NotCompleteIntersection(e)) });
    }
    let mu = f.mul(&coeffs[0], &kap[0]);
    let holds = coeffs.iter().zip(&kap).all(|(a, k)| f.mul(a, k) == mu);
    Ok(CandidateOutcome { holds, scale: holds.then_some(mu), degenerate: None })
}

/// Outcome of computing the residual ideal directly, modulo a prime.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ColonCheck {
    pub prime: u64,
    /// `dim (I_B)_d` for d = 3..=6.
    pub residual_dims: Vec<usize>,
    pub cubic_generators: usize,
    pub quartic_generators: usize,
    pub sum_dim_degree6: usize,
    /// `⟨Φ, g⟩ = 0` for every g in `(I_B)_6`.
    pub orthogonal: bool,
}

/// Computes `(I_B)_d = (I_CI : I_A)_d` for `d = 3..=6` on the images modulo
/// `p` and tests `Φ ⊥ (I_B)_6`. For prime-field instances `p` must be the
/// characteristic.
pub fn candidate_check_by_colon<F: Field>(phi: &[F::Elem], a: &PointConfiguration<F>, g1: &Form<F>, g2: &Form<F>, g: &Form<F>, p: u64) -> Result<Option<ColonCheck>> {
    let fp = PrimeField::new(p)?;
    let (Some(ap), Some(h1), Some(h2), Some(h)) = (a.reduce_mod(p), reduce_form(g1, p), reduce_form(g2, p), reduce_form(g, p)) else {
        return Ok(None);
    };
    let Some(phip) = phi.iter().map(|x| a.field().reduce_mod(x, p)).collect::<Option<Vec<u64>>>() else {
        return Ok(None);
    };
    let ci = CompleteIntersection { g1: h1, g2: h2, g: h };
    let res = residual_pieces(&ci, &ap)?;
    let gens = res.generators()?;
    let b6 = res.piece(6);
    let orthogonal = b6.basis().rows().all(|r| fp.is_zero(&fp.dot(r, &phip)));
    Ok(Some(ColonCheck {
        prime: p,
        residual_dims: res.dims(),
        cubic_generators: gens.cubics.len(),
        quartic_generators: gens.quartics.len(),
        sum_dim_degree6: ap.ideal_piece(6).sum(b6).dim(),
        orthogonal,
    }))
}
