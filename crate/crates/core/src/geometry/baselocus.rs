//! Curves in the base locus of a system of cubics, detected through plane
//! sections.

use rand::Rng;
use serde::Serialize;

use crate::linalg::{DenseMatrix, Field};
use crate::pointconfig::PointConfiguration;
use crate::poly::{multiples_matrix, n_ternary, Form};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BaseLocusTag {
    CertifiedFinite,
    LikelyCurve,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneTrial {
    /// Columns span the plane: rows are x0..x3, entries formatted in the field.
    pub plane: Vec<Vec<String>>,
    pub degree: usize,
    pub rank: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseLocusVerdict {
    pub tag: BaseLocusTag,
    pub trials: Vec<PlaneTrial>,
    /// Planes discarded because they passed through a point to avoid.
    pub rejected_planes: usize,
}

impl BaseLocusVerdict {
    pub fn certificate(&self) -> Option<&PlaneTrial> {
        (self.tag == BaseLocusTag::CertifiedFinite).then(|| self.trials.last()).flatten()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BaseLocusOptions {
    pub planes: usize,
    /// Also try degree 8 when the degree-7 multiples fall short.
    pub escalate: bool,
}

impl Default for BaseLocusOptions {
    fn default() -> Self {
        BaseLocusOptions { planes: 8, escalate: true }
    }
}

/// Restricts `cubics` to seeded random planes and checks whether their
/// common zeros on the plane are empty: a family of ternary cubics without
/// common zeros has degree-7 multiples spanning all 36 ternary septics. One
/// empty section proves the base locus contains no curve, since every curve
/// meets every plane.
pub fn base_locus_curve_test<F: Field, R: Rng + ?Sized>(
    cubics: &[Form<F>],
    avoid: Option<&PointConfiguration<F>>,
    opts: BaseLocusOptions,
    rng: &mut R,
) -> BaseLocusVerdict {
    let mut verdict = BaseLocusVerdict { tag: BaseLocusTag::LikelyCurve, trials: Vec::new(), rejected_planes: 0 };
    let Some(first) = cubics.first() else {
        verdict.tag = BaseLocusTag::Inconclusive;
        return verdict;
    };
    let field = first.field().clone();
    let max_rejections = 4 * opts.planes.max(1);
    let degrees: &[usize] = if opts.escalate { &[7, 8] } else { &[7] };
    let mut planes_used = 0;
    while planes_used < opts.planes {
        let u: Vec<Vec<F::Elem>> = (0..4).map(|_| (0..3).map(|_| field.random(rng, 50)).collect()).collect();
        if !plane_is_admissible(&field, &u, avoid) {
            verdict.rejected_planes += 1;
            if verdict.rejected_planes > max_rejections {
                verdict.tag = BaseLocusTag::Inconclusive;
                return verdict;
            }
            continue;
        }
        planes_used += 1;
        let restricted: Vec<Form<F>> = cubics.iter().map(|c| c.substitute(&u, 3)).collect();
        let plane: Vec<Vec<String>> = u.iter().map(|r| r.iter().map(|x| field.format(x)).collect()).collect();
        for &d in degrees {
            let rank = multiples_matrix(&field, &restricted, d).rank();
            let target = n_ternary(d);
            verdict.trials.push(PlaneTrial { plane: plane.clone(), degree: d, rank, target });
            if rank == target {
                verdict.tag = BaseLocusTag::CertifiedFinite;
                return verdict;
            }
        }
    }
    verdict
}

/// The parametrization has rank 3 and the plane avoids every listed point.
fn plane_is_admissible<F: Field>(field: &F, u: &[Vec<F::Elem>], avoid: Option<&PointConfiguration<F>>) -> bool {
    let m = DenseMatrix::from_rows(field, 3, u.to_vec());
    if m.rank() < 3 {
        return false;
    }
    let Some(pts) = avoid else { return true };
    pts.points().iter().all(|p| {
        let mut rows = u.to_vec();
        for (r, c) in rows.iter_mut().zip(p.coords()) {
            r.push(c.clone());
        }
        DenseMatrix::from_rows(field, 4, rows).rank() == 4
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ci::tests::{fp, pencil_and_quartic, random_points_fp};
    use crate::linalg::{PrimeField, Subspace};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cubics_of(s: &Subspace<PrimeField>) -> Vec<Form<PrimeField>> {
        s.basis().rows().map(|r| Form::from_coeffs(s.field(), 4, 3, r.to_vec())).collect()
    }

    #[test]
    fn fifteen_generic_points_have_finite_base_locus() {
        let a = random_points_fp(15, 8);
        let cubics = cubics_of(&a.ideal_piece(3));
        assert_eq!(cubics.len(), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = base_locus_curve_test(&cubics, Some(&a), BaseLocusOptions::default(), &mut rng);
        assert_eq!(v.tag, BaseLocusTag::CertifiedFinite);
        assert_eq!(v.certificate().unwrap().rank, 36);
    }

    #[test]
    fn pencil_contains_a_curve() {
        let (a, g1, g2, _) = pencil_and_quartic(3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = base_locus_curve_test(&[g1, g2], Some(&a), BaseLocusOptions::default(), &mut rng);
        assert_eq!(v.tag, BaseLocusTag::LikelyCurve);
    }

    #[test]
    fn planted_twisted_cubic_is_never_certified() {
        // cubics through the twisted cubic (1, t, t², t³) and 6 extra points
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut coords: Vec<[u64; 4]> = (1..=12u64).map(|t| [1, t, t * t, t * t * t]).collect();
        for _ in 0..6 {
            coords.push([(); 4].map(|_| f.random(&mut rng, 0)));
        }
        let a = PointConfiguration::from_coords(&f, coords).unwrap();
        let cubics = cubics_of(&a.ideal_piece(3));
        assert!(!cubics.is_empty());
        for seed in 0..200 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = base_locus_curve_test(&cubics, None, BaseLocusOptions { planes: 1, escalate: true }, &mut rng);
            assert_ne!(v.tag, BaseLocusTag::CertifiedFinite);
        }
    }

    #[test]
    fn empty_sections_agree_with_zero_scan() {
        // three random ternary cubics over F_31 have no common zero iff the
        // degree-7 multiples span everything
        let f = PrimeField::new(31).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let k = 2 + (rng.gen::<u8>() % 2) as usize;
            let forms: Vec<Form<PrimeField>> = (0..k).map(|_| Form::from_coeffs(&f, 3, 3, (0..10).map(|_| f.random(&mut rng, 0)).collect())).collect();
            let full = multiples_matrix(&f, &forms, 7).rank() == 36;
            let mut zero_found = false;
            for a in 0..31u64 {
                for b in 0..31u64 {
                    for p in [[1, a, b], [0, 1, a], [0, 0, 1]] {
                        if forms.iter().all(|g| g.eval(&p) == 0) {
                            zero_found = true;
                        }
                    }
                }
            }
            if zero_found {
                assert!(!full);
            }
        }
    }
}
