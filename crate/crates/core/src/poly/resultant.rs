//! Elimination of x3 from two quaternary cubics.

use super::form::Form;
use super::monomial::basis;
use crate::error::{Error, Result};
use crate::linalg::Field;

/// Splits a quaternary form into ternary coefficients of `x3^k`, k = 0..=deg.
fn coefficients_in_x3<F: Field>(f: &Form<F>) -> Vec<Form<F>> {
    let field = f.field();
    let d = f.degree();
    let mut parts: Vec<Form<F>> = (0..=d).map(|k| Form::zero(field, 3, d - k)).collect();
    let b = basis(4, d);
    for (i, c) in f.coeffs().iter().enumerate() {
        if field.is_zero(c) {
            continue;
        }
        let e = b.exponent(i);
        let k = e[3] as usize;
        let mut coeffs = parts[k].clone().into_coeffs();
        coeffs[basis(3, d - k).index(&[e[0], e[1], e[2], 0])] = c.clone();
        parts[k] = Form::from_coeffs(field, 3, d - k, coeffs);
    }
    parts
}

/// Sylvester resultant of two cubics with respect to x3. The result is the
/// ternary nonic cutting out the projection of `V(f, g)` from (0:0:0:1).
pub fn resultant_x3<F: Field>(f: &Form<F>, g: &Form<F>) -> Result<Form<F>> {
    if f.degree() != 3 || g.degree() != 3 || f.nvars() != 4 || g.nvars() != 4 {
        return Err(Error::Input("resultant_x3 expects two quaternary cubics".into()));
    }
    let field = f.field();
    let (fc, gc) = (coefficients_in_x3(f), coefficients_in_x3(g));
    if fc[3].is_zero() || gc[3].is_zero() {
        return Err(Error::Input("resultant_x3: coefficient of x3^3 vanishes".into()));
    }
    // Row r < 3 holds f shifted by r, row r >= 3 holds g shifted by r - 3;
    // entry (r, c) is the coefficient of x3^(3 - (c - shift)).
    let entry = |r: usize, c: usize| -> Option<&Form<F>> {
        let (parts, shift) = if r < 3 { (&fc, r) } else { (&gc, r - 3) };
        if c < shift || c - shift > 3 {
            return None;
        }
        let p = &parts[3 - (c - shift)];
        (!p.is_zero()).then_some(p)
    };
    let mut dp: Vec<Option<Form<F>>> = vec![None; 64];
    dp[0] = Some(Form::constant(field, 3, field.one()));
    for c in 0..6 {
        let mut next: Vec<Option<Form<F>>> = vec![None; 64];
        for mask in 0usize..64 {
            if mask.count_ones() as usize != c {
                continue;
            }
            let Some(acc) = &dp[mask] else { continue };
            for j in 0..6 {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let Some(a) = entry(j, c) else { continue };
                let above = (mask >> (j + 1)).count_ones();
                let mut term = acc.mul(a);
                if above % 2 == 1 {
                    term = term.scale(&field.from_i64(-1));
                }
                let slot = &mut next[mask | (1 << j)];
                *slot = Some(match slot.take() {
                    Some(s) => s.add(&term),
                    None => term,
                });
            }
        }
        dp = next;
    }
    Ok(dp[63].take().unwrap_or_else(|| Form::zero(field, 3, 9)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cube_minus(i: usize) -> Form<Rationals> {
        let x3 = Form::variable(&Rationals, 4, 3).pow(3);
        x3.sub(&Form::variable(&Rationals, 4, i).pow(3))
    }

    #[test]
    fn difference_of_cubes() {
        let r = resultant_x3(&cube_minus(0), &cube_minus(1)).unwrap();
        let t = |i| Form::variable(&Rationals, 3, i).pow(3);
        let expected = t(0).sub(&t(1)).pow(3);
        let lead = r.coeffs()[0].clone();
        assert!(!Rationals.is_zero(&lead));
        assert_eq!(r, expected.scale(&lead));
    }

    #[test]
    fn equal_inputs_give_zero() {
        let f = cube_minus(0);
        assert!(resultant_x3(&f, &f).unwrap().is_zero());
    }

    #[test]
    fn missing_leading_coefficient_rejected() {
        let f = Form::variable(&Rationals, 4, 0).pow(3);
        assert!(resultant_x3(&f, &cube_minus(1)).is_err());
    }

    #[test]
    fn vanishes_on_projected_common_zeros() {
        let f = PrimeField::new(31).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rand_cubic = |rng: &mut ChaCha8Rng| Form::from_coeffs(&f, 4, 3, (0..20).map(|_| f.random(rng, 0)).collect());
        let (g1, g2) = (rand_cubic(&mut rng), rand_cubic(&mut rng));
        let r = resultant_x3(&g1, &g2).unwrap();
        assert!(!r.is_zero());
        let mut found = 0;
        for a in 0..31u64 {
            for b in 0..31u64 {
                for c in 0..31u64 {
                    let p = [1, a, b, c];
                    if g1.eval(&p) == 0 && g2.eval(&p) == 0 {
                        found += 1;
                        assert_eq!(r.eval(&[1, a, b]), 0);
                    }
                }
            }
        }
        assert!(found > 0);
    }
}
