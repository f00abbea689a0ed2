//! Conversion between dual (evaluation) vectors and polynomial coefficients.
//!
//! A sextic `Σ a_i L_i^6` is stored as `Φ = Σ a_i v6(P_i)`; its polynomial
//! coefficient at `x^α` is `(6!/α!) Φ_α`.

use super::monomial::{basis, multinomial};
use crate::error::{Error, Result};
use crate::linalg::Field;

fn check_characteristic<F: Field>(field: &F, d: usize) -> Result<()> {
    let p = field.characteristic();
    if p != 0 && p <= d as u64 {
        return Err(Error::Input(format!(
            "dual/polynomial conversion in degree {d} needs characteristic 0 or above {d}, got {p}"
        )));
    }
    Ok(())
}

pub fn dual_to_polynomial<F: Field>(field: &F, nvars: usize, d: usize, phi: &[F::Elem]) -> Result<Vec<F::Elem>> {
    check_characteristic(field, d)?;
    let b = basis(nvars, d);
    assert_eq!(phi.len(), b.len());
    Ok(b.exponents()
        .iter()
        .zip(phi)
        .map(|(e, x)| field.mul(x, &field.from_i64(multinomial(e) as i64)))
        .collect())
}

pub fn polynomial_to_dual<F: Field>(field: &F, nvars: usize, d: usize, coeffs: &[F::Elem]) -> Result<Vec<F::Elem>> {
    check_characteristic(field, d)?;
    let b = basis(nvars, d);
    assert_eq!(coeffs.len(), b.len());
    Ok(b.exponents()
        .iter()
        .zip(coeffs)
        .map(|(e, x)| {
            let m = field.from_i64(multinomial(e) as i64);
            field.div(x, &m).expect("multinomial is a unit")
        })
        .collect())
}
