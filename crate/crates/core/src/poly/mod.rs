//! The graded ring K[x0, x1, x2, x3] and its ternary counterpart.

pub mod bivariate;
pub mod dual;
pub mod form;
pub mod monomial;
pub mod resultant;

pub use dual::{dual_to_polynomial, polynomial_to_dual};
pub use form::{multiples_matrix, multiples_piece, pullback_by_product, veronese, Form};
pub use monomial::{basis, n_quaternary, n_ternary, Exponent, MonomialBasis};
pub use resultant::resultant_x3;
