//! Exact sparse multivariate polynomials over the rationals.
//!
//! A [`RingContext`] fixes the variables, their quasi-homogeneous weights and
//! the monomial order; a [`Polynomial`] is a sorted list of terms in that ring.

mod monomial;
mod parse;
mod polynomial;

pub use monomial::{cmp_monomials, ExponentVector, MonomialOrder, RingContext};
pub use parse::parse_rational;
pub use polynomial::{int, poly_arith, weighted_degree_info, ArithKind, Coeff, Polynomial};

pub(crate) use polynomial::{format_coeff, format_monomial, same_ring};
