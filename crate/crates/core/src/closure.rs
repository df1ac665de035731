//! Integral closure and Briançon–Skoda containments for monomial ideals,
//! in a polynomial ring and in the semigroup ring of a monomial curve.

mod lp;
mod monomial;
mod semigroup;

pub use monomial::{bs_containment, bs_verify_monomial, BsMonomialReport, MonomialIdeal, BOX_CAP};
pub use semigroup::{
    enumerate_ideals, germ_bs_exponent, germ_closure_member, germ_ideal_member, huneke_mu,
    ExponentMode, GermExponent, HunekeSearch, NumericalSemigroup, SemigroupIdeal, SEARCH_CAP,
};
