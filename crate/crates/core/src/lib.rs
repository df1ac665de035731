pub mod closure;
pub mod error;
pub mod groebner;
pub mod loja;
pub mod poly;
pub mod resolution;
pub mod session;
pub mod strata;

pub use error::{Budget, Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/resolutions.md")]
    mod resolutions {}
    #[doc = include_str!("../../../book/src/strata.md")]
    mod strata {}
    #[doc = include_str!("../../../book/src/closure.md")]
    mod closure {}
    #[doc = include_str!("../../../book/src/semigroups.md")]
    mod semigroups {}
    #[doc = include_str!("../../../book/src/lojasiewicz.md")]
    mod lojasiewicz {}
    #[doc = include_str!("../../../book/src/sessions.md")]
    mod sessions {}
}
