//! Gröbner bases, normal forms and the ideal operations built on them.

mod engine;
mod ideal;

pub use ideal::{
    divide, groebner_basis, ideal_combine, ideal_member, ideal_power, krull_dimension, normal_form,
    CombineKind, GroebnerBasis, Ideal,
};

pub(crate) use engine::{buchberger, reduce, ModMono, ModVec, TermOrder};
