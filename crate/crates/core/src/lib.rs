pub mod acceptance;
pub mod error;
pub mod experiments;
pub mod functions;
pub mod kronfun;
pub mod linalg;
pub mod operators;
pub mod poles;
pub mod quadrature;
pub mod rk;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/functions.md")]
    mod functions {}
    #[doc = include_str!("../../../book/src/poles.md")]
    mod poles {}
    #[doc = include_str!("../../../book/src/rational-krylov.md")]
    mod rational_krylov {}
    #[doc = include_str!("../../../book/src/kronecker.md")]
    mod kronecker {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
