//! Arithmetic, Fourier analysis, and function-space norms on quantum tori.
//!
//! The algebra is the span of twisted monomials `U^m` over a skew-symmetric
//! deformation matrix θ. On top of the exact polynomial arithmetic the
//! crate provides Fourier multipliers (derivations, potentials, semigroups,
//! differences), a dyadic Littlewood-Paley decomposition, noncommutative
//! L_p norms via truncated matrix representations and normalized Schatten
//! norms, Sobolev/Besov/Triebel-Lizorkin norm computers with their
//! semigroup and difference characterizations, moduli of smoothness and
//! K-functionals, and a randomized verification harness for the named
//! inequality and equivalence suites.

pub mod algebra;
pub mod error;
pub mod io;
pub mod linalg;
pub mod littlewood_paley;
pub mod matrix_rep;
pub mod multipliers;

pub use algebra::{linear_combine, MultiIndex, QElement, ThetaMatrix};
pub use error::{Error, Result};
