//! Mixed Cayley graphs over finite abelian groups: exact Hermitian spectra
//! from group characters, and integrality decided two ways.
//!
//! A mixed Cayley graph on `Γ = Z_{n_1} x ... x Z_{n_k}` with symbol set `S`
//! has an undirected edge `{a, b}` when `b - a` lies in the symmetric part of
//! `S` and an arc `a -> b` when `b - a` lies in the skew part. This crate
//!
//! * computes every Hermitian eigenvalue exactly as a cyclotomic integer
//!   ([`spectrum::gamma_spectrum`]) and independently as floats from a
//!   Jacobi eigensolver ([`spectrum::numeric_spectrum`]);
//! * decides integrality structurally from the symbol set alone
//!   ([`integrality::is_integral`]): the symmetric part must be a union of
//!   atoms and the skew part a skew-symmetric union of mod-4 classes;
//! * cross-validates the two verdicts ([`integrality::cross_validate`]).
//!
//! Exact arithmetic is generic over the coefficient type (see
//! [`scalar::Coeff`]); the aliases below fix it to `i64` and the numeric
//! side to `f64`.

pub mod classes;
pub mod cyclotomic;
pub mod group;
pub mod integrality;
pub mod scalar;
pub mod spectrum;

pub use classes::{ClassDecomposition, SymbolSet};
pub use group::{parse_group_spec, GroupElement, GroupError, GroupSpec};
pub use integrality::{IntegralityVerdict, Method};

/// Cyclotomic integer with `i64` coefficients.
pub type CycInt = cyclotomic::Cyclotomic<i64>;
/// Reduction context for [`CycInt`].
pub type CycRing = cyclotomic::CyclotomicRing<i64>;
/// Polynomial with Gaussian-integer (`i64`) coefficients.
pub type CycPoly = cyclotomic::GaussPoly<i64>;
/// Exact spectrum with `i64` coefficients.
pub type ExactSpectrum = spectrum::ExactSpectrum<i64>;
/// Exact spectral engine with `i64` coefficients.
pub type SpectrumContext = spectrum::SpectrumContext<i64>;

/// Size guardrails for the dense and enumerative paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order accepted by dense `n x n` operations.
    pub max_dense_order: u64,
    /// Largest group order accepted by integral-set enumeration.
    pub max_enumeration_order: u64,
    /// Largest number of symbol sets enumeration will materialize.
    pub max_enumerated_sets: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_dense_order: 4096,
            max_enumeration_order: 64,
            max_enumerated_sets: 1 << 20,
        }
    }
}

impl Limits {
    pub fn check_dense(&self, g: &GroupSpec) -> Result<(), GroupError> {
        if g.order() > self.max_dense_order {
            return Err(GroupError::TooLarge {
                order: g.order(),
                limit: self.max_dense_order,
            });
        }
        Ok(())
    }

    pub fn check_enumeration(&self, g: &GroupSpec) -> Result<(), GroupError> {
        if g.order() > self.max_enumeration_order {
            return Err(GroupError::TooLarge {
                order: g.order(),
                limit: self.max_enumeration_order,
            });
        }
        Ok(())
    }
}
