//! Integrality of mixed Cayley graphs decided from the symbol set.
//!
//! `Cay(Γ, S)` is integral exactly when its symmetric part `S \ S̄` is a
//! union of atoms and its skew part `S̄` is a skew-symmetric union of classes
//! `⟦x⟧`. [`is_integral`] checks this directly without computing any
//! eigenvalue; [`cross_validate`] compares it against the exact spectrum.

mod iso;
mod validate;

use serde::Serialize;
use thiserror::Error;

pub use iso::{isomorphism_consistency, random_sets, GroupIso, IsoInconsistency, IsoReport};
pub use validate::{
    cross_validate, random_symbol_set, CrossValidateOptions, CrossValidationReport, Disagreement, NumericMismatch,
    SampleMode, NUMERIC_TOLERANCE,
};

use crate::classes::{
    all_atoms, approx_class_unchecked, in_boolean_algebra, in_d_gamma, ClassDecomposition, SymbolSet,
};
use crate::group::{GroupElement, GroupError, GroupSpec};
use crate::scalar::Coeff;
use crate::spectrum::{SpectralWitness, SpectrumContext, SpectrumError};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegralityError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("an oriented Cayley graph needs a skew-symmetric symbol set")]
    NotSkewSymmetric,
    #[error("{count} integral symbol sets exceed the enumeration limit {limit}")]
    TooManySets { count: u128, limit: u64 },
    #[error("exhaustive check needs {needed} samples but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("map is not a bijection: {0} has two preimages")]
    NotBijective(GroupElement),
    #[error("map is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(GroupElement, GroupElement),
    #[error("no built-in isomorphism from {0} to {1}")]
    NoBuiltinIsomorphism(String, String),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Structural,
    Spectral,
    Both,
}

/// The structural and spectral verdicts differ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictMismatch<T> {
    pub structural: bool,
    pub spectral: bool,
    pub spectral_witness: Option<SpectralWitness<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralityVerdict<T = i64> {
    pub verdict: bool,
    pub symmetric_part_status: ClassDecomposition,
    pub skew_part_status: ClassDecomposition,
    pub method: Method,
    pub disagreement: Option<VerdictMismatch<T>>,
}

impl<T> IntegralityVerdict<T> {
    fn structural(symmetric_part_status: ClassDecomposition, skew_part_status: ClassDecomposition) -> Self {
        Self {
            verdict: symmetric_part_status.is_member() && skew_part_status.is_member(),
            symmetric_part_status,
            skew_part_status,
            method: Method::Structural,
            disagreement: None,
        }
    }
}

/// Structural verdict: `S \ S̄` must be a union of atoms and `S̄` a
/// skew-symmetric union of classes.
pub fn is_integral(set: &SymbolSet) -> IntegralityVerdict {
    let (sym, skew) = set.skew_split();
    IntegralityVerdict::structural(in_boolean_algebra(&sym), in_d_gamma(&skew))
}

/// Oriented case: `S` skew-symmetric, integral iff `S` is a union of
/// classes (only `∅` when the exponent is not divisible by 4).
pub fn oriented_is_integral(set: &SymbolSet) -> Result<IntegralityVerdict, IntegralityError> {
    if !set.is_skew_symmetric() {
        return Err(IntegralityError::NotSkewSymmetric);
    }
    let empty = SymbolSet::empty(set.group());
    Ok(IntegralityVerdict::structural(
        in_boolean_algebra(&empty),
        in_d_gamma(set),
    ))
}

/// Structural verdict confirmed by the exact spectral engine. A mismatch is
/// recorded in `disagreement` rather than raised.
pub fn verify_spectrally<T: Coeff>(
    set: &SymbolSet,
    ctx: &SpectrumContext<T>,
) -> Result<IntegralityVerdict<T>, IntegralityError> {
    let (sym, skew) = set.skew_split();
    let mut verdict = IntegralityVerdict::<T>::structural(in_boolean_algebra(&sym), in_d_gamma(&skew));
    let spectral = ctx.is_integral_spectral(set)?;
    verdict.method = Method::Both;
    if spectral.integral != verdict.verdict {
        verdict.disagreement = Some(VerdictMismatch {
            structural: verdict.verdict,
            spectral: spectral.integral,
            spectral_witness: spectral.witness,
        });
    }
    Ok(verdict)
}

/// Per-atom choices available to an integral symbol set.
struct AtomChoices {
    /// Atoms outside `Γ(4)`: in or out.
    plain: Vec<Vec<GroupElement>>,
    /// Atoms inside `Γ(4)`, as `(atom, ⟦x⟧, ⟦-x⟧)`: none, the whole atom
    /// (symmetric part), or one of the two classes (skew part).
    split: Vec<(Vec<GroupElement>, Vec<GroupElement>, Vec<GroupElement>)>,
}

fn atom_choices(g: &GroupSpec) -> AtomChoices {
    let mut plain = Vec::new();
    let mut split = Vec::new();
    for block in all_atoms(g) {
        let x = &block.representative;
        if x.is_identity() {
            continue;
        }
        if g.order_unchecked(x).is_multiple_of(4) {
            let pos: Vec<_> = approx_class_unchecked(g, x).into_iter().collect();
            let neg: Vec<_> = approx_class_unchecked(g, &g.negate_unchecked(x)).into_iter().collect();
            split.push((block.members, pos, neg));
        } else {
            plain.push(block.members);
        }
    }
    AtomChoices { plain, split }
}

/// Number of integral symbol sets of `g`: `2^a · 4^b` where `a` counts the
/// nonzero atoms outside `Γ(4)` and `b` those inside.
pub fn count_integral_sets(g: &GroupSpec) -> u128 {
    let c = atom_choices(g);
    let bits = c.plain.len() as u32 + 2 * c.split.len() as u32;
    1u128.checked_shl(bits).unwrap_or(u128::MAX)
}

/// Every integral symbol set of `g`, generated from the characterization
/// (not by filtering), ordered by size then lexicographically.
pub fn enumerate_integral_sets(
    g: &GroupSpec,
    limits: &Limits,
) -> Result<std::vec::IntoIter<SymbolSet>, IntegralityError> {
    limits.check_enumeration(g)?;
    let count = count_integral_sets(g);
    if count > limits.max_enumerated_sets as u128 {
        return Err(IntegralityError::TooManySets {
            count,
            limit: limits.max_enumerated_sets,
        });
    }
    let choices = atom_choices(g);
    let mut out = Vec::with_capacity(count as usize);
    let radix: Vec<usize> = std::iter::repeat_n(2, choices.plain.len())
        .chain(std::iter::repeat_n(4, choices.split.len()))
        .collect();
    let mut digits = vec![0usize; radix.len()];
    loop {
        let mut sym = Vec::new();
        let mut skew = Vec::new();
        for (atom, &d) in choices.plain.iter().zip(&digits) {
            if d == 1 {
                sym.extend(atom.iter().cloned());
            }
        }
        for ((atom, pos, neg), &d) in choices.split.iter().zip(&digits[choices.plain.len()..]) {
            match d {
                1 => sym.extend(atom.iter().cloned()),
                2 => skew.extend(pos.iter().cloned()),
                3 => skew.extend(neg.iter().cloned()),
                _ => {}
            }
        }
        let sym = SymbolSet::from_trusted(g, sym.into_iter().collect());
        let skew = SymbolSet::from_trusted(g, skew.into_iter().collect());
        let set = sym
            .disjoint_union(&skew)
            .expect("atom choices are disjoint by construction");
        let (sym_back, skew_back) = set.skew_split();
        assert!(
            sym_back == sym && skew_back == skew,
            "generated pair does not survive skew_split"
        );
        out.push(set);

        // mixed-radix increment
        let mut k = 0;
        while k < digits.len() {
            digits[k] += 1;
            if digits[k] < radix[k] {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
        if k == digits.len() {
            break;
        }
    }
    out.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.elements().iter().cmp(b.elements().iter()))
    });
    Ok(out.into_iter())
}
