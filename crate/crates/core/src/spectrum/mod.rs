//! Hermitian spectra of mixed Cayley graphs, computed two independent ways.
//!
//! The exact engine uses the characters `ψ_α`: the eigenvalue attached to
//! `α` is `γ_α = λ_α + μ_α` with
//!
//! ```text
//! λ_α = Σ_{s ∈ S \ S̄} ψ_α(s)        μ_α = i Σ_{s ∈ S̄} (ψ_α(s) - ψ_α(-s))
//! ```
//!
//! evaluated in `Z[w_M]`. The numeric engine diagonalizes the adjacency
//! matrix directly and never touches characters; the two serve as each
//! other's oracle.

mod jacobi;
mod matrix;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use jacobi::{symmetric_eigenvalues, JacobiOptions, NoConvergence};
pub use matrix::{hermitian_matrix, Entry, HermitianMatrix, MatrixError};

use crate::classes::SymbolSet;
use crate::cyclotomic::{character_exponent, CycError, Cyclotomic, CyclotomicRing};
use crate::group::{GroupElement, GroupError, GroupSpec};
use crate::scalar::{coeff_from_i64, Coeff, Real};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cyclotomic(#[from] CycError),
    #[error("symbol set is not closed under negation")]
    NotSymmetric,
    #[error("symbol set is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("symbol set belongs to {found}, engine is for {expected}")]
    GroupMismatch { expected: String, found: String },
    #[error("Jacobi iteration did not converge after {} sweeps (off-diagonal norm {:e})", .0.sweeps, .0.off_norm)]
    NoConvergence(NoConvergence),
    #[error("embedded eigenvalues {0} and {1} do not pair up")]
    PairingMismatch(f64, f64),
}

/// One eigenvalue of the exact spectrum, indexed by its character.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry<T> {
    pub alpha: GroupElement,
    pub lambda: Cyclotomic<T>,
    pub mu: Cyclotomic<T>,
    pub gamma: Cyclotomic<T>,
    pub gamma_integer: Option<T>,
}

/// All `n` eigenvalues, one per `α`, in group enumeration order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactSpectrum<T> {
    pub group: GroupSpec,
    pub ambient_order: u64,
    pub entries: Vec<SpectrumEntry<T>>,
}

impl<T: Coeff> ExactSpectrum<T> {
    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.gamma_integer.is_some())
    }

    /// The eigenvalues evaluated numerically, ascending.
    pub fn numeric_values<F: Real>(&self) -> Vec<F> {
        let mut v: Vec<F> = self.entries.iter().map(|e| e.gamma.to_complex::<F>().re).collect();
        v.sort_by(|a, b| a.partial_cmp(b).expect("NaN eigenvalue"));
        v
    }
}

/// First `α` whose eigenvalue is not an integer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralWitness<T> {
    pub alpha: GroupElement,
    pub gamma: Cyclotomic<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralVerdict<T> {
    pub integral: bool,
    pub witness: Option<SpectralWitness<T>>,
}

/// Exact character-sum engine for one group: owns the reduction context for
/// `M = lcm(exp(Γ), 4)`. Immutable after construction.
#[derive(Debug, Clone)]
pub struct SpectrumContext<T> {
    group: GroupSpec,
    ring: CyclotomicRing<T>,
}

impl<T: Coeff> SpectrumContext<T> {
    pub fn new(group: &GroupSpec, limits: &Limits) -> Result<Self, SpectrumError> {
        limits.check_dense(group)?;
        Ok(Self {
            group: group.clone(),
            ring: CyclotomicRing::for_group(group)?,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn ring(&self) -> &CyclotomicRing<T> {
        &self.ring
    }

    fn check_group(&self, set: &SymbolSet) -> Result<(), SpectrumError> {
        if set.group() != &self.group {
            return Err(SpectrumError::GroupMismatch {
                expected: self.group.to_string(),
                found: set.group().to_string(),
            });
        }
        Ok(())
    }

    fn add_lambda_counts(&self, counts: &mut [i64], sym: &SymbolSet, alpha: &GroupElement) {
        for s in sym.iter() {
            counts[character_exponent(&self.group, alpha, s) as usize] += 1;
        }
    }

    /// `i(ψ(s) - ψ(-s)) = w^{e + M/4} - w^{-e + M/4}`.
    fn add_mu_counts(&self, counts: &mut [i64], skew: &SymbolSet, alpha: &GroupElement) {
        let m = self.ring.order();
        let quarter = m / 4;
        for s in skew.iter() {
            let e = character_exponent(&self.group, alpha, s);
            counts[((e + quarter) % m) as usize] += 1;
            counts[((m - e + quarter) % m) as usize] -= 1;
        }
    }

    fn collect(&self, counts: &[i64]) -> Cyclotomic<T> {
        let counts: Vec<T> = counts.iter().map(|&c| coeff_from_i64(c)).collect();
        self.ring.from_exponent_counts(&counts)
    }

    fn zero_counts(&self) -> Vec<i64> {
        vec![0; self.ring.order() as usize]
    }

    /// `λ_α = Σ_{s ∈ S} ψ_α(s)` for a symmetric `S`.
    pub fn lambda_alpha(&self, sym: &SymbolSet, alpha: &GroupElement) -> Result<Cyclotomic<T>, SpectrumError> {
        self.check_group(sym)?;
        self.group.check(alpha)?;
        if !sym.is_symmetric() {
            return Err(SpectrumError::NotSymmetric);
        }
        let mut counts = self.zero_counts();
        self.add_lambda_counts(&mut counts, sym, alpha);
        Ok(self.collect(&counts))
    }

    /// `μ_α = i Σ_{s ∈ S} (ψ_α(s) - ψ_α(-s))` for a skew-symmetric `S`.
    pub fn mu_alpha(&self, skew: &SymbolSet, alpha: &GroupElement) -> Result<Cyclotomic<T>, SpectrumError> {
        self.check_group(skew)?;
        self.group.check(alpha)?;
        if !skew.is_skew_symmetric() {
            return Err(SpectrumError::NotSkewSymmetric);
        }
        let mut counts = self.zero_counts();
        self.add_mu_counts(&mut counts, skew, alpha);
        Ok(self.collect(&counts))
    }

    /// `i Σ_{s ∈ A} ψ_α(s) - i Σ_{s ∈ B} ψ_α(s)` for arbitrary element sets.
    /// With `A = M_1(x)`, `B = M_3(x)` this is the paired M-set sum.
    pub fn paired_sum<'a, I, J>(&self, plus: I, minus: J, alpha: &GroupElement) -> Cyclotomic<T>
    where
        I: IntoIterator<Item = &'a GroupElement>,
        J: IntoIterator<Item = &'a GroupElement>,
    {
        let m = self.ring.order();
        let quarter = m / 4;
        let mut counts = self.zero_counts();
        for s in plus {
            counts[((character_exponent(&self.group, alpha, s) + quarter) % m) as usize] += 1;
        }
        for s in minus {
            counts[((character_exponent(&self.group, alpha, s) + quarter) % m) as usize] -= 1;
        }
        self.collect(&counts)
    }

    /// `ψ_α(x)` as a ring element.
    pub fn character(&self, alpha: &GroupElement, x: &GroupElement) -> Cyclotomic<T> {
        self.ring.root_power(character_exponent(&self.group, alpha, x) as i64)
    }

    fn entry(&self, sym: &SymbolSet, skew: &SymbolSet, alpha: GroupElement) -> SpectrumEntry<T> {
        let mut lc = self.zero_counts();
        self.add_lambda_counts(&mut lc, sym, &alpha);
        let mut mc = self.zero_counts();
        self.add_mu_counts(&mut mc, skew, &alpha);
        let lambda = self.collect(&lc);
        let mu = self.collect(&mc);
        let gamma = self.ring.add(&lambda, &mu).expect("same ring");
        let gamma_integer = gamma.as_integer();
        SpectrumEntry {
            alpha,
            lambda,
            mu,
            gamma,
            gamma_integer,
        }
    }

    /// `γ_α = λ_α(S \ S̄) + μ_α(S̄)` for every `α`.
    pub fn gamma_spectrum(&self, set: &SymbolSet) -> Result<ExactSpectrum<T>, SpectrumError> {
        self.check_group(set)?;
        let (sym, skew) = set.skew_split();
        let entries = self
            .group
            .elements()
            .map(|alpha| self.entry(&sym, &skew, alpha))
            .collect();
        Ok(self.wrap(entries))
    }

    /// Same as [`gamma_spectrum`](Self::gamma_spectrum), spreading the
    /// characters over the rayon pool.
    pub fn par_gamma_spectrum(&self, set: &SymbolSet) -> Result<ExactSpectrum<T>, SpectrumError> {
        self.check_group(set)?;
        let (sym, skew) = set.skew_split();
        let entries = (0..self.group.order() as usize)
            .into_par_iter()
            .map(|i| self.entry(&sym, &skew, self.group.element_at(i)))
            .collect();
        Ok(self.wrap(entries))
    }

    fn wrap(&self, entries: Vec<SpectrumEntry<T>>) -> ExactSpectrum<T> {
        ExactSpectrum {
            group: self.group.clone(),
            ambient_order: self.ring.order(),
            entries,
        }
    }

    /// Exact integrality: every `γ_α` must reduce to an integer. Stops at
    /// the first failure.
    pub fn is_integral_spectral(&self, set: &SymbolSet) -> Result<SpectralVerdict<T>, SpectrumError> {
        self.check_group(set)?;
        let mut counts = self.zero_counts();
        for alpha in self.group.elements() {
            counts.iter_mut().for_each(|c| *c = 0);
            for s in set.iter() {
                let e = character_exponent(&self.group, &alpha, s);
                // symmetric s adds ψ_α(s); skew s adds i(ψ_α(s) - ψ_α(-s))
                if set.contains(&self.group.negate_unchecked(s)) {
                    counts[e as usize] += 1;
                } else {
                    let m = self.ring.order();
                    let quarter = m / 4;
                    counts[((e + quarter) % m) as usize] += 1;
                    counts[((m - e + quarter) % m) as usize] -= 1;
                }
            }
            let gamma = self.collect(&counts);
            if gamma.as_integer().is_none() {
                return Ok(SpectralVerdict {
                    integral: false,
                    witness: Some(SpectralWitness { alpha, gamma }),
                });
            }
        }
        Ok(SpectralVerdict {
            integral: true,
            witness: None,
        })
    }
}

pub fn lambda_alpha(sym: &SymbolSet, alpha: &GroupElement) -> Result<Cyclotomic<i64>, SpectrumError> {
    SpectrumContext::new(sym.group(), &Limits::default())?.lambda_alpha(sym, alpha)
}

pub fn mu_alpha(skew: &SymbolSet, alpha: &GroupElement) -> Result<Cyclotomic<i64>, SpectrumError> {
    SpectrumContext::new(skew.group(), &Limits::default())?.mu_alpha(skew, alpha)
}

pub fn gamma_spectrum(set: &SymbolSet, limits: &Limits) -> Result<ExactSpectrum<i64>, SpectrumError> {
    SpectrumContext::new(set.group(), limits)?.gamma_spectrum(set)
}

pub fn is_integral_spectral(set: &SymbolSet, limits: &Limits) -> Result<SpectralVerdict<i64>, SpectrumError> {
    SpectrumContext::new(set.group(), limits)?.is_integral_spectral(set)
}

/// Eigenvalues of `H` via Jacobi on the real embedding, ascending.
pub fn numeric_spectrum(h: &HermitianMatrix) -> Result<Vec<f64>, SpectrumError> {
    numeric_spectrum_with(h, &JacobiOptions::default())
}

/// Generic form of [`numeric_spectrum`]. Every eigenvalue of `H` appears
/// twice in the embedding; adjacent sorted pairs are checked and averaged.
pub fn numeric_spectrum_with<F: Real>(h: &HermitianMatrix, opts: &JacobiOptions<F>) -> Result<Vec<F>, SpectrumError> {
    let n = h.dim();
    let doubled = symmetric_eigenvalues(h.real_embedding::<F>(), 2 * n, opts).map_err(SpectrumError::NoConvergence)?;
    let pair_tol = opts.tolerance * F::from_f64(1e4).unwrap() * F::from_usize(n.max(1)).unwrap();
    doubled
        .chunks(2)
        .map(|pair| {
            if (pair[0] - pair[1]).abs() > pair_tol {
                Err(SpectrumError::PairingMismatch(
                    pair[0].to_f64().unwrap_or(f64::NAN),
                    pair[1].to_f64().unwrap_or(f64::NAN),
                ))
            } else {
                Ok((pair[0] + pair[1]) / F::from_f64(2.0).unwrap())
            }
        })
        .collect()
}

/// Largest absolute difference between two ascending multisets, or `None`
/// if their sizes differ.
pub fn max_multiset_gap<F: Real>(a: &[F], b: &[F]) -> Option<F> {
    (a.len() == b.len()).then(|| a.iter().zip(b).fold(F::zero(), |m, (x, y)| m.max((*x - *y).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group_spec;

    fn setup(group: &str, set: &str) -> (SpectrumContext<i64>, SymbolSet) {
        let g = parse_group_spec(group).unwrap();
        (
            SpectrumContext::new(&g, &Limits::default()).unwrap(),
            SymbolSet::parse(&g, set).unwrap(),
        )
    }

    fn gammas(group: &str, set: &str) -> Vec<Option<i64>> {
        let (ctx, s) = setup(group, set);
        ctx.gamma_spectrum(&s)
            .unwrap()
            .entries
            .into_iter()
            .map(|e| e.gamma_integer)
            .collect()
    }

    #[test]
    fn lambda_examples() {
        let (ctx, s) = setup("Z4", "2");
        let g = ctx.group().clone();
        let a = |c| g.element(&[c]).unwrap();
        assert_eq!(ctx.lambda_alpha(&s, &a(1)).unwrap().as_integer(), Some(-1));
        let (_, s13) = setup("Z4", "1,3");
        assert_eq!(ctx.lambda_alpha(&s13, &a(1)).unwrap().as_integer(), Some(0));
        assert_eq!(ctx.lambda_alpha(&s13, &a(0)).unwrap().as_integer(), Some(2));
        let (_, s1) = setup("Z4", "1");
        assert_eq!(ctx.lambda_alpha(&s1, &a(1)), Err(SpectrumError::NotSymmetric));
    }

    #[test]
    fn mu_examples() {
        let (ctx, s) = setup("Z4", "1");
        let g = ctx.group().clone();
        let a = |c| g.element(&[c]).unwrap();
        assert_eq!(ctx.mu_alpha(&s, &a(1)).unwrap().as_integer(), Some(-2));
        assert_eq!(ctx.mu_alpha(&s, &a(0)).unwrap().as_integer(), Some(0));
        let (_, s13) = setup("Z4", "1,3");
        assert_eq!(ctx.mu_alpha(&s13, &a(1)), Err(SpectrumError::NotSkewSymmetric));

        let (ctx5, s5) = setup("Z5", "1");
        assert_eq!(ctx5.ring().order(), 20);
        let mu = ctx5.mu_alpha(&s5, &s5.group().element(&[1]).unwrap()).unwrap();
        assert_eq!(mu.as_integer(), None);
        let want = -2.0 * (2.0 * std::f64::consts::PI / 5.0).sin();
        assert!((mu.to_complex::<f64>().re - want).abs() < 1e-12);
        assert!(mu.to_complex::<f64>().im.abs() < 1e-12);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gammas("Z4", "1,2"), [Some(1), Some(-3), Some(1), Some(1)]);
        assert_eq!(gammas("Z4", "1,3"), [Some(2), Some(0), Some(-2), Some(0)]);
        assert!(gammas("Z2xZ3", "").iter().all(|g| *g == Some(0)));
    }

    #[test]
    fn parallel_matches_sequential() {
        let (ctx, s) = setup("Z2xZ8", "0,1;1,3;1,4;0,4");
        assert_eq!(ctx.gamma_spectrum(&s).unwrap(), ctx.par_gamma_spectrum(&s).unwrap());
    }

    #[test]
    fn numeric_examples() {
        let limits = Limits::default();
        let (_, s) = setup("Z4", "1");
        let e = numeric_spectrum(&hermitian_matrix(&s, &limits).unwrap()).unwrap();
        for (x, y) in e.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        let zero = numeric_spectrum(&HermitianMatrix::zeros(5)).unwrap();
        assert!(zero.iter().all(|x| x.abs() < 1e-15));

        let (_, s) = setup("Z5", "1");
        let e = numeric_spectrum(&hermitian_matrix(&s, &limits).unwrap()).unwrap();
        let tau = std::f64::consts::TAU;
        let mut want = vec![0.0];
        for k in 1..5 {
            want.push(-2.0 * (tau * k as f64 / 5.0).sin());
        }
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(max_multiset_gap(&e, &want).unwrap() < 1e-9);
    }

    #[test]
    fn degenerate_spectrum_converges() {
        // eigenvalues with multiplicity up to 8, doubled by the embedding
        let (ctx, s) = setup(
            "Z2xZ4xZ4",
            "0,1,0;0,1,2;0,2,0;0,3,1;0,3,3;1,0,2;1,0,3;1,1,1;1,2,0;1,2,2;1,3,0;1,3,1",
        );
        let e = numeric_spectrum(&hermitian_matrix(&s, &Limits::default()).unwrap()).unwrap();
        let exact = ctx.gamma_spectrum(&s).unwrap();
        assert!(exact.is_integral());
        assert!(max_multiset_gap(&e, &exact.numeric_values::<f64>()).unwrap() < 1e-9);
    }

    #[test]
    fn spectral_integrality_examples() {
        let limits = Limits::default();
        let (_, s) = setup("Z4", "1,2");
        assert!(is_integral_spectral(&s, &limits).unwrap().integral);
        let (_, s) = setup("Z5", "1");
        let v = is_integral_spectral(&s, &limits).unwrap();
        assert!(!v.integral);
        assert_eq!(v.witness.unwrap().alpha.to_string(), "1");
        let (_, s) = setup("Z6", "1,5");
        assert!(is_integral_spectral(&s, &limits).unwrap().integral);
        let mut cycle = gammas("Z6", "1,5").into_iter().map(Option::unwrap).collect::<Vec<_>>();
        cycle.sort();
        assert_eq!(cycle, [-2, -1, -1, 1, 1, 2]);
    }

    #[test]
    fn group_mismatch_is_rejected() {
        let (ctx, _) = setup("Z4", "");
        let (_, other) = setup("Z8", "1");
        assert!(matches!(
            ctx.gamma_spectrum(&other),
            Err(SpectrumError::GroupMismatch { .. })
        ));
    }

    #[test]
    fn dense_limit_applies() {
        let g = parse_group_spec("Z64").unwrap();
        let limits = Limits {
            max_dense_order: 32,
            ..Limits::default()
        };
        assert!(matches!(
            SpectrumContext::<i64>::new(&g, &limits),
            Err(SpectrumError::Group(GroupError::TooLarge { .. }))
        ));
    }
}
