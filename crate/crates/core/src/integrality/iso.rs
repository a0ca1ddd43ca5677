//! Transport of symbol sets along explicit group isomorphisms, used to check
//! that verdicts and spectra do not depend on the chosen presentation.

use num_integer::Integer;
use rand::Rng;
use serde::Serialize;

use super::{is_integral, IntegralityError};
use crate::classes::SymbolSet;
use crate::cyclotomic::Cyclotomic;
use crate::group::{GroupElement, GroupSpec};
use crate::scalar::Coeff;
use crate::spectrum::SpectrumContext;
use crate::Limits;

use super::validate::sample_rng;

/// A verified isomorphism given by its full image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupIso {
    source: GroupSpec,
    target: GroupSpec,
    images: Vec<GroupElement>,
}

impl GroupIso {
    /// Tabulates `f` and checks it: bijectivity exhaustively, the
    /// homomorphism property on every pair for small groups and on 4096
    /// seeded random pairs otherwise.
    pub fn from_fn<F>(source: &GroupSpec, target: &GroupSpec, f: F) -> Result<Self, IntegralityError>
    where
        F: Fn(&GroupElement) -> GroupElement,
    {
        let images: Vec<GroupElement> = source.elements().map(|x| f(&x)).collect();
        let mut hit = vec![false; target.order() as usize];
        for y in &images {
            target.check(y)?;
            let slot = &mut hit[target.index_of(y)];
            if *slot {
                return Err(IntegralityError::NotBijective(y.clone()));
            }
            *slot = true;
        }
        if let Some(missed) = hit.iter().position(|&h| !h) {
            return Err(IntegralityError::NotBijective(target.element_at(missed)));
        }
        let iso = Self {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        iso.check_homomorphism()?;
        Ok(iso)
    }

    fn check_homomorphism(&self) -> Result<(), IntegralityError> {
        let n = self.source.order() as usize;
        let check = |i: usize, j: usize| {
            let (x, y) = (self.source.element_at(i), self.source.element_at(j));
            let lhs = self.apply(&self.source.add_unchecked(&x, &y));
            let rhs = self.target.add_unchecked(&self.images[i], &self.images[j]);
            if lhs == rhs {
                Ok(())
            } else {
                Err(IntegralityError::NotHomomorphism(x, y))
            }
        };
        if n * n <= 1 << 16 {
            for i in 0..n {
                for j in 0..n {
                    check(i, j)?;
                }
            }
        } else {
            let mut rng = sample_rng(0x150, 0);
            for _ in 0..4096 {
                check(rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn identity(g: &GroupSpec) -> Self {
        Self {
            source: g.clone(),
            target: g.clone(),
            images: g.elements().collect(),
        }
    }

    /// Built-in maps: the identity, and the Chinese-remainder maps between
    /// `Z_{ab}` and `Z_a x Z_b` for coprime `a`, `b` (either direction).
    pub fn crt(source: &GroupSpec, target: &GroupSpec) -> Result<Self, IntegralityError> {
        if source == target {
            return Ok(Self::identity(source));
        }
        let split = |cyclic: &GroupSpec, pair: &GroupSpec| {
            let (&[n], &[a, b]) = (cyclic.moduli(), pair.moduli()) else {
                return false;
            };
            a.gcd(&b) == 1 && a * b == n
        };
        let none = || IntegralityError::NoBuiltinIsomorphism(source.to_string(), target.to_string());
        if split(source, target) {
            let (a, b) = (target.moduli()[0], target.moduli()[1]);
            Self::from_fn(source, target, |x| {
                let v = x.coords()[0];
                GroupElement::new(vec![v % a, v % b])
            })
        } else if split(target, source) {
            Ok(Self::crt(target, source)?.inverse())
        } else {
            Err(none())
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![GroupElement::new(Vec::new()); self.images.len()];
        for (i, y) in self.images.iter().enumerate() {
            images[self.target.index_of(y)] = self.source.element_at(i);
        }
        Self {
            source: self.target.clone(),
            target: self.source.clone(),
            images,
        }
    }

    pub fn source(&self) -> &GroupSpec {
        &self.source
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        self.images[self.source.index_of(x)].clone()
    }

    pub fn apply_set(&self, set: &SymbolSet) -> SymbolSet {
        SymbolSet::from_trusted(&self.target, set.iter().map(|x| self.apply(x)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoInconsistency {
    pub set: SymbolSet,
    pub image: SymbolSet,
    pub source_verdict: bool,
    pub target_verdict: bool,
    pub spectra_match: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoReport {
    pub source: GroupSpec,
    pub target: GroupSpec,
    pub total: u64,
    pub consistent: u64,
    pub inconsistencies: Vec<IsoInconsistency>,
}

impl IsoReport {
    pub fn is_consistent(&self) -> bool {
        self.inconsistencies.is_empty()
    }
}

/// Multiset equality by greedy matching; values compare exactly.
fn same_multiset<T: Coeff>(a: &[Cyclotomic<T>], b: &[Cyclotomic<T>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| match (0..b.len()).find(|&j| !used[j] && b[j] == *x) {
        Some(j) => {
            used[j] = true;
            true
        }
        None => false,
    })
}

/// Compares verdicts and exact spectra of each set and its image under
/// `iso`. Isomorphic groups share an exponent, so both spectra live in the
/// same cyclotomic ring and are compared exactly.
pub fn isomorphism_consistency<T: Coeff>(
    iso: &GroupIso,
    sets: &[SymbolSet],
    limits: &Limits,
) -> Result<IsoReport, IntegralityError> {
    let source_ctx = SpectrumContext::<T>::new(iso.source(), limits)?;
    let target_ctx = SpectrumContext::<T>::new(iso.target(), limits)?;
    let mut report = IsoReport {
        source: iso.source().clone(),
        target: iso.target().clone(),
        total: 0,
        consistent: 0,
        inconsistencies: Vec::new(),
    };
    for set in sets {
        let image = iso.apply_set(set);
        let source_verdict = is_integral(set).verdict;
        let target_verdict = is_integral(&image).verdict;
        let gammas = |ctx: &SpectrumContext<T>, s: &SymbolSet| -> Result<Vec<Cyclotomic<T>>, IntegralityError> {
            Ok(ctx.gamma_spectrum(s)?.entries.into_iter().map(|e| e.gamma).collect())
        };
        let spectra_match = same_multiset(&gammas(&source_ctx, set)?, &gammas(&target_ctx, &image)?);
        report.total += 1;
        if source_verdict == target_verdict && spectra_match {
            report.consistent += 1;
        } else {
            report.inconsistencies.push(IsoInconsistency {
                set: set.clone(),
                image,
                source_verdict,
                target_verdict,
                spectra_match,
            });
        }
    }
    Ok(report)
}

/// `count` seeded random symbol sets of `g`.
pub fn random_sets(g: &GroupSpec, count: u64, seed: u64) -> Vec<SymbolSet> {
    (0..count)
        .map(|i| super::random_symbol_set(g, &mut sample_rng(seed, i)))
        .collect()
}
