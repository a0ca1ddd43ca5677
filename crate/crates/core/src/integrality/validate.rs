//! Structural vs spectral cross-validation, optionally with the numeric
//! eigensolver as a third opinion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{is_integral, IntegralityError};
use crate::classes::SymbolSet;
use crate::group::{GroupElement, GroupSpec};
use crate::scalar::Coeff;
use crate::spectrum::{hermitian_matrix, max_multiset_gap, numeric_spectrum, SpectralWitness, SpectrumContext};
use crate::Limits;

/// Absolute tolerance between the exact and numeric spectra.
pub const NUMERIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    /// All `2^(n-1)` symbol sets.
    Exhaustive,
    /// All skew-symmetric symbol sets (`3^p` for `p` pairs `{x, -x}`).
    ExhaustiveSkew,
    /// `budget` seeded random symbol sets, each element kept with
    /// probability 1/2.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossValidateOptions {
    pub mode: SampleMode,
    pub budget: u64,
    pub seed: u64,
    /// Also compare the exact spectrum with the Jacobi eigenvalues.
    pub numeric_oracle: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for CrossValidateOptions {
    fn default() -> Self {
        Self {
            mode: SampleMode::Random,
            budget: 500,
            seed: 0,
            numeric_oracle: false,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Disagreement<T> {
    pub sample: u64,
    pub set: SymbolSet,
    pub structural: bool,
    pub spectral: bool,
    pub structural_witness: Option<GroupElement>,
    pub spectral_witness: Option<SpectralWitness<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericMismatch {
    pub sample: u64,
    pub set: SymbolSet,
    /// Largest gap between the sorted spectra, or `None` on solver failure.
    pub gap: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidationReport<T> {
    pub group: GroupSpec,
    pub mode: SampleMode,
    pub seed: Option<u64>,
    pub total: u64,
    pub agreements: u64,
    pub integral: u64,
    pub numeric_checked: u64,
    pub max_numeric_gap: Option<f64>,
    pub disagreements: Vec<Disagreement<T>>,
    pub numeric_mismatches: Vec<NumericMismatch>,
}

impl<T> CrossValidationReport<T> {
    /// No disagreement and no numeric mismatch.
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.numeric_mismatches.is_empty()
    }
}

/// Each nonzero element kept independently with probability 1/2.
pub fn random_symbol_set<R: Rng>(g: &GroupSpec, rng: &mut R) -> SymbolSet {
    let elements = g.elements().skip(1).filter(|_| rng.gen_bool(0.5)).collect();
    SymbolSet::from_trusted(g, elements)
}

/// Deterministic per-sample generator: one ChaCha stream per index.
pub(crate) fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn subset_from_mask(g: &GroupSpec, nonzero: &[GroupElement], mask: u64) -> SymbolSet {
    let elements = nonzero
        .iter()
        .enumerate()
        .filter(|(j, _)| mask >> j & 1 == 1)
        .map(|(_, x)| x.clone())
        .collect();
    SymbolSet::from_trusted(g, elements)
}

/// Representatives `x` of the pairs `{x, -x}` with `x ≠ -x`.
fn skew_pairs(g: &GroupSpec) -> Vec<(GroupElement, GroupElement)> {
    g.elements()
        .skip(1)
        .filter_map(|x| {
            let neg = g.negate_unchecked(&x);
            (x < neg).then_some((x, neg))
        })
        .collect()
}

fn skew_set_from_index(g: &GroupSpec, pairs: &[(GroupElement, GroupElement)], mut index: u64) -> SymbolSet {
    let mut elements = std::collections::BTreeSet::new();
    for (x, neg) in pairs {
        match index % 3 {
            1 => {
                elements.insert(x.clone());
            }
            2 => {
                elements.insert(neg.clone());
            }
            _ => {}
        }
        index /= 3;
    }
    SymbolSet::from_trusted(g, elements)
}

enum Outcome<T> {
    Agree {
        integral: bool,
        gap: Option<f64>,
        numeric: Option<NumericMismatch>,
    },
    Disagree(Disagreement<T>, Option<NumericMismatch>),
}

fn check_sample<T: Coeff>(
    ctx: &SpectrumContext<T>,
    limits: &Limits,
    numeric_oracle: bool,
    sample: u64,
    set: SymbolSet,
) -> Result<Outcome<T>, IntegralityError> {
    let structural = is_integral(&set);
    let spectral = ctx.is_integral_spectral(&set)?;

    let (gap, numeric) = if numeric_oracle {
        let exact = ctx.gamma_spectrum(&set)?.numeric_values::<f64>();
        let h = hermitian_matrix(&set, limits)?;
        match numeric_spectrum(&h) {
            Ok(values) => {
                let gap = max_multiset_gap(&exact, &values).expect("both spectra have n values");
                let mismatch = (gap > NUMERIC_TOLERANCE).then(|| NumericMismatch {
                    sample,
                    set: set.clone(),
                    gap: Some(gap),
                    detail: format!("exact {exact:?} vs numeric {values:?}"),
                });
                (Some(gap), mismatch)
            }
            Err(e) => (
                None,
                Some(NumericMismatch {
                    sample,
                    set: set.clone(),
                    gap: None,
                    detail: e.to_string(),
                }),
            ),
        }
    } else {
        (None, None)
    };

    if structural.verdict == spectral.integral {
        return Ok(Outcome::Agree {
            integral: structural.verdict,
            gap,
            numeric,
        });
    }
    let structural_witness = structural
        .symmetric_part_status
        .witness()
        .or(structural.skew_part_status.witness())
        .cloned();
    Ok(Outcome::Disagree(
        Disagreement {
            sample,
            set,
            structural: structural.verdict,
            spectral: spectral.integral,
            structural_witness,
            spectral_witness: spectral.witness,
        },
        numeric,
    ))
}

/// Runs both integrality engines over a family of symbol sets and reports
/// every disagreement. Results are merged in sample order, so the report
/// does not depend on the worker count.
pub fn cross_validate<T: Coeff>(
    g: &GroupSpec,
    opts: &CrossValidateOptions,
    limits: &Limits,
) -> Result<CrossValidationReport<T>, IntegralityError> {
    let ctx = SpectrumContext::<T>::new(g, limits)?;
    let nonzero: Vec<GroupElement> = g.elements().skip(1).collect();
    let pairs = skew_pairs(g);

    let total: u64 = match opts.mode {
        SampleMode::Exhaustive | SampleMode::ExhaustiveSkew => {
            let needed = match opts.mode {
                SampleMode::Exhaustive => 1u128.checked_shl(nonzero.len() as u32).unwrap_or(u128::MAX),
                _ => 3u128.checked_pow(pairs.len() as u32).unwrap_or(u128::MAX),
            };
            if needed > opts.budget as u128 {
                return Err(IntegralityError::BudgetExceeded {
                    needed,
                    budget: opts.budget,
                });
            }
            needed as u64
        }
        SampleMode::Random => opts.budget,
    };

    let make_set = |i: u64| match opts.mode {
        SampleMode::Exhaustive => subset_from_mask(g, &nonzero, i),
        SampleMode::ExhaustiveSkew => skew_set_from_index(g, &pairs, i),
        SampleMode::Random => random_symbol_set(g, &mut sample_rng(opts.seed, i)),
    };

    let run = || -> Result<Vec<Outcome<T>>, IntegralityError> {
        (0..total)
            .into_par_iter()
            .map(|i| check_sample(&ctx, limits, opts.numeric_oracle, i, make_set(i)))
            .collect()
    };
    let outcomes = match opts.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| IntegralityError::Pool(e.to_string()))?
            .install(run)?,
        None => run()?,
    };

    let mut report = CrossValidationReport {
        group: g.clone(),
        mode: opts.mode,
        seed: (opts.mode == SampleMode::Random).then_some(opts.seed),
        total,
        agreements: 0,
        integral: 0,
        numeric_checked: 0,
        max_numeric_gap: None,
        disagreements: Vec::new(),
        numeric_mismatches: Vec::new(),
    };
    let note_numeric = |report: &mut CrossValidationReport<T>, gap: Option<f64>, m: Option<NumericMismatch>| {
        if opts.numeric_oracle {
            report.numeric_checked += 1;
        }
        if let Some(gap) = gap {
            report.max_numeric_gap = Some(report.max_numeric_gap.map_or(gap, |g: f64| g.max(gap)));
        }
        report.numeric_mismatches.extend(m);
    };
    for outcome in outcomes {
        match outcome {
            Outcome::Agree { integral, gap, numeric } => {
                report.agreements += 1;
                report.integral += integral as u64;
                note_numeric(&mut report, gap, numeric);
            }
            Outcome::Disagree(d, numeric) => {
                report.disagreements.push(d);
                note_numeric(&mut report, None, numeric);
            }
        }
    }
    Ok(report)
}
