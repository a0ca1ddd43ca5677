//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use mixcay::classes::{approx_class, atom, decompose_m1_m3, m_sets};
use mixcay::cyclotomic::{cyclotomic_polynomial, phi_factors_over_gaussians, totient, GaussPoly};
use mixcay::integrality::{
    count_integral_sets, cross_validate, enumerate_integral_sets, isomorphism_consistency, random_sets,
    CrossValidateOptions, CrossValidationReport, GroupIso, SampleMode, NUMERIC_TOLERANCE,
};
use mixcay::spectrum::SpectrumContext;
use mixcay::{GroupElement, GroupSpec, Limits, SymbolSet};

const EXHAUSTIVE_TIME_LIMIT: Duration = Duration::from_secs(120);
const RANDOM_TIME_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_SAMPLES: u64 = 500;
const RANDOM_SEED: u64 = 2024;
const MIN_RANDOM_TYPES: usize = 12;
const ISO_SAMPLES: u64 = 100;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Numeric-oracle statistics shared by criteria 1 to 3 and reported by 4.
#[derive(Default)]
struct OracleTally {
    checked: u64,
    mismatches: u64,
    max_gap: f64,
    first_failure: Option<String>,
}

impl OracleTally {
    fn absorb(&mut self, r: &CrossValidationReport<i64>) {
        self.checked += r.numeric_checked;
        self.mismatches += r.numeric_mismatches.len() as u64;
        self.max_gap = self.max_gap.max(r.max_numeric_gap.unwrap_or(0.0));
        if self.first_failure.is_none() {
            if let Some(m) = r.numeric_mismatches.first() {
                self.first_failure = Some(format!("{} {{{}}}: {}", r.group, m.set, m.detail));
            }
        }
        if r.numeric_checked != r.total && self.first_failure.is_none() {
            self.first_failure = Some(format!(
                "{}: only {} of {} checked",
                r.group, r.numeric_checked, r.total
            ));
        }
    }
}

fn run_checked(
    g: &GroupSpec,
    opts: CrossValidateOptions,
    tally: &mut OracleTally,
) -> Result<CrossValidationReport<i64>, String> {
    let r = cross_validate::<i64>(g, &opts, &Limits::default()).map_err(|e| format!("{g}: {e}"))?;
    tally.absorb(&r);
    if let Some(d) = r.disagreements.first() {
        return Err(format!(
            "{g}: {} disagreements, first {{{}}} structural={} spectral={}",
            r.disagreements.len(),
            d.set,
            d.structural,
            d.spectral
        ));
    }
    Ok(r)
}

fn criterion_1(tally: &mut OracleTally) -> Outcome {
    let start = Instant::now();
    let groups = abelian_groups_up_to(8);
    ensure(
        groups.len() == 10,
        format!("expected 10 groups, found {}", groups.len()),
    )?;
    let mut sets = 0;
    for g in &groups {
        let opts = CrossValidateOptions {
            mode: SampleMode::Exhaustive,
            budget: 1 << 7,
            numeric_oracle: true,
            ..Default::default()
        };
        let r = run_checked(g, opts, tally)?;
        ensure(r.total == 1 << (g.order() - 1), format!("{g}: {} sets", r.total))?;
        sets += r.total;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < EXHAUSTIVE_TIME_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!("10 groups, {sets} sets, 0 disagreements, {elapsed:.2?}"))
}

fn criterion_2(tally: &mut OracleTally) -> Outcome {
    let start = Instant::now();
    let groups: Vec<GroupSpec> = (9..=32).flat_map(abelian_groups).collect();
    ensure(
        groups.len() >= MIN_RANDOM_TYPES,
        format!("only {} groups", groups.len()),
    )?;
    for g in &groups {
        let opts = CrossValidateOptions {
            mode: SampleMode::Random,
            budget: RANDOM_SAMPLES,
            seed: RANDOM_SEED,
            numeric_oracle: true,
            workers: None,
        };
        let r = run_checked(g, opts, tally)?;
        ensure(
            r.agreements == RANDOM_SAMPLES,
            format!("{g}: {} agreements", r.agreements),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < RANDOM_TIME_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} groups x {RANDOM_SAMPLES} sets (seed {RANDOM_SEED}), 100% agreement, {elapsed:.2?}",
        groups.len()
    ))
}

fn criterion_3(tally: &mut OracleTally) -> Outcome {
    let groups: Vec<GroupSpec> = abelian_groups_up_to(16)
        .into_iter()
        .filter(|g| g.exponent() % 4 != 0)
        .collect();
    let mut sets = 0;
    for g in &groups {
        let opts = CrossValidateOptions {
            mode: SampleMode::ExhaustiveSkew,
            budget: 1 << 20,
            numeric_oracle: true,
            ..Default::default()
        };
        let r = run_checked(g, opts, tally)?;
        // the empty set is the only integral skew-symmetric set
        ensure(r.integral == 1, format!("{g}: {} integral skew sets", r.integral))?;
        sets += r.total;
    }
    Ok(format!(
        "{} groups, {sets} skew-symmetric sets, only the empty set integral",
        groups.len()
    ))
}

fn criterion_4(tally: &OracleTally) -> Outcome {
    if let Some(f) = &tally.first_failure {
        return Err(f.clone());
    }
    ensure(tally.checked > 0, "no instances checked")?;
    ensure(tally.mismatches == 0, format!("{} mismatches", tally.mismatches))?;
    ensure(
        tally.max_gap <= NUMERIC_TOLERANCE,
        format!("max gap {:e}", tally.max_gap),
    )?;
    Ok(format!(
        "{} instances, max gap {:.2e} <= {NUMERIC_TOLERANCE:e}",
        tally.checked, tally.max_gap
    ))
}

type Set = BTreeSet<GroupElement>;

fn lemma_suite_for(g: &GroupSpec, ctx: &SpectrumContext<i64>, x: &GroupElement) -> Result<(), String> {
    let fail = |what: &str| format!("{g}, x = {x}: {what}");
    let m = m_sets(g, x).map_err(|e| fail(&e.to_string()))?;
    let union: Set = (0..4).flat_map(|r| m.get(r).iter().cloned()).collect();
    ensure(union == generated(g, x), fail("union of M_r is not <x>"))?;
    ensure(m.m1.is_disjoint(&negate_all(g, &m.m1)), fail("M_1 not skew"))?;
    ensure(m.m3.is_disjoint(&negate_all(g, &m.m3)), fail("M_3 not skew"))?;
    ensure(negate_all(g, &m.m1) == m.m3, fail("-M_1 != M_3"))?;
    ensure(
        m.m2.iter().all(|a| translate(g, a, &m.m1) == m.m3),
        fail("a + M_1 != M_3 for a in M_2"),
    )?;
    ensure(
        m.m0.iter().all(|a| translate(g, a, &m.m1) == m.m1),
        fail("a + M_1 != M_1 for a in M_0"),
    )?;

    let class = approx_class(g, x).map_err(|e| fail(&e.to_string()))?;
    let class_neg = approx_class(g, &g.negate(x).unwrap()).unwrap();
    ensure(
        class == class_by_definition(g, x),
        fail("class differs from definition"),
    )?;
    ensure(class.is_disjoint(&class_neg), fail("classes of x and -x meet"))?;
    let atom_union: Set = class.union(&class_neg).cloned().collect();
    ensure(atom_union == atom(g, x).unwrap(), fail("[x] != ⟦x⟧ ∪ ⟦-x⟧"))?;

    let d = decompose_m1_m3(g, x).map_err(|e| fail(&e.to_string()))?;
    ensure(
        d.m1_union() == m.m1 && d.m3_union() == m.m3,
        fail("odd-divisor decomposition"),
    )?;

    let class_set = SymbolSet::new(g, class).unwrap();
    let bound = 2 * m.m1.len() as i64;
    for a in g.elements() {
        let mu = ctx.mu_alpha(&class_set, &a).map_err(|e| fail(&e.to_string()))?;
        ensure(mu.as_integer().is_some(), fail(&format!("class sum at {a} is {mu}")))?;
        let paired = ctx.paired_sum(&m.m1, &m.m3, &a).as_integer();
        ensure(
            matches!(paired, Some(k) if k == 0 || k.abs() == bound),
            fail(&format!("paired M-set sum at {a} is {paired:?}")),
        )?;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let mut groups = 0;
    let mut elements = 0;
    for g in abelian_groups_up_to(48) {
        let gamma4 = g.gamma4();
        if gamma4.is_empty() {
            continue;
        }
        groups += 1;
        let ctx = SpectrumContext::<i64>::new(&g, &Limits::default()).map_err(|e| e.to_string())?;
        for x in &gamma4 {
            lemma_suite_for(&g, &ctx, x)?;
            elements += 1;
        }
    }
    Ok(format!("{groups} groups with Γ(4) nonempty, {elements} elements x"))
}

fn criterion_6() -> Outcome {
    for n in 1..=64u64 {
        let product = (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| cyclotomic_polynomial::<i64>(d).unwrap())
            .fold(GaussPoly::from_integers(vec![1]), |acc, p| acc.mul(&p));
        let mut want = vec![0i64; n as usize + 1];
        want[0] = -1;
        want[n as usize] = 1;
        ensure(
            product == GaussPoly::from_integers(want),
            format!("product over d | {n}"),
        )?;
    }
    for n in [4u64, 8, 12, 16, 20, 24] {
        let (p1, p3) = phi_factors_over_gaussians::<i64>(n).map_err(|e| format!("n = {n}: {e}"))?;
        let half = Some(totient(n) as usize / 2);
        ensure(
            p1.degree() == half && p3.degree() == half,
            format!("n = {n}: factor degrees"),
        )?;
        ensure(
            p1.mul(&p3) == cyclotomic_polynomial::<i64>(n).unwrap(),
            format!("n = {n}: product"),
        )?;
    }
    let groups = abelian_groups_up_to(16);
    for g in &groups {
        let ctx = SpectrumContext::<i64>::new(g, &Limits::default()).unwrap();
        let ring = ctx.ring();
        for a in g.elements() {
            for b in g.elements() {
                let sum = g.elements().fold(ring.zero(), |acc, x| {
                    let t = ring
                        .mul(&ctx.character(&a, &x), &ctx.character(&b, &g.negate(&x).unwrap()))
                        .unwrap();
                    ring.add(&acc, &t).unwrap()
                });
                let want = if a == b { g.order() as i64 } else { 0 };
                ensure(
                    sum == ring.from_integer(want),
                    format!("{g}: orthogonality at ({a}, {b})"),
                )?;
            }
        }
    }
    Ok(format!(
        "Φ products n <= 64, Gaussian splits, orthogonality on {} groups",
        groups.len()
    ))
}

fn criterion_7() -> Outcome {
    let g = group("Z12");
    let (five, eleven) = (g.element(&[5]).unwrap(), g.element(&[11]).unwrap());
    let atom5 = atom(&g, &five).unwrap();
    let want_atom: Set = [1, 5, 7, 11].iter().map(|&k| g.element(&[k]).unwrap()).collect();
    ensure(atom5 == want_atom, format!("[5] = {atom5:?}"))?;
    ensure(atom(&g, &eleven).unwrap() == atom5, "5 and 11 lie in different atoms")?;
    let c5 = approx_class(&g, &five).unwrap();
    let c11 = approx_class(&g, &eleven).unwrap();
    let set = |ks: &[i64]| -> Set { ks.iter().map(|&k| g.element(&[k]).unwrap()).collect() };
    ensure(c5 == set(&[1, 5]), format!("⟦5⟧ = {c5:?}"))?;
    ensure(c11 == set(&[7, 11]), format!("⟦11⟧ = {c11:?}"))?;
    ensure(!c5.contains(&eleven), "5 ≈ 11")?;
    Ok("5 ∼ 11 in {1,5,7,11}; ⟦5⟧ = {1,5}, ⟦11⟧ = {7,11}".into())
}

fn spectral_filter_count(g: &GroupSpec) -> usize {
    let ctx = SpectrumContext::<i64>::new(g, &Limits::default()).unwrap();
    let nonzero: Vec<GroupElement> = g.elements().skip(1).collect();
    (0u64..1 << nonzero.len())
        .filter(|mask| {
            let picked = nonzero
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone());
            ctx.is_integral_spectral(&SymbolSet::new(g, picked).unwrap())
                .unwrap()
                .integral
        })
        .count()
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    for (name, want) in [("Z4", 8usize), ("Z5", 2)] {
        let g = group(name);
        let listed = enumerate_integral_sets(&g, &Limits::default())
            .map_err(|e| e.to_string())?
            .count();
        let brute = spectral_filter_count(&g);
        ensure(
            listed == want && brute == want && count_integral_sets(&g) == want as u128,
            format!("{name}: enumerated {listed}, brute force {brute}, expected {want}"),
        )?;
        parts.push(format!("{name}: {listed}"));
    }
    Ok(parts.join(", "))
}

fn criterion_9() -> Outcome {
    let iso = GroupIso::crt(&group("Z12"), &group("Z4xZ3")).map_err(|e| e.to_string())?;
    let sets = random_sets(iso.source(), ISO_SAMPLES, RANDOM_SEED);
    let r = isomorphism_consistency::<i64>(&iso, &sets, &Limits::default()).map_err(|e| e.to_string())?;
    ensure(r.total == ISO_SAMPLES, format!("{} sets", r.total))?;
    if let Some(bad) = r.inconsistencies.first() {
        return Err(format!(
            "{} inconsistent, first {{{}}} -> {{{}}}",
            r.inconsistencies.len(),
            bad.set,
            bad.image
        ));
    }
    Ok(format!(
        "{} CRT-transported sets, verdicts and spectra identical",
        r.consistent
    ))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    })
}

fn main() {
    let mut tally = OracleTally::default();
    let results = vec![
        (
            "exhaustive equivalence, order <= 8",
            guarded(|| criterion_1(&mut tally)),
        ),
        (
            "randomized equivalence, order 9-32",
            guarded(|| criterion_2(&mut tally)),
        ),
        (
            "oriented nonexistence, exponent not divisible by 4",
            guarded(|| criterion_3(&mut tally)),
        ),
        ("exact vs numeric spectra", guarded(|| criterion_4(&tally))),
        ("lemma suite, order <= 48", guarded(criterion_5)),
        ("cyclotomic identities", guarded(criterion_6)),
        ("Z12 atom and class example", guarded(criterion_7)),
        ("integral set counts for Z4 and Z5", guarded(criterion_8)),
        ("Z12 vs Z4xZ3 consistency", guarded(criterion_9)),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
