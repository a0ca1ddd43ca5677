use std::fmt::Write as _;

use mixcay::classes::{all_atoms, all_classes, Block, ClassDecomposition, ClassError, MembershipFailure};
use mixcay::group::format_elements;
use mixcay::integrality::{
    count_integral_sets, cross_validate, enumerate_integral_sets, is_integral, isomorphism_consistency, random_sets,
    verify_spectrally, CrossValidateOptions, GroupIso, IntegralityError, IntegralityVerdict, SampleMode,
};
use mixcay::spectrum::{
    hermitian_matrix, max_multiset_gap, numeric_spectrum, SpectrumContext, SpectrumEntry, SpectrumError,
};
use mixcay::{parse_group_spec, GroupError, GroupSpec, Limits, SymbolSet};
use serde::Serialize;

use crate::args::{Command, Format, GroupSetArgs, Mode};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_INTEGRAL: u8 = 1;
pub const EXIT_DISAGREEMENT: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

const RANDOM_BUDGET: u64 = 500;
const EXHAUSTIVE_BUDGET: u64 = 1 << 20;

#[derive(Debug)]
pub enum CliError {
    /// Bad input or a guardrail; exit 3.
    Usage(String),
    /// The numeric solver disagreed with or failed against the exact path;
    /// exit 2.
    Oracle(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Oracle(_) => EXIT_DISAGREEMENT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Oracle(m) => f.write_str(m),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ClassError> for CliError {
    fn from(e: ClassError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::NoConvergence(_) | SpectrumError::PairingMismatch(..) => CliError::Oracle(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<IntegralityError> for CliError {
    fn from(e: IntegralityError) -> Self {
        match e {
            IntegralityError::Spectrum(s) => s.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: EXIT_OK }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn require_format(format: Format, allowed: &[Format], command: &str) -> Result<(), CliError> {
    if format == Format::Text || allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{command} does not support --format {}",
            format!("{format:?}").to_lowercase()
        )))
    }
}

fn group(text: &str) -> Result<GroupSpec, CliError> {
    Ok(parse_group_spec(text)?)
}

fn group_and_set(args: &GroupSetArgs) -> Result<(GroupSpec, SymbolSet), CliError> {
    let g = group(&args.group)?;
    let s = SymbolSet::parse(&g, &args.set)?;
    Ok((g, s))
}

fn braces<'a, I: IntoIterator<Item = &'a mixcay::GroupElement>>(elements: I) -> String {
    format!("{{{}}}", format_elements(elements))
}

/// Rounds away float noise so that exact integers print as integers and
/// JSON output stays stable.
fn tidy(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn real_text(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.9}")
    }
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                let pad = widths[c] - cell.chars().count();
                line.push_str(cell);
                line.push_str(&" ".repeat(pad + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn run(command: &Command, format: Format, limits: &Limits) -> Result<Outcome, CliError> {
    match command {
        Command::GroupInfo { group: g } => {
            require_format(format, &[Format::Json], "group-info")?;
            group_info(&group(g)?, format)
        }
        Command::Atoms { group: g } => {
            require_format(format, &[Format::Json], "atoms")?;
            let g = group(g)?;
            limits.check_dense(&g)?;
            blocks(&g, "atoms", all_atoms(&g), format)
        }
        Command::Classes { group: g } => {
            require_format(format, &[Format::Json], "classes")?;
            let g = group(g)?;
            limits.check_dense(&g)?;
            blocks(&g, "classes", all_classes(&g), format)
        }
        Command::Check {
            target,
            spectral_verify,
        } => {
            require_format(format, &[Format::Json], "check")?;
            check(target, *spectral_verify, format, limits)
        }
        Command::Spectrum { target, numeric_oracle } => {
            require_format(format, &[Format::Json, Format::Csv], "spectrum")?;
            spectrum(target, *numeric_oracle, format, limits)
        }
        Command::Enumerate { group: g, count_only } => {
            require_format(format, &[Format::Json], "enumerate")?;
            enumerate(&group(g)?, *count_only, format, limits)
        }
        Command::Crosscheck {
            group: g,
            mode,
            budget,
            seed,
            numeric_oracle,
            workers,
        } => {
            require_format(format, &[Format::Json], "crosscheck")?;
            let mode = match mode {
                Mode::Exhaustive => SampleMode::Exhaustive,
                Mode::ExhaustiveSkew => SampleMode::ExhaustiveSkew,
                Mode::Random => SampleMode::Random,
            };
            let opts = CrossValidateOptions {
                mode,
                budget: budget.unwrap_or(if mode == SampleMode::Random {
                    RANDOM_BUDGET
                } else {
                    EXHAUSTIVE_BUDGET
                }),
                seed: *seed,
                numeric_oracle: *numeric_oracle,
                workers: *workers,
            };
            if opts.workers == Some(0) {
                return Err(CliError::Usage("--workers must be at least 1".into()));
            }
            crosscheck(&group(g)?, &opts, format, limits)
        }
        Command::Isocheck {
            source,
            target,
            samples,
            seed,
        } => {
            require_format(format, &[Format::Json], "isocheck")?;
            isocheck(&group(source)?, &group(target)?, *samples, *seed, format, limits)
        }
        Command::ExportDot { target } => {
            require_format(format, &[Format::Dot], "export-dot")?;
            let (g, s) = group_and_set(target)?;
            let h = hermitian_matrix(&s, limits)?;
            let labels: Vec<String> = g.elements().map(|x| x.to_string()).collect();
            let name = format!("Cay({g}, {})", braces(s.iter()));
            Ok(Outcome::ok(h.to_dot(&name, &labels)))
        }
        Command::ExportCsv { target } => {
            require_format(format, &[Format::Csv], "export-csv")?;
            let (_, s) = group_and_set(target)?;
            Ok(Outcome::ok(hermitian_matrix(&s, limits)?.to_csv()))
        }
    }
}

#[derive(Serialize)]
struct GroupInfo<'a> {
    group: &'a GroupSpec,
    moduli: &'a [u64],
    order: u64,
    exponent: u64,
    gamma4_size: usize,
    atom_count: usize,
    class_count: usize,
}

fn group_info(g: &GroupSpec, format: Format) -> Result<Outcome, CliError> {
    let info = GroupInfo {
        group: g,
        moduli: g.moduli(),
        order: g.order(),
        exponent: g.exponent(),
        gamma4_size: g.gamma4().len(),
        atom_count: all_atoms(g).len(),
        class_count: all_classes(g).len(),
    };
    if format == Format::Json {
        return Ok(Outcome::ok(json(&info)));
    }
    let rows = vec![
        vec!["group".into(), g.to_string()],
        vec!["order".into(), info.order.to_string()],
        vec!["exponent".into(), info.exponent.to_string()],
        vec!["gamma4".into(), info.gamma4_size.to_string()],
        vec!["atoms".into(), info.atom_count.to_string()],
        vec!["classes".into(), info.class_count.to_string()],
    ];
    Ok(Outcome::ok(table(&rows)))
}

#[derive(Serialize)]
struct BlockList<'a> {
    group: &'a GroupSpec,
    kind: &'a str,
    blocks: Vec<Block>,
}

fn blocks(g: &GroupSpec, kind: &str, list: Vec<Block>, format: Format) -> Result<Outcome, CliError> {
    if format == Format::Json {
        return Ok(Outcome::ok(json(&BlockList {
            group: g,
            kind,
            blocks: list,
        })));
    }
    let mut out = String::new();
    if list.is_empty() {
        let _ = writeln!(out, "no {kind}: exponent {} is not divisible by 4", g.exponent());
    }
    for b in &list {
        out.push_str(&braces(&b.members));
        out.push('\n');
    }
    Ok(Outcome::ok(out))
}

fn failure_text(f: MembershipFailure) -> &'static str {
    match f {
        MembershipFailure::NotUnionOfAtoms => "not a union of atoms",
        MembershipFailure::ExponentNotMultipleOf4 => "group exponent is not divisible by 4",
        MembershipFailure::NotSkewSymmetric => "not skew-symmetric",
        MembershipFailure::OrderNotMultipleOf4 => "contains elements of order not divisible by 4",
        MembershipFailure::NotUnionOfClasses => "not a union of classes",
    }
}

fn decomposition_rows(rows: &mut Vec<Vec<String>>, label: &str, part: &SymbolSet, d: &ClassDecomposition) {
    rows.push(vec![label.into(), braces(part.iter())]);
    let listed = |bs: &[Block]| bs.iter().map(|b| braces(&b.members)).collect::<Vec<_>>().join(" ");
    if !d.atoms.is_empty() {
        rows.push(vec!["  atoms".into(), listed(&d.atoms)]);
    }
    if !d.classes.is_empty() {
        rows.push(vec!["  classes".into(), listed(&d.classes)]);
    }
    if let Some(f) = d.failure {
        let witness = d.witness().map(|w| format!(" (witness {w})")).unwrap_or_default();
        rows.push(vec!["  failure".into(), format!("{}{witness}", failure_text(f))]);
    }
}

#[derive(Serialize)]
struct CheckReport<'a> {
    group: &'a GroupSpec,
    set: &'a SymbolSet,
    symmetric_part: SymbolSet,
    skew_part: SymbolSet,
    #[serde(flatten)]
    verdict: &'a IntegralityVerdict,
}

fn check(target: &GroupSetArgs, spectral: bool, format: Format, limits: &Limits) -> Result<Outcome, CliError> {
    let (g, s) = group_and_set(target)?;
    let verdict = if spectral {
        let ctx = SpectrumContext::<i64>::new(&g, limits)?;
        verify_spectrally(&s, &ctx)?
    } else {
        is_integral(&s)
    };
    let code = if verdict.disagreement.is_some() {
        EXIT_DISAGREEMENT
    } else if verdict.verdict {
        EXIT_OK
    } else {
        EXIT_NOT_INTEGRAL
    };
    let (sym, skew) = s.skew_split();
    if format == Format::Json {
        let report = CheckReport {
            group: &g,
            set: &s,
            symmetric_part: sym,
            skew_part: skew,
            verdict: &verdict,
        };
        return Ok(Outcome {
            stdout: json(&report),
            code,
        });
    }
    let mut rows = vec![
        vec!["group".into(), g.to_string()],
        vec!["set".into(), braces(s.iter())],
    ];
    decomposition_rows(&mut rows, "symmetric part", &sym, &verdict.symmetric_part_status);
    decomposition_rows(&mut rows, "skew part", &skew, &verdict.skew_part_status);
    let word = |b: bool| if b { "integral" } else { "not integral" };
    rows.push(vec!["verdict".into(), word(verdict.verdict).into()]);
    if spectral {
        match &verdict.disagreement {
            None => rows.push(vec!["spectral".into(), format!("{} (agrees)", word(verdict.verdict))]),
            Some(d) => {
                let mut text = format!("{} (DISAGREES)", word(d.spectral));
                if let Some(w) = &d.spectral_witness {
                    let _ = write!(text, " at alpha {}: {}", w.alpha, w.gamma);
                }
                rows.push(vec!["spectral".into(), text]);
            }
        }
    }
    Ok(Outcome {
        stdout: table(&rows),
        code,
    })
}

#[derive(Serialize)]
struct JacobiReport {
    eigenvalues: Vec<f64>,
    max_gap: f64,
}

#[derive(Serialize)]
struct SpectrumReport<'a> {
    group: &'a GroupSpec,
    set: &'a SymbolSet,
    ambient_order: u64,
    integral: bool,
    entries: &'a [SpectrumEntry<i64>],
    /// The exact eigenvalues evaluated numerically, ascending.
    eigenvalues: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    jacobi: Option<JacobiReport>,
}

fn spectrum(target: &GroupSetArgs, numeric_oracle: bool, format: Format, limits: &Limits) -> Result<Outcome, CliError> {
    let (g, s) = group_and_set(target)?;
    let ctx = SpectrumContext::<i64>::new(&g, limits)?;
    let spec = ctx.par_gamma_spectrum(&s)?;
    let values: Vec<f64> = spec.numeric_values::<f64>();
    let jacobi = if numeric_oracle {
        let numeric = numeric_spectrum(&hermitian_matrix(&s, limits)?)?;
        let gap = max_multiset_gap(&values, &numeric).expect("both spectra have n values");
        if gap > mixcay::integrality::NUMERIC_TOLERANCE {
            return Err(CliError::Oracle(format!(
                "Jacobi eigenvalues differ from the exact spectrum by {gap:e}"
            )));
        }
        Some(JacobiReport {
            eigenvalues: numeric.into_iter().map(tidy).collect(),
            max_gap: gap,
        })
    } else {
        None
    };
    match format {
        Format::Json => {
            let report = SpectrumReport {
                group: &g,
                set: &s,
                ambient_order: spec.ambient_order,
                integral: spec.is_integral(),
                entries: &spec.entries,
                eigenvalues: values.iter().copied().map(tidy).collect(),
                jacobi,
            };
            Ok(Outcome::ok(json(&report)))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Usage(e.to_string());
            w.write_record(["alpha", "lambda", "mu", "gamma", "gamma_integer", "gamma_value"])
                .map_err(io)?;
            for e in &spec.entries {
                w.write_record([
                    e.alpha.to_string(),
                    e.lambda.to_string(),
                    e.mu.to_string(),
                    e.gamma.to_string(),
                    e.gamma_integer.map(|k| k.to_string()).unwrap_or_default(),
                    real_text(tidy(e.gamma.to_complex::<f64>().re)),
                ])
                .map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Outcome::ok(String::from_utf8(bytes).expect("csv output is UTF-8")))
        }
        _ => {
            let mut rows = vec![vec!["alpha".into(), "lambda".into(), "mu".into(), "gamma".into()]];
            for e in &spec.entries {
                rows.push(vec![
                    e.alpha.to_string(),
                    e.lambda.to_string(),
                    e.mu.to_string(),
                    e.gamma.to_string(),
                ]);
            }
            let mut out = format!("{g}, S = {}, w = exp(2πi/{})\n\n", braces(s.iter()), spec.ambient_order);
            out.push_str(&table(&rows));
            let listed: Vec<String> = values.iter().map(|&x| real_text(x)).collect();
            let _ = writeln!(out, "\neigenvalues  {}", listed.join(" "));
            let _ = writeln!(out, "integral     {}", if spec.is_integral() { "yes" } else { "no" });
            if let Some(j) = &jacobi {
                let _ = writeln!(out, "jacobi gap   {:.3e}", j.max_gap);
            }
            Ok(Outcome::ok(out))
        }
    }
}

#[derive(Serialize)]
struct EnumerationReport<'a> {
    group: &'a GroupSpec,
    count: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    sets: Option<Vec<SymbolSet>>,
}

fn enumerate(g: &GroupSpec, count_only: bool, format: Format, limits: &Limits) -> Result<Outcome, CliError> {
    let count = count_integral_sets(g);
    let sets = if count_only {
        None
    } else {
        Some(enumerate_integral_sets(g, limits)?.collect::<Vec<_>>())
    };
    if format == Format::Json {
        return Ok(Outcome::ok(json(&EnumerationReport { group: g, count, sets })));
    }
    let mut out = format!("{count} integral symbol sets in {g}\n");
    for s in sets.iter().flatten() {
        out.push_str(&braces(s.iter()));
        out.push('\n');
    }
    Ok(Outcome::ok(out))
}

fn crosscheck(
    g: &GroupSpec,
    opts: &CrossValidateOptions,
    format: Format,
    limits: &Limits,
) -> Result<Outcome, CliError> {
    let report = cross_validate::<i64>(g, opts, limits)?;
    let code = if report.is_clean() { EXIT_OK } else { EXIT_DISAGREEMENT };
    if format == Format::Json {
        return Ok(Outcome {
            stdout: json(&report),
            code,
        });
    }
    let mode = match opts.mode {
        SampleMode::Exhaustive => "exhaustive".to_string(),
        SampleMode::ExhaustiveSkew => "exhaustive-skew".to_string(),
        SampleMode::Random => format!("random, seed {}", opts.seed),
    };
    let mut out = format!(
        "{g} ({mode}): {}/{} agree, {} integral\n",
        report.agreements, report.total, report.integral
    );
    if opts.numeric_oracle {
        let gap = report
            .max_numeric_gap
            .map(|x| format!("{x:.3e}"))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "numeric oracle: {} checked, {} mismatches, max gap {gap}",
            report.numeric_checked,
            report.numeric_mismatches.len()
        );
    }
    for d in &report.disagreements {
        let _ = writeln!(
            out,
            "disagreement #{}: {} structural={} spectral={}",
            d.sample,
            braces(d.set.iter()),
            d.structural,
            d.spectral
        );
    }
    for m in &report.numeric_mismatches {
        let _ = writeln!(
            out,
            "numeric mismatch #{}: {} {}",
            m.sample,
            braces(m.set.iter()),
            m.detail
        );
    }
    Ok(Outcome { stdout: out, code })
}

fn isocheck(
    source: &GroupSpec,
    target: &GroupSpec,
    samples: u64,
    seed: u64,
    format: Format,
    limits: &Limits,
) -> Result<Outcome, CliError> {
    let iso = GroupIso::crt(source, target)?;
    let sets = random_sets(source, samples, seed);
    let report = isomorphism_consistency::<i64>(&iso, &sets, limits)?;
    let code = if report.is_consistent() {
        EXIT_OK
    } else {
        EXIT_DISAGREEMENT
    };
    if format == Format::Json {
        return Ok(Outcome {
            stdout: json(&report),
            code,
        });
    }
    let mut out = format!(
        "{source} -> {target}: {}/{} consistent\n",
        report.consistent, report.total
    );
    for bad in &report.inconsistencies {
        let _ = writeln!(
            out,
            "inconsistent: {} -> {} verdicts {}/{} spectra match {}",
            braces(bad.set.iter()),
            braces(bad.image.iter()),
            bad.source_verdict,
            bad.target_verdict,
            bad.spectra_match
        );
    }
    Ok(Outcome { stdout: out, code })
}
