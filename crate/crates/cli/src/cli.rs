//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use puiseux_core::{
    bf_ff_status, bifurcus_build, bifurcus_verify, catalog, classify_stability, decompose_stable_unstable,
    density_witness, elasticity_set, elasticity_witnesses, element_elasticity, factorizations, is_primary, length_set,
    monoid_elasticity, shifted_lengths, truncate, CatalogName, DensityOutcome, ElasticityMode, IntSequence, MonoidSpec,
    PosRational, PrimeFilter, SearchBudget, ShiftReport, Stability, StagedMonoid, TruncatedMonoid, DEFAULT_CAP,
};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::format::{load_spec, parse_staged, read_text, spec_to_json, staged_to_json};
use crate::plot::{plot_data, write_csv};

/// Environment variable overriding the factorization cap.
pub const CAP_ENV: &str = "PUISEUX_CAP";

#[derive(Debug, Parser)]
#[command(name = "puiseux", version, about = "Factorization invariants of Puiseux monoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    #[value(alias = "truncated-exact")]
    Truncated,
    Symbolic,
}

fn rational(s: &str) -> Result<PosRational, String> {
    s.parse().map_err(|e: puiseux_core::Error| e.to_string())
}

fn prime_filter(s: &str) -> Result<PrimeFilter, String> {
    s.parse().map_err(|e: puiseux_core::Error| e.to_string())
}

#[derive(Debug, Args)]
struct Common {
    /// Monoid spec file (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Number of indices instantiated per symbolic family.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Factorization cap; overrides PUISEUX_CAP.
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the atoms of a truncation.
    Atoms {
        #[command(flatten)]
        common: Common,
    },
    /// Test membership of an element.
    Contains {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = rational)]
        element: PosRational,
    },
    /// List every factorization of an element.
    Factorize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = rational)]
        element: PosRational,
    },
    /// Length set of an element.
    Lengths {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = rational)]
        element: PosRational,
    },
    /// Elasticity of an element (`--element`) or of the monoid.
    Elasticity {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = rational)]
        element: Option<PosRational>,
        #[arg(long, value_enum, default_value_t = Mode::Truncated)]
        mode: Mode,
    },
    /// Set of elasticities of the elements up to a bound.
    Rset {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = rational)]
        bound: PosRational,
    },
    /// Elements up to a bound whose elasticity equals the monoid's.
    Witnesses {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = rational)]
        bound: PosRational,
    },
    /// Primality and atom stability.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Split an element into stable and unstable parts.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = rational)]
        element: PosRational,
    },
    /// Compare L(x + a) with L(x) + 1.
    ShiftCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = rational)]
        element: PosRational,
        #[arg(long, value_parser = rational)]
        atom: PosRational,
    },
    /// Find n, k with (a_n + k)/(b_n + k) close to a target.
    Density {
        /// Numerator sequence, an expression in n and p.
        #[arg(long)]
        a: String,
        #[arg(long, value_parser = prime_filter, default_value = "all")]
        a_primes: PrimeFilter,
        /// Denominator sequence, an expression in n and p.
        #[arg(long)]
        b: String,
        #[arg(long, value_parser = prime_filter, default_value = "all")]
        b_primes: PrimeFilter,
        #[arg(long, value_parser = rational)]
        target: PosRational,
        #[arg(long, value_parser = rational, default_value = "1/100")]
        epsilon: PosRational,
        #[arg(long, default_value_t = SearchBudget::default().max_n)]
        max_n: u64,
        #[arg(long, default_value_t = SearchBudget::default().max_k)]
        max_k: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// FF / BF classification from the symbolic description.
    Status {
        #[arg(long)]
        spec: PathBuf,
        /// Element expected to have infinitely many factorizations.
        #[arg(long, value_parser = rational)]
        witness: Option<PosRational>,
        #[arg(long, default_value_t = 8)]
        probe_depth: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Build stages of the bifurcus construction.
    Bifurcus {
        #[arg(long)]
        stages: usize,
        #[arg(long, value_parser = rational)]
        bound: PosRational,
        /// Also write the build as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Check a bifurcus build, loaded from `--input` or built afresh.
    VerifyBifurcus {
        #[arg(long, conflicts_with = "stages")]
        input: Option<PathBuf>,
        #[arg(long, required_unless_present = "input")]
        stages: Option<usize>,
        /// Verification bound; defaults to the build bound.
        #[arg(long, value_parser = rational)]
        bound: Option<PosRational>,
        #[command(flatten)]
        output: Output,
    },
    /// Element elasticities as CSV.
    Plot {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, value_parser = rational)]
        bound: PosRational,
        /// Include elements of elasticity 1.
        #[arg(long)]
        all: bool,
        /// Add approximate decimal columns.
        #[arg(long)]
        decimal: bool,
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print a named example spec, or list the names.
    Catalog {
        name: Option<String>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
}

fn resolve_cap(flag: Option<u64>) -> CliResult<u64> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => {
            v.trim().parse().map_err(|_| CliError::Usage(format!("{CAP_ENV} must be a nonnegative integer, got {v:?}")))
        }
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_CAP),
        Err(e) => Err(CliError::Usage(format!("{CAP_ENV}: {e}"))),
    }
}

fn load(common: &Common) -> CliResult<(MonoidSpec, TruncatedMonoid, u64)> {
    let spec = load_spec(&common.spec)?;
    let tm = truncate(&spec, common.depth)?;
    Ok((spec, tm, resolve_cap(common.cap)?))
}

fn strings<'a>(items: impl IntoIterator<Item = &'a PosRational>) -> Vec<String> {
    items.into_iter().map(ToString::to_string).collect()
}

fn emit_json(out: &mut dyn Write, v: &Value) -> CliResult<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("values serialize"))?;
    Ok(())
}

/// A list of rationals in the requested format.
fn emit_list(
    out: &mut dyn Write,
    format: Format,
    header: &str,
    key: &str,
    items: &[String],
    extra: Value,
) -> CliResult<()> {
    match format {
        Format::Text => {
            for s in items {
                writeln!(out, "{s}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "{header}")?;
            for s in items {
                writeln!(out, "{s}")?;
            }
        }
        Format::Json => {
            let mut v = extra;
            v[key] = json!(items);
            emit_json(out, &v)?;
        }
    }
    Ok(())
}

fn no_csv(format: Format, what: &str) -> CliResult<()> {
    if format == Format::Csv {
        return Err(CliError::Usage(format!("{what} has no CSV form; use --format text or json")));
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Atoms { common } => {
            let (_, tm, _) = load(&common)?;
            emit_list(out, common.format, "atom", "atoms", &strings(tm.atoms()), json!({ "depth": common.depth }))?;
        }
        Command::Contains { common, element } => {
            no_csv(common.format, "contains")?;
            let (_, tm, _) = load(&common)?;
            let member = tm.contains(&element);
            match common.format {
                Format::Json => emit_json(out, &json!({ "element": element.to_string(), "contains": member }))?,
                _ => writeln!(out, "{member}")?,
            }
        }
        Command::Factorize { common, element } => {
            let (_, tm, cap) = load(&common)?;
            let zs = factorizations(&tm, &element, cap)?;
            match common.format {
                Format::Json => {
                    let list: Vec<Value> = zs
                        .iter()
                        .map(|z| {
                            let terms: Vec<Value> =
                                z.multiplicities().iter().map(|(a, m)| json!([a.to_string(), m])).collect();
                            json!({ "length": z.len(), "terms": terms })
                        })
                        .collect();
                    emit_json(
                        out,
                        &json!({ "element": element.to_string(), "count": zs.len(), "factorizations": list }),
                    )?;
                }
                Format::Text => {
                    for z in &zs {
                        writeln!(out, "{z}")?;
                    }
                }
                Format::Csv => {
                    let header: Vec<String> = strings(tm.atoms());
                    writeln!(out, "length,{}", header.join(","))?;
                    for z in &zs {
                        let row: Vec<String> = tm.atoms().iter().map(|a| z.multiplicity(a).to_string()).collect();
                        writeln!(out, "{},{}", z.len(), row.join(","))?;
                    }
                }
            }
        }
        Command::Lengths { common, element } => {
            no_csv(common.format, "lengths")?;
            let (_, tm, cap) = load(&common)?;
            let l = length_set(&tm, &element, cap)?;
            match common.format {
                Format::Json => emit_json(
                    out,
                    &json!({
                        "element": element.to_string(),
                        "lengths": l.iter().collect::<Vec<_>>(),
                        "min": l.min(),
                        "max": l.max(),
                    }),
                )?,
                _ => writeln!(out, "{l}")?,
            }
        }
        Command::Elasticity { common, element, mode } => {
            no_csv(common.format, "elasticity")?;
            let (spec, tm, cap) = load(&common)?;
            if let Some(x) = element {
                let r = element_elasticity(&tm, &x, cap)?;
                match common.format {
                    Format::Json => emit_json(out, &json!({ "element": x.to_string(), "elasticity": r.to_string() }))?,
                    _ => writeln!(out, "{r}")?,
                }
                return Ok(0);
            }
            let mode = match mode {
                Mode::Truncated => ElasticityMode::TruncatedExact,
                Mode::Symbolic => ElasticityMode::Symbolic,
            };
            let report = monoid_elasticity(Some(&spec), Some(&tm), mode)?;
            match common.format {
                Format::Json => {
                    let mut v = json!({
                        "mode": report.mode.to_string(),
                        "value": report.value.to_string(),
                        "accepted": report.accepted.to_string(),
                        "witness_rule": report.witness_rule,
                        "metadata_used": report.metadata_used,
                    });
                    if mode == ElasticityMode::TruncatedExact {
                        v["depth"] = json!(common.depth);
                    }
                    emit_json(out, &v)?
                }
                _ => writeln!(out, "{}", report.value)?,
            }
        }
        Command::Rset { common, bound } => {
            let (_, tm, cap) = load(&common)?;
            let set = elasticity_set(&tm, &bound, cap)?;
            emit_list(
                out,
                common.format,
                "elasticity",
                "elasticities",
                &strings(&set),
                json!({ "bound": bound.to_string(), "depth": common.depth }),
            )?;
        }
        Command::Witnesses { common, bound } => {
            let (_, tm, cap) = load(&common)?;
            let ws = elasticity_witnesses(&tm, &bound, cap)?;
            emit_list(
                out,
                common.format,
                "element",
                "witnesses",
                &strings(&ws),
                json!({ "bound": bound.to_string(), "depth": common.depth }),
            )?;
        }
        Command::Classify { common } => {
            let (spec, tm, _) = load(&common)?;
            let primary = is_primary(&tm);
            let stability = classify_stability(&spec, common.depth)?;
            let rows: Vec<(String, Option<u64>, &str)> = tm
                .atoms()
                .iter()
                .map(|a| {
                    let s = match stability[a] {
                        Stability::Stable => "stable",
                        Stability::Unstable => "unstable",
                    };
                    (a.to_string(), primary.prime_of_atom.get(a).copied(), s)
                })
                .collect();
            match common.format {
                Format::Json => {
                    let atoms: Vec<Value> =
                        rows.iter().map(|(a, p, s)| json!({ "atom": a, "prime": p, "stability": s })).collect();
                    emit_json(
                        out,
                        &json!({ "primary": primary.is_primary, "reason": primary.reason, "atoms": atoms }),
                    )?;
                }
                Format::Text | Format::Csv => {
                    if common.format == Format::Text {
                        match &primary.reason {
                            None => writeln!(out, "primary: true")?,
                            Some(r) => writeln!(out, "primary: false ({r})")?,
                        }
                    }
                    writeln!(out, "atom,prime,stability")?;
                    for (a, p, s) in rows {
                        writeln!(out, "{a},{},{s}", p.map(|p| p.to_string()).unwrap_or_default())?;
                    }
                }
            }
        }
        Command::Decompose { common, element } => {
            no_csv(common.format, "decompose")?;
            let (spec, tm, cap) = load(&common)?;
            let d = decompose_stable_unstable(&spec, &tm, &element, cap)?;
            match common.format {
                Format::Json => emit_json(
                    out,
                    &json!({
                        "element": element.to_string(),
                        "stable_part": d.stable_part.to_string(),
                        "unstable_part": d.unstable_part.to_string(),
                        "unique": d.unique,
                        "splittings": d.splittings,
                    }),
                )?,
                _ => writeln!(
                    out,
                    "s = {}, u = {} ({})",
                    d.stable_part,
                    d.unstable_part,
                    if d.unique { "unique" } else { "not unique" }
                )?,
            }
        }
        Command::ShiftCheck { common, element, atom } => {
            no_csv(common.format, "shift-check")?;
            let (_, tm, cap) = load(&common)?;
            let report = shifted_lengths(&tm, &element, &atom, cap)?;
            let shifted = &element + &atom;
            let (value, line, code) = match &report {
                ShiftReport::Inapplicable(reason) => {
                    (json!({ "status": "inapplicable", "reason": reason }), format!("inapplicable: {reason}"), 0)
                }
                ShiftReport::Compared { base, shifted: l2, passed } => (
                    json!({
                        "status": if *passed { "passed" } else { "failed" },
                        "element": element.to_string(),
                        "atom": atom.to_string(),
                        "base": base.iter().collect::<Vec<_>>(),
                        "shifted": l2.iter().collect::<Vec<_>>(),
                    }),
                    format!(
                        "{}: L({element}) = {base}, L({shifted}) = {l2}",
                        if *passed { "passed" } else { "failed" }
                    ),
                    if *passed { 0 } else { 1 },
                ),
            };
            match common.format {
                Format::Json => emit_json(out, &value)?,
                _ => writeln!(out, "{line}")?,
            }
            return Ok(code);
        }
        Command::Density { a, a_primes, b, b_primes, target, epsilon, max_n, max_k, format } => {
            no_csv(format, "density")?;
            let a = IntSequence::new(&a, a_primes)?;
            let b = IntSequence::new(&b, b_primes)?;
            let outcome = density_witness(&a, &b, &target, &epsilon, SearchBudget { max_n, max_k })?;
            let (value, line, code) = match outcome {
                DensityOutcome::Found { n, k, ratio } => (
                    json!({ "found": true, "n": n, "k": k, "ratio": ratio.to_string() }),
                    format!("n = {n}, k = {k}, ratio = {ratio}"),
                    0,
                ),
                DensityOutcome::NotFound { diagnostics } => {
                    (json!({ "found": false, "diagnostics": diagnostics }), format!("not found: {diagnostics}"), 1)
                }
            };
            match format {
                Format::Json => emit_json(out, &value)?,
                _ => writeln!(out, "{line}")?,
            }
            return Ok(code);
        }
        Command::Status { spec, witness, probe_depth, output } => {
            no_csv(output.format, "status")?;
            let spec = load_spec(&spec)?;
            let report = bf_ff_status(&spec, witness.as_ref(), probe_depth, resolve_cap(output.cap)?)?;
            match output.format {
                Format::Json => {
                    emit_json(out, &json!({ "status": report.status.to_string(), "reason": report.reason }))?
                }
                _ => writeln!(out, "{} ({})", report.status, report.reason)?,
            }
        }
        Command::Bifurcus { stages, bound, out: path, output } => {
            no_csv(output.format, "bifurcus")?;
            let sm = bifurcus_build(stages, &bound, resolve_cap(output.cap)?)?;
            let text = staged_to_json(&sm);
            if let Some(path) = path {
                write_file(&path, &format!("{text}\n"))?;
            }
            match output.format {
                Format::Json => writeln!(out, "{text}")?,
                _ => write_staged_text(out, &sm)?,
            }
        }
        Command::VerifyBifurcus { input, stages, bound, output } => {
            no_csv(output.format, "verify-bifurcus")?;
            let cap = resolve_cap(output.cap)?;
            let sm = match (input, stages) {
                (Some(path), _) => parse_staged(&read_text(&path)?)?,
                (None, Some(stages)) => {
                    let bound = bound.clone().ok_or_else(|| CliError::Usage("--stages needs --bound".into()))?;
                    bifurcus_build(stages, &bound, cap)?
                }
                (None, None) => unreachable!("clap requires --input or --stages"),
            };
            let bound = bound.unwrap_or_else(|| sm.value_bound.clone());
            let report = bifurcus_verify(&sm, &bound, cap)?;
            match output.format {
                Format::Json => emit_json(
                    out,
                    &json!({
                        "passed": report.passed(),
                        "bound": bound.to_string(),
                        "min_nonzero": report.min_nonzero.as_ref().map(ToString::to_string),
                        "min_is_one_third": report.min_is_one_third,
                        "lost_atoms": strings(&report.lost_atoms),
                        "missing_length_two": report
                            .missing_length_two
                            .iter()
                            .map(|(j, x)| json!({ "stage": j, "element": x.to_string() }))
                            .collect::<Vec<_>>(),
                        "reducibles_checked": report.reducibles_checked,
                    }),
                )?,
                _ => {
                    let min = report.min_nonzero.as_ref().map_or_else(|| "none".to_string(), ToString::to_string);
                    writeln!(out, "min nonzero element: {min} ({})", ok(report.min_is_one_third))?;
                    writeln!(out, "recorded atoms still atoms: {}", ok(report.lost_atoms.is_empty()))?;
                    for a in &report.lost_atoms {
                        writeln!(out, "  lost atom {a}")?;
                    }
                    writeln!(
                        out,
                        "length-2 factorizations: {} ({} reducibles checked)",
                        ok(report.missing_length_two.is_empty()),
                        report.reducibles_checked
                    )?;
                    for (j, x) in &report.missing_length_two {
                        writeln!(out, "  stage {j}: {x} has no length-2 factorization")?;
                    }
                }
            }
            return Ok(if report.passed() { 0 } else { 1 });
        }
        Command::Plot { spec, depth, bound, all, decimal, cap, format } => {
            let spec = load_spec(&spec)?;
            let tm = truncate(&spec, depth)?;
            let data = plot_data(&tm, &bound, resolve_cap(cap)?, all);
            match format {
                Format::Json => {
                    let rows: Vec<Value> = data
                        .records
                        .iter()
                        .map(|r| {
                            json!({
                                "element": r.element.to_string(),
                                "elasticity": r.elasticity.to_string(),
                                "marker": r.marker.to_string(),
                            })
                        })
                        .collect();
                    emit_json(
                        out,
                        &json!({ "records": rows, "partial": data.error.as_ref().map(ToString::to_string) }),
                    )?;
                }
                _ => write_csv(out, &data, decimal)?,
            }
            return Ok(if data.error.is_some() { 1 } else { 0 });
        }
        Command::Catalog { name, depth } => match name {
            None => {
                for c in CatalogName::ALL {
                    writeln!(out, "{c}")?;
                }
            }
            Some(name) => {
                let spec = catalog(name.parse()?, depth)?;
                writeln!(out, "{}", spec_to_json(&spec))?;
            }
        },
    }
    Ok(0)
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn write_staged_text(out: &mut dyn Write, sm: &StagedMonoid) -> CliResult<()> {
    writeln!(out, "value bound: {}", sm.value_bound)?;
    for (i, pairs) in sm.added.iter().enumerate() {
        let j = i + 1;
        writeln!(out, "stage {j}: {} reducibles, {} atoms", pairs.len(), sm.stages[j].atoms().len())?;
        for p in pairs {
            writeln!(out, "  {} -> prime {}, atoms {}, {}", p.reducible, p.prime, p.minus, p.plus)?;
        }
    }
    for w in &sm.warnings {
        writeln!(out, "warning: {w}")?;
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit status: 0 on success, 1 on a domain error or
/// negative finding, 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
