//! `gridcover`: command-line front end.
//!
//! Exit status: 0 on success, 1 when a verification or cross-check fails (a
//! JSON witness goes to stderr), 2 on invalid arguments or violated constraints.

mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use gridcover::codes::{classify_preset, family_table, CodeTableRow};
use gridcover::cycles::{cross_check_bounded, ConcreteWeights, CrossCheckReport};
use gridcover::label::DEFAULT_ENUMERATION_BOUND;
use gridcover::lattice::{CodeStatus, Violation};
use gridcover::{
    build_diagonal_coloring, fold_profile, project_ball, theorem_table, verify_code, CodePreset,
    Coloring, CycleFamily, CycleSpec, Error, Family, FamilySpec, LinePattern, Orientation,
    PeriodicColoring, Variant,
};

#[derive(Parser)]
#[command(
    name = "gridcover",
    version,
    about = "Constant 2-labellings of weighted cycles and (r,a,b)-codes of Z²"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the constant 2-labellings of one family cycle and compare with the prediction.
    Enumerate {
        #[arg(long = "type", value_name = "T", value_parser = clap::value_parser!(u8).range(1..=8))]
        family: u8,
        #[arg(long)]
        p: usize,
        /// Impose 4t = p·x + (4-p)·y (Type 8 only).
        #[arg(long)]
        special_t: bool,
        /// Use the default concrete weights instead of symbols.
        #[arg(long)]
        concrete: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Cross-check every family at every valid length up to --p-max.
    CrossCheck {
        #[arg(long)]
        p_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Projection of B_r onto a line under the translation (shift, 1).
    Project {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        shift: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Projection folded onto C_p.
    Fold {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        shift: u32,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// (a, b) table at radius r.
    Table {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        only_in_scope: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Generate a code from a family preset.
    GenCode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Verify a diagonal coloring as an (r,a,b)-code. Without --pattern, reads gen-code JSON from stdin.
    Verify {
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, value_parser = parse_orientation)]
        orientation: Option<Orientation>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Render a window of a code as PBM (P1) or SVG.
    Render {
        #[command(flatten)]
        code: CodeArgs,
        /// Window size in cells, as WxH.
        #[arg(long, value_parser = parse_window)]
        window: (usize, usize),
        /// Side of one cell in SVG units.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        cell: u32,
        /// Output format; inferred from the file extension when omitted.
        #[arg(long, value_enum)]
        image: Option<ImageFormat>,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
struct Source {
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// Explicit line pattern over {1,0}.
    #[arg(long)]
    pattern: Option<String>,
}

#[derive(Args)]
struct CodeArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    r: Option<u32>,
    /// Coloring 5 variant.
    #[arg(long, value_parser = parse_variant)]
    variant: Option<Variant>,
    #[arg(long)]
    alpha: Option<u32>,
    /// initial-block, alternate, half-black or three-pattern.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_parser = parse_orientation, default_value = "parallel")]
    orientation: Orientation,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ImageFormat {
    Pbm,
    Svg,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_orientation(s: &str) -> Result<Orientation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("window must look like WxH, got {s:?}"))?;
    let w: usize = w
        .trim()
        .parse()
        .map_err(|_| format!("bad window width {w:?}"))?;
    let h: usize = h
        .trim()
        .parse()
        .map_err(|_| format!("bad window height {h:?}"))?;
    if w == 0 || h == 0 {
        return Err(format!("window must be at least 1x1, got {w}x{h}"));
    }
    Ok((w, h))
}

enum Failure {
    /// Exit 2.
    Usage(anyhow::Error),
    /// Exit 1, with a JSON witness on stderr.
    Mismatch(serde_json::Value),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PresetRejected {
                ref coloring,
                witness,
            } => Failure::Mismatch(serde_json::json!({
                "error": "preset rejected",
                "message": e.to_string(),
                "coloring": coloring,
                "witness": witness,
            })),
            other => Failure::Usage(other.into()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn enumeration_bound() -> Result<usize, Failure> {
    match std::env::var("GRIDCOVER_MAX_P") {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(anyhow!(
                "GRIDCOVER_MAX_P must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_ENUMERATION_BOUND),
    }
}

fn emit_json<T: Serialize>(value: &T) -> Outcome {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| anyhow!(e))?;
    writeln!(out)?;
    Ok(())
}

fn emit_csv<T: Serialize>(records: impl IntoIterator<Item = T>) -> Outcome {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CycleJson {
    p: usize,
    weights: Vec<String>,
}

#[derive(Serialize)]
struct LabellingCsv {
    coloring: String,
    a: String,
    b: String,
    rows: String,
    structure_ok: bool,
}

#[derive(Serialize)]
struct CrossCheckSummary {
    #[serde(rename = "type")]
    family: u8,
    p: usize,
    special_t: bool,
    matches: bool,
    structure_ok: bool,
    pairs: usize,
    labellings: usize,
    discrepancies: usize,
}

impl From<&CrossCheckReport> for CrossCheckSummary {
    fn from(r: &CrossCheckReport) -> Self {
        CrossCheckSummary {
            family: r.spec.family.number(),
            p: r.spec.p,
            special_t: r.spec.special_t,
            matches: r.matches,
            structure_ok: r.structure_ok(),
            pairs: r.found.len(),
            labellings: r.labellings.len(),
            discrepancies: r.discrepancies.len(),
        }
    }
}

fn mismatch_witness(rep: &CrossCheckReport) -> serde_json::Value {
    serde_json::json!({
        "error": "cross-check mismatch",
        "type": rep.spec.family.number(),
        "p": rep.spec.p,
        "special_t": rep.spec.special_t,
        "discrepancies": rep.discrepancies,
        "structure_failures": rep.labellings.iter().filter(|l| !l.structure_ok).collect::<Vec<_>>(),
    })
}

fn cmd_enumerate(family: u8, p: usize, special_t: bool, concrete: bool, format: Format) -> Outcome {
    let family = CycleFamily::from_number(family).expect("range checked by clap");
    let mut spec = if concrete {
        CycleSpec::concrete(family, p, ConcreteWeights::default())
    } else {
        CycleSpec::symbolic(family, p)
    };
    if special_t {
        spec = spec.with_special_t();
    }
    let rep = cross_check_bounded(&spec, enumeration_bound()?)?;
    match format {
        Format::Json => emit_json(&rep)?,
        Format::Csv => emit_csv(rep.labellings.iter().map(|l| {
            LabellingCsv {
                coloring: l.coloring.to_string(),
                a: l.a.to_string(),
                b: l.b.to_string(),
                rows: l
                    .rows
                    .iter()
                    .map(|k| {
                        serde_json::to_value(k)
                            .unwrap()
                            .as_str()
                            .unwrap_or_default()
                            .to_owned()
                    })
                    .collect::<Vec<_>>()
                    .join(";"),
                structure_ok: l.structure_ok,
            }
        }))?,
    }
    if rep.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch(mismatch_witness(&rep)))
    }
}

fn cmd_cross_check(p_max: usize, format: Format) -> Outcome {
    let bound = enumeration_bound()?;
    if p_max > bound {
        return Err(Error::OverBound { n: p_max, bound }.into());
    }
    let mut reports = Vec::new();
    for family in CycleFamily::ALL {
        for p in family.valid_lengths(p_max) {
            reports.push(cross_check_bounded(&CycleSpec::symbolic(family, p), bound)?);
            if family == CycleFamily::Type8 {
                let spec = CycleSpec::symbolic(family, p).with_special_t();
                reports.push(cross_check_bounded(&spec, bound)?);
            }
        }
    }
    let summaries: Vec<CrossCheckSummary> = reports.iter().map(Into::into).collect();
    match format {
        Format::Json => emit_json(&summaries)?,
        Format::Csv => emit_csv(&summaries)?,
    }
    match reports.iter().find(|r| !r.passed()) {
        None => Ok(()),
        Some(bad) => Err(Failure::Mismatch(mismatch_witness(bad))),
    }
}

#[derive(Serialize)]
struct ProfileEntry {
    i: i64,
    h: u64,
}

fn cmd_project(r: u32, shift: u32, format: Format) -> Outcome {
    let profile = project_ball(r, shift);
    let entries: Vec<ProfileEntry> = profile.iter().map(|(i, h)| ProfileEntry { i, h }).collect();
    match format {
        Format::Json => emit_json(&serde_json::json!({
            "r": r,
            "shift": shift,
            "total": profile.total(),
            "profile": entries,
        })),
        Format::Csv => emit_csv(entries),
    }
}

fn cmd_fold(r: u32, shift: u32, p: usize, format: Format) -> Outcome {
    let cycle = fold_profile(&project_ball(r, shift), p)?;
    let weights: Vec<String> = cycle
        .weights
        .weights()
        .iter()
        .map(ToString::to_string)
        .collect();
    match format {
        Format::Json => emit_json(&CycleJson { p, weights }),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                i: usize,
                w: String,
            }
            emit_csv(weights.into_iter().enumerate().map(|(i, w)| Row { i, w }))
        }
    }
}

/// Table record; CSV columns follow field order.
#[derive(Serialize)]
struct TableRecord {
    family: String,
    a: u64,
    b: u64,
    r: u32,
    alpha: Option<u32>,
    variant: Option<String>,
    in_scope: bool,
}

impl From<&CodeTableRow> for TableRecord {
    fn from(row: &CodeTableRow) -> Self {
        TableRecord {
            family: row.family.to_string(),
            a: row.a,
            b: row.b,
            r: row.r,
            alpha: row.alpha,
            variant: row.variant.map(|v| v.to_string()),
            in_scope: row.in_scope,
        }
    }
}

fn cmd_table(r: u32, only_in_scope: bool, format: Format) -> Outcome {
    let rows: Vec<TableRecord> = theorem_table(r)?
        .iter()
        .filter(|row| row.in_scope || !only_in_scope)
        .map(Into::into)
        .collect();
    match format {
        Format::Json => emit_json(&rows),
        Format::Csv => emit_csv(&rows),
    }
}

/// What gen-code prints and verify reads back.
#[derive(Serialize, Deserialize)]
struct CodeJson {
    family: Option<String>,
    variant: Option<String>,
    r: u32,
    alpha: Option<u32>,
    preset: Option<String>,
    orientation: String,
    pattern: String,
    period_vectors: Option<[(i64, i64); 2]>,
    a: Option<u64>,
    b: Option<u64>,
}

struct Resolved {
    spec: Option<FamilySpec>,
    preset: Option<CodePreset>,
    r: u32,
    pattern: Coloring,
    coloring: PeriodicColoring,
    a: Option<u64>,
    b: Option<u64>,
}

fn parse_pattern(bits: &str) -> Result<Coloring, Failure> {
    let c: Coloring = bits.parse()?;
    LinePattern::new(c.clone())?;
    Ok(c)
}

fn parse_preset(name: &str, alpha: Option<u32>, family: Family) -> Result<CodePreset, Failure> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "initial-block" => CodePreset::InitialBlock(alpha.unwrap_or(0)),
        "alternate" => CodePreset::Alternate,
        "half-black" => CodePreset::HalfBlack,
        "three-pattern" => CodePreset::ThreePattern(
            alpha.unwrap_or(if family == Family::Coloring4 { 1 } else { 0 }),
        ),
        other => {
            return Err(Failure::Usage(anyhow!(
                "unknown preset {other:?} (expected initial-block, alternate, half-black or three-pattern)"
            )))
        }
    })
}

fn resolve_code(args: &CodeArgs) -> Result<Resolved, Failure> {
    let r = args.r.context("--r is required")?;
    let Some(family) = args.source.family else {
        let bits = args
            .source
            .pattern
            .as_deref()
            .expect("clap enforces one source");
        let pattern = parse_pattern(bits)?;
        let coloring =
            build_diagonal_coloring(LinePattern::new(pattern.clone())?, args.orientation);
        return Ok(Resolved {
            spec: None,
            preset: None,
            r,
            pattern,
            coloring,
            a: None,
            b: None,
        });
    };
    let spec = FamilySpec {
        family,
        r,
        variant: match family {
            Family::Coloring5 => Some(args.variant.unwrap_or(Variant::TwoPeriodic)),
            _ => args.variant,
        },
    };
    spec.validate()?;
    let preset = match &args.preset {
        Some(name) => parse_preset(name, args.alpha, family)?,
        None => {
            let rows = family_table(&spec)?;
            let row = rows
                .iter()
                .find(|row| args.alpha.is_none() || row.alpha == args.alpha)
                .with_context(|| match args.alpha {
                    Some(a) => format!("{spec} has no row with alpha = {a}"),
                    None => format!("{spec} has no rows"),
                })?;
            CodePreset::for_row(row)
        }
    };
    let (pattern, verdict) = classify_preset(&spec, &preset)?;
    let coloring = build_diagonal_coloring(LinePattern::new(pattern.clone())?, args.orientation);
    Ok(Resolved {
        spec: Some(spec),
        preset: Some(preset),
        r,
        pattern,
        coloring,
        a: verdict.a.as_ref().and_then(|e| e.as_count()),
        b: verdict.b.as_ref().and_then(|e| e.as_count()),
    })
}

fn cmd_gen_code(args: &CodeArgs, format: Format) -> Outcome {
    let res = resolve_code(args)?;
    // the cycle-side constants only carry over to the parallel layout, so check the lattice
    let report = verify_code(&res.coloring, res.r)?;
    let lattice = (report.a, report.b);
    let agrees = res.a.is_none() || (res.a, res.b) == lattice;
    if !report.is_verified() || !agrees {
        return Err(Failure::Mismatch(serde_json::json!({
            "error": "generated coloring is not an (r,a,b)-code with the cycle constants",
            "r": res.r,
            "pattern": res.pattern.to_string(),
            "orientation": res.coloring.orientation.to_string(),
            "cycle": { "a": res.a, "b": res.b },
            "lattice": { "a": report.a, "b": report.b },
            "violation": report.violation,
        })));
    }
    let record = CodeJson {
        family: res.spec.map(|s| s.family.to_string()),
        variant: res.spec.and_then(|s| s.variant).map(|v| v.to_string()),
        r: res.r,
        alpha: args.alpha,
        preset: res.preset.as_ref().map(ToString::to_string),
        orientation: res.coloring.orientation.to_string(),
        pattern: res.pattern.to_string(),
        period_vectors: Some(res.coloring.period_vectors),
        a: lattice.0,
        b: lattice.1,
    };
    match format {
        Format::Json => emit_json(&record),
        Format::Csv => {
            // csv cannot flatten the vector pair
            let mut flat = serde_json::to_value(&record).map_err(|e| anyhow!(e))?;
            flat["period_vectors"] =
                serde_json::Value::String(format!("{:?}", res.coloring.period_vectors));
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            let obj = flat.as_object().expect("record is an object");
            w.write_record(obj.keys())?;
            w.write_record(obj.values().map(|v| match v {
                serde_json::Value::Null => String::new(),
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            }))?;
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct VerifyRecord {
    r: u32,
    pattern: String,
    orientation: String,
    status: CodeStatus,
    a: Option<u64>,
    b: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<Violation>,
}

fn cmd_verify(
    r: Option<u32>,
    pattern: Option<String>,
    orientation: Option<Orientation>,
    format: Format,
) -> Outcome {
    let (r, bits, orientation) = match pattern {
        Some(bits) if bits != "-" => (
            r.context("--r is required with --pattern")?,
            bits,
            orientation.context("--orientation is required with --pattern")?,
        ),
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            let code: CodeJson =
                serde_json::from_str(&text).context("stdin is not gen-code JSON")?;
            let o = match orientation {
                Some(o) => o,
                None => code.orientation.parse()?,
            };
            (r.unwrap_or(code.r), code.pattern, o)
        }
    };
    let coloring = build_diagonal_coloring(LinePattern::new(parse_pattern(&bits)?)?, orientation);
    let report = verify_code(&coloring, r)?;
    let record = VerifyRecord {
        r,
        pattern: bits,
        orientation: orientation.to_string(),
        status: report.status,
        a: report.a,
        b: report.b,
        violation: report.violation,
    };
    match format {
        Format::Json => emit_json(&record)?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Flat<'a> {
                r: u32,
                pattern: &'a str,
                orientation: &'a str,
                status: CodeStatus,
                a: Option<u64>,
                b: Option<u64>,
            }
            emit_csv([Flat {
                r,
                pattern: &record.pattern,
                orientation: &record.orientation,
                status: record.status,
                a: record.a,
                b: record.b,
            }])?
        }
    }
    match report.violation {
        None => Ok(()),
        Some(v) => Err(Failure::Mismatch(serde_json::json!({
            "error": "not an (r,a,b)-code",
            "r": r,
            "pattern": record.pattern,
            "orientation": record.orientation,
            "cell": [v.cell.0, v.cell.1],
            "color": v.color,
            "expected": v.expected,
            "observed": v.observed,
        }))),
    }
}

fn cmd_render(
    args: &CodeArgs,
    window: (usize, usize),
    cell: u32,
    image: Option<ImageFormat>,
    output: &PathBuf,
) -> Outcome {
    let format = match image {
        Some(f) => f,
        None => match output
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
        {
            Some(e) if e == "svg" => ImageFormat::Svg,
            Some(e) if e == "pbm" => ImageFormat::Pbm,
            _ => {
                return Err(Failure::Usage(anyhow!(
                    "cannot infer the image format from {}; pass --image pbm|svg",
                    output.display()
                )))
            }
        },
    };
    let res = resolve_code(args)?;
    let (w, h) = window;
    let bytes = match format {
        ImageFormat::Pbm => render::pbm(&res.coloring, w, h),
        ImageFormat::Svg => render::svg(&res.coloring, w, h, cell as usize),
    };
    fs::write(output, bytes).with_context(|| format!("writing {}", output.display()))?;
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Enumerate {
            family,
            p,
            special_t,
            concrete,
            format,
        } => cmd_enumerate(family, p, special_t, concrete, format),
        Command::CrossCheck { p_max, format } => cmd_cross_check(p_max, format),
        Command::Project { r, shift, format } => cmd_project(r, shift, format),
        Command::Fold {
            r,
            shift,
            p,
            format,
        } => cmd_fold(r, shift, p, format),
        Command::Table {
            r,
            only_in_scope,
            format,
        } => cmd_table(r, only_in_scope, format),
        Command::GenCode { code, format } => cmd_gen_code(&code, format),
        Command::Verify {
            r,
            pattern,
            orientation,
            format,
        } => cmd_verify(r, pattern, orientation, format),
        Command::Render {
            code,
            window,
            cell,
            image,
            output,
        } => cmd_render(&code, window, cell, image, &output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(witness)) => {
            eprintln!("{witness}");
            ExitCode::from(1)
        }
    }
}
