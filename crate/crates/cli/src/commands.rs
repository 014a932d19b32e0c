use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use halting_lab::density::{density_exact, halting_density_lower, DensityRow};
use halting_lab::encodings::pair;
use halting_lab::experiment::{phi_reduction, square_embed, PhiReductionReport};
use halting_lab::machine::{decode_index, encode_program, eval, parse_program};
use halting_lab::universal::{
    probe_programmable, CompileOutcome, CompilerConstants, CuCompiler, DomainEnumerator,
    ProbeResult,
};
use halting_lab::witness::{
    r_decidability_check, validate_witness, Fraction, Verdict, Witness, WitnessJson, WitnessReport,
};
use halting_lab::{
    EvalOutcome, Evaluator, GoedelIndex, Program, Ratio, SetSpec, UBig, UniversalSpec,
};
use serde::Serialize;

use crate::args::{Command, Experiment, Format, Output, ProgramSource, WitnessArgs};
use crate::emit;
use crate::{CliError, Status};

pub fn dispatch(
    command: Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Status, CliError> {
    match command {
        Command::Eval {
            program,
            universal,
            input,
            budget,
            output,
        } => cmd_eval(
            program.as_deref(),
            universal.as_deref(),
            &input,
            budget,
            &output,
            stdout,
        ),
        Command::Encode { program, output } => cmd_encode(&program, &output, stdout),
        Command::Decode { index, output } => cmd_decode(&index, &output, stdout),
        Command::Density {
            set,
            n,
            predicate_budget,
            output,
        } => cmd_density(&set, &n, predicate_budget, &output, stdout),
        Command::HaltingDensity {
            universal,
            n,
            budget,
            output,
        } => cmd_halting_density(&universal, &n, budget, &output, stdout),
        Command::Witness { witness, output } => cmd_witness(&witness, &output, stdout, stderr),
        Command::RCheck {
            witness,
            r_density,
            tolerance,
            output,
        } => cmd_r_check(&witness, &r_density, &tolerance, &output, stdout, stderr),
        Command::CompileCu {
            universal,
            function,
            x,
            k,
            budget,
            output,
        } => cmd_compile_cu(&universal, &function, &x, k, budget, &output, stdout),
        Command::ProbeProgrammable {
            universal,
            function,
            k,
            x_max,
            budget,
            output,
        } => cmd_probe(&universal, &function, k, x_max, budget, &output, stdout),
        Command::EnumerateDomain {
            universal,
            n,
            budget,
            output,
        } => cmd_enumerate(&universal, n, budget, &output, stdout, stderr),
        Command::Experiment(Experiment::PhiReduction {
            n,
            budget,
            samples,
            seed,
            output,
        }) => cmd_phi_reduction(n, budget, samples, seed, &output, stdout, stderr),
        Command::Experiment(Experiment::SquareEmbed { n, budget, output }) => {
            cmd_square_embed(n, budget, &output, stdout, stderr)
        }
    }
}

fn load_program(path: &Path) -> Result<Program, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_program(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn universal(name: &str) -> Result<UniversalSpec, CliError> {
    if let Some(path) = name.strip_prefix("mixed:") {
        return Ok(UniversalSpec::mixed(load_program(Path::new(path))?));
    }
    name.parse()
        .map_err(|e| CliError::Usage(format!("{e}; or mixed:<file.cm>")))
}

fn set(name: &str, predicate_budget: Option<u64>) -> Result<SetSpec, CliError> {
    if let Some(path) = name.strip_prefix("program:") {
        let budget = predicate_budget.ok_or_else(|| {
            CliError::Usage(format!(
                "set `{name}` is program-decided and needs --predicate-budget"
            ))
        })?;
        return Ok(SetSpec::Program {
            program: Arc::new(load_program(Path::new(path))?),
            budget,
        });
    }
    name.parse()
        .map_err(|e| CliError::Usage(format!("{e}; or program:<file.cm>")))
}

fn ratio(flag: &str, text: &str) -> Result<Ratio<u64>, CliError> {
    let r: Ratio<u64> = text
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{flag}: `{text}` is not a fraction like 1/2")))?;
    Ok(r)
}

fn positive(flag: &str, text: &str) -> Result<UBig, CliError> {
    match text.trim().parse::<UBig>() {
        Ok(v) if !v.is_zero() => Ok(v),
        _ => Err(CliError::Usage(format!(
            "--{flag}: `{text}` is not a positive integer"
        ))),
    }
}

fn function_index(source: &ProgramSource) -> Result<GoedelIndex, CliError> {
    match (&source.program, &source.index) {
        (Some(path), _) => Ok(encode_program(&load_program(path)?)),
        (None, Some(text)) => text
            .parse()
            .map_err(|e| CliError::Usage(format!("--index: {e}"))),
        (None, None) => Err(CliError::Usage(
            "one of --program or --index is required".into(),
        )),
    }
}

fn outcome_line(o: &EvalOutcome) -> String {
    match o {
        EvalOutcome::Halted { value, steps } => format!("halted {value} steps={steps}"),
        EvalOutcome::OutOfBudget { steps } => format!("out_of_budget steps={steps}"),
        EvalOutcome::Overflow { steps } => format!("overflow steps={steps}"),
    }
}

fn status_name(o: &EvalOutcome) -> &'static str {
    match o {
        EvalOutcome::Halted { .. } => "halted",
        EvalOutcome::OutOfBudget { .. } => "out_of_budget",
        EvalOutcome::Overflow { .. } => "overflow",
    }
}

#[derive(Serialize)]
struct EvalRow {
    input: String,
    status: &'static str,
    value: Option<u64>,
    steps: u64,
}

fn cmd_eval(
    program: Option<&Path>,
    universal_name: Option<&str>,
    input: &str,
    budget: u64,
    output: &Output,
    stdout: &mut dyn Write,
) -> Result<Status, CliError> {
    let x = positive("input", input)?;
    let outcome = match (program, universal_name) {
        (Some(path), _) => {
            let p = load_program(path)?;
            let x = u64::try_from(&x)
                .map_err(|_| CliError::Usage("--input: programs take 64-bit inputs".into()))?;
            eval(&p, x, budget)
        }
        (None, Some(name)) => universal(name)?.eval(&x, budget),
        (None, None) => {
            return Err(CliError::Usage(
                "one of --program or --universal is required".into(),
            ))
        }
    };
    let bytes = match output.format {
        None => format!("{}\n", outcome_line(&outcome)).into_bytes(),
        Some(Format::Json) => emit::json(&outcome)?,
        Some(Format::Csv) => emit::csv([EvalRow {
            input: x.to_string(),
            status: status_name(&outcome),
            value: outcome.value(),
            steps: outcome.steps(),
        }])?,
    };
    emit::deliver(output.out.as_deref(), &bytes, stdout)?;
    Ok(Status::Ok)
}

fn cmd_encode(path: &Path, output: &Output, stdout: &mut dyn Write) -> Result<Status, CliError> {
    let index = encode_program(&load_program(path)?);
    let bytes = match output.format {
        None => format!("{index}\n").into_bytes(),
        Some(Format::Json) => emit::json(&serde_json::json!({ "index": index.to_string() }))?,
        Some(Format::Csv) => {
            return Err(CliError::Usage("encode supports --format json only".into()))
        }
    };
    emit::deliver(output.out.as_deref(), &bytes, stdout)?;
    Ok(Status::Ok)
}

fn cmd_decode(index: &str, output: &Output, stdout: &mut dyn Write) -> Result<Status, CliError> {
    let index: GoedelIndex = index
        .parse()
        .map_err(|e| CliError::Usage(format!("--index: {e}")))?;
    let program = decode_index(&index);
    let bytes = match output.format {
        None => program.to_string().into_bytes(),
        Some(Format::Json) => {
            let lines: Vec<String> = program
                .instructions()
                .iter()
                .map(|i| i.to_string())
                .collect();
            emit::json(&serde_json::json!({ "index": index.to_string(), "program": lines }))?
        }
        Some(Format::Csv) => {
            return Err(CliError::Usage("decode supports --format json only".into()))
        }
    };
    emit::deliver(output.out.as_deref(), &bytes, stdout)?;
    Ok(Status::Ok)
}

fn density_output(
    rows: Vec<DensityRow>,
    output: &Output,
    stdout: &mut dyn Write,
) -> Result<Status, CliError> {
    let bytes = match emit::format(output, Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Csv => emit::csv(rows)?,
        Format::Json => emit::json(&rows)?,
    };
    emit::deliver(output.out.as_deref(), &bytes, stdout)?;
    Ok(Status::Ok)
}

fn cmd_density(
    name: &str,
    ns: &[u64],
    predicate_budget: Option<u64>,
    output: &Output,
    stdout: &mut dyn Write,
) -> Result<Status, CliError> {
    let s = set(name, predicate_budget)?;
    let rows = ns
        .iter()
        .map(|&n| {
            density_exact(&s, n)
                .map(|r| r.row())
                .map_err(|e| CliError::Failed(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    density_output(rows, output, stdout)
}

fn cmd_halting_density(
    name: &str,
    ns: &[u64],
    budget: u64,
    output: &Output,
    stdout: &mut dyn Write,
) -> Result<Status, CliError> {
    let u = universal(name)?;
    let rows = ns
        .iter()
        .map(|&n| halting_density_lower(&u, n, budget).row())
        .collect();
    density_output(rows, output, stdout)
}

#[derive(Serialize)]
struct WitnessSummaryRow {
    #[serde(rename = "N")]
    n: u64,
    budget: u64,
    contradictions: usize,
    confirmations: u64,
    inconclusive: u64,
    unresolved_rejections: u64,
    density_num: u64,
    density_den: u64,
    verdict: &'static str,
}

fn summary_row(report: &WitnessReport) -> WitnessSummaryRow {
    WitnessSummaryRow {
        n: report.n,
        budget: report.budget,
        contradictions: report.contradictions.len(),
        confirmations: report.confirmations,
        inconclusive: report.inconclusive,
        unresolved_rejections: report.unresolved_rejections,
        density_num: *report.density_of_r.density.numer(),
        density_den: *report.density_of_r.density.denom(),
        verdict: match report.verdict() {
            Verdict::Refuted => "refuted",
            Verdict::Unrefuted => "unrefuted",
        },
    }
}

fn report_contradictions(report: &WitnessReport, stderr: &mut dyn Write) -> Result<(), CliError> {
    if let Some(first) = report.contradictions.first() {
        writeln!(
            stderr,
            "witness refuted: {} contradictions, first at x = {} (halts in {} steps, rejected by d)",
            report.contradictions.len(),
            first.x,
            first.steps
        )?;
    }
    Ok(())
}

fn witness_of(args: &WitnessArgs) -> Result<(UniversalSpec, Witness<SetSpec, SetSpec>), CliError> {
    Ok((
        universal(&args.universal)?,
        Witness {
            r: set(&args.r, args.predicate_budget)?,
            d: set(&args.d, args.predicate_budget)?,
            claimed_density: ratio("claimed-density", &args.claimed_density)?,
        },
    ))
}

fn cmd_witness(
    args: &WitnessArgs,
    output: &Output,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Status, CliError> {
    let format = emit::format(output, Format::Json, &[Format::Csv, Format::Json])?;
    let (u, w) = witness_of(args)?;
    let report = validate_witness(&u, &w, args.n, args.budget)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let bytes = match format {
        Format::Json => emit::json(&report.json())?,
        Format::Csv => emit::csv([summary_row(&report)])?,
    };
    emit::deliver(output.out.as_deref(), &bytes, stdout)?;
    report_contradictions(&report, stderr)?;
    Ok(match report.verdict() {
        Verdict::Unrefuted => Status::Ok,
        Verdict::Refuted => Status::CheckFailed,
    })
}

#[derive(Serialize)]
struct RCheckJson {
    witness: WitnessJson,
    r: Fraction,
    tolerance: Fraction,
    density_ok: bool,
    passed: bool,
}

fn cmd_r_check(
    args: &WitnessArgs,
    r_text: &str,
    tol_text: &str,
    output: &Output,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Status, CliError> {
    emit::format(output, Format::Json, &[Format::Json])?;
    let r = ratio("r-density", r_text)?;
    if *r.numer() == 0 || r > Ratio::from_integer(1) {
        return Err(CliError::Usage("--r-density must lie in (0, 1]".into()));
    }
    let tol = ratio("tolerance", tol_text)?;
    let (u, w) = witness_of(args)?;
    let report = r_decidability_check(&u, &w, r, args.n, args.budget, tol)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let bytes = emit::json(&RCheckJson {
        witness: report.witness.json(),
        r: r.into(),
        tolerance: tol.into(),
        density_ok: report.density_ok,
        passed: report.passed(),
    })?;
    emit::deliver(output.out.as_deref(), &bytes, stdout)?;
    report_contradictions(&report.witness, stderr)?;
    if !report.density_ok {
        writeln!(
            stderr,
            "density check failed: p_N(R) = {} is not within {tol} of {r}",
            report.witness.density_of_r.density
        )?;
    }
    Ok(if report.passed() {
        Status::Ok
    } else {
        Status::CheckFailed
    })
}

#[derive(Serialize)]
struct CompileRow {
    x: u64,
    status: &'static str,
    y: Option<u64>,
    value: Option<u64>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_compile_cu(
    name: &str,
    function: &ProgramSource,
    xs: &[u64],
    k: Option<u64>,
    rounds: u64,
    output: &Output,
    stdout: &mut dyn Write,
) -> Result<Status, CliError> {
    let format = emit::format(output, Format::Csv, &[Format::Csv, Format::Json])?;
    let u = universal(name)?;
    let g = function_index(function)?;
    let k = match k {
        Some(0) => return Err(CliError::Usage("--k must be positive".into())),
        Some(k) => UBig::from(k),
        None => CompilerConstants::for_base(&g).k,
    };
    let z = pair(&k, g.as_ubig());
    let mut compiler = CuCompiler::new(&u, rounds);
    let rows: Vec<CompileRow> = xs
        .iter()
        .map(|&x| match compiler.compile(&z, x) {
            CompileOutcome::Found { y, value } => CompileRow {
                x,
                status: "found",
                y: Some(y),
                value: Some(value),
            },
            CompileOutcome::TargetDiverged => CompileRow {
                x,
                status: "target_diverged",
                y: None,
                value: None,
            },
            CompileOutcome::Exhausted => CompileRow {
                x,
                status: "exhausted",
                y: None,
                value: None,
            },
        })
        .collect();
    let bytes = match format {
        Format::Csv => emit::csv(rows)?,
        Format::Json => emit::json(&serde_json::json!({
            "universal": u.name(),
            "k": k.to_string(),
            "z": z.to_string(),
            "rounds": rounds,
            "results": rows,
        }))?,
    };
    emit::deliver(output.out.as_deref(), &bytes, stdout)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct ProbeRow {
    x: u64,
    f_value: Option<u64>,
    status: &'static str,
    y: Option<u64>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_probe(
    name: &str,
    function: &ProgramSource,
    k: u64,
    x_max: u64,
    budget: u64,
    output: &Output,
    stdout: &mut dyn Write,
) -> Result<Status, CliError> {
    let format = emit::format(output, Format::Csv, &[Format::Csv, Format::Json])?;
    if k == 0 {
        return Err(CliError::Usage("--k must be positive".into()));
    }
    let u = universal(name)?;
    let f = function_index(function)?;
    let xs: Vec<u64> = (1..=x_max).collect();
    let report = probe_programmable(&u, &f, k, &xs, budget);
    let bytes = match format {
        Format::Json => emit::json(&report)?,
        Format::Csv => emit::csv(report.entries.iter().map(|e| {
            let (status, y) = match e.result {
                ProbeResult::Witness { y } => ("witness", Some(y)),
                ProbeResult::NoWitnessWithinBudget => ("no_witness_within_budget", None),
                ProbeResult::FunctionDiverged => ("function_diverged", None),
            };
            ProbeRow {
                x: e.x,
                f_value: e.f_value,
                status,
                y,
            }
        }))?,
    };
    emit::deliver(output.out.as_deref(), &bytes, stdout)?;
    Ok(Status::Ok)
}

fn cmd_enumerate(
    name: &str,
    count: u64,
    rounds: u64,
    output: &Output,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Status, CliError> {
    let format = emit::format(output, Format::Csv, &[Format::Csv, Format::Json])?;
    let u = universal(name)?;
    let emissions: Vec<_> = DomainEnumerator::new(&u, rounds)
        .take(usize::try_from(count).unwrap_or(usize::MAX))
        .collect();
    let exhausted = (emissions.len() as u64) < count;
    let bytes = match format {
        Format::Csv => emit::csv(&emissions)?,
        Format::Json => emit::json(&serde_json::json!({
            "universal": u.name(),
            "rounds": rounds,
            "exhausted": exhausted,
            "elements": emissions,
        }))?,
    };
    emit::deliver(output.out.as_deref(), &bytes, stdout)?;
    if exhausted {
        writeln!(
            stderr,
            "round cap {rounds} reached after {} of {count} elements",
            emissions.len()
        )?;
    }
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct PhiReductionRowCsv {
    n: u64,
    v_status: &'static str,
    v_value: Option<u64>,
    v_steps: u64,
    theta: Option<String>,
    phi_theta: Option<u64>,
    theta_nonsquare: bool,
    u_status: Option<&'static str>,
    u_value: Option<u64>,
    u_steps: Option<u64>,
    matched: bool,
    error: Option<String>,
}

#[derive(Serialize)]
struct PhiReductionJson<'a> {
    samples_found: usize,
    matches: usize,
    all_matched: bool,
    #[serde(flatten)]
    report: &'a PhiReductionReport,
}

#[allow(clippy::too_many_arguments)]
fn cmd_phi_reduction(
    n: u64,
    budget: u64,
    samples: u64,
    seed: Option<u64>,
    output: &Output,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Status, CliError> {
    let format = emit::format(output, Format::Json, &[Format::Csv, Format::Json])?;
    let samples = usize::try_from(samples).unwrap_or(usize::MAX);
    let report = phi_reduction(n, budget, samples, seed);
    let bytes = match format {
        Format::Json => emit::json(&PhiReductionJson {
            samples_found: report.rows.len(),
            matches: report.matches(),
            all_matched: report.all_matched(),
            report: &report,
        })?,
        Format::Csv => emit::csv(report.rows.iter().map(|r| PhiReductionRowCsv {
            n: r.n,
            v_status: status_name(&r.v),
            v_value: r.v.value(),
            v_steps: r.v.steps(),
            theta: r.theta.clone(),
            phi_theta: r.phi_theta,
            theta_nonsquare: r.theta_nonsquare,
            u_status: r.u.as_ref().map(status_name),
            u_value: r.u.and_then(|u| u.value()),
            u_steps: r.u.map(|u| u.steps()),
            matched: r.matched,
            error: r.error.clone(),
        }))?,
    };
    emit::deliver(output.out.as_deref(), &bytes, stdout)?;
    writeln!(
        stderr,
        "{}/{} matches ({} requested)",
        report.matches(),
        report.rows.len(),
        samples
    )?;
    Ok(if report.all_matched() {
        Status::Ok
    } else {
        Status::CheckFailed
    })
}

#[derive(Serialize)]
struct SquareEmbedJson {
    nonsquares: DensityRow,
    halting: DensityRow,
    witness: WitnessJson,
}

fn cmd_square_embed(
    n: u64,
    budget: u64,
    output: &Output,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Status, CliError> {
    let format = emit::format(output, Format::Json, &[Format::Csv, Format::Json])?;
    let report = square_embed(n, budget);
    let bytes = match format {
        Format::Json => emit::json(&SquareEmbedJson {
            nonsquares: report.nonsquares.row(),
            halting: report.halting.row(),
            witness: report.witness.json(),
        })?,
        Format::Csv => emit::csv([report.nonsquares.row(), report.halting.row()])?,
    };
    emit::deliver(output.out.as_deref(), &bytes, stdout)?;
    report_contradictions(&report.witness, stderr)?;
    Ok(match report.witness.verdict() {
        Verdict::Unrefuted => Status::Ok,
        Verdict::Refuted => Status::CheckFailed,
    })
}
