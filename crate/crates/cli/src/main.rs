use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use hua_core::cfun::{c_function, cfun_json, e_c_line_bundle, e_function};
use hua_core::liedata::{realform, satake_table, AlgebraKind, RealForm};
use hua_core::matop::{ideal_generators, upq_ideal_generators, GeneratorSet, GeneratorSetJson, IdealOptions};
use hua_core::minpoly::{diagram_boundary_degree, ScheduleVariant, ThetaData, Variant};
use hua_core::reduce::{
    gl_lemma_check, hua_sp_system, reduce_generator_set, upq_scalar_recursion, upq_shilov_identity, upq_theorem,
    verify_theta_membership, Report, UpqTheoremOptions,
};
use hua_core::Error;

#[derive(Parser)]
#[command(name = "hua", version, about = "Hua-type operators in U(g): generators, reductions, checks")]
struct Cli {
    /// Print full JSON reports for `verify` (other commands always print JSON).
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock time in reports.
    #[arg(long, global = true)]
    timing: bool,
    /// Write the JSON to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the generators of an ideal as JSON.
    Ideal(IdealArgs),
    /// Reduce an exported generator set.
    Reduce(ReduceArgs),
    /// Run one of the verification suites.
    #[command(subcommand)]
    Verify(Verify),
    /// e- and c-function values at a point.
    Cfun(CfunArgs),
    /// Boundary degrees of a Satake diagram row.
    Degrees(DegreesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Upq,
    Spnr,
    Glnr,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Gl,
    Sp,
    #[value(name = "o-odd")]
    OOdd,
    #[value(name = "o-even")]
    OEven,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Theta,
    ThetaBar,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum ScheduleArg {
    #[default]
    Standard,
    ShiftedByQ,
}

#[derive(Args, Clone)]
struct FormArgs {
    #[arg(long, value_enum)]
    form: Option<Form>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct IdealArgs {
    #[command(flatten)]
    form: FormArgs,
    /// Complex algebra for a bare Θ (instead of --form).
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Block ends n_1 < … < n_L.
    #[arg(long, value_delimiter = ',', required = true)]
    blocks: Vec<usize>,
    #[arg(long, value_enum, default_value = "theta")]
    variant: VariantArg,
    /// Keep only the columns p < j (U(p,q)).
    #[arg(long)]
    restrict_columns: bool,
    /// sym=rational, repeatable.
    #[arg(long, value_parser = parse_binding)]
    bind: Vec<(String, BigRational)>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Generator set JSON from `ideal`; `-` reads standard input.
    #[arg(long, default_value = "-")]
    input: String,
    #[arg(long, value_parser = parse_binding)]
    bind: Vec<(String, BigRational)>,
}

#[derive(Subcommand)]
enum Verify {
    /// The four trace/power identities for gl_n.
    GlLemma {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
    },
    /// Commutation and block identities for Sp(n,R).
    SpHua {
        #[arg(long)]
        n: usize,
    },
    /// The quadratic block identity for U(p,q).
    UpqShilov {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Vanishing of the U(p,q) generator matrix.
    UpqTheorem {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
        /// Shift λ_1 by one; the check should fail.
        #[arg(long)]
        perturb: bool,
        /// Use f instead of f̃ for p > q.
        #[arg(long)]
        plain_f: bool,
        #[arg(long)]
        restrict_columns: Option<bool>,
        #[arg(long, value_enum, default_value_t)]
        schedule: ScheduleArg,
    },
    /// The scalar recursion and its vanishing claims.
    UpqRecursion {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
        /// Also compare against the PBW reduction.
        #[arg(long)]
        dual_oracle: bool,
    },
    /// Membership of q_Θ(𝔽) and Δ_j − λ(Δ_j) in the generalized Verma ideal.
    Theta {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
        #[arg(long, value_enum, default_value = "theta")]
        variant: VariantArg,
    },
}

#[derive(Args)]
struct CfunArgs {
    #[command(flatten)]
    form: FormArgs,
    /// λ in e-coordinates (defaults to ρ).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Option<Vec<BigRational>>,
    /// ℓ for the line-bundle version.
    #[arg(long, allow_hyphen_values = true)]
    ell: Option<BigRational>,
}

#[derive(Args)]
struct DegreesArgs {
    /// Row label, e.g. "A_n^1" or "SU(n+m,n)".
    #[arg(long)]
    diagram: String,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    m: Option<i64>,
}

fn parse_binding(s: &str) -> Result<(String, BigRational), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected sym=value, got `{s}`"))?;
    let v: BigRational = v.trim().parse().map_err(|e| format!("bad rational `{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_)
            | Error::UnknownSymbol(_)
            | Error::MissingSymbol(_)
            | Error::Parse { .. }
            | Error::UnknownDiagram(_)
            | Error::Unsupported(_) => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

type CmdResult = Result<(Value, bool), Failure>;

fn catalog_form(a: &FormArgs) -> Result<RealForm, Failure> {
    let need = |x: Option<usize>, name: &str| x.ok_or_else(|| Failure::Usage(format!("--{name} is required")));
    match a.form {
        Some(Form::Upq) => Ok(RealForm::Upq { p: need(a.p, "p")?, q: need(a.q, "q")? }),
        Some(Form::Spnr) => Ok(RealForm::Spnr { n: need(a.n, "n")? }),
        Some(Form::Glnr) => Ok(RealForm::Glnr { n: need(a.n, "n")? }),
        None => Err(Failure::Usage("--form is required".into())),
    }
}

fn kind_of(k: Kind) -> AlgebraKind {
    match k {
        Kind::Gl => AlgebraKind::Gl,
        Kind::Sp => AlgebraKind::Sp,
        Kind::OOdd => AlgebraKind::OOdd,
        Kind::OEven => AlgebraKind::OEven,
    }
}

fn variant_of(v: VariantArg) -> Variant {
    match v {
        VariantArg::Theta => Variant::Theta,
        VariantArg::ThetaBar => Variant::ThetaBar,
    }
}

fn bindings(b: &[(String, BigRational)]) -> BTreeMap<String, BigRational> {
    b.iter().cloned().collect()
}

macro_rules! to_value {
    ($x:expr) => {
        serde_json::to_value($x).map_err(|e| Failure::Internal(e.to_string()))
    };
}

fn ideal(a: &IdealArgs) -> CmdResult {
    let opts = IdealOptions { restrict_columns: a.restrict_columns };
    let gens: GeneratorSet = match (a.form.form, a.kind) {
        (Some(_), Some(_)) => return Err(Failure::Usage("give either --form or --kind".into())),
        (Some(Form::Upq), None) => {
            let form = realform(catalog_form(&a.form)?)?;
            upq_ideal_generators(&form, &a.blocks, opts)?
        }
        (Some(f), None) => {
            // the complexification of SPNR / GLNR
            let kind = match f {
                Form::Spnr => AlgebraKind::Sp,
                _ => AlgebraKind::Gl,
            };
            let theta = ThetaData::symbolic(kind, a.blocks.clone(), variant_of(a.variant))?;
            ideal_generators(&theta, opts)?
        }
        (None, Some(k)) => {
            let theta = ThetaData::symbolic(kind_of(k), a.blocks.clone(), variant_of(a.variant))?;
            ideal_generators(&theta, opts)?
        }
        (None, None) => return Err(Failure::Usage("--form or --kind is required".into())),
    };
    let gens = if a.bind.is_empty() { gens } else { gens.bind(&bindings(&a.bind))? };
    Ok((to_value!(&gens.to_json())?, true))
}

fn reduce(a: &ReduceArgs) -> CmdResult {
    let text = if a.input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(e.to_string()))?;
        s
    } else {
        fs::read_to_string(&a.input).map_err(|e| Failure::Usage(format!("{}: {e}", a.input)))?
    };
    let json: GeneratorSetJson =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("not a generator set: {e}")))?;
    let gens = GeneratorSet::from_json(&json)?;
    let gens = if a.bind.is_empty() { gens } else { gens.bind(&bindings(&a.bind))? };
    let report = reduce_generator_set(&gens)?;
    let pass = report.pass;
    Ok((to_value!(&report)?, pass))
}

fn report_value(r: Report, timing: bool) -> CmdResult {
    let r = if timing { r.timed() } else { r };
    let pass = r.pass;
    Ok((to_value!(&r)?, pass))
}

fn verify(v: &Verify, timing: bool) -> CmdResult {
    match v {
        Verify::GlLemma { n, m } => report_value(gl_lemma_check(*n, *m)?, timing),
        Verify::SpHua { n } => report_value(hua_sp_system(*n)?, timing),
        Verify::UpqShilov { p, q } => report_value(upq_shilov_identity(*p, *q)?, timing),
        Verify::UpqTheorem { p, q, blocks, perturb, plain_f, restrict_columns, schedule } => {
            let schedule = match schedule {
                ScheduleArg::Standard => ScheduleVariant::Standard,
                ScheduleArg::ShiftedByQ => ScheduleVariant::ShiftedByQ,
            };
            let opts =
                UpqTheoremOptions { perturb: *perturb, plain_f: *plain_f, restrict_columns: *restrict_columns, schedule };
            report_value(upq_theorem(*p, *q, blocks, opts)?, timing)
        }
        Verify::UpqRecursion { p, q, blocks, dual_oracle } => {
            let r = upq_scalar_recursion(*p, *q, blocks, *dual_oracle)?;
            let pass = r.pass;
            Ok((to_value!(&r)?, pass))
        }
        Verify::Theta { kind, blocks, variant } => {
            let theta = ThetaData::symbolic(kind_of(*kind), blocks.clone(), variant_of(*variant))?;
            report_value(verify_theta_membership(&theta)?, timing)
        }
    }
}

fn cfun(a: &CfunArgs) -> CmdResult {
    let form = realform(catalog_form(&a.form)?)?;
    let rs = &form.roots;
    let lambda = a.lambda.clone().unwrap_or_else(|| rs.rho());
    let (e, c) = match &a.ell {
        Some(ell) => e_c_line_bundle(rs, &lambda, ell)?,
        None => (e_function(rs, &lambda)?, c_function(rs, &lambda)?),
    };
    let mut out = cfun_json(&e, &c);
    out["form"] = json!(form.form.to_string());
    out["lambda"] = json!(lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    if let Some(ell) = &a.ell {
        out["ell"] = json!(ell.to_string());
    }
    Ok((out, true))
}

fn degrees(a: &DegreesArgs) -> CmdResult {
    let row = satake_table().find(&a.diagram)?;
    let mut params = BTreeMap::new();
    for (k, v) in [("n", a.n), ("m", a.m)] {
        if let Some(v) = v {
            params.insert(k.to_string(), v);
        }
    }
    let diag = row.expand(&params)?;
    let table = diag.degrees();
    if !row.is_classical() {
        return Ok((to_value!(&table)?, true));
    }
    let mut computed = Vec::with_capacity(table.len());
    for (i, want) in table.iter().enumerate() {
        computed.push(match want {
            Some(_) => Some(diagram_boundary_degree(&diag, i + 1)?.degree as u32),
            None => None,
        });
    }
    let pass = computed == table;
    Ok((to_value!(&computed)?, pass))
}

fn summary(v: &Value) -> String {
    let pass = v["pass"].as_bool().unwrap_or(false);
    let case = v["case"].as_str().map(str::to_string).unwrap_or_else(|| {
        format!("upq-recursion {},{};{}", v["p"], v["q"], v["blocks"])
    });
    let mut out = format!("{} {case}\n", if pass { "PASS" } else { "FAIL" });
    for key in ["checks", "vanishing", "pmConsistency", "dualOracle"] {
        for c in v[key].as_array().into_iter().flatten() {
            if c["pass"] == false {
                out += &format!("  {}: {}\n", c["label"].as_str().unwrap_or(""), c["residue"].as_str().unwrap_or(""));
            }
        }
    }
    out
}

/// Writes to standard output; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ideal(a) => ideal(a),
        Command::Reduce(a) => reduce(a),
        Command::Verify(v) => verify(v, cli.timing),
        Command::Cfun(a) => cfun(a),
        Command::Degrees(a) => degrees(a),
    };
    let (value, pass) = match result {
        Ok(x) => x,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    let summary_only = matches!(cli.command, Command::Verify(_)) && !cli.json && cli.out.is_none();
    if let Some(path) = &cli.out {
        if let Err(e) = fs::write(path, text + "\n") {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    } else if summary_only {
        emit(&summary(&value));
    } else {
        emit(&(text + "\n"));
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
