use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use padic_perron::charpoly::{char_poly, newton_polygon, root_valuations, CharPoly, NewtonPolygon, RootValuation};
use padic_perron::counterexample::{run_campaign, verify_counterexample, CampaignConfig, CounterexampleSpec, EllPolicy};
use padic_perron::field::{Exact, FieldContext, FieldKind};
use padic_perron::linalg::RationalMatrix;
use padic_perron::perron::{analyze_with, AnalyzeOptions, Status, DEFAULT_MAX_SQUARINGS};
use padic_perron::report::{self, ContextJson, EigenvectorJson, LambdaJson, ProjectionJson, ReportJson};

mod text;

const EXIT_INPUT: u8 = 2;
const EXIT_CERTIFICATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "padic-perron", version, about = "Dominant eigenpairs of matrices over Q_p and F_p((t))")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Field::PAdic)]
    field: Field,

    /// Residue characteristic; a comma-separated list for `campaign`
    #[arg(long, global = true, value_delimiter = ',')]
    p: Vec<u64>,

    /// Working precision in uniformizer digits
    #[arg(
        long,
        global = true,
        env = "PADIC_PERRON_PRECISION",
        default_value_t = 64,
        value_parser = clap::value_parser!(u32).range(8..)
    )]
    precision: u32,

    /// Matrix JSON file: {"n": 2, "entries": [["4", "-5"], ["1", "10"]]}
    #[arg(long, global = true, conflicts_with = "matrix")]
    input: Option<PathBuf>,

    /// Inline matrix JSON
    #[arg(long, global = true)]
    matrix: Option<String>,

    /// Polynomial coefficients c_0..c_n as a JSON array of strings (`polygon` only)
    #[arg(long, global = true)]
    poly: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Cap on squarings when computing the limit projection
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SQUARINGS)]
    max_squarings: u32,

    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,

    /// Dimension for `counterexample`, maximum dimension for `campaign`
    #[arg(long, global = true)]
    n: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Policy::MinimalPlusOne)]
    l_policy: Policy,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Full report: hypothesis, char poly, polygon, lambda_max, eigenvector, projection
    Analyze,
    /// Characteristic polynomial, computed exactly
    Charpoly,
    /// Newton polygon of the char poly of a matrix, or of --poly
    Polygon,
    /// Dominant eigenvalue and normalized eigenvector
    Eigen,
    /// Limit projection lim (A / lambda_max)^k
    Project,
    /// Verify the all-ones family with top-left entry 1 + p^l, l = 2 ord_p(n)
    Counterexample,
    /// Random hypothesis-satisfying matrices checked against every conclusion
    Campaign,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Field {
    PAdic,
    Laurent,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Policy {
    Minimal,
    MinimalPlusOne,
    RandomInRange,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Pipeline(#[from] padic_perron::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Pipeline(e) if !e.is_input_error() => EXIT_CERTIFICATION,
            _ => EXIT_INPUT,
        }
    }
}

/// A rendered report and whether it records a certification failure.
struct Output {
    json: String,
    failed: bool,
}

impl Output {
    fn new<T: Serialize>(value: &T, failed: bool) -> Self {
        Self {
            json: report::to_json(value),
            failed,
        }
    }
}

#[derive(Serialize)]
struct CharpolyOutput {
    context: ContextJson,
    polynomial: String,
    /// `c_0, ..., c_n`
    coefficients: Vec<String>,
}

#[derive(Serialize)]
struct PolygonOutput {
    context: ContextJson,
    coefficients: Vec<String>,
    polygon: NewtonPolygon,
    root_valuations: Vec<RootValuation>,
}

#[derive(Serialize)]
struct EigenOutput {
    context: ContextJson,
    status: Status,
    lambda_max: Option<LambdaJson>,
    eigenvector: Option<EigenvectorJson>,
}

#[derive(Serialize)]
struct ProjectOutput {
    context: ContextJson,
    status: Status,
    lambda_max: Option<LambdaJson>,
    projection: Option<ProjectionJson>,
}

impl Cli {
    fn kind(&self) -> FieldKind {
        match self.field {
            Field::PAdic => FieldKind::PAdic,
            Field::Laurent => FieldKind::Laurent,
        }
    }

    fn prime(&self) -> Result<u64, CliError> {
        match self.p.as_slice() {
            [p] => Ok(*p),
            [] => Err(CliError::Usage("--p <prime> is required".into())),
            _ => Err(CliError::Usage("--p takes a single prime for this command".into())),
        }
    }

    fn context(&self) -> Result<FieldContext, CliError> {
        Ok(FieldContext::new(self.kind(), self.prime()?, self.precision)?)
    }

    fn matrix_text(&self) -> Result<String, CliError> {
        if let Some(m) = &self.matrix {
            return Ok(m.clone());
        }
        if let Some(path) = &self.input {
            return fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            });
        }
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).map_err(|source| CliError::Io {
            path: "stdin".into(),
            source,
        })?;
        Ok(buf)
    }

    fn read_matrix(&self, ctx: &FieldContext) -> Result<RationalMatrix, CliError> {
        Ok(RationalMatrix::from_json(&self.matrix_text()?, ctx)?)
    }

    fn options(&self) -> AnalyzeOptions {
        AnalyzeOptions {
            max_squarings: self.max_squarings,
        }
    }

    fn analyze(&self) -> Result<(FieldContext, ReportJson), CliError> {
        let ctx = self.context()?;
        let a = self.read_matrix(&ctx)?;
        Ok((ctx, ReportJson::from(&analyze_with(&a, &ctx, &self.options())?)))
    }

    fn policy(&self) -> EllPolicy {
        match self.l_policy {
            Policy::Minimal => EllPolicy::Minimal,
            Policy::MinimalPlusOne => EllPolicy::MinimalPlusOne,
            Policy::RandomInRange => EllPolicy::RandomInRange,
        }
    }
}

fn parse_poly(text: &str, ctx: &FieldContext) -> Result<CharPoly, CliError> {
    let raw: Vec<String> = serde_json::from_str(text)
        .map_err(|e| CliError::Usage(format!("--poly must be a JSON array of coefficient strings: {e}")))?;
    let coeffs = raw
        .iter()
        .map(|c| Exact::parse(c, ctx))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CharPoly::from_coeffs(coeffs)?)
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Analyze => {
            let (_, r) = cli.analyze()?;
            let failed = r.status.is_failure();
            Ok(Output::new(&r, failed))
        }
        Command::Charpoly => {
            let ctx = cli.context()?;
            let f = char_poly(&cli.read_matrix(&ctx)?);
            Ok(Output::new(
                &CharpolyOutput {
                    context: (&ctx).into(),
                    polynomial: f.to_string(),
                    coefficients: f.coeffs().iter().map(|c| c.to_string()).collect(),
                },
                false,
            ))
        }
        Command::Polygon => {
            let ctx = cli.context()?;
            let f = match &cli.poly {
                Some(text) => parse_poly(text, &ctx)?,
                None => char_poly(&cli.read_matrix(&ctx)?),
            };
            let polygon = newton_polygon(&f, &ctx);
            Ok(Output::new(
                &PolygonOutput {
                    context: (&ctx).into(),
                    coefficients: f.coeffs().iter().map(|c| c.to_string()).collect(),
                    root_valuations: root_valuations(&polygon),
                    polygon,
                },
                false,
            ))
        }
        Command::Eigen => {
            let (ctx, r) = cli.analyze()?;
            let failed = r.status.is_failure();
            let out = EigenOutput {
                context: (&ctx).into(),
                status: r.status,
                lambda_max: r.lambda_max,
                eigenvector: r.eigenvector,
            };
            Ok(Output::new(&out, failed))
        }
        Command::Project => {
            let (ctx, r) = cli.analyze()?;
            let failed = r.status.is_failure();
            let out = ProjectOutput {
                context: (&ctx).into(),
                status: r.status,
                lambda_max: r.lambda_max,
                projection: r.projection,
            };
            Ok(Output::new(&out, failed))
        }
        Command::Counterexample => {
            let n = cli.n.ok_or_else(|| CliError::Usage("--n <dim> is required".into()))?;
            let r = verify_counterexample(&CounterexampleSpec::new(cli.prime()?, n)?);
            Ok(Output::new(&r, !r.all_passed))
        }
        Command::Campaign => {
            let defaults = CampaignConfig::default();
            let cfg = CampaignConfig {
                field: cli.kind(),
                primes: if cli.p.is_empty() { defaults.primes } else { cli.p.clone() },
                max_dimension: cli.n.unwrap_or(defaults.max_dimension),
                trials: cli.trials,
                seed: cli.seed,
                ell_policy: cli.policy(),
                precision: cli.precision,
                max_squarings: cli.max_squarings,
            };
            let r = run_campaign(&cfg)?;
            Ok(Output::new(&r, !r.failures.is_empty()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => print!("{}", out.json),
                Format::Text => {
                    let value: serde_json::Value = serde_json::from_str(&out.json).expect("own output parses");
                    print!("{}", text::render(&value));
                }
            }
            if out.failed {
                ExitCode::from(EXIT_CERTIFICATION)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
