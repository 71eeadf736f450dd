use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tqgate::oracle::{check_interference, check_scattering, CheckReport, Grid};
use tqgate::sweep::{
    compare_schemes, optimize, run_sweep, Axis, ExecutionMode, Objective, OptimizeSpec, Range, Scale, SweepSpec,
};
use tqgate::table::{Cell, Table};
use tqgate::{ConfigTree, Error, Scheme};

/// Two-qubit gate models for T centers in silicon.
#[derive(Debug, Parser)]
#[command(name = "tqgate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Start from a named preset (scenario1, scenario2).
    #[arg(long, global = true, conflicts_with = "config")]
    preset: Option<String>,

    /// Start from a JSON config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override a config value, `key=value`; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Take every frequency as already angular (no 2π conversion).
    #[arg(long, global = true)]
    raw_angular: bool,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write data here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one scheme at the configured point.
    Eval {
        #[arg(long, value_parser = parse_scheme)]
        scheme: Scheme,
    },
    /// Sweep one scheme over one or two config paths.
    Sweep {
        #[arg(long, value_parser = parse_scheme)]
        scheme: Scheme,
        #[command(flatten)]
        axis: AxisArgs,
        /// Inner axis path for a 2-D grid.
        #[arg(long, requires_all = ["from2", "to2"])]
        vs2: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        from2: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        to2: Option<f64>,
        #[arg(long, default_value_t = 50)]
        points2: usize,
        #[arg(long, default_value = "linear", value_parser = parse_scale)]
        scale2: Scale,
    },
    /// Maximize a metric over one config path by golden-section search.
    Optimize {
        #[arg(long, value_parser = parse_scheme)]
        scheme: Scheme,
        #[arg(long)]
        vs: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value = "linear", value_parser = parse_scale)]
        scale: Scale,
        #[arg(long, default_value = "fidelity", value_parser = parse_objective)]
        objective: Objective,
    },
    /// Several schemes on one axis, side by side.
    Compare {
        /// Comma-separated scheme list.
        #[arg(long, value_delimiter = ',', value_parser = parse_scheme, required = true)]
        schemes: Vec<Scheme>,
        #[command(flatten)]
        axis: AxisArgs,
    },
    /// Compare the Liouvillian oracle (ib, ibf) or the numeric bandwidth optimum (sb) with the closed forms.
    OracleCheck {
        #[arg(long, value_parser = parse_scheme)]
        scheme: Scheme,
        #[arg(long, default_value = "coarse", value_parser = parse_grid)]
        grid: Grid,
    },
}

#[derive(Debug, Args)]
struct AxisArgs {
    /// Config path to vary (full path or unambiguous suffix).
    #[arg(long)]
    vs: String,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long, default_value = "linear", value_parser = parse_scale)]
    scale: Scale,
}

impl AxisArgs {
    fn axis(&self) -> Result<Axis, Error> {
        Ok(Axis::new(self.vs.clone(), Range::new(self.from, self.to, self.points, self.scale)?))
    }
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scale(s: &str) -> Result<Scale, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_objective(s: &str) -> Result<Objective, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    /// Bad input: exit 1.
    Input(String),
    /// Numerical failure or oracle tolerance miss: exit 2.
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn load_tree(cli: &Cli) -> Result<ConfigTree, Error> {
    let tree = match (&cli.preset, &cli.config) {
        (Some(name), None) => ConfigTree::preset(name)?,
        (None, Some(path)) => ConfigTree::from_file(path)?,
        _ => return Err(Error::Config { path: "preset".into(), message: "give one of --preset or --config".into() }),
    };
    let mut tree = tree.with_raw_angular(cli.raw_angular);
    for assignment in &cli.set {
        tree.assign(assignment)?;
    }
    tree.resolve()?;
    Ok(tree)
}

fn report_table(r: &CheckReport) -> Table {
    Table {
        columns: ["point", "quantity", "value", "reference", "deviation", "tol", "pass"].map(String::from).to_vec(),
        rows: r
            .checks
            .iter()
            .map(|c| {
                vec![
                    Cell::Text(c.label.clone()),
                    Cell::Text(c.quantity.to_string()),
                    Cell::Num(c.value),
                    Cell::Num(c.reference),
                    Cell::Num(c.deviation),
                    Cell::Num(c.tol),
                    Cell::Text(c.passed().to_string()),
                ]
            })
            .collect(),
        notes: r.summary.clone(),
    }
}

/// Rendered data for standard output, plus diagnostics and the verdict.
struct Outcome {
    data: String,
    notes: Vec<String>,
    failure: Option<Failure>,
}

fn render(table: Table, format: Format) -> Outcome {
    match format {
        Format::Csv => Outcome { data: table.to_csv(), notes: table.notes, failure: None },
        Format::Json => Outcome { data: table.to_json(), notes: Vec::new(), failure: None },
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let tree = load_tree(cli)?;
    let format = cli.format.unwrap_or(Format::Csv);
    match &cli.command {
        Command::Eval { scheme } => {
            let e = scheme.evaluate(&tree.resolve()?)?;
            Ok(render(Table::from_evaluation(*scheme, &e), format))
        }
        Command::Sweep { scheme, axis, vs2, from2, to2, points2, scale2 } => {
            let mut spec = SweepSpec::new(*scheme, axis.axis()?);
            if let (Some(path), Some(from), Some(to)) = (vs2, from2, to2) {
                spec.axis2 = Some(Axis::new(path.clone(), Range::new(*from, *to, *points2, *scale2)?));
            }
            Ok(render(Table::from_sweep(&run_sweep(&spec, &tree)?), format))
        }
        Command::Optimize { scheme, vs, from, to, scale, objective } => {
            let spec = OptimizeSpec {
                scheme: *scheme,
                path: vs.clone(),
                bracket: (*from, *to),
                scale: *scale,
                objective: *objective,
                overrides: Vec::new(),
            };
            Ok(render(Table::from_optimum(&optimize(&spec, &tree)?), format))
        }
        Command::Compare { schemes, axis } => {
            let c = compare_schemes(schemes, &axis.axis()?, &tree)?;
            if c.columns.is_empty() {
                return Err(Failure::Input(format!("no listed scheme depends on {}", c.axis)));
            }
            Ok(render(Table::from_comparison(&c), format))
        }
        Command::OracleCheck { scheme, grid } => {
            let cfg = tree.resolve()?;
            let mode = ExecutionMode::from_env()?;
            let report = match scheme {
                Scheme::Sb => check_scattering(&cfg, *grid, mode)?,
                other => check_interference(*other, &cfg, *grid, mode)?,
            };
            let mut out = match cli.format {
                None => Outcome { data: report.render(), notes: Vec::new(), failure: None },
                Some(f) => render(report_table(&report), f),
            };
            if !report.passed() {
                out.failure = Some(Failure::Numerical(format!("oracle check for {scheme} exceeded its tolerance")));
            }
            Ok(out)
        }
    }
}

fn emit(cli: &Cli, data: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => std::fs::write(path, data)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Input(format!("cannot write output: {e}")))
        }
    }
}

fn fail(f: Failure) -> ExitCode {
    match f {
        Failure::Input(m) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Failure::Numerical(m) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(f) => return fail(f),
    };
    for note in &outcome.notes {
        eprintln!("note: {note}");
    }
    if let Err(f) = emit(&cli, &outcome.data) {
        return fail(f);
    }
    match outcome.failure {
        Some(f) => fail(f),
        None => ExitCode::SUCCESS,
    }
}
