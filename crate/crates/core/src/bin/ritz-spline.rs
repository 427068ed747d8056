use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ritz_spline::analysis::StudyKind;
use ritz_spline::cli::{
    cmd_constants, cmd_converge, cmd_eig, cmd_project, CliError, ConstantTable, ConstantsOptions,
    ConvergeOptions, EigOptions, Format, MeshSpec, ProjectOptions, SmoothnessRule,
};
use ritz_spline::projectors::ProjectorKind;

#[derive(Parser)]
#[command(name = "ritz-spline", version, about = "Spline projectors, error constants and spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project a function onto one spline space.
    Project(ProjectArgs),
    /// Convergence study under dyadic refinement.
    Converge(ConvergeArgs),
    /// Tables of error constants.
    Constants(ConstantsArgs),
    /// Clamped biharmonic spectrum and outliers.
    Eig(EigArgs),
}

#[derive(Args)]
struct ProjectArgs {
    /// Builtin name or expression in x.
    #[arg(long)]
    function: String,
    #[arg(long)]
    p: usize,
    #[arg(long, allow_hyphen_values = true)]
    k: i32,
    #[arg(long, default_value_t = 0)]
    q: usize,
    #[arg(long, default_value = "q")]
    projector: ProjectorKind,
    /// Full breakpoint list, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "uniform")]
    breakpoints: Option<Vec<f64>>,
    /// Number of equally spaced interior breakpoints.
    #[arg(long)]
    uniform: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
    interval: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long)]
    function: String,
    #[arg(long, value_delimiter = ',', required = true)]
    p_list: Vec<usize>,
    /// `max` or `fixed:K`.
    #[arg(long, default_value = "max")]
    k: SmoothnessRule,
    #[arg(long)]
    q: usize,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    l_list: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    levels: u32,
    #[arg(long, default_value = "error", value_parser = parse_study)]
    study: StudyKind,
    #[arg(long, default_value = "q")]
    projector: ProjectorKind,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
    interval: Option<Vec<f64>>,
    /// Grading exponent for `x_j = a + (b-a)(j/n)^γ`.
    #[arg(long)]
    grading: Option<f64>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long)]
    table: ConstantTable,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<i64>,
    #[arg(long = "l", allow_hyphen_values = true)]
    ell: Option<i64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, default_value_t = 5)]
    p_max: i64,
    #[arg(long, default_value_t = 8)]
    q_max: i64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EigArgs {
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 20)]
    elements: usize,
    #[arg(long, default_value_t = 0.10)]
    threshold: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
    #[arg(long)]
    plot: Option<PathBuf>,
}

fn parse_study(s: &str) -> Result<StudyKind, String> {
    match s {
        "error" => Ok(StudyKind::Error),
        "rq-diff" => Ok(StudyKind::RqDiff),
        _ => Err(format!("unknown study `{s}` (expected error or rq-diff)")),
    }
}

fn interval(v: Option<Vec<f64>>) -> (f64, f64) {
    v.map_or((0.0, 1.0), |v| (v[0], v[1]))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Project(a) => {
            let mesh = match (a.breakpoints, a.uniform) {
                (Some(list), _) => MeshSpec::List(list),
                (None, Some(n)) => MeshSpec::Uniform(n),
                (None, None) => MeshSpec::Uniform(0),
            };
            cmd_project(&ProjectOptions {
                function: a.function,
                p: a.p,
                k: a.k,
                q: a.q,
                projector: a.projector,
                mesh,
                interval: interval(a.interval),
                out: a.out,
                format: a.format,
            })
            .map(drop)
        }
        Command::Converge(a) => cmd_converge(&ConvergeOptions {
            function: a.function,
            p_list: a.p_list,
            k_rule: a.k,
            q: a.q,
            l_list: a.l_list,
            levels: a.levels,
            study: a.study,
            projector: a.projector,
            interval: interval(a.interval),
            grading: a.grading,
            out_dir: a.out_dir,
            format: a.format,
        })
        .map(drop),
        Command::Constants(a) => cmd_constants(&ConstantsOptions {
            table: a.table,
            p: a.p,
            k: a.k,
            r: a.r,
            q: a.q,
            ell: a.ell,
            h: a.h,
            p_max: a.p_max,
            q_max: a.q_max,
            out: a.out,
        })
        .map(drop),
        Command::Eig(a) => cmd_eig(&EigOptions {
            p: a.p,
            elements: a.elements,
            threshold: a.threshold,
            out: a.out,
            format: a.format,
            plot: a.plot,
        })
        .map(drop),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
