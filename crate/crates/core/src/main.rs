use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pslet::cli::{
    error_exit_code, reproduce_table, run_solve, solve_csv, table_csv, table_exit_code, Precision, SolveRequest,
    TableOptions, EXIT_CONFIG, EXIT_OK,
};
use pslet::tables::TableId;
use pslet::{PotentialSpec, PsletError};

#[derive(Parser)]
#[command(name = "pslet", version, about = "Shifted-l expansion eigenenergies of anharmonic oscillators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance (JSON on stdout unless --csv)
    Solve(SolveArgs),
    /// Recompute a benchmark table (CSV on stdout unless --json)
    Table(TableArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SolveArgs {
    /// Coefficient of q^2
    #[arg(long, default_value_t = 0.5)]
    alpha0: f64,
    /// Coefficient of q^4
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Double well -a q^2/2 + q^4/2 (overrides --alpha0/--alpha)
    #[arg(long, conflicts_with_all = ["alpha0", "alpha", "term"])]
    well_depth: Option<f64>,
    /// Arbitrary polynomial term POWER:COEFF, repeatable (overrides --alpha0/--alpha)
    #[arg(long, value_parser = parse_term)]
    term: Vec<(usize, f64)>,
    #[arg(long, default_value_t = 0.0)]
    l: f64,
    /// Highest E(n) kept in the series
    #[arg(long, default_value_t = pslet::cli::DEFAULT_SERIES_ORDER)]
    order: usize,
    #[arg(long, overrides_with = "no_pade")]
    pade: bool,
    #[arg(long, overrides_with = "pade")]
    no_pade: bool,
    /// Also solve the radial equation on a grid
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value_t = Precision::Double)]
    precision: Precision,
    #[arg(long, requires = "q0_max")]
    q0_min: Option<f64>,
    #[arg(long, requires = "q0_min")]
    q0_max: Option<f64>,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct TableArgs {
    #[arg(value_enum)]
    id: TableId,
    #[arg(long, value_enum, default_value_t = Precision::Double)]
    precision: Precision,
    /// Skip the grid solver
    #[arg(long)]
    no_oracle: bool,
    /// Run rows one after another
    #[arg(long)]
    serial: bool,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

fn parse_term(s: &str) -> Result<(usize, f64), String> {
    let (p, c) = s.split_once(':').ok_or_else(|| format!("expected POWER:COEFF, got {s:?}"))?;
    let p = p.trim().parse().map_err(|e| format!("bad power {p:?}: {e}"))?;
    let c = c.trim().parse().map_err(|e| format!("bad coefficient {c:?}: {e}"))?;
    Ok((p, c))
}

fn report(err: &PsletError) -> ExitCode {
    let body = serde_json::json!({ "error": err.code(), "message": err.to_string() });
    eprintln!("{body}");
    ExitCode::from(error_exit_code(err) as u8)
}

fn solve(args: SolveArgs) -> ExitCode {
    let potential = if let Some(a) = args.well_depth {
        PotentialSpec::double_well(a)
    } else if !args.term.is_empty() {
        PotentialSpec::from_terms(&args.term)
    } else {
        PotentialSpec::quartic(args.alpha0, args.alpha)
    };
    let potential = match potential {
        Ok(p) => p,
        Err(err) => return report(&err),
    };
    let mut req = SolveRequest::new(potential, args.l);
    req.order = args.order;
    req.pade = args.pade || !args.no_pade;
    req.oracle_check = args.oracle;
    req.precision = args.precision;
    req.q0_bracket = args.q0_min.zip(args.q0_max);

    match run_solve(&req) {
        Ok(res) if args.csv => {
            print!("{}", solve_csv(&res));
            ExitCode::from(EXIT_OK as u8)
        }
        Ok(res) => match serde_json::to_string_pretty(&res) {
            Ok(s) => {
                println!("{s}");
                ExitCode::from(EXIT_OK as u8)
            }
            Err(err) => {
                eprintln!("{err}");
                ExitCode::FAILURE
            }
        },
        Err(err) => report(&err),
    }
}

fn table(args: TableArgs) -> ExitCode {
    let opts = TableOptions { precision: args.precision, oracle: !args.no_oracle, parallel: !args.serial };
    let rows = reproduce_table(args.id, opts);
    if args.json {
        match serde_json::to_string_pretty(&rows) {
            Ok(s) => println!("{s}"),
            Err(err) => {
                eprintln!("{err}");
                return ExitCode::from(EXIT_CONFIG as u8);
            }
        }
    } else {
        print!("{}", table_csv(&rows));
    }
    ExitCode::from(table_exit_code(&rows) as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = err.print();
            return ExitCode::from(code as u8);
        }
    };
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Table(args) => table(args),
    }
}
