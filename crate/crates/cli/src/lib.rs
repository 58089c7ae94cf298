//! Command-line front end: parse a `key = value` config, run one of the four
//! workflows, emit CSV / tables / plot scripts.
//!
//! ```text
//! ecoepi-hpm <simulate|compare|audit|coeffs> --config <path>
//!            [--order N] [--t-end X] [--step X] [--grid N]
//!            [--out PATH] [--method engine|paper|oracle]
//! ```

pub mod commands;
pub mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub use commands::{
    audit_exit_code, fmt17, gnuplot_script, run_audit, run_coeffs, run_compare, run_simulate,
    CommandError, ComparisonSummary, Method, PairSummary,
};
pub use config::{parse_config, ConfigError, RunConfig};

const USAGE: &str = "\
usage: ecoepi-hpm <command> --config <path> [options]

commands:
  simulate   one solution route as CSV (t,S,I,P)
  compare    oracle, engine and printed series side by side (10-column CSV)
  audit      printed constants vs engine-derived coefficients
  coeffs     table of the 23 printed constants

options:
  --config <path>   key = value configuration file (required)
  --order <N>       series truncation order (default 2)
  --t-end <X>       end of the time window (default 10)
  --step <X>        oracle step size (default 0.001)
  --grid <N>        output rows over [0, t-end] (default 201)
  --out <path>      write the main output to a file instead of stdout;
                    simulate also writes <path>.gp, audit writes the
                    machine-readable record stream there
  --method <M>      simulate only: engine | paper | oracle (default engine)

exit status: 0 success; 1 usage, config or io error;
audit: 2 any MISMATCH, 3 any UNDEFINED (also used for resonant parameters)
";

#[derive(Clone, Debug, PartialEq, Eq)]
enum Command {
    Simulate,
    Compare,
    Audit,
    Coeffs,
}

#[derive(Clone, Debug)]
struct Cli {
    command: Command,
    config_path: PathBuf,
    order: Option<usize>,
    t_end: Option<f64>,
    step: Option<f64>,
    grid: Option<usize>,
    out: Option<PathBuf>,
    method: Method,
}

fn parse_args<I: Iterator<Item = String>>(mut args: I) -> Result<Cli, String> {
    let command = match args.next().as_deref() {
        Some("simulate") => Command::Simulate,
        Some("compare") => Command::Compare,
        Some("audit") => Command::Audit,
        Some("coeffs") => Command::Coeffs,
        Some("--help") | Some("-h") | Some("help") => return Err(String::new()),
        Some(other) => return Err(format!("unknown command '{other}'")),
        None => return Err(String::new()),
    };

    let mut config_path = None;
    let mut order = None;
    let mut t_end = None;
    let mut step = None;
    let mut grid = None;
    let mut out = None;
    let mut method = Method::Engine;

    while let Some(flag) = args.next() {
        let mut value = |flag: &str| {
            args.next()
                .ok_or_else(|| format!("flag {flag} needs a value"))
        };
        match flag.as_str() {
            "--config" => config_path = Some(PathBuf::from(value("--config")?)),
            "--order" => {
                order = Some(
                    value("--order")?
                        .parse()
                        .map_err(|_| "invalid --order".to_string())?,
                )
            }
            "--t-end" => {
                t_end = Some(
                    value("--t-end")?
                        .parse()
                        .map_err(|_| "invalid --t-end".to_string())?,
                )
            }
            "--step" => {
                step = Some(
                    value("--step")?
                        .parse()
                        .map_err(|_| "invalid --step".to_string())?,
                )
            }
            "--grid" => {
                grid = Some(
                    value("--grid")?
                        .parse()
                        .map_err(|_| "invalid --grid".to_string())?,
                )
            }
            "--out" => out = Some(PathBuf::from(value("--out")?)),
            "--method" => {
                let name = value("--method")?;
                method = Method::parse(&name)
                    .ok_or_else(|| format!("invalid --method '{name}' (engine|paper|oracle)"))?;
            }
            "--help" | "-h" => return Err(String::new()),
            other => return Err(format!("unknown flag '{other}'")),
        }
    }

    Ok(Cli {
        command,
        config_path: config_path.ok_or_else(|| "--config is required".to_string())?,
        order,
        t_end,
        step,
        grid,
        out,
        method,
    })
}

fn load_config(cli: &Cli) -> Result<RunConfig, String> {
    let text = fs::read_to_string(&cli.config_path)
        .map_err(|err| format!("cannot read {}: {err}", cli.config_path.display()))?;
    let mut config = parse_config(&text).map_err(|err| err.to_string())?;
    if let Some(order) = cli.order {
        config.order = order;
    }
    if let Some(t_end) = cli.t_end {
        config.t_end = t_end;
    }
    if let Some(step) = cli.step {
        config.step = step;
    }
    if let Some(grid) = cli.grid {
        config.grid = grid.max(2);
    }
    Ok(config)
}

enum Sink {
    Stdout,
    File(PathBuf),
}

impl Sink {
    fn writer(&self) -> Result<Box<dyn Write>, std::io::Error> {
        Ok(match self {
            Sink::Stdout => Box::new(std::io::stdout().lock()),
            Sink::File(path) => Box::new(std::io::BufWriter::new(fs::File::create(path)?)),
        })
    }
}

fn command_exit(err: &CommandError) -> ExitCode {
    match err {
        CommandError::Resonant(_) => ExitCode::from(3),
        _ => ExitCode::from(1),
    }
}

/// Entry point shared by `main` and the integration tests.
pub fn run<I: Iterator<Item = String>>(args: I) -> ExitCode {
    let cli = match parse_args(args) {
        Ok(cli) => cli,
        Err(message) => {
            if message.is_empty() {
                eprint!("{USAGE}");
                return ExitCode::from(1);
            }
            eprintln!("error: {message}");
            eprint!("{USAGE}");
            return ExitCode::from(1);
        }
    };
    let config = match load_config(&cli) {
        Ok(config) => config,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(1);
        }
    };
    for warning in ecoepi_hpm::validate(&config.params, &config.ics).warnings {
        eprintln!("warning: {warning}");
    }

    let sink = match &cli.out {
        Some(path) => Sink::File(path.clone()),
        None => Sink::Stdout,
    };

    let result: Result<ExitCode, CommandError> = (|| match cli.command {
        Command::Simulate => {
            let mut out = sink.writer()?;
            run_simulate(&config, cli.method, &mut out)?;
            out.flush()?;
            if let Sink::File(path) = &sink {
                let script = gnuplot_script(&path.display().to_string());
                fs::write(script_path(path), script)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare => {
            let mut out = sink.writer()?;
            let (summary, resonant) = run_compare(&config, &mut out)?;
            out.flush()?;
            if let Some(err) = resonant {
                eprintln!("warning: paper columns left blank: {err}");
            }
            eprint!("{}", summary.render(&config));
            Ok(ExitCode::SUCCESS)
        }
        Command::Audit => {
            let mut stdout = std::io::stdout().lock();
            let code = match &sink {
                Sink::Stdout => run_audit(&config, &mut stdout, None)?,
                Sink::File(path) => {
                    let mut records = std::io::BufWriter::new(fs::File::create(path)?);
                    let code = run_audit(&config, &mut stdout, Some(&mut records))?;
                    records.flush()?;
                    code
                }
            };
            Ok(ExitCode::from(code))
        }
        Command::Coeffs => {
            let mut out = sink.writer()?;
            run_coeffs(&config, &mut out)?;
            out.flush()?;
            Ok(ExitCode::SUCCESS)
        }
    })();

    match result {
        Ok(code) => code,
        // a closed pipe downstream (e.g. `| head`) is not our error
        Err(CommandError::Io(err)) if err.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            command_exit(&err)
        }
    }
}

fn script_path(csv_path: &Path) -> PathBuf {
    let mut path = csv_path.as_os_str().to_owned();
    path.push(".gp");
    PathBuf::from(path)
}
