//! The four workflows behind the subcommands: simulate, compare, audit,
//! coeffs.

use std::fmt;
use std::io::Write;

use ecoepi_hpm::paper::{paper_series, PaperConstant};
use ecoepi_hpm::{
    audit, integrate, paper_coefficients, AssembledSolution, HpmExpansion, PaperCoefficients,
    ResonantParameters, Trajectory,
};

use crate::config::RunConfig;

/// 17 significant digits: enough for every f64 to re-parse bit-exactly.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Engine,
    Paper,
    Oracle,
}

impl Method {
    pub fn parse(text: &str) -> Option<Method> {
        match text {
            "engine" => Some(Method::Engine),
            "paper" => Some(Method::Paper),
            "oracle" => Some(Method::Oracle),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub enum CommandError {
    Resonant(ResonantParameters),
    Oracle(String),
    Io(std::io::Error),
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Resonant(err) => err.fmt(f),
            CommandError::Oracle(message) => write!(f, "{message}"),
            CommandError::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl From<std::io::Error> for CommandError {
    fn from(err: std::io::Error) -> Self {
        CommandError::Io(err)
    }
}

impl From<ResonantParameters> for CommandError {
    fn from(err: ResonantParameters) -> Self {
        CommandError::Resonant(err)
    }
}

fn output_times(config: &RunConfig) -> Vec<f64> {
    (0..config.grid)
        .map(|row| config.t_end * row as f64 / (config.grid - 1) as f64)
        .collect()
}

fn build_engine(config: &RunConfig) -> AssembledSolution<f64> {
    let mut expansion = HpmExpansion::new(&config.ics);
    expansion.extend_to(&config.params, config.order);
    expansion.assemble(config.order)
}

fn build_oracle(config: &RunConfig) -> Result<Trajectory<f64>, CommandError> {
    integrate(&config.params, &config.ics, config.t_end, config.step)
        .map_err(|err| CommandError::Oracle(err.to_string()))
}

/// Worst deviation of one pair of columns: max absolute difference, max
/// symmetric relative difference, and the grid time where the absolute
/// maximum is attained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairSummary {
    pub max_abs: [f64; 3],
    pub max_rel: [f64; 3],
    pub t_at_max: [f64; 3],
}

impl PairSummary {
    fn measure(times: &[f64], a: &[[f64; 3]], b: &[[f64; 3]]) -> PairSummary {
        let mut summary = PairSummary {
            max_abs: [0.0; 3],
            max_rel: [0.0; 3],
            t_at_max: [0.0; 3],
        };
        for (row, &t) in times.iter().enumerate() {
            for d in 0..3 {
                let abs = (a[row][d] - b[row][d]).abs();
                if abs > summary.max_abs[d] {
                    summary.max_abs[d] = abs;
                    summary.t_at_max[d] = t;
                }
                let scale = a[row][d].abs().max(b[row][d].abs());
                if scale > 0.0 {
                    summary.max_rel[d] = summary.max_rel[d].max(abs / scale);
                }
            }
        }
        summary
    }
}

/// Deviations between the three solution routes, plus the t = 0 defects.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonSummary {
    pub engine_vs_oracle: PairSummary,
    pub paper_vs_oracle: Option<PairSummary>,
    pub engine_vs_paper: Option<PairSummary>,
    /// |sum A|, |sum B|, |sum C|: how far the printed series sits from the
    /// initial conditions at t = 0.
    pub printed_t0_defect: Option<[f64; 3]>,
    pub engine_t0_defect: [f64; 3],
}

impl ComparisonSummary {
    pub fn render(&self, config: &RunConfig) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(
            out,
            "comparison over [0, {}] with order {}, step {}, grid {}",
            config.t_end, config.order, config.step, config.grid
        )
        .unwrap();
        fn pair(out: &mut String, name: &str, summary: &PairSummary) {
            for (d, var) in ["S", "I", "P"].iter().enumerate() {
                writeln!(
                    out,
                    "{name:<18} {var}  max|diff| {:>23}  max rel {:>23}  at t = {}",
                    fmt17(summary.max_abs[d]),
                    fmt17(summary.max_rel[d]),
                    summary.t_at_max[d]
                )
                .unwrap();
            }
        }
        pair(&mut out, "engine vs oracle", &self.engine_vs_oracle);
        match &self.paper_vs_oracle {
            Some(summary) => pair(&mut out, "paper vs oracle", summary),
            None => writeln!(out, "paper vs oracle    unavailable (resonant parameters)").unwrap(),
        }
        match &self.engine_vs_paper {
            Some(summary) => pair(&mut out, "engine vs paper", summary),
            None => writeln!(out, "engine vs paper    unavailable (resonant parameters)").unwrap(),
        }
        match &self.printed_t0_defect {
            Some([a, b, c]) => writeln!(
                out,
                "printed-series t=0 defect: |sum A| = {}, |sum B| = {}, |sum C| = {}",
                fmt17(*a),
                fmt17(*b),
                fmt17(*c)
            )
            .unwrap(),
            None => writeln!(out, "printed-series t=0 defect: unavailable").unwrap(),
        }
        writeln!(
            out,
            "engine t=0 defect: {} {} {}",
            fmt17(self.engine_t0_defect[0]),
            fmt17(self.engine_t0_defect[1]),
            fmt17(self.engine_t0_defect[2])
        )
        .unwrap();
        out
    }
}

/// Ten-column CSV of the three routes plus the comparison summary.
///
/// When the printed constants are undefined (resonant parameters) the three
/// paper columns stay blank and the failure is reported separately; engine
/// and oracle columns are emitted regardless.
pub fn run_compare<W: Write>(
    config: &RunConfig,
    csv_out: &mut W,
) -> Result<(ComparisonSummary, Option<ResonantParameters>), CommandError> {
    let assembled = build_engine(config);
    let trajectory = build_oracle(config)?;
    let paper = paper_coefficients(&config.params, &config.ics);
    let (coeffs, resonant) = match paper {
        Ok(coeffs) => (Some(coeffs), None),
        Err(err) => (None, Some(err)),
    };
    let series = coeffs
        .as_ref()
        .map(|coeffs| paper_series(coeffs, &config.ics));

    let times = output_times(config);
    let mut numeric_rows = Vec::with_capacity(times.len());
    let mut engine_rows = Vec::with_capacity(times.len());
    let mut paper_rows: Vec<[f64; 3]> = Vec::with_capacity(times.len());

    writeln!(
        csv_out,
        "t,S_num,I_num,P_num,S_hpm,I_hpm,P_hpm,S_paper,I_paper,P_paper"
    )?;
    for &t in &times {
        let numeric = trajectory
            .sample(t)
            .map_err(|err| CommandError::Oracle(err.to_string()))?;
        let engine = assembled.evaluate(&config.params, t);
        let paper_row = series.as_ref().map(|[s, i, p]| {
            [
                s.evaluate(&config.params, t),
                i.evaluate(&config.params, t),
                p.evaluate(&config.params, t),
            ]
        });
        let paper_fields = match paper_row {
            Some(row) => format!("{},{},{}", fmt17(row[0]), fmt17(row[1]), fmt17(row[2])),
            None => ",,".to_string(),
        };
        writeln!(
            csv_out,
            "{},{},{},{},{},{},{},{}",
            fmt17(t),
            fmt17(numeric[0]),
            fmt17(numeric[1]),
            fmt17(numeric[2]),
            fmt17(engine[0]),
            fmt17(engine[1]),
            fmt17(engine[2]),
            paper_fields
        )?;
        numeric_rows.push(numeric);
        engine_rows.push(engine);
        if let Some(row) = paper_row {
            paper_rows.push(row);
        }
    }

    let engine_at_zero = assembled.evaluate(&config.params, 0.0);
    let summary = ComparisonSummary {
        engine_vs_oracle: PairSummary::measure(&times, &engine_rows, &numeric_rows),
        paper_vs_oracle: series
            .is_some()
            .then(|| PairSummary::measure(&times, &paper_rows, &numeric_rows)),
        engine_vs_paper: series
            .is_some()
            .then(|| PairSummary::measure(&times, &engine_rows, &paper_rows)),
        printed_t0_defect: coeffs.as_ref().map(|coeffs| {
            [
                coeffs.sum_a().abs(),
                coeffs.sum_b().abs(),
                coeffs.sum_c().abs(),
            ]
        }),
        engine_t0_defect: [
            (engine_at_zero[0] - config.ics.s0).abs(),
            (engine_at_zero[1] - config.ics.i0).abs(),
            (engine_at_zero[2] - config.ics.p0).abs(),
        ],
    };
    Ok((summary, resonant))
}

/// Single-method CSV: `t,S,I,P`.
pub fn run_simulate<W: Write>(
    config: &RunConfig,
    method: Method,
    csv_out: &mut W,
) -> Result<(), CommandError> {
    enum Source {
        Engine(AssembledSolution<f64>),
        Paper(PaperCoefficients<f64>),
        Oracle(Trajectory<f64>),
    }
    let source = match method {
        Method::Engine => Source::Engine(build_engine(config)),
        Method::Paper => Source::Paper(paper_coefficients(&config.params, &config.ics)?),
        Method::Oracle => Source::Oracle(build_oracle(config)?),
    };

    writeln!(csv_out, "t,S,I,P")?;
    for t in output_times(config) {
        let row = match &source {
            Source::Engine(assembled) => assembled.evaluate(&config.params, t),
            Source::Paper(coeffs) => {
                ecoepi_hpm::evaluate_paper_series(coeffs, &config.params, &config.ics, t)
            }
            Source::Oracle(trajectory) => trajectory
                .sample(t)
                .map_err(|err| CommandError::Oracle(err.to_string()))?,
        };
        writeln!(
            csv_out,
            "{},{},{},{}",
            fmt17(t),
            fmt17(row[0]),
            fmt17(row[1]),
            fmt17(row[2])
        )?;
    }
    Ok(())
}

/// Companion plot script for a simulate CSV.
pub fn gnuplot_script(csv_path: &str) -> String {
    format!(
        "# population curves from {csv_path}\n\
         set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel 't'\n\
         set ylabel 'population'\n\
         plot '{csv_path}' using 1:2 with lines, \\\n\
         \x20\x20\x20\x20 '{csv_path}' using 1:3 with lines, \\\n\
         \x20\x20\x20\x20 '{csv_path}' using 1:4 with lines\n"
    )
}

/// Exit status for the audit subcommand: 0 all MATCH, 2 any MISMATCH,
/// 3 any UNDEFINED.
pub fn audit_exit_code(report: &ecoepi_hpm::AuditReport<f64>) -> u8 {
    if report.undefined_count() > 0 {
        3
    } else if report.mismatch_count() > 0 {
        2
    } else {
        0
    }
}

/// Run the audit; the human table goes to `table_out`, the machine-readable
/// record stream optionally elsewhere.
pub fn run_audit<W: Write>(
    config: &RunConfig,
    table_out: &mut W,
    records_out: Option<&mut dyn Write>,
) -> Result<u8, CommandError> {
    let report = audit(&config.params, &config.ics);
    write!(table_out, "{}", report.render_table())?;
    if let Some(out) = records_out {
        write!(out, "{}", report.render_records())?;
    }
    Ok(audit_exit_code(&report))
}

/// Table of the 23 printed constants.
pub fn run_coeffs<W: Write>(config: &RunConfig, out: &mut W) -> Result<(), CommandError> {
    let coeffs = paper_coefficients(&config.params, &config.ics)?;
    writeln!(out, "{:<5} {:<10} {:>24}", "name", "exponent", "value")?;
    let mut print = |constants: &[PaperConstant<f64>]| -> std::io::Result<()> {
        for constant in constants {
            writeln!(
                out,
                "{:<5} {:<10} {:>24}",
                constant.name,
                constant.rate.symbol(),
                fmt17(constant.value)
            )?;
        }
        Ok(())
    };
    print(&coeffs.a)?;
    print(&coeffs.b)?;
    print(&coeffs.c)?;
    writeln!(
        out,
        "sums: A {}  B {}  C {}",
        fmt17(coeffs.sum_a()),
        fmt17(coeffs.sum_b()),
        fmt17(coeffs.sum_c())
    )?;
    Ok(())
}
