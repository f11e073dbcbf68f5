//! Command-line front end.
//!
//! Every command writes CSV (RFC 4180) preceded by `#` comment lines holding
//! the library version and the resolved command line. Exit codes: 0 on
//! success, 2 when a `--check` comparison fails, 1 on any error.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::densities::Density;
use crate::efficiency::{
    are_nonserial, are_serial, serial_bound, slope_bound, student_score_bounds, universal_bound,
    wilcoxon_vs_vdw, UniversalBound,
};
use crate::error::{Error, Result};
use crate::functionals::DEFAULT_TOL;
use crate::scores::Score;
use crate::serial_stats::{autocorr, ranks_with, read_series, write_results, Statistic, TiePolicy};
use crate::simulate::{write_estimates, SimulationConfig};
use crate::tables::{check_rows, column_name, compute_table, Table, COLUMNS};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "RANKARE_THREADS";

/// Tolerance for `gaussian-check`.
pub const GAUSSIAN_CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "rankare", version, about = "Asymptotic relative efficiencies of rank tests")]
pub struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute one of the reference efficiency tables (1: Hodges-Lehmann,
    /// 2: Student, 3: power-exponential).
    Table {
        which: Table,
        /// Compare every cell with the published value.
        #[arg(long)]
        check: bool,
        /// Tolerance for --check (default 1e-3 for table 1, 1e-4 otherwise).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Efficiency curves over a parameter grid.
    Are {
        #[arg(long)]
        j1: Score,
        #[arg(long)]
        j2: Score,
        #[arg(long)]
        j3: Option<Score>,
        #[arg(long)]
        j4: Option<Score>,
        /// Also compute the serial efficiency.
        #[arg(long)]
        serial: bool,
        /// student, powerexp or hl:<a> (the grid then runs over eps).
        #[arg(long)]
        family: String,
        /// Grid as start:stop:step.
        #[arg(long)]
        range: String,
        /// Quadrature tolerance.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// All closed-form efficiency bounds.
    Bounds,
    /// Standardized rank autocorrelations of a series.
    Autocorr {
        #[arg(long)]
        file: PathBuf,
        /// Comma-separated lags.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        lags: Vec<usize>,
        /// vdw, sww, kendall or J1*J2.
        #[arg(long, default_value = "vdw")]
        stat: Statistic,
        /// reject, or random:SEED to break ties at random.
        #[arg(long, default_value = "reject")]
        ties: TiePolicy,
    },
    /// Monte Carlo power study described by a TOML file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Gaussian closed forms against their computed values.
    GaussianCheck,
}

/// Output of a command: the text to emit and whether a check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub check_failed: bool,
}

fn header(args: &[String]) -> String {
    let mut h = format!("# rankare {}\n", env!("CARGO_PKG_VERSION"));
    let shown: Vec<&str> = args.iter().skip(1).map(String::as_str).collect();
    let _ = writeln!(h, "# command: {}", shown.join(" "));
    h
}

fn fmt_cell(r: &Result<f64>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(_) => String::new(),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Divergence(_) => "divergence",
        Error::NonConvergence { .. } => "nonconvergence",
        Error::Precondition(_) => "precondition",
        Error::OutsideF2(_) => "outside-f2",
        Error::Unsupported(_) => "unsupported",
        Error::Shape(_) => "shape",
        Error::ExtrapolationUnstable { .. } => "extrapolation-unstable",
        Error::NoBracket(_) => "no-bracket",
        Error::Ties { .. } => "ties",
        Error::BudgetExceeded(_) => "budget",
        Error::Parse(_) => "parse",
        Error::Io(_) => "io",
    }
}

fn csv_string(rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn cmd_table(which: Table, check: bool, tol: Option<f64>) -> Result<Outcome> {
    let rows = compute_table(which)?;
    let mut out = vec![{
        let mut h = vec![which.parameter().to_string()];
        h.extend(COLUMNS.iter().map(|&q| column_name(q).to_string()));
        h.push("note".into());
        h
    }];
    for r in &rows {
        let mut line = vec![r.param.to_string()];
        line.extend(r.cells.iter().map(fmt_cell));
        let mut notes: Vec<String> = r
            .cells
            .iter()
            .zip(COLUMNS)
            .filter_map(|(c, q)| c.as_ref().err().map(|e| format!("{}: {}", column_name(q), error_kind(e))))
            .collect();
        if r.outside_f2 {
            notes.push("infinite variance".into());
        }
        line.push(notes.join("; "));
        out.push(line);
    }
    let mut text = csv_string(out)?;
    let mut failed = false;
    if check {
        let tol = tol.unwrap_or(which.default_tol());
        let checks = check_rows(which, &rows, tol);
        let fails = checks.iter().filter(|c| !c.pass).count();
        let _ = writeln!(text, "# check tolerance {tol}: {} of {} cells pass", checks.len() - fails, checks.len());
        for c in checks.iter().filter(|c| !c.pass) {
            let reference = c.reference.map_or("divergent".to_string(), |v| v.to_string());
            let computed = match &c.computed {
                Ok(v) => v.to_string(),
                Err(e) => format!("error ({e})"),
            };
            let _ = writeln!(
                text,
                "# FAIL {}={} {}: reference {reference}, computed {computed}",
                which.parameter(),
                c.param,
                column_name(c.column)
            );
        }
        failed = fails > 0;
    }
    Ok(Outcome {
        text,
        check_failed: failed,
    })
}

/// Parses `start:stop:step` into an inclusive grid.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse(format!("bad range {s:?} (expected start:stop:step)")))?;
    let [start, stop, step] = parts[..] else {
        return Err(Error::Parse(format!("bad range {s:?} (expected start:stop:step)")));
    };
    if !(step > 0.0 && stop >= start && start.is_finite() && stop.is_finite()) {
        return Err(Error::Parse(format!("bad range {s:?}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    // Points are start + i * step, rounded to drop accumulated noise.
    Ok((0..=count)
        .map(|i| {
            let x = start + i as f64 * step;
            (x * 1e12).round() / 1e12
        })
        .collect())
}

fn family_at(family: &str, p: f64) -> Result<Density> {
    match family.split(':').collect::<Vec<_>>().as_slice() {
        ["student"] => Density::student(p),
        ["powerexp"] => Density::power_exp(p),
        ["hl", a] => {
            let a = a
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad family {family:?}")))?;
            Density::hodges_lehmann(a, p)
        }
        _ => Err(Error::Parse(format!(
            "unknown family {family:?} (expected student, powerexp or hl:<a>)"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_are(
    j1: &Score,
    j2: &Score,
    j3: Option<&Score>,
    j4: Option<&Score>,
    serial: bool,
    family: &str,
    range: &str,
    tol: f64,
) -> Result<Outcome> {
    let grid = parse_range(range)?;
    // Serial pairs: (j1, j2) against (j3, j4) when given, else (j1, j1)
    // against (j2, j2).
    let (a1, a2, b1, b2) = match (j3, j4) {
        (Some(j3), Some(j4)) => (j1, j2, j3, j4),
        (None, None) => (j1, j1, j2, j2),
        _ => return Err(Error::Parse("--j3 and --j4 go together".into())),
    };
    let (first, second) = (a1, b1);
    let mut header = vec!["param".to_string(), "ARE".to_string()];
    if serial {
        header.push("ARE*".into());
    }
    header.push("note".into());
    let mut rows = vec![header];
    for p in grid {
        let f = family_at(family, p)?;
        let mut notes = Vec::new();
        let are = crate::efficiency::are_nonserial_tol(first, second, &f, tol).map(|r| r.are);
        if let Err(e) = &are {
            notes.push(format!("ARE: {}", error_kind(e)));
        }
        let mut line = vec![p.to_string(), fmt_cell(&are)];
        if serial {
            let s = crate::efficiency::are_serial_tol(a1, a2, b1, b2, &f, tol);
            match &s {
                Ok(r) if r.outside_f2 => notes.push("infinite variance".into()),
                Err(e) => notes.push(format!("ARE*: {}", error_kind(e))),
                _ => {}
            }
            line.push(fmt_cell(&s.map(|r| r.are)));
        }
        line.push(notes.join("; "));
        rows.push(line);
    }
    Ok(Outcome {
        text: csv_string(rows)?,
        check_failed: false,
    })
}

fn cmd_bounds() -> Result<Outcome> {
    let mut rows = vec![vec![
        "bound".to_string(),
        "scores".to_string(),
        "lower".to_string(),
        "upper".to_string(),
    ]];
    let mut push = |bound: &str, scores: String, lower: Option<f64>, upper: f64| {
        rows.push(vec![
            bound.to_string(),
            scores,
            lower.map_or(String::new(), |v| v.to_string()),
            upper.to_string(),
        ]);
    };
    for (which, name) in [
        (UniversalBound::WilcoxonVsVdw, "wilcoxon/vdw"),
        (UniversalBound::CauchyVsWilcoxon, "cauchy/wilcoxon"),
        (UniversalBound::CauchyVsVdw, "cauchy/vdw"),
    ] {
        push("universal", name.into(), None, universal_bound(which));
    }
    for i in 1..=10 {
        let nu = i as f64 / 10.0;
        let b = student_score_bounds(nu)?;
        push("student-scores", format!("student:{nu}/wilcoxon"), None, b.vs_wilcoxon);
        push("student-scores", format!("student:{nu}/vdw"), None, b.vs_vdw);
    }
    for j in [
        Score::wilcoxon(),
        Score::van_der_waerden(),
        Score::cauchy(),
        Score::student(0.5)?,
        Score::student(3.0)?,
    ] {
        let (lower, upper) = slope_bound(&j)?.on_are();
        push("slope", format!("{j}/wilcoxon"), lower, upper);
    }
    let w = Score::wilcoxon();
    let v = Score::van_der_waerden();
    for (a, b) in [(&v, &v), (&v, &w), (&w, &v), (&w, &w)] {
        let bound = serial_bound(a, b)?;
        let name = match bound {
            crate::efficiency::SerialBound::SwwOverPair(_) => format!("sww/({a},{b})"),
            crate::efficiency::SerialBound::PairOverSww(_) => format!("({a},{b})/sww"),
        };
        push("serial", name, None, bound.value());
    }
    Ok(Outcome {
        text: csv_string(rows)?,
        check_failed: false,
    })
}

fn cmd_autocorr(file: &PathBuf, lags: &[usize], stat: &Statistic, ties: TiePolicy) -> Result<Outcome> {
    let x = read_series(file)?;
    let r = ranks_with(&x, ties)?;
    let rows = lags
        .iter()
        .map(|&k| autocorr(&r, k, stat))
        .collect::<Result<Vec<_>>>()?;
    let mut buf = Vec::new();
    write_results(&mut buf, &rows)?;
    Ok(Outcome {
        text: String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))?,
        check_failed: false,
    })
}

fn cmd_simulate(config: &PathBuf) -> Result<Outcome> {
    let text = std::fs::read_to_string(config)?;
    let cfg = SimulationConfig::from_toml(&text)?;
    let rows = cfg.run()?;
    let mut buf = Vec::new();
    // The resolved configuration goes into the header as comments.
    let resolved = toml::to_string(&cfg).map_err(|e| Error::Io(e.to_string()))?;
    for line in resolved.lines().filter(|l| !l.is_empty()) {
        writeln!(buf, "# config: {line}")?;
    }
    write_estimates(&mut buf, &rows)?;
    Ok(Outcome {
        text: String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))?,
        check_failed: false,
    })
}

fn cmd_gaussian_check() -> Result<Outcome> {
    let g = Density::gaussian();
    let w = Score::wilcoxon();
    let v = Score::van_der_waerden();
    let row = wilcoxon_vs_vdw(&g, DEFAULT_TOL)?;
    let nonserial = are_nonserial(&w, &v, &g)?;
    let serial = are_serial(&w, &w, &v, &v, &g)?;
    let c = 0.5 / PI.sqrt();
    let items = [
        ("C", row.c, c),
        ("D", row.d?, c),
        ("ARE", nonserial.are, 3.0 / PI),
        ("ARE*", serial.are, 9.0 / (PI * PI)),
    ];
    let mut rows = vec![vec![
        "quantity".to_string(),
        "computed".to_string(),
        "exact".to_string(),
        "abs_diff".to_string(),
    ]];
    let mut failed = false;
    for (name, got, want) in items {
        let diff = (got - want).abs();
        failed |= !(diff <= GAUSSIAN_CHECK_TOL);
        rows.push(vec![name.into(), got.to_string(), want.to_string(), format!("{diff:e}")]);
    }
    Ok(Outcome {
        text: csv_string(rows)?,
        check_failed: failed,
    })
}

/// Runs a parsed command line and returns its output.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Table { which, check, tol } => cmd_table(*which, *check, *tol),
        Command::Are {
            j1,
            j2,
            j3,
            j4,
            serial,
            family,
            range,
            tol,
        } => cmd_are(j1, j2, j3.as_ref(), j4.as_ref(), *serial, family, range, *tol),
        Command::Bounds => cmd_bounds(),
        Command::Autocorr {
            file,
            lags,
            stat,
            ties,
        } => cmd_autocorr(file, lags, stat, *ties),
        Command::Simulate { config } => cmd_simulate(config),
        Command::GaussianCheck => cmd_gaussian_check(),
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{THREADS_ENV}={v:?} is not a thread count")))?;
        // A pool may already exist when called twice in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Entry point shared by the binary and the tests.
pub fn main_with_args(args: Vec<String>) -> ExitCode {
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = configure_threads().and_then(|()| execute(&cli));
    match result {
        Ok(outcome) => {
            let text = format!("{}{}", header(&args), outcome.text);
            let written = match &cli.output {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => std::io::stdout().lock().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if outcome.check_failed {
                eprintln!("check failed");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
