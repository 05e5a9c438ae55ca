//! Command-line front end: solve for the fixed profile, run and export
//! iterations, draw the profile figure, and drive the verification suites.

mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use stribola::fixtures::{seed, SeedKind};
use stribola::solve::StribolaSolution;
use stribola::verify::{run_suite, Suite};
use stribola::{ops, solve, Error, GridFunction, Tolerances};

const EX_NONCONVERGENCE: u8 = 2;
const EX_USAGE: u8 = 64;
const EX_CANTCREAT: u8 = 73;
const EX_SOFTWARE: u8 = 70;

#[derive(Parser)]
#[command(
    name = "stribola",
    version,
    about = "Fixed-profile solver for the turning-curve equation on [0,1]",
    long_about = "Computes the unique decreasing profile h on [0,1] whose reflected graph,\n\
                  scaled by 1/kappa, is its own derivative; brackets kappa = 0.278877...;\n\
                  exports iterate curves; and runs the numerical verification suites."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve to the fixed profile and report kappa, bracket and residuals
    Kappa {
        /// Grid size: a power of two between 8 and 1048576
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        /// Starting profile: one|linear|step|quartic|sigmoid-like
        #[arg(long, default_value = "one")]
        seed: String,
        /// Override the fixed-point stopping threshold
        #[arg(long)]
        tol_fix: Option<f64>,
        /// Write the full report (header + profile CSV) to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the step n times; print the trace table and export curves
    Iterate {
        /// Number of applications
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Grid size: a power of two between 8 and 1048576
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        /// Starting profile: one|linear|step|quartic|sigmoid-like
        #[arg(long, default_value = "one")]
        seed: String,
        /// Output format: csv (one file per iterate) or svg (one overlay)
        #[arg(long, default_value = "csv")]
        format: String,
        /// Output directory (csv) or file (svg)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and print pass/fail lines
    Verify {
        /// Suite: inverse|operators|crossing|lemmas|convergence|all
        #[arg(long)]
        suite: String,
        /// Override the fixed-point stopping threshold
        #[arg(long)]
        tol_fix: Option<f64>,
        /// Also write the rendered report to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve and draw the profile with its derivative as an SVG figure
    Figure1 {
        /// Grid size: a power of two between 8 and 1048576
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        /// Output SVG path
        #[arg(long, default_value = "figure1.svg")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EX_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stribola: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> CliError {
        CliError {
            code: EX_USAGE,
            message: message.into(),
        }
    }

    fn cantcreat(path: &Path, err: std::io::Error) -> CliError {
        CliError {
            code: EX_CANTCREAT,
            message: format!("cannot write {}: {err}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match e {
            Error::NonConvergence { .. } => EX_NONCONVERGENCE,
            Error::InvalidArgument(_) | Error::InvalidTolerances(_) => EX_USAGE,
            _ => EX_SOFTWARE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Kappa {
            grid,
            seed,
            tol_fix,
            out,
        } => cmd_kappa(grid, &seed, tol_fix, out.as_deref()),
        Command::Iterate {
            n,
            grid,
            seed,
            format,
            out,
        } => cmd_iterate(n, grid, &seed, &format, out.as_deref()),
        Command::Verify { suite, tol_fix, out } => cmd_verify(&suite, tol_fix, out.as_deref()),
        Command::Figure1 { grid, out } => cmd_figure1(grid, &out),
    }
}

fn validated_tolerances(grid: usize, tol_fix: Option<f64>) -> Result<Tolerances, CliError> {
    if !grid.is_power_of_two() || !(8..=1 << 20).contains(&grid) {
        return Err(CliError::usage(format!(
            "--grid must be a power of two between 8 and {}, got {grid}",
            1 << 20
        )));
    }
    let mut tol = Tolerances::with_grid(grid);
    if let Some(t) = tol_fix {
        tol.tol_fix = t;
    }
    tol.validate()
        .map_err(|e| CliError::usage(e.to_string()))?;
    Ok(tol)
}

fn parse_seed(name: &str, grid: usize) -> Result<GridFunction, CliError> {
    let kind = SeedKind::parse(name).ok_or_else(|| {
        CliError::usage(format!(
            "unknown seed {name:?}; choose one of one|linear|step|quartic|sigmoid-like"
        ))
    })?;
    Ok(seed(kind, grid))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::cantcreat(path, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::cantcreat(path, e))
}

fn cmd_kappa(
    grid: usize,
    seed_name: &str,
    tol_fix: Option<f64>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let tol = validated_tolerances(grid, tol_fix)?;
    let f0 = parse_seed(seed_name, grid)?;
    let sol = solve::solve(&f0, &tol)?;
    print!("{}", sol.report_header());
    if let Some(path) = out {
        write_file(path, &sol.to_report())?;
    }
    Ok(())
}

fn cmd_iterate(
    n: usize,
    grid: usize,
    seed_name: &str,
    format: &str,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let tol = validated_tolerances(grid, None)?;
    let f0 = parse_seed(seed_name, grid)?;
    let (curves, trace) = ops::iterate_collect(&f0, n, &tol)?;
    print!("{}", trace.to_csv());
    match format {
        "csv" => {
            let dir = out.unwrap_or(Path::new("."));
            for (k, curve) in curves.iter().enumerate() {
                write_file(&dir.join(format!("h_{k}.csv")), &curve.to_csv())?;
            }
            write_file(&dir.join("trace.csv"), &trace.to_csv())?;
        }
        "svg" => {
            let path = out.unwrap_or(Path::new("iterates.svg"));
            write_file(path, &iterates_svg(&curves))?;
        }
        other => {
            return Err(CliError::usage(format!(
                "--format must be csv or svg for iterate, got {other:?}"
            )))
        }
    }
    Ok(())
}

fn iterates_svg(curves: &[GridFunction]) -> String {
    const PALETTE: [&str; 8] = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
    ];
    let mut fig = svg::Figure::new((-0.02, 1.02), (-0.04, 1.04));
    fig.axes(&[0.0, 1.0]);
    for (k, curve) in curves.iter().enumerate() {
        let pts: Vec<(f64, f64)> = curve
            .knots()
            .iter()
            .zip(curve.values())
            .map(|(&x, &v)| (x, v))
            .collect();
        let pts = svg::decimate(pts, 512);
        let first = pts[0].1;
        let last = pts[pts.len() - 1].1;
        fig.polyline(
            &pts,
            PALETTE[k % PALETTE.len()],
            &format!("data-role=\"iterate\" data-step=\"{k}\" data-y0=\"{first:.6}\" data-y1=\"{last:.6}\""),
        );
    }
    fig.text(0.88, 0.97, &format!("{} curves", curves.len()));
    fig.finish()
}

fn cmd_verify(suite: &str, tol_fix: Option<f64>, out: Option<&Path>) -> Result<(), CliError> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(suite).ok_or_else(|| {
            CliError::usage(format!(
                "unknown suite {suite:?}; choose inverse|operators|crossing|lemmas|convergence|all"
            ))
        })?]
    };
    let tol = {
        let mut t = Tolerances::default();
        if let Some(tf) = tol_fix {
            t.tol_fix = tf;
        }
        t.validate().map_err(|e| CliError::usage(e.to_string()))?;
        t
    };
    let mut rendered = String::new();
    let mut all_passed = true;
    for s in suites {
        let report = run_suite(s, &tol)?;
        rendered.push_str(&report.render());
        all_passed &= report.passed();
    }
    print!("{rendered}");
    if let Some(path) = out {
        write_file(path, &rendered)?;
    }
    if all_passed {
        Ok(())
    } else {
        Err(CliError {
            code: 1,
            message: "verification failures (see report)".into(),
        })
    }
}

fn cmd_figure1(grid: usize, out: &Path) -> Result<(), CliError> {
    let tol = validated_tolerances(grid, None)?;
    let sol = solve::solve(&seed(SeedKind::One, grid), &tol)?;
    write_file(out, &figure1_svg(&sol)?)?;
    Ok(())
}

fn figure1_svg(sol: &StribolaSolution) -> Result<String, CliError> {
    let kappa = sol.kappa;
    let peak = 1.0 / kappa;
    let mut fig = svg::Figure::new((-0.02, 1.05), (-(peak + 0.3), 1.15));
    fig.axes(&[1.0, -1.0, -2.0, -3.0]);

    let h_pts: Vec<(f64, f64)> = sol
        .h
        .knots()
        .iter()
        .zip(sol.h.values())
        .map(|(&x, &v)| (x, v))
        .collect();
    let h_pts = svg::decimate(h_pts, 600);
    fig.polyline(
        &h_pts,
        "#1f77b4",
        &format!(
            "data-role=\"profile\" data-y0=\"{:.6}\" data-y1=\"{:.6}\"",
            h_pts[0].1,
            h_pts[h_pts.len() - 1].1
        ),
    );

    // the derivative is the reflected profile scaled by -1/kappa
    let reflected = sol.h.pseudo_inverse()?;
    let d_pts: Vec<(f64, f64)> = reflected
        .knots()
        .iter()
        .zip(reflected.values())
        .map(|(&x, &v)| (x, -v / kappa))
        .collect();
    let d_pts = svg::decimate(d_pts, 600);
    fig.polyline(
        &d_pts,
        "#d62728",
        &format!(
            "data-role=\"derivative\" data-start=\"{:.6}\" data-end=\"{:.6}\"",
            d_pts[0].1,
            d_pts[d_pts.len() - 1].1
        ),
    );

    fig.hline(
        kappa,
        "#2ca02c",
        &format!("id=\"kappa-marker\" data-kappa=\"{kappa:.10}\""),
    );
    fig.text(0.4, kappa + 0.08, &format!("kappa = {kappa:.6}"));
    fig.text(0.02, -peak - 0.15, &format!("-1/kappa = {:.4}", -peak));
    Ok(fig.finish())
}
