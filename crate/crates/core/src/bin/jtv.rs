//! Command-line front end: transforms, variation reports, filter design
//! and application, distributed simulation, Wiener comparison, and
//! approximation-order sweeps. All data goes to stdout, diagnostics to
//! stderr; exit code 1 flags usage errors and 2 data errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use jtv_core::filters::{
    apply_polynomial_filter, apply_spectral_filter, eigenvalue_grids, fit_polynomial_response,
    ideal_lowpass_response, response_error, JointResponse, Polynomial1D,
};
use jtv_core::graph::MatrixKind;
use jtv_core::io::{self, FilterObject};
use jtv_core::signal::TemporalGraphSignal;
use jtv_core::spectral::{ijft, jft, JointBasis};
use jtv_core::wiener::{competing_operators, mse_report, CovarianceModel};
use jtv_core::{distributed, variation, Error};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "jtv", version = "v1", about = "spectral analysis and filtering of periodic temporal graph signals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Forward,
    Inverse,
}

#[derive(Clone, Copy, ValueEnum)]
enum Representation {
    Laplacian,
    Normalized,
    Adjacency,
}

impl From<Representation> for MatrixKind {
    fn from(r: Representation) -> MatrixKind {
        match r {
            Representation::Laplacian => MatrixKind::Laplacian,
            Representation::Normalized => MatrixKind::NormalizedLaplacian,
            Representation::Adjacency => MatrixKind::Adjacency,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ResponseKind {
    IdealLowpass,
    Rational,
}

/// Flags shared by the commands that evaluate a target response.
#[derive(Args)]
struct ResponseArgs {
    /// Target response family
    #[arg(long, value_enum, default_value = "ideal-lowpass")]
    response: ResponseKind,
    /// Comma-separated coefficients of f (ascending powers), for rational
    #[arg(long, default_value = "1,1")]
    f_coeffs: String,
    /// Comma-separated coefficients of g (ascending powers), for rational
    #[arg(long, default_value = "0,1")]
    g_coeffs: String,
}

impl ResponseArgs {
    fn build(&self) -> Result<JointResponse, Error> {
        Ok(match self.response {
            ResponseKind::IdealLowpass => ideal_lowpass_response(),
            ResponseKind::Rational => JointResponse::Rational {
                f: Polynomial1D::new(parse_coeff_list(&self.f_coeffs)?),
                g: Polynomial1D::new(parse_coeff_list(&self.g_coeffs)?),
                hermitian_time: true,
            },
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Joint Fourier transform of a signal, or its inverse from a spectrum
    Transform {
        graph: PathBuf,
        /// Signal CSV (forward) or spectrum CSV (inverse)
        input: PathBuf,
        #[arg(long, value_enum, default_value = "laplacian")]
        representation: Representation,
        #[arg(long, value_enum, default_value = "forward")]
        direction: Direction,
    },
    /// Inverse joint Fourier transform (shorthand for transform --direction inverse)
    Inverse {
        graph: PathBuf,
        spectrum: PathBuf,
        #[arg(long, value_enum, default_value = "laplacian")]
        representation: Representation,
    },
    /// Local variation table and the global p-Dirichlet value
    Variation {
        graph: PathBuf,
        signal: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Fit a bivariate polynomial filter to a target response
    Design {
        graph: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[arg(long, value_enum, default_value = "laplacian")]
        representation: Representation,
        /// Use a uniform graph-eigenvalue grid of this many points instead
        /// of the instance's eigenvalues
        #[arg(long)]
        grid: Option<usize>,
        #[command(flatten)]
        target: ResponseArgs,
    },
    /// Apply a filter spec to a signal
    Apply {
        graph: PathBuf,
        signal: PathBuf,
        #[arg(long)]
        filter: PathBuf,
        #[arg(long, value_enum, default_value = "laplacian")]
        representation: Representation,
    },
    /// Run the distributed simulator and print its communication ledger
    Simulate {
        graph: PathBuf,
        signal: PathBuf,
        /// Polynomial filter spec JSON
        #[arg(long)]
        filter: PathBuf,
        /// Verify the simulator against the direct matrix-free application
        #[arg(long)]
        check: bool,
        /// Report raw schedule traffic instead of the closed-form charge
        #[arg(long)]
        measured: bool,
        /// Also write the simulated output signal to this path
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte-Carlo comparison of joint, time-only, and graph-only Wiener filters
    Wiener {
        graph: PathBuf,
        #[arg(long)]
        t: usize,
        /// Interference time-density f, comma-separated ascending coefficients
        #[arg(long, default_value = "1,1")]
        f_coeffs: String,
        /// Signal graph-density g, comma-separated ascending coefficients
        #[arg(long, default_value = "0,1")]
        g_coeffs: String,
        #[arg(long, default_value_t = 10000)]
        draws: usize,
        /// Monte-Carlo seed; JFT_SEED in the environment overrides the default
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Approximation error of polynomial fits over a (K, L) order grid
    LowpassSweep {
        graph: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
        #[arg(long, default_value_t = 8)]
        lmax: usize,
        #[arg(long, value_enum, default_value = "normalized")]
        representation: Representation,
        #[command(flatten)]
        target: ResponseArgs,
    },
}

fn parse_coeff_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|c| {
            c.trim().parse::<f64>().map_err(|_| {
                Error::InvalidArgument(format!("invalid coefficient {c:?} in {s:?}"))
            })
        })
        .collect()
}

fn seed_from(flag: Option<u64>) -> Result<u64, Error> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("JFT_SEED") {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("JFT_SEED must be an integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Transform { graph, input, representation, direction } => {
            let g = io::read_graph(&graph)?;
            match direction {
                Direction::Forward => {
                    let x = io::read_signal(&input)?;
                    let jb = JointBasis::new(&g, x.period(), representation.into())?;
                    let y = jft(&x, &jb)?;
                    print!("{}", io::spectrum_to_csv(y.values(), &jb));
                }
                Direction::Inverse => {
                    let coeffs = io::parse_spectrum(&std::fs::read_to_string(&input)?)?;
                    let jb = JointBasis::new(&g, coeffs.ncols(), representation.into())?;
                    let x = ijft(&TemporalGraphSignal::new(coeffs), &jb)?;
                    // spectra of real signals invert to real up to round-off
                    let x = match x.to_real(1e-9) {
                        Ok(real) => TemporalGraphSignal::from_real(real),
                        Err(_) => x,
                    };
                    print!("{}", io::signal_to_csv(&x));
                }
            }
            Ok(())
        }
        Command::Inverse { graph, spectrum, representation } => run(Cli {
            command: Command::Transform {
                graph,
                input: spectrum,
                representation,
                direction: Direction::Inverse,
            },
        }),
        Command::Variation { graph, signal, p } => {
            let g = io::read_graph(&graph)?;
            let x = io::read_signal(&signal)?;
            let report = variation::variation_report(&x, &g, p)?;
            let mut out = String::from("# jtv-variation v1\nn,t,local_variation\n");
            for n in 0..x.n_nodes() {
                for t in 0..x.period() {
                    let _ = writeln!(out, "{},{},{}", n + 1, t + 1, report.local[[n, t]]);
                }
            }
            let _ = writeln!(out, "# S_p p={} value={}", report.p, report.global);
            print!("{out}");
            Ok(())
        }
        Command::Design { graph, t, k, l, representation, grid, target } => {
            let g = io::read_graph(&graph)?;
            let kind: MatrixKind = representation.into();
            let jb = JointBasis::new(&g, t, kind)?;
            let (lt_grid, lg_grid) = design_grids(&jb, grid);
            let h = target.build()?;
            let pf = fit_polynomial_response(&h, &lt_grid, &lg_grid, k, l, kind)?;
            let err = response_error(&h, &pf, &lt_grid, &lg_grid)?;
            eprintln!("relative fit error: {err}");
            print!("{}", io::polynomial_filter_to_json(&pf));
            Ok(())
        }
        Command::Apply { graph, signal, filter, representation } => {
            let g = io::read_graph(&graph)?;
            let x = io::read_signal(&signal)?;
            let y = match io::read_filter_spec(&filter)? {
                FilterObject::Polynomial(pf) => apply_polynomial_filter(&x, &pf, &g, x.period())?,
                FilterObject::Response(h) => {
                    let jb = JointBasis::new(&g, x.period(), representation.into())?;
                    apply_spectral_filter(&x, &h, &jb)?
                }
            };
            print!("{}", io::signal_to_csv(&y));
            Ok(())
        }
        Command::Simulate { graph, signal, filter, check, measured, output } => {
            let g = io::read_graph(&graph)?;
            let x = io::read_signal(&signal)?;
            let pf = match io::read_filter_spec(&filter)? {
                FilterObject::Polynomial(pf) => pf,
                FilterObject::Response(_) => {
                    return Err(Error::InvalidArgument(
                        "simulate requires a polynomial filter spec".into(),
                    ))
                }
            };
            let accounting = if measured {
                distributed::Accounting::Measured
            } else {
                distributed::Accounting::Formula
            };
            let (y, ledger) = distributed::simulate_polynomial_filter_with(
                &g, x.period(), &pf, &x, accounting, None,
            )?;
            if check {
                let direct = apply_polynomial_filter(&x, &pf, &g, x.period())?;
                let diff = jtv_core::linalg::rel_error(y.values(), direct.values());
                if diff > 1e-10 {
                    return Err(Error::InvalidArgument(format!(
                        "simulator disagrees with direct application: relative error {diff}"
                    )));
                }
                eprintln!("check passed: relative error {diff}");
            }
            if let Some(path) = output {
                io::write_signal(&y, path)?;
            }
            let mut json =
                serde_json::to_string_pretty(&ledger).expect("serialization cannot fail");
            json.push('\n');
            print!("{json}");
            Ok(())
        }
        Command::Wiener { graph, t, f_coeffs, g_coeffs, draws, seed } => {
            let g = io::read_graph(&graph)?;
            let model = CovarianceModel::new(
                Polynomial1D::new(parse_coeff_list(&g_coeffs)?),
                Polynomial1D::new(parse_coeff_list(&f_coeffs)?),
            );
            let seed = seed_from(seed)?;
            let ops = competing_operators(&model, &g, t)?;
            let rows = mse_report(&model, &g, t, &ops, draws, seed)?;
            let mut out = String::from("# jtv-mse v1\nfilter,mse,stderr,draws\n");
            for r in rows {
                let _ = writeln!(out, "{},{},{},{}", r.name, r.mse, r.stderr, r.draws);
            }
            print!("{out}");
            Ok(())
        }
        Command::LowpassSweep { graph, t, kmax, lmax, representation, target } => {
            let g = io::read_graph(&graph)?;
            let kind: MatrixKind = representation.into();
            let jb = JointBasis::new(&g, t, kind)?;
            let (lt_grid, lg_grid) = eigenvalue_grids(&jb);
            let h = target.build()?;
            let mut out = String::from("# jtv-sweep v1\nK,L,error\n");
            for k in 0..=kmax {
                for l in 0..=lmax {
                    let pf = fit_polynomial_response(&h, &lt_grid, &lg_grid, k, l, kind)?;
                    let err = response_error(&h, &pf, &lt_grid, &lg_grid)?;
                    let _ = writeln!(out, "{k},{l},{err}");
                }
            }
            print!("{out}");
            Ok(())
        }
    }
}

/// Eigenvalue grids for filter design; `uniform` replaces the graph grid
/// with an evenly spaced sweep of the eigenvalue range.
fn design_grids(jb: &JointBasis, uniform: Option<usize>) -> (Vec<Complex64>, Vec<Complex64>) {
    let (lt, lg) = eigenvalue_grids(jb);
    match uniform {
        None => (lt, lg),
        Some(points) => {
            let lo = lg.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
            let hi = lg.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
            let p = points.max(2);
            let grid = (0..p)
                .map(|i| Complex64::new(lo + (hi - lo) * i as f64 / (p - 1) as f64, 0.0))
                .collect();
            (lt, grid)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::InvalidArgument(_) => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
