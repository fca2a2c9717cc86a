mod commands;
mod num;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// General-affine invariants, moving frames and constant-curvature curves.
#[derive(Parser, Debug)]
#[command(name = "gacurve", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Where the curve comes from. At most one of the three sources.
#[derive(Args, Debug, Clone, Default)]
pub struct SourceArgs {
    /// Catalog curve: line, parabola, power, xlogx, spiral, exp, ellipse, hyperbola.
    #[arg(long, value_name = "NAME")]
    pub catalog: Option<String>,
    /// Catalog parameter override, repeatable.
    #[arg(long = "param", value_name = "K=V", requires = "catalog")]
    pub params: Vec<String>,
    /// Graph `y = f(x)`.
    #[arg(long, value_name = "EXPR")]
    pub curve: Option<String>,
    /// Parametric curve `(x(t), y(t))`.
    #[arg(long, num_args = 2, value_names = ["XEXPR", "YEXPR"], allow_hyphen_values = true)]
    pub parametric: Option<Vec<String>>,
    /// Sample window in the curve parameter.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub window: Option<Vec<f64>>,
}

/// Curvature profile for reconstruction.
#[derive(Args, Debug, Clone, Default)]
pub struct ProfileArgs {
    /// Constant curvature.
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Curvature as an expression in `s`.
    #[arg(long, value_name = "EXPR")]
    pub k_expr: Option<String>,
    /// CSV file with columns `s,k` (header optional).
    #[arg(long, value_name = "PATH")]
    pub k_samples: Option<PathBuf>,
    /// Signature, +1 or -1.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<i8>,
    /// Curve parameter whose Frenet frame starts the reconstruction (with a source).
    #[arg(long, allow_negative_numbers = true)]
    pub at: Option<f64>,
    /// Arc-length interval; the initial frame sits at s = 0.
    #[arg(long, num_args = 2, value_names = ["S0", "S1"], allow_negative_numbers = true)]
    pub span: Option<Vec<f64>>,
    /// RK4 step.
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Integrate constant profiles with RK4 instead of the matrix exponential.
    #[arg(long)]
    pub rk4: bool,
}

impl ProfileArgs {
    pub fn any(&self) -> bool {
        self.k.is_some() || self.k_expr.is_some() || self.k_samples.is_some()
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Table of S1, S2, S3, sigma, ds/dx, k, k_s along a curve.
    Invariants {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(short = 'n', default_value_t = 11)]
        count: usize,
        #[arg(long)]
        json: bool,
        /// Write CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Right frame, left frame and Frenet frame along a curve.
    Frames {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(short = 'n', default_value_t = 11)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
    /// Family of a constant-curvature curve.
    Classify {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(short = 'n', default_value_t = 21)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
    /// Rebuild a curve from its curvature.
    Reconstruct {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        src: SourceArgs,
        #[arg(short = 'n', default_value_t = 201)]
        count: usize,
        #[arg(long)]
        json: bool,
        /// Write CSV (s,x,y,k,sigma) here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Orbit t -> exp(tX) p of a one-parameter subgroup.
    Orbit {
        /// Generator rows `a11 a12 b1 a21 a22 b2`.
        #[arg(long = "gen", num_args = 6, required = true, allow_negative_numbers = true)]
        generator: Vec<f64>,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], required = true, allow_negative_numbers = true)]
        point: Vec<f64>,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
        window: Option<Vec<f64>>,
        #[arg(short = 'n', default_value_t = 21)]
        count: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Randomized check of the transformation laws.
    Verify {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// SVG plot of a curve or a reconstruction, with optional frame glyphs.
    Plot {
        #[command(flatten)]
        src: SourceArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(short = 'n', default_value_t = 201)]
        count: usize,
        /// Draw e1, e2, t, n at every M-th sample.
        #[arg(long, value_name = "M")]
        frames: Option<usize>,
        #[arg(long, required = true)]
        svg: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Invariants {
            src,
            count,
            json,
            out,
        } => commands::invariants(&src, count, json, out.as_deref()),
        Cmd::Frames { src, count, json } => commands::frames(&src, count, json),
        Cmd::Classify { src, count, json } => commands::classify(&src, count, json),
        Cmd::Reconstruct {
            profile,
            src,
            count,
            json,
            out,
            svg,
        } => commands::reconstruct(&profile, &src, count, json, out.as_deref(), svg.as_deref()),
        Cmd::Orbit {
            generator,
            point,
            window,
            count,
            json,
            out,
            svg,
        } => commands::orbit(
            &generator,
            &point,
            window.as_deref(),
            count,
            json,
            out.as_deref(),
            svg.as_deref(),
        ),
        Cmd::Verify {
            trials,
            seed,
            json,
            inject_fault,
        } => commands::verify(trials as usize, seed, json, inject_fault),
        Cmd::Plot {
            src,
            profile,
            count,
            frames,
            svg,
        } => commands::plot(&src, &profile, count, frames, &svg),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.msg.is_empty() {
                eprintln!("error: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}
