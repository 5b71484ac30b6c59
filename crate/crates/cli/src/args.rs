use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "pdm",
    version,
    about = "Position-dependent-mass model in a semi-infinite layer"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub v0: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write here instead of standard output. The file appears only if the
    /// command succeeds.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Sep,
    Susy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Intertwine,
    Commute,
    Susy,
    Massgen,
    Coeffs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    Pt,
    #[value(name = "2d")]
    Plane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Dense,
    Lanczos,
    SineModes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Hyperbolic,
    Rational,
    Trigonometric,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels and degeneracies up to level nmax.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 8)]
        nmax: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// A closed-form eigenfunction sampled on the layer.
    Wavefunction {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Basis::Sep)]
        basis: Basis,
        /// Radial quantum number (separable basis).
        #[arg(long)]
        n: Option<u32>,
        /// Transverse quantum number (separable basis).
        #[arg(long)]
        l: Option<u32>,
        /// Level N (intertwining basis).
        #[arg(long = "N")]
        big_n: Option<u32>,
        /// Even label N0 ≤ N (intertwining basis).
        #[arg(long = "N0")]
        n0: Option<u32>,
        /// Nodes as NXxNY.
        #[arg(long, default_value = "64x32")]
        grid: String,
        #[arg(long, default_value_t = 5.0)]
        x_max: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Zero modes of the intertwiner sampled on the layer, stacked in one table.
    ZeroModes {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated positive indices.
        #[arg(long, value_delimiter = ',', required = true)]
        s_list: Vec<f64>,
        #[arg(long, default_value = "64x32")]
        grid: String,
        #[arg(long, default_value_t = 5.0)]
        x_max: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Orthogonal matrix between the two bases at level N.
    BasisTransform {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "N")]
        big_n: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Residual checks; exits with status 2 if any check fails.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Transverse label used by the radial identities.
        #[arg(long, default_value_t = 1.0)]
        l: f64,
        /// Nodes per axis of the planar stencil probes.
        #[arg(long, default_value_t = 601)]
        plane_nodes: usize,
        /// Nodes of the radial stencil probes.
        #[arg(long, default_value_t = 1001)]
        line_nodes: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Finite-difference eigenvalues against the closed form.
    Oracle {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum)]
        mode: OracleMode,
        /// Node count for pt, NXxNY cells for 2d.
        #[arg(long)]
        grid: Option<String>,
        /// Transverse label (pt mode).
        #[arg(long, default_value_t = 0)]
        l: u32,
        /// Eigenvalues to compare.
        #[arg(long, default_value_t = 6)]
        count: usize,
        /// Truncation of the layer, default 5/q (2d mode).
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long, value_enum, default_value_t = SolverArg::SineModes)]
        solver: SolverArg,
        /// Include wall-clock runtime in the metadata (breaks byte-identical
        /// reruns).
        #[arg(long)]
        timings: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Mass and intertwiner coefficients of one mass class, with constraint
    /// residuals.
    MassClass {
        #[arg(long, value_enum)]
        class: ClassArg,
        /// a,b,c,d,g
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 1,
            allow_negative_numbers = true,
            required = true
        )]
        constants: Vec<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        x_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        x_max: Option<f64>,
        /// Sample points for the residual scan.
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}
