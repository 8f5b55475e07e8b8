//! Command-line front end: a text format for coset families plus `verify`,
//! `witness`, `search`, `render` and `example` commands.
//!
//! [`run`] executes one invocation against caller-supplied output streams and
//! returns the process exit status:
//!
//! | status | meaning |
//! |---|---|
//! | 0 | success; for `verify`, the family tiles |
//! | 1 | the family does not tile, or `witness` does not apply |
//! | 2 | usage, file, parse or budget-configuration errors |
//! | 3 | internal inconsistency (verifiers disagree, no witness found) |
//! | 4 | `search` stopped on its budget; results are partial |

pub mod commands;
pub mod format;
pub mod image;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use format::{parse_tiling, render_text, FormatError, TilingDocument};
pub use image::{ImageFormat, RenderError, RenderOptions, Slice, Window};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Overrides the torus verification budget (points).
pub const ENV_TORUS_BUDGET: &str = "TILING_TORUS_BUDGET";
/// Overrides the default search node budget.
pub const ENV_NODE_BUDGET: &str = "TILING_NODE_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "tiling",
    version,
    about = "Exact tools for tilings of Z^d by sublattice cosets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Torus,
    Fourier,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Ppm,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether a coset family tiles Z^d.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Find the translate pair guaranteed in a Cartesian tiling.
    Witness { file: PathBuf },
    /// Exact-cover search for tilings on the torus (Z/period)^dim.
    Search {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        period: u64,
        /// Largest tile index; defaults to period^dim.
        #[arg(long)]
        max_index: Option<u64>,
        #[arg(long)]
        max_tiles: Option<usize>,
        /// Require pairwise distinct tile lattices.
        #[arg(long)]
        distinct: bool,
        /// Node budget; overrides TILING_NODE_BUDGET.
        #[arg(long)]
        budget: Option<u64>,
        /// Report one tiling per orbit under coordinate permutations and
        /// translations.
        #[arg(long)]
        symmetry: bool,
        #[arg(long)]
        cartesian_only: bool,
        /// Directory receiving one file per solution.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run on a single thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Draw a two-dimensional view as PPM or SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// x0,x1,y0,y1 (half-open).
        #[arg(long, default_value = "0,16,0,16", allow_hyphen_values = true)]
        window: Window,
        /// Fix one coordinate, e.g. z=0 or x4=1; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        slice: Vec<Slice>,
        #[arg(long, default_value_t = 8)]
        scale: u32,
        /// Defaults from the output extension, else PPM.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Print a built-in family in the text format.
    Example {
        /// Dimension (at least 3 for the four-coset family).
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Print a random Cartesian tiling from this seed instead.
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, default_value_t = 12)]
        max_index: u64,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    commands::dispatch(cli.command, out, err)
}
