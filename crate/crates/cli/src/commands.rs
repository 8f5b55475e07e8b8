use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use sublattice_tiling::tiling::{fmt_point, verify_tiling_torus_with};
use sublattice_tiling::{
    mirsky_newman_witness, paper_counterexample, random_cartesian_tiling, search_exotic_tilings,
    verify_tiling_fourier, CoverageReport, Error as CoreError, Execution, SearchConfig,
    TilingInstance, TorusOptions,
};

use crate::format::{coset_text, lattice_text, render_text, FormatError, TilingDocument};
use crate::image::{self, ImageFormat, RenderError, RenderOptions};
use crate::{
    Command, FormatArg, Method, ENV_NODE_BUDGET, ENV_TORUS_BUDGET, EXIT_BUDGET, EXIT_FALSE,
    EXIT_INPUT, EXIT_INTERNAL, EXIT_OK,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },

    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: FormatError },

    #[error("{path}: {source}")]
    Write { path: PathBuf, source: io::Error },

    #[error(transparent)]
    Render(#[from] RenderError),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{0}")]
    Config(String),

    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(CoreError::WitnessNotFound { .. }) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        }
    }
}

type CliResult = Result<i32, CliError>;

pub fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cmd {
        Command::Verify { file, method } => verify(&file, method, out, err),
        Command::Witness { file } => witness(&file, out),
        Command::Search {
            dim,
            period,
            max_index,
            max_tiles,
            distinct,
            budget,
            symmetry,
            cartesian_only,
            out: dir,
            sequential,
        } => {
            let opts = SearchArgs {
                dim,
                period,
                max_index,
                max_tiles,
                distinct,
                budget,
                symmetry,
                cartesian_only,
                sequential,
            };
            search(&opts, dir.as_deref(), out, err)
        }
        Command::Render {
            file,
            out: path,
            window,
            slice,
            scale,
            format,
        } => {
            let opts = RenderOptions {
                window,
                slices: slice,
                scale,
            };
            render(&file, &path, &opts, format, out)
        }
        Command::Example {
            dim,
            random,
            max_index,
        } => example(dim, random, max_index, out),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        e.exit_code()
    })
}

pub fn load(path: &Path) -> Result<TilingInstance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    TilingDocument::parse(&text)
        .map(|d| d.to_instance())
        .map_err(|source| CliError::Parse {
            path: path.to_owned(),
            source,
        })
}

fn env_u64(name: &str) -> Result<Option<u64>, CliError> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("{name}={v} is not a non-negative integer"))),
        Err(_) => Ok(None),
    }
}

fn print_report(name: &str, r: &CoverageReport, out: &mut dyn Write) -> io::Result<()> {
    let verdict = if r.is_tiling {
        "tiling"
    } else {
        "not a tiling"
    };
    writeln!(out, "{name}: {verdict}")?;
    if let Some(g) = &r.first_gap {
        writeln!(out, "  gap at {}", fmt_point(g))?;
    }
    if let Some(o) = &r.first_overlap {
        writeln!(
            out,
            "  overlap at {} between tiles {} and {}",
            fmt_point(&o.point),
            o.tiles.0 + 1,
            o.tiles.1 + 1
        )?;
    }
    if let Some(k) = &r.failing_frequency {
        writeln!(out, "  coefficient sum fails at k = {k}")?;
    }
    Ok(())
}

fn verify(path: &Path, method: Method, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let t = load(path)?;
    let mut opts = TorusOptions::default();
    if let Some(b) = env_u64(ENV_TORUS_BUDGET)? {
        opts.budget = b;
    }
    let n = t.tiles().len();
    writeln!(
        out,
        "{n} tile{} in dimension {}, period {}",
        if n == 1 { "" } else { "s" },
        t.dim(),
        t.period()
    )?;
    writeln!(out, "density = {}", t.density())?;
    let torus = match method {
        Method::Fourier => None,
        _ => Some(verify_tiling_torus_with(&t, opts)?),
    };
    let fourier = match method {
        Method::Torus => None,
        _ => Some(verify_tiling_fourier(&t)?),
    };
    for (name, r) in [("torus", &torus), ("fourier", &fourier)] {
        if let Some(r) = r {
            print_report(name, r, out)?;
        }
    }
    if let (Some(a), Some(b)) = (&torus, &fourier) {
        if a.is_tiling != b.is_tiling {
            writeln!(
                err,
                "internal error: torus says {} but fourier says {}",
                a.is_tiling, b.is_tiling
            )?;
            return Ok(EXIT_INTERNAL);
        }
    }
    let pairs = t.translate_pairs();
    if pairs.is_empty() {
        writeln!(out, "no translate pairs")?;
    } else {
        writeln!(out, "translate pairs:")?;
        for (i, j) in pairs {
            writeln!(
                out,
                "  tiles {} and {} share {}",
                i + 1,
                j + 1,
                lattice_text(t.tiles()[i].lattice())
            )?;
        }
    }
    if t.is_trivial() {
        writeln!(out, "trivial family: a single tile")?;
    }
    let is_tiling = torus.or(fourier).is_some_and(|r| r.is_tiling);
    writeln!(
        out,
        "result: {}",
        if is_tiling { "tiling" } else { "not a tiling" }
    )?;
    Ok(if is_tiling { EXIT_OK } else { EXIT_FALSE })
}

fn witness(path: &Path, out: &mut dyn Write) -> CliResult {
    let t = load(path)?;
    match mirsky_newman_witness(&t) {
        Ok(w) => {
            let (a, b) = (&t.tiles()[w.maximal], &t.tiles()[w.partner]);
            writeln!(
                out,
                "translate pair: tiles {} and {}",
                w.maximal + 1,
                w.partner + 1
            )?;
            writeln!(out, "  {}", coset_text(a))?;
            writeln!(out, "  {}", coset_text(b))?;
            writeln!(out, "shared lattice: {}", lattice_text(a.lattice()))?;
            writeln!(out, "probe k = {}", w.probe)?;
            Ok(EXIT_OK)
        }
        Err(CoreError::NotCartesian { tile }) => {
            writeln!(
                out,
                "not applicable: tile {} is not Cartesian: {}",
                tile + 1,
                coset_text(&t.tiles()[tile])
            )?;
            Ok(EXIT_FALSE)
        }
        Err(CoreError::NotATiling { reason }) => {
            writeln!(out, "not applicable: {reason}")?;
            Ok(EXIT_FALSE)
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone)]
pub struct SearchArgs {
    pub dim: usize,
    pub period: u64,
    pub max_index: Option<u64>,
    pub max_tiles: Option<usize>,
    pub distinct: bool,
    pub budget: Option<u64>,
    pub symmetry: bool,
    pub cartesian_only: bool,
    pub sequential: bool,
}

fn search(
    args: &SearchArgs,
    dir: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let mut cfg = SearchConfig::new(args.dim, args.period);
    if let Some(m) = args.max_index {
        cfg.max_index = m;
    }
    if let Some(m) = args.max_tiles {
        cfg.max_tiles = m;
    }
    if let Some(b) = args
        .budget
        .map(Ok)
        .or_else(|| env_u64(ENV_NODE_BUDGET).transpose())
    {
        cfg.node_budget = b?;
    }
    cfg.require_distinct_lattices = args.distinct;
    cfg.symmetry_reduction = args.symmetry;
    cfg.cartesian_only = args.cartesian_only;
    if args.sequential {
        cfg.execution = Execution::Sequential;
    }
    let res = search_exotic_tilings(&cfg)?;
    writeln!(out, "solutions: {}", res.tilings.len())?;
    writeln!(out, "nodes explored: {}", res.nodes_explored)?;
    writeln!(out, "exhausted: {}", res.exhausted)?;
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.to_owned(),
            source,
        })?;
    }
    for (k, t) in res.tilings.iter().enumerate() {
        writeln!(out, "solution {}:", k + 1)?;
        for c in t.tiles() {
            writeln!(out, "  {}", coset_text(c))?;
        }
        if let Some(dir) = dir {
            let path = dir.join(format!("solution-{:04}.txt", k + 1));
            std::fs::write(&path, render_text(t))
                .map_err(|source| CliError::Write { path, source })?;
        }
    }
    if !res.exhausted {
        writeln!(
            err,
            "node budget exhausted; the solution list may be incomplete"
        )?;
        return Ok(EXIT_BUDGET);
    }
    Ok(EXIT_OK)
}

fn render(
    path: &Path,
    target: &Path,
    opts: &RenderOptions,
    format: Option<FormatArg>,
    out: &mut dyn Write,
) -> CliResult {
    let t = load(path)?;
    let format = match format {
        Some(FormatArg::Svg) => ImageFormat::Svg,
        Some(FormatArg::Ppm) => ImageFormat::Ppm,
        None if target
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("svg")) =>
        {
            ImageFormat::Svg
        }
        None => ImageFormat::Ppm,
    };
    let bytes = image::render(&t, opts, format)?;
    std::fs::write(target, bytes).map_err(|source| CliError::Write {
        path: target.to_owned(),
        source,
    })?;
    let s = u64::from(opts.scale);
    writeln!(
        out,
        "wrote {} ({} x {} pixels)",
        target.display(),
        opts.window.width() * s,
        opts.window.height() * s
    )?;
    Ok(EXIT_OK)
}

fn example(dim: usize, random: Option<u64>, max_index: u64, out: &mut dyn Write) -> CliResult {
    let t = match random {
        Some(seed) => random_cartesian_tiling(dim, max_index, seed)?,
        None => paper_counterexample(dim)?,
    };
    write!(out, "{}", render_text(&t))?;
    Ok(EXIT_OK)
}
