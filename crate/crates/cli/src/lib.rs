//! Command implementations for the `mdrank` binary.
//!
//! Exit codes: 0 success, 1 a stability bound was violated, 2 usage or input
//! errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mdrank::foliation::{leaf_diagram, make_admissible, sample_admissible};
use mdrank::matching::{bottleneck, dmatch_1d, dmatch_multi_estimate, format_significant};
use mdrank::persistence::complex_diagram;
use mdrank::random::perturb_uniform;
use mdrank::rank_invariant::{rank_grid, rho_multi, DeltaPlusPoint};
use mdrank::{io, Execution, ExtendedCost, MultiFilteredComplex};

/// Slack allowed on every stability bound.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Identifier of the generator behind `--seed`, echoed in output headers.
pub const RNG_ID: &str = "ChaCha8Rng(seed_from_u64(seed), stream=trial)";

#[derive(Debug, Parser)]
#[command(name = "mdrank", version, about = "Rank invariants, persistence diagrams and matching distances")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Persistence diagram of a scalar complex, or of one foliation leaf.
    Diagram {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        field: u32,
        /// Output CSV; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leaf direction (comma separated, positive); required when n ≥ 2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        l: Option<Vec<f64>>,
        /// Leaf offset (comma separated); projected to zero sum.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Option<Vec<f64>>,
    },
    /// Rank invariant ρ_k(u, v).
    Rank {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        u: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        v: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        field: u32,
    },
    /// Matching distance between two diagram files.
    Dmatch {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Sampled lower bound of the multidimensional matching distance.
    #[command(name = "Dmatch", alias = "dmatch-multi")]
    DmatchMulti {
        #[arg(long = "inputA", alias = "input-a")]
        input_a: PathBuf,
        #[arg(long = "inputB", alias = "input-b")]
        input_b: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        angles: usize,
        #[arg(long, default_value_t = 5)]
        offsets: usize,
        /// Offset radius; defaults to the largest |value| of either input.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 2)]
        field: u32,
        /// Per-leaf CSV report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Randomized check of the stability bounds.
    Stability {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::OneD)]
        mode: Mode,
        #[arg(long, default_value_t = 8)]
        angles: usize,
        #[arg(long, default_value_t = 5)]
        offsets: usize,
        #[arg(long, default_value_t = 2)]
        field: u32,
    },
    /// Rank grid of a scalar complex as CSV.
    Grid {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 9)]
        resolution: usize,
        #[arg(long, default_value_t = 2)]
        field: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[value(name = "1d")]
    OneD,
    Multi,
}

/// Result of a successfully executed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Violation,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Violation => 1,
        }
    }
}

pub const USAGE_EXIT: i32 = 2;

fn load(path: &Path) -> Result<MultiFilteredComplex> {
    io::read_complex(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => out.write_all(text.as_bytes()).context("writing output"),
    }
}

fn default_radius(cs: &[&MultiFilteredComplex]) -> f64 {
    let r = cs.iter().map(|c| c.max_abs()).fold(0.0, f64::max);
    if r > 0.0 {
        r
    } else {
        1.0
    }
}

/// Runs one command, writing its standard output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Diagram { input, k, field, out: path, l, b } => {
            let c = load(&input)?;
            let d = match (c.n(), l) {
                (1, None) => complex_diagram(&c, k, field)?,
                (_, Some(l)) => {
                    let b = b.unwrap_or_else(|| vec![0.0; l.len()]);
                    let pair = make_admissible(&l, &b)?;
                    leaf_diagram(&c, &pair, k, field)?
                }
                (n, None) => bail!("input has {n} components; pass --l and --b to pick a leaf"),
            };
            emit(out, path.as_deref(), &io::format_diagram(&d))?;
        }
        Command::Rank { input, k, u, v, field } => {
            let c = load(&input)?;
            let pt = DeltaPlusPoint::new(u, v)?;
            writeln!(out, "{}", rho_multi(&c, k, &pt, field)?)?;
        }
        Command::Dmatch { a, b } => {
            let read = |p: &Path| -> Result<io::DiagramFile> {
                io::read_diagram(fs::File::open(p).with_context(|| format!("opening {}", p.display()))?)
                    .with_context(|| format!("reading {}", p.display()))
            };
            let (da, db) = (read(&a)?, read(&b)?);
            let degree = match (da.degree, db.degree) {
                (Some(x), Some(y)) if x != y => bail!("diagrams have different degrees ({x} and {y})"),
                (x, y) => x.or(y).unwrap_or(0),
            };
            let fix = |f: io::DiagramFile| mdrank::PersistenceDiagram::new(degree, f.diagram.points().to_vec());
            let r = bottleneck(&fix(da), &fix(db))?;
            writeln!(out, "{}", r.distance)?;
        }
        Command::DmatchMulti { input_a, input_b, k, angles, offsets, radius, field, report } => {
            let a = load(&input_a)?;
            let b = load(&input_b)?;
            if !a.same_structure(&b) || a.n() != b.n() {
                bail!("inputs do not share the same simplices and component count");
            }
            let r = radius.unwrap_or_else(|| default_radius(&[&a, &b]));
            let samples = sample_admissible(a.n(), angles, offsets, r)?;
            let (est, leaves) = dmatch_multi_estimate(&a, &b, k, field, &samples, Execution::Parallel)?;
            writeln!(out, "{est}")?;
            if let Some(p) = report {
                fs::write(&p, io::format_leaf_report(&leaves)).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        Command::Stability { input, k, delta, trials, seed, mode, angles, offsets, field } => {
            let c = load(&input)?;
            let cfg = StabilityConfig { k, delta, trials, seed, mode, angles, offsets, field };
            let (text, outcome) = stability(&c, &cfg)?;
            out.write_all(text.as_bytes())?;
            return Ok(outcome);
        }
        Command::Grid { input, k, resolution, field, out: path } => {
            let c = load(&input)?;
            let g = rank_grid(&c, k, resolution, field)?;
            emit(out, path.as_deref(), &io::format_rank_grid(&g))?;
        }
    }
    Ok(Outcome::Success)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityConfig {
    pub k: usize,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
    pub mode: Mode,
    pub angles: usize,
    pub offsets: usize,
    pub field: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub index: usize,
    pub norm: f64,
    pub distance: ExtendedCost,
    pub pass: bool,
}

/// Perturbs the input `trials` times and checks each distance against the
/// realized sup-norm of the perturbation. Returns the printed report.
pub fn stability(c: &MultiFilteredComplex, cfg: &StabilityConfig) -> Result<(String, Outcome)> {
    if !(cfg.delta >= 0.0) || !cfg.delta.is_finite() {
        bail!("--delta must be a non-negative number");
    }
    if cfg.trials == 0 {
        bail!("--trials must be at least 1");
    }
    if cfg.mode == Mode::OneD && c.n() != 1 {
        bail!("mode 1d needs a scalar input, found {} components", c.n());
    }
    let samples = match cfg.mode {
        Mode::OneD => Vec::new(),
        Mode::Multi => sample_admissible(c.n(), cfg.angles, cfg.offsets, default_radius(&[c]))?,
    };

    let trials = mdrank::par::map_range(Execution::Parallel, cfg.trials, |index| -> mdrank::Result<Trial> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(index as u64);
        let psi = perturb_uniform(&mut rng, c, cfg.delta);
        let norm = c.sup_distance(&psi)?;
        let distance = match cfg.mode {
            Mode::OneD => dmatch_1d(c, &psi, cfg.k, cfg.field)?,
            Mode::Multi => dmatch_multi_estimate(c, &psi, cfg.k, cfg.field, &samples, Execution::Sequential)?.0,
        };
        Ok(Trial { index, norm, distance, pass: distance.within(norm, BOUND_TOLERANCE) })
    });

    let mut text = String::new();
    let mode = match cfg.mode {
        Mode::OneD => "1d",
        Mode::Multi => "multi",
    };
    writeln!(
        text,
        "# stability mode={mode} k={} trials={} delta={} seed={} rng={RNG_ID}",
        cfg.k, cfg.trials, cfg.delta, cfg.seed
    )?;
    if cfg.mode == Mode::Multi {
        writeln!(text, "# leaves={} angles={} offsets={}", samples.len(), cfg.angles, cfg.offsets)?;
    }
    writeln!(text, "trial,norm,distance,result")?;
    let mut passed = 0;
    for t in trials {
        let t = t?;
        passed += usize::from(t.pass);
        writeln!(
            text,
            "{},{},{},{}",
            t.index,
            format_significant(t.norm, 12),
            t.distance,
            if t.pass { "pass" } else { "FAIL" }
        )?;
    }
    writeln!(text, "# {passed}/{} trials within bound", cfg.trials)?;
    let outcome = if passed == cfg.trials { Outcome::Success } else { Outcome::Violation };
    Ok((text, outcome))
}
