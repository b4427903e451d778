//! Command dispatch. Data goes to the output stream, diagnostics to the
//! error stream. Exit codes: 0 success, 1 verification failure, 2 input
//! error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use ktres_core::augment::{resolve_with_prefix, verify_acyclic, DEFAULT_PREFIX};
use ktres_core::complex::{check_nilpotent, cohomology_table, grassmann_number, Complex};
use ktres_core::models::{ModelSpec, ScalarTower};

use crate::report::{
    augmentation_text, cohomology_text, rows_section, verification_text, AugmentationSection,
    NilpotencySection, Report, VerificationSection,
};
use crate::spec_file::{load_spec, write_atomically, ProblemSpecFile, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ktres",
    version,
    about = "Koszul-Tate complexes of linear field equations: exact cohomology and antifield augmentation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the spec file of a built-in model.
    Build {
        #[command(subcommand)]
        model: ModelCommand,
        /// Write the spec here instead of the output stream.
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// Check that the differential squares to zero.
    Nilpotency {
        spec: PathBuf,
        /// Machine-readable report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cohomology dimensions per (antifield number, weight) block.
    Cohomology {
        spec: PathBuf,
        #[command(flatten)]
        window: Window,
        /// Also list cocycle representatives.
        #[arg(long)]
        representatives: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Add higher antifields until no identities remain.
    Augment {
        spec: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_level: i32,
        /// Augmented spec file.
        #[arg(short, long)]
        out: PathBuf,
        /// Name prefix for new generators.
        #[arg(long, default_value = DEFAULT_PREFIX)]
        prefix: String,
        /// Machine-readable report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check that all cohomology away from antifield number 0 vanishes.
    Verify {
        spec: PathBuf,
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bosonic minus fermionic generator count.
    Grassmann {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Window {
    #[arg(long)]
    pub max_antifield: i32,
    #[arg(long)]
    pub max_weight: u32,
}

#[derive(Debug, Subcommand)]
pub enum ModelCommand {
    /// Harmonic oscillator on integer frequency modes.
    Oscillator {
        /// Mode range `lo..hi` (inclusive).
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        modes: (i64, i64),
        /// Oscillator frequency; modes ±ω are on shell.
        #[arg(long, allow_hyphen_values = true)]
        omega: i64,
        /// Add ghosts c(±ω) and second-order antifields θ(±ω).
        #[arg(long)]
        ghosts: bool,
    },
    /// Free Maxwell field on an integer momentum box or a single momentum.
    Maxwell {
        /// Half-width of the momentum box [-r, r]^4.
        #[arg(long, conflicts_with = "k")]
        radius: Option<i64>,
        /// Single momentum `k0,k1,k2,k3`.
        #[arg(long, value_parser = parse_momentum, allow_hyphen_values = true)]
        k: Option<[i64; 4]>,
        /// Leave out the solution antifields θ(i) (single momentum only).
        #[arg(long, requires = "k")]
        no_thetas: bool,
    },
    /// Massless 2D scalar in Taylor modes.
    Scalar2d {
        /// Highest Taylor order M (modes 0..=M in each direction).
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum, default_value_t = TowerArg::Naive)]
        tower: TowerArg,
    },
    /// Random linear system A u = 0 with rank A = n - p.
    Random {
        /// Number of unknowns.
        #[arg(long)]
        n: usize,
        /// Dimension of the solution space (corank of A).
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TowerArg {
    Naive,
    Thetas,
    Full,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected `lo..hi`, got `{s}`"))?;
    let lo = lo.trim().parse().map_err(|e| format!("{lo}: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{hi}: {e}"))?;
    Ok((lo, hi))
}

fn parse_momentum(s: &str) -> Result<[i64; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated integers, got `{s}`"));
    }
    let mut k = [0; 4];
    for (slot, p) in k.iter_mut().zip(parts) {
        *slot = p.trim().parse().map_err(|e| format!("{p}: {e}"))?;
    }
    Ok(k)
}

impl ModelCommand {
    fn spec(&self) -> Result<(ModelSpec, IndexMap<String, String>), String> {
        let mut meta = IndexMap::new();
        let spec = match *self {
            ModelCommand::Oscillator {
                modes,
                omega,
                ghosts,
            } => {
                meta.insert("model".into(), "oscillator".into());
                meta.insert("modes".into(), format!("{}..{}", modes.0, modes.1));
                meta.insert("omega".into(), omega.to_string());
                meta.insert("ghosts".into(), ghosts.to_string());
                ModelSpec::Oscillator {
                    modes,
                    omega,
                    ghosts,
                }
            }
            ModelCommand::Maxwell {
                radius,
                k,
                no_thetas,
            } => {
                meta.insert("model".into(), "maxwell".into());
                match (radius, k) {
                    (Some(radius), None) => {
                        meta.insert("radius".into(), radius.to_string());
                        meta.insert(
                            "note".into(),
                            "the k=0 block has no gauge row and no theta generators".into(),
                        );
                        ModelSpec::Maxwell { radius }
                    }
                    (None, Some(k)) => {
                        meta.insert("k".into(), format!("{},{},{},{}", k[0], k[1], k[2], k[3]));
                        meta.insert("thetas".into(), (!no_thetas).to_string());
                        if k == [0; 4] {
                            meta.insert("note".into(), "k=0 block: no gauge row".into());
                        }
                        ModelSpec::MaxwellBlock {
                            k,
                            thetas: !no_thetas,
                        }
                    }
                    _ => return Err("maxwell needs exactly one of --radius or --k".into()),
                }
            }
            ModelCommand::Scalar2d { order, tower } => {
                meta.insert("model".into(), "scalar2d".into());
                meta.insert("order".into(), order.to_string());
                let tower = match tower {
                    TowerArg::Naive => ScalarTower::Naive,
                    TowerArg::Thetas => ScalarTower::Thetas,
                    TowerArg::Full => ScalarTower::Full,
                };
                meta.insert("tower".into(), format!("{tower:?}").to_lowercase());
                ModelSpec::Scalar2d { order, tower }
            }
            ModelCommand::Random { n, p, seed } => {
                meta.insert("model".into(), "random_linear".into());
                meta.insert("n".into(), n.to_string());
                meta.insert("p".into(), p.to_string());
                meta.insert("seed".into(), seed.to_string());
                ModelSpec::RandomLinear { n, p, seed }
            }
        };
        Ok((spec, meta))
    }
}

enum Failure {
    Input(String),
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<ktres_core::Error> for Failure {
    fn from(e: ktres_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Failure::Input(format!("writing output: {e}")))
}

fn write_report(path: Option<&Path>, report: &Report) -> Result<(), Failure> {
    if let Some(p) = path {
        write_atomically(p, report.to_json().as_bytes())?;
    }
    Ok(())
}

fn load(path: &Path) -> Result<Complex, Failure> {
    Ok(load_spec(path)?.0)
}

fn require_nilpotent(c: &Complex, stderr: &mut dyn Write) -> bool {
    let n = check_nilpotent(c);
    if let ktres_core::Nilpotency::Counterexample { .. } = n {
        let s = NilpotencySection::new(c, &n);
        let _ = writeln!(
            stderr,
            "differential is not nilpotent: delta^2({}) = {}",
            s.generator.unwrap_or_default(),
            s.residual.unwrap_or_default()
        );
        return false;
    }
    true
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Build { model, out } => {
            let (spec, meta) = model.spec().map_err(Failure::Input)?;
            let c = spec.build()?;
            let text = ProblemSpecFile::from_complex(&c, meta).to_json();
            match out {
                Some(p) => write_atomically(&p, text.as_bytes())?,
                None => emit(stdout, &text)?,
            }
            Ok(EXIT_OK)
        }
        Command::Nilpotency { spec, out } => {
            let c = load(&spec)?;
            let n = check_nilpotent(&c);
            let mut report = Report::new("nilpotency", &spec.display().to_string());
            let section = NilpotencySection::new(&c, &n);
            let ok = section.ok;
            if ok {
                emit(stdout, "nilpotent: ok\n")?;
            } else {
                emit(
                    stdout,
                    &format!(
                        "nilpotent: FAILED at {}: delta^2 = {}\n",
                        section.generator.as_deref().unwrap_or(""),
                        section.residual.as_deref().unwrap_or("")
                    ),
                )?;
            }
            report.nilpotency = Some(section);
            write_report(out.as_deref(), &report)?;
            Ok(if ok { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Cohomology {
            spec,
            window,
            representatives,
            out,
        } => {
            let c = load(&spec)?;
            if !require_nilpotent(&c, stderr) {
                return Ok(EXIT_FAILED);
            }
            let table =
                cohomology_table(&c, window.max_antifield, window.max_weight, representatives)?;
            let rows = rows_section(&c, &table, representatives);
            emit(stdout, &cohomology_text(&rows))?;
            let mut report = Report::new("cohomology", &spec.display().to_string());
            report.cohomology = Some(rows);
            write_report(out.as_deref(), &report)?;
            Ok(EXIT_OK)
        }
        Command::Augment {
            spec,
            max_level,
            out,
            prefix,
            report: report_path,
        } => {
            let (c, mut meta) = load_spec(&spec)?;
            if !require_nilpotent(&c, stderr) {
                return Ok(EXIT_FAILED);
            }
            let (augmented, aug) = resolve_with_prefix(&c, max_level, &prefix)?;
            let section = AugmentationSection::new(c.table(), &augmented, &aug);
            meta.insert("augmented".into(), format!("max_level={max_level}"));
            let text = ProblemSpecFile::from_complex(&augmented, meta).to_json();
            let mut report = Report::new("augment", &spec.display().to_string());
            emit(stdout, &augmentation_text(&section))?;
            report.augmentation = Some(section);
            write_atomically(&out, text.as_bytes())?;
            write_report(report_path.as_deref(), &report)?;
            Ok(if aug.terminated { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Verify { spec, window, out } => {
            let c = load(&spec)?;
            if !require_nilpotent(&c, stderr) {
                return Ok(EXIT_FAILED);
            }
            let r = verify_acyclic(&c, window.max_antifield, window.max_weight)?;
            let section = VerificationSection::new(&r, window.max_antifield, window.max_weight);
            emit(stdout, &verification_text(&section))?;
            let mut report = Report::new("verify", &spec.display().to_string());
            report.verification = Some(section);
            write_report(out.as_deref(), &report)?;
            Ok(if r.acyclic { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Grassmann { spec, out } => {
            let c = load(&spec)?;
            let g = grassmann_number(&c);
            emit(stdout, &format!("grassmann number: {g}\n"))?;
            let mut report = Report::new("grassmann", &spec.display().to_string());
            report.grassmann_number = Some(g);
            write_report(out.as_deref(), &report)?;
            Ok(EXIT_OK)
        }
    }
}
