//! Command-line front end: `simulate`, `exact`, `verify`, `figure` and
//! `residual`. Exit codes: 0 success, 1 usage or configuration error,
//! 2 output truncated where the solution stops existing, 3 verification
//! failure.

pub mod commands;
pub mod config;
pub mod csv;

use std::ffi::OsString;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::CoefficientFunction;
use crate::lhsystems::{Algebra, Chart, SystemSpec};
use crate::structcheck::Suite;
use commands::{Outcome, EXIT_OK, EXIT_USAGE};
use config::{
    parse_json, ConstantsConfig, Figure, FigureSpec, OutputFormat, ResidualConfig, ResidualSource, RunConfig,
    VerifyConfig,
};

#[derive(Debug, Parser)]
#[command(name = "buchdahl", version, about = "Buchdahl-type Lie-Hamilton systems: integrate, evaluate closed forms, verify structure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the system and write the trajectory.
    #[command(allow_negative_numbers = true)]
    Simulate(CommonArgs),
    /// Sample the closed-form solution.
    #[command(allow_negative_numbers = true)]
    Exact(CommonArgs),
    /// Run a verification suite and print its JSON report.
    #[command(allow_negative_numbers = true)]
    Verify {
        /// brackets, symplectic, lie, two_particle, symmetry, lagrangian, perturbation or all
        suite: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit figure data (fig1: z ≥ 0, fig2: z ≤ 0).
    #[command(allow_negative_numbers = true)]
    Figure {
        figure: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Residual of the scalar second-order equation along a solution.
    #[command(allow_negative_numbers = true)]
    Residual {
        #[arg(long, value_enum)]
        source: Option<SourceArg>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SystemArg {
    B2,
    H4,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChartArg {
    Canonical,
    Buchdahl,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SourceArg {
    Exact,
    FirstOrder,
}

fn coefficient(s: &str) -> std::result::Result<CoefficientFunction, String> {
    CoefficientFunction::from_str(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// JSON configuration; flags override its fields.
    #[arg(long)]
    config: Option<String>,
    #[arg(long, value_enum)]
    system: Option<SystemArg>,
    #[arg(long, value_enum)]
    chart: Option<ChartArg>,
    /// a(x), e.g. recip:3, const:1, mono:0.5:2
    #[arg(long, value_parser = coefficient)]
    a: Option<CoefficientFunction>,
    #[arg(long, value_parser = coefficient)]
    b1: Option<CoefficientFunction>,
    #[arg(long, value_parser = coefficient)]
    b2: Option<CoefficientFunction>,
    /// Deformation parameter; `figure` accepts it repeatedly.
    #[arg(long)]
    z: Vec<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    /// Base point of the constants (default: library constants where available).
    #[arg(long)]
    base: Option<f64>,
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    y0: Option<f64>,
    #[arg(long)]
    q0: Option<f64>,
    #[arg(long)]
    p0: Option<f64>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    t1: Option<f64>,
    /// Integrator relative tolerance (absolute is 1/100 of it), or the
    /// verification tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    out: Option<String>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    dump_config: bool,
}

impl CommonArgs {
    fn load<T: for<'de> serde::Deserialize<'de>>(&self) -> Result<Option<T>> {
        match &self.config {
            None => Ok(None),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
                parse_json(&text).map(Some)
            }
        }
    }

    fn has_spec_flags(&self) -> bool {
        self.system.is_some()
            || self.chart.is_some()
            || self.a.is_some()
            || self.b1.is_some()
            || self.b2.is_some()
            || !self.z.is_empty()
    }

    fn single_z(&self) -> Result<Option<f64>> {
        match self.z.as_slice() {
            [] => Ok(None),
            [z] => Ok(Some(*z)),
            _ => Err(Error::Parse("--z given more than once".into())),
        }
    }

    fn apply_spec(&self, base: SystemSpec) -> Result<SystemSpec> {
        let z = self.single_z()?;
        if !self.has_spec_flags() {
            return Ok(base);
        }
        let algebra = match (self.system, self.b2.is_some()) {
            (Some(SystemArg::B2), _) => Algebra::B2,
            (Some(SystemArg::H4), _) | (None, true) => Algebra::H4,
            (None, false) => base.algebra(),
        };
        let chart = match self.chart {
            Some(ChartArg::Canonical) => Chart::Canonical,
            Some(ChartArg::Buchdahl) => Chart::Buchdahl,
            None => base.chart(),
        };
        let b2 = match algebra {
            Algebra::H4 => self.b2.or(base.b2().copied()),
            Algebra::B2 if self.b2.is_some() => {
                return Err(Error::Parse("--b2 needs the h4 system".into()));
            }
            Algebra::B2 => None,
        };
        SystemSpec::new(
            algebra,
            z.unwrap_or(base.z()),
            chart,
            self.a.or(base.a().copied()),
            self.b1.unwrap_or(*base.b1()),
            b2,
            base.t_ref(),
        )
    }

    fn apply_output(&self, cfg: &mut config::OutputConfig) {
        if let Some(p) = &self.out {
            cfg.path = Some(p.clone());
        }
        match self.format {
            Some(FormatArg::Csv) => cfg.format = OutputFormat::Csv,
            Some(FormatArg::Json) => cfg.format = OutputFormat::Json,
            None => {}
        }
    }

    fn run_config(&self) -> Result<RunConfig> {
        let base: RunConfig = self.load()?.unwrap_or_default();
        self.run_config_from(base)
    }

    fn run_config_from(&self, mut cfg: RunConfig) -> Result<RunConfig> {
        cfg.spec = self.apply_spec(cfg.spec)?;
        let state = match (self.x0, self.y0, self.q0, self.p0) {
            (None, None, None, None) => None,
            (Some(x), Some(y), None, None) if cfg.spec.chart() == Chart::Buchdahl => Some([x, y]),
            (None, None, Some(q), Some(p)) if cfg.spec.chart() == Chart::Canonical => Some([q, p]),
            _ => {
                return Err(Error::Parse(
                    "give --x0 --y0 for the Buchdahl chart or --q0 --p0 for the canonical chart".into(),
                ))
            }
        };
        let constant_flags = self.c1.is_some() || self.c2.is_some() || self.base.is_some();
        if let Some(s) = state {
            cfg.initial = Some(s);
            if !constant_flags {
                cfg.constants = None;
            }
        }
        if constant_flags {
            let old = cfg.constants.unwrap_or(ConstantsConfig {
                c1: 0.5,
                c2: 0.5,
                base: None,
            });
            cfg.constants = Some(ConstantsConfig {
                c1: self.c1.unwrap_or(old.c1),
                c2: self.c2.unwrap_or(old.c2),
                base: self.base.or(old.base),
            });
        }
        if let Some(t0) = self.t0 {
            cfg.t0 = t0;
        }
        if let Some(t1) = self.t1 {
            cfg.t1 = t1;
        }
        if let Some(n) = self.samples {
            cfg.samples = n;
        }
        if let Some(tol) = self.tol {
            cfg.integrator.rel_tol = tol;
            cfg.integrator.abs_tol = tol * 1e-2;
        }
        self.apply_output(&mut cfg.output);
        cfg.validate()?;
        Ok(cfg)
    }

    fn verify_config(&self, suite: Option<&str>) -> Result<VerifyConfig> {
        let loaded: Option<VerifyConfig> = self.load()?;
        let suite = match (suite, &loaded) {
            (Some(s), _) => Suite::from_str(s)?,
            (None, Some(c)) => c.suite,
            (None, None) => return Err(Error::Parse("verify needs a suite name".into())),
        };
        let mut cfg = loaded.unwrap_or(VerifyConfig {
            suite,
            spec: None,
            seed: 42,
            tol: None,
            out: None,
        });
        cfg.suite = suite;
        if self.has_spec_flags() {
            let base = cfg.spec.unwrap_or(RunConfig::default().spec);
            cfg.spec = Some(self.apply_spec(base)?);
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if self.tol.is_some() {
            cfg.tol = self.tol;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        Ok(cfg)
    }

    fn figure_spec(&self, figure: Option<&str>) -> Result<FigureSpec> {
        let loaded: Option<FigureSpec> = self.load()?;
        let mut fs = match (figure, loaded) {
            (Some(f), Some(mut fs)) => {
                fs.figure = Figure::from_str(f)?;
                fs
            }
            (Some(f), None) => FigureSpec::new(Figure::from_str(f)?),
            (None, Some(fs)) => fs,
            (None, None) => return Err(Error::Parse("figure needs fig1 or fig2".into())),
        };
        if !self.z.is_empty() {
            fs.z_values = self.z.clone();
        }
        if let Some(c1) = self.c1 {
            fs.c1 = c1;
        }
        if let Some(c2) = self.c2 {
            fs.c2 = c2;
        }
        if let Some(t0) = self.t0 {
            fs.t_range.0 = t0;
        }
        if let Some(t1) = self.t1 {
            fs.t_range.1 = t1;
        }
        if let Some(n) = self.samples {
            fs.samples = n;
        }
        self.apply_output(&mut fs.output);
        fs.validate()?;
        Ok(fs)
    }

    fn residual_config(&self, source: Option<SourceArg>) -> Result<ResidualConfig> {
        let loaded: Option<ResidualConfig> = self.load()?;
        let mut rc = match loaded {
            Some(rc) => rc,
            None => ResidualConfig {
                run: RunConfig::default(),
                source: ResidualSource::default(),
            },
        };
        rc.run = self.run_config_from(rc.run)?;
        match source {
            Some(SourceArg::Exact) => rc.source = ResidualSource::Exact,
            Some(SourceArg::FirstOrder) => rc.source = ResidualSource::FirstOrder,
            None => {}
        }
        Ok(rc)
    }
}

fn emit<T: Serialize>(cfg: &T, out: &mut dyn Write) -> Result<i32> {
    let mut text = serde_json::to_string_pretty(cfg).expect("configurations serialize");
    text.push('\n');
    write_text(&text, None, out)?;
    Ok(EXIT_OK)
}

fn write_text(text: &str, path: Option<&str>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Parse(format!("cannot write {p}: {e}"))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::Parse(format!("cannot write output: {e}"))),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    let table = |o: commands::TableOutcome, output: &config::OutputConfig, out: &mut dyn Write| -> Result<i32> {
        write_text(&o.table.render(output.format), output.path.as_deref(), out)?;
        Ok(o.code())
    };
    match command {
        Command::Simulate(args) => {
            let cfg = args.run_config()?;
            if args.dump_config {
                return emit(&cfg, out);
            }
            table(commands::cmd_simulate(&cfg)?, &cfg.output, out)
        }
        Command::Exact(args) => {
            let cfg = args.run_config()?;
            if args.dump_config {
                return emit(&cfg, out);
            }
            table(commands::cmd_exact(&cfg)?, &cfg.output, out)
        }
        Command::Verify { suite, common } => {
            let cfg = common.verify_config(suite.as_deref())?;
            if common.dump_config {
                return emit(&cfg, out);
            }
            let (_, Outcome { text, code }) = commands::cmd_verify(&cfg)?;
            write_text(&text, cfg.out.as_deref(), out)?;
            Ok(code)
        }
        Command::Figure { figure, common } => {
            let fs = common.figure_spec(figure.as_deref())?;
            if common.dump_config {
                return emit(&fs, out);
            }
            table(commands::cmd_figure(&fs)?, &fs.output, out)
        }
        Command::Residual { source, common } => {
            let rc = common.residual_config(source)?;
            if common.dump_config {
                return emit(&rc, out);
            }
            table(commands::cmd_residual(&rc)?, &rc.run.output, out)
        }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
