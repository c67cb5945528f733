use std::path::PathBuf;

use bfkit::simulation::{DESK_DATASETS, FULL_DATASETS, GRID_EFFECTS, GRID_SIZES};
use bfkit::{Direction, HypothesisSpec, PriorSpec, SamplerSettings};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bfkit",
    version,
    about = "Bayes factors for one- and two-sample effect-size tests"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Test the standardized mean of one sample (or of paired differences).
    OneSample(TestArgs),
    /// Test the standardized difference between two groups (`x,y` columns).
    TwoSample(TestArgs),
    /// Closed-form JZS Bayes factor from a t statistic.
    Jzs(JzsArgs),
    /// Compare the sampling and closed-form routes on simulated data.
    Simulate(SimulateArgs),
    /// Emit prior and posterior density curves of the effect size as CSV.
    PlotData(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestKind {
    Point,
    Directional,
    Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignArg {
    OneSample,
    TwoSample,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SamplerArgs {
    #[arg(long, default_value_t = 4)]
    pub chains: usize,
    /// Kept draws per chain.
    #[arg(long, default_value_t = 5000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1000)]
    pub warmup: usize,
    /// Sweeps per kept draw.
    #[arg(long, default_value_t = 10)]
    pub thin: usize,
    /// Random seed; drawn at random (and reported) when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// CSV file with the observations.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Effect-size prior: `cauchy:<scale>` or `normal:<variance>`.
    #[arg(long, default_value = "cauchy:1")]
    pub prior: PriorSpec,
    #[arg(long = "test", value_enum, default_value_t = TestKind::Point)]
    pub test: TestKind,
    /// Half-width of the interval null (required with `--test interval`).
    #[arg(long, value_parser = positive_f64, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// Location of the point null.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta0: f64,
    /// Sign of the effect under H1 for `--test directional`.
    #[arg(long, value_enum, default_value_t = DirectionArg::Positive)]
    pub direction: DirectionArg,
    /// Also write the posterior draws as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct JzsArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    /// Total sample size.
    #[arg(long)]
    pub n: usize,
    /// Cauchy prior scale.
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64, allow_negative_numbers = true)]
    pub r: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Datasets per cell.
    #[arg(long, default_value_t = DESK_DATASETS, conflicts_with = "full")]
    pub datasets: usize,
    /// Use the full-size benchmark (200 datasets per cell).
    #[arg(long)]
    pub full: bool,
    /// True effect sizes to simulate (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = GRID_EFFECTS.to_vec(), allow_negative_numbers = true)]
    pub effects: Vec<f64>,
    /// Sample sizes to simulate (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = GRID_SIZES.to_vec())]
    pub sizes: Vec<usize>,
    /// Cauchy prior scale.
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64, allow_negative_numbers = true)]
    pub r: f64,
    /// Also write per-dataset log Bayes factors as CSV.
    #[arg(long)]
    pub dump_datasets: Option<PathBuf>,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DesignArg::OneSample)]
    pub design: DesignArg,
    #[arg(long, default_value = "cauchy:1")]
    pub prior: PriorSpec,
    /// Point at which both ordinates are reported.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta0: f64,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub lower: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub upper: f64,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

/// Validated command line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Test {
        design: bfkit::Design,
        data: PathBuf,
        prior: PriorSpec,
        hypothesis: HypothesisSpec,
        sampler: SamplerSettings,
        trace: Option<PathBuf>,
    },
    Jzs {
        t: f64,
        n: usize,
        r: f64,
    },
    Simulate {
        effects: Vec<f64>,
        sizes: Vec<usize>,
        n_datasets: usize,
        r: f64,
        sampler: SamplerSettings,
        dump_datasets: Option<PathBuf>,
    },
    PlotData {
        design: bfkit::Design,
        data: PathBuf,
        prior: PriorSpec,
        delta0: f64,
        grid: (f64, f64, usize),
        sampler: SamplerSettings,
    },
}

fn usage(kind: ErrorKind, msg: impl std::fmt::Display) -> clap::Error {
    Cli::command().error(kind, msg)
}

fn data_file(path: Option<PathBuf>) -> Result<PathBuf, clap::Error> {
    let path = path.ok_or_else(|| {
        usage(
            ErrorKind::MissingRequiredArgument,
            "the following required argument was not provided: --data <DATA>",
        )
    })?;
    if !path.is_file() {
        return Err(usage(
            ErrorKind::ValueValidation,
            format!("data file `{}` does not exist", path.display()),
        ));
    }
    Ok(path)
}

impl SamplerArgs {
    fn settings(&self) -> Result<SamplerSettings, clap::Error> {
        let s = SamplerSettings {
            n_chains: self.chains,
            n_warmup: self.warmup,
            n_keep: self.samples,
            thin: self.thin,
            seed: self.seed.unwrap_or_else(rand::random),
            ..Default::default()
        };
        s.validate()
            .map_err(|e| usage(ErrorKind::ValueValidation, e))?;
        Ok(s)
    }
}

impl TestArgs {
    fn hypothesis(&self) -> Result<HypothesisSpec, clap::Error> {
        let bad = |e: bfkit::Error| usage(ErrorKind::ValueValidation, e);
        match (self.test, self.epsilon) {
            (TestKind::Interval, None) => Err(usage(
                ErrorKind::MissingRequiredArgument,
                "--test interval requires --epsilon <EPSILON>",
            )),
            (TestKind::Interval, Some(e)) => HypothesisSpec::interval(e).map_err(bad),
            (_, Some(_)) => Err(usage(
                ErrorKind::ArgumentConflict,
                "--epsilon only applies to --test interval",
            )),
            (TestKind::Point, None) => HypothesisSpec::point(self.delta0).map_err(bad),
            (TestKind::Directional, None) => Ok(HypothesisSpec::Directional {
                direction: match self.direction {
                    DirectionArg::Positive => Direction::Positive,
                    DirectionArg::Negative => Direction::Negative,
                },
            }),
        }
    }
}

fn design(d: DesignArg) -> bfkit::Design {
    match d {
        DesignArg::OneSample => bfkit::Design::OneSample,
        DesignArg::TwoSample => bfkit::Design::TwoSample,
    }
}

impl Cli {
    /// Checks cross-argument rules and resolves the seed.
    pub fn into_config(self) -> Result<RunConfig, clap::Error> {
        match self.command {
            CommandArgs::OneSample(a) => test_config(a, bfkit::Design::OneSample),
            CommandArgs::TwoSample(a) => test_config(a, bfkit::Design::TwoSample),
            CommandArgs::Jzs(a) => {
                if !a.t.is_finite() {
                    return Err(usage(ErrorKind::ValueValidation, "--t must be finite"));
                }
                if a.n < 2 {
                    return Err(usage(ErrorKind::ValueValidation, "--n must be at least 2"));
                }
                Ok(RunConfig {
                    command: Command::Jzs {
                        t: a.t,
                        n: a.n,
                        r: a.r,
                    },
                    format: a.output.format,
                    out: a.output.out,
                })
            }
            CommandArgs::Simulate(a) => {
                let n_datasets = if a.full { FULL_DATASETS } else { a.datasets };
                if n_datasets == 0 || a.effects.is_empty() || a.sizes.is_empty() {
                    return Err(usage(
                        ErrorKind::ValueValidation,
                        "need at least one dataset, effect size and sample size",
                    ));
                }
                if a.effects.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
                    return Err(usage(
                        ErrorKind::ValueValidation,
                        "effect sizes must be >= 0",
                    ));
                }
                if a.sizes.iter().any(|&n| n < 2) {
                    return Err(usage(
                        ErrorKind::ValueValidation,
                        "sample sizes must be at least 2",
                    ));
                }
                Ok(RunConfig {
                    command: Command::Simulate {
                        effects: a.effects,
                        sizes: a.sizes,
                        n_datasets,
                        r: a.r,
                        sampler: a.sampler.settings()?,
                        dump_datasets: a.dump_datasets,
                    },
                    format: a.output.format,
                    out: a.output.out,
                })
            }
            CommandArgs::PlotData(a) => {
                if !(a.lower.is_finite() && a.upper.is_finite() && a.lower < a.upper) {
                    return Err(usage(ErrorKind::ValueValidation, "need --lower < --upper"));
                }
                if a.points < 2 {
                    return Err(usage(
                        ErrorKind::ValueValidation,
                        "--points must be at least 2",
                    ));
                }
                Ok(RunConfig {
                    command: Command::PlotData {
                        design: design(a.design),
                        data: data_file(a.data)?,
                        prior: a.prior,
                        delta0: a.delta0,
                        grid: (a.lower, a.upper, a.points),
                        sampler: a.sampler.settings()?,
                    },
                    format: Format::Csv,
                    out: a.out,
                })
            }
        }
    }
}

fn test_config(a: TestArgs, design: bfkit::Design) -> Result<RunConfig, clap::Error> {
    let hypothesis = a.hypothesis()?;
    Ok(RunConfig {
        command: Command::Test {
            design,
            data: data_file(a.data)?,
            prior: a.prior,
            hypothesis,
            sampler: a.sampler.settings()?,
            trace: a.trace,
        },
        format: a.output.format,
        out: a.output.out,
    })
}
