mod args;
mod emit;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use bfkit::bayesfactor::{bayes_factor, jzs_bf};
use bfkit::data::{read_one_sample_file, read_two_sample_file};
use bfkit::density::fit_density;
use bfkit::simulation::{run_simulation, SimulationCell};
use bfkit::{sample_posterior, Design, ModelSpec, ObservedSample};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use args::{Cli, Command, RunConfig};
use emit::{DataSummary, Diagnostics, TestReport};

const THREADS_VAR: &str = "BFKIT_THREADS";

fn main() -> ExitCode {
    let config = match Cli::parse().into_config() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    if let Err(e) = configure_threads() {
        e.exit();
    }
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn configure_threads() -> Result<(), clap::Error> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| {
        Cli::command().error(
            ErrorKind::ValueValidation,
            format!("{THREADS_VAR} must be a positive integer, got `{value}`"),
        )
    })?;
    if n > 0 {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

#[derive(Debug)]
enum Failure {
    Compute(bfkit::Error),
    Io(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Compute(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<bfkit::Error> for Failure {
    fn from(e: bfkit::Error) -> Self {
        Failure::Compute(e)
    }
}

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| match path {
        Some(p) => Failure::Io(format!("{}: {e}", p.display())),
        None => Failure::Io(e.to_string()),
    }
}

fn with_output<F>(path: Option<&Path>, f: F) -> Result<(), Failure>
where
    F: FnOnce(&mut dyn Write) -> Result<(), Failure>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(io_err(Some(p)))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(io_err(Some(p)))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            f(&mut w)?;
            w.flush().map_err(io_err(None))
        }
    }
}

fn load(design: Design, path: &Path) -> Result<ObservedSample, Failure> {
    Ok(match design {
        Design::OneSample => ObservedSample::one_sample(read_one_sample_file(path)?)?,
        Design::TwoSample => {
            let (x, y) = read_two_sample_file(path)?;
            ObservedSample::two_sample(x, y)?
        }
    })
}

fn run(config: &RunConfig) -> Result<(), Failure> {
    let out = config.out.as_deref();
    match &config.command {
        Command::Test {
            design,
            data,
            prior,
            hypothesis,
            sampler,
            trace,
        } => {
            let sample = load(*design, data)?;
            let draws =
                sample_posterior(&ModelSpec::for_design(*design, *prior), &sample, sampler)?;
            if let Some(p) = trace {
                with_output(Some(p), |w| Ok(draws.write_csv(w)?))?;
            }
            let result = bayes_factor(&draws, prior, *hypothesis)?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            let report = TestReport {
                version: env!("CARGO_PKG_VERSION"),
                command: match design {
                    Design::OneSample => "one-sample",
                    Design::TwoSample => "two-sample",
                },
                seed: Some(sampler.seed),
                prior: prior.to_string(),
                data: Some(DataSummary::new(&sample)?),
                sampler: Some(*sampler),
                diagnostics: Some(Diagnostics::new(&draws)),
                result,
            };
            with_output(out, |w| emit::test_report(&report, config.format, w))
        }
        Command::Jzs { t, n, r } => {
            let result = jzs_bf(*t, *n, *r)?;
            let report = TestReport {
                version: env!("CARGO_PKG_VERSION"),
                command: "jzs",
                seed: None,
                prior: bfkit::PriorSpec::cauchy(*r)?.to_string(),
                data: Some(DataSummary::from_t(*t, *n)?),
                sampler: None,
                diagnostics: None,
                result,
            };
            with_output(out, |w| emit::test_report(&report, config.format, w))
        }
        Command::Simulate {
            effects,
            sizes,
            n_datasets,
            r,
            sampler,
            dump_datasets,
        } => {
            let mut cells = Vec::new();
            for &g in effects {
                for &n in sizes {
                    cells.push(SimulationCell::new(g, n, *n_datasets, sampler.seed)?);
                }
            }
            let report = run_simulation(&cells, sampler, *r)?;
            for c in &report.cells {
                for f in &c.failures {
                    eprintln!(
                        "warning: g = {}, N = {}, dataset {}: {}",
                        c.cell.g_effect, c.cell.n, f.index, f.message
                    );
                }
                if c.n_unconverged > 0 {
                    eprintln!(
                        "warning: g = {}, N = {}: {} of {} datasets did not converge (R-hat > 1.01)",
                        c.cell.g_effect,
                        c.cell.n,
                        c.n_unconverged,
                        c.datasets.len()
                    );
                }
            }
            if let Some(p) = dump_datasets {
                with_output(Some(p), |w| Ok(report.write_datasets_csv(w)?))?;
            }
            with_output(out, |w| emit::simulation_report(&report, config.format, w))
        }
        Command::PlotData {
            design,
            data,
            prior,
            delta0,
            grid,
            sampler,
        } => {
            let sample = load(*design, data)?;
            let draws =
                sample_posterior(&ModelSpec::for_design(*design, *prior), &sample, sampler)?;
            if !draws.converged {
                eprintln!(
                    "warning: MCMC draws did not converge (R-hat > 1.01); consider more draws"
                );
            }
            let density = fit_density(&draws.pooled_delta())?;
            with_output(out, |w| emit::plot_data(prior, &density, *delta0, *grid, w))
        }
    }
}
