//! Output formatting for the subcommands.

use std::io::Write;

use bfkit::bayesfactor::{Components, Method};
use bfkit::density::DensityEstimate;
use bfkit::distributions::{t_tail_probability, t_two_sided_p};
use bfkit::models::t_statistic;
use bfkit::sampler::PerParam;
use bfkit::simulation::SimulationReport;
use bfkit::{
    BayesFactorResult, Design, Direction, HypothesisSpec, ObservedSample, PosteriorDraws,
    PriorSpec, SamplerSettings,
};
use serde::Serialize;

use crate::args::Format;
use crate::Failure;

#[derive(Debug, Serialize)]
pub struct DataSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub design: Option<Design>,
    pub n: Vec<usize>,
    /// One-sample t statistic; absent for two-sample data.
    pub t: Option<f64>,
    pub dof: Option<f64>,
    pub p_upper: Option<f64>,
    pub p_two_sided: Option<f64>,
}

impl DataSummary {
    pub fn new(sample: &ObservedSample) -> bfkit::Result<Self> {
        let n = sample.raw().iter().map(Vec::len).collect();
        let mut s = DataSummary {
            design: Some(sample.design()),
            n,
            t: None,
            dof: None,
            p_upper: None,
            p_two_sided: None,
        };
        if sample.design() == Design::OneSample {
            let (t, dof) = t_statistic(sample)?;
            s.fill_t(t, dof)?;
        }
        Ok(s)
    }

    /// Summary for a bare t statistic; assumes `n - 1` degrees of freedom.
    pub fn from_t(t: f64, n: usize) -> bfkit::Result<Self> {
        let mut s = DataSummary {
            design: None,
            n: vec![n],
            t: None,
            dof: None,
            p_upper: None,
            p_two_sided: None,
        };
        s.fill_t(t, n as f64 - 1.0)?;
        Ok(s)
    }

    fn fill_t(&mut self, t: f64, dof: f64) -> bfkit::Result<()> {
        self.t = Some(t);
        self.dof = Some(dof);
        self.p_upper = Some(t_tail_probability(t, dof)?);
        self.p_two_sided = Some(t_two_sided_p(t, dof)?);
        Ok(())
    }
}

#[derive(Debug, Serialize)]
pub struct Diagnostics {
    pub rhat: PerParam,
    pub ess: PerParam,
    pub accept_rate: Vec<f64>,
    pub converged: bool,
}

impl Diagnostics {
    pub fn new(draws: &PosteriorDraws) -> Self {
        Diagnostics {
            rhat: draws.rhat,
            ess: draws.ess,
            accept_rate: draws.accept_rate.clone(),
            converged: draws.converged,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TestReport {
    pub version: &'static str,
    pub command: &'static str,
    pub seed: Option<u64>,
    pub prior: String,
    pub data: Option<DataSummary>,
    pub sampler: Option<SamplerSettings>,
    pub diagnostics: Option<Diagnostics>,
    pub result: BayesFactorResult,
}

fn json<T: Serialize>(value: &T, w: &mut dyn Write) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(w).map_err(|e| Failure::Io(e.to_string()))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn test_report(r: &TestReport, format: Format, w: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Json => json(r, w),
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            let err = |e: csv::Error| Failure::Io(e.to_string());
            c.write_record([
                "method",
                "hypothesis",
                "prior",
                "bf01",
                "bf10",
                "log_bf01",
                "mc_se",
                "converged",
                "seed",
            ])
            .map_err(err)?;
            let res = &r.result;
            c.write_record([
                method_name(res.method).to_string(),
                res.hypothesis.to_string(),
                r.prior.clone(),
                res.bf01.to_string(),
                res.bf10.to_string(),
                res.log_bf01().to_string(),
                opt(res.mc_se),
                res.converged.map(|b| b.to_string()).unwrap_or_default(),
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
            ])
            .map_err(err)?;
            c.flush().map_err(|e| Failure::Io(e.to_string()))
        }
        Format::Text => text(r, w).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::SavageDickey => "savage-dickey",
        Method::Encompassing => "encompassing",
        Method::Jzs => "jzs",
    }
}

fn hypotheses(h: &HypothesisSpec) -> String {
    match h {
        HypothesisSpec::PointNull { delta0 } => {
            format!("H0: delta = {delta0}  vs  H1: delta != {delta0}")
        }
        HypothesisSpec::Directional {
            direction: Direction::Positive,
        } => "H0: delta < 0  vs  H1: delta > 0".into(),
        HypothesisSpec::Directional {
            direction: Direction::Negative,
        } => "H0: delta > 0  vs  H1: delta < 0".into(),
        HypothesisSpec::IntervalNull { epsilon } => {
            format!("H0: |delta| <= {epsilon}  vs  H1: |delta| > {epsilon}")
        }
    }
}

fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() || (1e-3..1e5).contains(&x.abs()) {
        format!("{x:.4}")
    } else {
        format!("{x:.4e}")
    }
}

fn verdict(bf01: f64, bf10: f64) -> String {
    if bf01 > 1.0 {
        format!("data favor H0 by a factor of {}", num(bf01))
    } else if bf01 < 1.0 {
        format!("data favor H1 by a factor of {}", num(bf10))
    } else {
        "data are equally likely under H0 and H1".into()
    }
}

fn text(r: &TestReport, w: &mut dyn Write) -> std::io::Result<()> {
    let res = &r.result;
    let method = match res.method {
        Method::SavageDickey => "Savage-Dickey density ratio",
        Method::Encompassing => "encompassing prior",
        Method::Jzs => "JZS closed form",
    };
    writeln!(w, "Bayes factor ({method}), prior on delta: {}", r.prior)?;
    writeln!(w, "{}", hypotheses(&res.hypothesis))?;
    writeln!(w)?;
    writeln!(w, "  B01 = {}", num(res.bf01))?;
    writeln!(w, "  B10 = 1/B01 = {}", num(res.bf10))?;
    writeln!(w, "  {}", verdict(res.bf01, res.bf10))?;
    if let Some(se) = res.mc_se {
        writeln!(w, "  Monte Carlo standard error of B01: {}", num(se))?;
    }
    match &res.components {
        Components::SavageDickey {
            prior_ordinate,
            posterior_ordinate,
            bf01_half_bandwidth,
            bf01_double_bandwidth,
            ..
        } => {
            writeln!(
                w,
                "  ordinates at delta0: prior {}, posterior {}",
                num(*prior_ordinate),
                num(*posterior_ordinate)
            )?;
            writeln!(
                w,
                "  B01 at half / double bandwidth: {} / {}",
                num(*bf01_half_bandwidth),
                num(*bf01_double_bandwidth)
            )?;
        }
        Components::Encompassing {
            prior_h0,
            posterior_h0,
            ..
        } => {
            writeln!(
                w,
                "  mass in H0: prior {}, posterior {}",
                num(*prior_h0),
                num(*posterior_h0)
            )?;
        }
        Components::Jzs {
            quadrature_error, ..
        } => {
            writeln!(w, "  quadrature error estimate: {quadrature_error:.2e}")?;
        }
    }
    if let Some(d) = &r.data {
        writeln!(w)?;
        let n: Vec<String> = d.n.iter().map(usize::to_string).collect();
        write!(w, "data: n = {}", n.join(" + "))?;
        if let (Some(t), Some(dof), Some(pu), Some(p2)) = (d.t, d.dof, d.p_upper, d.p_two_sided) {
            write!(
                w,
                ", t = {} on {dof} df, p = {} (upper), {} (two-sided)",
                num(t),
                num(pu),
                num(p2)
            )?;
        }
        writeln!(w)?;
    }
    if let (Some(s), Some(diag)) = (&r.sampler, &r.diagnostics) {
        let rhat = [Some(diag.rhat.delta), Some(diag.rhat.sigma), diag.rhat.mu]
            .into_iter()
            .flatten()
            .fold(f64::NEG_INFINITY, f64::max);
        writeln!(
            w,
            "sampler: {} chains x {} draws, seed {}, max R-hat {:.4}, ESS(delta) {:.0}, {}",
            s.n_chains,
            s.n_keep,
            s.seed,
            rhat,
            diag.ess.delta,
            if diag.converged {
                "converged"
            } else {
                "NOT converged"
            }
        )?;
    }
    Ok(())
}

pub fn simulation_report(
    r: &SimulationReport,
    format: Format,
    w: &mut dyn Write,
) -> Result<(), Failure> {
    match format {
        Format::Json => json(r, w),
        Format::Csv => Ok(r.write_csv(w)?),
        Format::Text => sim_text(r, w).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn sim_text(r: &SimulationReport, w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        w,
        "log B01, JZS vs Savage-Dickey (Cauchy prior scale {}, {} chains x {} draws)",
        r.r, r.sampler.n_chains, r.sampler.n_keep
    )?;
    writeln!(
        w,
        "{:>6} {:>5} {:>4} {:>9} {:>9} {:>9} {:>9} {:>9} {:>11}",
        "g", "N", "bf", "min", "q1", "median", "q3", "max", "consistency"
    )?;
    for c in &r.cells {
        for (label, s) in [("JZS", c.jzs), ("SD", c.savage_dickey)] {
            write!(w, "{:>6} {:>5} {:>4}", c.cell.g_effect, c.cell.n, label)?;
            match s {
                Some(s) => {
                    for v in [s.min, s.q1, s.median, s.q3, s.max] {
                        write!(w, " {v:>9.3}")?;
                    }
                }
                None => write!(w, "{:>50}", "(all datasets failed)")?,
            }
            match c.consistency {
                Some(k) => writeln!(w, " {k:>11.3}")?,
                None => writeln!(w)?,
            }
        }
    }
    writeln!(w, "runtime: {:.1} s", r.runtime_seconds)
}

/// `kind,x,prior_density,posterior_density` over an even grid, then one
/// `ordinate` row at `delta0`. Debug formatting keeps tiny tail densities
/// short (`1.4e-199`) while still round-tripping exactly.
pub fn plot_data(
    prior: &PriorSpec,
    posterior: &DensityEstimate,
    delta0: f64,
    (lower, upper, points): (f64, f64, usize),
    w: &mut dyn Write,
) -> Result<(), Failure> {
    let mut c = csv::Writer::from_writer(w);
    let err = |e: csv::Error| Failure::Io(e.to_string());
    c.write_record(["kind", "x", "prior_density", "posterior_density"])
        .map_err(err)?;
    let step = (upper - lower) / (points - 1) as f64;
    let mut row = |kind: &str, x: f64| -> Result<(), Failure> {
        c.write_record([
            kind.to_string(),
            format!("{x:?}"),
            format!("{:?}", prior.pdf(x)?),
            format!("{:?}", posterior.density_at(x)),
        ])
        .map_err(err)
    };
    for i in 0..points {
        let x = if i + 1 == points {
            upper
        } else {
            lower + i as f64 * step
        };
        row("grid", x)?;
    }
    row("ordinate", delta0)?;
    c.flush().map_err(|e| Failure::Io(e.to_string()))
}
