//! Command-line front end: config parsing, subcommand dispatch and CSV output.
//!
//! Exit codes: 0 success, 2 parse error, 3 validation error, 4 non-convergence
//! (results are still written, with the offending rows flagged).

pub mod config;
pub mod error;
pub mod format;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use geninfo_core::experiments::{
    fig4_family, fig5_study_with, stock_info_curves, Fig5Table, GrayLevelConfig, GrayLevelCurve,
};
use geninfo_core::{
    kl_divergence, rate_distortion_curve_with, rate_fidelity_curve_with, semantic_info,
    shannon_mutual_info, Clamp, RateFidelityPoint, Selection, SemanticSystem, SolverOptions,
    DEFAULT_EPSILON,
};
use serde::Serialize;

use crate::config::{Document, Fig4Document, Fig5Document, GridSpec, StockDocument};
pub use crate::error::CliError;
use crate::format::{flag, num, rounded, Table};

pub const FIG2_PRESET: &str = include_str!("../../../configs/fig2.toml");
pub const FIG4_PRESET: &str = include_str!("../../../configs/fig4.toml");
pub const FIG5_PRESET: &str = include_str!("../../../configs/fig5.toml");

#[derive(Debug, Parser)]
#[command(
    name = "geninfo",
    version,
    about = "Generalized information measures and rate-fidelity curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Truth-degree floor inside averaged formulas.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Iteration cap of the rate-fidelity solver.
    #[arg(long = "max-iter", global = true)]
    pub max_iter: Option<usize>,
    /// Slope grid as "start:stop:count".
    #[arg(long = "s-grid", global = true)]
    pub s_grid: Option<String>,
    /// Write results here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Information of each message about each event.
    Info { config: PathBuf },
    /// Generalized Kullback score and conditional entropy of each message.
    Kullback { config: PathBuf },
    /// Pick the message that best conveys the evidence.
    Select { config: PathBuf },
    /// Pick the message that best renders a source message.
    Translate { config: PathBuf },
    /// Generalized entropies and mutual information of a semantic system.
    Entropies { config: PathBuf },
    /// Trace R(G) over a slope grid.
    RateFidelity {
        config: PathBuf,
        /// Also dump every solved channel as JSON.
        #[arg(long)]
        channels: Option<PathBuf>,
    },
    /// Trace the classical R(D) over a slope grid.
    RateDistortion { config: PathBuf },
    /// Reproduce a shipped scenario.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Prediction information over a stock index.
    Fig2 {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Gray-level rate-fidelity curves for several discriminations.
    Fig4 {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Bit depth.
        #[arg(long)]
        k: Option<u32>,
        /// Discrimination; repeat for several curves.
        #[arg(long = "d")]
        d: Vec<f64>,
    },
    /// Matching information against bit depth.
    Fig5 {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Discrimination; repeat for several tables.
        #[arg(long = "d")]
        d: Vec<f64>,
        #[arg(long)]
        kmax: Option<u32>,
    },
}

/// Rendered results of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: Vec<u8>,
    /// False when any solver point hit the iteration cap.
    pub converged: bool,
}

impl Output {
    fn done(body: Vec<u8>) -> Self {
        Self {
            body,
            converged: true,
        }
    }
}

/// Runs the command and writes its output. Returns the process exit code for
/// successful runs (0, or 4 on non-convergence).
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let output = execute(cli)?;
    match &cli.output {
        Some(path) => std::fs::write(path, &output.body)?,
        None => std::io::stdout().lock().write_all(&output.body)?,
    }
    if output.converged {
        Ok(0)
    } else {
        eprintln!("warning: solver did not converge at some points; see the converged column");
        Ok(4)
    }
}

/// Runs the command and returns its output without writing it.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let flags = Flags::new(cli);
    match &cli.command {
        Command::Info { config } => {
            flags.reject_solver("info")?;
            if flags.epsilon.is_some() {
                return Err(unused("--epsilon", "info"));
            }
            info(&config::load(config)?)
        }
        Command::Kullback { config } => {
            flags.reject_solver("kullback")?;
            let doc: Document = config::load(config)?;
            kullback(&doc, flags.clamp(doc.epsilon)?)
        }
        Command::Select { config } => {
            flags.reject_solver("select")?;
            let doc: Document = config::load(config)?;
            select(&doc, flags.clamp(doc.epsilon)?, false)
        }
        Command::Translate { config } => {
            flags.reject_solver("translate")?;
            let doc: Document = config::load(config)?;
            select(&doc, flags.clamp(doc.epsilon)?, true)
        }
        Command::Entropies { config } => {
            flags.reject_solver("entropies")?;
            let doc: Document = config::load(config)?;
            entropies(&doc, flags.clamp(doc.epsilon)?)
        }
        Command::RateFidelity { config, channels } => {
            let doc: Document = config::load(config)?;
            let clamp = flags.clamp(doc.epsilon)?;
            let (output, points) = rate_fidelity(&doc, clamp, &flags)?;
            if let Some(path) = channels {
                write_channels(path, &points)?;
            }
            Ok(output)
        }
        Command::RateDistortion { config } => {
            if flags.epsilon.is_some() {
                return Err(unused("--epsilon", "rate-distortion"));
            }
            rate_distortion(&config::load(config)?, &flags)
        }
        Command::Experiment(which) => {
            if flags.epsilon.is_some() {
                return Err(unused("--epsilon", "experiment"));
            }
            match which {
                Experiment::Fig2 { config } => {
                    flags.reject_solver("experiment fig2")?;
                    fig2(&preset(config.as_deref(), FIG2_PRESET)?)
                }
                Experiment::Fig4 { config, k, d } => {
                    let mut doc: Fig4Document = preset(config.as_deref(), FIG4_PRESET)?;
                    if let Some(k) = k {
                        doc.k = *k;
                    }
                    if !d.is_empty() {
                        doc.ds = d.clone();
                    }
                    fig4(&doc, &flags)
                }
                Experiment::Fig5 { config, d, kmax } => {
                    let mut doc: Fig5Document = preset(config.as_deref(), FIG5_PRESET)?;
                    if let Some(kmax) = kmax {
                        doc.kmax = *kmax;
                    }
                    if !d.is_empty() {
                        doc.ds = d.clone();
                    }
                    fig5(&doc, &flags)
                }
            }
        }
    }
}

fn unused(flag: &str, command: &str) -> CliError {
    CliError::Parse(format!("{flag} does not apply to {command}"))
}

fn preset<T: serde::de::DeserializeOwned>(
    path: Option<&Path>,
    shipped: &str,
) -> Result<T, CliError> {
    match path {
        Some(path) => config::load(path),
        None => config::parse(shipped),
    }
}

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub epsilon: Option<f64>,
    pub max_iter: Option<usize>,
    pub s_grid: Option<String>,
}

impl Flags {
    fn new(cli: &Cli) -> Self {
        Self {
            epsilon: cli.epsilon,
            max_iter: cli.max_iter,
            s_grid: cli.s_grid.clone(),
        }
    }

    fn reject_solver(&self, command: &str) -> Result<(), CliError> {
        if self.max_iter.is_some() {
            return Err(unused("--max-iter", command));
        }
        if self.s_grid.is_some() {
            return Err(unused("--s-grid", command));
        }
        Ok(())
    }

    fn clamp(&self, document: Option<f64>) -> Result<Clamp, CliError> {
        let epsilon = self.epsilon.or(document).unwrap_or(DEFAULT_EPSILON);
        Clamp::new(epsilon).map_err(|e| CliError::field("epsilon", e))
    }

    fn solver(&self, document: Option<usize>) -> Result<SolverOptions, CliError> {
        let mut options = SolverOptions::default();
        if let Some(n) = self.max_iter.or(document) {
            if n == 0 {
                return Err(CliError::field("max_iter", "must be positive"));
            }
            options.max_iterations = n;
        }
        Ok(options)
    }

    fn grid(&self, document: Option<&GridSpec>) -> Result<Vec<f64>, CliError> {
        match (&self.s_grid, document) {
            (Some(text), _) => config::parse_range(text),
            (None, Some(spec)) => spec.resolve(),
            (None, None) => Err(CliError::Parse("missing required key `s_grid`".into())),
        }
    }
}

/// Pointwise information, never clamped: a false message reports `-inf`.
fn info(doc: &Document) -> Result<Output, CliError> {
    if doc.epsilon.is_some() {
        return Err(unused("`epsilon`", "info"));
    }
    let prior = doc.prior()?;
    let alphabet = doc.alphabet(prior.len())?;
    let (labels, semantics) = doc.messages(&alphabet)?;
    let events: Vec<usize> = match &doc.event {
        Some(label) => vec![alphabet
            .index_of(label)
            .ok_or_else(|| CliError::field("event", format!("unknown label {label:?}")))?],
        None => (0..prior.len()).filter(|&i| prior[i] > 0.0).collect(),
    };
    let mut table = Table::new(
        Vec::new(),
        &["message", "event", "logical_probability", "info_bits"],
    )?;
    for (j, truth) in semantics.iter().enumerate() {
        let path = format!("messages[{j}]");
        let q = geninfo_core::logical_probability(&prior, truth)
            .map_err(|e| CliError::field(&path, e))?;
        for &i in &events {
            let bits = semantic_info(&prior, truth, i).map_err(|e| CliError::field(&path, e))?;
            table.row([
                labels[j].clone(),
                alphabet.labels()[i].clone(),
                num(q),
                num(bits),
            ])?;
        }
    }
    Ok(Output::done(table.finish()?))
}

fn kullback(doc: &Document, clamp: Clamp) -> Result<Output, CliError> {
    let prior = doc.prior()?;
    let evidence = doc.evidence(prior.len())?;
    let alphabet = doc.alphabet(prior.len())?;
    let (labels, semantics) = doc.messages(&alphabet)?;
    let mut table = Table::new(
        Vec::new(),
        &["message", "kullback_bits", "cond_entropy_bits"],
    )?;
    for (j, truth) in semantics.iter().enumerate() {
        let path = format!("messages[{j}]");
        let score = clamp
            .generalized_kullback(&evidence, &prior, truth)
            .map_err(|e| CliError::field(&path, e))?;
        let entropy = clamp
            .generalized_cond_entropy(&evidence, &prior, truth)
            .map_err(|e| CliError::field(&path, e))?;
        table.row([labels[j].clone(), num(score), num(entropy)])?;
    }
    Ok(Output::done(table.finish()?))
}

fn select(doc: &Document, clamp: Clamp, translate: bool) -> Result<Output, CliError> {
    let prior = doc.prior()?;
    let alphabet = doc.alphabet(prior.len())?;
    let (labels, candidates) = doc.messages(&alphabet)?;
    let Selection { index, scores } = if translate {
        let source = doc.source_truth(&alphabet)?;
        clamp.translate_select(&source, &prior, &candidates)?
    } else {
        let evidence = doc.evidence(prior.len())?;
        clamp.select_best(&candidates, &evidence, &prior)?
    };
    let mut body = format!("selected={index}\n").into_bytes();
    let mut table = Table::new(Vec::new(), &["index", "message", "score_bits"])?;
    for (j, score) in scores.iter().enumerate() {
        table.row([j.to_string(), labels[j].clone(), num(*score)])?;
    }
    body.extend(table.finish()?);
    Ok(Output::done(body))
}

fn entropies(doc: &Document, clamp: Clamp) -> Result<Output, CliError> {
    let source = doc.prior()?;
    let forecast = doc.forecast(&source)?;
    let alphabet = doc.alphabet(source.len())?;
    let (_, semantics) = doc.messages(&alphabet)?;
    let channel = doc.channel()?;
    let system = SemanticSystem::new(source.clone(), forecast.clone(), channel.clone(), semantics)?
        .with_clamp(clamp);
    let e = system.entropies()?;
    let fields = [
        ("forecasting_entropy", e.forecasting),
        ("posterior_forecasting_entropy", e.posterior_forecasting),
        ("generalized_entropy_y", e.generalized),
        ("fuzzy_entropy", e.fuzzy),
        ("generalized_mutual_info", e.mutual_info),
        ("kl_gap", e.kl_gap()),
        ("kl_source_forecast", kl_divergence(&source, &forecast)?),
        (
            "shannon_mutual_info",
            shannon_mutual_info(&source, &channel)?,
        ),
    ];
    let body: String = fields
        .iter()
        .map(|(k, v)| format!("{k}={}\n", num(*v)))
        .collect();
    Ok(Output::done(body.into_bytes()))
}

/// `rate-fidelity` output and the solved points behind it.
pub fn rate_fidelity(
    doc: &Document,
    clamp: Clamp,
    flags: &Flags,
) -> Result<(Output, Vec<RateFidelityPoint>), CliError> {
    let (source, payoff) = doc.payoff_instance(clamp)?;
    let s_grid = flags.grid(doc.s_grid.as_ref())?;
    let options = flags.solver(doc.max_iter)?;
    let points = rate_fidelity_curve_with(&source, &payoff, &s_grid, &options)
        .map_err(|e| CliError::field("s_grid", e))?;
    let mut table = Table::new(
        Vec::new(),
        &["s", "R_bits", "G_bits", "converged", "iterations"],
    )?;
    for p in &points {
        table.row([
            num(p.s),
            num(p.rate),
            num(p.fidelity),
            flag(p.converged).into(),
            p.iterations.to_string(),
        ])?;
    }
    let output = Output {
        body: table.finish()?,
        converged: points.iter().all(|p| p.converged),
    };
    Ok((output, points))
}

#[derive(Serialize)]
struct ChannelDump {
    points: Vec<PointDump>,
}

#[derive(Serialize)]
struct PointDump {
    s: f64,
    rate_bits: f64,
    fidelity_bits: f64,
    output: Vec<f64>,
    /// Row-major `P(y_j | x_i)`.
    channel: Vec<Vec<f64>>,
}

fn write_channels(path: &Path, points: &[RateFidelityPoint]) -> Result<(), CliError> {
    let round = |v: &[f64]| v.iter().copied().map(rounded).collect::<Vec<_>>();
    let dump = ChannelDump {
        points: points
            .iter()
            .map(|p| PointDump {
                s: rounded(p.s),
                rate_bits: rounded(p.rate),
                fidelity_bits: rounded(p.fidelity),
                output: round(p.output.probs()),
                channel: p.channel.rows().map(round).collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&dump).map_err(|e| CliError::Io(e.into()))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn rate_distortion(doc: &Document, flags: &Flags) -> Result<Output, CliError> {
    let source = doc.prior()?;
    let distortion = doc.distortion(source.len())?;
    let s_grid = flags.grid(doc.s_grid.as_ref())?;
    let options = flags.solver(doc.max_iter)?;
    let points = rate_distortion_curve_with(&source, &distortion, &s_grid, &options)
        .map_err(|e| CliError::field("s_grid", e))?;
    let mut table = Table::new(Vec::new(), &["s", "R_bits", "D", "converged", "iterations"])?;
    for p in &points {
        table.row([
            num(p.s),
            num(p.rate),
            num(p.distortion),
            flag(p.converged).into(),
            p.iterations.to_string(),
        ])?;
    }
    Ok(Output {
        body: table.finish()?,
        converged: points.iter().all(|p| p.converged),
    })
}

/// Stock prediction curves as `X,prediction,info_bits`.
pub fn fig2(doc: &StockDocument) -> Result<Output, CliError> {
    let rows = stock_info_curves(&doc.build()?)?;
    let mut table = Table::new(Vec::new(), &["X", "prediction", "info_bits"])?;
    for r in &rows {
        table.row([num(r.x), r.prediction.to_string(), num(r.info_bits)])?;
    }
    Ok(Output::done(table.finish()?))
}

/// Gray-level curves as `d,s,R,G`, one block per discrimination.
pub fn fig4(doc: &Fig4Document, flags: &Flags) -> Result<Output, CliError> {
    let s_grid = flags.grid(Some(&doc.s_grid))?;
    let options = flags.solver(doc.max_iter)?;
    let configs: Vec<GrayLevelConfig> = doc
        .ds
        .iter()
        .map(|&d| GrayLevelConfig {
            k: doc.k,
            d,
            s_grid: s_grid.clone(),
        })
        .collect();
    fig4_output(&fig4_family(&configs, &options)?)
}

pub fn fig4_output(curves: &[GrayLevelCurve]) -> Result<Output, CliError> {
    let mut table = Table::new(Vec::new(), &["d", "s", "R", "G"])?;
    let mut converged = true;
    for curve in curves {
        for p in &curve.points {
            converged &= p.converged;
            table.row([num(curve.d), num(p.s), num(p.rate), num(p.fidelity)])?;
        }
    }
    Ok(Output {
        body: table.finish()?,
        converged,
    })
}

/// Matching-information tables as `d,k,G_star,k_prime_flag`.
pub fn fig5(doc: &Fig5Document, flags: &Flags) -> Result<Output, CliError> {
    let s_grid = flags.grid(Some(&doc.s_grid))?;
    let options = flags.solver(doc.max_iter)?;
    if doc.kmin > doc.kmax {
        return Err(CliError::field(
            "kmin",
            format!("{} exceeds kmax {}", doc.kmin, doc.kmax),
        ));
    }
    let tables = doc
        .ds
        .iter()
        .map(|&d| {
            fig5_study_with(
                d,
                doc.kmin..=doc.kmax,
                doc.reference_bits,
                &s_grid,
                &options,
            )
        })
        .collect::<Result<Vec<Fig5Table>, _>>()?;
    fig5_output(&tables)
}

pub fn fig5_output(tables: &[Fig5Table]) -> Result<Output, CliError> {
    let mut table = Table::new(Vec::new(), &["d", "k", "G_star", "k_prime_flag"])?;
    let mut converged = true;
    for t in tables {
        for r in &t.rows {
            converged &= r.converged;
            let k_prime = if r.k == t.k_prime { "1" } else { "0" };
            table.row([num(t.d), r.k.to_string(), num(r.g_star), k_prime.into()])?;
        }
    }
    Ok(Output {
        body: table.finish()?,
        converged,
    })
}
