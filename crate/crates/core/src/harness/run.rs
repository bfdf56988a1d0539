//! Seeded repetitions, trace CSVs and summaries.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ProblemSource};
use super::rates::{fit_rate, SlopeReport};
use super::registry::builtin;
use crate::error::{Error, Result};
use crate::oracle::NoisyOracle;
use crate::par;
use crate::solvers::{solve, Method, RunTrace, TraceRecord};
use crate::whitebox::{self, io as wio};

/// One CSV row of a trace file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub iter: u64,
    pub f_value: f64,
    pub gap: Option<f64>,
    pub charged_queries: u64,
    pub actual_evals: u64,
    pub wallclock_ms: f64,
}

impl From<&TraceRecord> for CsvRow {
    fn from(r: &TraceRecord) -> Self {
        CsvRow {
            iter: r.iter,
            f_value: r.f_value,
            gap: r.gap,
            charged_queries: r.charged_queries,
            actual_evals: r.actual_evals,
            wallclock_ms: r.wallclock_ms,
        }
    }
}

pub fn write_trace_csv(path: &Path, records: &[TraceRecord]) -> Result<()> {
    let csv_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::InvalidState(format!("{other:?}")),
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in records {
        w.serialize(CsvRow::from(r)).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::InvalidState(format!("{other:?}")),
    })?;
    r.deserialize()
        .map(|row| {
            row.map_err(|e| Error::Parse {
                path: path.display().to_string(),
                line: e.position().map_or(0, |p| p.line() as usize),
                msg: e.to_string(),
            })
        })
        .collect()
}

/// Result of one seeded repetition.
#[derive(Debug, Clone)]
pub struct RepOutcome {
    pub rep: usize,
    pub seed: u64,
    pub trace: RunTrace,
    /// Certificate objective or game value for white-box instances.
    pub value: Option<f64>,
}

impl RepOutcome {
    pub fn final_gap(&self) -> Option<f64> {
        self.trace.final_gap()
    }
}

/// Linear-interpolation quantile of a nonempty sample.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
}

pub fn median(xs: &[f64]) -> f64 {
    quantile(xs, 0.5)
}

/// Aggregate over repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub reps: usize,
    /// (q1, median, q3) of the final gaps, when f⋆ is known.
    pub final_gap: Option<(f64, f64, f64)>,
    pub median_final_value: f64,
    pub total_charged_queries: u64,
    pub total_actual_evals: u64,
}

impl Summary {
    pub fn from_rows(runs: &[Vec<CsvRow>]) -> Summary {
        let last: Vec<&CsvRow> = runs.iter().filter_map(|r| r.last()).collect();
        let gaps: Option<Vec<f64>> = last.iter().map(|r| r.gap).collect();
        let values: Vec<f64> = last.iter().map(|r| r.f_value).collect();
        Summary {
            reps: runs.len(),
            final_gap: gaps
                .filter(|g| !g.is_empty())
                .map(|g| (quantile(&g, 0.25), median(&g), quantile(&g, 0.75))),
            median_final_value: if values.is_empty() { f64::NAN } else { median(&values) },
            total_charged_queries: last.iter().map(|r| r.charged_queries).sum(),
            total_actual_evals: last.iter().map(|r| r.actual_evals).sum(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("reps = {}\n", self.reps);
        if let Some((q1, m, q3)) = self.final_gap {
            s += &format!("final_gap_q1 = {q1:e}\nfinal_gap_median = {m:e}\nfinal_gap_q3 = {q3:e}\n");
        }
        s += &format!(
            "final_value_median = {:e}\ntotal_charged_queries = {}\ntotal_actual_evals = {}\n",
            self.median_final_value, self.total_charged_queries, self.total_actual_evals
        );
        s
    }

    /// Reads `key = value` pairs back from a summary file.
    pub fn parse_pairs(text: &str) -> Vec<(String, String)> {
        text.lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .collect()
    }
}

enum Instance {
    Sdp(whitebox::SdpInstance),
    Lp(whitebox::LpInstance),
    Zsg(whitebox::ZsgInstance),
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let head = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    Ok(match head.split_whitespace().next() {
        Some("SDP") => Instance::Sdp(wio::parse_sdp(path, &text)?),
        Some("LP") => Instance::Lp(wio::parse_lp(path, &text)?),
        _ => Instance::Zsg(wio::parse_zsg(path, &text)?),
    })
}

const DEFAULT_WHITEBOX_EPS: f64 = 0.1;

/// Runs the configured repetitions in memory.
pub fn run_reps(cfg: &ExperimentConfig) -> Result<Vec<RepOutcome>> {
    cfg.validate()?;
    match &cfg.problem {
        ProblemSource::Builtin { name, dim, kappa } => {
            let problem = builtin(name, *dim, *kappa)?;
            par::try_map_range(cfg.solver.exec, cfg.reps, |rep| {
                let mut scfg = cfg.solver.clone();
                scfg.seed = cfg.solver.seed.wrapping_add(rep as u64);
                if scfg.x0.is_none() {
                    scfg.x0 = problem.x0.clone();
                }
                if scfg.radius.is_none() && scfg.method == Method::QgdConvex {
                    scfg.radius = problem.radius;
                }
                let mut oracle = NoisyOracle::new(
                    problem.spec.clone(),
                    cfg.theta,
                    cfg.noise,
                    cfg.oracle_seed.wrapping_add(rep as u64),
                )?;
                let trace = solve(&problem.spec, &mut oracle, &scfg, None)?;
                Ok(RepOutcome {
                    rep,
                    seed: scfg.seed,
                    trace,
                    value: None,
                })
            })
        }
        ProblemSource::File(path) => {
            let inst = load_instance(path)?;
            let eps = cfg.solver.epsilon.unwrap_or(DEFAULT_WHITEBOX_EPS);
            par::try_map_range(cfg.solver.exec, cfg.reps, |rep| {
                let seed = cfg.solver.seed.wrapping_add(rep as u64);
                let (trace, value) = match &inst {
                    Instance::Sdp(s) => {
                        let (c, t) = whitebox::solve_sdp_dual(s, eps, cfg.theta, seed)?;
                        (t, c.objective)
                    }
                    Instance::Lp(l) => {
                        let (c, t) = whitebox::solve_lp(l, eps, cfg.theta, seed)?;
                        (t, c.objective)
                    }
                    Instance::Zsg(z) => {
                        let sol = whitebox::solve_zsg(z, eps, cfg.theta, seed)?;
                        let [t, _] = sol.traces;
                        (t, sol.value)
                    }
                };
                Ok(RepOutcome {
                    rep,
                    seed,
                    trace,
                    value: Some(value),
                })
            })
        }
    }
}

/// Files written by [`run_experiment`].
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub csv_paths: Vec<PathBuf>,
    pub summary_path: PathBuf,
    pub summary: Summary,
    pub outcomes: Vec<RepOutcome>,
}

/// Runs the repetitions and writes `run_<k>.csv` per repetition plus
/// `summary.txt` into `cfg.out`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let outcomes = run_reps(cfg)?;
    fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    let mut csv_paths = Vec::with_capacity(outcomes.len());
    for o in &outcomes {
        let p = cfg.out.join(format!("run_{}.csv", o.rep));
        write_trace_csv(&p, &o.trace.records)?;
        csv_paths.push(p);
    }
    let rows: Vec<Vec<CsvRow>> = outcomes
        .iter()
        .map(|o| o.trace.records.iter().map(CsvRow::from).collect())
        .collect();
    let summary = Summary::from_rows(&rows);
    let summary_path = cfg.out.join("summary.txt");
    fs::write(&summary_path, summary.to_text()).map_err(|e| Error::io(&summary_path, e))?;
    Ok(ExperimentReport {
        csv_paths,
        summary_path,
        summary,
        outcomes,
    })
}

/// Median final gap per iteration budget, and the log-log fit over them.
#[derive(Debug)]
pub struct SweepResult {
    pub points: Vec<(f64, f64)>,
    pub report: Result<SlopeReport>,
}

fn median_gap(cfg: &ExperimentConfig) -> Result<f64> {
    let gaps: Option<Vec<f64>> = run_reps(cfg)?.iter().map(|o| o.final_gap()).collect();
    let gaps = gaps.ok_or_else(|| Error::Config("sweeps need a problem with known f_star".into()))?;
    Ok(median(&gaps))
}

/// Runs `cfg` at each fixed T and fits log(gap) against log(T).
pub fn sweep_iterations(cfg: &ExperimentConfig, ts: &[u64]) -> Result<SweepResult> {
    let mut points = Vec::with_capacity(ts.len());
    for &t in ts {
        let mut c = cfg.clone();
        c.solver.iterations = Some(t);
        c.solver.epsilon = None;
        c.solver.record_every = (t / 100).max(1);
        points.push((t as f64, median_gap(&c)?));
    }
    let report = fit_rate(&points);
    Ok(SweepResult { points, report })
}

/// Median final gap at each oracle θ.
pub fn sweep_theta(cfg: &ExperimentConfig, thetas: &[f64]) -> Result<Vec<(f64, f64)>> {
    thetas
        .iter()
        .map(|&th| {
            let mut c = cfg.clone();
            c.theta = th;
            Ok((th, median_gap(&c)?))
        })
        .collect()
}
