//! `section.key = value` experiment files.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::oracle::NoiseMode;
use crate::par::Execution;
use crate::qgrad::Backend;
use crate::solvers::{Method, SolverConfig};

use super::registry::default_method;

/// Where the problem comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    Builtin { name: String, dim: usize, kappa: f64 },
    /// An SDP, LP or game instance file.
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub problem: ProblemSource,
    pub solver: SolverConfig,
    pub theta: f64,
    pub noise: NoiseMode,
    pub oracle_seed: u64,
    pub reps: usize,
    pub out: PathBuf,
}

impl ExperimentConfig {
    /// A configuration for a built-in problem with default settings.
    pub fn builtin(name: &str, dim: usize) -> Result<Self> {
        let method = default_method(name)?;
        Ok(ExperimentConfig {
            problem: ProblemSource::Builtin {
                name: name.to_string(),
                dim,
                kappa: 10.0,
            },
            solver: SolverConfig::new(method),
            theta: 0.0,
            noise: NoiseMode::Hash,
            oracle_seed: 0,
            reps: 1,
            out: PathBuf::from("out"),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Config("run.reps must be >= 1".into()));
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::Config(format!("oracle.theta = {} must be finite and >= 0", self.theta)));
        }
        if let ProblemSource::File(p) = &self.problem {
            if !p.exists() {
                return Err(Error::io(
                    p.clone(),
                    std::io::Error::new(std::io::ErrorKind::NotFound, "instance file not found"),
                ));
            }
        }
        self.solver.validate()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(path, &text)
    }

    /// Parses config text; relative instance paths resolve against the
    /// config file's directory.
    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse {
            path: path.display().to_string(),
            line,
            msg,
        };
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| perr(i + 1, format!("expected `section.key = value`, got {line:?}")))?;
            let k = k.trim();
            if !k.contains('.') {
                return Err(perr(i + 1, format!("key {k:?} has no section")));
            }
            entries.push((i + 1, k.to_string(), v.trim().to_string()));
        }
        let get = |key: &str| entries.iter().rev().find(|(_, k, _)| k == key);
        fn num<T: std::str::FromStr>(e: &(usize, String, String), perr: &dyn Fn(usize, String) -> Error) -> Result<T> {
            e.2.parse().map_err(|_| perr(e.0, format!("bad value {:?} for {}", e.2, e.1)))
        }

        let base = path.parent().unwrap_or(Path::new("."));
        let problem = match (get("problem.name"), get("problem.file")) {
            (Some(_), Some(f)) => return Err(perr(f.0, "set problem.name or problem.file, not both".into())),
            (None, None) => return Err(perr(0, "missing problem.name or problem.file".into())),
            (None, Some(f)) => ProblemSource::File(base.join(&f.2)),
            (Some(n), None) => ProblemSource::Builtin {
                name: n.2.clone(),
                dim: get("problem.dim").map(|e| num(e, &perr)).transpose()?.unwrap_or(8),
                kappa: get("problem.kappa").map(|e| num(e, &perr)).transpose()?.unwrap_or(10.0),
            },
        };
        let method = match (get("solver.method"), &problem) {
            (Some(e), _) => e.2.parse::<Method>().map_err(|err| perr(e.0, err.to_string()))?,
            (None, ProblemSource::Builtin { name, .. }) => default_method(name)?,
            (None, ProblemSource::File(_)) => Method::Qmd,
        };
        let mut solver = SolverConfig::new(method);
        for (line, key, value) in &entries {
            let e = (*line, key.clone(), value.clone());
            match key.as_str() {
                "problem.name" | "problem.file" | "problem.dim" | "problem.kappa" | "solver.method" => {}
                "solver.eps" | "solver.epsilon" => solver.epsilon = Some(num(&e, &perr)?),
                "solver.iterations" => solver.iterations = Some(num(&e, &perr)?),
                "solver.eta" => solver.eta = Some(num(&e, &perr)?),
                "solver.radius" => solver.radius = Some(num(&e, &perr)?),
                "solver.sigma" => solver.sigma = Some(num(&e, &perr)?),
                "solver.seed" => solver.seed = num(&e, &perr)?,
                "solver.record_every" => solver.record_every = num(&e, &perr)?,
                "solver.inject_failures" => solver.inject_failures = num(&e, &perr)?,
                "solver.theta_constant" => solver.theta_constant = num(&e, &perr)?,
                "solver.mp_constant" => solver.mp_constant = num(&e, &perr)?,
                "solver.x0" => {
                    solver.x0 = Some(
                        value
                            .split(|c: char| c == ',' || c.is_whitespace())
                            .filter(|t| !t.is_empty())
                            .map(|t| t.parse().map_err(|_| perr(*line, format!("bad x0 entry {t:?}"))))
                            .collect::<Result<Vec<f64>>>()?,
                    )
                }
                "oracle.theta" | "oracle.mode" | "oracle.seed" | "run.reps" | "run.out" => {}
                "run.backend" | "oracle.backend" => {
                    solver.backend = value.parse::<Backend>().map_err(|err| perr(*line, err.to_string()))?
                }
                "run.execution" => {
                    solver.exec = match value.as_str() {
                        "sequential" => Execution::Sequential,
                        "parallel" => Execution::Parallel,
                        _ => return Err(perr(*line, format!("unknown execution {value:?}"))),
                    }
                }
                _ => return Err(perr(*line, format!("unknown key {key:?}"))),
            }
        }
        let cfg = ExperimentConfig {
            problem,
            solver,
            theta: get("oracle.theta").map(|e| num(e, &perr)).transpose()?.unwrap_or(0.0),
            noise: match get("oracle.mode") {
                Some(e) => e.2.parse().map_err(|err: Error| perr(e.0, err.to_string()))?,
                None => NoiseMode::Hash,
            },
            oracle_seed: get("oracle.seed").map(|e| num(e, &perr)).transpose()?.unwrap_or(0),
            reps: get("run.reps").map(|e| num(e, &perr)).transpose()?.unwrap_or(1),
            out: get("run.out").map_or_else(|| PathBuf::from("out"), |e| PathBuf::from(&e.2)),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
