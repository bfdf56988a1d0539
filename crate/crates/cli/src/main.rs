use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcvx::harness::{self, ExperimentConfig, ProblemSource};
use qcvx::qgrad::Backend;
use qcvx::whitebox::{self, io as wio};
use qcvx::{Error, Result};

#[derive(Parser)]
#[command(name = "qcvx", version, about = "Zeroth-order convex optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the experiment subcommands.
#[derive(Args, Clone)]
struct Common {
    /// Experiment file with `section.key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in problem name; ignored when --config is given.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    backend: Option<Backend>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file.
    file: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the certificate or solution.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Absolute tolerance on the slack's smallest eigenvalue.
    #[arg(long, default_value_t = whitebox::FEASIBILITY_TOL)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo bias and second moment of a gradient backend.
    GradEst {
        #[arg(long, default_value = "quadratic")]
        problem: String,
        #[arg(long, default_value_t = 5)]
        dim: usize,
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
        #[arg(long, default_value_t = 10_000)]
        draws: usize,
        #[arg(long, default_value = "surrogate")]
        backend: Backend,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a black-box problem and write traces.
    Solve(Common),
    /// Solve a dual SDP from an instance file.
    Sdp(InstanceArgs),
    /// Solve a dual LP from an instance file.
    Lp(InstanceArgs),
    /// Solve a zero-sum game from a CSV payoff matrix.
    Zsg(InstanceArgs),
    /// Sweep T (or θ) and fit the log-log rate.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated iteration counts.
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        ts: Vec<u64>,
        /// Comma-separated θ values; replaces the T sweep when given.
        #[arg(long, value_delimiter = ',')]
        thetas: Vec<f64>,
    },
    /// Tabulate game-solving cost regimes over (m, 1/ε).
    Regimes {
        #[arg(long, default_value_t = 1.0)]
        m_min: f64,
        #[arg(long, default_value_t = 1e8)]
        m_max: f64,
        #[arg(long, default_value_t = 1.0)]
        inv_eps_min: f64,
        #[arg(long, default_value_t = 1e4)]
        inv_eps_max: f64,
        #[arg(long, default_value_t = 9)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn experiment(c: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match (&c.config, &c.problem) {
        (Some(p), _) => ExperimentConfig::load(p)?,
        (None, Some(name)) => ExperimentConfig::builtin(name, c.dim.unwrap_or(8))?,
        (None, None) => return Err(Error::Config("pass --config or --problem".into())),
    };
    if let (Some(d), ProblemSource::Builtin { dim, .. }) = (c.dim, &mut cfg.problem) {
        *dim = d;
    }
    if let Some(m) = &c.method {
        cfg.solver.method = m.parse()?;
    }
    if let Some(s) = c.seed {
        cfg.solver.seed = s;
        cfg.oracle_seed = s;
    }
    if let Some(t) = c.theta {
        cfg.theta = t;
    }
    if let Some(b) = c.backend {
        cfg.solver.backend = b;
    }
    if let Some(e) = c.eps {
        cfg.solver.epsilon = Some(e);
    }
    if let Some(t) = c.iterations {
        cfg.solver.iterations = Some(t);
    }
    if let Some(r) = c.reps {
        cfg.reps = r;
    }
    if let Some(o) = &c.out {
        cfg.out = o.clone();
    }
    if cfg.solver.epsilon.is_none() && cfg.solver.iterations.is_none() {
        cfg.solver.epsilon = Some(0.1);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io {
            path: p.clone(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GradEst {
            problem,
            dim,
            sigma,
            draws,
            backend,
            theta,
            seed,
        } => {
            let p = harness::builtin(&problem, dim, 10.0)?;
            let x = p.x0.clone().unwrap_or_else(|| {
                p.spec
                    .domain
                    .as_ref()
                    .map_or_else(|| vec![0.0; p.spec.dim], |d| d.center_point())
            });
            let s = harness::gradient_statistics(&p.spec, &x, backend, sigma, theta, draws, seed, Default::default())?;
            println!("backend = {backend}\ndraws = {}\nsigma = {sigma}", s.draws);
            println!("max_bias = {:e} (bound 3σ²/4 = {:e})", s.max_bias(), 0.75 * sigma * sigma);
            println!("second_moment = {:e} ± {:e} (bound σ² = {:e})", s.second_moment, s.second_moment_se, sigma * sigma);
            println!("charged_per_draw = {}", s.charged_per_draw);
            println!("bias_ok = {}\nsecond_moment_ok = {}", s.bias_within(3.0), s.second_moment_within(3.0));
        }
        Command::Solve(c) => {
            let cfg = experiment(&c)?;
            let rep = harness::run_experiment(&cfg)?;
            print!("{}", rep.summary.to_text());
            for w in rep.outcomes.iter().flat_map(|o| o.trace.warnings.iter()).take(5) {
                log::warn!("{w}");
            }
            println!("wrote {} traces and {}", rep.csv_paths.len(), rep.summary_path.display());
        }
        Command::Sdp(a) => {
            let inst = wio::load_sdp(&a.file)?;
            let (cert, trace) = whitebox::solve_sdp_dual(&inst, a.eps, a.theta, a.seed)?;
            let report = whitebox::check_dual_feasibility(&inst, &cert, a.tol)?;
            write_out(&a.out, &cert.to_text())?;
            println!("iterations = {}\nfeasible = {}", trace.iterations, report.passed());
            if !report.passed() {
                return Err(Error::Numeric(format!("certificate failed feasibility: {report:?}")));
            }
        }
        Command::Lp(a) => {
            let inst = wio::load_lp(&a.file)?;
            let (cert, trace) = whitebox::solve_lp(&inst, a.eps, a.theta, a.seed)?;
            write_out(&a.out, &cert.to_text())?;
            println!("iterations = {}\nfeasible = {}", trace.iterations, cert.min_slack_eig >= -a.tol);
        }
        Command::Zsg(a) => {
            let inst = wio::load_zsg(&a.file)?;
            let sol = whitebox::solve_zsg(&inst, a.eps, a.theta, a.seed)?;
            let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ");
            let text = format!(
                "value = {:.8}\nlower = {:.8}\nupper = {:.8}\nx = {}\ny = {}\n",
                sol.value,
                sol.lower,
                sol.upper,
                fmt(&sol.x),
                fmt(&sol.y)
            );
            write_out(&a.out, &text)?;
        }
        Command::Sweep { common, ts, thetas } => {
            let cfg = experiment(&common)?;
            if thetas.is_empty() {
                let res = harness::sweep_iterations(&cfg, &ts)?;
                println!("T\tmedian_gap");
                for (t, g) in &res.points {
                    println!("{t}\t{g:e}");
                }
                let r = res.report?;
                println!("slope = {:.4}\nintercept = {:.4}\nr_squared = {:.4}", r.slope, r.intercept, r.r_squared);
            } else {
                println!("theta\tmedian_gap");
                for (th, g) in harness::sweep_theta(&cfg, &thetas)? {
                    println!("{th:e}\t{g:e}");
                }
            }
        }
        Command::Regimes {
            m_min,
            m_max,
            inv_eps_min,
            inv_eps_max,
            count,
            out,
        } => {
            if !(m_min > 0.0 && m_max >= m_min && inv_eps_min > 0.0 && inv_eps_max >= inv_eps_min) {
                return Err(Error::Config("ranges must be positive and ordered".into()));
            }
            let ms = harness::log_space(m_min, m_max, count);
            let es = harness::log_space(inv_eps_min, inv_eps_max, count);
            write_out(&out, &harness::emit_zsg_regimes(&ms, &es))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
