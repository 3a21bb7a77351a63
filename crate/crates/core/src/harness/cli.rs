use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::binned::{gen_binned_nodes, verify_layout};
use crate::cheb::{gen_nodes_usual, sample_points, Formula};
use crate::error::{Error, Result};
use crate::error_model::{
    bn_compute, bound_suite, error_poly_E, z_from_r, z_stats, BoundOptions, L_factor, NodeModel,
    Q_factor,
};
use crate::extprec::{round_to_nearest_even, ExtReal};

use super::bench::{bench_csv, bench_suite};
use super::functions::TestFunction;
use super::measure::{measure_errors, Interpolant, NodeMode};
use super::testset::{build_test_set, Anchor};

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "BARYCHEB_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "barycheb",
    version,
    about = "Barycentric interpolation at Chebyshev points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Degree (the grid has n + 1 nodes)
    #[arg(long, global = true)]
    n: Option<usize>,
    /// first | second
    #[arg(long, global = true, default_value = "first")]
    formula: Formula,
    /// 0 (usual nodes), 3, or dyadic:<levels>
    #[arg(long, global = true, default_value = "0")]
    bins: NodeMode,
    /// Test function: cos1, cos10, cos100, cos1e3, cos1e4, cos1e5
    #[arg(long = "f", global = true, default_value = "cos1")]
    f: TestFunction,
    /// Tm1 | T0
    #[arg(long, global = true, default_value = "Tm1")]
    set: Anchor,
    /// Keep 1/d of the points of each test-set class
    #[arg(long, global = true, default_value_t = 10)]
    scale: usize,
    /// Write CSV here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Measure even where interpolation has not converged
    #[arg(long, global = true)]
    allow_step1: bool,
    /// Evaluation point for `eval`
    #[arg(long, global = true, allow_hyphen_values = true)]
    t: Option<f64>,
    /// Timed passes for `bench`
    #[arg(long, global = true, default_value_t = 5)]
    repeats: usize,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Node table
    Nodes,
    /// Weights used by the chosen formula
    Weights,
    /// Interpolant of f at one point
    Eval,
    /// Step II / Step III / overall errors on a test set
    Errors,
    /// Mean Step II error over mean Step III error
    Ratio,
    /// b_n of the rounded nodes
    Bn,
    /// Weight perturbations z_k
    Zstats,
    /// Error polynomial E, L and Q = E / L
    Epoly,
    /// Numerical checks of the perturbation bounds
    Bounds,
    /// CPU time per point, normalized by the usual first formula
    Bench,
    /// Checks a bin layout (and its grid, with --n)
    VerifyLayout,
}

impl Cli {
    fn degree(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::Usage("--n is required".into()))
    }
}

fn nodes_csv(cli: &Cli) -> Result<String> {
    let n = cli.degree()?;
    let mut s = String::new();
    match &cli.bins {
        NodeMode::Usual => {
            s.push_str("k,x\n");
            for (k, x) in gen_nodes_usual(n)?.iter().enumerate() {
                let _ = writeln!(s, "{k},{x:?}");
            }
        }
        NodeMode::Binned(layout) => {
            let g = gen_binned_nodes(n, layout)?;
            s.push_str("k,bin,base,u,x\n");
            for k in 0..g.len() {
                let l = g.bin_of()[k];
                let _ = writeln!(
                    s,
                    "{k},{l},{:?},{:?},{:?}",
                    layout.base(l),
                    g.offsets()[k],
                    g.reconstructed_ext(k).to_f64()
                );
            }
        }
    }
    Ok(s)
}

fn model_for(cli: &Cli, n: usize) -> Result<NodeModel> {
    match &cli.bins {
        NodeMode::Usual => NodeModel::usual(n),
        NodeMode::Binned(layout) => NodeModel::binned(n, layout),
    }
}

fn data_for(cli: &Cli, model: &NodeModel) -> Result<Vec<ExtReal>> {
    model.xhat().iter().map(|&t| cli.f.eval_ext(t)).collect()
}

fn execute(cli: &Cli, err: &mut dyn std::io::Write) -> Result<String> {
    let mut s = String::new();
    match cli.command {
        Command::Nodes => s = nodes_csv(cli)?,
        Command::Weights => {
            let p = Interpolant::new(cli.formula, &NodeMode::Usual, cli.degree()?, &cli.f)?;
            s.push_str("k,w\n");
            for (k, w) in p.weights().values.iter().enumerate() {
                let _ = writeln!(s, "{k},{w:?}");
            }
        }
        Command::Eval => {
            let t = cli
                .t
                .ok_or_else(|| Error::Usage("--t is required".into()))?;
            let p = Interpolant::new(cli.formula, &cli.bins, cli.degree()?, &cli.f)?;
            let _ = writeln!(s, "t,value\n{t:?},{:?}", p.eval(t)?);
        }
        Command::Errors | Command::Ratio => {
            let set = build_test_set(cli.set, cli.degree()?, cli.scale)?;
            let r = measure_errors(cli.formula, &cli.bins, &cli.f, &set, cli.allow_step1)?;
            let _ = writeln!(err, "{}", r.summary());
            if let Command::Errors = cli.command {
                s = r.csv();
            } else {
                s.push_str("n_plus_1,formula,bins,f,set,mean_stepII,mean_stepIII,ratio\n");
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{:?},{:?},{:?}",
                    r.n + 1,
                    r.formula.name(),
                    r.mode,
                    r.f,
                    r.set,
                    r.step2.mean,
                    r.step3.mean,
                    r.mean_ratio()
                );
            }
        }
        Command::Bn => {
            let n = cli.degree()?;
            let m = model_for(cli, n)?;
            let bn = bn_compute(&m, &z_from_r(&m)?)?;
            let _ = writeln!(s, "n_plus_1,bn\n{},{bn:?}", n + 1);
        }
        Command::Zstats => {
            let m = model_for(cli, cli.degree()?)?;
            let st = z_stats(&z_from_r(&m)?);
            let _ = writeln!(
                err,
                "norm_inf={:e} norm_1={:e} ratio={:.3} fit={:.3} max_fit_deviation={:.3}",
                st.norm_inf,
                st.norm_1,
                st.ratio,
                st.fit,
                st.max_fit_deviation()
            );
            s.push_str("k,z_k\n");
            for (k, z) in st.z.iter().enumerate() {
                let _ = writeln!(s, "{k},{z:?}");
            }
        }
        Command::Epoly => {
            let m = model_for(cli, cli.degree()?)?;
            let z = z_from_r(&m)?;
            let y = data_for(cli, &m)?;
            s.push_str("t,E,L,Q\n");
            let interior = sample_points(m.xhat_f64(), 8).into_iter().filter(|t| {
                t.abs() < 1.0 && m.xhat_f64().binary_search_by(|x| x.total_cmp(t)).is_err()
            });
            for t in interior {
                let te = ExtReal::from(t);
                let e = error_poly_E(&m, &y, &z, te).to_f64();
                let l = L_factor(&m, te)?;
                // Q is left empty where |L| < Q_MIN_ABS_L
                let q = Q_factor(&m, &y, &z, te)?
                    .map(|q| format!("{:?}", q.to_f64()))
                    .unwrap_or_default();
                let _ = writeln!(s, "{t:?},{e:?},{l:?},{q}");
            }
        }
        Command::Bounds => {
            let m = model_for(cli, cli.degree()?)?;
            let y = data_for(cli, &m)?;
            let report = bound_suite(&m, &y, &BoundOptions::default())?;
            let failed = report.records.iter().filter(|r| !r.satisfied).count();
            let _ = writeln!(
                err,
                "{} bounds checked, {failed} violated",
                report.records.len()
            );
            s = report.to_string();
        }
        Command::Bench => {
            let set = build_test_set(cli.set, cli.degree()?, cli.scale)?;
            s = bench_csv(&bench_suite(&cli.f, &set, cli.repeats)?);
        }
        Command::VerifyLayout => {
            let NodeMode::Binned(layout) = &cli.bins else {
                return Err(Error::Usage(
                    "verify-layout needs --bins 3 or --bins dyadic:<levels>".into(),
                ));
            };
            let grid = cli.n.map(|n| gen_binned_nodes(n, layout)).transpose()?;
            let report = verify_layout(layout, grid.as_ref());
            s = report.to_string();
            if !report.all_passed() {
                return Err(Error::Construction(format!("layout check failed\n{s}")));
            }
        }
    }
    Ok(s)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn thread_count(cli: &Cli) -> Result<usize> {
    if let Some(k) = cli.threads {
        return Ok(k);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::Usage(format!("{THREADS_ENV}='{v}' is not a thread count"))),
        Err(_) => Ok(1),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::StepOneCritical(_) => 3,
        _ => 2,
    }
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if !round_to_nearest_even() {
        eprintln!("error: floating-point rounding is not round-to-nearest-even");
        return 2;
    }
    let result = thread_count(&cli).and_then(|k| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Usage(e.to_string()))?;
        pool.install(|| execute(&cli, &mut std::io::stderr()))
    });
    match result.and_then(|text| emit(&cli, &text)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
