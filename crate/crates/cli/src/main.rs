use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::Serialize;

use fibrecurve::bounds::interval::with_digits;
use fibrecurve::bounds::{parse_big_uint, step_ii_threshold};
use fibrecurve::crossings::write_matrix_csv;
use fibrecurve::curves::write_curves_csv;
use fibrecurve::render::render_svg;
use fibrecurve::report::{geometric_range, sweep, write_sweep_csv, SCHEMA};
use fibrecurve::verify::{run_suite, Fault, Suite};
use fibrecurve::{
    bound_report, build_surface, coarse_matrix, coarse_summary, enumerate_system, greedy_prune,
    pruned_bound, realize_curve, surface_summary, trace_boundary, Alpha, CurveId, DEFAULT_PRECISION,
};

const EXIT_NEGATIVE: u8 = 2;
const EXIT_USAGE: u8 = 1;

/// Curve systems on torus-link fibre surfaces and certified crossing bounds.
#[derive(Debug, Parser)]
#[command(name = "fibrecurve", version)]
struct Cli {
    /// Significant digits of decimal enclosures in JSON output.
    #[arg(long, global = true, default_value_t = 40)]
    digits: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GenusArgs {
    /// Target genus: an integer, `1e6` or `10^6`.
    #[arg(long, value_parser = parse_genus)]
    g: BigUint,
    /// Exponent: a decimal or a fraction such as `1/3`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_alpha)]
    alpha: Alpha,
}

#[derive(Debug, Args)]
struct SystemArgs {
    #[arg(long)]
    p: usize,
    /// Odd curve size; the surface is Σ(p, 2k).
    #[arg(long)]
    k: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plan (k, p, q) for a genus and exponent, with the full bound report.
    Plan(GenusArgs),
    /// Trace the boundary of Σ(p,q).
    Surface {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Enumerate Γ(p,2k); `--out` writes the curves as CSV.
    System {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coarse crossing bounds of Γ(p,2k); `--out` writes the sparse matrix as CSV.
    Crossings {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedily prune Γ(p,2k) to m curves; `--out` writes the trace as JSON.
    Prune {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bound report at one genus, or a sweep g = from, from·factor, … ≤ to.
    Bounds {
        #[arg(long, value_parser = parse_genus, required_unless_present = "sweep_g_from")]
        g: Option<BigUint>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_alpha)]
        alpha: Alpha,
        #[arg(long, value_parser = parse_genus, requires_all = ["sweep_g_to", "sweep_g_factor"], conflicts_with = "g")]
        sweep_g_from: Option<BigUint>,
        #[arg(long, value_parser = parse_genus)]
        sweep_g_to: Option<BigUint>,
        #[arg(long, value_parser = parse_genus)]
        sweep_g_factor: Option<BigUint>,
        /// Also search for the genus where the second lower-bound step starts to hold.
        #[arg(long)]
        threshold: bool,
        /// Sweep rows as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a self-verification suite.
    Verify {
        #[arg(long, default_value = "small", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, hide = true, value_parser = parse_fault)]
        inject_fault: Option<Fault>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw Σ(p,q) as SVG, optionally with curves given as `u:l0,l1,…`.
    Render {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, value_parser = parse_curve)]
        highlight: Vec<CurveId>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_genus(s: &str) -> std::result::Result<BigUint, String> {
    parse_big_uint(s).map_err(|e| e.to_string())
}

fn parse_alpha(s: &str) -> std::result::Result<Alpha, String> {
    s.parse().map_err(|e: fibrecurve::Error| e.to_string())
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: fibrecurve::Error| e.to_string())
}

fn parse_fault(s: &str) -> std::result::Result<Fault, String> {
    s.parse().map_err(|e: fibrecurve::Error| e.to_string())
}

fn parse_curve(s: &str) -> std::result::Result<CurveId, String> {
    s.parse().map_err(|e: fibrecurve::Error| e.to_string())
}

#[derive(Serialize)]
struct Envelope<'a, I: Serialize, R: Serialize> {
    schema: u32,
    command: &'a str,
    inputs: I,
    precision_bits: usize,
    digits: usize,
    result: R,
}

struct Ctx {
    digits: usize,
}

impl Ctx {
    fn emit<I: Serialize, R: Serialize>(&self, command: &str, inputs: I, result: R) -> Result<()> {
        let env = Envelope {
            schema: SCHEMA,
            command,
            inputs,
            precision_bits: DEFAULT_PRECISION,
            digits: self.digits,
            result,
        };
        let text = with_digits(self.digits, || serde_json::to_string_pretty(&env))?;
        let mut out = io::stdout().lock();
        writeln!(out, "{text}")?;
        Ok(())
    }

    fn json_to<T: Serialize>(&self, path: &Path, value: &T) -> Result<()> {
        let text = with_digits(self.digits, || serde_json::to_string_pretty(value))?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn status(ok: bool) -> u8 {
    if ok {
        0
    } else {
        EXIT_NEGATIVE
    }
}

#[derive(Serialize)]
struct GenusInputs {
    g: String,
    alpha: String,
}

#[derive(Serialize)]
struct PqInputs {
    p: usize,
    q: usize,
}

#[derive(Serialize)]
struct SystemInputs {
    p: usize,
    k: usize,
    q: usize,
}

fn run(cli: Cli) -> Result<u8> {
    let ctx = Ctx { digits: cli.digits };
    let prec = DEFAULT_PRECISION;
    match cli.command {
        Command::Plan(GenusArgs { g, alpha }) => {
            if g < BigUint::from(2u32) {
                bail!("genus must be >= 2");
            }
            let report = bound_report(&g, &alpha, prec)?;
            let valid = report.plan.valid;
            let inputs = GenusInputs { g: g.to_string(), alpha: alpha.to_string() };
            ctx.emit("plan", inputs, &report)?;
            Ok(status(valid))
        }
        Command::Surface { p, q } => {
            let g = build_surface(p, q)?;
            let summary = surface_summary(&g)?;
            let walks: Vec<usize> = trace_boundary(&g).iter().map(|w| w.len()).collect();
            #[derive(Serialize)]
            struct Out {
                vertices: usize,
                ribbons: usize,
                summary: fibrecurve::SurfaceSummary,
                boundary_walk_lengths: Vec<usize>,
            }
            let out = Out {
                vertices: g.vertex_count(),
                ribbons: g.edge_count(),
                summary,
                boundary_walk_lengths: walks,
            };
            ctx.emit("surface", PqInputs { p, q }, out)?;
            Ok(0)
        }
        Command::System { sys, out } => {
            let s = enumerate_system(sys.p, sys.k)?;
            if let Some(path) = &out {
                write_curves_csv(&s, create(path)?)?;
            }
            #[derive(Serialize)]
            struct Out {
                curves: usize,
                block_size: usize,
                blocks: usize,
                csv: Option<String>,
            }
            let res = Out {
                curves: s.len(),
                block_size: s.block_size(),
                blocks: sys.p - 1,
                csv: out.map(|p| p.display().to_string()),
            };
            ctx.emit("system", SystemInputs { p: sys.p, k: sys.k, q: 2 * sys.k }, res)?;
            Ok(0)
        }
        Command::Crossings { sys, out } => {
            let s = enumerate_system(sys.p, sys.k)?;
            let summary = coarse_summary(&s);
            if let Some(path) = &out {
                write_matrix_csv(&coarse_matrix(&s), create(path)?)?;
            }
            let ok = summary.within_bound;
            ctx.emit("crossings", SystemInputs { p: sys.p, k: sys.k, q: 2 * sys.k }, summary)?;
            Ok(status(ok))
        }
        Command::Prune { sys, m, out } => {
            let s = enumerate_system(sys.p, sys.k)?;
            let trace = greedy_prune(&coarse_matrix(&s), m)?;
            if let Some(path) = &out {
                ctx.json_to(path, &trace)?;
            }
            let ok = trace.check_invariants();
            let bound = if m >= 2 && sys.p >= 2 {
                let b = pruned_bound(
                    &BigUint::from(m),
                    &BigUint::from(s.len()),
                    sys.k as u64,
                    &BigUint::from(sys.p),
                )?;
                Some(fibrecurve::bounds::exact::rational_string(&b))
            } else {
                None
            };
            #[derive(Serialize)]
            struct Out {
                curves: usize,
                m_target: usize,
                removed: usize,
                initial_total: String,
                final_total: String,
                final_average: Option<String>,
                invariants_hold: bool,
                pruned_bound: Option<String>,
                survivors: Vec<usize>,
            }
            let res = Out {
                curves: trace.n,
                m_target: m,
                removed: trace.steps.len(),
                initial_total: trace.initial_total.to_string(),
                final_total: trace.final_total().to_string(),
                final_average: trace
                    .final_average()
                    .map(|a| fibrecurve::bounds::exact::rational_string(&a)),
                invariants_hold: ok,
                pruned_bound: bound,
                survivors: trace.survivors.clone(),
            };
            #[derive(Serialize)]
            struct Inputs {
                p: usize,
                k: usize,
                q: usize,
                m: usize,
            }
            ctx.emit("prune", Inputs { p: sys.p, k: sys.k, q: 2 * sys.k, m }, res)?;
            Ok(status(ok))
        }
        Command::Bounds {
            g,
            alpha,
            sweep_g_from,
            sweep_g_to,
            sweep_g_factor,
            threshold,
            out,
        } => {
            let threshold = if threshold {
                Some(step_ii_threshold(&alpha, 1 << 16, 64, prec)?)
            } else {
                None
            };
            if let (Some(from), Some(to), Some(factor)) = (sweep_g_from, sweep_g_to, sweep_g_factor) {
                if from < BigUint::from(2u32) || factor < BigUint::from(2u32) {
                    bail!("sweep needs g >= 2 and factor >= 2");
                }
                let gs = geometric_range(&from, &to, &factor);
                let rows = sweep(&gs, &alpha, prec, ctx.digits)?;
                if let Some(path) = &out {
                    write_sweep_csv(&rows, create(path)?)?;
                }
                #[derive(Serialize)]
                struct Inputs {
                    alpha: String,
                    sweep_g_from: String,
                    sweep_g_to: String,
                    sweep_g_factor: String,
                }
                #[derive(Serialize)]
                struct Out<T> {
                    rows: Vec<fibrecurve::report::SweepRow>,
                    threshold: Option<T>,
                }
                let inputs = Inputs {
                    alpha: alpha.to_string(),
                    sweep_g_from: from.to_string(),
                    sweep_g_to: to.to_string(),
                    sweep_g_factor: factor.to_string(),
                };
                ctx.emit("bounds", inputs, Out { rows, threshold })?;
                return Ok(0);
            }
            let g = g.context("--g is required without a sweep")?;
            if g < BigUint::from(2u32) {
                bail!("genus must be >= 2");
            }
            let report = bound_report(&g, &alpha, prec)?;
            #[derive(Serialize)]
            struct Out<R, T> {
                report: R,
                threshold: Option<T>,
            }
            let inputs = GenusInputs { g: g.to_string(), alpha: alpha.to_string() };
            ctx.emit("bounds", inputs, Out { report, threshold })?;
            Ok(0)
        }
        Command::Verify { suite, inject_fault, out } => {
            let report = run_suite(suite, inject_fault);
            if let Some(path) = &out {
                ctx.json_to(path, &report)?;
            }
            let ok = report.passed;
            #[derive(Serialize)]
            struct Inputs {
                suite: Suite,
                inject_fault: Option<Fault>,
            }
            ctx.emit("verify", Inputs { suite, inject_fault }, report)?;
            Ok(status(ok))
        }
        Command::Render { p, q, highlight, out } => {
            let g = build_surface(p, q)?;
            let walks = highlight
                .iter()
                .map(|id| realize_curve(&g, id).with_context(|| format!("highlight {id}")))
                .collect::<Result<Vec<_>>>()?;
            let svg = render_svg(&g, &walks);
            match out {
                Some(path) => std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?,
                None => io::stdout().lock().write_all(svg.as_bytes())?,
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        // `| head` closing stdout early is not a failure
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
