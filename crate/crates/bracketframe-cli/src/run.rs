use std::fs;
use std::io::Write as _;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use bracketframe::bracket::{bracket, ess_range};
use bracketframe::gabor::{
    completeness_check, frame_analyze, frame_operator_compressed, frame_operator_naive,
    frame_reconstruct, probe_batch, AnalyzeOptions, CompletenessVerdict, WhSystem,
};
use bracketframe::io::{signal_from_json, signal_to_json, SignalJson};
use bracketframe::ortho::gram_schmidt;
use bracketframe::window::{gaussian, indicator};
use bracketframe::{LatticeGrid, Period, SampledSignal};

/// Bracket-product and Weyl-Heisenberg frame analysis on rational lattices.
#[derive(Parser, Debug)]
#[command(name = "bracketframe", version, about)]
pub struct Cli {
    /// Cap on internal parallelism (also via BRACKETFRAME_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// Grid density: dt = 1/L.
    #[arg(long = "L")]
    l: i64,
    /// Shift steps: a = p/L. Defaults to L (a = 1).
    #[arg(long)]
    p: Option<i64>,
    /// Modulation period steps: 1/b = q/L. Defaults to L (b = 1).
    #[arg(long)]
    q: Option<i64>,
}

impl LatticeArgs {
    fn grid(&self) -> Result<LatticeGrid> {
        LatticeGrid::new(self.l, self.p.unwrap_or(self.l), self.q.unwrap_or(self.l))
            .map_err(|e| anyhow!("{e}"))
    }
}

fn parse_period(s: &str) -> Result<Period> {
    match s {
        "a" => Ok(Period::ShiftA),
        "1/b" | "inv_b" => Ok(Period::InvB),
        _ => bail!("invalid period {s:?}: expected \"a\" or \"1/b\""),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print inf/sup/integral of a bracket product; optionally dump the
    /// period as CSV with columns t,re,im.
    Bracket {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// First factor (window spec: indicator:START,LEN | gaussian:c=C,hw=H | file:PATH).
        #[arg(long)]
        f: String,
        /// Second factor; defaults to the first (self-bracket).
        #[arg(long)]
        g: Option<String>,
        /// Bracket period: "a" or "1/b".
        #[arg(long, default_value = "a")]
        period: String,
        /// Write the period samples as CSV (t,re,im).
        #[arg(long)]
        csv: Option<String>,
    },
    /// Orthonormalize signals from a JSON array and write the system with a
    /// residual report.
    GramSchmidt {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Input JSON: array of signal objects.
        #[arg(long = "in")]
        input: String,
        #[arg(long, default_value = "a")]
        period: String,
        #[arg(long)]
        out: String,
        /// Dependence tolerance.
        #[arg(long, default_value_t = 1e-10)]
        dep_tol: f64,
    },
    /// Full frame analysis of one window; emits a JSON report.
    FrameAnalyze {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        window: String,
        /// Report output path; stdout when omitted.
        #[arg(long)]
        report: Option<String>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        zero_tol: f64,
        #[arg(long, default_value_t = 20)]
        probes: usize,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        /// Exit 1 when the system is not a frame at this resolution.
        #[arg(long)]
        strict: bool,
    },
    /// Critical-density completeness test (requires p = q; both default to L).
    Complete {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        window: String,
        #[arg(long, default_value_t = 1e-6)]
        zero_tol: f64,
        /// Optional JSON report path.
        #[arg(long)]
        report: Option<String>,
        /// Exit 1 unless the verdict is "complete".
        #[arg(long)]
        strict: bool,
    },
    /// Reconstruct a signal through its frame coefficients.
    Reconstruct {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Input signal JSON.
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        window: String,
        #[arg(long, default_value_t = 1e-8)]
        cg_tol: f64,
        /// Output path for the reconstructed signal JSON.
        #[arg(long)]
        out: Option<String>,
    },
    /// Time the naive and compressed frame operators and check agreement.
    /// CSV columns: L,p,q,op,rep,wall_time_ns,max_rel_err (error vs naive;
    /// correctness is the contract, timing is reported, never asserted).
    Bench {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Which operator(s) to time.
        #[arg(long, value_parser = ["naive", "compressed", "both"], default_value = "both")]
        op: String,
        #[arg(long, default_value_t = 5)]
        repeat: usize,
        #[arg(long)]
        window: Option<String>,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

pub enum Outcome {
    Success,
    StrictVerdictFailed(String),
}

pub fn parse() -> Cli {
    Cli::parse()
}

fn init_threads(cli_threads: Option<usize>) {
    let n = cli_threads.or_else(|| {
        std::env::var("BRACKETFRAME_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Step-count token: a plain integer, `L`, or `L/k` (optionally negated).
fn parse_steps(token: &str, l: i64) -> Result<i64> {
    let (sign, body) = match token.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, token),
    };
    let value = if body == "L" {
        l
    } else if let Some(div) = body.strip_prefix("L/") {
        let d: i64 = div.parse().context("bad divisor in L/<int>")?;
        if d <= 0 || l % d != 0 {
            bail!("bad parameter: L/{d} is not an integer number of steps for L = {l}");
        }
        l / d
    } else {
        body.parse().with_context(|| format!("bad step count {token:?}"))?
    };
    Ok(sign * value)
}

fn parse_window(spec: &str, grid: LatticeGrid) -> Result<SampledSignal> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("unknown window {spec:?}: expected kind:params"))?;
    match kind {
        "indicator" => {
            let (start, len) = rest
                .split_once(',')
                .ok_or_else(|| anyhow!("bad parameter: indicator wants START,LEN"))?;
            let start = parse_steps(start.trim(), grid.l())?;
            let len = parse_steps(len.trim(), grid.l())?;
            if len <= 0 {
                bail!("bad parameter: indicator length must be positive");
            }
            Ok(indicator(grid, start, len as usize))
        }
        "gaussian" => {
            let mut c = None;
            let mut hw = None;
            for part in rest.split(',') {
                match part.trim().split_once('=') {
                    Some(("c", v)) => c = Some(v.parse::<f64>().context("bad c")?),
                    Some(("hw", v)) => hw = Some(v.parse::<f64>().context("bad hw")?),
                    _ => bail!("bad parameter: gaussian wants c=<real>,hw=<real>"),
                }
            }
            let c = c.ok_or_else(|| anyhow!("bad parameter: gaussian is missing c"))?;
            let hw = hw.ok_or_else(|| anyhow!("bad parameter: gaussian is missing hw"))?;
            if hw <= 0.0 {
                bail!("bad parameter: gaussian half-width must be positive");
            }
            Ok(gaussian(grid, c, hw))
        }
        "file" => {
            let text = fs::read_to_string(rest)
                .with_context(|| format!("bad parameter: cannot read {rest}"))?;
            let json: SignalJson = serde_json::from_str(&text)
                .with_context(|| format!("malformed signal JSON in {rest}"))?;
            Ok(signal_from_json(&json, grid)?)
        }
        _ => bail!("unknown window kind {kind:?} (expected indicator|gaussian|file)"),
    }
}

fn check_tolerance(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0 && value < 1.0) {
        bail!("tolerance {name} = {value} must lie in (0, 1)");
    }
    Ok(())
}

fn write_or_print(path: &Option<String>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {p}")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    init_threads(cli.threads);
    match cli.command {
        Command::Bracket { lattice, f, g, period, csv } => {
            let grid = lattice.grid()?;
            let period = parse_period(&period)?;
            let fs_ = parse_window(&f, grid)?;
            let gs_ = match g {
                Some(spec) => parse_window(&spec, grid)?,
                None => fs_.clone(),
            };
            let h = bracket(&fs_, &gs_, period)?;
            let integral = h.integral();
            match ess_range(&h, None) {
                Ok((inf, sup)) => println!("inf = {inf:.12e}  sup = {sup:.12e}"),
                Err(_) => {
                    let moduli: Vec<f64> = h.samples().iter().map(|z| z.norm()).collect();
                    let inf = moduli.iter().cloned().fold(f64::INFINITY, f64::min);
                    let sup = moduli.iter().cloned().fold(0.0f64, f64::max);
                    println!("complex-valued bracket: |.| in [{inf:.12e}, {sup:.12e}]");
                }
            }
            println!("integral = {:+.12e} {:+.12e}i", integral.re, integral.im);
            if let Some(path) = csv {
                let mut out = String::from("t,re,im\n");
                for (r, z) in h.samples().iter().enumerate() {
                    out.push_str(&format!(
                        "{},{:.17e},{:.17e}\n",
                        r as f64 * grid.dt(),
                        z.re,
                        z.im
                    ));
                }
                fs::write(&path, out).with_context(|| format!("cannot write {path}"))?;
            }
            Ok(Outcome::Success)
        }

        Command::GramSchmidt { lattice, input, period, out, dep_tol } => {
            let grid = lattice.grid()?;
            check_tolerance("dep_tol", dep_tol)?;
            let period = parse_period(&period)?;
            let text = fs::read_to_string(&input)
                .with_context(|| format!("cannot read {input}"))?;
            let jsons: Vec<SignalJson> =
                serde_json::from_str(&text).context("malformed signal array JSON")?;
            let signals = jsons
                .iter()
                .map(|j| signal_from_json(j, grid).map_err(|e| anyhow!("{e}")))
                .collect::<Result<Vec<_>>>()?;
            let sys = gram_schmidt(&signals, period, dep_tol)?;
            let residuals = sys.residuals()?;
            let report = serde_json::json!({
                "period": match period { Period::ShiftA => "a", Period::InvB => "1/b" },
                "dep_tol": dep_tol,
                "max_pairwise_residual": residuals.max_pairwise,
                "max_self_deviation": residuals.max_self_deviation,
                "members": sys.members().iter().map(signal_to_json).collect::<Vec<_>>(),
            });
            fs::write(&out, serde_json::to_string_pretty(&report)?)
                .with_context(|| format!("cannot write {out}"))?;
            println!(
                "orthonormalized {} signals: max pairwise residual {:.3e}, self deviation {:.3e}",
                sys.len(),
                residuals.max_pairwise,
                residuals.max_self_deviation
            );
            Ok(Outcome::Success)
        }

        Command::FrameAnalyze {
            lattice,
            window,
            report,
            tol,
            zero_tol,
            probes,
            seed,
            strict,
        } => {
            let grid = lattice.grid()?;
            check_tolerance("tol", tol)?;
            check_tolerance("zero_tol", zero_tol)?;
            let g = parse_window(&window, grid)?;
            let opts = AnalyzeOptions { tol, zero_tol, probes, seed, ..AnalyzeOptions::default() };
            let r = frame_analyze(&g, &opts)?;
            let text = serde_json::to_string_pretty(&r)?;
            write_or_print(&report, &text)?;
            if strict && !r.is_frame {
                return Ok(Outcome::StrictVerdictFailed(format!(
                    "not a frame: spectral bounds ({:.3e}, {:.3e})",
                    r.spectral_bounds.0, r.spectral_bounds.1
                )));
            }
            Ok(Outcome::Success)
        }

        Command::Complete { lattice, window, zero_tol, report, strict } => {
            let grid = lattice.grid()?;
            check_tolerance("zero_tol", zero_tol)?;
            let g = parse_window(&window, grid)?;
            let r = completeness_check(&g, &grid, zero_tol)?;
            println!(
                "verdict = {:?}  zero_fraction = {:.6}  sup_verdict = {:?}  fibers = {}",
                r.verdict, r.zero_fraction, r.sup_verdict, r.fiber_columns
            );
            if let Some(path) = &report {
                fs::write(path, serde_json::to_string_pretty(&r)?)
                    .with_context(|| format!("cannot write {path}"))?;
            }
            if strict && r.verdict != CompletenessVerdict::Complete {
                return Ok(Outcome::StrictVerdictFailed(format!(
                    "incomplete: zero_fraction = {:.6}",
                    r.zero_fraction
                )));
            }
            Ok(Outcome::Success)
        }

        Command::Reconstruct { lattice, input, window, cg_tol, out } => {
            let grid = lattice.grid()?;
            check_tolerance("cg_tol", cg_tol)?;
            let text = fs::read_to_string(&input)
                .with_context(|| format!("cannot read {input}"))?;
            let json: SignalJson =
                serde_json::from_str(&text).context("malformed signal JSON")?;
            let f = signal_from_json(&json, grid)?;
            let g = parse_window(&window, grid)?;
            let sys = WhSystem::covering(g, &f);
            let rec = frame_reconstruct(&f, &sys, cg_tol)?;
            let err = rec.sub(&f)?.l2_norm() / f.l2_norm().max(f64::MIN_POSITIVE);
            println!("relative reconstruction error = {err:.6e}");
            if let Some(path) = out {
                fs::write(&path, serde_json::to_string_pretty(&signal_to_json(&rec))?)
                    .with_context(|| format!("cannot write {path}"))?;
            }
            Ok(Outcome::Success)
        }

        Command::Bench { lattice, op, repeat, window, out, seed } => {
            let grid = lattice.grid()?;
            if repeat == 0 {
                bail!("repeat must be positive");
            }
            let g = match window {
                Some(spec) => parse_window(&spec, grid)?,
                None => gaussian(grid, 1.0, 4.0),
            };
            let probes = probe_batch(grid, (0, 2 * grid.q()), 1, seed);
            let f = probes.into_iter().next().expect("one probe");
            let sys = WhSystem::covering(g, &f);

            let mut csv = String::from("L,p,q,op,rep,wall_time_ns,max_rel_err\n");
            let naive_ref = frame_operator_naive(&f, &sys)?;
            let scale = naive_ref.max_abs().max(f64::MIN_POSITIVE);
            let mut worst_err = 0.0f64;
            for rep in 0..repeat {
                if op == "naive" || op == "both" {
                    let t0 = Instant::now();
                    let res = frame_operator_naive(&f, &sys)?;
                    let ns = t0.elapsed().as_nanos();
                    let err = max_signal_diff(&res, &naive_ref) / scale;
                    csv.push_str(&format!(
                        "{},{},{},naive,{},{},{:.3e}\n",
                        grid.l(),
                        grid.p(),
                        grid.q(),
                        rep,
                        ns,
                        err
                    ));
                }
                if op == "compressed" || op == "both" {
                    let t0 = Instant::now();
                    let res = frame_operator_compressed(&f, &sys)?;
                    let ns = t0.elapsed().as_nanos();
                    let err = max_signal_diff(&res, &naive_ref) / scale;
                    worst_err = worst_err.max(err);
                    csv.push_str(&format!(
                        "{},{},{},compressed,{},{},{:.3e}\n",
                        grid.l(),
                        grid.p(),
                        grid.q(),
                        rep,
                        ns,
                        err
                    ));
                }
            }
            match &out {
                Some(path) => fs::write(path, &csv)
                    .with_context(|| format!("cannot write {path}"))?,
                None => {
                    let mut stdout = std::io::stdout().lock();
                    stdout.write_all(csv.as_bytes())?;
                }
            }
            eprintln!("max compressed-vs-naive relative error: {worst_err:.3e}");
            Ok(Outcome::Success)
        }
    }
}

fn max_signal_diff(a: &SampledSignal, b: &SampledSignal) -> f64 {
    let lo = a.start_step().min(b.start_step());
    let hi = a.end_step().max(b.end_step());
    (lo..hi)
        .map(|i| (a.value_at_step(i) - b.value_at_step(i)).norm())
        .fold(0.0, f64::max)
}
