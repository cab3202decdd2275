use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};

use wreath_core::acceptance::run_all;
use wreath_core::bounds::{distance_curve, l2n_sq_spectral, DistanceMode};
use wreath_core::group::{build_group, build_wreath_table, cyclic_group, GroupTable};
use wreath_core::oracle::{continuized_law, convolution_powers, exact_distances, procedural_measure};
use wreath_core::report::{coupling_table, distance_table, simulate_table, spectrum_table, threshold_table, Cell, SimRow, Table};
use wreath_core::sim::{coupling_experiment, discrete_coupling_bound, discrete_coupling_tail, empirical_tv, SimConfig, SimMode, RNG_NAME};
use wreath_core::thresholds::{mixing_threshold, Metric};
use wreath_core::walks::{spectrum, WalkKind};
use wreath_core::{Error, Rational};

#[derive(Parser)]
#[command(name = "wreathwalk", version, about = "Spectra, distance bounds and simulations for random walks on wreath products G wr S_n")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact eigenvalues with multiplicities.
    Spectrum(Common),
    /// Distance-to-uniform curve over a range of k.
    Distance(DistanceArgs),
    /// Leading-order mixing step counts.
    Threshold(ThresholdArgs),
    /// Exact distances by brute-force convolution.
    Oracle(KArgs),
    /// Monte Carlo TV against the exact law.
    Simulate(SimulateArgs),
    /// Coupling-time experiments.
    Coupling(CouplingArgs),
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Statistic {
    #[value(name = "T")]
    T,
    #[value(name = "Tstar")]
    TStar,
}

#[derive(Args)]
struct Common {
    /// Z:m, S:m (m <= 6) or file:<path>; ignored for the sym walk.
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "independent")]
    walk: WalkKind,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 5000)]
    max_order: usize,
    #[arg(long, default_value_t = 2_000_000)]
    max_labels: usize,
}

#[derive(Args)]
struct KArgs {
    #[command(flatten)]
    common: Common,
    /// a..b[:step], inclusive, or a single k.
    #[arg(long, default_value = "0..10")]
    k: KRange,
}

#[derive(Args)]
struct DistanceArgs {
    #[command(flatten)]
    inner: KArgs,
    /// Recompute l2 exactly by convolution and compare.
    #[arg(long)]
    check_oracle: bool,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    common: Common,
    /// Both metrics when omitted.
    #[arg(long)]
    metric: Option<Metric>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    inner: KArgs,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "discrete")]
    mode: SimMode,
}

#[derive(Args)]
struct CouplingArgs {
    #[arg(long)]
    n: usize,
    /// paired: graph connectivity experiment; independent: discrete coupling tail over --k.
    #[arg(long, default_value = "paired")]
    walk: WalkKind,
    #[arg(long, default_value = "0,1,2")]
    c: CList,
    #[arg(long, default_value = "0..10")]
    k: KRange,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "T")]
    statistic: Statistic,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Debug)]
struct KRange(Vec<u64>);

impl FromStr for KRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |x: &str| x.trim().parse::<u64>().map_err(|_| format!("bad k value '{x}'"));
        let Some((a, rest)) = s.split_once("..") else {
            return Ok(KRange(vec![num(s)?]));
        };
        let (b, step) = match rest.split_once(':') {
            Some((b, st)) => (num(b)?, num(st)?),
            None => (num(rest)?, 1),
        };
        let a = num(a)?;
        if step == 0 || b < a {
            return Err(format!("empty k range '{s}'"));
        }
        Ok(KRange((a..=b).step_by(step as usize).collect()))
    }
}

#[derive(Clone, Debug)]
struct CList(Vec<f64>);

impl FromStr for CList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad c value '{x}'"))).collect::<Result<_, _>>().map(CList)
    }
}

/// Failures after argument parsing: bad values (exit 2) or runtime
/// validation and caps (exit 1).
enum Fail {
    Usage(String),
    Run(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Run(e.to_string())
    }
}

type Out = Result<(), Fail>;

impl Common {
    /// Base group for the walk; the sym walk lives over the trivial group.
    fn base(&self) -> Result<Arc<GroupTable>, Fail> {
        if self.n == 0 {
            return Err(Fail::Run("--n must be positive".into()));
        }
        if self.walk == WalkKind::Sym {
            return Ok(Arc::new(cyclic_group(1)?));
        }
        let spec = self.group.as_deref().ok_or_else(|| Fail::Usage(format!("--group is required for the {} walk", self.walk)))?;
        Ok(Arc::new(build_group(spec)?))
    }

    fn emit(&self, t: &Table) -> Out {
        emit(t, self.format, self.out.as_ref())
    }
}

fn emit(t: &Table, format: Format, out: Option<&PathBuf>) -> Out {
    let text = match format {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json(),
    };
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail::Run(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| Fail::Run(format!("stdout: {e}")))
        }
    }
}

fn cmd_spectrum(a: &Common) -> Out {
    let g = a.base()?;
    let lines = spectrum(g.clone(), a.n, a.walk, a.max_labels)?;
    let slots = if a.walk == WalkKind::Sym { 1 } else { g.num_classes() };
    let t = spectrum_table(&lines, slots).with_meta("walk", a.walk).with_meta("group", &g.name).with_meta("n", a.n);
    a.emit(&t)
}

fn cmd_distance(a: &DistanceArgs) -> Out {
    let c = &a.inner.common;
    let ks = &a.inner.k.0;
    let g = c.base()?;
    let curve = distance_curve(g.clone(), c.n, c.walk, ks, c.max_labels)?;
    c.emit(&distance_table(&curve))?;
    if !a.check_oracle {
        return Ok(());
    }
    if curve.mode != DistanceMode::FullSpectrum {
        return Err(Fail::Run(format!("--check-oracle needs the full spectrum, but this curve used {} mode (raise --max-labels)", curve.mode)));
    }
    let table = build_wreath_table(g.clone(), c.n, c.max_order)?;
    let p: Vec<Rational> = procedural_measure(&table, c.walk)?;
    let kmax = *ks.iter().max().unwrap();
    let dists = convolution_powers(&p, kmax, &table)?;
    let lines = spectrum(g, c.n, c.walk, c.max_labels)?;
    let mut worst = Rational::zero();
    let mut tv_ok = true;
    for (row, &k) in curve.rows.iter().zip(ks) {
        let kk = u32::try_from(k).map_err(|_| Fail::Run(format!("k = {k} too large for the exact check")))?;
        let d = exact_distances(&dists[k as usize]);
        let dev = (d.l2_normalized_sq - l2n_sq_spectral::<Rational>(&lines, kk)).abs();
        worst = worst.max(dev);
        tv_ok &= wreath_core::scalar::ratio_to_f64(&d.tv) <= row.tv_upper_spectral * (1.0 + 1e-12);
    }
    eprintln!("oracle check: {} values of k, order {}, max |delta l2n_sq| = {worst}, exact tv within spectral bound: {tv_ok}", ks.len(), table.order);
    if worst.is_zero() && tv_ok {
        Ok(())
    } else {
        Err(Fail::Run("oracle disagreement".into()))
    }
}

fn cmd_threshold(a: &ThresholdArgs) -> Out {
    let c = &a.common;
    if c.walk == WalkKind::Sym {
        return Err(Fail::Run("thresholds are tabulated for the independent and paired walks only".into()));
    }
    let g = c.base()?;
    let metrics = match a.metric {
        Some(m) => vec![m],
        None => vec![Metric::L2, Metric::Tv],
    };
    let mut rows = Vec::new();
    for m in metrics {
        rows.extend(mixing_threshold(&g, c.n, c.walk, m)?);
    }
    let t = threshold_table(&rows).with_meta("walk", c.walk).with_meta("group", &g.name).with_meta("n", c.n);
    c.emit(&t)
}

fn cmd_oracle(a: &KArgs) -> Out {
    let c = &a.common;
    let g = c.base()?;
    let table = build_wreath_table(g.clone(), c.n, c.max_order)?;
    let p: Vec<Rational> = procedural_measure(&table, c.walk)?;
    let dists = convolution_powers(&p, *a.k.0.iter().max().unwrap(), &table)?;
    let mut t = Table::new(&["k", "tv", "l2n_sq", "return_probability"]).with_meta("walk", c.walk).with_meta("group", &g.name).with_meta("n", c.n).with_meta("order", table.order);
    for &k in &a.k.0 {
        let dist = &dists[k as usize];
        let d = exact_distances(dist);
        t.push(vec![Cell::Int(k as i128), Cell::Rational(d.tv), Cell::Rational(d.l2_normalized_sq), Cell::Rational(dist[0].clone())]);
    }
    c.emit(&t)
}

fn cmd_simulate(a: &SimulateArgs) -> Out {
    let c = &a.inner.common;
    let ks = &a.inner.k.0;
    let g = c.base()?;
    let table = build_wreath_table(g.clone(), c.n, c.max_order)?;
    let p: Vec<f64> = procedural_measure(&table, c.walk)?;
    let powers = match a.mode {
        SimMode::Discrete => Some(convolution_powers(&p, *ks.iter().max().unwrap(), &table)?),
        SimMode::Continuized => None,
    };
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        let exact = match &powers {
            Some(pw) => pw[k as usize].clone(),
            None => continuized_law(&p, k as f64, &table)?,
        };
        let cfg = SimConfig { kind: c.walk, group: g.clone(), n: c.n, steps: k, trials: a.trials, seed: a.seed, mode: a.mode };
        let estimate = empirical_tv(&cfg, c.max_order)?;
        rows.push(SimRow { k, estimate, exact_tv: Some(exact_distances(&exact).tv), trials: a.trials, seed: a.seed });
    }
    let t = simulate_table(&rows).with_meta("walk", c.walk).with_meta("group", &g.name).with_meta("n", c.n).with_meta("mode", format!("{:?}", a.mode).to_lowercase());
    c.emit(&t)
}

fn cmd_coupling(a: &CouplingArgs) -> Out {
    eprintln!("rng: {RNG_NAME}, seed {}", a.seed);
    let t = match a.walk {
        WalkKind::Paired => {
            let r = coupling_experiment(a.n, a.trials, &a.c.0, a.seed)?;
            let (rows, name) = match a.statistic {
                Statistic::T => (&r.rows_t, "T"),
                Statistic::TStar => (&r.rows_t_star, "Tstar"),
            };
            coupling_table(rows, a.trials, a.seed).with_meta("n", a.n).with_meta("statistic", name)
        }
        WalkKind::Independent => {
            let tails = discrete_coupling_tail(a.n, &a.k.0, a.trials, a.seed)?;
            let mut t = Table::new(&["k", "empirical_tail", "bound", "stderr", "trials", "seed"]).with_meta("rng", RNG_NAME).with_meta("n", a.n);
            for (&k, e) in a.k.0.iter().zip(tails) {
                t.push(vec![
                    Cell::Int(k as i128),
                    Cell::Float(e.value),
                    Cell::Float(discrete_coupling_bound(a.n, k)),
                    Cell::Float(e.stderr),
                    Cell::Int(a.trials as i128),
                    Cell::Int(a.seed as i128),
                ]);
            }
            t
        }
        WalkKind::Sym => return Err(Fail::Usage("coupling supports --walk paired or independent".into())),
    };
    emit(&t, a.format, a.out.as_ref())
}

fn cmd_selftest() -> Out {
    let results = run_all();
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        Ok(())
    } else {
        Err(Fail::Run(format!("{failed} acceptance criteria failed")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.cmd {
        Cmd::Spectrum(a) => cmd_spectrum(a),
        Cmd::Distance(a) => cmd_distance(a),
        Cmd::Threshold(a) => cmd_threshold(a),
        Cmd::Oracle(a) => cmd_oracle(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Coupling(a) => cmd_coupling(a),
        Cmd::Selftest => cmd_selftest(),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
