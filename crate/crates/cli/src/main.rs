mod manifest;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use graphrep::arith::{parse_rational, to_fraction, to_scientific, Rational};
use graphrep::checkers::{fkg_report, lattice_condition, monotonicity_scan};
use graphrep::events::Event;
use graphrep::graph::{generalized_theta, Graph};
use graphrep::measures::{prob, CurrentParams, Model};
use graphrep::report::{
    figure, standard_battery, standard_xs, table_overview, verify, FigureModel, OverviewConfig,
    Suite, DEFAULT_DIGITS,
};
use graphrep::sampler::{
    sample_coupled, sample_loop_mcmc, write_dump, CoupledModel, DumpHeader, Method, SamplerConfig,
};
use graphrep::theta::counter_graph;

use manifest::Recorder;

/// Everything passed, or no counterexample was asked for.
const EXIT_PASS: u8 = 0;
/// Internal error, or a verification suite with failing checks.
const EXIT_ERROR: u8 = 1;
/// A certified counterexample was found.
const EXIT_COUNTEREXAMPLE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "graphrep",
    version,
    about = "Exact loop-O(1), random current and random cluster computations"
)]
struct Cli {
    /// Where to write the run manifest. Defaults to `<out>.manifest.json`
    /// when the command has `--out`, otherwise stderr.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate P(a <-> b) on the marked counter graph and certify a decrease.
    Figure(FigureArgs),
    /// Reproduce the FKG / MON / CON / SING overview of the six models.
    TableOverview(OverviewArgs),
    /// Run one exact identity suite over the standard graph battery.
    Verify(VerifyArgs),
    /// Exact probabilities of events.
    Prob(ProbArgs),
    /// FKG pair gaps and the lattice condition.
    Fkg(FkgArgs),
    /// Stochastic domination between neighbouring grid points.
    Scan(ScanArgs),
    /// Monte Carlo samples as a hex dump.
    Sample(SampleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Theta,
    Counter,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Graph as JSON: {"vertices": 3, "edges": [[0,1],[1,2]], "marks": {"a": 0, "b": 2}}.
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
    /// Built-in graph family.
    #[arg(long)]
    family: Option<Family>,
    /// Segment lengths of a theta graph, e.g. `2,3,2`.
    #[arg(long, value_delimiter = ',')]
    segments: Vec<u32>,
    /// Segments carrying the marks a, b (theta family).
    #[arg(long, value_delimiter = ',')]
    marks: Vec<usize>,
    /// Outer path length of the counter graph.
    #[arg(long)]
    n: Option<u32>,
    /// Inner path length of the counter graph.
    #[arg(long)]
    m: Option<u32>,
}

impl GraphArgs {
    fn load(&self, rec: &mut Recorder) -> Result<Arc<Graph>> {
        let g = if let Some(path) = &self.graph {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            rec.param("graph", path.display().to_string());
            Graph::from_json(&text)?
        } else {
            match self.family {
                Some(Family::Theta) => {
                    if self.segments.is_empty() {
                        bail!("--family theta needs --segments");
                    }
                    let marks = match self.marks.as_slice() {
                        [] => None,
                        [i, j] => Some((*i, *j)),
                        _ => bail!("--marks takes two segment indices"),
                    };
                    rec.param("family", "theta");
                    rec.param("segments", &self.segments);
                    generalized_theta(&self.segments, marks)?
                }
                Some(Family::Counter) => {
                    let (n, m) = self
                        .n
                        .zip(self.m)
                        .ok_or_else(|| anyhow!("--family counter needs --n and --m"))?;
                    rec.param("family", "counter");
                    rec.param("n", n);
                    rec.param("m", m);
                    counter_graph(n, m)?
                }
                None => bail!("pass --graph <json> or --family theta|counter"),
            }
        };
        rec.param("graph_json", g.to_json());
        Ok(Arc::new(g))
    }
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Coupling constant x = tanh(beta), as `num/den`.
    #[arg(long, conflicts_with = "t")]
    x: Option<String>,
    /// Pythagorean parameter t with x = 2t/(1+t^2); makes the single current exact.
    #[arg(long)]
    t: Option<String>,
}

impl ParamArgs {
    fn load(&self, rec: &mut Recorder) -> Result<CurrentParams> {
        let params = match (&self.x, &self.t) {
            (Some(x), None) => CurrentParams::from_x(parse_rational(x)?),
            (None, Some(t)) => {
                rec.param("t", t);
                CurrentParams::from_t(parse_rational(t)?)?
            }
            _ => bail!("pass exactly one of --x and --t"),
        };
        rec.param("x", to_fraction(params.x()));
        Ok(params)
    }
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Use the interior points k/N, k = 1..N-1.
    #[arg(long, conflicts_with = "grid")]
    grid_steps: Option<u32>,
    /// Explicit comma separated grid, e.g. `1/4,1/2,3/4`.
    #[arg(long, value_delimiter = ',')]
    grid: Vec<String>,
}

impl GridArgs {
    fn load(&self, default_steps: u32, rec: &mut Recorder) -> Result<Vec<Rational>> {
        if !self.grid.is_empty() {
            let grid = self
                .grid
                .iter()
                .map(|s| parse_rational(s))
                .collect::<graphrep::Result<Vec<_>>>()?;
            rec.param("grid", &self.grid);
            return Ok(grid);
        }
        let steps = self.grid_steps.unwrap_or(default_steps);
        if steps < 2 {
            bail!("--grid-steps must be at least 2");
        }
        rec.param("grid_steps", steps);
        Ok(uniform_grid(steps))
    }
}

fn uniform_grid(steps: u32) -> Vec<Rational> {
    (1..steps)
        .map(|k| Rational::new(k.into(), steps.into()))
        .collect()
}

fn model_arg(tag: &str) -> Result<Model> {
    Ok(Model::parse(tag)?)
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// `l` (loop), `P` (single current) or `l2` (two loop samples).
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: u32,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    precision_digits: usize,
    /// CSV path; the sidecar JSON goes to `<out>.json`. Without it the CSV
    /// goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OverviewArgs {
    /// Scan grid k/N; N must be a power of two.
    #[arg(long, default_value_t = 64)]
    grid_steps: u32,
    /// Grid for the single current connection curve; a power of two.
    #[arg(long, default_value_t = 2048)]
    single_grid_steps: u32,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// newcoupling, cor1, edge-identities, sumthm, lis-equivalence or appendix-tables.
    theorem: String,
    /// Values of x; defaults to 1/10, 1/4, 1/2, 3/4, 9/10.
    #[arg(long, value_delimiter = ',')]
    x: Vec<String>,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProbArgs {
    /// bernoulli, loop, single-current, random-cluster, double-loop,
    /// double-current or double-cluster.
    #[arg(long)]
    model: String,
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    params: ParamArgs,
    /// Event such as `connect:a,b`, `edge:3`, `edge-cyclic:3`, `allopen:0,1`.
    #[arg(long = "event", required = true)]
    events: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    precision_digits: usize,
}

#[derive(Args, Debug)]
struct FkgArgs {
    #[arg(long)]
    model: String,
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    params: ParamArgs,
    /// Increasing events to pair up; defaults to every `edge:i` and, on a
    /// marked graph, `connect:a,b`.
    #[arg(long = "event")]
    events: Vec<String>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    model: String,
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Auto,
    Exact,
    Glauber,
}

#[derive(Args, Debug)]
struct SampleArgs {
    /// A model tag, optionally prefixed `uniform-even:`.
    #[arg(long, default_value = "loop")]
    model: String,
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    x: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of samples; for the Glauber chain, one sweep each.
    #[arg(long, default_value_t = 1000)]
    sweeps: u64,
    #[arg(long, default_value_t = 100)]
    burn_in: u64,
    /// Only used for the plain loop model.
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Dump path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn create(path: &Path, rec: &mut Recorder) -> Result<BufWriter<File>> {
    rec.output(path);
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json(path: &Path, value: &impl serde::Serialize, rec: &mut Recorder) -> Result<()> {
    let mut w = create(path, rec)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn run_figure(a: &FigureArgs, rec: &mut Recorder) -> Result<u8> {
    let model: FigureModel = a.model.parse()?;
    rec.param("model", model.tag());
    rec.param("n", a.n);
    rec.param("m", a.m);
    rec.param("precision_digits", a.precision_digits);
    let grid = a.grid.load(64, rec)?;
    let data = figure(model, a.n, a.m, &grid, a.precision_digits)?;
    let sidecar = data.sidecar();
    match &a.out {
        Some(path) => {
            let mut w = create(path, rec)?;
            data.write_csv(&mut w)?;
            w.flush()?;
            let mut side = path.clone().into_os_string();
            side.push(".json");
            write_json(Path::new(&side), &sidecar, rec)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            data.write_csv(&mut out)?;
        }
    }
    match &data.decrease {
        Some(d) => {
            eprintln!(
                "certified decrease of {}(a<->b) at (n,m)=({},{}) between x={} and x={}",
                model,
                a.n,
                a.m,
                to_fraction(&d.x1),
                to_fraction(&d.x2)
            );
            Ok(EXIT_COUNTEREXAMPLE)
        }
        None => {
            eprintln!("no decrease on this grid");
            Ok(EXIT_PASS)
        }
    }
}

fn power_of_two_bits(steps: u32, flag: &str) -> Result<u32> {
    if steps < 2 || !steps.is_power_of_two() {
        bail!("{flag} must be a power of two, got {steps}");
    }
    Ok(steps.trailing_zeros())
}

fn run_overview(a: &OverviewArgs, rec: &mut Recorder) -> Result<u8> {
    let config = OverviewConfig {
        grid_bits: power_of_two_bits(a.grid_steps, "--grid-steps")?,
        single_grid_bits: power_of_two_bits(a.single_grid_steps, "--single-grid-steps")?,
    };
    rec.param("grid_steps", a.grid_steps);
    rec.param("single_grid_steps", a.single_grid_steps);
    let report = table_overview(config)?;
    print!("{}", report.render());
    if let Some(path) = &a.out {
        write_json(path, &report, rec)?;
    }
    if report.consistent() {
        Ok(EXIT_PASS)
    } else {
        for c in report.cells.iter().filter(|c| !c.consistent()) {
            eprintln!(
                "inconsistent cell: {} {} -> {}",
                c.model.tag(),
                c.property.tag(),
                c.status
            );
        }
        Ok(EXIT_ERROR)
    }
}

fn run_verify(a: &VerifyArgs, rec: &mut Recorder) -> Result<u8> {
    let suite: Suite = a.theorem.parse()?;
    rec.param("theorem", suite.tag());
    let xs = if a.x.is_empty() {
        standard_xs()
    } else {
        a.x.iter()
            .map(|s| parse_rational(s))
            .collect::<graphrep::Result<Vec<_>>>()?
    };
    rec.param("x", xs.iter().map(to_fraction).collect::<Vec<_>>());
    let report = verify(suite, &standard_battery()?, &xs)?;
    for c in &report.checks {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
        if let Some(detail) = c.detail.as_ref().filter(|_| !c.passed) {
            println!("    {detail}");
        }
    }
    let failed = report.failures().count();
    println!(
        "{}: {} checks, {} failed",
        suite,
        report.checks.len(),
        failed
    );
    if let Some(path) = &a.out {
        write_json(path, &report, rec)?;
    }
    Ok(if report.passed() {
        EXIT_PASS
    } else {
        EXIT_ERROR
    })
}

fn parse_events(specs: &[String], g: &Graph) -> Result<Vec<Event>> {
    Ok(specs
        .iter()
        .map(|s| Event::parse(s, g))
        .collect::<graphrep::Result<Vec<_>>>()?)
}

fn run_prob(a: &ProbArgs, rec: &mut Recorder) -> Result<u8> {
    let model = model_arg(&a.model)?;
    rec.param("model", model.tag());
    let g = a.graph.load(rec)?;
    let params = a.params.load(rec)?;
    rec.param("events", &a.events);
    let d = model.build(&g, &params)?;
    for ev in parse_events(&a.events, &g)? {
        let p = prob(&d, &ev)?;
        println!(
            "{}\t{}\t{}",
            ev.label(),
            to_fraction(&p),
            to_scientific(&p, a.precision_digits)
        );
    }
    Ok(EXIT_PASS)
}

fn run_fkg(a: &FkgArgs, rec: &mut Recorder) -> Result<u8> {
    let model = model_arg(&a.model)?;
    rec.param("model", model.tag());
    let g = a.graph.load(rec)?;
    let params = a.params.load(rec)?;
    let events = if a.events.is_empty() {
        let mut evs: Vec<Event> = (0..g.edge_count()).map(Event::edge_open).collect();
        if let Ok(ev) = Event::connect_marks(&g) {
            evs.push(ev);
        }
        evs
    } else {
        parse_events(&a.events, &g)?
    };
    rec.param(
        "events",
        events.iter().map(Event::label).collect::<Vec<_>>(),
    );
    let d = model.build(&g, &params)?;
    let report = fkg_report(&d, &events)?;
    let negative = report
        .gaps
        .iter()
        .filter(|p| p.gap < Rational::from_integer(0.into()));
    let mut found = false;
    for p in negative {
        found = true;
        println!(
            "gap {} < 0 for {} and {}",
            to_fraction(&p.gap),
            p.first,
            p.second
        );
    }
    let lattice = lattice_condition(&d);
    println!("pairs checked: {}", report.gaps.len());
    println!(
        "lattice condition: {}",
        if lattice.holds { "holds" } else { "fails" }
    );
    if let Some((w1, w2)) = lattice.violation {
        println!("  violated at {} and {}", w1.to_hex(), w2.to_hex());
    }
    if found {
        Ok(EXIT_COUNTEREXAMPLE)
    } else {
        println!("no negative gap among the given events");
        Ok(EXIT_PASS)
    }
}

fn run_scan(a: &ScanArgs, rec: &mut Recorder) -> Result<u8> {
    let model = model_arg(&a.model)?;
    rec.param("model", model.tag());
    let g = a.graph.load(rec)?;
    let grid = a.grid.load(16, rec)?;
    let scan = monotonicity_scan(
        |x| model.build(&g, &CurrentParams::from_x(x.clone())),
        &grid,
    )?;
    let mut found = false;
    for step in scan.failures() {
        found = true;
        println!(
            "no domination from x={} to x={}",
            to_fraction(&step.x1),
            to_fraction(&step.x2)
        );
        if let Some(w) = &step.report.witness {
            let minimal: Vec<String> = w.minimal.iter().map(|s| s.to_hex()).collect();
            println!(
                "  up-set generated by [{}] has mass {} then {}",
                minimal.join(", "),
                to_fraction(&w.lower_mass),
                to_fraction(&w.upper_mass)
            );
        }
    }
    println!(
        "steps: {}, failures: {}",
        scan.steps.len(),
        scan.failures().count()
    );
    Ok(if found {
        EXIT_COUNTEREXAMPLE
    } else {
        EXIT_PASS
    })
}

fn run_sample(a: &SampleArgs, rec: &mut Recorder) -> Result<u8> {
    let model = CoupledModel::parse(&a.model)?;
    let g = a.graph.load(rec)?;
    let x = parse_rational(&a.x)?;
    let cfg = SamplerConfig {
        seed: a.seed,
        sweeps: a.sweeps,
        burn_in: a.burn_in,
    };
    rec.param("model", model.tag());
    rec.param("x", to_fraction(&x));
    rec.param("sampler", cfg);
    rec.param("rng", graphrep::sampler::RNG_ALGORITHM);
    let samples = if model.model == Model::Loop && !model.uniform_even {
        let method = match a.method {
            MethodArg::Auto => Method::Auto,
            MethodArg::Exact => Method::Exact,
            MethodArg::Glauber => Method::Glauber,
        };
        sample_loop_mcmc(&g, &x, &cfg, method)?
    } else {
        sample_coupled(model, &g, &x, &cfg)?
    };
    let header = DumpHeader {
        model: model.tag(),
        x: to_fraction(&x),
        config: cfg,
    };
    match &a.out {
        Some(path) => {
            let mut w = create(path, rec)?;
            write_dump(&mut w, &header, &samples)?;
            w.flush()?;
        }
        None => write_dump(std::io::stdout().lock(), &header, &samples)?,
    }
    Ok(EXIT_PASS)
}

fn out_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Figure(a) => a.out.as_ref(),
        Command::TableOverview(a) => a.out.as_ref(),
        Command::Verify(a) => a.out.as_ref(),
        Command::Sample(a) => a.out.as_ref(),
        Command::Prob(_) | Command::Fkg(_) | Command::Scan(_) => None,
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Figure(_) => "figure",
        Command::TableOverview(_) => "table-overview",
        Command::Verify(_) => "verify",
        Command::Prob(_) => "prob",
        Command::Fkg(_) => "fkg",
        Command::Scan(_) => "scan",
        Command::Sample(_) => "sample",
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let mut rec = Recorder::new(command_name(&cli.command));
    let code = match &cli.command {
        Command::Figure(a) => run_figure(a, &mut rec),
        Command::TableOverview(a) => run_overview(a, &mut rec),
        Command::Verify(a) => run_verify(a, &mut rec),
        Command::Prob(a) => run_prob(a, &mut rec),
        Command::Fkg(a) => run_fkg(a, &mut rec),
        Command::Scan(a) => run_scan(a, &mut rec),
        Command::Sample(a) => run_sample(a, &mut rec),
    }?;
    let manifest = rec.finish(code.into())?;
    let text = serde_json::to_string_pretty(&manifest)?;
    let target = cli.manifest.clone().or_else(|| {
        out_path(&cli.command).map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    });
    match target {
        Some(path) => std::fs::write(&path, text + "\n")
            .with_context(|| format!("writing {}", path.display()))?,
        None => eprintln!("{text}"),
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
