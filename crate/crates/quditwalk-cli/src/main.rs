//! `quditwalk`: position tables, walk circuits, simulations and comparisons.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 domain or range error,
//! 3 verification failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quditwalk::compare::{compare, CircuitWalk};
use quditwalk::distribution::Distribution;
use quditwalk::gates::{Circuit, ExecPolicy};
use quditwalk::mapping::{mapping_for, naive_mapping_demo, PositionMapping, Variant};
use quditwalk::matrix::Matrix;
use quditwalk::oracle::{evolve_with, Orientation, WalkSpec, WalkVariant};
use quditwalk::resources;
use quditwalk::state::measure_register;
use quditwalk::synth::{
    peephole_optimize, synthesize_1d, synthesize_lattice, LatticeRequest, Mode, SynthesisRequest, Synthesized,
};
use quditwalk::{coins, golden, Error};

#[derive(Parser, Debug)]
#[command(name = "quditwalk", version, about = "Discrete-time quantum walks on qudit registers")]
struct Cli {
    /// Worker threads for the simulation kernels (results do not depend on it)
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a position mapping table
    Map(MapArgs),
    /// Synthesize walk-step circuits
    Synth(SynthArgs),
    /// Simulate a circuit or the direct walk and write the distribution
    Run(RunArgs),
    /// Per-step TVD between circuits and the direct walk
    Compare(CompareArgs),
    /// Register sizes and step capacities
    Resources(ResourceArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    /// Nearest-neighbour code (stored table for d = 2)
    Generated,
    /// The stored ternary table without neighbour structure
    Naive,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct MappingArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    digits: u32,
    #[arg(long, default_value = "primary")]
    variant: Variant,
    #[arg(long, value_enum, default_value = "generated")]
    scheme: SchemeArg,
}

impl MappingArgs {
    fn build(&self) -> quditwalk::Result<PositionMapping> {
        match self.scheme {
            SchemeArg::Generated => mapping_for(self.d as usize, self.digits as usize, self.variant),
            SchemeArg::Naive => {
                let m = naive_mapping_demo()?;
                if (m.d, m.n_digits) != (self.d as usize, self.digits as usize) {
                    return Err(Error::Unsupported(format!(
                        "the naive table is stored for d = {}, {} digits",
                        m.d, m.n_digits
                    )));
                }
                Ok(m)
            }
        }
    }
}

#[derive(Args, Debug)]
struct MapArgs {
    #[command(flatten)]
    mapping: MappingArgs,
    /// Table id written into the file
    #[arg(long, default_value = "generated")]
    id: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[command(flatten)]
    mapping: MappingArgs,
    /// Last step the circuit must serve
    #[arg(long)]
    steps: usize,
    /// First step of the window (labels the file; gates depend on `--steps`)
    #[arg(long, default_value_t = 1)]
    first: usize,
    #[arg(long, default_value = "paper")]
    mode: Mode,
    #[arg(long, default_value = "hadamard")]
    coin: String,
    /// Lattice axes; 1 is the line
    #[arg(long, default_value_t = 1)]
    dims: usize,
    /// Merge adjacent uncontrolled shifts
    #[arg(long)]
    optimize: bool,
    /// Output file; alternating circuits go to `<stem>_A.json` and `<stem>_B.json`
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrientationArg {
    Standard,
    Mirrored,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CoinInit {
    /// Coin state 0
    Basis,
    /// Equal weight on every coin state
    Uniform,
}

#[derive(Args, Debug)]
struct CircuitSource {
    /// Circuit file; repeat for an alternating pair or a step pipeline
    #[arg(long = "circuit")]
    circuits: Vec<PathBuf>,
    /// Stored figure circuit by id (honours QUDITWALK_GOLDEN_DIR)
    #[arg(long = "golden")]
    golden: Vec<String>,
}

impl CircuitSource {
    fn is_empty(&self) -> bool {
        self.circuits.is_empty() && self.golden.is_empty()
    }

    fn load(&self) -> quditwalk::Result<Vec<Circuit>> {
        let mut out = Vec::new();
        for p in &self.circuits {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            out.push(Circuit::from_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?);
        }
        for id in &self.golden {
            out.push(golden::circuit(id)?);
        }
        Ok(out)
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Direct walk: line, lazy, lattice2d, or lattice<D>d
    #[arg(long, conflicts_with_all = ["circuits", "golden"])]
    oracle: Option<String>,
    #[command(flatten)]
    source: CircuitSource,
    #[arg(long)]
    steps: usize,
    /// hadamard, dft, grover, lazy-g (with --rho) or none
    #[arg(long, default_value = "hadamard")]
    coin: String,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, value_enum, default_value = "basis")]
    coin_init: CoinInit,
    /// Start uniformly spread over [−L, L] on every axis
    #[arg(long)]
    uniform_extent: Option<i64>,
    #[arg(long, value_enum, default_value = "standard")]
    orientation: OrientationArg,
    /// Report positions instead of raw position-wire digits
    #[arg(long)]
    decode: bool,
    /// Per-axis radix for decoding; defaults to the circuit metadata
    #[arg(long, requires = "digits")]
    d: Option<usize>,
    #[arg(long, requires = "d")]
    digits: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    source: CircuitSource,
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ResourceArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    d: Option<u64>,
    /// Position qudits (estimate for this register)
    #[arg(long)]
    digits: Option<u32>,
    /// Steps to support (register size for this walk)
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long, default_value_t = 1)]
    dims: u32,
    /// Capacity rows for plotting
    #[arg(long)]
    table: bool,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
    d_list: Vec<u64>,
    #[arg(long, default_value_t = 8)]
    n_max: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Lib(Error::Io(e))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_map(a: &MapArgs) -> Result<(), Failure> {
    let m = a.mapping.build()?;
    emit(a.out.as_deref(), &m.to_table(&a.id).to_json())
}

fn suffixed(p: &Path, tag: &str) -> PathBuf {
    let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = p.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "json".into());
    p.with_file_name(format!("{stem}_{tag}.{ext}"))
}

fn cmd_synth(a: &SynthArgs) -> Result<(), Failure> {
    let m = a.mapping.build()?;
    let cap = resources::capacity_1d(m.d as u64, m.n_digits as u32);
    let add_cap = |e: Error| match e {
        Error::Range(msg) => Error::Range(format!("{msg} (⌊d^n/2⌋ = {cap})")),
        other => other,
    };
    let out = if a.dims > 1 {
        let req = LatticeRequest {
            first_step: a.first,
            ..LatticeRequest::new(m, a.dims, a.steps, a.mode).with_coin(&a.coin)
        };
        Synthesized::Single(synthesize_lattice(&req).map_err(add_cap)?)
    } else {
        let req = SynthesisRequest::new(m, a.steps, a.mode).window(a.first, a.steps).with_coin(&a.coin);
        synthesize_1d(&req).map_err(add_cap)?
    };
    let out = if a.optimize { out.map(|c| peephole_optimize(&c)) } else { out };
    match out {
        Synthesized::Single(c) => emit(a.out.as_deref(), &c.to_json()),
        Synthesized::Alternating { odd, even } => {
            let Some(p) = &a.out else {
                return usage("alternating circuits need --out to name the A/B files");
            };
            emit(Some(&suffixed(p, "A")), &odd.to_json())?;
            emit(Some(&suffixed(p, "B")), &even.to_json())
        }
        Synthesized::Windowed(_) => unreachable!("synthesis returns one window"),
    }
}

fn coin_for(name: &str, rho: Option<f64>, k: usize) -> quditwalk::Result<Matrix> {
    match name {
        "lazy-g" => {
            if k != 3 {
                return Err(Error::Domain("lazy-g is a 3-state coin".into()));
            }
            coins::lazy_g(rho.ok_or_else(|| Error::Domain("lazy-g needs --rho".into()))?)
        }
        "none" => Ok(Matrix::identity(k)),
        "hadamard" if k > 2 && k.is_power_of_two() => {
            let mut m = coins::hadamard();
            while m.dim() < k {
                m = m.kron(&coins::hadamard());
            }
            Ok(m)
        }
        other => coins::named(other, k),
    }
}

fn parse_variant(s: &str) -> Result<WalkVariant, Failure> {
    match s {
        "line" => Ok(WalkVariant::Line),
        "lazy" => Ok(WalkVariant::Lazy),
        "lattice2d" => Ok(WalkVariant::Lattice2D),
        _ => {
            let dims = s
                .strip_prefix("lattice")
                .and_then(|r| r.strip_suffix('d'))
                .and_then(|n| n.parse::<usize>().ok());
            match dims {
                Some(n) if n >= 1 => Ok(WalkVariant::LatticeDdim(n)),
                _ => usage(format!("unknown walk {s:?}; use line, lazy, lattice2d or lattice<D>d")),
            }
        }
    }
}

fn write_distribution(a: &RunArgs, d: &Distribution, variant: &str, coin: &str, meta: BTreeMap<String, Value>) -> Result<(), Failure> {
    let text = match a.format {
        Format::Csv => d.to_csv(&meta)?,
        Format::Json => d.to_json(variant, coin, a.steps, &meta)?,
    };
    emit(a.out.as_deref(), &text)
}

fn run_oracle(a: &RunArgs, name: &str) -> Result<(), Failure> {
    let v = parse_variant(name)?;
    let coin = coin_for(&a.coin, a.rho, v.coin_dim())?;
    let mut spec = WalkSpec::new(v.clone(), coin, a.steps);
    if let CoinInit::Uniform = a.coin_init {
        spec = spec.with_uniform_coin();
    }
    if let Some(l) = a.uniform_extent {
        spec = spec.with_uniform_extent(l);
    }
    if let OrientationArg::Mirrored = a.orientation {
        spec = spec.with_orientation(Orientation::Mirrored);
    }
    let e = evolve_with(&spec, ExecPolicy::default())?;
    let mut meta = BTreeMap::new();
    meta.insert("coin_basis".into(), json!(v.coin_basis()));
    meta.insert("coin_init".into(), json!(format!("{:?}", a.coin_init).to_lowercase()));
    meta.insert("orientation".into(), json!(format!("{:?}", a.orientation).to_lowercase()));
    meta.insert("source".into(), json!("oracle"));
    meta.insert("steps".into(), json!(a.steps));
    write_distribution(a, &e.distribution, &v.name(), &a.coin, meta)
}

fn run_circuits(a: &RunArgs) -> Result<(), Failure> {
    let list = a.source.load()?;
    let mut walk = CircuitWalk::from_circuits(list)?;
    if let (Some(d), Some(n)) = (a.d, a.digits) {
        walk.mapping = mapping_for(d, n, walk.mapping.variant)?;
    }
    let first = walk.circuits.for_step(1);
    let coin = first.meta_str("coin").unwrap_or("hadamard").to_string();
    let mut meta = BTreeMap::new();
    meta.insert("source".into(), json!("circuit"));
    meta.insert("steps".into(), json!(a.steps));
    meta.insert("decoded".into(), json!(a.decode));
    let dist = if a.decode {
        let last = walk.simulate(a.steps, ExecPolicy::default())?.pop().expect("step 0 is always present");
        if last.unmapped > 1e-12 {
            return Err(Failure::Lib(Error::Verification(format!(
                "probability {:.3e} on codes outside the mapping",
                last.unmapped
            ))));
        }
        last.dist
    } else {
        let state = walk.final_state(a.steps, ExecPolicy::default())?;
        let wires: Vec<usize> = (walk.dims..state.spec().wires()).collect();
        let mut d = Distribution::new(wires.len());
        for (code, p) in measure_register(&state, &wires)? {
            d.add(code.into_iter().map(|c| c as i64).collect(), p);
        }
        d
    };
    let variant = if walk.dims == 1 { "line".to_string() } else { format!("lattice{}d", walk.dims) };
    write_distribution(a, &dist, &variant, &coin, meta)
}

fn cmd_run(a: &RunArgs) -> Result<(), Failure> {
    match (&a.oracle, a.source.is_empty()) {
        (Some(name), true) => run_oracle(a, name),
        (None, false) => run_circuits(a),
        _ => usage("give either --oracle or at least one --circuit/--golden"),
    }
}

fn cmd_compare(a: &CompareArgs) -> Result<(), Failure> {
    if a.source.is_empty() {
        return usage("give at least one --circuit or --golden");
    }
    let walk = CircuitWalk::from_circuits(a.source.load()?)?;
    let r = compare(&walk, a.steps, ExecPolicy::default())?;
    let mut text = String::from("step,tvd\n");
    for (k, t) in r.tvd.iter().enumerate() {
        text.push_str(&format!("{k},{t:e}\n"));
    }
    text.push_str(&format!("# max_tvd: {:e}\n# tolerance: {:e}\n", r.max_tvd(), r.tolerance));
    emit(a.out.as_deref(), &text)?;
    match r.first_failure() {
        None => Ok(()),
        Some(k) => Err(Failure::Lib(Error::Verification(format!(
            "step {k}: TVD {:.3e} exceeds {:.0e}",
            r.tvd[k], r.tolerance
        )))),
    }
}

fn cmd_resources(a: &ResourceArgs) -> Result<(), Failure> {
    if a.table {
        let mut s = String::from("d,n,max_steps\n");
        for row in resources::comparison_table(&a.d_list, 1..=a.n_max) {
            s.push_str(&format!("{},{},{}\n", row.d, row.n, row.max_steps));
        }
        return emit(a.out.as_deref(), &s);
    }
    let Some(d) = a.d else { return usage("--d is required unless --table is given") };
    let doc = match (a.steps, a.digits) {
        (Some(k), None) => {
            if k == 0 {
                return Err(Failure::Lib(Error::Domain("a walk needs at least one step".into())));
            }
            let (q, coins) = resources::qudits_for_steps(d, k, a.dims);
            json!({
                "d": d,
                "steps": k,
                "dims": a.dims,
                "position_qudits": q,
                "coin_wires": coins,
                "smallest_register": resources::min_qudits_for_steps(d, k),
            })
        }
        (None, Some(n)) => {
            let mut v = serde_json::to_value(resources::estimate_1d(d, n)).expect("estimate serializes");
            if a.dims > 1 {
                v["capacity_2d"] = json!(resources::capacity_2d(d, n));
            }
            v
        }
        _ => return usage("give exactly one of --steps or --digits"),
    };
    emit(a.out.as_deref(), &(serde_json::to_string_pretty(&doc).expect("json") + "\n"))
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Map(a) => cmd_map(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Run(a) => cmd_run(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Resources(a) => cmd_resources(a),
    }
}

#[cfg(feature = "parallel")]
fn set_threads(n: u32) -> Result<(), Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n as usize)
        .build_global()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))
}

#[cfg(not(feature = "parallel"))]
fn set_threads(_: u32) -> Result<(), Failure> {
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.threads {
        Some(n) => set_threads(n).and_then(|_| dispatch(&cli)),
        None => dispatch(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Domain(_) | Error::Range(_) | Error::Unsupported(_) | Error::NotInRange(_) => 2,
                Error::Verification(_) => 3,
                Error::Parse(_) | Error::Io(_) => 1,
            })
        }
    }
}
