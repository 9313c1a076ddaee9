use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ffzne::circuit::{compute_latency, emit_qasm, parse_qasm};
use ffzne::cutting::{build_subcircuits, find_cut};
use ffzne::experiment::{reports_to_csv, reports_to_json, run_experiment, ExperimentConfig, ExperimentReport, Method, SweepConfig};
use ffzne::sim::{expectation, Backend, Sampling, Simulator};
use ffzne::{compute_esp, Benchmark, BenchmarkFamily, Circuit, Distribution, PauliString};

/// Noise-aware simulation and error mitigation for small circuits.
#[derive(Parser)]
#[command(name = "ffzne", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one circuit under noise and print its distribution as JSON.
    Simulate(SimulateArgs),
    /// Run the configured mitigation methods on one benchmark.
    Mitigate(RunArgs),
    /// Find a wire-cut plan and optionally write every variant as QASM.
    Cut(CutArgs),
    /// Print a benchmark circuit as OpenQASM 2.0.
    Bench(BenchArgs),
    /// Run a set of benchmarks under shared settings.
    Sweep(RunArgs),
    /// Render a saved JSON report as CSV or a text table.
    Report(ReportArgs),
}

#[derive(Args, Clone, Default)]
struct BenchmarkArgs {
    #[arg(long)]
    family: Option<BenchmarkFamily>,
    #[arg(long)]
    qubits: Option<usize>,
    /// HS time steps.
    #[arg(long)]
    steps: Option<usize>,
    /// VQE layers.
    #[arg(long)]
    layers: Option<usize>,
}

impl BenchmarkArgs {
    fn is_set(&self) -> bool {
        self.family.is_some() || self.qubits.is_some() || self.steps.is_some() || self.layers.is_some()
    }

    /// Applies the given fields on top of `base`. Switching family drops the
    /// parameters that belong to the old one.
    fn apply(&self, base: Benchmark) -> Benchmark {
        let mut b = base;
        if let Some(f) = self.family {
            if f != b.family {
                b = Benchmark { family: f, qubits: b.qubits, steps: None, layers: None };
                match f {
                    BenchmarkFamily::Hs => b.steps = Some(1),
                    BenchmarkFamily::Vqe => b.layers = Some(1),
                    _ => {}
                }
            }
        }
        if let Some(n) = self.qubits {
            b.qubits = n;
        }
        if self.steps.is_some() {
            b.steps = self.steps;
        }
        if self.layers.is_some() {
            b.layers = self.layers;
        }
        b
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseArg {
    Depol,
    Thermal,
    Both,
    Off,
}

/// `all` or a positive count.
#[derive(Clone, Copy)]
struct TopK(Option<usize>);

fn parse_top_k(s: &str) -> std::result::Result<TopK, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(TopK(None));
    }
    s.parse::<usize>().map(|k| TopK(Some(k))).map_err(|e| e.to_string())
}

#[derive(Args, Clone, Default)]
struct Overrides {
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sample `shots` outcomes instead of using exact probabilities.
    #[arg(long)]
    sample: bool,
    #[arg(long, value_enum)]
    noise: Option<NoiseArg>,
    /// Disable readout errors.
    #[arg(long)]
    no_readout: bool,
    /// Method to run; repeat or comma-separate for several.
    #[arg(long = "method", value_delimiter = ',')]
    methods: Vec<Method>,
    /// I/Z string, qubit 0 first.
    #[arg(long)]
    observable: Option<String>,
    /// Device model JSON.
    #[arg(long)]
    device: Option<PathBuf>,
    #[arg(long, value_parser = parse_top_k)]
    top_k: Option<TopK>,
    #[arg(long)]
    esp_threshold: Option<f64>,
    #[arg(long)]
    max_cuts: Option<usize>,
}

impl Overrides {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(s) = self.shots {
            cfg.shots = s;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.sample {
            cfg.sample = true;
        }
        if let Some(n) = self.noise {
            let (depol, thermal) = match n {
                NoiseArg::Depol => (true, false),
                NoiseArg::Thermal => (false, true),
                NoiseArg::Both => (true, true),
                NoiseArg::Off => (false, false),
            };
            cfg.noise.depolarizing_enabled = depol;
            cfg.noise.thermal_enabled = thermal;
            if matches!(n, NoiseArg::Off) {
                cfg.noise.readout_enabled = false;
            }
        }
        if self.no_readout {
            cfg.noise.readout_enabled = false;
        }
        if !self.methods.is_empty() {
            cfg.methods = self.methods.clone();
        }
        if self.observable.is_some() {
            cfg.observable = self.observable.clone();
        }
        if self.device.is_some() {
            cfg.device = self.device.clone();
        }
        if let Some(k) = self.top_k {
            cfg.mitigation.top_k = k.0;
        }
        if let Some(t) = self.esp_threshold {
            cfg.mitigation.esp_threshold = t;
        }
        if let Some(m) = self.max_cuts {
            cfg.mitigation.max_cuts = m;
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// JSON config: an experiment for `mitigate`, a sweep for `sweep`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    benchmark: BenchmarkArgs,
    #[command(flatten)]
    overrides: Overrides,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the full JSON report, distributions included.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Experiment config supplying the benchmark, device and noise.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Simulate this OpenQASM file instead of a benchmark.
    #[arg(long, conflicts_with_all = ["family", "qubits", "steps", "layers"])]
    qasm: Option<PathBuf>,
    #[command(flatten)]
    benchmark: BenchmarkArgs,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct CutArgs {
    #[arg(long, conflicts_with_all = ["family", "qubits", "steps", "layers"])]
    qasm: Option<PathBuf>,
    #[command(flatten)]
    benchmark: BenchmarkArgs,
    #[arg(long, default_value_t = 2)]
    max_cuts: usize,
    /// Directory for the variant circuits and the plan.
    #[arg(long)]
    emit_dir: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    benchmark: BenchmarkArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Table,
}

#[derive(Args)]
struct ReportArgs {
    /// JSON written by `mitigate --json` or `sweep --json`.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: ReportFormat,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| ffzne::Error::Io(format!("{}: {e}", path.display())).into())
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| ffzne::Error::Io(format!("{}: {e}", path.display())).into())
}

/// Writes to stdout; a closed pipe on the reading end is not an error.
fn stdout(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(ffzne::Error::Io(e.to_string()).into()),
        _ => Ok(()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => stdout(text),
    }
}

fn experiment_config(config: Option<&Path>, bench: &BenchmarkArgs, ov: &Overrides) -> Result<ExperimentConfig> {
    let mut cfg = match config {
        Some(p) => ExperimentConfig::from_json(&read(p)?)?,
        None => ExperimentConfig::default(),
    };
    cfg.benchmark = bench.apply(cfg.benchmark);
    ov.apply(&mut cfg);
    Ok(cfg)
}

fn load_circuit(qasm: Option<&Path>, bench: &BenchmarkArgs) -> Result<(String, Circuit)> {
    match qasm {
        Some(p) => {
            let c = parse_qasm(&read(p)?)?;
            let c = if c.has_measurements() { c } else { c.measure_all()? };
            Ok((p.display().to_string(), c))
        }
        None => {
            if bench.family.is_none() || bench.qubits.is_none() {
                bail!(ffzne::Error::InvalidConfig("give --qasm or both --family and --qubits".into()));
            }
            let b = bench.apply(Benchmark::ghz(2));
            Ok((b.label(), b.circuit()?))
        }
    }
}

fn top_states_json(d: &Distribution, k: usize) -> serde_json::Value {
    d.top_states(k)
        .into_iter()
        .map(|(i, p)| json!({ "state": d.bitstring(i), "probability": p }))
        .collect()
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let cfg = experiment_config(args.config.as_deref(), &args.benchmark, &args.overrides)?;
    cfg.noise.validate()?;
    if cfg.shots == 0 {
        bail!(ffzne::Error::InvalidConfig("shots must be at least 1".into()));
    }
    let (name, circuit) = match &args.qasm {
        Some(p) => load_circuit(Some(p), &args.benchmark)?,
        None => (cfg.benchmark.label(), cfg.benchmark.circuit()?),
    };
    let device = cfg.load_device()?;
    let backend = Backend {
        device: &device,
        noise: cfg.noise,
        simulator: Simulator::default(),
        sampling: cfg.sample.then_some(Sampling { shots: cfg.shots, seed: cfg.seed }),
    };
    let dist = backend.execute(&circuit, 0)?;
    let value = match &cfg.observable {
        Some(o) => {
            let o: PauliString = o.parse()?;
            if o.len() != circuit.width() {
                bail!(ffzne::Error::InvalidConfig(format!("observable `{o}` does not have {} qubits", circuit.width())));
            }
            Some(expectation(&dist, &o)?)
        }
        None => None,
    };
    let out = json!({
        "circuit": name,
        "qubits": circuit.width(),
        "esp": compute_esp(&circuit, &backend.effective_device())?.r,
        "latency_ns": compute_latency(&circuit, &device)? * 1e9,
        "noise": cfg.noise,
        "sampling": backend.sampling,
        "observable": cfg.observable,
        "expectation": value,
        "top_states": top_states_json(&dist, 16),
        "distribution": dist.probs(),
    });
    stdout(&format!("{}\n", serde_json::to_string_pretty(&out)?))
}

fn finish(reports: &[ExperimentReport], args: &RunArgs) -> Result<()> {
    if let Some(p) = &args.json {
        write(p, &reports_to_json(reports))?;
    }
    emit(args.out.as_deref(), &reports_to_csv(reports)?)
}

fn mitigate(args: &RunArgs) -> Result<()> {
    let cfg = experiment_config(args.config.as_deref(), &args.benchmark, &args.overrides)?;
    let report = run_experiment(&cfg)?;
    finish(&[report], args)
}

fn sweep(args: &RunArgs) -> Result<()> {
    if args.benchmark.is_set() {
        bail!(ffzne::Error::InvalidConfig("sweep takes its benchmarks from --config".into()));
    }
    let mut sweep = match &args.config {
        Some(p) => SweepConfig::from_json(&read(p)?)?,
        None => SweepConfig::default(),
    };
    args.overrides.apply(&mut sweep.settings);
    let reports = ffzne::experiment::run_sweep(&sweep)?;
    finish(&reports, args)
}

fn cut(args: &CutArgs) -> Result<()> {
    let (name, circuit) = load_circuit(args.qasm.as_deref(), &args.benchmark)?;
    let plan = find_cut(&circuit, args.max_cuts)?;
    let subs = build_subcircuits(&circuit, &plan)?;
    let mut upstream = Vec::new();
    let mut downstream = Vec::new();
    for (i, v) in subs.upstream.iter().enumerate() {
        let file = format!("upstream_{i}.qasm");
        if let Some(dir) = &args.emit_dir {
            write(&dir.join(&file), &emit_qasm(&v.circuit))?;
        }
        upstream.push(json!({ "file": file, "bases": v.bases, "gates": v.circuit.len() }));
    }
    for (i, v) in subs.downstream.iter().enumerate() {
        let file = format!("downstream_{i}.qasm");
        if let Some(dir) = &args.emit_dir {
            write(&dir.join(&file), &emit_qasm(&v.circuit))?;
        }
        downstream.push(json!({ "file": file, "preps": v.preps, "gates": v.circuit.len() }));
    }
    let out = json!({
        "circuit": name,
        "plan": plan,
        "upstream": upstream,
        "downstream": downstream,
    });
    let text = serde_json::to_string_pretty(&out)?;
    if let Some(dir) = &args.emit_dir {
        write(&dir.join("plan.json"), &text)?;
    }
    stdout(&format!("{text}\n"))
}

fn bench(args: &BenchArgs) -> Result<()> {
    let (_, circuit) = load_circuit(None, &args.benchmark)?;
    emit(args.out.as_deref(), &emit_qasm(&circuit))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
}

fn report(args: &ReportArgs) -> Result<()> {
    let text = read(&args.input)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(ffzne::Error::from)?;
    let reports: Vec<ExperimentReport> = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|r| vec![r])
    }
    .map_err(|e| ffzne::Error::InvalidConfig(format!("{}: not a report: {e}", args.input.display())))?;
    let text = match args.format {
        ReportFormat::Csv => reports_to_csv(&reports)?,
        ReportFormat::Table => table(&reports),
    };
    stdout(&text)
}

fn table(reports: &[ExperimentReport]) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = writeln!(s, "{:<10} {:>6} {:>8} {:<18} {:>9} {:>9} {:>9}", "benchmark", "qubits", "esp", "method", "abe", "abr", "fidelity");
    for r in reports {
        for m in &r.methods {
            let _ = match &m.error {
                Some(e) => writeln!(s, "{:<10} {:>6} {:>8.4} {:<18} error: {}", r.benchmark, r.qubits, r.esp, m.method.name(), e.kind),
                None => writeln!(
                    s,
                    "{:<10} {:>6} {:>8.4} {:<18} {:>9} {:>9} {:>9}",
                    r.benchmark,
                    r.qubits,
                    r.esp,
                    m.method.name(),
                    fmt_opt(m.abe),
                    fmt_opt(m.abr),
                    fmt_opt(m.fidelity)
                ),
            };
        }
    }
    s
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Mitigate(a) => mitigate(a),
        Command::Cut(a) => cut(a),
        Command::Bench(a) => bench(a),
        Command::Sweep(a) => sweep(a),
        Command::Report(a) => report(a),
    }
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", error_json("usage", e.render().to_string().trim()));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = e.downcast_ref::<ffzne::Error>().map_or("internal", |e| e.kind());
            eprintln!("{}", error_json(kind, &format!("{e:#}")));
            ExitCode::FAILURE
        }
    }
}
