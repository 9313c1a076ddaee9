//! Experiment orchestration: run a benchmark under noise, apply the requested
//! mitigation methods and score each against the noiseless result.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{compute_latency, Benchmark, BenchmarkFamily, Circuit, PauliString};
use crate::cutting::{cutqc_cm_with, cutqc_mc_with, cutqc_unmitigated_with};
use crate::device::DeviceModel;
use crate::error::{Error, Result};
use crate::metrics::{abe, abr, hellinger_fidelity};
use crate::mitigation::{
    dzne_with, plan_route, run_pipeline, rzne_state, slzne, MitigationConfig, RoutePlan, DEFAULT_SCALE_FACTORS,
};
use crate::sim::{expectation, simulate, Backend, Distribution, NoiseConfig, Sampling, Simulator};

/// States listed per method in reports.
pub const REPORT_TOP_STATES: usize = 16;

pub const DEFAULT_SHOTS: u64 = 32768;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Noisy,
    Rzne,
    RzneTopk,
    Slzne,
    SlzneTopk,
    Pipeline,
    Dzne,
    CutqcUnmitigated,
    CutqcCm,
    CutqcMc,
}

impl Method {
    pub const ALL: [Method; 10] = [
        Method::Noisy,
        Method::Rzne,
        Method::RzneTopk,
        Method::Slzne,
        Method::SlzneTopk,
        Method::Pipeline,
        Method::Dzne,
        Method::CutqcUnmitigated,
        Method::CutqcCm,
        Method::CutqcMc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Noisy => "noisy",
            Method::Rzne => "rzne",
            Method::RzneTopk => "rzne_topk",
            Method::Slzne => "slzne",
            Method::SlzneTopk => "slzne_topk",
            Method::Pipeline => "pipeline",
            Method::Dzne => "dzne",
            Method::CutqcUnmitigated => "cutqc_unmitigated",
            Method::CutqcCm => "cutqc_cm",
            Method::CutqcMc => "cutqc_mc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub benchmark: Benchmark,
    /// Device model JSON; the bundled model when absent.
    pub device: Option<PathBuf>,
    pub noise: NoiseConfig,
    pub mitigation: MitigationConfig,
    pub shots: u64,
    /// Sample `shots` outcomes from every simulated distribution instead of
    /// using exact probabilities.
    pub sample: bool,
    pub seed: u64,
    /// I/Z Pauli string, qubit 0 first. Defaults to all-Z parity except for
    /// GHZ, which is scored by fidelity only.
    pub observable: Option<String>,
    pub methods: Vec<Method>,
    /// Odd noise scale factors for the folding baseline.
    pub scale_factors: Vec<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            benchmark: Benchmark::ghz(3),
            device: None,
            noise: NoiseConfig::default(),
            mitigation: MitigationConfig::default(),
            shots: DEFAULT_SHOTS,
            sample: false,
            seed: 0,
            observable: None,
            methods: Method::ALL.to_vec(),
            scale_factors: DEFAULT_SCALE_FACTORS.to_vec(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    /// The observable to score, if any.
    pub fn resolved_observable(&self) -> Result<Option<PauliString>> {
        let n = self.benchmark.qubits;
        let obs = match &self.observable {
            Some(s) => s.parse::<PauliString>()?,
            None => match default_observable(&self.benchmark) {
                Some(o) => o,
                None => return Ok(None),
            },
        };
        if obs.len() != n {
            return Err(Error::InvalidConfig(format!("observable `{obs}` does not have {n} qubits")));
        }
        if !obs.is_diagonal() {
            return Err(Error::NonDiagonalObservable(obs.to_string()));
        }
        Ok(Some(obs))
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::InvalidConfig("shots must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("no methods requested".into()));
        }
        self.noise.validate()?;
        self.mitigation.validate()?;
        self.resolved_observable()?;
        self.benchmark.circuit()?;
        Ok(())
    }

    pub fn load_device(&self) -> Result<DeviceModel> {
        match &self.device {
            None => Ok(DeviceModel::bundled()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                DeviceModel::from_json(&text)
            }
        }
    }

    fn sampling(&self) -> Option<Sampling> {
        self.sample.then_some(Sampling {
            shots: self.shots,
            seed: self.seed,
        })
    }
}

/// Scoring observable used when a config names none.
pub fn default_observable(b: &Benchmark) -> Option<PauliString> {
    match b.family {
        BenchmarkFamily::Ghz => None,
        _ => Some(PauliString::all_z(b.qubits)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateProbability {
    pub state: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodError {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for MethodError {
    fn from(e: &Error) -> Self {
        MethodError {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: Method,
    pub expectation: Option<f64>,
    pub abe: Option<f64>,
    pub abr: Option<f64>,
    pub fidelity: Option<f64>,
    /// Free-form detail such as the pipeline route or the reliability used.
    pub detail: Option<String>,
    pub top_states: Vec<StateProbability>,
    pub distribution: Option<Vec<f64>>,
    pub error: Option<MethodError>,
}

impl MethodResult {
    fn failed(method: Method, e: &Error) -> Self {
        MethodResult {
            method,
            expectation: None,
            abe: None,
            abr: None,
            fidelity: None,
            detail: None,
            top_states: Vec::new(),
            distribution: None,
            error: Some(e.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub benchmark: String,
    pub family: BenchmarkFamily,
    pub qubits: usize,
    pub seed: u64,
    /// ESP under the calibration the enabled noise channels realise.
    pub esp: f64,
    pub latency_ns: f64,
    pub observable: Option<String>,
    pub ideal_expectation: Option<f64>,
    pub ideal_top_states: Vec<StateProbability>,
    pub methods: Vec<MethodResult>,
}

impl ExperimentReport {
    pub fn method(&self, m: Method) -> Option<&MethodResult> {
        self.methods.iter().find(|r| r.method == m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

fn top_states(d: &Distribution) -> Vec<StateProbability> {
    d.top_states(REPORT_TOP_STATES)
        .into_iter()
        .map(|(i, p)| StateProbability {
            state: d.bitstring(i),
            probability: p,
        })
        .collect()
}

/// Outcome of one method before scoring.
enum Produced {
    Dist(Distribution, Option<String>),
    Value(f64, Option<String>),
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    circuit: Circuit,
    backend: Backend<'a>,
    route: RoutePlan,
    noisy: Distribution,
    obs: Option<PauliString>,
}

impl Context<'_> {
    /// A backend whose sampling seeds do not collide with other methods.
    fn method_backend(&self, m: Method) -> Backend<'_> {
        let mut b = self.backend;
        if let Some(s) = &mut b.sampling {
            s.seed = s.seed.wrapping_add((m as u64 + 1) << 32);
        }
        b
    }

    fn t1(&self) -> Result<f64> {
        self.route
            .t1_min
            .ok_or_else(|| Error::InvalidConfig("circuit touches no qubit; T1 undefined".into()))
    }

    fn produce(&self, m: Method) -> Result<Produced> {
        let mc = &self.cfg.mitigation;
        let esp = self.route.esp;
        let dist = |d| Ok(Produced::Dist(d, None));
        match m {
            Method::Noisy => dist(self.noisy.clone()),
            Method::Rzne => dist(rzne_state(&self.noisy, esp, None)?),
            Method::RzneTopk => dist(rzne_state(&self.noisy, esp, mc.top_k)?),
            Method::Slzne => dist(slzne(&self.noisy, self.route.latency, self.t1()?, None)?),
            Method::SlzneTopk => dist(slzne(&self.noisy, self.route.latency, self.t1()?, mc.top_k)?),
            Method::Pipeline => {
                let out = run_pipeline(&self.method_backend(m), &self.circuit, mc)?;
                let mut detail = serde_json::to_value(out.route).expect("route").as_str().unwrap_or("").to_string();
                if let Some(e) = out.cut_error {
                    detail.push_str(&format!(" (cut abandoned: {e})"));
                }
                Ok(Produced::Dist(out.distribution, Some(detail)))
            }
            Method::Dzne => {
                let obs = self
                    .obs
                    .as_ref()
                    .ok_or_else(|| Error::InvalidConfig("dzne needs an observable".into()))?;
                let r = dzne_with(&self.method_backend(m), &self.circuit, &self.cfg.scale_factors, obs)?;
                Ok(Produced::Value(r.intercept, None))
            }
            Method::CutqcUnmitigated | Method::CutqcCm | Method::CutqcMc => {
                let backend = self.method_backend(m);
                let out = match m {
                    Method::CutqcUnmitigated => cutqc_unmitigated_with(&backend, &self.circuit, mc)?,
                    Method::CutqcCm => cutqc_cm_with(&backend, &self.circuit, mc)?,
                    _ => cutqc_mc_with(&backend, &self.circuit, mc)?,
                };
                let cuts: Vec<String> = out.plan.cuts.iter().map(|w| format!("q{}@{}", w.qubit, w.after_gate)).collect();
                let mut detail = format!("cuts [{}]", cuts.join(" "));
                if let Some(r) = out.combined_reliability {
                    detail.push_str(&format!(" r {}", r.r));
                }
                Ok(Produced::Dist(out.distribution, Some(detail)))
            }
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let device = cfg.load_device()?;
    run_experiment_on(cfg, &device)
}

/// Runs `cfg` against an already-loaded device model (`cfg.device` is
/// ignored).
pub fn run_experiment_on(cfg: &ExperimentConfig, device: &DeviceModel) -> Result<ExperimentReport> {
    cfg.validate()?;
    let circuit = cfg.benchmark.circuit()?;
    let obs = cfg.resolved_observable()?;
    let ideal = simulate(&circuit, device, &NoiseConfig::noiseless())?;
    let backend = Backend {
        device,
        noise: cfg.noise,
        simulator: Simulator::default(),
        sampling: cfg.sampling(),
    };
    let route = plan_route(&circuit, device, &cfg.noise, &cfg.mitigation)?;
    let noisy = backend.execute(&circuit, 0)?;
    let ideal_e = obs.as_ref().map(|o| expectation(&ideal, o)).transpose()?;
    let noisy_e = obs.as_ref().map(|o| expectation(&noisy, o)).transpose()?;

    let ctx = Context {
        cfg,
        circuit,
        backend,
        route,
        noisy,
        obs,
    };
    let mut methods = Vec::with_capacity(cfg.methods.len());
    for &m in &cfg.methods {
        let result = ctx.produce(m).and_then(|p| {
            let (dist, value, detail) = match p {
                Produced::Dist(d, detail) => {
                    let v = ctx.obs.as_ref().map(|o| expectation(&d, o)).transpose()?;
                    (Some(d), v, detail)
                }
                Produced::Value(v, detail) => (None, Some(v), detail),
            };
            let (abe_v, abr_v) = match (ideal_e, noisy_e, value) {
                (Some(i), Some(n), Some(v)) => {
                    let ratio = if m == Method::Noisy { Some(1.0) } else { abr(i, v, n).ok() };
                    (Some(abe(i, v)), ratio)
                }
                _ => (None, None),
            };
            Ok(MethodResult {
                method: m,
                expectation: value,
                abe: abe_v,
                abr: abr_v,
                fidelity: dist.as_ref().map(|d| hellinger_fidelity(&ideal, d)).transpose()?,
                detail,
                top_states: dist.as_ref().map(top_states).unwrap_or_default(),
                distribution: dist.map(Distribution::into_probs),
                error: None,
            })
        });
        methods.push(result.unwrap_or_else(|e| MethodResult::failed(m, &e)));
    }

    Ok(ExperimentReport {
        benchmark: cfg.benchmark.label(),
        family: cfg.benchmark.family,
        qubits: cfg.benchmark.qubits,
        seed: cfg.seed,
        esp: route.esp.r,
        latency_ns: compute_latency(&ctx.circuit, device)? * 1e9,
        observable: ctx.obs.as_ref().map(|o| o.to_string()),
        ideal_expectation: ideal_e,
        ideal_top_states: top_states(&ideal),
        methods,
    })
}

/// A set of benchmarks run under shared settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub benchmarks: Vec<Benchmark>,
    /// Settings applied to every benchmark; its `benchmark` field is ignored.
    pub settings: ExperimentConfig,
}

impl Default for SweepConfig {
    /// Three sizes per family between 3 and 8 qubits, spanning a wide ESP
    /// range, under depolarizing noise only.
    fn default() -> Self {
        SweepConfig {
            benchmarks: vec![
                Benchmark::ghz(3),
                Benchmark::ghz(5),
                Benchmark::ghz(8),
                Benchmark::hs(4, 1),
                Benchmark::hs(6, 1),
                Benchmark::hs(8, 2),
                Benchmark::vqe(3, 1),
                Benchmark::vqe(5, 2),
                Benchmark::vqe(8, 2),
                // The ring's all-Z parity vanishes at odd widths.
                Benchmark::qaoa(4),
                Benchmark::qaoa(6),
                Benchmark::qaoa(8),
            ],
            settings: ExperimentConfig {
                noise: NoiseConfig::depolarizing_only(),
                ..ExperimentConfig::default()
            },
        }
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn experiments(&self) -> Vec<ExperimentConfig> {
        self.benchmarks
            .iter()
            .map(|&b| ExperimentConfig {
                benchmark: b,
                ..self.settings.clone()
            })
            .collect()
    }
}

/// Runs every row in parallel; reports keep the configured order.
pub fn run_sweep(sweep: &SweepConfig) -> Result<Vec<ExperimentReport>> {
    let device = sweep.settings.load_device()?;
    let rows = sweep.experiments();
    for row in &rows {
        row.validate()?;
    }
    rows.par_iter().map(|cfg| run_experiment_on(cfg, &device)).collect()
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    benchmark: &'a str,
    qubits: usize,
    esp: f64,
    latency_ns: f64,
    method: Method,
    expectation: Option<f64>,
    abe: Option<f64>,
    abr: Option<f64>,
    fidelity: Option<f64>,
    seed: u64,
}

/// CSV with one row per successful method; failed methods appear only in the
/// JSON report.
pub fn reports_to_csv(reports: &[ExperimentReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        for m in r.methods.iter().filter(|m| m.error.is_none()) {
            w.serialize(CsvRow {
                benchmark: &r.benchmark,
                qubits: r.qubits,
                esp: r.esp,
                latency_ns: r.latency_ns,
                method: m.method,
                expectation: m.expectation,
                abe: m.abe,
                abr: m.abr,
                fidelity: m.fidelity,
                seed: r.seed,
            })
            .map_err(|e| Error::Io(e.to_string()))?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn reports_to_json(reports: &[ExperimentReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialise")
}
