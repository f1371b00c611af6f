//! Job runner behind the `homalg` binary: parses problem files, runs
//! computations or checks, and assembles a JSON report with a determinism hash.

pub mod compute;
pub mod input;
pub mod verify;

use std::fmt;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use homalg::derived::{Status, VerificationReport};
use homalg::exactla::FieldSpec;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError(pub String);

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

macro_rules! from_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError(e.to_string())
            }
        }
    )*};
}

from_error!(
    homalg::derived::DerivedError,
    homalg::groupcoh::GroupError,
    homalg::cechposet::CechError,
    homalg::liealg::LieError,
    homalg::exactla::FieldError
);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Compute,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    Group,
    Cech,
    Lie,
    Engine,
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::Group => "group",
            Theory::Cech => "cech",
            Theory::Lie => "lie",
            Theory::Engine => "engine",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Job {
    pub task: Task,
    pub theory: Theory,
    pub inputs: Vec<PathBuf>,
    pub window: usize,
    pub field: Option<FieldSpec>,
    pub ring: bool,
    pub check: Option<String>,
}

/// Wall-clock time per named stage.
pub struct Timer {
    start: Instant,
    last: Instant,
    stages: Vec<(String, Duration)>,
}

impl Timer {
    pub fn new() -> Self {
        let now = Instant::now();
        Timer { start: now, last: now, stages: Vec::new() }
    }

    pub fn stage(&mut self, name: &str) {
        let now = Instant::now();
        self.stages.push((name.to_string(), now - self.last));
        self.last = now;
    }

    fn to_json(&self) -> Value {
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        let stages: Vec<Value> = self.stages.iter().map(|(n, d)| json!({"stage": n, "ms": ms(*d)})).collect();
        json!({"total_ms": ms(self.start.elapsed()), "stages": stages})
    }
}

impl Default for Timer {
    fn default() -> Self {
        Self::new()
    }
}

pub struct Report {
    /// Everything except timings, sources and the hash itself.
    pub body: Value,
    pub hash: String,
    pub timings: Value,
    pub sources: Vec<String>,
    pub status: Option<Status>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            None | Some(Status::Pass) => EXIT_PASS,
            Some(Status::Fail) => EXIT_REFUTED,
            Some(Status::HypothesisFailed) => EXIT_HYPOTHESIS,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.body.clone();
        v["determinism_hash"] = Value::String(self.hash.clone());
        v["timings"] = self.timings.clone();
        v["sources"] = json!(self.sources);
        v
    }

    pub fn to_text(&self) -> String {
        let b = &self.body;
        let mut out = format!("{} {} over {}\n", b["job"]["task"].as_str().unwrap_or(""), b["job"]["theory"].as_str().unwrap_or(""), b["job"]["problem"]["field"].as_str().unwrap_or(""));
        if let Some(dims) = b["results"]["dims"].as_array() {
            for (n, d) in dims.iter().enumerate() {
                out += &format!("  H^{n}: {d}\n");
            }
        }
        if let Some(ring) = b["results"]["ring"].as_array() {
            for e in ring {
                let prod: Vec<&str> = e["product"].as_array().into_iter().flatten().filter_map(|c| c.as_str()).collect();
                out += &format!("  [{},{}] * [{},{}] = ({})\n", e["left"][0], e["left"][1], e["right"][0], e["right"][1], prod.join(", "));
            }
        }
        if let Some(reps) = b["verification"]["reports"].as_array() {
            for r in reps {
                let instance = r["instance"].as_str().map(|i| format!(" [{i}]")).unwrap_or_default();
                out += &format!("  {}{instance}: {} ({} checks)\n", r["theorem"].as_str().unwrap_or(""), r["status"].as_str().unwrap_or(""), r["checks"]);
                for h in r["hypotheses"].as_array().into_iter().flatten().filter(|h| h["holds"] == false) {
                    out += &format!("    hypothesis fails: {}\n", h["name"].as_str().unwrap_or(""));
                }
                if let Some(c) = r.get("counterexample") {
                    out += &format!("    counterexample: {c}\n");
                }
            }
            out += &format!("  status: {}\n", b["verification"]["status"].as_str().unwrap_or(""));
        }
        out += &format!("  hash: {}\n", self.hash);
        out
    }
}

/// sha256 of the compact serialization; object keys are sorted by `serde_json`.
pub fn determinism_hash(body: &Value) -> String {
    let bytes = serde_json::to_vec(body).expect("report serializes");
    let digest = Sha256::digest(&bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn run(job: &Job) -> Result<Report, CliError> {
    let mut timer = Timer::new();
    if job.inputs.is_empty() {
        return Err(CliError::input("no --input given"));
    }
    let doc = input::load_documents(&job.inputs)?;
    let problem = input::problem(job.theory, &doc, job.field)?;
    timer.stage("parse");
    let check = match job.task {
        Task::Verify => Some(job.check.clone().unwrap_or_else(|| verify::default_check(job.theory).to_string())),
        Task::Compute => None,
    };
    let mut body = json!({
        "tool": {"name": "homalg", "version": env!("CARGO_PKG_VERSION")},
        "job": {
            "task": job.task,
            "theory": job.theory,
            "window": job.window,
            "ring": job.ring,
            "check": check,
            "problem": input::describe(&problem),
        },
    });
    let mut status = None;
    match job.task {
        Task::Compute => {
            body["results"] = compute::run_compute(&problem, job.window, job.ring, &mut timer)?;
        }
        Task::Verify => {
            let reports = verify::run_verify(&problem, check.as_deref().expect("verify has a check"), job.window, &mut timer)?;
            let s = verify::overall(&reports);
            body["verification"] = json!({"status": s, "reports": reports});
            status = Some(s);
        }
    }
    Ok(Report {
        hash: determinism_hash(&body),
        body,
        timings: timer.to_json(),
        sources: job.inputs.iter().map(|p| p.display().to_string()).collect(),
        status,
    })
}

pub fn reports_of(r: &Report) -> Vec<VerificationReport> {
    serde_json::from_value(r.body["verification"]["reports"].clone()).unwrap_or_default()
}
