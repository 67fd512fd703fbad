//! Runs a grid of constructions and collects one report.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Instant;

use cayley_nzflow::constructions::{construct, GammaSpec};
use cayley_nzflow::flow::verify;
use cayley_nzflow::pseudoforest::{certificate_for_partition, certificate_from_flow, flow_from_certificate};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub family: &'static str,
    pub params: BTreeMap<&'static str, u32>,
    /// `"ok"` or the construction error.
    pub construction: String,
    /// `"pass"` when the flow verifies and every report check passed.
    pub verification: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failed_checks: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spot_check: Option<bool>,
    /// Omitted in deterministic mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.verification == "pass" && self.spot_check != Some(false)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub cases: Vec<CaseReport>,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

pub struct Options {
    pub spot_checks: usize,
    pub jobs: usize,
    pub deterministic: bool,
}

/// Re-derives a certificate for the construction's own `U`/`W` split with
/// the generic matcher and checks that its flow verifies.
fn spot_check(spec: &GammaSpec) -> bool {
    let Ok(c) = construct(spec) else { return false };
    let graph = c.graph();
    let split = match &c.certificate {
        Some(cert) => cert.clone(),
        None => match certificate_from_flow(graph, &c.flow) {
            Ok(cert) => cert,
            Err(_) => return false,
        },
    };
    match certificate_for_partition(graph, &split.u, &split.w) {
        Ok(Some(cert)) => {
            cert.validate(graph).is_ok()
                && flow_from_certificate(graph, &cert).is_ok_and(|f| verify(graph, &f).is_ok_and(|v| v.ok()))
        }
        _ => false,
    }
}

fn run_case(spec: &GammaSpec, spot: bool, deterministic: bool) -> CaseReport {
    let start = Instant::now();
    let result = construct(spec);
    let mut case = CaseReport {
        family: spec.name(),
        params: spec.params().into_iter().collect(),
        construction: "ok".into(),
        verification: "fail",
        failed_checks: Vec::new(),
        notes: Vec::new(),
        spot_check: None,
        wall_ms: None,
    };
    match result {
        Ok(c) => {
            let verified = verify(c.graph(), &c.flow).is_ok_and(|v| v.ok());
            case.failed_checks = c.report.failures().map(str::to_string).collect();
            case.notes = c.report.notes.clone();
            if verified && case.failed_checks.is_empty() {
                case.verification = "pass";
            }
        }
        Err(e) => case.construction = e.to_string(),
    }
    if spot {
        case.spot_check = Some(spot_check(spec));
    }
    if !deterministic {
        case.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    case
}

/// Spot-checked cases are spread evenly over the sorted grid.
fn spot_indices(total: usize, count: usize) -> Vec<bool> {
    let mut marks = vec![false; total];
    let count = count.min(total);
    for i in 0..count {
        marks[i * total / count] = true;
    }
    marks
}

pub fn run(specs: &[GammaSpec], options: &Options) -> CampaignReport {
    let marks = spot_indices(specs.len(), options.spot_checks);
    let slots: Mutex<Vec<Option<CaseReport>>> = Mutex::new(vec![None; specs.len()]);
    let next = AtomicUsize::new(0);
    thread::scope(|scope| {
        for _ in 0..options.jobs.max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= specs.len() {
                    break;
                }
                let case = run_case(&specs[i], marks[i], options.deterministic);
                slots.lock().expect("no panics while holding the lock")[i] = Some(case);
            });
        }
    });
    let cases: Vec<CaseReport> = slots.into_inner().expect("threads joined").into_iter().map(|c| c.expect("every case ran")).collect();
    let passed = cases.iter().filter(|c| c.passed()).count();
    CampaignReport { total: cases.len(), passed, failed: cases.len() - passed, cases }
}
