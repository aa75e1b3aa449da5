//! Monte Carlo campaigns: sample states, evaluate every bound, aggregate slacks.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampler::{sample_state, substream, Ensemble};
use super::structural;
use crate::bloch::gellmann_basis;
use crate::bounds::{sisa_bound, DimPair};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::extremal::boundary_state_for;
use crate::report::{evaluate_point, EntropyPoint, VIOLATION_TOL};

/// Slack below this aborts the campaign: roundoff cannot explain it.
pub const ABORT_TOL: f64 = 1e-6;
pub const SAMPLES_FILE: &str = "samples.jsonl";
pub const SUMMARY_FILE: &str = "summary.json";
/// Samples evaluated in parallel before their records are written in order.
const CHUNK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// `[d_A, d_B]`, or `[d_A, d_B, d_C]` for tripartite campaigns.
    pub dims: Vec<usize>,
    pub ensemble: Ensemble,
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the rayon default.
    pub workers: usize,
    /// Boundary states for random targets appended after the ensemble samples.
    #[serde(default)]
    pub extremal_injections: u64,
    /// Also run the Schatten-norm and correlation-tensor lemma checks on every sample.
    #[serde(default)]
    pub structural: bool,
}

impl SamplerConfig {
    pub fn new(dims: &[usize], ensemble: Ensemble, samples: u64, seed: u64) -> Self {
        Self {
            dims: dims.to_vec(),
            ensemble,
            samples,
            seed,
            workers: 0,
            extremal_injections: 0,
            structural: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::parameter("sample count must be at least 1"));
        }
        if !(2..=3).contains(&self.dims.len()) || self.dims.iter().any(|&d| d < 2) {
            return Err(Error::parameter(format!(
                "campaign dims must be NxM or NxMxK with every factor >= 2, got {:?}",
                self.dims
            )));
        }
        if let Ensemble::Rank(k) = self.ensemble {
            let d: usize = self.dims.iter().product();
            if k == 0 || k > d {
                return Err(Error::parameter(format!("rank {k} outside 1..={d}")));
            }
        }
        if self.extremal_injections > 0 && self.dims.len() != 2 {
            return Err(Error::parameter("extremal injection needs bipartite dims"));
        }
        Ok(())
    }

    fn pair(&self) -> DimPair {
        DimPair {
            d_a: self.dims[0],
            d_b: self.dims[1],
        }
    }
}

/// One evaluated bound in a sample record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub value: Option<f64>,
    pub slack: Option<f64>,
    pub branch: Option<String>,
}

/// A line of the JSONL sample log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub seed_index: u64,
    pub dims: Vec<usize>,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub bounds: BTreeMap<String, BoundEntry>,
    pub witness: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub evaluated: u64,
    pub violations: u64,
    pub min_slack: Option<f64>,
    /// Index of the sample attaining `min_slack`.
    pub argmin: Option<u64>,
    /// Counts of `floor(10·slack)` clamped to `0..=9`.
    pub histogram: [u64; 10],
}

impl BoundSummary {
    fn add(&mut self, index: u64, slack: f64) {
        self.evaluated += 1;
        if slack < -VIOLATION_TOL {
            self.violations += 1;
        }
        if self.min_slack.is_none_or(|m| slack < m) {
            self.min_slack = Some(slack);
            self.argmin = Some(index);
        }
        let bin = (slack * 10.0).floor().clamp(0.0, 9.0) as usize;
        self.histogram[bin] += 1;
    }
}

/// Aggregate of a campaign. Serialises deterministically; the wall time is kept out of the
/// serialised form so repeated runs compare byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub dims: Vec<usize>,
    pub ensemble: Ensemble,
    pub samples: u64,
    pub extremal_injections: u64,
    pub seed: u64,
    pub bounds: BTreeMap<String, BoundSummary>,
    /// Minimum slack of the sharp bound split by the branch it was evaluated on.
    pub sharp_branch_min_slack: BTreeMap<String, f64>,
    pub violation_count: u64,
    pub witness_count: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl CampaignReport {
    fn new(config: &SamplerConfig) -> Self {
        Self {
            dims: config.dims.clone(),
            ensemble: config.ensemble,
            samples: config.samples,
            extremal_injections: config.extremal_injections,
            seed: config.seed,
            bounds: BTreeMap::new(),
            sharp_branch_min_slack: BTreeMap::new(),
            violation_count: 0,
            witness_count: 0,
            wall_time: Duration::ZERO,
        }
    }

    fn absorb(&mut self, record: &SampleRecord) {
        for (name, entry) in &record.bounds {
            let summary = self.bounds.entry(name.clone()).or_default();
            if let Some(s) = entry.slack {
                summary.add(record.seed_index, s);
                if s < -VIOLATION_TOL {
                    self.violation_count += 1;
                }
            }
        }
        if let Some(sharp) = record.bounds.get("sharp") {
            if let (Some(b), Some(s)) = (&sharp.branch, sharp.slack) {
                let m = self.sharp_branch_min_slack.entry(b.clone()).or_insert(s);
                *m = m.min(s);
            }
        }
        if record.witness {
            self.witness_count += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn entry(value: Option<f64>, slack: Option<f64>, branch: Option<String>) -> BoundEntry {
    BoundEntry {
        value,
        slack,
        branch,
    }
}

fn record_for_point(
    index: u64,
    dims: &[usize],
    point: EntropyPoint,
    pair: DimPair,
) -> Result<SampleRecord> {
    let report = evaluate_point(point, pair)?;
    let bounds = report
        .bounds
        .into_iter()
        .map(|b| (b.name, entry(b.value, b.slack, b.branch)))
        .collect();
    Ok(SampleRecord {
        seed_index: index,
        dims: dims.to_vec(),
        x: point.x,
        y: point.y,
        z: point.z,
        bounds,
        witness: report.witness,
    })
}

fn structural_entries(rho: &DensityMatrix, out: &mut BTreeMap<String, BoundEntry>) -> Result<()> {
    for q in [1.5, 2.0, 3.0] {
        let s = structural::schatten_slack(rho, q)?;
        out.insert(format!("schatten_q{q}"), entry(None, Some(s), None));
    }
    let ga = gellmann_basis(rho.dims()[0])?;
    let gb = gellmann_basis(rho.dims()[1])?;
    let s = structural::elementwise_correlation_slack(rho, &ga, &gb)?;
    out.insert("correlation_elementwise".into(), entry(None, Some(s), None));
    for q in [1.0, 2.0, 3.0] {
        let s = structural::tensor_norm_slack(rho, q)?;
        out.insert(format!("tensor_norm_q{q}"), entry(None, Some(s), None));
    }
    Ok(())
}

/// Evaluates sample `index` of the campaign. Indices past `samples` are extremal injections.
pub fn evaluate_sample(config: &SamplerConfig, index: u64) -> Result<SampleRecord> {
    let mut rng = substream(config.seed, index);
    let pair = config.pair();
    let rho = if index < config.samples {
        sample_state(config.ensemble, &config.dims, &mut rng)?
    } else {
        let x = rng.random_range(0.0..=pair.max_a());
        let y = rng.random_range(0.0..=pair.max_b());
        boundary_state_for(x, y, pair)?
    };

    if config.dims.len() == 3 {
        let rho_ab = rho.partial_trace(&[0, 1])?;
        let point = EntropyPoint::of_state(&rho_ab)?;
        let mut record = record_for_point(index, &config.dims, point, pair)?;
        let s_c = rho.partial_trace(&[2])?.linear_entropy();
        let s_ac = rho.partial_trace(&[0, 2])?.linear_entropy();
        let s_bc = rho.partial_trace(&[1, 2])?.linear_entropy();
        let bound = sisa_bound(s_ac, s_bc, s_c, pair);
        let s_abc = rho.linear_entropy();
        record
            .bounds
            .insert("sisa".into(), entry(Some(bound), Some(bound - s_abc), None));
        if config.structural {
            structural_entries(&rho_ab, &mut record.bounds)?;
        }
        return Ok(record);
    }

    let point = EntropyPoint::of_state(&rho)?;
    let mut record = record_for_point(index, &config.dims, point, pair)?;
    if config.structural {
        structural_entries(&rho, &mut record.bounds)?;
    }
    Ok(record)
}

fn first_abort(record: &SampleRecord) -> Option<(String, f64)> {
    record
        .bounds
        .iter()
        .filter_map(|(name, e)| e.slack.map(|s| (name, s)))
        .find(|(_, s)| *s < -ABORT_TOL)
        .map(|(name, s)| (name.clone(), s))
}

/// Runs a campaign. With `out_dir`, writes one JSON record per sample to `samples.jsonl` and
/// the aggregate to `summary.json`; records already written survive a later failure.
///
/// Output depends only on the configuration minus `workers`.
pub fn run_campaign(config: &SamplerConfig, out_dir: Option<&Path>) -> Result<CampaignReport> {
    config.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::numerical(format!("could not start worker pool: {e}")))?;

    let mut writer = match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            Some(BufWriter::new(File::create(dir.join(SAMPLES_FILE))?))
        }
        None => None,
    };

    let mut report = CampaignReport::new(config);
    let total = config.samples + config.extremal_injections;
    let mut begin = 0;
    while begin < total {
        let end = (begin + CHUNK).min(total);
        let records: Vec<Result<SampleRecord>> = pool.install(|| {
            (begin..end)
                .into_par_iter()
                .map(|i| evaluate_sample(config, i))
                .collect()
        });
        for record in records {
            let record = match record {
                Ok(r) => r,
                Err(e) => {
                    if let Some(w) = writer.as_mut() {
                        w.flush()?;
                    }
                    return Err(e);
                }
            };
            if let Some(w) = writer.as_mut() {
                serde_json::to_writer(&mut *w, &record)?;
                w.write_all(b"\n")?;
            }
            if let Some((bound, slack)) = first_abort(&record) {
                if let Some(w) = writer.as_mut() {
                    w.flush()?;
                }
                return Err(Error::CampaignAborted {
                    index: record.seed_index,
                    bound,
                    slack,
                });
            }
            report.absorb(&record);
        }
        begin = end;
    }

    if let Some(mut w) = writer {
        w.flush()?;
    }
    if let Some(dir) = out_dir {
        fs::write(dir.join(SUMMARY_FILE), report.to_json()? + "\n")?;
    }
    report.wall_time = start.elapsed();
    Ok(report)
}
