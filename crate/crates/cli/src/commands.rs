use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nagao_core::estimator::{self, FitBasis, DEFAULT_S_GRID};
use nagao_core::shioda::{self, ShiodaLedger};
use nagao_core::{
    corpus, identities, kodaira, Convention, Error, FamilyModel, FamilyShape, FiberClassifier,
    Mode, PrimeTraceRecord, TraceEngine,
};
use serde::Serialize;

use crate::config::describe;
use crate::error::{CliError, CliResult};
use crate::store::{read_records, write_records, RecordCache};

/// Options shared by the record-producing commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub family: FamilyModel,
    pub t_max: u64,
    pub checkpoints: Vec<u64>,
    pub convention: Convention,
    pub mode: Mode,
    pub threads: usize,
    pub fit_basis: FitBasis,
    pub out_dir: PathBuf,
    pub cache: RecordCache,
}

impl RunConfig {
    /// Checkpoints must be ascending with the last one at most `t_max`.
    /// Without explicit checkpoints: powers of ten below `t_max`, then
    /// `t_max` itself.
    pub fn resolve_checkpoints(t_max: u64, given: &[u64]) -> CliResult<Vec<u64>> {
        if given.is_empty() {
            let mut out: Vec<u64> = std::iter::successors(Some(100u64), |&c| c.checked_mul(10))
                .take_while(|&c| c < t_max)
                .collect();
            out.push(t_max);
            return Ok(out);
        }
        if given.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config(
                "checkpoints must be strictly increasing".into(),
            ));
        }
        if given.last().is_some_and(|&c| c > t_max) {
            return Err(CliError::Config(format!("checkpoint above --tmax {t_max}")));
        }
        Ok(given.to_vec())
    }

    pub fn engine(&self) -> CliResult<TraceEngine> {
        Ok(TraceEngine::new(
            self.family.clone(),
            self.convention,
            self.mode,
        )?)
    }

    fn create_out_dir(&self) -> CliResult<()> {
        fs::create_dir_all(&self.out_dir).map_err(|e| CliError::io(&self.out_dir, e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct Summary {
    pub family: String,
    pub T_max: u64,
    pub S_tauberian: f64,
    pub r_dirichlet: f64,
    pub r_combined: f64,
    pub rank_estimate: i64,
    pub deviation: f64,
    pub keyf_alpha: Option<f64>,
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn report_violations(out: &mut dyn Write, violations: &[identities::Violation]) {
    for v in violations {
        let _ = writeln!(
            out,
            "  violation [{}] p = {}: {}",
            v.identity, v.p, v.detail
        );
    }
}

/// Compute (or load) the records, persist them to `out_dir`, then run every
/// estimator on the persisted copy.
pub fn cmd_estimate(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<Summary> {
    cfg.create_out_dir()?;
    let engine = cfg.engine()?;
    let records = cfg.cache.records(&engine, cfg.t_max, cfg.threads)?;
    let rpath = cfg.out_dir.join("records.csv");
    let dpath = cfg.out_dir.join("diagnostics.csv");
    write_records(&rpath, &dpath, &records)?;
    let records = read_records(&rpath, Some(&dpath), cfg.convention)?;

    let mut violations = identities::record_stream(engine.model(), &records);
    violations.extend(identities::constant_product(&engine, &records)?);
    if !violations.is_empty() {
        report_violations(out, &violations);
        return Err(CliError::Identities(violations.len()));
    }

    let good = engine.good_primes_up_to(cfg.t_max);
    let series = estimator::nagao_series(
        &records,
        &good,
        &cfg.checkpoints,
        &DEFAULT_S_GRID,
        cfg.fit_basis,
    )?;
    let keyf_alpha = match estimator::keyf_diagnostic(&records) {
        Ok(rep) => rep.alpha,
        Err(Error::UnavailableConvention) => None,
        Err(e) => return Err(e.into()),
    };

    let mut conv = String::from("T,S_tauberian,r_dirichlet,r_combined\n");
    for (i, t) in series.checkpoints.iter().enumerate() {
        conv.push_str(&format!(
            "{t},{},{},{}\n",
            series.s_tauberian[i], series.s_dirichlet[i], series.s_combined[i]
        ));
    }
    write_text(&cfg.out_dir.join("convergence.csv"), &conv)?;

    let last = series.checkpoints.len() - 1;
    let summary = Summary {
        family: engine.model().label.clone(),
        T_max: cfg.t_max,
        S_tauberian: series.s_tauberian[last],
        r_dirichlet: series.s_dirichlet[last],
        r_combined: series.s_combined[last],
        rank_estimate: series.rank_estimate,
        deviation: series.deviation,
        keyf_alpha,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    write_text(&cfg.out_dir.join("summary.json"), &json)?;
    let _ = out.write_all(json.as_bytes());
    Ok(summary)
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceReport {
    pub place: String,
    #[serde(rename = "type")]
    pub kind: kodaira::KodairaType,
    pub degree: usize,
    pub m_v: u32,
    pub euler: u32,
    /// Components defined over `Q`, when every component's field of
    /// definition is determined.
    pub components_over_q: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub family: String,
    pub places: Vec<PlaceReport>,
    pub ledger: Option<ShiodaLedger>,
}

pub fn fiber_report(model: &FamilyModel, mode: Mode) -> CliResult<FiberReport> {
    let (places, ledger) = match &model.shape {
        FamilyShape::ConstantProduct { .. } => (Vec::new(), Some(shioda::ledger_for(model)?)),
        FamilyShape::Hyperelliptic { .. } => match mode {
            Mode::Strict => {
                return Err(Error::UnimplementedType(format!(
                    "fiber classification for genus >= 2 ({})",
                    model.label
                ))
                .into())
            }
            Mode::Lenient => (Vec::new(), None),
        },
        FamilyShape::Elliptic(w) => {
            let classifier = FiberClassifier::new(model)?;
            let places = classifier
                .places()
                .iter()
                .map(|kp| PlaceReport {
                    place: kp.locus.to_string(),
                    kind: kp.kind,
                    degree: kp.degree(),
                    m_v: kp.m_v(),
                    euler: kp.euler(),
                    components_over_q: kodaira::invariant_components_over_q(w, kp),
                })
                .collect();
            (places, Some(shioda::ledger_for(model)?))
        }
    };
    Ok(FiberReport {
        family: model.label.clone(),
        places,
        ledger,
    })
}

pub fn cmd_fiber_report(
    model: &FamilyModel,
    mode: Mode,
    out_dir: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult<FiberReport> {
    let report = fiber_report(model, mode)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        write_text(&dir.join("fiber_report.json"), &json)?;
    }
    let _ = out.write_all(json.as_bytes());
    Ok(report)
}

/// Test hook: perturb `B` at one prime after the stream is loaded.
#[derive(Clone, Copy, Debug)]
pub struct FaultInjection {
    pub p: u64,
}

fn inject(records: &mut [PrimeTraceRecord], fault: FaultInjection) -> CliResult<()> {
    let r = records.iter_mut().find(|r| r.p == fault.p).ok_or_else(|| {
        CliError::Config(format!(
            "fault prime {} is not in the record stream",
            fault.p
        ))
    })?;
    r.b_avg += nagao_core::Exact::new(1, r.p as i128);
    Ok(())
}

/// Every identity suite that applies to the family, over good `p <= t_max`.
/// Returns the number of violations.
pub fn cmd_verify_identities(
    cfg: &RunConfig,
    fault: Option<FaultInjection>,
    out: &mut dyn Write,
) -> CliResult<usize> {
    let engine = cfg.engine()?;
    let mut records = cfg.cache.records(&engine, cfg.t_max, cfg.threads)?;
    if let Some(f) = fault {
        inject(&mut records, f)?;
    }
    let primes: Vec<u64> = records.iter().map(|r| r.p).collect();
    let model = engine.model();
    let mut suites: Vec<(&str, Vec<identities::Violation>)> = vec![(
        "record stream (B law, A*, Hasse)",
        identities::record_stream(model, &records),
    )];
    match &model.shape {
        FamilyShape::ConstantProduct { .. } => {
            suites.push((
                "constant product closed forms",
                identities::constant_product(&engine, &records)?,
            ));
        }
        FamilyShape::Elliptic(_) => {
            suites.push((
                "rational vertical components",
                identities::component_identity(&engine, &primes)?,
            ));
        }
        FamilyShape::Hyperelliptic { .. } => {}
    }
    if records.iter().all(|r| r.b_surface.is_some()) && !records.is_empty() {
        suites.push((
            "surface trace residual decay",
            identities::keyf_decay(&records)?,
        ));
    }
    let mut total = 0;
    for (name, v) in &suites {
        let status = if v.is_empty() { "ok" } else { "FAILED" };
        let _ = writeln!(
            out,
            "{name}: {status} ({} primes <= {})",
            primes.len(),
            cfg.t_max
        );
        report_violations(out, v);
        total += v.len();
    }
    if total > 0 {
        return Err(CliError::Identities(total));
    }
    Ok(total)
}

pub fn cmd_corpus_list(out: &mut dyn Write) {
    for m in corpus::all() {
        let _ = writeln!(out, "{:<16} {}", m.label, describe(&m));
    }
}
