//! Monte-Carlo verification of every bound over seeded random instances.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequality::{evaluate_bipartite, evaluate_schedule, BipartiteObservables, REPORT_TOL};
use crate::search::instance::{
    random_bipartite_instance, random_instance, random_times, RandomInstanceConfig, TimeRange,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Running minimum and mean over the instances where a bound applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginStat {
    pub count: u64,
    pub min: Option<f64>,
    pub mean: Option<f64>,
    #[serde(skip)]
    sum: f64,
}

impl Default for MarginStat {
    fn default() -> Self {
        Self {
            count: 0,
            min: None,
            mean: None,
            sum: 0.0,
        }
    }
}

impl MarginStat {
    fn push(&mut self, margin: f64) {
        self.count += 1;
        self.sum += margin;
        self.min = Some(self.min.map_or(margin, |m| m.min(margin)));
        self.mean = Some(self.sum / self.count as f64);
    }

    pub fn violated(&self, tol: f64) -> bool {
        self.min.is_some_and(|m| m < -tol)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Margins {
    pub theorem1: MarginStat,
    pub theorem2: MarginStat,
    pub theorem3: MarginStat,
    pub theorem4: MarginStat,
    /// The four two-term inequalities and both single-pivot determinant
    /// inequalities, pooled per instance by their minimum.
    pub intermediates: MarginStat,
    /// Both complex-valued bounds, on instances meeting the precondition.
    pub appendix: MarginStat,
}

impl Margins {
    fn all(&self) -> [&MarginStat; 6] {
        [
            &self.theorem1,
            &self.theorem2,
            &self.theorem3,
            &self.theorem4,
            &self.intermediates,
            &self.appendix,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub seed: u64,
    pub config: RandomInstanceConfig,
    pub time_range: TimeRange,
    pub samples: u64,
    pub skipped_degenerate: u64,
    pub psd_failures: u64,
    pub min_psd_eigenvalue: Option<f64>,
    pub margins: Margins,
    /// Applicable reports with `|margin| <= REPORT_TOL`.
    pub boundary_cases: u64,
    /// Instances with at least one margin below `-REPORT_TOL`.
    pub violations: u64,
    pub max_lgi: Option<f64>,
    pub max_blg: Option<f64>,
}

impl VerificationReport {
    /// Any margin below `-tol`, or any non-PSD correlation matrix.
    pub fn has_violation(&self, tol: f64) -> bool {
        self.psd_failures > 0 || self.margins.all().iter().any(|m| m.violated(tol))
    }
}

#[derive(Debug, Clone, Copy)]
struct BipartiteSample {
    theorem4: f64,
    blg: f64,
    psd_min: f64,
    psd_ok: bool,
    boundary: bool,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    theorem1: f64,
    theorem2: f64,
    theorem3: f64,
    intermediates: f64,
    appendix: Option<f64>,
    lgi: f64,
    psd_min: f64,
    psd_ok: bool,
    boundary: u64,
    violated: bool,
    bipartite: Option<BipartiteSample>,
}

fn degenerate<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::DegenerateObservable { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn sample(cfg: &RandomInstanceConfig, range: TimeRange, index: u64) -> Result<Option<Sample>> {
    let inst = random_instance(cfg, index)?;
    let times = random_times(cfg.seed, index, range);
    let Some(eval) = degenerate(evaluate_schedule(
        &inst.state,
        &inst.observable,
        &inst.hamiltonian,
        times,
    ))?
    else {
        return Ok(None);
    };

    let bipartite = match random_bipartite_instance(cfg, index)? {
        None => None,
        Some(b) => {
            let ops = BipartiteObservables::from_local_dynamics(
                &b.alice,
                &b.alice_hamiltonian,
                &b.bob,
                &b.bob_hamiltonian,
                times,
            )?;
            match degenerate(evaluate_bipartite(&b.state, &ops))? {
                None => return Ok(None),
                Some(e) => Some(BipartiteSample {
                    theorem4: e.theorem4.margin,
                    blg: e.blg,
                    psd_min: e.psd.min_eigenvalue,
                    psd_ok: e.psd.is_psd,
                    boundary: e.theorem4.is_boundary(),
                }),
            }
        }
    };

    let intermediates = eval
        .intermediates
        .iter()
        .chain(eval.tlm_single.iter())
        .map(|r| r.margin)
        .fold(f64::INFINITY, f64::min);
    let appendix = eval.appendix.precondition_met.then(|| {
        eval.appendix
            .bound
            .margin
            .min(eval.appendix.complementarity.margin)
    });
    let violated = eval.reports().any(|r| r.is_violation())
        || !eval.psd.is_psd
        || bipartite.is_some_and(|b| b.theorem4 < -REPORT_TOL || !b.psd_ok);

    Ok(Some(Sample {
        theorem1: eval.theorem1.margin,
        theorem2: eval.theorem2.margin,
        theorem3: eval.theorem3.margin,
        intermediates,
        appendix,
        lgi: eval.lgi,
        psd_min: eval.psd.min_eigenvalue,
        psd_ok: eval.psd.is_psd,
        boundary: eval.reports().filter(|r| r.is_boundary()).count() as u64,
        violated,
        bipartite,
    }))
}

/// Evaluates `samples` instances (plus their bipartite analogues when
/// `cfg.dim` factors) and aggregates margins in index order.
///
/// Degenerate instances are counted and skipped; any other failure aborts
/// with the offending seed and index.
pub fn monte_carlo_verify(
    cfg: &RandomInstanceConfig,
    samples: u64,
    time_range: TimeRange,
) -> Result<VerificationReport> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    cfg.validate()?;
    let outcomes: Vec<Result<Option<Sample>>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            sample(cfg, time_range, i).map_err(|e| Error::Instance {
                seed: cfg.seed,
                index: i,
                source: Box::new(e),
            })
        })
        .collect();

    let mut report = VerificationReport {
        schema_version: SCHEMA_VERSION,
        seed: cfg.seed,
        config: *cfg,
        time_range,
        samples,
        skipped_degenerate: 0,
        psd_failures: 0,
        min_psd_eigenvalue: None,
        margins: Margins::default(),
        boundary_cases: 0,
        violations: 0,
        max_lgi: None,
        max_blg: None,
    };
    let min_eig = |r: &mut VerificationReport, v: f64| {
        r.min_psd_eigenvalue = Some(r.min_psd_eigenvalue.map_or(v, |m| m.min(v)));
    };
    for outcome in outcomes {
        let Some(s) = outcome? else {
            report.skipped_degenerate += 1;
            continue;
        };
        let m = &mut report.margins;
        m.theorem1.push(s.theorem1);
        m.theorem2.push(s.theorem2);
        m.theorem3.push(s.theorem3);
        m.intermediates.push(s.intermediates);
        if let Some(a) = s.appendix {
            m.appendix.push(a);
        }
        report.max_lgi = Some(report.max_lgi.map_or(s.lgi, |v| v.max(s.lgi)));
        min_eig(&mut report, s.psd_min);
        report.psd_failures += u64::from(!s.psd_ok);
        report.boundary_cases += s.boundary;
        report.violations += u64::from(s.violated);
        if let Some(b) = s.bipartite {
            report.margins.theorem4.push(b.theorem4);
            report.max_blg = Some(report.max_blg.map_or(b.blg, |v| v.max(b.blg)));
            min_eig(&mut report, b.psd_min);
            report.psd_failures += u64::from(!b.psd_ok);
            report.boundary_cases += u64::from(b.boundary);
        }
    }
    Ok(report)
}
