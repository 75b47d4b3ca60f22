//! Evaluates a scenario over its sweep grid.
//!
//! Each (curve, grid point) pair is an independent job; jobs run on the
//! rayon pool and are reassembled in grid order. Monte Carlo runs use the
//! scenario seed with one random stream per receiver case, the same at every
//! grid point, so simulated curves share their random numbers across the grid.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use jamsec_core::fading::{mixture_cdf, GammaSnrParams};
use jamsec_core::montecarlo::{estimate_eve, estimate_receiver, estimate_secrecy, FadingSpec, LinkFading, SimConfig};
use jamsec_core::quad::{integrate, integrate_semi_infinite, QuadratureConfig};
use jamsec_core::secrecy::eve::eve_channel_from_geometry;
use jamsec_core::secrecy::receiver::{
    capacity_gamma_closed_form, capacity_gamma_quadrature, capacity_receiver_quadrature, capacity_receiver_series,
};
use jamsec_core::secrecy::{db_to_linear, secrecy_capacity, Method, Metric, NetworkGeometry};
use jamsec_core::{Error, Result, SamplerSeed};
use rayon::prelude::*;

use crate::scenario::{Diagnostic, Scenario};
use crate::table::{Cell, Metadata, ResultTable};

/// What a column holds: one metric by one method for one curve.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct ColumnKey {
    metric: Metric,
    case: Option<usize>,
    series: Option<usize>,
    threshold: Option<usize>,
    method: Method,
    std_error: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Outcome {
    Value(f64),
    /// The method does not apply to this link model; the column is dropped
    /// when it is inapplicable everywhere.
    NotApplicable,
    Failed,
}

/// Result of a sweep: the table plus every numerical failure encountered.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub table: ResultTable,
    pub failures: Vec<Diagnostic>,
}

/// Overrides applied on top of a scenario file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub methods: Option<Vec<Method>>,
    /// Evaluate this single axis value instead of the grid.
    pub at: Option<f64>,
}

impl RunOptions {
    pub fn apply(&self, scenario: &Scenario) -> Scenario {
        let mut s = scenario.clone();
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(trials) = self.trials {
            s.trials = trials;
        }
        if let Some(methods) = &self.methods {
            s.methods = methods.clone();
        }
        if let Some(at) = self.at {
            s.sweep.grid = vec![at];
        }
        s
    }
}

struct Job {
    series: Option<usize>,
    axis: f64,
}

type PointCells = Vec<(ColumnKey, Outcome, Option<String>)>;

/// Runs a validated scenario. `source_sha256` identifies the scenario text.
pub fn run(scenario: &Scenario, source_sha256: &str) -> RunOutput {
    let series_idx: Vec<Option<usize>> = match &scenario.series {
        Some(s) => (0..s.values.len()).map(Some).collect(),
        None => vec![None],
    };
    let jobs: Vec<Job> = scenario
        .sweep
        .grid
        .iter()
        .flat_map(|&axis| series_idx.iter().map(move |&series| Job { series, axis }))
        .collect();
    let results: Vec<PointCells> = jobs.par_iter().map(|job| evaluate_point(scenario, job)).collect();

    let mut columns: BTreeMap<ColumnKey, Vec<Outcome>> = BTreeMap::new();
    let rows = scenario.sweep.grid.len();
    let per_row = series_idx.len();
    let mut failures = Vec::new();
    for (j, cells) in results.into_iter().enumerate() {
        let row = j / per_row;
        for (key, outcome, err) in cells {
            let name = column_name(scenario, &key);
            if let Some(msg) = err {
                failures.push(Diagnostic { field: format!("{}={} {}", scenario.sweep.axis.name(), scenario.sweep.grid[row], name), message: msg });
            }
            columns.entry(key).or_insert_with(|| vec![Outcome::NotApplicable; rows])[row] = outcome;
        }
    }
    columns.retain(|_, v| v.iter().any(|o| *o != Outcome::NotApplicable));

    let names: Vec<String> = columns.keys().map(|k| column_name(scenario, k)).collect();
    let table_rows = (0..rows)
        .map(|r| {
            let cells = columns
                .values()
                .map(|v| match v[r] {
                    Outcome::Value(x) => Cell::Value(x),
                    _ => Cell::Na,
                })
                .collect();
            (scenario.sweep.grid[r], cells)
        })
        .collect();
    let metadata = Metadata {
        scenario: scenario.name.clone(),
        scenario_sha256: source_sha256.to_string(),
        seed: scenario.seed,
        trials: scenario.trials,
        methods: scenario.methods.iter().map(|m| m.tag().to_string()).collect(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    RunOutput { table: ResultTable::new(metadata, scenario.sweep.axis.name().to_string(), names, table_rows), failures }
}

fn column_name(s: &Scenario, k: &ColumnKey) -> String {
    let mut quals = Vec::new();
    if let Some(c) = k.case {
        quals.push(format!("case={}", s.receivers[c].label));
    }
    if let (Some(i), Some(series)) = (k.series, &s.series) {
        quals.push(format!("{}={}", series.param.name(), series.values[i]));
    }
    if let Some(t) = k.threshold {
        quals.push(format!("zeta_db={}", s.thresholds_db[t]));
    }
    let method = if k.std_error { format!("{}-se", k.method.tag()) } else { k.method.tag().to_string() };
    if quals.is_empty() {
        format!("{}@{}", k.metric.name(), method)
    } else {
        format!("{}[{}]@{}", k.metric.name(), quals.join("|"), method)
    }
}

struct Point<'a> {
    scenario: &'a Scenario,
    geometry: NetworkGeometry,
    series: Option<usize>,
    cells: PointCells,
}

impl Point<'_> {
    fn wants(&self, metric: Metric) -> bool {
        self.scenario.metrics.contains(&metric)
    }

    fn record(&mut self, metric: Metric, case: Option<usize>, threshold: Option<usize>, method: Method, r: Option<Result<f64>>) {
        let key = ColumnKey { metric, case, series: self.series, threshold, method, std_error: false };
        let (outcome, err) = match r {
            None => (Outcome::NotApplicable, None),
            Some(Ok(v)) if v.is_finite() => (Outcome::Value(v), None),
            Some(Ok(v)) => (Outcome::Failed, Some(format!("non-finite result {v}"))),
            Some(Err(e)) => (Outcome::Failed, Some(e.to_string())),
        };
        self.cells.push((key, outcome, err));
    }

    fn record_mc(&mut self, metric: Metric, case: Option<usize>, threshold: Option<usize>, r: Result<(f64, f64)>) {
        let (v, se) = match r {
            Ok((v, se)) => (Ok(v), Ok(se)),
            Err(e) => (Err(e.clone()), Err(e)),
        };
        self.record(metric, case, threshold, Method::MonteCarlo, Some(v));
        let key = ColumnKey { metric, case, series: self.series, threshold, method: Method::MonteCarlo, std_error: true };
        let outcome = match se {
            Ok(x) if x.is_finite() => Outcome::Value(x),
            _ => Outcome::Failed,
        };
        self.cells.push((key, outcome, None));
    }
}

fn evaluate_point(s: &Scenario, job: &Job) -> PointCells {
    let series_value = job.series.map(|i| s.series.as_ref().expect("series present").values[i]);
    let state = s.point(series_value, job.axis);
    let mut pt = Point { scenario: s, geometry: state.geometry, series: job.series, cells: Vec::new() };
    let thresholds: Vec<f64> = s.thresholds_db.iter().map(|&t| db_to_linear(t)).collect();
    let analytic: Vec<Method> = s.methods.iter().copied().filter(|m| *m != Method::MonteCarlo).collect();
    let mc = s.methods.contains(&Method::MonteCarlo);

    let needs_eve = pt.wants(Metric::OutageE) || pt.wants(Metric::CapacityE) || pt.wants(Metric::Secrecy);
    let mut eve_capacity: BTreeMap<Method, Result<f64>> = BTreeMap::new();
    let mut eve_mc_capacity = None;
    if needs_eve {
        let chan = eve_channel_from_geometry(&pt.geometry, s.eve_m, s.jammer_m);
        for &method in &analytic {
            if pt.wants(Metric::OutageE) {
                for (ti, &th) in thresholds.iter().enumerate() {
                    let r = chan.as_ref().map_err(Clone::clone).and_then(|c| match method {
                        Method::ClosedForm => c.cdf(th),
                        _ => c.cdf_integral(th).map(|e| e.value),
                    });
                    pt.record(Metric::OutageE, None, Some(ti), method, Some(r));
                }
            }
            if pt.wants(Metric::CapacityE) || pt.wants(Metric::Secrecy) {
                let r = chan.as_ref().map_err(Clone::clone).and_then(|c| match method {
                    Method::ClosedForm => c.capacity_closed_form(&QuadratureConfig::default()).map(|e| e.value),
                    _ => c.capacity_quadrature().map(|e| e.value),
                });
                if pt.wants(Metric::CapacityE) {
                    pt.record(Metric::CapacityE, None, None, method, Some(r.clone()));
                }
                eve_capacity.insert(method, r);
            }
        }
        if mc {
            let cfg = sim_config(s, &pt.geometry, LinkFading::single(FadingSpec::Gamma { m: 1.0 }), 0);
            let est = estimate_eve(&cfg, &thresholds);
            if pt.wants(Metric::OutageE) {
                for ti in 0..thresholds.len() {
                    let r = est.as_ref().map(|e| (e.outage[ti].value, e.outage[ti].std_error)).map_err(Clone::clone);
                    pt.record_mc(Metric::OutageE, None, Some(ti), r);
                }
            }
            if pt.wants(Metric::CapacityE) {
                let r = est.as_ref().map(|e| (e.capacity.value, e.capacity.std_error)).map_err(Clone::clone);
                pt.record_mc(Metric::CapacityE, None, None, r);
            }
            eve_mc_capacity = Some(est.map(|e| e.capacity));
        }
    }

    let needs_receiver = pt.wants(Metric::OutageR) || pt.wants(Metric::CapacityR) || pt.wants(Metric::Secrecy);
    if !needs_receiver {
        return pt.cells;
    }
    for (ci, case) in s.receivers.iter().enumerate() {
        let g = pt.geometry;
        let mean = g.validate().and_then(|_| g.receiver_mean_snr());
        for &method in &analytic {
            if pt.wants(Metric::OutageR) {
                for (ti, &th) in thresholds.iter().enumerate() {
                    let r = receiver_outage(&case.link, g.n, mean.clone(), th, method);
                    pt.record(Metric::OutageR, Some(ci), Some(ti), method, r);
                }
            }
            if pt.wants(Metric::CapacityR) || pt.wants(Metric::Secrecy) {
                let cr = receiver_capacity(&case.link, g.n, mean.clone(), method);
                if pt.wants(Metric::CapacityR) {
                    pt.record(Metric::CapacityR, Some(ci), None, method, cr.clone());
                }
                if pt.wants(Metric::Secrecy) {
                    let sec = cr.map(|cr| {
                        let ce = eve_capacity.get(&method).cloned().unwrap_or_else(|| Err(Error::Usage("missing".into())));
                        cr.and_then(|cr| ce.map(|ce| secrecy_capacity(cr, ce)))
                    });
                    pt.record(Metric::Secrecy, Some(ci), None, method, sec);
                }
            }
        }
        if mc {
            let cfg = sim_config(s, &g, case.link, ci as u64);
            let est = estimate_receiver(&cfg, &thresholds);
            if pt.wants(Metric::OutageR) {
                for ti in 0..thresholds.len() {
                    let r = est.as_ref().map(|e| (e.outage[ti].value, e.outage[ti].std_error)).map_err(Clone::clone);
                    pt.record_mc(Metric::OutageR, Some(ci), Some(ti), r);
                }
            }
            if pt.wants(Metric::CapacityR) {
                let r = est.as_ref().map(|e| (e.capacity.value, e.capacity.std_error)).map_err(Clone::clone);
                pt.record_mc(Metric::CapacityR, Some(ci), None, r);
            }
            if pt.wants(Metric::Secrecy) {
                let r = match (&est, &eve_mc_capacity) {
                    (Ok(e), Some(Ok(ce))) => {
                        let sec = estimate_secrecy(&e.capacity, ce);
                        Ok((sec.value, sec.std_error))
                    }
                    (Err(e), _) | (_, Some(Err(e))) => Err(e.clone()),
                    (_, None) => Err(Error::Usage("eavesdropper estimate missing".into())),
                };
                pt.record_mc(Metric::Secrecy, Some(ci), None, r);
            }
        }
    }
    pt.cells
}

fn sim_config(s: &Scenario, g: &NetworkGeometry, receiver: LinkFading, stream: u64) -> SimConfig {
    SimConfig {
        trials: s.trials,
        seed: SamplerSeed::new(s.seed, stream),
        geometry: *g,
        receiver,
        eve_source: s.eve_source(),
        jammer: s.jammer(),
    }
}

/// Distribution of the `N`-antenna sum for a Gamma link: shapes add.
fn gamma_sum(m: f64, n: u32, mean: f64) -> Result<GammaSnrParams> {
    GammaSnrParams::new(m * n as f64, m / mean)
}

/// CDF of one fading law at `th`, or `None` when `method` does not apply.
fn component_cdf(spec: &FadingSpec, n: u32, mean: f64, th: f64, method: Method) -> Option<Result<f64>> {
    match (spec, method) {
        (FadingSpec::Gamma { m }, Method::ClosedForm) => Some(gamma_sum(*m, n, mean).and_then(|p| p.cdf(th))),
        (FadingSpec::Gamma { m }, _) => Some(gamma_sum(*m, n, mean).and_then(|p| {
            let cfg = QuadratureConfig::default().with_tolerances(1e-16, 1e-12);
            integrate(|x| p.pdf(x).unwrap_or(f64::NAN), 0.0, th, &cfg).map(|e| e.value)
        })),
        (FadingSpec::RicianShadowed { .. }, Method::ClosedForm) if n == 1 => {
            Some(spec.rician(mean).and_then(|p| p.cdf(th)))
        }
        (FadingSpec::Dksm { .. }, Method::Quadrature) if n == 1 => Some(spec.dksm(mean).and_then(|p| p.cdf(th))),
        _ => None,
    }
}

fn component_capacity(spec: &FadingSpec, n: u32, mean: f64, method: Method) -> Option<Result<f64>> {
    match (spec, method) {
        (FadingSpec::Gamma { m }, Method::ClosedForm) if (m * n as f64).fract() == 0.0 => Some(
            gamma_sum(*m, n, mean).and_then(|p| capacity_gamma_closed_form(&p, &QuadratureConfig::default())).map(|e| e.value),
        ),
        (FadingSpec::Gamma { m }, Method::Quadrature) => {
            Some(gamma_sum(*m, n, mean).and_then(|p| capacity_gamma_quadrature(&p)).map(|e| e.value))
        }
        (FadingSpec::Dksm { .. }, Method::ClosedForm) if n == 1 => {
            Some(spec.dksm(mean).and_then(|p| capacity_receiver_series(&p)).map(|e| e.value))
        }
        (FadingSpec::Dksm { .. }, Method::Quadrature) if n == 1 => {
            Some(spec.dksm(mean).and_then(|p| capacity_receiver_quadrature(&p)).map(|e| e.value))
        }
        (FadingSpec::RicianShadowed { .. }, Method::Quadrature) if n == 1 => Some(spec.rician(mean).and_then(|p| {
            // E[log2(1 + g)] = 1/ln 2 * int (1 - F(g)) / (1 + g) dg
            let mut failure = None;
            let cfg = QuadratureConfig::default().with_tolerances(1e-13, 1e-9);
            let r = integrate_semi_infinite(
                |g| match p.cdf(g) {
                    Ok(f) => (1.0 - f) / (1.0 + g),
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                p.snr_mean(),
                &cfg,
            )?;
            match failure {
                Some(e) => Err(e),
                None => Ok(r.value / LN_2),
            }
        })),
        _ => None,
    }
}

fn receiver_outage(link: &LinkFading, n: u32, mean: Result<f64>, th: f64, method: Method) -> Option<Result<f64>> {
    mix(link, |spec| match &mean {
        Ok(mean) => component_cdf(spec, n, *mean, th, method),
        Err(e) => Some(Err(e.clone())),
    })
    .map(|r| r.and_then(|(p, a, b)| mixture_cdf(p, a, b)))
}

fn receiver_capacity(link: &LinkFading, n: u32, mean: Result<f64>, method: Method) -> Option<Result<f64>> {
    mix(link, |spec| match &mean {
        Ok(mean) => component_capacity(spec, n, *mean, method),
        Err(e) => Some(Err(e.clone())),
    })
    .map(|r| r.map(|(p, a, b)| p * a + (1.0 - p) * b))
}

/// Evaluates both states of a LOS/NLOS link, skipping a state that carries
/// no probability.
fn mix<F>(link: &LinkFading, f: F) -> Option<Result<(f64, f64, f64)>>
where
    F: Fn(&FadingSpec) -> Option<Result<f64>>,
{
    let p = link.p_los;
    let los = if p > 0.0 { f(&link.los)? } else { Ok(0.0) };
    let nlos = if p < 1.0 { f(&link.nlos)? } else { Ok(0.0) };
    Some(los.and_then(|a| nlos.map(|b| (p, a, b))))
}
