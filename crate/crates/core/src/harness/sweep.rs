use super::config::{AbsModel, PsdScenario, RelModel, ScenarioConfig};
use super::metrics::{ErrorCurve, MetricValue};
use crate::absolute::{CartesianModel, EquinoctialModel, ProcessNoiseCov, Psd3, Representation};
use crate::oracle::{
    cross_q_numeric_profile, finite_difference_jacobian, default_fd_steps, q_numeric_profile, two_body_acceleration,
    QuadratureConfig,
};
use crate::orbit::{equinoctial_to_cartesian, propagate_two_body, EquinoctialState, InertialState};
use crate::relative::{
    delta_psd, j_chief_rel_cartesian, j_chief_rel_equinoctial, j_deputy_rel_cartesian, j_deputy_rel_equinoctial,
    q_rel_cartesian_small_sep, q_rel_equinoctial_small_sep, q_rel_full, q_rel_large_sep,
    rel_cartesian_rtn_with_acceleration, CrossPsd3,
};
use crate::{Matrix6, Result, SncError, Vector6};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    DeltaMax,
    DeltaTMin,
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::DeltaMax => "delta_max",
            MetricKind::DeltaTMin => "delta_t_min",
        })
    }
}

impl FromStr for MetricKind {
    type Err = SncError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta_max" => Ok(MetricKind::DeltaMax),
            "delta_t_min" => Ok(MetricKind::DeltaTMin),
            _ => Err(SncError::Format(format!("unknown metric '{s}'"))),
        }
    }
}

/// One metric for one model at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRecord {
    /// Eccentricity (absolute sweep) or initial δλ in rad (relative sweep).
    pub sweep_value: f64,
    /// PSD scenario name.
    pub scenario: String,
    pub model: String,
    pub metric: MetricKind,
    /// Orbits for Δt_min, dimensionless for δ_max; `None` when Δt_min is not reached.
    pub value: Option<f64>,
    pub at_dt_orbits: Option<f64>,
    pub errors: [f64; 6],
    /// `;`-separated names of diagonals left out of the metric.
    pub excluded: String,
}

/// Full error curve of one model at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRecord {
    pub sweep_value: f64,
    pub scenario: String,
    pub model: String,
    pub curve: ErrorCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Absolute,
    Relative,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Absolute => "absolute",
            SweepKind::Relative => "relative",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub records: Vec<MetricRecord>,
    pub curves: Vec<CurveRecord>,
}

impl SweepResult {
    pub fn empty(kind: SweepKind) -> Self {
        SweepResult { kind, records: Vec::new(), curves: Vec::new() }
    }

    /// Records of one model/scenario/metric in sweep order.
    pub fn series(&self, scenario: &str, model: &str, metric: MetricKind) -> Vec<&MetricRecord> {
        self.records.iter().filter(|r| r.scenario == scenario && r.model == model && r.metric == metric).collect()
    }

    pub fn curve(&self, sweep_value: f64, scenario: &str, model: &str) -> Option<&ErrorCurve> {
        self.curves
            .iter()
            .find(|c| c.sweep_value == sweep_value && c.scenario == scenario && c.model == model)
            .map(|c| &c.curve)
    }
}

fn record(sweep_value: f64, scenario: &str, model: &str, metric: MetricKind, m: MetricValue, repr: Representation) -> MetricRecord {
    MetricRecord {
        sweep_value,
        scenario: scenario.to_string(),
        model: model.to_string(),
        metric,
        excluded: m.excluded_names(repr),
        value: m.value,
        at_dt_orbits: m.at_dt_orbits,
        errors: m.errors,
    }
}

fn quad(cfg: &ScenarioConfig) -> QuadratureConfig {
    QuadratureConfig { panels: cfg.panels_per_step }
}

struct PointOutput {
    records: Vec<MetricRecord>,
    curves: Vec<CurveRecord>,
}

fn merge(kind: SweepKind, points: Vec<PointOutput>) -> SweepResult {
    let mut res = SweepResult::empty(kind);
    for p in points {
        res.records.extend(p.records);
        res.curves.extend(p.curves);
    }
    res
}

fn absolute_point(cfg: &ScenarioConfig, models: &[AbsModel], scenario: PsdScenario, e: f64) -> Result<PointOutput> {
    let mu = cfg.mu;
    let eq0 = cfg.absolute.initial_state(e)?;
    let st0 = equinoctial_to_cartesian(&eq0, mu)?;
    let psd = scenario.psd(cfg.absolute.psd_star)?;
    let period = eq0.period(mu);
    let grid = cfg.grid.points();
    let times: Vec<f64> = grid.iter().map(|g| g * period).collect();

    let need = |eqn: bool| models.iter().any(|m| m.is_equinoctial() == eqn);
    let truth_for = |repr| q_numeric_profile(&st0, &psd, &times, &quad(cfg), &cfg.integrator, mu, repr);
    let truth_cart = if need(false) { truth_for(Representation::InertialCartesian)? } else { Vec::new() };
    let truth_eq = if need(true) { truth_for(Representation::Equinoctial)? } else { Vec::new() };

    let mut out = PointOutput { records: Vec::new(), curves: Vec::new() };
    for model in models {
        let (truth, repr) = match model {
            AbsModel::Cartesian(_) => (&truth_cart, Representation::InertialCartesian),
            AbsModel::Equinoctial(_) => (&truth_eq, Representation::Equinoctial),
        };
        let mut curve = ErrorCurve::new(repr);
        for (k, &dt) in times.iter().enumerate() {
            let q = match model {
                AbsModel::Cartesian(m) => m.evaluate(&st0, &psd, dt, mu)?,
                AbsModel::Equinoctial(m) => m.evaluate(&eq0, &psd, dt, mu)?,
            };
            curve.push(grid[k], &q, &truth[k], cfg.relative_floor);
        }
        let windows: &[_] = if model.is_equinoctial() { &cfg.absolute.equinoctial_dt_min_windows } else { &[] };
        let name = model.to_string();
        let sc = scenario.name();
        out.records.push(record(e, sc, &name, MetricKind::DeltaTMin, curve.delta_t_min(cfg.threshold, windows), repr));
        out.records.push(record(e, sc, &name, MetricKind::DeltaMax, curve.delta_max(), repr));
        out.curves.push(CurveRecord { sweep_value: e, scenario: sc.to_string(), model: name, curve });
    }
    Ok(out)
}

/// Δt_min and δ_max of each absolute model over the eccentricity grid, for
/// each PSD scenario, against the two-body reference truth.
pub fn sweep_absolute_eccentricity(cfg: &ScenarioConfig) -> Result<SweepResult> {
    sweep_absolute_with(cfg, &cfg.absolute.models, &cfg.absolute.scenarios)
}

/// As [`sweep_absolute_eccentricity`] with an explicit model and scenario selection.
pub fn sweep_absolute_with(cfg: &ScenarioConfig, models: &[AbsModel], scenarios: &[PsdScenario]) -> Result<SweepResult> {
    cfg.validate()?;
    if models.is_empty() || scenarios.is_empty() {
        return Err(SncError::InvalidInput("sweep needs at least one model and one PSD scenario".into()));
    }
    let points: Vec<(PsdScenario, f64)> =
        scenarios.iter().flat_map(|&s| cfg.absolute.eccentricities.iter().map(move |&e| (s, e))).collect();
    let outputs = points
        .par_iter()
        .map(|&(s, e)| absolute_point(cfg, models, s, e))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(SweepKind::Absolute, outputs))
}

/// Shared chief-side data of the relative sweep.
struct ChiefData {
    eq0: EquinoctialState,
    st0: InertialState,
    psd: Psd3,
    grid: Vec<f64>,
    times: Vec<f64>,
    ends: Vec<EquinoctialState>,
    q_cart: Vec<ProcessNoiseCov>,
    q_eq: Vec<ProcessNoiseCov>,
}

fn cartesian_rel_jacobians(chief: &InertialState, deputy: &InertialState, mu: f64) -> Result<(Matrix6, Matrix6)> {
    let rel = |c: &Vector6, d: &Vector6| -> Result<Vector6> {
        let cs = InertialState::from_vector(c, 0.0);
        let ds = InertialState::from_vector(d, 0.0);
        let acc = two_body_acceleration(&cs.r, mu);
        Ok(rel_cartesian_rtn_with_acceleration(&cs, &ds, Some(acc))?.to_vector())
    };
    let (xc, xd) = (chief.to_vector(), deputy.to_vector());
    let jd = finite_difference_jacobian(|x| rel(&xc, x), &xd, &default_fd_steps(&xd))?;
    let jc = finite_difference_jacobian(|x| rel(x, &xd), &xc, &default_fd_steps(&xc))?;
    Ok((jd, jc))
}

fn relative_point(cfg: &ScenarioConfig, models: &[RelModel], chief: &ChiefData, dl: f64) -> Result<PointOutput> {
    let mu = cfg.mu;
    let rc = &cfg.relative;
    let mut deq0 = chief.eq0;
    deq0.lambda += dl;
    let dst0 = equinoctial_to_cartesian(&deq0, mu)?;
    let corr = rc.correlation_amplitude * (-dl / rc.correlation_scale_rad).exp();
    let q_cd = CrossPsd3::scaled_from(&chief.psd, corr);
    let rel_psd = delta_psd(&chief.psd, &chief.psd, &q_cd, &q_cd);

    let need = |eqn: bool| models.iter().any(|m| m.is_equinoctial() == eqn);
    let qc = quad(cfg);
    let truth = |repr: Representation, q_c: &[ProcessNoiseCov]| -> Result<Vec<ProcessNoiseCov>> {
        let q_d = q_numeric_profile(&dst0, &chief.psd, &chief.times, &qc, &cfg.integrator, mu, repr)?;
        let cross = cross_q_numeric_profile(&chief.st0, &dst0, &q_cd, &chief.times, &qc, &cfg.integrator, mu, repr)?;
        (0..chief.times.len())
            .map(|k| {
                let dt = chief.times[k];
                let c_end = chief.ends[k];
                let d_end = propagate_two_body(&deq0, dt, mu);
                let (jd, jc) = match repr {
                    Representation::InertialCartesian => cartesian_rel_jacobians(
                        &equinoctial_to_cartesian(&c_end, mu)?,
                        &equinoctial_to_cartesian(&d_end, mu)?,
                        mu.value(),
                    )?,
                    _ => (j_deputy_rel_equinoctial(&c_end), j_chief_rel_equinoctial(&c_end, &d_end)),
                };
                let q = q_rel_full(&jd, &jc, &q_d[k], &q_c[k], &cross[k])?;
                Ok(ProcessNoiseCov::new(0.5 * (q.matrix + q.matrix.transpose()), q.representation))
            })
            .collect()
    };
    let truth_cart = if need(false) { truth(Representation::InertialCartesian, &chief.q_cart)? } else { Vec::new() };
    let truth_eq = if need(true) { truth(Representation::Equinoctial, &chief.q_eq)? } else { Vec::new() };

    let mut out = PointOutput { records: Vec::new(), curves: Vec::new() };
    for &model in models {
        let (truth, repr) = if model.is_equinoctial() {
            (&truth_eq, Representation::RelativeEquinoctial)
        } else {
            (&truth_cart, Representation::RelativeRtn)
        };
        let mut curve = ErrorCurve::new(repr);
        for (k, &dt) in chief.times.iter().enumerate() {
            let q = match model {
                RelModel::SmallSepCartesian => q_rel_cartesian_small_sep(&chief.st0, &rel_psd, dt, mu, CartesianModel::Hcw)?,
                RelModel::SmallSepEquinoctial => {
                    q_rel_equinoctial_small_sep(&chief.eq0, &rel_psd, dt, mu, EquinoctialModel::Circular)?
                }
                RelModel::LargeSepCartesian => {
                    let c_end = equinoctial_to_cartesian(&chief.ends[k], mu)?;
                    let d_end = equinoctial_to_cartesian(&propagate_two_body(&deq0, dt, mu), mu)?;
                    let q_c = CartesianModel::Hcw.evaluate(&chief.st0, &chief.psd, dt, mu)?;
                    let q_d = CartesianModel::Hcw.evaluate(&dst0, &chief.psd, dt, mu)?;
                    q_rel_large_sep(&j_deputy_rel_cartesian(&c_end)?, &j_chief_rel_cartesian(&c_end, &d_end)?, &q_d, &q_c)?
                }
                RelModel::LargeSepEquinoctial => {
                    let c_end = chief.ends[k];
                    let d_end = propagate_two_body(&deq0, dt, mu);
                    let q_c = EquinoctialModel::Circular.evaluate(&chief.eq0, &chief.psd, dt, mu)?;
                    let q_d = EquinoctialModel::Circular.evaluate(&deq0, &chief.psd, dt, mu)?;
                    q_rel_large_sep(&j_deputy_rel_equinoctial(&c_end), &j_chief_rel_equinoctial(&c_end, &d_end), &q_d, &q_c)?
                }
            };
            curve.push(chief.grid[k], &q, &truth[k], cfg.relative_floor);
        }
        let name = model.name();
        out.records.push(record(dl, "correlated", name, MetricKind::DeltaMax, curve.delta_max(), repr));
        out.curves.push(CurveRecord { sweep_value: dl, scenario: "correlated".into(), model: name.into(), curve });
    }
    Ok(out)
}

/// δ_max of each relative model over the initial along-track separation grid.
///
/// Truth combines the two absolute reference covariances, their cross
/// covariance under the exponentially decaying correlation, and the exact
/// first-order relative-state Jacobians at the interval end.
pub fn sweep_relative_separation(cfg: &ScenarioConfig) -> Result<SweepResult> {
    sweep_relative_with(cfg, &cfg.relative.models)
}

pub fn sweep_relative_with(cfg: &ScenarioConfig, models: &[RelModel]) -> Result<SweepResult> {
    cfg.validate()?;
    if models.is_empty() {
        return Err(SncError::InvalidInput("sweep needs at least one model".into()));
    }
    let mu = cfg.mu;
    let eq0 = cfg.relative.chief_state()?;
    let st0 = equinoctial_to_cartesian(&eq0, mu)?;
    let psd = Psd3::isotropic(cfg.relative.psd_star)?;
    let grid = cfg.grid.points();
    let period = eq0.period(mu);
    let times: Vec<f64> = grid.iter().map(|g| g * period).collect();
    let ends = times.iter().map(|&t| propagate_two_body(&eq0, t, mu)).collect();
    let profile = |repr| q_numeric_profile(&st0, &psd, &times, &quad(cfg), &cfg.integrator, mu, repr);
    let need = |eqn: bool| models.iter().any(|m| m.is_equinoctial() == eqn);
    let q_cart = if need(false) { profile(Representation::InertialCartesian)? } else { Vec::new() };
    let q_eq = if need(true) { profile(Representation::Equinoctial)? } else { Vec::new() };
    let chief = ChiefData { eq0, st0, psd, grid, times, ends, q_cart, q_eq };

    let outputs = cfg
        .relative
        .separations_rad
        .par_iter()
        .map(|&dl| relative_point(cfg, models, &chief, dl))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge(SweepKind::Relative, outputs))
}
