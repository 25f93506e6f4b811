use super::config::ExclusionWindow;
use crate::absolute::{ProcessNoiseCov, Representation};
use crate::{Result, SncError};
use serde::{Deserialize, Serialize};

/// Short diagonal labels for a representation.
pub fn element_names(repr: Representation) -> [&'static str; 6] {
    match repr {
        Representation::InertialCartesian => ["x", "y", "z", "vx", "vy", "vz"],
        Representation::Curvilinear => ["rho", "r_theta", "r_phi", "rho_dot", "r_theta_dot", "r_phi_dot"],
        Representation::Equinoctial => ["a", "f", "g", "h", "k", "lambda"],
        Representation::RelativeRtn => ["dr_r", "dr_t", "dr_n", "dv_r", "dv_t", "dv_n"],
        Representation::RelativeEquinoctial => ["da_a", "dlambda", "df", "dg", "dh", "dk"],
    }
}

/// Diagonal indices sharing a unit, for the relative floor.
fn unit_groups(repr: Representation) -> &'static [&'static [usize]] {
    match repr {
        Representation::InertialCartesian | Representation::Curvilinear | Representation::RelativeRtn => {
            &[&[0, 1, 2], &[3, 4, 5]]
        }
        Representation::Equinoctial => &[&[0], &[1, 2, 3, 4, 5]],
        Representation::RelativeEquinoctial => &[&[0, 1, 2, 3, 4, 5]],
    }
}

/// |(σ − σ̂)/σ| per diagonal, plus which diagonals fall below `floor` times
/// the largest truth std of their unit group.
pub fn fractional_std_errors(model: &ProcessNoiseCov, truth: &ProcessNoiseCov, floor: f64) -> ([f64; 6], [bool; 6]) {
    let s = truth.std_devs();
    let s_hat = model.std_devs();
    let errors = std::array::from_fn(|i| {
        if s[i] > 0.0 {
            ((s[i] - s_hat[i]) / s[i]).abs()
        } else if s_hat[i] == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    });
    let mut excluded = [false; 6];
    for group in unit_groups(truth.representation) {
        let max = group.iter().map(|&i| s[i]).fold(0.0, f64::max);
        for &i in *group {
            excluded[i] = max == 0.0 || s[i] < floor * max;
        }
    }
    (errors, excluded)
}

/// Per-diagonal fractional std error over a grid of interval lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorCurve {
    pub representation: Representation,
    pub dt_orbits: Vec<f64>,
    pub errors: Vec<[f64; 6]>,
    /// Diagonals under the std floor at each grid point.
    pub floored: Vec<[bool; 6]>,
}

/// Outcome of a metric: value plus the grid point and diagonal errors it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricValue {
    /// `None` for a Δt_min that is never reached.
    pub value: Option<f64>,
    pub at_dt_orbits: Option<f64>,
    pub errors: [f64; 6],
    /// Diagonals ignored anywhere on the evaluated range.
    pub excluded: [bool; 6],
}

impl MetricValue {
    pub fn excluded_names(&self, repr: Representation) -> String {
        let names = element_names(repr);
        (0..6).filter(|&i| self.excluded[i]).map(|i| names[i]).collect::<Vec<_>>().join(";")
    }
}

impl ErrorCurve {
    pub fn new(representation: Representation) -> Self {
        ErrorCurve { representation, dt_orbits: Vec::new(), errors: Vec::new(), floored: Vec::new() }
    }

    pub fn push(&mut self, dt_orbits: f64, model: &ProcessNoiseCov, truth: &ProcessNoiseCov, floor: f64) {
        let (e, x) = fractional_std_errors(model, truth, floor);
        self.dt_orbits.push(dt_orbits);
        self.errors.push(e);
        self.floored.push(x);
    }

    fn mask(&self, idx: usize, windows: &[ExclusionWindow]) -> [bool; 6] {
        let mut m = self.floored[idx];
        for w in windows {
            if w.element < 6 && self.dt_orbits[idx] < w.below_orbits {
                m[w.element] = true;
            }
        }
        m
    }

    fn worst(&self, idx: usize, mask: &[bool; 6]) -> f64 {
        (0..6).filter(|&i| !mask[i]).map(|i| self.errors[idx][i]).fold(0.0, f64::max)
    }

    /// Largest included fractional std error over the whole grid; 0 for an empty curve.
    pub fn delta_max(&self) -> MetricValue {
        let mut best = MetricValue { value: Some(0.0), at_dt_orbits: None, errors: [0.0; 6], excluded: [false; 6] };
        for idx in 0..self.dt_orbits.len() {
            let mask = self.floored[idx];
            for (ex, m) in best.excluded.iter_mut().zip(mask) {
                *ex |= m;
            }
            let w = self.worst(idx, &mask);
            if best.at_dt_orbits.is_none() || w > best.value.unwrap_or(0.0) {
                best.value = Some(w);
                best.at_dt_orbits = Some(self.dt_orbits[idx]);
                best.errors = self.errors[idx];
            }
        }
        best
    }

    /// First grid point where an included diagonal's error reaches `threshold`.
    pub fn delta_t_min(&self, threshold: f64, windows: &[ExclusionWindow]) -> MetricValue {
        let mut excluded = [false; 6];
        for idx in 0..self.dt_orbits.len() {
            let mask = self.mask(idx, windows);
            for (ex, m) in excluded.iter_mut().zip(mask) {
                *ex |= m;
            }
            if self.worst(idx, &mask) >= threshold {
                let dt = self.dt_orbits[idx];
                return MetricValue { value: Some(dt), at_dt_orbits: Some(dt), errors: self.errors[idx], excluded };
            }
        }
        MetricValue {
            value: None,
            at_dt_orbits: self.dt_orbits.last().copied(),
            errors: self.errors.last().copied().unwrap_or([0.0; 6]),
            excluded,
        }
    }
}

fn build_curve<A, T>(analytic: A, truth: T, grid: &[f64], floor: f64) -> Result<ErrorCurve>
where
    A: Fn(f64) -> Result<ProcessNoiseCov>,
    T: Fn(f64) -> Result<ProcessNoiseCov>,
{
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) || grid[0] <= 0.0 {
        return Err(SncError::InvalidInput("grid must be non-empty, positive and strictly increasing".into()));
    }
    let mut curve: Option<ErrorCurve> = None;
    for &dt in grid {
        let (m, t) = (analytic(dt)?, truth(dt)?);
        curve.get_or_insert_with(|| ErrorCurve::new(t.representation)).push(dt, &m, &t, floor);
    }
    Ok(curve.expect("non-empty grid"))
}

/// Δt_min over `grid` for covariance functions of the interval length.
pub fn metric_delta_t_min<A, T>(analytic: A, truth: T, grid: &[f64], floor: f64, threshold: f64) -> Result<Option<f64>>
where
    A: Fn(f64) -> Result<ProcessNoiseCov>,
    T: Fn(f64) -> Result<ProcessNoiseCov>,
{
    Ok(build_curve(analytic, truth, grid, floor)?.delta_t_min(threshold, &[]).value)
}

/// δ_max over `grid` for covariance functions of the interval length.
pub fn metric_delta_max<A, T>(analytic: A, truth: T, grid: &[f64], floor: f64) -> Result<f64>
where
    A: Fn(f64) -> Result<ProcessNoiseCov>,
    T: Fn(f64) -> Result<ProcessNoiseCov>,
{
    Ok(build_curve(analytic, truth, grid, floor)?.delta_max().value.unwrap_or(0.0))
}

/// x where the piecewise-linear curve (xs, ys) first reaches `level` from below,
/// interpolated in log x when `log_x`.
pub fn first_crossing(xs: &[f64], ys: &[f64], level: f64, log_x: bool) -> Option<f64> {
    let n = xs.len().min(ys.len());
    if n == 0 {
        return None;
    }
    if ys[0] >= level {
        return Some(xs[0]);
    }
    for i in 1..n {
        if ys[i] >= level {
            let t = (level - ys[i - 1]) / (ys[i] - ys[i - 1]);
            return Some(if log_x {
                (xs[i - 1].ln() + t * (xs[i].ln() - xs[i - 1].ln())).exp()
            } else {
                xs[i - 1] + t * (xs[i] - xs[i - 1])
            });
        }
    }
    None
}
