use crate::absolute::{CartesianModel, EquinoctialModel, NodeSpacing, Psd3};
use crate::oracle::IntegratorConfig;
use crate::orbit::{ClassicalElements, EquinoctialState, GravParam};
use crate::{Result, SncError};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::str::FromStr;

/// Propagation-interval grid in orbit periods: step, 2·step, …, up to `max_orbits`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DtGrid {
    pub step_orbits: f64,
    pub max_orbits: f64,
}

impl Default for DtGrid {
    fn default() -> Self {
        DtGrid { step_orbits: 0.002, max_orbits: 1.0 }
    }
}

impl DtGrid {
    pub fn validate(&self) -> Result<()> {
        if self.step_orbits > 0.0 && self.max_orbits >= self.step_orbits && self.max_orbits.is_finite() {
            Ok(())
        } else {
            Err(SncError::InvalidInput(format!("invalid dt grid {self:?}")))
        }
    }

    /// Grid points in orbits; strictly increasing.
    pub fn points(&self) -> Vec<f64> {
        let count = (self.max_orbits / self.step_orbits + 1e-9).floor() as usize;
        (1..=count).map(|i| i as f64 * self.step_orbits).collect()
    }
}

/// Shape of the RTN PSD used in the absolute sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsdScenario {
    /// Q̃_r = Q̃_t = Q̃_n = Q̃*.
    Equal,
    /// Q̃_t = 10 Q̃*, the other axes Q̃*.
    Tdom,
}

impl PsdScenario {
    pub fn psd(self, q_star: f64) -> Result<Psd3> {
        match self {
            PsdScenario::Equal => Psd3::isotropic(q_star),
            PsdScenario::Tdom => Psd3::new(q_star, 10.0 * q_star, q_star),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PsdScenario::Equal => "equal",
            PsdScenario::Tdom => "tdom",
        }
    }
}

impl FromStr for PsdScenario {
    type Err = SncError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal" => Ok(PsdScenario::Equal),
            "tdom" => Ok(PsdScenario::Tdom),
            _ => Err(SncError::InvalidInput(format!("unknown PSD scenario '{s}' (expected equal or tdom)"))),
        }
    }
}

fn parse_sub(s: &str, prefix: &str) -> Option<Result<usize>> {
    let rest = s.strip_prefix(prefix)?;
    Some(
        rest.parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| SncError::InvalidInput(format!("bad subinterval count in '{s}'"))),
    )
}

/// Absolute-state model, written as a short name: `kinematic`, `hcw`,
/// `cartesian-sub<N>`, `small-dt`, `circular`, `equinoctial-sub<N>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AbsModel {
    Cartesian(CartesianModel),
    Equinoctial(EquinoctialModel),
}

impl AbsModel {
    pub fn is_equinoctial(&self) -> bool {
        matches!(self, AbsModel::Equinoctial(_))
    }

    /// Same model with any subinterval count replaced by `n`.
    pub fn with_subintervals(self, n: usize) -> Self {
        match self {
            AbsModel::Cartesian(CartesianModel::Subintervals { spacing, .. }) => {
                AbsModel::Cartesian(CartesianModel::Subintervals { count: n, spacing })
            }
            AbsModel::Equinoctial(EquinoctialModel::Subintervals { spacing, .. }) => {
                AbsModel::Equinoctial(EquinoctialModel::Subintervals { count: n, spacing })
            }
            other => other,
        }
    }
}

impl fmt::Display for AbsModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsModel::Cartesian(CartesianModel::Kinematic) => write!(f, "kinematic"),
            AbsModel::Cartesian(CartesianModel::Hcw) => write!(f, "hcw"),
            AbsModel::Cartesian(CartesianModel::Subintervals { count, .. }) => write!(f, "cartesian-sub{count}"),
            AbsModel::Equinoctial(EquinoctialModel::SmallDt) => write!(f, "small-dt"),
            AbsModel::Equinoctial(EquinoctialModel::Circular) => write!(f, "circular"),
            AbsModel::Equinoctial(EquinoctialModel::Subintervals { count, .. }) => write!(f, "equinoctial-sub{count}"),
        }
    }
}

impl FromStr for AbsModel {
    type Err = SncError;
    fn from_str(s: &str) -> Result<Self> {
        let spacing = NodeSpacing::Even;
        match s {
            "kinematic" => return Ok(AbsModel::Cartesian(CartesianModel::Kinematic)),
            "hcw" => return Ok(AbsModel::Cartesian(CartesianModel::Hcw)),
            "small-dt" => return Ok(AbsModel::Equinoctial(EquinoctialModel::SmallDt)),
            "circular" => return Ok(AbsModel::Equinoctial(EquinoctialModel::Circular)),
            _ => {}
        }
        if let Some(n) = parse_sub(s, "cartesian-sub") {
            return Ok(AbsModel::Cartesian(CartesianModel::Subintervals { count: n?, spacing }));
        }
        if let Some(n) = parse_sub(s, "equinoctial-sub") {
            return Ok(AbsModel::Equinoctial(EquinoctialModel::Subintervals { count: n?, spacing }));
        }
        Err(SncError::InvalidInput(format!("unknown absolute model '{s}'")))
    }
}

impl TryFrom<String> for AbsModel {
    type Error = SncError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AbsModel> for String {
    fn from(m: AbsModel) -> String {
        m.to_string()
    }
}

/// Relative-state model of the separation sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelModel {
    SmallSepCartesian,
    SmallSepEquinoctial,
    LargeSepCartesian,
    LargeSepEquinoctial,
}

impl RelModel {
    pub const ALL: [RelModel; 4] = [
        RelModel::SmallSepCartesian,
        RelModel::SmallSepEquinoctial,
        RelModel::LargeSepCartesian,
        RelModel::LargeSepEquinoctial,
    ];

    pub fn is_equinoctial(self) -> bool {
        matches!(self, RelModel::SmallSepEquinoctial | RelModel::LargeSepEquinoctial)
    }

    pub fn name(self) -> &'static str {
        match self {
            RelModel::SmallSepCartesian => "small-sep-cartesian",
            RelModel::SmallSepEquinoctial => "small-sep-equinoctial",
            RelModel::LargeSepCartesian => "large-sep-cartesian",
            RelModel::LargeSepEquinoctial => "large-sep-equinoctial",
        }
    }
}

impl fmt::Display for RelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelModel {
    type Err = SncError;
    fn from_str(s: &str) -> Result<Self> {
        RelModel::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| SncError::InvalidInput(format!("unknown relative model '{s}'")))
    }
}

/// Element indices excluded from Δt_min below a given interval length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExclusionWindow {
    /// Diagonal index, 0-based.
    pub element: usize,
    pub below_orbits: f64,
}

/// Eccentricity sweep of the absolute models about a periapsis-anchored orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AbsoluteSweepConfig {
    pub periapsis_radius_m: f64,
    pub inclination_deg: f64,
    pub raan_deg: f64,
    pub mean_longitude_deg: f64,
    pub eccentricities: Vec<f64>,
    /// Q̃*, m²/s³.
    pub psd_star: f64,
    pub scenarios: Vec<PsdScenario>,
    pub models: Vec<AbsModel>,
    /// Windows applied to the Δt_min metric of equinoctial models.
    pub equinoctial_dt_min_windows: Vec<ExclusionWindow>,
}

impl Default for AbsoluteSweepConfig {
    fn default() -> Self {
        let names = [
            "kinematic",
            "hcw",
            "cartesian-sub4",
            "cartesian-sub8",
            "small-dt",
            "circular",
            "equinoctial-sub4",
            "equinoctial-sub8",
        ];
        AbsoluteSweepConfig {
            periapsis_radius_m: 6.9e6,
            inclination_deg: 45.0,
            raan_deg: 45.0,
            mean_longitude_deg: 90.0,
            eccentricities: (0..=50).map(|i| i as f64 * 0.01).collect(),
            psd_star: 1e-12,
            scenarios: vec![PsdScenario::Equal, PsdScenario::Tdom],
            models: names.iter().map(|n| n.parse().unwrap()).collect(),
            // h is near zero for the first 0.13 orbits when starting at l = 90°
            equinoctial_dt_min_windows: vec![ExclusionWindow { element: 3, below_orbits: 0.13 }],
        }
    }
}

impl AbsoluteSweepConfig {
    /// Initial elements for eccentricity `e`: periapsis at the start, a = r_p/(1 − e).
    pub fn initial_state(&self, e: f64) -> Result<EquinoctialState> {
        if !(0.0..1.0).contains(&e) {
            return Err(SncError::InvalidInput(format!("eccentricity {e} outside [0, 1)")));
        }
        let lon = self.mean_longitude_deg.to_radians();
        let raan = self.raan_deg.to_radians();
        crate::orbit::classical_to_equinoctial(&ClassicalElements {
            a: self.periapsis_radius_m / (1.0 - e),
            e,
            i: self.inclination_deg.to_radians(),
            raan,
            argp: lon - raan,
            mean_anomaly: 0.0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(SncError::InvalidInput("absolute sweep has no models".into()));
        }
        if self.eccentricities.is_empty() || self.scenarios.is_empty() {
            return Err(SncError::InvalidInput("absolute sweep needs eccentricities and PSD scenarios".into()));
        }
        if !(self.psd_star > 0.0) {
            return Err(SncError::InvalidInput("psd_star must be positive".into()));
        }
        for &e in &self.eccentricities {
            self.initial_state(e)?;
        }
        Ok(())
    }
}

/// Along-track separation sweep of the relative models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RelativeSweepConfig {
    /// Chief (a [m], f, g, h, k, λ [deg]).
    pub chief: [f64; 6],
    /// Initial deputy mean-longitude offsets, rad.
    pub separations_rad: Vec<f64>,
    pub psd_star: f64,
    /// Cross PSD = amplitude·exp(−δλ₀/scale)·Q̃.
    pub correlation_amplitude: f64,
    pub correlation_scale_rad: f64,
    pub models: Vec<RelModel>,
}

impl Default for RelativeSweepConfig {
    fn default() -> Self {
        let count = 40;
        RelativeSweepConfig {
            chief: [6.9e6, 0.0, 1e-3, 0.2929, 0.2929, 135.0],
            separations_rad: (0..count).map(|i| 10f64.powf(-5.0 + 5.0 * i as f64 / (count - 1) as f64)).collect(),
            psd_star: 1e-12,
            correlation_amplitude: 0.9,
            correlation_scale_rad: 1e-3,
            models: RelModel::ALL.to_vec(),
        }
    }
}

impl RelativeSweepConfig {
    pub fn chief_state(&self) -> Result<EquinoctialState> {
        let c = self.chief;
        EquinoctialState::new(c[0], c[1], c[2], c[3], c[4], c[5].to_radians(), 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        self.chief_state()?;
        if self.models.is_empty() || self.separations_rad.is_empty() {
            return Err(SncError::InvalidInput("relative sweep needs models and separations".into()));
        }
        if !(self.psd_star > 0.0 && self.correlation_scale_rad > 0.0) {
            return Err(SncError::InvalidInput("psd_star and correlation scale must be positive".into()));
        }
        Ok(())
    }
}

/// Everything a sweep run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub mu: GravParam,
    pub grid: DtGrid,
    /// Simpson panels between consecutive grid points of the reference truth.
    pub panels_per_step: usize,
    pub integrator: IntegratorConfig,
    /// Fractional standard deviation error threshold for Δt_min.
    pub threshold: f64,
    /// Truth std below this fraction of the largest same-unit std is excluded.
    pub relative_floor: f64,
    pub absolute: AbsoluteSweepConfig,
    pub relative: RelativeSweepConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            mu: GravParam::EARTH,
            grid: DtGrid::default(),
            panels_per_step: 8,
            integrator: IntegratorConfig::default(),
            threshold: 0.1,
            relative_floor: 1e-6,
            absolute: AbsoluteSweepConfig::default(),
            relative: RelativeSweepConfig::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| SncError::Format(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| SncError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.integrator.validate()?;
        crate::oracle::QuadratureConfig { panels: self.panels_per_step }.validate()?;
        if !(self.threshold > 0.0 && self.relative_floor >= 0.0) {
            return Err(SncError::InvalidInput("threshold must be positive and floor non-negative".into()));
        }
        self.absolute.validate()?;
        self.relative.validate()
    }

    /// SHA-256 of the compact JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_json() {
        let cfg = ScenarioConfig::default();
        cfg.validate().unwrap();
        let back = ScenarioConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
    }

    #[test]
    fn partial_json_uses_defaults() {
        let cfg = ScenarioConfig::from_json(r#"{"threshold": 0.2, "absolute": {"models": ["hcw", "equinoctial-sub3"]}}"#)
            .unwrap();
        assert_eq!(cfg.threshold, 0.2);
        assert_eq!(cfg.absolute.models.len(), 2);
        assert_eq!(cfg.absolute.models[1].to_string(), "equinoctial-sub3");
        assert_eq!(cfg.absolute.eccentricities.len(), 51);
    }

    #[test]
    fn model_names_round_trip() {
        for name in ["kinematic", "hcw", "cartesian-sub4", "small-dt", "circular", "equinoctial-sub8"] {
            assert_eq!(name.parse::<AbsModel>().unwrap().to_string(), name);
        }
        assert!("cartesian-sub0".parse::<AbsModel>().is_err());
        assert!("bogus".parse::<AbsModel>().is_err());
        for m in RelModel::ALL {
            assert_eq!(m.name().parse::<RelModel>().unwrap(), m);
        }
    }

    #[test]
    fn grid_points() {
        let g = DtGrid::default().points();
        assert_eq!(g.len(), 500);
        assert!((g[499] - 1.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn periapsis_anchored_state() {
        let cfg = AbsoluteSweepConfig::default();
        let eq = cfg.initial_state(0.2).unwrap();
        assert!((eq.a * 0.8 - 6.9e6).abs() < 1e-6);
        assert!(eq.f.abs() < 1e-15);
        assert!((eq.g - 0.2).abs() < 1e-15);
        assert!((eq.h - 0.29289).abs() < 1e-5 && (eq.k - 0.29289).abs() < 1e-5);
        assert!((eq.lambda - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
