//! Scenario configuration (JSON). Unknown keys are rejected everywhere.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::families::GrowthVerdict;
use crate::harness::probe::ProbeOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Symm,
    Sigma0,
    VerifyExample,
    ResidualScan,
    RigidityProbe,
    Growth,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        ScenarioKind::Symm,
        ScenarioKind::Sigma0,
        ScenarioKind::VerifyExample,
        ScenarioKind::ResidualScan,
        ScenarioKind::RigidityProbe,
        ScenarioKind::Growth,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Symm => "symm",
            ScenarioKind::Sigma0 => "sigma0",
            ScenarioKind::VerifyExample => "verify-example",
            ScenarioKind::ResidualScan => "residual-scan",
            ScenarioKind::RigidityProbe => "rigidity-probe",
            ScenarioKind::Growth => "growth",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown scenario kind `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinName {
    Eq3,
    Eq4,
    TheoremA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileName {
    Cosine,
    Step,
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleSpec {
    pub n: usize,
    pub q: f64,
    #[serde(default = "default_profile")]
    pub profile: ProfileName,
    /// Force the quadrature path even for the cosine profile.
    #[serde(default)]
    pub quadrature: bool,
}

fn default_profile() -> ProfileName {
    ProfileName::Cosine
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinSpec {
    pub name: BuiltinName,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantOperatorSpec {
    /// `a₁ … aₙ`; zeros mark inactive indices.
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum OperatorSpec {
    Builtin(BuiltinSpec),
    Example(ExampleSpec),
    Constant(ConstantOperatorSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimSpec {
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineSpec {
    pub b: Vec<f64>,
    #[serde(default)]
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticSpec {
    pub matrix: Vec<Vec<f64>>,
    #[serde(default)]
    pub b: Option<Vec<f64>>,
    #[serde(default)]
    pub a: f64,
    /// Rescale so that `det Hess f = 1`.
    #[serde(default)]
    pub normalize: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldSpec {
    SqrtOnePlusNorm2(DimSpec),
    HalfNorm2(DimSpec),
    Affine(AffineSpec),
    Quadratic(QuadraticSpec),
    Example(ExampleSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SamplingSpec {
    Grid(GridSpec),
    Random(RandomSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Absolute bound on operator residuals.
    pub residual: f64,
    /// Max-abs deviation of finite-difference Hessians.
    pub fd: f64,
    pub fd_step: f64,
    /// Relative PSD / inequality slack.
    pub psd: f64,
    /// `|F(σ₀) − 1|`.
    pub root: f64,
    /// Coefficient pinching tolerance.
    pub condition_q: f64,
    /// Loewner tolerance for the probe.
    pub probe: f64,
    /// Relative agreement of independent cross-checks.
    pub cross_check: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-10,
            fd: 1e-5,
            fd_step: 1e-4,
            psd: 1e-12,
            root: 1e-12,
            condition_q: 1e-12,
            probe: 1e-8,
            cross_check: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    #[serde(default = "default_probe_grid")]
    pub grid_points: usize,
    /// Expected outcome; when absent an inconclusive probe is `skipped`.
    #[serde(default)]
    pub expect: Option<ProbeOutcome>,
}

fn default_eps() -> Vec<f64> {
    vec![0.5, 0.1, 0.02]
}
fn default_half_width() -> f64 {
    50.0
}
fn default_probe_grid() -> usize {
    41
}

impl Default for ProbeSpec {
    fn default() -> Self {
        ProbeSpec {
            eps: default_eps(),
            half_width: default_half_width(),
            grid_points: default_probe_grid(),
            expect: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthSpec {
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    #[serde(default)]
    pub directions: Option<usize>,
    #[serde(default)]
    pub expect: Option<GrowthVerdict>,
}

pub fn default_radii() -> Vec<f64> {
    vec![10.0, 20.0, 40.0, 80.0, 160.0]
}

impl Default for GrowthSpec {
    fn default() -> Self {
        GrowthSpec {
            radii: default_radii(),
            directions: None,
            expect: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    #[serde(default = "default_oracle_grid")]
    pub grid_points: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_oracle_grid() -> usize {
    64
}
fn default_restarts() -> usize {
    256
}

impl Default for OracleSpec {
    fn default() -> Self {
        OracleSpec {
            grid_points: default_oracle_grid(),
            restarts: default_restarts(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub report: Option<String>,
    #[serde(default)]
    pub csv: Option<String>,
}

/// One scenario. Absent sections take per-kind defaults when resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub kind: Option<ScenarioKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSpec>,
    #[serde(default)]
    pub output: OutputSpec,
    /// Seed for sections that are defaulted rather than given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn new(kind: ScenarioKind) -> Self {
        Scenario {
            kind: Some(kind),
            operator: None,
            field: None,
            sampling: None,
            matrix: None,
            tolerances: Tolerances::default(),
            probe: None,
            growth: None,
            oracle: None,
            output: OutputSpec::default(),
            seed: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Replaces every seed the scenario uses.
    pub fn set_seed(&mut self, seed: u64) {
        self.seed = Some(seed);
        if let Some(SamplingSpec::Random(r)) = &mut self.sampling {
            r.seed = seed;
        }
        self.oracle.get_or_insert_with(OracleSpec::default).seed = seed;
    }

    /// Overrides the tolerance that gates this kind's main check.
    pub fn set_primary_tolerance(&mut self, tol: f64) {
        let t = &mut self.tolerances;
        match self.kind {
            Some(ScenarioKind::Symm) => t.psd = tol,
            Some(ScenarioKind::Sigma0) => t.root = tol,
            Some(ScenarioKind::VerifyExample) | Some(ScenarioKind::ResidualScan) => t.residual = tol,
            Some(ScenarioKind::RigidityProbe) => t.probe = tol,
            Some(ScenarioKind::Growth) | None => t.cross_check = tol,
        }
    }
}
