//! Scenario runner behind the `minlab` binary.
//!
//! A scenario draws seeded samples, evaluates named sub-checks and collects
//! them into a [`ResidualReport`]. Sample `i` of check group `g` always uses
//! RNG stream `(g << 40) + i` of the configured seed, so reports do not depend
//! on the number of worker threads.

mod congruence;
mod report;
mod scenarios;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

pub use congruence::{clifford_det_witness, product_pf_witness};
pub use minlab_core::parametric::DerivativeMode;
pub use report::{CheckStats, Criterion, ResidualReport, Status};

/// Default number of samples per check.
pub const DEFAULT_SAMPLES: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Product,
    Clifford,
    GeneralizedClifford,
    DetCone,
    PfaffianCone,
    HelicoidalClifford,
    HelicoidalDet,
    HelicoidalPfaffian,
    Theorem2Crosscheck,
    Congruence,
    PfaffianIdentities,
    NonminimalControl,
}

impl Scenario {
    pub const ALL: [Scenario; 12] = [
        Self::Product,
        Self::Clifford,
        Self::GeneralizedClifford,
        Self::DetCone,
        Self::PfaffianCone,
        Self::HelicoidalClifford,
        Self::HelicoidalDet,
        Self::HelicoidalPfaffian,
        Self::Theorem2Crosscheck,
        Self::Congruence,
        Self::PfaffianIdentities,
        Self::NonminimalControl,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Product => "product",
            Self::Clifford => "clifford",
            Self::GeneralizedClifford => "generalized-clifford",
            Self::DetCone => "det-cone",
            Self::PfaffianCone => "pfaffian-cone",
            Self::HelicoidalClifford => "helicoidal-clifford",
            Self::HelicoidalDet => "helicoidal-det",
            Self::HelicoidalPfaffian => "helicoidal-pfaffian",
            Self::Theorem2Crosscheck => "theorem2-crosscheck",
            Self::Congruence => "congruence",
            Self::PfaffianIdentities => "pfaffian-identities",
            Self::NonminimalControl => "nonminimal-control",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Self::Product => "scaled products of minimal submanifolds of unit spheres are minimal",
            Self::Clifford => "S^1(1/sqrt2) x S^1(1/sqrt2) is minimal in S^3",
            Self::GeneralizedClifford => "S^p(sqrt(p/(p+q))) x S^q(sqrt(q/(p+q))) is minimal in S^(p+q+1) [--p --q]",
            Self::DetCone => "{det X = 0} meets the unit sphere of n x n matrices minimally [--n]",
            Self::PfaffianCone => "{pf X = 0} meets the unit sphere of skew 2n x 2n matrices minimally [--n]",
            Self::HelicoidalClifford => "the conjugated block swap fixes each Clifford torus point and swaps sides [--p]",
            Self::HelicoidalDet => "Y -> AY with a Householder A is helicoidal on the determinant cone [--n]",
            Self::HelicoidalPfaffian => "Y -> B^T Y B with a kernel swap B is helicoidal on the Pfaffian cone [--n]",
            Self::Theorem2Crosscheck => "every verified helicoidal point has zero minimality residual",
            Self::Congruence => "orthogonal witnesses carry Clifford tori into the det 2x2 and pf 4x4 cones",
            Self::PfaffianIdentities => "pf^2 = det, pf(B^T A B) = det B pf A, Pfaffian and canonical-form agreement",
            Self::NonminimalControl => "non-minimal controls must show residual >= 0.1",
        }
    }

    fn uses_mode(&self) -> bool {
        matches!(self, Self::Product | Self::Clifford | Self::GeneralizedClifford | Self::NonminimalControl)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| ConfigError::UnknownScenario(s.to_string()))
    }
}

/// Configuration problems; all map to exit code 2 before any computation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown scenario '{0}' (run `minlab list`)")]
    UnknownScenario(String),
    #[error("unknown derivative mode '{0}' (expected ad or fd)")]
    UnknownMode(String),
    #[error("--{flag} does not apply to scenario {scenario}")]
    Inapplicable { flag: &'static str, scenario: Scenario },
    #[error("--{flag} = {value} is outside {range} for scenario {scenario}")]
    OutOfRange { flag: &'static str, value: usize, range: &'static str, scenario: Scenario },
    #[error("samples must be at least 1")]
    NoSamples,
    #[error("tol must be positive and finite, got {0}")]
    BadTolerance(f64),
}

pub fn parse_mode(s: &str) -> Result<DerivativeMode, ConfigError> {
    match s {
        "ad" => Ok(DerivativeMode::Ad),
        "fd" => Ok(DerivativeMode::Fd),
        other => Err(ConfigError::UnknownMode(other.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub seed: u64,
    pub samples: usize,
    /// Residual tolerance; `None` selects the scenario default.
    pub tol: Option<f64>,
    pub derivative_mode: DerivativeMode,
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub csv_path: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            seed: 0,
            samples: DEFAULT_SAMPLES,
            tol: None,
            derivative_mode: DerivativeMode::Ad,
            n: None,
            p: None,
            q: None,
            output_path: None,
            csv_path: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_p(mut self, p: usize) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_q(mut self, q: usize) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.derivative_mode = mode;
        self
    }

    /// Where the JSON report goes: `--out`, else `minlab-<scenario>.json`.
    pub fn report_path(&self) -> PathBuf {
        self.output_path.clone().unwrap_or_else(|| PathBuf::from(format!("minlab-{}.json", self.scenario)))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        use Scenario::*;
        if self.samples == 0 {
            return Err(ConfigError::NoSamples);
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(ConfigError::BadTolerance(t));
            }
        }
        let s = self.scenario;
        let check = |flag: &'static str, value: Option<usize>, allowed: Option<(usize, usize, &'static str)>| match (value, allowed) {
            (None, _) => Ok(()),
            (Some(_), None) => Err(ConfigError::Inapplicable { flag, scenario: s }),
            (Some(v), Some((lo, hi, range))) if v < lo || v > hi => {
                Err(ConfigError::OutOfRange { flag, value: v, range, scenario: s })
            }
            _ => Ok(()),
        };
        let n_range = match s {
            DetCone | HelicoidalDet => Some((2, 10, "[2, 10]")),
            PfaffianCone | HelicoidalPfaffian => Some((2, 4, "[2, 4]")),
            _ => None,
        };
        let p_range = match s {
            GeneralizedClifford | HelicoidalClifford => Some((1, 8, "[1, 8]")),
            _ => None,
        };
        let q_range = match s {
            GeneralizedClifford => Some((1, 8, "[1, 8]")),
            _ => None,
        };
        check("n", self.n, n_range)?;
        check("p", self.p, p_range)?;
        check("q", self.q, q_range)
    }

    /// Residual tolerance after defaults: the engine noise floor of each
    /// scenario, relaxed to `1e-4` for finite-difference jets.
    pub fn effective_tol(&self) -> f64 {
        if let Some(t) = self.tol {
            return t;
        }
        if self.scenario.uses_mode() && self.derivative_mode == DerivativeMode::Fd {
            return 1e-4;
        }
        match self.scenario {
            Scenario::DetCone if self.n.unwrap_or(3) == 2 => 1e-12,
            Scenario::DetCone => 1e-8,
            Scenario::PfaffianCone => 1e-7,
            Scenario::Congruence => 1e-12,
            _ => 1e-6,
        }
    }
}

/// Catalog text, one scenario per line.
pub fn list_scenarios() -> String {
    Scenario::ALL.iter().map(|s| format!("{:<22} {}\n", s.name(), s.description())).collect()
}

/// Validates `config` and runs its scenario. Sampling exhaustion is reported
/// inside the returned report (status `sampling-exhausted`, exit code 3).
pub fn run(config: &ScenarioConfig) -> Result<ResidualReport, ConfigError> {
    config.validate()?;
    let tol = config.effective_tol();
    let (checks, error) = match scenarios::execute(config, tol) {
        Ok(checks) => (checks, None),
        Err(scenarios::Aborted(msg)) => (Vec::new(), Some(msg)),
    };
    Ok(ResidualReport {
        scenario: config.scenario.name().to_string(),
        params: scenarios::params(config),
        seed: config.seed,
        samples: config.samples,
        tol,
        mode: config.derivative_mode,
        checks,
        error,
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
    })
}

/// Writes the JSON report and, if requested, the CSV export.
pub fn write_outputs(report: &ResidualReport, config: &ScenarioConfig) -> std::io::Result<PathBuf> {
    let path = config.report_path();
    std::fs::write(&path, report.to_json())?;
    if let Some(csv) = &config.csv_path {
        std::fs::write(csv, report.to_csv())?;
    }
    Ok(path)
}
