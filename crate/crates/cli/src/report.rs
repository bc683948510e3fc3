//! Residual reports: per-check statistics, JSON with a fixed key order and
//! 17 significant digits, and per-sample CSV.

use std::fmt::Write as _;

use minlab_core::parametric::DerivativeMode;

/// Acceptance rule applied to every sample of a check. `NaN` never passes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    AtMost(f64),
    AtLeast(f64),
    Above(f64),
}

impl Criterion {
    pub fn holds(&self, v: f64) -> bool {
        match *self {
            Self::AtMost(t) => v <= t,
            Self::AtLeast(t) => v >= t,
            Self::Above(t) => v > t,
        }
    }

    pub fn operator(&self) -> &'static str {
        match self {
            Self::AtMost(_) => "<=",
            Self::AtLeast(_) => ">=",
            Self::Above(_) => ">",
        }
    }

    pub fn threshold(&self) -> f64 {
        match *self {
            Self::AtMost(t) | Self::AtLeast(t) | Self::Above(t) => t,
        }
    }
}

/// One named sub-check and the statistics of its samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckStats {
    pub name: String,
    pub criterion: Criterion,
    /// Values are minimality residuals (they feed `max_residual`).
    pub residual: bool,
    pub values: Vec<f64>,
    pub failures: usize,
    pub max: f64,
    pub min: f64,
    pub mean: f64,
}

impl CheckStats {
    pub fn new(name: impl Into<String>, criterion: Criterion, residual: bool, values: Vec<f64>) -> Self {
        let failures = values.iter().filter(|v| !criterion.holds(**v)).count();
        let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        let max = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = finite.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = if finite.is_empty() { f64::NAN } else { finite.iter().sum::<f64>() / finite.len() as f64 };
        Self { name: name.into(), criterion, residual, values, failures, max, min, mean }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} {:<40} n={:<5} max={:.3e} mean={:.3e} (require {} {:.1e}, {} failed)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.values.len(),
            self.max,
            self.mean,
            self.criterion.operator(),
            self.criterion.threshold(),
            self.failures
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    SamplingExhausted,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::SamplingExhausted => "sampling-exhausted",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Pass => 0,
            Self::Fail => 1,
            Self::SamplingExhausted => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub scenario: String,
    /// Scenario parameters such as `n`, `p`, `q`, in display order.
    pub params: Vec<(&'static str, usize)>,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub mode: DerivativeMode,
    pub checks: Vec<CheckStats>,
    pub error: Option<String>,
    /// Seconds since the Unix epoch; the only field allowed to differ between
    /// identical runs.
    pub timestamp: u64,
}

impl ResidualReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.failures).sum()
    }

    fn residual_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.checks.iter().filter(|c| c.residual).flat_map(|c| c.values.iter().copied()).filter(|v| v.is_finite())
    }

    pub fn max_residual(&self) -> f64 {
        self.residual_values().fold(0.0, f64::max)
    }

    pub fn mean_residual(&self) -> f64 {
        let (sum, count) = self.residual_values().fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    }

    pub fn status(&self) -> Status {
        if self.error.is_some() {
            Status::SamplingExhausted
        } else if self.failures() == 0 {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn verdict(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn exit_code(&self) -> i32 {
        self.status().exit_code()
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self.checks.iter().map(CheckStats::summary_line).collect();
        if let Some(e) = &self.error {
            lines.push(format!("ABORT {e}"));
        }
        lines.push(format!(
            "{} {} seed={} samples={} max_residual={:.3e} failures={}",
            self.status().as_str().to_uppercase(),
            self.scenario,
            self.seed,
            self.samples,
            self.max_residual(),
            self.failures()
        ));
        lines
    }

    /// Pretty-printed JSON, one key per line; `timestamp` is the last key.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        let mut field = |key: &str, value: String| {
            let _ = writeln!(out, "  {}: {},", quote(key), value);
        };
        field("scenario", quote(&self.scenario));
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{}: {v}", quote(k))).collect();
        field("params", format!("{{{}}}", params.join(", ")));
        field("seed", self.seed.to_string());
        field("samples", self.samples.to_string());
        field("tol", number(self.tol));
        field("derivative_mode", quote(mode_name(self.mode)));
        field("verdict", quote(if self.verdict() { "pass" } else { "fail" }));
        field("status", quote(self.status().as_str()));
        field("error", self.error.as_deref().map_or_else(|| "null".to_string(), quote));
        field("max_residual", number(self.max_residual()));
        field("mean_residual", number(self.mean_residual()));
        field("failures", self.failures().to_string());
        let checks: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                format!(
                    "    {{\"name\": {}, \"criterion\": {}, \"threshold\": {}, \"residual\": {}, \"count\": {}, \"failures\": {}, \"max\": {}, \"mean\": {}, \"min\": {}, \"pass\": {}}}",
                    quote(&c.name),
                    quote(c.criterion.operator()),
                    number(c.criterion.threshold()),
                    c.residual,
                    c.values.len(),
                    c.failures,
                    number(c.max),
                    number(c.mean),
                    number(c.min),
                    c.passed()
                )
            })
            .collect();
        let checks = if checks.is_empty() { "[]".to_string() } else { format!("[\n{}\n  ]", checks.join(",\n")) };
        field("checks", checks);
        let _ = writeln!(out, "  \"timestamp\": {}", self.timestamp);
        out.push_str("}\n");
        out
    }

    /// `check,index,value` rows for every sample of every check.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,index,value\n");
        for c in &self.checks {
            for (i, v) in c.values.iter().enumerate() {
                let _ = writeln!(out, "{},{i},{:.16e}", c.name, v);
            }
        }
        out
    }
}

pub fn mode_name(mode: DerivativeMode) -> &'static str {
    match mode {
        DerivativeMode::Ad => "ad",
        DerivativeMode::Fd => "fd",
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// 17 significant digits; non-finite values become `null`.
fn number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(checks: Vec<CheckStats>) -> ResidualReport {
        ResidualReport {
            scenario: "det-cone".into(),
            params: vec![("n", 3)],
            seed: 7,
            samples: 3,
            tol: 1e-8,
            mode: DerivativeMode::Ad,
            checks,
            error: None,
            timestamp: 1,
        }
    }

    #[test]
    fn nan_samples_fail_every_criterion() {
        let c = CheckStats::new("r", Criterion::AtMost(1.0), true, vec![0.5, f64::NAN]);
        assert_eq!(c.failures, 1);
        assert_eq!(c.max, 0.5);
        let c = CheckStats::new("r", Criterion::AtLeast(1.0), false, vec![f64::NAN]);
        assert_eq!(c.failures, 1);
    }

    #[test]
    fn verdict_and_exit_codes() {
        let ok = report(vec![CheckStats::new("residual", Criterion::AtMost(1e-8), true, vec![1e-12, 2e-12])]);
        assert!(ok.verdict());
        assert_eq!(ok.exit_code(), 0);
        assert_eq!(ok.max_residual(), 2e-12);
        let bad = report(vec![CheckStats::new("residual", Criterion::AtMost(1e-8), true, vec![1e-6])]);
        assert_eq!(bad.exit_code(), 1);
        let mut aborted = ok.clone();
        aborted.error = Some("sampling exhausted".into());
        assert_eq!(aborted.exit_code(), 3);
        assert!(!aborted.verdict());
    }

    #[test]
    fn json_is_valid_with_fixed_key_order() {
        let r = report(vec![CheckStats::new("residual", Criterion::AtMost(1e-8), true, vec![0.1, 0.2])]);
        let json = r.to_json();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["params"]["n"], 3);
        assert_eq!(parsed["checks"][0]["failures"], 2);
        let keys: Vec<&str> = json.lines().filter_map(|l| l.trim().strip_prefix('"')?.split('"').next()).collect();
        assert_eq!(keys.first(), Some(&"scenario"));
        assert_eq!(keys.last(), Some(&"timestamp"));
        assert!(json.contains("\"max_residual\": 2.0000000000000001e-1"));
        assert!(r.to_csv().lines().nth(1).unwrap().starts_with("residual,0,1.0000000000000001e-1"));
    }
}
