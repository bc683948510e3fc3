mod identities;
mod implicit;
mod parametric;
mod symmetry;

use minlab_core::rng::{stream, SampleRng};
use minlab_core::Error;
use rayon::prelude::*;

use crate::report::CheckStats;
use crate::{Scenario, ScenarioConfig};

/// A scenario stopped early because a sampler ran out of attempts.
#[derive(Debug)]
pub(crate) struct Aborted(pub String);

/// Draws per-sample values in parallel. Sample `i` of group `g` uses stream
/// `(g << 40) + i`, so results are independent of scheduling.
pub(crate) struct Sampler {
    seed: u64,
}

impl Sampler {
    /// Evaluates `f` on `count` samples, each producing `arity` values.
    /// Samples that fail with an error other than sampling exhaustion record
    /// `NaN`, which fails every criterion.
    pub fn columns<F>(&self, group: u64, count: usize, arity: usize, f: F) -> Result<Vec<Vec<f64>>, Aborted>
    where
        F: Fn(usize, &mut SampleRng) -> minlab_core::Result<Vec<f64>> + Sync,
    {
        let rows: Vec<_> = (0..count)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream(self.seed, (group << 40) + i as u64);
                f(i, &mut rng)
            })
            .collect();
        let mut columns = vec![Vec::with_capacity(count); arity];
        for row in rows {
            match row {
                Ok(values) => {
                    assert_eq!(values.len(), arity, "sample produced the wrong number of values");
                    columns.iter_mut().zip(values).for_each(|(c, v)| c.push(v));
                }
                Err(e @ Error::SamplingExhausted { .. }) => return Err(Aborted(e.to_string())),
                Err(_) => columns.iter_mut().for_each(|c| c.push(f64::NAN)),
            }
        }
        Ok(columns)
    }

    pub fn column<F>(&self, group: u64, count: usize, f: F) -> Result<Vec<f64>, Aborted>
    where
        F: Fn(usize, &mut SampleRng) -> minlab_core::Result<f64> + Sync,
    {
        Ok(self.columns(group, count, 1, |i, rng| f(i, rng).map(|v| vec![v]))?.remove(0))
    }
}

pub(crate) fn bool_value(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len().max(1) as f64
}

pub(crate) fn execute(config: &ScenarioConfig, tol: f64) -> Result<Vec<CheckStats>, Aborted> {
    let sampler = Sampler { seed: config.seed };
    let samples = config.samples;
    let mode = config.derivative_mode;
    match config.scenario {
        Scenario::Product => parametric::product(&sampler, samples, mode, tol),
        Scenario::Clifford => parametric::clifford(&sampler, samples, mode, tol),
        Scenario::GeneralizedClifford => {
            parametric::generalized(&sampler, samples, mode, tol, config.p.unwrap_or(1), config.q.unwrap_or(2))
        }
        Scenario::NonminimalControl => parametric::nonminimal_control(&sampler, samples, mode),
        Scenario::DetCone => implicit::det_cone(&sampler, samples, tol, config.n.unwrap_or(3)),
        Scenario::PfaffianCone => implicit::pf_cone(&sampler, samples, tol, config.n.unwrap_or(2)),
        Scenario::HelicoidalClifford => {
            let ps = config.p.map_or_else(|| vec![1, 2], |p| vec![p]);
            symmetry::helicoidal_clifford(&sampler, samples, &ps)
        }
        Scenario::HelicoidalDet => symmetry::helicoidal_det(&sampler, samples, config.n.unwrap_or(3)),
        Scenario::HelicoidalPfaffian => symmetry::helicoidal_pf(&sampler, samples, config.n.unwrap_or(2)),
        Scenario::Theorem2Crosscheck => symmetry::crosscheck(config.seed, samples, config.tol),
        Scenario::Congruence => identities::congruence(&sampler, samples, tol),
        Scenario::PfaffianIdentities => identities::pfaffian_identities(&sampler, samples),
    }
}

/// Resolved scenario parameters for the report.
pub(crate) fn params(config: &ScenarioConfig) -> Vec<(&'static str, usize)> {
    match config.scenario {
        Scenario::GeneralizedClifford => vec![("p", config.p.unwrap_or(1)), ("q", config.q.unwrap_or(2))],
        Scenario::DetCone | Scenario::HelicoidalDet => vec![("n", config.n.unwrap_or(3))],
        Scenario::PfaffianCone | Scenario::HelicoidalPfaffian => vec![("n", config.n.unwrap_or(2))],
        Scenario::HelicoidalClifford => config.p.map(|p| vec![("p", p)]).unwrap_or_default(),
        _ => Vec::new(),
    }
}
