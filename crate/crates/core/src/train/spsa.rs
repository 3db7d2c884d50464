use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng;

/// Gain schedule `a_k = a / (A + k)^alpha`, `c_k = c / k^gamma`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpsaConfig {
    pub a: f64,
    pub c: f64,
    #[serde(rename = "big_a")]
    pub big_a: f64,
    pub alpha_decay: f64,
    pub gamma_decay: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for SpsaConfig {
    fn default() -> Self {
        Self {
            a: 1.0,
            c: 0.1,
            big_a: 10.0,
            alpha_decay: 0.602,
            gamma_decay: 0.101,
            iterations: 400,
            seed: 0,
        }
    }
}

impl SpsaConfig {
    pub fn validate(&self) -> Result<(), String> {
        let named = [
            ("a", self.a),
            ("c", self.c),
            ("big_a", self.big_a),
            ("alpha_decay", self.alpha_decay),
            ("gamma_decay", self.gamma_decay),
        ];
        for (n, x) in named {
            // a = 0 freezes the parameters, which is allowed
            if !x.is_finite() || x < 0.0 || (x == 0.0 && n != "a" && n != "big_a") {
                return Err(format!("spsa.{n} must be positive, got {x}"));
            }
        }
        Ok(())
    }

    pub fn gain(&self, k: usize) -> f64 {
        self.a / (self.big_a + k as f64).powf(self.alpha_decay)
    }

    pub fn perturbation(&self, k: usize) -> f64 {
        self.c / (k as f64).powf(self.gamma_decay)
    }
}

/// One SPSA update at iteration `k ≥ 1`. The ±1 perturbation comes from
/// stream `k` of the config seed, so a run is reproducible step by step.
/// Returns the new point and the two loss values used.
pub fn spsa_step<E>(
    theta: &[f64],
    mut loss: impl FnMut(&[f64]) -> Result<f64, E>,
    k: usize,
    cfg: &SpsaConfig,
) -> Result<(Vec<f64>, f64, f64), E> {
    assert!(k >= 1, "spsa iterations count from 1");
    let mut r = rng::stream(cfg.seed, k as u64);
    let delta: Vec<f64> = theta.iter().map(|_| if r.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
    let ck = cfg.perturbation(k);
    let plus: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t + ck * d).collect();
    let minus: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t - ck * d).collect();
    let (lp, lm) = (loss(&plus)?, loss(&minus)?);
    let ak = cfg.gain(k);
    let scale = ak * (lp - lm) / (2.0 * ck);
    let next = theta.iter().zip(&delta).map(|(t, d)| (t - scale * d).rem_euclid(TAU)).collect();
    Ok((next, lp, lm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn bowl(target: &[f64]) -> impl Fn(&[f64]) -> Result<f64, Infallible> + '_ {
        move |x| Ok(x.iter().zip(target).map(|(a, b)| (a - b).powi(2)).sum())
    }

    #[test]
    fn zero_gain_leaves_parameters_alone() {
        let cfg = SpsaConfig {
            a: 0.0,
            ..SpsaConfig::default()
        };
        let theta = vec![0.5, 1.5, 2.5];
        let (next, _, _) = spsa_step(&theta, bowl(&[1.0, 1.0, 1.0]), 1, &cfg).unwrap();
        assert_eq!(next, theta);
    }

    #[test]
    fn same_seed_same_trajectory() {
        let target = [1.0, 2.0, 3.0, 4.0];
        let run = |seed| {
            let cfg = SpsaConfig {
                seed,
                ..SpsaConfig::default()
            };
            let mut theta = vec![3.0; 4];
            for k in 1..=50 {
                theta = spsa_step(&theta, bowl(&target), k, &cfg).unwrap().0;
            }
            theta
        };
        assert_eq!(run(7), run(7));
        assert_ne!(run(7), run(8));
    }

    #[test]
    fn angles_are_wrapped() {
        let cfg = SpsaConfig {
            a: 50.0,
            ..SpsaConfig::default()
        };
        let (next, _, _) = spsa_step(&[0.01, 6.2], bowl(&[-3.0, 9.0]), 1, &cfg).unwrap();
        assert!(next.iter().all(|x| (0.0..TAU).contains(x)));
    }

    #[test]
    fn invalid_configs_are_named() {
        let bad = SpsaConfig {
            c: 0.0,
            ..SpsaConfig::default()
        };
        assert!(bad.validate().unwrap_err().contains("spsa.c"));
        assert!(SpsaConfig::default().validate().is_ok());
    }
}
