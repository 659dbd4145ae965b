//! Scenario configuration: every parameter of a cognitive ad hoc network
//! experiment in one validated, serializable struct.
//!
//! Configs are flat TOML files whose keys match the field names below. The
//! bundled `configs/default.toml` describes the reference three-link
//! scenario used throughout the guide and the golden tests; [`load_config`]
//! reads and validates a file in one step, and
//! [`ScenarioConfig::canonical_toml`] produces the canonical serialization
//! the CLI hashes into its output metadata.

use serde::{Deserialize, Serialize};

use crate::delay::LinkDelaySpec;
use crate::error::{Error, Result};

/// Intra-network channel variances σ²: either one scalar shared by every
/// (transmitter, victim) pair or a full `k × l` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SigmaIntra {
    Scalar(f64),
    Matrix(Vec<Vec<f64>>),
}

impl SigmaIntra {
    /// Variance of the channel from transmitter `link` to its
    /// `victim`-th intra-network victim (both zero-based).
    pub fn value(&self, link: usize, victim: usize) -> f64 {
        match self {
            SigmaIntra::Scalar(v) => *v,
            SigmaIntra::Matrix(rows) => rows[link][victim],
        }
    }
}

fn default_mu() -> f64 {
    1.0
}

fn default_alpha() -> f64 {
    2.0
}

/// Full description of one experiment scenario.
///
/// `k` cognitive transmitter–receiver links, each with `n_t` antennas,
/// share spectrum with a single-antenna primary user under an average
/// interference constraint `aic`. Per-link traffic is described by an
/// arrival rate (packets/interval) and a mean-delay budget (intervals);
/// channel strengths by the direct, cross (transmitter→primary), and
/// optional intra-network variances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Antennas per cognitive transmitter (≥ 2).
    pub n_t: u32,
    /// Number of cognitive links.
    pub k: usize,
    /// Intra-network interference victims per transmitter (default 0).
    #[serde(default)]
    pub l: usize,
    /// Packet length in bits.
    pub n_b: f64,
    /// Bandwidth in Hz.
    pub w: f64,
    /// Transmission interval length in seconds.
    pub t: f64,
    /// Per-link packet arrival rates λ_i in packets/interval.
    pub lambdas: Vec<f64>,
    /// Per-link mean-delay budgets D_i in intervals.
    pub delays: Vec<f64>,
    /// Per-link direct-channel variances σ²_{i,i}.
    pub sigma_direct: Vec<f64>,
    /// Per-link transmitter→primary variances σ²_{0,i}.
    pub sigma_cross: Vec<f64>,
    /// Intra-network variances; required when `l > 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_intra: Option<SigmaIntra>,
    /// Average interference constraint at the primary user (power units).
    pub aic: f64,
    /// Price per feedback bit (default 1).
    #[serde(default = "default_mu")]
    pub mu: f64,
    /// Price per watt of transmit power (default 0).
    #[serde(default)]
    pub phi: f64,
    /// Path-loss exponent for the minimum-safe-distance shortcut
    /// (default 2).
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

impl Default for ScenarioConfig {
    /// The reference scenario: three links with heterogeneous traffic
    /// (λ = 0.3/0.4/0.5 packets per 5 ms interval, delay budgets 2/4/20
    /// intervals), 4 transmit antennas, 50 kHz bandwidth, 80-bit packets,
    /// and cross-channel variances 1e-4/5e-4/1e-3.
    fn default() -> Self {
        ScenarioConfig {
            n_t: 4,
            k: 3,
            l: 0,
            n_b: 80.0,
            w: 5e4,
            t: 0.005,
            lambdas: vec![0.3, 0.4, 0.5],
            delays: vec![2.0, 4.0, 20.0],
            sigma_direct: vec![0.01, 0.01, 0.01],
            sigma_cross: vec![1e-4, 5e-4, 1e-3],
            sigma_intra: None,
            aic: 0.01,
            mu: 1.0,
            phi: 0.0,
            alpha: 2.0,
        }
    }
}

impl ScenarioConfig {
    /// Checks every invariant, naming the offending field on failure.
    pub fn validate(&self) -> Result<()> {
        if self.n_t < 2 {
            return Err(Error::config("n_t", "at least 2 antennas are required"));
        }
        if self.k == 0 {
            return Err(Error::config("k", "at least one link is required"));
        }
        if self.l + 2 > self.n_t as usize {
            return Err(Error::config(
                "l",
                format!(
                    "{} victims plus the quantized cross direction exceed the \
                     null space of {} antennas (need l ≤ n_t − 2)",
                    self.l, self.n_t
                ),
            ));
        }
        for (field, value) in [("n_b", self.n_b), ("w", self.w), ("t", self.t)] {
            if value <= 0.0 || !value.is_finite() {
                return Err(Error::config(
                    field,
                    format!("must be positive, got {value}"),
                ));
            }
        }
        for (field, values) in [
            ("lambdas", &self.lambdas),
            ("delays", &self.delays),
            ("sigma_direct", &self.sigma_direct),
            ("sigma_cross", &self.sigma_cross),
        ] {
            if values.len() != self.k {
                return Err(Error::config(
                    field,
                    format!(
                        "expected {} entries (one per link), got {}",
                        self.k,
                        values.len()
                    ),
                ));
            }
            if let Some(bad) = values.iter().find(|v| **v <= 0.0 || !v.is_finite()) {
                return Err(Error::config(
                    field,
                    format!("entries must be positive, got {bad}"),
                ));
            }
        }
        if self.aic < 0.0 || !self.aic.is_finite() {
            return Err(Error::config(
                "aic",
                format!("must be a nonnegative finite number, got {}", self.aic),
            ));
        }
        for (field, value) in [("mu", self.mu), ("phi", self.phi)] {
            if value < 0.0 || !value.is_finite() {
                return Err(Error::config(
                    field,
                    format!("must be nonnegative, got {value}"),
                ));
            }
        }
        if self.alpha <= 0.0 || !self.alpha.is_finite() {
            return Err(Error::config(
                "alpha",
                format!("must be positive, got {}", self.alpha),
            ));
        }
        match (&self.sigma_intra, self.l) {
            (None, 0) => {}
            (None, _) => {
                return Err(Error::config(
                    "sigma_intra",
                    format!("required when l = {} victims are configured", self.l),
                ));
            }
            (Some(SigmaIntra::Scalar(v)), _) => {
                if *v <= 0.0 || !v.is_finite() {
                    return Err(Error::config(
                        "sigma_intra",
                        format!("must be positive, got {v}"),
                    ));
                }
            }
            (Some(SigmaIntra::Matrix(rows)), _) => {
                if rows.len() != self.k || rows.iter().any(|r| r.len() != self.l) {
                    return Err(Error::config(
                        "sigma_intra",
                        format!("matrix must be {} × {} (links × victims)", self.k, self.l),
                    ));
                }
                if let Some(bad) = rows.iter().flatten().find(|v| **v <= 0.0 || !v.is_finite()) {
                    return Err(Error::config(
                        "sigma_intra",
                        format!("entries must be positive, got {bad}"),
                    ));
                }
            }
        }
        // (2Dλ+2)² − 8Dλ = (2Dλ)² + 4 − 4Dλ + ... is positive for all
        // positive D, λ; guard anyway so the delay module can take it for
        // granted.
        for i in 0..self.k {
            let dl = self.delays[i] * self.lambdas[i];
            let disc = (2.0 * dl + 2.0).powi(2) - 8.0 * dl;
            if disc < 0.0 {
                return Err(Error::config(
                    "delays/lambdas",
                    format!("link {i}: rate-threshold discriminant is negative ({disc})"),
                ));
            }
        }
        Ok(())
    }

    /// The per-link delay/traffic descriptions used by the power solver.
    pub fn link_delay_specs(&self) -> Vec<LinkDelaySpec> {
        (0..self.k)
            .map(|i| LinkDelaySpec {
                lambda: self.lambdas[i],
                d: self.delays[i],
                n_b: self.n_b,
                t: self.t,
            })
            .collect()
    }

    /// Canonical TOML serialization; the CLI hashes this into output
    /// metadata so results are traceable to exact parameter values.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(self).expect("ScenarioConfig serializes to TOML")
    }
}

/// Reads, parses, and validates a scenario file.
pub fn load_config(path: &std::path::Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let config: ScenarioConfig = toml::from_str(&text).map_err(|e| Error::Config {
        field: "(parse)".to_string(),
        message: e.message().to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenario_is_valid_reference_setup() {
        let cfg = ScenarioConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.k, 3);
        assert_eq!(cfg.delays, vec![2.0, 4.0, 20.0]);
        assert_eq!(cfg.lambdas, vec![0.3, 0.4, 0.5]);
        assert_eq!(cfg.n_t, 4);
    }

    #[test]
    fn toml_round_trip_preserves_config() {
        let cfg = ScenarioConfig::default();
        let parsed: ScenarioConfig = toml::from_str(&cfg.canonical_toml()).unwrap();
        assert_eq!(parsed, cfg);
    }

    #[test]
    fn bundled_default_file_matches_default_impl() {
        let path =
            std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
        let cfg = load_config(&path).unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
    }

    #[test]
    fn missing_aic_is_reported_by_name() {
        let toml_text = r#"
            n_t = 4
            k = 1
            n_b = 80.0
            w = 5e4
            t = 0.005
            lambdas = [0.3]
            delays = [2.0]
            sigma_direct = [0.01]
            sigma_cross = [1e-4]
        "#;
        let err = toml::from_str::<ScenarioConfig>(toml_text).unwrap_err();
        assert!(err.message().contains("aic"), "message: {}", err.message());
    }

    #[test]
    fn too_many_victims_rejected() {
        let cfg = ScenarioConfig {
            l: 3,
            sigma_intra: Some(SigmaIntra::Scalar(1e-3)),
            ..ScenarioConfig::default()
        };
        let err = cfg.validate().unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "l"));
    }

    #[test]
    fn vector_length_mismatch_names_field() {
        let cfg = ScenarioConfig {
            sigma_cross: vec![1e-4, 5e-4],
            ..ScenarioConfig::default()
        };
        let err = cfg.validate().unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "sigma_cross"));
    }

    #[test]
    fn nonpositive_entries_rejected() {
        let cfg = ScenarioConfig {
            lambdas: vec![0.3, -0.4, 0.5],
            ..ScenarioConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = ScenarioConfig {
            aic: -0.01,
            ..ScenarioConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn sigma_intra_scalar_and_matrix_forms() {
        let mut cfg = ScenarioConfig {
            l: 1,
            sigma_intra: Some(SigmaIntra::Scalar(2e-3)),
            ..ScenarioConfig::default()
        };
        cfg.validate().unwrap();
        assert_eq!(cfg.sigma_intra.as_ref().unwrap().value(2, 0), 2e-3);

        cfg.sigma_intra = Some(SigmaIntra::Matrix(vec![vec![1e-3], vec![2e-3], vec![3e-3]]));
        cfg.validate().unwrap();
        assert_eq!(cfg.sigma_intra.as_ref().unwrap().value(1, 0), 2e-3);

        // Wrong shape: 2 rows for 3 links.
        cfg.sigma_intra = Some(SigmaIntra::Matrix(vec![vec![1e-3], vec![2e-3]]));
        assert!(cfg.validate().is_err());

        // Victims configured but no variances given.
        cfg.sigma_intra = None;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = format!(
            "{}\nunknown_knob = 1.0\n",
            ScenarioConfig::default().canonical_toml()
        );
        assert!(toml::from_str::<ScenarioConfig>(&text).is_err());
    }

    #[test]
    fn sigma_intra_round_trips_through_toml() {
        let cfg = ScenarioConfig {
            l: 2,
            n_t: 4,
            sigma_intra: Some(SigmaIntra::Matrix(vec![
                vec![1e-3, 2e-3],
                vec![3e-3, 4e-3],
                vec![5e-3, 6e-3],
            ])),
            ..ScenarioConfig::default()
        };
        cfg.validate().unwrap();
        let parsed: ScenarioConfig = toml::from_str(&cfg.canonical_toml()).unwrap();
        assert_eq!(parsed, cfg);
    }
}
