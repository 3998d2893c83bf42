use crate::error::{Error, Result};

/// Base used for every logarithm reported by the entropy and divergence code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    #[serde(rename = "e")]
    Natural,
    #[serde(rename = "2")]
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }

    /// Converts a natural-log quantity into this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Natural => nats,
            LogBase::Two => nats / std::f64::consts::LN_2,
        }
    }
}

/// Shared numerical policy.
///
/// `psd_slack` is absolute after scaling by `max(1, ||A||)`; `cluster_width`
/// and `rank_cutoff` are relative to the largest eigenvalue of the operator
/// being inspected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub psd_slack: f64,
    pub cluster_width: f64,
    pub rank_cutoff: f64,
    pub log_base: LogBase,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            psd_slack: 1e-9,
            cluster_width: 1e-9,
            rank_cutoff: 1e-12,
            log_base: LogBase::Natural,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("psd_slack", self.psd_slack),
            ("cluster_width", self.cluster_width),
            ("rank_cutoff", self.rank_cutoff),
        ];
        for (name, value) in fields {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::BadParameter(format!(
                    "{name} must be finite and nonnegative, got {value}"
                )));
            }
        }
        if self.cluster_width < self.rank_cutoff {
            return Err(Error::BadParameter(format!(
                "cluster_width {} is smaller than rank_cutoff {}",
                self.cluster_width, self.rank_cutoff
            )));
        }
        Ok(())
    }

    pub fn log(&self, x: f64) -> f64 {
        self.log_base.log(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        ToleranceConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_negative_and_inverted_fields() {
        let cfg = ToleranceConfig {
            psd_slack: -1.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = ToleranceConfig {
            cluster_width: 1e-14,
            rank_cutoff: 1e-12,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn base_two_logs() {
        assert!((LogBase::Two.log(8.0) - 3.0).abs() < 1e-15);
        assert!((LogBase::Two.from_nats(2f64.ln()) - 1.0).abs() < 1e-15);
    }
}
