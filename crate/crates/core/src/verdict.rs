use crate::hermitian::CVector;
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Holds,
    Fails,
    Marginal,
}

/// Tri-state outcome of a positivity test.
///
/// `slack` is the smallest eigenvalue of the matrix whose positivity encodes
/// the relation; `witness` is a unit vector with negative expectation and is
/// present exactly when the relation fails.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderVerdict {
    pub relation: Relation,
    pub slack: f64,
    pub witness: Option<CVector>,
}

impl OrderVerdict {
    /// Classifies `slack` against the configured positivity band.
    ///
    /// Holds when `slack >= -psd_slack * scale`, fails below ten times that
    /// threshold, and is marginal in between. `scale` is `max(1, ||A||)`.
    pub fn from_slack(slack: f64, scale: f64, cfg: &ToleranceConfig, witness: CVector) -> Self {
        let band = cfg.psd_slack * scale.max(1.0);
        let relation = if slack >= -band {
            Relation::Holds
        } else if slack < -10.0 * band {
            Relation::Fails
        } else {
            Relation::Marginal
        };
        Self {
            relation,
            slack,
            witness: (relation == Relation::Fails).then_some(witness),
        }
    }

    /// A verdict decided structurally (kernel tests, subspace tests) rather
    /// than by an eigenvalue.
    pub fn structural(holds: bool, witness: Option<CVector>) -> Self {
        if holds {
            Self {
                relation: Relation::Holds,
                slack: 0.0,
                witness: None,
            }
        } else {
            Self {
                relation: Relation::Fails,
                slack: f64::NEG_INFINITY,
                witness,
            }
        }
    }

    pub fn holds(&self) -> bool {
        self.relation == Relation::Holds
    }

    pub fn fails(&self) -> bool {
        self.relation == Relation::Fails
    }

    pub fn is_marginal(&self) -> bool {
        self.relation == Relation::Marginal
    }
}
