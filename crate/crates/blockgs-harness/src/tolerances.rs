//! Slack multipliers for the order-of-magnitude stability bounds.
//!
//! The bounds behind the acceptance checks have the shape `c(m, ps) * eps`,
//! `c(m, ps) * eps * kappa`, or `c(m, ps) * eps * kappa^2`, where `c` is an
//! unspecified low-degree polynomial in the dimensions. The profile maps
//! each bound family to one concrete multiplier standing in for `c`. All
//! multipliers are at least 1.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceProfile {
    /// Slack on flat `O(eps)` bounds.
    pub eps_slack: f64,
    /// Slack on `O(eps) * kappa` bounds.
    pub eps_kappa_slack: f64,
    /// Slack on `O(eps) * kappa^2` bounds.
    pub eps_kappa_sq_slack: f64,
}

impl Default for ToleranceProfile {
    /// Factor 100 throughout: generous enough for the desk-scale dimensions
    /// used by the acceptance suite (m <= 400, ps <= 240), tight enough to
    /// distinguish the bound families from each other.
    fn default() -> Self {
        ToleranceProfile {
            eps_slack: 100.0,
            eps_kappa_slack: 100.0,
            eps_kappa_sq_slack: 100.0,
        }
    }
}

impl ToleranceProfile {
    pub fn validate(&self) -> bool {
        self.eps_slack >= 1.0 && self.eps_kappa_slack >= 1.0 && self.eps_kappa_sq_slack >= 1.0
    }

    pub fn eps_bound(&self, eps: f64) -> f64 {
        self.eps_slack * eps
    }

    pub fn eps_kappa_bound(&self, eps: f64, kappa: f64) -> f64 {
        self.eps_kappa_slack * eps * kappa
    }

    pub fn eps_kappa_sq_bound(&self, eps: f64, kappa: f64) -> f64 {
        self.eps_kappa_sq_slack * eps * kappa * kappa
    }
}
