use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{invalid, Error};

/// The five pi iterations this crate knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmId {
    /// `d, r` recurrence; digits double per step.
    Quadratic,
    /// `s, t` recurrence; digits quadruple per step.
    Quartic,
    /// `e, r` recurrence from the cubic mean; digits triple per step.
    Cubic,
    /// `e, r` recurrence from the quartic mean; digits quadruple per step.
    QuarticAnalog,
    /// Gauss AGM with the weighted sum; converges to pi, not 1/pi.
    SalaminBrent,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 5] = [
        AlgorithmId::Quadratic,
        AlgorithmId::Quartic,
        AlgorithmId::Cubic,
        AlgorithmId::QuarticAnalog,
        AlgorithmId::SalaminBrent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmId::Quadratic => "quadratic",
            AlgorithmId::Quartic => "quartic",
            AlgorithmId::Cubic => "cubic",
            AlgorithmId::QuarticAnalog => "quartic_analog",
            AlgorithmId::SalaminBrent => "salamin_brent",
        }
    }

    /// True for the iterations whose estimates tend to `1/pi`.
    pub fn estimates_reciprocal(self) -> bool {
        self != AlgorithmId::SalaminBrent
    }

    /// Nominal convergence order.
    pub fn order(self) -> u32 {
        match self {
            AlgorithmId::Quadratic | AlgorithmId::SalaminBrent => 2,
            AlgorithmId::Cubic => 3,
            AlgorithmId::Quartic | AlgorithmId::QuarticAnalog => 4,
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<AlgorithmId, Error> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        AlgorithmId::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| {
                invalid(format!(
                    "unknown algorithm {s:?} (expected quadratic, quartic, cubic, quartic_analog or salamin_brent)"
                ))
            })
    }
}
