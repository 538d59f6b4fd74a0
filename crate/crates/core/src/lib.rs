//! Polynomial knots: construct polynomial parametrizations of long knots from
//! quasitoric braids and verify polynomial triples by extracting their
//! diagrams and invariants.

use serde::{Deserialize, Serialize};

pub mod braid;
pub mod catalog;
pub mod diagram;
pub mod export;
pub mod invariants;
pub mod lift;
pub mod nodal;
pub mod poly;
pub mod verify;

/// Numerical tolerances shared by the geometric stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Leading coefficients at or below this are treated as zero.
    pub eps_lead: f64,
    /// Residual tolerance for univariate roots.
    pub root_tol: f64,
    /// Coordinate agreement required at a double point, relative to the
    /// magnitude of the coordinate polynomial there.
    pub point_tol: f64,
    /// Minimum gap between crossing parameters.
    pub separation_tol: f64,
    /// Minimum `|sin|` of the angle between the two branches at a node.
    pub trans_tol: f64,
    /// Minimum height difference at a crossing.
    pub height_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_lead: poly::EPS_LEAD,
            root_tol: poly::ROOT_TOL,
            point_tol: 1e-8,
            separation_tol: 1e-6,
            trans_tol: 1e-6,
            height_tol: 1e-8,
        }
    }
}
