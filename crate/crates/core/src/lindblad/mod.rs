//! Markovian open-system dynamics in Liouville space.
//!
//! Operators are vectorized by stacking columns, so `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.
//! Dissipators use `D[L]ρ = γ(2LρL† − L†Lρ − ρL†L)`.
//!
//! Thermal relaxation is linearized in the polarization: with unit-trace
//! `ρ = I/N + δ`, the generator adds the source `−Tr(ρ)·R(Δ_eq)`, which makes
//! `I/N + Δ_eq` stationary under free relaxation while keeping the map linear and
//! trace preserving.

mod propagate;
mod relaxation;
mod superop;

pub use propagate::{fixed_point, periodic_map, propagate, propagate_from, propagate_periodic, trajectory, TrajectoryPoint};
pub use relaxation::{cross_relaxation, scalar_coupling, standard_relaxation};
pub use superop::{build_liouvillian, Superoperator};

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::spinops::{thermal_deviation, HermitianOperator, SpinSystem};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Schedule {
    Constant(f64),
    /// `amplitude · cos(omega·t + phase)`
    Cosine { amplitude: f64, omega: f64, phase: f64 },
    /// Value `values[k]` on `[breaks[k], breaks[k+1])`; the last value holds afterwards.
    Piecewise { breaks: Vec<f64>, values: Vec<f64> },
}

impl Schedule {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Schedule::Constant(a) => *a,
            Schedule::Cosine { amplitude, omega, phase } => amplitude * (omega * t + phase).cos(),
            Schedule::Piecewise { breaks, values } => {
                let k = breaks.iter().rposition(|&b| b <= t).unwrap_or(0);
                values[k.min(values.len() - 1)]
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Schedule::Constant(_) => true,
            Schedule::Cosine { amplitude, omega, .. } => *amplitude == 0.0 || *omega == 0.0,
            Schedule::Piecewise { values, .. } => values.windows(2).all(|w| w[0] == w[1]),
        }
    }

    pub fn period(&self) -> Option<f64> {
        match self {
            Schedule::Cosine { omega, .. } if *omega != 0.0 => Some(2.0 * PI / omega.abs()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Dissipator {
    pub op: CMat,
    pub rate: f64,
}

#[derive(Debug, Clone)]
pub struct LindbladModel {
    pub h_drift: HermitianOperator,
    pub controls: Vec<(HermitianOperator, Schedule)>,
    pub dissipators: Vec<Dissipator>,
    /// Traceless equilibrium deviation the dissipators relax toward; `None` for unital relaxation.
    pub equilibrium: Option<HermitianOperator>,
}

impl LindbladModel {
    pub fn new(
        h_drift: HermitianOperator,
        controls: Vec<(HermitianOperator, Schedule)>,
        dissipators: Vec<Dissipator>,
        equilibrium: Option<HermitianOperator>,
    ) -> Result<Self> {
        let dim = h_drift.dim();
        for (h, _) in &controls {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: h.dim() });
            }
        }
        for d in &dissipators {
            if d.op.nrows() != dim || d.op.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: d.op.nrows() });
            }
            if !(d.rate >= 0.0) {
                return Err(Error::Unphysical(format!("negative dissipator rate {}", d.rate)));
            }
        }
        if let Some(eq) = &equilibrium {
            if eq.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: eq.dim() });
            }
        }
        Ok(LindbladModel { h_drift, controls, dissipators, equilibrium })
    }

    pub fn closed(h_drift: HermitianOperator) -> Self {
        LindbladModel { h_drift, controls: Vec::new(), dissipators: Vec::new(), equilibrium: None }
    }

    /// Free evolution of `system`: scalar couplings, per-spin T1/T2, thermal equilibrium.
    pub fn relaxation(system: &SpinSystem) -> Result<Self> {
        Self::new(scalar_coupling(system), Vec::new(), standard_relaxation(system)?, Some(thermal_deviation(system)))
    }

    pub fn dim(&self) -> usize {
        self.h_drift.dim()
    }

    pub fn with_controls(mut self, controls: Vec<(HermitianOperator, Schedule)>) -> Result<Self> {
        self.controls = controls;
        Self::new(self.h_drift, self.controls, self.dissipators, self.equilibrium)
    }

    pub fn with_dissipators(mut self, extra: Vec<Dissipator>) -> Result<Self> {
        self.dissipators.extend(extra);
        Self::new(self.h_drift, self.controls, self.dissipators, self.equilibrium)
    }

    pub fn without_controls(&self) -> Self {
        LindbladModel { controls: Vec::new(), ..self.clone() }
    }

    pub fn is_time_independent(&self) -> bool {
        self.controls.iter().all(|(_, s)| s.is_constant())
    }

    /// Common period of all time-dependent controls, if there is one.
    pub fn period(&self) -> Option<f64> {
        let periods: Vec<f64> =
            self.controls.iter().filter(|(_, s)| !s.is_constant()).map(|(_, s)| s.period()).collect::<Option<_>>()?;
        let first = *periods.first()?;
        periods.iter().all(|p| (p - first).abs() <= 1e-12 * first).then_some(first)
    }

    pub fn hamiltonian(&self, t: f64) -> CMat {
        self.controls.iter().fold(self.h_drift.matrix().clone(), |acc, (h, s)| acc + h.matrix() * crate::linalg::c(s.value(t)))
    }
}

/// Unit-trace representation `I/N + δ` of a traceless deviation.
pub fn with_identity(deviation: &HermitianOperator) -> HermitianOperator {
    let dim = deviation.dim();
    deviation.traceless_part() + HermitianOperator::identity(dim).scale(1.0 / dim as f64)
}
