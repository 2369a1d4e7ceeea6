//! Closed-form solution of the 1D benchmark with constant load `f < 0`
//! pressing against a constant obstacle `φ < 0`, and exact error
//! functionals of discrete approximations against it.
//!
//! For `|f| < 8|φ|` the obstacle is never touched and
//! `u = f/2 (x − x²)`. Otherwise `u = φ` on the contact set
//! `[a, 1 − a]` with `a = sqrt(2φ/f)`, joined by parabolas with
//! continuous slope.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem::{energy, Mesh, PiecewiseConstant, PiecewiseLinear};

/// Constant load and constant obstacle.
///
/// Construction only requires finite values; the benchmark itself
/// ([`ExactSolution::new`]) additionally needs both to be negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub f: f64,
    pub phi: f64,
}

impl ProblemSpec {
    pub fn new(f: f64, phi: f64) -> Result<Self> {
        if !f.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "non-finite data f={f}, phi={phi}"
            )));
        }
        Ok(Self { f, phi })
    }

    fn check_benchmark(&self) -> Result<()> {
        if !(self.f < 0.0) || !(self.phi < 0.0) {
            return Err(Error::InvalidSpec(format!(
                "benchmark needs f < 0 and phi < 0, got f={}, phi={}",
                self.f, self.phi
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Inactive,
    /// Contact set `[1/2 − r, 1/2 + r]`.
    Active {
        r: f64,
    },
}

/// Regime of the benchmark: active iff `|f| ≥ 8|φ|`.
pub fn classify_regime(spec: &ProblemSpec) -> Result<Regime> {
    spec.check_benchmark()?;
    if spec.f.abs() < 8.0 * spec.phi.abs() {
        Ok(Regime::Inactive)
    } else {
        Ok(Regime::Active {
            r: 0.5 - contact_start(spec),
        })
    }
}

// sqrt(2φ/f), both negative
fn contact_start(spec: &ProblemSpec) -> f64 {
    (2.0 * (spec.phi.abs() / spec.f.abs())).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSolution {
    spec: ProblemSpec,
    regime: Regime,
}

impl ExactSolution {
    pub fn new(spec: ProblemSpec) -> Result<Self> {
        let regime = classify_regime(&spec)?;
        Ok(Self { spec, regime })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Contact set `[a, 1 − a]`, if the obstacle is active.
    pub fn contact_interval(&self) -> Option<(f64, f64)> {
        match self.regime {
            Regime::Inactive => None,
            Regime::Active { r } => Some((0.5 - r, 0.5 + r)),
        }
    }

    // √(2φf)
    fn slope_at_boundary(&self) -> f64 {
        (2.0 * self.spec.phi * self.spec.f).sqrt()
    }

    pub fn u(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(x));
        }
        let ProblemSpec { f, phi } = self.spec;
        Ok(match self.contact_interval() {
            None => 0.5 * f * (x - x * x),
            Some((a, b)) => {
                let s = self.slope_at_boundary();
                if x < a {
                    -0.5 * f * x * x - s * x
                } else if x <= b {
                    phi
                } else {
                    -0.5 * f * (x - 1.0).powi(2) + s * (x - 1.0)
                }
            }
        })
    }

    pub fn u_prime(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(x));
        }
        let f = self.spec.f;
        Ok(match self.contact_interval() {
            None => 0.5 * f * (1.0 - 2.0 * x),
            Some((a, b)) => {
                let s = self.slope_at_boundary();
                if x < a {
                    -f * x - s
                } else if x <= b {
                    0.0
                } else {
                    -f * (x - 1.0) + s
                }
            }
        })
    }

    /// Minimal energy `J(u)`.
    pub fn energy(&self) -> f64 {
        let ProblemSpec { f, phi } = self.spec;
        match self.regime {
            Regime::Inactive => -f * f / 24.0,
            Regime::Active { .. } => f * phi * (4.0 / 3.0 * contact_start(&self.spec) - 1.0),
        }
    }

    pub fn interpolant(&self, mesh: Arc<Mesh>) -> PiecewiseLinear {
        PiecewiseLinear::interpolate(mesh, |x| self.u(x).expect("mesh nodes lie in [0,1]"))
    }

    /// Nodal interpolant of `u'`.
    pub fn derivative_interpolant(&self, mesh: Arc<Mesh>) -> PiecewiseLinear {
        PiecewiseLinear::interpolate(mesh, |x| self.u_prime(x).expect("mesh nodes lie in [0,1]"))
    }

    /// Multiplier `λ = −f` on the contact set, 0 elsewhere, classified by
    /// element midpoints. Straddling elements get 0.
    pub fn multiplier(&self, mesh: Arc<Mesh>) -> PiecewiseConstant {
        let values = match self.contact_interval() {
            None => vec![0.0; mesh.n_elements()],
            Some((a, b)) => mesh
                .midpoints()
                .into_iter()
                .map(|m| if m > a && m < b { -self.spec.f } else { 0.0 })
                .collect(),
        };
        PiecewiseConstant::new(mesh, values).expect("one value per element")
    }

    /// Element averages of `λ` (its L² projection onto piecewise constants).
    pub fn multiplier_projected(&self, mesh: Arc<Mesh>) -> PiecewiseConstant {
        let values = match self.contact_interval() {
            None => vec![0.0; mesh.n_elements()],
            Some((a, b)) => mesh
                .nodes()
                .windows(2)
                .map(|w| {
                    let overlap = (w[1].min(b) - w[0].max(a)).max(0.0);
                    -self.spec.f * overlap / (w[1] - w[0])
                })
                .collect(),
        };
        PiecewiseConstant::new(mesh, values).expect("one value per element")
    }

    /// Exact `½∫(v' − u')²`.
    ///
    /// Elements are split at the contact endpoints, so `u'` is linear on
    /// every sub-piece and the squared difference integrates in closed form.
    pub fn half_energy_error(&self, v: &PiecewiseLinear) -> f64 {
        let mesh = v.mesh();
        let breaks: Vec<f64> = match self.contact_interval() {
            None => vec![],
            Some((a, b)) => vec![a, b],
        };
        let up = |x: f64| self.u_prime(x.clamp(0.0, 1.0)).unwrap();
        let mut total = 0.0;
        let mut pts = Vec::with_capacity(4);
        for (e, w) in v.values().windows(2).enumerate() {
            let (x0, x1) = (mesh.nodes()[e], mesh.nodes()[e + 1]);
            let d = (w[1] - w[0]) / (x1 - x0);
            pts.clear();
            pts.push(x0);
            pts.extend(breaks.iter().copied().filter(|&p| p > x0 && p < x1));
            pts.push(x1);
            for s in pts.windows(2) {
                let (p, q) = (d - up(s[0]), d - up(s[1]));
                total += (s[1] - s[0]) * (p * p + p * q + q * q) / 3.0;
            }
        }
        0.5 * total
    }

    /// `J(v) − J(u)`
    pub fn energy_gap(&self, v: &PiecewiseLinear) -> f64 {
        energy(v, self.spec.f) - self.energy()
    }
}

/// `J(u)` of the benchmark.
pub fn exact_energy(spec: &ProblemSpec) -> Result<f64> {
    Ok(ExactSolution::new(*spec)?.energy())
}

/// Midpoint-classified exact multiplier on `mesh`.
pub fn exact_multiplier(spec: &ProblemSpec, mesh: Arc<Mesh>) -> Result<PiecewiseConstant> {
    Ok(ExactSolution::new(*spec)?.multiplier(mesh))
}

pub fn half_energy_error(v: &PiecewiseLinear, sol: &ExactSolution) -> f64 {
    sol.half_energy_error(v)
}

pub fn energy_gap(v: &PiecewiseLinear, spec: &ProblemSpec) -> Result<f64> {
    Ok(ExactSolution::new(*spec)?.energy_gap(v))
}
