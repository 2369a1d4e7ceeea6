use std::sync::Arc;

use super::Mesh;
use crate::error::{Error, Result};

fn same_mesh(a: &Arc<Mesh>, b: &Arc<Mesh>) -> bool {
    Arc::ptr_eq(a, b) || a.nodes() == b.nodes()
}

/// Continuous piecewise-linear function given by its nodal values.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    mesh: Arc<Mesh>,
    values: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(mesh: Arc<Mesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n_nodes() {
            return Err(Error::LengthMismatch {
                expected: mesh.n_nodes(),
                got: values.len(),
            });
        }
        Ok(Self { mesh, values })
    }

    pub fn zeros(mesh: Arc<Mesh>) -> Self {
        let n = mesh.n_nodes();
        Self {
            mesh,
            values: vec![0.0; n],
        }
    }

    /// Nodal interpolant of `g`.
    pub fn interpolate(mesh: Arc<Mesh>, g: impl Fn(f64) -> f64) -> Self {
        let values = mesh.nodes().iter().map(|&x| g(x)).collect();
        Self { mesh, values }
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Elementwise slope `(v_{j+1} - v_j) / h_j`.
    pub fn derivative(&self) -> PiecewiseConstant {
        let values = self
            .values
            .windows(2)
            .enumerate()
            .map(|(e, w)| (w[1] - w[0]) / self.mesh.h(e))
            .collect();
        PiecewiseConstant {
            mesh: self.mesh.clone(),
            values,
        }
    }

    /// Mean value on each element.
    pub fn element_means(&self) -> Vec<f64> {
        self.values
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let e = self.mesh.locate(x).ok_or(Error::Domain(x))?;
        let (x0, x1) = (self.mesh.nodes()[e], self.mesh.nodes()[e + 1]);
        let t = (x - x0) / (x1 - x0);
        Ok((1.0 - t) * self.values[e] + t * self.values[e + 1])
    }

    /// `max(v, floor)` nodewise.
    pub fn max_with(&self, floor: f64) -> Self {
        Self {
            mesh: self.mesh.clone(),
            values: self.values.iter().map(|&v| v.max(floor)).collect(),
        }
    }

    pub fn ensure_same_mesh(&self, other: &Arc<Mesh>) -> Result<()> {
        if same_mesh(&self.mesh, other) {
            Ok(())
        } else {
            Err(Error::IncompatibleMesh)
        }
    }
}

/// Piecewise-constant function, one value per element.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    mesh: Arc<Mesh>,
    values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn new(mesh: Arc<Mesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n_elements() {
            return Err(Error::LengthMismatch {
                expected: mesh.n_elements(),
                got: values.len(),
            });
        }
        Ok(Self { mesh, values })
    }

    pub fn zeros(mesh: Arc<Mesh>) -> Self {
        let n = mesh.n_elements();
        Self {
            mesh,
            values: vec![0.0; n],
        }
    }

    pub fn constant(mesh: Arc<Mesh>, c: f64) -> Self {
        let n = mesh.n_elements();
        Self {
            mesh,
            values: vec![c; n],
        }
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn ensure_same_mesh(&self, other: &Arc<Mesh>) -> Result<()> {
        if same_mesh(&self.mesh, other) {
            Ok(())
        } else {
            Err(Error::IncompatibleMesh)
        }
    }

    /// `∫ |g| dx`
    pub fn l1_norm(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(e, g)| g.abs() * self.mesh.h(e))
            .sum()
    }
}
