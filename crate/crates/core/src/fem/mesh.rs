use crate::error::{Error, Result};

/// Partition `0 = x_0 < x_1 < ... < x_{n-1} = 1` of the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
}

impl Mesh {
    /// Builds a mesh from explicit node coordinates.
    ///
    /// Nodes must be strictly increasing, start at 0, end at 1, and there
    /// must be at least one interior node.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidMesh(format!(
                "need at least 3 nodes, got {}",
                nodes.len()
            )));
        }
        if nodes[0] != 0.0 || nodes[nodes.len() - 1] != 1.0 {
            return Err(Error::InvalidMesh("nodes must span exactly [0, 1]".into()));
        }
        if let Some(w) = nodes.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidMesh(format!(
                "nodes not strictly increasing near {}",
                w[0]
            )));
        }
        Ok(Self { nodes })
    }

    /// Equidistant mesh with `n_nodes` nodes, `h = 1/(n_nodes - 1)`.
    pub fn uniform(n_nodes: usize) -> Result<Self> {
        if n_nodes < 3 {
            return Err(Error::InvalidMesh(format!(
                "need at least 3 nodes, got {n_nodes}"
            )));
        }
        let m = (n_nodes - 1) as f64;
        let mut nodes: Vec<f64> = (0..n_nodes).map(|i| i as f64 / m).collect();
        nodes[n_nodes - 1] = 1.0;
        Ok(Self { nodes })
    }

    /// Splits every element in two.
    pub fn refine(&self) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(1.0);
        Self { nodes }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Length of element `e` (between nodes `e` and `e + 1`).
    #[inline]
    pub fn h(&self, e: usize) -> f64 {
        self.nodes[e + 1] - self.nodes[e]
    }

    pub fn sizes(&self) -> Vec<f64> {
        self.nodes.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.nodes.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Index of the element containing `x` (right-closed on the last element).
    pub fn locate(&self, x: f64) -> Option<usize> {
        if !(0.0..=1.0).contains(&x) {
            return None;
        }
        let idx = self.nodes.partition_point(|&p| p <= x);
        Some(idx.saturating_sub(1).min(self.n_elements() - 1))
    }
}
