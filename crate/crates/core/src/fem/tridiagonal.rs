use super::Mesh;
use crate::error::{Error, Result};

/// Tridiagonal matrix stored by diagonals.
///
/// `sub[i]` sits at `(i + 1, i)`, `sup[i]` at `(i, i + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Result<Self> {
        let m = diag.len();
        if m == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        for off in [&sub, &sup] {
            if off.len() != m - 1 {
                return Err(Error::LengthMismatch {
                    expected: m - 1,
                    got: off.len(),
                });
            }
        }
        Ok(Self { sub, diag, sup })
    }

    pub fn symmetric(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        Self::new(off.clone(), diag, off)
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let m = self.dim();
        assert_eq!(x.len(), m);
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, x)| d * x).collect();
        for i in 0..m - 1 {
            y[i] += self.sup[i] * x[i + 1];
            y[i + 1] += self.sub[i] * x[i];
        }
        y
    }

    /// `a * self + b * other`
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.dim(), other.dim());
        let lin = |p: &[f64], q: &[f64]| -> Vec<f64> {
            p.iter().zip(q).map(|(p, q)| a * p + b * q).collect()
        };
        Self {
            sub: lin(&self.sub, &other.sub),
            diag: lin(&self.diag, &other.diag),
            sup: lin(&self.sup, &other.sup),
        }
    }

    /// Drops the first and last rows and columns.
    pub fn interior_block(&self) -> Result<Self> {
        let m = self.dim();
        if m < 3 {
            return Err(Error::InvalidParameter(
                "interior block of a matrix smaller than 3x3".into(),
            ));
        }
        Ok(Self {
            sub: self.sub[1..m - 2].to_vec(),
            diag: self.diag[1..m - 1].to_vec(),
            sup: self.sup[1..m - 2].to_vec(),
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let m = self.dim();
        let mut a = vec![vec![0.0; m]; m];
        for i in 0..m {
            a[i][i] = self.diag[i];
            if i + 1 < m {
                a[i][i + 1] = self.sup[i];
                a[i + 1][i] = self.sub[i];
            }
        }
        a
    }

    pub fn factorize(&self) -> Result<TridiagonalLu> {
        TridiagonalLu::new(self)
    }
}

/// Thomas-algorithm factorization, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    // multipliers l_i = sub_i / u_i and pivots u_i
    lower: Vec<f64>,
    pivots: Vec<f64>,
    sup: Vec<f64>,
}

impl TridiagonalLu {
    fn new(a: &TridiagonalMatrix) -> Result<Self> {
        let m = a.dim();
        let scale = a
            .diag
            .iter()
            .chain(&a.sub)
            .chain(&a.sup)
            .fold(0.0_f64, |s, v| s.max(v.abs()));
        let tol = 1e-13 * scale;
        let mut pivots = Vec::with_capacity(m);
        let mut lower = Vec::with_capacity(m.saturating_sub(1));
        let mut p = a.diag[0];
        for i in 0..m {
            if i > 0 {
                let l = a.sub[i - 1] / pivots[i - 1];
                lower.push(l);
                p = a.diag[i] - l * a.sup[i - 1];
            }
            if !(p.abs() > tol) {
                return Err(Error::SingularSystem { row: i, pivot: p });
            }
            pivots.push(p);
        }
        Ok(Self {
            lower,
            pivots,
            sup: a.sup.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let m = self.dim();
        assert_eq!(x.len(), m);
        for i in 1..m {
            x[i] -= self.lower[i - 1] * x[i - 1];
        }
        x[m - 1] /= self.pivots[m - 1];
        for i in (0..m - 1).rev() {
            x[i] = (x[i] - self.sup[i] * x[i + 1]) / self.pivots[i];
        }
    }
}

/// Solves `matrix * x = rhs` by the Thomas algorithm.
pub fn solve_tridiagonal(matrix: &TridiagonalMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != matrix.dim() {
        return Err(Error::LengthMismatch {
            expected: matrix.dim(),
            got: rhs.len(),
        });
    }
    Ok(matrix.factorize()?.solve(rhs))
}

/// Full stiffness matrix `a_ij = ∫ ψ_i' ψ_j'` over all nodes.
pub fn assemble_stiffness(mesh: &Mesh) -> TridiagonalMatrix {
    let n = mesh.n_nodes();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    for e in 0..mesh.n_elements() {
        let k = 1.0 / mesh.h(e);
        diag[e] += k;
        diag[e + 1] += k;
        off[e] = -k;
    }
    TridiagonalMatrix {
        sub: off.clone(),
        diag,
        sup: off,
    }
}

/// Full mass matrix `m_ij = ∫ ψ_i ψ_j` over all nodes.
pub fn assemble_mass(mesh: &Mesh) -> TridiagonalMatrix {
    let n = mesh.n_nodes();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    for e in 0..mesh.n_elements() {
        let h = mesh.h(e);
        diag[e] += h / 3.0;
        diag[e + 1] += h / 3.0;
        off[e] = h / 6.0;
    }
    TridiagonalMatrix {
        sub: off.clone(),
        diag,
        sup: off,
    }
}
