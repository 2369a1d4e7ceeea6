use super::{Mesh, PiecewiseConstant, PiecewiseLinear};
use crate::error::Result;

/// `J(v) = ½∫(v')² − ∫ f v` for a constant load `f`.
pub fn energy(v: &PiecewiseLinear, f: f64) -> f64 {
    let mesh = v.mesh();
    v.values()
        .windows(2)
        .enumerate()
        .map(|(e, w)| {
            let h = mesh.h(e);
            let d = (w[1] - w[0]) / h;
            0.5 * d * d * h - f * 0.5 * (w[0] + w[1]) * h
        })
        .sum()
}

/// `‖g‖²_{L²}` for piecewise-constant `g`.
pub fn norm_l2_sq(g: &PiecewiseConstant) -> f64 {
    let mesh = g.mesh();
    g.values()
        .iter()
        .enumerate()
        .map(|(e, v)| v * v * mesh.h(e))
        .sum()
}

/// `∫ (a' − b')²`
pub fn diff_energy_norm_sq(a: &PiecewiseLinear, b: &PiecewiseLinear) -> Result<f64> {
    a.ensure_same_mesh(b.mesh())?;
    let mesh = a.mesh();
    Ok(a.values()
        .windows(2)
        .zip(b.values().windows(2))
        .enumerate()
        .map(|(e, (p, q))| {
            let h = mesh.h(e);
            let d = ((p[1] - p[0]) - (q[1] - q[0])) / h;
            d * d * h
        })
        .sum())
}

/// `(∫ g ψ_i)_i` over all nodes for piecewise-constant `g`.
pub fn load_vector(mesh: &Mesh, g: &[f64]) -> Vec<f64> {
    debug_assert_eq!(g.len(), mesh.n_elements());
    let mut r = vec![0.0; mesh.n_nodes()];
    for (e, ge) in g.iter().enumerate() {
        let half = 0.5 * ge * mesh.h(e);
        r[e] += half;
        r[e + 1] += half;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{assemble_mass, assemble_stiffness};
    use proptest::prelude::*;
    use std::sync::Arc;

    // 5-point Gauss-Legendre on [a, b]
    fn gauss(a: f64, b: f64, g: impl Fn(f64) -> f64) -> f64 {
        const X: [f64; 5] = [
            0.0,
            -0.538_469_310_105_683_1,
            0.538_469_310_105_683_1,
            -0.906_179_845_938_664,
            0.906_179_845_938_664,
        ];
        const W: [f64; 5] = [
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
            0.236_926_885_056_189_1,
        ];
        let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
        X.iter().zip(W).map(|(x, w)| w * g(c + r * x)).sum::<f64>() * r
    }

    fn hat(mesh: &Mesh, i: usize, x: f64) -> (f64, f64) {
        let n = mesh.nodes();
        if i > 0 && x >= n[i - 1] && x <= n[i] {
            let h = n[i] - n[i - 1];
            ((x - n[i - 1]) / h, 1.0 / h)
        } else if i + 1 < n.len() && x >= n[i] && x <= n[i + 1] {
            let h = n[i + 1] - n[i];
            ((n[i + 1] - x) / h, -1.0 / h)
        } else {
            (0.0, 0.0)
        }
    }

    fn random_mesh(cuts: &[f64]) -> Mesh {
        let mut nodes: Vec<f64> = cuts.to_vec();
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        nodes.insert(0, 0.0);
        nodes.push(1.0);
        Mesh::from_nodes(nodes).unwrap()
    }

    fn riemann(mesh: &Mesh, sub: usize, g: impl Fn(usize, f64) -> f64) -> f64 {
        let mut s = 0.0;
        for e in 0..mesh.n_elements() {
            let (a, h) = (mesh.nodes()[e], mesh.h(e) / sub as f64);
            for k in 0..sub {
                s += g(e, a + (k as f64 + 0.5) * h) * h;
            }
        }
        s
    }

    #[test]
    fn energy_of_zero_vanishes() {
        let mesh = Arc::new(Mesh::uniform(7).unwrap());
        assert_eq!(energy(&PiecewiseLinear::zeros(mesh), -3.0), 0.0);
    }

    #[test]
    fn energy_of_single_hat() {
        let mesh = Arc::new(Mesh::uniform(3).unwrap());
        let v = PiecewiseLinear::new(mesh, vec![0.0, 1.0, 0.0]).unwrap();
        assert!((energy(&v, -5.0) - 4.5).abs() < 1e-14);
    }

    #[test]
    fn constant_l2_norm() {
        let mesh = Arc::new(Mesh::uniform(9).unwrap());
        assert_eq!(norm_l2_sq(&PiecewiseConstant::zeros(mesh.clone())), 0.0);
        let g = PiecewiseConstant::constant(mesh, -5.0);
        assert!((norm_l2_sq(&g) - 25.0).abs() < 1e-12);
    }

    #[test]
    fn energy_norm_of_ramp() {
        let mesh = Arc::new(Mesh::uniform(6).unwrap());
        let a = PiecewiseLinear::interpolate(mesh.clone(), |x| x);
        let b = PiecewiseLinear::zeros(mesh.clone());
        assert!((diff_energy_norm_sq(&a, &b).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(diff_energy_norm_sq(&a, &a).unwrap(), 0.0);
        let c = PiecewiseLinear::zeros(Arc::new(Mesh::uniform(7).unwrap()));
        assert!(diff_energy_norm_sq(&a, &c).is_err());
    }

    proptest! {
        #[test]
        fn assembly_matches_quadrature(cuts in proptest::collection::vec(0.01f64..0.99, 3)) {
            let mesh = random_mesh(&cuts);
            let n = mesh.n_nodes();
            let a = assemble_stiffness(&mesh).to_dense();
            let m = assemble_mass(&mesh).to_dense();
            for i in 0..n {
                for j in 0..n {
                    let (mut qa, mut qm) = (0.0, 0.0);
                    for e in 0..mesh.n_elements() {
                        let (x0, x1) = (mesh.nodes()[e], mesh.nodes()[e + 1]);
                        let eps = 1e-15 * (x1 - x0);
                        // evaluate strictly inside the element so hat picks the right piece
                        qa += gauss(x0, x1, |x| {
                            let x = x.clamp(x0 + eps, x1 - eps);
                            hat(&mesh, i, x).1 * hat(&mesh, j, x).1
                        });
                        qm += gauss(x0, x1, |x| hat(&mesh, i, x).0 * hat(&mesh, j, x).0);
                    }
                    prop_assert!((a[i][j] - qa).abs() < 1e-12 * a[i][i].abs().max(1.0));
                    prop_assert!((m[i][j] - qm).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn l2_norm_matches_riemann(
            cuts in proptest::collection::vec(0.01f64..0.99, 4),
            vals in proptest::collection::vec(-3.0f64..3.0, 5),
        ) {
            let mesh = Arc::new(random_mesh(&cuts));
            let g = PiecewiseConstant::new(mesh.clone(), vals[..mesh.n_elements()].to_vec()).unwrap();
            let oracle = riemann(&mesh, 64, |e, _| g.values()[e].powi(2));
            prop_assert!((norm_l2_sq(&g) - oracle).abs() < 1e-13 * oracle.max(1.0));
        }

        #[test]
        fn energy_norm_matches_riemann(
            cuts in proptest::collection::vec(0.01f64..0.99, 4),
            a in proptest::collection::vec(-2.0f64..2.0, 6),
            b in proptest::collection::vec(-2.0f64..2.0, 6),
        ) {
            let mesh = Arc::new(random_mesh(&cuts));
            let n = mesh.n_nodes();
            let pa = PiecewiseLinear::new(mesh.clone(), a[..n].to_vec()).unwrap();
            let pb = PiecewiseLinear::new(mesh.clone(), b[..n].to_vec()).unwrap();
            let (da, db) = (pa.derivative(), pb.derivative());
            let oracle = riemann(&mesh, 16, |e, _| (da.values()[e] - db.values()[e]).powi(2));
            let got = diff_energy_norm_sq(&pa, &pb).unwrap();
            prop_assert!((got - oracle).abs() < 1e-13 * oracle.max(1.0) * 10.0);
        }

        #[test]
        fn energy_is_quadratic_in_scaling(
            vals in proptest::collection::vec(-1.0f64..1.0, 9),
            alpha in -3.0f64..3.0,
            f in -20.0f64..0.0,
        ) {
            let mesh = Arc::new(Mesh::uniform(11).unwrap());
            let mut v = vec![0.0];
            v.extend_from_slice(&vals);
            v.push(0.0);
            let p = PiecewiseLinear::new(mesh.clone(), v.clone()).unwrap();
            let scaled = PiecewiseLinear::new(mesh.clone(), v.iter().map(|x| alpha * x).collect()).unwrap();
            let quad = energy(&p, 0.0);
            let lin = quad - energy(&p, f); // = ∫ f v
            let expect = alpha * alpha * quad - alpha * lin;
            prop_assert!((energy(&scaled, f) - expect).abs() < 1e-12 * (1.0 + expect.abs()));
        }

        #[test]
        fn aligned_midpoint_rule_is_exact_for_energy(
            vals in proptest::collection::vec(-1.0f64..1.0, 5),
        ) {
            let mesh = Arc::new(Mesh::uniform(7).unwrap());
            let mut v = vec![0.0];
            v.extend_from_slice(&vals);
            v.push(0.0);
            let p = PiecewiseLinear::new(mesh.clone(), v).unwrap();
            let exact = energy(&p, -4.0);
            let d = p.derivative();
            let approx = |sub| riemann(&mesh, sub, |e, x| {
                0.5 * d.values()[e].powi(2) + 4.0 * p.eval(x).unwrap()
            });
            prop_assert!((approx(4) - exact).abs() < 1e-12);
            prop_assert!((approx(8) - exact).abs() < 1e-12);
        }
    }
}
