//! Eigenbases for the time, graph, and joint domains, and the forward and
//! inverse transforms between signal and spectral representations.
//!
//! The time basis is the analytic normalized DFT matrix, never the output of
//! a numerical eigensolver: the analytic form fixes ordering and phase, and
//! the fact that it diagonalizes the ring Laplacian is verified in tests
//! rather than assumed.

use ndarray::{Array1, Array2};

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::{joint_graph, ring_graph, Graph, MatrixKind};
use crate::linalg::{self, CMat};
use crate::signal::TemporalGraphSignal;

pub const DEFECTIVE_COND_LIMIT: f64 = 1e12;
pub const ORACLE_SIZE_GUARD: usize = 400;

/// One diagonalizing basis: rows of `forward` are analysis vectors,
/// `inverse` undoes it, `eigenvalues` align with the rows of `forward`.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    pub forward: CMat,
    pub inverse: CMat,
    pub eigenvalues: Array1<Complex64>,
    pub unitary: bool,
    pub representation: MatrixKind,
}

impl SpectralBasis {
    pub fn dim(&self) -> usize {
        self.forward.nrows()
    }
}

/// Time and graph bases together; the implied NT x NT joint matrix
/// `psi_T (x) psi_G` is only materialized by the dense oracle.
#[derive(Debug, Clone)]
pub struct JointBasis {
    pub time: SpectralBasis,
    pub graph: SpectralBasis,
}

impl JointBasis {
    pub fn new(g: &Graph, t: usize, kind: MatrixKind) -> Result<Self> {
        Ok(JointBasis {
            time: dft_basis(t),
            graph: graph_basis(g, kind)?,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.graph.dim()
    }

    pub fn period(&self) -> usize {
        self.time.dim()
    }

    /// Joint eigenvalue `lambda_T(t) + lambda_G(n)` (0-based indices).
    pub fn joint_eigenvalue(&self, t: usize, n: usize) -> Complex64 {
        self.time.eigenvalues[t] + self.graph.eigenvalues[n]
    }
}

/// Normalized DFT basis for a period of `t` samples. Eigenvalues are those
/// of the ring-graph Laplacian, `1 - exp(-2 pi i k / T)`, aligned so the
/// rows of `forward` are left eigenvectors of `L_T`.
pub fn dft_basis(t: usize) -> SpectralBasis {
    assert!(t >= 1);
    let scale = 1.0 / (t as f64).sqrt();
    let mut forward = CMat::zeros((t, t));
    for row in 0..t {
        for col in 0..t {
            let phase = -2.0 * PI * (row as f64) * (col as f64) / t as f64;
            forward[[row, col]] = Complex64::from_polar(scale, phase);
        }
    }
    // unitary: inverse is the conjugate transpose
    let inverse = forward.t().mapv(|v| v.conj());
    let eigenvalues = Array1::from_iter((0..t).map(|k| {
        Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -2.0 * PI * k as f64 / t as f64)
    }));
    SpectralBasis {
        forward,
        inverse,
        eigenvalues,
        unitary: true,
        representation: MatrixKind::Laplacian,
    }
}

/// Eigenbasis of a matrix representation of `g`. Symmetric representations
/// get a real orthonormal decomposition with ascending eigenvalues; general
/// ones use the right-eigenvector matrix V with `forward = V^{-1}`.
pub fn graph_basis(g: &Graph, kind: MatrixKind) -> Result<SpectralBasis> {
    let m = g.representation_matrix(kind);
    let symmetric = is_symmetric(&m);
    if symmetric {
        let (vals, mut vecs) = linalg::eigh_ascending(&m)?;
        fix_real_signs(&mut vecs);
        let phi = linalg::to_complex(&vecs.view());
        let psi = phi.t().to_owned();
        Ok(SpectralBasis {
            forward: psi,
            inverse: phi,
            eigenvalues: vals.mapv(|v| Complex64::new(v, 0.0)),
            unitary: true,
            representation: kind,
        })
    } else {
        let (vals, mut vecs) = linalg::eig_general(&m)?;
        fix_complex_phases(&mut vecs);
        let cond = linalg::condition_number(&vecs)?;
        if !cond.is_finite() || cond > DEFECTIVE_COND_LIMIT {
            return Err(Error::DefectiveMatrix(cond));
        }
        let psi = linalg::inv_complex(&vecs)?;
        Ok(SpectralBasis {
            forward: psi,
            inverse: vecs,
            eigenvalues: vals,
            unitary: false,
            representation: kind,
        })
    }
}

fn is_symmetric(m: &Array2<f64>) -> bool {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            if (m[[i, j]] - m[[j, i]]).abs() > 1e-12 {
                return false;
            }
        }
    }
    true
}

fn fix_real_signs(vecs: &mut Array2<f64>) {
    for mut col in vecs.columns_mut() {
        let mut best = 0usize;
        for (i, v) in col.iter().enumerate() {
            if v.abs() > col[best].abs() {
                best = i;
            }
        }
        if col[best] < 0.0 {
            col.mapv_inplace(|v| -v);
        }
    }
}

fn fix_complex_phases(vecs: &mut CMat) {
    for mut col in vecs.columns_mut() {
        let mut best = 0usize;
        for (i, v) in col.iter().enumerate() {
            if v.norm() > col[best].norm() {
                best = i;
            }
        }
        let pivot = col[best];
        if pivot.norm() > 0.0 {
            let rot = pivot.conj() / pivot.norm();
            col.mapv_inplace(|v| v * rot);
        }
    }
}

fn check_period(x: &TemporalGraphSignal, t: usize) -> Result<()> {
    if x.period() != t {
        return Err(Error::DimensionMismatch(format!(
            "signal period {} vs basis dimension {}",
            x.period(),
            t
        )));
    }
    Ok(())
}

fn check_nodes(x: &TemporalGraphSignal, n: usize) -> Result<()> {
    if x.n_nodes() != n {
        return Err(Error::DimensionMismatch(format!(
            "signal has {} nodes vs basis dimension {}",
            x.n_nodes(),
            n
        )));
    }
    Ok(())
}

/// Row-wise DFT: `X psi_T^T`.
pub fn dft(x: &TemporalGraphSignal) -> TemporalGraphSignal {
    let basis = dft_basis(x.period());
    TemporalGraphSignal::new(x.values().dot(&basis.forward.t()))
}

pub fn idft(y: &TemporalGraphSignal) -> TemporalGraphSignal {
    let basis = dft_basis(y.period());
    TemporalGraphSignal::new(y.values().dot(&basis.inverse.t()))
}

/// Column-wise GFT: `psi_G X`.
pub fn gft(x: &TemporalGraphSignal, b: &SpectralBasis) -> Result<TemporalGraphSignal> {
    check_nodes(x, b.dim())?;
    Ok(TemporalGraphSignal::new(b.forward.dot(x.values())))
}

pub fn igft(y: &TemporalGraphSignal, b: &SpectralBasis) -> Result<TemporalGraphSignal> {
    check_nodes(y, b.dim())?;
    Ok(TemporalGraphSignal::new(b.inverse.dot(y.values())))
}

/// Joint transform `psi_G X psi_T^T`, computed as gft composed with dft.
pub fn jft(x: &TemporalGraphSignal, jb: &JointBasis) -> Result<TemporalGraphSignal> {
    check_period(x, jb.period())?;
    gft(&dft(x), &jb.graph)
}

pub fn ijft(y: &TemporalGraphSignal, jb: &JointBasis) -> Result<TemporalGraphSignal> {
    check_period(y, jb.period())?;
    Ok(idft(&igft(y, &jb.graph)?))
}

/// Dense oracle: applies the materialized `psi_T (x) psi_G` to vec(X) after
/// building the joint-graph Laplacian. Guarded to small NT.
pub fn jft_via_joint_graph_oracle(
    x: &TemporalGraphSignal,
    g: &Graph,
    kind: MatrixKind,
) -> Result<TemporalGraphSignal> {
    let n = g.n_nodes();
    let t = x.period();
    check_nodes(x, n)?;
    if n * t > ORACLE_SIZE_GUARD {
        return Err(Error::SizeGuard { actual: n * t, guard: ORACLE_SIZE_GUARD });
    }
    // the joint graph exists and has Laplacian L_T (+) L_G; building it here
    // keeps the oracle honest about the graph-product route
    let _ = joint_graph(g, t)?;
    let jb = JointBasis::new(g, t, kind)?;
    let psi_j = linalg::kron_complex(&jb.time.forward, &jb.graph.forward);
    let y = psi_j.dot(&linalg::vectorize(x.values()));
    Ok(TemporalGraphSignal::new(linalg::unvectorize(&y, n, t)?))
}

/// Dense joint Laplacian of the product graph, exposed for oracle checks.
pub fn dense_joint_laplacian(g: &Graph, t: usize) -> Result<Array2<f64>> {
    let lt = ring_graph(t).representation_matrix(MatrixKind::Laplacian);
    let lg = g.representation_matrix(MatrixKind::Laplacian);
    crate::graph::kronecker_sum(&lt, &lg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use ndarray::array;

    fn path3() -> Graph {
        Graph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0)], false).unwrap()
    }

    fn basis_residuals(b: &SpectralBasis, source: &Array2<f64>) {
        let n = b.dim();
        let eye = CMat::eye(n);
        let prod = b.forward.dot(&b.inverse);
        assert!(linalg::rel_error(&prod, &eye) < 1e-10, "psi phi != I");
        if b.unitary {
            let herm = b.forward.t().mapv(|v| v.conj());
            assert!(linalg::rel_error(&b.inverse, &herm) < 1e-10);
        }
        let rebuilt = b
            .inverse
            .dot(&CMat::from_diag(&b.eigenvalues))
            .dot(&b.forward);
        let src = linalg::to_complex(&source.view());
        assert!(linalg::rel_error(&rebuilt, &src) < 1e-8, "reconstruction failed");
    }

    #[test]
    fn dft_basis_t1() {
        let b = dft_basis(1);
        assert_eq!(b.forward[[0, 0]], Complex64::new(1.0, 0.0));
        assert_eq!(b.eigenvalues[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn dft_basis_t2() {
        let b = dft_basis(2);
        let s = 1.0 / 2.0f64.sqrt();
        let expected = array![[s, s], [s, -s]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((b.forward[[i, j]] - Complex64::new(expected[[i, j]], 0.0)).norm() < 1e-12);
            }
        }
        assert!((b.eigenvalues[0]).norm() < 1e-12);
        assert!((b.eigenvalues[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dft_basis_diagonalizes_ring_laplacian() {
        for t in [2usize, 3, 4, 7] {
            let b = dft_basis(t);
            let lt = linalg::to_complex(
                &ring_graph(t).representation_matrix(MatrixKind::Laplacian).view(),
            );
            let d = b.forward.dot(&lt).dot(&b.inverse);
            for i in 0..t {
                for j in 0..t {
                    if i == j {
                        assert!((d[[i, j]] - b.eigenvalues[i]).norm() < 1e-10);
                    } else {
                        assert!(d[[i, j]].norm() < 1e-10, "T={t} off-diagonal {i},{j}");
                    }
                }
            }
        }
    }

    #[test]
    fn graph_basis_path3() {
        let b = graph_basis(&path3(), MatrixKind::Laplacian).unwrap();
        let expected = [0.0, 1.0, 3.0];
        for (v, e) in b.eigenvalues.iter().zip(expected) {
            assert!((v.re - e).abs() < 1e-10 && v.im.abs() < 1e-12);
        }
        basis_residuals(&b, &path3().representation_matrix(MatrixKind::Laplacian));
    }

    #[test]
    fn connected_laplacian_constant_kernel() {
        let b = graph_basis(&path3(), MatrixKind::Laplacian).unwrap();
        assert!(b.eigenvalues[0].norm() < 1e-10);
        let v0 = b.inverse.column(0);
        let first = v0[0];
        for v in v0.iter() {
            assert!((v - first).norm() < 1e-10, "kernel eigenvector not constant");
        }
    }

    #[test]
    fn triangle_normalized_basis() {
        let g = Graph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], false).unwrap();
        let b = graph_basis(&g, MatrixKind::NormalizedLaplacian).unwrap();
        let expected = [0.0, 1.5, 1.5];
        for (v, e) in b.eigenvalues.iter().zip(expected) {
            assert!((v.re - e).abs() < 1e-10);
        }
    }

    #[test]
    fn directed_graph_basis_not_unitary() {
        let g = Graph::new(2, vec![(0, 1, 1.0), (1, 0, 2.0)], true).unwrap();
        let b = graph_basis(&g, MatrixKind::Laplacian).unwrap();
        assert!(!b.unitary);
        basis_residuals(&b, &g.representation_matrix(MatrixKind::Laplacian));
    }

    #[test]
    fn defective_representation_rejected() {
        // directed path: nilpotent-ish adjacency is not diagonalizable
        let g = Graph::new(2, vec![(0, 1, 1.0)], true).unwrap();
        match graph_basis(&g, MatrixKind::Adjacency) {
            Err(Error::DefectiveMatrix(_)) => {}
            other => panic!("expected DefectiveMatrix, got {other:?}"),
        }
    }

    #[test]
    fn dft_dc_bin() {
        let t = 5;
        let c = 2.5;
        let x = TemporalGraphSignal::from_real(Array2::from_elem((1, t), c));
        let y = dft(&x);
        assert!((y.get(0, 0) - Complex64::new(c * (t as f64).sqrt(), 0.0)).norm() < 1e-10);
        for s in 1..t {
            assert!(y.get(0, s).norm() < 1e-10);
        }
    }

    #[test]
    fn dft_two_point() {
        let x = TemporalGraphSignal::from_real(array![[1.0, -1.0]]);
        let y = dft(&x);
        assert!(y.get(0, 0).norm() < 1e-12);
        assert!((y.get(0, 1) - Complex64::new(2.0f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dft_parseval_and_roundtrip() {
        let x = TemporalGraphSignal::from_real(array![
            [0.3, -1.2, 0.7, 2.2],
            [1.0, 0.1, -0.4, 0.9]
        ]);
        let y = dft(&x);
        assert!((y.frobenius_norm() - x.frobenius_norm()).abs() < 1e-10);
        let back = idft(&y);
        let diff = back.values() - x.values();
        assert!(linalg::frobenius(&diff) < 1e-10);
    }

    #[test]
    fn gft_constant_signal() {
        let b = graph_basis(&path3(), MatrixKind::Laplacian).unwrap();
        let x = TemporalGraphSignal::from_real(Array2::from_elem((3, 2), 1.0));
        let y = gft(&x, &b).unwrap();
        for t in 0..2 {
            for n in 1..3 {
                assert!(y.get(n, t).norm() < 1e-10);
            }
            assert!(y.get(0, t).norm() > 0.5);
        }
    }

    #[test]
    fn gft_unit_vector_coordinates() {
        let b = graph_basis(&path3(), MatrixKind::Laplacian).unwrap();
        let x = TemporalGraphSignal::from_real(array![[1.0], [0.0], [0.0]]);
        let y = gft(&x, &b).unwrap();
        // coordinates of e_1 in the eigenbasis = first column of psi_G
        for n in 0..3 {
            assert!((y.get(n, 0) - b.forward[[n, 0]]).norm() < 1e-12);
        }
        let back = igft(&y, &b).unwrap();
        let diff = back.values() - x.values();
        assert!(linalg::frobenius(&diff) < 1e-10);
    }

    #[test]
    fn jft_degenerate_cases() {
        // T = 1: jft equals gft
        let g = path3();
        let jb = JointBasis::new(&g, 1, MatrixKind::Laplacian).unwrap();
        let x = TemporalGraphSignal::from_real(array![[1.0], [-0.5], [2.0]]);
        let a = jft(&x, &jb).unwrap();
        let b = gft(&x, &jb.graph).unwrap();
        assert!(linalg::rel_error(a.values(), b.values()) < 1e-12);

        // N = 1: jft equals dft
        let point = Graph::new(1, vec![], false).unwrap();
        let jb = JointBasis::new(&point, 4, MatrixKind::Laplacian).unwrap();
        let x = TemporalGraphSignal::from_real(array![[1.0, 0.0, -1.0, 0.5]]);
        let a = jft(&x, &jb).unwrap();
        let b = dft(&x);
        assert!(linalg::rel_error(a.values(), b.values()) < 1e-12);
    }

    #[test]
    fn jft_matches_kronecker_vectorization() {
        let g = Graph::new(
            4,
            vec![(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (0, 3, 0.5)],
            false,
        )
        .unwrap();
        let jb = JointBasis::new(&g, 3, MatrixKind::Laplacian).unwrap();
        let x = TemporalGraphSignal::from_real(array![
            [0.1, 1.7, -0.3],
            [2.0, -0.2, 0.4],
            [-1.1, 0.8, 0.9],
            [0.6, -1.4, 0.2]
        ]);
        let y = jft(&x, &jb).unwrap();
        let psi_j = linalg::kron_complex(&jb.time.forward, &jb.graph.forward);
        let vec_y = psi_j.dot(&linalg::vectorize(x.values()));
        let direct = linalg::vectorize(y.values());
        let diff = &vec_y - &direct;
        let err: f64 = diff.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        assert!(err < 1e-10);
    }

    #[test]
    fn order_independence() {
        let g = path3();
        let jb = JointBasis::new(&g, 4, MatrixKind::Laplacian).unwrap();
        let x = TemporalGraphSignal::from_real(array![
            [0.3, -1.2, 0.7, 2.2],
            [1.0, 0.1, -0.4, 0.9],
            [-0.8, 0.5, 1.3, -0.2]
        ]);
        let a = gft(&dft(&x), &jb.graph).unwrap();
        let b = dft(&gft(&x, &jb.graph).unwrap());
        assert!(linalg::rel_error(a.values(), b.values()) < 1e-12);
    }

    #[test]
    fn oracle_matches_jft() {
        let g = path3();
        let t = 2;
        let jb = JointBasis::new(&g, t, MatrixKind::Laplacian).unwrap();
        let x = TemporalGraphSignal::from_real(array![[0.7, -0.1], [1.3, 0.2], [-0.5, 0.9]]);
        let direct = jft(&x, &jb).unwrap();
        let via_joint = jft_via_joint_graph_oracle(&x, &g, MatrixKind::Laplacian).unwrap();
        assert!(linalg::rel_error(via_joint.values(), direct.values()) < 1e-8);
    }

    #[test]
    fn joint_laplacian_eigendecomposition_identity() {
        // L_J Phi_J = Phi_J diag(lambda_T (+) lambda_G)
        let g = path3();
        let t = 3;
        let jb = JointBasis::new(&g, t, MatrixKind::Laplacian).unwrap();
        let lj = linalg::to_complex(&dense_joint_laplacian(&g, t).unwrap().view());
        let phi_j = linalg::kron_complex(&jb.time.inverse, &jb.graph.inverse);
        let mut lam = Array1::zeros(3 * t);
        for tt in 0..t {
            for nn in 0..3 {
                lam[tt * 3 + nn] = jb.joint_eigenvalue(tt, nn);
            }
        }
        let lhs = lj.dot(&phi_j);
        let rhs = phi_j.dot(&CMat::from_diag(&lam));
        assert!(linalg::rel_error(&lhs, &rhs) < 1e-8);
    }

    #[test]
    fn oracle_size_guard() {
        let g = Graph::new(30, (0..29).map(|i| (i, i + 1, 1.0)).collect(), false).unwrap();
        let x = TemporalGraphSignal::from_real(Array2::zeros((30, 20)));
        match jft_via_joint_graph_oracle(&x, &g, MatrixKind::Laplacian) {
            Err(Error::SizeGuard { .. }) => {}
            other => panic!("expected SizeGuard, got {other:?}"),
        }
    }
}
