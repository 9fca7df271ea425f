//! Interference cancellation: the closed-form joint Wiener response, its
//! dense operator oracle, Gaussian sampling of the signal model, and
//! Monte-Carlo mean-squared-error comparisons.
//!
//! The desired signal has covariance `I_T (x) g(L_G)`; the interference has
//! covariance `f(H_T) (x) I_N`, where `H_T` is the Hermitian part of the
//! directed ring Laplacian. Evaluating `f` on `H_T` (equivalently on the
//! real parts `1 - cos(2 pi k / T)` of the ring eigenvalues) is what makes
//! the interference covariance a valid PSD matrix.

use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::filters::{JointResponse, Polynomial1D};
use crate::graph::{ring_graph, Graph, MatrixKind};
use crate::linalg;

pub const WIENER_SIZE_GUARD: usize = 400;
pub const PINV_RCOND: f64 = 1e-10;

/// Spectral densities of the two zero-mean signals.
#[derive(Debug, Clone)]
pub struct CovarianceModel {
    /// Graph-domain density g of the desired signal.
    pub graph_density: Polynomial1D,
    /// Time-domain density f of the interference.
    pub time_density: Polynomial1D,
}

impl CovarianceModel {
    pub fn new(graph_density: Polynomial1D, time_density: Polynomial1D) -> Self {
        CovarianceModel { graph_density, time_density }
    }
}

/// `g(lambda_G) / (g(lambda_G) + f(lambda_T))`, zero where the denominator
/// vanishes; time eigenvalues enter through their real part.
pub fn wiener_response(m: &CovarianceModel) -> JointResponse {
    JointResponse::Rational {
        f: m.time_density.clone(),
        g: m.graph_density.clone(),
        hermitian_time: true,
    }
}

/// Hermitian part of the directed ring Laplacian.
pub fn hermitian_ring_laplacian(t: usize) -> Array2<f64> {
    let lt = ring_graph(t).representation_matrix(MatrixKind::Laplacian);
    (&lt + &lt.t()) / 2.0
}

fn kron_real(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let v = a[[i, j]];
            if v != 0.0 {
                for p in 0..br {
                    for q in 0..bc {
                        out[[i * br + p, j * bc + q]] = v * b[[p, q]];
                    }
                }
            }
        }
    }
    out
}

fn check_guard(n: usize, t: usize) -> Result<()> {
    if n * t > WIENER_SIZE_GUARD {
        return Err(Error::SizeGuard { actual: n * t, guard: WIENER_SIZE_GUARD });
    }
    Ok(())
}

/// Dense covariance of the desired signal, `I_T (x) g(L_G)`.
pub fn signal_covariance_dense(m: &CovarianceModel, g: &Graph, t: usize) -> Result<Array2<f64>> {
    check_guard(g.n_nodes(), t)?;
    let lg = g.representation_matrix(MatrixKind::Laplacian);
    let gl = linalg::symmetric_matrix_function(&lg, |v| m.graph_density.eval_real(v))?;
    Ok(kron_real(&Array2::eye(t), &gl))
}

/// Dense covariance of the interference, `f(H_T) (x) I_N`.
pub fn interference_covariance_dense(
    m: &CovarianceModel,
    n_nodes: usize,
    t: usize,
) -> Result<Array2<f64>> {
    check_guard(n_nodes, t)?;
    let ht = hermitian_ring_laplacian(t);
    let fl = linalg::symmetric_matrix_function(&ht, |v| m.time_density.eval_real(v))?;
    Ok(kron_real(&fl, &Array2::eye(n_nodes)))
}

/// Oracle Wiener operator `Sigma_u (Sigma_u + Sigma_w)^+` built densely.
pub fn wiener_operator_dense(m: &CovarianceModel, g: &Graph, t: usize) -> Result<Array2<f64>> {
    let su = signal_covariance_dense(m, g, t)?;
    let sw = interference_covariance_dense(m, g.n_nodes(), t)?;
    let pinv = linalg::pinv_symmetric(&(&su + &sw), PINV_RCOND)?;
    Ok(su.dot(&pinv))
}

/// Real orthonormal eigenpairs of the two covariance factors: the graph
/// Laplacian and the Hermitian ring Laplacian.
fn factor_bases(g: &Graph, t: usize) -> Result<(Array1<f64>, Array2<f64>, Array1<f64>, Array2<f64>)> {
    let lg = g.representation_matrix(MatrixKind::Laplacian);
    let (lam_g, v_g) = linalg::eigh_ascending(&lg)?;
    let ht = hermitian_ring_laplacian(t);
    let (mu_t, v_t) = linalg::eigh_ascending(&ht)?;
    Ok((lam_g, v_g, mu_t, v_t))
}

/// Dense operator with per-joint-frequency gains `gains[(n, t)]`, built in
/// the shared real eigenbasis `V_T (x) V_G`.
pub fn spectral_operator_dense(
    gains: &Array2<f64>,
    v_t: &Array2<f64>,
    v_g: &Array2<f64>,
) -> Array2<f64> {
    let v_j = kron_real(v_t, v_g);
    let (n, t) = gains.dim();
    let mut scaled = v_j.clone();
    for tt in 0..t {
        for nn in 0..n {
            let idx = tt * n + nn;
            let h = gains[[nn, tt]];
            scaled.column_mut(idx).mapv_inplace(|v| v * h);
        }
    }
    scaled.dot(&v_j.t())
}

fn density_values(p: &Polynomial1D, lams: &Array1<f64>) -> Result<Array1<f64>> {
    let mut out = Array1::zeros(lams.len());
    for (i, l) in lams.iter().enumerate() {
        let v = p.eval_real(*l);
        if v < -1e-12 {
            return Err(Error::NonPsdModel(v));
        }
        out[i] = v.max(0.0);
    }
    Ok(out)
}

/// The four competing gain tables on the joint eigenvalue grid: joint
/// Wiener, best time-only, best graph-only, identity.
pub fn competing_gain_tables(
    m: &CovarianceModel,
    g: &Graph,
    t: usize,
) -> Result<Vec<(String, Array2<f64>)>> {
    let (lam_g, _, mu_t, _) = factor_bases(g, t)?;
    let gv = density_values(&m.graph_density, &lam_g)?;
    let fv = density_values(&m.time_density, &mu_t)?;
    let n = lam_g.len();
    let eps = {
        let mut max = 0.0f64;
        for &a in gv.iter() {
            for &b in fv.iter() {
                max = max.max((a + b).abs());
            }
        }
        PINV_RCOND * max
    };
    let safe = |num: f64, den: f64| if den.abs() > eps { num / den } else { 0.0 };

    let mut joint = Array2::zeros((n, t));
    for nn in 0..n {
        for tt in 0..t {
            joint[[nn, tt]] = safe(gv[nn], gv[nn] + fv[tt]);
        }
    }
    let g_mean = gv.sum() / n as f64;
    let f_mean = fv.sum() / t as f64;
    let mut time_only = Array2::zeros((n, t));
    for tt in 0..t {
        let h = safe(g_mean, g_mean + fv[tt]);
        for nn in 0..n {
            time_only[[nn, tt]] = h;
        }
    }
    let mut graph_only = Array2::zeros((n, t));
    for nn in 0..n {
        let h = safe(gv[nn], gv[nn] + f_mean);
        for tt in 0..t {
            graph_only[[nn, tt]] = h;
        }
    }
    let identity = Array2::from_elem((n, t), 1.0);
    Ok(vec![
        ("wiener_joint".into(), joint),
        ("wiener_time_only".into(), time_only),
        ("wiener_graph_only".into(), graph_only),
        ("identity".into(), identity),
    ])
}

/// Dense operators for the four standard competitors.
pub fn competing_operators(
    m: &CovarianceModel,
    g: &Graph,
    t: usize,
) -> Result<Vec<(String, Array2<f64>)>> {
    check_guard(g.n_nodes(), t)?;
    let (_, v_g, _, v_t) = factor_bases(g, t)?;
    Ok(competing_gain_tables(m, g, t)?
        .into_iter()
        .map(|(name, gains)| (name, spectral_operator_dense(&gains, &v_t, &v_g)))
        .collect())
}

/// One Monte-Carlo draw: desired signal, interference, and their sum, as
/// N x T real matrices.
#[derive(Debug, Clone)]
pub struct SignalDraw {
    pub desired: Array2<f64>,
    pub interference: Array2<f64>,
    pub observed: Array2<f64>,
}

/// Deterministic Gaussian sampling: draw `i` uses stream `i` of a counter
/// RNG seeded with `seed`, so the draw list is stable under `count` changes.
pub fn sample_signals(
    m: &CovarianceModel,
    g: &Graph,
    t: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<SignalDraw>> {
    let n = g.n_nodes();
    check_guard(n, t)?;
    let (lam_g, v_g, mu_t, v_t) = factor_bases(g, t)?;
    let g_half = density_values(&m.graph_density, &lam_g)?.mapv(f64::sqrt);
    let f_half = density_values(&m.time_density, &mu_t)?.mapv(f64::sqrt);
    // u = V_G diag(sqrt g) Z and w = Z' (V_T diag(sqrt f))^T
    let mut a_graph = v_g.clone();
    for (j, s) in g_half.iter().enumerate() {
        a_graph.column_mut(j).mapv_inplace(|v| v * s);
    }
    let mut a_time = v_t.clone();
    for (j, s) in f_half.iter().enumerate() {
        a_time.column_mut(j).mapv_inplace(|v| v * s);
    }
    let mut draws = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let z_u = standard_normal_matrix(&mut rng, n, t);
        let z_w = standard_normal_matrix(&mut rng, n, t);
        let desired = a_graph.dot(&z_u);
        let interference = z_w.dot(&a_time.t());
        let observed = &desired + &interference;
        draws.push(SignalDraw { desired, interference, observed });
    }
    Ok(draws)
}

fn standard_normal_matrix(rng: &mut ChaCha8Rng, n: usize, t: usize) -> Array2<f64> {
    Array2::from_shape_fn((n, t), |_| StandardNormal.sample(rng))
}

#[derive(Debug, Clone)]
pub struct MseRow {
    pub name: String,
    pub mse: f64,
    pub stderr: f64,
    pub draws: usize,
}

/// Monte-Carlo estimate of `E ||F x - u||^2 / NT` for each operator.
pub fn mse_report(
    m: &CovarianceModel,
    g: &Graph,
    t: usize,
    filters: &[(String, Array2<f64>)],
    count: usize,
    seed: u64,
) -> Result<Vec<MseRow>> {
    let n = g.n_nodes();
    let nt = (n * t) as f64;
    let draws = sample_signals(m, g, t, count, seed)?;
    let mut rows = Vec::with_capacity(filters.len());
    for (name, op) in filters {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for d in &draws {
            let vx = linalg::vectorize_real(&d.observed);
            let vu = linalg::vectorize_real(&d.desired);
            let est = op.dot(&vx);
            let err = &est - &vu;
            let per_draw = err.dot(&err) / nt;
            sum += per_draw;
            sum_sq += per_draw * per_draw;
        }
        let mean = sum / count as f64;
        let var = (sum_sq / count as f64 - mean * mean).max(0.0);
        let stderr = (var / count as f64).sqrt();
        rows.push(MseRow { name: name.clone(), mse: mean, stderr, draws: count });
    }
    Ok(rows)
}

/// Exact mean-squared error of a linear estimator under the model:
/// `(tr(F Sigma_x F^T) - 2 tr(F Sigma_u) + tr(Sigma_u)) / NT`.
pub fn analytic_mse(
    m: &CovarianceModel,
    g: &Graph,
    t: usize,
    op: &Array2<f64>,
) -> Result<f64> {
    let su = signal_covariance_dense(m, g, t)?;
    let sw = interference_covariance_dense(m, g.n_nodes(), t)?;
    let sx = &su + &sw;
    let nt = (g.n_nodes() * t) as f64;
    let t1 = op.dot(&sx).dot(&op.t()).diag().sum();
    let t2 = op.dot(&su).diag().sum();
    let t3 = su.diag().sum();
    Ok((t1 - 2.0 * t2 + t3) / nt)
}
