//! Joint spectral filtering, bivariate polynomial response fitting, and the
//! matrix-free polynomial filter of the vertex domain.

use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::{Graph, MatrixKind};
use crate::linalg::CMat;
use crate::signal::TemporalGraphSignal;
use crate::spectral::{ijft, jft, JointBasis};

/// Real univariate polynomial, value = sum a_k x^k.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Polynomial1D(pub Vec<f64>);

impl Polynomial1D {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Polynomial1D(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.0
            .iter()
            .rposition(|c| *c != 0.0)
            .unwrap_or(0)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }
}

/// A desired joint frequency response, evaluable over a grid of
/// (time eigenvalue, graph eigenvalue) pairs.
#[derive(Debug, Clone)]
pub enum JointResponse {
    /// 1 when the time angle and graph eigenvalue are both below their
    /// cutoffs, 0 otherwise. The time angle is the principal argument of
    /// the associated ring adjacency eigenvalue `1 - lambda_T`, mapped to
    /// [0, 2 pi).
    IdealLowPass { angle_cut: f64, graph_cut: f64 },
    /// `g(lambda_G) / (g(lambda_G) + f(lambda_T))`, 0 where the denominator
    /// vanishes relative to the grid maximum. With `hermitian_time` set the
    /// time argument is its real part, matching covariances built from the
    /// Hermitian part of the ring Laplacian.
    Rational {
        f: Polynomial1D,
        g: Polynomial1D,
        hermitian_time: bool,
    },
    /// Explicit table of gains; `default` fills pairs not present, and a
    /// missing pair without a default is an error.
    Tabulated {
        entries: Vec<(Complex64, Complex64, Complex64)>,
        default: Option<Complex64>,
    },
}

/// Ideal joint low-pass of the normalized-Laplacian experiment: passes
/// angle(lambda_T) <= pi and lambda_G <= 1 (the normalized Laplacian range
/// is [0, 2], so the graph cutoff sits mid-band).
pub fn ideal_lowpass_response() -> JointResponse {
    JointResponse::IdealLowPass { angle_cut: PI, graph_cut: 1.0 }
}

/// Angle convention for time eigenvalues: the ring Laplacian eigenvalue
/// `lambda_T = 1 - a` comes from adjacency eigenvalue `a` on the unit
/// circle; returns arg(a) mapped to [0, 2 pi).
pub fn time_angle(lambda_t: Complex64) -> f64 {
    let a = Complex64::new(1.0, 0.0) - lambda_t;
    let mut angle = a.arg();
    if angle < 0.0 {
        angle += 2.0 * PI;
    }
    angle
}

const ANGLE_TOL: f64 = 1e-9;

/// Anything that assigns a complex gain to each joint frequency pair.
pub trait JointGain {
    /// Gains over the Cartesian grid; result is (n_graph x n_time), entry
    /// (n, t) pairing `lambda_g[n]` with `lambda_t[t]`.
    fn gains(&self, lambda_t: &[Complex64], lambda_g: &[Complex64]) -> Result<CMat>;
}

impl JointGain for JointResponse {
    fn gains(&self, lambda_t: &[Complex64], lambda_g: &[Complex64]) -> Result<CMat> {
        if lambda_t.is_empty() || lambda_g.is_empty() {
            return Err(Error::InvalidArgument("empty eigenvalue grid".into()));
        }
        let mut out = CMat::zeros((lambda_g.len(), lambda_t.len()));
        match self {
            JointResponse::IdealLowPass { angle_cut, graph_cut } => {
                for (n, lg) in lambda_g.iter().enumerate() {
                    for (t, lt) in lambda_t.iter().enumerate() {
                        let pass = time_angle(*lt) <= angle_cut + ANGLE_TOL
                            && lg.re <= graph_cut + ANGLE_TOL;
                        out[[n, t]] = if pass {
                            Complex64::new(1.0, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                    }
                }
            }
            JointResponse::Rational { f, g, hermitian_time } => {
                let mut denoms = CMat::zeros((lambda_g.len(), lambda_t.len()));
                let mut numers = CMat::zeros((lambda_g.len(), lambda_t.len()));
                let mut max_denom = 0.0f64;
                for (n, lg) in lambda_g.iter().enumerate() {
                    let gv = g.eval_complex(*lg);
                    for (t, lt) in lambda_t.iter().enumerate() {
                        let arg = if *hermitian_time {
                            Complex64::new(lt.re, 0.0)
                        } else {
                            *lt
                        };
                        let fv = f.eval_complex(arg);
                        numers[[n, t]] = gv;
                        denoms[[n, t]] = gv + fv;
                        max_denom = max_denom.max(denoms[[n, t]].norm());
                    }
                }
                let eps = 1e-10 * max_denom;
                for n in 0..lambda_g.len() {
                    for t in 0..lambda_t.len() {
                        out[[n, t]] = if denoms[[n, t]].norm() > eps {
                            numers[[n, t]] / denoms[[n, t]]
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                    }
                }
            }
            JointResponse::Tabulated { entries, default } => {
                for (n, lg) in lambda_g.iter().enumerate() {
                    for (t, lt) in lambda_t.iter().enumerate() {
                        let hit = entries.iter().find(|(elt, elg, _)| {
                            (elt - lt).norm() < 1e-9 && (elg - lg).norm() < 1e-9
                        });
                        out[[n, t]] = match (hit, default) {
                            (Some((_, _, gain)), _) => *gain,
                            (None, Some(d)) => *d,
                            (None, None) => {
                                return Err(Error::InvalidArgument(format!(
                                    "tabulated response has no entry for ({lt}, {lg})"
                                )))
                            }
                        };
                    }
                }
            }
        }
        Ok(out)
    }
}

impl JointResponse {
    pub fn evaluate(&self, lambda_t: Complex64, lambda_g: Complex64) -> Result<Complex64> {
        Ok(self.gains(&[lambda_t], &[lambda_g])?[[0, 0]])
    }
}

/// Bivariate polynomial filter: real coefficients c_{kl} of the response
/// sum c_{kl} lambda_T^k lambda_G^l, with (K+1) x (L+1) layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialFilter {
    pub coeffs: Array2<f64>,
    pub representation: MatrixKind,
}

impl PolynomialFilter {
    pub fn new(coeffs: Array2<f64>, representation: MatrixKind) -> Self {
        PolynomialFilter { coeffs, representation }
    }

    /// Time order K.
    pub fn k_order(&self) -> usize {
        self.coeffs.nrows() - 1
    }

    /// Graph order L.
    pub fn l_order(&self) -> usize {
        self.coeffs.ncols() - 1
    }

    pub fn response_at(&self, lambda_t: Complex64, lambda_g: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut tp = Complex64::new(1.0, 0.0);
        for k in 0..self.coeffs.nrows() {
            let mut gp = Complex64::new(1.0, 0.0);
            for l in 0..self.coeffs.ncols() {
                acc += self.coeffs[[k, l]] * tp * gp;
                gp *= lambda_g;
            }
            tp *= lambda_t;
        }
        acc
    }
}

impl JointGain for PolynomialFilter {
    fn gains(&self, lambda_t: &[Complex64], lambda_g: &[Complex64]) -> Result<CMat> {
        let mut out = CMat::zeros((lambda_g.len(), lambda_t.len()));
        for (n, lg) in lambda_g.iter().enumerate() {
            for (t, lt) in lambda_t.iter().enumerate() {
                out[[n, t]] = self.response_at(*lt, *lg);
            }
        }
        Ok(out)
    }
}

/// Exact spectral filtering: transform, scale each joint coefficient by the
/// response, transform back. Never materializes an NT x NT operator.
pub fn apply_spectral_filter(
    x: &TemporalGraphSignal,
    h: &impl JointGain,
    jb: &JointBasis,
) -> Result<TemporalGraphSignal> {
    let lt: Vec<Complex64> = jb.time.eigenvalues.iter().cloned().collect();
    let lg: Vec<Complex64> = jb.graph.eigenvalues.iter().cloned().collect();
    let gains = h.gains(&lt, &lg)?;
    let y = jft(x, jb)?;
    let scaled = y.values() * &gains;
    ijft(&TemporalGraphSignal::new(scaled), jb)
}

/// Least-squares fit of c_{kl} over the Cartesian grid, complex residuals
/// stacked as real and imaginary rows, singular values below 1e-10 of the
/// largest truncated.
pub fn fit_polynomial_response(
    h_star: &JointResponse,
    lambda_t_grid: &[Complex64],
    lambda_g_grid: &[Complex64],
    k_order: usize,
    l_order: usize,
    representation: MatrixKind,
) -> Result<PolynomialFilter> {
    if lambda_t_grid.is_empty() || lambda_g_grid.is_empty() {
        return Err(Error::InvalidArgument(
            "underdetermined fit: empty grid".into(),
        ));
    }
    let targets = h_star.gains(lambda_t_grid, lambda_g_grid)?;
    let n_pairs = lambda_t_grid.len() * lambda_g_grid.len();
    let n_coef = (k_order + 1) * (l_order + 1);
    let mut a = Array2::zeros((2 * n_pairs, n_coef));
    let mut b = ndarray::Array1::zeros(2 * n_pairs);
    let mut row = 0;
    for (n, lg) in lambda_g_grid.iter().enumerate() {
        for (t, lt) in lambda_t_grid.iter().enumerate() {
            let mut tp = Complex64::new(1.0, 0.0);
            for k in 0..=k_order {
                let mut gp = Complex64::new(1.0, 0.0);
                for l in 0..=l_order {
                    let m = tp * gp;
                    a[[row, k * (l_order + 1) + l]] = m.re;
                    a[[row + 1, k * (l_order + 1) + l]] = m.im;
                    gp *= lg;
                }
                tp *= lt;
            }
            b[row] = targets[[n, t]].re;
            b[row + 1] = targets[[n, t]].im;
            row += 2;
        }
    }
    // equilibrate: monomial columns span many orders of magnitude, and
    // normalizing them keeps the SVD truncation from discarding genuine
    // directions at high orders
    let mut col_scale = vec![1.0f64; n_coef];
    for (j, s) in col_scale.iter_mut().enumerate() {
        let norm = a.column(j).iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            *s = 1.0 / norm;
            for v in a.column_mut(j).iter_mut() {
                *v *= *s;
            }
        }
    }
    let sol = crate::linalg::lstsq_truncated(&a, &b, 1e-12)?;
    let mut coeffs = Array2::zeros((k_order + 1, l_order + 1));
    for k in 0..=k_order {
        for l in 0..=l_order {
            let j = k * (l_order + 1) + l;
            coeffs[[k, l]] = sol[j] * col_scale[j];
        }
    }
    Ok(PolynomialFilter { coeffs, representation })
}

/// Relative euclidean error of the fitted response against the target over
/// the Cartesian grid.
pub fn response_error(
    h_star: &JointResponse,
    pf: &PolynomialFilter,
    lambda_t_grid: &[Complex64],
    lambda_g_grid: &[Complex64],
) -> Result<f64> {
    let target = h_star.gains(lambda_t_grid, lambda_g_grid)?;
    let fitted = pf.gains(lambda_t_grid, lambda_g_grid)?;
    let norm: f64 = target.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidArgument(
            "target response is identically zero on the grid".into(),
        ));
    }
    let diff = &target - &fitted;
    let err: f64 = diff.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    Ok(err / norm)
}

/// Matrix-free vertex-domain application of the filter: graph powers column
/// by column, then temporal backward differences row by row. Cost is
/// O(N^2 T K L) without ever forming the NT x NT operator.
pub fn apply_polynomial_filter(
    x: &TemporalGraphSignal,
    pf: &PolynomialFilter,
    g: &Graph,
    period: usize,
) -> Result<TemporalGraphSignal> {
    if x.n_nodes() != g.n_nodes() || x.period() != period {
        return Err(Error::DimensionMismatch(format!(
            "signal {}x{} vs graph N={} and period {}",
            x.n_nodes(),
            x.period(),
            g.n_nodes(),
            period
        )));
    }
    let lg = crate::linalg::to_complex(&g.representation_matrix(pf.representation).view());
    let mut z = x.values().clone();
    let mut acc = CMat::zeros(x.values().dim());
    for l in 0..=pf.l_order() {
        if l > 0 {
            z = lg.dot(&z);
        }
        let mut w = z.clone();
        acc.scaled_add(pf.coeffs[[0, l]].into(), &w);
        for k in 1..=pf.k_order() {
            w = temporal_laplacian_apply(&w);
            acc.scaled_add(pf.coeffs[[k, l]].into(), &w);
        }
    }
    Ok(TemporalGraphSignal::new(acc))
}

/// Right-multiplication by L_T^T for the directed time ring: backward
/// difference along each row, with cyclic wrap. T = 1 gives the zero map
/// (the 1x1 ring Laplacian is zero).
pub fn temporal_laplacian_apply(v: &CMat) -> CMat {
    let (n, t) = v.dim();
    let mut out = CMat::zeros((n, t));
    if t == 1 {
        return out;
    }
    for i in 0..n {
        for j in 0..t {
            let prev = (j + t - 1) % t;
            out[[i, j]] = v[[i, j]] - v[[i, prev]];
        }
    }
    out
}

/// Dense Kronecker operator sum c_{kl} (L_T^k (x) L_G^l); oracle for the
/// matrix-free path.
pub fn dense_polynomial_operator(pf: &PolynomialFilter, g: &Graph, period: usize) -> Array2<f64> {
    let lt = crate::graph::ring_graph(period).representation_matrix(MatrixKind::Laplacian);
    let lg = g.representation_matrix(pf.representation);
    let nt = g.n_nodes() * period;
    let mut out = Array2::zeros((nt, nt));
    let mut tp = Array2::eye(period);
    for k in 0..=pf.k_order() {
        if k > 0 {
            tp = lt.dot(&tp);
        }
        let mut gp = Array2::eye(g.n_nodes());
        for l in 0..=pf.l_order() {
            if l > 0 {
                gp = lg.dot(&gp);
            }
            let c = pf.coeffs[[k, l]];
            if c != 0.0 {
                for bi in 0..period {
                    for bj in 0..period {
                        let tv = tp[[bi, bj]];
                        if tv != 0.0 {
                            for i in 0..g.n_nodes() {
                                for j in 0..g.n_nodes() {
                                    out[[bi * g.n_nodes() + i, bj * g.n_nodes() + j]] +=
                                        c * tv * gp[[i, j]];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Default fit grids: the actual ring and graph eigenvalues of the instance.
pub fn eigenvalue_grids(jb: &JointBasis) -> (Vec<Complex64>, Vec<Complex64>) {
    (
        jb.time.eigenvalues.iter().cloned().collect(),
        jb.graph.eigenvalues.iter().cloned().collect(),
    )
}
