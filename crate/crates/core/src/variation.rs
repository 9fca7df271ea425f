//! Joint smoothness measures: local variation, the p-Dirichlet form, and
//! the quadratic form of the joint Laplacian.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::signal::TemporalGraphSignal;

/// Local variation per (node, time) plus the global S_p value.
#[derive(Debug, Clone)]
pub struct VariationReport {
    pub local: Array2<f64>,
    pub global: f64,
    pub p: f64,
}

fn real_signal(x: &TemporalGraphSignal, g: &Graph) -> Result<Array2<f64>> {
    if g.is_directed() {
        return Err(Error::InvalidArgument(
            "variation is defined for undirected input graphs".into(),
        ));
    }
    if x.n_nodes() != g.n_nodes() {
        return Err(Error::DimensionMismatch(format!(
            "signal has {} nodes, graph has {}",
            x.n_nodes(),
            g.n_nodes()
        )));
    }
    x.to_real(1e-9)
}

fn local_variation_at(
    values: &Array2<f64>,
    neighbors: &[Vec<(usize, f64)>],
    n: usize,
    t: usize,
) -> f64 {
    let period = values.ncols();
    let mut acc = 0.0;
    for &(m, w) in &neighbors[n] {
        let d = values[[m, t]] - values[[n, t]];
        acc += w * d * d;
    }
    // backward temporal difference with cyclic wrap
    let prev = (t + period - 1) % period;
    let d = values[[n, prev]] - values[[n, t]];
    acc += d * d;
    acc.sqrt()
}

/// `||nabla_{n,t} X||_2` at one node and time instant (0-based, `t` taken
/// modulo the period).
pub fn local_variation(
    x: &TemporalGraphSignal,
    g: &Graph,
    n: usize,
    t: usize,
) -> Result<f64> {
    let values = real_signal(x, g)?;
    if n >= g.n_nodes() {
        return Err(Error::IndexOutOfRange { index: n + 1, n_nodes: g.n_nodes() });
    }
    let t = t % x.period();
    Ok(local_variation_at(&values, &g.neighbor_lists(), n, t))
}

/// Global smoothness `S_p(X) = (1/p) sum_{n,t} ||nabla_{n,t} X||_2^p`.
pub fn dirichlet_form(x: &TemporalGraphSignal, g: &Graph, p: f64) -> Result<f64> {
    Ok(variation_report(x, g, p)?.global)
}

pub fn variation_report(x: &TemporalGraphSignal, g: &Graph, p: f64) -> Result<VariationReport> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must be >= 1, got {p}")));
    }
    let values = real_signal(x, g)?;
    let neighbors = g.neighbor_lists();
    let (n_nodes, period) = values.dim();
    let mut local = Array2::zeros((n_nodes, period));
    let mut global = 0.0;
    for n in 0..n_nodes {
        for t in 0..period {
            let lv = local_variation_at(&values, &neighbors, n, t);
            local[[n, t]] = lv;
            global += lv.powf(p);
        }
    }
    Ok(VariationReport { local, global: global / p, p })
}

/// `vec(X)^T L_J vec(X)` computed matrix-free:
/// `sum_t x_t^T L_G x_t + sum_{n,t} X_{n,t} (X_{n,t} - X_{n,t-1})`.
pub fn s2_quadratic(x: &TemporalGraphSignal, g: &Graph) -> Result<f64> {
    let values = real_signal(x, g)?;
    let (n_nodes, period) = values.dim();
    let mut acc = 0.0;
    // graph part as the weighted edge-difference sum
    for t in 0..period {
        for e in g.edges() {
            let d = values[[e.from, t]] - values[[e.to, t]];
            acc += e.weight * d * d;
        }
    }
    if period > 1 {
        for n in 0..n_nodes {
            for t in 0..period {
                let prev = (t + period - 1) % period;
                acc += values[[n, t]] * (values[[n, t]] - values[[n, prev]]);
            }
        }
    }
    Ok(acc)
}
