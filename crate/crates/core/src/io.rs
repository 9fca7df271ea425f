//! On-disk formats: edge-list graphs, CSV signals and spectra, JSON
//! filter specs. All writers are byte-deterministic ('.' decimal
//! separator, '\n' line endings, no timestamps) and every header carries
//! a "v1" format marker.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{JointResponse, Polynomial1D, PolynomialFilter};
use crate::graph::{Graph, MatrixKind};
use crate::linalg::CMat;
use crate::signal::TemporalGraphSignal;
use crate::spectral::JointBasis;

// ---------------------------------------------------------------- graphs

/// Parse the edge-list format: one edge per line, `i j [w]`, 1-based
/// indices, `#`-prefixed comments, optional header
/// `# nodes N directed {0|1}`. Node count is the header value or the
/// largest index seen.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut n_nodes: Option<usize> = None;
    let mut directed = false;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut max_index = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            if tokens.first() == Some(&"nodes") {
                if tokens.len() != 4 || tokens[2] != "directed" {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "header must read '# nodes N directed {0|1}'".into(),
                    });
                }
                n_nodes = Some(parse_field(tokens[1], lineno, "node count")?);
                directed = match tokens[3] {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("directed flag must be 0 or 1, got {other:?}"),
                        })
                    }
                };
            }
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 && tokens.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 'i j [w]', got {} fields", tokens.len()),
            });
        }
        let i: usize = parse_field(tokens[0], lineno, "node index")?;
        let j: usize = parse_field(tokens[1], lineno, "node index")?;
        if i == 0 || j == 0 {
            return Err(Error::Parse {
                line: lineno,
                message: "node indices are 1-based".into(),
            });
        }
        if i == j {
            return Err(Error::Parse {
                line: lineno,
                message: format!("self-loop at node {i}"),
            });
        }
        let w: f64 = if tokens.len() == 3 {
            parse_field(tokens[2], lineno, "edge weight")?
        } else {
            1.0
        };
        if let Some(n) = n_nodes {
            if i > n || j > n {
                return Err(Error::IndexOutOfRange { index: i.max(j), n_nodes: n });
            }
        }
        max_index = max_index.max(i).max(j);
        edges.push((i - 1, j - 1, w));
    }
    let n = n_nodes.unwrap_or(max_index);
    if n == 0 {
        return Err(Error::Schema("graph file declares no nodes".into()));
    }
    Graph::new(n, edges, directed)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

fn parse_field<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} {tok:?}"),
    })
}

// ---------------------------------------------------------------- signals

/// Shortest round-trip decimal rendering of one value.
fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Render a signal as CSV. Real signals (all imaginary parts zero) use
/// one column per instant; complex signals use paired re/im columns with
/// `complex=1` in the header.
pub fn signal_to_csv(x: &TemporalGraphSignal) -> String {
    let (n, t) = (x.n_nodes(), x.period());
    let complex = x.values().iter().any(|v| v.im != 0.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# jtv-signal v1 N={n} T={t} complex={}",
        if complex { 1 } else { 0 }
    );
    for row in x.values().rows() {
        let cells: Vec<String> = if complex {
            row.iter()
                .flat_map(|v| [fmt_f64(v.re), fmt_f64(v.im)])
                .collect()
        } else {
            row.iter().map(|v| fmt_f64(v.re)).collect()
        };
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_signal(x: &TemporalGraphSignal, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, signal_to_csv(x))?)
}

/// Parse a signal CSV. The header is optional; headerless files are read
/// as real with dimensions taken from the rows.
pub fn parse_signal(text: &str) -> Result<TemporalGraphSignal> {
    let mut declared: Option<(usize, usize, bool)> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            if tokens.first() == Some(&"jtv-signal") {
                let mut n = None;
                let mut t = None;
                let mut complex = false;
                for tok in &tokens[1..] {
                    if let Some(v) = tok.strip_prefix("N=") {
                        n = Some(parse_field(v, lineno, "N")?);
                    } else if let Some(v) = tok.strip_prefix("T=") {
                        t = Some(parse_field(v, lineno, "T")?);
                    } else if let Some(v) = tok.strip_prefix("complex=") {
                        complex = v == "1";
                    }
                }
                match (n, t) {
                    (Some(n), Some(t)) => declared = Some((n, t, complex)),
                    _ => {
                        return Err(Error::Parse {
                            line: lineno,
                            message: "signal header must carry N= and T=".into(),
                        })
                    }
                }
            }
            continue;
        }
        let mut row = Vec::new();
        for cell in line.split(',') {
            row.push(parse_field::<f64>(cell.trim(), lineno, "numeric cell")?);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!(
                        "ragged row: {} cells, expected {}",
                        row.len(),
                        first.len()
                    ),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Schema("signal file contains no data rows".into()));
    }
    let n = rows.len();
    let cols = rows[0].len();
    let (t, complex) = match declared {
        Some((dn, dt, c)) => {
            let expected_cols = if c { 2 * dt } else { dt };
            if dn != n || expected_cols != cols {
                return Err(Error::DimensionMismatch(format!(
                    "header declares N={dn} T={dt} complex={} but file has {n} rows x {cols} columns",
                    if c { 1 } else { 0 }
                )));
            }
            (dt, c)
        }
        None => (cols, false),
    };
    let mut values = CMat::zeros((n, t));
    for (i, row) in rows.iter().enumerate() {
        for tt in 0..t {
            values[[i, tt]] = if complex {
                Complex64::new(row[2 * tt], row[2 * tt + 1])
            } else {
                Complex64::new(row[tt], 0.0)
            };
        }
    }
    Ok(TemporalGraphSignal::new(values))
}

pub fn read_signal(path: impl AsRef<Path>) -> Result<TemporalGraphSignal> {
    parse_signal(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------- spectra

/// Joint-spectrum CSV: one row per (t, n) pair, 1-based indices, with the
/// joint eigenvalue pair alongside the coefficient. Only the real part of
/// the graph eigenvalue is emitted; it is exact for symmetric
/// representations.
pub fn spectrum_to_csv(coeffs: &CMat, jb: &JointBasis) -> String {
    let (n, t) = coeffs.dim();
    let mut out = String::from("# jtv-spectrum v1\n");
    out.push_str("t,n,lambda_T_re,lambda_T_im,lambda_G,coef_re,coef_im\n");
    for tt in 0..t {
        for nn in 0..n {
            let lt = jb.time.eigenvalues[tt];
            let lg = jb.graph.eigenvalues[nn];
            let c = coeffs[[nn, tt]];
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                tt + 1,
                nn + 1,
                fmt_f64(lt.re),
                fmt_f64(lt.im),
                fmt_f64(lg.re),
                fmt_f64(c.re),
                fmt_f64(c.im)
            );
        }
    }
    out
}

/// Read a joint-spectrum CSV back into an N x T coefficient matrix; the
/// eigenvalue columns are ignored (they are reconstructed from the graph
/// when needed).
pub fn parse_spectrum(text: &str) -> Result<CMat> {
    let mut entries: Vec<(usize, usize, Complex64)> = Vec::new();
    let mut max_t = 0usize;
    let mut max_n = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("t,") {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 7 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 7 columns, got {}", cells.len()),
            });
        }
        let t: usize = parse_field(cells[0], lineno, "time index")?;
        let n: usize = parse_field(cells[1], lineno, "node index")?;
        if t == 0 || n == 0 {
            return Err(Error::Parse {
                line: lineno,
                message: "spectrum indices are 1-based".into(),
            });
        }
        let re: f64 = parse_field(cells[5], lineno, "coefficient")?;
        let im: f64 = parse_field(cells[6], lineno, "coefficient")?;
        max_t = max_t.max(t);
        max_n = max_n.max(n);
        entries.push((t - 1, n - 1, Complex64::new(re, im)));
    }
    if entries.len() != max_t * max_n {
        return Err(Error::Schema(format!(
            "spectrum has {} rows, expected {} for T={max_t}, N={max_n}",
            entries.len(),
            max_t * max_n
        )));
    }
    let mut coeffs = CMat::zeros((max_n, max_t));
    for (t, n, c) in entries {
        coeffs[[n, t]] = c;
    }
    Ok(coeffs)
}

// ------------------------------------------------------------ filter specs

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialSpec {
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "L")]
    l: usize,
    coeffs: Vec<Vec<f64>>,
    representation: MatrixKind,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealLowpassSpec {
    #[serde(default = "default_angle_cut")]
    angle_cut: f64,
    #[serde(default = "default_graph_cut")]
    graph_cut: f64,
}

fn default_angle_cut() -> f64 {
    std::f64::consts::PI
}

fn default_graph_cut() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RationalSpec {
    f: Vec<f64>,
    g: Vec<f64>,
    #[serde(default = "default_true")]
    hermitian_time: bool,
}

fn default_true() -> bool {
    true
}

/// Result of parsing a filter-spec JSON document.
#[derive(Debug, Clone)]
pub enum FilterObject {
    Polynomial(PolynomialFilter),
    Response(JointResponse),
}

/// Strict filter-spec parser: the `type` tag selects the variant and
/// unknown fields are rejected.
pub fn parse_filter_spec(text: &str) -> Result<FilterObject> {
    let mut value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::Schema("filter spec must be a JSON object".into()))?;
    if let Some(version) = obj.remove("version") {
        if version != "v1" {
            return Err(Error::Schema(format!(
                "unsupported filter-spec version {version}"
            )));
        }
    }
    let tag = obj
        .remove("type")
        .and_then(|v| v.as_str().map(str::to_owned))
        .ok_or_else(|| Error::Schema("missing string field \"type\"".into()))?;
    let rest = serde_json::Value::Object(obj.clone());
    match tag.as_str() {
        "polynomial" => {
            let spec: PolynomialSpec =
                serde_json::from_value(rest).map_err(|e| Error::Schema(e.to_string()))?;
            if spec.coeffs.len() != spec.k + 1
                || spec.coeffs.iter().any(|row| row.len() != spec.l + 1)
            {
                return Err(Error::Schema(format!(
                    "coeffs must be a (K+1)x(L+1) = {}x{} matrix",
                    spec.k + 1,
                    spec.l + 1
                )));
            }
            let mut coeffs = Array2::zeros((spec.k + 1, spec.l + 1));
            for (i, row) in spec.coeffs.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    coeffs[[i, j]] = v;
                }
            }
            Ok(FilterObject::Polynomial(PolynomialFilter::new(
                coeffs,
                spec.representation,
            )))
        }
        "ideal_lowpass" => {
            let spec: IdealLowpassSpec =
                serde_json::from_value(rest).map_err(|e| Error::Schema(e.to_string()))?;
            Ok(FilterObject::Response(JointResponse::IdealLowPass {
                angle_cut: spec.angle_cut,
                graph_cut: spec.graph_cut,
            }))
        }
        "rational" => {
            let spec: RationalSpec =
                serde_json::from_value(rest).map_err(|e| Error::Schema(e.to_string()))?;
            Ok(FilterObject::Response(JointResponse::Rational {
                f: Polynomial1D::new(spec.f),
                g: Polynomial1D::new(spec.g),
                hermitian_time: spec.hermitian_time,
            }))
        }
        other => Err(Error::Schema(format!(
            "unknown filter type {other:?} (expected polynomial|ideal_lowpass|rational)"
        ))),
    }
}

pub fn read_filter_spec(path: impl AsRef<Path>) -> Result<FilterObject> {
    parse_filter_spec(&std::fs::read_to_string(path)?)
}

#[derive(Serialize)]
struct PolynomialSpecOut<'a> {
    version: &'static str,
    #[serde(rename = "type")]
    kind: &'static str,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "L")]
    l: usize,
    coeffs: Vec<Vec<f64>>,
    representation: &'a MatrixKind,
}

/// Serialize a fitted polynomial filter as a spec document the strict
/// parser accepts back; the `version` field is the v1 format marker.
pub fn polynomial_filter_to_json(pf: &PolynomialFilter) -> String {
    let coeffs: Vec<Vec<f64>> = pf.coeffs.rows().into_iter().map(|r| r.to_vec()).collect();
    let doc = PolynomialSpecOut {
        version: "v1",
        kind: "polynomial",
        k: pf.k_order(),
        l: pf.l_order(),
        coeffs,
        representation: &pf.representation,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serialization cannot fail");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::jft;
    use ndarray::array;

    #[test]
    fn graph_p3_from_two_lines() {
        let g = parse_graph("1 2\n2 3").unwrap();
        assert_eq!(g.n_nodes(), 3);
        assert_eq!(g.n_edges(), 2);
        assert!(!g.is_directed());
    }

    #[test]
    fn graph_header_overrides_node_count() {
        let g = parse_graph("# nodes 4 directed 0\n1 2").unwrap();
        assert_eq!(g.n_nodes(), 4);
        assert_eq!(g.n_edges(), 1);
    }

    #[test]
    fn graph_self_loop_rejected_with_line() {
        match parse_graph("1 2\n3 3") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("self-loop"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn graph_index_beyond_header_rejected() {
        assert!(matches!(
            parse_graph("# nodes 2 directed 0\n1 3"),
            Err(Error::IndexOutOfRange { index: 3, n_nodes: 2 })
        ));
    }

    #[test]
    fn graph_duplicate_edge_rejected() {
        assert!(matches!(
            parse_graph("1 2\n2 1"),
            Err(Error::DuplicateEdge(_, _))
        ));
    }

    #[test]
    fn graph_weights_and_direction() {
        let g = parse_graph("# nodes 3 directed 1\n1 2 0.5\n2 3").unwrap();
        assert!(g.is_directed());
        assert_eq!(g.edges()[0].weight, 0.5);
        assert_eq!(g.edges()[1].weight, 1.0);
    }

    #[test]
    fn signal_roundtrip_real_bit_exact() {
        let x = TemporalGraphSignal::from_real(array![
            [0.1, -2.5e-17, 3.0],
            [1.0 / 3.0, 4.0, -0.0]
        ]);
        let csv = signal_to_csv(&x);
        let back = parse_signal(&csv).unwrap();
        assert_eq!(back.values(), x.values());
        // byte determinism
        assert_eq!(signal_to_csv(&back), csv);
    }

    #[test]
    fn signal_roundtrip_complex() {
        let x = TemporalGraphSignal::new(array![
            [Complex64::new(1.0, -0.5), Complex64::new(0.0, 2.0)],
            [Complex64::new(-3.25, 0.0), Complex64::new(0.125, 1e-30)]
        ]);
        let csv = signal_to_csv(&x);
        assert!(csv.starts_with("# jtv-signal v1 N=2 T=2 complex=1\n"));
        let back = parse_signal(&csv).unwrap();
        assert_eq!(back.values(), x.values());
    }

    #[test]
    fn signal_scalar_headerless() {
        let x = parse_signal("3.5\n").unwrap();
        assert_eq!(x.n_nodes(), 1);
        assert_eq!(x.period(), 1);
        assert_eq!(x.get(0, 0), Complex64::new(3.5, 0.0));
    }

    #[test]
    fn signal_ragged_reports_row() {
        match parse_signal("1,2,3\n4,5\n") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("ragged"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn signal_non_numeric_cell() {
        assert!(matches!(
            parse_signal("1,zebra\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn spectrum_roundtrip() {
        let g = parse_graph("1 2\n2 3\n1 3").unwrap();
        let jb = JointBasis::new(&g, 4, MatrixKind::Laplacian).unwrap();
        let x = TemporalGraphSignal::from_real(array![
            [0.3, -1.2, 0.7, 0.1],
            [1.0, 0.1, -0.4, -0.9],
            [-0.8, 0.5, 1.3, 0.6]
        ]);
        let y = jft(&x, &jb).unwrap();
        let csv = spectrum_to_csv(y.values(), &jb);
        assert!(csv.starts_with("# jtv-spectrum v1\nt,n,lambda_T_re,"));
        let back = parse_spectrum(&csv).unwrap();
        assert_eq!(&back, y.values());
    }

    #[test]
    fn filter_spec_identity_polynomial() {
        let text = r#"{ "type": "polynomial", "K": 0, "L": 0, "coeffs": [[1.0]], "representation": "laplacian" }"#;
        match parse_filter_spec(text).unwrap() {
            FilterObject::Polynomial(pf) => {
                assert_eq!(pf.coeffs, array![[1.0]]);
                assert_eq!(pf.representation, MatrixKind::Laplacian);
            }
            other => panic!("expected polynomial, got {other:?}"),
        }
    }

    #[test]
    fn filter_spec_ideal_lowpass_defaults() {
        match parse_filter_spec(r#"{ "type": "ideal_lowpass" }"#).unwrap() {
            FilterObject::Response(JointResponse::IdealLowPass { angle_cut, graph_cut }) => {
                assert_eq!(angle_cut, std::f64::consts::PI);
                assert_eq!(graph_cut, 1.0);
            }
            other => panic!("expected ideal lowpass, got {other:?}"),
        }
    }

    #[test]
    fn filter_spec_rational() {
        match parse_filter_spec(r#"{ "type": "rational", "f": [1.0, 1.0], "g": [0.0, 1.0] }"#)
            .unwrap()
        {
            FilterObject::Response(JointResponse::Rational { hermitian_time, .. }) => {
                assert!(hermitian_time);
            }
            other => panic!("expected rational, got {other:?}"),
        }
    }

    #[test]
    fn filter_spec_strictness() {
        // missing coeffs
        assert!(matches!(
            parse_filter_spec(r#"{ "type": "polynomial", "K": 0, "L": 0, "representation": "laplacian" }"#),
            Err(Error::Schema(_))
        ));
        // unknown field
        assert!(matches!(
            parse_filter_spec(r#"{ "type": "ideal_lowpass", "bogus": 1 }"#),
            Err(Error::Schema(_))
        ));
        // coeffs shape inconsistent with K, L
        assert!(matches!(
            parse_filter_spec(
                r#"{ "type": "polynomial", "K": 1, "L": 0, "coeffs": [[1.0]], "representation": "laplacian" }"#
            ),
            Err(Error::Schema(_))
        ));
        // unknown tag
        assert!(matches!(
            parse_filter_spec(r#"{ "type": "butterworth" }"#),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn polynomial_spec_roundtrip() {
        let pf = PolynomialFilter::new(array![[0.5, -1.0], [2.0, 0.25]], MatrixKind::Adjacency);
        let json = polynomial_filter_to_json(&pf);
        assert!(json.contains("\"version\": \"v1\""));
        match parse_filter_spec(&json).unwrap() {
            FilterObject::Polynomial(back) => {
                assert_eq!(back.coeffs, pf.coeffs);
                assert_eq!(back.representation, pf.representation);
            }
            other => panic!("expected polynomial, got {other:?}"),
        }
    }
}
