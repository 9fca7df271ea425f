//! End-to-end acceptance gate: one test per criterion, each printing a
//! single PASS line (run with --nocapture to see them).

use std::time::Instant;

use jtv_core::distributed::{comm_cost, simulate_polynomial_filter};
use jtv_core::filters::{
    apply_polynomial_filter, apply_spectral_filter, dense_polynomial_operator,
    eigenvalue_grids, fit_polynomial_response, ideal_lowpass_response, response_error,
    Polynomial1D, PolynomialFilter,
};
use jtv_core::graph::{Graph, MatrixKind};
use jtv_core::signal::TemporalGraphSignal;
use jtv_core::spectral::{
    dense_joint_laplacian, dft, gft, ijft, jft, jft_via_joint_graph_oracle, JointBasis,
};
use jtv_core::variation::{dirichlet_form, s2_quadratic};
use jtv_core::wiener::{
    analytic_mse, competing_operators, mse_report, wiener_operator_dense, wiener_response,
    CovarianceModel,
};
use jtv_core::linalg;
use ndarray::Array2;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const ALL_KINDS: [MatrixKind; 3] = [
    MatrixKind::Laplacian,
    MatrixKind::NormalizedLaplacian,
    MatrixKind::Adjacency,
];

fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j, 0.25 + rng.gen::<f64>()));
            }
        }
    }
    Graph::new(n, edges, false).unwrap()
}

fn random_signal(rng: &mut StdRng, n: usize, t: usize) -> TemporalGraphSignal {
    let mut m = Array2::zeros((n, t));
    for v in m.iter_mut() {
        *v = rng.gen::<f64>() * 4.0 - 2.0;
    }
    TemporalGraphSignal::from_real(m)
}

fn vec_norm(x: &TemporalGraphSignal) -> f64 {
    x.values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

#[test]
fn criterion_1_transform_properties() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(101);
    for _ in 0..50 {
        let n = rng.gen_range(1..=20);
        let t = rng.gen_range(1..=12);
        let g = random_graph(&mut rng, n, 0.4);
        let x = random_signal(&mut rng, n, t);
        for kind in ALL_KINDS {
            let jb = JointBasis::new(&g, t, kind).unwrap();
            let y = jft(&x, &jb).unwrap();
            let back = ijft(&y, &jb).unwrap();
            assert!(
                linalg::rel_error(back.values(), x.values()) <= 1e-10,
                "round trip, N={n} T={t} {kind}"
            );
            // undirected graphs give symmetric representations, so the
            // transform must be unitary
            assert!(jb.graph.unitary);
            let parseval = (vec_norm(&y) - vec_norm(&x)).abs();
            assert!(parseval <= 1e-10 * vec_norm(&x).max(1.0), "Parseval {parseval}");
            // order independence: GFT-then-DFT equals DFT-then-GFT
            let a = dft(&gft(&x, &jb.graph).unwrap());
            let b = gft(&dft(&x), &jb.graph).unwrap();
            assert!(linalg::rel_error(a.values(), b.values()) <= 1e-12);
            assert!(linalg::rel_error(a.values(), y.values()) <= 1e-12);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("criterion 1: PASS (50 instances, 3 representations, {elapsed:?})");
}

#[test]
fn criterion_2_joint_graph_equivalence() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(202);
    for _ in 0..20 {
        let n = rng.gen_range(2..=10);
        let t_cap = (100 / n).min(12).max(1);
        let t = rng.gen_range(1..=t_cap);
        let g = random_graph(&mut rng, n, 0.5);
        let x = random_signal(&mut rng, n, t);
        let jb = JointBasis::new(&g, t, MatrixKind::Laplacian).unwrap();
        let direct = jft(&x, &jb).unwrap();
        let oracle = jft_via_joint_graph_oracle(&x, &g, MatrixKind::Laplacian).unwrap();
        assert!(
            linalg::rel_error(direct.values(), oracle.values()) <= 1e-8,
            "oracle mismatch, N={n} T={t}"
        );

        // dense joint-Laplacian spectrum equals the pairwise sums
        let lj = dense_joint_laplacian(&g, t).unwrap();
        let (computed, _) = linalg::eig_general(&lj).unwrap();
        let mut expected: Vec<Complex64> = Vec::new();
        for tt in 0..t {
            for nn in 0..n {
                expected.push(jb.time.eigenvalues[tt] + jb.graph.eigenvalues[nn]);
            }
        }
        let mut remaining: Vec<Complex64> = computed.to_vec();
        for e in &expected {
            let (idx, dist) = remaining
                .iter()
                .enumerate()
                .map(|(i, c)| (i, (c - e).norm()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            assert!(dist <= 1e-8, "eigenvalue {e} unmatched (closest {dist})");
            remaining.swap_remove(idx);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("criterion 2: PASS (20 instances, NT <= 100, {elapsed:?})");
}

#[test]
fn criterion_3_variation_identity() {
    let mut rng = StdRng::seed_from_u64(303);
    for _ in 0..50 {
        let n = rng.gen_range(1..=20);
        let t = rng.gen_range(1..=12);
        let g = random_graph(&mut rng, n, 0.4);
        let x = random_signal(&mut rng, n, t);
        let s2 = dirichlet_form(&x, &g, 2.0).unwrap();
        let lj = dense_joint_laplacian(&g, t).unwrap();
        let v = linalg::vectorize_real(&x.to_real(0.0).unwrap());
        let dense = v.dot(&lj.dot(&v));
        assert!(
            (s2 - dense).abs() <= 1e-10 * dense.abs().max(1.0),
            "S2 {s2} vs quadratic form {dense}"
        );
        assert!((s2_quadratic(&x, &g).unwrap() - dense).abs() <= 1e-10 * dense.abs().max(1.0));
    }
    // constant signals sit in the joint nullspace; any perturbation leaves it
    let mut rng = StdRng::seed_from_u64(304);
    let g = random_graph(&mut rng, 6, 0.9);
    let constant = TemporalGraphSignal::from_real(Array2::from_elem((6, 5), 1.7));
    assert_eq!(dirichlet_form(&constant, &g, 2.0).unwrap(), 0.0);
    for n in 0..6 {
        for t in 0..5 {
            let mut m = constant.to_real(0.0).unwrap();
            m[[n, t]] += 1e-3;
            let perturbed = TemporalGraphSignal::from_real(m);
            assert!(s2_quadratic(&perturbed, &g).unwrap() > 0.0);
        }
    }
    println!("criterion 3: PASS (50 instances + constant/perturbation checks)");
}

#[test]
fn criterion_4_filter_equivalence() {
    let mut rng = StdRng::seed_from_u64(404);
    for _ in 0..20 {
        let n = rng.gen_range(2..=10);
        let t = rng.gen_range(1..=8);
        let g = random_graph(&mut rng, n, 0.5);
        let x = random_signal(&mut rng, n, t);
        let k = rng.gen_range(0..=4);
        let l = rng.gen_range(0..=4);
        let kind = ALL_KINDS[rng.gen_range(0..3)];
        let mut coeffs = Array2::zeros((k + 1, l + 1));
        for c in coeffs.iter_mut() {
            *c = rng.gen::<f64>() * 2.0 - 1.0;
        }
        let pf = PolynomialFilter::new(coeffs, kind);

        let vertex = apply_polynomial_filter(&x, &pf, &g, t).unwrap();
        let jb = JointBasis::new(&g, t, kind).unwrap();
        let spectral = apply_spectral_filter(&x, &pf, &jb).unwrap();
        let dense = dense_polynomial_operator(&pf, &g, t);
        let v = linalg::vectorize(x.values());
        let dense_out = linalg::to_complex(&dense.view()).dot(&v);
        let kron = TemporalGraphSignal::new(linalg::unvectorize(&dense_out, n, t).unwrap());

        assert!(linalg::rel_error(vertex.values(), spectral.values()) <= 1e-8);
        assert!(linalg::rel_error(vertex.values(), kron.values()) <= 1e-8);
        assert!(linalg::rel_error(spectral.values(), kron.values()) <= 1e-8);
    }
    println!("criterion 4: PASS (20 instances, K,L <= 4, three routes agree)");
}

#[test]
fn criterion_5_distributed_simulation() {
    let mut rng = StdRng::seed_from_u64(505);
    let n = 7;
    let t = 3;
    let g = random_graph(&mut rng, n, 0.5);
    let m = g.n_edges();
    let x = random_signal(&mut rng, n, t);
    for k in 0..=3usize {
        for l in 0..=3usize {
            let mut coeffs = Array2::zeros((k + 1, l + 1));
            for c in coeffs.iter_mut() {
                *c = rng.gen::<f64>() * 2.0 - 1.0;
            }
            let pf = PolynomialFilter::new(coeffs, MatrixKind::Laplacian);
            let (sim, ledger) = simulate_polynomial_filter(&g, t, &pf, &x).unwrap();
            let direct = apply_polynomial_filter(&x, &pf, &g, t).unwrap();
            assert!(
                linalg::rel_error(sim.values(), direct.values()) <= 1e-10,
                "K={k} L={l}"
            );
            let formula = comm_cost(n as u64, m as u64, t as u64, k as u64, l as u64);
            assert_eq!(ledger.total, formula, "ledger vs closed form, K={k} L={l}");
            let from_rounds: u64 = ledger.rounds.iter().map(|r| r.values).sum();
            assert_eq!(from_rounds, formula);
        }
    }
    println!("criterion 5: PASS (simulator = matrix-free, ledger = 2MTK + (K+1)NTL on (K,L) in 0..3^2)");
}

#[test]
fn criterion_6_ideal_lowpass_surrogate() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(606);
    let g = random_graph(&mut rng, 50, 0.12);
    let t = 16;
    let kind = MatrixKind::NormalizedLaplacian;
    let jb = JointBasis::new(&g, t, kind).unwrap();
    let (lt_grid, lg_grid) = eigenvalue_grids(&jb);
    let h = ideal_lowpass_response();
    let orders = 15usize;
    let mut errors = vec![vec![0.0f64; orders + 1]; orders + 1];
    for k in 0..=orders {
        for l in 0..=orders {
            let pf = fit_polynomial_response(&h, &lt_grid, &lg_grid, k, l, kind).unwrap();
            errors[k][l] = response_error(&h, &pf, &lt_grid, &lg_grid).unwrap();
        }
    }
    for k in 0..=orders {
        for l in 0..=orders {
            if k > 0 {
                assert!(errors[k][l] <= errors[k - 1][l] * 1.001 + 1e-9, "K step at ({k},{l})");
            }
            if l > 0 {
                assert!(errors[k][l] <= errors[k][l - 1] * 1.001 + 1e-9, "L step at ({k},{l})");
            }
        }
    }
    let final_err = errors[orders][orders];
    assert!(
        (0.3..=0.8).contains(&final_err),
        "ideal low-pass residual {final_err} outside [0.3, 0.8]"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "criterion 6: PASS (N=50, T=16, normalized; error at K=L=15: {final_err:.4}, {elapsed:?})"
    );
}

fn wiener_instance() -> (CovarianceModel, Graph) {
    let mut rng = StdRng::seed_from_u64(707);
    let g = random_graph(&mut rng, 10, 0.4);
    let model = CovarianceModel::new(
        Polynomial1D::new(vec![0.0, 1.0]), // g(lambda_G) = lambda_G
        Polynomial1D::new(vec![1.0, 1.0]), // f(lambda_T) = lambda_T + 1
    );
    (model, g)
}

#[test]
fn criterion_7_wiener_optimality() {
    let start = Instant::now();
    let (model, g) = wiener_instance();
    let t = 8;
    let draws = 10000;
    let ops = competing_operators(&model, &g, t).unwrap();
    let rows = mse_report(&model, &g, t, &ops, draws, 42).unwrap();
    let find = |name: &str| rows.iter().find(|r| r.name == name).unwrap();
    let joint = find("wiener_joint");
    let time_only = find("wiener_time_only");
    let graph_only = find("wiener_graph_only");

    let joint_op = &ops.iter().find(|(n, _)| n == "wiener_joint").unwrap().1;
    let analytic = analytic_mse(&model, &g, t, joint_op).unwrap();
    assert!(
        (joint.mse - analytic).abs() <= 3.0 * joint.stderr,
        "MC {} vs analytic {analytic} (se {})",
        joint.mse,
        joint.stderr
    );
    for other in [time_only, graph_only] {
        assert!(
            joint.mse <= other.mse + 2.0 * (joint.stderr + other.stderr),
            "joint {} vs {} {}",
            joint.mse,
            other.name,
            other.mse
        );
    }

    let dense = wiener_operator_dense(&model, &g, t).unwrap();
    let diff = linalg::frobenius_real(&(&dense - joint_op));
    assert!(
        diff / linalg::frobenius_real(&dense).max(1.0) <= 1e-7,
        "dense vs spectral {diff}"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "criterion 7: PASS (MC {:.4} vs analytic {analytic:.4}, joint beats marginals, {elapsed:?})",
        joint.mse
    );
}

#[test]
fn criterion_8_wiener_response_sweep() {
    let start = Instant::now();
    let (model, g) = wiener_instance();
    let t = 8;
    let kind = MatrixKind::Laplacian;
    let jb = JointBasis::new(&g, t, kind).unwrap();
    let (lt_grid, lg_grid) = eigenvalue_grids(&jb);
    let h = wiener_response(&model);
    let orders = 15usize;
    let mut errors = vec![vec![0.0f64; orders + 1]; orders + 1];
    let mut csv = String::from("K,L,error\n");
    for k in 0..=orders {
        for l in 0..=orders {
            let pf = fit_polynomial_response(&h, &lt_grid, &lg_grid, k, l, kind).unwrap();
            errors[k][l] = response_error(&h, &pf, &lt_grid, &lg_grid).unwrap();
            csv.push_str(&format!("{k},{l},{}\n", errors[k][l]));
        }
    }
    for k in 0..=orders {
        for l in 0..=orders {
            if k > 0 {
                assert!(errors[k][l] <= errors[k - 1][l] * 1.001 + 1e-9);
            }
            if l > 0 {
                assert!(errors[k][l] <= errors[k][l - 1] * 1.001 + 1e-9);
            }
        }
    }
    assert!(errors[orders][orders] < 0.1, "residual {}", errors[orders][orders]);
    let elapsed = start.elapsed();
    println!("{csv}");
    println!(
        "criterion 8: PASS (Wiener response fit error at K=L=15: {:.3e}, {elapsed:?})",
        errors[orders][orders]
    );
}

#[test]
fn criterion_9_cli_golden() {
    use std::process::Command;

    let bin = env!("CARGO_BIN_EXE_jtv");
    let dir = std::env::temp_dir().join(format!("jtv-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let graph = dir.join("g.txt");
    let signal = dir.join("x.csv");
    let spectrum = dir.join("spec.csv");
    let filter = dir.join("filter.json");
    std::fs::write(&graph, "1 2\n2 3\n1 3 0.5\n3 4\n").unwrap();
    std::fs::write(
        &signal,
        "# jtv-signal v1 N=4 T=3 complex=0\n0.3,-1.2,0.7\n1,0.1,-0.4\n-0.8,0.5,1.3\n0.2,2,-0.6\n",
    )
    .unwrap();

    let run = |args: &[&str]| {
        let out = Command::new(bin)
            .args(args)
            .env("JFT_SEED", "9001")
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "jtv {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let gs = graph.to_str().unwrap();
    let xs = signal.to_str().unwrap();

    // seed files the later commands read
    std::fs::write(&spectrum, run(&["transform", gs, xs])).unwrap();
    let design_out = run(&["design", gs, "--t", "3", "--k", "1", "--l", "1"]);
    std::fs::write(&filter, &design_out).unwrap();
    let ss = spectrum.to_str().unwrap();
    let fs = filter.to_str().unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec!["transform", gs, xs],
        vec!["transform", gs, ss, "--direction", "inverse"],
        vec!["inverse", gs, ss],
        vec!["variation", gs, xs],
        vec!["design", gs, "--t", "3", "--k", "1", "--l", "1"],
        vec!["design", gs, "--t", "3", "--k", "2", "--l", "2", "--response", "rational"],
        vec!["apply", gs, xs, "--filter", fs],
        vec!["simulate", gs, xs, "--filter", fs, "--check"],
        vec!["wiener", gs, "--t", "4", "--draws", "500"],
        vec!["wiener", gs, "--t", "4", "--draws", "500", "--seed", "5"],
        vec!["lowpass-sweep", gs, "--t", "4", "--kmax", "3", "--lmax", "3"],
    ];
    for args in &commands {
        let first = run(args);
        let second = run(args);
        assert_eq!(first, second, "non-deterministic output for jtv {args:?}");
        assert!(!first.is_empty(), "no output for jtv {args:?}");
    }
    std::fs::remove_dir_all(&dir).ok();
    println!("criterion 9: PASS ({} command invocations byte-identical)", commands.len());
}
