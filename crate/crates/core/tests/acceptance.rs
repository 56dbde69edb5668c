//! Acceptance suite. Each test checks one criterion and prints a single
//! `[PASS]`/`[FAIL]` line; run with `--nocapture` to see them.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use graph_gstft::classical::{
    dft, dstft, dstft_reconstruct, modulate, translate, ClassicalGaborSystem, DftMatrix,
};
use graph_gstft::gabor::{
    atoms, column_permutation_deviation, frame_operator, frame_report, gstft, inverse_gstft,
    permutation_commutator, random_signal, shuman_crosscheck, srg_certificate, tightness_sweep,
};
use graph_gstft::graph::{
    complete_graph, cyclic_shift, detect_srg_parameters, hypercube_graph, path_graph,
    petersen_graph, random_regular_graph, ring_graph, shrikhande_graph, Graph,
};
use graph_gstft::heat::heat_kernel;
use graph_gstft::spectral::{decompose_graph, Signal, SpectralDecomposition};
use ndarray::Array2;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: u32, name: &str, ok: bool, detail: String) {
    println!(
        "[{}] criterion {id:>2}: {name} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn dec(g: &Graph) -> SpectralDecomposition<f64> {
    decompose_graph::<f64>(g).expect("decomposition converges")
}

/// Graphs and times shared by criteria 1–3.
fn core_matrix() -> (Vec<(&'static str, Graph)>, [f64; 4]) {
    let graphs = vec![
        ("K2", complete_graph(2).unwrap()),
        ("P3", path_graph(3).unwrap()),
        ("ring8", ring_graph(8).unwrap()),
        ("petersen", petersen_graph()),
        ("shrikhande", shrikhande_graph()),
        ("rr(24,3,7)", random_regular_graph(24, 3, 7).unwrap()),
    ];
    (graphs, [0.0, 0.1, 1.0, 10.0])
}

fn vertex_transitive_family() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 3..=32 {
        out.push((format!("ring{n}"), ring_graph(n).unwrap()));
    }
    for d in 1..=6 {
        out.push((format!("Q{d}"), hypercube_graph(d).unwrap()));
    }
    for n in 2..=16 {
        out.push((format!("K{n}"), complete_graph(n).unwrap()));
    }
    out.push(("petersen".into(), petersen_graph()));
    out.push(("shrikhande".into(), shrikhande_graph()));
    out
}

#[test]
fn criterion_01_frame_operator_diagonal() {
    let start = Instant::now();
    let (graphs, times) = core_matrix();
    let (mut worst_off, mut worst_diag) = (0.0f64, 0.0f64);
    for (_, g) in &graphs {
        let d = dec(g);
        let n = g.n();
        for &t in &times {
            let hk = heat_kernel(&d, t).unwrap();
            // Gram composition A(t)*A(t) = Σ_ij ψ_ij ψ_ij*, summed from the explicit atoms
            let mut gram = Array2::<Complex<f64>>::zeros((n, n));
            for atom in atoms(&d, &hk).unwrap() {
                let v = atom.vector.values();
                for p in 0..n {
                    for q in 0..n {
                        gram[[p, q]] += v[p] * v[q].conj();
                    }
                }
            }
            let closed = frame_operator(&d, &hk).unwrap();
            for ((p, q), z) in gram.indexed_iter() {
                if p == q {
                    worst_diag = worst_diag.max((z - Complex::new(closed.closed_form[[p, p]], 0.0)).norm());
                } else {
                    worst_off = worst_off.max(z.norm());
                }
            }
            worst_off = worst_off.max(closed.gram_off_diagonal().unwrap());
            worst_diag = worst_diag.max(closed.diagonal_discrepancy().unwrap());
        }
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        "frame operator is diagonal with entries Σ_i D_i(t)²",
        worst_off <= 1e-10 && worst_diag <= 1e-10 && elapsed < Duration::from_secs(30),
        format!("max offdiag {worst_off:.2e}, max diag err {worst_diag:.2e}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_02_spectrum_formula() {
    let (graphs, times) = core_matrix();
    let (mut spectral_err, mut column_err, mut min_gamma) = (0.0f64, 0.0f64, f64::INFINITY);
    for (_, g) in &graphs {
        let d = dec(g);
        let n = g.n();
        for &t in &times {
            let hk = heat_kernel(&d, t).unwrap();
            let report = frame_report(&d, &hk).unwrap();
            for j in 0..n {
                let spectral: f64 = (0..n)
                    .map(|l| (-2.0 * d.eigenvalues()[l] * t).exp() * d.eigenvectors()[[j, l]].powi(2))
                    .sum();
                let column: f64 = (0..n).map(|i| hk.matrix()[[i, j]].powi(2)).sum();
                spectral_err = spectral_err.max((report.gammas[j] - spectral).abs());
                column_err = column_err.max((report.gammas[j] - column).abs());
                min_gamma = min_gamma.min(report.gammas[j]);
            }
        }
    }
    verdict(
        2,
        "γ_j(t) equals the spectral sum and the heat-kernel column norm",
        spectral_err <= 1e-10 && column_err <= 1e-10 && min_gamma > 0.0,
        format!("spectral err {spectral_err:.2e}, column err {column_err:.2e}, min γ {min_gamma:.3e}"),
    );
}

#[test]
fn criterion_03_exact_inversion() {
    let (graphs, times) = core_matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut count = 0;
    for (_, g) in &graphs {
        let d = dec(g);
        for &t in &times {
            let hk = heat_kernel(&d, t).unwrap();
            for _ in 0..100 {
                let f = random_signal::<f64>(g.n(), &mut rng);
                let back = inverse_gstft(&d, &hk, &gstft(&d, &hk, &f).unwrap()).unwrap();
                worst = worst.max(back.max_abs_diff(&f));
                count += 1;
            }
        }
    }
    verdict(
        3,
        "W_t V_t f = f",
        worst <= 1e-9,
        format!("{count} signals, max error {worst:.2e}"),
    );
}

#[test]
fn criterion_04_vertex_transitive_tightness() {
    let times = [0.0, 0.1, 1.0, 10.0, 100.0];
    let mut worst_gap = 0.0f64;
    let mut worst_name = String::new();
    for (name, g) in vertex_transitive_family() {
        let d = dec(&g);
        for &t in &times {
            let r = frame_report(&d, &heat_kernel(&d, t).unwrap()).unwrap();
            if r.gap > worst_gap {
                worst_gap = r.gap;
                worst_name = format!("{name} at t={t}");
            }
        }
    }
    let mut worst_comm = 0.0f64;
    for n in 3..=32 {
        let d = dec(&ring_graph(n).unwrap());
        let shift = cyclic_shift(n, 1);
        for &t in &times {
            let hk = heat_kernel(&d, t).unwrap();
            worst_comm = worst_comm
                .max(permutation_commutator(&hk, &shift).unwrap())
                .max(column_permutation_deviation(&hk, &shift).unwrap());
        }
    }
    verdict(
        4,
        "vertex-transitive graphs give tight frames; ring shift commutes with H_t",
        worst_gap <= 1e-9 && worst_comm <= 1e-12,
        format!("max gap {worst_gap:.2e} ({worst_name}), max |PH-HP| {worst_comm:.2e}"),
    );
}

/// 4x4 rook's graph, a second (16,6,2,2) graph, supplied as edge-list text.
fn rook_edge_list() -> String {
    let mut s = String::from("# 4x4 rook's graph\n");
    for a in 0..16 {
        for b in (a + 1)..16 {
            if a / 4 == b / 4 || a % 4 == b % 4 {
                s.push_str(&format!("{a} {b}\n"));
            }
        }
    }
    s
}

/// Paley graph on 13 vertices: adjacent when the difference is a nonzero square mod 13.
fn paley13_edge_list() -> String {
    let squares: Vec<usize> = (1..13).map(|x| x * x % 13).collect();
    let mut s = String::new();
    for a in 0..13 {
        for b in (a + 1)..13 {
            if squares.contains(&(b - a)) {
                s.push_str(&format!("{a} {b}\n"));
            }
        }
    }
    s
}

#[test]
fn criterion_05_srg_tightness() {
    let mut candidates: Vec<(String, Graph)> = vertex_transitive_family();
    candidates.push(("rook4x4".into(), Graph::from_edge_list_text(&rook_edge_list(), None).unwrap()));
    candidates.push(("paley13".into(), Graph::from_edge_list_text(&paley13_edge_list(), None).unwrap()));
    candidates.push(("P3".into(), path_graph(3).unwrap()));
    candidates.push(("rr(24,3,7)".into(), random_regular_graph(24, 3, 7).unwrap()));

    let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
    let mut checked = Vec::new();
    let (mut worst_gap, mut worst_spread, mut worst_closed) = (0.0f64, 0.0f64, 0.0f64);
    let mut norms_exact = true;
    for (name, g) in &candidates {
        if detect_srg_parameters(g).is_err() {
            continue;
        }
        let d = dec(g);
        let sweep = tightness_sweep(&d, &grid).unwrap();
        worst_gap = sweep.gaps().into_iter().fold(worst_gap, f64::max);
        let cert = srg_certificate(g, &d).unwrap();
        worst_spread = worst_spread.max(cert.spread());
        worst_closed = worst_closed.max(cert.closed_form_error());
        norms_exact &= cert.laplacian_norms_exact;
        checked.push(name.clone());
    }
    let expected_present = ["petersen", "shrikhande", "rook4x4", "paley13", "ring4", "ring5", "Q2"];
    let coverage = expected_present.iter().all(|n| checked.iter().any(|c| c == n));
    verdict(
        5,
        "strongly regular graphs give tight frames; partial sums match closed form",
        coverage && worst_gap <= 1e-9 && worst_spread <= 1e-9 && worst_closed <= 1e-8 && norms_exact,
        format!(
            "{} SRGs, max gap {worst_gap:.2e}, spread {worst_spread:.2e}, closed-form err {worst_closed:.2e}, ‖Le_i‖²=d²+d: {norms_exact}",
            checked.len()
        ),
    );
}

#[test]
fn criterion_06_heat_kernel_analytics() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let graphs = [ring_graph(8).unwrap(), path_graph(6).unwrap(), petersen_graph()];
    let (mut semigroup, mut rows, mut identity) = (0.0f64, 0.0f64, 0.0f64);
    for g in &graphs {
        let d = dec(g);
        for _ in 0..20 {
            let s = rng.gen_range(0.0..10.0);
            let t = rng.gen_range(0.0..10.0);
            let hs = heat_kernel(&d, s).unwrap();
            let ht = heat_kernel(&d, t).unwrap();
            let hst = heat_kernel(&d, s + t).unwrap();
            let diff = hs.matrix().dot(ht.matrix()) - hst.matrix();
            semigroup = diff.iter().fold(semigroup, |m, x| m.max(x.abs()));
            rows = rows.max(ht.max_row_sum_error());
        }
        let h0 = heat_kernel(&d, 0.0).unwrap();
        identity = (h0.matrix() - Array2::<f64>::eye(g.n()))
            .iter()
            .fold(identity, |m, x| m.max(x.abs()));
    }
    let dk2 = dec(&complete_graph(2).unwrap());
    let hk2 = heat_kernel(&dk2, 1.0).unwrap();
    let e2 = (-2.0f64).exp();
    let want = [[(1.0 + e2) / 2.0, (1.0 - e2) / 2.0], [(1.0 - e2) / 2.0, (1.0 + e2) / 2.0]];
    let k2_err = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (hk2.matrix()[[i, j]] - want[i][j]).abs())
        .fold(0.0, f64::max);
    let d4 = dec(&ring_graph(4).unwrap());
    let h50 = heat_kernel(&d4, 50.0).unwrap();
    let limit_err = h50
        .column_norms_sq()
        .iter()
        .map(|c| (c - 0.25).abs())
        .fold(0.0, f64::max);
    verdict(
        6,
        "semigroup, stochastic rows, H_0 = I, K2 closed form, column norms tend to 1/N",
        semigroup <= 1e-10 && rows <= 1e-10 && identity == 0.0 && k2_err <= 1e-12 && limit_err <= 1e-8,
        format!(
            "semigroup {semigroup:.2e}, row sums {rows:.2e}, K2 {k2_err:.2e}, |‖h‖²-1/N| {limit_err:.2e}"
        ),
    );
}

/// Decay-regime grid `0.1, 0.2, …, 4.0`. The gap is exactly zero at `t = 0` (H_0 = I)
/// and rises before it decays, so the grid starts at the reference time 0.1; it stops
/// while every gap is still far above roundoff.
const DECAY_GRID_START: f64 = 0.1;
const DECAY_GRID_STEPS: usize = 39;
const DECAY_GRID_STEP: f64 = 0.1;

#[test]
fn criterion_07_decay_rate() {
    let start = Instant::now();
    let grid: Vec<f64> = (0..=DECAY_GRID_STEPS)
        .map(|i| DECAY_GRID_START + i as f64 * DECAY_GRID_STEP)
        .collect();
    let mut details = Vec::new();
    let mut ok = true;
    let mut crossings = Vec::new();
    for k in [3, 5, 7] {
        let g = random_regular_graph(100, k, 42).unwrap();
        let d = dec(&g);
        let sweep = tightness_sweep(&d, &grid).unwrap();
        let l2 = sweep.fiedler_value;
        let gaps = sweep.gaps();
        let monotone = gaps.windows(2).all(|w| w[1] <= w[0]);
        let bounded = grid.iter().zip(&gaps).all(|(&t, &gap)| {
            gap <= gaps[0] * (-2.0 * l2 * (t - DECAY_GRID_START)).exp() * (1.0 + 1e-6)
        });
        ok &= monotone && bounded;
        crossings.push((l2, sweep.first_crossing(1e-6)));
        details.push(format!(
            "k={k}: λ₂={l2:.4}, monotone={monotone}, bounded={bounded}, cross={:?}",
            sweep.first_crossing(1e-6)
        ));
    }
    let (best_l2, best_cross) = crossings
        .iter()
        .copied()
        .fold((f64::NEG_INFINITY, None), |acc, c| if c.0 > acc.0 { c } else { acc });
    let first = match best_cross {
        Some(t) => crossings
            .iter()
            .filter(|c| c.0 != best_l2)
            .all(|c| c.1.is_none_or(|other| t < other)),
        None => false,
    };
    let elapsed = start.elapsed();
    verdict(
        7,
        "tightness gap decays at rate ≥ 2λ₂; largest λ₂ crosses 1e-6 first",
        ok && first && elapsed < Duration::from_secs(60),
        format!("{}; {elapsed:.2?}", details.join("; ")),
    );
}

#[test]
fn criterion_08_classical_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let unitarity = (1..=16)
        .map(|n| DftMatrix::<f64>::new(n).unwrap().unitarity_error())
        .fold(0.0, f64::max);

    let f = random_signal::<f64>(12, &mut rng);
    let mut commutation = 0.0f64;
    for l in 0..12 {
        let lhs = dft(&modulate(&f, l).unwrap()).unwrap();
        let rhs = translate(&dft(&f).unwrap(), l).unwrap();
        commutation = commutation.max(lhs.max_abs_diff(&rhs));
    }

    let f8 = random_signal::<f64>(8, &mut rng);
    let g8 = random_signal::<f64>(8, &mut rng);
    let v = dstft(&f8, &g8).unwrap();
    let system = ClassicalGaborSystem::new(g8.clone()).unwrap();
    let mut atoms_err = 0.0f64;
    for k in 0..8 {
        for l in 0..8 {
            atoms_err = atoms_err.max((v[[k, l]] - f8.inner(&system.atom(k, l).unwrap())).norm());
        }
    }

    let mut recon = 0.0f64;
    for n in [4, 8, 16] {
        let f = random_signal::<f64>(n, &mut rng);
        let g = random_signal::<f64>(n, &mut rng);
        let back = dstft_reconstruct(&dstft(&f, &g).unwrap(), &g).unwrap();
        recon = recon.max(back.max_abs_diff(&f));
    }

    let mut frame = 0.0f64;
    for n in [2, 5, 8, 16] {
        let system = ClassicalGaborSystem::new(random_signal::<f64>(n, &mut rng)).unwrap();
        let bound = system.frame_bound();
        for ((i, j), z) in system.frame_operator().indexed_iter() {
            let want = if i == j { bound } else { 0.0 };
            frame = frame.max((z - Complex::new(want, 0.0)).norm());
        }
    }
    verdict(
        8,
        "DFT unitary, F M_l = T_l F, DSTFT = atom inner products, reconstruction, tight full Gabor system",
        unitarity <= 1e-12 && commutation <= 1e-12 && atoms_err <= 1e-12 && recon <= 1e-9 && frame <= 1e-10,
        format!(
            "unitarity {unitarity:.2e}, commutation {commutation:.2e}, atoms {atoms_err:.2e}, recon {recon:.2e}, frame {frame:.2e}"
        ),
    );
}

#[test]
fn criterion_09_shuman_crosscheck() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut kappa_err = 0.0f64;
    for g in [ring_graph(8).unwrap(), complete_graph(2).unwrap()] {
        let d = dec(&g);
        for tau in [0.5, 1.0] {
            let f = Signal::from_real(&(0..g.n()).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>());
            let c = shuman_crosscheck(&d, &f, tau).unwrap();
            worst = worst.max(c.max_deviation);
            kappa_err = kappa_err.max((c.kappa - Complex::new(c.expected_kappa, 0.0)).norm() / c.expected_kappa);
        }
    }
    verdict(
        9,
        "windowed graph Fourier transform is proportional to the GSTFT",
        worst <= 1e-9,
        format!("max deviation {worst:.2e}, |κ - N·C|/N·C {kappa_err:.2e}"),
    );
}

fn gstft_bin() -> &'static str {
    env!("CARGO_BIN_EXE_gstft")
}

fn run(args: &[&str], dir: &Path) -> Vec<u8> {
    let out = Command::new(gstft_bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

#[test]
fn criterion_10_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(
        p.join("signal.csv"),
        "0.5,0.1\n-1.0,0\n0.25,-0.3\n1.5,0.2\n0,0\n-0.75,1\n0.3,0.3\n2,-1\n",
    )
    .unwrap();
    let invocations: Vec<(&str, Vec<&str>, Vec<&str>)> = vec![
        ("gen", vec!["gen", "--family", "random-regular", "--n", "100", "--k", "3", "--seed", "42"], vec![]),
        ("gen-ring", vec!["gen", "--family", "ring", "--n", "8"], vec![]),
        ("spectrum", vec!["spectrum", "--family", "shrikhande"], vec![]),
        ("spectrum-json", vec!["spectrum", "--family", "petersen", "--format", "json"], vec![]),
        ("heat", vec!["heat", "--family", "ring", "--n", "8", "--t", "1"], vec![]),
        ("gstft", vec!["gstft", "--family", "ring", "--n", "8", "--t", "1", "--signal", "signal.csv"], vec![]),
        ("frame-report", vec!["frame-report", "--family", "shrikhande", "--t-grid", "0:10:1"], vec![".gammas.csv"]),
        ("sweep-decay", vec!["sweep-decay", "--n", "40", "--k", "3,5", "--seeds", "1,2", "--t-grid", "0:2:0.5"], vec![]),
        ("spectrogram", vec!["spectrogram", "--n", "64", "--bins", "4,16", "--width", "16"], vec![".dft.csv"]),
        ("signal", vec!["signal", "--n", "64"], vec![]),
    ];
    let mut identical = 0;
    for (name, args, companions) in &invocations {
        let mut outputs = Vec::new();
        for round in 0..2 {
            let out = format!("{name}-{round}.out");
            let mut full = args.clone();
            full.extend(["--out", out.as_str()]);
            let stdout = run(&full, p);
            let mut bytes = std::fs::read(p.join(&out)).unwrap();
            bytes.extend(stdout);
            for suffix in companions {
                bytes.extend(std::fs::read(p.join(format!("{out}{suffix}"))).unwrap());
            }
            outputs.push(bytes);
        }
        assert!(outputs[0] == outputs[1], "{name} differs between runs");
        identical += 1;
    }
    // reconstruct consumes the gstft output
    let mut recon = Vec::new();
    for round in 0..2 {
        let out = format!("reconstruct-{round}.csv");
        run(
            &["reconstruct", "--family", "ring", "--n", "8", "--t", "1", "--coeffs", "gstft-0.out", "--out", &out],
            p,
        );
        recon.push(std::fs::read(p.join(&out)).unwrap());
    }
    let recon_same = recon[0] == recon[1];
    identical += recon_same as usize;
    verdict(
        10,
        "CLI subcommands are byte-for-byte deterministic",
        recon_same && identical == invocations.len() + 1,
        format!("{identical} invocations compared"),
    );
}
