//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::io::{BufReader, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use qrnet::config::RunConfig;
use qrnet::pipeline::run_analyze;
use qrnet_core::analytics::{correlation_matrix, round_to, RoleSummary};
use qrnet_core::centrality::{pagerank, CentralityOptions, CentralityTable, ConvergenceInfo};
use qrnet_core::ingest::parse_posts;
use qrnet_core::oracle::{
    oracle_betweenness, oracle_closeness, oracle_degree, oracle_eigenvector, oracle_harmonic,
    oracle_pagerank, DenseGraph,
};
use qrnet_core::qr::{edge_weight, QrGraph};
use qrnet_core::UserId;
use qrnet_validation::{
    live_bytes, peak_bytes, reset_peak, synthetic_qr_graph, CountingAlloc, SyntheticPosts,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc;

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn qr_ratio_reproduction() -> Result<String, String> {
    let published = [
        ("Data Science", 14084, 3448, 4.09),
        ("Artificial Intelligence", 4128, 1167, 3.54),
        ("Project Management", 3440, 657, 5.23),
        ("GenAI", 91, 42, 2.17),
        ("Software Engineering", 27345, 6668, 4.10),
    ];
    let mut mismatches = Vec::new();
    let mut all = Vec::new();
    for (site, q, r, expected) in published {
        let ratio = RoleSummary::from_counts(q, r, 0).qr_ratio.unwrap();
        let rounded = round_to(ratio, 2);
        all.push(format!("{site} {q}/{r}={ratio:.4}"));
        if rounded != expected {
            mismatches.push(format!(
                "{site}: {q}/{r} = {ratio:.4} rounds to {rounded:.2}, table says {expected:.2}"
            ));
        }
    }
    if mismatches.is_empty() {
        Ok(all.join(", "))
    } else {
        Err(mismatches.join("; "))
    }
}

fn edge_weight_formula() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(2);
    let mut values = vec![0.0, 0.99, 99.99, 1e6];
    values.extend((0..1000).map(|_| 10f64.powf(rng.random_range(-4.0..6.5))));
    let mut worst = 0.0f64;
    for r in &values {
        let expected = 1.0 / (r + 0.01);
        let rel = ((edge_weight(*r, 0.01) - expected) / expected).abs();
        worst = worst.max(rel);
    }
    ensure(worst <= 1e-12, || format!("relative error {worst:e}"))?;
    Ok(format!(
        "{} values, worst relative error {worst:e}",
        values.len()
    ))
}

fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> QrGraph<f64> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    QrGraph::from_index_edges(n, &edges).unwrap()
}

fn compare(label: &str, got: &[f64], want: &[f64], tol: f64) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for (g, w) in got.iter().zip(want) {
        worst = worst.max((g - w).abs());
    }
    ensure(got.len() == want.len() && worst <= tol, || {
        format!("{label}: got {got:?}, oracle {want:?}")
    })?;
    Ok(worst)
}

fn oracle_equivalence() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(3);
    let opts = CentralityOptions::default();
    let mut graphs = 0;
    let mut worst_exact = 0.0f64;
    let mut worst_iterative = 0.0f64;
    let mut degenerate = 0;
    for n in 2..=6 {
        for p in [0.3, 0.7] {
            for i in 0..200 {
                let g = random_graph(&mut rng, n, p);
                let t = CentralityTable::compute(&g, &opts).map_err(|e| e.to_string())?;
                let d = DenseGraph::from_qr_graph(&g).unwrap();
                let tag = |m: &str| format!("n={n} p={p} #{i} {m}");
                for (m, got, want) in [
                    ("degree", &t.degree, oracle_degree(&d)),
                    (
                        "betweenness",
                        &t.betweenness,
                        oracle_betweenness(&d, false).unwrap(),
                    ),
                    (
                        "closeness",
                        &t.closeness,
                        oracle_closeness(&d, false).unwrap(),
                    ),
                    ("harmonic", &t.harmonic, oracle_harmonic(&d, false).unwrap()),
                ] {
                    worst_exact = worst_exact.max(compare(&tag(m), got, &want, 1e-9)?);
                }
                let pr = oracle_pagerank(&d, 0.85, 1e-9, false).unwrap();
                worst_iterative =
                    worst_iterative.max(compare(&tag("pagerank"), &t.pagerank, &pr, 1e-6)?);
                match oracle_eigenvector(&d, 1e-9, 1000, false).unwrap() {
                    Some(ev) => {
                        ensure(t.convergence.eigenvector_converged, || {
                            tag("eigenvector converged flag")
                        })?;
                        worst_iterative = worst_iterative.max(compare(
                            &tag("eigenvector"),
                            &t.eigenvector,
                            &ev,
                            1e-6,
                        )?);
                    }
                    None => {
                        degenerate += 1;
                        ensure(!t.convergence.eigenvector_converged, || {
                            tag("eigenvector should be degenerate")
                        })?;
                        ensure(t.eigenvector.iter().all(|&x| x == 0.0), || {
                            tag("degenerate eigenvector not zeroed")
                        })?;
                    }
                }
                graphs += 1;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < 60.0, || format!("took {elapsed:.1} s"))?;
    Ok(format!(
        "{graphs} graphs ({degenerate} with degenerate eigenvector), max deviation {worst_exact:e} exact / {worst_iterative:e} iterative, {elapsed:.2} s"
    ))
}

fn pagerank_conservation() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(4);
    let mut graphs: Vec<(String, QrGraph<f64>)> = Vec::new();
    for n in 1..=60 {
        graphs.push((
            format!("{n} isolated nodes"),
            QrGraph::from_index_edges(n, &[]).unwrap(),
        ));
    }
    for n in 2..=40 {
        let star: Vec<_> = (1..n).map(|v| (v, 0)).collect();
        graphs.push((
            format!("{n}-star into a sink"),
            QrGraph::from_index_edges(n, &star).unwrap(),
        ));
        for p in [0.05, 0.3, 0.7] {
            graphs.push((format!("random n={n} p={p}"), random_graph(&mut rng, n, p)));
        }
    }
    graphs.push((
        "synthetic 5000/9000".into(),
        synthetic_qr_graph(5000, 9000, 5),
    ));
    let mut worst = 0.0f64;
    for (label, g) in &graphs {
        let result = pagerank(g, 0.85, 1e-9, 1000).map_err(|e| format!("{label}: {e}"))?;
        let dev = (result.scores.iter().sum::<f64>() - 1.0).abs();
        ensure(dev <= 1e-9, || format!("{label}: sum deviates by {dev:e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!(
        "{} graphs, worst |sum - 1| = {worst:e}",
        graphs.len()
    ))
}

fn correlation_properties() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(5);
    let mut worst_asym = 0.0f64;
    let mut worst_shift = 0.0f64;
    for trial in 0..100 {
        let n = rng.random_range(3..60);
        let column = |rng: &mut StdRng| -> Vec<f64> {
            (0..n).map(|_| rng.random_range(-5.0..5.0)).collect()
        };
        let mut table = CentralityTable {
            nodes: (0..n as i64).map(UserId).collect(),
            degree: column(&mut rng),
            betweenness: column(&mut rng),
            closeness: column(&mut rng),
            pagerank: column(&mut rng),
            eigenvector: column(&mut rng),
            harmonic: column(&mut rng),
            convergence: ConvergenceInfo::default(),
        };
        // correlated pair
        table.harmonic = table
            .closeness
            .iter()
            .map(|x| 2.0 * x + rng.random_range(-0.5..0.5))
            .collect();
        let m = correlation_matrix(&table).map_err(|e| e.to_string())?;
        for i in 0..6 {
            let diag = m.values[i][i].ok_or_else(|| format!("table {trial}: missing diagonal"))?;
            ensure(diag == 1.0, || format!("table {trial}: diagonal {diag}"))?;
            for j in 0..6 {
                let a = m.values[i][j].ok_or_else(|| format!("table {trial}: undefined entry"))?;
                let b = m.values[j][i].unwrap();
                ensure((-1.0..=1.0).contains(&a), || {
                    format!("table {trial}: entry {a}")
                })?;
                worst_asym = worst_asym.max((a - b).abs());
            }
        }
        let (scale, shift) = (rng.random_range(0.001..1000.0), rng.random_range(-1e3..1e3));
        let mut moved = table.clone();
        moved.pagerank = table.pagerank.iter().map(|x| scale * x + shift).collect();
        moved.degree = table.degree.iter().map(|x| x * 1e-6 - 3.0).collect();
        let m2 = correlation_matrix(&moved).map_err(|e| e.to_string())?;
        for i in 0..6 {
            for j in 0..6 {
                worst_shift =
                    worst_shift.max((m.values[i][j].unwrap() - m2.values[i][j].unwrap()).abs());
            }
        }
    }
    ensure(worst_asym <= 1e-12, || format!("asymmetry {worst_asym:e}"))?;
    ensure(worst_shift <= 1e-9, || {
        format!("scale/shift changed a coefficient by {worst_shift:e}")
    })?;
    Ok(format!(
        "100 tables, asymmetry {worst_asym:e}, scale/shift drift {worst_shift:e}"
    ))
}

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn fixture_dir() -> PathBuf {
    manifest_dir().join("../cli/tests/fixtures")
}

/// The `qrnet` binary built alongside this test, if cargo built it.
fn qrnet_binary() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let candidate = exe
        .parent()?
        .parent()?
        .join(format!("qrnet{}", std::env::consts::EXE_SUFFIX));
    candidate.is_file().then_some(candidate)
}

fn check_outputs(dir: &Path, label: &str) -> Result<(), String> {
    for name in ["report.json", "centrality.csv"] {
        let got = std::fs::read(dir.join(name)).map_err(|e| e.to_string())?;
        let want =
            std::fs::read(fixture_dir().join("golden").join(name)).map_err(|e| e.to_string())?;
        ensure(got == want, || {
            format!("{name} differs from golden ({label})")
        })?;
    }
    Ok(())
}

fn golden_end_to_end() -> Result<String, String> {
    let posts = fixture_dir().join("mini_posts.xml");
    let binary = qrnet_binary();
    for threads in [1, 2, 8] {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut config = RunConfig::new(&posts, dir.path());
        config.site = Some("mini".into());
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_analyze(&config))
            .map_err(|e| e.to_string())?;
        check_outputs(dir.path(), &format!("pipeline, {threads} threads"))?;

        if let Some(bin) = &binary {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let out = Command::new(bin)
                .args([
                    "analyze",
                    "--site",
                    "mini",
                    "--threads",
                    &threads.to_string(),
                    "--posts",
                ])
                .arg(&posts)
                .arg("--out")
                .arg(dir.path())
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.success(), || {
                format!(
                    "qrnet analyze failed: {}",
                    String::from_utf8_lossy(&out.stderr)
                )
            })?;
            check_outputs(dir.path(), &format!("qrnet binary, {threads} threads"))?;
        }
    }
    let how = if binary.is_some() {
        "pipeline and qrnet binary"
    } else {
        "pipeline (qrnet binary not built)"
    };
    Ok(format!("byte-identical at 1/2/8 threads via {how}"))
}

fn desk_scale_performance() -> Result<String, String> {
    let (nodes, edges) = (34_013, 57_391);
    let graph = synthetic_qr_graph(nodes, edges, 7);
    ensure(
        graph.node_count() == nodes && graph.edge_count() == edges,
        || "generator shape".into(),
    )?;
    let start = Instant::now();
    let table = CentralityTable::compute(&graph, &CentralityOptions::default())
        .map_err(|e| e.to_string())?;
    let centrality_secs = start.elapsed().as_secs_f64();
    ensure(table.convergence.pagerank_converged, || {
        "PageRank did not converge".into()
    })?;
    ensure(centrality_secs < 300.0, || {
        format!("centralities took {centrality_secs:.1} s")
    })?;
    drop(table);
    drop(graph);

    let rows = 1_000_000;
    let baseline = live_bytes();
    reset_peak();
    let start = Instant::now();
    let (posts, stats) = parse_posts(BufReader::with_capacity(
        1 << 16,
        SyntheticPosts::new(rows, 200_000, 8),
    ))
    .map_err(|e| e.to_string())?;
    let ingest_secs = start.elapsed().as_secs_f64();
    let peak_mb = (peak_bytes() - baseline) as f64 / (1024.0 * 1024.0);
    ensure(
        stats.rows_read == rows && posts.len() as u64 == rows,
        || format!("read {} rows", stats.rows_read),
    )?;
    ensure(peak_mb < 256.0, || format!("ingest peak {peak_mb:.1} MB"))?;
    Ok(format!(
        "{nodes} nodes / {edges} edges: all measures in {centrality_secs:.1} s on {} threads; 1M-row ingest peak {peak_mb:.1} MB in {ingest_secs:.1} s",
        rayon::current_num_threads()
    ))
}

fn reproduction_runbook() -> Result<String, String> {
    let readme = std::fs::read_to_string(manifest_dir().join("../../README.md"))
        .map_err(|e| format!("README: {e}"))?;
    let section = readme
        .split("\n## ")
        .find(|s| s.starts_with("Live reproduction"))
        .ok_or("README has no Live reproduction section")?;
    for needle in [
        "qrnet fetch",
        "7z x",
        "qrnet analyze",
        "qrnet compare",
        "17,523",
        "26,509",
        "5,295",
        "7,546",
        "4,097",
        "5,700",
        "155",
        "133",
        "34,013",
        "57,391",
        "drift",
    ] {
        ensure(section.contains(needle), || {
            format!("runbook lacks {needle:?}")
        })?;
    }
    for suite in [
        "../core/tests/properties.rs",
        "../core/tests/oracle_equivalence.rs",
    ] {
        ensure(manifest_dir().join(suite).is_file(), || {
            format!("missing {suite}")
        })?;
    }
    Ok("runbook present with reference counts; property and oracle suites present".into())
}

fn main() {
    let criteria: [(&str, Check); 8] = [
        ("QR-ratio reproduction", qr_ratio_reproduction),
        ("edge-weight formula", edge_weight_formula),
        ("oracle equivalence", oracle_equivalence),
        ("PageRank conservation", pagerank_conservation),
        ("correlation-matrix properties", correlation_properties),
        ("golden end-to-end", golden_end_to_end),
        ("desk-scale performance", desk_scale_performance),
        ("live-reproduction runbook", reproduction_runbook),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(format!(
                "panicked: {:?}",
                p.downcast_ref::<String>()
                    .map(String::as_str)
                    .or(p.downcast_ref::<&str>().copied())
            ))
        });
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} {} {name}: {detail} [{:.2}s]",
            i + 1,
            start.elapsed().as_secs_f64()
        );
        std::io::stdout().flush().unwrap();
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
