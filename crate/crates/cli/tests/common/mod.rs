#![allow(dead_code)]

use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::thread::JoinHandle;

use qrnet_core::ingest::parse_posts;
use qrnet_core::oracle::{
    oracle_betweenness, oracle_closeness, oracle_degree, oracle_eigenvector, oracle_harmonic,
    oracle_pagerank, DenseGraph,
};
use qrnet_core::qr::{derive_interactions, EdgeDirection, QrGraph, TimeUnit};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qrnet"))
}

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn mini_posts() -> PathBuf {
    fixtures().join("mini_posts.xml")
}

pub fn golden(name: &str) -> Vec<u8> {
    std::fs::read(fixtures().join("golden").join(name)).unwrap()
}

/// `qrnet analyze` on the mini fixture with the settings the goldens use.
pub fn analyze_mini(out: &Path, threads: usize) -> Output {
    bin()
        .args([
            "analyze",
            "--site",
            "mini",
            "--threads",
            &threads.to_string(),
            "--posts",
        ])
        .arg(mini_posts())
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

/// Centralities of the mini fixture from the dense brute-force oracle, in
/// `centrality.csv` column order, keyed by user id.
pub fn oracle_rows() -> Vec<(i64, [f64; 6])> {
    let text = std::fs::read(mini_posts()).unwrap();
    let (posts, _) = parse_posts(text.as_slice()).unwrap();
    let (interactions, _) = derive_interactions::<f64>(&posts, TimeUnit::Hours);
    let graph = QrGraph::build(&interactions, 0.01, EdgeDirection::QuestionerToResponder).unwrap();
    let dense = DenseGraph::from_qr_graph(&graph).unwrap();
    let degree = oracle_degree(&dense);
    let betweenness = oracle_betweenness(&dense, false).unwrap();
    let closeness = oracle_closeness(&dense, false).unwrap();
    let pagerank = oracle_pagerank(&dense, 0.85, 1e-9, false).unwrap();
    let eigenvector = oracle_eigenvector(&dense, 1e-9, 100_000, false)
        .unwrap()
        .expect("fixture has a well-defined leading eigenvector");
    let harmonic = oracle_harmonic(&dense, false).unwrap();
    graph
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, u)| {
            (
                u.0,
                [
                    degree[i],
                    betweenness[i],
                    closeness[i],
                    pagerank[i],
                    eigenvector[i],
                    harmonic[i],
                ],
            )
        })
        .collect()
}

pub fn parse_centrality_csv(text: &str) -> Vec<(i64, [f64; 6])> {
    text.lines()
        .skip(1)
        .map(|line| {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 7, "{line}");
            let mut values = [0.0; 6];
            for (v, c) in values.iter_mut().zip(&cells[1..]) {
                *v = c.parse().unwrap();
            }
            (cells[0].parse().unwrap(), values)
        })
        .collect()
}

/// Tolerance per column: exact measures at 1e-9, iterative ones at 1e-6.
pub const COLUMN_TOLERANCE: [f64; 6] = [1e-9, 1e-9, 1e-9, 1e-6, 1e-6, 1e-9];

pub enum Reply {
    Body(Vec<u8>),
    Status(u16),
    /// Announces `announced` bytes but sends only `body` before closing.
    Truncated {
        announced: usize,
        body: Vec<u8>,
    },
}

/// Minimal HTTP/1.1 server answering `connections` requests with `reply`.
pub fn serve(connections: usize, reply: Reply) -> (SocketAddr, JoinHandle<Vec<String>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let handle = std::thread::spawn(move || {
        let mut paths = Vec::new();
        for _ in 0..connections {
            let (stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request_line = String::new();
            reader.read_line(&mut request_line).unwrap();
            paths.push(
                request_line
                    .split_whitespace()
                    .nth(1)
                    .unwrap_or("")
                    .to_string(),
            );
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).unwrap() == 0 || line == "\r\n" {
                    break;
                }
            }
            let mut stream = stream;
            let (status, announced, body) = match &reply {
                Reply::Body(b) => (200, b.len(), b.clone()),
                Reply::Status(s) => (*s, 0, Vec::new()),
                Reply::Truncated { announced, body } => (200, *announced, body.clone()),
            };
            let head = format!(
                "HTTP/1.1 {status} X\r\nContent-Length: {announced}\r\nConnection: close\r\n\r\n"
            );
            let _ = stream.write_all(head.as_bytes());
            let _ = stream.write_all(&body);
            let _ = stream.flush();
        }
        paths
    });
    (addr, handle)
}
