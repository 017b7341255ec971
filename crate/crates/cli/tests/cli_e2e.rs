use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use graphkit::io::{read_edgelist, read_graphdoc, same_graph};
use tempfile::TempDir;

fn graphkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphkit"))
        .args(args)
        .output()
        .expect("spawn graphkit")
}

fn ok(args: &[&str]) -> String {
    let out = graphkit(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Data rows of a CSV with the given header, split on commas.
fn rows(csv: &str, header: &str) -> Vec<Vec<String>> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some(header));
    lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

/// Two triangles joined by the edge 2-3.
fn bridge_graph(dir: &TempDir) -> PathBuf {
    let p = path(dir, "bridge.edges");
    std::fs::write(&p, "0 1\n1 2\n2 0\n2 3\n3 4\n4 5\n5 3\n").unwrap();
    p
}

#[test]
fn generate_ring_writes_one_line_per_edge() {
    let dir = TempDir::new().unwrap();
    let r = path(&dir, "r.edges");
    ok(&["generate", "ring", "--n", "5", "--directed", "-o", s(&r)]);
    let text = std::fs::read_to_string(&r).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.lines().last(), Some("4 0"));
}

#[test]
fn pagerank_csv_sums_to_one() {
    let dir = TempDir::new().unwrap();
    let r = path(&dir, "r.edges");
    ok(&["generate", "ring", "--n", "5", "--directed", "-o", s(&r)]);
    let csv = ok(&["analyze", "--op", "pagerank", "-i", s(&r), "--directed"]);
    let data = rows(&csv, "vertex,score");
    assert_eq!(data.len(), 5);
    let total: f64 = data.iter().map(|r| r[1].parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn convert_preserves_structure_both_ways() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.edges");
    ok(&[
        "generate",
        "gnm",
        "--n",
        "20",
        "--m",
        "40",
        "--seed",
        "3",
        "-o",
        s(&g),
    ]);
    let doc = path(&dir, "g.gdoc");
    ok(&["convert", "-i", s(&g), "-o", s(&doc)]);
    let back = path(&dir, "back.edges");
    ok(&["convert", "-i", s(&doc), "-o", s(&back)]);
    let original = read_edgelist(std::fs::read(&g).unwrap().as_slice(), false).unwrap();
    let via_doc = read_graphdoc(std::fs::read(&doc).unwrap().as_slice()).unwrap();
    assert!(same_graph(&original, &via_doc));
    assert_eq!(std::fs::read(&g).unwrap(), std::fs::read(&back).unwrap());
}

#[test]
fn every_generator_family_runs() {
    let dir = TempDir::new().unwrap();
    let cases: &[(&[&str], u64)] = &[
        (&["ring", "--n", "6", "--open"], 5),
        (&["tree", "--n", "7", "--k", "2"], 6),
        (&["full", "--n", "4"], 6),
        (&["gnm", "--n", "10", "--m", "12", "--seed", "1"], 12),
        (&["ba", "--n", "10", "--k", "2", "--seed", "1"], 17),
    ];
    for (args, m) in cases {
        let out = path(&dir, "g.gdoc");
        let mut full = vec!["generate"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["-o", s(&out)]);
        ok(&full);
        let g = read_graphdoc(std::fs::read(&out).unwrap().as_slice()).unwrap();
        assert_eq!(g.edge_count(), *m, "{args:?}");
    }
    let out = path(&dir, "p.edges");
    ok(&[
        "generate",
        "gnp",
        "--n",
        "10",
        "--p",
        "1.0",
        "--seed",
        "2",
        "-o",
        s(&out),
    ]);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 45);
}

#[test]
fn seeded_generation_is_reproducible_and_unseeded_prints_seed() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.edges"), path(&dir, "b.edges"));
    for p in [&a, &b] {
        ok(&[
            "generate",
            "gnp",
            "--n",
            "30",
            "--p",
            "0.2",
            "--seed",
            "11",
            "-o",
            s(p),
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let out = graphkit(&["generate", "gnp", "--n", "30", "--p", "0.2", "-o", s(&a)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("seed: "));
}

#[test]
fn analyze_traversals_and_paths() {
    let dir = TempDir::new().unwrap();
    let g = bridge_graph(&dir);
    let bfs = rows(
        &ok(&["analyze", "--op", "bfs", "-i", s(&g), "--source", "0"]),
        "rank,vertex,distance",
    );
    assert_eq!(bfs.len(), 6);
    assert_eq!(bfs.last().unwrap()[2], "3");
    let dfs = rows(&ok(&["analyze", "--op", "dfs", "-i", s(&g)]), "rank,vertex");
    assert_eq!(dfs.len(), 6);
    let deg = rows(
        &ok(&["analyze", "--op", "degree", "-i", s(&g)]),
        "vertex,degree",
    );
    assert_eq!(deg[2][1], "3");

    let sp = rows(
        &ok(&[
            "analyze",
            "--op",
            "shortest-path",
            "-i",
            s(&g),
            "--source",
            "0",
            "--target",
            "5",
        ]),
        "path,weight,vertices",
    );
    assert_eq!(sp, vec![vec!["0", "3.0", "0 2 3 5"]]);
    let kp = rows(
        &ok(&[
            "analyze",
            "--op",
            "kpaths",
            "-i",
            s(&g),
            "--source",
            "0",
            "--target",
            "5",
            "--k",
            "3",
        ]),
        "path,weight,vertices",
    );
    assert_eq!(kp.len(), 3);
    assert_eq!(kp[1][2], "0 1 2 3 5");

    let dag = path(&dir, "dag.edges");
    std::fs::write(&dag, "2 0\n0 1\n2 1\n").unwrap();
    let topo = rows(
        &ok(&["analyze", "--op", "toposort", "-i", s(&dag), "--directed"]),
        "rank,vertex",
    );
    let order: Vec<&str> = topo.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(order, ["2", "0", "1"]);
    let cyclic = graphkit(&["analyze", "--op", "toposort", "-i", s(&g), "--directed"]);
    assert_eq!(cyclic.status.code(), Some(1));
}

#[test]
fn analyze_centrality() {
    let dir = TempDir::new().unwrap();
    let g = bridge_graph(&dir);
    let bt = rows(
        &ok(&[
            "analyze",
            "--op",
            "betweenness",
            "-i",
            s(&g),
            "--threads",
            "3",
        ]),
        "vertex,score",
    );
    assert_eq!(bt[2][1], "6.0");
    assert_eq!(bt[0][1], "0.0");
    let cl = rows(
        &ok(&["analyze", "--op", "closeness", "-i", s(&g)]),
        "vertex,score",
    );
    assert_eq!(cl.len(), 6);
    assert!(cl.iter().all(|r| r[1].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn analyze_patterns() {
    let dir = TempDir::new().unwrap();
    let g = bridge_graph(&dir);
    let comps = rows(
        &ok(&["analyze", "--op", "components", "-i", s(&g)]),
        "vertex,component",
    );
    assert!(comps.iter().all(|r| r[1] == "0"));
    let strong = rows(
        &ok(&[
            "analyze",
            "--op",
            "components",
            "--strong",
            "-i",
            s(&g),
            "--directed",
        ]),
        "vertex,component",
    );
    let ids: Vec<&str> = strong.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(ids, ["0", "0", "0", "1", "1", "1"]);
    let motifs = rows(
        &ok(&["analyze", "--op", "motifs", "-i", s(&g)]),
        "class,count",
    );
    assert_eq!(motifs, vec![vec!["path", "4"], vec!["triangle", "2"]]);
    let cliques = rows(
        &ok(&["analyze", "--op", "cliques", "-i", s(&g), "--min-size", "3"]),
        "clique,vertices",
    );
    assert_eq!(cliques, vec![vec!["0", "0 1 2"], vec!["1", "3 4 5"]]);
    let maxc = rows(
        &ok(&["analyze", "--op", "maxclique", "-i", s(&g)]),
        "vertex",
    );
    assert_eq!(maxc.len(), 3);
    let basis = rows(
        &ok(&["analyze", "--op", "cyclebasis", "-i", s(&g)]),
        "cycle,weight,edges",
    );
    assert_eq!(basis.len(), 2);
    assert!(basis.iter().all(|r| r[1] == "3.0"));
}

#[test]
fn weighted_edges_drive_paths() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "w.edges");
    std::fs::write(&g, "0 1 5\n0 2 1\n2 1 1\n").unwrap();
    let sp = rows(
        &ok(&[
            "analyze",
            "--op",
            "shortest-path",
            "-i",
            s(&g),
            "--target",
            "1",
            "--weights",
            "weight",
        ]),
        "path,weight,vertices",
    );
    assert_eq!(sp, vec![vec!["0", "2.0", "0 2 1"]]);
    let missing = graphkit(&[
        "analyze",
        "--op",
        "pagerank",
        "-i",
        s(&g),
        "--weights",
        "cost",
    ]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn communities_every_method() {
    let dir = TempDir::new().unwrap();
    let g = bridge_graph(&dir);
    for method in ["louvain", "leiden"] {
        let out = path(&dir, "c.csv");
        ok(&[
            "communities",
            "--method",
            method,
            "-i",
            s(&g),
            "--seed",
            "4",
            "-o",
            s(&out),
        ]);
        let csv = std::fs::read_to_string(&out).unwrap();
        let header = csv.lines().next().unwrap();
        assert!(header.starts_with(&format!("# method={method} objective=modularity")));
        assert!(header.contains("quality=0.35714285714285"));
        assert!(header.contains("seed=4"));
        let ids: Vec<String> = rows(&csv, "vertex,community")
            .into_iter()
            .map(|r| r[1].clone())
            .collect();
        assert_eq!(ids, ["0", "0", "0", "1", "1", "1"]);
    }
    let fluid = ok(&[
        "communities",
        "--method",
        "fluid",
        "--k",
        "2",
        "-i",
        s(&g),
        "--seed",
        "1",
    ]);
    assert_eq!(rows(&fluid, "vertex,community").len(), 6);
    let cpm = ok(&[
        "communities",
        "--objective",
        "cpm",
        "--gamma",
        "0.1",
        "-i",
        s(&g),
        "--seed",
        "1",
    ]);
    assert!(cpm.starts_with("# method=leiden objective=cpm resolution=0.1"));
    let bad = graphkit(&[
        "communities",
        "--method",
        "louvain",
        "--objective",
        "cpm",
        "-i",
        s(&g),
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn layout_every_algorithm_with_svg() {
    let dir = TempDir::new().unwrap();
    let g = bridge_graph(&dir);
    for algo in ["circle", "fr", "kk", "umap"] {
        let svg = path(&dir, "l.svg");
        let csv = path(&dir, "l.csv");
        ok(&[
            "layout",
            "--algo",
            algo,
            "-i",
            s(&g),
            "--seed",
            "2",
            "--svg",
            s(&svg),
            "-o",
            s(&csv),
            "--epochs",
            "50",
        ]);
        let coords = rows(&std::fs::read_to_string(&csv).unwrap(), "vertex,x,y");
        assert_eq!(coords.len(), 6);
        for r in &coords {
            assert!(
                r[1].parse::<f64>().unwrap().is_finite()
                    && r[2].parse::<f64>().unwrap().is_finite()
            );
        }
        let doc = std::fs::read_to_string(&svg).unwrap();
        assert!(doc.contains("<svg"));
        assert_eq!(doc.matches("<circle").count(), 6);
        assert_eq!(doc.matches("<line").count(), 7);
    }
    let a = ok(&["layout", "--algo", "fr", "-i", s(&g), "--seed", "9"]);
    let b = ok(&["layout", "--algo", "fr", "-i", s(&g), "--seed", "9"]);
    assert_eq!(a, b);
}

#[test]
fn bench_writes_reps_times_sizes_rows() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "bench.csv");
    let run = graphkit(&[
        "bench",
        "--family",
        "ring",
        "--family",
        "tree",
        "--sizes",
        "1000,10000",
        "--reps",
        "3",
        "-o",
        s(&out),
    ]);
    assert!(run.status.success());
    assert!(String::from_utf8_lossy(&run.stderr).contains("log-log slope"));
    let data = rows(
        &std::fs::read_to_string(&out).unwrap(),
        "family,n,k,m,seconds,peak_bytes,rep,status",
    );
    assert_eq!(data.len(), 2 * 2 * 3);
    assert!(data
        .iter()
        .all(|r| r[4].parse::<f64>().unwrap() > 0.0 && r[7] == "ok"));
    assert_eq!(data[0][..4], ["ring", "1000", "0", "1000"]);
    assert_eq!(data[6][..4], ["tree", "1001", "2", "1000"]);
}

#[test]
fn bench_repeats_agree_within_band() {
    if std::env::var_os("GRAPHKIT_CI_LOAD").is_some() {
        return;
    }
    let recs =
        graphkit_cli::bench::bench_scaling(graphkit_cli::bench::Family::Ring, &[1_000_000], 3)
            .unwrap();
    let t: Vec<f64> = recs.iter().map(|r| r.seconds).collect();
    let (lo, hi) = t
        .iter()
        .fold((f64::MAX, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    assert!((hi - lo) / hi < 0.5, "{t:?}");
}

#[test]
fn usage_and_runtime_errors_use_distinct_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(graphkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        graphkit(&["generate", "ring", "--n", "3", "--bogus", "-o", "x.edges"])
            .status
            .code(),
        Some(2)
    );
    let missing = graphkit(&[
        "analyze",
        "--op",
        "degree",
        "-i",
        s(&path(&dir, "nope.edges")),
    ]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error: "));
    let unknown_ext = graphkit(&["analyze", "--op", "degree", "-i", s(&path(&dir, "g.txt"))]);
    assert_eq!(unknown_ext.status.code(), Some(1));
    let bad = path(&dir, "bad.edges");
    std::fs::write(&bad, "0 1\n2\n").unwrap();
    let parse = graphkit(&["analyze", "--op", "degree", "-i", s(&bad)]);
    assert_eq!(parse.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 2"));
}

#[test]
fn explicit_format_overrides_extension() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "graph.txt");
    ok(&[
        "generate",
        "ring",
        "--n",
        "4",
        "--format",
        "gdoc",
        "-o",
        s(&g),
    ]);
    assert!(std::fs::read_to_string(&g)
        .unwrap()
        .starts_with("graphdoc 1"));
    let deg = ok(&["analyze", "--op", "degree", "--format", "gdoc", "-i", s(&g)]);
    assert_eq!(rows(&deg, "vertex,degree").len(), 4);
}
