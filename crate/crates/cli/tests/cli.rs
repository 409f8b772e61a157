use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn rigiscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigiscope"))
        .args(args)
        .env_remove("RIGISCOPE_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn without_runtime(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("runtime_ms");
    v
}

#[test]
fn analyze_hinged_double_banana() {
    let out = rigiscope(&[
        "analyze",
        "--gen",
        "double-banana",
        "--hinge",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["numbers"]["rank"], 17);
    assert_eq!(r["numbers"]["maxwell_independent"], 0);
    assert_eq!(r["details"]["violation"]["deficiency"]["value"], 1);
}

#[test]
fn analyze_n_banana() {
    let out = rigiscope(&["analyze", "--gen", "n-banana", "4", "--format", "json"]);
    let r = json(&out);
    assert_eq!(r["numbers"]["rank"], 33);
    assert_eq!(r["numbers"]["edges"], 36);
    assert_eq!(r["numbers"]["peel3_kernel_empty"], 1);
}

#[test]
fn analyze_file_in_the_plane() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    fs::write(
        &path,
        "# two triangles on an edge\n0 1\n0 2\n1 2\n1 3\n2 3\n",
    )
    .unwrap();
    let out = rigiscope(&[
        "analyze",
        "--in",
        path.to_str().unwrap(),
        "--d",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["numbers"]["rank"], 5);
    assert_eq!(r["numbers"]["maxwell_independent"], 1);
    assert_eq!(r["numbers"]["components"], 1);
}

#[test]
fn analyze_dot_output() {
    let out = rigiscope(&["analyze", "--gen", "double-banana-bar", "--format", "dot"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph"));
    assert!(text.contains("penwidth=3"));
}

#[test]
fn verify_main_on_builtin_corpus() {
    let out = rigiscope(&[
        "verify",
        "--theorem",
        "main",
        "--corpus",
        "builtin",
        "--samples",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["numbers"]["graphs"], 64);
    assert_eq!(r["numbers"]["fail"], 0);
}

#[test]
fn verify_rank_ie_with_banana_cover() {
    let dir = tempfile::tempdir().unwrap();
    let cover = dir.path().join("c.txt");
    fs::write(&cover, "0 1 2 3 4\n3 4 5 6 7\n").unwrap();
    let out = rigiscope(&[
        "verify",
        "--theorem",
        "rank-ie",
        "--gen",
        "double-banana",
        "--cover",
        cover.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["numbers"]["ie_rank"], 17);
    assert_eq!(r["numbers"]["ie_rank_plain"], 18);
}

#[test]
fn complete_cover_on_three_k5_chain_is_inapplicable() {
    let out = rigiscope(&[
        "verify",
        "--theorem",
        "complete-2thin",
        "--gen",
        "three-k5-chain",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "inapplicable");
}

#[test]
fn search_is_deterministic() {
    let args = [
        "search",
        "--conjecture",
        "strong2co",
        "--n",
        "8",
        "--budget",
        "120",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let a = rigiscope(&args);
    let b = rigiscope(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(without_runtime(json(&a)), without_runtime(json(&b)));
    assert_eq!(json(&a)["seed"], "0x7");
}

#[test]
fn seed_from_environment_only_without_flag() {
    let run = |extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_rigiscope"));
        cmd.args(["analyze", "--gen", "k5-ring", "3", "--format", "json"])
            .args(extra);
        json(&cmd.env("RIGISCOPE_SEED", "beef").output().unwrap())
    };
    assert_eq!(run(&[])["seed"], "0xbeef");
    assert_eq!(run(&["--seed", "0x12"])["seed"], "0x12");
    assert_eq!(
        json(&rigiscope(&[
            "analyze", "--gen", "path", "4", "--format", "json"
        ]))["seed"],
        "0xc0ffee"
    );
}

#[test]
fn generate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let c = dir.path().join("c.txt");
    let out = rigiscope(&[
        "generate",
        "--gen",
        "smr-counter",
        "--out",
        g.to_str().unwrap(),
        "--cover",
        c.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let graph = rigiscope::graph::read_graph(&fs::read_to_string(&g).unwrap()).unwrap();
    let cover = rigiscope::graph::read_cover(&fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!((graph.n(), graph.edge_count(), cover.len()), (85, 275, 31));
    assert!(rigiscope::covers::Cover::new(&graph, cover)
        .unwrap()
        .covers_all_edges(&graph));

    let out = rigiscope(&[
        "analyze",
        "--in",
        g.to_str().unwrap(),
        "--jobs",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(json(&out)["numbers"]["rank"], 244);
}

#[test]
fn input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0 1\n1 1\n").unwrap();
    let out = rigiscope(&["analyze", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    assert_eq!(
        rigiscope(&["analyze", "--in", "/no/such/file"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        rigiscope(&["analyze", "--gen", "nonsense"]).status.code(),
        Some(1)
    );
    assert_eq!(rigiscope(&["analyze", "--bogus"]).status.code(), Some(1));
    assert_eq!(
        rigiscope(&["search", "--conjecture", "nope"]).status.code(),
        Some(1)
    );
    assert_eq!(
        rigiscope(&["search", "--conjecture", "bodyhinge", "--d", "2"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn contract_errors_exit_with_two() {
    // Components need a Maxwell-independent graph.
    let out = rigiscope(&[
        "verify",
        "--theorem",
        "weak-rank-ie",
        "--gen",
        "double-banana",
        "--hinge",
    ]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
