//! The `graphhom` binary end to end, each test with its own cache directory.

use std::path::Path;
use std::process::{Command, Output};

fn graphhom(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphhom"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .output()
        .expect("run graphhom")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_theta_and_tetrahedron() {
    let dir = tempfile::tempdir().unwrap();
    let o = graphhom(
        dir.path(),
        &["enumerate", "--n", "3", "--vertices", "2", "--edges", "3"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("count 1\n"));
    // even n: the theta graph has an odd symmetry and vanishes
    let o = graphhom(
        dir.path(),
        &["enumerate", "--n", "2", "--vertices", "2", "--edges", "3"],
    );
    assert!(stdout(&o).ends_with("count 0\n"));
    let o = graphhom(
        dir.path(),
        &[
            "enumerate",
            "--n",
            "2",
            "--vertices",
            "4",
            "--edges",
            "6",
            "--no-tadpoles",
        ],
    );
    assert!(stdout(&o).ends_with("count 1\n"));
    let o = graphhom(
        dir.path(),
        &[
            "enumerate",
            "--n",
            "5",
            "--m",
            "2",
            "--vertices",
            "1",
            "--edges",
            "0",
            "--hairs",
            "3",
        ],
    );
    assert!(stdout(&o).ends_with("count 1\n"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["enumerate", "--n", "3"][..],
        &["gc", "homology", "--n", "2", "--loops", "x"],
        &[
            "enumerate",
            "--n",
            "3",
            "--vertices",
            "1",
            "--edges",
            "0",
            "--hairs",
            "2",
        ],
        &[
            "gc",
            "homology",
            "--n",
            "2",
            "--loops",
            "1",
            "--min-valence",
            "2",
        ],
        &[
            "hgc", "homology", "--n", "4", "--m", "2", "--loops", "0", "--hairs", "1", "--twist",
            "square",
        ],
        &["no-such-command"],
    ] {
        let o = graphhom(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn gc_table_files_and_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let args = [
        "gc",
        "homology",
        "--n",
        "3",
        "--loops",
        "2..4",
        "--out",
        out.path().to_str().unwrap(),
    ];
    let cold = graphhom(dir.path(), &args);
    assert_eq!(cold.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.path().join("gc_n3_v3_loops2-4.csv")).unwrap();
    assert_eq!(csv, stdout(&cold));
    assert!(csv.contains("GC,3,,2,,3,1,true"));
    assert!(out.path().join("gc_n3_v3_loops2-4.json").exists());
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 3);
    let warm = graphhom(dir.path(), &args);
    assert_eq!(stdout(&warm), stdout(&cold));
}

#[test]
fn output_is_independent_of_jobs() {
    let out = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "2"] {
        let dir = tempfile::tempdir().unwrap();
        let o = graphhom(
            dir.path(),
            &[
                "--jobs",
                jobs,
                "hgc",
                "homology",
                "--n",
                "4",
                "--m",
                "2",
                "--loops",
                "0..1",
                "--hairs",
                "1..4",
                "--out",
                out.path().to_str().unwrap(),
            ],
        );
        assert_eq!(o.status.code(), Some(0));
        outputs.push(stdout(&o));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(outputs[0].contains("HGC,4,2,1,3,2,1,true"));
}

#[test]
fn twisted_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let o = graphhom(
        dir.path(),
        &[
            "hgc",
            "homology",
            "--n",
            "3",
            "--m",
            "2",
            "--loops",
            "0",
            "--hairs",
            "1..5",
            "--twist",
            "tripod:1",
            "--out",
            out.path().to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let nonzero: Vec<_> = stdout(&o)
        .lines()
        .skip(1)
        .filter(|l| !l.split(',').nth(6).unwrap().starts_with('0'))
        .map(String::from)
        .collect();
    assert_eq!(nonzero, vec!["HGC-twisted,3,2,0,5,-1,1,true".to_string()]);
}

#[test]
fn exported_matrices_reload() {
    let dir = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let mats = tempfile::tempdir().unwrap();
    let o = graphhom(
        dir.path(),
        &[
            "gc",
            "homology",
            "--n",
            "2",
            "--loops",
            "4",
            "--out",
            out.path().to_str().unwrap(),
            "--export-matrices",
            mats.path().to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(mats.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert!(!files.is_empty());
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        graphhom::exact::SparseMatrix::from_sms(&text).unwrap();
    }
}

#[test]
fn verify_quick_passes_then_catches_poison() {
    let dir = tempfile::tempdir().unwrap();
    let o = graphhom(dir.path(), &["verify", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| !l.starts_with("FAIL")));

    // raise one nonzero dimension in a cached GC_3 entry
    let mut poisoned = None;
    for e in std::fs::read_dir(dir.path()).unwrap() {
        let path = e.unwrap().path();
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let block = v["block"].as_str().unwrap().to_string();
        if !block.starts_with("GC n=3") {
            continue;
        }
        let rows = v["rows"].as_array_mut().unwrap();
        if let Some(r) = rows.iter_mut().find(|r| r["dim"].as_u64().unwrap() > 0) {
            r["dim"] = serde_json::json!(r["dim"].as_u64().unwrap() + 1);
            std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
            poisoned = Some(block);
            break;
        }
    }
    let block = poisoned.expect("a cached GC_3 block with homology");
    let o = graphhom(dir.path(), &["verify", "--quick"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL GC_3"), "{text}");
    assert!(text.contains(&block), "{text}");
}
