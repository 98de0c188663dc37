use std::io::Write;
use std::process::{Command, Output, Stdio};

fn orc(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_orc"))
        .args(args)
        .env_remove("ORC_JOBS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn orc");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn zero_config_pipeline_is_flat() {
    let graph = orc(&["generate", "zero-config", "--n", "4"], None);
    assert!(graph.status.success());
    let out = orc(
        &["curvature", "--alpha", "1/2", "--mode", "exact"],
        Some(&stdout(&graph)),
    );
    assert!(out.status.success());
    let csv = stdout(&out);
    let inter: Vec<&str> = csv.lines().filter(|l| l.contains(",inter,")).collect();
    assert_eq!(inter.len(), 3);
    for row in inter {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[3], "0");
        assert_eq!(cols[5], "");
    }
}

#[test]
fn exact_mode_never_prints_floats() {
    let graph = stdout(&orc(
        &[
            "generate", "random", "--m", "5", "--n", "6", "--k", "7", "--seed", "3",
        ],
        None,
    ));
    let csv = stdout(&orc(&["curvature", "--stdin"], Some(&graph)));
    for row in csv.lines().skip(1) {
        let cols: Vec<&str> = row.split(',').collect();
        assert!(cols[5].is_empty() && cols[6].is_empty(), "{row}");
        assert!(!cols[3].contains('.'));
    }
    let float = stdout(&orc(
        &["curvature", "--stdin", "--mode", "float"],
        Some(&graph),
    ));
    let first: Vec<&str> = float.lines().nth(1).unwrap().split(',').collect();
    assert!(first[3].is_empty() && !first[5].is_empty());
}

#[test]
fn bound_verdicts() {
    let out = orc(&["bound", "--m", "128", "--n", "128", "--k", "127"], None);
    assert!(out.status.success());
    assert!(stdout(&out)
        .lines()
        .nth(1)
        .unwrap()
        .ends_with(",GUARANTEED"));
    let out = orc(&["bound", "--m", "12", "--n", "12", "--k", "12"], None);
    assert!(stdout(&out).trim_end().ends_with(",NOT_GUARANTEED"));
}

#[test]
fn sweep_is_byte_identical_across_runs_and_pools() {
    let args = [
        "experiment",
        "sweep",
        "--n",
        "16,32",
        "--mult",
        "1,2",
        "--trials",
        "5",
        "--seed",
        "7",
    ];
    let a = orc(&args, None);
    let b = orc(&args, None);
    let mut single = args.to_vec();
    single.extend(["--jobs", "1"]);
    let c = orc(&single, None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(stdout(&a).lines().count(), 5);
}

#[test]
fn distribution_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("dist.csv");
    let svg = dir.path().join("dist.svg");
    let out = orc(
        &[
            "experiment",
            "distribution",
            "--n",
            "8",
            "--k",
            "4,16",
            "--trials",
            "3",
            "--out",
            csv.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ],
        None,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("n,k,trial,seed,prop_nonpos,prop_neg,kappa_min,kappa_max,ms\n"));
    assert_eq!(text.lines().count(), 7);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
}

#[test]
fn graph_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.graph");
    assert!(orc(
        &[
            "generate",
            "dumbbell",
            "--m",
            "4",
            "--n",
            "4",
            "--out",
            path.to_str().unwrap()
        ],
        None
    )
    .status
    .success());
    let out = orc(&["curvature", "--graph", path.to_str().unwrap()], None);
    let csv = stdout(&out);
    let bridge = csv.lines().find(|l| l.contains(",inter,")).unwrap();
    assert_eq!(bridge, "0,4,inter,-1,2,,,4,4");
}

#[test]
fn witness_reports_sandwich() {
    let graph = stdout(&orc(&["generate", "zero-config", "--n", "5"], None));
    let out = orc(&["witness", "--edge", "0,5"], Some(&graph));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# region potential:"));
    let row = text.lines().nth(2).unwrap();
    assert!(row.ends_with(",1,0,0,true,ok,true"), "{row}");
}

#[test]
fn exit_codes() {
    let out = orc(
        &["generate", "random", "--m", "3", "--n", "4", "--k", "13"],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("INVALID_K"));

    assert_eq!(
        orc(&["curvature", "--alpha", "3/2"], Some(""))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(orc(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(
        orc(&["curvature", "--graph", "x", "--stdin"], None)
            .status
            .code(),
        Some(2)
    );

    let out = orc(&["curvature"], Some("v 2\ne 0 1\ne 0 1\n"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));

    let out = orc(&["witness"], Some("v 2\ne 0 1\n"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("NO_INTER_EDGES"));
}

#[test]
fn selftest_passes() {
    let out = orc(&["selftest"], None);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 5);
}

#[test]
fn jobs_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_orc"))
        .args(["bound", "--m", "3", "--n", "3", "--k", "2"])
        .env("ORC_JOBS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}
