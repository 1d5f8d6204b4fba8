use std::path::Path;
use std::process::{Command, Output};

fn besovlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_besovlab"))
        .args(args)
        .env("BESOVLAB_OUT", dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_reports_membership() {
    let dir = tempfile::tempdir().unwrap();
    let o = besovlab(
        dir.path(),
        &["classify", "-p", "2", "-s", "0", "-w", "0", "-d", "1"],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("E_p: yes (boundary)"), "{text}");
    assert!(text.contains("R_p: no"), "{text}");

    let o = besovlab(
        dir.path(),
        &["classify", "-p", "3", "-s", "-1", "-w", "-1", "-d", "1"],
    );
    let text = stdout(&o);
    for label in ["E_p", "R_p", "R_p^(p)", "gaussian"] {
        assert!(text.contains(&format!("{label}: yes")), "{text}");
    }
    assert!(!dir.path().join("runs.jsonl").exists());
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        besovlab(d, &["classify", "-p", "0.5", "-s", "0", "-w", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(besovlab(d, &["classify", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        besovlab(
            d,
            &[
                "simulate",
                "--alpha",
                "1.2",
                "-p",
                "3",
                "-s",
                "-1",
                "-w",
                "-1",
                "--replicas",
                "0"
            ]
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        besovlab(d, &["analyze", "tau", "--measure", "gaussian", "--q", "2"])
            .status
            .code(),
        Some(2)
    );
    let cfg = d.join("bad.toml");
    std::fs::write(&cfg, "p = 3\nunknown_key = 1\n").unwrap();
    assert_eq!(
        besovlab(d, &["analyze", "stable", "-c", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&cfg, "p = = 3\n").unwrap();
    assert_eq!(
        besovlab(d, &["analyze", "stable", "-c", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn tau_and_hedgehog_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = besovlab(
        d,
        &[
            "analyze",
            "tau",
            "--measure",
            "stable",
            "--alpha",
            "1.2",
            "--q",
            "2",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("1.2,1.2"));

    let args = [
        "analyze", "hedgehog", "--alpha", "1.2", "-p", "3", "-s", "-0.4", "-w", "-1",
    ];
    let o = besovlab(d, &[&args[..], &["--gamma", "0.5"]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("outcome: NotInduced"));
    // q_min = α sits in the band: inconclusive, still a successful run.
    let o = besovlab(d, &[&args[..], &["--gamma", "0.8333333333333334"]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("outcome: Inconclusive"));
    let csv = std::fs::read_to_string(d.join("hedgehog_verdict.csv")).unwrap();
    assert!(csv.starts_with("key,value\noutcome,Inconclusive\n"));
}

#[test]
fn stable_analysis_from_config_replays() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = d.join("run.toml");
    std::fs::write(
        &cfg,
        "alpha = 1.2\np = 3.0\ns = -1.0\nw = -0.5\nbudget = 2048\nsamples = 1000\nseed = 7\n",
    )
    .unwrap();
    // The flag overrides the file.
    let o = besovlab(
        d,
        &["analyze", "stable", "-c", cfg.to_str().unwrap(), "-w", "-1"],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("verdict: induced"));
    let sigma = std::fs::read_to_string(d.join("stable_sigma.csv")).unwrap();
    assert!(sigma.starts_with("n,value,lower,upper,mc_stderr\n1,"));
    let records = std::fs::read_to_string(d.join("runs.jsonl")).unwrap();
    assert!(records.contains("\"w\":-1.0"));

    let o = besovlab(d, &["replay", d.join("runs.jsonl").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("MISMATCH"));
    assert!(d.join("replay").join("stable_sigma.csv").exists());

    // A tampered record no longer replays.
    let bad = records.replacen("\"seed\":7", "\"seed\":8", 1);
    std::fs::write(d.join("tampered.jsonl"), bad).unwrap();
    let o = besovlab(d, &["replay", d.join("tampered.jsonl").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulation_diagnostics_and_worker_independence() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let base = [
        "simulate",
        "--alpha",
        "1.2",
        "-p",
        "3",
        "-w",
        "-1",
        "--budget",
        "16384",
        "--replicas",
        "200",
    ];
    let o = besovlab(d, &[&base[..], &["-s", "-1"]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("diagnostic: Stabilising"),
        "{}",
        stdout(&o)
    );
    let o = besovlab(d, &[&base[..], &["-s", "-0.2", "--name", "out"]].concat());
    assert!(stdout(&o).contains("diagnostic: Growing"), "{}", stdout(&o));

    let o = besovlab(
        d,
        &[
            "--workers",
            "3",
            "replay",
            d.join("runs.jsonl").to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn diagram_writes_grids_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = besovlab(
        d,
        &[
            "diagram",
            "--resolution",
            "2",
            "--p-min",
            "1.5",
            "--p-max",
            "4",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    for plane in ["s_plane", "w_plane"] {
        let csv = std::fs::read_to_string(d.join(format!("diagram_{plane}.csv"))).unwrap();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("one_over_p,s_or_w,in_Ep,in_Rp,in_Rpp,boundary\n"));
    }
    let svg = std::fs::read_to_string(d.join("diagram.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(
        besovlab(d, &["diagram", "--p-min", "3", "--p-max", "2"])
            .status
            .code(),
        Some(2)
    );
}
