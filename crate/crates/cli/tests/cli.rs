//! Runs the built binary against small inputs.

use std::path::Path;
use std::process::{Command, Output};

fn fracwave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracwave"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("fracwave binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_constant(dir: &Path, name: &str, n: usize) {
    let text: String = (0..n).map(|_| "2.5\n").collect();
    std::fs::write(dir.join(name), text).unwrap();
}

fn read_column(path: &Path) -> Vec<f64> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect()
}

#[test]
fn synth_cascade_by_hand() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracwave(dir.path(), &["synth", "cascade:a=0.75,n=2", "-o", "c.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read_column(&dir.path().join("c.csv")), vec![0.5625, 0.1875, 0.1875, 0.0625]);
}

#[test]
fn synth_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    fracwave(dir.path(), &["synth", "white:n=3,seed=1", "-o", "a.csv"]);
    fracwave(dir.path(), &["synth", "white:n=3,seed=1", "-o", "b.csv"]);
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(a.iter().filter(|&&c| c == b'\n').count(), 8);
}

#[test]
fn synth_rejects_out_of_range_hurst() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracwave(dir.path(), &["synth", "fgn:H=1.5,n=10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("RangeError"), "{}", stderr(&o));
}

#[test]
fn synth_reports_the_bad_token() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracwave(dir.path(), &["synth", "fgn:H=0.5,n=10,colour=red"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
}

#[test]
fn mfdfa_rejects_constant_signals() {
    let dir = tempfile::tempdir().unwrap();
    write_constant(dir.path(), "flat.csv", 512);
    let o = fracwave(dir.path(), &["mfdfa", "flat.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("TooManyDegenerateSegments"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn mfdfa_counts_failures_and_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    write_constant(dir.path(), "flat.csv", 512);
    let o = fracwave(dir.path(), &["mfdfa", "flat.csv", "white:n=12,seed=1", "missing.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(dir.path().join("white_n-12_seed-1.mfdfa.json").exists());
    assert!(dir.path().join("white_n-12_seed-1.fluct.csv").exists());
}

#[test]
fn mfdfa_white_noise_with_wider_dead_band() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracwave(dir.path(), &["mfdfa", "white:n=14,seed=3", "--dead-band", "0.05", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("white_n-14_seed-3.mfdfa.json")).unwrap())
            .unwrap();
    assert_eq!(json["classification"], "uncorrelated");
    assert_eq!(json["length"], 16384);
    assert!(!dir.path().join("white_n-14_seed-3.fluct.csv").exists());
}

#[test]
fn mfdfa_reads_pgm_images() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("P2\n# test\n64 64\n255\n");
    let mut state = 7u64;
    for _ in 0..64 * 64 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        text.push_str(&format!("{}\n", state >> 56));
    }
    std::fs::write(dir.path().join("img.pgm"), text).unwrap();
    let o = fracwave(dir.path(), &["mfdfa", "img.pgm", "--unfold", "boustrophedon"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("img.mfdfa.json").exists());
}

#[test]
fn dwt_constant_trace_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    write_constant(dir.path(), "flat.csv", 1000);
    let o = fracwave(dir.path(), &["dwt", "flat.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let trace = read_column(&dir.path().join("flat.band5.csv"));
    assert_eq!(trace.len(), 1000);
    assert!(trace.iter().all(|v| v.abs() <= 1e-12 * 2.5));
    assert!(dir.path().join("flat.dwt.json").exists());
}

#[test]
fn dwt_too_many_levels() {
    let dir = tempfile::tempdir().unwrap();
    write_constant(dir.path(), "short.csv", 64);
    let o = fracwave(dir.path(), &["dwt", "short.csv", "--levels", "9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("TooManyLevels"), "{}", stderr(&o));
    assert!(stderr(&o).contains("short.csv"));
}

#[test]
fn self_coherence_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracwave(dir.path(), &["synth", "fgn:H=0.6,n=10,seed=4", "-o", "x.csv"]);
    assert!(o.status.success());
    let o = fracwave(dir.path(), &["coherence", "x.csv", "x.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("x__x.coherence.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# scale,position,coherence,phase,in_coi"));
    let mut rows = 0;
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cols[2] - 1.0).abs() <= 1e-9, "{line}");
        assert_eq!(cols[3], 0.0);
        rows += 1;
    }
    assert!(rows > 1000);
}

#[test]
fn help_lists_defaults() {
    let dir = tempfile::tempdir().unwrap();
    for (sub, wants) in [
        ("mfdfa", &["[default: 1]", "[default: -5]", "[default: 0.25]", "[default: 16]", "[default: 0.02]"][..]),
        ("dwt", &["[default: 4]", "[default: 5]", "[default: periodic]"][..]),
        ("coherence", &["[default: 2]", "[default: 0.6]", "[default: 3]", "[default: 12]"][..]),
        ("report", &["[default: report]", "[default: row-major]"][..]),
    ] {
        let o = fracwave(dir.path(), &[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        let text = String::from_utf8_lossy(&o.stdout);
        for w in wants {
            assert!(text.contains(w), "{sub} help lacks {w}");
        }
        assert!(text.contains("--out-dir") && text.contains("--format"));
    }
}

#[test]
fn usage_errors_exit_126() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["mfdfa"][..],
        &["bogus"][..],
        &["dwt", "x.csv", "--boundary", "mirror"][..],
        &["mfdfa", "x.csv", "--q-step", "0.3"][..],
        &["synth", "white:n=3", "white:n=4", "-o", "one.csv"][..],
        &[][..],
    ] {
        let o = fracwave(dir.path(), args);
        assert_eq!(o.status.code(), Some(126), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn config_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    write_constant(dir.path(), "flat.csv", 1000);
    std::fs::write(dir.path().join("settings.conf"), "# dwt\nlevels = 3\nband=2\n").unwrap();
    let o = fracwave(dir.path(), &["dwt", "flat.csv", "--config", "settings.conf"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("flat.band2.csv").exists());
    let o = fracwave(dir.path(), &["dwt", "flat.csv", "--config", "settings.conf", "--band", "1"]);
    assert!(o.status.success());
    assert!(dir.path().join("flat.band1.csv").exists());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("flat.dwt.json")).unwrap()).unwrap();
    assert_eq!(json["levels"], 3);

    std::fs::write(dir.path().join("bad.conf"), "levles=3\n").unwrap();
    let o = fracwave(dir.path(), &["dwt", "flat.csv", "--config", "bad.conf"]);
    assert_eq!(o.status.code(), Some(126));
}

#[test]
fn seed_override_replaces_generator_seeds() {
    let dir = tempfile::tempdir().unwrap();
    fracwave(dir.path(), &["synth", "white:n=6,seed=1", "--seed-override", "9", "-o", "a.csv"]);
    fracwave(dir.path(), &["synth", "white:n=6,seed=9", "-o", "b.csv"]);
    assert_eq!(
        std::fs::read(dir.path().join("a.csv")).unwrap(),
        std::fs::read(dir.path().join("b.csv")).unwrap()
    );
}

#[test]
fn report_groups_from_directories() {
    let dir = tempfile::tempdir().unwrap();
    let groups = dir.path().join("groups");
    for (label, h) in [("high", 0.75), ("low", 0.3)] {
        let g = groups.join(label);
        std::fs::create_dir_all(&g).unwrap();
        for seed in 0..3 {
            let spec = format!("fgn:H={h},n=13,seed={seed}");
            let out = g.join(format!("s{seed}.csv"));
            let o = fracwave(dir.path(), &["synth", &spec, "-o", out.to_str().unwrap()]);
            assert!(o.status.success());
        }
    }
    let single = groups.join("single");
    std::fs::create_dir_all(&single).unwrap();
    fracwave(dir.path(), &["synth", "white:n=13,seed=5", "-o", single.join("w.csv").to_str().unwrap()]);

    let o = fracwave(
        dir.path(),
        &["report", "groups/high", "groups/low", "groups/single", "--name", "cmp"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.starts_with("\thigh\tlow\tsingle\n"), "{stdout}");
    assert!(stdout.lines().nth(1).unwrap().ends_with(" ± 0.0000"));
    let csv = std::fs::read_to_string(dir.path().join("cmp.report.csv")).unwrap();
    assert!(csv.starts_with("# group,n,mean_h,std_h,mean_width,std_width\nhigh,3,"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cmp.report.json")).unwrap()).unwrap();
    let high = json["groups"][0]["mean_h"].as_f64().unwrap();
    let low = json["groups"][1]["mean_h"].as_f64().unwrap();
    assert!(high > low + 0.2);
    assert_eq!(json["groups"][2]["std_h"], 0.0);
}

#[test]
fn report_fgn_cohort_mean() {
    let dir = tempfile::tempdir().unwrap();
    let text: String = (0..10).map(|s| format!("A\tfgn:H=0.65,n=14,seed={s}\n")).collect();
    std::fs::write(dir.path().join("m.tsv"), text).unwrap();
    let o = fracwave(dir.path(), &["report", "m.tsv", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.report.json")).unwrap()).unwrap();
    let mean = json["groups"][0]["mean_h"].as_f64().unwrap();
    assert!((mean - 0.65).abs() <= 0.05, "{mean}");
    assert_eq!(json["groups"][0]["count"], 10);
}

#[test]
fn report_empty_group() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("nothing")).unwrap();
    let o = fracwave(dir.path(), &["report", "nothing"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("EmptyGroup"), "{}", stderr(&o));
}

#[test]
fn parallel_and_serial_runs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = ["fgn:H=0.4,n=12,seed=1", "fgn:H=0.6,n=12,seed=2", "cascade:a=0.7,n=12", "white:n=12,seed=3"];
    let mut outs = Vec::new();
    for jobs in ["1", "3"] {
        let mut args = vec!["mfdfa"];
        args.extend(inputs);
        args.extend(["--jobs", jobs, "--out-dir", jobs]);
        let o = fracwave(dir.path(), &args);
        assert!(o.status.success());
        outs.push(o.stdout);
    }
    assert_eq!(outs[0], outs[1]);
    for name in ["cascade_a-0.7_n-12.mfdfa.json", "white_n-12_seed-3.fluct.csv"] {
        assert_eq!(
            std::fs::read(dir.path().join("1").join(name)).unwrap(),
            std::fs::read(dir.path().join("3").join(name)).unwrap()
        );
    }
}
