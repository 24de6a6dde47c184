use std::path::Path;
use std::process::{Command, Output};

fn rtsmicro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtsmicro")).args(args).env("RUST_LOG", "warn").output().expect("binary runs")
}

const TINY: &str = r#"
profile = "tiny"
seeds = [5, 6]
random_scenarios = 3
random_genomes = 4
plot_interval = 2

[ea]
pop_size = 6
generations = 3

[layout]
n_friends = 2
n_enemies = 3

[sim]
max_ticks = 200
"#;

fn tiny_config(dir: &Path) -> String {
    let path = dir.join("tiny.toml");
    std::fs::write(&path, TINY).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn full_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tiny_config(tmp.path());
    let out = tmp.path().join("evo");
    let out_s = out.to_str().unwrap();

    let o = rtsmicro(&["evolve", "--config", &cfg, "--out", out_s, "--trace"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for seed in [5, 6] {
        for g in 0..=3 {
            assert!(out.join(format!("run{seed}/gen{g}_front.csv")).exists());
            assert!(out.join(format!("run{seed}/gen{g}_population.csv")).exists());
        }
        assert!(out.join(format!("run{seed}/fronts.svg")).exists());
        assert!(out.join(format!("run{seed}/trace_scenario2.jsonl")).exists());
    }
    assert!(out.join("manifest.json").exists());
    assert!(out.join("combined/gen3_pareto.csv").exists());

    let o = rtsmicro(&["pareto", "--out", out_s, "--generation", "1,2"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("generation 2:"));
    assert!(out.join("combined/gen1_union.csv").exists());

    let o = rtsmicro(&["generalize", "--out", out_s]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(out.join("generalization_summary.csv")).unwrap();
    assert!(summary.starts_with("# manifest="));
    assert!(summary.contains("all,gen3,"));

    let trace = tmp.path().join("replay.jsonl");
    let o = rtsmicro(&["replay-export", "--from", out_s, "--seed", "6", "--scenario", "1", "--out", trace.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&trace).unwrap().lines().count() > 5);
}

#[test]
fn montecarlo_writes_two_rows_per_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tiny_config(tmp.path());
    let out = tmp.path().join("mc");
    let o = rtsmicro(&["montecarlo", "--config", &cfg, "--seed", "1", "--n", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("montecarlo.csv")).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 1 + 2);
    assert!(lines[2].starts_with("seed1,training,3,"));
    assert!(lines[3].starts_with("seed1,random3,3,"));
    assert!(out.join("montecarlo.svg").exists());
}

#[test]
fn replay_of_explicit_genome() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tiny_config(tmp.path());
    let trace = tmp.path().join("t.jsonl");
    let bits = "0".repeat(226);
    let o = rtsmicro(&["replay-export", "--config", &cfg, "--genome", &bits, "--out", trace.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn failures_exit_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("nothing");
    assert!(!rtsmicro(&["generalize", "--out", missing.to_str().unwrap()]).status.success());
    assert!(!rtsmicro(&["evolve", "--profile", "huge", "--out", missing.to_str().unwrap()]).status.success());
    assert!(!rtsmicro(&["replay-export", "--genome", "0101", "--out", missing.to_str().unwrap()]).status.success());

    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "profile = \"x\"\nseeds = []\nrandom_scenarios = 1\nrandom_genomes = 1\nplot_interval = 1\n").unwrap();
    assert!(!rtsmicro(&["evolve", "--config", bad.to_str().unwrap(), "--out", missing.to_str().unwrap()]).status.success());
}
