use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const FH_4_CYCLE: &str = "model fermi_hubbard
modes 4
hop 1 2 1
hop 2 3 1
hop 3 4 1
hop 1 4 1
nn 1 2 2
nn 2 3 2
nn 3 4 2
nn 1 4 2
";

const HOP_4_CYCLE: &str = "model hopping
modes 4
hop 1 2 1
hop 2 3 1
hop 3 4 1
hop 1 4 1
";

fn auxferm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_auxferm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_model(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn encode_four_cycle_summary_and_files() {
    let dir = TempDir::new().unwrap();
    let model = write_model(&dir, "fh.txt", FH_4_CYCLE);
    let out = dir.path().join("out");
    let o = auxferm(&["encode", "--model", &model, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert!(first.starts_with("chi=2 nu=1 max_w_hop=4"), "{first}");
    assert!(read(&out, "summary.txt").starts_with("chi=2 nu=1 max_w_hop=4"));
    let dump = read(&out, "encoded.txt");
    // two strings per hop, four per density pair
    assert_eq!(dump.lines().count(), 4 * 2 + 4 * 4);
    assert!(dump.lines().all(|l| l.starts_with("layer ")));
    assert_eq!(read(&out, "audit.txt").lines().count(), 9);
}

#[test]
fn empty_model_gives_empty_dump() {
    let dir = TempDir::new().unwrap();
    let model = write_model(&dir, "empty.txt", "# nothing\n");
    let out = dir.path().join("out");
    let o = auxferm(&["encode", "--model", &model, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read(&out, "encoded.txt"), "");
}

#[test]
fn exit_codes_partition_failures() {
    let dir = TempDir::new().unwrap();
    let bad = write_model(&dir, "bad.txt", "model hopping\nmodes 4\nhop 1 2 1\nhop 1 x 1\n");
    let o = auxferm(&["encode", "--model", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    let missing = dir.path().join("missing.txt");
    assert_eq!(auxferm(&["encode", "--model", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(auxferm(&["encode", "--gen", "fh:N=8"]).status.code(), Some(2));
    let fh = write_model(&dir, "fh.txt", FH_4_CYCLE);
    assert_eq!(auxferm(&["encode", "--model", &fh, "--gen", "fh:N=4,d=2"]).status.code(), Some(2));
    assert_eq!(auxferm(&["encode"]).status.code(), Some(2));

    assert_eq!(auxferm(&["encode", "--gen", "fh:N=5,d=3"]).status.code(), Some(3));

    let o = auxferm(&["verify", "--gen", "fh:N=8,d=3,seed=1"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(auxferm(&["verify", "--model", &fh, "--cap-qubits", "6"]).status.code(), Some(4));
    assert_eq!(auxferm(&["verify", "--model", &fh, "--cap-qubits", "40"]).status.code(), Some(2));
    assert_eq!(auxferm(&["verify", "--model", &fh, "--corrupt-sign", "1,3"]).status.code(), Some(2));
}

#[test]
fn verify_hopping_cycle_passes() {
    let dir = TempDir::new().unwrap();
    let model = write_model(&dir, "hop.txt", HOP_4_CYCLE);
    let out = dir.path().join("out");
    let o = auxferm(&["verify", "--model", &model, "--steps", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with("CHECK ")).collect();
    assert!(checks.len() >= 7, "{text}");
    assert!(checks.iter().all(|l| l.ends_with(" PASS")));
    assert!(text.ends_with("RESULT PASS\n"));
    assert_eq!(read(&out, "report.txt"), text);
    assert_eq!(read(&out, "per_term.csv").lines().count(), 5);
    assert_eq!(read(&out, "trotter_error.csv").lines().count(), 6);
}

#[test]
fn verify_detects_corrupted_sign() {
    let dir = TempDir::new().unwrap();
    let model = write_model(&dir, "fh.txt", FH_4_CYCLE);
    let o = auxferm(&["verify", "--model", &model, "--corrupt-sign", "1,2"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("CHECK full_fidelity") && l.ends_with("FAIL")));
    assert!(text.ends_with("RESULT FAIL\n"));
}

#[test]
fn verify_with_zero_steps_passes() {
    let dir = TempDir::new().unwrap();
    let model = write_model(&dir, "fh.txt", FH_4_CYCLE);
    let o = auxferm(&["verify", "--model", &model, "--steps", "0", "--tau", "0.7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("CHECK full_fidelity 1 "));
}

#[test]
fn simulate_tracks_the_physical_evolution() {
    let dir = TempDir::new().unwrap();
    let model = write_model(&dir, "fh.txt", FH_4_CYCLE);
    let o = auxferm(&["simulate", "--model", &model, "--steps", "4", "--tau", "0.3", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,time,fidelity,min_stabilizer,energy"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert!(r[2] >= 1.0 - 1e-10 && r[3] >= 1.0 - 1e-8, "{r:?}");
    }
}

#[test]
fn depth_table_rows() {
    let dir = TempDir::new().unwrap();
    let model = write_model(&dir, "fh.txt", FH_4_CYCLE);
    let o = auxferm(&["depth", "--model", &model, "--steps", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for row in [
        "Introducing auxiliary fermions",
        "Ordered state preparation",
        "Fermion permutation (with measurement)",
        "Fermion permutation (without measurement)",
        "One-color Trotter layer",
        "Full Trotter layer",
    ] {
        assert!(text.contains(row), "{row}");
    }
    let last = text.lines().last().unwrap();
    let field = |k: &str| -> usize {
        last.split(' ')
            .find_map(|kv| kv.strip_prefix(k))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(field("total_depth="), field("prep_depth=") + 10 * field("per_step_depth="));
}

#[test]
fn sweep_per_step_depth_is_constant() {
    let o = auxferm(&["sweep", "--gen", "fh:N=8,d=3,seed=7", "--sizes", "64,8,32,16", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<usize>> = text
        .lines()
        .skip(1)
        .take_while(|l| !l.is_empty())
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), [8, 16, 32, 64]);
    assert!(rows.iter().all(|r| r[3] == rows[0][3]));
    assert!(rows.iter().all(|r| r[6] == r[2] + r[5] * r[3]));
    assert!(text.contains(&format!("fit per_step_depth constant={}\n", rows[0][3])));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let model = write_model(&dir, "fh.txt", FH_4_CYCLE);
    let runs: Vec<Vec<String>> = [vec!["verify", "--model", &model, "--seed", "5"],
        vec!["simulate", "--model", &model, "--seed", "5"],
        vec!["sweep", "--gen", "syk:N=16,d=2,seed=3", "--sizes", "8,12,16"]]
        .iter()
        .map(|args| {
            (0..2)
                .map(|k| {
                    let out = dir.path().join(format!("{}_{k}", args[0]));
                    let mut a = args.clone();
                    a.extend(["--out", out.to_str().unwrap()]);
                    let o = auxferm(&a);
                    let mut files: Vec<_> = fs::read_dir(&out)
                        .unwrap()
                        .map(|e| e.unwrap().path())
                        .collect();
                    files.sort();
                    let mut all = stdout(&o);
                    for f in files {
                        all += &fs::read_to_string(f).unwrap();
                    }
                    all
                })
                .collect()
        })
        .collect();
    for r in &runs {
        assert_eq!(r[0], r[1]);
    }
}
