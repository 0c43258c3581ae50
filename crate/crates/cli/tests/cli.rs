use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, SQRT_2};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bellmatch_cli::record::RunRecordFile;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bellmatch"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn kv(o: &Output) -> HashMap<String, String> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn num(map: &HashMap<String, String>, key: &str) -> f64 {
    map.get(key)
        .unwrap_or_else(|| panic!("missing {key}"))
        .parse()
        .unwrap()
}

fn p(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn generate(dir: &TempDir, name: &str, theta_a: f64, theta_b: f64, n: usize, seed: u64) -> PathBuf {
    let out = p(dir, name);
    let o = run(&[
        "generate",
        "--theta-a",
        &theta_a.to_string(),
        "--theta-b",
        &theta_b.to_string(),
        "--n",
        &n.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn read_record(path: &Path) -> RunRecordFile {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_equal_angles_writes_opposite_pairs() {
    let dir = TempDir::new().unwrap();
    let path = generate(&dir, "run.json", 0.0, 0.0, 5, 11);
    let rec = read_record(&path);
    assert_eq!(rec.n, 5);
    assert_eq!(rec.seed, Some(11));
    assert!(rec.pairs.iter().all(|(a, b)| a.value() == -b.value()));
}

#[test]
fn generate_is_byte_identical_for_same_seed() {
    let dir = TempDir::new().unwrap();
    let first = generate(&dir, "one.json", 1.0, 0.2, 1_000, 77);
    let second = generate(&dir, "two.json", 1.0, 0.2, 1_000, 77);
    assert_eq!(fs::read(first).unwrap(), fs::read(second).unwrap());
}

#[test]
fn generate_summary_tracks_singlet_correlation() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "run.json");
    let o = run(&[
        "generate",
        "--theta-a",
        &FRAC_PI_3.to_string(),
        "--theta-b",
        "0",
        "--n",
        "100000",
        "--seed",
        "5",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0);
    let m = kv(&o);
    assert!((num(&m, "corr_ab") + 0.5).abs() < 0.013);
    assert!((num(&m, "fraction_positive_b") - 0.5).abs() < 0.01);

    // the summary is reproduced from the file that was written
    let run = read_record(&out).into_run().unwrap();
    let mut again = Vec::new();
    bellmatch_cli::commands::write_run_summary(&mut again, &run).unwrap();
    assert_eq!(
        String::from_utf8(again).unwrap(),
        String::from_utf8(o.stdout).unwrap()
    );
}

#[test]
fn generate_accepts_degrees() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "run.json");
    let o = run(&[
        "generate",
        "--degrees",
        "--theta-a",
        "60",
        "--theta-b",
        "-45",
        "--n",
        "3",
        "--seed",
        "1",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0);
    let rec = read_record(&out);
    assert_eq!(rec.theta_a, 60f64.to_radians());
    assert_eq!(rec.theta_b, (-45f64).to_radians());
}

#[test]
fn generate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let unwritable = dir.path().join("missing").join("run.json");
    let o = run(&[
        "generate",
        "--theta-a",
        "0",
        "--theta-b",
        "0",
        "--n",
        "3",
        "--seed",
        "1",
        "--out",
        s(&unwritable),
    ]);
    assert_eq!(code(&o), 3);

    let o = run(&[
        "generate",
        "--theta-a",
        "0",
        "--theta-b",
        "0",
        "--n",
        "0",
        "--seed",
        "1",
        "--out",
        s(&p(&dir, "x.json")),
    ]);
    assert_eq!(code(&o), 2);

    let o = run(&["generate", "--theta-a", "0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn match3_equality_case() {
    let dir = TempDir::new().unwrap();
    let ab = generate(&dir, "ab.json", 0.0, 0.0, 10_000, 1);
    let apb = generate(&dir, "apb.json", PI, 0.0, 10_000, 2);
    let out = p(&dir, "m.json");
    let o = run(&["match3", s(&ab), s(&apb), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = kv(&o);
    assert!(num(&m, "bell3_lhs_value") <= 1.0);
    assert_eq!(m["bell3_holds"], "true");
    assert_eq!(num(&m, "theory_lhs_matched"), 1.0);
    assert_eq!(num(&m, "theory_lhs_unmatched_stationary"), 2.0);
    // deterministic conditionals: A = -B and A' = B on every matched position
    assert_eq!(num(&m, "corr_aap"), -1.0);

    let file: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(file["kind"], "matched-triple");
    let matched = file["report"]["matched"].as_u64().unwrap() as usize;
    assert_eq!(file["a"].as_array().unwrap().len(), matched);
    assert_eq!(
        file["report"]["permutation"].as_array().unwrap().len(),
        matched
    );
}

#[test]
fn match3_trims_shorter_candidate() {
    let dir = TempDir::new().unwrap();
    let ab = generate(&dir, "ab.json", 0.3, 0.0, 500, 1);
    let apb = generate(&dir, "apb.json", 1.3, 0.0, 200, 2);
    let o = run(&["match3", s(&ab), s(&apb), "--out", s(&p(&dir, "m.json"))]);
    assert_eq!(code(&o), 0);
    let m = kv(&o);
    assert!(num(&m, "dropped_reference") > 0.0);
    assert_eq!(num(&m, "matched") + num(&m, "dropped_reference"), 500.0);
}

#[test]
fn match3_identical_files() {
    let dir = TempDir::new().unwrap();
    let ab = generate(&dir, "ab.json", 0.6, 0.6, 800, 4);
    let o = run(&["match3", s(&ab), s(&ab), "--out", s(&p(&dir, "m.json"))]);
    assert_eq!(code(&o), 0);
    assert_eq!(num(&kv(&o), "corr_aap"), 1.0);
}

#[test]
fn match3_error_codes() {
    let dir = TempDir::new().unwrap();
    let ab = generate(&dir, "ab.json", 0.0, 0.0, 50, 1);
    let other_b = generate(&dir, "apb.json", 1.0, 0.5, 50, 2);
    let o = run(&[
        "match3",
        s(&ab),
        s(&other_b),
        "--out",
        s(&p(&dir, "m.json")),
    ]);
    assert_eq!(code(&o), 2);

    let broken = p(&dir, "broken.json");
    fs::write(&broken, "{\"format_version\":1,\"theta_a\":0,").unwrap();
    let o = run(&["match3", s(&ab), s(&broken), "--out", s(&p(&dir, "m.json"))]);
    assert_eq!(code(&o), 3);

    let zero = p(&dir, "zero.json");
    fs::write(
        &zero,
        r#"{"format_version":1,"theta_a":0,"theta_b":0,"n":1,"pairs":[[0,1]]}"#,
    )
    .unwrap();
    let o = run(&["match3", s(&ab), s(&zero), "--out", s(&p(&dir, "m.json"))]);
    assert_eq!(code(&o), 3);

    let o = run(&[
        "match3",
        s(&ab),
        s(&p(&dir, "absent.json")),
        "--out",
        s(&p(&dir, "m.json")),
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn match4_chsh_settings() {
    let dir = TempDir::new().unwrap();
    let n = 10_000;
    let ab = generate(&dir, "ab.json", 0.0, FRAC_PI_4, n, 1);
    let apb = generate(&dir, "apb.json", FRAC_PI_2, FRAC_PI_4, n, 2);
    let abp = generate(&dir, "abp.json", 0.0, -FRAC_PI_4, n, 3);
    let out = p(&dir, "q.json");
    let o = run(&["match4", s(&ab), s(&apb), s(&abp), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = kv(&o);
    assert!((num(&m, "corr_apbp") + SQRT_2 / 4.0).abs() < 0.06);
    assert!(num(&m, "chsh4_lhs_value") <= 2.0);
    assert_eq!(m["chsh4_holds"], "true");
    assert!((num(&m, "theory_lhs_unmatched_stationary") - 2.0 * SQRT_2).abs() < 1e-12);

    let file: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(file["kind"], "matched-quad");
    assert_eq!(file["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn match4_equal_angles_and_mismatch() {
    let dir = TempDir::new().unwrap();
    let ab = generate(&dir, "ab.json", 0.5, 0.5, 2_000, 1);
    let apb = generate(&dir, "apb.json", 0.5, 0.5, 2_000, 2);
    let abp = generate(&dir, "abp.json", 0.5, 0.5, 2_000, 3);
    let o = run(&[
        "match4",
        s(&ab),
        s(&apb),
        s(&abp),
        "--out",
        s(&p(&dir, "q.json")),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(num(&kv(&o), "corr_apbp"), -1.0);

    let wrong_a = generate(&dir, "wrong.json", 0.7, 0.5, 2_000, 4);
    let o = run(&[
        "match4",
        s(&ab),
        s(&apb),
        s(&wrong_a),
        "--out",
        s(&p(&dir, "q.json")),
    ]);
    assert_eq!(code(&o), 2);
}

fn read_csv(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

#[test]
fn scan_fig2_default_grid() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "fig2.csv");
    let o = run(&["scan", "fig2", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let (header, rows) = read_csv(&out);
    assert_eq!(
        header,
        "alpha,alpha_prime,beta,n,empirical,theoretical,abs_error"
    );
    assert_eq!(rows.len(), 289);
    let summary = String::from_utf8(o.stdout).unwrap();
    let rms: f64 = summary
        .split_whitespace()
        .find_map(|t| t.strip_prefix("rms_error="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(rms < 0.02, "{summary}");
}

#[test]
fn scan_fig2_golden_row() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "fig2.csv");
    let o = run(&[
        "scan",
        "fig2",
        "--alpha-steps",
        "2",
        "--alpha-prime-steps",
        "3",
        "--n",
        "100",
        "--seed",
        "7",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(
        lines[0],
        "alpha,alpha_prime,beta,n,empirical,theoretical,abs_error"
    );
    assert_eq!(lines[2], GOLDEN_ROW);
    // the pinned row is a (0, π/2) cell whose theoretical value is ~0
    let fields: Vec<f64> = lines[2].split(',').map(|v| v.parse().unwrap()).collect();
    assert!(fields[5].abs() < 1e-15 && fields[6] < 0.4);
}

const GOLDEN_ROW: &str = "0,1.57079633,0,100,-0.00606060606,6.123234e-17,0.00606060606";

#[test]
fn scan_bell3_unmatched_violates_at_zero_pi() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "bell3.csv");
    let o = run(&["scan", "bell3", "--mode", "unmatched", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let (header, rows) = read_csv(&out);
    assert_eq!(header, "theta_a,theta_ap,theta_b,mode,lhs,bound,violated");
    assert_eq!(rows.len(), 121 * 121);
    let hit = rows
        .iter()
        .find(|r| r[0] == "0" && r[1] == "3.14159265")
        .unwrap();
    assert_eq!(hit[3], "unmatched-stationary");
    assert_eq!(hit[4], "2");
    assert_eq!(hit[6], "true");
}

#[test]
fn scan_chsh4_matched_has_no_violations() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "chsh4.csv");
    let o = run(&[
        "scan",
        "chsh4",
        "--mode",
        "matched",
        "--theta-b-start",
        "-90",
        "--theta-b-stop",
        "90",
        "--theta-b-steps",
        "61",
        "--theta-bp-start",
        "-90",
        "--theta-bp-stop",
        "90",
        "--theta-bp-steps",
        "61",
        "--degrees",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(
        header,
        "theta_a,theta_ap,theta_b,theta_bp,mode,lhs,bound,violated"
    );
    assert_eq!(rows.len(), 121 * 61 * 61);
    assert!(rows.iter().all(|r| r[7] == "false" && r[4] == "matched"));
}

#[test]
fn scan_rejects_invalid_grid() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "x.csv");
    let o = run(&["scan", "bell3", "--alpha-steps", "1", "--out", s(&out)]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
    let o = run(&[
        "scan",
        "fig2",
        "--alpha-start",
        "2",
        "--alpha-stop",
        "1",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn scan_csv_independent_of_thread_count() {
    let dir = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = p(&dir, &format!("fig2-{threads}.csv"));
        let o = bin()
            .env("RAYON_NUM_THREADS", threads)
            .args([
                "scan",
                "fig2",
                "--n",
                "500",
                "--source",
                "matched",
                "--out",
                s(&out),
            ])
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        outputs.push(fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

fn write_list(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = p(dir, name);
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn check_hand_example() {
    let dir = TempDir::new().unwrap();
    let a = write_list(&dir, "a.txt", "1 1\n");
    let b = write_list(&dir, "b.txt", "+1, -1");
    let bp = write_list(&dir, "bp.json", "[-1, -1]");
    let o = run(&["check", s(&a), s(&b), s(&bp)]);
    assert_eq!(code(&o), 0);
    let m = kv(&o);
    assert_eq!(m["lhs"], "1");
    assert_eq!(m["rhs"], "1");
    assert_eq!(m["holds"], "true");
}

#[test]
fn check_four_identical_lists() {
    let dir = TempDir::new().unwrap();
    let x = write_list(&dir, "x.txt", "1 -1 -1 1 1");
    let o = run(&["check", s(&x), s(&x), s(&x), s(&x)]);
    assert_eq!(code(&o), 0);
    let m = kv(&o);
    assert_eq!(m["lhs"], "2");
    assert_eq!(m["holds"], "true");
}

#[test]
fn check_random_lists_hold() {
    let dir = TempDir::new().unwrap();
    let mut stream = bellmatch::Seed(99).stream();
    let paths: Vec<PathBuf> = (0..4)
        .map(|k| {
            let body: Vec<&str> = (0..1_000)
                .map(|_| if stream.uniform() < 0.5 { "1" } else { "-1" })
                .collect();
            write_list(&dir, &format!("r{k}.txt"), &body.join("\n"))
        })
        .collect();
    let o = run(&["check", s(&paths[0]), s(&paths[1]), s(&paths[2])]);
    assert_eq!(code(&o), 0);
    assert_eq!(kv(&o)["holds"], "true");
    let o = run(&[
        "check",
        s(&paths[0]),
        s(&paths[1]),
        s(&paths[2]),
        s(&paths[3]),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(kv(&o)["holds"], "true");
}

#[test]
fn check_input_errors() {
    let dir = TempDir::new().unwrap();
    let two = write_list(&dir, "two.txt", "1 -1");
    let three = write_list(&dir, "three.txt", "1 -1 1");
    let zero = write_list(&dir, "zero.txt", "1 0");
    let junk = write_list(&dir, "junk.txt", "1 up");
    assert_eq!(code(&run(&["check", s(&two), s(&two), s(&three)])), 2);
    assert_eq!(code(&run(&["check", s(&two), s(&two), s(&zero)])), 2);
    assert_eq!(code(&run(&["check", s(&two), s(&two), s(&junk)])), 3);
    assert_eq!(code(&run(&["check", s(&two), s(&two)])), 2);
}
