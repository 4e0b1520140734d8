use std::path::Path;
use std::process::{Command, Output};

fn qtcodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtcodes"))
        .args(args)
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn factor_and_partition() {
    let o = qtcodes(&["factor", "--m", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x^7 - 1 over GF(2)\n11 ^1\n1011 ^1\n1101 ^1\ndivisors 8\n");
    let o = qtcodes(&["partition", "--m", "7", "--k", "4"]);
    assert_eq!(stdout(&o), "k=4 rep=1011 members=1011,1101\n");
}

#[test]
fn mindist_of_a_golden_row() {
    let o = qtcodes(&["mindist", "--row", "[39,24,6]_2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n=39 k=24"));
    assert!(stdout(&o).contains("d=6 "));
}

#[test]
fn exit_codes() {
    let o = qtcodes(&["mindist", "--row", "[105,40,22]_2", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(qtcodes(&["factor", "--m", "7", "--field", "6"]).status.code(), Some(2));
    assert_eq!(qtcodes(&["mindist", "--m", "3", "--g", "12", "--f1", "1"]).status.code(), Some(2));
    assert_eq!(qtcodes(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn spec_from_flags() {
    let o = qtcodes(&[
        "props", "--field", "3", "--m", "4", "--g", "11", "--f1", "1,11", "--f2", "0,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("n=8 k=6"), "{out}");
    assert!(out.contains("lcd=true"), "{out}");
    let o = qtcodes(&["extend", "--field", "3", "--m", "4", "--g", "11", "--f1", "1,11", "--f2", "0,1"]);
    assert!(stdout(&o).starts_with("n=9 k=6\n"));
}

#[test]
fn verify_tables_reports_failures() {
    let o = qtcodes(&["verify-tables", "--skip-distance"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("63 passed, 0 failed, 1 quarantined"));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("golden.txt");
    std::fs::write(
        &file,
        "p1_lcd | [39,24,7]_2 | 1 | g=11 | 010010111011,011000110001,111011011011 | 0,010101110011,0001011001 | lcd\n",
    )
    .unwrap();
    let o = qtcodes(&["verify-tables", "--file", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL [39,24,7]_2"));
}

fn write_config(dir: &Path) -> String {
    let path = dir.join("config.json");
    std::fs::write(
        &path,
        r#"{"q": 3, "m_values": [4, 5], "ell_values": [2], "shift_constants": [1, 2],
            "form": "two_gen_p1", "f_sampling": {"kind": "random", "trials": 5},
            "emit_untargeted": true, "batch_size": 2, "timestamp": "2024-01-01"}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn search_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let l1 = dir.path().join("a.jsonl");
    let l2 = dir.path().join("b.jsonl");
    let o1 = qtcodes(&["search", "--config", &cfg, "--seed", "5", "--threads", "1", "--ledger", l1.to_str().unwrap()]);
    let o2 = qtcodes(&["search", "--config", &cfg, "--seed", "5", "--threads", "2", "--ledger", l2.to_str().unwrap()]);
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(stdout(&o1), stdout(&o2));
    let b1 = std::fs::read(&l1).unwrap();
    assert!(!b1.is_empty());
    assert_eq!(b1, std::fs::read(&l2).unwrap());
    let o3 = qtcodes(&["search", "--config", &cfg, "--seed", "5"]);
    assert_eq!(stdout(&o3).lines().filter(|l| l.starts_with('{')).count(), b1.split(|&b| b == b'\n').filter(|l| !l.is_empty()).count());
}

#[test]
fn classify_parameters_and_ledgers() {
    let dir = tempfile::tempdir().unwrap();
    let targets = dir.path().join("t.csv");
    std::fs::write(&targets, "q,n,k,d_best\n2,111,38,24\n2,39,24,6\n").unwrap();
    let t = targets.to_str().unwrap();
    let o = qtcodes(&["classify", "--targets", t, "--n", "111", "--k", "38", "--d", "25"]);
    assert_eq!(stdout(&o), "[111,38,25]_2 record_breaking\n");
    let o = qtcodes(&["classify", "--targets", t, "--n", "39", "--k", "24", "--d", "6"]);
    assert_eq!(stdout(&o), "[39,24,6]_2 ties_bklc\n");
    let o = qtcodes(&["classify", "--targets", t, "--n", "40", "--k", "24", "--d", "6"]);
    assert_eq!(stdout(&o), "[40,24,6]_2 unknown_target\n");
    std::fs::write(&targets, "q,n,k\n").unwrap();
    let o = qtcodes(&["classify", "--targets", t, "--n", "40", "--k", "24", "--d", "6"]);
    assert_eq!(o.status.code(), Some(2));
}
