use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qhuff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhuff")).args(args).output().expect("run qhuff")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<String> {
    stdout(o).lines().filter(|l| !l.starts_with('#')).map(str::to_owned).collect()
}

#[test]
fn table_rows() {
    let o = qhuff(&["table", "--n", "3"]);
    assert!(o.status.success());
    assert_eq!(rows(&o), ["0\t0", "1\t10", "2\t11"]);
    let o = qhuff(&["table", "--n", "6"]);
    assert_eq!(rows(&o), ["0\t00", "1\t01", "2\t100", "3\t101", "4\t110", "5\t111"]);
}

#[test]
fn table_json() {
    let o = qhuff(&["table", "--n", "2", "--json"]);
    assert_eq!(stdout(&o), "{\"n\":2,\"lower\":1,\"upper\":1,\"diff\":0,\"codes\":[\"0\",\"1\"]}\n");
    let o = qhuff(&["params", "--n", "5"]);
    assert_eq!(stdout(&o), "{\"n\":5,\"lower\":2,\"upper\":3,\"diff\":2}\n");
}

#[test]
fn table_range_errors() {
    for n in ["1", "0", "1048577"] {
        let o = qhuff(&["table", "--n", n]);
        assert_eq!(o.status.code(), Some(2));
        assert!(stderr(&o).starts_with("error[usage]: "), "{}", stderr(&o));
    }
    let o = qhuff(&["nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[usage]: "));
}

#[test]
fn deterministic_output() {
    let a = qhuff(&["table", "--n", "1000", "--json"]);
    let b = qhuff(&["table", "--n", "1000", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

fn encode(dir: &Path, mode: &str, extra: &[&str], input: &Path, name: &str) -> (Output, Vec<u8>) {
    let out = dir.join(name);
    let mut args = vec!["encode", "--mode", mode, "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = qhuff(&args);
    let bytes = fs::read(&out).unwrap_or_default();
    (o, bytes)
}

#[test]
fn encode_decode_direct_and_qstate() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("symbols.bin");
    fs::write(&input, [2u8, 3]).unwrap();

    let (o, direct) = encode(dir.path(), "direct", &["--n", "5"], &input, "d.qihc");
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("input_bytes=2\toutput_bytes=20\tsymbols=2"));
    assert_eq!(direct[19..], [0xB0]);

    let (o, qstate) = encode(dir.path(), "qstate", &["--n", "5"], &input, "q.qihc");
    assert!(o.status.success());
    assert_eq!(direct, qstate);

    for name in ["d.qihc", "q.qihc"] {
        let back = dir.path().join(format!("{name}.out"));
        let o = qhuff(&["decode", "--in", dir.path().join(name).to_str().unwrap(), "--out", back.to_str().unwrap()]);
        assert!(o.status.success());
        assert_eq!(fs::read(&back).unwrap(), [2, 3]);
    }
}

#[test]
fn encode_wide_symbols() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("symbols.bin");
    let symbols: Vec<u8> = [0u16, 999, 500, 1].iter().flat_map(|s| s.to_le_bytes()).collect();
    fs::write(&input, &symbols).unwrap();
    let (o, _) = encode(dir.path(), "direct", &["--n", "1000", "--sym-width", "2"], &input, "w.qihc");
    assert!(o.status.success(), "{}", stderr(&o));
    let back = dir.path().join("w.out");
    let o = qhuff(&["decode", "--mode", "direct", "--in", dir.path().join("w.qihc").to_str().unwrap(), "--out", back.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read(&back).unwrap(), symbols);

    let (o, _) = encode(dir.path(), "direct", &["--n", "1000", "--sym-width", "1"], &input, "bad.qihc");
    assert_eq!(o.status.code(), Some(2));
    let (o, _) = encode(dir.path(), "direct", &["--n", "900", "--sym-width", "2"], &input, "range.qihc");
    assert!(stderr(&o).starts_with("error[invalid-symbol]: "));
}

#[test]
fn tree_mode_round_trip_and_mode_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("text.txt");
    fs::write(&input, "mississippi river banks".repeat(50)).unwrap();
    let (o, _) = encode(dir.path(), "tree", &[], &input, "t.qihc");
    assert!(o.status.success());
    let container = dir.path().join("t.qihc");
    let back = dir.path().join("t.out");
    let o = qhuff(&["decode", "--in", container.to_str().unwrap(), "--out", back.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read(&back).unwrap(), fs::read(&input).unwrap());

    let o = qhuff(&["decode", "--mode", "direct", "--in", container.to_str().unwrap(), "--out", back.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[format]: "));
}

#[test]
fn decode_rejects_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qihc");
    fs::write(&bad, b"XXXX\x01\x00").unwrap();
    let o = qhuff(&["decode", "--in", bad.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[format]: bad container format: bad magic"));

    let o = qhuff(&["decode", "--in", dir.path().join("missing").to_str().unwrap(), "--out", "x"]);
    assert!(stderr(&o).starts_with("error[io]: "));
}

#[test]
fn state_listing() {
    let o = qhuff(&["state", "--n", "5"]);
    assert_eq!(
        stdout(&o),
        "n=5\tlower=2\tupper=3\tdiff=2\nregister1 8x4: (0,0) (1,1) (2,2)\nregister2 8x8: (3,6) (4,7)\n"
    );
    let o = qhuff(&["state", "--n", "4"]);
    assert_eq!(stdout(&o), "n=4\tlower=2\tupper=2\tdiff=0\nregister1 4x4: (0,0) (1,1) (2,2) (3,3)\n");
}

#[test]
fn state_dense_grids() {
    let o = qhuff(&["state", "--n", "5", "--dense"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 1 + 8 + 1 + 8);
    assert_eq!(&lines[2..10], ["1 0 0 0", "0 1 0 0", "0 0 1 0", "0 0 0 0", "0 0 0 0", "0 0 0 0", "0 0 0 0", "0 0 0 0"]);
    assert_eq!(lines[14], "0 0 0 0 0 0 1 0");
    assert_eq!(lines[15], "0 0 0 0 0 0 0 1");

    let o = qhuff(&["state", "--n", "5000", "--dense"]);
    assert!(stderr(&o).starts_with("error[too-large]: "));
}

#[test]
fn verify_command() {
    let o = qhuff(&["verify", "--max-n", "9"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("failures=0"));
    assert!(stdout(&o).contains("reference-codes"));
    let o = qhuff(&["verify", "--max-n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[usage]: "));
}

#[test]
fn bench_command_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let o = qhuff(&["bench", "--n-list", "5,16,100", "--mode", "all", "--csv", csv.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = stdout(&o);
    assert_eq!(table.lines().count(), 1 + 9);
    assert!(table.lines().any(|l| l.starts_with("100\ttree\t99\t")));
    assert!(table.lines().any(|l| l.starts_with("5\tqstate\t0\t0\t12\t5\t5\t")));
    let csv = fs::read_to_string(csv).unwrap();
    assert_eq!(csv.lines().next(), Some("n,mode,counter,value,nanos"));
    assert_eq!(csv.lines().count(), 1 + 9 * 5);

    // the table is identical across runs once the wall-time column is dropped
    let strip = |s: &str| s.lines().map(|l| l.rsplit_once('\t').unwrap().0.to_owned()).collect::<Vec<_>>();
    let again = qhuff(&["bench", "--n-list", "5,16,100"]);
    assert_eq!(strip(&table), strip(&stdout(&again)));

    let o = qhuff(&["bench", "--n-list", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn entropy_command() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("freq.txt");
    fs::write(&f, "0 0.25\n1 0.25\n2 0.2\n3 0.15\n4 0.15\n").unwrap();
    let o = qhuff(&["entropy", "--freq", f.to_str().unwrap()]);
    assert_eq!(stdout(&o), "entropy\t2.285475\nexpected_length\t2.300000\nredundancy\t0.014525\n");

    fs::write(&f, "0 7\n1 7\n").unwrap();
    let o = qhuff(&["entropy", "--freq", f.to_str().unwrap()]);
    assert_eq!(stdout(&o), "entropy\t1.000000\nexpected_length\t1.000000\nredundancy\t0.000000\n");

    fs::write(&f, (0..8).map(|s| format!("{s} 3\n")).collect::<String>()).unwrap();
    let o = qhuff(&["entropy", "--freq", f.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("entropy\t3.000000\nexpected_length\t3.000000\n"));

    fs::write(&f, "0 0\n1 0\n").unwrap();
    let o = qhuff(&["entropy", "--freq", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[invalid-distribution]: "));

    fs::write(&f, "zero one\n").unwrap();
    let o = qhuff(&["entropy", "--freq", f.to_str().unwrap()]);
    assert!(stderr(&o).starts_with("error[invalid-distribution]: "));
}
