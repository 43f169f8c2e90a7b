use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn latcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latcount"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = latcount(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn data(name: &str) -> String {
    format!("{}/../core/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(latcount(&[]).status.code(), Some(2));
    assert_eq!(
        latcount(&["generate", "--family", "boolean", "--max-n", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(latcount(&["bounds"]).status.code(), Some(2));
}

#[test]
fn workers_give_the_same_listing() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.d6"), dir.path().join("b.d6"));
    ok(&[
        "generate",
        "--family",
        "modular",
        "--max-n",
        "15",
        "--out",
        s(&a),
    ]);
    ok(&[
        "generate",
        "--family",
        "modular",
        "--max-n",
        "15",
        "--workers",
        "3",
        "--checkpoint-depth",
        "4",
        "--out",
        s(&b),
    ]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        fs::read_to_string(dir.path().join("a.d6.manifest")).unwrap(),
        fs::read_to_string(dir.path().join("b.d6.manifest")).unwrap()
    );
}

#[test]
fn saved_states_cover_the_search() {
    let dir = tempfile::tempdir().unwrap();
    let states = dir.path().join("states");
    let whole = ok(&[
        "generate",
        "--family",
        "distributive",
        "--max-n",
        "18",
        "--mode",
        "all",
    ]);
    ok(&[
        "generate",
        "--family",
        "distributive",
        "--max-n",
        "18",
        "--mode",
        "all",
        "--checkpoint-depth",
        "5",
        "--save-states",
        s(&states),
    ]);
    let mut lines = Vec::new();
    for e in fs::read_dir(&states).unwrap() {
        let p = e.unwrap().path();
        let part = ok(&[
            "generate",
            "--family",
            "distributive",
            "--max-n",
            "18",
            "--mode",
            "all",
            "--resume",
            s(&p),
        ]);
        lines.extend(part.lines().map(String::from));
    }
    lines.sort();
    assert_eq!(lines, whole.lines().collect::<Vec<_>>());
    let out = latcount(&[
        "generate",
        "--family",
        "modular",
        "--max-n",
        "18",
        "--mode",
        "all",
        "--resume",
        s(&fs::read_dir(&states)
            .unwrap()
            .next()
            .unwrap()
            .unwrap()
            .path()),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tampered_listing_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let l = dir.path().join("l.d6");
    ok(&[
        "generate",
        "--family",
        "distributive",
        "--max-n",
        "16",
        "--out",
        s(&l),
    ]);
    let mut text = fs::read_to_string(&l).unwrap();
    let cut = text.find('\n').unwrap() + 1;
    text.replace_range(..cut, "");
    fs::write(&l, text).unwrap();
    assert_eq!(
        latcount(&["classify", "--in", s(&l)]).status.code(),
        Some(1)
    );
}

#[test]
fn duality_detects_deleted_record() {
    let dir = tempfile::tempdir().unwrap();
    let l = dir.path().join("l.d6");
    ok(&[
        "generate",
        "--family",
        "modular",
        "--max-n",
        "12",
        "--out",
        s(&l),
    ]);
    assert!(ok(&["verify", "duality", "--in", s(&l)]).starts_with("PASS"));
    // dropping a record whose dual partner is another record breaks parity
    let text = fs::read_to_string(&l).unwrap();
    let kept: Vec<&str> = text.lines().collect();
    let mut failures = 0;
    for skip in 0..kept.len() {
        let t: String = kept
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, r)| format!("{r}\n"))
            .collect();
        fs::write(&l, t).unwrap();
        if latcount(&["verify", "duality", "--in", s(&l)])
            .status
            .code()
            == Some(1)
        {
            failures += 1;
        }
    }
    assert!(failures > 0);
}

#[test]
fn count_reproduces_reference_rows() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.csv");
    ok(&["count", "--pieces", &data("modular.csv"), "--out", s(&t)]);
    ok(&[
        "verify",
        "tables",
        "--table",
        s(&t),
        "--expected",
        &data("modular.csv"),
    ]);
    let table = fs::read_to_string(&t).unwrap();
    assert!(table
        .lines()
        .any(|l| l.starts_with("20,") && l.ends_with(",88622,601991")));
    // a corrupted expectation fails with exit 1
    let bad = dir.path().join("bad.csv");
    fs::write(
        &bad,
        fs::read_to_string(data("modular.csv"))
            .unwrap()
            .replace(",88622,", ",88623,"),
    )
    .unwrap();
    let out = latcount(&["verify", "tables", "--table", s(&t), "--expected", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("n=20 vi"));
}

#[test]
fn count_needs_every_piece_cell() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.csv");
    ok(&[
        "count",
        "--pieces",
        &data("distributive.csv"),
        "--max-n",
        "30",
        "--out",
        s(&p),
    ]);
    let out = latcount(&["count", "--pieces", s(&p), "--max-n", "40"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ratios_of_distributive_table() {
    let out = ok(&["ratios", "--table", &data("distributive.csv")]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,ratio_vi,ratio_vi_excl_compositions"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 59);
    for r in &rows {
        let cells: Vec<&str> = r.split(',').collect();
        assert_eq!(cells.len(), 3);
        for c in &cells[1..] {
            assert!(
                c.is_empty() || c.split('.').nth(1).map(str::len) == Some(6),
                "{r}"
            );
        }
    }
}

#[test]
fn bounds_exit_codes() {
    let out = ok(&["bounds", "--cert", &data("distributive_cert.toml")]);
    assert!(out.ends_with("PASS\n"));
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.toml");
    let text = fs::read_to_string(data("distributive_cert.toml"))
        .unwrap()
        .replace("1.7250", "1.9");
    fs::write(&c, text).unwrap();
    assert_eq!(
        latcount(&["bounds", "--cert", s(&c)]).status.code(),
        Some(1)
    );
    assert_eq!(
        latcount(&["bounds", "--steiner", "99"]).status.code(),
        Some(1)
    );
    assert!(ok(&["bounds", "--steiner", "100"]).contains("order 21"));
}
