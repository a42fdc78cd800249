use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn invcrypt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invcrypt"))
        .args(args)
        .output()
        .expect("spawn invcrypt")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn keygen(dir: &TempDir, extra: &[&str], seed: &str, stem: &str) -> (String, String) {
    let (pk, sk) = (path(dir, &format!("{stem}.pub")), path(dir, &format!("{stem}.sec")));
    let mut args = vec!["keygen"];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["--seed", seed, "--pub", &pk, "--sec", &sk]);
    ok(&invcrypt(&args));
    (pk, sk)
}

#[test]
fn pipeline_roundtrips_every_scheme() {
    let dir = TempDir::new().unwrap();
    let configs: [&[&str]; 4] = [
        &["--scheme", "ex1", "--n", "3", "--p", "13", "--m", "4"],
        &["--scheme", "ex2", "--n", "2", "--p", "7"],
        &["--scheme", "ex3", "--n", "2", "--p", "7"],
        &[
            "--scheme",
            "ex3",
            "--n",
            "2",
            "--p",
            "7",
            "--partitions",
            "1,2;3,4;1,3;2,4",
        ],
    ];
    for (i, cfg) in configs.iter().enumerate() {
        let (pk, sk) = keygen(&dir, cfg, &i.to_string(), &format!("k{i}"));
        let ct = path(&dir, &format!("c{i}"));
        ok(&invcrypt(&[
            "encrypt",
            "--pub",
            &pk,
            "--msg",
            "1100101",
            "--wordlen",
            "5",
            "--seed",
            "9",
            "--out",
            &ct,
        ]));
        assert_eq!(ok(&invcrypt(&["decrypt", "--sec", &sk, "--ct", &ct])).trim(), "1100101");
    }
}

#[test]
fn message_file_and_explicit_vectors() {
    let dir = TempDir::new().unwrap();
    let (pk, sk) = keygen(
        &dir,
        &[
            "--scheme", "ex1", "--n", "2", "--p", "5", "--m", "2", "--v0", "1,0", "--v1", "1,1",
        ],
        "4",
        "k",
    );
    let msg = path(&dir, "msg.txt");
    std::fs::write(&msg, "0110\n").unwrap();
    let ct = path(&dir, "c");
    ok(&invcrypt(&[
        "encrypt",
        "--pub",
        &pk,
        "--msg-file",
        &msg,
        "--seed",
        "1",
        "--out",
        &ct,
    ]));
    assert_eq!(ok(&invcrypt(&["decrypt", "--sec", &sk, "--ct", &ct])).trim(), "0110");
    let public = std::fs::read_to_string(&pk).unwrap();
    assert!(public.contains("\"v0\""));
}

#[test]
fn same_seed_is_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let cfg = ["--scheme", "ex2", "--n", "3", "--p", "5"];
    let (pa, sa) = keygen(&a, &cfg, "42", "k");
    let (pb, sb) = keygen(&b, &cfg, "42", "k");
    let read = |p: &str| std::fs::read(Path::new(p)).unwrap();
    assert_eq!(read(&pa), read(&pb));
    assert_eq!(read(&sa), read(&sb));
    let (ca, cb) = (path(&a, "c"), path(&b, "c"));
    ok(&invcrypt(&[
        "encrypt", "--pub", &pa, "--msg", "101", "--seed", "5", "--out", &ca,
    ]));
    ok(&invcrypt(&[
        "encrypt", "--pub", &pb, "--msg", "101", "--seed", "5", "--out", &cb,
    ]));
    assert_eq!(read(&ca), read(&cb));
}

#[test]
fn mismatched_scheme_exits_2() {
    let dir = TempDir::new().unwrap();
    let (pk, _) = keygen(&dir, &["--scheme", "ex1", "--n", "2", "--p", "5", "--m", "2"], "1", "a");
    let (_, sk) = keygen(&dir, &["--scheme", "ex2", "--n", "2", "--p", "5"], "1", "b");
    let ct = path(&dir, "c");
    ok(&invcrypt(&[
        "encrypt", "--pub", &pk, "--msg", "1", "--seed", "1", "--out", &ct,
    ]));
    let out = invcrypt(&["decrypt", "--sec", &sk, "--ct", &ct]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn corrupted_key_exits_2() {
    let dir = TempDir::new().unwrap();
    let (pk, _) = keygen(&dir, &["--scheme", "ex1", "--n", "2", "--p", "5", "--m", "2"], "1", "a");
    let text = std::fs::read_to_string(&pk)
        .unwrap()
        .replace("\"p\": \"5\"", "\"p\": \"9\"");
    std::fs::write(&pk, text).unwrap();
    let out = invcrypt(&[
        "encrypt",
        "--pub",
        &pk,
        "--msg",
        "1",
        "--seed",
        "1",
        "--out",
        &path(&dir, "c"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn attacks_recover_plaintext() {
    let dir = TempDir::new().unwrap();
    let (pk, _) = keygen(&dir, &["--scheme", "ex1", "--n", "2", "--p", "5", "--m", "2"], "7", "k");
    let ct = path(&dir, "c");
    ok(&invcrypt(&[
        "encrypt",
        "--pub",
        &pk,
        "--msg",
        "10011",
        "--wordlen",
        "3",
        "--seed",
        "2",
        "--out",
        &ct,
    ]));
    let bits = ok(&invcrypt(&[
        "attack-invariant",
        "--pub",
        &pk,
        "--ct",
        &ct,
        "--degree",
        "2",
    ]));
    assert_eq!(bits.trim(), "10011");
    let found = ok(&invcrypt(&[
        "attack-transporter",
        "--pub",
        &pk,
        "--ct",
        &ct,
        "--maxlen",
        "3",
    ]));
    assert_eq!(found.lines().next(), Some("10011"));
}

#[test]
fn conjugation_attack_reports_decrypting_matrices() {
    let dir = TempDir::new().unwrap();
    let (pk, _) = keygen(&dir, &["--scheme", "ex1", "--n", "2", "--p", "3", "--m", "2"], "1", "k");
    let out = ok(&invcrypt(&["attack-conjugation", "--pub", &pk, "--degree", "2"]));
    let mut lines = out.lines();
    let count: usize = lines
        .next()
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(count >= 1);
    assert!(lines.any(|l| l.ends_with(" decrypts")));
    let wrong = invcrypt(&["attack-conjugation", "--pub", &pk, "--degree", "3"]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn gm_pipeline() {
    let dir = TempDir::new().unwrap();
    let (pk, sk, ct) = (path(&dir, "p"), path(&dir, "s"), path(&dir, "c"));
    ok(&invcrypt(&[
        "gm-keygen",
        "--p",
        "1000003",
        "--q",
        "1000033",
        "--seed",
        "3",
        "--pub",
        &pk,
        "--sec",
        &sk,
    ]));
    ok(&invcrypt(&[
        "gm-encrypt",
        "--pub",
        &pk,
        "--msg",
        "0111010",
        "--seed",
        "8",
        "--out",
        &ct,
    ]));
    assert_eq!(
        ok(&invcrypt(&["gm-decrypt", "--sec", &sk, "--ct", &ct])).trim(),
        "0111010"
    );
    let bad = invcrypt(&[
        "gm-keygen",
        "--p",
        "3",
        "--q",
        "3",
        "--seed",
        "3",
        "--pub",
        &pk,
        "--sec",
        &sk,
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(invcrypt(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(invcrypt(&["keygen", "--scheme", "ex9"]).status.code(), Some(1));
    assert_eq!(
        invcrypt(&["encrypt", "--pub", "x", "--seed", "1", "--out", "y"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(invcrypt(&["--help"]).status.code(), Some(0));
    let dir = TempDir::new().unwrap();
    let (pk, _) = keygen(&dir, &["--scheme", "ex1", "--n", "2", "--p", "5", "--m", "2"], "1", "k");
    let out = invcrypt(&[
        "encrypt",
        "--pub",
        &pk,
        "--msg",
        "10a",
        "--seed",
        "1",
        "--out",
        &path(&dir, "c"),
    ]);
    assert_eq!(out.status.code(), Some(1));
}
