//! End-to-end CLI runs: exit codes, machine output and config layering.

use std::path::Path;
use std::process::Command;

use hecke_core::cli::{self, EXIT_CORRUPT, EXIT_FAILURE, EXIT_NOT_COMPUTED, EXIT_OK, EXIT_USAGE};
use hecke_core::congruence::CongruenceRecord;
use hecke_core::store::entities::{EigenformRecord, Entity, OrbitRecord};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let lookup = |k: &str| env.iter().find(|(n, _)| *n == k).map(|(_, v)| v.to_string());
    let argv = std::iter::once("hecke").chain(args.iter().copied());
    let code = cli::run(argv, &lookup, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn run(args: &[&str]) -> Run {
    run_env(args, &[])
}

/// Split concatenated records at their header lines.
fn records(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for line in text.lines() {
        if line.ends_with(" v1") && !line.contains(':') {
            out.push(String::new());
        }
        let cur = out.last_mut().expect("output starts with a header");
        cur.push_str(line);
        cur.push('\n');
    }
    out
}

fn level11_store(dir: &Path) -> String {
    let hmat = dir.join("l11.hmat");
    let store = dir.join("store");
    let s = store.to_str().unwrap().to_string();
    assert_eq!(run(&["gen-level11", "--out", hmat.to_str().unwrap()]).code, EXIT_OK);
    let r = run(&["--store", &s, "--machine", "ingest", hmat.to_str().unwrap()]);
    assert_eq!((r.code, r.out.trim()), (EXIT_OK, "11.2.1"), "{}", r.err);
    s
}

#[test]
fn pipeline_with_machine_output() {
    let dir = tempfile::tempdir().unwrap();
    let s = level11_store(dir.path());

    let r = run(&["--store", &s, "--ell", "5", "--machine", "decompose", "11.2.1"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let recs = records(&r.out);
    assert_eq!(recs.len(), 2);
    let orbit = OrbitRecord::parse(&recs[0], "stdout").unwrap();
    assert_eq!((orbit.rank, orbit.basis_indices.clone()), (1, vec![1]));
    assert_eq!(orbit.to_text(), recs[0]);
    let eigf = EigenformRecord::parse(&recs[1], "stdout").unwrap();
    assert_eq!(eigf.key.to_string(), "11.2.1/5/1/1");

    // The stored records are what decompose printed.
    let r2 = run(&["--store", &s, "--ell", "5", "--machine", "orbits", "11.2.1"]);
    assert_eq!((r2.code, r2.out.clone()), (EXIT_OK, r.out));

    let w = run(&["--store", &s, "--ell", "5", "--machine", "witnesses", "11.2.1/5/1/1"]);
    assert_eq!(w.code, EXIT_OK, "{}", w.err);
    assert!(w.out.starts_with("WITNESSES v1\n"));
    assert!(w.out.contains("witness.2: + exact 1 e=1"), "{}", w.out);

    let q = run(&["--store", &s, "--ell", "5", "query", "q1", "11.2.1"]);
    assert_eq!(q.code, EXIT_OK);
    assert!(q.out.contains("11.2.1/5/1/1"));

    let v = run(&["--store", &s, "validate"]);
    assert_eq!(v.code, EXIT_OK, "{}", v.out);
}

#[test]
fn congruence_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let s = level11_store(dir.path());
    for ell in ["3", "5"] {
        assert_eq!(run(&["--store", &s, "--ell", ell, "decompose", "11.2.1"]).code, EXIT_OK);
    }
    // One eigenform against its own orbit: the at-least sentinel.
    let r = run(&["--store", &s, "--ell", "5", "--machine", "congruence", "11.2.1/5/1/1", "11.2.1/5/1"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let rec = CongruenceRecord::parse(&r.out, "stdout").unwrap();
    assert!(!rec.congruence.exponent.is_exact());

    // Strong congruence across different l is rejected as invalid input.
    let r = run(&["--store", &s, "--ell", "5", "congruence", "11.2.1/5/1/1", "11.2.1/3/1/1"]);
    assert_eq!(r.code, EXIT_USAGE, "{}", r.err);

    // A single eigenform at l has no pairs; the sweep is trivially complete.
    let r = run(&["--store", &s, "--ell", "5", "--workers", "2", "sweep"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nothing");
    let m = missing.to_str().unwrap();
    assert_eq!(run(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run(&["--store", m, "--ell", "6", "orbits", "11.2.1"]).code, EXIT_USAGE);
    assert_eq!(run(&["--store", m, "--ell", "5", "orbits", "11.2"]).code, EXIT_USAGE);
    assert_eq!(run(&["--store", m, "--ell", "5", "orbits", "11.2.1"]).code, EXIT_NOT_COMPUTED);
    assert_eq!(run(&["--store", m, "--precision", "0", "validate"]).code, EXIT_USAGE);

    let s = level11_store(dir.path());
    // Decomposed at 5 only.
    assert_eq!(run(&["--store", &s, "--ell", "5", "decompose", "11.2.1"]).code, EXIT_OK);
    assert_eq!(run(&["--store", &s, "--ell", "7", "orbits", "11.2.1"]).code, EXIT_NOT_COMPUTED);
    // Witness scan beyond the stored bound.
    let r = run(&["--store", &s, "--ell", "5", "--primes", "2..200", "witnesses", "11.2.1"]);
    assert_eq!(r.code, EXIT_USAGE, "{}", r.err);
    // m above the precision.
    let r = run(&["--store", &s, "--ell", "5", "witnesses", "11.2.1", "--m", "9"]);
    assert_eq!(r.code, EXIT_FAILURE, "{}", r.err);

    // Tampering is reported by validate.
    let orbit = Path::new(&s).join("spaces/11.2/1/l5/orbit.1.txt");
    let text = std::fs::read_to_string(&orbit).unwrap().replace("rank: 1", "rank: 2");
    std::fs::write(&orbit, text).unwrap();
    let v = run(&["--store", &s, "validate"]);
    assert_eq!(v.code, EXIT_CORRUPT, "{}", v.out);
    assert!(v.out.contains("orbit.1.txt"), "{}", v.out);
}

#[test]
fn configuration_layers() {
    let dir = tempfile::tempdir().unwrap();
    let s = level11_store(dir.path());
    // Store and l from the environment.
    let env = [("HECKE_STORE", s.as_str()), ("HECKE_ELL", "5")];
    assert_eq!(run_env(&["decompose", "11.2.1"], &env).code, EXIT_OK);
    // A flag beats the environment.
    let r = run_env(&["--ell", "3", "orbits", "11.2.1"], &env);
    assert_eq!(r.code, EXIT_NOT_COMPUTED);
    // The file is the lowest layer.
    let cfg = dir.path().join("hecke.toml");
    std::fs::write(&cfg, format!("store = {:?}\nell = 5\nprecision = 2\n", s)).unwrap();
    let c = cfg.to_str().unwrap();
    let r = run(&["--config", c, "--machine", "orbits", "11.2.1"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let r = run_env(&["--machine", "orbits", "11.2.1"], &[("HECKE_CONFIG", c)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    std::fs::write(&cfg, "colour = 3\n").unwrap();
    assert_eq!(run(&["--config", c, "validate"]).code, EXIT_USAGE);
    assert_eq!(run_env(&["validate"], &[("HECKE_WORKERS", "lots")]).code, EXIT_USAGE);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_hecke");
    let dir = tempfile::tempdir().unwrap();
    let status = |args: &[&str]| {
        Command::new(bin).args(args).env_remove("HECKE_STORE").env("RUST_LOG", "off").output().unwrap().status.code()
    };
    assert_eq!(status(&["--version"]), Some(EXIT_OK));
    let store = dir.path().join("s");
    let st = store.to_str().unwrap();
    assert_eq!(status(&["--store", st, "--ell", "5", "orbits", "11.2.1"]), Some(EXIT_NOT_COMPUTED));
    assert_eq!(status(&["--store", st, "init"]), Some(EXIT_OK));
    assert_eq!(status(&["--store", st, "validate"]), Some(EXIT_OK));
    assert_eq!(status(&["--store", st, "query"]), Some(EXIT_USAGE));
}
