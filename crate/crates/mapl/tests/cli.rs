use std::fs;
use std::process::Command;

use mapl::cli::{parse_args, Command as Plan, Residues};
use mapl::output::Format;
use mapl_core::multisum::Theorem;

fn mapl() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mapl"));
    c.env_remove("MAPL_CACHE");
    c
}

fn stdout_of(args: &[&str]) -> (i32, String, String) {
    let out = mapl().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verify_plan_from_flags() {
    let plan = parse_args([
        "verify", "--theorem", "1.4", "--n", "2", "--moduli", "4,4", "--residues", "1,3", "--grid", "1e5:1e8:decade",
    ])
    .unwrap();
    let Plan::Verify(v) = plan.command else { panic!("not a verify plan") };
    assert_eq!(v.theorem, Theorem::Thm14);
    assert_eq!(v.n, 2);
    assert_eq!(v.grid, vec![100_000, 1_000_000, 10_000_000, 100_000_000]);
    let pairs: Vec<(u64, u64)> = v.spec.pairs().iter().map(|p| (p.h, p.m)).collect();
    assert_eq!(pairs, vec![(1, 4), (3, 4)]);
    assert_eq!(plan.format, Format::Csv);
}

#[test]
fn coprimality_is_checked() {
    let err = parse_args(["verify", "--moduli", "4", "--residues", "2"]).unwrap_err();
    assert_eq!(err.to_string(), "residue 2 not coprime to modulus 4");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn coeffs_plan() {
    let plan = parse_args(["coeffs", "--kmax", "20"]).unwrap();
    assert_eq!(plan.command, Plan::Coeffs { k_max: 20 });
    assert!(parse_args(["coeffs", "--kmax", "31"]).is_err());
}

#[test]
fn usage_errors() {
    for bad in [
        vec!["verify", "--frobnicate"],
        vec!["verify", "--grid", "1e8:1e5:decade"],
        vec!["verify", "--n", "5"],
        vec!["verify", "--theorem", "1.3", "--n", "4"],
        vec!["verify", "--moduli", "3,4", "--residues", "1"],
        vec!["verify", "--theorem", "1.4", "--k", "2"],
        vec!["constants", "--modulus", "6", "--residues", "3"],
        vec!["sieve", "--limit", "1"],
        vec!["launch"],
    ] {
        let err = parse_args(bad.clone()).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{bad:?}");
    }
}

#[test]
fn constants_plan() {
    let plan = parse_args(["constants", "--modulus", "8", "--all-residues", "--x-ref", "1e6"]).unwrap();
    assert_eq!(
        plan.command,
        Plan::Constants {
            modulus: 8,
            residues: Residues::All,
            x_ref: Some(1_000_000)
        }
    );
}

#[test]
fn coeffs_output() {
    let (code, out, _) = stdout_of(&["coeffs", "--kmax", "4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,a_recurrence,a_gamma,a_bell,max_pairwise_diff");
    assert_eq!(lines.len(), 6);
    let a2: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(a2[0], "2");
    assert!(a2[4].parse::<f64>().unwrap() <= 1e-10);
    assert!((a2[1].parse::<f64>().unwrap() + std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
}

#[test]
fn verify_rows_and_exit_code() {
    let (code, out, err) = stdout_of(&["verify", "--theorem", "1.1", "--moduli", "3", "--residues", "1", "--grid", "1e5:1e8:decade"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "theorem,n,k,moduli,residues,x,empirical,predicted,residual,scaled_residual");
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("1.1,1,0,3,1,100000000,"));
    assert!(err.contains("trend test passed"));
}

#[test]
fn failing_trend_exits_one() {
    let (code, _, err) = stdout_of(&["verify", "--theorem", "1.1", "--grid", "1e5:1e6:decade", "--bound", "1e-9"]);
    assert_eq!(code, 1);
    assert!(err.contains("FAILED"));
}

#[test]
fn usage_error_exits_two() {
    let (code, out, err) = stdout_of(&["verify", "--moduli", "4", "--residues", "2"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("residue 2 not coprime to modulus 4"));
    assert_eq!(stdout_of(&["--help"]).0, 0);
}

#[test]
fn json_mirror_has_same_fields() {
    let (code, out, _) = stdout_of(&["verify", "--theorem", "1.4", "--n", "2", "--grid", "1e4:1e5:decade", "--output", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["theorem", "n", "k", "moduli", "residues", "x", "empirical", "predicted", "residual", "scaled_residual"]
    );
    assert_eq!(rows[1]["moduli"], "1,1");
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("primes.mapl");
    let env_cache = dir.path().join("env.mapl");
    let args = ["verify", "--theorem", "1.4", "--n", "3", "--grid", "1e4:2e6:decade:3"];
    let (_, plain, _) = stdout_of(&args);
    let with_cache = |extra: &[&str]| {
        let mut all: Vec<&str> = args.to_vec();
        all.extend_from_slice(extra);
        stdout_of(&all).1
    };
    let cache_arg = cache.to_str().unwrap();
    assert_eq!(with_cache(&["--cache", cache_arg]), plain);
    assert!(cache.exists());
    let written = fs::read(&cache).unwrap();
    assert_eq!(&written[..5], b"MAPL1");
    assert_eq!(u64::from_le_bytes(written[5..13].try_into().unwrap()), 2_000_000);
    assert_eq!(with_cache(&["--cache", cache_arg]), plain);
    assert_eq!(fs::read(&cache).unwrap(), written);

    let out = mapl()
        .args(args)
        .args(["--cache", cache_arg])
        .env("MAPL_CACHE", &env_cache)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), plain);
    assert!(env_cache.exists());

    fs::write(&cache, b"MAPL1 garbage").unwrap();
    assert_eq!(with_cache(&["--cache", cache_arg]), plain);
}

#[test]
fn byte_identical_across_threads_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let base = ["verify", "--theorem", "1.3", "--n", "2", "--k", "2", "--grid", "1e3:1e6:decade:2"];
    let run = |path: &std::path::Path, threads: &str| {
        let status = mapl()
            .args(base)
            .args(["--threads", threads, "--out", path.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.code().is_some());
    };
    run(&a, "1");
    run(&b, "4");
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(fs::read_to_string(&a).unwrap().starts_with("theorem,n,k,"));
}

#[test]
fn sieve_and_constants() {
    let (code, out, _) = stdout_of(&["sieve", "--limit", "1e6", "--grid", "10:1e6:decade"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,prime_count,recip_sum,log_recip_sum");
    assert!(lines[1].starts_with("10,4,1.1761904761904"));
    assert!(lines[6].starts_with("1000000,78498,"));

    let (code, out, _) = stdout_of(&["constants", "--modulus", "4", "--all-residues", "--x-ref", "1e6"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "m,h,value,uncertainty,x_ref");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("4,1,") && lines[2].starts_with("4,3,"));
}

#[test]
fn identities_report() {
    let (code, out, err) = stdout_of(&["identities", "--trials", "300"]);
    assert_eq!(out.lines().next().unwrap(), "identity,trials,max_error,tolerance,pass");
    assert_eq!(out.lines().count(), 1 + 13);
    assert!(err.contains("tau_shift translation"));
    let failing: Vec<&str> = out.lines().filter(|l| l.ends_with(",false")).collect();
    assert_eq!(failing.len(), 2, "{out}");
    assert_eq!(code, 1);
}
