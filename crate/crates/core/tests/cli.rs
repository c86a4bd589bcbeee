use std::path::PathBuf;

use nodal_bn::cli::run;
use nodal_bn::curve::NodalCurve;

const TWO: &str = "\
# genus 2 and genus 3 meeting once
component 1 genus 2
component 2 genus 3
node 1 1 2
";

const EXAMPLE_SHEAF: &str = "\
component 1 genus 4
component 2 genus 3
node 1 1 2
sheaf
rank 2 2
chi -10
stalk 1 1 1 1
sheaf
rank 2 2
chi -6
degrees 1 1
";

fn fixture(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nodal-bn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn exec(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nodal-bn").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn bn_number_example() {
    let (code, out, _) = exec(&["bn", "number", "--pa", "5", "--r", "3", "--d", "2", "--k", "1"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "beta: 26"), "{out}");
}

#[test]
fn canonical_polarization_example() {
    let f = fixture("two.crv", TWO);
    let (code, out, _) = exec(&["polarization", "canonical", "--curve", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "eta: 3/8,5/8"), "{out}");
    assert!(out.lines().any(|l| l == "goodness_proxy: pass"));
}

#[test]
fn polarization_check_failure_exits_one() {
    let f = fixture("two-check.crv", TWO);
    let (code, out, _) = exec(&["polarization", "check", "--curve", f.to_str().unwrap(), "--omega", "1/4,3/4"]);
    assert_eq!(code, 1);
    assert!(out.contains("goodness_proxy: fail"));
}

#[test]
fn enumerate_small_slope_example() {
    let f = fixture("two-enum.crv", TWO);
    let path = f.to_str().unwrap();
    let (code, out, _) = exec(&[
        "components", "enumerate", "--curve", path, "--rank", "2", "--degree", "2", "--omega", "canonical",
        "--small-slope",
    ]);
    assert_eq!(code, 0);
    let table: Vec<&str> = out.split("#table components\n").nth(1).unwrap().lines().skip(1).collect();
    assert_eq!(table.len(), 1, "{out}");
    assert!(table[0].starts_with("1,1\t"));
    assert!(table[0].ends_with("\tstable\t1/8"));

    let (_, full, _) = exec(&["components", "enumerate", "--curve", path, "--rank", "2", "--degree", "2"]);
    assert!(full.contains("count: 2\n"));
}

#[test]
fn components_check_and_radius() {
    let f = fixture("two-check2.crv", TWO);
    let path = f.to_str().unwrap();
    let (code, out, _) = exec(&["components", "check", "--curve", path, "--rank", "2", "--tuple", "1,1"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: stable"));
    let (code, out, _) = exec(&["components", "check", "--curve", path, "--rank", "2", "--tuple", "2,0"]);
    assert_eq!(code, 1);
    assert!(out.contains("verdict: unstable"));
    let (code, out, _) = exec(&["components", "radius", "--curve", path, "--rank", "2", "--tuple", "1,1"]);
    assert_eq!(code, 0);
    assert!(out.contains("guaranteed_radius: 1/8\n"));
    assert!(out.contains("witness_breaks: true\n"));
    let (code, _, _) = exec(&["components", "invariance", "--curve", path, "--rank", "2", "--degree", "2"]);
    assert_eq!(code, 0);
}

#[test]
fn certify_pipeline() {
    let f = fixture("two-cert.crv", TWO);
    let path = f.to_str().unwrap();
    let (code, out, _) = exec(&["bn", "certify", "--curve", path, "--s", "2", "--k", "1", "--d", "2"]);
    assert_eq!(code, 0, "{out}");
    for line in ["status: certified", "r: 3", "beta: 26", "dim_X: 17", "h1_dual: 10", "fiber_dim: 9", "identity: pass"] {
        assert!(out.lines().any(|l| l == line), "missing {line}\n{out}");
    }
    let (code, out, _) = exec(&["bn", "certify", "--curve", path, "--s", "2", "--k", "4", "--d", "2"]);
    assert_eq!(code, 1);
    assert!(out.contains("failure: k_bound_1: k = 4 <= 1 + s(g_1 - 1) = 3"));
}

#[test]
fn order_and_classify() {
    let f = fixture("chain3.crv", "component 1 genus 2\ncomponent 2 genus 2\ncomponent 3 genus 2\nnode 1 1 2\nnode 2 2 3\n");
    let path = f.to_str().unwrap();
    let (code, out, _) = exec(&["order", "--curve", path, "--root", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("order: 1,3,2\n"));
    assert!(out.contains("#table decomposition\nj\tA_j\tp_j\n1\t1\t1\n2\t3\t2\n"));
    let (_, out, _) = exec(&["curve", "classify", "--curve", path]);
    assert!(out.contains("shape: chain_and_comb\n"), "{out}");
}

#[test]
fn sheaf_info_from_curve_file() {
    let f = fixture("ex.crv", EXAMPLE_SHEAF);
    let (code, out, err) = exec(&["sheaf", "info", "--curve", f.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("sheaf: 1\nmultirank: 2,2\nchi: -10\nlocally_free: false\nwrank: 2\nwdeg: 2\nslope: 1\n"));
    assert!(out.contains("locally_free: true"));
    assert!(out.contains("#table ext_defect\nE\tF\tdefect\n1\t1\t2\n1\t2\t0\n2\t1\t0\n2\t2\t0\n"));
}

#[test]
fn validate_echo_round_trips() {
    let f = fixture("echo.crv", TWO);
    let (code, echoed, _) = exec(&["curve", "validate", "--curve", f.to_str().unwrap(), "--echo"]);
    assert_eq!(code, 0);
    let original: NodalCurve = TWO.parse().unwrap();
    assert_eq!(echoed.parse::<NodalCurve>().unwrap(), original);
    let again = fixture("echo2.crv", &echoed);
    let (_, twice, _) = exec(&["curve", "validate", "--curve", again.to_str().unwrap(), "--echo"]);
    assert_eq!(twice, echoed);
}

#[test]
fn input_errors_exit_two() {
    let bad = fixture("bad.crv", "component 1 genus 1\n");
    let (code, _, err) = exec(&["curve", "validate", "--curve", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");
    let (code, _, _) = exec(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, _) = exec(&["bn", "number", "--pa", "1", "--r", "3", "--d", "2", "--k", "1"]);
    assert_eq!(code, 2);
    let (code, out, _) = exec(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
}

#[test]
fn reports_are_deterministic() {
    let f = fixture("det.crv", TWO);
    let path = f.to_str().unwrap();
    let args = ["components", "enumerate", "--curve", path, "--rank", "4", "--degree", "5"];
    assert_eq!(exec(&args), exec(&args));
    let scan = ["bn", "scan", "--family", "comb", "--gamma-max", "3", "--genus-max", "3", "--s-max", "6"];
    let first = exec(&scan);
    assert_eq!(first.0, 0);
    assert!(first.1.contains("open: 0\n"));
    for _ in 0..3 {
        assert_eq!(exec(&scan), first);
    }
}
