use std::path::PathBuf;

use serde_json::Value;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Output {
    fn json(&self) -> Value {
        assert_eq!(self.code, 0, "stderr: {}", self.stderr);
        serde_json::from_str(&self.stdout).unwrap()
    }
}

fn meq(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("meq").chain(args.iter().copied());
    let code = meq::cli::run(argv, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn model(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "models", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn write_model(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

/// `[re, im]` pair.
fn pair(v: &Value) -> (f64, f64) {
    (num(&v[0]), num(&v[1]))
}

/// Checks the single machine-readable diagnostic line and returns its kind.
fn diagnostic(o: &Output, code: i32) -> String {
    assert_eq!(o.code, code, "stderr: {}", o.stderr);
    assert!(o.stdout.is_empty());
    let line = o.stderr.strip_suffix('\n').unwrap();
    assert!(!line.contains('\n'), "{line}");
    let rest = line.strip_prefix(&format!("error: code={code} kind=")).unwrap();
    let (kind, message) = rest.split_once(" message=").unwrap();
    let message: String = serde_json::from_str(message).unwrap();
    assert!(!message.is_empty());
    kind.to_string()
}

#[test]
fn qubit_decay_steady_state_is_the_ground_level() {
    for method in ["dense", "sparse", "solve"] {
        let record = meq(&["steady", &model("qubit_decay.model"), "--method", method]).json();
        assert_eq!(record["command"], "steady");
        assert_eq!(record["method"], method);
        let rho = &record["results"]["rho"];
        let expected = [[1.0, 0.0], [0.0, 0.0]];
        for i in 0..2 {
            for j in 0..2 {
                let (re, im) = pair(&rho[i][j]);
                assert!((re - expected[i][j]).abs() < 1e-12 && im.abs() < 1e-12, "{method}");
            }
        }
        assert!(num(&record["results"]["steady"]["residual"]) < 1e-12);
    }
}

#[test]
fn observables_are_expressions_in_the_model_namespace() {
    let record =
        meq(&["steady", &model("driven_qubit.model"), "--observables", "proj(q,2), sm'*sm,trans(q,1,2)"]).json();
    let obs = &record["results"]["observables"];
    // W = 2, G = 1.
    let excited = 4.0 / 9.0;
    assert!((pair(&obs["proj(q,2)"]).0 - excited).abs() < 1e-10);
    assert!((pair(&obs["sm'*sm"]).0 - excited).abs() < 1e-10);
    assert!(pair(&obs["proj(q,2)"]).1.abs() < 1e-12);
    assert!(obs.get("trans(q,1,2)").is_some());
    assert_eq!(record["method"], "dense");
}

#[test]
fn records_are_reproducible_apart_from_timings() {
    let args = ["steady", &model("jaynes_cummings.model"), "--method", "solve", "--observables", "a'*a"];
    let (a, b) = (meq(&args), meq(&args));
    let body = |s: &str| s[..s.find("\"timings\"").unwrap()].to_string();
    assert_eq!(body(&a.stdout), body(&b.stdout));
    let record = a.json();
    assert_eq!(record["model_hash"].as_str().unwrap().len(), 64);
    for stage in ["build", "solve", "measure"] {
        assert!(num(&record["timings"][stage]) >= 0.0);
    }
}

#[test]
fn spectrum_of_qubit_decay() {
    let record = meq(&["spectrum", &model("qubit_decay.model"), "-k", "4"]).json();
    let values: Vec<(f64, f64)> = record["results"]["eigenvalues"].as_array().unwrap().iter().map(pair).collect();
    for ((re, im), expected) in values.iter().zip([0.0, -1.0, -1.0, -2.0]) {
        assert!((re - expected).abs() < 1e-12 && im.abs() < 1e-12);
    }
}

#[test]
fn evolve_reports_the_decay_trajectory() {
    let record = meq(&["evolve", &model("qubit_decay.model"), "--initial", "proj(q,2)", "--times", "0,0.5,1"]).json();
    let points = record["results"]["trajectory"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    for p in points {
        let t = num(&p["t"]);
        let excited = num(&p["populations"][1]);
        assert!((excited - (-2.0 * t).exp()).abs() < 1e-10);
        assert!((pair(&p["trace"]).0 - 1.0).abs() < 1e-12);
    }
    let mixed = meq(&["evolve", &model("qubit_decay.model"), "--initial", "maximally-mixed", "--times", "0"]).json();
    assert!((num(&mixed["results"]["trajectory"][0]["populations"][0]) - 0.5).abs() < 1e-15);
}

#[test]
fn reduced_states_and_negativity() {
    let jc = model("jaynes_cummings.model");
    let record = meq(&["ptrace", &jc, "--keep", "q"]).json();
    assert_eq!(record["results"]["dims"], serde_json::json!([2]));
    let rho = &record["results"]["rho"];
    assert!((pair(&rho[0][0]).0 + pair(&rho[1][1]).0 - 1.0).abs() < 1e-12);
    let q = num(&meq(&["negativity", &jc, "--transpose", "q"]).json()["results"]["log_negativity"]);
    let c = num(&meq(&["negativity", &jc, "--transpose", "c", "--keep", "q,c"]).json()["results"]["log_negativity"]);
    assert!(q > 0.0);
    assert!((q - c).abs() < 1e-10);
}

#[test]
fn usage_errors_exit_with_code_one() {
    assert_eq!(diagnostic(&meq(&["steady", "/nonexistent/file.model"]), 1), "io");
    assert_eq!(diagnostic(&meq(&["frobnicate"]), 1), "usage");
    assert_eq!(diagnostic(&meq(&["steady", &model("qubit_decay.model"), "--method", "magic"]), 1), "usage");
    assert_eq!(diagnostic(&meq(&["evolve", &model("qubit_decay.model")]), 1), "usage");
    assert_eq!(
        diagnostic(&meq(&["steady", &model("qubit_decay.model"), "--method", "solve", "--row", "3"]), 1),
        "argument"
    );
    assert_eq!(diagnostic(&meq(&["ptrace", &model("qubit_decay.model"), "--keep", "zz"]), 1), "argument");
}

#[test]
fn model_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let syntax = write_model(&dir, "syntax.model", "spaces:\n  q = 2\nhamiltonian:\n  2*(proj(q,1)\n");
    let o = meq(&["steady", &syntax]);
    assert_eq!(diagnostic(&o, 2), "syntax");
    assert!(o.stderr.contains("4:"), "{}", o.stderr);
    let semantic = write_model(&dir, "semantic.model", "spaces:\n  q = 2\ndissipators:\n  1, trans(q,1,5)\n");
    assert_eq!(diagnostic(&meq(&["steady", &semantic]), 2), "semantic");
    let lexical = write_model(&dir, "lexical.model", "spaces:\n  q = 2 $\n");
    assert_eq!(diagnostic(&meq(&["steady", &lexical]), 2), "lexical");
    let hermitian = write_model(
        &dir,
        "nonherm.model",
        "spaces:\n  q = 2\nhamiltonian:\n  trans(q,1,2)\ndissipators:\n  1, trans(q,1,2)\n",
    );
    assert_eq!(diagnostic(&meq(&["steady", &hermitian]), 2), "validation");
    let qubit = model("qubit_decay.model");
    assert_eq!(diagnostic(&meq(&["steady", &qubit, "--observables", "nope"]), 2), "semantic");
    assert_eq!(diagnostic(&meq(&["evolve", &qubit, "--initial", "0", "--times", "1"]), 2), "validation");
}

#[test]
fn numerical_failures_exit_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let closed = write_model(&dir, "closed.model", "spaces:\n  q = 3\nhamiltonian:\n  proj(q,2)\n");
    for method in ["dense", "sparse", "solve"] {
        assert_eq!(diagnostic(&meq(&["steady", &closed, "--method", method]), 3), "degeneracy", "{method}");
    }
}

#[test]
fn help_and_version_go_to_stdout() {
    for flag in ["--help", "--version"] {
        let o = meq(&[flag]);
        assert_eq!(o.code, 0);
        assert!(!o.stdout.is_empty());
        assert!(o.stderr.is_empty());
    }
}

#[test]
fn emitted_cascade_model_round_trips_through_the_file_commands() {
    let emitted = meq(&["cascade", "--emit-model"]);
    assert_eq!(emitted.code, 0);
    assert!(emitted.stdout.contains("spaces:"));
    let dir = tempfile::tempdir().unwrap();
    let path = write_model(&dir, "cascade.model", &emitted.stdout);
    let from_file = meq(&["steady", &path, "--method", "sparse", "--observables", "s11,s22,s33,a'*a,b'*b"]).json();
    let builtin = meq(&["cascade", "--method", "sparse"]).json();
    assert_eq!(from_file["model_hash"], builtin["model_hash"]);
    let values = builtin["results"]["populations"]["values"].as_array().unwrap();
    for (name, v) in ["s11", "s22", "s33", "a'*a", "b'*b"].iter().zip(values) {
        assert!((pair(&from_file["results"]["observables"][name]).0 - num(v)).abs() < 1e-10, "{name}");
    }
}

#[test]
fn cascade_benchmark_record() {
    let record = meq(&["cascade", "--method", "sparse", "--negativity-all", "-k", "3"]).json();
    let r = &record["results"];
    assert_eq!(r["dimension"], 45);
    let values: Vec<f64> = r["populations"]["values"].as_array().unwrap().iter().map(num).collect();
    for (got, expected) in values.iter().zip([0.45882, 0.48438, 0.056796, 0.019165, 0.0012705]) {
        assert!((got - expected).abs() < 1e-4, "{got} vs {expected}");
    }
    assert!((num(&r["displaced_populations"]["popa"]) / 399.66 - 1.0).abs() < 1e-3);
    assert!((num(&r["displaced_populations"]["popb"]) / 24.961 - 1.0).abs() < 1e-3);
    assert!((num(&r["log_negativities"]["xi|ab"]) - 0.0025892).abs() < 5e-7);
    assert_eq!(r["eigenvalues"].as_array().unwrap().len(), 3);
    let solve = meq(&["cascade", "--method", "solve"]).json();
    let other: Vec<f64> = solve["results"]["populations"]["values"].as_array().unwrap().iter().map(num).collect();
    for (a, b) in values.iter().zip(&other) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn cascade_parameter_flags() {
    let record = meq(&["cascade", "--na", "1", "--nb", "1", "--omega-a", "2:1", "--delta-a", "-0.5"]).json();
    assert_eq!(record["results"]["dimension"], 12);
    let emitted = meq(&["cascade", "--na", "1", "--nb", "1", "--omega-a", "2:1", "--delta-a", "-0.5", "--emit-model"]);
    assert!(emitted.stdout.contains("a = 2"), "{}", emitted.stdout);
    assert_eq!(diagnostic(&meq(&["cascade", "--gamma-a", "0"]), 2), "validation");
    assert_eq!(diagnostic(&meq(&["cascade", "--omega-a", "x:y"]), 1), "usage");
}
