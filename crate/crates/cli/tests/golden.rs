use std::path::PathBuf;
use std::process::{Command, Output};

use qpe_core::channel::channel_qpe_leq;
use qpe_core::io::{ChannelDocument, MatrixDocument};
use qpe_core::{qpe_leq, Relation, ToleranceConfig};
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn qpe(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qpe"));
    cmd.env_remove("QPE_DEFAULT_TOL");
    cmd.args(args.iter().map(|a| if a.ends_with(".json") { fixture(a) } else { a.to_string() }));
    cmd.output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    qpe(args).status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = qpe(args);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn close(v: &Value, expected: f64, tol: f64) -> bool {
    (v.as_f64().unwrap() - expected).abs() < tol
}

const STATES: [&str; 10] = [
    "pair1_x.json",
    "pair1_y.json",
    "pair2_x.json",
    "pair2_y.json",
    "bottom3.json",
    "pure3.json",
    "qubit_plus_i.json",
    "qubit_mixed.json",
    "qubit_depolarized.json",
    "rank_deficient.json",
];

const INVALID: [&str; 4] = ["non_hermitian.json", "bad_trace.json", "ragged.json", "missing.json"];

#[test]
fn order_exit_codes_match_library() {
    let cfg = ToleranceConfig::default();
    let load = |name: &str| {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        MatrixDocument::parse(&text).unwrap().to_state(&cfg).unwrap()
    };
    for a in STATES {
        for b in STATES {
            let expected = match qpe_leq(&load(a), &load(b), &cfg) {
                Ok(v) => match v.relation {
                    Relation::Holds => 0,
                    Relation::Fails => 1,
                    Relation::Marginal => 3,
                },
                Err(_) => 2,
            };
            assert_eq!(code(&["order", "check", "--relation", "qpe", a, b]), expected, "{a} vs {b}");
        }
    }
}

#[test]
fn channel_exit_codes_match_library() {
    let cfg = ToleranceConfig::default();
    let channels = [
        "channel_identity.json",
        "channel_bottom.json",
        "channel_amplitude_damping.json",
        "channel_not_tp.json",
    ];
    let load = |name: &str| {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        ChannelDocument::parse(&text).and_then(|d| d.to_channel(&cfg))
    };
    for a in channels {
        for b in channels {
            let expected = match (load(a), load(b)) {
                (Ok(x), Ok(y)) => match channel_qpe_leq(&x, &y, &cfg) {
                    Ok(v) if v.holds() => 0,
                    Ok(v) if v.fails() => 1,
                    _ => 3,
                },
                _ => 2,
            };
            assert_eq!(code(&["channel", "order", a, b]), expected, "{a} vs {b}");
        }
    }
}

#[test]
fn invalid_inputs_exit_2() {
    for bad in INVALID {
        assert_eq!(code(&["order", "check", bad, "qubit_mixed.json"]), 2, "{bad}");
        assert_eq!(code(&["entropy", bad]), 2, "{bad}");
    }
    assert_eq!(code(&["bayes", "update", "pair1_x.json", "effect_too_large.json"]), 2);
    assert_eq!(code(&["bayes", "update", "effect_agree.json", "effect_agree.json"]), 2);
    assert_eq!(code(&["channel", "order", "channel_not_tp.json", "channel_identity.json"]), 2);
    assert_eq!(code(&["divergence", "--alpha", "-1", "pair1_x.json", "pair1_y.json"]), 2);
    assert_eq!(code(&["--tol", "-1", "order", "check", "pair1_x.json", "pair1_y.json"]), 2);
    assert_eq!(code(&["order", "frobnicate"]), 2);
    assert_eq!(code(&["order", "check", "pair1_x.json", "qubit_mixed.json"]), 2);
}

#[test]
fn stored_pairs() {
    assert_eq!(code(&["order", "check", "pair1_x.json", "pair1_y.json"]), 0);
    assert_eq!(code(&["order", "check", "pair1_y.json", "pair1_x.json"]), 1);
    assert_eq!(code(&["order", "check", "--relation", "majorization", "pair1_x.json", "pair1_y.json"]), 1);
    assert_eq!(code(&["order", "check", "--relation", "majorization", "pair1_y.json", "pair1_x.json"]), 1);
    assert_eq!(code(&["order", "check", "--relation", "classical", "pair2_x.json", "pair2_y.json"]), 0);
    assert_eq!(code(&["order", "check", "--relation", "majorization", "bottom3.json", "pair1_y.json"]), 0);
    let report = json(&["order", "check", "pair1_x.json", "pair1_y.json"]);
    assert_eq!(report["verdict"], "holds");
    assert!(report["witness"].is_null());
    let report = json(&["order", "check", "pair1_y.json", "pair1_x.json"]);
    assert_eq!(report["verdict"], "fails");
    assert_eq!(report["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn divergences_and_entropies() {
    let d = json(&["divergence", "--alpha", "inf", "pair1_y.json", "pair1_x.json"]);
    assert!(close(&d["value"], (0.7f64 / 0.46).ln(), 1e-12));
    assert_eq!(d["alpha"], "inf");

    let d = json(&["--log-base", "2", "divergence", "pure3.json", "rank_deficient.json"]);
    assert!(close(&d["value"], 1.0, 1e-12));
    let d = json(&["divergence", "rank_deficient.json", "pure3.json"]);
    assert_eq!(d["value"], "inf");
    assert_eq!(d["support_violation"], true);

    let h = json(&["entropy", "bottom3.json"]);
    assert!(close(&h["value"], 3f64.ln(), 1e-12));
    let h = json(&["--log-base", "2", "entropy", "--alpha", "inf", "qubit_mixed.json"]);
    assert!(close(&h["value"], -(0.75f64).log2(), 1e-12));
    assert_eq!(h["base"], "2");
}

#[test]
fn bayes_commands() {
    let post = json(&["bayes", "update", "pair1_x.json", "effect_agree.json"]);
    let doc: MatrixDocument = serde_json::from_value(post).unwrap();
    let p = doc.to_probability_vector().unwrap();
    for (a, b) in p.as_slice().iter().zip([0.46 / 0.96, 0.46 / 0.96, 0.04 / 0.96]) {
        assert!((a - b).abs() < 1e-12);
    }
    assert_eq!(code(&["bayes", "update", "--rule", "seq", "pair1_x.json", "effect_disagree.json"]), 0);
    assert_eq!(code(&["bayes", "effect", "pair1_x.json", "pair1_y.json"]), 0);
    assert_eq!(code(&["bayes", "effect", "pair1_y.json", "pair1_x.json"]), 1);

    let e = json(&["bayes", "effect", "pair1_x.json", "pair1_y.json"]);
    let e: MatrixDocument = serde_json::from_value(e).unwrap();
    let e = e.to_effect(&ToleranceConfig::default()).unwrap();
    let m = e.matrix().as_matrix();
    let ratios = [0.7 / 0.46, 0.2 / 0.46, 0.1 / 0.08];
    let top = ratios.iter().cloned().fold(0.0, f64::max);
    for (i, r) in ratios.iter().enumerate() {
        assert!((m[(i, i)].re - r / top).abs() < 1e-12);
    }
}

#[test]
fn way_below_verdicts() {
    let v = json(&["domain", "waybelow", "qubit_depolarized.json", "qubit_mixed.json"]);
    assert_eq!(v["verdict"], "certified_below");
    assert!(close(&v["witness"]["t"], 0.5, 1e-9));
    assert!(close(&v["witness"]["lambda"], 2.0, 1e-9));
    assert_eq!(code(&["domain", "waybelow", "rank_deficient.json", "rank_deficient.json"]), 1);
    assert_eq!(code(&["domain", "waybelow", "qubit_mixed.json", "qubit_depolarized.json"]), 1);
    assert_eq!(code(&["domain", "waybelow", "pair1_x.json", "pair1_y.json"]), 3);
    assert_eq!(code(&["domain", "waybelow", "bottom3.json", "pure3.json"]), 0);
}

#[test]
fn channel_commands() {
    assert_eq!(code(&["channel", "order", "channel_bottom.json", "channel_amplitude_damping.json"]), 0);
    assert_eq!(code(&["channel", "order", "channel_identity.json", "channel_amplitude_damping.json"]), 1);
    assert_eq!(code(&["channel", "order", "channel_amplitude_damping.json", "channel_amplitude_damping.json"]), 0);
    let d = json(&["channel", "divergence", "channel_identity.json", "channel_bottom.json"]);
    assert!(close(&d["value"], 4f64.ln(), 1e-12));
    let f = json(&["channel", "fidelity", "channel_identity.json"]);
    assert!(close(&f["value"], 1.0, 1e-12));
    let input: MatrixDocument = serde_json::from_value(f["optimal_input"].clone()).unwrap();
    assert_eq!(input.bipartite(), Some((2, 2)));
}

#[test]
fn tolerance_flag_and_environment() {
    // min eigenvalue of ρ − ¾|+i⟩⟨+i| is 1/8 − sqrt(13)/8
    let args = ["order", "check", "qubit_mixed.json", "qubit_plus_i.json"];
    assert_eq!(code(&args), 1);
    let with_env = |tol: &str| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_qpe"));
        cmd.env("QPE_DEFAULT_TOL", tol);
        cmd.args(args.iter().map(|a| if a.ends_with(".json") { fixture(a) } else { a.to_string() }));
        cmd.output().unwrap().status.code().unwrap()
    };
    assert_eq!(with_env("1.0"), 0);
    assert_eq!(with_env("0.05"), 3);
    assert_eq!(code(&["--tol", "0.05", "order", "check", "qubit_mixed.json", "qubit_plus_i.json"]), 3);
    let report = json(&args);
    assert!(close(&report["slack"], (1.0 - 13f64.sqrt()) / 8.0, 1e-12));
}

#[test]
fn demos() {
    let r = json(&["demo", "counterexamples"]);
    assert_eq!(r["majorization"]["qpe"], "holds");
    assert_eq!(r["entropy"]["entropy_increases"], true);
    assert_eq!(code(&["demo", "counterexamples"]), 0);

    let r = json(&["demo", "partial-trace", "--dim", "2", "--t", "0.5", "--seed", "7"]);
    assert_eq!(r["certified"], true);
    assert_eq!(code(&["demo", "partial-trace", "--dim", "3", "--t", "0.99", "--seed", "1"]), 0);
    assert_eq!(code(&["demo", "partial-trace", "--dim", "2", "--t", "0.2"]), 2);

    assert_eq!(code(&["demo", "sequential-transitivity", "--dim", "2", "--budget", "200"]), 3);
    let r = json(&["demo", "sequential-transitivity", "--dim", "3", "--seed", "42"]);
    assert_eq!(r["composable"], false);
}

#[test]
fn emitted_documents_round_trip() {
    let cfg = ToleranceConfig::default();
    let dir = tempfile::tempdir().unwrap();
    let state_path = dir.path().join("state.json");
    let out = qpe(&["random", "state", "--dim", "3", "--seed", "1"]);
    assert!(out.status.success());
    std::fs::write(&state_path, &out.stdout).unwrap();
    let rho = MatrixDocument::parse(&String::from_utf8(out.stdout).unwrap()).unwrap().to_state(&cfg).unwrap();
    assert!(rho.is_full_rank(&cfg));

    let sp = state_path.to_string_lossy().into_owned();
    assert_eq!(code(&["order", "check", &sp, &sp]), 0);
    assert_eq!(code(&["order", "check", "bottom3.json", &sp]), 0);

    let pure = qpe(&["random", "state", "--dim", "3", "--rank", "1", "--seed", "2"]);
    let pure = MatrixDocument::parse(&String::from_utf8(pure.stdout).unwrap()).unwrap().to_state(&cfg).unwrap();
    assert_eq!(pure.rank(&cfg), 1);

    let post_path = dir.path().join("post.json");
    let out = qpe(&["bayes", "update", "pair1_x.json", "effect_agree.json"]);
    std::fs::write(&post_path, &out.stdout).unwrap();
    let pp = post_path.to_string_lossy().into_owned();
    assert!(MatrixDocument::parse(&std::fs::read_to_string(&post_path).unwrap()).is_ok());
    assert_eq!(code(&["order", "check", "pair1_x.json", &pp]), 0);
    assert_eq!(code(&["bayes", "effect", "pair1_x.json", &pp]), 0);

    for repr in ["choi", "kraus"] {
        let out = qpe(&["random", "channel", "--in-dim", "2", "--out-dim", "3", "--kraus-rank", "2", "--repr", repr]);
        let ch = ChannelDocument::parse(&String::from_utf8(out.stdout).unwrap()).unwrap().to_channel(&cfg).unwrap();
        assert_eq!((ch.in_dim(), ch.out_dim()), (2, 3));
    }
    let a = qpe(&["random", "state", "--dim", "3", "--seed", "5"]).stdout;
    let b = qpe(&["random", "state", "--dim", "3", "--seed", "5"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn text_format() {
    let out = qpe(&["--format", "text", "order", "check", "pair1_x.json", "pair1_y.json"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("qpe: holds"));
}
