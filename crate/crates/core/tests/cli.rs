use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperfourier"))
        .args(args)
        .current_dir(dir)
        .env_remove("HYPERFOURIER_SEED")
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn equality_case_gaussian_reaches_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify-2d", "--c0", "0.5,0,0,0.5", "--a", "1,0", "--b", "-1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let report = &json(&out)["report"];
    assert!((report["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(report["equality"], true);
}

#[test]
fn orthogonal_directions_have_zero_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify-2d", "--a", "1,0", "--b", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = &json(&out)["report"];
    assert_eq!(report["rhs_bound"].as_f64(), Some(0.0));
    assert_eq!(report["ratio"], "inf");
    assert_eq!(report["satisfied"], true);
}

#[test]
fn transform_compare_on_seeded_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["transform", "--brute", "--fast", "--compare", "--source", "random", "--n", "16", "--h", "0.6"],
    );
    assert_eq!(out.status.code(), Some(0));
    let report = &json(&out)["report"];
    assert!(report["max_relative_deviation"].as_f64().unwrap() < 1e-10);
}

#[test]
fn reports_embed_the_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify-component", "--axis", "2"]);
    let config = &json(&out)["config"];
    assert_eq!(config["command"], "verify-component");
    assert_eq!(config["seed"], 20_260_415);
    assert_eq!(config["n"], 128);
    assert_eq!(config["axis"], 2);
}

#[test]
fn outputs_are_deterministic_and_seed_env_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--source", "random", "--steps", "3", "--format", "csv"];
    let (a, b) = (run(dir.path(), &args), run(dir.path(), &args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().nth(1), Some("angle_a,angle_b,lhs,rhs,ratio,satisfied"));
    assert_eq!(text.lines().count(), 2 + 9);

    let env = Command::new(env!("CARGO_BIN_EXE_hyperfourier"))
        .args(["verify-2d", "--source", "random"])
        .current_dir(dir.path())
        .env("HYPERFOURIER_SEED", "11")
        .output()
        .unwrap();
    let flag = run(dir.path(), &["verify-2d", "--source", "random", "--seed", "11"]);
    assert_eq!(env.stdout, flag.stdout);
    let default = run(dir.path(), &["verify-2d", "--source", "random"]);
    assert_ne!(default.stdout, flag.stdout);
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let flags = run(dir.path(), &["verify-2d", "--source", "random", "--seed", "3", "--b", "0.6,-0.8"]);
    std::fs::write(
        dir.path().join("run.json"),
        r#"{"command": "verify-2d", "source": "random", "seed": 3, "b": [0.6, -0.8]}"#,
    )
    .unwrap();
    let file = run(dir.path(), &["--config", "run.json"]);
    assert_eq!(file.status.code(), Some(0));
    assert_eq!(flags.stdout, file.stdout);
}

#[test]
fn split_and_inverse_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["gen-gaussian", "--c0", "1,0.2,0,0.3", "-o", "g.bin"]).status.success());
    let out = run(dir.path(), &["split", "--input", "g.bin", "--out-minus", "m.bin", "--out-plus", "p.bin"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("m.bin").exists() && dir.path().join("p.bin").exists());

    assert!(run(dir.path(), &["transform", "--input", "g.bin", "-o", "s.bin"]).status.success());
    let back = run(dir.path(), &["transform", "--kind", "qft-inverse", "--input", "s.bin", "-o", "back.csv"]);
    assert_eq!(back.status.code(), Some(0));
    let report = &json(&back)["report"];
    assert!(report["parseval_residual"].as_f64().unwrap() < 1e-10);
    assert!(std::fs::read_to_string(dir.path().join("back.csv")).unwrap().lines().count() > 1);
}

#[test]
fn four_d_commands_run() {
    let dir = tempfile::tempdir().unwrap();
    let packets = run(dir.path(), &["packets", "--source", "random"]);
    assert_eq!(packets.status.code(), Some(0));
    assert_eq!(json(&packets)["report"]["passed"], true);
    let verify = run(dir.path(), &["verify-4d", "--source", "random", "--a", "1,0.5,0,0", "--b", "0.3,1,0,0"]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(json(&verify)["report"]["kind"], "directional_4d");
}

#[test]
fn check_identities_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["check-identities"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["passed"], true);
}

#[test]
fn config_errors_exit_two_with_json_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verify-2d", "--a", "1,0,0"][..],
        &["verify-2d", "--dim", "3"],
        &["split", "--input", "missing.bin"],
        &["transform", "--kind", "sft", "--dim", "2"],
        &[],
    ] {
        let out = run(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
        assert!(err["error"]["kind"].is_string() && err["error"]["message"].is_string(), "{args:?}");
    }
}

#[test]
fn stated_four_d_bound_fails_for_tilted_plus_packet() {
    // A field in the + part elongated along t + x, with a = b = e_t + e1.
    let dir = tempfile::tempdir().unwrap();
    let verify = |bound: &str| {
        run(dir.path(), &["verify-4d", "--input", "tilted.bin", "--a", "1,1,0,0", "--b", "1,1,0,0", "--bound", bound])
    };
    write_tilted_plus(&dir.path().join("tilted.bin"));
    assert_eq!(verify("stated").status.code(), Some(1));
    assert_eq!(verify("packet-consistent").status.code(), Some(0));
}

fn write_tilted_plus(path: &Path) {
    use hyperfourier::grid::{write_field4, Grid4Spec, MVField4};
    use hyperfourier::hypercomplex::Multivector31;

    let spec = Grid4Spec::new([32, 32, 8, 8], [0.55, 0.55, 0.9, 0.9]).unwrap();
    let c0 = (Multivector31::scalar(1.0) + Multivector31::i_st()) * 0.5;
    let (wide, narrow) = (1.5f64, 0.6f64);
    let f = MVField4::from_fn(spec, |[t, x, y, z]| {
        let (u, v) = ((t + x) / 2f64.sqrt(), (t - x) / 2f64.sqrt());
        c0 * (-0.5 * (u * u / (wide * wide) + v * v / (narrow * narrow) + y * y + z * z)).exp()
    });
    write_field4(path, &f).unwrap();
}
