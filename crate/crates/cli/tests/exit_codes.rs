use std::process::{Command, Output};

fn blowup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowup")).args(args).output().expect("spawn blowup")
}

#[test]
fn unknown_subcommand_exits_with_two() {
    assert_eq!(blowup(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn missing_required_flag_exits_with_two() {
    assert_eq!(blowup(&["bohr", "--rho", "0.3"]).status.code(), Some(2));
}

#[test]
fn invalid_config_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown_field.toml", "tag = \"MT**\"\nn = 3\nq = [\"1\", \"2\", \"3\"]\nn_schedule = [4]\na = 32\np = [3.0, 3.0, 3.0]\nbogus = 1\n"),
        ("bad_exponents.toml", "tag = \"MT**\"\nn = 3\nq = [\"1\", \"2\", \"3\"]\nn_schedule = [4]\na = 32\np = [3.0, 3.0]\n"),
        ("chirp_spacing.toml", "tag = \"IT\"\nn = 3\nn_schedule = [4]\na = 100\np = [4.0, 4.0, 4.0]\n"),
    ];
    for (name, text) in cases {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let out = blowup(&["run-blowup", "--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(3), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = blowup(&["run-blowup", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_numeric_input_exits_with_three() {
    assert_eq!(blowup(&["bohr", "--freqs", "0.5", "--rho", "0.9", "-N", "10"]).status.code(), Some(3));
    assert_eq!(blowup(&["build-symbol", "--kind", "sign"]).status.code(), Some(3));
}

#[test]
fn failed_assertions_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("control.toml");
    // a flat control cannot grow strictly
    std::fs::write(
        &path,
        "tag = \"control\"\nn = 3\nq = [\"1\", \"2\", \"3\"]\nn_schedule = [4, 8, 16]\na = 32\np = [3.0, 3.0, 3.0]\n\n[assertions]\nincreasing = true\n",
    )
    .unwrap();
    assert_eq!(blowup(&["run-blowup", "--config", path.to_str().unwrap()]).status.code(), Some(1));
}
