use std::process::{Command, Output};

fn nr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nr"))
        .args(args)
        .env_remove("NR_SEED")
        .output()
        .expect("run nr")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn enumerate_head() {
    let out = nr(&["enumerate", "--count", "7"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "k,r_k\n0,0/1\n1,1/1\n2,1/2\n3,1/3\n4,2/3\n5,1/4\n6,3/4\n");
}

#[test]
fn darboux_rows() {
    let out = nr(&["darboux", "--oracle", "dirichlet", "--partition", "uniform:64", "--partition", "random:5:3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "n_or_seed,lower,upper,gap\n64,0/1,1/1,1/1\n3,0/1,1/1,1/1\n");
}

#[test]
fn invalid_arguments_exit_2() {
    assert_eq!(nr(&["certify", "--epsilon", "0"]).status.code(), Some(2));
    assert_eq!(nr(&["certify", "--epsilon", "-1/3"]).status.code(), Some(2));
    assert_eq!(nr(&["darboux", "--partition", "uniform:0"]).status.code(), Some(2));
    assert_eq!(nr(&["darboux", "--partition", "triangular:4"]).status.code(), Some(2));
}

#[test]
fn adversarial_certificate() {
    let out = nr(&["certify", "--epsilon", "1/1000", "--families", "adversarial", "--count", "20"]);
    assert!(out.status.success());
    let cert: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["families"], serde_json::json!(["adversarial"]));
    assert_eq!(cert["checked"], 20);
    assert_eq!(cert["all_passed"], true);
}

#[test]
fn seed_from_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_nr"))
        .args(["converge", "--max-exp", "3", "--random", "1"])
        .env("NR_SEED", "11")
        .output()
        .unwrap();
    let with_flag = nr(&["converge", "--max-exp", "3", "--random", "1", "--seed", "11"]);
    let default = nr(&["converge", "--max-exp", "3", "--random", "1"]);
    assert_eq!(with_env.stdout, with_flag.stdout);
    assert_ne!(with_flag.stdout, default.stdout);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("nr-cli-{}.csv", std::process::id()));
    let out = nr(&["enumerate", "--count", "3", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "k,r_k\n0,0/1\n1,1/1\n2,1/2\n");
    std::fs::remove_file(path).unwrap();
}
