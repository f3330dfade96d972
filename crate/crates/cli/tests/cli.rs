use std::process::{Command, Output};

use tempfile::TempDir;

fn braidgen(cache: &TempDir, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidgen"))
        .arg("--cache")
        .arg(cache.path())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .trim_end()
        .to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn count_prints_known_values() {
    let cache = TempDir::new().unwrap();
    for (n, k, expected) in [
        ("4", "3", "19"),
        ("2", "100", "1"),
        ("3", "3", "7"),
        ("3", "0", "1"),
    ] {
        let out = braidgen(&cache, &["count", "-n", n, "-k", k]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert_eq!(stdout(&out), expected, "n={n} k={k}");
    }
}

#[test]
fn cache_file_is_written_and_reused() {
    let cache = TempDir::new().unwrap();
    let first = braidgen(&cache, &["count", "-n", "5", "-k", "12"]);
    assert!(first.status.success());
    assert!(cache.path().join("growth-n5.txt").exists());
    let second = braidgen(&cache, &["count", "-n", "5", "-k", "12"]);
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn unrank_and_rank_are_inverse() {
    let cache = TempDir::new().unwrap();
    let out = braidgen(&cache, &["unrank", "-n", "4", "-k", "3", "-r", "16"]);
    assert_eq!(stdout(&out), "3 2 1");
    let out = braidgen(&cache, &["rank", "-n", "4", "3", "2", "1"]);
    assert_eq!(stdout(&out), "16");
    let out = braidgen(&cache, &["rank", "-n", "4", "3,2,1"]);
    assert_eq!(stdout(&out), "16");
}

#[test]
fn automaton_state_count() {
    let cache = TempDir::new().unwrap();
    let out = braidgen(&cache, &["automaton", "-n", "5", "--states"]);
    assert_eq!(stdout(&out), "56");
}

#[test]
fn automaton_exports() {
    let cache = TempDir::new().unwrap();
    let out = braidgen(&cache, &["automaton", "-n", "3", "--export", "dot"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("digraph"));
    let out = braidgen(&cache, &["automaton", "-n", "3", "--export", "json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(value.is_object());
}

#[test]
fn seeded_sampling_is_reproducible() {
    let cache = TempDir::new().unwrap();
    let args = [
        "sample", "-n", "6", "-k", "20", "--count", "5", "--seed", "11",
    ];
    let a = braidgen(&cache, &args);
    let b = braidgen(&cache, &args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 5);
    for line in stdout(&a).lines() {
        assert_eq!(line.split_whitespace().count(), 20);
        let check = braidgen(&cache, &["check-word", "-n", "6", line]);
        assert!(stdout(&check).starts_with("lex-representative"));
    }
}

#[test]
fn json_sample_output() {
    let cache = TempDir::new().unwrap();
    let out = braidgen(
        &cache,
        &[
            "--json", "sample", "-n", "4", "-k", "3", "--count", "3", "--seed", "7",
        ],
    );
    let words: Vec<Vec<u16>> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(words.len(), 3);
    assert!(words
        .iter()
        .all(|w| w.len() == 3 && w.iter().all(|&g| (1..=3).contains(&g))));
}

#[test]
fn usage_errors_exit_one_with_single_line() {
    let cache = TempDir::new().unwrap();
    for args in [
        vec!["count", "-n", "1", "-k", "3"],
        vec!["count", "-n", "4"],
        vec!["bogus"],
        vec![],
        vec!["automaton", "-n", "3", "--export", "xml"],
        vec!["rank", "-n", "4", "5"],
        vec!["sample", "-n", "4", "-k", "3", "--count", "0"],
    ] {
        let out = braidgen(&cache, &args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = stderr(&out);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("usage error:"), "{err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn computation_errors_exit_two() {
    let cache = TempDir::new().unwrap();
    for args in [
        vec!["rank", "-n", "4", "2", "1", "2"],
        vec!["unrank", "-n", "4", "-k", "3", "-r", "20"],
        vec!["unrank", "-n", "4", "-k", "3", "-r", "0"],
        vec!["oracle", "enumerate", "-n", "9", "-k", "3"],
    ] {
        let out = braidgen(&cache, &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = stderr(&out);
        assert_eq!(err.trim_end().lines().count(), 1);
        assert!(err.starts_with("error:"), "{err}");
    }
}

#[test]
fn oracle_commands() {
    let cache = TempDir::new().unwrap();
    let out = braidgen(&cache, &["oracle", "normalize", "-n", "3", "2", "1", "2"]);
    assert_eq!(stdout(&out), "1 2 1");
    let out = braidgen(&cache, &["oracle", "enumerate", "-n", "3", "-k", "3"]);
    assert_eq!(stdout(&out).lines().count(), 7);
}

#[test]
fn count_prefix_and_check_word() {
    let cache = TempDir::new().unwrap();
    let out = braidgen(
        &cache,
        &["count-prefix", "-n", "4", "-k", "3", "-m", "2", "3"],
    );
    assert_eq!(stdout(&out), "2");
    let out = braidgen(&cache, &["count-prefix", "-n", "4", "-k", "3", "-m", "1"]);
    assert_eq!(stdout(&out), "11");
    let out = braidgen(&cache, &["count-prefix", "-n", "4", "-k", "3", "-m", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = braidgen(&cache, &["--json", "check-word", "-n", "4", "2", "1", "2"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["lex_representative"], false);
}

#[test]
fn verify_single_check() {
    let cache = TempDir::new().unwrap();
    let out = braidgen(&cache, &["verify", "--only", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("[PASS] 1."));
    let out = braidgen(&cache, &["verify", "--only", "9"]);
    assert_eq!(out.status.code(), Some(1));
}
