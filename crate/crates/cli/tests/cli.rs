use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_snakegraph"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let o = bin().args(args).env_remove("SNAKE_SELFTEST_TRIALS").output().expect("binary runs");
    (o.status.code().unwrap_or(-1), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn golden_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (&["expand", "@annulus", "@annulus-loop"], "annulus-loop.expand.txt"),
        (&["expand", "@folded-digon", "@folded-gamma1", "--keep-boundary"], "folded-gamma1.expand.txt"),
        (&["expand", "@folded-digon", "@folded-gamma2", "--keep-boundary"], "folded-gamma2.expand.txt"),
        (&["expand", "@hexagon", "@hexagon-chord", "--keep-boundary"], "hexagon-chord.expand.txt"),
        (&["expand", "@punctured-torus", "@torus-loop"], "torus-loop.expand.txt"),
        (&["matchings", "@annulus", "@annulus-loop"], "annulus-loop.matchings.txt"),
        (&["bmatrix", "@punctured-torus"], "punctured-torus.bmatrix.txt"),
        (&["skein-check", "@square", "@square-ptolemy"], "square-ptolemy.skein.txt"),
    ];
    for (args, file) in cases {
        let (code, out, err) = run(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert_eq!(out, golden(file), "{args:?}");
    }
}

#[test]
fn annulus_has_six_matchings() {
    let (_, out, _) = run(&["matchings", "@annulus", "@annulus-loop"]);
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn output_reparses() {
    let (_, out, _) = run(&["expand", "@annulus", "@annulus-loop", "--keep-boundary"]);
    for line in out.lines() {
        let (_, poly) = line.split_once(" = ").unwrap();
        let p: snakegraph::algebra::LaurentPoly = poly.parse().unwrap();
        assert_eq!(p.to_string(), poly);
    }
}

#[test]
fn verify_fixtures_and_random_arcs() {
    for (s, c) in [
        ("@annulus", "@annulus-loop"),
        ("@folded-digon", "@folded-gamma1"),
        ("@folded-digon", "@folded-gamma2"),
        ("@hexagon", "@hexagon-chord"),
        ("@punctured-torus", "@torus-loop"),
    ] {
        let (code, _, err) = run(&["verify", s, c, "--method", "both", "--keep-boundary"]);
        assert_eq!(code, 0, "{s} {c}: {err}");
    }
    let (code, out, _) = run(&["verify", "--seed", "3", "--max-tiles", "8"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("200 curves agree\n"));
}

#[test]
fn bad_input_is_reported() {
    let dir = std::env::temp_dir().join(format!("snakegraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"kind": "arc", "crossings": ["1"], "colour": 3}"#).unwrap();
    let (code, _, err) = run(&["expand", "@annulus", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("colour"), "{err}");
    let (code, _, err) = run(&["expand", "@annulus", "@hexagon-chord"]);
    assert_eq!(code, 2);
    assert!(err.contains("d2"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dot_output() {
    let (code, out, _) = run(&["snake-dot", "--shapes", "NEN"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("graph \"NEN\" {"));
    assert_eq!(out.matches("subgraph cluster_tile").count(), 4);
    let (_, out, _) = run(&["snake-dot", "@annulus", "@annulus-loop"]);
    assert!(out.contains("cut"));
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest", "--seed", "9", "--trials", "3"]);
    let b = run(&["selftest", "--seed", "9", "--trials", "3"]);
    assert_eq!(a.0, 0, "{}", a.1);
    assert_eq!(a, b);
    let o = bin().args(["selftest", "--seed", "9"]).env("SNAKE_SELFTEST_TRIALS", "3").output().unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap(), a.1);
}
