//! One line per acceptance criterion; exits non-zero if any fails.

#[path = "../../core/tests/support/oracle.rs"]
mod oracle;

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use snakegraph::algebra::{LaurentPoly, Monomial, VarId, VarKind};
use snakegraph::mpath::{chi, ChiVariant};
use snakegraph::selftest::{adjustments_preserve, positivity_holds, random_curves, random_shapes, skein_instances};
use snakegraph::skein::{check_matrix_identities, instances, verify_skein};
use snakegraph::snakecore::{build_band, build_snake, corner_entry, Corner, SnakeLabels};
use snakegraph::surface::{fixtures, ExpandOptions};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn poly(s: &str) -> LaurentPoly {
    s.parse().expect("literal parses")
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t < limit {
        Ok(())
    } else {
        Err(format!("{what} took {t:?}, limit {limit:?}"))
    }
}

fn annulus_example() -> Outcome {
    let start = Instant::now();
    let t = fixtures::annulus();
    let c = fixtures::annulus_loop();
    let den = Monomial::from_doubled(["1", "2", "3", "4"].map(|l| (VarId::x(l), 2)));
    let want =
        poly("x:1^2*x:2*x:4 + y:3*x:1^2 + y:2*y:3*x:1*x:3 + y:3*y:4*x:1*x:3 + y:2*y:3*y:4*x:3^2 + y:1*y:2*y:3*y:4*x:2*x:3^2*x:4").div_monomial(&den);
    let by_matchings = t.expand(&c, &ExpandOptions::default()).map_err(|e| e.to_string())?.x;
    if by_matchings != want {
        return Err(format!("matchings give {by_matchings}"));
    }
    let by_matrices = chi(&t, &c, ChiVariant::Phi).map_err(|e| e.to_string())?.specialize_kind(VarKind::Boundary);
    if by_matrices != want {
        return Err(format!("matrices give {by_matrices}"));
    }
    let band = t.build_band_from_loop(&c).map_err(|e| e.to_string())?;
    let (n, m) = (band.good_matchings().len(), oracle::good_matchings(&band).len());
    if (n, m) != (6, 6) {
        return Err(format!("{n} good matchings ({m} by brute force)"));
    }
    within(start, Duration::from_secs(1), "annulus")?;
    Ok("X agrees by both methods, 6 good matchings".into())
}

fn folded_example() -> Outcome {
    let start = Instant::now();
    let t = fixtures::folded_digon();
    let (g1, g2) = fixtures::folded_arcs();
    let keep = ExpandOptions { keep_boundary: true, rel: 1 };
    let e1 = t.expand(&g1, &keep).map_err(|e| e.to_string())?;
    let e2 = t.expand(&g2, &keep).map_err(|e| e.to_string())?;
    // y_{τ^(p)} is written y:tau@p
    let checks = [
        ("X_gamma1", &e1.x, poly("b:b*y:tau@p + b:b*y:tau + b:a")),
        ("X_gamma2", &e2.x, poly("b:a + b:a*y:tau*y:tau@p^-1 + y:tau*b:b")),
        ("x_gamma2", &e2.normalized, poly("b:a*y:tau@p + b:a*y:tau + b:b*y:tau*y:tau@p")),
    ];
    for (name, got, want) in checks {
        if *got != want {
            return Err(format!("{name} = {got}, expected {want}"));
        }
    }
    within(start, Duration::from_secs(1), "folded")?;
    Ok("X_gamma1, X_gamma2 and normalized x_gamma2 match".into())
}

fn matching_theorem() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..500 {
        let d = rng.gen_range(1..=10);
        let sh = random_shapes(d, &mut rng);
        let g = build_snake(&sh, SnakeLabels::generic(d)).map_err(|e| e.to_string())?;
        if g.snake_enumerator() != oracle::snake_sum(&g) {
            return Err(format!("snake {k} {sh:?}"));
        }
    }
    for k in 0..200 {
        let d = rng.gen_range(2..=10);
        let sh = random_shapes(d, &mut rng);
        let l = SnakeLabels::generic(d);
        let b = build_band(&sh, l.diagonals, l.glue, VarId::x("a")).map_err(|e| e.to_string())?;
        if b.band_enumerator() != oracle::band_sum(&b) {
            return Err(format!("band {k} {sh:?}"));
        }
    }
    within(start, Duration::from_secs(60), "matching suite")?;
    Ok("500 snakes and 200 bands equal brute-force sums".into())
}

fn corner_entries() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..100 {
        let d = rng.gen_range(1..=8);
        let sh = random_shapes(d, &mut rng);
        let g = build_snake(&sh, SnakeLabels::generic(d)).map_err(|e| e.to_string())?;
        let m = g.transfer_matrix();
        let want = oracle::corner_quotients(&g);
        for (i, c) in [Corner::A, Corner::B, Corner::C, Corner::D].into_iter().enumerate() {
            if *corner_entry(&m, c) != want[i] {
                return Err(format!("snake {k} {sh:?} corner {c:?}"));
            }
        }
    }
    within(start, Duration::from_secs(30), "corner suite")?;
    Ok("A, B, C, D equal partitioned sums on 100 snakes".into())
}

fn cross_method() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let keep = ExpandOptions { keep_boundary: true, rel: 1 };
    let curves = random_curves(200, &mut rng);
    let loops = curves.iter().filter(|(_, _, c)| !c.crossings.is_empty() && c.basepoint_triangle.is_some()).count();
    for (what, t, c) in &curves {
        let x = t.expand(c, &keep).map_err(|e| format!("{what}: {e}"))?.x;
        let m = chi(t, c, ChiVariant::Phi).map_err(|e| format!("{what}: {e}"))?;
        if x != m {
            return Err(format!("{what} {:?}: {x} vs {m}", c.crossings));
        }
    }
    Ok(format!("200 curves ({loops} loops) agree"))
}

fn path_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let curves: Vec<_> = random_curves(200, &mut rng).into_iter().filter(|(_, _, c)| c.basepoint_triangle.is_none()).collect();
    let mut counts = [0usize; 4];
    for (what, t, c) in &curves {
        let a = adjustments_preserve(t, c).map_err(|e| format!("{what} {:?}: {e}", c.crossings))?;
        if a.contains(&0) {
            return Err(format!("{what} {:?}: some adjustment never applied {a:?}", c.crossings));
        }
        for (n, k) in counts.iter_mut().zip(a) {
            *n += k;
        }
    }
    if curves.len() < 100 {
        return Err(format!("only {} arcs", curves.len()));
    }
    Ok(format!("{} arcs, adjustments applied {counts:?} times", curves.len()))
}

fn positivity() -> Outcome {
    let keep = ExpandOptions { keep_boundary: true, rel: 1 };
    let mut checked = 0;
    let t = fixtures::annulus();
    let mut elements = vec![("annulus loop".to_string(), t.expand(&fixtures::annulus_loop(), &keep).map_err(|e| e.to_string())?)];
    let t = fixtures::folded_digon();
    let (g1, g2) = fixtures::folded_arcs();
    elements.push(("folded gamma1".into(), t.expand(&g1, &keep).map_err(|e| e.to_string())?));
    // gamma2 is outside the F-polynomial lemma; its coefficients are still positive
    let e2 = t.expand(&g2, &keep).map_err(|e| e.to_string())?;
    if !(e2.x.all_coefficients_positive() && e2.normalized.all_coefficients_positive()) {
        return Err("folded gamma2 has a negative coefficient".into());
    }
    checked += 1;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (what, t, c) in random_curves(200, &mut rng) {
        elements.push((what, t.expand(&c, &keep).map_err(|e| e.to_string())?));
    }
    for (what, e) in &elements {
        if !positivity_holds(e) {
            return Err(format!("{what}: X = {} F = {}", e.x, e.f));
        }
        checked += 1;
    }
    // abstract snakes and bands: positive, and the minimal matching is the only y-free term
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let d = rng.gen_range(1..=10);
        let sh = random_shapes(d, &mut rng);
        let g = build_snake(&sh, SnakeLabels::generic(d)).map_err(|e| e.to_string())?;
        let e = g.snake_enumerator();
        let f = e.specialize_kind(VarKind::X);
        if !e.all_coefficients_positive() || f.coefficient(&Monomial::one()) != 1.into() {
            return Err(format!("snake {sh:?}"));
        }
        checked += 1;
    }
    for _ in 0..200 {
        let d = rng.gen_range(2..=10);
        let sh = random_shapes(d, &mut rng);
        let l = SnakeLabels::generic(d);
        let b = build_band(&sh, l.diagonals, l.glue, VarId::x("a")).map_err(|e| e.to_string())?;
        let e = b.band_enumerator();
        let f = e.specialize_kind(VarKind::X);
        if !e.all_coefficients_positive() || f.coefficient(&Monomial::one()) != 1.into() {
            return Err(format!("band {sh:?}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} expansions positive with F(0) = 1"))
}

fn skein_suites() -> Outcome {
    let n = check_matrix_identities(100, 8).map_err(|e| e.to_string())?;
    if n != 100 {
        return Err(format!("{n} identity trials"));
    }
    let (t, inst) = instances::ptolemy_square();
    let r = verify_skein(&t, &inst).map_err(|e| e.to_string())?;
    let y_only = r.terms.iter().all(|term| term.coefficient.vars().all(|v| v.kind == VarKind::Y));
    if !(r.holds && r.exponents_integral() && y_only && r.lamination_agrees() == Some(true)) {
        return Err(format!("ptolemy:\n{r}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let found = skein_instances(24, &mut rng);
    for (what, t, inst) in &found {
        let r = verify_skein(t, inst).map_err(|e| format!("{what}: {e}"))?;
        if !(r.holds && r.exponents_integral() && r.lamination_agrees() == Some(true)) {
            return Err(format!("{what}:\n{r}"));
        }
    }
    if found.len() < 20 {
        return Err(format!("only {} instances", found.len()));
    }
    let coeffs: Vec<String> = r.terms.iter().map(|t| LaurentPoly::from_monomial(t.coefficient.clone()).to_string()).collect();
    Ok(format!("100 identities; ptolemy Y = {}, Y' = {}; {} instances", coeffs[0], coeffs[1], found.len()))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_snakegraph"))
            .args(["selftest", "--seed", "17"])
            .env("SNAKE_SELFTEST_TRIALS", "10")
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() {
        return Err(String::from_utf8_lossy(&a.stdout).into_owned());
    }
    if a.stdout != b.stdout {
        return Err("reports differ".into());
    }
    let cfg = snakegraph::selftest::SelftestConfig { seed: 17, ..Default::default() }.with_trials(10);
    let (x, y) = (snakegraph::selftest::run(&cfg), snakegraph::selftest::run(&cfg));
    if x.to_string() != y.to_string() || x.to_string().as_bytes() != a.stdout.as_slice() {
        return Err("in-process report differs from the binary's".into());
    }
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("annulus loop golden example", annulus_example),
        ("self-folded golden example", folded_example),
        ("transfer-matrix enumerators vs brute force", matching_theorem),
        ("corner entries vs partitioned sums", corner_entries),
        ("matrix method vs matching method", cross_method),
        ("path invariance under local adjustments", path_invariance),
        ("positivity and F-polynomial constant term", positivity),
        ("skein suites", skein_suites),
        ("selftest determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg} ({secs:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
