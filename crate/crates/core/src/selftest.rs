//! Seeded property suites. The report depends only on the configuration, so two runs
//! with the same seed print the same bytes.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{LaurentPoly, Monomial, VarId};
use crate::generate::{annulus_core_loop, polygon_chord, random_annulus, random_polygon, random_walk_arc};
use crate::mpath::{adjust, chi, invariant, standard_mpath, ChiVariant, MPath};
use crate::skein::{check_matrix_identities, instances, verify_skein, SkeinInstance};
use crate::snakecore::{build_band, build_snake, corner_entry, corner_normalizer, corner_sums, Corner, Shape, SnakeLabels};
use crate::surface::{fixtures, ClusterElement, CurveDescriptor, ExpandOptions, IdealTriangulation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestConfig {
    pub seed: u64,
    pub snakes: usize,
    pub bands: usize,
    pub corners: usize,
    pub curves: usize,
    pub adjusted_arcs: usize,
    pub identities: usize,
    pub skein: usize,
    /// Largest number of tiles in random snakes and bands.
    pub max_tiles: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: 0, snakes: 500, bands: 200, corners: 100, curves: 200, adjusted_arcs: 100, identities: 100, skein: 24, max_tiles: 10 }
    }
}

impl SelftestConfig {
    /// Every trial count set to `n`.
    pub fn with_trials(mut self, n: usize) -> Self {
        self.snakes = n;
        self.bands = n;
        self.corners = n;
        self.curves = n;
        self.adjusted_arcs = n;
        self.identities = n;
        self.skein = n;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    /// First few failures, for the log.
    pub failures: Vec<String>,
}

impl Section {
    fn new(name: &str) -> Self {
        Section { name: name.to_string(), trials: 0, passed: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.trials += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub config: SelftestConfig,
    pub sections: Vec<Section>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.sections.iter().all(Section::ok)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "selftest seed={} max_tiles={}", self.config.seed, self.config.max_tiles)?;
        for s in &self.sections {
            writeln!(f, "[{}] {}: {}/{}", if s.ok() { "pass" } else { "FAIL" }, s.name, s.passed, s.trials)?;
            for m in &s.failures {
                writeln!(f, "    {m}")?;
            }
        }
        writeln!(f, "result: {}", if self.ok() { "pass" } else { "FAIL" })
    }
}

pub fn random_shapes<R: Rng>(d: usize, rng: &mut R) -> Vec<Shape> {
    (1..d).map(|_| if rng.gen_bool(0.5) { Shape::North } else { Shape::East }).collect()
}

fn matching_theorem(cfg: &SelftestConfig, rng: &mut ChaCha8Rng) -> [Section; 2] {
    let mut snakes = Section::new("snake enumerator = matching sum");
    for _ in 0..cfg.snakes {
        let d = rng.gen_range(1..=cfg.max_tiles.max(1));
        let sh = random_shapes(d, rng);
        let g = build_snake(&sh, SnakeLabels::generic(d)).expect("generic labels fit");
        snakes.record(g.snake_enumerator() == g.matching_sum(), || format!("snake {}", shape_text(&sh)));
    }
    let mut bands = Section::new("band enumerator = good matching sum");
    for _ in 0..cfg.bands {
        let d = rng.gen_range(2..=cfg.max_tiles.max(2));
        let sh = random_shapes(d, rng);
        let l = SnakeLabels::generic(d);
        let b = build_band(&sh, l.diagonals, l.glue, VarId::x("a")).expect("at least two tiles");
        bands.record(b.band_enumerator() == b.matching_sum(), || format!("band {}", shape_text(&sh)));
    }
    [snakes, bands]
}

fn shape_text(sh: &[Shape]) -> String {
    let s: String = sh.iter().map(|s| s.letter()).collect();
    if s.is_empty() {
        "-".into()
    } else {
        s
    }
}

fn corners(cfg: &SelftestConfig, rng: &mut ChaCha8Rng) -> Section {
    let mut sec = Section::new("corner entries = partitioned sums");
    for _ in 0..cfg.corners {
        let d = rng.gen_range(1..=cfg.max_tiles.clamp(1, 8));
        let sh = random_shapes(d, rng);
        let g = build_snake(&sh, SnakeLabels::generic(d)).expect("generic labels fit");
        let m = g.transfer_matrix();
        let sums = corner_sums(&g);
        let ok = [Corner::A, Corner::B, Corner::C, Corner::D]
            .into_iter()
            .all(|c| *corner_entry(&m, c) == sums[&c].div_monomial(&corner_normalizer(&g, c)));
        sec.record(ok, || format!("corners {}", shape_text(&sh)));
    }
    sec
}

/// Seeded arcs and loops with at most eight crossings on random polygons and annuli.
pub fn random_curves(count: usize, rng: &mut ChaCha8Rng) -> Vec<(String, IdealTriangulation, CurveDescriptor)> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        match out.len() % 4 {
            0 => {
                let n = rng.gen_range(4..=10);
                let t = random_polygon(n, rng);
                let Some(c) = random_walk_arc(&t, 8, rng) else { continue };
                out.push((format!("polygon({n}) walk"), t, c));
            }
            1 => {
                let n = rng.gen_range(4..=10);
                let t = random_polygon(n, rng);
                let mut vs: Vec<usize> = (0..n).collect();
                vs.shuffle(rng);
                let c = polygon_chord(&t, n, vs[0], vs[1]);
                if c.crossings.is_empty() || c.crossings.len() > 8 {
                    continue;
                }
                out.push((format!("polygon({n}) chord {}->{}", vs[0], vs[1]), t, c));
            }
            2 => {
                let (o, i) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
                let t = random_annulus(o, i, rng);
                let Some(c) = random_walk_arc(&t, 8, rng) else { continue };
                out.push((format!("annulus({o},{i}) walk"), t, c));
            }
            _ => {
                let (o, i) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
                let t = random_annulus(o, i, rng);
                let c = annulus_core_loop(&t);
                out.push((format!("annulus({o},{i}) core"), t, c));
            }
        }
    }
    out
}

/// Every coefficient of X and of the normalized element is positive, and F is a
/// polynomial with constant term 1.
pub fn positivity_holds(x: &ClusterElement) -> bool {
    x.x.all_coefficients_positive()
        && x.normalized.all_coefficients_positive()
        && x.f.terms().all(|(m, _)| m.is_polynomial())
        && x.f.coefficient(&Monomial::one()) == 1.into()
}

fn cross_method(cfg: &SelftestConfig, rng: &mut ChaCha8Rng) -> [Section; 2] {
    let mut sec = Section::new("chi(phi) = expand");
    let mut pos = Section::new("positivity and F(0) = 1");
    let keep = ExpandOptions { keep_boundary: true, rel: 1 };
    for (what, t, c) in random_curves(cfg.curves, rng) {
        let e = t.expand(&c, &keep);
        let m = chi(&t, &c, ChiVariant::Phi);
        match (&e, &m) {
            (Ok(e), Ok(m)) => sec.record(*m == e.x, || format!("{what}: {:?}", c.crossings)),
            _ => sec.record(false, || format!("{what}: {:?} {:?}", e.as_ref().err(), m.as_ref().err())),
        }
        if let Ok(e) = e {
            pos.record(positivity_holds(&e), || format!("{what}: {}", e.x));
        }
    }
    // the bundled examples without self-intersections
    let t = fixtures::annulus();
    let e = t.expand(&fixtures::annulus_loop(), &keep).expect("fixture expands");
    pos.record(positivity_holds(&e), || "annulus loop".into());
    let t = fixtures::folded_digon();
    let e = t.expand(&fixtures::folded_arcs().0, &keep).expect("fixture expands");
    pos.record(positivity_holds(&e), || "folded gamma1".into());
    [sec, pos]
}

/// Applies the hexagon reroute, the cross/slide swap and both end moves to the standard
/// path of `c` (plus every cyclic rotation for loops) and compares invariants.
pub fn adjustments_preserve(t: &IdealTriangulation, c: &CurveDescriptor) -> Result<[usize; 4], String> {
    let p = standard_mpath(t, c).map_err(|e| e.to_string())?;
    let mut applied = [0usize; 4];
    for reduced in [false, true] {
        let v = invariant(&p, reduced).map_err(|e| e.to_string())?;
        let same = |q: &MPath, what: &str| -> Result<(), String> {
            let w = invariant(q, reduced).map_err(|e| format!("{what}: {e}"))?;
            if w == v {
                Ok(())
            } else {
                Err(format!("{what} changed {v} to {w}"))
            }
        };
        for i in 0..p.steps.len() {
            if p.steps[i].step_type() != 1 {
                continue;
            }
            let h = adjust::hexagon(t, &p, i).map_err(|e| e.to_string())?;
            same(&h, "hexagon")?;
            applied[0] += 1;
            if i > 0 && p.steps[i - 1].step_type() == 2 {
                let s = adjust::swap_cross_slide(t, &h, i - 1).map_err(|e| e.to_string())?;
                same(&s, "swap")?;
                applied[1] += 1;
            }
        }
        if p.closed {
            for k in 0..p.steps.len() {
                same(&adjust::rotate(&p, k), "rotate")?;
            }
            applied[2] += 1;
            applied[3] += 1;
        } else {
            same(&adjust::move_start(t, &p), "start")?;
            same(&adjust::move_end(t, &p), "end")?;
            applied[2] += 1;
            applied[3] += 1;
        }
    }
    Ok(applied)
}

fn adjustments(cfg: &SelftestConfig, rng: &mut ChaCha8Rng) -> Section {
    let mut sec = Section::new("local adjustments keep |UR|");
    let mut done = 0;
    while done < cfg.adjusted_arcs {
        let t = if rng.gen_bool(0.5) {
            random_polygon(rng.gen_range(4..=10), rng)
        } else {
            random_annulus(rng.gen_range(1..=4), rng.gen_range(1..=4), rng)
        };
        let Some(c) = random_walk_arc(&t, 8, rng) else { continue };
        let r = adjustments_preserve(&t, &c);
        let all_four = matches!(r, Ok(a) if a.iter().all(|&k| k > 0));
        sec.record(all_four, || format!("{:?}: {:?}", c.crossings, r));
        done += 1;
    }
    sec
}

/// Skein instances on unpunctured surfaces: arc-arc crossings in random polygons, then
/// arc-loop, loop-loop and self-crossing loops on random annuli.
pub fn skein_instances(count: usize, rng: &mut ChaCha8Rng) -> Vec<(String, IdealTriangulation, SkeinInstance)> {
    let mut out = Vec::new();
    let polygons = count - count / 3;
    for k in 0..polygons {
        let n = 4 + k % 6;
        let t = random_polygon(n, rng);
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(rng);
        let mut q = vs[..4].to_vec();
        q.sort_unstable();
        q.rotate_left(rng.gen_range(0..4));
        let inst = instances::polygon_arc_arc(&t, n, [q[0], q[1], q[2], q[3]]);
        out.push((format!("polygon({n}) {q:?}"), t, inst));
    }
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count.max(1) {
        attempts += 1;
        let (o, i) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let t = random_annulus(o, i, rng);
        let inst = match out.len() % 3 {
            0 => {
                let Some(a) = random_walk_arc(&t, 6, rng) else { continue };
                let Some(inst) = instances::annulus_arc_loop(&t, &a) else { continue };
                inst
            }
            1 => instances::annulus_loop_loop(&t),
            _ => instances::annulus_double_loop(&t),
        };
        out.push((format!("annulus({o},{i}) {}", inst.variant()), t, inst));
    }
    out
}

fn skein(cfg: &SelftestConfig, rng: &mut ChaCha8Rng) -> [Section; 3] {
    let mut ids = Section::new("matrix identities");
    let seed = rng.gen();
    match check_matrix_identities(cfg.identities, seed) {
        Ok(n) => {
            for _ in 0..n {
                ids.record(true, String::new);
            }
        }
        Err(e) => ids.record(false, || e.to_string()),
    }
    let mut ptolemy = Section::new("ptolemy square");
    let (t, inst) = instances::ptolemy_square();
    match verify_skein(&t, &inst) {
        Ok(r) => ptolemy.record(r.holds && r.exponents_integral() && r.signs_positive(), || r.to_string()),
        Err(e) => ptolemy.record(false, || e.to_string()),
    }
    let mut sec = Section::new("skein relations with lamination coefficients");
    for (what, t, inst) in skein_instances(cfg.skein, rng) {
        match verify_skein(&t, &inst) {
            Ok(r) => sec.record(r.holds && r.exponents_integral() && r.lamination_agrees() == Some(true), || format!("{what}: {r}")),
            Err(e) => sec.record(false, || format!("{what}: {e}")),
        }
    }
    [ids, ptolemy, sec]
}

/// Golden values from the bundled examples.
fn golden() -> Section {
    let mut sec = Section::new("golden examples");
    let t = fixtures::annulus();
    let c = fixtures::annulus_loop();
    let den = Monomial::from_doubled(["1", "2", "3", "4"].map(|l| (VarId::x(l), 2)));
    let want = "x:1^2*x:2*x:4 + y:3*x:1^2 + y:2*y:3*x:1*x:3 + y:3*y:4*x:1*x:3 + y:2*y:3*y:4*x:3^2 + y:1*y:2*y:3*y:4*x:2*x:3^2*x:4"
        .parse::<LaurentPoly>()
        .expect("literal parses")
        .div_monomial(&den);
    let e = t.expand(&c, &ExpandOptions::default());
    sec.record(matches!(&e, Ok(e) if e.x == want), || "annulus loop by matchings".into());
    let m = chi(&t, &c, ChiVariant::Phi).map(|p| p.specialize_kind(crate::algebra::VarKind::Boundary));
    sec.record(matches!(&m, Ok(m) if *m == want), || "annulus loop by matrices".into());
    let good = t.build_band_from_loop(&c).map(|b| b.good_matchings().len());
    sec.record(good == Ok(6), || format!("annulus good matchings {good:?}"));
    let t = fixtures::folded_digon();
    let (g1, g2) = fixtures::folded_arcs();
    let keep = ExpandOptions { keep_boundary: true, rel: 1 };
    let x1: LaurentPoly = "b:b*y:tau@p + b:b*y:tau + b:a".parse().expect("literal parses");
    let x2: LaurentPoly = "b:a + b:a*y:tau*y:tau@p^-1 + y:tau*b:b".parse().expect("literal parses");
    let n2: LaurentPoly = "b:a*y:tau@p + b:a*y:tau + b:b*y:tau*y:tau@p".parse().expect("literal parses");
    sec.record(matches!(t.expand(&g1, &keep), Ok(e) if e.x == x1), || "folded gamma1".into());
    sec.record(matches!(t.expand(&g2, &keep), Ok(e) if e.x == x2 && e.normalized == n2), || "folded gamma2".into());
    sec
}

pub fn run(cfg: &SelftestConfig) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sections = vec![golden()];
    sections.extend(matching_theorem(cfg, &mut rng));
    sections.push(corners(cfg, &mut rng));
    sections.extend(cross_method(cfg, &mut rng));
    sections.push(adjustments(cfg, &mut rng));
    sections.extend(skein(cfg, &mut rng));
    SelftestReport { config: cfg.clone(), sections }
}
