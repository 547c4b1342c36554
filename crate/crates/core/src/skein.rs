//! Skein relations: the 2x2 identities behind them, loosened M-paths, signed
//! intersection numbers, and verification of concrete instances.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{LaurentPoly, Mat2, Monomial, VarId};
use crate::mpath::{standard_mpath, step_matrix, Anchor, Dir, MPath, PathError, Step, StepKind, Steps};
use crate::surface::{ArcEnd, CurveDescriptor, CurveKind, ExpandOptions, IdealTriangulation, MarkedPoint, SurfaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeinError {
    #[error("matrix identity ({identity}) failed for {detail}")]
    IdentityFailed { identity: &'static str, detail: String },
    #[error("isotopy relation {0} fails at the matrix level")]
    IsotopyMismatch(String),
    #[error("triangulation has self-folded triangles")]
    SelfFoldedUnsupported,
    #[error("exponent of {0} is not an integer")]
    NotAMonomialCoefficient(String),
    #[error("elementary laminations need a surface without punctures")]
    PuncturedSurface,
    #[error("loosening steps may only have types 1 and 2")]
    TypeThreeInLoosening,
    #[error("no walk around one marked point joins {0} and {1}")]
    NoWalk(String, String),
    #[error("bad decomposition: {0}")]
    BadDecomposition(String),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

// ---------------------------------------------------------------------------
// matrix identities

fn random_poly<R: Rng>(rng: &mut R) -> LaurentPoly {
    let vars = [VarId::x("p"), VarId::x("q"), VarId::curly("r")];
    let mut p = LaurentPoly::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let c: i64 = match rng.gen_range(-3..=3) {
            0 => 1,
            c => c,
        };
        let m = Monomial::from_doubled(vars.iter().map(|v| (v.clone(), 2 * rng.gen_range(-1..=1))));
        p = &p + &LaurentPoly::term(c, m);
    }
    p
}

fn random_matrix<R: Rng>(rng: &mut R) -> Mat2 {
    Mat2::new(random_poly(rng), random_poly(rng), random_poly(rng), random_poly(rng))
}

/// A product of type-1 and type-3 step matrices on generic labels, so det = 1.
fn random_step_product<R: Rng>(rng: &mut R) -> Mat2 {
    let v = |rng: &mut R| VarId::x(["a", "b", "c", "d"][rng.gen_range(0..4)]);
    let mut m = Mat2::identity();
    for _ in 0..rng.gen_range(1..=4) {
        let kind = if rng.gen_bool(0.5) {
            let dir = if rng.gen_bool(0.5) { Dir::Cw } else { Dir::Ccw };
            StepKind::Turn { corner: (0, 0), from_side: v(rng), to_side: v(rng), sigma: v(rng), dir }
        } else {
            StepKind::Slide { tau: v(rng), positive: rng.gen_bool(0.5) }
        };
        m = step_matrix(&kind, false).mul(&m);
    }
    m
}

fn ur(m: &Mat2) -> LaurentPoly {
    m.ur().clone()
}

/// Checks the three identities for det(m1) = 1 on one triple.
pub fn check_identities_on(m1: &Mat2, m2: &Mat2, m3: &Mat2) -> Result<(), SkeinError> {
    let inv = m1.inverse_det1().map_err(|e| SkeinError::IdentityFailed { identity: "det", detail: e.to_string() })?;
    let fail = |identity: &'static str| SkeinError::IdentityFailed { identity, detail: format!("m1 = {m1}, m2 = {m2}, m3 = {m3}") };
    let lhs = &ur(&m2.mul(m1)) * &ur(&m1.mul(m3));
    let rhs = &(&ur(m1) * &ur(&m2.mul(m1).mul(m3))) + &(&ur(m2) * &ur(m3));
    if lhs != rhs {
        return Err(fail("first"));
    }
    let lhs = &ur(&m3.mul(m2)) * &m1.trace();
    let rhs = &ur(&m3.mul(m1).mul(m2)) + &ur(&m3.mul(&inv).mul(m2));
    if lhs != rhs {
        return Err(fail("second"));
    }
    let lhs = &m2.trace() * &m1.trace();
    let rhs = &m1.mul(m2).trace() + &inv.mul(m2).trace();
    if lhs != rhs {
        return Err(fail("third"));
    }
    Ok(())
}

/// Runs `trials` random triples through all three identities.
pub fn check_matrix_identities(trials: usize, seed: u64) -> Result<usize, SkeinError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let m1 = random_step_product(&mut rng);
        let (m2, m3) = (random_matrix(&mut rng), random_matrix(&mut rng));
        check_identities_on(&m1, &m2, &m3)?;
    }
    Ok(trials)
}

// ---------------------------------------------------------------------------
// loosened paths

/// σ2 ∘ ρ ∘ σ1 with σ1, σ2 made of type-1 and type-2 steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoosenedMPath {
    pub prefix: Vec<Step>,
    pub core: MPath,
    pub suffix: Vec<Step>,
}

impl LoosenedMPath {
    pub fn new(prefix: Vec<Step>, core: MPath, suffix: Vec<Step>) -> Result<Self, SkeinError> {
        if prefix.iter().chain(&suffix).any(|s| s.step_type() == 3) {
            return Err(SkeinError::TypeThreeInLoosening);
        }
        let l = LoosenedMPath { prefix, core, suffix };
        l.path().check()?;
        Ok(l)
    }

    pub fn bare(core: MPath) -> Self {
        LoosenedMPath { prefix: vec![], core, suffix: vec![] }
    }

    pub fn path(&self) -> MPath {
        let steps = self.prefix.iter().chain(&self.core.steps).chain(&self.suffix).cloned().collect();
        MPath { steps, closed: self.core.closed && self.prefix.is_empty() && self.suffix.is_empty() }
    }

    pub fn start(&self) -> &Anchor {
        &self.prefix.first().unwrap_or(&self.core.steps[0]).from
    }

    pub fn end(&self) -> &Anchor {
        &self.suffix.last().unwrap_or(&self.core.steps[self.core.steps.len() - 1]).to
    }

    pub fn reduced_matrix(&self) -> Result<Mat2, SkeinError> {
        Ok(self.path().matrix(true)?)
    }

    /// Signed count of the loosening steps across `tau`.
    pub fn signed_excess(&self, tau: &str) -> i64 {
        if self.core.closed {
            return 0;
        }
        let count = |steps: &[Step], plus: Dir| -> i64 {
            steps
                .iter()
                .map(|s| match &s.kind {
                    StepKind::Cross { tau: t, dir } if t.label == tau => {
                        if *dir == plus {
                            1
                        } else {
                            -1
                        }
                    }
                    _ => 0,
                })
                .sum()
        };
        count(&self.prefix, Dir::Ccw) + count(&self.suffix, Dir::Cw)
    }

    /// Unsigned count of the loosening steps across `tau`.
    pub fn loosening_crossings(&self, tau: &str) -> i64 {
        self.prefix.iter().chain(&self.suffix).filter(|s| matches!(&s.kind, StepKind::Cross { tau: t, .. } if t.label == tau)).count() as i64
    }
}

/// e(γ, τ): how often the curve crosses τ.
pub fn crossing_count(c: &CurveDescriptor, tau: &str) -> i64 {
    c.crossings.iter().filter(|s| s.split('#').next() == Some(tau)).count() as i64
}

/// ℓ(ρ̃, τ) = e(γ, τ) + signed excess.
pub fn signed_intersection(c: &CurveDescriptor, rho: &LoosenedMPath, tau: &str) -> i64 {
    crossing_count(c, tau) + rho.signed_excess(tau)
}

/// The intersection with the elementary lamination of τ, read off a loosened path
/// whose ends are V⁺ anchors on an unpunctured surface.
pub fn lamination_intersection_unpunctured(t: &IdealTriangulation, c: &CurveDescriptor, rho: &LoosenedMPath, tau: &str) -> Result<i64, SkeinError> {
    if !t.punctures.is_empty() {
        return Err(SkeinError::PuncturedSurface);
    }
    if !rho.core.closed {
        for a in [rho.start(), rho.end()] {
            if *a != v_plus(t, &a.end)? {
                return Err(SkeinError::BadDecomposition(format!("{a} is not a V+ anchor")));
            }
        }
    }
    Ok(crossing_count(c, tau) + rho.loosening_crossings(tau))
}

/// The clockwise-most anchor on the horocyclic segment at the boundary marked point of `end`:
/// the minus side of the boundary segment that ends there.
pub fn v_plus(t: &IdealTriangulation, end: &ArcEnd) -> Result<Anchor, SkeinError> {
    let m = t.marked_point(end).ok_or_else(|| SurfaceError::UnknownLabel(end.label.clone()))?;
    if matches!(m, MarkedPoint::Puncture(_)) {
        return Err(SkeinError::PuncturedSurface);
    }
    for b in &t.boundary {
        let o = t.occurrences(b)[0];
        let e = t.terminal_end(o);
        if t.marked_point(&e) == Some(m) {
            return Ok(Anchor { end: e, plus: false });
        }
    }
    Err(SkeinError::PuncturedSurface)
}

fn walk_dir(t: &IdealTriangulation, from: &Anchor, to: &Anchor, dir: Dir) -> Option<Vec<Step>> {
    let st = Steps { t };
    let limit = 4 * t.triangles.len() + 4;
    let mut at = from.clone();
    let mut out = Vec::new();
    while at != *to {
        if out.len() > limit {
            return None;
        }
        let cross_first = (dir == Dir::Cw) != at.plus;
        let s = if cross_first {
            if !t.is_arc(&at.end.label) {
                return None;
            }
            st.cross(at.end.clone(), dir)
        } else {
            let s = st.turn_from(&at);
            debug_assert!(matches!(s.kind, StepKind::Turn { dir: d, .. } if d == dir));
            s
        };
        at = s.to.clone();
        out.push(s);
    }
    Some(out)
}

/// Type-1/2 steps around one marked point from `from` to `to`, the shorter way.
pub fn walk_around(t: &IdealTriangulation, from: &Anchor, to: &Anchor) -> Result<Vec<Step>, SkeinError> {
    let a = walk_dir(t, from, to, Dir::Cw);
    let b = walk_dir(t, from, to, Dir::Ccw);
    match (a, b) {
        (Some(a), Some(b)) => Ok(if b.len() < a.len() { b } else { a }),
        (Some(a), None) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(SkeinError::NoWalk(from.to_string(), to.to_string())),
    }
}

/// Extends `core` by walks so it runs from `from` to `to`.
pub fn loosen(t: &IdealTriangulation, core: MPath, from: &Anchor, to: &Anchor) -> Result<LoosenedMPath, SkeinError> {
    let s = core.steps[0].from.clone();
    let e = core.steps[core.steps.len() - 1].to.clone();
    let prefix = walk_around(t, from, &s)?;
    let suffix = walk_around(t, &e, to)?;
    LoosenedMPath::new(prefix, core, suffix)
}

/// Loosens the standard path of an arc to V⁺ anchors at both ends.
pub fn anchored_at_v_plus(t: &IdealTriangulation, core: MPath) -> Result<LoosenedMPath, SkeinError> {
    let s = v_plus(t, &core.steps[0].from.end)?;
    let e = v_plus(t, &core.steps[core.steps.len() - 1].to.end)?;
    loosen(t, core, &s, &e)
}

// ---------------------------------------------------------------------------
// instances

/// Endpoints of the loosened paths in an arc-arc instance: α1 runs s1 → t1, α2 runs s2 → t2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcArcAnchors {
    pub s1: Anchor,
    pub t1: Anchor,
    pub s2: Anchor,
    pub t2: Anchor,
}

/// A crossing and its two smoothings. Orientations: γ1 ~ β1∘α2, γ2 ~ α1∘β1, β2 ~ α1∘β1∘α2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
#[allow(clippy::large_enum_variant)]
pub enum SkeinInstance {
    ArcArc {
        gamma1: CurveDescriptor,
        gamma2: CurveDescriptor,
        alpha1: CurveDescriptor,
        alpha2: CurveDescriptor,
        beta1: CurveDescriptor,
        beta2: CurveDescriptor,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        anchors: Option<ArcArcAnchors>,
    },
    /// γ2 is a loop; its path, started at step `loop_start`, is inserted into the path of
    /// γ1 before step `split` (α) or inserted backwards (β).
    WithLoop { gamma1: CurveDescriptor, gamma2: CurveDescriptor, alpha: CurveDescriptor, beta: CurveDescriptor, split: usize, loop_start: usize },
    /// The path of γ splits as ρ3∘ρ2∘ρ1 at steps `split[0]` and `split[1]`; ρ2 is the
    /// closed piece. α1 ~ ρ2, α2 ~ ρ3∘ρ1, β ~ ρ3∘ρ2⁻¹∘ρ1.
    SelfIntersection { gamma: CurveDescriptor, alpha1: CurveDescriptor, alpha2: CurveDescriptor, beta: CurveDescriptor, split: [usize; 2] },
}

impl SkeinInstance {
    pub fn variant(&self) -> &'static str {
        match self {
            SkeinInstance::ArcArc { .. } => "arc_arc",
            SkeinInstance::WithLoop { .. } => "with_loop",
            SkeinInstance::SelfIntersection { .. } => "self_intersection",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeinTerm {
    pub sign: i8,
    pub chi: LaurentPoly,
    pub coefficient: Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeinReport {
    pub variant: &'static str,
    pub lhs: LaurentPoly,
    pub terms: [SkeinTerm; 2],
    pub holds: bool,
    /// Coefficients from elementary-lamination crossings, when defined.
    pub lamination: Option<[Monomial; 2]>,
}

impl SkeinReport {
    pub fn signs_positive(&self) -> bool {
        self.terms.iter().all(|t| t.sign > 0)
    }

    pub fn lamination_agrees(&self) -> Option<bool> {
        self.lamination.as_ref().map(|l| l[0] == self.terms[0].coefficient && l[1] == self.terms[1].coefficient)
    }

    pub fn exponents_integral(&self) -> bool {
        self.terms.iter().all(|t| t.coefficient.is_integral())
    }
}

impl fmt::Display for SkeinReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variant: {}", self.variant)?;
        writeln!(f, "lhs: {}", self.lhs)?;
        for (i, t) in self.terms.iter().enumerate() {
            let c = LaurentPoly::from_monomial(t.coefficient.clone());
            writeln!(f, "term {}: sign {} coefficient {} chi {}", i + 1, if t.sign > 0 { '+' } else { '-' }, c, t.chi)?;
        }
        if let Some(l) = &self.lamination {
            let show = |m: &Monomial| LaurentPoly::from_monomial(m.clone()).to_text();
            writeln!(f, "lamination coefficients: {} , {}", show(&l[0]), show(&l[1]))?;
            writeln!(f, "lamination agrees: {}", self.lamination_agrees() == Some(true))?;
        }
        writeln!(f, "holds: {}", self.holds)
    }
}

fn same_up_to_sign(a: &Mat2, b: &Mat2) -> bool {
    a == b || *a == b.neg()
}

fn chi_of(t: &IdealTriangulation, c: &CurveDescriptor) -> Result<LaurentPoly, SkeinError> {
    Ok(t.expand(c, &ExpandOptions { keep_boundary: true, rel: 1 })?.x)
}

/// y^(n/2) over all arcs, from a vector of numerators.
fn y_monomial(t: &IdealTriangulation, n: &[i64]) -> Result<Monomial, SkeinError> {
    for (a, k) in t.arcs.iter().zip(n) {
        if k % 2 != 0 {
            return Err(SkeinError::NotAMonomialCoefficient(format!("y:{a}")));
        }
    }
    Ok(Monomial::from_doubled(t.arcs.iter().zip(n).map(|(a, &k)| (VarId::y(a.as_str()), k as i32))))
}

/// A curve together with the (possibly loosened) path used for it.
struct Piece<'a> {
    curve: &'a CurveDescriptor,
    path: Option<LoosenedMPath>,
}

impl Piece<'_> {
    fn ell(&self, tau: &str) -> i64 {
        match &self.path {
            Some(p) => signed_intersection(self.curve, p, tau),
            None => crossing_count(self.curve, tau),
        }
    }

    fn lam(&self, t: &IdealTriangulation, tau: &str) -> Result<i64, SkeinError> {
        match &self.path {
            Some(p) => lamination_intersection_unpunctured(t, self.curve, p, tau),
            None => Ok(crossing_count(self.curve, tau)),
        }
    }
}

/// Numerators Σℓ(plus) − Σℓ(minus) per arc.
fn exponents(t: &IdealTriangulation, plus: &[&Piece], minus: &[&Piece], lam: bool) -> Result<Vec<i64>, SkeinError> {
    t.arcs
        .iter()
        .map(|a| {
            let f = |p: &Piece| if lam { p.lam(t, a) } else { Ok(p.ell(a)) };
            let mut s = 0;
            for p in plus {
                s += f(p)?;
            }
            for p in minus {
                s -= f(p)?;
            }
            Ok(s)
        })
        .collect()
}

fn is_contractible_loop(c: &CurveDescriptor) -> bool {
    c.kind == CurveKind::ContractibleLoop
}

/// Reduced matrix of a loop's standard path, or the identity for a contractible loop.
fn loop_matrix(t: &IdealTriangulation, c: &CurveDescriptor) -> Result<Mat2, SkeinError> {
    if is_contractible_loop(c) {
        return Ok(Mat2::identity());
    }
    Ok(standard_mpath(t, c)?.matrix(true)?)
}

fn check_trace(name: &str, target: &Mat2, composed: &Mat2) -> Result<(), SkeinError> {
    let (a, b) = (target.trace(), composed.trace());
    if a == b || a == -&b {
        Ok(())
    } else {
        Err(SkeinError::IsotopyMismatch(name.to_string()))
    }
}

fn check_mat(name: &str, target: &Mat2, composed: &Mat2) -> Result<(), SkeinError> {
    if same_up_to_sign(target, composed) {
        Ok(())
    } else {
        Err(SkeinError::IsotopyMismatch(name.to_string()))
    }
}

/// Standard path of an arc, loosened to V⁺ anchors when the surface has no punctures.
fn arc_path(t: &IdealTriangulation, c: &CurveDescriptor) -> Result<LoosenedMPath, SkeinError> {
    let core = standard_mpath(t, c)?;
    if t.punctures.is_empty() {
        anchored_at_v_plus(t, core)
    } else {
        Ok(LoosenedMPath::bare(core))
    }
}

fn sub_path(steps: &[Step]) -> MPath {
    MPath { steps: steps.to_vec(), closed: false }
}

fn path_matrix(steps: &[Step]) -> Result<Mat2, SkeinError> {
    Ok(sub_path(steps).matrix(true)?)
}

/// Verifies the isotopy relations of an instance and the resulting identity.
pub fn verify_skein(t: &IdealTriangulation, inst: &SkeinInstance) -> Result<SkeinReport, SkeinError> {
    if !t.self_folded.is_empty() {
        return Err(SkeinError::SelfFoldedUnsupported);
    }
    let lam_ok = t.punctures.is_empty();
    let (lhs, chis, exps, lams) = match inst {
        SkeinInstance::ArcArc { gamma1, gamma2, alpha1, alpha2, beta1, beta2, anchors } => {
            let std = |c: &CurveDescriptor| -> Result<MPath, SkeinError> { Ok(standard_mpath(t, c)?) };
            let (ra1, ra2) = (std(alpha1)?, std(alpha2)?);
            let a = match anchors {
                Some(a) => a.clone(),
                None if lam_ok => ArcArcAnchors {
                    s1: v_plus(t, &ra1.steps[0].from.end)?,
                    t1: v_plus(t, &ra1.steps[ra1.steps.len() - 1].to.end)?,
                    s2: v_plus(t, &ra2.steps[0].from.end)?,
                    t2: v_plus(t, &ra2.steps[ra2.steps.len() - 1].to.end)?,
                },
                None => ArcArcAnchors {
                    s1: ra1.steps[0].from.clone(),
                    t1: ra1.steps[ra1.steps.len() - 1].to.clone(),
                    s2: ra2.steps[0].from.clone(),
                    t2: ra2.steps[ra2.steps.len() - 1].to.clone(),
                },
            };
            let at_v_plus = [&a.s1, &a.t1, &a.s2, &a.t2].into_iter().all(|x| lam_ok && v_plus(t, &x.end).ok().as_ref() == Some(x));
            let la1 = loosen(t, ra1, &a.s1, &a.t1)?;
            let la2 = loosen(t, ra2, &a.s2, &a.t2)?;
            let lb1 = loosen(t, std(beta1)?, &a.t2, &a.s1)?;
            let lg1 = loosen(t, std(gamma1)?, &a.s2, &a.s1)?;
            let lg2 = loosen(t, std(gamma2)?, &a.t2, &a.t1)?;
            let lb2 = loosen(t, std(beta2)?, &a.s2, &a.t1)?;
            let (m1, m2, m3) = (lb1.reduced_matrix()?, la1.reduced_matrix()?, la2.reduced_matrix()?);
            check_mat("gamma1 ~ beta1 . alpha2", &lg1.reduced_matrix()?, &m1.mul(&m3))?;
            check_mat("gamma2 ~ alpha1 . beta1", &lg2.reduced_matrix()?, &m2.mul(&m1))?;
            check_mat("beta2 ~ alpha1 . beta1 . alpha2", &lb2.reduced_matrix()?, &m2.mul(&m1).mul(&m3))?;
            let pieces = [(gamma1, lg1), (gamma2, lg2), (alpha1, la1), (alpha2, la2), (beta1, lb1), (beta2, lb2)];
            let p: Vec<Piece> = pieces.iter().map(|(c, l)| Piece { curve: c, path: Some(l.clone()) }).collect();
            let lhs = &chi_of(t, gamma1)? * &chi_of(t, gamma2)?;
            let chis = [&chi_of(t, alpha1)? * &chi_of(t, alpha2)?, &chi_of(t, beta1)? * &chi_of(t, beta2)?];
            let ex = |lam| -> Result<[Vec<i64>; 2], SkeinError> {
                Ok([exponents(t, &[&p[0], &p[1]], &[&p[2], &p[3]], lam)?, exponents(t, &[&p[0], &p[1]], &[&p[4], &p[5]], lam)?])
            };
            (lhs, chis, ex(false)?, if at_v_plus { Some(ex(true)?) } else { None })
        }
        SkeinInstance::WithLoop { gamma1, gamma2, alpha, beta, split, loop_start } => {
            let lp = crate::mpath::adjust::rotate(&standard_mpath(t, gamma2)?, *loop_start);
            let m1 = lp.matrix(true)?;
            let start = &lp.steps[0].from;
            let g1_loop = gamma1.kind == CurveKind::Loop;
            let g1 = if g1_loop { LoosenedMPath::bare(standard_mpath(t, gamma1)?) } else { arc_path(t, gamma1)? };
            let steps = g1.path().steps;
            let (rho1, rho2): (Vec<Step>, Vec<Step>) = if g1_loop {
                if *split >= steps.len() {
                    return Err(SkeinError::BadDecomposition(format!("split {split} out of range")));
                }
                let r = crate::mpath::adjust::rotate(&g1.path(), *split).steps;
                (r, vec![])
            } else {
                let k = *split + g1.prefix.len();
                if k == 0 || k >= steps.len() {
                    return Err(SkeinError::BadDecomposition(format!("split {split} out of range")));
                }
                (steps[..k].to_vec(), steps[k..].to_vec())
            };
            let meet = if g1_loop { rho1.first().map(|s| &s.from) } else { rho1.last().map(|s| &s.to) };
            if meet != Some(start) {
                return Err(SkeinError::BadDecomposition("the loop path does not pass through the split point".into()));
            }
            let m2 = path_matrix(&rho1)?;
            let m3 = if rho2.is_empty() { Mat2::identity() } else { path_matrix(&rho2)? };
            let m1i = m1.inverse_det1().map_err(|e| SkeinError::BadDecomposition(e.to_string()))?;
            let pa = Piece { curve: alpha, path: None };
            let pb = Piece { curve: beta, path: None };
            let (pa, pb) = if g1_loop {
                check_trace("alpha ~ gamma1 . gamma2", &loop_matrix(t, alpha)?, &m1.mul(&m2))?;
                check_trace("beta ~ gamma1 . gamma2^-1", &loop_matrix(t, beta)?, &m1i.mul(&m2))?;
                (pa, pb)
            } else {
                let (s, e) = (g1.start().clone(), g1.end().clone());
                let la = loosen(t, standard_mpath(t, alpha)?, &s, &e)?;
                let lb = loosen(t, standard_mpath(t, beta)?, &s, &e)?;
                check_mat("alpha ~ rho2 . gamma2 . rho1", &la.reduced_matrix()?, &m3.mul(&m1).mul(&m2))?;
                check_mat("beta ~ rho2 . gamma2^-1 . rho1", &lb.reduced_matrix()?, &m3.mul(&m1i).mul(&m2))?;
                (Piece { path: Some(la), ..pa }, Piece { path: Some(lb), ..pb })
            };
            let pg1 = Piece { curve: gamma1, path: if g1_loop { None } else { Some(g1) } };
            let pg2 = Piece { curve: gamma2, path: None };
            let lhs = &chi_of(t, gamma1)? * &chi_of(t, gamma2)?;
            let chis = [chi_of(t, alpha)?, chi_of(t, beta)?];
            let ex = |lam| -> Result<[Vec<i64>; 2], SkeinError> {
                Ok([exponents(t, &[&pg1, &pg2], &[&pa], lam)?, exponents(t, &[&pg1, &pg2], &[&pb], lam)?])
            };
            (lhs, chis, ex(false)?, if lam_ok { Some(ex(true)?) } else { None })
        }
        SkeinInstance::SelfIntersection { gamma, alpha1, alpha2, beta, split } => {
            let is_loop = gamma.kind == CurveKind::Loop;
            let g = if is_loop { LoosenedMPath::bare(standard_mpath(t, gamma)?) } else { arc_path(t, gamma)? };
            let steps = g.path().steps;
            let off = g.prefix.len();
            let (i, j) = (split[0] + off, split[1] + off);
            if !(i < j && j <= steps.len()) || (is_loop && j != steps.len()) {
                return Err(SkeinError::BadDecomposition(format!("split {split:?} out of range")));
            }
            let (r1, r2, r3) = (&steps[..i], &steps[i..j], &steps[j..]);
            if r2[0].from != r2[r2.len() - 1].to {
                return Err(SkeinError::BadDecomposition("middle piece is not closed".into()));
            }
            let id = Mat2::identity();
            let m = |s: &[Step]| if s.is_empty() { Ok(id.clone()) } else { path_matrix(s) };
            let (m1, m2, m3) = (m(r2)?, m(r1)?, m(r3)?);
            let m1i = m1.inverse_det1().map_err(|e| SkeinError::BadDecomposition(e.to_string()))?;
            check_trace("alpha1 ~ rho2", &loop_matrix(t, alpha1)?, &m1)?;
            let (pa2, pb) = if is_loop {
                check_trace("alpha2 ~ rho1", &loop_matrix(t, alpha2)?, &m2)?;
                check_trace("beta ~ rho2^-1 . rho1", &loop_matrix(t, beta)?, &m1i.mul(&m2))?;
                (Piece { curve: alpha2, path: None }, Piece { curve: beta, path: None })
            } else {
                let (s, e) = (g.start().clone(), g.end().clone());
                let la2 = loosen(t, standard_mpath(t, alpha2)?, &s, &e)?;
                let lb = loosen(t, standard_mpath(t, beta)?, &s, &e)?;
                check_mat("alpha2 ~ rho3 . rho1", &la2.reduced_matrix()?, &m3.mul(&m2))?;
                check_mat("beta ~ rho3 . rho2^-1 . rho1", &lb.reduced_matrix()?, &m3.mul(&m1i).mul(&m2))?;
                (Piece { curve: alpha2, path: Some(la2) }, Piece { curve: beta, path: Some(lb) })
            };
            let pa1 = Piece { curve: alpha1, path: None };
            let pg = Piece { curve: gamma, path: if is_loop { None } else { Some(g) } };
            let lhs = chi_of(t, gamma)?;
            let chis = [&chi_of(t, alpha1)? * &chi_of(t, alpha2)?, chi_of(t, beta)?];
            let ex =
                |lam| -> Result<[Vec<i64>; 2], SkeinError> { Ok([exponents(t, &[&pg], &[&pa1, &pa2], lam)?, exponents(t, &[&pg], &[&pb], lam)?]) };
            (lhs, chis, ex(false)?, if lam_ok { Some(ex(true)?) } else { None })
        }
    };
    let coeffs = [y_monomial(t, &exps[0])?, y_monomial(t, &exps[1])?];
    let lamination = match lams {
        Some(l) => Some([y_monomial(t, &l[0])?, y_monomial(t, &l[1])?]),
        None => None,
    };
    let term = |i: usize| chis[i].scale_monomial(&coeffs[i]);
    let (u, v) = (term(0), term(1));
    let mut chosen = None;
    for (s0, s1) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
        let pick = |s: i8, p: &LaurentPoly| if s > 0 { p.clone() } else { -p };
        if &pick(s0, &u) + &pick(s1, &v) == lhs {
            chosen = Some((s0, s1));
            break;
        }
    }
    let (s0, s1) = chosen.unwrap_or((1, 1));
    let [c0, c1] = coeffs;
    let [x0, x1] = chis;
    Ok(SkeinReport {
        variant: inst.variant(),
        lhs,
        terms: [SkeinTerm { sign: s0, chi: x0, coefficient: c0 }, SkeinTerm { sign: s1, chi: x1, coefficient: c1 }],
        holds: chosen.is_some(),
        lamination,
    })
}

/// The kink relation: a curve with one more kink expands to (−2)·χ + χ = −χ.
pub fn verify_kink(t: &IdealTriangulation, c: &CurveDescriptor) -> Result<bool, SkeinError> {
    let plain = chi_of(t, c)?;
    let kinked = chi_of(t, &c.clone().with_kinks(c.kinks + 1))?;
    let contractible = chi_of(t, &CurveDescriptor { kind: CurveKind::ContractibleLoop, ..CurveDescriptor::closed_loop(&[], 0) })?;
    Ok(kinked == &(&contractible * &plain) + &plain)
}

/// Ready-made instances on polygons and annuli.
pub mod instances {
    use super::*;
    use crate::generate::{annulus_core_loop, polygon_chord};
    use crate::surface::Route;

    /// Arc-arc instance for four vertices in counterclockwise order s2, t2, s1, t1 of an n-gon.
    pub fn polygon_arc_arc(t: &IdealTriangulation, n: usize, [s2, t2, s1, t1]: [usize; 4]) -> SkeinInstance {
        let c = |u, v| polygon_chord(t, n, u, v);
        SkeinInstance::ArcArc {
            gamma1: c(s2, s1),
            gamma2: c(t2, t1),
            alpha1: c(s1, t1),
            alpha2: c(s2, t2),
            beta1: c(t2, s1),
            beta2: c(s2, t1),
            anchors: None,
        }
    }

    /// The square with one diagonal: the two diagonals and their smoothings into sides.
    pub fn ptolemy_square() -> (IdealTriangulation, SkeinInstance) {
        let t = crate::surface::fixtures::polygon(4);
        let inst = polygon_arc_arc(&t, 4, [0, 1, 2, 3]);
        (t, inst)
    }

    fn labels(c: &[String]) -> Vec<&str> {
        c.iter().map(String::as_str).collect()
    }

    /// Cancels a crossing immediately followed by the same crossing back.
    fn free_reduce(word: Vec<String>) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for w in word {
            if out.last() == Some(&w) {
                out.pop();
            } else {
                out.push(w);
            }
        }
        out
    }

    fn crossing_labels(t: &IdealTriangulation, r: &Route) -> Vec<String> {
        r.crossings.iter().map(|c| t.side(c.exit).to_string()).collect()
    }

    /// Step indices at which each crossing's type-2 step starts.
    fn cross_steps(p: &MPath) -> Vec<usize> {
        (0..p.steps.len()).filter(|&i| p.steps[i].step_type() == 2).collect()
    }

    /// An arc of an annulus from [`crate::generate::random_annulus`] against the core
    /// loop, split at the first crossing where the two standard paths meet.
    pub fn annulus_arc_loop(t: &IdealTriangulation, arc: &CurveDescriptor) -> Option<SkeinInstance> {
        let lp_desc = annulus_core_loop(t);
        let lp = standard_mpath(t, &lp_desc).ok()?;
        let lr = t.route(&lp_desc).ok()?;
        let lw = crossing_labels(t, &lr);
        let ap = standard_mpath(t, arc).ok()?;
        let ar = t.route(arc).ok()?;
        let aw = crossing_labels(t, &ar);
        let lsteps = cross_steps(&lp);
        for (j, &i) in cross_steps(&ap).iter().enumerate() {
            let Some(k) = lsteps.iter().position(|&s| lp.steps[s].from == ap.steps[i].from) else { continue };
            let lap: Vec<String> = lw[k..].iter().chain(&lw[..k]).cloned().collect();
            let back: Vec<String> = lw[..k].iter().rev().chain(lw[k..].iter().rev()).cloned().collect();
            let make = |mid: &[String]| -> Option<CurveDescriptor> {
                let w = free_reduce(aw[..j].iter().chain(mid).chain(&aw[j..]).cloned().collect());
                // cancelling into the first or last crossing would move an endpoint corner
                let kept = |a: &[String], b: &[String]| a.len() <= b.len() && a.iter().zip(b).all(|(x, y)| x == y);
                let (wr, ar): (Vec<String>, Vec<String>) = (w.iter().rev().cloned().collect(), aw.iter().rev().cloned().collect());
                if w.is_empty() || !kept(&aw[..j.min(1)], &w) || !kept(&ar[..(aw.len() - j).min(1)], &wr) {
                    return None;
                }
                Some(CurveDescriptor::arc(&labels(&w), arc.start_triangle?, arc.end_triangle?))
            };
            let (Some(alpha), Some(beta)) = (make(&lap), make(&back)) else { continue };
            return Some(SkeinInstance::WithLoop { gamma1: arc.clone(), gamma2: lp_desc.clone(), alpha, beta, split: i, loop_start: lsteps[k] });
        }
        None
    }

    /// Two copies of the core loop crossing each other.
    pub fn annulus_loop_loop(t: &IdealTriangulation) -> SkeinInstance {
        let c = annulus_core_loop(t);
        let twice: Vec<String> = c.crossings.iter().chain(&c.crossings).cloned().collect();
        SkeinInstance::WithLoop {
            gamma1: c.clone(),
            gamma2: c.clone(),
            alpha: CurveDescriptor::closed_loop(&labels(&twice), c.basepoint_triangle.unwrap_or(0)),
            beta: CurveDescriptor { kind: CurveKind::ContractibleLoop, ..CurveDescriptor::closed_loop(&[], 0) },
            split: 0,
            loop_start: 0,
        }
    }

    /// The core loop traversed twice, resolved at its self-intersection.
    pub fn annulus_double_loop(t: &IdealTriangulation) -> SkeinInstance {
        let c = annulus_core_loop(t);
        let twice: Vec<String> = c.crossings.iter().chain(&c.crossings).cloned().collect();
        let gamma = CurveDescriptor::closed_loop(&labels(&twice), c.basepoint_triangle.unwrap_or(0));
        let n = standard_mpath(t, &gamma).map(|p| p.steps.len()).unwrap_or(0);
        SkeinInstance::SelfIntersection {
            gamma,
            alpha1: c.clone(),
            alpha2: c.clone(),
            beta: CurveDescriptor { kind: CurveKind::ContractibleLoop, ..CurveDescriptor::closed_loop(&[], 0) },
            split: [n / 2, n],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::instances::*;
    use super::*;
    use crate::generate::{polygon_side_ends, random_annulus, random_polygon, random_walk_arc};
    use crate::mpath::ChiVariant;

    #[test]
    fn identities_hold() {
        assert_eq!(check_matrix_identities(100, 1).unwrap(), 100);
    }

    #[test]
    fn trivial_identities() {
        let i = Mat2::identity();
        let m = Mat2::from_ints(2, 3, 5, 7);
        check_identities_on(&i, &m, &m).unwrap();
        check_identities_on(&i, &i, &i).unwrap();
    }

    #[test]
    fn ptolemy() {
        let (t, inst) = ptolemy_square();
        let r = verify_skein(&t, &inst).unwrap();
        assert!(r.holds, "{r}");
        assert!(r.exponents_integral());
        assert_eq!(r.lamination_agrees(), Some(true));
    }

    /// Crossing number of the chord u-v with the chord between points just clockwise of i and j.
    fn chord_vs_lamination(n: usize, (u, v): (usize, usize), (i, j): (usize, usize)) -> i64 {
        // positions doubled; the lamination ends sit at 2i-1 and 2j-1
        let inside = |x: usize| {
            let (a, b) = (2 * u, 2 * v);
            let (lo, hi) = (a.min(b), a.max(b));
            lo < x && x < hi
        };
        let (p, q) = ((2 * i + 2 * n - 1) % (2 * n), (2 * j + 2 * n - 1) % (2 * n));
        (inside(p) != inside(q)) as i64
    }

    #[test]
    fn polygon_instances_match_laminations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut count = 0;
        for trial in 0..24 {
            let n = 4 + trial % 6;
            let t = random_polygon(n, &mut rng);
            let mut vs: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(vs.as_mut_slice(), &mut rng);
            let mut q: Vec<usize> = vs[..4].to_vec();
            q.sort_unstable();
            let rot = rng.gen_range(0..4);
            q.rotate_left(rot);
            let inst = polygon_arc_arc(&t, n, [q[0], q[1], q[2], q[3]]);
            let r = verify_skein(&t, &inst).unwrap();
            assert!(r.holds, "{r}");
            assert!(r.signs_positive());
            assert_eq!(r.lamination_agrees(), Some(true), "{r}");
            // geometric oracle for e(γ, L_τ)
            let SkeinInstance::ArcArc { gamma1, .. } = &inst else { unreachable!() };
            let p = arc_path(&t, gamma1).unwrap();
            for a in &t.arcs {
                let ends = polygon_side_ends(a, n).unwrap();
                let geo = chord_vs_lamination(n, (q[0], q[2]), ends);
                assert_eq!(lamination_intersection_unpunctured(&t, gamma1, &p, a).unwrap(), geo, "{a}");
                assert_eq!(signed_intersection(gamma1, &p, a), geo);
            }
            count += 1;
        }
        assert!(count >= 20);
    }

    /// Every anchor at the marked point of `e`.
    fn anchors_at(t: &IdealTriangulation, e: &ArcEnd) -> Vec<Anchor> {
        let m = t.marked_point(e).cloned();
        let mut out = Vec::new();
        for tri in 0..t.triangles.len() {
            for k in 0..3 {
                for (end, plus) in [(t.initial_end((tri, k)), true), (t.terminal_end((tri, k)), false)] {
                    let a = Anchor { end, plus };
                    if t.marked_point(&a.end).cloned() == m && !out.contains(&a) {
                        out.push(a);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn coefficients_independent_of_anchors() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut compared = 0;
        for trial in 0..16 {
            let n = 4 + trial % 5;
            let t = random_polygon(n, &mut rng);
            let mut vs: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(vs.as_mut_slice(), &mut rng);
            let mut q: Vec<usize> = vs[..4].to_vec();
            q.sort_unstable();
            let inst = polygon_arc_arc(&t, n, [q[0], q[1], q[2], q[3]]);
            let base = verify_skein(&t, &inst).unwrap();
            let SkeinInstance::ArcArc { gamma1, gamma2, alpha1, alpha2, beta1, beta2, .. } = inst else { unreachable!() };
            let (p1, p2) = (standard_mpath(&t, &alpha1).unwrap(), standard_mpath(&t, &alpha2).unwrap());
            let ends = [&p1.steps[0].from.end, &p1.steps[p1.steps.len() - 1].to.end, &p2.steps[0].from.end, &p2.steps[p2.steps.len() - 1].to.end];
            let choices: Vec<Vec<Anchor>> = ends.iter().map(|e| anchors_at(&t, e)).collect();
            for _ in 0..6 {
                let pick = |k: usize, rng: &mut ChaCha8Rng| choices[k][rng.gen_range(0..choices[k].len())].clone();
                let anchors = ArcArcAnchors { s1: pick(0, &mut rng), t1: pick(1, &mut rng), s2: pick(2, &mut rng), t2: pick(3, &mut rng) };
                let alt = SkeinInstance::ArcArc {
                    gamma1: gamma1.clone(),
                    gamma2: gamma2.clone(),
                    alpha1: alpha1.clone(),
                    alpha2: alpha2.clone(),
                    beta1: beta1.clone(),
                    beta2: beta2.clone(),
                    anchors: Some(anchors),
                };
                let r = verify_skein(&t, &alt).unwrap();
                assert!(r.holds, "{r}");
                for k in 0..2 {
                    assert_eq!(r.terms[k].coefficient, base.terms[k].coefficient, "{r}");
                    assert_eq!(r.terms[k].sign, base.terms[k].sign);
                }
                compared += 1;
            }
        }
        assert_eq!(compared, 96);
    }

    #[test]
    fn annulus_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut found = 0;
        for trial in 0..12 {
            let t = random_annulus(1 + trial % 3, 1 + (trial / 3) % 3, &mut rng);
            for inst in [annulus_loop_loop(&t), annulus_double_loop(&t)] {
                let r = verify_skein(&t, &inst).unwrap();
                assert!(r.holds, "{r}");
                assert!(r.terms.iter().all(|k| k.sign > 0 || k.chi == LaurentPoly::constant(-2)), "{r}");
                assert_eq!(r.lamination_agrees(), Some(true));
            }
            for _ in 0..10 {
                let a = random_walk_arc(&t, 6, &mut rng).unwrap();
                if let Some(inst) = annulus_arc_loop(&t, &a) {
                    let r = verify_skein(&t, &inst).unwrap();
                    assert!(r.holds, "{r}");
                    assert!(r.terms.iter().all(|k| k.sign > 0 || k.chi == LaurentPoly::constant(-2)), "{r}");
                    assert!(r.exponents_integral());
                    assert_eq!(r.lamination_agrees(), Some(true), "{r}");
                    found += 1;
                }
            }
        }
        assert!(found >= 5, "{found}");
    }

    #[test]
    fn excess_examples() {
        let t = crate::surface::fixtures::annulus();
        let c = crate::surface::fixtures::annulus_loop();
        let p = LoosenedMPath::bare(standard_mpath(&t, &c).unwrap());
        for a in &t.arcs {
            assert_eq!(p.signed_excess(a), 0);
        }
        let st = Steps { t: &t };
        let e = ArcEnd { label: "2".into(), end: 0 };
        let ccw = st.cross(e.clone(), Dir::Ccw);
        let core = MPath { steps: vec![st.turn_from(&ccw.to)], closed: false };
        let l = LoosenedMPath::new(vec![ccw], core, vec![]).unwrap();
        assert_eq!(l.signed_excess("2"), 1);
        assert_eq!(l.signed_excess("1"), 0);
    }

    #[test]
    fn loosened_matrix_lemma() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..20 {
            let t = random_polygon(5 + i % 4, &mut rng);
            let c = random_walk_arc(&t, 5, &mut rng).unwrap();
            let l = arc_path(&t, &c).unwrap();
            let bar = crate::mpath::chi(&t, &c, ChiVariant::Bar).unwrap();
            let ex: Vec<i64> = t.arcs.iter().map(|a| -l.signed_excess(a)).collect();
            let m = Monomial::from_doubled(t.arcs.iter().zip(&ex).map(|(a, &k)| (VarId::curly(a.as_str()), k as i32)));
            let got = crate::mpath::positive_part(l.reduced_matrix().unwrap().ur().clone()).unwrap();
            assert_eq!(got, bar.scale_monomial(&m));
            for a in &t.arcs {
                assert!(l.signed_excess(a) >= 0);
                assert_eq!((signed_intersection(&c, &l, a) - crossing_count(&c, a) - l.loosening_crossings(a)) % 2, 0);
            }
        }
    }

    #[test]
    fn kink() {
        let t = crate::surface::fixtures::annulus();
        assert!(verify_kink(&t, &crate::surface::fixtures::annulus_loop()).unwrap());
    }

    #[test]
    fn self_folded_rejected() {
        let t = crate::surface::fixtures::folded_digon();
        let (a, b) = crate::surface::fixtures::folded_arcs();
        let inst = SkeinInstance::WithLoop { gamma1: a.clone(), gamma2: b.clone(), alpha: a, beta: b, split: 0, loop_start: 0 };
        assert_eq!(verify_skein(&t, &inst), Err(SkeinError::SelfFoldedUnsupported));
    }
}
