//! Elementary steps, M-paths and their matrices.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{LaurentPoly, Mat2, Monomial, VarId, VarKind};
use crate::surface::{ArcEnd, CurveDescriptor, CurveKind, IdealTriangulation, Occ, Route, SurfaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("step {0} does not start where step {1} ends")]
    NotComposable(usize, usize),
    #[error("closed path does not return to its start")]
    NotClosed,
    #[error("coefficients of the invariant have mixed signs: {0}")]
    MixedSigns(String),
    #[error("no standard path for this curve kind")]
    NoStandardPath,
    #[error("curve has contractible kinks; remove them first")]
    Kinked,
    #[error("adjustment does not apply at step {0}")]
    NotApplicable(usize),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Cw,
    Ccw,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Cw => Dir::Ccw,
            Dir::Ccw => Dir::Cw,
        }
    }
    fn word(self) -> &'static str {
        match self {
            Dir::Cw => "cw",
            Dir::Ccw => "ccw",
        }
    }
}

/// The point v^± next to an arc end on the small circle around its marked point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Anchor {
    pub end: ArcEnd,
    pub plus: bool,
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}({}.{})", if self.plus { '+' } else { '-' }, self.end.label, self.end.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    /// Type 1: around a corner from `from_side` to `to_side`, third side `sigma`.
    Turn { corner: Occ, from_side: VarId, to_side: VarId, sigma: VarId, dir: Dir },
    /// Type 2: across `tau` near one of its ends.
    Cross { tau: VarId, dir: Dir },
    /// Type 3: alongside `tau`; `positive` when `tau` lies beneath the step.
    Slide { tau: VarId, positive: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub from: Anchor,
    pub to: Anchor,
}

impl Step {
    pub fn step_type(&self) -> u8 {
        match self.kind {
            StepKind::Turn { .. } => 1,
            StepKind::Cross { .. } => 2,
            StepKind::Slide { .. } => 3,
        }
    }

    pub fn inverse(&self) -> Step {
        let kind = match &self.kind {
            StepKind::Turn { corner, from_side, to_side, sigma, dir } => {
                StepKind::Turn { corner: *corner, from_side: to_side.clone(), to_side: from_side.clone(), sigma: sigma.clone(), dir: dir.flip() }
            }
            StepKind::Cross { tau, dir } => StepKind::Cross { tau: tau.clone(), dir: dir.flip() },
            StepKind::Slide { tau, positive } => StepKind::Slide { tau: tau.clone(), positive: !positive },
        };
        Step { kind, from: self.to.clone(), to: self.from.clone() }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StepKind::Turn { from_side, to_side, sigma, dir, .. } => {
                write!(f, "1 {} {} {} {}", from_side.label, to_side.label, sigma.label, dir.word())
            }
            StepKind::Cross { tau, dir } => write!(f, "2 {} {}", tau.label, dir.word()),
            StepKind::Slide { tau, positive } => write!(f, "3 {} {}", tau.label, if *positive { '+' } else { '-' }),
        }?;
        write!(f, "  {} -> {}", self.from, self.to)
    }
}

fn xm(v: &VarId) -> Monomial {
    Monomial::var(v.clone())
}

/// Matrix of one elementary step.
pub fn step_matrix(s: &StepKind, reduced: bool) -> Mat2 {
    let one = LaurentPoly::one;
    let zero = LaurentPoly::zero;
    match s {
        StepKind::Turn { from_side, to_side, sigma, dir, .. } => {
            let c = LaurentPoly::from_monomial(xm(sigma).div(&xm(from_side).mul(&xm(to_side))));
            let c = if *dir == Dir::Cw { c } else { -&c };
            Mat2::new(one(), zero(), c, one())
        }
        StepKind::Cross { tau, dir } => {
            let y = VarId::curly(tau.label.as_str());
            let (p, q) = if reduced { (Monomial::var_half(y.clone(), -1), Monomial::var_half(y, 1)) } else { (Monomial::one(), Monomial::var(y)) };
            let (p, q) = if *dir == Dir::Cw { (p, q) } else { (q, p) };
            Mat2::new(LaurentPoly::from_monomial(p), zero(), zero(), LaurentPoly::from_monomial(q))
        }
        StepKind::Slide { tau, positive } => {
            let x = LaurentPoly::from_monomial(xm(tau));
            let xi = LaurentPoly::from_monomial(xm(tau).inverse());
            if *positive {
                Mat2::new(zero(), x, -&xi, zero())
            } else {
                Mat2::new(zero(), -&x, xi, zero())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPath {
    pub steps: Vec<Step>,
    pub closed: bool,
}

impl MPath {
    pub fn check(&self) -> Result<(), PathError> {
        for i in 1..self.steps.len() {
            if self.steps[i].from != self.steps[i - 1].to {
                return Err(PathError::NotComposable(i, i - 1));
            }
        }
        if self.closed {
            if let (Some(f), Some(l)) = (self.steps.first(), self.steps.last()) {
                if f.from != l.to {
                    return Err(PathError::NotClosed);
                }
            }
        }
        Ok(())
    }

    /// M(ρ_t)···M(ρ_1).
    pub fn matrix(&self, reduced: bool) -> Result<Mat2, PathError> {
        self.check()?;
        Ok(self.steps.iter().fold(Mat2::identity(), |acc, s| step_matrix(&s.kind, reduced).mul(&acc)))
    }

    pub fn inverse(&self) -> MPath {
        MPath { steps: self.steps.iter().rev().map(Step::inverse).collect(), closed: self.closed }
    }

    pub fn then(&self, other: &MPath) -> MPath {
        MPath { steps: self.steps.iter().chain(&other.steps).cloned().collect(), closed: false }
    }

    /// One line per step.
    pub fn trace_dump(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }
}

/// Step builders tied to a triangulation.
pub struct Steps<'a> {
    pub t: &'a IdealTriangulation,
}

impl<'a> Steps<'a> {
    fn side(&self, o: Occ) -> VarId {
        self.t.var(self.t.side(o))
    }

    /// Type 1 at corner c of a triangle (between sides c and c+1). Clockwise goes from
    /// side c+1 to side c.
    pub fn turn(&self, tri: usize, c: usize, dir: Dir) -> Step {
        let (s0, s1, s2) = ((tri, c % 3), (tri, (c + 1) % 3), (tri, (c + 2) % 3));
        let a_plus = Anchor { end: self.t.initial_end(s1), plus: true };
        let a_minus = Anchor { end: self.t.terminal_end(s0), plus: false };
        let (from_side, to_side, from, to) = match dir {
            Dir::Cw => (self.side(s1), self.side(s0), a_plus, a_minus),
            Dir::Ccw => (self.side(s0), self.side(s1), a_minus, a_plus),
        };
        Step { kind: StepKind::Turn { corner: (tri, c % 3), from_side, to_side, sigma: self.side(s2), dir }, from, to }
    }

    /// Type 2 across the arc at one of its ends.
    pub fn cross(&self, end: ArcEnd, dir: Dir) -> Step {
        let tau = VarId::x(end.label.as_str());
        let (from, to) = match dir {
            Dir::Cw => (false, true),
            Dir::Ccw => (true, false),
        };
        Step { kind: StepKind::Cross { tau, dir }, from: Anchor { end: end.clone(), plus: from }, to: Anchor { end, plus: to } }
    }

    /// Type 3 from one end of a side to the other.
    pub fn slide(&self, from: Anchor, positive: bool) -> Step {
        let tau = self.t.var(&from.end.label);
        let to = Anchor { end: ArcEnd { label: from.end.label.clone(), end: 1 - from.end.end }, plus: !from.plus };
        Step { kind: StepKind::Slide { tau, positive }, from, to }
    }

    /// Steps from just before crossing j of the route to just before crossing j+1.
    fn transition(&self, r: &Route, j: usize, out: &mut Vec<Step>) {
        let n = r.d();
        let cr = r.crossings[j];
        out.push(self.cross(self.t.terminal_end(cr.exit), Dir::Cw));
        let (tri, e) = cr.entry;
        if r.closed || j + 1 < n {
            let x = r.crossings[(j + 1) % n].exit.1;
            if r.turn_is_ccw(j) {
                out.push(self.turn(tri, x, Dir::Cw));
            } else {
                let g = (e + 2) % 3;
                out.push(self.turn(tri, g, Dir::Cw));
                out.push(self.slide(Anchor { end: self.t.terminal_end((tri, g)), plus: false }, true));
                out.push(self.turn(tri, x, Dir::Cw));
            }
        } else {
            let z = (e + 2) % 3;
            out.push(self.turn(tri, z, Dir::Cw));
            out.push(self.slide(Anchor { end: self.t.terminal_end((tri, z)), plus: false }, true));
        }
    }

    pub fn standard_path(&self, r: &Route) -> MPath {
        let mut steps = Vec::new();
        if !r.closed {
            let (t0, k0) = r.crossings[0].exit;
            let a = (t0, (k0 + 1) % 3);
            steps.push(self.slide(Anchor { end: self.t.terminal_end(a), plus: false }, true));
            steps.push(self.turn(t0, k0, Dir::Cw));
        }
        for j in 0..r.d() {
            self.transition(r, j, &mut steps);
        }
        MPath { steps, closed: r.closed }
    }

    /// A type-1 step ending at `a` without crossing anything.
    pub fn turn_into(&self, a: &Anchor) -> Step {
        for (tri, sides) in self.t.triangles.iter().enumerate() {
            for k in 0..sides.len() {
                if a.plus && self.t.initial_end((tri, k)) == a.end {
                    return self.turn(tri, (k + 2) % 3, Dir::Ccw);
                }
                if !a.plus && self.t.terminal_end((tri, k)) == a.end {
                    return self.turn(tri, k, Dir::Cw);
                }
            }
        }
        unreachable!("every arc end lies on some corner")
    }

    /// A type-1 step starting at `a` without crossing anything.
    pub fn turn_from(&self, a: &Anchor) -> Step {
        for (tri, sides) in self.t.triangles.iter().enumerate() {
            for k in 0..sides.len() {
                if a.plus && self.t.initial_end((tri, k)) == a.end {
                    return self.turn(tri, (k + 2) % 3, Dir::Cw);
                }
                if !a.plus && self.t.terminal_end((tri, k)) == a.end {
                    return self.turn(tri, k, Dir::Ccw);
                }
            }
        }
        unreachable!("every arc end lies on some corner")
    }
}

pub fn standard_mpath_arc(t: &IdealTriangulation, c: &CurveDescriptor) -> Result<MPath, PathError> {
    if c.kind != CurveKind::Arc {
        return Err(PathError::NoStandardPath);
    }
    if c.along.is_some() {
        let o = t.along_occurrence(c)?;
        let st = Steps { t };
        let step = if c.along.as_deref().is_some_and(|l| l.starts_with('-')) {
            st.slide(Anchor { end: t.initial_end(o), plus: true }, false)
        } else {
            st.slide(Anchor { end: t.terminal_end(o), plus: false }, true)
        };
        return Ok(MPath { steps: vec![step], closed: false });
    }
    Ok(Steps { t }.standard_path(&t.route(c)?))
}

pub fn standard_mpath_loop(t: &IdealTriangulation, c: &CurveDescriptor) -> Result<MPath, PathError> {
    if c.kind != CurveKind::Loop {
        return Err(PathError::NoStandardPath);
    }
    Ok(Steps { t }.standard_path(&t.route(c)?))
}

pub fn standard_mpath(t: &IdealTriangulation, c: &CurveDescriptor) -> Result<MPath, PathError> {
    match c.kind {
        CurveKind::Arc => standard_mpath_arc(t, c),
        CurveKind::Loop => standard_mpath_loop(t, c),
        _ => Err(PathError::NoStandardPath),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiVariant {
    Hat,
    Bar,
    Phi,
}

/// Flips the sign so every coefficient is positive; errors on mixed signs.
pub fn positive_part(p: LaurentPoly) -> Result<LaurentPoly, PathError> {
    if p.is_zero() {
        return Ok(p);
    }
    match p.uniform_sign() {
        Some(1) => Ok(p),
        Some(_) => Ok(-&p),
        None => Err(PathError::MixedSigns(p.to_text())),
    }
}

/// |UR| (arcs) or |tr| (loops) of a path matrix.
pub fn invariant(path: &MPath, reduced: bool) -> Result<LaurentPoly, PathError> {
    let m = path.matrix(reduced)?;
    positive_part(if path.closed { m.trace() } else { m.ur().clone() })
}

pub fn chi(t: &IdealTriangulation, c: &CurveDescriptor, variant: ChiVariant) -> Result<LaurentPoly, PathError> {
    match c.kind {
        CurveKind::ContractibleLoop => return Ok(LaurentPoly::constant(-2)),
        CurveKind::ContractibleMonogonArc => return Ok(LaurentPoly::zero()),
        CurveKind::PunctureLoop => return Err(PathError::NoStandardPath),
        _ => {}
    }
    if c.kinks > 0 {
        return Err(PathError::Kinked);
    }
    let path = standard_mpath(t, c)?;
    let v = invariant(&path, variant == ChiVariant::Bar)?;
    Ok(if variant == ChiVariant::Phi { t.specialize(&v, true) } else { v })
}

/// chi with all y-variables set to 1.
pub fn a_coordinates(t: &IdealTriangulation, c: &CurveDescriptor) -> Result<LaurentPoly, PathError> {
    Ok(chi(t, c, ChiVariant::Phi)?.specialize_kind(VarKind::Y).specialize_kind(VarKind::CurlyY))
}

/// Reduced chi with all x-variables (and boundary variables) set to 1.
pub fn x_coordinates(t: &IdealTriangulation, c: &CurveDescriptor) -> Result<LaurentPoly, PathError> {
    Ok(chi(t, c, ChiVariant::Bar)?.specialize_kind(VarKind::X).specialize_kind(VarKind::Boundary))
}

/// Local changes of an M-path that keep |UR| and |tr|.
pub mod adjust {
    use super::*;

    /// Replaces the type-1 step at `i` by the route around the other two corners of its
    /// triangle. The matrix changes sign.
    pub fn hexagon(t: &IdealTriangulation, p: &MPath, i: usize) -> Result<MPath, PathError> {
        let Some(Step { kind: StepKind::Turn { corner: (tri, c), dir, .. }, .. }) = p.steps.get(i) else {
            return Err(PathError::NotApplicable(i));
        };
        let st = Steps { t };
        let (tri, c, dir) = (*tri, *c, *dir);
        let first = p.steps[i].from.clone();
        let positive = dir == Dir::Ccw;
        let corners = match dir {
            Dir::Cw => [(c + 1) % 3, (c + 2) % 3],
            Dir::Ccw => [(c + 2) % 3, (c + 1) % 3],
        };
        let mut long = Vec::new();
        let s = st.slide(first, positive);
        let mut at = s.to.clone();
        long.push(s);
        for k in corners {
            let turn = st.turn(tri, k, dir.flip());
            debug_assert_eq!(turn.from, at);
            let s = st.slide(turn.to.clone(), positive);
            at = s.to.clone();
            long.push(turn);
            long.push(s);
        }
        let mut steps = p.steps[..i].to_vec();
        steps.extend(long);
        steps.extend_from_slice(&p.steps[i + 1..]);
        let out = MPath { steps, closed: p.closed };
        out.check()?;
        Ok(out)
    }

    /// Swaps a type-2 step with an adjacent type-3 step along the same arc.
    pub fn swap_cross_slide(t: &IdealTriangulation, p: &MPath, i: usize) -> Result<MPath, PathError> {
        let st = Steps { t };
        let (Some(s0), Some(s1)) = (p.steps.get(i), p.steps.get(i + 1)) else {
            return Err(PathError::NotApplicable(i));
        };
        let pair = match (&s0.kind, &s1.kind) {
            (StepKind::Cross { tau, dir }, StepKind::Slide { tau: t2, positive }) if tau.label == t2.label && (*dir == Dir::Cw) != *positive => {
                let sl = st.slide(s0.from.clone(), *positive);
                let cr = st.cross(sl.to.end.clone(), dir.flip());
                [sl, cr]
            }
            (StepKind::Slide { tau, positive }, StepKind::Cross { tau: t2, dir }) if tau.label == t2.label && (*dir == Dir::Ccw) != *positive => {
                let cr = st.cross(s0.from.end.clone(), dir.flip());
                let sl = st.slide(cr.to.clone(), *positive);
                [cr, sl]
            }
            _ => return Err(PathError::NotApplicable(i)),
        };
        let mut steps = p.steps.clone();
        steps.splice(i..i + 2, pair);
        let out = MPath { steps, closed: p.closed };
        out.check()?;
        Ok(out)
    }

    /// Moves the start of an open path one corner around its marked point.
    pub fn move_start(t: &IdealTriangulation, p: &MPath) -> MPath {
        let st = Steps { t };
        let mut steps = vec![st.turn_into(&p.steps[0].from)];
        steps.extend(p.steps.iter().cloned());
        MPath { steps, closed: false }
    }

    /// Moves the end of an open path one corner around its marked point.
    pub fn move_end(t: &IdealTriangulation, p: &MPath) -> MPath {
        let st = Steps { t };
        let mut steps = p.steps.clone();
        steps.push(st.turn_from(&p.steps[p.steps.len() - 1].to));
        MPath { steps, closed: false }
    }

    /// Starts a closed path at step k instead.
    pub fn rotate(p: &MPath, k: usize) -> MPath {
        let n = p.steps.len();
        MPath { steps: (0..n).map(|i| p.steps[(i + k) % n].clone()).collect(), closed: p.closed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::fixtures::*;
    use crate::surface::ExpandOptions;

    #[test]
    fn step_inverses() {
        let t = VarId::x("t");
        let s3 = StepKind::Slide { tau: t.clone(), positive: true };
        let s3i = StepKind::Slide { tau: t.clone(), positive: false };
        assert_eq!(step_matrix(&s3, false).mul(&step_matrix(&s3i, false)), Mat2::identity());
        let cw = StepKind::Cross { tau: t.clone(), dir: Dir::Cw };
        let ccw = StepKind::Cross { tau: t.clone(), dir: Dir::Ccw };
        let y = LaurentPoly::curly("t");
        assert_eq!(step_matrix(&cw, false).mul(&step_matrix(&ccw, false)), Mat2::scalar(y));
        assert_eq!(step_matrix(&cw, true).mul(&step_matrix(&ccw, true)), Mat2::identity());
    }

    #[test]
    fn annulus_matrix() {
        let t = annulus();
        let p = standard_mpath_loop(&t, &annulus_loop()).unwrap();
        let m = p.matrix(false).unwrap();
        let ll: LaurentPoly = "Y:3*Y:4*x:1^-1*x:2^-1*b:b4 + Y:2*Y:3*Y:4*x:1^-2*x:2^-1*x:3*b:b1".parse().unwrap();
        assert_eq!(m.c, ll, "{}", m.c);
        let lr: LaurentPoly = "Y:1*Y:2*Y:3*Y:4*x:3*x:1^-1".parse().unwrap();
        assert_eq!(m.d, lr);
        let x = chi(&t, &annulus_loop(), ChiVariant::Phi).unwrap();
        let e = t.expand(&annulus_loop(), &ExpandOptions { keep_boundary: true, rel: 1 }).unwrap();
        assert_eq!(x, e.x);
    }

    #[test]
    fn folded_arcs_by_matrices() {
        let t = folded_digon();
        let (g1, g2) = folded_arcs();
        for g in [g1, g2] {
            let x = chi(&t, &g, ChiVariant::Phi).unwrap();
            let e = t.expand(&g, &ExpandOptions { keep_boundary: true, rel: 1 }).unwrap();
            assert_eq!(x, e.x);
        }
    }

    fn samples() -> Vec<(IdealTriangulation, CurveDescriptor)> {
        use crate::generate::*;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut out = vec![(annulus(), annulus_loop())];
        let (g1, g2) = folded_arcs();
        out.push((folded_digon(), g1));
        out.push((folded_digon(), g2));
        for i in 0..12 {
            let t = random_polygon(4 + i % 5, &mut rng);
            let c = random_walk_arc(&t, 6, &mut rng).unwrap();
            out.push((t, c));
            let a = random_annulus(1 + i % 3, 1 + i % 2, &mut rng);
            out.push((a.clone(), annulus_core_loop(&a)));
            let c = random_walk_arc(&a, 7, &mut rng).unwrap();
            out.push((a, c));
        }
        out
    }

    #[test]
    fn matrices_agree_with_matchings() {
        for (t, c) in samples() {
            let x = chi(&t, &c, ChiVariant::Phi).unwrap();
            let e = t.expand(&c, &ExpandOptions { keep_boundary: true, rel: 1 }).unwrap();
            assert_eq!(x, e.x, "{c:?}");
        }
    }

    #[test]
    fn adjustments_keep_invariant() {
        for (t, c) in samples() {
            let p = standard_mpath(&t, &c).unwrap();
            for reduced in [false, true] {
                let v = invariant(&p, reduced).unwrap();
                for i in 0..p.steps.len() {
                    if p.steps[i].step_type() == 1 {
                        let h = adjust::hexagon(&t, &p, i).unwrap();
                        assert_eq!(invariant(&h, reduced).unwrap(), v);
                        assert_eq!(h.matrix(reduced).unwrap(), p.matrix(reduced).unwrap().neg());
                        if i > 0 && p.steps[i - 1].step_type() == 2 {
                            let s = adjust::swap_cross_slide(&t, &h, i - 1).unwrap();
                            assert_eq!(invariant(&s, reduced).unwrap(), v);
                        }
                    }
                }
                if p.closed {
                    for k in 0..p.steps.len() {
                        assert_eq!(invariant(&adjust::rotate(&p, k), reduced).unwrap(), v);
                    }
                } else {
                    assert_eq!(invariant(&adjust::move_start(&t, &p), reduced).unwrap(), v);
                    assert_eq!(invariant(&adjust::move_end(&t, &p), reduced).unwrap(), v);
                }
                assert_eq!(invariant(&p.inverse(), reduced).unwrap(), v);
            }
        }
    }
}
