//! Ideal triangulations, combinatorial curves, and their Laurent expansions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{LaurentPoly, Monomial, VarId, VarKind};
use crate::snakecore::{self, AbstractBandGraph, AbstractSnakeGraph, SnakeError, SnakeLabels};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("arc {0} is used as a side {1} times (at most two allowed)")]
    ArcInThreeTriangles(String, usize),
    #[error("arc {0} is a side of only one triangle")]
    UnpairedArc(String),
    #[error("boundary segment {0} must bound exactly one triangle (found {1})")]
    BoundaryUse(String, usize),
    #[error("unknown side label {0}")]
    UnknownLabel(String),
    #[error("label {0} is declared more than once")]
    DuplicateLabel(String),
    #[error("orientation inconsistent: {0}")]
    OrientationInconsistent(String),
    #[error("malformed self-folded triangle: {0}")]
    MalformedSelfFolded(String),
    #[error("curve is missing {0}")]
    MissingField(&'static str),
    #[error("triangle index {0} out of range")]
    BadTriangle(usize),
    #[error("crossing {0} is not a side of the current triangle {1}")]
    NonAdjacentCrossings(String, usize),
    #[error("crossing {0} is ambiguous in triangle {1}; write it as {0}#k with k the side position")]
    AmbiguousCrossing(String, usize),
    #[error("crossing {0} leaves triangle {1} through the side it entered")]
    Backtrack(String, usize),
    #[error("curve winds around the puncture inside self-folded triangle {0}")]
    UnsupportedSelfFoldedSelfIntersection(usize),
    #[error("curve ends in triangle {found}, expected {expected}")]
    EndTriangleMismatch { expected: usize, found: usize },
    #[error("unknown puncture {0}")]
    UnknownPuncture(String),
    #[error("{0}")]
    Json(String),
    #[error(transparent)]
    Snake(#[from] SnakeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangleDoc {
    pub sides: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfFoldedDoc {
    pub noose: String,
    pub radius: String,
    pub puncture: String,
}

/// The JSON form of a triangulation. Triangles list their sides clockwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationDoc {
    pub arcs: Vec<String>,
    #[serde(default)]
    pub boundary: Vec<String>,
    #[serde(default)]
    pub punctures: Vec<String>,
    pub triangles: Vec<TriangleDoc>,
    #[serde(default)]
    pub self_folded: Vec<SelfFoldedDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Arc,
    Loop,
    ContractibleMonogonArc,
    ContractibleLoop,
    PunctureLoop,
}

/// A curve given by the arcs it crosses. A crossing may be written `label#k` to pick the
/// side at position k of the triangle being left when that triangle has two such sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDescriptor {
    pub kind: CurveKind,
    #[serde(default)]
    pub crossings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_triangle: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_triangle: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint_triangle: Option<usize>,
    #[serde(default)]
    pub kinks: u32,
    /// Only for `puncture_loop`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub puncture: Option<String>,
    /// An arc with no crossings that is isotopic to this side of the triangulation. It runs
    /// from the terminal end of the side (in the clockwise order of its triangle) to the
    /// initial end; a leading `-` reverses it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub along: Option<String>,
}

impl CurveDescriptor {
    pub fn arc(crossings: &[&str], start: usize, end: usize) -> Self {
        CurveDescriptor {
            kind: CurveKind::Arc,
            crossings: crossings.iter().map(|s| s.to_string()).collect(),
            start_triangle: Some(start),
            end_triangle: Some(end),
            basepoint_triangle: None,
            kinks: 0,
            puncture: None,
            along: None,
        }
    }

    pub fn closed_loop(crossings: &[&str], basepoint: usize) -> Self {
        CurveDescriptor {
            kind: CurveKind::Loop,
            crossings: crossings.iter().map(|s| s.to_string()).collect(),
            start_triangle: None,
            end_triangle: None,
            basepoint_triangle: Some(basepoint),
            kinks: 0,
            puncture: None,
            along: None,
        }
    }

    /// The side `label` of the triangulation, viewed from triangle `tri`.
    pub fn side(label: &str, tri: usize) -> Self {
        let mut c = CurveDescriptor::arc(&[], tri, tri);
        c.along = Some(label.to_string());
        c
    }

    pub fn with_kinks(mut self, k: u32) -> Self {
        self.kinks = k;
        self
    }
}

/// A side slot: triangle index and position 0..3 in its clockwise side list.
pub type Occ = (usize, usize);

/// One endpoint of an arc or boundary segment. The first occurrence of a label runs from
/// end 0 to end 1 (clockwise around its triangle); the second runs from end 1 to end 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcEnd {
    pub label: String,
    pub end: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfFolded {
    pub noose: String,
    pub radius: String,
    pub puncture: String,
    pub triangle: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealTriangulation {
    pub arcs: Vec<String>,
    pub boundary: Vec<String>,
    pub punctures: Vec<String>,
    pub triangles: Vec<[String; 3]>,
    pub self_folded: Vec<SelfFolded>,
    occurrences: BTreeMap<String, Vec<Occ>>,
    /// Marked point at each arc end.
    ends: BTreeMap<ArcEnd, MarkedPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MarkedPoint {
    Puncture(String),
    Boundary(usize),
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut i = i;
        while self.0[i] != r {
            let n = self.0[i];
            self.0[i] = r;
            i = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

impl IdealTriangulation {
    pub fn from_json(s: &str) -> Result<Self, SurfaceError> {
        let doc: TriangulationDoc = serde_json::from_str(s).map_err(|e| SurfaceError::Json(e.to_string()))?;
        Self::from_doc(doc)
    }

    pub fn to_doc(&self) -> TriangulationDoc {
        TriangulationDoc {
            arcs: self.arcs.clone(),
            boundary: self.boundary.clone(),
            punctures: self.punctures.clone(),
            triangles: self.triangles.iter().map(|t| TriangleDoc { sides: t.clone() }).collect(),
            self_folded: self
                .self_folded
                .iter()
                .map(|s| SelfFoldedDoc { noose: s.noose.clone(), radius: s.radius.clone(), puncture: s.puncture.clone() })
                .collect(),
        }
    }

    /// Parses and validates.
    pub fn from_doc(doc: TriangulationDoc) -> Result<Self, SurfaceError> {
        let mut seen = BTreeSet::new();
        for l in doc.arcs.iter().chain(&doc.boundary).chain(&doc.punctures) {
            if !seen.insert(l.clone()) {
                return Err(SurfaceError::DuplicateLabel(l.clone()));
            }
        }
        let arcs: BTreeSet<&String> = doc.arcs.iter().collect();
        let boundary: BTreeSet<&String> = doc.boundary.iter().collect();
        let mut occurrences: BTreeMap<String, Vec<Occ>> = BTreeMap::new();
        for (t, tri) in doc.triangles.iter().enumerate() {
            for (k, s) in tri.sides.iter().enumerate() {
                if !arcs.contains(s) && !boundary.contains(s) {
                    return Err(SurfaceError::UnknownLabel(s.clone()));
                }
                occurrences.entry(s.clone()).or_default().push((t, k));
            }
        }
        for a in &doc.arcs {
            let n = occurrences.get(a).map_or(0, |v| v.len());
            if n > 2 {
                return Err(SurfaceError::ArcInThreeTriangles(a.clone(), n));
            }
            if n < 2 {
                return Err(SurfaceError::UnpairedArc(a.clone()));
            }
        }
        for b in &doc.boundary {
            let n = occurrences.get(b).map_or(0, |v| v.len());
            if n != 1 {
                return Err(SurfaceError::BoundaryUse(b.clone(), n));
            }
        }

        let triangles: Vec<[String; 3]> = doc.triangles.iter().map(|t| t.sides.clone()).collect();

        // self-folded records
        let mut self_folded = Vec::new();
        for sf in &doc.self_folded {
            if !arcs.contains(&sf.noose) || !arcs.contains(&sf.radius) {
                return Err(SurfaceError::MalformedSelfFolded(format!("{} and {} must both be arcs", sf.noose, sf.radius)));
            }
            if !doc.punctures.contains(&sf.puncture) {
                return Err(SurfaceError::MalformedSelfFolded(format!("{} is not a puncture", sf.puncture)));
            }
            let tri = triangles.iter().position(|t| {
                let r = t.iter().filter(|s| **s == sf.radius).count();
                let l = t.iter().filter(|s| **s == sf.noose).count();
                r == 2 && l == 1
            });
            let Some(tri) = tri else {
                return Err(SurfaceError::MalformedSelfFolded(format!("no triangle ({r}, {r}, {l})", r = sf.radius, l = sf.noose)));
            };
            let outer = occurrences[&sf.noose].iter().any(|&(t, _)| t != tri);
            if !outer {
                return Err(SurfaceError::MalformedSelfFolded(format!("noose {} bounds no ordinary triangle", sf.noose)));
            }
            self_folded.push(SelfFolded { noose: sf.noose.clone(), radius: sf.radius.clone(), puncture: sf.puncture.clone(), triangle: tri });
        }
        for (t, tri) in triangles.iter().enumerate() {
            let folded = tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2];
            if folded && !self_folded.iter().any(|s| s.triangle == t) {
                return Err(SurfaceError::MalformedSelfFolded(format!("triangle {t} repeats a side but is not declared")));
            }
        }

        // arc ends and marked points
        let mut end_ids: BTreeMap<ArcEnd, usize> = BTreeMap::new();
        for l in occurrences.keys() {
            for e in 0..2u8 {
                let n = end_ids.len();
                end_ids.insert(ArcEnd { label: l.clone(), end: e }, n);
            }
        }
        let mut uf = UnionFind((0..end_ids.len()).collect());
        let tmp = IdealTriangulation {
            arcs: doc.arcs.clone(),
            boundary: doc.boundary.clone(),
            punctures: doc.punctures.clone(),
            triangles: triangles.clone(),
            self_folded: self_folded.clone(),
            occurrences: occurrences.clone(),
            ends: BTreeMap::new(),
        };
        for t in 0..triangles.len() {
            for c in 0..3 {
                let x = tmp.terminal_end((t, c));
                let y = tmp.initial_end((t, (c + 1) % 3));
                uf.union(end_ids[&x], end_ids[&y]);
            }
        }
        let mut classes: BTreeMap<usize, Vec<ArcEnd>> = BTreeMap::new();
        for (e, &i) in &end_ids {
            classes.entry(uf.find(i)).or_default().push(e.clone());
        }
        let boundary_set: BTreeSet<&String> = doc.boundary.iter().collect();
        let mut boundary_points = Vec::new();
        let mut interior = Vec::new();
        for (root, members) in &classes {
            if members.iter().any(|e| boundary_set.contains(&e.label)) {
                boundary_points.push(*root);
            } else {
                interior.push(*root);
            }
        }
        if boundary_points.len() != doc.boundary.len() {
            return Err(SurfaceError::OrientationInconsistent(format!(
                "gluing yields {} boundary marked points for {} boundary segments",
                boundary_points.len(),
                doc.boundary.len()
            )));
        }
        if interior.len() != doc.punctures.len() {
            return Err(SurfaceError::OrientationInconsistent(format!(
                "gluing yields {} punctures, {} declared",
                interior.len(),
                doc.punctures.len()
            )));
        }
        // name punctures: self-folded ones first, the rest in order of first appearance
        let mut names: BTreeMap<usize, String> = BTreeMap::new();
        for sf in &self_folded {
            let t = sf.triangle;
            let c = (0..3)
                .find(|&c| triangles[t][c] == sf.radius && triangles[t][(c + 1) % 3] == sf.radius)
                .ok_or_else(|| SurfaceError::MalformedSelfFolded(format!("triangle {t} does not list its radius twice in a row")))?;
            let root = uf.find(end_ids[&tmp.terminal_end((t, c))]);
            if !interior.contains(&root) {
                return Err(SurfaceError::MalformedSelfFolded(format!("radius {} does not end at a puncture", sf.radius)));
            }
            if let Some(prev) = names.insert(root, sf.puncture.clone()) {
                if prev != sf.puncture {
                    return Err(SurfaceError::MalformedSelfFolded(format!("puncture named both {prev} and {}", sf.puncture)));
                }
            }
        }
        let mut order: Vec<usize> = Vec::new();
        for t in 0..triangles.len() {
            for c in 0..3 {
                let root = uf.find(end_ids[&tmp.terminal_end((t, c))]);
                if interior.contains(&root) && !order.contains(&root) {
                    order.push(root);
                }
            }
        }
        let taken: BTreeSet<String> = names.values().cloned().collect();
        let mut free = doc.punctures.iter().filter(|p| !taken.contains(*p));
        for root in order {
            if let std::collections::btree_map::Entry::Vacant(v) = names.entry(root) {
                v.insert(free.next().expect("counts checked").clone());
            }
        }
        let mut ends = BTreeMap::new();
        for (e, &i) in &end_ids {
            let root = uf.find(i);
            let mp = match names.get(&root) {
                Some(p) => MarkedPoint::Puncture(p.clone()),
                None => MarkedPoint::Boundary(boundary_points.iter().position(|&b| b == root).expect("boundary class")),
            };
            ends.insert(e.clone(), mp);
        }
        Ok(IdealTriangulation { ends, ..tmp })
    }

    pub fn side(&self, o: Occ) -> &str {
        &self.triangles[o.0][o.1]
    }

    pub fn is_arc(&self, label: &str) -> bool {
        self.arcs.iter().any(|a| a == label)
    }

    pub fn is_boundary(&self, label: &str) -> bool {
        self.boundary.iter().any(|a| a == label)
    }

    /// The variable carried by a side: x for arcs, b for boundary segments.
    pub fn var(&self, label: &str) -> VarId {
        if self.is_boundary(label) {
            VarId::boundary(label)
        } else {
            VarId::x(label)
        }
    }

    pub fn occurrences(&self, label: &str) -> &[Occ] {
        self.occurrences.get(label).map_or(&[], |v| v.as_slice())
    }

    /// The other slot carrying the same arc, or None for boundary segments.
    pub fn twin(&self, o: Occ) -> Option<Occ> {
        let occ = self.occurrences(self.side(o));
        if occ.len() == 2 {
            Some(if occ[0] == o { occ[1] } else { occ[0] })
        } else {
            None
        }
    }

    fn occurrence_rank(&self, o: Occ) -> u8 {
        if self.occurrences(self.side(o)).first() == Some(&o) {
            0
        } else {
            1
        }
    }

    /// End of the side at `o` where a clockwise walk around the triangle enters it.
    pub fn initial_end(&self, o: Occ) -> ArcEnd {
        ArcEnd { label: self.side(o).to_string(), end: self.occurrence_rank(o) }
    }

    pub fn terminal_end(&self, o: Occ) -> ArcEnd {
        ArcEnd { label: self.side(o).to_string(), end: 1 - self.occurrence_rank(o) }
    }

    pub fn marked_point(&self, e: &ArcEnd) -> Option<&MarkedPoint> {
        self.ends.get(e)
    }

    pub fn self_folded_at(&self, t: usize) -> Option<&SelfFolded> {
        self.self_folded.iter().find(|s| s.triangle == t)
    }

    pub fn radius_of_noose(&self, noose: &str) -> Option<&SelfFolded> {
        self.self_folded.iter().find(|s| s.noose == noose)
    }

    pub fn self_folded_radius(&self, radius: &str) -> Option<&SelfFolded> {
        self.self_folded.iter().find(|s| s.radius == radius)
    }

    /// Number of ends of `arc` at puncture `p`.
    pub fn e_p(&self, arc: &str, p: &str) -> u32 {
        (0..2u8).filter(|&e| matches!(self.ends.get(&ArcEnd { label: arc.to_string(), end: e }), Some(MarkedPoint::Puncture(q)) if q == p)).count()
            as u32
    }

    /// The signed adjacency matrix, rows and columns in the order of `arcs`.
    pub fn signed_adjacency_matrix(&self) -> Vec<Vec<i32>> {
        let n = self.arcs.len();
        let idx: BTreeMap<&str, usize> = self.arcs.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        let mut b = vec![vec![0i32; n]; n];
        let bump = |i: usize, j: usize, b: &mut Vec<Vec<i32>>| {
            b[i][j] += 1;
            b[j][i] -= 1;
        };
        for (t, tri) in self.triangles.iter().enumerate() {
            if self.self_folded_at(t).is_some() {
                continue;
            }
            for k in 0..3 {
                let (si, sj) = (&tri[k], &tri[(k + 1) % 3]);
                let (Some(&i), Some(&j)) = (idx.get(si.as_str()), idx.get(sj.as_str())) else { continue };
                bump(i, j, &mut b);
                if let Some(sf) = self.radius_of_noose(sj) {
                    bump(i, idx[sf.radius.as_str()], &mut b);
                }
                if let Some(sf) = self.radius_of_noose(si) {
                    bump(idx[sf.radius.as_str()], j, &mut b);
                }
            }
        }
        b
    }

    /// Follows a curve through the triangulation.
    pub fn route(&self, c: &CurveDescriptor) -> Result<Route, SurfaceError> {
        match c.kind {
            CurveKind::Arc => {
                let start = c.start_triangle.ok_or(SurfaceError::MissingField("start_triangle"))?;
                let r = self.walk(start, &c.crossings, false)?;
                if let Some(end) = c.end_triangle {
                    let found = r.triangles[r.triangles.len() - 1];
                    if found != end {
                        return Err(SurfaceError::EndTriangleMismatch { expected: end, found });
                    }
                }
                Ok(r)
            }
            CurveKind::Loop => {
                let base = c.basepoint_triangle.ok_or(SurfaceError::MissingField("basepoint_triangle"))?;
                if c.crossings.len() < 2 {
                    return Err(SurfaceError::Snake(SnakeError::DegenerateBand));
                }
                let r = self.walk(base, &c.crossings, true)?;
                Ok(r.oriented_loop())
            }
            _ => Err(SurfaceError::MissingField("crossings (curve kind has no route)")),
        }
    }

    fn walk(&self, start: usize, crossings: &[String], closed: bool) -> Result<Route, SurfaceError> {
        if start >= self.triangles.len() {
            return Err(SurfaceError::BadTriangle(start));
        }
        let mut tri = start;
        let mut entry: Option<usize> = None;
        let mut steps = Vec::new();
        let mut triangles = vec![start];
        for raw in crossings {
            let (label, hint) = match raw.split_once('#') {
                Some((l, k)) => (l, Some(k.parse::<usize>().map_err(|_| SurfaceError::UnknownLabel(raw.clone()))?)),
                None => (raw.as_str(), None),
            };
            if !self.is_arc(label) {
                return Err(SurfaceError::NonAdjacentCrossings(raw.clone(), tri));
            }
            let candidates: Vec<usize> = (0..3).filter(|&k| self.triangles[tri][k] == label && Some(k) != entry).collect();
            let pos = match hint {
                Some(k) if candidates.contains(&k) => k,
                Some(k) if Some(k) == entry => return Err(SurfaceError::Backtrack(raw.clone(), tri)),
                Some(_) => return Err(SurfaceError::NonAdjacentCrossings(raw.clone(), tri)),
                None => match candidates.len() {
                    1 => candidates[0],
                    0 if entry.is_some_and(|e| self.triangles[tri][e] == label) => return Err(SurfaceError::Backtrack(raw.clone(), tri)),
                    0 => return Err(SurfaceError::NonAdjacentCrossings(raw.clone(), tri)),
                    _ => return Err(SurfaceError::AmbiguousCrossing(label.to_string(), tri)),
                },
            };
            if let (Some(e), Some(sf)) = (entry, self.self_folded_at(tri)) {
                if self.triangles[tri][e] == sf.radius && label == sf.radius {
                    return Err(SurfaceError::UnsupportedSelfFoldedSelfIntersection(tri));
                }
            }
            let exit = (tri, pos);
            let into = self.twin(exit).expect("arcs have twins");
            steps.push(Crossing { exit, entry: into });
            tri = into.0;
            entry = Some(into.1);
            triangles.push(tri);
        }
        if closed {
            if tri != start {
                return Err(SurfaceError::EndTriangleMismatch { expected: start, found: tri });
            }
            let first_exit = steps[0].exit.1;
            let last_entry = entry.expect("nonempty");
            if first_exit == last_entry {
                return Err(SurfaceError::Backtrack(crossings[0].clone(), tri));
            }
            if let Some(sf) = self.self_folded_at(tri) {
                if self.triangles[tri][first_exit] == sf.radius && self.triangles[tri][last_entry] == sf.radius {
                    return Err(SurfaceError::UnsupportedSelfFoldedSelfIntersection(tri));
                }
            }
        }
        Ok(Route { closed, crossings: steps, triangles, sides: self.triangles.clone() })
    }

    /// Snake graph of an arc.
    pub fn build_snake_from_arc(&self, c: &CurveDescriptor) -> Result<AbstractSnakeGraph, SurfaceError> {
        let r = self.route(c)?;
        if r.closed || r.crossings.is_empty() {
            return Err(SurfaceError::MissingField("at least one crossing"));
        }
        let labels = SnakeLabels {
            diagonals: r.diagonals(self),
            glue: r.glue(self),
            a: self.var(r.sides_at_start().0),
            b: self.var(r.sides_at_start().1),
            w: self.var(r.sides_at_end().0),
            z: self.var(r.sides_at_end().1),
        };
        let shapes = snakecore::shapes_from_kinds(&r.kinds());
        Ok(snakecore::build_snake(&shapes, labels)?)
    }

    /// Band graph of a closed loop, rotated so the closing turn is clockwise.
    pub fn build_band_from_loop(&self, c: &CurveDescriptor) -> Result<AbstractBandGraph, SurfaceError> {
        let r = self.route(c)?;
        let shapes = snakecore::shapes_from_kinds(&r.kinds());
        Ok(snakecore::build_band(&shapes, r.diagonals(self), r.glue(self), self.var(r.closing_side()))?)
    }

    pub fn crossing_monomial(&self, c: &CurveDescriptor) -> Monomial {
        c.crossings.iter().map(|s| s.split('#').next().unwrap_or(s)).fold(Monomial::one(), |m, s| m.mul(&Monomial::var(VarId::x(s))))
    }

    /// The specialization Φ on 𝗒-variables together with x_ℓ = x_r x_{r(p)} for nooses.
    pub fn phi_map(&self) -> BTreeMap<VarId, LaurentPoly> {
        let mut sub = BTreeMap::new();
        for a in &self.arcs {
            let v = if let Some(sf) = self.self_folded_radius(a) {
                LaurentPoly::from_monomial(Monomial::var(VarId::y(a.as_str())).div(&Monomial::var(notched_y(sf))))
            } else if let Some(sf) = self.radius_of_noose(a) {
                LaurentPoly::from_monomial(Monomial::var(notched_y(sf)))
            } else {
                LaurentPoly::y(a)
            };
            sub.insert(VarId::curly(a.as_str()), v);
        }
        for sf in &self.self_folded {
            let m = Monomial::var(VarId::x(sf.radius.as_str())).mul(&Monomial::var(notched_x(sf)));
            sub.insert(VarId::x(sf.noose.as_str()), LaurentPoly::from_monomial(m));
        }
        sub
    }

    /// Applies Φ, the noose convention, and optionally sets boundary variables to 1.
    pub fn specialize(&self, p: &LaurentPoly, keep_boundary: bool) -> LaurentPoly {
        let q = p.substitute(&self.phi_map()).expect("Φ values are monomials");
        if keep_boundary {
            q
        } else {
            q.specialize_kind(VarKind::Boundary)
        }
    }

    /// The slot of the side named by a crossing-free arc.
    pub fn along_occurrence(&self, c: &CurveDescriptor) -> Result<Occ, SurfaceError> {
        let label = c.along.as_deref().ok_or(SurfaceError::MissingField("along"))?;
        let label = label.strip_prefix('-').unwrap_or(label);
        if !c.crossings.is_empty() {
            return Err(SurfaceError::NonAdjacentCrossings(c.crossings[0].clone(), c.start_triangle.unwrap_or(0)));
        }
        let occ = self.occurrences(label);
        if occ.is_empty() {
            return Err(SurfaceError::UnknownLabel(label.to_string()));
        }
        match c.start_triangle {
            None => Ok(occ[0]),
            Some(t) => occ.iter().copied().find(|o| o.0 == t).ok_or(SurfaceError::EndTriangleMismatch { expected: t, found: occ[0].0 }),
        }
    }

    /// X, F and the normalized element for a curve.
    pub fn expand(&self, c: &CurveDescriptor, opts: &ExpandOptions) -> Result<ClusterElement, SurfaceError> {
        let raw = match c.kind {
            CurveKind::ContractibleMonogonArc => LaurentPoly::zero(),
            CurveKind::ContractibleLoop => LaurentPoly::constant(-2),
            CurveKind::PunctureLoop => {
                let p = c.puncture.as_deref().ok_or(SurfaceError::MissingField("puncture"))?;
                if !self.punctures.iter().any(|q| q == p) {
                    return Err(SurfaceError::UnknownPuncture(p.to_string()));
                }
                let term = match self.self_folded.iter().find(|s| s.puncture == p) {
                    Some(sf) => Monomial::var(VarId::y(sf.radius.as_str())).div(&Monomial::var(notched_y(sf))),
                    None => self.arcs.iter().fold(Monomial::one(), |m, a| m.mul(&Monomial::var_pow(VarId::y(a.as_str()), self.e_p(a, p) as i32))),
                };
                &LaurentPoly::one() + &LaurentPoly::from_monomial(term)
            }
            CurveKind::Arc if c.along.is_some() => {
                let o = self.along_occurrence(c)?;
                LaurentPoly::var(self.var(self.side(o)))
            }
            CurveKind::Arc => {
                let g = self.build_snake_from_arc(c)?.with_rel(opts.rel);
                let x = g.matching_sum().div_monomial(&g.crossing_monomial());
                self.specialize(&x, true)
            }
            CurveKind::Loop => {
                let g = self.build_band_from_loop(c)?;
                let x = g.matching_sum().div_monomial(&g.base.crossing_monomial());
                self.specialize(&x, true)
            }
        };
        let signed = if c.kinks % 2 == 1 { -&raw } else { raw };
        let x = if opts.keep_boundary { signed } else { signed.specialize_kind(VarKind::Boundary) };
        Ok(ClusterElement::from_x(x))
    }
}

fn notched_y(sf: &SelfFolded) -> VarId {
    VarId::y(format!("{}@{}", sf.radius, sf.puncture))
}

fn notched_x(sf: &SelfFolded) -> VarId {
    VarId::x(format!("{}@{}", sf.radius, sf.puncture))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandOptions {
    pub keep_boundary: bool,
    /// Relative orientation of the first tile.
    pub rel: i8,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions { keep_boundary: false, rel: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterElement {
    pub x: LaurentPoly,
    pub f: LaurentPoly,
    pub normalized: LaurentPoly,
    /// Tropical value of F; 1 in the generic case.
    pub f_trop: Monomial,
}

impl ClusterElement {
    pub fn from_x(x: LaurentPoly) -> Self {
        let f = x.specialize_kind(VarKind::X).specialize_kind(VarKind::Boundary);
        let f_trop = if f.is_zero() {
            Monomial::one()
        } else {
            let ys: BTreeSet<VarId> = f.variables();
            f.tropical_eval(&ys).expect("nonzero")
        };
        let normalized = x.div_monomial(&f_trop);
        ClusterElement { x, f, normalized, f_trop }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    /// Slot left behind.
    pub exit: Occ,
    /// Slot entered on the other side.
    pub entry: Occ,
}

/// The sequence of slots a curve passes through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub closed: bool,
    pub crossings: Vec<Crossing>,
    /// Triangles visited: start, then one per crossing. For loops the last equals the first.
    pub triangles: Vec<usize>,
    sides: Vec<[String; 3]>,
}

impl Route {
    fn label(&self, o: Occ) -> &str {
        &self.sides[o.0][o.1]
    }

    pub fn d(&self) -> usize {
        self.crossings.len()
    }

    pub fn diagonals(&self, t: &IdealTriangulation) -> Vec<VarId> {
        self.crossings.iter().map(|c| t.var(self.label(c.exit))).collect()
    }

    /// Whether the turn from crossing j to j+1 (0-based, cyclic for loops) is counterclockwise.
    pub fn turn_is_ccw(&self, j: usize) -> bool {
        let n = self.d();
        let e = self.crossings[j].entry.1;
        let x = self.crossings[(j + 1) % n].exit.1;
        x == (e + 2) % 3
    }

    /// Third side at the turn after crossing j.
    pub fn turn_third(&self, j: usize) -> Occ {
        let n = self.d();
        let (t, e) = self.crossings[j].entry;
        let x = self.crossings[(j + 1) % n].exit.1;
        (t, 3 - e - x)
    }

    /// Transfer-factor kinds, one per internal turn (first kind = counterclockwise).
    pub fn kinds(&self) -> Vec<bool> {
        (0..self.d().saturating_sub(1)).map(|j| self.turn_is_ccw(j)).collect()
    }

    pub fn glue(&self, t: &IdealTriangulation) -> Vec<VarId> {
        (0..self.d().saturating_sub(1)).map(|j| t.var(self.label(self.turn_third(j)))).collect()
    }

    /// (a, b) of the first triangle: clockwise order is a, b, then the first crossed arc.
    pub fn sides_at_start(&self) -> (&str, &str) {
        let (t, k) = self.crossings[0].exit;
        (&self.sides[t][(k + 1) % 3], &self.sides[t][(k + 2) % 3])
    }

    /// (w, z) of the last triangle: clockwise order is w, z, then the last crossed arc.
    pub fn sides_at_end(&self) -> (&str, &str) {
        let (t, k) = self.crossings[self.d() - 1].entry;
        (&self.sides[t][(k + 1) % 3], &self.sides[t][(k + 2) % 3])
    }

    /// For loops: third side of the basepoint triangle.
    pub fn closing_side(&self) -> &str {
        self.label(self.turn_third(self.d() - 1))
    }

    /// Reverses a loop if needed so the turn back into the first crossing is clockwise.
    fn oriented_loop(self) -> Route {
        if !self.turn_is_ccw(self.d() - 1) {
            return self;
        }
        let crossings: Vec<Crossing> = self.crossings.iter().rev().map(|c| Crossing { exit: c.entry, entry: c.exit }).collect();
        let mut triangles: Vec<usize> = self.triangles.clone();
        triangles.reverse();
        Route { closed: true, crossings, triangles, sides: self.sides }
    }
}

/// Bundled example surfaces.
pub mod fixtures {
    use super::*;

    fn doc(arcs: &[&str], boundary: &[&str], punctures: &[&str], tris: &[[&str; 3]], folded: &[(&str, &str, &str)]) -> TriangulationDoc {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        TriangulationDoc {
            arcs: s(arcs),
            boundary: s(boundary),
            punctures: s(punctures),
            triangles: tris.iter().map(|t| TriangleDoc { sides: [t[0].to_string(), t[1].to_string(), t[2].to_string()] }).collect(),
            self_folded: folded
                .iter()
                .map(|(n, r, p)| SelfFoldedDoc { noose: n.to_string(), radius: r.to_string(), puncture: p.to_string() })
                .collect(),
        }
    }

    /// Annulus with two marked points on each boundary circle and four arcs.
    pub fn annulus() -> IdealTriangulation {
        IdealTriangulation::from_doc(doc(
            &["1", "2", "3", "4"],
            &["b1", "b2", "b3", "b4"],
            &[],
            &[["1", "b1", "2"], ["2", "b4", "3"], ["3", "4", "b3"], ["4", "1", "b2"]],
            &[],
        ))
        .expect("valid fixture")
    }

    /// The loop around the core of [`annulus`].
    pub fn annulus_loop() -> CurveDescriptor {
        CurveDescriptor::closed_loop(&["1", "2", "3", "4"], 3)
    }

    /// Once-punctured digon: boundary a, b; noose `ell` around radius `tau` to puncture `p`.
    pub fn folded_digon() -> IdealTriangulation {
        IdealTriangulation::from_doc(doc(&["ell", "tau"], &["a", "b"], &["p"], &[["a", "b", "ell"], ["ell", "tau", "tau"]], &[("ell", "tau", "p")]))
            .expect("valid fixture")
    }

    /// The two arcs through the self-folded triangle of [`folded_digon`].
    pub fn folded_arcs() -> (CurveDescriptor, CurveDescriptor) {
        (CurveDescriptor::arc(&["ell", "tau#1"], 0, 1), CurveDescriptor::arc(&["ell", "tau#2"], 0, 1))
    }

    /// Once-punctured torus, two triangles.
    pub fn punctured_torus() -> IdealTriangulation {
        IdealTriangulation::from_doc(doc(&["1", "2", "3"], &[], &["p"], &[["1", "2", "3"], ["1", "2", "3"]], &[])).expect("valid fixture")
    }

    /// Fan triangulation of an n-gon from vertex 0. Diagonal `d{k}` joins 0 and k,
    /// boundary `s{k}` joins k and k+1.
    pub fn polygon(n: usize) -> IdealTriangulation {
        assert!(n >= 3);
        let arcs: Vec<String> = (2..n - 1).map(|k| format!("d{k}")).collect();
        let boundary: Vec<String> = (0..n).map(|k| format!("s{k}")).collect();
        let side = |i: usize, j: usize| -> String {
            let (i, j) = (i.min(j), i.max(j));
            if j == i + 1 {
                format!("s{i}")
            } else if i == 0 && j == n - 1 {
                format!("s{}", n - 1)
            } else {
                format!("d{j}")
            }
        };
        // vertices counterclockwise; triangle (0, k, k+1) clockwise is 0->k+1->k
        let triangles = (1..n - 1).map(|k| TriangleDoc { sides: [side(0, k + 1), side(k + 1, k), side(k, 0)] }).collect();
        IdealTriangulation::from_doc(TriangulationDoc { arcs, boundary, punctures: vec![], triangles, self_folded: vec![] }).expect("valid fixture")
    }
}
