//! Abstract snake and band graphs on the square lattice, their perfect and good
//! matchings, height and weight monomials, and the transfer-matrix enumerator.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{LaurentPoly, Mat2, Monomial, VarId, VarKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnakeError {
    #[error("label length mismatch: {0}")]
    LengthMismatch(String),
    #[error("band graphs need at least two tiles")]
    DegenerateBand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    North,
    East,
}

impl Shape {
    pub fn flip(self) -> Shape {
        match self {
            Shape::North => Shape::East,
            Shape::East => Shape::North,
        }
    }
    pub fn letter(self) -> char {
        match self {
            Shape::North => 'N',
            Shape::East => 'E',
        }
    }
}

/// Labels of an abstract snake graph. `glue` has one entry fewer than `diagonals`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnakeLabels {
    pub diagonals: Vec<VarId>,
    pub glue: Vec<VarId>,
    pub a: VarId,
    pub b: VarId,
    pub w: VarId,
    pub z: VarId,
}

impl SnakeLabels {
    /// Distinct symbolic labels: diagonals `x:i1..`, glue `x:g1..`, corners `x:a` etc.
    pub fn generic(d: usize) -> SnakeLabels {
        SnakeLabels {
            diagonals: (1..=d).map(|j| VarId::x(format!("i{j}"))).collect(),
            glue: (1..d).map(|j| VarId::x(format!("g{j}"))).collect(),
            a: VarId::x("a"),
            b: VarId::x("b"),
            w: VarId::x("w"),
            z: VarId::x("z"),
        }
    }

    /// The relabeling used for bands: w becomes i_1, z becomes a copy of a, b becomes i_d.
    pub fn for_band(diagonals: Vec<VarId>, glue: Vec<VarId>, a: VarId) -> SnakeLabels {
        let first = diagonals.first().cloned().unwrap_or_else(|| a.clone());
        let last = diagonals.last().cloned().unwrap_or_else(|| a.clone());
        SnakeLabels { diagonals, glue, b: last, w: first, z: a.clone(), a }
    }
}

/// Which corner or gluing slot an edge fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeRole {
    A,
    B,
    W,
    Z,
    /// Shared edge between tiles j and j+1 (0-based j).
    Glue(usize),
    /// Outer edge of parallelogram j on tile j (labeled by the next diagonal).
    SideLower(usize),
    /// Outer edge of parallelogram j on tile j+1 (labeled by the previous diagonal).
    SideUpper(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: VarId,
    pub role: EdgeRole,
    /// Tiles (0-based) the edge borders.
    pub tiles: Vec<usize>,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.tiles.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractSnakeGraph {
    pub d: usize,
    pub shapes: Vec<Shape>,
    pub labels: SnakeLabels,
    /// Lower-left corner of each tile.
    pub tiles: Vec<(i32, i32)>,
    pub vertices: Vec<(i32, i32)>,
    pub edges: Vec<Edge>,
    /// Relative orientation of the first tile (+1: a at the bottom, b at the left).
    pub rel: i8,
}

/// A set of edge indices of the host graph, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    pub edges: Vec<usize>,
}

impl Matching {
    pub fn new(mut edges: Vec<usize>) -> Matching {
        edges.sort_unstable();
        edges.dedup();
        Matching { edges }
    }
    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

pub fn curly_of(v: &VarId) -> VarId {
    VarId::curly(v.label.clone())
}

fn xmono(v: &VarId) -> Monomial {
    Monomial::var(v.clone())
}

/// Whether each transfer factor m_1..m_{d-1} is of the first kind.
pub fn factor_kinds(shapes: &[Shape]) -> Vec<bool> {
    (0..shapes.len()).map(|j| if j == 0 { shapes[0] == Shape::North } else { shapes[j - 1] == shapes[j] }).collect()
}

/// Inverse of [`factor_kinds`].
pub fn shapes_from_kinds(kinds: &[bool]) -> Vec<Shape> {
    let mut out: Vec<Shape> = Vec::with_capacity(kinds.len());
    for (j, &first) in kinds.iter().enumerate() {
        let s = match (j, first) {
            (0, true) => Shape::North,
            (0, false) => Shape::East,
            (_, true) => out[j - 1],
            (_, false) => out[j - 1].flip(),
        };
        out.push(s);
    }
    out
}

/// Lattice direction of each gluing step. The slot of the final-triangle edge `w`
/// alternates between top (odd tiles) and right (even tiles); a first-kind factor
/// glues the next tile along that slot.
pub fn lattice_steps(shapes: &[Shape]) -> Vec<Shape> {
    factor_kinds(shapes)
        .into_iter()
        .enumerate()
        .map(|(j, first)| {
            let w_slot = if j % 2 == 0 { Shape::North } else { Shape::East };
            if first {
                w_slot
            } else {
                w_slot.flip()
            }
        })
        .collect()
}

pub fn build_snake(shapes: &[Shape], labels: SnakeLabels) -> Result<AbstractSnakeGraph, SnakeError> {
    let d = labels.diagonals.len();
    if d == 0 {
        return Err(SnakeError::LengthMismatch("at least one tile is required".into()));
    }
    if shapes.len() + 1 != d {
        return Err(SnakeError::LengthMismatch(format!("{} shapes for {} tiles", shapes.len(), d)));
    }
    if labels.glue.len() + 1 != d {
        return Err(SnakeError::LengthMismatch(format!("{} glue labels for {} tiles", labels.glue.len(), d)));
    }
    let steps = lattice_steps(shapes);
    let mut tiles = vec![(0, 0)];
    for s in &steps {
        let (x, y) = *tiles.last().unwrap();
        tiles.push(match s {
            Shape::North => (x, y + 1),
            Shape::East => (x + 1, y),
        });
    }

    let mut vindex: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut vid = |p: (i32, i32), vertices: &mut Vec<(i32, i32)>| -> usize {
        *vindex.entry(p).or_insert_with(|| {
            vertices.push(p);
            vertices.len() - 1
        })
    };
    let mut edges = Vec::new();
    let mut push = |p: (i32, i32), q: (i32, i32), label: &VarId, role: EdgeRole, tiles: Vec<usize>, vertices: &mut Vec<(i32, i32)>| {
        let u = vid(p, vertices);
        let v = vid(q, vertices);
        edges.push(Edge { u, v, label: label.clone(), role, tiles });
    };

    let (x0, y0) = tiles[0];
    push((x0, y0), (x0 + 1, y0), &labels.a, EdgeRole::A, vec![0], &mut vertices);
    push((x0, y0), (x0, y0 + 1), &labels.b, EdgeRole::B, vec![0], &mut vertices);
    for (j, s) in steps.iter().enumerate() {
        let (x, y) = tiles[j];
        match s {
            Shape::North => {
                push((x + 1, y), (x + 1, y + 1), &labels.diagonals[j + 1], EdgeRole::SideLower(j), vec![j], &mut vertices);
                push((x, y + 1), (x + 1, y + 1), &labels.glue[j], EdgeRole::Glue(j), vec![j, j + 1], &mut vertices);
                push((x, y + 1), (x, y + 2), &labels.diagonals[j], EdgeRole::SideUpper(j), vec![j + 1], &mut vertices);
            }
            Shape::East => {
                push((x, y + 1), (x + 1, y + 1), &labels.diagonals[j + 1], EdgeRole::SideLower(j), vec![j], &mut vertices);
                push((x + 1, y), (x + 1, y + 1), &labels.glue[j], EdgeRole::Glue(j), vec![j, j + 1], &mut vertices);
                push((x + 1, y), (x + 2, y), &labels.diagonals[j], EdgeRole::SideUpper(j), vec![j + 1], &mut vertices);
            }
        }
    }
    // the final triangle alternates with the parity of d
    let (x, y) = tiles[d - 1];
    let top = ((x, y + 1), (x + 1, y + 1));
    let right = ((x + 1, y), (x + 1, y + 1));
    let (wpos, zpos) = if d % 2 == 1 { (top, right) } else { (right, top) };
    push(wpos.0, wpos.1, &labels.w, EdgeRole::W, vec![d - 1], &mut vertices);
    push(zpos.0, zpos.1, &labels.z, EdgeRole::Z, vec![d - 1], &mut vertices);

    Ok(AbstractSnakeGraph { d, shapes: shapes.to_vec(), labels, tiles, vertices, edges, rel: 1 })
}

impl AbstractSnakeGraph {
    /// Re-embed with the given relative orientation of the first tile. The -1 embedding is
    /// the mirror image across the diagonal through the origin; labels and matchings are
    /// unchanged, and P_- still avoids the pair of edges on the far side of the first diagonal.
    pub fn with_rel(mut self, rel: i8) -> Self {
        let rel = if rel < 0 { -1 } else { 1 };
        if rel != self.rel {
            for t in &mut self.tiles {
                *t = (t.1, t.0);
            }
            for v in &mut self.vertices {
                *v = (v.1, v.0);
            }
            self.rel = rel;
        }
        self
    }

    pub fn edge_by_role(&self, role: EdgeRole) -> usize {
        self.edges.iter().position(|e| e.role == role).expect("every role is present")
    }

    fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.u].push(i);
            inc[e.v].push(i);
        }
        inc
    }

    /// All perfect matchings: depth-first, always covering the uncovered vertex of
    /// least index (vertices are numbered tile by tile); the minimal matching is moved
    /// to the front.
    pub fn perfect_matchings(&self) -> Vec<Matching> {
        let inc = self.incidence();
        let mut covered = vec![false; self.vertices.len()];
        let mut cur = Vec::new();
        let mut out = Vec::new();
        self.dfs(&inc, &mut covered, &mut cur, &mut out);
        let min = self.minimal_matching_from(&out);
        if let Some(pos) = out.iter().position(|m| *m == min) {
            let m = out.remove(pos);
            out.insert(0, m);
        }
        out
    }

    fn dfs(&self, inc: &[Vec<usize>], covered: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Matching>) {
        let Some(v) = covered.iter().position(|c| !c) else {
            out.push(Matching::new(cur.clone()));
            return;
        };
        for &e in &inc[v] {
            let edge = &self.edges[e];
            let other = if edge.u == v { edge.v } else { edge.u };
            if covered[other] {
                continue;
            }
            covered[v] = true;
            covered[other] = true;
            cur.push(e);
            self.dfs(inc, covered, cur, out);
            cur.pop();
            covered[v] = false;
            covered[other] = false;
        }
    }

    pub fn boundary_matchings(&self, all: &[Matching]) -> Vec<Matching> {
        all.iter().filter(|m| m.edges.iter().all(|&e| self.edges[e].is_boundary())).cloned().collect()
    }

    fn minimal_matching_from(&self, all: &[Matching]) -> Matching {
        let key = self.edge_by_role(EdgeRole::A);
        self.boundary_matchings(all)
            .into_iter()
            .find(|m| m.contains(key))
            .expect("a snake graph has an all-boundary matching through each first-tile corner edge")
    }

    pub fn minimal_matching(&self) -> Matching {
        self.minimal_matching_from(&self.perfect_matchings_unordered())
    }

    pub fn maximal_matching(&self) -> Matching {
        let all = self.perfect_matchings_unordered();
        let min = self.minimal_matching_from(&all);
        self.boundary_matchings(&all).into_iter().find(|m| *m != min).expect("two all-boundary matchings")
    }

    fn perfect_matchings_unordered(&self) -> Vec<Matching> {
        let inc = self.incidence();
        let mut covered = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        self.dfs(&inc, &mut covered, &mut Vec::new(), &mut out);
        out
    }

    /// x(P): product of edge labels.
    pub fn weight(&self, p: &Matching) -> Monomial {
        p.edges.iter().fold(Monomial::one(), |m, &e| m.mul(&xmono(&self.edges[e].label)))
    }

    /// Tiles enclosed by the cycles of `p` xor `base`, by ray-crossing parity from each tile center.
    pub fn enclosed_tiles(&self, p: &Matching, base: &Matching) -> Vec<usize> {
        let diff: Vec<usize> =
            p.edges.iter().filter(|e| !base.contains(**e)).chain(base.edges.iter().filter(|e| !p.contains(**e))).copied().collect();
        let mut out = Vec::new();
        for (t, &(tx, ty)) in self.tiles.iter().enumerate() {
            // center (tx + 1/2, ty + 1/2); ray toward +x crosses vertical edges with x > tx at height ty
            let crossings = diff
                .iter()
                .filter(|&&e| {
                    let (p0, p1) = (self.vertices[self.edges[e].u], self.vertices[self.edges[e].v]);
                    p0.0 == p1.0 && p0.0 > tx && p0.1.min(p1.1) == ty
                })
                .count();
            if crossings % 2 == 1 {
                out.push(t);
            }
        }
        out
    }

    /// h(P) relative to a given minimal matching.
    pub fn height_with(&self, p: &Matching, min: &Matching) -> Monomial {
        self.enclosed_tiles(p, min).into_iter().fold(Monomial::one(), |m, t| m.mul(&Monomial::var(curly_of(&self.labels.diagonals[t]))))
    }

    pub fn height(&self, p: &Matching) -> Monomial {
        self.height_with(p, &self.minimal_matching())
    }

    /// Σ x(P) h(P) over all perfect matchings, by enumeration.
    pub fn matching_sum(&self) -> LaurentPoly {
        let all = self.perfect_matchings();
        let min = all[0].clone();
        all.iter().fold(LaurentPoly::zero(), |acc, p| &acc + &LaurentPoly::from_monomial(self.weight(p).mul(&self.height_with(p, &min))))
    }

    /// Which corner class (A, B, C, D) a matching belongs to, by its first- and last-triangle edges.
    pub fn corner_class(&self, p: &Matching) -> Option<Corner> {
        let a = p.contains(self.edge_by_role(EdgeRole::A));
        let b = p.contains(self.edge_by_role(EdgeRole::B));
        let w = p.contains(self.edge_by_role(EdgeRole::W));
        let z = p.contains(self.edge_by_role(EdgeRole::Z));
        match (a, b, w, z) {
            (true, false, true, false) => Some(Corner::A),
            (false, true, true, false) => Some(Corner::B),
            (true, false, false, true) => Some(Corner::C),
            (false, true, false, true) => Some(Corner::D),
            _ => None,
        }
    }

    /// The transfer matrix M_d.
    pub fn transfer_matrix(&self) -> Mat2 {
        let l = &self.labels;
        let kinds = factor_kinds(&self.shapes);
        let mut m = Mat2::identity();
        for (j, &kind) in kinds.iter().enumerate() {
            let f = transfer_factor(kind, &l.diagonals[j], &l.diagonals[j + 1], &l.glue[j]);
            m = f.mul(&m);
        }
        m
    }

    pub fn crossing_monomial(&self) -> Monomial {
        self.labels.diagonals.iter().fold(Monomial::one(), |m, v| m.mul(&xmono(v)))
    }

    /// x_{i_1}...x_{i_d} * UR(end * M_d * start).
    pub fn snake_enumerator(&self) -> LaurentPoly {
        let l = &self.labels;
        let (first, last) = (&l.diagonals[0], &l.diagonals[self.d - 1]);
        let end = end_matrix(&l.w, &l.z, last);
        let start = start_matrix(&l.a, &l.b, first);
        end.mul(&self.transfer_matrix()).mul(&start).ur().scale_monomial(&self.crossing_monomial())
    }

    /// DOT rendering: tiles as clusters, diagonals dashed.
    pub fn to_dot(&self, name: &str) -> String {
        dot(self, name, None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Corner {
    A,
    B,
    C,
    D,
}

/// First-kind `[[1,0],[x_g/(x_i x_j), Y_i]]` or second-kind
/// `[[x_j/x_i, x_g Y_i],[0, x_i Y_i/x_j]]` transfer factor.
pub fn transfer_factor(first_kind: bool, i: &VarId, j: &VarId, g: &VarId) -> Mat2 {
    let yi = Monomial::var(curly_of(i));
    let (xi, xj, xg) = (xmono(i), xmono(j), xmono(g));
    if first_kind {
        Mat2::new(LaurentPoly::one(), LaurentPoly::zero(), xg.div(&xi.mul(&xj)).into(), yi.into())
    } else {
        Mat2::new(xj.div(&xi).into(), xg.mul(&yi).into(), LaurentPoly::zero(), xi.mul(&yi).div(&xj).into())
    }
}

/// `[[0, x_a], [-1/x_a, x_b/x_i]]`.
pub fn start_matrix(a: &VarId, b: &VarId, i: &VarId) -> Mat2 {
    Mat2::new(LaurentPoly::zero(), xmono(a).into(), -LaurentPoly::from(xmono(a).inverse()), xmono(b).div(&xmono(i)).into())
}

/// `[[x_w/x_i, x_z Y_i], [-1/x_z, 0]]`.
pub fn end_matrix(w: &VarId, z: &VarId, i: &VarId) -> Mat2 {
    Mat2::new(
        xmono(w).div(&xmono(i)).into(),
        xmono(z).mul(&Monomial::var(curly_of(i))).into(),
        -LaurentPoly::from(xmono(z).inverse()),
        LaurentPoly::zero(),
    )
}

/// `[[x_first/x_last, x_a Y_last], [0, Y_last x_last/x_first]]`.
pub fn band_closing_matrix(first: &VarId, last: &VarId, a: &VarId) -> Mat2 {
    transfer_factor(false, last, first, a)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractBandGraph {
    /// Underlying snake graph with band labels (w = i_1, z = a', b = i_d).
    pub base: AbstractSnakeGraph,
    /// Edge `a` of the first tile; its copy `a'` is the base graph's `Z` edge.
    pub cut_edge: usize,
    pub cut_copy: usize,
    /// (x, y, x', y') vertex indices in the base graph.
    pub glued: (usize, usize, usize, usize),
}

pub fn build_band(shapes: &[Shape], diagonals: Vec<VarId>, glue: Vec<VarId>, a: VarId) -> Result<AbstractBandGraph, SnakeError> {
    if diagonals.len() < 2 {
        return Err(SnakeError::DegenerateBand);
    }
    let base = build_snake(shapes, SnakeLabels::for_band(diagonals, glue, a))?;
    let cut_edge = base.edge_by_role(EdgeRole::A);
    let cut_copy = base.edge_by_role(EdgeRole::Z);
    let ea = &base.edges[cut_edge];
    let eb = &base.edges[base.edge_by_role(EdgeRole::B)];
    let x = if ea.u == eb.u || ea.u == eb.v { ea.u } else { ea.v };
    let y = if x == ea.u { ea.v } else { ea.u };
    let ez = &base.edges[cut_copy];
    let ew = &base.edges[base.edge_by_role(EdgeRole::W)];
    let xp = if ez.u == ew.u || ez.u == ew.v { ez.u } else { ez.v };
    let yp = if xp == ez.u { ez.v } else { ez.u };
    Ok(AbstractBandGraph { base, cut_edge, cut_copy, glued: (x, y, xp, yp) })
}

/// A good matching together with the snake matching it descends from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodMatching {
    /// Edges of the band (base-graph indices, with `a'` folded onto `a`).
    pub band: Matching,
    pub lift: Matching,
    pub class: Corner,
}

impl AbstractBandGraph {
    pub fn d(&self) -> usize {
        self.base.d
    }

    /// Good matchings: perfect matchings of the base snake in classes A, C, D with the
    /// duplicated cut edge removed. Order follows the snake enumeration.
    pub fn good_matchings(&self) -> Vec<GoodMatching> {
        let mut out = Vec::new();
        for p in self.base.perfect_matchings() {
            let class = match self.base.corner_class(&p) {
                Some(c @ (Corner::A | Corner::C | Corner::D)) => c,
                _ => continue,
            };
            let drop = if class == Corner::A { self.cut_edge } else { self.cut_copy };
            let mut edges: Vec<usize> = p.edges.iter().copied().filter(|&e| e != drop).collect();
            for e in edges.iter_mut() {
                if *e == self.cut_copy {
                    *e = self.cut_edge;
                }
            }
            out.push(GoodMatching { band: Matching::new(edges), lift: p, class });
        }
        out
    }

    pub fn weight(&self, g: &GoodMatching) -> Monomial {
        self.base.weight(&g.band)
    }

    pub fn height(&self, g: &GoodMatching) -> Monomial {
        self.base.height(&g.lift)
    }

    pub fn matching_sum(&self) -> LaurentPoly {
        let min = self.base.minimal_matching();
        self.good_matchings()
            .iter()
            .fold(LaurentPoly::zero(), |acc, g| &acc + &LaurentPoly::from_monomial(self.weight(g).mul(&self.base.height_with(&g.lift, &min))))
    }

    pub fn transfer_matrix(&self) -> Mat2 {
        self.base.transfer_matrix()
    }

    /// x_{i_1}...x_{i_d} * tr(closing * M_d).
    pub fn band_enumerator(&self) -> LaurentPoly {
        let l = &self.base.labels;
        let close = band_closing_matrix(&l.diagonals[0], &l.diagonals[self.d() - 1], &l.a);
        close.mul(&self.transfer_matrix()).trace().scale_monomial(&self.base.crossing_monomial())
    }

    pub fn to_dot(&self, name: &str) -> String {
        dot(&self.base, name, Some((self.cut_edge, self.cut_copy)))
    }
}

pub fn snake_enumerator(g: &AbstractSnakeGraph) -> LaurentPoly {
    g.snake_enumerator()
}

pub fn band_enumerator(g: &AbstractBandGraph) -> LaurentPoly {
    g.band_enumerator()
}

pub fn enumerate_perfect_matchings(g: &AbstractSnakeGraph) -> Vec<Matching> {
    g.perfect_matchings()
}

pub fn enumerate_good_matchings(g: &AbstractBandGraph) -> Vec<GoodMatching> {
    g.good_matchings()
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

fn dot(g: &AbstractSnakeGraph, name: &str, cut: Option<(usize, usize)>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph {} {{", quote(name));
    let _ = writeln!(s, "  node [shape=point];");
    for (i, &(x, y)) in g.vertices.iter().enumerate() {
        let _ = writeln!(s, "  v{i} [pos=\"{x},{y}!\"];");
    }
    for (t, &(x, y)) in g.tiles.iter().enumerate() {
        let _ = writeln!(s, "  subgraph cluster_tile{} {{", t + 1);
        let _ = writeln!(s, "    label={};", quote(&format!("tile {} ({})", t + 1, g.labels.diagonals[t])));
        let nw = g.vertices.iter().position(|&p| p == (x, y + 1)).unwrap();
        let se = g.vertices.iter().position(|&p| p == (x + 1, y)).unwrap();
        let _ = writeln!(s, "    v{nw} -- v{se} [style=dashed, label={}];", quote(&g.labels.diagonals[t].to_string()));
        let _ = writeln!(s, "  }}");
    }
    for (i, e) in g.edges.iter().enumerate() {
        let mut attrs = format!("label={}", quote(&e.label.to_string()));
        if let Some((c, c2)) = cut {
            if i == c || i == c2 {
                attrs.push_str(", color=red, xlabel=\"cut\"");
            }
        }
        let _ = writeln!(s, "  v{} -- v{} [{}];", e.u, e.v, attrs);
    }
    s.push_str("}\n");
    s
}

/// Shape sequence from a compact string such as "NENE".
pub fn parse_shapes(s: &str) -> Option<Vec<Shape>> {
    s.chars()
        .map(|c| match c {
            'N' | 'n' => Some(Shape::North),
            'E' | 'e' => Some(Shape::East),
            _ => None,
        })
        .collect()
}

/// Partition of the enumerator by corner class.
pub fn corner_sums(g: &AbstractSnakeGraph) -> BTreeMap<Corner, LaurentPoly> {
    let all = g.perfect_matchings();
    let min = all[0].clone();
    let mut out: BTreeMap<Corner, LaurentPoly> = [Corner::A, Corner::B, Corner::C, Corner::D].into_iter().map(|c| (c, LaurentPoly::zero())).collect();
    for p in &all {
        if let Some(c) = g.corner_class(p) {
            let t = LaurentPoly::from_monomial(g.weight(p).mul(&g.height_with(p, &min)));
            let slot = out.get_mut(&c).unwrap();
            *slot = &*slot + &t;
        }
    }
    out
}

/// The monomial each corner sum is divided by to give the matching entry of M_d.
pub fn corner_normalizer(g: &AbstractSnakeGraph, c: Corner) -> Monomial {
    let l = &g.labels;
    let d = g.d;
    let prod = |r: std::ops::Range<usize>| r.fold(Monomial::one(), |m, k| m.mul(&xmono(&l.diagonals[k])));
    let yd = Monomial::var(curly_of(&l.diagonals[d - 1]));
    match c {
        Corner::A => prod(0..d - 1).mul(&xmono(&l.a)).mul(&xmono(&l.w)),
        Corner::B => prod(1..d - 1).mul(&xmono(&l.b)).mul(&xmono(&l.w)),
        Corner::C => prod(0..d).mul(&xmono(&l.a)).mul(&xmono(&l.z)).mul(&yd),
        Corner::D => prod(1..d).mul(&xmono(&l.b)).mul(&xmono(&l.z)).mul(&yd),
    }
}

pub fn corner_entry(m: &Mat2, c: Corner) -> &LaurentPoly {
    match c {
        Corner::A => &m.a,
        Corner::B => &m.b,
        Corner::C => &m.c,
        Corner::D => &m.d,
    }
}

pub fn is_x_like(v: &VarId) -> bool {
    matches!(v.kind, VarKind::X | VarKind::Boundary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snake(s: &str) -> AbstractSnakeGraph {
        let sh = parse_shapes(s).unwrap();
        build_snake(&sh, SnakeLabels::generic(sh.len() + 1)).unwrap()
    }

    #[test]
    fn single_tile() {
        let g = snake("");
        assert_eq!(g.perfect_matchings().len(), 2);
        assert_eq!(g.snake_enumerator(), "x:a*x:w + x:b*x:z*Y:i1".parse().unwrap());
        assert_eq!(g.matching_sum(), g.snake_enumerator());
        let max = g.maximal_matching();
        assert_eq!(g.height(&max), Monomial::var(VarId::curly("i1")));
        assert!(g.height(&g.minimal_matching()).is_one());
        assert_eq!(g.transfer_matrix(), Mat2::identity());
    }

    #[test]
    fn two_tiles() {
        let g = snake("N");
        assert_eq!(g.perfect_matchings().len(), 3);
        assert_eq!(g.tiles, vec![(0, 0), (0, 1)]);
        assert_eq!(g.matching_sum(), g.snake_enumerator());
    }

    #[test]
    fn length_checks() {
        let mut l = SnakeLabels::generic(3);
        l.glue.pop();
        assert!(matches!(build_snake(&[Shape::North, Shape::East], l), Err(SnakeError::LengthMismatch(_))));
        let d = vec![VarId::x("1")];
        assert_eq!(build_band(&[], d, vec![], VarId::x("a")), Err(SnakeError::DegenerateBand));
    }

    #[test]
    fn minimal_first_and_two_boundary_matchings() {
        for s in ["", "N", "E", "NE", "NNE", "ENEN"] {
            let g = snake(s);
            let all = g.perfect_matchings();
            assert_eq!(all[0], g.minimal_matching());
            assert_eq!(g.boundary_matchings(&all).len(), 2);
            assert_ne!(g.minimal_matching(), g.maximal_matching());
        }
    }
}
