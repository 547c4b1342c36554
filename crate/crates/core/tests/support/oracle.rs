//! Brute-force reference computations for snake and band graphs, written against the
//! raw vertex/edge data only.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use snakegraph::algebra::{LaurentPoly, Monomial, VarId};
use snakegraph::snakecore::{AbstractBandGraph, AbstractSnakeGraph, EdgeRole};

type Pt = (i32, i32);

fn ends(g: &AbstractSnakeGraph, e: usize) -> (Pt, Pt) {
    let (p, q) = (g.vertices[g.edges[e].u], g.vertices[g.edges[e].v]);
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

/// The four unit sides of the square with lower-left corner `c`.
fn square_sides(c: Pt) -> [(Pt, Pt); 4] {
    let (x, y) = c;
    [((x, y), (x + 1, y)), ((x, y), (x, y + 1)), ((x + 1, y), (x + 1, y + 1)), ((x, y + 1), (x + 1, y + 1))]
}

fn on_boundary(g: &AbstractSnakeGraph, e: usize) -> bool {
    let s = ends(g, e);
    g.tiles.iter().filter(|&&c| square_sides(c).contains(&s)).count() == 1
}

/// Every perfect matching of a multigraph on `n` vertices, branching on the
/// uncovered vertex with the fewest usable edges.
pub fn perfect_matchings(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    fn go(n: usize, edges: &[(usize, usize)], used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<BTreeSet<usize>>) {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for v in 0..n {
            if used[v] {
                continue;
            }
            let opts: Vec<usize> = (0..edges.len())
                .filter(|&e| {
                    let (a, b) = edges[e];
                    a != b && (a == v || b == v) && !used[a] && !used[b]
                })
                .collect();
            if best.as_ref().is_none_or(|(_, o)| opts.len() < o.len()) {
                best = Some((v, opts));
            }
        }
        let Some((_, opts)) = best else {
            out.push(cur.iter().copied().collect());
            return;
        };
        for e in opts {
            let (a, b) = edges[e];
            used[a] = true;
            used[b] = true;
            cur.push(e);
            go(n, edges, used, cur, out);
            cur.pop();
            used[a] = false;
            used[b] = false;
        }
    }
    let mut out = Vec::new();
    go(n, edges, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

fn snake_edges(g: &AbstractSnakeGraph) -> Vec<(usize, usize)> {
    g.edges.iter().map(|e| (e.u, e.v)).collect()
}

/// P_-: the matching that uses only boundary edges and contains edge `a`.
pub fn minimal(g: &AbstractSnakeGraph, all: &[BTreeSet<usize>]) -> BTreeSet<usize> {
    let a = g.edges.iter().position(|e| e.role == EdgeRole::A).unwrap();
    let found: Vec<&BTreeSet<usize>> = all.iter().filter(|m| m.contains(&a) && m.iter().all(|&e| on_boundary(g, e))).collect();
    assert_eq!(found.len(), 1, "exactly one all-boundary matching through a");
    found[0].clone()
}

/// Tiles cut off from the outside by the edges of p ⊖ q, by flood fill on unit cells.
pub fn enclosed(g: &AbstractSnakeGraph, p: &BTreeSet<usize>, q: &BTreeSet<usize>) -> Vec<usize> {
    let walls: BTreeSet<(Pt, Pt)> = p.symmetric_difference(q).map(|&e| ends(g, e)).collect();
    let xs = g.vertices.iter().map(|v| v.0);
    let ys = g.vertices.iter().map(|v| v.1);
    let (x0, x1) = (xs.clone().min().unwrap() - 1, xs.max().unwrap() + 1);
    let (y0, y1) = (ys.clone().min().unwrap() - 1, ys.max().unwrap() + 1);
    let mut seen = BTreeSet::from([(x0, y0)]);
    let mut queue = VecDeque::from([(x0, y0)]);
    while let Some((x, y)) = queue.pop_front() {
        // neighbour cell and the unit segment separating it from (x, y)
        let moves = [
            ((x + 1, y), ((x + 1, y), (x + 1, y + 1))),
            ((x - 1, y), ((x, y), (x, y + 1))),
            ((x, y + 1), ((x, y + 1), (x + 1, y + 1))),
            ((x, y - 1), ((x, y), (x + 1, y))),
        ];
        for (c, wall) in moves {
            if c.0 < x0 || c.0 >= x1 || c.1 < y0 || c.1 >= y1 || walls.contains(&wall) || seen.contains(&c) {
                continue;
            }
            seen.insert(c);
            queue.push_back(c);
        }
    }
    (0..g.tiles.len()).filter(|&t| !seen.contains(&g.tiles[t])).collect()
}

fn label_monomial(g: &AbstractSnakeGraph, m: &BTreeSet<usize>) -> Monomial {
    m.iter().fold(Monomial::one(), |acc, &e| acc.mul(&Monomial::var(g.edges[e].label.clone())))
}

fn height(g: &AbstractSnakeGraph, p: &BTreeSet<usize>, min: &BTreeSet<usize>) -> Monomial {
    enclosed(g, p, min).into_iter().fold(Monomial::one(), |acc, t| acc.mul(&Monomial::var(VarId::curly(g.labels.diagonals[t].label.clone()))))
}

/// Σ x(P) h(P) over all perfect matchings.
pub fn snake_sum(g: &AbstractSnakeGraph) -> LaurentPoly {
    let all = perfect_matchings(g.vertices.len(), &snake_edges(g));
    let min = minimal(g, &all);
    all.iter().fold(LaurentPoly::zero(), |acc, p| &acc + &LaurentPoly::from_monomial(label_monomial(g, p).mul(&height(g, p, &min))))
}

pub fn snake_count(g: &AbstractSnakeGraph) -> usize {
    perfect_matchings(g.vertices.len(), &snake_edges(g)).len()
}

/// The four partial sums over matchings using {a,w}, {b,w}, {a,z}, {b,z}, each divided
/// by its normalizing monomial.
pub fn corner_quotients(g: &AbstractSnakeGraph) -> [LaurentPoly; 4] {
    let role = |r: EdgeRole| g.edges.iter().position(|e| e.role == r).unwrap();
    let (a, b, w, z) = (role(EdgeRole::A), role(EdgeRole::B), role(EdgeRole::W), role(EdgeRole::Z));
    let all = perfect_matchings(g.vertices.len(), &snake_edges(g));
    let min = minimal(g, &all);
    let l = &g.labels;
    let d = g.d;
    let x = |v: &VarId| Monomial::var(v.clone());
    let xs = |lo: usize, hi: usize| (lo..hi).fold(Monomial::one(), |m, k| m.mul(&x(&l.diagonals[k])));
    let yd = Monomial::var(VarId::curly(l.diagonals[d - 1].label.clone()));
    let classes = [
        (a, w, xs(0, d - 1).mul(&x(&l.a)).mul(&x(&l.w))),
        (b, w, xs(1, d - 1).mul(&x(&l.b)).mul(&x(&l.w))),
        (a, z, xs(0, d).mul(&x(&l.a)).mul(&x(&l.z)).mul(&yd)),
        (b, z, xs(1, d).mul(&x(&l.b)).mul(&x(&l.z)).mul(&yd)),
    ];
    classes.map(|(e, f, norm)| {
        all.iter()
            .filter(|p| p.contains(&e) && p.contains(&f))
            .fold(LaurentPoly::zero(), |acc, p| &acc + &LaurentPoly::from_monomial(label_monomial(g, p).mul(&height(g, p, &min))))
            .div_monomial(&norm)
    })
}

/// Good matchings of a band, found by identifying x' with x, y' with y and the copy of
/// the cut edge with the cut edge itself, then keeping the perfect matchings whose edges
/// at x and y come from the same side of the cut. Returns (band matching, lift) pairs
/// as edge sets of the underlying snake.
pub fn good_matchings(b: &AbstractBandGraph) -> Vec<(BTreeSet<usize>, BTreeSet<usize>)> {
    let g = &b.base;
    let role = |r: EdgeRole| g.edges.iter().position(|e| e.role == r).unwrap();
    let (a, bb, w, z) = (role(EdgeRole::A), role(EdgeRole::B), role(EdgeRole::W), role(EdgeRole::Z));
    let common = |e: usize, f: usize| {
        let (p, q) = (&g.edges[e], &g.edges[f]);
        if p.u == q.u || p.u == q.v {
            p.u
        } else {
            p.v
        }
    };
    let other = |e: usize, v: usize| if g.edges[e].u == v { g.edges[e].v } else { g.edges[e].u };
    let x = common(a, bb);
    let y = other(a, x);
    let xp = common(z, w);
    let yp = other(z, xp);
    let map = |v: usize| {
        if v == xp {
            x
        } else if v == yp {
            y
        } else {
            v
        }
    };
    let edges: Vec<(usize, usize)> = g.edges.iter().map(|e| (map(e.u), map(e.v))).collect();
    // drop the copy of the cut edge; drop x' and y' by giving them no edges
    let kept: Vec<usize> = (0..g.edges.len()).filter(|&e| e != z).collect();
    let sub: Vec<(usize, usize)> = kept.iter().map(|&e| edges[e]).collect();
    // x' and y' are isolated in `sub`; match them to each other with a dummy edge
    let mut with_dummy = sub.clone();
    with_dummy.push((xp, yp));
    let mut out = Vec::new();
    for m in perfect_matchings(g.vertices.len(), &with_dummy) {
        let p: BTreeSet<usize> = m.into_iter().filter(|&i| i < sub.len()).map(|i| kept[i]).collect();
        let lift = if p.contains(&a) {
            p.iter().copied().chain([z]).collect()
        } else {
            let at =
                |v: usize| p.iter().copied().find(|&e| g.edges[e].u == v || g.edges[e].v == v || map(g.edges[e].u) == v || map(g.edges[e].v) == v);
            let side = |e: usize| g.edges[e].u == xp || g.edges[e].v == xp || g.edges[e].u == yp || g.edges[e].v == yp;
            let (ex, ey) = (at(x).unwrap(), at(y).unwrap());
            match (side(ex), side(ey)) {
                (true, true) => p.iter().copied().chain([a]).collect(),
                (false, false) => p.iter().copied().chain([z]).collect(),
                _ => continue,
            }
        };
        out.push((p, lift));
    }
    out
}

/// Σ x(P) h(P) over good matchings, with h taken from the lift.
pub fn band_sum(b: &AbstractBandGraph) -> LaurentPoly {
    let g = &b.base;
    let all = perfect_matchings(g.vertices.len(), &snake_edges(g));
    let min = minimal(g, &all);
    good_matchings(b)
        .iter()
        .fold(LaurentPoly::zero(), |acc, (p, lift)| &acc + &LaurentPoly::from_monomial(label_monomial(g, p).mul(&height(g, lift, &min))))
}
