//! Random triangulations and curves for cross-checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::surface::{CurveDescriptor, IdealTriangulation, TriangleDoc, TriangulationDoc};

fn doc(arcs: Vec<String>, boundary: Vec<String>, triangles: Vec<[String; 3]>) -> TriangulationDoc {
    TriangulationDoc {
        arcs,
        boundary,
        punctures: vec![],
        triangles: triangles.into_iter().map(|sides| TriangleDoc { sides }).collect(),
        self_folded: vec![],
    }
}

/// Random triangulation of an n-gon. Diagonal `d{i}_{j}` joins vertices i < j,
/// boundary `s{k}` joins k and k+1.
pub fn random_polygon<R: Rng>(n: usize, rng: &mut R) -> IdealTriangulation {
    assert!(n >= 3);
    let side = |i: usize, j: usize| {
        let (i, j) = (i.min(j), i.max(j));
        if j == i + 1 {
            format!("s{i}")
        } else if i == 0 && j == n - 1 {
            format!("s{j}")
        } else {
            format!("d{i}_{j}")
        }
    };
    let mut tris = Vec::new();
    let mut arcs = Vec::new();
    let mut stack = vec![(0, n - 1)];
    while let Some((i, j)) = stack.pop() {
        if j < i + 2 {
            continue;
        }
        let k = rng.gen_range(i + 1..j);
        tris.push([side(i, j), side(j, k), side(k, i)]);
        for (a, b) in [(i, k), (k, j)] {
            if b > a + 1 {
                arcs.push(side(a, b));
                stack.push((a, b));
            }
        }
    }
    let boundary = (0..n).map(|k| format!("s{k}")).collect();
    IdealTriangulation::from_doc(doc(arcs, boundary, tris)).expect("generated polygon is valid")
}

/// Random triangulation of an annulus by bridging arcs `e{k}`, with `outer` marked
/// points (segments `o{a}`) and `inner` marked points (segments `i{b}`). Triangle k lies
/// between `e{k}` and `e{k+1}`.
pub fn random_annulus<R: Rng>(outer: usize, inner: usize, rng: &mut R) -> IdealTriangulation {
    assert!(outer >= 1 && inner >= 1);
    let mut moves: Vec<bool> = (0..outer).map(|_| true).chain((0..inner).map(|_| false)).collect();
    moves.shuffle(rng);
    let n = moves.len();
    let e = |k: usize| format!("e{}", k % n);
    let (mut a, mut b) = (0, 0);
    let mut tris = Vec::new();
    for (k, &out) in moves.iter().enumerate() {
        if out {
            tris.push([e(k), e(k + 1), format!("o{a}")]);
            a += 1;
        } else {
            tris.push([format!("i{b}"), e(k + 1), e(k)]);
            b += 1;
        }
    }
    let arcs = (0..n).map(e).collect();
    let boundary = (0..outer).map(|a| format!("o{a}")).chain((0..inner).map(|b| format!("i{b}"))).collect();
    IdealTriangulation::from_doc(doc(arcs, boundary, tris)).expect("generated annulus is valid")
}

/// The core loop of an annulus from [`random_annulus`].
pub fn annulus_core_loop(t: &IdealTriangulation) -> CurveDescriptor {
    let n = t.arcs.len();
    let names: Vec<String> = (0..n).map(|k| format!("e{k}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    CurveDescriptor::closed_loop(&refs, n - 1)
}

/// A random arc given by a non-backtracking walk through the dual graph, with
/// between 1 and `max_crossings` crossings. None if the triangulation has no arcs.
pub fn random_walk_arc<R: Rng>(t: &IdealTriangulation, max_crossings: usize, rng: &mut R) -> Option<CurveDescriptor> {
    if t.arcs.is_empty() || max_crossings == 0 {
        return None;
    }
    let len = rng.gen_range(1..=max_crossings);
    let start = loop {
        let s = rng.gen_range(0..t.triangles.len());
        if t.triangles[s].iter().any(|l| t.is_arc(l)) {
            break s;
        }
    };
    let mut tri = start;
    let mut came: Option<usize> = None;
    let mut crossings: Vec<String> = Vec::new();
    for _ in 0..len {
        let options: Vec<usize> = (0..3).filter(|&k| Some(k) != came && t.is_arc(&t.triangles[tri][k])).collect();
        let Some(&k) = options.choose(rng) else { break };
        let entry = t.twin((tri, k)).expect("arc sides have twins");
        crossings.push(t.triangles[tri][k].clone());
        tri = entry.0;
        came = Some(entry.1);
    }
    let refs: Vec<&str> = crossings.iter().map(String::as_str).collect();
    Some(CurveDescriptor::arc(&refs, start, tri))
}

/// Endpoints of a side of [`random_polygon`] or [`crate::surface::fixtures::polygon`].
pub fn polygon_side_ends(label: &str, n: usize) -> Option<(usize, usize)> {
    if let Some(k) = label.strip_prefix('s') {
        let k: usize = k.parse().ok()?;
        return Some((k, (k + 1) % n));
    }
    let rest = label.strip_prefix('d')?;
    match rest.split_once('_') {
        Some((i, j)) => Some((i.parse().ok()?, j.parse().ok()?)),
        None => Some((0, rest.parse().ok()?)),
    }
}

fn polygon_triangle_vertices(t: &IdealTriangulation, n: usize, tri: usize) -> Vec<usize> {
    let mut v: Vec<usize> = t.triangles[tri]
        .iter()
        .flat_map(|l| {
            let (a, b) = polygon_side_ends(l, n).expect("polygon labels");
            [a, b]
        })
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// The oriented chord u → v of a triangulated n-gon as a curve descriptor.
pub fn polygon_chord(t: &IdealTriangulation, n: usize, u: usize, v: usize) -> CurveDescriptor {
    assert!(u != v && u < n && v < n);
    let rel = |x: usize, base: usize| (x + n - base) % n;
    // the triangle at `from` that the chord towards `to` enters
    let at = |from: usize, to: usize| -> (usize, Option<String>) {
        for tri in 0..t.triangles.len() {
            let vs = polygon_triangle_vertices(t, n, tri);
            if !vs.contains(&from) {
                continue;
            }
            let mut others: Vec<usize> = vs.into_iter().filter(|&x| x != from).collect();
            others.sort_by_key(|&x| rel(x, from));
            let (p, q) = (rel(others[0], from), rel(others[1], from));
            let r = rel(to, from);
            if p <= r && r <= q {
                let joins = |k: usize, x: usize, y: usize| {
                    let (a, b) = polygon_side_ends(&t.triangles[tri][k], n).unwrap();
                    (a == x && b == y) || (a == y && b == x)
                };
                let side = (0..3).find(|&k| (r == p || r == q) && joins(k, from, to)).map(|k| {
                    // the terminal end of side k is its common vertex with side k+1
                    let (a, b) = polygon_side_ends(&t.triangles[tri][(k + 1) % 3], n).unwrap();
                    let label = &t.triangles[tri][k];
                    if a == from || b == from {
                        label.clone()
                    } else {
                        format!("-{label}")
                    }
                });
                return (tri, side);
            }
        }
        unreachable!("every direction at a vertex lies in some triangle")
    };
    let (start, side) = at(u, v);
    if let Some(label) = side {
        return CurveDescriptor::side(&label, start);
    }
    let (end, _) = at(v, u);
    // path in the dual tree
    let mut prev: Vec<Option<(usize, String)>> = vec![None; t.triangles.len()];
    let mut seen = vec![false; t.triangles.len()];
    let mut queue = std::collections::VecDeque::from([start]);
    seen[start] = true;
    while let Some(x) = queue.pop_front() {
        for k in 0..3 {
            if let Some((y, _)) = t.twin((x, k)) {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, t.triangles[x][k].clone()));
                    queue.push_back(y);
                }
            }
        }
    }
    let mut crossings = Vec::new();
    let mut x = end;
    while let Some((p, l)) = prev[x].clone() {
        crossings.push(l);
        x = p;
    }
    crossings.reverse();
    let refs: Vec<&str> = crossings.iter().map(String::as_str).collect();
    CurveDescriptor::arc(&refs, start, end)
}
