//! Integer geometry and planarity for Untangle.

pub type Point = (i64, i64);

/// Twice the signed area of `abc`; positive when counter-clockwise.
pub fn orient(a: Point, b: Point, c: Point) -> i64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Segments cross at a single point interior to both.
pub fn cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c).signum();
    let o2 = orient(a, b, d).signum();
    let o3 = orient(c, d, a).signum();
    let o4 = orient(c, d, b).signum();
    o1 * o2 < 0 && o3 * o4 < 0
}

/// `p` lies on segment `ab`, strictly between its endpoints.
pub fn on_interior(p: Point, a: Point, b: Point) -> bool {
    orient(a, b, p) == 0
        && p != a
        && p != b
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

/// Positive when `d` is inside the circle through counter-clockwise `abc`.
pub fn in_circle(a: Point, b: Point, c: Point, d: Point) -> i128 {
    let rows = [a, b, c].map(|p| {
        let (x, y) = ((p.0 - d.0) as i128, (p.1 - d.1) as i128);
        (x, y, x * x + y * y)
    });
    let [(ax, ay, aw), (bx, by, bw), (cx, cy, cw)] = rows;
    ax * (by * cw - bw * cy) - ay * (bx * cw - bw * cx) + aw * (bx * cy - by * cx)
}

/// No three points collinear and no four cocircular.
pub fn general_position(pts: &[Point]) -> bool {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient(pts[i], pts[j], pts[k]) == 0 {
                    return false;
                }
                for l in k + 1..n {
                    if in_circle(pts[i], pts[j], pts[k], pts[l]) == 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Delaunay edges by brute force: a triangle belongs when its circumcircle
/// is empty. Expects points in general position.
pub fn delaunay_edges(pts: &[Point]) -> Vec<(usize, usize)> {
    let n = pts.len();
    let mut edges = std::collections::BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, mut b, mut c) = (pts[i], pts[j], pts[k]);
                if orient(a, b, c) < 0 {
                    std::mem::swap(&mut b, &mut c);
                }
                let empty = (0..n)
                    .filter(|&l| l != i && l != j && l != k)
                    .all(|l| in_circle(a, b, c, pts[l]) < 0);
                if empty {
                    edges.extend([(i, j), (i, k), (j, k)]);
                }
            }
        }
    }
    edges.into_iter().collect()
}

/// Straight-line drawing with no crossings and no vertex resting on an edge.
pub fn drawing_is_plane(pts: &[Point], edges: &[(usize, usize)]) -> bool {
    for (k, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[k + 1..] {
            if cross_properly(pts[a], pts[b], pts[c], pts[d]) {
                return false;
            }
        }
        for (v, &p) in pts.iter().enumerate() {
            if v != a && v != b && on_interior(p, pts[a], pts[b]) {
                return false;
            }
        }
    }
    true
}

/// Whether the graph has a plane embedding, by searching rotation systems
/// for one whose face count meets Euler's formula. `None` past `budget`
/// rotation systems.
pub fn is_planar(n: usize, edges: &[(usize, usize)], budget: u64) -> Option<bool> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    // Pruning leaves never changes planarity.
    let mut alive = vec![true; n];
    loop {
        let leaf = (0..n).find(|&v| alive[v] && adj[v].len() <= 1);
        let Some(v) = leaf else { break };
        alive[v] = false;
        for u in std::mem::take(&mut adj[v]) {
            adj[u].retain(|&x| x != v);
        }
    }
    let core: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let m: usize = core.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
    if core.len() >= 3 && m > 3 * core.len() - 6 {
        return Some(false);
    }
    let mut spent = 0u64;
    let mut seen = vec![false; n];
    for &root in &core {
        if seen[root] {
            continue;
        }
        let mut comp = vec![root];
        seen[root] = true;
        let mut head = 0;
        while head < comp.len() {
            for &u in &adj[comp[head]] {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
            head += 1;
        }
        if !component_planar(&comp, &adj, budget, &mut spent)? {
            return Some(false);
        }
    }
    Some(true)
}

fn component_planar(comp: &[usize], adj: &[Vec<usize>], budget: u64, spent: &mut u64) -> Option<bool> {
    let v = comp.len();
    let e: usize = comp.iter().map(|&x| adj[x].len()).sum::<usize>() / 2;
    if v <= 4 {
        return Some(true);
    }
    let want = e + 2 - v;
    // Rotation at each vertex: first neighbour fixed, the rest permuted.
    let mut rot: Vec<Vec<usize>> = adj.to_vec();
    let mut perms: Vec<Vec<Vec<usize>>> = vec![Vec::new(); adj.len()];
    for &x in comp {
        perms[x] = permutations(&adj[x][1..]).into_iter().map(|mut p| {
            p.insert(0, adj[x][0]);
            p
        }).collect();
    }
    let mut idx = vec![0usize; adj.len()];
    loop {
        *spent += 1;
        if *spent > budget {
            return None;
        }
        for &x in comp {
            rot[x].clone_from(&perms[x][idx[x]]);
        }
        if count_faces(comp, &rot) == want {
            return Some(true);
        }
        // Odometer over the per-vertex choices.
        let mut k = 0;
        loop {
            if k == comp.len() {
                return Some(false);
            }
            let x = comp[k];
            idx[x] += 1;
            if idx[x] < perms[x].len() {
                break;
            }
            idx[x] = 0;
            k += 1;
        }
    }
}

fn count_faces(comp: &[usize], rot: &[Vec<usize>]) -> usize {
    use std::collections::HashSet;
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut faces = 0;
    for &a in comp {
        for &b in &rot[a] {
            if used.contains(&(a, b)) {
                continue;
            }
            faces += 1;
            let (mut u, mut w) = (a, b);
            while used.insert((u, w)) {
                let r = &rot[w];
                let pos = r.iter().position(|&x| x == u).expect("symmetric adjacency");
                let next = r[(pos + 1) % r.len()];
                u = w;
                w = next;
            }
        }
    }
    faces
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        e
    }

    #[test]
    fn kuratowski_graphs() {
        assert_eq!(is_planar(4, &complete(4), 1_000_000), Some(true));
        assert_eq!(is_planar(5, &complete(5), 1_000_000), Some(false));
        let k33: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        assert_eq!(is_planar(6, &k33, 1_000_000), Some(false));
        let mut k5_minus = complete(5);
        k5_minus.pop();
        assert_eq!(is_planar(5, &k5_minus, 1_000_000), Some(true));
    }

    #[test]
    fn square_with_diagonals() {
        let pts = [(0, 0), (4, 0), (4, 4), (0, 4)];
        assert!(!drawing_is_plane(&pts, &[(0, 2), (1, 3)]));
        assert!(drawing_is_plane(&pts, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]));
        // A vertex resting on an edge counts as a crossing.
        let pts = [(0, 0), (4, 0), (2, 0)];
        assert!(!drawing_is_plane(&pts, &[(0, 1)]));
    }

    #[test]
    fn delaunay_is_a_triangulation() {
        let pts = [(0, 0), (10, 1), (3, 9), (11, 12), (5, 4)];
        assert!(general_position(&pts));
        let e = delaunay_edges(&pts);
        assert!(drawing_is_plane(&pts, &e));
        // Hull of 4 points with one inside: 3n - 3 - h edges.
        assert_eq!(e.len(), 3 * 5 - 3 - 4);
    }
}
