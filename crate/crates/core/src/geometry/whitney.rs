//! Whitney decomposition of a planar domain into dyadic squares.
//!
//! The construction splits a square hull of the bounding box dyadically and
//! accepts a square `Q` once its closure lies in `D` and
//! `1 <= dist(Q, ∂D)/diam(Q) <= 4`. Because sides are halved exactly, the
//! classical neighbour bound (touching squares differ by at most a factor 4
//! in diameter) holds exactly for the emitted family.

use super::{seg_seg_dist, Domain, Point};
use crate::error::{Error, Result};

/// One dyadic square of the decomposition.
#[derive(Debug, Clone, Copy)]
pub struct WhitneyCube {
    pub center: Point,
    pub side: f64,
    pub depth: u32,
}

impl WhitneyCube {
    pub fn diam(&self) -> f64 {
        self.side * std::f64::consts::SQRT_2
    }

    pub fn lo(&self) -> Point {
        Point::new(self.center.x - 0.5 * self.side, self.center.y - 0.5 * self.side)
    }

    pub fn hi(&self) -> Point {
        Point::new(self.center.x + 0.5 * self.side, self.center.y + 0.5 * self.side)
    }

    pub fn corners(&self) -> [Point; 4] {
        let (lo, hi) = (self.lo(), self.hi());
        [
            Point::new(lo.x, lo.y),
            Point::new(hi.x, lo.y),
            Point::new(hi.x, hi.y),
            Point::new(lo.x, hi.y),
        ]
    }

    /// Closed-square membership.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        (p.x - self.center.x).abs() <= 0.5 * self.side + tol
            && (p.y - self.center.y).abs() <= 0.5 * self.side + tol
    }

    /// Exact distance from the closed square to ∂D (zero when the square
    /// meets the boundary).
    pub fn boundary_distance(&self, domain: &Domain) -> f64 {
        match domain {
            Domain::Ball { center, radius } => {
                let (lo, hi) = (self.lo(), self.hi());
                // nearest / farthest square point from the ball center
                let nx = center.x.clamp(lo.x, hi.x);
                let ny = center.y.clamp(lo.y, hi.y);
                let dmin = Point::new(nx, ny).dist(*center);
                let dmax = self
                    .corners()
                    .iter()
                    .map(|c| c.dist(*center))
                    .fold(0.0, f64::max);
                if dmax < *radius {
                    radius - dmax
                } else if dmin > *radius {
                    dmin - radius
                } else {
                    0.0
                }
            }
            Domain::Rect { lo, hi } => {
                let segs = [
                    (Point::new(lo.x, lo.y), Point::new(hi.x, lo.y)),
                    (Point::new(hi.x, lo.y), Point::new(hi.x, hi.y)),
                    (Point::new(hi.x, hi.y), Point::new(lo.x, hi.y)),
                    (Point::new(lo.x, hi.y), Point::new(lo.x, lo.y)),
                ];
                segs.iter()
                    .map(|&(a, b)| self.segment_distance(a, b))
                    .fold(f64::INFINITY, f64::min)
            }
            Domain::Polygon { vertices } => {
                let m = vertices.len();
                (0..m)
                    .map(|i| self.segment_distance(vertices[i], vertices[(i + 1) % m]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Distance from the closed square to the segment `[a, b]`.
    fn segment_distance(&self, a: Point, b: Point) -> f64 {
        let (lo, hi) = (self.lo(), self.hi());
        let inside = |p: Point| p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
        if inside(a) || inside(b) {
            return 0.0;
        }
        let cs = self.corners();
        (0..4)
            .map(|i| seg_seg_dist(cs[i], cs[(i + 1) % 4], a, b))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Whitney decomposition with chain-distance queries.
#[derive(Debug, Clone)]
pub struct WhitneyGraph {
    pub cubes: Vec<WhitneyCube>,
    /// Index pairs of squares sharing an edge of positive length.
    pub adjacency: Vec<(usize, usize)>,
    /// Index of the square containing the center point `x0`.
    pub root: usize,
    /// Fraction of |D| left uncovered by the accepted squares.
    pub uncovered_fraction: f64,
    root_point: Point,
    adj_lists: Vec<Vec<usize>>,
    dist_from_root: Vec<u32>,
}

impl WhitneyGraph {
    pub fn root_point(&self) -> Point {
        self.root_point
    }

    /// Index of the covering cube (ties on shared faces resolved to the
    /// lowest index).
    pub fn locate(&self, p: Point) -> Option<usize> {
        let tol = 1e-12;
        self.cubes.iter().position(|c| c.contains(p, tol * c.side))
    }

    /// Breadth-first chain distance from the root cube to the cube covering
    /// `p`.
    pub fn chain_distance(&self, p: Point) -> Result<u32> {
        let idx = self.locate(p).ok_or(Error::Uncovered {
            x: p.x,
            y: p.y,
            depth: self.cubes.iter().map(|c| c.depth).max().unwrap_or(0),
        })?;
        let d = self.dist_from_root[idx];
        if d == u32::MAX {
            return Err(Error::NoConvergence(format!(
                "cube {idx} is not chain-connected to the root"
            )));
        }
        Ok(d)
    }

    /// BFS distances from an arbitrary cube (u32::MAX marks unreachable).
    pub fn bfs_from(&self, start: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.cubes.len()];
        let mut queue = std::collections::VecDeque::new();
        dist[start] = 0;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            for &j in &self.adj_lists[i] {
                if dist[j] == u32::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.dist_from_root.iter().all(|&d| d != u32::MAX)
    }
}

/// Builds the Whitney decomposition of `domain` down to `max_depth` dyadic
/// levels, rooted at the cube covering `x0`.
///
/// Squares whose acceptance would require splitting past `max_depth` are
/// dropped; their volume shows up in `uncovered_fraction`. Fails when `x0`
/// itself ends up uncovered.
pub fn whitney_decompose(domain: &Domain, x0: Point, max_depth: u32) -> Result<WhitneyGraph> {
    if max_depth < 1 {
        return Err(Error::InvalidArgument {
            name: "max_depth",
            reason: "must be >= 1".into(),
        });
    }
    if !domain.contains(x0) {
        return Err(Error::PointOutside {
            x: x0.x,
            y: x0.y,
            reason: "x0 must lie in the domain".into(),
        });
    }
    let (lo, hi) = domain.bounding_box();
    let side = (hi.x - lo.x).max(hi.y - lo.y);
    let root_cube = WhitneyCube {
        center: Point::new(0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)),
        side,
        depth: 0,
    };

    let mut accepted: Vec<WhitneyCube> = Vec::new();
    let mut stack = vec![root_cube];
    while let Some(cube) = stack.pop() {
        let bdist = cube.boundary_distance(domain);
        let inside = domain.contains(cube.center);
        if bdist > 0.0 && !inside {
            continue; // fully outside D
        }
        if bdist > 0.0 && inside {
            let ratio = bdist / cube.diam();
            if ratio >= 1.0 {
                debug_assert!(ratio <= 4.0, "whitney ratio {ratio} out of range");
                accepted.push(cube);
                continue;
            }
        }
        if cube.depth >= max_depth {
            continue; // dropped: counted via uncovered volume
        }
        let s = 0.5 * cube.side;
        let q = 0.5 * s;
        for (dx, dy) in [(-q, -q), (q, -q), (-q, q), (q, q)] {
            stack.push(WhitneyCube {
                center: Point::new(cube.center.x + dx, cube.center.y + dy),
                side: s,
                depth: cube.depth + 1,
            });
        }
    }
    // deterministic order: coarse to fine, then lexicographic
    accepted.sort_by(|a, b| {
        a.depth
            .cmp(&b.depth)
            .then(a.center.y.partial_cmp(&b.center.y).unwrap())
            .then(a.center.x.partial_cmp(&b.center.x).unwrap())
    });

    let covered: f64 = accepted.iter().map(|c| c.side * c.side).sum();
    let uncovered_fraction = ((domain.area() - covered) / domain.area()).max(0.0);

    let mut adjacency = Vec::new();
    let n = accepted.len();
    let mut adj_lists = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if cubes_touch_edge(&accepted[i], &accepted[j]) {
                adjacency.push((i, j));
                adj_lists[i].push(j);
                adj_lists[j].push(i);
            }
        }
    }

    let root = accepted
        .iter()
        .position(|c| c.contains(x0, 1e-12 * c.side))
        .ok_or(Error::Uncovered {
            x: x0.x,
            y: x0.y,
            depth: max_depth,
        })?;

    let mut graph = WhitneyGraph {
        cubes: accepted,
        adjacency,
        root,
        uncovered_fraction,
        root_point: x0,
        adj_lists,
        dist_from_root: Vec::new(),
    };
    graph.dist_from_root = graph.bfs_from(root);
    Ok(graph)
}

/// Squares share an edge of positive length (corner-only contact excluded).
fn cubes_touch_edge(a: &WhitneyCube, b: &WhitneyCube) -> bool {
    let gap = 0.5 * (a.side + b.side);
    let tol = 1e-9 * gap;
    let dx = (a.center.x - b.center.x).abs();
    let dy = (a.center.y - b.center.y).abs();
    let overlap_x = gap - dx;
    let overlap_y = gap - dy;
    // touching along a vertical edge: x-gap exact, y-intervals overlap
    let touch_x = (dx - gap).abs() <= tol && overlap_y > tol;
    let touch_y = (dy - gap).abs() <= tol && overlap_x > tol;
    touch_x || touch_y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_ball() -> Domain {
        Domain::ball(Point::new(0.0, 0.0), 1.0).unwrap()
    }

    fn unit_box() -> Domain {
        Domain::rect(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap()
    }

    #[test]
    fn property_three_holds_for_ball() {
        let d = unit_ball();
        let g = whitney_decompose(&d, Point::new(0.0, 0.0), 8).unwrap();
        assert!(!g.cubes.is_empty());
        for c in &g.cubes {
            let ratio = c.boundary_distance(&d) / c.diam();
            assert!((1.0..=4.0).contains(&ratio), "ratio {ratio}");
            for corner in c.corners() {
                assert!(d.dist_to_boundary(corner) > 0.0 || d.contains(corner));
            }
        }
    }

    #[test]
    fn property_two_holds_for_box() {
        let d = unit_box();
        let g = whitney_decompose(&d, Point::new(0.5, 0.5), 8).unwrap();
        for &(i, j) in &g.adjacency {
            let r = g.cubes[i].diam() / g.cubes[j].diam();
            assert!((0.25..=4.0).contains(&r), "diam ratio {r}");
        }
    }

    #[test]
    fn property_one_disjoint_interiors() {
        let d = unit_ball();
        let g = whitney_decompose(&d, Point::new(0.0, 0.0), 7).unwrap();
        for i in 0..g.cubes.len() {
            for j in (i + 1)..g.cubes.len() {
                let (a, b) = (&g.cubes[i], &g.cubes[j]);
                let ox = 0.5 * (a.side + b.side) - (a.center.x - b.center.x).abs();
                let oy = 0.5 * (a.side + b.side) - (a.center.y - b.center.y).abs();
                let tol = 1e-9 * (a.side + b.side);
                assert!(ox <= tol || oy <= tol, "cubes {i} and {j} overlap");
            }
        }
    }

    #[test]
    fn uncovered_fraction_decreases_with_depth() {
        let d = unit_ball();
        let mut prev = f64::INFINITY;
        for depth in 4..=10 {
            let g = whitney_decompose(&d, Point::new(0.0, 0.0), depth).unwrap();
            assert!(
                g.uncovered_fraction <= prev + 1e-12,
                "depth {depth}: {} > {prev}",
                g.uncovered_fraction
            );
            prev = g.uncovered_fraction;
        }
        assert!(prev < 0.05);
    }

    #[test]
    fn chain_distance_basics() {
        let d = unit_box();
        let x0 = Point::new(0.5, 0.5);
        let g = whitney_decompose(&d, x0, 9).unwrap();
        assert_eq!(g.chain_distance(x0).unwrap(), 0);
        assert!(g.is_connected());
        // an adjacent cube to the root is one step away
        let neighbor = g.adj_lists[g.root][0];
        assert_eq!(g.bfs_from(g.root)[neighbor], 1);
    }

    #[test]
    fn chain_distance_grows_affinely_toward_boundary() {
        let d = unit_box();
        let x0 = Point::new(0.5, 0.5);
        let g = whitney_decompose(&d, x0, 12).unwrap();
        // points at boundary distance 2^-k: chain distance should grow ~ k
        let mut dists = Vec::new();
        for k in 2..=8 {
            let delta = 2f64.powi(-k);
            let p = Point::new(0.5, delta * 1.5);
            dists.push(g.chain_distance(p).unwrap() as f64);
        }
        // linear fit slope over k
        let n = dists.len() as f64;
        let ks: Vec<f64> = (2..=8).map(|k| k as f64).collect();
        let mk = ks.iter().sum::<f64>() / n;
        let md = dists.iter().sum::<f64>() / n;
        let slope: f64 = ks
            .iter()
            .zip(&dists)
            .map(|(k, d)| (k - mk) * (d - md))
            .sum::<f64>()
            / ks.iter().map(|k| (k - mk).powi(2)).sum::<f64>();
        assert!(slope > 0.3, "chain distance should grow with depth, slope {slope}");
        // residuals from the fit stay small (affine growth)
        let icept = md - slope * mk;
        for (k, d) in ks.iter().zip(&dists) {
            assert!((d - (slope * k + icept)).abs() < 2.5, "k={k} d={d}");
        }
    }

    #[test]
    fn symmetric_chain_distance_under_rerooting() {
        let d = unit_ball();
        let x0 = Point::new(0.0, 0.0);
        let x1 = Point::new(0.6, 0.2);
        let g = whitney_decompose(&d, x0, 9).unwrap();
        let i0 = g.locate(x0).unwrap();
        let i1 = g.locate(x1).unwrap();
        let d01 = g.bfs_from(i0)[i1];
        let d10 = g.bfs_from(i1)[i0];
        assert_eq!(d01, d10);
    }

    #[test]
    fn root_failure_reported() {
        // x0 so close to the boundary that no cube at depth <= 2 covers it
        let d = unit_ball();
        let res = whitney_decompose(&d, Point::new(0.999, 0.0), 2);
        assert!(res.is_err());
    }

    #[test]
    fn l_shape_decomposes() {
        let d = Domain::l_shape();
        let g = whitney_decompose(&d, d.anchor(), 9).unwrap();
        assert!(g.is_connected());
        for c in &g.cubes {
            let ratio = c.boundary_distance(&d) / c.diam();
            assert!((1.0..=4.0).contains(&ratio));
        }
    }
}
