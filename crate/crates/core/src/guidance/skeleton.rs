//! Grid medial-axis approximation of the point-robot free workspace.
//!
//! Free space is rasterized at cell centers, an exact Euclidean distance
//! transform gives clearance, and distance-ordered homotopic thinning reduces
//! the free cells to one-cell-wide curves. The curves are traced into a graph
//! of polylines, and leaf spurs shorter than the clearance at their junction
//! are pruned.

use std::collections::VecDeque;
use std::sync::OnceLock;

use serde::Serialize;

use crate::geometry::{Environment, Vec2};

/// A polyline between two skeleton vertices. `points[0]` is vertex `from`
/// and the last point is vertex `to`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkeletonEdge {
    pub from: usize,
    pub to: usize,
    pub points: Vec<Vec2>,
    /// Distance to the nearest obstacle or boundary at each point, meters.
    pub clearance: Vec<f64>,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl SkeletonEdge {
    fn new(from: usize, to: usize, points: Vec<Vec2>, clearance: Vec<f64>) -> Self {
        let mut cumulative = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        for (i, p) in points.iter().enumerate() {
            if i > 0 {
                acc += p.dist(points[i - 1]);
            }
            cumulative.push(acc);
        }
        Self {
            from,
            to,
            points,
            clearance,
            cumulative,
        }
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }

    /// Point at arc length `s` from `points[0]`, clamped to the polyline.
    pub fn point_at(&self, s: f64) -> Vec2 {
        if s <= 0.0 || self.points.len() == 1 {
            return self.points[0];
        }
        let i = self.cumulative.partition_point(|&c| c < s);
        if i >= self.points.len() {
            return *self.points.last().unwrap();
        }
        let (a, b) = (self.points[i - 1], self.points[i]);
        let seg = self.cumulative[i] - self.cumulative[i - 1];
        let t = if seg > 0.0 {
            (s - self.cumulative[i - 1]) / seg
        } else {
            0.0
        };
        Vec2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
    }

    fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        let mut clearance = self.clearance.clone();
        clearance.reverse();
        Self::new(self.to, self.from, points, clearance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkeletonGraph {
    vertices: Vec<Vec2>,
    vertex_clearance: Vec<f64>,
    edges: Vec<SkeletonEdge>,
    cell: f64,
    #[serde(skip)]
    incidence: Vec<Vec<usize>>,
}

impl SkeletonGraph {
    fn new(
        vertices: Vec<Vec2>,
        vertex_clearance: Vec<f64>,
        edges: Vec<SkeletonEdge>,
        cell: f64,
    ) -> Self {
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            incidence[e.from].push(i);
            if e.to != e.from {
                incidence[e.to].push(i);
            }
        }
        Self {
            vertices,
            vertex_clearance,
            edges,
            cell,
            incidence,
        }
    }

    /// True when the workspace has no free cell at this resolution.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn vertex_clearance(&self) -> &[f64] {
        &self.vertex_clearance
    }

    pub fn edges(&self) -> &[SkeletonEdge] {
        &self.edges
    }

    pub fn cell(&self) -> f64 {
        self.cell
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// Every skeleton point with its clearance: vertices and polyline points.
    pub fn points(&self) -> impl Iterator<Item = (Vec2, f64)> + '_ {
        self.vertices
            .iter()
            .copied()
            .zip(self.vertex_clearance.iter().copied())
            .chain(
                self.edges
                    .iter()
                    .flat_map(|e| e.points.iter().copied().zip(e.clearance.iter().copied())),
            )
    }

    pub fn nearest_vertex(&self, p: Vec2) -> Option<usize> {
        (0..self.vertices.len()).min_by(|&a, &b| {
            self.vertices[a]
                .dist(p)
                .total_cmp(&self.vertices[b].dist(p))
        })
    }

    pub fn nearest_point(&self, p: Vec2) -> Option<Vec2> {
        self.points()
            .map(|(q, _)| q)
            .min_by(|a, b| a.dist(p).total_cmp(&b.dist(p)))
    }

    /// Structured text dump (JSON) for debugging and rendering.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("skeleton serializes")
    }
}

/// Occupancy raster at cell centers with an exact distance transform.
struct Raster {
    cols: usize,
    rows: usize,
    origin: Vec2,
    cell: f64,
    free: Vec<bool>,
    /// Squared distance, in cells, from each cell center to the nearest occupied
    /// cell center (the ring outside the bounds counts as occupied).
    dist_sq: Vec<f64>,
}

impl Raster {
    fn new(env: &Environment, cell: f64) -> Self {
        let b = env.bounds;
        let cols = (b.width() / cell).round().max(1.0) as usize;
        let rows = (b.height() / cell).round().max(1.0) as usize;
        let mut free = vec![false; cols * rows];
        for r in 0..rows {
            for c in 0..cols {
                let p = Vec2::new(
                    b.min.x + (c as f64 + 0.5) * cell,
                    b.min.y + (r as f64 + 0.5) * cell,
                );
                free[r * cols + c] = env.point_free(p);
            }
        }
        let dist_sq = distance_transform(&free, cols, rows);
        Self {
            cols,
            rows,
            origin: b.min,
            cell,
            free,
            dist_sq,
        }
    }

    fn center(&self, i: usize) -> Vec2 {
        let (c, r) = (i % self.cols, i / self.cols);
        Vec2::new(
            self.origin.x + (c as f64 + 0.5) * self.cell,
            self.origin.y + (r as f64 + 0.5) * self.cell,
        )
    }

    /// Clearance in meters: center-to-center distance minus half a cell.
    fn clearance(&self, i: usize) -> f64 {
        (self.dist_sq[i].sqrt() - 0.5).max(0.0) * self.cell
    }

    fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let (c, r) = ((i % self.cols) as i64, (i / self.cols) as i64);
        NEIGHBOR_OFFSETS.iter().filter_map(move |&(dc, dr)| {
            let (nc, nr) = (c + dc, r + dr);
            (nc >= 0 && nr >= 0 && nc < self.cols as i64 && nr < self.rows as i64)
                .then(|| nr as usize * self.cols + nc as usize)
        })
    }
}

/// Clockwise from north: N, NE, E, SE, S, SW, W, NW.
const NEIGHBOR_OFFSETS: [(i64, i64); 8] = [
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
];

/// Exact squared Euclidean distance transform (separable lower envelope of
/// parabolas), with everything outside the grid treated as occupied.
fn distance_transform(free: &[bool], cols: usize, rows: usize) -> Vec<f64> {
    // pad by one occupied cell on every side
    let (pc, pr) = (cols + 2, rows + 2);
    // large enough to dominate, small enough that adding q² stays exact
    let inf = 1e12;
    let mut grid = vec![0.0; pc * pr];
    for r in 0..rows {
        for c in 0..cols {
            if free[r * cols + c] {
                grid[(r + 1) * pc + c + 1] = inf;
            }
        }
    }
    let mut buf = vec![0.0; pc.max(pr)];
    let mut out = vec![0.0; pc.max(pr)];
    for r in 0..pr {
        buf[..pc].copy_from_slice(&grid[r * pc..(r + 1) * pc]);
        edt_1d(&buf[..pc], &mut out[..pc]);
        grid[r * pc..(r + 1) * pc].copy_from_slice(&out[..pc]);
    }
    for c in 0..pc {
        for r in 0..pr {
            buf[r] = grid[r * pc + c];
        }
        edt_1d(&buf[..pr], &mut out[..pr]);
        for r in 0..pr {
            grid[r * pc + c] = out[r];
        }
    }
    let mut result = vec![0.0; cols * rows];
    for r in 0..rows {
        for c in 0..cols {
            result[r * cols + c] = grid[(r + 1) * pc + c + 1];
        }
    }
    result
}

fn edt_1d(f: &[f64], d: &mut [f64]) {
    let n = f.len();
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let s = loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q - p) as f64);
            if s <= z[k] {
                k -= 1;
            } else {
                break s;
            }
        };
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    k = 0;
    for (q, dq) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        *dq = (q as f64 - p as f64).powi(2) + f[p];
    }
}

/// Deletability of the center pixel for each 8-neighborhood mask (bit i set
/// when neighbor `NEIGHBOR_OFFSETS[i]` is foreground): exactly one 8-connected
/// foreground component and exactly one 4-connected background component
/// touching the center's 4-neighbors.
fn simple_point_table() -> &'static [bool; 256] {
    static TABLE: OnceLock<[bool; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [false; 256];
        for (mask, slot) in t.iter_mut().enumerate() {
            let fg: Vec<bool> = (0..8).map(|i| mask & (1 << i) != 0).collect();
            let fg_components = count_components(&fg, |a, b| adjacent(a, b, true));
            let bg: Vec<bool> = fg.iter().map(|f| !f).collect();
            let bg_components = components_touching_four(&bg);
            *slot = fg_components == 1 && bg_components == 1;
        }
        t
    })
}

fn adjacent(a: usize, b: usize, eight: bool) -> bool {
    let (ax, ay) = NEIGHBOR_OFFSETS[a];
    let (bx, by) = NEIGHBOR_OFFSETS[b];
    let (dx, dy) = ((ax - bx).abs(), (ay - by).abs());
    if eight {
        dx <= 1 && dy <= 1
    } else {
        dx + dy == 1
    }
}

fn count_components(member: &[bool], adj: impl Fn(usize, usize) -> bool) -> usize {
    label(member, adj)
        .into_iter()
        .flatten()
        .max()
        .map_or(0, |m| m + 1)
}

fn label(member: &[bool], adj: impl Fn(usize, usize) -> bool) -> Vec<Option<usize>> {
    let mut lab: Vec<Option<usize>> = vec![None; 8];
    let mut next = 0;
    for s in 0..8 {
        if !member[s] || lab[s].is_some() {
            continue;
        }
        let mut stack = vec![s];
        lab[s] = Some(next);
        while let Some(a) = stack.pop() {
            for b in 0..8 {
                if member[b] && lab[b].is_none() && adj(a, b) {
                    lab[b] = Some(next);
                    stack.push(b);
                }
            }
        }
        next += 1;
    }
    lab
}

fn components_touching_four(bg: &[bool]) -> usize {
    let lab = label(bg, |a, b| adjacent(a, b, false));
    let mut seen: Vec<usize> = [0usize, 2, 4, 6].iter().filter_map(|&i| lab[i]).collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn neighborhood_mask(r: &Raster, fg: &[bool], i: usize) -> (u8, u32) {
    let (c, row) = ((i % r.cols) as i64, (i / r.cols) as i64);
    let mut mask = 0u8;
    for (bit, &(dc, dr)) in NEIGHBOR_OFFSETS.iter().enumerate() {
        let (nc, nr) = (c + dc, row + dr);
        if nc >= 0
            && nr >= 0
            && nc < r.cols as i64
            && nr < r.rows as i64
            && fg[nr as usize * r.cols + nc as usize]
        {
            mask |= 1 << bit;
        }
    }
    (mask, mask.count_ones())
}

/// Cells not covered by a neighbor's maximal disk: for every 8-neighbor `q`,
/// `dt(q) - dt(p) < MEDIAL_SLACK * |p - q|`.
fn medial_anchors(r: &Raster) -> Vec<bool> {
    let dt: Vec<f64> = r.dist_sq.iter().map(|d| d.sqrt()).collect();
    (0..r.free.len())
        .map(|i| {
            r.free[i]
                && r.neighbors(i).all(|j| {
                    let step = if (i % r.cols).abs_diff(j % r.cols)
                        + (i / r.cols).abs_diff(j / r.cols)
                        == 2
                    {
                        std::f64::consts::SQRT_2
                    } else {
                        1.0
                    };
                    !r.free[j] || dt[j] - dt[i] < MEDIAL_SLACK * step
                })
        })
        .collect()
}

const MEDIAL_SLACK: f64 = 0.8;

/// Two stages: homotopic deletion of non-anchor cells in order of increasing
/// clearance, then directional (N, S, E, W) thinning that keeps end points,
/// which reduces the remaining bands to one-cell-wide curves.
fn thin(r: &Raster) -> Vec<bool> {
    let table = simple_point_table();
    let anchors = medial_anchors(r);
    let mut fg = r.free.clone();
    let mut order: Vec<usize> = (0..fg.len()).filter(|&i| fg[i] && !anchors[i]).collect();
    order.sort_by(|&a, &b| r.dist_sq[a].total_cmp(&r.dist_sq[b]).then(a.cmp(&b)));
    loop {
        let mut changed = false;
        for &i in &order {
            if fg[i] && table[neighborhood_mask(r, &fg, i).0 as usize] {
                fg[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        order.retain(|&i| fg[i]);
    }

    let deletable = |fg: &[bool], i: usize| {
        let (mask, count) = neighborhood_mask(r, fg, i);
        count >= 2 && table[mask as usize]
    };
    loop {
        let mut changed = false;
        // bit index of the neighbor that must be background: N, S, E, W
        for bit in [0usize, 4, 2, 6] {
            let candidates: Vec<usize> = (0..fg.len())
                .filter(|&i| {
                    fg[i] && neighborhood_mask(r, &fg, i).0 & (1 << bit) == 0 && deletable(&fg, i)
                })
                .collect();
            for i in candidates {
                if deletable(&fg, i) {
                    fg[i] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    fg
}

/// Grid medial axis of the free workspace at resolution `cell`.
///
/// Returns an empty graph when no cell center is free.
pub fn compute_skeleton(env: &Environment, cell: f64) -> SkeletonGraph {
    assert!(cell > 0.0, "skeleton cell size must be positive");
    let raster = Raster::new(env, cell);
    let skel = thin(&raster);
    let graph = trace(&raster, &skel);
    prune_spurs(graph)
}

struct Tracer<'a> {
    r: &'a Raster,
    skel: &'a [bool],
    vertex_of: Vec<Option<usize>>,
    vertices: Vec<Vec2>,
    clearance: Vec<f64>,
    visited: Vec<bool>,
}

impl Tracer<'_> {
    /// Walks from vertex `start` through pixel `first` until another vertex.
    fn walk(&mut self, start: usize, first: usize) -> Option<SkeletonEdge> {
        let mut points = vec![self.vertices[start]];
        let mut clear = vec![self.clearance[start]];
        let mut prev: Option<usize> = None;
        let mut cur = first;
        loop {
            if let Some(v) = self.vertex_of[cur] {
                points.push(self.vertices[v]);
                clear.push(self.clearance[v]);
                return Some(SkeletonEdge::new(start, v, points, clear));
            }
            if self.visited[cur] {
                return None;
            }
            self.visited[cur] = true;
            points.push(self.r.center(cur));
            clear.push(self.r.clearance(cur));
            let next = self
                .r
                .neighbors(cur)
                .filter(|&j| self.skel[j] && Some(j) != prev)
                // do not step straight back into the start vertex
                .filter(|&j| self.vertex_of[j] != Some(start) || points.len() > 2)
                .find(|&j| !self.visited[j] || self.vertex_of[j].is_some());
            prev = Some(cur);
            cur = next?;
        }
    }
}

fn trace(r: &Raster, skel: &[bool]) -> SkeletonGraph {
    let n = skel.len();
    let degree: Vec<usize> = (0..n)
        .map(|i| {
            if skel[i] {
                r.neighbors(i).filter(|&j| skel[j]).count()
            } else {
                0
            }
        })
        .collect();
    let is_vertex_pixel = |i: usize| skel[i] && degree[i] != 2;
    // touching junction pixels (degree >= 3) collapse into one vertex
    let mut vertex_of: Vec<Option<usize>> = vec![None; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if !is_vertex_pixel(i) || vertex_of[i].is_some() {
            continue;
        }
        let id = clusters.len();
        let mut cluster = vec![i];
        vertex_of[i] = Some(id);
        let mut q = VecDeque::from([i]);
        while let Some(a) = q.pop_front() {
            if degree[a] < 3 {
                continue;
            }
            for b in r.neighbors(a) {
                if is_vertex_pixel(b) && degree[b] >= 3 && vertex_of[b].is_none() {
                    vertex_of[b] = Some(id);
                    cluster.push(b);
                    q.push_back(b);
                }
            }
        }
        clusters.push(cluster);
    }
    let mut vertices = Vec::with_capacity(clusters.len());
    let mut clearance = Vec::with_capacity(clusters.len());
    for cluster in &clusters {
        // representative: the cluster pixel with the largest clearance
        let rep = *cluster
            .iter()
            .max_by(|&&a, &&b| r.dist_sq[a].total_cmp(&r.dist_sq[b]).then(b.cmp(&a)))
            .unwrap();
        vertices.push(r.center(rep));
        clearance.push(r.clearance(rep));
    }

    let mut t = Tracer {
        r,
        skel,
        vertex_of,
        vertices,
        clearance,
        visited: vec![false; n],
    };
    let mut edges = Vec::new();
    for (id, cluster) in clusters.iter().enumerate() {
        for &p in cluster {
            for nb in r.neighbors(p) {
                if !skel[nb] || t.vertex_of[nb] == Some(id) {
                    continue;
                }
                if let Some(other) = t.vertex_of[nb] {
                    // two vertices touching directly
                    if other > id {
                        edges.push(SkeletonEdge::new(
                            id,
                            other,
                            vec![t.vertices[id], t.vertices[other]],
                            vec![t.clearance[id], t.clearance[other]],
                        ));
                    }
                    continue;
                }
                if t.visited[nb] {
                    continue;
                }
                if let Some(e) = t.walk(id, nb) {
                    edges.push(e);
                }
            }
        }
    }
    // pure cycles have no vertex pixel: break each at an arbitrary pixel
    for i in 0..n {
        if skel[i] && !t.visited[i] && t.vertex_of[i].is_none() {
            let id = t.vertices.len();
            t.vertices.push(r.center(i));
            t.clearance.push(r.clearance(i));
            t.vertex_of[i] = Some(id);
            t.visited[i] = true;
            let first = r
                .neighbors(i)
                .find(|&j| skel[j])
                .expect("cycle pixel has neighbors");
            if let Some(e) = t.walk(id, first) {
                edges.push(e);
            }
        }
    }
    dedup_edges(&mut edges);
    SkeletonGraph::new(t.vertices, t.clearance, edges, r.cell)
}

fn dedup_edges(edges: &mut Vec<SkeletonEdge>) {
    let mut kept: Vec<SkeletonEdge> = Vec::with_capacity(edges.len());
    for e in edges.drain(..) {
        let dup = kept.iter().any(|k| {
            (k.from == e.from && k.to == e.to && k.points == e.points)
                || (k.from == e.to && k.to == e.from && k.reversed().points == e.points)
        });
        if !dup {
            kept.push(e);
        }
    }
    *edges = kept;
}

/// Drops leaf edges shorter than the clearance at their junction, then merges
/// the degree-2 vertices this leaves behind.
fn prune_spurs(g: SkeletonGraph) -> SkeletonGraph {
    if g.is_empty() {
        return g;
    }
    let SkeletonGraph {
        vertices,
        vertex_clearance,
        edges,
        cell,
        incidence,
    } = g;
    let degree: Vec<usize> = incidence.iter().map(Vec::len).collect();
    let mut alive: Vec<bool> = edges
        .iter()
        .map(|e| {
            let hub = match (degree[e.from], degree[e.to]) {
                (1, d) if d >= 3 => e.to,
                (d, 1) if d >= 3 => e.from,
                _ => return true,
            };
            e.length() >= vertex_clearance[hub]
        })
        .collect();

    // merge chains through vertices left with exactly two live edges
    let mut edges = edges;
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for (i, e) in edges.iter().enumerate() {
        if alive[i] {
            inc[e.from].push(i);
            if e.to != e.from {
                inc[e.to].push(i);
            }
        }
    }
    for v in 0..vertices.len() {
        let live: Vec<usize> = inc[v].iter().copied().filter(|&i| alive[i]).collect();
        if live.len() != 2 || degree[v] == 2 {
            continue;
        }
        let (a, b) = (live[0], live[1]);
        if a == b || edges[a].from == edges[a].to || edges[b].from == edges[b].to {
            continue;
        }
        let ea = if edges[a].to == v {
            edges[a].clone()
        } else {
            edges[a].reversed()
        };
        let eb = if edges[b].from == v {
            edges[b].clone()
        } else {
            edges[b].reversed()
        };
        let mut points = ea.points.clone();
        points.extend_from_slice(&eb.points[1..]);
        let mut clear = ea.clearance.clone();
        clear.extend_from_slice(&eb.clearance[1..]);
        let merged = SkeletonEdge::new(ea.from, eb.to, points, clear);
        alive[a] = false;
        alive[b] = false;
        let id = edges.len();
        edges.push(merged);
        alive.push(true);
        for end in [edges[id].from, edges[id].to] {
            inc[end].push(id);
        }
    }

    // re-index: keep vertices that still touch a live edge, or isolated components
    let mut used = vec![false; vertices.len()];
    for (i, e) in edges.iter().enumerate() {
        if alive[i] {
            used[e.from] = true;
            used[e.to] = true;
        }
    }
    for v in 0..vertices.len() {
        if degree[v] == 0 {
            used[v] = true;
        }
    }
    let mut remap = vec![usize::MAX; vertices.len()];
    let mut new_vertices = Vec::new();
    let mut new_clear = Vec::new();
    for v in 0..vertices.len() {
        if used[v] {
            remap[v] = new_vertices.len();
            new_vertices.push(vertices[v]);
            new_clear.push(vertex_clearance[v]);
        }
    }
    let new_edges = edges
        .into_iter()
        .zip(alive)
        .filter(|(_, a)| *a)
        .map(|(e, _)| SkeletonEdge::new(remap[e.from], remap[e.to], e.points, e.clearance))
        .collect();
    SkeletonGraph::new(new_vertices, new_clear, new_edges, cell)
}
