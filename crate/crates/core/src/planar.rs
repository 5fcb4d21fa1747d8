//! Combinatorial planar embeddings: rotation systems, face tracing, layer
//! peeling, five-coloring, and seeded generators of embedded instances.
//!
//! No planarity test lives here. Embeddings come from the generators or
//! from input files, and are checked against Euler's formula; a rotation
//! system that fails the check is rejected as evidence of non-planarity or
//! corruption.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ElectionGraph;

/// Combinatorial embedding: a cyclic order of neighbors around every vertex
/// plus the facial walk designated as the outer face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSystem {
    pub rotation: Vec<Vec<usize>>,
    pub outer_face: Vec<usize>,
}

/// Vertex sets of the peeling layers, outermost first.
pub type Layers = Vec<Vec<usize>>;

/// Outcome of checking a rotation system against its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingReport {
    /// Facial walks traced from the rotation system, one per face.
    pub faces: Vec<Vec<usize>>,
    pub violations: Vec<String>,
}

impl EmbeddingReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Walks the faces induced by `rotation` on the vertices marked alive.
/// The successor of arriving at w from u is the neighbor after u in w's
/// rotation; every directed edge lies on exactly one face. Alive vertices
/// without alive neighbors become single-vertex faces.
fn trace_faces(rotation: &[Vec<usize>], alive: &[bool]) -> Vec<Vec<usize>> {
    let n = rotation.len();
    let filtered: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            if alive[v] {
                rotation[v].iter().copied().filter(|&w| alive[w]).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let pos: Vec<std::collections::HashMap<usize, usize>> = filtered
        .iter()
        .map(|neigh| neigh.iter().enumerate().map(|(i, &w)| (w, i)).collect())
        .collect();

    let mut faces = Vec::new();
    let mut seen: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    for u in 0..n {
        if alive[u] && filtered[u].is_empty() {
            faces.push(vec![u]);
        }
        for &v0 in &filtered[u] {
            if seen.contains(&(u, v0)) {
                continue;
            }
            let mut walk = Vec::new();
            let (mut a, mut b) = (u, v0);
            loop {
                walk.push(a);
                seen.insert((a, b));
                let i = pos[b][&a];
                let next = filtered[b][(i + 1) % filtered[b].len()];
                a = b;
                b = next;
                if (a, b) == (u, v0) {
                    break;
                }
            }
            faces.push(walk);
        }
    }
    faces
}

fn cyclic_rotations_contain(walk: &[usize], target: &[usize]) -> bool {
    if walk.len() != target.len() {
        return false;
    }
    let len = walk.len();
    (0..len).any(|s| (0..len).all(|i| walk[(s + i) % len] == target[i]))
}

/// Checks that the rotation lists match the adjacency, that face tracing
/// satisfies Euler's formula on every connected component, and that the
/// designated outer face is one of the traced faces.
pub fn validate_embedding(graph: &ElectionGraph, rs: &RotationSystem) -> EmbeddingReport {
    let n = graph.vertex_count();
    let mut violations = Vec::new();

    if rs.rotation.len() != n {
        violations.push(format!(
            "rotation lists {} vertices, graph has {n}",
            rs.rotation.len()
        ));
        return EmbeddingReport { faces: Vec::new(), violations };
    }
    for v in 0..n {
        let mut expect: Vec<usize> = graph.neighbors(v).to_vec();
        let mut got: Vec<usize> = rs.rotation[v].clone();
        expect.sort_unstable();
        got.sort_unstable();
        if expect != got {
            violations.push(format!(
                "rotation of vertex {v} is not a permutation of its neighbors"
            ));
        }
    }
    if !violations.is_empty() {
        return EmbeddingReport { faces: Vec::new(), violations };
    }

    let alive = vec![true; n];
    let faces = trace_faces(&rs.rotation, &alive);

    for component in graph.connected_components() {
        let in_comp = |v: usize| component.binary_search(&v).is_ok();
        let vc = component.len();
        let ec = component
            .iter()
            .map(|&v| graph.degree(v))
            .sum::<usize>()
            / 2;
        let fc = faces.iter().filter(|f| in_comp(f[0])).count();
        if vc + fc != ec + 2 {
            violations.push(format!(
                "Euler check failed on the component of vertex {}: V={vc} E={ec} F={fc}",
                component[0]
            ));
        }
    }

    let outer_ok = faces.iter().any(|f| {
        let reversed: Vec<usize> = f.iter().rev().copied().collect();
        cyclic_rotations_contain(f, &rs.outer_face) || cyclic_rotations_contain(&reversed, &rs.outer_face)
    });
    if !outer_ok {
        violations.push("designated outer face is not a traced face".to_string());
    }

    EmbeddingReport { faces, violations }
}

/// Peels the embedding into layers: the outer-face vertices first, then
/// repeatedly the vertices sharing a face with the layer just removed.
/// Deleting a layer vacates every face it touches into the unbounded
/// region, so those faces' surviving vertices form the next boundary.
pub fn peel_layers(graph: &ElectionGraph, rs: &RotationSystem) -> Result<Layers> {
    let report = validate_embedding(graph, rs);
    if !report.is_valid() {
        return Err(Error::InvalidInput(format!(
            "embedding invalid: {}",
            report.violations.join("; ")
        )));
    }
    let n = graph.vertex_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    if !graph.is_connected() {
        return Err(Error::InvalidInput(
            "layer peeling requires a connected graph".into(),
        ));
    }

    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut current: Vec<usize> = {
        let mut l1 = rs.outer_face.clone();
        l1.sort_unstable();
        l1.dedup();
        l1
    };
    let mut layers = Vec::new();
    while !current.is_empty() {
        // find the survivors sharing a face with the departing layer before
        // actually removing it
        let faces = trace_faces(&rs.rotation, &alive);
        let is_current = |v: usize| current.binary_search(&v).is_ok();
        let mut next: Vec<usize> = faces
            .iter()
            .filter(|f| f.iter().any(|&v| is_current(v)))
            .flat_map(|f| f.iter().copied())
            .filter(|&v| alive[v] && !is_current(v))
            .collect();
        next.sort_unstable();
        next.dedup();

        for &v in &current {
            alive[v] = false;
        }
        remaining -= current.len();
        layers.push(std::mem::take(&mut current));
        current = next;
    }
    if remaining != 0 {
        return Err(Error::Internal(
            "peeling stranded vertices; embedding and graph disagree".into(),
        ));
    }
    Ok(layers)
}

/// Properly colors a planar graph with at most five colors, by removing a
/// minimum-degree vertex, coloring the rest, and reinserting. A vertex
/// whose five neighbors show five colors is handled by swapping a
/// two-colored component that does not link two of its neighbors; on a
/// planar graph such a pair always exists. Inputs that exceed the planar
/// edge bound, or exhaust every swap, are rejected as non-planar.
pub fn five_color(graph: &ElectionGraph) -> Result<Vec<u8>> {
    let n = graph.vertex_count();
    if n >= 3 && graph.edge_count() > 3 * n - 6 {
        return Err(Error::InvalidInput(format!(
            "not planar: {} edges exceeds the bound {} for {n} vertices",
            graph.edge_count(),
            3 * n - 6
        )));
    }

    // peel vertices at degree <= 5; a simple planar graph always has one
    let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("an alive vertex remains");
        if degree[v] > 5 {
            return Err(Error::InvalidInput(
                "not planar: every remaining vertex has degree at least 6".into(),
            ));
        }
        order.push(v);
        alive[v] = false;
        for &w in graph.neighbors(v) {
            if alive[w] {
                degree[w] -= 1;
            }
        }
    }

    let mut color = vec![0u8; n];
    let mut colored = vec![false; n];
    for &v in order.iter().rev() {
        let mut used = [false; 6];
        for &w in graph.neighbors(v) {
            if colored[w] {
                used[color[w] as usize] = true;
            }
        }
        if let Some(free) = (1..=5u8).find(|&c| !used[c as usize]) {
            color[v] = free;
            colored[v] = true;
            continue;
        }

        // five neighbors, five distinct colors: find colors a, b whose
        // two-colored component at the a-neighbor misses the b-neighbor
        let mut neighbor_of = [usize::MAX; 6];
        for &w in graph.neighbors(v) {
            if colored[w] {
                neighbor_of[color[w] as usize] = w;
            }
        }
        let mut placed = false;
        'pairs: for a in 1..=5u8 {
            for b in a + 1..=5u8 {
                let (na, nb) = (neighbor_of[a as usize], neighbor_of[b as usize]);
                let mut comp = vec![false; n];
                let mut stack = vec![na];
                comp[na] = true;
                while let Some(u) = stack.pop() {
                    for &w in graph.neighbors(u) {
                        if colored[w] && !comp[w] && (color[w] == a || color[w] == b) {
                            comp[w] = true;
                            stack.push(w);
                        }
                    }
                }
                if comp[nb] {
                    continue;
                }
                for u in 0..n {
                    if comp[u] {
                        color[u] = if color[u] == a { b } else { a };
                    }
                }
                color[v] = a;
                colored[v] = true;
                placed = true;
                break 'pairs;
            }
        }
        if !placed {
            return Err(Error::InvalidInput(
                "not planar: no two-color swap frees a color".into(),
            ));
        }
    }
    Ok(color)
}

/// A generated instance: the graph, its embedding, and the peeling layers
/// when the construction knows them analytically.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub graph: ElectionGraph,
    pub embedding: RotationSystem,
    pub layers: Option<Layers>,
}

/// Color and weight model for generated instances: colors uniform over
/// 1..=candidates and weights uniform over 1..=max_weight.
#[derive(Debug, Clone, Copy)]
pub struct GenOptions {
    pub candidates: usize,
    pub max_weight: u64,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { candidates: 2, max_weight: 1 }
    }
}

fn draw_colors_weights(
    n: usize,
    opts: &GenOptions,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<usize>, Vec<u64>)> {
    if opts.candidates < 2 {
        return Err(Error::InvalidInput("need at least 2 candidates".into()));
    }
    if opts.max_weight == 0 {
        return Err(Error::InvalidInput("max weight must be positive".into()));
    }
    let colors = (0..n).map(|_| rng.gen_range(1..=opts.candidates)).collect();
    let weights = (0..n).map(|_| rng.gen_range(1..=opts.max_weight)).collect();
    Ok((colors, weights))
}

/// Picks the outer face among traced ones: the longest walk, smallest
/// canonical rotation on ties.
fn pick_outer_face(faces: &[Vec<usize>]) -> Vec<usize> {
    fn canonical(f: &[usize]) -> Vec<usize> {
        let len = f.len();
        (0..len)
            .map(|s| (0..len).map(|i| f[(s + i) % len]).collect::<Vec<_>>())
            .min()
            .unwrap_or_default()
    }
    faces
        .iter()
        .map(|f| canonical(f))
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
        .expect("at least one face")
}

/// Ring distance of a grid cell from the boundary, used as its analytic
/// peeling layer (outermost ring is layer 1).
fn grid_layers(rows: usize, cols: usize) -> Layers {
    let depth = |i: usize, j: usize| i.min(j).min(rows - 1 - i).min(cols - 1 - j);
    let lambda = rows.min(cols).div_ceil(2);
    let mut layers = vec![Vec::new(); lambda];
    for i in 0..rows {
        for j in 0..cols {
            layers[depth(i, j)].push(i * cols + j);
        }
    }
    layers
}

fn build_grid(
    rows: usize,
    cols: usize,
    diagonals: bool,
) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let at = |i: usize, j: usize| i * cols + j;
    let mut edges = Vec::new();
    let mut rotation = vec![Vec::new(); rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                edges.push((at(i, j), at(i, j + 1)));
            }
            if i + 1 < rows {
                edges.push((at(i, j), at(i + 1, j)));
            }
            if diagonals && i + 1 < rows && j + 1 < cols {
                edges.push((at(i, j), at(i + 1, j + 1)));
            }
            // clockwise fan in screen coordinates: E, SE, S, W, NW, N
            let mut order = Vec::new();
            if j + 1 < cols {
                order.push(at(i, j + 1));
            }
            if diagonals && i + 1 < rows && j + 1 < cols {
                order.push(at(i + 1, j + 1));
            }
            if i + 1 < rows {
                order.push(at(i + 1, j));
            }
            if j > 0 {
                order.push(at(i, j - 1));
            }
            if diagonals && i > 0 && j > 0 {
                order.push(at(i - 1, j - 1));
            }
            if i > 0 {
                order.push(at(i - 1, j));
            }
            rotation[at(i, j)] = order;
        }
    }
    (edges, rotation)
}

fn finish_grid(
    rows: usize,
    cols: usize,
    diagonals: bool,
    opts: &GenOptions,
    seed: u64,
) -> Result<GeneratedInstance> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidInput("grid needs positive dimensions".into()));
    }
    let n = rows * cols;
    let (edges, rotation) = build_grid(rows, cols, diagonals);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (colors, weights) = draw_colors_weights(n, opts, &mut rng)?;
    let graph = ElectionGraph::new(opts.candidates, colors, weights, &edges)?;
    let faces = trace_faces(&rotation, &vec![true; n]);
    let embedding = RotationSystem { rotation, outer_face: pick_outer_face(&faces) };
    Ok(GeneratedInstance {
        graph,
        embedding,
        layers: Some(grid_layers(rows, cols)),
    })
}

/// Axis-aligned grid; the analytic layers are the boundary rings.
pub fn gen_grid(rows: usize, cols: usize, opts: &GenOptions, seed: u64) -> Result<GeneratedInstance> {
    finish_grid(rows, cols, false, opts, seed)
}

/// Grid with a southeast diagonal in every cell. Diagonals connect
/// neighboring rings only, so the analytic layers are unchanged.
pub fn gen_triangulated_grid(
    rows: usize,
    cols: usize,
    opts: &GenOptions,
    seed: u64,
) -> Result<GeneratedInstance> {
    finish_grid(rows, cols, true, opts, seed)
}

/// Simple cycle; every vertex lies on the outer face.
pub fn gen_outerplanar_ring(n: usize, opts: &GenOptions, seed: u64) -> Result<GeneratedInstance> {
    if n < 3 {
        return Err(Error::InvalidInput("ring needs at least 3 vertices".into()));
    }
    let edges: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    let rotation: Vec<Vec<usize>> = (0..n).map(|v| vec![(v + 1) % n, (v + n - 1) % n]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (colors, weights) = draw_colors_weights(n, opts, &mut rng)?;
    let graph = ElectionGraph::new(opts.candidates, colors, weights, &edges)?;
    let faces = trace_faces(&rotation, &vec![true; n]);
    let embedding = RotationSystem { rotation, outer_face: pick_outer_face(&faces) };
    Ok(GeneratedInstance {
        graph,
        embedding,
        layers: Some(vec![(0..n).collect()]),
    })
}

/// Random planar graph: vertices are stacked one by one into a random
/// bounded face of a triangle (yielding a maximal planar graph), then
/// non-outer edges are deleted with probability `delete_prob` wherever the
/// graph stays connected. The rotation system is maintained through both
/// phases; the outer triangle 0-1-2 survives untouched.
pub fn gen_random_planar(
    n: usize,
    delete_prob: f64,
    opts: &GenOptions,
    seed: u64,
) -> Result<GeneratedInstance> {
    if n < 3 {
        return Err(Error::InvalidInput(
            "random planar generation needs at least 3 vertices".into(),
        ));
    }
    if !(0.0..=1.0).contains(&delete_prob) {
        return Err(Error::InvalidInput(
            "deletion probability must lie in [0, 1]".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut rotation: Vec<Vec<usize>> = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    // bounded faces as oriented walks a -> b -> c
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2]];
    for v in 3..n {
        let f = faces[rng.gen_range(0..faces.len())];
        let [a, b, c] = f;
        // insert v into each corner's rotation right after its predecessor
        // on the face walk, giving v the reversed walk as its own rotation
        for (corner, pred) in [(a, c), (b, a), (c, b)] {
            let i = rotation[corner]
                .iter()
                .position(|&x| x == pred)
                .expect("face corners are adjacent");
            rotation[corner].insert(i + 1, v);
        }
        rotation.push(vec![a, c, b]);
        let idx = faces.iter().position(|&g| g == f).expect("chosen face exists");
        faces.swap_remove(idx);
        faces.extend([[a, b, v], [b, c, v], [c, a, v]]);
    }

    let mut adj: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
    for (v, neigh) in rotation.iter().enumerate() {
        for &w in neigh {
            adj[v].insert(w);
        }
    }
    if delete_prob > 0.0 {
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        for v in 0..n {
            for &w in &adj[v] {
                if v < w && !matches!((v, w), (0, 1) | (0, 2) | (1, 2)) {
                    candidates.push((v, w));
                }
            }
        }
        for (v, w) in candidates {
            if rng.gen_range(0.0..1.0) >= delete_prob {
                continue;
            }
            adj[v].remove(&w);
            adj[w].remove(&v);
            if connected_adj(&adj) {
                rotation[v].retain(|&x| x != w);
                rotation[w].retain(|&x| x != v);
            } else {
                adj[v].insert(w);
                adj[w].insert(v);
            }
        }
    }

    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|v| adj[v].iter().copied().filter(move |&w| v < w).map(move |w| (v, w)))
        .collect();
    let (colors, weights) = draw_colors_weights(n, opts, &mut rng)?;
    let graph = ElectionGraph::new(opts.candidates, colors, weights, &edges)?;
    let embedding = RotationSystem { rotation, outer_face: vec![0, 2, 1] };
    Ok(GeneratedInstance { graph, embedding, layers: None })
}

fn connected_adj(adj: &[std::collections::BTreeSet<usize>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}
