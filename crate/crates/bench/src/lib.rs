//! Shared instance builders for the criterion benchmarks.

use gerrygraph::ElectionGraph;

/// Alternating-color path with unit weights.
pub fn striped_path(n: usize) -> ElectionGraph {
    let colors: Vec<usize> = (0..n).map(|i| 1 + i % 2).collect();
    let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    ElectionGraph::new(2, colors, vec![1; n], &edges).expect("valid path")
}

/// r-by-c grid with colors striped by row and unit weights.
pub fn striped_grid(r: usize, c: usize) -> ElectionGraph {
    let mut edges = Vec::new();
    for i in 0..r {
        for j in 0..c {
            if j + 1 < c {
                edges.push((i * c + j, i * c + j + 1));
            }
            if i + 1 < r {
                edges.push((i * c + j, (i + 1) * c + j));
            }
        }
    }
    let colors: Vec<usize> = (0..r * c).map(|v| 1 + (v / c) % 2).collect();
    ElectionGraph::new(2, colors, vec![1; r * c], &edges).expect("valid grid")
}
