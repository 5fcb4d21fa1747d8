//! Polynomial-time approximation scheme for singleton winning seats on
//! embedded planar graphs. Vertices are binned into peeling layers; for
//! each residue class modulo λ the matching layers are recolored red and
//! contracted, which caps the treewidth, and the exact solver runs on the
//! contracted graph. The best lifted result across residues carries a
//! (λ−1)/λ fraction of the optimum.

use crate::dp::{solve_exact, DpOptions};
use crate::error::{Error, Result};
use crate::graph::{
    contract_vertex_set, count_winning, expand_districting, recolor_to_two, split_to_exactly_k,
    Districting, ElectionGraph, KMode, Objective, ProvenanceMap, SolveRequest,
};
use crate::planar::{peel_layers, RotationSystem};
use crate::treewidth::{
    exact_decomposition_small, heuristic_decomposition, make_nice, EXACT_DECOMPOSITION_CAP,
};

/// One residue's contracted graph: layers whose 1-based index is congruent
/// to `residue` modulo λ have been recolored red and collapsed one intra-
/// layer component at a time.
#[derive(Debug, Clone)]
pub struct BakerInstance {
    pub residue: usize,
    pub graph: ElectionGraph,
    pub provenance: ProvenanceMap,
    /// Treewidth this construction is expected to stay within.
    pub width_hint: usize,
}

fn induced_components(graph: &ElectionGraph, set: &[usize]) -> Vec<Vec<usize>> {
    let members: std::collections::BTreeSet<usize> = set.iter().copied().collect();
    let mut seen: std::collections::BTreeSet<usize> = Default::default();
    let mut comps = Vec::new();
    for &s in set {
        if seen.contains(&s) {
            continue;
        }
        let mut comp = vec![s];
        let mut stack = vec![s];
        seen.insert(s);
        while let Some(u) = stack.pop() {
            for &w in graph.neighbors(u) {
                if members.contains(&w) && seen.insert(w) {
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Builds the λ contracted graphs, one per residue class of the layer
/// index. Expanding any districting of an instance through its provenance
/// yields a districting of the input with the same number of blue
/// singleton winners.
pub fn baker_graphs(
    graph: &ElectionGraph,
    rs: &RotationSystem,
    lambda: usize,
) -> Result<Vec<BakerInstance>> {
    if lambda < 2 {
        return Err(Error::InvalidInput(
            "layer thinning needs at least two residue classes".into(),
        ));
    }
    if graph.candidates() != 2 {
        return Err(Error::InvalidInput(
            "layer thinning expects a two-colored graph".into(),
        ));
    }
    let layers = peel_layers(graph, rs)?;
    let n = graph.vertex_count();
    let weights: Vec<u64> = (0..n).map(|v| graph.weight(v)).collect();

    let mut out = Vec::with_capacity(lambda);
    for j in 0..lambda {
        let matched: Vec<&Vec<usize>> = layers
            .iter()
            .enumerate()
            .filter(|(idx, _)| (idx + 1) % lambda == j)
            .map(|(_, layer)| layer)
            .collect();

        let mut colors: Vec<usize> = (0..n).map(|v| graph.color(v)).collect();
        for layer in &matched {
            for &v in *layer {
                colors[v] = 2;
            }
        }
        let mut g = ElectionGraph::new(2, colors, weights.clone(), &graph.edges())?;
        let mut prov = ProvenanceMap::identity(n);

        for layer in &matched {
            for comp in induced_components(graph, layer) {
                if comp.len() < 2 {
                    continue;
                }
                // earlier contractions shifted ids; find where the
                // component's original vertices live now
                let mut where_is = vec![usize::MAX; n];
                for cur in 0..prov.len() {
                    for &orig in prov.group(cur) {
                        where_is[orig] = cur;
                    }
                }
                let mut current: Vec<usize> = comp.iter().map(|&o| where_is[o]).collect();
                current.sort_unstable();
                current.dedup();
                let (g2, p2) = contract_vertex_set(&g, &current, &prov)?;
                g = g2;
                prov = p2;
            }
        }
        out.push(BakerInstance {
            residue: j,
            graph: g,
            provenance: prov,
            width_hint: 3 * lambda - 1,
        });
    }
    Ok(out)
}

/// Result of the residue sweep.
#[derive(Debug, Clone)]
pub struct PtasSolution {
    /// Blue singleton winners under the original colors.
    pub w: usize,
    pub districting: Districting,
    pub lambda: usize,
    /// Residue whose contracted graph produced the winning districting.
    pub residue: usize,
}

/// Chooses λ = ⌈(1+ε)/ε⌉, solves every residue's contracted graph exactly
/// for singleton winners in at-most-k mode, lifts each witness back, pads
/// to exactly k districts, and returns the best one. The winner count is
/// at least ⌈(λ−1)/λ⌉ of the true singleton optimum.
pub fn ptas_solve(
    graph: &ElectionGraph,
    rs: &RotationSystem,
    k: usize,
    epsilon: f64,
) -> Result<PtasSolution> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    let n = graph.vertex_count();
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if k > n {
        return Err(Error::Infeasible(format!(
            "cannot form {k} non-empty districts from {n} vertices"
        )));
    }
    let lambda = ((1.0 + epsilon) / epsilon).ceil() as usize;

    let (two, _original_colors) = recolor_to_two(graph);
    let instances = baker_graphs(&two, rs, lambda)?;
    let options = DpOptions {
        width_cap: (3 * lambda - 1).max(DpOptions::default().width_cap),
        ..Default::default()
    };
    let request = SolveRequest {
        k,
        k_mode: KMode::AtMost,
        objective: Objective::SingletonWinning,
        bounds: None,
        candidate: 1,
    };

    let mut best: Option<(usize, Districting, usize)> = None;
    for inst in &instances {
        let mut td = heuristic_decomposition(&inst.graph);
        if td.width() > inst.width_hint && inst.graph.vertex_count() <= EXACT_DECOMPOSITION_CAP {
            if let Ok(exact) = exact_decomposition_small(&inst.graph, EXACT_DECOMPOSITION_CAP) {
                td = exact;
            }
        }
        let nice = make_nice(&inst.graph, &td)?;
        let sol = solve_exact(&inst.graph, &request, Some(&nice), &options)?;
        let lifted = expand_districting(&sol.districting, &inst.provenance)?;
        let exact_k = split_to_exactly_k(graph, &lifted, k, 1)?;
        let w = count_winning(graph, &exact_k, 1, true)?;
        if best.as_ref().map_or(true, |&(bw, ..)| w > bw) {
            best = Some((w, exact_k, inst.residue));
        }
    }
    let (w, districting, residue) = best.expect("at least one residue class runs");
    Ok(PtasSolution { w, districting, lambda, residue })
}
