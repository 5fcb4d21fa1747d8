//! Generators turning independent-set and connected-vertex-cover
//! questions into districting instances, constructive witnesses for the
//! forward directions, and subset-enumeration solvers for the source
//! problems so the constructions can be cross-checked on small inputs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    split_to_exactly_k, CandidateId, Districting, ElectionGraph, SolveRequest,
};

const BLUE: CandidateId = 1;
const RED: CandidateId = 2;
const WHITE: CandidateId = 3;

/// Uncolored, unweighted input graph for the source problems. Edges are
/// stored sorted with endpoints normalized; constructions index edges by
/// their position in that order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SourceGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("source graph needs a vertex".into()));
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(SourceGraph { n, edges: set.into_iter().collect() })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    IndependentSet,
    ConnectedVertexCover,
}

/// Bookkeeping emitted next to a generated instance: which source graph
/// it came from, what every vertex stands for, and how many districts the
/// instance must be cut into.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMeta {
    pub source: String,
    pub kind: ReductionKind,
    pub source_vertices: usize,
    pub source_edges: usize,
    /// Cover budget, present only for the cover reduction.
    pub budget: Option<usize>,
    /// Role label to vertex id, a bijection onto the generated graph.
    pub roles: BTreeMap<String, usize>,
    pub districts: usize,
}

fn source_id(g: &SourceGraph) -> String {
    format!("n={};edges={:?}", g.vertex_count(), g.edges())
}

fn check_meta(
    meta: &ReductionMeta,
    g: &SourceGraph,
    kind: ReductionKind,
    budget: Option<usize>,
) -> Result<()> {
    if meta.kind != kind
        || meta.source_vertices != g.vertex_count()
        || meta.source_edges != g.edge_count()
        || meta.budget != budget
        || meta.districts != g.vertex_count()
    {
        return Err(Error::InvalidInput(
            "reduction metadata does not match the source graph".into(),
        ));
    }
    Ok(())
}

/// Ids of the duplicated red vertices attached to edge `e`'s endpoints.
fn is_red_ids(n: usize, e: usize) -> std::ops::Range<usize> {
    let start = n + 2 * n * e;
    start..start + 2 * n
}

/// Builds the instance whose best n-district outcome counts a maximum
/// independent set: one blue per source vertex, and per source edge 2n
/// reds adjacent to exactly that edge's two blues. The duplication makes
/// isolating every red impossible within n districts, so reds must pile
/// onto an endpoint's district and sink it.
pub fn independent_set_to_gerry(g: &SourceGraph) -> Result<(ElectionGraph, ReductionMeta)> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let total = n + 2 * n * m;
    assert!(total <= n * n * n, "construction outgrew its size bound");

    let mut colors = vec![BLUE; n];
    colors.resize(total, RED);
    let mut edges = Vec::with_capacity(4 * n * m);
    let mut roles = BTreeMap::new();
    for v in 0..n {
        roles.insert(format!("b^{v}"), v);
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        for (i, r) in is_red_ids(n, e).enumerate() {
            edges.push((r, u));
            edges.push((r, v));
            roles.insert(format!("r^{e}_{i}"), r);
        }
    }
    let h = ElectionGraph::new(2, colors, vec![1; total], &edges)?;
    let meta = ReductionMeta {
        source: source_id(g),
        kind: ReductionKind::IndependentSet,
        source_vertices: n,
        source_edges: m,
        budget: None,
        roles,
        districts: n,
    };
    Ok((h, meta))
}

/// Turns an independent set into an n-district partition of the generated
/// instance: every blue is its own district seed, and each edge's reds
/// pile onto the lowest-id endpoint outside the set. Members of the set
/// end up as winning blue singletons.
pub fn is_witness_to_partition(
    g: &SourceGraph,
    s: &[usize],
    meta: &ReductionMeta,
) -> Result<Districting> {
    check_meta(meta, g, ReductionKind::IndependentSet, None)?;
    let n = g.vertex_count();
    let set: BTreeSet<usize> = s.iter().copied().collect();
    if set.len() != s.len() || set.iter().any(|&v| v >= n) {
        return Err(Error::InvalidInput("witness set is not a vertex set".into()));
    }
    if let Some(&(u, v)) = g
        .edges()
        .iter()
        .find(|(u, v)| set.contains(u) && set.contains(v))
    {
        return Err(Error::InvalidInput(format!(
            "witness set is not independent: contains edge ({u}, {v})"
        )));
    }
    let mut districts: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let sink = [u, v]
            .into_iter()
            .filter(|x| !set.contains(x))
            .min()
            .expect("an independent set misses an endpoint of every edge");
        districts[sink].extend(is_red_ids(n, e));
    }
    Ok(Districting::new(districts))
}

struct CvcLayout {
    white: Vec<usize>,
    red_leaves: Vec<Vec<usize>>,
    total: usize,
}

fn build_cvc(g: &SourceGraph, l: usize) -> Result<(ElectionGraph, CvcLayout, ReductionMeta)> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let reds_per_vertex = n * m * (m + 1);
    let satellites_per_edge = n * l * (m + 1);

    let mut colors: Vec<CandidateId> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut roles = BTreeMap::new();
    let mut white = Vec::with_capacity(n);
    let mut red_leaves = Vec::with_capacity(n);

    for v in 0..n {
        let wv = colors.len();
        colors.push(WHITE);
        roles.insert(format!("w^{v}"), wv);
        white.push(wv);
        let mut leaves = Vec::with_capacity(reds_per_vertex);
        for i in 0..reds_per_vertex {
            let r = colors.len();
            colors.push(RED);
            edges.push((wv, r));
            roles.insert(format!("r^{v}_{i}"), r);
            leaves.push(r);
        }
        red_leaves.push(leaves);
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let be = colors.len();
        colors.push(BLUE);
        edges.push((white[u], be));
        edges.push((white[v], be));
        roles.insert(format!("b^{e}"), be);
        let leaf_color = WHITE + 1 + e;
        for i in 0..satellites_per_edge {
            let b = colors.len();
            colors.push(BLUE);
            edges.push((be, b));
            roles.insert(format!("b'^{e}_{i}"), b);
            for j in 0..m {
                let c = colors.len();
                colors.push(leaf_color);
                edges.push((b, c));
                roles.insert(format!("c^{e}_{i}_{j}"), c);
            }
        }
    }

    let total = colors.len();
    if total >= 3 {
        assert!(
            edges.len() <= 3 * total - 6,
            "construction broke the planar edge bound"
        );
    }
    let h = ElectionGraph::new(3 + m, colors, vec![1; total], &edges)?;
    let meta = ReductionMeta {
        source: source_id(g),
        kind: ReductionKind::ConnectedVertexCover,
        source_vertices: n,
        source_edges: m,
        budget: Some(l),
        roles,
        districts: n,
    };
    Ok((h, CvcLayout { white, red_leaves, total }, meta))
}

/// Builds the instance whose n-district outcome decides whether the
/// source graph has a connected vertex cover within budget `l`. Each
/// source vertex becomes a white hub buried under red leaves; each source
/// edge becomes a blue go-between whose satellite blues carry leaves in
/// an edge-private color. Blue can win the big mixed district exactly
/// when at most `l` hubs are absorbed into it.
pub fn connected_vertex_cover_to_gerry(
    g: &SourceGraph,
    l: usize,
) -> Result<(ElectionGraph, ReductionMeta)> {
    if l < 2 {
        return Err(Error::InvalidInput(format!(
            "cover budget must be at least 2, got {l}"
        )));
    }
    if !g.is_connected() {
        return Err(Error::InvalidInput(
            "source graph must be connected".into(),
        ));
    }
    let (h, _, meta) = build_cvc(g, l)?;
    Ok((h, meta))
}

/// Turns a connected vertex cover into an n-district partition: every
/// uncovered hub keeps its red leaves as one losing district, everything
/// else forms one big district around the cover, and losing districts are
/// split until exactly n exist. The big district is won by blue exactly
/// when the cover fits the budget.
pub fn cvc_witness_to_partition(
    g: &SourceGraph,
    s: &[usize],
    l: usize,
    meta: &ReductionMeta,
) -> Result<Districting> {
    check_meta(meta, g, ReductionKind::ConnectedVertexCover, Some(l))?;
    let n = g.vertex_count();
    let set: BTreeSet<usize> = s.iter().copied().collect();
    if set.len() != s.len() || set.iter().any(|&v| v >= n) {
        return Err(Error::InvalidInput("witness set is not a vertex set".into()));
    }
    if let Some(&(u, v)) = g
        .edges()
        .iter()
        .find(|(u, v)| !set.contains(u) && !set.contains(v))
    {
        return Err(Error::InvalidInput(format!(
            "witness set does not cover edge ({u}, {v})"
        )));
    }
    if !set.is_empty() {
        let adj = g.adjacency();
        let &start = set.iter().next().expect("non-empty");
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if set.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if seen.len() != set.len() {
            return Err(Error::InvalidInput(
                "witness set does not induce a connected subgraph".into(),
            ));
        }
    }

    let (h, layout, _) = build_cvc(g, l)?;
    let mut in_hub_district = vec![false; layout.total];
    let mut districts: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if set.contains(&v) {
            continue;
        }
        let mut d = vec![layout.white[v]];
        d.extend(&layout.red_leaves[v]);
        for &x in &d {
            in_hub_district[x] = true;
        }
        districts.push(d);
    }
    let rest: Vec<usize> = (0..layout.total).filter(|&x| !in_hub_district[x]).collect();
    if !rest.is_empty() {
        districts.push(rest);
    }
    split_to_exactly_k(&h, &Districting::new(districts), n, BLUE)
}

/// Maximum independent set size by subset enumeration. Capped at 16
/// vertices.
pub fn brute_force_independent_set(g: &SourceGraph) -> Result<usize> {
    let n = g.vertex_count();
    if n > 16 {
        return Err(Error::Unsupported(format!(
            "independent-set enumeration capped at 16 vertices, got {n}"
        )));
    }
    let mut adj = vec![0u32; n];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut best = 0;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize <= best {
            continue;
        }
        let independent = (0..n).all(|v| mask & (1 << v) == 0 || adj[v] & mask == 0);
        if independent {
            best = mask.count_ones() as usize;
        }
    }
    Ok(best)
}

/// Minimum connected vertex cover size by subset enumeration. Capped at
/// 12 vertices. A cover of size at most one is connected by convention.
pub fn brute_force_connected_vertex_cover(g: &SourceGraph) -> Result<usize> {
    let n = g.vertex_count();
    if n > 12 {
        return Err(Error::Unsupported(format!(
            "cover enumeration capped at 12 vertices, got {n}"
        )));
    }
    let mut adj = vec![0u32; n];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let covers = |mask: u32| {
        g.edges()
            .iter()
            .all(|&(u, v)| mask & (1 << u) != 0 || mask & (1 << v) != 0)
    };
    let connected = |mask: u32| {
        if mask.count_ones() <= 1 {
            return true;
        }
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u32 << start;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let fresh = adj[u] & mask & !seen;
            for v in 0..n {
                if fresh & (1 << v) != 0 {
                    seen |= 1 << v;
                    stack.push(v);
                }
            }
        }
        seen == mask
    };
    let mut best: Option<usize> = None;
    for mask in 0u32..1 << n {
        let size = mask.count_ones() as usize;
        if best.is_some_and(|b| size >= b) {
            continue;
        }
        if covers(mask) && connected(mask) {
            best = Some(size);
        }
    }
    best.ok_or_else(|| Error::Infeasible("no connected vertex cover exists".into()))
}

/// Request the generated instances are meant to be solved under.
pub fn reduction_request(meta: &ReductionMeta) -> SolveRequest {
    SolveRequest {
        k: meta.districts,
        k_mode: crate::graph::KMode::Exactly,
        objective: crate::graph::Objective::AllWinning,
        bounds: None,
        candidate: BLUE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{count_winning, verify_districting, wins};
    use crate::oracle::{for_each_connected_partition, oracle_max_winning};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k2() -> SourceGraph {
        SourceGraph::new(2, &[(0, 1)]).unwrap()
    }

    fn p3() -> SourceGraph {
        SourceGraph::new(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn assert_roles_bijective(meta: &ReductionMeta, h: &ElectionGraph) {
        assert_eq!(meta.roles.len(), h.vertex_count());
        let mut seen = vec![false; h.vertex_count()];
        for &id in meta.roles.values() {
            assert!(!seen[id], "role map repeats vertex {id}");
            seen[id] = true;
        }
    }

    fn random_source(n: usize, p: f64, seed: u64) -> SourceGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        SourceGraph::new(n, &edges).unwrap()
    }

    #[test]
    fn independent_set_instance_shapes() {
        let (h, meta) = independent_set_to_gerry(&k2()).unwrap();
        assert_eq!(h.vertex_count(), 6);
        assert_eq!((0..6).filter(|&v| h.color(v) == BLUE).count(), 2);
        for r in 2..6 {
            assert_eq!(h.color(r), RED);
            assert_eq!(h.degree(r), 2);
            assert!(h.has_edge(r, 0) && h.has_edge(r, 1));
        }
        assert_eq!(meta.districts, 2);
        assert_roles_bijective(&meta, &h);

        let (h, meta) = independent_set_to_gerry(&p3()).unwrap();
        assert_eq!(h.vertex_count(), 15);
        assert_eq!((0..15).filter(|&v| h.color(v) == RED).count(), 12);
        assert_roles_bijective(&meta, &h);

        let single = SourceGraph::new(1, &[]).unwrap();
        let (h, meta) = independent_set_to_gerry(&single).unwrap();
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.color(0), BLUE);
        assert_eq!(meta.districts, 1);
    }

    #[test]
    fn is_witness_on_k2_matches_hand_count() {
        let g = k2();
        let (h, meta) = independent_set_to_gerry(&g).unwrap();
        let d = is_witness_to_partition(&g, &[0], &meta).unwrap();
        assert_eq!(d.districts(), [vec![0], vec![1, 2, 3, 4, 5]]);
        let report = verify_districting(&h, &d, &reduction_request(&meta));
        assert!(report.is_valid());
        assert_eq!(report.winning, Some(1));
        assert_eq!(count_winning(&h, &d, BLUE, true).unwrap(), 1);
    }

    #[test]
    fn is_witness_with_empty_set_still_counts_free_blues() {
        let g = p3();
        let (h, meta) = independent_set_to_gerry(&g).unwrap();
        let d = is_witness_to_partition(&g, &[], &meta).unwrap();
        // edge piles go to vertices 0 and 1, so blue 2 stays a free
        // singleton and wins
        assert_eq!(count_winning(&h, &d, BLUE, false).unwrap(), 1);
        assert!(verify_districting(&h, &d, &reduction_request(&meta)).is_valid());
    }

    #[test]
    fn is_witness_on_single_vertex() {
        let g = SourceGraph::new(1, &[]).unwrap();
        let (h, meta) = independent_set_to_gerry(&g).unwrap();
        let d = is_witness_to_partition(&g, &[0], &meta).unwrap();
        assert_eq!(d.k(), 1);
        assert_eq!(count_winning(&h, &d, BLUE, true).unwrap(), 1);
    }

    #[test]
    fn is_witness_rejects_dependent_sets() {
        let g = k2();
        let (_, meta) = independent_set_to_gerry(&g).unwrap();
        assert!(matches!(
            is_witness_to_partition(&g, &[0, 1], &meta),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            is_witness_to_partition(&g, &[5], &meta),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn is_forward_faithfulness_on_random_graphs() {
        for seed in 0..4u64 {
            let n = 4 + (seed as usize % 4);
            let g = random_source(n, 0.4, seed);
            let (h, meta) = independent_set_to_gerry(&g).unwrap();
            assert!(h.vertex_count() <= n * n * n);
            let mut adj = vec![0u32; n];
            for &(u, v) in g.edges() {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
            for mask in 0u32..1 << n {
                let s: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
                if s.iter().any(|&v| adj[v] & mask != 0) {
                    continue;
                }
                let d = is_witness_to_partition(&g, &s, &meta).unwrap();
                assert_eq!(d.k(), n);
                let report = verify_districting(&h, &d, &reduction_request(&meta));
                assert!(report.is_valid(), "seed {seed} mask {mask}");
                let w_all = report.winning.unwrap();
                let w_single = count_winning(&h, &d, BLUE, true).unwrap();
                assert_eq!(w_all, w_single, "every winner is a singleton");
                assert!(w_all >= s.len(), "seed {seed} mask {mask}");
                // the winners themselves form an independent set
                let winners: Vec<usize> = d
                    .districts()
                    .iter()
                    .filter(|dd| dd.len() == 1 && wins(&h, dd, BLUE).unwrap())
                    .map(|dd| dd[0])
                    .collect();
                for &u in &winners {
                    assert!(u < n, "winning singletons are source blues");
                    assert!(
                        winners.iter().all(|&v| v == u || adj[u] & (1 << v) == 0),
                        "winning singletons must be independent in the source"
                    );
                }
            }
        }
    }

    #[test]
    fn is_reverse_on_k2_by_enumeration() {
        let g = k2();
        let (h, meta) = independent_set_to_gerry(&g).unwrap();
        let answer = oracle_max_winning(&h, &reduction_request(&meta)).unwrap();
        assert_eq!(answer.w, brute_force_independent_set(&g).unwrap());
        for_each_connected_partition(&h, 2, crate::graph::KMode::Exactly, 6, |districts| {
            for dist in districts {
                if wins(&h, dist, BLUE).unwrap() {
                    assert_eq!(dist.len(), 1);
                    assert_eq!(h.color(dist[0]), BLUE);
                }
            }
        })
        .unwrap();
    }

    #[test]
    fn is_reverse_on_p3_by_enumeration() {
        let g = p3();
        let (h, _meta) = independent_set_to_gerry(&g).unwrap();
        let mut best = 0;
        let mut all_winners_blue_singletons = true;
        for_each_connected_partition(&h, 3, crate::graph::KMode::Exactly, 15, |districts| {
            let mut w = 0;
            for dist in districts {
                if wins(&h, dist, BLUE).unwrap() {
                    w += 1;
                    if dist.len() != 1 || h.color(dist[0]) != BLUE {
                        all_winners_blue_singletons = false;
                    }
                }
            }
            best = best.max(w);
        })
        .unwrap();
        assert_eq!(best, brute_force_independent_set(&g).unwrap());
        assert_eq!(best, 2);
        assert!(all_winners_blue_singletons);
    }

    #[test]
    fn cvc_instance_shapes_on_p3() {
        let g = p3();
        let (h, meta) = connected_vertex_cover_to_gerry(&g, 2).unwrap();
        assert_eq!(h.vertex_count(), 167);
        assert_eq!(h.candidates(), 5);
        assert_eq!(meta.districts, 3);
        assert_eq!(meta.budget, Some(2));
        assert_roles_bijective(&meta, &h);

        let whites: Vec<usize> = (0..167).filter(|&v| h.color(v) == WHITE).collect();
        assert_eq!(whites.len(), 3);
        assert_eq!((0..167).filter(|&v| h.color(v) == RED).count(), 54);
        assert_eq!((0..167).filter(|&v| h.color(v) == BLUE).count(), 38);
        assert_eq!((0..167).filter(|&v| h.color(v) == 4).count(), 36);
        assert_eq!((0..167).filter(|&v| h.color(v) == 5).count(), 36);
        // every red and every edge-colored leaf hangs off a single vertex
        for v in 0..167 {
            if h.color(v) == RED || h.color(v) >= 4 {
                assert_eq!(h.degree(v), 1);
            }
        }
    }

    #[test]
    fn cvc_witness_within_budget_wins_the_big_district() {
        let g = p3();
        let (h, meta) = connected_vertex_cover_to_gerry(&g, 2).unwrap();

        // the middle vertex alone covers both edges
        let d = cvc_witness_to_partition(&g, &[1], 2, &meta).unwrap();
        assert_eq!(d.k(), 3);
        let report = verify_districting(&h, &d, &reduction_request(&meta));
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(report.winning, Some(1));

        // a cover of size l still wins, after splitting pads the count
        let d = cvc_witness_to_partition(&g, &[0, 1], 2, &meta).unwrap();
        assert_eq!(d.k(), 3);
        let report = verify_districting(&h, &d, &reduction_request(&meta));
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(report.winning, Some(1));
    }

    #[test]
    fn cvc_witness_over_budget_loses() {
        let g = p3();
        let (h, meta) = connected_vertex_cover_to_gerry(&g, 2).unwrap();
        let d = cvc_witness_to_partition(&g, &[0, 1, 2], 2, &meta).unwrap();
        assert_eq!(d.k(), 3);
        let report = verify_districting(&h, &d, &reduction_request(&meta));
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(report.winning, Some(0));
    }

    #[test]
    fn cvc_hub_districts_lose_by_red_majority() {
        let g = p3();
        let (h, meta) = connected_vertex_cover_to_gerry(&g, 2).unwrap();
        let d = cvc_witness_to_partition(&g, &[1], 2, &meta).unwrap();
        for dist in d.districts() {
            if dist.iter().any(|&v| h.color(v) == WHITE) && dist.len() < 100 {
                assert!(!wins(&h, dist, BLUE).unwrap());
            }
        }
    }

    #[test]
    fn cvc_witness_rejections() {
        let g = p3();
        let (_, meta) = connected_vertex_cover_to_gerry(&g, 2).unwrap();
        // {0} misses edge (1, 2); {0, 2} covers but is disconnected
        assert!(matches!(
            cvc_witness_to_partition(&g, &[0], 2, &meta),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            cvc_witness_to_partition(&g, &[0, 2], 2, &meta),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn cvc_generator_rejections() {
        let g = p3();
        assert!(matches!(
            connected_vertex_cover_to_gerry(&g, 1),
            Err(Error::InvalidInput(_))
        ));
        let split = SourceGraph::new(2, &[]).unwrap();
        assert!(matches!(
            connected_vertex_cover_to_gerry(&split, 2),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn cvc_forward_on_assorted_small_graphs() {
        let sources = [
            SourceGraph::new(2, &[(0, 1)]).unwrap(),
            p3(),
            SourceGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap(),
            SourceGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap(),
            SourceGraph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap(),
            SourceGraph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap(),
        ];
        for g in &sources {
            let n = g.vertex_count();
            let best = brute_force_connected_vertex_cover(g).unwrap();
            let l = best.max(2);
            // recover one optimal cover by re-running the enumeration
            let mut adj = vec![0u32; n];
            for &(u, v) in g.edges() {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
            let covers = |mask: u32| {
                g.edges()
                    .iter()
                    .all(|&(u, v)| mask & (1 << u) != 0 || mask & (1 << v) != 0)
            };
            let connected = |mask: u32| {
                if mask.count_ones() <= 1 {
                    return true;
                }
                let start = mask.trailing_zeros() as usize;
                let mut seen = 1u32 << start;
                let mut stack = vec![start];
                while let Some(u) = stack.pop() {
                    for v in 0..n {
                        if adj[u] & mask & !seen & (1 << v) != 0 {
                            seen |= 1 << v;
                            stack.push(v);
                        }
                    }
                }
                seen == mask
            };
            let s: Vec<usize> = (0u32..1 << n)
                .find(|&mask| {
                    mask.count_ones() as usize == best && covers(mask) && connected(mask)
                })
                .map(|mask| (0..n).filter(|&v| mask & (1 << v) != 0).collect())
                .expect("an optimal cover exists");
            let (h, meta) = connected_vertex_cover_to_gerry(g, l).unwrap();
            let d = cvc_witness_to_partition(g, &s, l, &meta).unwrap();
            assert_eq!(d.k(), n);
            let report = verify_districting(&h, &d, &reduction_request(&meta));
            assert!(report.is_valid(), "source {:?}: {:?}", g, report.violations);
            assert_eq!(report.winning, Some(1), "source {:?}", g);
        }
    }

    #[test]
    fn brute_force_values_on_named_graphs() {
        let k3 = SourceGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(brute_force_independent_set(&k3).unwrap(), 1);
        assert_eq!(brute_force_connected_vertex_cover(&k3).unwrap(), 2);

        let p4 = SourceGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(brute_force_independent_set(&p4).unwrap(), 2);
        assert_eq!(brute_force_connected_vertex_cover(&p4).unwrap(), 2);

        let c5 = SourceGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(brute_force_independent_set(&c5).unwrap(), 2);

        let star = SourceGraph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(brute_force_independent_set(&star).unwrap(), 4);
        assert_eq!(brute_force_connected_vertex_cover(&star).unwrap(), 1);
    }

    #[test]
    fn brute_force_size_caps() {
        let big = SourceGraph::new(17, &[]).unwrap();
        assert!(matches!(
            brute_force_independent_set(&big),
            Err(Error::Unsupported(_))
        ));
        let big = SourceGraph::new(13, &[]).unwrap();
        assert!(matches!(
            brute_force_connected_vertex_cover(&big),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn source_graph_validation() {
        assert!(SourceGraph::new(0, &[]).is_err());
        assert!(SourceGraph::new(2, &[(0, 2)]).is_err());
        assert!(SourceGraph::new(2, &[(1, 1)]).is_err());
        let g = SourceGraph::new(3, &[(1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }
}
