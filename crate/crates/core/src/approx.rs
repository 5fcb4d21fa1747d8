//! Constant-factor approximation for unit-weight planar instances. The
//! pipeline contracts red regions, replaces low-degree reds by edges among
//! their blue neighbors, greedily isolates blue singletons, keeps one
//! five-coloring class of them as declared winners, and restores everything
//! to a districting of the input graph with exactly k districts.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{
    contract_vertex_set, count_winning, expand_districting, recolor_to_two, split_to_exactly_k,
    Districting, ElectionGraph, Objective, ProvenanceMap, SolveRequest,
};
use crate::planar::five_color;

const BLUE: usize = 1;
const RED: usize = 2;

/// Result of the contraction/recoloring fixed point: a two-colored graph
/// whose red vertices are pairwise non-adjacent and whose blue vertices
/// each carry at most 12k / w_guess red leaves.
#[derive(Debug, Clone)]
pub struct PruneResult {
    pub graph: ElectionGraph,
    pub provenance: ProvenanceMap,
    pub contractions: usize,
    pub recolorings: usize,
}

impl PruneResult {
    /// Empty when the fixed-point guarantees hold.
    pub fn check_invariants(&self, k: usize, w_guess: u64) -> Vec<String> {
        let g = &self.graph;
        let mut problems = Vec::new();
        for (u, v) in g.edges() {
            if g.color(u) == RED && g.color(v) == RED {
                problems.push(format!("adjacent red vertices {u} and {v}"));
            }
        }
        for v in 0..g.vertex_count() {
            if g.color(v) != BLUE {
                continue;
            }
            let leaves = red_leaf_count(g, v);
            if leaves * w_guess > 12 * k as u64 {
                problems.push(format!("blue vertex {v} still has {leaves} red leaves"));
            }
        }
        problems
    }
}

fn red_leaf_count(g: &ElectionGraph, v: usize) -> u64 {
    g.neighbors(v)
        .iter()
        .filter(|&&w| g.color(w) == RED && g.degree(w) == 1)
        .count() as u64
}

fn with_color(graph: &ElectionGraph, v: usize, color: usize) -> ElectionGraph {
    let mut colors: Vec<usize> = (0..graph.vertex_count()).map(|u| graph.color(u)).collect();
    colors[v] = color;
    let weights: Vec<u64> = (0..graph.vertex_count()).map(|u| graph.weight(u)).collect();
    ElectionGraph::new(graph.candidates(), colors, weights, &graph.edges())
        .expect("recoloring keeps the graph well formed")
}

fn multi_vertex_red_component(graph: &ElectionGraph) -> Option<Vec<usize>> {
    let n = graph.vertex_count();
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] || graph.color(s) != RED {
            continue;
        }
        let mut comp = vec![s];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &w in graph.neighbors(u) {
                if graph.color(w) == RED && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        if comp.len() >= 2 {
            comp.sort_unstable();
            return Some(comp);
        }
    }
    None
}

/// Contracts every connected red region to one vertex and recolors any
/// blue vertex holding more than 12k / w_guess red leaves, repeating until
/// neither rule applies. Weights of merged reds add up, so expanding a
/// districting later reproduces the original tallies.
pub fn prune(graph: &ElectionGraph, k: usize, w_guess: u64) -> Result<PruneResult> {
    if graph.candidates() != 2 {
        return Err(Error::InvalidInput("pruning expects a two-colored graph".into()));
    }
    if w_guess == 0 {
        return Err(Error::InvalidInput("the guessed optimum must be positive".into()));
    }
    if !graph.is_connected() {
        return Err(Error::InvalidInput("pruning requires a connected graph".into()));
    }

    let mut g = graph.clone();
    let mut prov = ProvenanceMap::identity(graph.vertex_count());
    let mut contractions = 0;
    let mut recolorings = 0;
    loop {
        if let Some(comp) = multi_vertex_red_component(&g) {
            let (next, next_prov) = contract_vertex_set(&g, &comp, &prov)?;
            g = next;
            prov = next_prov;
            contractions += 1;
            continue;
        }
        let overloaded = (0..g.vertex_count())
            .find(|&v| g.color(v) == BLUE && red_leaf_count(&g, v) * w_guess > 12 * k as u64);
        match overloaded {
            Some(v) => {
                g = with_color(&g, v, RED);
                recolorings += 1;
            }
            None => break,
        }
    }
    Ok(PruneResult { graph: g, provenance: prov, contractions, recolorings })
}

/// A red vertex removed because it had two or three blue neighbors; the
/// neighbors were linked up pairwise in its place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedRecord {
    /// Id of the removed red in the pruned graph.
    pub red: usize,
    /// Its former neighbors, as vertices of the reduced graph.
    pub blues: Vec<usize>,
}

/// The pruned graph with its degree-2 and degree-3 reds replaced by edges
/// and triangles among their blue neighbors.
#[derive(Debug, Clone)]
pub struct CutConnectResult {
    /// Reduced graph.
    pub graph: ElectionGraph,
    /// The pruned graph the reduction started from.
    pub pruned: ElectionGraph,
    /// Reduced-graph id back to pruned-graph id.
    pub to_pruned: Vec<usize>,
    pub records: Vec<RedRecord>,
}

impl CutConnectResult {
    /// Empty when the reduced graph respects the planar edge bound and
    /// every record's neighbors are linked up pairwise.
    pub fn check_invariants(&self) -> Vec<String> {
        let g = &self.graph;
        let mut problems = Vec::new();
        let n = g.vertex_count();
        if n >= 3 && g.edge_count() > 3 * n - 6 {
            problems.push(format!(
                "{} edges on {n} vertices breaks the planar bound",
                g.edge_count()
            ));
        }
        for rec in &self.records {
            if !(2..=3).contains(&rec.blues.len()) {
                problems.push(format!(
                    "record for red {} lists {} neighbors",
                    rec.red,
                    rec.blues.len()
                ));
            }
            for (i, &a) in rec.blues.iter().enumerate() {
                for &b in &rec.blues[i + 1..] {
                    if !g.has_edge(a, b) {
                        problems.push(format!(
                            "record for red {}: neighbors {a} and {b} not adjacent",
                            rec.red
                        ));
                    }
                }
            }
        }
        problems
    }
}

/// Deletes every red vertex of degree 2 or 3, connecting its neighbors
/// pairwise, and records the deletion so the red can be re-attached later.
/// Reds of other degrees stay put.
pub fn cut_and_connect(pr: &PruneResult) -> CutConnectResult {
    let g = &pr.graph;
    let n = g.vertex_count();
    let doomed: Vec<usize> = (0..n)
        .filter(|&v| g.color(v) == RED && (2..=3).contains(&g.degree(v)))
        .collect();
    let is_doomed = |v: usize| doomed.binary_search(&v).is_ok();

    let to_pruned: Vec<usize> = (0..n).filter(|&v| !is_doomed(v)).collect();
    let mut new_id = vec![usize::MAX; n];
    for (i, &v) in to_pruned.iter().enumerate() {
        new_id[v] = i;
    }

    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(u, v)| !is_doomed(u) && !is_doomed(v))
        .map(|(u, v)| (new_id[u], new_id[v]))
        .collect();
    let mut records = Vec::with_capacity(doomed.len());
    for &r in &doomed {
        let blues: Vec<usize> = g.neighbors(r).iter().map(|&w| new_id[w]).collect();
        for (i, &a) in blues.iter().enumerate() {
            for &b in &blues[i + 1..] {
                edges.push((a.min(b), a.max(b)));
            }
        }
        records.push(RedRecord { red: r, blues });
    }
    edges.sort_unstable();
    edges.dedup();

    let colors: Vec<usize> = to_pruned.iter().map(|&v| g.color(v)).collect();
    let weights: Vec<u64> = to_pruned.iter().map(|&v| g.weight(v)).collect();
    let graph = ElectionGraph::new(2, colors, weights, &edges)
        .expect("deleting vertices keeps the graph well formed");
    CutConnectResult { graph, pruned: g.clone(), to_pruned, records }
}

fn count_components(adj: &[BTreeSet<usize>]) -> usize {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

/// Goes over the blue vertices once, lowest degree first (ties by id),
/// and cuts one loose whenever the resulting component count stays within
/// k. The final components are the districts; the second return lists the
/// blues actually cut loose (a vertex already without edges when its turn
/// comes is left as it stands).
pub fn greedy_singletons(cc: &CutConnectResult, k: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    let g = &cc.graph;
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut order: Vec<usize> = (0..n).filter(|&v| g.color(v) == BLUE).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut isolated = Vec::new();
    for v in order {
        if adj[v].is_empty() {
            continue;
        }
        let saved: Vec<usize> = adj[v].iter().copied().collect();
        for &w in &saved {
            adj[w].remove(&v);
        }
        adj[v].clear();
        if count_components(&adj) <= k {
            isolated.push(v);
        } else {
            for &w in &saved {
                adj[w].insert(v);
                adj[v].insert(w);
            }
        }
    }

    let mut districts = Vec::new();
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        districts.push(comp);
    }
    (districts, isolated)
}

/// Winner selection and reassembly. Five-colors the reduced graph, keeps
/// the color class holding the most winning blue singletons as declared
/// winners, folds every other blue singleton into a neighboring district
/// (losing ones preferred), and re-attaches each deleted red next to one
/// of its recorded neighbors. Returns a districting of the pruned graph
/// together with the selected winners as pruned-graph vertices.
pub fn five_color_select(
    cc: &CutConnectResult,
    districts: &[Vec<usize>],
) -> Result<(Districting, Vec<usize>)> {
    let g = &cc.graph;
    let n = g.vertex_count();
    let coloring = five_color(g)?;

    let mut dist_of = vec![usize::MAX; n];
    for (i, d) in districts.iter().enumerate() {
        for &v in d {
            dist_of[v] = i;
        }
    }
    let mut members: Vec<Vec<usize>> = districts.to_vec();
    // deleted reds re-attached per district, as pruned-graph ids
    let mut attached: Vec<Vec<usize>> = vec![Vec::new(); districts.len()];
    let mut alive = vec![true; districts.len()];

    let singletons: Vec<usize> = districts
        .iter()
        .filter(|d| d.len() == 1)
        .map(|d| d[0])
        .filter(|&v| g.color(v) == BLUE && g.weight(v) > 0)
        .collect();
    let best_class = (1u8..=5)
        .max_by_key(|&c| {
            (
                singletons.iter().filter(|&&v| coloring[v] == c).count(),
                std::cmp::Reverse(c),
            )
        })
        .expect("five classes exist");
    let selected: BTreeSet<usize> = singletons
        .iter()
        .copied()
        .filter(|&v| coloring[v] == best_class)
        .collect();

    // an edge minted for a deleted red cannot hold a district together on
    // its own; only edges that exist in the pruned graph may be traversed
    // when folding a singleton into a neighbor's district
    let genuine = |a: usize, b: usize| cc.pruned.has_edge(cc.to_pruned[a], cc.to_pruned[b]);

    let loses = |members: &[usize], attached: &[usize]| -> bool {
        let mut blue = 0u64;
        let mut red = 0u64;
        for &v in members {
            if g.color(v) == BLUE {
                blue += g.weight(v);
            } else {
                red += g.weight(v);
            }
        }
        red += attached.iter().map(|&r| cc.pruned.weight(r)).sum::<u64>();
        blue <= red
    };
    let is_selected_seat =
        |d: &[usize], attached: &[usize]| d.len() == 1 && attached.is_empty() && selected.contains(&d[0]);

    let mut pending: Vec<usize> = Vec::new();
    for &v in &singletons {
        if selected.contains(&v) {
            continue;
        }
        let home = dist_of[v];
        let target = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| genuine(v, w))
            .map(|w| dist_of[w])
            .filter(|&d| d != home && alive[d])
            .find(|&d| loses(&members[d], &attached[d]));
        match target {
            Some(d) => {
                let moved = std::mem::take(&mut members[home]);
                members[d].extend(moved);
                alive[home] = false;
                dist_of[v] = d;
            }
            None => pending.push(v),
        }
    }

    // re-attach deleted reds: first to a district already holding two of
    // the red's neighbors (a minted edge may be load-bearing there), then
    // to a pending singleton (the pair then ties and loses), then to any
    // neighbor's district that is not a declared winner, losing preferred
    let mut red_home: BTreeMap<usize, usize> = BTreeMap::new();
    for rec in &cc.records {
        let shared = {
            let mut per_district: BTreeMap<usize, usize> = BTreeMap::new();
            for &b in &rec.blues {
                *per_district.entry(dist_of[b]).or_default() += 1;
            }
            per_district
                .into_iter()
                .find(|&(d, c)| alive[d] && c >= 2)
                .map(|(d, _)| d)
        };
        let choice = shared
            .or_else(|| {
                rec.blues
                    .iter()
                    .copied()
                    .find(|b| pending.contains(b))
                    .map(|b| dist_of[b])
            })
            .or_else(|| {
                let options: Vec<usize> = rec
                    .blues
                    .iter()
                    .map(|&b| dist_of[b])
                    .filter(|&d| alive[d] && !is_selected_seat(&members[d], &attached[d]))
                    .collect();
                options
                    .iter()
                    .copied()
                    .find(|&d| loses(&members[d], &attached[d]))
                    .or_else(|| options.first().copied())
            });
        let d = choice.expect("a deleted red always has a non-winner neighbor");
        attached[d].push(rec.red);
        pending.retain(|&b| dist_of[b] != d);
        red_home.insert(rec.red, d);
    }

    // a still-pending singleton joins a losing district of a pruned-graph
    // neighbor if one has appeared since; a deleted neighbor red counts
    // through the district it landed in, which keeps the merged district
    // connected through it. With no losing neighbor the vertex simply
    // stays a district of its own: an extra winning seat harms nothing,
    // while folding it into a kept winner would cost that seat.
    for &v in &pending.clone() {
        let home = dist_of[v];
        if members[home].len() != 1 {
            continue;
        }
        let pv = cc.to_pruned[v];
        let mut options: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| genuine(v, w))
            .map(|w| dist_of[w])
            .filter(|&d| d != home && alive[d])
            .collect();
        for rec in &cc.records {
            if cc.pruned.has_edge(rec.red, pv) {
                let d = red_home[&rec.red];
                if d != home && alive[d] {
                    options.push(d);
                }
            }
        }
        options.sort_unstable();
        options.dedup();
        let target = options
            .iter()
            .copied()
            .find(|&d| loses(&members[d], &attached[d]));
        if let Some(d) = target {
            let moved = std::mem::take(&mut members[home]);
            members[d].extend(moved);
            alive[home] = false;
            dist_of[v] = d;
        }
    }

    let mut out = Vec::new();
    for i in 0..members.len() {
        if !alive[i] {
            continue;
        }
        let mut d: Vec<usize> = members[i].iter().map(|&v| cc.to_pruned[v]).collect();
        d.extend(attached[i].iter().copied());
        out.push(d);
    }
    let selected_pruned: Vec<usize> = selected.iter().map(|&v| cc.to_pruned[v]).collect();
    Ok((Districting::new(out), selected_pruned))
}

/// Best districting found by the guessing loop.
#[derive(Debug, Clone)]
pub struct ApproxSolution {
    pub w: usize,
    pub districting: Districting,
    /// The guessed optimum that produced the returned districting.
    pub w_guess: u64,
}

/// Runs the whole pipeline once per guessed optimum (powers of two up to
/// and including the first one at or above n, plus n itself) and keeps the
/// districting that wins the most districts under the original colors.
pub fn approx_solve(graph: &ElectionGraph, request: &SolveRequest) -> Result<ApproxSolution> {
    let n = graph.vertex_count();
    request.validate(graph)?;
    if !graph.unit_weights() {
        return Err(Error::Unsupported(
            "the planar approximation handles unit weights only".into(),
        ));
    }
    if request.bounds.is_some() {
        return Err(Error::Unsupported(
            "the planar approximation does not handle district size bounds".into(),
        ));
    }
    if !graph.is_connected() {
        return Err(Error::InvalidInput(
            "the planar approximation requires a connected graph".into(),
        ));
    }
    if n >= 3 && graph.edge_count() > 3 * n - 6 {
        return Err(Error::InvalidInput(format!(
            "not planar: {} edges exceeds the bound {} for {n} vertices",
            graph.edge_count(),
            3 * n - 6
        )));
    }
    let k = request.k;
    if k > n {
        return Err(Error::Infeasible(format!(
            "cannot form {k} non-empty districts from {n} vertices"
        )));
    }

    let (two, _original_colors) = recolor_to_two(graph);
    let mut guesses: Vec<u64> = Vec::new();
    let mut p = 1u64;
    while p < n as u64 {
        guesses.push(p);
        p *= 2;
    }
    guesses.push(p);
    guesses.push(n as u64);
    guesses.sort_unstable();
    guesses.dedup();

    let singleton = request.objective == Objective::SingletonWinning;
    let mut best: Option<(usize, Districting, u64)> = None;
    for &w_guess in &guesses {
        let pr = prune(&two, k, w_guess)?;
        debug_assert!(pr.check_invariants(k, w_guess).is_empty());
        let cc = cut_and_connect(&pr);
        debug_assert!(cc.check_invariants().is_empty());
        let (districts, _isolated) = greedy_singletons(&cc, k);
        let (on_pruned, _winners) = five_color_select(&cc, &districts)?;
        let on_original = expand_districting(&on_pruned, &pr.provenance)?;
        let exact_k = split_to_exactly_k(graph, &on_original, k, request.candidate)?;
        let w = count_winning(graph, &exact_k, request.candidate, singleton)?;
        if best.as_ref().map_or(true, |&(bw, ..)| w > bw) {
            best = Some((w, exact_k, w_guess));
        }
    }
    let (w, districting, w_guess) = best.expect("at least one guess runs");
    Ok(ApproxSolution { w, districting, w_guess })
}
