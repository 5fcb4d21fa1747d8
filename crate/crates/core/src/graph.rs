//! Vertex-colored weighted election graphs and districting primitives.
//!
//! Candidates are numbered `1..=candidates` and candidate 1 is the one every
//! solver in this crate maximizes districts for. A districting is a partition
//! of the vertex set into non-empty connected districts; a district is won by
//! a candidate only on a strict majority of weight, so ties are losses.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CandidateId = usize;

/// Undirected simple graph with a color (candidate) and a non-negative
/// integer weight per vertex. Vertex ids are dense `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionGraph {
    adj: Vec<Vec<usize>>,
    color: Vec<CandidateId>,
    weight: Vec<u64>,
    candidates: usize,
}

impl ElectionGraph {
    pub fn new(
        candidates: usize,
        colors: Vec<CandidateId>,
        weights: Vec<u64>,
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        if candidates < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 candidates, got {candidates}"
            )));
        }
        let n = colors.len();
        if n == 0 {
            return Err(Error::InvalidInput("graph must have at least one vertex".into()));
        }
        if weights.len() != n {
            return Err(Error::InvalidInput(format!(
                "{} colors but {} weights",
                n,
                weights.len()
            )));
        }
        for (v, &c) in colors.iter().enumerate() {
            if c == 0 || c > candidates {
                return Err(Error::InvalidInput(format!(
                    "vertex {v} has color {c}, valid range is 1..={candidates}"
                )));
            }
        }
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u},{v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self loop at vertex {u}")));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(ElectionGraph {
            adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
            color: colors,
            weight: weights,
            candidates,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.color.len()
    }

    pub fn candidates(&self) -> usize {
        self.candidates
    }

    pub fn color(&self, v: usize) -> CandidateId {
        self.color[v]
    }

    pub fn weight(&self, v: usize) -> u64 {
        self.weight[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` pairs with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertex_count() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn total_weight(&self) -> u64 {
        self.weight.iter().sum()
    }

    pub fn unit_weights(&self) -> bool {
        self.weight.iter().all(|&w| w == 1)
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.vertex_count()).collect();
        self.is_connected_subset(&all)
    }

    /// BFS connectivity of the subgraph induced by `subset`.
    /// The empty set counts as connected.
    pub fn is_connected_subset(&self, subset: &[usize]) -> bool {
        if subset.is_empty() {
            return true;
        }
        let member: BTreeSet<usize> = subset.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(subset[0]);
        seen.insert(subset[0]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if member.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == member.len()
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// Partition of the vertex set into districts. Canonical form: each district
/// is a sorted vertex-id list and districts are ordered by smallest member,
/// so equal partitions compare equal and serialize identically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Districting {
    districts: Vec<Vec<usize>>,
}

impl Districting {
    pub fn new(mut districts: Vec<Vec<usize>>) -> Self {
        for d in &mut districts {
            d.sort_unstable();
            d.dedup();
        }
        districts.sort_by_key(|d| d.first().copied().unwrap_or(usize::MAX));
        Districting { districts }
    }

    pub fn districts(&self) -> &[Vec<usize>] {
        &self.districts
    }

    pub fn k(&self) -> usize {
        self.districts.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KMode {
    #[serde(rename = "exactly-k")]
    Exactly,
    #[serde(rename = "at-most-k")]
    AtMost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    /// Count every district the candidate wins.
    #[serde(rename = "all-winning")]
    AllWinning,
    /// Count only won districts that consist of a single vertex.
    #[serde(rename = "singleton-winning")]
    SingletonWinning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    #[serde(rename = "vertex-count")]
    VertexCount,
    #[serde(rename = "total-weight")]
    TotalWeight,
}

/// Per-district size window, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: u64,
    pub upper: u64,
    pub kind: BoundKind,
}

impl Bounds {
    pub fn district_size(&self, graph: &ElectionGraph, district: &[usize]) -> u64 {
        match self.kind {
            BoundKind::VertexCount => district.len() as u64,
            BoundKind::TotalWeight => district.iter().map(|&v| graph.weight(v)).sum(),
        }
    }

    /// Size contribution of one vertex, used by solvers that accumulate
    /// district sizes incrementally.
    pub fn vertex_size(&self, graph: &ElectionGraph, v: usize) -> u64 {
        match self.kind {
            BoundKind::VertexCount => 1,
            BoundKind::TotalWeight => graph.weight(v),
        }
    }
}

/// What to solve: district count, count mode, objective, optional size
/// bounds, and the candidate whose districts are maximized.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveRequest {
    pub k: usize,
    pub k_mode: KMode,
    pub objective: Objective,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    #[serde(default = "default_candidate")]
    pub candidate: CandidateId,
}

fn default_candidate() -> CandidateId {
    1
}

impl SolveRequest {
    pub fn new(k: usize, k_mode: KMode, objective: Objective) -> Self {
        SolveRequest {
            k,
            k_mode,
            objective,
            bounds: None,
            candidate: 1,
        }
    }

    pub fn validate(&self, graph: &ElectionGraph) -> Result<()> {
        // k larger than the vertex count is left to the solvers, which
        // report it as infeasible rather than malformed
        if self.k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        if self.candidate == 0 || self.candidate > graph.candidates() {
            return Err(Error::InvalidInput(format!(
                "candidate {} outside 1..={}",
                self.candidate,
                graph.candidates()
            )));
        }
        if let Some(b) = &self.bounds {
            if b.lower > b.upper {
                return Err(Error::InvalidInput(format!(
                    "bounds lower {} exceeds upper {}",
                    b.lower, b.upper
                )));
            }
        }
        Ok(())
    }
}

/// True when `candidate`'s total weight in the district strictly exceeds
/// every other candidate's total.
pub fn wins(graph: &ElectionGraph, district: &[usize], candidate: CandidateId) -> Result<bool> {
    if district.is_empty() {
        return Err(Error::InvalidInput("empty district".into()));
    }
    if candidate == 0 || candidate > graph.candidates() {
        return Err(Error::InvalidInput(format!(
            "candidate {candidate} outside 1..={}",
            graph.candidates()
        )));
    }
    let mut tally = vec![0u64; graph.candidates() + 1];
    for &v in district {
        if v >= graph.vertex_count() {
            return Err(Error::InvalidInput(format!("vertex {v} out of range")));
        }
        tally[graph.color(v)] += graph.weight(v);
    }
    let own = tally[candidate];
    Ok((1..=graph.candidates()).all(|c| c == candidate || own > tally[c]))
}

pub(crate) fn wins_unchecked(
    graph: &ElectionGraph,
    district: &[usize],
    candidate: CandidateId,
) -> bool {
    let mut tally = vec![0u64; graph.candidates() + 1];
    for &v in district {
        tally[graph.color(v)] += graph.weight(v);
    }
    let own = tally[candidate];
    (1..=graph.candidates()).all(|c| c == candidate || own > tally[c])
}

/// Number of districts won by `candidate`; with `singleton_only`, only
/// single-vertex districts are counted. The districting is structurally
/// validated first and the first violation is reported as an error.
pub fn count_winning(
    graph: &ElectionGraph,
    districting: &Districting,
    candidate: CandidateId,
    singleton_only: bool,
) -> Result<usize> {
    if let Some(violation) = structural_violation(graph, districting) {
        return Err(Error::InvalidInput(format!("invalid districting: {violation}")));
    }
    Ok(count_winning_unchecked(graph, districting, candidate, singleton_only))
}

pub(crate) fn count_winning_unchecked(
    graph: &ElectionGraph,
    districting: &Districting,
    candidate: CandidateId,
    singleton_only: bool,
) -> usize {
    districting
        .districts()
        .iter()
        .filter(|d| (!singleton_only || d.len() == 1) && wins_unchecked(graph, d, candidate))
        .count()
}

/// One broken districting invariant, in the order the verifier checks them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    MissingVertex { vertex: usize },
    UnknownVertex { vertex: usize },
    RepeatedVertex { vertex: usize },
    EmptyDistrict { district: usize },
    DisconnectedDistrict { district: usize },
    DistrictCount { found: usize, k: usize, mode: KMode },
    SizeBound { district: usize, size: u64, lower: u64, upper: u64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::MissingVertex { vertex } => {
                write!(f, "vertex {vertex} belongs to no district")
            }
            Violation::UnknownVertex { vertex } => {
                write!(f, "district member {vertex} is not a graph vertex")
            }
            Violation::RepeatedVertex { vertex } => {
                write!(f, "vertex {vertex} appears in more than one district")
            }
            Violation::EmptyDistrict { district } => write!(f, "district {district} is empty"),
            Violation::DisconnectedDistrict { district } => {
                write!(f, "district {district} is not connected")
            }
            Violation::DistrictCount { found, k, mode } => match mode {
                KMode::Exactly => write!(f, "{found} districts, expected exactly {k}"),
                KMode::AtMost => write!(f, "{found} districts, expected at most {k}"),
            },
            Violation::SizeBound { district, size, lower, upper } => write!(
                f,
                "district {district} has size {size}, outside [{lower}, {upper}]"
            ),
        }
    }
}

/// Independent check of a districting against a request. `winning` is
/// filled in only when no invariant is violated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
    pub winning: Option<usize>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn structural_violation(graph: &ElectionGraph, districting: &Districting) -> Option<Violation> {
    let n = graph.vertex_count();
    let mut owner = vec![usize::MAX; n];
    for (i, d) in districting.districts().iter().enumerate() {
        if d.is_empty() {
            return Some(Violation::EmptyDistrict { district: i });
        }
        for &v in d {
            if v >= n {
                return Some(Violation::UnknownVertex { vertex: v });
            }
            if owner[v] != usize::MAX {
                return Some(Violation::RepeatedVertex { vertex: v });
            }
            owner[v] = i;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Some(Violation::MissingVertex { vertex: v });
    }
    for (i, d) in districting.districts().iter().enumerate() {
        if !graph.is_connected_subset(d) {
            return Some(Violation::DisconnectedDistrict { district: i });
        }
    }
    None
}

pub fn verify_districting(
    graph: &ElectionGraph,
    districting: &Districting,
    request: &SolveRequest,
) -> VerifyReport {
    let mut violations = Vec::new();
    let n = graph.vertex_count();

    let mut owner = vec![usize::MAX; n];
    let mut structurally_sound = true;
    for (i, d) in districting.districts().iter().enumerate() {
        if d.is_empty() {
            violations.push(Violation::EmptyDistrict { district: i });
            structurally_sound = false;
            continue;
        }
        for &v in d {
            if v >= n {
                violations.push(Violation::UnknownVertex { vertex: v });
                structurally_sound = false;
            } else if owner[v] != usize::MAX {
                violations.push(Violation::RepeatedVertex { vertex: v });
                structurally_sound = false;
            } else {
                owner[v] = i;
            }
        }
    }
    for v in 0..n {
        if owner[v] == usize::MAX {
            violations.push(Violation::MissingVertex { vertex: v });
            structurally_sound = false;
        }
    }
    if structurally_sound {
        for (i, d) in districting.districts().iter().enumerate() {
            if !graph.is_connected_subset(d) {
                violations.push(Violation::DisconnectedDistrict { district: i });
            }
        }
    }

    let found = districting.k();
    let count_ok = match request.k_mode {
        KMode::Exactly => found == request.k,
        KMode::AtMost => found <= request.k,
    };
    if !count_ok {
        violations.push(Violation::DistrictCount {
            found,
            k: request.k,
            mode: request.k_mode,
        });
    }
    if let Some(b) = &request.bounds {
        for (i, d) in districting.districts().iter().enumerate() {
            if d.iter().any(|&v| v >= n) {
                continue;
            }
            let size = b.district_size(graph, d);
            if size < b.lower || size > b.upper {
                violations.push(Violation::SizeBound {
                    district: i,
                    size,
                    lower: b.lower,
                    upper: b.upper,
                });
            }
        }
    }

    let winning = if violations.is_empty() {
        Some(count_winning_unchecked(
            graph,
            districting,
            request.candidate,
            request.objective == Objective::SingletonWinning,
        ))
    } else {
        None
    };
    VerifyReport { violations, winning }
}

/// Maps each vertex of a derived graph back to the set of original vertices
/// it stands for. Contractions compose: contracting a contracted graph
/// merges the underlying original groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceMap {
    groups: Vec<Vec<usize>>,
}

impl ProvenanceMap {
    pub fn identity(n: usize) -> Self {
        ProvenanceMap {
            groups: (0..n).map(|v| vec![v]).collect(),
        }
    }

    pub fn group(&self, v: usize) -> &[usize] {
        &self.groups[v]
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Total number of original vertices represented.
    pub fn original_count(&self) -> usize {
        self.groups.iter().map(|g| g.len()).sum()
    }
}

/// Contracts `set` (connected, single-colored) into one vertex. The
/// contracted vertex keeps the set's smallest original position in the
/// dense relabeling; its weight is the member sum. `prov` must describe
/// `graph` and is composed into the returned map.
pub fn contract_vertex_set(
    graph: &ElectionGraph,
    set: &[usize],
    prov: &ProvenanceMap,
) -> Result<(ElectionGraph, ProvenanceMap)> {
    if set.is_empty() {
        return Err(Error::InvalidInput("cannot contract an empty set".into()));
    }
    if prov.len() != graph.vertex_count() {
        return Err(Error::Internal(format!(
            "provenance covers {} vertices, graph has {}",
            prov.len(),
            graph.vertex_count()
        )));
    }
    let mut sorted: Vec<usize> = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &v in &sorted {
        if v >= graph.vertex_count() {
            return Err(Error::InvalidInput(format!("vertex {v} out of range")));
        }
    }
    let color = graph.color(sorted[0]);
    if sorted.iter().any(|&v| graph.color(v) != color) {
        return Err(Error::InvalidInput(
            "contraction set mixes vertex colors".into(),
        ));
    }
    if !graph.is_connected_subset(&sorted) {
        return Err(Error::InvalidInput(
            "contraction set is not connected".into(),
        ));
    }

    let n = graph.vertex_count();
    let in_set = |v: usize| sorted.binary_search(&v).is_ok();
    // Survivors keep their relative order; the merged vertex sits where the
    // smallest member used to be.
    let anchor = sorted[0];
    let mut new_id = vec![usize::MAX; n];
    let mut order: Vec<usize> = (0..n).filter(|&v| !in_set(v) || v == anchor).collect();
    order.sort_unstable();
    for (i, &v) in order.iter().enumerate() {
        new_id[v] = i;
    }
    for &v in &sorted {
        new_id[v] = new_id[anchor];
    }

    let m = order.len();
    let mut colors = vec![0usize; m];
    let mut weights = vec![0u64; m];
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &v in &order {
        let id = new_id[v];
        colors[id] = graph.color(v);
        weights[id] = if v == anchor {
            sorted.iter().map(|&u| graph.weight(u)).sum()
        } else {
            graph.weight(v)
        };
        if v == anchor {
            for &u in &sorted {
                groups[id].extend_from_slice(prov.group(u));
            }
        } else {
            groups[id].extend_from_slice(prov.group(v));
        }
        groups[id].sort_unstable();
    }

    let mut edges = Vec::new();
    for (u, v) in graph.edges() {
        let (a, b) = (new_id[u], new_id[v]);
        if a != b {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();

    let contracted = ElectionGraph::new(graph.candidates(), colors, weights, &edges)?;
    Ok((contracted, ProvenanceMap { groups }))
}

/// Replaces every vertex of a districting over a contracted graph by its
/// original group.
pub fn expand_districting(districting: &Districting, prov: &ProvenanceMap) -> Result<Districting> {
    let mut out = Vec::with_capacity(districting.k());
    for d in districting.districts() {
        let mut members = Vec::new();
        for &v in d {
            if v >= prov.len() {
                return Err(Error::Internal(format!(
                    "districting vertex {v} outside provenance domain 0..{}",
                    prov.len()
                )));
            }
            members.extend_from_slice(prov.group(v));
        }
        out.push(members);
    }
    Ok(Districting::new(out))
}

/// Restores every vertex's original color after `recolor_to_two`, leaving
/// weights and edges alone.
pub fn recolor_to_two(graph: &ElectionGraph) -> (ElectionGraph, Vec<CandidateId>) {
    let original: Vec<CandidateId> = (0..graph.vertex_count()).map(|v| graph.color(v)).collect();
    let colors: Vec<CandidateId> = original.iter().map(|&c| if c == 1 { 1 } else { 2 }).collect();
    let weights: Vec<u64> = (0..graph.vertex_count()).map(|v| graph.weight(v)).collect();
    let two = ElectionGraph::new(2, colors, weights, &graph.edges())
        .expect("recoloring preserves graph validity");
    (two, original)
}

fn detach_leaf(graph: &ElectionGraph, district: &[usize]) -> (usize, Vec<usize>) {
    // BFS tree from the smallest member; the last vertex finished is a leaf
    // of that tree, so removing it keeps the remainder connected.
    let member: BTreeSet<usize> = district.iter().copied().collect();
    let root = district[0];
    let mut order = vec![root];
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in graph.neighbors(u) {
            if member.contains(&w) && seen.insert(w) {
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    let leaf = *order.last().unwrap();
    let rest = district.iter().copied().filter(|&v| v != leaf).collect();
    (leaf, rest)
}

/// Grows a districting with fewer than `k` districts to exactly `k` by
/// repeatedly detaching a spanning-tree leaf from a losing multi-vertex
/// district. Districts won by `candidate` are never touched.
pub fn split_losing_districts(
    graph: &ElectionGraph,
    districting: &Districting,
    k: usize,
    candidate: CandidateId,
) -> Result<Districting> {
    if k > graph.vertex_count() {
        return Err(Error::Infeasible(format!(
            "cannot form {k} non-empty districts from {} vertices",
            graph.vertex_count()
        )));
    }
    if districting.k() > k {
        return Err(Error::InvalidInput(format!(
            "districting already has {} districts, more than k = {k}",
            districting.k()
        )));
    }
    let mut districts: Vec<Vec<usize>> = districting.districts().to_vec();
    while districts.len() < k {
        let target = districts
            .iter()
            .position(|d| d.len() > 1 && !wins_unchecked(graph, d, candidate));
        let Some(i) = target else {
            return Err(Error::Infeasible(
                "every losing district is a singleton; cannot split further".into(),
            ));
        };
        let (leaf, rest) = detach_leaf(graph, &districts[i]);
        districts[i] = rest;
        districts.push(vec![leaf]);
    }
    Ok(Districting::new(districts))
}

/// Like `split_losing_districts`, but when only winning multi-vertex
/// districts remain it detaches leaves from those too. Validity of the
/// exactly-k output takes precedence over preserving wins; callers recount
/// afterwards.
pub fn split_to_exactly_k(
    graph: &ElectionGraph,
    districting: &Districting,
    k: usize,
    candidate: CandidateId,
) -> Result<Districting> {
    if k > graph.vertex_count() {
        return Err(Error::Infeasible(format!(
            "cannot form {k} non-empty districts from {} vertices",
            graph.vertex_count()
        )));
    }
    if districting.k() > k {
        return Err(Error::InvalidInput(format!(
            "districting already has {} districts, more than k = {k}",
            districting.k()
        )));
    }
    let mut districts: Vec<Vec<usize>> = districting.districts().to_vec();
    while districts.len() < k {
        let i = districts
            .iter()
            .position(|d| d.len() > 1 && !wins_unchecked(graph, d, candidate))
            .or_else(|| districts.iter().position(|d| d.len() > 1))
            .expect("k <= n guarantees a splittable district");
        let (leaf, rest) = detach_leaf(graph, &districts[i]);
        districts[i] = rest;
        districts.push(vec![leaf]);
    }
    Ok(Districting::new(districts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(colors: &[usize], candidates: usize) -> ElectionGraph {
        let edges: Vec<(usize, usize)> = (0..colors.len() - 1).map(|i| (i, i + 1)).collect();
        ElectionGraph::new(candidates, colors.to_vec(), vec![1; colors.len()], &edges).unwrap()
    }

    #[test]
    fn wins_requires_strict_majority() {
        // blue - red - blue path; {1,2} ties 1:1 and ties lose
        let g = path_graph(&[1, 2, 1], 2);
        assert!(wins(&g, &[0], 1).unwrap());
        assert!(!wins(&g, &[1, 2], 1).unwrap());
        assert!(!wins(&g, &[1, 2], 2).unwrap());
        assert!(wins(&g, &[0, 1, 2], 1).unwrap());
    }

    #[test]
    fn wins_beats_each_rival_separately() {
        // 3 > 1 and 3 > 2: no majority of the total needed
        let g = ElectionGraph::new(
            3,
            vec![1, 2, 3],
            vec![3, 1, 2],
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        assert!(wins(&g, &[0, 1, 2], 1).unwrap());
        assert!(!wins(&g, &[0, 1, 2], 2).unwrap());
        assert!(!wins(&g, &[0, 1, 2], 3).unwrap());
    }

    #[test]
    fn wins_rejects_bad_input() {
        let g = path_graph(&[1, 2, 1], 2);
        assert!(wins(&g, &[], 1).is_err());
        assert!(wins(&g, &[7], 1).is_err());
        assert!(wins(&g, &[0], 3).is_err());
    }

    #[test]
    fn count_winning_basics() {
        let g = path_graph(&[1, 2, 1], 2);
        let d = Districting::new(vec![vec![0], vec![1, 2]]);
        assert_eq!(count_winning(&g, &d, 1, false).unwrap(), 1);
        assert_eq!(count_winning(&g, &d, 1, true).unwrap(), 1);
        let all = Districting::new(vec![vec![0, 1, 2]]);
        assert_eq!(count_winning(&g, &all, 1, false).unwrap(), 1);
        assert_eq!(count_winning(&g, &all, 1, true).unwrap(), 0);
    }

    #[test]
    fn count_winning_rejects_invalid_partition() {
        let g = path_graph(&[1, 2, 1], 2);
        let overlap = Districting::new(vec![vec![0, 1], vec![1, 2]]);
        assert!(count_winning(&g, &overlap, 1, false).is_err());
        let gap = Districting::new(vec![vec![0], vec![2]]);
        assert!(count_winning(&g, &gap, 1, false).is_err());
    }

    #[test]
    fn verify_flags_each_violation_kind() {
        let g = path_graph(&[1, 2, 1, 2], 2);
        let req = SolveRequest::new(2, KMode::Exactly, Objective::AllWinning);

        let ok = Districting::new(vec![vec![0, 1], vec![2, 3]]);
        let report = verify_districting(&g, &ok, &req);
        assert!(report.is_valid());
        assert_eq!(report.winning, Some(0));

        // {0, 2} skips vertex 1, so it is disconnected on a path
        let disc = Districting::new(vec![vec![0, 2], vec![1, 3]]);
        let report = verify_districting(&g, &disc, &req);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DisconnectedDistrict { .. })));
        assert_eq!(report.winning, None);

        let wrong_k = Districting::new(vec![vec![0, 1, 2, 3]]);
        let report = verify_districting(&g, &wrong_k, &req);
        assert_eq!(
            report.violations,
            vec![Violation::DistrictCount { found: 1, k: 2, mode: KMode::Exactly }]
        );
    }

    #[test]
    fn verify_checks_bounds() {
        let g = path_graph(&[1, 1, 1, 1], 2);
        let mut req = SolveRequest::new(2, KMode::Exactly, Objective::AllWinning);
        req.bounds = Some(Bounds { lower: 2, upper: 2, kind: BoundKind::VertexCount });
        let uneven = Districting::new(vec![vec![0], vec![1, 2, 3]]);
        let report = verify_districting(&g, &uneven, &req);
        assert_eq!(report.violations.len(), 2);
        let even = Districting::new(vec![vec![0, 1], vec![2, 3]]);
        assert!(verify_districting(&g, &even, &req).is_valid());
    }

    #[test]
    fn contract_merges_weights_and_provenance() {
        // red pair {1,2} inside a blue path
        let g = path_graph(&[1, 2, 2, 1], 2);
        let prov = ProvenanceMap::identity(4);
        let (c, p) = contract_vertex_set(&g, &[1, 2], &prov).unwrap();
        assert_eq!(c.vertex_count(), 3);
        assert_eq!(c.color(1), 2);
        assert_eq!(c.weight(1), 2);
        assert_eq!(p.group(1), &[1, 2]);
        assert_eq!(c.edges(), vec![(0, 1), (1, 2)]);

        // singleton contraction is the identity up to provenance
        let (c1, p1) = contract_vertex_set(&g, &[2], &prov).unwrap();
        assert_eq!(c1, g);
        assert_eq!(p1.group(2), &[2]);
    }

    #[test]
    fn contract_rejects_mixed_or_disconnected_sets() {
        let g = path_graph(&[1, 2, 2, 1], 2);
        let prov = ProvenanceMap::identity(4);
        assert!(contract_vertex_set(&g, &[0, 1], &prov).is_err());
        assert!(contract_vertex_set(&g, &[0, 3], &prov).is_err());
    }

    #[test]
    fn contractions_compose() {
        let g = ElectionGraph::new(
            2,
            vec![2, 2, 2, 1],
            vec![1; 4],
            &[(0, 1), (1, 2), (2, 3)],
        )
        .unwrap();
        let prov = ProvenanceMap::identity(4);
        let (c1, p1) = contract_vertex_set(&g, &[0, 1], &prov).unwrap();
        let (c2, p2) = contract_vertex_set(&c1, &[0, 1], &p1).unwrap();
        assert_eq!(c2.vertex_count(), 2);
        assert_eq!(p2.group(0), &[0, 1, 2]);
        assert_eq!(c2.weight(0), 3);
    }

    #[test]
    fn expand_round_trips_contraction() {
        let g = path_graph(&[1, 2, 2, 1], 2);
        let prov = ProvenanceMap::identity(4);
        let (c, p) = contract_vertex_set(&g, &[1, 2], &prov).unwrap();
        let d = Districting::new(vec![vec![0], vec![1, 2]]);
        let e = expand_districting(&d, &p).unwrap();
        assert_eq!(e, Districting::new(vec![vec![0], vec![1, 2, 3]]));
        let _ = c;
    }

    #[test]
    fn split_detaches_leaves_from_losing_districts() {
        let g = path_graph(&[2, 2, 2, 2], 2);
        let one = Districting::new(vec![vec![0, 1, 2, 3]]);
        let d = split_losing_districts(&g, &one, 3, 1).unwrap();
        assert_eq!(d.k(), 3);
        let req = SolveRequest::new(3, KMode::Exactly, Objective::AllWinning);
        assert!(verify_districting(&g, &d, &req).is_valid());
    }

    #[test]
    fn split_never_touches_winning_districts() {
        let g = path_graph(&[1, 2, 2, 2], 2);
        let start = Districting::new(vec![vec![0], vec![1, 2, 3]]);
        let d = split_losing_districts(&g, &start, 3, 1).unwrap();
        assert!(d.districts().contains(&vec![0]));
        assert_eq!(d.k(), 3);
    }

    #[test]
    fn split_reports_infeasible_cases() {
        let g = path_graph(&[1, 1], 2);
        let d = Districting::new(vec![vec![0, 1]]);
        assert!(matches!(
            split_losing_districts(&g, &d, 3, 1),
            Err(Error::Infeasible(_))
        ));
        // all-winning multi-vertex district: the strict splitter refuses,
        // the wrapper detaches from winners instead
        assert!(matches!(
            split_losing_districts(&g, &d, 2, 1),
            Err(Error::Infeasible(_))
        ));
        let forced = split_to_exactly_k(&g, &d, 2, 1).unwrap();
        assert_eq!(forced.k(), 2);
    }

    #[test]
    fn recolor_folds_all_non_blue_colors() {
        let g = ElectionGraph::new(4, vec![1, 3, 4, 2], vec![1, 2, 3, 4], &[(0, 1), (1, 2), (2, 3)])
            .unwrap();
        let (two, original) = recolor_to_two(&g);
        assert_eq!(two.candidates(), 2);
        assert_eq!((0..4).map(|v| two.color(v)).collect::<Vec<_>>(), vec![1, 2, 2, 2]);
        assert_eq!(original, vec![1, 3, 4, 2]);
        assert_eq!((0..4).map(|v| two.weight(v)).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn graph_construction_rejects_bad_edges() {
        assert!(ElectionGraph::new(2, vec![1, 2], vec![1, 1], &[(0, 2)]).is_err());
        assert!(ElectionGraph::new(2, vec![1, 2], vec![1, 1], &[(1, 1)]).is_err());
        assert!(ElectionGraph::new(1, vec![1], vec![1], &[]).is_err());
        assert!(ElectionGraph::new(2, vec![1, 3], vec![1, 1], &[]).is_err());
    }

    #[test]
    fn districting_canonical_form() {
        let a = Districting::new(vec![vec![2, 1], vec![0]]);
        let b = Districting::new(vec![vec![0], vec![1, 2]]);
        assert_eq!(a, b);
        assert_eq!(a.districts()[0], vec![0]);
    }
}
