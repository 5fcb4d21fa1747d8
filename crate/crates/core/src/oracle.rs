//! Exhaustive ground truth for small instances.
//!
//! Enumerates every partition of the vertex set into non-empty connected
//! districts exactly once and reads the optimum off the list. Everything
//! faster in this crate is tested against these answers.

use crate::error::{Error, Result};
use crate::graph::{
    count_winning_unchecked, Districting, ElectionGraph, KMode, Objective, SolveRequest,
};

/// Largest vertex count the enumerator accepts by default. The search is
/// exponential; past this point the answer stops being a desk-side check.
pub const DEFAULT_ORACLE_CAP: usize = 12;

struct Search<'a, F: FnMut(&[Vec<usize>])> {
    graph: &'a ElectionGraph,
    k: usize,
    k_mode: KMode,
    districts: Vec<Vec<usize>>,
    // per district: does its current member set already induce a connected
    // subgraph? Connected districts can never become infeasible later.
    connected: Vec<bool>,
    visit: F,
}

impl<'a, F: FnMut(&[Vec<usize>])> Search<'a, F> {
    /// Can district `d` still end up connected using only unassigned
    /// vertices (ids >= `next`) as glue?
    fn completable(&self, d: usize, next: usize) -> bool {
        let n = self.graph.vertex_count();
        let members = &self.districts[d];
        let mut allowed = vec![false; n];
        for &v in members {
            allowed[v] = true;
        }
        for v in next..n {
            allowed[v] = true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![members[0]];
        seen[members[0]] = true;
        while let Some(u) = stack.pop() {
            for &w in self.graph.neighbors(u) {
                if allowed[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        members.iter().all(|&v| seen[v])
    }

    fn assign(&mut self, v: usize) {
        let n = self.graph.vertex_count();
        if v == n {
            let enough = match self.k_mode {
                KMode::Exactly => self.districts.len() == self.k,
                KMode::AtMost => self.districts.len() <= self.k,
            };
            if enough {
                (self.visit)(&self.districts);
            }
            return;
        }
        // Exactly-k needs one fresh vertex per still-unopened district.
        if self.k_mode == KMode::Exactly && self.districts.len() + (n - v) < self.k {
            return;
        }

        for d in 0..self.districts.len() {
            self.districts[d].push(v);
            let was_connected = self.connected[d];
            self.connected[d] = self.graph.is_connected_subset(&self.districts[d]);
            let viable = (0..self.districts.len())
                .all(|i| self.connected[i] || self.completable(i, v + 1));
            if viable {
                self.assign(v + 1);
            }
            self.districts[d].pop();
            self.connected[d] = was_connected;
        }

        // Districts are opened in vertex order, so each partition is
        // produced in exactly one canonical labeling. Taking v away from the
        // pool of future glue can strand another district, so the viability
        // check must run here too.
        if self.districts.len() < self.k {
            self.districts.push(vec![v]);
            self.connected.push(true);
            let viable = (0..self.districts.len())
                .all(|i| self.connected[i] || self.completable(i, v + 1));
            if viable {
                self.assign(v + 1);
            }
            self.districts.pop();
            self.connected.pop();
        }
    }
}

/// Calls `visit` once per partition of the graph into non-empty connected
/// districts matching `k` under `k_mode`.
pub fn for_each_connected_partition<F: FnMut(&[Vec<usize>])>(
    graph: &ElectionGraph,
    k: usize,
    k_mode: KMode,
    cap: usize,
    visit: F,
) -> Result<()> {
    let n = graph.vertex_count();
    if n > cap {
        return Err(Error::Unsupported(format!(
            "exhaustive enumeration capped at {cap} vertices, got {n}"
        )));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("k = {k} outside 1..={n}")));
    }
    let mut search = Search {
        graph,
        k,
        k_mode,
        districts: Vec::new(),
        connected: Vec::new(),
        visit,
    };
    search.assign(0);
    Ok(())
}

pub fn enumerate_connected_partitions(
    graph: &ElectionGraph,
    k: usize,
    k_mode: KMode,
) -> Result<Vec<Districting>> {
    let mut out = Vec::new();
    for_each_connected_partition(graph, k, k_mode, DEFAULT_ORACLE_CAP, |districts| {
        out.push(Districting::new(districts.to_vec()));
    })?;
    Ok(out)
}

/// Optimum over all districtings matching the request, by enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleAnswer {
    pub feasible: bool,
    pub w: usize,
    pub witness: Option<Districting>,
}

pub fn oracle_max_winning(graph: &ElectionGraph, request: &SolveRequest) -> Result<OracleAnswer> {
    request.validate(graph)?;
    let singleton = request.objective == Objective::SingletonWinning;
    let mut best: Option<(usize, Districting)> = None;
    let mut feasible = false;
    for_each_connected_partition(
        graph,
        request.k,
        request.k_mode,
        DEFAULT_ORACLE_CAP,
        |districts| {
            if let Some(b) = &request.bounds {
                let ok = districts
                    .iter()
                    .all(|d| (b.lower..=b.upper).contains(&b.district_size(graph, d)));
                if !ok {
                    return;
                }
            }
            feasible = true;
            let d = Districting::new(districts.to_vec());
            let w = count_winning_unchecked(graph, &d, request.candidate, singleton);
            if best.as_ref().map_or(true, |(bw, _)| w > *bw) {
                best = Some((w, d));
            }
        },
    )?;
    match best {
        Some((w, witness)) => Ok(OracleAnswer { feasible: true, w, witness: Some(witness) }),
        None => Ok(OracleAnswer { feasible, w: 0, witness: None }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Bounds, BoundKind};

    fn unit_graph(colors: &[usize], edges: &[(usize, usize)]) -> ElectionGraph {
        let c = colors.iter().copied().max().unwrap().max(2);
        ElectionGraph::new(c, colors.to_vec(), vec![1; colors.len()], edges).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        let mut num = 1usize;
        for i in 0..k {
            num = num * (n - i) / (i + 1);
        }
        num
    }

    #[test]
    fn path_partition_counts_match_edge_choices() {
        // a path splits into k connected pieces by cutting k-1 of its
        // n-1 edges, so the count is C(n-1, k-1)
        for n in 1..=6usize {
            let colors = vec![1; n];
            let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
            let g = unit_graph(&colors, &edges);
            for k in 1..=n {
                let parts = enumerate_connected_partitions(&g, k, KMode::Exactly).unwrap();
                assert_eq!(parts.len(), binomial(n - 1, k - 1), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn star_partition_counts() {
        // star with 3 leaves: only leaf subsets can leave the center, so
        // exactly-k counts are C(3, k-1)
        let g = unit_graph(&[1, 1, 1, 1], &[(0, 1), (0, 2), (0, 3)]);
        for k in 1..=4 {
            let parts = enumerate_connected_partitions(&g, k, KMode::Exactly).unwrap();
            assert_eq!(parts.len(), binomial(3, k - 1), "k={k}");
        }
    }

    #[test]
    fn high_id_center_never_yields_disconnected_leaves() {
        // the two leaves of this star come before the center; grouping them
        // while the center goes its own way must be rejected
        let g = unit_graph(&[1, 1, 1], &[(0, 2), (1, 2)]);
        let parts = enumerate_connected_partitions(&g, 2, KMode::Exactly).unwrap();
        for p in &parts {
            for d in p.districts() {
                assert!(g.is_connected_subset(d), "disconnected district in {p:?}");
            }
        }
        // the only 2-partitions are leaf/rest ones
        assert_eq!(parts.len(), 2);
    }

    #[test]
    fn at_most_accumulates_exact_counts() {
        let g = unit_graph(&[1, 1, 1, 1], &[(0, 1), (1, 2), (2, 3)]);
        let upto3 = enumerate_connected_partitions(&g, 3, KMode::AtMost).unwrap();
        let exact: usize = (1..=3)
            .map(|k| enumerate_connected_partitions(&g, k, KMode::Exactly).unwrap().len())
            .sum();
        assert_eq!(upto3.len(), exact);
    }

    #[test]
    fn partitions_are_unique_and_valid() {
        let g = unit_graph(&[1, 1, 1, 1, 1], &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)]);
        let parts = enumerate_connected_partitions(&g, 2, KMode::Exactly).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for p in &parts {
            assert!(seen.insert(format!("{:?}", p.districts())), "duplicate {p:?}");
            for d in p.districts() {
                assert!(g.is_connected_subset(d));
            }
        }
    }

    #[test]
    fn oracle_on_blue_red_blue_path() {
        let g = unit_graph(&[1, 2, 1], &[(0, 1), (1, 2)]);
        let req = SolveRequest::new(2, KMode::Exactly, Objective::AllWinning);
        let ans = oracle_max_winning(&g, &req).unwrap();
        assert_eq!(ans.w, 1);
        let req3 = SolveRequest::new(3, KMode::Exactly, Objective::AllWinning);
        assert_eq!(oracle_max_winning(&g, &req3).unwrap().w, 2);
    }

    #[test]
    fn oracle_singleton_never_exceeds_all_mode() {
        let g = unit_graph(&[1, 2, 1, 1, 2], &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        for k in 1..=5 {
            let all = SolveRequest::new(k, KMode::Exactly, Objective::AllWinning);
            let single = SolveRequest::new(k, KMode::Exactly, Objective::SingletonWinning);
            let wa = oracle_max_winning(&g, &all).unwrap().w;
            let ws = oracle_max_winning(&g, &single).unwrap().w;
            assert!(ws <= wa, "k={k}: singleton {ws} > all {wa}");
        }
    }

    #[test]
    fn oracle_respects_bounds() {
        let g = unit_graph(&[1, 1, 1, 1], &[(0, 1), (1, 2), (2, 3)]);
        let mut req = SolveRequest::new(2, KMode::Exactly, Objective::AllWinning);
        req.bounds = Some(Bounds { lower: 2, upper: 2, kind: BoundKind::VertexCount });
        let ans = oracle_max_winning(&g, &req).unwrap();
        assert_eq!(ans.w, 2);
        assert_eq!(
            ans.witness.unwrap(),
            Districting::new(vec![vec![0, 1], vec![2, 3]])
        );

        // lower bound 3 with k=2 on four vertices cannot be met
        req.bounds = Some(Bounds { lower: 3, upper: 4, kind: BoundKind::VertexCount });
        let ans = oracle_max_winning(&g, &req).unwrap();
        assert!(!ans.feasible);
        assert_eq!(ans.w, 0);
        assert!(ans.witness.is_none());
    }

    #[test]
    fn oracle_rejects_oversized_instances() {
        let n = DEFAULT_ORACLE_CAP + 1;
        let colors = vec![1; n];
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let g = unit_graph(&colors, &edges);
        let req = SolveRequest::new(2, KMode::Exactly, Objective::AllWinning);
        assert!(matches!(oracle_max_winning(&g, &req), Err(Error::Unsupported(_))));
    }

    #[test]
    fn disconnected_graphs_partition_per_component() {
        // two isolated vertices: only the 2-district partition exists
        let g = unit_graph(&[1, 1], &[]);
        assert!(enumerate_connected_partitions(&g, 1, KMode::Exactly).unwrap().is_empty());
        let two = enumerate_connected_partitions(&g, 2, KMode::Exactly).unwrap();
        assert_eq!(two.len(), 1);
    }
}
