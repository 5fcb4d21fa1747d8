//! Tree decompositions: validation, elimination-order construction, and
//! conversion to the nice form the dynamic program consumes.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ElectionGraph;

/// Tree decomposition: `bags[i]` is the vertex bag of tree node `i`,
/// `edges` the tree edges over node indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }
}

/// Outcome of checking a decomposition against its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub width: usize,
    pub violations: Vec<String>,
}

impl DecompositionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the three decomposition properties: every vertex appears in a bag,
/// every edge fits inside a bag, and each vertex's bags form a connected
/// subtree. Also checks that the node edges form a tree.
pub fn validate_decomposition(graph: &ElectionGraph, td: &TreeDecomposition) -> DecompositionReport {
    let n = graph.vertex_count();
    let t = td.bags.len();
    let mut violations = Vec::new();

    if t == 0 {
        violations.push("decomposition has no nodes".to_string());
        return DecompositionReport { width: 0, violations };
    }
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                violations.push(format!("bag {i} contains unknown vertex {v}"));
            }
        }
    }

    let mut tree_adj: Vec<Vec<usize>> = vec![Vec::new(); t];
    let mut tree_ok = td.edges.len() + 1 == t;
    for &(a, b) in &td.edges {
        if a >= t || b >= t || a == b {
            violations.push(format!("tree edge ({a},{b}) is not between distinct nodes"));
            tree_ok = false;
        } else {
            tree_adj[a].push(b);
            tree_adj[b].push(a);
        }
    }
    if tree_ok {
        let mut seen = vec![false; t];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &tree_adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        tree_ok = reached == t;
    }
    if !tree_ok {
        violations.push(format!(
            "node edges do not form a tree ({} nodes, {} edges)",
            t,
            td.edges.len()
        ));
    }

    for v in 0..n {
        let holders: Vec<usize> = (0..t).filter(|&i| td.bags[i].contains(&v)).collect();
        if holders.is_empty() {
            violations.push(format!("vertex {v} appears in no bag"));
            continue;
        }
        if tree_ok {
            // the bags holding v must induce one connected piece of the tree
            let holder_set: BTreeSet<usize> = holders.iter().copied().collect();
            let mut seen = BTreeSet::from([holders[0]]);
            let mut queue = VecDeque::from([holders[0]]);
            while let Some(u) = queue.pop_front() {
                for &w in &tree_adj[u] {
                    if holder_set.contains(&w) && seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            if seen.len() != holders.len() {
                violations.push(format!("bags containing vertex {v} are not connected"));
            }
        }
    }

    for (u, v) in graph.edges() {
        if !td.bags.iter().any(|bag| bag.contains(&u) && bag.contains(&v)) {
            violations.push(format!("edge ({u},{v}) is covered by no bag"));
        }
    }

    DecompositionReport { width: td.width(), violations }
}

/// Builds a decomposition from an elimination order: bag i is the vertex
/// eliminated at step i plus its neighborhood at that moment, neighborhoods
/// are completed into cliques as vertices leave, and each bag hangs off the
/// bag of its earliest-eliminated neighbor.
fn decomposition_from_order(graph: &ElectionGraph, order: &[usize]) -> TreeDecomposition {
    let n = graph.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| graph.neighbors(v).iter().copied().collect())
        .collect();
    let mut step_of = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        step_of[v] = i;
    }

    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut edges = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let neigh: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag = neigh.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);

        if let Some(&first) = neigh.iter().min_by_key(|&&u| step_of[u]) {
            edges.push((i, step_of[first]));
        } else if i + 1 < n {
            edges.push((i, i + 1));
        }

        for a in 0..neigh.len() {
            for b in a + 1..neigh.len() {
                adj[neigh[a]].insert(neigh[b]);
                adj[neigh[b]].insert(neigh[a]);
            }
        }
        for &u in &neigh {
            adj[u].remove(&v);
        }
        adj[v].clear();
    }
    TreeDecomposition { bags, edges }
}

/// Min-fill elimination: each round removes the vertex whose neighborhood
/// needs the fewest fill edges, breaking ties by lower degree, then lower id.
/// Deterministic for a given graph.
pub fn heuristic_decomposition(graph: &ElectionGraph) -> TreeDecomposition {
    let n = graph.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| graph.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive: Vec<bool> = vec![true; n];
    let mut order = Vec::with_capacity(n);

    for _ in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        let mut best_v = usize::MAX;
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let neigh: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0usize;
            for a in 0..neigh.len() {
                for b in a + 1..neigh.len() {
                    if !adj[neigh[a]].contains(&neigh[b]) {
                        fill += 1;
                    }
                }
            }
            let key = (fill, neigh.len(), v);
            if best.map_or(true, |k| key < k) {
                best = Some(key);
                best_v = v;
            }
        }
        let v = best_v;
        order.push(v);
        let neigh: Vec<usize> = adj[v].iter().copied().collect();
        for a in 0..neigh.len() {
            for b in a + 1..neigh.len() {
                adj[neigh[a]].insert(neigh[b]);
                adj[neigh[b]].insert(neigh[a]);
            }
        }
        for &u in &neigh {
            adj[u].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
    }
    decomposition_from_order(graph, &order)
}

/// Default vertex cap for the exact search; past it the subset table
/// stops fitting in desk-scale time and memory.
pub const EXACT_DECOMPOSITION_CAP: usize = 12;

/// Degree of `v` after the vertices in mask `s` have been eliminated:
/// neighbors reached directly or through eliminated vertices.
fn eliminated_degree(graph: &ElectionGraph, s: u32, v: usize) -> usize {
    let mut seen_elim = 0u32;
    let mut out = 0u32;
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for &w in graph.neighbors(u) {
            let bit = 1u32 << w;
            if w == v {
                continue;
            }
            if s & bit != 0 {
                if seen_elim & bit == 0 {
                    seen_elim |= bit;
                    stack.push(w);
                }
            } else {
                out |= bit;
            }
        }
    }
    out.count_ones() as usize
}

/// Minimum-width decomposition by dynamic programming over elimination
/// prefixes. Exponential in n; refuses instances above `cap`.
pub fn exact_decomposition_small(graph: &ElectionGraph, cap: usize) -> Result<TreeDecomposition> {
    let n = graph.vertex_count();
    if n > cap.min(20) {
        return Err(Error::Unsupported(format!(
            "exact decomposition capped at {} vertices, got {n}",
            cap.min(20)
        )));
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // best[s] = smallest achievable max-degree when the vertices of s are
    // eliminated first; choice[s ∪ v] remembers the final vertex v.
    let mut best = vec![u8::MAX; (full as usize) + 1];
    let mut choice = vec![u8::MAX; (full as usize) + 1];
    best[0] = 0;
    for s in 0..=full {
        if best[s as usize] == u8::MAX {
            continue;
        }
        for v in 0..n {
            let bit = 1u32 << v;
            if s & bit != 0 {
                continue;
            }
            let d = eliminated_degree(graph, s, v) as u8;
            let cost = best[s as usize].max(d);
            let t = (s | bit) as usize;
            if cost < best[t] || (cost == best[t] && (v as u8) < choice[t]) {
                best[t] = cost;
                choice[t] = v as u8;
            }
        }
    }

    let mut order = vec![0usize; n];
    let mut s = full;
    for i in (0..n).rev() {
        let v = choice[s as usize] as usize;
        order[i] = v;
        s &= !(1u32 << v);
    }
    Ok(decomposition_from_order(graph, &order))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NiceNodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceNode {
    pub kind: NiceNodeKind,
    /// Sorted vertex bag.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Rooted binary decomposition in which every node is a leaf (empty bag),
/// introduces one vertex, forgets one vertex, or joins two children with
/// identical bags, and the root bag is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
    root: usize,
}

impl NiceTreeDecomposition {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, id: usize) -> &NiceNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|nd| nd.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Node ids with every child before its parent; ends at the root.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                out.push(id);
            } else {
                stack.push((id, true));
                for &c in &self.nodes[id].children {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Checks the nice-form shape rules plus the underlying decomposition
    /// properties against `graph`.
    pub fn validate(&self, graph: &ElectionGraph) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(Error::InvalidInput("empty nice decomposition".into()));
        }
        if !self.nodes[self.root].bag.is_empty() {
            return Err(Error::InvalidInput("root bag must be empty".into()));
        }
        for (id, nd) in self.nodes.iter().enumerate() {
            if nd.bag.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInput(format!("bag of node {id} is not sorted")));
            }
            match nd.kind {
                NiceNodeKind::Leaf => {
                    if !nd.children.is_empty() || !nd.bag.is_empty() {
                        return Err(Error::InvalidInput(format!(
                            "leaf node {id} must have no children and an empty bag"
                        )));
                    }
                }
                NiceNodeKind::Introduce(v) => {
                    if nd.children.len() != 1 {
                        return Err(Error::InvalidInput(format!(
                            "introduce node {id} must have one child"
                        )));
                    }
                    let child = &self.nodes[nd.children[0]];
                    let mut expect = child.bag.clone();
                    expect.push(v);
                    expect.sort_unstable();
                    if child.bag.contains(&v) || nd.bag != expect {
                        return Err(Error::InvalidInput(format!(
                            "introduce node {id} does not add exactly vertex {v}"
                        )));
                    }
                }
                NiceNodeKind::Forget(v) => {
                    if nd.children.len() != 1 {
                        return Err(Error::InvalidInput(format!(
                            "forget node {id} must have one child"
                        )));
                    }
                    let child = &self.nodes[nd.children[0]];
                    let expect: Vec<usize> =
                        child.bag.iter().copied().filter(|&u| u != v).collect();
                    if !child.bag.contains(&v) || nd.bag != expect {
                        return Err(Error::InvalidInput(format!(
                            "forget node {id} does not drop exactly vertex {v}"
                        )));
                    }
                }
                NiceNodeKind::Join => {
                    if nd.children.len() != 2 {
                        return Err(Error::InvalidInput(format!(
                            "join node {id} must have two children"
                        )));
                    }
                    for &c in &nd.children {
                        if self.nodes[c].bag != nd.bag {
                            return Err(Error::InvalidInput(format!(
                                "join node {id} and child {c} have different bags"
                            )));
                        }
                    }
                }
            }
        }

        // reuse the plain-decomposition checks for coverage and subtrees
        let mut edges = Vec::new();
        for (id, nd) in self.nodes.iter().enumerate() {
            for &c in &nd.children {
                edges.push((id, c));
            }
        }
        let flat = TreeDecomposition {
            bags: self.nodes.iter().map(|nd| nd.bag.clone()).collect(),
            edges,
        };
        let report = validate_decomposition(graph, &flat);
        if !report.is_valid() {
            return Err(Error::InvalidInput(format!(
                "nice decomposition invalid: {}",
                report.violations.join("; ")
            )));
        }
        Ok(())
    }
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, kind: NiceNodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Chain from an empty leaf up to `bag` by introducing each vertex.
    fn leaf_chain(&mut self, bag: &[usize]) -> usize {
        let mut top = self.push(NiceNodeKind::Leaf, Vec::new(), Vec::new());
        let mut current: Vec<usize> = Vec::new();
        for &v in bag {
            current.push(v);
            current.sort_unstable();
            top = self.push(NiceNodeKind::Introduce(v), current.clone(), vec![top]);
        }
        top
    }

    /// Forget the vertices leaving `from`, then introduce the ones missing
    /// for `to`; returns the node whose bag equals `to`.
    fn bridge(&mut self, mut top: usize, from: &[usize], to: &[usize]) -> usize {
        let to_set: BTreeSet<usize> = to.iter().copied().collect();
        let from_set: BTreeSet<usize> = from.iter().copied().collect();
        let mut current: Vec<usize> = from.to_vec();
        for &v in from {
            if !to_set.contains(&v) {
                current.retain(|&u| u != v);
                top = self.push(NiceNodeKind::Forget(v), current.clone(), vec![top]);
            }
        }
        for &v in to {
            if !from_set.contains(&v) {
                current.push(v);
                current.sort_unstable();
                top = self.push(NiceNodeKind::Introduce(v), current.clone(), vec![top]);
            }
        }
        top
    }
}

/// Converts a valid decomposition into nice form rooted at node 0. Width is
/// preserved; the node count is linear in `n * width`.
pub fn make_nice(graph: &ElectionGraph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    let report = validate_decomposition(graph, td);
    if !report.is_valid() {
        return Err(Error::InvalidInput(format!(
            "decomposition invalid: {}",
            report.violations.join("; ")
        )));
    }
    let t = td.bags.len();
    let mut tree_adj: Vec<Vec<usize>> = vec![Vec::new(); t];
    for &(a, b) in &td.edges {
        tree_adj[a].push(b);
        tree_adj[b].push(a);
    }
    for a in &mut tree_adj {
        a.sort_unstable();
    }

    let mut sorted_bags: Vec<Vec<usize>> = td.bags.clone();
    for bag in &mut sorted_bags {
        bag.sort_unstable();
        bag.dedup();
    }

    let mut builder = NiceBuilder { nodes: Vec::new() };
    // iterative post-order over the input tree, combining children as they
    // finish
    enum Frame {
        Enter(usize, usize),
        Combine(usize, usize),
    }
    let mut done: Vec<Option<usize>> = vec![None; t];
    let mut stack = vec![Frame::Enter(0, usize::MAX)];
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Enter(node, parent) => {
                stack.push(Frame::Combine(node, parent));
                for &c in tree_adj[node].iter().rev() {
                    if c != parent {
                        stack.push(Frame::Enter(c, node));
                    }
                }
            }
            Frame::Combine(node, parent) => {
                let bag = &sorted_bags[node];
                let children: Vec<usize> = tree_adj[node]
                    .iter()
                    .copied()
                    .filter(|&c| c != parent)
                    .collect();
                let top = if children.is_empty() {
                    builder.leaf_chain(bag)
                } else {
                    let mut acc: Option<usize> = None;
                    for &c in &children {
                        let sub = done[c].expect("child finished before parent");
                        let bridged = builder.bridge(sub, &sorted_bags[c], bag);
                        acc = Some(match acc {
                            None => bridged,
                            Some(left) => {
                                builder.push(NiceNodeKind::Join, bag.clone(), vec![left, bridged])
                            }
                        });
                    }
                    acc.unwrap()
                };
                done[node] = Some(top);
            }
        }
    }

    let top = done[0].expect("root finished");
    let root = builder.bridge(top, &sorted_bags[0], &[]);
    let nice = NiceTreeDecomposition { nodes: builder.nodes, root };
    nice.validate(graph)?;
    Ok(nice)
}
