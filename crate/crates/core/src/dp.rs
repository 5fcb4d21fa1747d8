//! Exact solver: dynamic programming over a nice tree decomposition.
//!
//! A table entry describes the state of a partial solution restricted to the
//! vertices seen below one decomposition node: how many districts exist so
//! far, how many of them currently win, how the bag splits into connected
//! partial districts, and per-class vote tallies. Optional extensions carry
//! per-class sizes (when district-size bounds are requested) and a flag
//! telling whether a class is still a single original vertex (when only
//! singleton districts may count as winners).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{
    count_winning_unchecked, BoundKind, Districting, ElectionGraph, KMode, Objective, SolveRequest,
};
use crate::treewidth::{heuristic_decomposition, make_nice, NiceNodeKind, NiceTreeDecomposition};

/// Identity of a configuration. Two entries with equal keys describe partial
/// solutions that evolve identically from here on, so only the one with the
/// larger winner count is kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConfigKey {
    /// Districts opened so far, closed ones included. May temporarily exceed
    /// the requested k: separate classes can later turn out to be pieces of
    /// one district and merge.
    kappa: u32,
    /// Class id per bag position, numbered by first occurrence.
    classes: Vec<u8>,
    /// Vote weight per class and candidate, flattened class-major.
    tallies: Vec<u64>,
    /// Accumulated district size per class, present iff bounds are requested.
    sizes: Option<Vec<u64>>,
    /// Bit per class: still a lone original vertex. Present iff the
    /// objective counts only singleton districts.
    flags: Option<u32>,
}

/// How a configuration was produced, for witness reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Choice {
    Leaf,
    Introduce { child: usize },
    Forget { child: usize },
    Join { left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub struct Config {
    pub(crate) key: ConfigKey,
    pub(crate) omega: u32,
    pub(crate) choice: Choice,
}

/// Deduplicated configuration set for one decomposition node.
#[derive(Debug, Clone, Default)]
pub struct ConfigTable {
    configs: Vec<Config>,
    index: HashMap<ConfigKey, usize>,
}

impl ConfigTable {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    fn insert(&mut self, key: ConfigKey, omega: u32, choice: Choice) {
        if let Some(&i) = self.index.get(&key) {
            if omega > self.configs[i].omega {
                self.configs[i].omega = omega;
                self.configs[i].choice = choice;
            }
        } else {
            self.index.insert(key.clone(), self.configs.len());
            self.configs.push(Config { key, omega, choice });
        }
    }
}

fn class_count(classes: &[u8]) -> usize {
    classes.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
}

/// A partial solution can still reach the district budget only if its closed
/// districts, plus at least one district for the remaining open classes,
/// fit. Open classes may merge with each other and with future vertices, so
/// they account for at least one final district, not one each.
fn viable(kappa: u32, open_classes: usize, k: usize) -> bool {
    let closed = kappa as usize - open_classes;
    closed + usize::from(open_classes > 0) <= k
}

fn wins_tally(tally: &[u64], candidate: usize) -> bool {
    let mine = tally[candidate - 1];
    tally
        .iter()
        .enumerate()
        .all(|(i, &t)| i == candidate - 1 || mine > t)
}

/// Whether class `cid` currently counts toward the winner tally.
fn class_eff(key: &ConfigKey, cid: usize, c: usize, request: &SolveRequest) -> bool {
    let tally = &key.tallies[cid * c..(cid + 1) * c];
    let won = wins_tally(tally, request.candidate);
    match request.objective {
        Objective::AllWinning => won,
        Objective::SingletonWinning => won && key.flags.unwrap_or(0) >> cid & 1 == 1,
    }
}

fn vertex_size(graph: &ElectionGraph, v: usize, kind: BoundKind) -> u64 {
    match kind {
        BoundKind::VertexCount => 1,
        BoundKind::TotalWeight => graph.weight(v),
    }
}

fn track_sizes(request: &SolveRequest) -> bool {
    request.bounds.is_some()
}

fn track_flags(request: &SolveRequest) -> bool {
    matches!(request.objective, Objective::SingletonWinning)
}

/// Table for an empty leaf: one configuration with nothing opened.
pub fn dp_leaf(request: &SolveRequest) -> ConfigTable {
    let mut table = ConfigTable::default();
    table.insert(
        ConfigKey {
            kappa: 0,
            classes: Vec::new(),
            tallies: Vec::new(),
            sizes: track_sizes(request).then(Vec::new),
            flags: track_flags(request).then_some(0),
        },
        0,
        Choice::Leaf,
    );
    table
}

/// Transition for a node that introduces vertex `v` above a child with bag
/// `child_bag`. Every subset of v's neighbors in the bag may glue their
/// classes together through v; the empty subset opens a fresh district.
pub fn dp_introduce(
    child: &ConfigTable,
    v: usize,
    child_bag: &[usize],
    graph: &ElectionGraph,
    request: &SolveRequest,
) -> ConfigTable {
    let c = graph.candidates();
    let color_idx = graph.color(v) - 1;
    let wt = graph.weight(v);
    let b = child_bag.len();
    let v_pos = child_bag.partition_point(|&u| u < v);

    let mut nbr_mask: u32 = 0;
    for (p, &u) in child_bag.iter().enumerate() {
        if graph.has_edge(u, v) {
            nbr_mask |= 1 << p;
        }
    }

    let mut table = ConfigTable::default();
    for (ci, cfg) in child.configs.iter().enumerate() {
        let key = &cfg.key;
        let ncls = class_count(&key.classes);
        // all subsets of the neighbor positions, empty set last
        let mut s = nbr_mask;
        loop {
            let mut merged_mask: u32 = 0;
            for p in 0..b {
                if s >> p & 1 == 1 {
                    merged_mask |= 1 << key.classes[p];
                }
            }
            let merged_n = merged_mask.count_ones();
            let kappa = cfg.key.kappa - merged_n + 1;

            let mut merged_tally = vec![0u64; c];
            let mut merged_size = 0u64;
            let mut omega = cfg.omega;
            for cid in 0..ncls {
                if merged_mask >> cid & 1 == 1 {
                    for i in 0..c {
                        merged_tally[i] += key.tallies[cid * c + i];
                    }
                    if let Some(sizes) = &key.sizes {
                        merged_size += sizes[cid];
                    }
                    if class_eff(key, cid, c, request) {
                        omega -= 1;
                    }
                }
            }
            merged_tally[color_idx] += wt;
            merged_size += request
                .bounds
                .as_ref()
                .map_or(0, |bd| vertex_size(graph, v, bd.kind));

            let size_ok = request
                .bounds
                .as_ref()
                .map_or(true, |bd| merged_size <= bd.upper);
            if size_ok {
                // label parent positions: merged classes and v share a marker
                const MERGED: u16 = u16::MAX;
                let mut raw = Vec::with_capacity(b + 1);
                for p in 0..b {
                    if p == v_pos {
                        raw.push(MERGED);
                    }
                    let cid = key.classes[p];
                    raw.push(if merged_mask >> cid & 1 == 1 {
                        MERGED
                    } else {
                        cid as u16
                    });
                }
                if v_pos == b {
                    raw.push(MERGED);
                }

                let mut relabel = [u8::MAX; 256];
                let mut merged_new = u8::MAX;
                let mut classes = Vec::with_capacity(b + 1);
                let mut next = 0u8;
                for &label in &raw {
                    let slot = if label == MERGED {
                        &mut merged_new
                    } else {
                        &mut relabel[label as usize]
                    };
                    if *slot == u8::MAX {
                        *slot = next;
                        next += 1;
                    }
                    classes.push(*slot);
                }
                let new_ncls = next as usize;

                let mut tallies = vec![0u64; new_ncls * c];
                let mut sizes = key.sizes.as_ref().map(|_| vec![0u64; new_ncls]);
                let mut flags = key.flags.map(|_| 0u32);
                for old in 0..ncls {
                    let new = relabel[old];
                    if new == u8::MAX {
                        continue;
                    }
                    let new = new as usize;
                    tallies[new * c..(new + 1) * c]
                        .copy_from_slice(&key.tallies[old * c..(old + 1) * c]);
                    if let (Some(dst), Some(src)) = (&mut sizes, &key.sizes) {
                        dst[new] = src[old];
                    }
                    if let (Some(dst), Some(src)) = (&mut flags, &key.flags) {
                        *dst |= (src >> old & 1) << new;
                    }
                }
                let mn = merged_new as usize;
                tallies[mn * c..(mn + 1) * c].copy_from_slice(&merged_tally);
                if let Some(dst) = &mut sizes {
                    dst[mn] = merged_size;
                }
                if let Some(dst) = &mut flags {
                    if s == 0 {
                        *dst |= 1 << mn;
                    }
                }

                let new_key = ConfigKey { kappa, classes, tallies, sizes, flags };
                if class_eff(&new_key, mn, c, request) {
                    omega += 1;
                }
                if viable(kappa, new_ncls, request.k) {
                    table.insert(new_key, omega, Choice::Introduce { child: ci });
                }
            }

            if s == 0 {
                break;
            }
            s = (s - 1) & nbr_mask;
        }
    }
    table
}

/// Transition for a node that forgets vertex `v`. A class whose only bag
/// member is `v` closes for good (its lower size bound is due now); in a
/// larger class `v` simply stops being visible.
pub fn dp_forget(
    child: &ConfigTable,
    v: usize,
    child_bag: &[usize],
    graph: &ElectionGraph,
    request: &SolveRequest,
) -> ConfigTable {
    let v_pos = child_bag
        .iter()
        .position(|&u| u == v)
        .expect("forgotten vertex must be in the child bag");
    let c = graph.candidates();

    let mut table = ConfigTable::default();
    for (ci, cfg) in child.configs.iter().enumerate() {
        let key = &cfg.key;
        let ncls = class_count(&key.classes);
        let v_cid = key.classes[v_pos];
        let closing = key.classes.iter().filter(|&&x| x == v_cid).count() == 1;

        if closing {
            if let (Some(bounds), Some(sizes)) = (&request.bounds, &key.sizes) {
                let size = sizes[v_cid as usize];
                if size < bounds.lower || size > bounds.upper {
                    continue;
                }
            }
        }

        let mut relabel = [u8::MAX; 256];
        let mut classes = Vec::with_capacity(key.classes.len() - 1);
        let mut next = 0u8;
        for (p, &cid) in key.classes.iter().enumerate() {
            if p == v_pos {
                continue;
            }
            if relabel[cid as usize] == u8::MAX {
                relabel[cid as usize] = next;
                next += 1;
            }
            classes.push(relabel[cid as usize]);
        }
        let new_ncls = next as usize;

        let mut tallies = vec![0u64; new_ncls * c];
        let mut sizes = key.sizes.as_ref().map(|_| vec![0u64; new_ncls]);
        let mut flags = key.flags.map(|_| 0u32);
        for old in 0..ncls {
            let new = relabel[old];
            if new == u8::MAX {
                continue;
            }
            let new = new as usize;
            tallies[new * c..(new + 1) * c].copy_from_slice(&key.tallies[old * c..(old + 1) * c]);
            if let (Some(dst), Some(src)) = (&mut sizes, &key.sizes) {
                dst[new] = src[old];
            }
            if let (Some(dst), Some(src)) = (&mut flags, &key.flags) {
                *dst |= (src >> old & 1) << new;
            }
        }

        if viable(key.kappa, new_ncls, request.k) {
            table.insert(
                ConfigKey { kappa: key.kappa, classes, tallies, sizes, flags },
                cfg.omega,
                Choice::Forget { child: ci },
            );
        }
    }
    table
}

/// Transition for a node joining two children over the same bag. Classes
/// from the two sides that share a bag vertex describe one district and are
/// glued transitively; bag vertices were tallied on both sides, so their
/// contribution is subtracted once.
pub fn dp_join(
    left: &ConfigTable,
    right: &ConfigTable,
    bag: &[usize],
    graph: &ElectionGraph,
    request: &SolveRequest,
) -> Result<ConfigTable> {
    let c = graph.candidates();
    let b = bag.len();
    for cfg in left.configs.iter().chain(right.configs.iter()) {
        if cfg.key.classes.len() != b {
            return Err(Error::Internal(
                "join children disagree with the bag size".into(),
            ));
        }
    }

    let mut table = ConfigTable::default();
    for (li, lcfg) in left.configs.iter().enumerate() {
        for (ri, rcfg) in right.configs.iter().enumerate() {
            let (lkey, rkey) = (&lcfg.key, &rcfg.key);
            let lncls = class_count(&lkey.classes);
            let rncls = class_count(&rkey.classes);

            // glue: positions sharing a class on either side share a district
            let mut parent: Vec<u8> = (0..b as u8).collect();
            fn find(parent: &mut [u8], mut x: u8) -> u8 {
                while parent[x as usize] != x {
                    let up = parent[parent[x as usize] as usize];
                    parent[x as usize] = up;
                    x = up;
                }
                x
            }
            for key in [lkey, rkey] {
                let mut first = [u8::MAX; 256];
                for (p, &cid) in key.classes.iter().enumerate() {
                    if first[cid as usize] == u8::MAX {
                        first[cid as usize] = p as u8;
                    } else {
                        let a = find(&mut parent, first[cid as usize]);
                        let bb = find(&mut parent, p as u8);
                        parent[a.max(bb) as usize] = a.min(bb);
                    }
                }
            }
            let mut relabel = [u8::MAX; 256];
            let mut classes = Vec::with_capacity(b);
            let mut next = 0u8;
            for p in 0..b as u8 {
                let root = find(&mut parent, p);
                if relabel[root as usize] == u8::MAX {
                    relabel[root as usize] = next;
                    next += 1;
                }
                classes.push(relabel[root as usize]);
            }
            let ncls = next as usize;

            let kappa_raw =
                lkey.kappa as i64 + rkey.kappa as i64 - lncls as i64 - rncls as i64 + ncls as i64;
            let kappa = kappa_raw as u32;

            let mut tallies = vec![0u64; ncls * c];
            let mut sizes = lkey.sizes.as_ref().map(|_| vec![0u64; ncls]);
            let mut flags = lkey.flags.map(|_| u32::MAX);
            let mut seen_constituent = [false; 512];
            let mut omega = lcfg.omega + rcfg.omega;
            for (side, key) in [(0usize, lkey), (1, rkey)] {
                for p in 0..b {
                    let old = key.classes[p] as usize;
                    if seen_constituent[side * 256 + old] {
                        continue;
                    }
                    seen_constituent[side * 256 + old] = true;
                    let g = classes[p] as usize;
                    for i in 0..c {
                        tallies[g * c + i] += key.tallies[old * c + i];
                    }
                    if let (Some(dst), Some(src)) = (&mut sizes, &key.sizes) {
                        dst[g] += src[old];
                    }
                    if let (Some(dst), Some(src)) = (&mut flags, &key.flags) {
                        if src >> old & 1 == 0 {
                            *dst &= !(1 << g);
                        }
                    }
                    if class_eff(key, old, c, request) {
                        omega -= 1;
                    }
                }
            }
            for (p, &u) in bag.iter().enumerate() {
                let g = classes[p] as usize;
                tallies[g * c + graph.color(u) - 1] -= graph.weight(u);
                if let Some(dst) = &mut sizes {
                    dst[g] -= request
                        .bounds
                        .as_ref()
                        .map_or(0, |bd| vertex_size(graph, u, bd.kind));
                }
            }
            if let Some(f) = &mut flags {
                // clear the bits above the glued class count
                *f &= u32::MAX >> (32 - ncls.max(1) as u32);
                if ncls == 0 {
                    *f = 0;
                }
            }

            let size_ok = match (&request.bounds, &sizes) {
                (Some(bd), Some(sz)) => sz.iter().all(|&s| s <= bd.upper),
                _ => true,
            };
            if !size_ok || !viable(kappa, ncls, request.k) {
                continue;
            }

            let new_key = ConfigKey { kappa, classes, tallies, sizes, flags };
            for g in 0..ncls {
                if class_eff(&new_key, g, c, request) {
                    omega += 1;
                }
            }
            table.insert(new_key, omega, Choice::Join { left: li, right: ri });
        }
    }
    Ok(table)
}

/// Best winner count at the empty-bag root: the largest ω over entries whose
/// district count matches the mode, preferring more districts on ties so the
/// witness uses as much of the budget as possible. None means infeasible.
pub fn dp_root(table: &ConfigTable, request: &SolveRequest) -> Option<(usize, usize)> {
    let mut best: Option<(u32, u32, usize)> = None;
    for (i, cfg) in table.configs.iter().enumerate() {
        let fits = match request.k_mode {
            KMode::Exactly => cfg.key.kappa as usize == request.k,
            KMode::AtMost => cfg.key.kappa as usize <= request.k,
        };
        if fits && best.map_or(true, |(bo, bk, _)| (cfg.omega, cfg.key.kappa) > (bo, bk)) {
            best = Some((cfg.omega, cfg.key.kappa, i));
        }
    }
    best.map(|(omega, _, i)| (omega as usize, i))
}

/// Solver limits. The width cap keeps the bag-partition blow-up bounded; the
/// table budget caps stored configurations across all nodes, guarding
/// against large weights inflating tally diversity.
#[derive(Debug, Clone)]
pub struct DpOptions {
    pub width_cap: usize,
    pub table_budget: usize,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { width_cap: 8, table_budget: 4_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub w: usize,
    pub districting: Districting,
    /// Width of the decomposition actually used.
    pub width: usize,
}

pub fn solve_exact(
    graph: &ElectionGraph,
    request: &SolveRequest,
    decomposition: Option<&NiceTreeDecomposition>,
    options: &DpOptions,
) -> Result<ExactSolution> {
    request.validate(graph)?;

    let owned;
    let nice = match decomposition {
        Some(d) => {
            d.validate(graph)?;
            d
        }
        None => {
            owned = make_nice(graph, &heuristic_decomposition(graph))?;
            &owned
        }
    };
    let width = nice.width();
    if width > options.width_cap {
        return Err(Error::Unsupported(format!(
            "decomposition width {width} exceeds the cap {}",
            options.width_cap
        )));
    }

    let order = nice.postorder();
    let mut tables: Vec<Option<ConfigTable>> = (0..nice.len()).map(|_| None).collect();
    let mut stored = 0usize;
    for &id in &order {
        let node = nice.node(id);
        let table = match node.kind {
            NiceNodeKind::Leaf => dp_leaf(request),
            NiceNodeKind::Introduce(v) => {
                let child = node.children[0];
                let child_bag = &nice.node(child).bag;
                dp_introduce(
                    tables[child].as_ref().expect("child table"),
                    v,
                    child_bag,
                    graph,
                    request,
                )
            }
            NiceNodeKind::Forget(v) => {
                let child = node.children[0];
                let child_bag = &nice.node(child).bag;
                dp_forget(
                    tables[child].as_ref().expect("child table"),
                    v,
                    child_bag,
                    graph,
                    request,
                )
            }
            NiceNodeKind::Join => {
                let (l, r) = (node.children[0], node.children[1]);
                dp_join(
                    tables[l].as_ref().expect("left table"),
                    tables[r].as_ref().expect("right table"),
                    &node.bag,
                    graph,
                    request,
                )?
            }
        };
        stored += table.len();
        if stored > options.table_budget {
            return Err(Error::ResourceExhausted(format!(
                "configuration tables exceed the budget of {} entries",
                options.table_budget
            )));
        }
        debug_assert!(table_invariants_hold(&table, graph, request, width));
        tables[id] = Some(table);
    }

    let root_table = tables[nice.root()].as_ref().expect("root table");
    let Some((w, root_cfg)) = dp_root(root_table, request) else {
        return Err(Error::Infeasible(format!(
            "no districting with {} {} districts exists under the given constraints",
            match request.k_mode {
                KMode::Exactly => "exactly",
                KMode::AtMost => "at most",
            },
            request.k
        )));
    };

    let districting = reconstruct(graph, nice, &tables, root_cfg)?;
    debug_assert_eq!(
        count_winning_unchecked(
            graph,
            &districting,
            request.candidate,
            matches!(request.objective, Objective::SingletonWinning)
        ),
        w
    );
    Ok(ExactSolution { w, districting, width })
}

/// `solve_exact` with a heuristic decomposition and default limits.
pub fn solve_exact_default(graph: &ElectionGraph, request: &SolveRequest) -> Result<ExactSolution> {
    solve_exact(graph, request, None, &DpOptions::default())
}

/// Debug-build check of the documented table invariants: ω ≤ κ, tallies
/// within the total weight, and the table no larger than the coarse
/// state-space bound.
fn table_invariants_hold(
    table: &ConfigTable,
    graph: &ElectionGraph,
    request: &SolveRequest,
    width: usize,
) -> bool {
    let total = graph.total_weight();
    for cfg in &table.configs {
        if cfg.omega > cfg.key.kappa || cfg.key.tallies.iter().any(|&t| t > total) {
            return false;
        }
    }
    let wp = (width + 1) as f64;
    let kp = (request.k + width + 2) as f64;
    let cap = kp * kp
        * wp.powf(wp)
        * ((total + 1) as f64).powf(graph.candidates() as f64 * wp)
        * 2.0
        * 2f64.powf(wp);
    (table.len() as f64) <= cap
}

/// Rebuilds a districting by walking the back-pointers from a root entry.
/// Every vertex is placed at its unique forget node: fresh district when its
/// class closes there, the class's district otherwise.
fn reconstruct(
    graph: &ElectionGraph,
    nice: &NiceTreeDecomposition,
    tables: &[Option<ConfigTable>],
    root_cfg: usize,
) -> Result<Districting> {
    let mut districts: Vec<Vec<usize>> = Vec::new();
    // per frame: node, config index, district id per class id
    let mut stack: Vec<(usize, usize, Vec<usize>)> = vec![(nice.root(), root_cfg, Vec::new())];
    while let Some((id, ci, dist_of)) = stack.pop() {
        let node = nice.node(id);
        let cfg = &tables[id].as_ref().expect("table")[ci];
        match (node.kind, cfg.choice) {
            (NiceNodeKind::Leaf, Choice::Leaf) => {}
            (NiceNodeKind::Introduce(v), Choice::Introduce { child }) => {
                let child_id = node.children[0];
                let child_bag = &nice.node(child_id).bag;
                let child_cfg = &tables[child_id].as_ref().expect("table")[child];
                let ncls = class_count(&child_cfg.key.classes);
                let mut child_dist = vec![usize::MAX; ncls];
                for (p, &u) in child_bag.iter().enumerate() {
                    let pp = node.bag.binary_search(&u).expect("bag member");
                    child_dist[child_cfg.key.classes[p] as usize] =
                        dist_of[cfg.key.classes[pp] as usize];
                }
                let _ = v;
                stack.push((child_id, child, child_dist));
            }
            (NiceNodeKind::Forget(v), Choice::Forget { child }) => {
                let child_id = node.children[0];
                let child_bag = &nice.node(child_id).bag;
                let child_cfg = &tables[child_id].as_ref().expect("table")[child];
                let ncls = class_count(&child_cfg.key.classes);
                let v_cid = child_cfg.key.classes
                    [child_bag.iter().position(|&u| u == v).expect("bag member")]
                    as usize;
                let mut child_dist = vec![usize::MAX; ncls];
                for (p, &u) in child_bag.iter().enumerate() {
                    if u == v {
                        continue;
                    }
                    let pp = node.bag.binary_search(&u).expect("bag member");
                    child_dist[child_cfg.key.classes[p] as usize] =
                        dist_of[cfg.key.classes[pp] as usize];
                }
                if child_dist[v_cid] == usize::MAX {
                    // class closed here: this district is complete
                    child_dist[v_cid] = districts.len();
                    districts.push(Vec::new());
                }
                districts[child_dist[v_cid]].push(v);
                stack.push((child_id, child, child_dist));
            }
            (NiceNodeKind::Join, Choice::Join { left, right }) => {
                let (l_id, r_id) = (node.children[0], node.children[1]);
                for (child_id, child_ci) in [(l_id, left), (r_id, right)] {
                    let child_cfg = &tables[child_id].as_ref().expect("table")[child_ci];
                    let ncls = class_count(&child_cfg.key.classes);
                    let mut child_dist = vec![usize::MAX; ncls];
                    for p in 0..node.bag.len() {
                        child_dist[child_cfg.key.classes[p] as usize] =
                            dist_of[cfg.key.classes[p] as usize];
                    }
                    stack.push((child_id, child_ci, child_dist));
                }
            }
            _ => {
                return Err(Error::Internal(
                    "back-pointer kind does not match the node kind".into(),
                ))
            }
        }
    }
    if districts.iter().map(|d| d.len()).sum::<usize>() != graph.vertex_count() {
        return Err(Error::Internal(
            "reconstruction did not place every vertex".into(),
        ));
    }
    Ok(Districting::new(districts))
}

impl std::ops::Index<usize> for ConfigTable {
    type Output = Config;
    fn index(&self, i: usize) -> &Config {
        &self.configs[i]
    }
}
