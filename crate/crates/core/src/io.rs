//! On-disk JSON formats for instances, solutions, and tree
//! decompositions. Output is canonical: struct fields serialize in
//! alphabetical order, vertex lists are sorted, and map keys are sorted,
//! so equal values produce identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    verify_districting, wins, Bounds, Districting, ElectionGraph, KMode, Objective, SolveRequest,
};
use crate::planar::RotationSystem;
use crate::reductions::ReductionMeta;
use crate::treewidth::TreeDecomposition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexFile {
    pub color: usize,
    pub id: usize,
    pub weight: u64,
}

/// Rotation system as stored on disk: a map from vertex id to its cyclic
/// neighbor order, plus the outer face walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingFile {
    pub outer_face: Vec<usize>,
    pub rotation: BTreeMap<usize, Vec<usize>>,
}

impl EmbeddingFile {
    pub fn from_rotation_system(rs: &RotationSystem) -> Self {
        EmbeddingFile {
            outer_face: rs.outer_face.clone(),
            rotation: rs.rotation.iter().cloned().enumerate().collect(),
        }
    }

    pub fn to_rotation_system(&self, n: usize) -> Result<RotationSystem> {
        if self.rotation.len() != n || self.rotation.keys().enumerate().any(|(i, &k)| i != k) {
            return Err(Error::InvalidInput(
                "embedding must list every vertex id exactly once".into(),
            ));
        }
        if self.outer_face.iter().any(|&v| v >= n) {
            return Err(Error::InvalidInput("outer face names an unknown vertex".into()));
        }
        Ok(RotationSystem {
            rotation: self.rotation.values().cloned().collect(),
            outer_face: self.outer_face.clone(),
        })
    }
}

/// One self-contained problem instance: the graph, what to solve for,
/// and optionally an embedding and reduction bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    pub candidates: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingFile>,
    pub k: usize,
    pub k_mode: KMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<ReductionMeta>,
    pub objective: Objective,
    pub vertices: Vec<VertexFile>,
}

impl InstanceFile {
    pub fn from_parts(
        graph: &ElectionGraph,
        request: &SolveRequest,
        embedding: Option<&RotationSystem>,
        meta: Option<ReductionMeta>,
    ) -> Self {
        InstanceFile {
            bounds: request.bounds,
            candidates: graph.candidates(),
            edges: graph.edges(),
            embedding: embedding.map(EmbeddingFile::from_rotation_system),
            k: request.k,
            k_mode: request.k_mode,
            meta,
            objective: request.objective,
            vertices: (0..graph.vertex_count())
                .map(|v| VertexFile { color: graph.color(v), id: v, weight: graph.weight(v) })
                .collect(),
        }
    }

    /// Validates the document and rebuilds the in-memory pieces.
    pub fn to_parts(
        &self,
    ) -> Result<(ElectionGraph, SolveRequest, Option<RotationSystem>, Option<ReductionMeta>)> {
        if self.vertices.iter().enumerate().any(|(i, v)| v.id != i) {
            return Err(Error::InvalidInput(
                "vertex ids must be dense and sorted, 0..n".into(),
            ));
        }
        let colors = self.vertices.iter().map(|v| v.color).collect();
        let weights = self.vertices.iter().map(|v| v.weight).collect();
        let graph = ElectionGraph::new(self.candidates, colors, weights, &self.edges)?;
        let request = SolveRequest {
            k: self.k,
            k_mode: self.k_mode,
            objective: self.objective,
            bounds: self.bounds,
            candidate: 1,
        };
        request.validate(&graph)?;
        let embedding = self
            .embedding
            .as_ref()
            .map(|e| e.to_rotation_system(graph.vertex_count()))
            .transpose()?;
        Ok((graph, request, embedding, self.meta.clone()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Solver output paired with enough context to re-check it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub algorithm: String,
    pub districts: Vec<Vec<usize>>,
    pub parameters: serde_json::Value,
    pub runtime_ms: u64,
    pub verified: bool,
    pub w: usize,
    pub winning_districts: Vec<usize>,
}

impl SolutionFile {
    /// Recounts the win tally and runs the independent verifier; `w`,
    /// `winning_districts`, and `verified` come from that recount, not
    /// from the solver that produced the districting.
    pub fn build(
        graph: &ElectionGraph,
        request: &SolveRequest,
        districting: &Districting,
        algorithm: &str,
        parameters: serde_json::Value,
        runtime_ms: u64,
    ) -> Self {
        let report = verify_districting(graph, districting, request);
        let singleton = request.objective == Objective::SingletonWinning;
        let winning: Vec<usize> = districting
            .districts()
            .iter()
            .enumerate()
            .filter(|(_, d)| {
                (!singleton || d.len() == 1)
                    && wins(graph, d, request.candidate).unwrap_or(false)
            })
            .map(|(i, _)| i)
            .collect();
        SolutionFile {
            algorithm: algorithm.to_string(),
            districts: districting.districts().to_vec(),
            parameters,
            runtime_ms,
            verified: report.is_valid(),
            w: winning.len(),
            winning_districts: winning,
        }
    }

    pub fn districting(&self) -> Districting {
        Districting::new(self.districts.clone())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("solution serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Tree decomposition as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl DecompositionFile {
    pub fn from_decomposition(td: &TreeDecomposition) -> Self {
        DecompositionFile { bags: td.bags.clone(), edges: td.edges.clone() }
    }

    pub fn to_decomposition(&self) -> TreeDecomposition {
        TreeDecomposition { bags: self.bags.clone(), edges: self.edges.clone() }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("decomposition serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Plain-text importer. Accepts either a bare 0-based edge list (first
/// data line `n` or `n m`, then one `u v` pair per line, `#`-comments) or
/// the classic 1-based `p edge n m` / `e u v` format (`c`-comments).
/// Colors default to candidate 1, weights to 1, and the request to one
/// district; callers override via flags.
pub fn parse_edgelist(text: &str) -> Result<InstanceFile> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut tokens = t.split_whitespace();
        let head = tokens.next().expect("non-empty line has a token");
        let parse = |tok: &str| {
            tok.parse::<usize>().map_err(|_| {
                Error::InvalidInput(format!("line {}: expected a number, got {tok:?}", lineno + 1))
            })
        };
        match head {
            "c" => continue,
            "p" => {
                if tokens.next() != Some("edge") {
                    return Err(Error::InvalidInput(format!(
                        "line {}: expected 'p edge n m'",
                        lineno + 1
                    )));
                }
                let nv = parse(tokens.next().ok_or_else(|| {
                    Error::InvalidInput(format!("line {}: missing vertex count", lineno + 1))
                })?)?;
                n = Some(nv);
            }
            "e" => {
                let u = parse(tokens.next().ok_or_else(|| {
                    Error::InvalidInput(format!("line {}: missing endpoint", lineno + 1))
                })?)?;
                let v = parse(tokens.next().ok_or_else(|| {
                    Error::InvalidInput(format!("line {}: missing endpoint", lineno + 1))
                })?)?;
                if u == 0 || v == 0 {
                    return Err(Error::InvalidInput(format!(
                        "line {}: vertices are 1-based in this format",
                        lineno + 1
                    )));
                }
                edges.push((u - 1, v - 1));
            }
            _ => {
                let first = parse(head)?;
                match (n, tokens.next()) {
                    (None, _) => n = Some(first),
                    (Some(_), Some(second)) => edges.push((first, parse(second)?)),
                    (Some(_), None) => {
                        return Err(Error::InvalidInput(format!(
                            "line {}: expected an edge 'u v'",
                            lineno + 1
                        )))
                    }
                }
            }
        }
    }
    let n = n.ok_or_else(|| Error::InvalidInput("no vertex count found".into()))?;
    if n == 0 {
        return Err(Error::InvalidInput("graph needs a vertex".into()));
    }
    let graph = ElectionGraph::new(2, vec![1; n], vec![1; n], &edges)?;
    let request = SolveRequest {
        k: 1,
        k_mode: KMode::Exactly,
        objective: Objective::AllWinning,
        bounds: None,
        candidate: 1,
    };
    Ok(InstanceFile::from_parts(&graph, &request, None, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BoundKind;
    use crate::oracle::oracle_max_winning;
    use crate::planar::{gen_grid, GenOptions};
    use crate::reductions::{independent_set_to_gerry, reduction_request, SourceGraph};
    use crate::treewidth::{heuristic_decomposition, validate_decomposition};

    fn grid_request() -> SolveRequest {
        SolveRequest {
            k: 2,
            k_mode: KMode::Exactly,
            objective: Objective::AllWinning,
            bounds: None,
            candidate: 1,
        }
    }

    #[test]
    fn instance_round_trips_with_embedding() {
        let inst = gen_grid(2, 3, &GenOptions { candidates: 3, max_weight: 4 }, 9).unwrap();
        let file = InstanceFile::from_parts(&inst.graph, &grid_request(), Some(&inst.embedding), None);
        let text = file.to_json();
        let back = InstanceFile::from_json(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_json(), text);

        let (graph, request, embedding, meta) = back.to_parts().unwrap();
        assert_eq!(graph, inst.graph);
        assert_eq!(request, grid_request());
        assert_eq!(embedding.unwrap(), inst.embedding);
        assert!(meta.is_none());
    }

    #[test]
    fn instance_round_trips_with_bounds_and_meta() {
        let g = SourceGraph::new(2, &[(0, 1)]).unwrap();
        let (h, meta) = independent_set_to_gerry(&g).unwrap();
        let mut request = reduction_request(&meta);
        request.bounds = Some(Bounds { lower: 1, upper: 6, kind: BoundKind::VertexCount });
        let file = InstanceFile::from_parts(&h, &request, None, Some(meta.clone()));
        let back = InstanceFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let (graph, req2, _, meta2) = back.to_parts().unwrap();
        assert_eq!(graph, h);
        assert_eq!(req2.bounds, request.bounds);
        assert_eq!(meta2.unwrap(), meta);
    }

    #[test]
    fn instance_rejects_malformed_documents() {
        let inst = gen_grid(2, 2, &GenOptions::default(), 0).unwrap();
        let file = InstanceFile::from_parts(&inst.graph, &grid_request(), None, None);

        let mut shuffled = file.clone();
        shuffled.vertices.swap(0, 1);
        assert!(matches!(shuffled.to_parts(), Err(Error::InvalidInput(_))));

        let mut bad_color = file.clone();
        bad_color.vertices[0].color = 9;
        assert!(bad_color.to_parts().is_err());

        let mut bad_k = file.clone();
        bad_k.k = 0;
        assert!(bad_k.to_parts().is_err());

        let with_unknown = file.to_json().replacen('{', "{\n  \"extra\": 1,", 1);
        assert!(InstanceFile::from_json(&with_unknown).is_err());

        let mut bad_embedding = file;
        bad_embedding.embedding = Some(EmbeddingFile {
            outer_face: vec![0, 1],
            rotation: [(0usize, vec![1])].into_iter().collect(),
        });
        assert!(matches!(bad_embedding.to_parts(), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn solution_build_recounts_and_verifies() {
        let h = ElectionGraph::new(2, vec![1, 2, 1], vec![1; 3], &[(0, 1), (1, 2)]).unwrap();
        let request = grid_request();
        let answer = oracle_max_winning(&h, &request).unwrap();
        let districting = answer.witness.unwrap();
        let file = SolutionFile::build(
            &h,
            &request,
            &districting,
            "oracle",
            serde_json::json!({"k": 2}),
            7,
        );
        assert!(file.verified);
        assert_eq!(file.w, 1);
        assert_eq!(file.w, answer.w);
        assert_eq!(file.winning_districts.len(), 1);
        let back = SolutionFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.districting(), districting);

        // moving a vertex out of its district breaks verification
        let mut tampered = districting.districts().to_vec();
        let v = tampered[1].pop().unwrap();
        tampered[0].push(v);
        let file = SolutionFile::build(
            &h,
            &request,
            &Districting::new(tampered),
            "oracle",
            serde_json::Value::Null,
            0,
        );
        assert!(!file.verified);
    }

    #[test]
    fn decomposition_round_trips_and_validates() {
        let g = ElectionGraph::new(2, vec![1; 4], vec![1; 4], &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let td = heuristic_decomposition(&g);
        let file = DecompositionFile::from_decomposition(&td);
        let back = DecompositionFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let report = validate_decomposition(&g, &back.to_decomposition());
        assert!(report.violations.is_empty());
    }

    #[test]
    fn edgelist_imports_both_dialects() {
        let bare = parse_edgelist("# path\n3\n0 1\n1 2\n").unwrap();
        let (g, request, _, _) = bare.to_parts().unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));
        assert_eq!(request.k, 1);

        let dimacs = parse_edgelist("c path\np edge 3 2\ne 1 2\ne 2 3\n").unwrap();
        let (g2, _, _, _) = dimacs.to_parts().unwrap();
        assert_eq!(g2, g);

        assert!(parse_edgelist("").is_err());
        assert!(parse_edgelist("3\n0\n").is_err());
        assert!(parse_edgelist("p edge 3 2\ne 0 1\n").is_err());
    }
}
