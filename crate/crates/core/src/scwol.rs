//! Finite scwols (small categories without loops), their morphisms and
//! coverings, composable chains, barycentric subdivision, and connectivity /
//! simple-connectivity certificates.
//!
//! A scwol has string vertex and edge ids.  All enumerations are
//! canonicalized by lexicographic id order, so every construction here is
//! deterministic.  Values are immutable after construction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::ScwolError;
use crate::fp::{self, Presentation, Word};
use crate::report::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    /// initial vertex
    pub i: String,
    /// terminal vertex
    pub t: String,
}

/// A finite scwol: vertices, edges with initial/terminal maps, and an
/// associative composition defined exactly on composable pairs
/// (`i(a) = t(b)`), with no edge from a vertex to itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scwol {
    pub vertices: BTreeSet<String>,
    pub edges: BTreeMap<String, Edge>,
    /// (a, b) -> ab, keyed by composable pairs
    pub compositions: BTreeMap<(String, String), String>,
}

/// An edge with a traversal sign.  `a.plus()` runs from `t(a)` to `i(a)`,
/// `a.minus()` from `i(a)` to `t(a)`; inverting flips the sign.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrientedEdge {
    pub base: String,
    pub positive: bool,
}

impl OrientedEdge {
    pub fn plus(base: &str) -> Self {
        OrientedEdge {
            base: base.to_string(),
            positive: true,
        }
    }

    pub fn minus(base: &str) -> Self {
        OrientedEdge {
            base: base.to_string(),
            positive: false,
        }
    }

    pub fn inverse(&self) -> Self {
        OrientedEdge {
            base: self.base.clone(),
            positive: !self.positive,
        }
    }
}

/// A composable sequence of edges together with its initial vertex (the
/// vertex itself for the empty sequence).  Chains of length k index the
/// k-simplices of the geometric realization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chain {
    /// `i(a_k)` for a nonempty chain `(a_1, ..., a_k)`, or the bare vertex
    pub vertex: String,
    /// edge ids `a_1, ..., a_k`; consecutive edges compose as `i(a_j) = t(a_{j+1})`
    pub edges: Vec<String>,
}

impl Chain {
    /// Vertices met by the chain, from the terminal end down to `vertex`:
    /// `t(a_1), t(a_2), ..., t(a_k), i(a_k)`.
    pub fn vertex_set(&self, s: &Scwol) -> Vec<String> {
        let mut vs: Vec<String> = self.edges.iter().map(|e| s.edges[e].t.clone()).collect();
        vs.push(self.vertex.clone());
        vs
    }
}

/// An edge path: a sequence of oriented edges with matching endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePath {
    pub start: String,
    pub end: String,
    pub steps: Vec<OrientedEdge>,
}

impl EdgePath {
    /// Builds a path from oriented steps, checking that consecutive steps
    /// match up (`i(e_{j+1}) = t(e_j)`).
    pub fn new(s: &Scwol, start: String, steps: Vec<OrientedEdge>) -> Result<Self, ScwolError> {
        let mut here = start.clone();
        for e in &steps {
            if !s.edges.contains_key(&e.base) {
                return Err(ScwolError::UnknownEdge(e.base.clone()));
            }
            let (i, t) = s.oriented_endpoints(e);
            if i != here {
                return Err(ScwolError::UnknownVertex(i));
            }
            here = t;
        }
        Ok(EdgePath {
            start,
            end: here,
            steps,
        })
    }
}

impl Scwol {
    pub fn new(
        vertices: impl IntoIterator<Item = String>,
        edges: impl IntoIterator<Item = (String, String, String)>,
        compositions: impl IntoIterator<Item = (String, String, String)>,
    ) -> Result<Self, ScwolError> {
        let vset: BTreeSet<String> = vertices.into_iter().collect();
        let mut emap = BTreeMap::new();
        for (id, i, t) in edges {
            if vset.contains(&id) || emap.contains_key(&id) {
                return Err(ScwolError::DuplicateId(id));
            }
            if !vset.contains(&i) {
                return Err(ScwolError::UnknownVertex(i));
            }
            if !vset.contains(&t) {
                return Err(ScwolError::UnknownVertex(t));
            }
            emap.insert(id.clone(), Edge { id, i, t });
        }
        let mut comp = BTreeMap::new();
        for (a, b, ab) in compositions {
            for e in [&a, &b, &ab] {
                if !emap.contains_key(e) {
                    return Err(ScwolError::UnknownEdge(e.clone()));
                }
            }
            comp.insert((a, b), ab);
        }
        Ok(Scwol {
            vertices: vset,
            edges: emap,
            compositions: comp,
        })
    }

    pub fn vertex_ids(&self) -> Vec<String> {
        self.vertices.iter().cloned().collect()
    }

    pub fn edge_ids(&self) -> Vec<String> {
        self.edges.keys().cloned().collect()
    }

    pub fn initial(&self, edge: &str) -> &str {
        &self.edges[edge].i
    }

    pub fn terminal(&self, edge: &str) -> &str {
        &self.edges[edge].t
    }

    pub fn compose(&self, a: &str, b: &str) -> Option<&String> {
        self.compositions.get(&(a.to_string(), b.to_string()))
    }

    /// Endpoints of an oriented edge: `(i(e), t(e))`.
    pub fn oriented_endpoints(&self, e: &OrientedEdge) -> (String, String) {
        let edge = &self.edges[&e.base];
        if e.positive {
            (edge.t.clone(), edge.i.clone())
        } else {
            (edge.i.clone(), edge.t.clone())
        }
    }

    /// Checks every scwol invariant, reporting each violation.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for e in self.edges.values() {
            if e.i == e.t {
                report.fail(format!("loop at {}: edge {}", e.i, e.id));
            }
        }
        for ((a, b), ab) in &self.compositions {
            let ea = &self.edges[a];
            let eb = &self.edges[b];
            let eab = &self.edges[ab];
            if ea.i != eb.t {
                report.fail(format!(
                    "pair ({a}, {b}) is not composable but has a composite"
                ));
            }
            if eab.i != eb.i || eab.t != ea.t {
                report.fail(format!(
                    "composition endpoints wrong for ({a}, {b}): got {ab} with i={}, t={}",
                    eab.i, eab.t
                ));
            }
        }
        for a in self.edges.values() {
            for b in self.edges.values() {
                if a.i == b.t
                    && !self
                        .compositions
                        .contains_key(&(a.id.clone(), b.id.clone()))
                {
                    report.fail(format!(
                        "composable pair ({}, {}) missing from the composition table",
                        a.id, b.id
                    ));
                }
            }
        }
        // associativity over all triples where both sides are defined
        for ((a, b), ab) in &self.compositions {
            for c in self.edges.values() {
                if self.edges[b].i == c.t {
                    let bc = match self.compose(b, &c.id) {
                        Some(x) => x.clone(),
                        None => continue,
                    };
                    let left = self.compose(ab, &c.id);
                    let right = self.compose(a, &bc);
                    if left != right {
                        report.fail(format!(
                            "associativity fails on triple ({a}, {b}, {})",
                            c.id
                        ));
                    }
                }
            }
        }
        report
    }

    /// The composable chains of length `k`, ordered lexicographically by
    /// their edge-id sequences.  `k = 0` gives one chain per vertex.
    pub fn chains(&self, k: usize) -> Vec<Chain> {
        if k == 0 {
            return self
                .vertices
                .iter()
                .map(|v| Chain {
                    vertex: v.clone(),
                    edges: Vec::new(),
                })
                .collect();
        }
        // extend sequences at the initial end: append b with t(b) = i(last)
        let mut chains: Vec<Chain> = self
            .edges
            .values()
            .map(|e| Chain {
                vertex: e.i.clone(),
                edges: vec![e.id.clone()],
            })
            .collect();
        for _ in 1..k {
            let mut next = Vec::new();
            for c in &chains {
                for b in self.edges.values() {
                    if b.t == c.vertex {
                        let mut edges = c.edges.clone();
                        edges.push(b.id.clone());
                        next.push(Chain {
                            vertex: b.i.clone(),
                            edges,
                        });
                    }
                }
            }
            chains = next;
        }
        chains.sort_by(|x, y| x.edges.cmp(&y.edges));
        chains
    }

    /// Composite of a nonempty chain into a single edge.
    pub fn chain_composite(&self, chain: &[String]) -> Option<String> {
        let mut acc = chain[0].clone();
        for b in &chain[1..] {
            acc = self.compose(&acc, b)?.clone();
        }
        Some(acc)
    }

    /// Undirected connectivity over oriented edges.  Components are listed
    /// canonically, each sorted, ordered by least vertex.
    pub fn connectivity(&self) -> Connectivity {
        let mut component: BTreeMap<String, usize> = BTreeMap::new();
        let mut comps: Vec<Vec<String>> = Vec::new();
        for v in &self.vertices {
            if component.contains_key(v) {
                continue;
            }
            let idx = comps.len();
            let mut queue = VecDeque::new();
            let mut members = Vec::new();
            component.insert(v.clone(), idx);
            queue.push_back(v.clone());
            while let Some(u) = queue.pop_front() {
                members.push(u.clone());
                for e in self.edges.values() {
                    let w = if e.i == u {
                        &e.t
                    } else if e.t == u {
                        &e.i
                    } else {
                        continue;
                    };
                    if !component.contains_key(w) {
                        component.insert(w.clone(), idx);
                        queue.push_back(w.clone());
                    }
                }
            }
            members.sort();
            comps.push(members);
        }
        Connectivity {
            connected: comps.len() <= 1,
            components: comps,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.connectivity().connected
    }

    /// DOT export of the 1-skeleton of the realization (vertices and edges).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph scwol {\n");
        for v in &self.vertices {
            out.push_str(&format!("  {:?};\n", v));
        }
        for e in self.edges.values() {
            out.push_str(&format!("  {:?} -> {:?} [label={:?}];\n", e.i, e.t, e.id));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = self
            .edges
            .values()
            .map(|e| serde_json::json!({"id": e.id, "i": e.i, "t": e.t}))
            .collect();
        let comps: Vec<serde_json::Value> = self
            .compositions
            .iter()
            .map(|((a, b), ab)| serde_json::json!({"a": a, "b": b, "ab": ab}))
            .collect();
        serde_json::json!({
            "vertices": self.vertex_ids(),
            "edges": edges,
            "compositions": comps,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ScwolError> {
        let vertices: Vec<String> = v["vertices"]
            .as_array()
            .map(|a| {
                a.iter()
                    .filter_map(|x| x.as_str().map(str::to_string))
                    .collect()
            })
            .unwrap_or_default();
        let edges: Vec<(String, String, String)> = v["edges"]
            .as_array()
            .map(|a| {
                a.iter()
                    .filter_map(|e| {
                        Some((
                            e["id"].as_str()?.to_string(),
                            e["i"].as_str()?.to_string(),
                            e["t"].as_str()?.to_string(),
                        ))
                    })
                    .collect()
            })
            .unwrap_or_default();
        let comps: Vec<(String, String, String)> = v["compositions"]
            .as_array()
            .map(|a| {
                a.iter()
                    .filter_map(|e| {
                        Some((
                            e["a"].as_str()?.to_string(),
                            e["b"].as_str()?.to_string(),
                            e["ab"].as_str()?.to_string(),
                        ))
                    })
                    .collect()
            })
            .unwrap_or_default();
        Scwol::new(vertices, edges, comps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectivity {
    pub connected: bool,
    pub components: Vec<Vec<String>>,
}

// ---------------------------------------------------------------------------
// Cell complexes and the scwols they generate
// ---------------------------------------------------------------------------

/// An abstract finite cell complex given as a poset of cells: each cell lists
/// its codimension-1 faces, and the face partial order is the transitive
/// closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellComplexDescription {
    /// cell id -> codimension-1 face ids
    pub cells: BTreeMap<String, Vec<String>>,
}

impl CellComplexDescription {
    pub fn new(cells: impl IntoIterator<Item = (String, Vec<String>)>) -> Self {
        CellComplexDescription {
            cells: cells.into_iter().collect(),
        }
    }

    /// Strict face pairs `(T, S)` with `T` a proper face of `S`, by
    /// transitive closure.  Rejects non-antisymmetric relations.
    pub fn strict_pairs(&self) -> Result<BTreeSet<(String, String)>, ScwolError> {
        for (cell, faces) in &self.cells {
            for f in faces {
                if !self.cells.contains_key(f) {
                    return Err(ScwolError::UnknownVertex(f.clone()));
                }
                if f == cell {
                    return Err(ScwolError::NotAntisymmetric(cell.clone()));
                }
            }
        }
        let mut pairs: BTreeSet<(String, String)> = BTreeSet::new();
        for s in self.cells.keys() {
            // closure below s
            let mut stack: Vec<&String> = self.cells[s].iter().collect();
            let mut below: BTreeSet<String> = BTreeSet::new();
            while let Some(t) = stack.pop() {
                if below.insert(t.clone()) {
                    stack.extend(self.cells[t].iter());
                }
            }
            if below.contains(s) {
                return Err(ScwolError::NotAntisymmetric(s.clone()));
            }
            for t in below {
                pairs.insert((t, s.clone()));
            }
        }
        Ok(pairs)
    }
}

/// Deterministic edge id for the face pair `T` inside `S`.
pub fn face_edge_id(t: &str, s: &str) -> String {
    format!("{t}<{s}")
}

/// The scwol of a cell complex: one vertex per cell, one edge per strict face
/// pair `T < S` with `i = S` and `t = T`, and composition
/// `(T < S) . (S < U) = (T < U)`.
pub fn scwol_from_complex(c: &CellComplexDescription) -> Result<Scwol, ScwolError> {
    let pairs = c.strict_pairs()?;
    let vertices: Vec<String> = c.cells.keys().cloned().collect();
    let edges: Vec<(String, String, String)> = pairs
        .iter()
        .map(|(t, s)| (face_edge_id(t, s), s.clone(), t.clone()))
        .collect();
    let mut comps = Vec::new();
    for (t, s) in &pairs {
        for (s2, u) in &pairs {
            if s2 == s {
                comps.push((face_edge_id(t, s), face_edge_id(s, u), face_edge_id(t, u)));
            }
        }
    }
    Scwol::new(vertices, edges, comps)
}

/// The scwol of the simplicial complex whose k-simplices are the composable
/// chains of length k.  Standard remedy so that any automorphism group acts
/// without inversions.
pub fn barycentric_subdivision(s: &Scwol) -> Scwol {
    // cells = chains; codim-1 faces = single vertex deletions
    let mut all: Vec<Chain> = Vec::new();
    let mut k = 0;
    loop {
        let level = s.chains(k);
        if level.is_empty() {
            break;
        }
        all.extend(level);
        k += 1;
    }
    let mut cells: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for c in &all {
        cells.insert(
            chain_id(c),
            chain_facets(s, c).iter().map(chain_id).collect(),
        );
    }
    scwol_from_complex(&CellComplexDescription { cells })
        .expect("chain poset of a scwol is a valid cell complex")
}

/// Deterministic cell id for a chain in the subdivision.  The full chain
/// data goes into the id: parallel edges give distinct chains with equal
/// vertex sets, and those must stay distinct cells.
pub fn chain_id(c: &Chain) -> String {
    format!("[{}:{}]", c.vertex, c.edges.join(","))
}

/// Codimension-1 faces of a chain's simplex: delete one vertex.  Deleting an
/// inner vertex merges the two adjacent edges; deleting an end vertex drops
/// the outermost edge.
pub fn chain_facets(s: &Scwol, c: &Chain) -> Vec<Chain> {
    let k = c.edges.len();
    if k == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // delete t(a_1): drop a_1
    out.push(Chain {
        vertex: c.vertex.clone(),
        edges: c.edges[1..].to_vec(),
    });
    // delete inner vertex t(a_{j+1}) = i(a_j): merge a_j a_{j+1}
    for j in 0..k.saturating_sub(1) {
        let merged = s
            .compose(&c.edges[j], &c.edges[j + 1])
            .expect("consecutive chain edges compose")
            .clone();
        let mut edges = c.edges[..j].to_vec();
        edges.push(merged);
        edges.extend_from_slice(&c.edges[j + 2..]);
        out.push(Chain {
            vertex: c.vertex.clone(),
            edges,
        });
    }
    // delete i(a_k): drop a_k
    let edges = c.edges[..k - 1].to_vec();
    let vertex = if let Some(last) = edges.last() {
        s.edges[last].i.clone()
    } else {
        s.edges[&c.edges[0]].t.clone()
    };
    out.push(Chain { vertex, edges });
    out
}

// ---------------------------------------------------------------------------
// Morphisms of scwols
// ---------------------------------------------------------------------------

/// A morphism of scwols: vertex and edge maps compatible with initial and
/// terminal vertices and with composition.  The `nondegenerate` and
/// `covering` flags are computed, never asserted by the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScwolMorphism {
    pub source: Scwol,
    pub target: Scwol,
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
}

/// Computed structural flags for a scwol morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFlags {
    pub valid: bool,
    pub nondegenerate: bool,
    pub covering: bool,
    pub failures: Vec<String>,
}

impl ScwolMorphism {
    pub fn new(
        source: Scwol,
        target: Scwol,
        vertex_map: BTreeMap<String, String>,
        edge_map: BTreeMap<String, String>,
    ) -> Result<Self, ScwolError> {
        for v in &source.vertices {
            match vertex_map.get(v) {
                None => return Err(ScwolError::MissingImage(v.clone())),
                Some(w) if !target.vertices.contains(w) => {
                    return Err(ScwolError::UnknownVertex(w.clone()))
                }
                _ => {}
            }
        }
        for a in source.edges.keys() {
            match edge_map.get(a) {
                None => {
                    if target.edges.is_empty() {
                        return Err(ScwolError::EdgeCannotMap { edge: a.clone() });
                    }
                    return Err(ScwolError::MissingImage(a.clone()));
                }
                Some(b) if !target.edges.contains_key(b) => {
                    return Err(ScwolError::UnknownEdge(b.clone()))
                }
                _ => {}
            }
        }
        Ok(ScwolMorphism {
            source,
            target,
            vertex_map,
            edge_map,
        })
    }

    pub fn identity(s: &Scwol) -> Self {
        ScwolMorphism {
            source: s.clone(),
            target: s.clone(),
            vertex_map: s.vertices.iter().map(|v| (v.clone(), v.clone())).collect(),
            edge_map: s.edges.keys().map(|e| (e.clone(), e.clone())).collect(),
        }
    }

    pub fn vertex_image(&self, v: &str) -> &str {
        &self.vertex_map[v]
    }

    pub fn edge_image(&self, a: &str) -> &str {
        &self.edge_map[a]
    }

    /// Image of an oriented edge (same sign on the image edge).
    pub fn oriented_image(&self, e: &OrientedEdge) -> OrientedEdge {
        OrientedEdge {
            base: self.edge_map[&e.base].clone(),
            positive: e.positive,
        }
    }

    /// i/t compatibility and `l(ab) = l(a) l(b)`.
    pub fn respects_structure(&self) -> Vec<String> {
        let mut failures = Vec::new();
        for e in self.source.edges.values() {
            let img = &self.target.edges[&self.edge_map[&e.id]];
            if img.i != self.vertex_map[&e.i] || img.t != self.vertex_map[&e.t] {
                failures.push(format!("edge {} has incompatible endpoints", e.id));
            }
        }
        for ((a, b), ab) in &self.source.compositions {
            let la = &self.edge_map[a];
            let lb = &self.edge_map[b];
            match self.target.compose(la, lb) {
                Some(lab) if lab == &self.edge_map[ab] => {}
                _ => failures.push(format!("l({a})l({b}) != l({a}{b})")),
            }
        }
        failures
    }

    /// Validity, nondegeneracy (initial-vertex bijections on stars) and the
    /// covering property (additionally terminal-vertex bijections and a
    /// connected target).
    pub fn check(&self) -> MorphismFlags {
        let failures = self.respects_structure();
        let valid = failures.is_empty();
        let mut nondegenerate = valid;
        let mut covering = valid && self.target.is_connected();
        if valid {
            for v in &self.source.vertices {
                let lv = &self.vertex_map[v];
                if !self.restriction_bijective(v, lv, true) {
                    nondegenerate = false;
                    covering = false;
                }
                if !self.restriction_bijective(v, lv, false) {
                    covering = false;
                }
            }
        } else {
            nondegenerate = false;
            covering = false;
        }
        MorphismFlags {
            valid,
            nondegenerate,
            covering,
            failures,
        }
    }

    /// Does the edge map restrict to a bijection between the edges at `v`
    /// and the edges at `lv` (initial side when `initial`, else terminal)?
    fn restriction_bijective(&self, v: &str, lv: &str, initial: bool) -> bool {
        let src: Vec<&String> = self
            .source
            .edges
            .values()
            .filter(|e| if initial { e.i == v } else { e.t == v })
            .map(|e| &e.id)
            .collect();
        let tgt: BTreeSet<&String> = self
            .target
            .edges
            .values()
            .filter(|e| if initial { e.i == lv } else { e.t == lv })
            .map(|e| &e.id)
            .collect();
        let images: BTreeSet<&String> = src.iter().map(|a| &self.edge_map[*a]).collect();
        images.len() == src.len() && images == tgt
    }

    /// Composition `self . inner` (apply `inner` first).
    pub fn compose(&self, inner: &ScwolMorphism) -> ScwolMorphism {
        ScwolMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            vertex_map: inner
                .vertex_map
                .iter()
                .map(|(v, w)| (v.clone(), self.vertex_map[w].clone()))
                .collect(),
            edge_map: inner
                .edge_map
                .iter()
                .map(|(a, b)| (a.clone(), self.edge_map[b].clone()))
                .collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        let vimg: BTreeSet<&String> = self.vertex_map.values().collect();
        let eimg: BTreeSet<&String> = self.edge_map.values().collect();
        vimg.len() == self.source.vertices.len()
            && vimg.len() == self.target.vertices.len()
            && eimg.len() == self.source.edges.len()
            && eimg.len() == self.target.edges.len()
    }

    /// Inverse of a bijective morphism.
    pub fn inverse(&self) -> Option<ScwolMorphism> {
        if !self.is_bijective() {
            return None;
        }
        Some(ScwolMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            vertex_map: self
                .vertex_map
                .iter()
                .map(|(v, w)| (w.clone(), v.clone()))
                .collect(),
            edge_map: self
                .edge_map
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        })
    }
}

// ---------------------------------------------------------------------------
// Isomorphism and automorphism search
// ---------------------------------------------------------------------------

/// All isomorphisms from `s1` to `s2`, by backtracking on color-refined
/// vertex classes; edge bundles between fixed endpoint pairs are matched in
/// all possible ways and composition tables checked at the end.
pub fn isomorphisms(s1: &Scwol, s2: &Scwol) -> Vec<ScwolMorphism> {
    let mut out = Vec::new();
    if s1.vertices.len() != s2.vertices.len() || s1.edges.len() != s2.edges.len() {
        return out;
    }
    let c1 = refine_colors(s1);
    let c2 = refine_colors(s2);
    {
        let mut h1: Vec<u64> = c1.values().cloned().collect();
        let mut h2: Vec<u64> = c2.values().cloned().collect();
        h1.sort();
        h2.sort();
        if h1 != h2 {
            return out;
        }
    }
    let v1: Vec<String> = s1.vertex_ids();
    let mut assignment: BTreeMap<String, String> = BTreeMap::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    backtrack_vertices(
        s1,
        s2,
        &c1,
        &c2,
        &v1,
        0,
        &mut assignment,
        &mut used,
        &mut out,
    );
    out
}

pub fn find_isomorphism(s1: &Scwol, s2: &Scwol) -> Option<ScwolMorphism> {
    isomorphisms(s1, s2).into_iter().next()
}

/// All automorphisms of a scwol.
pub fn automorphisms(s: &Scwol) -> Vec<ScwolMorphism> {
    isomorphisms(s, s)
}

/// Iterated neighborhood color refinement on the directed multigraph.
fn refine_colors(s: &Scwol) -> BTreeMap<String, u64> {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};
    let mut colors: BTreeMap<String, u64> = s.vertices.iter().map(|v| (v.clone(), 0)).collect();
    for _ in 0..s.vertices.len().min(8) {
        let mut next = BTreeMap::new();
        for v in &s.vertices {
            let mut outs: Vec<u64> = s
                .edges
                .values()
                .filter(|e| e.i == *v)
                .map(|e| colors[&e.t])
                .collect();
            let mut ins: Vec<u64> = s
                .edges
                .values()
                .filter(|e| e.t == *v)
                .map(|e| colors[&e.i])
                .collect();
            outs.sort();
            ins.sort();
            let mut h = DefaultHasher::new();
            (colors[v], &outs, &ins).hash(&mut h);
            next.insert(v.clone(), h.finish());
        }
        if next == colors {
            break;
        }
        colors = next;
    }
    colors
}

#[allow(clippy::too_many_arguments)]
fn backtrack_vertices(
    s1: &Scwol,
    s2: &Scwol,
    c1: &BTreeMap<String, u64>,
    c2: &BTreeMap<String, u64>,
    order: &[String],
    idx: usize,
    assignment: &mut BTreeMap<String, String>,
    used: &mut BTreeSet<String>,
    out: &mut Vec<ScwolMorphism>,
) {
    if idx == order.len() {
        extend_edge_maps(s1, s2, assignment, out);
        return;
    }
    let v = &order[idx];
    for w in s2.vertices.iter() {
        if used.contains(w) || c1[v] != c2[w] {
            continue;
        }
        // partial consistency: edge bundle sizes between assigned vertices
        let ok = assignment.iter().all(|(x, y)| {
            bundle_size(s1, x, v) == bundle_size(s2, y, w)
                && bundle_size(s1, v, x) == bundle_size(s2, w, y)
        });
        if !ok {
            continue;
        }
        assignment.insert(v.clone(), w.clone());
        used.insert(w.clone());
        backtrack_vertices(s1, s2, c1, c2, order, idx + 1, assignment, used, out);
        assignment.remove(v);
        used.remove(w);
    }
}

fn bundle_size(s: &Scwol, from_i: &str, to_t: &str) -> usize {
    s.edges
        .values()
        .filter(|e| e.i == from_i && e.t == to_t)
        .count()
}

fn extend_edge_maps(
    s1: &Scwol,
    s2: &Scwol,
    vmap: &BTreeMap<String, String>,
    out: &mut Vec<ScwolMorphism>,
) {
    // group edges by endpoint pair
    let mut bundles: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for e in s1.edges.values() {
        bundles
            .entry((e.i.clone(), e.t.clone()))
            .or_default()
            .push(e.id.clone());
    }
    let mut target_bundles: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for e in s2.edges.values() {
        target_bundles
            .entry((e.i.clone(), e.t.clone()))
            .or_default()
            .push(e.id.clone());
    }
    let keys: Vec<(String, String)> = bundles.keys().cloned().collect();
    let mut matchings: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for key in &keys {
        let src = &bundles[key];
        let tgt_key = (vmap[&key.0].clone(), vmap[&key.1].clone());
        let tgt = match target_bundles.get(&tgt_key) {
            Some(t) if t.len() == src.len() => t,
            _ => return,
        };
        let mut next = Vec::new();
        for m in &matchings {
            for perm in permutations(tgt.len()) {
                let mut m2 = m.clone();
                for (k, a) in src.iter().enumerate() {
                    m2.insert(a.clone(), tgt[perm[k]].clone());
                }
                next.push(m2);
            }
        }
        matchings = next;
        // parallel bundles are tiny in practice; guard anyway
        if matchings.len() > 100_000 {
            matchings.truncate(100_000);
        }
    }
    for emap in matchings {
        let m = ScwolMorphism {
            source: s1.clone(),
            target: s2.clone(),
            vertex_map: vmap.clone(),
            edge_map: emap,
        };
        if m.respects_structure().is_empty() {
            out.push(m);
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..n {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Simple connectivity
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimpleConnectivity {
    Yes,
    No,
    Unknown,
}

/// Decides simple connectivity of the realization where possible: builds the
/// edge-path group of the 2-skeleton (generators = edges outside a spanning
/// tree, relators = `a b (ab)^-1` over composable pairs), answers `No` when
/// the abelianization is nontrivial, `Yes` when coset enumeration over the
/// trivial subgroup collapses to a single coset within budget, and `Unknown`
/// otherwise.  Triviality of a finitely presented group is undecidable, hence
/// the three-valued answer.
pub fn simple_connectivity(s: &Scwol, budget: usize) -> Result<SimpleConnectivity, ScwolError> {
    if budget == 0 {
        return Err(ScwolError::BadBudget);
    }
    if !s.is_connected() {
        return Err(ScwolError::NotConnected);
    }
    let p = edge_path_presentation(s);
    let ab = fp::abelianization(&p);
    if !ab.is_trivial() {
        return Ok(SimpleConnectivity::No);
    }
    match fp::todd_coxeter(&p, &[], budget) {
        Ok(table) => {
            if table.coset_count() == 1 {
                Ok(SimpleConnectivity::Yes)
            } else {
                Ok(SimpleConnectivity::No)
            }
        }
        Err(_) => Ok(SimpleConnectivity::Unknown),
    }
}

/// Presentation of the edge-path group of the 2-skeleton of the realization.
pub fn edge_path_presentation(s: &Scwol) -> Presentation {
    let edge_ids = s.edge_ids();
    let index: BTreeMap<&String, usize> =
        edge_ids.iter().enumerate().map(|(k, e)| (e, k)).collect();
    let labels = edge_ids
        .iter()
        .map(|e| fp::GenLabel::Named(e.clone()))
        .collect();
    let tree = spanning_tree(s);
    let mut relators: Vec<Word> = Vec::new();
    for a in &tree {
        relators.push(vec![index[a] as i64 + 1]);
    }
    for ((a, b), ab) in &s.compositions {
        // triangle boundary: traverse b, then a, then ab reversed
        relators.push(vec![
            index[b] as i64 + 1,
            index[a] as i64 + 1,
            -(index[ab] as i64 + 1),
        ]);
    }
    Presentation::new(labels, relators)
}

/// A deterministic spanning tree of the undirected 1-skeleton: BFS from the
/// least vertex, edges considered in id order.
pub fn spanning_tree(s: &Scwol) -> Vec<String> {
    let mut tree = Vec::new();
    let mut seen: BTreeSet<&String> = BTreeSet::new();
    let Some(root) = s.vertices.iter().next() else {
        return tree;
    };
    seen.insert(root);
    let mut frontier = VecDeque::new();
    frontier.push_back(root);
    while let Some(v) = frontier.pop_front() {
        for e in s.edges.values() {
            let other = if &e.i == v && !seen.contains(&e.t) {
                &e.t
            } else if &e.t == v && !seen.contains(&e.i) {
                &e.i
            } else {
                continue;
            };
            seen.insert(other);
            tree.push(e.id.clone());
            frontier.push_back(other);
        }
    }
    tree
}

/// All maximal trees of the undirected 1-skeleton (edge id sets, sorted).
/// Exhaustive; intended for fixtures with few edges.
pub fn all_spanning_trees(s: &Scwol) -> Vec<Vec<String>> {
    let need = s.vertices.len().saturating_sub(1);
    let edge_ids = s.edge_ids();
    let mut out = Vec::new();
    let mut current: Vec<String> = Vec::new();
    enumerate_trees(s, &edge_ids, 0, need, &mut current, &mut out);
    out
}

fn enumerate_trees(
    s: &Scwol,
    edge_ids: &[String],
    start: usize,
    need: usize,
    current: &mut Vec<String>,
    out: &mut Vec<Vec<String>>,
) {
    if current.len() == need {
        if is_spanning_tree(s, current) {
            out.push(current.clone());
        }
        return;
    }
    if edge_ids.len() - start < need - current.len() {
        return;
    }
    for k in start..edge_ids.len() {
        current.push(edge_ids[k].clone());
        if acyclic_undirected(s, current) {
            enumerate_trees(s, edge_ids, k + 1, need, current, out);
        }
        current.pop();
    }
}

fn acyclic_undirected(s: &Scwol, edges: &[String]) -> bool {
    // union-find over vertices
    let vs: Vec<&String> = s.vertices.iter().collect();
    let idx: BTreeMap<&String, usize> = vs.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    let mut parent: Vec<usize> = (0..vs.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in edges {
        let e = &s.edges[a];
        let (x, y) = (find(&mut parent, idx[&e.i]), find(&mut parent, idx[&e.t]));
        if x == y {
            return false;
        }
        parent[x] = y;
    }
    true
}

/// Is the edge id set a maximal tree (spanning and acyclic) in the
/// 1-skeleton?
pub fn is_spanning_tree(s: &Scwol, edges: &[String]) -> bool {
    if edges.len() != s.vertices.len().saturating_sub(1) {
        return false;
    }
    for a in edges {
        if !s.edges.contains_key(a) {
            return false;
        }
    }
    if !acyclic_undirected(s, edges) {
        return false;
    }
    // spanning: connectivity over tree edges
    let mut seen: BTreeSet<&String> = BTreeSet::new();
    if let Some(root) = s.vertices.iter().next() {
        let mut queue = VecDeque::new();
        seen.insert(root);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for a in edges {
                let e = &s.edges[a];
                let other = if &e.i == v && !seen.contains(&e.t) {
                    &e.t
                } else if &e.t == v && !seen.contains(&e.i) {
                    &e.i
                } else {
                    continue;
                };
                seen.insert(other);
                queue.push_back(other);
            }
        }
    }
    seen.len() == s.vertices.len()
}

/// The unique non-backtracking path inside a tree from `from` to `to`, as
/// oriented edges.
pub fn tree_path(s: &Scwol, tree: &[String], from: &str, to: &str) -> Vec<OrientedEdge> {
    // BFS over the tree's undirected edges recording parents
    let mut parent: BTreeMap<String, OrientedEdge> = BTreeMap::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(from.to_string());
    queue.push_back(from.to_string());
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for a in tree {
            let e = &s.edges[a];
            // a- travels i -> t, a+ travels t -> i
            for (next, oe) in [
                (e.t.clone(), OrientedEdge::minus(a)),
                (e.i.clone(), OrientedEdge::plus(a)),
            ] {
                let here = if oe.positive { &e.t } else { &e.i };
                if *here == v && !seen.contains(&next) {
                    seen.insert(next.clone());
                    parent.insert(next.clone(), oe);
                    queue.push_back(next);
                }
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to.to_string();
    while v != from {
        let oe = parent.get(&v).expect("tree spans all vertices").clone();
        let (src, _) = s.oriented_endpoints(&oe);
        path.push(oe);
        v = src;
    }
    path.reverse();
    path
}
