//! Quivers, paths, monomial admissible ideals, and the finite-dimensional
//! path-basis algebras they present.
//!
//! Composition convention: a path stores its arrows in application order, so
//! `[a, b]` means "apply `a`, then `b`" and requires `t(a) = s(b)`. Under this
//! convention the indecomposable projective at a vertex `v` has as basis the
//! nonzero paths starting at `v`.

use crate::field::FieldSpec;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum QuiverError {
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow label `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{label}` references unknown vertex `{vertex}`")]
    UnknownVertex { label: String, vertex: String },
    #[error("ideal generator `{0}` has length {1}, admissibility needs length >= 2")]
    ShortGenerator(String, usize),
    #[error("arrows do not compose at position {0}")]
    NotComposable(usize),
    #[error("not admissible: cycle `{witness}` extends to nonzero paths of every length")]
    NotAdmissible { witness: String },
    #[error("relation (start {start}, length {len}) does not fit in the quiver")]
    BadRelationPlacement { start: usize, len: usize },
    #[error("unknown vertex `{0}`")]
    NoSuchVertex(String),
    #[error("unknown arrow `{0}`")]
    NoSuchArrow(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver: ordered vertex labels and ordered labeled arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Self, QuiverError> {
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let index: HashMap<&String, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut arrow_labels = HashSet::new();
        let mut built = Vec::new();
        for (label, src, tgt) in arrows {
            if !arrow_labels.insert(label.clone()) {
                return Err(QuiverError::DuplicateArrow(label));
            }
            let source = *index.get(&src).ok_or_else(|| QuiverError::UnknownVertex {
                label: label.clone(),
                vertex: src.clone(),
            })?;
            let target = *index.get(&tgt).ok_or_else(|| QuiverError::UnknownVertex {
                label: label.clone(),
                vertex: tgt.clone(),
            })?;
            built.push(Arrow { label, source, target });
        }
        Ok(Quiver {
            vertices,
            arrows: built,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.source == v)
            .map(|(i, _)| i)
    }

    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.target == v)
            .map(|(i, _)| i)
    }

    /// Connected as an undirected graph (vacuously true when empty).
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for a in &self.arrows {
                for (x, y) in [(a.source, a.target), (a.target, a.source)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// A composable sequence of arrows, or a stationary path `e_v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    start: usize,
    end: usize,
    arrows: Vec<usize>,
}

impl Path {
    pub fn stationary(v: usize) -> Self {
        Path {
            start: v,
            end: v,
            arrows: Vec::new(),
        }
    }

    pub fn from_arrows(quiver: &Quiver, arrows: Vec<usize>) -> Result<Self, QuiverError> {
        assert!(!arrows.is_empty(), "use Path::stationary for length 0");
        for (i, pair) in arrows.windows(2).enumerate() {
            if quiver.arrow(pair[0]).target != quiver.arrow(pair[1]).source {
                return Err(QuiverError::NotComposable(i + 1));
            }
        }
        Ok(Path {
            start: quiver.arrow(arrows[0]).source,
            end: quiver.arrow(*arrows.last().unwrap()).target,
            arrows,
        })
    }

    pub fn from_labels(quiver: &Quiver, labels: &[&str]) -> Result<Self, QuiverError> {
        let arrows = labels
            .iter()
            .map(|l| {
                quiver
                    .arrow_index(l)
                    .ok_or_else(|| QuiverError::NoSuchArrow(l.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Path::from_arrows(quiver, arrows)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    /// `self` then `other`; `None` when endpoints do not match.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.end != other.start {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            start: self.start,
            end: other.end,
            arrows,
        })
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", quiver.vertex_label(self.start))
        } else {
            self.arrows
                .iter()
                .map(|&a| quiver.arrow(a).label.clone())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

/// An ideal generated by paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MonomialIdeal {
    generators: Vec<Path>,
}

impl MonomialIdeal {
    pub fn new(quiver: &Quiver, generators: Vec<Path>) -> Result<Self, QuiverError> {
        for g in &generators {
            if g.len() < 2 {
                return Err(QuiverError::ShortGenerator(g.display(quiver), g.len()));
            }
        }
        Ok(MonomialIdeal { generators })
    }

    pub fn empty() -> Self {
        MonomialIdeal::default()
    }

    pub fn generators(&self) -> &[Path] {
        &self.generators
    }

    pub fn max_generator_len(&self) -> usize {
        self.generators.iter().map(Path::len).max().unwrap_or(0)
    }

    /// True when some generator occurs as a contiguous subpath.
    pub fn kills(&self, arrows: &[usize]) -> bool {
        self.generators.iter().any(|g| {
            arrows
                .windows(g.len())
                .any(|w| !g.arrows().is_empty() && w == g.arrows())
        })
    }

    /// True when appending `next` to a generator-free path creates a
    /// generator occurrence (any occurrence must end at the new arrow).
    fn blocks_extension(&self, arrows: &[usize], next: usize) -> bool {
        self.generators.iter().any(|g| {
            let gl = g.len();
            gl <= arrows.len() + 1
                && g.arrows()[gl - 1] == next
                && g.arrows()[..gl - 1] == arrows[arrows.len() + 1 - gl..]
        })
    }
}

/// Outcome of the admissibility decision.
#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// A pumpable cycle when not admissible.
    pub witness: Option<Path>,
    /// Smallest `L` with no nonzero path of length `>= L`, when admissible.
    pub length_bound: Option<usize>,
}

/// Decides whether `(quiver, ideal)` bounds a finite-dimensional algebra.
///
/// Nonzero paths are the walks avoiding every generator as a factor. They are
/// the language of the automaton whose states are (vertex, last `g-1` arrows);
/// the language is infinite exactly when that automaton has a reachable cycle,
/// and the cycle's arrows form a pumpable witness.
pub fn is_admissible(quiver: &Quiver, ideal: &MonomialIdeal) -> AdmissibilityReport {
    let g = ideal.max_generator_len().max(2);
    let keep = g - 1;

    #[derive(Clone, PartialEq, Eq, Hash)]
    struct State {
        vertex: usize,
        suffix: Vec<usize>,
    }

    let mut ids: HashMap<State, usize> = HashMap::new();
    let mut states: Vec<State> = Vec::new();
    let mut edges: Vec<Vec<(usize, usize)>> = Vec::new(); // (arrow, target state)
    let mut queue = VecDeque::new();
    for v in 0..quiver.vertex_count() {
        let s = State {
            vertex: v,
            suffix: Vec::new(),
        };
        ids.insert(s.clone(), states.len());
        states.push(s);
        edges.push(Vec::new());
        queue.push_back(states.len() - 1);
    }
    while let Some(sid) = queue.pop_front() {
        let state = states[sid].clone();
        for a in quiver.arrows_from(state.vertex).collect::<Vec<_>>() {
            if ideal.blocks_extension(&state.suffix, a) {
                continue;
            }
            let mut suffix = state.suffix.clone();
            suffix.push(a);
            if suffix.len() > keep {
                suffix.remove(0);
            }
            let next = State {
                vertex: quiver.arrow(a).target,
                suffix,
            };
            let nid = *ids.entry(next.clone()).or_insert_with(|| {
                states.push(next.clone());
                edges.push(Vec::new());
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            edges[sid].push((a, nid));
        }
    }

    // Cycle detection over the reachable transition graph.
    let n = states.len();
    let mut color = vec![0u8; n]; // 0 white, 1 gray, 2 black
    let mut stack: Vec<(usize, usize)> = Vec::new(); // (state, edge cursor)
    let mut path_arrows: Vec<usize> = Vec::new();
    let mut path_states: Vec<usize> = Vec::new();
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        color[root] = 1;
        stack.push((root, 0));
        path_states.push(root);
        while let Some(&mut (sid, ref mut cursor)) = stack.last_mut() {
            if *cursor < edges[sid].len() {
                let (arrow, nid) = edges[sid][*cursor];
                *cursor += 1;
                match color[nid] {
                    0 => {
                        color[nid] = 1;
                        stack.push((nid, 0));
                        path_states.push(nid);
                        path_arrows.push(arrow);
                    }
                    1 => {
                        // Found a cycle: unwind the recorded walk back to nid.
                        let pos = path_states.iter().position(|&s| s == nid).unwrap();
                        let mut cycle_arrows = path_arrows[pos..].to_vec();
                        cycle_arrows.push(arrow);
                        let witness = Path::from_arrows(quiver, cycle_arrows)
                            .expect("automaton walk composes");
                        debug_assert!(certify_pumpable(quiver, ideal, &witness));
                        return AdmissibilityReport {
                            admissible: false,
                            witness: Some(witness),
                            length_bound: None,
                        };
                    }
                    _ => {}
                }
            } else {
                color[sid] = 2;
                stack.pop();
                path_states.pop();
                path_arrows.pop();
            }
        }
    }

    // Acyclic automaton: finitely many nonzero paths.
    let paths = enumerate_nonzero_paths(quiver, ideal, None);
    let max_len = paths.iter().map(Path::len).max().unwrap_or(0);
    AdmissibilityReport {
        admissible: true,
        witness: None,
        length_bound: Some(max_len + 1),
    }
}

/// Re-verifies an inadmissibility witness: `cycle` must close up and pump to
/// nonzero paths of arbitrary length.
pub fn certify_pumpable(quiver: &Quiver, ideal: &MonomialIdeal, cycle: &Path) -> bool {
    if cycle.is_empty() || cycle.start() != cycle.end() {
        return false;
    }
    if quiver
        .arrows_from(cycle.start())
        .all(|a| a != cycle.arrows()[0])
    {
        return false;
    }
    let g = ideal.max_generator_len().max(2);
    // Every length-g factor of the periodic word appears within this many copies.
    let copies = 1 + g.div_ceil(cycle.len());
    let mut arrows = Vec::new();
    for _ in 0..copies {
        arrows.extend_from_slice(cycle.arrows());
    }
    !ideal.kills(&arrows)
}

/// Breadth-first enumeration of generator-free paths. Pass `None` only after
/// admissibility has been established.
fn enumerate_nonzero_paths(
    quiver: &Quiver,
    ideal: &MonomialIdeal,
    max_len: Option<usize>,
) -> Vec<Path> {
    let mut out: Vec<Path> = (0..quiver.vertex_count()).map(Path::stationary).collect();
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        if let Some(limit) = max_len {
            if frontier[0].len() >= limit {
                break;
            }
        }
        let mut next = Vec::new();
        for p in &frontier {
            for a in quiver.arrows_from(p.end()) {
                if !ideal.blocks_extension(p.arrows(), a) {
                    let mut arrows = p.arrows().to_vec();
                    arrows.push(a);
                    next.push(Path {
                        start: p.start(),
                        end: quiver.arrow(a).target,
                        arrows,
                    });
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// A bound quiver algebra `kQ/I` presented by its basis of nonzero paths and
/// the multiplication table between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundAlgebra {
    quiver: Quiver,
    ideal: MonomialIdeal,
    field: FieldSpec,
    path_basis: Vec<Path>,
    basis_index: HashMap<Path, usize>,
    /// `table[i][j]` is the basis index of `p_i` followed by `p_j`, when nonzero.
    table: Vec<Vec<Option<usize>>>,
    /// No basis path has length `>= length_bound`.
    length_bound: usize,
}

pub fn build_algebra(
    quiver: Quiver,
    ideal: MonomialIdeal,
    field: FieldSpec,
) -> Result<BoundAlgebra, QuiverError> {
    let report = is_admissible(&quiver, &ideal);
    if !report.admissible {
        let witness = report.witness.expect("witness accompanies inadmissibility");
        return Err(QuiverError::NotAdmissible {
            witness: witness.display(&quiver),
        });
    }
    let mut path_basis = enumerate_nonzero_paths(&quiver, &ideal, None);
    path_basis.sort_by(|a, b| {
        let key = |p: &Path| {
            (
                p.len(),
                p.arrows()
                    .iter()
                    .map(|&x| quiver.arrow(x).label.clone())
                    .collect::<Vec<_>>(),
                p.start(),
            )
        };
        key(a).cmp(&key(b))
    });
    let basis_index: HashMap<Path, usize> = path_basis
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let table = path_basis
        .iter()
        .map(|p| {
            path_basis
                .iter()
                .map(|q| p.compose(q).and_then(|pq| basis_index.get(&pq).copied()))
                .collect()
        })
        .collect();
    Ok(BoundAlgebra {
        length_bound: report.length_bound.unwrap_or(1),
        quiver,
        ideal,
        field,
        path_basis,
        basis_index,
        table,
    })
}

impl BoundAlgebra {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dimension(&self) -> usize {
        self.path_basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.path_basis
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.basis_index.get(p).copied()
    }

    pub fn stationary_index(&self, v: usize) -> usize {
        self.basis_index[&Path::stationary(v)]
    }

    /// Basis index of `p_i` followed by `p_j`, or `None` when the product is
    /// zero or the endpoints do not compose.
    pub fn compose_basis(&self, i: usize, j: usize) -> Option<usize> {
        self.table[i][j]
    }

    pub fn length_bound(&self) -> usize {
        self.length_bound
    }

    pub fn max_path_length(&self) -> usize {
        self.path_basis.iter().map(Path::len).max().unwrap_or(0)
    }

    pub fn paths_from(&self, v: usize) -> Vec<usize> {
        (0..self.dimension())
            .filter(|&i| self.path_basis[i].start() == v)
            .collect()
    }

    pub fn paths_between(&self, from: usize, to: usize) -> Vec<usize> {
        (0..self.dimension())
            .filter(|&i| self.path_basis[i].start() == from && self.path_basis[i].end() == to)
            .collect()
    }

    /// Every vertex has in- and out-degree at most one (serial quiver).
    pub fn is_nakayama(&self) -> bool {
        (0..self.quiver.vertex_count()).all(|v| {
            self.quiver.arrows_from(v).count() <= 1 && self.quiver.arrows_into(v).count() <= 1
        })
    }

    /// Rebuilds the algebra with every vertex and arrow label prefixed.
    pub fn with_prefixed_labels(&self, prefix: &str) -> BoundAlgebra {
        let vertices = self
            .quiver
            .vertices
            .iter()
            .map(|v| format!("{prefix}.{v}"))
            .collect();
        let arrows = self
            .quiver
            .arrows
            .iter()
            .map(|a| {
                (
                    format!("{prefix}.{}", a.label),
                    format!("{prefix}.{}", self.quiver.vertex_label(a.source)),
                    format!("{prefix}.{}", self.quiver.vertex_label(a.target)),
                )
            })
            .collect();
        let quiver = Quiver::new(vertices, arrows).expect("relabeling preserves validity");
        let ideal = MonomialIdeal {
            generators: self.ideal.generators.to_vec(),
        };
        build_algebra(quiver, ideal, self.field).expect("relabeling preserves admissibility")
    }
}

impl fmt::Display for BoundAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kQ/I with {} vertices, {} arrows, dimension {}",
            self.quiver.vertex_count(),
            self.quiver.arrow_count(),
            self.dimension()
        )
    }
}

/// Reverses all arrows and relations.
pub fn opposite_algebra(a: &BoundAlgebra) -> BoundAlgebra {
    let q = a.quiver();
    let vertices = q.vertex_labels().to_vec();
    let arrows = q
        .arrows()
        .iter()
        .map(|ar| {
            (
                ar.label.clone(),
                q.vertex_label(ar.target).to_string(),
                q.vertex_label(ar.source).to_string(),
            )
        })
        .collect();
    let quiver = Quiver::new(vertices, arrows).expect("opposite quiver is valid");
    let generators = a
        .ideal()
        .generators()
        .iter()
        .map(|g| {
            let mut arrows = g.arrows().to_vec();
            arrows.reverse();
            Path::from_arrows(&quiver, arrows).expect("reversed generator composes")
        })
        .collect();
    let ideal = MonomialIdeal::new(&quiver, generators).expect("generator lengths preserved");
    build_algebra(quiver, ideal, a.field()).expect("opposite of admissible is admissible")
}

/// The linear Nakayama algebra on `o_1 <- o_2 <- ... <- o_n`, with zero
/// relations given as (1-based start vertex, length) pairs.
pub fn nakayama_linear(
    n: usize,
    relations: &[(usize, usize)],
    field: FieldSpec,
) -> Result<BoundAlgebra, QuiverError> {
    assert!(n >= 1, "need at least one vertex");
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    // a_i runs from vertex i+1 down to vertex i.
    let arrows: Vec<(String, String, String)> = (1..n)
        .map(|i| (format!("a{i}"), (i + 1).to_string(), i.to_string()))
        .collect();
    let quiver = Quiver::new(vertices, arrows)?;
    let mut generators = Vec::new();
    for &(start, len) in relations {
        if len < 2 || start > n || start < 1 || start <= len {
            return Err(QuiverError::BadRelationPlacement { start, len });
        }
        // Path from `start` of length `len`: arrows a_{start-1}, ..., a_{start-len}.
        let arrows: Vec<usize> = (0..len).map(|k| start - 2 - k).collect();
        generators.push(Path::from_arrows(&quiver, arrows)?);
    }
    let ideal = MonomialIdeal::new(&quiver, generators)?;
    build_algebra(quiver, ideal, field)
}

/// The cyclic Nakayama algebra with `n` vertices (arrows `i -> i+1` mod `n`)
/// and all paths of length `uniform_length` set to zero.
pub fn nakayama_cyclic(
    n: usize,
    uniform_length: usize,
    field: FieldSpec,
) -> Result<BoundAlgebra, QuiverError> {
    assert!(n >= 1, "need at least one vertex");
    if uniform_length < 2 {
        return Err(QuiverError::Invalid(
            "cyclic Nakayama needs relation length >= 2".into(),
        ));
    }
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let arrows: Vec<(String, String, String)> = (1..=n)
        .map(|i| {
            let next = if i == n { 1 } else { i + 1 };
            (format!("a{i}"), i.to_string(), next.to_string())
        })
        .collect();
    let quiver = Quiver::new(vertices, arrows)?;
    let mut generators = Vec::new();
    for v in 0..n {
        let arrows: Vec<usize> = (0..uniform_length).map(|k| (v + k) % n).collect();
        generators.push(Path::from_arrows(&quiver, arrows)?);
    }
    let ideal = MonomialIdeal::new(&quiver, generators)?;
    build_algebra(quiver, ideal, field)
}

/// Embedding of a component's vertices and arrows into a glued algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentMap {
    pub vertex_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl ComponentMap {
    pub fn identity(a: &BoundAlgebra) -> Self {
        ComponentMap {
            vertex_map: (0..a.quiver().vertex_count()).collect(),
            arrow_map: (0..a.quiver().arrow_count()).collect(),
        }
    }

    /// `self: X -> Y` followed by `next: Y -> Z`.
    pub fn then(&self, next: &ComponentMap) -> ComponentMap {
        ComponentMap {
            vertex_map: self.vertex_map.iter().map(|&v| next.vertex_map[v]).collect(),
            arrow_map: self.arrow_map.iter().map(|&a| next.arrow_map[a]).collect(),
        }
    }
}

fn fresh_label(taken: &HashSet<String>, base: &str) -> String {
    let mut candidate = base.to_string();
    while taken.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Identifies `v1` in `a1` with `v2` in `a2`; the ideal is generated by both
/// components' relations. Labels of the first component are kept; clashing
/// labels from the second gain primes.
pub fn glue_at_vertex(
    a1: &BoundAlgebra,
    v1: usize,
    a2: &BoundAlgebra,
    v2: usize,
) -> Result<(BoundAlgebra, ComponentMap, ComponentMap), QuiverError> {
    assert_eq!(a1.field(), a2.field(), "components over different fields");
    let q1 = a1.quiver();
    let q2 = a2.quiver();
    let mut vertices: Vec<String> = q1.vertex_labels().to_vec();
    let mut taken: HashSet<String> = vertices.iter().cloned().collect();
    let mut vmap2 = vec![usize::MAX; q2.vertex_count()];
    for (v, label) in q2.vertex_labels().iter().enumerate() {
        if v == v2 {
            vmap2[v] = v1;
        } else {
            let fresh = fresh_label(&taken, label);
            taken.insert(fresh.clone());
            vmap2[v] = vertices.len();
            vertices.push(fresh);
        }
    }
    let vmap1: Vec<usize> = (0..q1.vertex_count()).collect();

    let mut arrow_labels: HashSet<String> =
        q1.arrows().iter().map(|a| a.label.clone()).collect();
    let mut arrows: Vec<(String, String, String)> = q1
        .arrows()
        .iter()
        .map(|a| {
            (
                a.label.clone(),
                q1.vertex_label(a.source).to_string(),
                q1.vertex_label(a.target).to_string(),
            )
        })
        .collect();
    let amap1: Vec<usize> = (0..q1.arrow_count()).collect();
    let mut amap2 = vec![usize::MAX; q2.arrow_count()];
    for (i, a) in q2.arrows().iter().enumerate() {
        let label = fresh_label(&arrow_labels, &a.label);
        arrow_labels.insert(label.clone());
        amap2[i] = arrows.len();
        arrows.push((
            label,
            vertices[vmap2[a.source]].clone(),
            vertices[vmap2[a.target]].clone(),
        ));
    }

    let quiver = Quiver::new(vertices, arrows)?;
    let mut generators = Vec::new();
    for g in a1.ideal().generators() {
        generators.push(Path::from_arrows(
            &quiver,
            g.arrows().iter().map(|&x| amap1[x]).collect(),
        )?);
    }
    for g in a2.ideal().generators() {
        generators.push(Path::from_arrows(
            &quiver,
            g.arrows().iter().map(|&x| amap2[x]).collect(),
        )?);
    }
    let ideal = MonomialIdeal::new(&quiver, generators)?;
    let glued = build_algebra(quiver, ideal, a1.field())?;
    Ok((
        glued,
        ComponentMap {
            vertex_map: vmap1,
            arrow_map: amap1,
        },
        ComponentMap {
            vertex_map: vmap2,
            arrow_map: amap2,
        },
    ))
}

/// Disjoint union of the two quivers plus one new arrow `w -> v` from the
/// source component into the target component. The result is an
/// upper-triangular extension whose connecting bimodule is projective on
/// both sides.
pub fn connect_by_arrow(
    a_src: &BoundAlgebra,
    w: usize,
    a_tgt: &BoundAlgebra,
    v: usize,
) -> Result<(BoundAlgebra, ComponentMap, ComponentMap, usize), QuiverError> {
    assert_eq!(a_src.field(), a_tgt.field(), "components over different fields");
    let qs = a_src.quiver();
    let qt = a_tgt.quiver();
    let mut vertices: Vec<String> = qs.vertex_labels().to_vec();
    let mut taken: HashSet<String> = vertices.iter().cloned().collect();
    let vmap_src: Vec<usize> = (0..qs.vertex_count()).collect();
    let mut vmap_tgt = vec![usize::MAX; qt.vertex_count()];
    for (u, label) in qt.vertex_labels().iter().enumerate() {
        let fresh = fresh_label(&taken, label);
        taken.insert(fresh.clone());
        vmap_tgt[u] = vertices.len();
        vertices.push(fresh);
    }

    let mut arrow_labels: HashSet<String> =
        qs.arrows().iter().map(|a| a.label.clone()).collect();
    let mut arrows: Vec<(String, String, String)> = qs
        .arrows()
        .iter()
        .map(|a| {
            (
                a.label.clone(),
                qs.vertex_label(a.source).to_string(),
                qs.vertex_label(a.target).to_string(),
            )
        })
        .collect();
    let amap_src: Vec<usize> = (0..qs.arrow_count()).collect();
    let mut amap_tgt = vec![usize::MAX; qt.arrow_count()];
    for (i, a) in qt.arrows().iter().enumerate() {
        let label = fresh_label(&arrow_labels, &a.label);
        arrow_labels.insert(label.clone());
        amap_tgt[i] = arrows.len();
        arrows.push((
            label,
            vertices[vmap_tgt[a.source]].clone(),
            vertices[vmap_tgt[a.target]].clone(),
        ));
    }
    let connecting_label = fresh_label(&arrow_labels, "c");
    let connecting = arrows.len();
    arrows.push((
        connecting_label,
        vertices[vmap_src[w]].clone(),
        vertices[vmap_tgt[v]].clone(),
    ));

    let quiver = Quiver::new(vertices, arrows)?;
    let mut generators = Vec::new();
    for (gens, amap) in [
        (a_src.ideal().generators(), &amap_src),
        (a_tgt.ideal().generators(), &amap_tgt),
    ] {
        for g in gens {
            generators.push(Path::from_arrows(
                &quiver,
                g.arrows().iter().map(|&x| amap[x]).collect(),
            )?);
        }
    }
    let ideal = MonomialIdeal::new(&quiver, generators)?;
    let glued = build_algebra(quiver, ideal, a_src.field())?;
    Ok((
        glued,
        ComponentMap {
            vertex_map: vmap_src,
            arrow_map: amap_src,
        },
        ComponentMap {
            vertex_map: vmap_tgt,
            arrow_map: amap_tgt,
        },
        connecting,
    ))
}

/// One vertex of one named component in a gluing plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompVertex {
    pub comp: usize,
    pub vertex: usize,
}

/// An inductive attachment instruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanStep {
    /// Identify the two vertices (Type II style gluing).
    Identify { a: CompVertex, b: CompVertex },
    /// Add a connecting arrow `from -> to` between the two components.
    Connect { from: CompVertex, to: CompVertex },
}

/// A gluing described as components plus attachment steps, processed left to
/// right; each step must attach exactly one not-yet-placed component.
#[derive(Clone)]
pub struct GluingPlan {
    pub components: Vec<(String, Arc<BoundAlgebra>)>,
    pub steps: Vec<PlanStep>,
}

/// How one attachment step changed the partial algebra.
#[derive(Clone, Debug)]
pub enum StepKind {
    /// The first component placed as the base.
    Base,
    /// Vertex identification; `glued` indexes the merged vertex in `after`.
    Vertex { glued: usize },
    /// Arrow connection; `arrow` indexes the connecting arrow in `after`.
    Arrow { arrow: usize, new_comp_is_source: bool },
}

#[derive(Clone)]
pub struct GlueStepRecord {
    pub comp: usize,
    pub kind: StepKind,
    pub before: Option<Arc<BoundAlgebra>>,
    pub after: Arc<BoundAlgebra>,
    /// Embedding of the previous partial algebra into `after`.
    pub prev_map: Option<ComponentMap>,
    /// Embedding of the newly placed component into `after`.
    pub comp_map: ComponentMap,
}

/// A fully constructed gluing with the inductive history needed by the
/// extension functors.
#[derive(Clone)]
pub struct GluingBuild {
    pub components: Vec<(String, Arc<BoundAlgebra>)>,
    pub steps: Vec<GlueStepRecord>,
    pub algebra: Arc<BoundAlgebra>,
    /// Embedding of each component into the final algebra.
    pub component_maps: Vec<ComponentMap>,
    /// Index into `steps` of the step that placed each component.
    pub placement_step: Vec<usize>,
}

pub fn build_gluing(plan: &GluingPlan) -> Result<GluingBuild, QuiverError> {
    let m = plan.components.len();
    if m == 0 {
        return Err(QuiverError::Invalid("gluing needs at least one component".into()));
    }
    let mut placed: Vec<Option<ComponentMap>> = vec![None; m];
    let mut placement_step = vec![usize::MAX; m];
    let mut steps: Vec<GlueStepRecord> = Vec::new();
    let mut partial: Option<Arc<BoundAlgebra>> = None;

    let place_base = |comp: usize,
                          placed: &mut Vec<Option<ComponentMap>>,
                          placement_step: &mut Vec<usize>,
                          steps: &mut Vec<GlueStepRecord>,
                          partial: &mut Option<Arc<BoundAlgebra>>| {
        let alg = plan.components[comp].1.clone();
        placed[comp] = Some(ComponentMap::identity(&alg));
        placement_step[comp] = steps.len();
        steps.push(GlueStepRecord {
            comp,
            kind: StepKind::Base,
            before: None,
            after: alg.clone(),
            prev_map: None,
            comp_map: ComponentMap::identity(&alg),
        });
        *partial = Some(alg);
    };

    for step in &plan.steps {
        let (first, second) = match step {
            PlanStep::Identify { a, b } => (*a, *b),
            PlanStep::Connect { from, to } => (*from, *to),
        };
        for side in [first, second] {
            if side.comp >= m {
                return Err(QuiverError::Invalid(format!(
                    "step references component {} out of range",
                    side.comp
                )));
            }
        }
        if partial.is_none() {
            place_base(
                first.comp,
                &mut placed,
                &mut placement_step,
                &mut steps,
                &mut partial,
            );
        }
        let (old_cv, new_cv) = match (placed[first.comp].is_some(), placed[second.comp].is_some()) {
            (true, false) => (first, second),
            (false, true) => (second, first),
            (true, true) => {
                return Err(QuiverError::Invalid(format!(
                    "components `{}` and `{}` are both already glued; attachments must form a tree",
                    plan.components[first.comp].0, plan.components[second.comp].0
                )))
            }
            (false, false) => {
                return Err(QuiverError::Invalid(format!(
                    "neither `{}` nor `{}` is glued yet",
                    plan.components[first.comp].0, plan.components[second.comp].0
                )))
            }
        };
        let before = partial.clone().unwrap();
        let old_vertex = placed[old_cv.comp].as_ref().unwrap().vertex_map[old_cv.vertex];
        let new_alg = plan.components[new_cv.comp].1.clone();

        let (after, prev_map, comp_map, kind) = match step {
            PlanStep::Identify { .. } => {
                let (glued, pm, cm) =
                    glue_at_vertex(&before, old_vertex, &new_alg, new_cv.vertex)?;
                let glued_vertex = pm.vertex_map[old_vertex];
                (glued, pm, cm, StepKind::Vertex { glued: glued_vertex })
            }
            PlanStep::Connect { from, .. } => {
                if from.comp == new_cv.comp {
                    // New component is the arrow source.
                    let (glued, src_map, tgt_map, arrow) =
                        connect_by_arrow(&new_alg, new_cv.vertex, &before, old_vertex)?;
                    (
                        glued,
                        tgt_map,
                        src_map,
                        StepKind::Arrow {
                            arrow,
                            new_comp_is_source: true,
                        },
                    )
                } else {
                    let (glued, src_map, tgt_map, arrow) =
                        connect_by_arrow(&before, old_vertex, &new_alg, new_cv.vertex)?;
                    (
                        glued,
                        src_map,
                        tgt_map,
                        StepKind::Arrow {
                            arrow,
                            new_comp_is_source: false,
                        },
                    )
                }
            }
        };

        let after = Arc::new(after);
        for slot in placed.iter_mut().flatten() {
            *slot = slot.then(&prev_map);
        }
        placed[new_cv.comp] = Some(comp_map.clone());
        placement_step[new_cv.comp] = steps.len();
        steps.push(GlueStepRecord {
            comp: new_cv.comp,
            kind,
            before: Some(before),
            after: after.clone(),
            prev_map: Some(prev_map),
            comp_map,
        });
        partial = Some(after);
    }

    if partial.is_none() {
        // Single component, no steps.
        place_base(0, &mut placed, &mut placement_step, &mut steps, &mut partial);
    }
    if let Some(unplaced) = (0..m).find(|&c| placed[c].is_none()) {
        return Err(QuiverError::Invalid(format!(
            "component `{}` is never glued",
            plan.components[unplaced].0
        )));
    }

    Ok(GluingBuild {
        components: plan.components.clone(),
        steps,
        algebra: partial.unwrap(),
        component_maps: placed.into_iter().map(Option::unwrap).collect(),
        placement_step,
    })
}

impl GluingBuild {
    /// Basis paths of the glued algebra that mix arrows of two or more
    /// components (or use a connecting arrow). The defining ideal never kills
    /// these, which is worth surfacing in reports.
    pub fn cross_component_paths(&self) -> Vec<usize> {
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for (c, map) in self.component_maps.iter().enumerate() {
            for &a in &map.arrow_map {
                owner.insert(a, c);
            }
        }
        self.algebra
            .basis()
            .iter()
            .enumerate()
            .filter(|(_, p)| {
                let owners: HashSet<Option<usize>> =
                    p.arrows().iter().map(|a| owner.get(a).copied()).collect();
                owners.len() > 1 || owners.contains(&None)
            })
            .map(|(i, _)| i)
            .collect()
    }
}
