//! Finite multigraphs with loops and parallel edges, addressed by dense
//! edge ids so that every edge subset is an [`EdgeSet`].

use serde::{Deserialize, Serialize};

use crate::edgeset::{EdgeId, EdgeSet, CAPACITY};
use crate::error::{Error, Result};
use crate::limits::Limits;

pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub ends: (VertexId, VertexId),
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }

    pub fn other_end(&self, v: VertexId) -> VertexId {
        if self.ends.0 == v {
            self.ends.1
        } else {
            self.ends.0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    incident: Vec<EdgeSet>,
    loops: Vec<EdgeSet>,
}

/// A connected 2-regular edge set of some graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle(EdgeSet);

impl Cycle {
    pub fn new(graph: &Multigraph, edges: EdgeSet) -> Result<Self> {
        edges.check_within(graph.edge_count())?;
        if graph.is_cycle(edges) {
            Ok(Cycle(edges))
        } else {
            Err(Error::NotACycle(format!("{edges}")))
        }
    }

    pub fn edges(self) -> EdgeSet {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        self.0.is_empty()
    }
}

impl From<Cycle> for EdgeSet {
    fn from(c: Cycle) -> EdgeSet {
        c.0
    }
}

/// Edge set and vertex count of one connected component of `G[A]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Component {
    pub edges: EdgeSet,
    pub vertices: usize,
}

impl Component {
    /// Number of independent cycles in the component.
    pub fn nullity(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertices
    }
}

impl Multigraph {
    /// Builds a graph from vertex names and `(name, end, end)` triples; edge
    /// ids follow the order of `edges`.
    pub fn new(vertices: Vec<String>, edges: Vec<(String, VertexId, VertexId)>) -> Result<Self> {
        if edges.len() > CAPACITY {
            return Err(Error::input(format!(
                "{} edges exceed the edge-set capacity of {CAPACITY}",
                edges.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::input(format!("duplicate vertex `{v}`")));
            }
        }
        let mut incident = vec![EdgeSet::EMPTY; vertices.len()];
        let mut loops = vec![EdgeSet::EMPTY; vertices.len()];
        let mut names = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (id, (name, a, b)) in edges.into_iter().enumerate() {
            for end in [a, b] {
                if end >= vertices.len() {
                    return Err(Error::input(format!(
                        "edge `{name}` references vertex index {end}, graph has {}",
                        vertices.len()
                    )));
                }
            }
            if !names.insert(name.clone()) {
                return Err(Error::input(format!("duplicate edge name `{name}`")));
            }
            incident[a].insert(id);
            incident[b].insert(id);
            if a == b {
                loops[a].insert(id);
            }
            out.push(Edge { name, ends: (a, b) });
        }
        Ok(Multigraph {
            vertices,
            edges: out,
            incident,
            loops,
        })
    }

    /// Same as [`Multigraph::new`] with endpoints given by vertex name.
    pub fn from_names<V, E, W>(vertices: &[V], edges: &[(E, W, W)]) -> Result<Self>
    where
        V: AsRef<str>,
        E: AsRef<str>,
        W: AsRef<str>,
    {
        let verts: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let lookup = |name: &str| {
            verts
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };
        let mut es = Vec::with_capacity(edges.len());
        for (name, a, b) in edges {
            es.push((
                name.as_ref().to_string(),
                lookup(a.as_ref())?,
                lookup(b.as_ref())?,
            ));
        }
        Multigraph::new(verts, es)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.edges.len())
    }

    /// Edges with at least one end at `v`, loops included.
    pub fn incident(&self, v: VertexId) -> EdgeSet {
        self.incident[v]
    }

    pub fn loops_at(&self, v: VertexId) -> EdgeSet {
        self.loops[v]
    }

    /// `E(G - v)`: the edges not incident with `v`.
    pub fn edges_avoiding(&self, v: VertexId) -> EdgeSet {
        self.all_edges() - self.incident[v]
    }

    /// Degree of `v` in `G[A]`; a loop contributes two.
    pub fn degree_in(&self, v: VertexId, a: EdgeSet) -> usize {
        (self.incident[v] & a).len() + (self.loops[v] & a).len()
    }

    pub fn check(&self, a: EdgeSet) -> Result<()> {
        a.check_within(self.edge_count())
    }

    /// Vertices of `G[A]`, ascending.
    pub fn vertices_of(&self, a: EdgeSet) -> Vec<VertexId> {
        let mut mark = vec![false; self.vertex_count()];
        for e in a {
            let (x, y) = self.edges[e].ends;
            mark[x] = true;
            mark[y] = true;
        }
        mark.iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
            .collect()
    }

    pub fn names_of(&self, a: EdgeSet) -> Vec<String> {
        a.iter().map(|e| self.edges[e].name.clone()).collect()
    }

    /// Resolves a comma-separated list of edge names.
    pub fn parse_edge_names(&self, text: &str) -> Result<EdgeSet> {
        let mut out = EdgeSet::EMPTY;
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let e = self
                .edge_by_name(tok)
                .ok_or_else(|| Error::UnknownEdge(tok.to_string()))?;
            out.insert(e);
        }
        Ok(out)
    }

    /// `G[A]`: edge set `A` and exactly the vertices incident with `A`.
    pub fn induced_subgraph(&self, a: EdgeSet) -> Result<Multigraph> {
        self.check(a)?;
        let verts = self.vertices_of(a);
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let names = verts.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = a
            .iter()
            .map(|e| {
                let edge = &self.edges[e];
                (edge.name.clone(), index[edge.ends.0], index[edge.ends.1])
            })
            .collect();
        Multigraph::new(names, edges)
    }

    /// Connected components of `G[A]` as edge sets, ordered by least edge id.
    pub fn components(&self, a: EdgeSet) -> Vec<EdgeSet> {
        self.component_profiles(a).into_iter().map(|c| c.edges).collect()
    }

    /// Components of `G[A]` with their vertex counts, ordered by least edge id.
    pub fn component_profiles(&self, a: EdgeSet) -> Vec<Component> {
        let mut dsu = Dsu::new(self.vertex_count());
        for e in a {
            let (x, y) = self.edges[e].ends;
            dsu.union(x, y);
        }
        let mut slot = vec![usize::MAX; self.vertex_count()];
        let mut out: Vec<Component> = Vec::new();
        let mut counted = vec![false; self.vertex_count()];
        for e in a {
            let (x, y) = self.edges[e].ends;
            let root = dsu.find(x);
            if slot[root] == usize::MAX {
                slot[root] = out.len();
                out.push(Component {
                    edges: EdgeSet::EMPTY,
                    vertices: 0,
                });
            }
            let comp = &mut out[slot[root]];
            comp.edges.insert(e);
            for v in [x, y] {
                if !counted[v] {
                    counted[v] = true;
                    comp.vertices += 1;
                }
            }
        }
        out
    }

    pub fn is_connected(&self, a: EdgeSet) -> bool {
        self.component_profiles(a).len() <= 1
    }

    /// True iff `G[A]` is connected and 2-regular.
    pub fn is_cycle(&self, a: EdgeSet) -> bool {
        if a.is_empty() {
            return false;
        }
        let verts = self.vertices_of(a);
        verts.len() == a.len()
            && verts.iter().all(|&v| self.degree_in(v, a) == 2)
            && self.is_connected(a)
    }

    /// Every cycle of `G[A]`, sorted least-edge-first.
    ///
    /// Expands each component's fundamental cycles (relative to a BFS
    /// spanning tree) over its whole cycle space, keeping the connected
    /// 2-regular members. Cost is `2^(nullity)` per component, bounded by
    /// `limits.max_cycle_edges` on `|A|`.
    pub fn cycles_within(&self, a: EdgeSet, limits: &Limits) -> Result<Vec<Cycle>> {
        self.check(a)?;
        limits.check_cycle_edges(a.len())?;
        let mut out = Vec::new();
        for comp in self.component_profiles(a) {
            let basis = self.fundamental_cycles(comp.edges);
            // Gray-code walk: each step toggles one fundamental cycle.
            let mut current = EdgeSet::EMPTY;
            for step in 1u64..(1u64 << basis.len()) {
                current = current ^ basis[step.trailing_zeros() as usize];
                if self.is_cycle(current) {
                    out.push(Cycle(current));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Fundamental cycles of a connected edge set with respect to a BFS tree
    /// rooted at the tail of its least edge.
    fn fundamental_cycles(&self, comp: EdgeSet) -> Vec<EdgeSet> {
        let Some(first) = comp.min() else {
            return Vec::new();
        };
        let n = self.vertex_count();
        let mut parent_edge = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        let root = self.edges[first].ends.0;
        depth[root] = 0;
        let mut tree = EdgeSet::EMPTY;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for e in self.incident[v] & comp {
                let w = self.edges[e].other_end(v);
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent_edge[w] = e;
                    tree.insert(e);
                    queue.push_back(w);
                }
            }
        }
        let up = |v: VertexId| self.edges[parent_edge[v]].other_end(v);
        (comp - tree)
            .iter()
            .map(|e| {
                let (mut x, mut y) = self.edges[e].ends;
                let mut cyc = EdgeSet::singleton(e);
                while depth[x] > depth[y] {
                    cyc.insert(parent_edge[x]);
                    x = up(x);
                }
                while depth[y] > depth[x] {
                    cyc.insert(parent_edge[y]);
                    y = up(y);
                }
                while x != y {
                    cyc.insert(parent_edge[x]);
                    cyc.insert(parent_edge[y]);
                    x = up(x);
                    y = up(y);
                }
                cyc
            })
            .collect()
    }

    /// Edges outside `c` with both ends on `c` (loops at a vertex of `c`
    /// included).
    pub fn chords(&self, c: &Cycle) -> EdgeSet {
        let mut on = vec![false; self.vertex_count()];
        for v in self.vertices_of(c.edges()) {
            on[v] = true;
        }
        (self.all_edges() - c.edges())
            .iter()
            .filter(|&e| {
                let (x, y) = self.edges[e].ends;
                on[x] && on[y]
            })
            .collect()
    }

    pub fn is_chordless(&self, c: &Cycle) -> bool {
        self.chords(c).is_empty()
    }

    /// True iff `G[A]` is a theta graph: two vertices joined by three
    /// internally disjoint paths.
    pub fn is_theta(&self, a: EdgeSet) -> bool {
        if a.is_empty() || !a.is_subset(self.all_edges()) {
            return false;
        }
        if a.iter().any(|e| self.edges[e].is_loop()) {
            return false;
        }
        let verts = self.vertices_of(a);
        let mut branch_points = Vec::new();
        for &v in &verts {
            match self.degree_in(v, a) {
                2 => {}
                3 => branch_points.push(v),
                _ => return false,
            }
        }
        let [start, end] = branch_points[..] else {
            return false;
        };
        // Follow each of the three edges at `start` through degree-2
        // vertices; every branch must land on `end`.
        let mut covered = EdgeSet::EMPTY;
        for first in self.incident[start] & a {
            let (mut edge, mut at) = (first, self.edges[first].other_end(start));
            covered.insert(edge);
            while at != start && at != end {
                let Some(next) = ((self.incident[at] & a).without(edge)).min() else {
                    return false;
                };
                edge = next;
                at = self.edges[edge].other_end(at);
                if covered.contains(edge) {
                    return false;
                }
                covered.insert(edge);
            }
            if at != end {
                return false;
            }
        }
        covered == a
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(id, e)| EdgeRecord {
                    id,
                    name: e.name.clone(),
                    ends: [
                        self.vertices[e.ends.0].clone(),
                        self.vertices[e.ends.1].clone(),
                    ],
                })
                .collect(),
            balanced: None,
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        for (pos, rec) in file.edges.iter().enumerate() {
            if rec.id != pos {
                return Err(Error::input(format!(
                    "edge `{}` has id {} but sits at position {pos}; ids must be dense and in file order",
                    rec.name, rec.id
                )));
            }
        }
        let edges: Vec<_> = file
            .edges
            .iter()
            .map(|r| (r.name.as_str(), r.ends[0].as_str(), r.ends[1].as_str()))
            .collect();
        Multigraph::from_names(&file.vertices, &edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("graph file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Multigraph::from_file(&serde_json::from_str(text)?)
    }
}

/// On-disk graph (and biased-graph) layout. File order of `edges` defines
/// edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub balanced: Option<Vec<Vec<EdgeId>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub name: String,
    pub ends: [String; 2],
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gn::build_gn;

    fn theta3() -> Multigraph {
        Multigraph::from_names(&["a", "b"], &[("x", "a", "b"), ("y", "a", "b"), ("z", "a", "b")])
            .unwrap()
    }

    fn k4() -> Multigraph {
        let vs = ["1", "2", "3", "4"];
        let mut es = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                es.push((format!("{}{}", vs[i], vs[j]), vs[i], vs[j]));
            }
        }
        Multigraph::from_names(&vs, &es).unwrap()
    }

    #[test]
    fn induced_subgraph_examples() {
        let g4 = build_gn(4).unwrap();
        let g = &g4.graph;
        let empty = g.induced_subgraph(EdgeSet::EMPTY).unwrap();
        assert_eq!((empty.vertex_count(), empty.edge_count()), (0, 0));

        let c1 = g.induced_subgraph(g4.c1().edges()).unwrap();
        assert_eq!(c1.vertex_names(), ["u1", "u2", "u3", "u4"]);
        assert_eq!(c1.edge_count(), 4);
        assert!(c1.is_cycle(c1.all_edges()));

        let two = g.induced_subgraph(EdgeSet::from_iter([g4.e(1), g4.e(2)])).unwrap();
        assert_eq!(two.vertex_names(), ["u1", "u2", "v1", "v2"]);
        assert_eq!(two.component_profiles(two.all_edges()).len(), 2);

        assert!(g.induced_subgraph(EdgeSet::singleton(16)).is_err());
    }

    #[test]
    fn components_examples() {
        let g4 = build_gn(4).unwrap();
        let g = &g4.graph;
        let (c1, c2) = (g4.c1().edges(), g4.c2().edges());
        assert_eq!(g.components(c1 | c2), vec![c1, c2]);
        assert!(g.components(EdgeSet::EMPTY).is_empty());
        assert_eq!(g.components(g4.c3().edges()).len(), 1);
    }

    #[test]
    fn cycles_within_examples() {
        let g4 = build_gn(4).unwrap();
        let g = &g4.graph;
        let lim = Limits::default();
        let c1 = g4.c1();
        assert_eq!(g.cycles_within(c1.edges(), &lim).unwrap(), vec![c1]);
        assert_eq!(
            g.cycles_within(c1.edges().with(g4.e(1)), &lim).unwrap(),
            vec![c1]
        );
        let all = g.cycles_within(g.all_edges(), &lim).unwrap();
        for c in [g4.c1(), g4.c2(), g4.c3(), g4.c4()] {
            assert!(all.contains(&c));
        }
        let tight = Limits {
            max_cycle_edges: 8,
            ..Limits::default()
        };
        assert!(g.cycles_within(g.all_edges(), &tight).unwrap_err().is_resource());
    }

    #[test]
    fn loops_and_parallel_edges_are_cycles() {
        let g = Multigraph::from_names(
            &["a", "b"],
            &[("l", "a", "a"), ("p", "a", "b"), ("q", "a", "b")],
        )
        .unwrap();
        let cycles = g.cycles_within(g.all_edges(), &Limits::default()).unwrap();
        let sets: Vec<EdgeSet> = cycles.iter().map(|c| c.edges()).collect();
        assert_eq!(
            sets,
            vec![EdgeSet::from_iter([0]), EdgeSet::from_iter([1, 2])]
        );
        assert_eq!(g.degree_in(0, g.all_edges()), 4);
        assert_eq!(g.loops_at(0), EdgeSet::singleton(0));
    }

    #[test]
    fn chordless_examples() {
        let g4 = build_gn(4).unwrap();
        assert!(g4.graph.is_chordless(&g4.c1()));
        assert!(g4.graph.is_chordless(&g4.c3()));
        let k = k4();
        // 12, 23, 34, 14 -> ids 0, 3, 5, 2
        let square = Cycle::new(&k, EdgeSet::from_iter([0, 3, 5, 2])).unwrap();
        assert!(!k.is_chordless(&square));
        assert_eq!(k.chords(&square).len(), 2);
        assert!(matches!(
            Cycle::new(&k, EdgeSet::from_iter([0, 3])),
            Err(Error::NotACycle(_))
        ));
    }

    #[test]
    fn theta_examples() {
        let t = theta3();
        assert!(t.is_theta(t.all_edges()));
        assert!(!t.is_theta(EdgeSet::from_iter([0, 1])));
        let g4 = build_gn(4).unwrap();
        assert!(!g4.graph.is_theta(g4.c1().edges()));
        // C1 plus the path u1 - v1 - u3.
        let a = g4.c1().edges().with(g4.e(1)).with(g4.f(1));
        assert!(g4.graph.is_theta(a));
    }

    #[test]
    fn handcuffs_are_not_thetas() {
        // Two loops joined by a bridge: degree profile 3,3 but no theta.
        let g = Multigraph::from_names(
            &["a", "b"],
            &[("la", "a", "a"), ("ab", "a", "b"), ("lb", "b", "b")],
        )
        .unwrap();
        assert!(!g.is_theta(g.all_edges()));
        // Two triangles joined by an edge.
        let g = Multigraph::from_names(
            &["a", "b", "c", "d", "e", "f"],
            &[
                ("ab", "a", "b"),
                ("bc", "b", "c"),
                ("ca", "c", "a"),
                ("cd", "c", "d"),
                ("de", "d", "e"),
                ("ef", "e", "f"),
                ("fd", "f", "d"),
            ],
        )
        .unwrap();
        assert!(!g.is_theta(g.all_edges()));
    }

    #[test]
    fn json_roundtrip_and_rejections() {
        let g4 = build_gn(4).unwrap();
        let text = g4.graph.to_json();
        assert_eq!(Multigraph::from_json(&text).unwrap(), g4.graph);

        let bad_id = r#"{"vertices":["a","b"],"edges":[{"id":1,"name":"x","ends":["a","b"]}]}"#;
        assert!(Multigraph::from_json(bad_id).is_err());
        let bad_vertex = r#"{"vertices":["a"],"edges":[{"id":0,"name":"x","ends":["a","q"]}]}"#;
        assert!(matches!(
            Multigraph::from_json(bad_vertex),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn parse_edge_names_resolves() {
        let g4 = build_gn(4).unwrap();
        let s = g4.graph.parse_edge_names("e1, f_1_3").unwrap();
        assert_eq!(s, EdgeSet::from_iter([g4.e(1), g4.f(1)]));
        assert!(matches!(
            g4.graph.parse_edge_names("e9"),
            Err(Error::UnknownEdge(_))
        ));
    }
}
