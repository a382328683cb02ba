//! The graphs `G_n` and their `2^(n-1)` covering pairs of disjoint
//! chordless cycles.
//!
//! `G_n` (n even, n >= 4) has vertices `u1..un, v1..vn` and four edge
//! classes, in edge-id order:
//!
//! * `u_i_j`: `u_i u_{i+1}` (the cycle `C1`),
//! * `v_i_j`: `v_i v_{i+1}` (the cycle `C2`),
//! * `e<i>`: `u_i v_i`,
//! * `f_i_j`: `v_i u_{i+2}`.
//!
//! `C3` is made of the odd `e`/`f` edges and `C4` of the even ones. The
//! crossing pair `i` is `(e_{i+1}, f_{i,i+2})`. Selecting an even set `S` of
//! crossing pairs swaps `u_{i+1}u_{i+2}` and `v_i v_{i+1}` out for the pair
//! `i`, for each `i ∈ S`, which splits into two disjoint chordless `n`-cycles.

use serde::Serialize;

use crate::edgeset::{EdgeId, EdgeSet, CAPACITY};
use crate::error::{Error, Result};
use crate::graph::{Cycle, Multigraph, VertexId};
use crate::limits::Limits;

#[derive(Clone, Debug)]
pub struct GnGraph {
    n: usize,
    pub graph: Multigraph,
    cycles: [Cycle; 4],
}

/// Maps any integer subscript to its representative in `1..=n`.
pub fn wrap_index(n: usize, i: i64) -> usize {
    (i - 1).rem_euclid(n as i64) as usize + 1
}

pub fn build_gn(n: usize) -> Result<GnGraph> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::input(format!("G_n needs an even n >= 4, got {n}")));
    }
    if 4 * n > CAPACITY {
        return Err(Error::input(format!(
            "G_{n} has {} edges, more than the edge-set capacity {CAPACITY}",
            4 * n
        )));
    }
    let w = |i: usize| wrap_index(n, i as i64);
    let mut vertices: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
    vertices.extend((1..=n).map(|i| format!("v{i}")));
    let (u, v) = (|i: usize| i - 1, |i: usize| n + i - 1);

    let mut edges = Vec::with_capacity(4 * n);
    for i in 1..=n {
        edges.push((format!("u_{i}_{}", w(i + 1)), u(i), u(w(i + 1))));
    }
    for i in 1..=n {
        edges.push((format!("v_{i}_{}", w(i + 1)), v(i), v(w(i + 1))));
    }
    for i in 1..=n {
        edges.push((format!("e{i}"), u(i), v(i)));
    }
    for i in 1..=n {
        edges.push((format!("f_{i}_{}", w(i + 2)), v(i), u(w(i + 2))));
    }
    let graph = Multigraph::new(vertices, edges)?;

    let class = |offset: usize, pick: &dyn Fn(usize) -> bool| -> EdgeSet {
        (1..=n).filter(|&i| pick(i)).map(|i| offset + i - 1).collect()
    };
    let odd = |i: usize| i % 2 == 1;
    let even = |i: usize| i % 2 == 0;
    let cycles = [
        Cycle::new(&graph, class(0, &|_| true))?,
        Cycle::new(&graph, class(n, &|_| true))?,
        Cycle::new(&graph, class(2 * n, &odd) | class(3 * n, &odd))?,
        Cycle::new(&graph, class(2 * n, &even) | class(3 * n, &even))?,
    ];
    Ok(GnGraph { n, graph, cycles })
}

impl GnGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    fn w(&self, i: usize) -> usize {
        wrap_index(self.n, i as i64)
    }

    pub fn u(&self, i: usize) -> VertexId {
        self.w(i) - 1
    }

    pub fn v(&self, i: usize) -> VertexId {
        self.n + self.w(i) - 1
    }

    /// `u_i u_{i+1}`.
    pub fn u_edge(&self, i: usize) -> EdgeId {
        self.w(i) - 1
    }

    /// `v_i v_{i+1}`.
    pub fn v_edge(&self, i: usize) -> EdgeId {
        self.n + self.w(i) - 1
    }

    /// `e_i = u_i v_i`.
    pub fn e(&self, i: usize) -> EdgeId {
        2 * self.n + self.w(i) - 1
    }

    /// `f_{i,i+2} = v_i u_{i+2}`.
    pub fn f(&self, i: usize) -> EdgeId {
        3 * self.n + self.w(i) - 1
    }

    pub fn c1(&self) -> Cycle {
        self.cycles[0]
    }

    pub fn c2(&self) -> Cycle {
        self.cycles[1]
    }

    pub fn c3(&self) -> Cycle {
        self.cycles[2]
    }

    pub fn c4(&self) -> Cycle {
        self.cycles[3]
    }

    /// Crossing pair `i`: `(e_{i+1}, f_{i,i+2})`.
    pub fn crossing_pair(&self, i: usize) -> (EdgeId, EdgeId) {
        (self.e(i + 1), self.f(i))
    }

    /// `|X'| = 2^(n-1)`.
    pub fn family_size(&self) -> u64 {
        1u64 << (self.n - 1)
    }

    pub fn selection(&self, indices: &[usize]) -> Result<CrossingSelection> {
        CrossingSelection::new(self.n, indices)
    }

    /// The covering pair `(C_S^1, C_S^2)` of an even selection. `C_S^1` is
    /// the cycle through `e_{i_1+1}` (through `C1` when `S` is empty).
    pub fn covering_pair(&self, selection: &CrossingSelection) -> Result<CoveringPairZ> {
        if selection.n != self.n {
            return Err(Error::input(format!(
                "selection is for G_{}, graph is G_{}",
                selection.n, self.n
            )));
        }
        let mut z = self.c1().edges() | self.c2().edges();
        for i in selection.indices() {
            let (e, f) = self.crossing_pair(i);
            z = z.without(self.u_edge(i + 1)).without(self.v_edge(i)).with(e).with(f);
        }
        let comps = self.graph.components(z);
        let [a, b] = comps[..] else {
            return Err(Error::input(format!(
                "selection {:?} splits into {} pieces, not two cycles",
                selection.indices(),
                comps.len()
            )));
        };
        let anchor = match selection.indices().first() {
            Some(&i1) => self.e(i1 + 1),
            None => self.u_edge(1),
        };
        let (first, second) = if a.contains(anchor) { (a, b) } else { (b, a) };
        Ok(CoveringPairZ {
            selection: *selection,
            c1: Cycle::new(&self.graph, first)?,
            c2: Cycle::new(&self.graph, second)?,
            z,
        })
    }

    /// All `2^(n-1)` covering pairs, selections in ascending bitmask order.
    pub fn z_family(&self) -> ZFamily<'_> {
        ZFamily {
            gn: self,
            next: 0,
        }
    }

    /// Checks every covering-pair property, collecting a witness per failure.
    pub fn validate_covering_pair(&self, pair: &CoveringPairZ) -> CoveringReport {
        let g = &self.graph;
        let name = |e: EdgeId| g.edge(e).name.clone();
        let mut issues = Vec::new();
        let (c1, c2) = (pair.c1.edges(), pair.c2.edges());

        for (which, c) in [(1u8, c1), (2u8, c2)] {
            match Cycle::new(g, c) {
                Ok(cycle) => {
                    if let Some(ch) = g.chords(&cycle).min() {
                        issues.push(CoveringIssue::Chord {
                            which,
                            edge: name(ch),
                        });
                    }
                }
                Err(_) => issues.push(CoveringIssue::NotACycle { which }),
            }
            if c.len() != self.n {
                issues.push(CoveringIssue::WrongLength {
                    which,
                    length: c.len(),
                });
            }
        }

        let (v1, v2) = (g.vertices_of(c1), g.vertices_of(c2));
        if let Some(&shared) = v1.iter().find(|v| v2.contains(v)) {
            issues.push(CoveringIssue::SharedVertex {
                vertex: g.vertex_name(shared).to_string(),
            });
        }
        if let Some(missing) = (0..g.vertex_count()).find(|v| !v1.contains(v) && !v2.contains(v)) {
            issues.push(CoveringIssue::Uncovered {
                vertex: g.vertex_name(missing).to_string(),
            });
        }
        if pair.z != c1 | c2 {
            issues.push(CoveringIssue::UnionMismatch);
        }

        let crossing_edges = self.c3().edges() | self.c4().edges();
        let selected: EdgeSet = pair
            .selection
            .indices()
            .into_iter()
            .flat_map(|i| {
                let (e, f) = self.crossing_pair(i);
                [e, f]
            })
            .collect();
        if let Some(bad) = ((pair.z & crossing_edges) ^ selected).min() {
            issues.push(CoveringIssue::CrossingMismatch { edge: name(bad) });
        }

        // e_{i_1+1}, f_{i_2}, e_{i_3+1}, ... in C^1; the partners in C^2.
        for (k, i) in pair.selection.indices().into_iter().enumerate() {
            let (e, f) = self.crossing_pair(i);
            let (want1, want2) = if k % 2 == 0 { (e, f) } else { (f, e) };
            if !c1.contains(want1) {
                issues.push(CoveringIssue::Alternation {
                    edge: name(want1),
                    expected: 1,
                });
            }
            if !c2.contains(want2) {
                issues.push(CoveringIssue::Alternation {
                    edge: name(want2),
                    expected: 2,
                });
            }
        }

        CoveringReport { issues }
    }

    pub fn describe(&self, pair: &CoveringPairZ) -> ZRecord {
        ZRecord {
            selection: pair.selection.indices(),
            hex: pair.z.to_hex(),
            z: self.graph.names_of(pair.z),
            c1: self.graph.names_of(pair.c1.edges()),
            c2: self.graph.names_of(pair.c2.edges()),
        }
    }
}

/// An even-size set of crossing pairs, stored as a bitmask (bit `i-1` for
/// pair `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CrossingSelection {
    n: usize,
    mask: u64,
}

impl CrossingSelection {
    pub fn new(n: usize, indices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in indices {
            if !(1..=n).contains(&i) {
                return Err(Error::input(format!("crossing pair {i} is not in 1..={n}")));
            }
            if mask >> (i - 1) & 1 == 1 {
                return Err(Error::input(format!("crossing pair {i} selected twice")));
            }
            mask |= 1 << (i - 1);
        }
        CrossingSelection::from_mask(n, mask)
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n < 64 && mask >> n != 0 {
            return Err(Error::input(format!("mask {mask:#x} has bits beyond {n} pairs")));
        }
        if mask.count_ones() % 2 != 0 {
            return Err(Error::input(format!(
                "selection of {} crossing pairs is odd",
                mask.count_ones()
            )));
        }
        Ok(CrossingSelection { n, mask })
    }

    pub fn all(n: usize) -> Self {
        CrossingSelection {
            n,
            mask: (1u64 << n) - 1,
        }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Selected pair indices `i_1 < i_2 < ...`, 1-based.
    pub fn indices(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| self.mask >> (i - 1) & 1 == 1).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoveringPairZ {
    pub selection: CrossingSelection,
    pub c1: Cycle,
    pub c2: Cycle,
    pub z: EdgeSet,
}

/// Lazy walk over the even selections, ascending by mask.
pub struct ZFamily<'a> {
    gn: &'a GnGraph,
    next: u64,
}

impl Iterator for ZFamily<'_> {
    type Item = CoveringPairZ;

    fn next(&mut self) -> Option<CoveringPairZ> {
        let end = 1u64 << self.gn.n;
        while self.next < end {
            let mask = self.next;
            self.next += 1;
            if mask.count_ones() % 2 == 0 {
                let sel = CrossingSelection { n: self.gn.n, mask };
                return Some(
                    self.gn
                        .covering_pair(&sel)
                        .expect("every even selection yields a covering pair"),
                );
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum CoveringIssue {
    NotACycle { which: u8 },
    Chord { which: u8, edge: String },
    WrongLength { which: u8, length: usize },
    SharedVertex { vertex: String },
    Uncovered { vertex: String },
    UnionMismatch,
    CrossingMismatch { edge: String },
    Alternation { edge: String, expected: u8 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    pub issues: Vec<CoveringIssue>,
}

impl CoveringReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Name-level view of a covering pair for reports and the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZRecord {
    pub selection: Vec<usize>,
    pub hex: String,
    pub z: Vec<String>,
    pub c1: Vec<String>,
    pub c2: Vec<String>,
}

/// Every unordered pair of vertex-disjoint chordless cycles covering all
/// vertices of `graph`, by exhaustive search over its cycles.
pub fn covering_pairs_brute_force(graph: &Multigraph, limits: &Limits) -> Result<Vec<(Cycle, Cycle)>> {
    let cycles: Vec<Cycle> = graph
        .cycles_within(graph.all_edges(), limits)?
        .into_iter()
        .filter(|c| graph.is_chordless(c))
        .collect();
    let verts: Vec<Vec<VertexId>> = cycles.iter().map(|c| graph.vertices_of(c.edges())).collect();
    let mut out = Vec::new();
    for i in 0..cycles.len() {
        for j in i + 1..cycles.len() {
            let disjoint = verts[i].iter().all(|v| !verts[j].contains(v));
            if disjoint && verts[i].len() + verts[j].len() == graph.vertex_count() {
                out.push((cycles[i], cycles[j]));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_examples() {
        let g8 = build_gn(8).unwrap();
        assert_eq!((g8.graph.vertex_count(), g8.graph.edge_count()), (16, 32));
        let g4 = build_gn(4).unwrap();
        assert_eq!((g4.graph.vertex_count(), g4.graph.edge_count()), (8, 16));
        for v in 0..8 {
            assert_eq!(g4.graph.degree_in(v, g4.graph.all_edges()), 4);
        }
        assert!(build_gn(3).is_err());
        assert!(build_gn(2).is_err());
        assert!(build_gn(34).is_err());
    }

    #[test]
    fn subscripts_wrap_into_one_to_n() {
        assert_eq!(wrap_index(6, 7), 1);
        assert_eq!(wrap_index(6, 6), 6);
        assert_eq!(wrap_index(6, 0), 6);
        assert_eq!(wrap_index(6, -1), 5);
        let g6 = build_gn(6).unwrap();
        assert_eq!(g6.graph.edge(g6.f(5)).name, "f_5_1");
        assert_eq!(g6.graph.edge(g6.f(6)).name, "f_6_2");
        assert_eq!(g6.graph.edge(g6.u_edge(6)).name, "u_6_1");
    }

    #[test]
    fn named_cycles_match_their_vertex_sequences() {
        let g6 = build_gn(6).unwrap();
        let g = &g6.graph;
        let names = |c: Cycle| g.names_of(c.edges());
        assert_eq!(names(g6.c3()), ["e1", "e3", "e5", "f_1_3", "f_3_5", "f_5_1"]);
        assert_eq!(names(g6.c4()), ["e2", "e4", "e6", "f_2_4", "f_4_6", "f_6_2"]);
        for c in [g6.c1(), g6.c2(), g6.c3(), g6.c4()] {
            assert!(g.is_chordless(&c));
            assert_eq!(c.len(), 6);
        }
    }

    #[test]
    fn each_crossing_edge_is_in_exactly_one_pair() {
        for n in [4, 6, 8] {
            let gn = build_gn(n).unwrap();
            let mut seen = EdgeSet::EMPTY;
            for i in 1..=n {
                let (e, f) = gn.crossing_pair(i);
                let ends = |x: EdgeId| gn.graph.edge(x).ends;
                let (a, b) = (ends(e), ends(f));
                assert!(a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1);
                assert!(!seen.contains(e) && !seen.contains(f));
                seen = seen.with(e).with(f);
            }
            assert_eq!(seen, gn.c3().edges() | gn.c4().edges());
        }
    }

    #[test]
    fn empty_and_full_selections() {
        for n in [4, 6, 8] {
            let gn = build_gn(n).unwrap();
            let empty = gn.covering_pair(&gn.selection(&[]).unwrap()).unwrap();
            assert_eq!((empty.c1, empty.c2), (gn.c1(), gn.c2()));
            let full = gn.covering_pair(&CrossingSelection::all(n)).unwrap();
            // C^1 holds e_2 under the alternation rule, and e_2 lies on C4.
            assert_eq!((full.c1, full.c2), (gn.c4(), gn.c3()));
            assert_eq!(full.z, gn.c3().edges() | gn.c4().edges());
            assert!(gn.validate_covering_pair(&full).passed());
        }
    }

    #[test]
    fn two_pair_selection_on_g4() {
        let g4 = build_gn(4).unwrap();
        let p = g4.covering_pair(&g4.selection(&[1, 2]).unwrap()).unwrap();
        let report = g4.validate_covering_pair(&p);
        assert!(report.passed(), "{report:?}");
        assert_eq!((p.c1.len(), p.c2.len()), (4, 4));
        assert!(p.c1.edges().contains(g4.e(2)));
        assert!(p.c1.edges().contains(g4.f(2)));
    }

    #[test]
    fn odd_selections_are_rejected() {
        let g4 = build_gn(4).unwrap();
        assert!(g4.selection(&[1]).is_err());
        assert!(g4.selection(&[1, 1]).is_err());
        assert!(g4.selection(&[0, 1]).is_err());
        assert!(CrossingSelection::from_mask(4, 0b1_0001).is_err());
    }

    #[test]
    fn family_sizes_and_validity() {
        for (n, size) in [(4, 8), (6, 32), (8, 128)] {
            let gn = build_gn(n).unwrap();
            let fam: Vec<_> = gn.z_family().collect();
            assert_eq!(fam.len(), size);
            assert_eq!(gn.family_size(), size as u64);
            let mut zs: Vec<EdgeSet> = fam.iter().map(|p| p.z).collect();
            zs.sort();
            zs.dedup();
            assert_eq!(zs.len(), size);
            for p in &fam {
                assert!(gn.validate_covering_pair(p).passed());
            }
        }
    }

    #[test]
    fn fake_pairs_fail_with_witnesses() {
        let g4 = build_gn(4).unwrap();
        let fake = CoveringPairZ {
            selection: g4.selection(&[]).unwrap(),
            c1: g4.c1(),
            c2: g4.c3(),
            z: g4.c1().edges() | g4.c3().edges(),
        };
        let report = g4.validate_covering_pair(&fake);
        assert!(report.issues.contains(&CoveringIssue::SharedVertex {
            vertex: "u1".into()
        }));

        // A 4-cycle of G_6 is n-2 long and cannot cover with another 6-cycle.
        let g6 = build_gn(6).unwrap();
        let short: EdgeSet = [g6.e(2), g6.f(2), g6.u_edge(3), g6.u_edge(2)].into_iter().collect();
        let short = Cycle::new(&g6.graph, short).unwrap();
        let fake = CoveringPairZ {
            selection: g6.selection(&[]).unwrap(),
            c1: short,
            c2: g6.c2(),
            z: short.edges() | g6.c2().edges(),
        };
        let report = g6.validate_covering_pair(&fake);
        assert!(report
            .issues
            .iter()
            .any(|i| matches!(i, CoveringIssue::Uncovered { .. })));
        assert!(report
            .issues
            .contains(&CoveringIssue::WrongLength { which: 1, length: 4 }));
    }

    #[test]
    fn describe_uses_edge_names() {
        let g4 = build_gn(4).unwrap();
        let first = g4.z_family().next().unwrap();
        let rec = g4.describe(&first);
        assert_eq!(rec.selection, Vec::<usize>::new());
        assert_eq!(rec.hex, "ff");
        assert_eq!(rec.c1, ["u_1_2", "u_2_3", "u_3_4", "u_4_1"]);
    }
}
