//! Biased graphs `(G, B)`: a multigraph with an explicit family of balanced
//! cycles obeying the theta property.

use std::collections::HashSet;

use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::{Cycle, GraphFile, Multigraph};
use crate::limits::Limits;

#[derive(Clone, Debug)]
pub struct BiasedGraph {
    graph: Multigraph,
    balanced: Vec<Cycle>,
    lookup: HashSet<EdgeSet>,
}

/// A theta subgraph together with its three cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theta {
    pub edges: EdgeSet,
    pub cycles: [Cycle; 3],
}

impl BiasedGraph {
    /// `(G, ∅)`: every cycle unbalanced.
    pub fn unbiased(graph: Multigraph) -> Self {
        BiasedGraph {
            graph,
            balanced: Vec::new(),
            lookup: HashSet::new(),
        }
    }

    /// Validates that every member of `balanced` is a cycle of `graph` and
    /// that the family has the theta property.
    pub fn new(graph: Multigraph, balanced: Vec<EdgeSet>, limits: &Limits) -> Result<Self> {
        let mut cycles = balanced
            .into_iter()
            .map(|c| Cycle::new(&graph, c))
            .collect::<Result<Vec<_>>>()?;
        cycles.sort();
        cycles.dedup();
        if !check_theta_property(&graph, &cycles, limits)? {
            return Err(Error::input(
                "balanced cycles violate the theta property: some theta contains exactly two of them",
            ));
        }
        let lookup = cycles.iter().map(|c| c.edges()).collect();
        Ok(BiasedGraph {
            graph,
            balanced: cycles,
            lookup,
        })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn balanced(&self) -> &[Cycle] {
        &self.balanced
    }

    pub fn is_unbiased(&self) -> bool {
        self.balanced.is_empty()
    }

    pub fn is_balanced_cycle(&self, c: EdgeSet) -> bool {
        self.lookup.contains(&c)
    }

    /// True iff every cycle of the connected subgraph `G[A]` is balanced.
    /// With `B = ∅` this is exactly "`G[A]` is a tree".
    pub fn is_balanced_component(&self, a: EdgeSet) -> Result<bool> {
        self.graph.check(a)?;
        let comps = self.graph.component_profiles(a);
        match comps.as_slice() {
            [] => Ok(true),
            [comp] => Ok(self.component_balanced(comp.edges, comp.is_tree())),
            _ => Err(Error::Disconnected),
        }
    }

    /// Balance test for a component already known to be connected.
    pub(crate) fn component_balanced(&self, edges: EdgeSet, is_tree: bool) -> bool {
        if is_tree {
            return true;
        }
        if self.balanced.is_empty() {
            return false;
        }
        // Construction admitted |E| under the cycle cap.
        self.graph
            .cycles_within(edges, &Limits::unbounded_cycles())
            .expect("edge set validated at construction")
            .iter()
            .all(|c| self.lookup.contains(&c.edges()))
    }

    pub fn to_file(&self) -> GraphFile {
        let mut file = self.graph.to_file();
        file.balanced = Some(
            self.balanced
                .iter()
                .map(|c| c.edges().iter().collect())
                .collect(),
        );
        file
    }

    pub fn from_file(file: &GraphFile, limits: &Limits) -> Result<Self> {
        let graph = Multigraph::from_file(file)?;
        let balanced = file
            .balanced
            .iter()
            .flatten()
            .map(|ids| {
                let set: EdgeSet = ids.iter().copied().collect();
                set.check_within(graph.edge_count()).map(|_| set)
            })
            .collect::<Result<Vec<_>>>()?;
        if balanced.is_empty() {
            Ok(BiasedGraph::unbiased(graph))
        } else {
            BiasedGraph::new(graph, balanced, limits)
        }
    }

    pub fn from_json(text: &str, limits: &Limits) -> Result<Self> {
        BiasedGraph::from_file(&serde_json::from_str(text)?, limits)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("graph file serializes")
    }
}

/// Every theta subgraph of `graph`, found as unions of two edge-sharing
/// cycles. Sorted by edge set; each theta reported once.
pub fn thetas(graph: &Multigraph, limits: &Limits) -> Result<Vec<Theta>> {
    let cycles = graph.cycles_within(graph.all_edges(), limits)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, a) in cycles.iter().enumerate() {
        for b in &cycles[i + 1..] {
            let (ea, eb) = (a.edges(), b.edges());
            if ea.is_disjoint(eb) {
                continue;
            }
            let union = ea | eb;
            if !graph.is_theta(union) || !seen.insert(union) {
                continue;
            }
            let mut three = [*a, *b, Cycle::new(graph, ea ^ eb)?];
            three.sort();
            out.push(Theta {
                edges: union,
                cycles: three,
            });
        }
    }
    out.sort_by_key(|t| t.edges);
    Ok(out)
}

/// True iff no theta subgraph of `graph` contains exactly two members of
/// `balanced`.
pub fn check_theta_property(graph: &Multigraph, balanced: &[Cycle], limits: &Limits) -> Result<bool> {
    for c in balanced {
        Cycle::new(graph, c.edges())?;
    }
    if balanced.is_empty() {
        return Ok(true);
    }
    limits.check_cycle_edges(graph.edge_count())?;
    let members: HashSet<EdgeSet> = balanced.iter().map(|c| c.edges()).collect();
    Ok(thetas(graph, limits)?.iter().all(|t| {
        t.cycles
            .iter()
            .filter(|c| members.contains(&c.edges()))
            .count()
            != 2
    }))
}
