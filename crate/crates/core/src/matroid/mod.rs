//! Rank oracles and the lift/frame matroids of a biased graph.
//!
//! Rank is the primitive: independence, closure, circuits and hyperplanes
//! are all derived from rank queries, so every predicate here works on any
//! [`RankOracle`], including the surgered ones.

mod axioms;
mod table;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

pub use axioms::{check_rank_axioms, AxiomMode, AxiomReport, AxiomViolation};
pub use table::{enumerate_facts, FactKind, MatroidFacts, RankTable};

use crate::biased::BiasedGraph;
use crate::edgeset::EdgeSet;
use crate::error::Result;
use crate::limits::Limits;
use crate::surgery::SurgeryRejection;

/// A matroid on `{0, .., ground_len - 1}` given by its rank function.
pub trait RankOracle: Sync {
    fn ground_len(&self) -> usize;

    fn rank(&self, set: EdgeSet) -> usize;

    fn ground(&self) -> EdgeSet {
        EdgeSet::full(self.ground_len())
    }

    fn full_rank(&self) -> usize {
        self.rank(self.ground())
    }
}

impl<T: RankOracle + ?Sized> RankOracle for &T {
    fn ground_len(&self) -> usize {
        (**self).ground_len()
    }
    fn rank(&self, set: EdgeSet) -> usize {
        (**self).rank(set)
    }
}

impl<T: RankOracle + ?Sized> RankOracle for Box<T> {
    fn ground_len(&self) -> usize {
        (**self).ground_len()
    }
    fn rank(&self, set: EdgeSet) -> usize {
        (**self).rank(set)
    }
}

impl<T: RankOracle + ?Sized + Send> RankOracle for Arc<T> {
    fn ground_len(&self) -> usize {
        (**self).ground_len()
    }
    fn rank(&self, set: EdgeSet) -> usize {
        (**self).rank(set)
    }
}

/// `|V(G[X])| - c(G[X]) + [some component of G[X] is unbalanced]`.
pub fn lm_rank(bg: &BiasedGraph, x: EdgeSet) -> usize {
    let comps = bg.graph().component_profiles(x);
    let vertices: usize = comps.iter().map(|c| c.vertices).sum();
    let unbalanced = comps
        .iter()
        .any(|c| !bg.component_balanced(c.edges, c.is_tree()));
    vertices - comps.len() + usize::from(unbalanced)
}

/// `|V(G[X])|` minus the number of balanced components of `G[X]`.
pub fn fm_rank(bg: &BiasedGraph, x: EdgeSet) -> usize {
    let comps = bg.graph().component_profiles(x);
    let vertices: usize = comps.iter().map(|c| c.vertices).sum();
    let balanced = comps
        .iter()
        .filter(|c| bg.component_balanced(c.edges, c.is_tree()))
        .count();
    vertices - balanced
}

/// Definitional lift independence: no balanced cycle and at most one cycle.
pub fn lm_independent(bg: &BiasedGraph, set: EdgeSet, limits: &Limits) -> Result<bool> {
    let cycles = bg.graph().cycles_within(set, limits)?;
    Ok(cycles.len() <= 1 && cycles.iter().all(|c| !bg.is_balanced_cycle(c.edges())))
}

/// Definitional frame independence: no balanced cycle and at most one cycle
/// per component.
pub fn fm_independent(bg: &BiasedGraph, set: EdgeSet, limits: &Limits) -> Result<bool> {
    let cycles = bg.graph().cycles_within(set, limits)?;
    if cycles.iter().any(|c| bg.is_balanced_cycle(c.edges())) {
        return Ok(false);
    }
    Ok(bg
        .graph()
        .components(set)
        .iter()
        .all(|&comp| cycles.iter().filter(|c| c.edges().is_subset(comp)).count() <= 1))
}

/// `LM(G, B)`.
#[derive(Clone, Debug)]
pub struct LiftMatroid {
    graph: Arc<BiasedGraph>,
}

impl LiftMatroid {
    pub fn new(graph: impl Into<Arc<BiasedGraph>>) -> Self {
        LiftMatroid {
            graph: graph.into(),
        }
    }

    pub fn biased_graph(&self) -> &BiasedGraph {
        &self.graph
    }
}

impl RankOracle for LiftMatroid {
    fn ground_len(&self) -> usize {
        self.graph.graph().edge_count()
    }
    fn rank(&self, set: EdgeSet) -> usize {
        lm_rank(&self.graph, set)
    }
}

/// `FM(G, B)`.
#[derive(Clone, Debug)]
pub struct FrameMatroid {
    graph: Arc<BiasedGraph>,
}

impl FrameMatroid {
    pub fn new(graph: impl Into<Arc<BiasedGraph>>) -> Self {
        FrameMatroid {
            graph: graph.into(),
        }
    }

    pub fn biased_graph(&self) -> &BiasedGraph {
        &self.graph
    }
}

impl RankOracle for FrameMatroid {
    fn ground_len(&self) -> usize {
        self.graph.graph().edge_count()
    }
    fn rank(&self, set: EdgeSet) -> usize {
        fm_rank(&self.graph, set)
    }
}

/// `U_{r,m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniformMatroid {
    pub rank: usize,
    pub size: usize,
}

impl UniformMatroid {
    pub fn new(rank: usize, size: usize) -> Self {
        assert!(rank <= size, "U_{{{rank},{size}}} needs rank <= size");
        UniformMatroid { rank, size }
    }
}

impl RankOracle for UniformMatroid {
    fn ground_len(&self) -> usize {
        self.size
    }
    fn rank(&self, set: EdgeSet) -> usize {
        set.len().min(self.rank)
    }
}

/// Counts rank queries passed through to the inner oracle.
pub struct CountingOracle<M> {
    inner: M,
    calls: AtomicU64,
}

impl<M: RankOracle> CountingOracle<M> {
    pub fn new(inner: M) -> Self {
        CountingOracle {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

impl<M: RankOracle> RankOracle for CountingOracle<M> {
    fn ground_len(&self) -> usize {
        self.inner.ground_len()
    }
    fn rank(&self, set: EdgeSet) -> usize {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.rank(set)
    }
}

pub fn is_independent<M: RankOracle + ?Sized>(m: &M, set: EdgeSet) -> bool {
    m.rank(set) == set.len()
}

/// `X ∪ {e : r(X + e) = r(X)}`.
pub fn closure<M: RankOracle + ?Sized>(m: &M, set: EdgeSet) -> EdgeSet {
    let r = m.rank(set);
    (m.ground() - set)
        .iter()
        .filter(|&e| m.rank(set.with(e)) == r)
        .fold(set, EdgeSet::with)
}

pub fn is_flat<M: RankOracle + ?Sized>(m: &M, set: EdgeSet) -> bool {
    let r = m.rank(set);
    (m.ground() - set).iter().all(|e| m.rank(set.with(e)) > r)
}

pub fn is_basis<M: RankOracle + ?Sized>(m: &M, set: EdgeSet) -> bool {
    is_independent(m, set) && set.len() == m.full_rank()
}

/// Minimal dependent: dependent, and dropping any one element leaves an
/// independent set.
pub fn is_circuit<M: RankOracle + ?Sized>(m: &M, set: EdgeSet) -> bool {
    let k = set.len();
    k > 0 && m.rank(set) == k - 1 && set.iter().all(|e| m.rank(set.without(e)) == k - 1)
}

pub fn is_hyperplane<M: RankOracle + ?Sized>(m: &M, set: EdgeSet) -> bool {
    let full = m.full_rank();
    full > 0 && m.rank(set) == full - 1 && is_flat(m, set)
}

/// Why `set` is not a circuit-hyperplane of `m`, or `None` if it is.
pub fn circuit_hyperplane_failure<M: RankOracle + ?Sized>(
    m: &M,
    set: EdgeSet,
) -> Option<SurgeryRejection> {
    if !is_circuit(m, set) {
        Some(SurgeryRejection::NotACircuit)
    } else if !is_hyperplane(m, set) {
        Some(SurgeryRejection::NotAHyperplane)
    } else {
        None
    }
}

pub fn is_circuit_hyperplane<M: RankOracle + ?Sized>(m: &M, set: EdgeSet) -> bool {
    circuit_hyperplane_failure(m, set).is_none()
}

/// Why `set` is not a free basis of `m`, or `None` if it is.
///
/// Only the maximal proper subsets `B - e` are tested: for a smaller proper
/// subset `Y`, `cl(Y)` lies in every `cl(B - e) = B - e` with `e ∉ Y`, whose
/// intersection is `Y`.
pub fn free_basis_failure<M: RankOracle + ?Sized>(m: &M, set: EdgeSet) -> Option<SurgeryRejection> {
    if !is_basis(m, set) {
        return Some(SurgeryRejection::NotABasis);
    }
    if set.iter().all(|e| is_flat(m, set.without(e))) {
        None
    } else {
        Some(SurgeryRejection::NotFree)
    }
}

pub fn is_free_basis<M: RankOracle + ?Sized>(m: &M, set: EdgeSet) -> bool {
    free_basis_failure(m, set).is_none()
}
