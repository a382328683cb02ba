use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RankOracle;
use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// The full rank function, indexed by subset bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    ground_len: usize,
    ranks: Vec<u8>,
}

impl RankTable {
    /// Queries `m` on all `2^m` subsets, in parallel.
    pub fn tabulate<M: RankOracle + ?Sized>(m: &M, limits: &Limits) -> Result<Self> {
        let len = m.ground_len();
        limits.check_subsets("rank tabulation", len, 1)?;
        Ok(RankTable::from_fn(len, |x| m.rank(x)))
    }

    /// Builds a table from an arbitrary function; no cap is applied.
    pub fn from_fn(ground_len: usize, f: impl Fn(EdgeSet) -> usize + Sync) -> Self {
        assert!(ground_len < 32, "rank table over {ground_len} elements is not addressable");
        let ranks = (0..1u64 << ground_len)
            .into_par_iter()
            .map(|bits| {
                let r = f(EdgeSet::from_bits(bits as u128));
                u8::try_from(r).expect("rank fits in u8")
            })
            .collect();
        RankTable { ground_len, ranks }
    }

    pub fn get(&self, set: EdgeSet) -> usize {
        self.ranks[set.bits() as usize] as usize
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Subsets on which the two tables disagree, ascending by bitmask.
    pub fn differences(&self, other: &RankTable) -> Vec<EdgeSet> {
        assert_eq!(self.ground_len, other.ground_len);
        self.ranks
            .par_iter()
            .zip(other.ranks.par_iter())
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| EdgeSet::from_bits(i as u128))
            .collect()
    }

    fn scan(&self, keep: impl Fn(EdgeSet) -> bool + Sync) -> Vec<EdgeSet> {
        (0..self.ranks.len() as u64)
            .into_par_iter()
            .map(|bits| EdgeSet::from_bits(bits as u128))
            .filter(|&x| keep(x))
            .collect()
    }

    fn is_closed(&self, x: EdgeSet) -> bool {
        let r = self.get(x);
        (self.ground() - x).iter().all(|e| self.get(x.with(e)) > r)
    }

    fn facts(&self, kind: FactKind) -> Vec<EdgeSet> {
        let full = self.full_rank();
        match kind {
            FactKind::Bases => self.scan(|x| x.len() == full && self.get(x) == full),
            FactKind::Circuits => self.scan(|x| {
                let k = x.len();
                k > 0 && self.get(x) == k - 1 && x.iter().all(|e| self.get(x.without(e)) == k - 1)
            }),
            FactKind::Hyperplanes => {
                if full == 0 {
                    return Vec::new();
                }
                self.scan(|x| self.get(x) == full - 1 && self.is_closed(x))
            }
            FactKind::Cocircuits => {
                let ground = self.ground();
                let mut out: Vec<EdgeSet> = self
                    .facts(FactKind::Hyperplanes)
                    .into_iter()
                    .map(|h| ground - h)
                    .collect();
                out.sort_by_key(|c| c.bits());
                out
            }
        }
    }
}

impl RankOracle for RankTable {
    fn ground_len(&self) -> usize {
        self.ground_len
    }
    fn rank(&self, set: EdgeSet) -> usize {
        self.get(set)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactKind {
    Circuits,
    Hyperplanes,
    Cocircuits,
    Bases,
}

impl std::str::FromStr for FactKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circuits" => Ok(FactKind::Circuits),
            "hyperplanes" => Ok(FactKind::Hyperplanes),
            "cocircuits" => Ok(FactKind::Cocircuits),
            "bases" => Ok(FactKind::Bases),
            other => Err(Error::input(format!("unknown fact kind `{other}`"))),
        }
    }
}

/// Exhaustive list of circuits, hyperplanes, cocircuits or bases, ordered
/// by subset bitmask. Fails if `2^|E|` exceeds `limits.max_subsets`.
pub fn enumerate_facts<M: RankOracle + ?Sized>(
    m: &M,
    kind: FactKind,
    limits: &Limits,
) -> Result<Vec<EdgeSet>> {
    Ok(RankTable::tabulate(m, limits)?.facts(kind))
}

/// Lazily computed fact lists over one oracle, sharing a single rank table.
pub struct MatroidFacts<M> {
    oracle: M,
    limits: Limits,
    table: OnceLock<RankTable>,
    circuits: OnceLock<Vec<EdgeSet>>,
    hyperplanes: OnceLock<Vec<EdgeSet>>,
    cocircuits: OnceLock<Vec<EdgeSet>>,
    bases: OnceLock<Vec<EdgeSet>>,
}

impl<M: RankOracle> MatroidFacts<M> {
    pub fn new(oracle: M, limits: Limits) -> Self {
        MatroidFacts {
            oracle,
            limits,
            table: OnceLock::new(),
            circuits: OnceLock::new(),
            hyperplanes: OnceLock::new(),
            cocircuits: OnceLock::new(),
            bases: OnceLock::new(),
        }
    }

    pub fn oracle(&self) -> &M {
        &self.oracle
    }

    pub fn table(&self) -> Result<&RankTable> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let t = RankTable::tabulate(&self.oracle, &self.limits)?;
        Ok(self.table.get_or_init(|| t))
    }

    pub fn get(&self, kind: FactKind) -> Result<&[EdgeSet]> {
        let cell = match kind {
            FactKind::Circuits => &self.circuits,
            FactKind::Hyperplanes => &self.hyperplanes,
            FactKind::Cocircuits => &self.cocircuits,
            FactKind::Bases => &self.bases,
        };
        if let Some(v) = cell.get() {
            return Ok(v);
        }
        let v = self.table()?.facts(kind);
        Ok(cell.get_or_init(|| v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biased::BiasedGraph;
    use crate::gn::build_gn;
    use crate::matroid::{fm_independent, FrameMatroid, LiftMatroid, UniformMatroid};

    #[test]
    fn parallel_pair_has_one_circuit() {
        let u = UniformMatroid::new(1, 2);
        let lim = Limits::default();
        assert_eq!(
            enumerate_facts(&u, FactKind::Circuits, &lim).unwrap(),
            vec![EdgeSet::from_iter([0, 1])]
        );
        assert_eq!(
            enumerate_facts(&u, FactKind::Hyperplanes, &lim).unwrap(),
            vec![EdgeSet::EMPTY]
        );
        assert_eq!(
            enumerate_facts(&u, FactKind::Cocircuits, &lim).unwrap(),
            vec![EdgeSet::from_iter([0, 1])]
        );
    }

    #[test]
    fn lift_cocircuits_have_at_least_four_elements() {
        let g4 = build_gn(4).unwrap();
        let lm = LiftMatroid::new(BiasedGraph::unbiased(g4.graph.clone()));
        let co = enumerate_facts(&lm, FactKind::Cocircuits, &Limits::default()).unwrap();
        assert!(!co.is_empty());
        assert!(co.iter().all(|c| c.len() >= 4));
    }

    #[test]
    fn frame_bases_match_maximal_independent_sets() {
        let g4 = build_gn(4).unwrap();
        let bg = BiasedGraph::unbiased(g4.graph.clone());
        let lim = Limits::default();
        let fm = FrameMatroid::new(bg.clone());
        let bases = enumerate_facts(&fm, FactKind::Bases, &lim).unwrap();

        let all = g4.graph.all_edges();
        let indep: Vec<bool> = (0..1u32 << 16)
            .map(|b| fm_independent(&bg, EdgeSet::from_bits(b as u128), &lim).unwrap())
            .collect();
        let maximal: Vec<EdgeSet> = (0..1u32 << 16)
            .map(|b| EdgeSet::from_bits(b as u128))
            .filter(|&x| {
                indep[x.bits() as usize]
                    && (all - x).iter().all(|e| !indep[x.with(e).bits() as usize])
            })
            .collect();
        assert_eq!(bases, maximal);
    }

    #[test]
    fn caps_are_enforced() {
        let u = UniformMatroid::new(3, 25);
        let err = enumerate_facts(&u, FactKind::Bases, &Limits::default()).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn lazy_facts_share_a_table() {
        let facts = MatroidFacts::new(UniformMatroid::new(2, 4), Limits::default());
        assert_eq!(facts.get(FactKind::Bases).unwrap().len(), 6);
        assert_eq!(facts.get(FactKind::Circuits).unwrap().len(), 4);
        assert_eq!(facts.get(FactKind::Hyperplanes).unwrap().len(), 4);
        assert_eq!(facts.table().unwrap().len(), 16);
    }

    #[test]
    fn fact_kind_parses() {
        assert_eq!("cocircuits".parse::<FactKind>().unwrap(), FactKind::Cocircuits);
        assert!("flats".parse::<FactKind>().is_err());
    }
}
