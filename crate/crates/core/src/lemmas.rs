//! Machine checks of the structural facts about `G_n` and its surgered
//! matroids, one entry point per fact. Each check returns a report with
//! witnesses for anything that failed.

use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::biased::BiasedGraph;
use crate::edgeset::{EdgeId, EdgeSet};
use crate::error::{Error, Result};
use crate::framework::is_framework;
use crate::gn::{CoveringPairZ, GnGraph};
use crate::limits::Limits;
use crate::matroid::{
    check_rank_axioms, enumerate_facts, is_circuit, is_circuit_hyperplane, is_free_basis, AxiomMode,
    FactKind, FrameMatroid, LiftMatroid, RankOracle, RankTable,
};
use crate::surgery::{relax, tighten, verify_surgery_inverse, Surgered, SurgeryKind};

/// Failure witnesses kept per report.
const MAX_FAILURES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaId {
    Easy1,
    Easy2,
    Structure,
    #[serde(rename = "gh-2")]
    Gh2,
    CocircuitSize,
    RankPreservation,
    Axioms,
    Inverse,
}

impl LemmaId {
    pub const ALL: [LemmaId; 8] = [
        LemmaId::Easy1,
        LemmaId::Easy2,
        LemmaId::Structure,
        LemmaId::Gh2,
        LemmaId::CocircuitSize,
        LemmaId::RankPreservation,
        LemmaId::Axioms,
        LemmaId::Inverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::Easy1 => "easy1",
            LemmaId::Easy2 => "easy2",
            LemmaId::Structure => "structure",
            LemmaId::Gh2 => "gh-2",
            LemmaId::CocircuitSize => "cocircuit-size",
            LemmaId::RankPreservation => "rank-preservation",
            LemmaId::Axioms => "axioms",
            LemmaId::Inverse => "inverse",
        }
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::input(format!("unknown lemma id `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub n: usize,
    pub passed: bool,
    pub sites_checked: usize,
    pub details: Value,
    pub failures: Vec<Value>,
}

struct Failures(Vec<Value>, usize);

impl Failures {
    fn new() -> Self {
        Failures(Vec::new(), 0)
    }

    fn push(&mut self, v: Value) {
        self.1 += 1;
        if self.0.len() < MAX_FAILURES {
            self.0.push(v);
        }
    }

    fn is_empty(&self) -> bool {
        self.1 == 0
    }
}

/// The honest lift and frame matroids of `(G_n, ∅)`, sharing one graph.
pub fn base_matroids(gn: &GnGraph) -> (LiftMatroid, FrameMatroid) {
    let bg = Arc::new(BiasedGraph::unbiased(gn.graph.clone()));
    (LiftMatroid::new(bg.clone()), FrameMatroid::new(bg))
}

pub fn verify_lemma(id: LemmaId, gn: &GnGraph, limits: &Limits) -> Result<LemmaReport> {
    match id {
        LemmaId::Easy1 => easy1(gn, limits),
        LemmaId::Easy2 => easy2(gn, limits),
        LemmaId::Structure => structure(gn, limits, false),
        LemmaId::Gh2 => structure(gn, limits, true),
        LemmaId::CocircuitSize => cocircuit_size(gn, limits),
        LemmaId::RankPreservation => rank_preservation(gn, limits),
        LemmaId::Axioms => axioms(gn, limits),
        LemmaId::Inverse => inverse(gn, limits),
    }
}

fn report(id: LemmaId, gn: &GnGraph, sites: usize, details: Value, failures: Failures) -> LemmaReport {
    LemmaReport {
        lemma: id,
        n: gn.n(),
        passed: failures.is_empty(),
        sites_checked: sites,
        details,
        failures: failures.0,
    }
}

fn site_json(gn: &GnGraph, p: &CoveringPairZ) -> Value {
    json!({ "selection": p.selection.indices(), "z": gn.graph.names_of(p.z) })
}

fn family_cap(gn: &GnGraph, limits: &Limits, what: &'static str) -> Result<()> {
    if gn.family_size() > limits.max_subsets {
        return Err(Error::Resource {
            what,
            needed: gn.family_size() as u128,
            cap: limits.max_subsets as u128,
        });
    }
    Ok(())
}

/// Each family member is a circuit-hyperplane of `LM` and a free basis of
/// `FM`. Uses rank tables and all proper subsets of `Z` when `2^|E|` fits
/// the cap twice over, the polynomial rank predicates otherwise.
fn easy1(gn: &GnGraph, limits: &Limits) -> Result<LemmaReport> {
    family_cap(gn, limits, "easy1 site scan")?;
    let (lm, fm) = base_matroids(gn);
    let exhaustive = limits.check_subsets("easy1", 4 * gn.n(), 2).is_ok();
    let tables = if exhaustive {
        Some((RankTable::tabulate(&lm, limits)?, RankTable::tabulate(&fm, limits)?))
    } else {
        None
    };
    let mut failures = Failures::new();
    let mut sites = 0;
    for p in gn.z_family() {
        sites += 1;
        let (ch, free) = match &tables {
            Some((lt, ft)) => (
                table_circuit_hyperplane(lt, p.z),
                table_free_basis(ft, p.z),
            ),
            None => (is_circuit_hyperplane(&lm, p.z), is_free_basis(&fm, p.z)),
        };
        if !ch || !free {
            failures.push(json!({
                "site": site_json(gn, &p),
                "lift_circuit_hyperplane": ch,
                "frame_free_basis": free,
            }));
        }
    }
    let mode = if exhaustive { "exhaustive" } else { "rank-predicates" };
    Ok(report(LemmaId::Easy1, gn, sites, json!({ "mode": mode }), failures))
}

/// Circuit-hyperplane test straight from the table: every proper subset
/// independent, `Z` dependent, rank `r - 1`, and closed.
pub fn table_circuit_hyperplane(t: &RankTable, z: EdgeSet) -> bool {
    let full = t.full_rank();
    let proper_independent = z.subsets().filter(|&y| y != z).all(|y| t.get(y) == y.len());
    let closed = (t.ground() - z).iter().all(|e| t.get(z.with(e)) > t.get(z));
    proper_independent && t.get(z) < z.len() && t.get(z) + 1 == full && closed
}

/// Free-basis test straight from the table: `Z` a basis and every proper
/// subset (not just the maximal ones) closed.
pub fn table_free_basis(t: &RankTable, z: EdgeSet) -> bool {
    let basis = t.get(z) == z.len() && z.len() == t.full_rank();
    basis
        && z.subsets().filter(|&y| y != z).all(|y| {
            let r = t.get(y);
            (t.ground() - y).iter().all(|e| t.get(y.with(e)) > r)
        })
}

/// `G_n` is a framework for `LM`, `FM`, and both surgered matroids at every
/// site.
fn easy2(gn: &GnGraph, limits: &Limits) -> Result<LemmaReport> {
    family_cap(gn, limits, "easy2 site scan")?;
    let (lm, fm) = base_matroids(gn);
    let mut failures = Failures::new();
    let mut queries = 0u64;
    for (name, m) in [("lift", &lm as &dyn RankOracle), ("frame", &fm)] {
        let r = is_framework(&gn.graph, m);
        queries += r.rank_queries;
        if !r.passed() {
            failures.push(json!({ "matroid": name, "report": r }));
        }
    }
    let mut sites = 0;
    for p in gn.z_family() {
        sites += 1;
        let relaxed = Surgered::unchecked(&lm, p.z, SurgeryKind::Relaxed);
        let tightened = Surgered::unchecked(&fm, p.z, SurgeryKind::Tightened);
        for (name, m) in [("lift-relaxed", &relaxed as &dyn RankOracle), ("frame-tightened", &tightened)] {
            let r = is_framework(&gn.graph, m);
            queries += r.rank_queries;
            if !r.passed() {
                failures.push(json!({ "matroid": name, "site": site_json(gn, &p), "report": r }));
            }
        }
    }
    Ok(report(
        LemmaId::Easy2,
        gn,
        sites,
        json!({ "rank_queries": queries }),
        failures,
    ))
}

/// Circuits `C` of `m` with `{g, h} ⊆ C ⊆ Z ∪ {g, h}`, by brute force over
/// the subsets of `Z`.
pub fn circuits_through_pair<M: RankOracle + ?Sized>(m: &M, z: EdgeSet, g: EdgeId, h: EdgeId) -> Vec<EdgeSet> {
    z.subsets()
        .map(|y| y.with(g).with(h))
        .filter(|&c| is_circuit(m, c))
        .collect()
}

fn is_partition(parts: &[EdgeSet], z: EdgeSet) -> bool {
    let total: usize = parts.iter().map(|p| p.len()).sum();
    let union = parts.iter().fold(EdgeSet::EMPTY, |a, &b| a | b);
    union == z && total == z.len()
}

/// Three parts with `|P1| = 2` and `|P1 ∪ P2| = |P3| = n`.
pub fn is_three_part_pattern(parts: &[EdgeSet], z: EdgeSet, n: usize) -> bool {
    if parts.len() != 3 || !is_partition(parts, z) {
        return false;
    }
    let mut sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    sizes.sort_unstable();
    let mut want = vec![2, n - 2, n];
    want.sort_unstable();
    sizes == want
}

/// Four parts splitting into two pairs with `|P1 ∪ P2| = |P3 ∪ P4| = n`.
pub fn is_four_part_pattern(parts: &[EdgeSet], z: EdgeSet, n: usize) -> bool {
    if parts.len() != 4 || !is_partition(parts, z) {
        return false;
    }
    let s: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)]
        .iter()
        .any(|&(a, b, c, d)| s[a] + s[b] == n && s[c] + s[d] == n)
}

/// Per pair `{g, h}` outside `Z`: the circuits through it inside
/// `Z ∪ {g, h}` for both surgered matroids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairStructure {
    pub g: EdgeId,
    pub h: EdgeId,
    pub adjacent: bool,
    /// `Z - C` for each circuit `C` of the relaxed lift matroid.
    pub lift_parts: Vec<EdgeSet>,
    /// `Z - C` for each circuit `C` of the tightened frame matroid.
    pub frame_parts: Vec<EdgeSet>,
}

impl PairStructure {
    pub fn matches_lemma(&self, z: EdgeSet, n: usize) -> bool {
        let pattern = |parts: &[EdgeSet]| {
            if self.adjacent {
                is_three_part_pattern(parts, z, n)
            } else {
                is_four_part_pattern(parts, z, n)
            }
        };
        pattern(&self.lift_parts) && pattern(&self.frame_parts)
    }

    pub fn is_gh2_pair(&self, z: EdgeSet, n: usize) -> bool {
        is_three_part_pattern(&self.lift_parts, z, n) && is_three_part_pattern(&self.frame_parts, z, n)
    }
}

pub fn pair_structures(gn: &GnGraph, z: EdgeSet) -> Vec<PairStructure> {
    let (lm, fm) = base_matroids(gn);
    let relaxed = Surgered::unchecked(&lm, z, SurgeryKind::Relaxed);
    let tightened = Surgered::unchecked(&fm, z, SurgeryKind::Tightened);
    let outside: Vec<EdgeId> = (gn.graph.all_edges() - z).iter().collect();
    let mut out = Vec::new();
    for (i, &g) in outside.iter().enumerate() {
        for &h in &outside[i + 1..] {
            let (a, b) = (gn.graph.edge(g).ends, gn.graph.edge(h).ends);
            let adjacent = a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
            let parts = |m: &dyn RankOracle| -> Vec<EdgeSet> {
                circuits_through_pair(m, z, g, h).into_iter().map(|c| z - c).collect()
            };
            out.push(PairStructure {
                g,
                h,
                adjacent,
                lift_parts: parts(&relaxed),
                frame_parts: parts(&tightened),
            });
        }
    }
    out
}

fn structure(gn: &GnGraph, limits: &Limits, count_only: bool) -> Result<LemmaReport> {
    let n = gn.n();
    let pairs = (2 * n * (2 * n - 1) / 2) as u64;
    limits.check_subsets("circuit scan in Z + {g, h}", 2 * n, pairs * gn.family_size())?;
    let id = if count_only { LemmaId::Gh2 } else { LemmaId::Structure };
    let mut failures = Failures::new();
    let mut sites = 0;
    let mut size_patterns = std::collections::BTreeSet::new();
    let mut gh2_counts = Vec::new();
    let sites_and_pairs: Vec<(CoveringPairZ, Vec<PairStructure>)> = gn
        .z_family()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|p| {
            let structs = pair_structures(gn, p.z);
            (p, structs)
        })
        .collect();
    for (p, structs) in sites_and_pairs {
        sites += 1;
        let gh2 = structs.iter().filter(|s| s.is_gh2_pair(p.z, n)).count();
        gh2_counts.push(gh2);
        if count_only {
            if gh2 != 2 * n {
                failures.push(json!({ "site": site_json(gn, &p), "pairs": gh2, "expected": 2 * n }));
            }
            continue;
        }
        for s in &structs {
            let mut sizes: Vec<usize> = s.lift_parts.iter().map(|x| x.len()).collect();
            sizes.sort_unstable();
            size_patterns.insert((s.adjacent, sizes));
            if !s.matches_lemma(p.z, n) || s.lift_parts != s.frame_parts {
                failures.push(json!({
                    "site": site_json(gn, &p),
                    "g": gn.graph.edge(s.g).name,
                    "h": gn.graph.edge(s.h).name,
                    "adjacent": s.adjacent,
                    "lift_parts": s.lift_parts.iter().map(|x| gn.graph.names_of(*x)).collect::<Vec<_>>(),
                    "frame_parts": s.frame_parts.iter().map(|x| gn.graph.names_of(*x)).collect::<Vec<_>>(),
                }));
            }
        }
    }
    let details = if count_only {
        json!({ "expected": 2 * n, "pairs_per_site": gh2_counts })
    } else {
        json!({
            "part_sizes": size_patterns
                .into_iter()
                .map(|(adj, sizes)| json!({ "adjacent": adj, "sizes": sizes }))
                .collect::<Vec<_>>(),
        })
    };
    Ok(report(id, gn, sites, details, failures))
}

/// Every cocircuit of both surgered matroids has at least four elements.
fn cocircuit_size(gn: &GnGraph, limits: &Limits) -> Result<LemmaReport> {
    limits.check_subsets("cocircuit enumeration", 4 * gn.n(), 2 * gn.family_size())?;
    let (lm, fm) = base_matroids(gn);
    let mut failures = Failures::new();
    let mut smallest = usize::MAX;
    let mut sites = 0;
    for p in gn.z_family() {
        sites += 1;
        let relaxed = Surgered::unchecked(&lm, p.z, SurgeryKind::Relaxed);
        let tightened = Surgered::unchecked(&fm, p.z, SurgeryKind::Tightened);
        for (name, m) in [("lift-relaxed", &relaxed as &dyn RankOracle), ("frame-tightened", &tightened)] {
            for c in enumerate_facts(m, FactKind::Cocircuits, limits)? {
                smallest = smallest.min(c.len());
                if c.len() < 4 {
                    failures.push(json!({
                        "matroid": name,
                        "site": site_json(gn, &p),
                        "cocircuit": gn.graph.names_of(c),
                    }));
                }
            }
        }
    }
    Ok(report(
        LemmaId::CocircuitSize,
        gn,
        sites,
        json!({ "smallest_cocircuit": smallest }),
        failures,
    ))
}

/// The surgered rank function differs from the base one exactly at `Z`, by
/// `+1` (relaxed) or `-1` (tightened).
fn rank_preservation(gn: &GnGraph, limits: &Limits) -> Result<LemmaReport> {
    limits.check_subsets("rank-preservation scan", 4 * gn.n(), gn.family_size())?;
    let (lm, fm) = base_matroids(gn);
    let (lt, ft) = (RankTable::tabulate(&lm, limits)?, RankTable::tabulate(&fm, limits)?);
    let mut failures = Failures::new();
    let mut sites = 0;
    for p in gn.z_family() {
        sites += 1;
        let relaxed = RankTable::tabulate(&relax(&lm, p.z)?, limits)?;
        let tightened = RankTable::tabulate(&tighten(&fm, p.z)?, limits)?;
        let checks = [
            ("lift-relaxed", &lt, &relaxed, 1i64),
            ("frame-tightened", &ft, &tightened, -1),
        ];
        for (name, base, surg, delta) in checks {
            let diff = base.differences(surg);
            let step = surg.get(p.z) as i64 - base.get(p.z) as i64;
            if diff != [p.z] || step != delta {
                failures.push(json!({
                    "matroid": name,
                    "site": site_json(gn, &p),
                    "differing_subsets": diff.len(),
                    "step_at_site": step,
                }));
            }
        }
    }
    Ok(report(
        LemmaId::RankPreservation,
        gn,
        sites,
        json!({ "subsets_per_site": 1u64 << (4 * gn.n()) }),
        failures,
    ))
}

/// Exhaustive rank axioms for `LM`, `FM`, and every surgered matroid.
fn axioms(gn: &GnGraph, limits: &Limits) -> Result<LemmaReport> {
    limits.check_axioms(4 * gn.n())?;
    let (lm, fm) = base_matroids(gn);
    let mut failures = Failures::new();
    let mut checks = 0u64;
    let mut run = |name: &str, site: Option<&CoveringPairZ>, m: &dyn RankOracle| -> Result<()> {
        let r = check_rank_axioms(m, AxiomMode::Exhaustive, limits)?;
        checks += r.checks;
        if !r.passed() {
            failures.push(json!({
                "matroid": name,
                "site": site.map(|p| site_json(gn, p)),
                "violations": r.violation_count,
                "first": r.violations.first(),
            }));
        }
        Ok(())
    };
    run("lift", None, &lm)?;
    run("frame", None, &fm)?;
    let mut sites = 0;
    for p in gn.z_family() {
        sites += 1;
        run("lift-relaxed", Some(&p), &relax(&lm, p.z)?)?;
        run("frame-tightened", Some(&p), &tighten(&fm, p.z)?)?;
    }
    Ok(report(LemmaId::Axioms, gn, sites, json!({ "checks": checks }), failures))
}

/// Relax-then-tighten and tighten-then-relax reproduce the base matroids.
fn inverse(gn: &GnGraph, limits: &Limits) -> Result<LemmaReport> {
    limits.check_subsets("surgery round trip", 4 * gn.n(), 2 * gn.family_size())?;
    let (lm, fm) = base_matroids(gn);
    let mut failures = Failures::new();
    let mut sites = 0;
    for p in gn.z_family() {
        sites += 1;
        for (name, m) in [("lift", &lm as &dyn RankOracle), ("frame", &fm)] {
            if !verify_surgery_inverse(&m, p.z, limits)? {
                failures.push(json!({ "matroid": name, "site": site_json(gn, &p) }));
            }
        }
    }
    Ok(report(LemmaId::Inverse, gn, sites, json!({}), failures))
}
