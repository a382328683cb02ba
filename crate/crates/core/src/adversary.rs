//! The rank-query adversary on `G_n`.
//!
//! The honest matroid is `FM(G_n, ∅)` (frame target) or `LM(G_n, ∅)` (lift
//! target). Each of the `2^(n-1)` covering-pair sets `Z` yields a surgered
//! matroid, tightened or relaxed at `Z`, whose rank function differs from
//! the honest one only at `Z`. Any query family that misses some `Z` is
//! answered identically by the honest matroid and that alternative.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::biased::BiasedGraph;
use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::gn::{CoveringPairZ, GnGraph, ZRecord};
use crate::matroid::{FrameMatroid, LiftMatroid, RankOracle};
use crate::surgery::{relax, tighten, Surgered};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Frame,
    Lift,
}

impl FromStr for TargetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frame" => Ok(TargetKind::Frame),
            "lift" => Ok(TargetKind::Lift),
            other => Err(Error::input(format!("unknown target kind `{other}`"))),
        }
    }
}

/// `LM(G_n, ∅)` or `FM(G_n, ∅)`.
#[derive(Clone, Debug)]
pub enum HonestMatroid {
    Lift(LiftMatroid),
    Frame(FrameMatroid),
}

impl HonestMatroid {
    pub fn new(gn: &GnGraph, kind: TargetKind) -> Self {
        let bg = BiasedGraph::unbiased(gn.graph.clone());
        match kind {
            TargetKind::Lift => HonestMatroid::Lift(LiftMatroid::new(bg)),
            TargetKind::Frame => HonestMatroid::Frame(FrameMatroid::new(bg)),
        }
    }
}

impl RankOracle for HonestMatroid {
    fn ground_len(&self) -> usize {
        match self {
            HonestMatroid::Lift(m) => m.ground_len(),
            HonestMatroid::Frame(m) => m.ground_len(),
        }
    }

    fn rank(&self, set: EdgeSet) -> usize {
        match self {
            HonestMatroid::Lift(m) => m.rank(set),
            HonestMatroid::Frame(m) => m.rank(set),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QueryAnswer {
    pub set: EdgeSet,
    pub rank: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QueryTranscript {
    pub kind: Option<TargetKind>,
    pub entries: Vec<QueryAnswer>,
}

impl QueryTranscript {
    pub fn queries(&self) -> Vec<EdgeSet> {
        self.entries.iter().map(|a| a.set).collect()
    }

    pub fn distinct(&self) -> usize {
        distinct_queries(self.entries.iter().map(|a| a.set)).len()
    }

    /// One `<hex mask> <rank>` line per query.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for a in &self.entries {
            writeln!(out, "{} {}", a.set.to_hex(), a.rank).expect("write to string");
        }
        out
    }
}

/// Honest answers from `m`, in query order.
pub fn answer_queries<M: RankOracle + ?Sized>(m: &M, queries: &[EdgeSet]) -> QueryTranscript {
    QueryTranscript {
        kind: None,
        entries: queries
            .iter()
            .map(|&set| QueryAnswer {
                set,
                rank: m.rank(set),
            })
            .collect(),
    }
}

/// Reads a transcript file: one hex mask per line, optionally followed by a
/// recorded rank (ignored). Blank lines and `#` comments are skipped.
pub fn parse_queries(text: &str) -> Result<Vec<EdgeSet>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            let mask = l.split([' ', '\t', ',']).next().unwrap_or(l);
            EdgeSet::parse_hex(mask)
        })
        .collect()
}

fn distinct_queries(queries: impl IntoIterator<Item = EdgeSet>) -> HashSet<EdgeSet> {
    queries.into_iter().collect()
}

/// First family member, in selection order, whose edge set was never
/// queried.
pub fn find_unqueried_z(gn: &GnGraph, queries: &[EdgeSet]) -> Result<CoveringPairZ> {
    let asked = distinct_queries(queries.iter().copied());
    gn.z_family()
        .find(|p| !asked.contains(&p.z))
        .ok_or(Error::Exhausted {
            family_size: gn.family_size(),
        })
}

/// A uniformly random unqueried family member (reservoir sampling over the
/// family stream).
pub fn find_unqueried_z_random<R: Rng + ?Sized>(
    gn: &GnGraph,
    queries: &[EdgeSet],
    rng: &mut R,
) -> Result<CoveringPairZ> {
    let asked = distinct_queries(queries.iter().copied());
    let mut chosen = None;
    let mut seen = 0u64;
    for p in gn.z_family().filter(|p| !asked.contains(&p.z)) {
        seen += 1;
        if rng.gen_range(0..seen) == 0 {
            chosen = Some(p);
        }
    }
    chosen.ok_or(Error::Exhausted {
        family_size: gn.family_size(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QueryAgreement {
    pub set: EdgeSet,
    pub honest: usize,
    pub alternative: usize,
    pub agree: bool,
}

#[derive(Clone, Debug)]
pub struct GameOutcome {
    pub kind: TargetKind,
    pub site: CoveringPairZ,
    pub alternative: Surgered<HonestMatroid>,
    pub certificate: Vec<QueryAgreement>,
}

impl GameOutcome {
    pub fn agreed(&self) -> usize {
        self.certificate.iter().filter(|q| q.agree).count()
    }

    pub fn all_agree(&self) -> bool {
        self.certificate.iter().all(|q| q.agree)
    }

    pub fn to_record(&self, gn: &GnGraph) -> OutcomeRecord {
        OutcomeRecord {
            n: gn.n(),
            kind: self.kind,
            family_size: gn.family_size(),
            site: gn.describe(&self.site),
            queries: self.certificate.len(),
            distinct_queries: distinct_queries(self.certificate.iter().map(|q| q.set)).len(),
            agreed: self.agreed(),
            all_agree: self.all_agree(),
            agreement: self.certificate.iter().map(|q| q.agree).collect(),
        }
    }
}

/// Serializable summary of a [`GameOutcome`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutcomeRecord {
    pub n: usize,
    pub kind: TargetKind,
    pub family_size: u64,
    pub site: ZRecord,
    pub queries: usize,
    pub distinct_queries: usize,
    pub agreed: usize,
    pub all_agree: bool,
    pub agreement: Vec<bool>,
}

/// The surgered matroid at `site`: tightened `FM` for a frame target,
/// relaxed `LM` for a lift target.
pub fn alternative_at(gn: &GnGraph, kind: TargetKind, site: &CoveringPairZ) -> Result<Surgered<HonestMatroid>> {
    let honest = HonestMatroid::new(gn, kind);
    match kind {
        TargetKind::Frame => tighten(honest, site.z),
        TargetKind::Lift => relax(honest, site.z),
    }
}

/// Picks the first unqueried site and certifies, query by query, that the
/// alternative answers exactly as the honest matroid does.
pub fn indistinguishable_alternative(
    gn: &GnGraph,
    kind: TargetKind,
    queries: &[EdgeSet],
) -> Result<GameOutcome> {
    let site = find_unqueried_z(gn, queries)?;
    outcome_at(gn, kind, site, queries)
}

/// As [`indistinguishable_alternative`], with the site drawn at random
/// among the unqueried ones.
pub fn indistinguishable_alternative_random<R: Rng + ?Sized>(
    gn: &GnGraph,
    kind: TargetKind,
    queries: &[EdgeSet],
    rng: &mut R,
) -> Result<GameOutcome> {
    let site = find_unqueried_z_random(gn, queries, rng)?;
    outcome_at(gn, kind, site, queries)
}

fn outcome_at(gn: &GnGraph, kind: TargetKind, site: CoveringPairZ, queries: &[EdgeSet]) -> Result<GameOutcome> {
    for q in queries {
        q.check_within(gn.graph.edge_count())?;
    }
    let alternative = alternative_at(gn, kind, &site)?;
    let honest = alternative.base();
    let certificate = queries
        .par_iter()
        .map(|&set| {
            let (h, a) = (honest.rank(set), alternative.rank(set));
            QueryAgreement {
                set,
                honest: h,
                alternative: a,
                agree: h == a,
            }
        })
        .collect();
    Ok(GameOutcome {
        kind,
        site,
        alternative,
        certificate,
    })
}

/// Interactive form of the game: queries are answered honestly as they
/// arrive, and the alternative is produced at the end.
pub struct AdversarySession<'a> {
    gn: &'a GnGraph,
    kind: TargetKind,
    honest: HonestMatroid,
    transcript: QueryTranscript,
}

impl<'a> AdversarySession<'a> {
    pub fn new(gn: &'a GnGraph, kind: TargetKind) -> Self {
        AdversarySession {
            gn,
            kind,
            honest: HonestMatroid::new(gn, kind),
            transcript: QueryTranscript {
                kind: Some(kind),
                entries: Vec::new(),
            },
        }
    }

    pub fn ask(&mut self, set: EdgeSet) -> usize {
        let rank = self.honest.rank(set);
        self.transcript.entries.push(QueryAnswer { set, rank });
        rank
    }

    pub fn transcript(&self) -> &QueryTranscript {
        &self.transcript
    }

    pub fn finish(self) -> Result<GameOutcome> {
        indistinguishable_alternative(self.gn, self.kind, &self.transcript.queries())
    }
}

/// `count` uniformly random subsets of `E(G_n)`.
pub fn random_queries<R: Rng + ?Sized>(gn: &GnGraph, count: usize, rng: &mut R) -> Vec<EdgeSet> {
    let mask = gn.graph.all_edges().bits();
    (0..count)
        .map(|_| EdgeSet::from_bits(rng.gen::<u128>() & mask))
        .collect()
}

/// Smallest even `n >= 4` with `2^(n-1) > p(4n)`, where
/// `p(x) = coeffs[0] + coeffs[1] x + coeffs[2] x^2 + ...`.
pub fn required_n_for_budget(coeffs: &[u64]) -> usize {
    let mut n = 4usize;
    loop {
        let x = BigUint::from(4 * n);
        let mut power = BigUint::from(1u32);
        let mut p = BigUint::from(0u32);
        for &c in coeffs {
            p += &power * c;
            power *= &x;
        }
        if BigUint::from(1u32) << (n - 1) > p {
            return n;
        }
        n += 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gn::build_gn;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn answer_queries_examples() {
        let g4 = build_gn(4).unwrap();
        let fm = HonestMatroid::new(&g4, TargetKind::Frame);
        let lm = HonestMatroid::new(&g4, TargetKind::Lift);
        let e = g4.graph.all_edges();
        let z0 = g4.c1().edges() | g4.c2().edges();
        assert_eq!(
            answer_queries(&fm, &[EdgeSet::EMPTY]).entries,
            [QueryAnswer { set: EdgeSet::EMPTY, rank: 0 }]
        );
        assert_eq!(answer_queries(&fm, &[e]).entries[0].rank, 8);
        assert_eq!(answer_queries(&lm, &[z0]).entries[0].rank, 7);
        let t = answer_queries(&fm, &[z0, EdgeSet::EMPTY, z0]);
        assert_eq!(t.entries[0], t.entries[2]);
        assert_eq!(t.distinct(), 2);
    }

    #[test]
    fn find_unqueried_examples() {
        let g4 = build_gn(4).unwrap();
        let fam: Vec<_> = g4.z_family().collect();
        assert_eq!(find_unqueried_z(&g4, &[]).unwrap(), fam[0]);
        assert_eq!(find_unqueried_z(&g4, &[fam[0].z]).unwrap(), fam[1]);
        let all: Vec<EdgeSet> = fam.iter().map(|p| p.z).collect();
        assert!(matches!(
            find_unqueried_z(&g4, &all),
            Err(Error::Exhausted { family_size: 8 })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!(find_unqueried_z_random(&g4, &all, &mut rng).is_err());
        let pick = find_unqueried_z_random(&g4, &all[..7], &mut rng).unwrap();
        assert_eq!(pick, fam[7]);
    }

    #[test]
    fn alternative_examples() {
        let g4 = build_gn(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fam: HashSet<EdgeSet> = g4.z_family().map(|p| p.z).collect();
        let queries: Vec<EdgeSet> = random_queries(&g4, 50, &mut rng)
            .into_iter()
            .filter(|q| !fam.contains(q))
            .take(5)
            .collect();
        let out = indistinguishable_alternative(&g4, TargetKind::Frame, &queries).unwrap();
        assert_eq!((out.agreed(), out.certificate.len()), (5, 5));

        let q = [g4.graph.all_edges(), EdgeSet::EMPTY, g4.c3().edges()];
        let out = indistinguishable_alternative(&g4, TargetKind::Lift, &q).unwrap();
        assert!(out.all_agree());
        assert_eq!(out.alternative.rank(out.site.z), 8);

        let zs: Vec<EdgeSet> = g4.z_family().map(|p| p.z).collect();
        let out = indistinguishable_alternative(&g4, TargetKind::Frame, &zs[..7]).unwrap();
        assert_eq!(out.site.z, zs[7]);
        assert!(out.all_agree());
    }

    #[test]
    fn session_matches_offline_game() {
        let g6 = build_gn(6).unwrap();
        let mut session = AdversarySession::new(&g6, TargetKind::Lift);
        let zs: Vec<EdgeSet> = g6.z_family().map(|p| p.z).take(3).collect();
        for &z in &zs {
            assert_eq!(session.ask(z), 11);
        }
        let queries = session.transcript().queries();
        let out = session.finish().unwrap();
        let offline = indistinguishable_alternative(&g6, TargetKind::Lift, &queries).unwrap();
        assert_eq!(out.site, offline.site);
        assert!(out.all_agree());
    }

    #[test]
    fn transcript_lines_roundtrip() {
        let g4 = build_gn(4).unwrap();
        let fm = HonestMatroid::new(&g4, TargetKind::Frame);
        let qs = vec![EdgeSet::EMPTY, g4.graph.all_edges(), EdgeSet::from_bits(0x1234)];
        let text = answer_queries(&fm, &qs).to_lines();
        assert_eq!(text.lines().next().unwrap(), "0 0");
        assert_eq!(parse_queries(&text).unwrap(), qs);
        assert_eq!(parse_queries("# c\n\nff\n0x3 2\n").unwrap(), [EdgeSet::full(8), EdgeSet::full(2)]);
        assert!(parse_queries("nothex\n").is_err());
    }

    #[test]
    fn budget_examples() {
        assert_eq!(required_n_for_budget(&[1]), 4);
        assert_eq!(required_n_for_budget(&[0, 1]), 6);
        assert_eq!(required_n_for_budget(&[0, 0, 1]), 14);
        assert_eq!(required_n_for_budget(&[]), 4);
    }

    proptest! {
        #[test]
        fn budget_is_monotone_in_coefficients(
            base in proptest::collection::vec(0u64..1000, 0..4),
            bump in proptest::collection::vec(0u64..1000, 0..4),
        ) {
            let len = base.len().max(bump.len());
            let bigger: Vec<u64> = (0..len)
                .map(|i| base.get(i).copied().unwrap_or(0) + bump.get(i).copied().unwrap_or(0))
                .collect();
            let n = required_n_for_budget(&base);
            let m = required_n_for_budget(&bigger);
            prop_assert!(m >= n);
            prop_assert!(n % 2 == 0 && n >= 4);
        }
    }
}
