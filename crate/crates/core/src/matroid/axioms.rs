use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{RankOracle, RankTable};
use crate::edgeset::{EdgeId, EdgeSet};
use crate::error::Result;
use crate::limits::Limits;

/// Witnesses kept in a report; the total count is always exact.
const MAX_WITNESSES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum AxiomMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AxiomViolation {
    /// `r(∅) != 0`.
    Normalization { set: EdgeSet, rank: usize },
    /// `r(X) <= r(X + e) <= r(X) + 1` fails.
    UnitIncrease {
        set: EdgeSet,
        element: EdgeId,
        before: usize,
        after: usize,
    },
    /// `r(X + e) + r(X + f) >= r(X + e + f) + r(X)` fails.
    Submodularity {
        set: EdgeSet,
        e: EdgeId,
        f: EdgeId,
        with_e: usize,
        with_f: usize,
        with_both: usize,
        base: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub mode: AxiomMode,
    pub ground_len: usize,
    pub checks: u64,
    pub violation_count: u64,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

#[derive(Default)]
struct Tally {
    checks: u64,
    count: u64,
    kept: Vec<AxiomViolation>,
}

impl Tally {
    fn push(&mut self, v: AxiomViolation) {
        self.count += 1;
        if self.kept.len() < MAX_WITNESSES {
            self.kept.push(v);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.count += other.count;
        let room = MAX_WITNESSES - self.kept.len();
        self.kept.extend(other.kept.into_iter().take(room));
        self
    }

    fn check_at(&mut self, rank: &impl Fn(EdgeSet) -> usize, x: EdgeSet, pairs: &[(EdgeId, EdgeId)], singles: &[EdgeId]) {
        let base = rank(x);
        for &e in singles {
            self.checks += 1;
            let after = rank(x.with(e));
            if after < base || after > base + 1 {
                self.push(AxiomViolation::UnitIncrease {
                    set: x,
                    element: e,
                    before: base,
                    after,
                });
            }
        }
        for &(e, f) in pairs {
            self.checks += 1;
            let (with_e, with_f, with_both) = (rank(x.with(e)), rank(x.with(f)), rank(x.with(e).with(f)));
            if with_e + with_f < with_both + base {
                self.push(AxiomViolation::Submodularity {
                    set: x,
                    e,
                    f,
                    with_e,
                    with_f,
                    with_both,
                    base,
                });
            }
        }
    }
}

/// Checks normalization, unit increase and local submodularity.
///
/// Exhaustive mode visits every `X` and every `e, f ∉ X` (cost capped by
/// `limits.max_axiom_checks`); sampled mode draws `samples` random triples
/// from a seeded generator. Witnesses come back in subset order.
pub fn check_rank_axioms<M: RankOracle + ?Sized>(
    m: &M,
    mode: AxiomMode,
    limits: &Limits,
) -> Result<AxiomReport> {
    let len = m.ground_len();
    let mut tally = Tally::default();
    tally.checks += 1;
    let empty = m.rank(EdgeSet::EMPTY);
    if empty != 0 {
        tally.push(AxiomViolation::Normalization {
            set: EdgeSet::EMPTY,
            rank: empty,
        });
    }

    match mode {
        AxiomMode::Exhaustive => {
            limits.check_axioms(len)?;
            let table = RankTable::tabulate(m, &Limits {
                max_subsets: u64::MAX,
                ..*limits
            })?;
            let rank = |x: EdgeSet| table.get(x);
            let ground = m.ground();
            let chunk = 1u64 << len.saturating_sub(6).min(10);
            let total = 1u64 << len;
            let scanned = (0..total.div_ceil(chunk))
                .into_par_iter()
                .map(|c| {
                    let mut t = Tally::default();
                    let mut singles = Vec::with_capacity(len);
                    let mut pairs = Vec::with_capacity(len * len / 2);
                    for bits in c * chunk..((c + 1) * chunk).min(total) {
                        let x = EdgeSet::from_bits(bits as u128);
                        singles.clear();
                        singles.extend((ground - x).iter());
                        pairs.clear();
                        for (i, &e) in singles.iter().enumerate() {
                            pairs.extend(singles[i + 1..].iter().map(|&f| (e, f)));
                        }
                        t.check_at(&rank, x, &pairs, &singles);
                    }
                    t
                })
                .collect::<Vec<_>>()
                .into_iter()
                .fold(Tally::default(), Tally::merge);
            tally = tally.merge(scanned);
        }
        AxiomMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rank = |x: EdgeSet| m.rank(x);
            if len >= 2 {
                let mask = m.ground().bits();
                for _ in 0..samples {
                    let e = rng.gen_range(0..len);
                    let mut f = rng.gen_range(0..len - 1);
                    if f >= e {
                        f += 1;
                    }
                    let x = EdgeSet::from_bits(rng.gen::<u128>() & mask).without(e).without(f);
                    tally.check_at(&rank, x, &[(e.min(f), e.max(f))], &[e, f]);
                }
            }
        }
    }

    Ok(AxiomReport {
        mode,
        ground_len: len,
        checks: tally.checks,
        violation_count: tally.count,
        violations: tally.kept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::UniformMatroid;

    struct Shifted(UniformMatroid);

    impl RankOracle for Shifted {
        fn ground_len(&self) -> usize {
            self.0.ground_len()
        }
        fn rank(&self, set: EdgeSet) -> usize {
            self.0.rank(set) + 1
        }
    }

    #[test]
    fn uniform_passes_both_modes() {
        let u = UniformMatroid::new(3, 7);
        let lim = Limits::default();
        let ex = check_rank_axioms(&u, AxiomMode::Exhaustive, &lim).unwrap();
        assert!(ex.passed());
        // 1 + sum over X of k + k(k-1)/2, k = 7 - |X|.
        let expected: u64 = 1 + (0..=7u64)
            .map(|k| binom(7, k) * (k + k * k.saturating_sub(1) / 2))
            .sum::<u64>();
        assert_eq!(ex.checks, expected);
        let s = check_rank_axioms(&u, AxiomMode::Sampled { samples: 500, seed: 3 }, &lim).unwrap();
        assert!(s.passed());
        assert_eq!(s.checks, 1 + 500 * 3);
    }

    #[test]
    fn nonzero_empty_rank_is_caught_with_witness() {
        let bad = Shifted(UniformMatroid::new(2, 4));
        let r = check_rank_axioms(&bad, AxiomMode::Exhaustive, &Limits::default()).unwrap();
        assert!(!r.passed());
        assert_eq!(
            r.violations[0],
            AxiomViolation::Normalization {
                set: EdgeSet::EMPTY,
                rank: 1
            }
        );
    }

    #[test]
    fn non_submodular_table_is_caught() {
        // r = 2 only on {0,1}, 1 on singletons and on {0,2}, {1,2}, ...
        let t = RankTable::from_fn(3, |x| match x.len() {
            0 => 0,
            1 => 1,
            _ if x == EdgeSet::from_iter([0, 1]) => 2,
            _ if x.len() == 3 => 3,
            _ => 1,
        });
        let r = check_rank_axioms(&t, AxiomMode::Exhaustive, &Limits::default()).unwrap();
        assert!(!r.passed());
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, AxiomViolation::Submodularity { .. })));
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, AxiomViolation::UnitIncrease { .. })));
    }

    #[test]
    fn exhaustive_cap_is_enforced() {
        let u = UniformMatroid::new(3, 24);
        assert!(check_rank_axioms(&u, AxiomMode::Exhaustive, &Limits::default())
            .unwrap_err()
            .is_resource());
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
}
