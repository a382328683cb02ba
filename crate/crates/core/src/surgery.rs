//! Relaxing a circuit-hyperplane and tightening a free basis, as rank-level
//! wrappers: the surgered oracle answers `base.rank(X)` except at the site,
//! where it answers one more (relaxed) or one less (tightened).

use std::fmt;

use serde::Serialize;

use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::matroid::{circuit_hyperplane_failure, free_basis_failure, RankOracle, RankTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SurgeryKind {
    Relaxed,
    Tightened,
}

/// The property a surgery site failed to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurgeryRejection {
    NotACircuit,
    NotAHyperplane,
    NotABasis,
    NotFree,
    /// The site is the only basis; removing it leaves no bases at all.
    OnlyBasis,
}

impl fmt::Display for SurgeryRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurgeryRejection::NotACircuit => "not-a-circuit",
            SurgeryRejection::NotAHyperplane => "not-a-hyperplane",
            SurgeryRejection::NotABasis => "not-a-basis",
            SurgeryRejection::NotFree => "not-free",
            SurgeryRejection::OnlyBasis => "only-basis",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Surgered<M> {
    base: M,
    site: EdgeSet,
    kind: SurgeryKind,
}

impl<M: RankOracle> Surgered<M> {
    /// Skips the precondition check. The caller vouches that `site` is a
    /// circuit-hyperplane (relaxed) or a free basis (tightened) of `base`.
    pub fn unchecked(base: M, site: EdgeSet, kind: SurgeryKind) -> Self {
        Surgered { base, site, kind }
    }

    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn site(&self) -> EdgeSet {
        self.site
    }

    pub fn kind(&self) -> SurgeryKind {
        self.kind
    }

    pub fn into_base(self) -> M {
        self.base
    }
}

impl<M: RankOracle> RankOracle for Surgered<M> {
    fn ground_len(&self) -> usize {
        self.base.ground_len()
    }

    fn rank(&self, set: EdgeSet) -> usize {
        let r = self.base.rank(set);
        if set != self.site {
            return r;
        }
        match self.kind {
            SurgeryKind::Relaxed => r + 1,
            SurgeryKind::Tightened => r - 1,
        }
    }
}

/// Adds the circuit-hyperplane `site` to the bases of `m`.
pub fn relax<M: RankOracle>(m: M, site: EdgeSet) -> Result<Surgered<M>> {
    site.check_within(m.ground_len())?;
    if let Some(why) = circuit_hyperplane_failure(&m, site) {
        return Err(Error::Precondition(why));
    }
    Ok(Surgered::unchecked(m, site, SurgeryKind::Relaxed))
}

/// Removes the free basis `site` from the bases of `m`.
pub fn tighten<M: RankOracle>(m: M, site: EdgeSet) -> Result<Surgered<M>> {
    site.check_within(m.ground_len())?;
    if let Some(why) = free_basis_failure(&m, site) {
        return Err(Error::Precondition(why));
    }
    if site == m.ground() {
        return Err(Error::Precondition(SurgeryRejection::OnlyBasis));
    }
    Ok(Surgered::unchecked(m, site, SurgeryKind::Tightened))
}

/// Applies the surgery `site` admits, then the reverse one, and compares the
/// result with `m` on every subset.
pub fn verify_surgery_inverse<M: RankOracle>(m: &M, site: EdgeSet, limits: &Limits) -> Result<bool> {
    let original = RankTable::tabulate(m, limits)?;
    let round_trip = match relax(m, site) {
        Ok(relaxed) => RankTable::tabulate(&tighten(relaxed, site)?, limits)?,
        Err(Error::Precondition(_)) => {
            let tightened = tighten(m, site)?;
            RankTable::tabulate(&relax(tightened, site)?, limits)?
        }
        Err(e) => return Err(e),
    };
    Ok(original.differences(&round_trip).is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biased::BiasedGraph;
    use crate::gn::build_gn;
    use crate::matroid::{is_circuit_hyperplane, is_free_basis, FrameMatroid, LiftMatroid, UniformMatroid};

    fn setup() -> (LiftMatroid, FrameMatroid, EdgeSet) {
        let g4 = build_gn(4).unwrap();
        let z = g4.c1().edges() | g4.c2().edges();
        let bg = std::sync::Arc::new(BiasedGraph::unbiased(g4.graph));
        (LiftMatroid::new(bg.clone()), FrameMatroid::new(bg), z)
    }

    #[test]
    fn relax_examples() {
        let (lm, _, z) = setup();
        let relaxed = relax(&lm, z).unwrap();
        assert_eq!(relaxed.rank(z), 8);
        assert_eq!(relaxed.rank(z.without(0)), lm.rank(z.without(0)));
        assert_eq!(relaxed.rank(lm.ground()), 8);
        let c1 = z & EdgeSet::full(4);
        assert!(matches!(
            relax(&lm, c1),
            Err(Error::Precondition(SurgeryRejection::NotACircuit))
        ));
    }

    #[test]
    fn tighten_examples() {
        let (_, fm, z) = setup();
        let tight = tighten(&fm, z).unwrap();
        assert_eq!(tight.rank(z), 7);
        assert_eq!(tight.rank(fm.ground()), 8);
        assert!(matches!(
            tighten(&fm, z.without(0)),
            Err(Error::Precondition(SurgeryRejection::NotABasis))
        ));
    }

    #[test]
    fn surgery_swaps_the_site_role() {
        let (lm, fm, z) = setup();
        assert!(is_free_basis(&relax(&lm, z).unwrap(), z));
        assert!(is_circuit_hyperplane(&tighten(&fm, z).unwrap(), z));
    }

    #[test]
    fn inverse_round_trips() {
        let (lm, fm, z) = setup();
        let lim = Limits::default();
        assert!(verify_surgery_inverse(&lm, z, &lim).unwrap());
        assert!(verify_surgery_inverse(&fm, z, &lim).unwrap());
    }

    #[test]
    fn degenerate_sites_are_rejected() {
        let lim = Limits::default();
        // U_{2,4}: circuits have 3 elements, hyperplanes 1.
        let u24 = UniformMatroid::new(2, 4);
        for site in u24.ground().subsets() {
            assert!(relax(u24, site).is_err());
        }
        assert!(matches!(
            verify_surgery_inverse(&u24, EdgeSet::from_iter([0, 1, 2]), &lim),
            Err(Error::Precondition(_))
        ));
        // U_{1,1} + U_{1,1}: its only basis is free, but has nothing to swap in.
        let free2 = UniformMatroid::new(2, 2);
        assert!(matches!(
            tighten(free2, free2.ground()),
            Err(Error::Precondition(SurgeryRejection::OnlyBasis))
        ));
        assert!(matches!(
            verify_surgery_inverse(&free2, free2.ground(), &lim),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn out_of_range_site_is_an_input_error() {
        let (lm, _, _) = setup();
        assert!(matches!(
            relax(&lm, EdgeSet::singleton(40)),
            Err(Error::InvalidEdge { .. })
        ));
    }
}
