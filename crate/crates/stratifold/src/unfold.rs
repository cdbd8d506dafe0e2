//! Resolution of depth by repeated unfolding.
//!
//! An elementary unfolding removes the deepest singular strata — the
//! minimal elements of the poset — and doubles the isolated ones. Surviving
//! strata keep their dimensions, isotropy and links; only ids change (a
//! trailing `^`, or `^+`/`^-` for the two copies of an isolated stratum).
//! Each step lowers depth by exactly one, so iterating `depth(X)` times
//! flattens any space to a disjoint union of closed manifolds.
//!
//! Unfolding commutes with passing to orbit spaces; [`check_unfold_quotient_commutes`]
//! performs both compositions and searches for the isomorphism witness.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::abelian::Subgroup;
use crate::strat::{
    is_isomorphic, orbit_space, LinkData, SpaceIso, StratError, StratSpace, Stratum, StratumId,
};

/// One elementary unfolding, with enough bookkeeping to trace every result
/// stratum back to its source.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnfoldStep {
    pub source: StratSpace,
    pub result: StratSpace,
    /// Result stratum id -> source stratum id.
    pub provenance: BTreeMap<StratumId, StratumId>,
    /// Source strata that were isolated and hence produced two copies.
    pub duplicated: BTreeSet<StratumId>,
}

fn hatted(id: &StratumId) -> StratumId {
    let mut s = String::from(id.as_str());
    s.push('^');
    StratumId::new(s)
}

/// Remove the minimal non-maximal strata; double the isolated ones.
///
/// On a depth-zero space every stratum is isolated, so the result is a
/// disjoint doubling. Otherwise depth drops by exactly one: every longest
/// chain loses its bottom element and nothing else.
pub fn elementary_unfold(x: &StratSpace) -> UnfoldStep {
    let minimal = x.minimal_strata();
    let maximal = x.maximal_strata();

    let mut strata: BTreeMap<StratumId, Stratum> = BTreeMap::new();
    let mut provenance: BTreeMap<StratumId, StratumId> = BTreeMap::new();
    let mut duplicated: BTreeSet<StratumId> = BTreeSet::new();

    for (id, s) in &x.strata {
        if minimal.contains(id) {
            if maximal.contains(id) {
                // Isolated: two copies, no link either way.
                for sign in ["+", "-"] {
                    let mut name = String::from(id.as_str());
                    name.push('^');
                    name.push_str(sign);
                    let copy = StratumId::new(name);
                    provenance.insert(copy.clone(), id.clone());
                    strata.insert(copy, s.clone());
                }
                duplicated.insert(id.clone());
            }
            // Minimal non-maximal strata vanish; their links persist as the
            // strata above, which all survive.
            continue;
        }
        let nid = hatted(id);
        provenance.insert(nid.clone(), id.clone());
        let link = s.link.as_ref().map(|l| LinkData {
            space: l.space.clone(),
            attach: l.attach.iter().map(|(k, v)| (k.clone(), hatted(v))).collect(),
        });
        strata.insert(nid, Stratum { dim: s.dim, isotropy: s.isotropy.clone(), link });
    }

    let order: BTreeSet<(StratumId, StratumId)> = x
        .order
        .iter()
        .filter(|(a, b)| !minimal.contains(a) && !minimal.contains(b))
        .map(|(a, b)| (hatted(a), hatted(b)))
        .collect();

    let result = StratSpace {
        acting: x.acting.clone(),
        strata,
        order,
        compact: x.compact,
    };
    UnfoldStep { source: x.clone(), result, provenance, duplicated }
}

/// The full unfolding tower of a space.
#[derive(Clone, Debug)]
pub struct UnfoldChain {
    pub source: StratSpace,
    pub steps: Vec<UnfoldStep>,
}

impl UnfoldChain {
    pub fn final_space(&self) -> &StratSpace {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.source)
    }

    /// Final stratum id -> original stratum id, composed across all steps.
    pub fn total_provenance(&self) -> BTreeMap<StratumId, StratumId> {
        let mut total: BTreeMap<StratumId, StratumId> = self
            .source
            .strata
            .keys()
            .map(|id| (id.clone(), id.clone()))
            .collect();
        for step in &self.steps {
            total = step
                .provenance
                .iter()
                .map(|(new, old)| (new.clone(), total[old].clone()))
                .collect();
        }
        total
    }
}

/// Unfold until depth zero. Takes exactly `x.depth()` steps; the result has
/// no order relations and no links left.
pub fn unfold_all(x: &StratSpace) -> UnfoldChain {
    let mut steps = Vec::new();
    let mut current = x.clone();
    while current.depth() > 0 {
        let step = elementary_unfold(&current);
        let next = step.result.clone();
        steps.push(step);
        current = next;
    }
    UnfoldChain { source: x.clone(), steps }
}

/// Both compositions of one unfolding with one orbit space, and the
/// isomorphism between them (when the search finds one — it always should).
#[derive(Clone, Debug)]
pub struct CommutationCheck {
    pub unfold_then_orbit: StratSpace,
    pub orbit_then_unfold: StratSpace,
    pub witness: Option<SpaceIso>,
}

impl CommutationCheck {
    pub fn commutes(&self) -> bool {
        self.witness.is_some()
    }
}

/// Compare `unfold(X/K)` against `unfold(X)/K` for one elementary step.
pub fn check_unfold_quotient_commutes(
    x: &StratSpace,
    k: &Subgroup,
) -> Result<CommutationCheck, StratError> {
    let (xk, _) = orbit_space(x, k)?;
    let orbit_then_unfold = elementary_unfold(&xk).result;
    let (unfold_then_orbit, _) = orbit_space(&elementary_unfold(x).result, k)?;
    let witness = is_isomorphic(&unfold_then_orbit, &orbit_then_unfold);
    Ok(CommutationCheck { unfold_then_orbit, orbit_then_unfold, witness })
}

/// Compare the full towers: `unfold_all(X/K)` against `unfold_all(X)/K`.
pub fn check_unfold_all_quotient_commutes(
    x: &StratSpace,
    k: &Subgroup,
) -> Result<CommutationCheck, StratError> {
    let (xk, _) = orbit_space(x, k)?;
    let orbit_then_unfold = unfold_all(&xk).final_space().clone();
    let (unfold_then_orbit, _) = orbit_space(unfold_all(x).final_space(), k)?;
    let witness = is_isomorphic(&unfold_then_orbit, &orbit_then_unfold);
    Ok(CommutationCheck { unfold_then_orbit, orbit_then_unfold, witness })
}
