//! The combinatorial skeleton of a stratified space with finite abelian
//! symmetry.
//!
//! A [`StratSpace`] is a finite poset of strata. Every stratum carries a
//! dimension and an isotropy label; every non-maximal ("singular") stratum
//! carries a link — a compact `StratSpace` of its own — together with an
//! attach map sending link strata to the strata above. All isotropy labels,
//! at every nesting depth, are subgroups of one top acting group; a link's
//! acting subgroup is its owning stratum's isotropy. That convention makes
//! orbit spaces a single relabeling pass instead of a tower of isomorphism
//! witnesses.
//!
//! Depth is the length (in hops) of the longest strict chain in the poset.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::abelian::{
    group_isomorphisms, quotient, FiniteAbelianGroup, GroupError, GroupIso, Subgroup,
};

/// Opaque stratum identifier. Constructors derive new ids from old ones
/// (cones and suspensions prime them, unfoldings append hats), so ids stay
/// readable across derived spaces.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct StratumId(String);

impl StratumId {
    pub fn new(id: impl Into<String>) -> Self {
        StratumId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StratumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for StratumId {
    fn from(s: &str) -> Self {
        StratumId::new(s)
    }
}

/// Link data of a singular stratum: the link space and the attach map from
/// link strata to the strata above the owner.
#[derive(Clone, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinkData {
    pub space: StratSpace,
    pub attach: BTreeMap<StratumId, StratumId>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Stratum {
    pub dim: u32,
    /// Subgroup of the top acting group fixing this stratum pointwise.
    pub isotropy: Subgroup,
    /// Present exactly when the stratum is non-maximal.
    pub link: Option<LinkData>,
}

/// A stratified space: strata keyed by id, a strict frontier order stored
/// transitively closed, and a compactness flag.
///
/// `acting` is the acting group presented as a subgroup of the top group; at
/// the root it is the full subgroup, inside links it is the owning stratum's
/// isotropy. Fields are public — the structure is plain data, and
/// [`StratSpace::validate`] reports every breach of the invariants.
#[derive(Clone, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StratSpace {
    pub acting: Subgroup,
    pub strata: BTreeMap<StratumId, Stratum>,
    pub order: BTreeSet<(StratumId, StratumId)>,
    pub compact: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StratError {
    /// Cones exist only over compact spaces.
    ConeNeedsCompactBase,
    Group(GroupError),
}

impl fmt::Display for StratError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratError::ConeNeedsCompactBase => write!(f, "cone base must be compact"),
            StratError::Group(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for StratError {}

impl From<GroupError> for StratError {
    fn from(e: GroupError) -> Self {
        StratError::Group(e)
    }
}

/// One problem found by validation, located by the link-nesting path and the
/// offending stratum (when one is identifiable).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub path: Vec<StratumId>,
    pub stratum: Option<StratumId>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.path {
            write!(f, "{p}/")?;
        }
        match &self.stratum {
            Some(s) => write!(f, "{s}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Clone, Default, Debug)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn note_violation(
    report: &mut ValidationReport,
    path: &[StratumId],
    stratum: Option<StratumId>,
    message: String,
) {
    report.violations.push(Violation { path: path.to_vec(), stratum, message });
}

impl StratSpace {
    /// The top acting group (the ambient presentation every label lives in).
    pub fn group(&self) -> &FiniteAbelianGroup {
        self.acting.ambient()
    }

    /// Is `a` strictly below `b`?
    pub fn less(&self, a: &StratumId, b: &StratumId) -> bool {
        self.order.contains(&(a.clone(), b.clone()))
    }

    pub fn comparable(&self, a: &StratumId, b: &StratumId) -> bool {
        a == b || self.less(a, b) || self.less(b, a)
    }

    /// Strata with nothing below them.
    pub fn minimal_strata(&self) -> BTreeSet<StratumId> {
        self.strata
            .keys()
            .filter(|id| !self.order.iter().any(|(_, b)| b == *id))
            .cloned()
            .collect()
    }

    /// Strata with nothing above them; exactly these carry no link.
    pub fn maximal_strata(&self) -> BTreeSet<StratumId> {
        self.strata
            .keys()
            .filter(|id| !self.order.iter().any(|(a, _)| a == *id))
            .cloned()
            .collect()
    }

    pub fn is_singular(&self, id: &StratumId) -> bool {
        self.order.iter().any(|(a, _)| a == id)
    }

    /// Longest-chain lengths ending at each stratum (in hops from below).
    ///
    /// Computed by bounded relaxation so a malformed (cyclic) order cannot
    /// hang validation; cycles simply saturate.
    fn heights(&self) -> BTreeMap<StratumId, u32> {
        let mut h: BTreeMap<StratumId, u32> =
            self.strata.keys().map(|id| (id.clone(), 0)).collect();
        for _ in 0..self.strata.len() {
            let mut changed = false;
            for (a, b) in &self.order {
                let (Some(&ha), Some(&hb)) = (h.get(a), h.get(b)) else { continue };
                if ha + 1 > hb {
                    h.insert(b.clone(), ha + 1);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        h
    }

    fn heights_above(&self) -> BTreeMap<StratumId, u32> {
        let mut h: BTreeMap<StratumId, u32> =
            self.strata.keys().map(|id| (id.clone(), 0)).collect();
        for _ in 0..self.strata.len() {
            let mut changed = false;
            for (a, b) in &self.order {
                let (Some(&hb), Some(&ha)) = (h.get(b), h.get(a)) else { continue };
                if hb + 1 > ha {
                    h.insert(a.clone(), hb + 1);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        h
    }

    /// Length of the longest strict chain, in hops. A single stratum has
    /// depth 0.
    pub fn depth(&self) -> u32 {
        self.heights().values().copied().max().unwrap_or(0)
    }

    /// Longest chain strictly above `id`, in hops.
    pub fn depth_above(&self, id: &StratumId) -> u32 {
        self.heights_above().get(id).copied().unwrap_or(0)
    }

    /// Covering relations of the stored order (its Hasse diagram).
    pub fn covers(&self) -> BTreeSet<(StratumId, StratumId)> {
        self.order
            .iter()
            .filter(|(a, b)| {
                !self
                    .strata
                    .keys()
                    .any(|c| self.less(a, c) && self.less(c, b))
            })
            .cloned()
            .collect()
    }

    /// Check every structural invariant, collecting problems instead of
    /// stopping at the first. Nested links are checked recursively; their
    /// violations carry the owning-stratum path.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.validate_into(&mut Vec::new(), None, &mut report);
        report
    }

    fn validate_into(
        &self,
        path: &mut Vec<StratumId>,
        expected_acting: Option<&Subgroup>,
        report: &mut ValidationReport,
    ) {

        if let Some(expected) = expected_acting {
            if &self.acting != expected {
                note_violation(report, path, 
                    None,
                    String::from("link acting group differs from the owning stratum's isotropy"));
            }
        }

        // Order hygiene: known endpoints, strict partial order, closure.
        for (a, b) in &self.order {
            if !self.strata.contains_key(a) || !self.strata.contains_key(b) {
                note_violation(report, path, None, alloc::format!("order references unknown strata: {a} < {b}"));
            }
            if a == b {
                note_violation(report, path, Some(a.clone()), String::from("order is not irreflexive"));
            }
            if self.order.contains(&(b.clone(), a.clone())) && a < b {
                note_violation(report, path, 
                    None,
                    alloc::format!("order is not antisymmetric: {a} and {b} compare both ways"));
            }
        }
        for (a, b) in &self.order {
            for (b2, c) in &self.order {
                if b == b2 && !self.order.contains(&(a.clone(), c.clone())) && a != c {
                    note_violation(report, path, 
                        None,
                        alloc::format!("order is not transitively closed: {a} < {b} < {c}"));
                }
            }
        }

        let maximal = self.maximal_strata();
        let top = self.group().clone();

        for (id, s) in &self.strata {
            if s.isotropy.ambient() != &top {
                note_violation(report, path, 
                    Some(id.clone()),
                    String::from("isotropy lives in a different group presentation"));
                continue;
            }
            if !s.isotropy.is_contained_in(&self.acting) {
                note_violation(report, path, 
                    Some(id.clone()),
                    String::from("isotropy is not contained in the acting subgroup"));
            }

            let is_max = maximal.contains(id);
            match &s.link {
                None => {
                    if !is_max {
                        note_violation(report, path, Some(id.clone()), String::from("non-maximal stratum has no link"));
                    }
                }
                Some(l) => {
                    if is_max {
                        note_violation(report, path, Some(id.clone()), String::from("maximal stratum carries a link"));
                        continue;
                    }
                    if !l.space.compact {
                        note_violation(report, path, Some(id.clone()), String::from("link space is not compact"));
                    }

                    let above: BTreeSet<StratumId> = self
                        .strata
                        .keys()
                        .filter(|r| self.less(id, r))
                        .cloned()
                        .collect();

                    for lid in l.space.strata.keys() {
                        if !l.attach.contains_key(lid) {
                            note_violation(report, path, 
                                Some(id.clone()),
                                alloc::format!("attach map misses link stratum {lid}"));
                        }
                    }
                    let mut targets: BTreeSet<StratumId> = BTreeSet::new();
                    for (lid, target) in &l.attach {
                        let Some(ls) = l.space.strata.get(lid) else {
                            note_violation(report, path, 
                                Some(id.clone()),
                                alloc::format!("attach map references unknown link stratum {lid}"));
                            continue;
                        };
                        let Some(ts) = self.strata.get(target) else {
                            note_violation(report, path, 
                                Some(id.clone()),
                                alloc::format!("attach target {target} does not exist"));
                            continue;
                        };
                        targets.insert(target.clone());
                        if !above.contains(target) {
                            note_violation(report, path, 
                                Some(id.clone()),
                                alloc::format!("attach target {target} is not above the stratum"));
                        }
                        if ts.dim != s.dim + 1 + ls.dim {
                            note_violation(report, path, 
                                Some(id.clone()),
                                alloc::format!(
                                    "dimension law broken at link stratum {lid}: {} != {} + 1 + {}",
                                    ts.dim, s.dim, ls.dim
                                ));
                        }
                        if ts.isotropy != ls.isotropy {
                            note_violation(report, path, 
                                Some(id.clone()),
                                alloc::format!(
                                    "link stratum {lid} and attach target {target} disagree on isotropy"
                                ));
                        }
                    }
                    for r in &above {
                        if !targets.contains(r) {
                            note_violation(report, path, 
                                Some(id.clone()),
                                alloc::format!("attach map is not onto: {r} has no preimage"));
                        }
                    }
                    for (la, lb) in &l.space.order {
                        if let (Some(ta), Some(tb)) = (l.attach.get(la), l.attach.get(lb)) {
                            if !self.less(ta, tb) {
                                note_violation(report, path, 
                                    Some(id.clone()),
                                    alloc::format!(
                                        "attach map does not preserve order: {la} < {lb} but {ta} !< {tb}"
                                    ));
                            }
                        }
                    }

                    let expected_depth = l.space.depth() + 1;
                    let actual = self.depth_above(id);
                    if actual != expected_depth {
                        note_violation(report, path, 
                            Some(id.clone()),
                            alloc::format!(
                                "depth above is {actual} but the link has depth {}",
                                l.space.depth()
                            ));
                    }

                    path.push(id.clone());
                    l.space.validate_into(path, Some(&s.isotropy), report);
                    path.pop();
                }
            }
        }
    }
}

fn primed(id: &StratumId) -> StratumId {
    let mut s = String::from(id.as_str());
    s.push('\'');
    StratumId(s)
}

/// The open cone over a compact space.
///
/// A fresh vertex `*` (dimension 0, full isotropy, link = the base) sits
/// below a cylinder stratum `S'` for every base stratum `S`; cylinders keep
/// their isotropy and links and gain one dimension. The result is not
/// compact.
pub fn cone(base: &StratSpace) -> Result<StratSpace, StratError> {
    if !base.compact {
        return Err(StratError::ConeNeedsCompactBase);
    }
    let vertex = StratumId::new("*");
    let mut strata: BTreeMap<StratumId, Stratum> = BTreeMap::new();
    let mut order: BTreeSet<(StratumId, StratumId)> = BTreeSet::new();
    let mut vertex_attach: BTreeMap<StratumId, StratumId> = BTreeMap::new();

    for (id, s) in &base.strata {
        let cid = primed(id);
        vertex_attach.insert(id.clone(), cid.clone());
        let link = s.link.as_ref().map(|l| LinkData {
            space: l.space.clone(),
            attach: l.attach.iter().map(|(k, v)| (k.clone(), primed(v))).collect(),
        });
        strata.insert(
            cid.clone(),
            Stratum { dim: s.dim + 1, isotropy: s.isotropy.clone(), link },
        );
        order.insert((vertex.clone(), cid));
    }
    for (a, b) in &base.order {
        order.insert((primed(a), primed(b)));
    }
    strata.insert(
        vertex,
        Stratum {
            dim: 0,
            isotropy: base.acting.clone(),
            link: Some(LinkData { space: base.clone(), attach: vertex_attach }),
        },
    );
    Ok(StratSpace { acting: base.acting.clone(), strata, order, compact: false })
}

/// Product with a trivially-acted manifold factor of dimension `m_dim`.
///
/// Top-level strata gain `m_dim` dimensions; links, isotropy and the order
/// are untouched. With `m_dim = 0` this is the identity; otherwise the
/// result is not compact (the factor is an open manifold).
pub fn product(m_dim: u32, x: &StratSpace) -> StratSpace {
    if m_dim == 0 {
        return x.clone();
    }
    let strata = x
        .strata
        .iter()
        .map(|(id, s)| {
            (
                id.clone(),
                Stratum {
                    dim: s.dim + m_dim,
                    isotropy: s.isotropy.clone(),
                    link: s.link.clone(),
                },
            )
        })
        .collect();
    StratSpace { acting: x.acting.clone(), strata, order: x.order.clone(), compact: false }
}

/// Orbit space by a subgroup `k` of the top group, with the stratum
/// bijection (here: the identity on ids).
///
/// Strata, dims and the order survive unchanged; every label `H` — acting
/// subgroups and isotropy alike, at every nesting depth — becomes the image
/// of `join(k, H)` under the quotient projection. In particular, the new
/// isotropy of a stratum is the image of `K·G_S`, and a link's acting group
/// becomes the quotient of the old one by its intersection with `k`,
/// presented inside the new top group.
pub fn orbit_space(
    x: &StratSpace,
    k: &Subgroup,
) -> Result<(StratSpace, BTreeMap<StratumId, StratumId>), StratError> {
    if k.ambient() != x.group() {
        return Err(StratError::Group(GroupError::AmbientMismatch));
    }
    let q = quotient(x.group(), k)?;
    let relabel = |h: &Subgroup| -> Result<Subgroup, GroupError> {
        q.push_subgroup(&k.join(h)?)
    };
    let mapped = map_labels(x, &relabel)?;
    let bijection = x.strata.keys().map(|id| (id.clone(), id.clone())).collect();
    Ok((mapped, bijection))
}

fn map_labels(
    x: &StratSpace,
    relabel: &dyn Fn(&Subgroup) -> Result<Subgroup, GroupError>,
) -> Result<StratSpace, GroupError> {
    let mut strata: BTreeMap<StratumId, Stratum> = BTreeMap::new();
    for (id, s) in &x.strata {
        let link = match &s.link {
            None => None,
            Some(l) => Some(LinkData {
                space: map_labels(&l.space, relabel)?,
                attach: l.attach.clone(),
            }),
        };
        strata.insert(
            id.clone(),
            Stratum { dim: s.dim, isotropy: relabel(&s.isotropy)?, link },
        );
    }
    Ok(StratSpace {
        acting: relabel(&x.acting)?,
        strata,
        order: x.order.clone(),
        compact: x.compact,
    })
}

/// A witness that two spaces are isomorphic: a group isomorphism between the
/// two top presentations, the stratum bijection, and one witness per
/// singular stratum for the links.
#[derive(Clone, Debug)]
pub struct SpaceIso {
    pub group: GroupIso,
    pub strata: BTreeMap<StratumId, StratumId>,
    pub links: BTreeMap<StratumId, SpaceIso>,
}

/// Search for an isomorphism: a bijection of strata preserving order, dims
/// and isotropy labels up to a group isomorphism, with isomorphic links,
/// recursively. Deterministic given input ordering; the identity group map
/// is tried first, so structurally identical spaces match immediately.
pub fn is_isomorphic(x: &StratSpace, y: &StratSpace) -> Option<SpaceIso> {
    for phi in group_isomorphisms(x.group(), y.group()) {
        if let Some(iso) = try_space_iso(x, y, &phi) {
            return Some(iso);
        }
    }
    None
}

fn try_space_iso(x: &StratSpace, y: &StratSpace, phi: &GroupIso) -> Option<SpaceIso> {
    if x.strata.len() != y.strata.len()
        || x.order.len() != y.order.len()
        || x.compact != y.compact
    {
        return None;
    }
    if phi.apply_subgroup(&x.acting).ok()? != y.acting {
        return None;
    }

    let x_ids: Vec<&StratumId> = x.strata.keys().collect();
    let y_ids: Vec<&StratumId> = y.strata.keys().collect();
    let xh = x.heights();
    let xa = x.heights_above();
    let yh = y.heights();
    let ya = y.heights_above();

    // Link-iso results per candidate pair, shared across the backtracking.
    let mut link_memo: BTreeMap<(StratumId, StratumId), Option<SpaceIso>> = BTreeMap::new();

    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(x_ids.len());
    for xi in &x_ids {
        let sx = &x.strata[*xi];
        let mapped_iso = phi.apply_subgroup(&sx.isotropy).ok()?;
        let mut row = Vec::new();
        for (j, yi) in y_ids.iter().enumerate() {
            let sy = &y.strata[*yi];
            if sx.dim != sy.dim
                || mapped_iso != sy.isotropy
                || xh[*xi] != yh[*yi]
                || xa[*xi] != ya[*yi]
                || sx.link.is_some() != sy.link.is_some()
            {
                continue;
            }
            if let (Some(lx), Some(ly)) = (&sx.link, &sy.link) {
                let entry = link_memo
                    .entry(((*xi).clone(), (*yi).clone()))
                    .or_insert_with(|| try_space_iso(&lx.space, &ly.space, phi));
                if entry.is_none() {
                    continue;
                }
            }
            row.push(j);
        }
        if row.is_empty() {
            return None;
        }
        candidates.push(row);
    }

    // Assign strata with the most constrained first.
    let mut slots: Vec<usize> = (0..x_ids.len()).collect();
    slots.sort_by_key(|&i| candidates[i].len());

    let mut assignment: BTreeMap<usize, usize> = BTreeMap::new();
    let mut used: BTreeSet<usize> = BTreeSet::new();
    if !assign(x, y, &x_ids, &y_ids, &candidates, &slots, 0, &mut assignment, &mut used) {
        return None;
    }

    let strata: BTreeMap<StratumId, StratumId> = assignment
        .iter()
        .map(|(&i, &j)| (x_ids[i].clone(), y_ids[j].clone()))
        .collect();
    let mut links = BTreeMap::new();
    for (xi, yi) in &strata {
        if x.strata[xi].link.is_some() {
            let iso = link_memo
                .remove(&(xi.clone(), yi.clone()))
                .flatten()
                .expect("candidate pairs have link isos");
            links.insert(xi.clone(), iso);
        }
    }
    Some(SpaceIso { group: phi.clone(), strata, links })
}

#[allow(clippy::too_many_arguments)]
fn assign(
    x: &StratSpace,
    y: &StratSpace,
    x_ids: &[&StratumId],
    y_ids: &[&StratumId],
    candidates: &[Vec<usize>],
    slots: &[usize],
    pos: usize,
    assignment: &mut BTreeMap<usize, usize>,
    used: &mut BTreeSet<usize>,
) -> bool {
    if pos == slots.len() {
        return true;
    }
    let i = slots[pos];
    'cand: for &j in &candidates[i] {
        if used.contains(&j) {
            continue;
        }
        for (&i2, &j2) in assignment.iter() {
            let xl1 = x.less(x_ids[i], x_ids[i2]);
            let xl2 = x.less(x_ids[i2], x_ids[i]);
            let yl1 = y.less(y_ids[j], y_ids[j2]);
            let yl2 = y.less(y_ids[j2], y_ids[j]);
            if xl1 != yl1 || xl2 != yl2 {
                continue 'cand;
            }
        }
        assignment.insert(i, j);
        used.insert(j);
        if assign(x, y, x_ids, y_ids, candidates, slots, pos + 1, assignment, used) {
            return true;
        }
        assignment.remove(&i);
        used.remove(&j);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn z(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n)
    }

    #[test]
    fn circle_is_a_valid_depth_zero_space() {
        let c = corpus::circle(4);
        assert!(c.validate().is_valid(), "{}", c.validate());
        assert_eq!(c.depth(), 0);
        assert!(c.compact);
        assert_eq!(c.minimal_strata(), c.maximal_strata());
    }

    #[test]
    fn cone_over_circle() {
        let c = cone(&corpus::circle(4)).unwrap();
        assert!(c.validate().is_valid(), "{}", c.validate());
        assert_eq!(c.depth(), 1);
        assert_eq!(c.strata.len(), 2);
        assert!(!c.compact);

        let vertex = StratumId::new("*");
        let top = StratumId::new("T'");
        assert_eq!(c.strata[&vertex].dim, 0);
        assert!(c.strata[&vertex].isotropy.is_full());
        assert_eq!(c.strata[&top].dim, 2);
        assert!(c.strata[&top].isotropy.is_trivial());
        assert!(c.less(&vertex, &top));
        assert_eq!(c.minimal_strata(), BTreeSet::from([vertex.clone()]));
        assert_eq!(c.maximal_strata(), BTreeSet::from([top]));
    }

    #[test]
    fn cone_over_rot_sphere_has_depth_two() {
        let c = cone(&corpus::rot_sphere(3)).unwrap();
        assert!(c.validate().is_valid(), "{}", c.validate());
        assert_eq!(c.depth(), 2);
        assert_eq!(c.strata.len(), 4);
        let vertex = StratumId::new("*");
        let pole_ray = StratumId::new("N'");
        let top = StratumId::new("T''");
        assert_eq!(c.strata[&pole_ray].dim, 1);
        assert_eq!(c.strata[&top].dim, 3);
        assert!(c.less(&vertex, &pole_ray) && c.less(&pole_ray, &top));
        // pole rays keep their circle links
        let l = c.strata[&pole_ray].link.as_ref().unwrap();
        assert_eq!(l.space.depth(), 0);
        assert_eq!(l.space.strata.len(), 1);
        assert_eq!(c.depth_above(&pole_ray), 1);
    }

    #[test]
    fn cone_rejects_open_bases() {
        let open = cone(&corpus::circle(2)).unwrap();
        assert_eq!(cone(&open).unwrap_err(), StratError::ConeNeedsCompactBase);
    }

    #[test]
    fn product_shifts_top_dims_only() {
        let c = cone(&corpus::rot_sphere(2)).unwrap();
        let p = product(2, &c);
        assert!(p.validate().is_valid(), "{}", p.validate());
        assert_eq!(p.depth(), c.depth());
        assert_eq!(p.strata[&StratumId::new("*")].dim, 2);
        assert_eq!(p.strata[&StratumId::new("T''")].dim, 5);
        // links untouched
        assert_eq!(
            p.strata[&StratumId::new("*")].link.as_ref().unwrap().space,
            c.strata[&StratumId::new("*")].link.as_ref().unwrap().space
        );
        assert!(!p.compact);
        assert_eq!(product(0, &c), c);
    }

    #[test]
    fn orbit_space_of_cone_over_rotating_circle() {
        let g = z(4);
        let x = cone(&corpus::circle(4)).unwrap();
        let k = Subgroup::closure(&g, &[g.element(&[2]).unwrap()]).unwrap();
        let (y, bij) = orbit_space(&x, &k).unwrap();
        assert!(y.validate().is_valid(), "{}", y.validate());
        assert_eq!(y.depth(), 1);
        assert_eq!(y.group().moduli(), &[2]);
        let vertex = StratumId::new("*");
        let top = StratumId::new("T'");
        assert!(y.strata[&vertex].isotropy.is_full());
        assert!(y.strata[&top].isotropy.is_trivial());
        assert_eq!(bij[&vertex], vertex);
        // the vertex link is now a circle acted on by the full Z2
        let l = y.strata[&vertex].link.as_ref().unwrap();
        assert!(l.space.acting.is_full());
        assert_eq!(l.space.group().moduli(), &[2]);
    }

    #[test]
    fn orbit_space_by_trivial_and_full_subgroups() {
        let x = cone(&corpus::rot_sphere(2)).unwrap();
        let g = x.group().clone();

        let (same, _) = orbit_space(&x, &Subgroup::trivial(&g)).unwrap();
        assert!(same.validate().is_valid());
        assert_eq!(same.depth(), x.depth());
        assert!(is_isomorphic(&x, &same).is_some());

        let (flat, _) = orbit_space(&x, &Subgroup::full(&g)).unwrap();
        assert!(flat.validate().is_valid(), "{}", flat.validate());
        assert_eq!(flat.depth(), x.depth());
        assert!(flat.group().is_trivial());
        for s in flat.strata.values() {
            assert!(s.isotropy.is_full()); // everything is fixed by Z1
        }
    }

    #[test]
    fn orbit_space_rejects_foreign_subgroups() {
        let x = cone(&corpus::circle(4)).unwrap();
        let h = Subgroup::trivial(&z(6));
        assert!(matches!(
            orbit_space(&x, &h),
            Err(StratError::Group(GroupError::AmbientMismatch))
        ));
    }

    #[test]
    fn validate_finds_corruption() {
        let mut x = cone(&corpus::rot_sphere(2)).unwrap();

        let mut broken_dim = x.clone();
        broken_dim.strata.get_mut(&StratumId::new("T''")).unwrap().dim = 7;
        let report = broken_dim.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.message.contains("dimension law")));

        let mut no_link = x.clone();
        no_link.strata.get_mut(&StratumId::new("N'")).unwrap().link = None;
        assert!(no_link
            .validate()
            .violations
            .iter()
            .any(|v| v.message.contains("no link")));

        let mut bad_order = x.clone();
        bad_order.order.insert((StratumId::new("T''"), StratumId::new("*")));
        assert!(bad_order
            .validate()
            .violations
            .iter()
            .any(|v| v.message.contains("antisymmetric")));

        // breaking the isotropy of a pole ray trips the attach agreement
        let g = x.group().clone();
        x.strata.get_mut(&StratumId::new("N'")).unwrap().isotropy = Subgroup::trivial(&g);
        assert!(x
            .validate()
            .violations
            .iter()
            .any(|v| v.message.contains("isotropy")));
    }

    #[test]
    fn isomorphism_ignores_names_but_respects_structure() {
        let a = cone(&corpus::rot_sphere(4)).unwrap();
        let b = cone(&corpus::rot_sphere(4)).unwrap();
        let iso = is_isomorphic(&a, &b).expect("identical spaces");
        assert!(iso.group.is_identity_presentation());
        assert!(iso.strata.iter().all(|(k, v)| k == v));

        assert!(is_isomorphic(&a, &cone(&corpus::rot_sphere(2)).unwrap()).is_none());
        assert!(is_isomorphic(&a, &corpus::rot_sphere(4)).is_none());
        assert!(is_isomorphic(&corpus::circle(3), &corpus::circle(3)).is_some());
    }

    #[test]
    fn isomorphism_uses_group_automorphisms() {
        // Z2 x Z2 with two different order-2 isotropy labels: related by the
        // swap automorphism, so the spaces are isomorphic.
        let g = FiniteAbelianGroup::new(&[2, 2]);
        let ka = Subgroup::closure(&g, &[g.element(&[1, 0]).unwrap()]).unwrap();
        let kb = Subgroup::closure(&g, &[g.element(&[0, 1]).unwrap()]).unwrap();
        let a = corpus::manifold(&g, &ka, 2, true);
        let b = corpus::manifold(&g, &kb, 2, true);
        let iso = is_isomorphic(&a, &b).expect("swap automorphism matches the labels");
        assert!(!iso.group.is_identity_presentation());
        let moved = iso.group.apply_subgroup(&ka).unwrap();
        assert_eq!(moved, kb);

        // ...but a different isotropy ORDER can never match.
        let full = Subgroup::full(&g);
        let c = corpus::manifold(&g, &full, 2, true);
        assert!(is_isomorphic(&a, &c).is_none());
    }

    #[test]
    fn depth_laws_on_small_examples() {
        let sphere = corpus::rot_sphere(5);
        assert_eq!(sphere.depth(), 1);
        let c = cone(&sphere).unwrap();
        assert_eq!(c.depth(), sphere.depth() + 1);
        assert_eq!(product(3, &c).depth(), c.depth());
        let g = c.group().clone();
        for k in crate::abelian::all_subgroups(&g) {
            let (o, _) = orbit_space(&c, &k).unwrap();
            assert_eq!(o.depth(), c.depth());
            assert!(o.validate().is_valid(), "{}", o.validate());
        }
    }
}
