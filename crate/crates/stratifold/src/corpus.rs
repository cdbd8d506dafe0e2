//! Deterministic example spaces used by the test suite and the docs.
//!
//! Everything here is built from five constructors: single-stratum
//! manifolds, rotation circles, suspensions, disjoint unions, and the
//! cone/product constructors from [`crate::strat`]. [`standard_corpus`]
//! enumerates a fixed catalogue of a few hundred spaces over groups of
//! order at most sixteen, reaching depth three.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::abelian::{all_subgroups, FiniteAbelianGroup, Subgroup};
use crate::strat::{cone, product, LinkData, StratSpace, Stratum, StratumId};

/// A single stratum `T` with the given dimension and isotropy, acted on by
/// the full group.
pub fn manifold(
    group: &FiniteAbelianGroup,
    isotropy: &Subgroup,
    dim: u32,
    compact: bool,
) -> StratSpace {
    let mut strata = BTreeMap::new();
    strata.insert(
        StratumId::new("T"),
        Stratum { dim, isotropy: isotropy.clone(), link: None },
    );
    StratSpace {
        acting: Subgroup::full(group),
        strata,
        order: BTreeSet::new(),
        compact,
    }
}

/// The circle rotated by `Z_m`: one free one-dimensional stratum.
pub fn circle(m: u64) -> StratSpace {
    let g = FiniteAbelianGroup::cyclic(m);
    let trivial = Subgroup::trivial(&g);
    manifold(&g, &trivial, 1, true)
}

/// The suspension of a compact space: two fixed vertices `N` and `S` whose
/// links are the base, below a primed cylinder copy of every base stratum.
///
/// Unlike the cone, the suspension is compact, so it can be iterated to
/// climb one depth per application.
pub fn suspension(base: &StratSpace) -> Result<StratSpace, crate::strat::StratError> {
    if !base.compact {
        return Err(crate::strat::StratError::ConeNeedsCompactBase);
    }
    let primed = |id: &StratumId| StratumId::new(format!("{id}'"));
    let mut strata: BTreeMap<StratumId, Stratum> = BTreeMap::new();
    let mut order: BTreeSet<(StratumId, StratumId)> = BTreeSet::new();
    let mut attach: BTreeMap<StratumId, StratumId> = BTreeMap::new();

    for (id, s) in &base.strata {
        let cid = primed(id);
        attach.insert(id.clone(), cid.clone());
        let link = s.link.as_ref().map(|l| LinkData {
            space: l.space.clone(),
            attach: l.attach.iter().map(|(k, v)| (k.clone(), primed(v))).collect(),
        });
        strata.insert(
            cid,
            Stratum { dim: s.dim + 1, isotropy: s.isotropy.clone(), link },
        );
    }
    for (a, b) in &base.order {
        order.insert((primed(a), primed(b)));
    }
    for vertex_name in ["N", "S"] {
        let vertex = StratumId::new(vertex_name);
        for id in base.strata.keys() {
            order.insert((vertex.clone(), primed(id)));
        }
        strata.insert(
            vertex,
            Stratum {
                dim: 0,
                isotropy: base.acting.clone(),
                link: Some(LinkData { space: base.clone(), attach: attach.clone() }),
            },
        );
    }
    Ok(StratSpace { acting: base.acting.clone(), strata, order, compact: true })
}

/// The two-sphere rotated by `Z_m` about its axis: two fixed poles with
/// circle links, one free two-dimensional stratum. The suspension of the
/// rotation circle.
pub fn rot_sphere(m: u64) -> StratSpace {
    suspension(&circle(m)).expect("circle is compact")
}

/// Disjoint union of two spaces with the same acting group. Strata are
/// suffixed `.1` and `.2`; no new order relations appear.
pub fn disjoint_union(
    a: &StratSpace,
    b: &StratSpace,
) -> Result<StratSpace, crate::strat::StratError> {
    if a.acting != b.acting {
        return Err(crate::strat::StratError::Group(
            crate::abelian::GroupError::AmbientMismatch,
        ));
    }
    let mut strata = BTreeMap::new();
    let mut order = BTreeSet::new();
    for (space, suffix) in [(a, ".1"), (b, ".2")] {
        let rename = |id: &StratumId| StratumId::new(format!("{id}{suffix}"));
        for (id, s) in &space.strata {
            // attach targets live at top level, so they are renamed along
            // with the strata; deeper links are self-contained.
            let link = s.link.as_ref().map(|l| LinkData {
                space: l.space.clone(),
                attach: l.attach.iter().map(|(k, v)| (k.clone(), rename(v))).collect(),
            });
            strata.insert(
                rename(id),
                Stratum { dim: s.dim, isotropy: s.isotropy.clone(), link },
            );
        }
        for (x, y) in &space.order {
            order.insert((rename(x), rename(y)));
        }
    }
    Ok(StratSpace {
        acting: a.acting.clone(),
        strata,
        order,
        compact: a.compact && b.compact,
    })
}

fn catalogue_groups() -> Vec<FiniteAbelianGroup> {
    [
        &[1u64][..],
        &[2],
        &[3],
        &[4],
        &[5],
        &[6],
        &[8],
        &[9],
        &[12],
        &[16],
        &[2, 2],
        &[2, 4],
        &[2, 6],
        &[2, 8],
        &[3, 3],
        &[4, 4],
        &[2, 2, 2],
        &[2, 2, 4],
    ]
    .iter()
    .map(|m| FiniteAbelianGroup::new(m))
    .collect()
}

/// A fixed catalogue of named spaces covering every constructor, depths
/// zero through three, mixed isotropy, and every group in a list of small
/// abelian groups. Deterministic: same list, same order, every call.
pub fn standard_corpus() -> Vec<(String, StratSpace)> {
    let mut out = Vec::new();
    for g in catalogue_groups() {
        let name = |shape: &str| format!("{shape}@{g}");
        let trivial = Subgroup::trivial(&g);
        let full = Subgroup::full(&g);

        let free_line = manifold(&g, &trivial, 1, true);
        let fixed_plane = manifold(&g, &full, 2, true);
        let susp = suspension(&free_line).expect("compact");
        let susp2 = suspension(&susp).expect("compact");
        let union = disjoint_union(&susp, &fixed_plane).expect("same group");

        out.push((name("free-line"), free_line.clone()));
        out.push((name("fixed-plane"), fixed_plane));
        out.push((name("susp"), susp.clone()));
        out.push((name("susp2"), susp2.clone()));
        out.push((name("cone-susp"), cone(&susp).expect("compact")));
        out.push((name("cone-susp2"), cone(&susp2).expect("compact")));
        out.push((name("prod-susp"), product(2, &susp)));
        out.push((name("susp-union"), suspension(&union).expect("compact")));
        out.push((name("union"), union));

        // Mixed-isotropy shapes for groups with a proper nontrivial subgroup.
        if let Some(h) = all_subgroups(&g)
            .into_iter()
            .find(|h| !h.is_trivial() && !h.is_full())
        {
            let half_line = manifold(&g, &h, 1, true);
            out.push((name("half-line"), half_line.clone()));
            out.push((
                name("susp-half"),
                suspension(&half_line).expect("compact"),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_and_well_formed() {
        let a = standard_corpus();
        let b = standard_corpus();
        assert_eq!(a.len(), b.len());
        assert!(a.len() >= 100, "catalogue has {} spaces", a.len());
        for ((na, sa), (nb, sb)) in a.iter().zip(b.iter()) {
            assert_eq!(na, nb);
            assert_eq!(sa, sb);
        }
        let names: BTreeSet<&String> = a.iter().map(|(n, _)| n).collect();
        assert_eq!(names.len(), a.len(), "names are unique");
    }

    #[test]
    fn corpus_spaces_validate() {
        for (name, space) in standard_corpus() {
            let report = space.validate();
            assert!(report.is_valid(), "{name}: {report}");
            assert!(space.strata.len() <= 12, "{name} has {} strata", space.strata.len());
            assert!(space.group().order() <= 16);
        }
    }

    #[test]
    fn corpus_reaches_depth_three() {
        let spaces = standard_corpus();
        let max = spaces.iter().map(|(_, s)| s.depth()).max().unwrap();
        assert_eq!(max, 3);
        for d in 0..=3 {
            assert!(
                spaces.iter().any(|(_, s)| s.depth() == d),
                "no space of depth {d}"
            );
        }
    }

    #[test]
    fn suspension_depth_and_compactness() {
        let s2 = rot_sphere(6);
        assert!(s2.compact);
        assert_eq!(s2.depth(), 1);
        let s3 = suspension(&s2).unwrap();
        assert!(s3.compact);
        assert_eq!(s3.depth(), 2);
        assert!(s3.validate().is_valid(), "{}", s3.validate());
        assert_eq!(
            suspension(&cone(&s2).unwrap()),
            Err(crate::strat::StratError::ConeNeedsCompactBase)
        );
    }

    #[test]
    fn disjoint_union_keeps_parts_incomparable() {
        let u = disjoint_union(&rot_sphere(2), &circle(2)).unwrap();
        assert!(u.validate().is_valid(), "{}", u.validate());
        assert_eq!(u.strata.len(), 4);
        assert_eq!(u.depth(), 1);
        assert!(!u.comparable(&StratumId::new("N.1"), &StratumId::new("T.2")));
        assert!(u.less(&StratumId::new("N.1"), &StratumId::new("T'.1")));
    }
}
