//! Finite abelian groups in product-of-cyclic presentation, their subgroups,
//! and quotient presentations.
//!
//! A group is `Z_{n1} x ... x Z_{nk}`, elements are residue tuples, and a
//! subgroup is identified by its full, sorted element list (the generators it
//! was built from are kept as provenance only). Quotients are presented in
//! invariant-factor form by running Smith normal form on the relation matrix
//! `[diag(n) | generators of K]`, which also yields the projection map.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::snf::{smith_normal_form, IntMat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupError {
    ArityMismatch { expected: usize, found: usize },
    ResidueOutOfRange { index: usize, residue: u64, modulus: u64 },
    /// Two operands live in different ambient groups (or a subgroup was
    /// handed to an operation over a group it does not belong to).
    AmbientMismatch,
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::ArityMismatch { expected, found } => {
                write!(f, "element arity mismatch: expected {expected}, found {found}")
            }
            GroupError::ResidueOutOfRange { index, residue, modulus } => write!(
                f,
                "residue {residue} at position {index} is out of range for modulus {modulus}"
            ),
            GroupError::AmbientMismatch => write!(f, "ambient group mismatch"),
        }
    }
}

impl core::error::Error for GroupError {}

/// `Z_{n1} x ... x Z_{nk}` with all `n_i >= 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiniteAbelianGroup {
    moduli: Vec<u64>,
}

/// A residue tuple. Only meaningful relative to an ambient group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroupElement {
    residues: Vec<u64>,
}

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residues.len() == 1 {
            write!(f, "{}", self.residues[0])
        } else {
            write!(f, "(")?;
            for (i, r) in self.residues.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{r}")?;
            }
            write!(f, ")")
        }
    }
}

impl FiniteAbelianGroup {
    /// Panics if `moduli` is empty or contains a zero; those are programmer
    /// errors, not data errors.
    pub fn new(moduli: &[u64]) -> Self {
        assert!(!moduli.is_empty(), "a group needs at least one cyclic factor");
        assert!(moduli.iter().all(|&n| n >= 1), "cyclic moduli must be positive");
        FiniteAbelianGroup { moduli: moduli.to_vec() }
    }

    pub fn cyclic(n: u64) -> Self {
        FiniteAbelianGroup::new(&[n])
    }

    /// The one-element group, presented as `Z_1`.
    pub fn trivial() -> Self {
        FiniteAbelianGroup::new(&[1])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn arity(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { residues: vec![0; self.arity()] }
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    fn validate(&self, e: &GroupElement) -> Result<(), GroupError> {
        if e.residues.len() != self.arity() {
            return Err(GroupError::ArityMismatch {
                expected: self.arity(),
                found: e.residues.len(),
            });
        }
        for (i, (&r, &n)) in e.residues.iter().zip(&self.moduli).enumerate() {
            if r >= n {
                return Err(GroupError::ResidueOutOfRange { index: i, residue: r, modulus: n });
            }
        }
        Ok(())
    }

    /// Strictly validated element construction.
    pub fn element(&self, residues: &[u64]) -> Result<GroupElement, GroupError> {
        let e = GroupElement { residues: residues.to_vec() };
        self.validate(&e)?;
        Ok(e)
    }

    /// Wrapping element construction; reduces each entry mod its modulus.
    pub fn reduce(&self, residues: &[i64]) -> GroupElement {
        assert_eq!(residues.len(), self.arity(), "arity mismatch");
        let residues = residues
            .iter()
            .zip(&self.moduli)
            .map(|(&r, &n)| r.rem_euclid(n as i64) as u64)
            .collect();
        GroupElement { residues }
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.validate(e).is_ok()
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        debug_assert!(self.contains(a) && self.contains(b));
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.moduli)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        GroupElement { residues }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        debug_assert!(self.contains(a));
        let residues =
            a.residues.iter().zip(&self.moduli).map(|(&x, &n)| (n - x) % n).collect();
        GroupElement { residues }
    }

    pub fn scalar_mul(&self, k: u64, a: &GroupElement) -> GroupElement {
        debug_assert!(self.contains(a));
        let residues = a
            .residues
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &n)| ((x as u128 * k as u128) % n as u128) as u64)
            .collect();
        GroupElement { residues }
    }

    pub fn element_order(&self, a: &GroupElement) -> u64 {
        debug_assert!(self.contains(a));
        a.residues
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &n)| n / gcd(n, x))
            .fold(1, lcm)
    }

    /// All elements, in lexicographic residue order.
    pub fn elements(&self) -> Elements<'_> {
        Elements { group: self, next: Some(vec![0; self.arity()]) }
    }

    /// Canonical invariant factors (diagonal of the Smith normal form of
    /// `diag(moduli)`, with the trivial factors dropped). Empty for the
    /// trivial group.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let diag: Vec<i64> = self.moduli.iter().map(|&n| n as i64).collect();
        let s = smith_normal_form(&IntMat::diagonal(&diag));
        s.d.diagonal_entries().into_iter().filter(|&d| d > 1).map(|d| d as u64).collect()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_factors(f, &self.invariant_factors())
    }
}

fn format_factors(f: &mut fmt::Formatter<'_>, factors: &[u64]) -> fmt::Result {
    if factors.is_empty() {
        return write!(f, "1");
    }
    for (i, d) in factors.iter().enumerate() {
        if i > 0 {
            write!(f, "x")?;
        }
        write!(f, "Z{d}")?;
    }
    Ok(())
}

pub struct Elements<'a> {
    group: &'a FiniteAbelianGroup,
    next: Option<Vec<u64>>,
}

impl Iterator for Elements<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let current = self.next.take()?;
        let mut bumped = current.clone();
        let mut advanced = false;
        for i in (0..bumped.len()).rev() {
            if bumped[i] + 1 < self.group.moduli[i] {
                bumped[i] += 1;
                for slot in bumped.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            self.next = Some(bumped);
        }
        Some(GroupElement { residues: current })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// A subgroup, canonically identified by its sorted element list.
///
/// Equality ignores the stored generators; two subgroups are equal when they
/// sit in the same presentation of the ambient group and have the same
/// elements.
#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Subgroup {
    ambient: FiniteAbelianGroup,
    generators: Vec<GroupElement>,
    elements: Vec<GroupElement>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Closure of a generating set; breadth-first over repeated addition.
    pub fn closure(
        ambient: &FiniteAbelianGroup,
        generators: &[GroupElement],
    ) -> Result<Subgroup, GroupError> {
        for g in generators {
            ambient.validate(g)?;
        }
        let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
        seen.insert(ambient.identity());
        let mut queue: VecDeque<GroupElement> = VecDeque::new();
        queue.push_back(ambient.identity());
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = ambient.add(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(Subgroup {
            ambient: ambient.clone(),
            generators: generators.to_vec(),
            elements: seen.into_iter().collect(),
        })
    }

    pub fn trivial(ambient: &FiniteAbelianGroup) -> Subgroup {
        Subgroup {
            ambient: ambient.clone(),
            generators: Vec::new(),
            elements: vec![ambient.identity()],
        }
    }

    pub fn full(ambient: &FiniteAbelianGroup) -> Subgroup {
        let generators: Vec<GroupElement> = (0..ambient.arity())
            .map(|i| {
                let mut residues = vec![0; ambient.arity()];
                if ambient.moduli()[i] > 1 {
                    residues[i] = 1;
                }
                GroupElement { residues }
            })
            .collect();
        Subgroup {
            ambient: ambient.clone(),
            generators,
            elements: ambient.elements().collect(),
        }
    }

    pub fn ambient(&self) -> &FiniteAbelianGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Sorted element list; this is the subgroup's identity.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    pub fn is_full(&self) -> bool {
        self.order() == self.ambient.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_contained_in(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.elements.iter().all(|e| other.contains(e))
    }

    /// Smallest subgroup containing both; for abelian groups this is just the
    /// sumset `{a + b}`.
    pub fn join(&self, other: &Subgroup) -> Result<Subgroup, GroupError> {
        if self.ambient != other.ambient {
            return Err(GroupError::AmbientMismatch);
        }
        let mut elements: BTreeSet<GroupElement> = BTreeSet::new();
        for a in &self.elements {
            for b in &other.elements {
                elements.insert(self.ambient.add(a, b));
            }
        }
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        Ok(Subgroup {
            ambient: self.ambient.clone(),
            generators,
            elements: elements.into_iter().collect(),
        })
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup, GroupError> {
        if self.ambient != other.ambient {
            return Err(GroupError::AmbientMismatch);
        }
        let elements: Vec<GroupElement> =
            self.elements.iter().filter(|e| other.contains(e)).cloned().collect();
        Ok(Subgroup {
            ambient: self.ambient.clone(),
            generators: elements.clone(),
            elements,
        })
    }

    /// Abstract type of the subgroup, as ascending invariant factors
    /// (empty for the trivial subgroup).
    ///
    /// Computed by annihilator counting: for each prime `p`, the counts
    /// `#{x : p^j x = 0}` determine the partition of `p`-exponents, and the
    /// per-prime partitions combine largest-with-largest into factors.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let n = self.order();
        if n == 1 {
            return Vec::new();
        }
        let mut per_prime: Vec<Vec<u64>> = Vec::new();
        for (p, mult) in prime_factorization(n) {
            // e[j] = log_p #{x in K : p^j x = 0}
            let mut exps: Vec<u32> = Vec::with_capacity(mult as usize + 1);
            for j in 0..=mult {
                let pj = p.pow(j);
                let count = self
                    .elements
                    .iter()
                    .filter(|e| self.ambient.scalar_mul(pj, e) == self.ambient.identity())
                    .count() as u64;
                exps.push(log_exact(p, count));
            }
            // parts_ge[j] = number of partition parts >= j; conjugating once
            // recovers the exponent partition itself, descending.
            let parts_ge: Vec<u32> = exps.windows(2).map(|w| w[1] - w[0]).collect();
            let mut partition: Vec<u32> = Vec::new();
            let mut k = 1;
            loop {
                let count = parts_ge.iter().filter(|&&m| m >= k).count() as u32;
                if count == 0 {
                    break;
                }
                partition.push(count);
                k += 1;
            }
            per_prime.push(partition.iter().map(|&e| p.pow(e)).collect());
        }
        combine_prime_power_partitions(&per_prime)
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_factors(f, &self.invariant_factors())
    }
}

fn prime_factorization(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = 0;
            while n % p == 0 {
                n /= p;
                m += 1;
            }
            out.push((p, m));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn log_exact(p: u64, mut n: u64) -> u32 {
    let mut e = 0;
    while n > 1 {
        debug_assert_eq!(n % p, 0, "count is not a power of {p}");
        n /= p;
        e += 1;
    }
    e
}

/// Align per-prime prime-power lists largest-with-largest and multiply them
/// into ascending invariant factors.
fn combine_prime_power_partitions(per_prime: &[Vec<u64>]) -> Vec<u64> {
    let len = per_prime.iter().map(|v| v.len()).max().unwrap_or(0);
    let mut factors: Vec<u64> = Vec::with_capacity(len);
    for i in 0..len {
        let mut f = 1u64;
        for powers in per_prime {
            if i < powers.len() {
                f *= powers[i];
            }
        }
        factors.push(f);
    }
    factors.reverse();
    factors
}

/// Quotient presentation `source -> target = source / kernel` with the full
/// projection map materialized.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    source: FiniteAbelianGroup,
    kernel: Subgroup,
    target: FiniteAbelianGroup,
    projection: BTreeMap<GroupElement, GroupElement>,
}

impl QuotientPresentation {
    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn project(&self, e: &GroupElement) -> Result<GroupElement, GroupError> {
        self.source.validate(e)?;
        Ok(self.projection.get(e).expect("projection is total").clone())
    }

    /// Image of a subgroup of the source under the projection.
    pub fn push_subgroup(&self, h: &Subgroup) -> Result<Subgroup, GroupError> {
        if h.ambient() != &self.source {
            return Err(GroupError::AmbientMismatch);
        }
        let mut elements: BTreeSet<GroupElement> = BTreeSet::new();
        for e in h.elements() {
            elements.insert(self.project(e)?);
        }
        let generators = h
            .generators()
            .iter()
            .map(|g| self.project(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Subgroup {
            ambient: self.target.clone(),
            generators,
            elements: elements.into_iter().collect(),
        })
    }
}

/// Presents `g / k` in invariant-factor form.
///
/// Smith normal form of the relation matrix `[diag(moduli) | elements of k]`
/// yields `U M V = D`; the cokernel is `⊕ Z_{d_i}` and `x ↦ U x mod d`
/// descends to the projection. Trivial factors are dropped; a trivial
/// quotient is presented as `Z_1`.
pub fn quotient(
    g: &FiniteAbelianGroup,
    k: &Subgroup,
) -> Result<QuotientPresentation, GroupError> {
    if k.ambient() != g {
        return Err(GroupError::AmbientMismatch);
    }
    let arity = g.arity();
    let mut m = IntMat::zero(arity, arity + k.elements().len());
    for (i, &n) in g.moduli().iter().enumerate() {
        m.set(i, i, n as i64);
    }
    for (j, e) in k.elements().iter().enumerate() {
        for (i, &r) in e.residues().iter().enumerate() {
            m.set(i, arity + j, r as i64);
        }
    }
    let s = smith_normal_form(&m);
    let d: Vec<i64> = (0..arity).map(|i| s.d.get(i, i)).collect();
    debug_assert!(d.iter().all(|&x| x > 0), "relation matrix has full rank");

    let kept: Vec<usize> = (0..arity).filter(|&i| d[i] > 1).collect();
    let target = if kept.is_empty() {
        FiniteAbelianGroup::trivial()
    } else {
        let moduli: Vec<u64> = kept.iter().map(|&i| d[i] as u64).collect();
        FiniteAbelianGroup::new(&moduli)
    };

    let mut projection = BTreeMap::new();
    for x in g.elements() {
        let y = if kept.is_empty() {
            target.identity()
        } else {
            let residues: Vec<u64> = kept
                .iter()
                .map(|&i| {
                    let mut acc: i64 = 0;
                    for (j, &r) in x.residues().iter().enumerate() {
                        acc += s.u.get(i, j) * r as i64;
                    }
                    acc.rem_euclid(d[i]) as u64
                })
                .collect();
            GroupElement { residues }
        };
        projection.insert(x, y);
    }

    Ok(QuotientPresentation { source: g.clone(), kernel: k.clone(), target, projection })
}

/// Every subgroup, found by extending known subgroups one generator at a
/// time and closing. Deterministic: sorted by order, then by element list.
pub fn all_subgroups(g: &FiniteAbelianGroup) -> Vec<Subgroup> {
    let mut found: BTreeMap<Vec<GroupElement>, Subgroup> = BTreeMap::new();
    let trivial = Subgroup::trivial(g);
    found.insert(trivial.elements().to_vec(), trivial.clone());
    let mut queue: VecDeque<Subgroup> = VecDeque::new();
    queue.push_back(trivial);
    while let Some(s) = queue.pop_front() {
        for e in g.elements() {
            if s.contains(&e) {
                continue;
            }
            let mut gens = s.generators().to_vec();
            gens.push(e);
            let bigger = Subgroup::closure(g, &gens).expect("generators are valid");
            if !found.contains_key(bigger.elements()) {
                found.insert(bigger.elements().to_vec(), bigger.clone());
                queue.push_back(bigger);
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_values().collect();
    out.sort_by(|a, b| (a.order(), a.elements()).cmp(&(b.order(), b.elements())));
    out
}

/// An isomorphism between two presentations, witnessed by the images of the
/// source's canonical basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupIso {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    images: Vec<GroupElement>,
}

impl GroupIso {
    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    /// Images of the canonical basis vectors of the source.
    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn apply(&self, e: &GroupElement) -> Result<GroupElement, GroupError> {
        self.source.validate(e)?;
        let mut acc = self.target.identity();
        for (&r, img) in e.residues().iter().zip(&self.images) {
            let term = self.target.scalar_mul(r, img);
            acc = self.target.add(&acc, &term);
        }
        Ok(acc)
    }

    pub fn apply_subgroup(&self, s: &Subgroup) -> Result<Subgroup, GroupError> {
        if s.ambient() != &self.source {
            return Err(GroupError::AmbientMismatch);
        }
        let mut elements: BTreeSet<GroupElement> = BTreeSet::new();
        for e in s.elements() {
            elements.insert(self.apply(e)?);
        }
        let generators = s
            .generators()
            .iter()
            .map(|g| self.apply(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Subgroup {
            ambient: self.target.clone(),
            generators,
            elements: elements.into_iter().collect(),
        })
    }

    pub fn is_identity_presentation(&self) -> bool {
        self.source == self.target
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, img)| {
                    img.residues().iter().enumerate().all(|(j, &r)| {
                        if i == j {
                            r == if self.target.moduli()[j] > 1 { 1 } else { 0 }
                        } else {
                            r == 0
                        }
                    })
                })
    }
}

/// Lazy enumeration of all isomorphisms `a -> b`, in a deterministic order.
///
/// When the presentations agree the identity map is yielded first, which
/// keeps the common "labels literally match" case cheap.
pub struct GroupIsoIter {
    a: FiniteAbelianGroup,
    b: FiniteAbelianGroup,
    /// Candidate images for each canonical generator of `a`.
    candidates: Vec<Vec<GroupElement>>,
    /// Odometer over the candidate lists; `None` once exhausted.
    indices: Option<Vec<usize>>,
}

/// All isomorphisms between two presentations (empty if none exist).
pub fn group_isomorphisms(a: &FiniteAbelianGroup, b: &FiniteAbelianGroup) -> GroupIsoIter {
    if a.invariant_factors() != b.invariant_factors() {
        return GroupIsoIter {
            a: a.clone(),
            b: b.clone(),
            candidates: Vec::new(),
            indices: None,
        };
    }
    let mut candidates: Vec<Vec<GroupElement>> = Vec::with_capacity(a.arity());
    for (i, &n) in a.moduli().iter().enumerate() {
        let mut list: Vec<GroupElement> =
            b.elements().filter(|e| b.scalar_mul(n, e) == b.identity()).collect();
        if a.moduli() == b.moduli() {
            // Move the corresponding basis vector to the front so the
            // identity tuple comes out first.
            let mut unit = vec![0; b.arity()];
            if b.moduli()[i] > 1 {
                unit[i] = 1;
            }
            let unit = GroupElement { residues: unit };
            if let Some(pos) = list.iter().position(|e| *e == unit) {
                list.swap(0, pos);
            }
        }
        candidates.push(list);
    }
    let indices = if candidates.iter().all(|c| !c.is_empty()) {
        Some(vec![0; candidates.len()])
    } else {
        None
    };
    GroupIsoIter { a: a.clone(), b: b.clone(), candidates, indices }
}

impl Iterator for GroupIsoIter {
    type Item = GroupIso;

    fn next(&mut self) -> Option<GroupIso> {
        loop {
            let indices = self.indices.as_ref()?.clone();
            let images: Vec<GroupElement> = indices
                .iter()
                .enumerate()
                .map(|(i, &j)| self.candidates[i][j].clone())
                .collect();
            // advance the odometer before any early return
            let mut next = indices;
            let mut exhausted = true;
            for i in (0..next.len()).rev() {
                if next[i] + 1 < self.candidates[i].len() {
                    next[i] += 1;
                    for slot in next.iter_mut().skip(i + 1) {
                        *slot = 0;
                    }
                    exhausted = false;
                    break;
                }
            }
            self.indices = if exhausted { None } else { Some(next) };

            // A residue-wise linear map with order-respecting images is a
            // homomorphism; it is bijective iff the images generate.
            let span = Subgroup::closure(&self.b, &images).expect("images are valid");
            if span.order() == self.b.order() {
                return Some(GroupIso {
                    source: self.a.clone(),
                    target: self.b.clone(),
                    images,
                });
            }
            if self.indices.is_none() {
                return None;
            }
        }
    }
}
