//! A calculus for stratified spaces carrying an action of a finite abelian
//! group.
//!
//! The crate is split into five modules:
//!
//! * [`abelian`] — finite abelian groups in invariant-factor presentation,
//!   subgroups as closed element lists, and quotient presentations.
//! * [`snf`] — integer matrices and Smith normal form with unimodular
//!   transform witnesses; this is what quotient presentations are built on.
//! * [`strat`] — the recursive combinatorial skeleton of a stratified space:
//!   a poset of strata with dimensions, isotropy labels and link spaces,
//!   together with cones, products, orbit spaces and isomorphism testing.
//! * [`unfold`] — elementary unfolding steps (peel the minimal strata off,
//!   doubling the isolated ones) and full unfolding chains down to depth 0.
//! * [`model`] — a numeric realization of a small catalog of spaces, with
//!   group actions on coordinates, tube radia, radial scaling, the
//!   double-covering unfolding map on unitary sub-bundles, orbit
//!   canonicalization and a sampling-based control-data checker.
//!
//! [`corpus`] provides deterministic example spaces (spheres, suspensions,
//! disjoint unions and a generated gallery) used throughout the test suites.
//!
//! The crate is `no_std` (it uses `alloc`); all floating-point helpers come
//! from `libm`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod abelian;
pub mod corpus;
pub mod model;
pub mod snf;
pub mod strat;
pub mod unfold;

pub(crate) mod math;
