//! Numeric realizations: concrete coordinates for a family of spaces built
//! from Euclidean factors, rotation circles, rotation spheres, cones, and
//! products.
//!
//! A [`SpaceExpr`] is realized into a [`RealizedSpace`]: the combinatorial
//! skeleton from [`crate::strat`] plus a tube radius for every singular
//! stratum. Points are coordinate trees shaped like the expression. All
//! numeric operators — the group action, transverse radii, radial scalings,
//! tube projections and unfoldings, orbit maps — walk the expression and
//! the point in lockstep, so no flattening into a global chart ever
//! happens.
//!
//! Angles live in `[0, 2π)`, colatitudes in `[0, π]`, cone radii in
//! `[0, ∞)`. Canonicalization snaps coordinates within `1e-12` of a
//! degenerate locus (cone vertex, sphere pole) onto it; approximate
//! comparisons default to `1e-9`.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::abelian::{FiniteAbelianGroup, GroupElement, GroupError, Subgroup};
use crate::corpus;
use crate::math::{abs, circular_distance, wrap_angle, TAU};
use crate::strat::{self, StratError, StratSpace, StratumId};

pub const PI: f64 = core::f64::consts::PI;

/// Default transverse radius of every tube.
pub const DEFAULT_TUBE_RADIUS: f64 = 0.5;

/// Snapping tolerance for canonical coordinates.
pub const CANONICAL_TOL: f64 = 1e-12;

/// Default tolerance for approximate point comparisons and residual checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// The realizable grammar.
///
/// `Circle(m)` and `RotSphere(m)` carry the rotation action of `Z_m`;
/// `Euclidean(k)` is acted on trivially. A product may contain at most one
/// factor that is not (a product of) Euclidean factors; that factor
/// contributes the symmetry and the strata.
#[derive(Clone, PartialEq, Eq, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SpaceExpr {
    Euclidean(u32),
    Circle(u64),
    RotSphere(u64),
    Cone(Box<SpaceExpr>),
    Product(Vec<SpaceExpr>),
}

impl core::fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SpaceExpr::Euclidean(k) => write!(f, "euclidean({k})"),
            SpaceExpr::Circle(m) => write!(f, "circle({m})"),
            SpaceExpr::RotSphere(m) => write!(f, "rotsphere({m})"),
            SpaceExpr::Cone(b) => write!(f, "cone({b})"),
            SpaceExpr::Product(fs) => {
                write!(f, "product(")?;
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A point of a realized space: a coordinate tree shaped like the
/// expression.
#[derive(Clone, PartialEq, Debug)]
pub enum Point {
    Euclidean(Vec<f64>),
    Circle(f64),
    Sphere { longitude: f64, colatitude: f64 },
    Cone { inner: Box<Point>, radius: f64 },
    Product(Vec<Point>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ModelError {
    ConeNeedsCompactBase,
    /// More than one product factor carries symmetry or singular strata.
    TooManySingularFactors { found: usize },
    UnknownStratum(StratumId),
    NotSingular(StratumId),
    /// The point tree does not fit the expression.
    ShapeMismatch,
    NonPositiveScale,
    /// A radial scaling left the chart around a sphere pole.
    ChartOverflow,
    NotOnUnitSphere,
    /// A tube point at transverse radius zero has no discrete preimage.
    DegenerateRadius,
    ZeroGlueParameter,
    Group(GroupError),
}

impl core::fmt::Display for ModelError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ModelError::ConeNeedsCompactBase => write!(f, "cone base must be compact"),
            ModelError::TooManySingularFactors { found } => {
                write!(f, "product admits one singular factor, found {found}")
            }
            ModelError::UnknownStratum(id) => write!(f, "unknown stratum {id}"),
            ModelError::NotSingular(id) => write!(f, "stratum {id} is not singular"),
            ModelError::ShapeMismatch => write!(f, "point does not fit the space"),
            ModelError::NonPositiveScale => write!(f, "radial scale must be positive"),
            ModelError::ChartOverflow => write!(f, "radial scaling left the polar chart"),
            ModelError::NotOnUnitSphere => {
                write!(f, "point is not on the unit sphere of the tube")
            }
            ModelError::DegenerateRadius => {
                write!(f, "transverse radius is zero; the preimage is not discrete")
            }
            ModelError::ZeroGlueParameter => write!(f, "glue parameter must be nonzero"),
            ModelError::Group(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ModelError {}

impl ModelError {
    /// Restore the caller's stratum id when unwinding out of a cone
    /// recursion (which strips one prime).
    fn with_stratum(self, from: &StratumId, to: &StratumId) -> ModelError {
        match self {
            ModelError::NotSingular(x) if x == *from => ModelError::NotSingular(to.clone()),
            ModelError::UnknownStratum(x) if x == *from => {
                ModelError::UnknownStratum(to.clone())
            }
            e => e,
        }
    }
}

impl From<GroupError> for ModelError {
    fn from(e: GroupError) -> Self {
        ModelError::Group(e)
    }
}

impl From<StratError> for ModelError {
    fn from(e: StratError) -> Self {
        match e {
            StratError::ConeNeedsCompactBase => ModelError::ConeNeedsCompactBase,
            StratError::Group(g) => ModelError::Group(g),
        }
    }
}

/// Total dimension when the expression is a (product of) Euclidean
/// factor(s); `None` as soon as any symmetry or singularity appears.
pub fn euclidean_dim(expr: &SpaceExpr) -> Option<u32> {
    match expr {
        SpaceExpr::Euclidean(k) => Some(*k),
        SpaceExpr::Product(fs) => fs.iter().map(euclidean_dim).sum(),
        _ => None,
    }
}

/// Index of the unique non-Euclidean factor, if any.
fn designated_factor(factors: &[SpaceExpr]) -> Result<Option<usize>, ModelError> {
    let singular: Vec<usize> = factors
        .iter()
        .enumerate()
        .filter(|(_, f)| euclidean_dim(f).is_none())
        .map(|(i, _)| i)
        .collect();
    match singular.len() {
        0 => Ok(None),
        1 => Ok(Some(singular[0])),
        n => Err(ModelError::TooManySingularFactors { found: n }),
    }
}

/// The rotation group of the expression.
pub fn group_of(expr: &SpaceExpr) -> Result<FiniteAbelianGroup, ModelError> {
    match expr {
        SpaceExpr::Euclidean(_) => Ok(FiniteAbelianGroup::trivial()),
        SpaceExpr::Circle(m) | SpaceExpr::RotSphere(m) => Ok(FiniteAbelianGroup::cyclic(*m)),
        SpaceExpr::Cone(b) => group_of(b),
        SpaceExpr::Product(fs) => match designated_factor(fs)? {
            Some(i) => group_of(&fs[i]),
            None => Ok(FiniteAbelianGroup::trivial()),
        },
    }
}

fn skeleton_of(expr: &SpaceExpr) -> Result<StratSpace, ModelError> {
    match expr {
        SpaceExpr::Euclidean(k) => {
            let g = FiniteAbelianGroup::trivial();
            let t = Subgroup::trivial(&g);
            Ok(corpus::manifold(&g, &t, *k, *k == 0))
        }
        SpaceExpr::Circle(m) => Ok(corpus::circle(*m)),
        SpaceExpr::RotSphere(m) => Ok(corpus::rot_sphere(*m)),
        SpaceExpr::Cone(b) => Ok(strat::cone(&skeleton_of(b)?)?),
        SpaceExpr::Product(fs) => {
            let trivial_dim: u32 = fs
                .iter()
                .filter_map(euclidean_dim)
                .sum();
            match designated_factor(fs)? {
                None => skeleton_of(&SpaceExpr::Euclidean(trivial_dim)),
                Some(i) => Ok(strat::product(trivial_dim, &skeleton_of(&fs[i])?)),
            }
        }
    }
}

/// A realized space: the expression, its skeleton, and one tube radius per
/// singular stratum.
#[derive(Clone, PartialEq, Debug)]
pub struct RealizedSpace {
    pub expr: SpaceExpr,
    pub skeleton: StratSpace,
    pub tubes: BTreeMap<StratumId, f64>,
}

/// Build the skeleton and install default tubes.
pub fn realize(expr: &SpaceExpr) -> Result<RealizedSpace, ModelError> {
    let skeleton = skeleton_of(expr)?;
    let tubes = skeleton
        .strata
        .keys()
        .filter(|id| skeleton.is_singular(id))
        .map(|id| (id.clone(), DEFAULT_TUBE_RADIUS))
        .collect();
    Ok(RealizedSpace { expr: expr.clone(), skeleton, tubes })
}

fn strip_prime(id: &StratumId) -> Option<StratumId> {
    id.as_str().strip_suffix('\'').map(StratumId::new)
}

fn prime(id: &StratumId) -> StratumId {
    StratumId::new(format!("{id}'"))
}

/// The canonical point of an expression: origin coordinates, equatorial on
/// spheres, the vertex of cones.
pub fn basepoint(expr: &SpaceExpr) -> Point {
    match expr {
        SpaceExpr::Euclidean(k) => Point::Euclidean(alloc::vec![0.0; *k as usize]),
        SpaceExpr::Circle(_) => Point::Circle(0.0),
        SpaceExpr::RotSphere(_) => Point::Sphere { longitude: 0.0, colatitude: PI / 2.0 },
        SpaceExpr::Cone(b) => Point::Cone { inner: Box::new(basepoint(b)), radius: 0.0 },
        SpaceExpr::Product(fs) => Point::Product(fs.iter().map(basepoint).collect()),
    }
}

/// Snap coordinates onto canonical representatives: wrapped angles,
/// longitude zero at the poles, the basepoint fiber at the cone vertex.
pub fn canonicalize(expr: &SpaceExpr, p: &Point) -> Result<Point, ModelError> {
    match (expr, p) {
        (SpaceExpr::Euclidean(k), Point::Euclidean(xs)) => {
            if xs.len() != *k as usize {
                return Err(ModelError::ShapeMismatch);
            }
            Ok(Point::Euclidean(xs.clone()))
        }
        (SpaceExpr::Circle(_), Point::Circle(theta)) => Ok(Point::Circle(wrap_angle(*theta))),
        (SpaceExpr::RotSphere(_), Point::Sphere { longitude, colatitude }) => {
            if !(*colatitude >= -CANONICAL_TOL && *colatitude <= PI + CANONICAL_TOL) {
                return Err(ModelError::ShapeMismatch);
            }
            if *colatitude <= CANONICAL_TOL {
                Ok(Point::Sphere { longitude: 0.0, colatitude: 0.0 })
            } else if *colatitude >= PI - CANONICAL_TOL {
                Ok(Point::Sphere { longitude: 0.0, colatitude: PI })
            } else {
                Ok(Point::Sphere {
                    longitude: wrap_angle(*longitude),
                    colatitude: *colatitude,
                })
            }
        }
        (SpaceExpr::Cone(b), Point::Cone { inner, radius }) => {
            if *radius < -CANONICAL_TOL {
                return Err(ModelError::ShapeMismatch);
            }
            if *radius <= CANONICAL_TOL {
                Ok(Point::Cone { inner: Box::new(basepoint(b)), radius: 0.0 })
            } else {
                Ok(Point::Cone {
                    inner: Box::new(canonicalize(b, inner)?),
                    radius: *radius,
                })
            }
        }
        (SpaceExpr::Product(fs), Point::Product(ps)) => {
            if fs.len() != ps.len() {
                return Err(ModelError::ShapeMismatch);
            }
            let parts: Result<Vec<Point>, ModelError> = fs
                .iter()
                .zip(ps.iter())
                .map(|(f, q)| canonicalize(f, q))
                .collect();
            Ok(Point::Product(parts?))
        }
        _ => Err(ModelError::ShapeMismatch),
    }
}

/// Metric-aware approximate equality: circular distance on angles, and
/// degeneracy at vertices and poles (where the fiber coordinate carries no
/// information).
pub fn points_approx_eq(
    expr: &SpaceExpr,
    a: &Point,
    b: &Point,
    tol: f64,
) -> Result<bool, ModelError> {
    match (expr, a, b) {
        (SpaceExpr::Euclidean(k), Point::Euclidean(xs), Point::Euclidean(ys)) => {
            if xs.len() != *k as usize || ys.len() != *k as usize {
                return Err(ModelError::ShapeMismatch);
            }
            Ok(xs.iter().zip(ys).all(|(x, y)| abs(x - y) <= tol))
        }
        (SpaceExpr::Circle(_), Point::Circle(x), Point::Circle(y)) => {
            Ok(circular_distance(*x, *y) <= tol)
        }
        (
            SpaceExpr::RotSphere(_),
            Point::Sphere { longitude: la, colatitude: ca },
            Point::Sphere { longitude: lb, colatitude: cb },
        ) => {
            if (*ca <= tol && *cb <= tol) || (*ca >= PI - tol && *cb >= PI - tol) {
                return Ok(true);
            }
            Ok(abs(ca - cb) <= tol && circular_distance(*la, *lb) <= tol)
        }
        (
            SpaceExpr::Cone(base),
            Point::Cone { inner: ia, radius: ra },
            Point::Cone { inner: ib, radius: rb },
        ) => {
            if *ra <= tol && *rb <= tol {
                return Ok(true);
            }
            Ok(abs(ra - rb) <= tol && points_approx_eq(base, ia, ib, tol)?)
        }
        (SpaceExpr::Product(fs), Point::Product(ps), Point::Product(qs)) => {
            if fs.len() != ps.len() || fs.len() != qs.len() {
                return Err(ModelError::ShapeMismatch);
            }
            for ((f, p), q) in fs.iter().zip(ps).zip(qs) {
                if !points_approx_eq(f, p, q, tol)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Err(ModelError::ShapeMismatch),
    }
}

/// Act by a group element: rotation by `2π·g/m` on every circle and sphere
/// longitude. The result is canonical.
pub fn act(expr: &SpaceExpr, g: &GroupElement, p: &Point) -> Result<Point, ModelError> {
    let group = group_of(expr)?;
    if !group.contains(g) {
        return Err(ModelError::Group(GroupError::ArityMismatch {
            expected: group.arity(),
            found: g.residues().len(),
        }));
    }
    let turned = act_unchecked(expr, g, p)?;
    canonicalize(expr, &turned)
}

fn act_unchecked(expr: &SpaceExpr, g: &GroupElement, p: &Point) -> Result<Point, ModelError> {
    match (expr, p) {
        (SpaceExpr::Euclidean(_), Point::Euclidean(_)) => Ok(p.clone()),
        (SpaceExpr::Circle(m), Point::Circle(theta)) => {
            let shift = TAU * g.residues()[0] as f64 / *m as f64;
            Ok(Point::Circle(theta + shift))
        }
        (SpaceExpr::RotSphere(m), Point::Sphere { longitude, colatitude }) => {
            let shift = TAU * g.residues()[0] as f64 / *m as f64;
            Ok(Point::Sphere { longitude: longitude + shift, colatitude: *colatitude })
        }
        (SpaceExpr::Cone(b), Point::Cone { inner, radius }) => Ok(Point::Cone {
            inner: Box::new(act_unchecked(b, g, inner)?),
            radius: *radius,
        }),
        (SpaceExpr::Product(fs), Point::Product(ps)) => {
            if fs.len() != ps.len() {
                return Err(ModelError::ShapeMismatch);
            }
            let designated = designated_factor(fs)?;
            let mut out = Vec::with_capacity(ps.len());
            for (i, (f, q)) in fs.iter().zip(ps.iter()).enumerate() {
                if Some(i) == designated {
                    out.push(act_unchecked(f, g, q)?);
                } else {
                    out.push(q.clone());
                }
            }
            Ok(Point::Product(out))
        }
        _ => Err(ModelError::ShapeMismatch),
    }
}

/// The top-level stratum containing the point.
pub fn stratum_of(expr: &SpaceExpr, p: &Point) -> Result<StratumId, ModelError> {
    match (expr, p) {
        (SpaceExpr::Euclidean(_), Point::Euclidean(_))
        | (SpaceExpr::Circle(_), Point::Circle(_)) => Ok(StratumId::new("T")),
        (SpaceExpr::RotSphere(_), Point::Sphere { colatitude, .. }) => {
            if *colatitude <= CANONICAL_TOL {
                Ok(StratumId::new("N"))
            } else if *colatitude >= PI - CANONICAL_TOL {
                Ok(StratumId::new("S"))
            } else {
                Ok(StratumId::new("T'"))
            }
        }
        (SpaceExpr::Cone(b), Point::Cone { inner, radius }) => {
            if *radius <= CANONICAL_TOL {
                Ok(StratumId::new("*"))
            } else {
                Ok(prime(&stratum_of(b, inner)?))
            }
        }
        (SpaceExpr::Product(fs), Point::Product(ps)) => {
            if fs.len() != ps.len() {
                return Err(ModelError::ShapeMismatch);
            }
            match designated_factor(fs)? {
                None => Ok(StratumId::new("T")),
                Some(i) => stratum_of(&fs[i], &ps[i]),
            }
        }
        _ => Err(ModelError::ShapeMismatch),
    }
}

/// Transverse radius of the point with respect to a singular stratum: the
/// cone radius at a vertex, the colatitude distance at a pole, recursing
/// along cylinders and through products.
pub fn radium(expr: &SpaceExpr, p: &Point, s: &StratumId) -> Result<f64, ModelError> {
    match (expr, p) {
        (SpaceExpr::Euclidean(_), Point::Euclidean(_))
        | (SpaceExpr::Circle(_), Point::Circle(_)) => {
            if s.as_str() == "T" {
                Err(ModelError::NotSingular(s.clone()))
            } else {
                Err(ModelError::UnknownStratum(s.clone()))
            }
        }
        (SpaceExpr::RotSphere(_), Point::Sphere { colatitude, .. }) => match s.as_str() {
            "N" => Ok(*colatitude),
            "S" => Ok(PI - *colatitude),
            "T'" => Err(ModelError::NotSingular(s.clone())),
            _ => Err(ModelError::UnknownStratum(s.clone())),
        },
        (SpaceExpr::Cone(b), Point::Cone { inner, radius }) => {
            if s.as_str() == "*" {
                Ok(*radius)
            } else if let Some(base_id) = strip_prime(s) {
                radium(b, inner, &base_id).map_err(|e| e.with_stratum(&base_id, s))
            } else {
                Err(ModelError::UnknownStratum(s.clone()))
            }
        }
        (SpaceExpr::Product(fs), Point::Product(ps)) => {
            if fs.len() != ps.len() {
                return Err(ModelError::ShapeMismatch);
            }
            match designated_factor(fs)? {
                None => Err(if s.as_str() == "T" {
                    ModelError::NotSingular(s.clone())
                } else {
                    ModelError::UnknownStratum(s.clone())
                }),
                Some(i) => radium(&fs[i], &ps[i], s),
            }
        }
        _ => Err(ModelError::ShapeMismatch),
    }
}

/// Scale the transverse coordinate of the point with respect to a singular
/// stratum by `t > 0`: cone radii multiply, polar colatitudes multiply
/// inside the open chart (the scaled colatitude must stay below `π`).
pub fn radial(expr: &SpaceExpr, p: &Point, s: &StratumId, t: f64) -> Result<Point, ModelError> {
    if !(t > 0.0) {
        return Err(ModelError::NonPositiveScale);
    }
    let scaled = radial_unchecked(expr, p, s, t)?;
    canonicalize(expr, &scaled)
}

fn radial_unchecked(
    expr: &SpaceExpr,
    p: &Point,
    s: &StratumId,
    t: f64,
) -> Result<Point, ModelError> {
    match (expr, p) {
        (SpaceExpr::RotSphere(_), Point::Sphere { longitude, colatitude }) => {
            let rho = match s.as_str() {
                "N" => *colatitude,
                "S" => PI - *colatitude,
                "T'" => return Err(ModelError::NotSingular(s.clone())),
                _ => return Err(ModelError::UnknownStratum(s.clone())),
            };
            if rho >= PI - CANONICAL_TOL {
                // the opposite pole is outside this chart
                return Err(ModelError::ChartOverflow);
            }
            let scaled = t * rho;
            if scaled >= PI {
                return Err(ModelError::ChartOverflow);
            }
            let colat = if s.as_str() == "N" { scaled } else { PI - scaled };
            Ok(Point::Sphere { longitude: *longitude, colatitude: colat })
        }
        (SpaceExpr::Cone(b), Point::Cone { inner, radius }) => {
            if s.as_str() == "*" {
                Ok(Point::Cone { inner: inner.clone(), radius: t * radius })
            } else if let Some(base_id) = strip_prime(s) {
                Ok(Point::Cone {
                    inner: Box::new(
                        radial_unchecked(b, inner, &base_id, t)
                            .map_err(|e| e.with_stratum(&base_id, s))?,
                    ),
                    radius: *radius,
                })
            } else {
                Err(ModelError::UnknownStratum(s.clone()))
            }
        }
        (SpaceExpr::Product(fs), Point::Product(ps)) => {
            if fs.len() != ps.len() {
                return Err(ModelError::ShapeMismatch);
            }
            match designated_factor(fs)? {
                None => Err(ModelError::UnknownStratum(s.clone())),
                Some(i) => {
                    let mut out = ps.clone();
                    out[i] = radial_unchecked(&fs[i], &ps[i], s, t)?;
                    Ok(Point::Product(out))
                }
            }
        }
        (SpaceExpr::Euclidean(_), Point::Euclidean(_))
        | (SpaceExpr::Circle(_), Point::Circle(_)) => Err(ModelError::UnknownStratum(s.clone())),
        _ => Err(ModelError::ShapeMismatch),
    }
}

/// Project a tube point onto its core stratum: transverse coordinates
/// collapse to the canonical fiber representative.
pub fn tube_projection(
    expr: &SpaceExpr,
    p: &Point,
    s: &StratumId,
) -> Result<Point, ModelError> {
    let projected = tube_projection_unchecked(expr, p, s)?;
    canonicalize(expr, &projected)
}

fn tube_projection_unchecked(
    expr: &SpaceExpr,
    p: &Point,
    s: &StratumId,
) -> Result<Point, ModelError> {
    match (expr, p) {
        (SpaceExpr::RotSphere(_), Point::Sphere { .. }) => match s.as_str() {
            "N" => Ok(Point::Sphere { longitude: 0.0, colatitude: 0.0 }),
            "S" => Ok(Point::Sphere { longitude: 0.0, colatitude: PI }),
            "T'" => Err(ModelError::NotSingular(s.clone())),
            _ => Err(ModelError::UnknownStratum(s.clone())),
        },
        (SpaceExpr::Cone(b), Point::Cone { inner, radius }) => {
            if s.as_str() == "*" {
                Ok(Point::Cone { inner: Box::new(basepoint(b)), radius: 0.0 })
            } else if let Some(base_id) = strip_prime(s) {
                Ok(Point::Cone {
                    inner: Box::new(
                        tube_projection_unchecked(b, inner, &base_id)
                            .map_err(|e| e.with_stratum(&base_id, s))?,
                    ),
                    radius: *radius,
                })
            } else {
                Err(ModelError::UnknownStratum(s.clone()))
            }
        }
        (SpaceExpr::Product(fs), Point::Product(ps)) => {
            if fs.len() != ps.len() {
                return Err(ModelError::ShapeMismatch);
            }
            match designated_factor(fs)? {
                None => Err(ModelError::UnknownStratum(s.clone())),
                Some(i) => {
                    let mut out = ps.clone();
                    out[i] = tube_projection_unchecked(&fs[i], &ps[i], s)?;
                    Ok(Point::Product(out))
                }
            }
        }
        (SpaceExpr::Euclidean(_), Point::Euclidean(_))
        | (SpaceExpr::Circle(_), Point::Circle(_)) => Err(ModelError::UnknownStratum(s.clone())),
        _ => Err(ModelError::ShapeMismatch),
    }
}

impl RealizedSpace {
    pub fn group(&self) -> &FiniteAbelianGroup {
        self.skeleton.group()
    }

    pub fn basepoint(&self) -> Point {
        basepoint(&self.expr)
    }

    pub fn canonicalize(&self, p: &Point) -> Result<Point, ModelError> {
        canonicalize(&self.expr, p)
    }

    pub fn points_approx_eq(&self, a: &Point, b: &Point, tol: f64) -> Result<bool, ModelError> {
        points_approx_eq(&self.expr, a, b, tol)
    }

    pub fn act(&self, g: &GroupElement, p: &Point) -> Result<Point, ModelError> {
        act(&self.expr, g, p)
    }

    pub fn stratum_of(&self, p: &Point) -> Result<StratumId, ModelError> {
        stratum_of(&self.expr, p)
    }

    pub fn radium(&self, p: &Point, s: &StratumId) -> Result<f64, ModelError> {
        radium(&self.expr, p, s)
    }

    pub fn radial(&self, p: &Point, s: &StratumId, t: f64) -> Result<Point, ModelError> {
        radial(&self.expr, p, s, t)
    }

    pub fn tube_projection(&self, p: &Point, s: &StratumId) -> Result<Point, ModelError> {
        tube_projection(&self.expr, p, s)
    }

    pub fn tube_radius(&self, s: &StratumId) -> Result<f64, ModelError> {
        self.tubes
            .get(s)
            .copied()
            .ok_or_else(|| ModelError::NotSingular(s.clone()))
    }

    pub fn set_tube_radius(&mut self, s: &StratumId, epsilon: f64) -> Result<(), ModelError> {
        match self.tubes.get_mut(s) {
            Some(e) => {
                *e = epsilon;
                Ok(())
            }
            None => Err(ModelError::NotSingular(s.clone())),
        }
    }

    /// Is the point inside the tube of `s`? Requires both a small
    /// transverse radius and a position over `s`: the containing stratum
    /// must be `s` itself or lie above it.
    pub fn in_tube(&self, p: &Point, s: &StratumId) -> Result<bool, ModelError> {
        let epsilon = self.tube_radius(s)?;
        let rho = self.radium(p, s)?;
        if rho >= epsilon {
            return Ok(false);
        }
        let at = self.stratum_of(p)?;
        Ok(at == *s || self.skeleton.less(s, &at))
    }

    /// The fold map of the unfolded tube: parameter `t` sends a point `x`
    /// of the unit transverse sphere to the tube point at radius `|t|`,
    /// with both signs landing on the same point, and `t = 0` onto the
    /// stratum itself.
    pub fn tube_unfold(&self, x: &Point, s: &StratumId, t: f64) -> Result<Point, ModelError> {
        let rho = self.radium(x, s)?;
        if abs(rho - 1.0) > DEFAULT_TOL {
            return Err(ModelError::NotOnUnitSphere);
        }
        if t == 0.0 {
            self.tube_projection(x, s)
        } else {
            self.radial(x, s, abs(t))
        }
    }

    /// The two preimages of a tube point under the fold map, as
    /// `(unit sphere point, parameter)` pairs with opposite signs.
    pub fn tube_unfold_preimage(
        &self,
        y: &Point,
        s: &StratumId,
    ) -> Result<[(Point, f64); 2], ModelError> {
        let rho = self.radium(y, s)?;
        if rho <= CANONICAL_TOL {
            return Err(ModelError::DegenerateRadius);
        }
        let unit = self.radial(y, s, 1.0 / rho)?;
        Ok([(unit.clone(), rho), (unit, -rho)])
    }

    /// Glue a unit-sphere point into the two-sheeted unfolded tube: the
    /// tube point at radius `|t|` together with the sheet sign.
    pub fn glue(&self, x: &Point, s: &StratumId, t: f64) -> Result<(Point, i8), ModelError> {
        if t == 0.0 {
            return Err(ModelError::ZeroGlueParameter);
        }
        let y = self.tube_unfold(x, s, t)?;
        Ok((y, if t > 0.0 { 1 } else { -1 }))
    }

    /// The orbit space by a subgroup of the rotation group: circles and
    /// spheres lose a factor of `|K|` in their symmetry order, and angles
    /// multiply by `|K|`.
    pub fn orbit(&self, k: &Subgroup) -> Result<RealizedSpace, ModelError> {
        if k.ambient() != self.group() {
            return Err(ModelError::Group(GroupError::AmbientMismatch));
        }
        realize(&orbit_expr(&self.expr, k.order()))
    }

    /// Push a point to the orbit space.
    pub fn orbit_point(&self, p: &Point, k: &Subgroup) -> Result<Point, ModelError> {
        if k.ambient() != self.group() {
            return Err(ModelError::Group(GroupError::AmbientMismatch));
        }
        let folded = orbit_point_unchecked(&self.expr, p, k.order() as f64)?;
        canonicalize(&orbit_expr(&self.expr, k.order()), &folded)
    }

    /// Deterministic low-discrepancy sample points, indexed by `n`.
    pub fn sample(&self, n: u64, seed: u64) -> Point {
        let mut coord = 0usize;
        sample_point(&self.expr, n, seed, &mut coord)
    }

    /// Check the tube axioms on sampled points: tubes of incomparable
    /// singular strata are disjoint, and for nested tubes the projections
    /// and radii are compatible.
    pub fn thom_mather_check(&self, samples: u64, seed: u64) -> TubeReport {
        let singular: Vec<&StratumId> = self.tubes.keys().collect();
        let mut violations = Vec::new();
        for n in 0..samples {
            let p = self.sample(n, seed);
            for (i, s) in singular.iter().enumerate() {
                for r in singular.iter().skip(i + 1) {
                    let (lo, hi) = if self.skeleton.less(r, s) { (*r, *s) } else { (*s, *r) };
                    let in_lo = self.in_tube(&p, lo).unwrap_or(false);
                    let in_hi = self.in_tube(&p, hi).unwrap_or(false);
                    if !(in_lo && in_hi) {
                        continue;
                    }
                    if !self.skeleton.comparable(lo, hi) {
                        violations.push(TubeViolation {
                            first: (*s).clone(),
                            second: (*r).clone(),
                            sample: n,
                            kind: TubeViolationKind::OverlappingTubes,
                        });
                        continue;
                    }
                    // lo < hi: the control conditions
                    let through = self
                        .tube_projection(&p, hi)
                        .and_then(|q| self.tube_projection(&q, lo));
                    let direct = self.tube_projection(&p, lo);
                    match (through, direct) {
                        (Ok(a), Ok(b)) => {
                            if !self.points_approx_eq(&a, &b, DEFAULT_TOL).unwrap_or(false) {
                                violations.push(TubeViolation {
                                    first: lo.clone(),
                                    second: hi.clone(),
                                    sample: n,
                                    kind: TubeViolationKind::BrokenProjection,
                                });
                            }
                        }
                        _ => violations.push(TubeViolation {
                            first: lo.clone(),
                            second: hi.clone(),
                            sample: n,
                            kind: TubeViolationKind::BrokenProjection,
                        }),
                    }
                    let rho_through = self
                        .tube_projection(&p, hi)
                        .and_then(|q| self.radium(&q, lo));
                    let rho_direct = self.radium(&p, lo);
                    match (rho_through, rho_direct) {
                        (Ok(a), Ok(b)) if abs(a - b) <= DEFAULT_TOL => {}
                        _ => violations.push(TubeViolation {
                            first: lo.clone(),
                            second: hi.clone(),
                            sample: n,
                            kind: TubeViolationKind::BrokenRadius,
                        }),
                    }
                }
            }
        }
        TubeReport { samples, violations }
    }
}

fn orbit_expr(expr: &SpaceExpr, d: u64) -> SpaceExpr {
    match expr {
        SpaceExpr::Euclidean(k) => SpaceExpr::Euclidean(*k),
        SpaceExpr::Circle(m) => SpaceExpr::Circle(m / d),
        SpaceExpr::RotSphere(m) => SpaceExpr::RotSphere(m / d),
        SpaceExpr::Cone(b) => SpaceExpr::Cone(Box::new(orbit_expr(b, d))),
        SpaceExpr::Product(fs) => {
            SpaceExpr::Product(fs.iter().map(|f| orbit_expr(f, d)).collect())
        }
    }
}

fn orbit_point_unchecked(expr: &SpaceExpr, p: &Point, d: f64) -> Result<Point, ModelError> {
    match (expr, p) {
        (SpaceExpr::Euclidean(_), Point::Euclidean(_)) => Ok(p.clone()),
        (SpaceExpr::Circle(_), Point::Circle(theta)) => Ok(Point::Circle(wrap_angle(theta * d))),
        (SpaceExpr::RotSphere(_), Point::Sphere { longitude, colatitude }) => {
            Ok(Point::Sphere { longitude: wrap_angle(longitude * d), colatitude: *colatitude })
        }
        (SpaceExpr::Cone(b), Point::Cone { inner, radius }) => Ok(Point::Cone {
            inner: Box::new(orbit_point_unchecked(b, inner, d)?),
            radius: *radius,
        }),
        (SpaceExpr::Product(fs), Point::Product(ps)) => {
            if fs.len() != ps.len() {
                return Err(ModelError::ShapeMismatch);
            }
            let designated = designated_factor(fs)?;
            let mut out = Vec::with_capacity(ps.len());
            for (i, (f, q)) in fs.iter().zip(ps.iter()).enumerate() {
                if Some(i) == designated {
                    out.push(orbit_point_unchecked(f, q, d)?);
                } else {
                    out.push(q.clone());
                }
            }
            Ok(Point::Product(out))
        }
        _ => Err(ModelError::ShapeMismatch),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TubeViolationKind {
    /// Tubes of incomparable strata intersect.
    OverlappingTubes,
    /// Nested projections do not commute.
    BrokenProjection,
    /// Projection to the larger stratum changed the smaller radius.
    BrokenRadius,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TubeViolation {
    pub first: StratumId,
    pub second: StratumId,
    pub sample: u64,
    pub kind: TubeViolationKind,
}

#[derive(Clone, PartialEq, Debug)]
pub struct TubeReport {
    pub samples: u64,
    pub violations: Vec<TubeViolation>,
}

impl TubeReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Deduplicated offending stratum pairs.
    pub fn offending_pairs(&self) -> BTreeSet<(StratumId, StratumId)> {
        self.violations
            .iter()
            .map(|v| (v.first.clone(), v.second.clone()))
            .collect()
    }
}

impl core::fmt::Display for TubeReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_valid() {
            write!(f, "tube system consistent over {} samples", self.samples)
        } else {
            write!(
                f,
                "{} violations over {} samples:",
                self.violations.len(),
                self.samples
            )?;
            for (a, b) in self.offending_pairs() {
                write!(f, " ({a}, {b})")?;
            }
            Ok(())
        }
    }
}

// --- deterministic sampling -------------------------------------------------

/// Additive recurrence with per-coordinate irrational steps: the fractional
/// parts of square roots of primes give a well-spread deterministic
/// sequence; the seed only shifts the phases.
const SQRT_PRIME_FRACTIONS: [f64; 16] = [
    0.41421356237309515, // sqrt 2
    0.7320508075688772,  // sqrt 3
    0.23606797749978969, // sqrt 5
    0.6457513110645906,  // sqrt 7
    0.3166247903553998,  // sqrt 11
    0.6055512754639891,  // sqrt 13
    0.1231056256176606,  // sqrt 17
    0.358898943540674,   // sqrt 19
    0.79583152331272,    // sqrt 23
    0.385164807134504,   // sqrt 29
    0.56776436283002,    // sqrt 31
    0.0827625302982193,  // sqrt 37
    0.40312423743285,    // sqrt 41
    0.5574385243020004,  // sqrt 43
    0.8556546004010441,  // sqrt 47
    0.28010988928051827, // sqrt 53
];

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_sample(n: u64, seed: u64, coord: usize) -> f64 {
    let alpha = SQRT_PRIME_FRACTIONS[coord % SQRT_PRIME_FRACTIONS.len()];
    let phase = splitmix64(seed ^ (coord as u64).wrapping_mul(0xA076_1D64_78BD_642F)) as f64
        / (u64::MAX as f64 + 1.0);
    let x = n as f64 * alpha + phase;
    x - libm::floor(x)
}

fn sample_point(expr: &SpaceExpr, n: u64, seed: u64, coord: &mut usize) -> Point {
    let mut next = |lo: f64, hi: f64| {
        let u = unit_sample(n, seed, *coord);
        *coord += 1;
        lo + (hi - lo) * u
    };
    match expr {
        SpaceExpr::Euclidean(k) => {
            Point::Euclidean((0..*k).map(|_| next(-3.0, 3.0)).collect())
        }
        SpaceExpr::Circle(_) => Point::Circle(next(0.0, TAU)),
        SpaceExpr::RotSphere(_) => Point::Sphere {
            longitude: next(0.0, TAU),
            colatitude: next(0.0, PI),
        },
        SpaceExpr::Cone(b) => {
            let radius = next(0.0, 2.0);
            Point::Cone { inner: Box::new(sample_point(b, n, seed, coord)), radius }
        }
        SpaceExpr::Product(fs) => Point::Product(
            fs.iter().map(|f| sample_point(f, n, seed, coord)).collect(),
        ),
    }
}
