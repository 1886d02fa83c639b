//! Exact rational convex geometry on V-represented polytopes.
//!
//! Hulls carry an exact H-representation used for membership. Rational
//! convex-combination coefficients, integer zero certificates, separating
//! functionals and sup-norm Hausdorff distances come from the exact simplex
//! in [`crate::lp`]; nothing here touches floating point.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{Rational, RationalVector};

/// `{u : ⟨u, normal⟩ ≥ offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace {
    normal: RationalVector,
    offset: Rational,
}

impl HalfSpace {
    pub fn new(normal: RationalVector, offset: Rational) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::ZeroNormal);
        }
        Ok(HalfSpace { normal, offset })
    }

    pub fn normal(&self) -> &RationalVector {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        x.dot(&self.normal) >= self.offset
    }

    /// Rescales so the normal is a primitive integer vector.
    fn normalized(self) -> Self {
        let prim = RationalVector::from_bigints(&self.normal.primitive_integer());
        let nonzero = self
            .normal
            .coords()
            .iter()
            .zip(prim.coords())
            .find(|(a, _)| !a.is_zero())
            .expect("normal is nonzero");
        let factor = nonzero.1 / nonzero.0;
        HalfSpace {
            normal: prim,
            offset: &self.offset * &factor,
        }
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<u, {}> >= {}", self.normal, self.offset)
    }
}

/// Convex hull of finitely many rational points.
///
/// Keeps the input generators, the inclusion-minimal vertex subset (sorted
/// lexicographically) and the H-representation.
#[derive(Debug)]
pub struct Polytope {
    dim: usize,
    generators: Vec<RationalVector>,
    vertices: Vec<RationalVector>,
    halfspaces: OnceLock<Vec<HalfSpace>>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        Polytope {
            dim: self.dim,
            generators: self.generators.clone(),
            vertices: self.vertices.clone(),
            halfspaces: self.halfspaces.clone(),
        }
    }
}

/// Two polytopes are equal when they are the same point set, i.e. their
/// vertex sets coincide.
impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl Polytope {
    pub fn from_points(points: &[RationalVector]) -> Result<Self> {
        convex_hull(points)
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[RationalVector] {
        &self.generators
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    /// Dimension of the affine hull.
    pub fn affine_dimension(&self) -> usize {
        let base = &self.vertices[0];
        let diffs: Vec<RationalVector> = self.vertices[1..].iter().map(|v| v - base).collect();
        linalg::rank(&diffs)
    }

    /// H-representation: equalities of the affine hull appear as pairs of
    /// opposite halfspaces, followed by the facet inequalities.
    pub fn halfspaces(&self) -> &[HalfSpace] {
        self.halfspaces
            .get_or_init(|| facet_halfspaces(&self.vertices, self.dim))
    }

    pub fn contains(&self, x: &RationalVector) -> Result<bool> {
        contains(self, x)
    }

    pub fn scale(&self, factor: &Rational) -> Result<Self> {
        scale(self, factor)
    }

    pub fn translate(&self, shift: &RationalVector) -> Result<Self> {
        check_dim(self.dim, shift.dim())?;
        let gens: Vec<RationalVector> = self.generators.iter().map(|g| g + shift).collect();
        convex_hull(&gens)
    }

    /// The image under `x ↦ −x`.
    pub fn negated(&self) -> Self {
        let gens: Vec<RationalVector> = self.generators.iter().map(|g| -g).collect();
        convex_hull(&gens).expect("negation preserves a valid point set")
    }

    /// `true` when every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Polytope) -> Result<bool> {
        check_dim(other.dim, self.dim)?;
        for v in &self.vertices {
            if !contains(other, v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn validate_points(points: &[RationalVector]) -> Result<usize> {
    let first = points.first().ok_or(Error::EmptyPointSet)?;
    let dim = first.dim();
    for p in points {
        check_dim(dim, p.dim())?;
    }
    Ok(dim)
}

/// Is `target` a convex combination of `points`? Returns the basic feasible
/// coefficients when it is.
fn hull_coefficients(points: &[RationalVector], target: &RationalVector) -> Option<Vec<Rational>> {
    let n = points.len();
    let mut lp = LinearProgram::new(n);
    for k in 0..target.dim() {
        let row = points.iter().map(|p| p.coords()[k].clone()).collect();
        lp.constrain(row, Relation::Eq, target.coords()[k].clone());
    }
    lp.constrain(vec![Rational::one(); n], Relation::Eq, Rational::one());
    lp.solve().point().map(<[Rational]>::to_vec)
}

fn in_hull(points: &[RationalVector], target: &RationalVector) -> bool {
    if points.is_empty() {
        return false;
    }
    hull_coefficients(points, target).is_some()
}

/// Convex hull with its unique minimal vertex set and exact H-representation.
///
/// Starts from the coordinate-extreme points, computes the facets of the
/// current candidates and adds, for every facet some input point violates,
/// the farthest violator. When no point violates any facet the candidates
/// span the hull; its vertices are the candidates whose tight constraints
/// have full rank.
pub fn convex_hull(points: &[RationalVector]) -> Result<Polytope> {
    let dim = validate_points(points)?;
    let distinct: Vec<RationalVector> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();

    let mut candidates: BTreeSet<RationalVector> = BTreeSet::new();
    candidates.insert(distinct[0].clone());
    for k in 0..dim {
        let key = |p: &&RationalVector| (p.coords()[k].clone(), (*p).clone());
        candidates.insert(distinct.iter().min_by_key(key).expect("nonempty").clone());
        candidates.insert(distinct.iter().max_by_key(key).expect("nonempty").clone());
    }

    let halfspaces = loop {
        let current: Vec<RationalVector> = candidates.iter().cloned().collect();
        let hs = facet_halfspaces(&current, dim);
        let mut grew = false;
        for h in &hs {
            let worst = distinct
                .iter()
                .filter(|p| !h.contains(p))
                .min_by_key(|p| (p.dot(&h.normal), (*p).clone()));
            if let Some(p) = worst {
                grew |= candidates.insert(p.clone());
            }
        }
        if !grew {
            break hs;
        }
    };

    let vertices: Vec<RationalVector> = candidates
        .into_iter()
        .filter(|p| {
            let tight: Vec<RationalVector> = halfspaces
                .iter()
                .filter(|h| p.dot(&h.normal) == h.offset)
                .map(|h| h.normal.clone())
                .collect();
            linalg::rank(&tight) == dim
        })
        .collect();

    let cell = OnceLock::new();
    let _ = cell.set(halfspaces);
    Ok(Polytope {
        dim,
        generators: points.to_vec(),
        vertices,
        halfspaces: cell,
    })
}

pub fn contains(p: &Polytope, x: &RationalVector) -> Result<bool> {
    check_dim(p.dim, x.dim())?;
    if let Some(hs) = p.halfspaces.get() {
        return Ok(hs.iter().all(|h| h.contains(x)));
    }
    Ok(in_hull(&p.vertices, x))
}

pub fn scale(p: &Polytope, factor: &Rational) -> Result<Polytope> {
    if !factor.is_positive() {
        return Err(Error::NonPositiveScale(factor.to_string()));
    }
    let scaled = Polytope {
        dim: p.dim,
        generators: p.generators.iter().map(|g| g.scaled(factor)).collect(),
        vertices: p.vertices.iter().map(|v| v.scaled(factor)).collect(),
        halfspaces: OnceLock::new(),
    };
    if let Some(hs) = p.halfspaces.get() {
        let _ = scaled.halfspaces.set(
            hs.iter()
                .map(|h| HalfSpace {
                    normal: h.normal.clone(),
                    offset: &h.offset * factor,
                })
                .collect(),
        );
    }
    Ok(scaled)
}

/// Rational convex-combination coefficients of `target` over `points`.
///
/// A first exact LP finds a basic solution and hence a support; a second LP
/// restricted to that support maximizes the smallest coefficient, which yields
/// a rational solution strictly positive on the support. Returns `None` when
/// `target` lies outside the hull.
pub fn rational_coefficients(points: &[RationalVector], target: &RationalVector) -> Result<Option<Vec<Rational>>> {
    let dim = validate_points(points)?;
    check_dim(dim, target.dim())?;
    let Some(basic) = hull_coefficients(points, target) else {
        return Ok(None);
    };
    let support: Vec<usize> = (0..points.len()).filter(|&i| basic[i].is_positive()).collect();

    // Variables: λ_s for s in support, then t. Maximize t with λ_s ≥ t.
    let s = support.len();
    let mut objective = vec![Rational::zero(); s + 1];
    objective[s] = -Rational::one();
    let mut lp = LinearProgram::new(s + 1).minimize(objective);
    for k in 0..dim {
        let mut row: Vec<Rational> = support.iter().map(|&i| points[i].coords()[k].clone()).collect();
        row.push(Rational::zero());
        lp.constrain(row, Relation::Eq, target.coords()[k].clone());
    }
    let mut ones = vec![Rational::one(); s];
    ones.push(Rational::zero());
    lp.constrain(ones, Relation::Eq, Rational::one());
    for j in 0..s {
        let mut row = vec![Rational::zero(); s + 1];
        row[j] = Rational::one();
        row[s] = -Rational::one();
        lp.constrain(row, Relation::Ge, Rational::zero());
    }
    let centered = match lp.solve() {
        LpOutcome::Optimal { point, .. } => point,
        other => {
            return Err(Error::InternalInconsistency(format!(
                "support LP did not reach an optimum: {other:?}"
            )))
        }
    };

    let mut lambda = vec![Rational::zero(); points.len()];
    for (j, &i) in support.iter().enumerate() {
        lambda[i] = centered[j].clone();
    }
    Ok(Some(lambda))
}

/// Nonnegative integers `k`, not all zero and with gcd 1, such that
/// `Σ k_i w_i = 0`; `None` when the origin is outside `conv(weights)`.
///
/// Built from rational coefficients `λ_i = p_i / q_i` as
/// `k_i = q_1 ⋯ p_i ⋯ q_ℓ`, then divided by the gcd.
pub fn integer_certificate(weights: &[RationalVector]) -> Result<Option<Vec<BigInt>>> {
    let dim = validate_points(weights)?;
    let Some(lambda) = rational_coefficients(weights, &RationalVector::zeros(dim))? else {
        return Ok(None);
    };
    let mut k: Vec<BigInt> = (0..lambda.len())
        .map(|i| {
            lambda.iter().enumerate().fold(BigInt::one(), |acc, (j, l)| {
                if i == j {
                    acc * l.numer()
                } else {
                    acc * l.denom()
                }
            })
        })
        .collect();
    let g = k.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    for x in k.iter_mut() {
        *x = &*x / &g;
    }
    if !verify_integer_certificate(weights, &k) {
        return Err(Error::InternalInconsistency(
            "integer certificate failed re-verification".into(),
        ));
    }
    Ok(Some(k))
}

/// `Σ k_i w_i = 0`, every `k_i ≥ 0` and `Σ k_i ≥ 1`.
pub fn verify_integer_certificate(weights: &[RationalVector], k: &[BigInt]) -> bool {
    if weights.len() != k.len() || weights.is_empty() {
        return false;
    }
    if k.iter().any(Signed::is_negative) || k.iter().sum::<BigInt>() < BigInt::one() {
        return false;
    }
    let dim = weights[0].dim();
    let total = weights.iter().zip(k).fold(RationalVector::zeros(dim), |acc, (w, ki)| {
        &acc + &w.scaled(&Rational::from_integer(ki.clone()))
    });
    total.is_zero()
}

/// A primitive integer functional `φ` with `φ(v − x) > 0` on every vertex,
/// or `None` if `x ∈ P`. Among valid functionals with `φ(v − x) ≥ 1` the one
/// of least ℓ¹ norm is taken, then rescaled to a primitive integer vector.
pub fn separating_functional(p: &Polytope, x: &RationalVector) -> Result<Option<RationalVector>> {
    check_dim(p.dim, x.dim())?;
    let d = p.dim;
    if d == 0 || in_hull(&p.vertices, x) {
        return Ok(None);
    }
    // Variables φ⁺ (d) then φ⁻ (d).
    let mut lp = LinearProgram::new(2 * d).minimize(vec![Rational::one(); 2 * d]);
    for v in &p.vertices {
        let diff = v - x;
        let mut row: Vec<Rational> = diff.coords().to_vec();
        row.extend(diff.coords().iter().map(|c| -c));
        lp.constrain(row, Relation::Ge, Rational::one());
    }
    let point = match lp.solve() {
        LpOutcome::Optimal { point, .. } => point,
        other => {
            return Err(Error::InternalInconsistency(format!(
                "no separating functional for a point outside the hull: {other:?}"
            )))
        }
    };
    let phi = RationalVector::new((0..d).map(|k| &point[k] - &point[d + k]).collect());
    let phi = RationalVector::from_bigints(&phi.primitive_integer());
    if !verify_separating_functional(p.vertices(), x, &phi) {
        return Err(Error::InternalInconsistency(
            "separating functional failed re-verification".into(),
        ));
    }
    Ok(Some(phi))
}

/// `φ(v − x) > 0` for every `v`.
pub fn verify_separating_functional(vertices: &[RationalVector], x: &RationalVector, phi: &RationalVector) -> bool {
    !vertices.is_empty()
        && vertices
            .iter()
            .all(|v| v.dim() == phi.dim() && (v - x).dot(phi).is_positive())
}

/// Whether `(1 − ε)·w ∈ P`. Intended for `w` a generator of `P`.
pub fn shrink_membership(p: &Polytope, w: &RationalVector, epsilon: &Rational) -> Result<bool> {
    check_dim(p.dim, w.dim())?;
    let factor = Rational::one() - epsilon;
    contains(p, &w.scaled(&factor))
}

/// Sup-norm distance from `x` to `P`.
pub fn distance_to(p: &Polytope, x: &RationalVector) -> Result<Rational> {
    check_dim(p.dim, x.dim())?;
    let n = p.vertices.len();
    let d = p.dim;
    // Variables λ (n) then t; minimize t with |Σλ v − x|_k ≤ t.
    let mut objective = vec![Rational::zero(); n + 1];
    objective[n] = Rational::one();
    let mut lp = LinearProgram::new(n + 1).minimize(objective);
    for k in 0..d {
        let coords: Vec<Rational> = p.vertices.iter().map(|v| v.coords()[k].clone()).collect();
        let mut upper = coords.clone();
        upper.push(-Rational::one());
        lp.constrain(upper, Relation::Le, x.coords()[k].clone());
        let mut lower = coords;
        lower.push(Rational::one());
        lp.constrain(lower, Relation::Ge, x.coords()[k].clone());
    }
    let mut ones = vec![Rational::one(); n];
    ones.push(Rational::zero());
    lp.constrain(ones, Relation::Eq, Rational::one());
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => Err(Error::InternalInconsistency(format!(
            "distance LP failed: {other:?}"
        ))),
    }
}

/// Exact Hausdorff distance in the sup-norm. Distance to a convex set is
/// convex, so the suprema are attained at vertices.
pub fn hausdorff_distance(p: &Polytope, q: &Polytope) -> Result<Rational> {
    check_dim(p.dim, q.dim)?;
    let mut best = Rational::zero();
    for v in &p.vertices {
        best = best.max(distance_to(q, v)?);
    }
    for v in &q.vertices {
        best = best.max(distance_to(p, v)?);
    }
    Ok(best)
}

/// Facets (and affine-hull equalities) of `conv(vertices)`.
fn facet_halfspaces(vertices: &[RationalVector], dim: usize) -> Vec<HalfSpace> {
    let base = &vertices[0];
    let diffs: Vec<RationalVector> = vertices[1..].iter().map(|v| v - base).collect();
    let span = linalg::row_space_basis(&diffs);
    let k = span.len();

    let mut out = BTreeSet::new();
    let span_rows: Vec<Vec<Rational>> = span.iter().map(|b| b.coords().to_vec()).collect();
    for n in linalg::nullspace(&span_rows, dim) {
        let n = RationalVector::new(n);
        let off = n.dot(base);
        let h = HalfSpace { normal: n, offset: off }.normalized();
        let opposite = HalfSpace {
            normal: -&h.normal,
            offset: -h.offset.clone(),
        };
        out.insert(h);
        out.insert(opposite);
    }
    if k == 0 {
        return out.into_iter().collect();
    }

    // Facet candidates: k-subsets of vertices spanning a (k−1)-flat inside the hull.
    for subset in combinations(vertices.len(), k) {
        let f0 = &vertices[subset[0]];
        let rows: Vec<Vec<Rational>> = subset[1..]
            .iter()
            .map(|&i| {
                let d = &vertices[i] - f0;
                span.iter().map(|b| b.dot(&d)).collect()
            })
            .collect();
        let ns = linalg::nullspace(&rows, k);
        if ns.len() != 1 {
            continue;
        }
        let normal = span
            .iter()
            .zip(&ns[0])
            .fold(RationalVector::zeros(dim), |acc, (b, c)| &acc + &b.scaled(c));
        let level = normal.dot(f0);
        let values: Vec<Rational> = vertices.iter().map(|v| normal.dot(v)).collect();
        if values.iter().all(|x| *x >= level) {
            out.insert(HalfSpace { normal, offset: level }.normalized());
        } else if values.iter().all(|x| *x <= level) {
            out.insert(
                HalfSpace {
                    normal: -&normal,
                    offset: -level,
                }
                .normalized(),
            );
        }
    }
    out.into_iter().collect()
}

/// All increasing `k`-subsets of `0..n`, lexicographic.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if n - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}
