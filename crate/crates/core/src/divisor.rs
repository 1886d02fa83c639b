//! Torus-invariant ℚ-divisors on smooth complete toric varieties.
//!
//! Sign convention: a divisor `D = Σ a_ρ D_ρ` has section polytope
//! `P_D = {u : ⟨u, v_ρ⟩ ≥ −a_ρ}` and its fixed-point weight at the cone `σ`
//! is the Cartier datum `u_σ` solving `⟨u_σ, v_ρ⟩ = −a_ρ` for `ρ ∈ σ`. Under
//! this convention the weights of global sections are exactly the lattice
//! points of `P_D` and the cotangent weights are the positive dual basis.
//! The opposite convention negates every weight; origin-membership verdicts
//! do not depend on the choice.
//!
//! On a smooth complete toric variety nef, basepoint free and semiample
//! coincide, so [`Positivity`] reports the three flags equal.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::convex::{combinations, HalfSpace, Polytope};
use crate::error::{check_dim, Error, Result};
use crate::fan::{cotangent_weights, validate_fan, Cone, Fan};
use crate::linalg;
use crate::rational::{denominator_lcm, int, Rational, RationalVector};

/// `Σ a_ρ D_ρ`, one coefficient per ray of the fan (dense, default 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TDivisor {
    coeffs: Vec<Rational>,
}

impl TDivisor {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        TDivisor { coeffs }
    }

    pub fn zero(num_rays: usize) -> Self {
        TDivisor {
            coeffs: vec![Rational::zero(); num_rays],
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        TDivisor::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// Sparse construction; missing rays get coefficient 0.
    pub fn from_map(num_rays: usize, coeffs: &BTreeMap<usize, Rational>) -> Result<Self> {
        let mut d = TDivisor::zero(num_rays);
        for (&ray, a) in coeffs {
            if ray >= num_rays {
                return Err(Error::InvalidPair(format!(
                    "coefficient for ray {ray} but the fan has {num_rays} rays"
                )));
            }
            d.coeffs[ray] = a.clone();
        }
        Ok(d)
    }

    /// The prime divisor `D_ρ` with coefficient `a`.
    pub fn prime(num_rays: usize, ray: usize, a: Rational) -> Self {
        let mut d = TDivisor::zero(num_rays);
        d.coeffs[ray] = a;
        d
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, ray: usize) -> &Rational {
        &self.coeffs[ray]
    }

    pub fn num_rays(&self) -> usize {
        self.coeffs.len()
    }

    pub fn plus(&self, other: &TDivisor) -> TDivisor {
        debug_assert_eq!(self.num_rays(), other.num_rays());
        TDivisor::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &TDivisor) -> TDivisor {
        self.plus(&other.negated())
    }

    pub fn negated(&self) -> TDivisor {
        TDivisor::new(self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn scaled(&self, factor: &Rational) -> TDivisor {
        TDivisor::new(self.coeffs.iter().map(|a| a * factor).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_integer())
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|a| !a.is_negative())
    }

    pub fn denominator_lcm(&self) -> BigInt {
        denominator_lcm(&self.coeffs)
    }

    fn check_against(&self, fan: &Fan) -> Result<()> {
        if self.num_rays() != fan.rays().len() {
            return Err(Error::DivisorLength {
                expected: fan.rays().len(),
                found: self.num_rays(),
            });
        }
        Ok(())
    }
}

/// `K = −Σ_ρ D_ρ`.
pub fn canonical_divisor(fan: &Fan) -> TDivisor {
    TDivisor::new(vec![int(-1); fan.rays().len()])
}

/// The Cartier datum `u_σ` of `D` at a smooth maximal cone: the fixed-point
/// weight of `O(D)` at the corresponding fixed point.
pub fn vertex_weight(fan: &Fan, d: &TDivisor, cone: &Cone) -> Result<RationalVector> {
    d.check_against(fan)?;
    let duals = cotangent_weights(fan, cone)?;
    let mut u = RationalVector::zeros(fan.dimension());
    for (&ray, dual) in cone.ray_indices().iter().zip(&duals) {
        let a = d.coeff(ray);
        if !a.is_zero() {
            u = &u - &dual.scaled(a);
        }
    }
    Ok(u)
}

/// Fixed-point weights of a divisor, one per maximal cone in fan order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierData {
    entries: Vec<(Cone, RationalVector)>,
}

impl CartierData {
    pub fn entries(&self) -> &[(Cone, RationalVector)] {
        &self.entries
    }

    pub fn weight(&self, cone: &Cone) -> Option<&RationalVector> {
        self.entries.iter().find(|(c, _)| c == cone).map(|(_, u)| u)
    }

    pub fn weights(&self) -> Vec<RationalVector> {
        self.entries.iter().map(|(_, u)| u.clone()).collect()
    }
}

pub fn cartier_data(fan: &Fan, d: &TDivisor) -> Result<CartierData> {
    let entries = fan
        .max_cones()
        .iter()
        .map(|c| Ok((c.clone(), vertex_weight(fan, d, c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CartierData { entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Positivity {
    pub nef: bool,
    pub ample: bool,
    pub basepoint_free: bool,
    pub semiample: bool,
}

/// Support-function criteria: nef iff `⟨u_σ, v_ρ⟩ ≥ −a_ρ` for every maximal
/// cone and every ray; ample iff additionally strict for every `ρ ∉ σ`.
pub fn positivity(fan: &Fan, d: &TDivisor) -> Result<Positivity> {
    let data = cartier_data(fan, d)?;
    let mut nef = true;
    let mut ample = true;
    for (cone, u) in &data.entries {
        for ray in fan.rays() {
            let slack = u.dot(&ray.as_vector()) + d.coeff(ray.index);
            if slack.is_negative() {
                nef = false;
                ample = false;
            } else if slack.is_zero() && !cone.contains_ray(ray.index) {
                ample = false;
            }
        }
    }
    Ok(Positivity {
        nef,
        ample,
        basepoint_free: nef,
        semiample: nef,
    })
}

fn section_halfspaces(fan: &Fan, d: &TDivisor) -> Vec<HalfSpace> {
    fan.rays()
        .iter()
        .map(|r| HalfSpace::new(r.as_vector(), -d.coeff(r.index).clone()).expect("rays are nonzero"))
        .collect()
}

/// `P_D = {u : ⟨u, v_ρ⟩ ≥ −a_ρ ∀ρ}` with its vertices, found by solving every
/// nonsingular `n`-subset of the defining equations and keeping the feasible
/// solutions.
pub fn section_polytope(fan: &Fan, d: &TDivisor) -> Result<Polytope> {
    d.check_against(fan)?;
    let diag = validate_fan(fan);
    if !diag.complete {
        return Err(Error::IncompleteFan(diag.messages.join("; ")));
    }
    let n = fan.dimension();
    let halfspaces = section_halfspaces(fan, d);
    let mut points = Vec::new();
    for subset in combinations(fan.rays().len(), n) {
        let rows: Vec<RationalVector> = subset.iter().map(|&i| fan.ray_vector(i)).collect();
        let rhs: Vec<Rational> = subset.iter().map(|&i| -d.coeff(i).clone()).collect();
        let Some(u) = linalg::solve(&rows, &rhs) else {
            continue;
        };
        if halfspaces.iter().all(|h| h.contains(&u)) {
            points.push(u);
        }
    }
    if points.is_empty() {
        return Err(Error::EmptySectionPolytope);
    }
    Polytope::from_points(&points)
}

/// Lattice points of `m·P_D`, lexicographically ordered. These are the
/// weights of the global sections of `O(⌊mD⌋)`, so their count is `h⁰`.
pub fn section_weights(fan: &Fan, d: &TDivisor, m: u64) -> Result<Vec<RationalVector>> {
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let p = match section_polytope(fan, d) {
        Ok(p) => p,
        Err(Error::EmptySectionPolytope) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let mq = Rational::from_integer(BigInt::from(m));
    let n = fan.dimension();

    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for k in 0..n {
        let vals = p.vertices().iter().map(|v| &v.coords()[k] * &mq);
        let (min, max) = vals.fold((None::<Rational>, None::<Rational>), |(mn, mx), x| {
            (
                Some(mn.map_or(x.clone(), |a| a.min(x.clone()))),
                Some(mx.map_or(x.clone(), |a| a.max(x))),
            )
        });
        lo[k] = to_i64(&min.expect("nonempty").ceil().to_integer())?;
        hi[k] = to_i64(&max.expect("nonempty").floor().to_integer())?;
    }

    // ⟨u, v_ρ⟩ ≥ ⌈−m a_ρ⌉ for integral u.
    let bounds: Vec<(Vec<i64>, i128)> = fan
        .rays()
        .iter()
        .map(|r| {
            let b = (-(d.coeff(r.index) * &mq)).ceil().to_integer();
            Ok((r.vector.clone(), i128::from(to_i64(&b)?)))
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Ok(out);
    }
    let mut u = lo.clone();
    loop {
        let feasible = bounds.iter().all(|(v, b)| {
            let dot: i128 = v.iter().zip(&u).map(|(a, x)| i128::from(*a) * i128::from(*x)).sum();
            dot >= *b
        });
        if feasible {
            out.push(RationalVector::from_ints(&u));
        }
        // Odometer over the box, last coordinate fastest → lexicographic.
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if u[k] < hi[k] {
                u[k] += 1;
                u[k + 1..n].copy_from_slice(&lo[k + 1..n]);
                break;
            }
        }
    }
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::InternalInconsistency(format!("lattice coordinate {x} exceeds i64")))
}

/// Dimension of the weight-zero part of `H⁰(O(⌊mD⌋))` after twisting the
/// linearization by the character `twist`: the number of lattice points `u`
/// of `m·P_D` with `u + m·twist = 0` (so 0 or 1).
pub fn invariant_dimension(fan: &Fan, d: &TDivisor, twist: &RationalVector, m: u64) -> Result<u64> {
    d.check_against(fan)?;
    check_dim(fan.dimension(), twist.dim())?;
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let mq = Rational::from_integer(BigInt::from(m));
    let u = -twist.scaled(&mq);
    if !u.is_integral() {
        return Ok(0);
    }
    let inside = fan
        .rays()
        .iter()
        .all(|r| u.dot(&r.as_vector()) >= -(d.coeff(r.index) * &mq));
    Ok(u64::from(inside))
}

/// `h⁰(O(⌊mD⌋))`.
pub fn h0(fan: &Fan, d: &TDivisor, m: u64) -> Result<usize> {
    section_weights(fan, d, m).map(|w| w.len())
}
