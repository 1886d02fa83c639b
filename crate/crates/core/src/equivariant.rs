//! Fixed-point weights of linearized bundles and their moment polytopes.
//!
//! Two sources are supported: a toric pair (fan, boundary, optional auxiliary
//! divisor), and abstract fixed-point records carrying cotangent weights and
//! boundary multiplicities. On toric input both agree exactly, see
//! [`export_records`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::convex::{contains, Polytope};
use crate::divisor::{canonical_divisor, vertex_weight, TDivisor};
use crate::error::{check_dim, Error, Result};
use crate::fan::{cotangent_weights, fixed_points, Fan};
use crate::rational::{denominator_lcm, Rational, RationalVector};

/// A toric divisor with the canonical linearization twisted by a character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedBundle {
    divisor: TDivisor,
    twist: RationalVector,
    multiple: BigInt,
}

impl LinearizedBundle {
    pub fn new(divisor: TDivisor, twist: RationalVector) -> Self {
        let multiple = divisor.denominator_lcm().lcm(&twist.denominator_lcm());
        LinearizedBundle {
            divisor,
            twist,
            multiple,
        }
    }

    pub fn untwisted(divisor: TDivisor, dim: usize) -> Self {
        LinearizedBundle::new(divisor, RationalVector::zeros(dim))
    }

    pub fn divisor(&self) -> &TDivisor {
        &self.divisor
    }

    pub fn twist(&self) -> &RationalVector {
        &self.twist
    }

    /// Least `m ≥ 1` with `m·divisor` and `m·twist` integral.
    pub fn multiple(&self) -> &BigInt {
        &self.multiple
    }

    /// The `k`-th tensor power.
    pub fn power(&self, k: u64) -> LinearizedBundle {
        let kq = Rational::from_integer(BigInt::from(k));
        LinearizedBundle::new(self.divisor.scaled(&kq), self.twist.scaled(&kq))
    }

    /// Twisted fixed-point weights, one per maximal cone in fan order.
    pub fn weights(&self, fan: &Fan) -> Result<Vec<RationalVector>> {
        check_dim(fan.dimension(), self.twist.dim())?;
        fixed_points(fan)?
            .iter()
            .map(|c| Ok(&vertex_weight(fan, &self.divisor, c)? + &self.twist))
            .collect()
    }

    /// `(1/m)·P_μ(L^m)` for the normalizing multiple `m`.
    pub fn moment_polytope(&self, fan: &Fan) -> Result<Polytope> {
        let m = Rational::from_integer(self.multiple.clone());
        let integral: Vec<RationalVector> = self.power_weights(fan)?;
        debug_assert!(integral.iter().all(RationalVector::is_integral));
        let scaled: Vec<RationalVector> = integral.iter().map(|w| w.scaled(&m.recip())).collect();
        Polytope::from_points(&scaled)
    }

    /// Integral weights of `L^m` for the normalizing multiple `m`.
    pub fn power_weights(&self, fan: &Fan) -> Result<Vec<RationalVector>> {
        let m = Rational::from_integer(self.multiple.clone());
        Ok(self.weights(fan)?.iter().map(|w| w.scaled(&m)).collect())
    }
}

/// Local data at one isolated fixed point.
///
/// `cotangent[i]` is the weight `ν_i` of the `i`-th local coordinate,
/// `boundary_mults[i]` the coefficient `δ_i` of the boundary component cut
/// out by that coordinate (0 if none). Auxiliary component `j` has
/// coefficient `aux_coeffs[j] ≥ 0` and vanishes to order `aux_mults[j][i]` in
/// the `i`-th coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointRecord {
    /// Rank of the torus, i.e. the dimension of every weight.
    pub dim: usize,
    pub cotangent: Vec<RationalVector>,
    pub boundary_mults: Vec<Rational>,
    pub aux_coeffs: Vec<Rational>,
    pub aux_mults: Vec<Vec<u64>>,
}

impl FixedPointRecord {
    pub fn new(dim: usize, cotangent: Vec<RationalVector>, boundary_mults: Vec<Rational>) -> Result<Self> {
        let rec = FixedPointRecord {
            dim,
            cotangent,
            boundary_mults,
            aux_coeffs: Vec::new(),
            aux_mults: Vec::new(),
        };
        rec.validate()?;
        Ok(rec)
    }

    pub fn with_aux(mut self, aux_coeffs: Vec<Rational>, aux_mults: Vec<Vec<u64>>) -> Result<Self> {
        self.aux_coeffs = aux_coeffs;
        self.aux_mults = aux_mults;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.cotangent.len();
        for nu in &self.cotangent {
            check_dim(self.dim, nu.dim())?;
        }
        if self.boundary_mults.len() != n {
            return Err(Error::InvalidRecord(format!(
                "{} boundary multiplicities for {n} cotangent weights",
                self.boundary_mults.len()
            )));
        }
        if self.aux_mults.len() != self.aux_coeffs.len() {
            return Err(Error::InvalidRecord(format!(
                "{} rows of auxiliary multiplicities for {} auxiliary coefficients",
                self.aux_mults.len(),
                self.aux_coeffs.len()
            )));
        }
        if let Some(row) = self.aux_mults.iter().find(|row| row.len() != n) {
            return Err(Error::InvalidRecord(format!(
                "auxiliary multiplicity row has {} entries, expected {n}",
                row.len()
            )));
        }
        if let Some(a) = self.aux_coeffs.iter().find(|a| a.is_negative()) {
            return Err(Error::InvalidRecord(format!("auxiliary coefficient {a} is negative")));
        }
        Ok(())
    }

    /// `Σ_{i,j} a_j m_{j,i} ν_i`: the amount the auxiliary divisor moves the
    /// pair weight.
    pub fn aux_shift(&self) -> RationalVector {
        let mut s = RationalVector::zeros(self.dim);
        for (a, row) in self.aux_coeffs.iter().zip(&self.aux_mults) {
            for (nu, &m) in self.cotangent.iter().zip(row) {
                if m != 0 {
                    s = &s + &nu.scaled(&(a * Rational::from_integer(BigInt::from(m))));
                }
            }
        }
        s
    }

    /// Least common denominator of every rational in the record.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = denominator_lcm(self.boundary_mults.iter().chain(&self.aux_coeffs));
        for nu in &self.cotangent {
            l = l.lcm(&nu.denominator_lcm());
        }
        l
    }
}

/// `−Σ ν_i`, the weight of the anticanonical bundle at a fixed point.
pub fn anticanonical_weight(dim: usize, cotangent: &[RationalVector]) -> Result<RationalVector> {
    for nu in cotangent {
        check_dim(dim, nu.dim())?;
    }
    Ok(-RationalVector::sum(dim, cotangent))
}

/// Weight of `−(K + D − A)` at the record's fixed point:
/// `−Σ_i (1 − δ_i) ν_i − Σ_{i,j} a_j m_{j,i} ν_i`.
pub fn pair_weight(rec: &FixedPointRecord) -> Result<RationalVector> {
    rec.validate()?;
    let mut mu = RationalVector::zeros(rec.dim);
    for (nu, delta) in rec.cotangent.iter().zip(&rec.boundary_mults) {
        mu = &mu - &nu.scaled(&(Rational::one() - delta));
    }
    Ok(&mu - &rec.aux_shift())
}

/// Tensoring with the character `c` shifts every weight by `c`.
pub fn twist_weights(weights: &[RationalVector], c: &RationalVector) -> Result<Vec<RationalVector>> {
    weights
        .iter()
        .map(|w| {
            check_dim(c.dim(), w.dim())?;
            Ok(w + c)
        })
        .collect()
}

/// A toric pair `(X, D)` with an optional effective auxiliary divisor `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairData {
    pub fan: Fan,
    pub boundary: TDivisor,
    pub aux: Option<TDivisor>,
}

impl PairData {
    pub fn new(fan: Fan, boundary: TDivisor, aux: Option<TDivisor>) -> Result<Self> {
        let rays = fan.rays().len();
        for d in std::iter::once(&boundary).chain(aux.as_ref()) {
            if d.num_rays() != rays {
                return Err(Error::DivisorLength {
                    expected: rays,
                    found: d.num_rays(),
                });
            }
        }
        if let Some(a) = &aux {
            if !a.is_effective() {
                return Err(Error::InvalidPair("auxiliary divisor must be effective".into()));
            }
        }
        Ok(PairData { fan, boundary, aux })
    }

    /// `−(K + D − A)`.
    pub fn anti_log_canonical(&self) -> TDivisor {
        let mut d = canonical_divisor(&self.fan).plus(&self.boundary);
        if let Some(a) = &self.aux {
            d = d.minus(a);
        }
        d.negated()
    }

    /// The same pair with the auxiliary divisor scaled by `epsilon`.
    pub fn with_aux_scaled(&self, epsilon: &Rational) -> PairData {
        PairData {
            fan: self.fan.clone(),
            boundary: self.boundary.clone(),
            aux: self.aux.as_ref().map(|a| a.scaled(epsilon)),
        }
    }
}

/// Where fixed-point weights come from.
#[derive(Clone, Copy, Debug)]
pub enum MomentSource<'a> {
    Toric(&'a PairData),
    Records(&'a [FixedPointRecord]),
}

/// Twisted fixed-point weights of `−(K + D − A)`, one per fixed point.
///
/// In toric mode the weight at each cone is assembled from the Cartier data
/// of `−K`, `D` and `A` separately.
pub fn fixed_point_weights(source: MomentSource<'_>, twist: &RationalVector) -> Result<Vec<RationalVector>> {
    let raw = match source {
        MomentSource::Toric(pair) => {
            let fan = &pair.fan;
            check_dim(fan.dimension(), twist.dim())?;
            let minus_k = canonical_divisor(fan).negated();
            fixed_points(fan)?
                .iter()
                .map(|c| {
                    let mut mu = &vertex_weight(fan, &minus_k, c)? - &vertex_weight(fan, &pair.boundary, c)?;
                    if let Some(a) = &pair.aux {
                        mu = &mu + &vertex_weight(fan, a, c)?;
                    }
                    Ok(mu)
                })
                .collect::<Result<Vec<_>>>()?
        }
        MomentSource::Records(records) => {
            let Some(first) = records.first() else {
                return Err(Error::InvalidRecord("no fixed-point records".into()));
            };
            records
                .iter()
                .map(|rec| {
                    check_dim(first.dim, rec.dim)?;
                    pair_weight(rec)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    twist_weights(&raw, twist)
}

/// Convex hull of the twisted fixed-point weights.
pub fn moment_polytope(source: MomentSource<'_>, twist: &RationalVector) -> Result<Polytope> {
    Polytope::from_points(&fixed_point_weights(source, twist)?)
}

/// Per-cone fixed-point records of a toric pair. The boundary multiplicity
/// of `ν_i` is the coefficient of the `i`-th ray of the cone; each ray with a
/// nonzero auxiliary coefficient becomes one auxiliary component vanishing to
/// order 1 along its own coordinate.
pub fn export_records(pair: &PairData) -> Result<Vec<FixedPointRecord>> {
    let fan = &pair.fan;
    let aux_rays: Vec<usize> = match &pair.aux {
        Some(a) => (0..a.num_rays()).filter(|&r| !a.coeff(r).is_zero()).collect(),
        None => Vec::new(),
    };
    fixed_points(fan)?
        .iter()
        .map(|cone| {
            let cotangent = cotangent_weights(fan, cone)?;
            let boundary_mults = cone.ray_indices().iter().map(|&r| pair.boundary.coeff(r).clone()).collect();
            let rec = FixedPointRecord::new(fan.dimension(), cotangent, boundary_mults)?;
            let Some(a) = &pair.aux else {
                return Ok(rec);
            };
            let coeffs = aux_rays.iter().map(|&r| a.coeff(r).clone()).collect();
            let mults = aux_rays
                .iter()
                .map(|&r| cone.ray_indices().iter().map(|&s| u64::from(s == r)).collect())
                .collect();
            rec.with_aux(coeffs, mults)
        })
        .collect()
}

/// The step sizes tried when searching for the local cone condition.
pub fn epsilon_ladder() -> Vec<Rational> {
    (1..=10).map(|k| Rational::new(BigInt::one(), BigInt::from(2u32).pow(k))).collect()
}

/// Largest `ε₀` on the ladder `1/2, 1/4, …, 1/1024` such that
/// `μ + ε·ν ∈ P` for every ladder value `ε ≤ ε₀`; `None` if it fails at the
/// smallest step.
pub fn local_cone_epsilon(p: &Polytope, mu: &RationalVector, nu: &RationalVector) -> Result<Option<Rational>> {
    check_dim(p.dim(), mu.dim())?;
    check_dim(p.dim(), nu.dim())?;
    let mut best = None;
    for eps in epsilon_ladder().into_iter().rev() {
        if !contains(p, &(mu + &nu.scaled(&eps)))? {
            break;
        }
        best = Some(eps);
    }
    Ok(best)
}

/// `max_σ ‖Σ_{i,j} a_j m_{j,i} ν_i‖_∞`: scaling the auxiliary divisor by `ε`
/// moves every fixed-point weight by at most `ε` times this constant, hence
/// bounds the Hausdorff distance between the moment polytopes.
pub fn aux_shift_bound(records: &[FixedPointRecord]) -> Rational {
    records
        .iter()
        .map(|r| r.aux_shift().sup_norm())
        .fold(Rational::zero(), |a, b| a.max(b))
}
