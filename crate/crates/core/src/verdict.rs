//! The decision pipeline: assemble the moment polytope, test whether it
//! contains the origin and return a re-verified certificate either way.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::convex::{
    contains, integer_certificate, separating_functional, verify_integer_certificate, verify_separating_functional,
    Polytope,
};
use crate::divisor::{invariant_dimension, positivity, section_polytope};
use crate::equivariant::{moment_polytope, FixedPointRecord, LinearizedBundle, MomentSource, PairData};
use crate::error::{check_dim, Error, Result};
use crate::rational::{Rational, RationalVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `Σ k_i w_i = 0` over the moment-polytope vertices `w_i`. The monomial
    /// `Π s_i^{k_i}` in weight-`m·w_i` sections of `L^m` is an invariant
    /// section of degree `witness_degree = m·Σ k_i`.
    InvariantSection {
        multiplicities: Vec<BigInt>,
        weights: Vec<RationalVector>,
        witness_degree: BigInt,
    },
    /// `φ(v) > 0` at every vertex of the moment polytope.
    SeparatingFunctional { phi: RationalVector },
}

/// `None` means the flag could not be checked for this input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub sub_lc: Option<bool>,
    pub nef: Option<bool>,
    pub ample: Option<bool>,
    pub semiample: Option<bool>,
    pub basepoint_free: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub moment_polytope: Polytope,
    pub multiple: BigInt,
    pub twist: RationalVector,
    pub flags: Flags,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    answer: Answer,
    certificate: Certificate,
    context: Context,
}

impl Verdict {
    /// Fails unless the certificate proves the answer for the context's
    /// moment polytope.
    pub fn new(answer: Answer, certificate: Certificate, context: Context) -> Result<Self> {
        let v = Verdict {
            answer,
            certificate,
            context,
        };
        if !v.verify() {
            return Err(Error::InternalInconsistency(format!(
                "certificate does not support the answer {answer:?}"
            )));
        }
        Ok(v)
    }

    pub fn answer(&self) -> Answer {
        self.answer
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn moment_polytope(&self) -> &Polytope {
        &self.context.moment_polytope
    }

    pub fn with_flags(mut self, flags: Flags) -> Self {
        self.context.flags = flags;
        self
    }

    /// Exact re-check of the certificate against the moment polytope.
    pub fn verify(&self) -> bool {
        let p = &self.context.moment_polytope;
        match (&self.answer, &self.certificate) {
            (
                Answer::Yes,
                Certificate::InvariantSection {
                    multiplicities,
                    weights,
                    witness_degree,
                },
            ) => {
                weights.iter().all(|w| p.vertices().contains(w))
                    && verify_integer_certificate(weights, multiplicities)
                    && *witness_degree == &self.context.multiple * multiplicities.iter().sum::<BigInt>()
            }
            (Answer::No, Certificate::SeparatingFunctional { phi }) => {
                verify_separating_functional(p.vertices(), &RationalVector::zeros(p.dim()), phi)
            }
            _ => false,
        }
    }
}

/// Sub-log-canonical: every coefficient `≤ 1`, and `≥ 0` as well when
/// `effective_required`.
pub fn check_sub_lc(coeffs: &[Rational], effective_required: bool) -> bool {
    coeffs
        .iter()
        .all(|a| *a <= Rational::one() && (!effective_required || *a >= Rational::zero()))
}

/// Decides `0 ∈ P_μ` and certifies the answer. `multiple` is the normalizing
/// multiple of the bundle, used for the witness degree.
pub fn check_equivariant_nonvanishing(p_mu: &Polytope, multiple: &BigInt) -> Result<Verdict> {
    let context = Context {
        moment_polytope: p_mu.clone(),
        multiple: multiple.clone(),
        twist: RationalVector::zeros(p_mu.dim()),
        flags: Flags::default(),
    };
    let origin = RationalVector::zeros(p_mu.dim());
    let weights = p_mu.vertices().to_vec();
    let found = if p_mu.dim() == 0 {
        Some(vec![BigInt::one()])
    } else if contains(p_mu, &origin)? {
        integer_certificate(&weights)?
    } else {
        None
    };
    match found {
        Some(k) => {
            let witness_degree = multiple * k.iter().sum::<BigInt>();
            Verdict::new(
                Answer::Yes,
                Certificate::InvariantSection {
                    multiplicities: k,
                    weights,
                    witness_degree,
                },
                context,
            )
        }
        None => {
            let phi = separating_functional(p_mu, &origin)?.ok_or_else(|| {
                Error::InternalInconsistency("origin outside the hull but no separating functional".into())
            })?;
            Verdict::new(Answer::No, Certificate::SeparatingFunctional { phi }, context)
        }
    }
}

fn with_context(v: Verdict, twist: &RationalVector, flags: Flags) -> Verdict {
    let mut v = v.with_flags(flags);
    v.context.twist = twist.clone();
    v
}

/// Runs the decision on a toric pair. If the boundary is sub-lc, the
/// anti-log-canonical divisor is nef and the twist is trivial, a no answer
/// is impossible and is reported as an internal inconsistency.
pub fn run_pipeline(pair: &PairData, twist: &RationalVector) -> Result<Verdict> {
    check_dim(pair.fan.dimension(), twist.dim())?;
    let target = pair.anti_log_canonical();
    let pos = positivity(&pair.fan, &target)?;
    let flags = Flags {
        sub_lc: Some(check_sub_lc(pair.boundary.coeffs(), false)),
        nef: Some(pos.nef),
        ample: Some(pos.ample),
        semiample: Some(pos.semiample),
        basepoint_free: Some(pos.basepoint_free),
    };
    let bundle = LinearizedBundle::new(target, twist.clone());
    let p_mu = moment_polytope(MomentSource::Toric(pair), twist)?;
    let v = with_context(check_equivariant_nonvanishing(&p_mu, bundle.multiple())?, twist, flags);
    if flags.sub_lc == Some(true) && pos.nef && twist.is_zero() && v.answer == Answer::No {
        return Err(Error::InternalInconsistency(
            "sub-lc pair with nef anti-log-canonical divisor has no invariant section".into(),
        ));
    }
    Ok(v)
}

/// Runs the decision on abstract fixed-point records. Positivity cannot be
/// checked from local data and is reported as unverified.
pub fn run_records_pipeline(records: &[FixedPointRecord], twist: &RationalVector) -> Result<Verdict> {
    let p_mu = moment_polytope(MomentSource::Records(records), twist)?;
    let multiple = records
        .iter()
        .fold(twist.denominator_lcm(), |acc, r| acc.lcm(&r.denominator_lcm()));
    let sub_lc = records.iter().all(|r| check_sub_lc(&r.boundary_mults, false));
    let flags = Flags {
        sub_lc: Some(sub_lc),
        ..Flags::default()
    };
    Ok(with_context(check_equivariant_nonvanishing(&p_mu, &multiple)?, twist, flags))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KappaLower {
    /// Some power up to the bound carries an invariant section.
    NonNegative,
    /// No invariant section in any degree `1..=m_max`.
    NegativeInfinityUpTo(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaReport {
    /// `invariant_dims[m − 1]` is the invariant dimension in degree `m`.
    pub invariant_dims: Vec<u64>,
    /// Iitaka dimension of the bundle itself, the dimension of its section
    /// polytope; `None` if it has no sections at all.
    pub kappa: Option<usize>,
    pub kappa_lower: KappaLower,
}

/// Invariant section counts of `−(K + D − A)` twisted by `twist` in degrees
/// `1..=m_max`.
pub fn kappa_estimates(pair: &PairData, twist: &RationalVector, m_max: u64) -> Result<KappaReport> {
    if m_max == 0 {
        return Err(Error::ZeroDegree);
    }
    let target = pair.anti_log_canonical();
    let invariant_dims = (1..=m_max)
        .map(|m| invariant_dimension(&pair.fan, &target, twist, m))
        .collect::<Result<Vec<_>>>()?;
    let kappa = match section_polytope(&pair.fan, &target) {
        Ok(p) => Some(p.affine_dimension()),
        Err(Error::EmptySectionPolytope) => None,
        Err(e) => return Err(e),
    };
    let kappa_lower = if invariant_dims.iter().any(|&d| d > 0) {
        KappaLower::NonNegative
    } else {
        KappaLower::NegativeInfinityUpTo(m_max)
    };
    Ok(KappaReport {
        invariant_dims,
        kappa,
        kappa_lower,
    })
}
