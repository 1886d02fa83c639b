#![allow(dead_code)]

use eqnv_core::rational::{int, rat};
use eqnv_core::{positivity, Fan, LinearizedBundle, PairData, Polytope, Rational, RationalVector, TDivisor};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn v(c: &[i64]) -> RationalVector {
    RationalVector::from_ints(c)
}

pub fn q1(x: Rational) -> RationalVector {
    RationalVector::new(vec![x])
}

/// A smooth complete fan together with nef divisors spanning a subcone of
/// its nef cone.
#[derive(Clone, Debug)]
pub struct Sample {
    pub fan: Fan,
    pub nef_basis: Vec<TDivisor>,
}

const MAX_RAYS: usize = 9;

fn base_fans() -> Vec<Fan> {
    let p1 = Fan::projective_space(1);
    vec![
        p1.clone(),
        Fan::projective_space(2),
        Fan::projective_space(3),
        p1.product(&p1),
        Fan::hirzebruch(1),
        Fan::hirzebruch(2),
        Fan::hirzebruch(3),
        p1.product(&Fan::projective_space(2)),
        p1.product(&p1).product(&p1),
        Fan::hirzebruch(1).product(&p1),
    ]
}

/// Nef divisors among the 0/1 combinations of prime divisors.
fn nef_generators(fan: &Fan) -> Vec<TDivisor> {
    let k = fan.rays().len();
    let mut out: Vec<TDivisor> = Vec::new();
    for mask in 1u32..(1 << k) {
        let d = TDivisor::new((0..k).map(|i| int(i64::from((mask >> i) & 1))).collect());
        if positivity(fan, &d).unwrap().nef {
            out.push(d);
        }
    }
    out
}

/// Pull back along a star subdivision: the new ray's coefficient is the sum
/// over the subdivided face.
fn pull_back(d: &TDivisor, face: &[usize]) -> TDivisor {
    let mut c = d.coeffs().to_vec();
    c.push(face.iter().map(|&r| d.coeff(r).clone()).sum());
    TDivisor::new(c)
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut g: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n < 2 {
        if rng.gen_bool(0.5) {
            g[0][0] = -1;
        }
        return g;
    }
    for _ in 0..rng.gen_range(0..=2) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let s = if rng.gen_bool(0.5) { 1 } else { -1 };
        let row_j = g[j].clone();
        for (x, y) in g[i].iter_mut().zip(&row_j) {
            *x += s * y;
        }
    }
    g
}

pub fn random_sample(rng: &mut ChaCha8Rng) -> Sample {
    let fan = base_fans().choose(rng).unwrap().clone();
    let mut nef_basis = nef_generators(&fan);
    let mut fan = fan;
    let n = fan.dimension();
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=3) {
            if fan.rays().len() >= MAX_RAYS {
                break;
            }
            let cone = fan.max_cones().choose(rng).unwrap().clone();
            let size = rng.gen_range(2..=n);
            let mut face: Vec<usize> = cone.ray_indices().to_vec();
            face.shuffle(rng);
            face.truncate(size);
            let (next, new_index) = fan.star_subdivision(&face).unwrap();
            assert_eq!(new_index, fan.rays().len());
            nef_basis = nef_basis.iter().map(|d| pull_back(d, &face)).collect();
            fan = next;
        }
    }
    let g = random_unimodular(rng, n);
    let fan = fan.transformed(&g).unwrap();
    Sample { fan, nef_basis }
}

/// `div(χ^m)`: coefficient `⟨m, v_ρ⟩` on every ray.
pub fn principal(fan: &Fan, m: &[i64]) -> TDivisor {
    TDivisor::new(
        fan.rays()
            .iter()
            .map(|r| int(r.vector.iter().zip(m).map(|(a, b)| a * b).sum()))
            .collect(),
    )
}

fn random_coefficient(rng: &mut ChaCha8Rng, integral: bool) -> Rational {
    if integral {
        int(rng.gen_range(0..=2))
    } else {
        rat(rng.gen_range(0..=6), rng.gen_range(1..=3))
    }
}

/// Nonnegative combination of up to three nef basis elements; every
/// coefficient is ≥ 0.
pub fn random_effective_nef(rng: &mut ChaCha8Rng, s: &Sample, integral: bool) -> TDivisor {
    let mut d = TDivisor::zero(s.fan.rays().len());
    for _ in 0..rng.gen_range(1..=3) {
        let b = s.nef_basis.choose(rng).expect("nef basis is nonempty");
        d = d.plus(&b.scaled(&random_coefficient(rng, integral)));
    }
    d
}

/// A nef divisor, moved by a random principal divisor.
pub fn random_nef(rng: &mut ChaCha8Rng, s: &Sample, integral: bool) -> TDivisor {
    let m: Vec<i64> = (0..s.fan.dimension()).map(|_| rng.gen_range(-2..=2)).collect();
    random_effective_nef(rng, s, integral).plus(&principal(&s.fan, &m))
}

/// Integral divisor with small coefficients, not necessarily nef.
pub fn random_divisor(rng: &mut ChaCha8Rng, fan: &Fan) -> TDivisor {
    TDivisor::new((0..fan.rays().len()).map(|_| int(rng.gen_range(-1..=2))).collect())
}

/// Boundary `1 − E` with `E` effective and nef, so the pair is sub-lc and
/// `−(K + D) = E` is nef.
pub fn random_sub_lc_pair(rng: &mut ChaCha8Rng, s: &Sample) -> PairData {
    let integral = rng.gen_bool(0.5);
    let e = random_effective_nef(rng, s, integral);
    let boundary = TDivisor::new(e.coeffs().iter().map(|c| int(1) - c).collect());
    PairData::new(s.fan.clone(), boundary, None).unwrap()
}

/// Rational polytope in dimension 1..=3 with a known interior point.
pub fn random_polytope_around(rng: &mut ChaCha8Rng) -> (Vec<RationalVector>, RationalVector) {
    let d = rng.gen_range(1..=3);
    let center = RationalVector::new((0..d).map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect());
    let mut points = Vec::new();
    // A cross polytope around the center guarantees it is interior.
    for k in 0..d {
        for s in [1, -1] {
            let r = rat(s * rng.gen_range(1..=5), rng.gen_range(1..=3));
            let mut p = center.clone().into_coords();
            p[k] += r;
            points.push(RationalVector::new(p));
        }
    }
    for _ in 0..rng.gen_range(0..=4) {
        points.push(RationalVector::new(
            (0..d).map(|_| rat(rng.gen_range(-12..=12), rng.gen_range(1..=4))).collect(),
        ));
    }
    (points, center)
}

/// Random rational polytope in dimension 1..=3 avoiding the origin.
pub fn random_polytope_avoiding_origin(rng: &mut ChaCha8Rng) -> Polytope {
    loop {
        let (points, _) = random_polytope_around(rng);
        let p = Polytope::from_points(&points).unwrap();
        if !p.contains(&RationalVector::zeros(p.dim())).unwrap() {
            return p;
        }
    }
}

/// Projective line with boundary `a` times the divisor of the ray `e₁`.
pub fn line_pair(a: Rational) -> PairData {
    PairData::new(Fan::projective_space(1), TDivisor::new(vec![a, int(0)]), None).unwrap()
}

pub fn line_family() -> Vec<Rational> {
    vec![
        int(0),
        rat(1, 4),
        rat(1, 2),
        rat(3, 4),
        int(1),
        rat(5, 4),
        rat(3, 2),
        int(2),
    ]
}

/// `O(1)` on the projective line linearized so that its fixed-point weights
/// are `{−(w+1), −w}`.
pub fn twisted_line_bundle(w: i64) -> LinearizedBundle {
    LinearizedBundle::new(TDivisor::from_ints(&[1, 0]), v(&[-w]))
}

/// `O(−1)` on the projective line linearized so that its fixed-point weights
/// are `{w, w + 1}`.
pub fn tautological_bundle(w: i64) -> LinearizedBundle {
    LinearizedBundle::new(TDivisor::from_ints(&[-1, 0]), v(&[w]))
}

pub fn anticanonical_pair(n: usize) -> PairData {
    let fan = Fan::projective_space(n);
    let k = fan.rays().len();
    PairData::new(fan, TDivisor::zero(k), None).unwrap()
}
