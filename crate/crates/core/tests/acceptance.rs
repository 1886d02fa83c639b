//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use eqnv_core::convex::{verify_integer_certificate, verify_separating_functional};
use eqnv_core::fan::cotangent_weights;
use eqnv_core::rational::{int, rat};
use eqnv_core::{
    aux_shift_bound, canonical_divisor, check_equivariant_nonvanishing, export_records, hausdorff_distance,
    integer_certificate, invariant_dimension, moment_polytope, rational_coefficients, run_pipeline,
    run_records_pipeline, section_polytope, section_weights, separating_functional, shrink_membership,
    vertex_weight, Answer, Certificate, Fan, LinearizedBundle, MomentSource, PairData, Polytope, Rational,
    RationalVector, TDivisor, Verdict,
};
use num_traits::{One, Signed, Zero};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let elapsed = start.elapsed();
    if elapsed > limit {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    } else {
        Ok(elapsed)
    }
}

fn segment(a: Rational, b: Rational) -> Polytope {
    Polytope::from_points(&[q1(a), q1(b)]).unwrap()
}

/// Every verdict with a no answer, gathered for the separating-functional
/// audit.
#[derive(Default)]
struct Collected {
    no_verdicts: Vec<Verdict>,
}

impl Collected {
    fn record(&mut self, v: &Verdict) {
        if v.answer() == Answer::No {
            self.no_verdicts.push(v.clone());
        }
    }
}

fn line_family_threshold(c: &mut Collected) -> Outcome {
    let start = Instant::now();
    for a in line_family() {
        let pair = line_pair(a.clone());
        let v = run_pipeline(&pair, &q1(int(0))).map_err(err)?;
        c.record(&v);
        let expected = segment(a.clone() - int(1), int(1));
        ensure!(v.moment_polytope() == &expected, "a = {a}: polytope {:?}", v.moment_polytope().vertices());
        let want = if a <= int(1) { Answer::Yes } else { Answer::No };
        ensure!(v.answer() == want, "a = {a}: answer {:?}", v.answer());
        let records = export_records(&pair).map_err(err)?;
        let w = run_records_pipeline(&records, &q1(int(0))).map_err(err)?;
        c.record(&w);
        ensure!(w.moment_polytope() == &expected && w.answer() == want, "a = {a}: records mode disagrees");
    }
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("8 values of a, threshold at a = 1, {t:?}"))
}

fn twisted_line_bundles(c: &mut Collected) -> Outcome {
    let start = Instant::now();
    let fan = Fan::projective_space(1);
    for w in [-2i64, -1, 0, 1, 5] {
        let base = twisted_line_bundle(w);
        let expect_yes = w == 0 || w == -1;
        let mut any_invariant = false;
        for m in 1..=3u64 {
            let l = base.power(m);
            let p = l.moment_polytope(&fan).map_err(err)?;
            let mi = m as i64;
            let expected = segment(int(-mi * (w + 1)), int(-mi * w));
            ensure!(p == expected, "w = {w}, m = {m}: polytope {:?}", p.vertices());
            let v = check_equivariant_nonvanishing(&p, l.multiple()).map_err(err)?;
            c.record(&v);
            ensure!((v.answer() == Answer::Yes) == expect_yes, "w = {w}, m = {m}: answer {:?}", v.answer());
            let dim = invariant_dimension(&fan, base.divisor(), base.twist(), m).map_err(err)?;
            any_invariant |= dim > 0;
        }
        ensure!(any_invariant == expect_yes, "w = {w}: invariant sections {any_invariant}");
        let taut = tautological_bundle(w).moment_polytope(&fan).map_err(err)?;
        ensure!(taut == segment(int(w), int(w + 1)), "w = {w}: weights of O(-1) {:?}", taut.vertices());
    }
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("5 twists x 3 powers, {t:?}"))
}

fn projective_spaces(c: &mut Collected) -> Outcome {
    let start = Instant::now();
    for n in 1..=3usize {
        let pair = anticanonical_pair(n);
        let v = run_pipeline(&pair, &RationalVector::zeros(n)).map_err(err)?;
        c.record(&v);
        ensure!(v.answer() == Answer::Yes, "n = {n}: answer no");
        let minus_k = canonical_divisor(&pair.fan).negated();
        for m in 1..=5u64 {
            let d = invariant_dimension(&pair.fan, &minus_k, &RationalVector::zeros(n), m).map_err(err)?;
            ensure!(d == 1, "n = {n}, m = {m}: invariant dimension {d}");
            let sections = section_weights(&pair.fan, &minus_k, m).map_err(err)?;
            let balanced = sections.iter().filter(|u| u.is_zero()).count();
            ensure!(balanced == 1, "n = {n}, m = {m}: {balanced} weight-zero sections");
        }
        let p = section_polytope(&pair.fan, &minus_k).map_err(err)?;
        ensure!(p.affine_dimension() == n, "n = {n}: section polytope dimension {}", p.affine_dimension());
    }
    let t = within(start, Duration::from_secs(5))?;
    Ok(format!("n = 1, 2, 3 and m = 1..5, {t:?}"))
}

const CORPUS_SEED: u64 = 0x5eed_0001;
const CORPUS_SIZE: usize = 60;

fn corpus() -> Vec<Sample> {
    let mut r = rng(CORPUS_SEED);
    (0..CORPUS_SIZE).map(|_| random_sample(&mut r)).collect()
}

fn vertex_weights(fan: &Fan, d: &TDivisor) -> Result<Vec<RationalVector>, String> {
    fan.max_cones().iter().map(|c| vertex_weight(fan, d, c).map_err(err)).collect()
}

fn polytope_scaling(samples: &[Sample]) -> Outcome {
    let mut r = rng(CORPUS_SEED + 1);
    let mut subset_checks = 0;
    for (i, s) in samples.iter().enumerate() {
        let fan = &s.fan;
        let n = fan.dimension();
        let d = random_nef(&mut r, s, false);
        let twist = RationalVector::new((0..n).map(|k| rat(k as i64 - 1, 2)).collect());
        let l = LinearizedBundle::new(d, twist);
        let p = l.moment_polytope(fan).map_err(err)?;
        for m in [2u64, 3] {
            let pm = l.power(m).moment_polytope(fan).map_err(err)?;
            ensure!(pm == p.scale(&int(m as i64)).map_err(err)?, "sample {i}: scaling fails for m = {m}");
        }

        let d = random_nef(&mut r, s, true);
        let sections = section_weights(fan, &d, 1).map_err(err)?;
        let fixed = Polytope::from_points(&vertex_weights(fan, &d)?).map_err(err)?;
        let gamma = Polytope::from_points(&sections).map_err(err)?;
        ensure!(gamma == fixed, "sample {i}: section and moment polytopes differ for a nef divisor");

        for _ in 0..4 {
            let d = random_divisor(&mut r, fan);
            let sections = section_weights(fan, &d, 1).map_err(err)?;
            if sections.is_empty() {
                continue;
            }
            let fixed = Polytope::from_points(&vertex_weights(fan, &d)?).map_err(err)?;
            let gamma = Polytope::from_points(&sections).map_err(err)?;
            ensure!(gamma.is_subset_of(&fixed).map_err(err)?, "sample {i}: section polytope escapes");
            subset_checks += 1;
        }
    }
    Ok(format!("{} fans, {subset_checks} non-nef inclusions", samples.len()))
}

fn local_weights(samples: &[Sample]) -> Outcome {
    let mut points = 0;
    for (i, s) in samples.iter().enumerate() {
        let fan = &s.fan;
        let k = fan.rays().len();
        let minus_k = canonical_divisor(fan).negated();
        for cone in fan.max_cones() {
            let nu = cotangent_weights(fan, cone).map_err(err)?;
            let mu = vertex_weight(fan, &minus_k, cone).map_err(err)?;
            ensure!(mu == -RationalVector::sum(fan.dimension(), &nu), "sample {i}: anticanonical weight");
            for ray in 0..k {
                let w = vertex_weight(fan, &TDivisor::prime(k, ray, int(-1)), cone).map_err(err)?;
                if cone.contains_ray(ray) {
                    ensure!(nu.contains(&w), "sample {i}: conormal weight of ray {ray} not cotangent");
                } else {
                    ensure!(w.is_zero(), "sample {i}: ray {ray} off the cone has weight {w}");
                }
            }
            points += 1;
        }
    }
    Ok(format!("{points} fixed points"))
}

fn certificates() -> Outcome {
    let mut r = rng(0x5eed_0006);
    for trial in 0..100 {
        let (points, center) = random_polytope_around(&mut r);
        let lambda = rational_coefficients(&points, &center)
            .map_err(err)?
            .ok_or_else(|| format!("trial {trial}: interior point reported outside"))?;
        ensure!(lambda.iter().all(|l| !l.is_negative()), "trial {trial}: negative coefficient");
        ensure!(lambda.iter().sum::<Rational>() == Rational::one(), "trial {trial}: coefficients do not sum to 1");
        let combo = points
            .iter()
            .zip(&lambda)
            .fold(RationalVector::zeros(center.dim()), |acc, (p, l)| &acc + &p.scaled(l));
        ensure!(combo == center, "trial {trial}: combination misses the point");

        let shifted: Vec<RationalVector> = points.iter().map(|p| p - &center).collect();
        let k = integer_certificate(&shifted)
            .map_err(err)?
            .ok_or_else(|| format!("trial {trial}: no integer certificate"))?;
        ensure!(verify_integer_certificate(&shifted, &k), "trial {trial}: integer certificate fails");
    }
    Ok("100 polytopes".into())
}

fn separating(c: &Collected) -> Outcome {
    for v in &c.no_verdicts {
        let Certificate::SeparatingFunctional { phi } = v.certificate() else {
            return Err("no verdict without a separating functional".into());
        };
        let p = v.moment_polytope();
        ensure!(
            verify_separating_functional(p.vertices(), &RationalVector::zeros(p.dim()), phi),
            "functional {phi} not positive on {:?}",
            p.vertices()
        );
    }
    let mut r = rng(0x5eed_0007);
    for trial in 0..50 {
        let p = random_polytope_avoiding_origin(&mut r);
        let origin = RationalVector::zeros(p.dim());
        let phi = separating_functional(&p, &origin)
            .map_err(err)?
            .ok_or_else(|| format!("trial {trial}: no functional"))?;
        ensure!(verify_separating_functional(p.vertices(), &origin, &phi), "trial {trial}: functional fails");
        let vmin = p.vertices().iter().min_by(|a, b| a.dot(&phi).cmp(&b.dot(&phi))).unwrap();
        for eps in [rat(1, 2), rat(1, 16), rat(1, 1000)] {
            ensure!(
                !shrink_membership(&p, vmin, &eps).map_err(err)?,
                "trial {trial}: shrinking the minimizing vertex by {eps} stays inside"
            );
        }
    }
    Ok(format!("{} collected no-verdicts, 50 random polytopes", c.no_verdicts.len()))
}

fn perturbation_fixtures() -> Vec<PairData> {
    let p2 = Fan::projective_space(2);
    let f1 = Fan::hirzebruch(1);
    let p1p1 = Fan::projective_space(1).product(&Fan::projective_space(1));
    vec![
        PairData::new(
            p2,
            TDivisor::new(vec![rat(1, 2), rat(1, 3), int(0)]),
            Some(TDivisor::from_ints(&[1, 0, 0])),
        )
        .unwrap(),
        PairData::new(
            f1,
            TDivisor::new(vec![rat(1, 2), int(0), int(1), int(0)]),
            Some(TDivisor::from_ints(&[1, 1, 0, 1])),
        )
        .unwrap(),
        PairData::new(p1p1, TDivisor::zero(4), Some(TDivisor::from_ints(&[1, 0, 2, 0]))).unwrap(),
    ]
}

fn nonvanishing_guarantee(samples: &[Sample], c: &mut Collected) -> Outcome {
    let start = Instant::now();
    let mut r = rng(0x5eed_0008);
    let mut runs = 0;
    while runs < 100 {
        let s = &samples[runs % samples.len()];
        let pair = random_sub_lc_pair(&mut r, s);
        let v = run_pipeline(&pair, &RationalVector::zeros(s.fan.dimension())).map_err(err)?;
        c.record(&v);
        ensure!(v.answer() == Answer::Yes, "run {runs}: answer no");
        runs += 1;
    }
    let extra = 100;
    for k in 0..extra {
        let s = random_sample(&mut r);
        let pair = random_sub_lc_pair(&mut r, &s);
        let v = run_pipeline(&pair, &RationalVector::zeros(s.fan.dimension())).map_err(err)?;
        ensure!(v.answer() == Answer::Yes, "fresh run {k}: answer no");
    }

    for (i, pair) in perturbation_fixtures().into_iter().enumerate() {
        let n = pair.fan.dimension();
        let zero = RationalVector::zeros(n);
        let c_bound = aux_shift_bound(&export_records(&pair).map_err(err)?);
        ensure!(c_bound.is_positive(), "fixture {i}: zero perturbation constant");
        let base = pair.with_aux_scaled(&Rational::zero());
        let p0 = moment_polytope(MomentSource::Toric(&base), &zero).map_err(err)?;
        let mut previous: Option<Rational> = None;
        for eps in [rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 16)] {
            let pe = moment_polytope(MomentSource::Toric(&pair.with_aux_scaled(&eps)), &zero).map_err(err)?;
            ensure!(pe.contains(&zero).map_err(err)?, "fixture {i}: origin outside at eps = {eps}");
            let d = hausdorff_distance(&pe, &p0).map_err(err)?;
            ensure!(d <= &c_bound * &eps, "fixture {i}: distance {d} exceeds {c_bound} * {eps}");
            if let Some(prev) = &previous {
                ensure!(d < *prev, "fixture {i}: distance {d} not below {prev}");
            }
            previous = Some(d);
        }
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("{} pipelines, 3 perturbation fixtures, {t:?}", runs + extra))
}

struct Fixture {
    name: String,
    pair: PairData,
    twist: RationalVector,
}

fn sign_flip_fixtures(samples: &[Sample]) -> Vec<Fixture> {
    let mut out = Vec::new();
    for a in line_family() {
        out.push(Fixture {
            name: format!("line pair a = {a}"),
            pair: line_pair(a),
            twist: q1(int(0)),
        });
    }
    for w in [-2i64, -1, 0, 1, 5] {
        let fan = Fan::projective_space(1);
        // −(K + B) = D₀ for B = D₁.
        let pair = PairData::new(fan, TDivisor::from_ints(&[0, 1]), None).unwrap();
        out.push(Fixture {
            name: format!("twisted line bundle w = {w}"),
            pair,
            twist: q1(int(-w)),
        });
    }
    for n in 1..=3 {
        out.push(Fixture {
            name: format!("projective space n = {n}"),
            pair: anticanonical_pair(n),
            twist: RationalVector::zeros(n),
        });
    }
    for fixture in perturbation_fixtures() {
        let n = fixture.fan.dimension();
        out.push(Fixture {
            name: "perturbation fixture".into(),
            pair: fixture,
            twist: RationalVector::new((0..n).map(|k| rat(1 - k as i64, 3)).collect()),
        });
    }
    let mut r = rng(0x5eed_0009);
    for (i, s) in samples.iter().take(20).enumerate() {
        let mut pair = random_sub_lc_pair(&mut r, s);
        let k = pair.fan.rays().len();
        pair.boundary = pair.boundary.plus(&TDivisor::prime(k, 0, int(2)));
        out.push(Fixture {
            name: format!("random sample {i}"),
            pair,
            twist: RationalVector::zeros(s.fan.dimension()),
        });
    }
    out
}

fn flipped(pair: &PairData) -> PairData {
    PairData::new(pair.fan.negated(), pair.boundary.clone(), pair.aux.clone()).unwrap()
}

fn sign_flip(samples: &[Sample], c: &mut Collected) -> Outcome {
    let fixtures = sign_flip_fixtures(samples);
    for f in &fixtures {
        let g = flipped(&f.pair);
        let twist_neg = -f.twist.clone();
        let v = run_pipeline(&f.pair, &f.twist).map_err(err)?;
        let w = run_pipeline(&g, &twist_neg).map_err(err)?;
        c.record(&v);
        c.record(&w);
        ensure!(
            w.moment_polytope() == &v.moment_polytope().negated(),
            "{}: moment polytope does not negate",
            f.name
        );
        ensure!(v.answer() == w.answer(), "{}: verdict changes", f.name);
        let target = f.pair.anti_log_canonical();
        for m in 1..=3u64 {
            let a = invariant_dimension(&f.pair.fan, &target, &f.twist, m).map_err(err)?;
            let b = invariant_dimension(&g.fan, &target, &twist_neg, m).map_err(err)?;
            ensure!(a == b, "{}: invariant dimension changes in degree {m}", f.name);
        }
        if let Ok(p) = section_polytope(&f.pair.fan, &target) {
            let q = section_polytope(&g.fan, &target).map_err(err)?;
            ensure!(q == p.negated(), "{}: section polytope does not negate", f.name);
        }
    }
    Ok(format!("{} fixtures", fixtures.len()))
}

fn main() {
    let samples = corpus();
    let mut collected = Collected::default();
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "line pair threshold", line_family_threshold(&mut collected)),
        (2, "twisted line bundles", twisted_line_bundles(&mut collected)),
        (3, "anticanonical projective spaces", projective_spaces(&mut collected)),
        (4, "polytope scaling and inclusion", polytope_scaling(&samples)),
        (5, "local weights", local_weights(&samples)),
        (6, "convex-combination certificates", certificates()),
    ];
    let guarantee = nonvanishing_guarantee(&samples, &mut collected);
    let flip = sign_flip(&samples, &mut collected);
    results.push((7, "separating functionals", separating(&collected)));
    results.push((8, "non-vanishing guarantee and perturbation", guarantee));
    results.push((9, "sign-flip invariance", flip));

    let mut failures = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {id} PASS  {name}: {detail}"),
            Err(reason) => {
                failures += 1;
                println!("criterion {id} FAIL  {name}: {reason}");
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
