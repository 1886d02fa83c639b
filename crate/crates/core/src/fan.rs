//! Smooth complete fans: validation, fixed points and cotangent weights.
//!
//! A maximal cone corresponds to an isolated torus-fixed point of the toric
//! variety. With the section-positive convention used throughout the crate,
//! the cotangent weights at that point are the dual basis of the cone's rays.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{int, Rational, RationalVector};

/// Dimension above which completeness is not checked and must be asserted by
/// the caller.
pub const MAX_VERIFIED_COMPLETENESS_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub index: usize,
    pub vector: Vec<i64>,
}

impl Ray {
    pub fn as_vector(&self) -> RationalVector {
        RationalVector::from_ints(&self.vector)
    }
}

/// A cone given by the sorted indices of its rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    ray_indices: Vec<usize>,
}

impl Cone {
    pub fn new(mut ray_indices: Vec<usize>) -> Self {
        ray_indices.sort_unstable();
        ray_indices.dedup();
        Cone { ray_indices }
    }

    pub fn ray_indices(&self) -> &[usize] {
        &self.ray_indices
    }

    pub fn contains_ray(&self, ray: usize) -> bool {
        self.ray_indices.binary_search(&ray).is_ok()
    }

    /// Position of `ray` within the cone's ray order.
    pub fn position(&self, ray: usize) -> Option<usize> {
        self.ray_indices.binary_search(&ray).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dimension: usize,
    rays: Vec<Ray>,
    max_cones: Vec<Cone>,
    trusted_complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanDiagnostics {
    pub smooth: bool,
    pub complete: bool,
    pub messages: Vec<String>,
}

impl Fan {
    /// Builds a fan from ray vectors and maximal cones (lists of ray indices).
    ///
    /// Rejects zero, non-primitive or duplicate rays, and out-of-range cone
    /// indices. Cones of the wrong size are accepted here and reported by
    /// [`validate_fan`].
    pub fn new(dimension: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dimension {
                return Err(Error::InvalidFan(format!(
                    "ray {i} has length {} in a fan of dimension {dimension}",
                    r.len()
                )));
            }
            let g = r.iter().fold(0i64, |acc, &x| acc.gcd(&x));
            if g == 0 {
                return Err(Error::InvalidFan(format!("ray {i} is zero")));
            }
            if g != 1 {
                return Err(Error::InvalidFan(format!("ray {i} {r:?} is not primitive")));
            }
            if !seen.insert(r.clone()) {
                return Err(Error::InvalidFan(format!("ray {i} {r:?} is a duplicate")));
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (c, idx) in max_cones.into_iter().enumerate() {
            if let Some(&bad) = idx.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!(
                    "cone {c} refers to ray {bad} but there are {} rays",
                    rays.len()
                )));
            }
            let cone = Cone::new(idx);
            cones.push(cone);
        }
        let unique: BTreeSet<&Cone> = cones.iter().collect();
        if unique.len() != cones.len() {
            return Err(Error::InvalidFan("duplicate maximal cone".into()));
        }
        Ok(Fan {
            dimension,
            rays: rays
                .into_iter()
                .enumerate()
                .map(|(index, vector)| Ray { index, vector })
                .collect(),
            max_cones: cones,
            trusted_complete: false,
        })
    }

    /// Declares the fan complete without verification (needed above
    /// [`MAX_VERIFIED_COMPLETENESS_DIM`]).
    pub fn trusted_complete(mut self) -> Self {
        self.trusted_complete = true;
        self
    }

    pub fn is_trusted_complete(&self) -> bool {
        self.trusted_complete
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn ray_vector(&self, i: usize) -> RationalVector {
        self.rays[i].as_vector()
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    /// Projective space of dimension `n`: rays `e_1..e_n, −Σe_i`, every
    /// `n`-subset a maximal cone.
    pub fn projective_space(n: usize) -> Self {
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        rays.push(vec![-1; n]);
        let cones = crate::convex::combinations(n + 1, n);
        Fan::new(n, rays, cones).expect("projective space fan is valid")
    }

    /// Hirzebruch surface `F_a`: rays `(1,0), (0,1), (−1,a), (0,−1)`.
    pub fn hirzebruch(a: i64) -> Self {
        Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .expect("Hirzebruch fan is valid")
    }

    /// Product fan; rays of `self` come first.
    pub fn product(&self, other: &Fan) -> Self {
        let (n1, n2) = (self.dimension, other.dimension);
        let mut rays = Vec::new();
        for r in &self.rays {
            let mut v = r.vector.clone();
            v.extend(std::iter::repeat_n(0, n2));
            rays.push(v);
        }
        for r in &other.rays {
            let mut v = vec![0; n1];
            v.extend(&r.vector);
            rays.push(v);
        }
        let offset = self.rays.len();
        let mut cones = Vec::new();
        for a in &self.max_cones {
            for b in &other.max_cones {
                let mut c = a.ray_indices.clone();
                c.extend(b.ray_indices.iter().map(|i| i + offset));
                cones.push(c);
            }
        }
        let mut fan = Fan::new(n1 + n2, rays, cones).expect("product of valid fans is valid");
        fan.trusted_complete = self.trusted_complete && other.trusted_complete;
        fan
    }

    /// Star subdivision along the cone spanned by `face` (at least two rays
    /// of a common maximal cone): adds the ray `Σ v_i` and splits every
    /// maximal cone containing the face. Returns the new fan and the index of
    /// the added ray.
    pub fn star_subdivision(&self, face: &[usize]) -> Result<(Fan, usize)> {
        let face = Cone::new(face.to_vec());
        if face.ray_indices.len() < 2 {
            return Err(Error::InvalidFan("star subdivision needs a face of at least two rays".into()));
        }
        let containing: Vec<&Cone> = self
            .max_cones
            .iter()
            .filter(|c| face.ray_indices.iter().all(|&r| c.contains_ray(r)))
            .collect();
        if containing.is_empty() {
            return Err(Error::InvalidFan(format!("{:?} is not a face of the fan", face.ray_indices)));
        }
        let mut new_ray = vec![0i64; self.dimension];
        for &r in &face.ray_indices {
            for (x, y) in new_ray.iter_mut().zip(&self.rays[r].vector) {
                *x += y;
            }
        }
        let g = new_ray.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        let new_ray: Vec<i64> = new_ray.iter().map(|x| x / g).collect();
        let new_index = self.rays.len();

        let mut rays: Vec<Vec<i64>> = self.rays.iter().map(|r| r.vector.clone()).collect();
        rays.push(new_ray);
        let mut cones = Vec::new();
        for c in &self.max_cones {
            if containing.contains(&c) {
                for &drop in &face.ray_indices {
                    let mut idx: Vec<usize> = c.ray_indices.iter().copied().filter(|&r| r != drop).collect();
                    idx.push(new_index);
                    cones.push(idx);
                }
            } else {
                cones.push(c.ray_indices.clone());
            }
        }
        let mut fan = Fan::new(self.dimension, rays, cones)?;
        fan.trusted_complete = self.trusted_complete;
        Ok((fan, new_index))
    }

    /// The fan under the lattice automorphism `v ↦ −v`. Every weight of the
    /// associated torus action changes sign.
    pub fn negated(&self) -> Self {
        self.transformed(&(0..self.dimension)
            .map(|i| (0..self.dimension).map(|j| if i == j { -1 } else { 0 }).collect())
            .collect::<Vec<Vec<i64>>>())
        .expect("negation is unimodular")
    }

    /// Image of the fan under the integer matrix `g` (rows), which must be
    /// unimodular.
    pub fn transformed(&self, g: &[Vec<i64>]) -> Result<Self> {
        let n = self.dimension;
        let rows: Vec<RationalVector> = g.iter().map(|r| RationalVector::from_ints(r)).collect();
        if rows.len() != n || rows.iter().any(|r| r.dim() != n) || linalg::determinant(&rows).abs() != int(1) {
            return Err(Error::InvalidFan("transformation must be a unimodular square matrix".into()));
        }
        let rays = self
            .rays
            .iter()
            .map(|r| {
                g.iter()
                    .map(|row| row.iter().zip(&r.vector).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        let cones = self.max_cones.iter().map(|c| c.ray_indices.clone()).collect();
        let mut fan = Fan::new(n, rays, cones)?;
        fan.trusted_complete = self.trusted_complete;
        Ok(fan)
    }

    fn cone_rows(&self, cone: &Cone) -> Vec<RationalVector> {
        cone.ray_indices.iter().map(|&i| self.ray_vector(i)).collect()
    }

    pub fn is_max_cone(&self, cone: &Cone) -> bool {
        self.max_cones.contains(cone)
    }
}

/// Smoothness and completeness report.
///
/// Smooth: every maximal cone has exactly `n` rays with determinant ±1.
/// Complete (dimension ≤ 3): every `(n−1)`-face is shared by exactly two
/// maximal cones lying on opposite sides of it, and generic probe directions
/// each land in the interior of exactly one cone. Higher dimensions rely on
/// [`Fan::trusted_complete`].
pub fn validate_fan(fan: &Fan) -> FanDiagnostics {
    let n = fan.dimension;
    let mut messages = Vec::new();
    let mut smooth = true;
    let mut full_dimensional = true;

    if fan.max_cones.is_empty() {
        messages.push("fan has no maximal cones".into());
        return FanDiagnostics {
            smooth: false,
            complete: false,
            messages,
        };
    }

    for cone in &fan.max_cones {
        if cone.ray_indices.len() != n {
            messages.push(format!(
                "cone {:?} has {} rays, not {n}: not maximal",
                cone.ray_indices,
                cone.ray_indices.len()
            ));
            smooth = false;
            full_dimensional = false;
            continue;
        }
        let det = linalg::determinant(&fan.cone_rows(cone));
        if det.is_zero() {
            messages.push(format!("cone {:?} has linearly dependent rays", cone.ray_indices));
            smooth = false;
            full_dimensional = false;
        } else if det.abs() != int(1) {
            messages.push(format!(
                "cone {:?} has determinant {det}: not smooth",
                cone.ray_indices
            ));
            smooth = false;
        }
    }

    let complete = if fan.trusted_complete {
        messages.push("completeness asserted by input".into());
        true
    } else if !full_dimensional {
        false
    } else if n > MAX_VERIFIED_COMPLETENESS_DIM {
        messages.push(format!(
            "completeness is only verified up to dimension {MAX_VERIFIED_COMPLETENESS_DIM}"
        ));
        false
    } else {
        check_complete(fan, &mut messages)
    };

    FanDiagnostics {
        smooth,
        complete,
        messages,
    }
}

fn check_complete(fan: &Fan, messages: &mut Vec<String>) -> bool {
    let n = fan.dimension;
    if n == 0 {
        return fan.max_cones.len() == 1;
    }

    // Facet pairing.
    let mut facets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for cone in &fan.max_cones {
        for &opposite in &cone.ray_indices {
            let facet: Vec<usize> = cone.ray_indices.iter().copied().filter(|&r| r != opposite).collect();
            facets.entry(facet).or_default().push(opposite);
        }
    }
    let mut ok = true;
    for (facet, opposites) in &facets {
        if opposites.len() != 2 {
            messages.push(format!(
                "face {facet:?} lies in {} maximal cones instead of 2",
                opposites.len()
            ));
            ok = false;
            continue;
        }
        let rows: Vec<Vec<Rational>> = facet.iter().map(|&r| fan.ray_vector(r).into_coords()).collect();
        let normal = RationalVector::new(linalg::nullspace(&rows, n).swap_remove(0));
        let s0 = normal.dot(&fan.ray_vector(opposites[0]));
        let s1 = normal.dot(&fan.ray_vector(opposites[1]));
        if s0.signum() * s1.signum() != int(-1) {
            messages.push(format!("cones across face {facet:?} overlap"));
            ok = false;
        }
    }
    if !ok {
        return false;
    }

    // Degree probe: generic directions must be covered exactly once.
    let base: [i64; 3] = [1_000_003, 999_983, 1_000_033];
    let mut usable = 0;
    for signs in 0..(1u32 << n) {
        let probe: Vec<Rational> = (0..n)
            .map(|k| {
                let s = if signs >> k & 1 == 1 { -1 } else { 1 };
                int(s * (base[k] + 7 * k as i64 * i64::from(signs)))
            })
            .collect();
        let mut interior_hits = 0;
        let mut boundary = false;
        for cone in &fan.max_cones {
            let rows = fan.cone_rows(cone);
            let transpose: Vec<RationalVector> = (0..n)
                .map(|k| RationalVector::new(rows.iter().map(|r| r.coords()[k].clone()).collect()))
                .collect();
            let coeffs = linalg::solve(&transpose, &probe).expect("full-dimensional cone");
            if coeffs.coords().iter().all(Signed::is_positive) {
                interior_hits += 1;
            } else if coeffs.coords().iter().all(|c| !c.is_negative()) {
                boundary = true;
            }
        }
        if boundary {
            continue;
        }
        usable += 1;
        if interior_hits != 1 {
            messages.push(format!(
                "probe direction {:?} is covered {interior_hits} times",
                probe.iter().map(ToString::to_string).collect::<Vec<_>>()
            ));
            return false;
        }
    }
    if usable == 0 {
        messages.push("no usable completeness probe".into());
        return false;
    }
    true
}

/// Torus-fixed points, one per maximal cone, in the fan's cone order.
pub fn fixed_points(fan: &Fan) -> Result<Vec<Cone>> {
    let diag = validate_fan(fan);
    if !diag.complete {
        return Err(Error::IncompleteFan(diag.messages.join("; ")));
    }
    Ok(fan.max_cones.clone())
}

/// Cotangent weights at the fixed point of `cone`: the dual basis of its
/// rays, in the cone's ray order.
pub fn cotangent_weights(fan: &Fan, cone: &Cone) -> Result<Vec<RationalVector>> {
    let rows = fan.cone_rows(cone);
    if rows.len() != fan.dimension {
        return Err(Error::NotUnimodular(cone.ray_indices.clone()));
    }
    if linalg::determinant(&rows).abs() != int(1) {
        return Err(Error::NotUnimodular(cone.ray_indices.clone()));
    }
    linalg::dual_basis(&rows).ok_or_else(|| Error::NotUnimodular(cone.ray_indices.clone()))
}
