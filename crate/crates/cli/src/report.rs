//! Serializable reports. Every rational and big integer is written as a
//! string so nothing passes through floating point.

use std::cmp::Ordering;

use eqnv_core::{Answer, Certificate, Flags, HalfSpace, Polytope, Rational, RationalVector, Verdict};
use serde::{Deserialize, Serialize};

use crate::problem::Mode;

pub const TOOL: &str = "eqnv";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfSpaceReport {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointReport {
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeReport {
    pub dimension: usize,
    pub affine_dimension: usize,
    pub vertices: Vec<Vec<String>>,
    pub halfspaces: Vec<HalfSpaceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<Vec<PointReport>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateReport {
    InvariantSection {
        multiplicities: Vec<String>,
        weights: Vec<Vec<String>>,
        witness_degree: String,
    },
    SeparatingFunctional {
        phi: Vec<String>,
        min_vertex_value: String,
    },
}

/// `null` marks a flag that could not be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagsReport {
    pub sub_lc: Option<bool>,
    pub nef: Option<bool>,
    pub ample: Option<bool>,
    pub semiample: Option<bool>,
    pub basepoint_free: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    pub mode: Mode,
    pub answer: String,
    pub certificate: CertificateReport,
    pub flags: FlagsReport,
    pub multiple: String,
    pub twist: Vec<String>,
    pub moment_polytope: PolytopeReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section_polytope: Option<PolytopeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant_dims: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeCommandReport {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    pub which: String,
    pub polytope: PolytopeReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCommandReport {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    pub answer: String,
    pub certificate: CertificateReport,
    pub multiple: String,
    pub moment_vertices: Vec<Vec<String>>,
    pub transcript: Vec<String>,
    pub passed: bool,
}

pub fn strings(v: &RationalVector) -> Vec<String> {
    v.coords().iter().map(ToString::to_string).collect()
}

pub fn answer_str(a: Answer) -> &'static str {
    match a {
        Answer::Yes => "yes",
        Answer::No => "no",
    }
}

fn halfspace(h: &HalfSpace) -> HalfSpaceReport {
    HalfSpaceReport {
        normal: strings(h.normal()),
        offset: h.offset().to_string(),
    }
}

pub fn polytope(p: &Polytope, plot: bool) -> PolytopeReport {
    PolytopeReport {
        dimension: p.dim(),
        affine_dimension: p.affine_dimension(),
        vertices: p.vertices().iter().map(strings).collect(),
        halfspaces: p.halfspaces().iter().map(halfspace).collect(),
        plot: plot.then(|| plot_points(p)),
    }
}

/// Projection to the first two coordinates (padded with zeros), reduced to
/// the vertices of the projected hull in counter-clockwise order.
fn plot_points(p: &Polytope) -> Vec<PointReport> {
    let zero = Rational::from_integer(0.into());
    let projected: Vec<RationalVector> = p
        .vertices()
        .iter()
        .map(|v| {
            let c = v.coords();
            RationalVector::new(vec![
                c.first().cloned().unwrap_or_else(|| zero.clone()),
                c.get(1).cloned().unwrap_or_else(|| zero.clone()),
            ])
        })
        .collect();
    let hull = Polytope::from_points(&projected).expect("projection of a nonempty polytope");
    let mut pts: Vec<RationalVector> = hull.vertices().to_vec();
    let n = Rational::from_integer((pts.len() as i64).into());
    let center = RationalVector::sum(2, &pts).scaled(&n.recip());
    pts.sort_by(|a, b| angular_cmp(&(a - &center), &(b - &center)));
    pts.iter()
        .map(|q| PointReport {
            x: q.coords()[0].to_string(),
            y: q.coords()[1].to_string(),
        })
        .collect()
}

/// Exact comparison of polar angles in `[0, 2π)`.
fn angular_cmp(a: &RationalVector, b: &RationalVector) -> Ordering {
    let half = |v: &RationalVector| {
        let (x, y) = (&v.coords()[0], &v.coords()[1]);
        let zero = Rational::from_integer(0.into());
        u8::from(*y < zero || (*y == zero && *x < zero))
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a.coords()[0] * &b.coords()[1] - &a.coords()[1] * &b.coords()[0];
        cross.cmp(&Rational::from_integer(0.into())).reverse()
    })
}

pub fn certificate(c: &Certificate, p: &Polytope) -> CertificateReport {
    match c {
        Certificate::InvariantSection {
            multiplicities,
            weights,
            witness_degree,
        } => CertificateReport::InvariantSection {
            multiplicities: multiplicities.iter().map(ToString::to_string).collect(),
            weights: weights.iter().map(strings).collect(),
            witness_degree: witness_degree.to_string(),
        },
        Certificate::SeparatingFunctional { phi } => {
            let min = p.vertices().iter().map(|v| v.dot(phi)).min().expect("nonempty polytope");
            CertificateReport::SeparatingFunctional {
                phi: strings(phi),
                min_vertex_value: min.to_string(),
            }
        }
    }
}

pub fn flags(f: &Flags) -> FlagsReport {
    FlagsReport {
        sub_lc: f.sub_lc,
        nef: f.nef,
        ample: f.ample,
        semiample: f.semiample,
        basepoint_free: f.basepoint_free,
    }
}

pub fn verdict(mode: Mode, v: &Verdict, plot: bool) -> VerdictReport {
    let ctx = v.context();
    VerdictReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        schema: crate::problem::SCHEMA_VERSION,
        mode,
        answer: answer_str(v.answer()).into(),
        certificate: certificate(v.certificate(), v.moment_polytope()),
        flags: flags(&ctx.flags),
        multiple: ctx.multiple.to_string(),
        twist: strings(&ctx.twist),
        moment_polytope: polytope(v.moment_polytope(), plot),
        section_polytope: None,
        invariant_dims: None,
    }
}

fn flag_text(f: Option<bool>) -> &'static str {
    match f {
        Some(true) => "yes",
        Some(false) => "no",
        None => "unverified",
    }
}

/// Human-readable rendering; not a stable format.
pub fn verdict_text(r: &VerdictReport) -> String {
    let mut out = Vec::new();
    out.push(format!("answer: {}", r.answer));
    match &r.certificate {
        CertificateReport::InvariantSection {
            multiplicities,
            weights,
            witness_degree,
        } => {
            let terms: Vec<String> = multiplicities
                .iter()
                .zip(weights)
                .map(|(k, w)| format!("{k}*({})", w.join(", ")))
                .collect();
            out.push(format!("certificate: {} = 0", terms.join(" + ")));
            out.push(format!("invariant section in degree {witness_degree}"));
        }
        CertificateReport::SeparatingFunctional { phi, min_vertex_value } => {
            out.push(format!(
                "certificate: phi = ({}) has minimum {min_vertex_value} > 0 on the moment polytope",
                phi.join(", ")
            ));
        }
    }
    let f = &r.flags;
    out.push(format!(
        "flags: sub_lc {}, nef {}, ample {}, semiample {}, basepoint_free {}",
        flag_text(f.sub_lc),
        flag_text(f.nef),
        flag_text(f.ample),
        flag_text(f.semiample),
        flag_text(f.basepoint_free)
    ));
    let verts: Vec<String> = r.moment_polytope.vertices.iter().map(|v| format!("({})", v.join(", "))).collect();
    out.push(format!("moment polytope: conv{{{}}}", verts.join(", ")));
    if let Some(s) = &r.section_polytope {
        let verts: Vec<String> = s.vertices.iter().map(|v| format!("({})", v.join(", "))).collect();
        out.push(format!("section polytope: conv{{{}}}", verts.join(", ")));
    }
    if let Some(d) = &r.invariant_dims {
        let dims: Vec<String> = d.iter().map(ToString::to_string).collect();
        out.push(format!("invariant dimensions by degree: {}", dims.join(" ")));
    }
    out.join("\n") + "\n"
}
