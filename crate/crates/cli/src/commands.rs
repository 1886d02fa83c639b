//! Subcommand implementations. Each returns the text to print on success.

use eqnv_core::{
    kappa_estimates, moment_polytope, parse_rational, run_pipeline, run_records_pipeline, section_polytope, Answer,
    Error, MomentSource, Rational, RationalVector, Verdict,
};
use num_traits::Signed;

use crate::problem::{Problem, ProblemFile};
use crate::report::{self, CertificateCommandReport, CertificateReport, PolytopeCommandReport};
use crate::{CliError, Format, Which};

pub fn load(path: &std::path::Path) -> Result<Problem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    ProblemFile::parse(&text)?.validate()
}

pub fn decide(problem: &Problem) -> Result<Verdict, CliError> {
    let v = match problem {
        Problem::Toric { pair, twist } => run_pipeline(pair, twist)?,
        Problem::Records { records, twist } => run_records_pipeline(records, twist)?,
    };
    Ok(v)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialize") + "\n"
}

pub struct CheckOutput {
    pub text: String,
    pub answer: Answer,
}

pub fn check(problem: &Problem, format: Format, degrees: Option<u64>) -> Result<CheckOutput, CliError> {
    let v = decide(problem)?;
    if !v.verify() {
        return Err(CliError::Internal("certificate failed re-verification".into()));
    }
    let mut r = report::verdict(problem.mode(), &v, false);
    if let Problem::Toric { pair, twist } = problem {
        r.section_polytope = match section_polytope(&pair.fan, &pair.anti_log_canonical()) {
            Ok(p) => Some(report::polytope(&p, false)),
            Err(Error::EmptySectionPolytope) => None,
            Err(e) => return Err(e.into()),
        };
        if let Some(m_max) = degrees {
            r.invariant_dims = Some(kappa_estimates(pair, twist, m_max)?.invariant_dims);
        }
    } else if degrees.is_some() {
        return Err(CliError::Input("--degrees needs a toric problem".into()));
    }
    let text = match format {
        Format::Json => to_json(&r),
        Format::Text => report::verdict_text(&r),
    };
    Ok(CheckOutput {
        text,
        answer: v.answer(),
    })
}

pub fn polytope(problem: &Problem, which: Which, plot: bool, format: Format) -> Result<String, CliError> {
    let p = match (which, problem) {
        (Which::Moment, Problem::Toric { pair, twist }) => moment_polytope(MomentSource::Toric(pair), twist)?,
        (Which::Moment, Problem::Records { records, twist }) => {
            moment_polytope(MomentSource::Records(records), twist)?
        }
        (Which::Section, Problem::Toric { pair, .. }) => section_polytope(&pair.fan, &pair.anti_log_canonical())?,
        (Which::Section, Problem::Records { .. }) => {
            return Err(CliError::Input("the section polytope needs a toric problem".into()))
        }
    };
    let r = PolytopeCommandReport {
        tool: report::TOOL.into(),
        version: report::VERSION.into(),
        schema: crate::problem::SCHEMA_VERSION,
        which: match which {
            Which::Moment => "moment",
            Which::Section => "section",
        }
        .into(),
        polytope: report::polytope(&p, plot),
    };
    Ok(match format {
        Format::Json => to_json(&r),
        Format::Text => {
            let mut out = format!("{} polytope, dimension {}\n", r.which, r.polytope.affine_dimension);
            for v in &r.polytope.vertices {
                out += &format!("vertex ({})\n", v.join(", "));
            }
            for h in &r.polytope.halfspaces {
                out += &format!("<u, ({})> >= {}\n", h.normal.join(", "), h.offset);
            }
            out
        }
    })
}

pub fn certificate(problem: &Problem, format: Format) -> Result<String, CliError> {
    let v = decide(problem)?;
    let cert = report::certificate(v.certificate(), v.moment_polytope());
    let vertices: Vec<Vec<String>> = v.moment_polytope().vertices().iter().map(report::strings).collect();
    let multiple = v.context().multiple.to_string();
    let (transcript, passed) = transcript(&cert, &vertices, &multiple);
    if !passed {
        return Err(CliError::Internal("certificate failed its transcript".into()));
    }
    let r = CertificateCommandReport {
        tool: report::TOOL.into(),
        version: report::VERSION.into(),
        schema: crate::problem::SCHEMA_VERSION,
        answer: report::answer_str(v.answer()).into(),
        certificate: cert,
        multiple,
        moment_vertices: vertices,
        transcript,
        passed,
    };
    Ok(match format {
        Format::Json => to_json(&r),
        Format::Text => format!("answer: {}\n{}\npassed: {}\n", r.answer, r.transcript.join("\n"), r.passed),
    })
}

fn parse_vec(v: &[String]) -> Option<RationalVector> {
    RationalVector::parse(v).ok()
}

fn show(v: &RationalVector) -> String {
    format!("({})", report::strings(v).join(", "))
}

/// Re-checks a certificate from its serialized form alone, printing every
/// identity it evaluates. `vertices` are the moment-polytope vertices and
/// `multiple` the normalizing multiple of the bundle.
pub fn transcript(cert: &CertificateReport, vertices: &[Vec<String>], multiple: &str) -> (Vec<String>, bool) {
    let mut lines = Vec::new();
    let mut ok = true;
    let Some(verts) = vertices.iter().map(|v| parse_vec(v)).collect::<Option<Vec<_>>>() else {
        return (vec!["unparseable vertex".into()], false);
    };
    match cert {
        CertificateReport::InvariantSection {
            multiplicities,
            weights,
            witness_degree,
        } => {
            let ks: Option<Vec<Rational>> = multiplicities.iter().map(|k| parse_rational(k).ok()).collect();
            let ws: Option<Vec<RationalVector>> = weights.iter().map(|w| parse_vec(w)).collect();
            let (Some(ks), Some(ws)) = (ks, ws) else {
                return (vec!["unparseable certificate".into()], false);
            };
            if ks.len() != ws.len() || ws.is_empty() {
                return (vec!["multiplicities and weights differ in length".into()], false);
            }
            let dim = ws[0].dim();
            let mut total = RationalVector::zeros(dim);
            for (k, w) in ks.iter().zip(&ws) {
                let term = w.scaled(k);
                lines.push(format!("{k} * {} = {}", show(w), show(&term)));
                ok &= k.is_integer() && !k.is_negative();
                ok &= verts.contains(w);
                total = &total + &term;
            }
            lines.push(format!("sum = {}", show(&total)));
            ok &= total.is_zero();
            let k_sum: Rational = ks.iter().sum();
            lines.push(format!("sum of multiplicities = {k_sum} >= 1"));
            ok &= k_sum >= Rational::from_integer(1.into());
            let degree = parse_rational(multiple).map(|m| m * &k_sum);
            match (degree, parse_rational(witness_degree)) {
                (Ok(d), Ok(w)) => {
                    lines.push(format!("witness degree = {multiple} * {k_sum} = {d}"));
                    ok &= d == w;
                }
                _ => ok = false,
            }
        }
        CertificateReport::SeparatingFunctional { phi, min_vertex_value } => {
            let Some(phi) = parse_vec(phi) else {
                return (vec!["unparseable functional".into()], false);
            };
            let mut min: Option<Rational> = None;
            for v in &verts {
                let value = phi.dot(v);
                lines.push(format!("phi . {} = {value} > 0", show(v)));
                ok &= value.is_positive();
                min = Some(min.map_or(value.clone(), |m| m.min(value)));
            }
            ok &= min.is_some() && min.map(|m| m.to_string()).as_deref() == Some(min_vertex_value.as_str());
            ok &= !phi.is_zero() && !verts.is_empty();
        }
    }
    lines.push(format!("verified: {ok}"));
    (lines, ok)
}
