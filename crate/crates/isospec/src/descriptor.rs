//! JSON descriptors and text formats for spaces, segments, and cutoffs.
//!
//! These parsers sit on the trust boundary: descriptor files and cutoff
//! strings come from the command line, so every type invariant is
//! re-validated here and violations are reported as diagnostics, never
//! panics.

use crate::eigenvalue::Eigenvalue;
use crate::flat::{AffineInvolution, FlatError, FlatQuotient, Lattice};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::rational::{format_rational, parse_rational, ParseRationalError, Rational};
use crate::segment::{SegmentError, SpectrumSegment};
use crate::sphere::{DiagonalInvolution, RoundSphere, SphereError, SphericalQuotient};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("descriptor is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("descriptor is neither a flat space (rank/gram) nor a sphere (dim/radius_squared)")]
    UnknownKind,
    #[error("bad rational literal: {0}")]
    Rational(#[from] ParseRationalError),
    #[error("gram matrix must be rank x rank")]
    GramShape,
    #[error("involution matrix must be rank x rank and the translation rank-long")]
    InvolutionShape,
    #[error("sign entries must be +1 or -1")]
    BadSign,
    #[error(transparent)]
    Flat(#[from] FlatError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error("segment must declare \"complete\": true")]
    NotComplete,
    #[error("cutoff literal must be RAT or RATxPI2, e.g. \"60\" or \"50xPI2\", got {0:?}")]
    BadCutoff(String),
    #[error("cutoff must be nonnegative")]
    NegativeCutoff,
}

#[derive(Debug, Serialize, Deserialize)]
struct InvolutionRaw {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    b: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FlatRaw {
    rank: usize,
    gram: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    involution: Option<InvolutionRaw>,
    label: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct SphereRaw {
    dim: usize,
    radius_squared: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    signs: Option<Vec<i64>>,
    label: String,
}

/// A space the CLI can load: flat torus/quotient or sphere/quotient.
#[derive(Debug, Clone)]
pub enum SpaceDescriptor {
    Flat(FlatQuotient),
    Sphere(SphericalQuotient),
}

impl SpaceDescriptor {
    pub fn label(&self) -> &str {
        match self {
            SpaceDescriptor::Flat(q) => q.label(),
            SpaceDescriptor::Sphere(q) => q.label(),
        }
    }
}

/// Parses a space descriptor, dispatching on the fields present.
pub fn parse_space(text: &str) -> Result<SpaceDescriptor, DescriptorError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let object = value.as_object().ok_or(DescriptorError::UnknownKind)?;
    if object.contains_key("rank") || object.contains_key("gram") {
        Ok(SpaceDescriptor::Flat(parse_flat_value(value)?))
    } else if object.contains_key("dim") || object.contains_key("radius_squared") {
        Ok(SpaceDescriptor::Sphere(parse_sphere_value(value)?))
    } else {
        Err(DescriptorError::UnknownKind)
    }
}

pub fn parse_flat(text: &str) -> Result<FlatQuotient, DescriptorError> {
    parse_flat_value(serde_json::from_str(text)?)
}

fn parse_flat_value(value: serde_json::Value) -> Result<FlatQuotient, DescriptorError> {
    let raw: FlatRaw = serde_json::from_value(value)?;
    if raw.gram.len() != raw.rank || raw.gram.iter().any(|row| row.len() != raw.rank) {
        return Err(DescriptorError::GramShape);
    }
    let mut gram = RatMatrix::zero(raw.rank, raw.rank);
    for (i, row) in raw.gram.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            gram[(i, j)] = parse_rational(entry)?;
        }
    }
    let lattice = Lattice::new(raw.rank, gram)?;
    match raw.involution {
        None => Ok(FlatQuotient::torus(lattice, raw.label)),
        Some(involution) => {
            if involution.a.len() != raw.rank
                || involution.a.iter().any(|row| row.len() != raw.rank)
                || involution.b.len() != raw.rank
            {
                return Err(DescriptorError::InvolutionShape);
            }
            let linear = IntMatrix::from_rows_i64(&involution.a);
            let translation = involution
                .b
                .iter()
                .map(|entry| parse_rational(entry))
                .collect::<Result<Vec<_>, _>>()?;
            let tau = AffineInvolution::new(linear, translation, &lattice)?;
            Ok(FlatQuotient::quotient(lattice, tau, raw.label))
        }
    }
}

pub fn parse_sphere(text: &str) -> Result<SphericalQuotient, DescriptorError> {
    parse_sphere_value(serde_json::from_str(text)?)
}

fn parse_sphere_value(value: serde_json::Value) -> Result<SphericalQuotient, DescriptorError> {
    let raw: SphereRaw = serde_json::from_value(value)?;
    let sphere = RoundSphere::new(raw.dim, parse_rational(&raw.radius_squared)?)?;
    match raw.signs {
        None => Ok(SphericalQuotient::sphere_only(sphere, raw.label)),
        Some(signs) => {
            let signs = signs
                .into_iter()
                .map(|s| match s {
                    1 => Ok(1i8),
                    -1 => Ok(-1i8),
                    _ => Err(DescriptorError::BadSign),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let involution = DiagonalInvolution::new(signs)?;
            Ok(SphericalQuotient::quotient(sphere, involution, raw.label)?)
        }
    }
}

pub fn flat_to_json(quotient: &FlatQuotient) -> String {
    let rank = quotient.lattice().rank();
    let gram = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| format_rational(&quotient.lattice().gram()[(i, j)]))
                .collect()
        })
        .collect();
    let involution = quotient.involution().map(|tau| InvolutionRaw {
        a: (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        use num_traits::ToPrimitive;
                        tau.linear()[(i, j)].to_i64().expect("small integer entry")
                    })
                    .collect()
            })
            .collect(),
        b: tau.translation().iter().map(format_rational).collect(),
    });
    let raw = FlatRaw {
        rank,
        gram,
        involution,
        label: quotient.label().to_owned(),
    };
    serde_json::to_string_pretty(&raw).expect("serializable")
}

pub fn sphere_to_json(quotient: &SphericalQuotient) -> String {
    let raw = SphereRaw {
        dim: quotient.sphere().dim(),
        radius_squared: format_rational(quotient.sphere().radius_squared()),
        signs: quotient
            .involution()
            .map(|tau| tau.signs().iter().map(|s| *s as i64).collect()),
        label: quotient.label().to_owned(),
    };
    serde_json::to_string_pretty(&raw).expect("serializable")
}

#[derive(Debug, Serialize, Deserialize)]
struct EigenvalueRaw {
    plain: String,
    pi2: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryRaw {
    plain: String,
    pi2: String,
    mult: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct SegmentRaw {
    entries: Vec<EntryRaw>,
    cutoff: EigenvalueRaw,
    degree: usize,
    space: String,
    complete: bool,
}

fn eigenvalue_raw(value: &Eigenvalue) -> EigenvalueRaw {
    EigenvalueRaw {
        plain: format_rational(value.plain_part()),
        pi2: format_rational(value.pi2_part()),
    }
}

fn parse_eigenvalue(raw: &EigenvalueRaw) -> Result<Eigenvalue, DescriptorError> {
    let plain = parse_rational(&raw.plain)?;
    let pi2 = parse_rational(&raw.pi2)?;
    Eigenvalue::new(plain, pi2).map_err(|_| DescriptorError::NegativeCutoff)
}

/// Serializes a segment: one record per entry plus the completeness marker.
pub fn segment_to_json(segment: &SpectrumSegment) -> String {
    let raw = SegmentRaw {
        entries: segment
            .entries()
            .iter()
            .map(|(value, mult)| EntryRaw {
                plain: format_rational(value.plain_part()),
                pi2: format_rational(value.pi2_part()),
                mult: *mult,
            })
            .collect(),
        cutoff: eigenvalue_raw(segment.cutoff()),
        degree: segment.degree(),
        space: segment.space_label().to_owned(),
        complete: true,
    };
    serde_json::to_string_pretty(&raw).expect("serializable")
}

/// Parses and fully re-validates a segment (ascending, positive, complete).
pub fn segment_from_json(text: &str) -> Result<SpectrumSegment, DescriptorError> {
    let raw: SegmentRaw = serde_json::from_str(text)?;
    if !raw.complete {
        return Err(DescriptorError::NotComplete);
    }
    let cutoff = parse_eigenvalue(&raw.cutoff)?;
    let entries = raw
        .entries
        .iter()
        .map(|entry| {
            let plain = parse_rational(&entry.plain)?;
            let pi2 = parse_rational(&entry.pi2)?;
            let value = Eigenvalue::new(plain, pi2).map_err(|_| DescriptorError::NegativeCutoff)?;
            Ok((value, entry.mult))
        })
        .collect::<Result<Vec<_>, DescriptorError>>()?;
    Ok(SpectrumSegment::new(entries, cutoff, raw.degree, raw.space)?)
}

/// Renders a segment as CSV lines `plain,pi2,mult`.
pub fn segment_to_csv(segment: &SpectrumSegment) -> String {
    let mut out = String::from("plain,pi2,mult\n");
    for (value, mult) in segment.entries() {
        out.push_str(&format!(
            "{},{},{}\n",
            format_rational(value.plain_part()),
            format_rational(value.pi2_part()),
            mult
        ));
    }
    out
}

/// Renders a segment as a Markdown table.
pub fn segment_to_markdown(segment: &SpectrumSegment) -> String {
    let mut out = format!(
        "### spec_{}({}) up to {}\n\n| eigenvalue | multiplicity |\n|---|---|\n",
        segment.degree(),
        segment.space_label(),
        segment.cutoff()
    );
    for (value, mult) in segment.entries() {
        out.push_str(&format!("| {value} | {mult} |\n"));
    }
    out
}

/// Parses a cutoff literal: `RAT` for a plain rational eigenvalue, or
/// `RATxPI2` for a rational multiple of `4pi^2` (e.g. `50xPI2`, `1/4xPI2`).
pub fn parse_cutoff(text: &str) -> Result<Eigenvalue, DescriptorError> {
    let trimmed = text.trim();
    let (body, is_pi2) = match trimmed
        .strip_suffix("xPI2")
        .or_else(|| trimmed.strip_suffix("xpi2"))
    {
        Some(prefix) => (prefix, true),
        None => (trimmed, false),
    };
    if body.is_empty() {
        return Err(DescriptorError::BadCutoff(text.to_owned()));
    }
    let value =
        parse_rational(body).map_err(|_| DescriptorError::BadCutoff(text.to_owned()))?;
    if value < Rational::zero() {
        return Err(DescriptorError::NegativeCutoff);
    }
    let eigenvalue = if is_pi2 {
        Eigenvalue::from_pi2_multiple(value)
    } else {
        Eigenvalue::from_plain(value)
    };
    eigenvalue.map_err(|_| DescriptorError::NegativeCutoff)
}
