//! Complete spectrum segments and the isospectrality comparator.
//!
//! A segment is the full sorted multiset of (eigenvalue, multiplicity) pairs
//! of one operator below an exact cutoff. Completeness is a contract: every
//! eigenvalue of the modeled operator that is `<= cutoff` appears with its
//! exact multiplicity, so two segments either agree as truncated multisets or
//! expose the first eigenvalue where the multiplicities differ.

use crate::eigenvalue::Eigenvalue;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SegmentError {
    #[error("entries must be strictly ascending (violated at {0})")]
    NotAscending(Eigenvalue),
    #[error("entry {0} exceeds the segment cutoff {1}")]
    AboveCutoff(Eigenvalue, Eigenvalue),
    #[error("multiplicity at {0} must be positive")]
    ZeroMultiplicity(Eigenvalue),
    #[error("multiplicity at eigenvalue {0} is odd; halving requires even multiplicities")]
    OddMultiplicity(Eigenvalue),
    #[error("segments have different degrees ({0} vs {1})")]
    DegreeMismatch(usize, usize),
}

/// Complete sorted eigenvalue multiset of one operator below a cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumSegment {
    entries: Vec<(Eigenvalue, u64)>,
    cutoff: Eigenvalue,
    degree: usize,
    space_label: String,
}

impl SpectrumSegment {
    /// Builds a segment from ascending entries, validating the invariants.
    pub fn new(
        entries: Vec<(Eigenvalue, u64)>,
        cutoff: Eigenvalue,
        degree: usize,
        space_label: impl Into<String>,
    ) -> Result<Self, SegmentError> {
        for window in entries.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(SegmentError::NotAscending(window[1].0.clone()));
            }
        }
        for (value, mult) in &entries {
            if *mult == 0 {
                return Err(SegmentError::ZeroMultiplicity(value.clone()));
            }
            if *value > cutoff {
                return Err(SegmentError::AboveCutoff(value.clone(), cutoff.clone()));
            }
        }
        Ok(SpectrumSegment {
            entries,
            cutoff,
            degree,
            space_label: space_label.into(),
        })
    }

    /// Builds a segment from a multiplicity map, dropping zero entries.
    pub fn from_map(
        map: BTreeMap<Eigenvalue, u64>,
        cutoff: Eigenvalue,
        degree: usize,
        space_label: impl Into<String>,
    ) -> Result<Self, SegmentError> {
        let entries = map.into_iter().filter(|(_, m)| *m > 0).collect();
        Self::new(entries, cutoff, degree, space_label)
    }

    pub fn entries(&self) -> &[(Eigenvalue, u64)] {
        &self.entries
    }

    pub fn cutoff(&self) -> &Eigenvalue {
        &self.cutoff
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn space_label(&self) -> &str {
        &self.space_label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.space_label = label.into();
        self
    }

    /// Multiplicity of one eigenvalue; absent entries have multiplicity 0.
    pub fn multiplicity(&self, value: &Eigenvalue) -> u64 {
        self.entries
            .binary_search_by(|(v, _)| v.cmp(value))
            .map(|idx| self.entries[idx].1)
            .unwrap_or(0)
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Restriction of the segment to eigenvalues `<= new_cutoff`.
    pub fn truncate(&self, new_cutoff: &Eigenvalue) -> SpectrumSegment {
        let entries = self
            .entries
            .iter()
            .filter(|(v, _)| v <= new_cutoff)
            .cloned()
            .collect();
        SpectrumSegment {
            entries,
            cutoff: new_cutoff.clone(),
            degree: self.degree,
            space_label: self.space_label.clone(),
        }
    }
}

impl fmt::Display for SpectrumSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "spec_{}({}) up to {}:",
            self.degree, self.space_label, self.cutoff
        )?;
        for (value, mult) in &self.entries {
            writeln!(f, "  {value}  x{mult}")?;
        }
        Ok(())
    }
}

/// Result of comparing two segments: a certificate of equality up to the
/// smaller cutoff, or the first eigenvalue with differing multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComparisonOutcome {
    Equal {
        up_to: Eigenvalue,
    },
    FirstDifference {
        at: Eigenvalue,
        mult_left: u64,
        mult_right: u64,
    },
}

impl ComparisonOutcome {
    pub fn is_equal(&self) -> bool {
        matches!(self, ComparisonOutcome::Equal { .. })
    }

    /// The same outcome with the two sides exchanged.
    pub fn swapped(self) -> ComparisonOutcome {
        match self {
            ComparisonOutcome::Equal { up_to } => ComparisonOutcome::Equal { up_to },
            ComparisonOutcome::FirstDifference {
                at,
                mult_left,
                mult_right,
            } => ComparisonOutcome::FirstDifference {
                at,
                mult_left: mult_right,
                mult_right: mult_left,
            },
        }
    }
}

impl fmt::Display for ComparisonOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonOutcome::Equal { up_to } => write!(f, "equal up to {up_to}"),
            ComparisonOutcome::FirstDifference {
                at,
                mult_left,
                mult_right,
            } => write!(
                f,
                "first difference at {at}: multiplicities {mult_left} vs {mult_right}"
            ),
        }
    }
}

/// Halves every multiplicity; fails on the first odd one.
///
/// Even multiplicities are exactly what quotients by orientation-reversing
/// involutions of closed orientable even-dimensional manifolds guarantee in
/// the middle degree, so an odd multiplicity signals invalid input.
pub fn halve_multiplicities(segment: &SpectrumSegment) -> Result<SpectrumSegment, SegmentError> {
    let mut entries = Vec::with_capacity(segment.entries.len());
    for (value, mult) in &segment.entries {
        if mult % 2 != 0 {
            return Err(SegmentError::OddMultiplicity(value.clone()));
        }
        entries.push((value.clone(), mult / 2));
    }
    Ok(SpectrumSegment {
        entries,
        cutoff: segment.cutoff.clone(),
        degree: segment.degree,
        space_label: segment.space_label.clone(),
    })
}

/// Doubles every multiplicity (inverse of [`halve_multiplicities`]).
pub fn double_multiplicities(segment: &SpectrumSegment) -> SpectrumSegment {
    SpectrumSegment {
        entries: segment
            .entries
            .iter()
            .map(|(v, m)| (v.clone(), m * 2))
            .collect(),
        cutoff: segment.cutoff.clone(),
        degree: segment.degree,
        space_label: segment.space_label.clone(),
    }
}

/// Compares two complete segments after truncation to the smaller cutoff.
///
/// With `exclude_zero` set, eigenvalue-0 entries are ignored on both sides.
pub fn compare_segments(
    left: &SpectrumSegment,
    right: &SpectrumSegment,
    exclude_zero: bool,
) -> Result<ComparisonOutcome, SegmentError> {
    if left.degree != right.degree {
        return Err(SegmentError::DegreeMismatch(left.degree, right.degree));
    }
    let up_to = left.cutoff.clone().min(right.cutoff.clone());
    let relevant = |segment: &SpectrumSegment| -> Vec<(Eigenvalue, u64)> {
        segment
            .entries
            .iter()
            .filter(|(v, _)| *v <= up_to && !(exclude_zero && v.is_zero()))
            .cloned()
            .collect()
    };
    let left_entries = relevant(left);
    let right_entries = relevant(right);

    let mut i = 0;
    let mut j = 0;
    while i < left_entries.len() || j < right_entries.len() {
        match (left_entries.get(i), right_entries.get(j)) {
            (Some((lv, lm)), Some((rv, rm))) => match lv.cmp(rv) {
                std::cmp::Ordering::Equal => {
                    if lm != rm {
                        return Ok(ComparisonOutcome::FirstDifference {
                            at: lv.clone(),
                            mult_left: *lm,
                            mult_right: *rm,
                        });
                    }
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => {
                    return Ok(ComparisonOutcome::FirstDifference {
                        at: lv.clone(),
                        mult_left: *lm,
                        mult_right: 0,
                    });
                }
                std::cmp::Ordering::Greater => {
                    return Ok(ComparisonOutcome::FirstDifference {
                        at: rv.clone(),
                        mult_left: 0,
                        mult_right: *rm,
                    });
                }
            },
            (Some((lv, lm)), None) => {
                return Ok(ComparisonOutcome::FirstDifference {
                    at: lv.clone(),
                    mult_left: *lm,
                    mult_right: 0,
                });
            }
            (None, Some((rv, rm))) => {
                return Ok(ComparisonOutcome::FirstDifference {
                    at: rv.clone(),
                    mult_left: 0,
                    mult_right: *rm,
                });
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(ComparisonOutcome::Equal { up_to })
}
