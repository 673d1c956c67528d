//! The closed genus-2n surface with three reflection symmetries whose
//! quotients have 1, 2n+1, and 2n+1 boundary components.
//!
//! Model: double a planar disk with 2n holes in a row across its whole
//! boundary. The disk is a ladder of squares: 4n+1 columns, each split into
//! a top and a bottom square; even columns glue top to bottom, odd columns
//! leave the middle open (the holes). The double consists of a front and a
//! rear copy glued along every boundary edge.

use super::complex::{
    classify, quotient_topology, Automorphism, AutomorphismClass, CellMap, ComplexError,
    QuotientTopology, SurfaceComplex,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("the hole parameter n must be at least 1")]
    BadHoleCount,
    #[error("unknown reflection {0:?}")]
    UnknownReflection(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// The three visual reflections of the chain surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainReflection {
    /// Across the plane of the page: swaps the two copies, fixes the 2n+1
    /// boundary circles of the disk.
    Page,
    /// Across the horizontal axis through all holes: 2n+1 fixed circles.
    Horizontal,
    /// Across the vertical axis between the middle holes: 1 fixed circle.
    Vertical,
}

/// Closed orientable genus-2n surface built as a double of a holed disk.
#[derive(Debug, Clone)]
pub struct ChainSurface {
    complex: SurfaceComplex,
    n: usize,
}

const TOP_ROW: usize = 0;
const BOTTOM_ROW: usize = 1;
const FRONT: usize = 0;
const REAR: usize = 1;

// Square sides in cyclic order: 0 = left, 1 = bottom, 2 = right, 3 = top.
const LEFT: usize = 0;
const BOTTOM_SIDE: usize = 1;
const RIGHT: usize = 2;
const TOP_SIDE: usize = 3;

impl ChainSurface {
    pub fn complex(&self) -> &SurfaceComplex {
        &self.complex
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn genus(&self) -> usize {
        self.complex.genus().expect("closed orientable surface")
    }

    fn cell(&self, copy: usize, row: usize, column: usize) -> usize {
        cell_index(self.n, copy, row, column)
    }

    pub fn reflection(&self, which: ChainReflection) -> Result<Automorphism, ChainError> {
        let columns = 4 * self.n + 1;
        let mut per_cell = vec![
            CellMap {
                target: 0,
                rotation: 0,
                flip: false
            };
            self.complex.cell_count()
        ];
        for copy in [FRONT, REAR] {
            for row in [TOP_ROW, BOTTOM_ROW] {
                for column in 0..columns {
                    let source = self.cell(copy, row, column);
                    per_cell[source] = match which {
                        ChainReflection::Page => CellMap {
                            target: self.cell(1 - copy, row, column),
                            rotation: 0,
                            flip: false,
                        },
                        // Swap rows, exchanging top and bottom sides
                        // (reflection with axis through left and right):
                        // s -> 0 - s fixes 0 = left and 2 = right.
                        ChainReflection::Horizontal => CellMap {
                            target: self.cell(copy, 1 - row, column),
                            rotation: 0,
                            flip: true,
                        },
                        // Mirror columns, exchanging left and right sides:
                        // s -> 2 - s fixes 1 = bottom and 3 = top.
                        ChainReflection::Vertical => CellMap {
                            target: self.cell(copy, row, columns - 1 - column),
                            rotation: 2,
                            flip: true,
                        },
                    };
                }
            }
        }
        Ok(Automorphism::new(&self.complex, per_cell)?)
    }

    pub fn classify(&self, which: ChainReflection) -> Result<AutomorphismClass, ChainError> {
        Ok(classify(&self.complex, &self.reflection(which)?)?)
    }

    pub fn quotient_topology(
        &self,
        which: ChainReflection,
    ) -> Result<QuotientTopology, ChainError> {
        Ok(quotient_topology(&self.complex, &self.reflection(which)?)?)
    }
}

fn cell_index(n: usize, copy: usize, row: usize, column: usize) -> usize {
    let columns = 4 * n + 1;
    (copy * 2 + row) * columns + column
}

/// Builds the genus-2n chain surface.
pub fn chain_surface(n: usize) -> Result<ChainSurface, ChainError> {
    if n == 0 {
        return Err(ChainError::BadHoleCount);
    }
    let columns = 4 * n + 1;
    let mut complex = SurfaceComplex::new();
    for _copy in [FRONT, REAR] {
        for _row in [TOP_ROW, BOTTOM_ROW] {
            for _column in 0..columns {
                complex.add_cell(&[1.0; 4]);
            }
        }
    }
    let cell = |copy: usize, row: usize, column: usize| cell_index(n, copy, row, column);

    // Within each copy: horizontal neighbors and solid-column middles.
    for copy in [FRONT, REAR] {
        for row in [TOP_ROW, BOTTOM_ROW] {
            for column in 0..columns - 1 {
                complex.glue(
                    (cell(copy, row, column), RIGHT),
                    (cell(copy, row, column + 1), LEFT),
                    true,
                )?;
            }
        }
        for column in (0..columns).step_by(2) {
            complex.glue(
                (cell(copy, TOP_ROW, column), BOTTOM_SIDE),
                (cell(copy, BOTTOM_ROW, column), TOP_SIDE),
                true,
            )?;
        }
    }
    // Double across the remaining (boundary) sides of the disk.
    let unglued: Vec<(usize, usize)> = (0..complex.cell_count())
        .flat_map(|c| (0..4).map(move |s| (c, s)))
        .filter(|&(c, s)| complex.gluing_of(c, s).is_none())
        .filter(|&(c, _)| c < 2 * columns)
        .collect();
    for (front_cell, side) in unglued {
        let rear_cell = front_cell + 2 * columns;
        complex.glue((front_cell, side), (rear_cell, side), false)?;
    }
    debug_assert!(complex.is_closed());
    debug_assert!(complex.is_connected());
    debug_assert!(complex.is_orientable());
    debug_assert_eq!(complex.euler_characteristic(), 2 - 4 * n as i64);
    Ok(ChainSurface { complex, n })
}
