//! Hyperbolic surfaces glued from right-angled hexagons.
//!
//! No spectra are computed here: the claims verified are trigonometric
//! identities, combinatorial invariants of cell complexes (Euler
//! characteristics, orientability, boundary counts), and length
//! inequalities, so lengths are binary64 against a 1e-9 tolerance while the
//! topology is exact.

mod chain;
mod complex;
mod hexagon;
mod pants;

pub use chain::{chain_surface, ChainError, ChainReflection, ChainSurface};
pub use complex::{
    classify, fixed_point_data, quotient_topology, Anchor, Automorphism, AutomorphismClass,
    CellMap, ComplexError, FixedPointData, QuotientTopology, SurfaceComplex,
};
pub use hexagon::{solve_hexagon, Hexagon, HexagonError, HEXAGON_TOLERANCE};
pub use pants::{
    build_surface, injectivity_radius_comparison, short_geodesic_report, Cuff, CuffKind,
    InjectivityReport, PantsError, PantsSurface, ShortGeodesicReport, SurfaceAutomorphism,
};
