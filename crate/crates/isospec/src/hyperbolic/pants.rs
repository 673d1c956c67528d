//! The closed genus 2t+1 surface glued from 4t pairs of pants, and its
//! involutions.
//!
//! Template (the single source of truth for the gluing): 2t columns sit in
//! a ring, each holding a top pants and a bottom pants. A pants is two
//! mirror hexagons (front and rear) glued along the three seams. Hexagon
//! sides, in cyclic order: 0 = leg-A half (alpha), 1 = inseam, 2 = leg-B
//! half (alpha), 3 = seam between leg B and waist, 4 = waist half (gamma),
//! 5 = seam between waist and leg A. Within a column the top and bottom
//! pants glue straight along both leg cuffs (4t leg circles of length
//! 2 alpha); waists bridge adjacent columns, pairing (2j, 2j+1) in the top
//! row and (2j+1, 2j+2) in the bottom row (2t waist circles of length
//! 2 gamma, staggered so the surface is connected).
//!
//! Named involutions:
//! * `tauP` swaps front and rear hexagons everywhere (fixes all seams);
//! * `tauH` reflects every pants across its leg-swapping axis;
//! * `tauV1` exchanges the rows with the column reflection c -> -c;
//! * `tauV2` applies the column reflection c -> 1-c inside each row with a
//!   leg swap;
//! * `rho` is the free half-turn: the column shift by t, composed with the
//!   row swap and leg swap when t is odd;
//! * `tau1` = tauH tauV1 tauP, `tau2` = tauP rho, `tau3` = tauH rho,
//!   `tau4` = tauH tauV2 tauP, all free and orientation reversing.

use super::complex::{
    classify, quotient_topology, Automorphism, AutomorphismClass, CellMap, ComplexError,
    QuotientTopology, SurfaceComplex,
};
use super::hexagon::{solve_hexagon, Hexagon, HexagonError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PantsError {
    #[error("the pants count parameter t must be at least 1")]
    BadPantsCount,
    #[error(transparent)]
    Hexagon(#[from] HexagonError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("unknown automorphism name {0:?}")]
    UnknownAutomorphism(String),
    #[error("parameter constraint violated: {0}")]
    ParameterConstraintViolated(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuffKind {
    Waist,
    Leg,
}

/// One gluing circle of cuffs: two pants meet along it.
#[derive(Debug, Clone)]
pub struct Cuff {
    pub kind: CuffKind,
    pub length: f64,
    /// The hexagon sides forming the circle.
    pub sides: Vec<(usize, usize)>,
}

/// A named automorphism of the pants surface.
#[derive(Debug, Clone)]
pub struct SurfaceAutomorphism {
    pub name: String,
    map: Automorphism,
}

impl SurfaceAutomorphism {
    pub fn map(&self) -> &Automorphism {
        &self.map
    }
}

/// The glued surface with its hexagon geometry and cuff inventory.
#[derive(Debug, Clone)]
pub struct PantsSurface {
    complex: SurfaceComplex,
    t: usize,
    alpha: f64,
    gamma: f64,
    hexagon: Hexagon,
    cuffs: Vec<Cuff>,
}

const TOP: usize = 0;
const BOTTOM: usize = 1;
const FRONT: usize = 0;
const REAR: usize = 1;

impl PantsSurface {
    fn cell(&self, column: usize, row: usize, half: usize) -> usize {
        cell_index(self.t, column, row, half)
    }

    pub fn complex(&self) -> &SurfaceComplex {
        &self.complex
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn hexagon(&self) -> &Hexagon {
        &self.hexagon
    }

    pub fn cuffs(&self) -> &[Cuff] {
        &self.cuffs
    }

    pub fn genus(&self) -> usize {
        self.complex.genus().expect("closed orientable surface")
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.complex.euler_characteristic()
    }

    /// The named involutions and the half-turn `rho`.
    pub fn automorphism(&self, name: &str) -> Result<SurfaceAutomorphism, PantsError> {
        let t = self.t;
        let columns = 2 * t;
        let map = match name {
            "tauP" => self.build_map(|c, row, half| (c, row, 1 - half, 0, false)),
            "tauH" => self.build_map(|c, row, half| (c, row, half, 2, true)),
            "tauV1" => self.build_map(|c, row, half| {
                ((columns - c) % columns, 1 - row, half, 0, false)
            }),
            "tauV2" => self.build_map(|c, row, half| {
                ((columns + 1 - c) % columns, row, half, 2, true)
            }),
            "rho" => {
                if t.is_multiple_of(2) {
                    self.build_map(|c, row, half| ((c + t) % columns, row, half, 0, false))
                } else {
                    self.build_map(|c, row, half| ((c + t) % columns, 1 - row, half, 2, true))
                }
            }
            "tau1" => {
                return Ok(self.compose_named("tau1", &["tauP", "tauV1", "tauH"]));
            }
            "tau2" => {
                return Ok(self.compose_named("tau2", &["rho", "tauP"]));
            }
            "tau3" => {
                return Ok(self.compose_named("tau3", &["rho", "tauH"]));
            }
            "tau4" => {
                return Ok(self.compose_named("tau4", &["tauP", "tauV2", "tauH"]));
            }
            other => return Err(PantsError::UnknownAutomorphism(other.to_owned())),
        }?;
        Ok(SurfaceAutomorphism {
            name: name.to_owned(),
            map,
        })
    }

    /// Composes named maps applied left to right.
    fn compose_named(&self, name: &str, sequence: &[&str]) -> SurfaceAutomorphism {
        let mut result = Automorphism::identity(&self.complex);
        for step in sequence {
            let next = self
                .automorphism(step)
                .expect("primitive automorphism names are valid")
                .map;
            result = next.compose(&self.complex, &result);
        }
        SurfaceAutomorphism {
            name: name.to_owned(),
            map: result,
        }
    }

    fn build_map<F>(&self, rule: F) -> Result<Automorphism, PantsError>
    where
        F: Fn(usize, usize, usize) -> (usize, usize, usize, usize, bool),
    {
        let mut per_cell = vec![
            CellMap {
                target: 0,
                rotation: 0,
                flip: false
            };
            self.complex.cell_count()
        ];
        for c in 0..2 * self.t {
            for row in [TOP, BOTTOM] {
                for half in [FRONT, REAR] {
                    let (tc, trow, thalf, rotation, flip) = rule(c, row, half);
                    per_cell[self.cell(c, row, half)] = CellMap {
                        target: self.cell(tc, trow, thalf),
                        rotation,
                        flip,
                    };
                }
            }
        }
        Ok(Automorphism::new(&self.complex, per_cell)?)
    }

    pub fn classify(&self, automorphism: &SurfaceAutomorphism) -> Result<AutomorphismClass, PantsError> {
        Ok(classify(&self.complex, automorphism.map())?)
    }

    pub fn quotient_topology(
        &self,
        automorphism: &SurfaceAutomorphism,
    ) -> Result<QuotientTopology, PantsError> {
        Ok(quotient_topology(&self.complex, automorphism.map())?)
    }

    /// Waist circles mapped to themselves by the automorphism.
    pub fn invariant_waists(&self, automorphism: &SurfaceAutomorphism) -> Vec<usize> {
        self.cuffs
            .iter()
            .enumerate()
            .filter(|(_, cuff)| cuff.kind == CuffKind::Waist)
            .filter(|(_, cuff)| {
                let sides: std::collections::BTreeSet<(usize, usize)> =
                    cuff.sides.iter().copied().collect();
                cuff.sides.iter().all(|&(cell, side)| {
                    let (ic, is, _) = automorphism.map().apply_flag(&self.complex, cell, side, 0);
                    sides.contains(&(ic, is))
                })
            })
            .map(|(index, _)| index)
            .collect()
    }

    /// DOT rendering of the pants gluing graph.
    pub fn to_dot(&self) -> String {
        self.complex.to_dot(|cell| {
            let half = cell % 2;
            let row = (cell / 2) % 2;
            let column = cell / 4;
            format!(
                "{}{}{}",
                if row == TOP { "T" } else { "B" },
                column,
                if half == FRONT { "f" } else { "r" }
            )
        })
    }
}

fn cell_index(t: usize, column: usize, row: usize, half: usize) -> usize {
    debug_assert!(column < 2 * t && row < 2 && half < 2);
    (column * 2 + row) * 2 + half
}

/// Builds the closed genus 2t+1 surface from 4t pants with leg cuffs of
/// length `2 alpha` and waist cuffs of length `2 gamma`.
pub fn build_surface(t: usize, alpha: f64, gamma: f64) -> Result<PantsSurface, PantsError> {
    if t == 0 {
        return Err(PantsError::BadPantsCount);
    }
    let hexagon = solve_hexagon(alpha, gamma)?;
    let columns = 2 * t;
    let mut complex = SurfaceComplex::new();
    for _ in 0..columns {
        for _row in [TOP, BOTTOM] {
            for _half in [FRONT, REAR] {
                complex.add_cell(&hexagon.sides);
            }
        }
    }
    let cell = |c: usize, row: usize, half: usize| cell_index(t, c % columns, row, half);

    // Seams: front and rear hexagons of each pants, mirror gluing.
    for c in 0..columns {
        for row in [TOP, BOTTOM] {
            for seam in [1, 3, 5] {
                complex.glue(
                    (cell(c, row, FRONT), seam),
                    (cell(c, row, REAR), seam),
                    false,
                )?;
            }
        }
    }
    // Legs: top and bottom pants of each column, straight gluing of both
    // cuffs, half to half.
    for c in 0..columns {
        for half in [FRONT, REAR] {
            for leg_side in [0, 2] {
                complex.glue(
                    (cell(c, TOP, half), leg_side),
                    (cell(c, BOTTOM, half), leg_side),
                    false,
                )?;
            }
        }
    }
    // Waists: adjacent columns bridge, top row on even pairs, bottom row
    // staggered by one.
    for j in 0..t {
        for half in [FRONT, REAR] {
            complex.glue(
                (cell(2 * j, TOP, half), 4),
                (cell(2 * j + 1, TOP, half), 4),
                true,
            )?;
            complex.glue(
                (cell(2 * j + 1, BOTTOM, half), 4),
                (cell(2 * j + 2, BOTTOM, half), 4),
                true,
            )?;
        }
    }
    debug_assert!(complex.is_closed());
    debug_assert!(complex.is_connected());
    debug_assert!(complex.is_orientable());
    debug_assert_eq!(complex.euler_characteristic(), -4 * t as i64);

    let mut cuffs = Vec::new();
    for c in 0..columns {
        for leg_side in [0usize, 2] {
            cuffs.push(Cuff {
                kind: CuffKind::Leg,
                length: 2.0 * alpha,
                sides: vec![
                    (cell(c, TOP, FRONT), leg_side),
                    (cell(c, TOP, REAR), leg_side),
                    (cell(c, BOTTOM, FRONT), leg_side),
                    (cell(c, BOTTOM, REAR), leg_side),
                ],
            });
        }
    }
    for j in 0..t {
        cuffs.push(Cuff {
            kind: CuffKind::Waist,
            length: 2.0 * gamma,
            sides: vec![
                (cell(2 * j, TOP, FRONT), 4),
                (cell(2 * j, TOP, REAR), 4),
                (cell(2 * j + 1, TOP, FRONT), 4),
                (cell(2 * j + 1, TOP, REAR), 4),
            ],
        });
        cuffs.push(Cuff {
            kind: CuffKind::Waist,
            length: 2.0 * gamma,
            sides: vec![
                (cell(2 * j + 1, BOTTOM, FRONT), 4),
                (cell(2 * j + 1, BOTTOM, REAR), 4),
                (cell(2 * j + 2, BOTTOM, FRONT), 4),
                (cell(2 * j + 2, BOTTOM, REAR), 4),
            ],
        });
    }

    Ok(PantsSurface {
        complex,
        t,
        alpha,
        gamma,
        hexagon,
        cuffs,
    })
}

/// Short-geodesic inventory of the surface.
#[derive(Debug, Clone)]
pub struct ShortGeodesicReport {
    pub t: usize,
    pub alpha: f64,
    pub gamma: f64,
    /// arcsinh(1), the short-geodesic threshold.
    pub threshold: f64,
    pub waist_count: usize,
    pub waist_length: f64,
    pub leg_count: usize,
    pub leg_length: f64,
    /// 3g - 3 for genus g = 2t + 1.
    pub collar_bound: usize,
    /// The cuff circles saturate the bound, so no other simple closed
    /// geodesic is that short.
    pub bound_saturated: bool,
    pub hexagon_residual: f64,
}

/// Verifies the length constraints and inventories the 6t short cuff
/// geodesics, which saturate the bound of 3g - 3 simple closed geodesics of
/// length at most 2 arcsinh(1).
pub fn short_geodesic_report(surface: &PantsSurface) -> Result<ShortGeodesicReport, PantsError> {
    let threshold = 1.0f64.asinh();
    let alpha = surface.alpha();
    let gamma = surface.gamma();
    if !(alpha < threshold) {
        return Err(PantsError::ParameterConstraintViolated(format!(
            "alpha = {alpha} must be below arcsinh(1) = {threshold}"
        )));
    }
    if !(gamma < threshold) {
        return Err(PantsError::ParameterConstraintViolated(format!(
            "gamma = {gamma} must be below arcsinh(1) = {threshold}"
        )));
    }
    if !(gamma < 2.0 * alpha) {
        return Err(PantsError::ParameterConstraintViolated(format!(
            "gamma = {gamma} must be below 2 alpha = {}",
            2.0 * alpha
        )));
    }
    let t = surface.t();
    let waist_count = surface
        .cuffs()
        .iter()
        .filter(|c| c.kind == CuffKind::Waist)
        .count();
    let leg_count = surface
        .cuffs()
        .iter()
        .filter(|c| c.kind == CuffKind::Leg)
        .count();
    let genus = surface.genus();
    let collar_bound = 3 * genus - 3;
    Ok(ShortGeodesicReport {
        t,
        alpha,
        gamma,
        threshold,
        waist_count,
        waist_length: 2.0 * gamma,
        leg_count,
        leg_length: 2.0 * alpha,
        collar_bound,
        bound_saturated: waist_count + leg_count == collar_bound,
        hexagon_residual: surface.hexagon().max_identity_residual(),
    })
}

/// Injectivity-radius comparison of the four closed quotients.
#[derive(Debug, Clone)]
pub struct InjectivityReport {
    pub t: usize,
    pub alpha: f64,
    pub gamma: f64,
    /// Quotients by tau1, tau2, tau3: every closed geodesic has length at
    /// least this bound.
    pub others_lower_bound: f64,
    /// The tau4 quotient contains a geodesic of this length (half of an
    /// invariant waist circle).
    pub s4_new_geodesic: f64,
    /// others_lower_bound - s4_new_geodesic, positive under the standing
    /// constraints.
    pub margin: f64,
    /// Index of a waist cuff that tau4 preserves and rotates freely.
    pub invariant_waist: usize,
}

/// Confirms that the tau4 quotient contains a closed geodesic of length
/// gamma (an invariant waist circle halved), strictly shorter than every
/// closed geodesic of the other three quotients.
pub fn injectivity_radius_comparison(
    t: usize,
    alpha: f64,
    gamma: f64,
) -> Result<InjectivityReport, PantsError> {
    let surface = build_surface(t, alpha, gamma)?;
    // The length constraints are prerequisites.
    short_geodesic_report(&surface)?;
    let tau4 = surface.automorphism("tau4")?;
    let class = surface.classify(&tau4)?;
    debug_assert!(class.involutive && class.fixed_point_free);
    let invariant = surface.invariant_waists(&tau4);
    let invariant_waist = *invariant.first().ok_or_else(|| {
        PantsError::ParameterConstraintViolated(
            "tau4 preserves no waist circle; template invariant broken".to_owned(),
        )
    })?;
    let others_lower_bound = (2.0 * alpha).min(2.0 * gamma);
    let s4_new_geodesic = gamma;
    Ok(InjectivityReport {
        t,
        alpha,
        gamma,
        others_lower_bound,
        s4_new_geodesic,
        margin: others_lower_bound - s4_new_geodesic,
        invariant_waist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::hexagon::HEXAGON_TOLERANCE;

    #[test]
    fn surface_counts_for_small_t() {
        for t in [1usize, 2, 3] {
            let surface = build_surface(t, 0.8, 0.7).unwrap();
            assert_eq!(surface.complex().cell_count(), 8 * t);
            assert_eq!(surface.euler_characteristic(), -4 * t as i64);
            assert_eq!(surface.genus(), 2 * t + 1);
            let waists = surface
                .cuffs()
                .iter()
                .filter(|c| c.kind == CuffKind::Waist)
                .count();
            let legs = surface
                .cuffs()
                .iter()
                .filter(|c| c.kind == CuffKind::Leg)
                .count();
            assert_eq!(waists, 2 * t);
            assert_eq!(legs, 4 * t);
        }
    }

    #[test]
    fn named_involutions_classify_as_stated() {
        for t in [1usize, 2, 3] {
            let surface = build_surface(t, 0.8, 0.7).unwrap();
            let g = (t + 1) as usize;

            // Free orientation-reversing quotient involutions.
            for name in ["tau1", "tau2", "tau3", "tau4"] {
                let map = surface.automorphism(name).unwrap();
                let class = surface.classify(&map).unwrap();
                assert!(class.involutive, "{name} at t = {t}");
                assert!(class.orientation_reversing, "{name} at t = {t}");
                assert!(class.fixed_point_free, "{name} at t = {t}");
                let quotient = surface.quotient_topology(&map).unwrap();
                assert!(!quotient.orientable, "{name} at t = {t}");
                assert_eq!(quotient.boundary_components, 0, "{name} at t = {t}");
                assert_eq!(quotient.euler, -2 * t as i64, "{name} at t = {t}");
                assert_eq!(quotient.genus, g as i64, "{name} at t = {t}");
            }

            // rho: free, orientation preserving.
            let rho = surface.automorphism("rho").unwrap();
            let class = surface.classify(&rho).unwrap();
            assert!(class.involutive && class.fixed_point_free);
            assert!(!class.orientation_reversing);

            // Reflections and their fixed-circle counts / quotient boundaries.
            let expected = [
                ("tauP", 2 * g),
                ("tauH", 2 * g - 2),
                ("tauV1", 4),
                ("tauV2", 2),
            ];
            for (name, boundary) in expected {
                let map = surface.automorphism(name).unwrap();
                let class = surface.classify(&map).unwrap();
                assert!(class.involutive, "{name} at t = {t}");
                assert!(class.orientation_reversing, "{name} at t = {t}");
                assert!(!class.fixed_point_free, "{name} at t = {t}");
                assert_eq!(
                    class.fixed_circle_count, boundary,
                    "{name} fixed circles at t = {t}"
                );
                let quotient = surface.quotient_topology(&map).unwrap();
                assert_eq!(
                    quotient.boundary_components, boundary,
                    "{name} boundary at t = {t}"
                );
                assert_eq!(quotient.euler, -2 * t as i64);
            }
        }
    }

    #[test]
    fn composition_identities_hold_cell_by_cell() {
        for t in [1usize, 2] {
            let surface = build_surface(t, 0.8, 0.7).unwrap();
            let compare = |name: &str, sequence: &[&str]| {
                let direct = surface.automorphism(name).unwrap();
                let mut composed = Automorphism::identity(surface.complex());
                for step in sequence {
                    let next = surface.automorphism(step).unwrap();
                    composed = next.map().compose(surface.complex(), &composed);
                }
                assert_eq!(direct.map(), &composed, "{name} at t = {t}");
            };
            compare("tau1", &["tauP", "tauV1", "tauH"]);
            compare("tau2", &["rho", "tauP"]);
            compare("tau3", &["rho", "tauH"]);
            compare("tau4", &["tauP", "tauV2", "tauH"]);
        }
    }

    #[test]
    fn squares_of_all_named_maps_are_the_identity() {
        let surface = build_surface(2, 0.8, 0.7).unwrap();
        for name in [
            "tauP", "tauH", "tauV1", "tauV2", "rho", "tau1", "tau2", "tau3", "tau4",
        ] {
            let map = surface.automorphism(name).unwrap();
            assert!(
                map.map().is_involution(surface.complex()),
                "{name} must be involutive"
            );
        }
    }

    #[test]
    fn tau4_rotates_a_waist_circle() {
        for t in [1usize, 2, 3] {
            let surface = build_surface(t, 0.8, 0.7).unwrap();
            let tau4 = surface.automorphism("tau4").unwrap();
            let invariant = surface.invariant_waists(&tau4);
            assert!(
                !invariant.is_empty(),
                "tau4 must preserve a waist circle at t = {t}"
            );
            for index in invariant {
                assert_eq!(surface.cuffs()[index].kind, CuffKind::Waist);
            }
        }
    }

    #[test]
    fn short_geodesic_inventory() {
        let surface = build_surface(1, 0.8, 0.7).unwrap();
        let report = short_geodesic_report(&surface).unwrap();
        assert_eq!(report.waist_count, 2);
        assert_eq!(report.leg_count, 4);
        assert_eq!(report.collar_bound, 6);
        assert!(report.bound_saturated);
        assert!(report.hexagon_residual <= HEXAGON_TOLERANCE);
        assert!((report.threshold - 0.881374).abs() < 1e-6);
    }

    #[test]
    fn constraint_violations_are_reported() {
        let surface = build_surface(1, 0.8, 0.7).unwrap();
        let _ = surface;
        // gamma = 2 alpha sits exactly on the constraint boundary.
        let violation = injectivity_radius_comparison(1, 0.3, 0.6);
        assert!(matches!(
            violation,
            Err(PantsError::ParameterConstraintViolated(_))
        ));
        // alpha at/above arcsinh(1).
        let violation = injectivity_radius_comparison(1, 1.0, 0.5);
        assert!(matches!(
            violation,
            Err(PantsError::ParameterConstraintViolated(_))
        ));
    }

    #[test]
    fn injectivity_comparison_reports_the_gap() {
        let report = injectivity_radius_comparison(1, 0.8, 0.7).unwrap();
        assert_eq!(report.s4_new_geodesic, 0.7);
        assert_eq!(report.others_lower_bound, 1.4);
        assert!((report.margin - 0.7).abs() < 1e-12);
    }

    #[test]
    fn dot_export_mentions_every_pants() {
        let surface = build_surface(1, 0.8, 0.7).unwrap();
        let dot = surface.to_dot();
        for label in ["T0f", "T0r", "B1f", "B1r"] {
            assert!(dot.contains(label), "missing {label}");
        }
    }
}
