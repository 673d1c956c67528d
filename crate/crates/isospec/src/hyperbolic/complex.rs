//! Polygonal surface complexes and their automorphisms.
//!
//! Cells are polygons with cyclically ordered sides; gluings identify sides
//! in pairs, with a flag (cell, side, end) model underneath: side `s` of a
//! cell runs from corner `s` to corner `s+1`, and a gluing is `reversed`
//! when end 0 of one side meets end 1 of the other. Vertices, edges, Euler
//! characteristics, orientability, boundary circuits, automorphism fixed
//! sets, and quotient invariants are all derived from this data exactly.

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ComplexError {
    #[error("side ({0}, {1}) is out of range")]
    BadSide(usize, usize),
    #[error("side ({0}, {1}) is already glued")]
    AlreadyGlued(usize, usize),
    #[error("a side cannot be glued to itself")]
    SelfGluing,
    #[error("automorphism does not respect the cell structure (cell {0})")]
    CellMismatch(usize),
    #[error("automorphism does not commute with the edge gluings at ({0}, {1})")]
    GluingMismatch(usize, usize),
    #[error("operation requires an involution")]
    NotInvolutive,
    #[error("operation requires a closed connected orientable complex")]
    NotClosedOrientable,
}

/// Gluing partner of a side: target cell, target side, end reversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gluing {
    pub cell: usize,
    pub side: usize,
    pub reversed: bool,
}

/// A surface built from polygons with glued sides.
#[derive(Debug, Clone)]
pub struct SurfaceComplex {
    sides_per_cell: Vec<usize>,
    gluings: Vec<Vec<Option<Gluing>>>,
    side_lengths: Vec<Vec<f64>>,
}

impl SurfaceComplex {
    pub fn new() -> Self {
        SurfaceComplex {
            sides_per_cell: Vec::new(),
            gluings: Vec::new(),
            side_lengths: Vec::new(),
        }
    }

    /// Adds a polygon with the given side lengths, returning its cell id.
    pub fn add_cell(&mut self, side_lengths: &[f64]) -> usize {
        let id = self.sides_per_cell.len();
        self.sides_per_cell.push(side_lengths.len());
        self.gluings.push(vec![None; side_lengths.len()]);
        self.side_lengths.push(side_lengths.to_vec());
        id
    }

    /// Glues two sides; `reversed` means end 0 of the first matches end 1 of
    /// the second.
    pub fn glue(
        &mut self,
        a: (usize, usize),
        b: (usize, usize),
        reversed: bool,
    ) -> Result<(), ComplexError> {
        for &(cell, side) in [&a, &b] {
            if cell >= self.sides_per_cell.len() || side >= self.sides_per_cell[cell] {
                return Err(ComplexError::BadSide(cell, side));
            }
            if self.gluings[cell][side].is_some() {
                return Err(ComplexError::AlreadyGlued(cell, side));
            }
        }
        if a == b {
            return Err(ComplexError::SelfGluing);
        }
        self.gluings[a.0][a.1] = Some(Gluing {
            cell: b.0,
            side: b.1,
            reversed,
        });
        self.gluings[b.0][b.1] = Some(Gluing {
            cell: a.0,
            side: a.1,
            reversed,
        });
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.sides_per_cell.len()
    }

    pub fn sides_of(&self, cell: usize) -> usize {
        self.sides_per_cell[cell]
    }

    pub fn side_length(&self, cell: usize, side: usize) -> f64 {
        self.side_lengths[cell][side]
    }

    pub fn gluing_of(&self, cell: usize, side: usize) -> Option<Gluing> {
        self.gluings[cell][side]
    }

    fn flag_base(&self) -> Vec<usize> {
        let mut bases = Vec::with_capacity(self.cell_count());
        let mut total = 0;
        for &m in &self.sides_per_cell {
            bases.push(total);
            total += 2 * m;
        }
        bases
    }

    pub fn flag_count(&self) -> usize {
        2 * self.sides_per_cell.iter().sum::<usize>()
    }

    fn flag_id(&self, bases: &[usize], cell: usize, side: usize, end: usize) -> usize {
        bases[cell] + 2 * side + end
    }

    /// s2 on flags: the glued flag (same geometric point on the far side).
    fn glued_flag(&self, cell: usize, side: usize, end: usize) -> Option<(usize, usize, usize)> {
        self.gluings[cell][side].map(|g| {
            let end = if g.reversed { 1 - end } else { end };
            (g.cell, g.side, end)
        })
    }

    /// Union-find vertex classes: orbits of flags under corner rotation
    /// (s1) and gluing (s2).
    fn vertex_classes(&self) -> (Vec<usize>, usize) {
        let bases = self.flag_base();
        let mut uf = UnionFind::new(self.flag_count());
        for cell in 0..self.cell_count() {
            let m = self.sides_per_cell[cell];
            for side in 0..m {
                // s1: corner `side` joins (cell, side, 0) and (cell, side-1, 1).
                let previous = (side + m - 1) % m;
                uf.union(
                    self.flag_id(&bases, cell, side, 0),
                    self.flag_id(&bases, cell, previous, 1),
                );
                // s2.
                if let Some((c2, s2, e2)) = self.glued_flag(cell, side, 0) {
                    uf.union(
                        self.flag_id(&bases, cell, side, 0),
                        self.flag_id(&bases, c2, s2, e2),
                    );
                }
                if let Some((c2, s2, e2)) = self.glued_flag(cell, side, 1) {
                    uf.union(
                        self.flag_id(&bases, cell, side, 1),
                        self.flag_id(&bases, c2, s2, e2),
                    );
                }
            }
        }
        uf.canonical_labels()
    }

    /// Vertex id of a corner flag.
    pub fn vertex_of(&self, cell: usize, side: usize, end: usize) -> usize {
        let bases = self.flag_base();
        let (labels, _) = self.vertex_classes();
        labels[self.flag_id(&bases, cell, side, end)]
    }

    /// Edge classes: pairs of glued sides (or boundary singletons).
    fn edge_classes(&self) -> (BTreeMap<(usize, usize), usize>, usize) {
        let mut labels = BTreeMap::new();
        let mut next = 0;
        for cell in 0..self.cell_count() {
            for side in 0..self.sides_per_cell[cell] {
                if labels.contains_key(&(cell, side)) {
                    continue;
                }
                labels.insert((cell, side), next);
                if let Some(g) = self.gluings[cell][side] {
                    labels.insert((g.cell, g.side), next);
                }
                next += 1;
            }
        }
        (labels, next)
    }

    pub fn edge_id(&self, cell: usize, side: usize) -> usize {
        self.edge_classes().0[&(cell, side)]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_classes().1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_classes().1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.cell_count() as i64
    }

    pub fn is_closed(&self) -> bool {
        self.gluings
            .iter()
            .all(|sides| sides.iter().all(|g| g.is_some()))
    }

    pub fn is_connected(&self) -> bool {
        if self.cell_count() == 0 {
            return true;
        }
        let mut seen = vec![false; self.cell_count()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(cell) = stack.pop() {
            for side in 0..self.sides_per_cell[cell] {
                if let Some(g) = self.gluings[cell][side] {
                    if !seen[g.cell] {
                        seen[g.cell] = true;
                        stack.push(g.cell);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Cell orientation signs, if a consistent orientation exists: crossing
    /// a reversed gluing preserves the sign, an unreversed one flips it.
    pub fn orientation_signs(&self) -> Option<Vec<i8>> {
        let n = self.cell_count();
        let mut signs: Vec<i8> = vec![0; n];
        for start in 0..n {
            if signs[start] != 0 {
                continue;
            }
            signs[start] = 1;
            let mut stack = vec![start];
            while let Some(cell) = stack.pop() {
                for side in 0..self.sides_per_cell[cell] {
                    if let Some(g) = self.gluings[cell][side] {
                        let expected = if g.reversed {
                            signs[cell]
                        } else {
                            -signs[cell]
                        };
                        if signs[g.cell] == 0 {
                            signs[g.cell] = expected;
                            stack.push(g.cell);
                        } else if signs[g.cell] != expected {
                            return None;
                        }
                    }
                }
            }
        }
        Some(signs)
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation_signs().is_some()
    }

    /// Number of boundary circuits (cycles of unglued sides).
    pub fn boundary_components(&self) -> usize {
        let mut boundary_sides: Vec<(usize, usize)> = Vec::new();
        for cell in 0..self.cell_count() {
            for side in 0..self.sides_per_cell[cell] {
                if self.gluings[cell][side].is_none() {
                    boundary_sides.push((cell, side));
                }
            }
        }
        let mut visited: BTreeMap<(usize, usize), bool> =
            boundary_sides.iter().map(|&s| (s, false)).collect();
        let mut circuits = 0;
        for &start in &boundary_sides {
            if visited[&start] {
                continue;
            }
            circuits += 1;
            let mut current = start;
            loop {
                *visited.get_mut(&current).unwrap() = true;
                // Walk from the head corner of this boundary side around the
                // vertex fan until the next boundary side appears.
                let (mut cell, mut side, mut end) = (current.0, current.1, 1usize);
                loop {
                    // s1: rotate to the adjacent side at this corner.
                    let m = self.sides_per_cell[cell];
                    let (next_side, next_end) = if end == 1 {
                        ((side + 1) % m, 0)
                    } else {
                        ((side + m - 1) % m, 1)
                    };
                    side = next_side;
                    end = next_end;
                    match self.glued_flag(cell, side, end) {
                        None => break,
                        Some((c2, s2, e2)) => {
                            cell = c2;
                            side = s2;
                            end = e2;
                        }
                    }
                }
                current = (cell, side);
                if current == start {
                    break;
                }
            }
        }
        circuits
    }

    /// Genus of a closed connected orientable complex.
    pub fn genus(&self) -> Option<usize> {
        if !self.is_closed() || !self.is_connected() || !self.is_orientable() {
            return None;
        }
        let chi = self.euler_characteristic();
        Some(((2 - chi) / 2) as usize)
    }

    /// Gluing graph in DOT format: one node per cell, one edge per gluing.
    pub fn to_dot(&self, cell_name: impl Fn(usize) -> String) -> String {
        let mut out = String::from("graph gluing {\n");
        for cell in 0..self.cell_count() {
            out.push_str(&format!("  c{} [label=\"{}\"];\n", cell, cell_name(cell)));
        }
        let mut seen = std::collections::BTreeSet::new();
        for cell in 0..self.cell_count() {
            for side in 0..self.sides_per_cell[cell] {
                if let Some(g) = self.gluings[cell][side] {
                    let key = if (cell, side) < (g.cell, g.side) {
                        ((cell, side), (g.cell, g.side))
                    } else {
                        ((g.cell, g.side), (cell, side))
                    };
                    if seen.insert(key) {
                        out.push_str(&format!(
                            "  c{} -- c{} [label=\"{}|{}\"];\n",
                            cell, g.cell, side, g.side
                        ));
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

impl Default for SurfaceComplex {
    fn default() -> Self {
        Self::new()
    }
}

/// Action of an automorphism on one cell: the image cell and the dihedral
/// part. Without `flip`, side `s` maps to `s + rotation`; with `flip`, side
/// `s` maps to `rotation - s` and side ends are exchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellMap {
    pub target: usize,
    pub rotation: usize,
    pub flip: bool,
}

/// A cellular automorphism of a surface complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    per_cell: Vec<CellMap>,
}

impl Automorphism {
    /// Builds and validates an automorphism: cells map to cells of the same
    /// shape (side counts and lengths) and the gluings commute.
    pub fn new(complex: &SurfaceComplex, per_cell: Vec<CellMap>) -> Result<Self, ComplexError> {
        if per_cell.len() != complex.cell_count() {
            return Err(ComplexError::CellMismatch(per_cell.len()));
        }
        let map = Automorphism { per_cell };
        for cell in 0..complex.cell_count() {
            let image = map.per_cell[cell];
            if image.target >= complex.cell_count()
                || complex.sides_of(image.target) != complex.sides_of(cell)
            {
                return Err(ComplexError::CellMismatch(cell));
            }
            for side in 0..complex.sides_of(cell) {
                let (tc, ts, _) = map.apply_flag(complex, cell, side, 0);
                let length = complex.side_length(cell, side);
                let image_length = complex.side_length(tc, ts);
                if (length - image_length).abs() > 1e-9 {
                    return Err(ComplexError::CellMismatch(cell));
                }
                // Gluing commutation: image of the partner is the partner of
                // the image, end for end.
                match complex.glued_flag(cell, side, 0) {
                    None => {
                        if complex.gluing_of(tc, ts).is_some() {
                            return Err(ComplexError::GluingMismatch(cell, side));
                        }
                    }
                    Some((pc, ps, pe)) => {
                        let (ic, is, ie) = map.apply_flag(complex, cell, side, 0);
                        let image_partner = complex.glued_flag(ic, is, ie);
                        let partner_image = map.apply_flag(complex, pc, ps, pe);
                        if image_partner != Some(partner_image) {
                            return Err(ComplexError::GluingMismatch(cell, side));
                        }
                    }
                }
            }
        }
        Ok(map)
    }

    pub fn identity(complex: &SurfaceComplex) -> Self {
        Automorphism {
            per_cell: (0..complex.cell_count())
                .map(|target| CellMap {
                    target,
                    rotation: 0,
                    flip: false,
                })
                .collect(),
        }
    }

    pub fn cell_map(&self, cell: usize) -> CellMap {
        self.per_cell[cell]
    }

    /// Image of a flag (cell, side, end).
    pub fn apply_flag(
        &self,
        complex: &SurfaceComplex,
        cell: usize,
        side: usize,
        end: usize,
    ) -> (usize, usize, usize) {
        let m = complex.sides_of(cell);
        let map = self.per_cell[cell];
        if map.flip {
            let new_side = (map.rotation + m - side % m) % m;
            (map.target, new_side, 1 - end)
        } else {
            (map.target, (side + map.rotation) % m, end)
        }
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, complex: &SurfaceComplex, other: &Automorphism) -> Automorphism {
        let per_cell = (0..complex.cell_count())
            .map(|cell| {
                let first = other.per_cell[cell];
                let second = self.per_cell[first.target];
                let m = complex.sides_of(cell) as i64;
                // Track where side s goes: other: s -> r1 ± s;
                // then second: x -> r2 ± x.
                let (rotation, flip) = match (first.flip, second.flip) {
                    (false, false) => (first.rotation as i64 + second.rotation as i64, false),
                    (false, true) => (second.rotation as i64 - first.rotation as i64, true),
                    (true, false) => (first.rotation as i64 + second.rotation as i64, true),
                    (true, true) => (second.rotation as i64 - first.rotation as i64, false),
                };
                CellMap {
                    target: second.target,
                    rotation: rotation.rem_euclid(m) as usize,
                    flip,
                }
            })
            .collect();
        Automorphism { per_cell }
    }

    pub fn is_identity(&self) -> bool {
        self.per_cell
            .iter()
            .enumerate()
            .all(|(cell, map)| map.target == cell && map.rotation == 0 && !map.flip)
    }

    pub fn is_involution(&self, complex: &SurfaceComplex) -> bool {
        self.compose(complex, self).is_identity()
    }

    /// Orientation behavior on a connected orientable complex.
    pub fn is_orientation_reversing(&self, complex: &SurfaceComplex) -> Option<bool> {
        let signs = complex.orientation_signs()?;
        let mut result = None;
        for cell in 0..complex.cell_count() {
            let map = self.per_cell[cell];
            let dihedral_sign = if map.flip { -1 } else { 1 };
            let preserved = signs[cell] * dihedral_sign == signs[map.target];
            match result {
                None => result = Some(!preserved),
                Some(previous) => {
                    if previous != !preserved {
                        // Inconsistent on a connected surface means the map is
                        // not a genuine automorphism; treat as undefined.
                        return None;
                    }
                }
            }
        }
        result
    }
}

/// An endpoint of a fixed arc: a vertex of the complex or the midpoint of an
/// edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Anchor {
    Vertex(usize),
    EdgeMidpoint(usize),
}

/// Fixed-point structure of an involution.
#[derive(Debug, Clone)]
pub struct FixedPointData {
    /// Edges fixed pointwise (the involution acts as the gluing on them).
    pub pointwise_edges: Vec<(usize, usize)>,
    /// Reflection axes through fixed cells, as anchor pairs.
    pub cell_axes: Vec<(Anchor, Anchor)>,
    /// Isolated fixed points: rotation centers, swapped-edge midpoints, and
    /// fixed vertices not on any fixed arc.
    pub isolated_points: usize,
    /// Number of circles formed by the pointwise edges and cell axes.
    pub circle_count: usize,
}

impl FixedPointData {
    pub fn is_empty(&self) -> bool {
        self.pointwise_edges.is_empty() && self.cell_axes.is_empty() && self.isolated_points == 0
    }
}

/// Classification summary of an automorphism.
#[derive(Debug, Clone)]
pub struct AutomorphismClass {
    pub involutive: bool,
    pub orientation_reversing: bool,
    pub fixed_point_free: bool,
    pub fixed_circle_count: usize,
    pub isolated_fixed_points: usize,
}

/// Classifies an automorphism of a closed connected orientable complex.
pub fn classify(
    complex: &SurfaceComplex,
    map: &Automorphism,
) -> Result<AutomorphismClass, ComplexError> {
    let involutive = map.is_involution(complex);
    let orientation_reversing = map
        .is_orientation_reversing(complex)
        .ok_or(ComplexError::NotClosedOrientable)?;
    let fix = fixed_point_data(complex, map)?;
    Ok(AutomorphismClass {
        involutive,
        orientation_reversing,
        fixed_point_free: fix.is_empty(),
        fixed_circle_count: fix.circle_count,
        isolated_fixed_points: fix.isolated_points,
    })
}

/// Computes the fixed-point set of an involution.
pub fn fixed_point_data(
    complex: &SurfaceComplex,
    map: &Automorphism,
) -> Result<FixedPointData, ComplexError> {
    if !map.is_involution(complex) {
        return Err(ComplexError::NotInvolutive);
    }
    let (vertex_labels, vertex_count) = complex.vertex_classes();
    let bases = complex.flag_base();
    let (edge_labels, _) = complex.edge_classes();

    let mut pointwise_edges: Vec<(usize, usize)> = Vec::new();
    let mut midpoint_isolated = 0usize;
    let mut cell_axes: Vec<(Anchor, Anchor)> = Vec::new();
    let mut rotation_centers = 0usize;

    // Fixed cells: rotations pin the center, reflections leave an axis.
    for cell in 0..complex.cell_count() {
        let cm = map.cell_map(cell);
        if cm.target != cell {
            continue;
        }
        let m = complex.sides_of(cell);
        if !cm.flip {
            if cm.rotation != 0 {
                rotation_centers += 1;
            }
            continue;
        }
        // Reflection: fixed sides satisfy 2s = rotation (mod m), fixed
        // corners satisfy 2j = rotation + 1 (mod m).
        let mut anchors: Vec<Anchor> = Vec::new();
        for s in 0..m {
            if (2 * s) % m == cm.rotation % m {
                anchors.push(Anchor::EdgeMidpoint(edge_labels[&(cell, s)]));
            }
        }
        for j in 0..m {
            if (2 * j) % m == (cm.rotation + 1) % m {
                let flag = complex.flag_id(&bases, cell, j, 0);
                anchors.push(Anchor::Vertex(vertex_labels[flag]));
            }
        }
        assert_eq!(
            anchors.len(),
            2,
            "a polygon reflection axis has exactly two anchors"
        );
        cell_axes.push((anchors[0], anchors[1]));
    }

    // Fixed edges: the involution agrees with the gluing (pointwise mirror)
    // or with the gluing composed with the end swap (isolated midpoint).
    let mut seen_edges = std::collections::BTreeSet::new();
    for cell in 0..complex.cell_count() {
        for side in 0..complex.sides_of(cell) {
            let edge = edge_labels[&(cell, side)];
            if !seen_edges.insert(edge) {
                continue;
            }
            let image = map.apply_flag(complex, cell, side, 0);
            if let Some(partner) = complex.glued_flag(cell, side, 0) {
                if image == partner {
                    pointwise_edges.push((cell, side));
                } else if (image.0, image.1) == (partner.0, partner.1) {
                    // Same side, opposite end: midpoint only.
                    midpoint_isolated += 1;
                }
            }
            // A side mapped to itself with ends exchanged is covered by the
            // reflection-axis case above.
        }
    }

    // Circles: anchors are vertices and edge midpoints; pointwise edges and
    // axes are arcs between anchors.
    let mut anchor_ids: BTreeMap<Anchor, usize> = BTreeMap::new();
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let intern = |anchor: Anchor, anchor_ids: &mut BTreeMap<Anchor, usize>| -> usize {
        let next = anchor_ids.len();
        *anchor_ids.entry(anchor).or_insert(next)
    };
    for &(cell, side) in &pointwise_edges {
        let v0 = vertex_labels[complex.flag_id(&bases, cell, side, 0)];
        let v1 = vertex_labels[complex.flag_id(&bases, cell, side, 1)];
        let a = intern(Anchor::Vertex(v0), &mut anchor_ids);
        let b = intern(Anchor::Vertex(v1), &mut anchor_ids);
        arcs.push((a, b));
    }
    for &(first, second) in &cell_axes {
        let a = intern(first, &mut anchor_ids);
        let b = intern(second, &mut anchor_ids);
        arcs.push((a, b));
    }
    let mut uf = UnionFind::new(anchor_ids.len());
    let mut degree = vec![0usize; anchor_ids.len()];
    for &(a, b) in &arcs {
        uf.union(a, b);
        degree[a] += 1;
        degree[b] += 1;
    }
    assert!(
        degree.iter().all(|&d| d == 2),
        "fixed set of an involution must be a disjoint union of circles"
    );
    let circle_count = if anchor_ids.is_empty() {
        0
    } else {
        uf.canonical_labels().1
    };

    // Fixed vertices not on any fixed arc are isolated fixed points.
    let mut vertex_on_circle = vec![false; vertex_count];
    for anchor in anchor_ids.keys() {
        if let Anchor::Vertex(v) = anchor {
            vertex_on_circle[*v] = true;
        }
    }
    let mut vertex_image = vec![usize::MAX; vertex_count];
    for cell in 0..complex.cell_count() {
        for side in 0..complex.sides_of(cell) {
            for end in 0..2 {
                let flag = complex.flag_id(&bases, cell, side, end);
                let (ic, is, ie) = map.apply_flag(complex, cell, side, end);
                let image_flag = complex.flag_id(&bases, ic, is, ie);
                vertex_image[vertex_labels[flag]] = vertex_labels[image_flag];
            }
        }
    }
    let isolated_vertices = (0..vertex_count)
        .filter(|&v| vertex_image[v] == v && !vertex_on_circle[v])
        .count();

    Ok(FixedPointData {
        pointwise_edges,
        cell_axes,
        isolated_points: rotation_centers + midpoint_isolated + isolated_vertices,
        circle_count,
    })
}

/// Topological invariants of the quotient of a closed connected orientable
/// complex by an involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientTopology {
    pub orientable: bool,
    /// Handle genus when orientable; crosshandle count when non-orientable
    /// with an even crosscap number (see `crosscaps`).
    pub genus: i64,
    pub boundary_components: usize,
    pub euler: i64,
    /// Crosscap count of a non-orientable quotient.
    pub crosscaps: Option<i64>,
    /// Isolated cone points (only for orientation-preserving actions).
    pub cone_points: usize,
}

/// Quotient invariants by an involution: Euler characteristic from the
/// doubling relation, boundary from fixed circles, orientability from the
/// action on the complement of the fixed set.
pub fn quotient_topology(
    complex: &SurfaceComplex,
    map: &Automorphism,
) -> Result<QuotientTopology, ComplexError> {
    if !(complex.is_closed() && complex.is_connected() && complex.is_orientable()) {
        return Err(ComplexError::NotClosedOrientable);
    }
    let fix = fixed_point_data(complex, map)?;
    let or_reversing = map
        .is_orientation_reversing(complex)
        .ok_or(ComplexError::NotClosedOrientable)?;
    let chi = complex.euler_characteristic();
    let quotient_chi = (chi + fix.isolated_points as i64) / 2;
    let boundary = fix.circle_count;

    let orientable = if !or_reversing {
        true
    } else {
        !has_invariant_complement_component(complex, map, &fix)
    };
    let (genus, crosscaps) = if orientable {
        ((2 - quotient_chi - boundary as i64) / 2, None)
    } else {
        let k = 2 - quotient_chi - boundary as i64;
        // Genus counts crosshandles when the crosscap count is even,
        // otherwise the crosscaps themselves; `crosscaps` keeps the raw
        // count either way.
        (if k % 2 == 0 { k / 2 } else { k }, Some(k))
    };
    Ok(QuotientTopology {
        orientable,
        genus,
        boundary_components: boundary,
        euler: quotient_chi,
        crosscaps,
        cone_points: if or_reversing {
            0
        } else {
            fix.isolated_points
        },
    })
}

/// True when some connected component of the complement of the fixed set is
/// mapped to itself (which makes the quotient of that component, hence the
/// quotient surface, non-orientable for an orientation-reversing action).
fn has_invariant_complement_component(
    complex: &SurfaceComplex,
    map: &Automorphism,
    fix: &FixedPointData,
) -> bool {
    let bases = complex.flag_base();
    let (edge_labels, _) = complex.edge_classes();
    let pointwise: std::collections::BTreeSet<usize> = fix
        .pointwise_edges
        .iter()
        .map(|&(c, s)| edge_labels[&(c, s)])
        .collect();
    // Blocked cell-interior crossings from reflection axes.
    let mut blocked_side_mid: std::collections::BTreeSet<(usize, usize)> = Default::default();
    let mut blocked_corner: std::collections::BTreeSet<(usize, usize)> = Default::default();
    for cell in 0..complex.cell_count() {
        let cm = map.cell_map(cell);
        if cm.target != cell || !cm.flip {
            continue;
        }
        let m = complex.sides_of(cell);
        for s in 0..m {
            if (2 * s) % m == cm.rotation % m {
                blocked_side_mid.insert((cell, s));
            }
        }
        for j in 0..m {
            if (2 * j) % m == (cm.rotation + 1) % m {
                blocked_corner.insert((cell, j));
            }
        }
    }

    let mut uf = UnionFind::new(complex.flag_count());
    for cell in 0..complex.cell_count() {
        let m = complex.sides_of(cell);
        for side in 0..m {
            // s0 within the side, unless the reflection axis passes through
            // this side's midpoint.
            if !blocked_side_mid.contains(&(cell, side)) {
                uf.union(
                    complex.flag_id(&bases, cell, side, 0),
                    complex.flag_id(&bases, cell, side, 1),
                );
            }
            // s1 at corner `side`, unless the axis passes through the corner.
            if !blocked_corner.contains(&(cell, side)) {
                let previous = (side + m - 1) % m;
                uf.union(
                    complex.flag_id(&bases, cell, side, 0),
                    complex.flag_id(&bases, cell, previous, 1),
                );
            }
            // s2 across the edge, unless pointwise fixed.
            if let Some((c2, s2, e2)) = complex.glued_flag(cell, side, 0) {
                if !pointwise.contains(&edge_labels[&(cell, side)]) {
                    uf.union(
                        complex.flag_id(&bases, cell, side, 0),
                        complex.flag_id(&bases, c2, s2, e2),
                    );
                }
            }
            if let Some((c2, s2, e2)) = complex.glued_flag(cell, side, 1) {
                if !pointwise.contains(&edge_labels[&(cell, side)]) {
                    uf.union(
                        complex.flag_id(&bases, cell, side, 1),
                        complex.flag_id(&bases, c2, s2, e2),
                    );
                }
            }
        }
    }
    let (labels, _) = uf.canonical_labels();
    for cell in 0..complex.cell_count() {
        for side in 0..complex.sides_of(cell) {
            for end in 0..2 {
                let flag = complex.flag_id(&bases, cell, side, end);
                let (ic, is, ie) = map.apply_flag(complex, cell, side, end);
                let image = complex.flag_id(&bases, ic, is, ie);
                if labels[flag] == labels[image] {
                    return true;
                }
            }
        }
    }
    false
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut current = x;
        while self.parent[current] != root {
            let next = self.parent[current];
            self.parent[current] = root;
            current = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    /// Labels elements by component in 0..count order of first appearance.
    fn canonical_labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut labels = vec![usize::MAX; n];
        let mut next = 0;
        let mut root_label: BTreeMap<usize, usize> = BTreeMap::new();
        for x in 0..n {
            let root = self.find(x);
            let label = *root_label.entry(root).or_insert_with(|| {
                let l = next;
                next += 1;
                l
            });
            labels[x] = label;
        }
        (labels, next)
    }
}
