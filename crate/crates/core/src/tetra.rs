//! Spherical tetrahedra in the unit 3-sphere.
//!
//! A tetrahedron is described either by its six edge lengths
//! ([`TetLengths`]) or by its six interior dihedral angles ([`TetAngles`]),
//! both indexed by [`EdgeId`]. The two descriptions determine each other and
//! this module converts in both directions in closed form, by passing
//! through the *links* of the vertices: the link of `v` is the spherical
//! triangle whose sides are the face angles at `v` and whose interior angles
//! are the dihedral angles of the three edges through `v`.
//!
//! Letter convention used in the docs: `e = l01`, `a = l02`, `b = l03`,
//! `c = l12`, `d = l13`, `f = l23`, and the capital letter names the
//! dihedral angle at the same edge (`E = θ01`, ...).

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use crate::error::{GeometryError, Result};
use crate::linalg::{self, Mat4, Vec4};
use crate::sphtrig::{
    checked_acos, cosine_law_angle, dual_cosine_law_side, open_unit_arc, validate_triangle,
    TriangleSides, TriangleValidity,
};
use crate::tolerances::{DEGENERACY_FLOOR, ROUND_TRIP_TOLERANCE};

/// One of the six edges `{i, j}`, `0 ≤ i < j ≤ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeId {
    E01,
    E02,
    E03,
    E12,
    E13,
    E23,
}

impl EdgeId {
    /// Canonical order, used for every six-vector in the crate.
    pub const ALL: [EdgeId; 6] = [
        EdgeId::E01,
        EdgeId::E02,
        EdgeId::E03,
        EdgeId::E12,
        EdgeId::E13,
        EdgeId::E23,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<EdgeId> {
        Self::ALL.get(i).copied()
    }

    pub const fn vertices(self) -> (usize, usize) {
        match self {
            EdgeId::E01 => (0, 1),
            EdgeId::E02 => (0, 2),
            EdgeId::E03 => (0, 3),
            EdgeId::E12 => (1, 2),
            EdgeId::E13 => (1, 3),
            EdgeId::E23 => (2, 3),
        }
    }

    /// The edge through `i` and `j`, in either order.
    pub fn between(i: usize, j: usize) -> Option<EdgeId> {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        Self::ALL.into_iter().find(|e| e.vertices() == (lo, hi))
    }

    /// The edge sharing no vertex with this one. An involution.
    pub const fn opposite(self) -> EdgeId {
        match self {
            EdgeId::E01 => EdgeId::E23,
            EdgeId::E02 => EdgeId::E13,
            EdgeId::E03 => EdgeId::E12,
            EdgeId::E12 => EdgeId::E03,
            EdgeId::E13 => EdgeId::E02,
            EdgeId::E23 => EdgeId::E01,
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.vertices();
        write!(f, "{i}{j}")
    }
}

impl FromStr for EdgeId {
    type Err = String;

    /// Parses two vertex digits such as `"01"` or `"32"`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let digits: Vec<usize> = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| format!("unknown edge {s:?}"))?;
        match digits.as_slice() {
            &[i, j] if i != j && i < 4 && j < 4 => Ok(EdgeId::between(i, j).unwrap()),
            _ => Err(format!("unknown edge {s:?}")),
        }
    }
}

/// The two vertices not in `{i, j}`, ascending.
pub(crate) fn complement(i: usize, j: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&k| k != i && k != j);
    (rest.next().unwrap(), rest.next().unwrap())
}

fn others(v: usize) -> [usize; 3] {
    let mut out = [0; 3];
    for (slot, k) in out.iter_mut().zip((0..4).filter(|&k| k != v)) {
        *slot = k;
    }
    out
}

macro_rules! edge_vector {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name(pub [f64; 6]);

        impl $name {
            pub const fn new(values: [f64; 6]) -> Self {
                Self(values)
            }

            pub const fn splat(x: f64) -> Self {
                Self([x; 6])
            }

            pub fn get(&self, i: usize, j: usize) -> f64 {
                self[EdgeId::between(i, j).expect("distinct vertices below 4")]
            }

            pub fn values(&self) -> [f64; 6] {
                self.0
            }

            /// Copy with one entry replaced.
            pub fn with(mut self, edge: EdgeId, value: f64) -> Self {
                self[edge] = value;
                self
            }

            /// Largest componentwise absolute difference.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                self.0
                    .iter()
                    .zip(other.0.iter())
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max)
            }
        }

        impl Index<EdgeId> for $name {
            type Output = f64;
            fn index(&self, e: EdgeId) -> &f64 {
                &self.0[e.index()]
            }
        }

        impl IndexMut<EdgeId> for $name {
            fn index_mut(&mut self, e: EdgeId) -> &mut f64 {
                &mut self.0[e.index()]
            }
        }
    };
}

edge_vector! {
    /// Six geodesic edge lengths in radians, canonical [`EdgeId`] order.
    TetLengths
}

edge_vector! {
    /// Six interior dihedral angles in radians, canonical [`EdgeId`] order.
    TetAngles
}

impl TetLengths {
    /// Builds lengths from the letter convention `e=l01, a=l02, b=l03,
    /// c=l12, d=l13, f=l23`.
    pub const fn from_letters(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        Self([e, a, b, c, d, f])
    }
}

/// The 4×4 length Gram matrix, `G[i][j] = cos l_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramMatrix4(pub Mat4);

impl GramMatrix4 {
    pub fn det(&self) -> f64 {
        linalg::det4(&self.0)
    }
}

/// Four unit vectors in R⁴, the vertices of the tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetVertices(pub [Vec4; 4]);

/// Outward unit normals, one per face; entry `k` belongs to the face that
/// omits vertex `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceNormals(pub [Vec4; 4]);

/// The link of a vertex: a spherical triangle whose sides are the face
/// angles at that vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkTriangle {
    pub vertex: usize,
    /// The other three vertices, ascending. They label the corners of the link.
    pub corners: [usize; 3],
    /// `sides.a` is opposite corner `corners[0]`, and so on.
    pub sides: TriangleSides,
}

impl LinkTriangle {
    /// The link side joining corners `i` and `j`, i.e. the face angle at
    /// `vertex` in the face `{vertex, i, j}`.
    pub fn side(&self, i: usize, j: usize) -> f64 {
        let [c0, c1, c2] = self.corners;
        let s = self.sides;
        let pair = if i < j { (i, j) } else { (j, i) };
        if pair == (c1, c2) {
            s.a
        } else if pair == (c0, c2) {
            s.b
        } else if pair == (c0, c1) {
            s.c
        } else {
            panic!("{i}{j} is not a side of the link of vertex {}", self.vertex)
        }
    }
}

/// Classification of a six-tuple of lengths or angles.
#[derive(Debug, Clone, PartialEq)]
pub enum TetValidity {
    Valid,
    OutOfRange,
    Degenerate(String),
    NotRealizable(String),
}

impl TetValidity {
    pub fn is_valid(&self) -> bool {
        matches!(self, TetValidity::Valid)
    }
}

pub fn gram_from_lengths(lengths: &TetLengths) -> GramMatrix4 {
    let mut g = [[1.0; 4]; 4];
    for e in EdgeId::ALL {
        let (i, j) = e.vertices();
        let c = lengths[e].cos();
        g[i][j] = c;
        g[j][i] = c;
    }
    GramMatrix4(g)
}

pub fn gram_det(lengths: &TetLengths) -> f64 {
    gram_from_lengths(lengths).det()
}

fn require_valid_lengths(lengths: &TetLengths) -> Result<()> {
    match validate_lengths(lengths) {
        TetValidity::Valid => Ok(()),
        TetValidity::OutOfRange => Err(GeometryError::Domain(format!(
            "edge lengths {:?} outside (0, π)",
            lengths.0
        ))),
        TetValidity::Degenerate(why) => Err(GeometryError::Degenerate(why)),
        TetValidity::NotRealizable(why) => Err(GeometryError::NotRealizable(why)),
    }
}

/// Canonical realization: row `i` of the Cholesky factor of the Gram matrix,
/// so `v0` is the first basis vector, `v1` lies in the span of the first
/// two, and so on.
pub fn vertices_from_lengths(lengths: &TetLengths) -> Result<TetVertices> {
    let g = gram_from_lengths(lengths);
    let (l, _) = linalg::cholesky4(&g.0, DEGENERACY_FLOOR).map_err(|(k, minor)| {
        GeometryError::NotRealizable(format!(
            "leading minor {} of the Gram matrix is {minor:e}",
            k + 1
        ))
    })?;
    Ok(TetVertices(l))
}

pub fn lengths_from_vertices(verts: &TetVertices) -> Result<TetLengths> {
    let mut out = TetLengths::splat(0.0);
    for e in EdgeId::ALL {
        let (i, j) = e.vertices();
        let d = linalg::dot(&verts.0[i], &verts.0[j]);
        if d.abs() >= 1.0 - DEGENERACY_FLOOR {
            return Err(GeometryError::Degenerate(format!(
                "vertices {i} and {j} are coincident or antipodal (dot {d})"
            )));
        }
        out[e] = d.acos();
    }
    Ok(out)
}

pub fn face_normals(verts: &TetVertices) -> Result<FaceNormals> {
    let v = &verts.0;
    let mut normals = [[0.0; 4]; 4];
    for (k, slot) in normals.iter_mut().enumerate() {
        let [p, q, r] = others(k);
        let n = linalg::cross3(&v[p], &v[q], &v[r]);
        let len = linalg::norm(&n);
        if len < DEGENERACY_FLOOR {
            return Err(GeometryError::Degenerate(format!(
                "face opposite vertex {k} is flat"
            )));
        }
        let mut w = n.map(|x| x / len);
        let side = linalg::dot(&w, &v[k]);
        if side.abs() < DEGENERACY_FLOOR {
            return Err(GeometryError::Degenerate(format!(
                "vertex {k} lies on the hyperplane of its opposite face"
            )));
        }
        if side > 0.0 {
            w = w.map(|x| -x);
        }
        *slot = w;
    }
    Ok(FaceNormals(normals))
}

/// Dihedral angles from outward face normals: `cos θ_ij = −w_k · w_l`
/// where `{k, l}` is the opposite edge.
pub fn dihedrals_from_vertices(verts: &TetVertices) -> Result<TetAngles> {
    let w = face_normals(verts)?.0;
    let mut out = TetAngles::splat(0.0);
    for e in EdgeId::ALL {
        let (k, l) = e.opposite().vertices();
        out[e] = checked_acos(-linalg::dot(&w[k], &w[l]), "face normals")?;
    }
    Ok(out)
}

/// Face angle at `v` in the face `{v, i, j}`.
fn face_angle(lengths: &TetLengths, v: usize, i: usize, j: usize) -> Result<f64> {
    cosine_law_angle(lengths.get(i, j), lengths.get(v, i), lengths.get(v, j))
}

pub fn link_triangle(lengths: &TetLengths, vertex: usize) -> Result<LinkTriangle> {
    assert!(vertex < 4, "vertex index {vertex} out of range");
    let corners = others(vertex);
    let [c0, c1, c2] = corners;
    let sides = TriangleSides::new(
        face_angle(lengths, vertex, c1, c2)?,
        face_angle(lengths, vertex, c0, c2)?,
        face_angle(lengths, vertex, c0, c1)?,
    );
    Ok(LinkTriangle {
        vertex,
        corners,
        sides,
    })
}

/// Dihedral angle at edge `{v, k}` read off the link of `v`: the interior
/// angle at corner `k`, opposite the link side subtended by the opposite edge.
pub fn dihedral_in_link(lengths: &TetLengths, v: usize, k: usize) -> Result<f64> {
    let link = link_triangle(lengths, v)?;
    let (p, q) = complement(v, k);
    cosine_law_angle(link.side(p, q), link.side(k, p), link.side(k, q))
}

/// Lengths to dihedral angles through the links. Each `θ_ij` is taken from
/// the link of the lower endpoint `i`.
pub fn dihedrals_from_lengths(lengths: &TetLengths) -> Result<TetAngles> {
    require_valid_lengths(lengths)?;
    let mut out = TetAngles::splat(0.0);
    let links = [
        link_triangle(lengths, 0)?,
        link_triangle(lengths, 1)?,
        link_triangle(lengths, 2)?,
    ];
    for e in EdgeId::ALL {
        let (v, k) = e.vertices();
        let link = &links[v];
        let (p, q) = complement(v, k);
        out[e] = cosine_law_angle(link.side(p, q), link.side(k, p), link.side(k, q))?;
    }
    Ok(out)
}

/// Side `{i, j}` of the link of `v`, recovered from the link's interior
/// angles (the dihedral angles at the edges through `v`) by the dual cosine
/// law. This is the face angle at `v` in face `{v, i, j}`.
pub fn link_side_from_dihedrals(angles: &TetAngles, v: usize, i: usize, j: usize) -> Result<f64> {
    let m = (0..4)
        .find(|&x| x != v && x != i && x != j)
        .expect("four distinct vertices");
    dual_cosine_law_side(angles.get(v, m), angles.get(v, i), angles.get(v, j))
}

/// Length of edge `edge` computed inside the face spanned by `edge` and
/// `apex`, from that face's three angles.
pub fn length_in_face(angles: &TetAngles, edge: EdgeId, apex: usize) -> Result<f64> {
    let (i, j) = edge.vertices();
    assert!(
        apex < 4 && apex != i && apex != j,
        "apex {apex} not off edge {edge}"
    );
    let at_apex = link_side_from_dihedrals(angles, apex, i, j)?;
    let at_i = link_side_from_dihedrals(angles, i, apex, j)?;
    let at_j = link_side_from_dihedrals(angles, j, apex, i)?;
    dual_cosine_law_side(at_apex, at_i, at_j)
}

/// Dihedral angles to lengths, each edge in closed form. For `f = l23` this
/// is `f(κ(A, C, F), σ(B, D, F), γ(A, B, E))`; other edges use the face with
/// the lowest-numbered apex.
pub fn lengths_from_dihedrals(angles: &TetAngles) -> Result<TetLengths> {
    if !angles.0.iter().all(|&x| open_unit_arc(x)) {
        return Err(GeometryError::Domain(format!(
            "dihedral angles {:?} outside (0, π)",
            angles.0
        )));
    }
    let not_realizable = |err: GeometryError| match err {
        GeometryError::Domain(why) => GeometryError::NotRealizable(why),
        other => other,
    };
    let mut out = TetLengths::splat(0.0);
    for e in EdgeId::ALL {
        let (apex, _) = e.opposite().vertices();
        out[e] = length_in_face(angles, e, apex).map_err(not_realizable)?;
    }
    require_valid_lengths(&out).map_err(not_realizable)?;
    Ok(out)
}

fn faces_of(lengths: &TetLengths) -> [TriangleSides; 4] {
    let mut faces = [TriangleSides::new(0.0, 0.0, 0.0); 4];
    for (k, face) in faces.iter_mut().enumerate() {
        let [p, q, r] = others(k);
        *face = TriangleSides::new(lengths.get(q, r), lengths.get(p, r), lengths.get(p, q));
    }
    faces
}

pub fn validate_lengths(lengths: &TetLengths) -> TetValidity {
    if !lengths.0.iter().all(|&x| open_unit_arc(x)) {
        return TetValidity::OutOfRange;
    }
    for (k, face) in faces_of(lengths).into_iter().enumerate() {
        if let TriangleValidity::Degenerate(det) = validate_triangle(face) {
            let why = format!("face opposite vertex {k} has Gram determinant {det:e}");
            return if det < -DEGENERACY_FLOOR {
                TetValidity::NotRealizable(why)
            } else {
                TetValidity::Degenerate(why)
            };
        }
    }
    let g = gram_from_lengths(lengths);
    match linalg::cholesky4(&g.0, DEGENERACY_FLOOR) {
        Ok(_) => TetValidity::Valid,
        Err((k, minor)) => {
            let why = format!("leading minor {} of the Gram matrix is {minor:e}", k + 1);
            if minor < -DEGENERACY_FLOOR {
                TetValidity::NotRealizable(why)
            } else {
                TetValidity::Degenerate(why)
            }
        }
    }
}

/// Angles are valid when they convert to valid lengths that convert back to
/// the same angles (max-norm residual below 1e-8).
pub fn validate_angles(angles: &TetAngles) -> TetValidity {
    if !angles.0.iter().all(|&x| open_unit_arc(x)) {
        return TetValidity::OutOfRange;
    }
    let lengths = match lengths_from_dihedrals(angles) {
        Ok(l) => l,
        Err(GeometryError::Degenerate(why)) => return TetValidity::Degenerate(why),
        Err(err) => return TetValidity::NotRealizable(err.to_string()),
    };
    match dihedrals_from_lengths(&lengths) {
        Ok(back) => {
            let r = back.max_abs_diff(angles);
            if r < ROUND_TRIP_TOLERANCE {
                TetValidity::Valid
            } else {
                TetValidity::NotRealizable(format!("round-trip residual {r:e}"))
            }
        }
        Err(GeometryError::Degenerate(why)) => TetValidity::Degenerate(why),
        Err(err) => TetValidity::NotRealizable(err.to_string()),
    }
}
