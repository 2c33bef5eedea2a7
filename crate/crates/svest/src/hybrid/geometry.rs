//! Exact rational geometry for 2-D convex sets.
//!
//! Estimation over the hybrid benchmark manipulates convex regions rather
//! than finite state sets.  All arithmetic is over arbitrary-precision
//! rationals, so intersections, affine images and vertex counts are exact
//! and deterministic — there is no epsilon anywhere in this module.
//!
//! [`RationalPolygon`] keeps a canonical form: counter-clockwise strictly
//! convex vertex rings starting at the lexicographically smallest vertex,
//! with degenerate sets (segments, points, the empty set) represented by
//! their two, one or zero defining vertices.

use std::fmt;

use num::{BigInt, BigRational, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lcomplete::Annotation;

/// Exact rational scalar: reduced fraction with positive denominator.
pub type Rational = BigRational;

/// Builds the reduced rational `n / d`.  Panics when `d` is zero.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The rational value of an integer.
pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A point (or vector) in the rational plane.
pub type Point2 = (Rational, Rational);

#[cfg(test)]
fn point(x: i64, y: i64) -> Point2 {
    (integer(x), integer(y))
}

/// Sign of a rational as -1, 0 or 1.
fn sign(value: &Rational) -> i32 {
    if value.is_zero() {
        0
    } else if value.is_positive() {
        1
    } else {
        -1
    }
}

/// Cross product of `a - o` and `b - o`; positive when `o → a → b` turns
/// counter-clockwise.
fn cross(o: &Point2, a: &Point2, b: &Point2) -> Rational {
    let dax = &a.0 - &o.0;
    let day = &a.1 - &o.1;
    let dbx = &b.0 - &o.0;
    let dby = &b.1 - &o.1;
    &dax * &dby - &day * &dbx
}

fn orient(o: &Point2, a: &Point2, b: &Point2) -> i32 {
    sign(&cross(o, a, b))
}

fn lerp(a: &Point2, b: &Point2, t: &Rational) -> Point2 {
    (&a.0 + &(t * &(&b.0 - &a.0)), &a.1 + &(t * &(&b.1 - &a.1)))
}

/// An exact 2×2 rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub xx: Rational,
    pub xy: Rational,
    pub yx: Rational,
    pub yy: Rational,
}

impl Mat2 {
    pub fn new(xx: Rational, xy: Rational, yx: Rational, yy: Rational) -> Self {
        Mat2 { xx, xy, yx, yy }
    }

    pub fn identity() -> Self {
        Mat2::new(integer(1), integer(0), integer(0), integer(1))
    }

    pub fn determinant(&self) -> Rational {
        &(&self.xx * &self.yy) - &(&self.xy * &self.yx)
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        (
            &(&self.xx * &p.0) + &(&self.xy * &p.1),
            &(&self.yx * &p.0) + &(&self.yy * &p.1),
        )
    }
}

/// A convex set in the plane with exact rational vertices.
///
/// Canonical form: zero vertices for the empty set, one for a point, two
/// (lexicographically ordered) for a segment, otherwise a strictly convex
/// counter-clockwise ring rotated so the lexicographically smallest
/// vertex comes first.  Two polygons describe the same set exactly when
/// they compare equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct RationalPolygon {
    vertices: Vec<Point2>,
}

impl RationalPolygon {
    pub fn empty() -> Self {
        RationalPolygon { vertices: Vec::new() }
    }

    pub fn point(p: Point2) -> Self {
        RationalPolygon { vertices: vec![p] }
    }

    pub fn segment(a: Point2, b: Point2) -> Self {
        if a == b {
            return RationalPolygon::point(a);
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        RationalPolygon { vertices: vec![lo, hi] }
    }

    /// Axis-aligned box with the given opposite corners (any order).
    pub fn rect(x0: Rational, y0: Rational, x1: Rational, y1: Rational) -> Self {
        let (x0, x1) = if x0 <= x1 { (x0, x1) } else { (x1, x0) };
        let (y0, y1) = if y0 <= y1 { (y0, y1) } else { (y1, y0) };
        RationalPolygon::from_vertices(vec![
            (x0.clone(), y0.clone()),
            (x1.clone(), y0),
            (x1, y1.clone()),
            (x0, y1),
        ])
        .expect("axis-aligned boxes are convex")
    }

    /// Canonicalizes an ordered vertex ring.  Accepts either orientation,
    /// consecutive duplicates and collinear run-through vertices; rejects
    /// rings that are not convex.
    pub fn from_vertices(vertices: Vec<Point2>) -> Result<Self> {
        let mut ring = dedup_cyclic(vertices);
        match ring.len() {
            0 => return Ok(RationalPolygon::empty()),
            1 => return Ok(RationalPolygon::point(ring.pop().expect("one vertex"))),
            2 => {
                let b = ring.pop().expect("two vertices");
                let a = ring.pop().expect("two vertices");
                return Ok(RationalPolygon::segment(a, b));
            }
            _ => {}
        }

        if let Some((lo, hi)) = collinear_extent(&ring) {
            return Ok(RationalPolygon::segment(lo, hi));
        }

        let mut ring = remove_collinear_cyclic(ring);
        if ring.len() < 3 {
            // Only reachable for self-overlapping input rings.
            return RationalPolygon::from_vertices(ring);
        }

        let mut saw_positive = false;
        let mut saw_negative = false;
        let n = ring.len();
        for i in 0..n {
            match orient(&ring[i], &ring[(i + 1) % n], &ring[(i + 2) % n]) {
                1 => saw_positive = true,
                -1 => saw_negative = true,
                _ => unreachable!("collinear vertices were removed"),
            }
        }
        if saw_positive && saw_negative {
            return Err(Error::NotConvex);
        }
        if saw_negative {
            ring.reverse();
        }

        let smallest = ring
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.cmp(b))
            .map(|(i, _)| i)
            .expect("ring is nonempty");
        ring.rotate_left(smallest);
        Ok(RationalPolygon { vertices: ring })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    /// True when `p` lies in the set (boundary included).
    pub fn contains(&self, p: &Point2) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => &self.vertices[0] == p,
            2 => point_on_segment(&self.vertices[0], &self.vertices[1], p),
            n => (0..n)
                .all(|i| orient(&self.vertices[i], &self.vertices[(i + 1) % n], p) >= 0),
        }
    }

    /// Exact intersection of two convex sets; the result is again in
    /// canonical form and may be degenerate or empty.
    pub fn intersect(&self, other: &RationalPolygon) -> RationalPolygon {
        match (self.vertices.len(), other.vertices.len()) {
            (0, _) | (_, 0) => RationalPolygon::empty(),
            (1, _) => {
                if other.contains(&self.vertices[0]) {
                    self.clone()
                } else {
                    RationalPolygon::empty()
                }
            }
            (_, 1) => other.intersect(self),
            (2, 2) => intersect_segments(
                &self.vertices[0],
                &self.vertices[1],
                &other.vertices[0],
                &other.vertices[1],
            ),
            (2, _) => clip_segment_by_ring(&self.vertices[0], &self.vertices[1], other),
            (_, 2) => other.intersect(self),
            (_, _) => {
                let mut ring = self.vertices.clone();
                let n = other.vertices.len();
                for i in 0..n {
                    let a = &other.vertices[i];
                    let b = &other.vertices[(i + 1) % n];
                    ring = clip_ring_by_halfplane(&ring, a, b);
                    if ring.is_empty() {
                        return RationalPolygon::empty();
                    }
                }
                RationalPolygon::from_vertices(ring)
                    .expect("an intersection of convex sets is convex")
            }
        }
    }

    /// Exact image under `p ↦ M·p + b` for invertible `M`.  Orientation is
    /// restored when the map is reflecting.
    pub fn affine_image(&self, m: &Mat2, b: &Point2) -> Result<RationalPolygon> {
        let determinant = m.determinant();
        if determinant.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let mut mapped: Vec<Point2> = self
            .vertices
            .iter()
            .map(|p| {
                let image = m.apply(p);
                (&image.0 + &b.0, &image.1 + &b.1)
            })
            .collect();
        if determinant.is_negative() {
            mapped.reverse();
        }
        // Injective affine maps preserve strict convexity, so the mapped
        // ring only needs reorienting and rotating.
        RationalPolygon::from_vertices(mapped)
    }
}

impl fmt::Display for RationalPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, y)) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        write!(f, "}}")
    }
}

impl Annotation for RationalPolygon {
    fn kind() -> &'static str {
        "polygon"
    }

    fn empty() -> Self {
        RationalPolygon::empty()
    }

    fn is_empty(&self) -> bool {
        RationalPolygon::is_empty(self)
    }

    fn size(&self) -> usize {
        self.vertices.len()
    }
}

fn dedup_cyclic(points: Vec<Point2>) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::with_capacity(points.len());
    for p in points {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// When every point of `ring` is collinear, the lexicographic extremes.
fn collinear_extent(ring: &[Point2]) -> Option<(Point2, Point2)> {
    let first = &ring[0];
    let second = ring.iter().find(|p| *p != first)?;
    if ring.iter().all(|p| orient(first, second, p) == 0) {
        let lo = ring.iter().min().expect("nonempty ring");
        let hi = ring.iter().max().expect("nonempty ring");
        Some((lo.clone(), hi.clone()))
    } else {
        None
    }
}

/// Drops vertices that lie on the segment between their cyclic neighbors.
/// The caller guarantees the ring is not entirely collinear.
fn remove_collinear_cyclic(mut ring: Vec<Point2>) -> Vec<Point2> {
    loop {
        let n = ring.len();
        if n < 3 {
            return ring;
        }
        let kept: Vec<Point2> = (0..n)
            .filter(|&i| orient(&ring[(i + n - 1) % n], &ring[i], &ring[(i + 1) % n]) != 0)
            .map(|i| ring[i].clone())
            .collect();
        if kept.len() == ring.len() {
            return ring;
        }
        ring = kept;
    }
}

fn point_on_segment(a: &Point2, b: &Point2, p: &Point2) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    lo <= p && p <= hi
}

/// One Sutherland–Hodgman pass: keeps the side of `a → b` that a
/// counter-clockwise ring's interior lies on.
fn clip_ring_by_halfplane(ring: &[Point2], a: &Point2, b: &Point2) -> Vec<Point2> {
    let mut out = Vec::with_capacity(ring.len() + 1);
    let n = ring.len();
    for i in 0..n {
        let current = &ring[i];
        let next = &ring[(i + 1) % n];
        let side_current = cross(a, b, current);
        let side_next = cross(a, b, next);
        if !side_current.is_negative() {
            out.push(current.clone());
        }
        if sign(&side_current) * sign(&side_next) < 0 {
            let t = &side_current / &(&side_current - &side_next);
            out.push(lerp(current, next, &t));
        }
    }
    out
}

/// Clips the segment `p → q` by a convex ring with at least 3 vertices.
fn clip_segment_by_ring(p: &Point2, q: &Point2, ring: &RationalPolygon) -> RationalPolygon {
    let mut t_enter = integer(0);
    let mut t_exit = integer(1);
    let n = ring.vertices.len();
    for i in 0..n {
        let a = &ring.vertices[i];
        let b = &ring.vertices[(i + 1) % n];
        let side_p = cross(a, b, p);
        let side_q = cross(a, b, q);
        match (sign(&side_p), sign(&side_q)) {
            (-1, -1) => return RationalPolygon::empty(),
            (-1, _) => {
                // entering: constraint satisfied for t ≥ t*
                let t = &side_p / &(&side_p - &side_q);
                if t > t_enter {
                    t_enter = t;
                }
            }
            (_, -1) => {
                let t = &side_p / &(&side_p - &side_q);
                if t < t_exit {
                    t_exit = t;
                }
            }
            _ => {}
        }
    }
    if t_enter > t_exit {
        RationalPolygon::empty()
    } else if t_enter == t_exit {
        RationalPolygon::point(lerp(p, q, &t_enter))
    } else {
        RationalPolygon::segment(lerp(p, q, &t_enter), lerp(p, q, &t_exit))
    }
}

/// Exact intersection of two segments: empty, a point, or their collinear
/// overlap.
fn intersect_segments(p1: &Point2, q1: &Point2, p2: &Point2, q2: &Point2) -> RationalPolygon {
    let d1 = (&q1.0 - &p1.0, &q1.1 - &p1.1);
    let d2 = (&q2.0 - &p2.0, &q2.1 - &p2.1);
    let denominator = &(&d1.0 * &d2.1) - &(&d1.1 * &d2.0);

    if denominator.is_zero() {
        if orient(p1, q1, p2) != 0 {
            return RationalPolygon::empty(); // parallel, different lines
        }
        // Collinear: lexicographic order is monotone along a line.
        let (lo1, hi1) = if p1 <= q1 { (p1, q1) } else { (q1, p1) };
        let (lo2, hi2) = if p2 <= q2 { (p2, q2) } else { (q2, p2) };
        let lo = if lo1 >= lo2 { lo1 } else { lo2 };
        let hi = if hi1 <= hi2 { hi1 } else { hi2 };
        return match lo.cmp(hi) {
            std::cmp::Ordering::Greater => RationalPolygon::empty(),
            std::cmp::Ordering::Equal => RationalPolygon::point(lo.clone()),
            std::cmp::Ordering::Less => RationalPolygon::segment(lo.clone(), hi.clone()),
        };
    }

    // Solve p1 + t·d1 = p2 + u·d2 and require t, u ∈ [0, 1].
    let rx = &p2.0 - &p1.0;
    let ry = &p2.1 - &p1.1;
    let t = &(&(&rx * &d2.1) - &(&ry * &d2.0)) / &denominator;
    let u = &(&(&rx * &d1.1) - &(&ry * &d1.0)) / &denominator;
    let zero = integer(0);
    let one = integer(1);
    if t < zero || t > one || u < zero || u > one {
        RationalPolygon::empty()
    } else {
        RationalPolygon::point(lerp(p1, q1, &t))
    }
}

pub(crate) type VertexWire = [[String; 2]; 2];

pub(crate) fn vertex_to_wire((x, y): &Point2) -> VertexWire {
    [
        [x.numer().to_string(), x.denom().to_string()],
        [y.numer().to_string(), y.denom().to_string()],
    ]
}

pub(crate) fn rational_from_wire(wire: &[String; 2]) -> std::result::Result<Rational, String> {
    let numerator: BigInt =
        wire[0].parse().map_err(|_| format!("invalid integer `{}`", wire[0]))?;
    let denominator: BigInt =
        wire[1].parse().map_err(|_| format!("invalid integer `{}`", wire[1]))?;
    if denominator.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(numerator, denominator))
}

pub(crate) fn vertex_from_wire(wire: &VertexWire) -> std::result::Result<Point2, String> {
    Ok((rational_from_wire(&wire[0])?, rational_from_wire(&wire[1])?))
}

impl Serialize for RationalPolygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire: Vec<VertexWire> = self.vertices.iter().map(vertex_to_wire).collect();
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalPolygon {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let wire: Vec<VertexWire> = Vec::deserialize(deserializer)?;
        let vertices = wire
            .iter()
            .map(|[x, y]| Ok((rational_from_wire(x)?, rational_from_wire(y)?)))
            .collect::<std::result::Result<Vec<Point2>, String>>()
            .map_err(D::Error::custom)?;
        RationalPolygon::from_vertices(vertices).map_err(|e| D::Error::custom(e.to_string()))
    }
}
