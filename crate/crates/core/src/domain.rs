//! Compact subsets of the complex plane and their natural measures.
//!
//! Segments, circles and unions of real intervals carry arclength; disks and
//! polygons carry area. Every domain can test membership, draw uniform
//! samples, produce a deterministic evaluation grid and report its diameter.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LejaError, Result};

/// A point of the complex plane.
pub type ComplexPoint = Complex64;

/// Tolerance used for membership in lower-dimensional sets and on boundaries.
pub const CONTAINS_TOL: f64 = 1e-12;

/// Maximum bounding-box rejections before polygon sampling gives up.
pub const MAX_REJECTIONS: u64 = 1_000_000;

/// Growth exponents of the Nikolskii, Markov and covering inequalities.
///
/// Only the exponents are needed: they fix how many candidates per step the
/// MH and RM generators draw.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentProfile {
    pub r_nikolskii: f64,
    pub r_markov: f64,
    pub r_covering: f64,
}

impl ExponentProfile {
    pub fn new(r_nikolskii: f64, r_markov: f64, r_covering: f64) -> Result<Self> {
        let p = Self { r_nikolskii, r_markov, r_covering };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(self.r_nikolskii) && ok(self.r_markov) && ok(self.r_covering) {
            Ok(())
        } else {
            Err(LejaError::InvalidDomain(format!(
                "exponents must be finite and positive, got {self:?}"
            )))
        }
    }
}

/// Geometry of a compact set. Points are given as `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Shape {
    Segment { a: [f64; 2], b: [f64; 2] },
    Circle { center: [f64; 2], radius: f64 },
    Disk { center: [f64; 2], radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    /// Disjoint closed intervals `[lo, hi]` of the real axis.
    IntervalUnion { intervals: Vec<[f64; 2]> },
}

impl Shape {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Shape::Segment { .. } => "segment",
            Shape::Circle { .. } => "circle",
            Shape::Disk { .. } => "disk",
            Shape::Polygon { .. } => "polygon",
            Shape::IntervalUnion { .. } => "interval-union",
        }
    }

    /// Default exponents per kind. Interval, disk and polygon values follow the
    /// classical inequalities for those sets; the circle with arclength
    /// behaves like a one-dimensional smooth curve.
    pub fn default_exponents(&self) -> ExponentProfile {
        let (l, m, c) = match self {
            Shape::Segment { .. } | Shape::IntervalUnion { .. } => (2.0, 2.0, 1.0),
            Shape::Circle { .. } => (1.0, 1.0, 1.0),
            Shape::Disk { .. } => (2.0, 1.0, 2.0),
            Shape::Polygon { .. } => (2.0, 2.0, 2.0),
        };
        ExponentProfile { r_nikolskii: l, r_markov: m, r_covering: c }
    }
}

/// JSON form of a domain: `{"kind": "...", <geometry>, "exponents": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    #[serde(flatten)]
    pub shape: Shape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<ExponentProfile>,
}

fn pt(p: [f64; 2]) -> ComplexPoint {
    Complex64::new(p[0], p[1])
}

/// A validated compact set `K` with its exponent profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainSpec", into = "DomainSpec")]
pub struct CompactDomain {
    shape: Shape,
    exponents: ExponentProfile,
    diameter: f64,
    /// Cumulative lengths of interval-union components, for component selection.
    cumulative: Vec<f64>,
}

impl TryFrom<DomainSpec> for CompactDomain {
    type Error = LejaError;

    fn try_from(spec: DomainSpec) -> Result<Self> {
        let exponents = spec.exponents.unwrap_or_else(|| spec.shape.default_exponents());
        exponents.validate()?;
        Self::with_exponents(spec.shape, exponents)
    }
}

impl From<CompactDomain> for DomainSpec {
    fn from(d: CompactDomain) -> Self {
        DomainSpec { shape: d.shape, exponents: Some(d.exponents) }
    }
}

fn finite(p: &[f64; 2]) -> bool {
    p[0].is_finite() && p[1].is_finite()
}

impl CompactDomain {
    pub fn new(shape: Shape) -> Result<Self> {
        let exponents = shape.default_exponents();
        Self::with_exponents(shape, exponents)
    }

    pub fn with_exponents(shape: Shape, exponents: ExponentProfile) -> Result<Self> {
        exponents.validate()?;
        let invalid = |msg: &str| Err(LejaError::InvalidDomain(msg.to_string()));
        let mut cumulative = Vec::new();
        let diameter = match &shape {
            Shape::Segment { a, b } => {
                if !finite(a) || !finite(b) {
                    return invalid("segment endpoints must be finite");
                }
                let d = (pt(*b) - pt(*a)).norm();
                if d <= 0.0 {
                    return invalid("segment endpoints must differ");
                }
                d
            }
            Shape::Circle { center, radius } | Shape::Disk { center, radius } => {
                if !finite(center) || !radius.is_finite() || *radius <= 0.0 {
                    return invalid("center must be finite and radius positive");
                }
                2.0 * radius
            }
            Shape::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return invalid("polygon needs at least 3 vertices");
                }
                if !vertices.iter().all(finite) {
                    return invalid("polygon vertices must be finite");
                }
                if !polygon_is_simple(vertices) {
                    return invalid("polygon must be simple (no self-intersections)");
                }
                if polygon_area(vertices).abs() <= 0.0 {
                    return invalid("polygon has zero area");
                }
                let mut d: f64 = 0.0;
                for (i, p) in vertices.iter().enumerate() {
                    for q in &vertices[i + 1..] {
                        d = d.max((pt(*p) - pt(*q)).norm());
                    }
                }
                d
            }
            Shape::IntervalUnion { intervals } => {
                if intervals.is_empty() {
                    return invalid("interval union needs at least one interval");
                }
                let mut sorted = intervals.clone();
                sorted.sort_by(|x, y| x[0].total_cmp(&y[0]));
                for iv in &sorted {
                    if !finite(iv) || iv[1] <= iv[0] {
                        return invalid("each interval must be finite with lo < hi");
                    }
                }
                for w in sorted.windows(2) {
                    if w[1][0] <= w[0][1] {
                        return invalid("intervals must be disjoint");
                    }
                }
                let mut acc = 0.0;
                for iv in intervals {
                    acc += iv[1] - iv[0];
                    cumulative.push(acc);
                }
                sorted.last().unwrap()[1] - sorted[0][0]
            }
        };
        Ok(Self { shape, exponents, diameter, cumulative })
    }

    /// `[-1, 1] × {0}` with arclength.
    pub fn unit_interval() -> Self {
        Self::new(Shape::Segment { a: [-1.0, 0.0], b: [1.0, 0.0] }).expect("valid")
    }

    /// The closed unit disk with area measure.
    pub fn unit_disk() -> Self {
        Self::new(Shape::Disk { center: [0.0, 0.0], radius: 1.0 }).expect("valid")
    }

    /// The unit circle with arclength.
    pub fn unit_circle() -> Self {
        Self::new(Shape::Circle { center: [0.0, 0.0], radius: 1.0 }).expect("valid")
    }

    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(Shape::Polygon { vertices })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn kind_name(&self) -> &'static str {
        self.shape.kind_name()
    }

    pub fn exponents(&self) -> ExponentProfile {
        self.exponents
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn contains(&self, z: ComplexPoint) -> bool {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return false;
        }
        match &self.shape {
            Shape::Segment { a, b } => dist_to_segment(z, pt(*a), pt(*b)) <= CONTAINS_TOL,
            Shape::Circle { center, radius } => ((z - pt(*center)).norm() - radius).abs() <= CONTAINS_TOL,
            Shape::Disk { center, radius } => (z - pt(*center)).norm() <= radius + CONTAINS_TOL,
            Shape::Polygon { vertices } => point_in_polygon(z, vertices),
            Shape::IntervalUnion { intervals } => {
                z.im.abs() <= CONTAINS_TOL
                    && intervals
                        .iter()
                        .any(|iv| z.re >= iv[0] - CONTAINS_TOL && z.re <= iv[1] + CONTAINS_TOL)
            }
        }
    }

    /// One draw from the normalized natural measure of the domain.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ComplexPoint> {
        let z = match &self.shape {
            Shape::Segment { a, b } => {
                let u: f64 = rng.random();
                pt(*a) + (pt(*b) - pt(*a)) * u
            }
            Shape::Circle { center, radius } => {
                let theta = 2.0 * PI * rng.random::<f64>();
                pt(*center) + Complex64::from_polar(*radius, theta)
            }
            Shape::Disk { center, radius } => {
                let r = radius * rng.random::<f64>().sqrt();
                let theta = 2.0 * PI * rng.random::<f64>();
                pt(*center) + Complex64::from_polar(r, theta)
            }
            Shape::Polygon { vertices } => sample_polygon(vertices, rng, MAX_REJECTIONS)?,
            Shape::IntervalUnion { intervals } => {
                let total = *self.cumulative.last().unwrap();
                let t = total * rng.random::<f64>();
                let idx = self.cumulative.partition_point(|&c| c <= t).min(intervals.len() - 1);
                let iv = intervals[idx];
                Complex64::new(iv[0] + (iv[1] - iv[0]) * rng.random::<f64>(), 0.0)
            }
        };
        Ok(z)
    }

    /// Deterministic quasi-uniform grid with roughly `target_count` points.
    ///
    /// Curves get equispaced parameters. Disks get an equispaced boundary ring
    /// (power-of-two size, starting at angle 0) followed by a tensor grid of
    /// the interior; polygons get their vertices, points along the edges and
    /// then the interior tensor grid. Boundary points come first so that
    /// ties in an argmax prefer the boundary.
    pub fn eval_grid(&self, target_count: usize) -> Vec<ComplexPoint> {
        let target = target_count.max(2);
        match &self.shape {
            Shape::Segment { a, b } => linspace(pt(*a), pt(*b), target),
            Shape::Circle { center, radius } => circle_points(pt(*center), *radius, target),
            Shape::IntervalUnion { intervals } => {
                let total = *self.cumulative.last().unwrap();
                let mut out = Vec::with_capacity(target + 2 * intervals.len());
                for iv in intervals {
                    let m = (((iv[1] - iv[0]) / total) * target as f64).round().max(2.0) as usize;
                    out.extend(linspace(Complex64::new(iv[0], 0.0), Complex64::new(iv[1], 0.0), m));
                }
                out
            }
            Shape::Disk { center, radius } => {
                let c = pt(*center);
                let r = *radius;
                let area = PI * r * r;
                adjust_spacing(target, area, |h| {
                    let ring = prev_power_of_two(((2.0 * PI * r / h).floor() as usize).max(4));
                    let mut out = circle_points(c, r, ring);
                    tensor_fill(&mut out, (c.re - r, c.im - r), (c.re + r, c.im + r), h, |z| {
                        (z - c).norm() < r - 0.5 * h
                    });
                    out
                })
            }
            Shape::Polygon { vertices } => {
                let area = polygon_area(vertices).abs();
                let (lo, hi) = bounding_box(vertices);
                adjust_spacing(target, area, |h| {
                    let mut out: Vec<ComplexPoint> = vertices.iter().map(|v| pt(*v)).collect();
                    for i in 0..vertices.len() {
                        let p = pt(vertices[i]);
                        let q = pt(vertices[(i + 1) % vertices.len()]);
                        let m = ((q - p).norm() / h).ceil().max(1.0) as usize;
                        for j in 1..m {
                            out.push(p + (q - p) * (j as f64 / m as f64));
                        }
                    }
                    tensor_fill(&mut out, (lo[0], lo[1]), (hi[0], hi[1]), h, |z| {
                        point_in_polygon(z, vertices) && polygon_boundary_distance(z, vertices) > 0.5 * h
                    });
                    out
                })
            }
        }
    }

    /// `count` points equispaced in the boundary parameter, used as the per-step
    /// mesh of deterministic pseudo-Leja points. Segments are their own
    /// boundary; disks use their bounding circle; polygons are traversed by
    /// arclength starting at the first vertex.
    pub fn boundary_mesh(&self, count: usize) -> Result<Vec<ComplexPoint>> {
        let count = count.max(1);
        match &self.shape {
            Shape::Segment { a, b } => Ok(if count == 1 {
                vec![pt(*a)]
            } else {
                linspace(pt(*a), pt(*b), count)
            }),
            Shape::Circle { center, radius } | Shape::Disk { center, radius } => {
                Ok(circle_points(pt(*center), *radius, count))
            }
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                let lengths: Vec<f64> =
                    (0..n).map(|i| (pt(vertices[(i + 1) % n]) - pt(vertices[i])).norm()).collect();
                let perimeter: f64 = lengths.iter().sum();
                let mut out = Vec::with_capacity(count);
                let mut edge = 0;
                let mut edge_start = 0.0;
                for j in 0..count {
                    let s = perimeter * j as f64 / count as f64;
                    while edge + 1 < n && s >= edge_start + lengths[edge] {
                        edge_start += lengths[edge];
                        edge += 1;
                    }
                    let t = ((s - edge_start) / lengths[edge]).clamp(0.0, 1.0);
                    let p = pt(vertices[edge]);
                    let q = pt(vertices[(edge + 1) % n]);
                    out.push(p + (q - p) * t);
                }
                Ok(out)
            }
            Shape::IntervalUnion { .. } => Err(LejaError::Unsupported {
                kind: self.kind_name(),
                what: "boundary mesh (no single boundary parameterization)",
            }),
        }
    }
}

fn sample_polygon<R: Rng + ?Sized>(vertices: &[[f64; 2]], rng: &mut R, limit: u64) -> Result<ComplexPoint> {
    let (lo, hi) = bounding_box(vertices);
    for _ in 0..limit {
        let x = lo[0] + (hi[0] - lo[0]) * rng.random::<f64>();
        let y = lo[1] + (hi[1] - lo[1]) * rng.random::<f64>();
        let z = Complex64::new(x, y);
        if point_in_polygon(z, vertices) {
            return Ok(z);
        }
    }
    Err(LejaError::SamplingExhausted { attempts: limit })
}

/// Runs `build` with a spacing `h` tuned so that the output size lies within a
/// factor 2 of `target`.
fn adjust_spacing<F>(target: usize, area: f64, build: F) -> Vec<ComplexPoint>
where
    F: Fn(f64) -> Vec<ComplexPoint>,
{
    let mut h = (area / target as f64).sqrt();
    let mut out = build(h);
    for _ in 0..60 {
        if out.len() > 2 * target {
            h *= 1.05;
        } else if 2 * out.len() < target {
            h /= 1.05;
        } else {
            break;
        }
        out = build(h);
    }
    out
}

fn tensor_fill<P>(out: &mut Vec<ComplexPoint>, lo: (f64, f64), hi: (f64, f64), h: f64, keep: P)
where
    P: Fn(ComplexPoint) -> bool,
{
    let nx = ((hi.0 - lo.0) / h).floor() as usize;
    let ny = ((hi.1 - lo.1) / h).floor() as usize;
    // center the lattice inside the box
    let ox = lo.0 + 0.5 * ((hi.0 - lo.0) - nx as f64 * h);
    let oy = lo.1 + 0.5 * ((hi.1 - lo.1) - ny as f64 * h);
    for j in 0..=ny {
        for i in 0..=nx {
            let z = Complex64::new(ox + i as f64 * h, oy + j as f64 * h);
            if keep(z) {
                out.push(z);
            }
        }
    }
}

fn prev_power_of_two(n: usize) -> usize {
    if n.is_power_of_two() {
        n
    } else {
        n.next_power_of_two() / 2
    }
}

fn linspace(a: ComplexPoint, b: ComplexPoint, m: usize) -> Vec<ComplexPoint> {
    let m = m.max(2);
    (0..m)
        .map(|i| {
            if i == m - 1 {
                b
            } else {
                a + (b - a) * (i as f64 / (m - 1) as f64)
            }
        })
        .collect()
}

fn circle_points(c: ComplexPoint, r: f64, m: usize) -> Vec<ComplexPoint> {
    (0..m)
        .map(|i| c + Complex64::from_polar(r, 2.0 * PI * i as f64 / m as f64))
        .collect()
}

fn bounding_box(vertices: &[[f64; 2]]) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for v in vertices {
        for d in 0..2 {
            lo[d] = lo[d].min(v[d]);
            hi[d] = hi[d].max(v[d]);
        }
    }
    (lo, hi)
}

/// Signed area (shoelace).
pub fn polygon_area(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n)
        .map(|i| {
            let p = vertices[i];
            let q = vertices[(i + 1) % n];
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
}

fn dist_to_segment(z: ComplexPoint, a: ComplexPoint, b: ComplexPoint) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

fn polygon_boundary_distance(z: ComplexPoint, vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| dist_to_segment(z, pt(vertices[i]), pt(vertices[(i + 1) % n])))
        .fold(f64::INFINITY, f64::min)
}

/// Closed point-in-polygon test: boundary points (within [`CONTAINS_TOL`]) are
/// inside; otherwise the winding number of a horizontal ray decides. A ray
/// grazing a vertex is nudged upward by `1e-12`.
pub fn point_in_polygon(z: ComplexPoint, vertices: &[[f64; 2]]) -> bool {
    if polygon_boundary_distance(z, vertices) <= CONTAINS_TOL {
        return true;
    }
    let mut y = z.im;
    if vertices.iter().any(|v| v[1] == y) {
        y += 1e-12;
    }
    let x = z.re;
    let n = vertices.len();
    let mut winding = 0i32;
    for i in 0..n {
        let p = vertices[i];
        let q = vertices[(i + 1) % n];
        let cross = (q[0] - p[0]) * (y - p[1]) - (x - p[0]) * (q[1] - p[1]);
        if p[1] <= y {
            if q[1] > y && cross > 0.0 {
                winding += 1;
            }
        } else if q[1] <= y && cross < 0.0 {
            winding -= 1;
        }
    }
    winding != 0
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| {
        let v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    };
    let on_seg = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| {
        c[0] >= a[0].min(b[0]) && c[0] <= a[0].max(b[0]) && c[1] >= a[1].min(b[1]) && c[1] <= a[1].max(b[1])
    };
    let (o1, o2, o3, o4) = (orient(p1, p2, q1), orient(p1, p2, q2), orient(q1, q2, p1), orient(q1, q2, p2));
    if o1 != o2 && o3 != o4 {
        return true;
    }
    (o1 == 0 && on_seg(p1, p2, q1))
        || (o2 == 0 && on_seg(p1, p2, q2))
        || (o3 == 0 && on_seg(q1, q2, p1))
        || (o4 == 0 && on_seg(q1, q2, p2))
}

fn polygon_is_simple(vertices: &[[f64; 2]]) -> bool {
    let n = vertices.len();
    for i in 0..n {
        for j in i + 1..n {
            // adjacent edges share a vertex
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]) {
                return false;
            }
        }
    }
    // repeated vertices make a degenerate outline
    for i in 0..n {
        for j in i + 1..n {
            if vertices[i] == vertices[j] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Purpose, RandomStream};

    fn square() -> CompactDomain {
        CompactDomain::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
    }

    fn l_shape() -> CompactDomain {
        CompactDomain::polygon(vec![
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 1.0],
            [1.0, 1.0],
            [1.0, 2.0],
            [0.0, 2.0],
        ])
        .unwrap()
    }

    fn all_domains() -> Vec<CompactDomain> {
        vec![
            CompactDomain::unit_interval(),
            CompactDomain::unit_circle(),
            CompactDomain::unit_disk(),
            square(),
            l_shape(),
            CompactDomain::new(Shape::IntervalUnion { intervals: vec![[-2.0, -1.0], [0.5, 2.5]] }).unwrap(),
            CompactDomain::new(Shape::Segment { a: [0.0, -1.0], b: [1.0, 1.0] }).unwrap(),
        ]
    }

    #[test]
    fn contains_examples() {
        assert!(CompactDomain::unit_disk().contains(Complex64::new(0.0, 0.0)));
        assert!(!CompactDomain::unit_interval().contains(Complex64::new(2.0, 0.0)));
        assert!(square().contains(Complex64::new(0.5, 0.5)));
        assert!(!square().contains(Complex64::new(1.5, 0.5)));
        assert!(square().contains(Complex64::new(1.0, 1.0)));
        assert!(!l_shape().contains(Complex64::new(1.5, 1.5)));
        assert!(l_shape().contains(Complex64::new(0.5, 1.5)));
        assert!(!CompactDomain::unit_circle().contains(Complex64::new(0.5, 0.0)));
        assert!(!CompactDomain::unit_disk().contains(Complex64::new(f64::NAN, 0.0)));
    }

    #[test]
    fn ray_through_vertex_is_handled() {
        // ray from (0.5, 1) passes exactly through the reflex vertex (1, 1)
        let d = l_shape();
        assert!(d.contains(Complex64::new(0.5, 1.0)));
        assert!(!d.contains(Complex64::new(2.5, 1.0)));
        assert!(!d.contains(Complex64::new(-0.5, 1.0)));
    }

    #[test]
    fn diameters() {
        assert_eq!(CompactDomain::unit_interval().diameter(), 2.0);
        assert_eq!(CompactDomain::unit_disk().diameter(), 2.0);
        assert!((square().diameter() - 2f64.sqrt()).abs() < 1e-15);
        let u = CompactDomain::new(Shape::IntervalUnion { intervals: vec![[0.5, 2.5], [-2.0, -1.0]] }).unwrap();
        assert_eq!(u.diameter(), 4.5);
    }

    #[test]
    fn rejects_invalid_geometry() {
        assert!(CompactDomain::polygon(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
        // bow tie
        assert!(CompactDomain::polygon(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).is_err());
        // collinear, zero area
        assert!(CompactDomain::polygon(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).is_err());
        assert!(CompactDomain::new(Shape::Disk { center: [0.0, 0.0], radius: 0.0 }).is_err());
        assert!(CompactDomain::new(Shape::IntervalUnion { intervals: vec![[0.0, 1.0], [0.5, 2.0]] }).is_err());
        assert!(ExponentProfile::new(2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn samples_stay_inside() {
        for d in all_domains() {
            let mut s = RandomStream::new(3, 0, 0, Purpose::Candidate);
            for _ in 0..10_000 {
                let z = d.sample_uniform(&mut s).unwrap();
                assert!(d.contains(z), "{} produced {z}", d.kind_name());
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        for d in all_domains() {
            let a = d.sample_uniform(&mut RandomStream::new(9, 1, 2, Purpose::Candidate)).unwrap();
            let b = d.sample_uniform(&mut RandomStream::new(9, 1, 2, Purpose::Candidate)).unwrap();
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn segment_samples_are_real() {
        let d = CompactDomain::unit_interval();
        let mut s = RandomStream::new(1, 0, 0, Purpose::Init);
        for _ in 0..1000 {
            let z = d.sample_uniform(&mut s).unwrap();
            assert_eq!(z.im, 0.0);
            assert!((-1.0..=1.0).contains(&z.re));
        }
    }

    #[test]
    fn disk_sample_moments() {
        let d = CompactDomain::unit_disk();
        let mut s = RandomStream::new(11, 0, 0, Purpose::Candidate);
        let n = 100_000;
        let mut mean = Complex64::new(0.0, 0.0);
        let mut inner = 0usize;
        for _ in 0..n {
            let z = d.sample_uniform(&mut s).unwrap();
            mean += z;
            if z.norm() <= 0.5 {
                inner += 1;
            }
        }
        mean /= n as f64;
        assert!(mean.norm() < 0.02, "mean {mean}");
        assert!((inner as f64 / n as f64 - 0.25).abs() < 0.01);
    }

    /// Pearson statistic for `counts` against `expected`; the 1e-3 upper critical
    /// values used below are 24.32 (7 dof) and 37.70 (15 dof).
    fn chi_square(counts: &[usize], expected: &[f64]) -> f64 {
        counts.iter().zip(expected).map(|(&c, &e)| (c as f64 - e).powi(2) / e).sum()
    }

    #[test]
    fn chi_square_uniformity_curves() {
        let n = 100_000;
        let cases = [
            (CompactDomain::unit_interval(), Box::new(|z: ComplexPoint| (z.re + 1.0) / 2.0) as Box<dyn Fn(_) -> f64>),
            (
                CompactDomain::unit_circle(),
                Box::new(|z: ComplexPoint| z.im.atan2(z.re).rem_euclid(2.0 * PI) / (2.0 * PI)),
            ),
        ];
        for (d, param) in cases.iter() {
            let mut s = RandomStream::new(5, 0, 0, Purpose::Candidate);
            let mut counts = [0usize; 8];
            for _ in 0..n {
                let t = param(d.sample_uniform(&mut s).unwrap());
                counts[((t * 8.0) as usize).min(7)] += 1;
            }
            let stat = chi_square(&counts, &[n as f64 / 8.0; 8]);
            assert!(stat < 24.32, "{}: chi2 {stat}", d.kind_name());
        }
    }

    #[test]
    fn chi_square_uniformity_areas() {
        let n = 100_000;
        // 16 boxes of the bounding square; expected mass = area(box ∩ K) / area(K),
        // estimated by a fine midpoint rule
        for d in [CompactDomain::unit_disk(), square(), l_shape()] {
            let (lo, hi) = match d.shape() {
                Shape::Disk { .. } => ([-1.0, -1.0], [1.0, 1.0]),
                Shape::Polygon { vertices } => bounding_box(vertices),
                _ => unreachable!(),
            };
            let cell = |z: ComplexPoint| {
                let i = (((z.re - lo[0]) / (hi[0] - lo[0])) * 4.0).floor().clamp(0.0, 3.0) as usize;
                let j = (((z.im - lo[1]) / (hi[1] - lo[1])) * 4.0).floor().clamp(0.0, 3.0) as usize;
                4 * j + i
            };
            let m = 800;
            let mut mass = [0f64; 16];
            for a in 0..m {
                for b in 0..m {
                    let z = Complex64::new(
                        lo[0] + (a as f64 + 0.5) / m as f64 * (hi[0] - lo[0]),
                        lo[1] + (b as f64 + 0.5) / m as f64 * (hi[1] - lo[1]),
                    );
                    if d.contains(z) {
                        mass[cell(z)] += 1.0;
                    }
                }
            }
            let total: f64 = mass.iter().sum();
            let mut counts = [0usize; 16];
            let mut s = RandomStream::new(17, 0, 0, Purpose::Candidate);
            for _ in 0..n {
                counts[cell(d.sample_uniform(&mut s).unwrap())] += 1;
            }
            let (c, e): (Vec<usize>, Vec<f64>) = counts
                .iter()
                .zip(mass.iter())
                .filter(|(_, &w)| w > 0.0)
                .map(|(&c, &w)| (c, w / total * n as f64))
                .unzip();
            let stat = chi_square(&c, &e);
            // 37.70 is the 15-dof critical value; fewer nonempty cells only lower it
            let dof = c.len() - 1;
            let crit = [0.0, 10.83, 13.82, 16.27, 18.47, 20.52, 22.46, 24.32, 26.12, 27.88, 29.59, 31.26, 32.91, 34.53, 36.12, 37.70][dof];
            assert!(stat < crit, "{}: chi2 {stat} (dof {dof})", d.kind_name());
        }
    }

    #[test]
    fn interval_union_picks_components_by_length() {
        let d = CompactDomain::new(Shape::IntervalUnion { intervals: vec![[-2.0, -1.0], [0.0, 3.0]] }).unwrap();
        let mut s = RandomStream::new(2, 0, 0, Purpose::Candidate);
        let n = 40_000;
        let left = (0..n).filter(|_| d.sample_uniform(&mut s).unwrap().re < -0.5).count();
        assert!((left as f64 / n as f64 - 0.25).abs() < 0.01);
    }

    #[test]
    fn sliver_polygon_exhausts_rejection_limit() {
        // diagonal sliver: area ~1e-12 of its bounding box
        let v = [[0.0, 0.0], [1.0, 1.0], [1.0, 1.0 - 1e-12]];
        let mut s = RandomStream::new(1, 0, 0, Purpose::Candidate);
        assert!(matches!(
            sample_polygon(&v, &mut s, 1000),
            Err(LejaError::SamplingExhausted { attempts: 1000 })
        ));
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert!(sample_polygon(&sq, &mut s, 1000).is_ok());
    }

    #[test]
    fn grid_examples() {
        let g = CompactDomain::unit_interval().eval_grid(5);
        let expect = [-1.0, -0.5, 0.0, 0.5, 1.0];
        assert_eq!(g.len(), 5);
        for (z, e) in g.iter().zip(expect) {
            assert!((z.re - e).abs() < 1e-15 && z.im == 0.0);
        }
        let c = CompactDomain::unit_circle().eval_grid(4);
        assert_eq!(c.len(), 4);
        assert_eq!(c[0], Complex64::new(1.0, 0.0));
        assert!((c[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((c[2] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn area_grids_are_contained_and_sized() {
        for d in all_domains() {
            for target in [100, 10_000] {
                let g = d.eval_grid(target);
                assert!(g.len() * 2 >= target && g.len() <= 2 * target, "{} {}", d.kind_name(), g.len());
                assert!(g.iter().all(|&z| d.contains(z)), "{}", d.kind_name());
                assert_eq!(g, d.eval_grid(target));
            }
        }
        let g = CompactDomain::unit_disk().eval_grid(10_000);
        assert!((5_000..=20_000).contains(&g.len()));
        assert_eq!(g[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn polygon_grid_includes_vertices() {
        let d = l_shape();
        let g = d.eval_grid(500);
        if let Shape::Polygon { vertices } = d.shape() {
            for v in vertices {
                assert!(g.contains(&pt(*v)));
            }
        }
    }

    #[test]
    fn boundary_meshes() {
        let m = CompactDomain::unit_disk().boundary_mesh(4).unwrap();
        assert_eq!(m.len(), 4);
        assert!((m[2] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let sq = square().boundary_mesh(8).unwrap();
        assert_eq!(sq.len(), 8);
        assert!((sq[2] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(sq.iter().all(|&z| polygon_boundary_distance(z, &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]) < 1e-12));
        let u = CompactDomain::new(Shape::IntervalUnion { intervals: vec![[0.0, 1.0]] }).unwrap();
        assert!(matches!(u.boundary_mesh(4), Err(LejaError::Unsupported { .. })));
    }

    #[test]
    fn json_roundtrip_and_defaults() {
        let d: CompactDomain = serde_json::from_str(r#"{"kind":"disk","center":[0,0],"radius":1}"#).unwrap();
        assert_eq!(d.exponents(), ExponentProfile { r_nikolskii: 2.0, r_markov: 1.0, r_covering: 2.0 });
        let d: CompactDomain = serde_json::from_str(
            r#"{"kind":"segment","a":[-1,0],"b":[1,0],"exponents":{"r_nikolskii":3,"r_markov":2,"r_covering":1}}"#,
        )
        .unwrap();
        assert_eq!(d.exponents().r_nikolskii, 3.0);
        let back: CompactDomain = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<CompactDomain>(r#"{"kind":"polygon","vertices":[[0,0],[1,0]]}"#).is_err());
    }
}
