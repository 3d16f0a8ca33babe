//! Exact planar primitives over rational coordinates.
//!
//! Every predicate that feeds a topological decision (intersection,
//! orientation, angular order of tangent directions) is computed in
//! `Ratio<i128>` arithmetic. Floats appear nowhere in this module.

use num::rational::Ratio;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Exact scalar. Template coordinates have small denominators and the
/// grid is a few dozen units wide, so `i128` numerators never get close
/// to overflow even after intersection arithmetic.
pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

pub fn qi(n: i128) -> Q {
    Ratio::from_integer(n)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pt {
    pub x: Q,
    pub y: Q,
}

impl Pt {
    pub fn new(x: Q, y: Q) -> Self {
        Pt { x, y }
    }
}

impl fmt::Debug for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Direction of a segment as an exact vector; reduced to a primitive
/// integer vector so equal directions compare equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Dir {
    pub dx: i128,
    pub dy: i128,
}

impl Dir {
    pub fn between(a: &Pt, b: &Pt) -> Dir {
        let dx = b.x - a.x;
        let dy = b.y - a.y;
        // Clear denominators, then divide by gcd.
        let den = dx.denom() * dy.denom();
        let nx = dx.numer() * (den / dx.denom());
        let ny = dy.numer() * (den / dy.denom());
        Dir::reduced(nx, ny)
    }

    pub fn reduced(nx: i128, ny: i128) -> Dir {
        assert!(!(nx == 0 && ny == 0), "zero direction");
        let g = gcd(nx.abs(), ny.abs());
        Dir {
            dx: nx / g,
            dy: ny / g,
        }
    }

    pub fn reverse(&self) -> Dir {
        Dir {
            dx: -self.dx,
            dy: -self.dy,
        }
    }

    /// Straight down, the cut direction of the winding rule.
    pub fn is_down(&self) -> bool {
        self.dx == 0 && self.dy < 0
    }

    pub fn cross(&self, other: &Dir) -> i128 {
        self.dx * other.dy - self.dy * other.dx
    }

    pub fn dot(&self, other: &Dir) -> i128 {
        self.dx * other.dx + self.dy * other.dy
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Rank of a direction in the angular interval (-pi/2, 3pi/2).
///
/// Directions are ordered by the representative angle theta with
/// -pi/2 < theta < 3pi/2; straight down is excluded. The order is
/// computed with sign tests only: coarse octant class first, then a
/// cross product inside a class.
fn angular_class(d: &Dir) -> Result<u8, GeomError> {
    Ok(match (d.dx.signum(), d.dy.signum()) {
        (1, -1) => 0,  // south-east, theta in (-pi/2, 0)
        (1, 0) => 1,   // east
        (1, 1) => 2,   // north-east
        (0, 1) => 3,   // north
        (-1, 1) => 4,  // north-west
        (-1, 0) => 5,  // west
        (-1, -1) => 6, // south-west, theta in (pi, 3pi/2)
        (0, -1) => return Err(GeomError::CutDirection),
        _ => unreachable!(),
    })
}

/// Exact comparison of tangent angles in (-pi/2, 3pi/2).
pub fn direction_cmp(a: &Dir, b: &Dir) -> Result<Ordering, GeomError> {
    let ca = angular_class(a)?;
    let cb = angular_class(b)?;
    match ca.cmp(&cb) {
        Ordering::Equal => {
            // Same open quadrant: theta_a < theta_b iff a x b > 0.
            Ok(0.cmp(&a.cross(b)))
        }
        ord => Ok(ord),
    }
}

/// `true` when a's angle representative is strictly smaller, i.e. the
/// strand with direction `a` passes over the strand with direction `b`.
pub fn direction_less(a: &Dir, b: &Dir) -> Result<bool, GeomError> {
    Ok(direction_cmp(a, b)? == Ordering::Less)
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("direction is straight down, excluded from the angular order")]
    CutDirection,
}

/// Closed polygonal curve. Vertices are corners; the segment i runs from
/// vertex i to vertex i+1 (cyclically). Orientation is list order.
#[derive(Clone, Debug)]
pub struct PlCurve {
    pub pts: Vec<Pt>,
}

impl PlCurve {
    pub fn new(pts: Vec<Pt>) -> Self {
        assert!(pts.len() >= 3, "closed curve needs at least 3 vertices");
        for i in 0..pts.len() {
            let j = (i + 1) % pts.len();
            assert!(pts[i] != pts[j], "consecutive vertices must differ");
        }
        PlCurve { pts }
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn seg(&self, i: usize) -> (&Pt, &Pt) {
        (&self.pts[i], &self.pts[(i + 1) % self.pts.len()])
    }

    pub fn seg_dir(&self, i: usize) -> Dir {
        let (a, b) = self.seg(i);
        Dir::between(a, b)
    }

    pub fn segments(&self) -> impl Iterator<Item = usize> {
        0..self.pts.len()
    }
}

/// Proper interior intersection of two open segments, if any.
/// Collinear overlaps and endpoint touches return `Improper`.
pub enum SegMeet {
    None,
    Proper(Pt),
    Improper,
}

pub fn seg_intersect(a0: &Pt, a1: &Pt, b0: &Pt, b1: &Pt) -> SegMeet {
    let d1 = orient(a0, a1, b0);
    let d2 = orient(a0, a1, b1);
    let d3 = orient(b0, b1, a0);
    let d4 = orient(b0, b1, a1);

    if d1 == 0 && d2 == 0 {
        // Collinear; either disjoint or overlapping, both non-generic here.
        if collinear_overlap(a0, a1, b0, b1) {
            return SegMeet::Improper;
        }
        return SegMeet::None;
    }
    let strict = ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0))
        && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
    if strict {
        // Solve for the intersection point exactly.
        let ax = a1.x - a0.x;
        let ay = a1.y - a0.y;
        let bx = b1.x - b0.x;
        let by = b1.y - b0.y;
        let den = ax * by - ay * bx;
        debug_assert!(!den.is_zero());
        let t = ((b0.x - a0.x) * by - (b0.y - a0.y) * bx) / den;
        return SegMeet::Proper(Pt::new(a0.x + ax * t, a0.y + ay * t));
    }
    if d1 == 0 || d2 == 0 || d3 == 0 || d4 == 0 {
        // An endpoint lies on the other segment's line within its span.
        if on_segment(a0, a1, b0)
            || on_segment(a0, a1, b1)
            || on_segment(b0, b1, a0)
            || on_segment(b0, b1, a1)
        {
            return SegMeet::Improper;
        }
    }
    SegMeet::None
}

/// Sign of the area of triangle (a, b, c): >0 counterclockwise.
pub fn orient(a: &Pt, b: &Pt, c: &Pt) -> i8 {
    let v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn within(lo: &Q, hi: &Q, v: &Q) -> bool {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    lo <= v && v <= hi
}

fn on_segment(a: &Pt, b: &Pt, p: &Pt) -> bool {
    orient(a, b, p) == 0 && within(&a.x, &b.x, &p.x) && within(&a.y, &b.y, &p.y)
}

fn collinear_overlap(a0: &Pt, a1: &Pt, b0: &Pt, b1: &Pt) -> bool {
    on_segment(a0, a1, b0) || on_segment(a0, a1, b1) || on_segment(b0, b1, a0) || on_segment(b0, b1, a1)
}

/// Exact winding number of a closed curve around a point not on the curve.
///
/// Cast a vertical ray downward from `p`; the ray is shifted
/// infinitesimally east (half-open x test) so vertices on the ray line
/// are counted consistently. Curves never contain vertical segments, so
/// no segment is parallel to the ray.
pub fn winding_number(curve: &PlCurve, p: &Pt) -> i64 {
    let mut w = 0i64;
    for i in curve.segments() {
        let (a, b) = curve.seg(i);
        // Half-open interval in x: a crossing counts iff min <= p.x < max.
        let (lo, hi, eastward) = if a.x < b.x {
            (&a.x, &b.x, true)
        } else {
            (&b.x, &a.x, false)
        };
        if !(lo <= &p.x && &p.x < hi) {
            continue;
        }
        // y of the segment at x = p.x; counts only if strictly below p.
        let t = (p.x - a.x) / (b.x - a.x);
        let y = a.y + (b.y - a.y) * t;
        if y < p.y {
            // A ccw loop crosses its own south ray heading east once: +1.
            w += if eastward { 1 } else { -1 };
        }
    }
    w
}

/// Point strictly on the curve (any segment)?
pub fn point_on_curve(curve: &PlCurve, p: &Pt) -> bool {
    curve.segments().any(|i| {
        let (a, b) = curve.seg(i);
        on_segment(a, b, p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i128, y: i128) -> Pt {
        Pt::new(qi(x), qi(y))
    }

    #[test]
    fn direction_order_matches_angle_ranges() {
        // (1,0) has theta 0, (-1,0) has theta pi: first passes over.
        let e = Dir::reduced(1, 0);
        let w = Dir::reduced(-1, 0);
        assert!(direction_less(&e, &w).unwrap());
        // Equal directions are not less.
        let n = Dir::reduced(0, 1);
        assert!(!direction_less(&n, &n).unwrap());
        // theta(1,-1) = -pi/4 < theta(1,1) = pi/4.
        assert!(direction_less(&Dir::reduced(1, -1), &Dir::reduced(1, 1)).unwrap());
        // South-west (theta in (pi, 3pi/2)) is the largest class.
        assert!(direction_less(&w, &Dir::reduced(-1, -1)).unwrap());
        // Straight down is rejected.
        assert_eq!(
            direction_less(&Dir::reduced(0, -1), &e),
            Err(GeomError::CutDirection)
        );
    }

    #[test]
    fn within_class_tiebreak_is_exact() {
        // In the SE class: (1,-1) is theta=-45deg, (2,-1) is about -26deg.
        let steep = Dir::reduced(1, -1);
        let shallow = Dir::reduced(2, -1);
        assert!(direction_less(&steep, &shallow).unwrap());
        assert!(!direction_less(&shallow, &steep).unwrap());
    }

    #[test]
    fn segment_intersection_proper_and_improper() {
        let m = seg_intersect(&pt(0, 0), &pt(2, 2), &pt(0, 2), &pt(2, 0));
        match m {
            SegMeet::Proper(p) => assert_eq!(p, pt(1, 1)),
            _ => panic!("expected proper crossing"),
        }
        // Endpoint touch is improper.
        match seg_intersect(&pt(0, 0), &pt(1, 1), &pt(1, 1), &pt(2, 0)) {
            SegMeet::Improper => {}
            _ => panic!("expected improper"),
        }
        // Disjoint.
        match seg_intersect(&pt(0, 0), &pt(1, 0), &pt(0, 1), &pt(1, 1)) {
            SegMeet::None => {}
            _ => panic!("expected none"),
        }
    }

    #[test]
    fn winding_of_a_square() {
        let ccw = PlCurve::new(vec![pt(-1, -1), pt(1, -1), pt(1, 1), pt(-1, 1)]);
        assert_eq!(winding_number(&ccw, &pt(0, 0)), 1);
        assert_eq!(winding_number(&ccw, &pt(3, 0)), 0);
        let cw = PlCurve::new(vec![pt(-1, 1), pt(1, 1), pt(1, -1), pt(-1, -1)]);
        assert_eq!(winding_number(&cw, &pt(0, 0)), -1);
    }
}
