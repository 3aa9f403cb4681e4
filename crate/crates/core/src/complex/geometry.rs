//! Exact planar predicates: orientation, segment intersection, point location.

use std::cmp::Ordering;
use std::fmt;

use num::Zero;

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Point2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point2 {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point2 { x, y }
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn frac(x: (i64, i64), y: (i64, i64)) -> Self {
        Point2::new(Scalar::new(x.0, x.1), Scalar::new(y.0, y.1))
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point2::new(Scalar::from_int(x), Scalar::from_int(y))
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Sign of the cross product `(b - a) x (c - a)`: `Greater` for a left turn.
pub fn orientation(a: &Point2, b: &Point2, c: &Point2) -> Ordering {
    let abx = &b.x.0 - &a.x.0;
    let aby = &b.y.0 - &a.y.0;
    let acx = &c.x.0 - &a.x.0;
    let acy = &c.y.0 - &a.y.0;
    (abx * acy - aby * acx).cmp(&num::BigRational::zero())
}

/// `p` lies on the closed segment `ab`.
pub fn on_segment(p: &Point2, a: &Point2, b: &Point2) -> bool {
    orientation(a, b, p) == Ordering::Equal
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// Closed segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if o1 != o2
        && o3 != o4
        && o1 != Ordering::Equal
        && o2 != Ordering::Equal
        && o3 != Ordering::Equal
        && o4 != Ordering::Equal
    {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

/// Closed segments `ab` and `cd` meet somewhere other than a single shared
/// endpoint. Identical segments count as meeting.
pub fn segments_meet_beyond_endpoint(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> bool {
    if !segments_intersect(a, b, c, d) {
        return false;
    }
    let shared = [(a, c), (a, d), (b, c), (b, d)]
        .iter()
        .filter(|(p, q)| p == q)
        .count();
    if shared != 1 {
        return true;
    }
    // Exactly one common endpoint: any other contact is a collinear overlap.
    let (other_ab, other_cd) = if a == c {
        (b, d)
    } else if a == d {
        (b, c)
    } else if b == c {
        (a, d)
    } else {
        (a, c)
    };
    on_segment(other_cd, a, b) || on_segment(other_ab, c, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Locates `p` relative to the polygon with vertices `poly` (even-odd rule).
pub fn locate(p: &Point2, poly: &[Point2]) -> Location {
    let n = poly.len();
    for i in 0..n {
        if on_segment(p, &poly[i], &poly[(i + 1) % n]) {
            return Location::Boundary;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            // x coordinate where edge ab crosses the horizontal line through p
            let t = (&p.y.0 - &a.y.0) / (&b.y.0 - &a.y.0);
            let cross_x = &a.x.0 + t * (&b.x.0 - &a.x.0);
            if p.x.0 < cross_x {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Returns the first pair of polygon edge indices that intersect improperly,
/// or `None` if the closed polyline is a simple polygon.
///
/// Edge `i` joins `poly[i]` and `poly[i + 1]` (cyclically).
pub fn first_self_intersection(poly: &[Point2]) -> Option<(usize, usize)> {
    let n = poly.len();
    let edge = |i: usize| (&poly[i], &poly[(i + 1) % n]);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let bad = if adjacent {
                segments_meet_beyond_endpoint(a, b, c, d)
            } else {
                segments_intersect(a, b, c, d)
            };
            if bad {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x0: i64, y0: i64, side: i64) -> Vec<Point2> {
        vec![
            Point2::int(x0, y0),
            Point2::int(x0 + side, y0),
            Point2::int(x0 + side, y0 + side),
            Point2::int(x0, y0 + side),
        ]
    }

    #[test]
    fn orientation_signs() {
        let (a, b) = (Point2::int(0, 0), Point2::int(1, 0));
        assert_eq!(orientation(&a, &b, &Point2::int(0, 1)), Ordering::Greater);
        assert_eq!(orientation(&a, &b, &Point2::int(0, -1)), Ordering::Less);
        assert_eq!(orientation(&a, &b, &Point2::int(5, 0)), Ordering::Equal);
    }

    #[test]
    fn locate_square() {
        let s = sq(0, 0, 3);
        assert_eq!(locate(&Point2::int(1, 1), &s), Location::Inside);
        assert_eq!(locate(&Point2::int(3, 1), &s), Location::Boundary);
        assert_eq!(locate(&Point2::int(0, 0), &s), Location::Boundary);
        assert_eq!(locate(&Point2::int(4, 1), &s), Location::Outside);
        // ray through a vertex
        assert_eq!(locate(&Point2::int(-1, 3), &s), Location::Outside);
        assert_eq!(locate(&Point2::frac((1, 2), (1, 1)), &s), Location::Inside);
    }

    #[test]
    fn bow_tie_is_not_simple() {
        let bow = vec![
            Point2::int(0, 0),
            Point2::int(1, 1),
            Point2::int(1, 0),
            Point2::int(0, 1),
        ];
        assert!(first_self_intersection(&bow).is_some());
        assert!(first_self_intersection(&sq(0, 0, 1)).is_none());
    }

    #[test]
    fn folded_back_triangle_is_not_simple() {
        let flat = vec![Point2::int(0, 0), Point2::int(2, 0), Point2::int(1, 0)];
        assert!(first_self_intersection(&flat).is_some());
    }

    #[test]
    fn shared_endpoint_only() {
        let o = Point2::int(0, 0);
        assert!(!segments_meet_beyond_endpoint(
            &o,
            &Point2::int(1, 0),
            &o,
            &Point2::int(0, 1)
        ));
        assert!(segments_meet_beyond_endpoint(
            &o,
            &Point2::int(2, 0),
            &o,
            &Point2::int(1, 0)
        ));
    }
}
