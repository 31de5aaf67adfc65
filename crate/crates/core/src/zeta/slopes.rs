use serde::Serialize;

use crate::{fmt_q, Q};

/// A Newton-polygon point: `Exact(v)` when the valuation is pinned,
/// `AtLeast(v)` when only a certified lower bound is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HullPoint {
    Exact(Q),
    AtLeast(Q),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Slopes {
    /// Slopes with multiplicity, ascending.
    pub slopes: Vec<String>,
    /// Indices whose hull membership certification cannot decide.
    pub ambiguous: Vec<usize>,
}

impl Slopes {
    pub fn values(&self) -> Vec<Q> {
        self.slopes.iter().map(|s| crate::parse_q(s).expect("own formatting")).collect()
    }
}

/// Lower convex hull of `(i, v_i)` over the pinned points, with slopes in
/// units of `scale` (pass `a` to get `ord_q`). A bounded point is ambiguous
/// unless its bound lies strictly above the hull.
pub fn newton_slopes(points: &[HullPoint], scale: i64) -> Slopes {
    let exact: Vec<(i64, Q)> = points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| match p {
            HullPoint::Exact(v) => Some((i as i64, *v)),
            HullPoint::AtLeast(_) => None,
        })
        .collect();
    let mut hull: Vec<(i64, Q)> = Vec::new();
    for &pt in &exact {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * Q::from_integer(pt.0 - x1) >= (pt.1 - y1) * Q::from_integer(x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let height = |x: i64| -> Option<Q> {
        hull.windows(2).find(|w| w[0].0 <= x && x <= w[1].0).map(|w| {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            y1 + (y2 - y1) * Q::new(x - x1, x2 - x1)
        })
    };
    let last = hull.last().map_or(0, |h| h.0);
    let mut ambiguous = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if let HullPoint::AtLeast(b) = p {
            if (i as i64) < last && height(i as i64).is_none_or(|h| *b <= h) {
                ambiguous.push(i);
            }
        }
    }
    let mut slopes = Vec::new();
    for w in hull.windows(2) {
        let s = (w[1].1 - w[0].1) / Q::from_integer((w[1].0 - w[0].0) * scale);
        for _ in 0..(w[1].0 - w[0].0) {
            slopes.push(fmt_q(&s));
        }
    }
    Slopes { slopes, ambiguous }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(v: i64) -> HullPoint {
        HullPoint::Exact(Q::from_integer(v))
    }

    #[test]
    fn linear_factor() {
        let s = newton_slopes(&[ex(0), ex(0)], 1);
        assert_eq!(s.slopes, vec!["0"]);
    }

    #[test]
    fn two_factors() {
        // (1-t)(1-3t) = 1 - 4t + 3t^2 over Z_3
        let s = newton_slopes(&[ex(0), ex(0), ex(1)], 1);
        assert_eq!(s.slopes, vec!["0", "1"]);
        assert!(s.ambiguous.is_empty());
    }

    #[test]
    fn bounded_middle_point() {
        let s = newton_slopes(&[ex(0), HullPoint::AtLeast(Q::from_integer(3)), ex(2)], 1);
        assert_eq!(s.slopes, vec!["1", "1"]);
        assert!(s.ambiguous.is_empty());
        let s = newton_slopes(&[ex(0), HullPoint::AtLeast(Q::new(1, 2)), ex(2)], 1);
        assert_eq!(s.ambiguous, vec![1]);
    }
}
