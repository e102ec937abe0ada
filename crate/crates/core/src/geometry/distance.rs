use super::point::{point_segment_distance, Point};
use crate::error::{GnpError, Result};
use crate::grid::NodeMask;

/// Directed Hausdorff distance `sup_{a∈A} inf_{b∈B} |a − b|`, with an early
/// exit once a point of `B` is closer than the running maximum.
pub fn directed_hausdorff(a: &[Point], b: &[Point]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(GnpError::EmptySet);
    }
    let mut cmax: f64 = 0.0;
    for p in a {
        let mut cmin = f64::INFINITY;
        for q in b {
            let d = p.dist(*q);
            if d < cmin {
                cmin = d;
                if cmin <= cmax {
                    break;
                }
            }
        }
        cmax = cmax.max(cmin);
    }
    Ok(cmax)
}

/// Symmetric Hausdorff distance between two point samples.
pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Hausdorff distance between unions of closed polylines, measuring each
/// vertex against the other side's segments.
pub fn polyline_hausdorff(a: &[Vec<Point>], b: &[Vec<Point>]) -> Result<f64> {
    let directed = |from: &[Vec<Point>], to: &[Vec<Point>]| -> Result<f64> {
        let segs: Vec<(Point, Point)> = to
            .iter()
            .flat_map(|line| {
                let n = line.len();
                (0..n).map(move |i| (line[i], line[(i + 1) % n]))
            })
            .collect();
        let verts: Vec<Point> = from.iter().flatten().copied().collect();
        if segs.is_empty() || verts.is_empty() {
            return Err(GnpError::EmptySet);
        }
        let mut cmax: f64 = 0.0;
        for p in verts {
            let mut cmin = f64::INFINITY;
            for (s0, s1) in &segs {
                cmin = cmin.min(point_segment_distance(p, *s0, *s1));
                if cmin <= cmax {
                    break;
                }
            }
            cmax = cmax.max(cmin);
        }
        Ok(cmax)
    };
    Ok(directed(a, b)?.max(directed(b, a)?))
}

/// Cell-count area of `A △ B` for masks on the same grid.
pub fn symmetric_difference_area(a: &NodeMask, b: &NodeMask) -> Result<f64> {
    a.symmetric_difference_area(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn circle(r: f64, n: usize) -> Vec<Point> {
        (0..n).map(|i| Point::polar(TAU * i as f64 / n as f64) * r).collect()
    }

    #[test]
    fn concentric_circles() {
        let a = circle(1.0, 400);
        let b = circle(1.1, 400);
        assert!((hausdorff_distance(&a, &b).unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        let pl = polyline_hausdorff(&[a.clone()], &[b]).unwrap();
        assert!((pl - 0.1).abs() < 1e-3);
    }

    #[test]
    fn empty_is_an_error() {
        assert_eq!(hausdorff_distance(&[], &[Point::ORIGIN]), Err(GnpError::EmptySet));
    }

    fn cloud() -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..30)
            .prop_map(|v| v.into_iter().map(|(x, y)| Point::new(x, y)).collect())
    }

    proptest! {
        #[test]
        fn metric_axioms(a in cloud(), b in cloud(), c in cloud()) {
            let ab = hausdorff_distance(&a, &b).unwrap();
            let ba = hausdorff_distance(&b, &a).unwrap();
            let bc = hausdorff_distance(&b, &c).unwrap();
            let ac = hausdorff_distance(&a, &c).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ac <= ab + bc + 1e-12);
        }
    }
}
