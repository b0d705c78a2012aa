//! Small vector helpers, axis-aligned boxes, and deterministic sample sets.

use std::fmt;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `a + s*b`
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl AxisBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len(), "box bounds must have equal length");
        AxisBox { lower, upper }
    }

    /// The cube `[-half_width, half_width]^dimension`.
    pub fn centered(dimension: usize, half_width: f64) -> Self {
        AxisBox::new(vec![-half_width; dimension], vec![half_width; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    /// Whether the open ball of radius `r` about the origin lies in the box.
    pub fn contains_ball(&self, r: f64) -> bool {
        self.lower.iter().zip(&self.upper).all(|(lo, hi)| -r >= *lo && r <= *hi)
    }

    /// Tensor grid with `per_axis` points per axis. When the box straddles
    /// zero on an axis and the grid misses it, zero is inserted so that
    /// switching surfaces through the origin are sampled exactly.
    pub fn grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| {
                let mut pts = linspace(lo, hi, per_axis);
                if lo < 0.0 && hi > 0.0 && !pts.contains(&0.0) {
                    let at = pts.partition_point(|&p| p < 0.0);
                    pts.insert(at, 0.0);
                }
                pts
            })
            .collect();
        cartesian(&axes)
    }
}

impl fmt::Display for AxisBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| format!("[{lo:?}, {hi:?}]"))
            .collect();
        f.write_str(&parts.join(" x "))
    }
}

pub fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::with_capacity(axes.len())];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Deterministic points on the sphere of radius `r` in `dimension` dimensions.
///
/// Always contains the `2*dimension` axis points. For two dimensions the
/// remaining points are equally spaced in angle; in three or more, a grid on
/// the surface of the cube is projected radially onto the sphere.
pub fn sphere_points(dimension: usize, r: f64, count: usize) -> Vec<Vec<f64>> {
    let mut pts = Vec::new();
    for i in 0..dimension {
        for s in [-1.0, 1.0] {
            let mut p = vec![0.0; dimension];
            p[i] = s * r;
            pts.push(p);
        }
    }
    match dimension {
        0 | 1 => {}
        2 => {
            let m = count.max(4);
            for k in 0..m {
                let a = std::f64::consts::TAU * k as f64 / m as f64;
                pts.push(vec![r * a.cos(), r * a.sin()]);
            }
        }
        n => {
            let faces = 2 * n;
            let per_face = (count.max(faces) / faces).max(1);
            let m = ((per_face as f64).powf(1.0 / (n - 1) as f64).ceil() as usize).max(2);
            let face_axis = linspace(-1.0, 1.0, m);
            let face_grid = cartesian(&vec![face_axis; n - 1]);
            for fixed in 0..n {
                for s in [-1.0, 1.0] {
                    for q in &face_grid {
                        let mut p: Vec<f64> = Vec::with_capacity(n);
                        p.extend_from_slice(&q[..fixed]);
                        p.push(s);
                        p.extend_from_slice(&q[fixed..]);
                        let len = norm(&p);
                        pts.push(p.iter().map(|v| r * v / len).collect());
                    }
                }
            }
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_inserts_zero() {
        let b = AxisBox::centered(1, 2.0);
        let g = b.grid(4);
        assert_eq!(g.len(), 5);
        assert!(g.iter().any(|p| p[0] == 0.0));
        let g = b.grid(5);
        assert_eq!(g.len(), 5);
        assert_eq!(AxisBox::centered(2, 1.0).grid(8).len(), 81);
    }

    #[test]
    fn ball_containment() {
        let b = AxisBox::centered(2, 2.0);
        assert!(b.contains_ball(1.5));
        assert!(b.contains_ball(2.0));
        assert!(!b.contains_ball(2.5));
        assert!(!AxisBox::new(vec![0.0], vec![1.0]).contains_ball(0.5));
    }

    #[test]
    fn sphere_points_lie_on_sphere() {
        for n in 1..=4 {
            let pts = sphere_points(n, 1.5, 200);
            assert!(pts.len() >= 2 * n);
            for p in pts {
                assert!((norm(&p) - 1.5).abs() < 1e-12);
            }
        }
    }
}
