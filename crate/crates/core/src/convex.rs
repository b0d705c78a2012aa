//! Finitely generated convex sets, used for values of the Filippov map and
//! for Clarke generalized gradients.

use crate::geometry::{dot, norm};

/// Convex hull of a nonempty list of points in `R^k`.
///
/// Exact duplicate vertices are dropped on construction; no other pruning is
/// done, so every stored vertex is one of the generating points.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexSet {
    dimension: usize,
    vertices: Vec<Vec<f64>>,
}

impl ConvexSet {
    /// # Panics
    /// Panics if `vertices` is empty or the points have different lengths.
    pub fn new(vertices: Vec<Vec<f64>>) -> Self {
        assert!(!vertices.is_empty(), "convex set needs at least one vertex");
        let dimension = vertices[0].len();
        assert!(
            vertices.iter().all(|v| v.len() == dimension),
            "vertices must share one dimension"
        );
        let mut unique: Vec<Vec<f64>> = Vec::with_capacity(vertices.len());
        for v in vertices {
            if !unique.contains(&v) {
                unique.push(v);
            }
        }
        ConvexSet {
            dimension,
            vertices: unique,
        }
    }

    pub fn singleton(point: Vec<f64>) -> Self {
        ConvexSet::new(vec![point])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when all vertices lie within `tol` of the first one.
    pub fn is_singleton(&self, tol: f64) -> bool {
        let first = &self.vertices[0];
        self.vertices
            .iter()
            .all(|v| v.iter().zip(first).all(|(a, b)| (a - b).abs() <= tol))
    }

    /// `[min, max]` of the first coordinate; for a one-dimensional set this is the set itself.
    pub fn interval(&self) -> (f64, f64) {
        self.vertices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v[0]), hi.max(v[0]))
        })
    }

    /// Support function `max_{v in S} <direction, v>`.
    pub fn support(&self, direction: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(direction, v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `min_{v in S} <direction, v>`.
    pub fn lower_support(&self, direction: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(direction, v))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest vertex norm: radius of the smallest origin-centred ball holding the set.
    pub fn max_norm(&self) -> f64 {
        self.vertices.iter().map(|v| norm(v)).fold(0.0, f64::max)
    }

    /// Every vertex of `self` lies in `other` (up to `tol`).
    pub fn is_subset_of(&self, other: &ConvexSet, tol: f64) -> bool {
        self.vertices.iter().all(|v| other.distance_to(v) <= tol)
    }

    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        self.distance_to(point) <= tol
    }

    /// Euclidean distance from `point` to the hull.
    pub fn distance_to(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.dimension);
        match self.vertices.len() {
            1 => crate::geometry::distance(&self.vertices[0], point),
            2 => segment_distance(&self.vertices[0], &self.vertices[1], point),
            _ if self.dimension == 1 => {
                let (lo, hi) = self.interval();
                (lo - point[0]).max(point[0] - hi).max(0.0)
            }
            _ => self.hull_distance(point),
        }
    }

    // Projected accelerated gradient over simplex weights:
    // min_w 1/2 |V w - p|^2, w in the unit simplex.
    fn hull_distance(&self, point: &[f64]) -> f64 {
        let m = self.vertices.len();
        let shifted: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(point).map(|(a, b)| a - b).collect())
            .collect();
        let lipschitz: f64 = shifted.iter().map(|v| dot(v, v)).sum::<f64>().max(1e-300);
        let step = 1.0 / lipschitz;
        let combine = |w: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; self.dimension];
            for (wi, v) in w.iter().zip(&shifted) {
                for (o, vi) in out.iter_mut().zip(v) {
                    *o += wi * vi;
                }
            }
            out
        };
        let mut w = vec![1.0 / m as f64; m];
        let mut y = w.clone();
        let mut momentum: f64 = 1.0;
        let mut best = norm(&combine(&w));
        for _ in 0..20_000 {
            let r = combine(&y);
            let grad: Vec<f64> = shifted.iter().map(|v| dot(v, &r)).collect();
            let raw: Vec<f64> = y.iter().zip(&grad).map(|(yi, gi)| yi - step * gi).collect();
            let next = project_simplex(&raw);
            let next_momentum = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
            let beta = (momentum - 1.0) / next_momentum;
            y = next
                .iter()
                .zip(&w)
                .map(|(a, b)| a + beta * (a - b))
                .collect();
            let moved: f64 = next.iter().zip(&w).map(|(a, b)| (a - b).abs()).sum();
            w = next;
            momentum = next_momentum;
            best = best.min(norm(&combine(&w)));
            if moved < 1e-15 {
                break;
            }
        }
        best
    }
}

fn segment_distance(a: &[f64], b: &[f64], p: &[f64]) -> f64 {
    let ab: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let ap: Vec<f64> = p.iter().zip(a).map(|(x, y)| x - y).collect();
    let len2 = dot(&ab, &ab);
    let s = if len2 > 0.0 {
        (dot(&ap, &ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let closest: Vec<f64> = a.iter().zip(&ab).map(|(x, d)| x + s * d).collect();
    crate::geometry::distance(&closest, p)
}

/// Euclidean projection onto `{w >= 0, sum w = 1}`.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &s) in sorted.iter().enumerate() {
        cumulative += s;
        let candidate = (cumulative - 1.0) / (i + 1) as f64;
        if s - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}
