use alloc::vec::Vec;

use super::linalg::symmetric_eigen3;
use super::{cross, dot, norm, sub, Plane};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct RansacParams {
    pub iterations: usize,
    /// metres
    pub distance_threshold: f64,
    pub seed: u64,
}

impl Default for RansacParams {
    fn default() -> Self {
        Self {
            iterations: 500,
            distance_threshold: 0.004,
            seed: 0,
        }
    }
}

impl RansacParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.distance_threshold >= 0.0 && self.distance_threshold.is_finite()) || self.iterations == 0 {
            return Err(Error::InvalidParameter(alloc::format!(
                "RANSAC needs iterations > 0 and a finite non-negative threshold, got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneFit {
    pub plane: Plane,
    pub inliers: Vec<bool>,
}

impl PlaneFit {
    pub fn inlier_count(&self) -> usize {
        self.inliers.iter().filter(|&&b| b).count()
    }
}

// three distinct indices from one stream
fn sample3(rng: &mut SplitMix64, n: usize) -> [usize; 3] {
    let n = n as u64;
    let a = rng.below(n);
    let mut b = rng.below(n - 1);
    if b >= a {
        b += 1;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let mut c = rng.below(n - 2);
    if c >= lo {
        c += 1;
    }
    if c >= hi {
        c += 1;
    }
    [a as usize, b as usize, c as usize]
}

// sign convention: the largest-magnitude normal component is positive
fn oriented(mut normal: [f64; 3], mut offset: f64) -> Plane {
    let k = (0..3)
        .max_by(|&i, &j| {
            libm::fabs(normal[i])
                .total_cmp(&libm::fabs(normal[j]))
                .then(j.cmp(&i))
        })
        .unwrap();
    if normal[k] < 0.0 {
        normal = [-normal[0], -normal[1], -normal[2]];
        offset = -offset;
    }
    Plane { normal, offset }
}

/// Least-squares plane through `points`: centroid plus the eigenvector of
/// the smallest covariance eigenvalue.
pub fn fit_plane(points: &[[f64; 3]]) -> Plane {
    let n = points.len() as f64;
    let mut c = [0.0; 3];
    for p in points {
        for k in 0..3 {
            c[k] += p[k] / n;
        }
    }
    let mut cov = [[0.0; 3]; 3];
    for p in points {
        let d = sub(*p, c);
        for i in 0..3 {
            for j in 0..3 {
                cov[i][j] += d[i] * d[j];
            }
        }
    }
    let (_, vecs) = symmetric_eigen3(cov);
    let normal = vecs[0];
    oriented(normal, dot(normal, c))
}

/// Best-of-`iterations` three-point plane hypotheses by inlier count (ties
/// keep the earlier hypothesis), refit by least squares to the winning
/// inliers. The returned mask is computed against the refit plane.
pub fn ransac_plane(points: &[[f64; 3]], params: &RansacParams) -> Result<PlaneFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            found: points.len(),
        });
    }
    params.validate()?;
    let mut rng = SplitMix64::new(params.seed);
    let mut best: Option<(usize, Plane)> = None;
    for _ in 0..params.iterations {
        let [a, b, c] = sample3(&mut rng, points.len());
        let n = cross(sub(points[b], points[a]), sub(points[c], points[a]));
        let len = norm(n);
        let scale = norm(sub(points[b], points[a])) * norm(sub(points[c], points[a]));
        if len.is_nan() || len <= 1e-12 * scale || len == 0.0 {
            continue;
        }
        let normal = [n[0] / len, n[1] / len, n[2] / len];
        let plane = Plane {
            normal,
            offset: dot(normal, points[a]),
        };
        let count = points
            .iter()
            .filter(|&&p| plane.distance(p) <= params.distance_threshold)
            .count();
        if best.is_none_or(|(c, _)| count > c) {
            best = Some((count, plane));
        }
    }
    let (_, hypothesis) = best.ok_or(Error::DegenerateSample)?;
    let support: Vec<[f64; 3]> = points
        .iter()
        .copied()
        .filter(|&p| hypothesis.distance(p) <= params.distance_threshold)
        .collect();
    let plane = if support.len() >= 3 {
        fit_plane(&support)
    } else {
        oriented(hypothesis.normal, hypothesis.offset)
    };
    let inliers = points
        .iter()
        .map(|&p| plane.distance(p) <= params.distance_threshold)
        .collect();
    Ok(PlaneFit { plane, inliers })
}
