//! Point-cloud geometry for RGB-D labelling.

mod camera;
mod cluster;
mod kdtree;
mod linalg;
mod pmf;
mod ransac;

pub use camera::{CameraModel, Projection, IDENTITY_EXTRINSIC};
pub use cluster::euclidean_clusters;
pub use kdtree::KdTree;
pub use linalg::symmetric_eigen3;
pub use pmf::{progressive_morphological_filter, PmfParams};
pub use ransac::{fit_plane, ransac_plane, PlaneFit, RansacParams};

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Point {
    pub fn new(x: f64, y: f64, z: f64, rgb: [u8; 3]) -> Self {
        Self {
            x,
            y,
            z,
            r: rgb[0],
            g: rgb[1],
            b: rgb[2],
        }
    }

    #[inline]
    pub fn xyz(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn rgb(&self) -> [u8; 3] {
        [self.r, self.g, self.b]
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Point>,
}

impl PointCloud {
    pub fn new(points: Vec<Point>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn positions(&self) -> Vec<[f64; 3]> {
        self.points.iter().map(Point::xyz).collect()
    }
}

/// `{p : normal . p = offset}` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub normal: [f64; 3],
    pub offset: f64,
}

impl Plane {
    /// Signed distance of `p` from the plane.
    #[inline]
    pub fn signed_distance(&self, p: [f64; 3]) -> f64 {
        dot(self.normal, p) - self.offset
    }

    #[inline]
    pub fn distance(&self, p: [f64; 3]) -> f64 {
        libm::fabs(self.signed_distance(p))
    }
}

#[inline]
pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub(crate) fn norm(a: [f64; 3]) -> f64 {
    libm::sqrt(dot(a, a))
}
