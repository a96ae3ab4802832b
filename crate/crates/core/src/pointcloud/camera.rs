use alloc::format;

use super::PointCloud;
use crate::error::{Error, Result};
use alloc::vec::Vec;

/// Pinhole intrinsics plus a rigid world-to-camera transform (row-major 4x4).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CameraModel {
    pub width: usize,
    pub height: usize,
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub extrinsic: [f64; 16],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub u: f64,
    pub v: f64,
    pub depth: f64,
    pub in_frame: bool,
}

pub const IDENTITY_EXTRINSIC: [f64; 16] = [
    1.0, 0.0, 0.0, 0.0, //
    0.0, 1.0, 0.0, 0.0, //
    0.0, 0.0, 1.0, 0.0, //
    0.0, 0.0, 0.0, 1.0,
];

impl CameraModel {
    pub fn new(
        width: usize,
        height: usize,
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        extrinsic: [f64; 16],
    ) -> Result<Self> {
        let cam = Self {
            width,
            height,
            fx,
            fy,
            cx,
            cy,
            extrinsic,
        };
        cam.validate()?;
        Ok(cam)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fx > 0.0 && self.fy > 0.0) {
            return Err(Error::InvalidCamera(format!(
                "focal lengths must be positive (fx {}, fy {})",
                self.fx, self.fy
            )));
        }
        if self.extrinsic.iter().any(|v| !v.is_finite()) || !self.cx.is_finite() || !self.cy.is_finite() {
            return Err(Error::InvalidCamera("non-finite parameter".into()));
        }
        let r = self.rotation();
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = (0..3).map(|k| r[i][k] * r[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if libm::fabs(d - want) > 1e-6 {
                    return Err(Error::InvalidCamera(
                        "extrinsic rotation is not orthonormal".into(),
                    ));
                }
            }
        }
        let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
        if libm::fabs(det - 1.0) > 1e-6 {
            return Err(Error::InvalidCamera(format!("rotation determinant {det}")));
        }
        let e = &self.extrinsic;
        if libm::fabs(e[12]) > 1e-12
            || libm::fabs(e[13]) > 1e-12
            || libm::fabs(e[14]) > 1e-12
            || libm::fabs(e[15] - 1.0) > 1e-12
        {
            return Err(Error::InvalidCamera("bottom row must be 0 0 0 1".into()));
        }
        Ok(())
    }

    fn rotation(&self) -> [[f64; 3]; 3] {
        let e = &self.extrinsic;
        [[e[0], e[1], e[2]], [e[4], e[5], e[6]], [e[8], e[9], e[10]]]
    }

    fn translation(&self) -> [f64; 3] {
        [self.extrinsic[3], self.extrinsic[7], self.extrinsic[11]]
    }

    pub fn to_camera(&self, p: [f64; 3]) -> [f64; 3] {
        let r = self.rotation();
        let t = self.translation();
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2] + t[i];
        }
        out
    }

    pub fn project_point(&self, p: [f64; 3]) -> Projection {
        let [x, y, z] = self.to_camera(p);
        let u = self.fx * x / z + self.cx;
        let v = self.fy * y / z + self.cy;
        let in_frame = z > 0.0 && u >= 0.0 && u < self.width as f64 && v >= 0.0 && v < self.height as f64;
        Projection {
            u,
            v,
            depth: z,
            in_frame,
        }
    }

    /// Inverse of [`CameraModel::project_point`] for a known depth.
    pub fn back_project(&self, u: f64, v: f64, depth: f64) -> [f64; 3] {
        let cam = [
            (u - self.cx) / self.fx * depth,
            (v - self.cy) / self.fy * depth,
            depth,
        ];
        let r = self.rotation();
        let t = self.translation();
        let d = [cam[0] - t[0], cam[1] - t[1], cam[2] - t[2]];
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = r[0][i] * d[0] + r[1][i] * d[1] + r[2][i] * d[2];
        }
        out
    }

    pub fn project(&self, cloud: &PointCloud) -> Vec<Projection> {
        cloud.points.iter().map(|p| self.project_point(p.xyz())).collect()
    }
}
