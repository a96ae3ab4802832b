//! Deterministic synthetic scenes with known ground truth, used by tests,
//! the acceptance suite and the command-line demos.

use alloc::vec;
use alloc::vec::Vec;

use crate::autolabel::PartColorRule;
use crate::grid::Grid;
use crate::imaging::{BitMask, HsvRange, Image};
use crate::pointcloud::{CameraModel, Point, PointCloud};
use crate::rng::SplitMix64;

pub const TABLE_RGB: [u8; 3] = [150, 120, 90];
pub const CAP_RGB: [u8; 3] = [210, 40, 40];
pub const BODY_RGB: [u8; 3] = [225, 225, 235];
pub const BLUE_SCREEN: [u8; 3] = [0, 0, 255];
pub const BLACK_SCREEN: [u8; 3] = [0, 0, 0];
pub const SEAL_RGB: [u8; 3] = [200, 40, 40];
pub const PLASTIC_RGB: [u8; 3] = [220, 200, 150];

/// Axis-aligned box resting on the `z = 0` table.
#[derive(Debug, Clone, Copy)]
pub struct BoxSpec {
    pub center: [f64; 2],
    pub size: [f64; 3],
}

impl BoxSpec {
    fn covers(&self, x: f64, y: f64) -> bool {
        (x - self.center[0]).abs() <= self.size[0] / 2.0 && (y - self.center[1]).abs() <= self.size[1] / 2.0
    }
}

#[derive(Debug, Clone)]
pub struct TabletopScene {
    pub cloud: PointCloud,
    /// 0 for table points, `i + 1` for points of box `i`.
    pub truth: Vec<u16>,
    pub boxes: Vec<BoxSpec>,
    pub camera: CameraModel,
    /// Nearest-point render of the cloud through `camera`.
    pub image: Image,
}

/// Red-capped boxes on a table, seen from 0.6 m straight above.
///
/// Table points lie on a 4 mm lattice, box surfaces on a 3 mm lattice; box
/// sides start 1 cm above the table, and table points under a box are
/// omitted. Every coordinate gets Gaussian noise of `noise` metres.
pub fn tabletop_scene(seed: u64, noise: f64) -> TabletopScene {
    let boxes = vec![
        BoxSpec {
            center: [-0.08, 0.0],
            size: [0.06, 0.06, 0.08],
        },
        BoxSpec {
            center: [0.08, 0.02],
            size: [0.05, 0.08, 0.06],
        },
    ];
    let mut rng = SplitMix64::new(seed);
    let mut points = Vec::new();
    let mut truth = Vec::new();
    let mut push = |p: [f64; 3], rgb: [u8; 3], id: u16, rng: &mut SplitMix64| {
        let jitter = [rng.gaussian(), rng.gaussian(), rng.gaussian()];
        points.push(Point::new(
            p[0] + noise * jitter[0],
            p[1] + noise * jitter[1],
            p[2] + noise * jitter[2],
            rgb,
        ));
        truth.push(id);
    };

    let table_step = 0.004;
    for j in 0..=75 {
        for i in 0..=100 {
            let (x, y) = (-0.2 + i as f64 * table_step, -0.15 + j as f64 * table_step);
            if boxes.iter().all(|b| !b.covers(x, y)) {
                push([x, y, 0.0], TABLE_RGB, 0, &mut rng);
            }
        }
    }
    let step = 0.003;
    for (k, b) in boxes.iter().enumerate() {
        let id = k as u16 + 1;
        let [sx, sy, sz] = b.size;
        let (x0, y0) = (b.center[0] - sx / 2.0, b.center[1] - sy / 2.0);
        let (nx, ny) = ((sx / step) as usize, (sy / step) as usize);
        for j in 0..=ny {
            for i in 0..=nx {
                let (x, y) = (x0 + i as f64 * sx / nx as f64, y0 + j as f64 * sy / ny as f64);
                push([x, y, sz], CAP_RGB, id, &mut rng);
            }
        }
        let nz = ((sz - 0.01) / step) as usize;
        for l in 0..nz {
            let z = 0.01 + l as f64 * step;
            for i in 0..=nx {
                let x = x0 + i as f64 * sx / nx as f64;
                push([x, y0, z], BODY_RGB, id, &mut rng);
                push([x, y0 + sy, z], BODY_RGB, id, &mut rng);
            }
            for j in 1..ny {
                let y = y0 + j as f64 * sy / ny as f64;
                push([x0, y, z], BODY_RGB, id, &mut rng);
                push([x0 + sx, y, z], BODY_RGB, id, &mut rng);
            }
        }
    }
    let cloud = PointCloud::new(points);
    let camera = overhead_camera();
    let image = render_points(&cloud, &camera);
    TabletopScene {
        cloud,
        truth,
        boxes,
        camera,
        image,
    }
}

/// 128x96 pinhole camera 0.6 m above the origin looking straight down.
pub fn overhead_camera() -> CameraModel {
    #[rustfmt::skip]
    let extrinsic = [
        1.0, 0.0, 0.0, 0.0,
        0.0, -1.0, 0.0, 0.0,
        0.0, 0.0, -1.0, 0.6,
        0.0, 0.0, 0.0, 1.0,
    ];
    CameraModel::new(128, 96, 200.0, 200.0, 64.0, 48.0, extrinsic).expect("valid camera")
}

/// Colour rules for the tabletop boxes: red caps are `seal`, anything else
/// on an object falls through to the catch-all part.
pub fn cap_rule(seal_part: u16) -> PartColorRule {
    PartColorRule {
        part_id: seal_part,
        hsv_range: HsvRange {
            h_min: 340.0,
            h_max: 20.0,
            s_min: 0.5,
            s_max: 1.0,
            v_min: 0.3,
            v_max: 1.0,
        },
        priority: 1,
    }
}

/// Splats every point onto the pixel nearest its projection, nearest
/// point winning. Unhit pixels are black.
pub fn render_points(cloud: &PointCloud, camera: &CameraModel) -> Image {
    let (w, h) = (camera.width, camera.height);
    let mut depth = vec![f64::INFINITY; w * h];
    let mut image = Image::filled_rgb(w, h, [0, 0, 0]);
    for (p, pr) in cloud.points.iter().zip(camera.project(cloud)) {
        if !pr.in_frame {
            continue;
        }
        // pixel x is centred on u = x
        let (x, y) = (libm::round(pr.u) as usize, libm::round(pr.v) as usize);
        if x >= w || y >= h {
            continue;
        }
        if pr.depth < depth[y * w + x] {
            depth[y * w + x] = pr.depth;
            image.pixel_mut(x, y).copy_from_slice(&p.rgb());
        }
    }
    image
}

#[derive(Debug, Clone, Copy)]
pub struct Disk {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Disk {
    /// Pixel-centre containment; no anti-aliasing.
    pub fn contains(&self, x: usize, y: usize) -> bool {
        let dx = x as f64 + 0.5 - self.center[0];
        let dy = y as f64 + 0.5 - self.center[1];
        dx * dx + dy * dy <= self.radius * self.radius
    }
}

#[derive(Debug, Clone)]
pub struct MonitorScene {
    pub blue: Image,
    pub black: Image,
    pub object: BitMask,
    /// `1` on the upper half of each disk (seal colour), `2` on the lower
    /// half (plastic colour), 0 elsewhere.
    pub half: Grid<u8>,
}

/// Disks whose upper half is seal-red and lower half plastic-beige, drawn
/// on a blue and a black screen. `hole_radius > 0` punches a screen-coloured
/// hole in the middle of every disk.
pub fn monitor_disk_scene(width: usize, height: usize, disks: &[Disk], hole_radius: f64) -> MonitorScene {
    let half = Grid::from_fn(width, height, |x, y| {
        for d in disks {
            let hole = Disk {
                center: d.center,
                radius: hole_radius,
            };
            if d.contains(x, y) && !(hole_radius > 0.0 && hole.contains(x, y)) {
                return if (y as f64 + 0.5) < d.center[1] { 1 } else { 2 };
            }
        }
        0
    });
    let paint = |screen: [u8; 3]| {
        Image::from_fn_rgb(width, height, |x, y| match *half.get(x, y) {
            1 => SEAL_RGB,
            2 => PLASTIC_RGB,
            _ => screen,
        })
    };
    MonitorScene {
        blue: paint(BLUE_SCREEN),
        black: paint(BLACK_SCREEN),
        object: half.map(|&h| h != 0),
        half,
    }
}

/// Deterministic textured background, standing in for a random texture
/// shown on the monitor.
pub fn texture(width: usize, height: usize, seed: u64) -> Image {
    let mut rng = SplitMix64::new(seed);
    let base = [rng.below(256) as u8, rng.below(256) as u8, rng.below(256) as u8];
    let period = 4 + rng.below(12) as usize;
    Image::from_fn_rgb(width, height, |x, y| {
        let stripe = ((x + 2 * y) / period).is_multiple_of(2);
        let mut p = base;
        if stripe {
            for c in &mut p {
                *c = c.wrapping_add(97);
            }
        }
        p
    })
}
