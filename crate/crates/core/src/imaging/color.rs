use alloc::format;

use super::{BitMask, Image};
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Hue/saturation/value box. `h_min > h_max` selects a hue interval that
/// wraps through 0 degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HsvRange {
    pub h_min: f64,
    pub h_max: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl HsvRange {
    pub const FULL: HsvRange = HsvRange {
        h_min: 0.0,
        h_max: 360.0,
        s_min: 0.0,
        s_max: 1.0,
        v_min: 0.0,
        v_max: 1.0,
    };

    pub fn new(h: (f64, f64), s: (f64, f64), v: (f64, f64)) -> Result<Self> {
        let r = HsvRange {
            h_min: h.0,
            h_max: h.1,
            s_min: s.0,
            s_max: s.1,
            v_min: v.0,
            v_max: v.1,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let hue_ok = |h: f64| (0.0..=360.0).contains(&h);
        let unit = |a: f64| (0.0..=1.0).contains(&a);
        if !hue_ok(self.h_min) || !hue_ok(self.h_max) {
            return Err(Error::InvalidParameter(format!(
                "hue bounds must lie in [0, 360], got {}..{}",
                self.h_min, self.h_max
            )));
        }
        if !(unit(self.s_min) && unit(self.s_max) && self.s_min <= self.s_max) {
            return Err(Error::InvalidParameter(format!(
                "saturation bounds must be ordered within [0, 1], got {}..{}",
                self.s_min, self.s_max
            )));
        }
        if !(unit(self.v_min) && unit(self.v_max) && self.v_min <= self.v_max) {
            return Err(Error::InvalidParameter(format!(
                "value bounds must be ordered within [0, 1], got {}..{}",
                self.v_min, self.v_max
            )));
        }
        Ok(())
    }

    pub fn contains(&self, (h, s, v): (f64, f64, f64)) -> bool {
        let hue = if self.h_min <= self.h_max {
            self.h_min <= h && h <= self.h_max
        } else {
            h >= self.h_min || h <= self.h_max
        };
        hue && self.s_min <= s && s <= self.s_max && self.v_min <= v && v <= self.v_max
    }

    pub fn contains_rgb(&self, rgb: [u8; 3]) -> bool {
        self.contains(rgb_to_hsv(rgb[0], rgb[1], rgb[2]))
    }
}

/// Hexcone conversion. Hue in degrees `[0, 360)`, 0 for greys.
pub fn rgb_to_hsv(r: u8, g: u8, b: u8) -> (f64, f64, f64) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let v = max as f64 / 255.0;
    if max == 0 {
        return (0.0, 0.0, v);
    }
    let delta = (max - min) as f64;
    let s = delta / max as f64;
    if max == min {
        return (0.0, s, v);
    }
    let (r, g, b) = (r as f64, g as f64, b as f64);
    let sector = if max as f64 == r {
        (g - b) / delta
    } else if max as f64 == g {
        (b - r) / delta + 2.0
    } else {
        (r - g) / delta + 4.0
    };
    let mut h = 60.0 * sector;
    if h < 0.0 {
        h += 360.0;
    }
    (h, s, v)
}

/// Uniform per-channel quantization: bucket `v * levels / 256`, each bucket
/// mapped to the midpoint of the integer values it covers (halves round up).
pub fn quantize_colors(image: &Image, levels: u32) -> Result<Image> {
    if !(1..=256).contains(&levels) {
        return Err(Error::LevelsOutOfRange(levels));
    }
    let mut table = [0u8; 256];
    for (v, slot) in table.iter_mut().enumerate() {
        let bucket = v as u32 * levels / 256;
        let lo = (256 * bucket).div_ceil(levels);
        let hi = (256 * (bucket + 1)).div_ceil(levels) - 1;
        *slot = (lo + hi).div_ceil(2) as u8;
    }
    let mut out = image.clone();
    for s in out.data_mut() {
        *s = table[*s as usize];
    }
    Ok(out)
}

pub fn threshold_hsv(image: &Image, range: &HsvRange) -> Result<BitMask> {
    image.require_channels(3)?;
    Ok(Grid::from_fn(image.width(), image.height(), |x, y| {
        range.contains_rgb(image.rgb(x, y))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn hsv_close(a: (f64, f64, f64), b: (f64, f64, f64)) -> bool {
        let dh = (a.0 - b.0).abs();
        let dh = dh.min(360.0 - dh);
        dh < 1e-9 && (a.1 - b.1).abs() < 1e-9 && (a.2 - b.2).abs() < 1e-9
    }

    #[test]
    fn primaries() {
        assert!(hsv_close(rgb_to_hsv(255, 0, 0), (0.0, 1.0, 1.0)));
        assert!(hsv_close(rgb_to_hsv(0, 255, 0), (120.0, 1.0, 1.0)));
        assert!(hsv_close(rgb_to_hsv(0, 0, 255), (240.0, 1.0, 1.0)));
        let (h, s, v) = rgb_to_hsv(128, 128, 128);
        assert_eq!((h, s), (0.0, 0.0));
        assert!((v - 0.50196).abs() < 1e-5);
        assert_eq!(rgb_to_hsv(0, 0, 0), (0.0, 0.0, 0.0));
    }

    /// Reference conversion written from the textbook case table
    /// (Smith's hexcone), independent of the sector arithmetic above.
    fn reference_hsv(r: u8, g: u8, b: u8) -> (f64, f64, f64) {
        let (r, g, b) = (r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0);
        let max = r.max(g).max(b);
        let min = r.min(g).min(b);
        let c = max - min;
        let h = if c == 0.0 {
            0.0
        } else if max == r {
            60.0 * ((g - b) / c).rem_euclid(6.0)
        } else if max == g {
            60.0 * ((b - r) / c + 2.0)
        } else {
            60.0 * ((r - g) / c + 4.0)
        };
        let s = if max == 0.0 { 0.0 } else { c / max };
        (h, s, max)
    }

    #[test]
    fn matches_reference_on_stride_17_lattice() {
        let mut n = 0;
        for r in (0..=255u16).step_by(17) {
            for g in (0..=255u16).step_by(17) {
                for b in (0..=255u16).step_by(17) {
                    let (r, g, b) = (r as u8, g as u8, b as u8);
                    assert!(
                        hsv_close(rgb_to_hsv(r, g, b), reference_hsv(r, g, b)),
                        "{r} {g} {b}"
                    );
                    n += 1;
                }
            }
        }
        assert_eq!(n, 16 * 16 * 16);
    }

    #[test]
    fn quantize_examples() {
        let img = Image::new(3, 1, 1, vec![100, 0, 255]).unwrap();
        assert_eq!(quantize_colors(&img, 8).unwrap().data(), &[112, 16, 240]);
        assert_eq!(quantize_colors(&img, 2).unwrap().data(), &[64, 64, 192]);
        assert_eq!(quantize_colors(&img, 256).unwrap(), img);
        assert_eq!(quantize_colors(&img, 1).unwrap().data(), &[128, 128, 128]);
        assert_eq!(quantize_colors(&img, 0), Err(Error::LevelsOutOfRange(0)));
        assert_eq!(quantize_colors(&img, 257), Err(Error::LevelsOutOfRange(257)));
    }

    #[test]
    fn quantize_matches_midpoint_formula_for_divisors() {
        for levels in [1u32, 2, 4, 8, 16, 32, 64, 128, 256] {
            for v in 0..=255u32 {
                let bucket = (v * levels / 256) as f64;
                let want = ((bucket + 0.5) * 256.0 / levels as f64 - 0.5)
                    .round()
                    .clamp(0.0, 255.0);
                let img = Image::new(1, 1, 1, vec![v as u8]).unwrap();
                assert_eq!(
                    quantize_colors(&img, levels).unwrap().data()[0] as f64,
                    want,
                    "{v} {levels}"
                );
            }
        }
    }

    #[test]
    fn representative_stays_in_bucket() {
        for levels in 1..=256u32 {
            for v in 0..=255u32 {
                let img = Image::new(1, 1, 1, vec![v as u8]).unwrap();
                let rep = quantize_colors(&img, levels).unwrap().data()[0] as u32;
                assert_eq!(rep * levels / 256, v * levels / 256, "{v} {levels}");
            }
        }
        // non-divisor level counts still split into contiguous buckets
        let img = Image::new(1, 1, 1, vec![47]).unwrap();
        assert_eq!(quantize_colors(&img, 172).unwrap().data(), &[47]);
    }

    proptest! {
        #[test]
        fn quantize_idempotent(v in any::<u8>(), levels in 1u32..=256) {
            let img = Image::new(1, 1, 1, vec![v]).unwrap();
            let once = quantize_colors(&img, levels).unwrap();
            prop_assert_eq!(quantize_colors(&once, levels).unwrap(), once);
        }
    }

    #[test]
    fn threshold_examples() {
        let blue = Image::filled_rgb(4, 4, [0, 0, 255]);
        let blue_range = HsvRange::new((200.0, 260.0), (0.0, 1.0), (0.0, 1.0)).unwrap();
        let red_range = HsvRange::new((350.0, 10.0), (0.0, 1.0), (0.0, 1.0)).unwrap();
        assert_eq!(threshold_hsv(&blue, &blue_range).unwrap().count(), 16);
        assert_eq!(threshold_hsv(&blue, &red_range).unwrap().count(), 0);
        assert_eq!(threshold_hsv(&blue, &HsvRange::FULL).unwrap().count(), 16);
        let red = Image::filled_rgb(2, 2, [255, 10, 0]);
        assert_eq!(threshold_hsv(&red, &red_range).unwrap().count(), 4);
        let grey = Image::new(1, 1, 1, vec![3]).unwrap();
        assert!(matches!(
            threshold_hsv(&grey, &HsvRange::FULL),
            Err(Error::ChannelCount { .. })
        ));
    }

    #[test]
    fn range_validation() {
        assert!(HsvRange::new((0.0, 400.0), (0.0, 1.0), (0.0, 1.0)).is_err());
        assert!(HsvRange::new((0.0, 10.0), (0.8, 0.2), (0.0, 1.0)).is_err());
        assert!(HsvRange::new((0.0, 10.0), (0.0, 1.0), (0.0, 1.5)).is_err());
    }
}
