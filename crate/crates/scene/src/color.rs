/// Linear RGB color with components in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ColorRGB {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl ColorRGB {
    pub const fn new(r: f64, g: f64, b: f64) -> Self {
        ColorRGB { r, g, b }
    }

    pub const BLACK: ColorRGB = ColorRGB::new(0.0, 0.0, 0.0);
    pub const WHITE: ColorRGB = ColorRGB::new(1.0, 1.0, 1.0);

    pub fn clamped(self) -> ColorRGB {
        ColorRGB::new(self.r.clamp(0.0, 1.0), self.g.clamp(0.0, 1.0), self.b.clamp(0.0, 1.0))
    }

    pub fn scaled(self, k: f64) -> ColorRGB {
        ColorRGB::new(self.r * k, self.g * k, self.b * k)
    }
}

/// HSV color. Hue is a fraction of a full turn in `[0, 1)`; saturation and
/// value are in `[0, 1]`. Achromatic colors carry hue 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ColorHSV {
    pub h: f64,
    pub s: f64,
    pub v: f64,
}

impl ColorHSV {
    pub const fn new(h: f64, s: f64, v: f64) -> Self {
        ColorHSV { h, s, v }
    }
}

/// Convert RGB to HSV. Hue comes out in `[0, 1)`; gray inputs (including
/// black) get hue 0 and saturation 0.
pub fn rgb_to_hsv(c: ColorRGB) -> ColorHSV {
    let max = c.r.max(c.g).max(c.b);
    let min = c.r.min(c.g).min(c.b);
    let delta = max - min;
    let v = max;
    let s = if max > 0.0 { delta / max } else { 0.0 };
    let h = if delta <= 0.0 {
        0.0
    } else {
        let sextant = if max == c.r {
            (c.g - c.b) / delta
        } else if max == c.g {
            2.0 + (c.b - c.r) / delta
        } else {
            4.0 + (c.r - c.g) / delta
        };
        (sextant / 6.0).rem_euclid(1.0)
    };
    ColorHSV { h, s, v }
}

/// Convert HSV back to RGB. Hue is taken modulo 1 so shifted hues can be
/// passed in directly.
pub fn hsv_to_rgb(c: ColorHSV) -> ColorRGB {
    let s = c.s.clamp(0.0, 1.0);
    let v = c.v.clamp(0.0, 1.0);
    if s <= 0.0 {
        return ColorRGB::new(v, v, v);
    }
    let h = c.h.rem_euclid(1.0) * 6.0;
    let sector = (h.floor() as usize).min(5);
    let f = h - sector as f64;
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    match sector {
        0 => ColorRGB::new(v, t, p),
        1 => ColorRGB::new(q, v, p),
        2 => ColorRGB::new(p, v, t),
        3 => ColorRGB::new(p, q, v),
        4 => ColorRGB::new(t, p, v),
        _ => ColorRGB::new(v, p, q),
    }
}
