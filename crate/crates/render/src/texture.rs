use drforge_scene::ColorRGB;

/// Tiled RGB texture with bilinear sampling. Texel values are linear color in
/// `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Texture {
    width: usize,
    height: usize,
    texels: Vec<[f32; 3]>,
}

impl Texture {
    pub fn new(width: usize, height: usize, texels: Vec<[f32; 3]>) -> Self {
        assert!(width > 0 && height > 0);
        assert_eq!(texels.len(), width * height);
        Texture { width, height, texels }
    }

    pub fn solid(color: ColorRGB) -> Self {
        Texture::new(1, 1, vec![[color.r as f32, color.g as f32, color.b as f32]])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn texel(&self, x: usize, y: usize) -> [f32; 3] {
        self.texels[y % self.height * self.width + x % self.width]
    }

    /// Bilinear sample with wrap-around tiling. `u`/`v` are in tile units:
    /// one unit spans the full texture once.
    pub fn sample(&self, u: f64, v: f64) -> ColorRGB {
        let x = u * self.width as f64 - 0.5;
        let y = v * self.height as f64 - 0.5;
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = x - x0;
        let fy = y - y0;
        let xi = (x0.rem_euclid(self.width as f64)) as usize % self.width;
        let yi = (y0.rem_euclid(self.height as f64)) as usize % self.height;
        let xj = (xi + 1) % self.width;
        let yj = (yi + 1) % self.height;
        let t00 = self.texels[yi * self.width + xi];
        let t10 = self.texels[yi * self.width + xj];
        let t01 = self.texels[yj * self.width + xi];
        let t11 = self.texels[yj * self.width + xj];
        let mut out = [0.0f64; 3];
        for (c, o) in out.iter_mut().enumerate() {
            let top = t00[c] as f64 * (1.0 - fx) + t10[c] as f64 * fx;
            let bot = t01[c] as f64 * (1.0 - fx) + t11[c] as f64 * fx;
            *o = top * (1.0 - fy) + bot * fy;
        }
        ColorRGB::new(out[0], out[1], out[2])
    }
}
