//! Procedural texture synthesis: four families of 256x256 RGB textures with
//! randomized colors and parameters.

use drforge_render::Texture;
use drforge_scene::{ColorRGB, RngStream};

pub const TEXTURE_SIZE: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextureKind {
    Checkers,
    Gradient,
    Noise,
    Plain,
}

impl TextureKind {
    pub const ALL: [TextureKind; 4] =
        [TextureKind::Checkers, TextureKind::Gradient, TextureKind::Noise, TextureKind::Plain];
}

fn random_color(rng: &mut RngStream) -> ColorRGB {
    ColorRGB::new(rng.next_f64(), rng.next_f64(), rng.next_f64())
}

fn lerp(a: ColorRGB, b: ColorRGB, t: f64) -> [f32; 3] {
    [
        (a.r + (b.r - a.r) * t) as f32,
        (a.g + (b.g - a.g) * t) as f32,
        (a.b + (b.b - a.b) * t) as f32,
    ]
}

/// Synthesize one texture. Draw order: two palette colors, then the
/// per-kind parameters, then (noise only) one draw per texel in row-major
/// order.
pub fn procedural_texture(kind: TextureKind, rng: &mut RngStream) -> Texture {
    let n = TEXTURE_SIZE;
    let c0 = random_color(rng);
    let c1 = random_color(rng);
    let mut texels = vec![[0f32; 3]; n * n];
    match kind {
        TextureKind::Plain => {
            for t in texels.iter_mut() {
                *t = [c0.r as f32, c0.g as f32, c0.b as f32];
            }
        }
        TextureKind::Checkers => {
            let cell = [8usize, 16, 32][rng.index(3)];
            for y in 0..n {
                for x in 0..n {
                    let parity = (x / cell + y / cell) % 2;
                    let c = if parity == 0 { c0 } else { c1 };
                    texels[y * n + x] = [c.r as f32, c.g as f32, c.b as f32];
                }
            }
        }
        TextureKind::Gradient => {
            // Linear ramp between the two palette colors along a random
            // direction.
            let angle = rng.uniform(0.0, std::f64::consts::TAU);
            let (dx, dy) = (angle.cos(), angle.sin());
            for y in 0..n {
                for x in 0..n {
                    let u = x as f64 / (n - 1) as f64 - 0.5;
                    let v = y as f64 / (n - 1) as f64 - 0.5;
                    let t = ((u * dx + v * dy) / std::f64::consts::SQRT_2 + 0.5).clamp(0.0, 1.0);
                    texels[y * n + x] = lerp(c0, c1, t);
                }
            }
        }
        TextureKind::Noise => {
            for t in texels.iter_mut() {
                *t = lerp(c0, c1, rng.next_f64());
            }
        }
    }
    Texture::new(n, n, texels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_is_constant() {
        let mut rng = RngStream::new(4).child_named("tex");
        let t = procedural_texture(TextureKind::Plain, &mut rng);
        let first = t.texel(0, 0);
        for y in 0..TEXTURE_SIZE {
            for x in 0..TEXTURE_SIZE {
                assert_eq!(t.texel(x, y), first);
            }
        }
    }

    #[test]
    fn checkers_follows_cell_parity() {
        let mut rng = RngStream::new(11).child_named("tex");
        let t = procedural_texture(TextureKind::Checkers, &mut rng);
        // Recover the cell size from the first row color change.
        let first = t.texel(0, 0);
        let cell = (1..TEXTURE_SIZE).find(|&x| t.texel(x, 0) != first).unwrap();
        assert!([8, 16, 32].contains(&cell), "cell size {cell}");
        for (x, y) in [(0, 0), (cell, 0), (cell, cell), (2 * cell, 0), (0, 2 * cell)] {
            let parity = (x / cell + y / cell) % 2;
            let expect = if parity == 0 { first } else { t.texel(cell, 0) };
            assert_eq!(t.texel(x, y), expect, "at ({x},{y})");
        }
    }

    #[test]
    fn noise_is_bounded_and_nondegenerate() {
        let mut rng = RngStream::new(21).child_named("tex");
        let t = procedural_texture(TextureKind::Noise, &mut rng);
        let mut mean = 0.0f64;
        let mut mean_sq = 0.0f64;
        let count = (TEXTURE_SIZE * TEXTURE_SIZE) as f64;
        for y in 0..TEXTURE_SIZE {
            for x in 0..TEXTURE_SIZE {
                let texel = t.texel(x, y);
                for c in texel {
                    assert!((0.0..=1.0).contains(&(c as f64)));
                }
                let lum = texel.iter().map(|c| *c as f64).sum::<f64>() / 3.0;
                mean += lum;
                mean_sq += lum * lum;
            }
        }
        mean /= count;
        let var = mean_sq / count - mean * mean;
        assert!(var > 1e-4, "noise variance {var} is degenerate");
    }

    #[test]
    fn same_stream_reproduces_the_texture() {
        for kind in TextureKind::ALL {
            let a = procedural_texture(kind, &mut RngStream::new(7).child_named("tex"));
            let b = procedural_texture(kind, &mut RngStream::new(7).child_named("tex"));
            for y in (0..TEXTURE_SIZE).step_by(17) {
                for x in (0..TEXTURE_SIZE).step_by(13) {
                    assert_eq!(a.texel(x, y), b.texel(x, y));
                }
            }
        }
    }
}
