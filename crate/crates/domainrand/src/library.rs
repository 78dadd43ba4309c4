//! Texture sources for surface randomization: loaded asset directories and
//! deterministic bundled sets synthesized from the procedural families.

use crate::error::DomainRandError;
use crate::texture_gen::{procedural_texture, TextureKind};
use drforge_render::{Image, Texture};
use drforge_scene::RngStream;
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct TextureLibrary {
    textures: Vec<Arc<Texture>>,
    /// Procedural families used when a config asks for fresh textures.
    kinds: Vec<TextureKind>,
}

pub const BUNDLED_TEXTURE_COUNT: usize = 64;
pub const HELD_OUT_TEXTURE_COUNT: usize = 16;

fn synthesize(label: &str, count: usize) -> Vec<Arc<Texture>> {
    let root = RngStream::new(0).child_named(label);
    (0..count)
        .map(|i| {
            let kind = TextureKind::ALL[i % TextureKind::ALL.len()];
            let mut rng = root.child(i as u64);
            Arc::new(procedural_texture(kind, &mut rng))
        })
        .collect()
}

impl TextureLibrary {
    pub fn new(textures: Vec<Arc<Texture>>) -> TextureLibrary {
        TextureLibrary { textures, kinds: TextureKind::ALL.to_vec() }
    }

    /// An empty library: only procedural sampling works.
    pub fn empty() -> TextureLibrary {
        TextureLibrary::new(Vec::new())
    }

    /// 64 deterministic bundled textures cycling through the procedural
    /// families, so the pipeline runs without external downloads.
    pub fn bundled() -> TextureLibrary {
        TextureLibrary::new(synthesize("bundled-textures", BUNDLED_TEXTURE_COUNT))
    }

    /// 16 deterministic textures disjoint from `bundled()`, reserved for
    /// held-out evaluation domains.
    pub fn bundled_held_out() -> TextureLibrary {
        TextureLibrary::new(synthesize("held-out-textures", HELD_OUT_TEXTURE_COUNT))
    }

    /// Load every PNG/PPM in a directory (sorted by file name for
    /// determinism).
    pub fn from_dir(dir: &Path) -> Result<TextureLibrary, DomainRandError> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(|e| DomainRandError::TextureDir(dir.display().to_string(), e.to_string()))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| {
                matches!(
                    p.extension().and_then(|e| e.to_str()),
                    Some("png") | Some("ppm") | Some("PNG") | Some("PPM")
                )
            })
            .collect();
        paths.sort();
        let mut textures = Vec::new();
        for path in paths {
            textures.push(Arc::new(load_texture(&path)?));
        }
        Ok(TextureLibrary::new(textures))
    }

    pub fn len(&self) -> usize {
        self.textures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.textures.is_empty()
    }

    pub fn textures(&self) -> &[Arc<Texture>] {
        &self.textures
    }

    /// Uniform draw from the loaded assets.
    pub fn sample_asset(&self, rng: &mut RngStream) -> Result<Arc<Texture>, DomainRandError> {
        if self.textures.is_empty() {
            return Err(DomainRandError::EmptyTextureLibrary);
        }
        Ok(Arc::clone(&self.textures[rng.index(self.textures.len())]))
    }

    /// Fresh procedural texture from a uniformly drawn registered family.
    pub fn sample_procedural(&self, rng: &mut RngStream) -> Arc<Texture> {
        let kind = self.kinds[rng.index(self.kinds.len())];
        Arc::new(procedural_texture(kind, rng))
    }
}

fn load_texture(path: &Path) -> Result<Texture, DomainRandError> {
    let fail = |e: String| DomainRandError::TextureDir(path.display().to_string(), e);
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    if ext == "ppm" {
        let img = Image::read_ppm(path).map_err(|e| fail(e.to_string()))?;
        return Ok(image_to_texture(&img));
    }
    let decoded = image::open(path).map_err(|e| fail(e.to_string()))?.into_rgb8();
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let texels = decoded
        .pixels()
        .map(|p| [p.0[0] as f32 / 255.0, p.0[1] as f32 / 255.0, p.0[2] as f32 / 255.0])
        .collect();
    Ok(Texture::new(w, h, texels))
}

fn image_to_texture(img: &Image) -> Texture {
    let (w, h) = (img.width(), img.height());
    let mut texels = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let [r, g, b] = img.pixel(x, y);
            texels.push([r as f32 / 255.0, g as f32 / 255.0, b as f32 / 255.0]);
        }
    }
    Texture::new(w, h, texels)
}
