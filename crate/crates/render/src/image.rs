use std::io::{BufWriter, Read, Write};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ImageError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad ppm: {0}")]
    Format(String),
}

/// 8-bit RGB image, row-major from the top-left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

/// Quantize a linear value in `[0,1]` to 8 bits, rounding half up.
pub fn quantize_channel(v: f64) -> u8 {
    let c = (v.clamp(0.0, 1.0) * 255.0 + 0.5).floor();
    c.min(255.0) as u8
}

impl Image {
    pub fn new(width: usize, height: usize) -> Self {
        Image { width, height, data: vec![0; width * height * 3] }
    }

    pub fn from_rgb(width: usize, height: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), width * height * 3);
        Image { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    /// Write as binary PPM (P6).
    pub fn write_ppm(&self, path: &Path) -> Result<(), ImageError> {
        let f = std::fs::File::create(path)?;
        let mut w = BufWriter::new(f);
        write!(w, "P6\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.data)?;
        w.flush()?;
        Ok(())
    }

    /// Read a binary PPM (P6) produced by `write_ppm` (or any conformant
    /// writer with max value 255).
    pub fn read_ppm(path: &Path) -> Result<Image, ImageError> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        Image::parse_ppm(&bytes)
    }

    pub fn parse_ppm(bytes: &[u8]) -> Result<Image, ImageError> {
        struct Cursor<'a> {
            bytes: &'a [u8],
            pos: usize,
        }
        impl Cursor<'_> {
            fn token(&mut self) -> Result<String, ImageError> {
                while self.pos < self.bytes.len() {
                    let b = self.bytes[self.pos];
                    if b.is_ascii_whitespace() {
                        self.pos += 1;
                    } else if b == b'#' {
                        while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                            self.pos += 1;
                        }
                    } else {
                        break;
                    }
                }
                let start = self.pos;
                while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(ImageError::Format("truncated header".into()));
                }
                Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
            }
        }
        let mut cur = Cursor { bytes, pos: 0 };
        if cur.token()? != "P6" {
            return Err(ImageError::Format("not a P6 ppm".into()));
        }
        let width: usize =
            cur.token()?.parse().map_err(|_| ImageError::Format("bad width".into()))?;
        let height: usize =
            cur.token()?.parse().map_err(|_| ImageError::Format("bad height".into()))?;
        let maxval: usize =
            cur.token()?.parse().map_err(|_| ImageError::Format("bad maxval".into()))?;
        if maxval != 255 {
            return Err(ImageError::Format(format!("unsupported maxval {maxval}")));
        }
        let pos = cur.pos + 1; // single whitespace after maxval
        let need = width * height * 3;
        if bytes.len() < pos + need {
            return Err(ImageError::Format("truncated pixel data".into()));
        }
        Ok(Image::from_rgb(width, height, bytes[pos..pos + need].to_vec()))
    }
}
