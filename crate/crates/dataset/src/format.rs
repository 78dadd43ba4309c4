//! Binary on-disk formats. Every file is:
//!
//! ```text
//! magic "DRFORGE1" | kind (4 bytes) | version u32 | header | records | fnv1a64 u64
//! ```
//!
//! all little-endian, with the trailing checksum covering every byte before
//! it. Episode files (kind `EPIS`) store one demonstration each; proxy
//! shards (kind `PROX`) store a block of localization samples.

use crate::error::DatasetError;
use drforge_render::Image;
use drforge_scene::fnv1a64;
use drforge_world::TaskId;

pub const FORMAT_MAGIC: &[u8; 8] = b"DRFORGE1";
pub const FORMAT_VERSION: u32 = 1;
pub const EPISODE_KIND: &[u8; 4] = b"EPIS";
pub const PROXY_KIND: &[u8; 4] = b"PROX";

/// magic + kind + version + task + width + height + root_seed +
/// episode_index + dr_digest + n_steps
pub const EPISODE_HEADER_LEN: usize = 8 + 4 + 4 + 4 + 4 + 4 + 8 + 8 + 8 + 4;
/// magic + kind + version + width + height + root_seed + first_sample +
/// dr_digest + n_records
pub const PROXY_HEADER_LEN: usize = 8 + 4 + 4 + 4 + 4 + 8 + 8 + 8 + 4;

/// Two raw frames + 5 proprio floats + 7 action floats.
pub fn episode_record_len(width: usize, height: usize) -> usize {
    2 * width * height * 3 + 4 * (5 + 7)
}

/// Two raw frames + 9 target floats.
pub fn proxy_record_len(width: usize, height: usize) -> usize {
    2 * width * height * 3 + 4 * 9
}

pub fn task_to_u32(task: TaskId) -> u32 {
    TaskId::ALL.iter().position(|t| *t == task).expect("task in ALL") as u32
}

pub fn task_from_u32(raw: u32) -> Option<TaskId> {
    TaskId::ALL.get(raw as usize).copied()
}

pub fn task_from_name(name: &str) -> Option<TaskId> {
    TaskId::ALL.iter().copied().find(|t| t.name() == name)
}

/// One expert step: the two rendered views of the state, the gripper
/// proprioception `[x, y, z, sin yaw, cos yaw]`, and the action taken
/// `[vx, vy, vz, wx, wy, wz, g]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub views: [Image; 2],
    pub proprio: [f32; 5],
    pub action: [f32; 7],
}

/// A full decoded demonstration.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeData {
    pub task: TaskId,
    pub width: usize,
    pub height: usize,
    pub root_seed: u64,
    pub episode_index: u64,
    pub dr_digest: u64,
    pub steps: Vec<StepRecord>,
}

/// One localization sample: two views plus the three cube offsets from the
/// gripper tip in robot-base axes, ordered green, red, yellow.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxySample {
    pub views: [Image; 2],
    pub targets: [f32; 9],
}

/// A decoded proxy shard.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxyShard {
    pub width: usize,
    pub height: usize,
    pub root_seed: u64,
    pub first_sample: u64,
    pub dr_digest: u64,
    pub samples: Vec<ProxySample>,
}

fn put_u32(buf: &mut Vec<u8>, v: u32) {
    buf.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(buf: &mut Vec<u8>, v: u64) {
    buf.extend_from_slice(&v.to_le_bytes());
}

fn put_f32s(buf: &mut Vec<u8>, vals: &[f32]) {
    for v in vals {
        buf.extend_from_slice(&v.to_le_bytes());
    }
}

/// Append the trailing checksum of everything currently in `buf`.
fn seal(mut buf: Vec<u8>) -> Vec<u8> {
    let sum = fnv1a64(&buf);
    put_u64(&mut buf, sum);
    buf
}

pub fn encode_episode(e: &EpisodeData) -> Vec<u8> {
    let rec = episode_record_len(e.width, e.height);
    let mut buf = Vec::with_capacity(EPISODE_HEADER_LEN + rec * e.steps.len() + 8);
    buf.extend_from_slice(FORMAT_MAGIC);
    buf.extend_from_slice(EPISODE_KIND);
    put_u32(&mut buf, FORMAT_VERSION);
    put_u32(&mut buf, task_to_u32(e.task));
    put_u32(&mut buf, e.width as u32);
    put_u32(&mut buf, e.height as u32);
    put_u64(&mut buf, e.root_seed);
    put_u64(&mut buf, e.episode_index);
    put_u64(&mut buf, e.dr_digest);
    put_u32(&mut buf, e.steps.len() as u32);
    for step in &e.steps {
        for view in &step.views {
            debug_assert_eq!((view.width(), view.height()), (e.width, e.height));
            buf.extend_from_slice(view.data());
        }
        put_f32s(&mut buf, &step.proprio);
        put_f32s(&mut buf, &step.action);
    }
    seal(buf)
}

pub fn encode_proxy_shard(s: &ProxyShard) -> Vec<u8> {
    let rec = proxy_record_len(s.width, s.height);
    let mut buf = Vec::with_capacity(PROXY_HEADER_LEN + rec * s.samples.len() + 8);
    buf.extend_from_slice(FORMAT_MAGIC);
    buf.extend_from_slice(PROXY_KIND);
    put_u32(&mut buf, FORMAT_VERSION);
    put_u32(&mut buf, s.width as u32);
    put_u32(&mut buf, s.height as u32);
    put_u64(&mut buf, s.root_seed);
    put_u64(&mut buf, s.first_sample);
    put_u64(&mut buf, s.dr_digest);
    put_u32(&mut buf, s.samples.len() as u32);
    for sample in &s.samples {
        for view in &sample.views {
            debug_assert_eq!((view.width(), view.height()), (s.width, s.height));
            buf.extend_from_slice(view.data());
        }
        put_f32s(&mut buf, &sample.targets);
    }
    seal(buf)
}

pub(crate) struct Reader<'a> {
    pub buf: &'a [u8],
    pub pos: usize,
    pub file: String,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8], file: &str) -> Reader<'a> {
        Reader { buf, pos: 0, file: file.to_string() }
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8], DatasetError> {
        if self.pos + n > self.buf.len() {
            return Err(DatasetError::TruncatedFile { file: self.file.clone() });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn u32(&mut self) -> Result<u32, DatasetError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64, DatasetError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn f32s<const N: usize>(&mut self) -> Result<[f32; N], DatasetError> {
        let raw = self.take(4 * N)?;
        let mut out = [0.0f32; N];
        for (i, chunk) in raw.chunks_exact(4).enumerate() {
            out[i] = f32::from_le_bytes(chunk.try_into().unwrap());
        }
        Ok(out)
    }

    pub fn image(&mut self, width: usize, height: usize) -> Result<Image, DatasetError> {
        let raw = self.take(width * height * 3)?;
        Ok(Image::from_rgb(width, height, raw.to_vec()))
    }

    pub fn format_err(&self, reason: impl Into<String>) -> DatasetError {
        DatasetError::Format { file: self.file.clone(), reason: reason.into() }
    }
}

/// Verify magic/kind/version and the trailing checksum; return a reader
/// positioned after the version field, limited to the checksummed region.
pub(crate) fn open_container<'a>(
    bytes: &'a [u8],
    kind: &[u8; 4],
    file: &str,
) -> Result<Reader<'a>, DatasetError> {
    if bytes.len() < 16 + 8 {
        return Err(DatasetError::TruncatedFile { file: file.to_string() });
    }
    let body = &bytes[..bytes.len() - 8];
    let stored = u64::from_le_bytes(bytes[bytes.len() - 8..].try_into().unwrap());
    let computed = fnv1a64(body);
    if stored != computed {
        return Err(DatasetError::ChecksumMismatch { file: file.to_string(), stored, computed });
    }
    let mut r = Reader::new(body, file);
    if r.take(8)? != FORMAT_MAGIC {
        return Err(r.format_err("bad magic (not a DRFORGE1 file)"));
    }
    if r.take(4)? != kind {
        return Err(r.format_err(format!(
            "wrong kind (expected {})",
            String::from_utf8_lossy(kind)
        )));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(DatasetError::VersionMismatch {
            file: file.to_string(),
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    Ok(r)
}

/// Episode-file header fields (everything before the records).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpisodeHeader {
    pub task: TaskId,
    pub width: usize,
    pub height: usize,
    pub root_seed: u64,
    pub episode_index: u64,
    pub dr_digest: u64,
    pub n_steps: usize,
}

/// Proxy-shard header fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProxyHeader {
    pub width: usize,
    pub height: usize,
    pub root_seed: u64,
    pub first_sample: u64,
    pub dr_digest: u64,
    pub n_samples: usize,
}

/// Check magic/kind/version and position a reader after them. Unlike
/// `open_container` this does not verify the trailing checksum, so it works
/// on a header-sized prefix of the file.
fn open_header<'a>(
    bytes: &'a [u8],
    kind: &[u8; 4],
    file: &str,
) -> Result<Reader<'a>, DatasetError> {
    let mut r = Reader::new(bytes, file);
    if r.take(8)? != FORMAT_MAGIC {
        return Err(r.format_err("bad magic (not a DRFORGE1 file)"));
    }
    if r.take(4)? != kind {
        return Err(r.format_err(format!(
            "wrong kind (expected {})",
            String::from_utf8_lossy(kind)
        )));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(DatasetError::VersionMismatch {
            file: file.to_string(),
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    Ok(r)
}

fn episode_header_fields(r: &mut Reader<'_>) -> Result<EpisodeHeader, DatasetError> {
    let task_raw = r.u32()?;
    let task = task_from_u32(task_raw).ok_or_else(|| r.format_err("unknown task id"))?;
    Ok(EpisodeHeader {
        task,
        width: r.u32()? as usize,
        height: r.u32()? as usize,
        root_seed: r.u64()?,
        episode_index: r.u64()?,
        dr_digest: r.u64()?,
        n_steps: r.u32()? as usize,
    })
}

fn proxy_header_fields(r: &mut Reader<'_>) -> Result<ProxyHeader, DatasetError> {
    Ok(ProxyHeader {
        width: r.u32()? as usize,
        height: r.u32()? as usize,
        root_seed: r.u64()?,
        first_sample: r.u64()?,
        dr_digest: r.u64()?,
        n_samples: r.u32()? as usize,
    })
}

/// Parse an episode header from (at least) the first `EPISODE_HEADER_LEN`
/// bytes of the file. The checksum is not verified.
pub fn parse_episode_header(bytes: &[u8], file: &str) -> Result<EpisodeHeader, DatasetError> {
    episode_header_fields(&mut open_header(bytes, EPISODE_KIND, file)?)
}

/// Parse a proxy-shard header from (at least) the first `PROXY_HEADER_LEN`
/// bytes of the file. The checksum is not verified.
pub fn parse_proxy_header(bytes: &[u8], file: &str) -> Result<ProxyHeader, DatasetError> {
    proxy_header_fields(&mut open_header(bytes, PROXY_KIND, file)?)
}

pub(crate) fn parse_step_record(
    r: &mut Reader<'_>,
    width: usize,
    height: usize,
) -> Result<StepRecord, DatasetError> {
    let v0 = r.image(width, height)?;
    let v1 = r.image(width, height)?;
    let proprio = r.f32s::<5>()?;
    let action = r.f32s::<7>()?;
    Ok(StepRecord { views: [v0, v1], proprio, action })
}

pub(crate) fn parse_proxy_sample(
    r: &mut Reader<'_>,
    width: usize,
    height: usize,
) -> Result<ProxySample, DatasetError> {
    let v0 = r.image(width, height)?;
    let v1 = r.image(width, height)?;
    let targets = r.f32s::<9>()?;
    Ok(ProxySample { views: [v0, v1], targets })
}

pub fn decode_episode(bytes: &[u8], file: &str) -> Result<EpisodeData, DatasetError> {
    let mut r = open_container(bytes, EPISODE_KIND, file)?;
    let h = episode_header_fields(&mut r)?;
    let expected = h.n_steps * episode_record_len(h.width, h.height);
    if r.buf.len() - r.pos != expected {
        return Err(r.format_err(format!(
            "record area is {} bytes, expected {expected} for {} steps",
            r.buf.len() - r.pos,
            h.n_steps
        )));
    }
    let mut steps = Vec::with_capacity(h.n_steps);
    for _ in 0..h.n_steps {
        steps.push(parse_step_record(&mut r, h.width, h.height)?);
    }
    Ok(EpisodeData {
        task: h.task,
        width: h.width,
        height: h.height,
        root_seed: h.root_seed,
        episode_index: h.episode_index,
        dr_digest: h.dr_digest,
        steps,
    })
}

pub fn decode_proxy_shard(bytes: &[u8], file: &str) -> Result<ProxyShard, DatasetError> {
    let mut r = open_container(bytes, PROXY_KIND, file)?;
    let h = proxy_header_fields(&mut r)?;
    let expected = h.n_samples * proxy_record_len(h.width, h.height);
    if r.buf.len() - r.pos != expected {
        return Err(r.format_err(format!(
            "record area is {} bytes, expected {expected} for {} samples",
            r.buf.len() - r.pos,
            h.n_samples
        )));
    }
    let mut samples = Vec::with_capacity(h.n_samples);
    for _ in 0..h.n_samples {
        samples.push(parse_proxy_sample(&mut r, h.width, h.height)?);
    }
    Ok(ProxyShard {
        width: h.width,
        height: h.height,
        root_seed: h.root_seed,
        first_sample: h.first_sample,
        dr_digest: h.dr_digest,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_image(seed: u8) -> Image {
        let mut img = Image::new(4, 3);
        for y in 0..3 {
            for x in 0..4 {
                img.set_pixel(x, y, [seed.wrapping_add((x + 4 * y) as u8), seed, 7]);
            }
        }
        img
    }

    fn sample_episode() -> EpisodeData {
        EpisodeData {
            task: TaskId::Pushing,
            width: 4,
            height: 3,
            root_seed: 99,
            episode_index: 5,
            dr_digest: 0xDEAD,
            steps: (0..4)
                .map(|t| StepRecord {
                    views: [tiny_image(t as u8), tiny_image(100 + t as u8)],
                    proprio: [0.1, 0.2, 0.3, 0.0, 1.0],
                    action: [0.0, 0.1, 0.0, 0.0, 0.0, 0.5, 1.0],
                })
                .collect(),
        }
    }

    #[test]
    fn episode_roundtrip_is_identity() {
        let e = sample_episode();
        let bytes = encode_episode(&e);
        let back = decode_episode(&bytes, "test").unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn flipped_byte_fails_the_checksum() {
        let mut bytes = encode_episode(&sample_episode());
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0x40;
        let err = decode_episode(&bytes, "test").unwrap_err();
        assert!(matches!(err, DatasetError::ChecksumMismatch { .. }), "{err}");
    }

    #[test]
    fn truncation_and_version_are_detected() {
        let bytes = encode_episode(&sample_episode());
        let err = decode_episode(&bytes[..10], "test").unwrap_err();
        assert!(matches!(err, DatasetError::TruncatedFile { .. }));

        // Bump the version field (offset 12) and re-seal.
        let mut bumped = bytes[..bytes.len() - 8].to_vec();
        bumped[12] = 2;
        let sum = drforge_scene::fnv1a64(&bumped);
        bumped.extend_from_slice(&sum.to_le_bytes());
        let err = decode_episode(&bumped, "test").unwrap_err();
        assert!(matches!(err, DatasetError::VersionMismatch { found: 2, .. }));
    }

    #[test]
    fn proxy_shard_roundtrip_is_identity() {
        let shard = ProxyShard {
            width: 4,
            height: 3,
            root_seed: 1,
            first_sample: 2000,
            dr_digest: 42,
            samples: (0..3)
                .map(|i| ProxySample {
                    views: [tiny_image(i as u8), tiny_image(50 + i as u8)],
                    targets: [0.01 * i as f32; 9],
                })
                .collect(),
        };
        let bytes = encode_proxy_shard(&shard);
        assert_eq!(decode_proxy_shard(&bytes, "test").unwrap(), shard);
        // Episode decoder refuses proxy shards.
        assert!(matches!(
            decode_episode(&bytes, "test").unwrap_err(),
            DatasetError::Format { .. }
        ));
    }

    #[test]
    fn record_len_constants_match_the_encoder() {
        let e = sample_episode();
        let bytes = encode_episode(&e);
        assert_eq!(
            bytes.len(),
            EPISODE_HEADER_LEN + e.steps.len() * episode_record_len(4, 3) + 8
        );
    }
}
