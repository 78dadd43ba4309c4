//! Checkpoint files: named `f32` parameter tensors plus optional optimizer
//! state, in the project's common binary container (magic `DRFORGE1`, kind
//! tag, little-endian fields, trailing FNV-1a checksum of everything before
//! it).

use crate::tensor::Tensor;
use drforge_scene::fnv1a64;
use std::io::Write as _;
use std::path::Path;

pub const FILE_MAGIC: &[u8; 8] = b"DRFORGE1";
pub const CHECKPOINT_KIND: &[u8; 4] = b"CKPT";

#[derive(Debug, thiserror::Error)]
pub enum CheckpointError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad checkpoint: {0}")]
    Format(String),
}

/// Optimizer moments stored alongside the parameters, in the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimState {
    pub t: u64,
    pub m: Vec<Tensor<f32>>,
    pub v: Vec<Tensor<f32>>,
}

/// A training snapshot: global step, named parameters, optional optimizer
/// state.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub step: u64,
    pub params: Vec<(String, Tensor<f32>)>,
    pub optim: Option<OptimState>,
}

fn put_u32(buf: &mut Vec<u8>, v: u32) {
    buf.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(buf: &mut Vec<u8>, v: u64) {
    buf.extend_from_slice(&v.to_le_bytes());
}

fn put_tensor(buf: &mut Vec<u8>, t: &Tensor<f32>) {
    put_u32(buf, t.shape().len() as u32);
    for &d in t.shape() {
        put_u64(buf, d as u64);
    }
    for &v in t.data() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], CheckpointError> {
        if self.pos + n > self.buf.len() {
            return Err(CheckpointError::Format("truncated file".into()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, CheckpointError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, CheckpointError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn tensor(&mut self) -> Result<Tensor<f32>, CheckpointError> {
        let rank = self.u32()? as usize;
        if rank > 8 {
            return Err(CheckpointError::Format(format!("implausible rank {rank}")));
        }
        let mut shape = Vec::with_capacity(rank);
        for _ in 0..rank {
            shape.push(self.u64()? as usize);
        }
        let numel: usize = shape.iter().product();
        if numel > (1 << 30) {
            return Err(CheckpointError::Format("tensor too large".into()));
        }
        let raw = self.take(numel * 4)?;
        let data = raw.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect();
        Ok(Tensor::from_vec(&shape, data))
    }
}

/// Serialize a checkpoint to bytes (including the trailing checksum).
pub fn encode_checkpoint(ckpt: &Checkpoint) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(FILE_MAGIC);
    buf.extend_from_slice(CHECKPOINT_KIND);
    put_u32(&mut buf, 1); // version
    put_u64(&mut buf, ckpt.step);
    put_u32(&mut buf, ckpt.params.len() as u32);
    for (name, t) in &ckpt.params {
        put_u32(&mut buf, name.len() as u32);
        buf.extend_from_slice(name.as_bytes());
        put_tensor(&mut buf, t);
    }
    match &ckpt.optim {
        None => buf.push(0),
        Some(o) => {
            buf.push(1);
            put_u64(&mut buf, o.t);
            for t in o.m.iter().chain(o.v.iter()) {
                put_tensor(&mut buf, t);
            }
        }
    }
    let sum = fnv1a64(&buf);
    put_u64(&mut buf, sum);
    buf
}

pub fn decode_checkpoint(bytes: &[u8]) -> Result<Checkpoint, CheckpointError> {
    if bytes.len() < FILE_MAGIC.len() + 4 + 8 {
        return Err(CheckpointError::Format("file too short".into()));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().unwrap());
    let computed = fnv1a64(body);
    if stored != computed {
        return Err(CheckpointError::Format(format!(
            "checksum mismatch: stored {stored:016x}, computed {computed:016x}"
        )));
    }
    let mut r = Reader { buf: body, pos: 0 };
    if r.take(8)? != FILE_MAGIC {
        return Err(CheckpointError::Format("bad magic".into()));
    }
    if r.take(4)? != CHECKPOINT_KIND {
        return Err(CheckpointError::Format("not a checkpoint file".into()));
    }
    let version = r.u32()?;
    if version != 1 {
        return Err(CheckpointError::Format(format!("unsupported version {version}")));
    }
    let step = r.u64()?;
    let count = r.u32()? as usize;
    let mut params = Vec::with_capacity(count);
    for _ in 0..count {
        let name_len = r.u32()? as usize;
        if name_len > 4096 {
            return Err(CheckpointError::Format("implausible name length".into()));
        }
        let name = String::from_utf8(r.take(name_len)?.to_vec())
            .map_err(|_| CheckpointError::Format("non-utf8 parameter name".into()))?;
        params.push((name, r.tensor()?));
    }
    let optim = match r.take(1)?[0] {
        0 => None,
        1 => {
            let t = r.u64()?;
            let mut m = Vec::with_capacity(count);
            for _ in 0..count {
                m.push(r.tensor()?);
            }
            let mut v = Vec::with_capacity(count);
            for _ in 0..count {
                v.push(r.tensor()?);
            }
            Some(OptimState { t, m, v })
        }
        x => return Err(CheckpointError::Format(format!("bad optimizer flag {x}"))),
    };
    if r.pos != body.len() {
        return Err(CheckpointError::Format("trailing bytes".into()));
    }
    Ok(Checkpoint { step, params, optim })
}

pub fn save_checkpoint(path: &Path, ckpt: &Checkpoint) -> Result<(), CheckpointError> {
    let bytes = encode_checkpoint(ckpt);
    let mut f = std::fs::File::create(path)?;
    f.write_all(&bytes)?;
    f.sync_all()?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint, CheckpointError> {
    let bytes = std::fs::read(path)?;
    decode_checkpoint(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use drforge_scene::RngStream;

    fn sample_checkpoint() -> Checkpoint {
        let mut rng = RngStream::new(17);
        let t1 = Tensor::from_vec(&[2, 3], (0..6).map(|_| rng.uniform(-1.0, 1.0) as f32).collect());
        let t2 = Tensor::from_vec(&[4], (0..4).map(|_| rng.uniform(-1.0, 1.0) as f32).collect());
        Checkpoint {
            step: 1234,
            params: vec![("enc.w".into(), t1.clone()), ("head.b".into(), t2.clone())],
            optim: Some(OptimState {
                t: 1234,
                m: vec![Tensor::zeros(&[2, 3]), t2.clone()],
                v: vec![t1, Tensor::zeros(&[4])],
            }),
        }
    }

    #[test]
    fn round_trip_preserves_everything() {
        let ckpt = sample_checkpoint();
        let bytes = encode_checkpoint(&ckpt);
        let back = decode_checkpoint(&bytes).unwrap();
        assert_eq!(back, ckpt);
    }

    #[test]
    fn encoding_is_byte_stable() {
        let a = encode_checkpoint(&sample_checkpoint());
        let b = encode_checkpoint(&sample_checkpoint());
        assert_eq!(a, b);
    }

    #[test]
    fn corruption_is_detected() {
        let mut bytes = encode_checkpoint(&sample_checkpoint());
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0x40;
        match decode_checkpoint(&bytes) {
            Err(CheckpointError::Format(msg)) => assert!(msg.contains("checksum")),
            other => panic!("expected checksum failure, got {other:?}"),
        }
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let mut bytes = encode_checkpoint(&sample_checkpoint());
        // Overwrite the kind tag and fix up the checksum.
        bytes[8..12].copy_from_slice(b"EPIS");
        let body_len = bytes.len() - 8;
        let sum = fnv1a64(&bytes[..body_len]);
        let at = bytes.len() - 8;
        bytes[at..].copy_from_slice(&sum.to_le_bytes());
        match decode_checkpoint(&bytes) {
            Err(CheckpointError::Format(msg)) => assert!(msg.contains("not a checkpoint")),
            other => panic!("expected kind failure, got {other:?}"),
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.ckpt");
        let ckpt = sample_checkpoint();
        save_checkpoint(&path, &ckpt).unwrap();
        let back = load_checkpoint(&path).unwrap();
        assert_eq!(back, ckpt);
    }
}
