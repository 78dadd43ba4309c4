//! `manifest.txt`: the human-readable index written last into every dataset
//! directory. It records what was generated (kind, task, resolution, seed,
//! counts), the exact randomization config, and a checksum per data file, so
//! a dataset can be verified end to end without decoding every record.

use crate::drconfig_io::{dr_from_kv, dr_to_sections};
use crate::error::DatasetError;
use crate::kvfile::{KvFile, KvSection};
use drforge_domainrand::DRConfig;
use drforge_world::TaskId;

pub const MANIFEST_NAME: &str = "manifest.txt";
pub const DATASET_SECTION: &str = "dataset";
pub const FILES_SECTION: &str = "files";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    Episodes,
    Proxy,
}

impl DatasetKind {
    pub fn name(self) -> &'static str {
        match self {
            DatasetKind::Episodes => "episodes",
            DatasetKind::Proxy => "proxy",
        }
    }
}

/// Parsed manifest. `records` counts episodes or samples depending on
/// `kind`; `total_steps` and `task` are episode-only, `shard_size` is
/// proxy-only (0 when not applicable).
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub kind: DatasetKind,
    pub task: Option<TaskId>,
    pub width: usize,
    pub height: usize,
    pub root_seed: u64,
    pub records: u64,
    pub total_steps: u64,
    pub shard_size: u64,
    pub dr: DRConfig,
    /// `(file name, fnv1a64 of the complete file)`, sorted by name.
    pub files: Vec<(String, u64)>,
}

impl Manifest {
    pub fn to_text(&self) -> String {
        let mut ds = KvSection::new(DATASET_SECTION);
        ds.push("kind", self.kind.name());
        if let Some(task) = self.task {
            ds.push("task", task.name());
        }
        ds.push("width", self.width);
        ds.push("height", self.height);
        ds.push("root_seed", self.root_seed);
        match self.kind {
            DatasetKind::Episodes => {
                ds.push("episodes", self.records);
                ds.push("steps", self.total_steps);
            }
            DatasetKind::Proxy => {
                ds.push("samples", self.records);
                ds.push("shard_size", self.shard_size);
            }
        }
        let mut files = KvSection::new(FILES_SECTION);
        for (name, digest) in &self.files {
            files.push(name, format!("{digest:016x}"));
        }
        let mut sections = vec![ds];
        sections.extend(dr_to_sections(&self.dr));
        sections.push(files);
        KvFile { sections }.to_text()
    }

    pub fn parse(text: &str) -> Result<Manifest, DatasetError> {
        let kv = KvFile::parse(text)?;
        let ds = kv.require_section(DATASET_SECTION)?;
        let kind = match ds.require("kind")? {
            "episodes" => DatasetKind::Episodes,
            "proxy" => DatasetKind::Proxy,
            other => return Err(ds.bad_value("kind", other)),
        };
        let allowed: &[&str] = match kind {
            DatasetKind::Episodes => {
                &["kind", "task", "width", "height", "root_seed", "episodes", "steps"]
            }
            DatasetKind::Proxy => {
                &["kind", "width", "height", "root_seed", "samples", "shard_size"]
            }
        };
        ds.reject_unknown(allowed)?;
        let (task, records, total_steps, shard_size) = match kind {
            DatasetKind::Episodes => {
                let raw = ds.require("task")?;
                let task = TaskId::parse(raw).ok_or_else(|| ds.bad_value("task", raw))?;
                (Some(task), ds.parse("episodes")?, ds.parse("steps")?, 0)
            }
            DatasetKind::Proxy => (None, ds.parse("samples")?, 0, ds.parse("shard_size")?),
        };
        let mut files = Vec::new();
        for (name, hex) in &kv.require_section(FILES_SECTION)?.entries {
            let digest = u64::from_str_radix(hex, 16)
                .map_err(|_| kv.require_section(FILES_SECTION).unwrap().bad_value(name, hex))?;
            files.push((name.clone(), digest));
        }
        Ok(Manifest {
            kind,
            task,
            width: ds.parse("width")?,
            height: ds.parse("height")?,
            root_seed: ds.parse("root_seed")?,
            records,
            total_steps,
            shard_size,
            dr: dr_from_kv(&kv)?,
            files,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_manifest() -> Manifest {
        Manifest {
            kind: DatasetKind::Episodes,
            task: Some(TaskId::Sweeping),
            width: 120,
            height: 90,
            root_seed: 7,
            records: 12,
            total_steps: 640,
            shard_size: 0,
            dr: DRConfig::full(),
            files: vec![
                ("episode-000000.drf".into(), 0x0123456789abcdef),
                ("episode-000001.drf".into(), 0xfedcba9876543210),
            ],
        }
    }

    #[test]
    fn manifest_roundtrips_through_text() {
        let m = demo_manifest();
        let back = Manifest::parse(&m.to_text()).unwrap();
        assert_eq!(back, m);

        let p = Manifest {
            kind: DatasetKind::Proxy,
            task: None,
            total_steps: 0,
            shard_size: 1000,
            records: 2500,
            files: vec![("proxy-00000.drf".into(), 17)],
            ..demo_manifest()
        };
        assert_eq!(Manifest::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn unknown_dataset_keys_are_rejected() {
        let mut text = demo_manifest().to_text();
        text = text.replace("[dataset]\n", "[dataset]\nshard_size = 4\n");
        assert!(matches!(
            Manifest::parse(&text).unwrap_err(),
            DatasetError::UnknownKey { .. }
        ));
    }

    #[test]
    fn file_digests_parse_as_hex() {
        let text = demo_manifest().to_text();
        assert!(text.contains("episode-000000.drf = 0123456789abcdef"));
        let bad = text.replace("0123456789abcdef", "not-hex");
        assert!(matches!(Manifest::parse(&bad).unwrap_err(), DatasetError::BadValue { .. }));
    }
}
