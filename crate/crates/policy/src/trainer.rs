//! Minibatch training loop shared by the velocity policy and the cube-offset
//! regressor: shuffled epochs, cosine learning-rate schedule, AdamW updates,
//! periodic checkpoints, and an append-only metrics log.

use crate::batch::{policy_batch, proxy_batch, AugCtx, Batch};
use crate::error::PolicyError;
use crate::loss::{bc_loss, validate_lambda, DEFAULT_LAMBDA};
use crate::model::{Net, NetSpec, POLICY_OUTPUTS, PROXY_OUTPUTS};
use drforge_dataset::{EpisodeStore, Manifest, ProxyStore};
use drforge_scene::RngStream;
use drforge_tensor::{
    cosine_lr, load_checkpoint, mse_loss, save_checkpoint, AdamW, Checkpoint, OptimState,
    OptimizerConfig, Scalar,
};
use drforge_world::TaskId;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Rolling training snapshot (parameters + optimizer state), overwritten as
/// training progresses and used to resume interrupted runs.
pub const CHECKPOINT_FILE: &str = "checkpoint.drf";
/// Final parameters-only snapshot written when training completes.
pub const MODEL_FILE: &str = "model.drf";
/// Append-only loss log; each line is `step, lr, L, L_MSE, L_BCE`.
pub const METRICS_FILE: &str = "metrics.log";

/// Optimizer steps at full scale for the quicker tasks (and the regressor).
pub const FULL_STEPS_SHORT: u64 = 400_000;
/// Optimizer steps at full scale for sweeping and assembling.
pub const FULL_STEPS_LONG: u64 = 1_000_000;
/// Factor between a full-scale run and its desk-scale counterpart.
pub const DESK_STEP_DIVISOR: u64 = 20;

pub fn full_scale_steps(task: TaskId) -> u64 {
    match task {
        TaskId::Sweeping | TaskId::Assembling => FULL_STEPS_LONG,
        TaskId::Stacking | TaskId::Pushing | TaskId::PushingToPick => FULL_STEPS_SHORT,
    }
}

pub fn desk_steps(task: TaskId) -> u64 {
    full_scale_steps(task) / DESK_STEP_DIVISOR
}

pub fn full_scale_regressor_steps() -> u64 {
    FULL_STEPS_SHORT
}

pub fn desk_regressor_steps() -> u64 {
    FULL_STEPS_SHORT / DESK_STEP_DIVISOR
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    /// Total optimizer steps for the run (resume continues toward this).
    pub steps: u64,
    pub batch_size: usize,
    /// Seeds both the epoch shuffles and the image augmentation draws.
    pub seed: u64,
    /// Learning-rate/AdamW settings; `total_steps` is overridden with `steps`.
    pub optim: OptimizerConfig,
    /// Velocity/gripper loss mix; ignored when training the regressor.
    pub lambda: f64,
    pub checkpoint_every: u64,
    pub log_every: u64,
    /// Train on only the first `data_limit` records of the dataset.
    pub data_limit: Option<usize>,
    pub out_dir: PathBuf,
}

impl TrainConfig {
    pub fn new(out_dir: impl Into<PathBuf>, steps: u64) -> TrainConfig {
        TrainConfig {
            steps,
            batch_size: 8,
            seed: 0,
            optim: OptimizerConfig::default(),
            lambda: DEFAULT_LAMBDA,
            checkpoint_every: 1000,
            log_every: 50,
            data_limit: None,
            out_dir: out_dir.into(),
        }
    }
}

/// Where training records come from; the variant decides the loss.
pub enum DataSource<'a> {
    Episodes(&'a EpisodeStore),
    Proxy(&'a ProxyStore),
}

impl DataSource<'_> {
    pub fn len(&self) -> usize {
        match self {
            DataSource::Episodes(s) => s.total_steps(),
            DataSource::Proxy(s) => s.sample_count(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn manifest(&self) -> &Manifest {
        match self {
            DataSource::Episodes(s) => s.manifest(),
            DataSource::Proxy(s) => s.manifest(),
        }
    }

    fn expected_outputs(&self) -> usize {
        match self {
            DataSource::Episodes(_) => POLICY_OUTPUTS,
            DataSource::Proxy(_) => PROXY_OUTPUTS,
        }
    }

    fn batch<E: Scalar>(
        &self,
        spec: &NetSpec,
        indices: &[usize],
        aug: Option<&AugCtx<'_>>,
    ) -> Result<Batch<E>, PolicyError> {
        match self {
            DataSource::Episodes(s) => policy_batch(spec, s, indices, aug),
            DataSource::Proxy(s) => proxy_batch(spec, s, indices, aug),
        }
    }
}

/// Lazily materialized epoch permutations: epoch `e` of a dataset of `n`
/// records is a Fisher-Yates shuffle drawn from a stream derived only from
/// `(seed, e)`, so any step of any run can reproduce it independently.
struct Shuffler {
    seed: u64,
    n: usize,
    epoch: u64,
    perm: Vec<u32>,
}

impl Shuffler {
    fn new(seed: u64, n: usize) -> Shuffler {
        let mut s = Shuffler { seed, n, epoch: 0, perm: Vec::new() };
        s.fill(0);
        s
    }

    fn fill(&mut self, epoch: u64) {
        let mut rng = RngStream::new(self.seed).child_named("shuffle").child(epoch);
        if self.perm.is_empty() {
            self.perm = (0..self.n as u32).collect();
        } else {
            for (i, p) in self.perm.iter_mut().enumerate() {
                *p = i as u32;
            }
        }
        for i in (1..self.n).rev() {
            let j = rng.index(i + 1);
            self.perm.swap(i, j);
        }
        self.epoch = epoch;
    }

    fn get(&mut self, epoch: u64, slot: usize) -> usize {
        if epoch != self.epoch || self.perm.is_empty() {
            self.fill(epoch);
        }
        self.perm[slot] as usize
    }
}

#[derive(Debug, Clone)]
pub struct TrainReport {
    /// Step count already in the checkpoint when the run started (0 for a
    /// fresh run).
    pub start_step: u64,
    pub final_step: u64,
    pub final_loss: f64,
    pub model_path: PathBuf,
}

fn optimizer_snapshot<E: Scalar>(opt: &AdamW<E>) -> OptimState {
    OptimState {
        t: opt.t,
        m: opt.m.iter().map(|t| t.cast::<f32>()).collect(),
        v: opt.v.iter().map(|t| t.cast::<f32>()).collect(),
    }
}

/// Runs (or resumes) a training run of `cfg.steps` optimizer steps.
///
/// The record stream is deterministic in `(cfg.seed, dataset)`: global sample
/// position `p = step * batch_size + i` maps to record `perm_{p / n}[p % n]`
/// where `n` is the (possibly `data_limit`-capped) record count. Augmentation
/// is applied on the fly exactly when the dataset's domain-randomization
/// configuration carries image-augmentation ranges. A resumed run replays the
/// same stream from the checkpointed step and is step-for-step identical to
/// an uninterrupted one.
pub fn train<E: Scalar>(
    net: &mut Net<E>,
    source: &DataSource<'_>,
    cfg: &TrainConfig,
) -> Result<TrainReport, PolicyError> {
    validate_lambda(cfg.lambda)?;
    if cfg.batch_size == 0 {
        return Err(PolicyError::Config("batch_size must be positive".into()));
    }
    if cfg.steps == 0 {
        return Err(PolicyError::Config("steps must be positive".into()));
    }
    if cfg.checkpoint_every == 0 || cfg.log_every == 0 {
        return Err(PolicyError::Config("checkpoint_every and log_every must be positive".into()));
    }
    let spec = *net.spec();
    let manifest = source.manifest();
    if spec.width != manifest.width || spec.height != manifest.height {
        return Err(PolicyError::Config(format!(
            "network expects {}x{} frames but the dataset stores {}x{}",
            spec.width, spec.height, manifest.width, manifest.height
        )));
    }
    if spec.outputs != source.expected_outputs() {
        return Err(PolicyError::Config(format!(
            "network has {} outputs but this data source requires {}",
            spec.outputs,
            source.expected_outputs()
        )));
    }
    let n = cfg.data_limit.map_or(source.len(), |l| l.min(source.len()));
    if n == 0 {
        return Err(PolicyError::Config("no training records available".into()));
    }

    fs::create_dir_all(&cfg.out_dir)?;
    let mut ocfg = cfg.optim;
    ocfg.total_steps = cfg.steps;
    let shapes = net.params.shapes();
    let mut opt = AdamW::<E>::new(ocfg, &shapes);

    let ckpt_path = cfg.out_dir.join(CHECKPOINT_FILE);
    let mut start_step = 0u64;
    if ckpt_path.exists() {
        let ck = load_checkpoint(&ckpt_path)?;
        net.params.load_named_f32(&ck.params)?;
        if let Some(os) = ck.optim {
            if os.m.len() != shapes.len() || os.v.len() != shapes.len() {
                return Err(PolicyError::ParamMismatch {
                    name: "optimizer state".into(),
                    reason: "checkpointed moment count differs from the network".into(),
                });
            }
            opt.t = os.t;
            opt.m = os.m.iter().map(|t| t.cast::<E>()).collect();
            opt.v = os.v.iter().map(|t| t.cast::<E>()).collect();
        }
        start_step = ck.step.min(cfg.steps);
    }

    let aug_cfg = manifest.dr.img_aug.as_ref();
    let aug_root = RngStream::new(cfg.seed).child_named("augment");
    let mut shuffler = Shuffler::new(cfg.seed, n);
    let mut grads = net.params.grad_buffers();

    let metrics_file =
        fs::OpenOptions::new().create(true).append(true).open(cfg.out_dir.join(METRICS_FILE))?;
    let mut metrics = BufWriter::new(metrics_file);

    let mut final_loss = f64::NAN;
    let bsz = cfg.batch_size as u64;
    for step in start_step..cfg.steps {
        let lr = cosine_lr(&opt.cfg, step);
        let indices: Vec<usize> = (0..bsz)
            .map(|i| {
                let pos = step * bsz + i;
                shuffler.get(pos / n as u64, (pos % n as u64) as usize)
            })
            .collect();
        let aug_ctx =
            aug_cfg.map(|config| AugCtx { config, stream: aug_root.child(step) });
        let batch = source.batch::<E>(&spec, &indices, aug_ctx.as_ref())?;
        let (out, cache) = net.forward(batch.views, batch.proprio.as_ref());
        let (loss, loss_mse, loss_bce, dout) = match source {
            DataSource::Episodes(_) => {
                let (l, d) = bc_loss(&out, &batch.targets, cfg.lambda);
                (l.total, l.mse, l.bce, d)
            }
            DataSource::Proxy(_) => {
                let (l, d) = mse_loss(&out, &batch.targets);
                (l, l, E::ZERO, d)
            }
        };
        for g in grads.iter_mut() {
            g.fill(E::ZERO);
        }
        net.backward(&cache, &dout, &mut grads);
        opt.step(net.params.tensors_mut(), &grads, lr);

        let done = step + 1;
        final_loss = loss.to_f64();
        if step == start_step || done % cfg.log_every == 0 || done == cfg.steps {
            writeln!(
                metrics,
                "{}, {}, {}, {}, {}",
                done,
                lr,
                loss.to_f64(),
                loss_mse.to_f64(),
                loss_bce.to_f64()
            )?;
        }
        if done % cfg.checkpoint_every == 0 || done == cfg.steps {
            metrics.flush()?;
            save_checkpoint(
                &ckpt_path,
                &Checkpoint {
                    step: done,
                    params: net.params.to_named_f32(),
                    optim: Some(optimizer_snapshot(&opt)),
                },
            )?;
        }
    }
    metrics.flush()?;

    let model_path = cfg.out_dir.join(MODEL_FILE);
    save_checkpoint(
        &model_path,
        &Checkpoint { step: cfg.steps, params: net.params.to_named_f32(), optim: None },
    )?;
    Ok(TrainReport { start_step, final_step: cfg.steps, final_loss, model_path })
}

/// Loads parameters from a snapshot produced by [`train`] into a network of
/// the same architecture. Returns the step count stored in the snapshot.
pub fn load_model<E: Scalar>(net: &mut Net<E>, path: &Path) -> Result<u64, PolicyError> {
    let ck = load_checkpoint(path)?;
    net.params.load_named_f32(&ck.params)?;
    Ok(ck.step)
}
