//! Network, loss, and trainer checks: gradients against finite differences,
//! hand-computed loss values, dataset-to-tensor plumbing, convergence on
//! degenerate data, and bit-exact checkpoint resume.

use drforge_dataset::{
    dr_digest, encode_proxy_shard, generate_demos, DatasetKind, DemoGenConfig, EpisodeStore,
    Manifest, Observation, ProxySample, ProxyShard, ProxyStore, FRAME_HISTORY, MANIFEST_NAME,
};
use drforge_domainrand::{DRConfig, TextureLibrary};
use drforge_policy::batch::{observation_input, policy_batch, AugCtx};
use drforge_policy::model::{NetSpec, PROPRIO_STEP};
use drforge_policy::trainer::{desk_regressor_steps, desk_steps, full_scale_steps};
use drforge_policy::{
    bc_loss, load_model, policy_forward, train, DataSource, EncoderPreset, Net, PolicyConfig,
    ProxyConfig, TrainConfig, CHECKPOINT_FILE, METRICS_FILE, MODEL_FILE, POLICY_OUTPUTS,
};
use drforge_render::Image;
use drforge_scene::{fnv1a64, RngStream};
use drforge_tensor::Tensor;
use drforge_world::TaskId;
use std::fs;
use std::path::Path;
use tempfile::TempDir;

const LN_2: f64 = std::f64::consts::LN_2;

fn rand_tensor(shape: &[usize], lo: f64, hi: f64, rng: &mut RngStream) -> Tensor<f64> {
    let data = (0..shape.iter().product::<usize>()).map(|_| rng.uniform(lo, hi)).collect();
    Tensor::from_vec(shape, data)
}

// ---------------------------------------------------------------------------
// Loss values and loss gradients
// ---------------------------------------------------------------------------

#[test]
fn bc_loss_matches_hand_computed_values() {
    // One sample, velocity error (1,0,0,0,0,0), gripper logit 0 (probability
    // 0.5) against label 1: L_MSE = 1/6, L_BCE = ln 2.
    let pred = Tensor::from_vec(&[1, 7], vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let target = Tensor::from_vec(&[1, 7], vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    let (loss, _) = bc_loss(&pred, &target, 0.8);
    assert!((loss.mse - 1.0 / 6.0).abs() < 1e-12);
    assert!((loss.bce - LN_2).abs() < 1e-12);
    assert!((loss.total - (0.8 / 6.0 + 0.2 * LN_2)).abs() < 1e-12);

    // The mixing identity holds for an arbitrary weight.
    let mut rng = RngStream::new(404);
    let p = rand_tensor(&[5, 7], -1.0, 1.0, &mut rng);
    let mut tvals = Vec::new();
    for i in 0..5 {
        for j in 0..7 {
            tvals.push(if j == 6 { f64::from(u8::from(i % 2 == 0)) } else { rng.uniform(-0.3, 0.3) });
        }
    }
    let t = Tensor::from_vec(&[5, 7], tvals);
    let (l, _) = bc_loss(&p, &t, 0.35);
    assert_eq!(l.total, 0.35 * l.mse + 0.65 * l.bce);

    // A perfect prediction scores (numerically) zero.
    let mut perfect = t.clone();
    perfect.data_mut().iter_mut().skip(6).step_by(7).for_each(|g| {
        *g = if *g > 0.5 { 40.0 } else { -40.0 };
    });
    let (zero, _) = bc_loss(&perfect, &t, 0.8);
    assert!(zero.total.abs() < 1e-9, "perfect prediction loss {}", zero.total);
}

#[test]
fn bc_loss_gradient_matches_finite_differences() {
    let mut rng = RngStream::new(31);
    let pred = rand_tensor(&[3, 7], -1.5, 1.5, &mut rng);
    let mut tvals = Vec::new();
    for i in 0..3 {
        for j in 0..7 {
            tvals.push(if j == 6 { f64::from(u8::from(i != 1)) } else { rng.uniform(-0.3, 0.3) });
        }
    }
    let target = Tensor::from_vec(&[3, 7], tvals);
    let (_, analytic) = bc_loss(&pred, &target, 0.8);

    let h = 1e-6;
    let mut worst = 0.0f64;
    for k in 0..pred.numel() {
        let mut plus = pred.clone();
        plus.data_mut()[k] += h;
        let mut minus = pred.clone();
        minus.data_mut()[k] -= h;
        let numeric =
            (bc_loss(&plus, &target, 0.8).0.total - bc_loss(&minus, &target, 0.8).0.total) / (2.0 * h);
        let a = analytic.data()[k];
        let err = (a - numeric).abs() / 1.0_f64.max(a.abs()).max(numeric.abs());
        worst = worst.max(err);
    }
    assert!(worst < 1e-6, "worst relative gradient error {worst}");
}

// ---------------------------------------------------------------------------
// Whole-network gradient check (sampled finite differences, f64)
// ---------------------------------------------------------------------------

#[test]
fn network_gradients_match_finite_differences() {
    let spec = NetSpec {
        preset: EncoderPreset::Desk,
        width: 12,
        height: 9,
        views: 2,
        frames: 1,
        proprio_dim: 3,
        outputs: POLICY_OUTPUTS,
    };
    let mut net: Net<f64> = Net::new(spec, 77).unwrap();
    let mut rng = RngStream::new(5).child_named("gradcheck");
    let n = 2;
    let views: Vec<Tensor<f64>> =
        (0..2).map(|_| rand_tensor(&[n, 3, 9, 12], 0.0, 1.0, &mut rng)).collect();
    let proprio = rand_tensor(&[n, 3], -1.0, 1.0, &mut rng);
    let mut tvals = Vec::new();
    for i in 0..n {
        for j in 0..7 {
            tvals.push(if j == 6 { f64::from(u8::from(i == 0)) } else { rng.uniform(-0.2, 0.2) });
        }
    }
    let target = Tensor::from_vec(&[n, 7], tvals);

    let (out, cache) = net.forward(views.clone(), Some(&proprio));
    let (_, dout) = bc_loss(&out, &target, 0.8);
    let mut grads = net.params.grad_buffers();
    net.backward(&cache, &dout, &mut grads);

    let eval = |net: &Net<f64>| {
        let (out, _) = net.forward(views.clone(), Some(&proprio));
        bc_loss(&out, &target, 0.8).0.total
    };

    let h = 1e-5;
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for pid in 0..net.params.len() {
        let numel = net.params.get(pid).numel();
        let coords: Vec<usize> =
            (0..numel.min(10)).map(|_| rng.index(numel)).collect();
        for k in coords {
            let orig = net.params.get(pid).data()[k];
            net.params.get_mut(pid).data_mut()[k] = orig + h;
            let up = eval(&net);
            net.params.get_mut(pid).data_mut()[k] = orig - h;
            let down = eval(&net);
            net.params.get_mut(pid).data_mut()[k] = orig;
            let numeric = (up - down) / (2.0 * h);
            let a = grads[pid].data()[k];
            let err = (a - numeric).abs() / 1.0_f64.max(a.abs()).max(numeric.abs());
            if err > worst {
                worst = err;
                worst_at = format!("{}[{}]", net.params.name(pid), k);
            }
        }
    }
    assert!(worst < 1e-3, "worst relative gradient error {worst} at {worst_at}");
}

// ---------------------------------------------------------------------------
// Architecture arithmetic
// ---------------------------------------------------------------------------

#[test]
fn architecture_sizes_match_independent_arithmetic() {
    // Head input: two 512-feature views plus 15 proprioceptive scalars.
    let policy = PolicyConfig::desk();
    assert_eq!(policy.spec().head_input_dim(), 1039);

    // Weight-carrying depth per preset: stem + 2 per block + projection.
    assert_eq!(EncoderPreset::Desk.weight_layers(), 10);
    assert_eq!(EncoderPreset::Reference.weight_layers(), 18);

    // Exact parameter counts, derived by hand from the layer shapes.
    // Desk encoder on 9-channel input:
    //   stem 16*9*9+16 = 1312, stem GN 32,
    //   blocks (conv1 + GN + conv2 + GN + 1x1 skip):
    //     16->16: 2320+32+2320+32+272          = 4976
    //     16->32: 4640+64+9248+64+544          = 14560
    //     32->64: 18496+128+36928+128+2112     = 57792
    //     64->128: 73856+256+147584+256+8320   = 230272
    //   projection 256*512+512                 = 131584
    //   total                                  = 440528
    // Head: 1039*512+512 + 512*512+512 + 512*7+7 = 532480+262656+3591.
    let net: Net<f32> = Net::new(policy.spec(), 1).unwrap();
    assert_eq!(net.params.total_scalars(), 2 * 440_528 + 532_480 + 262_656 + 3_591);
    assert_eq!(net.params.total_scalars(), 1_679_783);

    // Same arithmetic for the 3-channel localization net: the stem shrinks to
    // 448 parameters and the head grows to 9 outputs on a 1024-wide input.
    let proxy: Net<f32> = Net::new(ProxyConfig::desk().spec(), 1).unwrap();
    let proxy_encoder = 448 + 32 + 4_976 + 14_560 + 57_792 + 230_272 + 131_584;
    assert_eq!(
        proxy.params.total_scalars(),
        2 * proxy_encoder + (1024 * 512 + 512) + 262_656 + (512 * 9 + 9)
    );

    // Desk-scale training lengths are the full-scale ones divided by 20.
    assert_eq!(full_scale_steps(TaskId::Stacking), 400_000);
    assert_eq!(full_scale_steps(TaskId::Assembling), 1_000_000);
    assert_eq!(desk_steps(TaskId::Stacking), 20_000);
    assert_eq!(desk_steps(TaskId::Pushing), 20_000);
    assert_eq!(desk_steps(TaskId::PushingToPick), 20_000);
    assert_eq!(desk_steps(TaskId::Sweeping), 50_000);
    assert_eq!(desk_steps(TaskId::Assembling), 50_000);
    assert_eq!(desk_regressor_steps(), 20_000);
}

#[test]
fn swapping_camera_views_changes_the_output() {
    let spec = NetSpec {
        preset: EncoderPreset::Desk,
        width: 24,
        height: 12,
        views: 2,
        frames: 1,
        proprio_dim: 0,
        outputs: POLICY_OUTPUTS,
    };
    let net: Net<f64> = Net::new(spec, 9).unwrap();
    let mut rng = RngStream::new(10);
    let a = rand_tensor(&[1, 3, 12, 24], 0.0, 1.0, &mut rng);
    let b = rand_tensor(&[1, 3, 12, 24], 0.0, 1.0, &mut rng);

    let (ab, _) = net.forward(vec![a.clone(), b.clone()], None);
    let (ab2, _) = net.forward(vec![a.clone(), b.clone()], None);
    assert_eq!(ab.data(), ab2.data(), "forward must be deterministic");

    let (ba, _) = net.forward(vec![b, a], None);
    assert_ne!(
        ab.data(),
        ba.data(),
        "the two views feed separately trained encoders, so order must matter"
    );
}

// ---------------------------------------------------------------------------
// Dataset-to-tensor plumbing
// ---------------------------------------------------------------------------

fn solid_image(width: usize, height: usize, rgb: [u8; 3]) -> Image {
    let mut img = Image::new(width, height);
    for y in 0..height {
        for x in 0..width {
            img.set_pixel(x, y, rgb);
        }
    }
    img
}

#[test]
fn single_view_input_takes_newest_frame_and_current_proprio() {
    let (w, h) = (15, 12);
    let frame = |v: usize, k: usize| solid_image(w, h, [40 * (k as u8 + 1), 10 + v as u8, 0]);
    let obs = Observation {
        views: [
            [frame(0, 0), frame(0, 1), frame(0, 2)],
            [frame(1, 0), frame(1, 1), frame(1, 2)],
        ],
        proprio: core::array::from_fn(|i| i as f32 / 10.0),
    };
    let spec = NetSpec {
        preset: EncoderPreset::Desk,
        width: w,
        height: h,
        views: 1,
        frames: 1,
        proprio_dim: PROPRIO_STEP,
        outputs: POLICY_OUTPUTS,
    };
    let (views, proprio) = observation_input::<f32>(&spec, &obs);
    assert_eq!(views.len(), 1);
    assert_eq!(views[0].shape(), &[1, 3, h, w]);
    // Every red-channel texel equals the newest frame's red value, 120/255.
    let plane = w * h;
    for &v in &views[0].data()[..plane] {
        assert_eq!(v, 120.0 / 255.0);
    }
    // Green channel carries the view-0 marker (10), not view 1's (11).
    for &v in &views[0].data()[plane..2 * plane] {
        assert_eq!(v, 10.0 / 255.0);
    }
    let p = proprio.expect("single-view spec keeps 5 proprio scalars");
    assert_eq!(p.shape(), &[1, PROPRIO_STEP]);
    let expect: Vec<f32> = (10..15).map(|i| i as f32 / 10.0).collect();
    assert_eq!(p.data(), expect.as_slice());

    // The full spec consumes all three frames, oldest first.
    let full = NetSpec { frames: FRAME_HISTORY, views: 2, proprio_dim: 15, ..spec };
    let (views, _) = observation_input::<f32>(&full, &obs);
    assert_eq!(views[0].shape(), &[1, 9, h, w]);
    assert_eq!(views[0].data()[0], 40.0 / 255.0); // frame 0, red
    assert_eq!(views[0].data()[3 * plane], 80.0 / 255.0); // frame 1, red
    assert_eq!(views[0].data()[6 * plane], 120.0 / 255.0); // frame 2, red
}

fn tiny_demo_dataset(dir: &Path, dr: DRConfig) -> EpisodeStore {
    let cfg = DemoGenConfig {
        task: TaskId::Stacking,
        episodes: 2,
        width: 16,
        height: 12,
        root_seed: 11,
        dr,
    };
    let library = TextureLibrary::bundled();
    generate_demos(&cfg, &library, dir).unwrap();
    EpisodeStore::open(dir).unwrap()
}

#[test]
fn augmentation_is_shared_across_a_views_frame_stack() {
    let tmp = TempDir::new().unwrap();
    let store = tiny_demo_dataset(tmp.path(), DRConfig::full());
    let aug_cfg = store.manifest().dr.img_aug.clone().expect("full DR carries augmentation");
    let spec = NetSpec {
        preset: EncoderPreset::Desk,
        width: 16,
        height: 12,
        views: 2,
        frames: FRAME_HISTORY,
        proprio_dim: 15,
        outputs: POLICY_OUTPUTS,
    };

    // Flat index 0 is an episode's first step: its history pads by repeating
    // the first frame, so all three stacked frames are identical going in.
    let ctx = AugCtx { config: &aug_cfg, stream: RngStream::new(3).child_named("augtest") };
    let batch = policy_batch::<f32>(&spec, &store, &[0], Some(&ctx)).unwrap();
    let plane = 3 * 12 * 16;
    let data = batch.views[0].data();
    assert_eq!(&data[..plane], &data[plane..2 * plane], "frames 0 and 1 must transform alike");
    assert_eq!(&data[plane..2 * plane], &data[2 * plane..], "frames 1 and 2 must transform alike");

    // And the transform must actually do something relative to no
    // augmentation.
    let plain = policy_batch::<f32>(&spec, &store, &[0], None).unwrap();
    assert_ne!(plain.views[0].data(), batch.views[0].data());
}

// ---------------------------------------------------------------------------
// Training behavior
// ---------------------------------------------------------------------------

/// Writes a single-shard localization dataset of all-black frames whose
/// targets are `targets`, returning the opened store.
fn constant_image_proxy_dataset(dir: &Path, targets: &[[f32; 9]]) -> ProxyStore {
    let (w, h) = (16, 12);
    let dr = DRConfig::off();
    let shard = ProxyShard {
        width: w,
        height: h,
        root_seed: 99,
        first_sample: 0,
        dr_digest: dr_digest(&dr),
        samples: targets
            .iter()
            .map(|&t| ProxySample { views: [Image::new(w, h), Image::new(w, h)], targets: t })
            .collect(),
    };
    let bytes = encode_proxy_shard(&shard);
    let name = "proxy-00000.drf";
    fs::write(dir.join(name), &bytes).unwrap();
    let manifest = Manifest {
        kind: DatasetKind::Proxy,
        task: None,
        width: w,
        height: h,
        root_seed: 99,
        records: targets.len() as u64,
        total_steps: 0,
        shard_size: targets.len() as u64,
        dr,
        files: vec![(name.to_string(), fnv1a64(&bytes))],
    };
    fs::write(dir.join(MANIFEST_NAME), manifest.to_text()).unwrap();
    ProxyStore::open(dir).unwrap()
}

#[test]
fn regressor_on_uninformative_images_learns_the_target_mean() {
    // With identical (black) frames everywhere, the best mean-squared
    // predictor is the per-component mean of the targets.
    let targets: Vec<[f32; 9]> = vec![
        core::array::from_fn(|i| 0.05 * i as f32 - 0.2),
        core::array::from_fn(|i| 0.3 - 0.06 * i as f32),
        core::array::from_fn(|i| if i % 2 == 0 { 0.25 } else { -0.15 }),
        core::array::from_fn(|i| 0.02 * i as f32),
    ];
    let mean: Vec<f64> = (0..9)
        .map(|i| targets.iter().map(|t| f64::from(t[i])).sum::<f64>() / targets.len() as f64)
        .collect();

    let tmp = TempDir::new().unwrap();
    let store = constant_image_proxy_dataset(tmp.path(), &targets);
    let spec = NetSpec { width: 16, height: 12, ..ProxyConfig::desk().spec() };
    let mut net: Net<f64> = Net::new(spec, 5).unwrap();

    let mut cfg = TrainConfig::new(tmp.path().join("run"), 2000);
    cfg.batch_size = 4;
    cfg.seed = 7;
    cfg.optim.weight_decay = 0.0;
    cfg.checkpoint_every = 2000;
    cfg.log_every = 2000;
    train(&mut net, &DataSource::Proxy(&store), &cfg).unwrap();

    let black = Image::new(16, 12);
    let pred = drforge_policy::proxy_forward(&net, [&black, &black]);
    for (p, m) in pred.iter().zip(&mean) {
        assert!(
            (p - m).abs() < 5e-3,
            "prediction {p:.5} should settle at the dataset mean {m:.5}"
        );
    }
}

#[test]
fn hundred_training_steps_reduce_the_loss() {
    let tmp = TempDir::new().unwrap();
    let data_dir = tmp.path().join("data");
    fs::create_dir_all(&data_dir).unwrap();
    let store = tiny_demo_dataset(&data_dir, DRConfig::off());

    let spec = NetSpec {
        preset: EncoderPreset::Desk,
        width: 16,
        height: 12,
        views: 2,
        frames: FRAME_HISTORY,
        proprio_dim: 15,
        outputs: POLICY_OUTPUTS,
    };
    let mut net: Net<f32> = Net::new(spec, 21).unwrap();
    let mut cfg = TrainConfig::new(tmp.path().join("run"), 100);
    cfg.batch_size = 4;
    cfg.seed = 3;
    cfg.log_every = 1;
    cfg.checkpoint_every = 50;
    let report = train(&mut net, &DataSource::Episodes(&store), &cfg).unwrap();
    assert_eq!(report.final_step, 100);

    let metrics = fs::read_to_string(cfg.out_dir.join(METRICS_FILE)).unwrap();
    let rows: Vec<Vec<f64>> = metrics
        .lines()
        .map(|l| l.split(", ").map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 100, "log_every=1 must log every step");
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 5, "each line is step, lr, L, L_MSE, L_BCE");
        assert_eq!(row[0] as u64, i as u64 + 1);
        let (lambda, l, mse, bce) = (0.8, row[2], row[3], row[4]);
        assert!((l - (lambda * mse + (1.0 - lambda) * bce)).abs() < 1e-9);
    }
    assert_eq!(rows[0][1], 3e-4, "first step runs at the peak learning rate");
    assert!(rows[99][1] < rows[0][1], "cosine schedule must decay");
    assert!(
        rows[99][2] < rows[0][2],
        "loss after 100 steps ({}) must drop below the first step's ({})",
        rows[99][2],
        rows[0][2]
    );
    assert!(cfg.out_dir.join(CHECKPOINT_FILE).exists());
    assert!(cfg.out_dir.join(MODEL_FILE).exists());
}

#[test]
fn resuming_from_a_checkpoint_reproduces_an_uninterrupted_run() {
    let tmp = TempDir::new().unwrap();
    let data_dir = tmp.path().join("data");
    fs::create_dir_all(&data_dir).unwrap();
    let store = tiny_demo_dataset(&data_dir, DRConfig::full());
    let spec = NetSpec {
        preset: EncoderPreset::Desk,
        width: 16,
        height: 12,
        views: 2,
        frames: FRAME_HISTORY,
        proprio_dim: 15,
        outputs: POLICY_OUTPUTS,
    };

    let run = |dirs: &[(u64, &str)]| -> Net<f32> {
        let mut net: Net<f32> = Net::new(spec, 55).unwrap();
        for &(steps, dir) in dirs {
            let mut cfg = TrainConfig::new(tmp.path().join(dir), steps);
            cfg.batch_size = 4;
            cfg.seed = 9;
            cfg.checkpoint_every = 20;
            cfg.log_every = 10;
            let mut fresh: Net<f32> = Net::new(spec, 55).unwrap();
            train(&mut fresh, &DataSource::Episodes(&store), &cfg).unwrap();
            net = fresh;
        }
        net
    };

    // One 60-step run...
    let straight = run(&[(60, "straight")]);
    // ...versus 25 steps, then a resume of the same directory up to 60. The
    // second call starts from the checkpoint, not from scratch.
    run(&[(25, "resumed")]);
    let resumed = run(&[(60, "resumed")]);

    for pid in 0..straight.params.len() {
        assert_eq!(
            straight.params.get(pid).data(),
            resumed.params.get(pid).data(),
            "parameter {} must match bit for bit after resume",
            straight.params.name(pid)
        );
    }

    // A snapshot loads into a fresh network and reproduces outputs exactly.
    let mut reloaded: Net<f32> = Net::new(spec, 1234).unwrap();
    let step = load_model(&mut reloaded, &tmp.path().join("straight").join(MODEL_FILE)).unwrap();
    assert_eq!(step, 60);
    let (obs, _) = store.sample(3).unwrap();
    let a = policy_forward(&straight, &obs);
    let b = policy_forward(&reloaded, &obs);
    assert_eq!((a.v, a.omega, a.g_prob), (b.v, b.omega, b.g_prob));

    // Loading a localization snapshot into a policy network must fail.
    let mut proxy: Net<f32> = Net::new(
        NetSpec { width: 16, height: 12, ..ProxyConfig::desk().spec() },
        1,
    )
    .unwrap();
    assert!(load_model(&mut proxy, &tmp.path().join("straight").join(MODEL_FILE)).is_err());
}
