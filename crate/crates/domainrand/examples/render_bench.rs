use drforge_domainrand::{randomize_scene, tabletop_scene, DRConfig, TextureLibrary};
use drforge_render::render;
use drforge_scene::RngStream;
use drforge_world::{reset, TaskId, TaskSpec};
use std::time::Instant;

fn main() {
    let spec = TaskSpec::for_task(TaskId::Stacking);
    let state = reset(&spec, &mut RngStream::new(3).child_named("episode")).unwrap();
    let setup = tabletop_scene(&state);
    let lib = TextureLibrary::bundled();
    let cfg = DRConfig::full();

    let t0 = Instant::now();
    let mut rand_setups = Vec::new();
    for i in 0..50u64 {
        rand_setups.push(randomize_scene(&setup, &cfg, &lib, &RngStream::new(i)).unwrap());
    }
    println!("randomize_scene: {:.2} ms/call", t0.elapsed().as_secs_f64() * 1000.0 / 50.0);

    let t0 = Instant::now();
    let mut n = 0usize;
    for s in &rand_setups {
        for cam in &s.cameras {
            let img = render(&s.scene, cam, 120, 90);
            n += img.data()[0] as usize;
        }
    }
    std::hint::black_box(n);
    println!("render 120x90 randomized: {:.2} ms/frame", t0.elapsed().as_secs_f64() * 1000.0 / 100.0);

    let t0 = Instant::now();
    for _ in 0..50 {
        for cam in &setup.cameras {
            let img = render(&setup.scene, cam, 120, 90);
            std::hint::black_box(img.data()[0]);
        }
    }
    println!("render 120x90 nominal: {:.2} ms/frame", t0.elapsed().as_secs_f64() * 1000.0 / 100.0);

    // Sweeping scene (most instances: 14 particles).
    let spec = TaskSpec::for_task(TaskId::Sweeping);
    let state = reset(&spec, &mut RngStream::new(3).child_named("episode")).unwrap();
    let setup = tabletop_scene(&state);
    let t0 = Instant::now();
    for _ in 0..50 {
        for cam in &setup.cameras {
            let img = render(&setup.scene, cam, 120, 90);
            std::hint::black_box(img.data()[0]);
        }
    }
    println!("render 120x90 sweeping: {:.2} ms/frame", t0.elapsed().as_secs_f64() * 1000.0 / 100.0);
}
