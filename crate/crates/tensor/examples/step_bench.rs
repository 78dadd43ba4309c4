use drforge_tensor::kernels::gemm_nt;
use std::time::Instant;

fn bench(label: &str, m: usize, k: usize, n: usize, iters: usize) {
    let a = vec![1.0f32; m * k];
    let b = vec![1.0f32; n * k];
    let mut c = vec![0.0f32; m * n];
    let t0 = Instant::now();
    for _ in 0..iters {
        std::hint::black_box(&a);
        std::hint::black_box(&b);
        gemm_nt(&a, &b, &mut c, m, k, n, false);
        std::hint::black_box(&mut c);
    }
    std::hint::black_box(&c);
    let dt = t0.elapsed().as_secs_f64();
    let gflops = (2.0 * m as f64 * k as f64 * n as f64 * iters as f64) / dt / 1e9;
    println!("{label}: m={m} k={k} n={n} -> {gflops:.1} GFLOP/s");
}

fn main() {
    bench("stem9ch", 16, 81, 19200, 50);
    bench("stem3ch", 16, 27, 19200, 100);
    bench("block1", 16, 144, 1280, 500);
    bench("block2a", 32, 144, 320, 2000);
    bench("block2b", 32, 288, 320, 2000);
    bench("head1", 512, 1039, 16, 500);
    bench("head2", 512, 512, 16, 1000);
    bench("dW-stem", 16, 19200, 81, 50);
}
