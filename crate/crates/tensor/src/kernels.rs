//! Inner loops shared by the tensor ops. Every kernel fixes its summation
//! order explicitly (lane accumulators reduced lane 0..LANES, then the scalar
//! tail), so results are bit-reproducible for a given build while still
//! auto-vectorizing to FMA lanes.

use crate::tensor::Scalar;

pub const LANES: usize = 16;

#[inline(always)]
fn fma_lanes<E: Scalar>(acc: &mut [E; LANES], a: &[E], b: &[E]) {
    for l in 0..LANES {
        acc[l] = a[l].mul_add(b[l], acc[l]);
    }
}

#[inline(always)]
fn reduce_lanes<E: Scalar>(acc: &[E; LANES]) -> E {
    let mut s = E::ZERO;
    for l in 0..LANES {
        s += acc[l];
    }
    s
}

/// Dot product with fixed summation order.
pub fn dot<E: Scalar>(a: &[E], b: &[E]) -> E {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [E::ZERO; LANES];
    let mut ac = a.chunks_exact(LANES);
    let mut bc = b.chunks_exact(LANES);
    for (ca, cb) in (&mut ac).zip(&mut bc) {
        fma_lanes(&mut acc, ca, cb);
    }
    let mut tail = E::ZERO;
    for (x, y) in ac.remainder().iter().zip(bc.remainder()) {
        tail = x.mul_add(*y, tail);
    }
    reduce_lanes(&acc) + tail
}

/// `y[i] += s * x[i]`.
pub fn axpy<E: Scalar>(s: E, x: &[E], y: &mut [E]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = xi.mul_add(s, *yi);
    }
}

/// `y[i] += s0 * x0[i] + s1 * x1[i]` — fused to halve traffic on `y`.
pub fn axpy2<E: Scalar>(s0: E, x0: &[E], s1: E, x1: &[E], y: &mut [E]) {
    debug_assert_eq!(x0.len(), y.len());
    debug_assert_eq!(x1.len(), y.len());
    for i in 0..y.len() {
        y[i] = x1[i].mul_add(s1, x0[i].mul_add(s0, y[i]));
    }
}

/// `C[m x n] = A[m x k] * B[n x k]^T`, all row-major, i.e. every output is a
/// dot product of two contiguous rows. When `accumulate` is false, C is
/// overwritten. This layout (B pre-transposed) is what the conv im2col and the
/// linear layers produce, so the inner loop always walks unit-stride memory.
pub fn gemm_nt<E: Scalar>(
    a: &[E],
    b: &[E],
    c: &mut [E],
    m: usize,
    k: usize,
    n: usize,
    accumulate: bool,
) {
    debug_assert!(a.len() >= m * k);
    debug_assert!(b.len() >= n * k);
    debug_assert!(c.len() >= m * n);
    let chunks = k / LANES;
    let k_main = chunks * LANES;

    let mut i = 0;
    // 2x4 register-blocked main loop: two A rows against four B rows.
    while i + 2 <= m {
        let (a0, a1) = (&a[i * k..i * k + k], &a[(i + 1) * k..(i + 1) * k + k]);
        let mut j = 0;
        while j + 4 <= n {
            let b0 = &b[j * k..j * k + k];
            let b1 = &b[(j + 1) * k..(j + 1) * k + k];
            let b2 = &b[(j + 2) * k..(j + 2) * k + k];
            let b3 = &b[(j + 3) * k..(j + 3) * k + k];
            let mut acc = [[E::ZERO; LANES]; 8];
            for ci in 0..chunks {
                let o = ci * LANES;
                let va0 = &a0[o..o + LANES];
                let va1 = &a1[o..o + LANES];
                fma_lanes(&mut acc[0], va0, &b0[o..o + LANES]);
                fma_lanes(&mut acc[1], va0, &b1[o..o + LANES]);
                fma_lanes(&mut acc[2], va0, &b2[o..o + LANES]);
                fma_lanes(&mut acc[3], va0, &b3[o..o + LANES]);
                fma_lanes(&mut acc[4], va1, &b0[o..o + LANES]);
                fma_lanes(&mut acc[5], va1, &b1[o..o + LANES]);
                fma_lanes(&mut acc[6], va1, &b2[o..o + LANES]);
                fma_lanes(&mut acc[7], va1, &b3[o..o + LANES]);
            }
            let mut sums = [E::ZERO; 8];
            for (q, accq) in acc.iter().enumerate() {
                sums[q] = reduce_lanes(accq);
            }
            for kk in k_main..k {
                sums[0] = a0[kk].mul_add(b0[kk], sums[0]);
                sums[1] = a0[kk].mul_add(b1[kk], sums[1]);
                sums[2] = a0[kk].mul_add(b2[kk], sums[2]);
                sums[3] = a0[kk].mul_add(b3[kk], sums[3]);
                sums[4] = a1[kk].mul_add(b0[kk], sums[4]);
                sums[5] = a1[kk].mul_add(b1[kk], sums[5]);
                sums[6] = a1[kk].mul_add(b2[kk], sums[6]);
                sums[7] = a1[kk].mul_add(b3[kk], sums[7]);
            }
            for q in 0..4 {
                let c0 = i * n + j + q;
                let c1 = (i + 1) * n + j + q;
                if accumulate {
                    c[c0] += sums[q];
                    c[c1] += sums[4 + q];
                } else {
                    c[c0] = sums[q];
                    c[c1] = sums[4 + q];
                }
            }
            j += 4;
        }
        while j < n {
            let bj = &b[j * k..j * k + k];
            let (s0, s1) = (dot(a0, bj), dot(a1, bj));
            if accumulate {
                c[i * n + j] += s0;
                c[(i + 1) * n + j] += s1;
            } else {
                c[i * n + j] = s0;
                c[(i + 1) * n + j] = s1;
            }
            j += 1;
        }
        i += 2;
    }
    while i < m {
        let ai = &a[i * k..i * k + k];
        for j in 0..n {
            let s = dot(ai, &b[j * k..j * k + k]);
            if accumulate {
                c[i * n + j] += s;
            } else {
                c[i * n + j] = s;
            }
        }
        i += 1;
    }
}
