/// Compare analytic gradients against central finite differences of a scalar
/// function, in `f64`. Returns the worst relative error, where the relative
/// error of a pair `(a, n)` is `|a - n| / max(1, |a|, |n|)`.
///
/// `f` is evaluated at perturbed copies of `x`; `analytic` must hold
/// `df/dx_i` at the unperturbed point.
pub fn grad_check<F>(x: &[f64], analytic: &[f64], mut f: F, step: f64) -> f64
where
    F: FnMut(&[f64]) -> f64,
{
    assert_eq!(x.len(), analytic.len());
    let mut buf = x.to_vec();
    let mut worst = 0.0f64;
    for i in 0..x.len() {
        let orig = buf[i];
        buf[i] = orig + step;
        let fp = f(&buf);
        buf[i] = orig - step;
        let fm = f(&buf);
        buf[i] = orig;
        let numeric = (fp - fm) / (2.0 * step);
        let denom = 1.0f64.max(analytic[i].abs()).max(numeric.abs());
        worst = worst.max((analytic[i] - numeric).abs() / denom);
    }
    worst
}
