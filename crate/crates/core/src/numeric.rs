//! Scalar root bracketing and one-dimensional minimisation.

/// Bisection on `[lo, hi]`, which must bracket a sign change of `f`.
///
/// Stops once the bracket is narrower than `tol` or can no longer be split in
/// floating point. Returns the bracket midpoint, or `None` without a sign change.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Samples `f` at `samples` evenly spaced points over `[lo, hi]` and returns
/// the sub-intervals across which it changes sign.
pub fn sign_change_brackets<F>(mut f: F, lo: f64, hi: f64, samples: usize) -> Vec<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let samples = samples.max(2);
    let step = (hi - lo) / (samples - 1) as f64;
    let mut brackets = Vec::new();
    let mut prev_x = lo;
    let mut prev_f = f(lo);
    for i in 1..samples {
        let x = if i == samples - 1 {
            hi
        } else {
            lo + i as f64 * step
        };
        let fx = f(x);
        if prev_f == 0.0 || (prev_f.signum() != fx.signum() && fx != 0.0) {
            brackets.push((prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    if prev_f == 0.0 {
        brackets.push((prev_x, prev_x));
    }
    brackets
}

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_min<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    for _ in 0..400 {
        if (hi - lo).abs() <= tol * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    if fa <= fb {
        a
    } else {
        b
    }
}
