//! Small dense vector kernels on `f64` slices.
//!
//! All functions assume equal lengths; callers validate dimensions at the
//! public API boundary.

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// `out = u + t * d`
#[inline]
pub fn offset_into(u: &[f64], t: f64, d: &[f64], out: &mut [f64]) {
    debug_assert_eq!(u.len(), d.len());
    debug_assert_eq!(u.len(), out.len());
    for ((o, ui), di) in out.iter_mut().zip(u).zip(d) {
        *o = ui + t * di;
    }
}

pub fn offset(u: &[f64], t: f64, d: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; u.len()];
    offset_into(u, t, d, &mut out);
    out
}

pub fn scale(alpha: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|xi| alpha * xi).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}
