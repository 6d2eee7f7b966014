//! Spherical Bessel functions `j_0..=j_kmax` at a single argument.
//!
//! `∫_{-1}^{1} P_k(v) e^{ixv} dv = 2 i^k j_k(x)`, which is what the Fejér
//! smoothing quadrature integrates its trigonometric factors against.

/// Returns `[j_0(x), ..., j_kmax(x)]` for `x >= 0`.
pub fn spherical_bessel_j(kmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let (s, c) = x.sin_cos();
    let j0 = if x < 1e-4 { 1.0 - x * x / 6.0 } else { s / x };
    if x > kmax as f64 + 1.0 {
        // upward recurrence is stable while k < x
        out[0] = j0;
        if kmax >= 1 {
            out[1] = s / (x * x) - c / x;
        }
        for k in 1..kmax {
            out[k + 1] = (2 * k + 1) as f64 / x * out[k] - out[k - 1];
        }
        return out;
    }
    // Miller's downward recurrence, normalized by sum (2k+1) j_k^2 = 1.
    let start = kmax + 20 + (x as usize) + (10.0 * (kmax as f64 + x).sqrt()) as usize;
    let mut next = 0.0_f64;
    let mut cur = 1.0_f64;
    let mut norm = 0.0_f64;
    let mut tmp = vec![0.0; start + 1];
    for k in (0..=start).rev() {
        tmp[k] = cur;
        norm += (2 * k + 1) as f64 * cur * cur;
        if k == 0 {
            break;
        }
        let prev = (2 * k + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e100 {
            for t in tmp.iter_mut().skip(k) {
                *t *= 1e-100;
            }
            cur *= 1e-100;
            next *= 1e-100;
            norm *= 1e-200;
        }
    }
    let mut scale = 1.0 / norm.sqrt();
    // fix the sign against whichever of j_0, j_1 is computed reliably
    let j1 = if x < 1e-4 { x / 3.0 } else { s / (x * x) - c / x };
    let reference = if j0.abs() >= j1.abs() { (j0, tmp[0]) } else { (j1, tmp[1]) };
    if reference.0 * reference.1 < 0.0 {
        scale = -scale;
    }
    for k in 0..=kmax {
        out[k] = tmp[k] * scale;
    }
    out
}
