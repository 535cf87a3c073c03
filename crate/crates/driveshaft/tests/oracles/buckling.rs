//! Unseeded brute-force search for the shell buckling torque.

use driveshaft::buckling::{hayashi_long, stiffness_matrix};
use driveshaft::materials::LaminateStiffness;
use driveshaft::shaft::ShaftGeometry;

pub fn det(lam: &LaminateStiffness<f64>, r: f64, h: u32, lambda: f64, t: f64) -> f64 {
    let k = stiffness_matrix(lam, r, h as f64, lambda, t);
    k[0][0] * (k[1][1] * k[2][2] - k[1][2] * k[2][1]) - k[0][1] * (k[1][0] * k[2][2] - k[1][2] * k[2][0])
        + k[0][2] * (k[1][0] * k[2][1] - k[1][1] * k[2][0])
}

/// Smallest |T| at which det K changes sign, over h = 2..8 and a fixed log grid in p.
///
/// Torque is stepped from zero in the requested direction and each bracket is
/// closed by bisection. Nothing here uses the Flügge seed or the cubic form.
/// h = 1 is left out, as in the library, because its torque terms drop rank.
pub fn dense_scan(lam: &LaminateStiffness<f64>, g: &ShaftGeometry<f64>, sign: f64) -> (u32, f64) {
    let r = g.r_m;
    let t_max = 6.0 * hayashi_long(lam, r);
    let steps = 160;
    let dt = t_max / steps as f64;
    let (p_lo, p_hi, n_p) = (0.05f64, 200.0f64, 2000);
    let mut best = (0, f64::INFINITY);
    for h in 2..=8 {
        for i in 0..n_p {
            let p = (p_lo.ln() + (p_hi / p_lo).ln() * i as f64 / (n_p - 1) as f64).exp();
            let lambda = sign * p * std::f64::consts::PI * r / g.l;
            let f = |t: f64| det(lam, r, h, lambda, sign * t);
            let mut a = 0.0;
            let mut fa = f(a);
            for k in 1..=steps {
                if a >= best.1 {
                    break;
                }
                let b = k as f64 * dt;
                let fb = f(b);
                if fa.signum() != fb.signum() {
                    let (mut lo, mut hi, mut flo) = (a, b, fa);
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        let fm = f(mid);
                        if fm.signum() == flo.signum() {
                            lo = mid;
                            flo = fm;
                        } else {
                            hi = mid;
                        }
                    }
                    let root = 0.5 * (lo + hi);
                    if root < best.1 {
                        best = (h, root);
                    }
                    break;
                }
                a = b;
                fa = fb;
            }
        }
    }
    best
}
