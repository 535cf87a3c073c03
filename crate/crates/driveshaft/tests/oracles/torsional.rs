//! Exact roots of the two-inertia torsional characteristic equation.

/// Characteristic function of a uniform shaft carrying end inertias, written
/// without the tangent so it has no poles:
/// `(υ² J_G J_T − J_s²) sin υ − υ J_s (J_G + J_T) cos υ`.
pub fn characteristic(u: f64, jg: f64, jt: f64, js: f64) -> f64 {
    (u * u * jg * jt - js * js) * u.sin() - u * js * (jg + jt) * u.cos()
}

/// First `n` positive roots by sign-change scan and bisection.
pub fn exact_roots(jg: f64, jt: f64, js: f64, n: usize) -> Vec<f64> {
    let f = |u| characteristic(u, jg, jt, js);
    let du = 1e-4;
    let mut roots = Vec::new();
    let mut a = du;
    let mut fa = f(a);
    while roots.len() < n {
        let b = a + du;
        let fb = f(b);
        if fa == 0.0 || fa.signum() != fb.signum() {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if f(mid).signum() == f(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    roots
}
