//! Two-coordinate Galerkin model of a shaft on elastic supports: one
//! pinned-pinned shaft mode plus the rigid support motion (translation for odd
//! harmonics, rocking for even ones), assembled by quadrature.

use std::f64::consts::PI;

use nalgebra::{Complex, Matrix2, Matrix4};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use driveshaft::materials::HomogenizedShaftMaterial;
use driveshaft::rotordynamics::{modal_parameters, stability_threshold, SupportProperties};
use driveshaft::shaft::{section_from_density, ShaftGeometry};

#[derive(Debug, Clone, Copy)]
pub struct Rig {
    pub e: f64,
    pub nu: f64,
    pub rho: f64,
    pub r: f64,
    pub t: f64,
    pub l: f64,
    pub m_b: f64,
    pub k_e: f64,
    pub eta_i: f64,
    pub eta_e: f64,
}

impl Rig {
    pub fn material(&self) -> HomogenizedShaftMaterial<f64> {
        HomogenizedShaftMaterial::isotropic(self.e, self.nu, self.rho, self.eta_i)
    }
    pub fn geometry(&self) -> ShaftGeometry<f64> {
        ShaftGeometry::new(self.r, self.l, self.t).unwrap()
    }
    pub fn support(&self) -> SupportProperties<f64> {
        SupportProperties::new(self.m_b, self.k_e, self.eta_e).unwrap()
    }
}

pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let n = 4000;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Mass, gyroscopic and stiffness matrices of harmonic `n`.
pub struct Galerkin {
    pub m: Matrix2<f64>,
    pub g11: f64,
    pub k: Matrix2<f64>,
}

pub fn galerkin(rig: &Rig, n: u32) -> Galerkin {
    let geom = rig.geometry();
    let mat = rig.material();
    let sec = section_from_density(&geom, rig.rho);
    let l = rig.l;
    let k = n as f64 * PI / l;
    let rho_s = rig.rho * sec.s;
    let phi = |x: f64| (k * x).sin();
    let dphi = |x: f64| k * (k * x).cos();
    let ddphi = |x: f64| -k * k * (k * x).sin();
    let odd = n % 2 == 1;
    let support = |x: f64| if odd { 1.0 } else { x - l / 2.0 };
    let arm2 = if odd { 1.0 } else { l * l / 4.0 };

    let rot = rig.rho * sec.i_y * (1.0 + mat.e / (mat.kappa * mat.g));
    let m11 = rho_s * simpson(|x| phi(x) * phi(x), 0.0, l) + rot * simpson(|x| dphi(x) * dphi(x), 0.0, l);
    let m12 = rho_s * simpson(|x| phi(x) * support(x), 0.0, l);
    let m22 = rho_s * simpson(|x| support(x) * support(x), 0.0, l) + 2.0 * rig.m_b * arm2;
    let g11 = rig.rho * sec.i_x * simpson(|x| dphi(x) * dphi(x), 0.0, l);
    let k11 = mat.e * sec.i_y * simpson(|x| ddphi(x) * ddphi(x), 0.0, l);
    let k22 = 2.0 * rig.k_e * arm2;
    Galerkin { m: Matrix2::new(m11, m12, m12, m22), g11, k: Matrix2::new(k11, 0.0, 0.0, k22) }
}

/// Synchronous whirl speeds: eigenvalues of `K x = Ω² (M ∓ G) x`, ascending.
pub fn synchronous_speeds(g: &Galerkin, forward: bool) -> [f64; 2] {
    let mut m = g.m;
    m[(0, 0)] += if forward { -g.g11 } else { g.g11 };
    let chol = m.cholesky().expect("mass matrix is positive definite");
    let linv = chol.l().try_inverse().unwrap();
    let c = linv * g.k * linv.transpose();
    let mut ev: Vec<f64> = c.symmetric_eigen().eigenvalues.iter().map(|x| x.sqrt()).collect();
    ev.sort_by(f64::total_cmp);
    [ev[0], ev[1]]
}

/// Roots of `c4 ω⁴ + … + c0` via companion-matrix eigenvalues.
pub fn quartic_roots(c: [Complex<f64>; 5]) -> Vec<Complex<f64>> {
    let lead = c[4];
    let mut m = Matrix4::<Complex<f64>>::zeros();
    for i in 1..4 {
        m[(i, i - 1)] = Complex::new(1.0, 0.0);
    }
    for i in 0..4 {
        m[(i, 3)] = -c[i] / lead;
    }
    let (_, t) = m.schur().unpack();
    (0..4).map(|i| t[(i, i)]).collect()
}

/// Whether any forward whirl mode of harmonic `n` grows at spin `omega`,
/// with hysteretic damping `k(1 + iη sign(ω_rel))` on shaft and supports.
pub fn unstable_at(g: &Galerkin, rig: &Rig, omega: f64) -> bool {
    let i = Complex::new(0.0, 1.0);
    let re = |x: f64| Complex::new(x, 0.0);
    // only modes whirling slower than the spin see negative internal damping
    let a0 = re(g.k[(0, 0)]) * (re(1.0) - i * rig.eta_i);
    let a1 = re(omega * g.g11);
    let a2 = re(-g.m[(0, 0)]);
    let b0 = re(g.k[(1, 1)]) * (re(1.0) + i * rig.eta_e);
    let b2 = re(-g.m[(1, 1)]);
    let m12 = re(g.m[(0, 1)]);
    let coeffs = [a0 * b0, a1 * b0, a0 * b2 + a2 * b0, a1 * b2, a2 * b2 - m12 * m12];
    quartic_roots(coeffs).iter().any(|w| w.re > 0.0 && w.re < omega && w.im < -1e-9 * w.re)
}

pub fn swept_threshold(rig: &Rig, n_max: u32, upper: f64) -> Option<f64> {
    let gs: Vec<Galerkin> = (1..=n_max).map(|n| galerkin(rig, n)).collect();
    let steps = 20_000;
    (1..=steps)
        .map(|k| upper * k as f64 / steps as f64)
        .find(|&w| gs.iter().any(|g| unstable_at(g, rig, w)))
}

pub fn closed_threshold(rig: &Rig, n_max: u32) -> Option<f64> {
    let geom = rig.geometry();
    let sec = section_from_density(&geom, rig.rho);
    let ps: Vec<_> =
        (1..=n_max).map(|n| modal_parameters(&geom, &sec, &rig.material(), &rig.support(), n).unwrap()).collect();
    stability_threshold(&ps, rig.eta_i, rig.eta_e).unwrap().omega_th
}

pub fn pvc(l: f64) -> Rig {
    Rig { e: 2.2e9, nu: 0.4, rho: 1350.0, r: 23.25e-3, t: 2.5e-3, l, m_b: 2.608, k_e: 2.58e5, eta_i: 0.025, eta_e: 0.07 }
}

/// Undamped rig drawn log-uniformly over a wide range of materials and supports.
pub fn random_rig(rng: &mut ChaCha8Rng) -> Rig {
    let log = |rng: &mut ChaCha8Rng, a: f64, b: f64| (rng.gen_range(a.ln()..b.ln())).exp();
    Rig {
        e: log(rng, 2e9, 4e11),
        nu: rng.gen_range(0.2..0.45),
        rho: rng.gen_range(1200.0..8000.0),
        r: rng.gen_range(0.015..0.08),
        t: rng.gen_range(0.8e-3..4e-3),
        l: rng.gen_range(0.5..4.0),
        m_b: log(rng, 0.2, 20.0),
        k_e: log(rng, 1e4, 1e8),
        eta_i: 0.0,
        eta_e: 0.0,
    }
}
