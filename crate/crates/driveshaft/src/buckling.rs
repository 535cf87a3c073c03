//! Torsional buckling of long laminated cylinders.
//!
//! The Flügge shell equations with the laminate A, B, D stiffnesses are reduced
//! with the helical displacement field
//! `u = a sin(hφ + pπx/l)`, `v = b sin(hφ + pπx/l)`, `w = c cos(hφ + pπx/l)`
//! to a 3x3 system `K(T) U = 0` whose entries are linear in the torque. The
//! buckling torque is the smallest root of `det K` over the wave numbers.
//!
//! Index 3 of the stiffness matrices denotes the shear component (A13 is the
//! usual A16).

use crate::error::{Error, Result};
use crate::materials::LaminateStiffness;
use crate::real::{det3, Mat3, Real};
use crate::shaft::ShaftGeometry;
use crate::strength::TorqueDirection;

/// Shell stiffness matrix for circumferential wave number `h`, axial wave
/// parameter `lambda = pπr/l` and torque `torque`.
///
/// `lambda` carries the helix hand: a negative value describes the mirrored wave.
pub fn stiffness_matrix<F: Real>(lam: &LaminateStiffness<F>, r: F, h: F, lambda: F, torque: F) -> Mat3<F> {
    let (a, b, d) = (&lam.a, &lam.b, &lam.d);
    let (a11, a12, a13, a22, a23, a33) = (a[0][0], a[0][1], a[0][2], a[1][1], a[1][2], a[2][2]);
    let (b11, b12, b13, b22, b23, b33) = (b[0][0], b[0][1], b[0][2], b[1][1], b[1][2], b[2][2]);
    let (d11, d12, d13, d22, d23, d33) = (d[0][0], d[0][1], d[0][2], d[1][1], d[1][2], d[2][2]);
    let t = torque / F::PI();
    let c = F::lit;
    let r2 = r * r;
    let (h2, h3, h4) = (h * h, h * h * h, h * h * h * h);
    let l = lambda;
    let (l2, l3, l4) = (l * l, l * l * l, l * l * l * l);

    let k11 = h2 * (-a33 * r2 + b33 * r - d33) + l2 * (-a11 * r2 - b11 * r) + l * (-c(2.0) * a13 * h * r2 + t * h);
    let k12 = -a23 * h2 * r2
        + l2 * (-a13 * r2 - c(2.0) * b13 * r - d13)
        + l * (-a12 * h * r2 - a33 * h * r2 - b12 * h * r - b33 * h * r);
    let k13 = h3 * (-b23 * r + d23)
        + h * (-a23 * r2 + b23 * r - d23)
        + l3 * (-b11 * r - d11)
        + l2 * (-c(3.0) * b13 * h * r - d13 * h)
        + l * (-a12 * r2 - b12 * h2 * r - c(2.0) * b33 * h2 * r + d33 * h2);
    let k22 = h2 * (-a22 * r2 - b22 * r)
        + l2 * (-a33 * r2 + b33 * r - c(2.5) * d33)
        + l * (-c(2.0) * a23 * h * r2 - c(4.0) * b23 * h * r - c(2.0) * d23 * h + t * h);
    let k23 = -a22 * h * r2 - b22 * h3 * r
        + l3 * (-b13 * r - c(2.0) * d13)
        + l2 * (-b12 * h * r - c(2.0) * b33 * h * r - d12 * h - c(3.0) * d33 * h)
        + l * (-a23 * r2 - c(3.0) * b23 * h2 * r - b23 * r - c(2.0) * d23 * h2 + t);
    let k33 = -a22 * r2 + b22 * r - d11 * l4 - c(4.0) * d13 * h * l3 - d22 * h4 - d22
        + h2 * (-c(2.0) * b22 * r + c(2.0) * d22)
        + l2 * (-c(3.0) * b12 * r - c(2.0) * d12 * h2 - c(4.0) * d33 * h2)
        + l * (-c(4.0) * b23 * h * r - c(4.0) * d23 * h3 + c(2.0) * d23 * h + t * h);

    let s = F::one() / r2;
    [[k11 * s, k12 * s, k13 * s], [k12 * s, k22 * s, k23 * s], [k13 * s, k23 * s, k33 * s]]
}

/// Eq. (13) as printed: `11 √r (A11 − A12²/A22)^{1/4} D22^{3/4}`.
pub fn hayashi_long<F: Real>(lam: &LaminateStiffness<F>, r: F) -> F {
    let ax = axial_stiffness(lam);
    F::lit(11.0) * r.sqrt() * ax.powf(F::lit(0.25)) * lam.d[1][1].powf(F::lit(0.75))
}

/// Coefficient of the moderate-length form, fitted to the published Hayashi columns.
pub const HAYASHI_SHORT_COEFF: f64 = 24.4;

/// Length-dependent companion of [`hayashi_long`]:
/// `C r^{5/4} l^{-1/2} (A11 − A12²/A22)^{3/8} D22^{5/8}`.
pub fn hayashi_short<F: Real>(lam: &LaminateStiffness<F>, r: F, l: F) -> F {
    let ax = axial_stiffness(lam);
    F::lit(HAYASHI_SHORT_COEFF) * r.powf(F::lit(1.25)) / l.sqrt()
        * ax.powf(F::lit(0.375))
        * lam.d[1][1].powf(F::lit(0.625))
}

/// Hayashi buckling torque: the larger of the long-tube and moderate-length forms.
pub fn hayashi_torque<F: Real>(lam: &LaminateStiffness<F>, geom: &ShaftGeometry<F>) -> F {
    hayashi_long(lam, geom.r_m).max(hayashi_short(lam, geom.r_m, geom.l))
}

fn axial_stiffness<F: Real>(lam: &LaminateStiffness<F>) -> F {
    lam.a[0][0] - lam.a[0][1] * lam.a[0][1] / lam.a[1][1]
}

/// Axial half-wave count of the isotropic long-cylinder mode, used as the search centre.
pub fn flugge_seed<F: Real>(geom: &ShaftGeometry<F>) -> F {
    let (r, t, l) = (geom.r_m, geom.t_s, geom.l);
    l * (F::lit(48.0) * t * t / (F::lit(12.0) * r * r)).powf(F::lit(0.25)) / (F::PI() * r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BucklingSearch {
    /// Circumferential wave numbers tried (h = 1 is excluded, see `Default`).
    pub h_min: u32,
    pub h_max: u32,
    /// Grid points between `p0/span` and `p0·span`.
    pub grid_points: usize,
    pub span: f64,
    /// Relative width at which the golden-section refinement stops.
    pub rel_tol: f64,
}

impl Default for BucklingSearch {
    fn default() -> Self {
        // With h = 1 the torque-coefficient matrix of K loses rank and the cubic
        // degenerates, producing spurious low roots.
        BucklingSearch { h_min: 2, h_max: 4, grid_points: 40, span: 8.0, rel_tol: 1e-4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BucklingMode<F> {
    pub h: u32,
    pub p: F,
    pub lambda: F,
    /// Signed buckling torque.
    pub torque: F,
    /// Normalized amplitudes `(a, b, c)` of `(u, v, w)`.
    pub shape: [F; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BucklingResult<F> {
    pub positive: BucklingMode<F>,
    pub negative: BucklingMode<F>,
}

impl<F: Real> BucklingResult<F> {
    pub fn t_buck_pos(&self) -> F {
        self.positive.torque
    }

    pub fn t_buck_neg(&self) -> F {
        self.negative.torque
    }
}

/// Coefficients `[c0, c1, c2, c3]` of `det K` as a cubic in `τ = T/scale`,
/// interpolated from four evaluations at τ = ±0.5, ±1.5.
pub fn det_cubic<F: Real>(lam: &LaminateStiffness<F>, r: F, h: F, lambda: F, scale: F) -> [F; 4] {
    let half = F::lit(0.5);
    let three_half = F::lit(1.5);
    let f = |tau: F| det3(&stiffness_matrix(lam, r, h, lambda, tau * scale));
    let (fm2, fm1, fp1, fp2) = (f(-three_half), f(-half), f(half), f(three_half));
    let two = F::lit(2.0);
    let (e1, e2) = ((fp1 + fm1) / two, (fp2 + fm2) / two);
    let (o1, o2) = ((fp1 - fm1) / two, (fp2 - fm2) / two);
    let c2 = (e2 - e1) / two;
    let c0 = e1 - c2 / F::lit(4.0);
    let c3 = (o2 - F::lit(3.0) * o1) / F::lit(3.0);
    let c1 = two * o1 - c3 / F::lit(4.0);
    [c0, c1, c2, c3]
}

/// Real roots of `c0 + c1 x + c2 x² + c3 x³`.
pub fn cubic_real_roots<F: Real>(c: [F; 4]) -> Vec<F> {
    let [c0, c1, c2, c3] = c;
    let mag = c0.abs().max(c1.abs()).max(c2.abs()).max(c3.abs());
    if mag == F::zero() {
        return Vec::new();
    }
    let eps = F::epsilon() * F::lit(16.0);
    let mut roots = Vec::with_capacity(3);
    if c3.abs() <= eps * mag {
        if c2.abs() <= eps * mag {
            if c1 != F::zero() {
                roots.push(-c0 / c1);
            }
            return roots;
        }
        let disc = c1 * c1 - F::lit(4.0) * c2 * c0;
        if disc >= F::zero() {
            let q = -(c1 + c1.signum() * disc.sqrt()) / F::lit(2.0);
            roots.push(q / c2);
            if q != F::zero() {
                roots.push(c0 / q);
            }
        }
        return roots;
    }
    let (a, b, cc) = (c2 / c3, c1 / c3, c0 / c3);
    let three = F::lit(3.0);
    let p = b - a * a / three;
    let q = F::lit(2.0) * a * a * a / F::lit(27.0) - a * b / three + cc;
    let shift = a / three;
    let disc = q * q / F::lit(4.0) + p * p * p / F::lit(27.0);
    if disc > F::zero() {
        let s = disc.sqrt();
        let u = (-q / F::lit(2.0) + s).cbrt();
        let v = (-q / F::lit(2.0) - s).cbrt();
        roots.push(u + v - shift);
    } else {
        let m = F::lit(2.0) * (-p / three).sqrt();
        let arg = if m == F::zero() {
            F::zero()
        } else {
            (three * q / (p * m)).max(-F::one()).min(F::one())
        };
        let theta = arg.acos() / three;
        let two_pi_3 = F::lit(2.0) * F::PI() / three;
        for k in 0..3 {
            roots.push(m * (theta - two_pi_3 * F::lit(k as f64)).cos() - shift);
        }
    }
    // Newton polish against cancellation in the closed form
    for x in roots.iter_mut() {
        for _ in 0..3 {
            let fx = c0 + *x * (c1 + *x * (c2 + *x * c3));
            let dfx = c1 + *x * (F::lit(2.0) * c2 + *x * three * c3);
            if dfx == F::zero() {
                break;
            }
            let step = fx / dfx;
            if !step.is_finite() {
                break;
            }
            *x -= step;
        }
    }
    roots
}

/// Smallest root of the requested sign at one wave pair, `None` when absent.
pub fn root_at<F: Real>(
    lam: &LaminateStiffness<F>,
    r: F,
    h: u32,
    lambda: F,
    scale: F,
    direction: TorqueDirection,
) -> Option<F> {
    let coeffs = det_cubic(lam, r, F::from_u32(h).unwrap(), lambda, scale);
    let sign = direction.sign::<F>();
    cubic_real_roots(coeffs)
        .into_iter()
        .map(|tau| tau * scale * sign)
        .filter(|t| *t > F::zero() && t.is_finite())
        .fold(None, |acc: Option<F>, t| Some(acc.map_or(t, |a| a.min(t))))
}

struct Probe<F> {
    h: u32,
    p: F,
    t: F,
}

pub fn buckling_torque<F: Real>(
    lam: &LaminateStiffness<F>,
    geom: &ShaftGeometry<F>,
    direction: TorqueDirection,
    cfg: &BucklingSearch,
) -> Result<BucklingMode<F>> {
    geom.validate()?;
    if cfg.h_min == 0 || cfg.h_max < cfg.h_min || cfg.grid_points < 3 || !(cfg.span > 1.0) {
        return Err(Error::invalid("buckling search configuration"));
    }
    let r = geom.r_m;
    let p0 = flugge_seed(geom);
    let scale = hayashi_long(lam, r);
    let wave = direction.sign::<F>() * F::PI() * r / geom.l;
    let eval = |h: u32, p: F| root_at(lam, r, h, wave * p, scale, direction).unwrap_or(F::infinity());

    let ln_lo = (p0 / F::lit(cfg.span)).ln();
    let ln_hi = (p0 * F::lit(cfg.span)).ln();
    let n = cfg.grid_points;
    let step = (ln_hi - ln_lo) / F::from_usize(n - 1).unwrap();
    let mut best: Option<Probe<F>> = None;
    for h in cfg.h_min..=cfg.h_max {
        let grid: Vec<F> = (0..n).map(|i| (ln_lo + step * F::from_usize(i).unwrap()).exp()).collect();
        let vals: Vec<F> = grid.iter().map(|&p| eval(h, p)).collect();
        let (imin, tmin) = vals
            .iter()
            .enumerate()
            .fold((0, F::infinity()), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        if !tmin.is_finite() {
            continue;
        }
        let lo = grid[imin.saturating_sub(1)];
        let hi = grid[(imin + 1).min(n - 1)];
        let (p, t) = golden_min(|p| eval(h, p), lo, hi, F::lit(cfg.rel_tol));
        let (p, t) = if t <= tmin { (p, t) } else { (grid[imin], tmin) };
        let better = match &best {
            None => true,
            Some(b) => t < b.t || (t == b.t && p < b.p),
        };
        if better {
            best = Some(Probe { h, p, t });
        }
    }
    let best = best.ok_or_else(|| Error::NoBucklingRoot(format!("no root on the grid around p0 = {}", p0)))?;
    let lambda = wave * best.p;
    let torque = direction.sign::<F>() * best.t;
    let k = stiffness_matrix(lam, r, F::from_u32(best.h).unwrap(), lambda, torque);
    Ok(BucklingMode { h: best.h, p: best.p, lambda, torque, shape: null_vector(&k) })
}

pub fn buckling_torques<F: Real>(
    lam: &LaminateStiffness<F>,
    geom: &ShaftGeometry<F>,
    cfg: &BucklingSearch,
) -> Result<BucklingResult<F>> {
    Ok(BucklingResult {
        positive: buckling_torque(lam, geom, TorqueDirection::Positive, cfg)?,
        negative: buckling_torque(lam, geom, TorqueDirection::Negative, cfg)?,
    })
}

/// Golden-section minimum of `f` on `[lo, hi]`, searched in log space.
fn golden_min<F: Real>(f: impl Fn(F) -> F, lo: F, hi: F, rel_tol: F) -> (F, F) {
    let g = F::lit(0.618_033_988_749_894_9);
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1.exp());
    let mut f2 = f(x2.exp());
    let tol = rel_tol.ln_1p();
    let mut iters = 0;
    while (b - a) > tol && iters < 200 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1.exp());
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2.exp());
        }
        iters += 1;
    }
    if f1 <= f2 {
        (x1.exp(), f1)
    } else {
        (x2.exp(), f2)
    }
}

/// Unit vector spanning the (numerical) null space of a nearly singular 3x3 matrix.
fn null_vector<F: Real>(k: &Mat3<F>) -> [F; 3] {
    let cross = |a: &[F; 3], b: &[F; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let candidates = [cross(&k[0], &k[1]), cross(&k[0], &k[2]), cross(&k[1], &k[2])];
    let norm = |v: &[F; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let best = candidates
        .iter()
        .max_by(|a, b| norm(a).partial_cmp(&norm(b)).unwrap_or(std::cmp::Ordering::Equal))
        .copied()
        .unwrap_or([F::zero(); 3]);
    let n = norm(&best);
    if n > F::zero() {
        [best[0] / n, best[1] / n, best[2] / n]
    } else {
        best
    }
}
