//! Ply catalog and classical laminate theory.
//!
//! Plies are listed from the inner to the outer radius of the tube and the
//! through-thickness coordinate `z` is measured from the laminate mid-surface,
//! positive outward. Shear strains are engineering strains throughout.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{Num, Zero};

use crate::error::{Error, Result};
use crate::real::{inv3, zero3, Mat3, Real};

/// Orthotropic unidirectional ply.
#[derive(Debug, Clone, PartialEq)]
pub struct PlyMaterial<F> {
    pub name: String,
    /// Mass density (kg/m³).
    pub rho: F,
    pub e11: F,
    pub e22: F,
    /// In-plane shear modulus.
    pub e66: F,
    /// Major Poisson ratio.
    pub nu12: F,
    pub x: F,
    pub xp: F,
    pub y: F,
    pub yp: F,
    pub s: F,
    pub eta11: F,
    pub eta22: F,
    pub eta66: F,
    /// Cured ply thickness (m).
    pub t_ply: F,
}

/// Ply loss factors used when a material does not state its own.
pub const DEFAULT_LOSS_FACTORS: [f64; 3] = [0.0011, 0.0070, 0.0110];

/// Ply thickness assumed for catalog entries without one.
pub const DEFAULT_PLY_THICKNESS: f64 = 0.125e-3;

impl<F: Real> PlyMaterial<F> {
    #[allow(clippy::too_many_arguments)]
    fn from_table(
        name: &str,
        rho: f64,
        e11: f64,
        e22: f64,
        e66: f64,
        nu12: f64,
        strengths: [f64; 5],
        t_ply: f64,
    ) -> Self {
        let [x, xp, y, yp, s] = strengths;
        let l = F::lit;
        PlyMaterial {
            name: name.to_string(),
            rho: l(rho),
            e11: l(e11),
            e22: l(e22),
            e66: l(e66),
            nu12: l(nu12),
            x: l(x),
            xp: l(xp),
            y: l(y),
            yp: l(yp),
            s: l(s),
            eta11: l(DEFAULT_LOSS_FACTORS[0]),
            eta22: l(DEFAULT_LOSS_FACTORS[1]),
            eta66: l(DEFAULT_LOSS_FACTORS[2]),
            t_ply: l(t_ply),
        }
    }

    /// Built-in entry by name: `BE`, `CE_L`, `HM` or `HS`.
    pub fn builtin(name: &str) -> Option<Self> {
        let m = match name {
            "BE" => Self::from_table(
                "BE",
                1965.0,
                211e9,
                24.1e9,
                6.89e9,
                0.36,
                [1365e6, 1586e6, 45e6, 213e6, 62e6],
                0.1321e-3,
            ),
            "CE_L" => Self::from_table(
                "CE_L",
                1680.0,
                181e9,
                10.3e9,
                7.17e9,
                0.28,
                [1500e6, 1500e6, 40e6, 246e6, 68e6],
                DEFAULT_PLY_THICKNESS,
            ),
            "HM" => Self::from_table(
                "HM",
                1700.0,
                370e9,
                5.4e9,
                4.0e9,
                0.3,
                [1500e6, 470e6, 35e6, 200e6, 75e6],
                0.125e-3,
            ),
            "HS" => Self::from_table(
                "HS",
                1530.0,
                162e9,
                10e9,
                5.0e9,
                0.3,
                [2940e6, 1570e6, 60e6, 290e6, 100e6],
                0.125e-3,
            ),
            _ => return None,
        };
        Some(m)
    }

    /// Isotropic material expressed as a ply (used for metal tubes).
    pub fn isotropic(name: &str, rho: F, e: F, nu: F, t_ply: F) -> Self {
        let two = F::lit(2.0);
        let big = F::lit(1e12);
        PlyMaterial {
            name: name.to_string(),
            rho,
            e11: e,
            e22: e,
            e66: e / (two * (F::one() + nu)),
            nu12: nu,
            x: big,
            xp: big,
            y: big,
            yp: big,
            s: big,
            eta11: F::zero(),
            eta22: F::zero(),
            eta66: F::zero(),
            t_ply,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let z = F::zero();
        let positive = [
            ("rho", self.rho),
            ("e11", self.e11),
            ("e22", self.e22),
            ("e66", self.e66),
            ("x", self.x),
            ("xp", self.xp),
            ("y", self.y),
            ("yp", self.yp),
            ("s", self.s),
            ("t_ply", self.t_ply),
        ];
        for (key, v) in positive {
            if !(v > z) || !v.is_finite() {
                return Err(Error::invalid(format!("material {}: {key} must be positive", self.name)));
            }
        }
        if !(self.nu12 > z && self.nu12 < F::lit(0.5)) {
            return Err(Error::invalid(format!("material {}: nu12 must lie in (0, 0.5)", self.name)));
        }
        if !(self.nu12 * self.nu12 * self.e22 / self.e11 < F::one()) {
            return Err(Error::invalid(format!("material {}: nu12^2 E22/E11 must be < 1", self.name)));
        }
        for (key, v) in [("eta11", self.eta11), ("eta22", self.eta22), ("eta66", self.eta66)] {
            if !(v >= z && v <= F::lit(0.2)) {
                return Err(Error::invalid(format!("material {}: {key} must lie in [0, 0.2]", self.name)));
            }
        }
        Ok(())
    }

    /// Plane-stress reduced stiffness in ply axes.
    pub fn reduced_stiffness(&self) -> Mat3<F> {
        reduced_q(self.e11, self.e22, self.e66, self.nu12)
    }
}

fn reduced_q<T: Num + Copy>(e11: T, e22: T, e66: T, nu12: T) -> Mat3<T> {
    let d = T::one() - nu12 * nu12 * e22 / e11;
    let q11 = e11 / d;
    let q12 = nu12 * e22 / d;
    let q22 = e22 / d;
    let z = T::zero();
    [[q11, q12, z], [q12, q22, z], [z, z, e66]]
}

/// Reduced stiffness rotated by the ply angle into laminate axes.
pub(crate) fn rotate_q<T: Num + Copy>(q: &Mat3<T>, c: T, s: T) -> Mat3<T> {
    let (q11, q12, q22, q66) = (q[0][0], q[0][1], q[1][1], q[2][2]);
    let two = T::one() + T::one();
    let four = two + two;
    let c2 = c * c;
    let s2 = s * s;
    let c4 = c2 * c2;
    let s4 = s2 * s2;
    let s2c2 = s2 * c2;
    let b11 = q11 * c4 + two * (q12 + two * q66) * s2c2 + q22 * s4;
    let b12 = (q11 + q22 - four * q66) * s2c2 + q12 * (s4 + c4);
    let b22 = q11 * s4 + two * (q12 + two * q66) * s2c2 + q22 * c4;
    let b16 = (q11 - q12 - two * q66) * s * c2 * c + (q12 - q22 + two * q66) * s2 * s * c;
    let b26 = (q11 - q12 - two * q66) * s2 * s * c + (q12 - q22 + two * q66) * s * c2 * c;
    let b66 = (q11 + q22 - two * q12 - two * q66) * s2c2 + q66 * (s4 + c4);
    [[b11, b12, b16], [b12, b22, b26], [b16, b26, b66]]
}

/// Stress transformation from laminate axes to ply axes (`σ₁₂ = T·σ_xy`).
pub(crate) fn stress_to_ply<F: Real>(angle_deg: F) -> Mat3<F> {
    let (s, c) = angle_deg.to_radians().sin_cos();
    let two = F::lit(2.0);
    [
        [c * c, s * s, two * s * c],
        [s * s, c * c, -two * s * c],
        [-s * c, s * c, c * c - s * s],
    ]
}

/// One physical ply of a stacking sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Ply<F> {
    /// Orientation in degrees, within [-90, 90].
    pub angle: F,
    pub material: Arc<PlyMaterial<F>>,
}

impl<F: Real> Ply<F> {
    pub fn new(angle: F, material: Arc<PlyMaterial<F>>) -> Self {
        Ply { angle, material }
    }

    pub fn rotated_stiffness(&self) -> Mat3<F> {
        let (s, c) = self.angle.to_radians().sin_cos();
        rotate_q(&self.material.reduced_stiffness(), c, s)
    }
}

/// Ordered plies, inner to outer radius.
#[derive(Debug, Clone, PartialEq)]
pub struct StackingSequence<F> {
    pub plies: Vec<Ply<F>>,
}

impl<F: Real> StackingSequence<F> {
    pub fn new(plies: Vec<Ply<F>>) -> Result<Self> {
        let seq = StackingSequence { plies };
        seq.validate()?;
        Ok(seq)
    }

    /// Builds a sequence from `(angle, count, material)` groups.
    pub fn from_groups(groups: &[(F, usize, Arc<PlyMaterial<F>>)]) -> Result<Self> {
        let mut plies = Vec::new();
        for (angle, count, mat) in groups {
            for _ in 0..*count {
                plies.push(Ply::new(*angle, Arc::clone(mat)));
            }
        }
        Self::new(plies)
    }

    /// Single-material sequence from a list of angles.
    pub fn uniform(angles: &[f64], material: &Arc<PlyMaterial<F>>) -> Result<Self> {
        Self::new(angles.iter().map(|a| Ply::new(F::lit(*a), Arc::clone(material))).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.plies.is_empty() {
            return Err(Error::invalid("stacking sequence has no plies"));
        }
        let lim = F::lit(90.0);
        for p in &self.plies {
            if !(p.angle >= -lim && p.angle <= lim) {
                return Err(Error::invalid(format!("ply angle {} outside [-90, 90]", p.angle)));
            }
            p.material.validate()?;
        }
        Ok(())
    }

    pub fn thickness(&self) -> F {
        self.plies.iter().map(|p| p.material.t_ply).sum()
    }

    pub fn len(&self) -> usize {
        self.plies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plies.is_empty()
    }

    /// Same plies with every orientation negated.
    pub fn mirrored(&self) -> Self {
        StackingSequence {
            plies: self.plies.iter().map(|p| Ply::new(-p.angle, Arc::clone(&p.material))).collect(),
        }
    }

    /// All plies turned by `delta` degrees, wrapped back into [-90, 90].
    pub fn rotated_by(&self, delta: F) -> Self {
        let half = F::lit(90.0);
        let full = F::lit(180.0);
        let wrap = |a: F| {
            let mut a = a + delta;
            while a > half {
                a -= full;
            }
            while a < -half {
                a += full;
            }
            a
        };
        StackingSequence {
            plies: self.plies.iter().map(|p| Ply::new(wrap(p.angle), Arc::clone(&p.material))).collect(),
        }
    }

    /// Thickness-weighted mean density.
    pub fn density(&self) -> F {
        let t = self.thickness();
        self.plies.iter().map(|p| p.material.rho * p.material.t_ply).sum::<F>() / t
    }
}

/// Bracket notation with run-length subscripts, e.g. `[90,45,-45,0_6,90]`.
/// Material names are appended as `^NAME` when the sequence mixes materials.
impl<F: Real> fmt::Display for StackingSequence<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mixed = self.plies.iter().any(|p| p.material.name != self.plies[0].material.name);
        let mut groups: Vec<(F, &str, usize)> = Vec::new();
        for p in &self.plies {
            match groups.last_mut() {
                Some((a, m, n)) if *a == p.angle && *m == p.material.name => *n += 1,
                _ => groups.push((p.angle, &p.material.name, 1)),
            }
        }
        write!(f, "[")?;
        for (i, (a, m, n)) in groups.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", a.as_f64())?;
            if mixed {
                write!(f, "^{m}")?;
            }
            if *n > 1 {
                write!(f, "_{n}")?;
            }
        }
        write!(f, "]")
    }
}

/// A, B, D stiffnesses of a laminate and the in-plane compliance `a = A⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaminateStiffness<F> {
    pub a: Mat3<F>,
    pub b: Mat3<F>,
    pub d: Mat3<F>,
    pub a_inv: Mat3<F>,
    pub t_s: F,
}

impl<F: Real> LaminateStiffness<F> {
    /// Full 6x6 ABD matrix.
    pub fn abd(&self) -> [[F; 6]; 6] {
        let mut m = [[F::zero(); 6]; 6];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.a[i][j];
                m[i][j + 3] = self.b[i][j];
                m[i + 3][j] = self.b[i][j];
                m[i + 3][j + 3] = self.d[i][j];
            }
        }
        m
    }
}

pub fn build_abd<F: Real>(seq: &StackingSequence<F>) -> Result<LaminateStiffness<F>> {
    seq.validate()?;
    let t_s = seq.thickness();
    let two = F::lit(2.0);
    let three = F::lit(3.0);
    let mut a = zero3::<F>();
    let mut b = zero3::<F>();
    let mut d = zero3::<F>();
    let mut z0 = -t_s / two;
    for ply in &seq.plies {
        let z1 = z0 + ply.material.t_ply;
        let q = ply.rotated_stiffness();
        let (h1, h2, h3) = (z1 - z0, (z1 * z1 - z0 * z0) / two, (z1 * z1 * z1 - z0 * z0 * z0) / three);
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += q[i][j] * h1;
                b[i][j] += q[i][j] * h2;
                d[i][j] += q[i][j] * h3;
            }
        }
        z0 = z1;
    }
    let a_inv = inv3(&a).ok_or(Error::Singular("A"))?;
    Ok(LaminateStiffness { a, b, d, a_inv, t_s })
}

/// Equivalent isotropic beam properties of a laminated tube wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogenizedShaftMaterial<F> {
    pub e: F,
    pub g: F,
    pub nu: F,
    /// Timoshenko shear coefficient.
    pub kappa: F,
    pub rho: F,
    /// Equivalent longitudinal loss factor.
    pub eta_i: F,
}

impl<F: Real> HomogenizedShaftMaterial<F> {
    /// Isotropic material with `G = E/2(1+ν)`.
    pub fn isotropic(e: F, nu: F, rho: F, eta_i: F) -> Self {
        let two = F::lit(2.0);
        HomogenizedShaftMaterial { e, g: e / (two * (F::one() + nu)), nu, kappa: shear_coefficient(nu), rho, eta_i }
    }
}

pub fn shear_coefficient<F: Real>(nu: F) -> F {
    F::lit(2.0) * (F::one() + nu) / (F::lit(4.0) + F::lit(3.0) * nu)
}

pub fn homogenize<F: Real>(seq: &StackingSequence<F>) -> Result<HomogenizedShaftMaterial<F>> {
    let lam = build_abd(seq)?;
    let ai = &lam.a_inv;
    let e = F::one() / (ai[0][0] * lam.t_s);
    let g = F::one() / (ai[2][2] * lam.t_s);
    let nu = -ai[0][1] / ai[0][0];
    Ok(HomogenizedShaftMaterial {
        e,
        g,
        nu,
        kappa: shear_coefficient(nu),
        rho: seq.density(),
        eta_i: homogenize_damping(seq)?,
    })
}

/// Longitudinal loss factor from the complex-modulus laminate compliance.
pub fn homogenize_damping<F: Real>(seq: &StackingSequence<F>) -> Result<F> {
    seq.validate()?;
    let mut a = zero3::<Complex<F>>();
    for ply in &seq.plies {
        let m = &*ply.material;
        let cplx = |e: F, eta: F| Complex::new(e, -e * eta);
        let q = reduced_q(
            cplx(m.e11, m.eta11),
            cplx(m.e22, m.eta22),
            cplx(m.e66, m.eta66),
            Complex::new(m.nu12, F::zero()),
        );
        let (s, c) = ply.angle.to_radians().sin_cos();
        let qb = rotate_q(&q, Complex::new(c, F::zero()), Complex::new(s, F::zero()));
        let h = Complex::new(m.t_ply, F::zero());
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] = a[i][j] + qb[i][j] * h;
            }
        }
    }
    // normalize first so the cofactor products stay in range for f32
    let scale = a[0][0].norm();
    if !(scale > F::zero()) {
        return Err(Error::Singular("complex A"));
    }
    for row in a.iter_mut() {
        for v in row.iter_mut() {
            *v = *v / scale;
        }
    }
    let ai = inv3(&a).ok_or(Error::Singular("complex A"))?;
    if ai[0][0].is_zero() {
        return Err(Error::Singular("complex a11"));
    }
    // the real factor `scale / t_s` cancels in the loss-factor ratio
    let ex = Complex::new(F::one(), F::zero()) / ai[0][0];
    Ok(-ex.im / ex.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::mul3;

    fn mat(name: &str) -> Arc<PlyMaterial<f64>> {
        Arc::new(PlyMaterial::builtin(name).unwrap())
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn single_ply_a11_is_q11_times_thickness() {
        let hm = mat("HM");
        let lam = build_abd(&StackingSequence::uniform(&[0.0], &hm).unwrap()).unwrap();
        let q11 = hm.e11 / (1.0 - hm.nu12 * hm.nu12 * hm.e22 / hm.e11);
        assert!(rel(lam.a[0][0], q11 * hm.t_ply) < 1e-14);
    }

    #[test]
    fn symmetric_sequence_has_no_coupling() {
        let lam = build_abd(&StackingSequence::uniform(&[45.0, -45.0, -45.0, 45.0], &mat("HS")).unwrap()).unwrap();
        let scale = lam.a[0][0] * lam.t_s;
        for row in lam.b {
            for v in row {
                assert!(v.abs() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn zinberg_thickness() {
        let seq = StackingSequence::uniform(&[90.0, 45.0, -45.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 90.0], &mat("BE")).unwrap();
        assert!((seq.thickness() - 1.321e-3).abs() < 1e-12);
    }

    #[test]
    fn compliance_is_inverse() {
        let seq = StackingSequence::uniform(&[90.0, 30.0, -60.0, 0.0], &mat("BE")).unwrap();
        let lam = build_abd(&seq).unwrap();
        let p = mul3(&lam.a, &lam.a_inv);
        for (i, row) in p.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn unidirectional_limits() {
        let hm = mat("HM");
        let h0 = homogenize(&StackingSequence::uniform(&[0.0; 4], &hm).unwrap()).unwrap();
        assert!(rel(h0.e, hm.e11) < 1e-9);
        assert!((h0.eta_i - 0.0011).abs() < 1e-6);
        let h90 = homogenize(&StackingSequence::uniform(&[90.0; 4], &hm).unwrap()).unwrap();
        assert!((h90.eta_i - 0.0070).abs() < 1e-6);
    }

    #[test]
    fn quasi_isotropic_rotation_invariance() {
        let seq =
            StackingSequence::uniform(&[0.0, 45.0, -45.0, 90.0, 90.0, -45.0, 45.0, 0.0], &mat("HS")).unwrap();
        let e0 = homogenize(&seq).unwrap().e;
        let e30 = homogenize(&seq.rotated_by(30.0)).unwrap().e;
        assert!(rel(e30, e0) < 1e-6);
    }

    #[test]
    fn zinberg_homogenized_constants() {
        let seq = StackingSequence::uniform(&[90.0, 45.0, -45.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 90.0], &mat("BE")).unwrap();
        let h = homogenize(&seq).unwrap();
        assert!(rel(h.e, 142.8e9) < 2e-3, "E = {}", h.e);
        assert!(rel(h.g, 16.56e9) < 2e-3, "G = {}", h.g);
        assert!(h.kappa > 0.5 && h.kappa < 0.67);
    }

    #[test]
    fn display_uses_run_lengths() {
        let seq = StackingSequence::uniform(&[90.0, 45.0, -45.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 90.0], &mat("BE")).unwrap();
        assert_eq!(seq.to_string(), "[90,45,-45,0_6,90]");
        let hybrid = StackingSequence::new(vec![Ply::new(90.0, mat("HM")), Ply::new(45.0, mat("HS"))]).unwrap();
        assert_eq!(hybrid.to_string(), "[90^HM,45^HS]");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(StackingSequence::<f64>::new(vec![]).is_err());
        assert!(StackingSequence::uniform(&[95.0], &mat("HM")).is_err());
        let mut bad = PlyMaterial::<f64>::builtin("HM").unwrap();
        bad.nu12 = 0.7;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let hm = Arc::new(PlyMaterial::<f32>::builtin("HM").unwrap());
        let h = homogenize(&StackingSequence::uniform(&[0.0, 90.0, 45.0, -45.0], &hm).unwrap()).unwrap();
        let h64 = homogenize(&StackingSequence::uniform(&[0.0, 90.0, 45.0, -45.0], &mat("HM")).unwrap()).unwrap();
        assert!(((h.e as f64) - h64.e).abs() / h64.e < 1e-4);
    }
}
