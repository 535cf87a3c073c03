//! Ply stresses of a laminated tube under pure torsion and first-ply-failure
//! torque capacity.

use crate::error::{Error, Result};
use crate::materials::{build_abd, stress_to_ply, StackingSequence};
use crate::real::{mul3v, Real};
use crate::shaft::ShaftGeometry;

/// How laminate bending-extension coupling is handled in the strain recovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coupling {
    /// Solve the full ABD system with zero moments.
    AsIs,
    /// Drop B: the closed tube is assumed to block the coupling.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FailureCriterion<F> {
    /// Quadratic Tsai-Wu with interaction coefficient `f12` in the
    /// `2 f12 / √(X X' Y Y') σ₁ σ₂` term.
    TsaiWu { f12: F },
    /// Fibre and shear maximum stress; transverse stress is ignored.
    MaxStress,
}

/// Interaction coefficient used unless configured otherwise.
pub const DEFAULT_F12: f64 = -0.5;

impl<F: Real> FailureCriterion<F> {
    pub fn tsai_wu() -> Self {
        FailureCriterion::TsaiWu { f12: F::lit(DEFAULT_F12) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TorqueDirection {
    Positive,
    Negative,
}

impl TorqueDirection {
    pub fn sign<F: Real>(self) -> F {
        match self {
            TorqueDirection::Positive => F::one(),
            TorqueDirection::Negative => -F::one(),
        }
    }
}

/// Stress at one face of one ply, in ply axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlyFaceStress<F> {
    pub ply: usize,
    /// Through-thickness position of the face.
    pub z: F,
    /// `[σ11, σ22, σ12]`.
    pub sigma: [F; 3],
}

/// Stresses for the applied torque, two faces per ply.
#[derive(Debug, Clone, PartialEq)]
pub struct PlyStressState<F> {
    pub torque: F,
    pub faces: Vec<PlyFaceStress<F>>,
}

pub fn ply_stresses_under_torsion<F: Real>(
    seq: &StackingSequence<F>,
    geom: &ShaftGeometry<F>,
    torque: F,
    coupling: Coupling,
) -> Result<PlyStressState<F>> {
    let lam = build_abd(seq)?;
    let r = geom.r_m;
    let n_xy = torque / (F::lit(2.0) * F::PI() * r * r);
    let (eps0, kappa) = match coupling {
        Coupling::Zero => (mul3v(&lam.a_inv, &[F::zero(), F::zero(), n_xy]), [F::zero(); 3]),
        Coupling::AsIs => {
            let x = solve6(lam.abd(), [F::zero(), F::zero(), n_xy, F::zero(), F::zero(), F::zero()])
                .ok_or(Error::Singular("ABD"))?;
            ([x[0], x[1], x[2]], [x[3], x[4], x[5]])
        }
    };
    let mut faces = Vec::with_capacity(2 * seq.len());
    let mut z0 = -lam.t_s / F::lit(2.0);
    for (i, ply) in seq.plies.iter().enumerate() {
        let z1 = z0 + ply.material.t_ply;
        let qb = ply.rotated_stiffness();
        let t = stress_to_ply(ply.angle);
        for z in [z0, z1] {
            let strain = [eps0[0] + z * kappa[0], eps0[1] + z * kappa[1], eps0[2] + z * kappa[2]];
            let sigma = mul3v(&t, &mul3v(&qb, &strain));
            faces.push(PlyFaceStress { ply: i, z, sigma });
        }
        z0 = z1;
    }
    Ok(PlyStressState { torque, faces })
}

/// Gaussian elimination with partial pivoting on a 6x6 system.
fn solve6<F: Real>(mut m: [[F; 6]; 6], mut b: [F; 6]) -> Option<[F; 6]> {
    for col in 0..6 {
        let piv = (col..6).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[piv][col] == F::zero() {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..6 {
            let f = m[row][col] / m[col][col];
            for k in col..6 {
                let v = m[col][k];
                m[row][k] -= f * v;
            }
            let bv = b[col];
            b[row] -= f * bv;
        }
    }
    let mut x = [F::zero(); 6];
    for row in (0..6).rev() {
        let mut acc = b[row];
        for k in row + 1..6 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueCapacity<F> {
    /// Failure torque magnitude.
    pub t_str: F,
    pub critical_ply: usize,
    pub criterion: FailureCriterion<F>,
    pub coupling: Coupling,
    pub direction: TorqueDirection,
}

/// Largest load multiplier a single face stress state can take.
pub fn admissible_scale<F: Real>(
    sigma: &[F; 3],
    mat: &crate::materials::PlyMaterial<F>,
    criterion: FailureCriterion<F>,
) -> F {
    let [s1, s2, s12] = *sigma;
    let inf = F::infinity();
    match criterion {
        FailureCriterion::MaxStress => {
            let fibre = if s1 > F::zero() {
                mat.x / s1
            } else if s1 < F::zero() {
                mat.xp / -s1
            } else {
                inf
            };
            let shear = if s12 != F::zero() { mat.s / s12.abs() } else { inf };
            fibre.min(shear)
        }
        FailureCriterion::TsaiWu { f12 } => {
            let two = F::lit(2.0);
            let q = s1 * s1 / (mat.x * mat.xp)
                + two * f12 / (mat.x * mat.xp * mat.y * mat.yp).sqrt() * s1 * s2
                + s2 * s2 / (mat.y * mat.yp)
                + s12 * s12 / (mat.s * mat.s);
            let l = (F::one() / mat.x - F::one() / mat.xp) * s1 + (F::one() / mat.y - F::one() / mat.yp) * s2;
            if q > F::zero() {
                (-l + (l * l + F::lit(4.0) * q).sqrt()) / (two * q)
            } else if l > F::zero() {
                F::one() / l
            } else {
                inf
            }
        }
    }
}

pub fn torque_capacity<F: Real>(
    seq: &StackingSequence<F>,
    geom: &ShaftGeometry<F>,
    criterion: FailureCriterion<F>,
    coupling: Coupling,
    direction: TorqueDirection,
) -> Result<TorqueCapacity<F>> {
    let t_ref = direction.sign::<F>();
    let state = ply_stresses_under_torsion(seq, geom, t_ref, coupling)?;
    let mut best = F::infinity();
    let mut critical_ply = 0;
    for face in &state.faces {
        let s = admissible_scale(&face.sigma, &seq.plies[face.ply].material, criterion);
        if s < best {
            best = s;
            critical_ply = face.ply;
        }
    }
    if !best.is_finite() {
        return Err(Error::Unbounded);
    }
    Ok(TorqueCapacity { t_str: best * t_ref.abs(), critical_ply, criterion, coupling, direction })
}
