//! Flexural critical speeds of a Timoshenko shaft on viscoelastic supports and
//! the hysteretic internal-damping stability threshold.
//!
//! Each harmonic `n` couples the `n`-th pinned-pinned bending mode with one
//! rigid-body mode of the supports (translation for odd `n`, rocking for even
//! `n`), which gives four signed whirl speeds per harmonic.

use crate::error::{Error, Result};
use crate::materials::HomogenizedShaftMaterial;
use crate::real::Real;
use crate::shaft::{SectionProperties, ShaftGeometry};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportProperties<F> {
    /// Support mass taking part in the rigid modes.
    pub m_b: F,
    /// Support stiffness; `+inf` stands for rigid supports.
    pub k_e: F,
    /// External (support) loss factor.
    pub eta_e: F,
    /// Optional viscous support damping, reported but not used by the closed forms.
    pub c_e: Option<F>,
}

impl<F: Real> SupportProperties<F> {
    pub fn new(m_b: F, k_e: F, eta_e: F) -> Result<Self> {
        let s = SupportProperties { m_b, k_e, eta_e, c_e: None };
        s.validate()?;
        Ok(s)
    }

    pub fn rigid() -> Self {
        SupportProperties { m_b: F::zero(), k_e: F::infinity(), eta_e: F::zero(), c_e: None }
    }

    pub fn is_rigid(&self) -> bool {
        self.k_e.is_infinite()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m_b >= F::zero()) {
            return Err(Error::invalid("support mass must be >= 0"));
        }
        if !(self.k_e > F::zero()) {
            return Err(Error::invalid("support stiffness must be > 0"));
        }
        if !(self.eta_e >= F::zero()) {
            return Err(Error::invalid("support loss factor must be >= 0"));
        }
        Ok(())
    }
}

/// Modal quantities of one harmonic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalParameters<F> {
    pub n: u32,
    /// Squared pinned-pinned bending frequency.
    pub omega_s2: F,
    /// Squared rigid support-mode frequency (infinite for rigid supports).
    pub omega_b2: F,
    pub gamma: F,
    pub pi: F,
    pub phi: F,
    pub psi: F,
    pub delta_plus: F,
    pub delta_minus: F,
    pub lambda_plus: F,
    pub lambda_minus: F,
    /// Modal stiffness `m_s ω_sn²`.
    pub k_s: F,
    pub m_s: F,
    pub k_e: F,
}

impl<F: Real> ModalParameters<F> {
    /// Same parameters with a different gyroscopic ratio Γ.
    pub fn with_gamma(mut self, gamma: F) -> Self {
        self.gamma = gamma;
        self.delta_plus = self.psi + gamma;
        self.delta_minus = self.psi - gamma;
        self.lambda_plus = self.pi + gamma;
        self.lambda_minus = self.pi - gamma;
        self
    }
}

pub fn modal_parameters<F: Real>(
    geom: &ShaftGeometry<F>,
    section: &SectionProperties<F>,
    mat: &HomogenizedShaftMaterial<F>,
    support: &SupportProperties<F>,
    n: u32,
) -> Result<ModalParameters<F>> {
    if n == 0 {
        return Err(Error::invalid("harmonic index starts at 1"));
    }
    let pi = F::PI();
    let nf = F::from_u32(n).unwrap();
    let npi2 = nf * nf * pi * pi;
    let l2 = geom.l * geom.l;
    let m_s = section.m_s;

    let omega_s2 = npi2 * npi2 * mat.e * section.i_y / (mat.rho * section.s * l2 * l2);
    let sign = if n % 2 == 0 { F::one() } else { -F::one() };
    let m_eff = support.m_b + m_s / (F::lit(2.0) * (F::lit(2.0) + sign));
    let omega_b2 = support.k_e / m_eff;
    let gamma = npi2 * section.i_x / (section.s * l2);
    let big_pi = F::one() + npi2 * section.i_y / (section.s * l2) * (F::one() + mat.e / (mat.kappa * mat.g));
    let phi = m_s / m_eff;
    let psi = big_pi - F::lit(4.0) / npi2 * phi;

    let p = ModalParameters {
        n,
        omega_s2,
        omega_b2,
        gamma,
        pi: big_pi,
        phi,
        psi,
        delta_plus: psi + gamma,
        delta_minus: psi - gamma,
        lambda_plus: big_pi + gamma,
        lambda_minus: big_pi - gamma,
        k_s: m_s * omega_s2,
        m_s,
        k_e: support.k_e,
    };
    if !(p.delta_minus > F::zero()) {
        return Err(Error::OutOfValidity(format!("Delta_{n}- = {} <= 0", p.delta_minus)));
    }
    Ok(p)
}

/// Signed whirl speeds of one harmonic (rad/s). Backward speeds are negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalSpeeds<F> {
    pub n: u32,
    pub forward_minus: F,
    pub forward_plus: F,
    pub backward_minus: F,
    pub backward_plus: F,
}

/// Both roots of `Δ X² − (ω_s² + Λ ω_b²) X + ω_s² ω_b² = 0`, returned as speeds.
fn coupled_roots<F: Real>(ws2: F, wb2: F, lambda: F, delta: F, n: u32, what: &'static str) -> Result<[F; 2]> {
    if wb2.is_infinite() {
        // rigid supports: only the bending root stays finite
        let x = ws2 / lambda;
        if !(x >= F::zero()) {
            return Err(Error::NegativeRadicand { what, n });
        }
        return Ok([x.sqrt(), F::infinity()]);
    }
    let two = F::lit(2.0);
    let rad = ws2 * ws2 + two * (lambda - two * delta) * ws2 * wb2 + lambda * lambda * wb2 * wb2;
    if rad < F::zero() {
        return Err(Error::NegativeRadicand { what, n });
    }
    let b = ws2 + lambda * wb2;
    let root = rad.sqrt();
    let lo = (b - root) / (two * delta);
    let hi = (b + root) / (two * delta);
    if lo < F::zero() || hi < F::zero() {
        return Err(Error::NegativeRadicand { what, n });
    }
    Ok([lo.sqrt(), hi.sqrt()])
}

pub fn critical_speeds<F: Real>(p: &ModalParameters<F>) -> Result<CriticalSpeeds<F>> {
    let [f_lo, f_hi] = coupled_roots(p.omega_s2, p.omega_b2, p.lambda_minus, p.delta_minus, p.n, "forward")?;
    let [b_lo, b_hi] = coupled_roots(p.omega_s2, p.omega_b2, p.lambda_plus, p.delta_plus, p.n, "backward")?;
    Ok(CriticalSpeeds { n: p.n, forward_minus: f_lo, forward_plus: f_hi, backward_minus: -b_lo, backward_plus: -b_hi })
}

/// Whirl speeds of the non-gyroscopic system (Γ = 0), where the stability
/// criterion is evaluated.
pub fn free_whirl_speeds<F: Real>(p: &ModalParameters<F>) -> Result<[F; 2]> {
    coupled_roots(p.omega_s2, p.omega_b2, p.pi, p.psi, p.n, "threshold")
}

/// Computes modal parameters and critical speeds for `n = 1..=n_max`.
pub fn critical_speed_table<F: Real>(
    geom: &ShaftGeometry<F>,
    section: &SectionProperties<F>,
    mat: &HomogenizedShaftMaterial<F>,
    support: &SupportProperties<F>,
    n_max: u32,
) -> Result<Vec<(ModalParameters<F>, CriticalSpeeds<F>)>> {
    (1..=n_max)
        .map(|n| {
            let p = modal_parameters(geom, section, mat, support, n)?;
            Ok((p, critical_speeds(&p)?))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchDiagnostic<F> {
    pub n: u32,
    pub branch: Branch,
    /// Speed at which the branch criterion is evaluated.
    pub omega0: F,
    /// Criterion value; negative means the branch destabilizes at `omega0`.
    pub criterion: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityResult<F> {
    /// Lowest threshold speed over all unstable branches.
    pub omega_th: Option<F>,
    pub branches: Vec<BranchDiagnostic<F>>,
}

impl<F> StabilityResult<F> {
    pub fn stable_at_all_speeds(&self) -> bool {
        self.omega_th.is_none()
    }
}

pub fn stability_threshold<F: Real>(params: &[ModalParameters<F>], eta_i: F, eta_e: F) -> Result<StabilityResult<F>> {
    if !(eta_i >= F::zero() && eta_e >= F::zero()) {
        return Err(Error::invalid("loss factors must be >= 0"));
    }
    let mut branches = Vec::with_capacity(2 * params.len());
    let mut omega_th: Option<F> = None;
    for p in params {
        if p.k_e.is_infinite() {
            return Err(Error::OutOfValidity("stability criterion needs a finite support stiffness".into()));
        }
        let [w_minus, w_plus] = free_whirl_speeds(p)?;
        for (branch, w, sign) in [(Branch::Minus, w_minus, -F::one()), (Branch::Plus, w_plus, F::one())] {
            let w2 = w * w;
            let criterion =
                sign * (eta_e * p.k_e * p.phi * (p.pi * w2 - p.omega_s2) - eta_i * p.k_s * (w2 - p.omega_b2));
            if criterion < F::zero() {
                omega_th = Some(match omega_th {
                    Some(t) if t <= w => t,
                    _ => w,
                });
            }
            branches.push(BranchDiagnostic { n: p.n, branch, omega0: w, criterion });
        }
    }
    Ok(StabilityResult { omega_th, branches })
}

/// Converts rad/s to rev/min.
pub fn rad_s_to_rpm<F: Real>(w: F) -> F {
    w * F::lit(30.0) / F::PI()
}

/// Converts rev/min to rad/s.
pub fn rpm_to_rad_s<F: Real>(rpm: F) -> F {
    rpm * F::PI() / F::lit(30.0)
}
