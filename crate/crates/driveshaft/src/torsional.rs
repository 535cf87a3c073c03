//! Torsional natural frequencies of a shaft between two end inertias
//! (main gearbox and tail rotor), using closed-form approximations of the
//! characteristic-equation roots.

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionalSystem<F> {
    /// Gearbox inertia.
    pub j_g: F,
    /// Rotor inertia.
    pub j_t: F,
    /// Shaft polar mass moment of inertia.
    pub j_s: F,
    /// Torsional length.
    pub l: F,
    /// Shear modulus of the shaft.
    pub g: F,
    pub rho: F,
}

impl<F: Real> TorsionalSystem<F> {
    pub fn validate(&self) -> Result<()> {
        for (k, v) in [("j_g", self.j_g), ("j_t", self.j_t), ("j_s", self.j_s), ("l", self.l), ("g", self.g), ("rho", self.rho)] {
            if !(v > F::zero()) {
                return Err(Error::invalid(format!("torsional {k} must be positive")));
            }
        }
        Ok(())
    }

    /// Dimensionless root `υ_n` of mode `n` (1-based).
    pub fn upsilon(&self, n: u32) -> F {
        let (jg, jt, js) = (self.j_g, self.j_t, self.j_s);
        if n == 1 {
            let num = jg * js + jt * js + js * js;
            let den = jg * js + jt * js + F::lit(2.0) * jg * jt;
            F::lit(2.0).sqrt() * (num / den).sqrt()
        } else {
            let k = F::from_u32(n - 1).unwrap() * F::PI();
            k / F::lit(2.0) + (k * k / F::lit(4.0) + js / jt + js / jg).sqrt()
        }
    }
}

/// Natural frequencies `ϖ_n = (υ_n / l) √(G/ρ)` for `n = 1..=n_max` (rad/s).
pub fn torsional_frequencies<F: Real>(sys: &TorsionalSystem<F>, n_max: u32) -> Result<Vec<F>> {
    sys.validate()?;
    if n_max == 0 {
        return Err(Error::invalid("n_max must be >= 1"));
    }
    let wave = (sys.g / sys.rho).sqrt() / sys.l;
    Ok((1..=n_max).map(|n| sys.upsilon(n) * wave).collect())
}
