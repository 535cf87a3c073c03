//! Thin-walled tube geometry and section properties (mid-surface formulas).

use crate::error::{Error, Result};
use crate::materials::HomogenizedShaftMaterial;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShaftGeometry<F> {
    /// Mean (mid-surface) radius.
    pub r_m: F,
    /// Unsupported length.
    pub l: F,
    /// Wall thickness.
    pub t_s: F,
}

impl<F: Real> ShaftGeometry<F> {
    pub fn new(r_m: F, l: F, t_s: F) -> Result<Self> {
        let g = ShaftGeometry { r_m, l, t_s };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for (k, v) in [("r_m", self.r_m), ("l", self.l), ("t_s", self.t_s)] {
            if !(v > F::zero()) || !v.is_finite() {
                return Err(Error::invalid(format!("shaft {k} must be positive")));
            }
        }
        Ok(())
    }

    /// Thin-wall formulas lose accuracy once the wall exceeds a fifth of the radius.
    pub fn is_thin_walled(&self) -> bool {
        self.t_s < self.r_m / F::lit(5.0)
    }

    /// Geometry of a tube given by its outer radius.
    pub fn from_outer_radius(r_outer: F, l: F, t_s: F) -> Result<Self> {
        Self::new(r_outer - t_s / F::lit(2.0), l, t_s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionProperties<F> {
    /// Cross-section area.
    pub s: F,
    /// Transverse area moment.
    pub i_y: F,
    /// Polar area moment.
    pub i_x: F,
    /// Mass of one tube.
    pub m_s: F,
    /// Polar mass moment of inertia of one tube.
    pub j_s: F,
}

pub fn section_properties<F: Real>(
    geom: &ShaftGeometry<F>,
    mat: &HomogenizedShaftMaterial<F>,
) -> SectionProperties<F> {
    section_from_density(geom, mat.rho)
}

pub fn section_from_density<F: Real>(geom: &ShaftGeometry<F>, rho: F) -> SectionProperties<F> {
    let pi = F::PI();
    let two = F::lit(2.0);
    let r = geom.r_m;
    let s = two * pi * r * geom.t_s;
    let i_y = pi * r * r * r * geom.t_s;
    let m_s = rho * s * geom.l;
    SectionProperties { s, i_y, i_x: two * i_y, m_s, j_s: m_s * r * r }
}
