//! One-shot analysis of a shaft design: every quantity the constraints and the
//! reports need, with per-analysis failures kept as data.

use crate::buckling::{buckling_torques, hayashi_torque, BucklingResult, BucklingSearch};
use crate::constraints::DrivelineConfig;
use crate::error::{Error, Result};
use crate::materials::{build_abd, homogenize, HomogenizedShaftMaterial, LaminateStiffness, StackingSequence};
use crate::rotordynamics::{
    critical_speeds, modal_parameters, stability_threshold, CriticalSpeeds, ModalParameters, StabilityResult,
    SupportProperties,
};
use crate::shaft::{section_properties, SectionProperties, ShaftGeometry};
use crate::strength::{torque_capacity, Coupling, FailureCriterion, TorqueCapacity, TorqueDirection};
use crate::torsional::{torsional_frequencies, TorsionalSystem};

/// A tube with its laminate, supports and operating speed.
#[derive(Debug, Clone, PartialEq)]
pub struct ShaftConfig {
    pub sequence: StackingSequence<f64>,
    /// Mean radius.
    pub r_m: f64,
    pub l: f64,
    pub support: SupportProperties<f64>,
    pub omega_nom_rpm: f64,
}

impl ShaftConfig {
    pub fn geometry(&self) -> Result<ShaftGeometry<f64>> {
        ShaftGeometry::new(self.r_m, self.l, self.sequence.thickness())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOptions {
    /// Flexural harmonics analysed.
    pub n_flexural: u32,
    pub n_torsional: u32,
    pub buckling: BucklingSearch,
    /// Tsai-Wu interaction coefficient.
    pub f12: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            n_flexural: 4,
            n_torsional: 2,
            buckling: BucklingSearch::default(),
            f12: crate::strength::DEFAULT_F12,
        }
    }
}

/// Torque capacities for both criteria and both coupling treatments.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthSummary {
    pub max_stress_zero: Result<TorqueCapacity<f64>>,
    pub max_stress_as_is: Result<TorqueCapacity<f64>>,
    pub tsai_wu_zero: Result<TorqueCapacity<f64>>,
    pub tsai_wu_as_is: Result<TorqueCapacity<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShaftAnalysis {
    pub config: ShaftConfig,
    pub geometry: ShaftGeometry<f64>,
    pub laminate: LaminateStiffness<f64>,
    pub material: HomogenizedShaftMaterial<f64>,
    pub section: SectionProperties<f64>,
    pub modal: Vec<Result<ModalParameters<f64>>>,
    pub critical: Vec<Result<CriticalSpeeds<f64>>>,
    /// `None` for rigid supports, where no threshold is defined.
    pub stability: Option<Result<StabilityResult<f64>>>,
    /// Torsional natural frequencies (rad/s) when a driveline is given.
    pub torsional: Result<Vec<f64>>,
    pub strength: StrengthSummary,
    pub buckling: Result<BucklingResult<f64>>,
    pub hayashi: f64,
}

impl ShaftAnalysis {
    /// Mass of one tube.
    pub fn mass(&self) -> f64 {
        self.section.m_s
    }

    /// Capacity used by the strength constraint: max-stress, B = 0, positive torque.
    pub fn design_strength(&self) -> Result<f64> {
        self.strength.max_stress_zero.as_ref().map(|c| c.t_str).map_err(Clone::clone)
    }

    /// Buckling torque in the transmitted (positive) direction.
    pub fn design_buckling(&self) -> Result<f64> {
        self.buckling.as_ref().map(|b| b.t_buck_pos()).map_err(Clone::clone)
    }

    /// Finite forward critical speeds of harmonics `1..=n_max` in ascending order.
    pub fn forward_speeds(&self, n_max: u32) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(2 * n_max as usize);
        for c in self.critical.iter().take(n_max as usize) {
            let c = c.as_ref().map_err(Clone::clone)?;
            out.extend([c.forward_minus, c.forward_plus].into_iter().filter(|w| w.is_finite()));
        }
        out.sort_by(f64::total_cmp);
        Ok(out)
    }
}

pub fn analyze_shaft(
    cfg: &ShaftConfig,
    driveline: Option<&DrivelineConfig>,
    opts: &AnalysisOptions,
) -> Result<ShaftAnalysis> {
    cfg.sequence.validate()?;
    cfg.support.validate()?;
    if !(cfg.omega_nom_rpm > 0.0) {
        return Err(Error::invalid("nominal speed must be positive"));
    }
    let geometry = cfg.geometry()?;
    let laminate = build_abd(&cfg.sequence)?;
    let material = homogenize(&cfg.sequence)?;
    let section = section_properties(&geometry, &material);

    let modal: Vec<Result<ModalParameters<f64>>> =
        (1..=opts.n_flexural).map(|n| modal_parameters(&geometry, &section, &material, &cfg.support, n)).collect();
    let critical = modal.iter().map(|p| p.as_ref().map_err(Clone::clone).and_then(critical_speeds)).collect();
    let stability = if cfg.support.is_rigid() {
        None
    } else {
        Some(
            modal
                .iter()
                .cloned()
                .collect::<Result<Vec<_>>>()
                .and_then(|ps| stability_threshold(&ps, material.eta_i, cfg.support.eta_e)),
        )
    };

    let torsional = match driveline {
        Some(d) => {
            let sys = TorsionalSystem {
                j_g: d.j_g,
                j_t: d.j_t,
                j_s: section.j_s * d.n_shafts as f64,
                l: cfg.l * d.n_shafts as f64,
                g: material.g,
                rho: material.rho,
            };
            torsional_frequencies(&sys, opts.n_torsional)
        }
        None => Err(Error::invalid("no driveline inertias given")),
    };

    let cap = |criterion, coupling| torque_capacity(&cfg.sequence, &geometry, criterion, coupling, TorqueDirection::Positive);
    let tw = FailureCriterion::TsaiWu { f12: opts.f12 };
    let strength = StrengthSummary {
        max_stress_zero: cap(FailureCriterion::MaxStress, Coupling::Zero),
        max_stress_as_is: cap(FailureCriterion::MaxStress, Coupling::AsIs),
        tsai_wu_zero: cap(tw, Coupling::Zero),
        tsai_wu_as_is: cap(tw, Coupling::AsIs),
    };
    let buckling = buckling_torques(&laminate, &geometry, &opts.buckling);
    let hayashi = hayashi_torque(&laminate, &geometry);

    Ok(ShaftAnalysis {
        config: cfg.clone(),
        geometry,
        laminate,
        material,
        section,
        modal,
        critical,
        stability,
        torsional,
        strength,
        buckling,
        hayashi,
    })
}
