//! Driveline mass model, design constraints and penalized fitness.
//!
//! Everything here works on `f64`: it sits on top of the generic analyses and
//! feeds the optimizer.

use std::fmt;

use crate::design::ShaftAnalysis;
use crate::error::{Error, Result};
use crate::rotordynamics::rpm_to_rad_s;

/// Watts per mechanical horsepower.
pub const WATTS_PER_HP: f64 = 745.7;

/// Unit in which the transmitted power enters the support-mass correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowerUnit {
    /// Power in horsepower, which reproduces the published support masses.
    #[default]
    Horsepower,
    Watts,
}

impl PowerUnit {
    pub fn convert(self, power_w: f64) -> f64 {
        match self {
            PowerUnit::Horsepower => power_w / WATTS_PER_HP,
            PowerUnit::Watts => power_w,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Regime {
    #[default]
    Subcritical,
    Supercritical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrivelineConfig {
    pub total_length: f64,
    /// Number of tubes; there are `n_shafts - 1` intermediate supports.
    pub n_shafts: u32,
    /// Transmitted power (W).
    pub power_w: f64,
    pub power_unit: PowerUnit,
    /// Gearbox and tail-rotor inertias.
    pub j_g: f64,
    pub j_t: f64,
    pub weight_penalty_per_shaft: f64,
    pub regime: Regime,
    /// Torsional modes constrained (`1..=n_torsional`).
    pub n_torsional: u32,
    /// Flexural harmonics constrained in the supercritical regime.
    pub n_flexural: u32,
    /// Wall-thickness floor.
    pub t_s_min: f64,
}

impl Default for DrivelineConfig {
    fn default() -> Self {
        DrivelineConfig {
            total_length: 7.41,
            n_shafts: 3,
            power_w: 447.4e3,
            power_unit: PowerUnit::Horsepower,
            j_g: 0.94,
            j_t: 3.76,
            weight_penalty_per_shaft: 1.5,
            regime: Regime::Subcritical,
            n_torsional: 2,
            n_flexural: 4,
            t_s_min: 1e-3,
        }
    }
}

impl DrivelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_shafts == 0 {
            return Err(Error::invalid("driveline needs at least one shaft"));
        }
        for (k, v) in [("total_length", self.total_length), ("power", self.power_w), ("j_g", self.j_g), ("j_t", self.j_t)] {
            if !(v > 0.0) {
                return Err(Error::invalid(format!("driveline {k} must be positive")));
            }
        }
        if !(self.weight_penalty_per_shaft >= 0.0) || !(self.t_s_min >= 0.0) {
            return Err(Error::invalid("weight penalty and thickness floor must be >= 0"));
        }
        if self.n_torsional == 0 || self.n_flexural == 0 {
            return Err(Error::invalid("mode counts must be >= 1"));
        }
        Ok(())
    }

    /// Length of one tube.
    pub fn shaft_length(&self) -> f64 {
        self.total_length / self.n_shafts as f64
    }

    pub fn n_supports(&self) -> u32 {
        self.n_shafts - 1
    }

    /// Nominal torque (N·m) at `omega_rpm`.
    pub fn nominal_torque(&self, omega_rpm: f64) -> f64 {
        self.power_w / rpm_to_rad_s(omega_rpm)
    }

    pub fn support_mass(&self, omega_rpm: f64) -> f64 {
        support_mass(self.power_unit.convert(self.power_w), omega_rpm)
    }
}

/// Empirical support mass `17.1288 (P/Ω)^0.69`, with `P` already in the chosen unit.
pub fn support_mass(power: f64, omega_rpm: f64) -> f64 {
    17.1288 * (power / omega_rpm).powf(0.69)
}

/// Tubes, intermediate supports and the per-tube joint penalty.
pub fn driveline_mass(cfg: &DrivelineConfig, m_s: f64, m_b: f64) -> f64 {
    cfg.n_shafts as f64 * (m_s + cfg.weight_penalty_per_shaft) + cfg.n_supports() as f64 * m_b
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReserveFactors {
    pub k_str: f64,
    pub k_buck: f64,
    pub k_t_sup: f64,
    pub k_t_inf: f64,
    pub k_f_sup: f64,
    pub k_f_inf: f64,
    pub k_th: f64,
    /// Penalty on g1 and g2.
    pub gamma_12: f64,
    pub gamma_3: f64,
    pub gamma_else: f64,
}

impl Default for ReserveFactors {
    fn default() -> Self {
        ReserveFactors {
            k_str: 0.44,
            k_buck: 0.44,
            k_t_sup: 0.83,
            k_t_inf: 1.15,
            k_f_sup: 0.8,
            k_f_inf: 1.2,
            k_th: 0.8,
            gamma_12: 2.0,
            gamma_3: 6.0,
            gamma_else: 4.0,
        }
    }
}

impl ReserveFactors {
    pub fn validate(&self) -> Result<()> {
        let upper = [("k_str", self.k_str), ("k_buck", self.k_buck), ("k_t_sup", self.k_t_sup), ("k_f_sup", self.k_f_sup), ("k_th", self.k_th)];
        for (k, v) in upper {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(format!("{k} must lie in (0, 1]")));
            }
        }
        for (k, v) in [("k_t_inf", self.k_t_inf), ("k_f_inf", self.k_f_inf)] {
            if !(v >= 1.0) {
                return Err(Error::invalid(format!("{k} must be >= 1")));
            }
        }
        for (k, v) in [("gamma_12", self.gamma_12), ("gamma_3", self.gamma_3), ("gamma_else", self.gamma_else)] {
            if !(v > 0.0) {
                return Err(Error::invalid(format!("{k} must be > 0")));
            }
        }
        Ok(())
    }
}

/// Which family a constraint value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Strength,
    Buckling,
    Thickness,
    /// Nominal speed above torsional mode `n`.
    TorsionalAbove(u32),
    /// Nominal speed below torsional mode `n`.
    TorsionalBelow(u32),
    Subcritical,
    /// Nominal speed above the `k`-th forward critical speed (ascending order).
    FlexuralAbove(u32),
    FlexuralBelow(u32),
    Stability,
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintKind::Strength => write!(f, "g1"),
            ConstraintKind::Buckling => write!(f, "g2"),
            ConstraintKind::Thickness => write!(f, "g3"),
            ConstraintKind::TorsionalAbove(n) => write!(f, "g4_{n}"),
            ConstraintKind::TorsionalBelow(n) => write!(f, "g5_{n}"),
            ConstraintKind::Subcritical => write!(f, "g6"),
            ConstraintKind::FlexuralAbove(k) => write!(f, "g7_{k}"),
            ConstraintKind::FlexuralBelow(k) => write!(f, "g8_{k}"),
            ConstraintKind::Stability => write!(f, "g9"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintValue {
    pub kind: ConstraintKind,
    pub value: f64,
    pub gamma: f64,
    /// Set when the underlying analysis failed and the value is a stand-in.
    pub note: Option<String>,
}

impl ConstraintValue {
    pub fn satisfied(&self) -> bool {
        match self.kind {
            ConstraintKind::Subcritical => self.value > 0.0,
            _ => self.value >= 0.0,
        }
    }
}

/// Value given to a constraint whose analysis could not be evaluated.
pub const FAILED_ANALYSIS_VALUE: f64 = -1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub values: Vec<ConstraintValue>,
    pub feasible: bool,
    pub t_nom: f64,
}

impl ConstraintReport {
    fn new(values: Vec<ConstraintValue>, t_nom: f64) -> Self {
        let feasible = values.iter().all(ConstraintValue::satisfied);
        ConstraintReport { values, feasible, t_nom }
    }

    pub fn get(&self, kind: ConstraintKind) -> Option<&ConstraintValue> {
        self.values.iter().find(|v| v.kind == kind)
    }

    /// Penalty sum `Σ γ min(0, g)`.
    pub fn penalty(&self) -> f64 {
        self.values.iter().map(|v| v.gamma * v.value.min(0.0)).sum()
    }
}

pub fn evaluate_constraints(analysis: &ShaftAnalysis, cfg: &DrivelineConfig, k: &ReserveFactors) -> ConstraintReport {
    let omega_rpm = analysis.config.omega_nom_rpm;
    let omega = rpm_to_rad_s(omega_rpm);
    let t_nom = cfg.nominal_torque(omega_rpm);
    let mut values = Vec::new();
    let mut push = |kind, res: Result<f64>, gamma: f64| {
        let (value, note) = match res {
            Ok(v) if v.is_nan() => (FAILED_ANALYSIS_VALUE, Some("NaN".to_string())),
            Ok(v) => (v, None),
            Err(e) => (FAILED_ANALYSIS_VALUE, Some(e.to_string())),
        };
        values.push(ConstraintValue { kind, value, gamma, note });
    };

    push(
        ConstraintKind::Strength,
        analysis.design_strength().map(|t| k.k_str * t / t_nom - 1.0),
        k.gamma_12,
    );
    push(
        ConstraintKind::Buckling,
        analysis.design_buckling().map(|t| k.k_buck * t / t_nom - 1.0),
        k.gamma_12,
    );
    let ts_min = cfg.t_s_min;
    push(
        ConstraintKind::Thickness,
        Ok(if ts_min > 0.0 { analysis.geometry.t_s / ts_min - 1.0 } else { f64::INFINITY }),
        k.gamma_3,
    );

    match &analysis.torsional {
        Ok(modes) => {
            for (i, &w) in modes.iter().enumerate().take(cfg.n_torsional as usize) {
                let n = i as u32 + 1;
                if w < omega {
                    push(ConstraintKind::TorsionalAbove(n), Ok(1.0 - k.k_t_inf * w / omega), k.gamma_else);
                } else {
                    push(ConstraintKind::TorsionalBelow(n), Ok(k.k_t_sup * w / omega - 1.0), k.gamma_else);
                }
            }
        }
        Err(e) => push(ConstraintKind::TorsionalBelow(1), Err(e.clone()), k.gamma_else),
    }

    match cfg.regime {
        Regime::Subcritical => {
            let w1 = analysis.critical.first().map_or_else(
                || Err(Error::invalid("no flexural harmonic analysed")),
                |c| c.as_ref().map(|c| c.forward_minus).map_err(Clone::clone),
            );
            push(ConstraintKind::Subcritical, w1.map(|w| k.k_f_sup * w / omega - 1.0), k.gamma_else);
        }
        Regime::Supercritical => {
            match analysis.forward_speeds(cfg.n_flexural) {
                Ok(speeds) => {
                    for (i, w) in speeds.into_iter().enumerate() {
                        let idx = i as u32 + 1;
                        if w < omega {
                            push(ConstraintKind::FlexuralAbove(idx), Ok(1.0 - k.k_f_inf * w / omega), k.gamma_else);
                        } else {
                            push(ConstraintKind::FlexuralBelow(idx), Ok(k.k_f_sup * w / omega - 1.0), k.gamma_else);
                        }
                    }
                }
                Err(e) => push(ConstraintKind::FlexuralBelow(1), Err(e), k.gamma_else),
            }
            match &analysis.stability {
                Some(Ok(st)) => {
                    if let Some(th) = st.omega_th {
                        push(ConstraintKind::Stability, Ok(k.k_th * th / omega - 1.0), k.gamma_else);
                    }
                }
                Some(Err(e)) => push(ConstraintKind::Stability, Err(e.clone()), k.gamma_else),
                // rigid supports: no threshold is defined
                None => {}
            }
        }
    }
    ConstraintReport::new(values, t_nom)
}

/// `1/m_s + Σ γ min(0, g)`.
pub fn fitness(m_s: f64, report: &ConstraintReport) -> f64 {
    1.0 / m_s + report.penalty()
}
