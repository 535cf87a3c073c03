//! Driveline optimization problems: chromosome to shaft design, and the
//! penalized fitness the GA maximizes.

use std::sync::Arc;

use crate::constraints::{driveline_mass, evaluate_constraints, fitness, ConstraintReport, DrivelineConfig, Regime, ReserveFactors};
use crate::design::{analyze_shaft, AnalysisOptions, ShaftAnalysis, ShaftConfig};
use crate::error::{Error, Result};
use crate::ga::{decode, evolve, EncodingSpec, Evaluation, GaOutcome, GaParams, Genes};
use crate::materials::{PlyMaterial, StackingSequence};
use crate::rotordynamics::SupportProperties;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationProblem {
    pub encoding: EncodingSpec,
    /// Indexed by the material gene; needs `2^bit_mat` entries.
    pub materials: Vec<Arc<PlyMaterial<f64>>>,
    pub driveline: DrivelineConfig,
    pub factors: ReserveFactors,
    /// Support stiffness when it is not encoded (`inf` for rigid supports).
    pub k_e_fixed: f64,
    pub eta_e: f64,
    pub analysis: AnalysisOptions,
}

/// Fully evaluated design.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignEvaluation {
    pub genes: Genes,
    pub analysis: ShaftAnalysis,
    pub report: ConstraintReport,
    pub fitness: f64,
    /// Support mass from the empirical correlation at the design speed.
    pub support_mass: f64,
    pub total_mass: f64,
}

impl DesignEvaluation {
    pub fn tubes_mass(&self, n_shafts: u32) -> f64 {
        self.analysis.mass() * n_shafts as f64
    }
}

impl OptimizationProblem {
    pub fn validate(&self) -> Result<()> {
        self.encoding.validate()?;
        self.driveline.validate()?;
        self.factors.validate()?;
        let needed = 1usize << self.encoding.bit_mat;
        if self.materials.len() < needed {
            return Err(Error::invalid(format!("encoding needs {needed} materials, {} given", self.materials.len())));
        }
        for m in &self.materials {
            m.validate()?;
        }
        if self.encoding.bit_ke == 0 && !(self.k_e_fixed > 0.0) {
            return Err(Error::invalid("fixed support stiffness must be positive"));
        }
        if !(self.eta_e >= 0.0) {
            return Err(Error::invalid("support loss factor must be >= 0"));
        }
        Ok(())
    }

    pub fn shaft_config(&self, genes: &Genes) -> Result<ShaftConfig> {
        let groups: Vec<(f64, usize, Arc<PlyMaterial<f64>>)> = genes
            .groups
            .iter()
            .map(|g| {
                let m = self.materials.get(g.material).cloned().ok_or_else(|| Error::invalid("material gene out of range"))?;
                Ok((g.angle, g.count as usize, m))
            })
            .collect::<Result<_>>()?;
        let sequence = StackingSequence::from_groups(&groups)?;
        let k_e = genes.k_e.unwrap_or(self.k_e_fixed);
        let m_b = self.driveline.support_mass(genes.omega_rpm);
        let support = if k_e.is_infinite() {
            SupportProperties { m_b, ..SupportProperties::rigid() }
        } else {
            SupportProperties::new(m_b, k_e, self.eta_e)?
        };
        Ok(ShaftConfig {
            sequence,
            r_m: genes.r_m,
            l: self.driveline.shaft_length(),
            support,
            omega_nom_rpm: genes.omega_rpm,
        })
    }

    pub fn evaluate_design(&self, bits: &[bool]) -> Result<DesignEvaluation> {
        let genes = decode(bits, &self.encoding)?;
        let cfg = self.shaft_config(&genes)?;
        let analysis = analyze_shaft(&cfg, Some(&self.driveline), &self.analysis)?;
        let report = evaluate_constraints(&analysis, &self.driveline, &self.factors);
        let m_s = analysis.mass();
        let support_mass = cfg.support.m_b;
        Ok(DesignEvaluation {
            fitness: fitness(m_s, &report),
            total_mass: driveline_mass(&self.driveline, m_s, support_mass),
            support_mass,
            genes,
            analysis,
            report,
        })
    }

    /// GA-facing summary; designs that cannot be analysed get `-inf` fitness.
    pub fn evaluate(&self, bits: &[bool]) -> Evaluation {
        match self.evaluate_design(bits) {
            Ok(d) => Evaluation { fitness: d.fitness, mass: d.total_mass, feasible: d.report.feasible },
            Err(_) => Evaluation { fitness: f64::NEG_INFINITY, mass: f64::NAN, feasible: false },
        }
    }

    pub fn run(&self, params: &GaParams) -> Result<GaOutcome> {
        self.validate()?;
        evolve(params, self.encoding.len(), |bits| self.evaluate(bits))
    }

    /// Three rigidly supported BE tubes kept below the first critical speed.
    pub fn subcritical_be() -> Self {
        OptimizationProblem {
            encoding: EncodingSpec {
                q: 6,
                bit_alpha: 2,
                bit_n: 1,
                bit_mat: 0,
                bit_ke: 0,
                bit_rm: 3,
                bit_omega: 3,
                r_m_bounds: (0.050, 0.064),
                k_e_bounds: (1e4, 1e7),
                omega_bounds: (3800.0, 5200.0),
            },
            materials: vec![Arc::new(PlyMaterial::builtin("BE").expect("builtin"))],
            driveline: DrivelineConfig { n_shafts: 3, regime: Regime::Subcritical, ..DrivelineConfig::default() },
            factors: ReserveFactors::default(),
            k_e_fixed: f64::INFINITY,
            eta_e: 0.0,
            analysis: AnalysisOptions { n_flexural: 1, ..AnalysisOptions::default() },
        }
    }

    /// Two HM tubes on tunable viscoelastic supports, running above critical speeds.
    pub fn supercritical_hm() -> Self {
        OptimizationProblem {
            encoding: EncodingSpec {
                q: 6,
                bit_alpha: 2,
                bit_n: 1,
                bit_mat: 0,
                bit_ke: 3,
                bit_rm: 3,
                bit_omega: 3,
                r_m_bounds: (0.046, 0.060),
                k_e_bounds: (1e4, 1e7),
                omega_bounds: (4800.0, 6200.0),
            },
            materials: vec![Arc::new(PlyMaterial::builtin("HM").expect("builtin"))],
            driveline: DrivelineConfig { n_shafts: 2, regime: Regime::Supercritical, ..DrivelineConfig::default() },
            factors: ReserveFactors::default(),
            k_e_fixed: f64::INFINITY,
            eta_e: 0.1,
            analysis: AnalysisOptions::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::{encode, GeneGroup};

    #[test]
    fn string_lengths_match_published() {
        assert_eq!(OptimizationProblem::subcritical_be().encoding.len(), 24);
        assert_eq!(OptimizationProblem::supercritical_hm().encoding.len(), 27);
    }

    #[test]
    fn published_subcritical_optimum_decodes() {
        let p = OptimizationProblem::subcritical_be();
        let g = |angle, count| GeneGroup { angle, count, material: 0 };
        let genes = Genes {
            groups: vec![g(90.0, 2), g(0.0, 2), g(0.0, 2), g(45.0, 1), g(-45.0, 1), g(90.0, 1)],
            k_e: None,
            r_m: 0.056,
            omega_rpm: 3800.0,
        };
        let bits = encode(&genes, &p.encoding).unwrap();
        let d = p.evaluate_design(&bits).unwrap();
        assert_eq!(d.analysis.config.sequence.to_string(), "[90_2,0_4,45,-45,90]");
        assert!((d.analysis.geometry.t_s - 1.19e-3).abs() < 0.01e-3);
        assert!((d.support_mass * 2.0 / 9.68 - 1.0).abs() < 0.02);
        assert!((d.report.t_nom - 1124.0).abs() < 1.0);
    }
}
