//! Built-in reference cases with published values, grouped into named sets.

use std::sync::Arc;

use crate::buckling::{buckling_torque, hayashi_torque, BucklingSearch};
use crate::error::{Error, Result};
use crate::materials::{build_abd, HomogenizedShaftMaterial, PlyMaterial, StackingSequence};
use crate::rotordynamics::{critical_speeds, modal_parameters, stability_threshold, SupportProperties};
use crate::shaft::{section_from_density, ShaftGeometry};
use crate::strength::{torque_capacity, Coupling, FailureCriterion, TorqueDirection};

pub const FIXTURE_SETS: [&str; 4] = ["table2", "table3", "table4", "rig"];

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureResult {
    pub id: String,
    pub provenance: &'static str,
    pub expected: f64,
    /// NaN when the computation failed; see `note`.
    pub computed: f64,
    /// Relative tolerance; zero for pass/fail flags stored as 1/0.
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

impl FixtureResult {
    fn value(id: String, provenance: &'static str, expected: f64, computed: Result<f64>, tolerance: f64) -> Self {
        let (computed, note) = match computed {
            Ok(v) => (v, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        let pass = ((computed - expected) / expected).abs() <= tolerance;
        FixtureResult { id, provenance, expected, computed, tolerance, pass, note }
    }

    fn flag(id: String, provenance: &'static str, expected: bool, computed: Result<bool>) -> Self {
        let (c, note) = match computed {
            Ok(v) => (if v { 1.0 } else { 0.0 }, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        let e = if expected { 1.0 } else { 0.0 };
        FixtureResult { id, provenance, expected: e, computed: c, tolerance: 0.0, pass: c == e, note }
    }

    pub fn rel_error(&self) -> f64 {
        if self.expected == 0.0 {
            (self.computed - self.expected).abs()
        } else {
            ((self.computed - self.expected) / self.expected).abs()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub fixtures: Vec<FixtureResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.fixtures.iter().all(|f| f.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FixtureResult> {
        self.fixtures.iter().filter(|f| !f.pass)
    }
}

/// Runs one named set, or every set for `"all"`.
pub fn run_fixture_set(name: &str) -> Result<ValidationReport> {
    let fixtures = match name {
        "table2" => table2(),
        "table3" => table3(),
        "table4" => table4(),
        "rig" => rig(),
        "all" => FIXTURE_SETS.iter().flat_map(|s| run_fixture_set(s).map(|r| r.fixtures).unwrap_or_default()).collect(),
        other => return Err(Error::invalid(format!("unknown fixture set `{other}` (expected one of {FIXTURE_SETS:?} or all)"))),
    };
    Ok(ValidationReport { fixtures })
}

fn be() -> Arc<PlyMaterial<f64>> {
    Arc::new(PlyMaterial::builtin("BE").expect("builtin"))
}

/// Tubes of the torque-resistance comparison: (label, angles, outer radius, length).
pub fn table2_tubes() -> Vec<(&'static str, Vec<f64>, f64, f64)> {
    vec![
        ("tube1", vec![90.0, 45.0, -45.0, 90.0], 25.4e-3, 50.8e-3),
        ("tube2", [vec![90.0, 45.0, -45.0], vec![0.0; 6], vec![90.0]].concat(), 63.5e-3, 305e-3),
        ("tube3", vec![90.0, 0.0, 0.0, 90.0], 25.4e-3, 50.8e-3),
    ]
}

const T2_MAX_STRESS: [f64; 3] = [585.0, 4880.0, 130.0];
const T2_TSAI_WU: [f64; 3] = [313.0, 2613.0, 130.0];
const T2_HAYASHI: [f64; 3] = [1049.0, 13016.0, 1547.0];

fn table2() -> Vec<FixtureResult> {
    let mut out = Vec::new();
    for (i, (label, angles, r_out, l)) in table2_tubes().into_iter().enumerate() {
        let seq = StackingSequence::uniform(&angles, &be());
        let setup = seq.and_then(|s| {
            let g = ShaftGeometry::from_outer_radius(r_out, l, s.thickness())?;
            Ok((s, g))
        });
        let cap = |crit: FailureCriterion<f64>| {
            setup.clone().and_then(|(s, g)| torque_capacity(&s, &g, crit, Coupling::Zero, TorqueDirection::Positive).map(|c| c.t_str))
        };
        out.push(FixtureResult::value(format!("table2/{label}/max_stress_b0"), "Table 2", T2_MAX_STRESS[i], cap(FailureCriterion::MaxStress), 0.03));
        out.push(FixtureResult::value(format!("table2/{label}/tsai_wu_b0"), "Table 2", T2_TSAI_WU[i], cap(FailureCriterion::tsai_wu()), 0.03));
        let hay = setup.clone().and_then(|(s, g)| Ok(hayashi_torque(&build_abd(&s)?, &g)));
        out.push(FixtureResult::value(format!("table2/{label}/hayashi"), "Table 2", T2_HAYASHI[i], hay, 0.02));
    }
    out
}

pub const TABLE3_ANGLES: [f64; 7] = [0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0];
pub const TABLE3_PRESENT: [f64; 7] = [966.0, 755.0, 979.0, 1647.0, 2445.0, 2957.0, 2835.0];
pub const TABLE3_HAYASHI: [f64; 7] = [1887.0, 1776.0, 1607.0, 1648.0, 2216.0, 3925.0, 3365.0];

/// Ten BE plies at one angle on the Zinberg tube.
pub fn table3_case(angle: f64) -> Result<(StackingSequence<f64>, ShaftGeometry<f64>)> {
    let seq = StackingSequence::uniform(&[angle; 10], &be())?;
    let g = ShaftGeometry::new(62.85e-3, 2.47, seq.thickness())?;
    Ok((seq, g))
}

fn table3() -> Vec<FixtureResult> {
    let mut out = Vec::new();
    for i in 0..7 {
        let a = TABLE3_ANGLES[i];
        let case = table3_case(a).and_then(|(s, g)| Ok((build_abd(&s)?, g)));
        let shell = case.clone().and_then(|(lam, g)| {
            buckling_torque(&lam, &g, TorqueDirection::Positive, &BucklingSearch::default()).map(|m| m.torque)
        });
        out.push(FixtureResult::value(format!("table3/{a}deg/shell"), "Table 3", TABLE3_PRESENT[i], shell, 0.03));
        let hay = case.map(|(lam, g)| hayashi_torque(&lam, &g));
        let mut f = FixtureResult::value(format!("table3/{a}deg/hayashi"), "Table 3", TABLE3_HAYASHI[i], hay, 0.02);
        if a == 75.0 && !f.pass {
            // 3925 against the 3131 reference is +25 %, but the table prints -25 %
            f.note = Some("published 3925 disagrees with its own error column; the formula gives about 3025".into());
        }
        out.push(f);
    }
    out
}

/// Laminates of the stacking-order comparison with the published values.
pub fn table4_cases() -> Vec<(Vec<f64>, f64)> {
    let rep = |a: f64| [a, -a].repeat(4);
    vec![
        (rep(15.0), 193.0),
        (rep(-15.0), 197.0),
        (rep(30.0), 254.0),
        (rep(-30.0), 259.0),
        (rep(45.0), 383.0),
        (rep(-45.0), 382.0),
        (vec![0.0, 0.0, 45.0, -45.0, 45.0, -45.0, 0.0, 0.0], 218.0),
        (vec![0.0, 0.0, -45.0, 45.0, -45.0, 45.0, 0.0, 0.0], 208.0),
        (vec![0.0, 0.0, 45.0, 0.0, -45.0, 0.0, 45.0, -45.0], 342.0),
        (vec![0.0, 0.0, -45.0, 0.0, 45.0, 0.0, -45.0, 45.0], 315.0),
        (vec![0.0, 0.0, 45.0, 0.0, 0.0, -45.0, 45.0, -45.0], 340.0),
        (vec![0.0, 0.0, -45.0, 0.0, 0.0, 45.0, -45.0, 45.0], 300.0),
        (vec![-45.0, -15.0, 15.0, 45.0, 15.0, -15.0, -45.0, 45.0], 375.0),
        (vec![45.0, 15.0, -15.0, -45.0, -15.0, 15.0, 45.0, -45.0], 449.0),
        (vec![15.0, -15.0, -45.0, -15.0, 15.0, 45.0, 15.0, -15.0], 206.0),
        (vec![-15.0, 15.0, 45.0, 15.0, -15.0, -45.0, -15.0, 15.0], 226.0),
    ]
}

/// Carbon/epoxy ply of the stacking-order study (eight plies make 1.067 mm).
pub fn table4_material() -> PlyMaterial<f64> {
    PlyMaterial {
        name: "T4".into(),
        rho: 1600.0,
        e11: 134e9,
        e22: 8.5e9,
        e66: 4.6e9,
        nu12: 0.29,
        x: 1500e6,
        xp: 1500e6,
        y: 40e6,
        yp: 246e6,
        s: 68e6,
        eta11: 0.0,
        eta22: 0.0,
        eta66: 0.0,
        t_ply: 1.067e-3 / 8.0,
    }
}

pub fn table4_case(angles: &[f64]) -> Result<(StackingSequence<f64>, ShaftGeometry<f64>)> {
    let seq = StackingSequence::uniform(angles, &Arc::new(table4_material()))?;
    let g = ShaftGeometry::new(40e-3, 4.0, seq.thickness())?;
    Ok((seq, g))
}

fn table4() -> Vec<FixtureResult> {
    table4_cases()
        .into_iter()
        .enumerate()
        .map(|(i, (angles, expected))| {
            let t = table4_case(&angles).and_then(|(s, g)| {
                buckling_torque(&build_abd(&s)?, &g, TorqueDirection::Positive, &BucklingSearch::default()).map(|m| m.torque)
            });
            FixtureResult::value(format!("table4/{:02}/{}", i + 1, label(&angles)), "Table 4", expected, t, 0.03)
        })
        .collect()
}

fn label(angles: &[f64]) -> String {
    format!("[{}]", angles.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
}

/// Aluminium rig shaft on viscoelastic supports.
pub fn aluminium_rig() -> Result<(f64, f64)> {
    let mat = HomogenizedShaftMaterial::isotropic(69e9, 0.33, 2700.0, 0.0);
    let g = ShaftGeometry::new(23.99e-3, 1.8, 2.02e-3)?;
    let sec = section_from_density(&g, 2700.0);
    let sup = SupportProperties::new(2.817, 5.64e5, 0.0)?;
    let c = critical_speeds(&modal_parameters(&g, &sec, &mat, &sup, 1)?)?;
    Ok((c.forward_minus, c.forward_plus))
}

pub const PVC_ETA_I: f64 = 0.025;
pub const PVC_ETA_E: f64 = 0.07;

/// Whether a PVC rig shaft of length `l` can run stably above its first
/// critical-speed pair: the lowest threshold over n = 1..4 must exceed ω_c1F+.
pub fn pvc_supercritical_stable(l: f64) -> Result<bool> {
    let mat = HomogenizedShaftMaterial::isotropic(2.2e9, 0.4, 1350.0, PVC_ETA_I);
    let g = ShaftGeometry::new(23.25e-3, l, 2.5e-3)?;
    let sec = section_from_density(&g, 1350.0);
    let sup = SupportProperties::new(2.608, 2.58e5, PVC_ETA_E)?;
    let params = (1..=4).map(|n| modal_parameters(&g, &sec, &mat, &sup, n)).collect::<Result<Vec<_>>>()?;
    let first = critical_speeds(&params[0])?;
    let st = stability_threshold(&params, PVC_ETA_I, PVC_ETA_E)?;
    Ok(st.omega_th.is_none_or(|th| th > first.forward_plus))
}

fn rig() -> Vec<FixtureResult> {
    let al = aluminium_rig();
    let mut out = vec![
        FixtureResult::value("rig/aluminium/w_c1F-".into(), "rig text", 250.0, al.clone().map(|a| a.0), 0.01),
        FixtureResult::value("rig/aluminium/w_c1F+".into(), "rig text", 460.0, al.map(|a| a.1), 0.01),
    ];
    for (l, stable) in [(0.6, false), (0.8, true), (0.9, true), (1.1, false)] {
        let mut f = FixtureResult::flag(format!("rig/pvc/l={l}/stable"), "rig text", stable, pvc_supercritical_stable(l));
        if !f.pass && f.note.is_none() {
            f.note = Some("threshold criterion puts the stable window at about 0.78-0.88 m".into());
        }
        out.push(f);
    }
    out
}
