//! First-ply failure by stepping the load, with the criteria written out
//! directly from the strengths.

use driveshaft::materials::{PlyMaterial, StackingSequence};
use driveshaft::shaft::ShaftGeometry;
use driveshaft::strength::{ply_stresses_under_torsion, Coupling, FailureCriterion};

/// Criterion written out from the strengths, without the library's scale solver.
pub fn violated(sigma: [f64; 3], m: &PlyMaterial<f64>, crit: FailureCriterion<f64>) -> bool {
    let [s1, s2, s12] = sigma;
    match crit {
        FailureCriterion::MaxStress => s1 > m.x || s1 < -m.xp || s12.abs() > m.s,
        FailureCriterion::TsaiWu { f12 } => {
            let f1 = 1.0 / m.x - 1.0 / m.xp;
            let f2 = 1.0 / m.y - 1.0 / m.yp;
            let index = f1 * s1
                + f2 * s2
                + s1 * s1 / (m.x * m.xp)
                + s2 * s2 / (m.y * m.yp)
                + s12 * s12 / (m.s * m.s)
                + 2.0 * f12 / (m.x * m.xp * m.y * m.yp).sqrt() * s1 * s2;
            index > 1.0
        }
    }
}

/// First torque on a 0.1 % geometric ladder at which any ply face fails.
pub fn stepped_capacity(
    seq: &StackingSequence<f64>,
    geom: &ShaftGeometry<f64>,
    crit: FailureCriterion<f64>,
    coupling: Coupling,
    sign: f64,
) -> (f64, f64) {
    let mut prev = 0.0;
    let mut t = 1.0;
    loop {
        let state = ply_stresses_under_torsion(seq, geom, sign * t, coupling).unwrap();
        if state.faces.iter().any(|f| violated(f.sigma, &seq.plies[f.ply].material, crit)) {
            return (prev, t);
        }
        prev = t;
        t *= 1.001;
    }
}
