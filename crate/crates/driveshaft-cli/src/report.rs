//! Flat records for analysis output, written as CSV and as a console table.

use std::io::Write;

use driveshaft::config::format_sequence;
use driveshaft::constraints::{evaluate_constraints, DrivelineConfig, ReserveFactors};
use driveshaft::design::ShaftAnalysis;
use driveshaft::rotordynamics::rad_s_to_rpm;
use driveshaft::Result;

/// Nine significant digits, the precision of every float we write to CSV.
pub fn sig9(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.8e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn human(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".into()
    } else if !x.is_finite() {
        sig9(x)
    } else if (1e-3..1e6).contains(&a) {
        // five significant digits
        let decimals = (4 - a.log10().floor() as i32).max(0) as usize;
        let s = format!("{x:.decimals$}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{x:.4e}")
    }
}

#[derive(Debug, Clone)]
pub struct Record {
    pub section: &'static str,
    pub quantity: String,
    pub n: Option<u32>,
    pub value: f64,
    pub unit: &'static str,
    pub note: String,
}

#[derive(Debug, Default)]
pub struct Records(pub Vec<Record>);

impl Records {
    fn push(&mut self, section: &'static str, quantity: &str, n: Option<u32>, value: f64, unit: &'static str) {
        self.0.push(Record { section, quantity: quantity.into(), n, value, unit, note: String::new() });
    }

    fn push_result(&mut self, section: &'static str, quantity: &str, n: Option<u32>, value: Result<f64>, unit: &'static str) {
        match value {
            Ok(v) => self.push(section, quantity, n, v, unit),
            Err(e) => self.0.push(Record {
                section,
                quantity: quantity.into(),
                n,
                value: f64::NAN,
                unit,
                note: e.to_string(),
            }),
        }
    }

    pub fn write_csv(&self, out: impl Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["section", "quantity", "n", "value", "unit", "note"])?;
        for r in &self.0 {
            let n = r.n.map(|n| n.to_string()).unwrap_or_default();
            w.write_record([r.section, &r.quantity, &n, &sig9(r.value), r.unit, &r.note])?;
        }
        w.flush()
    }

    pub fn print_table(&self, out: &mut impl Write) -> std::io::Result<()> {
        let mut current = "";
        for r in &self.0 {
            if r.section != current {
                writeln!(out, "[{}]", r.section)?;
                current = r.section;
            }
            let name = match r.n {
                Some(n) => format!("{}[{n}]", r.quantity),
                None => r.quantity.clone(),
            };
            let value = if r.value.is_nan() { "-".to_string() } else { human(r.value) };
            if r.note.is_empty() {
                writeln!(out, "  {name:<28} {value:>16} {}", r.unit)?;
            } else {
                writeln!(out, "  {name:<28} {value:>16} {}  ({})", r.unit, r.note)?;
            }
        }
        Ok(())
    }
}

/// Everything `analyze` reports about one shaft.
pub fn analysis_records(
    a: &ShaftAnalysis,
    driveline: Option<&DrivelineConfig>,
    factors: &ReserveFactors,
) -> Records {
    let mut r = Records::default();
    let cfg = &a.config;
    let g = &a.geometry;
    r.push("geometry", "r_m", None, g.r_m, "m");
    r.push("geometry", "t_s", None, g.t_s, "m");
    r.push("geometry", "length", None, g.l, "m");
    r.push("geometry", "plies", None, cfg.sequence.len() as f64, "-");

    let m = &a.material;
    r.push("material", "E", None, m.e, "Pa");
    r.push("material", "G", None, m.g, "Pa");
    r.push("material", "nu", None, m.nu, "-");
    r.push("material", "kappa", None, m.kappa, "-");
    r.push("material", "rho", None, m.rho, "kg/m3");
    r.push("material", "eta_i", None, m.eta_i, "-");

    let s = &a.section;
    r.push("section", "area", None, s.s, "m2");
    r.push("section", "I", None, s.i_y, "m4");
    r.push("section", "J_s", None, s.j_s, "kg.m2");
    r.push("section", "tube_mass", None, s.m_s, "kg");
    r.push("section", "support_mass", None, cfg.support.m_b, "kg");

    for (i, c) in a.critical.iter().enumerate() {
        let n = Some(i as u32 + 1);
        let c = || c.as_ref().map_err(Clone::clone);
        r.push_result("critical_speeds", "forward_minus", n, c().map(|c| c.forward_minus), "rad/s");
        r.push_result("critical_speeds", "forward_minus_rpm", n, c().map(|c| rad_s_to_rpm(c.forward_minus)), "rev/min");
        r.push_result("critical_speeds", "forward_plus", n, c().map(|c| c.forward_plus), "rad/s");
        r.push_result("critical_speeds", "forward_plus_rpm", n, c().map(|c| rad_s_to_rpm(c.forward_plus)), "rev/min");
        r.push_result("critical_speeds", "backward_minus", n, c().map(|c| c.backward_minus), "rad/s");
        r.push_result("critical_speeds", "backward_plus", n, c().map(|c| c.backward_plus), "rad/s");
    }
    match &a.stability {
        None => r.0.push(Record {
            section: "stability",
            quantity: "threshold".into(),
            n: None,
            value: f64::NAN,
            unit: "rad/s",
            note: "rigid supports, not evaluated".into(),
        }),
        Some(Ok(st)) => match st.omega_th {
            Some(w) => {
                r.push("stability", "threshold", None, w, "rad/s");
                r.push("stability", "threshold_rpm", None, rad_s_to_rpm(w), "rev/min");
            }
            None => r.0.push(Record {
                section: "stability",
                quantity: "threshold".into(),
                n: None,
                value: f64::INFINITY,
                unit: "rad/s",
                note: "stable".into(),
            }),
        },
        Some(Err(e)) => r.push_result("stability", "threshold", None, Err(e.clone()), "rad/s"),
    }

    match &a.torsional {
        Ok(ws) => {
            for (i, w) in ws.iter().enumerate() {
                r.push("torsional", "frequency_rpm", Some(i as u32 + 1), rad_s_to_rpm(*w), "rev/min");
            }
        }
        Err(e) => r.push_result("torsional", "frequency_rpm", None, Err(e.clone()), "rev/min"),
    }

    let st = &a.strength;
    for (name, cap) in [
        ("max_stress_b0", &st.max_stress_zero),
        ("max_stress_abd", &st.max_stress_as_is),
        ("tsai_wu_b0", &st.tsai_wu_zero),
        ("tsai_wu_abd", &st.tsai_wu_as_is),
    ] {
        r.push_result("strength", name, None, cap.as_ref().map(|c| c.t_str).map_err(Clone::clone), "N.m");
    }

    match &a.buckling {
        Ok(b) => {
            r.push("buckling", "t_buck_pos", None, b.t_buck_pos(), "N.m");
            r.push("buckling", "h_pos", None, b.positive.h as f64, "-");
            r.push("buckling", "p_pos", None, b.positive.p, "-");
            r.push("buckling", "t_buck_neg", None, b.t_buck_neg(), "N.m");
            r.push("buckling", "h_neg", None, b.negative.h as f64, "-");
            r.push("buckling", "p_neg", None, b.negative.p, "-");
        }
        Err(e) => r.push_result("buckling", "t_buck_pos", None, Err(e.clone()), "N.m"),
    }
    r.push("buckling", "hayashi", None, a.hayashi, "N.m");

    if let Some(d) = driveline {
        let rep = evaluate_constraints(a, d, factors);
        let total = driveshaft::constraints::driveline_mass(d, a.mass(), cfg.support.m_b);
        r.push("driveline", "n_shafts", None, d.n_shafts as f64, "-");
        r.push("driveline", "nominal_torque", None, rep.t_nom, "N.m");
        r.push("driveline", "tubes_mass", None, a.mass() * d.n_shafts as f64, "kg");
        r.push("driveline", "total_mass", None, total, "kg");
        for v in &rep.values {
            r.0.push(Record {
                section: "constraints",
                quantity: v.kind.to_string(),
                n: None,
                value: v.value,
                unit: "-",
                note: v.note.clone().unwrap_or_default(),
            });
        }
        r.push("constraints", "feasible", None, if rep.feasible { 1.0 } else { 0.0 }, "-");
    }
    r
}

/// One-line description of a laminate in bracket notation plus the config syntax.
pub fn describe_sequence(a: &ShaftAnalysis) -> (String, String) {
    (a.config.sequence.to_string(), format_sequence(&a.config.sequence))
}
