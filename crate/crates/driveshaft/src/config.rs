//! Scenario files: flat INI sections with typed values.
//!
//! ```text
//! [shaft]
//! sequence = 90:BE, 45:BE, -45:BE, 0:BE*6, 90:BE
//! r_m = 0.06285
//! length = 2.47
//! omega_nom = 4320
//! ```
//!
//! Numbers are SI except speeds (rev/min) and angles (degrees). Custom
//! materials are declared in `[materials]` as `NAME.field = value`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::buckling::BucklingSearch;
use crate::constraints::{DrivelineConfig, PowerUnit, Regime, ReserveFactors};
use crate::design::{AnalysisOptions, ShaftConfig};
use crate::error::{Error, Result};
use crate::ga::{EncodingSpec, GaParams, MutationMode};
use crate::materials::{Ply, PlyMaterial, StackingSequence};
use crate::optimize::OptimizationProblem;
use crate::rotordynamics::SupportProperties;

pub const SECTIONS: [&str; 7] = ["materials", "shaft", "supports", "driveline", "encoding", "ga", "factors"];

const SHAFT_KEYS: &[&str] = &["sequence", "r_m", "r_out", "length", "omega_nom", "buckling_h_min", "buckling_h_max", "buckling_grid"];
const SUPPORT_KEYS: &[&str] = &["k_e", "m_b", "eta_e", "c_e"];
const DRIVELINE_KEYS: &[&str] = &[
    "total_length",
    "n_shafts",
    "power",
    "power_unit",
    "j_g",
    "j_t",
    "weight_penalty",
    "regime",
    "n_torsional",
    "n_flexural",
    "t_s_min",
];
const ENCODING_KEYS: &[&str] = &[
    "q",
    "bit_alpha",
    "bit_n",
    "bit_mat",
    "bit_ke",
    "bit_rm",
    "bit_omega",
    "r_m_min",
    "r_m_max",
    "k_e_min",
    "k_e_max",
    "omega_min",
    "omega_max",
    "materials",
];
const GA_KEYS: &[&str] = &[
    "population",
    "crossover_prob",
    "crossover_points",
    "mutation_prob",
    "mutation_mode",
    "elites",
    "generations",
    "seed",
];
const FACTOR_KEYS: &[&str] = &[
    "k_str", "k_buck", "k_t_sup", "k_t_inf", "k_f_sup", "k_f_inf", "k_th", "gamma_12", "gamma_3", "gamma_else", "f12",
];
const ORTHO_FIELDS: &[&str] = &[
    "base", "rho", "e11", "e22", "e66", "nu12", "x", "xp", "y", "yp", "s", "eta11", "eta22", "eta66", "t_ply",
];
const ISO_FIELDS: &[&str] = &["kind", "rho", "e", "nu", "t_ply", "eta", "strength"];

/// Ordered key/value sections as written in the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ini {
    pub sections: Vec<(String, Vec<(String, String)>)>,
}

impl Ini {
    pub fn parse(text: &str) -> Result<Ini> {
        let mut ini = Ini::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let here = || format!("line {}", lineno + 1);
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim();
                if !SECTIONS.contains(&name) {
                    return Err(Error::config(name, "", format!("unknown section ({})", here())));
                }
                if ini.section(name).is_some() {
                    return Err(Error::config(name, "", format!("duplicate section ({})", here())));
                }
                ini.sections.push((name.to_string(), Vec::new()));
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config("", line, format!("expected `key = value` ({})", here())))?;
            let (key, value) = (key.trim(), value.trim());
            let Some((section, entries)) = ini.sections.last_mut() else {
                return Err(Error::config("", key, format!("key outside any section ({})", here())));
            };
            if key.is_empty() {
                return Err(Error::config(section, "", format!("empty key ({})", here())));
            }
            if entries.iter().any(|(k, _)| k == key) {
                return Err(Error::config(section, key, "duplicate key"));
            }
            entries.push((key.to_string(), value.to_string()));
        }
        Ok(ini)
    }

    pub fn section(&self, name: &str) -> Option<&[(String, String)]> {
        self.sections.iter().find(|(n, _)| n == name).map(|(_, e)| e.as_slice())
    }

    pub fn set(&mut self, section: &str, key: &str, value: impl Into<String>) {
        let value = value.into();
        let entries = match self.sections.iter_mut().position(|(n, _)| n == section) {
            Some(i) => &mut self.sections[i].1,
            None => {
                self.sections.push((section.to_string(), Vec::new()));
                &mut self.sections.last_mut().unwrap().1
            }
        };
        match entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => entries.push((key.to_string(), value)),
        }
    }
}

impl fmt::Display for Ini {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, entries)) in self.sections.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "[{name}]")?;
            for (k, v) in entries {
                writeln!(f, "{k} = {v}")?;
            }
        }
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    let t = line.trim_start();
    if t.starts_with('#') || t.starts_with(';') {
        return "";
    }
    match line.find(" #") {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Typed view of one section that tracks which keys were consumed.
struct Section<'a> {
    name: &'a str,
    entries: BTreeMap<&'a str, &'a str>,
}

impl<'a> Section<'a> {
    fn new(ini: &'a Ini, name: &'a str, allowed: &[&str]) -> Result<Self> {
        let entries: BTreeMap<&str, &str> =
            ini.section(name).unwrap_or(&[]).iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        if let Some(k) = entries.keys().find(|k| !allowed.contains(k)) {
            return Err(Error::config(name, k, "unknown key"));
        }
        Ok(Section { name, entries })
    }

    fn raw(&self, key: &str) -> Option<&'a str> {
        self.entries.get(key).copied()
    }

    fn require(&self, key: &str) -> Result<&'a str> {
        self.raw(key).ok_or_else(|| Error::config(self.name, key, "missing required key"))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, v: &str) -> Result<T> {
        v.parse().map_err(|_| Error::config(self.name, key, format!("cannot parse `{v}`")))
    }

    fn f64(&self, key: &str) -> Result<f64> {
        let v = self.require(key)?;
        self.parse(key, v)
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        self.raw(key).map_or(Ok(default), |v| self.parse(key, v))
    }

    fn u32_or(&self, key: &str, default: u32) -> Result<u32> {
        self.raw(key).map_or(Ok(default), |v| self.parse(key, v))
    }

    fn u8_or(&self, key: &str, default: u8) -> Result<u8> {
        self.raw(key).map_or(Ok(default), |v| self.parse(key, v))
    }

    fn err(&self, key: &str, e: Error) -> Error {
        match e {
            Error::Config { .. } => e,
            other => Error::config(self.name, key, other.to_string()),
        }
    }
}

/// Parses `angle:MATERIAL*count` items separated by commas.
pub fn parse_sequence(text: &str, materials: &BTreeMap<String, Arc<PlyMaterial<f64>>>) -> Result<StackingSequence<f64>> {
    let mut plies = Vec::new();
    for item in text.split(',').map(str::trim) {
        if item.is_empty() {
            return Err(Error::config("shaft", "sequence", "empty item"));
        }
        let (body, count) = match item.split_once('*') {
            Some((b, c)) => {
                let n: usize = c.trim().parse().map_err(|_| Error::config("shaft", "sequence", format!("bad count in `{item}`")))?;
                if n == 0 {
                    return Err(Error::config("shaft", "sequence", format!("zero count in `{item}`")));
                }
                (b, n)
            }
            None => (item, 1),
        };
        let (angle, mat) = body
            .split_once(':')
            .ok_or_else(|| Error::config("shaft", "sequence", format!("expected angle:MATERIAL in `{item}`")))?;
        let angle: f64 = angle.trim().parse().map_err(|_| Error::config("shaft", "sequence", format!("bad angle in `{item}`")))?;
        let mat = materials
            .get(mat.trim())
            .ok_or_else(|| Error::config("shaft", "sequence", format!("unknown material `{}`", mat.trim())))?;
        plies.extend((0..count).map(|_| Ply::new(angle, mat.clone())));
    }
    StackingSequence::new(plies).map_err(|e| Error::config("shaft", "sequence", e.to_string()))
}

/// Inverse of [`parse_sequence`], grouping consecutive identical plies.
pub fn format_sequence(seq: &StackingSequence<f64>) -> String {
    let mut items: Vec<(f64, &str, usize)> = Vec::new();
    for p in &seq.plies {
        match items.last_mut() {
            Some((a, m, n)) if *a == p.angle && *m == p.material.name => *n += 1,
            _ => items.push((p.angle, &p.material.name, 1)),
        }
    }
    items
        .iter()
        .map(|(a, m, n)| if *n == 1 { format!("{a}:{m}") } else { format!("{a}:{m}*{n}") })
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShaftSection {
    pub sequence: StackingSequence<f64>,
    pub r_m: f64,
    pub length: f64,
    pub omega_nom_rpm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportSection {
    /// `inf` for rigid supports.
    pub k_e: f64,
    /// Falls back to the empirical correlation when a driveline is given.
    pub m_b: Option<f64>,
    pub eta_e: f64,
    pub c_e: Option<f64>,
}

impl Default for SupportSection {
    fn default() -> Self {
        SupportSection { k_e: f64::INFINITY, m_b: None, eta_e: 0.0, c_e: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub materials: BTreeMap<String, Arc<PlyMaterial<f64>>>,
    pub shaft: Option<ShaftSection>,
    pub supports: SupportSection,
    pub driveline: Option<DrivelineConfig>,
    pub encoding: Option<(EncodingSpec, Vec<String>)>,
    pub ga: GaParams,
    pub factors: ReserveFactors,
    pub analysis: AnalysisOptions,
    /// The document the configuration was read from.
    pub source: Ini,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_ini(Ini::parse(text)?)
    }

    pub fn from_ini(ini: Ini) -> Result<Self> {
        let materials = parse_materials(&ini)?;

        let drv = Section::new(&ini, "driveline", DRIVELINE_KEYS)?;
        let driveline = if ini.section("driveline").is_some() {
            let d0 = DrivelineConfig::default();
            let regime = match drv.raw("regime").unwrap_or("subcritical") {
                "subcritical" => Regime::Subcritical,
                "supercritical" => Regime::Supercritical,
                other => return Err(Error::config("driveline", "regime", format!("expected subcritical|supercritical, got `{other}`"))),
            };
            let power_unit = match drv.raw("power_unit").unwrap_or("hp") {
                "hp" => PowerUnit::Horsepower,
                "watts" | "W" => PowerUnit::Watts,
                other => return Err(Error::config("driveline", "power_unit", format!("expected hp|watts, got `{other}`"))),
            };
            let d = DrivelineConfig {
                total_length: drv.f64("total_length")?,
                n_shafts: drv.u32_or("n_shafts", d0.n_shafts)?,
                power_w: drv.f64("power")?,
                power_unit,
                j_g: drv.f64("j_g")?,
                j_t: drv.f64("j_t")?,
                weight_penalty_per_shaft: drv.f64_or("weight_penalty", d0.weight_penalty_per_shaft)?,
                regime,
                n_torsional: drv.u32_or("n_torsional", d0.n_torsional)?,
                n_flexural: drv.u32_or("n_flexural", d0.n_flexural)?,
                t_s_min: drv.f64_or("t_s_min", d0.t_s_min)?,
            };
            d.validate().map_err(|e| drv.err("", e))?;
            Some(d)
        } else {
            None
        };

        let sup = Section::new(&ini, "supports", SUPPORT_KEYS)?;
        let k_e = match sup.raw("k_e") {
            None | Some("rigid") => f64::INFINITY,
            Some(v) => sup.parse("k_e", v)?,
        };
        let supports = SupportSection {
            k_e,
            m_b: sup.raw("m_b").map(|v| sup.parse("m_b", v)).transpose()?,
            eta_e: sup.f64_or("eta_e", 0.0)?,
            c_e: sup.raw("c_e").map(|v| sup.parse("c_e", v)).transpose()?,
        };
        if !(supports.k_e > 0.0) || !(supports.eta_e >= 0.0) || supports.m_b.is_some_and(|m| !(m >= 0.0)) {
            return Err(Error::config("supports", "", "k_e must be > 0, eta_e and m_b >= 0"));
        }

        let sh = Section::new(&ini, "shaft", SHAFT_KEYS)?;
        let mut analysis = AnalysisOptions::default();
        let b0 = BucklingSearch::default();
        analysis.buckling = BucklingSearch {
            h_min: sh.u32_or("buckling_h_min", b0.h_min)?,
            h_max: sh.u32_or("buckling_h_max", b0.h_max)?,
            grid_points: sh.u32_or("buckling_grid", b0.grid_points as u32)? as usize,
            ..b0
        };
        if let Some(d) = &driveline {
            analysis.n_flexural = d.n_flexural;
            analysis.n_torsional = d.n_torsional;
        }
        let shaft = if ini.section("shaft").is_some() {
            let sequence = parse_sequence(sh.require("sequence")?, &materials)?;
            let t = sequence.thickness();
            let r_m = match (sh.raw("r_m"), sh.raw("r_out")) {
                (Some(_), Some(_)) => return Err(Error::config("shaft", "r_m", "give either r_m or r_out, not both")),
                (Some(v), None) => sh.parse("r_m", v)?,
                (None, Some(v)) => sh.parse::<f64>("r_out", v)? - t / 2.0,
                (None, None) => return Err(Error::config("shaft", "r_m", "missing required key")),
            };
            let length = match (sh.raw("length"), &driveline) {
                (Some(v), _) => sh.parse("length", v)?,
                (None, Some(d)) => d.shaft_length(),
                (None, None) => return Err(Error::config("shaft", "length", "missing required key")),
            };
            Some(ShaftSection { sequence, r_m, length, omega_nom_rpm: sh.f64("omega_nom")? })
        } else {
            None
        };

        let fac = Section::new(&ini, "factors", FACTOR_KEYS)?;
        let f0 = ReserveFactors::default();
        let factors = ReserveFactors {
            k_str: fac.f64_or("k_str", f0.k_str)?,
            k_buck: fac.f64_or("k_buck", f0.k_buck)?,
            k_t_sup: fac.f64_or("k_t_sup", f0.k_t_sup)?,
            k_t_inf: fac.f64_or("k_t_inf", f0.k_t_inf)?,
            k_f_sup: fac.f64_or("k_f_sup", f0.k_f_sup)?,
            k_f_inf: fac.f64_or("k_f_inf", f0.k_f_inf)?,
            k_th: fac.f64_or("k_th", f0.k_th)?,
            gamma_12: fac.f64_or("gamma_12", f0.gamma_12)?,
            gamma_3: fac.f64_or("gamma_3", f0.gamma_3)?,
            gamma_else: fac.f64_or("gamma_else", f0.gamma_else)?,
        };
        factors.validate().map_err(|e| fac.err("", e))?;
        analysis.f12 = fac.f64_or("f12", analysis.f12)?;

        let enc = Section::new(&ini, "encoding", ENCODING_KEYS)?;
        let encoding = if ini.section("encoding").is_some() {
            let spec = EncodingSpec {
                q: enc.u32_or("q", 6)? as usize,
                bit_alpha: enc.u8_or("bit_alpha", 2)?,
                bit_n: enc.u8_or("bit_n", 1)?,
                bit_mat: enc.u8_or("bit_mat", 0)?,
                bit_ke: enc.u8_or("bit_ke", 0)?,
                bit_rm: enc.u8_or("bit_rm", 3)?,
                bit_omega: enc.u8_or("bit_omega", 3)?,
                r_m_bounds: (enc.f64("r_m_min")?, enc.f64("r_m_max")?),
                k_e_bounds: (enc.f64_or("k_e_min", 1e4)?, enc.f64_or("k_e_max", 1e7)?),
                omega_bounds: (enc.f64("omega_min")?, enc.f64("omega_max")?),
            };
            spec.validate().map_err(|e| enc.err("", e))?;
            let names: Vec<String> = enc.require("materials")?.split(',').map(|s| s.trim().to_string()).collect();
            for n in &names {
                if !materials.contains_key(n) {
                    return Err(Error::config("encoding", "materials", format!("unknown material `{n}`")));
                }
            }
            if names.len() != 1 << spec.bit_mat {
                return Err(Error::config("encoding", "materials", format!("bit_mat = {} needs {} materials", spec.bit_mat, 1 << spec.bit_mat)));
            }
            Some((spec, names))
        } else {
            None
        };

        let gas = Section::new(&ini, "ga", GA_KEYS)?;
        let g0 = GaParams::default();
        let mutation_mode = match gas.raw("mutation_mode").unwrap_or("individual") {
            "individual" => MutationMode::PerIndividual,
            "bit" => MutationMode::PerBit,
            other => return Err(Error::config("ga", "mutation_mode", format!("expected individual|bit, got `{other}`"))),
        };
        let ga = GaParams {
            population_size: gas.u32_or("population", g0.population_size as u32)? as usize,
            crossover_prob: gas.f64_or("crossover_prob", g0.crossover_prob)?,
            crossover_points: gas.u32_or("crossover_points", g0.crossover_points as u32)? as usize,
            mutation_prob: gas.f64_or("mutation_prob", g0.mutation_prob)?,
            mutation_mode,
            elites: gas.u32_or("elites", g0.elites as u32)? as usize,
            max_generations: gas.u32_or("generations", g0.max_generations as u32)? as usize,
            seed: gas.raw("seed").map_or(Ok(g0.seed), |v| gas.parse("seed", v))?,
            threads: None,
        };
        if let Some((spec, _)) = &encoding {
            ga.validate(spec.len()).map_err(|e| gas.err("", e))?;
        }

        Ok(ScenarioConfig { materials, shaft, supports, driveline, encoding, ga, factors, analysis, source: ini })
    }

    /// Shaft design for `analyze`.
    pub fn shaft_config(&self) -> Result<ShaftConfig> {
        let sh = self.shaft.as_ref().ok_or_else(|| Error::config("shaft", "", "missing section"))?;
        let m_b = match (self.supports.m_b, &self.driveline) {
            (Some(m), _) => m,
            (None, Some(d)) => d.support_mass(sh.omega_nom_rpm),
            (None, None) => 0.0,
        };
        let support = SupportProperties { m_b, k_e: self.supports.k_e, eta_e: self.supports.eta_e, c_e: self.supports.c_e };
        Ok(ShaftConfig { sequence: sh.sequence.clone(), r_m: sh.r_m, l: sh.length, support, omega_nom_rpm: sh.omega_nom_rpm })
    }

    /// Problem for `optimize`.
    pub fn optimization_problem(&self) -> Result<OptimizationProblem> {
        let (spec, names) = self.encoding.as_ref().ok_or_else(|| Error::config("encoding", "", "missing section"))?;
        let driveline = self.driveline.clone().ok_or_else(|| Error::config("driveline", "", "missing section"))?;
        let p = OptimizationProblem {
            encoding: spec.clone(),
            materials: names.iter().map(|n| self.materials[n].clone()).collect(),
            driveline,
            factors: self.factors.clone(),
            k_e_fixed: self.supports.k_e,
            eta_e: self.supports.eta_e,
            analysis: self.analysis.clone(),
        };
        p.validate().map_err(|e| Error::config("encoding", "", e.to_string()))?;
        Ok(p)
    }
}

fn parse_materials(ini: &Ini) -> Result<BTreeMap<String, Arc<PlyMaterial<f64>>>> {
    let mut out: BTreeMap<String, Arc<PlyMaterial<f64>>> = ["BE", "CE_L", "HM", "HS"]
        .iter()
        .map(|n| (n.to_string(), Arc::new(PlyMaterial::builtin(n).expect("builtin"))))
        .collect();
    let mut defs: BTreeMap<&str, BTreeMap<&str, &str>> = BTreeMap::new();
    for (key, value) in ini.section("materials").unwrap_or(&[]) {
        let (name, field) = key
            .split_once('.')
            .ok_or_else(|| Error::config("materials", key, "expected NAME.field"))?;
        defs.entry(name).or_default().insert(field, value);
    }
    for (name, fields) in defs {
        let ctx = |f: &str| format!("{name}.{f}");
        let num = |f: &str| -> Result<Option<f64>> {
            fields
                .get(f)
                .map(|v| v.parse::<f64>().map_err(|_| Error::config("materials", &ctx(f), format!("cannot parse `{v}`"))))
                .transpose()
        };
        let need = |f: &str| num(f)?.ok_or_else(|| Error::config("materials", &ctx(f), "missing required key"));
        let mat = if fields.get("kind") == Some(&"isotropic") {
            if let Some(f) = fields.keys().find(|f| !ISO_FIELDS.contains(f)) {
                return Err(Error::config("materials", &ctx(f), "unknown key for an isotropic material"));
            }
            let mut m = PlyMaterial::isotropic(name, need("rho")?, need("e")?, need("nu")?, need("t_ply")?);
            if let Some(eta) = num("eta")? {
                (m.eta11, m.eta22, m.eta66) = (eta, eta, eta);
            }
            if let Some(s) = num("strength")? {
                (m.x, m.xp, m.y, m.yp, m.s) = (s, s, s, s, s / 2.0);
            }
            m
        } else {
            if let Some(f) = fields.keys().find(|f| !ORTHO_FIELDS.contains(f)) {
                return Err(Error::config("materials", &ctx(f), "unknown key"));
            }
            let base = match fields.get("base") {
                Some(b) => Some(
                    out.get(*b).map(|m| (**m).clone()).ok_or_else(|| Error::config("materials", &ctx("base"), format!("unknown base `{b}`")))?,
                ),
                None => None,
            };
            let pick = |f: &str, from_base: Option<f64>| -> Result<f64> {
                match (num(f)?, from_base) {
                    (Some(v), _) | (None, Some(v)) => Ok(v),
                    (None, None) => Err(Error::config("materials", &ctx(f), "missing required key")),
                }
            };
            let b = base.as_ref();
            let eta_default = |i: usize| Some(crate::materials::DEFAULT_LOSS_FACTORS[i]);
            PlyMaterial {
                name: name.to_string(),
                rho: pick("rho", b.map(|m| m.rho))?,
                e11: pick("e11", b.map(|m| m.e11))?,
                e22: pick("e22", b.map(|m| m.e22))?,
                e66: pick("e66", b.map(|m| m.e66))?,
                nu12: pick("nu12", b.map(|m| m.nu12))?,
                x: pick("x", b.map(|m| m.x))?,
                xp: pick("xp", b.map(|m| m.xp))?,
                y: pick("y", b.map(|m| m.y))?,
                yp: pick("yp", b.map(|m| m.yp))?,
                s: pick("s", b.map(|m| m.s))?,
                eta11: pick("eta11", b.map(|m| m.eta11).or(eta_default(0)))?,
                eta22: pick("eta22", b.map(|m| m.eta22).or(eta_default(1)))?,
                eta66: pick("eta66", b.map(|m| m.eta66).or(eta_default(2)))?,
                t_ply: pick("t_ply", b.map(|m| m.t_ply).or(Some(crate::materials::DEFAULT_PLY_THICKNESS)))?,
            }
        };
        mat.validate().map_err(|e| Error::config("materials", name, e.to_string()))?;
        out.insert(name.to_string(), Arc::new(mat));
    }
    Ok(out)
}
