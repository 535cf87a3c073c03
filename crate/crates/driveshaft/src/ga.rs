//! Binary-chromosome genetic algorithm.
//!
//! Chromosomes are `Vec<bool>` read most-significant bit first. Evolution is
//! deterministic for a given seed: every random draw comes from a ChaCha
//! stream derived from the seed and the generation index, and fitness
//! evaluation (possibly parallel) never touches the generator.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const ALPHA_2BIT: [f64; 4] = [-45.0, 0.0, 45.0, 90.0];
pub const ALPHA_3BIT: [f64; 8] = [-67.5, -45.0, -22.5, 0.0, 22.5, 45.0, 67.5, 90.0];

#[derive(Debug, Clone, PartialEq)]
pub struct EncodingSpec {
    /// Number of (orientation, count, material) gene groups.
    pub q: usize,
    pub bit_alpha: u8,
    pub bit_n: u8,
    pub bit_mat: u8,
    /// Zero when the support stiffness is not a design variable.
    pub bit_ke: u8,
    pub bit_rm: u8,
    pub bit_omega: u8,
    pub r_m_bounds: (f64, f64),
    pub k_e_bounds: (f64, f64),
    /// Nominal speed bounds (rev/min).
    pub omega_bounds: (f64, f64),
}

impl EncodingSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |k: &str| Err(Error::invalid(format!("encoding {k} out of range")));
        if self.q == 0 {
            return bad("q");
        }
        if !matches!(self.bit_alpha, 2 | 3) {
            return bad("bit_alpha");
        }
        if !(1..=3).contains(&self.bit_n) {
            return bad("bit_n");
        }
        if self.bit_mat > 1 {
            return bad("bit_mat");
        }
        if !matches!(self.bit_ke, 0 | 3) {
            return bad("bit_ke");
        }
        if !matches!(self.bit_rm, 3 | 4) {
            return bad("bit_rm");
        }
        if self.bit_omega != 3 {
            return bad("bit_omega");
        }
        let mut bounds = vec![("r_m", self.r_m_bounds), ("omega", self.omega_bounds)];
        if self.bit_ke > 0 {
            bounds.push(("k_e", self.k_e_bounds));
        }
        for (k, (lo, hi)) in bounds {
            if !(lo > 0.0 && hi > lo) {
                return Err(Error::invalid(format!("encoding bounds for {k} must satisfy 0 < lo < hi")));
            }
        }
        Ok(())
    }

    /// `(bit_α + bit_n + bit_mat)·q + bit_ke + bit_rm + bit_Ω`.
    pub fn len(&self) -> usize {
        (self.bit_alpha + self.bit_n + self.bit_mat) as usize * self.q
            + (self.bit_ke + self.bit_rm + self.bit_omega) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn alpha_table(&self) -> &'static [f64] {
        if self.bit_alpha == 3 {
            &ALPHA_3BIT
        } else {
            &ALPHA_2BIT
        }
    }
}

/// One orientation group: `count` plies at `angle` of material `material`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneGroup {
    pub angle: f64,
    pub count: u32,
    pub material: usize,
}

/// Decoded chromosome.
#[derive(Debug, Clone, PartialEq)]
pub struct Genes {
    pub groups: Vec<GeneGroup>,
    /// Present only when the stiffness is encoded.
    pub k_e: Option<f64>,
    pub r_m: f64,
    pub omega_rpm: f64,
}

struct Reader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: u8) -> u32 {
        let mut v = 0u32;
        for _ in 0..n {
            v = (v << 1) | self.bits[self.pos] as u32;
            self.pos += 1;
        }
        v
    }
}

fn map_real(k: u32, bits: u8, (lo, hi): (f64, f64)) -> f64 {
    lo + k as f64 * (hi - lo) / ((1u32 << bits) - 1) as f64
}

pub fn decode(bits: &[bool], spec: &EncodingSpec) -> Result<Genes> {
    if bits.len() != spec.len() {
        return Err(Error::invalid(format!("chromosome has {} bits, encoding needs {}", bits.len(), spec.len())));
    }
    let mut rd = Reader { bits, pos: 0 };
    let alpha = spec.alpha_table();
    let groups = (0..spec.q)
        .map(|_| {
            let a = rd.take(spec.bit_alpha) as usize;
            let n = rd.take(spec.bit_n);
            let m = rd.take(spec.bit_mat) as usize;
            GeneGroup { angle: alpha[a], count: n + 1, material: m }
        })
        .collect();
    let k_e = (spec.bit_ke > 0).then(|| map_real(rd.take(spec.bit_ke), spec.bit_ke, spec.k_e_bounds));
    let r_m = map_real(rd.take(spec.bit_rm), spec.bit_rm, spec.r_m_bounds);
    let omega_rpm = map_real(rd.take(spec.bit_omega), spec.bit_omega, spec.omega_bounds);
    Ok(Genes { groups, k_e, r_m, omega_rpm })
}

fn push_bits(out: &mut Vec<bool>, v: u32, n: u8) {
    for i in (0..n).rev() {
        out.push((v >> i) & 1 == 1);
    }
}

fn unmap_real(x: f64, bits: u8, (lo, hi): (f64, f64), what: &str) -> Result<u32> {
    let steps = ((1u32 << bits) - 1) as f64;
    let k = ((x - lo) / (hi - lo) * steps).round();
    if !(0.0..=steps).contains(&k) || (map_real(k as u32, bits, (lo, hi)) - x).abs() > 1e-9 * hi.abs().max(1.0) {
        return Err(Error::invalid(format!("{what} = {x} is not on the encoding grid")));
    }
    Ok(k as u32)
}

/// Inverse of [`decode`] for values that lie on the encoding grid.
pub fn encode(genes: &Genes, spec: &EncodingSpec) -> Result<Vec<bool>> {
    if genes.groups.len() != spec.q {
        return Err(Error::invalid("gene group count differs from q"));
    }
    let mut out = Vec::with_capacity(spec.len());
    let alpha = spec.alpha_table();
    for g in &genes.groups {
        let a = alpha
            .iter()
            .position(|v| *v == g.angle)
            .ok_or_else(|| Error::invalid(format!("angle {} not in the orientation table", g.angle)))?;
        if g.count == 0 || g.count > 1 << spec.bit_n {
            return Err(Error::invalid(format!("ply count {} not encodable", g.count)));
        }
        if g.material >= 1 << spec.bit_mat {
            return Err(Error::invalid(format!("material index {} not encodable", g.material)));
        }
        push_bits(&mut out, a as u32, spec.bit_alpha);
        push_bits(&mut out, g.count - 1, spec.bit_n);
        push_bits(&mut out, g.material as u32, spec.bit_mat);
    }
    match (spec.bit_ke, genes.k_e) {
        (0, None) => {}
        (b, Some(k)) if b > 0 => push_bits(&mut out, unmap_real(k, b, spec.k_e_bounds, "k_e")?, b),
        _ => return Err(Error::invalid("k_e gene presence does not match the encoding")),
    }
    push_bits(&mut out, unmap_real(genes.r_m, spec.bit_rm, spec.r_m_bounds, "r_m")?, spec.bit_rm);
    push_bits(&mut out, unmap_real(genes.omega_rpm, spec.bit_omega, spec.omega_bounds, "omega")?, spec.bit_omega);
    Ok(out)
}

/// Hex rendering of a chromosome, MSB first, zero-padded to whole nibbles.
pub fn bits_to_hex(bits: &[bool]) -> String {
    bits.chunks(4)
        .map(|c| {
            let mut v = 0u32;
            for i in 0..4 {
                v = (v << 1) | c.get(i).copied().unwrap_or(false) as u32;
            }
            char::from_digit(v, 16).unwrap()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MutationMode {
    /// With probability `mutation_prob` flip one uniformly chosen bit.
    #[default]
    PerIndividual,
    /// Flip each bit independently with probability `mutation_prob`.
    PerBit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaParams {
    pub population_size: usize,
    pub crossover_prob: f64,
    pub crossover_points: usize,
    pub mutation_prob: f64,
    pub mutation_mode: MutationMode,
    pub elites: usize,
    pub max_generations: usize,
    pub seed: u64,
    /// Evaluation threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population_size: 300,
            crossover_prob: 0.9,
            crossover_points: 1,
            mutation_prob: 0.1,
            mutation_mode: MutationMode::PerIndividual,
            elites: 2,
            max_generations: 500,
            seed: 0,
            threads: None,
        }
    }
}

impl GaParams {
    pub fn validate(&self, n_bits: usize) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::invalid("population must hold at least two individuals"));
        }
        if self.elites >= self.population_size {
            return Err(Error::invalid("elites must be fewer than the population"));
        }
        for (k, p) in [("crossover_prob", self.crossover_prob), ("mutation_prob", self.mutation_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("{k} must lie in [0, 1]")));
            }
        }
        if n_bits < 2 || self.crossover_points == 0 || self.crossover_points >= n_bits {
            return Err(Error::invalid("crossover needs 1 <= points < chromosome length"));
        }
        if self.max_generations == 0 {
            return Err(Error::invalid("max_generations must be >= 1"));
        }
        if self.threads == Some(0) {
            return Err(Error::invalid("threads must be >= 1"));
        }
        Ok(())
    }
}

/// What the evaluator reports for one chromosome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub fitness: f64,
    /// Mass reported in the history (kg).
    pub mass: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub bits: Vec<bool>,
    pub eval: Evaluation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best: Individual,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaOutcome {
    pub best: Individual,
    pub history: Vec<GenerationRecord>,
    /// Distinct chromosomes evaluated.
    pub unique_evaluations: usize,
}

/// `f_i − min f`.
pub fn window_scale(fitness: &[f64]) -> Vec<f64> {
    let min = fitness.iter().copied().fold(f64::INFINITY, f64::min);
    fitness.iter().map(|f| f - min).collect()
}

/// Roulette draw on scaled fitnesses, uniform when they sum to zero.
pub fn select_index<R: Rng + ?Sized>(scaled: &[f64], rng: &mut R) -> usize {
    let total: f64 = scaled.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return rng.gen_range(0..scaled.len());
    }
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (i, s) in scaled.iter().enumerate() {
        acc += s;
        if target < acc {
            return i;
        }
    }
    // rounding left the target past the last bin: take the last positive one
    scaled.iter().rposition(|s| *s > 0.0).unwrap_or(scaled.len() - 1)
}

/// Exchanges alternate segments between the given cut points (each in `1..len`).
pub fn crossover(a: &[bool], b: &[bool], cuts: &[usize]) -> (Vec<bool>, Vec<bool>) {
    let mut cuts = cuts.to_vec();
    cuts.sort_unstable();
    let (mut c1, mut c2) = (a.to_vec(), b.to_vec());
    let mut swap = false;
    let mut next = cuts.iter().peekable();
    for i in 0..a.len() {
        while next.peek().is_some_and(|&&c| c == i) {
            swap = !swap;
            next.next();
        }
        if swap {
            c1[i] = b[i];
            c2[i] = a[i];
        }
    }
    (c1, c2)
}

fn mutate<R: Rng + ?Sized>(bits: &mut [bool], params: &GaParams, rng: &mut R) {
    match params.mutation_mode {
        MutationMode::PerIndividual => {
            if rng.gen::<f64>() < params.mutation_prob {
                let i = rng.gen_range(0..bits.len());
                bits[i] = !bits[i];
            }
        }
        MutationMode::PerBit => {
            for b in bits.iter_mut() {
                if rng.gen::<f64>() < params.mutation_prob {
                    *b = !*b;
                }
            }
        }
    }
}

fn generation_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sanitized fitness: anything non-finite ranks below every finite value.
fn rank_key(e: &Evaluation) -> f64 {
    if e.fitness.is_finite() {
        e.fitness
    } else {
        f64::NEG_INFINITY
    }
}

/// Best-first order with lexicographic tie-break on the chromosome.
fn ranking(pop: &[Individual]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pop.len()).collect();
    idx.sort_by(|&i, &j| rank_key(&pop[j].eval).total_cmp(&rank_key(&pop[i].eval)).then_with(|| pop[i].bits.cmp(&pop[j].bits)));
    idx
}

pub fn evolve<E>(params: &GaParams, n_bits: usize, evaluator: E) -> Result<GaOutcome>
where
    E: Fn(&[bool]) -> Evaluation + Sync,
{
    params.validate(n_bits)?;
    let pool = match params.threads {
        Some(t) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::invalid(format!("thread pool: {e}")))?,
        ),
        None => None,
    };
    let mut cache: HashMap<Vec<bool>, Evaluation> = HashMap::new();
    let mut evaluate = |chromosomes: Vec<Vec<bool>>| -> Vec<Individual> {
        let mut fresh: Vec<Vec<bool>> = chromosomes.iter().filter(|c| !cache.contains_key(*c)).cloned().collect();
        fresh.sort();
        fresh.dedup();
        let run = || fresh.par_iter().map(|c| evaluator(c)).collect::<Vec<_>>();
        let evals = match &pool {
            Some(p) => p.install(run),
            None => run(),
        };
        cache.extend(fresh.into_iter().zip(evals));
        chromosomes
            .into_iter()
            .map(|bits| {
                let eval = cache[&bits];
                Individual { bits, eval }
            })
            .collect()
    };

    let mut rng = generation_rng(params.seed, u64::MAX);
    let initial: Vec<Vec<bool>> =
        (0..params.population_size).map(|_| (0..n_bits).map(|_| rng.gen::<bool>()).collect()).collect();
    let mut pop = evaluate(initial);
    let mut history = Vec::with_capacity(params.max_generations);

    for gen in 0..params.max_generations {
        let order = ranking(&pop);
        history.push(GenerationRecord { generation: gen, best: pop[order[0]].clone() });
        if gen + 1 == params.max_generations {
            break;
        }
        let mut rng = generation_rng(params.seed, gen as u64);
        let keys: Vec<f64> = pop.iter().map(|i| rank_key(&i.eval)).collect();
        let floor = keys.iter().copied().filter(|f| f.is_finite()).fold(f64::INFINITY, f64::min);
        let keys: Vec<f64> = keys.iter().map(|&f| if f.is_finite() { f } else { floor }).collect();
        let scaled = window_scale(&keys);

        let mut next: Vec<Vec<bool>> = order.iter().take(params.elites).map(|&i| pop[i].bits.clone()).collect();
        while next.len() < params.population_size {
            let pa = &pop[select_index(&scaled, &mut rng)].bits;
            let pb = &pop[select_index(&scaled, &mut rng)].bits;
            let (mut c1, mut c2) = if rng.gen::<f64>() < params.crossover_prob {
                let mut cuts = Vec::with_capacity(params.crossover_points);
                while cuts.len() < params.crossover_points {
                    let c = rng.gen_range(1..n_bits);
                    if !cuts.contains(&c) {
                        cuts.push(c);
                    }
                }
                crossover(pa, pb, &cuts)
            } else {
                (pa.clone(), pb.clone())
            };
            mutate(&mut c1, params, &mut rng);
            mutate(&mut c2, params, &mut rng);
            next.push(c1);
            if next.len() < params.population_size {
                next.push(c2);
            }
        }
        pop = evaluate(next);
    }
    let best = history.last().map(|r| r.best.clone()).expect("at least one generation");
    Ok(GaOutcome { best, history, unique_evaluations: cache.len() })
}
