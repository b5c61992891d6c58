//! Exact circuit propagation in PTM coordinates and a Monte-Carlo executor
//! for mitigation sampling plans, used to verify unbiasedness and the
//! predicted variance amplification.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::BasisSet;
use crate::channel::PTMChannel;
use crate::error::{QemError, Result};
use crate::pauli::{all_zero_vector, PauliString};
use crate::qp::SamplingPlan;

/// One circuit layer.
#[derive(Debug, Clone)]
pub enum Element {
    /// Perfect gate.
    Gate(PTMChannel),
    /// Noise applied as-is, never mitigated.
    Noise(PTMChannel),
    /// Noise to be cancelled by the next sampling plan in order.
    Mitigated(PTMChannel),
}

impl Element {
    fn channel(&self) -> &PTMChannel {
        match self {
            Element::Gate(c) | Element::Noise(c) | Element::Mitigated(c) => c,
        }
    }
}

/// Ordered layers acting on the all-zero initial state.
#[derive(Debug, Clone)]
pub struct Circuit {
    n: usize,
    elements: Vec<Element>,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Circuit> {
        if n == 0 || n > 4 {
            return Err(QemError::UnsupportedQubitCount(n));
        }
        Ok(Circuit {
            n,
            elements: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn push(&mut self, e: Element) -> Result<()> {
        if e.channel().n() != self.n {
            return Err(QemError::SizeMismatch(e.channel().n(), self.n));
        }
        self.elements.push(e);
        Ok(())
    }

    pub fn mitigated_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e, Element::Mitigated(_)))
            .count()
    }

    /// The noiseless reference: gates only.
    pub fn ideal(&self) -> Circuit {
        Circuit {
            n: self.n,
            elements: self
                .elements
                .iter()
                .filter(|e| matches!(e, Element::Gate(_)))
                .cloned()
                .collect(),
        }
    }
}

/// Real-weighted sum of Pauli strings.
#[derive(Debug, Clone)]
pub struct Observable {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl Observable {
    pub fn new(n: usize, terms: Vec<(f64, PauliString)>) -> Result<Observable> {
        for (_, p) in &terms {
            if p.n() != n {
                return Err(QemError::SizeMismatch(p.n(), n));
            }
        }
        Ok(Observable { n, terms })
    }

    pub fn single(p: PauliString) -> Observable {
        Observable {
            n: p.n(),
            terms: vec![(1.0, p)],
        }
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }
}

fn propagate_all(circuit: &Circuit) -> DVector<f64> {
    let mut x = all_zero_vector(circuit.n).x;
    for e in &circuit.elements {
        x = e.channel().matrix() * x;
    }
    x
}

/// Per-term Pauli expectations sqrt(2^n) x[idx] of the propagated state.
fn term_expectations(x: &DVector<f64>, obs: &Observable) -> Vec<f64> {
    let scale = ((1usize << obs.n) as f64).sqrt();
    obs.terms
        .iter()
        .map(|(_, p)| scale * x[p.index()])
        .collect()
}

/// Deterministic expectation value, mitigation markers treated as plain
/// noise.
pub fn run_exact(circuit: &Circuit, obs: &Observable) -> Result<f64> {
    if circuit.n != obs.n {
        return Err(QemError::SizeMismatch(circuit.n, obs.n));
    }
    let x = propagate_all(circuit);
    let e = term_expectations(&x, obs);
    Ok(obs
        .terms
        .iter()
        .zip(&e)
        .map(|((h, _), ei)| h * ei)
        .sum())
}

/// Shot-noise variance of per-term measurement: sum h_i^2 - <H_i>^2, using
/// that Pauli terms square to the identity.
pub fn observable_variance(circuit: &Circuit, obs: &Observable) -> Result<f64> {
    if circuit.n != obs.n {
        return Err(QemError::SizeMismatch(circuit.n, obs.n));
    }
    let x = propagate_all(circuit);
    let e = term_expectations(&x, obs);
    Ok(obs
        .terms
        .iter()
        .zip(&e)
        .map(|((h, _), ei)| h * h * (1.0 - ei * ei))
        .sum())
}

/// Outcome summary of a Monte-Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationReport {
    pub mean: f64,
    pub std_error: f64,
    /// Unbiased sample variance of the per-shot values.
    pub sample_variance: f64,
    pub shots: usize,
    /// Mean absolute weight product; constant per shot by construction.
    pub mean_abs_weight: f64,
    pub rng_seed: u64,
}

struct ShotContext<'a> {
    circuit: &'a Circuit,
    plans: &'a [SamplingPlan],
    basis: Option<&'a BasisSet>,
    obs: &'a Observable,
    seed: u64,
}

fn draw_index(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (k, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return k;
        }
    }
    probs.len() - 1
}

fn run_shot(ctx: &ShotContext<'_>, shot: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    rng.set_stream(shot);
    let mut x = all_zero_vector(ctx.circuit.n).x;
    let mut weight = 1.0;
    let mut plan_idx = 0;
    for e in &ctx.circuit.elements {
        x = e.channel().matrix() * x;
        if let Element::Mitigated(_) = e {
            let plan = &ctx.plans[plan_idx];
            plan_idx += 1;
            let k = draw_index(&mut rng, &plan.probs);
            let op = &ctx.basis.expect("basis required for plans").ops()[plan.candidates[k]];
            x = &op.ptm * x;
            weight *= plan.weights[k];
        }
    }
    let scale = ((1usize << ctx.circuit.n) as f64).sqrt();
    let mut value = 0.0;
    for (h, p) in &ctx.obs.terms {
        let e = (scale * x[p.index()]).clamp(-1.0, 1.0);
        let outcome = if rng.gen::<f64>() < (1.0 + e) / 2.0 {
            1.0
        } else {
            -1.0
        };
        value += h * outcome;
    }
    (weight * value, weight.abs())
}

fn summarize(values: Vec<(f64, f64)>, shots: usize, seed: u64) -> EstimationReport {
    let mean = values.iter().map(|v| v.0).sum::<f64>() / shots as f64;
    let var = if shots > 1 {
        values
            .iter()
            .map(|v| (v.0 - mean) * (v.0 - mean))
            .sum::<f64>()
            / (shots as f64 - 1.0)
    } else {
        0.0
    };
    let mean_abs_weight = values.iter().map(|v| v.1).sum::<f64>() / shots as f64;
    EstimationReport {
        mean,
        std_error: (var / shots as f64).sqrt(),
        sample_variance: var,
        shots,
        mean_abs_weight,
        rng_seed: seed,
    }
}

fn validate(circuit: &Circuit, plans: &[SamplingPlan], obs: &Observable, shots: usize) -> Result<()> {
    if circuit.n != obs.n {
        return Err(QemError::SizeMismatch(circuit.n, obs.n));
    }
    if shots == 0 {
        return Err(QemError::InvalidPlan("at least one shot required".into()));
    }
    let needed = circuit.mitigated_count();
    if plans.len() != needed {
        return Err(QemError::InvalidPlan(format!(
            "{} plans supplied for {} mitigated layers",
            plans.len(),
            needed
        )));
    }
    for plan in plans {
        let total: f64 = plan.probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(QemError::InvalidPlan(format!(
                "candidate probabilities sum to {total}"
            )));
        }
    }
    Ok(())
}

/// Monte-Carlo estimator of the noiseless expectation: each shot draws one
/// basis operation per mitigated layer and reweights its measurement by the
/// signed product of plan weights. Shots run in parallel when the `parallel`
/// feature is on; results are identical either way because every shot seeds
/// its own RNG stream from (seed, shot index).
pub fn run_qem_monte_carlo(
    circuit: &Circuit,
    plans: &[SamplingPlan],
    basis: Option<&BasisSet>,
    obs: &Observable,
    shots: usize,
    seed: u64,
) -> Result<EstimationReport> {
    validate(circuit, plans, obs, shots)?;
    if !plans.is_empty() && basis.is_none() {
        return Err(QemError::InvalidPlan(
            "sampling plans require the basis they index".into(),
        ));
    }
    let ctx = ShotContext {
        circuit,
        plans,
        basis,
        obs,
        seed,
    };
    let values = run_shots(&ctx, shots);
    Ok(summarize(values, shots, seed))
}

#[cfg(feature = "parallel")]
fn run_shots(ctx: &ShotContext<'_>, shots: usize) -> Vec<(f64, f64)> {
    use rayon::prelude::*;
    (0..shots as u64)
        .into_par_iter()
        .map(|s| run_shot(ctx, s))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_shots(ctx: &ShotContext<'_>, shots: usize) -> Vec<(f64, f64)> {
    run_shots_serial(ctx, shots)
}

fn run_shots_serial(ctx: &ShotContext<'_>, shots: usize) -> Vec<(f64, f64)> {
    (0..shots as u64).map(|s| run_shot(ctx, s)).collect()
}

/// Single-threaded variant of [`run_qem_monte_carlo`], bit-identical to the
/// parallel one; mainly useful for benchmarking the parallel speedup.
pub fn run_qem_monte_carlo_serial(
    circuit: &Circuit,
    plans: &[SamplingPlan],
    basis: Option<&BasisSet>,
    obs: &Observable,
    shots: usize,
    seed: u64,
) -> Result<EstimationReport> {
    validate(circuit, plans, obs, shots)?;
    if !plans.is_empty() && basis.is_none() {
        return Err(QemError::InvalidPlan(
            "sampling plans require the basis they index".into(),
        ));
    }
    let ctx = ShotContext {
        circuit,
        plans,
        basis,
        obs,
        seed,
    };
    let values = run_shots_serial(&ctx, shots);
    Ok(summarize(values, shots, seed))
}

/// Plain sampling of the circuit as-is (no mitigation), the baseline for
/// empirical overhead ratios.
pub fn run_plain_monte_carlo(
    circuit: &Circuit,
    obs: &Observable,
    shots: usize,
    seed: u64,
) -> Result<EstimationReport> {
    run_qem_monte_carlo(&circuit.ideal(), &[], None, obs, shots, seed)
}

/// Empirical overhead: variance amplification of the mitigated estimator
/// over the plain one, minus one.
pub fn empirical_sof(qem: &EstimationReport, plain: &EstimationReport) -> f64 {
    qem.sample_variance / plain.sample_variance - 1.0
}
