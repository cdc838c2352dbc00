//! The measure-and-select pipeline.
//!
//! A run holds the strategic state fixed, loads the prospect lattice,
//! measures each prospect operator against the strategic state (exactly, or
//! with `shots` Born-rule samples), and the analyzer picks the prospect with
//! the largest probability. The output is that prospect's state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::decision::{decompose, DecisionRecord, ProspectLattice};
use crate::error::{validation, Result};
use crate::hilbert::StrategicState;
use crate::prospects::ProspectState;
use crate::NORM_SLACK;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineConfig {
    /// Number of measurement samples; 0 means exact probabilities only.
    pub shots: u64,
    pub seed: u64,
    /// Include raw (unnormalized) factors in reports.
    pub report_raw: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MachineRun {
    pub config: MachineConfig,
    pub record: DecisionRecord,
    /// Per-prospect sample counts, present when `shots > 0`.
    pub counts: Option<Vec<u64>>,
    pub frequencies: Option<Vec<f64>>,
    /// Analyzer choice from exact probabilities.
    pub chosen: usize,
    /// Argmax of the sampled counts (lowest index on ties).
    pub empirical_choice: Option<usize>,
    pub output: ProspectState,
}

/// Multinomial sample of `shots` draws from `p`.
///
/// The generator is ChaCha8 seeded with [`SeedableRng::seed_from_u64`];
/// counts are drawn as successive conditional binomials in index order.
pub fn sample_counts(p: &[f64], shots: u64, seed: u64) -> Result<Vec<u64>> {
    if p.is_empty() {
        return Err(validation("empty probability vector"));
    }
    if shots == 0 {
        return Err(validation("shots must be at least 1"));
    }
    if let Some(k) = p.iter().position(|x| !x.is_finite() || *x < 0.0) {
        return Err(validation(format!("probability {k} is {}", p[k])));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > NORM_SLACK {
        return Err(validation(format!(
            "probabilities sum to {total}, expected 1"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; p.len()];
    let mut left = shots;
    let mut mass = total;
    // remainder goes to the last index with positive mass
    let last = p.iter().rposition(|&x| x > 0.0).expect("p sums to 1");
    for (j, &pj) in p.iter().enumerate() {
        if left == 0 {
            break;
        }
        if j == last {
            counts[j] = left;
            break;
        }
        let cond = if mass > 0.0 {
            (pj / mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let k = Binomial::new(left, cond)
            .expect("conditional probability is in [0, 1]")
            .sample(&mut rng);
        counts[j] = k;
        left -= k;
        mass -= pj;
    }
    Ok(counts)
}

/// Runs the pipeline: decompose, optionally sample, analyze, output.
pub fn run_pipeline(
    s: &StrategicState,
    lattice: &ProspectLattice,
    config: MachineConfig,
) -> Result<MachineRun> {
    let record = decompose(s, lattice)?;
    let chosen = record.optimal;

    let (counts, frequencies, empirical_choice) = if config.shots > 0 {
        let counts = sample_counts(&record.p, config.shots, config.seed)?;
        let freqs = counts
            .iter()
            .map(|&k| k as f64 / config.shots as f64)
            .collect();
        let best = counts
            .iter()
            .enumerate()
            .fold(0, |best, (j, &k)| if k > counts[best] { j } else { best });
        (Some(counts), Some(freqs), Some(best))
    } else {
        (None, None, None)
    };

    Ok(MachineRun {
        config,
        output: lattice.prospects()[chosen].clone(),
        record,
        counts,
        frequencies,
        chosen,
        empirical_choice,
    })
}
