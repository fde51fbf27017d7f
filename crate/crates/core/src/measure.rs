//! Information carried by a single measurement with `n = 2^k` outcomes.
//!
//! With outcome probabilities `p`, the uncertainty in the count of outcome `j`
//! over `N` future trials is `p_j (1 - p_j) N`. Per trial that is
//! `U(p_j) = p_j (1 - p_j)`, and summed over outcomes `U(p) = 1 - sum p_j^2`.
//! The normalized information is `I(p) = N_k * sum (p_i - 1/n)^2` with
//! `N_k = 2^k k / (2^k - 1)`: `k` bits for a deterministic outcome, 0 for the
//! uniform distribution.

use crate::error::{Error, Result};
use crate::linalg::TOL;
use crate::mub::MeasurementBasis;
use crate::states::DensityMatrix;

/// Outcome distribution of one measurement. The outcome count is always a
/// power of two.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    bits: usize,
    p: Vec<f64>,
}

impl ProbabilityVector {
    /// Entries in `[-1e-9, 0)` are clamped to zero and the vector renormalized
    /// when its sum is within 1e-9 of one. Anything else is rejected.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        let n = p.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidProbabilities(format!(
                "outcome count {n} is not a power of two >= 2"
            )));
        }
        let mut p = p;
        for (i, x) in p.iter_mut().enumerate() {
            if !x.is_finite() || *x < -TOL || *x > 1.0 + TOL {
                return Err(Error::InvalidProbabilities(format!(
                    "p[{i}] = {x} outside [0, 1]"
                )));
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > TOL {
            return Err(Error::InvalidProbabilities(format!(
                "probabilities sum to {sum}"
            )));
        }
        if sum != 1.0 {
            p.iter_mut().for_each(|x| *x /= sum);
        }
        Ok(Self {
            bits: n.trailing_zeros() as usize,
            p,
        })
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `k` with `len() == 2^k`.
    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, i: usize) -> f64 {
        self.p[i]
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.p.iter().map(|x| x * x).sum()
    }
}

/// Normalization for a measure with `2^k` outcomes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InformationMeasureConfig {
    k: usize,
    normalization: f64,
}

impl InformationMeasureConfig {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 || k > 16 {
            return Err(Error::UnsupportedQubits(k));
        }
        let n = (1u64 << k) as f64;
        Ok(Self {
            k,
            normalization: n * k as f64 / (n - 1.0),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn outcomes(&self) -> usize {
        1 << self.k
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "probability",
            value: p,
        });
    }
    Ok(())
}

/// Mean-square deviation `p (1 - p) N` of the number of occurrences of an
/// outcome with probability `p` over `trials` repetitions.
pub fn trial_uncertainty(p: f64, trials: u64) -> Result<f64> {
    check_probability(p)?;
    if trials == 0 {
        return Err(Error::OutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    Ok(p * (1.0 - p) * trials as f64)
}

/// One-sigma (~68%) interval `(pN - sigma, pN + sigma)` for the outcome count.
pub fn confidence_interval(p: f64, trials: u64) -> Result<(f64, f64)> {
    let sigma = trial_uncertainty(p, trials)?.sqrt();
    let mean = p * trials as f64;
    Ok((mean - sigma, mean + sigma))
}

/// Per-trial lack of information about outcome `j`: `p_j (1 - p_j)`.
pub fn outcome_lack_of_information(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(p * (1.0 - p))
}

/// Total per-trial lack of information `1 - sum p_j^2`.
pub fn lack_of_information(p: &ProbabilityVector) -> f64 {
    1.0 - p.sum_of_squares()
}

/// Normalized information `N_k * sum (p_i - 1/n)^2`, in bits.
pub fn information(p: &ProbabilityVector, cfg: &InformationMeasureConfig) -> Result<f64> {
    if p.len() != cfg.outcomes() {
        return Err(Error::DimensionMismatch {
            expected: cfg.outcomes(),
            found: p.len(),
        });
    }
    let uniform = 1.0 / p.len() as f64;
    let spread: f64 = p.as_slice().iter().map(|x| (x - uniform).powi(2)).sum();
    Ok(cfg.normalization() * spread)
}

/// [`information`] with the configuration implied by the outcome count.
pub fn information_bits(p: &ProbabilityVector) -> f64 {
    let cfg = InformationMeasureConfig::new(p.bits()).expect("bits >= 1");
    information(p, &cfg).expect("matching size")
}

/// Shannon entropy in bits, with `0 log 0 = 0`. Kept as a numerical comparator.
pub fn shannon_bits(p: &ProbabilityVector) -> f64 {
    let h: f64 = p
        .as_slice()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum();
    // -0.0 for deterministic vectors
    h.max(0.0)
}

/// Born-rule probabilities `Re <b_i|rho|b_i>` of `rho` in `basis`.
pub fn measurement_probabilities(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<ProbabilityVector> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: rho.dim(),
        });
    }
    let p = basis
        .vectors()
        .iter()
        .map(|b| rho.expectation(b))
        .collect::<Result<Vec<f64>>>()?;
    ProbabilityVector::new(p)
}
