//! Total information over a complete complementary set and its verification.
//!
//! Summing the single-measurement information over all `2^k + 1` bases of a
//! complete set depends on the state only through its purity:
//!
//! ```text
//! I_total = k (2^k Tr rho^2 - 1) / (2^k - 1)
//! ```
//!
//! which is `2 Tr rho^2 - 1` for one qubit and `(2/3)(4 Tr rho^2 - 1)` for two.
//! The routines here compute the sum directly, compare it to that closed form,
//! and check that it survives rotations of the basis set and unitary evolution.

use std::f64::consts::TAU;
use std::io::{self, Write};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, TOL};
use crate::measure::{information, measurement_probabilities, InformationMeasureConfig};
use crate::mub::{pauli_partition_mubs, rotate_set, spin_triple, two_qubit_set, validate_mub, MubSet};
use crate::report::{fmt_csv, fmt_phis};
use crate::states::{derive_seed, random_mixture, random_unitary_with, rng_from_seed, DensityMatrix};

/// Per-basis and total information of one state over one complementary set.
#[derive(Clone, Debug, PartialEq)]
pub struct InformationReport {
    pub num_qubits: usize,
    pub phi_params: Vec<f64>,
    /// `(basis label, I_j in bits)` in set order.
    pub per_basis: Vec<(String, f64)>,
    pub total_sum: f64,
    pub closed_form: f64,
    pub purity: f64,
    /// Present for two-qubit states only.
    pub distribution: Option<InformationDistribution>,
}

impl InformationReport {
    pub fn deviation(&self) -> f64 {
        (self.total_sum - self.closed_form).abs()
    }

    /// Human-readable summary, six decimals.
    pub fn write_human(&self, w: &mut impl Write) -> io::Result<()> {
        let width = self
            .per_basis
            .iter()
            .map(|(label, _)| label.len() + 4)
            .max()
            .unwrap_or(0)
            .max(12);
        writeln!(w, "{:<width$} {}", "qubits", self.num_qubits)?;
        if !self.phi_params.is_empty() {
            let phis: Vec<String> = self.phi_params.iter().map(|p| format!("{p:.6}")).collect();
            writeln!(w, "{:<width$} {}", "phi", phis.join(", "))?;
        }
        writeln!(w, "{:<width$} {:.6}", "purity", self.purity)?;
        for (label, bits) in &self.per_basis {
            writeln!(w, "{:<width$} {bits:.6} bits", format!("I[{label}]"))?;
        }
        writeln!(w, "{:<width$} {:.6} bits", "total", self.total_sum)?;
        writeln!(w, "{:<width$} {:.6} bits", "closed form", self.closed_form)?;
        writeln!(w, "{:<width$} {:.3e}", "deviation", self.deviation())?;
        if let Some(d) = &self.distribution {
            writeln!(
                w,
                "{:<width$} {:.6} {:.6} bits",
                "individual", d.individual[0], d.individual[1]
            )?;
            writeln!(w, "{:<width$} {:.6} bits", "joint", d.joint)?;
        }
        Ok(())
    }

    /// One row per basis: `basis_label,I_j_bits,total_bits,closed_form_bits,deviation`.
    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(
            w,
            "# info k={} phi={} purity={}",
            self.num_qubits,
            fmt_phis(&self.phi_params),
            fmt_csv(self.purity)
        )?;
        if let Some(d) = &self.distribution {
            writeln!(
                w,
                "# individual_1={} individual_2={} joint={}",
                fmt_csv(d.individual[0]),
                fmt_csv(d.individual[1]),
                fmt_csv(d.joint)
            )?;
        }
        writeln!(w, "basis_label,I_j_bits,total_bits,closed_form_bits,deviation")?;
        for (label, bits) in &self.per_basis {
            writeln!(
                w,
                "{label},{},{},{},{}",
                fmt_csv(*bits),
                fmt_csv(self.total_sum),
                fmt_csv(self.closed_form),
                fmt_csv(self.deviation())
            )?;
        }
        Ok(())
    }
}

/// `k (2^k Tr rho^2 - 1) / (2^k - 1)`.
pub fn closed_form_total(rho: &DensityMatrix) -> f64 {
    closed_form_from_purity(rho.num_qubits(), rho.purity())
}

pub fn closed_form_from_purity(num_qubits: usize, purity: f64) -> f64 {
    let n = (1u64 << num_qubits) as f64;
    num_qubits as f64 * (n * purity - 1.0) / (n - 1.0)
}

/// Per-basis information values for `rho` over `set`, without validating the set.
fn per_basis_bits(rho: &DensityMatrix, set: &MubSet) -> Result<Vec<(String, f64)>> {
    if rho.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: rho.dim(),
        });
    }
    let cfg = InformationMeasureConfig::new(set.num_qubits())?;
    set.bases()
        .iter()
        .map(|b| {
            let p = measurement_probabilities(rho, b)?;
            Ok((b.label().to_string(), information(&p, &cfg)?))
        })
        .collect()
}

fn ensure_valid(set: &MubSet) -> Result<()> {
    let v = validate_mub(set);
    if !v.passed() {
        return Err(Error::InvalidMubSet(format!(
            "orthonormality violation {:e}, unbiasedness violation {:e}",
            v.max_orthonormality_violation, v.max_unbiasedness_violation
        )));
    }
    Ok(())
}

/// Sum of the information measure over every basis of `set`, next to the closed form.
pub fn total_information(rho: &DensityMatrix, set: &MubSet) -> Result<InformationReport> {
    if rho.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: rho.dim(),
        });
    }
    ensure_valid(set)?;
    let per_basis = per_basis_bits(rho, set)?;
    let total_sum = per_basis.iter().map(|(_, b)| b).sum();
    let distribution = if rho.num_qubits() == 2 {
        Some(information_distribution(rho)?)
    } else {
        None
    };
    Ok(InformationReport {
        num_qubits: rho.num_qubits(),
        phi_params: set.phi_params().to_vec(),
        per_basis,
        total_sum,
        closed_form: closed_form_total(rho),
        purity: rho.purity(),
        distribution,
    })
}

/// The default complete set for `k` qubits with the given angles:
/// the spin triple (k = 1), the five proposition pairs (k = 2), or the Pauli
/// partition (k = 3, angles ignored).
pub fn reference_set(num_qubits: usize, phis: &[f64]) -> Result<MubSet> {
    let phi = |i: usize| phis.get(i).copied().unwrap_or(0.0);
    match num_qubits {
        1 => Ok(spin_triple(phi(0))),
        2 => Ok(two_qubit_set(phi(0), phi(1))),
        3 => pauli_partition_mubs(3),
        k => Err(Error::UnsupportedQubits(k)),
    }
}

/// How the total splits between the two qubits and their joint properties.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InformationDistribution {
    /// Single-qubit invariant of each reduced state.
    pub individual: [f64; 2],
    /// `total - individual[0] - individual[1]`.
    pub joint: f64,
    pub total: f64,
}

/// Individual and joint information of a two-qubit state.
///
/// `individual[i]` is the one-qubit total of the reduced state of qubit `i + 1`
/// and `joint` is what remains of the two-qubit total. The residual is snapped
/// to zero inside `(-1e-9, 0)`. It can be genuinely negative for mixed
/// states: `|z+><z+| (x) I/2` has total 2/3 but one full bit on qubit 1.
pub fn information_distribution(rho: &DensityMatrix) -> Result<InformationDistribution> {
    if rho.num_qubits() != 2 {
        return Err(Error::UnsupportedQubits(rho.num_qubits()));
    }
    let total = closed_form_total(rho);
    let individual = [
        closed_form_total(&rho.partial_trace(1)?),
        closed_form_total(&rho.partial_trace(2)?),
    ];
    let mut joint = total - individual[0] - individual[1];
    if joint < 0.0 && joint > -TOL {
        joint = 0.0;
    }
    Ok(InformationDistribution {
        individual,
        joint,
        total,
    })
}

/// Empirical check of `individual_1 + individual_2 <= total` over random states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSurvey {
    pub samples: usize,
    pub violations: usize,
    pub min_joint: f64,
}

/// Surveys random rank-`rank` two-qubit mixtures (rank 1 gives pure states).
pub fn survey_individual_bound(samples: usize, rank: usize, seed: u64) -> Result<BoundSurvey> {
    let mut violations = 0;
    let mut min_joint = f64::INFINITY;
    for i in 0..samples {
        let rho = random_mixture(2, rank, derive_seed(seed, i as u64))?;
        let d = information_distribution(&rho)?;
        if d.joint < 0.0 {
            violations += 1;
        }
        min_joint = min_joint.min(d.joint);
    }
    Ok(BoundSurvey {
        samples,
        violations,
        min_joint,
    })
}

/// One trial of an invariance sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTrial {
    pub trial: usize,
    /// Seed the trial's angles and rotation were drawn from; `None` for
    /// caller-supplied rotations.
    pub sub_seed: Option<u64>,
    pub phi_params: Vec<f64>,
    pub per_basis: Vec<(String, f64)>,
    pub total: f64,
    pub deviation: f64,
}

/// Result of [`invariance_sweep`] or [`rotation_sweep`].
#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub num_qubits: usize,
    pub seed: Option<u64>,
    pub closed_form: f64,
    pub trials: Vec<SweepTrial>,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.max_deviation < self.tolerance
    }

    /// Re-evaluates the verdict at another tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// CSV with columns
    /// `trial,phi_or_seed,basis_label,I_j_bits,total_bits,closed_form_bits,deviation`,
    /// one row per trial and basis, preceded by a `#` line echoing the seed.
    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(
            w,
            "# invariance k={} trials={} seed={} closed_form={} max_deviation={} tol={:e}",
            self.num_qubits,
            self.trials.len(),
            self.seed.map_or("-".to_string(), |s| s.to_string()),
            fmt_csv(self.closed_form),
            fmt_csv(self.max_deviation),
            self.tolerance
        )?;
        writeln!(
            w,
            "trial,phi_or_seed,basis_label,I_j_bits,total_bits,closed_form_bits,deviation"
        )?;
        for t in &self.trials {
            let tag = t.sub_seed.map_or("-".to_string(), |s| s.to_string());
            for (label, bits) in &t.per_basis {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    t.trial,
                    tag,
                    label,
                    fmt_csv(*bits),
                    fmt_csv(t.total),
                    fmt_csv(self.closed_form),
                    fmt_csv(t.deviation)
                )?;
            }
        }
        Ok(())
    }
}

/// Per-basis bits, total and deviation for one rotated set.
type TrialOutcome = (Vec<(String, f64)>, f64, f64);

fn sweep_trial(
    rho: &DensityMatrix,
    set: &MubSet,
    u: &ComplexMatrix,
    closed_form: f64,
) -> Result<TrialOutcome> {
    let rotated = rotate_set(set, u)?;
    ensure_valid(&rotated)?;
    let per_basis = per_basis_bits(rho, &rotated)?;
    let total: f64 = per_basis.iter().map(|(_, b)| b).sum();
    Ok((per_basis, total, (total - closed_form).abs()))
}

/// Rotates the reference set of `rho`'s qubit count by `trials` seeded random
/// unitaries (re-drawing the angles too for one and two qubits) and reports
/// the largest deviation of the total from the closed form.
///
/// Trial `t` draws everything from `derive_seed(seed, t)`, so the report does
/// not depend on the order trials are evaluated in.
pub fn invariance_sweep(rho: &DensityMatrix, trials: usize, seed: u64) -> Result<SweepReport> {
    if trials == 0 {
        return Err(Error::OutOfRange {
            name: "trials",
            value: 0.0,
        });
    }
    let k = rho.num_qubits();
    let closed_form = closed_form_total(rho);
    let mut out = Vec::with_capacity(trials);
    for trial in 0..trials {
        let sub_seed = derive_seed(seed, trial as u64);
        let mut rng = rng_from_seed(sub_seed);
        let phis: Vec<f64> = match k {
            1 => vec![rng.random_range(0.0..TAU)],
            2 => vec![rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)],
            _ => Vec::new(),
        };
        let set = reference_set(k, &phis)?;
        let u = random_unitary_with(rho.dim(), &mut rng)?;
        let (per_basis, total, deviation) = sweep_trial(rho, &set, &u, closed_form)?;
        out.push(SweepTrial {
            trial,
            sub_seed: Some(sub_seed),
            phi_params: phis,
            per_basis,
            total,
            deviation,
        });
    }
    Ok(finish_sweep(k, Some(seed), closed_form, out))
}

/// Like [`invariance_sweep`] but with a fixed set and caller-supplied rotations.
pub fn rotation_sweep(
    rho: &DensityMatrix,
    set: &MubSet,
    unitaries: &[ComplexMatrix],
) -> Result<SweepReport> {
    let closed_form = closed_form_total(rho);
    let mut out = Vec::with_capacity(unitaries.len());
    for (trial, u) in unitaries.iter().enumerate() {
        let (per_basis, total, deviation) = sweep_trial(rho, set, u, closed_form)?;
        out.push(SweepTrial {
            trial,
            sub_seed: None,
            phi_params: set.phi_params().to_vec(),
            per_basis,
            total,
            deviation,
        });
    }
    Ok(finish_sweep(rho.num_qubits(), None, closed_form, out))
}

fn finish_sweep(
    num_qubits: usize,
    seed: Option<u64>,
    closed_form: f64,
    trials: Vec<SweepTrial>,
) -> SweepReport {
    let max_deviation = trials.iter().map(|t| t.deviation).fold(0.0, f64::max);
    SweepReport {
        num_qubits,
        seed,
        closed_form,
        trials,
        max_deviation,
        tolerance: TOL,
    }
}

/// Total information after each step of a piecewise-constant unitary evolution.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservationReport {
    pub seed: Option<u64>,
    /// Entry 0 is the initial state; entry `i` follows the `i`-th unitary.
    pub totals: Vec<f64>,
    pub purities: Vec<f64>,
    pub max_drift: f64,
    pub tolerance: f64,
}

impl ConservationReport {
    pub fn passed(&self) -> bool {
        self.max_drift < self.tolerance
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(
            w,
            "# conservation steps={} seed={} max_drift={} tol={:e}",
            self.totals.len().saturating_sub(1),
            self.seed.map_or("-".to_string(), |s| s.to_string()),
            fmt_csv(self.max_drift),
            self.tolerance
        )?;
        writeln!(w, "step,total_bits,purity,drift")?;
        let start = self.totals.first().copied().unwrap_or(0.0);
        for (i, (t, p)) in self.totals.iter().zip(&self.purities).enumerate() {
            writeln!(
                w,
                "{i},{},{},{}",
                fmt_csv(*t),
                fmt_csv(*p),
                fmt_csv((t - start).abs())
            )?;
        }
        Ok(())
    }
}

/// Evolves `rho` through `unitaries` in order, recomputing the total over `set`
/// after every step. Every matrix is checked for unitarity before anything runs.
pub fn conservation_check(
    rho: &DensityMatrix,
    unitaries: &[ComplexMatrix],
    set: &MubSet,
) -> Result<ConservationReport> {
    ensure_valid(set)?;
    for u in unitaries {
        if u.rows() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: u.rows(),
            });
        }
        u.check_unitary()?;
    }
    let total_of = |r: &DensityMatrix| -> Result<f64> {
        Ok(per_basis_bits(r, set)?.iter().map(|(_, b)| b).sum())
    };
    let mut state = rho.clone();
    let mut totals = vec![total_of(&state)?];
    let mut purities = vec![state.purity()];
    for u in unitaries {
        state = state.evolve(u)?;
        totals.push(total_of(&state)?);
        purities.push(state.purity());
    }
    let max_drift = totals
        .iter()
        .map(|t| (t - totals[0]).abs())
        .fold(0.0, f64::max);
    Ok(ConservationReport {
        seed: None,
        totals,
        purities,
        max_drift,
        tolerance: TOL,
    })
}

/// [`conservation_check`] over `steps` seeded random unitaries and the reference set.
pub fn seeded_conservation_check(
    rho: &DensityMatrix,
    steps: usize,
    seed: u64,
) -> Result<ConservationReport> {
    let unitaries = (0..steps)
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(seed, i as u64));
            random_unitary_with(rho.dim(), &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let set = reference_set(rho.num_qubits(), &[])?;
    let mut report = conservation_check(rho, &unitaries, &set)?;
    report.seed = Some(seed);
    Ok(report)
}

/// One row of [`mixing_scaling_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixingRow {
    pub lambda: f64,
    /// Closed form of `mix(rho, lambda)`.
    pub mixed_closed_form: f64,
    /// `lambda^2 * closed_form_total(rho)`.
    pub scaled: f64,
    /// Direct sum over the reference set for `mix(rho, lambda)`.
    pub direct_sum: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixingReport {
    pub rows: Vec<MixingRow>,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl MixingReport {
    pub fn passed(&self) -> bool {
        self.max_deviation < self.tolerance
    }
}

/// Checks that white-noise mixing scales the total by `lambda^2`, both through
/// the closed form and through the direct per-basis sum.
pub fn mixing_scaling_check(rho: &DensityMatrix, lambdas: &[f64]) -> Result<MixingReport> {
    let set = reference_set(rho.num_qubits(), &[])?;
    let base = closed_form_total(rho);
    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mixed = rho.mix(lambda)?;
        let mixed_closed_form = closed_form_total(&mixed);
        let direct_sum: f64 = per_basis_bits(&mixed, &set)?.iter().map(|(_, b)| b).sum();
        let scaled = lambda * lambda * base;
        let deviation = (mixed_closed_form - scaled)
            .abs()
            .max((direct_sum - scaled).abs());
        rows.push(MixingRow {
            lambda,
            mixed_closed_form,
            scaled,
            direct_sum,
            deviation,
        });
    }
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(MixingReport {
        rows,
        max_deviation,
        tolerance: TOL,
    })
}
