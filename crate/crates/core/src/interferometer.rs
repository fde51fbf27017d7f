//! Idealized Mach-Zehnder interferometer with three mutually exclusive arrangements.
//!
//! The particle is a qubit in the path basis `{upper, lower}`. Arrangements:
//! - (a) phase shift `phi` on the upper arm, then the output beam splitter;
//! - (b) non-absorbing detectors in both arms, i.e. a path-basis measurement;
//! - (c) as (a) with phase `phi + pi/2`.
//!
//! Output index 0 is the upper detector. With the beam splitter
//! `(1/sqrt 2) [[1, i], [i, 1]]`, arrangement (a) at phase `phi` measures spin
//! along `phi - pi/2` in the x-y plane, (b) measures spin along z and (c)
//! measures spin along `phi`, with the upper path identified with `|z+>`.
//! So `mzi_propositions(phi)` equals `spin_triple(phi - pi/2)` basis by basis.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::linalg::{Complex, ComplexMatrix, ComplexVector, ONE};
use crate::measure::{information_bits, ProbabilityVector};
use crate::mub::{MeasurementBasis, MubSet};
use crate::report::fmt_csv;
use crate::states::{DensityMatrix, PureState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MziMode {
    /// Output ports behind the beam splitter with phase shift `phi`.
    OutputAtPhi,
    /// Which-path detection inside the interferometer.
    WhichPath,
    /// Output ports with phase shift `phi + pi/2`.
    OutputAtPhiPlusHalfPi,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MziArrangement {
    phase: f64,
    mode: MziMode,
}

impl MziArrangement {
    pub fn new(phase: f64, mode: MziMode) -> Result<Self> {
        if !phase.is_finite() {
            return Err(Error::OutOfRange {
                name: "phase",
                value: phase,
            });
        }
        Ok(Self { phase, mode })
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn mode(&self) -> MziMode {
        self.mode
    }

    /// Total phase applied to the upper arm, `None` for which-path detection.
    fn effective_phase(&self) -> Option<f64> {
        match self.mode {
            MziMode::OutputAtPhi => Some(self.phase),
            MziMode::WhichPath => None,
            MziMode::OutputAtPhiPlusHalfPi => Some(self.phase + FRAC_PI_2),
        }
    }
}

/// Path-basis state of the particle; may be mixed.
#[derive(Clone, Debug, PartialEq)]
pub struct MziState {
    rho: DensityMatrix,
}

impl MziState {
    pub fn from_pure(state: &PureState) -> Result<Self> {
        Self::from_density(state.to_density())
    }

    pub fn from_density(rho: DensityMatrix) -> Result<Self> {
        if rho.num_qubits() != 1 {
            return Err(Error::UnsupportedQubits(rho.num_qubits()));
        }
        Ok(Self { rho })
    }

    pub fn upper_path() -> Self {
        Self::from_pure(&PureState::new(ComplexVector::basis(2, 0)).expect("unit")).expect("1 qubit")
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.rho
    }

    /// `2 |rho_01|`, the fringe visibility this state produces.
    pub fn coherence_visibility(&self) -> f64 {
        2.0 * self.rho.get(0, 1).norm()
    }
}

/// Symmetric 50:50 beam splitter `(1/sqrt 2) [[1, i], [i, 1]]`.
pub fn beam_splitter() -> ComplexMatrix {
    let r = Complex::new(FRAC_1_SQRT_2, 0.0);
    let t = Complex::new(0.0, FRAC_1_SQRT_2);
    ComplexMatrix::new(2, 2, vec![r, t, t, r]).expect("2x2")
}

/// `diag(e^{i phi}, 1)`: phase shift on the upper arm.
pub fn phase_shifter(phi: f64) -> ComplexMatrix {
    ComplexMatrix::from_diag(&[Complex::from_polar(1.0, phi), ONE])
}

/// Beam splitter after phase shifter.
fn output_transfer(phi: f64) -> ComplexMatrix {
    beam_splitter()
        .matmul(&phase_shifter(phi))
        .expect("2x2 product")
}

/// The measurement basis an arrangement realizes on the path qubit.
pub fn arrangement_basis(arrangement: &MziArrangement) -> MeasurementBasis {
    match arrangement.effective_phase() {
        None => MeasurementBasis::new(
            "path",
            vec![ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)],
        )
        .expect("computational basis"),
        Some(phi) => {
            // outcome j projects onto (B S)^dagger |j>
            let back = output_transfer(phi).adjoint();
            let label = match arrangement.mode {
                MziMode::OutputAtPhi => "output@phi",
                _ => "output@phi+pi/2",
            };
            MeasurementBasis::new(label, vec![back.column(0), back.column(1)])
                .expect("unitary columns")
        }
    }
}

/// The three arrangements (a), (b), (c) at phase `phi` as a complete set.
pub fn mzi_propositions(phi: f64) -> MubSet {
    let bases = [
        MziMode::OutputAtPhi,
        MziMode::WhichPath,
        MziMode::OutputAtPhiPlusHalfPi,
    ]
    .into_iter()
    .map(|mode| arrangement_basis(&MziArrangement { phase: phi, mode }))
    .collect();
    MubSet::new(bases, vec![phi]).expect("three 2-dimensional bases")
}

/// Angle of the spin triple matching `mzi_propositions(phi)`.
pub fn spin_angle_for_phase(phi: f64) -> f64 {
    phi - FRAC_PI_2
}

/// The state that leaves arrangement (a) at phase `phi` through the upper port
/// with certainty.
pub fn deterministic_exit_state(phi: f64) -> MziState {
    let ket = output_transfer(phi).adjoint().column(0);
    MziState::from_pure(&PureState::new(ket).expect("unitary column")).expect("1 qubit")
}

/// Detector probabilities `(upper, lower)` for `state` in `arrangement`.
pub fn run_mzi(state: &MziState, arrangement: &MziArrangement) -> ProbabilityVector {
    let rho = match arrangement.effective_phase() {
        None => state.rho.clone(),
        Some(phi) => state
            .rho
            .evolve(&output_transfer(phi))
            .expect("2x2 unitary"),
    };
    ProbabilityVector::new(vec![rho.get(0, 0).re, rho.get(1, 1).re])
        .expect("diagonal of a density matrix")
}

/// One row of [`phi_sweep`]: upper-detector probabilities and information for
/// arrangements (a), (b), (c) at phase `phi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MziRow {
    pub phi: f64,
    pub p_upper: [f64; 3],
    pub info: [f64; 3],
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MziSweep {
    pub rows: Vec<MziRow>,
}

impl MziSweep {
    /// Fringe visibility of arrangement (a): amplitude of the first harmonic of
    /// `p_upper_a(phi)` over its mean, exact for a sinusoid sampled at three or
    /// more evenly spaced phases. `None` for fewer samples.
    pub fn visibility(&self) -> Option<f64> {
        let n = self.rows.len();
        if n < 3 {
            return None;
        }
        let (mut mean, mut c, mut s) = (0.0, 0.0, 0.0);
        for row in &self.rows {
            mean += row.p_upper[0];
            c += row.p_upper[0] * row.phi.cos();
            s += row.p_upper[0] * row.phi.sin();
        }
        let nf = n as f64;
        mean /= nf;
        let amplitude = (2.0 / nf) * c.hypot(s);
        Some(amplitude / mean)
    }

    /// Largest spread of the total over the rows.
    pub fn total_spread(&self) -> f64 {
        let (lo, hi) = self
            .rows
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(r.total), hi.max(r.total))
            });
        if self.rows.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    pub fn write_csv(&self, w: &mut impl Write, seed: Option<u64>) -> io::Result<()> {
        writeln!(
            w,
            "# mzi samples={} seed={} visibility={} total_spread={}",
            self.rows.len(),
            seed.map_or("-".to_string(), |s| s.to_string()),
            self.visibility().map_or("-".to_string(), fmt_csv),
            fmt_csv(self.total_spread())
        )?;
        writeln!(w, "phi,p_upper_a,p_upper_b,p_upper_c,I_a,I_b,I_c,I_total")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                fmt_csv(r.phi),
                fmt_csv(r.p_upper[0]),
                fmt_csv(r.p_upper[1]),
                fmt_csv(r.p_upper[2]),
                fmt_csv(r.info[0]),
                fmt_csv(r.info[1]),
                fmt_csv(r.info[2]),
                fmt_csv(r.total)
            )?;
        }
        Ok(())
    }
}

/// Runs all three arrangements at `samples` evenly spaced phases in `[0, 2 pi)`.
pub fn phi_sweep(state: &MziState, samples: usize) -> Result<MziSweep> {
    if samples < 2 {
        return Err(Error::OutOfRange {
            name: "samples",
            value: samples as f64,
        });
    }
    let rows = (0..samples)
        .map(|i| {
            let phi = TAU * i as f64 / samples as f64;
            let mut p_upper = [0.0; 3];
            let mut info = [0.0; 3];
            for (slot, mode) in [
                MziMode::OutputAtPhi,
                MziMode::WhichPath,
                MziMode::OutputAtPhiPlusHalfPi,
            ]
            .into_iter()
            .enumerate()
            {
                let p = run_mzi(state, &MziArrangement { phase: phi, mode });
                p_upper[slot] = p.get(0);
                info[slot] = information_bits(&p);
            }
            MziRow {
                phi,
                p_upper,
                info,
                total: info.iter().sum(),
            }
        })
        .collect();
    Ok(MziSweep { rows })
}
