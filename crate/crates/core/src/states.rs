//! Pure states, density matrices and the named states used throughout the crate.
//!
//! Conventions:
//! - spin up along the direction `phi` in the x-y plane is `(|z+> + e^{i phi}|z->)/sqrt(2)`,
//!   spin down is `(|z+> - e^{i phi}|z->)/sqrt(2)`;
//! - in a tensor product, qubit 1 is the leftmost (most significant) factor;
//! - `|z+>` is the computational state `|0>`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{Complex, ComplexMatrix, ComplexVector, ONE, TOL, ZERO};

/// Largest register handled anywhere in the crate.
pub const MAX_QUBITS: usize = 4;

/// Returns `k` when `dim == 2^k` with `1 <= k <= MAX_QUBITS`.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::UnsupportedDimension(dim));
    }
    let k = dim.trailing_zeros() as usize;
    if k > MAX_QUBITS {
        return Err(Error::UnsupportedQubits(k));
    }
    Ok(k)
}

/// Spin up along `phi` in the x-y plane.
pub fn spin_up(phi: f64) -> ComplexVector {
    ComplexVector::from_vec_unchecked(vec![
        Complex::new(FRAC_1_SQRT_2, 0.0),
        Complex::from_polar(FRAC_1_SQRT_2, phi),
    ])
}

/// Spin down along `phi` in the x-y plane.
pub fn spin_down(phi: f64) -> ComplexVector {
    ComplexVector::from_vec_unchecked(vec![
        Complex::new(FRAC_1_SQRT_2, 0.0),
        -Complex::from_polar(FRAC_1_SQRT_2, phi),
    ])
}

/// The spin observable `cos(phi) X + sin(phi) Y`.
pub fn spin_along(phi: f64) -> ComplexMatrix {
    let e = Complex::from_polar(1.0, phi);
    ComplexMatrix::new(2, 2, vec![ZERO, e.conj(), e, ZERO]).expect("2x2 spin observable")
}

/// A normalized k-qubit ket.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    ket: ComplexVector,
}

impl PureState {
    pub fn new(ket: ComplexVector) -> Result<Self> {
        let num_qubits = qubits_for_dim(ket.dim())?;
        let n2 = ket.norm_sqr();
        if (n2 - 1.0).abs() > TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { num_qubits, ket })
    }

    /// Normalizes `ket` first; fails only for the zero vector or a bad dimension.
    pub fn from_unnormalized(ket: ComplexVector) -> Result<Self> {
        let ket = ket.normalized().ok_or(Error::NotNormalized(0.0))?;
        Self::new(ket)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ket(&self) -> &ComplexVector {
        &self.ket
    }

    pub fn dim(&self) -> usize {
        self.ket.dim()
    }

    /// `|<self|other>|^2`; the phase-insensitive equality test for pure states.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.ket.inner(&other.ket)?.norm_sqr())
    }

    /// Tensor product with `self` as the more significant factor.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::new(self.ket.kron(&other.ket))
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            num_qubits: self.num_qubits,
            mat: self.ket.outer(&self.ket),
        }
    }
}

/// `|psi><psi|`.
pub fn pure_to_density(state: &PureState) -> DensityMatrix {
    state.to_density()
}

/// The states that can be requested by name.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NamedState {
    ZUp,
    ZDown,
    /// Spin up along `phi` in the x-y plane.
    XUp(f64),
    XDown(f64),
    /// Spin up along `phi + pi/2` in the x-y plane.
    YUp(f64),
    YDown(f64),
    /// `|z-> (x) |z+>`.
    ProductZDownZUp,
    /// The maximally entangled two-qubit state that is the "same"/"different"
    /// (true, false) outcome of the correlation basis built from
    /// `Z (x) S(phi2)` and `S(phi1) (x) S(phi2 + pi/2)`.
    Bell { phi1: f64, phi2: f64 },
    Ghz(usize),
}

impl NamedState {
    /// Parses a name plus its parameter list. Angles are in radians; `ghz` takes
    /// the qubit count as its single parameter.
    pub fn parse(name: &str, params: &[f64]) -> Result<Self> {
        let expect = |n: usize| -> Result<()> {
            if params.len() != n {
                return Err(Error::ParamCount {
                    name: name.to_string(),
                    expected: n,
                    found: params.len(),
                });
            }
            Ok(())
        };
        let state = match name {
            "z+" => {
                expect(0)?;
                Self::ZUp
            }
            "z-" | "z\u{2212}" => {
                expect(0)?;
                Self::ZDown
            }
            "x+" => {
                expect(1)?;
                Self::XUp(params[0])
            }
            "x-" | "x\u{2212}" => {
                expect(1)?;
                Self::XDown(params[0])
            }
            "y+" => {
                expect(1)?;
                Self::YUp(params[0])
            }
            "y-" | "y\u{2212}" => {
                expect(1)?;
                Self::YDown(params[0])
            }
            "prod" => {
                expect(0)?;
                Self::ProductZDownZUp
            }
            "bell" => {
                expect(2)?;
                Self::Bell {
                    phi1: params[0],
                    phi2: params[1],
                }
            }
            "ghz" => {
                expect(1)?;
                let k = params[0];
                if k.fract() != 0.0 || k < 1.0 || k > MAX_QUBITS as f64 {
                    return Err(Error::OutOfRange {
                        name: "ghz qubit count",
                        value: k,
                    });
                }
                Self::Ghz(k as usize)
            }
            other => return Err(Error::UnknownState(other.to_string())),
        };
        Ok(state)
    }

    pub fn state(&self) -> PureState {
        let ket = match *self {
            Self::ZUp => ComplexVector::basis(2, 0),
            Self::ZDown => ComplexVector::basis(2, 1),
            Self::XUp(phi) => spin_up(phi),
            Self::XDown(phi) => spin_down(phi),
            Self::YUp(phi) => spin_up(phi + FRAC_PI_2),
            Self::YDown(phi) => spin_down(phi + FRAC_PI_2),
            Self::ProductZDownZUp => ComplexVector::basis(2, 1).kron(&ComplexVector::basis(2, 0)),
            Self::Bell { phi1, phi2 } => {
                // Relative phase -i e^{-i phi1} makes this the joint eigenvector
                // with Z (x) S(phi2) = +1 and S(phi1) (x) S(phi2 + pi/2) = -1.
                let first = ComplexVector::basis(2, 0)
                    .kron(&spin_up(phi2))
                    .scale(Complex::from_polar(FRAC_1_SQRT_2, -FRAC_PI_2 - phi1));
                let second = ComplexVector::basis(2, 1)
                    .kron(&spin_down(phi2))
                    .scale(Complex::new(FRAC_1_SQRT_2, 0.0));
                first.add(&second).expect("equal dimensions")
            }
            Self::Ghz(k) => {
                let dim = 1 << k;
                let mut entries = vec![ZERO; dim];
                entries[0] = Complex::new(FRAC_1_SQRT_2, 0.0);
                entries[dim - 1] = Complex::new(FRAC_1_SQRT_2, 0.0);
                if k == 1 {
                    // GHZ on one qubit degenerates to |x+>.
                    entries = spin_up(0.0).entries().to_vec();
                }
                ComplexVector::from_vec_unchecked(entries)
            }
        };
        PureState::new(ket).expect("named states are normalized")
    }
}

/// Looks up a named state; see [`NamedState::parse`] for the accepted names.
pub fn named_state(name: &str, params: &[f64]) -> Result<PureState> {
    Ok(NamedState::parse(name, params)?.state())
}

/// A k-qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity (all at [`TOL`]).
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let num_qubits = qubits_for_dim(mat.rows())?;
        let herm = mat.hermiticity_defect();
        if herm > TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (max |rho - rho^dagger| = {herm:e})"
            )));
        }
        let tr = mat.trace()?;
        if (tr - ONE).norm() > TOL {
            return Err(Error::InvalidDensity(format!(
                "trace is {} {:+}i, expected 1",
                tr.re, tr.im
            )));
        }
        if !is_positive_semidefinite(&mat, TOL) {
            return Err(Error::InvalidDensity(
                "not positive semidefinite".to_string(),
            ));
        }
        Ok(Self { num_qubits, mat })
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::UnsupportedQubits(num_qubits));
        }
        let dim = 1 << num_qubits;
        Ok(Self {
            num_qubits,
            mat: ComplexMatrix::identity(dim).scale(Complex::new(1.0 / dim as f64, 0.0)),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.mat.get(i, j)
    }

    /// `Re <v|rho|v>`.
    pub fn expectation(&self, v: &ComplexVector) -> Result<f64> {
        Ok(v.inner(&self.mat.apply(v)?)?.re)
    }

    /// `Tr rho^2`, snapped onto `[1/2^k, 1]` when within [`TOL`] outside it.
    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
        let p: f64 = self.mat.entries().iter().map(|z| z.norm_sqr()).sum();
        let lo = 1.0 / self.dim() as f64;
        if p > 1.0 && p <= 1.0 + TOL {
            1.0
        } else if p < lo && p >= lo - TOL {
            lo
        } else {
            p
        }
    }

    /// Reduced single-qubit state of a two-qubit system. `keep` is 1 or 2.
    pub fn partial_trace(&self, keep: usize) -> Result<DensityMatrix> {
        if self.num_qubits != 2 {
            return Err(Error::UnsupportedQubits(self.num_qubits));
        }
        if keep != 1 && keep != 2 {
            return Err(Error::OutOfRange {
                name: "kept subsystem",
                value: keep as f64,
            });
        }
        let mut out = ComplexMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = ZERO;
                for t in 0..2 {
                    let (i, j) = if keep == 1 {
                        (2 * a + t, 2 * b + t)
                    } else {
                        (2 * t + a, 2 * t + b)
                    };
                    acc += self.mat.get(i, j);
                }
                out.set(a, b, acc);
            }
        }
        Ok(DensityMatrix {
            num_qubits: 1,
            mat: out,
        })
    }

    /// `lambda rho + (1 - lambda) I / 2^k`.
    pub fn mix(&self, lambda: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
            });
        }
        let dim = self.dim();
        let noise = ComplexMatrix::identity(dim).scale(Complex::new((1.0 - lambda) / dim as f64, 0.0));
        let mat = self
            .mat
            .scale(Complex::new(lambda, 0.0))
            .add(&noise)
            .expect("same shape");
        Ok(DensityMatrix {
            num_qubits: self.num_qubits,
            mat,
        })
    }

    /// `U rho U^dagger`; `u` must be unitary of matching dimension.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.rows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.rows(),
            });
        }
        u.check_unitary()?;
        let mat = u.matmul(&self.mat)?.matmul(&u.adjoint())?;
        Ok(DensityMatrix {
            num_qubits: self.num_qubits,
            mat,
        })
    }

    /// Convex combination `sum w_i rho_i`; weights must be nonnegative and sum to 1.
    pub fn convex_combination(parts: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
        let first = parts.first().ok_or(Error::InvalidDensity("empty mixture".into()))?;
        let dim = first.1.dim();
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > TOL {
            return Err(Error::InvalidDensity(format!(
                "mixture weights must be nonnegative and sum to 1 (sum = {total})"
            )));
        }
        let mut mat = ComplexMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            mat = mat.add(&rho.mat.scale(Complex::new(*w, 0.0)))?;
        }
        Ok(DensityMatrix {
            num_qubits: first.1.num_qubits,
            mat,
        })
    }
}

/// Cholesky factorization of `mat + shift * I`; succeeds iff every eigenvalue
/// of the Hermitian input exceeds `-shift` (up to rounding).
pub fn is_positive_semidefinite(mat: &ComplexMatrix, shift: f64) -> bool {
    let n = mat.rows();
    let mut l = vec![ZERO; n * n];
    for j in 0..n {
        let mut d = mat.get(j, j).re + shift;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return false;
        }
        let ljj = d.sqrt();
        l[j * n + j] = Complex::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut s = mat.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / ljj;
        }
    }
    true
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

pub fn partial_trace(rho: &DensityMatrix, keep: usize) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

pub fn mix(rho: &DensityMatrix, lambda: f64) -> Result<DensityMatrix> {
    rho.mix(lambda)
}

pub fn evolve(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    rho.evolve(u)
}

/// Seeded generator shared by every randomized routine in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic sub-seed for item `index` of a sweep seeded with `seed` (splitmix64).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gaussian_complex<R: Rng>(rng: &mut R) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unitary from Gram-Schmidt orthonormalization of a seeded complex Gaussian
/// matrix. Gram-Schmidt leaves R with a positive diagonal, so the result is
/// Haar distributed.
pub fn random_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    if !matches!(dim, 2 | 4 | 8 | 16) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut rng = rng_from_seed(seed);
    random_unitary_with(dim, &mut rng)
}

pub(crate) fn random_unitary_with<R: Rng>(dim: usize, rng: &mut R) -> Result<ComplexMatrix> {
    loop {
        let columns: Vec<Vec<Complex>> = (0..dim)
            .map(|_| (0..dim).map(|_| gaussian_complex(rng)).collect())
            .collect();
        if let Some(q) = gram_schmidt(columns) {
            return ComplexMatrix::from_columns(&q);
        }
    }
}

fn gram_schmidt(mut columns: Vec<Vec<Complex>>) -> Option<Vec<ComplexVector>> {
    let mut out: Vec<ComplexVector> = Vec::with_capacity(columns.len());
    for col in columns.iter_mut() {
        // Two passes of modified Gram-Schmidt keep orthogonality at machine precision.
        for _ in 0..2 {
            for q in &out {
                let proj: Complex = q
                    .entries()
                    .iter()
                    .zip(col.iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for (c, a) in col.iter_mut().zip(q.entries()) {
                    *c -= proj * a;
                }
            }
        }
        let v = ComplexVector::from_vec_unchecked(col.clone());
        if v.norm() < 1e-8 {
            return None;
        }
        out.push(v.normalized()?);
    }
    Some(out)
}

pub fn random_pure(num_qubits: usize, seed: u64) -> Result<PureState> {
    let mut rng = rng_from_seed(seed);
    random_pure_with(num_qubits, &mut rng)
}

pub(crate) fn random_pure_with<R: Rng>(num_qubits: usize, rng: &mut R) -> Result<PureState> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::UnsupportedQubits(num_qubits));
    }
    let dim = 1 << num_qubits;
    loop {
        let ket = ComplexVector::from_vec_unchecked((0..dim).map(|_| gaussian_complex(rng)).collect());
        if ket.norm() > 1e-8 {
            return PureState::from_unnormalized(ket);
        }
    }
}

/// `mix(random pure, lambda)` with `lambda` drawn uniformly from `[0, 1]`.
pub fn random_mixed(num_qubits: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = rng_from_seed(seed);
    let pure = random_pure_with(num_qubits, &mut rng)?;
    let lambda: f64 = rng.random_range(0.0..=1.0);
    pure.to_density().mix(lambda)
}

/// Uniform mixture weights over `rank` random pure states. Positivity holds by
/// construction; used to cover states beyond the pure-plus-white-noise family.
pub fn random_mixture(num_qubits: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = rng_from_seed(seed);
    let raw: Vec<f64> = (0..rank.max(1)).map(|_| rng.random_range(0.0..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut parts = Vec::with_capacity(raw.len());
    for w in raw {
        parts.push((w / total, random_pure_with(num_qubits, &mut rng)?.to_density()));
    }
    DensityMatrix::convex_combination(&parts)
}
