//! Complete sets of mutually unbiased (complementary) measurement bases.
//!
//! A k-qubit set holds `2^k + 1` orthonormal bases such that any vector of one
//! basis has squared overlap `1/2^k` with every vector of any other basis.
//! Bases without a closed form are built as common eigenbases of commuting
//! Hermitian involutions, one vector per sign pattern, from the rank-one
//! projector `prod_i (I + s_i G_i) / 2`.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{overlap_sqr, Complex, ComplexMatrix, ComplexVector, TOL};
use crate::pauli::pauli_classes;
use crate::states::{qubits_for_dim, spin_along, spin_down, spin_up, DensityMatrix};

/// One measurement: an orthonormal basis whose vectors are the outcomes, in order.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    label: String,
    vectors: Vec<ComplexVector>,
}

impl MeasurementBasis {
    /// Checks that there are `dim` vectors of dimension `dim = 2^k`, orthonormal within 1e-9.
    pub fn new(label: impl Into<String>, vectors: Vec<ComplexVector>) -> Result<Self> {
        let basis = Self::new_unchecked(label, vectors)?;
        let defect = basis.orthonormality_defect();
        if defect > TOL {
            return Err(Error::InvalidMubSet(format!(
                "basis `{}` is not orthonormal (defect {defect:e})",
                basis.label
            )));
        }
        Ok(basis)
    }

    fn new_unchecked(label: impl Into<String>, vectors: Vec<ComplexVector>) -> Result<Self> {
        let dim = vectors.len();
        qubits_for_dim(dim)?;
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        Ok(Self {
            label: label.into(),
            vectors,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate().skip(i) {
                let g = u.inner(v).map(|z| z.norm()).unwrap_or(f64::INFINITY);
                let dev = if i == j { (g - 1.0).abs() } else { g };
                worst = worst.max(dev);
            }
        }
        worst
    }

    fn mapped(&self, u: &ComplexMatrix) -> Result<Self> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| u.apply(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            label: self.label.clone(),
            vectors,
        })
    }
}

/// A complete set of `2^k + 1` bases for a k-qubit system together with the
/// angles used to build it.
#[derive(Clone, Debug, PartialEq)]
pub struct MubSet {
    num_qubits: usize,
    bases: Vec<MeasurementBasis>,
    phi_params: Vec<f64>,
}

impl MubSet {
    /// Requires `2^k + 1` bases of a common dimension `2^k`. Unbiasedness is
    /// not checked here; see [`validate_mub`].
    pub fn new(bases: Vec<MeasurementBasis>, phi_params: Vec<f64>) -> Result<Self> {
        let dim = bases
            .first()
            .map(MeasurementBasis::dim)
            .ok_or_else(|| Error::InvalidMubSet("no bases".into()))?;
        let num_qubits = qubits_for_dim(dim)?;
        if let Some(b) = bases.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.dim(),
            });
        }
        if bases.len() != dim + 1 {
            return Err(Error::InvalidMubSet(format!(
                "{} bases given, a complete set for {num_qubits} qubit(s) has {}",
                bases.len(),
                dim + 1
            )));
        }
        Ok(Self {
            num_qubits,
            bases,
            phi_params,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[MeasurementBasis] {
        &self.bases
    }

    pub fn phi_params(&self) -> &[f64] {
        &self.phi_params
    }

    /// Plain-text dump: a header line, then one block per basis with one
    /// vector per line as `re im` pairs in ket order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let phis: Vec<String> = self.phi_params.iter().map(|p| format!("{p:.17e}")).collect();
        let _ = writeln!(
            out,
            "mubset k={} m={} phi={}",
            self.num_qubits,
            self.bases.len(),
            if phis.is_empty() { "-".to_string() } else { phis.join(",") }
        );
        for (idx, basis) in self.bases.iter().enumerate() {
            let _ = writeln!(out, "basis {} {}", idx + 1, basis.label);
            for v in &basis.vectors {
                let line: Vec<String> = v
                    .entries()
                    .iter()
                    .map(|z| format!("{:.17e} {:.17e}", z.re, z.im))
                    .collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
        out
    }

    /// Parses the output of [`MubSet::to_text`]. Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let perr = |line: usize, message: String| Error::Parse { line, message };

        let (hline, header) = lines.next().ok_or_else(|| perr(1, "empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "mubset" {
            return Err(perr(hline, "expected `mubset k=<K> m=<M> phi=<list>`".into()));
        }
        let field = |s: &str, key: &str| -> Result<String> {
            s.strip_prefix(key)
                .map(str::to_string)
                .ok_or_else(|| perr(hline, format!("expected `{key}...`")))
        };
        let k: usize = field(fields[1], "k=")?
            .parse()
            .map_err(|_| perr(hline, "bad qubit count".into()))?;
        let m: usize = field(fields[2], "m=")?
            .parse()
            .map_err(|_| perr(hline, "bad basis count".into()))?;
        let phi_field = field(fields[3], "phi=")?;
        let phi_params = if phi_field == "-" {
            Vec::new()
        } else {
            phi_field
                .split(',')
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| perr(hline, "bad phi list".into()))?
        };
        if k == 0 || k > crate::states::MAX_QUBITS {
            return Err(perr(hline, format!("unsupported qubit count {k}")));
        }
        let dim = 1usize << k;

        let mut bases = Vec::with_capacity(m);
        for b in 0..m {
            let (bl, bline) = lines
                .next()
                .ok_or_else(|| perr(hline, format!("missing basis {}", b + 1)))?;
            let rest = bline
                .strip_prefix("basis ")
                .ok_or_else(|| perr(bl, "expected `basis <index> <label>`".into()))?;
            let label = rest
                .split_once(' ')
                .map(|(_, l)| l.trim().to_string())
                .unwrap_or_default();
            let mut vectors = Vec::with_capacity(dim);
            for _ in 0..dim {
                let (vl, vline) = lines
                    .next()
                    .ok_or_else(|| perr(bl, "truncated basis block".into()))?;
                let nums = vline
                    .split_whitespace()
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| perr(vl, "bad number".into()))?;
                if nums.len() != 2 * dim {
                    return Err(perr(
                        vl,
                        format!("expected {} numbers, found {}", 2 * dim, nums.len()),
                    ));
                }
                let entries = nums
                    .chunks(2)
                    .map(|c| Complex::new(c[0], c[1]))
                    .collect();
                vectors.push(ComplexVector::new(entries).map_err(|e| perr(vl, e.to_string()))?);
            }
            bases.push(
                MeasurementBasis::new(label, vectors).map_err(|e| perr(bl, e.to_string()))?,
            );
        }
        if let Some((l, _)) = lines.next() {
            return Err(perr(l, "trailing content".into()));
        }
        Self::new(bases, phi_params).map_err(|e| perr(hline, e.to_string()))
    }
}

/// Common eigenbasis of `k` independent, commuting Hermitian involutions on a
/// `2^k`-dimensional space. Outcome `j` has sign `+1` for generator `i` when bit
/// `k - 1 - i` of `j` is clear, so the first generator is the most significant.
pub fn stabilizer_eigenbasis(
    label: impl Into<String>,
    generators: &[ComplexMatrix],
) -> Result<MeasurementBasis> {
    let k = generators.len();
    let dim = 1usize << k;
    if let Some(g) = generators.iter().find(|g| g.rows() != dim || !g.is_square()) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: g.rows(),
        });
    }
    let id = ComplexMatrix::identity(dim);
    let half = Complex::new(0.5, 0.0);
    let mut vectors = Vec::with_capacity(dim);
    for outcome in 0..dim {
        let mut proj = id.clone();
        for (i, g) in generators.iter().enumerate() {
            let negative = (outcome >> (k - 1 - i)) & 1 == 1;
            let factor = if negative { id.sub(g)? } else { id.add(g)? };
            proj = proj.matmul(&factor.scale(half))?;
        }
        let best = (0..dim)
            .map(|j| proj.column(j))
            .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .expect("dim >= 2");
        if best.norm_sqr() < 1.0 / (4.0 * dim as f64) {
            return Err(Error::InvalidMubSet(
                "generators do not define a nondegenerate common eigenbasis".into(),
            ));
        }
        vectors.push(best.normalized().expect("nonzero").with_canonical_phase());
    }
    MeasurementBasis::new(label, vectors)
}

fn spin_basis(label: impl Into<String>, phi: f64) -> MeasurementBasis {
    MeasurementBasis::new(label, vec![spin_up(phi), spin_down(phi)]).expect("orthonormal pair")
}

fn z_basis() -> MeasurementBasis {
    MeasurementBasis::new("z", vec![ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)])
        .expect("computational basis")
}

fn product_basis(label: impl Into<String>, a: &MeasurementBasis, b: &MeasurementBasis) -> MeasurementBasis {
    let vectors = a
        .vectors()
        .iter()
        .flat_map(|u| b.vectors().iter().map(move |v| u.kron(v)))
        .collect();
    MeasurementBasis::new(label, vectors).expect("product of orthonormal bases")
}

/// Single-qubit complementary triple: spin along `phi` in the x-y plane, along
/// z, and along `phi + pi/2`. Outcome 0 is "up".
pub fn spin_triple(phi: f64) -> MubSet {
    let bases = vec![
        spin_basis("phi", phi),
        z_basis(),
        spin_basis("phi+pi/2", phi + FRAC_PI_2),
    ];
    MubSet::new(bases, vec![phi]).expect("three bases of dimension 2")
}

/// The five complementary proposition pairs for two qubits.
///
/// With `S(a) = cos(a) X + sin(a) Y`, `S1 = S(phi1)`, `S2 = S(phi2)` and primes
/// denoting `+ pi/2`:
/// 1. `z (x) z`;
/// 2. `S1 (x) S2` eigenbasis;
/// 3. `S1' (x) S2'` eigenbasis;
/// 4. common eigenbasis of `Z (x) S2` and `S1 (x) S2'`;
/// 5. common eigenbasis of `Z (x) S2'` and `S1 (x) Z`.
///
/// Outcomes are ordered (true, true), (true, false), (false, true),
/// (false, false), where "true" means spin up for the product bases and
/// "same" (correlation eigenvalue +1) for bases 4 and 5.
pub fn two_qubit_set(phi1: f64, phi2: f64) -> MubSet {
    let z = ComplexMatrix::pauli_z();
    let s1 = spin_along(phi1);
    let s2 = spin_along(phi2);
    let s2p = spin_along(phi2 + FRAC_PI_2);
    let bases = vec![
        product_basis("z.z", &z_basis(), &z_basis()),
        product_basis("phi1.phi2", &spin_basis("", phi1), &spin_basis("", phi2)),
        product_basis(
            "phi1'.phi2'",
            &spin_basis("", phi1 + FRAC_PI_2),
            &spin_basis("", phi2 + FRAC_PI_2),
        ),
        stabilizer_eigenbasis(
            "same(z;phi2)&same(phi1;phi2')",
            &[z.kron(&s2), s1.kron(&s2p)],
        )
        .expect("commuting correlation operators"),
        stabilizer_eigenbasis(
            "same(z;phi2')&same(phi1;z)",
            &[z.kron(&s2p), s1.kron(&z)],
        )
        .expect("commuting correlation operators"),
    ];
    MubSet::new(bases, vec![phi1, phi2]).expect("five bases of dimension 4")
}

/// Complete set from the fixed Pauli partition: one basis per commuting class.
pub fn pauli_partition_mubs(k: usize) -> Result<MubSet> {
    let bases = pauli_classes(k)?
        .iter()
        .map(|class| stabilizer_eigenbasis(class.label(), &class.generator_matrices()))
        .collect::<Result<Vec<_>>>()?;
    MubSet::new(bases, Vec::new())
}

/// Outcome of [`validate_mub`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MubValidation {
    /// Largest deviation of any basis' Gram matrix from the identity.
    pub max_orthonormality_violation: f64,
    /// Largest `| |<u|v>|^2 - 1/2^k |` over vectors from distinct bases.
    pub max_unbiasedness_violation: f64,
    pub tolerance: f64,
}

impl MubValidation {
    pub fn passed(&self) -> bool {
        self.max_orthonormality_violation < self.tolerance
            && self.max_unbiasedness_violation < self.tolerance
    }
}

/// Measures how far `set` is from a complete set of mutually unbiased bases.
pub fn validate_mub(set: &MubSet) -> MubValidation {
    let target = 1.0 / set.dim() as f64;
    let max_orthonormality_violation = set
        .bases
        .iter()
        .map(MeasurementBasis::orthonormality_defect)
        .fold(0.0, f64::max);
    let mut max_unbiasedness_violation: f64 = 0.0;
    for (a, ba) in set.bases.iter().enumerate() {
        for bb in set.bases.iter().skip(a + 1) {
            for u in ba.vectors() {
                for v in bb.vectors() {
                    let dev = overlap_sqr(u, v)
                        .map(|o| (o - target).abs())
                        .unwrap_or(f64::INFINITY);
                    max_unbiasedness_violation = max_unbiasedness_violation.max(dev);
                }
            }
        }
    }
    MubValidation {
        max_orthonormality_violation,
        max_unbiasedness_violation,
        tolerance: TOL,
    }
}

/// Maps every basis vector through the unitary `u`.
pub fn rotate_set(set: &MubSet, u: &ComplexMatrix) -> Result<MubSet> {
    if u.rows() != set.dim() || u.cols() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: u.rows(),
        });
    }
    u.check_unitary()?;
    let bases = set
        .bases
        .iter()
        .map(|b| b.mapped(u))
        .collect::<Result<Vec<_>>>()?;
    Ok(MubSet {
        num_qubits: set.num_qubits,
        bases,
        phi_params: set.phi_params.clone(),
    })
}

/// `sum over bases and outcomes of p_i^2`; equals `Tr rho^2 + 1` for a complete set.
pub fn probability_square_sum(rho: &DensityMatrix, set: &MubSet) -> Result<f64> {
    let mut total = 0.0;
    for basis in set.bases() {
        total += crate::measure::measurement_probabilities(rho, basis)?.sum_of_squares();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ALG_TOL;
    use crate::measure::measurement_probabilities;
    use crate::states::{named_state, random_mixed, random_unitary};
    use std::f64::consts::PI;

    fn same_up_to_phase(a: &MeasurementBasis, b: &MeasurementBasis) -> bool {
        a.vectors()
            .iter()
            .zip(b.vectors())
            .all(|(u, v)| (overlap_sqr(u, v).unwrap() - 1.0).abs() < 1e-12)
    }

    #[test]
    fn spin_triple_at_zero_is_x_z_y() {
        let set = spin_triple(0.0);
        let x = MeasurementBasis::new("x", vec![spin_up(0.0), spin_down(0.0)]).unwrap();
        let y = MeasurementBasis::new("y", vec![spin_up(FRAC_PI_2), spin_down(FRAC_PI_2)]).unwrap();
        assert!(same_up_to_phase(&set.bases()[0], &x));
        assert!(same_up_to_phase(&set.bases()[1], &z_basis()));
        assert!(same_up_to_phase(&set.bases()[2], &y));
        // x basis eigenvectors really are X eigenvectors
        let px = ComplexMatrix::pauli_x().apply(&set.bases()[0].vectors()[0]).unwrap();
        assert!((set.bases()[0].vectors()[0].inner(&px).unwrap().re - 1.0).abs() < ALG_TOL);
    }

    #[test]
    fn spin_triple_is_unbiased_and_periodic() {
        for i in 0..16 {
            let phi = -3.0 + 0.41 * i as f64;
            let set = spin_triple(phi);
            assert!(validate_mub(&set).passed());
            let shifted = spin_triple(phi + 2.0 * PI);
            for (a, b) in set.bases().iter().zip(shifted.bases()) {
                assert!(same_up_to_phase(a, b));
            }
        }
    }

    #[test]
    fn two_qubit_set_validates() {
        for &(p1, p2) in &[(0.0, 0.0), (0.7, 1.1), (-2.3, 0.4), (PI, PI / 3.0)] {
            let v = validate_mub(&two_qubit_set(p1, p2));
            assert!(v.passed(), "{p1} {p2}: {v:?}");
        }
    }

    #[test]
    fn two_qubit_product_basis_outcome_order() {
        let set = two_qubit_set(0.3, 0.9);
        let rho = named_state("prod", &[]).unwrap().to_density();
        let p = measurement_probabilities(&rho, &set.bases()[0]).unwrap();
        let expected = [0.0, 0.0, 1.0, 0.0];
        for (a, b) in p.as_slice().iter().zip(expected) {
            assert!((a - b).abs() < ALG_TOL);
        }
    }

    #[test]
    fn bell_state_is_true_false_in_correlation_basis() {
        for &(p1, p2) in &[(0.0, 0.0), (0.7, 1.1), (-1.2, 2.5)] {
            let set = two_qubit_set(p1, p2);
            let rho = named_state("bell", &[p1, p2]).unwrap().to_density();
            let p = measurement_probabilities(&rho, &set.bases()[3]).unwrap();
            assert!((p.get(1) - 1.0).abs() < ALG_TOL, "{p:?}");
        }
    }

    #[test]
    fn correlation_bases_are_entangled_and_product_bases_factor() {
        let set = two_qubit_set(0.4, -0.8);
        for (idx, basis) in set.bases().iter().enumerate() {
            for v in basis.vectors() {
                let rho = crate::states::PureState::new(v.clone()).unwrap().to_density();
                let reduced = rho.partial_trace(1).unwrap().purity();
                if idx < 3 {
                    assert!((reduced - 1.0).abs() < TOL);
                } else {
                    assert!((reduced - 0.5).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn pauli_partition_sets_validate() {
        for k in 1..=3 {
            let set = pauli_partition_mubs(k).unwrap();
            assert_eq!(set.len(), (1 << k) + 1);
            let v = validate_mub(&set);
            assert!(v.passed(), "k={k}: {v:?}");
        }
        assert_eq!(pauli_partition_mubs(4), Err(Error::UnsupportedQubits(4)));
        assert!(pauli_partition_mubs(0).is_err());
    }

    #[test]
    fn validate_detects_repeated_basis() {
        let set = MubSet::new(
            vec![z_basis(), z_basis(), spin_basis("x", 0.0)],
            vec![],
        )
        .unwrap();
        let v = validate_mub(&set);
        assert!(!v.passed());
        assert!((v.max_unbiasedness_violation - 0.5).abs() < ALG_TOL);
    }

    #[test]
    fn basis_and_set_construction_errors() {
        let bad = MeasurementBasis::new(
            "bad",
            vec![ComplexVector::basis(2, 0), ComplexVector::basis(2, 0)],
        );
        assert!(bad.is_err());
        assert!(MubSet::new(vec![z_basis(), z_basis()], vec![]).is_err());
        assert!(MubSet::new(vec![], vec![]).is_err());
    }

    #[test]
    fn rotate_set_examples() {
        let set = spin_triple(0.0);
        assert_eq!(rotate_set(&set, &ComplexMatrix::identity(2)).unwrap(), set);
        let flipped = rotate_set(&set, &ComplexMatrix::pauli_x()).unwrap();
        assert!(validate_mub(&flipped).passed());
        let two = two_qubit_set(0.2, 0.3);
        for seed in 0..100 {
            let u = random_unitary(4, seed).unwrap();
            assert!(validate_mub(&rotate_set(&two, &u).unwrap()).passed());
        }
        let not_u = ComplexMatrix::identity(2).scale(Complex::new(2.0, 0.0));
        assert!(matches!(rotate_set(&set, &not_u), Err(Error::NotUnitary(_))));
        assert!(rotate_set(&set, &ComplexMatrix::identity(4)).is_err());
    }

    #[test]
    fn probability_square_identity() {
        for seed in 0..20 {
            for (k, set) in [(1, spin_triple(0.3)), (2, two_qubit_set(0.1, 2.0))] {
                let rho = random_mixed(k, seed).unwrap();
                let s = probability_square_sum(&rho, &set).unwrap();
                assert!((s - rho.purity() - 1.0).abs() < TOL);
            }
        }
    }

    #[test]
    fn deterministic_outcome_forces_uniform_elsewhere() {
        let set = pauli_partition_mubs(2).unwrap();
        for (a, basis) in set.bases().iter().enumerate() {
            let rho = crate::states::PureState::new(basis.vectors()[1].clone())
                .unwrap()
                .to_density();
            for (b, other) in set.bases().iter().enumerate() {
                let p = measurement_probabilities(&rho, other).unwrap();
                if a != b {
                    assert!(p.as_slice().iter().all(|x| (x - 0.25).abs() < TOL));
                }
            }
        }
    }

    #[test]
    fn text_dump_round_trips() {
        let set = two_qubit_set(0.25, -1.5);
        let text = set.to_text();
        assert!(text.starts_with("mubset k=2 m=5 phi="));
        let back = MubSet::from_text(&text).unwrap();
        assert_eq!(back.bases().len(), 5);
        for (a, b) in back.bases().iter().zip(set.bases()) {
            assert_eq!(a.label(), b.label());
            for (u, v) in a.vectors().iter().zip(b.vectors()) {
                assert_eq!(u, v);
            }
        }
        assert_eq!(back.phi_params(), set.phi_params());

        let k3 = pauli_partition_mubs(3).unwrap();
        assert_eq!(MubSet::from_text(&k3.to_text()).unwrap(), k3);
    }

    #[test]
    fn text_dump_parse_errors_carry_line_numbers() {
        let text = spin_triple(0.0).to_text();
        let broken = text.replacen("basis 2 z", "basis 2 z\n1 2 3", 1);
        match MubSet::from_text(&broken) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(MubSet::from_text(""), Err(Error::Parse { line: 1, .. })));
    }
}
