//! k-qubit Pauli strings and the fixed partitions of the nontrivial Pauli group
//! into `2^k + 1` classes of `2^k - 1` mutually commuting strings.
//!
//! Each class is stored by `k` independent generators. Apart from the all-Z
//! class, the generators of a class are `X(e_i) Z(M e_i)` for a symmetric binary
//! matrix `M`; the `2^k` matrices of a table differ pairwise by invertible
//! matrices, which is what makes the classes disjoint.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// A Pauli string in symplectic form. Bit `n - 1 - q` of `x`/`z` belongs to
/// qubit `q` (zero-based, qubit 0 leftmost).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    x: u32,
    z: u32,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self { n, x: 0, z: 0 }
    }

    pub fn from_bits(n: usize, x: u32, z: u32) -> Self {
        let mask = (1u32 << n) - 1;
        Self {
            n,
            x: x & mask,
            z: z & mask,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Letter on qubit `q` (zero-based, leftmost first).
    pub fn letter(&self, q: usize) -> char {
        let bit = self.n - 1 - q;
        match ((self.x >> bit) & 1, (self.z >> bit) & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (0, 1) => 'Z',
            _ => 'Y',
        }
    }

    /// Symplectic commutation test.
    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Product up to phase.
    pub fn product(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    /// Dense Hermitian matrix (tensor product of the single-qubit Paulis).
    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(1);
        for q in 0..self.n {
            let factor = match self.letter(q) {
                'I' => ComplexMatrix::identity(2),
                'X' => ComplexMatrix::pauli_x(),
                'Y' => ComplexMatrix::pauli_y(),
                _ => ComplexMatrix::pauli_z(),
            };
            m = m.kron(&factor);
        }
        m
    }

    /// All `4^n - 1` nontrivial strings in symplectic order.
    pub fn all_nontrivial(n: usize) -> Vec<Self> {
        let size = 1u32 << n;
        (0..size)
            .flat_map(|x| (0..size).map(move |z| Self { n, x, z }))
            .filter(|p| !p.is_identity())
            .collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        if n == 0 || n > 16 {
            return Err(Error::UnsupportedQubits(n));
        }
        let (mut x, mut z) = (0u32, 0u32);
        for (q, ch) in s.chars().enumerate() {
            let bit = 1u32 << (n - 1 - q);
            match ch {
                'I' => {}
                'X' => x |= bit,
                'Z' => z |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit;
                }
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        message: format!("bad Pauli letter `{other}`"),
                    })
                }
            }
        }
        Ok(Self { n, x, z })
    }
}

const K1: &[&[&str]] = &[&["Z"], &["X"], &["Y"]];

const K2: &[&[&str]] = &[
    &["ZI", "IZ"],
    &["XI", "IX"],
    &["YI", "IY"],
    &["XZ", "ZY"],
    &["YZ", "ZX"],
];

const K3: &[&[&str]] = &[
    &["ZII", "IZI", "IIZ"],
    &["XII", "IXI", "IIX"],
    &["XIZ", "IYI", "ZIX"],
    &["XZI", "ZYI", "IIY"],
    &["XZZ", "ZXI", "ZIY"],
    &["YII", "IXZ", "IZY"],
    &["YIZ", "IYZ", "ZZY"],
    &["YZI", "ZYZ", "IZX"],
    &["YZZ", "ZXZ", "ZZX"],
];

/// One class of the partition: `k` generators and the `2^k - 1` nontrivial
/// strings they generate.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliClass {
    generators: Vec<PauliString>,
    members: Vec<PauliString>,
}

impl PauliClass {
    pub fn from_generators(generators: Vec<PauliString>) -> Self {
        let k = generators.len();
        let members = (1u32..(1 << k))
            .map(|mask| {
                generators
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .fold(PauliString::identity(generators[0].num_qubits()), |acc, (_, g)| {
                        acc.product(g)
                    })
            })
            .collect();
        Self {
            generators,
            members,
        }
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn members(&self) -> &[PauliString] {
        &self.members
    }

    pub fn label(&self) -> String {
        self.generators
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Hermitian generator matrices with the sign fixed by the string letters.
    pub fn generator_matrices(&self) -> Vec<ComplexMatrix> {
        self.generators.iter().map(PauliString::matrix).collect()
    }
}

/// The fixed partition table for `k` in `1..=3`.
pub fn pauli_classes(k: usize) -> Result<Vec<PauliClass>> {
    let table = match k {
        1 => K1,
        2 => K2,
        3 => K3,
        _ => return Err(Error::UnsupportedQubits(k)),
    };
    table
        .iter()
        .map(|gens| {
            let gens = gens
                .iter()
                .map(|s| s.parse())
                .collect::<Result<Vec<PauliString>>>()?;
            Ok(PauliClass::from_generators(gens))
        })
        .collect()
}
