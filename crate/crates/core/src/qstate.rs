//! The QSTATE text format.
//!
//! ```text
//! # comment to end of line
//! pure 1
//! 0.7071067811865476 0   0 0.7071067811865476
//! ```
//!
//! The header is `pure K` or `density K` with `1 <= K <= 4`. It is followed by
//! whitespace-separated reals: `2 * 2^K` for a ket (`re im` pairs in ket order)
//! or `2 * 4^K` for a density matrix (`re im` pairs, row-major). Tokens may be
//! spread over any number of lines.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{Complex, ComplexMatrix, ComplexVector};
use crate::states::{DensityMatrix, PureState, MAX_QUBITS};

/// A parsed QSTATE document.
#[derive(Clone, Debug, PartialEq)]
pub enum QState {
    Pure(PureState),
    Density(DensityMatrix),
}

impl QState {
    pub fn num_qubits(&self) -> usize {
        match self {
            Self::Pure(s) => s.num_qubits(),
            Self::Density(r) => r.num_qubits(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            Self::Pure(s) => s.to_density(),
            Self::Density(r) => r.clone(),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses and validates a QSTATE document. Every error names a 1-based line.
pub fn parse_qstate(text: &str) -> Result<QState> {
    let mut header: Option<(usize, bool, usize)> = None;
    let mut values: Vec<f64> = Vec::new();
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace().peekable();
        if tokens.peek().is_none() {
            continue;
        }
        last_line = line_no;
        if header.is_none() {
            let kind = tokens.next().expect("peeked");
            let is_pure = match kind {
                "pure" => true,
                "density" => false,
                other => {
                    return Err(parse_err(
                        line_no,
                        format!("expected `pure K` or `density K`, found `{other}`"),
                    ))
                }
            };
            let k_tok = tokens
                .next()
                .ok_or_else(|| parse_err(line_no, "missing qubit count"))?;
            let k: usize = k_tok
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad qubit count `{k_tok}`")))?;
            if k == 0 || k > MAX_QUBITS {
                return Err(parse_err(
                    line_no,
                    format!("qubit count {k} outside 1..={MAX_QUBITS}"),
                ));
            }
            if let Some(extra) = tokens.next() {
                return Err(parse_err(line_no, format!("unexpected token `{extra}` after header")));
            }
            header = Some((line_no, is_pure, k));
            continue;
        }
        let (_, is_pure, k) = header.expect("set above");
        let expected = if is_pure { 2usize << k } else { 2usize << (2 * k) };
        for tok in tokens {
            let x: f64 = tok
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad number `{tok}`")))?;
            if !x.is_finite() {
                return Err(parse_err(line_no, format!("non-finite number `{tok}`")));
            }
            if values.len() == expected {
                return Err(parse_err(
                    line_no,
                    format!("too many values (expected {expected})"),
                ));
            }
            values.push(x);
        }
    }

    let (header_line, is_pure, k) =
        header.ok_or_else(|| parse_err(last_line, "missing `pure K` / `density K` header"))?;
    let expected = if is_pure { 2usize << k } else { 2usize << (2 * k) };
    if values.len() != expected {
        return Err(parse_err(
            last_line,
            format!("expected {expected} values, found {}", values.len()),
        ));
    }
    let entries: Vec<Complex> = values.chunks(2).map(|c| Complex::new(c[0], c[1])).collect();
    let invalid = |e: Error| parse_err(header_line, format!("invalid state: {e}"));
    if is_pure {
        let ket = ComplexVector::new(entries).map_err(invalid)?;
        Ok(QState::Pure(PureState::new(ket).map_err(invalid)?))
    } else {
        let dim = 1 << k;
        let mat = ComplexMatrix::new(dim, dim, entries).map_err(invalid)?;
        Ok(QState::Density(DensityMatrix::new(mat).map_err(invalid)?))
    }
}

/// Writes a ket in QSTATE form, one `re im` pair per line.
pub fn write_pure(state: &PureState) -> String {
    let mut out = format!("pure {}\n", state.num_qubits());
    for z in state.ket().entries() {
        let _ = writeln!(out, "{:.17e} {:.17e}", z.re, z.im);
    }
    out
}

/// Writes a density matrix in QSTATE form, one row per line.
pub fn write_density(rho: &DensityMatrix) -> String {
    let mut out = format!("density {}\n", rho.num_qubits());
    let dim = rho.dim();
    for i in 0..dim {
        let row: Vec<String> = (0..dim)
            .map(|j| {
                let z = rho.get(i, j);
                format!("{:.17e} {:.17e}", z.re, z.im)
            })
            .collect();
        let _ = writeln!(out, "{}", row.join("  "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{named_state, random_mixed};

    fn line_of(err: Error) -> usize {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_pure_and_density() {
        let q = parse_qstate("pure 1\n1 0 0 0\n").unwrap();
        assert_eq!(q, QState::Pure(named_state("z+", &[]).unwrap()));

        let text = "# maximally mixed\ndensity 1\n0.5 0 0 0\n0 0 0.5 0 # row 2\n";
        let q = parse_qstate(text).unwrap();
        assert!((q.to_density().purity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn writers_round_trip() {
        let bell = named_state("bell", &[0.2, 0.9]).unwrap();
        assert_eq!(parse_qstate(&write_pure(&bell)).unwrap(), QState::Pure(bell));
        let rho = random_mixed(2, 3).unwrap();
        assert_eq!(parse_qstate(&write_density(&rho)).unwrap(), QState::Density(rho));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of(parse_qstate("\n\nmixed 1\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_qstate("pure 0\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_qstate("pure 5\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_qstate("pure 1 x\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_qstate("pure 1\n1 0\n0 abc\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_qstate("pure 1\n1 0\n0 0\n0\n").unwrap_err()), 4);
        assert_eq!(line_of(parse_qstate("pure 1\n1 0\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_qstate("pure 1\n1 0 inf 0\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_qstate("").unwrap_err()), 1);
        assert_eq!(line_of(parse_qstate("# only a comment\n").unwrap_err()), 1);
    }

    #[test]
    fn rejects_invariant_violations_at_header_line() {
        // not normalized
        assert_eq!(line_of(parse_qstate("# c\npure 1\n1 0 1 0\n").unwrap_err()), 2);
        // trace 1 but not positive
        let text = "density 1\n1.2 0 0 0\n0 0 -0.2 0\n";
        assert_eq!(line_of(parse_qstate(text).unwrap_err()), 1);
        // not Hermitian
        let text = "density 1\n0.5 0 0.1 0\n0 0 0.5 0\n";
        let err = parse_qstate(text).unwrap_err();
        assert!(err.to_string().contains("Hermitian"), "{err}");
    }
}
