use num_bigint::BigUint;

use super::{instantiate, AlgebraSpec, GeneratorKind};
use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Largest truncation the monomial-enumeration oracle accepts.
pub const ORACLE_MAX_TRUNC: u64 = 60;
const MONOMIAL_LIMIT: u64 = 100_000_000;

/// Hilbert series by listing every monomial of degree `<= max_degree`.
///
/// Shares only generator instantiation with [`super::hilbert`]; the counting
/// is an explicit depth-first walk over exponent vectors.
pub fn oracle_hilbert(spec: &AlgebraSpec, max_degree: u64) -> Result<TruncatedSeries> {
    if max_degree > ORACLE_MAX_TRUNC {
        return Err(Error::ResourceGuard(format!(
            "oracle truncation {max_degree} exceeds {ORACLE_MAX_TRUNC}"
        )));
    }
    let mut gens: Vec<(u64, Option<u64>)> = Vec::new();
    for g in instantiate(spec, max_degree)? {
        let cap = match g.kind {
            GeneratorKind::Polynomial => None,
            GeneratorKind::Exterior => Some(1),
            GeneratorKind::Truncated(k) => Some(u64::from(k) - 1),
        };
        for _ in 0..g.multiplicity {
            gens.push((g.degree, cap));
        }
    }
    let mut counts = vec![0u64; max_degree as usize + 1];
    let mut visited = 0u64;
    enumerate(&gens, 0, 0, max_degree, &mut counts, &mut visited)?;
    TruncatedSeries::from_coeffs(counts.into_iter().map(BigUint::from).collect())
}

fn enumerate(
    gens: &[(u64, Option<u64>)],
    at: usize,
    degree: u64,
    max_degree: u64,
    counts: &mut [u64],
    visited: &mut u64,
) -> Result<()> {
    if at == gens.len() {
        *visited += 1;
        if *visited > MONOMIAL_LIMIT {
            return Err(Error::ResourceGuard(format!(
                "oracle would enumerate more than {MONOMIAL_LIMIT} monomials"
            )));
        }
        counts[degree as usize] += 1;
        return Ok(());
    }
    let (d, cap) = gens[at];
    let mut e = 0u64;
    let mut deg = degree;
    loop {
        enumerate(gens, at + 1, deg, max_degree, counts, visited)?;
        e += 1;
        if cap.is_some_and(|c| e > c) {
            break;
        }
        deg += d;
        if deg > max_degree {
            break;
        }
    }
    Ok(())
}
