//! Truncated power series with arbitrary-precision nonnegative coefficients.
//!
//! A [`TruncatedSeries`] stores `c_0..=c_N`. Every size quantity handled by
//! this crate is a rank, so the type exposes no subtraction and rejects
//! negative input. Binary operations align to the smaller truncation of their
//! operands.

use std::f64::consts::LN_2;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::GeneratorKind;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct TruncatedSeries {
    coeffs: Vec<BigUint>,
}

/// Wire form: decimal strings, since coefficients routinely exceed 64 bits.
#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    trunc: usize,
    coeffs: Vec<String>,
}

impl From<TruncatedSeries> for SeriesRepr {
    fn from(s: TruncatedSeries) -> Self {
        SeriesRepr {
            trunc: s.trunc(),
            coeffs: s.coeffs.iter().map(|c| c.to_str_radix(10)).collect(),
        }
    }
}

impl TryFrom<SeriesRepr> for TruncatedSeries {
    type Error = Error;

    fn try_from(r: SeriesRepr) -> Result<Self> {
        if r.coeffs.len() != r.trunc + 1 {
            return Err(Error::invalid(format!(
                "series has trunc {} but {} coefficients",
                r.trunc,
                r.coeffs.len()
            )));
        }
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| {
                let v: BigInt = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad coefficient `{s}`")))?;
                if v.is_negative() {
                    return Err(Error::invalid(format!("negative coefficient `{s}`")));
                }
                Ok(v.magnitude().clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries { coeffs })
    }
}

impl TruncatedSeries {
    pub fn zero(trunc: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigUint::zero(); trunc + 1],
        }
    }

    /// The unit series `1`.
    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = BigUint::one();
        s
    }

    /// `1 + t + t^2 + ...`
    pub fn all_ones(trunc: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigUint::one(); trunc + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigUint>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("a series needs at least the degree-0 coefficient"));
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self> {
        Self::from_coeffs(values.iter().map(|&v| BigUint::from(v)).collect())
    }

    /// Builds a series from signed input, rejecting negative entries.
    pub fn from_i64s(values: &[i64]) -> Result<Self> {
        if let Some((n, v)) = values.iter().enumerate().find(|(_, v)| **v < 0) {
            return Err(Error::invalid(format!("negative coefficient {v} at degree {n}")));
        }
        Self::from_coeffs(values.iter().map(|&v| BigUint::from(v as u64)).collect())
    }

    /// Maximum degree `N`.
    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigUint {
        &self.coeffs[n]
    }

    pub fn into_coeffs(self) -> Vec<BigUint> {
        self.coeffs
    }

    /// Restricts to degrees `0..=trunc` (no-op when already shorter).
    pub fn truncate(&self, trunc: usize) -> Self {
        let end = (trunc + 1).min(self.coeffs.len());
        TruncatedSeries {
            coeffs: self.coeffs[..end].to_vec(),
        }
    }

    /// Cauchy product, `c_n = sum_{i+j=n} a_i b_j`.
    pub fn mul(&self, other: &Self) -> Self {
        let trunc = self.trunc().min(other.trunc());
        let mut out = vec![BigUint::zero(); trunc + 1];
        for (i, a) in self.coeffs[..=trunc].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=trunc - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Coefficientwise sum on the common truncation.
    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc().min(other.trunc());
        TruncatedSeries {
            coeffs: (0..=trunc).map(|n| &self.coeffs[n] + &other.coeffs[n]).collect(),
        }
    }

    pub fn scale(&self, k: u64) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Multiplies by the Hilbert factor of a single generator of degree `d`.
    ///
    /// Every kind runs in `O(N)` coefficient operations: the polynomial factor
    /// `1/(1-t^d)` is a stride-`d` prefix sum, and the truncated factor is that
    /// prefix sum followed by removal of the `t^{dk}` tail.
    pub fn mul_factor(&self, kind: GeneratorKind, d: u64) -> Result<Self> {
        let mut out = self.clone();
        apply_factor(&mut out.coeffs, kind, d)?;
        Ok(out)
    }

    /// Running sum `c'_n = sum_{k<=n} c_k`.
    pub fn cumulative(&self) -> Self {
        let mut out = self.clone();
        prefix_sum(&mut out.coeffs, 1);
        out
    }

    /// Multiplication by `t^k`, keeping the truncation.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.coeffs.len();
        let mut coeffs = vec![BigUint::zero(); n];
        if k < n {
            coeffs[k..].clone_from_slice(&self.coeffs[..n - k]);
        }
        TruncatedSeries { coeffs }
    }

    /// Pointwise product on the common truncation.
    pub fn hadamard(&self, other: &Self) -> Self {
        let trunc = self.trunc().min(other.trunc());
        TruncatedSeries {
            coeffs: (0..=trunc).map(|n| &self.coeffs[n] * &other.coeffs[n]).collect(),
        }
    }

    /// Pointwise maximum on the common truncation.
    pub fn max(&self, other: &Self) -> Self {
        let trunc = self.trunc().min(other.trunc());
        TruncatedSeries {
            coeffs: (0..=trunc)
                .map(|n| self.coeffs[n].clone().max(other.coeffs[n].clone()))
                .collect(),
        }
    }

    /// `a_n <= b_n` for every `n` up to the common truncation.
    pub fn leq(&self, other: &Self) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }

    /// Natural log of `c_n`, from the bit length plus the leading 64 bits.
    pub fn coeff_log(&self, n: usize) -> Result<f64> {
        let c = self
            .coeffs
            .get(n)
            .ok_or_else(|| Error::invalid(format!("degree {n} beyond truncation {}", self.trunc())))?;
        big_ln(c).ok_or_else(|| Error::invalid(format!("coefficient at degree {n} is zero")))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// CSV rows `n,coeff` with a header line.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["n", "coeff"])?;
        for (n, c) in self.coeffs.iter().enumerate() {
            out.write_record([n.to_string(), c.to_str_radix(10)])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Serializes a big integer as a decimal string.
pub fn ser_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

/// `ln(x)` for `x >= 1`; `None` for zero.
pub fn big_ln(x: &BigUint) -> Option<f64> {
    if x.is_zero() {
        return None;
    }
    let bits = x.bits();
    if bits <= 64 {
        return Some((x.to_u64()? as f64).ln());
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64()?;
    Some((top as f64).ln() + shift as f64 * LN_2)
}

pub(crate) fn apply_factor(coeffs: &mut [BigUint], kind: GeneratorKind, d: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::invalid("generator degree must be positive"));
    }
    let n = coeffs.len();
    let d = match usize::try_from(d) {
        Ok(d) if d < n => d,
        _ => return Ok(()),
    };
    match kind {
        GeneratorKind::Polynomial => prefix_sum(coeffs, d),
        GeneratorKind::Exterior => {
            for i in (d..n).rev() {
                let (lo, hi) = coeffs.split_at_mut(i);
                hi[0] += &lo[i - d];
            }
        }
        GeneratorKind::Truncated(k) => {
            if k < 2 {
                return Err(Error::invalid(format!("truncation order {k} must be at least 2")));
            }
            prefix_sum(coeffs, d);
            // y = a/(1-t^d) satisfies y_i >= y_{i-dk}, so the subtraction stays
            // nonnegative.
            if let Some(span) = d.checked_mul(k as usize).filter(|&s| s < n) {
                for i in (span..n).rev() {
                    let (lo, hi) = coeffs.split_at_mut(i);
                    hi[0] -= &lo[i - span];
                }
            }
        }
    }
    Ok(())
}

fn prefix_sum(coeffs: &mut [BigUint], stride: usize) {
    for i in stride..coeffs.len() {
        let (lo, hi) = coeffs.split_at_mut(i);
        hi[0] += &lo[i - stride];
    }
}
