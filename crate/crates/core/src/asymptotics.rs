//! Growth constants, ratio profiles against `log(n)^k`, and the exact integer
//! inequalities that bracket the cumulative ranks of the size-model algebras.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{hilbert, hilbert_cumulative, tensor_bracket, AlgebraSpec};
use crate::error::{Error, Result};
use crate::number::is_prime;
use crate::presets::{max_h, max_over_h, preset, PresetId, PresetParams};
use crate::series::{big_ln, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

pub fn constants(p: u64) -> Result<Constants> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("p = {p} is not prime")));
    }
    let l2 = (p as f64).ln().powi(2);
    Ok(Constants {
        k1: 2.0 / (75.0 * l2),
        k2: (9.0 + 4.0 * 2f64.sqrt()) / (294.0 * l2),
        k3: 1.0 / (6.0 * l2),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub n: u64,
    pub log_rank: f64,
    pub log_n_pow_k: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioProfile {
    pub label: String,
    pub exponent: u32,
    pub rows: Vec<RatioRow>,
}

impl RatioProfile {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for row in &self.rows {
            out.serialize(row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `ln cumrank(spec, n) / ln(n)^k` at each of `points`.
pub fn ratio_profile(spec: &AlgebraSpec, exponent: u32, points: &[u64]) -> Result<RatioProfile> {
    check_points(points)?;
    let cum = hilbert_cumulative(spec, *points.last().unwrap())?;
    ratio_profile_of_cumulative(spec.label.clone(), &cum, exponent, points)
}

fn check_points(points: &[u64]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::invalid("no points requested"));
    }
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("points must be strictly increasing"));
    }
    if points[0] < 2 {
        return Err(Error::invalid("points must be >= 2 so that ln(n) > 0"));
    }
    Ok(())
}

/// Same as [`ratio_profile`] for an already computed cumulative series.
pub fn ratio_profile_of_cumulative(
    label: String,
    cum: &TruncatedSeries,
    exponent: u32,
    points: &[u64],
) -> Result<RatioProfile> {
    check_points(points)?;
    let rows = points
        .iter()
        .map(|&n| {
            if n as usize > cum.trunc() {
                return Err(Error::invalid(format!("point {n} beyond truncation {}", cum.trunc())));
            }
            let log_rank = big_ln(cum.coeff(n as usize))
                .ok_or_else(|| Error::invalid(format!("cumulative rank is zero at n = {n}")))?;
            let log_n_pow_k = (n as f64).ln().powi(exponent as i32);
            Ok(RatioRow {
                n,
                log_rank,
                log_n_pow_k,
                ratio: log_rank / log_n_pow_k,
            })
        })
        .collect::<Result<_>>()?;
    Ok(RatioProfile { label, exponent, rows })
}

/// Parses a point list such as `2^6..2^16`, `10,20,40` or `3^2..3^5,300`.
pub fn parse_points(expr: &str) -> Result<Vec<u64>> {
    let bad = || Error::invalid(format!("cannot parse points `{expr}`"));
    let atom = |s: &str| -> Result<(Option<u64>, u64)> {
        let s = s.trim();
        match s.split_once('^') {
            Some((b, e)) => {
                let b: u64 = b.trim().parse().map_err(|_| bad())?;
                let e: u32 = e.trim().parse().map_err(|_| bad())?;
                Ok((Some(b), u64::from(e)))
            }
            None => Ok((None, s.parse().map_err(|_| bad())?)),
        }
    };
    let value = |(b, e): (Option<u64>, u64)| -> Result<u64> {
        match b {
            Some(b) => b.checked_pow(e as u32).ok_or_else(bad),
            None => Ok(e),
        }
    };
    let mut out = Vec::new();
    for part in expr.split(',') {
        match part.split_once("..") {
            Some((lo, hi)) => match (atom(lo)?, atom(hi)?) {
                ((Some(b1), e1), (Some(b2), e2)) if b1 == b2 => {
                    for e in e1..=e2 {
                        out.push(value((Some(b1), e))?);
                    }
                }
                ((None, a), (None, b)) => out.extend(a..=b),
                _ => return Err(bad()),
            },
            None => out.push(value(atom(part)?)?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketModel {
    MayModel,
    RHE2,
    RHEinf,
}

impl FromStr for BracketModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "may_model" => Ok(BracketModel::MayModel),
            "r_h_e2" => Ok(BracketModel::RHE2),
            "r_h_einf" => Ok(BracketModel::RHEinf),
            _ => Err(Error::invalid(format!(
                "unknown bracketing model `{s}` (expected may_model, r_h_e2 or r_h_einf)"
            ))),
        }
    }
}

impl fmt::Display for BracketModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BracketModel::MayModel => "may_model",
            BracketModel::RHE2 => "r_h_e2",
            BracketModel::RHEinf => "r_h_einf",
        })
    }
}

/// Which halves of the `may_model` bracket to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketParts {
    Upper,
    Lower,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BracketConfig {
    pub parts: BracketParts,
    /// Largest truncation the lower `may_model` check may use.
    pub ceiling: u64,
}

impl Default for BracketConfig {
    fn default() -> Self {
        BracketConfig {
            parts: BracketParts::Both,
            ceiling: 1 << 21,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketLine {
    pub name: String,
    pub lhs: String,
    pub relation: &'static str,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketReport {
    pub p: u64,
    pub m: u32,
    pub model: BracketModel,
    pub ok: bool,
    pub checks: Vec<BracketLine>,
    pub skipped: Vec<String>,
}

fn line(
    name: String,
    lhs: impl fmt::Display,
    relation: &'static str,
    rhs: impl fmt::Display,
    holds: bool,
) -> BracketLine {
    BracketLine {
        name,
        lhs: lhs.to_string(),
        relation,
        rhs: rhs.to_string(),
        holds,
    }
}

fn pow_big(p: u64, e: u64) -> BigUint {
    BigUint::from(p).pow(u32::try_from(e).expect("exponent fits in u32"))
}

fn scale_degree(p: u64, m: u32) -> Result<u64> {
    p.checked_pow(m)
        .ok_or_else(|| Error::ResourceGuard(format!("{p}^{m} overflows")))
}

/// `prod_{i=1}^{m-1} p^{(m-i) i}`.
fn may_model_product(p: u64, m: u32) -> BigUint {
    let e: u64 = (1..u64::from(m)).map(|i| (u64::from(m) - i) * i).sum();
    pow_big(p, e)
}

/// Checks the exact inequalities behind the growth estimates for `model` at
/// scale `m`.
pub fn bracketing_check(p: u64, m: u32, model: BracketModel, config: &BracketConfig) -> Result<BracketReport> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("p = {p} is not prime")));
    }
    if m == 0 {
        return Err(Error::invalid("scale m must be >= 1"));
    }
    let top = scale_degree(p, m)? - 1;
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    match model {
        BracketModel::MayModel => {
            let spec = preset(PresetId::MayModel, &PresetParams::new(p))?;
            let bound = may_model_product(p, m);
            let choose2 = u64::from(m) * u64::from(m.saturating_sub(1)) / 2;
            let low_trunc = choose2
                .checked_mul(top)
                .ok_or_else(|| Error::ResourceGuard("lower-check truncation overflows".into()))?;
            let want_upper = config.parts != BracketParts::Lower;
            let mut want_lower = config.parts != BracketParts::Upper;
            if want_lower && low_trunc > config.ceiling {
                if config.parts == BracketParts::Lower {
                    return Err(Error::ResourceGuard(format!(
                        "lower check needs truncation {low_trunc}, above the ceiling {}",
                        config.ceiling
                    )));
                }
                skipped.push(format!(
                    "lower: truncation {low_trunc} exceeds ceiling {}",
                    config.ceiling
                ));
                want_lower = false;
            }
            let reach = if want_lower { low_trunc.max(top) } else { top };
            let cum = hilbert_cumulative(&spec, reach)?;
            if want_upper {
                let lhs = cum.coeff(top as usize);
                checks.push(line(format!("cumrank(R, {top})"), lhs, "<=", &bound, *lhs <= bound));
            }
            if want_lower {
                let lhs = cum.coeff(low_trunc as usize);
                checks.push(line(
                    format!("cumrank(R, {low_trunc})"),
                    lhs,
                    ">=",
                    &bound,
                    *lhs >= bound,
                ));
            }
        }
        BracketModel::RHEinf => {
            let best = max_over_h(PresetId::RHEinf, p, top)?;
            let lnp = (p as f64).ln();
            let mf = f64::from(m);
            let ln_rank = big_ln(best.series.coeff(top as usize)).unwrap_or(0.0);
            let rhs = 2.0 * lnp / 75.0 * mf.powi(3) + lnp * mf * mf;
            checks.push(line(
                format!(
                    "ln max_h cumrank(R^h, {top}) [argmax h = {}]",
                    best.argmax[top as usize]
                ),
                format!("{ln_rank:.6}"),
                "<=",
                format!("{rhs:.6}"),
                ln_rank <= rhs,
            ));
            for h in 1..=max_h(p, top) {
                let spec = preset(PresetId::RHEinf, &PresetParams::new(p).h(h))?;
                let cum = hilbert_cumulative(&spec, top)?;
                let e: u64 = (1..u64::from(h))
                    .map(|i| i * (i64::from(m) - i64::from(h) - i as i64).max(0) as u64)
                    .sum();
                let bound = pow_big(p, e);
                let lhs = cum.coeff(top as usize);
                checks.push(line(format!("cumrank(R^{h}, {top})"), lhs, "<=", &bound, *lhs <= bound));
                if h + 1 >= m {
                    let trivial = cum.coeffs().iter().all(|c| *c == BigUint::from(1u32));
                    checks.push(line(
                        format!("R^{h} trivial through {top}"),
                        trivial,
                        "==",
                        true,
                        trivial,
                    ));
                }
            }
        }
        BracketModel::RHE2 => {
            let full = scale_degree(p, m)?;
            let one = PresetParams::new(p);
            let s0 = hilbert_cumulative(&preset(PresetId::SK, &one.clone().k(0))?, full)?;
            let per_h: Vec<Vec<BracketLine>> = (1..=m.div_ceil(2))
                .into_par_iter()
                .map(|h| -> Result<Vec<BracketLine>> {
                    let mut out = Vec::new();
                    let r = preset(PresetId::RHE2, &one.clone().h(h))?;
                    let parts: Vec<AlgebraSpec> = (h..2 * h)
                        .map(|i| preset(PresetId::SK, &one.clone().k(i)))
                        .collect::<Result<_>>()?;
                    let tensor = AlgebraSpec::tensor(&parts)?;
                    let same = hilbert(&r, full)? == hilbert(&tensor, full)?;
                    out.push(line(
                        format!(
                            "hilbert(R^{h}) vs hilbert(S^{h} ⊗ ... ⊗ S^{}) through {full}",
                            2 * h - 1
                        ),
                        same,
                        "==",
                        true,
                        same,
                    ));
                    let tb = tensor_bracket(&parts, &vec![full; parts.len()])?;
                    out.push(line(
                        format!("prod_i cumrank(S^i, {full}) vs cumrank(R^{h}, {})", full * u64::from(h)),
                        &tb.lower,
                        "<=",
                        &tb.lower_target,
                        tb.lower <= tb.lower_target,
                    ));
                    out.push(line(
                        format!("cumrank(R^{h}, {full}) vs prod_i cumrank(S^i, {full})"),
                        &tb.middle,
                        "<=",
                        &tb.upper,
                        tb.middle <= tb.upper,
                    ));
                    for (i, part) in (h..2 * h).zip(&parts) {
                        let lhs = hilbert_cumulative(part, full)?.coeff(full as usize).clone();
                        let rhs = s0.coeff(scale_degree(p, m - i)? as usize).clone();
                        let holds = lhs == rhs;
                        out.push(line(
                            format!("cumrank(S^{i}, {full}) vs cumrank(S^0, {p}^{})", m - i),
                            lhs,
                            "==",
                            rhs,
                            holds,
                        ));
                    }
                    Ok(out)
                })
                .collect::<Result<_>>()?;
            checks.extend(per_h.into_iter().flatten());
        }
    }
    let ok = checks.iter().all(|c| c.holds);
    Ok(BracketReport {
        p,
        m,
        model,
        ok,
        checks,
        skipped,
    })
}
