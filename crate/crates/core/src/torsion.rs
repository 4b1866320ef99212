//! Torsion-exponent bounds: stable bounds from a vanishing curve, the
//! image-of-J lower bound, the integral size bound, and the unstable
//! exponents of Barratt, Goodwillie and the norm map.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::cumrank;
use crate::error::{Error, Result};
use crate::number::{self, is_prime, log_p, primes_up_to};
use crate::presets::{preset, PresetId, PresetParams};

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("p = {p} is not prime")))
    }
}

/// `p`-adic valuation of `m >= 1`.
pub fn val_p(p: u64, m: u64) -> Result<u32> {
    check_prime(p)?;
    number::val_p(m, p).ok_or_else(|| Error::invalid("valuation of 0 is undefined"))
}

/// Exponent of `p`-torsion in the Adams–Novikov E2 term in stem `2u - s`.
///
/// `None` for `u = 0`, where the unit makes the group non-torsion.
pub fn an_e2_exponent(p: u64, u: i64) -> Result<Option<u32>> {
    check_prime(p)?;
    if u == 0 {
        return Ok(None);
    }
    let a = u.unsigned_abs();
    let v = number::val_p(a, p).expect("nonzero");
    Ok(Some(if p == 2 {
        if a % 2 == 1 {
            1
        } else {
            2 + v
        }
    } else if !a.is_multiple_of(p - 1) {
        0
    } else {
        1 + v
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Counting {
    pub exact: u64,
    pub bound: f64,
}

/// `sum_{i=a+1}^{b} (1 + |i|_p)` and its bound `p/(p-1) (b-a) + log_p b`.
pub fn counting_lemma(p: u64, a: u64, b: u64) -> Result<Counting> {
    check_prime(p)?;
    if a >= b {
        return Err(Error::invalid(format!("need a < b, got a = {a}, b = {b}")));
    }
    let exact = (a + 1..=b).map(|i| 1 + u64::from(number::val_p(i, p).unwrap())).sum();
    let bound = p as f64 / (p - 1) as f64 * (b - a) as f64 + log_p(b, p);
    Ok(Counting { exact, bound })
}

/// Model of the E∞ vanishing curve `g(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum VanishingCurve {
    Linear,
    /// `ceil(coefficient * n^exponent)`.
    PowerLaw {
        exponent: f64,
        coefficient: f64,
    },
    /// `values[n - 1]`.
    Table {
        values: Vec<u64>,
    },
}

impl VanishingCurve {
    pub fn sqrt() -> Self {
        VanishingCurve::PowerLaw {
            exponent: 0.5,
            coefficient: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            VanishingCurve::Linear => Ok(()),
            VanishingCurve::PowerLaw { exponent, coefficient } => {
                if !(*exponent > 0.0 && *exponent <= 1.0) {
                    return Err(Error::invalid(format!("power-law exponent {exponent} not in (0, 1]")));
                }
                if !(*coefficient > 0.0 && coefficient.is_finite()) {
                    return Err(Error::invalid(format!(
                        "power-law coefficient {coefficient} not positive"
                    )));
                }
                Ok(())
            }
            VanishingCurve::Table { values } => {
                if values.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::invalid("vanishing-curve table is not nondecreasing"));
                }
                Ok(())
            }
        }
    }

    /// `g(n)`, checked against `1 <= g(n) <= n`.
    pub fn eval(&self, n: u64) -> Result<u64> {
        self.validate()?;
        let g = match self {
            VanishingCurve::Linear => n,
            VanishingCurve::PowerLaw { exponent, coefficient } => {
                let x = if *exponent == 0.5 {
                    (n as f64).sqrt()
                } else {
                    (n as f64).powf(*exponent)
                };
                (coefficient * x).ceil() as u64
            }
            VanishingCurve::Table { values } => *n
                .checked_sub(1)
                .and_then(|i| values.get(i as usize))
                .ok_or_else(|| Error::invalid(format!("vanishing-curve table has no entry for n = {n}")))?,
        };
        if g < 1 || g > n {
            return Err(Error::invalid(format!(
                "vanishing curve gives g({n}) = {g}, outside [1, {n}]"
            )));
        }
        Ok(g)
    }
}

impl fmt::Display for VanishingCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VanishingCurve::Linear => write!(f, "linear"),
            VanishingCurve::PowerLaw { exponent, coefficient } => write!(f, "ceil({coefficient}*n^{exponent})"),
            VanishingCurve::Table { values } => write!(f, "table[{}]", values.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionReport {
    pub p: u64,
    pub n: u64,
    pub g: u64,
    pub exact_sum: u64,
    pub closed_form: f64,
    pub curve: VanishingCurve,
}

/// Upper bound on the exponent of `p`-torsion in the `n`-th stable stem.
pub fn stable_torsion_bound(p: u64, n: u64, curve: &VanishingCurve) -> Result<TorsionReport> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::invalid("stable_torsion_bound needs n >= 1"));
    }
    let g = curve.eval(n)?;
    let (exact_sum, closed_form) = if p == 2 {
        let sum = (n / 2 + 1..=(n + g) / 2)
            .map(|i| 1 + u64::from(number::val_p(i, 2).unwrap()) + u64::from(i % 2 == 0))
            .sum();
        (sum, 1.25 * g as f64 + log_p(n, 2) + 2.0)
    } else {
        let w = 2 * p - 2;
        let sum = (n / w + 1..=(n + g) / w)
            .map(|i| 1 + u64::from(number::val_p(i, p).unwrap()))
            .sum();
        let pf = p as f64;
        (sum, pf / (2.0 * (pf - 1.0).powi(2)) * g as f64 + log_p(n, p) + 1.0)
    };
    Ok(TorsionReport {
        p,
        n,
        g,
        exact_sum,
        closed_form,
        curve: curve.clone(),
    })
}

/// Exponent of the image-of-J summand in stem `n` at an odd prime.
pub fn im_j_lower(p: u64, n: u64) -> Result<u32> {
    check_prime(p)?;
    if p == 2 {
        return Err(Error::invalid(
            "im_j_lower is only defined for odd primes; the 2-primary image of J has a different pattern",
        ));
    }
    if (n + 1).is_multiple_of(2 * p - 2) {
        Ok(number::val_p(n + 1, p).unwrap() + 1)
    } else {
        Ok(0)
    }
}

/// Upper bound on `rank_p` of the stems through degree `n`.
pub trait RankModel: Sync {
    fn rank(&self, p: u64, n: u64) -> Result<f64>;
}

/// Cumulative rank of the May E1-page with `q_0` dropped.
#[derive(Clone, Copy, Debug, Default)]
pub struct MayE1Rank;

impl RankModel for MayE1Rank {
    fn rank(&self, p: u64, n: u64) -> Result<f64> {
        let spec = preset(PresetId::MayE1, &PresetParams::new(p).drop_q0())?;
        let r = cumrank(&spec, n)?;
        Ok(crate::series::big_ln(&r).map_or(0.0, f64::exp))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConstantRank(pub f64);

impl RankModel for ConstantRank {
    fn rank(&self, _p: u64, _n: u64) -> Result<f64> {
        Ok(self.0)
    }
}

/// `sum_{p <= n} ln(p) * n * rank(p, n)`, an upper bound on `ln |pi_n S|`.
pub fn integral_log_bound(n: u64, model: &dyn RankModel) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("integral_log_bound needs n >= 1"));
    }
    let mut total = 0.0;
    for p in primes_up_to(n) {
        total += (p as f64).ln() * n as f64 * model.rank(p, n)?;
    }
    Ok(total)
}

/// Barratt's exponent bound for `pi_n` of a suspension whose identity has
/// order `p^m`, with `X` being `(s-1)`-connected.
pub fn barratt_bound(s: u64, m: u64, n: u64, p: u64, double_suspension: bool) -> Result<u64> {
    check_prime(p)?;
    if s == 0 || n == 0 {
        return Err(Error::invalid("barratt_bound needs s >= 1 and n >= 1"));
    }
    let n = u128::from(n);
    let mut k = 0u64;
    if double_suspension {
        let mut reach = u128::from(p) * u128::from(s);
        while n > reach {
            reach *= u128::from(p);
            k += 1;
        }
        Ok(m + k)
    } else {
        let mut reach = u128::from(s);
        while n > reach {
            reach *= 2;
            k += 1;
        }
        Ok(m * k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Goodwillie {
    pub exact: u64,
    pub linear: f64,
}

/// `sum_{k >= 1, sk < n} (m + v_p(k))` and its linear bound `(m+1) n / s`.
pub fn goodwillie_bound(s: u64, m: u64, n: u64, p: u64) -> Result<Goodwillie> {
    check_prime(p)?;
    if s == 0 {
        return Err(Error::invalid("goodwillie_bound needs s >= 1"));
    }
    let exact = (1..)
        .take_while(|&k| s * k < n)
        .map(|k| m + u64::from(number::val_p(k, p).unwrap()))
        .sum();
    let linear = (m + 1) as f64 * n as f64 / s as f64;
    Ok(Goodwillie { exact, linear })
}

/// Torsion exponent of the norm map on an `n`-fold smash power.
pub fn norm_torsion_order(p: u64, m: u64, n: u64) -> Result<u64> {
    Ok(m + u64::from(val_p(p, n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_val(p: u64, mut m: u64) -> u32 {
        let mut v = 0;
        while m.is_multiple_of(p) {
            m /= p;
            v += 1;
        }
        v
    }

    #[test]
    fn valuations() {
        assert_eq!(val_p(2, 8).unwrap(), 3);
        assert_eq!(val_p(3, 7).unwrap(), 0);
        assert_eq!(val_p(5, 50).unwrap(), 2);
        assert!(val_p(2, 0).is_err());
        assert!(val_p(4, 8).is_err());
    }

    #[test]
    fn an_e2() {
        assert_eq!(an_e2_exponent(3, 5).unwrap(), Some(0));
        assert_eq!(an_e2_exponent(3, 6).unwrap(), Some(2));
        assert_eq!(an_e2_exponent(2, 8).unwrap(), Some(5));
        assert_eq!(an_e2_exponent(2, 7).unwrap(), Some(1));
        assert_eq!(an_e2_exponent(5, 0).unwrap(), None);
    }

    #[test]
    fn counting_examples() {
        assert_eq!(counting_lemma(2, 0, 4).unwrap(), Counting { exact: 7, bound: 10.0 });
        assert_eq!(counting_lemma(3, 2, 3).unwrap(), Counting { exact: 2, bound: 2.5 });
        assert_eq!(counting_lemma(2, 0, 1).unwrap(), Counting { exact: 1, bound: 2.0 });
        assert!(counting_lemma(2, 3, 3).is_err());
    }

    #[test]
    fn stable_examples() {
        let r = stable_torsion_bound(2, 16, &VanishingCurve::Linear).unwrap();
        assert_eq!((r.exact_sum, r.closed_form), (20, 26.0));
        let r = stable_torsion_bound(3, 48, &VanishingCurve::Linear).unwrap();
        assert_eq!(r.exact_sum, 17);
        assert!((r.closed_form - 22.5237).abs() < 1e-3, "{}", r.closed_form);
        let r = stable_torsion_bound(2, 1, &VanishingCurve::Linear).unwrap();
        assert_eq!((r.exact_sum, r.closed_form), (1, 3.25));
    }

    #[test]
    fn stable_term_by_term() {
        let n = 16;
        let want: u64 = (9..=16)
            .map(|i: u64| 1 + u64::from(brute_val(2, i)) + u64::from(i.is_multiple_of(2)))
            .sum();
        assert_eq!(
            stable_torsion_bound(2, n, &VanishingCurve::Linear).unwrap().exact_sum,
            want
        );
    }

    #[test]
    fn curves() {
        assert_eq!(VanishingCurve::sqrt().eval(16).unwrap(), 4);
        assert_eq!(VanishingCurve::sqrt().eval(17).unwrap(), 5);
        let t = VanishingCurve::Table { values: vec![1, 1, 2] };
        assert_eq!(t.eval(3).unwrap(), 2);
        assert!(t.eval(4).is_err());
        assert!(VanishingCurve::Table { values: vec![2] }.eval(1).is_err());
        assert!(VanishingCurve::Table { values: vec![2, 1] }.eval(2).is_err());
        let bad = VanishingCurve::PowerLaw {
            exponent: 1.5,
            coefficient: 1.0,
        };
        assert!(bad.eval(4).is_err());
        let json = serde_json::to_string(&VanishingCurve::sqrt()).unwrap();
        assert_eq!(
            serde_json::from_str::<VanishingCurve>(&json).unwrap(),
            VanishingCurve::sqrt()
        );
    }

    #[test]
    fn im_j() {
        assert_eq!(im_j_lower(3, 3).unwrap(), 1);
        assert_eq!(im_j_lower(3, 11).unwrap(), 2);
        assert_eq!(im_j_lower(3, 4).unwrap(), 0);
        assert_eq!(im_j_lower(5, 7).unwrap(), 1);
        assert!(im_j_lower(2, 3).unwrap_err().to_string().contains("odd"));
    }

    #[test]
    fn integral() {
        assert_eq!(integral_log_bound(1, &ConstantRank(1.0)).unwrap(), 0.0);
        assert_eq!(integral_log_bound(10, &ConstantRank(0.0)).unwrap(), 0.0);
        let want: f64 = [2.0f64, 3.0, 5.0, 7.0].iter().map(|p| 10.0 * p.ln()).sum();
        assert!((integral_log_bound(10, &ConstantRank(1.0)).unwrap() - want).abs() < 1e-9);
        let mut prev = 0.0;
        for n in 1..30 {
            let v = integral_log_bound(n, &MayE1Rank).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn barratt() {
        assert_eq!(barratt_bound(2, 1, 8, 2, false).unwrap(), 2);
        assert_eq!(barratt_bound(1, 1, 1, 2, false).unwrap(), 0);
        assert_eq!(barratt_bound(1, 2, 9, 3, true).unwrap(), 3);
        assert_eq!(barratt_bound(1, 2, 3, 3, true).unwrap(), 2);
        assert_eq!(barratt_bound(1, 2, 4, 3, true).unwrap(), 3);
    }

    #[test]
    fn goodwillie() {
        // k = 1, 2, 3 contribute 1 + 2 + 1.
        assert_eq!(
            goodwillie_bound(1, 1, 4, 2).unwrap(),
            Goodwillie { exact: 4, linear: 8.0 }
        );
        assert_eq!(
            goodwillie_bound(4, 1, 4, 2).unwrap(),
            Goodwillie { exact: 0, linear: 2.0 }
        );
        assert_eq!(
            goodwillie_bound(1, 0, 9, 3).unwrap(),
            Goodwillie { exact: 2, linear: 9.0 }
        );
    }

    #[test]
    fn norm_order() {
        assert_eq!(norm_torsion_order(2, 1, 2).unwrap(), 2);
        assert_eq!(norm_torsion_order(3, 4, 7).unwrap(), 4);
        assert_eq!(norm_torsion_order(2, 1, 8).unwrap(), 4);
    }
}
