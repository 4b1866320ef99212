//! Catalog of named algebras.
//!
//! Each preset is written as DSL text and parsed, so every catalog entry can be
//! printed back out with [`crate::algebra::print_spec`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{hilbert_cumulative, parse_spec, AlgebraSpec};
use crate::error::{Error, Result};
use crate::number::{ceil_log, is_prime};
use crate::series::TruncatedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetId {
    MayE1,
    MayModel,
    DualSteenrod,
    SK,
    RHE2,
    RHEinf,
    YHLifted,
    MrsE2Model,
    YnConj,
    QPoly,
}

impl PresetId {
    pub const ALL: [PresetId; 10] = [
        PresetId::MayE1,
        PresetId::MayModel,
        PresetId::DualSteenrod,
        PresetId::SK,
        PresetId::RHE2,
        PresetId::RHEinf,
        PresetId::YHLifted,
        PresetId::MrsE2Model,
        PresetId::YnConj,
        PresetId::QPoly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetId::MayE1 => "may_e1",
            PresetId::MayModel => "may_model",
            PresetId::DualSteenrod => "dual_steenrod",
            PresetId::SK => "s_k",
            PresetId::RHE2 => "r_h_e2",
            PresetId::RHEinf => "r_h_einf",
            PresetId::YHLifted => "y_h_lifted",
            PresetId::MrsE2Model => "mrs_e2_model",
            PresetId::YnConj => "yn_conj",
            PresetId::QPoly => "q_poly",
        }
    }

    fn needs_h(self) -> bool {
        matches!(
            self,
            PresetId::RHE2 | PresetId::RHEinf | PresetId::YHLifted | PresetId::MrsE2Model | PresetId::YnConj
        )
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PresetId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| {
            let names: Vec<_> = PresetId::ALL.iter().map(|id| id.name()).collect();
            Error::invalid(format!("unknown preset `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresetParams {
    pub p: u64,
    pub h: Option<u32>,
    pub k: Option<u32>,
    pub drop_q0: bool,
    pub simplify_odd: bool,
}

impl PresetParams {
    pub fn new(p: u64) -> Self {
        PresetParams {
            p,
            h: None,
            k: None,
            drop_q0: false,
            simplify_odd: false,
        }
    }

    pub fn h(mut self, h: u32) -> Self {
        self.h = Some(h);
        self
    }

    pub fn k(mut self, k: u32) -> Self {
        self.k = Some(k);
        self
    }

    pub fn drop_q0(mut self) -> Self {
        self.drop_q0 = true;
        self
    }

    pub fn simplify_odd(mut self) -> Self {
        self.simplify_odd = true;
        self
    }
}

/// The catalog algebra `id` with parameters `params`.
pub fn preset(id: PresetId, params: &PresetParams) -> Result<AlgebraSpec> {
    let p = params.p;
    if !is_prime(p) {
        return Err(Error::invalid(format!("p = {p} is not prime")));
    }
    let h = if id.needs_h() {
        match params.h {
            Some(h) if h >= 1 => h,
            Some(h) => return Err(Error::invalid(format!("{id} needs h >= 1, got {h}"))),
            None => return Err(Error::invalid(format!("{id} needs a value for h"))),
        }
    } else {
        0
    };
    let mut src = format!("p = {p}\n");
    let mut line = |s: String| {
        src.push_str(&s);
        src.push('\n');
    };
    let q_lo = u32::from(params.drop_q0);
    match id {
        PresetId::MayE1 if p == 2 => {
            line("gen poly deg = p^(i+j) - p^j - 1 for i = 2..inf, j = 0..inf".into());
            let j_lo = u32::from(params.drop_q0);
            line(format!("gen poly deg = p^(1+j) - p^j - 1 for j = {j_lo}..inf"));
        }
        PresetId::MayE1 => {
            line(format!("gen poly deg = 2*p^i - 2 for i = {q_lo}..inf"));
            if params.simplify_odd {
                line("gen poly deg = 2*p^(i+j) - 2*p^j - 1 for i = 1..inf, j = 0..inf".into());
            } else {
                line("gen ext deg = 2*p^(i+j) - 2*p^j - 1 for i = 1..inf, j = 0..inf".into());
                line("gen poly deg = 2*p^(i+j+1) - 2*p^(j+1) - 2 for i = 1..inf, j = 0..inf".into());
            }
        }
        PresetId::MayModel => line("gen poly deg = p^n mult = n for n = 1..inf".into()),
        PresetId::DualSteenrod if p == 2 => line("gen poly deg = 2^n - 1 for n = 1..inf".into()),
        PresetId::DualSteenrod => {
            line("gen poly deg = 2*(p^n - 1) for n = 1..inf".into());
            line("gen ext deg = 2*p^n - 1 for n = 0..inf".into());
        }
        PresetId::SK => {
            let k = params.k.ok_or_else(|| Error::invalid("s_k needs a value for k"))?;
            line(format!("gen poly deg = p^n for n = {k}..inf"));
        }
        PresetId::RHE2 => line(format!(
            "gen poly deg = p^n mult = min({h}, n - {h} + 1) for n = {h}..inf"
        )),
        PresetId::RHEinf => line(format!("gen poly deg = p^({h} + k) mult = k for k = 1..{}", h - 1)),
        PresetId::YHLifted => line(format!(
            "gen poly deg = 12*p^(1+i+j) - 10*p^(1+i-{h}+j) - 2*p^(1+j) - 2 for i = {}..inf, j = 0..{}",
            h + 1,
            h - 1
        )),
        PresetId::MrsE2Model => {
            line(format!("gen poly deg = 2*p^k - 2 for k = {}..{}", h + 1, 2 * h));
            let kind = if p == 2 { "poly" } else { "ext" };
            line(format!(
                "gen {kind} deg = 2*p^(i+j) - 2*p^j - 1 for i = {}..inf, j = 0..{}",
                h + 1,
                h - 1
            ));
            if p != 2 {
                line(format!(
                    "gen poly deg = 2*p^(1+i+j) - 2*p^(j+1) - 2 for i = {}..inf, j = 0..{}",
                    h + 1,
                    h - 1
                ));
            }
        }
        PresetId::YnConj => {
            line(format!("gen poly deg = 2*p^({h}+i) - 2 for i = 0..{h}"));
            line(format!(
                "gen poly deg = 12*p^({}+j) mult = j for j = 1..{}",
                h + 1,
                h - 1
            ));
        }
        PresetId::QPoly => line(format!("gen poly deg = 2*p^i - 2 for i = {q_lo}..inf")),
    }
    let label = match (params.h, params.k) {
        (Some(h), _) if id.needs_h() => format!("{id}(p={p}, h={h})"),
        (_, Some(k)) if id == PresetId::SK => format!("s_{k}(p={p})"),
        _ => format!("{id}(p={p})"),
    };
    Ok(parse_spec(&src)?.with_label(label))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxOverH {
    pub series: TruncatedSeries,
    /// Smallest maximizing `h` for each degree.
    pub argmax: Vec<u32>,
}

/// Largest `h` considered by [`max_over_h`] at truncation `n`.
pub fn max_h(p: u64, n: u64) -> u32 {
    ceil_log(n, p) + 1
}

/// Coefficientwise maximum over `h` of the cumulative Hilbert series of the
/// `R^h` family.
pub fn max_over_h(family: PresetId, p: u64, max_degree: u64) -> Result<MaxOverH> {
    if !matches!(family, PresetId::RHE2 | PresetId::RHEinf) {
        return Err(Error::invalid(format!(
            "max_over_h takes r_h_e2 or r_h_einf, not {family}"
        )));
    }
    let hs: Vec<u32> = (1..=max_h(p, max_degree)).collect();
    let all: Vec<TruncatedSeries> = hs
        .par_iter()
        .map(|&h| hilbert_cumulative(&preset(family, &PresetParams::new(p).h(h))?, max_degree))
        .collect::<Result<_>>()?;
    let len = max_degree as usize + 1;
    let mut best: Vec<BigUint> = all[0].coeffs().to_vec();
    let mut argmax = vec![hs[0]; len];
    for (s, &h) in all.iter().zip(&hs).skip(1) {
        for n in 0..len {
            if s.coeff(n) > &best[n] {
                best[n] = s.coeff(n).clone();
                argmax[n] = h;
            }
        }
    }
    Ok(MaxOverH {
        series: TruncatedSeries::from_coeffs(best)?,
        argmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{hilbert, instantiate, oracle_hilbert};

    fn u(v: &[u64]) -> TruncatedSeries {
        TruncatedSeries::from_u64s(v).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for id in PresetId::ALL {
            assert_eq!(id.name().parse::<PresetId>().unwrap(), id);
        }
        assert!("may_e2".parse::<PresetId>().is_err());
    }

    #[test]
    fn may_e1_two_drop_q0() {
        let s = preset(PresetId::MayE1, &PresetParams::new(2).drop_q0()).unwrap();
        // h11 in degree 1, h20 in 2, h12 in 3.
        assert_eq!(hilbert(&s, 3).unwrap(), u(&[1, 1, 2, 3]));
        assert_eq!(oracle_hilbert(&s, 3).unwrap(), u(&[1, 1, 2, 3]));
    }

    #[test]
    fn may_e1_keeps_q0_in_degree_zero() {
        let s = preset(PresetId::MayE1, &PresetParams::new(2)).unwrap();
        assert!(instantiate(&s, 4).is_err());
        let s = preset(PresetId::QPoly, &PresetParams::new(3)).unwrap();
        assert!(instantiate(&s, 4).is_err());
    }

    #[test]
    fn dual_steenrod_two() {
        let s = preset(PresetId::DualSteenrod, &PresetParams::new(2)).unwrap();
        assert_eq!(hilbert(&s, 7).unwrap(), u(&[1, 1, 1, 2, 2, 2, 3, 4]));
    }

    #[test]
    fn r_h_einf_two_two() {
        let s = preset(PresetId::RHEinf, &PresetParams::new(2).h(2)).unwrap();
        assert_eq!(hilbert(&s, 8).unwrap(), u(&[1, 0, 0, 0, 0, 0, 0, 0, 1]));
        let s = preset(PresetId::RHEinf, &PresetParams::new(2).h(1)).unwrap();
        assert_eq!(hilbert(&s, 8).unwrap(), TruncatedSeries::one(8));
    }

    #[test]
    fn parameter_checks() {
        assert!(preset(PresetId::RHE2, &PresetParams::new(2)).is_err());
        assert!(preset(PresetId::RHE2, &PresetParams::new(2).h(0)).is_err());
        assert!(preset(PresetId::SK, &PresetParams::new(3)).is_err());
        assert!(preset(PresetId::DualSteenrod, &PresetParams::new(6)).is_err());
    }

    #[test]
    fn every_preset_prints_and_reparses() {
        for id in PresetId::ALL {
            for p in [2, 3] {
                let params = PresetParams::new(p).h(2).k(1).drop_q0();
                let s = preset(id, &params).unwrap();
                assert_eq!(parse_spec(&s.to_dsl()).unwrap().families, s.families, "{id}");
            }
        }
    }

    #[test]
    fn max_over_h_trivial_below_first_generator() {
        let m = max_over_h(PresetId::RHEinf, 2, 7).unwrap();
        assert_eq!(m.series, TruncatedSeries::all_ones(7));
        assert!(m.argmax.iter().all(|&h| h == 1));
    }

    #[test]
    fn max_over_h_r_h_e2_at_sixteen() {
        let m = max_over_h(PresetId::RHE2, 2, 16).unwrap();
        let h1 = hilbert_cumulative(&preset(PresetId::RHE2, &PresetParams::new(2).h(1)).unwrap(), 16).unwrap();
        let h2 = hilbert_cumulative(&preset(PresetId::RHE2, &PresetParams::new(2).h(2)).unwrap(), 16).unwrap();
        // Direct count: S^1 has partitions of <= 16 into 2,4,8,16.
        let s1 = oracle_hilbert(&preset(PresetId::SK, &PresetParams::new(2).k(1)).unwrap(), 16).unwrap();
        assert_eq!(h1, s1.cumulative());
        let want = h1.coeff(16).max(h2.coeff(16));
        assert_eq!(m.series.coeff(16), want);
        let expect_h = if h1.coeff(16) >= h2.coeff(16) { 1 } else { 2 };
        assert_eq!(m.argmax[16], expect_h);
        for h in 1..=max_h(2, 16) {
            let s = hilbert_cumulative(&preset(PresetId::RHE2, &PresetParams::new(2).h(h)).unwrap(), 16).unwrap();
            assert!(s.leq(&m.series));
        }
    }

    #[test]
    fn max_over_h_rejects_other_families() {
        assert!(max_over_h(PresetId::SK, 2, 4).is_err());
    }
}
