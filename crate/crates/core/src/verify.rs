//! Self-check suites run by `stemsize verify`.
//!
//! Every randomized check draws from a ChaCha8 stream seeded by the caller,
//! and exhaustive scans reduce in a fixed order, so a given seed always yields
//! the same report.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{
    hilbert, hilbert_cumulative, instantiate, oracle_hilbert, parse_spec, print_spec, AlgebraSpec, DegreeExpr,
    GeneratorFamily, GeneratorKind, IndexRange,
};
use crate::asymptotics::{bracketing_check, constants, BracketConfig, BracketModel};
use crate::ehp::{a_series, admissible_series, verify_ehp_recurrence};
use crate::error::{Error, Result};
use crate::number::val_p;
use crate::presets::{preset, PresetId, PresetParams};
use crate::series::TruncatedSeries;
use crate::torsion::{
    an_e2_exponent, barratt_bound, counting_lemma, goodwillie_bound, stable_torsion_bound, VanishingCurve,
};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Series,
    Algebra,
    Presets,
    Torsion,
    Ehp,
    Asymptotics,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Series,
        Suite::Algebra,
        Suite::Presets,
        Suite::Torsion,
        Suite::Ehp,
        Suite::Asymptotics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Series => "series",
            Suite::Algebra => "algebra",
            Suite::Presets => "presets",
            Suite::Torsion => "torsion",
            Suite::Ehp => "ehp",
            Suite::Asymptotics => "asymptotics",
        }
    }
}

/// Parses a comma-separated list of suite names; `all` selects every suite.
pub fn parse_suites(names: &str) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for name in names.split(',').map(str::trim) {
        let picked = if name == "all" {
            Suite::ALL.to_vec()
        } else {
            vec![name.parse()?]
        };
        for s in picked {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}/{}: {}", c.suite.name(), c.name, c.detail)?;
        }
        writeln!(f, "passed {}/{}", self.passed(), self.checks.len())
    }
}

struct Sink {
    suite: Suite,
    checks: Vec<Check>,
}

impl Sink {
    fn push(&mut self, name: &str, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check {
            suite: self.suite,
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

/// Runs `suites` with the given seed. Each suite gets its own stream derived
/// from the seed so adding checks to one suite leaves the others unchanged.
pub fn run(suites: &[Suite], seed: u64) -> Report {
    let mut checks = Vec::new();
    for &suite in suites {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (suite as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut sink = Sink {
            suite,
            checks: Vec::new(),
        };
        match suite {
            Suite::Series => series_suite(&mut sink, &mut rng),
            Suite::Algebra => algebra_suite(&mut sink, &mut rng),
            Suite::Presets => presets_suite(&mut sink),
            Suite::Torsion => torsion_suite(&mut sink),
            Suite::Ehp => ehp_suite(&mut sink),
            Suite::Asymptotics => asymptotics_suite(&mut sink),
        }
        checks.extend(sink.checks);
    }
    Report { seed, checks }
}

fn tally(name: &str, total: usize, failures: Vec<String>) -> (bool, String) {
    if failures.is_empty() {
        (true, format!("{total} cases"))
    } else {
        let first = failures.first().cloned().unwrap_or_default();
        (
            false,
            format!("{name}: {} of {total} failed, first: {first}", failures.len()),
        )
    }
}

pub fn random_series<R: Rng>(rng: &mut R, max_trunc: usize) -> TruncatedSeries {
    let n = rng.gen_range(0..=max_trunc);
    let coeffs = (0..=n)
        .map(|_| match rng.gen_range(0..4) {
            0 => BigUint::default(),
            1 => {
                let bytes: Vec<u8> = (0..rng.gen_range(1..24)).map(|_| rng.gen()).collect();
                BigUint::from_bytes_le(&bytes)
            }
            _ => BigUint::from(rng.gen_range(0u32..1000)),
        })
        .collect();
    TruncatedSeries::from_coeffs(coeffs).expect("nonempty")
}

fn series_suite(sink: &mut Sink, rng: &mut ChaCha8Rng) {
    let cases: Vec<(TruncatedSeries, TruncatedSeries, TruncatedSeries)> = (0..200)
        .map(|_| (random_series(rng, 24), random_series(rng, 24), random_series(rng, 24)))
        .collect();
    sink.push(
        "mul-commutative-associative",
        Ok(tally(
            "mul",
            cases.len(),
            cases
                .iter()
                .enumerate()
                .filter(|(_, (a, b, c))| a.mul(b) != b.mul(a) || a.mul(b).mul(c) != a.mul(&b.mul(c)))
                .map(|(i, _)| format!("case {i}"))
                .collect(),
        )),
    );
    sink.push(
        "distributive",
        Ok(tally(
            "distributive",
            cases.len(),
            cases
                .iter()
                .enumerate()
                .filter(|(_, (a, b, c))| a.mul(&b.add(c)) != a.mul(b).add(&a.mul(c)))
                .map(|(i, _)| format!("case {i}"))
                .collect(),
        )),
    );
    sink.push(
        "cumulative-is-all-ones-product",
        Ok(tally(
            "cumulative",
            cases.len(),
            cases
                .iter()
                .enumerate()
                .filter(|(_, (a, _, _))| a.cumulative() != a.mul(&TruncatedSeries::all_ones(a.trunc())))
                .map(|(i, _)| format!("case {i}"))
                .collect(),
        )),
    );
    let mut failures = Vec::new();
    let mut total = 0;
    for (i, (a, _, _)) in cases.iter().enumerate().take(60) {
        for d in 1..6u64 {
            for kind in [
                GeneratorKind::Polynomial,
                GeneratorKind::Exterior,
                GeneratorKind::Truncated(3),
            ] {
                total += 1;
                let mut explicit = vec![0u64; a.trunc() + 1];
                let cap = kind.max_exponent().unwrap_or(u64::MAX);
                let mut e = 0u64;
                while e <= cap && (e * d) as usize <= a.trunc() {
                    explicit[(e * d) as usize] = 1;
                    e += 1;
                }
                let f = TruncatedSeries::from_u64s(&explicit).unwrap();
                if a.mul_factor(kind, d).ok() != Some(a.mul(&f)) {
                    failures.push(format!("case {i}, {kind:?}, d = {d}"));
                }
            }
        }
    }
    sink.push("factor-matches-explicit-product", Ok(tally("factor", total, failures)));
    let failures = cases
        .iter()
        .enumerate()
        .filter(|(_, (a, _, _))| TruncatedSeries::from_json(&a.to_json().unwrap()).ok().as_ref() != Some(a))
        .map(|(i, _)| format!("case {i}"))
        .collect();
    sink.push("json-round-trip", Ok(tally("json", cases.len(), failures)));
}

/// A random spec whose generators all sit in degrees `1..=max_degree`.
pub fn random_spec<R: Rng>(rng: &mut R, max_degree: i64) -> AlgebraSpec {
    let p = *[2u64, 3, 5].choose(rng).unwrap();
    let mut spec = AlgebraSpec::empty(p);
    let int = |v: i64| Box::new(DegreeExpr::Int(v));
    let var = |s: &str| Box::new(DegreeExpr::Var(s.into()));
    for _ in 0..rng.gen_range(0..=5) {
        let kind = match rng.gen_range(0..3) {
            0 => GeneratorKind::Polynomial,
            1 => GeneratorKind::Exterior,
            _ => GeneratorKind::Truncated(rng.gen_range(2..=4)),
        };
        let multiplicity = DegreeExpr::Int(rng.gen_range(1..=2));
        let family = match rng.gen_range(0..3) {
            0 => GeneratorFamily {
                kind,
                degree: DegreeExpr::Int(rng.gen_range(1..=max_degree)),
                multiplicity,
                ranges: vec![],
            },
            1 => {
                // a*i + b for i = 1..r, kept inside the degree cap.
                let a = rng.gen_range(1..=3);
                let b = rng.gen_range(0..=3);
                let r = ((max_degree - b) / a).clamp(1, 4);
                GeneratorFamily {
                    kind,
                    degree: DegreeExpr::Add(Box::new(DegreeExpr::Mul(int(a), var("i"))), int(b)),
                    multiplicity,
                    ranges: vec![IndexRange {
                        name: "i".into(),
                        lower: 1,
                        upper: Some(r),
                    }],
                }
            }
            _ => {
                // p^i + j over a small box.
                let mut top = 0;
                while (p as i64).pow(top + 1) < max_degree {
                    top += 1;
                }
                GeneratorFamily {
                    kind,
                    degree: DegreeExpr::Add(
                        Box::new(DegreeExpr::Pow(Box::new(DegreeExpr::Prime), var("i"))),
                        var("j"),
                    ),
                    multiplicity: DegreeExpr::Int(1),
                    ranges: vec![
                        IndexRange {
                            name: "i".into(),
                            lower: 0,
                            upper: Some(i64::from(top)),
                        },
                        IndexRange {
                            name: "j".into(),
                            lower: 0,
                            upper: Some(1),
                        },
                    ],
                }
            }
        };
        spec.families.push(family);
    }
    spec
}

/// Largest truncation `<= cap` keeping the oracle's monomial count modest.
pub fn oracle_budget(spec: &AlgebraSpec, cap: u64, max_monomials: u64) -> Result<u64> {
    let cum = hilbert_cumulative(spec, cap)?;
    let limit = BigUint::from(max_monomials);
    Ok((0..=cap).rev().find(|&n| *cum.coeff(n as usize) <= limit).unwrap_or(0))
}

fn algebra_suite(sink: &mut Sink, rng: &mut ChaCha8Rng) {
    let specs: Vec<AlgebraSpec> = (0..60).map(|_| random_spec(rng, 12)).collect();
    let outcome = (|| {
        let mut failures = Vec::new();
        for (i, s) in specs.iter().enumerate() {
            let n = oracle_budget(s, 40, 200_000)?;
            if hilbert(s, n)? != oracle_hilbert(s, n)? {
                failures.push(format!("spec {i} at N = {n}"));
            }
        }
        Ok(tally("oracle", specs.len(), failures))
    })();
    sink.push("hilbert-equals-oracle", outcome);
    let failures = specs
        .iter()
        .enumerate()
        .filter(|(_, s)| parse_spec(&print_spec(s)).map(|t| t.families) != Ok(s.families.clone()))
        .map(|(i, _)| format!("spec {i}"))
        .collect();
    sink.push("print-parse-round-trip", Ok(tally("round trip", specs.len(), failures)));
}

/// Generators of a catalog algebra through degree `max_degree` by direct
/// index loops, as sorted `(degree, kind, multiplicity)` triples.
pub fn catalog_degrees(id: PresetId, params: &PresetParams, max_degree: u64) -> Vec<(u64, GeneratorKind, u64)> {
    use GeneratorKind::{Exterior as E, Polynomial as P};
    let p = u128::from(params.p);
    let top = u128::from(max_degree);
    let pw = |e: u32| p.pow(e);
    let mut out: Vec<(u64, GeneratorKind, u64)> = Vec::new();
    let mut put = |deg: u128, kind: GeneratorKind, mult: u64| {
        if deg >= 1 && deg <= top && mult > 0 {
            out.push((deg as u64, kind, mult));
        }
    };
    let h = params.h.unwrap_or(1);
    // Largest exponent worth scanning.
    let mut emax = 0u32;
    while pw(emax) <= 4 * top + 4 {
        emax += 1;
    }
    let q_lo = u32::from(params.drop_q0);
    match id {
        PresetId::MayE1 if params.p == 2 => {
            for i in 1..=emax {
                for j in 0..=emax {
                    if params.drop_q0 && i == 1 && j == 0 {
                        continue;
                    }
                    put(pw(i + j) - pw(j) - 1, P, 1);
                }
            }
        }
        PresetId::MayE1 => {
            for i in q_lo..=emax {
                put(2 * pw(i) - 2, P, 1);
            }
            for i in 1..=emax {
                for j in 0..=emax {
                    let hd = 2 * pw(i + j) - 2 * pw(j) - 1;
                    if params.simplify_odd {
                        put(hd, P, 1);
                    } else {
                        put(hd, E, 1);
                        put(2 * pw(i + j + 1) - 2 * pw(j + 1) - 2, P, 1);
                    }
                }
            }
        }
        PresetId::MayModel => {
            for n in 1..=emax {
                put(pw(n), P, u64::from(n));
            }
        }
        PresetId::DualSteenrod => {
            for n in 1..=emax {
                if params.p == 2 {
                    put(pw(n) - 1, P, 1);
                } else {
                    put(2 * (pw(n) - 1), P, 1);
                }
            }
            if params.p != 2 {
                for n in 0..=emax {
                    put(2 * pw(n) - 1, E, 1);
                }
            }
        }
        PresetId::SK => {
            for n in params.k.unwrap_or(0)..=emax {
                put(pw(n), P, 1);
            }
        }
        PresetId::RHE2 => {
            for n in h..=emax {
                put(pw(n), P, u64::from(h.min(n - h + 1)));
            }
        }
        PresetId::RHEinf => {
            for k in 1..h {
                put(pw(h + k), P, u64::from(k));
            }
        }
        PresetId::YHLifted => {
            for i in h + 1..=emax {
                for j in 0..h {
                    put(12 * pw(1 + i + j) - 10 * pw(1 + i - h + j) - 2 * pw(1 + j) - 2, P, 1);
                }
            }
        }
        PresetId::MrsE2Model => {
            for k in h + 1..=2 * h {
                put(2 * pw(k) - 2, P, 1);
            }
            for i in h + 1..=emax {
                for j in 0..h {
                    let hd = 2 * pw(i + j) - 2 * pw(j) - 1;
                    if params.p == 2 {
                        put(hd, P, 1);
                    } else {
                        put(hd, E, 1);
                        put(2 * pw(1 + i + j) - 2 * pw(j + 1) - 2, P, 1);
                    }
                }
            }
        }
        PresetId::YnConj => {
            for i in 0..=h {
                put(2 * pw(h + i) - 2, P, 1);
            }
            for j in 1..h {
                put(12 * pw(h + 1 + j), P, u64::from(j));
            }
        }
        PresetId::QPoly => {
            for i in q_lo..=emax {
                put(2 * pw(i) - 2, P, 1);
            }
        }
    }
    out.sort();
    out
}

/// The same triples read off [`instantiate`].
pub fn instantiated_degrees(spec: &AlgebraSpec, max_degree: u64) -> Result<Vec<(u64, GeneratorKind, u64)>> {
    let mut v: Vec<_> = instantiate(spec, max_degree)?
        .into_iter()
        .map(|g| (g.degree, g.kind, g.multiplicity))
        .collect();
    v.sort();
    Ok(v)
}

/// Parameter sets exercised by the catalog checks.
pub fn catalog_cases() -> Vec<(PresetId, PresetParams)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        let base = PresetParams::new(p);
        out.push((PresetId::MayE1, base.clone().drop_q0()));
        if p != 2 {
            out.push((PresetId::MayE1, base.clone().drop_q0().simplify_odd()));
        }
        out.push((PresetId::MayModel, base.clone()));
        out.push((PresetId::DualSteenrod, base.clone()));
        out.push((PresetId::QPoly, base.clone().drop_q0()));
        for k in 0..3 {
            out.push((PresetId::SK, base.clone().k(k)));
        }
        for h in 1..=4 {
            for id in [
                PresetId::RHE2,
                PresetId::RHEinf,
                PresetId::YHLifted,
                PresetId::MrsE2Model,
                PresetId::YnConj,
            ] {
                out.push((id, base.clone().h(h)));
            }
        }
    }
    out
}

fn presets_suite(sink: &mut Sink) {
    let cases = catalog_cases();
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(id, params)| {
            let ok = preset(*id, params)
                .and_then(|s| instantiated_degrees(&s, 10_000))
                .map(|got| got == catalog_degrees(*id, params, 10_000));
            match ok {
                Ok(true) => None,
                Ok(false) => Some(format!("{id} {params:?}")),
                Err(e) => Some(format!("{id} {params:?}: {e}")),
            }
        })
        .collect();
    sink.push(
        "catalog-matches-direct-enumeration",
        Ok(tally("catalog", cases.len(), failures)),
    );

    sink.push(
        "admissible-equals-dual-steenrod",
        (|| {
            let mut failures = Vec::new();
            for (p, n) in [(2u64, 60u64), (3, 60), (5, 60)] {
                let dual = hilbert(&preset(PresetId::DualSteenrod, &PresetParams::new(p))?, n)?;
                if admissible_series(p, n)? != dual {
                    failures.push(format!("p = {p}"));
                }
            }
            Ok(tally("basis", 3, failures))
        })(),
    );

    sink.push(
        "simplify-odd-dominates",
        (|| {
            let mut failures = Vec::new();
            for p in [3u64, 5] {
                let exact = hilbert(&preset(PresetId::MayE1, &PresetParams::new(p).drop_q0())?, 2000)?;
                let simple = hilbert(
                    &preset(PresetId::MayE1, &PresetParams::new(p).drop_q0().simplify_odd())?,
                    2000,
                )?;
                if !exact.leq(&simple) {
                    failures.push(format!("p = {p}"));
                }
            }
            Ok(tally("dominance", 2, failures))
        })(),
    );

    sink.push(
        "y-h-lifted-positive",
        (|| {
            let mut total = 0;
            for p in [2u64, 3, 5] {
                for h in 1..=4 {
                    // instantiate rejects any nonpositive degree outright.
                    total += instantiate(&preset(PresetId::YHLifted, &PresetParams::new(p).h(h))?, 100_000)?.len();
                }
            }
            Ok((true, format!("{total} generators")))
        })(),
    );
}

fn torsion_suite(sink: &mut Sink) {
    const LIMIT: u64 = 10_000;
    sink.push(
        "counting-lemma-exhaustive",
        (|| {
            let mut failures = Vec::new();
            let mut total = 0u64;
            for p in [2u64, 3, 5] {
                // prefix[b] = sum_{i<=b} (1 + |i|_p)
                let mut prefix = vec![0u64; LIMIT as usize + 1];
                for i in 1..=LIMIT as usize {
                    prefix[i] = prefix[i - 1] + 1 + u64::from(val_p(i as u64, p).unwrap());
                }
                for (a, b) in [(0, 4), (2, 3), (17, 900)] {
                    if counting_lemma(p, a, b)?.exact != prefix[b as usize] - prefix[a as usize] {
                        failures.push(format!("p = {p}: exact sum mismatch at ({a}, {b})"));
                    }
                }
                let lnp = (p as f64).ln();
                let ratio = p as f64 / (p - 1) as f64;
                let bad: Vec<String> = (1..=LIMIT)
                    .into_par_iter()
                    .flat_map_iter(|b| {
                        let logb = crate::number::log_p(b, p);
                        let prefix = &prefix;
                        (0..b).filter_map(move |a| {
                            let exact = prefix[b as usize] - prefix[a as usize];
                            let bound = ratio * (b - a) as f64 + logb;
                            (exact as f64 > bound).then(|| format!("p = {p}, a = {a}, b = {b}"))
                        })
                    })
                    .collect();
                let _ = lnp;
                total += LIMIT * (LIMIT + 1) / 2;
                failures.extend(bad);
            }
            Ok(tally("counting", total as usize, failures))
        })(),
    );

    sink.push(
        "stable-bound-exhaustive",
        (|| {
            let mut failures = Vec::new();
            let mut total = 0;
            for p in [2u64, 3, 5] {
                for curve in [VanishingCurve::Linear, VanishingCurve::sqrt()] {
                    for n in 1..=LIMIT {
                        total += 1;
                        let r = stable_torsion_bound(p, n, &curve)?;
                        if r.exact_sum as f64 > r.closed_form {
                            failures.push(format!("p = {p}, n = {n}, {curve}"));
                        }
                    }
                }
            }
            Ok(tally("stable", total, failures))
        })(),
    );

    sink.push(
        "stable-local-growth",
        (|| {
            let mut failures = Vec::new();
            let mut total = 0;
            for p in [2u64, 3, 5] {
                let w = 2 * p - 2;
                for n in 1..=LIMIT {
                    total += 1;
                    let here = stable_torsion_bound(p, n, &VanishingCurve::Linear)?.exact_sum;
                    let next = stable_torsion_bound(p, n + w, &VanishingCurve::Linear)?.exact_sum;
                    let lo = n / w + 1;
                    let hi = (2 * (n + w)) / w;
                    let vmax = (lo..=hi).map(|i| val_p(i, p).unwrap()).max().unwrap_or(0);
                    let slack = 1 + u64::from(vmax) + u64::from(p == 2);
                    if here > next + slack {
                        failures.push(format!("p = {p}, n = {n}"));
                    }
                }
            }
            Ok(tally("local growth", total, failures))
        })(),
    );

    sink.push(
        "goodwillie-linear",
        (|| {
            let mut failures = Vec::new();
            let mut total = 0;
            for p in [2u64, 3, 5] {
                for s in 1..=8u64 {
                    for m in 0..=3u64 {
                        let mut exact = 0u64;
                        for n in 1..=LIMIT {
                            // Adding n extends the range sk < n by k = (n-1)/s when s | n-1.
                            if n > 1 && (n - 1) % s == 0 {
                                exact += m + u64::from(val_p((n - 1) / s, p).unwrap());
                            }
                            total += 1;
                            let linear = (m + 1) as f64 * n as f64 / s as f64;
                            if exact as f64 > linear {
                                failures.push(format!("s = {s}, m = {m}, n = {n}, p = {p}"));
                            }
                        }
                        let direct = goodwillie_bound(s, m, LIMIT, p)?.exact;
                        if direct != exact {
                            failures.push(format!("incremental sum mismatch s = {s}, m = {m}, p = {p}"));
                        }
                    }
                }
            }
            Ok(tally("goodwillie", total, failures))
        })(),
    );

    sink.push("an-e2-zero-fraction", {
        let mut failures = Vec::new();
        for p in [3u64, 5, 7] {
            let zeros = (1..=LIMIT as i64)
                .filter(|&u| an_e2_exponent(p, u).map(|e| e == Some(0)).unwrap_or(false))
                .count() as u64;
            let expected = LIMIT - LIMIT / (p - 1);
            if zeros != expected {
                failures.push(format!("p = {p}: {zeros} zeros, expected {expected}"));
            }
        }
        Ok(tally("an_e2", 3, failures))
    });

    sink.push(
        "barratt-monotone",
        (|| {
            let mut failures = Vec::new();
            let mut total = 0;
            for p in [2u64, 3] {
                for double in [false, true] {
                    for m in 1..=3 {
                        for s in 1..=8 {
                            for n in 1..=200 {
                                total += 1;
                                let here = barratt_bound(s, m, n, p, double)?;
                                if barratt_bound(s, m, n + 1, p, double)? < here
                                    || barratt_bound(s + 1, m, n, p, double)? > here
                                {
                                    failures.push(format!("s = {s}, m = {m}, n = {n}, p = {p}, double = {double}"));
                                }
                            }
                        }
                    }
                }
            }
            Ok(tally("barratt", total, failures))
        })(),
    );
}

/// Sequences `(j_1, ..., j_k)` with `j_k >= n - 1` and `j_s > 2 j_{s+1} + 1`,
/// counted by `sum j_s`.
fn shifted_counts(n: u64, max_dim: u64) -> Vec<u64> {
    fn go(lo: u64, dim: u64, max_dim: u64, counts: &mut [u64]) {
        counts[dim as usize] += 1;
        let mut j = lo;
        while dim + j <= max_dim {
            go(2 * j + 2, dim + j, max_dim, counts);
            j += 1;
        }
    }
    let mut counts = vec![0u64; max_dim as usize + 1];
    go(n - 1, 0, max_dim, &mut counts);
    counts
}

fn ehp_suite(sink: &mut Sink) {
    sink.push(
        "recurrences",
        (|| {
            let cases: Vec<(u64, u64)> = [2u64, 3].iter().flat_map(|&p| (1..=20).map(move |n| (p, n))).collect();
            let results: Vec<Result<bool>> = cases
                .par_iter()
                .map(|&(p, n)| verify_ehp_recurrence(p, n, 100))
                .collect();
            let mut failures = Vec::new();
            for ((p, n), r) in cases.iter().zip(results) {
                if !r? {
                    failures.push(format!("p = {p}, n = {n}"));
                }
            }
            Ok(tally("recurrence", cases.len(), failures))
        })(),
    );
    for (name, p, lo) in [
        ("a-series-below-admissible-p2", 2u64, 2u64),
        ("a-series-below-admissible-p3", 3, 3),
    ] {
        sink.push(
            name,
            (|| {
                let adm = admissible_series(p, 80)?;
                let mut failures = Vec::new();
                for n in lo..=10 {
                    let a = a_series(p, n, 80)?;
                    if let Some(d) = (0..=80).find(|&d| a.coeff(d) > adm.coeff(d)) {
                        failures.push(format!("n = {n}: A_{d} = {} > P_{d} = {}", a.coeff(d), adm.coeff(d)));
                    }
                }
                Ok(tally("A <= P", (11 - lo) as usize, failures))
            })(),
        );
    }
    sink.push(
        "shift-bijection",
        (|| {
            let mut failures = Vec::new();
            for n in 1..=6 {
                let want = TruncatedSeries::from_u64s(&shifted_counts(n, 30))?;
                if a_series(2, n, 30)? != want {
                    failures.push(format!("n = {n}"));
                }
            }
            Ok(tally("shift", 6, failures))
        })(),
    );
    sink.push(
        "a-series-monotone-in-n",
        (|| {
            let mut failures = Vec::new();
            for p in [2u64, 3] {
                for n in 2..=12 {
                    if !a_series(p, n, 60)?.leq(&a_series(p, n - 1, 60)?) {
                        failures.push(format!("p = {p}, n = {n}"));
                    }
                }
            }
            Ok(tally("monotone", 22, failures))
        })(),
    );
}

fn asymptotics_suite(sink: &mut Sink) {
    sink.push(
        "constants-ordered",
        (|| {
            let mut failures = Vec::new();
            for p in [2u64, 3, 5, 7] {
                let c = constants(p)?;
                if !(c.k1 < c.k2 && c.k2 < c.k3) {
                    failures.push(format!("p = {p}"));
                }
            }
            Ok(tally("constants", 4, failures))
        })(),
    );
    let cfg = BracketConfig::default();
    let cases: Vec<(u64, u32, BracketModel)> = [
        (2u64, 1..=12u32, BracketModel::MayModel),
        (3, 1..=8, BracketModel::MayModel),
        (2, 1..=10, BracketModel::RHEinf),
        (3, 1..=6, BracketModel::RHEinf),
        (2, 1..=9, BracketModel::RHE2),
        (3, 1..=5, BracketModel::RHE2),
    ]
    .into_iter()
    .flat_map(|(p, ms, model)| ms.map(move |m| (p, m, model)))
    .collect();
    let results: Vec<_> = cases
        .par_iter()
        .map(|&(p, m, model)| bracketing_check(p, m, model, &cfg))
        .collect();
    let mut failures = Vec::new();
    let mut err = None;
    for ((p, m, model), r) in cases.iter().zip(results) {
        match r {
            Ok(r) if r.ok => {}
            Ok(_) => failures.push(format!("{model} p = {p} m = {m}")),
            Err(e) => err = err.or(Some(e)),
        }
    }
    let outcome = match err {
        Some(e) => Err(e),
        None => Ok(tally("brackets", cases.len(), failures)),
    };
    sink.push("brackets", outcome);
}
