//! Acceptance criteria. Run with `--nocapture` to see one PASS/FAIL line each.

use std::fmt::Display;
use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stemsize_core::asymptotics::{bracketing_check, ratio_profile, BracketConfig, BracketModel, BracketParts};
use stemsize_core::ehp::{a_series, admissible_series, verify_ehp_recurrence};
use stemsize_core::torsion::{
    an_e2_exponent, counting_lemma, goodwillie_bound, norm_torsion_order, stable_torsion_bound, VanishingCurve,
};
use stemsize_core::verify::{oracle_budget, random_spec};
use stemsize_core::{hilbert, hilbert_cumulative, oracle_hilbert, preset, PresetId, PresetParams};

fn report(id: u32, title: &str, failures: &[String], detail: impl Display) {
    let tag = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("{tag} criterion {id} ({title}): {detail}");
    for f in failures.iter().take(5) {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {id} failed: {}", failures.join("; "));
}

#[test]
fn criterion_01_oracle_equivalence() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut windows = 0;
    for i in 0..200 {
        let spec = random_spec(&mut rng, 12);
        let n = oracle_budget(&spec, 40, 2_000_000).unwrap();
        windows += n;
        if hilbert(&spec, n).unwrap() != oracle_hilbert(&spec, n).unwrap() {
            failures.push(format!("random spec {i} at N = {n}"));
        }
    }
    let mut presets = vec![
        (PresetId::DualSteenrod, PresetParams::new(2)),
        (PresetId::MayE1, PresetParams::new(2).drop_q0()),
    ];
    presets.extend((1..=3).map(|h| (PresetId::RHE2, PresetParams::new(2).h(h))));
    for (id, params) in &presets {
        let spec = preset(*id, params).unwrap();
        for n in [10, 25, 40] {
            if hilbert(&spec, n).unwrap() != oracle_hilbert(&spec, n).unwrap() {
                failures.push(format!("{id} {params:?} at N = {n}"));
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= 60.0 {
        failures.push(format!("took {secs:.1} s"));
    }
    report(
        1,
        "oracle equivalence",
        &failures,
        format!(
            "200 random specs (mean N {:.1}) and {} presets, {secs:.2} s",
            windows as f64 / 200.0,
            presets.len()
        ),
    );
}

#[test]
fn criterion_02_basis_counts() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (p, n) in [(2, 60), (3, 40)] {
        let dual = hilbert(&preset(PresetId::DualSteenrod, &PresetParams::new(p)).unwrap(), n).unwrap();
        if admissible_series(p, n).unwrap() != dual {
            failures.push(format!("p = {p}, N = {n}"));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= 30.0 {
        failures.push(format!("took {secs:.1} s"));
    }
    report(
        2,
        "admissible basis vs dual Steenrod",
        &failures,
        format!("p = 2 to 60, p = 3 to 40, {secs:.2} s"),
    );
}

#[test]
fn criterion_03_ehp_recurrences() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for p in [2, 3] {
        for n in 1..=20 {
            if !verify_ehp_recurrence(p, n, 100).unwrap() {
                failures.push(format!("p = {p}, n = {n}"));
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= 120.0 {
        failures.push(format!("took {secs:.1} s"));
    }
    report(
        3,
        "EHP recurrences",
        &failures,
        format!("p in {{2, 3}}, n <= 20, N = 100, {secs:.2} s"),
    );
}

#[test]
fn criterion_04_unstable_below_admissible() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (p, lo) in [(2, 2), (3, 3)] {
        let adm = admissible_series(p, 80).unwrap();
        for n in lo..=10 {
            let a = a_series(p, n, 80).unwrap();
            if let Some(d) = (0..=80).find(|&d| a.coeff(d) > adm.coeff(d)) {
                failures.push(format!(
                    "p = {p}, n = {n}: A_{d} = {} > P_{d} = {}",
                    a.coeff(d),
                    adm.coeff(d)
                ));
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= 120.0 {
        failures.push(format!("took {secs:.1} s"));
    }
    let detail = format!("{} of 17 excess values fail, {secs:.2} s", failures.len());
    report(4, "A(n;t) <= P(A;t)", &failures, detail);
}

fn val(p: u64, mut i: u64) -> u64 {
    let mut v = 0;
    while i.is_multiple_of(p) {
        i /= p;
        v += 1;
    }
    v
}

#[test]
fn criterion_05_torsion_chain() {
    const TOP: u64 = 10_000;
    let t = Instant::now();
    let mut failures = Vec::new();
    let curves = [VanishingCurve::Linear, VanishingCurve::sqrt()];
    for p in [2u64, 3, 5] {
        for curve in &curves {
            for n in 1..=TOP {
                let r = stable_torsion_bound(p, n, curve).unwrap();
                if r.exact_sum as f64 > r.closed_form {
                    failures.push(format!(
                        "stable p = {p}, n = {n}, {curve}: {} > {}",
                        r.exact_sum, r.closed_form
                    ));
                }
            }
        }
        // Every pair through prefix sums; the library is called at the pair
        // with the least slack for each b.
        let mut prefix = vec![0u64; TOP as usize + 1];
        for i in 1..=TOP {
            prefix[i as usize] = prefix[i as usize - 1] + 1 + val(p, i);
        }
        let slope = p as f64 / (p - 1) as f64;
        let mut tight = 0;
        for b in 1..=TOP {
            let logb = (b as f64).ln() / (p as f64).ln();
            for a in 0..b {
                let exact = prefix[b as usize] - prefix[a as usize];
                let bound = slope * (b - a) as f64 + logb;
                if exact as f64 > bound {
                    failures.push(format!("counting p = {p}, a = {a}, b = {b}: {exact} > {bound}"));
                }
            }
            let surplus = |i: u64| prefix[i as usize] as f64 - slope * i as f64;
            if surplus(b - 1) > surplus(tight) {
                tight = b - 1;
            }
            let c = counting_lemma(p, tight, b).unwrap();
            if c.exact != prefix[b as usize] - prefix[tight as usize] || c.exact as f64 > c.bound {
                failures.push(format!("counting_lemma({p}, {tight}, {b}) = {c:?}"));
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= 60.0 {
        failures.push(format!("took {secs:.1} s"));
    }
    report(
        5,
        "torsion chain",
        &failures,
        format!("n, b <= {TOP}, p in {{2, 3, 5}}, {secs:.2} s"),
    );
}

#[test]
fn criterion_06_brackets() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let upper = BracketConfig {
        parts: BracketParts::Upper,
        ..BracketConfig::default()
    };
    let lower = BracketConfig {
        parts: BracketParts::Lower,
        ..BracketConfig::default()
    };
    let mut runs = vec![];
    runs.extend((1..=18).map(|m| (2, m, BracketModel::MayModel, upper)));
    runs.extend((1..=11).map(|m| (3, m, BracketModel::MayModel, upper)));
    runs.extend((1..=8).map(|m| (2, m, BracketModel::MayModel, lower)));
    runs.extend((1..=12).map(|m| (2, m, BracketModel::RHEinf, BracketConfig::default())));
    let mut lines = 0;
    for &(p, m, model, cfg) in &runs {
        let r = bracketing_check(p, m, model, &cfg).unwrap();
        lines += r.checks.len();
        if !r.ok || r.checks.is_empty() {
            let bad: Vec<_> = r.checks.iter().filter(|c| !c.holds).map(|c| c.name.clone()).collect();
            failures.push(format!(
                "{model} p = {p}, m = {m}, {:?}: {bad:?} skipped {:?}",
                cfg.parts, r.skipped
            ));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= 600.0 {
        failures.push(format!("took {secs:.1} s"));
    }
    report(
        6,
        "bracketing",
        &failures,
        format!("{} runs, {lines} comparisons, {secs:.2} s", runs.len()),
    );
}

#[test]
fn criterion_07_spot_values() {
    let mut failures = Vec::new();
    let mut expect = |what: &str, got: String, want: String| {
        if got != want {
            failures.push(format!("{what}: got {got}, want {want}"));
        }
    };
    for u in [1, 3, 5, 7, 9, 11, 101] {
        expect(
            &format!("an_e2_exponent(2, {u})"),
            format!("{:?}", an_e2_exponent(2, u).unwrap()),
            "Some(1)".into(),
        );
    }
    for (p, u, want) in [(2, 8, 5), (3, 5, 0), (3, 6, 2)] {
        expect(
            &format!("an_e2_exponent({p}, {u})"),
            format!("{:?}", an_e2_exponent(p, u).unwrap()),
            format!("{:?}", Some(want)),
        );
    }
    let r = stable_torsion_bound(2, 16, &VanishingCurve::Linear).unwrap();
    expect(
        "stable_torsion_bound(2, 16, linear)",
        format!("({}, {:?})", r.exact_sum, r.closed_form),
        "(20, 26.0)".into(),
    );
    let g = goodwillie_bound(1, 1, 4, 2).unwrap();
    expect(
        "goodwillie_bound(1, 1, 4, 2)",
        format!("({}, {:?})", g.exact, g.linear),
        "(5, 8.0)".into(),
    );
    expect(
        "norm_torsion_order(2, 1, 2)",
        norm_torsion_order(2, 1, 2).unwrap().to_string(),
        "2".into(),
    );
    let n = failures.len();
    report(7, "spot values", &failures, format!("{n} of 13 values differ"));
}

#[test]
fn criterion_08_s0_profile() {
    let t = Instant::now();
    let spec = preset(PresetId::SK, &PresetParams::new(2).k(0)).unwrap();
    let points: Vec<u64> = (6..=14).map(|m| 1u64 << m).collect();
    let profile = ratio_profile(&spec, 2, &points).unwrap();
    let hi = 1.0 / (2.0 * 2f64.ln());
    let mut failures = Vec::new();
    for row in &profile.rows {
        if !(row.ratio > 0.5 && row.ratio <= hi) {
            failures.push(format!("n = {}: ratio {:.6} outside (0.5, {hi:.6}]", row.n, row.ratio));
        }
    }
    let tail = &profile.rows[profile.rows.len() - 5..];
    for w in tail.windows(2) {
        if w[1].ratio < w[0].ratio {
            failures.push(format!(
                "decrease from n = {} ({:.6}) to n = {} ({:.6})",
                w[0].n, w[0].ratio, w[1].n, w[1].ratio
            ));
        }
    }
    let ratios: Vec<String> = profile.rows.iter().map(|r| format!("{:.5}", r.ratio)).collect();
    let secs = t.elapsed().as_secs_f64();
    report(
        8,
        "s_0 ratio profile",
        &failures,
        format!("ratios [{}], {secs:.2} s", ratios.join(", ")),
    );
}

fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

#[test]
fn criterion_09_performance() {
    let spec = preset(PresetId::MayE1, &PresetParams::new(2).drop_q0()).unwrap();
    let mut failures = Vec::new();
    let mut detail = Vec::new();
    for (n, gated) in [(1u64 << 18, true), (1 << 20, false)] {
        let t = Instant::now();
        let cum = hilbert_cumulative(&spec, n).unwrap();
        let secs = t.elapsed().as_secs_f64();
        let rss = peak_rss_kib();
        let mb = rss
            .map(|k| format!("{:.0} MB", k as f64 / 1024.0))
            .unwrap_or_else(|| "n/a".into());
        detail.push(format!(
            "N = 2^{}: {secs:.2} s, peak {mb}, {} digits",
            n.trailing_zeros(),
            cum.coeff(n as usize).to_string().len()
        ));
        if gated {
            if secs > 300.0 {
                failures.push(format!("N = {n} took {secs:.1} s"));
            }
            if rss.is_some_and(|k| k > 4 * 1024 * 1024) {
                failures.push(format!("N = {n} peak memory {mb}"));
            }
        }
    }
    report(9, "performance", &failures, detail.join("; "));
}

#[test]
fn criterion_10_determinism() {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_stemsize"))
            .args(["verify", "--suite", "all"])
            .output()
            .expect("run stemsize");
        (out.status.code(), String::from_utf8(out.stdout).unwrap())
    };
    let (code_a, first) = run();
    let (code_b, second) = run();
    let mut failures = Vec::new();
    if first != second || code_a != code_b {
        failures.push("reports differ between runs".to_string());
    }
    if first.is_empty() {
        failures.push("empty report".to_string());
    }
    let summary = first.lines().last().unwrap_or("").to_string();
    report(
        10,
        "determinism",
        &failures,
        format!("two runs identical, {summary}, exit {code_a:?}"),
    );
}
