//! Workloads shared by the benchmarks.

use stemsize_core::{preset, AlgebraSpec, PresetId, PresetParams, TruncatedSeries};

pub fn may_e1() -> AlgebraSpec {
    preset(PresetId::MayE1, &PresetParams::new(2).drop_q0()).expect("may_e1 preset")
}

/// A dense series of length `n + 1` with small varying coefficients.
pub fn dense_series(n: usize) -> TruncatedSeries {
    let coeffs: Vec<u64> = (0..=n as u64).map(|i| 1 + i % 7).collect();
    TruncatedSeries::from_u64s(&coeffs).expect("nonempty")
}
