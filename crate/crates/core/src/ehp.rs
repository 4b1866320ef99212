//! Completely unadmissible sequences and the generating series built from them.
//!
//! `I(n)` is the set of completely unadmissible sequences of excess at least
//! `n`; `A(n;t)` counts them by dimension. Together with the admissible-basis
//! series `P(A;t)` these give upper bounds on unstable Ext and on the ranks of
//! unstable homotopy groups.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::One;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::number::is_prime;
use crate::presets::{preset, PresetId, PresetParams};
use crate::series::TruncatedSeries;

/// One term of a sequence. At `p = 2` the Bockstein flag is always 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuEntry {
    pub epsilon: u8,
    pub i: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CuSeq {
    pub p: u64,
    pub n: u64,
    pub entries: Vec<CuEntry>,
    pub dim: u64,
}

impl CuSeq {
    /// Recomputes the dimension from the entries.
    pub fn dimension(p: u64, entries: &[CuEntry]) -> u64 {
        entries.iter().map(|e| entry_dim(p, e.epsilon, e.i)).sum()
    }

    /// Checks the defining inequalities of `I(n)`.
    pub fn is_valid(&self) -> bool {
        let Some(last) = self.entries.last() else {
            return true;
        };
        let tail_ok = if self.p == 2 {
            last.i >= self.n
        } else {
            2 * last.i >= self.n
        };
        let chain_ok = self.entries.windows(2).all(|w| {
            if self.p == 2 {
                w[0].i > 2 * w[1].i
            } else {
                w[0].i + u64::from(w[1].epsilon) > self.p * w[1].i
            }
        });
        let eps_ok = self.p != 2 || self.entries.iter().all(|e| e.epsilon == 0);
        tail_ok && chain_ok && eps_ok && last.i >= 1 && self.dim == Self::dimension(self.p, &self.entries)
    }
}

impl Serialize for CuSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CuSeq", 4)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("n", &self.n)?;
        if self.p == 2 {
            let seq: Vec<u64> = self.entries.iter().map(|e| e.i).collect();
            st.serialize_field("seq", &seq)?;
        } else {
            let seq: Vec<(u8, u64)> = self.entries.iter().map(|e| (e.epsilon, e.i)).collect();
            st.serialize_field("seq", &seq)?;
        }
        st.serialize_field("dim", &self.dim)?;
        st.end()
    }
}

fn entry_dim(p: u64, epsilon: u8, i: u64) -> u64 {
    if p == 2 {
        i - 1
    } else {
        2 * (p - 1) * i - u64::from(epsilon) - 1
    }
}

fn check(p: u64, n: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("p = {p} is not prime")));
    }
    if n == 0 {
        return Err(Error::invalid("excess n must be >= 1"));
    }
    Ok(())
}

/// Smallest admissible value for the final term.
fn last_lower(p: u64, n: u64) -> u64 {
    if p == 2 {
        n
    } else {
        n.div_ceil(2).max(1)
    }
}

/// Depth-first walk from the last term towards the first. `visit` sees each
/// sequence (stored last-to-first) together with its dimension.
fn walk(p: u64, lo: u64, dim: u64, max_dim: u64, stack: &mut Vec<CuEntry>, visit: &mut dyn FnMut(&[CuEntry], u64)) {
    visit(stack, dim);
    let eps_range: &[u8] = if p == 2 { &[0] } else { &[0, 1] };
    let mut i = lo.max(1);
    loop {
        // Smallest dimension reachable with this `i`.
        let least = entry_dim(p, *eps_range.last().unwrap(), i);
        if dim + least > max_dim {
            break;
        }
        for &e in eps_range {
            let d = dim + entry_dim(p, e, i);
            if d > max_dim {
                continue;
            }
            let next_lo = if p == 2 { 2 * i + 1 } else { p * i - u64::from(e) + 1 };
            stack.push(CuEntry { epsilon: e, i });
            walk(p, next_lo, d, max_dim, stack, visit);
            stack.pop();
        }
        i += 1;
    }
}

/// Every `J` in `I(n)` with `dim(J) <= max_dim`, ordered by dimension and then
/// lexicographically.
pub fn enumerate_i(p: u64, n: u64, max_dim: u64) -> Result<Vec<CuSeq>> {
    check(p, n)?;
    let mut out = Vec::new();
    let mut stack = Vec::new();
    walk(p, last_lower(p, n), 0, max_dim, &mut stack, &mut |rev, dim| {
        out.push(CuSeq {
            p,
            n,
            entries: rev.iter().rev().copied().collect(),
            dim,
        });
    });
    out.sort_by(|a, b| match a.dim.cmp(&b.dim) {
        Ordering::Equal => a.entries.cmp(&b.entries),
        o => o,
    });
    Ok(out)
}

/// `A(n;t)` through degree `max_degree`.
pub fn a_series(p: u64, n: u64, max_degree: u64) -> Result<TruncatedSeries> {
    check(p, n)?;
    let mut counts = vec![0u64; max_degree as usize + 1];
    let mut stack = Vec::new();
    walk(p, last_lower(p, n), 0, max_degree, &mut stack, &mut |_, dim| {
        counts[dim as usize] += 1
    });
    TruncatedSeries::from_u64s(&counts)
}

/// Checks the EHP recurrence for `A(n;t)` through degree `max_degree`.
///
/// At `p = 2` this is `A(n) = A(n+1) + t^{n-1} A(2n+1)`. At odd `p`, odd
/// `n = 2m-1` gives `A(2m-1) = A(2m)` and even `n = 2m` gives
/// `A(2m) = A(2m+1) + t^{2(p-1)m-2} A(2pm) + t^{2(p-1)m-1} A(2pm+1)`.
pub fn verify_ehp_recurrence(p: u64, n: u64, max_degree: u64) -> Result<bool> {
    check(p, n)?;
    let a = |k: u64| a_series(p, k, max_degree);
    let n_trunc = max_degree as usize;
    let shifted = |s: TruncatedSeries, k: u64| -> TruncatedSeries {
        s.shift(usize::try_from(k).unwrap_or(usize::MAX).min(n_trunc + 1))
    };
    let rhs = if p == 2 {
        a(n + 1)?.add(&shifted(a(2 * n + 1)?, n - 1))
    } else if n % 2 == 1 {
        a(n + 1)?
    } else {
        let m = n / 2;
        let base = 2 * (p - 1) * m;
        a(n + 1)?
            .add(&shifted(a(2 * p * m)?, base - 2))
            .add(&shifted(a(2 * p * m + 1)?, base - 1))
    };
    Ok(a(n)? == rhs)
}

/// `P(A;t)`: admissible monomials of the mod `p` Steenrod algebra by degree.
pub fn admissible_series(p: u64, max_degree: u64) -> Result<TruncatedSeries> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("p = {p} is not prime")));
    }
    let n = max_degree as usize;
    // tail[d][i]: admissible tails whose first operation is Sq^i (or P^i), of
    // total degree d. cum[d][m] = sum_{j=1..m} tail[d][j].
    let mut tail = vec![vec![BigUint::default(); n + 1]; n + 1];
    let mut cum = vec![vec![BigUint::default(); n + 1]; n + 1];
    let lookup = |cum: &Vec<Vec<BigUint>>, d: usize, m: u64| -> BigUint {
        if m == 0 {
            BigUint::default()
        } else {
            cum[d][(m as usize).min(n)].clone()
        }
    };
    for d in 1..=n {
        #[allow(clippy::needless_range_loop)]
        for i in 1..=d {
            let iu = i as u64;
            let mut v = BigUint::default();
            if p == 2 {
                if d == i {
                    v += 1u32;
                } else {
                    v += lookup(&cum, d - i, iu / 2);
                }
            } else {
                let w = 2 * (p as usize - 1) * i;
                for e in 0..=1usize {
                    if w + e == d {
                        v += 1u32;
                    } else if w + e < d && iu >= e as u64 {
                        v += lookup(&cum, d - w - e, (iu - e as u64) / p);
                    }
                }
            }
            tail[d][i] = v;
        }
        let mut acc = BigUint::default();
        for m in 1..=n {
            acc += &tail[d][m];
            cum[d][m] = acc.clone();
        }
    }
    let mut coeffs = vec![BigUint::default(); n + 1];
    for (d, c) in coeffs.iter_mut().enumerate() {
        if p == 2 {
            *c = lookup(&cum, d, d as u64);
        } else {
            for e in 0..=1usize {
                if d >= e {
                    *c += lookup(&cum, d - e, (d - e) as u64);
                }
            }
        }
    }
    coeffs[0] += 1u32;
    if p != 2 && n >= 1 {
        coeffs[1] += 1u32;
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// Default stand-in for the stable Ext rank series: the May E1-page with `q_0`
/// dropped.
pub fn default_varpi_a(p: u64, max_degree: u64) -> Result<TruncatedSeries> {
    crate::algebra::hilbert(&preset(PresetId::MayE1, &PresetParams::new(p).drop_q0())?, max_degree)
}

/// `P(A;t) * varpi_A(t) * P(M;t)`.
pub fn unstable_ext_bound(
    p: u64,
    m_series: &TruncatedSeries,
    varpi_a: &TruncatedSeries,
    max_degree: u64,
) -> Result<TruncatedSeries> {
    let adm = admissible_series(p, max_degree)?;
    Ok(adm.mul(varpi_a).mul(m_series))
}

/// `2 * P(A;t) * varpi_A(t) * h(ΩX;t)`; coefficient `n` bounds the rank of
/// `pi_{n+1} X`.
pub fn unstable_rank_bound(
    p: u64,
    loops_homology: &TruncatedSeries,
    varpi_a: &TruncatedSeries,
    max_degree: u64,
) -> Result<TruncatedSeries> {
    if !loops_homology.coeff(0).is_one() {
        return Err(Error::invalid(format!(
            "loop-space homology must have c_0 = 1, got {}",
            loops_homology.coeff(0)
        )));
    }
    Ok(unstable_ext_bound(p, loops_homology, varpi_a, max_degree)?.scale(2))
}

/// Memo table for `A(n;t)` shared across threads.
#[derive(Debug, Default)]
pub struct ASeriesCache {
    inner: RwLock<HashMap<(u64, u64), TruncatedSeries>>,
}

impl ASeriesCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, p: u64, n: u64, max_degree: u64) -> Result<TruncatedSeries> {
        if let Some(s) = self.inner.read().expect("cache poisoned").get(&(p, n)) {
            if s.trunc() as u64 >= max_degree {
                return Ok(s.truncate(max_degree as usize));
            }
        }
        let fresh = a_series(p, n, max_degree)?;
        let mut w = self.inner.write().expect("cache poisoned");
        let slot = w.entry((p, n)).or_insert_with(|| fresh.clone());
        if slot.trunc() < fresh.trunc() {
            *slot = fresh.clone();
        }
        Ok(fresh)
    }

    pub fn len(&self) -> usize {
        self.inner.read().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::hilbert;

    fn u(v: &[u64]) -> TruncatedSeries {
        TruncatedSeries::from_u64s(v).unwrap()
    }

    fn two(seqs: &[CuSeq]) -> Vec<(Vec<u64>, u64)> {
        seqs.iter()
            .map(|s| (s.entries.iter().map(|e| e.i).collect(), s.dim))
            .collect()
    }

    #[test]
    fn enumerate_small() {
        let got = two(&enumerate_i(2, 1, 2).unwrap());
        assert_eq!(
            got,
            vec![(vec![], 0), (vec![1], 0), (vec![2], 1), (vec![3], 2), (vec![3, 1], 2)]
        );
        for n in 2..6 {
            assert_eq!(two(&enumerate_i(2, n, 0).unwrap()), vec![(vec![], 0)]);
        }
        let odd: Vec<(Vec<(u8, u64)>, u64)> = enumerate_i(3, 2, 4)
            .unwrap()
            .iter()
            .map(|s| (s.entries.iter().map(|e| (e.epsilon, e.i)).collect(), s.dim))
            .collect();
        assert_eq!(odd, vec![(vec![], 0), (vec![(1, 1)], 2), (vec![(0, 1)], 3)]);
    }

    #[test]
    fn enumerated_sequences_are_valid() {
        for (p, n) in [(2, 1), (2, 3), (3, 1), (3, 4), (5, 2)] {
            for s in enumerate_i(p, n, 40).unwrap() {
                assert!(s.is_valid(), "{s:?}");
            }
        }
    }

    #[test]
    fn a_series_examples() {
        assert_eq!(a_series(2, 1, 3).unwrap(), u(&[2, 1, 2, 2]));
        for n in 2..8 {
            assert_eq!(*a_series(2, n, 0).unwrap().coeff(0), BigUint::from(1u32));
        }
        let lhs = a_series(2, 2, 30).unwrap().add(&a_series(2, 3, 30).unwrap());
        assert_eq!(lhs, a_series(2, 1, 30).unwrap());
    }

    #[test]
    fn a_series_matches_enumeration() {
        for (p, n) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 3)] {
            let seqs = enumerate_i(p, n, 50).unwrap();
            let mut counts = vec![0u64; 51];
            for s in &seqs {
                counts[s.dim as usize] += 1;
            }
            assert_eq!(a_series(p, n, 50).unwrap(), u(&counts));
        }
    }

    #[test]
    fn recurrences() {
        for n in 1..=20 {
            assert!(verify_ehp_recurrence(2, n, 100).unwrap(), "p=2 n={n}");
            assert!(verify_ehp_recurrence(3, n, 100).unwrap(), "p=3 n={n}");
        }
        assert!(verify_ehp_recurrence(2, 1, 0).unwrap());
        assert!(verify_ehp_recurrence(5, 4, 120).unwrap());
    }

    #[test]
    fn admissible_examples() {
        assert_eq!(admissible_series(2, 7).unwrap(), u(&[1, 1, 1, 2, 2, 2, 3, 4]));
        let odd = admissible_series(3, 5).unwrap();
        assert_eq!(odd, u(&[1, 1, 0, 0, 1, 2]));
    }

    #[test]
    fn admissible_matches_dual_steenrod() {
        for p in [2, 3, 5] {
            let dual = hilbert(&preset(PresetId::DualSteenrod, &PresetParams::new(p)).unwrap(), 60).unwrap();
            assert_eq!(admissible_series(p, 60).unwrap(), dual, "p={p}");
        }
    }

    #[test]
    fn odd_bound_by_admissibles_fails_in_degree_seven() {
        let a = a_series(3, 3, 7).unwrap();
        let adm = admissible_series(3, 7).unwrap();
        assert_eq!(
            (a.coeff(7).clone(), adm.coeff(7).clone()),
            (BigUint::from(1u32), BigUint::default())
        );
        for n in 2..=10 {
            assert!(a_series(2, n, 80).unwrap().leq(&admissible_series(2, 80).unwrap()));
        }
    }

    #[test]
    fn unstable_examples() {
        let ones = TruncatedSeries::all_ones(3);
        let unit = TruncatedSeries::one(3);
        assert_eq!(unstable_ext_bound(2, &unit, &ones, 3).unwrap(), u(&[1, 2, 3, 5]));
        let shifted = unit.shift(1);
        assert_eq!(
            unstable_ext_bound(2, &shifted, &ones, 3).unwrap(),
            u(&[1, 2, 3, 5]).shift(1)
        );
        let ones2 = TruncatedSeries::all_ones(2);
        assert_eq!(unstable_rank_bound(2, &ones2, &ones2, 2).unwrap(), u(&[2, 6, 12]));
        assert!(unstable_rank_bound(2, &u(&[2, 1]), &ones2, 2).is_err());
        let varpi = default_varpi_a(2, 20).unwrap();
        let h = TruncatedSeries::from_u64s(&[1, 1, 0, 3, 2]).unwrap();
        assert_eq!(
            unstable_rank_bound(2, &h, &varpi, 20).unwrap(),
            unstable_ext_bound(2, &h, &varpi, 20).unwrap().scale(2)
        );
    }

    #[test]
    fn cache_reuses_longer_entries() {
        let c = ASeriesCache::new();
        let long = c.get(2, 3, 40).unwrap();
        assert_eq!(c.get(2, 3, 10).unwrap(), long.truncate(10));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn json_shape() {
        let s = &enumerate_i(2, 1, 2).unwrap()[4];
        assert_eq!(
            serde_json::to_string(s).unwrap(),
            r#"{"p":2,"n":1,"seq":[3,1],"dim":2}"#
        );
        let s = &enumerate_i(3, 2, 4).unwrap()[1];
        assert_eq!(
            serde_json::to_string(s).unwrap(),
            r#"{"p":3,"n":2,"seq":[[1,1]],"dim":2}"#
        );
    }
}
