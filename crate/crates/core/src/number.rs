//! Small integer helpers shared across modules.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `p`-adic valuation of `n`; `None` for `n = 0`.
pub fn val_p(n: u64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut n = n;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Some(v)
}

pub fn checked_pow(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

/// Smallest `k` with `p^k >= n`.
pub fn ceil_log(n: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut q: u128 = 1;
    while q < u128::from(n) {
        q *= u128::from(p);
        k += 1;
    }
    k
}

/// Largest `k` with `p^k <= n`, for `n >= 1`.
pub fn floor_log(n: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut q: u128 = u128::from(p);
    while q <= u128::from(n) {
        q *= u128::from(p);
        k += 1;
    }
    k
}

/// `log_p(x)` for `x >= 1`, exact at powers of `p`.
pub fn log_p(x: u64, p: u64) -> f64 {
    let k = floor_log(x, p);
    let rest = x as f64 / (p as f64).powi(k as i32);
    f64::from(k) + rest.ln() / (p as f64).ln()
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}
