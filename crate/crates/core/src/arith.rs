//! Small exact-arithmetic helpers shared across modules. Everything here is
//! integer-only; floats never decide a floor or an inequality.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Floor of the square root, exact for the whole `u128` range.
pub fn isqrt(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    // Newton's method from a power-of-two seed; the iterate sequence is
    // strictly decreasing once it passes the root.
    let mut r = 1u128 << (n.ilog2() / 2 + 1);
    loop {
        let next = (r + n / r) / 2;
        if next >= r {
            break;
        }
        r = next;
    }
    debug_assert!(r * r <= n && (r + 1).checked_mul(r + 1).is_none_or(|s| s > n));
    r
}

/// Binomial coefficient C(n, k), exact, erroring on overflow.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial"))?;
        acc /= (i + 1) as u128;
    }
    Ok(acc)
}

/// Prime-power factorization by trial division, primes ascending.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    assert!(m >= 1, "factorize needs a positive integer");
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            let mut e = 0u32;
            while m.is_multiple_of(d) {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn is_prime(m: u64) -> bool {
    m >= 2 && factorize(m) == [(m, 1)]
}

/// Checked power on u128.
pub fn checked_pow(base: u64, exp: u32) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base as u128)
            .ok_or(Error::Overflow("pow"))?;
    }
    Ok(acc)
}

/// Extended gcd over i128: returns (g, s, t) with s*a + t*b = g.
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = egcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

/// Inverse of `a` modulo `m` when gcd(a, m) = 1.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (g, s, _) = egcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some((s.rem_euclid(m as i128)) as u64)
}

/// Floor of the 8th root of `ell^5`, i.e. floor(ell^0.625), exact.
pub fn floor_pow_5_8(ell: u64) -> u64 {
    let fifth = BigUint::from(ell).pow(5);
    let root = fifth.nth_root(8);
    u64::try_from(&root).expect("ell^(5/8) fits in u64 when ell does")
}

/// floor(2^64 * m^((5n+1)/8)) as a Q64.64 fixed-point integer. This is the
/// m^(0.625n + 0.125) report target; the 64 fractional bits are the stated
/// precision and the value is never used inside an exact inequality.
pub fn target_q64(m: u64, n: u32) -> BigUint {
    let power = BigUint::from(m).pow(5 * n + 1);
    (power << 512u32).nth_root(8)
}
