//! Exact arithmetic over Z_m: dot products, contents, CRT lifting and
//! canonical representatives under unit scaling. All values are immutable
//! after construction and safe to share across threads.

use num_integer::gcd;

use crate::arith::{factorize, mod_inverse};
use crate::error::{Error, Result};

/// A modulus m >= 2 together with its prime-power factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Modulus {
    m: u64,
    factors: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(Self {
            m,
            factors: factorize(m),
        })
    }

    pub fn value(&self) -> u64 {
        self.m
    }

    /// Prime-power factorization, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// The prime-power parts p^e, primes ascending.
    pub fn prime_power_parts(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, e)| p.pow(e)).collect()
    }

    /// All units of Z_m, ascending. phi(m) <= m, fine at desk scale.
    pub fn units(&self) -> Vec<u64> {
        (1..self.m).filter(|&x| gcd(x, self.m) == 1).collect()
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Z_{}", self.m)
    }
}

/// A vector over Z_m with entries reduced to [0, m).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModVector {
    entries: Vec<u64>,
    modulus: Modulus,
}

impl ModVector {
    /// Builds a vector, reducing each entry modulo m.
    pub fn new(entries: Vec<u64>, modulus: Modulus) -> Self {
        let m = modulus.value();
        Self {
            entries: entries.into_iter().map(|e| e % m).collect(),
            modulus,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus.value() != other.modulus.value() {
            return Err(Error::ModulusMismatch {
                left: self.modulus.value(),
                right: other.modulus.value(),
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

/// Dot product sum u(i)v(i) mod m.
pub fn dot(u: &ModVector, v: &ModVector) -> Result<u64> {
    u.check_compatible(v)?;
    let m = u.modulus.value() as u128;
    let mut acc: u128 = 0;
    for (&a, &b) in u.entries.iter().zip(&v.entries) {
        acc = (acc + a as u128 * b as u128) % m;
    }
    Ok(acc as u64)
}

/// gcd(u(1), ..., u(n), m); the all-zero vector has content m, which keeps
/// the divisor lattice of types total.
pub fn content(u: &ModVector) -> u64 {
    let m = u.modulus.value();
    u.entries.iter().fold(m, |g, &e| gcd(g, e))
}

/// Entrywise scaling by a unit, reduced.
pub fn scale(u: &ModVector, lambda: u64) -> ModVector {
    let m = u.modulus.value();
    let entries = u
        .entries
        .iter()
        .map(|&e| (e as u128 * lambda as u128 % m as u128) as u64)
        .collect();
    ModVector {
        entries,
        modulus: u.modulus.clone(),
    }
}

/// The unique w mod m1*m2 with w = u (mod m1) and w = v (mod m2).
pub fn crt_lift(u: &ModVector, v: &ModVector) -> Result<ModVector> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let m1 = u.modulus.value();
    let m2 = v.modulus.value();
    if gcd(m1, m2) != 1 {
        return Err(Error::NotCoprime {
            left: m1,
            right: m2,
        });
    }
    let m = m1.checked_mul(m2).ok_or(Error::Overflow("crt modulus"))?;
    let inv = mod_inverse(m1 % m2, m2).expect("coprime moduli have inverses");
    let entries = u
        .entries
        .iter()
        .zip(&v.entries)
        .map(|(&a, &b)| {
            // w = a + m1 * ((b - a) * inv mod m2)
            let diff = (b as i128 - a as i128).rem_euclid(m2 as i128) as u128;
            let t = diff * inv as u128 % m2 as u128;
            (a as u128 + m1 as u128 * t) as u64
        })
        .collect();
    Ok(ModVector {
        entries,
        modulus: Modulus::new(m)?,
    })
}

/// Reduces a vector to a smaller modulus dividing the original one.
pub fn reduce_mod(u: &ModVector, target: &Modulus) -> Result<ModVector> {
    if !u.modulus.value().is_multiple_of(target.value()) {
        return Err(Error::ModulusMismatch {
            left: u.modulus.value(),
            right: target.value(),
        });
    }
    Ok(ModVector::new(u.entries.clone(), target.clone()))
}

/// Lexicographically least element of the unit-scaling class of `u`,
/// regardless of content. Internal workhorse for canonical forms.
pub(crate) fn class_min_entries(entries: &[u64], modulus: &Modulus) -> Vec<u64> {
    let m = modulus.value() as u128;
    let mut best: Option<Vec<u64>> = None;
    for lambda in modulus.units() {
        let cand: Vec<u64> = entries
            .iter()
            .map(|&e| (e as u128 * lambda as u128 % m) as u64)
            .collect();
        match &best {
            Some(b) if *b <= cand => {}
            _ => best = Some(cand),
        }
    }
    best.expect("every modulus >= 2 has the unit 1")
}

/// Canonical projective representative: the lexicographically least vector
/// in {lambda * u : lambda a unit}. Requires content 1.
pub fn canonicalize(u: &ModVector) -> Result<ModVector> {
    let c = content(u);
    if c != 1 {
        return Err(Error::NotProjective { content: c });
    }
    Ok(ModVector {
        entries: class_min_entries(&u.entries, &u.modulus),
        modulus: u.modulus.clone(),
    })
}
