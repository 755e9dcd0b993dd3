//! The canonically ordered projective (n-1)-space over Z_m.
//!
//! Points and hyperplanes are the same ordered set. For a prime power the
//! order is lexicographic over class representatives; for a composite
//! modulus the list is the CRT composition of the factor lists with the
//! first (smallest-prime) factor varying slowest. This ordering matches
//! the golden point tables in the test data bit for bit and makes the
//! adjacency tensor identity hold entrywise, not just up to permutation.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ring::{class_min_entries, content, crt_lift, ModVector, Modulus};

/// Number of projective points theta_{n,m}. Multiplicative over coprime
/// factors; theta(n, 1) = 1 and theta(1, m) = 1.
pub fn theta(n: u32, m: u64) -> u64 {
    assert!(n >= 1 && m >= 1, "theta needs n >= 1 and m >= 1");
    let mut total: u128 = 1;
    for (p, e) in crate::arith::factorize(m) {
        // p^((e-1)(n-1)) * (1 + p + ... + p^(n-1))
        let mut geo: u128 = 0;
        let mut pw: u128 = 1;
        for _ in 0..n {
            geo += pw;
            pw *= p as u128;
        }
        let lead = (p as u128).pow((e - 1) * (n - 1));
        total = total
            .checked_mul(lead * geo)
            .expect("theta overflow at desk scale");
    }
    u64::try_from(total).expect("theta fits in u64 at desk scale")
}

/// Zero-based location of a point, with the factor coordinates of the
/// coarsest split (first prime-power factor vs. the rest) when the modulus
/// is composite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointLocation {
    /// Position in the canonical point list.
    pub index: usize,
    /// Position of the first-factor component, `index / l2`.
    pub row: Option<usize>,
    /// Position of the remaining-factor component, `index % l2`.
    pub col: Option<usize>,
}

/// The ordered point list of the projective (n-1)-space over Z_m, together
/// with the index maps used by the spectral decomposition. The same list
/// serves as the hyperplane list. Immutable after construction.
#[derive(Debug, Clone)]
pub struct ProjectiveSpace {
    n: u32,
    modulus: Modulus,
    points: Vec<ModVector>,
    /// Lex-least class representative -> position. The listed point of a
    /// composite space is a CRT lift, which need not be the lex-least
    /// member of its class, so lookups go through this key.
    index_of: HashMap<Vec<u64>, usize>,
    factor_sizes: Vec<u64>,
}

impl ProjectiveSpace {
    pub fn build(n: u32, modulus: Modulus) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension { min: 2, got: n });
        }
        let mut factor_sizes = Vec::new();
        let mut points: Option<Vec<ModVector>> = None;
        for &part in &modulus.prime_power_parts() {
            let part_mod = Modulus::new(part)?;
            factor_sizes.push(theta(n, part));
            let reps: Vec<ModVector> = prime_power_reps(n, &part_mod)
                .into_iter()
                .map(|entries| ModVector::new(entries, part_mod.clone()))
                .collect();
            points = Some(match points {
                None => reps,
                // Left fold keeps earlier factors varying slowest, giving
                // the mixed-radix order h = (i-1)*l2 + j and its r-factor
                // generalization.
                Some(acc) => {
                    let mut combined = Vec::with_capacity(acc.len() * reps.len());
                    for a in &acc {
                        for b in &reps {
                            combined.push(crt_lift(a, b)?);
                        }
                    }
                    combined
                }
            });
        }
        let points = points.expect("modulus has at least one prime factor");
        debug_assert_eq!(points.len() as u64, theta(n, modulus.value()));

        let mut index_of = HashMap::with_capacity(points.len());
        for (i, w) in points.iter().enumerate() {
            let key = class_min_entries(w.entries(), &modulus);
            let prev = index_of.insert(key, i);
            debug_assert!(prev.is_none(), "two listed points share a class");
        }
        Ok(Self {
            n,
            modulus,
            points,
            index_of,
            factor_sizes,
        })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// ell = theta_{n,m}.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ModVector] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Result<&ModVector> {
        self.points.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.points.len(),
        })
    }

    /// theta sizes of the prime-power factors, primes ascending.
    pub fn factor_sizes(&self) -> &[u64] {
        &self.factor_sizes
    }

    /// (l1, l2) of the coarsest split: first prime-power factor against the
    /// product of the rest. None when the modulus is a single prime power.
    pub fn split_sizes(&self) -> Option<(u64, u64)> {
        if self.factor_sizes.len() < 2 {
            return None;
        }
        let l1 = self.factor_sizes[0];
        Some((l1, self.points.len() as u64 / l1))
    }

    /// Finds the class of `u` in the canonical order.
    pub fn locate(&self, u: &ModVector) -> Result<PointLocation> {
        if u.modulus().value() != self.modulus.value() {
            return Err(Error::ModulusMismatch {
                left: u.modulus().value(),
                right: self.modulus.value(),
            });
        }
        if u.dim() != self.n as usize {
            return Err(Error::DimensionMismatch {
                left: u.dim(),
                right: self.n as usize,
            });
        }
        let c = content(u);
        if c != 1 {
            return Err(Error::NotProjective { content: c });
        }
        let key = class_min_entries(u.entries(), &self.modulus);
        let index = *self
            .index_of
            .get(&key)
            .expect("every content-1 class is listed");
        let (row, col) = match self.split_sizes() {
            Some((_, l2)) => (Some(index / l2 as usize), Some(index % l2 as usize)),
            None => (None, None),
        };
        Ok(PointLocation { index, row, col })
    }

    /// CSV rows of the ordered points, entries comma-separated.
    pub fn points_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let row: Vec<String> = p.entries().iter().map(|e| e.to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON array of integer arrays, same order as the list.
    pub fn points_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.points
                .iter()
                .map(|p| {
                    serde_json::Value::Array(
                        p.entries()
                            .iter()
                            .map(|&e| serde_json::Value::from(e))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// Canonical representatives for a prime-power modulus, lexicographically
/// sorted. For a prime the representatives are exactly the vectors whose
/// first nonzero entry is 1 and can be generated directly; for higher prime
/// powers we scan Z_{p^e}^n in lex order and keep each vector that is the
/// lex-least member of its own unit class.
fn prime_power_reps(n: u32, modulus: &Modulus) -> Vec<Vec<u64>> {
    let m = modulus.value();
    let n = n as usize;
    let &(p, e) = &modulus.factors()[0];
    let mut reps = Vec::with_capacity(theta(n as u32, m) as usize);
    if e == 1 {
        // Leading zeros descending gives lex order directly.
        for lead in (0..n).rev() {
            let tail_len = n - lead - 1;
            let mut tail = vec![0u64; tail_len];
            loop {
                let mut v = vec![0u64; lead];
                v.push(1);
                v.extend_from_slice(&tail);
                reps.push(v);
                if !increment(&mut tail, m) {
                    break;
                }
            }
        }
    } else {
        let units = modulus.units();
        let mut v = vec![0u64; n];
        loop {
            if v.iter().any(|&x| x % p != 0) && is_class_min(&v, &units, m) {
                reps.push(v.clone());
            }
            if !increment(&mut v, m) {
                break;
            }
        }
    }
    reps
}

/// Odometer increment in lex order; false on wrap-around.
fn increment(v: &mut [u64], m: u64) -> bool {
    for slot in v.iter_mut().rev() {
        *slot += 1;
        if *slot < m {
            return true;
        }
        *slot = 0;
    }
    false
}

fn is_class_min(v: &[u64], units: &[u64], m: u64) -> bool {
    'outer: for &lambda in units {
        if lambda == 1 {
            continue;
        }
        // Compare lambda*v with v lexicographically, early exit.
        for &x in v {
            let s = (x as u128 * lambda as u128 % m as u128) as u64;
            if s < x {
                return false;
            }
            if s > x {
                continue 'outer;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::canonicalize;

    fn space(n: u32, m: u64) -> ProjectiveSpace {
        ProjectiveSpace::build(n, Modulus::new(m).unwrap()).unwrap()
    }

    #[test]
    fn theta_known_sizes() {
        assert_eq!(theta(3, 2), 7);
        assert_eq!(theta(3, 3), 13);
        assert_eq!(theta(3, 6), 91);
        assert_eq!(theta(2, 3), 4);
        assert_eq!(theta(3, 4), 28);
        assert_eq!(theta(3, 12), 364);
        assert_eq!(theta(1, 6), 1);
        assert_eq!(theta(4, 1), 1);
    }

    #[test]
    fn theta_multiplicative_over_coprime_parts() {
        for n in 2..=4 {
            for m1 in 2u64..12 {
                for m2 in 2u64..12 {
                    if num_integer::gcd(m1, m2) == 1 {
                        assert_eq!(theta(n, m1 * m2), theta(n, m1) * theta(n, m2));
                    }
                }
            }
        }
    }

    #[test]
    fn ordered_points_small_prime() {
        let s = space(3, 2);
        let got: Vec<&[u64]> = s.points().iter().map(|p| p.entries()).collect();
        let want: Vec<&[u64]> = vec![
            &[0, 0, 1],
            &[0, 1, 0],
            &[0, 1, 1],
            &[1, 0, 0],
            &[1, 0, 1],
            &[1, 1, 0],
            &[1, 1, 1],
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn ordered_points_mod_three_squared() {
        let s = space(2, 3);
        let got: Vec<&[u64]> = s.points().iter().map(|p| p.entries()).collect();
        let want: Vec<&[u64]> = vec![&[0, 1], &[1, 0], &[1, 1], &[1, 2]];
        assert_eq!(got, want);
    }

    #[test]
    fn composite_second_point_is_the_expected_lift() {
        let s = space(3, 6);
        assert_eq!(s.points()[0].entries(), &[0, 0, 1]);
        assert_eq!(s.points()[1].entries(), &[0, 4, 3]);
        assert_eq!(s.len(), 91);
    }

    #[test]
    fn enumeration_matches_theta_for_small_parameters() {
        for n in 2..=3 {
            for m in 2..=16 {
                let s = space(n, m);
                assert_eq!(s.len() as u64, theta(n, m), "n={n}, m={m}");
            }
        }
    }

    #[test]
    fn locate_inverts_the_point_list() {
        for (n, m) in [(2, 6), (3, 6), (2, 12), (3, 4)] {
            let s = space(n, m);
            for (i, p) in s.points().iter().enumerate() {
                let loc = s.locate(p).unwrap();
                assert_eq!(loc.index, i);
                if let Some((_, l2)) = s.split_sizes() {
                    assert_eq!(loc.row, Some(i / l2 as usize));
                    assert_eq!(loc.col, Some(i % l2 as usize));
                } else {
                    assert_eq!(loc.row, None);
                }
            }
        }
    }

    #[test]
    fn sigma_tau_worked_examples() {
        // In one-based terms: h=14, l2=13 gives sigma=2, tau=1 and h=91
        // gives sigma=7, tau=13. Indices here are zero-based.
        let s = space(3, 6);
        let loc = s.locate(&s.points()[0]).unwrap();
        assert_eq!((loc.row, loc.col), (Some(0), Some(0)));
        let loc = s.locate(&s.points()[13]).unwrap();
        assert_eq!((loc.row, loc.col), (Some(1), Some(0)));
        let loc = s.locate(&s.points()[90]).unwrap();
        assert_eq!((loc.row, loc.col), (Some(6), Some(12)));
    }

    #[test]
    fn locate_rejects_imprimitive_vectors() {
        let s = space(2, 6);
        let v = ModVector::new(vec![2, 4], Modulus::new(6).unwrap());
        assert!(matches!(
            s.locate(&v),
            Err(Error::NotProjective { content: 2 })
        ));
    }

    #[test]
    fn every_primitive_vector_hits_exactly_one_point() {
        let cases = (2u32..=3).flat_map(|n| (2u64..=10).map(move |m| (n, m)));
        for (n, m) in cases {
            let s = space(n, m);
            let md = Modulus::new(m).unwrap();
            let mut hits = vec![0usize; s.len()];
            let mut v = vec![0u64; n as usize];
            loop {
                let w = ModVector::new(v.clone(), md.clone());
                if content(&w) == 1 {
                    hits[s.locate(&w).unwrap().index] += 1;
                }
                if !increment(&mut v, m) {
                    break;
                }
            }
            // Each class has phi(m) members, all mapping to its one point.
            let phi = md.units().len();
            assert!(hits.iter().all(|&h| h == phi), "n={n} m={m}");
        }
    }

    #[test]
    fn factor_lifts_reproduce_listed_points() {
        // Point h of the composite list is the lift of its factor
        // representatives at (row, col).
        let s2 = space(3, 2);
        let s3 = space(3, 3);
        let s6 = space(3, 6);
        for (h, w) in s6.points().iter().enumerate() {
            let loc = s6.locate(w).unwrap();
            let lift = crt_lift(
                &s2.points()[loc.row.unwrap()],
                &s3.points()[loc.col.unwrap()],
            )
            .unwrap();
            assert_eq!(&lift, w, "h={h}");
        }
    }

    #[test]
    fn prime_power_points_are_sorted_canonical_fixed_points() {
        for (n, m) in [(2u32, 9u64), (3, 4), (2, 8), (3, 3), (2, 5), (2, 7), (4, 3)] {
            let s = space(n, m);
            for p in s.points() {
                assert_eq!(&canonicalize(p).unwrap(), p);
            }
            for pair in s.points().windows(2) {
                assert!(pair[0].entries() < pair[1].entries(), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn rejects_degenerate_dimension() {
        assert!(matches!(
            ProjectiveSpace::build(1, Modulus::new(5).unwrap()),
            Err(Error::InvalidDimension { .. })
        ));
    }
}
