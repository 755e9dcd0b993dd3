//! Every bound formula of the semiprime pipeline: the kappa caps, the star
//! occupancy vectors, the carry/majorization algorithm, the |psi|^2
//! sandwich, the expanding lower bound on |N(X)|, and the family-size
//! evaluators. All inequalities are decided in exact rational arithmetic;
//! the fixed-point asymptotic target appears in reports only.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;

use crate::arith::{binomial, checked_pow, floor_pow_5_8, is_prime, isqrt, target_q64};
use crate::error::{Error, Result};
use crate::projective::theta;

/// kappa_r = floor(4 r^{n/2} + 2): for even n this is 4 r^{n/2} + 2; for
/// odd n it is isqrt(16 r^n) + 2. Integer arithmetic only, so the floor can
/// never be flipped by rounding.
pub fn kappa(prime: u64, n: u32) -> Result<u64> {
    if !is_prime(prime) {
        return Err(Error::NotPrime(prime));
    }
    let value = if n.is_multiple_of(2) {
        4 * checked_pow(prime, n / 2)? + 2
    } else {
        isqrt(16 * checked_pow(prime, n)?) + 2
    };
    u64::try_from(value).map_err(|_| Error::Overflow("kappa"))
}

/// min{1 + C(n+p-2, p-1), kappa_p}, the reference upper bound on the
/// largest matching family for a prime modulus.
pub fn reference_bound(p: u64, n: u32) -> Result<u64> {
    let binom = binomial(n as u64 + p - 2, p - 1)?;
    let cap = kappa(p, n)?;
    Ok((binom + 1).min(cap as u128) as u64)
}

/// Fixed parameters of one bound evaluation over m = p*q: the split sizes,
/// the four eigenvalues, the kappa caps and the chosen |X| = x.
#[derive(Debug, Clone)]
pub struct BoundContext {
    pub n: u32,
    pub p: u64,
    pub q: u64,
    pub ell: u64,
    pub ell1: u64,
    pub ell2: u64,
    pub lambda: [BigInt; 4],
    pub kappa_p: u64,
    pub kappa_q: u64,
    pub x: u64,
}

impl BoundContext {
    /// Context for distinct primes p < q (sorted internally) and a chosen x.
    pub fn new(n: u32, p: u64, q: u64, x: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if p == q {
            return Err(Error::PrimesEqual(p));
        }
        if n < 2 {
            return Err(Error::InvalidDimension { min: 2, got: n });
        }
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        let m = p * q;
        let big = |v: u64| BigInt::from(v);
        let nn = n - 2;
        let lambda = [
            big(theta(n - 1, m)).pow(2),
            big(p).pow(nn) * big(theta(n - 1, q)).pow(2),
            big(q).pow(nn) * big(theta(n - 1, p)).pow(2),
            big(m).pow(nn),
        ];
        Ok(Self {
            n,
            p,
            q,
            ell: theta(n, m),
            ell1: theta(n, p),
            ell2: theta(n, q),
            lambda,
            kappa_p: kappa(p, n)?,
            kappa_q: kappa(q, n)?,
            x,
        })
    }

    /// Same context with the caps overridden; used by the exhaustive
    /// maximization oracles, which need tiny caps to stay enumerable.
    pub fn with_caps(mut self, kappa_q: u64, kappa_p: u64) -> Self {
        self.kappa_q = kappa_q;
        self.kappa_p = kappa_p;
        self
    }

    pub fn m(&self) -> u64 {
        self.p * self.q
    }

    /// The theorem precondition x <= min{kappa_q * l1, kappa_p * l2}.
    pub fn feasible_x(&self) -> u64 {
        (self.kappa_q * self.ell1).min(self.kappa_p * self.ell2)
    }

    fn check_x(&self) -> Result<()> {
        if self.x > self.feasible_x() {
            return Err(Error::XOutOfRange {
                x: self.x,
                min: 0,
                max: self.feasible_x(),
            });
        }
        Ok(())
    }
}

/// The norm-maximizing occupancy rearrangements a* and b*: as many full
/// kappa fibers as x allows, one remainder fiber, zeros after.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarVectors {
    pub mu_q: u64,
    pub nu_q: u64,
    pub a_star: Vec<u64>,
    pub mu_p: u64,
    pub nu_p: u64,
    pub b_star: Vec<u64>,
}

fn star_fill(x: u64, cap: u64, len: u64) -> (u64, u64, Vec<u64>) {
    if cap == 0 {
        return (0, 0, vec![0; len as usize]);
    }
    let mu = x / cap;
    let nu = x - cap * mu;
    let mut v = vec![0u64; len as usize];
    for slot in v.iter_mut().take(mu as usize) {
        *slot = cap;
    }
    if (mu as usize) < v.len() {
        v[mu as usize] = nu;
    }
    (mu, nu, v)
}

pub fn star_vectors(ctx: &BoundContext) -> Result<StarVectors> {
    ctx.check_x()?;
    let (mu_q, nu_q, a_star) = star_fill(ctx.x, ctx.kappa_q, ctx.ell1);
    let (mu_p, nu_p, b_star) = star_fill(ctx.x, ctx.kappa_p, ctx.ell2);
    Ok(StarVectors {
        mu_q,
        nu_q,
        a_star,
        mu_p,
        nu_p,
        b_star,
    })
}

fn weight(v: &[u64]) -> u64 {
    v.iter().sum()
}

fn norm_sq_big(v: &[u64]) -> BigInt {
    v.iter().map(|&c| BigInt::from(c) * c).sum()
}

/// F(a, b) = lambda4*x + (lambda1-lambda4) x^2/ell
///         + (lambda2-lambda4) (ell1*|a|^2 - x^2)/ell
///         + (lambda3-lambda4) (ell2*|b|^2 - x^2)/ell,
/// the explicit form of |psi|^2 in terms of the occupancy vectors.
pub fn f_value(ctx: &BoundContext, a: &[u64], b: &[u64]) -> Result<BigRational> {
    if weight(a) != ctx.x {
        return Err(Error::WeightMismatch {
            expected: ctx.x,
            got: weight(a),
        });
    }
    if weight(b) != ctx.x {
        return Err(Error::WeightMismatch {
            expected: ctx.x,
            got: weight(b),
        });
    }
    Ok(f_value_unchecked(ctx, &norm_sq_big(a), &norm_sq_big(b)))
}

fn f_value_unchecked(ctx: &BoundContext, a_norm_sq: &BigInt, b_norm_sq: &BigInt) -> BigRational {
    let big = |v: u64| BigInt::from(v);
    let rat = |v: BigInt| BigRational::from_integer(v);
    let x = big(ctx.x);
    let x_sq = &x * &x;
    let ell = rat(big(ctx.ell));
    let [l1, l2, l3, l4] = &ctx.lambda;
    rat(l4 * &x)
        + rat((l1 - l4) * &x_sq) / ell.clone()
        + rat((l2 - l4) * (big(ctx.ell1) * a_norm_sq - &x_sq)) / ell.clone()
        + rat((l3 - l4) * (big(ctx.ell2) * b_norm_sq - &x_sq)) / ell
}

/// The carry procedure transforming a monotone capped weight-x vector into
/// the star vector. Returns the full iterate sequence, first entry the
/// input and last entry `a_star`; the squared norm never decreases along
/// it. One iteration moves mass from position i0+1 up to the first slot
/// that still differs from the target, then re-sorts the tail.
pub fn majorize(c: &[u64], cap: u64, a_star: &[u64]) -> Result<Vec<Vec<u64>>> {
    if c.len() != a_star.len() {
        return Err(Error::DimensionMismatch {
            left: c.len(),
            right: a_star.len(),
        });
    }
    for (i, pair) in c.windows(2).enumerate() {
        if pair[0] < pair[1] {
            return Err(Error::NotMonotone(i + 1));
        }
    }
    if let Some(&v) = c.iter().find(|&&v| v > cap) {
        return Err(Error::CapExceeded { value: v, cap });
    }
    if weight(c) != weight(a_star) {
        return Err(Error::WeightMismatch {
            expected: weight(a_star),
            got: weight(c),
        });
    }

    let mut iterates = vec![c.to_vec()];
    let mut c = c.to_vec();
    while c != a_star {
        let i0 = c
            .iter()
            .zip(a_star)
            .position(|(x, y)| x != y)
            .expect("loop guard ensures a difference");
        // The first difference undershoots the target, and a next slot
        // exists because equal prefixes with equal weights force one.
        debug_assert!(c[i0] < a_star[i0] && i0 + 1 < c.len());
        let pool = c[i0] + c[i0 + 1];
        let a = a_star[i0].min(pool);
        let b = pool - a;
        // Rebuild: prefix, a, then the tail c[i0+2..] with b inserted to
        // keep the descending order.
        let mut next = Vec::with_capacity(c.len());
        next.extend_from_slice(&c[..i0]);
        next.push(a);
        let tail = &c[i0 + 2..];
        match tail.iter().position(|&t| t <= b) {
            Some(j0) => {
                next.extend_from_slice(&tail[..j0]);
                next.push(b);
                next.extend_from_slice(&tail[j0..]);
            }
            None => {
                next.extend_from_slice(tail);
                next.push(b);
            }
        }
        debug_assert_eq!(weight(&next), weight(a_star));
        c = next;
        iterates.push(c.clone());
    }
    Ok(iterates)
}

/// One evaluated bound chain: Delta, the |psi|^2 upper bound, the expanding
/// lower bound on |N(X)|, and the family-size bound, all exact rationals.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub n: u32,
    pub p: u64,
    pub q: u64,
    pub x: u64,
    pub kappa_p: u64,
    pub kappa_q: u64,
    pub a_star_norm_sq: BigInt,
    pub b_star_norm_sq: BigInt,
    pub delta: BigRational,
    pub psi_upper: BigRational,
    pub expanding_lower: BigRational,
    pub family_bound: BigRational,
}

/// Evaluates the bound chain at ctx.x. Refuses x = 0 (the family bound
/// divides by x^2-dominated terms) and refuses, rather than clamps, any x
/// beyond the theorem precondition.
pub fn evaluate_bounds(ctx: &BoundContext) -> Result<BoundReport> {
    ctx.check_x()?;
    if ctx.x == 0 {
        return Err(Error::XOutOfRange {
            x: 0,
            min: 1,
            max: ctx.feasible_x(),
        });
    }
    let stars = star_vectors(ctx)?;
    let big = |v: u64| BigInt::from(v);
    let rat = |v: BigInt| BigRational::from_integer(v);
    let x = big(ctx.x);
    let x_sq = &x * &x;
    let ell = big(ctx.ell);
    let a_norm = norm_sq_big(&stars.a_star);
    let b_norm = norm_sq_big(&stars.b_star);
    let [l1, _, _, l4] = &ctx.lambda;

    // Delta = lambda4 x - lambda4 x^2/ell + (lambda2-lambda4)(ell1|a*|^2 - x^2)/ell
    //       + (lambda3-lambda4)(ell2|b*|^2 - x^2)/ell
    //       = F(a*, b*) - lambda1 x^2 / ell.
    let f_star = f_value_unchecked(ctx, &a_norm, &b_norm);
    let leading = rat(l1 * &x_sq) / rat(ell.clone());
    let delta = &f_star - &leading;
    debug_assert!({
        let direct = rat(l4 * &x) - rat(l4 * &x_sq) / rat(ell.clone())
            + rat((&ctx.lambda[1] - l4) * (big(ctx.ell1) * &a_norm - &x_sq)) / rat(ell.clone())
            + rat((&ctx.lambda[2] - l4) * (big(ctx.ell2) * &b_norm - &x_sq)) / rat(ell.clone());
        direct == delta
    });

    let psi_upper = f_star;
    let expanding_lower = rat(l1 * &x_sq) / &psi_upper;
    let family_bound = rat(x) + rat(ell) * &delta / &psi_upper;
    Ok(BoundReport {
        n: ctx.n,
        p: ctx.p,
        q: ctx.q,
        x: ctx.x,
        kappa_p: ctx.kappa_p,
        kappa_q: ctx.kappa_q,
        a_star_norm_sq: a_norm,
        b_star_norm_sq: b_norm,
        delta,
        psi_upper,
        expanding_lower,
        family_bound,
    })
}

/// The assembled k(m,n) bound 9 + 3 kappa_p + 3 kappa_q + N_{1,1}-bound,
/// with the Dvir baseline and the ratio of the N_{1,1} bound to the
/// asymptotic target for comparison.
#[derive(Debug, Clone)]
pub struct TotalBoundReport {
    pub n: u32,
    pub p: u64,
    pub q: u64,
    pub x: u64,
    pub kappa_p: u64,
    pub kappa_q: u64,
    pub type_class_terms: u64,
    pub n11_bound: BigRational,
    pub total: BigRational,
    pub baseline_dvir: BigInt,
    /// floor(2^64 * m^{0.625 n + 0.125}); report-only fixed point.
    pub target_q64: BigUint,
    /// (8 + epsilon) * target, same fixed-point scale.
    pub envelope_q64: BigUint,
    /// n11_bound / m^{0.625n+0.125} at 64 fractional bits of precision.
    pub ratio_to_target: BigRational,
}

/// Assembles the total report around an evaluated bound chain.
pub fn assemble_total(report: &BoundReport, epsilon: &BigRational) -> Result<TotalBoundReport> {
    if epsilon.is_negative() {
        return Err(Error::InvariantViolation("epsilon must be >= 0".into()));
    }
    let type_class_terms = 9 + 3 * report.kappa_p + 3 * report.kappa_q;
    let total = BigRational::from_integer(BigInt::from(type_class_terms)) + &report.family_bound;

    // Dvir et al. baseline p^n * (4 q^{0.5n} + 2) with p the smaller prime;
    // the floored integer form understates it, which only makes beating it
    // harder.
    let baseline_dvir = BigInt::from(
        u64::try_from(checked_pow(report.p, report.n)?).map_err(|_| Error::Overflow("baseline"))?,
    ) * BigInt::from(report.kappa_q);

    let target = target_q64(report.p * report.q, report.n);
    let eight_eps = BigRational::from_integer(BigInt::from(8)) + epsilon;
    let envelope_rat = BigRational::from_integer(BigInt::from(target.clone())) * eight_eps;
    let envelope_q64 = envelope_rat
        .floor()
        .to_integer()
        .to_biguint()
        .expect("nonnegative envelope");
    let ratio_to_target = &report.family_bound
        * BigRational::from_integer(BigInt::from(1u8) << 64)
        / BigRational::from_integer(BigInt::from(target.clone()));

    Ok(TotalBoundReport {
        n: report.n,
        p: report.p,
        q: report.q,
        x: report.x,
        kappa_p: report.kappa_p,
        kappa_q: report.kappa_q,
        type_class_terms,
        n11_bound: report.family_bound.clone(),
        total,
        baseline_dvir,
        target_q64: target,
        envelope_q64,
        ratio_to_target,
    })
}

/// Evaluates the total bound at the theorem's choice x = floor(ell^0.625),
/// checking rather than assuming the precondition on x.
pub fn total_k_bound(n: u32, p: u64, q: u64, epsilon: &BigRational) -> Result<TotalBoundReport> {
    let probe = BoundContext::new(n, p, q, 0)?;
    let x = floor_pow_5_8(probe.ell);
    let ctx = BoundContext { x, ..probe };
    ctx.check_x()?;
    let report = evaluate_bounds(&ctx)?;
    assemble_total(&report, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(2, 2).unwrap(), 10);
        assert_eq!(kappa(2, 3).unwrap(), 13);
        assert_eq!(kappa(3, 3).unwrap(), 22);
        assert!(matches!(kappa(4, 3), Err(Error::NotPrime(4))));
    }

    #[test]
    fn kappa_is_a_true_floor() {
        // (kappa - 2)^2 <= 16 r^n < (kappa - 1)^2 for odd n.
        for r in [2u64, 3, 5, 7, 11, 13, 101, 311] {
            for n in [3u32, 5] {
                let k = kappa(r, n).unwrap() as u128;
                let radicand = 16 * checked_pow(r, n).unwrap();
                assert!((k - 2) * (k - 2) <= radicand);
                assert!((k - 1) * (k - 1) > radicand);
            }
        }
    }

    #[test]
    fn reference_bound_values() {
        assert_eq!(reference_bound(2, 2).unwrap(), 3);
        assert_eq!(reference_bound(2, 3).unwrap(), 4);
        assert_eq!(reference_bound(3, 3).unwrap(), 7);
    }

    #[test]
    fn star_vector_shapes() {
        let ctx = BoundContext::new(3, 2, 3, 5).unwrap().with_caps(2, 2);
        // ell1 = 7: x=5, cap=2 -> (2,2,1,0,...).
        let stars = star_vectors(&ctx).unwrap();
        assert_eq!(stars.a_star, vec![2, 2, 1, 0, 0, 0, 0]);
        assert_eq!((stars.mu_q, stars.nu_q), (2, 1));

        let zero = BoundContext::new(3, 2, 3, 0).unwrap();
        let stars = star_vectors(&zero).unwrap();
        assert!(stars.a_star.iter().all(|&v| v == 0));

        // Saturation: x = kappa * ell1 fills every slot.
        let sat = BoundContext::new(3, 2, 3, 14).unwrap().with_caps(2, 22);
        let stars = star_vectors(&sat).unwrap();
        assert_eq!(stars.a_star, vec![2; 7]);
    }

    #[test]
    fn star_vectors_reject_infeasible_x() {
        let ctx = BoundContext::new(3, 2, 3, 1000).unwrap();
        assert!(matches!(
            star_vectors(&ctx),
            Err(Error::XOutOfRange { .. })
        ));
    }

    #[test]
    fn f_value_singleton_equals_degree() {
        let ctx = BoundContext::new(3, 2, 3, 1).unwrap();
        let mut a = vec![0u64; 7];
        a[0] = 1;
        let mut b = vec![0u64; 13];
        b[0] = 1;
        assert_eq!(
            f_value(&ctx, &a, &b).unwrap(),
            BigRational::from_integer(12.into())
        );
    }

    #[test]
    fn f_value_zero_and_weight_guard() {
        let ctx = BoundContext::new(3, 2, 3, 0).unwrap();
        let a = vec![0u64; 7];
        let b = vec![0u64; 13];
        assert!(f_value(&ctx, &a, &b).unwrap().is_zero());
        let ctx1 = BoundContext::new(3, 2, 3, 1).unwrap();
        assert!(matches!(
            f_value(&ctx1, &a, &b),
            Err(Error::WeightMismatch { .. })
        ));
    }

    #[test]
    fn majorize_single_carry() {
        let seq = majorize(&[2, 1, 1, 1], 2, &[2, 2, 1, 0]).unwrap();
        assert_eq!(seq, vec![vec![2, 1, 1, 1], vec![2, 2, 1, 0]]);
        let norms: Vec<u64> = seq
            .iter()
            .map(|v| v.iter().map(|&c| c * c).sum())
            .collect();
        assert_eq!(norms, vec![7, 9]);
    }

    #[test]
    fn majorize_halts_immediately_on_target() {
        let seq = majorize(&[3, 2, 0], 3, &[3, 2, 0]).unwrap();
        assert_eq!(seq, vec![vec![3, 2, 0]]);
    }

    #[test]
    fn majorize_keeps_sorted_iterates_when_the_remainder_is_small() {
        // A carry whose leftover is smaller than the tail's last entry
        // must be inserted, not appended.
        let seq = majorize(&[3, 2, 2, 0], 3, &[3, 3, 1, 0]).unwrap();
        for step in &seq {
            assert!(step.windows(2).all(|w| w[0] >= w[1]), "unsorted: {step:?}");
        }
        assert_eq!(seq.last().unwrap(), &vec![3, 3, 1, 0]);
    }

    #[test]
    fn majorize_rejects_bad_inputs() {
        assert!(matches!(
            majorize(&[1, 2], 3, &[2, 1]),
            Err(Error::NotMonotone(1))
        ));
        assert!(matches!(
            majorize(&[4, 1], 3, &[3, 2]),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            majorize(&[2, 1], 3, &[3, 1]),
            Err(Error::WeightMismatch { .. })
        ));
    }

    #[test]
    fn worked_singleton_bound_chain() {
        let ctx = BoundContext::new(3, 2, 3, 1).unwrap();
        let report = evaluate_bounds(&ctx).unwrap();
        assert_eq!(report.delta, rat(948, 91));
        assert_eq!(report.psi_upper, rat(12, 1));
        assert_eq!(report.expanding_lower, rat(12, 1));
        assert_eq!(report.family_bound, rat(80, 1));
    }

    #[test]
    fn bound_rejects_x_zero_and_infeasible_x() {
        let ctx = BoundContext::new(3, 2, 3, 0).unwrap();
        assert!(matches!(
            evaluate_bounds(&ctx),
            Err(Error::XOutOfRange { min: 1, .. })
        ));
        let ctx = BoundContext::new(3, 2, 3, 1_000_000).unwrap();
        assert!(matches!(
            evaluate_bounds(&ctx),
            Err(Error::XOutOfRange { .. })
        ));
    }

    #[test]
    fn theorem_choice_of_x_is_feasible_for_the_worked_case() {
        // x = floor(91^0.625) = 16 <= min{22*7, 13*13} = 154.
        let report = total_k_bound(3, 2, 3, &BigRational::zero()).unwrap();
        assert_eq!(report.x, 16);
        assert_eq!(report.kappa_p, 13);
        assert_eq!(report.kappa_q, 22);
        assert_eq!(report.type_class_terms, 9 + 39 + 66);
        assert_eq!(report.baseline_dvir, BigInt::from(8 * 22));
    }

    #[test]
    fn total_bound_orders_primes() {
        let a = total_k_bound(3, 3, 2, &BigRational::zero()).unwrap();
        let b = total_k_bound(3, 2, 3, &BigRational::zero()).unwrap();
        assert_eq!(a.p, 2);
        assert_eq!(a.total, b.total);
    }

    #[test]
    fn envelope_scales_with_epsilon() {
        let base = total_k_bound(3, 2, 3, &BigRational::zero()).unwrap();
        let wide = total_k_bound(3, 2, 3, &BigRational::one()).unwrap();
        assert!(wide.envelope_q64 > base.envelope_q64);
        assert_eq!(base.target_q64, wide.target_q64);
    }

    mod oracles {
        use super::*;

        /// All monotone nonincreasing vectors with entries in [0, cap],
        /// given length and weight.
        pub(super) fn monotone_capped(len: usize, cap: u64, weight: u64) -> Vec<Vec<u64>> {
            fn recur(
                out: &mut Vec<Vec<u64>>,
                prefix: &mut Vec<u64>,
                len: usize,
                max_entry: u64,
                remaining: u64,
            ) {
                if prefix.len() == len {
                    if remaining == 0 {
                        out.push(prefix.clone());
                    }
                    return;
                }
                let slots_left = (len - prefix.len() - 1) as u64;
                for v in (0..=max_entry.min(remaining)).rev() {
                    // Remaining weight must still fit under the cap v.
                    if remaining - v <= slots_left * v {
                        prefix.push(v);
                        recur(out, prefix, len, v, remaining - v);
                        prefix.pop();
                    }
                }
            }
            let mut out = Vec::new();
            recur(&mut out, &mut Vec::new(), len, cap, weight);
            out
        }

        #[test]
        fn majorize_reaches_the_star_vector_exhaustively() {
            for len in 1..=5usize {
                for cap in 0..=3u64 {
                    for x in 0..=cap * len as u64 {
                        let (_, _, a_star) = star_fill(x, cap, len as u64);
                        for c in monotone_capped(len, cap, x) {
                            let seq = majorize(&c, cap, &a_star).unwrap();
                            assert_eq!(seq.first().unwrap(), &c);
                            assert_eq!(seq.last().unwrap(), &a_star);
                            let mut prev_norm = 0u64;
                            for (step, it) in seq.iter().enumerate() {
                                assert_eq!(weight(it), x);
                                assert!(it.iter().all(|&v| v <= cap));
                                assert!(
                                    it.windows(2).all(|w| w[0] >= w[1]),
                                    "unsorted iterate {it:?} from {c:?}"
                                );
                                let norm: u64 = it.iter().map(|&v| v * v).sum();
                                assert!(step == 0 || norm >= prev_norm);
                                prev_norm = norm;
                            }
                        }
                    }
                }
            }
        }

        #[test]
        fn star_norm_is_the_exhaustive_maximum() {
            for len in 1..=5usize {
                for cap in 1..=3u64 {
                    for x in 0..=cap * len as u64 {
                        let (_, _, a_star) = star_fill(x, cap, len as u64);
                        let star_norm: u64 = a_star.iter().map(|&v| v * v).sum();
                        let max_norm = monotone_capped(len, cap, x)
                            .into_iter()
                            .map(|v| v.iter().map(|&c| c * c).sum::<u64>())
                            .max()
                            .unwrap();
                        assert_eq!(star_norm, max_norm, "len={len} cap={cap} x={x}");
                    }
                }
            }
        }

        #[test]
        fn f_star_dominates_all_feasible_occupancies() {
            // Exhaustive over both occupancy sides with tiny caps; the
            // feasible set is every (not necessarily sorted) nonnegative
            // capped pair of weight x, but norms only depend on the
            // multiset, so sorted enumeration is exhaustive for F.
            let base = BoundContext::new(2, 2, 3, 0).unwrap();
            let (l1, l2) = (base.ell1 as usize, base.ell2 as usize); // 3, 4
            for cap_q in 1..=3u64 {
                for cap_p in 1..=3u64 {
                    let max_x = (cap_q * l1 as u64).min(cap_p * l2 as u64);
                    for x in 0..=max_x {
                        let ctx = BoundContext::new(2, 2, 3, x)
                            .unwrap()
                            .with_caps(cap_q, cap_p);
                        let stars = star_vectors(&ctx).unwrap();
                        let f_star = f_value(&ctx, &stars.a_star, &stars.b_star).unwrap();
                        for a in monotone_capped(l1, cap_q, x) {
                            for b in monotone_capped(l2, cap_p, x) {
                                let f = f_value(&ctx, &a, &b).unwrap();
                                assert!(
                                    f <= f_star,
                                    "F({a:?}, {b:?}) = {f} > {f_star} at x={x}"
                                );
                            }
                        }
                    }
                }
            }
        }

        #[test]
        fn pair_rearrangement_inequality_exhaustively() {
            // a^2 + b^2 >= c^2 + d^2 for a >= b, c >= d, a + b = c + d,
            // a >= c, values up to 50.
            for a in 0u64..=50 {
                for b in 0..=a {
                    for c in 0..=a {
                        let d = (a + b).saturating_sub(c);
                        if d > c || c + d != a + b {
                            continue;
                        }
                        assert!(a * a + b * b >= c * c + d * d);
                    }
                }
            }
        }
    }
}
