//! Closed-form neighbourhood sizes and the optimum-probability bound for
//! Random instances.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{MapError, Result};
use crate::local_search::{family_len, DvVariant};

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Derangement counts `d_0..=d_max`, from `d_i = i * d_{i-1} + (-1)^i`.
pub fn derangements(max: u64) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut d = BigInt::one();
    out.push(BigUint::one());
    for i in 1..=max {
        d = d * i + if i % 2 == 0 { 1 } else { -1 };
        out.push(d.to_biguint().expect("derangement counts are non-negative"));
    }
    out
}

/// `|N_DV(A)| = |D| (n! - 1) + 1`.
pub fn nbhd_size_dv(variant: DvVariant, s: usize, n: usize) -> BigUint {
    BigUint::from(family_len(variant, s)) * (factorial(n as u64) - 1u32) + 1u32
}

/// `N^0..=N^k`: the number of ways to recombine `i` given vectors so that
/// every one of them changes. `N^i = i!^{s-1} - sum_{j<i} C(i,j) N^j`.
pub fn changed_recombinations(k: usize, s: usize) -> Vec<BigUint> {
    let mut out: Vec<BigUint> = Vec::with_capacity(k + 1);
    for i in 0..=k as u64 {
        let mut v = BigInt::from(factorial(i).pow(s as u32 - 1));
        for (j, nj) in out.iter().enumerate() {
            v -= BigInt::from(binomial(i, j as u64) * nj);
        }
        out.push(v.to_biguint().expect("counts are non-negative"));
    }
    out
}

/// `|N_k-opt(A)| = sum_{i=0}^{k} C(n,i) N^i`.
pub fn nbhd_size_kopt(k: usize, s: usize, n: usize) -> BigUint {
    changed_recombinations(k, s)
        .iter()
        .enumerate()
        .map(|(i, ni)| binomial(n as u64, i as u64) * ni)
        .sum()
}

/// Permutations of `n` elements that move at most `k` of them.
pub fn r_k(k: usize, n: usize) -> BigUint {
    derangements(k as u64)
        .iter()
        .enumerate()
        .map(|(i, d)| binomial(n as u64, i as u64) * d)
        .sum()
}

/// `|N_DV(A) ∪ N_k-opt(A)|`
/// `= 1 + |D|(n! - 1) + sum_{i=2}^{k} C(n,i) N^i - |D|(r_k - 1)`.
pub fn nbhd_size_combined(variant: DvVariant, k: usize, s: usize, n: usize) -> BigUint {
    let d = BigInt::from(family_len(variant, s));
    let nk = changed_recombinations(k, s);
    let mut total: BigInt = BigInt::one() + &d * (BigInt::from(factorial(n as u64)) - 1);
    for (i, ni) in nk.iter().enumerate().skip(2) {
        total += BigInt::from(binomial(n as u64, i as u64) * ni);
    }
    total -= d * (BigInt::from(r_k(k, n)) - 1);
    total.to_biguint().expect("neighbourhood sizes are positive")
}

/// Parameters of the bound: Random weights drawn from `c = b - a` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundInput {
    pub s: usize,
    pub n: usize,
    pub c: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub sigma: f64,
    /// Lower bound on the probability that an assignment of weight `a n`
    /// exists.
    pub pr_lower: f64,
    /// Whether `((n-1)/e)^(s-1) >= c 2^(1/(n-1))` holds.
    pub applicable: bool,
}

/// `sigma = sum_{k=1}^{n-2} C(n,k) c^k / [n (n-1) ... (n-k+1)]^(s-1)`,
/// summed in the log domain, and `pr_lower = 1 - exp(-1 / (2 sigma))`.
pub fn optimum_probability_bound(inp: BoundInput) -> Result<BoundResult> {
    let BoundInput { s, n, c } = inp;
    if n < 3 {
        return Err(MapError::input(format!("the bound needs n >= 3, got {n}")));
    }
    if s < 2 {
        return Err(MapError::input(format!("the bound needs s >= 2, got {s}")));
    }
    if c < 1 {
        return Err(MapError::input("the bound needs c >= 1"));
    }
    let (nf, cf) = (n as f64, c as f64);
    let ln_c = cf.ln();
    let mut ln_binom = 0.0;
    let mut ln_falling = 0.0;
    let mut logs = Vec::with_capacity(n - 2);
    for k in 1..=n - 2 {
        let kf = k as f64;
        ln_binom += (nf - kf + 1.0).ln() - kf.ln();
        ln_falling += (nf - kf + 1.0).ln();
        logs.push(ln_binom + kf * ln_c - (s as f64 - 1.0) * ln_falling);
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_sigma = top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
    let sigma = ln_sigma.exp();
    // 1 - exp(-x) without cancellation for small x.
    let pr_lower = -(-0.5 * (-ln_sigma).exp()).exp_m1();
    let lhs = (s as f64 - 1.0) * ((nf - 1.0).ln() - 1.0);
    let rhs = ln_c + std::f64::consts::LN_2 / (nf - 1.0);
    Ok(BoundResult {
        sigma,
        pr_lower,
        applicable: lhs >= rhs,
    })
}

/// Float view of a big count, for display.
pub fn approx(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn small_counts() {
        assert_eq!(factorial(0), big(1));
        assert_eq!(factorial(5), big(120));
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(3, 5), big(0));
        assert_eq!(derangements(4), [1u64, 0, 1, 2, 9].map(big).to_vec());
    }

    #[test]
    fn derangements_match_alternating_sum() {
        // d_i = sum_m (-1)^m i! / m!
        let d = derangements(12);
        for i in 0..=12u64 {
            let mut sum = BigInt::zero();
            for m in 0..=i {
                let term = BigInt::from(factorial(i) / factorial(m));
                sum += if m % 2 == 0 { term } else { -term };
            }
            assert_eq!(BigInt::from(d[i as usize].clone()), sum);
        }
    }

    #[test]
    fn dv_sizes() {
        assert_eq!(nbhd_size_dv(DvVariant::OneDV, 3, 3), big(16));
        assert_eq!(nbhd_size_dv(DvVariant::SDV, 4, 3), big(36));
        assert_eq!(nbhd_size_dv(DvVariant::TwoDV, 5, 2), big(16));
    }

    #[test]
    fn kopt_sizes() {
        assert_eq!(nbhd_size_kopt(2, 3, 3), big(10));
        assert_eq!(nbhd_size_kopt(3, 3, 3), big(36));
        assert_eq!(nbhd_size_kopt(2, 5, 1), big(1));
        for s in 3..10 {
            let nk = changed_recombinations(3, s);
            assert_eq!(nk[0], big(1));
            assert_eq!(nk[1], big(0));
            assert_eq!(nk[2], big((1 << (s - 1)) - 1));
            assert_eq!(nk[3], big(6u64.pow(s as u32 - 1) - 3 * (1 << (s - 1)) + 2));
        }
    }

    #[test]
    fn r_k_values() {
        assert_eq!(r_k(2, 5), big(11));
        assert_eq!(r_k(3, 5), big(31));
        for n in 3..12 {
            assert_eq!(r_k(n, n), factorial(n as u64));
        }
    }

    #[test]
    fn sdv_plus_two_opt_adds_nothing() {
        for s in 3..=10 {
            for n in 1..=10 {
                assert_eq!(
                    nbhd_size_combined(DvVariant::SDV, 2, s, n),
                    nbhd_size_dv(DvVariant::SDV, s, n),
                    "s={s} n={n}"
                );
            }
        }
    }

    #[test]
    fn bound_rejects_small_n() {
        assert!(optimum_probability_bound(BoundInput { s: 4, n: 2, c: 100 }).is_err());
    }

    #[test]
    fn bound_increases_with_n() {
        for s in 4..=7 {
            let mut last = 0.0;
            for n in 5..60 {
                let r = optimum_probability_bound(BoundInput { s, n, c: 100 }).unwrap();
                assert!(r.sigma > 0.0);
                assert!(r.pr_lower >= last, "s={s} n={n}");
                last = r.pr_lower;
            }
        }
    }
}
