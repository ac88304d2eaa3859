//! Exact probabilities for random walks on an [`ExpanderGraph`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::expander::ExpanderGraph;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `Pr[R_1, …, R_ρ ∈ S]` for a uniform start vertex followed by `ρ − 1`
/// uniform port choices, by propagating walk counts restricted to `S`.
pub fn walk_hit_prob(x: &ExpanderGraph, in_set: &[bool], rho: usize) -> Result<Rational> {
    let (count, total) = walk_hit_count(x, in_set, rho)?;
    Ok(Rational::new(count, total))
}

/// Number of walks staying in `S` and the total number of walks `n·d^{ρ−1}`.
pub fn walk_hit_count(x: &ExpanderGraph, in_set: &[bool], rho: usize) -> Result<(i128, i128)> {
    let n = x.vertex_count();
    if in_set.len() != n {
        return Err(Error::malformed(format!(
            "subset indicator of length {}, graph has {n} vertices",
            in_set.len()
        )));
    }
    if rho == 0 {
        return Err(Error::precondition("walks need ρ ≥ 1"));
    }
    let mut counts: Vec<i128> = in_set.iter().map(|&b| b as i128).collect();
    let mut total = n as i128;
    for _ in 1..rho {
        let mut next = vec![0i128; n];
        for v in 0..n {
            if counts[v] == 0 {
                continue;
            }
            for port in 0..x.degree() {
                let w = x.neighbor(v, port);
                if in_set[w] {
                    next[w] = next[w].checked_add(counts[v]).ok_or(Error::Overflow("walk count"))?;
                }
            }
        }
        counts = next;
        total = total
            .checked_mul(x.degree() as i128)
            .ok_or(Error::Overflow("walk total"))?;
    }
    let count = counts
        .iter()
        .try_fold(0i128, |acc, &c| acc.checked_add(c))
        .ok_or(Error::Overflow("walk count"))?;
    Ok((count, total))
}

/// Exact `((μ − 2λ/d)₊)^ρ` and `(μ + 2λ/d)^ρ` with `μ = |S|/n` and the
/// graph's certified `λ`.
pub fn sandwich_bounds(x: &ExpanderGraph, in_set: &[bool], rho: usize) -> (BigRational, BigRational) {
    let n = BigInt::from(x.vertex_count());
    let mu = BigRational::new(BigInt::from(in_set.iter().filter(|&&b| b).count()), n);
    let spread = x.ratio_exact() * BigInt::from(2);
    let mut lo = &mu - &spread;
    if lo.is_negative() {
        lo = BigRational::zero();
    }
    let hi = mu + spread;
    (pow(&lo, rho), pow(&hi, rho))
}

fn pow(base: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * base)
}

pub fn to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}
