//! Error reduction by expander walks: run the base verifier on every vertex
//! of a `ρ`-vertex walk and accept iff all runs accept.

mod expander;
mod walk;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use expander::{ExpanderGraph, CERTIFICATION_SLACK, STABILITY};
pub use walk::{sandwich_bounds, to_big, walk_hit_count, walk_hit_prob};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::verifier::{LocalTest, TableVerifier};

/// Largest merged query tuple an amplified verifier may have.
pub const MAX_MERGED_QUERIES: usize = 20;
/// Largest randomness length of an amplified verifier.
pub const MAX_RANDOMNESS_BITS: u32 = 24;

/// The soundness target `δ`, either as a rational or as `e^{−t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Delta {
    Value(Rational),
    ExpNeg(Rational),
}

/// `ρ = ⌈(2/ε)·ln(1/δ)⌉`. The logarithm is bracketed by exact rational
/// bounds that are tightened until both ends share a ceiling; if they never
/// do, the upper ceiling is returned, so `ρ` is never under-estimated.
pub fn choose_rho(eps: Rational, delta: &Delta) -> Result<usize> {
    // ε = 1 is admitted: 2/ε = 2 is a meaningful factor even though the
    // soundness premise "acceptance < 1 − ε" is then vacuous
    if eps <= Rational::zero() || eps > Rational::one() {
        return Err(Error::precondition("ε must lie in (0, 1]"));
    }
    let factor = to_big(&(Rational::from_integer(2) / eps));
    let ceil = |x: &BigRational| -> Result<usize> {
        usize::try_from(x.ceil().to_integer()).map_err(|_| Error::Overflow("ρ"))
    };
    match delta {
        Delta::ExpNeg(t) => {
            if *t <= Rational::zero() {
                return Err(Error::precondition("δ = e^{−t} needs t > 0"));
            }
            ceil(&(factor * to_big(t)))
        }
        Delta::Value(d) => {
            if *d <= Rational::zero() || *d >= Rational::one() {
                return Err(Error::precondition("δ must lie in (0, 1)"));
            }
            let y = to_big(&d.recip());
            let mut hi_ceiling = 0;
            for terms in [16, 32, 64, 128, 256] {
                let (lo, hi) = ln_bounds(&y, terms);
                let (a, b) = (ceil(&(&factor * lo))?, ceil(&(&factor * hi))?);
                if a == b {
                    return Ok(a);
                }
                hi_ceiling = b;
            }
            Ok(hi_ceiling)
        }
    }
}

/// Lower and upper bounds on `ln y` for `y ≥ 1`.
pub fn ln_bounds(y: &BigRational, terms: usize) -> (BigRational, BigRational) {
    assert!(*y >= BigRational::one(), "ln_bounds needs y ≥ 1");
    let two = BigRational::from_integer(BigInt::from(2));
    let mut k = 0u32;
    let mut m = y.clone();
    while m >= two {
        m /= &two;
        k += 1;
    }
    // ln y = k·ln 2 + ln m, with ln x = 2·atanh((x − 1)/(x + 1))
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let (l2_lo, l2_hi) = atanh_bounds(&third, terms);
    let z = (&m - BigRational::one()) / (&m + BigRational::one());
    let (lm_lo, lm_hi) = atanh_bounds(&z, terms);
    let k = BigRational::from_integer(BigInt::from(k));
    (
        (&k * l2_lo + lm_lo) * &two,
        (&k * l2_hi + lm_hi) * &two,
    )
}

/// Bounds on `atanh z` for `0 ≤ z ≤ 1/3` from the first `terms` series terms
/// and a geometric tail bound.
fn atanh_bounds(z: &BigRational, terms: usize) -> (BigRational, BigRational) {
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = BigRational::zero();
    for j in 0..terms {
        sum += &power / BigInt::from(2 * j + 1);
        power *= &z2;
    }
    let tail = power / BigInt::from(2 * terms + 1) / (BigRational::one() - z2);
    (sum.clone(), sum + tail)
}

/// Vertices `R_1, …, R_ρ` visited by amplified randomness string `index`:
/// the start vertex occupies the high bits, then one port per step, first
/// step most significant.
pub fn walk_vertices(x: &ExpanderGraph, rho: usize, index: usize) -> Vec<usize> {
    let b = x.degree().trailing_zeros() as usize;
    let steps = rho - 1;
    let mut v = index >> (steps * b);
    let mut walk = vec![v];
    for k in 0..steps {
        let port = (index >> ((steps - 1 - k) * b)) & (x.degree() - 1);
        v = x.neighbor(v, port);
        walk.push(v);
    }
    walk
}

/// The amplified verifier: randomness `r + (ρ−1)·log₂ d`, query tuple the
/// union of the walk's tuples in first-occurrence order, decision the AND of
/// every `D_{R_k}` on its own view.
pub fn amplify(v: &TableVerifier, x: &ExpanderGraph, rho: usize) -> Result<TableVerifier> {
    if rho == 0 {
        return Err(Error::precondition("ρ ≥ 1"));
    }
    if x.vertex_count() != v.randomness_count() {
        return Err(Error::precondition(format!(
            "expander has {} vertices, verifier has 2^{} randomness strings",
            x.vertex_count(),
            v.randomness_bits()
        )));
    }
    if !x.degree().is_power_of_two() {
        return Err(Error::precondition(format!("degree {} is not a power of two", x.degree())));
    }
    let port_bits = x.degree().trailing_zeros();
    let r = v.randomness_bits() + (rho as u32 - 1) * port_bits;
    if r > MAX_RANDOMNESS_BITS {
        return Err(Error::TooLarge(format!("amplified randomness of {r} bits")));
    }
    let mut tests = Vec::with_capacity(1 << r);
    let mut q = 1;
    for index in 0..1usize << r {
        let walk = walk_vertices(x, rho, index);
        let mut merged: Vec<usize> = Vec::new();
        for &w in &walk {
            for &i in &v.test(w).queries {
                if !merged.contains(&i) {
                    merged.push(i);
                }
            }
        }
        if merged.len() > MAX_MERGED_QUERIES {
            return Err(Error::TooLarge(format!("merged query tuple of {} positions", merged.len())));
        }
        let m = merged.len();
        // bit offset (from the most significant end) of each walk step's positions
        let slots: Vec<Vec<usize>> = walk
            .iter()
            .map(|&w| {
                v.test(w)
                    .queries
                    .iter()
                    .map(|i| merged.iter().position(|j| j == i).unwrap())
                    .collect()
            })
            .collect();
        let decision = (0..1usize << m)
            .map(|view| {
                walk.iter().zip(&slots).all(|(&w, slot)| {
                    let local = slot
                        .iter()
                        .fold(0usize, |acc, &s| (acc << 1) | (view >> (m - 1 - s) & 1));
                    v.test(w).decision[local]
                })
            })
            .collect();
        q = q.max(m);
        tests.push(LocalTest { queries: merged, decision });
    }
    TableVerifier::new(r, q, v.proof_length(), tests)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degrees: Vec<usize>,
    pub max_degree: usize,
    pub randomness_bits: u32,
    /// `max_i Pr_R[i ∈ I_R]`.
    #[serde(with = "crate::rational::as_string")]
    pub max_query_probability: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_check: Option<KappaCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaCheck {
    #[serde(with = "crate::rational::as_string")]
    pub delta: Rational,
    pub kappa: u32,
    /// `δ^{−κ} / 2^r`.
    #[serde(with = "crate::rational::as_string")]
    pub bound: Rational,
    pub holds: bool,
}

/// Per-position degrees, and optionally whether every position satisfies
/// `Pr[i ∈ I] ≤ δ^{−κ}/2^r`.
pub fn degree_report(v: &TableVerifier, kappa: Option<(Rational, u32)>) -> Result<DegreeReport> {
    let degrees = v.degrees();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let space = v.randomness_count() as i128;
    let kappa_check = match kappa {
        None => None,
        Some((delta, kappa)) => {
            if delta <= Rational::zero() || delta >= Rational::one() {
                return Err(Error::precondition("δ must lie in (0, 1)"));
            }
            let inv = delta.recip();
            let mut power = Rational::one();
            for _ in 0..kappa {
                let numer = power.numer().checked_mul(*inv.numer()).ok_or(Error::Overflow("δ^{−κ}"))?;
                let denom = power.denom().checked_mul(*inv.denom()).ok_or(Error::Overflow("δ^{−κ}"))?;
                power = Rational::new(numer, denom);
            }
            let bound = power / space;
            Some(KappaCheck {
                delta,
                kappa,
                holds: Rational::new(max_degree as i128, space) <= bound,
                bound,
            })
        }
    };
    Ok(DegreeReport {
        max_query_probability: Rational::new(max_degree as i128, space),
        degrees,
        max_degree,
        randomness_bits: v.randomness_bits(),
        kappa_check,
    })
}

/// Union bound over walk steps: every position of the amplified verifier is
/// queried with probability at most `ρ·Δ/2^r`, `Δ` the base maximum degree.
pub fn union_bound_holds(base: &TableVerifier, amplified: &TableVerifier, rho: usize) -> bool {
    let base_max = base.degrees().into_iter().max().unwrap_or(0) as u128;
    let amp_max = amplified.degrees().into_iter().max().unwrap_or(0) as u128;
    // amp_max / 2^{r'} ≤ ρ·base_max / 2^r  ⇔  amp_max · 2^r ≤ ρ·base_max · 2^{r'}
    amp_max * base.randomness_count() as u128
        <= rho as u128 * base_max * amplified.randomness_count() as u128
}
