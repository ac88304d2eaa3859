//! Regular multigraphs given by rotation maps, with a spectral bound on the
//! second adjacency eigenvalue.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rayleigh-quotient stability required of the power iteration.
pub const STABILITY: f64 = 1e-9;
/// Added to the power-iteration estimate before it is recorded as `λ`.
pub const CERTIFICATION_SLACK: f64 = 1e-6;

const MIN_ITERATIONS: usize = 200;
const MAX_ITERATIONS: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExpander", into = "RawExpander")]
pub struct ExpanderGraph {
    n: usize,
    d: usize,
    /// `rotation[v·d + i] = (w, j)`: port `i` of `v` leads to port `j` of `w`.
    rotation: Vec<(usize, usize)>,
    lambda: f64,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawExpander {
    n: usize,
    d: usize,
    rotation: Vec<Vec<(usize, usize)>>,
    lambda: f64,
    ratio: f64,
}

impl TryFrom<RawExpander> for ExpanderGraph {
    type Error = Error;
    fn try_from(raw: RawExpander) -> Result<Self> {
        if raw.rotation.len() != raw.n || raw.rotation.iter().any(|r| r.len() != raw.d) {
            return Err(Error::malformed("rotation map must list d ports per vertex"));
        }
        let g = ExpanderGraph::from_rotation(raw.n, raw.d, raw.rotation.concat())?;
        // a stored bound below the recomputed estimate is not a certificate
        if raw.lambda + CERTIFICATION_SLACK < g.lambda - CERTIFICATION_SLACK {
            return Err(Error::malformed(format!(
                "stored lambda {} is below the spectral estimate {}",
                raw.lambda, g.lambda
            )));
        }
        Ok(g)
    }
}

impl From<ExpanderGraph> for RawExpander {
    fn from(g: ExpanderGraph) -> Self {
        let ratio = g.ratio();
        RawExpander {
            n: g.n,
            d: g.d,
            rotation: g.rotation.chunks(g.d).map(<[_]>::to_vec).collect(),
            lambda: g.lambda,
            ratio,
        }
    }
}

impl ExpanderGraph {
    /// Validates the rotation map and certifies `λ` numerically.
    pub fn from_rotation(n: usize, d: usize, rotation: Vec<(usize, usize)>) -> Result<Self> {
        let mut g = Self::unchecked(n, d, rotation)?;
        g.lambda = certified_lambda(&g);
        Ok(g)
    }

    fn unchecked(n: usize, d: usize, rotation: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::malformed("expander needs n ≥ 1 and d ≥ 1"));
        }
        if rotation.len() != n * d {
            return Err(Error::malformed("rotation map has the wrong size"));
        }
        for v in 0..n {
            for i in 0..d {
                let (w, j) = rotation[v * d + i];
                if w >= n || j >= d {
                    return Err(Error::IndexOutOfRange { index: w.max(j), limit: n.max(d) });
                }
                if rotation[w * d + j] != (v, i) {
                    return Err(Error::malformed(format!(
                        "rotation map is not an involution at ({v}, {i})"
                    )));
                }
            }
        }
        Ok(Self { n, d, rotation, lambda: f64::NAN })
    }

    /// `K_n`: degree `n − 1`, `λ = 1`.
    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::precondition("K_n needs n ≥ 2"));
        }
        let d = n - 1;
        let rotation = (0..n)
            .flat_map(|v| {
                (0..d).map(move |i| {
                    let w = if i < v { i } else { i + 1 };
                    let j = if v < w { v } else { v - 1 };
                    (w, j)
                })
            })
            .collect();
        let mut g = Self::unchecked(n, d, rotation)?;
        g.lambda = 1.0;
        Ok(g)
    }

    /// Complete graph with one loop per vertex (all-ones adjacency): degree
    /// `n`, `λ = 0`.
    pub fn complete_with_loops(n: usize) -> Result<Self> {
        let rotation = (0..n).flat_map(|v| (0..n).map(move |i| (i, v))).collect();
        let mut g = Self::unchecked(n, n, rotation)?;
        g.lambda = 0.0;
        Ok(g)
    }

    /// Configuration-model random `d`-regular multigraph on `n` vertices,
    /// regenerated with derived seeds until `λ/d < target_ratio`.
    pub fn random(n: usize, d: usize, target_ratio: f64, seed: u64, attempts: usize) -> Result<Self> {
        if d < 3 {
            return Err(Error::precondition(format!("degree {d} < 3")));
        }
        if (n * d) % 2 == 1 {
            return Err(Error::precondition("n·d must be even"));
        }
        let mut best = f64::INFINITY;
        for attempt in 0..attempts {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let mut points: Vec<usize> = (0..n * d).collect();
            points.shuffle(&mut rng);
            let mut rotation = vec![(0, 0); n * d];
            for pair in points.chunks(2) {
                let (p, q) = (pair[0], pair[1]);
                rotation[p] = (q / d, q % d);
                rotation[q] = (p / d, p % d);
            }
            let g = Self::from_rotation(n, d, rotation)?;
            if g.ratio() < target_ratio {
                return Ok(g);
            }
            best = best.min(g.ratio());
        }
        Err(Error::AttemptsExhausted(format!(
            "no {d}-regular graph on {n} vertices with ratio < {target_ratio} in {attempts} attempts (best {best:.6})"
        )))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn rotate(&self, v: usize, port: usize) -> (usize, usize) {
        self.rotation[v * self.d + port]
    }

    pub fn neighbor(&self, v: usize, port: usize) -> usize {
        self.rotation[v * self.d + port].0
    }

    /// Certified upper bound on `max(|λ₂|, |λ_n|)`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn ratio(&self) -> f64 {
        self.lambda / self.d as f64
    }

    /// `λ` as an exact rational (the binary value of the stored float).
    pub fn lambda_exact(&self) -> BigRational {
        BigRational::from_float(self.lambda).expect("lambda is finite")
    }

    /// `λ/d` as an exact rational.
    pub fn ratio_exact(&self) -> BigRational {
        self.lambda_exact() / BigInt::from(self.d)
    }

    /// Dense adjacency counts (loops contribute one per port).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut a = vec![vec![0; self.n]; self.n];
        for v in 0..self.n {
            for i in 0..self.d {
                a[v][self.neighbor(v, i)] += 1;
            }
        }
        a
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (v, o) in out.iter_mut().enumerate() {
            *o = (0..self.d).map(|i| x[self.neighbor(v, i)]).sum();
        }
    }
}

/// Power iteration on `A²` restricted to the complement of the all-ones
/// vector; returns `sqrt` of the stabilized Rayleigh quotient plus slack.
fn certified_lambda(g: &ExpanderGraph) -> f64 {
    let n = g.n;
    if n == 1 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut prev = f64::NAN;
    let mut quotient = 0.0;
    for it in 0..MAX_ITERATIONS {
        deflate(&mut x);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return CERTIFICATION_SLACK;
        }
        x.iter_mut().for_each(|v| *v /= norm);
        g.apply(&x, &mut y);
        deflate(&mut y);
        quotient = y.iter().map(|v| v * v).sum::<f64>();
        g.apply(&y, &mut z);
        std::mem::swap(&mut x, &mut z);
        if it >= MIN_ITERATIONS && (quotient - prev).abs() <= STABILITY {
            break;
        }
        prev = quotient;
    }
    quotient.max(0.0).sqrt() * (1.0 + CERTIFICATION_SLACK) + CERTIFICATION_SLACK
}

fn deflate(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}
