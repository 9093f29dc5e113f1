//! ρ-correlated pairs on finite product spaces.
//!
//! Points of `Ω = Ω_1 × … × Ω_n` are indexed in mixed radix with the first
//! coordinate most significant.

use crate::error::{ensure_within, Error, Result};
use crate::rng::{stream, unit_f64};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct ProductSpace<S> {
    measures: Vec<Vec<S>>,
}

impl<S: Scalar> ProductSpace<S> {
    /// One measure per coordinate; atoms must be positive and sum to 1.
    pub fn new(measures: Vec<Vec<S>>) -> Result<Self> {
        if measures.is_empty() {
            return Err(Error::Input("product space needs at least one coordinate".into()));
        }
        for (i, mu) in measures.iter().enumerate() {
            if mu.is_empty() {
                return Err(Error::Input(format!("coordinate {} has an empty alphabet", i + 1)));
            }
            if let Some(a) = mu.iter().position(|p| *p <= S::zero()) {
                return Err(Error::Input(format!("atom {} of coordinate {} is not positive", a + 1, i + 1)));
            }
            let total = mu.iter().fold(S::zero(), |acc, p| acc + p.clone());
            if !total.approx_eq(&S::one()) {
                return Err(Error::Input(format!("measure of coordinate {} sums to {total}", i + 1)));
            }
        }
        Ok(ProductSpace { measures })
    }

    pub fn coordinates(&self) -> usize {
        self.measures.len()
    }

    pub fn measures(&self) -> &[Vec<S>] {
        &self.measures
    }

    pub fn size(&self) -> usize {
        self.measures.iter().map(Vec::len).product()
    }

    /// Coordinates of point `idx`.
    pub fn point(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.measures.len()];
        for (slot, mu) in out.iter_mut().zip(&self.measures).rev() {
            *slot = idx % mu.len();
            idx /= mu.len();
        }
        out
    }

    pub fn index(&self, point: &[usize]) -> usize {
        point
            .iter()
            .zip(&self.measures)
            .fold(0, |acc, (&c, mu)| acc * mu.len() + c)
    }

    pub fn prob(&self, idx: usize) -> S {
        self.point(idx)
            .iter()
            .zip(&self.measures)
            .fold(S::one(), |acc, (&c, mu)| acc * mu[c].clone())
    }

    /// `μ(A)` for a membership vector over `Ω`.
    pub fn measure_of(&self, set: &[bool]) -> S {
        set.iter()
            .enumerate()
            .filter(|(_, &inside)| inside)
            .fold(S::zero(), |acc, (idx, _)| acc + self.prob(idx))
    }
}

/// `X ~ μ` and `Y` that keeps each `X_i` with probability `ρ`, otherwise
/// redraws it from `μ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct RhoCorrelated<S> {
    space: ProductSpace<S>,
    rho: S,
}

impl<S: Scalar> RhoCorrelated<S> {
    pub fn new(space: ProductSpace<S>, rho: S) -> Result<Self> {
        if rho < S::zero() || rho > S::one() {
            return Err(Error::Input(format!("ρ = {rho} must lie in [0, 1]")));
        }
        Ok(RhoCorrelated { space, rho })
    }

    pub fn space(&self) -> &ProductSpace<S> {
        &self.space
    }

    pub fn rho(&self) -> &S {
        &self.rho
    }

    /// `Pr[X = x, Y = y]`.
    pub fn joint_prob(&self, x: usize, y: usize) -> S {
        let (px, py) = (self.space.point(x), self.space.point(y));
        let mut acc = S::one();
        for ((a, b), mu) in px.iter().zip(&py).zip(&self.space.measures) {
            let stay = if a == b { self.rho.clone() } else { S::zero() };
            let moved = (S::one() - self.rho.clone()) * mu[*b].clone();
            acc = acc * mu[*a].clone() * (stay + moved);
        }
        acc
    }

    /// `Pr[X ∈ A, Y ∈ B]`, applying the per-coordinate transition operator
    /// to `1_B` one coordinate at a time.
    pub fn prob_in(&self, a: &[bool], b: &[bool]) -> Result<S> {
        let n = self.space.size();
        if a.len() != n || b.len() != n {
            return Err(Error::Input(format!("sets must be membership vectors of length {n}")));
        }
        let mut v: Vec<S> = b.iter().map(|&inside| if inside { S::one() } else { S::zero() }).collect();
        let mut stride = n;
        for mu in &self.space.measures {
            let size = mu.len();
            stride /= size;
            let mut next = v.clone();
            for outer in (0..n).step_by(stride * size) {
                for inner in 0..stride {
                    let base = outer + inner;
                    let avg = (0..size).fold(S::zero(), |acc, c| acc + mu[c].clone() * v[base + c * stride].clone());
                    let mix = (S::one() - self.rho.clone()) * avg;
                    for c in 0..size {
                        next[base + c * stride] = self.rho.clone() * v[base + c * stride].clone() + mix.clone();
                    }
                }
            }
            v = next;
        }
        Ok(a.iter()
            .enumerate()
            .filter(|(_, &inside)| inside)
            .fold(S::zero(), |acc, (x, _)| acc + self.space.prob(x) * v[x].clone()))
    }

    /// `Pr[X = x, Y = y]` at index `x * |Ω| + y`.
    pub fn exact_pmf(&self, cap: u128) -> Result<Vec<S>> {
        let n = self.space.size();
        ensure_within("ρ-correlated support |Ω|²", (n as u128) * (n as u128), cap)?;
        Ok((0..n * n).map(|idx| self.joint_prob(idx / n, idx % n)).collect())
    }

    /// `(x, y)` from stream `index`; three generator outputs per
    /// coordinate.
    pub fn sample(&self, seed: u64, index: u64) -> (usize, usize) {
        let mut rng = stream(seed, "rho-correlated", index);
        let rho = self.rho.to_f64().unwrap_or(0.0);
        let mut xs = Vec::with_capacity(self.space.coordinates());
        let mut ys = Vec::with_capacity(self.space.coordinates());
        for mu in &self.space.measures {
            let draw = |u: f64| {
                let mut acc = 0.0;
                for (c, p) in mu.iter().enumerate() {
                    acc += p.to_f64().unwrap_or(0.0);
                    if u < acc {
                        return c;
                    }
                }
                mu.len() - 1
            };
            let x = draw(unit_f64(&mut rng));
            let keep = unit_f64(&mut rng) < rho;
            let fresh = draw(unit_f64(&mut rng));
            xs.push(x);
            ys.push(if keep { x } else { fresh });
        }
        (self.space.index(&xs), self.space.index(&ys))
    }
}
