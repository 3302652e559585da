//! Choice of the product `Zk` that centres the vertex on a target range.
//!
//! Maximizing `∫ dn / ln((n − K)² + H/4)` over `[n₁, n₂]` places the vertex
//! `K = (2Zk − 1)/2` at the midpoint, i.e. `Zk = (n₁ + n₂ + 1)/2`. When that
//! is not an integer both its floor and its rounded value are candidates.
//! This "heuristic" optimum is kept separate from the "empirical" optimum
//! found by sweeping neighbouring `Zk` values; they do not always agree.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::prime_count;
use crate::error::{Error, Result};
use crate::polynomial::{HeegnerNumber, QuadraticPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Scored {
    pub zk: u64,
    pub prime_count: usize,
    pub composite_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptimizationResult {
    pub n_lo: i64,
    pub n_hi: i64,
    pub candidates: Vec<u64>,
    pub scored: Vec<Scored>,
    /// Best of the closed-form candidates (smaller `Zk` wins ties).
    pub best: Scored,
    pub sweep: Option<Vec<Scored>>,
    /// Best of the sweep, when one was run.
    pub empirical_best: Option<Scored>,
}

pub fn optimal_zk(n_lo: i64, n_hi: i64) -> Result<Vec<u64>> {
    if n_lo < 0 || n_hi <= n_lo {
        return Err(Error::InvalidRange(format!("need 0 ≤ n_lo < n_hi, got [{n_lo}, {n_hi}]")));
    }
    let s = (n_lo + n_hi + 1) as u64;
    Ok(if s % 2 == 0 {
        vec![s / 2]
    } else {
        // floor(s/2) and round(s/2), rounding halves up
        vec![s / 2, s / 2 + 1]
    })
}

fn score(zk: u64, h: HeegnerNumber, n_lo: i64, n_hi: i64) -> Result<Scored> {
    let poly = QuadraticPolynomial::from_zk(&BigUint::from(zk), h)?;
    let primes = prime_count(&poly, n_lo, n_hi)?;
    let total = (n_hi - n_lo + 1) as usize;
    Ok(Scored { zk, prime_count: primes, composite_count: total - primes })
}

fn pick_best(scored: &[Scored]) -> Option<Scored> {
    scored
        .iter()
        .copied()
        .min_by(|a, b| b.prime_count.cmp(&a.prime_count).then(a.zk.cmp(&b.zk)))
}

pub fn evaluate_candidates(
    n_lo: i64,
    n_hi: i64,
    h: HeegnerNumber,
    candidates: &[u64],
) -> Result<OptimizationResult> {
    if n_lo > n_hi {
        return Err(Error::EmptyRange { lo: n_lo, hi: n_hi });
    }
    let mut candidates = candidates.to_vec();
    candidates.sort_unstable();
    candidates.dedup();
    let scored = candidates
        .iter()
        .map(|&zk| score(zk, h, n_lo, n_hi))
        .collect::<Result<Vec<_>>>()?;
    let best = pick_best(&scored)
        .ok_or_else(|| Error::InvalidRange("no candidates to evaluate".into()))?;
    Ok(OptimizationResult {
        n_lo,
        n_hi,
        candidates,
        scored,
        best,
        sweep: None,
        empirical_best: None,
    })
}

/// Scores every `Zk` within `window` of `⌊(n₁ + n₂ + 1)/2⌋`, sorted by `Zk`.
pub fn sweep_verify(n_lo: i64, n_hi: i64, h: HeegnerNumber, window: u64) -> Result<Vec<Scored>> {
    if n_lo > n_hi {
        return Err(Error::EmptyRange { lo: n_lo, hi: n_hi });
    }
    let center = ((n_lo + n_hi + 1).max(0) / 2) as u64;
    let lo = center.saturating_sub(window);
    let hi = center + window;
    (lo..=hi).into_par_iter().map(|zk| score(zk, h, n_lo, n_hi)).collect()
}

/// Closed-form candidates, optionally checked against a sweep.
pub fn optimize(n_lo: i64, n_hi: i64, h: HeegnerNumber, sweep_window: Option<u64>) -> Result<OptimizationResult> {
    let candidates = optimal_zk(n_lo, n_hi)?;
    let mut result = evaluate_candidates(n_lo, n_hi, h, &candidates)?;
    if let Some(window) = sweep_window {
        let sweep = sweep_verify(n_lo, n_hi, h, window)?;
        result.empirical_best = pick_best(&sweep);
        result.sweep = Some(sweep);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h163() -> HeegnerNumber {
        HeegnerNumber::new(163).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(optimal_zk(0, 99).unwrap(), vec![50]);
        assert_eq!(optimal_zk(21, 95).unwrap(), vec![58, 59]);
        assert_eq!(optimal_zk(0, 1).unwrap(), vec![1]);
        assert!(matches!(optimal_zk(5, 5), Err(Error::InvalidRange(_))));
        assert!(matches!(optimal_zk(-1, 5), Err(Error::InvalidRange(_))));
    }

    #[test]
    fn candidate_scores() {
        let r = evaluate_candidates(0, 99, h163(), &[50]).unwrap();
        assert_eq!(r.best, Scored { zk: 50, prime_count: 92, composite_count: 8 });
        let r = evaluate_candidates(21, 95, h163(), &[59, 58]).unwrap();
        assert_eq!(r.scored.len(), 2);
        assert!(r.scored.iter().all(|s| s.prime_count == 75 && s.composite_count == 0));
        assert_eq!(r.best.zk, 58);
    }

    #[test]
    fn single_point_range() {
        let r = evaluate_candidates(0, 0, h163(), &[0]).unwrap();
        // f(0) = 41 for Zk = 0
        assert_eq!(r.best.prime_count, 1);
    }

    #[test]
    fn sweep_exposes_the_empirical_maximum() {
        let sweep = sweep_verify(0, 99, h163(), 50).unwrap();
        assert_eq!(sweep.len(), 101);
        assert!(sweep.windows(2).all(|w| w[0].zk < w[1].zk));
        let max = sweep.iter().map(|s| s.prime_count).max().unwrap();
        assert_eq!(max, 95);
        let at_max: Vec<u64> = sweep.iter().filter(|s| s.prime_count == 95).map(|s| s.zk).collect();
        assert_eq!(at_max, (35..=40).chain(60..=65).collect::<Vec<_>>());

        let only = sweep_verify(0, 99, h163(), 0).unwrap();
        assert_eq!(only.len(), 1);
        assert_eq!(only[0].zk, 50);
    }

    #[test]
    fn labels_heuristic_and_empirical_separately() {
        let r = optimize(0, 99, h163(), Some(50)).unwrap();
        assert_eq!(r.best.zk, 50);
        assert_eq!(r.best.prime_count, 92);
        let emp = r.empirical_best.unwrap();
        assert_eq!((emp.zk, emp.prime_count), (35, 95));
        assert!(emp.prime_count >= r.best.prime_count);
    }

    #[test]
    fn growing_window_never_lowers_the_max() {
        let mut prev = 0;
        for w in 0..12 {
            let m = sweep_verify(21, 95, h163(), w).unwrap().iter().map(|s| s.prime_count).max().unwrap();
            assert!(m >= prev);
            prev = m;
        }
    }

    #[test]
    fn vertex_near_midpoint() {
        for (lo, hi) in [(0i64, 99i64), (21, 95), (3, 4), (10, 1000), (7, 8)] {
            for zk in optimal_zk(lo, hi).unwrap() {
                // |(2zk − 1)/2 − (lo + hi)/2| ≤ 1  ⇔  |2zk − 1 − lo − hi| ≤ 2
                assert!((2 * zk as i64 - 1 - lo - hi).abs() <= 2);
            }
        }
    }
}
