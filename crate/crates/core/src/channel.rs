//! Corruption-pattern sampling (uniform-weight and i.i.d. models), the
//! binary entropy function and its inverse, and the capacity-gap thresholds
//! for the four rate/channel regimes.
//!
//! All samplers take an explicit RNG handle; there is no global state.
//! Parallel harnesses derive one independent substream per trial with
//! [`trial_rng`], so results do not depend on the worker count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::LabError;
use crate::gf2::BitVector;

/// A corruption pattern: the set `U` of corrupted coordinates inside a
/// blocklength-`n` word. Indices are kept sorted and distinct.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Pattern {
    n: usize,
    support: Vec<usize>,
}

impl Pattern {
    /// # Panics
    ///
    /// Panics if indices repeat or fall outside `0..n`.
    pub fn new(n: usize, mut support: Vec<usize>) -> Self {
        support.sort_unstable();
        assert!(
            support.windows(2).all(|w| w[0] < w[1]),
            "pattern indices must be distinct"
        );
        if let Some(&last) = support.last() {
            assert!(last < n, "pattern index {last} out of range for n = {n}");
        }
        Pattern { n, support }
    }

    pub fn empty(n: usize) -> Self {
        Pattern { n, support: vec![] }
    }

    pub fn full(n: usize) -> Self {
        Pattern {
            n,
            support: (0..n).collect(),
        }
    }

    pub fn from_indicator(v: &BitVector) -> Self {
        Pattern {
            n: v.len(),
            support: v.iter_ones().collect(),
        }
    }

    /// The characteristic vector of the pattern.
    pub fn indicator(&self) -> BitVector {
        BitVector::from_support(self.n, &self.support)
    }

    pub fn complement(&self) -> Pattern {
        let mut inside = vec![false; self.n];
        for &i in &self.support {
            inside[i] = true;
        }
        Pattern {
            n: self.n,
            support: (0..self.n).filter(|&i| !inside[i]).collect(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.support.len()
    }

    #[inline]
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn contains(&self, i: usize) -> bool {
        self.support.binary_search(&i).is_ok()
    }
}

/// How corrupted coordinates are drawn.
///
/// `UniformWeight(s)` draws a uniformly random subset of exactly
/// `ceil(s)` coordinates; `Iid(p)` includes each coordinate independently
/// with probability `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CorruptionModel {
    UniformWeight(f64),
    Iid(f64),
}

impl CorruptionModel {
    pub fn validate(&self, n: usize) -> Result<(), LabError> {
        match *self {
            CorruptionModel::UniformWeight(s) => {
                if !(0.0..=n as f64).contains(&s) {
                    return Err(LabError::Domain(format!(
                        "uniform weight {s} outside [0, {n}]"
                    )));
                }
            }
            CorruptionModel::Iid(p) => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(LabError::Domain(format!("probability {p} outside [0, 1]")));
                }
            }
        }
        Ok(())
    }

    /// Short label for CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            CorruptionModel::UniformWeight(_) => "uniform",
            CorruptionModel::Iid(_) => "iid",
        }
    }

    /// The model parameter (`s` or `p`) for CSV output.
    pub fn parameter(&self) -> f64 {
        match *self {
            CorruptionModel::UniformWeight(s) => s,
            CorruptionModel::Iid(p) => p,
        }
    }
}

/// Draw a corruption pattern from the model. Uniform-weight sampling uses a
/// partial Fisher-Yates shuffle (exact, O(n)); non-integer weights are
/// rounded up. Deterministic given the RNG state.
///
/// # Panics
///
/// Panics if the model is invalid for `n` (weight above `n`, probability
/// outside `[0, 1]`).
pub fn sample_pattern<R: Rng + ?Sized>(model: &CorruptionModel, n: usize, rng: &mut R) -> Pattern {
    model.validate(n).unwrap();
    match *model {
        CorruptionModel::UniformWeight(s) => {
            let w = s.ceil() as usize;
            let mut idx: Vec<usize> = (0..n).collect();
            for i in 0..w {
                let j = rng.random_range(i..n);
                idx.swap(i, j);
            }
            idx.truncate(w);
            Pattern::new(n, idx)
        }
        CorruptionModel::Iid(p) => {
            let support = (0..n).filter(|_| rng.random_bool(p)).collect();
            Pattern::new(n, support)
        }
    }
}

/// Draw `s` points of `F_2^m` independently and uniformly, with
/// replacement (duplicates allowed).
pub fn sample_points_iid<R: Rng + ?Sized>(m: u32, s: usize, rng: &mut R) -> Vec<u64> {
    let n = 1u64 << m;
    (0..s).map(|_| rng.random_range(0..n)).collect()
}

/// The binary entropy function `h(p) = -p log2 p - (1-p) log2 (1-p)`, with
/// `h(0) = h(1) = 0`.
///
/// # Panics
///
/// Panics if `p` is outside `[0, 1]`.
pub fn entropy(p: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&p),
        "entropy argument {p} outside [0, 1]"
    );
    if p == 0.0 || p == 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Inverse of the entropy function on `[0, 1/2]`: the unique `p` in
/// `[0, 1/2]` with `h(p) = y`, found by bisection to an absolute tolerance
/// of `1e-12`.
///
/// # Panics
///
/// Panics if `y` is outside `[0, 1]`.
pub fn inv_entropy(y: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&y),
        "inverse entropy argument {y} outside [0, 1]"
    );
    if y == 0.0 {
        return 0.0;
    }
    if y == 1.0 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if entropy(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The four capacity-gap regimes: a rate-`R` code is `eps`-close to
/// capacity when it corrects the corruption probability returned by
/// [`capacity_gap_threshold`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapacityRegime {
    LowRateBec,
    LowRateBsc,
    HighRateBec,
    HighRateBsc,
}

/// The corruption probability a rate-`R` code must correct to be
/// `eps`-close to capacity in the given regime:
///
/// * low-rate BEC: `1 - R(1 + eps)`
/// * low-rate BSC: `inv_entropy(1 - R(1 + eps))`
/// * high-rate BEC: `(1 - R)(1 - eps)`
/// * high-rate BSC: `inv_entropy((1 - R)(1 - eps))`
///
/// BEC results are clamped to `[0, 1]`; BSC results lie in `[0, 1/2]` by
/// construction. Errors when a BSC entropy argument falls outside `[0, 1]`.
pub fn capacity_gap_threshold(
    regime: CapacityRegime,
    rate: f64,
    eps: f64,
) -> Result<f64, LabError> {
    if !(0.0 < rate && rate < 1.0) {
        return Err(LabError::Domain(format!("rate {rate} outside (0, 1)")));
    }
    if eps < 0.0 {
        return Err(LabError::Domain(format!("eps {eps} negative")));
    }
    let checked_inv = |arg: f64| -> Result<f64, LabError> {
        if !(0.0..=1.0).contains(&arg) {
            return Err(LabError::Domain(format!(
                "entropy argument {arg} outside [0, 1]"
            )));
        }
        Ok(inv_entropy(arg))
    };
    match regime {
        CapacityRegime::LowRateBec => Ok((1.0 - rate * (1.0 + eps)).clamp(0.0, 1.0)),
        CapacityRegime::HighRateBec => Ok(((1.0 - rate) * (1.0 - eps)).clamp(0.0, 1.0)),
        CapacityRegime::LowRateBsc => checked_inv(1.0 - rate * (1.0 + eps)),
        CapacityRegime::HighRateBsc => checked_inv((1.0 - rate) * (1.0 - eps)),
    }
}

/// SplitMix64 step, used to hash trial indices into substream seeds.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The per-trial substream rule: trial `t` of a run with master seed `seed`
/// uses a ChaCha8 stream seeded with `seed XOR splitmix64(t)`. Any single
/// trial can therefore be re-run in isolation, and merged parallel runs do
/// not depend on the worker count.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ splitmix64(trial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn pattern_extremes() {
        let mut rng = trial_rng(1, 0);
        let p = sample_pattern(&CorruptionModel::UniformWeight(0.0), 9, &mut rng);
        assert_eq!(p.weight(), 0);
        let p = sample_pattern(&CorruptionModel::UniformWeight(9.0), 9, &mut rng);
        assert_eq!(p.weight(), 9);
        assert_eq!(p, Pattern::full(9));
    }

    #[test]
    fn pattern_complement_and_indicator() {
        let p = Pattern::new(6, vec![4, 1]);
        assert_eq!(p.support(), &[1, 4]);
        assert_eq!(p.indicator().to_string(), "010010");
        assert_eq!(p.complement().support(), &[0, 2, 3, 5]);
        assert!(p.contains(4) && !p.contains(0));
        assert_eq!(Pattern::from_indicator(&p.indicator()), p);
    }

    #[test]
    fn non_integer_weight_is_ceiled() {
        let mut rng = trial_rng(2, 0);
        let p = sample_pattern(&CorruptionModel::UniformWeight(2.3), 10, &mut rng);
        assert_eq!(p.weight(), 3);
    }

    #[test]
    fn iid_mean_weight_matches_binomial() {
        // mean over 100 seeds within 3 sigma of n*p
        let n = 100_000;
        let p = 0.3;
        let mut total = 0usize;
        for seed in 0..100 {
            let mut rng = trial_rng(42, seed);
            total += sample_pattern(&CorruptionModel::Iid(p), n, &mut rng).weight();
        }
        let mean = total as f64 / 100.0;
        let sigma_mean = (n as f64 * p * (1.0 - p) / 100.0).sqrt();
        assert!(
            (mean - n as f64 * p).abs() <= 3.0 * sigma_mean,
            "mean {mean} too far from {}",
            n as f64 * p
        );
    }

    #[test]
    fn uniform_subsets_are_equidistributed() {
        // all 10 two-subsets of a 5-element set within 3 sigma of 1/10
        let draws = 100_000;
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for t in 0..draws {
            let mut rng = trial_rng(7, t);
            let p = sample_pattern(&CorruptionModel::UniformWeight(2.0), 5, &mut rng);
            *counts.entry(p.support().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 10);
        let sigma = (0.1 * 0.9 / draws as f64).sqrt();
        for (subset, c) in counts {
            let f = c as f64 / draws as f64;
            assert!((f - 0.1).abs() <= 3.0 * sigma, "subset {subset:?} freq {f}");
        }
    }

    #[test]
    fn iid_points_are_balanced() {
        let mut rng = trial_rng(3, 0);
        let pts = sample_points_iid(1, 10_000, &mut rng);
        let ones = pts.iter().filter(|&&p| p == 1).count() as f64;
        let sigma = (10_000.0f64 * 0.25).sqrt();
        assert!((ones - 5000.0).abs() <= 3.0 * sigma);
        assert!(sample_points_iid(5, 0, &mut rng).is_empty());
    }

    #[test]
    fn sampling_is_reproducible() {
        let p1 = sample_pattern(&CorruptionModel::Iid(0.4), 64, &mut trial_rng(5, 17));
        let p2 = sample_pattern(&CorruptionModel::Iid(0.4), 64, &mut trial_rng(5, 17));
        assert_eq!(p1, p2);
        assert_eq!(
            sample_points_iid(6, 9, &mut trial_rng(5, 18)),
            sample_points_iid(6, 9, &mut trial_rng(5, 18))
        );
    }

    #[test]
    fn entropy_known_values() {
        assert_eq!(entropy(0.5), 1.0);
        assert_eq!(entropy(0.0), 0.0);
        assert_eq!(entropy(1.0), 0.0);
        for p in [0.01, 0.2, 0.37, 0.44] {
            assert!((entropy(p) - entropy(1.0 - p)).abs() < 1e-14);
        }
    }

    #[test]
    fn inv_entropy_round_trip() {
        for i in 0..=10 {
            let y = i as f64 / 10.0;
            assert!((entropy(inv_entropy(y)) - y).abs() < 1e-10, "y = {y}");
        }
    }

    #[test]
    fn inv_entropy_near_half_expansion() {
        // h(1/2 - xi/2) = 1 - xi^2 / (2 ln 2) + O(xi^4)
        let xi = 1e-3;
        let y = 1.0 - xi * xi / (2.0 * std::f64::consts::LN_2);
        let p = inv_entropy(y);
        assert!((p - (0.5 - xi / 2.0)).abs() < 1e-9, "p = {p}");
    }

    #[test]
    fn capacity_thresholds_table() {
        let p = capacity_gap_threshold(CapacityRegime::LowRateBec, 0.01, 0.0).unwrap();
        assert!((p - 0.99).abs() < 1e-12);
        let p = capacity_gap_threshold(CapacityRegime::HighRateBec, 0.9, 0.0).unwrap();
        assert!((p - 0.1).abs() < 1e-12);
        let p = capacity_gap_threshold(CapacityRegime::LowRateBsc, 0.1, 0.0).unwrap();
        assert!((p - 0.3160).abs() < 5e-5, "p = {p}");
        // BSC threshold stays in [0, 1/2]
        let p = capacity_gap_threshold(CapacityRegime::HighRateBsc, 0.5, 0.0).unwrap();
        assert!((0.0..=0.5).contains(&p));
    }

    #[test]
    fn capacity_threshold_domain_errors() {
        assert!(capacity_gap_threshold(CapacityRegime::LowRateBsc, 0.9, 3.0).is_err());
        assert!(capacity_gap_threshold(CapacityRegime::LowRateBec, 0.0, 0.1).is_err());
    }

    #[test]
    fn substreams_differ_per_trial() {
        let a = sample_points_iid(10, 4, &mut trial_rng(9, 0));
        let b = sample_points_iid(10, 4, &mut trial_rng(9, 1));
        assert_ne!(a, b);
    }
}
