//! Monte-Carlo check of the sparsification step: keep each curve with
//! probability `p = delta / k` and count the intersecting pairs that stay
//! isolated at their witness point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::p_good;
use crate::error::{Error, Result};
use crate::family::{family_stats, validate_family, ContactFamily, FamilyKind, Forest, ValidateOptions};
use crate::rational::to_f64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparsifyOutcome {
    pub delta: f64,
    pub p: f64,
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub trials: usize,
    pub seed: u64,
    pub mean_good_edges: f64,
    pub std_err: f64,
    /// Sum of the exact per-pair probabilities.
    pub expected_good_edges: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// The lower bound exceeds the upper one, so the run says nothing.
    pub vacuous: bool,
}

struct PairWitness {
    a: usize,
    b: usize,
    /// Curves through the witness point.
    through: Vec<usize>,
    separating: Vec<usize>,
}

fn good(w: &PairWitness, kept: &[bool]) -> bool {
    if !kept[w.a] || !kept[w.b] {
        return false;
    }
    let mut extra = None;
    for &c in &w.through {
        if kept[c] && c != w.a && c != w.b {
            if extra.is_some() {
                return false;
            }
            extra = Some(c);
        }
    }
    extra.is_none_or(|c| w.separating.binary_search(&c).is_err())
}

/// Runs `trials` independent samplings; trial `i` draws from stream `i` of
/// a generator seeded with `seed`.
pub fn sparsify_experiment(
    f: &ContactFamily,
    delta: f64,
    trials: usize,
    seed: u64,
) -> Result<SparsifyOutcome> {
    if f.kind != FamilyKind::Curves {
        return Err(Error::Precondition("sparsification runs on curve families".into()));
    }
    let report = validate_family(f, ValidateOptions::default());
    if !report.is_valid() {
        return Err(Error::InvalidFamily(report.summary()));
    }
    let stats = family_stats(f)?;
    let alpha = stats
        .alpha
        .map(|a| to_f64(&a))
        .ok_or(Error::Undefined("sparsification without intersecting pairs"))?;
    let k = stats.k_effective;
    let p = delta / k as f64;
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Precondition(format!("sampling probability {p} outside [0, 1)")));
    }
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is needed".into()));
    }
    let forest = Forest::new(&f.parent)?;
    let n = f.curve_count();
    let mut witnesses = Vec::with_capacity(stats.m);
    let mut expected = 0.0;
    let mut seen = std::collections::HashSet::new();
    for p_point in &f.contacts {
        for (i, &a) in p_point.members.iter().enumerate() {
            for &b in &p_point.members[i + 1..] {
                let (a, b) = (a.min(b), a.max(b));
                // Contacts are scanned by increasing id, so the first hit is the witness.
                if a == b || !seen.insert((a, b)) {
                    continue;
                }
                let separating = forest.separating_set(a, b);
                expected += p_good(p_point.members.len(), separating.len(), p)?;
                witnesses.push(PairWitness {
                    a,
                    b,
                    through: p_point.members.clone(),
                    separating,
                });
            }
        }
    }
    let counts: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let kept: Vec<bool> = (0..n).map(|_| rng.random_bool(p)).collect();
            witnesses.iter().filter(|w| good(w, &kept)).count() as f64
        })
        .collect();
    let mean = counts.iter().sum::<f64>() / trials as f64;
    let var = if trials > 1 {
        counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    let m = stats.m;
    let kf = k as f64;
    let lower = p * p * (-delta).exp() * m as f64 * (1.0 + delta * (1.0 - alpha - 2.0 / kf));
    let upper = 3.0 * p * n as f64;
    Ok(SparsifyOutcome {
        delta,
        p,
        k,
        n,
        m,
        alpha,
        trials,
        seed,
        mean_good_edges: mean,
        std_err: (var / trials as f64).sqrt(),
        expected_good_edges: expected,
        lower_bound: lower,
        upper_bound: upper,
        vacuous: lower > upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyBuilder;

    fn pair() -> ContactFamily {
        let mut b = FamilyBuilder::new(FamilyKind::Curves, 2);
        let x = b.curve("x", None);
        let y = b.curve("y", None);
        b.contact("p", vec![x, y], None);
        b.build()
    }

    #[test]
    fn zero_probability_gives_nothing() {
        let out = sparsify_experiment(&pair(), 0.0, 50, 3).unwrap();
        assert_eq!(out.mean_good_edges, 0.0);
        assert_eq!(out.std_err, 0.0);
    }

    #[test]
    fn single_pair_converges_to_quarter() {
        let out = sparsify_experiment(&pair(), 1.0, 40_000, 7).unwrap();
        assert_eq!(out.p, 0.5);
        assert_eq!(out.expected_good_edges, 0.25);
        assert!((out.mean_good_edges - 0.25).abs() < 4.0 * out.std_err);
    }

    #[test]
    fn reproducible() {
        let a = sparsify_experiment(&pair(), 1.0, 500, 11).unwrap();
        let b = sparsify_experiment(&pair(), 1.0, 500, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_family_is_undefined() {
        let f = ContactFamily::empty(FamilyKind::Curves, 2);
        assert!(matches!(sparsify_experiment(&f, 1.0, 5, 0), Err(Error::Undefined(_))));
    }
}
