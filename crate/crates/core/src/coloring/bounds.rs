//! Closed-form bounds on the chromatic number and the probability that a
//! sampled pair survives sparsification.

use std::f64::consts::E;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{FamilyKind, FamilyStats};
use crate::rational::to_f64;

/// `1 / (1 + 1/(16e))`: largest average distance ratio for which the
/// coloring bound `beta(alpha) k` has been shown to apply to all families.
pub const SPARSE_ALPHA_LIMIT: f64 = 1.0 / (1.0 + 1.0 / (16.0 * E));

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("alpha must lie in [0, 1], got {alpha}")))
    }
}

/// Sampling scale minimizing `beta`; `delta(1) = 1` is the limit value.
pub fn delta_of_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 1.0 {
        return Ok(1.0);
    }
    let root = (4.0 * alpha * alpha - 8.0 * alpha + 5.0).sqrt();
    Ok((1.0 - 2.0 * alpha + root) / (2.0 - 2.0 * alpha))
}

fn beta_at(alpha: f64, delta: f64) -> f64 {
    6.0 * delta.exp() / (delta + delta * delta * (1.0 - alpha))
}

/// Coefficient `beta` such that families with average distance at most
/// `alpha k` are `beta k`-colorable.
pub fn beta_of_alpha(alpha: f64) -> Result<f64> {
    Ok(beta_at(alpha, delta_of_alpha(alpha)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundParams {
    pub alpha: f64,
    pub delta: f64,
    pub beta: f64,
}

impl BoundParams {
    pub fn new(alpha: f64) -> Result<Self> {
        let delta = delta_of_alpha(alpha)?;
        Ok(BoundParams {
            alpha,
            delta,
            beta: beta_at(alpha, delta),
        })
    }

    /// `beta` evaluated at an arbitrary sampling scale.
    pub fn beta_with(alpha: f64, delta: f64) -> f64 {
        beta_at(alpha, delta)
    }
}

fn check_p_good(ell: usize, d: usize) -> Result<()> {
    if ell < 2 || d + 2 > ell {
        return Err(Error::Precondition(format!(
            "need ell >= 2 and d <= ell - 2 (got ell = {ell}, d = {d})"
        )));
    }
    Ok(())
}

/// Probability that, among `ell` curves through a point, a fixed pair at
/// distance `d` is sampled and at most one further curve, not separating
/// the pair, is sampled with it. Curves are kept with probability `p`.
pub fn p_good(ell: usize, d: usize, p: f64) -> Result<f64> {
    check_p_good(ell, d)?;
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Precondition(format!("p must lie in [0, 1), got {p}")));
    }
    let q = 1.0 - p;
    let free = ell - d - 2;
    let mut v = p * p * q.powi((ell - 2) as i32);
    if free > 0 {
        v += p.powi(3) * q.powi((ell - 3) as i32) * free as f64;
    }
    Ok(v)
}

/// Exact rational form of [`p_good`].
pub fn p_good_exact(ell: usize, d: usize, p: &BigRational) -> Result<BigRational> {
    check_p_good(ell, d)?;
    if p < &BigRational::zero() || p >= &BigRational::one() {
        return Err(Error::Precondition("p must lie in [0, 1)".into()));
    }
    let q = BigRational::one() - p;
    let free = ell - d - 2;
    let mut v = p * p * Pow::pow(&q, ell - 2);
    if free > 0 {
        v += Pow::pow(p, 3u32) * Pow::pow(&q, ell - 3) * BigRational::from_integer(BigInt::from(free));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub name: &'static str,
    pub description: &'static str,
    pub value: f64,
    pub applies: bool,
}

/// Named upper bounds on the chromatic number of a family, with the
/// conditions under which each one holds.
pub fn bound_table(stats: &FamilyStats, kind: FamilyKind, simple: bool) -> Vec<BoundRow> {
    let k = stats.k_effective as f64;
    let simple_regions = kind == FamilyKind::Regions && simple;
    let mut rows = vec![BoundRow {
        name: "strings-6ek+1",
        description: "k-touching families of curves or strings",
        value: 6.0 * E * k + 1.0,
        applies: true,
    }];
    if let Some(alpha) = stats.alpha {
        let alpha = to_f64(&alpha);
        if let Ok(beta) = beta_of_alpha(alpha.min(1.0)) {
            rows.push(BoundRow {
                name: "average-distance-beta-k",
                description: "curves with average distance at most alpha k",
                value: beta * k,
                applies: true,
            });
        }
    }
    rows.push(BoundRow {
        name: "simple-regions-k+327",
        description: "simple k-touching regions",
        value: k + 327.0,
        applies: simple_regions,
    });
    rows.push(BoundRow {
        name: "simple-regions-k+1",
        description: "simple k-touching regions with k >= 490",
        value: k + 1.0,
        applies: simple_regions && stats.k_effective >= 490,
    });
    rows.push(BoundRow {
        name: "one-sided-strings-4k/3+6",
        description: "one-sided string contact systems, listed for context",
        value: (4.0 * k / 3.0).ceil() + 6.0,
        applies: false,
    });
    rows
}

pub fn bound_table_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from("name,value,applies,description\n");
    for r in rows {
        out.push_str(&format!("{},{:.4},{},{}\n", r.name, r.value, r.applies, r.description));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big;

    #[test]
    fn delta_and_beta_values() {
        assert_eq!(delta_of_alpha(1.0).unwrap(), 1.0);
        assert!((beta_of_alpha(1.0).unwrap() - 6.0 * E).abs() < 1e-9);
        assert!((beta_of_alpha(0.5).unwrap() - 10.22).abs() < 0.01);
        assert!((beta_of_alpha(0.75).unwrap() - 12.76).abs() < 0.01);
        assert!((beta_of_alpha(0.25).unwrap() - 8.43).abs() < 0.01);
        assert!(delta_of_alpha(1.5).is_err());
        assert!(delta_of_alpha(-0.1).is_err());
    }

    #[test]
    fn p_good_small_cases() {
        assert_eq!(p_good(2, 0, 0.5).unwrap(), 0.25);
        assert_eq!(p_good(3, 0, 0.5).unwrap(), 0.25);
        assert_eq!(p_good_exact(3, 0, &big(1, 2)).unwrap(), big(1, 4));
        assert_eq!(p_good_exact(2, 0, &big(1, 3)).unwrap(), big(1, 9));
        assert!(p_good(3, 2, 0.5).is_err());
        assert!(p_good(1, 0, 0.5).is_err());
        assert!(p_good(4, 0, 1.0).is_err());
    }

    #[test]
    fn table_rows() {
        let stats = FamilyStats {
            n: 10,
            m: 10,
            k_effective: 100,
            alpha: Some(crate::rational::rat(1, 2)),
            avg_distance: Some(crate::rational::rat(50, 1)),
            max_distance: Some(60),
        };
        let rows = bound_table(&stats, FamilyKind::Curves, false);
        let beta = rows.iter().find(|r| r.name == "average-distance-beta-k").unwrap();
        assert!((beta.value - 1022.0).abs() < 1.0);
        assert!(rows.iter().any(|r| r.name == "strings-6ek+1" && r.applies));
        assert!(!rows.iter().any(|r| r.name == "simple-regions-k+1" && r.applies));
        assert!(bound_table_csv(&rows).starts_with("name,value"));
    }
}
