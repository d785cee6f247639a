use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::PlanarDigraph;
use crate::error::{Error, Result};
use crate::lp::maximize;
use crate::rational::{big_to_f64, format_big, serde_big};

/// Proven upper bound on `nu* / nu` for planar digraphs.
pub const PROVEN_RATIO: f64 = 15.95;
/// Conjectured value of the same ratio.
pub const CONJECTURED_RATIO: f64 = 10.22;

/// Every simple directed cycle once, as a vertex sequence starting at its
/// smallest vertex. Cycles come out ordered by start vertex, then in DFS
/// order over sorted out-lists.
pub fn enumerate_cycles(g: &PlanarDigraph, limit: usize) -> Result<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    let mut cycles = Vec::new();
    let mut on_path = vec![false; n];
    for s in 0..n {
        let mut path = vec![s];
        on_path[s] = true;
        // Stack of (vertex, index of next out-arc to try).
        let mut stack = vec![(s, 0usize)];
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if let Some(&w) = g.out[v].get(*i) {
                *i += 1;
                if w == s {
                    if cycles.len() == limit {
                        return Err(Error::LimitExceeded(limit));
                    }
                    cycles.push(path.clone());
                } else if w > s && !on_path[w] {
                    on_path[w] = true;
                    path.push(w);
                    stack.push((w, 0));
                }
            } else {
                stack.pop();
                on_path[v] = false;
                path.pop();
            }
        }
    }
    Ok(cycles)
}

struct Packer<'a> {
    cycles: &'a [Vec<usize>],
    used: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl Packer<'_> {
    fn search(&mut self, i: usize, free: usize) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        // Every cycle needs at least two free vertices.
        if i == self.cycles.len() || self.chosen.len() + free / 2 <= self.best.len() {
            return;
        }
        let c = &self.cycles[i];
        if c.iter().all(|&v| !self.used[v]) {
            for &v in c {
                self.used[v] = true;
            }
            self.chosen.push(i);
            self.search(i + 1, free - c.len());
            self.chosen.pop();
            for &v in c {
                self.used[v] = false;
            }
        }
        self.search(i + 1, free);
    }
}

/// Largest set of pairwise vertex-disjoint cycles, as indices into `cycles`.
pub fn nu_exact(n: usize, cycles: &[Vec<usize>]) -> Vec<usize> {
    // Shorter cycles first makes the greedy first leaf a good incumbent.
    let mut order: Vec<usize> = (0..cycles.len()).collect();
    order.sort_by_key(|&i| (cycles[i].len(), i));
    let sorted: Vec<Vec<usize>> = order.iter().map(|&i| cycles[i].clone()).collect();
    let mut p = Packer {
        cycles: &sorted,
        used: vec![false; n],
        chosen: Vec::new(),
        best: Vec::new(),
    };
    p.search(0, n);
    let mut best: Vec<usize> = p.best.iter().map(|&j| order[j]).collect();
    best.sort_unstable();
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FractionalPacking {
    #[serde(with = "serde_big")]
    pub value: BigRational,
    #[serde(serialize_with = "serialize_big_vec")]
    pub weights: Vec<BigRational>,
    /// Vertex prices proving optimality.
    #[serde(serialize_with = "serialize_big_vec")]
    pub dual: Vec<BigRational>,
}

fn serialize_big_vec<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_big))
}

impl FractionalPacking {
    /// Checks primal and dual feasibility and equal objective values.
    pub fn certify(&self, n: usize, cycles: &[Vec<usize>]) -> bool {
        let one = BigRational::one();
        let mut load = vec![BigRational::zero(); n];
        for (c, w) in cycles.iter().zip(&self.weights) {
            if w.is_negative() {
                return false;
            }
            for &v in c {
                load[v] += w;
            }
        }
        let primal_ok = load.iter().all(|l| *l <= one);
        let dual_ok = self.dual.len() == n
            && self.dual.iter().all(|y| !y.is_negative())
            && cycles
                .iter()
                .all(|c| c.iter().map(|&v| &self.dual[v]).sum::<BigRational>() >= one);
        let primal_value: BigRational = self.weights.iter().sum();
        let dual_value: BigRational = self.dual.iter().sum();
        primal_ok && dual_ok && primal_value == self.value && dual_value == self.value
    }

    /// Common denominator `q` of the weights and each weight times `q`: a
    /// multiset of cycles in which every vertex lies on at most `q` members.
    pub fn common_denominator(&self) -> (BigInt, Vec<BigInt>) {
        let q = self
            .weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let mult = self
            .weights
            .iter()
            .map(|w| (w * BigRational::from_integer(q.clone())).to_integer())
            .collect();
        (q, mult)
    }
}

/// Maximum fractional packing over `cycles` by exact simplex.
pub fn nu_star(n: usize, cycles: &[Vec<usize>]) -> Result<FractionalPacking> {
    let one = BigRational::one();
    let zero = BigRational::zero();
    let mut a = vec![vec![zero.clone(); cycles.len()]; n];
    for (j, c) in cycles.iter().enumerate() {
        for &v in c {
            a[v][j] = one.clone();
        }
    }
    let sol = maximize(&vec![one.clone(); cycles.len()], &a, &vec![one; n])?;
    Ok(FractionalPacking {
        value: sol.objective,
        weights: sol.primal,
        dual: sol.dual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PackingResult {
    pub cycles: Vec<Vec<String>>,
    pub nu: usize,
    pub nu_witness: Vec<usize>,
    pub fractional: FractionalPacking,
    pub certified: bool,
    #[serde(serialize_with = "serialize_bigint")]
    pub denominator: BigInt,
    #[serde(serialize_with = "serialize_bigint_vec")]
    pub multiplicities: Vec<BigInt>,
}

fn serialize_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn serialize_bigint_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Enumerates cycles and solves both packings.
pub fn pack(g: &PlanarDigraph, limit: usize) -> Result<PackingResult> {
    let cycles = enumerate_cycles(g, limit)?;
    let n = g.vertex_count();
    let nu_witness = nu_exact(n, &cycles);
    let fractional = nu_star(n, &cycles)?;
    let certified = fractional.certify(n, &cycles);
    let (denominator, multiplicities) = fractional.common_denominator();
    Ok(PackingResult {
        cycles: cycles
            .iter()
            .map(|c| c.iter().map(|&v| g.labels[v].clone()).collect())
            .collect(),
        nu: nu_witness.len(),
        nu_witness,
        fractional,
        certified,
        denominator,
        multiplicities,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub nu: usize,
    #[serde(with = "serde_big")]
    pub nu_star: BigRational,
    /// `nu* / nu`, absent when both are zero.
    pub ratio: Option<String>,
    pub ratio_value: Option<f64>,
    pub proven_bound: f64,
    pub conjectured_bound: f64,
    pub within_proven: bool,
    pub within_conjectured: bool,
}

pub fn ratio_report(p: &PackingResult) -> Result<RatioReport> {
    let star = p.fractional.value.clone();
    if p.nu == 0 && star.is_positive() {
        return Err(Error::GuaranteeViolated(
            "fractional packing is positive while no cycle exists".into(),
        ));
    }
    if !p.certified {
        return Err(Error::GuaranteeViolated("fractional packing failed its certificate".into()));
    }
    let ratio = (p.nu > 0).then(|| &star / BigRational::from_integer(BigInt::from(p.nu)));
    let value = ratio.as_ref().map(big_to_f64);
    let report = RatioReport {
        nu: p.nu,
        nu_star: star,
        ratio: ratio.as_ref().map(format_big),
        ratio_value: value,
        proven_bound: PROVEN_RATIO,
        conjectured_bound: CONJECTURED_RATIO,
        within_proven: value.is_none_or(|r| r <= PROVEN_RATIO),
        within_conjectured: value.is_none_or(|r| r <= CONJECTURED_RATIO),
    };
    if !report.within_proven {
        return Err(Error::GuaranteeViolated(format!(
            "ratio {} exceeds {PROVEN_RATIO}",
            report.ratio.as_deref().unwrap_or("?")
        )));
    }
    Ok(report)
}
