//! Reference computations that avoid the library's count ranking, succinct
//! tables and belief recursions. Everything here is brute force.

#![allow(dead_code)]

use std::collections::BTreeMap;

use aggfp::rng::{self, Stream, StreamRng};

pub type Rows = Vec<Vec<f64>>;

pub fn rng(seed: u64) -> StreamRng {
    rng::stream(seed, Stream::Instances)
}

pub fn uniform(r: &mut StreamRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng::uniform01(r)
}

pub fn index(r: &mut StreamRng, n: usize) -> usize {
    rng::uniform_index(r, n)
}

pub fn random_matrix(r: &mut StreamRng, n: usize) -> Rows {
    (0..n).map(|_| (0..n).map(|_| uniform(r, -1.0, 1.0)).collect()).collect()
}

pub fn random_simplex(r: &mut StreamRng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng::uniform01(r)).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// Compositions of `total` into `parts` nonnegative parts, lexicographically ascending.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every action profile of `agents` agents over `actions` actions.
pub fn profiles(agents: usize, actions: usize) -> Vec<Vec<usize>> {
    let total = actions.pow(agents as u32);
    (0..total)
        .map(|mut idx| {
            let mut p = vec![0; agents];
            for slot in p.iter_mut().rev() {
                *slot = idx % actions;
                idx /= actions;
            }
            p
        })
        .collect()
}

fn counts_of(profile: &[usize], skip: usize, actions: usize) -> Vec<usize> {
    let mut c = vec![0; actions];
    for (j, &a) in profile.iter().enumerate() {
        if j != skip {
            c[a] += 1;
        }
    }
    c
}

/// `sum_{j != i} M[a][a_j]`.
pub fn pairwise_reward(m: &Rows, profile: &[usize], i: usize, own: usize) -> f64 {
    profile
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, &b)| m[own][b])
        .sum()
}

/// Expected reward of every own action of agent `i`, enumerating all
/// opponent profiles with their product probabilities.
pub fn brute_expected(m: &Rows, beliefs: &[Vec<f64>], i: usize) -> Vec<f64> {
    let (agents, actions) = (beliefs.len(), m.len());
    let mut out = vec![0.0; actions];
    for p in profiles(agents, actions).into_iter().filter(|p| p[i] == 0) {
        let prob: f64 = (0..agents).filter(|&j| j != i).map(|j| beliefs[j][p[j]]).product();
        for (a, slot) in out.iter_mut().enumerate() {
            *slot += prob * pairwise_reward(m, &p, i, a);
        }
    }
    out
}

/// Expected reward by linearity: `sum_{j != i} sum_b pi_j(b) M[a][b]`.
pub fn linear_expected(m: &Rows, beliefs: &[Vec<f64>], i: usize) -> Vec<f64> {
    (0..m.len())
        .map(|a| {
            beliefs
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, pi)| pi.iter().zip(&m[a]).map(|(p, v)| p * v).sum::<f64>())
                .sum()
        })
        .collect()
}

/// Distribution of the opponent count of agent `i`, by enumeration.
pub fn count_distribution(beliefs: &[Vec<f64>], i: usize, actions: usize) -> BTreeMap<Vec<usize>, f64> {
    let mut out = BTreeMap::new();
    for p in profiles(beliefs.len(), actions).into_iter().filter(|p| p[i] == 0) {
        let prob: f64 = (0..beliefs.len()).filter(|&j| j != i).map(|j| beliefs[j][p[j]]).product();
        *out.entry(counts_of(&p, i, actions)).or_insert(0.0) += prob;
    }
    out
}

/// `sum_x mu(x) sum_b x_b M[a][b]`.
pub fn aggregate_expected(m: &Rows, mu: &BTreeMap<Vec<usize>, f64>) -> Vec<f64> {
    (0..m.len())
        .map(|a| {
            mu.iter()
                .map(|(x, w)| w * x.iter().zip(&m[a]).map(|(&c, v)| c as f64 * v).sum::<f64>())
                .sum()
        })
        .collect()
}

pub fn opponent_counts(profile: &[usize], i: usize, actions: usize) -> Vec<usize> {
    counts_of(profile, i, actions)
}

/// Smallest index within a relative `1e-12` of the maximum.
pub fn argmax(r: &[f64]) -> usize {
    let max = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = 1e-12 * max.abs().max(1.0);
    r.iter().position(|&v| v >= max - slack).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
