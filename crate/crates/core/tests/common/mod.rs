#![allow(dead_code)]

use aggfp::rng::{self, Stream, StreamRng};
use aggfp::{GameDims, Matrix, Mixed, PolymatrixGame};

pub fn rng(seed: u64) -> StreamRng {
    rng::stream(seed, Stream::Instances)
}

pub fn uniform(rng: &mut StreamRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng::uniform01(rng)
}

pub fn random_dims(rng: &mut StreamRng, max_agents: usize, max_actions: usize) -> GameDims {
    let agents = 2 + rng::uniform_index(rng, max_agents - 1);
    let actions = 1 + rng::uniform_index(rng, max_actions);
    GameDims::new(agents, actions).unwrap()
}

pub fn random_matrix(rng: &mut StreamRng, n: usize) -> Matrix {
    Matrix::from_rows(
        (0..n)
            .map(|_| (0..n).map(|_| uniform(rng, -1.0, 1.0)).collect())
            .collect(),
    )
    .unwrap()
}

/// Game with an independent random matrix per agent.
pub fn random_game(rng: &mut StreamRng, dims: GameDims) -> PolymatrixGame {
    let pairwise = (0..dims.agents())
        .map(|_| random_matrix(rng, dims.actions()))
        .collect();
    PolymatrixGame::new(dims, pairwise).unwrap()
}

pub fn random_simplex(rng: &mut StreamRng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -uniform(rng, 1e-12, 1.0).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

pub fn random_mixed(rng: &mut StreamRng, dims: GameDims) -> Mixed {
    let s = (0..dims.agents())
        .map(|_| random_simplex(rng, dims.actions()))
        .collect();
    Mixed::new(&dims, s).unwrap()
}

pub fn rps_matrix() -> Matrix {
    Matrix::from_rows(vec![
        vec![0.0, -1.0, 1.0],
        vec![1.0, 0.0, -1.0],
        vec![-1.0, 1.0, 0.0],
    ])
    .unwrap()
}

/// Every joint profile of `agents` players with `n` actions, agent 0 slowest.
pub fn all_profiles(agents: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..agents {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

/// Pairwise reward read straight off the matrices.
pub fn brute_reward(game: &PolymatrixGame, agent: usize, profile: &[usize]) -> f64 {
    let m = game.pairwise(agent);
    (0..profile.len())
        .filter(|&j| j != agent)
        .map(|j| m.get(profile[agent], profile[j]))
        .sum()
}

/// `R^i(a, pi^{-i})` by summing over every opponent profile weighted by the
/// product of opponent probabilities.
pub fn brute_expected(game: &PolymatrixGame, agent: usize, pi: &[Vec<f64>]) -> Vec<f64> {
    let dims = game.dims();
    let n = dims.actions();
    let mut out = vec![0.0; n];
    for profile in all_profiles(dims.agents(), n) {
        if profile[agent] != 0 {
            continue;
        }
        let weight: f64 = (0..dims.agents())
            .filter(|&j| j != agent)
            .map(|j| pi[j][profile[j]])
            .product();
        for (a, o) in out.iter_mut().enumerate() {
            let mut p = profile.clone();
            p[agent] = a;
            *o += weight * brute_reward(game, agent, &p);
        }
    }
    out
}

/// Distribution of opponent counts by enumeration, keyed by count vector.
pub fn brute_counts(n: usize, opponents: &[&[f64]]) -> Vec<(Vec<usize>, f64)> {
    let mut acc: Vec<(Vec<usize>, f64)> = Vec::new();
    for profile in all_profiles(opponents.len(), n) {
        let mut counts = vec![0; n];
        let mut w = 1.0;
        for (j, &a) in profile.iter().enumerate() {
            counts[a] += 1;
            w *= opponents[j][a];
        }
        match acc.iter_mut().find(|(c, _)| *c == counts) {
            Some((_, p)) => *p += w,
            None => acc.push((counts, w)),
        }
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
