//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the enumeration, union-find or sampling code under test.
#![allow(dead_code)]

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shapley_homology::NeighborComplex;

pub fn adjacency(g: &NeighborComplex) -> Vec<Vec<bool>> {
    let n = g.len();
    (0..n).map(|i| (0..n).map(|j| g.has_edge(i, j)).collect()).collect()
}

/// Components of the subgraph induced by `members`, by depth-first search.
pub fn components_dfs(adj: &[Vec<bool>], members: &[usize]) -> usize {
    let mut seen = vec![false; adj.len()];
    let inside: Vec<bool> = (0..adj.len()).map(|v| members.contains(&v)).collect();
    let mut count = 0;
    for &start in members {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for v in 0..adj.len() {
                if adj[u][v] && inside[v] && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    count
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Shapley values straight from the subset-weighted definition.
pub fn shapley_by_subsets(g: &NeighborComplex) -> Vec<f64> {
    let n = g.len();
    let adj = adjacency(g);
    (0..n)
        .map(|i| {
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            (0..n)
                .flat_map(|k| others.iter().copied().combinations(k))
                .map(|c| {
                    let mut with = c.clone();
                    with.push(i);
                    let delta = components_dfs(&adj, &with).abs_diff(components_dfs(&adj, &c));
                    factorial(c.len()) * factorial(n - c.len() - 1) / factorial(n) * delta as f64
                })
                .sum()
        })
        .collect()
}

/// Average absolute marginal over all `n!` join orders.
pub fn shapley_by_all_permutations(g: &NeighborComplex) -> Vec<f64> {
    let n = g.len();
    let adj = adjacency(g);
    let mut total = vec![0u64; n];
    let mut count = 0u64;
    for order in (0..n).permutations(n) {
        let mut prefix = Vec::new();
        let mut before = 0usize;
        for &v in &order {
            prefix.push(v);
            let after = components_dfs(&adj, &prefix);
            total[v] += after.abs_diff(before) as u64;
            before = after;
        }
        count += 1;
    }
    total.iter().map(|&t| t as f64 / count as f64).collect()
}

pub fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> NeighborComplex {
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.random::<f64>() < p).collect();
    NeighborComplex::from_edges(n, edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every labeled simple graph on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = NeighborComplex> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &e)| e);
        NeighborComplex::from_edges(n, edges).unwrap()
    })
}

/// Membership in the g4 language from its run structure: reject whenever an
/// odd run of 1s is immediately followed by an odd run of 0s.
pub fn g4_by_runs(s: &str) -> bool {
    let bytes = s.as_bytes();
    let mut runs: Vec<(u8, usize)> = Vec::new();
    for &b in bytes {
        match runs.last_mut() {
            Some((c, len)) if *c == b => *len += 1,
            _ => runs.push((b, 1)),
        }
    }
    !runs.windows(2).any(|w| w[0].0 == b'1' && w[0].1 % 2 == 1 && w[1].0 == b'0' && w[1].1 % 2 == 1)
}

pub fn brute_force_member(g: u8, s: &str) -> bool {
    let zeros = s.bytes().filter(|&b| b == b'0').count();
    let ones = s.len() - zeros;
    match g {
        1 => zeros == 0,
        2 => zeros % 2 == 0 && ones % 2 == 0,
        3 => {
            let n = s.len();
            ones == n || zeros == n || (n >= 1 && zeros == n - 1 && s.ends_with('1'))
        }
        4 => g4_by_runs(s),
        _ => unreachable!(),
    }
}

pub fn all_strings(len: usize) -> Vec<String> {
    (0u32..1 << len).map(|x| (0..len).rev().map(|b| if x >> b & 1 == 1 { '1' } else { '0' }).collect()).collect()
}
