//! Oracles and fixture helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use inlinescope::features::cfg::{BasicBlock, Cfg};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn graph(succ: &[Vec<usize>]) -> Cfg {
    let mut blocks: Vec<BasicBlock> = succ
        .iter()
        .enumerate()
        .map(|(i, s)| BasicBlock {
            start: i,
            end: i + 1,
            successors: s.clone(),
            predecessors: vec![],
        })
        .collect();
    for (i, s) in succ.iter().enumerate() {
        for &t in s {
            blocks[t].predecessors.push(i);
        }
    }
    Cfg {
        blocks,
        warnings: vec![],
    }
}

pub fn reach_without(cfg: &Cfg, removed: Option<usize>) -> Vec<bool> {
    let mut seen = vec![false; cfg.blocks.len()];
    if removed == Some(0) {
        return seen;
    }
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(b) = stack.pop() {
        for &s in &cfg.blocks[b].successors {
            if Some(s) != removed && !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
    }
    seen
}

/// Loops by definition: dominance via "removing a cuts b off the entry",
/// bodies via backwards search that stops at the header.
pub fn oracle_loops(cfg: &Cfg) -> Vec<(usize, BTreeSet<usize>, usize)> {
    let reach = reach_without(cfg, None);
    let dom = |a: usize, b: usize| a == b || !reach_without(cfg, Some(a))[b];
    let mut out = Vec::new();
    for h in 0..cfg.blocks.len() {
        let tails: Vec<usize> = (0..cfg.blocks.len())
            .filter(|&t| reach[t] && cfg.blocks[t].successors.contains(&h) && dom(h, t))
            .collect();
        if tails.is_empty() {
            continue;
        }
        let mut body = BTreeSet::from([h]);
        let mut stack = tails.clone();
        while let Some(n) = stack.pop() {
            if reach[n] && body.insert(n) {
                stack.extend(cfg.blocks[n].predecessors.iter().copied());
            }
        }
        out.push((h, body, tails.len()));
    }
    out
}

// Brute-force references: two-pass mean and deviation in input order,
// median by full sort and index arithmetic.
pub fn ref_mean(v: &[f64]) -> f64 {
    let mut s = 0.0;
    for x in v {
        s += x;
    }
    s / v.len() as f64
}

pub fn ref_std(v: &[f64]) -> f64 {
    let m = ref_mean(v);
    let mut s = 0.0;
    for x in v {
        s += (x - m).powi(2);
    }
    (s / v.len() as f64).sqrt()
}

pub fn ref_median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    if n % 2 == 1 {
        s[(n - 1) / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

pub fn random_input(rng: &mut ChaCha8Rng, min_len: usize) -> Vec<f64> {
    let n = rng.random_range(min_len..=12);
    let spike = rng.random_bool(0.3);
    (0..n)
        .map(|i| {
            if spike && i == 0 {
                rng.random_range(100.0..1000.0)
            } else if rng.random_bool(0.2) {
                rng.random_range(0..3) as f64
            } else {
                rng.random_range(-10.0..10.0)
            }
        })
        .collect()
}
