//! Exact maximum clique search on packed bit rows.
//!
//! Branch and bound with a greedy colouring bound: candidates are coloured
//! greedily, and a branch is cut as soon as the current clique plus the
//! number of colours left cannot beat the incumbent. Vertices are relabelled
//! by descending degree before the search.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Fixed-width bitset over `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Self::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + bit)
            })
        })
    }

    pub fn intersect(&self, other: &Bitset) -> Bitset {
        Bitset {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    fn subtract_assign(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }
}

/// Undirected simple graph stored as one bit row per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitGraph {
    rows: Vec<Bitset>,
}

impl BitGraph {
    pub fn from_rows(rows: Vec<Bitset>) -> Self {
        BitGraph { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn neighbors(&self, i: usize) -> &Bitset {
        &self.rows[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.rows[i].count()
    }

    /// Same graph with vertex `order[k]` relabelled to `k`.
    fn relabel(&self, order: &[usize]) -> BitGraph {
        let n = self.len();
        let mut position = vec![0; n];
        for (k, &v) in order.iter().enumerate() {
            position[v] = k;
        }
        let rows = order
            .iter()
            .map(|&v| {
                let mut row = Bitset::new(n);
                for u in self.rows[v].iter() {
                    row.insert(position[u]);
                }
                row
            })
            .collect();
        BitGraph { rows }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CliqueOptions {
    pub timeout: Duration,
    pub parallel: bool,
}

impl Default for CliqueOptions {
    fn default() -> Self {
        CliqueOptions {
            timeout: Duration::from_secs(60),
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueResult {
    /// Vertices of one maximum clique, ascending, in the caller's labelling.
    pub clique: Vec<usize>,
    pub nodes: u64,
}

struct Budget {
    deadline: Instant,
    budget: Duration,
    expired: AtomicBool,
}

impl Budget {
    fn new(budget: Duration) -> Self {
        Budget {
            deadline: Instant::now() + budget,
            budget,
            expired: AtomicBool::new(false),
        }
    }

    /// Counts a node; the deadline is checked on the first node and every 1024 after.
    fn tick(&self, local: &mut u64) -> bool {
        *local += 1;
        if *local % 1024 == 1 {
            if self.expired.load(Ordering::Relaxed) {
                return false;
            }
            if Instant::now() > self.deadline {
                self.expired.store(true, Ordering::Relaxed);
                return false;
            }
        }
        true
    }

    fn result<T>(&self, value: T) -> Result<T> {
        if self.expired.load(Ordering::Relaxed) {
            Err(Error::Timeout { budget: self.budget })
        } else {
            Ok(value)
        }
    }
}

/// Greedy sequential colouring of `candidates`; returns vertices in colour
/// order with their colour numbers (non-decreasing).
fn colour_sort(graph: &BitGraph, candidates: &Bitset) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(candidates.count());
    let mut colours = Vec::with_capacity(order.capacity());
    let mut uncoloured = candidates.clone();
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut open = uncoloured.clone();
        while let Some(v) = open.first() {
            open.remove(v);
            open.subtract_assign(graph.neighbors(v));
            uncoloured.remove(v);
            order.push(v);
            colours.push(colour);
        }
    }
    (order, colours)
}

struct MaxSearch<'a> {
    graph: &'a BitGraph,
    budget: &'a Budget,
    best_size: &'a AtomicUsize,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
}

impl MaxSearch<'_> {
    fn expand(&mut self, mut candidates: Bitset) -> bool {
        if !self.budget.tick(&mut self.nodes) {
            return false;
        }
        let (order, colours) = colour_sort(self.graph, &candidates);
        for k in (0..order.len()).rev() {
            if self.current.len() + colours[k] <= self.best_size.load(Ordering::Relaxed) {
                return true;
            }
            let v = order[k];
            self.current.push(v);
            let next = candidates.intersect(self.graph.neighbors(v));
            if next.is_empty() {
                if self.current.len() > self.best_size.load(Ordering::Relaxed) {
                    self.best_size.fetch_max(self.current.len(), Ordering::Relaxed);
                    self.best = self.current.clone();
                }
            } else if !self.expand(next) {
                return false;
            }
            self.current.pop();
            candidates.remove(v);
        }
        true
    }
}

/// Vertices sorted by descending degree, ties by index.
fn degree_order(graph: &BitGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..graph.len()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    order
}

/// Exact maximum clique. Sequential mode is deterministic; parallel mode
/// returns the same size with a possibly different clique.
pub fn max_clique(graph: &BitGraph, options: &CliqueOptions) -> Result<CliqueResult> {
    let order = degree_order(graph);
    let sorted = graph.relabel(&order);
    let budget = Budget::new(options.timeout);
    let best_size = AtomicUsize::new(0);
    let n = sorted.len();

    let (clique, nodes) = if !options.parallel || n < 2 {
        let mut search = MaxSearch {
            graph: &sorted,
            budget: &budget,
            best_size: &best_size,
            best: Vec::new(),
            current: Vec::new(),
            nodes: 0,
        };
        search.expand(Bitset::full(n));
        (search.best, search.nodes)
    } else {
        // Top level split: branch k owns vertex order[k] with the candidates
        // that precede it in colour order.
        let (top, colours) = colour_sort(&sorted, &Bitset::full(n));
        let results: Vec<(Vec<usize>, u64)> = (0..top.len())
            .into_par_iter()
            .map(|k| {
                let mut search = MaxSearch {
                    graph: &sorted,
                    budget: &budget,
                    best_size: &best_size,
                    best: Vec::new(),
                    current: Vec::new(),
                    nodes: 0,
                };
                if colours[k] <= best_size.load(Ordering::Relaxed) {
                    return (search.best, 0);
                }
                let mut allowed = Bitset::new(n);
                for &u in &top[..k] {
                    allowed.insert(u);
                }
                let v = top[k];
                search.current.push(v);
                let next = allowed.intersect(sorted.neighbors(v));
                if next.is_empty() {
                    if best_size.fetch_max(1, Ordering::Relaxed) < 1 {
                        search.best = vec![v];
                    }
                } else {
                    search.expand(next);
                }
                (search.best, search.nodes)
            })
            .collect();
        let nodes = results.iter().map(|(_, c)| c).sum();
        let best = results
            .into_iter()
            .map(|(c, _)| c)
            .max_by_key(|c| c.len())
            .unwrap_or_default();
        (best, nodes)
    };
    let mut clique: Vec<usize> = clique.into_iter().map(|v| order[v]).collect();
    clique.sort_unstable();
    budget.result(CliqueResult { clique, nodes })
}

struct AllSearch<'a> {
    graph: &'a BitGraph,
    budget: &'a Budget,
    target: usize,
    found: Vec<Vec<usize>>,
    current: Vec<usize>,
    nodes: u64,
}

impl AllSearch<'_> {
    fn expand(&mut self, mut candidates: Bitset) -> bool {
        if !self.budget.tick(&mut self.nodes) {
            return false;
        }
        let (order, colours) = colour_sort(self.graph, &candidates);
        for k in (0..order.len()).rev() {
            if self.current.len() + colours[k] < self.target {
                return true;
            }
            let v = order[k];
            self.current.push(v);
            let next = candidates.intersect(self.graph.neighbors(v));
            if self.current.len() == self.target {
                self.found.push(self.current.clone());
            } else if !next.is_empty() && !self.expand(next) {
                return false;
            }
            self.current.pop();
            candidates.remove(v);
        }
        true
    }
}

/// Every clique of size `target` (each reported once, vertices ascending,
/// list sorted). With `target` the clique number these are all maximum cliques.
pub fn cliques_of_size(graph: &BitGraph, target: usize, options: &CliqueOptions) -> Result<Vec<Vec<usize>>> {
    if target == 0 {
        return Ok(vec![Vec::new()]);
    }
    let order = degree_order(graph);
    let sorted = graph.relabel(&order);
    let budget = Budget::new(options.timeout);
    let mut search = AllSearch {
        graph: &sorted,
        budget: &budget,
        target,
        found: Vec::new(),
        current: Vec::new(),
        nodes: 0,
    };
    search.expand(Bitset::full(sorted.len()));
    let mut found: Vec<Vec<usize>> = search
        .found
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|v| order[v]).collect();
            c.sort_unstable();
            c
        })
        .collect();
    found.sort();
    budget.result(found)
}
