//! Labeled rooted trees on `[n]` and the descent statistic.
//!
//! Trees are enumerated as (root, Prüfer code of the underlying unrooted
//! tree), which is a bijection onto the `n^(n-1)` rooted trees.

use serde::{Deserialize, Serialize};

use crate::enumerate::{par_tally, total_count, Config, MixedRadix, Tally};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

pub const ROOTED_CAP: usize = 9;

pub type Edge = (u32, u32);

/// Labeled rooted tree stored as a parent map; label `x` has parent
/// `parent[x-1]`, and the root's entry is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedTree {
    root: u32,
    parent: Vec<u32>,
}

impl RootedTree {
    /// Validates that `parent` describes a single tree rooted at `root`.
    pub fn from_parents(root: u32, parent: Vec<u32>) -> Result<Self> {
        let n = parent.len() as u32;
        if root == 0 || root > n {
            return Err(Error::InvalidSize(format!("root {root} not in [1,{n}]")));
        }
        for (i, &p) in parent.iter().enumerate() {
            let label = i as u32 + 1;
            if label == root {
                if p != 0 {
                    return Err(Error::Parse(format!("root {root} has a parent")));
                }
            } else if p == 0 || p > n || p == label {
                return Err(Error::Parse(format!("node {label} has invalid parent {p}")));
            }
        }
        let tree = RootedTree { root, parent };
        // every node must reach the root within n-1 steps
        for start in 1..=n {
            let mut x = start;
            let mut steps = 0;
            while x != root {
                x = tree.parent_of(x).unwrap();
                steps += 1;
                if steps >= n {
                    return Err(Error::Parse(format!("cycle through node {start}")));
                }
            }
        }
        Ok(tree)
    }

    /// Orients an unrooted edge set towards `root`.
    pub fn from_edges(n: usize, root: u32, edges: &[Edge]) -> Result<Self> {
        if edges.len() + 1 != n {
            return Err(Error::Parse(format!("{} edges for {n} nodes", edges.len())));
        }
        let mut adjacency = vec![Vec::new(); n + 1];
        for &(a, b) in edges {
            if a == 0 || b == 0 || a as usize > n || b as usize > n {
                return Err(Error::Parse(format!("edge {a}-{b} out of range")));
            }
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        let parent = orient(&adjacency, root);
        RootedTree::from_parents(root, parent)
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn parent_of(&self, x: u32) -> Option<u32> {
        match self.parent[x as usize - 1] {
            0 => None,
            p => Some(p),
        }
    }

    pub fn parents(&self) -> &[u32] {
        &self.parent
    }

    /// `(parent, child)` pairs sorted by child.
    pub fn edges(&self) -> Vec<Edge> {
        (1..=self.n() as u32)
            .filter_map(|x| self.parent_of(x).map(|p| (p, x)))
            .collect()
    }

    /// Number of children whose parent carries a larger label.
    pub fn des(&self) -> usize {
        self.parent
            .iter()
            .enumerate()
            .filter(|&(i, &p)| p != 0 && p > i as u32 + 1)
            .count()
    }

    /// Relabels `i ↦ n+1-i`, keeping the shape.
    pub fn complement(&self) -> RootedTree {
        let n = self.n() as u32;
        let flip = |x: u32| if x == 0 { 0 } else { n + 1 - x };
        let parent = (1..=n)
            .map(|x| flip(self.parent[(n - x) as usize]))
            .collect();
        RootedTree {
            root: flip(self.root),
            parent,
        }
    }

    pub fn to_json(&self) -> RootedTreeJson {
        RootedTreeJson {
            n: self.n(),
            root: self.root,
            edges: self.edges().into_iter().map(|(p, c)| [p, c]).collect(),
        }
    }
}

/// `{"n":3, "root":2, "edges":[[2,1],[2,3]]}` with edges as `[parent, child]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTreeJson {
    pub n: usize,
    pub root: u32,
    pub edges: Vec<[u32; 2]>,
}

impl TryFrom<RootedTreeJson> for RootedTree {
    type Error = Error;
    fn try_from(json: RootedTreeJson) -> Result<Self> {
        let edges: Vec<Edge> = json.edges.iter().map(|e| (e[0], e[1])).collect();
        let tree = RootedTree::from_edges(json.n, json.root, &edges)?;
        if tree.edges().len() != edges.len()
            || edges.iter().any(|&(p, c)| tree.parent_of(c) != Some(p))
        {
            return Err(Error::Parse(
                "edges are not oriented towards the root".into(),
            ));
        }
        Ok(tree)
    }
}

fn orient(adjacency: &[Vec<u32>], root: u32) -> Vec<u32> {
    let n = adjacency.len() - 1;
    let mut parent = vec![0u32; n];
    let mut seen = vec![false; n + 1];
    let mut stack = vec![root];
    seen[root as usize] = true;
    while let Some(x) = stack.pop() {
        for &y in &adjacency[x as usize] {
            if !seen[y as usize] {
                seen[y as usize] = true;
                parent[y as usize - 1] = x;
                stack.push(y);
            }
        }
    }
    parent
}

/// Prüfer sequence of an unrooted labeled tree on `[n]`; length `n-2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PruferCode {
    n: usize,
    seq: Vec<u32>,
}

impl PruferCode {
    pub fn new(n: usize, seq: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedCode("n must be positive".into()));
        }
        if seq.len() != n.saturating_sub(2) {
            return Err(Error::MalformedCode(format!(
                "length {} for n={n} (expected {})",
                seq.len(),
                n.saturating_sub(2)
            )));
        }
        if let Some(&bad) = seq.iter().find(|&&a| a == 0 || a as usize > n) {
            return Err(Error::MalformedCode(format!("entry {bad} not in [1,{n}]")));
        }
        Ok(PruferCode { n, seq })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seq(&self) -> &[u32] {
        &self.seq
    }

    /// Linear-time decoding. Edges come out as `(leaf, neighbour)` in removal
    /// order.
    pub fn decode(&self) -> Vec<Edge> {
        decode_into(self.n, &self.seq, &mut Vec::new())
    }

    /// Linear-time encoding of an unrooted tree given as an edge list.
    pub fn encode(n: usize, edges: &[Edge]) -> Result<PruferCode> {
        if n == 0 || edges.len() + 1 != n {
            return Err(Error::MalformedCode(format!(
                "{} edges for {n} nodes",
                edges.len()
            )));
        }
        let mut adjacency = vec![Vec::new(); n + 1];
        for &(a, b) in edges {
            if a == 0 || b == 0 || a as usize > n || b as usize > n {
                return Err(Error::MalformedCode(format!("edge {a}-{b} out of range")));
            }
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        let parent = orient(&adjacency, n as u32);
        if (1..n).any(|x| parent[x - 1] == 0) {
            return Err(Error::MalformedCode("edge set is not connected".into()));
        }
        let mut degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
        let mut seq = Vec::with_capacity(n.saturating_sub(2));
        let mut ptr = 1;
        while ptr <= n && degree[ptr] != 1 {
            ptr += 1;
        }
        let mut leaf = ptr;
        for _ in 0..n.saturating_sub(2) {
            let next = parent[leaf - 1] as usize;
            seq.push(next as u32);
            degree[next] -= 1;
            if degree[next] == 1 && next < ptr {
                leaf = next;
            } else {
                ptr += 1;
                while degree[ptr] != 1 {
                    ptr += 1;
                }
                leaf = ptr;
            }
        }
        PruferCode::new(n, seq)
    }
}

fn decode_into(n: usize, seq: &[u32], degree: &mut Vec<u32>) -> Vec<Edge> {
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    if n < 2 {
        return edges;
    }
    degree.clear();
    degree.resize(n + 1, 1);
    for &a in seq {
        degree[a as usize] += 1;
    }
    let mut ptr = 1;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &a in seq {
        edges.push((leaf as u32, a));
        degree[a as usize] -= 1;
        if degree[a as usize] == 1 && (a as usize) < ptr {
            leaf = a as usize;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf as u32, n as u32));
    edges
}

fn radices(n: usize) -> Vec<usize> {
    let mut radices = vec![n];
    radices.extend(std::iter::repeat_n(n, n.saturating_sub(2)));
    radices
}

/// Streams every rooted tree on `[n]` exactly once, in lexicographic order
/// of `(root, Prüfer code)`.
pub struct RootedTrees {
    n: usize,
    odometer: MixedRadix,
}

impl Iterator for RootedTrees {
    type Item = RootedTree;

    fn next(&mut self) -> Option<RootedTree> {
        let digits = self.odometer.next_digits()?;
        let root = digits[0] as u32 + 1;
        let seq: Vec<u32> = digits[1..].iter().map(|&d| d as u32 + 1).collect();
        let edges = decode_into(self.n, &seq, &mut Vec::new());
        Some(RootedTree::from_edges(self.n, root, &edges).expect("decoded Prufer code is a tree"))
    }
}

pub fn enumerate_rooted_trees(n: usize) -> Result<RootedTrees> {
    enumerate_rooted_trees_with(n, &Config::default())
}

pub fn enumerate_rooted_trees_with(n: usize, config: &Config) -> Result<RootedTrees> {
    if n == 0 {
        return Err(Error::InvalidSize("rooted trees need n >= 1".into()));
    }
    config.check_cap("rooted tree", n, ROOTED_CAP)?;
    Ok(RootedTrees {
        n,
        odometer: MixedRadix::new(radices(n)),
    })
}

/// `n^(n-1)`
pub fn rooted_tree_count(n: usize) -> u64 {
    total_count(&radices(n))
}

/// Histogram of `des` over all rooted trees on `[n]`, counted in parallel.
///
/// Each Prüfer code is decoded once and then re-rooted at every label.
pub fn descent_tally(n: usize, config: &Config) -> Result<Tally> {
    if n == 0 {
        return Err(Error::InvalidSize("rooted trees need n >= 1".into()));
    }
    config.check_cap("rooted tree", n, ROOTED_CAP)?;
    let code_radices = vec![n; n.saturating_sub(2)];
    Ok(config.install(|| {
        par_tally(&code_radices, |digits, tally| {
            let seq: Vec<u32> = digits.iter().map(|&d| d as u32 + 1).collect();
            let edges = decode_into(n, &seq, &mut Vec::new());
            let mut adjacency = vec![Vec::new(); n + 1];
            for &(a, b) in &edges {
                adjacency[a as usize].push(b);
                adjacency[b as usize].push(a);
            }
            for root in 1..=n as u32 {
                let parent = orient(&adjacency, root);
                let des = parent
                    .iter()
                    .enumerate()
                    .filter(|&(i, &p)| p > i as u32 + 1)
                    .count();
                tally.add(des);
            }
        })
    }))
}

/// Tree Eulerian polynomial by brute-force enumeration.
pub fn descent_polynomial(n: usize) -> Result<IntPolynomial> {
    descent_polynomial_with(n, &Config::default())
}

pub fn descent_polynomial_with(n: usize, config: &Config) -> Result<IntPolynomial> {
    Ok(IntPolynomial::from(&descent_tally(n, config)?))
}
