//! Directed pedigree networks and time-averaged correlation estimation.
//!
//! A family tree becomes a directed network with one weight per parent→child
//! edge. Nodes are indexed in topological order, so a sequential 0..n sweep
//! updates parents before children and each per-sweep snapshot is an exact,
//! independent ancestral sample of the joint distribution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::sampler::SampleTrace;

/// Parent→child edge list with an optional explicit node set.
///
/// `nodes` may list isolated individuals; any name appearing in `edges` is
/// added automatically, in first-appearance order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTree {
    #[serde(default)]
    pub nodes: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

impl FamilyTree {
    /// Two couples of grandparents' children marrying into two families:
    /// GF1+GM1 parent M1 and F2; F1+M1 parent C1 and C2; F2+M2 parent C3 and
    /// C4. Gives sibling, aunt-nephew, grandparent, and married-in pairs.
    pub fn two_family_pedigree() -> FamilyTree {
        let e = |p: &str, c: &str| (p.to_string(), c.to_string());
        FamilyTree {
            nodes: vec![],
            edges: vec![
                e("GF1", "M1"),
                e("GM1", "M1"),
                e("GF1", "F2"),
                e("GM1", "F2"),
                e("F1", "C1"),
                e("M1", "C1"),
                e("F1", "C2"),
                e("M1", "C2"),
                e("F2", "C3"),
                e("M2", "C3"),
                e("F2", "C4"),
                e("M2", "C4"),
            ],
        }
    }

    /// All node names: the explicit list first, then edge names in
    /// first-appearance order.
    pub fn node_names(&self) -> Vec<String> {
        let mut names = self.nodes.clone();
        for (p, c) in &self.edges {
            for name in [p, c] {
                if !names.contains(name) {
                    names.push(name.clone());
                }
            }
        }
        names
    }
}

/// Builds the directed network for a pedigree: weight `w` on every
/// parent→child edge, zero biases (founders are fair coins).
///
/// Returns the network and the node names in index order. Indices are assigned
/// topologically (stable with respect to first appearance), which is what
/// makes a sequential sweep an ancestral sampler. Errors on cycles and on
/// children with more than two parents.
pub fn build_genetic_network(tree: &FamilyTree, w: f64) -> Result<(NetworkSpec, Vec<String>)> {
    if !w.is_finite() {
        return Err(Error::NonFinite("edge coupling".into()));
    }
    let names = tree.node_names();
    if names.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    let index_of = |name: &str| names.iter().position(|n| n == name).unwrap();
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
    for (p, c) in &tree.edges {
        let ci = index_of(c);
        parents[ci].push(index_of(p));
        if parents[ci].len() > 2 {
            return Err(Error::TooManyParents { child: c.clone() });
        }
    }
    // Stable topological order: repeatedly take the first node whose parents
    // are all placed.
    let mut placed = vec![false; names.len()];
    let mut order: Vec<usize> = Vec::with_capacity(names.len());
    while order.len() < names.len() {
        let next = (0..names.len())
            .find(|&i| !placed[i] && parents[i].iter().all(|&p| placed[p]))
            .ok_or(Error::CycleDetected)?;
        placed[next] = true;
        order.push(next);
    }
    let mut position = vec![0usize; names.len()];
    for (pos, &node) in order.iter().enumerate() {
        position[node] = pos;
    }
    let weights = tree
        .edges
        .iter()
        .map(|(p, c)| (position[index_of(c)], position[index_of(p)], w))
        .collect();
    let ordered_names = order.iter().map(|&i| names[i].clone()).collect();
    let spec = NetworkSpec::new(names.len(), weights, vec![0.0; names.len()], vec![], false)?;
    Ok((spec, ordered_names))
}

/// Which pairs to correlate and over how many trailing samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationRequest {
    pub pairs: Vec<(usize, usize)>,
    pub window: usize,
}

/// Time-averaged products `(1/T) Σ_t m_i(t) m_j(t)` over the last `window`
/// snapshots of a trace, one value per requested pair.
///
/// The bipolar product is the ±1 agreement indicator (an XNOR in binary
/// terms), so each value lies in [-1, 1] and a pair with itself gives 1.
pub fn correlate(trace: &SampleTrace, req: &CorrelationRequest) -> Result<Vec<f64>> {
    if req.window == 0 || req.window > trace.len() {
        return Err(Error::WindowTooLarge {
            window: req.window,
            len: trace.len(),
        });
    }
    for &(i, j) in &req.pairs {
        for idx in [i, j] {
            if idx >= trace.n_bits() {
                return Err(Error::IndexOutOfRange {
                    index: idx,
                    n: trace.n_bits(),
                });
            }
        }
    }
    let start = trace.len() - req.window;
    let mut out = Vec::with_capacity(req.pairs.len());
    for &(i, j) in &req.pairs {
        let mut sum = 0i64;
        for t in start..trace.len() {
            sum += i64::from(trace.bit(t, i) * trace.bit(t, j));
        }
        out.push(sum as f64 / req.window as f64);
    }
    Ok(out)
}
