//! Branching graphs for the tower at fixed height bound `l`, and the
//! walk-count dimension combinatorics they carry.
//!
//! Vertices are labels `(p, lambda)` with `lambda` a partition of
//! `min(p, l+2)`. Below the threshold `l+2` the graph is the Young lattice
//! (add/remove a box); at `p = l+2` an upward edge keeps `lambda`; above it
//! both directions keep `lambda`. Walks from `(0, empty)` count standard
//! module dimensions, and closed walks count the algebra dimension.

use alloc::collections::BTreeMap;
use alloc::fmt;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::reptheory::{p_threshold, SimpleLabel};
use crate::symgrp::IntPartition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BratteliError {
    InsufficientRadius { needed: usize, radius: usize },
    UnknownVertex(SimpleLabel),
}

impl fmt::Display for BratteliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BratteliError::InsufficientRadius { needed, radius } => {
                write!(f, "walks of length {needed} need radius >= {needed}, have {radius}")
            }
            BratteliError::UnknownVertex(v) => write!(f, "vertex {v:?} not in graph"),
        }
    }
}

impl core::error::Error for BratteliError {}

/// The undirected, multiplicity-free branching graph truncated at
/// propagating number `radius`.
pub struct RolletGraph {
    pub l: i64,
    pub radius: usize,
    pub vertices: Vec<SimpleLabel>,
    index: BTreeMap<SimpleLabel, usize>,
    pub adjacency: Vec<Vec<usize>>,
}

/// Is `(p, lambda) -- (p+1, mu)` an edge? Below the threshold the shapes
/// differ by one box; at and above it the shape is carried along unchanged.
fn edge_up(l: i64, p: usize, lambda: &IntPartition, mu: &IntPartition) -> bool {
    let threshold = (l + 2).max(0) as usize;
    if p < threshold {
        lambda.with_added_box().contains(mu)
    } else {
        lambda == mu
    }
}

pub fn build_rollet(l: i64, radius: usize) -> RolletGraph {
    let mut vertices = Vec::new();
    for p in 0..=radius {
        for lambda in IntPartition::all_of(p_threshold(l, p)) {
            vertices.push(SimpleLabel {
                p,
                lambda: lambda.clone(),
            });
        }
    }
    let index: BTreeMap<SimpleLabel, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();
    let mut adjacency = vec![Vec::new(); vertices.len()];
    for (i, v) in vertices.iter().enumerate() {
        for (j, w) in vertices.iter().enumerate() {
            if w.p != v.p + 1 {
                continue;
            }
            if edge_up(l, v.p, &v.lambda, &w.lambda) {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    RolletGraph {
        l,
        radius,
        vertices,
        index,
        adjacency,
    }
}

impl RolletGraph {
    pub fn vertex_index(&self, label: &SimpleLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn neighbors(&self, label: &SimpleLabel) -> Option<Vec<SimpleLabel>> {
        let i = self.vertex_index(label)?;
        Some(
            self.adjacency[i]
                .iter()
                .map(|&j| self.vertices[j].clone())
                .collect(),
        )
    }

    /// Counts of length-`n` walks from `(0, empty)` to every vertex, by the
    /// transfer recursion `count(t+1, v) = sum over neighbors u of count(t, u)`.
    pub fn walk_vector(&self, n: usize) -> Result<Vec<BigUint>, BratteliError> {
        if n > self.radius {
            return Err(BratteliError::InsufficientRadius {
                needed: n,
                radius: self.radius,
            });
        }
        let root = SimpleLabel {
            p: 0,
            lambda: IntPartition::empty(),
        };
        let root_idx = self
            .vertex_index(&root)
            .ok_or(BratteliError::UnknownVertex(root))?;
        let mut counts = vec![BigUint::zero(); self.vertices.len()];
        counts[root_idx] = BigUint::from(1u32);
        for _ in 0..n {
            let mut next = vec![BigUint::zero(); self.vertices.len()];
            for (i, c) in counts.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &j in &self.adjacency[i] {
                    next[j] += c;
                }
            }
            counts = next;
        }
        Ok(counts)
    }

    pub fn count_walks(&self, n: usize, target: &SimpleLabel) -> Result<BigUint, BratteliError> {
        let counts = self.walk_vector(n)?;
        let idx = self
            .vertex_index(target)
            .ok_or_else(|| BratteliError::UnknownVertex(target.clone()))?;
        Ok(counts[idx].clone())
    }

    /// Closed walks of length `2n` at the root: the algebra dimension.
    pub fn algebra_dimension(&self, n: usize) -> Result<BigUint, BratteliError> {
        self.count_walks(
            2 * n,
            &SimpleLabel {
                p: 0,
                lambda: IntPartition::empty(),
            },
        )
    }
}

pub struct AuditLine {
    pub label: SimpleLabel,
    pub walk_count: BigUint,
    pub module_dim: usize,
}

pub struct DimensionAudit {
    pub l: i64,
    pub n: usize,
    pub lines: Vec<AuditLine>,
    pub closed_walks: BigUint,
    pub algebra_dim: usize,
}

impl DimensionAudit {
    pub fn passes(&self) -> bool {
        self.closed_walks == BigUint::from(self.algebra_dim)
            && self
                .lines
                .iter()
                .all(|line| line.walk_count == BigUint::from(line.module_dim))
    }
}

/// Walk counts against standard module dimensions, label by label, plus the
/// closed-walk count against the algebra dimension.
pub fn dimension_audit(
    l: i64,
    n: usize,
    cache: &mut crate::height::HeightCache,
) -> Result<DimensionAudit, crate::reptheory::ReptheoryError> {
    let graph = build_rollet(l, 2 * n + 2);
    let mut lines = Vec::new();
    for label in crate::reptheory::index_set(l, n) {
        let module = crate::reptheory::StandardModule::new(l, n, label.clone(), cache)?;
        let walk_count = graph
            .count_walks(n, &label)
            .expect("radius covers the walk length");
        lines.push(AuditLine {
            label,
            walk_count,
            module_dim: module.dim(),
        });
    }
    let closed_walks = graph
        .algebra_dimension(n)
        .expect("radius covers the walk length");
    let algebra_dim = if l == -1 {
        // planarity is the height test at l = -1, so no table is needed
        crate::diagram::all_pair_partitions(n, n)
            .iter()
            .filter(|p| crate::height::is_noncrossing(p))
            .count()
    } else {
        cache.stratum(l, n, n).len()
    };
    Ok(DimensionAudit {
        l,
        n,
        lines,
        closed_walks,
        algebra_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(p: usize, parts: &[usize]) -> SimpleLabel {
        SimpleLabel {
            p,
            lambda: IntPartition::new(parts.to_vec()),
        }
    }

    #[test]
    fn tl_graph_is_a_half_line() {
        let g = build_rollet(-1, 6);
        assert_eq!(g.vertices.len(), 7);
        for v in &g.vertices {
            let deg = g.adjacency[g.vertex_index(v).unwrap()].len();
            let expected = if v.p == 0 || v.p == 6 { 1 } else { 2 };
            assert_eq!(deg, expected, "vertex {v:?}");
        }
    }

    #[test]
    fn root_has_single_neighbor() {
        for l in [-1, 0, 1, 2] {
            let g = build_rollet(l, 4);
            let nbrs = g
                .neighbors(&label(0, &[]))
                .unwrap();
            assert_eq!(nbrs, vec![label(1, &[1])]);
        }
    }

    #[test]
    fn l0_vertices_at_two_split() {
        let g = build_rollet(0, 3);
        assert!(g.vertex_index(&label(2, &[2])).is_some());
        assert!(g.vertex_index(&label(2, &[1, 1])).is_some());
        // both step up to p=3 carrying their shape
        let up: Vec<_> = g
            .neighbors(&label(2, &[2]))
            .unwrap()
            .into_iter()
            .filter(|v| v.p == 3)
            .collect();
        assert_eq!(up, vec![label(3, &[2])]);
    }

    #[test]
    fn closed_walks_give_catalan_for_tl() {
        let g = build_rollet(-1, 12);
        let catalan = [1u32, 1, 2, 5, 14, 42, 132];
        for (n, &c) in catalan.iter().enumerate() {
            assert_eq!(g.algebra_dimension(n).unwrap(), BigUint::from(c), "n={n}");
        }
    }

    #[test]
    fn closed_walks_give_double_factorials_for_large_l() {
        // l >= n-2 is the unconstrained case
        for (n, df) in [(2usize, 3u32), (3, 15), (4, 105), (5, 945)] {
            let g = build_rollet(n as i64 - 2, 2 * n);
            assert_eq!(g.algebra_dimension(n).unwrap(), BigUint::from(df));
        }
    }

    #[test]
    fn zero_length_walks() {
        let g = build_rollet(1, 3);
        assert_eq!(g.count_walks(0, &label(0, &[])).unwrap(), BigUint::from(1u32));
        assert_eq!(g.count_walks(0, &label(1, &[1])).unwrap(), BigUint::zero());
        assert!(g.count_walks(9, &label(0, &[])).is_err());
    }

    #[test]
    fn audits_per_height_bound() {
        let mut cache = crate::height::HeightCache::new();
        for (l, n, expect) in [
            (-1i64, 4usize, 14usize), // Catalan
            (0, 3, 11),
            (1, 3, 15),
            (0, 4, 43),
            (2, 4, 105), // double factorial
        ] {
            let audit = dimension_audit(l, n, &mut cache).unwrap();
            assert_eq!(audit.algebra_dim, expect, "l={l}, n={n}");
            assert!(audit.passes(), "l={l}, n={n}");
        }
    }

    #[test]
    fn walk_to_three_row_shape() {
        // dim of the (3,(2,1)) standard module at n=3 is 2 for l >= 1
        let g = build_rollet(1, 5);
        assert_eq!(
            g.count_walks(3, &label(3, &[2, 1])).unwrap(),
            BigUint::from(2u32)
        );
    }
}
