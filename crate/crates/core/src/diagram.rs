//! Set partitions and pair partitions of the boundary points of a rectangle,
//! with the diagram-category operations.
//!
//! Labels are signed: northern point `i` is `i > 0`, southern point `j'` is
//! `-j`. One type then covers partitions of `n` northern and `m` southern
//! points for all arities, and the top-bottom flip is a sign map.

use alloc::collections::BTreeSet;
use alloc::fmt;
use alloc::vec;
use alloc::vec::Vec;

use crate::symgrp::Perm;

pub type Label = i32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramError {
    ArityMismatch { expected: usize, got: usize },
    BadBlocks,
    NotPairPartition,
    PropagatingMismatch { expected: usize, got: usize },
    NotLocalizable,
}

impl fmt::Display for DiagramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramError::ArityMismatch { expected, got } => {
                write!(f, "inner arity mismatch: expected {expected}, got {got}")
            }
            DiagramError::BadBlocks => write!(f, "blocks do not partition the label set"),
            DiagramError::NotPairPartition => write!(f, "not a pair partition"),
            DiagramError::PropagatingMismatch { expected, got } => {
                write!(f, "expected {expected} propagating parts, got {got}")
            }
            DiagramError::NotLocalizable => {
                write!(f, "diagram is not of the form e*a*e")
            }
        }
    }
}

impl core::error::Error for DiagramError {}

/// Sort key placing labels in frame order: by absolute value, northern
/// before southern at ties.
fn label_key(x: Label) -> (u32, u8) {
    (x.unsigned_abs(), u8::from(x < 0))
}

/// Within a block, northern labels come first, each side ascending.
fn in_block_key(x: Label) -> (u8, u32) {
    (u8::from(x < 0), x.unsigned_abs())
}

/// A partition of `{1..n} U {-1..-m}` into disjoint nonempty blocks, stored
/// in canonical order: northern labels first within a block, blocks sorted
/// by their least absolute label (northern wins ties).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    n: usize,
    m: usize,
    blocks: Vec<Vec<Label>>,
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetPartition({},{};{:?})", self.n, self.m, self.blocks)
    }
}

impl SetPartition {
    pub fn new(n: usize, m: usize, blocks: Vec<Vec<Label>>) -> Result<Self, DiagramError> {
        let mut seen = BTreeSet::new();
        for b in &blocks {
            if b.is_empty() {
                return Err(DiagramError::BadBlocks);
            }
            for &x in b {
                let ok = (x > 0 && x as usize <= n) || (x < 0 && (-x) as usize <= m);
                if !ok || !seen.insert(x) {
                    return Err(DiagramError::BadBlocks);
                }
            }
        }
        if seen.len() != n + m {
            return Err(DiagramError::BadBlocks);
        }
        let mut blocks = blocks;
        for b in &mut blocks {
            b.sort_by_key(|&x| in_block_key(x));
        }
        blocks.sort_by_key(|b| b.iter().map(|&x| label_key(x)).min());
        Ok(SetPartition { n, m, blocks })
    }

    /// Identity diagram `1_n`.
    pub fn identity(n: usize) -> Self {
        SetPartition::new(n, n, (1..=n as Label).map(|i| vec![i, -i]).collect())
            .expect("identity blocks are valid")
    }

    /// The unique element of `J(2,0)`: one northern pair.
    pub fn u_arc() -> Self {
        SetPartition::new(2, 0, vec![vec![1, 2]]).unwrap()
    }

    /// `U in J(2,2)`: northern pair over southern pair.
    pub fn cap_cup() -> Self {
        SetPartition::new(2, 2, vec![vec![1, 2], vec![-1, -2]]).unwrap()
    }

    /// `e_n = 1_{n-2} (x) U`.
    pub fn e_n(n: usize) -> Self {
        assert!(n >= 2);
        SetPartition::identity(n - 2).tensor(&SetPartition::cap_cup())
    }

    /// `e_{n,t} = 1_{n-2t} (x) U^{(x)t}`.
    pub fn e_nt(n: usize, t: usize) -> Self {
        assert!(n >= 2 * t);
        let mut d = SetPartition::identity(n - 2 * t);
        for _ in 0..t {
            d = d.tensor(&SetPartition::cap_cup());
        }
        d
    }

    /// Coxeter generator `sigma_i` as a diagram in `J(n,n)`.
    pub fn sigma(i: usize, n: usize) -> Self {
        assert!(i < n && i >= 1);
        let mut blocks = Vec::with_capacity(n);
        for j in 1..=n {
            let target = if j == i {
                i + 1
            } else if j == i + 1 {
                i
            } else {
                j
            };
            blocks.push(vec![j as Label, -(target as Label)]);
        }
        SetPartition::new(n, n, blocks).unwrap()
    }

    /// Permutation diagram: northern `i` joined to southern `pi(i)'`
    /// (0-based permutation).
    pub fn from_perm(pi: &Perm) -> Self {
        let n = pi.len();
        let blocks = (0..n)
            .map(|i| vec![(i + 1) as Label, -((pi.apply(i) + 1) as Label)])
            .collect();
        SetPartition::new(n, n, blocks).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[Vec<Label>] {
        &self.blocks
    }

    pub fn is_pair_partition(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// Number of blocks containing both a northern and a southern label.
    pub fn propagating_number(&self) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.iter().any(|&x| x > 0) && b.iter().any(|&x| x < 0))
            .count()
    }

    /// Top-bottom flip `p -> p^*`: swap primed and unprimed labels.
    pub fn flip(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| -x).collect())
            .collect();
        SetPartition::new(self.m, self.n, blocks).expect("flip preserves validity")
    }

    /// Side-by-side juxtaposition: `other`'s labels are shifted past ours.
    pub fn tensor(&self, other: &SetPartition) -> Self {
        let mut blocks = self.blocks.clone();
        for b in &other.blocks {
            blocks.push(
                b.iter()
                    .map(|&x| {
                        if x > 0 {
                            x + self.n as Label
                        } else {
                            x - self.m as Label
                        }
                    })
                    .collect(),
            );
        }
        SetPartition::new(self.n + other.n, self.m + other.m, blocks)
            .expect("tensor preserves validity")
    }

    /// Glue `self` over `other`, identifying our southern points with their
    /// northern points. Returns the partition of the exterior labels plus the
    /// count of components that touched only interior points.
    pub fn compose_counting(
        &self,
        other: &SetPartition,
    ) -> Result<(SetPartition, usize), DiagramError> {
        if self.m != other.n {
            return Err(DiagramError::ArityMismatch {
                expected: self.m,
                got: other.n,
            });
        }
        let n = self.n;
        let mid = self.m;
        let k = other.m;
        // Union-find nodes: 0..n north, n..n+mid middle, n+mid..n+mid+k south.
        let total = n + mid + k;
        let mut uf = UnionFind::new(total);
        let node_top = |x: Label| -> usize {
            if x > 0 {
                (x - 1) as usize
            } else {
                n + ((-x) - 1) as usize
            }
        };
        let node_bot = |x: Label| -> usize {
            if x > 0 {
                n + (x - 1) as usize
            } else {
                n + mid + ((-x) - 1) as usize
            }
        };
        for b in &self.blocks {
            for w in b.windows(2) {
                uf.union(node_top(w[0]), node_top(w[1]));
            }
        }
        for b in &other.blocks {
            for w in b.windows(2) {
                uf.union(node_bot(w[0]), node_bot(w[1]));
            }
        }
        let mut class_members: Vec<Vec<Label>> = vec![Vec::new(); total];
        let mut class_has_middle = vec![false; total];
        for i in 0..n {
            class_members[uf.find(i)].push((i + 1) as Label);
        }
        for j in 0..mid {
            class_has_middle[uf.find(n + j)] = true;
        }
        for j in 0..k {
            class_members[uf.find(n + mid + j)].push(-((j + 1) as Label));
        }
        let mut blocks = Vec::new();
        let mut vacuum = 0;
        for r in 0..total {
            if uf.find(r) != r {
                continue;
            }
            if !class_members[r].is_empty() {
                blocks.push(class_members[r].clone());
            } else if class_has_middle[r] {
                vacuum += 1;
            }
        }
        let result = SetPartition::new(n, k, blocks)?;
        Ok((result, vacuum))
    }

    /// Restriction of a partition of `{1..n} U {-1..-n}` to the first
    /// `n-2` points on each side; only valid when the discarded points pair
    /// among themselves.
    pub fn restrict_to(&self, keep: usize) -> Result<SetPartition, DiagramError> {
        let mut blocks = Vec::new();
        for b in &self.blocks {
            let inside: Vec<Label> = b
                .iter()
                .copied()
                .filter(|&x| (x.unsigned_abs() as usize) <= keep)
                .collect();
            if inside.len() == b.len() {
                blocks.push(inside);
            } else if !inside.is_empty() {
                return Err(DiagramError::NotLocalizable);
            }
        }
        SetPartition::new(keep, keep, blocks)
    }
}

/// A `SetPartition` whose blocks all have size two.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairPartition(SetPartition);

impl fmt::Debug for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pair({},{};{:?})", self.0.n, self.0.m, self.0.blocks)
    }
}

impl PairPartition {
    pub fn new(p: SetPartition) -> Result<Self, DiagramError> {
        if !p.is_pair_partition() {
            return Err(DiagramError::NotPairPartition);
        }
        Ok(PairPartition(p))
    }

    pub fn from_pairs(n: usize, m: usize, pairs: Vec<(Label, Label)>) -> Result<Self, DiagramError> {
        let blocks = pairs.into_iter().map(|(a, b)| vec![a, b]).collect();
        PairPartition::new(SetPartition::new(n, m, blocks)?)
    }

    pub fn identity(n: usize) -> Self {
        PairPartition(SetPartition::identity(n))
    }

    pub fn as_set_partition(&self) -> &SetPartition {
        &self.0
    }

    pub fn into_set_partition(self) -> SetPartition {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn m(&self) -> usize {
        self.0.m
    }

    pub fn blocks(&self) -> &[Vec<Label>] {
        self.0.blocks()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        self.0.blocks.iter().map(|b| (b[0], b[1]))
    }

    /// The partner of a label.
    pub fn partner(&self, x: Label) -> Label {
        for b in &self.0.blocks {
            if b[0] == x {
                return b[1];
            }
            if b[1] == x {
                return b[0];
            }
        }
        panic!("label {x} not present");
    }

    pub fn propagating_number(&self) -> usize {
        self.0.propagating_number()
    }

    pub fn flip(&self) -> Self {
        PairPartition(self.0.flip())
    }

    pub fn tensor(&self, other: &PairPartition) -> Self {
        PairPartition(self.0.tensor(&other.0))
    }

    /// Purely northern pairs, each sorted.
    pub fn northern_arcs(&self) -> Vec<(Label, Label)> {
        self.pairs().filter(|&(a, b)| a > 0 && b > 0).collect()
    }

    pub fn southern_arcs(&self) -> Vec<(Label, Label)> {
        self.pairs().filter(|&(a, b)| a < 0 && b < 0).collect()
    }

    /// The pairs with one endpoint on each edge, as `(north, south_index)`
    /// with `south_index` positive.
    pub fn propagating_pairs(&self) -> Vec<(Label, Label)> {
        self.pairs()
            .filter_map(|(a, b)| match (a > 0, b > 0) {
                (true, false) => Some((a, -b)),
                (false, true) => Some((b, -a)),
                _ => None,
            })
            .collect()
    }
}

/// A diagram together with an accumulated power of the loop parameter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ScaledDiagram {
    pub diagram: SetPartition,
    pub delta_exp: usize,
}

impl ScaledDiagram {
    pub fn new(diagram: SetPartition) -> Self {
        ScaledDiagram {
            diagram,
            delta_exp: 0,
        }
    }

    pub fn with_exp(diagram: SetPartition, delta_exp: usize) -> Self {
        ScaledDiagram { diagram, delta_exp }
    }

    pub fn identity(n: usize) -> Self {
        ScaledDiagram::new(SetPartition::identity(n))
    }

    /// Stack composition: glue on the middle points, take the transitive
    /// closure, restrict to exterior labels, and add one `d`-power per
    /// interior-only component.
    pub fn compose(&self, other: &ScaledDiagram) -> Result<ScaledDiagram, DiagramError> {
        let (diagram, vacuum) = self.diagram.compose_counting(&other.diagram)?;
        Ok(ScaledDiagram {
            diagram,
            delta_exp: self.delta_exp + other.delta_exp + vacuum,
        })
    }

    pub fn tensor(&self, other: &ScaledDiagram) -> ScaledDiagram {
        ScaledDiagram {
            diagram: self.diagram.tensor(&other.diagram),
            delta_exp: self.delta_exp + other.delta_exp,
        }
    }

    pub fn flip(&self) -> ScaledDiagram {
        ScaledDiagram {
            diagram: self.diagram.flip(),
            delta_exp: self.delta_exp,
        }
    }
}

/// Polar decomposition of `p in J(n,m,n)` (a pair partition of `(n,n)` with
/// exactly `m` propagating parts): a top factor with non-crossing
/// propagating lines, a permutation middle, and a bottom factor, composing
/// back to `p` with no loops.
pub fn polar_decompose(p: &PairPartition) -> (PairPartition, Perm, PairPartition) {
    let props = p.propagating_pairs();
    let m = props.len();
    // Propagating blocks ordered by northern endpoint.
    let mut by_north = props.clone();
    by_north.sort_by_key(|&(a, _)| a);
    let mut south_sorted: Vec<Label> = props.iter().map(|&(_, s)| s).collect();
    south_sorted.sort_unstable();

    let mut left_blocks: Vec<Vec<Label>> = p
        .northern_arcs()
        .iter()
        .map(|&(a, b)| vec![a, b])
        .collect();
    for (k, &(a, _)) in by_north.iter().enumerate() {
        left_blocks.push(vec![a, -((k + 1) as Label)]);
    }
    let left = PairPartition::new(
        SetPartition::new(p.n(), m, left_blocks).expect("left polar blocks are valid"),
    )
    .expect("left polar factor pairs up");

    // Middle permutation: the block through the k-th northern endpoint ends
    // at the j-th southern endpoint (both in sorted order).
    let mut images = vec![0usize; m];
    for (k, &(_, s)) in by_north.iter().enumerate() {
        let j = south_sorted.binary_search(&s).expect("endpoint present");
        images[k] = j;
    }
    let middle = Perm::new(images);

    let mut right_blocks: Vec<Vec<Label>> = p
        .southern_arcs()
        .iter()
        .map(|&(a, b)| vec![a, b])
        .collect();
    for (k, &s) in south_sorted.iter().enumerate() {
        right_blocks.push(vec![(k + 1) as Label, -s]);
    }
    let right = PairPartition::new(
        SetPartition::new(m, p.m(), right_blocks).expect("right polar blocks are valid"),
    )
    .expect("right polar factor pairs up");
    (left, middle, right)
}

/// Same as [`polar_decompose`] but with the stated propagating count checked.
pub fn polar_decompose_expecting(
    p: &PairPartition,
    m: usize,
) -> Result<(PairPartition, Perm, PairPartition), DiagramError> {
    let got = p.propagating_number();
    if got != m {
        return Err(DiagramError::PropagatingMismatch { expected: m, got });
    }
    Ok(polar_decompose(p))
}

/// The disk-lemma relabeling `J(n+1,n+1) -> J(n+2,n)`: the southern point
/// `(n+1)'` becomes a new northern point `n+2`.
pub fn eta(p: &PairPartition) -> PairPartition {
    assert_eq!(p.n(), p.m(), "eta acts on square diagrams");
    let n1 = p.n();
    let old = -(n1 as Label);
    let blocks = p
        .blocks()
        .iter()
        .map(|b| {
            b.iter()
                .map(|&x| if x == old { (n1 + 1) as Label } else { x })
                .collect()
        })
        .collect();
    PairPartition::new(SetPartition::new(n1 + 1, n1 - 1, blocks).expect("eta relabels validly"))
        .expect("eta preserves pair blocks")
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// All pair partitions of `(n, m)` in canonical order; there are
/// `(n+m-1)!!` of them (and none when `n+m` is odd).
pub fn all_pair_partitions(n: usize, m: usize) -> Vec<PairPartition> {
    let mut labels: Vec<Label> = (1..=n as Label).collect();
    labels.extend((1..=m as Label).map(|j| -j));
    let mut out = Vec::new();
    let mut current: Vec<(Label, Label)> = Vec::new();
    fn rec(
        labels: &[Label],
        used: &mut Vec<bool>,
        current: &mut Vec<(Label, Label)>,
        n: usize,
        m: usize,
        out: &mut Vec<PairPartition>,
    ) {
        let Some(first) = used.iter().position(|&u| !u) else {
            out.push(
                PairPartition::from_pairs(n, m, current.clone()).expect("enumerated pairs valid"),
            );
            return;
        };
        used[first] = true;
        for j in first + 1..labels.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            current.push((labels[first], labels[j]));
            rec(labels, used, current, n, m, out);
            current.pop();
            used[j] = false;
        }
        used[first] = false;
    }
    if (n + m).is_multiple_of(2) {
        let mut used = vec![false; labels.len()];
        rec(&labels, &mut used, &mut current, n, m, &mut out);
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(n: usize, m: usize, pairs: &[(Label, Label)]) -> PairPartition {
        PairPartition::from_pairs(n, m, pairs.to_vec()).unwrap()
    }

    fn sd(n: usize, m: usize, pairs: &[(Label, Label)]) -> ScaledDiagram {
        ScaledDiagram::new(pp(n, m, pairs).into_set_partition())
    }

    #[test]
    fn worked_composition_example() {
        // p in P(1,3), q in P(3,5); gluing produces no interior component,
        // so a premultiplied loop factor just rides along.
        let p = ScaledDiagram::with_exp(
            pp(1, 3, &[(1, -2), (-1, -3)]).into_set_partition(),
            1,
        );
        let q = sd(3, 5, &[(1, -5), (2, -4), (3, -1), (-2, -3)]);
        let r = p.compose(&q).unwrap();
        assert_eq!(
            r.diagram,
            pp(1, 5, &[(1, -4), (-1, -5), (-2, -3)]).into_set_partition()
        );
        assert_eq!(r.delta_exp, 1);
    }

    #[test]
    fn identity_laws() {
        let p = sd(3, 5, &[(1, -5), (2, -4), (3, -1), (-2, -3)]);
        let left = ScaledDiagram::identity(3).compose(&p).unwrap();
        let right = p.compose(&ScaledDiagram::identity(5)).unwrap();
        assert_eq!(left, p);
        assert_eq!(right, p);
    }

    #[test]
    fn u_squared_gains_one_loop() {
        let u = ScaledDiagram::new(SetPartition::cap_cup());
        let uu = u.compose(&u).unwrap();
        assert_eq!(uu.diagram, SetPartition::cap_cup());
        assert_eq!(uu.delta_exp, 1);
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let u = ScaledDiagram::new(SetPartition::cap_cup());
        let id3 = ScaledDiagram::identity(3);
        assert!(matches!(
            u.compose(&id3),
            Err(DiagramError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn tensor_builds_e_n() {
        let e4 = SetPartition::e_n(4);
        assert_eq!(
            e4,
            pp(4, 4, &[(1, -1), (2, -2), (3, 4), (-3, -4)]).into_set_partition()
        );
        assert_eq!(
            SetPartition::identity(2).tensor(&SetPartition::identity(3)),
            SetPartition::identity(5)
        );
        assert_eq!(SetPartition::e_nt(4, 2).propagating_number(), 0);
    }

    #[test]
    fn flip_is_an_involution_and_antihomomorphism() {
        let p = sd(3, 3, &[(1, -2), (2, -3), (3, -1)]);
        let q = sd(3, 3, &[(1, 2), (3, -3), (-1, -2)]);
        assert_eq!(p.flip().flip(), p);
        let lhs = p.compose(&q).unwrap().flip();
        let rhs = q.flip().compose(&p.flip()).unwrap();
        assert_eq!(lhs, rhs);
        // flip(u) is the unique element of J(0,2)
        let u = SetPartition::u_arc();
        assert_eq!(u.flip(), SetPartition::new(0, 2, vec![vec![-1, -2]]).unwrap());
    }

    #[test]
    fn propagating_numbers() {
        assert_eq!(SetPartition::identity(4).propagating_number(), 4);
        assert_eq!(SetPartition::cap_cup().propagating_number(), 0);
        assert_eq!(
            pp(1, 3, &[(1, -2), (-1, -3)]).propagating_number(),
            1
        );
    }

    #[test]
    fn bottleneck_inequality_on_samples() {
        let diagrams = all_pair_partitions(3, 3);
        for p in &diagrams {
            for q in &diagrams {
                let pq = ScaledDiagram::new(p.as_set_partition().clone())
                    .compose(&ScaledDiagram::new(q.as_set_partition().clone()))
                    .unwrap();
                assert!(
                    pq.diagram.propagating_number()
                        <= p.propagating_number().min(q.propagating_number())
                );
            }
        }
    }

    #[test]
    fn polar_recomposes() {
        for p in all_pair_partitions(4, 4) {
            if p.propagating_number() != 2 {
                continue;
            }
            let (l, mid, r) = polar_decompose_expecting(&p, 2).unwrap();
            let m_diag = ScaledDiagram::new(SetPartition::from_perm(&mid));
            let back = ScaledDiagram::new(l.as_set_partition().clone())
                .compose(&m_diag)
                .unwrap()
                .compose(&ScaledDiagram::new(r.as_set_partition().clone()))
                .unwrap();
            assert_eq!(back.diagram, *p.as_set_partition());
            assert_eq!(back.delta_exp, 0);
        }
        let sigma = pp(2, 2, &[(1, -2), (2, -1)]);
        let (l, mid, r) = polar_decompose_expecting(&sigma, 2).unwrap();
        assert_eq!(l, PairPartition::identity(2));
        assert_eq!(r, PairPartition::identity(2));
        assert_eq!(SetPartition::from_perm(&mid), sigma.into_set_partition());
    }

    #[test]
    fn polar_rejects_wrong_count() {
        let p = pp(2, 2, &[(1, 2), (-1, -2)]);
        assert!(matches!(
            polar_decompose_expecting(&p, 2),
            Err(DiagramError::PropagatingMismatch { .. })
        ));
    }

    #[test]
    fn eta_on_identity_gives_hook() {
        let hook = eta(&PairPartition::identity(3));
        assert_eq!(
            hook,
            pp(4, 2, &[(1, -1), (2, -2), (3, 4)])
        );
    }

    #[test]
    fn eta_is_a_bijection_on_small_sets() {
        let src = all_pair_partitions(2, 2);
        let images: BTreeSet<_> = src.iter().map(eta).collect();
        assert_eq!(images.len(), 3);
        let tgt: BTreeSet<_> = all_pair_partitions(3, 1).into_iter().collect();
        assert_eq!(images, tgt);
    }

    #[test]
    fn enumeration_counts_double_factorials() {
        assert_eq!(all_pair_partitions(1, 1).len(), 1);
        assert_eq!(all_pair_partitions(2, 2).len(), 3);
        assert_eq!(all_pair_partitions(3, 3).len(), 15);
        assert_eq!(all_pair_partitions(4, 2).len(), 15);
        assert_eq!(all_pair_partitions(1, 2).len(), 0);
    }

    #[test]
    fn canonical_block_order() {
        let p = SetPartition::new(4, 4, vec![
            vec![-1, 2],
            vec![4, -4],
            vec![1, -2],
            vec![3, -3],
        ])
        .unwrap();
        assert_eq!(
            p.blocks(),
            &[vec![1, -2], vec![2, -1], vec![3, -3], vec![4, -4]]
        );
    }
}
