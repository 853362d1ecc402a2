//! Integer partitions, permutations, and Specht modules built from Young
//! symmetrizers.
//!
//! Symmetrizers are kept unnormalized (integer coefficients) so that every
//! Gram entry downstream stays in `Z[d]`; the idempotent normalization
//! constant `m!/dim` is divided out only where a scalar is extracted.

use alloc::collections::BTreeMap;
use alloc::fmt;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::rational_rank;

/// A permutation of `{0..n-1}` in image form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Self {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            assert!(i < images.len() && !seen[i], "not a permutation");
            seen[i] = true;
        }
        Perm { images }
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Perm { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self * other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm {
            images: (0..self.len()).map(|i| self.apply(other.apply(i))).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Perm { images }
    }

    pub fn sign(&self) -> i64 {
        let mut seen = vec![false; self.len()];
        let mut sign = 1;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// Largest moved point plus one, 0 for the identity.
    pub fn support_bound(&self) -> usize {
        (0..self.len())
            .rev()
            .find(|&i| self.images[i] != i)
            .map_or(0, |i| i + 1)
    }

    /// All permutations of `{0..n-1}` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut images: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm {
                images: images.clone(),
            });
            // next_permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| images[i] < images[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| images[j] > images[i]).unwrap();
            images.swap(i, j);
            images[i + 1..].reverse();
        }
        out
    }
}

/// A weakly decreasing sequence of positive parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntPartition {
    parts: Vec<usize>,
}

impl fmt::Debug for IntPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})", self.parts)
    }
}

impl fmt::Display for IntPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl IntPartition {
    pub fn new(parts: Vec<usize>) -> Self {
        assert!(parts.windows(2).all(|w| w[0] >= w[1]), "parts must decrease");
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive");
        IntPartition { parts }
    }

    pub fn empty() -> Self {
        IntPartition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// All partitions of `m`, in descending lexicographic order.
    pub fn all_of(m: usize) -> Vec<IntPartition> {
        fn rec(rem: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<IntPartition>) {
            if rem == 0 {
                out.push(IntPartition { parts: acc.clone() });
                return;
            }
            for next in (1..=rem.min(max)).rev() {
                acc.push(next);
                rec(rem - next, next, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, m, &mut Vec::new(), &mut out);
        out
    }

    /// Partitions reachable by adding one box.
    pub fn with_added_box(&self) -> Vec<IntPartition> {
        let mut out = Vec::new();
        for row in 0..=self.parts.len() {
            let here = self.parts.get(row).copied().unwrap_or(0);
            let above = if row == 0 {
                usize::MAX
            } else {
                self.parts[row - 1]
            };
            if here < above {
                let mut parts = self.parts.clone();
                if row == parts.len() {
                    parts.push(1);
                } else {
                    parts[row] += 1;
                }
                out.push(IntPartition { parts });
            }
        }
        out
    }

    /// Partitions reachable by removing one box.
    pub fn with_removed_box(&self) -> Vec<IntPartition> {
        let mut out = Vec::new();
        for row in 0..self.parts.len() {
            let below = self.parts.get(row + 1).copied().unwrap_or(0);
            if self.parts[row] > below {
                let mut parts = self.parts.clone();
                parts[row] -= 1;
                if parts[row] == 0 {
                    parts.remove(row);
                }
                out.push(IntPartition { parts });
            }
        }
        out
    }

    /// Number of standard Young tableaux, by the hook length formula.
    pub fn dimension(&self) -> usize {
        let m = self.weight();
        if m == 0 {
            return 1;
        }
        let conj = self.conjugate();
        let mut numer = BigInt::one();
        for k in 1..=m {
            numer *= BigInt::from(k);
        }
        let mut hooks = BigInt::one();
        for (r, &len) in self.parts.iter().enumerate() {
            for c in 0..len {
                let hook = (len - c) + (conj.parts[c] - r) - 1;
                hooks *= BigInt::from(hook);
            }
        }
        let dim = numer / hooks;
        let digits = dim.to_u64_digits();
        assert!(digits.0 != num_bigint::Sign::Minus && digits.1.len() <= 1);
        digits.1.first().copied().unwrap_or(0) as usize
    }

    pub fn conjugate(&self) -> IntPartition {
        let cols = self.parts.first().copied().unwrap_or(0);
        let parts = (0..cols)
            .map(|c| self.parts.iter().filter(|&&p| p > c).count())
            .collect();
        IntPartition { parts }
    }
}

/// Standard Young tableaux of a given shape, each returned as the row-major
/// list of entries (0-based values).
pub fn standard_tableaux(shape: &IntPartition) -> Vec<Vec<usize>> {
    let m = shape.weight();
    let rows = shape.parts().to_vec();
    let mut filling = vec![usize::MAX; m];
    let mut out = Vec::new();
    // Cell (r,c) is flattened at offset(r)+c.
    let offsets: Vec<usize> = rows
        .iter()
        .scan(0, |acc, &len| {
            let here = *acc;
            *acc += len;
            Some(here)
        })
        .collect();
    fn rec(
        value: usize,
        m: usize,
        rows: &[usize],
        offsets: &[usize],
        row_fill: &mut Vec<usize>,
        filling: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if value == m {
            out.push(filling.clone());
            return;
        }
        for r in 0..rows.len() {
            let c = row_fill[r];
            if c >= rows[r] {
                continue;
            }
            if r > 0 && row_fill[r - 1] <= c {
                continue; // cell above must be filled first
            }
            filling[offsets[r] + c] = value;
            row_fill[r] += 1;
            rec(value + 1, m, rows, offsets, row_fill, filling, out);
            row_fill[r] -= 1;
            filling[offsets[r] + c] = usize::MAX;
        }
    }
    let mut row_fill = vec![0usize; rows.len()];
    rec(0, m, &rows, &offsets, &mut row_fill, &mut filling, &mut out);
    out
}

/// An element of the integral group algebra `Z S_m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupAlgebraElement {
    pub m: usize,
    pub terms: BTreeMap<Perm, BigInt>,
}

impl GroupAlgebraElement {
    pub fn zero(m: usize) -> Self {
        GroupAlgebraElement {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(m: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Perm::identity(m), BigInt::one());
        GroupAlgebraElement { m, terms }
    }

    pub fn from_perm(p: Perm) -> Self {
        let m = p.len();
        let mut terms = BTreeMap::new();
        terms.insert(p, BigInt::one());
        GroupAlgebraElement { m, terms }
    }

    pub fn add_term(&mut self, p: Perm, c: BigInt) {
        let entry = self.terms.entry(p).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            // keep support canonical
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return GroupAlgebraElement::zero(self.m);
        }
        GroupAlgebraElement {
            m: self.m,
            terms: self.terms.iter().map(|(p, v)| (p.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let mut out = GroupAlgebraElement::zero(self.m);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_term(p.compose(q), a * b);
            }
        }
        out
    }

    /// Left multiplication by a single permutation.
    pub fn left_mul_perm(&self, g: &Perm) -> Self {
        GroupAlgebraElement {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (g.compose(p), c.clone()))
                .collect(),
        }
    }

    /// Coefficient-of-inverse map, the diagram flip on permutations.
    pub fn flip(&self) -> Self {
        GroupAlgebraElement {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (p.inverse(), c.clone()))
                .collect(),
        }
    }

    pub fn coefficient(&self, p: &Perm) -> BigInt {
        self.terms.get(p).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Coordinates in the full group basis, in `Perm::all` order.
    fn coordinates(&self, group: &[Perm]) -> Vec<BigRational> {
        group
            .iter()
            .map(|g| BigRational::from_integer(self.coefficient(g)))
            .collect()
    }
}

/// The canonical tableau fills rows left to right, top to bottom.
fn canonical_tableau(shape: &IntPartition) -> Vec<Vec<usize>> {
    let mut rows = Vec::new();
    let mut next = 0;
    for &len in shape.parts() {
        rows.push((next..next + len).collect::<Vec<_>>());
        next += len;
    }
    rows
}

/// The unnormalized Young symmetrizer of the canonical tableau: row sum times
/// signed column sum. Satisfies `eps^2 = (m!/dim) eps`.
pub fn young_symmetrizer(shape: &IntPartition) -> GroupAlgebraElement {
    let m = shape.weight();
    let rows = canonical_tableau(shape);
    let mut cols: Vec<Vec<usize>> = Vec::new();
    let width = shape.parts().first().copied().unwrap_or(0);
    for c in 0..width {
        cols.push(rows.iter().filter_map(|r| r.get(c).copied()).collect());
    }
    let row_sum = stabilizer_sum(m, &rows, false);
    let col_sum = stabilizer_sum(m, &cols, true);
    row_sum.mul(&col_sum)
}

/// Sum over the Young subgroup fixing the given cell groups, optionally
/// signed.
fn stabilizer_sum(m: usize, groups: &[Vec<usize>], signed: bool) -> GroupAlgebraElement {
    let mut acc = GroupAlgebraElement::one(m);
    for group in groups {
        if group.len() <= 1 {
            continue;
        }
        let mut part = GroupAlgebraElement::zero(m);
        for perm_of_group in Perm::all(group.len()) {
            let mut images: Vec<usize> = (0..m).collect();
            for (slot, &cell) in group.iter().enumerate() {
                images[cell] = group[perm_of_group.apply(slot)];
            }
            let g = Perm::new(images);
            let coeff = if signed {
                BigInt::from(g.sign())
            } else {
                BigInt::one()
            };
            part.add_term(g, coeff);
        }
        acc = acc.mul(&part);
    }
    acc
}

/// A fixed basis for the left ideal `k S_m eps_lambda`: one vector per
/// standard tableau, obtained by left-multiplying the symmetrizer with the
/// permutation carrying the canonical tableau to that tableau.
pub struct SpechtBasis {
    pub shape: IntPartition,
    pub symmetrizer: GroupAlgebraElement,
    pub vectors: Vec<GroupAlgebraElement>,
    group: Vec<Perm>,
}

impl SpechtBasis {
    pub fn new(shape: &IntPartition) -> Self {
        let m = shape.weight();
        let eps = young_symmetrizer(shape);
        let canon = canonical_tableau(shape);
        let canon_flat: Vec<usize> = canon.iter().flatten().copied().collect();
        let mut vectors = Vec::new();
        for tab in standard_tableaux(shape) {
            let mut images = vec![0usize; m];
            for (pos, &entry) in tab.iter().enumerate() {
                images[canon_flat[pos]] = entry;
            }
            let g = Perm::new(images);
            vectors.push(eps.left_mul_perm(&g));
        }
        let group = Perm::all(m);
        let basis = SpechtBasis {
            shape: shape.clone(),
            symmetrizer: eps,
            vectors,
            group,
        };
        assert_eq!(
            basis.rank(),
            basis.vectors.len(),
            "tableau vectors must be independent"
        );
        basis
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    fn rank(&self) -> usize {
        let rows = self.vectors.len();
        let cols = self.group.len();
        let mut flat = Vec::with_capacity(rows * cols);
        for v in &self.vectors {
            flat.extend(v.coordinates(&self.group));
        }
        rational_rank(rows, cols, flat)
    }

    /// Express an element of the ideal in this basis. Panics if the element
    /// is outside the span (which would violate the Specht property).
    pub fn expand(&self, v: &GroupAlgebraElement) -> Vec<BigRational> {
        let rows = self.group.len();
        let cols = self.vectors.len();
        let mut a = Vec::with_capacity(rows * cols);
        for g in &self.group {
            for vec in &self.vectors {
                a.push(BigRational::from_integer(vec.coefficient(g)));
            }
        }
        let b = v.coordinates(&self.group);
        crate::exact::solve_in_span(rows, cols, &a, &b)
            .expect("element lies in the Specht span")
    }

    /// Matrix of left multiplication by `g`, columns expanded in the basis.
    /// Entries are integral for this basis; that integrality is asserted.
    pub fn action_matrix(&self, g: &Perm) -> Vec<Vec<BigInt>> {
        let d = self.dim();
        let mut cols = Vec::with_capacity(d);
        for v in &self.vectors {
            let moved = v.left_mul_perm(g);
            let coords = self.expand(&moved);
            let col: Vec<BigInt> = coords
                .iter()
                .map(|c| {
                    assert!(c.is_integer(), "Specht action must be integral");
                    c.to_integer()
                })
                .collect();
            cols.push(col);
        }
        // transpose to row-major
        (0..d)
            .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
            .collect()
    }
}

/// Dimensions of all Specht modules of `S_m`, by standard tableau count.
pub fn specht_dims(m: usize) -> BTreeMap<IntPartition, usize> {
    IntPartition::all_of(m)
        .into_iter()
        .map(|shape| {
            let d = shape.dimension();
            (shape, d)
        })
        .collect()
}

/// `m! / dim`, the symmetrizer normalization constant.
pub fn symmetrizer_norm(shape: &IntPartition) -> BigInt {
    let m = shape.weight();
    let mut fact = BigInt::one();
    for k in 1..=m {
        fact *= BigInt::from(k);
    }
    fact / BigInt::from(shape.dimension() as u64)
}
