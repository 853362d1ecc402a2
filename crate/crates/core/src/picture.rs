//! Combinatorial pictures of pair partitions as slice words, and the exact
//! left-height of such a picture.
//!
//! A slice word reads a drawing top to bottom, one elementary strip per
//! event: `Cross(i)` swaps the strands at positions `i`, `i+1`; `Cap(i)`
//! joins them (removing two strands); `Cup(i)` inserts two new joined
//! strands at positions `i`, `i+1`. Positions are 1-based among the strands
//! currently present.
//!
//! The drawing's faces form a graph: moving within a face or across a strip
//! boundary costs nothing, crossing a strand costs one. The left-height of a
//! crossing is the cheapest cost from the face containing the left edge, and
//! the height of the picture is the maximum over its crossings (`-1` when
//! there are none).

use alloc::collections::VecDeque;
use alloc::fmt;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::diagram::{DiagramError, Label, PairPartition, ScaledDiagram, SetPartition};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Event {
    Cross(usize),
    Cap(usize),
    Cup(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    /// An event addressed a strand position that is not present.
    BadPosition { index: usize, event: Event },
    ArityMismatch { expected: usize, got: usize },
    Parse(String),
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::BadPosition { index, event } => {
                write!(f, "event {index} ({event:?}) is out of range")
            }
            WordError::ArityMismatch { expected, got } => {
                write!(f, "stack arity mismatch: expected {expected}, got {got}")
            }
            WordError::Parse(s) => write!(f, "cannot parse slice word: {s}"),
        }
    }
}

impl core::error::Error for WordError {}

/// A well-formed sequence of events on `n_top` initial strands.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SliceWord {
    n_top: usize,
    events: Vec<Event>,
}

impl fmt::Debug for SliceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SliceWord({self})")
    }
}

/// Compact string form `n=3:X1.C2.U2` (X cross, C cap, U cup).
impl fmt::Display for SliceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}:", self.n_top)?;
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            match e {
                Event::Cross(p) => write!(f, "X{p}")?,
                Event::Cap(p) => write!(f, "C{p}")?,
                Event::Cup(p) => write!(f, "U{p}")?,
            }
        }
        Ok(())
    }
}

impl core::str::FromStr for SliceWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, WordError> {
        let bad = || WordError::Parse(String::from(s));
        let rest = s.strip_prefix("n=").ok_or_else(bad)?;
        let (n_str, ev_str) = rest.split_once(':').ok_or_else(bad)?;
        let n_top: usize = n_str.trim().parse().map_err(|_| bad())?;
        let mut events = Vec::new();
        for tok in ev_str.split('.') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let pos: usize = tok[1..].parse().map_err(|_| bad())?;
            let ev = match tok.as_bytes()[0] {
                b'X' => Event::Cross(pos),
                b'C' => Event::Cap(pos),
                b'U' => Event::Cup(pos),
                _ => return Err(bad()),
            };
            events.push(ev);
        }
        SliceWord::new(n_top, events)
    }
}

impl SliceWord {
    pub fn new(n_top: usize, events: Vec<Event>) -> Result<Self, WordError> {
        let mut count = n_top;
        for (index, &event) in events.iter().enumerate() {
            match event {
                Event::Cross(i) | Event::Cap(i) => {
                    if i < 1 || i + 1 > count {
                        return Err(WordError::BadPosition { index, event });
                    }
                    if let Event::Cap(_) = event {
                        count -= 2;
                    }
                }
                Event::Cup(i) => {
                    if i < 1 || i > count + 1 {
                        return Err(WordError::BadPosition { index, event });
                    }
                    count += 2;
                }
            }
        }
        Ok(SliceWord { n_top, events })
    }

    pub fn identity(n: usize) -> Self {
        SliceWord {
            n_top: n,
            events: Vec::new(),
        }
    }

    pub fn n_top(&self) -> usize {
        self.n_top
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn n_bottom(&self) -> usize {
        let mut count = self.n_top;
        for e in &self.events {
            match e {
                Event::Cross(_) => {}
                Event::Cap(_) => count -= 2,
                Event::Cup(_) => count += 2,
            }
        }
        count
    }

    pub fn crossings(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, Event::Cross(_)))
            .count()
    }

    /// Concatenate two words vertically; realizes the diagram composition.
    pub fn stack(&self, below: &SliceWord) -> Result<SliceWord, WordError> {
        let nb = self.n_bottom();
        if nb != below.n_top {
            return Err(WordError::ArityMismatch {
                expected: nb,
                got: below.n_top,
            });
        }
        let mut events = self.events.clone();
        events.extend_from_slice(&below.events);
        Ok(SliceWord {
            n_top: self.n_top,
            events,
        })
    }

    /// Top-bottom mirror: reverse the strips and exchange cups with caps.
    pub fn vflip(&self) -> SliceWord {
        let events = self
            .events
            .iter()
            .rev()
            .map(|e| match *e {
                Event::Cross(i) => Event::Cross(i),
                Event::Cap(i) => Event::Cup(i),
                Event::Cup(i) => Event::Cap(i),
            })
            .collect();
        SliceWord {
            n_top: self.n_bottom(),
            events,
        }
    }

    /// Trace the strands: the induced pair partition of the boundary points
    /// plus one loop-power per component closed inside the word.
    pub fn realize(&self) -> ScaledDiagram {
        // Each strand segment is a union-find node; exterior endpoints get
        // labels when the sweep opens (north) or closes (south).
        let mut parent: Vec<usize> = (0..self.n_top).collect();
        let mut labels: Vec<Vec<Label>> = (1..=self.n_top)
            .map(|i| vec![i as Label])
            .collect();
        let mut open: Vec<usize> = (0..self.n_top).collect();

        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }

        let mut delta_exp = 0usize;
        for &e in &self.events {
            match e {
                Event::Cross(i) => open.swap(i - 1, i),
                Event::Cap(i) => {
                    let a = find(&mut parent, open[i - 1]);
                    let b = find(&mut parent, open[i]);
                    if a == b {
                        delta_exp += 1; // the strand closed onto itself
                    } else {
                        parent[a] = b;
                        let moved = core::mem::take(&mut labels[a]);
                        labels[b].extend(moved);
                    }
                    open.drain(i - 1..=i);
                }
                Event::Cup(i) => {
                    let id = parent.len();
                    parent.push(id);
                    labels.push(Vec::new());
                    open.insert(i - 1, id);
                    open.insert(i, id);
                }
            }
        }
        let m = open.len();
        for (j, &node) in open.iter().enumerate() {
            let r = find(&mut parent, node);
            labels[r].push(-((j + 1) as Label));
        }
        let mut blocks = Vec::new();
        #[allow(clippy::needless_range_loop)] // find() needs the whole table
        for x in 0..parent.len() {
            if find(&mut parent, x) == x && !labels[x].is_empty() {
                blocks.push(labels[x].clone());
            }
            // components with no exterior label were already counted at cap time
        }
        let diagram = SetPartition::new(self.n_top, m, blocks)
            .expect("traced strands partition the boundary");
        ScaledDiagram::with_exp(diagram, delta_exp)
    }

    /// Realize and insist on a pair partition (always true for well-formed
    /// words, kept as an explicit conversion).
    pub fn realize_pairs(&self) -> Result<(PairPartition, usize), DiagramError> {
        let sd = self.realize();
        let exp = sd.delta_exp;
        Ok((PairPartition::new(sd.diagram)?, exp))
    }

    /// Left-height of this picture: max over crossings of the 0/1 shortest
    /// path distance from the leftmost face, `-1` without crossings.
    pub fn picture_height(&self) -> i64 {
        let graph = FaceGraph::build(self);
        graph.height()
    }

    /// Height of each crossing event, in word order.
    pub fn crossing_heights(&self) -> Vec<i64> {
        FaceGraph::build(self).crossing_heights()
    }

    /// Whether the face containing the left edge meets the frame in a single
    /// connected arc.
    pub fn is_left_simple(&self) -> bool {
        FaceGraph::build(self).left_simple()
    }
}

/// Faces of the strip arrangement with 0/1 weighted adjacency.
///
/// Within a strip with `k` strands the faces are the gaps `0..=k`, except
/// that a `Cross(i)` strip splits gap `i` into an upper and a lower wedge
/// (no direct passage between them: the crossing point separates the two),
/// and a `Cap(i)`/`Cup(i)` strip merges the two gaps flanking the arc with
/// the region beyond its apex, the enclosed gap lying across the arc at
/// cost one.
pub struct FaceGraph {
    adj: Vec<Vec<(usize, u8)>>,
    leftmost: usize,
    /// Four incident faces per crossing: left, upper wedge, lower wedge,
    /// right.
    crossings: Vec<[usize; 4]>,
    /// Faces adjacent to the northern frame segments (n_top + 1 of them).
    north: Vec<usize>,
    /// Faces adjacent to the southern frame segments.
    south: Vec<usize>,
    /// One face per strip touching the right edge.
    right: Vec<usize>,
}

/// Internal faces of one strip plus its boundary gap maps.
pub(crate) struct Strip {
    pub(crate) faces: usize,
    pub(crate) top: Vec<usize>,
    pub(crate) bottom: Vec<usize>,
    pub(crate) edges: Vec<(usize, usize)>,
    pub(crate) crossing: Option<[usize; 4]>,
}

pub(crate) fn strip_for(event: Event, k_top: usize) -> Strip {
    match event {
        Event::Cross(i) => {
            // Faces: gaps 0..=k with gap i twice (upper, lower).
            // ids: gap g (g != i) -> g for g < i, g-? keep simple: map below.
            let k = k_top;
            let id_of_gap = |g: usize| -> usize {
                if g < i {
                    g
                } else {
                    g - 1 // gaps i+1..=k shift down; slots i, i+1 unused here
                }
            };
            let upper = k; // after gap ids 0..k-1 (gap i omitted)
            let lower = k + 1;
            let faces = k + 2;
            let mut top = Vec::with_capacity(k + 1);
            let mut bottom = Vec::with_capacity(k + 1);
            for g in 0..=k {
                if g == i {
                    top.push(upper);
                    bottom.push(lower);
                } else {
                    top.push(id_of_gap(g));
                    bottom.push(id_of_gap(g));
                }
            }
            let mut edges = Vec::new();
            for g in 0..k {
                // between gap g and gap g+1: skip the two pairs that involve
                // the split gap, handled explicitly
                if g == i - 1 || g == i {
                    continue;
                }
                edges.push((id_of_gap(g), id_of_gap(g + 1)));
            }
            let left = id_of_gap(i - 1);
            let right = id_of_gap(i + 1);
            edges.push((left, upper));
            edges.push((left, lower));
            edges.push((right, upper));
            edges.push((right, lower));
            Strip {
                faces,
                top,
                bottom,
                edges,
                crossing: Some([left, upper, lower, right]),
            }
        }
        Event::Cap(i) => {
            // k strands become k-2; the arc joins strands i, i+1.
            let k = k_top;
            // Faces: plain gaps g for g <= i-2 or g >= i+2, BIG, IN.
            let plain = |g: usize| -> usize {
                if g <= i.saturating_sub(2) {
                    g
                } else {
                    g - 3 // g >= i+2
                }
            };
            let n_plain = (k + 1).saturating_sub(3);
            let big = n_plain;
            let inside = n_plain + 1;
            let mut top = Vec::with_capacity(k + 1);
            for g in 0..=k {
                if g == i {
                    top.push(inside);
                } else if g == i - 1 || g == i + 1 {
                    top.push(big);
                } else {
                    top.push(plain(g));
                }
            }
            let mut bottom = Vec::with_capacity(k - 1);
            for g in 0..=k - 2 {
                if g < i - 1 {
                    bottom.push(plain(g));
                } else if g == i - 1 {
                    bottom.push(big);
                } else {
                    bottom.push(plain(g + 2));
                }
            }
            let mut edges = vec![(inside, big)];
            for g in 0..k {
                let (a, b) = (g, g + 1);
                // skip pairs touching the arc's gaps: (i-1,i),(i,i+1) are the
                // IN-BIG contact, already added
                if b == i || a == i {
                    continue;
                }
                let fa = if a == i - 1 || a == i + 1 { big } else { plain(a) };
                let fb = if b == i - 1 || b == i + 1 { big } else { plain(b) };
                if fa != fb {
                    edges.push((fa, fb));
                }
            }
            Strip {
                faces: n_plain + 2,
                top,
                bottom,
                edges,
                crossing: None,
            }
        }
        Event::Cup(i) => {
            // Mirror image of Cap: k strands become k+2.
            let k = k_top + 2; // strand count below, arc at positions i, i+1
            let plain = |g: usize| -> usize {
                if g <= i.saturating_sub(2) {
                    g
                } else {
                    g - 3
                }
            };
            let n_plain = (k + 1).saturating_sub(3);
            let big = n_plain;
            let inside = n_plain + 1;
            let mut bottom = Vec::with_capacity(k + 1);
            for g in 0..=k {
                if g == i {
                    bottom.push(inside);
                } else if g == i - 1 || g == i + 1 {
                    bottom.push(big);
                } else {
                    bottom.push(plain(g));
                }
            }
            let mut top = Vec::with_capacity(k - 1);
            for g in 0..=k - 2 {
                if g < i - 1 {
                    top.push(plain(g));
                } else if g == i - 1 {
                    top.push(big);
                } else {
                    top.push(plain(g + 2));
                }
            }
            let mut edges = vec![(inside, big)];
            for g in 0..k {
                let (a, b) = (g, g + 1);
                if b == i || a == i {
                    continue;
                }
                let fa = if a == i - 1 || a == i + 1 { big } else { plain(a) };
                let fb = if b == i - 1 || b == i + 1 { big } else { plain(b) };
                if fa != fb {
                    edges.push((fa, fb));
                }
            }
            Strip {
                faces: n_plain + 2,
                top,
                bottom,
                edges,
                crossing: None,
            }
        }
    }
}

impl FaceGraph {
    pub fn build(word: &SliceWord) -> FaceGraph {
        // An eventless picture still has one row of faces.
        if word.events.is_empty() {
            let n = word.n_top;
            let mut adj: Vec<Vec<(usize, u8)>> = vec![Vec::new(); n + 1];
            for g in 0..n {
                adj[g].push((g + 1, 1));
                adj[g + 1].push((g, 1));
            }
            return FaceGraph {
                adj,
                leftmost: 0,
                crossings: Vec::new(),
                north: (0..=n).collect(),
                south: (0..=n).collect(),
                right: vec![n],
            };
        }

        let mut strips = Vec::new();
        let mut k = word.n_top;
        for &e in &word.events {
            strips.push((strip_for(e, k), k));
            k = match e {
                Event::Cross(_) => k,
                Event::Cap(_) => k - 2,
                Event::Cup(_) => k + 2,
            };
        }

        let mut offset = 0usize;
        let mut offsets = Vec::with_capacity(strips.len());
        for (s, _) in &strips {
            offsets.push(offset);
            offset += s.faces;
        }
        let total = offset;
        let mut adj: Vec<Vec<(usize, u8)>> = vec![Vec::new(); total];
        let mut crossings = Vec::new();
        for (idx, (s, _)) in strips.iter().enumerate() {
            let base = offsets[idx];
            for &(a, b) in &s.edges {
                adj[base + a].push((base + b, 1));
                adj[base + b].push((base + a, 1));
            }
            if let Some(c) = s.crossing {
                crossings.push([base + c[0], base + c[1], base + c[2], base + c[3]]);
            }
        }
        // Strip boundaries: bottom gaps of one strip meet top gaps of the next.
        for idx in 0..strips.len() - 1 {
            let (above, _) = &strips[idx];
            let (below, _) = &strips[idx + 1];
            debug_assert_eq!(above.bottom.len(), below.top.len());
            for g in 0..above.bottom.len() {
                let a = offsets[idx] + above.bottom[g];
                let b = offsets[idx + 1] + below.top[g];
                adj[a].push((b, 0));
                adj[b].push((a, 0));
            }
        }

        let north = strips[0].0.top.to_vec();
        let last = strips.len() - 1;
        let south = strips[last]
            .0
            .bottom
            .iter()
            .map(|&f| offsets[last] + f)
            .collect();
        let right = strips
            .iter()
            .enumerate()
            .map(|(idx, (s, _))| offsets[idx] + *s.top.last().max(s.bottom.last()).unwrap())
            .collect();
        FaceGraph {
            adj,
            leftmost: strips[0].0.top[0],
            crossings,
            north,
            south,
            right,
        }
    }

    /// 0/1 BFS distances from the leftmost face.
    fn distances(&self) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.adj.len()];
        let mut dq = VecDeque::new();
        dist[self.leftmost] = 0;
        dq.push_back(self.leftmost);
        while let Some(v) = dq.pop_front() {
            let dv = dist[v];
            for &(w, weight) in &self.adj[v] {
                let nd = dv + u32::from(weight);
                if nd < dist[w] {
                    dist[w] = nd;
                    if weight == 0 {
                        dq.push_front(w);
                    } else {
                        dq.push_back(w);
                    }
                }
            }
        }
        dist
    }

    pub fn height(&self) -> i64 {
        self.crossing_heights().into_iter().max().unwrap_or(-1)
    }

    pub fn crossing_heights(&self) -> Vec<i64> {
        if self.crossings.is_empty() {
            return Vec::new();
        }
        let dist = self.distances();
        self.crossings
            .iter()
            .map(|faces| faces.iter().map(|&f| dist[f]).min().unwrap() as i64)
            .collect()
    }


    /// Does the closure of the leftmost alcove meet the frame in one arc?
    ///
    /// The frame, walked as a circle, consists of the left edge, the northern
    /// segments between marked points, the right edge and the southern
    /// segments. A segment belongs to the leftmost alcove when its adjacent
    /// face is connected to the left edge by zero-cost moves alone.
    pub fn left_simple(&self) -> bool {
        let dist = self.distances();
        let in_alcove = |f: usize| dist[f] == 0;
        let mut circle: Vec<bool> = Vec::new();
        circle.push(true); // left edge
        circle.extend(self.north.iter().map(|&f| in_alcove(f)));
        circle.push(self.right.iter().any(|&f| in_alcove(f)));
        circle.extend(self.south.iter().rev().map(|&f| in_alcove(f)));
        // Count maximal runs of `true` cyclically.
        let n = circle.len();
        let mut runs = 0;
        for i in 0..n {
            if circle[i] && !circle[(i + n - 1) % n] {
                runs += 1;
            }
        }
        runs <= 1
    }
}
