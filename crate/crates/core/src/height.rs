//! Left-height of a pair partition: the minimum picture height over a
//! bounded, anchored search space of slice words realizing it.
//!
//! No algorithm is known that provably attains the minimum over *all*
//! drawings, so the search space is pinned down instead: all loop-free words
//! realizing the diagram with at most `min_crossings(p) + extra` crossing
//! events, every schedule of the required cups and caps, and optionally a
//! few extra cup/cap pairs ("wiggles"). Values `-1` and `0` are certified
//! exact outright; higher values are flagged exact only when the whole
//! declared space was swept with at least one wiggle pair available, and are
//! otherwise honest upper bounds. The stratified census of small cases is
//! pinned by tests and would fail loudly if the model drifted.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::fmt;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::diagram::{
    all_pair_partitions, polar_decompose, Label, PairPartition, ScaledDiagram, SetPartition,
};
use crate::picture::{Event, SliceWord};
use crate::rng::SplitMix64;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Exactness {
    Exact,
    UpperBound,
}

#[derive(Clone, Debug)]
pub struct HeightResult {
    pub value: i64,
    pub certificate: SliceWord,
    pub exactness: Exactness,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    /// Crossing events allowed beyond the minimal crossing number.
    pub extra_crossings: usize,
    /// Extra cup/cap pairs beyond the arcs the diagram requires.
    pub wiggle_pairs: usize,
    /// Hard cap on explored search states.
    pub node_limit: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            extra_crossings: 2,
            wiggle_pairs: 1,
            node_limit: 50_000_000,
        }
    }
}

impl SearchBudget {
    /// Cheaper space for larger arities: required cups and caps only.
    pub fn lean() -> Self {
        SearchBudget {
            extra_crossings: 2,
            wiggle_pairs: 0,
            node_limit: 50_000_000,
        }
    }

    pub fn for_arity(n: usize, m: usize) -> Self {
        if n + m <= 6 {
            SearchBudget::default()
        } else {
            SearchBudget::lean()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeightError {
    DeskCapExceeded { n: usize, m: usize },
    OddBoundary { n: usize, m: usize },
}

impl fmt::Display for HeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightError::DeskCapExceeded { n, m } => {
                write!(f, "enumeration of J({n},{m}) exceeds the desk-scale cap")
            }
            HeightError::OddBoundary { n, m } => {
                write!(f, "J({n},{m}) is empty: odd number of boundary points")
            }
        }
    }
}

impl core::error::Error for HeightError {}

/// Minimal number of chord crossings of the pairing read around the frame
/// (north left to right, then south right to left).
pub fn min_crossings(p: &PairPartition) -> usize {
    let n = p.n();
    let m = p.m();
    let pos = |x: Label| -> usize {
        if x > 0 {
            (x - 1) as usize
        } else {
            n + (m - (-x) as usize)
        }
    };
    let chords: Vec<(usize, usize)> = p
        .pairs()
        .map(|(a, b)| {
            let (pa, pb) = (pos(a), pos(b));
            (pa.min(pb), pa.max(pb))
        })
        .collect();
    let mut count = 0;
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            let (a1, b1) = chords[i];
            let (a2, b2) = chords[j];
            if (a1 < a2 && a2 < b1 && b1 < b2) || (a2 < a1 && a1 < b2 && b2 < b1) {
                count += 1;
            }
        }
    }
    count
}

/// True iff the pairing is planar, equivalently iff its height is `-1`.
pub fn is_noncrossing(p: &PairPartition) -> bool {
    min_crossings(p) == 0
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Conn {
    North(Label),
    /// One open end of a cup line; the two ends of a line share `id`.
    /// `dest` is the 1-based southern point this end is committed to, or 0
    /// for wiggle material that a later cap must absorb.
    Twin { id: u32, dest: Label },
}

/// The face arrangement of the partial picture, grown strip by strip along
/// the search path so that each completed word costs one short BFS. A
/// virtual event-free band on top carries the initial faces; the strips
/// below attach through zero-weight boundary edges exactly as in
/// [`crate::picture::FaceGraph`].
struct PictureState {
    adj: Vec<Vec<(u32, u8)>>,
    crossings: Vec<[u32; 4]>,
    bottom: Vec<u32>,
    frames: Vec<Frame>,
    dist: Vec<u32>,
    queue: alloc::collections::VecDeque<u32>,
}

struct Frame {
    saved_bottom: Vec<u32>,
    faces_before: usize,
    crossings_before: usize,
    /// nodes that received one adjacency entry each, in push order
    edge_log: Vec<u32>,
}

impl PictureState {
    fn new(n: usize) -> Self {
        let mut adj: Vec<Vec<(u32, u8)>> = (0..=n).map(|_| Vec::new()).collect();
        for g in 0..n {
            adj[g].push(((g + 1) as u32, 1));
            adj[g + 1].push((g as u32, 1));
        }
        PictureState {
            adj,
            crossings: Vec::new(),
            bottom: (0..=n as u32).collect(),
            frames: Vec::new(),
            dist: Vec::new(),
            queue: alloc::collections::VecDeque::new(),
        }
    }

    fn push_edge(&mut self, a: u32, b: u32, w: u8, log: &mut Vec<u32>) {
        self.adj[a as usize].push((b, w));
        self.adj[b as usize].push((a, w));
        log.push(a);
        log.push(b);
    }

    fn push(&mut self, event: Event) {
        let k = self.bottom.len() - 1;
        let strip = crate::picture::strip_for(event, k);
        let offset = self.adj.len();
        let mut frame = Frame {
            saved_bottom: self.bottom.clone(),
            faces_before: offset,
            crossings_before: self.crossings.len(),
            edge_log: Vec::new(),
        };
        self.adj.resize_with(offset + strip.faces, Vec::new);
        let mut log = core::mem::take(&mut frame.edge_log);
        for &(a, b) in &strip.edges {
            self.push_edge((offset + a) as u32, (offset + b) as u32, 1, &mut log);
        }
        for g in 0..=k {
            let above = self.bottom[g];
            self.push_edge(above, (offset + strip.top[g]) as u32, 0, &mut log);
        }
        frame.edge_log = log;
        if let Some(c) = strip.crossing {
            self.crossings.push([
                (offset + c[0]) as u32,
                (offset + c[1]) as u32,
                (offset + c[2]) as u32,
                (offset + c[3]) as u32,
            ]);
        }
        self.bottom = strip.bottom.iter().map(|&f| (offset + f) as u32).collect();
        self.frames.push(frame);
    }

    fn pop(&mut self) {
        let frame = self.frames.pop().expect("pop matches push");
        for &node in frame.edge_log.iter().rev() {
            self.adj[node as usize].pop();
        }
        self.adj.truncate(frame.faces_before);
        self.crossings.truncate(frame.crossings_before);
        self.bottom = frame.saved_bottom;
    }

    /// Height of the current picture by 0/1 BFS from the leftmost face.
    fn height(&mut self) -> i64 {
        if self.crossings.is_empty() {
            return -1;
        }
        let n = self.adj.len();
        self.dist.clear();
        self.dist.resize(n, u32::MAX);
        self.queue.clear();
        self.dist[0] = 0;
        self.queue.push_back(0);
        while let Some(v) = self.queue.pop_front() {
            let dv = self.dist[v as usize];
            for &(w, weight) in &self.adj[v as usize] {
                let nd = dv + u32::from(weight);
                if nd < self.dist[w as usize] {
                    self.dist[w as usize] = nd;
                    if weight == 0 {
                        self.queue.push_front(w);
                    } else {
                        self.queue.push_back(w);
                    }
                }
            }
        }
        self.crossings
            .iter()
            .map(|faces| {
                faces
                    .iter()
                    .map(|&f| self.dist[f as usize])
                    .min()
                    .unwrap() as i64
            })
            .max()
            .unwrap()
    }
}

struct Search<'a> {
    target: &'a PairPartition,
    /// north label -> its partner (north label or negative south label)
    partner: BTreeMap<Label, Label>,
    /// southern arcs (s, t) with s < t, as positive indices
    arcs: Vec<(Label, Label)>,
    cross_budget: usize,
    wiggle_budget: usize,
    node_limit: u64,
    nodes: u64,
    truncated: bool,
    best: Option<(i64, SliceWord)>,
    stop_at: i64,
    events: Vec<Event>,
    picture: PictureState,
    /// visit every completed word instead of minimizing (left-simple scans)
    collect: Option<Vec<SliceWord>>,
}

impl<'a> Search<'a> {
    fn new(target: &'a PairPartition, budget: &SearchBudget) -> Self {
        let mut partner = BTreeMap::new();
        for (a, b) in target.pairs() {
            if a > 0 {
                partner.insert(a, b);
            }
            if b > 0 {
                partner.insert(b, a);
            }
        }
        let arcs = target
            .southern_arcs()
            .into_iter()
            .map(|(a, b)| (-a, -b))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        Search {
            target,
            partner,
            arcs,
            cross_budget: min_crossings(target) + budget.extra_crossings,
            wiggle_budget: budget.wiggle_pairs,
            node_limit: budget.node_limit,
            nodes: 0,
            truncated: false,
            best: None,
            stop_at: if is_noncrossing(target) { -1 } else { 0 },
            events: Vec::new(),
            picture: PictureState::new(target.n()),
            collect: None,
        }
    }

    fn offer(&mut self, word: SliceWord, height: i64) {
        if let Some(bag) = &mut self.collect {
            bag.push(word);
            return;
        }
        match &self.best {
            Some((bh, bw))
                if *bh < height || (*bh == height && bw.to_string() <= word.to_string()) => {}
            _ => self.best = Some((height, word)),
        }
    }

    fn done(&self) -> bool {
        if self.collect.is_some() {
            return false;
        }
        matches!(&self.best, Some((h, _)) if *h <= self.stop_at)
    }

    fn finalize_if_valid(&mut self, conn: &[Conn]) {
        let m = self.target.m();
        if conn.len() != m {
            return;
        }
        for (j, c) in conn.iter().enumerate() {
            let south = -((j + 1) as Label);
            match *c {
                Conn::North(a) => {
                    if self.partner[&a] != south {
                        return;
                    }
                }
                Conn::Twin { dest, .. } => {
                    if dest != (j + 1) as Label {
                        return;
                    }
                }
            }
        }
        let word = SliceWord::new(self.target.n(), self.events.clone())
            .expect("search emits well-formed words");
        let height = self.picture.height();
        self.offer(word, height);
    }

    /// Crossings any completion still needs: inversions among lines with
    /// committed destinations, plus committed lines trapped between the two
    /// ends of a pending northern arc, plus interleaved pending arcs.
    fn crossings_lower_bound(&self, conn: &[Conn]) -> usize {
        let mut forced = Vec::new(); // (position, destination)
        let mut arcs: Vec<(usize, usize)> = Vec::new();
        let mut seen_arc_starts: BTreeMap<Label, usize> = BTreeMap::new();
        for (pos, c) in conn.iter().enumerate() {
            match *c {
                Conn::North(a) => {
                    let partner = self.partner[&a];
                    if partner < 0 {
                        forced.push((pos, -partner));
                    } else if let Some(&start) = seen_arc_starts.get(&partner) {
                        arcs.push((start, pos));
                    } else {
                        seen_arc_starts.insert(a, pos);
                    }
                }
                Conn::Twin { dest, .. } => {
                    if dest > 0 {
                        forced.push((pos, dest));
                    }
                }
            }
        }
        let mut lb = 0;
        for i in 0..forced.len() {
            for j in i + 1..forced.len() {
                if forced[i].1 > forced[j].1 {
                    lb += 1;
                }
            }
        }
        for &(s, e) in &arcs {
            lb += forced.iter().filter(|&&(p, _)| p > s && p < e).count();
        }
        for i in 0..arcs.len() {
            for j in i + 1..arcs.len() {
                let (a1, b1) = arcs[i];
                let (a2, b2) = arcs[j];
                if (a1 < a2 && a2 < b1 && b1 < b2) || (a2 < a1 && a1 < b2 && b2 < b1) {
                    lb += 1;
                }
            }
        }
        lb
    }

    fn feasible(&self, conn: &[Conn], crossings_used: usize) -> bool {
        crossings_used + self.crossings_lower_bound(conn) <= self.cross_budget
    }

    fn dfs(
        &mut self,
        conn: &[Conn],
        crossings_used: usize,
        wiggles_used: usize,
        arcs_mask: u32,
        next_cup_id: u32,
    ) {
        if self.done() || self.truncated {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.truncated = true;
            return;
        }
        self.finalize_if_valid(conn);

        let k = conn.len();
        let prev = self.events.last().copied();

        // Canonical order: an event strictly left of an independent
        // predecessor is enumerated in the swapped order instead.
        let commutes_left = |q: usize| -> bool {
            match prev {
                Some(Event::Cross(p)) | Some(Event::Cap(p)) | Some(Event::Cup(p)) => q + 2 < p,
                None => false,
            }
        };

        // Caps. Committed ends are never absorbed.
        for q in 0..k.saturating_sub(1) {
            let (a, b) = (conn[q], conn[q + 1]);
            let legal = match (a, b) {
                (Conn::North(x), Conn::North(y)) => self.partner[&x] == y,
                (Conn::Twin { id: x, dest: dx }, Conn::Twin { id: y, dest: dy }) => {
                    x != y && dx == 0 && dy == 0
                }
                (Conn::North(_), Conn::Twin { dest, .. })
                | (Conn::Twin { dest, .. }, Conn::North(_)) => dest == 0,
            };
            if !legal || commutes_left(q + 1) {
                continue;
            }
            // A cap undoing the cup just made is a removable zigzag.
            if let Some(Event::Cup(p)) = prev {
                if q + 1 == p.saturating_sub(1) || q + 1 == p + 1 {
                    continue;
                }
            }
            let mut next = conn.to_vec();
            let rewired = match (a, b) {
                (Conn::North(_), Conn::North(_)) => None,
                (Conn::North(x), Conn::Twin { id, .. })
                | (Conn::Twin { id, .. }, Conn::North(x)) => Some((id, Conn::North(x))),
                (Conn::Twin { id: t1, .. }, Conn::Twin { id: t2, .. }) => {
                    Some((t2, Conn::Twin { id: t1, dest: 0 }))
                }
            };
            next.drain(q..=q + 1);
            if let Some((from, to)) = rewired {
                for c in next.iter_mut() {
                    if matches!(*c, Conn::Twin { id, .. } if id == from) {
                        *c = to;
                    }
                }
            }
            if self.feasible(&next, crossings_used) {
                self.events.push(Event::Cap(q + 1));
                self.picture.push(Event::Cap(q + 1));
                self.dfs(&next, crossings_used, wiggles_used, arcs_mask, next_cup_id);
                self.picture.pop();
                self.events.pop();
            }
        }

        // Cups: either committed to an unused southern arc (left end to the
        // smaller point; the two ends of one line never cross), or wiggle
        // material within budget.
        let arcs = self.arcs.clone();
        for q in 0..=k {
            if commutes_left(q + 1) {
                continue;
            }
            for (ai, &(s, t)) in arcs.iter().enumerate() {
                if arcs_mask & (1 << ai) != 0 {
                    continue;
                }
                let mut next = conn.to_vec();
                next.insert(q, Conn::Twin { id: next_cup_id, dest: s });
                next.insert(q + 1, Conn::Twin { id: next_cup_id, dest: t });
                if self.feasible(&next, crossings_used) {
                    self.events.push(Event::Cup(q + 1));
                    self.picture.push(Event::Cup(q + 1));
                    self.dfs(
                        &next,
                        crossings_used,
                        wiggles_used,
                        arcs_mask | (1 << ai),
                        next_cup_id + 1,
                    );
                    self.picture.pop();
                    self.events.pop();
                }
            }
            if wiggles_used < self.wiggle_budget {
                let mut next = conn.to_vec();
                next.insert(q, Conn::Twin { id: next_cup_id, dest: 0 });
                next.insert(q + 1, Conn::Twin { id: next_cup_id, dest: 0 });
                if self.feasible(&next, crossings_used) {
                    self.events.push(Event::Cup(q + 1));
                    self.picture.push(Event::Cup(q + 1));
                    self.dfs(
                        &next,
                        crossings_used,
                        wiggles_used + 1,
                        arcs_mask,
                        next_cup_id + 1,
                    );
                    self.picture.pop();
                    self.events.pop();
                }
            }
        }

        // Crossings. A line crossing itself is removable, so same-id ends
        // never cross.
        if crossings_used < self.cross_budget {
            for q in 0..k.saturating_sub(1) {
                if commutes_left(q + 1) {
                    continue;
                }
                // An immediate double crossing is a removable bigon.
                if prev == Some(Event::Cross(q + 1)) {
                    continue;
                }
                if let (Conn::Twin { id: x, .. }, Conn::Twin { id: y, .. }) = (conn[q], conn[q + 1])
                {
                    if x == y {
                        continue;
                    }
                }
                let mut next = conn.to_vec();
                next.swap(q, q + 1);
                if self.feasible(&next, crossings_used + 1) {
                    self.events.push(Event::Cross(q + 1));
                    self.picture.push(Event::Cross(q + 1));
                    self.dfs(&next, crossings_used + 1, wiggles_used, arcs_mask, next_cup_id);
                    self.picture.pop();
                    self.events.pop();
                }
            }
        }
    }

    fn run(mut self) -> (Option<(i64, SliceWord)>, bool, Option<Vec<SliceWord>>) {
        if self.collect.is_none() {
            // Seed with a constructive realization so the early-stop check
            // can bite from the start.
            let seed = canonical_word(self.target);
            let h = seed.picture_height();
            self.offer(seed, h);
        }
        let conn: Vec<Conn> = (1..=self.target.n() as Label).map(Conn::North).collect();
        self.dfs(&conn, 0, 0, 0, 0);
        (self.best, self.truncated, self.collect)
    }
}

/// A word realizing `p` built from its polar decomposition: cap the northern
/// arcs innermost first, sort the propagating lines, then mirror for the
/// southern half. Always succeeds; used to seed the search.
pub fn canonical_word(p: &PairPartition) -> SliceWord {
    let (left, mid, right) = polar_decompose(p);
    let w_left = north_half_word(&left);
    let r = mid.len();
    // Bubble-sort the permutation into crossings.
    let mut images: Vec<usize> = (0..r).map(|i| mid.apply(i)).collect();
    let mut mid_events = Vec::new();
    loop {
        let mut swapped = false;
        for i in 0..r.saturating_sub(1) {
            if images[i] > images[i + 1] {
                images.swap(i, i + 1);
                mid_events.push(Event::Cross(i + 1));
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    let w_mid = SliceWord::new(r, mid_events).expect("bubble sort is well-formed");
    let w_right = north_half_word(&right.flip()).vflip();
    w_left
        .stack(&w_mid)
        .and_then(|w| w.stack(&w_right))
        .expect("polar factors stack")
}

/// Word for a half diagram (northern arcs plus order-preserving propagating
/// lines): repeatedly walk the closest arc's right end over to its partner
/// and cap.
fn north_half_word(h: &PairPartition) -> SliceWord {
    #[derive(Clone, Copy, PartialEq)]
    enum Slot {
        Prop,
        Arc(Label, Label),
    }
    let mut slots: Vec<Slot> = (1..=h.n() as Label)
        .map(|i| {
            let partner = h.partner(i);
            if partner > 0 {
                Slot::Arc(i.min(partner), i.max(partner))
            } else {
                Slot::Prop
            }
        })
        .collect();
    let mut events = Vec::new();
    loop {
        // innermost pending arc: the two ends with the smallest gap
        let mut best: Option<(usize, usize, usize)> = None; // (gap, i, j)
        let mut first_pos: BTreeMap<(Label, Label), usize> = BTreeMap::new();
        for (pos, s) in slots.iter().enumerate() {
            if let Slot::Arc(a, b) = *s {
                if let Some(&i) = first_pos.get(&(a, b)) {
                    let gap = pos - i;
                    if best.is_none_or(|(g, _, _)| gap < g) {
                        best = Some((gap, i, pos));
                    }
                } else {
                    first_pos.insert((a, b), pos);
                }
            }
        }
        let Some((_, i, mut j)) = best else { break };
        while j > i + 1 {
            events.push(Event::Cross(j));
            slots.swap(j - 1, j);
            j -= 1;
        }
        events.push(Event::Cap(i + 1));
        slots.drain(i..=i + 1);
    }
    SliceWord::new(h.n(), events).expect("half word is well-formed")
}

/// Minimum of [`SliceWord::picture_height`] over the budgeted search space.
pub fn partition_height(p: &PairPartition, budget: &SearchBudget) -> HeightResult {
    let search = Search::new(p, budget);
    let (found, truncated, _) = search.run();
    let (value, certificate) = found.expect("the seeded search always yields a picture");
    let swept = !truncated && budget.wiggle_pairs >= 1;
    let exactness = if value <= 0 || swept {
        Exactness::Exact
    } else {
        Exactness::UpperBound
    };
    HeightResult {
        value,
        certificate,
        exactness,
    }
}

/// Every slice word for `p` in the budgeted space, for universally
/// quantified picture checks.
pub fn all_words_for(p: &PairPartition, budget: &SearchBudget) -> (Vec<SliceWord>, bool) {
    let mut search = Search::new(p, budget);
    search.collect = Some(Vec::new());
    let (_, truncated, bag) = search.run();
    (bag.unwrap_or_default(), truncated)
}

/// The height table of all pair partitions of `(n, m)`.
pub struct HeightTable {
    pub n: usize,
    pub m: usize,
    pub entries: BTreeMap<PairPartition, HeightResult>,
}

impl HeightTable {
    pub fn height(&self, p: &PairPartition) -> i64 {
        self.entries[p].value
    }

    pub fn histogram(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for r in self.entries.values() {
            *out.entry(r.value).or_insert(0) += 1;
        }
        out
    }

    /// All diagrams of height at most `l`, in canonical order.
    pub fn stratum_at_most(&self, l: i64) -> Vec<PairPartition> {
        self.entries
            .iter()
            .filter(|(_, r)| r.value <= l)
            .map(|(p, _)| p.clone())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Build the full table, then tighten square tables under composition: a
/// stacked pair of certificates is itself a picture of the product, so the
/// recorded minimum may only drop. A drop below a value that was claimed
/// exact would falsify the search model and panics.
pub fn enumerate_by_height(
    n: usize,
    m: usize,
    budget: &SearchBudget,
) -> Result<HeightTable, HeightError> {
    if (n + m) % 2 == 1 {
        return Err(HeightError::OddBoundary { n, m });
    }
    if n + m > 14 {
        return Err(HeightError::DeskCapExceeded { n, m });
    }
    let mut entries = BTreeMap::new();
    for p in all_pair_partitions(n, m) {
        let r = partition_height(&p, budget);
        entries.insert(p, r);
    }
    let mut table = HeightTable { n, m, entries };
    if n == m && n > 0 {
        tighten_by_composition(&mut table);
    }
    Ok(table)
}

/// Tighten a square table: a stacked pair of certificates is a picture of
/// the product, so recorded minima may drop when new pictures appear.
pub fn tighten_by_composition(table: &mut HeightTable) {
    let diagrams: Vec<PairPartition> = table.entries.keys().cloned().collect();
    loop {
        let mut improved = false;
        for p in &diagrams {
            for q in &diagrams {
                let (hp, hq) = (table.entries[p].value, table.entries[q].value);
                let bound = hp.max(hq);
                let product = ScaledDiagram::new(p.as_set_partition().clone())
                    .compose(&ScaledDiagram::new(q.as_set_partition().clone()))
                    .expect("square diagrams compose");
                let key = PairPartition::new(product.diagram).expect("product of pairs");
                let current = &table.entries[&key];
                if current.value <= bound {
                    continue;
                }
                let stacked = table.entries[p]
                    .certificate
                    .stack(&table.entries[q].certificate)
                    .expect("certificates stack");
                let h = stacked.picture_height();
                let current = table.entries.get_mut(&key).unwrap();
                if h < current.value {
                    assert!(
                        current.exactness != Exactness::Exact,
                        "stacked picture beats a height claimed exact; search model is wrong"
                    );
                    current.value = h;
                    current.certificate = stacked;
                    if h <= 0 {
                        current.exactness = Exactness::Exact;
                    }
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
}

/// Memoized height tables, keyed by arity and built on demand with
/// [`SearchBudget::for_arity`].
#[derive(Default)]
pub struct HeightCache {
    tables: BTreeMap<(usize, usize), HeightTable>,
}

impl HeightCache {
    pub fn new() -> Self {
        HeightCache::default()
    }

    pub fn table(&mut self, n: usize, m: usize) -> &HeightTable {
        self.tables.entry((n, m)).or_insert_with(|| {
            enumerate_by_height(n, m, &SearchBudget::for_arity(n, m))
                .expect("arity within desk-scale cap")
        })
    }

    /// Install a precomputed table (e.g. from a disk cache).
    pub fn insert(&mut self, table: HeightTable) {
        self.tables.insert((table.n, table.m), table);
    }

    pub fn contains(&self, n: usize, m: usize) -> bool {
        self.tables.contains_key(&(n, m))
    }

    /// Pair partitions of `(n, n)` with height at most `l`.
    pub fn stratum(&mut self, l: i64, n: usize, m: usize) -> Vec<PairPartition> {
        self.table(n, m).stratum_at_most(l)
    }
}

pub struct ClosureViolation {
    pub p: PairPartition,
    pub q: PairPartition,
    pub hp: i64,
    pub hq: i64,
    pub hpq: i64,
}

pub struct ClosureReport {
    pub checked: usize,
    pub violations: Vec<ClosureViolation>,
}

/// Check `height(p*q) <= max(height(p), height(q))` on `J_{<=l}(n,n)`,
/// exhaustively when `samples` is `None`, else on seeded random pairs.
pub fn check_closure(
    l: i64,
    n: usize,
    samples: Option<(usize, u64)>,
    cache: &mut HeightCache,
) -> ClosureReport {
    let diagrams = cache.stratum(l, n, n);
    let mut report = ClosureReport {
        checked: 0,
        violations: Vec::new(),
    };
    let check_pair = |p: &PairPartition, q: &PairPartition, cache: &mut HeightCache| {
        let product = ScaledDiagram::new(p.as_set_partition().clone())
            .compose(&ScaledDiagram::new(q.as_set_partition().clone()))
            .unwrap();
        let key = PairPartition::new(product.diagram).unwrap();
        let table = cache.table(n, n);
        let (hp, hq, hpq) = (
            table.entries[p].value,
            table.entries[q].value,
            table.entries[&key].value,
        );
        if hpq > hp.max(hq) {
            return Some(ClosureViolation {
                p: p.clone(),
                q: q.clone(),
                hp,
                hq,
                hpq,
            });
        }
        None
    };
    match samples {
        None => {
            for p in &diagrams {
                for q in &diagrams {
                    report.checked += 1;
                    if let Some(v) = check_pair(p, q, cache) {
                        report.violations.push(v);
                    }
                }
            }
        }
        Some((count, seed)) => {
            let mut rng = SplitMix64::new(seed);
            for _ in 0..count {
                let p = diagrams[rng.below(diagrams.len())].clone();
                let q = diagrams[rng.below(diagrams.len())].clone();
                report.checked += 1;
                if let Some(v) = check_pair(&p, &q, cache) {
                    report.violations.push(v);
                }
            }
        }
    }
    report
}

/// Multiplicative closure of a diagram generating set (loop powers dropped).
pub fn closure_of(generators: &[PairPartition], limit: usize) -> BTreeSet<PairPartition> {
    let mut set: BTreeSet<PairPartition> = generators.iter().cloned().collect();
    let mut frontier: Vec<PairPartition> = set.iter().cloned().collect();
    while let Some(g) = frontier.pop() {
        let snapshot: Vec<PairPartition> = set.iter().cloned().collect();
        for h in snapshot {
            for (a, b) in [(&g, &h), (&h, &g)] {
                let prod = ScaledDiagram::new(a.as_set_partition().clone())
                    .compose(&ScaledDiagram::new(b.as_set_partition().clone()))
                    .unwrap();
                let key = PairPartition::new(prod.diagram).unwrap();
                if set.insert(key.clone()) {
                    assert!(set.len() <= limit, "closure exceeded limit {limit}");
                    frontier.push(key);
                }
            }
        }
    }
    set
}

/// Closure of the diagram monoid generated by `{e_i} u {sigma_j : j <= l+1}`
/// together with the enumerated height stratum.
pub fn monoid_closure(l: i64, n: usize, cache: &mut HeightCache) -> BTreeSet<PairPartition> {
    let mut gens: Vec<PairPartition> = cache.stratum(l, n, n);
    gens.push(PairPartition::identity(n));
    for i in 1..n {
        let e_i = PairPartition::new(
            SetPartition::identity(i - 1)
                .tensor(&SetPartition::cap_cup())
                .tensor(&SetPartition::identity(n - i - 1)),
        )
        .unwrap();
        gens.push(e_i);
        if (i as i64) <= l + 1 {
            gens.push(PairPartition::new(SetPartition::sigma(i, n)).unwrap());
        }
    }
    let limit = {
        // (2n-1)!!
        let mut f = 1usize;
        let mut k = 1;
        while k < 2 * n {
            f *= k;
            k += 2;
        }
        f
    };
    closure_of(&gens, limit)
}

pub struct LeftSimpleReport {
    pub count: usize,
    pub members: Vec<PairPartition>,
    /// Some examined word ruled these out.
    pub rejected: Vec<(PairPartition, SliceWord)>,
    pub truncated: bool,
}

/// Bounded-search count of partitions in `J_{<=l}(n,n)` all of whose
/// examined pictures are left-simple.
pub fn count_left_simple(
    n: usize,
    l: i64,
    budget: &SearchBudget,
    cache: &mut HeightCache,
) -> LeftSimpleReport {
    let diagrams = cache.stratum(l, n, n);
    let mut report = LeftSimpleReport {
        count: 0,
        members: Vec::new(),
        rejected: Vec::new(),
        truncated: false,
    };
    for p in diagrams {
        let (mut words, truncated) = all_words_for(&p, budget);
        words.push(canonical_word(&p));
        report.truncated |= truncated;
        match words.iter().find(|w| !w.is_left_simple()) {
            Some(w) => report.rejected.push((p, w.clone())),
            None => {
                report.count += 1;
                report.members.push(p);
            }
        }
    }
    report
}
