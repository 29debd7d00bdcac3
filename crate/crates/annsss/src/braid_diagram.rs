//! Braid words, their annular closures drawn on a rectilinear grid, and complete resolutions.
//!
//! Grid layout (all vertex coordinates even, all probe points odd, so ray casting never
//! touches a vertex): strand column `j` sits at `x = 8j`; level `k` occupies
//! `8k <= y <= 8k + 8`; closure arc `j` leaves the top of column `j`, runs left at height
//! `8L + 4j`, down at `x = -4j`, and back right at `y = -4j`. The axis point sits at `(1, 1)`
//! inside every closure arc, and the seam is the leftward horizontal ray from it.

use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// Cube vertex: bit `c` is the smoothing chosen at crossing `c`.
pub type State = u64;

pub(crate) const SCALE: i64 = 8;

/// Axis basepoint of the annulus.
pub const AXIS: (i64, i64) = (1, 1);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    n: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<i32>) -> Result<Self, ParseError> {
        if n == 0 {
            return Err(ParseError::Prefix("n=0".into()));
        }
        for &l in &letters {
            if l == 0 {
                return Err(ParseError::Token(l.to_string()));
            }
            if l.unsigned_abs() as usize >= n {
                return Err(ParseError::OutOfRange { token: l.to_string(), n });
            }
        }
        Ok(Self { n, letters })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, Vec::new()).expect("identity braid is valid")
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    /// Markov stabilization: the same word in one more strand, followed by `σ_n^{±1}`.
    pub fn stabilized(&self, positive: bool) -> Self {
        let mut letters = self.letters.clone();
        let g = self.n as i32;
        letters.push(if positive { g } else { -g });
        Self { n: self.n + 1, letters }
    }

    pub fn inverse(&self) -> Self {
        Self { n: self.n, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn concat(&self, other: &BraidWord) -> Self {
        let n = self.n.max(other.n);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { n, letters }
    }

    /// Side-by-side placement: `other` acts on strands `n+1 ..= n+n'`.
    pub fn juxtapose(&self, other: &BraidWord) -> Self {
        let shift = self.n as i32;
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().map(|&l| l + l.signum() * shift));
        Self { n: self.n + other.n, letters }
    }

    /// Cyclic rotation of the word by one letter (a conjugate).
    pub fn rotated(&self) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(1);
        }
        Self { n: self.n, letters }
    }

    /// Strand permutation: `perm[j]` is the top position of the strand starting at bottom `j`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.n).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut perm = vec![0; self.n];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    /// Components of the closure, as the cycle index of each bottom position.
    pub fn component_of_strand(&self) -> (usize, Vec<usize>) {
        let perm = self.permutation();
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut j = s;
            while comp[j] == usize::MAX {
                comp[j] = count;
                j = perm[j];
            }
            count += 1;
        }
        (count, comp)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.n)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_braid(s)
    }
}

/// Parses `"n=<k>; l1 l2 ..."`; without the prefix, `n = 1 + max |l|` (or 1 for no letters).
pub fn parse_braid(text: &str) -> Result<BraidWord, ParseError> {
    let text = text.trim();
    let (n, body) = match text.split_once(';') {
        Some((head, body)) => {
            let head = head.trim();
            let value = head
                .strip_prefix("n=")
                .or_else(|| head.strip_prefix("n ="))
                .ok_or_else(|| ParseError::Prefix(head.to_string()))?;
            let n: usize =
                value.trim().parse().map_err(|_| ParseError::Prefix(head.to_string()))?;
            if n == 0 {
                return Err(ParseError::Prefix(head.to_string()));
            }
            (Some(n), body)
        }
        None => (None, text),
    };
    let mut letters = Vec::new();
    let mut tokens = Vec::new();
    for tok in body.split_whitespace() {
        let l: i32 = tok.parse().map_err(|_| ParseError::Token(tok.to_string()))?;
        if l == 0 {
            return Err(ParseError::Token(tok.to_string()));
        }
        letters.push(l);
        tokens.push(tok);
    }
    let n = n.unwrap_or_else(|| 1 + letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0));
    for (l, tok) in letters.iter().zip(&tokens) {
        if l.unsigned_abs() as usize >= n {
            return Err(ParseError::OutOfRange { token: tok.to_string(), n });
        }
    }
    BraidWord::new(n, letters)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Smoothing {
    /// Two vertical strands.
    Identity,
    /// A cap joining the bottoms of the two columns and a cup joining the tops.
    CupCap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    Crossing { positive: bool },
    Fixed(Smoothing),
}

/// One level of the braid box, acting on columns `col` and `col + 1` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub col: usize,
    pub kind: CellKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureDiagram {
    n: usize,
    cells: Vec<Cell>,
    crossing_cells: Vec<usize>,
    flipped: Vec<bool>,
    n_plus: usize,
    n_minus: usize,
    word: Option<BraidWord>,
}

impl ClosureDiagram {
    pub fn from_braid(word: &BraidWord) -> Self {
        let cells = word
            .letters()
            .iter()
            .map(|&l| Cell { col: l.unsigned_abs() as usize, kind: CellKind::Crossing { positive: l > 0 } })
            .collect();
        let mut d = Self::from_cells(word.strands(), cells);
        d.word = Some(word.clone());
        d
    }

    /// A closure of an arbitrary stack of cells; fixed smoothings make it a non-braid diagram.
    pub fn from_cells(n: usize, cells: Vec<Cell>) -> Self {
        assert!(n >= 1);
        for c in &cells {
            assert!(c.col >= 1 && c.col < n, "cell column out of range");
        }
        let crossing_cells: Vec<usize> = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| matches!(c.kind, CellKind::Crossing { .. }))
            .map(|(i, _)| i)
            .collect();
        let n_plus = cells.iter().filter(|c| c.kind == CellKind::Crossing { positive: true }).count();
        let n_minus = crossing_cells.len() - n_plus;
        let flipped = vec![false; crossing_cells.len()];
        Self { n, cells, crossing_cells, flipped, n_plus, n_minus, word: None }
    }

    /// Same diagram with the surgery arc at each flagged crossing oriented the other way.
    pub fn with_decoration(&self, flipped: Vec<bool>) -> Self {
        assert_eq!(flipped.len(), self.crossing_count());
        Self { flipped, ..self.clone() }
    }

    /// The diagram with crossing `c` replaced by its `bit`-smoothing; the geometry of every
    /// other cell is unchanged so circles correspond one-to-one with the parent's.
    pub fn resolved_at(&self, c: usize, bit: bool) -> Self {
        let mut cells = self.cells.clone();
        cells[self.crossing_cells[c]].kind = CellKind::Fixed(self.smoothing(c, bit));
        let mut flipped = self.flipped.clone();
        flipped.remove(c);
        let mut d = Self::from_cells(self.n, cells);
        d.flipped = flipped;
        d
    }

    pub fn word(&self) -> Option<&BraidWord> {
        self.word.as_ref()
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn levels(&self) -> usize {
        self.cells.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossing_cells.len()
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    pub fn crossing_cell(&self, c: usize) -> Cell {
        self.cells[self.crossing_cells[c]]
    }

    pub fn crossing_level(&self, c: usize) -> usize {
        self.crossing_cells[c]
    }

    pub fn is_positive(&self, c: usize) -> bool {
        matches!(self.crossing_cell(c).kind, CellKind::Crossing { positive: true })
    }

    /// The 0-smoothing of a positive crossing is the identity, of a negative one the cup-cap.
    pub fn smoothing(&self, c: usize, bit: bool) -> Smoothing {
        match (self.is_positive(c), bit) {
            (true, false) | (false, true) => Smoothing::Identity,
            _ => Smoothing::CupCap,
        }
    }

    /// State of the braid-like oriented resolution.
    pub fn oriented_state(&self) -> State {
        (0..self.crossing_count()).filter(|&c| !self.is_positive(c)).fold(0, |s, c| s | 1 << c)
    }

    pub fn resolve(&self, state: State) -> Resolution {
        let g = self.geometry(state);
        let circles = g
            .circles
            .iter()
            .enumerate()
            .map(|(id, c)| Circle { id, nontrivial: c.nontrivial, depth: c.depth, seam_crossings: c.seam_crossings })
            .collect();
        Resolution { state, circles }
    }

    pub fn embedding(&self, state: State) -> GridEmbedding {
        let g = self.geometry(state);
        GridEmbedding { curves: g.circles.into_iter().map(|c| c.polygon).collect() }
    }

    fn port(&self, j: usize, k: usize) -> usize {
        k * self.n + (j - 1)
    }

    fn port_point(j: usize, k: usize) -> (i64, i64) {
        (SCALE * j as i64, SCALE * k as i64)
    }

    pub(crate) fn geometry(&self, state: State) -> StateGeometry {
        let levels = self.cells.len();
        let mut edges: Vec<Edge> = Vec::new();
        // Per crossing: (tail edge, head edge) of the arc of the current smoothing.
        let mut arc_edges: Vec<(usize, usize)> = Vec::with_capacity(self.crossing_count());
        let mut cell_probe: Vec<(i64, i64)> = Vec::with_capacity(self.crossing_count());
        let mut crossing_idx = 0;
        for (k, cell) in self.cells.iter().enumerate() {
            let i = cell.col;
            for j in 1..=self.n {
                if j != i && j != i + 1 {
                    edges.push(self.vertical(j, k));
                }
            }
            let smoothing = match cell.kind {
                CellKind::Crossing { .. } => self.smoothing(crossing_idx, state >> crossing_idx & 1 == 1),
                CellKind::Fixed(s) => s,
            };
            let (first, second) = match smoothing {
                Smoothing::Identity => {
                    edges.push(self.vertical(i, k));
                    edges.push(self.vertical(i + 1, k));
                    (edges.len() - 2, edges.len() - 1)
                }
                Smoothing::CupCap => {
                    let (x0, x1, y) = (SCALE * i as i64, SCALE * (i as i64 + 1), SCALE * k as i64);
                    edges.push(Edge {
                        a: self.port(i, k),
                        b: self.port(i + 1, k),
                        pts: vec![(x0, y), (x0, y + 2), (x1, y + 2), (x1, y)],
                        closure: false,
                    });
                    edges.push(Edge {
                        a: self.port(i, k + 1),
                        b: self.port(i + 1, k + 1),
                        pts: vec![(x0, y + SCALE), (x0, y + 6), (x1, y + 6), (x1, y + SCALE)],
                        closure: false,
                    });
                    (edges.len() - 2, edges.len() - 1)
                }
            };
            if let CellKind::Crossing { positive } = cell.kind {
                let bit = state >> crossing_idx & 1 == 1;
                // Default directions: positive 0-arc points right, its dual up; negative
                // 0-arc points up, its dual left. Duals are quarter-turns counterclockwise.
                let forward = match (positive, bit) {
                    (true, false) | (true, true) | (false, false) => true,
                    (false, true) => false,
                };
                let forward = forward != self.flipped[crossing_idx];
                arc_edges.push(if forward { (first, second) } else { (second, first) });
                cell_probe.push((SCALE * i as i64 + 5, SCALE * k as i64 + 5));
                crossing_idx += 1;
            }
        }
        for j in 1..=self.n {
            let (x, top) = (SCALE * j as i64, SCALE * levels as i64);
            let r = 4 * j as i64;
            edges.push(Edge {
                a: self.port(j, levels),
                b: self.port(j, 0),
                pts: vec![(x, top), (x, top + r), (-r, top + r), (-r, -r), (x, -r), (x, 0)],
                closure: true,
            });
        }
        trace(self.n * (levels + 1), edges, &arc_edges, &cell_probe)
    }

    fn vertical(&self, j: usize, k: usize) -> Edge {
        let (x, y) = Self::port_point(j, k);
        Edge { a: self.port(j, k), b: self.port(j, k + 1), pts: vec![(x, y), (x, y + SCALE)], closure: false }
    }
}

struct Edge {
    a: usize,
    b: usize,
    pts: Vec<(i64, i64)>,
    closure: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    pub id: usize,
    pub nontrivial: bool,
    pub depth: usize,
    pub seam_crossings: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub state: State,
    pub circles: Vec<Circle>,
}

impl Resolution {
    pub fn nontrivial_count(&self) -> usize {
        self.circles.iter().filter(|c| c.nontrivial).count()
    }
}

/// Rectilinear closed curves of a resolution, one per circle, in circle order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridEmbedding {
    pub curves: Vec<Vec<(i64, i64)>>,
}

impl GridEmbedding {
    /// Number of times circle `i` winds around `p` mod 2 (ray cast to the left).
    pub fn encloses(&self, i: usize, p: (i64, i64)) -> bool {
        encloses(&self.curves[i], p)
    }
}

/// Even-odd containment of an odd-coordinate probe point by a rectilinear polygon.
pub(crate) fn encloses(poly: &[(i64, i64)], p: (i64, i64)) -> bool {
    let mut inside = false;
    for w in 0..poly.len() {
        let (x1, y1) = poly[w];
        let (x2, y2) = poly[(w + 1) % poly.len()];
        if x1 == x2 && x1 < p.0 && y1.min(y2) < p.1 && p.1 < y1.max(y2) {
            inside = !inside;
        }
    }
    inside
}

#[derive(Clone, Debug)]
pub(crate) struct CircleGeom {
    /// Smallest port on the circle; stable between resolutions for untouched circles.
    pub key: usize,
    pub nontrivial: bool,
    pub seam_crossings: usize,
    pub depth: usize,
    /// Number of edges along the circle; arc endpoint positions live in `0..len`.
    pub len: u32,
    pub polygon: Vec<(i64, i64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct ArcEnd {
    pub circle: usize,
    /// Position along the counterclockwise traversal of the circle.
    pub pos: u32,
    /// Whether the arc lies in the bounded disk of this circle.
    pub inside: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct ArcAt {
    pub tail: ArcEnd,
    pub head: ArcEnd,
}

#[derive(Clone, Debug)]
pub(crate) struct StateGeometry {
    pub circles: Vec<CircleGeom>,
    /// Per crossing, the surgery arc of the smoothing chosen there.
    pub arcs: Vec<ArcAt>,
}

impl StateGeometry {
    pub fn nontrivial_mask(&self) -> u64 {
        self.circles.iter().enumerate().filter(|(_, c)| c.nontrivial).fold(0, |m, (i, _)| m | 1 << i)
    }
}

fn signed_area2(poly: &[(i64, i64)]) -> i64 {
    (0..poly.len())
        .map(|w| {
            let (x1, y1) = poly[w];
            let (x2, y2) = poly[(w + 1) % poly.len()];
            x1 * y2 - x2 * y1
        })
        .sum()
}

fn trace(ports: usize, edges: Vec<Edge>, arc_edges: &[(usize, usize)], probes: &[(i64, i64)]) -> StateGeometry {
    // adjacency: each port has exactly two (edge, end) incidences.
    let mut adj: Vec<Vec<(usize, u8)>> = vec![Vec::with_capacity(2); ports];
    for (e, edge) in edges.iter().enumerate() {
        adj[edge.a].push((e, 0));
        adj[edge.b].push((e, 1));
    }
    debug_assert!(adj.iter().all(|a| a.len() == 2));

    let mut seen = vec![false; edges.len()];
    // Per loop: edge sequence, polygon, closure-arc count, smallest port.
    type Loop = (Vec<usize>, Vec<(i64, i64)>, usize, usize);
    let mut raw: Vec<Loop> = Vec::new();
    for start in 0..edges.len() {
        if seen[start] {
            continue;
        }
        let mut seq = Vec::new();
        let mut pts: Vec<(i64, i64)> = Vec::new();
        let mut closures = 0;
        let mut key = usize::MAX;
        let (mut e, mut from) = (start, 0u8);
        loop {
            seen[e] = true;
            seq.push(e);
            let edge = &edges[e];
            closures += edge.closure as usize;
            key = key.min(edge.a).min(edge.b);
            let forward = from == 0;
            let iter: Box<dyn Iterator<Item = &(i64, i64)>> =
                if forward { Box::new(edge.pts.iter()) } else { Box::new(edge.pts.iter().rev()) };
            for (idx, &p) in iter.enumerate() {
                if idx == 0 && !pts.is_empty() {
                    continue;
                }
                pts.push(p);
            }
            let to = 1 - from;
            let port = if to == 0 { edge.a } else { edge.b };
            let &(ne, nend) = adj[port].iter().find(|&&inc| inc != (e, to)).expect("port has two incidences");
            if ne == start && nend == 0 {
                break;
            }
            e = ne;
            from = nend;
        }
        pts.pop();
        if signed_area2(&pts) < 0 {
            seq.reverse();
            pts.reverse();
        }
        raw.push((seq, pts, closures, key));
    }
    raw.sort_by_key(|r| r.3);

    let mut circle_of_edge = vec![0usize; edges.len()];
    let mut pos_of_edge = vec![0u32; edges.len()];
    for (ci, (seq, ..)) in raw.iter().enumerate() {
        for (p, &e) in seq.iter().enumerate() {
            circle_of_edge[e] = ci;
            pos_of_edge[e] = p as u32;
        }
    }
    let depths: Vec<usize> = raw
        .iter()
        .enumerate()
        .map(|(ci, (_, pts, ..))| {
            let probe = (pts[0].0 + 1, pts[0].1 + 1);
            raw.iter().enumerate().filter(|(cj, (_, other, ..))| *cj != ci && encloses(other, probe)).count()
        })
        .collect();
    let arcs = arc_edges
        .iter()
        .zip(probes)
        .map(|(&(t, h), &probe)| {
            let end = |e: usize| {
                let circle = circle_of_edge[e];
                ArcEnd { circle, pos: pos_of_edge[e], inside: encloses(&raw[circle].1, probe) }
            };
            ArcAt { tail: end(t), head: end(h) }
        })
        .collect();
    let circles = raw
        .into_iter()
        .zip(depths)
        .map(|((seq, polygon, closures, key), depth)| CircleGeom {
            key,
            nontrivial: closures % 2 == 1,
            seam_crossings: closures,
            depth,
            len: seq.len() as u32,
            polygon,
        })
        .collect();
    StateGeometry { circles, arcs }
}
