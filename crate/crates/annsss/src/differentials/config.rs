//! Resolution configurations and their contributions to the total differential.

use std::fmt;

use crate::braid_diagram::{ArcAt, State};
use crate::chain_complex::Cube;

/// Arc endpoint on an active circle: `circle` indexes the configuration's start (or end) list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Endpoint {
    pub circle: usize,
    pub pos: u32,
    pub inside: bool,
}

/// A surgery arc of the configuration together with its dual arc in the ending resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConfigArc {
    pub crossing: usize,
    pub tail: Endpoint,
    pub head: Endpoint,
    pub dual_tail: Endpoint,
    pub dual_head: Endpoint,
}

impl ConfigArc {
    pub fn is_self(&self) -> bool {
        self.tail.circle == self.head.circle
    }

    pub fn dual_is_self(&self) -> bool {
        self.dual_tail.circle == self.dual_head.circle
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionConfig {
    pub u: State,
    pub v: State,
    pub index: usize,
    /// Active circles of the starting resolution (circle ids at `u`).
    pub start: Vec<usize>,
    /// Active circles of the ending resolution (circle ids at `v`).
    pub end: Vec<usize>,
    pub start_len: Vec<u32>,
    pub end_len: Vec<u32>,
    pub arcs: Vec<ConfigArc>,
    /// Untouched circles as `(id at u, id at v)`.
    pub passive: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    D1,
    H1,
    DA,
    DB,
    DC,
    DD,
    DE,
    HTree,
}

impl Kind {
    pub fn is_szabo(self) -> bool {
        !matches!(self, Kind::H1 | Kind::HTree)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::D1 => "d1",
            Kind::H1 => "h1",
            Kind::DA => "dA",
            Kind::DB => "dB",
            Kind::DC => "dC",
            Kind::DD => "dD",
            Kind::DE => "dE",
            Kind::HTree => "hTree",
        })
    }
}

/// Labeling patterns on the active circles; bit `i` refers to `start[i]` / `end[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Contribution {
    pub source: u64,
    pub target: u64,
    pub kind: Kind,
    /// Connected pieces carrying arcs (1 except for unions of trees and dual trees).
    pub parts: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SzaboType {
    A,
    B,
    C,
    D,
    E,
}

impl ResolutionConfig {
    pub fn new(cube: &Cube, u: State, v: State) -> Self {
        assert!(u & v == u && u != v, "configurations need u < v");
        let gu = &cube.geoms[u as usize];
        let gv = &cube.geoms[v as usize];
        let flipped = v & !u;
        let crossings: Vec<usize> = (0..64).filter(|c| flipped >> c & 1 == 1).collect();

        let mut start_slot = vec![usize::MAX; gu.circles.len()];
        let mut start = Vec::new();
        let mut end_slot = vec![usize::MAX; gv.circles.len()];
        let mut end = Vec::new();
        for &c in &crossings {
            for e in [gu.arcs[c].tail, gu.arcs[c].head] {
                if start_slot[e.circle] == usize::MAX {
                    start_slot[e.circle] = start.len();
                    start.push(e.circle);
                }
            }
            for e in [gv.arcs[c].tail, gv.arcs[c].head] {
                if end_slot[e.circle] == usize::MAX {
                    end_slot[e.circle] = end.len();
                    end.push(e.circle);
                }
            }
        }
        let slot = |a: &ArcAt, slots: &[usize]| {
            let f = |e: crate::braid_diagram::ArcEnd| Endpoint { circle: slots[e.circle], pos: e.pos, inside: e.inside };
            (f(a.tail), f(a.head))
        };
        let arcs = crossings
            .iter()
            .map(|&c| {
                let (tail, head) = slot(&gu.arcs[c], &start_slot);
                let (dual_tail, dual_head) = slot(&gv.arcs[c], &end_slot);
                ConfigArc { crossing: c, tail, head, dual_tail, dual_head }
            })
            .collect();
        let passive: Vec<(usize, usize)> = (0..gu.circles.len())
            .filter(|&i| start_slot[i] == usize::MAX)
            .map(|i| {
                let key = gu.circles[i].key;
                let j = gv.circles.iter().position(|c| c.key == key).expect("passive circle persists");
                (i, j)
            })
            .collect();
        debug_assert_eq!(passive.len() + end.len(), gv.circles.len());
        Self {
            u,
            v,
            index: crossings.len(),
            start_len: start.iter().map(|&i| gu.circles[i].len).collect(),
            end_len: end.iter().map(|&i| gv.circles[i].len).collect(),
            start,
            end,
            arcs,
            passive,
        }
    }

    /// Whether the arcs connect all active starting circles.
    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.start.len());
        for a in &self.arcs {
            uf.union(a.tail.circle, a.head.circle);
        }
        (0..self.start.len()).all(|i| uf.find(i) == uf.find(0))
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn all_ones(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Whether chord `b` separates the endpoints of chord `a` on a common circle.
fn linked(a: (u32, u32), b: (u32, u32)) -> bool {
    let (lo, hi) = (a.0.min(a.1), a.0.max(a.1));
    let between = |x: u32| lo < x && x < hi;
    between(b.0) != between(b.1)
}

/// For linked chords on opposite sides of a circle: walking counterclockwise from the tail of
/// the inside chord, is the first endpoint of the outside chord its tail? The answer does not
/// depend on which side is called inside, so it is a chirality of the pair on the sphere.
fn chirality(inside: (u32, u32), outside: (u32, u32), len: u32) -> bool {
    let d = |x: u32| (x + len - inside.0) % len;
    d(outside.0) < d(outside.1)
}

/// Type C rule on one circle: every inside chord links every outside chord with chirality `want`.
fn ladder(chords: &[(u32, u32, bool)], len: u32, want: bool) -> bool {
    let inside: Vec<_> = chords.iter().filter(|c| c.2).collect();
    let outside: Vec<_> = chords.iter().filter(|c| !c.2).collect();
    if inside.is_empty() || outside.is_empty() {
        return false;
    }
    inside.iter().all(|a| {
        outside.iter().all(|b| linked((a.0, a.1), (b.0, b.1)) && chirality((a.0, a.1), (b.0, b.1), len) == want)
    })
}

/// Chirality required of Type C pairs; Type D pairs (measured on dual arcs) need the opposite,
/// because Type D is the mirror of the dual.
const C_CHIRALITY: bool = true;

/// Two starting circles joined by co-oriented arcs.
fn type_a(cfg: &ResolutionConfig) -> Option<Contribution> {
    let t = cfg.arcs[0].tail.circle;
    (cfg.start.len() == 2 && cfg.arcs.iter().all(|a| !a.is_self() && a.tail.circle == t))
        .then_some(Contribution { source: 0, target: 0, kind: Kind::DA, parts: 1 })
}

/// Two ending circles joined by co-oriented dual arcs.
fn type_b(cfg: &ResolutionConfig) -> Option<Contribution> {
    let t = cfg.arcs[0].dual_tail.circle;
    (cfg.end.len() == 2 && cfg.arcs.iter().all(|a| !a.dual_is_self() && a.dual_tail.circle == t)).then_some(Contribution {
        source: all_ones(cfg.start.len()),
        target: 0b11,
        kind: Kind::DB,
        parts: 1,
    })
}

fn type_c(cfg: &ResolutionConfig) -> Option<Contribution> {
    if cfg.start.len() != 1 {
        return None;
    }
    let chords: Vec<_> = cfg.arcs.iter().map(|a| (a.tail.pos, a.head.pos, a.tail.inside)).collect();
    ladder(&chords, cfg.start_len[0], C_CHIRALITY).then_some(Contribution { source: 0, target: 0, kind: Kind::DC, parts: 1 })
}

fn type_d(cfg: &ResolutionConfig) -> Option<Contribution> {
    if cfg.end.len() != 1 {
        return None;
    }
    let chords: Vec<_> = cfg.arcs.iter().map(|a| (a.dual_tail.pos, a.dual_head.pos, a.dual_tail.inside)).collect();
    ladder(&chords, cfg.end_len[0], !C_CHIRALITY).then_some(Contribution {
        source: all_ones(cfg.start.len()),
        target: 1,
        kind: Kind::DD,
        parts: 1,
    })
}

/// Star-shaped configurations around a special starting circle `S` labeled `+`: every other
/// starting circle is `-` and meets exactly one arc, which runs to `S`; the remaining arcs are
/// chords of `S` that each split off a piece. The ending circles are `+` except one special
/// `-` circle, and every non-special ending circle meets exactly one dual arc. In one
/// orientation class all merge arcs point into `S` and every dual chord points into the
/// special ending circle (the special piece lies to the left of each chord); the other class
/// is the reverse.
fn type_e(cfg: &ResolutionConfig) -> Vec<Contribution> {
    let (na, nb) = (cfg.start.len(), cfg.end.len());
    let mut out = Vec::new();
    let mut dual_count = vec![0usize; nb];
    for a in &cfg.arcs {
        dual_count[a.dual_tail.circle] += 1;
        dual_count[a.dual_head.circle] += 1;
    }
    for s in 0..na {
        let mut count = vec![0usize; na];
        let (mut into_s, mut out_of_s, mut chords) = (0, 0, Vec::new());
        let mut star = true;
        for a in &cfg.arcs {
            count[a.tail.circle] += 1;
            count[a.head.circle] += 1;
            match (a.tail.circle == s, a.head.circle == s) {
                (true, true) => chords.push(a),
                (false, true) => into_s += 1,
                (true, false) => out_of_s += 1,
                (false, false) => star = false,
            }
        }
        if !star || (0..na).any(|j| j != s && count[j] != 1) || nb != 1 + chords.len() {
            continue;
        }
        for forward in [true, false] {
            if (forward && out_of_s > 0) || (!forward && into_s > 0) {
                continue;
            }
            for t in 0..nb {
                if (0..nb).any(|j| j != t && dual_count[j] != 1) {
                    continue;
                }
                let oriented = chords.iter().all(|a| {
                    let into = if forward { a.dual_head.circle } else { a.dual_tail.circle };
                    !a.dual_is_self() && into == t
                });
                if oriented {
                    out.push(Contribution { source: all_ones(na) & !(1 << s), target: 1 << t, kind: Kind::DE, parts: 1 });
                }
            }
        }
    }
    out
}

/// Disjoint unions of trees (all `-` circles merging to one `-` circle) and dual trees
/// (one `+` circle splitting into `+` circles).
fn forest(cfg: &ResolutionConfig) -> Option<Contribution> {
    let na = cfg.start.len();
    let mut uf = UnionFind::new(na);
    for a in &cfg.arcs {
        uf.union(a.tail.circle, a.head.circle);
    }
    let mut arcs = vec![0usize; na];
    let mut starts = vec![0usize; na];
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); na];
    for a in &cfg.arcs {
        let r = uf.find(a.tail.circle);
        arcs[r] += 1;
        for e in [a.dual_tail.circle, a.dual_head.circle] {
            if !ends[r].contains(&e) {
                ends[r].push(e);
            }
        }
    }
    for i in 0..na {
        let r = uf.find(i);
        starts[r] += 1;
    }
    let (mut source, mut target) = (0u64, 0u64);
    for r in 0..na {
        if starts[r] == 0 {
            continue;
        }
        if starts[r] == arcs[r] + 1 && ends[r].len() == 1 {
            for i in 0..na {
                if uf.find(i) == r {
                    source |= 1 << i;
                }
            }
            target |= 1 << ends[r][0];
        } else if !(starts[r] == 1 && ends[r].len() == arcs[r] + 1) {
            return None;
        }
    }
    let parts = (0..na).filter(|&r| arcs[r] > 0).count() as u32;
    Some(Contribution { source, target, kind: Kind::HTree, parts })
}

/// Shapes among Types A-E that the configuration realizes (for some labeling).
pub fn classify_szabo(cfg: &ResolutionConfig) -> Vec<SzaboType> {
    let mut out = Vec::new();
    if !cfg.is_connected() {
        return out;
    }
    if type_a(cfg).is_some() {
        out.push(SzaboType::A);
    }
    if type_b(cfg).is_some() {
        out.push(SzaboType::B);
    }
    if type_c(cfg).is_some() {
        out.push(SzaboType::C);
    }
    if type_d(cfg).is_some() {
        out.push(SzaboType::D);
    }
    if !type_e(cfg).is_empty() {
        out.push(SzaboType::E);
    }
    out
}

/// All labeled contributions of a configuration. Index-1 Szabó terms are reported as `d1` and
/// index-1 forest terms as `h1`.
pub fn contributions(cfg: &ResolutionConfig) -> Vec<Contribution> {
    let mut out = Vec::new();
    if cfg.is_connected() {
        out.extend(type_a(cfg));
        out.extend(type_b(cfg));
        out.extend(type_c(cfg));
        out.extend(type_d(cfg));
        out.extend(type_e(cfg));
    }
    out.extend(forest(cfg));
    if cfg.index == 1 {
        for c in &mut out {
            c.kind = if c.kind == Kind::HTree { Kind::H1 } else { Kind::D1 };
        }
    }
    out
}
