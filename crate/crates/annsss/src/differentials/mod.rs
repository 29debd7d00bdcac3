//! The filtered total differential: Khovanov, Bar-Natan, Szabó and tree terms.

mod cobordism;
mod config;

pub use cobordism::{
    birth_map, circle_complex, death_map, filtration_degree, saddle_map, with_circle, CircleKind, CobordismDegreeLedger,
};
pub use config::{
    classify_szabo, contributions, ConfigArc, Contribution, Endpoint, Kind, ResolutionConfig, SzaboType,
};

use rayon::prelude::*;

use crate::braid_diagram::State;
use crate::chain_complex::{Chain, Cube, Generator, GradingTriple};
use crate::f2_linalg::BitMatrix;

/// Which families of terms to include, and up to which configuration index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Terms {
    pub szabo: bool,
    pub trees: bool,
    pub max_index: usize,
}

impl Terms {
    pub const ALL: Terms = Terms { szabo: true, trees: true, max_index: usize::MAX };
    pub const SZABO: Terms = Terms { szabo: true, trees: false, max_index: usize::MAX };
    pub const KHOVANOV: Terms = Terms { szabo: true, trees: false, max_index: 1 };

    pub fn up_to(self, max_index: usize) -> Terms {
        Terms { max_index, ..self }
    }

    fn admits(&self, kind: Kind, index: usize) -> bool {
        index <= self.max_index && if kind.is_szabo() { self.szabo } else { self.trees }
    }
}

/// One nonzero matrix entry with its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    pub source: Generator,
    pub target: Generator,
    pub kind: Kind,
    pub index: usize,
    pub parts: u32,
}

pub fn enumerate_configs(cube: &Cube) -> Vec<ResolutionConfig> {
    let full = full_mask(cube);
    (0..=full).flat_map(|u| supersets(u, full).map(move |v| ResolutionConfig::new(cube, u, v))).collect()
}

fn full_mask(cube: &Cube) -> State {
    (1u64 << cube.diagram().crossing_count()) - 1
}

/// Proper supersets of `u` inside `full`.
fn supersets(u: State, full: State) -> impl Iterator<Item = State> {
    let free = full & !u;
    let mut sub = free;
    std::iter::from_fn(move || {
        if sub == 0 {
            return None;
        }
        let v = u | sub;
        sub = (sub - 1) & free;
        Some(v)
    })
}

fn scatter(bits: u64, slots: impl Iterator<Item = usize>) -> u64 {
    slots.enumerate().fold(0, |acc, (b, slot)| acc | (bits >> b & 1) << slot)
}

/// Entries of the differential leaving state `u`, restricted to sources accepted by `only`.
fn entries_from(cube: &Cube, u: State, terms: Terms, only: Option<u64>) -> Vec<Entry> {
    let mut out = Vec::new();
    for v in supersets(u, full_mask(cube)) {
        let index = (v & !u).count_ones() as usize;
        if index > terms.max_index {
            continue;
        }
        let cfg = ResolutionConfig::new(cube, u, v);
        for c in contributions(&cfg) {
            if !terms.admits(c.kind, index) {
                continue;
            }
            let src_active = scatter(c.source, cfg.start.iter().copied());
            let tgt_active = scatter(c.target, cfg.end.iter().copied());
            let np = cfg.passive.len();
            for p in 0..1u64 << np {
                let src = src_active | scatter(p, cfg.passive.iter().map(|x| x.0));
                if only.is_some_and(|l| l != src) {
                    continue;
                }
                let tgt = tgt_active | scatter(p, cfg.passive.iter().map(|x| x.1));
                out.push(Entry {
                    source: Generator { state: u, labels: src },
                    target: Generator { state: v, labels: tgt },
                    kind: c.kind,
                    index,
                    parts: c.parts,
                });
            }
        }
    }
    out
}

/// Every nonzero entry of the selected differential, in source-state order.
pub fn differential_entries(cube: &Cube, terms: Terms) -> Vec<Entry> {
    let full = full_mask(cube);
    let per_state: Vec<Vec<Entry>> = (0..=full).into_par_iter().map(|u| entries_from(cube, u, terms, None)).collect();
    per_state.into_iter().flatten().collect()
}

/// The differential as sparse columns: `cols[j]` lists the generators hit by generator `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Differential {
    cols: Vec<Vec<u32>>,
}

impl Differential {
    pub fn from_columns(cols: Vec<Vec<u32>>) -> Self {
        Self { cols }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.cols
    }

    pub fn nonzeros(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn to_bitmatrix(&self) -> BitMatrix {
        let cols: Vec<Vec<usize>> = self.cols.iter().map(|c| c.iter().map(|&i| i as usize).collect()).collect();
        BitMatrix::from_column_lists(self.dim(), &cols)
    }

    /// Whether the differential squares to zero, checked column by column.
    pub fn squares_to_zero(&self) -> bool {
        self.cols.par_iter().all(|col| {
            let mut acc: Vec<u32> = col.iter().flat_map(|&k| self.cols[k as usize].iter().copied()).collect();
            acc.sort_unstable();
            cancel_pairs(acc).is_empty()
        })
    }
}

fn cancel_pairs(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    let mut out = Vec::with_capacity(v.len());
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(v[i]);
        }
        i = j;
    }
    out
}

pub fn assemble(cube: &Cube, entries: &[Entry]) -> Differential {
    let index = cube.index();
    let mut cols: Vec<Vec<u32>> = vec![Vec::new(); index.len()];
    for e in entries {
        cols[index.index_of(&e.source)].push(index.index_of(&e.target) as u32);
    }
    Differential { cols: cols.into_par_iter().map(cancel_pairs).collect() }
}

/// The total differential restricted to `terms` (use [`Terms::ALL`] for the full complex).
pub fn total_differential(cube: &Cube, terms: Terms) -> Differential {
    assemble(cube, &differential_entries(cube, terms))
}

fn apply(cube: &Cube, g: &Generator, terms: Terms, kinds: &[Kind]) -> Chain {
    entries_from(cube, g.state, terms, Some(g.labels))
        .into_iter()
        .filter(|e| kinds.contains(&e.kind))
        .map(|e| e.target)
        .collect()
}

/// The Khovanov differential over F2[x]/(x^2).
pub fn d1(cube: &Cube, g: &Generator) -> Chain {
    apply(cube, g, Terms::ALL.up_to(1), &[Kind::D1])
}

/// The Bar-Natan correction: x*x = x on merges, 1 -> 1⊗1 on splits.
pub fn h1(cube: &Cube, g: &Generator) -> Chain {
    apply(cube, g, Terms::ALL.up_to(1), &[Kind::H1])
}

/// Higher Szabó terms d_2 + ... + d_depth.
pub fn szabo_d(cube: &Cube, g: &Generator, depth: usize) -> Chain {
    apply(cube, g, Terms::ALL.up_to(depth), &[Kind::DA, Kind::DB, Kind::DC, Kind::DD, Kind::DE])
}

/// Higher tree terms h_2 + ... + h_depth.
pub fn sss_h(cube: &Cube, g: &Generator, depth: usize) -> Chain {
    apply(cube, g, Terms::ALL.up_to(depth), &[Kind::HTree])
}

/// Grading change of an entry.
pub fn shift(cube: &Cube, e: &Entry) -> GradingTriple {
    let a = cube.gradings(&e.source);
    let b = cube.gradings(&e.target);
    GradingTriple { h: b.h - a.h, q: b.q - a.q, k: b.k - a.k }
}

/// Whether an entry's grading change is one the tridegree decomposition allows: `d_i`
/// shifts `(h, q)` by `(i, 2i - 2)` and `k` by `-2`, `0` or `2` (not `2` when `i = 1`);
/// `h_i` shifts `(h, q)` by `(i, 2i)` and `k` by an even amount in `[0, i + 1]` per tree.
///
/// A union of `p` trees of total index `i` can reach `i + p`, so the per-entry bound is
/// `i + e.parts`; [`shift_allowed_single`] is the single-tree table.
pub fn shift_allowed(s: GradingTriple, e: &Entry) -> bool {
    shift_within(s, e.index, e.kind, e.parts as i64)
}

pub fn shift_allowed_single(s: GradingTriple, index: usize, kind: Kind) -> bool {
    shift_within(s, index, kind, 1)
}

fn shift_within(s: GradingTriple, index: usize, kind: Kind, parts: i64) -> bool {
    let i = index as i64;
    if s.h != i {
        return false;
    }
    if kind.is_szabo() {
        s.q == 2 * i - 2 && [-2, 0, 2].contains(&s.k) && !(i == 1 && s.k == 2)
    } else {
        s.q == 2 * i && s.k % 2 == 0 && (0..=i + parts).contains(&s.k)
    }
}

fn bits(x: u64, n: usize) -> String {
    (0..n).map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// One line per entry: `u-state, source-labels -> v-state, target-labels, (dh, dq, dk), kind`.
pub fn dump(cube: &Cube, entries: &[Entry]) -> String {
    let c = cube.diagram().crossing_count();
    let mut out = String::new();
    for e in entries {
        let s = shift(cube, e);
        let ns = cube.index().circle_count(e.source.state);
        let nt = cube.index().circle_count(e.target.state);
        out.push_str(&format!(
            "{}, {} -> {}, {}, ({}, {}, {}), {}\n",
            bits(e.source.state, c),
            bits(e.source.labels, ns),
            bits(e.target.state, c),
            bits(e.target.labels, nt),
            s.h,
            s.q,
            s.k,
            e.kind
        ));
    }
    out
}
